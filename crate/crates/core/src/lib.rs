//! Bit-error rate and capacity of binary symmetric and Gaussian channels
//! whose noise variance is set by a Poisson-distributed impulse count.

pub mod awgn_capacity;
pub mod ber;
pub mod bsc_capacity;
pub mod channel;
pub mod cli;
pub mod error;
pub mod monte_carlo;
pub mod numerics;

pub use awgn_capacity::{AwgnParams, KnowledgeScenario};
pub use channel::{ChannelKind, ChannelParams};
pub use error::{Error, Result};
pub use numerics::{Bits, Probability};
