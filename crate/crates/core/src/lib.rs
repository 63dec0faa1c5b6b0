//! Machine covering on related machines: exact oracle, monotone approximation
//! algorithms and a harness for checking monotonicity and approximation ratios.

pub mod baselines;
pub mod cli;
pub mod error;
pub mod fptas;
pub mod harness;
pub mod model;
pub mod next_cover;
pub mod oracle;
pub mod ptas;
pub mod rational;
pub mod two_machine;

pub use error::{Error, Result};
pub use model::{cover_of, evaluate, parse_instance, Assignment, CoverReport, Instance, InstanceDocument};
pub use rational::Rational;
