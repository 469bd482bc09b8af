//! Knowledge-driven program synthesis with PushGP.
//!
//! Problems are solved in sequence; the simplified best solution of each is
//! cut into equal-length subprograms that later runs splice into parents
//! through adaptive replacement mutation.

pub mod error;
pub mod evolution;
pub mod knowledge;
pub mod problem;
pub mod push;
pub mod rng;
pub mod runner;
pub mod stats;

pub use error::{Error, Result};
