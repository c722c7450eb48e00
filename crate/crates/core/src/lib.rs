// `!(x > 0.0)` style checks are deliberate: they reject NaN as well.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod coherent;
pub mod config;
pub mod energetics;
pub mod error;
pub mod integrate;
pub mod oracle;
pub mod pulse;
pub mod qubit;
pub mod runner;
pub mod single_photon;
pub mod units;

pub use error::{Error, Result};
