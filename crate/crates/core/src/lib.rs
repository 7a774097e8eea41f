pub mod arith;
pub mod cli;
pub mod error;
pub mod quot_vi;
mod serde_num;
pub mod symcalc;
pub mod triangle;

pub use error::{Error, Result};
