pub mod algebra;
pub mod bun_chart;
pub mod curve;
pub mod emit;
pub mod error;
pub mod formula;
pub mod higgs;
pub mod hitchin;
pub mod nr_moduli;
pub mod sampling;
pub mod verify;

pub use error::{Error, Result};
