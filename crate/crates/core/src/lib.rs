pub mod commands;
pub mod dense;
pub mod error;
pub mod fermion;
pub mod gadget;
pub mod lro;
pub mod pauli;

pub use error::{Error, Result};
