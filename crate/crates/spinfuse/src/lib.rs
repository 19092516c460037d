//! Trotter circuit synthesis and fixed-depth compression for free-fermionic
//! spin chains.

pub mod circuit;
pub mod cli;
pub mod compress;
pub mod error;
pub mod gates;
pub mod io;
pub mod models;
pub mod oracle;
pub mod qasm;
pub mod su2;

pub use error::{Error, Result};
