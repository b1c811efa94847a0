//! Construction and auditing of protograph-based QC-LDPC codes with respect
//! to leafless elementary trapping sets (LETSs).

pub mod design;
pub mod error;
pub mod lets;
pub mod plan;
pub mod qc;
pub mod search;
pub mod sim;

pub use error::{Error, Result};
