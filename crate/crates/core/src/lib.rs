//! Verification engine for finite real spectral triples on `H_F = M_{8x4}(C)`.

pub mod algebra;
pub mod catalog;
pub mod config;
pub mod error;
pub mod linalg;
pub mod morita;
pub mod report;
pub mod subspace;
pub mod triple;

pub use error::{Error, Result};
