//! Formal integrability checks for systems of differential polynomials in
//! solved form over the rationals.

pub mod algebra;
pub mod cli;
pub mod error;
pub mod json;
pub mod multiindex;
pub mod normal;
pub mod oracle;
pub mod passivity;
pub mod problem;
pub mod ranking;
pub mod sample;
pub mod syzygy;

pub use error::{Error, Result};
