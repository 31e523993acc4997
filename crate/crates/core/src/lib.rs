//! Numerical verification of the reciprocity relation between the
//! `(p/q)^{it}`-twisted second moment of `ζ(1/2 + it)` under a Gaussian
//! window and a dual second moment of even Dirichlet `L`-functions mod `p`.

pub mod calibration;
pub mod characters;
pub mod error;
pub mod lfunctions;
pub mod moments;
pub mod numerics;
pub mod oracles;

pub use error::{Error, Result};
