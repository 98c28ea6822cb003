// `!(x > 0.0)` style guards are used on purpose so that NaN inputs are rejected too.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod continuum;
pub mod error;
pub mod fcs;
pub mod lattice;
pub mod tmap;
pub mod specfun;

pub use error::{Error, Result};
