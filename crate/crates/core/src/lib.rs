// `!(x > 0.0)` style guards are deliberate: they also reject NaN.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod caratheodory;
pub mod combinatorics;
pub mod epsnet;
pub mod error;
pub mod experiment;
pub mod geometry;
pub mod helly;
pub mod instance;
pub mod report;
pub mod tverberg;

pub use error::{Error, Result};
