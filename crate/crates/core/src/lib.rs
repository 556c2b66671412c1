// `!(x > 0.0)` style checks deliberately treat NaN as a failure.
#![allow(clippy::neg_cmp_op_on_partial_ord)]
#![allow(clippy::needless_range_loop)]

pub mod assembly;
pub mod error;
pub mod geometry;
pub mod infsup;
pub mod linalg;
pub mod spaces;
pub mod splinecore;
pub mod studies;

pub use error::{Error, Result};
