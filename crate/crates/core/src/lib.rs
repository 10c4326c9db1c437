//! Multicentric representations of piecewise-constant holomorphic functions,
//! the equivalent Hermite interpolation basis polynomial in four evaluation
//! forms, and the error-propagation experiments that compare them.

pub mod error;
pub mod evalerr;
pub mod exactarith;
pub mod experiment;
pub mod hermite;
pub mod lemniscate;
pub mod multicentric;
pub mod operator;
pub mod poly;
pub mod presets;

pub use error::{Error, Result};
