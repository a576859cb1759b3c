//! Isochronicity conditions for Liénard-type planar polynomial systems:
//! exact power-series and Gröbner machinery, catalogued families with
//! certificates, and a numerical period-function scanner.

pub mod algebra;
pub mod conditions;
pub mod error;
pub mod groebner;
pub mod period;
pub mod series;
pub mod systems;
pub mod verify;

pub use error::{Error, Result};
