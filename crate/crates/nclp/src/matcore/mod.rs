//! Block-diagonal complex matrix algebra: the numerical substrate.
//!
//! Everything here works in tracial coordinates with respect to the
//! unnormalized block trace. Functional calculus is defined on positive
//! elements only, so complex powers never face a branch choice.

mod algebra;
mod element;
mod linear_map;
pub mod spectral;
mod tolerance;

pub use algebra::BlockAlgebra;
pub use element::{CMatrix, Element};
pub use linear_map::LinearMap;
pub use spectral::{
    complex_power, func_calc, operator_norm, power_pos, singular_values, spectral_projection,
    support,
};
pub use tolerance::{ToleranceReport, Tolerances};
