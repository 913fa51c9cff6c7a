//! Differential forms on a single coordinate chart.
//!
//! Forms are sparse maps from increasing multi-indices to [`ScalarField`]
//! coefficients. All operations are pure and produce new forms.

mod form;
mod map;
mod multi_index;
mod time;
mod vector;

pub use form::DifferentialForm;
pub use map::SmoothMap;
pub use multi_index::MultiIndex;
pub use time::{time_partial, TimeDependentForm};
pub use vector::{VectorField, VolumeElement};


use crate::error::Result;

/// `a ∧ b`.
pub fn wedge(a: &DifferentialForm, b: &DifferentialForm) -> Result<DifferentialForm> {
    a.wedge(b)
}

/// `da`.
pub fn exterior_derivative(a: &DifferentialForm) -> DifferentialForm {
    a.exterior_derivative()
}

/// `v ⌟ a`.
pub fn contract(v: &VectorField, a: &DifferentialForm) -> Result<DifferentialForm> {
    a.contract(v)
}

/// `map* a`.
pub fn pullback(map: &SmoothMap, a: &DifferentialForm) -> Result<DifferentialForm> {
    a.pullback(map)
}
