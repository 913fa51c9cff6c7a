//! Chart domains, oriented parameterized chains, and integration of forms
//! over them.

mod cell;
mod domain;
mod integrate;
mod quadrature;

pub use cell::{chain_boundary, Chain, ParamCell};
pub use domain::ChartDomain;
pub use integrate::{integrate, stokes_residual};
pub use quadrature::{compensated_sum, GaussRule, Quadrature};
