//! Differential-form machinery for flux, source and kinematic-velocity
//! computations on coordinate charts, plus the currents built from them.

pub mod balance;
pub mod currents;
pub mod error;
pub mod exterior;
pub mod field;
pub mod geometry;
pub mod kinematics;
pub mod scenarios;
pub mod spacetime;

pub use balance::{
    power_functional, region_balance_residual, spacetime_balance_residual,
    spacetime_power_functional, spatial_balance_residual, BalanceReport,
};
pub use currents::{
    boundary_current, eval_current, make_bump, smooth_flux_current, verify_current_balance,
    Current, CurrentBalanceReport, SignConvention, TestForm,
};
pub use error::{Error, Result};
pub use exterior::{
    contract, exterior_derivative, pullback, time_partial, wedge, DifferentialForm, MultiIndex,
    SmoothMap, TimeDependentForm, VectorField, VolumeElement,
};
pub use field::{Aabb, ScalarField, Support};
pub use geometry::{
    chain_boundary, integrate, stokes_residual, Chain, ChartDomain, ParamCell, Quadrature,
};
pub use kinematics::{
    flux_space_membership, integrate_worldline, kinematic_flux, kinematic_flux_at,
    volume_element_invariance, Worldline, WorldlineStatus,
};
pub use spacetime::{
    assemble_spacetime_flux, assemble_spacetime_source, extract_density, lift, project_flux,
    SpacetimeChart,
};
pub use scenarios::{by_name, CurrentSetup, ExpectedFact, FactOutcome, GrowthProfile, Scenario, ScenarioParams};
