//! De Rham currents evaluated by quadrature against smooth test forms.

mod current;
mod test_form;
mod verify;

pub use current::{boundary_current, eval_current, Current};
pub use test_form::{make_bump, TestForm, DEFAULT_BUMP_RADIUS};
pub use verify::{
    smooth_flux_current, verify_current_balance, CurrentBalanceReport, SignConvention, TestOutcome,
};
