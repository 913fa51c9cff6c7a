//! Benchmark fixtures.

use formflux_core::currents::make_bump;
use formflux_core::exterior::DifferentialForm;
use formflux_core::field::ScalarField;
use formflux_core::geometry::{Chain, ChartDomain, ParamCell};

/// 1-form on the plane with polynomial coefficients of moderate size.
pub fn plane_one_form(shift: f64) -> DifferentialForm {
    let x = ScalarField::coord(0);
    let y = ScalarField::coord(1);
    let dx = DifferentialForm::term(2, &[0], &x * &y + shift).unwrap();
    let dy = DifferentialForm::term(2, &[1], x.powi(2) - y.powi(3)).unwrap();
    dx.add(&dy).unwrap()
}

pub fn unit_square() -> Chain {
    Chain::single(ParamCell::axis_box(vec![0.0, 0.0], vec![1.0, 1.0]).unwrap())
}

/// Top-degree bump test form on the square [0, 2]².
pub fn bump_top_form(center: &[f64]) -> DifferentialForm {
    let dom = ChartDomain::new(vec![(0.0, 2.0), (0.0, 2.0)]).unwrap();
    let f = make_bump(&dom, center, 0.25, 0, 0, 1.0).unwrap().field();
    DifferentialForm::term(2, &[0, 1], f).unwrap()
}
