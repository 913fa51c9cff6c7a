use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::exterior::DifferentialForm;
use crate::field::ScalarField;
use crate::geometry::ChartDomain;

pub const DEFAULT_BUMP_RADIUS: f64 = 0.1;

/// Compactly supported smooth probe: a bump 0-form, or a bump times one
/// coordinate covector.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct TestForm {
    pub center: Vec<f64>,
    pub radius: f64,
    pub degree: usize,
    /// Covector axis of a 1-form probe; ignored for 0-forms.
    #[serde(default)]
    pub covector_axis: usize,
    pub amplitude: f64,
}

/// A bump whose closed support ball lies strictly inside `domain`.
pub fn make_bump(
    domain: &ChartDomain,
    center: &[f64],
    radius: f64,
    degree: usize,
    covector_axis: usize,
    amplitude: f64,
) -> Result<TestForm> {
    if !(radius > 0.0) || !radius.is_finite() {
        return Err(Error::InvalidTestForm(format!(
            "radius must be positive, got {radius}"
        )));
    }
    if degree > 1 {
        return Err(Error::InvalidTestForm(format!(
            "bump degree must be 0 or 1, got {degree}"
        )));
    }
    if degree == 1 && covector_axis >= domain.dim() {
        return Err(Error::AxisOutOfRange {
            axis: covector_axis,
            dim: domain.dim(),
        });
    }
    if !domain.contains_ball(center, radius) {
        return Err(Error::InvalidTestForm(format!(
            "ball of radius {radius} at {center:?} is not inside the domain"
        )));
    }
    for axis in 0..domain.dim() {
        if let Some(v) = domain.exclusion(axis) {
            if center[axis] - radius <= v {
                return Err(Error::InvalidTestForm(format!(
                    "support reaches the excluded value {v} on axis {axis}"
                )));
            }
        }
    }
    Ok(TestForm {
        center: center.to_vec(),
        radius,
        degree,
        covector_axis: if degree == 1 { covector_axis } else { 0 },
        amplitude,
    })
}

impl TestForm {
    pub fn field(&self) -> ScalarField {
        ScalarField::bump(&self.center, self.radius, self.amplitude)
    }

    pub fn to_form(&self) -> DifferentialForm {
        let dim = self.center.len();
        match self.degree {
            0 => DifferentialForm::scalar(dim, self.field()),
            _ => DifferentialForm::term(dim, &[self.covector_axis], self.field())
                .expect("axis checked at construction"),
        }
    }

    pub fn eval(&self, x: &[f64]) -> f64 {
        self.field().eval(x)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry::{stokes_residual, Chain, ParamCell, Quadrature};

    fn unit_box() -> ChartDomain {
        ChartDomain::new(vec![(0.0, 1.0), (0.0, 1.0)]).unwrap()
    }

    #[test]
    fn peak_and_outside() {
        let b = make_bump(&unit_box(), &[0.5, 0.5], 0.2, 0, 0, 3.0).unwrap();
        assert_eq!(b.eval(&[0.5, 0.5]), 3.0);
        assert_eq!(b.eval(&[0.5, 0.71]), 0.0);
        assert_eq!(b.eval(&[0.9, 0.9]), 0.0);
    }

    #[test]
    fn rejects_escaping_balls() {
        assert!(make_bump(&unit_box(), &[0.05, 0.5], 0.1, 0, 0, 1.0).is_err());
        assert!(make_bump(&unit_box(), &[0.5, 0.5], 0.1, 2, 0, 1.0).is_err());
        assert!(make_bump(&unit_box(), &[0.5, 0.5], 0.1, 1, 2, 1.0).is_err());
        let one_form = make_bump(&unit_box(), &[0.5, 0.5], 0.1, 1, 1, 1.0).unwrap();
        assert_eq!(one_form.to_form().degree(), 1);
    }

    #[test]
    fn derivative_integrates_to_zero_via_stokes() {
        let b = make_bump(&unit_box(), &[0.4, 0.6], 0.15, 0, 0, 1.0).unwrap();
        // a = φ dy, so da = ∂_x φ dx∧dy; the boundary term vanishes
        let a = DifferentialForm::term(2, &[1], b.field()).unwrap();
        let sq = Chain::single(ParamCell::axis_box(vec![0.0, 0.0], vec![1.0, 1.0]).unwrap());
        assert!(stokes_residual(&a, &sq, &Quadrature::default()).unwrap() < 1e-6);
    }
}
