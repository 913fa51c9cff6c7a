use crate::error::{Error, Result};
use crate::field::ScalarField;

use super::form::DifferentialForm;
use super::multi_index::MultiIndex;

/// Time-dependent spatial r-form on an n-dimensional space chart.
///
/// Coefficients are functions of `(t, x¹, …, xⁿ)`; internally the form is
/// stored already lifted to the `(n+1)`-dimensional product chart, with axis 0
/// the time axis and no `dt` factor in any term.
#[derive(Clone, Debug)]
pub struct TimeDependentForm {
    lifted: DifferentialForm,
}

impl TimeDependentForm {
    pub fn zero(space_dim: usize, degree: usize) -> Result<Self> {
        if degree > space_dim {
            return Err(Error::DegreeTooLarge {
                degree,
                dim: space_dim,
            });
        }
        Ok(Self {
            lifted: DifferentialForm::zero(space_dim + 1, degree)?,
        })
    }

    /// Terms are `(spatial axes, coefficient of (t, x))`, spatial axes
    /// numbered from 0.
    pub fn from_terms(
        space_dim: usize,
        degree: usize,
        terms: impl IntoIterator<Item = (Vec<usize>, ScalarField)>,
    ) -> Result<Self> {
        if degree > space_dim {
            return Err(Error::DegreeTooLarge {
                degree,
                dim: space_dim,
            });
        }
        let mut shifted = Vec::new();
        for (axes, f) in terms {
            if let Some(&axis) = axes.iter().find(|&&a| a >= space_dim) {
                return Err(Error::AxisOutOfRange {
                    axis,
                    dim: space_dim,
                });
            }
            shifted.push((axes.iter().map(|a| a + 1).collect(), f));
        }
        Ok(Self {
            lifted: DifferentialForm::from_terms(space_dim + 1, degree, shifted)?,
        })
    }

    pub fn scalar(space_dim: usize, f: ScalarField) -> Self {
        Self {
            lifted: DifferentialForm::scalar(space_dim + 1, f),
        }
    }

    /// A time-independent spatial form.
    pub fn from_static(form: &DifferentialForm) -> Self {
        let n = form.dim();
        let proj: Vec<ScalarField> = (1..=n).map(ScalarField::coord).collect();
        let lifted = form
            .rebuild(n + 1, |k| Some(k.shifted(1)), |f| f.compose(&proj))
            .with_degree(form.degree());
        Self { lifted }
    }

    /// Wrap a spacetime form that has no `dt` component.
    pub fn from_lifted(form: DifferentialForm) -> Result<Self> {
        if form.dim() == 0 {
            return Err(Error::InvalidDomain("spacetime needs a time axis".into()));
        }
        if let Some((k, _)) = form.coefficients().find(|(k, _)| k.contains(0)) {
            return Err(Error::InvalidParameters(format!(
                "term {k:?} of a spatial form contains dt"
            )));
        }
        Ok(Self { lifted: form })
    }

    pub fn space_dim(&self) -> usize {
        self.lifted.dim() - 1
    }

    pub fn degree(&self) -> usize {
        self.lifted.degree()
    }

    /// The same form read on the spacetime chart (indices shifted by one).
    pub fn lifted(&self) -> &DifferentialForm {
        &self.lifted
    }

    pub fn is_zero(&self) -> bool {
        self.lifted.is_zero()
    }

    /// Freeze time, giving a form on the n-dimensional space chart.
    pub fn at_time(&self, t: f64) -> DifferentialForm {
        let n = self.space_dim();
        let inner: Vec<ScalarField> = std::iter::once(ScalarField::constant(t))
            .chain((0..n).map(ScalarField::coord))
            .collect();
        self.lifted
            .rebuild(n, |k| Some(k.shifted(-1)), |f| f.compose(&inner))
            .with_degree(self.degree())
    }

    /// Coefficient-wise `∂/∂t`.
    pub fn time_derivative(&self) -> Self {
        Self {
            lifted: self.lifted.map_coefficients(|f| f.partial(0)),
        }
    }

    /// Exterior derivative in the spatial variables only, time held fixed.
    pub fn spatial_derivative(&self) -> Self {
        let n = self.space_dim();
        if self.degree() >= n {
            return Self::zero(n, n).expect("degree n is valid");
        }
        let d = self.lifted.exterior_derivative();
        let lifted = d
            .rebuild(
                n + 1,
                |k| (!k.contains(0)).then(|| k.clone()),
                |f| f.clone(),
            )
            .with_degree(self.degree() + 1);
        Self { lifted }
    }

    /// Value of the coefficient of `dx^{axes}` (spatial axes) at `(t, x)`.
    pub fn eval_component(&self, axes: &[usize], t: f64, x: &[f64]) -> f64 {
        let shifted: Vec<usize> = axes.iter().map(|a| a + 1).collect();
        let mut p = Vec::with_capacity(x.len() + 1);
        p.push(t);
        p.extend_from_slice(x);
        self.lifted.eval_component(&shifted, &p)
    }

    pub fn coefficients(&self) -> impl Iterator<Item = (MultiIndex, &ScalarField)> {
        self.lifted.coefficients().map(|(k, f)| (k.shifted(-1), f))
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        Ok(Self {
            lifted: self.lifted.add(&other.lifted)?,
        })
    }

    pub fn sub(&self, other: &Self) -> Result<Self> {
        Ok(Self {
            lifted: self.lifted.sub(&other.lifted)?,
        })
    }

    pub fn scale(&self, c: f64) -> Self {
        Self {
            lifted: self.lifted.scale(c),
        }
    }
}

/// `β = ρ̇` at time `t`.
pub fn time_partial(family: &TimeDependentForm, t: f64) -> DifferentialForm {
    family.time_derivative().at_time(t)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn tx(i: usize) -> ScalarField {
        ScalarField::coord(i)
    }

    #[test]
    fn time_partial_examples() {
        let (a_x, t) = (2.0, 1.7);
        // ρ = a_x t dx
        let rho = TimeDependentForm::from_terms(1, 1, [(vec![0], tx(0) * a_x)]).unwrap();
        let beta = time_partial(&rho, t);
        assert_eq!(beta.dim(), 1);
        assert_eq!(beta.eval_component(&[0], &[0.3]), a_x);

        let still = TimeDependentForm::from_terms(2, 2, [(vec![0, 1], tx(1) * 1.5)]).unwrap();
        assert!(time_partial(&still, 0.4).is_zero());

        let sq = TimeDependentForm::from_terms(1, 1, [(vec![0], tx(0).powi(2))]).unwrap();
        assert_eq!(time_partial(&sq, 3.0).eval_component(&[0], &[0.0]), 6.0);
    }

    #[test]
    fn time_partial_by_differences() {
        let sq =
            TimeDependentForm::from_terms(1, 1, [(vec![0], ScalarField::from_fn(|p| p[0] * p[0]))])
                .unwrap();
        let v = time_partial(&sq, 3.0).eval_component(&[0], &[0.5]);
        assert!((v - 6.0).abs() < 1e-8);
    }

    #[test]
    fn static_and_slices_round_trip() {
        let f = DifferentialForm::term(2, &[0, 1], ScalarField::coord(0) * 3.0).unwrap();
        let lifted = TimeDependentForm::from_static(&f);
        assert_eq!(lifted.eval_component(&[0, 1], 9.0, &[2.0, 0.0]), 6.0);
        let back = lifted.at_time(-1.0);
        assert_eq!(back.eval_component(&[0, 1], &[2.0, 5.0]), 6.0);
    }

    #[test]
    fn spatial_derivative_ignores_time() {
        // J = -a_t t (0-form in 1D space): spatial dJ = 0
        let j = TimeDependentForm::scalar(1, tx(0) * -1.0);
        let dj = j.spatial_derivative();
        assert_eq!(dj.degree(), 1);
        assert!(dj.is_zero());
        // J = t r² dα on (r, α): dJ = 2 t r dr∧dα
        let j = TimeDependentForm::from_terms(2, 1, [(vec![1], tx(0) * tx(1).powi(2))]).unwrap();
        let dj = j.spatial_derivative();
        assert_eq!(dj.eval_component(&[0, 1], 2.0, &[3.0, 0.1]), 12.0);
    }

    #[test]
    fn lifted_rejects_dt_terms() {
        let with_dt = DifferentialForm::basis(2, &[0]).unwrap();
        assert!(TimeDependentForm::from_lifted(with_dt).is_err());
    }
}
