use crate::error::{Error, Result};
use crate::field::ScalarField;

use super::form::DifferentialForm;
use super::multi_index::MultiIndex;

/// Tangent vector field on a chart, one component field per axis.
#[derive(Clone, Debug)]
pub struct VectorField {
    components: Vec<ScalarField>,
}

impl VectorField {
    pub fn new(components: Vec<ScalarField>) -> Self {
        Self { components }
    }

    /// Coordinate basis field `∂_axis`.
    pub fn basis(dim: usize, axis: usize) -> Self {
        Self::new(
            (0..dim)
                .map(|i| ScalarField::constant(if i == axis { 1.0 } else { 0.0 }))
                .collect(),
        )
    }

    pub fn constant(values: &[f64]) -> Self {
        Self::new(values.iter().map(|&v| ScalarField::constant(v)).collect())
    }

    pub fn zero(dim: usize) -> Self {
        Self::constant(&vec![0.0; dim])
    }

    pub fn dim(&self) -> usize {
        self.components.len()
    }

    pub fn components(&self) -> &[ScalarField] {
        &self.components
    }

    pub fn eval(&self, x: &[f64]) -> Vec<f64> {
        self.components.iter().map(|c| c.eval(x)).collect()
    }

    pub fn scaled_by(&self, f: &ScalarField) -> Self {
        Self::new(self.components.iter().map(|c| c.mul(f)).collect())
    }
}

/// Top-degree form used to identify flux forms with vector fields.
#[derive(Clone, Debug)]
pub struct VolumeElement {
    form: DifferentialForm,
}

impl VolumeElement {
    pub fn new(form: DifferentialForm) -> Result<Self> {
        if form.degree() != form.dim() {
            return Err(Error::DegreeMismatch {
                expected: form.dim(),
                found: form.degree(),
            });
        }
        Ok(Self { form })
    }

    /// `density · dx⁰ ∧ … ∧ dx^{d-1}`.
    pub fn from_density(dim: usize, density: ScalarField) -> Self {
        let form = DifferentialForm::term(dim, &(0..dim).collect::<Vec<_>>(), density)
            .expect("top index is valid");
        Self { form }
    }

    pub fn standard(dim: usize) -> Self {
        Self::from_density(dim, ScalarField::one())
    }

    pub fn form(&self) -> &DifferentialForm {
        &self.form
    }

    pub fn dim(&self) -> usize {
        self.form.dim()
    }

    /// The single coefficient `θ_{0…d-1}`.
    pub fn density(&self) -> ScalarField {
        self.form
            .coefficient(&MultiIndex::top(self.dim()))
            .cloned()
            .unwrap_or_else(ScalarField::zero)
    }

    pub fn scaled(&self, f: &ScalarField) -> Self {
        Self::from_density(self.dim(), self.density().mul(f))
    }

    /// Fails at the first sample where the density vanishes.
    pub fn check_nonzero<'a>(&self, samples: impl IntoIterator<Item = &'a [f64]>) -> Result<()> {
        let density = self.density();
        for x in samples {
            if density.eval(x) == 0.0 {
                return Err(Error::DegenerateVolumeElement { point: x.to_vec() });
            }
        }
        Ok(())
    }
}
