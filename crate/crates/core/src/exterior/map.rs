use crate::field::ScalarField;

/// Smooth map `ℝ^k → ℝ^d` given by d component fields of k arguments.
#[derive(Clone, Debug)]
pub struct SmoothMap {
    source_dim: usize,
    components: Vec<ScalarField>,
}

impl SmoothMap {
    pub fn new(source_dim: usize, components: Vec<ScalarField>) -> Self {
        Self {
            source_dim,
            components,
        }
    }

    pub fn identity(dim: usize) -> Self {
        Self::new(dim, (0..dim).map(ScalarField::coord).collect())
    }

    /// Constant map from the 0-dimensional parameter space.
    pub fn point(p: &[f64]) -> Self {
        Self::new(0, p.iter().map(|&c| ScalarField::constant(c)).collect())
    }

    /// `u ↦ origin + Σ u_j · edges[j]`.
    pub fn affine(origin: &[f64], edges: &[Vec<f64>]) -> Self {
        let components = origin
            .iter()
            .enumerate()
            .map(|(i, &o)| {
                ScalarField::sum(
                    std::iter::once(ScalarField::constant(o)).chain(
                        edges
                            .iter()
                            .enumerate()
                            .map(|(j, e)| ScalarField::coord(j) * e[i]),
                    ),
                )
            })
            .collect();
        Self::new(edges.len(), components)
    }

    pub fn source_dim(&self) -> usize {
        self.source_dim
    }

    pub fn target_dim(&self) -> usize {
        self.components.len()
    }

    pub fn components(&self) -> &[ScalarField] {
        &self.components
    }

    pub fn eval(&self, u: &[f64]) -> Vec<f64> {
        self.components.iter().map(|c| c.eval(u)).collect()
    }

    /// Jacobian fields, `[target][source]`.
    pub fn jacobian(&self) -> Vec<Vec<ScalarField>> {
        self.components
            .iter()
            .map(|c| (0..self.source_dim).map(|j| c.partial(j)).collect())
            .collect()
    }

    /// `self ∘ inner`.
    pub fn after(&self, inner: &SmoothMap) -> SmoothMap {
        assert_eq!(inner.target_dim(), self.source_dim, "map composition arity");
        SmoothMap::new(
            inner.source_dim,
            self.components
                .iter()
                .map(|c| c.compose(&inner.components))
                .collect(),
        )
    }
}
