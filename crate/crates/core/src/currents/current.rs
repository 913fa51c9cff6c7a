use crate::error::{Error, Result};
use crate::exterior::DifferentialForm;
use crate::field::ScalarField;
use crate::geometry::{integrate, Chain, ParamCell, Quadrature};

/// A linear functional on compactly supported forms of one degree.
#[derive(Clone, Debug)]
pub enum Current {
    /// `ω ↦ sign · ∫_ambient φ ∧ ω`; the ambient chain covers the manifold.
    FormInduced {
        ambient: Chain,
        phi: DifferentialForm,
        sign: f64,
    },
    /// `ω ↦ ∫_chain ω`.
    ChainInduced {
        chain: Chain,
    },
    /// `ω ↦ ∫_domain form ∧ ω`.
    DomainRestricted {
        form: DifferentialForm,
        domain: Chain,
    },
    /// `ω ↦ Σ ∫_{Dᵢ} uᵢ ω` over oriented curves.
    WeightedCurves {
        curves: Vec<(ParamCell, ScalarField)>,
    },
    Combination(Vec<(Current, f64)>),
    /// `ψ ↦ T(dψ)`, evaluated from the definition.
    Boundary(Box<Current>),
}

impl Current {
    pub fn form_induced(ambient: Chain, phi: DifferentialForm, sign: f64) -> Result<Self> {
        if phi.dim() != ambient.ambient_dim() {
            return Err(Error::DimensionMismatch {
                expected: ambient.ambient_dim(),
                found: phi.dim(),
            });
        }
        if ambient.dim() != ambient.ambient_dim() {
            return Err(Error::DegreeMismatch {
                expected: ambient.ambient_dim(),
                found: ambient.dim(),
            });
        }
        Ok(Self::FormInduced { ambient, phi, sign })
    }

    pub fn chain_induced(chain: Chain) -> Self {
        Self::ChainInduced { chain }
    }

    pub fn domain_restricted(form: DifferentialForm, domain: Chain) -> Result<Self> {
        if form.dim() != domain.ambient_dim() {
            return Err(Error::DimensionMismatch {
                expected: domain.ambient_dim(),
                found: form.dim(),
            });
        }
        if form.degree() > domain.dim() {
            return Err(Error::DegreeTooLarge {
                degree: form.degree(),
                dim: domain.dim(),
            });
        }
        Ok(Self::DomainRestricted { form, domain })
    }

    pub fn weighted_curves(curves: Vec<(ParamCell, ScalarField)>) -> Result<Self> {
        if let Some((c, _)) = curves.iter().find(|(c, _)| c.param_dim() != 1) {
            return Err(Error::DegreeMismatch {
                expected: 1,
                found: c.param_dim(),
            });
        }
        Ok(Self::WeightedCurves { curves })
    }

    pub fn combination(terms: Vec<(Current, f64)>) -> Result<Self> {
        if let Some((first, _)) = terms.first() {
            let r = first.degree();
            if let Some((t, _)) = terms.iter().find(|(t, _)| t.degree() != r) {
                return Err(Error::DegreeMismatch {
                    expected: r,
                    found: t.degree(),
                });
            }
        }
        Ok(Self::Combination(terms))
    }

    /// Degree of the forms the current accepts.
    pub fn degree(&self) -> usize {
        match self {
            Self::FormInduced { ambient, phi, .. } => ambient.dim() - phi.degree(),
            Self::ChainInduced { chain } => chain.dim(),
            Self::DomainRestricted { form, domain } => domain.dim() - form.degree(),
            Self::WeightedCurves { .. } => 1,
            Self::Combination(terms) => terms.first().map_or(0, |(t, _)| t.degree()),
            Self::Boundary(t) => t.degree() - 1,
        }
    }

    /// `T(a)` by quadrature.
    pub fn eval(&self, a: &DifferentialForm, quad: &Quadrature) -> Result<f64> {
        if a.degree() != self.degree() {
            return Err(Error::DegreeMismatch {
                expected: self.degree(),
                found: a.degree(),
            });
        }
        match self {
            Self::FormInduced { ambient, phi, sign } => {
                Ok(sign * integrate(&phi.wedge(a)?, ambient, quad)?)
            }
            Self::ChainInduced { chain } => integrate(a, chain, quad),
            Self::DomainRestricted { form, domain } => integrate(&form.wedge(a)?, domain, quad),
            Self::WeightedCurves { curves } => {
                let mut total = 0.0;
                for (cell, u) in curves {
                    total += integrate(&a.mul_field(u), &Chain::single(cell.clone()), quad)?;
                }
                Ok(total)
            }
            Self::Combination(terms) => {
                let mut total = 0.0;
                for (t, w) in terms {
                    total += w * t.eval(a, quad)?;
                }
                Ok(total)
            }
            Self::Boundary(t) => t.eval(&a.exterior_derivative(), quad),
        }
    }

    /// `∂T`, evaluated through its definition `∂T(ψ) = T(dψ)`.
    pub fn boundary_current(&self) -> Result<Current> {
        if self.degree() == 0 {
            return Err(Error::BoundaryOfZeroCurrent);
        }
        Ok(Self::Boundary(Box::new(self.clone())))
    }

    /// `∂T` rewritten by Stokes into currents that integrate the test form
    /// itself rather than its derivative.
    pub fn analytic_boundary(&self) -> Result<Current> {
        if self.degree() == 0 {
            return Err(Error::BoundaryOfZeroCurrent);
        }
        match self {
            Self::FormInduced { ambient, phi, sign } => {
                // test forms vanish near the edge of the ambient chain
                let s = if phi.degree() % 2 == 0 { -1.0 } else { 1.0 };
                Ok(Self::FormInduced {
                    ambient: ambient.clone(),
                    phi: phi.exterior_derivative(),
                    sign: sign * s,
                })
            }
            Self::ChainInduced { chain } => Ok(Self::ChainInduced {
                chain: chain.boundary()?,
            }),
            Self::DomainRestricted { form, domain } => {
                // ∫_D F∧dψ = (−1)^f (∫_{∂D} F∧ψ − ∫_D dF∧ψ)
                let s = if form.degree() % 2 == 0 { 1.0 } else { -1.0 };
                let mut terms = vec![(
                    Self::DomainRestricted {
                        form: form.clone(),
                        domain: domain.boundary()?,
                    },
                    s,
                )];
                let df = form.exterior_derivative();
                if !df.is_zero() {
                    terms.push((
                        Self::DomainRestricted {
                            form: df,
                            domain: domain.clone(),
                        },
                        -s,
                    ));
                }
                Ok(Self::Combination(terms))
            }
            Self::WeightedCurves { curves } => {
                let mut terms = Vec::new();
                for (cell, u) in curves {
                    let curve = Chain::single(cell.clone());
                    let dim = cell.ambient_dim();
                    terms.push((
                        Self::DomainRestricted {
                            form: DifferentialForm::scalar(dim, u.clone()),
                            domain: curve.boundary()?,
                        },
                        1.0,
                    ));
                    let du = DifferentialForm::scalar(dim, u.clone()).exterior_derivative();
                    if !du.is_zero() {
                        terms.push((
                            Self::DomainRestricted {
                                form: du,
                                domain: curve,
                            },
                            -1.0,
                        ));
                    }
                }
                Ok(Self::Combination(terms))
            }
            Self::Combination(terms) => Ok(Self::Combination(
                terms
                    .iter()
                    .map(|(t, w)| Ok((t.analytic_boundary()?, *w)))
                    .collect::<Result<_>>()?,
            )),
            Self::Boundary(t) => Ok(Self::Boundary(Box::new(t.analytic_boundary()?))),
        }
    }
}

/// Convenience: `∂T` from the definition.
pub fn boundary_current(t: &Current) -> Result<Current> {
    t.boundary_current()
}

/// Convenience: `T(a)`.
pub fn eval_current(t: &Current, a: &DifferentialForm, quad: &Quadrature) -> Result<f64> {
    t.eval(a, quad)
}
