use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::balance::BalanceReport;
use crate::error::{Error, Result};
use crate::exterior::DifferentialForm;
use crate::geometry::{Chain, Quadrature};

use super::current::Current;
use super::test_form::TestForm;

/// Sign placed in front of `∫ 𝔍 ∧ ψ` when a spacetime flux defines a
/// 1-current.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SignConvention {
    /// `T(ψ) = ∫ 𝔍 ∧ ψ`.
    Plain,
    /// `T(ψ) = (−1)^{n−1} ∫ 𝔍 ∧ ψ`, n the space dimension; this makes
    /// `∂T(φ) = ∫ 𝔰 φ` for every smooth flux.
    Alternating,
}

impl SignConvention {
    pub fn factor(&self, space_dim: usize) -> f64 {
        match self {
            Self::Plain => 1.0,
            Self::Alternating => {
                if space_dim % 2 == 1 {
                    1.0
                } else {
                    -1.0
                }
            }
        }
    }
}

/// The 1-current of a smooth spacetime flux `𝔍` over the chart chain.
pub fn smooth_flux_current(
    jst: &DifferentialForm,
    ambient: Chain,
    convention: SignConvention,
) -> Result<Current> {
    let d = jst.dim();
    if d < 2 || jst.degree() != d - 1 {
        return Err(Error::DegreeMismatch {
            expected: d.saturating_sub(1),
            found: jst.degree(),
        });
    }
    Current::form_induced(ambient, jst.clone(), convention.factor(d - 1))
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct TestOutcome {
    pub center: Vec<f64>,
    pub radius: f64,
    pub lhs: f64,
    pub rhs: f64,
    pub defect: f64,
}

/// Per-test results of checking `∂T = S`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CurrentBalanceReport {
    pub convention: Option<SignConvention>,
    pub tests: Vec<TestOutcome>,
    pub max_defect: f64,
    /// No tests were run, so the check holds trivially.
    pub vacuous: bool,
}

impl CurrentBalanceReport {
    pub fn with_convention(mut self, convention: SignConvention) -> Self {
        self.convention = Some(convention);
        self
    }

    pub fn passes(&self, tol: f64) -> bool {
        self.max_defect < tol
    }

    pub fn summary(&self) -> BalanceReport {
        let n = self.tests.len();
        let worst =
            self.tests
                .iter()
                .enumerate()
                .fold(None::<(usize, f64)>, |acc, (i, t)| match acc {
                    Some((_, d)) if d >= t.defect => acc,
                    _ => Some((i, t.defect)),
                });
        BalanceReport {
            max_residual: self.max_defect,
            mean_residual: if n == 0 {
                0.0
            } else {
                self.tests.iter().map(|t| t.defect).sum::<f64>() / n as f64
            },
            samples: n,
            worst_point: worst
                .map(|(i, _)| self.tests[i].center.clone())
                .unwrap_or_default(),
        }
    }
}

/// `|∂T(φ) − S(φ)| / max(1, |S(φ)|)` for each 0-form probe, with `∂T`
/// evaluated from its definition.
pub fn verify_current_balance(
    t: &Current,
    s_expected: &Current,
    tests: &[TestForm],
    quad: &Quadrature,
) -> Result<CurrentBalanceReport> {
    if t.degree() != 1 {
        return Err(Error::DegreeMismatch {
            expected: 1,
            found: t.degree(),
        });
    }
    if s_expected.degree() != 0 {
        return Err(Error::DegreeMismatch {
            expected: 0,
            found: s_expected.degree(),
        });
    }
    if let Some(bad) = tests.iter().find(|p| p.degree != 0) {
        return Err(Error::InvalidTestForm(format!(
            "balance probes must be 0-forms, got degree {}",
            bad.degree
        )));
    }
    let dt = t.boundary_current()?;
    let outcomes = tests
        .par_iter()
        .map(|probe| {
            let phi = probe.to_form();
            let lhs = dt.eval(&phi, quad)?;
            let rhs = s_expected.eval(&phi, quad)?;
            Ok(TestOutcome {
                center: probe.center.clone(),
                radius: probe.radius,
                lhs,
                rhs,
                defect: (lhs - rhs).abs() / rhs.abs().max(1.0),
            })
        })
        .collect::<Result<Vec<_>>>()?;
    let max_defect = outcomes.iter().map(|o| o.defect).fold(0.0, f64::max);
    Ok(CurrentBalanceReport {
        convention: None,
        vacuous: outcomes.is_empty(),
        tests: outcomes,
        max_defect,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::currents::make_bump;
    use crate::field::ScalarField;
    use crate::geometry::{ChartDomain, ParamCell};

    fn spacetime_box() -> (ChartDomain, Chain) {
        let dom = ChartDomain::new(vec![(0.0, 2.0), (-2.0, 2.0)]).unwrap();
        (dom.clone(), Chain::single(dom.to_cell()))
    }

    #[test]
    fn example1_smooth_flux_balance() {
        // 𝔍 = a_t t dt + a_x t dx, 𝔰 = a_x dt∧dx
        let (at, ax) = (1.0, 2.0);
        let t = ScalarField::coord(0);
        let jst =
            DifferentialForm::from_terms(2, 1, [(vec![0], &t * at), (vec![1], &t * ax)]).unwrap();
        let sst = DifferentialForm::term(2, &[0, 1], ScalarField::constant(ax)).unwrap();
        let (dom, ambient) = spacetime_box();
        let current =
            smooth_flux_current(&jst, ambient.clone(), SignConvention::Alternating).unwrap();
        let source = Current::form_induced(ambient, sst, 1.0).unwrap();
        let probes: Vec<TestForm> = [[1.0, 0.0], [0.5, 1.2], [1.5, -0.7]]
            .iter()
            .map(|c| make_bump(&dom, c, 0.3, 0, 0, 1.0).unwrap())
            .collect();
        let rep = verify_current_balance(&current, &source, &probes, &Quadrature::default())
            .unwrap()
            .with_convention(SignConvention::Alternating);
        assert!(rep.max_defect < 1e-8, "{rep:?}");
        assert!(!rep.vacuous);
        assert_eq!(rep.summary().samples, 3);
    }

    #[test]
    fn closed_flux_has_no_interior_source() {
        let jst = DifferentialForm::basis(2, &[1]).unwrap();
        let (dom, ambient) = spacetime_box();
        let current = smooth_flux_current(&jst, ambient.clone(), SignConvention::Plain).unwrap();
        let zero =
            Current::form_induced(ambient, DifferentialForm::zero(2, 2).unwrap(), 1.0).unwrap();
        let probe = make_bump(&dom, &[1.0, 0.5], 0.2, 0, 0, 1.0).unwrap();
        let rep =
            verify_current_balance(&current, &zero, &[probe], &Quadrature::default()).unwrap();
        assert!(rep.max_defect < 1e-6);
    }

    #[test]
    fn matches_domain_restricted_on_whole_chart() {
        let t = ScalarField::coord(0);
        let jst = DifferentialForm::from_terms(2, 1, [(vec![0], t.clone()), (vec![1], &t * 2.0)])
            .unwrap();
        let (dom, ambient) = spacetime_box();
        let a = smooth_flux_current(&jst, ambient.clone(), SignConvention::Plain).unwrap();
        let b = Current::domain_restricted(jst, ambient).unwrap();
        let psi = make_bump(&dom, &[1.0, 0.0], 0.3, 1, 1, 1.0)
            .unwrap()
            .to_form();
        let q = Quadrature::default();
        assert!((a.eval(&psi, &q).unwrap() - b.eval(&psi, &q).unwrap()).abs() < 1e-10);
    }

    #[test]
    fn empty_probe_list_is_vacuous() {
        let (_, ambient) = spacetime_box();
        let cur =
            Current::chain_induced(Chain::single(ParamCell::segment(&[0.5, 0.0], &[1.5, 0.0])));
        let zero =
            Current::form_induced(ambient, DifferentialForm::zero(2, 2).unwrap(), 1.0).unwrap();
        let rep = verify_current_balance(&cur, &zero, &[], &Quadrature::default()).unwrap();
        assert!(rep.vacuous);
        assert_eq!(rep.max_defect, 0.0);
    }

    #[test]
    fn sign_factors() {
        assert_eq!(SignConvention::Alternating.factor(1), 1.0);
        assert_eq!(SignConvention::Alternating.factor(2), -1.0);
        assert_eq!(SignConvention::Plain.factor(2), 1.0);
    }
}
