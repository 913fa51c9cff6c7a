//! Pointwise, integral and weak-form checks of balance laws.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::exterior::{DifferentialForm, TimeDependentForm};
use crate::geometry::{integrate, Chain, ChartDomain, ParamCell, Quadrature};

pub const DEFAULT_SAMPLES: usize = 200;
pub const DEFAULT_SAMPLE_SEED: u64 = 42;

/// Pass thresholds. Pointwise checks compare coefficients directly;
/// quadrature checks compare integrals relative to their scale.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct Tolerances {
    pub pointwise_analytic: f64,
    pub pointwise_fd: f64,
    pub quadrature_relative: f64,
}

impl Default for Tolerances {
    fn default() -> Self {
        Self {
            pointwise_analytic: 1e-9,
            pointwise_fd: 1e-5,
            quadrature_relative: 1e-4,
        }
    }
}

/// Residual statistics over a sample set.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct BalanceReport {
    pub max_residual: f64,
    pub mean_residual: f64,
    pub samples: usize,
    pub worst_point: Vec<f64>,
}

impl BalanceReport {
    pub fn passes(&self, tol: f64) -> bool {
        self.max_residual < tol
    }
}

/// `n` uniform points in `domain` from a seeded ChaCha8 stream.
pub fn sample_points(domain: &ChartDomain, n: usize, seed: u64) -> Vec<Vec<f64>> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    domain.sample_uniform(n, &mut rng)
}

/// Max/mean over samples of the largest coefficient magnitude of `form`.
pub fn residual_report(form: &DifferentialForm, samples: &[Vec<f64>]) -> Result<BalanceReport> {
    if let Some(p) = samples.iter().find(|p| p.len() != form.dim()) {
        return Err(Error::DimensionMismatch {
            expected: form.dim(),
            found: p.len(),
        });
    }
    let values: Vec<f64> = samples.par_iter().map(|p| form.max_abs_at(p)).collect();
    let mut worst = 0;
    for (i, v) in values.iter().enumerate() {
        if *v > values[worst] || values[worst].is_nan() {
            worst = i;
        }
    }
    let max_residual = values.get(worst).copied().unwrap_or(0.0);
    let mean_residual = if values.is_empty() {
        0.0
    } else {
        values.iter().sum::<f64>() / values.len() as f64
    };
    Ok(BalanceReport {
        max_residual,
        mean_residual: mean_residual.min(max_residual),
        samples: values.len(),
        worst_point: samples.get(worst).cloned().unwrap_or_default(),
    })
}

fn expect(form: &DifferentialForm, dim: usize, degree: usize) -> Result<()> {
    if form.dim() != dim {
        return Err(Error::DimensionMismatch {
            expected: dim,
            found: form.dim(),
        });
    }
    if form.degree() != degree {
        return Err(Error::DegreeMismatch {
            expected: degree,
            found: form.degree(),
        });
    }
    Ok(())
}

fn space_dim_of(beta: &DifferentialForm) -> Result<usize> {
    let n = beta.dim();
    if n == 0 {
        return Err(Error::InvalidDomain("space needs at least one axis".into()));
    }
    Ok(n)
}

/// `β + dJ − ς` on the space chart.
pub fn spatial_balance_form(
    beta: &DifferentialForm,
    j: &DifferentialForm,
    sigma: &DifferentialForm,
) -> Result<DifferentialForm> {
    let n = space_dim_of(beta)?;
    expect(beta, n, n)?;
    expect(j, n, n - 1)?;
    expect(sigma, n, n)?;
    beta.add(&j.exterior_derivative())?.sub(sigma)
}

/// Pointwise `|β + dJ − ς|` at spatial sample points.
pub fn spatial_balance_residual(
    beta: &DifferentialForm,
    j: &DifferentialForm,
    sigma: &DifferentialForm,
    samples: &[Vec<f64>],
) -> Result<BalanceReport> {
    residual_report(&spatial_balance_form(beta, j, sigma)?, samples)
}

/// Pointwise `|β + dJ − ς|` for time-dependent fields, at `(t, x)` samples.
/// `d` acts on the spatial variables only.
pub fn evolving_balance_residual(
    beta: &TimeDependentForm,
    j: &TimeDependentForm,
    sigma: &TimeDependentForm,
    samples: &[Vec<f64>],
) -> Result<BalanceReport> {
    let n = beta.space_dim();
    if n == 0 {
        return Err(Error::InvalidDomain("space needs at least one axis".into()));
    }
    for (f, deg) in [(beta, n), (j, n - 1), (sigma, n)] {
        expect(f.lifted(), n + 1, deg)?;
    }
    let form = beta.add(&j.spatial_derivative())?.sub(sigma)?;
    residual_report(form.lifted(), samples)
}

/// Pointwise `|d𝔍 − 𝔰|` at spacetime samples.
pub fn spacetime_balance_residual(
    jst: &DifferentialForm,
    sst: &DifferentialForm,
    samples: &[Vec<f64>],
) -> Result<BalanceReport> {
    let d = jst.dim();
    if d < 2 {
        return Err(Error::InvalidDomain(
            "spacetime needs a time axis and space".into(),
        ));
    }
    expect(jst, d, d - 1)?;
    expect(sst, d, d)?;
    residual_report(&jst.exterior_derivative().sub(sst)?, samples)
}

/// The three integrals of the region balance law.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct RegionBalance {
    /// `∫_ℛ β`
    pub rate: f64,
    /// `∫_{∂ℛ} τ_ℛ`, the total outflow.
    pub outflow: f64,
    /// `∫_ℛ ς`
    pub production: f64,
}

impl RegionBalance {
    pub fn residual(&self) -> f64 {
        (self.rate + self.outflow - self.production).abs()
    }

    /// Residual over the largest of the three terms (absolute if all vanish).
    pub fn relative_residual(&self) -> f64 {
        let scale = self
            .rate
            .abs()
            .max(self.outflow.abs())
            .max(self.production.abs());
        if scale > 0.0 {
            self.residual() / scale
        } else {
            self.residual()
        }
    }
}

pub fn region_balance(
    beta: &DifferentialForm,
    j: &DifferentialForm,
    sigma: &DifferentialForm,
    region: &Chain,
    quad: &Quadrature,
) -> Result<RegionBalance> {
    let n = space_dim_of(beta)?;
    expect(beta, n, n)?;
    expect(j, n, n - 1)?;
    expect(sigma, n, n)?;
    if region.dim() != n {
        return Err(Error::DegreeMismatch {
            expected: n,
            found: region.dim(),
        });
    }
    Ok(RegionBalance {
        rate: integrate(beta, region, quad)?,
        outflow: total_flux(j, region, quad)?,
        production: integrate(sigma, region, quad)?,
    })
}

/// `|∫_ℛ β + ∫_{∂ℛ} J − ∫_ℛ ς|`.
pub fn region_balance_residual(
    beta: &DifferentialForm,
    j: &DifferentialForm,
    sigma: &DifferentialForm,
    region: &Chain,
    quad: &Quadrature,
) -> Result<f64> {
    Ok(region_balance(beta, j, sigma, region, quad)?.residual())
}

/// `τ = ι*J`, the flux form pulled back to a boundary parameterization.
pub fn boundary_flux_density(
    j: &DifferentialForm,
    boundary_cell: &ParamCell,
) -> Result<DifferentialForm> {
    if j.degree() != boundary_cell.param_dim() {
        return Err(Error::DegreeMismatch {
            expected: boundary_cell.param_dim(),
            found: j.degree(),
        });
    }
    j.pullback(boundary_cell.map())
}

/// `Φ_{∂ℛ} = ∫_{∂ℛ} J`.
pub fn total_flux(j: &DifferentialForm, region: &Chain, quad: &Quadrature) -> Result<f64> {
    integrate(j, &region.boundary()?, quad)
}

/// Two evaluations of the power functional and the scale of their parts.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct PowerBalance {
    pub lhs: f64,
    pub rhs: f64,
    /// Largest magnitude among the individual integrals on either side.
    pub scale: f64,
}

impl PowerBalance {
    fn from_terms(lhs: &[f64], rhs: &[f64]) -> Self {
        let scale = lhs.iter().chain(rhs).fold(0.0f64, |m, v| m.max(v.abs()));
        Self {
            lhs: lhs.iter().sum(),
            rhs: rhs.iter().sum(),
            scale,
        }
    }

    pub fn defect(&self) -> f64 {
        (self.lhs - self.rhs).abs()
    }

    pub fn relative_defect(&self) -> f64 {
        if self.scale > 0.0 {
            self.defect() / self.scale
        } else {
            self.defect()
        }
    }
}

/// `∫β∧φ + ∫_{∂ℛ}J∧φ` against `(−1)^{n−1}∫J∧dφ + ∫ς∧φ` for a 0-form `φ`.
pub fn power_functional(
    beta: &DifferentialForm,
    j: &DifferentialForm,
    sigma: &DifferentialForm,
    phi: &DifferentialForm,
    region: &Chain,
    quad: &Quadrature,
) -> Result<PowerBalance> {
    let n = space_dim_of(beta)?;
    expect(beta, n, n)?;
    expect(j, n, n - 1)?;
    expect(sigma, n, n)?;
    expect(phi, n, 0)?;
    let boundary = region.boundary()?;
    let sign = if (n - 1) % 2 == 0 { 1.0 } else { -1.0 };
    let lhs = [
        integrate(&beta.wedge(phi)?, region, quad)?,
        integrate(&j.wedge(phi)?, &boundary, quad)?,
    ];
    let rhs = [
        sign * integrate(&j.wedge(&phi.exterior_derivative())?, region, quad)?,
        integrate(&sigma.wedge(phi)?, region, quad)?,
    ];
    Ok(PowerBalance::from_terms(&lhs, &rhs))
}

/// Spacetime form: `∫_{∂ℛ}𝔍∧φ` against `(−1)^n∫𝔍∧dφ + ∫𝔰∧φ`.
pub fn spacetime_power_functional(
    jst: &DifferentialForm,
    sst: &DifferentialForm,
    phi: &DifferentialForm,
    region: &Chain,
    quad: &Quadrature,
) -> Result<PowerBalance> {
    let d = jst.dim();
    if d < 2 {
        return Err(Error::InvalidDomain(
            "spacetime needs a time axis and space".into(),
        ));
    }
    expect(jst, d, d - 1)?;
    expect(sst, d, d)?;
    expect(phi, d, 0)?;
    let n = d - 1;
    let sign = if n % 2 == 0 { 1.0 } else { -1.0 };
    let lhs = [integrate(&jst.wedge(phi)?, &region.boundary()?, quad)?];
    let rhs = [
        sign * integrate(&jst.wedge(&phi.exterior_derivative())?, region, quad)?,
        integrate(&sst.wedge(phi)?, region, quad)?,
    ];
    Ok(PowerBalance::from_terms(&lhs, &rhs))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::ScalarField;
    use std::f64::consts::PI;

    fn x(i: usize) -> ScalarField {
        ScalarField::coord(i)
    }

    fn annulus() -> Chain {
        Chain::single(
            ParamCell::axis_box(vec![1.0, 0.0], vec![2.0, 2.0 * PI])
                .unwrap()
                .with_periodic(1),
        )
    }

    #[test]
    fn example1_spatial_balance() {
        let ax = 2.0;
        let beta = DifferentialForm::term(1, &[0], ScalarField::constant(ax)).unwrap();
        let j = DifferentialForm::scalar(1, ScalarField::constant(-1.5));
        let sigma = beta.clone();
        let dom = ChartDomain::new(vec![(-2.0, 2.0)]).unwrap();
        let pts = sample_points(&dom, DEFAULT_SAMPLES, DEFAULT_SAMPLE_SEED);
        let rep = spatial_balance_residual(&beta, &j, &sigma, &pts).unwrap();
        assert_eq!(rep.max_residual, 0.0);
        assert_eq!(rep.samples, 200);
    }

    #[test]
    fn zero_fields_and_degree_errors() {
        let z2 = DifferentialForm::zero(2, 2).unwrap();
        let z1 = DifferentialForm::zero(2, 1).unwrap();
        let rep = spatial_balance_residual(&z2, &z1, &z2, &[vec![1.0, 1.0]]).unwrap();
        assert_eq!(rep.max_residual, 0.0);
        assert!(spatial_balance_residual(&z2, &z2, &z2, &[]).is_err());
        assert_eq!(
            region_balance_residual(&z2, &z1, &z2, &annulus(), &Quadrature::default()).unwrap(),
            0.0
        );
    }

    #[test]
    fn example2_linear_region_balance() {
        // (r, α); ρ static, J = r v₀ dα, ς = v₀ dr∧dα
        let v0 = 1.0;
        let beta = DifferentialForm::zero(2, 2).unwrap();
        let j = DifferentialForm::term(2, &[1], x(0) * v0).unwrap();
        let sigma = DifferentialForm::term(2, &[0, 1], ScalarField::constant(v0)).unwrap();
        let dom = ChartDomain::new(vec![(0.2, 4.0), (0.0, 2.0 * PI)]).unwrap();
        let pts = sample_points(&dom, 50, 1);
        assert!(
            spatial_balance_residual(&beta, &j, &sigma, &pts)
                .unwrap()
                .max_residual
                < 1e-12
        );
        let rb = region_balance(&beta, &j, &sigma, &annulus(), &Quadrature::default()).unwrap();
        assert!((rb.production - 2.0 * PI).abs() < 1e-12);
        assert!((rb.outflow - 2.0 * PI).abs() < 1e-12);
        assert!(rb.relative_residual() < 1e-12);
    }

    #[test]
    fn circle_flux_density() {
        // J = a dα on r = 1.5 with a = r²: τ = a dα, Φ = 2π a
        let j = DifferentialForm::term(2, &[1], x(0) * x(0)).unwrap();
        let circle = ParamCell::new(
            crate::exterior::SmoothMap::new(1, vec![ScalarField::constant(1.5), x(0)]),
            vec![0.0],
            vec![2.0 * PI],
        )
        .unwrap();
        let tau = boundary_flux_density(&j, &circle).unwrap();
        assert!((tau.eval_component(&[0], &[0.3]) - 2.25).abs() < 1e-15);
        let phi = integrate(
            &tau,
            &Chain::single(ParamCell::axis_box(vec![0.0], vec![2.0 * PI]).unwrap()),
            &Quadrature::default(),
        )
        .unwrap();
        assert!((phi - 2.0 * PI * 2.25).abs() < 1e-12);
        let d_j = j.exterior_derivative();
        let total = total_flux(&j, &annulus(), &Quadrature::default()).unwrap();
        let interior = integrate(&d_j, &annulus(), &Quadrature::default()).unwrap();
        assert!((total - interior).abs() < 1e-10);
    }

    #[test]
    fn power_functional_with_constant_and_bump() {
        let v0 = 1.0;
        let beta = DifferentialForm::zero(2, 2).unwrap();
        let j = DifferentialForm::term(2, &[1], x(0) * v0).unwrap();
        let sigma = DifferentialForm::term(2, &[0, 1], ScalarField::constant(v0)).unwrap();
        let q = Quadrature::default();
        let one = DifferentialForm::constant(2, 1.0);
        let p = power_functional(&beta, &j, &sigma, &one, &annulus(), &q).unwrap();
        assert!(p.relative_defect() < 1e-12);
        let bump = DifferentialForm::scalar(2, ScalarField::bump(&[1.5, 2.0], 0.3, 1.0));
        let p = power_functional(&beta, &j, &sigma, &bump, &annulus(), &q).unwrap();
        assert!(p.relative_defect() < 1e-8, "{p:?}");
    }

    #[test]
    fn spacetime_residual_example3() {
        let (rho0, t0) = (1.0, 1.0);
        let r = x(1);
        let jst = DifferentialForm::from_terms(
            3,
            2,
            [
                (vec![0, 2], (&r * &r * (-rho0)).div(&(x(0) + t0))),
                (vec![1, 2], &r * rho0),
            ],
        )
        .unwrap();
        let sst =
            DifferentialForm::term(3, &[0, 1, 2], (&r * (2.0 * rho0)).div(&(x(0) + t0))).unwrap();
        let dom = ChartDomain::new(vec![(0.0, 2.0), (0.2, 4.0), (0.0, 2.0 * PI)]).unwrap();
        let pts = sample_points(&dom, DEFAULT_SAMPLES, DEFAULT_SAMPLE_SEED);
        let rep = spacetime_balance_residual(&jst, &sst, &pts).unwrap();
        assert!(rep.max_residual < 1e-12);
        assert!(rep.max_residual >= rep.mean_residual);
    }

    #[test]
    fn sample_points_are_reproducible() {
        let dom = ChartDomain::new(vec![(0.0, 1.0), (2.0, 3.0)]).unwrap();
        let a = sample_points(&dom, 10, 9);
        assert_eq!(a, sample_points(&dom, 10, 9));
        assert!(a.iter().all(|p| dom.contains(p)));
    }
}
