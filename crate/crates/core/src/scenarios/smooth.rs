use std::f64::consts::TAU;
use std::sync::Arc;

use crate::currents::{smooth_flux_current, Current, SignConvention, DEFAULT_BUMP_RADIUS};
use crate::error::Result;
use crate::exterior::{DifferentialForm, TimeDependentForm, VolumeElement};
use crate::field::ScalarField;
use crate::geometry::{Chain, ChartDomain, ParamCell};
use crate::spacetime::SpacetimeChart;

use super::params::invalid;
use super::{LINE_COORDS, POLAR_COORDS, 
    max_over_samples, track_fact, uniform_placement, CurrentSetup, ExpectedFact, GrowthProfile,
    Parts, Scenario, ScenarioParams, DEFAULT_MAX_STEPS, FACT_ODE_STEP,
};

/// `T(ψ) = (−1)^{n−1}∫𝔍∧ψ` over the whole chart, with `S(φ) = ∫𝔰φ`.
pub(crate) fn smooth_currents(
    chart: &SpacetimeChart,
) -> impl FnOnce(&DifferentialForm, &DifferentialForm) -> Result<Option<CurrentSetup>> + '_ {
    move |jst, sst| {
        let domain = chart.chart().clone();
        let ambient = Chain::single(domain.to_cell());
        Ok(Some(CurrentSetup {
            t: smooth_flux_current(jst, ambient.clone(), SignConvention::Alternating)?,
            s_expected: Current::form_induced(ambient, sst.clone(), 1.0)?,
            parts: Vec::new(),
            convention: Some(SignConvention::Alternating),
            placement: uniform_placement(&domain, DEFAULT_BUMP_RADIUS),
            probe_domain: domain,
            radius: DEFAULT_BUMP_RADIUS,
        }))
    }
}

pub(crate) fn line_chart(p: &ScenarioParams) -> Result<SpacetimeChart> {
    SpacetimeChart::product(p.time, &ChartDomain::new(vec![p.x_range])?)
}

pub(crate) fn polar_chart(p: &ScenarioParams) -> Result<SpacetimeChart> {
    p.check_polar()?;
    let space = ChartDomain::new(vec![p.r_range, (0.0, TAU)])?
        .with_periodic(1)?
        .with_exclusion(0, 0.0)?;
    SpacetimeChart::product(p.time, &space)
}

/// Interval of the line, checked against the chart.
pub(crate) fn interval_region(p: &ScenarioParams, default: (f64, f64)) -> Result<Chain> {
    let (lo, hi) = p.region.unwrap_or(default);
    if lo < p.x_range.0 || hi > p.x_range.1 {
        return Err(invalid(format!(
            "region [{lo}, {hi}] leaves the chart {:?}",
            p.x_range
        )));
    }
    Ok(Chain::single(ParamCell::axis_box(vec![lo], vec![hi])?))
}

/// Full annulus `lo ≤ r ≤ hi`.
pub(crate) fn annulus_region(p: &ScenarioParams, default: (f64, f64)) -> Result<Chain> {
    let (lo, hi) = p.region.unwrap_or(default);
    if lo < p.r_range.0 || hi > p.r_range.1 {
        return Err(invalid(format!(
            "annulus [{lo}, {hi}] leaves the chart {:?}",
            p.r_range
        )));
    }
    Ok(Chain::single(
        ParamCell::axis_box(vec![lo, 0.0], vec![hi, TAU])?.with_periodic(1),
    ))
}

fn mid(range: (f64, f64)) -> f64 {
    0.5 * (range.0 + range.1)
}

fn polar_seeds(p: &ScenarioParams, radii: &[f64]) -> Vec<Vec<f64>> {
    radii
        .iter()
        .filter(|&&r| r > p.r_range.0 && r < p.r_range.1)
        .map(|&r| vec![p.time.0, r, 1.0])
        .collect()
}

fn t() -> ScalarField {
    ScalarField::coord(0)
}

fn r() -> ScalarField {
    ScalarField::coord(1)
}

/// Least-squares slope of `x` against `t` along a worldline.
fn fitted_slope(points: &[Vec<f64>]) -> f64 {
    let n = points.len() as f64;
    let (mt, mx) = points
        .iter()
        .fold((0.0, 0.0), |(a, b), p| (a + p[0] / n, b + p[1] / n));
    let (sxy, sxx) = points.iter().fold((0.0, 0.0), |(a, b), p| {
        let dt = p[0] - mt;
        (a + dt * (p[1] - mx), b + dt * dt)
    });
    sxy / sxx
}

/// Uniform flux on the line: `ρ = a_x t dx`, `J = −a_t t`, `ς = a_x dx`.
pub fn example1(p: &ScenarioParams) -> Result<Scenario> {
    p.validate()?;
    if p.a_x == 0.0 {
        return Err(invalid(
            "a_x = 0 makes the flux tangent to the time slices; worldlines cannot be parameterized by time",
        ));
    }
    let spacetime = line_chart(p)?;
    let (at, ax) = (p.a_t, p.a_x);
    let ts = mid(p.time);
    let seeds = [-1.0, -0.5, 0.0, 0.5, 1.0]
        .iter()
        .filter(|&&x| x > p.x_range.0 && x < p.x_range.1)
        .map(|&x| vec![ts, x])
        .collect();
    let slope = -at / ax;
    let parts = Parts {
        name: "example1",
        params: p.clone(),
        rho: TimeDependentForm::from_terms(1, 1, [(vec![0], t() * ax)])?,
        flux: TimeDependentForm::scalar(1, t() * -at),
        source: TimeDependentForm::from_terms(1, 1, [(vec![0], ScalarField::constant(ax))])?,
        theta: VolumeElement::standard(2),
        region: interval_region(p, (-1.0, 1.0))?,
        seeds,
        track: Some(Arc::new(move |s: &[f64], t: f64| {
            vec![t, s[1] + slope * (t - s[0])]
        })),
        coordinates: LINE_COORDS,
        has_kinematics: true,
        spacetime: spacetime.clone(),
    };
    let tol = if p.fd_partials { 1e-5 } else { 1e-9 };
    let expected = vec![
        ExpectedFact::new("flux is spatially closed", tol, |s: &Scenario| {
            Ok(max_over_samples(s, s.flux.spatial_derivative().lifted()))
        }),
        ExpectedFact::new("worldline slope", 1e-6, move |s: &Scenario| {
            let w = s.worldline(&[ts, 0.0], FACT_ODE_STEP, DEFAULT_MAX_STEPS)?;
            Ok((fitted_slope(&w.points) - slope).abs())
        }),
    ];
    parts.build(smooth_currents(&spacetime), expected)
}

/// Expanding cavity in the plane: `ρ = ρ₀ r dr∧dα`, `J = a_α dα`.
pub fn example2(p: &ScenarioParams, profile: GrowthProfile) -> Result<Scenario> {
    p.validate()?;
    let spacetime = polar_chart(p)?;
    let (rho0, v0, r0) = (p.rho0, p.v0, p.r0);
    let (name, a, sigma) = match &profile {
        GrowthProfile::Linear => ("example2-linear", r() * v0, ScalarField::constant(v0)),
        GrowthProfile::Exponential => {
            ("example2-exponential", r().exp() * v0, r().exp() * v0)
        }
        GrowthProfile::Custom(a) => ("example2-custom", a.clone(), a.partial(1)),
    };
    let ts = p.time.0;
    let tol = if p.fd_partials { 1e-5 } else { 1e-9 };
    let mut expected = vec![ExpectedFact::new(
        "source is the radial derivative of a_α",
        tol,
        |s: &Scenario| {
            let d = s.flux.spatial_derivative().sub(&s.source)?;
            Ok(max_over_samples(s, d.lifted()))
        },
    )];
    let track: Option<super::Track> = match profile {
        GrowthProfile::Linear => {
            expected.push(ExpectedFact::new("cavity front", 1e-6, move |s: &Scenario| {
                track_fact(s, &[ts, r0, 1.0])
            }));
            Some(Arc::new(move |s: &[f64], t: f64| {
                vec![t, s[1] + v0 / rho0 * (t - s[0]), s[2]]
            }))
        }
        GrowthProfile::Exponential => {
            if v0 != 0.0 {
                // ρ₀ r e^{−r} dr = v₀ dt along the front
                let g = move |r: f64| -(r + 1.0) * (-r).exp();
                expected.push(ExpectedFact::new(
                    "cavity front",
                    1e-6,
                    move |s: &Scenario| {
                        let w = s.worldline(&[ts, r0, 1.0], FACT_ODE_STEP, DEFAULT_MAX_STEPS)?;
                        Ok(w.points.iter().fold(0.0, |m, q| {
                            let t = ts + rho0 / v0 * (g(q[1]) - g(r0));
                            m.max((q[0] - t).abs())
                        }))
                    },
                ));
            }
            None
        }
        GrowthProfile::Custom(_) => None,
    };
    let parts = Parts {
        name,
        params: p.clone(),
        rho: TimeDependentForm::from_terms(2, 2, [(vec![0, 1], r() * rho0)])?,
        flux: TimeDependentForm::from_terms(2, 1, [(vec![1], a)])?,
        source: TimeDependentForm::from_terms(2, 2, [(vec![0, 1], sigma)])?,
        theta: VolumeElement::from_density(3, r()),
        region: annulus_region(p, (1.0, 2.0))?,
        seeds: polar_seeds(p, &[r0, 1.5, 2.0, 2.5]),
        track,
        coordinates: POLAR_COORDS,
        has_kinematics: true,
        spacetime: spacetime.clone(),
    };
    parts.build(smooth_currents(&spacetime), expected)
}

/// Cavity-free growth: `J = ρ₀ r²/(t+t₀) dα`, `ς = 2ρ₀ r/(t+t₀) dr∧dα`.
pub fn example3(p: &ScenarioParams) -> Result<Scenario> {
    p.validate()?;
    if !(p.time.0 + p.t0 > 0.0) {
        return Err(invalid("example3 needs t + t0 > 0 on the whole chart"));
    }
    let spacetime = polar_chart(p)?;
    let (rho0, t0) = (p.rho0, p.t0);
    let shifted = (t() + t0).recip();
    let ts = p.time.0;
    let tol = if p.fd_partials { 1e-5 } else { 1e-9 };
    let expected = vec![
        ExpectedFact::new("worldlines are rays", 1e-6, move |s: &Scenario| {
            track_fact(s, &[ts, 1.0, 1.0])
        }),
        ExpectedFact::new("density is steady", tol, |s: &Scenario| {
            Ok(max_over_samples(s, s.beta.lifted()))
        }),
        ExpectedFact::new("source equals dJ", tol, |s: &Scenario| {
            let d = s.flux.spatial_derivative().sub(&s.source)?;
            Ok(max_over_samples(s, d.lifted()))
        }),
        ExpectedFact::new(
            "spacetime source coefficient at r = 1",
            1e-12,
            move |s: &Scenario| {
                let x = [ts, 1.0, 1.0];
                Ok((s.sst.eval_component(&[0, 1, 2], &x) - 2.0 * rho0 / (ts + t0)).abs())
            },
        ),
    ];
    let parts = Parts {
        name: "example3",
        params: p.clone(),
        rho: TimeDependentForm::from_terms(2, 2, [(vec![0, 1], r() * rho0)])?,
        flux: TimeDependentForm::from_terms(2, 1, [(vec![1], r().powi(2) * &shifted * rho0)])?,
        source: TimeDependentForm::from_terms(2, 2, [(vec![0, 1], r() * &shifted * (2.0 * rho0))])?,
        theta: VolumeElement::from_density(3, r()),
        region: annulus_region(p, (1.0, 2.0))?,
        seeds: polar_seeds(p, &[0.5, 1.0, 1.5]),
        track: Some(Arc::new(move |s: &[f64], t: f64| {
            vec![t, s[1] * (t + t0) / (s[0] + t0), s[2]]
        })),
        coordinates: POLAR_COORDS,
        has_kinematics: true,
        spacetime: spacetime.clone(),
    };
    parts.build(smooth_currents(&spacetime), expected)
}

/// Nothing happens anywhere.
pub fn zero(p: &ScenarioParams) -> Result<Scenario> {
    p.validate()?;
    let spacetime = line_chart(p)?;
    let parts = Parts {
        name: "zero",
        params: p.clone(),
        rho: TimeDependentForm::zero(1, 1)?,
        flux: TimeDependentForm::zero(1, 0)?,
        source: TimeDependentForm::zero(1, 1)?,
        theta: VolumeElement::standard(2),
        region: interval_region(p, (-1.0, 1.0))?,
        seeds: vec![vec![mid(p.time), mid(p.x_range)]],
        track: Some(Arc::new(|s: &[f64], _| s.to_vec())),
        coordinates: LINE_COORDS,
        has_kinematics: true,
        spacetime: spacetime.clone(),
    };
    parts.build(smooth_currents(&spacetime), Vec::new())
}
