use std::f64::consts::TAU;
use std::sync::Arc;

use rand::Rng;
use rand_chacha::ChaCha8Rng;

use crate::currents::{Current, DEFAULT_BUMP_RADIUS};
use crate::error::Result;
use crate::exterior::{DifferentialForm, SmoothMap, TimeDependentForm, VolumeElement};
use crate::field::ScalarField;
use crate::geometry::{Chain, ParamCell};

use super::params::invalid;
use super::smooth::{annulus_region, interval_region, line_chart, polar_chart};
use super::{LINE_COORDS, POLAR_COORDS, max_over_samples, track_fact, CurrentSetup, ExpectedFact, Parts, Scenario, ScenarioParams};

/// Body points created on the moving circle `r = r₀ + v₀t`.
///
/// `D = {r_min ≤ r ≤ r₀ + v₀t}` carries `𝔍 = ρ₀ r dr∧dα`; `T` restricts `𝔍`
/// to `D` and its boundary should equal `𝔍` restricted to `∂D`.
pub fn surface_growth(p: &ScenarioParams) -> Result<Scenario> {
    p.validate()?;
    let spacetime = polar_chart(p)?;
    let (rho0, r0, v0) = (p.rho0, p.r0, p.v0);
    let (rmin, rmax) = p.r_range;
    let (t_lo, t_hi) = p.time;
    for t in [t_lo, t_hi] {
        let radius = r0 + v0 * t;
        if !(radius > rmin && radius < rmax) {
            return Err(invalid(format!(
                "growth front r = {radius} at t = {t} leaves the chart ({rmin}, {rmax})"
            )));
        }
    }
    let r = ScalarField::coord(1);
    let ts = t_lo;
    let tol = if p.fd_partials { 1e-5 } else { 1e-9 };
    let expected = vec![
        ExpectedFact::new("worldlines are horizontal", 1e-12, move |s: &Scenario| {
            track_fact(s, &[ts, 0.5 * (rmin + r0), 1.0])
        }),
        ExpectedFact::new("no sources inside", tol, |s: &Scenario| {
            Ok(max_over_samples(s, &s.jst.exterior_derivative()))
        }),
    ];
    let parts = Parts {
        name: "surface-growth",
        params: p.clone(),
        rho: TimeDependentForm::from_terms(2, 2, [(vec![0, 1], &r * rho0)])?,
        flux: TimeDependentForm::zero(2, 1)?,
        source: TimeDependentForm::zero(2, 2)?,
        theta: VolumeElement::from_density(3, r.clone()),
        region: annulus_region(p, (0.5 * (rmin + r0), r0))?,
        seeds: [0.5 * (rmin + r0), r0]
            .iter()
            .map(|&r| vec![t_lo, r, 1.0])
            .collect(),
        track: Some(Arc::new(|s: &[f64], t: f64| vec![t, s[1], s[2]])),
        coordinates: POLAR_COORDS,
        has_kinematics: true,
        spacetime: spacetime.clone(),
    };
    let currents = move |jst: &DifferentialForm, _: &DifferentialForm| {
        // (t, s, α) ↦ (t, r_min + s (R(t) − r_min), α)
        let t = ScalarField::coord(0);
        let s = ScalarField::coord(1);
        let map = SmoothMap::new(
            3,
            vec![
                t.clone(),
                s * ((t * v0) + (r0 - rmin)) + rmin,
                ScalarField::coord(2),
            ],
        );
        let body = Chain::single(
            ParamCell::new(map, vec![t_lo, 0.0, 0.0], vec![t_hi, 1.0, TAU])?.with_periodic(2),
        );
        let radius = DEFAULT_BUMP_RADIUS;
        let m = 1.05 * radius;
        Ok(Some(CurrentSetup {
            t: Current::domain_restricted(jst.clone(), body.clone())?,
            s_expected: Current::domain_restricted(jst.clone(), body.boundary()?)?,
            parts: Vec::new(),
            convention: None,
            probe_domain: spacetime.chart().clone(),
            radius,
            placement: Arc::new(move |_, rng: &mut ChaCha8Rng| {
                let t = rng.gen_range(t_lo + m..t_hi - m);
                let r = r0 + v0 * t + rng.gen_range(-0.5..0.5) * radius;
                vec![t, r, rng.gen_range(m..TAU - m)]
            }),
        }))
    };
    parts.build(currents, expected)
}

/// One body point splitting in two at the branch point `B`.
///
/// `T(ψ) = Σ ∫_{Dᵢ} uᵢ ψ` over `D₁ = A→B`, `D₂ = B→E₂`, `D₃ = B→E₃`. Its
/// boundary is an atom `(u₁ − u₂ − u₃)(B)` at `B`, the line terms
/// `−∫_{Dᵢ} duᵢ φ` and the endpoint atoms at `A`, `E₂`, `E₃`.
pub fn example5(p: &ScenarioParams) -> Result<Scenario> {
    p.validate()?;
    let spacetime = line_chart(p)?;
    let (a, b) = (p.start.to_vec(), p.branch.to_vec());
    let ends: Vec<Vec<f64>> = p.ends.iter().map(|e| e.to_vec()).collect();
    let chart = spacetime.chart().clone();
    for q in std::iter::once(&a).chain([&b]).chain(&ends) {
        if !chart.contains(q) {
            return Err(invalid(format!("curve point {q:?} is outside the chart")));
        }
    }
    let curves = [(&a, &b), (&b, &ends[0]), (&b, &ends[1])];
    if curves.iter().any(|(x, y)| x == y) {
        return Err(invalid("branch curves must have positive length"));
    }
    let segments: Vec<ParamCell> = curves
        .iter()
        .map(|(x, y)| ParamCell::segment(x, y))
        .collect();
    let weights = p.weights;
    let parts = Parts {
        name: "example5",
        params: p.clone(),
        rho: TimeDependentForm::zero(1, 1)?,
        flux: TimeDependentForm::zero(1, 0)?,
        source: TimeDependentForm::zero(1, 1)?,
        theta: VolumeElement::standard(2),
        region: interval_region(p, (-1.0, 1.0))?,
        seeds: Vec::new(),
        track: None,
        coordinates: LINE_COORDS,
        has_kinematics: false,
        spacetime,
    };
    let currents = move |_: &DifferentialForm, _: &DifferentialForm| {
        let t = Current::weighted_curves(
            segments
                .iter()
                .zip(&weights)
                .map(|(c, u)| (c.clone(), u.field()))
                .collect(),
        )?;
        let atom_weight = weights[0].eval(&b) - weights[1].eval(&b) - weights[2].eval(&b);
        let atom = Current::chain_induced(Chain::points(&[(b.clone(), atom_weight)])?);
        let lines = Current::combination(
            segments
                .iter()
                .zip(&weights)
                .map(|(c, u)| {
                    let du = DifferentialForm::scalar(2, u.field()).exterior_derivative();
                    Ok((Current::domain_restricted(du, Chain::single(c.clone()))?, -1.0))
                })
                .collect::<Result<_>>()?,
        )?;
        let endpoints = Current::chain_induced(Chain::points(&[
            (a.clone(), -weights[0].eval(&a)),
            (ends[0].clone(), weights[1].eval(&ends[0])),
            (ends[1].clone(), weights[2].eval(&ends[1])),
        ])?);
        let s_expected = Current::combination(vec![
            (atom.clone(), 1.0),
            (lines.clone(), 1.0),
            (endpoints.clone(), 1.0),
        ])?;
        let radius = DEFAULT_BUMP_RADIUS;
        let segs = segments.clone();
        Ok(Some(CurrentSetup {
            t,
            s_expected,
            parts: vec![
                ("atom".into(), atom),
                ("lines".into(), lines),
                ("endpoints".into(), endpoints),
            ],
            convention: None,
            probe_domain: chart,
            radius,
            placement: Arc::new(move |i, rng: &mut ChaCha8Rng| {
                if i < 5 {
                    return b.clone();
                }
                let seg = &segs[(i - 5) % 3];
                let (p0, p1) = (seg.eval(&[0.0]), seg.eval(&[1.0]));
                let (dt, dx) = (p1[0] - p0[0], p1[1] - p0[1]);
                let len = dt.hypot(dx);
                let s = rng.gen_range(0.15..0.85);
                let off = rng.gen_range(-0.5..0.5) * radius / len;
                vec![p0[0] + s * dt - off * dx, p0[1] + s * dx + off * dt]
            }),
        }))
    };
    parts.build(currents, Vec::new())
}
