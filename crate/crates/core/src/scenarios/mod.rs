//! Ready-made growing bodies: fields, charts, currents and closed-form
//! expectations to check them against.

mod params;
mod singular;
mod smooth;

use std::fmt;
use std::sync::Arc;

use rand::Rng;
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::balance::{sample_points, DEFAULT_SAMPLE_SEED, DEFAULT_SAMPLES};
use crate::currents::{
    make_bump, verify_current_balance, Current, CurrentBalanceReport, SignConvention, TestForm,
};
use crate::error::{Error, Result};
use crate::exterior::{DifferentialForm, TimeDependentForm, VectorField, VolumeElement};
use crate::field::ScalarField;
use crate::geometry::{Chain, ChartDomain, Quadrature};
use crate::kinematics::{kinematic_flux, trace_through, Worldline};
use crate::spacetime::SpacetimeChart;

pub use params::{AffineWeight, Growth, ScenarioParams};
pub use singular::{example5, surface_growth};
pub use smooth::{example1, example2, example3, zero};

pub const SCENARIO_NAMES: &[&str] = &[
    "example1",
    "example2",
    "example2-linear",
    "example2-exponential",
    "example3",
    "example5",
    "surface-growth",
    "zero",
];

/// Step and step budget used when a scenario checks its own worldline facts.
pub const FACT_ODE_STEP: f64 = 1e-3;
pub const DEFAULT_MAX_STEPS: usize = 10_000;

/// `a_α` of the cavity examples.
#[derive(Clone, Debug)]
pub enum GrowthProfile {
    Linear,
    Exponential,
    /// Any `a_α` on the spacetime chart `(t, r, α)`.
    Custom(ScalarField),
}

impl From<Growth> for GrowthProfile {
    fn from(g: Growth) -> Self {
        match g {
            Growth::Linear => Self::Linear,
            Growth::Exponential => Self::Exponential,
        }
    }
}

/// Closed-form worldline: spacetime point at time `t` on the curve through
/// `seed`.
pub type Track = Arc<dyn Fn(&[f64], f64) -> Vec<f64> + Send + Sync>;

type FactCheck = Arc<dyn Fn(&Scenario) -> Result<f64> + Send + Sync>;
type Placement = Arc<dyn Fn(usize, &mut ChaCha8Rng) -> Vec<f64> + Send + Sync>;

/// A named closed-form expectation; `check` returns the observed deviation.
#[derive(Clone)]
pub struct ExpectedFact {
    pub name: String,
    pub tolerance: f64,
    check: FactCheck,
}

impl ExpectedFact {
    pub fn new(
        name: impl Into<String>,
        tolerance: f64,
        check: impl Fn(&Scenario) -> Result<f64> + Send + Sync + 'static,
    ) -> Self {
        Self {
            name: name.into(),
            tolerance,
            check: Arc::new(check),
        }
    }
}

impl fmt::Debug for ExpectedFact {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("ExpectedFact")
            .field("name", &self.name)
            .field("tolerance", &self.tolerance)
            .finish_non_exhaustive()
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct FactOutcome {
    pub name: String,
    pub deviation: f64,
    pub tolerance: f64,
    pub passed: bool,
}

/// A 1-current `T`, the 0-current its boundary should equal, and where to
/// put probes.
#[derive(Clone)]
pub struct CurrentSetup {
    pub t: Current,
    pub s_expected: Current,
    /// Named pieces of `s_expected`, for checks on individual parts.
    pub parts: Vec<(String, Current)>,
    pub convention: Option<SignConvention>,
    pub probe_domain: ChartDomain,
    pub radius: f64,
    placement: Placement,
}

impl fmt::Debug for CurrentSetup {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("CurrentSetup")
            .field("t", &self.t)
            .field("s_expected", &self.s_expected)
            .field("convention", &self.convention)
            .field("radius", &self.radius)
            .finish_non_exhaustive()
    }
}

impl CurrentSetup {
    /// `n` bump 0-forms placed by the scenario's rule from a seeded stream.
    pub fn probes(&self, n: usize, seed: u64) -> Result<Vec<TestForm>> {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        (0..n)
            .map(|i| {
                let c = (self.placement)(i, &mut rng);
                make_bump(&self.probe_domain, &c, self.radius, 0, 0, 1.0)
            })
            .collect()
    }

    pub fn verify(&self, n: usize, seed: u64, quad: &Quadrature) -> Result<CurrentBalanceReport> {
        let tests = self.probes(n, seed)?;
        let mut rep = verify_current_balance(&self.t, &self.s_expected, &tests, quad)?;
        rep.convention = self.convention;
        Ok(rep)
    }

    pub fn part(&self, name: &str) -> Option<&Current> {
        self.parts.iter().find(|(n, _)| n == name).map(|(_, c)| c)
    }
}

#[derive(Clone)]
pub struct Scenario {
    pub name: String,
    pub params: ScenarioParams,
    pub spacetime: SpacetimeChart,
    pub rho: TimeDependentForm,
    pub beta: TimeDependentForm,
    pub flux: TimeDependentForm,
    pub source: TimeDependentForm,
    pub jst: DifferentialForm,
    pub sst: DifferentialForm,
    pub theta: VolumeElement,
    /// Spatial region of the integral balance, read at `region_time`.
    pub region: Chain,
    pub region_time: f64,
    pub seeds: Vec<Vec<f64>>,
    pub currents: Option<CurrentSetup>,
    pub expected: Vec<ExpectedFact>,
    coordinates: &'static [&'static str],
    track: Option<Track>,
    has_kinematics: bool,
}

impl fmt::Debug for Scenario {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("Scenario")
            .field("name", &self.name)
            .field("params", &self.params)
            .field("spacetime", &self.spacetime)
            .field("jst", &self.jst)
            .field("sst", &self.sst)
            .field("seeds", &self.seeds)
            .field("expected", &self.expected)
            .finish_non_exhaustive()
    }
}

/// Scenario by name, with the growth profile of `example2` taken from
/// `params.growth`.
pub fn by_name(name: &str, params: &ScenarioParams) -> Result<Scenario> {
    match name {
        "example1" => example1(params),
        "example2" => example2(params, params.growth.into()),
        "example2-linear" => example2(params, GrowthProfile::Linear),
        "example2-exponential" => example2(params, GrowthProfile::Exponential),
        "example3" => example3(params),
        "example5" => example5(params),
        "surface-growth" => surface_growth(params),
        "zero" => zero(params),
        other => Err(Error::UnknownScenario(other.to_string())),
    }
}

impl Scenario {
    pub fn space(&self) -> ChartDomain {
        self.spacetime.space()
    }

    pub fn space_dim(&self) -> usize {
        self.spacetime.space_dim()
    }

    pub fn has_kinematics(&self) -> bool {
        self.has_kinematics
    }

    /// Spacetime coordinate names, time first.
    pub fn coordinate_names(&self) -> Vec<&'static str> {
        self.coordinates.to_vec()
    }

    pub fn fd_partials(&self) -> bool {
        self.params.fd_partials
    }

    /// Pointwise tolerance matching how partials are taken.
    pub fn pointwise_tolerance(&self) -> f64 {
        if self.params.fd_partials {
            1e-5
        } else {
            1e-9
        }
    }

    pub fn kinematic_flux(&self) -> Result<VectorField> {
        if !self.has_kinematics {
            return Err(Error::MissingScenarioPart(
                self.name.clone(),
                "kinematic flux",
            ));
        }
        kinematic_flux(&self.jst, &self.theta)
    }

    /// Worldline through `seed`, traced both ways until it leaves the chart
    /// or the step budget runs out.
    pub fn worldline(&self, seed: &[f64], step: f64, max_steps: usize) -> Result<Worldline> {
        let v = self.kinematic_flux()?;
        trace_through(&v, seed, step, max_steps, self.spacetime.chart())
    }

    pub fn track(&self) -> Option<&Track> {
        self.track.as_ref()
    }

    /// Largest coordinate gap between a traced worldline and the closed form
    /// through the same seed, or `None` without a closed form.
    pub fn track_deviation(&self, w: &Worldline) -> Option<f64> {
        let track = self.track.as_ref()?;
        Some(w.points.iter().fold(0.0, |m, p| {
            let q = track(&w.seed, p[0]);
            p.iter().zip(&q).fold(m, |m, (a, b)| m.max((a - b).abs()))
        }))
    }

    /// Deterministic `(t, x)` samples over the spacetime chart.
    pub fn samples(&self, n: usize, seed: u64) -> Vec<Vec<f64>> {
        sample_points(self.spacetime.chart(), n, seed)
    }

    pub fn evaluate_facts(&self) -> Result<Vec<FactOutcome>> {
        self.expected
            .iter()
            .map(|f| {
                let deviation = (f.check)(self)?;
                Ok(FactOutcome {
                    name: f.name.clone(),
                    deviation,
                    tolerance: f.tolerance,
                    passed: deviation < f.tolerance,
                })
            })
            .collect()
    }

    pub fn currents(&self) -> Result<&CurrentSetup> {
        self.currents
            .as_ref()
            .ok_or_else(|| Error::MissingScenarioPart(self.name.clone(), "currents"))
    }
}

/// Fields, charts and derived forms shared by every constructor.
pub(crate) struct Parts {
    pub name: &'static str,
    pub params: ScenarioParams,
    pub spacetime: SpacetimeChart,
    pub rho: TimeDependentForm,
    pub flux: TimeDependentForm,
    pub source: TimeDependentForm,
    pub theta: VolumeElement,
    pub region: Chain,
    pub seeds: Vec<Vec<f64>>,
    pub coordinates: &'static [&'static str],
    pub track: Option<Track>,
    pub has_kinematics: bool,
}

impl Parts {
    /// Derive `β`, `𝔍`, `𝔰`; apply the perturbation and finite-difference
    /// options first.
    pub fn build(
        self,
        currents: impl FnOnce(&DifferentialForm, &DifferentialForm) -> Result<Option<CurrentSetup>>,
        expected: Vec<ExpectedFact>,
    ) -> Result<Scenario> {
        let p = &self.params;
        let n = self.spacetime.space_dim();
        let mut source = self.source;
        if p.source_perturbation != 0.0 {
            let top: Vec<usize> = (0..n).collect();
            let bump = TimeDependentForm::from_terms(
                n,
                n,
                [(top, ScalarField::constant(p.source_perturbation))],
            )?;
            source = source.add(&bump)?;
        }
        let (rho, flux, source) = if p.fd_partials {
            (opaque(&self.rho)?, opaque(&self.flux)?, opaque(&source)?)
        } else {
            (self.rho, self.flux, source)
        };
        let beta = rho.time_derivative();
        let jst = crate::spacetime::assemble_spacetime_flux(&rho, &flux)?;
        let sst = crate::spacetime::assemble_spacetime_source(&source)?;
        let currents = currents(&jst, &sst)?;
        let region_time = 0.5 * (self.spacetime.time_range().0 + self.spacetime.time_range().1);
        let seeds = p.seeds.clone().unwrap_or(self.seeds);
        Ok(Scenario {
            name: self.name.to_string(),
            params: self.params,
            spacetime: self.spacetime,
            rho,
            beta,
            flux,
            source,
            jst,
            sst,
            theta: self.theta,
            region: self.region,
            region_time,
            seeds,
            currents,
            expected,
            coordinates: self.coordinates,
            track: self.track,
            has_kinematics: self.has_kinematics,
        })
    }
}

pub(crate) const LINE_COORDS: &[&str] = &["t", "x"];
pub(crate) const POLAR_COORDS: &[&str] = &["t", "r", "alpha"];

/// Same values, but every partial derivative by finite differences.
fn opaque(a: &TimeDependentForm) -> Result<TimeDependentForm> {
    TimeDependentForm::from_lifted(a.lifted().map_coefficients(|f| {
        let f = f.clone();
        ScalarField::from_fn(move |x| f.eval(x))
    }))
}

/// Uniform centers whose `radius` ball stays in `domain` with a small margin.
pub(crate) fn uniform_placement(domain: &ChartDomain, radius: f64) -> Placement {
    let margin = radius * 1.05;
    let bounds: Vec<(f64, f64)> = domain
        .bounds()
        .iter()
        .map(|&(lo, hi)| (lo + margin, hi - margin))
        .collect();
    Arc::new(move |_, rng: &mut ChaCha8Rng| {
        bounds.iter().map(|&(lo, hi)| rng.gen_range(lo..hi)).collect()
    })
}

/// Largest `|component|` of `form` over the default sample set.
pub(crate) fn max_over_samples(s: &Scenario, form: &DifferentialForm) -> f64 {
    s.samples(DEFAULT_SAMPLES, DEFAULT_SAMPLE_SEED)
        .iter()
        .map(|x| form.max_abs_at(x))
        .fold(0.0, f64::max)
}

/// Worldline deviation from the closed form through `seed`.
pub(crate) fn track_fact(s: &Scenario, seed: &[f64]) -> Result<f64> {
    let w = s.worldline(seed, FACT_ODE_STEP, DEFAULT_MAX_STEPS)?;
    s.track_deviation(&w)
        .ok_or_else(|| Error::MissingScenarioPart(s.name.clone(), "closed-form worldline"))
}
