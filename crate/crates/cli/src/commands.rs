use std::path::PathBuf;

use anyhow::{bail, Result};
use serde::Serialize;

use formflux_core::balance::{evolving_balance_residual, region_balance, spacetime_balance_residual};
use formflux_core::balance::{BalanceReport, RegionBalance, DEFAULT_SAMPLES};
use formflux_core::currents::CurrentBalanceReport;
use formflux_core::kinematics::{Worldline, WorldlineStatus};
use formflux_core::scenarios::FactOutcome;

use crate::config::RunConfig;
use crate::output::{to_json, worldline_csv, worldlines_svg, write_file};

/// Relative tolerance of the region balance and of the current checks.
pub const INTEGRAL_TOLERANCE: f64 = 1e-4;

#[derive(Clone, Debug, Serialize)]
pub struct TrackSummary {
    pub seed: Vec<f64>,
    pub points: usize,
    pub status: WorldlineStatus,
    /// Gap to the closed-form worldline, when the scenario has one.
    pub closed_form_deviation: Option<f64>,
}

#[derive(Clone, Debug)]
pub struct WorldlinesRun {
    pub files: Vec<PathBuf>,
    pub tracks: Vec<TrackSummary>,
}

/// One CSV per seed plus an SVG of all of them.
pub fn cmd_worldlines(cfg: &RunConfig) -> Result<WorldlinesRun> {
    let s = cfg.scenario()?;
    if !s.has_kinematics() {
        bail!("scenario `{}` has no kinematic flux", s.name);
    }
    let chart = s.spacetime.chart();
    for seed in &s.seeds {
        if seed.len() != chart.dim() || !chart.contains(seed) {
            bail!("seed {seed:?} is outside the chart of `{}`", s.name);
        }
    }
    let lines: Vec<Worldline> = s
        .seeds
        .iter()
        .map(|seed| s.worldline(seed, cfg.ode_step, cfg.max_steps))
        .collect::<Result<_, _>>()?;
    let coords = s.coordinate_names();
    let mut files = Vec::new();
    for (i, w) in lines.iter().enumerate() {
        let path = cfg.out_dir.join(format!("worldline_{i:03}.csv"));
        write_file(&path, &worldline_csv(w, &coords))?;
        files.push(path);
    }
    if cfg.svg && !lines.is_empty() {
        let path = cfg.out_dir.join("worldlines.svg");
        let b = chart.bounds();
        write_file(
            &path,
            &worldlines_svg(&lines, b[0], b[1], (coords[0], coords[1])),
        )?;
        files.push(path);
    }
    let tracks = lines
        .iter()
        .map(|w| TrackSummary {
            seed: w.seed.clone(),
            points: w.len(),
            status: w.status,
            closed_form_deviation: s.track_deviation(w),
        })
        .collect();
    Ok(WorldlinesRun { files, tracks })
}

#[derive(Clone, Debug, Serialize)]
pub struct RegionSummary {
    pub time: f64,
    #[serde(flatten)]
    pub integrals: RegionBalance,
    pub residual: f64,
    pub relative_residual: f64,
}

#[derive(Clone, Debug, Serialize)]
pub struct BalanceRunReport {
    pub scenario: String,
    pub seed: u64,
    pub fd_partials: bool,
    pub pointwise_tolerance: f64,
    pub region_tolerance: f64,
    /// `|β + dJ − ς|` at `(t, x)` samples.
    pub spatial: BalanceReport,
    /// `|d𝔍 − 𝔰|` at the same samples.
    pub spacetime: BalanceReport,
    pub region: RegionSummary,
    pub facts: Vec<FactOutcome>,
    pub passed: bool,
}

#[derive(Clone, Debug)]
pub struct BalanceRun {
    pub report: BalanceRunReport,
    pub json: String,
    pub path: PathBuf,
}

/// Pointwise, spacetime and region residuals plus the scenario's facts.
pub fn cmd_balance(cfg: &RunConfig) -> Result<BalanceRun> {
    let s = cfg.scenario()?;
    let samples = s.samples(DEFAULT_SAMPLES, cfg.seed);
    let spatial = evolving_balance_residual(&s.beta, &s.flux, &s.source, &samples)?;
    let spacetime = spacetime_balance_residual(&s.jst, &s.sst, &samples)?;
    let t = s.region_time;
    let integrals = region_balance(
        &s.beta.at_time(t),
        &s.flux.at_time(t),
        &s.source.at_time(t),
        &s.region,
        &cfg.quadrature,
    )?;
    let region = RegionSummary {
        time: t,
        integrals,
        residual: integrals.residual(),
        relative_residual: integrals.relative_residual(),
    };
    let facts = s.evaluate_facts()?;
    let tol = s.pointwise_tolerance();
    let passed = spatial.passes(tol)
        && spacetime.passes(tol)
        && region.relative_residual < INTEGRAL_TOLERANCE
        && facts.iter().all(|f| f.passed);
    let report = BalanceRunReport {
        scenario: s.name.clone(),
        seed: cfg.seed,
        fd_partials: s.fd_partials(),
        pointwise_tolerance: tol,
        region_tolerance: INTEGRAL_TOLERANCE,
        spatial,
        spacetime,
        region,
        facts,
        passed,
    };
    let json = to_json(&report)?;
    let path = cfg.out_dir.join("balance.json");
    write_file(&path, &json)?;
    Ok(BalanceRun { report, json, path })
}

#[derive(Clone, Debug, Serialize)]
pub struct CurrentsRunReport {
    pub scenario: String,
    pub seed: u64,
    pub tolerance: f64,
    #[serde(flatten)]
    pub balance: CurrentBalanceReport,
    pub passed: bool,
}

#[derive(Clone, Debug)]
pub struct CurrentsRun {
    pub report: CurrentsRunReport,
    pub json: String,
    pub path: PathBuf,
}

/// `∂T = S` against `cfg.tests` seeded bumps.
pub fn cmd_currents(cfg: &RunConfig) -> Result<CurrentsRun> {
    let s = cfg.scenario()?;
    let balance = s.currents()?.verify(cfg.tests, cfg.seed, &cfg.quadrature)?;
    let report = CurrentsRunReport {
        scenario: s.name.clone(),
        seed: cfg.seed,
        tolerance: INTEGRAL_TOLERANCE,
        passed: balance.passes(INTEGRAL_TOLERANCE),
        balance,
    };
    let json = to_json(&report)?;
    let path = cfg.out_dir.join("currents.json");
    write_file(&path, &json)?;
    Ok(CurrentsRun { report, json, path })
}
