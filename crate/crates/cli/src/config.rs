use std::path::{Path, PathBuf};

use anyhow::{bail, ensure, Context, Result};
use clap::Args;
use serde::{Deserialize, Serialize};
use serde_json::Value;

use formflux_core::geometry::Quadrature;
use formflux_core::scenarios::{by_name, Scenario, ScenarioParams, DEFAULT_MAX_STEPS, SCENARIO_NAMES};

pub const DEFAULT_TESTS: usize = 20;

/// Everything a subcommand needs, read from one JSON document.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct RunConfig {
    pub scenario: String,
    pub params: ScenarioParams,
    pub quadrature: Quadrature,
    pub ode_step: f64,
    pub max_steps: usize,
    /// Worldline seeds; the scenario's own when absent.
    pub seeds: Option<Vec<Vec<f64>>>,
    /// Seed of every random draw: sample points and probe placement.
    pub seed: u64,
    /// Number of probes for `currents`.
    pub tests: usize,
    pub out_dir: PathBuf,
    pub svg: bool,
}

impl Default for RunConfig {
    fn default() -> Self {
        Self {
            scenario: "example1".into(),
            params: ScenarioParams::default(),
            quadrature: Quadrature::default(),
            ode_step: 1e-3,
            max_steps: DEFAULT_MAX_STEPS,
            seeds: None,
            seed: 42,
            tests: DEFAULT_TESTS,
            out_dir: PathBuf::from("out"),
            svg: true,
        }
    }
}

/// Flags shared by every subcommand; each overrides the config file.
#[derive(Args, Clone, Debug, Default)]
pub struct Overrides {
    /// JSON config file
    #[arg(long)]
    pub config: Option<PathBuf>,
    #[arg(long)]
    pub scenario: Option<String>,
    #[arg(long)]
    pub ode_step: Option<f64>,
    #[arg(long)]
    pub max_steps: Option<usize>,
    #[arg(long)]
    pub quad_order: Option<usize>,
    #[arg(long)]
    pub subcells: Option<usize>,
    #[arg(long)]
    pub support_subcells: Option<usize>,
    #[arg(long)]
    pub seed: Option<u64>,
    #[arg(long)]
    pub tests: Option<usize>,
    #[arg(long)]
    pub out_dir: Option<PathBuf>,
    /// Skip the SVG plot
    #[arg(long)]
    pub no_svg: bool,
    /// Scenario parameter as KEY=VALUE, VALUE in JSON (repeatable)
    #[arg(long = "param", value_name = "KEY=VALUE")]
    pub params: Vec<String>,
}

impl RunConfig {
    pub fn from_file(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path)
            .with_context(|| format!("reading config {}", path.display()))?;
        serde_json::from_str(&text).with_context(|| format!("parsing config {}", path.display()))
    }

    /// Config file (if any) with flags applied on top, validated.
    pub fn resolve(o: &Overrides) -> Result<Self> {
        let mut c = match &o.config {
            Some(p) => Self::from_file(p)?,
            None => Self::default(),
        };
        if let Some(s) = &o.scenario {
            c.scenario = s.clone();
        }
        if let Some(v) = o.ode_step {
            c.ode_step = v;
        }
        if let Some(v) = o.max_steps {
            c.max_steps = v;
        }
        if let Some(v) = o.quad_order {
            c.quadrature.order = v;
        }
        if let Some(v) = o.subcells {
            c.quadrature.subcells = v;
        }
        if let Some(v) = o.support_subcells {
            c.quadrature.support_subcells = v;
        }
        if let Some(v) = o.seed {
            c.seed = v;
        }
        if let Some(v) = o.tests {
            c.tests = v;
        }
        if let Some(v) = &o.out_dir {
            c.out_dir = v.clone();
        }
        if o.no_svg {
            c.svg = false;
        }
        for kv in &o.params {
            c.params = set_param(&c.params, kv)?;
        }
        c.validate()?;
        Ok(c)
    }

    pub fn validate(&self) -> Result<()> {
        ensure!(
            SCENARIO_NAMES.contains(&self.scenario.as_str()),
            "unknown scenario `{}` (known: {})",
            self.scenario,
            SCENARIO_NAMES.join(", ")
        );
        ensure!(
            self.ode_step > 0.0 && self.ode_step.is_finite(),
            "ode_step must be positive, got {}",
            self.ode_step
        );
        ensure!(self.max_steps > 0, "max_steps must be positive");
        let q = &self.quadrature;
        for (name, v) in [
            ("quadrature order", q.order),
            ("subcells", q.subcells),
            ("support_subcells", q.support_subcells),
            ("support_refine", q.support_refine),
        ] {
            ensure!(v > 0, "{name} must be positive");
        }
        Ok(())
    }

    pub fn scenario(&self) -> Result<Scenario> {
        let mut params = self.params.clone();
        if let Some(seeds) = &self.seeds {
            params.seeds = Some(seeds.clone());
        }
        Ok(by_name(&self.scenario, &params)?)
    }
}

/// `KEY=VALUE` onto the parameters; VALUE is JSON, or a bare string.
fn set_param(params: &ScenarioParams, kv: &str) -> Result<ScenarioParams> {
    let Some((key, raw)) = kv.split_once('=') else {
        bail!("--param expects KEY=VALUE, got `{kv}`");
    };
    let value: Value =
        serde_json::from_str(raw).unwrap_or_else(|_| Value::String(raw.to_string()));
    let mut doc = serde_json::to_value(params)?;
    let obj = doc.as_object_mut().expect("params serialize to an object");
    ensure!(obj.contains_key(key), "unknown parameter `{key}`");
    obj.insert(key.to_string(), value);
    serde_json::from_value(doc).with_context(|| format!("bad value for parameter `{key}`"))
}
