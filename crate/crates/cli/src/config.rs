use std::collections::BTreeMap;
use std::path::{Path, PathBuf};

use orlicz_core::extremal::MultiMode;
use orlicz_core::{
    BodySpec, FunctionSpec, OrliczFunction, Scheme, Sense, SphericalGrid, StarBody, Target,
};
use serde::{Deserialize, Serialize};

use crate::error::{CliError, CliResult};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Command {
    Compute,
    Estimate,
    Verify,
    Sweep,
}

impl Command {
    pub fn name(self) -> &'static str {
        match self {
            Command::Compute => "compute",
            Command::Estimate => "estimate",
            Command::Verify => "verify",
            Command::Sweep => "sweep",
        }
    }
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RunConfig {
    pub command: Command,
    #[serde(default)]
    pub seed: u64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub out: Option<PathBuf>,
    #[serde(default)]
    pub grid: GridConfig,
    #[serde(default)]
    pub bodies: BTreeMap<String, BodySpec>,
    #[serde(default)]
    pub functions: BTreeMap<String, FunctionSpec>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub compute: Option<ComputeConfig>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub estimate: Option<EstimateConfig>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub verify: Option<VerifySection>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub sweep: Option<SweepConfig>,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GridConfig {
    #[serde(default = "two")]
    pub dimension: usize,
    /// Defaults to 512 nodes on the circle, 20000 otherwise.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub resolution: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub scheme: Option<Scheme>,
}

fn two() -> usize {
    2
}

impl Default for GridConfig {
    fn default() -> Self {
        GridConfig {
            dimension: 2,
            resolution: None,
            scheme: None,
        }
    }
}

impl GridConfig {
    pub fn resolution(&self) -> usize {
        self.resolution
            .unwrap_or(if self.dimension == 2 { 512 } else { 20_000 })
    }

    pub fn build_with(&self, resolution: usize, seed: u64) -> CliResult<SphericalGrid> {
        let scheme = self
            .scheme
            .unwrap_or_else(|| Scheme::default_for(self.dimension));
        let seed = (scheme == Scheme::MonteCarlo).then_some(seed);
        Ok(SphericalGrid::build(
            self.dimension,
            resolution,
            scheme,
            seed,
        )?)
    }

    pub fn build(&self, seed: u64) -> CliResult<SphericalGrid> {
        self.build_with(self.resolution(), seed)
    }
}

#[derive(Debug, Clone, Default, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ComputeConfig {
    /// volume | vrad | dual-mixed | dual-surface | dual-mean-radius |
    /// primal-mixed | primal-surface | primal-mean-width | multi-dual | ith-dual
    pub functional: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub phi: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub phi2: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub phis: Option<Vec<String>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub k: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub l: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub q1: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub q2: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub ks: Option<Vec<String>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub ls: Option<Vec<String>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub index: Option<f64>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Problem {
    #[default]
    Single,
    Ith,
    Multi,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum SearchMethod {
    #[default]
    Full,
    EllipsoidRestricted,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct EstimateConfig {
    pub target: Target,
    /// Checked against the class of `phi` when given.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub sense: Option<Sense>,
    #[serde(default)]
    pub problem: Problem,
    #[serde(default)]
    pub method: SearchMethod,
    #[serde(default = "joint")]
    pub mode: MultiMode,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub phi: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub phi2: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub phis: Option<Vec<String>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub k: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub l: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub ks: Option<Vec<String>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub index: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub budget: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub restarts: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub initial_step: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub min_step: Option<f64>,
}

fn joint() -> MultiMode {
    MultiMode::Joint
}

#[derive(Debug, Clone, Default, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct VerifySection {
    /// Check ids or numbers; empty or `["all"]` selects every check.
    #[serde(default)]
    pub checks: Vec<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub trials: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub quadrature_resolution: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub search_resolution: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub budget: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub restarts: Option<usize>,
    #[serde(default)]
    pub tolerances: BTreeMap<String, f64>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum SweepParameter {
    /// Exponent of `φ = t^p`.
    P,
    Resolution,
    /// Roughness of a seeded random star.
    Roughness,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SweepConfig {
    pub parameter: SweepParameter,
    pub values: Vec<f64>,
    /// p: sp-ratio | dual-surface | dual-mean-radius;
    /// resolution: volume | vrad;
    /// roughness: volume | santalo-product
    pub quantity: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub k: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub symmetric: Option<bool>,
}

/// Command-line overrides, applied after the file is read.
#[derive(Debug, Clone, Default)]
pub struct Overrides {
    pub out: Option<PathBuf>,
    pub seed: Option<u64>,
    pub checks: Option<Vec<String>>,
    pub trials: Option<usize>,
    pub grid: Option<usize>,
}

impl RunConfig {
    pub fn parse(text: &str, path: &Path) -> CliResult<RunConfig> {
        toml::from_str(text).map_err(|e| CliError::Config {
            path: path.to_path_buf(),
            message: e.to_string(),
        })
    }

    pub fn load(path: &Path) -> CliResult<RunConfig> {
        let text = std::fs::read_to_string(path).map_err(|source| CliError::Io {
            path: path.to_path_buf(),
            source,
        })?;
        Self::parse(&text, path)
    }

    pub fn apply(&mut self, o: Overrides) -> CliResult<()> {
        if let Some(out) = o.out {
            self.out = Some(out);
        }
        if let Some(seed) = o.seed {
            self.seed = seed;
        }
        if let Some(res) = o.grid {
            self.grid.resolution = Some(res);
        }
        if o.checks.is_some() || o.trials.is_some() {
            if self.command != Command::Verify {
                return Err(CliError::Usage(
                    "--checks and --trials apply to the verify command".into(),
                ));
            }
            let v = self.verify.get_or_insert_with(VerifySection::default);
            if let Some(c) = o.checks {
                v.checks = c;
            }
            if o.trials.is_some() {
                v.trials = o.trials;
            }
        }
        Ok(())
    }

    pub fn out_dir(&self) -> PathBuf {
        self.out.clone().unwrap_or_else(|| PathBuf::from("out"))
    }

    pub fn to_text(&self) -> CliResult<String> {
        toml::to_string(self).map_err(|e| CliError::Usage(format!("cannot serialize config: {e}")))
    }

    pub fn body(&self, name: &str, grid: &SphericalGrid) -> CliResult<StarBody> {
        let spec = self.bodies.get(name).ok_or_else(|| {
            CliError::Usage(format!(
                "unknown body '{name}'; define it under [bodies.{name}]"
            ))
        })?;
        spec.build(grid, self.seed)
            .map_err(|e| CliError::Usage(format!("body '{name}': {e}")))
    }

    pub fn function(&self, name: &str) -> CliResult<OrliczFunction> {
        let spec = self.functions.get(name).ok_or_else(|| {
            CliError::Usage(format!(
                "unknown function '{name}'; define it under [functions.{name}]"
            ))
        })?;
        spec.build()
            .map_err(|e| CliError::Usage(format!("function '{name}': {e}")))
    }
}

/// Unwraps an optional config field or reports which one is missing.
pub fn required<'a, T>(value: &'a Option<T>, section: &str, field: &str) -> CliResult<&'a T> {
    value
        .as_ref()
        .ok_or_else(|| CliError::Usage(format!("[{section}] requires '{field}'")))
}
