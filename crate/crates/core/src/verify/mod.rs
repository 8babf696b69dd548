//! Executable inequality checks over seeded random inputs.
//!
//! Every registered [`Check`] evaluates one family of inequalities on
//! `trials` generated inputs. A trial produces one or more comparisons
//! `lhs ⋚ rhs`, each turned into a relative margin:
//!
//! * `lhs ≤ rhs`: `(rhs − lhs)/|rhs|`
//! * `lhs ≥ rhs`: `(lhs − rhs)/|rhs|`
//! * `lhs = rhs`: `−|lhs − rhs|/|rhs|`
//!
//! A comparison passes when its margin is at least `−tolerance`. Monitor rows
//! record a value without a verdict.
//!
//! Checks that involve estimated extrema are arranged so the test stays
//! sound despite optimizer error: estimates of an infimum only overestimate
//! and estimates of a supremum only underestimate, so each check either
//! compares in the safe direction or feeds one search's optimizer into
//! the other as a starting body (the estimate can then only improve on the
//! value the inequality needs). The `soundness` text of each check says which.

mod checks;
pub mod gen;

use std::collections::BTreeMap;

use rand::{RngCore, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::bodies::{polar, StarBody};
use crate::error::{Error, Result};
use crate::extremal::{
    self, ExtremalProblem, ExtremalResult, IthMixedProblem, MultiMode, MultiProblem, SearchOptions,
    Target,
};
use crate::functionals::{self, vrad_from_volume};
use crate::orlicz::OrliczFunction;
use crate::sphgrid::{Scheme, SphericalGrid};

pub use checks::registry;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Mode {
    /// Every comparison must hold within tolerance.
    Exact,
    /// Margins are recorded only.
    Monitor,
}

/// Which default tolerance a comparison uses.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum ToleranceKind {
    /// Depends on quadrature accuracy only.
    Quadrature,
    /// Involves estimated extrema.
    Optimizer,
    /// An exact discrete identity (Hölder or Jensen on the same nodes).
    Exact,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Verdict {
    Pass,
    Fail,
    Recorded,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum RowVerdict {
    Pass,
    Fail,
    Recorded,
    Error,
}

impl RowVerdict {
    pub fn name(self) -> &'static str {
        match self {
            RowVerdict::Pass => "pass",
            RowVerdict::Fail => "fail",
            RowVerdict::Recorded => "recorded",
            RowVerdict::Error => "error",
        }
    }
}

pub(crate) type TrialFn = fn(&mut Trial) -> Result<Vec<Comparison>>;

/// A registered check.
#[derive(Debug, Clone, Copy)]
pub struct Check {
    pub number: usize,
    pub id: &'static str,
    pub statement: &'static str,
    /// How the check stays sound given one-sided optimizer error.
    pub soundness: &'static str,
    pub mode: Mode,
    /// Kind of the check's main comparisons; a configured override applies to these.
    pub kind: ToleranceKind,
    pub(crate) run: TrialFn,
}

impl Check {
    pub fn tolerance(&self, config: &VerifyConfig) -> f64 {
        config
            .tolerances
            .get(self.id)
            .copied()
            .unwrap_or_else(|| config.default_tolerance(self.kind))
    }

    fn row_tolerance(&self, kind: ToleranceKind, config: &VerifyConfig) -> f64 {
        if kind == self.kind {
            self.tolerance(config)
        } else {
            config.default_tolerance(kind)
        }
    }
}

/// Looks a check up by id or by number.
pub fn find_check(key: &str) -> Result<Check> {
    let key = key.trim();
    registry()
        .into_iter()
        .find(|c| c.id == key || key.parse::<usize>().ok() == Some(c.number))
        .ok_or_else(|| Error::Configuration(format!("unknown check '{key}'")))
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct VerifyConfig {
    pub seed: u64,
    pub trials: usize,
    pub dimension: usize,
    /// Nodes for quadrature-only checks; `None` picks 512 (n = 2) or 20000.
    pub quadrature_resolution: Option<usize>,
    /// Nodes for checks that run the optimizer; `None` picks 256 (n = 2) or 400.
    pub search_resolution: Option<usize>,
    pub budget: usize,
    pub restarts: usize,
    /// Per-check tolerance overrides, keyed by check id.
    pub tolerances: BTreeMap<String, f64>,
}

impl Default for VerifyConfig {
    fn default() -> Self {
        VerifyConfig {
            seed: 0,
            trials: 100,
            dimension: 2,
            quadrature_resolution: None,
            search_resolution: None,
            budget: 1500,
            restarts: 3,
            tolerances: BTreeMap::new(),
        }
    }
}

impl VerifyConfig {
    pub fn default_tolerance(&self, kind: ToleranceKind) -> f64 {
        match kind {
            ToleranceKind::Quadrature if self.dimension == 2 => 1e-3,
            ToleranceKind::Quadrature => 2e-2,
            ToleranceKind::Optimizer => 3e-2,
            ToleranceKind::Exact => 1e-12,
        }
    }

    pub fn validate(&self) -> Result<()> {
        if self.trials == 0 {
            return Err(Error::Configuration("trials must be positive".into()));
        }
        if self.dimension < 2 {
            return Err(Error::Configuration(format!(
                "dimension must be >= 2, got {}",
                self.dimension
            )));
        }
        if let Some((id, t)) = self.tolerances.iter().find(|(_, t)| !(**t > 0.0)) {
            return Err(Error::Configuration(format!(
                "tolerance for {id} must be positive, got {t}"
            )));
        }
        for id in self.tolerances.keys() {
            find_check(id)?;
        }
        Ok(())
    }

    fn grid(
        &self,
        resolution: Option<usize>,
        planar: usize,
        spatial: usize,
    ) -> Result<SphericalGrid> {
        let n = self.dimension;
        let res = resolution.unwrap_or(if n == 2 { planar } else { spatial });
        let scheme = Scheme::default_for(n);
        let seed = (scheme == Scheme::MonteCarlo).then_some(self.seed);
        SphericalGrid::build(n, res, scheme, seed)
    }
}

/// One CSV row.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Row {
    pub check: String,
    pub seed: u64,
    pub trial: usize,
    pub case: String,
    pub lhs: f64,
    pub rhs: f64,
    pub margin: f64,
    pub verdict: RowVerdict,
}

/// Raw inputs of a failing or erroring comparison, for replay.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Failure {
    pub trial: usize,
    pub case: String,
    pub digest: String,
    pub inputs: Vec<String>,
    pub lhs: f64,
    pub rhs: f64,
    pub margin: f64,
    /// Error text for erroring trials.
    pub error: Option<String>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CheckReport {
    pub id: String,
    pub number: usize,
    pub statement: String,
    pub soundness: String,
    pub mode: Mode,
    pub tolerance: f64,
    pub seed: u64,
    pub trials: usize,
    pub comparisons: usize,
    pub failures: Vec<Failure>,
    pub errors: usize,
    /// Smallest margin over non-monitor rows (`NaN` when there are none).
    pub min_margin: f64,
    /// Smallest recorded monitor value, if the check has monitor rows.
    pub monitor_min: Option<f64>,
    pub monitor_rows: usize,
    pub verdict: Verdict,
    #[serde(skip)]
    pub rows: Vec<Row>,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub(crate) enum Relation {
    Le,
    Ge,
    Eq,
    /// Recorded value.
    Monitor(f64),
}

#[derive(Debug, Clone, PartialEq)]
pub(crate) struct Comparison {
    pub case: String,
    pub lhs: f64,
    pub rhs: f64,
    pub relation: Relation,
    pub kind: ToleranceKind,
}

impl Comparison {
    pub fn le(case: impl Into<String>, lhs: f64, rhs: f64, kind: ToleranceKind) -> Self {
        Self::new(case, lhs, rhs, Relation::Le, kind)
    }

    pub fn ge(case: impl Into<String>, lhs: f64, rhs: f64, kind: ToleranceKind) -> Self {
        Self::new(case, lhs, rhs, Relation::Ge, kind)
    }

    pub fn eq(case: impl Into<String>, lhs: f64, rhs: f64, kind: ToleranceKind) -> Self {
        Self::new(case, lhs, rhs, Relation::Eq, kind)
    }

    /// Records `value`; `lhs` and `rhs` are the quantities it was derived from.
    pub fn monitor(case: impl Into<String>, lhs: f64, rhs: f64, value: f64) -> Self {
        Self::new(
            case,
            lhs,
            rhs,
            Relation::Monitor(value),
            ToleranceKind::Exact,
        )
    }

    fn new(
        case: impl Into<String>,
        lhs: f64,
        rhs: f64,
        relation: Relation,
        kind: ToleranceKind,
    ) -> Self {
        Comparison {
            case: case.into(),
            lhs,
            rhs,
            relation,
            kind,
        }
    }

    pub fn margin(&self) -> f64 {
        let scale = self.rhs.abs();
        match self.relation {
            Relation::Le => (self.rhs - self.lhs) / scale,
            Relation::Ge => (self.lhs - self.rhs) / scale,
            Relation::Eq => -(self.lhs - self.rhs).abs() / scale,
            Relation::Monitor(v) => v,
        }
    }
}

/// Per-trial state handed to the check bodies.
pub(crate) struct Trial<'a> {
    pub index: usize,
    pub n: usize,
    pub rng: ChaCha8Rng,
    pub quad: &'a SphericalGrid,
    pub search: &'a SphericalGrid,
    pub options: SearchOptions,
    pub inputs: Vec<String>,
}

impl Trial<'_> {
    pub fn note(&mut self, label: &str, body: &StarBody) {
        self.inputs.push(format!("{label}={}", body.descriptor()));
    }

    pub fn note_text(&mut self, text: String) {
        self.inputs.push(text);
    }

    /// Index of a sub-case: the trial index modulo `count`, then the
    /// quotient modulo `inner` picks a variant.
    pub fn pick(&self, count: usize, inner: usize) -> (usize, usize) {
        (self.index % count, (self.index / count) % inner.max(1))
    }

    pub fn target(&self, salt: usize) -> Target {
        if (self.index / salt.max(1)) % 2 == 0 {
            Target::Affine
        } else {
            Target::Geominimal
        }
    }

    pub fn estimate(
        &self,
        target: Target,
        phi: &OrliczFunction,
        body: &StarBody,
        extra: Vec<StarBody>,
    ) -> Result<ExtremalResult> {
        let mut options = self.options.clone();
        options.extra_starts = extra;
        let problem = ExtremalProblem::auto(
            target,
            phi.clone(),
            body.clone(),
            self.search.clone(),
            options,
        )?;
        extremal::estimate(&problem)
    }

    #[allow(clippy::too_many_arguments)]
    pub fn estimate_ith(
        &self,
        target: Target,
        phi1: &OrliczFunction,
        phi2: &OrliczFunction,
        index: f64,
        k: &StarBody,
        l: &StarBody,
        extra: Vec<(StarBody, StarBody)>,
    ) -> Result<ExtremalResult> {
        let mut problem = IthMixedProblem::new(
            target,
            phi1.clone(),
            phi2.clone(),
            index,
            k.clone(),
            l.clone(),
            self.search.clone(),
            self.options.clone(),
        )?;
        problem.extra_pairs = extra;
        extremal::estimate_ith_mixed(&problem)
    }

    pub fn estimate_multi(
        &self,
        target: Target,
        phis: &[OrliczFunction],
        bodies: &[StarBody],
        extra: Vec<Vec<StarBody>>,
    ) -> Result<ExtremalResult> {
        let mut problem = MultiProblem::new(
            target,
            phis.to_vec(),
            bodies.to_vec(),
            self.search.clone(),
            self.options.clone(),
            MultiMode::Joint,
        )?;
        problem.extra_starts = extra;
        extremal::estimate_multi(&problem)
    }

    /// Volume on the search grid, consistent with the estimators.
    pub fn search_volume(&self, k: &StarBody) -> Result<f64> {
        Ok(functionals::volume(k, self.search)?.value)
    }

    pub fn search_vrad(&self, k: &StarBody) -> Result<f64> {
        Ok(vrad_from_volume(self.search_volume(k)?, self.n))
    }

    pub fn search_polar_vrad(&self, k: &StarBody) -> Result<f64> {
        self.search_vrad(&polar(k, self.search)?)
    }
}

fn trial_seed(seed: u64, number: usize, trial: usize) -> u64 {
    let mut s = ChaCha8Rng::seed_from_u64(seed);
    s.set_stream(((number as u64) << 32) | trial as u64);
    s.next_u64()
}

/// Grids and settings shared by a run over several checks.
pub struct Verifier {
    config: VerifyConfig,
    quad: SphericalGrid,
    search: SphericalGrid,
}

impl Verifier {
    pub fn new(config: VerifyConfig) -> Result<Self> {
        config.validate()?;
        let quad = config.grid(config.quadrature_resolution, 512, 20_000)?;
        let search = config.grid(config.search_resolution, 256, 400)?;
        Ok(Verifier {
            config,
            quad,
            search,
        })
    }

    pub fn config(&self) -> &VerifyConfig {
        &self.config
    }

    pub fn run(&self, check: &Check) -> CheckReport {
        let cfg = &self.config;
        let mut rows = Vec::new();
        let mut failures = Vec::new();
        let mut errors = 0;
        let mut comparisons = 0;
        let mut min_margin = f64::NAN;
        let mut monitor_min: Option<f64> = None;
        let mut monitor_rows = 0;
        for trial in 0..cfg.trials {
            let mut rng = ChaCha8Rng::seed_from_u64(trial_seed(cfg.seed, check.number, trial));
            let options = SearchOptions {
                budget: cfg.budget,
                restarts: cfg.restarts,
                seed: rng.next_u64(),
                ..SearchOptions::default()
            };
            let mut t = Trial {
                index: trial,
                n: cfg.dimension,
                rng,
                quad: &self.quad,
                search: &self.search,
                options,
                inputs: Vec::new(),
            };
            let outcome = (check.run)(&mut t);
            let digest_of = |case: &str| {
                let mut parts = vec![
                    check.id.to_string(),
                    cfg.seed.to_string(),
                    trial.to_string(),
                    case.to_string(),
                ];
                parts.extend(t.inputs.iter().cloned());
                functionals::digest(&parts.iter().map(String::as_str).collect::<Vec<_>>())
            };
            match outcome {
                Ok(list) => {
                    for c in list {
                        let margin = c.margin();
                        let verdict = match c.relation {
                            Relation::Monitor(_) => RowVerdict::Recorded,
                            _ if check.mode == Mode::Monitor => RowVerdict::Recorded,
                            _ if margin >= -check.row_tolerance(c.kind, cfg) => RowVerdict::Pass,
                            _ => RowVerdict::Fail,
                        };
                        if let Relation::Monitor(v) = c.relation {
                            monitor_rows += 1;
                            if v.is_finite() {
                                monitor_min = Some(monitor_min.map_or(v, |m| m.min(v)));
                            }
                        } else {
                            comparisons += 1;
                            if !margin.is_nan() && (min_margin.is_nan() || margin < min_margin) {
                                min_margin = margin;
                            }
                        }
                        if verdict == RowVerdict::Fail {
                            failures.push(Failure {
                                trial,
                                case: c.case.clone(),
                                digest: digest_of(&c.case),
                                inputs: t.inputs.clone(),
                                lhs: c.lhs,
                                rhs: c.rhs,
                                margin,
                                error: None,
                            });
                        }
                        rows.push(Row {
                            check: check.id.to_string(),
                            seed: cfg.seed,
                            trial,
                            case: c.case,
                            lhs: c.lhs,
                            rhs: c.rhs,
                            margin,
                            verdict,
                        });
                    }
                }
                Err(e) => {
                    errors += 1;
                    failures.push(Failure {
                        trial,
                        case: "error".into(),
                        digest: digest_of("error"),
                        inputs: t.inputs.clone(),
                        lhs: f64::NAN,
                        rhs: f64::NAN,
                        margin: f64::NAN,
                        error: Some(e.to_string()),
                    });
                    rows.push(Row {
                        check: check.id.to_string(),
                        seed: cfg.seed,
                        trial,
                        case: "error".into(),
                        lhs: f64::NAN,
                        rhs: f64::NAN,
                        margin: f64::NAN,
                        verdict: RowVerdict::Error,
                    });
                }
            }
        }
        let verdict = match check.mode {
            Mode::Monitor => Verdict::Recorded,
            Mode::Exact if failures.is_empty() => Verdict::Pass,
            Mode::Exact => Verdict::Fail,
        };
        if check.mode == Mode::Monitor {
            failures.retain(|f| f.error.is_some());
        }
        CheckReport {
            id: check.id.to_string(),
            number: check.number,
            statement: check.statement.to_string(),
            soundness: check.soundness.to_string(),
            mode: check.mode,
            tolerance: check.tolerance(cfg),
            seed: cfg.seed,
            trials: cfg.trials,
            comparisons,
            failures,
            errors,
            min_margin,
            monitor_min,
            monitor_rows,
            verdict,
            rows,
        }
    }
}

/// Runs one check with its own grids.
pub fn run_check(check: &Check, config: &VerifyConfig) -> Result<CheckReport> {
    Ok(Verifier::new(config.clone())?.run(check))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn registry_is_complete_and_unique() {
        let r = registry();
        assert_eq!(r.len(), 22);
        for (i, c) in r.iter().enumerate() {
            assert_eq!(c.number, i + 1);
            assert!(r.iter().filter(|d| d.id == c.id).count() == 1, "{}", c.id);
            assert!(!c.statement.is_empty() && !c.soundness.is_empty());
        }
        assert_eq!(find_check("7").unwrap().id, "sp-power-isoperimetric");
        assert!(find_check("no-such-check").is_err());
    }

    #[test]
    fn margins_follow_the_relation() {
        let k = ToleranceKind::Exact;
        assert_eq!(Comparison::le("", 1.0, 2.0, k).margin(), 0.5);
        assert_eq!(Comparison::ge("", 1.0, 2.0, k).margin(), -0.5);
        assert_eq!(Comparison::eq("", 3.0, 2.0, k).margin(), -0.5);
        assert_eq!(Comparison::monitor("", 3.0, 2.0, 0.7).margin(), 0.7);
    }

    #[test]
    fn runs_are_deterministic() {
        let cfg = VerifyConfig {
            trials: 6,
            seed: 3,
            ..VerifyConfig::default()
        };
        let check = find_check("dual-orlicz-minkowski").unwrap();
        let a = run_check(&check, &cfg).unwrap();
        let b = run_check(&check, &cfg).unwrap();
        assert_eq!(a.rows, b.rows);
        assert_eq!(a.verdict, Verdict::Pass);
        let c = run_check(&check, &VerifyConfig { seed: 4, ..cfg }).unwrap();
        assert_ne!(a.rows, c.rows);
    }

    #[test]
    fn config_rejects_bad_tolerances() {
        let mut cfg = VerifyConfig::default();
        cfg.tolerances.insert("ordering-chain".into(), 0.0);
        assert!(Verifier::new(cfg.clone()).is_err());
        cfg.tolerances.clear();
        cfg.tolerances.insert("nope".into(), 1.0);
        assert!(Verifier::new(cfg).is_err());
    }
}
