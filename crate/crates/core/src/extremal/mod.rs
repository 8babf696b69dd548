//! Estimates of the dual Orlicz affine and geominimal surface areas
//!
//! ```text
//! Ω̃_φ(K) = inf/sup { n Ṽ_φ(K, vrad(L°)·L) : L star body }
//! G̃_φ(K) = inf/sup { n Ṽ_φ(K, vrad(L°)·L) : L convex body }
//! ```
//!
//! (inf for `φ ∈ Φ̃`, sup for `φ ∈ Ψ̃`) by derivative-free search over
//! origin-symmetric candidates. Restricting to symmetric `L` keeps the polar
//! centred without a projection step, so for `inf` every reported value is an
//! upper bound of the true infimum and for `sup` a lower bound of the supremum.
//!
//! Candidates are `log ρ_L = log ρ_start + Σ c_k b_k` for an even basis `b_k`.
//! Every evaluation rescales `L` to `|L°| = ω_n` before integrating, and the
//! geominimal variant replaces `L` by its convex hull first.

pub mod basis;
mod ellipsoid;
mod mixed;
mod search;

use serde::{Deserialize, Serialize};

pub use basis::Basis;
pub use mixed::{
    estimate_ith_mixed, estimate_multi, ith_objective, multi_objective, IthMixedProblem, MultiMode,
    MultiProblem,
};
pub use search::TracePoint;

use crate::bodies::{
    cloud, convex_hull, in_centered_class, in_polar_centered_class, make_random_star,
    radial_values, support_values, Flag, StarBody,
};
use crate::error::{Error, Result};
use crate::functionals::{dual_mixed_kernel, volume_kernel, vrad_from_volume};
use crate::orlicz::{classify, Classification, FunctionClass, OrliczFunction};
use crate::sphgrid::SphericalGrid;

use basis::Columns;
use search::{pattern_search, Settings};

/// Relative agreement required between the two best restarts.
pub const RESTART_AGREEMENT: f64 = 1e-3;
/// Centring tolerance used when deciding whether `K` itself is admissible.
const CLASS_TOLERANCE: f64 = 1e-3;
/// Bound on `|log ρ|` for search candidates.
const LOG_RADIUS_LIMIT: f64 = 40.0;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Target {
    /// Optimise over star bodies.
    Affine,
    /// Optimise over convex bodies.
    Geominimal,
}

impl Target {
    pub fn name(self) -> &'static str {
        match self {
            Target::Affine => "affine",
            Target::Geominimal => "geominimal",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Sense {
    Inf,
    Sup,
}

impl Sense {
    pub fn name(self) -> &'static str {
        match self {
            Sense::Inf => "inf",
            Sense::Sup => "sup",
        }
    }

    /// Factor turning the problem into a minimisation.
    pub fn sign(self) -> f64 {
        match self {
            Sense::Inf => 1.0,
            Sense::Sup => -1.0,
        }
    }

    /// True when `a` is strictly better than `b`.
    pub fn better(self, a: f64, b: f64) -> bool {
        self.sign() * a < self.sign() * b
    }

    /// The sense implied by a classification: `inf` for `Φ̃`, `sup` for `Ψ̃`.
    pub fn for_class(class: &Classification) -> Result<Sense> {
        if class.phi {
            Ok(Sense::Inf)
        } else if class.psi {
            Ok(Sense::Sup)
        } else {
            Err(Error::Precondition(format!(
                "function lies in neither Phi nor Psi (n = {})",
                class.dimension
            )))
        }
    }

    pub(crate) fn check(self, class: &Classification, label: &str) -> Result<()> {
        let ok = match self {
            Sense::Inf => class.contains(FunctionClass::Phi),
            Sense::Sup => class.contains(FunctionClass::Psi),
        };
        if ok {
            Ok(())
        } else {
            let needed = if self == Sense::Inf { "Phi" } else { "Psi" };
            Err(Error::Precondition(format!(
                "sense '{}' requires {label} in {needed}; its classes are {:?}",
                self.name(),
                class.classes()
            )))
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Method {
    /// Constant `φ`: no search needed.
    Closed,
    Full,
    EllipsoidRestricted,
    Joint,
    PerSlot,
}

impl Method {
    pub fn name(self) -> &'static str {
        match self {
            Method::Closed => "closed",
            Method::Full => "full",
            Method::EllipsoidRestricted => "ellipsoid-restricted",
            Method::Joint => "joint",
            Method::PerSlot => "per-slot",
        }
    }
}

#[derive(Debug, Clone)]
pub struct SearchOptions {
    /// Maximum number of objective evaluations.
    pub budget: usize,
    /// Number of built-in starting points (ball, symmetrised `K`, ellipsoid
    /// optimum, then seeded random symmetric bodies).
    pub restarts: usize,
    pub initial_step: f64,
    pub min_step: f64,
    pub seed: u64,
    /// `None` picks [`Basis::default_for`] the dimension.
    pub basis: Option<Basis>,
    /// Additional starting bodies; each is symmetrised before use.
    pub extra_starts: Vec<StarBody>,
    /// Roughness of the random starting bodies.
    pub start_roughness: f64,
}

impl Default for SearchOptions {
    fn default() -> Self {
        SearchOptions {
            budget: 20_000,
            restarts: 5,
            initial_step: 0.3,
            min_step: 1e-4,
            seed: 0,
            basis: None,
            extra_starts: Vec::new(),
            start_roughness: 0.3,
        }
    }
}

impl SearchOptions {
    fn validate(&self) -> Result<()> {
        if self.budget == 0 {
            return Err(Error::Configuration(
                "search budget must be positive".into(),
            ));
        }
        if !(self.initial_step > 0.0 && self.min_step > 0.0 && self.min_step <= self.initial_step) {
            return Err(Error::Configuration(format!(
                "need 0 < min_step <= initial_step, got {} and {}",
                self.min_step, self.initial_step
            )));
        }
        Ok(())
    }

    fn settings(&self) -> Settings {
        Settings {
            initial_step: self.initial_step,
            min_step: self.min_step,
        }
    }

    fn basis_for(&self, n: usize) -> Basis {
        self.basis.unwrap_or_else(|| Basis::default_for(n))
    }

    /// Seed of the `k`-th random start.
    fn start_seed(&self, k: usize) -> u64 {
        self.seed
            .wrapping_mul(0x9e37_79b9_7f4a_7c15)
            .wrapping_add(0x51a7_0000 + k as u64)
    }
}

#[derive(Debug, Clone)]
pub struct ExtremalProblem {
    pub target: Target,
    pub sense: Sense,
    pub phi: OrliczFunction,
    pub body: StarBody,
    pub grid: SphericalGrid,
    pub options: SearchOptions,
    pub classification: Classification,
}

impl ExtremalProblem {
    pub fn new(
        target: Target,
        sense: Sense,
        phi: OrliczFunction,
        body: StarBody,
        grid: SphericalGrid,
        options: SearchOptions,
    ) -> Result<Self> {
        if body.dimension() != grid.dimension() {
            return Err(Error::Configuration(format!(
                "body dimension {} does not match grid dimension {}",
                body.dimension(),
                grid.dimension()
            )));
        }
        options.validate()?;
        let classification = classify(&phi, grid.dimension())?;
        sense.check(&classification, phi.label())?;
        Ok(ExtremalProblem {
            target,
            sense,
            phi,
            body,
            grid,
            options,
            classification,
        })
    }

    /// Like [`ExtremalProblem::new`] with the sense read off the classification.
    pub fn auto(
        target: Target,
        phi: OrliczFunction,
        body: StarBody,
        grid: SphericalGrid,
        options: SearchOptions,
    ) -> Result<Self> {
        let sense = Sense::for_class(&classify(&phi, grid.dimension())?)?;
        Self::new(target, sense, phi, body, grid, options)
    }
}

#[derive(Debug, Clone)]
pub struct ExtremalResult {
    pub value: f64,
    /// Optimising bodies, normalised to `|L°| = ω_n`: one for single-body
    /// problems, `(Q₁, Q₂)` for i-th mixed ones, one per slot for multi-body ones.
    pub candidates: Vec<StarBody>,
    pub trace: Vec<TracePoint>,
    /// Objective at `L = B` (`S̃_φ(K)` for single-body problems).
    pub surface_marker: Option<f64>,
    /// `φ(1/vrad K)·n|K|`: a lower bound for `Φ̃₁`, an upper bound for `Ψ̃`.
    pub volume_marker: Option<f64>,
    /// `φ(vrad K°)·n|K|`: an upper bound for `Φ̃` when `K` is admissible.
    pub polar_volume_marker: Option<f64>,
    pub converged: bool,
    pub evaluations: usize,
    /// Final value of every search restart, in start order.
    pub restart_values: Vec<f64>,
    pub target: Target,
    pub sense: Sense,
    pub method: Method,
}

impl ExtremalResult {
    pub fn candidate(&self) -> &StarBody {
        &self.candidates[0]
    }
}

/// Scale factor `vrad(L°)` from support samples of `L`.
pub(crate) fn polar_vrad(grid: &SphericalGrid, h: &[f64]) -> Result<f64> {
    if let Some((i, v)) = h
        .iter()
        .enumerate()
        .find(|(_, v)| !(**v > 0.0 && v.is_finite()))
    {
        return Err(Error::NumericalDomain {
            node: i,
            detail: format!("support value {v}: origin not interior"),
        });
    }
    let inv: Vec<f64> = h.iter().map(|v| 1.0 / v).collect();
    Ok(vrad_from_volume(
        volume_kernel(grid, &inv)?,
        grid.dimension(),
    ))
}

/// `vrad(L°)·L` for `L`; afterwards `|L°| = ω_n` up to quadrature error.
pub fn normalize_polar_volume(l: &StarBody, grid: &SphericalGrid) -> Result<StarBody> {
    let lambda = polar_vrad(grid, &support_values(l, grid)?)?;
    l.scaled(lambda)
}

/// Radial samples of a body ready for the objective: hulled for the
/// geominimal target, then scaled to `|L°| = ω_n`.
pub(crate) fn prepared_radii(
    l: &StarBody,
    target: Target,
    grid: &SphericalGrid,
) -> Result<Vec<f64>> {
    let l = match target {
        Target::Affine => l.clone(),
        Target::Geominimal => convex_hull(l, grid)?,
    };
    let rho = radial_values(&l, grid)?;
    let lambda = polar_vrad(grid, &support_values(&l, grid)?)?;
    Ok(rho.into_iter().map(|r| r * lambda).collect())
}

/// Same as [`prepared_radii`] for raw samples of a sampled candidate.
pub(crate) fn prepared_samples(
    grid: &SphericalGrid,
    target: Target,
    rho: Vec<f64>,
) -> Result<Vec<f64>> {
    let h = cloud::support_on_grid(grid, &rho);
    let rho = match target {
        Target::Affine => rho,
        Target::Geominimal => {
            let inv: Vec<f64> = h.iter().map(|v| 1.0 / v).collect();
            cloud::support_on_grid(grid, &inv)
                .iter()
                .map(|v| 1.0 / v)
                .collect()
        }
    };
    let lambda = polar_vrad(grid, &h)?;
    Ok(rho.into_iter().map(|r| r * lambda).collect())
}

/// `n Ṽ_φ(K, vrad(L°)·L)`, with `L` replaced by its hull for the geominimal target.
pub fn objective(problem: &ExtremalProblem, l: &StarBody) -> Result<f64> {
    let grid = &problem.grid;
    let n = grid.dimension() as f64;
    let rho_k = radial_values(&problem.body, grid)?;
    if let Some(alpha) = problem.phi.as_constant() {
        return Ok(alpha * n * volume_kernel(grid, &rho_k)?);
    }
    let rho_l = prepared_radii(l, problem.target, grid)?;
    Ok(n * dual_mixed_kernel(grid, &problem.phi, &rho_k, &rho_l)?)
}

/// `½(log ρ(u) + log ρ(−u))` at every node: the log-radial samples of the
/// symmetrisation `√(ρ(u)ρ(−u))`.
pub(crate) fn symmetric_log_radial(body: &StarBody, grid: &SphericalGrid) -> Result<Vec<f64>> {
    let mut out = Vec::with_capacity(grid.len());
    let mut neg = vec![0.0; grid.dimension()];
    for (i, u) in grid.nodes().enumerate() {
        for (a, b) in neg.iter_mut().zip(u) {
            *a = -b;
        }
        let (p, q) = (body.radial(u), body.radial(&neg));
        if !(p > 0.0 && q > 0.0 && p.is_finite() && q.is_finite()) {
            return Err(Error::InvalidBody(format!(
                "radial values {p}, {q} at node {i} of {}",
                body.descriptor()
            )));
        }
        out.push(0.5 * (p.ln() + q.ln()));
    }
    Ok(out)
}

fn random_log_radial(
    n: usize,
    grid: &SphericalGrid,
    seed: u64,
    roughness: f64,
) -> Result<Vec<f64>> {
    let body = make_random_star(n, seed, roughness, true)?;
    Ok(radial_values(&body, grid)?.iter().map(|r| r.ln()).collect())
}

/// Outcome of a multi-start search over one or more parameter blocks.
pub(crate) struct MultiStart {
    /// Prepared (hulled and normalised) radii per block of the best restart.
    pub radii: Vec<Vec<f64>>,
    pub restart_values: Vec<f64>,
    pub trace: Vec<TracePoint>,
    pub evaluations: usize,
    pub converged: bool,
}

pub(crate) struct BlockSearch<'a> {
    pub grid: &'a SphericalGrid,
    pub target: Target,
    pub sense: Sense,
    pub columns: &'a Columns,
    pub settings: Settings,
}

struct BlockCache {
    params: Vec<f64>,
    radii: Option<Vec<f64>>,
}

impl BlockSearch<'_> {
    fn block_radii(&self, base: &[f64], x: &[f64], scratch: &mut Vec<f64>) -> Option<Vec<f64>> {
        self.columns.combine(base, x, scratch);
        if scratch.iter().any(|v| !(v.abs() <= LOG_RADIUS_LIMIT)) {
            return None;
        }
        let rho: Vec<f64> = scratch.iter().map(|v| v.exp()).collect();
        prepared_samples(self.grid, self.target, rho).ok()
    }

    /// Runs one pattern search per start. `starts[s][j]` is the log-radial
    /// base of block `j` for start `s`; `eval` receives prepared radii.
    pub fn run(
        &self,
        starts: &[Vec<Vec<f64>>],
        budget: usize,
        eval: &dyn Fn(&[&[f64]]) -> Result<f64>,
    ) -> Option<MultiStart> {
        let d = self.columns.len();
        let sign = self.sense.sign();
        let per_start = (budget / starts.len().max(1)).max(1);
        let mut trace = Vec::new();
        let mut evaluations = 0;
        let mut restarts: Vec<(f64, f64, Vec<f64>)> = Vec::new();
        for (s, bases) in starts.iter().enumerate() {
            let blocks = bases.len();
            let mut cache: Vec<BlockCache> = (0..blocks)
                .map(|_| BlockCache {
                    params: vec![f64::NAN; d],
                    radii: None,
                })
                .collect();
            let mut scratch = Vec::new();
            let mut f = |x: &[f64]| -> Option<f64> {
                for j in 0..blocks {
                    let xj = &x[j * d..(j + 1) * d];
                    if cache[j].params.as_slice() != xj {
                        cache[j].params = xj.to_vec();
                        cache[j].radii = self.block_radii(&bases[j], xj, &mut scratch);
                    }
                }
                let refs: Option<Vec<&[f64]>> = cache.iter().map(|c| c.radii.as_deref()).collect();
                eval(&refs?).ok().map(|v| sign * v)
            };
            let out = pattern_search(vec![0.0; blocks * d], self.settings, per_start, &mut f);
            trace.extend(out.trace.iter().map(|&(e, v, step)| TracePoint {
                evaluation: evaluations + e,
                restart: s,
                objective: sign * v,
                step,
            }));
            evaluations += out.evaluations;
            restarts.push((out.best, out.final_step, out.x));
        }
        let best = (0..restarts.len())
            .filter(|&i| restarts[i].0.is_finite())
            .min_by(|&a, &b| restarts[a].0.total_cmp(&restarts[b].0))?;
        let (_, best_step, x) = &restarts[best];
        let mut scratch = Vec::new();
        let radii: Option<Vec<Vec<f64>>> = starts[best]
            .iter()
            .enumerate()
            .map(|(j, base)| self.block_radii(base, &x[j * d..(j + 1) * d], &mut scratch))
            .collect();
        let mut finite: Vec<f64> = restarts
            .iter()
            .map(|r| r.0)
            .filter(|v| v.is_finite())
            .collect();
        finite.sort_by(f64::total_cmp);
        let agree = finite.len() < 2
            || (finite[1] - finite[0]).abs() <= RESTART_AGREEMENT * finite[0].abs();
        Some(MultiStart {
            radii: radii?,
            restart_values: restarts.iter().map(|r| sign * r.0).collect(),
            trace,
            evaluations,
            converged: *best_step < self.settings.min_step && agree,
        })
    }
}

fn closed_form_result(problem: &ExtremalProblem) -> Result<ExtremalResult> {
    let value = objective(problem, &StarBody::unit_ball(problem.grid.dimension()))?;
    Ok(ExtremalResult {
        value,
        candidates: vec![StarBody::unit_ball(problem.grid.dimension())],
        trace: Vec::new(),
        surface_marker: Some(value),
        volume_marker: Some(value),
        polar_volume_marker: Some(value),
        converged: true,
        evaluations: 0,
        restart_values: Vec::new(),
        target: problem.target,
        sense: problem.sense,
        method: Method::Closed,
    })
}

/// Whether `K` itself (or its hull) is an admissible candidate.
fn body_admissible(problem: &ExtremalProblem) -> bool {
    let (k, grid) = (&problem.body, &problem.grid);
    match problem.target {
        Target::Affine => {
            k.symmetry().is_yes()
                || in_polar_centered_class(k, grid, CLASS_TOLERANCE).unwrap_or(false)
        }
        Target::Geominimal => {
            k.convexity().is_yes() && in_centered_class(k, grid, CLASS_TOLERANCE).unwrap_or(false)
        }
    }
}

struct Markers {
    surface: Option<f64>,
    volume: Option<f64>,
    polar_volume: Option<f64>,
}

fn markers(problem: &ExtremalProblem, admissible: bool) -> Result<Markers> {
    let grid = &problem.grid;
    let n = grid.dimension();
    let class = &problem.classification;
    let rho_k = radial_values(&problem.body, grid)?;
    let vol = volume_kernel(grid, &rho_k)?;
    let vrad = vrad_from_volume(vol, n);
    let volume = if class.phi_one || class.psi {
        Some(problem.phi.eval(1.0 / vrad) * n as f64 * vol)
    } else {
        None
    };
    let polar_volume = if class.phi && admissible {
        let pv = polar_vrad(grid, &support_values(&problem.body, grid)?)?;
        Some(problem.phi.eval(pv) * n as f64 * vol)
    } else {
        None
    };
    Ok(Markers {
        surface: objective(problem, &StarBody::unit_ball(n)).ok(),
        volume,
        polar_volume,
    })
}

/// Picks the best of the `(value, body)` competitors by `sense`.
fn pick_best(sense: Sense, competitors: Vec<(f64, StarBody)>) -> Option<(f64, StarBody)> {
    competitors
        .into_iter()
        .filter(|(v, _)| v.is_finite())
        .reduce(|a, b| if sense.better(b.0, a.0) { b } else { a })
}

/// Ellipsoid-restricted search. Returns `(value, body, trace, evaluations, converged)`.
fn ellipsoid_search(
    problem: &ExtremalProblem,
    budget: usize,
) -> Result<(f64, StarBody, Vec<TracePoint>, usize, bool)> {
    let grid = &problem.grid;
    let n = grid.dimension();
    let nf = n as f64;
    let sign = problem.sense.sign();
    let rho_k = radial_values(&problem.body, grid)?;
    let mut f = |x: &[f64]| -> Option<f64> {
        let s = ellipsoid::matrix_from_params(n, x);
        let (a, a_inv) = ellipsoid::exp_pair(&s);
        let (rho, h) = ellipsoid::samples(grid, &a, &a_inv);
        let lambda = polar_vrad(grid, &h).ok()?;
        let rho: Vec<f64> = rho.iter().map(|r| r * lambda).collect();
        dual_mixed_kernel(grid, &problem.phi, &rho_k, &rho)
            .ok()
            .map(|v| sign * nf * v)
    };
    let starts = [
        ellipsoid::warm_start(grid, &rho_k),
        vec![0.0; ellipsoid::param_count(n)],
    ];
    let per_start = (budget / starts.len()).max(1);
    let mut trace = Vec::new();
    let mut evaluations = 0;
    let mut outs = Vec::new();
    for (s, x0) in starts.iter().enumerate() {
        let out = pattern_search(x0.clone(), problem.options.settings(), per_start, &mut f);
        trace.extend(out.trace.iter().map(|&(e, v, step)| TracePoint {
            evaluation: evaluations + e,
            restart: s,
            objective: sign * v,
            step,
        }));
        evaluations += out.evaluations;
        outs.push(out);
    }
    let best = if outs[1].best < outs[0].best { 1 } else { 0 };
    if !outs[best].best.is_finite() {
        return Err(Error::OptimizationFailure(
            "no ellipsoid candidate could be evaluated".into(),
        ));
    }
    let (v0, v1) = (outs[0].best, outs[1].best);
    let converged = outs[best].final_step < problem.options.min_step
        && (v0 - v1).abs() <= RESTART_AGREEMENT * v0.abs().min(v1.abs());
    let s = ellipsoid::matrix_from_params(n, &outs[best].x);
    let (a, _) = ellipsoid::exp_pair(&s);
    let body = normalize_polar_volume(&ellipsoid::body(&a)?, grid)?;
    let value = objective(problem, &body)?;
    Ok((value, body, trace, evaluations, converged))
}

/// Optimises over origin-symmetric ellipsoids `exp(S)·B`, `tr S = 0`.
pub fn estimate_ellipsoid_restricted(problem: &ExtremalProblem) -> Result<ExtremalResult> {
    if problem.classification.is_constant() {
        return closed_form_result(problem);
    }
    let admissible = body_admissible(problem);
    let m = markers(problem, admissible)?;
    let (value, body, trace, evaluations, converged) =
        ellipsoid_search(problem, problem.options.budget)?;
    Ok(ExtremalResult {
        value,
        candidates: vec![body],
        trace,
        surface_marker: m.surface,
        volume_marker: m.volume,
        polar_volume_marker: m.polar_volume,
        converged,
        evaluations,
        restart_values: vec![value],
        target: problem.target,
        sense: problem.sense,
        method: Method::EllipsoidRestricted,
    })
}

/// Full search. The reported candidate is the best of the search restarts,
/// the ball, the ellipsoid-restricted optimum and (when admissible) `K`
/// itself; `value` is the objective re-evaluated at that candidate.
pub fn estimate(problem: &ExtremalProblem) -> Result<ExtremalResult> {
    if problem.classification.is_constant() {
        return closed_form_result(problem);
    }
    let grid = &problem.grid;
    let n = grid.dimension();
    let opts = &problem.options;
    let admissible = body_admissible(problem);
    let m = markers(problem, admissible)?;

    let mut competitors: Vec<(f64, StarBody)> = Vec::new();
    let ball = StarBody::unit_ball(n);
    if let Some(v) = m.surface {
        competitors.push((v, ball.clone()));
    }
    if admissible {
        let anchor = match problem.target {
            Target::Affine => problem.body.clone(),
            Target::Geominimal => convex_hull(&problem.body, grid)?,
        };
        if let Ok(v) = objective(problem, &anchor) {
            competitors.push((v, normalize_polar_volume(&anchor, grid)?));
        }
    }

    let ellipsoid_budget = if opts.restarts >= 3 {
        (opts.budget / 10).min(2000)
    } else {
        0
    };
    let mut trace = Vec::new();
    let mut evaluations = 0;
    let mut ellipsoid_start = None;
    if ellipsoid_budget > 0 {
        if let Ok((v, body, t, e, _)) = ellipsoid_search(problem, ellipsoid_budget) {
            trace.extend(t);
            evaluations += e;
            ellipsoid_start = Some(
                radial_values(&body, grid)?
                    .iter()
                    .map(|r| r.ln())
                    .collect::<Vec<_>>(),
            );
            competitors.push((v, body));
        }
    }

    let mut starts: Vec<Vec<Vec<f64>>> = Vec::new();
    let mut builtin: Vec<Vec<f64>> = vec![
        vec![0.0; grid.len()],
        symmetric_log_radial(&problem.body, grid)?,
    ];
    if let Some(e) = ellipsoid_start {
        builtin.push(e);
    }
    let mut k = 0;
    while builtin.len() < opts.restarts {
        builtin.push(random_log_radial(
            n,
            grid,
            opts.start_seed(k),
            opts.start_roughness,
        )?);
        k += 1;
    }
    builtin.truncate(opts.restarts);
    starts.extend(builtin.into_iter().map(|b| vec![b]));
    for extra in &opts.extra_starts {
        starts.push(vec![symmetric_log_radial(extra, grid)?]);
    }

    let columns = basis::columns(opts.basis_for(n), grid)?;
    let search = BlockSearch {
        grid,
        target: problem.target,
        sense: problem.sense,
        columns: &columns,
        settings: opts.settings(),
    };
    let rho_k = radial_values(&problem.body, grid)?;
    let nf = n as f64;
    let eval = |r: &[&[f64]]| -> Result<f64> {
        Ok(nf * dual_mixed_kernel(grid, &problem.phi, &rho_k, r[0])?)
    };
    let outcome = if starts.is_empty() {
        None
    } else {
        search.run(&starts, opts.budget.saturating_sub(evaluations), &eval)
    };
    let (mut restart_values, mut converged) = (Vec::new(), false);
    if let Some(out) = outcome {
        let offset = evaluations;
        trace.extend(out.trace.into_iter().map(|t| TracePoint {
            evaluation: t.evaluation + offset,
            restart: t.restart + 1,
            ..t
        }));
        evaluations += out.evaluations;
        restart_values = out.restart_values;
        converged = out.converged;
        let convexity = if problem.target == Target::Geominimal {
            Flag::Yes
        } else {
            Flag::Unknown
        };
        let body = StarBody::grid_sampled(
            grid,
            out.radii.into_iter().next().unwrap_or_default(),
            Flag::Yes,
            convexity,
        )?;
        if let Ok(v) = objective(problem, &body) {
            competitors.push((v, body));
        }
    }
    let (value, candidate) = pick_best(problem.sense, competitors)
        .ok_or_else(|| Error::OptimizationFailure("no candidate could be evaluated".into()))?;
    Ok(ExtremalResult {
        value,
        candidates: vec![candidate],
        trace,
        surface_marker: m.surface,
        volume_marker: m.volume,
        polar_volume_marker: m.polar_volume,
        converged,
        evaluations,
        restart_values,
        target: problem.target,
        sense: problem.sense,
        method: Method::Full,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::bodies::LinearMap;
    use crate::sphgrid::{unit_ball_volume, Scheme};
    use std::f64::consts::PI;

    fn disk_grid(n: usize) -> SphericalGrid {
        SphericalGrid::build(2, n, Scheme::UniformAngle, None).unwrap()
    }

    fn sq_body() -> StarBody {
        StarBody::cube(2, 1.0).unwrap()
    }

    fn options(budget: usize) -> SearchOptions {
        SearchOptions {
            budget,
            ..SearchOptions::default()
        }
    }

    #[test]
    fn normalization_examples() {
        let g = disk_grid(256);
        let b = normalize_polar_volume(&StarBody::ball(2, 3.0).unwrap(), &g).unwrap();
        assert!((b.as_ball().unwrap() - 1.0).abs() < 1e-12);
        let e = StarBody::ellipsoid_axes(&[2.0, 0.5]).unwrap();
        let e2 = normalize_polar_volume(&e, &g).unwrap();
        let u = [0.6, 0.8];
        assert!((e2.radial(&u) / e.radial(&u) - 1.0).abs() < 1e-12);
    }

    #[test]
    fn objective_examples() {
        let g = disk_grid(256);
        let phi = OrliczFunction::power(-1.0).unwrap();
        let k = StarBody::ball(2, 2.0).unwrap();
        let p = ExtremalProblem::new(Target::Affine, Sense::Inf, phi, k, g.clone(), options(100))
            .unwrap();
        let v = objective(&p, &StarBody::unit_ball(2)).unwrap();
        assert!((v - 16.0 * PI).abs() < 1e-9, "{v}");
        // the objective does not see the scale of L
        let v3 = objective(&p, &StarBody::ball(2, 3.0).unwrap()).unwrap();
        assert!((v3 - v).abs() < 1e-9);
    }

    #[test]
    fn constant_phi_skips_search() {
        let g = disk_grid(128);
        let p = ExtremalProblem::auto(
            Target::Affine,
            OrliczFunction::constant(2.0).unwrap(),
            sq_body(),
            g.clone(),
            options(100),
        )
        .unwrap();
        let r = estimate(&p).unwrap();
        assert_eq!(r.method, Method::Closed);
        assert_eq!(r.evaluations, 0);
        let vol = crate::functionals::volume(&sq_body(), &g).unwrap().value;
        assert!((r.value - 2.0 * 2.0 * vol).abs() < 1e-12);
        assert!((r.value / 16.0 - 1.0).abs() < 1e-2);
    }

    #[test]
    fn sense_mismatch_is_rejected() {
        let g = disk_grid(64);
        let k = StarBody::unit_ball(2);
        let half = OrliczFunction::power(0.5).unwrap();
        assert!(matches!(
            ExtremalProblem::new(
                Target::Affine,
                Sense::Inf,
                half,
                k.clone(),
                g.clone(),
                options(10)
            ),
            Err(Error::Precondition(_))
        ));
        let inv = OrliczFunction::power(-1.0).unwrap();
        assert!(matches!(
            ExtremalProblem::new(
                Target::Geominimal,
                Sense::Sup,
                inv,
                k.clone(),
                g.clone(),
                options(10)
            ),
            Err(Error::Precondition(_))
        ));
        let excluded = OrliczFunction::power(2.0).unwrap();
        assert!(ExtremalProblem::auto(Target::Affine, excluded, k, g, options(10)).is_err());
    }

    #[test]
    fn ellipsoid_restricted_on_ball_and_sl2_image() {
        let g = disk_grid(512);
        let phi = OrliczFunction::power(-1.0).unwrap();
        for k in [
            StarBody::unit_ball(2),
            crate::bodies::transform(
                &LinearMap::diagonal(&[3.0, 1.0 / 3.0]).unwrap(),
                &StarBody::unit_ball(2),
            )
            .unwrap(),
        ] {
            let p =
                ExtremalProblem::auto(Target::Geominimal, phi.clone(), k, g.clone(), options(2000))
                    .unwrap();
            let r = estimate_ellipsoid_restricted(&p).unwrap();
            assert!((r.value / (2.0 * PI) - 1.0).abs() < 1e-6, "{}", r.value);
            assert!((r.value - objective(&p, r.candidate()).unwrap()).abs() < 1e-12);
        }
    }

    #[test]
    fn ellipse_closed_form_full_search() {
        let g = disk_grid(512);
        let e = StarBody::ellipsoid_axes(&[2.0, 0.5]).unwrap();
        for (phi, target) in [
            (OrliczFunction::power(-1.0).unwrap(), Target::Affine),
            (OrliczFunction::power(0.5).unwrap(), Target::Geominimal),
        ] {
            let expected = phi.eval(1.0) * 2.0 * unit_ball_volume(2);
            let p =
                ExtremalProblem::auto(target, phi, e.clone(), g.clone(), options(4000)).unwrap();
            let r = estimate(&p).unwrap();
            assert!(
                (r.value / expected - 1.0).abs() < 1e-2,
                "{} vs {expected}",
                r.value
            );
            assert!((r.value - objective(&p, r.candidate()).unwrap()).abs() < 1e-12);
            assert!(r.evaluations <= 4000);
        }
    }

    #[test]
    fn square_sits_between_markers() {
        let g = disk_grid(256);
        let phi = OrliczFunction::power(-1.0).unwrap();
        let sq = StarBody::cube(2, 1.0).unwrap();
        let p = ExtremalProblem::auto(Target::Affine, phi, sq.clone(), g, options(3000)).unwrap();
        let r = estimate(&p).unwrap();
        let at_k = objective(&p, &sq).unwrap();
        assert!(r.value <= r.surface_marker.unwrap() + 1e-12);
        assert!(r.value <= at_k + 1e-12);
        assert!(r.value >= r.volume_marker.unwrap() * (1.0 - 1e-3));
        assert!(r.value <= r.polar_volume_marker.unwrap() + 1e-9);
    }
}
