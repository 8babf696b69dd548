//! i-th mixed and multi-body variants.

use serde::{Deserialize, Serialize};

use super::{
    basis, prepared_radii, random_log_radial, symmetric_log_radial, BlockSearch, ExtremalProblem,
    ExtremalResult, Method, SearchOptions, Sense, Target, TracePoint,
};
use crate::bodies::{radial_values, Flag, StarBody};
use crate::error::{Error, Result};
use crate::functionals::{ith_dual_mixed_kernel, multi_dual_mixed_kernel};
use crate::orlicz::{classify, OrliczFunction};
use crate::sphgrid::SphericalGrid;

/// Shared sense of several functions: `inf` if all lie in `Φ̃`, `sup` if all lie in `Ψ̃`.
fn common_sense(phis: &[&OrliczFunction], n: usize) -> Result<Sense> {
    let classes = phis
        .iter()
        .map(|p| classify(p, n))
        .collect::<Result<Vec<_>>>()?;
    if classes.iter().all(|c| c.phi) {
        Ok(Sense::Inf)
    } else if classes.iter().all(|c| c.psi) {
        Ok(Sense::Sup)
    } else {
        let labels: Vec<&str> = phis.iter().map(|p| p.label()).collect();
        Err(Error::Precondition(format!(
            "functions {labels:?} do not share a class (all Phi or all Psi)"
        )))
    }
}

fn check_dims(bodies: &[&StarBody], grid: &SphericalGrid) -> Result<()> {
    for b in bodies {
        if b.dimension() != grid.dimension() {
            return Err(Error::Configuration(format!(
                "body {} has dimension {}, grid has {}",
                b.descriptor(),
                b.dimension(),
                grid.dimension()
            )));
        }
    }
    Ok(())
}

fn sampled_candidate(grid: &SphericalGrid, target: Target, radii: Vec<f64>) -> Result<StarBody> {
    let convexity = if target == Target::Geominimal {
        Flag::Yes
    } else {
        Flag::Unknown
    };
    StarBody::grid_sampled(grid, radii, Flag::Yes, convexity)
}

fn shift_trace(trace: Vec<TracePoint>, offset: usize) -> impl Iterator<Item = TracePoint> {
    trace.into_iter().map(move |t| TracePoint {
        evaluation: t.evaluation + offset,
        ..t
    })
}

#[derive(Debug, Clone)]
pub struct IthMixedProblem {
    pub target: Target,
    pub sense: Sense,
    pub phi1: OrliczFunction,
    pub phi2: OrliczFunction,
    pub index: f64,
    pub k: StarBody,
    pub l: StarBody,
    pub grid: SphericalGrid,
    pub options: SearchOptions,
    /// Additional `(Q₁, Q₂)` starting pairs, symmetrised before use.
    pub extra_pairs: Vec<(StarBody, StarBody)>,
}

impl IthMixedProblem {
    #[allow(clippy::too_many_arguments)]
    pub fn new(
        target: Target,
        phi1: OrliczFunction,
        phi2: OrliczFunction,
        index: f64,
        k: StarBody,
        l: StarBody,
        grid: SphericalGrid,
        options: SearchOptions,
    ) -> Result<Self> {
        check_dims(&[&k, &l], &grid)?;
        if !index.is_finite() {
            return Err(Error::Configuration(format!(
                "index i must be finite, got {index}"
            )));
        }
        options.validate()?;
        let sense = common_sense(&[&phi1, &phi2], grid.dimension())?;
        Ok(IthMixedProblem {
            target,
            sense,
            phi1,
            phi2,
            index,
            k,
            l,
            grid,
            options,
            extra_pairs: Vec::new(),
        })
    }
}

/// `n Ṽ_{φ₁,φ₂,i}(K, L; Q₁, Q₂)` with both `Q_j` normalised to `|Q_j°| = ω_n`.
pub fn ith_objective(problem: &IthMixedProblem, q1: &StarBody, q2: &StarBody) -> Result<f64> {
    let g = &problem.grid;
    let r1 = prepared_radii(q1, problem.target, g)?;
    let r2 = prepared_radii(q2, problem.target, g)?;
    ith_value(
        problem,
        &radial_values(&problem.k, g)?,
        &radial_values(&problem.l, g)?,
        &r1,
        &r2,
    )
}

fn ith_value(
    problem: &IthMixedProblem,
    rho_k: &[f64],
    rho_l: &[f64],
    r1: &[f64],
    r2: &[f64],
) -> Result<f64> {
    let g = &problem.grid;
    let n = g.dimension() as f64;
    Ok(n * ith_dual_mixed_kernel(
        g,
        &problem.phi1,
        &problem.phi2,
        problem.index,
        rho_k,
        rho_l,
        r1,
        r2,
    )?)
}

/// Search over pairs `(Q₁, Q₂)` of origin-symmetric candidates.
pub fn estimate_ith_mixed(problem: &IthMixedProblem) -> Result<ExtremalResult> {
    let g = &problem.grid;
    let n = g.dimension();
    let opts = &problem.options;
    let ball = StarBody::unit_ball(n);
    let rho_k = radial_values(&problem.k, g)?;
    let rho_l = radial_values(&problem.l, g)?;
    let surface = ith_objective(problem, &ball, &ball).ok();
    let mut competitors: Vec<(f64, Vec<StarBody>)> = Vec::new();
    if let Some(v) = surface {
        competitors.push((v, vec![ball.clone(), ball.clone()]));
    }

    let zero = vec![0.0; g.len()];
    let mut starts = vec![
        vec![zero.clone(), zero],
        vec![
            symmetric_log_radial(&problem.k, g)?,
            symmetric_log_radial(&problem.l, g)?,
        ],
    ];
    let mut k = 0;
    while starts.len() < opts.restarts {
        starts.push(vec![
            random_log_radial(n, g, opts.start_seed(2 * k), opts.start_roughness)?,
            random_log_radial(n, g, opts.start_seed(2 * k + 1), opts.start_roughness)?,
        ]);
        k += 1;
    }
    starts.truncate(opts.restarts.max(1));
    for (a, b) in &problem.extra_pairs {
        starts.push(vec![
            symmetric_log_radial(a, g)?,
            symmetric_log_radial(b, g)?,
        ]);
    }

    let columns = basis::columns(opts.basis_for(n), g)?;
    let search = BlockSearch {
        grid: g,
        target: problem.target,
        sense: problem.sense,
        columns: &columns,
        settings: opts.settings(),
    };
    let eval = |r: &[&[f64]]| ith_value(problem, &rho_k, &rho_l, r[0], r[1]);
    let mut trace = Vec::new();
    let (mut evaluations, mut restart_values, mut converged) = (0, Vec::new(), false);
    if let Some(out) = search.run(&starts, opts.budget, &eval) {
        trace = out.trace;
        evaluations = out.evaluations;
        restart_values = out.restart_values;
        converged = out.converged;
        let mut it = out.radii.into_iter();
        let q1 = sampled_candidate(g, problem.target, it.next().unwrap_or_default())?;
        let q2 = sampled_candidate(g, problem.target, it.next().unwrap_or_default())?;
        if let Ok(v) = ith_objective(problem, &q1, &q2) {
            competitors.push((v, vec![q1, q2]));
        }
    }
    let (value, candidates) = pick_best_many(problem.sense, competitors)?;
    Ok(ExtremalResult {
        value,
        candidates,
        trace,
        surface_marker: surface,
        volume_marker: None,
        polar_volume_marker: None,
        converged,
        evaluations,
        restart_values,
        target: problem.target,
        sense: problem.sense,
        method: Method::Full,
    })
}

fn pick_best_many(
    sense: Sense,
    competitors: Vec<(f64, Vec<StarBody>)>,
) -> Result<(f64, Vec<StarBody>)> {
    competitors
        .into_iter()
        .filter(|(v, _)| v.is_finite())
        .reduce(|a, b| if sense.better(b.0, a.0) { b } else { a })
        .ok_or_else(|| Error::OptimizationFailure("no candidate could be evaluated".into()))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum MultiMode {
    /// One search over all candidate bodies at once.
    Joint,
    /// Each distinct `(K_i, φ_i)` slot gets its single-body optimiser; the
    /// multi-body functional is then evaluated at those candidates.
    PerSlot,
}

#[derive(Debug, Clone)]
pub struct MultiProblem {
    pub target: Target,
    pub sense: Sense,
    pub phis: Vec<OrliczFunction>,
    pub bodies: Vec<StarBody>,
    pub grid: SphericalGrid,
    pub options: SearchOptions,
    pub mode: MultiMode,
    /// Additional joint starts, one body per slot, symmetrised before use.
    pub extra_starts: Vec<Vec<StarBody>>,
    /// Slot → shared candidate block; slots with equal `(K_i, φ_i)` share one.
    pub slot_block: Vec<usize>,
}

impl MultiProblem {
    pub fn new(
        target: Target,
        phis: Vec<OrliczFunction>,
        bodies: Vec<StarBody>,
        grid: SphericalGrid,
        options: SearchOptions,
        mode: MultiMode,
    ) -> Result<Self> {
        let n = grid.dimension();
        if n > 3 {
            return Err(Error::UnsupportedRepresentation(format!(
                "multi-body estimates are limited to n <= 3, got n = {n}"
            )));
        }
        if phis.len() != n || bodies.len() != n {
            return Err(Error::Configuration(format!(
                "multi-body problem needs {n} functions and {n} bodies, got {} and {}",
                phis.len(),
                bodies.len()
            )));
        }
        check_dims(&bodies.iter().collect::<Vec<_>>(), &grid)?;
        options.validate()?;
        let sense = common_sense(&phis.iter().collect::<Vec<_>>(), n)?;
        let keys: Vec<(String, String)> = bodies
            .iter()
            .zip(&phis)
            .map(|(b, p)| (b.descriptor(), p.label().to_string()))
            .collect();
        let slot_block = (0..n)
            .map(|i| {
                let first = keys.iter().position(|k| *k == keys[i]).unwrap_or(i);
                (0..first)
                    .filter(|&j| keys.iter().position(|k| *k == keys[j]) == Some(j))
                    .count()
            })
            .collect();
        Ok(MultiProblem {
            target,
            sense,
            phis,
            bodies,
            grid,
            options,
            mode,
            extra_starts: Vec::new(),
            slot_block,
        })
    }

    pub fn block_count(&self) -> usize {
        self.slot_block.iter().max().map_or(0, |m| m + 1)
    }

    /// First slot using each block.
    fn block_slots(&self) -> Vec<usize> {
        (0..self.block_count())
            .map(|b| {
                self.slot_block
                    .iter()
                    .position(|&s| s == b)
                    .expect("block has a slot")
            })
            .collect()
    }
}

/// `n Ṽ_φ⃗(K⃗; L⃗)` with every `L_i` normalised; `ls` holds one body per slot.
pub fn multi_objective(problem: &MultiProblem, ls: &[StarBody]) -> Result<f64> {
    let g = &problem.grid;
    if ls.len() != problem.phis.len() {
        return Err(Error::Configuration(format!(
            "{} candidate bodies for {} slots",
            ls.len(),
            problem.phis.len()
        )));
    }
    let radii = ls
        .iter()
        .map(|l| prepared_radii(l, problem.target, g))
        .collect::<Result<Vec<_>>>()?;
    let rho_k = problem
        .bodies
        .iter()
        .map(|k| radial_values(k, g))
        .collect::<Result<Vec<_>>>()?;
    multi_value(
        problem,
        &rho_k,
        &radii.iter().map(|r| r.as_slice()).collect::<Vec<_>>(),
    )
}

fn multi_value(problem: &MultiProblem, rho_k: &[Vec<f64>], slot_radii: &[&[f64]]) -> Result<f64> {
    let g = &problem.grid;
    let phis: Vec<&OrliczFunction> = problem.phis.iter().collect();
    let ks: Vec<&[f64]> = rho_k.iter().map(|r| r.as_slice()).collect();
    Ok(g.dimension() as f64 * multi_dual_mixed_kernel(g, &phis, &ks, slot_radii)?)
}

pub fn estimate_multi(problem: &MultiProblem) -> Result<ExtremalResult> {
    match problem.mode {
        MultiMode::PerSlot => estimate_per_slot(problem),
        MultiMode::Joint => estimate_joint(problem),
    }
}

fn estimate_per_slot(problem: &MultiProblem) -> Result<ExtremalResult> {
    let g = &problem.grid;
    let firsts = problem.block_slots();
    let mut options = problem.options.clone();
    options.budget = (options.budget / firsts.len()).max(1);
    let mut block_bodies = Vec::new();
    let (mut trace, mut evaluations, mut converged, mut restart_values) =
        (Vec::new(), 0, true, Vec::new());
    for &slot in &firsts {
        let single = ExtremalProblem::new(
            problem.target,
            problem.sense,
            problem.phis[slot].clone(),
            problem.bodies[slot].clone(),
            g.clone(),
            options.clone(),
        )?;
        let r = super::estimate(&single)?;
        trace.extend(shift_trace(r.trace, evaluations));
        evaluations += r.evaluations;
        converged &= r.converged;
        restart_values.push(r.value);
        block_bodies.push(r.candidates[0].clone());
    }
    let candidates: Vec<StarBody> = problem
        .slot_block
        .iter()
        .map(|&b| block_bodies[b].clone())
        .collect();
    let value = multi_objective(problem, &candidates)?;
    let ball = StarBody::unit_ball(g.dimension());
    Ok(ExtremalResult {
        value,
        surface_marker: multi_objective(problem, &vec![ball; candidates.len()]).ok(),
        candidates,
        trace,
        volume_marker: None,
        polar_volume_marker: None,
        converged,
        evaluations,
        restart_values,
        target: problem.target,
        sense: problem.sense,
        method: Method::PerSlot,
    })
}

fn estimate_joint(problem: &MultiProblem) -> Result<ExtremalResult> {
    let g = &problem.grid;
    let n = g.dimension();
    let opts = &problem.options;
    let blocks = problem.block_count();
    let firsts = problem.block_slots();
    let ball = StarBody::unit_ball(n);
    let surface = multi_objective(problem, &vec![ball.clone(); n]).ok();
    let mut competitors: Vec<(f64, Vec<StarBody>)> = Vec::new();
    if let Some(v) = surface {
        competitors.push((v, vec![ball; n]));
    }

    let mut starts = vec![
        vec![vec![0.0; g.len()]; blocks],
        firsts
            .iter()
            .map(|&s| symmetric_log_radial(&problem.bodies[s], g))
            .collect::<Result<Vec<_>>>()?,
    ];
    let mut k = 0;
    while starts.len() < opts.restarts {
        let mut start = Vec::with_capacity(blocks);
        for _ in 0..blocks {
            start.push(random_log_radial(
                n,
                g,
                opts.start_seed(k),
                opts.start_roughness,
            )?);
            k += 1;
        }
        starts.push(start);
    }
    starts.truncate(opts.restarts.max(1));
    for extra in &problem.extra_starts {
        if extra.len() != n {
            return Err(Error::Configuration(format!(
                "extra start has {} bodies, need {n}",
                extra.len()
            )));
        }
        starts.push(
            firsts
                .iter()
                .map(|&s| symmetric_log_radial(&extra[s], g))
                .collect::<Result<Vec<_>>>()?,
        );
    }

    let rho_k = problem
        .bodies
        .iter()
        .map(|b| radial_values(b, g))
        .collect::<Result<Vec<_>>>()?;
    let columns = basis::columns(opts.basis_for(n), g)?;
    let search = BlockSearch {
        grid: g,
        target: problem.target,
        sense: problem.sense,
        columns: &columns,
        settings: opts.settings(),
    };
    let eval = |r: &[&[f64]]| -> Result<f64> {
        let slots: Vec<&[f64]> = problem.slot_block.iter().map(|&b| r[b]).collect();
        multi_value(problem, &rho_k, &slots)
    };
    let (mut trace, mut evaluations, mut restart_values, mut converged) =
        (Vec::new(), 0, Vec::new(), false);
    if let Some(out) = search.run(&starts, opts.budget, &eval) {
        trace = out.trace;
        evaluations = out.evaluations;
        restart_values = out.restart_values;
        converged = out.converged;
        let bodies = out
            .radii
            .into_iter()
            .map(|r| sampled_candidate(g, problem.target, r))
            .collect::<Result<Vec<_>>>()?;
        let per_slot: Vec<StarBody> = problem
            .slot_block
            .iter()
            .map(|&b| bodies[b].clone())
            .collect();
        if let Ok(v) = multi_objective(problem, &per_slot) {
            competitors.push((v, per_slot));
        }
    }
    let (value, candidates) = pick_best_many(problem.sense, competitors)?;
    Ok(ExtremalResult {
        value,
        candidates,
        trace,
        surface_marker: surface,
        volume_marker: None,
        polar_volume_marker: None,
        converged,
        evaluations,
        restart_values,
        target: problem.target,
        sense: problem.sense,
        method: Method::Joint,
    })
}
