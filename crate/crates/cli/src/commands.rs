use orlicz_core::bodies::{make_random_star, polar, radial_values};
use orlicz_core::extremal::{
    estimate, estimate_ellipsoid_restricted, estimate_ith_mixed, estimate_multi, ExtremalProblem,
    ExtremalResult, IthMixedProblem, MultiProblem, SearchOptions,
};
use orlicz_core::functionals::{
    dual_mean_radius, dual_mixed_volume, dual_surface_area, ith_dual_mixed_volume,
    multi_dual_mixed_volume, primal_mean_width, primal_mixed_volume, primal_surface_area, volume,
    vrad_from_volume,
};
use orlicz_core::sphgrid::unit_ball_volume;
use orlicz_core::{
    find_check, registry, CheckReport, Error, FunctionalValue, OrliczFunction, SphericalGrid,
    StarBody, Verdict, Verifier, VerifyConfig,
};
use serde::Serialize;

use crate::config::{required, Problem, RunConfig, SearchMethod, SweepParameter};
use crate::error::{CliError, CliResult};
use crate::output::{num, OutDir};

/// Number of failed checks; nonzero only for `verify`.
pub type Failures = usize;

fn section<'a, T>(s: &'a Option<T>, name: &str) -> CliResult<&'a T> {
    s.as_ref()
        .ok_or_else(|| CliError::Usage(format!("command '{name}' needs a [{name}] section")))
}

#[derive(Serialize)]
struct ComputeRecord<'a> {
    functional: &'a str,
    value: f64,
    quadrature_error: f64,
    digest: &'a str,
    grid: String,
}

pub fn compute(cfg: &RunConfig, out: &mut OutDir) -> CliResult<Failures> {
    let c = section(&cfg.compute, "compute")?;
    let grid = cfg.grid.build(cfg.seed)?;
    let n = grid.dimension();
    let body =
        |field: &Option<String>, name: &str| cfg.body(required(field, "compute", name)?, &grid);
    let func = |field: &Option<String>, name: &str| cfg.function(required(field, "compute", name)?);
    let list = |field: &Option<Vec<String>>, name: &str| -> CliResult<Vec<StarBody>> {
        required(field, "compute", name)?
            .iter()
            .map(|b| cfg.body(b, &grid))
            .collect()
    };
    let fv = match c.functional.as_str() {
        "volume" => volume(&body(&c.k, "k")?, &grid)?,
        "vrad" => {
            let v = volume(&body(&c.k, "k")?, &grid)?;
            let r = vrad_from_volume(v.value, n);
            FunctionalValue {
                value: r,
                quadrature_error: r * v.quadrature_error / (n as f64 * v.value),
                digest: v.digest,
            }
        }
        "dual-mixed" => dual_mixed_volume(
            &func(&c.phi, "phi")?,
            &body(&c.k, "k")?,
            &body(&c.l, "l")?,
            &grid,
        )?,
        "dual-surface" => dual_surface_area(&func(&c.phi, "phi")?, &body(&c.k, "k")?, &grid)?,
        "dual-mean-radius" => dual_mean_radius(&func(&c.phi, "phi")?, &body(&c.k, "k")?, &grid)?,
        "primal-mixed" => primal_mixed_volume(
            &func(&c.phi, "phi")?,
            &body(&c.k, "k")?,
            &body(&c.l, "l")?,
            &grid,
        )?,
        "primal-surface" => primal_surface_area(&func(&c.phi, "phi")?, &body(&c.k, "k")?, &grid)?,
        "primal-mean-width" => primal_mean_width(&func(&c.phi, "phi")?, &body(&c.k, "k")?, &grid)?,
        "multi-dual" => {
            let phis: Vec<OrliczFunction> = required(&c.phis, "compute", "phis")?
                .iter()
                .map(|f| cfg.function(f))
                .collect::<CliResult<_>>()?;
            multi_dual_mixed_volume(&phis, &list(&c.ks, "ks")?, &list(&c.ls, "ls")?, &grid)?
        }
        "ith-dual" => ith_dual_mixed_volume(
            &func(&c.phi, "phi")?,
            &func(&c.phi2, "phi2")?,
            *required(&c.index, "compute", "index")?,
            &body(&c.k, "k")?,
            &body(&c.l, "l")?,
            &body(&c.q1, "q1")?,
            &body(&c.q2, "q2")?,
            &grid,
        )?,
        other => return Err(CliError::Usage(format!("unknown functional '{other}'"))),
    };
    println!(
        "{} = {} ± {:.3e}",
        c.functional, fv.value, fv.quadrature_error
    );
    out.write_toml(
        "record.toml",
        &ComputeRecord {
            functional: &c.functional,
            value: fv.value,
            quadrature_error: fv.quadrature_error,
            digest: &fv.digest,
            grid: grid.descriptor(),
        },
    )?;
    Ok(0)
}

#[derive(Serialize)]
struct EstimateRecord {
    target: String,
    sense: String,
    method: String,
    value: f64,
    converged: bool,
    evaluations: usize,
    #[serde(skip_serializing_if = "Option::is_none")]
    surface_marker: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    volume_marker: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    polar_volume_marker: Option<f64>,
    restart_values: Vec<f64>,
    grid: String,
}

fn usage(e: Error) -> CliError {
    match e {
        Error::Configuration(m) => CliError::Usage(m),
        other => CliError::Usage(other.to_string()),
    }
}

/// Construction failures caused by the function class are the user's to fix.
fn contract(e: Error) -> CliError {
    match e {
        Error::Precondition(m) => CliError::Usage(m),
        other => CliError::Core(other),
    }
}

pub fn estimate_cmd(cfg: &RunConfig, out: &mut OutDir) -> CliResult<Failures> {
    let e = section(&cfg.estimate, "estimate")?;
    let grid = cfg.grid.build(cfg.seed)?;
    let defaults = SearchOptions::default();
    let options = SearchOptions {
        budget: e.budget.unwrap_or(defaults.budget),
        restarts: e.restarts.unwrap_or(defaults.restarts),
        initial_step: e.initial_step.unwrap_or(defaults.initial_step),
        min_step: e.min_step.unwrap_or(defaults.min_step),
        seed: cfg.seed,
        ..defaults
    };
    let func =
        |field: &Option<String>, name: &str| cfg.function(required(field, "estimate", name)?);
    let body =
        |field: &Option<String>, name: &str| cfg.body(required(field, "estimate", name)?, &grid);
    if e.problem != Problem::Single && e.method != SearchMethod::Full {
        return Err(CliError::Usage(
            "the ellipsoid-restricted method is only available for single-body problems".into(),
        ));
    }
    let check_sense = |sense| match e.sense {
        Some(s) if s != sense => Err(CliError::Usage(format!(
            "sense '{}' contradicts the class of the functions, which call for '{}'",
            s.name(),
            sense.name()
        ))),
        _ => Ok(()),
    };
    let result = match e.problem {
        Problem::Single => {
            let (phi, k) = (func(&e.phi, "phi")?, body(&e.k, "k")?);
            let problem = match e.sense {
                Some(s) => ExtremalProblem::new(e.target, s, phi, k, grid.clone(), options),
                None => ExtremalProblem::auto(e.target, phi, k, grid.clone(), options),
            }
            .map_err(contract)?;
            match e.method {
                SearchMethod::Full => estimate(&problem)?,
                SearchMethod::EllipsoidRestricted => estimate_ellipsoid_restricted(&problem)?,
            }
        }
        Problem::Ith => {
            let problem = IthMixedProblem::new(
                e.target,
                func(&e.phi, "phi")?,
                func(&e.phi2, "phi2")?,
                *required(&e.index, "estimate", "index")?,
                body(&e.k, "k")?,
                body(&e.l, "l")?,
                grid.clone(),
                options,
            )
            .map_err(contract)?;
            check_sense(problem.sense)?;
            estimate_ith_mixed(&problem)?
        }
        Problem::Multi => {
            let phis = required(&e.phis, "estimate", "phis")?
                .iter()
                .map(|f| cfg.function(f))
                .collect::<CliResult<Vec<_>>>()?;
            let ks = required(&e.ks, "estimate", "ks")?
                .iter()
                .map(|b| cfg.body(b, &grid))
                .collect::<CliResult<Vec<_>>>()?;
            let problem = MultiProblem::new(e.target, phis, ks, grid.clone(), options, e.mode)
                .map_err(contract)?;
            check_sense(problem.sense)?;
            estimate_multi(&problem)?
        }
    };
    report_estimate(&result, &grid, out)?;
    Ok(0)
}

fn report_estimate(r: &ExtremalResult, grid: &SphericalGrid, out: &mut OutDir) -> CliResult<()> {
    let method = r.method.name().to_string();
    println!("value = {}", r.value);
    println!(
        "target = {}, sense = {}, method = {method}",
        r.target.name(),
        r.sense.name()
    );
    println!(
        "converged = {}, evaluations = {}",
        r.converged, r.evaluations
    );
    for (name, m) in [
        ("surface_marker", r.surface_marker),
        ("volume_marker", r.volume_marker),
        ("polar_volume_marker", r.polar_volume_marker),
    ] {
        if let Some(v) = m {
            println!("{name} = {v}");
        }
    }
    out.write_toml(
        "record.toml",
        &EstimateRecord {
            target: r.target.name().into(),
            sense: r.sense.name().into(),
            method,
            value: r.value,
            converged: r.converged,
            evaluations: r.evaluations,
            surface_marker: r.surface_marker,
            volume_marker: r.volume_marker,
            polar_volume_marker: r.polar_volume_marker,
            restart_values: r.restart_values.clone(),
            grid: grid.descriptor(),
        },
    )?;
    let trace: Vec<Vec<String>> = r
        .trace
        .iter()
        .map(|t| {
            vec![
                t.evaluation.to_string(),
                t.restart.to_string(),
                num(t.objective),
                num(t.step),
            ]
        })
        .collect();
    out.write_csv(
        "trace.csv",
        &strings(&["evaluation", "restart", "objective", "step"]),
        &trace,
    )?;
    let n = grid.dimension();
    let mut header = strings(&["slot", "node"]);
    header.extend((0..n).map(|i| format!("u{i}")));
    header.push("radius".into());
    let mut rows = Vec::new();
    for (slot, c) in r.candidates.iter().enumerate() {
        let rho = radial_values(c, grid)?;
        for (i, u) in grid.nodes().enumerate() {
            let mut row = vec![slot.to_string(), i.to_string()];
            row.extend(u.iter().map(|x| num(*x)));
            row.push(num(rho[i]));
            rows.push(row);
        }
    }
    out.write_csv("candidate.csv", &header, &rows)
}

fn strings(xs: &[&str]) -> Vec<String> {
    xs.iter().map(|s| s.to_string()).collect()
}

#[derive(Serialize)]
struct Summary<'a> {
    seed: u64,
    dimension: usize,
    trials: usize,
    passed: usize,
    failed: usize,
    recorded: usize,
    checks: &'a [CheckReport],
}

pub fn verify(cfg: &RunConfig, out: &mut OutDir) -> CliResult<Failures> {
    let v = cfg.verify.clone().unwrap_or_default();
    let all = v.checks.is_empty() || v.checks.iter().any(|c| c == "all");
    let checks = if all {
        registry()
    } else {
        v.checks
            .iter()
            .map(|k| find_check(k.trim()).map_err(usage))
            .collect::<CliResult<Vec<_>>>()?
    };
    let defaults = VerifyConfig::default();
    let config = VerifyConfig {
        seed: cfg.seed,
        trials: v.trials.unwrap_or(defaults.trials),
        dimension: cfg.grid.dimension,
        quadrature_resolution: v.quadrature_resolution.or(cfg.grid.resolution),
        search_resolution: v.search_resolution,
        budget: v.budget.unwrap_or(defaults.budget),
        restarts: v.restarts.unwrap_or(defaults.restarts),
        tolerances: v.tolerances.clone(),
    };
    config.validate().map_err(usage)?;
    let verifier = Verifier::new(config.clone())?;
    println!(
        "{:>3}  {:<24} {:<9} {:>7} {:>12} {:>9}",
        "#", "check", "verdict", "trials", "min margin", "failures"
    );
    let mut reports = Vec::with_capacity(checks.len());
    for check in &checks {
        let r = verifier.run(check);
        println!(
            "{:>3}  {:<24} {:<9} {:>7} {:>12.3e} {:>9}",
            r.number,
            r.id,
            verdict_name(r.verdict),
            r.trials,
            r.min_margin,
            r.failures.len()
        );
        reports.push(r);
    }
    let rows: Vec<_> = reports.iter().flat_map(|r| r.rows.iter()).collect();
    out.write_serialized("trials.csv", &rows)?;
    let count = |v: Verdict| reports.iter().filter(|r| r.verdict == v).count();
    let failed = count(Verdict::Fail);
    out.write_toml(
        "summary.toml",
        &Summary {
            seed: config.seed,
            dimension: config.dimension,
            trials: config.trials,
            passed: count(Verdict::Pass),
            failed,
            recorded: count(Verdict::Recorded),
            checks: &reports,
        },
    )?;
    println!("{} passed, {failed} failed", count(Verdict::Pass));
    Ok(failed)
}

fn verdict_name(v: Verdict) -> &'static str {
    match v {
        Verdict::Pass => "pass",
        Verdict::Fail => "FAIL",
        Verdict::Recorded => "recorded",
    }
}

pub fn sweep(cfg: &RunConfig, out: &mut OutDir) -> CliResult<Failures> {
    let s = section(&cfg.sweep, "sweep")?;
    if s.values.is_empty() {
        return Err(CliError::Usage(
            "sweep needs a nonempty 'values' list".into(),
        ));
    }
    let n = cfg.grid.dimension;
    let nf = n as f64;
    let omega = unit_ball_volume(n);
    let quantity = s.quantity.as_str();
    let bad_quantity = || {
        CliError::Usage(format!(
            "quantity '{quantity}' is not available when sweeping {:?}",
            s.parameter
        ))
    };
    let body_name = || required(&s.k, "sweep", "k");
    let mut rows = Vec::with_capacity(s.values.len());
    let mut push = |x: f64, value: f64, err: f64, reference: Option<f64>| {
        rows.push(vec![
            num(x),
            quantity.to_string(),
            num(value),
            num(err),
            reference.map(num).unwrap_or_default(),
        ])
    };
    match s.parameter {
        SweepParameter::P => {
            let grid = cfg.grid.build(cfg.seed)?;
            let k = cfg.body(body_name()?, &grid)?;
            let ball = StarBody::unit_ball(n);
            let vk = volume(&k, &grid)?.value;
            for &p in &s.values {
                let phi = OrliczFunction::power(p)?;
                match quantity {
                    "sp-ratio" => {
                        let a = dual_surface_area(&phi, &k, &grid)?;
                        let b = dual_surface_area(&phi, &ball, &grid)?;
                        let ratio = a.value / b.value;
                        let err =
                            ratio * (a.quadrature_error / a.value + b.quadrature_error / b.value);
                        push(p, ratio, err, Some((vk / omega).powf((nf - p) / nf)));
                    }
                    "dual-surface" => {
                        let a = dual_surface_area(&phi, &k, &grid)?;
                        push(p, a.value, a.quadrature_error, None);
                    }
                    "dual-mean-radius" => {
                        let a = dual_mean_radius(&phi, &k, &grid)?;
                        push(
                            p,
                            a.value,
                            a.quadrature_error,
                            Some(phi.eval(vrad_from_volume(vk, n))),
                        );
                    }
                    _ => return Err(bad_quantity()),
                }
            }
        }
        SweepParameter::Resolution => {
            for &r in &s.values {
                if !(r >= 1.0 && r.fract() == 0.0) {
                    return Err(CliError::Usage(format!(
                        "resolution {r} is not a positive integer"
                    )));
                }
                let grid = cfg.grid.build_with(r as usize, cfg.seed)?;
                let k = cfg.body(body_name()?, &grid)?;
                let v = volume(&k, &grid)?;
                match quantity {
                    "volume" => push(r, v.value, v.quadrature_error, k.exact_volume()),
                    "vrad" => {
                        let rad = vrad_from_volume(v.value, n);
                        let exact = k.exact_volume().map(|e| vrad_from_volume(e, n));
                        push(r, rad, rad * v.quadrature_error / (nf * v.value), exact);
                    }
                    _ => return Err(bad_quantity()),
                }
            }
        }
        SweepParameter::Roughness => {
            let grid = cfg.grid.build(cfg.seed)?;
            for &r in &s.values {
                let k = make_random_star(n, cfg.seed, r, s.symmetric.unwrap_or(true))?;
                let v = volume(&k, &grid)?;
                match quantity {
                    "volume" => push(r, v.value, v.quadrature_error, None),
                    "santalo-product" => {
                        let vp = volume(&polar(&k, &grid)?, &grid)?;
                        let prod = vrad_from_volume(v.value, n) * vrad_from_volume(vp.value, n);
                        let err = prod
                            * (v.quadrature_error / v.value + vp.quadrature_error / vp.value)
                            / nf;
                        push(r, prod, err, Some(1.0));
                    }
                    _ => return Err(bad_quantity()),
                }
            }
        }
    }
    for r in &rows {
        println!("{}", r.join(", "));
    }
    out.write_csv(
        "sweep.csv",
        &strings(&[
            "parameter",
            "quantity",
            "value",
            "quadrature_error",
            "reference",
        ]),
        &rows,
    )?;
    Ok(0)
}
