//! Volumes and (dual) Orlicz mixed volumes as spherical quadratures.
//!
//! Each public functional returns a [`FunctionalValue`] carrying an error
//! estimate: the absolute difference between the value on the grid and on
//! its coarsened companion (the every-other-node subgrid for n = 2, a
//! half-resolution rebuild otherwise). The `*_kernel` functions work on
//! radial samples directly and are what the optimiser calls.

use sha2::{Digest, Sha256};

use crate::bodies::{cloud, radial_values, support_values, StarBody};
use crate::error::{Error, Result};
use crate::orlicz::OrliczFunction;
use crate::sphgrid::{unit_ball_volume, SphericalGrid};

pub const RATIO_MIN: f64 = 1e-12;
pub const RATIO_MAX: f64 = 1e12;

#[derive(Debug, Clone, PartialEq)]
pub struct FunctionalValue {
    pub value: f64,
    /// `|value − value on the coarsened grid|`.
    pub quadrature_error: f64,
    /// SHA-256 of the functional name, grid and inputs.
    pub digest: String,
}

pub fn digest(parts: &[&str]) -> String {
    let mut h = Sha256::new();
    for p in parts {
        h.update(p.as_bytes());
        h.update([0u8]);
    }
    h.finalize().iter().map(|b| format!("{b:02x}")).collect()
}

fn with_error(
    name: &str,
    inputs: &[String],
    grid: &SphericalGrid,
    eval: impl Fn(&SphericalGrid) -> Result<f64>,
) -> Result<FunctionalValue> {
    let value = eval(grid)?;
    let coarse = eval(&grid.coarsened()?)?;
    let desc = grid.descriptor();
    let mut parts: Vec<&str> = vec![name, &desc];
    parts.extend(inputs.iter().map(|s| s.as_str()));
    Ok(FunctionalValue {
        value,
        quadrature_error: (value - coarse).abs(),
        digest: digest(&parts),
    })
}

/// `Σ w_i term(i)` with each term checked for finiteness.
fn checked_quadrature(
    grid: &SphericalGrid,
    mut term: impl FnMut(usize) -> Result<f64>,
) -> Result<f64> {
    let mut values = Vec::with_capacity(grid.len());
    for i in 0..grid.len() {
        values.push(term(i)?);
    }
    grid.integrate_values(&values)
}

fn check_ratio(node: usize, ratio: f64) -> Result<f64> {
    if (RATIO_MIN..=RATIO_MAX).contains(&ratio) {
        Ok(ratio)
    } else {
        Err(Error::NumericalDomain {
            node,
            detail: format!("radial ratio {ratio:e} outside [{RATIO_MIN:e}, {RATIO_MAX:e}]"),
        })
    }
}

fn check_phi(node: usize, phi: &OrliczFunction, t: f64) -> Result<f64> {
    let v = phi.eval(t);
    if v > 0.0 && v.is_finite() {
        Ok(v)
    } else {
        Err(Error::NumericalDomain {
            node,
            detail: format!("{}({t:e}) = {v}", phi.label()),
        })
    }
}

fn powi_n(x: f64, n: usize) -> f64 {
    match n {
        2 => x * x,
        3 => x * x * x,
        _ => x.powi(n as i32),
    }
}

/// `(1/n) Σ w ρ^n`.
pub fn volume_kernel(grid: &SphericalGrid, rho: &[f64]) -> Result<f64> {
    let n = grid.dimension();
    Ok(checked_quadrature(grid, |i| Ok(powi_n(rho[i], n)))? / n as f64)
}

/// `(|K|/ω_n)^{1/n}` from a volume.
pub fn vrad_from_volume(volume: f64, n: usize) -> f64 {
    (volume / unit_ball_volume(n)).powf(1.0 / n as f64)
}

/// `(1/n) Σ w φ(ρ_L/ρ_K) ρ_K^n`.
pub fn dual_mixed_kernel(
    grid: &SphericalGrid,
    phi: &OrliczFunction,
    rho_k: &[f64],
    rho_l: &[f64],
) -> Result<f64> {
    let n = grid.dimension();
    if let Some(alpha) = phi.as_constant() {
        return Ok(alpha * volume_kernel(grid, rho_k)?);
    }
    let s = checked_quadrature(grid, |i| {
        let r = check_ratio(i, rho_l[i] / rho_k[i])?;
        Ok(check_phi(i, phi, r)? * powi_n(rho_k[i], n))
    })?;
    Ok(s / n as f64)
}

/// `(1/(nω_n)) Σ w φ(ρ)`.
pub fn dual_mean_radius_kernel(
    grid: &SphericalGrid,
    phi: &OrliczFunction,
    rho: &[f64],
) -> Result<f64> {
    let n = grid.dimension();
    let s = checked_quadrature(grid, |i| check_phi(i, phi, rho[i]))?;
    Ok(s / (n as f64 * unit_ball_volume(n)))
}

/// One slot of a multi-body integrand: `φ(ρ_L/ρ_K) ρ_K^n`.
fn slot_density(i: usize, n: usize, phi: &OrliczFunction, rho_k: f64, rho_l: f64) -> Result<f64> {
    let r = check_ratio(i, rho_l / rho_k)?;
    let v = check_phi(i, phi, r)? * powi_n(rho_k, n);
    if v > 0.0 && v.is_finite() {
        Ok(v)
    } else {
        Err(Error::NumericalDomain {
            node: i,
            detail: format!("non-positive factor {v:e} under the n-th root"),
        })
    }
}

/// `(1/n) Σ w Π_k [φ_k(ρ_{L_k}/ρ_{K_k}) ρ_{K_k}^n]^{1/n}`; one sample slice per slot.
pub fn multi_dual_mixed_kernel(
    grid: &SphericalGrid,
    phis: &[&OrliczFunction],
    rho_ks: &[&[f64]],
    rho_ls: &[&[f64]],
) -> Result<f64> {
    let n = grid.dimension();
    let inv = 1.0 / n as f64;
    let s = checked_quadrature(grid, |i| {
        let mut prod = 1.0;
        for k in 0..phis.len() {
            prod *= slot_density(i, n, phis[k], rho_ks[k][i], rho_ls[k][i])?.powf(inv);
        }
        Ok(prod)
    })?;
    Ok(s * inv)
}

/// `(1/n) Σ w [φ₁(ρ_{Q₁}/ρ_K) ρ_K^n]^{(n−i)/n} [φ₂(ρ_{Q₂}/ρ_L) ρ_L^n]^{i/n}`.
#[allow(clippy::too_many_arguments)]
pub fn ith_dual_mixed_kernel(
    grid: &SphericalGrid,
    phi1: &OrliczFunction,
    phi2: &OrliczFunction,
    i_index: f64,
    rho_k: &[f64],
    rho_l: &[f64],
    rho_q1: &[f64],
    rho_q2: &[f64],
) -> Result<f64> {
    let n = grid.dimension();
    let nf = n as f64;
    let (a, b) = ((nf - i_index) / nf, i_index / nf);
    let s = checked_quadrature(grid, |j| {
        let first = if a == 0.0 {
            1.0
        } else {
            slot_density(j, n, phi1, rho_k[j], rho_q1[j])?.powf(a)
        };
        let second = if b == 0.0 {
            1.0
        } else {
            slot_density(j, n, phi2, rho_l[j], rho_q2[j])?.powf(b)
        };
        Ok(first * second)
    })?;
    Ok(s / nf)
}

pub fn volume(k: &StarBody, grid: &SphericalGrid) -> Result<FunctionalValue> {
    with_error("volume", &[k.descriptor()], grid, |g| {
        volume_kernel(g, &radial_values(k, g)?)
    })
}

pub fn vrad(k: &StarBody, grid: &SphericalGrid) -> Result<f64> {
    let v = volume_kernel(grid, &radial_values(k, grid)?)?;
    Ok(vrad_from_volume(v, grid.dimension()))
}

fn same_dimension(bodies: &[&StarBody], grid: &SphericalGrid) -> Result<()> {
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

/// `Ṽ_φ(K, L)`.
pub fn dual_mixed_volume(
    phi: &OrliczFunction,
    k: &StarBody,
    l: &StarBody,
    grid: &SphericalGrid,
) -> Result<FunctionalValue> {
    same_dimension(&[k, l], grid)?;
    with_error(
        "dual-mixed",
        &[phi.label().to_string(), k.descriptor(), l.descriptor()],
        grid,
        |g| dual_mixed_kernel(g, phi, &radial_values(k, g)?, &radial_values(l, g)?),
    )
}

/// `S̃_φ(K) = n Ṽ_φ(K, B)`.
pub fn dual_surface_area(
    phi: &OrliczFunction,
    k: &StarBody,
    grid: &SphericalGrid,
) -> Result<FunctionalValue> {
    same_dimension(&[k], grid)?;
    let n = grid.dimension();
    with_error(
        "dual-surface",
        &[phi.label().to_string(), k.descriptor()],
        grid,
        |g| {
            let rho = radial_values(k, g)?;
            let ones = vec![1.0; g.len()];
            Ok(n as f64 * dual_mixed_kernel(g, phi, &rho, &ones)?)
        },
    )
}

/// `ω̃_φ(K) = (1/(nω_n)) ∫ φ(ρ_K) dσ`.
pub fn dual_mean_radius(
    phi: &OrliczFunction,
    k: &StarBody,
    grid: &SphericalGrid,
) -> Result<FunctionalValue> {
    same_dimension(&[k], grid)?;
    with_error(
        "dual-mean-radius",
        &[phi.label().to_string(), k.descriptor()],
        grid,
        |g| dual_mean_radius_kernel(g, phi, &radial_values(k, g)?),
    )
}

/// `h_Q` in arbitrary directions: closed form or point-cloud support on `grid`.
fn support_in(q: &StarBody, grid: &SphericalGrid, dirs: &[Vec<f64>]) -> Result<Vec<f64>> {
    if q.has_analytic_support() {
        Ok(dirs
            .iter()
            .map(|d| q.support(d).expect("analytic support"))
            .collect())
    } else {
        Ok(cloud::support_in_directions(
            grid,
            &radial_values(q, grid)?,
            dirs,
        ))
    }
}

/// `V_φ(K, Q) = (1/n) ∫ φ(h_Q/h_K) h_K dS(K, ·)` for a polytope or ball `K`.
pub fn primal_mixed_volume(
    phi: &OrliczFunction,
    k: &StarBody,
    q: &StarBody,
    grid: &SphericalGrid,
) -> Result<FunctionalValue> {
    same_dimension(&[k, q], grid)?;
    let n = grid.dimension();
    let inputs = [phi.label().to_string(), k.descriptor(), q.descriptor()];
    if let Some(r) = k.as_ball() {
        return with_error("primal-mixed", &inputs, grid, |g| {
            let h = support_values(q, g)?;
            let s = checked_quadrature(g, |i| {
                Ok(check_phi(i, phi, check_ratio(i, h[i] / r)?)? * r.powi(n as i32))
            })?;
            Ok(s / n as f64)
        });
    }
    let poly = k.as_polytope().ok_or_else(|| {
        Error::UnsupportedRepresentation(format!(
            "primal mixed volume needs a polytope or ball, got {:?}",
            k.kind()
        ))
    })?;
    let areas = poly.facet_areas().ok_or_else(|| {
        Error::UnsupportedRepresentation(format!("facet areas are not available in dimension {n}"))
    })?;
    let dirs: Vec<Vec<f64>> = poly.facets().iter().map(|f| f.normal.clone()).collect();
    let eval = |g: &SphericalGrid| -> Result<f64> {
        let hq = support_in(q, g, &dirs)?;
        let mut s = 0.0;
        for (j, f) in poly.facets().iter().enumerate() {
            let r = check_ratio(j, hq[j] / f.offset)?;
            s += check_phi(j, phi, r)? * f.offset * areas[j];
        }
        Ok(s / n as f64)
    };
    if q.has_analytic_support() {
        let desc = grid.descriptor();
        Ok(FunctionalValue {
            value: eval(grid)?,
            quadrature_error: 0.0,
            digest: digest(&["primal-mixed", &desc, &inputs[0], &inputs[1], &inputs[2]]),
        })
    } else {
        with_error("primal-mixed", &inputs, grid, eval)
    }
}

/// `S_φ(K) = n V_φ(K, B)`.
pub fn primal_surface_area(
    phi: &OrliczFunction,
    k: &StarBody,
    grid: &SphericalGrid,
) -> Result<FunctionalValue> {
    let b = StarBody::unit_ball(grid.dimension());
    let mut v = primal_mixed_volume(phi, k, &b, grid)?;
    let n = grid.dimension() as f64;
    v.value *= n;
    v.quadrature_error *= n;
    Ok(v)
}

/// `ω_φ(K) = (1/(nω_n)) ∫ φ(h_K) dσ` for a convex body `K`.
pub fn primal_mean_width(
    phi: &OrliczFunction,
    k: &StarBody,
    grid: &SphericalGrid,
) -> Result<FunctionalValue> {
    same_dimension(&[k], grid)?;
    let n = grid.dimension();
    with_error(
        "primal-mean-width",
        &[phi.label().to_string(), k.descriptor()],
        grid,
        |g| {
            let h = support_values(k, g)?;
            let s = checked_quadrature(g, |i| check_phi(i, phi, h[i]))?;
            Ok(s / (n as f64 * unit_ball_volume(n)))
        },
    )
}

/// `Ṽ_φ⃗(K⃗; L⃗)` for `n` slots.
pub fn multi_dual_mixed_volume(
    phis: &[OrliczFunction],
    ks: &[StarBody],
    ls: &[StarBody],
    grid: &SphericalGrid,
) -> Result<FunctionalValue> {
    let n = grid.dimension();
    if phis.len() != n || ks.len() != n || ls.len() != n {
        return Err(Error::Configuration(format!(
            "multi-body functional needs {n} functions and {n} bodies per list"
        )));
    }
    let all: Vec<&StarBody> = ks.iter().chain(ls).collect();
    same_dimension(&all, grid)?;
    let mut inputs: Vec<String> = phis.iter().map(|p| p.label().to_string()).collect();
    inputs.extend(all.iter().map(|b| b.descriptor()));
    with_error("multi-dual", &inputs, grid, |g| {
        let rk: Vec<Vec<f64>> = ks
            .iter()
            .map(|b| radial_values(b, g))
            .collect::<Result<_>>()?;
        let rl: Vec<Vec<f64>> = ls
            .iter()
            .map(|b| radial_values(b, g))
            .collect::<Result<_>>()?;
        let pr: Vec<&OrliczFunction> = phis.iter().collect();
        let kr: Vec<&[f64]> = rk.iter().map(|v| v.as_slice()).collect();
        let lr: Vec<&[f64]> = rl.iter().map(|v| v.as_slice()).collect();
        multi_dual_mixed_kernel(g, &pr, &kr, &lr)
    })
}

/// `Ṽ_{φ₁,φ₂,i}(K, L; Q₁, Q₂)`.
#[allow(clippy::too_many_arguments)]
pub fn ith_dual_mixed_volume(
    phi1: &OrliczFunction,
    phi2: &OrliczFunction,
    i_index: f64,
    k: &StarBody,
    l: &StarBody,
    q1: &StarBody,
    q2: &StarBody,
    grid: &SphericalGrid,
) -> Result<FunctionalValue> {
    if !i_index.is_finite() {
        return Err(Error::Configuration(format!(
            "index i must be finite, got {i_index}"
        )));
    }
    same_dimension(&[k, l, q1, q2], grid)?;
    let inputs = [
        phi1.label().to_string(),
        phi2.label().to_string(),
        format!("{i_index:e}"),
        k.descriptor(),
        l.descriptor(),
        q1.descriptor(),
        q2.descriptor(),
    ];
    with_error("ith-dual", &inputs, grid, |g| {
        ith_dual_mixed_kernel(
            g,
            phi1,
            phi2,
            i_index,
            &radial_values(k, g)?,
            &radial_values(l, g)?,
            &radial_values(q1, g)?,
            &radial_values(q2, g)?,
        )
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::bodies::{make_random_star, Polytope};
    use crate::sphgrid::Scheme;
    use std::f64::consts::PI;

    fn circle() -> SphericalGrid {
        SphericalGrid::build(2, 512, Scheme::UniformAngle, None).unwrap()
    }

    fn rel(a: f64, b: f64) -> f64 {
        (a - b).abs() / b.abs()
    }

    fn pw(p: f64) -> OrliczFunction {
        OrliczFunction::power(p).unwrap()
    }

    #[test]
    fn volume_examples() {
        let s2 = SphericalGrid::build(3, 20000, Scheme::Fibonacci, None).unwrap();
        let b = volume(&StarBody::unit_ball(3), &s2).unwrap();
        assert!(rel(b.value, 4.0 * PI / 3.0) < 1e-3);
        let cube = volume(&StarBody::cube(3, 1.0).unwrap(), &s2).unwrap();
        assert!(rel(cube.value, 8.0) < 1e-2);
        let e = volume(&StarBody::ellipsoid_axes(&[2.0, 0.5]).unwrap(), &circle()).unwrap();
        assert!(rel(e.value, PI) < 1e-6);
        assert!(e.quadrature_error < 1e-6);
    }

    #[test]
    fn vrad_examples() {
        let g = circle();
        assert!(rel(vrad(&StarBody::ball(2, 3.0).unwrap(), &g).unwrap(), 3.0) < 1e-12);
        assert!(
            rel(
                vrad(&StarBody::cube(2, 1.0).unwrap(), &g).unwrap(),
                (4.0 / PI).sqrt()
            ) < 1e-3
        );
    }

    #[test]
    fn dual_mixed_examples() {
        let g = circle();
        let b = StarBody::unit_ball(2);
        let v = dual_mixed_volume(&pw(3.0), &b, &b.scaled(2.0).unwrap(), &g).unwrap();
        assert!(rel(v.value, 8.0 * PI) < 1e-12);
        let alpha = OrliczFunction::constant(2.5).unwrap();
        let k = make_random_star(2, 3, 0.3, false).unwrap();
        let vk = volume(&k, &g).unwrap().value;
        let v = dual_mixed_volume(&alpha, &k, &b, &g).unwrap();
        assert!(rel(v.value, 2.5 * vk) < 1e-12);
    }

    #[test]
    fn surface_and_mean_radius() {
        let g = circle();
        let phi = OrliczFunction::expression("exp(1/t)").unwrap();
        let k = StarBody::ball(2, 2.0).unwrap();
        let s = dual_surface_area(&phi, &k, &g).unwrap();
        assert!(rel(s.value, phi.eval(0.5) * 2.0 * 4.0 * PI) < 1e-12);
        let m = dual_mean_radius(&phi, &k, &g).unwrap();
        assert!(rel(m.value, phi.eval(2.0)) < 1e-12);
        let one = OrliczFunction::constant(1.0).unwrap();
        let r = make_random_star(2, 8, 0.4, true).unwrap();
        let s = dual_surface_area(&one, &r, &g).unwrap().value;
        assert!(rel(s, 2.0 * volume(&r, &g).unwrap().value) < 1e-12);
    }

    #[test]
    fn primal_examples() {
        let g = circle();
        let sq = StarBody::cube(2, 1.0).unwrap();
        let v = primal_mixed_volume(&pw(2.0), &sq, &sq, &g).unwrap();
        assert!(rel(v.value, 4.0) < 1e-12);
        let phi = pw(-1.5);
        let rb = StarBody::ball(2, 1.7).unwrap();
        let s = primal_surface_area(&phi, &rb, &g).unwrap();
        assert!(rel(s.value, phi.eval(1.0 / 1.7) * 2.0 * PI * 1.7 * 1.7) < 1e-12);
        let w = primal_mean_width(&phi, &rb, &g).unwrap();
        assert!(rel(w.value, phi.eval(1.7)) < 1e-12);
        let e = StarBody::ellipsoid_axes(&[2.0, 0.5]).unwrap();
        assert!(matches!(
            primal_mixed_volume(&phi, &e, &sq, &g),
            Err(Error::UnsupportedRepresentation(_))
        ));
    }

    #[test]
    fn primal_polytope_3d_self() {
        let g = SphericalGrid::build(3, 200, Scheme::Fibonacci, None).unwrap();
        let p = StarBody::polytope(Polytope::cross_polytope(3, 1.0).unwrap());
        let v = primal_mixed_volume(&pw(3.5), &p, &p, &g).unwrap();
        assert!(rel(v.value, 4.0 / 3.0) < 1e-10);
    }

    #[test]
    fn multi_examples() {
        let g = circle();
        let b = StarBody::unit_ball(2);
        let k = make_random_star(2, 2, 0.3, false).unwrap();
        let l = make_random_star(2, 9, 0.2, true).unwrap();
        let phi = pw(-1.0);
        let m = multi_dual_mixed_volume(
            &[phi.clone(), phi.clone()],
            &[k.clone(), k.clone()],
            &[l.clone(), l.clone()],
            &g,
        )
        .unwrap();
        let d = dual_mixed_volume(&phi, &k, &l, &g).unwrap();
        assert!(rel(m.value, d.value) < 1e-12);
        let m = multi_dual_mixed_volume(
            &[pw(0.5), pw(-2.0)],
            &[b.clone(), b.clone()],
            &[b.clone(), b.clone()],
            &g,
        )
        .unwrap();
        assert!(rel(m.value, PI) < 1e-12);
        let two = StarBody::ball(2, 2.0).unwrap();
        let m = multi_dual_mixed_volume(
            &[pw(1.0), pw(1.0)],
            &[b.clone(), two],
            &[b.clone(), b.clone()],
            &g,
        )
        .unwrap();
        assert!(rel(m.value, 2f64.sqrt() * PI) < 1e-12);
        assert!(multi_dual_mixed_volume(&[pw(1.0)], &[b.clone()], &[b], &g).is_err());
    }

    #[test]
    fn ith_examples() {
        let g = circle();
        let b = StarBody::unit_ball(2);
        let k = make_random_star(2, 21, 0.3, false).unwrap();
        let l = make_random_star(2, 22, 0.3, false).unwrap();
        let q1 = make_random_star(2, 23, 0.2, true).unwrap();
        let q2 = make_random_star(2, 24, 0.2, true).unwrap();
        let (p1, p2) = (pw(-1.0), OrliczFunction::expression("exp(1/t)").unwrap());
        let v0 = ith_dual_mixed_volume(&p1, &p2, 0.0, &k, &l, &q1, &q2, &g)
            .unwrap()
            .value;
        assert!(rel(v0, dual_mixed_volume(&p1, &k, &q1, &g).unwrap().value) < 1e-12);
        let v2 = ith_dual_mixed_volume(&p1, &p2, 2.0, &k, &l, &q1, &q2, &g)
            .unwrap()
            .value;
        assert!(rel(v2, dual_mixed_volume(&p2, &l, &q2, &g).unwrap().value) < 1e-12);
        let vb = ith_dual_mixed_volume(&p1, &p2, 0.7, &b, &b, &b, &b, &g)
            .unwrap()
            .value;
        let want = p1.eval(1.0).powf(1.3 / 2.0) * p2.eval(1.0).powf(0.7 / 2.0) * PI;
        assert!(rel(vb, want) < 1e-12);
    }

    #[test]
    fn ratio_guard() {
        let g = circle();
        let tiny = StarBody::ball(2, 1e-13).unwrap();
        let b = StarBody::unit_ball(2);
        assert!(matches!(
            dual_mixed_volume(&pw(2.0), &b, &tiny, &g),
            Err(Error::NumericalDomain { node: 0, .. })
        ));
    }
}
