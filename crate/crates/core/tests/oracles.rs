//! Library values against independently computed references.

use std::f64::consts::PI;

use approx::assert_relative_eq;
use orlicz_core::bodies::{
    convex_hull, radial_values, support_values, transform, Flag, LinearMap, Polytope,
};
use orlicz_core::extremal::{
    estimate_ellipsoid_restricted, ExtremalProblem, SearchOptions, Target,
};
use orlicz_core::functionals::{dual_mixed_volume, dual_surface_area, volume};
use orlicz_core::orlicz::classify;
use orlicz_core::{OrliczFunction, Scheme, SphericalGrid, StarBody};

fn circle(n: usize) -> SphericalGrid {
    SphericalGrid::build(2, n, Scheme::UniformAngle, None).unwrap()
}

/// Midpoint rule on `[0, 2π)` with `m` nodes.
fn angular(m: usize, f: impl Fn(f64) -> f64) -> f64 {
    let h = 2.0 * PI / m as f64;
    (0..m).map(|i| f((i as f64 + 0.5) * h)).sum::<f64>() * h
}

#[test]
fn hexagram_and_its_hull() {
    // Two triangles with inradius r: the star has area 4√3 r², its hull is
    // the regular hexagon of circumradius 2r with area 6√3 r².
    let r = 0.7;
    let g = circle(600);
    let up = StarBody::polytope(Polytope::regular_polygon(3, r, 0.0).unwrap());
    let down = StarBody::polytope(Polytope::regular_polygon(3, r, PI / 3.0).unwrap());
    let (a, b) = (
        radial_values(&up, &g).unwrap(),
        radial_values(&down, &g).unwrap(),
    );
    let star_rho: Vec<f64> = a.iter().zip(&b).map(|(x, y)| x.max(*y)).collect();
    let star = StarBody::grid_sampled(&g, star_rho, Flag::Yes, Flag::No).unwrap();

    let area = volume(&star, &g).unwrap().value;
    assert_relative_eq!(area, 4.0 * 3f64.sqrt() * r * r, max_relative = 1e-3);

    let hull = convex_hull(&star, &g).unwrap();
    let hull_area = volume(&hull, &g).unwrap().value;
    assert_relative_eq!(hull_area, 6.0 * 3f64.sqrt() * r * r, max_relative = 1e-4);
    // The hull has the star's support function.
    let (hs, hh) = (
        support_values(&star, &g).unwrap(),
        support_values(&hull, &g).unwrap(),
    );
    for (x, y) in hs.iter().zip(&hh) {
        assert_relative_eq!(x, y, max_relative = 1e-9);
    }
}

#[test]
fn dual_mixed_volume_against_a_fine_angular_sum() {
    // K = diag(2, 1/2)B, L = B, φ = 1/t: Ṽ = ½∫ρ_K³ dθ.
    let rho = |t: f64| 1.0 / ((t.cos() / 2.0).powi(2) + (2.0 * t.sin()).powi(2)).sqrt();
    let reference = 0.5 * angular(1_000_000, |t| rho(t).powi(3));
    let k = StarBody::ellipsoid_axes(&[2.0, 0.5]).unwrap();
    let phi = OrliczFunction::power(-1.0).unwrap();
    let v = dual_mixed_volume(&phi, &k, &StarBody::unit_ball(2), &circle(512)).unwrap();
    assert_relative_eq!(v.value, reference, max_relative = 1e-8);
}

#[test]
fn dual_surface_area_of_a_square_against_a_fine_angular_sum() {
    // S̃_p(K) = ∫ρ_K^{2-p} dθ for the square [-1,1]².
    let rho = |t: f64| 1.0 / t.cos().abs().max(t.sin().abs());
    let g = circle(4096);
    let square = StarBody::cube(2, 1.0).unwrap();
    for p in [-1.0, 0.5, 3.0] {
        let reference = angular(1_000_000, |t| rho(t).powf(2.0 - p));
        let s = dual_surface_area(&OrliczFunction::power(p).unwrap(), &square, &g).unwrap();
        assert_relative_eq!(s.value, reference, max_relative = 1e-5);
    }
}

/// Sign of `F''(s)` for `F(s) = φ(s^{1/n})` by central differences.
fn second_derivative_signs(phi: &OrliczFunction, n: usize) -> (bool, bool) {
    let f = |s: f64| phi.eval(s.powf(1.0 / n as f64));
    let (mut convex, mut concave) = (true, true);
    for i in 1..200 {
        let s = 0.05 * i as f64;
        let h = 1e-3 * s;
        let d2 = (f(s + h) - 2.0 * f(s) + f(s - h)) / (h * h);
        convex &= d2 > 0.0;
        concave &= d2 < 0.0;
    }
    (convex, concave)
}

#[test]
fn classes_of_exp_inverse_and_log_follow_second_derivatives() {
    let exp_inv = OrliczFunction::expression("exp(1/t)").unwrap();
    let log1p = OrliczFunction::expression("log(1+t)").unwrap();
    for n in [2, 3] {
        let (convex, _) = second_derivative_signs(&exp_inv, n);
        assert!(convex);
        let c = classify(&exp_inv, n).unwrap();
        assert!(c.phi && c.phi_one && !c.psi);

        let (_, concave) = second_derivative_signs(&log1p, n);
        assert!(concave);
        let c = classify(&log1p, n).unwrap();
        assert!(c.psi && !c.phi);
    }
}

/// Brute-force minimum of `n Ṽ_φ(K, E)` over ellipses `E = R_θ diag(a, 1/a) B`
/// (area π, so `|E°| = π`), with `φ = 1/t`: `∫ ρ_K³ / ρ_E dθ`.
fn ellipse_family_minimum(rho_k: impl Fn(f64) -> f64) -> f64 {
    let mut best = f64::INFINITY;
    let table: Vec<(f64, f64)> = (0..2000)
        .map(|i| {
            let t = (i as f64 + 0.5) * 2.0 * PI / 2000.0;
            (t, rho_k(t).powi(3))
        })
        .collect();
    for ia in 0..=120 {
        let a = (ia as f64 * 0.01).exp();
        for it in 0..90 {
            let th = it as f64 * PI / 90.0;
            let s: f64 = table
                .iter()
                .map(|(t, r3)| {
                    let (c, s) = ((t - th).cos(), (t - th).sin());
                    r3 * ((c / a).powi(2) + (s * a).powi(2)).sqrt()
                })
                .sum();
            best = best.min(s * 2.0 * PI / 2000.0);
        }
    }
    best
}

#[test]
fn ellipsoid_restricted_search_matches_brute_force() {
    // Fine enough that the corners of K cost less than the brute-force spacing.
    let g = circle(4096);
    let phi = OrliczFunction::power(-1.0).unwrap();
    let square = StarBody::cube(2, 1.0).unwrap();
    let stretch = LinearMap::from_rows(&[vec![1.6, 0.0], vec![0.0, 0.6]]).unwrap();
    let rect = transform(&stretch, &square).unwrap();
    let cases: [(StarBody, Box<dyn Fn(f64) -> f64>); 2] = [
        (
            square,
            Box::new(|t: f64| 1.0 / t.cos().abs().max(t.sin().abs())),
        ),
        (
            rect,
            Box::new(|t: f64| 1.0 / (t.cos().abs() / 1.6).max(t.sin().abs() / 0.6)),
        ),
    ];
    for (k, rho) in cases {
        let reference = ellipse_family_minimum(rho);
        for target in [Target::Affine, Target::Geominimal] {
            let p = ExtremalProblem::auto(
                target,
                phi.clone(),
                k.clone(),
                g.clone(),
                SearchOptions::default(),
            )
            .unwrap();
            let r = estimate_ellipsoid_restricted(&p).unwrap();
            // The brute-force grid is coarse, so it can only be above the true minimum.
            assert!(
                r.value <= reference * (1.0 + 2e-5),
                "{} > {reference}",
                r.value
            );
            assert_relative_eq!(r.value, reference, max_relative = 2e-3);
        }
    }
}
