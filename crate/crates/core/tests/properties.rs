use approx::assert_relative_eq;
use orlicz_core::bodies::{
    make_random_star, polar, radial_values, support_values, transform, Flag, LinearMap, Polytope,
};
use orlicz_core::extremal::{estimate, ExtremalProblem, SearchOptions, Sense, Target};
use orlicz_core::functionals::{dual_mixed_kernel, dual_mixed_volume, dual_surface_area, volume};
use orlicz_core::orlicz::classify;
use orlicz_core::{
    find_check, run_check, OrliczFunction, Scheme, SphericalGrid, StarBody, VerifyConfig,
};
use proptest::prelude::*;

fn circle() -> SphericalGrid {
    SphericalGrid::build(2, 256, Scheme::UniformAngle, None).unwrap()
}

fn sphere() -> SphericalGrid {
    SphericalGrid::build(3, 800, Scheme::Fibonacci, None).unwrap()
}

fn star(n: usize, seed: u64, roughness: f64, symmetric: bool) -> StarBody {
    make_random_star(n, seed, roughness, symmetric).unwrap()
}

fn phi_menu() -> impl Strategy<Value = OrliczFunction> {
    prop_oneof![
        Just(OrliczFunction::power(-1.0).unwrap()),
        Just(OrliczFunction::power(0.5).unwrap()),
        Just(OrliczFunction::power(3.0).unwrap()),
        Just(OrliczFunction::expression("exp(1/t)").unwrap()),
        Just(OrliczFunction::expression("log(1+t)").unwrap()),
    ]
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn volume_scales_with_degree_n(seed: u64, rough in 0.05..0.4f64, lambda in 0.3..3.0f64, planar: bool) {
        let (n, g) = if planar { (2, circle()) } else { (3, sphere()) };
        let k = star(n, seed, rough, false);
        let v = volume(&k, &g).unwrap().value;
        let vl = volume(&k.scaled(lambda).unwrap(), &g).unwrap().value;
        prop_assert!((vl - lambda.powi(n as i32) * v).abs() <= 1e-12 * vl);
    }

    #[test]
    fn dual_mixed_volume_at_a_dilate(seed: u64, rough in 0.05..0.4f64, lambda in 0.3..3.0f64, phi in phi_menu()) {
        let g = circle();
        let k = star(2, seed, rough, false);
        let vk = volume(&k, &g).unwrap().value;
        let v = dual_mixed_volume(&phi, &k, &k.scaled(lambda).unwrap(), &g).unwrap().value;
        prop_assert!((v - phi.eval(lambda) * vk).abs() <= 1e-10 * v.abs());
    }

    #[test]
    fn dual_mixed_volume_is_monotone_in_l_for_increasing_phi(
        seed: u64, rough in 0.05..0.4f64, s2: u64, grow in 1.0..2.0f64,
    ) {
        let g = circle();
        let phi = OrliczFunction::power(0.5).unwrap();
        let k = star(2, seed, rough, false);
        let l = star(2, s2, rough, true);
        let rl = radial_values(&l, &g).unwrap();
        let bigger: Vec<f64> = rl.iter().enumerate().map(|(i, r)| r * (1.0 + (grow - 1.0) * (i % 3) as f64 / 2.0)).collect();
        let big = StarBody::grid_sampled(&g, bigger, Flag::Unknown, Flag::Unknown).unwrap();
        let a = dual_mixed_volume(&phi, &k, &l, &g).unwrap().value;
        let b = dual_mixed_volume(&phi, &k, &big, &g).unwrap().value;
        prop_assert!(a <= b * (1.0 + 1e-12));
    }

    #[test]
    fn sp_surface_is_homogeneous(seed: u64, rough in 0.05..0.4f64, lambda in 0.5..2.0f64, p in prop::sample::select(vec![-1.0, 1.0, 3.0])) {
        let g = circle();
        let k = star(2, seed, rough, true);
        let phi = OrliczFunction::power(p).unwrap();
        let s = dual_surface_area(&phi, &k, &g).unwrap().value;
        let sl = dual_surface_area(&phi, &k.scaled(lambda).unwrap(), &g).unwrap().value;
        prop_assert!((sl - lambda.powf(2.0 - p) * s).abs() <= 1e-10 * sl);
    }

    #[test]
    fn polar_reverses_inclusion(seed: u64, s2: u64, rough in 0.05..0.4f64) {
        let g = circle();
        let k = star(2, seed, rough, false);
        let m = star(2, s2, rough, false);
        let (rk, rm) = (radial_values(&k, &g).unwrap(), radial_values(&m, &g).unwrap());
        let union: Vec<f64> = rk.iter().zip(&rm).map(|(a, b)| a.max(*b)).collect();
        let k = StarBody::grid_sampled(&g, rk, Flag::Unknown, Flag::Unknown).unwrap();
        let l = StarBody::grid_sampled(&g, union, Flag::Unknown, Flag::Unknown).unwrap();
        let pk = radial_values(&polar(&k, &g).unwrap(), &g).unwrap();
        let pl = radial_values(&polar(&l, &g).unwrap(), &g).unwrap();
        for (a, b) in pl.iter().zip(&pk) {
            prop_assert!(*a <= b * (1.0 + 1e-12));
        }
    }

    #[test]
    fn radial_and_polar_support_are_reciprocal(
        offsets in prop::collection::vec(0.5..1.5f64, 5),
        phase in 0.0..1.0f64,
    ) {
        let g = circle();
        let hs: Vec<(Vec<f64>, f64)> = offsets
            .iter()
            .enumerate()
            .map(|(j, b)| {
                let a = phase + std::f64::consts::TAU * j as f64 / 5.0;
                (vec![a.cos(), a.sin()], *b)
            })
            .collect();
        let k = StarBody::polytope(Polytope::from_halfspaces(2, &hs).unwrap());
        let rho = radial_values(&k, &g).unwrap();
        let h = support_values(&polar(&k, &g).unwrap(), &g).unwrap();
        for (r, s) in rho.iter().zip(&h) {
            prop_assert!((r * s - 1.0).abs() < 1e-10);
        }
    }

    #[test]
    fn transforms_compose(seed: u64, a in prop::collection::vec(-1.0..1.0f64, 8)) {
        let g = circle();
        let k = star(2, seed, 0.3, false);
        let s = LinearMap::from_rows(&[vec![1.5 + a[0], a[1]], vec![a[2], 1.2 + a[3]]]).unwrap();
        let t = LinearMap::from_rows(&[vec![1.3 + a[4], a[5]], vec![a[6], 1.4 + a[7]]]).unwrap();
        let st = LinearMap::new(s.matrix() * t.matrix()).unwrap();
        let one = radial_values(&transform(&st, &k).unwrap(), &g).unwrap();
        let two = radial_values(&transform(&s, &transform(&t, &k).unwrap()).unwrap(), &g).unwrap();
        for (x, y) in one.iter().zip(&two) {
            prop_assert!((x - y).abs() <= 1e-10 * x);
        }
    }

    #[test]
    fn power_kernel_is_log_convex_in_p(
        rk in prop::collection::vec(0.2..3.0f64, 256),
        rq in prop::collection::vec(0.2..3.0f64, 256),
        s in -3.0..0.0f64, gap1 in 0.1..2.0f64, gap2 in 0.1..2.0f64,
    ) {
        let g = circle();
        let (r, q) = (s + gap1, s + gap1 + gap2);
        let v = |p: f64| dual_mixed_kernel(&g, &OrliczFunction::power(p).unwrap(), &rk, &rq).unwrap();
        let (vs, vr, vq) = (v(s), v(r), v(q));
        let bound = vq.powf((r - s) / (q - s)) * vs.powf((q - r) / (q - s));
        prop_assert!(vr <= bound * (1.0 + 1e-12));
    }

    #[test]
    fn power_classes_follow_the_exponent(p in -4.0..8.0f64, planar: bool) {
        let n = if planar { 2 } else { 3 };
        let nf = n as f64;
        prop_assume!(p.abs() > 1e-3 && (p - nf).abs() > 1e-3);
        let c = classify(&OrliczFunction::power(p).unwrap(), n).unwrap();
        prop_assert_eq!(c.phi_one, p < 0.0);
        prop_assert_eq!(c.phi, p < 0.0 || p > nf);
        prop_assert_eq!(c.psi, p > 0.0 && p < nf);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(8))]

    #[test]
    fn estimates_improve_on_the_ball(seed: u64, rough in 0.05..0.4f64, phi in phi_menu(), affine: bool) {
        let g = SphericalGrid::build(2, 128, Scheme::UniformAngle, None).unwrap();
        let target = if affine { Target::Affine } else { Target::Geominimal };
        let k = star(2, seed, rough, true);
        let options = SearchOptions { budget: 400, restarts: 2, seed, ..Default::default() };
        let p = ExtremalProblem::auto(target, phi.clone(), k.clone(), g.clone(), options).unwrap();
        let r = estimate(&p).unwrap();
        let at_ball = 2.0 * dual_mixed_volume(&phi, &k, &StarBody::unit_ball(2), &g).unwrap().value;
        match r.sense {
            Sense::Inf => prop_assert!(r.value <= at_ball * (1.0 + 1e-9)),
            Sense::Sup => prop_assert!(r.value >= at_ball * (1.0 - 1e-9)),
        }
    }

    #[test]
    fn verify_runs_replay_exactly(seed: u64) {
        let config = VerifyConfig { seed, trials: 6, ..Default::default() };
        let check = find_check("dual-isoperimetric").unwrap();
        let a = run_check(&check, &config).unwrap();
        let b = run_check(&check, &config).unwrap();
        prop_assert_eq!(a.rows, b.rows);
    }
}

#[test]
fn kernel_dilate_identity_is_exact_for_analytic_bodies() {
    let g = circle();
    for k in [
        StarBody::unit_ball(2),
        StarBody::ellipsoid_axes(&[2.0, 0.5]).unwrap(),
        StarBody::cube(2, 1.0).unwrap(),
    ] {
        let vk = volume(&k, &g).unwrap().value;
        for lambda in [0.5, 1.0, 2.0] {
            let phi = OrliczFunction::power(3.0).unwrap();
            let v = dual_mixed_volume(&phi, &k, &k.scaled(lambda).unwrap(), &g)
                .unwrap()
                .value;
            assert_relative_eq!(v, lambda.powi(3) * vk, max_relative = 1e-12);
        }
    }
}
