use rand::Rng;

use super::gen;
use super::{Check, Comparison, Mode, ToleranceKind, Trial};
use crate::bodies::{polar, radial_values, transform, StarBody};
use crate::error::{Error, Result};
use crate::extremal::{ExtremalResult, Sense, Target};
use crate::functionals::{
    dual_mean_radius, dual_mixed_kernel, dual_mixed_volume, dual_surface_area,
    ith_dual_mixed_kernel, multi_dual_mixed_kernel, primal_mean_width, primal_mixed_volume,
    primal_surface_area, volume, vrad_from_volume,
};
use crate::orlicz::{classify, compose_h, Monotonicity, OrliczFunction};
use crate::sphgrid::{unit_ball_volume, SphericalGrid};

use ToleranceKind::{Exact as X, Optimizer as O, Quadrature as Q};

type Rows = Result<Vec<Comparison>>;

pub fn registry() -> Vec<Check> {
    fn c(
        number: usize,
        id: &'static str,
        statement: &'static str,
        soundness: &'static str,
        kind: ToleranceKind,
        run: super::TrialFn,
    ) -> Check {
        Check {
            number,
            id,
            statement,
            soundness,
            mode: Mode::Exact,
            kind,
            run,
        }
    }
    const QUADRATURE: &str = "no optimizer involved";
    const JENSEN: &str =
        "no optimizer involved; an exact Jensen instance for the quadrature measure";
    vec![
        c(
            1,
            "orlicz-minkowski",
            "V_φ(K,L) ≥ |K| φ((|L|/|K|)^{1/n}) for convex K, L and increasing convex φ",
            QUADRATURE,
            Q,
            orlicz_minkowski,
        ),
        c(
            2,
            "orlicz-isoperimetric",
            "S_φ(K) ≥ φ(1/vrad K) n|K|, the value at the ball of equal volume",
            QUADRATURE,
            Q,
            orlicz_isoperimetric,
        ),
        c(
            3,
            "orlicz-urysohn",
            "ω_φ(K) ≥ φ(vrad K), the value at the ball of equal volume",
            QUADRATURE,
            Q,
            orlicz_urysohn,
        ),
        c(
            4,
            "dual-orlicz-minkowski",
            "Ṽ_φ(K,L) ≤ |K| φ((|L|/|K|)^{1/n}) when t ↦ φ(t^{1/n}) is concave, ≥ when convex, = when L is a dilate of K",
            JENSEN,
            Q,
            dual_orlicz_minkowski,
        ),
        c(
            5,
            "dual-isoperimetric",
            "S̃_φ(K) ≤ φ(1/vrad K) n|K| when t ↦ φ(t^{1/n}) is concave, ≥ when convex",
            JENSEN,
            Q,
            dual_isoperimetric,
        ),
        c(
            6,
            "dual-urysohn",
            "ω̃_φ(K) ≤ φ(vrad K) when t ↦ φ(t^{1/n}) is concave, ≥ when convex",
            JENSEN,
            Q,
            dual_urysohn,
        ),
        c(
            7,
            "sp-power-isoperimetric",
            "S̃_p(K)/S̃_p(B) ≥ (|K|/ω_n)^{(n−p)/n} for p < 0 or p ≥ n, ≤ for 0 < p < n",
            JENSEN,
            Q,
            sp_power_isoperimetric,
        ),
        c(
            8,
            "ordering-chain",
            "Ω̃_φ(K) ≤ G̃_φ(K) ≤ S̃_φ(K) for φ ∈ Φ̃, reversed for φ ∈ Ψ̃",
            "the affine search starts from the geominimal optimizer; the ball is always a candidate",
            O,
            ordering_chain,
        ),
        c(
            9,
            "monotone-in-phi",
            "φ ≤ ψ in the same class implies Ω̃_φ ≤ Ω̃_ψ and G̃_φ ≤ G̃_ψ",
            "for an infimum the φ search starts from the ψ optimizer, for a supremum the ψ search starts from the φ optimizer",
            O,
            monotone_in_phi,
        ),
        c(
            10,
            "affine-invariance",
            "Ω̃_φ(TK) = Ω̃_φ(K) and G̃_φ(TK) = G̃_φ(K) for volume-preserving linear T",
            "the search for TK starts from T applied to the optimizer for K, and the reverse when they disagree",
            O,
            affine_invariance,
        ),
        c(
            11,
            "ellipsoid-closed-form",
            "Ω̃_φ(E) = G̃_φ(E) = φ(1/vrad E) n|E| for ellipsoids E and φ ∈ Φ̃₁ ∪ Ψ̃",
            "E itself is a starting body and attains the value",
            O,
            ellipsoid_closed_form,
        ),
        c(
            12,
            "volume-bounds",
            "Φ̃: Ω̃ ≤ φ(vrad K°) n|K| (and G̃ for convex K); Φ̃₁: Ω̃, G̃ ≥ φ(1/vrad K) n|K|; Ψ̃: both reversed",
            "upper bounds for an infimum are attained at L = K, which is always a candidate; the rest compare in the safe direction",
            O,
            volume_bounds,
        ),
        c(
            13,
            "affine-isoperimetric-i",
            "G̃_φ(K) ≥ Ω̃_φ(K) ≥ φ(1/vrad K) n|K| for φ ∈ Φ̃₁, reversed for φ ∈ Ψ̃",
            "the affine search starts from the geominimal optimizer; the volume bound is compared in the safe direction",
            O,
            affine_isoperimetric_i,
        ),
        c(
            14,
            "affine-isoperimetric-ii",
            "Ω̃_φ(K) ≤ Ω̃_φ((B_{K°})°) for φ ∈ Φ̃₁ and symmetric K (G̃ for convex K), with equality for ellipsoids",
            "the bound dominates the value at L = K, which is always a candidate",
            O,
            affine_isoperimetric_ii,
        ),
        c(
            15,
            "santalo-products",
            "products Ω̃_p(K)Ω̃_p(K°) and G̃_p(K)G̃_p(K°) against (nω_n)² in the four ranges of p; the sides carrying the unknown constant c are monitored",
            "every exact-mode side is attained at L = K or compares in the safe direction; c-sides are recorded, not judged",
            O,
            santalo_products,
        ),
        c(
            16,
            "cyclic-h",
            "Ω̃_φ/(n|K|) against H(Ω̃_ψ/(n|K|)) with H = φ∘ψ⁻¹, in the six monotonicity and convexity cases",
            "cases (a)-(c) are attained at L = K; in (d)-(f) the search that must improve starts from the other optimizer",
            O,
            cyclic_h,
        ),
        c(
            17,
            "cyclic-powers",
            "G̃_r ≤ G̃_q^{(r−s)/(q−s)} G̃_s^{(q−r)/(q−s)} (and Ω̃) for s<r<0<q<n, 0<s<r<q<n or 0<s<n<r<q",
            "the per-body Hölder step is exact; estimates start from the optimizer of the exponent whose value is used",
            X,
            cyclic_powers,
        ),
        c(
            18,
            "mixed-af",
            "[Ω̃_φ⃗(K⃗)]^n ≤ Π Ω̃_{φ_i}(K_i) (and G̃), plus the m-fold Hölder chain for 1 ≤ m ≤ n",
            "the Hölder chain is exact per body tuple; the joint or single searches start from the other optimizers",
            O,
            mixed_af,
        ),
        c(
            19,
            "mixed-isoperimetric",
            "Φ̃₁: [Ω̃_φ⃗]^n ≤ Π Ω̃_{φ_i}((B_{K_i°})°); Ψ̃: [G̃_φ⃗]^n ≤ [Ω̃_φ⃗]^n ≤ Π Ω̃_{φ_i}(B_{K_i})",
            "the Φ̃₁ bound dominates the value at L⃗ = K⃗; the Ψ̃ bound compares in the safe direction",
            O,
            mixed_isoperimetric,
        ),
        c(
            20,
            "cyclic-powers-multi",
            "the cyclic power inequality for the multi-body functionals with φ⃗ = (t^p, …, t^p)",
            "as for cyclic-powers, with joint searches",
            O,
            cyclic_powers_multi,
        ),
        c(
            21,
            "ith-cyclic",
            "[Ω̃_j]^{k−i} ≤ [Ω̃_i]^{k−j} [Ω̃_k]^{j−i} for i < j < k and φ₁, φ₂ ∈ Ψ̃ (and G̃)",
            "the per-pair Hölder step is exact; the i and k searches start from the j optimizer",
            X,
            ith_cyclic,
        ),
        c(
            22,
            "ith-bounds",
            "bounds for the i-th mixed functionals by products of ball values: Φ̃₁ with 0 ≤ i ≤ n, Ψ̃ with 0 ≤ i ≤ n, and Ψ̃ with i > n against an ellipsoid",
            "upper bounds for infima are attained at (K, L); for i > n the pair (B, E) is a starting pair",
            O,
            ith_bounds,
        ),
    ]
}

fn pw(p: f64) -> Result<OrliczFunction> {
    OrliczFunction::power(p)
}

fn ex(src: &str) -> Result<OrliczFunction> {
    OrliczFunction::expression(src)
}

/// Decreasing with `t ↦ φ(t^{1/n})` convex.
fn phi_one(k: usize) -> Result<OrliczFunction> {
    match k % 3 {
        0 => pw(-1.0),
        1 => pw(-2.0),
        _ => ex("exp(1/t)"),
    }
}

/// `Φ̃`, including one increasing member.
fn phi_class(n: usize, k: usize) -> Result<OrliczFunction> {
    if k % 4 == 3 {
        pw(n as f64 + 1.0)
    } else {
        phi_one(k)
    }
}

fn psi(k: usize) -> Result<OrliczFunction> {
    match k % 3 {
        0 => pw(0.5),
        1 => pw(1.0),
        _ => ex("log(1+t)"),
    }
}

fn increasing_convex(k: usize) -> Result<OrliczFunction> {
    match k % 4 {
        0 => pw(1.0),
        1 => pw(2.0),
        2 => pw(1.5),
        _ => ex("exp(t)"),
    }
}

fn le_or_ge(
    le: bool,
    case: impl Into<String>,
    lhs: f64,
    rhs: f64,
    kind: ToleranceKind,
) -> Comparison {
    if le {
        Comparison::le(case, lhs, rhs, kind)
    } else {
        Comparison::ge(case, lhs, rhs, kind)
    }
}

fn sense_of(phi: &OrliczFunction, n: usize) -> Result<Sense> {
    Sense::for_class(&classify(phi, n)?)
}

fn target_name(target: Target) -> &'static str {
    target.name()
}

fn convex_body(t: &mut Trial) -> Result<StarBody> {
    if t.n == 2 {
        gen::polygon(&mut t.rng)
    } else {
        gen::symmetric_convex(&mut t.rng, t.n)
    }
}

fn exact_volume(k: &StarBody, grid: &SphericalGrid) -> Result<f64> {
    match k.exact_volume() {
        Some(v) => Ok(v),
        None => Ok(volume(k, grid)?.value),
    }
}

fn any_star(t: &mut Trial) -> Result<StarBody> {
    let symmetric = t.rng.random_bool(0.5);
    gen::star(&mut t.rng, t.n, symmetric)
}

fn symmetric_star(t: &mut Trial) -> Result<StarBody> {
    gen::star(&mut t.rng, t.n, true)
}

/// A body in the admissible class of the target: symmetric star for the
/// affine problem, symmetric convex body for the geominimal one.
fn admissible_body(t: &mut Trial, target: Target) -> Result<StarBody> {
    match target {
        Target::Affine => symmetric_star(t),
        Target::Geominimal => gen::symmetric_convex(&mut t.rng, t.n),
    }
}

fn nw(n: usize) -> f64 {
    n as f64 * unit_ball_volume(n)
}

fn orlicz_minkowski(t: &mut Trial) -> Rows {
    let n = t.n;
    let (case, v) = t.pick(3, 4);
    let phi = increasing_convex(v)?;
    let radius = t.rng.random_range(0.5..=1.5);
    let k = if case == 2 {
        StarBody::ball(n, radius)?
    } else {
        convex_body(t)?
    };
    let l = if case == 1 {
        StarBody::ball(n, radius)?
    } else {
        convex_body(t)?
    };
    t.note("K", &k);
    t.note("L", &l);
    let mixed = primal_mixed_volume(&phi, &k, &l, t.quad)?.value;
    let vk = exact_volume(&k, t.quad)?;
    let vl = exact_volume(&l, t.quad)?;
    let rhs = vk * phi.eval((vl / vk).powf(1.0 / n as f64));
    let label = ["polytope-polytope", "polytope-ball", "ball-polytope"][case];
    Ok(vec![Comparison::ge(
        format!("{label}:{}", phi.label()),
        mixed,
        rhs,
        Q,
    )])
}

fn orlicz_isoperimetric(t: &mut Trial) -> Rows {
    let n = t.n;
    let (case, v) = t.pick(4, 4);
    let phi = increasing_convex(v)?;
    let k = if case == 3 {
        StarBody::ball(n, t.rng.random_range(0.5..=1.5))?
    } else {
        convex_body(t)?
    };
    t.note("K", &k);
    let s = primal_surface_area(&phi, &k, t.quad)?.value;
    let vk = exact_volume(&k, t.quad)?;
    let rhs = phi.eval(1.0 / vrad_from_volume(vk, n)) * n as f64 * vk;
    Ok(vec![Comparison::ge(phi.label().to_string(), s, rhs, Q)])
}

fn orlicz_urysohn(t: &mut Trial) -> Rows {
    let n = t.n;
    let (case, v) = t.pick(2, 4);
    let phi = increasing_convex(v)?;
    let k = if case == 0 {
        convex_body(t)?
    } else {
        gen::ellipsoid(&mut t.rng, n, 4.0)?
    };
    t.note("K", &k);
    let w = primal_mean_width(&phi, &k, t.quad)?.value;
    let rhs = phi.eval(vrad_from_volume(exact_volume(&k, t.quad)?, n));
    Ok(vec![Comparison::ge(phi.label().to_string(), w, rhs, Q)])
}

/// Concave `t ↦ φ(t^{1/n})` for `k` even, convex for `k` odd.
fn concave_or_convex(n: usize, concave: bool, k: usize) -> Result<OrliczFunction> {
    if concave {
        psi(k)
    } else {
        phi_class(n, k)
    }
}

fn dual_orlicz_minkowski(t: &mut Trial) -> Rows {
    let n = t.n;
    let (case, v) = t.pick(3, 8);
    let k = any_star(t)?;
    t.note("K", &k);
    let vk = volume(&k, t.quad)?.value;
    if case == 2 {
        let phi = concave_or_convex(n, v % 2 == 0, v / 2)?;
        let lambda = t.rng.random_range(0.5..=2.0);
        t.note_text(format!("lambda={lambda:e}"));
        let value = dual_mixed_volume(&phi, &k, &k.scaled(lambda)?, t.quad)?.value;
        return Ok(vec![Comparison::eq(
            format!("dilate:{}", phi.label()),
            value,
            phi.eval(lambda) * vk,
            Q,
        )]);
    }
    let concave = case == 0;
    let phi = concave_or_convex(n, concave, v)?;
    let l = any_star(t)?;
    t.note("L", &l);
    let vl = volume(&l, t.quad)?.value;
    let value = dual_mixed_volume(&phi, &k, &l, t.quad)?.value;
    let rhs = vk * phi.eval((vl / vk).powf(1.0 / n as f64));
    let label = if concave { "concave" } else { "convex" };
    Ok(vec![le_or_ge(
        concave,
        format!("{label}:{}", phi.label()),
        value,
        rhs,
        Q,
    )])
}

fn dual_isoperimetric(t: &mut Trial) -> Rows {
    let n = t.n;
    let (case, v) = t.pick(2, 4);
    let concave = case == 0;
    let phi = concave_or_convex(n, concave, v)?;
    let k = any_star(t)?;
    t.note("K", &k);
    let vk = volume(&k, t.quad)?.value;
    let s = dual_surface_area(&phi, &k, t.quad)?.value;
    let rhs = phi.eval(1.0 / vrad_from_volume(vk, n)) * n as f64 * vk;
    let label = if concave { "concave" } else { "convex" };
    Ok(vec![le_or_ge(
        concave,
        format!("{label}:{}", phi.label()),
        s,
        rhs,
        Q,
    )])
}

fn dual_urysohn(t: &mut Trial) -> Rows {
    let n = t.n;
    let (case, v) = t.pick(2, 4);
    let concave = case == 0;
    let phi = concave_or_convex(n, concave, v)?;
    let k = any_star(t)?;
    t.note("K", &k);
    let w = dual_mean_radius(&phi, &k, t.quad)?.value;
    let rhs = phi.eval(vrad_from_volume(volume(&k, t.quad)?.value, n));
    let label = if concave { "concave" } else { "convex" };
    Ok(vec![le_or_ge(
        concave,
        format!("{label}:{}", phi.label()),
        w,
        rhs,
        Q,
    )])
}

fn sp_power_isoperimetric(t: &mut Trial) -> Rows {
    let n = t.n;
    let nf = n as f64;
    let ps = [
        -2.0,
        -1.0,
        -0.5,
        nf / 4.0,
        nf / 2.0,
        0.75 * nf,
        nf,
        nf + 1.0,
        2.0 * nf,
    ];
    let (case, _) = t.pick(ps.len(), 1);
    let p = ps[case];
    let phi = pw(p)?;
    let k = any_star(t)?;
    t.note("K", &k);
    let ratio = dual_surface_area(&phi, &k, t.quad)?.value
        / dual_surface_area(&phi, &StarBody::unit_ball(n), t.quad)?.value;
    let vk = volume(&k, t.quad)?.value;
    let rhs = (vk / unit_ball_volume(n)).powf((nf - p) / nf);
    let reversed = p > 0.0 && p < nf;
    Ok(vec![le_or_ge(reversed, format!("p={p}"), ratio, rhs, Q)])
}

fn ordering_chain(t: &mut Trial) -> Rows {
    let n = t.n;
    let (case, v) = t.pick(2, 4);
    let phi = if case == 0 { phi_class(n, v)? } else { psi(v)? };
    let k = any_star(t)?;
    t.note("K", &k);
    let g = t.estimate(Target::Geominimal, &phi, &k, vec![])?;
    let a = t.estimate(Target::Affine, &phi, &k, vec![g.candidate().clone()])?;
    let s = n as f64 * dual_mixed_volume(&phi, &k, &StarBody::unit_ball(n), t.search)?.value;
    let inf = g.sense == Sense::Inf;
    let (first, second) = if inf {
        ("affine<=geominimal", "geominimal<=surface")
    } else {
        ("affine>=geominimal", "geominimal>=surface")
    };
    Ok(vec![
        le_or_ge(inf, format!("{first}:{}", phi.label()), a.value, g.value, O),
        le_or_ge(inf, format!("{second}:{}", phi.label()), g.value, s, O),
    ])
}

fn monotone_in_phi(t: &mut Trial) -> Rows {
    let n = t.n;
    let (case, v) = t.pick(5, 2);
    let target = if v == 0 {
        Target::Affine
    } else {
        Target::Geominimal
    };
    let (phi, psi) = match case {
        0 => (pw(-1.0)?, ex("exp(1/t)")?),
        1 => (pw(-1.0)?, ex("1/t + 1/t^2")?),
        2 => (
            pw(n as f64 + 1.0)?,
            ex(&format!("t^{} + t^{}", n + 1, n + 2))?,
        ),
        3 => (ex("log(1+t)")?, pw(1.0)?),
        _ => (pw(0.5)?, ex("t^0.5 + t^0.25")?),
    };
    let k = any_star(t)?;
    t.note("K", &k);
    let (lower, upper) = if sense_of(&phi, n)? == Sense::Inf {
        let upper = t.estimate(target, &psi, &k, vec![])?;
        let lower = t.estimate(target, &phi, &k, vec![upper.candidate().clone()])?;
        (lower, upper)
    } else {
        let lower = t.estimate(target, &phi, &k, vec![])?;
        let upper = t.estimate(target, &psi, &k, vec![lower.candidate().clone()])?;
        (lower, upper)
    };
    Ok(vec![Comparison::le(
        format!("{}:{}<={}", target_name(target), phi.label(), psi.label()),
        lower.value,
        upper.value,
        O,
    )])
}

fn affine_invariance(t: &mut Trial) -> Rows {
    let n = t.n;
    let (case, v) = t.pick(2, 6);
    let target = if case == 0 {
        Target::Affine
    } else {
        Target::Geominimal
    };
    let phi = if v < 3 { phi_one(v)? } else { psi(v)? };
    let k = symmetric_star(t)?;
    let map = gen::sl_map(&mut t.rng, n, 3.0)?;
    t.note("K", &k);
    t.note_text(format!("T={:?}", map.rows()));
    let tk = transform(&map, &k)?;
    let mut base = t.estimate(target, &phi, &k, vec![])?;
    let image = t.estimate(target, &phi, &tk, vec![transform(&map, base.candidate())?])?;
    if (image.value - base.value).abs() > 1e-2 * base.value.abs() {
        let again = t.estimate(
            target,
            &phi,
            &k,
            vec![transform(&map.inverse(), image.candidate())?],
        )?;
        if again.sense.better(again.value, base.value) {
            base = again;
        }
    }
    Ok(vec![Comparison::eq(
        format!("{}:{}", target_name(target), phi.label()),
        image.value,
        base.value,
        O,
    )])
}

fn ellipsoid_closed_form(t: &mut Trial) -> Rows {
    let n = t.n;
    let (case, v) = t.pick(2, 6);
    let target = if case == 0 {
        Target::Affine
    } else {
        Target::Geominimal
    };
    let phi = if v < 3 { phi_one(v)? } else { psi(v)? };
    let e = gen::ellipsoid(&mut t.rng, n, 4.0)?;
    t.note("E", &e);
    let vol = exact_volume(&e, t.quad)?;
    let closed = phi.eval(1.0 / vrad_from_volume(vol, n)) * n as f64 * vol;
    let r = t.estimate(target, &phi, &e, vec![])?;
    Ok(vec![Comparison::eq(
        format!("{}:{}", target_name(target), phi.label()),
        r.value,
        closed,
        O,
    )])
}

fn volume_bounds(t: &mut Trial) -> Rows {
    let n = t.n;
    let nf = n as f64;
    let (case, v) = t.pick(4, 4);
    let mut rows = Vec::new();
    match case {
        0 | 1 => {
            let target = if case == 0 {
                Target::Affine
            } else {
                Target::Geominimal
            };
            let phi = phi_class(n, v)?;
            let k = admissible_body(t, target)?;
            t.note("K", &k);
            let r = t.estimate(target, &phi, &k, vec![])?;
            let bound = phi.eval(t.search_polar_vrad(&k)?) * nf * t.search_volume(&k)?;
            rows.push(Comparison::le(
                format!("{}-polar-volume:{}", target_name(target), phi.label()),
                r.value,
                bound,
                O,
            ));
        }
        2 => {
            let target = t.target(4);
            let phi = phi_one(v)?;
            let k = any_star(t)?;
            t.note("K", &k);
            let r = t.estimate(target, &phi, &k, vec![])?;
            let bound = phi.eval(1.0 / t.search_vrad(&k)?) * nf * t.search_volume(&k)?;
            rows.push(Comparison::ge(
                format!("{}-volume:{}", target_name(target), phi.label()),
                r.value,
                bound,
                O,
            ));
        }
        _ => {
            let target = t.target(4);
            let phi = psi(v)?;
            let k = symmetric_star(t)?;
            t.note("K", &k);
            let r = t.estimate(target, &phi, &k, vec![])?;
            let vk = t.search_volume(&k)?;
            let bound = phi.eval(1.0 / t.search_vrad(&k)?) * nf * vk;
            rows.push(Comparison::le(
                format!("{}-volume:{}", target_name(target), phi.label()),
                r.value,
                bound,
                O,
            ));
            if target == Target::Affine {
                let polar_bound = phi.eval(t.search_polar_vrad(&k)?) * nf * vk;
                rows.push(Comparison::ge(
                    format!("affine-polar-volume:{}", phi.label()),
                    r.value,
                    polar_bound,
                    O,
                ));
            }
        }
    }
    Ok(rows)
}

fn affine_isoperimetric_i(t: &mut Trial) -> Rows {
    let n = t.n;
    let (case, v) = t.pick(2, 3);
    let phi = if case == 0 { phi_one(v)? } else { psi(v)? };
    let k = any_star(t)?;
    t.note("K", &k);
    let g = t.estimate(Target::Geominimal, &phi, &k, vec![])?;
    let a = t.estimate(Target::Affine, &phi, &k, vec![g.candidate().clone()])?;
    let ball_value = phi.eval(1.0 / t.search_vrad(&k)?) * n as f64 * t.search_volume(&k)?;
    let lower = case == 0;
    let label = phi.label();
    Ok(vec![
        le_or_ge(
            !lower,
            format!("geominimal-vs-affine:{label}"),
            g.value,
            a.value,
            O,
        ),
        le_or_ge(
            !lower,
            format!("affine-vs-ball:{label}"),
            a.value,
            ball_value,
            O,
        ),
    ])
}

fn affine_isoperimetric_ii(t: &mut Trial) -> Rows {
    let n = t.n;
    let (case, v) = t.pick(3, 6);
    let phi = phi_one(v)?;
    let (target, k) = match case {
        0 => (Target::Affine, symmetric_star(t)?),
        1 => (Target::Geominimal, gen::symmetric_convex(&mut t.rng, n)?),
        _ => {
            let target = if v < 3 {
                Target::Affine
            } else {
                Target::Geominimal
            };
            (target, gen::ellipsoid(&mut t.rng, n, 4.0)?)
        }
    };
    t.note("K", &k);
    let r = t.estimate(target, &phi, &k, vec![])?;
    let rp = t.search_polar_vrad(&k)?;
    let bound = phi.eval(rp) * nw(n) / rp.powi(n as i32);
    let label = format!("{}:{}", target_name(target), phi.label());
    Ok(vec![if case == 2 {
        Comparison::eq(format!("ellipsoid-{label}"), r.value, bound, O)
    } else {
        Comparison::le(label, r.value, bound, O)
    }])
}

fn santalo_products(t: &mut Trial) -> Rows {
    let n = t.n;
    let nf = n as f64;
    let (regime, v) = t.pick(5, 3);
    let p = match regime {
        0 => [-1.0, -nf / 2.0, -nf][v],
        1 => -1.0,
        2 => [-nf - 1.0, -2.0 * nf, -nf - 0.5][v],
        3 => [nf / 4.0, nf / 2.0, 0.75 * nf][v],
        _ => [nf + 1.0, 2.0 * nf, nf + 0.5][v],
    };
    let phi = pw(p)?;
    let k = if regime == 1 {
        gen::ellipsoid(&mut t.rng, n, 4.0)?
    } else {
        gen::symmetric_convex(&mut t.rng, n)?
    };
    t.note("K", &k);
    let kp = polar(&k, t.search)?;
    let pair = |body: &StarBody| -> Result<(f64, f64)> {
        let g = t.estimate(Target::Geominimal, &phi, body, vec![])?;
        let a = t.estimate(Target::Affine, &phi, body, vec![g.candidate().clone()])?;
        Ok((a.value, g.value))
    };
    let (ak, gk) = pair(&k)?;
    let (ap, gp) = pair(&kp)?;
    let (aa, gg) = (ak * ap, gk * gp);
    let ball = nw(n).powi(2);
    let (vk, vp) = (t.search_volume(&k)?, t.search_volume(&kp)?);
    let (rk, rp) = (vrad_from_volume(vk, n), vrad_from_volume(vp, n));
    let polar_bound = phi.eval(rk) * phi.eval(rp) * nf * nf * vk * vp;
    let volume_bound = phi.eval(1.0 / rk) * phi.eval(1.0 / rp) * nf * nf * vk * vp;
    let tag = format!("p={p}");
    let mut rows = vec![Comparison::monitor(
        format!("{tag}:vrad-product"),
        rk,
        rp,
        rk * rp,
    )];
    match regime {
        0..=2 => {
            rows.push(Comparison::le(
                format!("{tag}:affine<=geominimal"),
                aa,
                gg,
                O,
            ));
            rows.push(Comparison::le(
                format!("{tag}:geominimal<=polar-volume"),
                gg,
                polar_bound,
                O,
            ));
            rows.push(Comparison::ge(
                format!("{tag}:affine>=volume"),
                aa,
                volume_bound,
                O,
            ));
            rows.push(Comparison::monitor(
                format!("{tag}:c-lower"),
                aa,
                ball,
                (aa / ball).powf(1.0 / (nf - p)),
            ));
            if p >= -nf {
                rows.push(Comparison::le(
                    format!("{tag}:geominimal<=ball"),
                    gg,
                    ball,
                    O,
                ));
                rows.push(Comparison::le(format!("{tag}:affine<=ball"), aa, ball, O));
            } else {
                rows.push(Comparison::monitor(
                    format!("{tag}:c-upper"),
                    gg,
                    ball,
                    (gg / ball).powf(1.0 / (nf + p)),
                ));
            }
            if regime == 1 {
                rows.push(Comparison::eq(
                    format!("{tag}:ellipsoid-geominimal"),
                    gg,
                    ball,
                    O,
                ));
                rows.push(Comparison::eq(
                    format!("{tag}:ellipsoid-affine"),
                    aa,
                    ball,
                    O,
                ));
                rows.push(Comparison::eq(
                    format!("{tag}:ellipsoid-vrad-product"),
                    rk * rp,
                    1.0,
                    Q,
                ));
            }
        }
        3 => {
            rows.push(Comparison::le(
                format!("{tag}:geominimal<=affine"),
                gg,
                aa,
                O,
            ));
            rows.push(Comparison::le(
                format!("{tag}:affine<=volume"),
                aa,
                volume_bound,
                O,
            ));
            rows.push(Comparison::le(format!("{tag}:affine<=ball"), aa, ball, O));
            rows.push(Comparison::monitor(
                format!("{tag}:c-lower"),
                gg,
                ball,
                (gg / ball).powf(1.0 / (nf + p)),
            ));
        }
        _ => {
            rows.push(Comparison::le(
                format!("{tag}:affine<=geominimal"),
                aa,
                gg,
                O,
            ));
            rows.push(Comparison::le(
                format!("{tag}:geominimal<=polar-volume"),
                gg,
                polar_bound,
                O,
            ));
            rows.push(Comparison::le(
                format!("{tag}:geominimal<=ball"),
                gg,
                ball,
                O,
            ));
            rows.push(Comparison::le(format!("{tag}:affine<=ball"), aa, ball, O));
        }
    }
    Ok(rows)
}

#[derive(Clone, Copy, PartialEq)]
enum Order {
    /// Both values are compared with the value at `L = K`.
    Anchor,
    PhiFirst,
    PsiFirst,
}

fn cyclic_h(t: &mut Trial) -> Rows {
    use Monotonicity::{Decreasing as Dec, Increasing as Inc};
    let n = t.n;
    let nf = n as f64;
    let (case, v) = t.pick(9, 2);
    let target = if v == 0 {
        Target::Affine
    } else {
        Target::Geominimal
    };
    // (label, φ, ψ, monotonicity of H, required convexity of H, ≤?, order)
    let (label, phi, psi, mono, convex, le, order) = match case {
        0 => ("a", pw(nf + 1.0)?, pw(0.5)?, Inc, None, true, Order::Anchor),
        1 => (
            "b",
            pw(-1.0)?,
            pw(nf + 1.0)?,
            Dec,
            None,
            true,
            Order::Anchor,
        ),
        2 => (
            "c",
            pw(0.5)?,
            pw(nf + 1.0)?,
            Inc,
            None,
            false,
            Order::Anchor,
        ),
        3 => (
            "d",
            ex("log(1+t)")?,
            pw(1.0)?,
            Inc,
            Some(false),
            true,
            Order::PhiFirst,
        ),
        4 => (
            "d",
            pw(-1.0)?,
            pw(-2.0)?,
            Inc,
            Some(false),
            true,
            Order::PsiFirst,
        ),
        5 => (
            "e",
            pw(0.5)?,
            pw(-1.0)?,
            Dec,
            Some(true),
            false,
            Order::PsiFirst,
        ),
        6 => (
            "e",
            pw(-1.0)?,
            pw(0.5)?,
            Dec,
            Some(true),
            false,
            Order::PhiFirst,
        ),
        7 => (
            "f",
            ex("exp(1/t)")?,
            pw(-1.0)?,
            Inc,
            Some(true),
            false,
            Order::PhiFirst,
        ),
        _ => (
            "f",
            pw(1.0)?,
            pw(0.5)?,
            Inc,
            Some(true),
            false,
            Order::PsiFirst,
        ),
    };
    let h = compose_h(&phi, &psi)?;
    let shape_ok = match convex {
        Some(true) => h.convex,
        Some(false) => h.concave,
        None => true,
    };
    if h.monotonicity != mono || !shape_ok {
        return Err(Error::Precondition(format!(
            "H = {} ∘ {}⁻¹ does not have the shape of case ({label})",
            phi.label(),
            psi.label()
        )));
    }
    let k = if order == Order::Anchor {
        admissible_body(t, target)?
    } else {
        any_star(t)?
    };
    t.note("K", &k);
    let (ef, ep) = match order {
        Order::Anchor => (
            t.estimate(target, &phi, &k, vec![])?,
            t.estimate(target, &psi, &k, vec![])?,
        ),
        Order::PhiFirst => {
            let ef = t.estimate(target, &phi, &k, vec![])?;
            let ep = t.estimate(target, &psi, &k, vec![ef.candidate().clone()])?;
            (ef, ep)
        }
        Order::PsiFirst => {
            let ep = t.estimate(target, &psi, &k, vec![])?;
            let ef = t.estimate(target, &phi, &k, vec![ep.candidate().clone()])?;
            (ef, ep)
        }
    };
    let scale = nf * t.search_volume(&k)?;
    Ok(vec![le_or_ge(
        le,
        format!(
            "({label}):{}:{}|{}",
            target_name(target),
            phi.label(),
            psi.label()
        ),
        ef.value / scale,
        h.eval(ep.value / scale),
        O,
    )])
}

fn power_triples(n: usize) -> [(f64, f64, f64); 4] {
    let nf = n as f64;
    [
        (-1.0, -0.5, nf / 2.0),
        (-2.0, -1.0, nf / 4.0),
        (nf / 4.0, nf / 2.0, 0.75 * nf),
        (nf / 2.0, nf + 1.0, nf + 2.0),
    ]
}

/// `(weight of q, weight of s)` with `r = w_q q + w_s s`.
fn holder_weights(s: f64, r: f64, q: f64) -> (f64, f64) {
    ((r - s) / (q - s), (q - r) / (q - s))
}

/// Runs three searches so that the cyclic inequality is sound: the optimizer
/// of the exponent whose value enters unchanged seeds the other two.
fn seeded_triple<F>(n: usize, (s, r, q): (f64, f64, f64), mut run: F) -> Result<(f64, f64, f64)>
where
    F: FnMut(f64, Vec<Vec<StarBody>>) -> Result<ExtremalResult>,
{
    let nf = n as f64;
    let seed = |x: &ExtremalResult| vec![x.candidates.clone()];
    let (es, er, eq) = if r < 0.0 {
        let es = run(s, vec![])?;
        (es.value, run(r, seed(&es))?.value, run(q, seed(&es))?.value)
    } else if q < nf {
        let er = run(r, vec![])?;
        (run(s, seed(&er))?.value, er.value, run(q, seed(&er))?.value)
    } else {
        let eq = run(q, vec![])?;
        (run(s, seed(&eq))?.value, run(r, seed(&eq))?.value, eq.value)
    };
    Ok((es, er, eq))
}

fn cyclic_powers(t: &mut Trial) -> Rows {
    let n = t.n;
    let nf = n as f64;
    let (case, v) = t.pick(5, 2);
    let triple = if case == 4 {
        (-1.0, 0.5, 1.0)
    } else {
        power_triples(n)[case]
    };
    let (s, r, q) = triple;
    let (wq, ws) = holder_weights(s, r, q);
    let k = any_star(t)?;
    t.note("K", &k);
    let rho_k = radial_values(&k, t.search)?;
    let (fs, fr, fq) = (pw(s)?, pw(r)?, pw(q)?);
    let tag = format!("({s},{r},{q})");
    let mut rows = Vec::new();
    for j in 0..2 {
        let body = any_star(t)?;
        t.note(&format!("Q{j}"), &body);
        let rho_q = radial_values(&body, t.search)?;
        let val = |phi: &OrliczFunction| -> Result<f64> {
            Ok(nf * dual_mixed_kernel(t.search, phi, &rho_k, &rho_q)?)
        };
        let (vs, vr, vq) = (val(&fs)?, val(&fr)?, val(&fq)?);
        rows.push(Comparison::le(
            format!("kernel{tag}"),
            vr,
            vq.powf(wq) * vs.powf(ws),
            X,
        ));
    }
    if case == 4 {
        return Ok(rows);
    }
    let target = if v == 0 {
        Target::Affine
    } else {
        Target::Geominimal
    };
    let (es, er, eq) = seeded_triple(n, triple, |p, seeds| {
        t.estimate(target, &pw(p)?, &k, seeds.into_iter().flatten().collect())
    })?;
    rows.push(Comparison::le(
        format!("estimate{tag}:{}", target_name(target)),
        er,
        eq.powf(wq) * es.powf(ws),
        O,
    ));
    Ok(rows)
}

/// Slot functions from one class, rotated by `k`.
fn slot_phis(n: usize, inf: bool, k: usize) -> Result<Vec<OrliczFunction>> {
    (0..n)
        .map(|i| if inf { phi_one(k + i) } else { psi(k + i) })
        .collect()
}

fn multi_kernel(
    grid: &SphericalGrid,
    phis: &[OrliczFunction],
    rho_k: &[Vec<f64>],
    rho_l: &[Vec<f64>],
    slots: &[usize],
) -> Result<f64> {
    let p: Vec<&OrliczFunction> = slots.iter().map(|&i| &phis[i]).collect();
    let k: Vec<&[f64]> = slots.iter().map(|&i| rho_k[i].as_slice()).collect();
    let l: Vec<&[f64]> = slots.iter().map(|&i| rho_l[i].as_slice()).collect();
    multi_dual_mixed_kernel(grid, &p, &k, &l)
}

fn random_tuple(t: &mut Trial, label: &str) -> Result<(Vec<StarBody>, Vec<Vec<f64>>)> {
    let mut bodies = Vec::with_capacity(t.n);
    let mut radii = Vec::with_capacity(t.n);
    for i in 0..t.n {
        let b = any_star(t)?;
        t.note(&format!("{label}{i}"), &b);
        radii.push(radial_values(&b, t.search)?);
        bodies.push(b);
    }
    Ok((bodies, radii))
}

fn mixed_af(t: &mut Trial) -> Rows {
    let n = t.n;
    let (case, v) = t.pick(2, 6);
    let inf = case == 0;
    let target = if v % 2 == 0 {
        Target::Affine
    } else {
        Target::Geominimal
    };
    let phis = slot_phis(n, inf, v / 2)?;
    let (ks, rho_k) = random_tuple(t, "K")?;
    let (_, rho_l) = random_tuple(t, "L")?;
    let mut rows = Vec::new();
    let full: Vec<usize> = (0..n).collect();
    let whole = multi_kernel(t.search, &phis, &rho_k, &rho_l, &full)?;
    for m in 1..=n {
        let mut rhs = 1.0;
        for i in 0..m {
            let mut slots: Vec<usize> = (0..n - m).collect();
            slots.extend(std::iter::repeat_n(n - 1 - i, m));
            rhs *= multi_kernel(t.search, &phis, &rho_k, &rho_l, &slots)?;
        }
        rows.push(Comparison::le(
            format!("kernel-chain:m={m}"),
            whole.powi(m as i32),
            rhs,
            X,
        ));
    }
    let (joint, singles) = if inf {
        let singles = (0..n)
            .map(|i| t.estimate(target, &phis[i], &ks[i], vec![]))
            .collect::<Result<Vec<_>>>()?;
        let seeds = vec![singles.iter().map(|s| s.candidate().clone()).collect()];
        (t.estimate_multi(target, &phis, &ks, seeds)?, singles)
    } else {
        let joint = t.estimate_multi(target, &phis, &ks, vec![])?;
        let singles = (0..n)
            .map(|i| t.estimate(target, &phis[i], &ks[i], vec![joint.candidates[i].clone()]))
            .collect::<Result<Vec<_>>>()?;
        (joint, singles)
    };
    let product: f64 = singles.iter().map(|s| s.value).product();
    rows.push(Comparison::le(
        format!(
            "estimate:{}:{}",
            target_name(target),
            if inf { "phi" } else { "psi" }
        ),
        joint.value.powi(n as i32),
        product,
        O,
    ));
    Ok(rows)
}

fn mixed_isoperimetric(t: &mut Trial) -> Rows {
    let n = t.n;
    let nf = n as f64;
    let (case, v) = t.pick(2, 6);
    let target = if v % 2 == 0 {
        Target::Affine
    } else {
        Target::Geominimal
    };
    if case == 0 {
        let phis = slot_phis(n, true, v / 2)?;
        let mut ks = Vec::with_capacity(n);
        for i in 0..n {
            let b = admissible_body(t, target)?;
            t.note(&format!("K{i}"), &b);
            ks.push(b);
        }
        let joint = t.estimate_multi(target, &phis, &ks, vec![])?;
        let mut bound = 1.0;
        for (phi, k) in phis.iter().zip(&ks) {
            let rp = t.search_polar_vrad(k)?;
            bound *= phi.eval(rp) * nw(n) / rp.powi(n as i32);
        }
        return Ok(vec![Comparison::le(
            format!("phi1-polar-ball:{}", target_name(target)),
            joint.value.powi(n as i32),
            bound,
            O,
        )]);
    }
    let phis = slot_phis(n, false, v / 2)?;
    let (ks, _) = random_tuple(t, "K")?;
    let g = t.estimate_multi(Target::Geominimal, &phis, &ks, vec![])?;
    let a = t.estimate_multi(Target::Affine, &phis, &ks, vec![g.candidates.clone()])?;
    let mut bound = 1.0;
    for (phi, k) in phis.iter().zip(&ks) {
        let vk = t.search_volume(k)?;
        bound *= phi.eval(1.0 / vrad_from_volume(vk, n)) * nf * vk;
    }
    Ok(vec![
        Comparison::le("psi-geominimal<=affine", g.value, a.value, O),
        Comparison::le("psi-ball", a.value.powi(n as i32), bound, O),
    ])
}

fn cyclic_powers_multi(t: &mut Trial) -> Rows {
    let n = t.n;
    let nf = n as f64;
    let (case, v) = t.pick(4, 2);
    let triple = power_triples(n)[case];
    let (s, r, q) = triple;
    let (wq, ws) = holder_weights(s, r, q);
    let target = if v == 0 {
        Target::Affine
    } else {
        Target::Geominimal
    };
    let tag = format!("({s},{r},{q})");
    let (ks, rho_k) = random_tuple(t, "K")?;
    let (_, rho_l) = random_tuple(t, "L")?;
    let all = |p: f64| -> Result<Vec<OrliczFunction>> { (0..n).map(|_| pw(p)).collect() };
    let full: Vec<usize> = (0..n).collect();
    let kern = |p: f64| -> Result<f64> {
        Ok(nf * multi_kernel(t.search, &all(p)?, &rho_k, &rho_l, &full)?)
    };
    let (vs, vr, vq) = (kern(s)?, kern(r)?, kern(q)?);
    let mut rows = vec![Comparison::le(
        format!("kernel{tag}"),
        vr,
        vq.powf(wq) * vs.powf(ws),
        X,
    )];
    let (es, er, eq) = seeded_triple(n, triple, |p, seeds| {
        t.estimate_multi(target, &all(p)?, &ks, seeds)
    })?;
    rows.push(Comparison::le(
        format!("estimate{tag}:{}", target_name(target)),
        er,
        eq.powf(wq) * es.powf(ws),
        O,
    ));
    Ok(rows)
}

fn psi_pair(k: usize) -> Result<(OrliczFunction, OrliczFunction)> {
    Ok(match k % 3 {
        0 => (pw(0.5)?, pw(1.0)?),
        1 => (ex("log(1+t)")?, pw(0.5)?),
        _ => (pw(1.0)?, ex("log(1+t)")?),
    })
}

fn phi_one_pair(k: usize) -> Result<(OrliczFunction, OrliczFunction)> {
    Ok((phi_one(k)?, phi_one(k + 1)?))
}

fn pair_of(r: &ExtremalResult) -> (StarBody, StarBody) {
    (r.candidates[0].clone(), r.candidates[1].clone())
}

fn ith_cyclic(t: &mut Trial) -> Rows {
    let n = t.n;
    let nf = n as f64;
    let (case, v) = t.pick(3, 6);
    let (i, j, k) = [(0.0, 1.0, nf), (-1.0, 0.5, nf + 1.0), (0.5, 1.5, nf + 2.0)][case];
    let (phi1, phi2) = psi_pair(v)?;
    let target = if v < 3 {
        Target::Affine
    } else {
        Target::Geominimal
    };
    let kb = any_star(t)?;
    let lb = any_star(t)?;
    t.note("K", &kb);
    t.note("L", &lb);
    let (rho_k, rho_l) = (radial_values(&kb, t.search)?, radial_values(&lb, t.search)?);
    let tag = format!("({i},{j},{k})");
    let mut rows = Vec::new();
    for m in 0..2 {
        let q1 = any_star(t)?;
        let q2 = any_star(t)?;
        t.note(&format!("Q1_{m}"), &q1);
        t.note(&format!("Q2_{m}"), &q2);
        let (r1, r2) = (radial_values(&q1, t.search)?, radial_values(&q2, t.search)?);
        let val =
            |idx: f64| ith_dual_mixed_kernel(t.search, &phi1, &phi2, idx, &rho_k, &rho_l, &r1, &r2);
        let (vi, vj, vk) = (val(i)?, val(j)?, val(k)?);
        rows.push(Comparison::le(
            format!("kernel{tag}"),
            vj.powf(k - i),
            vi.powf(k - j) * vk.powf(j - i),
            X,
        ));
    }
    let ej = t.estimate_ith(target, &phi1, &phi2, j, &kb, &lb, vec![])?;
    let ei = t.estimate_ith(target, &phi1, &phi2, i, &kb, &lb, vec![pair_of(&ej)])?;
    let ek = t.estimate_ith(target, &phi1, &phi2, k, &kb, &lb, vec![pair_of(&ej)])?;
    rows.push(Comparison::le(
        format!("estimate{tag}:{}", target_name(target)),
        ej.value.powf(k - i),
        ei.value.powf(k - j) * ek.value.powf(j - i),
        O,
    ));
    Ok(rows)
}

fn ith_bounds(t: &mut Trial) -> Rows {
    let n = t.n;
    let nf = n as f64;
    let (part, v) = t.pick(3, 12);
    let ball_value =
        |phi: &OrliczFunction, vol: f64| phi.eval(1.0 / vrad_from_volume(vol, n)) * nf * vol;
    match part {
        0 => {
            let index = [0.0, 0.5, 1.0, nf][v % 4];
            let target = if v / 4 % 2 == 0 {
                Target::Affine
            } else {
                Target::Geominimal
            };
            let (phi1, phi2) = phi_one_pair(v / 8 + v % 3)?;
            let kb = admissible_body(t, target)?;
            let lb = admissible_body(t, target)?;
            t.note("K", &kb);
            t.note("L", &lb);
            let g = t.estimate_ith(target, &phi1, &phi2, index, &kb, &lb, vec![])?;
            let polar_ball =
                |phi: &OrliczFunction, rp: f64| phi.eval(rp) * nw(n) / rp.powi(n as i32);
            let bound = polar_ball(&phi1, t.search_polar_vrad(&kb)?).powf(nf - index)
                * polar_ball(&phi2, t.search_polar_vrad(&lb)?).powf(index);
            let mut rows = vec![Comparison::le(
                format!("i={index}:phi1-polar-ball:{}", target_name(target)),
                g.value.powi(n as i32),
                bound,
                O,
            )];
            if target == Target::Geominimal {
                let a = t.estimate_ith(
                    Target::Affine,
                    &phi1,
                    &phi2,
                    index,
                    &kb,
                    &lb,
                    vec![pair_of(&g)],
                )?;
                rows.push(Comparison::le(
                    format!("i={index}:affine<=geominimal"),
                    a.value,
                    g.value,
                    O,
                ));
            }
            Ok(rows)
        }
        1 => {
            let index = [0.0, 0.5, 1.0, nf][v % 4];
            let (phi1, phi2) = psi_pair(v)?;
            let kb = any_star(t)?;
            let lb = any_star(t)?;
            t.note("K", &kb);
            t.note("L", &lb);
            let g = t.estimate_ith(Target::Geominimal, &phi1, &phi2, index, &kb, &lb, vec![])?;
            let a = t.estimate_ith(
                Target::Affine,
                &phi1,
                &phi2,
                index,
                &kb,
                &lb,
                vec![pair_of(&g)],
            )?;
            let bound = ball_value(&phi1, t.search_volume(&kb)?).powf(nf - index)
                * ball_value(&phi2, t.search_volume(&lb)?).powf(index);
            Ok(vec![
                Comparison::le(format!("i={index}:geominimal<=affine"), g.value, a.value, O),
                Comparison::le(
                    format!("i={index}:psi-ball"),
                    a.value.powi(n as i32),
                    bound,
                    O,
                ),
            ])
        }
        _ => {
            let index = [nf + 0.5, nf + 1.0, 2.0 * nf][v % 3];
            let (phi1, phi2) = psi_pair(v / 3)?;
            let kb = any_star(t)?;
            let e = gen::ellipsoid(&mut t.rng, n, 3.0)?;
            t.note("K", &kb);
            t.note("E", &e);
            let start = (StarBody::unit_ball(n), e.clone());
            let g = t.estimate_ith(
                Target::Geominimal,
                &phi1,
                &phi2,
                index,
                &kb,
                &e,
                vec![start],
            )?;
            let a = t.estimate_ith(
                Target::Affine,
                &phi1,
                &phi2,
                index,
                &kb,
                &e,
                vec![pair_of(&g)],
            )?;
            let bound = ball_value(&phi1, t.search_volume(&kb)?).powf(nf - index)
                * ball_value(&phi2, t.search_volume(&e)?).powf(index);
            Ok(vec![
                Comparison::ge(format!("i={index}:affine>=geominimal"), a.value, g.value, O),
                Comparison::ge(
                    format!("i={index}:ellipsoid-ball"),
                    g.value.powi(n as i32),
                    bound,
                    O,
                ),
            ])
        }
    }
}
