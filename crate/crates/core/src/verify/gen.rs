//! Seeded input generators for the checks.

use std::f64::consts::PI;

use nalgebra::DMatrix;
use rand::{Rng, RngCore};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;

use crate::bodies::{make_random_star, LinearMap, Polytope, StarBody};
use crate::error::Result;

/// Random star body with roughness in `[0.05, 0.4]`, scaled by a factor in `[0.6, 1.6]`.
pub fn star(rng: &mut ChaCha8Rng, n: usize, symmetric: bool) -> Result<StarBody> {
    let seed = rng.next_u64();
    let roughness = rng.random_range(0.05..=0.4);
    let scale = rng.random_range(0.6..=1.6);
    make_random_star(n, seed, roughness, symmetric)?.scaled(scale)
}

/// Polygon with `sides` jittered normals and offsets in `[0.5, 1.5]`.
pub fn polygon(rng: &mut ChaCha8Rng) -> Result<StarBody> {
    let sides = rng.random_range(3..=8usize);
    let phase = rng.random_range(0.0..2.0 * PI);
    let step = 2.0 * PI / sides as f64;
    let halfspaces: Vec<(Vec<f64>, f64)> = (0..sides)
        .map(|j| {
            let a = phase + step * (j as f64 + rng.random_range(-0.2..=0.2));
            (vec![a.cos(), a.sin()], rng.random_range(0.5..=1.5))
        })
        .collect();
    Ok(StarBody::polytope(Polytope::from_halfspaces(
        2,
        &halfspaces,
    )?))
}

/// Origin-symmetric convex body: a polygon with 2 to 5 facet pairs for
/// `n = 2`, a linear image of the cube otherwise.
pub fn symmetric_convex(rng: &mut ChaCha8Rng, n: usize) -> Result<StarBody> {
    if n != 2 {
        let scale = rng.random_range(0.7..=1.3);
        let t = linear_map(rng, n, 2.0, scale)?;
        return crate::bodies::transform(&t, &StarBody::cube(n, 1.0)?);
    }
    let pairs = rng.random_range(2..=5usize);
    let phase = rng.random_range(0.0..PI);
    let step = PI / pairs as f64;
    let mut halfspaces = Vec::with_capacity(2 * pairs);
    for j in 0..pairs {
        let a = phase + step * (j as f64 + rng.random_range(-0.2..=0.2));
        let b = rng.random_range(0.6..=1.4);
        halfspaces.push((vec![a.cos(), a.sin()], b));
        halfspaces.push((vec![-a.cos(), -a.sin()], b));
    }
    Ok(StarBody::polytope(Polytope::from_halfspaces(
        2,
        &halfspaces,
    )?))
}

/// Centred ellipsoid with axis ratio at most `max_ratio`.
pub fn ellipsoid(rng: &mut ChaCha8Rng, n: usize, max_ratio: f64) -> Result<StarBody> {
    let scale = rng.random_range(0.6..=1.5);
    StarBody::ellipsoid(linear_map(rng, n, max_ratio, scale)?)
}

/// Volume-preserving map with singular value ratio at most `max_ratio`.
pub fn sl_map(rng: &mut ChaCha8Rng, n: usize, max_ratio: f64) -> Result<LinearMap> {
    linear_map(rng, n, max_ratio, 1.0)
}

/// `scale · Q₁ D Q₂` with `det D = 1` and `max D / min D ≤ max_ratio`.
fn linear_map(rng: &mut ChaCha8Rng, n: usize, max_ratio: f64, scale: f64) -> Result<LinearMap> {
    let ratio: f64 = rng.random_range(1.0..=max_ratio);
    let mut logs: Vec<f64> = (0..n).map(|_| rng.random_range(0.0..=1.0)).collect();
    logs[0] = 0.0;
    logs[n - 1] = 1.0;
    let mean = logs.iter().sum::<f64>() / n as f64;
    let d = DMatrix::from_diagonal(&nalgebra::DVector::from_iterator(
        n,
        logs.iter().map(|l| scale * ((l - mean) * ratio.ln()).exp()),
    ));
    let m = orthogonal(rng, n) * d * orthogonal(rng, n);
    LinearMap::new(m)
}

fn orthogonal(rng: &mut ChaCha8Rng, n: usize) -> DMatrix<f64> {
    if n == 2 {
        let a: f64 = rng.random_range(0.0..2.0 * PI);
        return DMatrix::from_row_slice(2, 2, &[a.cos(), -a.sin(), a.sin(), a.cos()]);
    }
    let g = DMatrix::from_fn(n, n, |_, _| rng.sample::<f64, _>(StandardNormal));
    g.qr().q()
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;

    #[test]
    fn maps_are_volume_preserving_with_bounded_ratio() {
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        for n in [2, 3] {
            for _ in 0..20 {
                let t = sl_map(&mut rng, n, 3.0).unwrap();
                assert!((t.det_abs() - 1.0).abs() < 1e-10);
                let sv = t.matrix().clone().singular_values();
                let ratio = sv.max() / sv.min();
                assert!(ratio <= 3.0 + 1e-9, "{ratio}");
            }
        }
    }

    #[test]
    fn generated_bodies_contain_the_origin() {
        let mut rng = ChaCha8Rng::seed_from_u64(9);
        for _ in 0..50 {
            let p = polygon(&mut rng).unwrap();
            assert!(p.exact_volume().unwrap() > 0.0);
            let s = symmetric_convex(&mut rng, 2).unwrap();
            assert!(s.symmetry().is_yes());
        }
    }
}
