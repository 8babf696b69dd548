//! Support functions of radial point clouds `{ρ_i u_i}` sampled on a grid.
//!
//! In the plane the cloud is already sorted by angle (grid order), so the hull
//! comes from a single Graham pass and every direction's maximiser from a
//! rotating pointer: linear time overall. Higher dimensions fall back to the
//! quadratic scan.

use crate::sphgrid::SphericalGrid;

use super::polytope::dot;

/// `h(u_k) = max_i ρ_i ⟨u_i, u_k⟩` at every grid node.
pub fn support_on_grid(grid: &SphericalGrid, radii: &[f64]) -> Vec<f64> {
    debug_assert_eq!(radii.len(), grid.len());
    match (grid.dimension(), grid.angular_order()) {
        (2, Some(order)) => support_planar(grid, order, radii),
        _ => support_brute(grid, radii),
    }
}

/// Support of the cloud `{ρ_i u_i}` in arbitrary (unit) directions.
pub fn support_in_directions(grid: &SphericalGrid, radii: &[f64], dirs: &[Vec<f64>]) -> Vec<f64> {
    dirs.iter()
        .map(|d| {
            (0..grid.len())
                .map(|i| radii[i] * dot(grid.node(i), d))
                .fold(f64::NEG_INFINITY, f64::max)
        })
        .collect()
}

/// Radial values of the convex hull of the cloud: `1 / h_{cloud°}`.
///
/// Uses the sampled polar `1/h` twice; exact at the nodes for the polygonal
/// hull circumscribed by the grid normals, never below the input radii.
pub fn hull_radii(grid: &SphericalGrid, radii: &[f64]) -> Vec<f64> {
    let h = support_on_grid(grid, radii);
    let inv: Vec<f64> = h.iter().map(|v| 1.0 / v).collect();
    support_on_grid(grid, &inv)
        .iter()
        .map(|v| 1.0 / v)
        .collect()
}

fn support_brute(grid: &SphericalGrid, radii: &[f64]) -> Vec<f64> {
    let n = grid.len();
    (0..n)
        .map(|k| {
            let u = grid.node(k);
            let mut best = f64::NEG_INFINITY;
            for i in 0..n {
                let v = radii[i] * dot(grid.node(i), u);
                if v > best {
                    best = v;
                }
            }
            best
        })
        .collect()
}

fn cross(o: [f64; 2], a: [f64; 2], b: [f64; 2]) -> f64 {
    (a[0] - o[0]) * (b[1] - o[1]) - (a[1] - o[1]) * (b[0] - o[0])
}

fn support_planar(grid: &SphericalGrid, order: &[usize], radii: &[f64]) -> Vec<f64> {
    let n = order.len();
    let pts: Vec<[f64; 2]> = order
        .iter()
        .map(|&i| {
            let u = grid.node(i);
            [radii[i] * u[0], radii[i] * u[1]]
        })
        .collect();

    // Graham scan from the farthest point, which is always a hull vertex.
    let start = (0..n)
        .max_by(|&a, &b| {
            let ra = pts[a][0].hypot(pts[a][1]);
            let rb = pts[b][0].hypot(pts[b][1]);
            ra.total_cmp(&rb)
        })
        .unwrap_or(0);
    let mut hull: Vec<[f64; 2]> = Vec::with_capacity(n);
    for j in 0..=n {
        let q = pts[(start + j) % n];
        while hull.len() >= 2 && cross(hull[hull.len() - 2], hull[hull.len() - 1], q) <= 0.0 {
            hull.pop();
        }
        hull.push(q);
    }
    hull.pop();
    let m = hull.len();

    let mut out = vec![0.0; n];
    if m == 0 {
        return out;
    }
    let d0 = grid.node(order[0]);
    let mut j = (0..m)
        .max_by(|&a, &b| {
            (hull[a][0] * d0[0] + hull[a][1] * d0[1])
                .total_cmp(&(hull[b][0] * d0[0] + hull[b][1] * d0[1]))
        })
        .unwrap_or(0);
    for &k in order {
        let d = grid.node(k);
        let f = |p: [f64; 2]| p[0] * d[0] + p[1] * d[1];
        let mut steps = 0;
        while steps < m && f(hull[(j + 1) % m]) > f(hull[j]) {
            j = (j + 1) % m;
            steps += 1;
        }
        out[k] = f(hull[j]);
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::sphgrid::Scheme;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn planar_matches_brute_force() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        for &res in &[4usize, 8, 37, 256] {
            let g = SphericalGrid::build(2, res, Scheme::UniformAngle, None).unwrap();
            for _ in 0..20 {
                let r: Vec<f64> = (0..res).map(|_| rng.random_range(0.2..2.0)).collect();
                let fast = support_on_grid(&g, &r);
                let slow = support_brute(&g, &r);
                for (a, b) in fast.iter().zip(&slow) {
                    assert!((a - b).abs() < 1e-12, "{a} vs {b} at res {res}");
                }
            }
        }
    }

    #[test]
    fn planar_monte_carlo_order() {
        let g = SphericalGrid::build(2, 300, Scheme::MonteCarlo, Some(9)).unwrap();
        let r: Vec<f64> = (0..300)
            .map(|i| 1.0 + 0.5 * ((i * 7919) % 13) as f64 / 13.0)
            .collect();
        let fast = support_on_grid(&g, &r);
        let slow = support_brute(&g, &r);
        for (a, b) in fast.iter().zip(&slow) {
            assert!((a - b).abs() < 1e-12);
        }
    }

    #[test]
    fn hull_dominates_and_is_idempotent() {
        let g = SphericalGrid::build(2, 128, Scheme::UniformAngle, None).unwrap();
        let r: Vec<f64> = (0..128)
            .map(|i| 1.0 + 0.4 * (5.0 * 2.0 * std::f64::consts::PI * i as f64 / 128.0).cos())
            .collect();
        let h = hull_radii(&g, &r);
        assert!(h.iter().zip(&r).all(|(a, b)| *a >= b - 1e-12));
        let hh = hull_radii(&g, &h);
        assert!(h.iter().zip(&hh).all(|(a, b)| (a - b).abs() < 1e-10));
    }
}
