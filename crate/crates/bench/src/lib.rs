//! Fixed inputs shared by the benchmarks.

use orlicz_core::bodies::make_random_star;
use orlicz_core::{Scheme, SphericalGrid, StarBody};

/// The default grid for `n` at `resolution` nodes.
pub fn grid(n: usize, resolution: usize) -> SphericalGrid {
    SphericalGrid::build(n, resolution, Scheme::default_for(n), Some(0)).expect("grid")
}

/// A rough star body, an ellipsoid and a cube, in that order.
pub fn bodies(n: usize) -> Vec<StarBody> {
    let axes: Vec<f64> = (0..n).map(|i| 0.5 + i as f64).collect();
    vec![
        make_random_star(n, 7, 0.3, true).expect("star"),
        StarBody::ellipsoid_axes(&axes).expect("ellipsoid"),
        StarBody::cube(n, 1.0).expect("cube"),
    ]
}
