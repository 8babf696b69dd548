//! Quadrature grids on the unit sphere `S^{n-1}`.
//!
//! Three schemes are provided:
//!
//! * `UniformAngle` (n = 2): equispaced angles `2πk/N` with equal weights. The
//!   trapezoid rule on the circle is spectrally accurate for smooth periodic
//!   integrands.
//! * `Fibonacci` (n = 3): the golden-angle spiral lattice with equal weights
//!   `4π/N`.
//! * `MonteCarlo` (n ≥ 2): normalized Gaussian samples from a seeded ChaCha
//!   stream, weights rescaled so they sum to `σ(S^{n-1}) = n·ω_n`.
//!
//! Grids are immutable and cheap to clone (shared storage).

use std::f64::consts::PI;
use std::fmt;
use std::sync::Arc;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, StandardNormal};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Smallest accepted resolution.
pub const MIN_RESOLUTION: usize = 4;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Scheme {
    UniformAngle,
    Fibonacci,
    MonteCarlo,
}

impl Scheme {
    /// Default scheme for a dimension: uniform angles on the circle, the
    /// Fibonacci lattice on `S^2`, Monte Carlo above.
    pub fn default_for(dimension: usize) -> Scheme {
        match dimension {
            2 => Scheme::UniformAngle,
            3 => Scheme::Fibonacci,
            _ => Scheme::MonteCarlo,
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            Scheme::UniformAngle => "uniform-angle",
            Scheme::Fibonacci => "fibonacci",
            Scheme::MonteCarlo => "monte-carlo",
        }
    }
}

impl fmt::Display for Scheme {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

/// `Γ(k/2)` for a positive integer `k`, by the half-integer recurrence.
pub fn gamma_half(k: usize) -> f64 {
    assert!(k > 0, "gamma_half(0) is a pole");
    let (mut value, mut arg) = if k % 2 == 0 {
        (1.0, 1.0)
    } else {
        (PI.sqrt(), 0.5)
    };
    let target = k as f64 / 2.0;
    while arg < target - 0.25 {
        value *= arg;
        arg += 1.0;
    }
    value
}

/// Volume `ω_n = π^{n/2} / Γ(n/2 + 1)` of the unit ball in `R^n`.
pub fn unit_ball_volume(dimension: usize) -> f64 {
    PI.powf(dimension as f64 / 2.0) / gamma_half(dimension + 2)
}

/// Total spherical measure `σ(S^{n-1}) = n·ω_n`.
pub fn sphere_measure(dimension: usize) -> f64 {
    dimension as f64 * unit_ball_volume(dimension)
}

struct GridData {
    dimension: usize,
    scheme: Scheme,
    resolution: usize,
    seed: Option<u64>,
    nodes: Vec<f64>,
    weights: Vec<f64>,
    /// For n = 2: node indices sorted by polar angle, and the angles themselves.
    angular_order: Option<Vec<usize>>,
    angles: Option<Vec<f64>>,
}

/// Quadrature nodes `u_i ∈ S^{n-1}` with positive weights `w_i`.
#[derive(Clone)]
pub struct SphericalGrid(Arc<GridData>);

impl fmt::Debug for SphericalGrid {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("SphericalGrid")
            .field("dimension", &self.0.dimension)
            .field("scheme", &self.0.scheme)
            .field("resolution", &self.0.resolution)
            .field("seed", &self.0.seed)
            .finish()
    }
}

impl SphericalGrid {
    /// Builds a grid. `seed` is required for Monte Carlo and rejected otherwise.
    pub fn build(
        dimension: usize,
        resolution: usize,
        scheme: Scheme,
        seed: Option<u64>,
    ) -> Result<Self> {
        if dimension < 2 {
            return Err(Error::Configuration(format!(
                "sphere grids need dimension >= 2, got {dimension}"
            )));
        }
        if resolution < MIN_RESOLUTION {
            return Err(Error::Configuration(format!(
                "resolution {resolution} below minimum {MIN_RESOLUTION}"
            )));
        }
        match (scheme, seed) {
            (Scheme::MonteCarlo, None) => {
                return Err(Error::Configuration(
                    "monte-carlo grids require a seed".into(),
                ))
            }
            (Scheme::UniformAngle | Scheme::Fibonacci, Some(_)) => {
                return Err(Error::Configuration(format!(
                    "{scheme} grids are deterministic and take no seed"
                )))
            }
            _ => {}
        }
        let total = sphere_measure(dimension);
        let (nodes, weights) = match (scheme, dimension) {
            (Scheme::UniformAngle, 2) => uniform_angle(resolution),
            (Scheme::Fibonacci, 3) => fibonacci(resolution),
            (Scheme::MonteCarlo, _) => monte_carlo(dimension, resolution, seed.unwrap_or(0)),
            _ => {
                return Err(Error::Configuration(format!(
                    "scheme {scheme} is not available in dimension {dimension}"
                )))
            }
        };
        debug_assert!((weights.iter().sum::<f64>() - total).abs() <= 1e-9 * total);

        let (angular_order, angles) = if dimension == 2 {
            let angles: Vec<f64> = nodes
                .chunks_exact(2)
                .map(|u| u[1].atan2(u[0]).rem_euclid(2.0 * PI))
                .collect();
            let mut order: Vec<usize> = (0..angles.len()).collect();
            order.sort_by(|&a, &b| angles[a].total_cmp(&angles[b]));
            (Some(order), Some(angles))
        } else {
            (None, None)
        };

        Ok(SphericalGrid(Arc::new(GridData {
            dimension,
            scheme,
            resolution,
            seed,
            nodes,
            weights,
            angular_order,
            angles,
        })))
    }

    /// Builds a grid with the dimension's default scheme; `seed` is only
    /// used (and then required) for Monte Carlo.
    pub fn with_default_scheme(dimension: usize, resolution: usize, seed: u64) -> Result<Self> {
        let scheme = Scheme::default_for(dimension);
        let seed = (scheme == Scheme::MonteCarlo).then_some(seed);
        Self::build(dimension, resolution, scheme, seed)
    }

    pub fn dimension(&self) -> usize {
        self.0.dimension
    }

    pub fn scheme(&self) -> Scheme {
        self.0.scheme
    }

    pub fn resolution(&self) -> usize {
        self.0.resolution
    }

    pub fn seed(&self) -> Option<u64> {
        self.0.seed
    }

    pub fn len(&self) -> usize {
        self.0.weights.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.weights.is_empty()
    }

    pub fn node(&self, i: usize) -> &[f64] {
        let n = self.0.dimension;
        &self.0.nodes[i * n..(i + 1) * n]
    }

    pub fn nodes(&self) -> impl ExactSizeIterator<Item = &[f64]> + '_ {
        self.0.nodes.chunks_exact(self.0.dimension)
    }

    pub fn weights(&self) -> &[f64] {
        &self.0.weights
    }

    pub fn weight_sum(&self) -> f64 {
        pairwise_sum(&self.0.weights)
    }

    /// Node indices sorted by polar angle (n = 2 only).
    pub fn angular_order(&self) -> Option<&[usize]> {
        self.0.angular_order.as_deref()
    }

    /// Polar angle of each node in `[0, 2π)` (n = 2 only).
    pub fn angles(&self) -> Option<&[f64]> {
        self.0.angles.as_deref()
    }

    /// True when both grids have identical nodes (same construction inputs).
    pub fn same_as(&self, other: &SphericalGrid) -> bool {
        Arc::ptr_eq(&self.0, &other.0)
            || (self.0.dimension == other.0.dimension
                && self.0.scheme == other.0.scheme
                && self.0.resolution == other.0.resolution
                && self.0.seed == other.0.seed)
    }

    /// The same scheme at half resolution. For uniform angles this is the
    /// every-other-node subgrid.
    pub fn coarsened(&self) -> Result<SphericalGrid> {
        let half = (self.0.resolution / 2).max(MIN_RESOLUTION);
        SphericalGrid::build(self.0.dimension, half, self.0.scheme, self.0.seed)
    }

    /// Short human-readable descriptor used in digests and reports.
    pub fn descriptor(&self) -> String {
        match self.0.seed {
            Some(seed) => format!(
                "{}:n{}:N{}:seed{}",
                self.0.scheme, self.0.dimension, self.0.resolution, seed
            ),
            None => format!(
                "{}:n{}:N{}",
                self.0.scheme, self.0.dimension, self.0.resolution
            ),
        }
    }

    /// Samples `f` at every node.
    pub fn sample(&self, f: impl Fn(&[f64]) -> f64) -> GridFunction {
        GridFunction {
            grid: self.clone(),
            values: self.nodes().map(f).collect(),
        }
    }

    /// `Σ w_i f_i` with a fixed pairwise summation order.
    pub fn integrate_values(&self, values: &[f64]) -> Result<f64> {
        if values.len() != self.len() {
            return Err(Error::Precondition(format!(
                "{} values for a grid of {} nodes",
                values.len(),
                self.len()
            )));
        }
        if let Some(i) = values.iter().position(|v| !v.is_finite()) {
            return Err(Error::NumericalDomain {
                node: i,
                detail: format!("integrand value {}", values[i]),
            });
        }
        Ok(self.weighted_sum(|i| values[i]))
    }

    /// `Σ w_i g(i)` in deterministic pairwise order, no finiteness check.
    pub fn weighted_sum(&self, g: impl Fn(usize) -> f64) -> f64 {
        let w = &self.0.weights;
        pairwise_by(0, w.len(), &|i| w[i] * g(i))
    }
}

/// Values of a function at the nodes of a grid.
#[derive(Debug, Clone)]
pub struct GridFunction {
    grid: SphericalGrid,
    values: Vec<f64>,
}

impl GridFunction {
    pub fn new(grid: &SphericalGrid, values: Vec<f64>) -> Result<Self> {
        if values.len() != grid.len() {
            return Err(Error::Precondition(format!(
                "{} values for a grid of {} nodes",
                values.len(),
                grid.len()
            )));
        }
        Ok(GridFunction {
            grid: grid.clone(),
            values,
        })
    }

    pub fn grid(&self) -> &SphericalGrid {
        &self.grid
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn into_values(self) -> Vec<f64> {
        self.values
    }

    pub fn map(&self, f: impl Fn(f64) -> f64) -> GridFunction {
        GridFunction {
            grid: self.grid.clone(),
            values: self.values.iter().map(|&v| f(v)).collect(),
        }
    }
}

/// `∫_{S^{n-1}} f dσ ≈ Σ w_i f(u_i)`.
pub fn integrate(f: &GridFunction) -> Result<f64> {
    f.grid.integrate_values(&f.values)
}

/// Pairwise (cascade) summation; the order depends only on the length.
pub fn pairwise_sum(values: &[f64]) -> f64 {
    pairwise_by(0, values.len(), &|i| values[i])
}

fn pairwise_by(lo: usize, hi: usize, term: &dyn Fn(usize) -> f64) -> f64 {
    const BLOCK: usize = 32;
    if hi - lo <= BLOCK {
        let mut s = 0.0;
        for i in lo..hi {
            s += term(i);
        }
        s
    } else {
        let mid = lo + (hi - lo) / 2;
        pairwise_by(lo, mid, term) + pairwise_by(mid, hi, term)
    }
}

fn uniform_angle(resolution: usize) -> (Vec<f64>, Vec<f64>) {
    let mut nodes = Vec::with_capacity(2 * resolution);
    for k in 0..resolution {
        let theta = 2.0 * PI * k as f64 / resolution as f64;
        nodes.push(theta.cos());
        nodes.push(theta.sin());
    }
    let w = 2.0 * PI / resolution as f64;
    (nodes, vec![w; resolution])
}

fn fibonacci(resolution: usize) -> (Vec<f64>, Vec<f64>) {
    let golden_angle = PI * (3.0 - 5f64.sqrt());
    let mut nodes = Vec::with_capacity(3 * resolution);
    for i in 0..resolution {
        let z = 1.0 - (2.0 * i as f64 + 1.0) / resolution as f64;
        let r = (1.0 - z * z).max(0.0).sqrt();
        let phi = golden_angle * i as f64;
        nodes.push(r * phi.cos());
        nodes.push(r * phi.sin());
        nodes.push(z);
    }
    let w = 4.0 * PI / resolution as f64;
    (nodes, vec![w; resolution])
}

fn monte_carlo(dimension: usize, resolution: usize, seed: u64) -> (Vec<f64>, Vec<f64>) {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut nodes = Vec::with_capacity(dimension * resolution);
    let mut x = vec![0.0; dimension];
    while nodes.len() < dimension * resolution {
        for xi in x.iter_mut() {
            *xi = StandardNormal.sample(&mut rng);
        }
        let norm = x.iter().map(|v| v * v).sum::<f64>().sqrt();
        if norm < 1e-8 {
            continue;
        }
        nodes.extend(x.iter().map(|v| v / norm));
    }
    let w = sphere_measure(dimension) / resolution as f64;
    (nodes, vec![w; resolution])
}
