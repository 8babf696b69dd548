use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;

use super::polytope::dot;

const TERMS: usize = 6;

/// Smooth bounded perturbation `g(u) = Σ c_k T_{m_k}(⟨d_k, u⟩)` with `Σ|c_k| = 1`,
/// so `sup |g| ≤ 1`. Even degrees only when symmetric.
#[derive(Debug, Clone, PartialEq)]
pub struct Perturbation {
    pub seed: u64,
    pub symmetric: bool,
    directions: Vec<Vec<f64>>,
    degrees: Vec<u32>,
    coefficients: Vec<f64>,
}

impl Perturbation {
    pub fn new(dimension: usize, seed: u64, symmetric: bool) -> Self {
        let mut rng = ChaCha8Rng::seed_from_u64(seed ^ 0x5eed_57a7);
        let mut directions = Vec::with_capacity(TERMS);
        let mut degrees = Vec::with_capacity(TERMS);
        let mut coefficients = Vec::with_capacity(TERMS);
        for _ in 0..TERMS {
            let mut d: Vec<f64> = (0..dimension).map(|_| rng.sample(StandardNormal)).collect();
            let norm = dot(&d, &d).sqrt().max(1e-300);
            d.iter_mut().for_each(|x| *x /= norm);
            directions.push(d);
            let m = if symmetric {
                2 * rng.random_range(1..=2u32)
            } else {
                rng.random_range(1..=4u32)
            };
            degrees.push(m);
            coefficients.push(rng.random_range(-1.0..1.0f64));
        }
        let total: f64 = coefficients.iter().map(|c| c.abs()).sum();
        coefficients
            .iter_mut()
            .for_each(|c| *c /= total.max(1e-300));
        Perturbation {
            seed,
            symmetric,
            directions,
            degrees,
            coefficients,
        }
    }

    pub fn eval(&self, u: &[f64]) -> f64 {
        self.directions
            .iter()
            .zip(&self.degrees)
            .zip(&self.coefficients)
            .map(|((d, &m), c)| c * chebyshev(m, dot(d, u).clamp(-1.0, 1.0)))
            .sum()
    }
}

fn chebyshev(m: u32, x: f64) -> f64 {
    let (mut a, mut b) = (1.0, x);
    if m == 0 {
        return a;
    }
    for _ in 1..m {
        let c = 2.0 * x * b - a;
        a = b;
        b = c;
    }
    b
}
