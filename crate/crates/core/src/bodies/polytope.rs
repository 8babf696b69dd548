//! H-represented polytopes `{x : ⟨a_j, x⟩ ≤ b_j}` with the origin in the interior.

use nalgebra::{DMatrix, DVector};

use super::linear::LinearMap;
use crate::error::{Error, Result};

const FEAS_EPS: f64 = 1e-9;

#[derive(Debug, Clone, PartialEq)]
pub struct Facet {
    /// Unit outer normal.
    pub normal: Vec<f64>,
    /// Support value `h_P(normal)`, strictly positive.
    pub offset: f64,
}

/// Polytope with enumerated vertices; facet areas are available for n ≤ 3.
#[derive(Debug, Clone)]
pub struct Polytope {
    dimension: usize,
    facets: Vec<Facet>,
    vertices: Vec<Vec<f64>>,
    facet_areas: Option<Vec<f64>>,
}

impl Polytope {
    /// Builds from raw `(a_j, b_j)` pairs; normals are rescaled to unit length.
    pub fn from_halfspaces(dimension: usize, halfspaces: &[(Vec<f64>, f64)]) -> Result<Self> {
        if dimension < 2 {
            return Err(Error::InvalidBody("polytope dimension must be >= 2".into()));
        }
        let mut facets = Vec::with_capacity(halfspaces.len());
        for (j, (a, b)) in halfspaces.iter().enumerate() {
            if a.len() != dimension {
                return Err(Error::InvalidBody(format!(
                    "facet {j} normal has {} entries, expected {dimension}",
                    a.len()
                )));
            }
            let norm = a.iter().map(|v| v * v).sum::<f64>().sqrt();
            if !(norm > 0.0 && norm.is_finite() && b.is_finite()) {
                return Err(Error::InvalidBody(format!("facet {j} is degenerate")));
            }
            let offset = b / norm;
            if offset <= 0.0 {
                return Err(Error::InvalidBody(format!(
                    "facet {j} does not contain the origin in its interior (offset {offset})"
                )));
            }
            facets.push(Facet {
                normal: a.iter().map(|v| v / norm).collect(),
                offset,
            });
        }
        if facets.len() <= dimension {
            return Err(Error::InvalidBody(format!(
                "{} facets cannot bound a polytope in dimension {dimension}",
                facets.len()
            )));
        }

        let scale = facets.iter().fold(0.0f64, |m, f| m.max(f.offset));
        let bound = 1e6 * scale;
        let mut all = facets.clone();
        for i in 0..dimension {
            for sign in [1.0, -1.0] {
                let mut normal = vec![0.0; dimension];
                normal[i] = sign;
                all.push(Facet {
                    normal,
                    offset: bound,
                });
            }
        }
        let vertices = enumerate_vertices(dimension, &all, scale);
        if vertices.is_empty()
            || vertices
                .iter()
                .any(|v| v.iter().any(|x| x.abs() >= 0.5 * bound))
        {
            return Err(Error::InvalidBody("polytope is unbounded".into()));
        }

        let facet_areas = match dimension {
            2 => Some(facet_lengths_2d(&facets, &vertices, scale)),
            3 => Some(facet_areas_3d(&facets, &vertices, scale)),
            _ => None,
        };
        Ok(Polytope {
            dimension,
            facets,
            vertices,
            facet_areas,
        })
    }

    /// `[-h, h]^n`.
    pub fn cube(dimension: usize, half_width: f64) -> Result<Self> {
        let mut hs = Vec::new();
        for i in 0..dimension {
            for sign in [1.0, -1.0] {
                let mut a = vec![0.0; dimension];
                a[i] = sign;
                hs.push((a, half_width));
            }
        }
        Self::from_halfspaces(dimension, &hs)
    }

    /// `{x : Σ|x_i| ≤ r}`.
    pub fn cross_polytope(dimension: usize, radius: f64) -> Result<Self> {
        let mut hs = Vec::new();
        for mask in 0..(1usize << dimension) {
            let a: Vec<f64> = (0..dimension)
                .map(|i| if mask >> i & 1 == 1 { -1.0 } else { 1.0 })
                .collect();
            hs.push((a, radius));
        }
        Self::from_halfspaces(dimension, &hs)
    }

    /// Regular planar polygon with `sides` edges at inradius `inradius`,
    /// the first facet normal at angle `phase`.
    pub fn regular_polygon(sides: usize, inradius: f64, phase: f64) -> Result<Self> {
        let hs: Vec<_> = (0..sides)
            .map(|k| {
                let t = phase + 2.0 * std::f64::consts::PI * k as f64 / sides as f64;
                (vec![t.cos(), t.sin()], inradius)
            })
            .collect();
        Self::from_halfspaces(2, &hs)
    }

    pub fn dimension(&self) -> usize {
        self.dimension
    }

    pub fn facets(&self) -> &[Facet] {
        &self.facets
    }

    pub fn vertices(&self) -> &[Vec<f64>] {
        &self.vertices
    }

    /// `(n-1)`-dimensional facet measures, in facet order.
    pub fn facet_areas(&self) -> Option<&[f64]> {
        self.facet_areas.as_deref()
    }

    /// Exact volume `(1/n) Σ b_j |F_j|` (n ≤ 3).
    pub fn volume(&self) -> Option<f64> {
        let areas = self.facet_areas.as_ref()?;
        let s: f64 = self
            .facets
            .iter()
            .zip(areas)
            .map(|(f, a)| f.offset * a)
            .sum();
        Some(s / self.dimension as f64)
    }

    pub fn radial(&self, u: &[f64]) -> f64 {
        let mut best = f64::INFINITY;
        for f in &self.facets {
            let d = dot(&f.normal, u);
            if d > 0.0 {
                best = best.min(f.offset / d);
            }
        }
        best
    }

    pub fn support(&self, u: &[f64]) -> f64 {
        self.vertices
            .iter()
            .map(|v| dot(v, u))
            .fold(f64::NEG_INFINITY, f64::max)
    }

    /// `P° = {y : ⟨v, y⟩ ≤ 1 for every vertex v}`.
    pub fn polar(&self) -> Result<Polytope> {
        let hs: Vec<_> = self.vertices.iter().map(|v| (v.clone(), 1.0)).collect();
        Polytope::from_halfspaces(self.dimension, &hs)
    }

    /// `TP = {y : ⟨T^{-*}a, y⟩ ≤ b}`.
    pub fn transformed(&self, map: &LinearMap) -> Result<Polytope> {
        let hs: Vec<_> = self
            .facets
            .iter()
            .map(|f| (map.apply_inverse_transpose(&f.normal), f.offset))
            .collect();
        Polytope::from_halfspaces(self.dimension, &hs)
    }

    pub fn scaled(&self, lambda: f64) -> Polytope {
        Polytope {
            dimension: self.dimension,
            facets: self
                .facets
                .iter()
                .map(|f| Facet {
                    normal: f.normal.clone(),
                    offset: f.offset * lambda,
                })
                .collect(),
            vertices: self
                .vertices
                .iter()
                .map(|v| v.iter().map(|x| x * lambda).collect())
                .collect(),
            facet_areas: self.facet_areas.as_ref().map(|areas| {
                let factor = lambda.powi(self.dimension as i32 - 1);
                areas.iter().map(|a| a * factor).collect()
            }),
        }
    }

    pub fn is_symmetric(&self) -> bool {
        let scale = self.facets.iter().fold(0.0f64, |m, f| m.max(f.offset));
        self.vertices.iter().all(|v| {
            let neg: Vec<f64> = v.iter().map(|x| -x).collect();
            self.vertices
                .iter()
                .any(|w| dist(w, &neg) <= 1e-9 * scale.max(1.0))
        })
    }
}

pub(crate) fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

fn dist(a: &[f64], b: &[f64]) -> f64 {
    a.iter()
        .zip(b)
        .map(|(x, y)| (x - y) * (x - y))
        .sum::<f64>()
        .sqrt()
}

fn enumerate_vertices(n: usize, facets: &[Facet], scale: f64) -> Vec<Vec<f64>> {
    let m = facets.len();
    let mut out: Vec<Vec<f64>> = Vec::new();
    let mut idx: Vec<usize> = (0..n).collect();
    loop {
        let a = DMatrix::from_fn(n, n, |r, c| facets[idx[r]].normal[c]);
        let b = DVector::from_fn(n, |r, _| facets[idx[r]].offset);
        if let Some(x) = a.lu().solve(&b) {
            let x: Vec<f64> = x.iter().copied().collect();
            let tol = FEAS_EPS * scale.max(1.0) * 10.0;
            if x.iter().all(|v| v.is_finite())
                && facets.iter().all(|f| dot(&f.normal, &x) <= f.offset + tol)
                && !out.iter().any(|v| dist(v, &x) <= tol)
            {
                out.push(x);
            }
        }
        // next n-combination of 0..m
        let mut k = n;
        loop {
            if k == 0 {
                return out;
            }
            k -= 1;
            if idx[k] < m - n + k {
                idx[k] += 1;
                for t in k + 1..n {
                    idx[t] = idx[t - 1] + 1;
                }
                break;
            }
        }
    }
}

fn on_facet<'a>(f: &Facet, vertices: &'a [Vec<f64>], scale: f64) -> Vec<&'a Vec<f64>> {
    let tol = 1e-7 * scale.max(1.0);
    vertices
        .iter()
        .filter(|v| (dot(&f.normal, v) - f.offset).abs() <= tol)
        .collect()
}

fn facet_lengths_2d(facets: &[Facet], vertices: &[Vec<f64>], scale: f64) -> Vec<f64> {
    facets
        .iter()
        .map(|f| {
            let vs = on_facet(f, vertices, scale);
            let mut best = 0.0f64;
            for i in 0..vs.len() {
                for j in i + 1..vs.len() {
                    best = best.max(dist(vs[i], vs[j]));
                }
            }
            best
        })
        .collect()
}

fn facet_areas_3d(facets: &[Facet], vertices: &[Vec<f64>], scale: f64) -> Vec<f64> {
    facets
        .iter()
        .map(|f| {
            let vs = on_facet(f, vertices, scale);
            if vs.len() < 3 {
                return 0.0;
            }
            let nrm = &f.normal;
            // orthonormal basis (e1, e2) of the facet plane
            let pick = if nrm[0].abs() < 0.9 {
                [1.0, 0.0, 0.0]
            } else {
                [0.0, 1.0, 0.0]
            };
            let mut e1 = [
                pick[0] - nrm[0] * dot(nrm, &pick),
                pick[1] - nrm[1] * dot(nrm, &pick),
                pick[2] - nrm[2] * dot(nrm, &pick),
            ];
            let l = dot(&e1, &e1).sqrt();
            e1.iter_mut().for_each(|x| *x /= l);
            let e2 = [
                nrm[1] * e1[2] - nrm[2] * e1[1],
                nrm[2] * e1[0] - nrm[0] * e1[2],
                nrm[0] * e1[1] - nrm[1] * e1[0],
            ];
            let pts: Vec<(f64, f64)> = vs.iter().map(|v| (dot(v, &e1), dot(v, &e2))).collect();
            let (cx, cy) = pts.iter().fold((0.0, 0.0), |(a, b), p| (a + p.0, b + p.1));
            let (cx, cy) = (cx / pts.len() as f64, cy / pts.len() as f64);
            let mut order: Vec<usize> = (0..pts.len()).collect();
            order.sort_by(|&a, &b| {
                let ta = (pts[a].1 - cy).atan2(pts[a].0 - cx);
                let tb = (pts[b].1 - cy).atan2(pts[b].0 - cx);
                ta.total_cmp(&tb)
            });
            let mut area2 = 0.0;
            for k in 0..order.len() {
                let p = pts[order[k]];
                let q = pts[order[(k + 1) % order.len()]];
                area2 += p.0 * q.1 - q.0 * p.1;
            }
            area2.abs() / 2.0
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn square_geometry() {
        let sq = Polytope::cube(2, 1.0).unwrap();
        assert_eq!(sq.vertices().len(), 4);
        assert!((sq.volume().unwrap() - 4.0).abs() < 1e-12);
        let u = [0.5f64.sqrt(), 0.5f64.sqrt()];
        assert!((sq.radial(&u) - 2f64.sqrt()).abs() < 1e-12);
        assert!((sq.support(&u) - 2f64.sqrt()).abs() < 1e-12);
        assert!(sq.is_symmetric());
    }

    #[test]
    fn cube_volume_and_polar() {
        let c = Polytope::cube(3, 1.0).unwrap();
        assert!((c.volume().unwrap() - 8.0).abs() < 1e-10);
        let p = c.polar().unwrap();
        // octahedron |x|_1 <= 1 has volume 4/3
        assert_eq!(p.facets().len(), 8);
        assert!((p.volume().unwrap() - 4.0 / 3.0).abs() < 1e-10);
    }

    #[test]
    fn square_polar_is_cross_polytope() {
        let p = Polytope::cube(2, 1.0).unwrap().polar().unwrap();
        let cross = Polytope::cross_polytope(2, 1.0).unwrap();
        for k in 0..50 {
            let t = k as f64 * 0.137;
            let u = [t.cos(), t.sin()];
            assert!((p.radial(&u) - cross.radial(&u)).abs() < 1e-12);
        }
    }

    #[test]
    fn unbounded_and_origin_checks() {
        let hs = vec![
            (vec![1.0, 0.0], 1.0),
            (vec![0.0, 1.0], 1.0),
            (vec![-1.0, 0.0], 1.0),
        ];
        assert!(matches!(
            Polytope::from_halfspaces(2, &hs),
            Err(Error::InvalidBody(_))
        ));
        let hs = vec![
            (vec![1.0, 0.0], -0.5),
            (vec![0.0, 1.0], 1.0),
            (vec![-1.0, -1.0], 1.0),
        ];
        assert!(Polytope::from_halfspaces(2, &hs).is_err());
    }

    #[test]
    fn triangle_area() {
        // triangle with vertices (2,0), (-1, ±√3): inradius 1
        let tri = Polytope::regular_polygon(3, 1.0, std::f64::consts::PI).unwrap();
        let side = 2.0 * 3f64.sqrt();
        let expect = 3f64.sqrt() / 4.0 * side * side;
        assert!((tri.volume().unwrap() - expect).abs() < 1e-10);
        assert!(!tri.is_symmetric());
    }
}
