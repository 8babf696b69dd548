//! Star bodies and convex bodies about the origin.
//!
//! A [`StarBody`] is described by its radial function. Analytic kinds (balls,
//! ellipsoids, l_p balls, polytopes, seeded random stars) evaluate in closed
//! form at any direction; grid-sampled bodies interpolate their node values:
//! periodic linear interpolation in angle for n = 2, nearest node for n ≥ 3.
//! Nearest-node lookup costs one order of accuracy when a sampled body is
//! re-evaluated on a different grid (for example after a linear transform).
//!
//! Support functions are analytic where a closed form exists and otherwise the
//! support of the sampled point cloud `{ρ(u_i) u_i}`, whose error is
//! O(mesh width × Lipschitz constant of ρ).

pub mod cloud;
mod linear;
mod polytope;
mod random;
mod spec;

use std::fmt;
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::sphgrid::{unit_ball_volume, GridFunction, SphericalGrid};

pub use linear::LinearMap;
pub use polytope::{Facet, Polytope};
pub use random::Perturbation;
pub use spec::{BodySpec, FacetSpec};

use polytope::dot;

/// Three-valued metadata flag.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Flag {
    Yes,
    No,
    Unknown,
}

impl Flag {
    pub fn is_yes(self) -> bool {
        self == Flag::Yes
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum BodyKind {
    Ball,
    Ellipsoid,
    LpBall,
    Polytope,
    GridSampled,
    RandomStar,
    Transformed,
    Custom,
}

pub type DirectionFn = Arc<dyn Fn(&[f64]) -> f64 + Send + Sync>;

#[derive(Clone)]
enum Shape {
    Ball {
        radius: f64,
    },
    /// `A·B`.
    Ellipsoid {
        map: LinearMap,
    },
    /// `{x : ‖x‖_p ≤ radius}`, `p = ∞` allowed.
    LpBall {
        p: f64,
        radius: f64,
    },
    Polytope(Arc<Polytope>),
    Sampled {
        grid: SphericalGrid,
        values: Arc<Vec<f64>>,
    },
    /// `scale · (1 + roughness · g(u))`.
    Random {
        perturbation: Arc<Perturbation>,
        roughness: f64,
        scale: f64,
    },
    Transformed {
        map: LinearMap,
        inner: Arc<StarBody>,
    },
    Custom {
        label: String,
        radial: DirectionFn,
        support: Option<DirectionFn>,
    },
}

/// A star body about the origin with symmetry and convexity metadata.
#[derive(Clone)]
pub struct StarBody {
    dimension: usize,
    shape: Shape,
    symmetry: Flag,
    convexity: Flag,
}

impl fmt::Debug for StarBody {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.descriptor())
    }
}

fn positive(name: &str, v: f64) -> Result<f64> {
    if v > 0.0 && v.is_finite() {
        Ok(v)
    } else {
        Err(Error::InvalidBody(format!(
            "{name} must be positive and finite, got {v}"
        )))
    }
}

fn check_dimension(n: usize) -> Result<()> {
    if n < 2 {
        return Err(Error::Configuration(format!(
            "dimension must be >= 2, got {n}"
        )));
    }
    Ok(())
}

fn norm(v: &[f64]) -> f64 {
    dot(v, v).sqrt()
}

fn lp_norm(u: &[f64], p: f64) -> f64 {
    if p.is_infinite() {
        u.iter().fold(0.0f64, |m, x| m.max(x.abs()))
    } else {
        u.iter().map(|x| x.abs().powf(p)).sum::<f64>().powf(1.0 / p)
    }
}

fn conjugate(p: f64) -> f64 {
    if p == 1.0 {
        f64::INFINITY
    } else if p.is_infinite() {
        1.0
    } else {
        p / (p - 1.0)
    }
}

fn fnv(values: &[f64]) -> u64 {
    let mut h: u64 = 0xcbf2_9ce4_8422_2325;
    for v in values {
        for b in v.to_bits().to_le_bytes() {
            h ^= b as u64;
            h = h.wrapping_mul(0x0100_0000_01b3);
        }
    }
    h
}

impl StarBody {
    pub fn ball(dimension: usize, radius: f64) -> Result<Self> {
        check_dimension(dimension)?;
        Ok(StarBody {
            dimension,
            shape: Shape::Ball {
                radius: positive("radius", radius)?,
            },
            symmetry: Flag::Yes,
            convexity: Flag::Yes,
        })
    }

    pub fn unit_ball(dimension: usize) -> Self {
        Self::ball(dimension, 1.0).expect("unit ball is valid")
    }

    /// The ellipsoid `A·B`.
    pub fn ellipsoid(map: LinearMap) -> Result<Self> {
        check_dimension(map.dimension())?;
        Ok(StarBody {
            dimension: map.dimension(),
            shape: Shape::Ellipsoid { map },
            symmetry: Flag::Yes,
            convexity: Flag::Yes,
        })
    }

    /// Axis-aligned ellipsoid `diag(a)·B`.
    pub fn ellipsoid_axes(semi_axes: &[f64]) -> Result<Self> {
        for &a in semi_axes {
            positive("semi-axis", a)?;
        }
        Self::ellipsoid(LinearMap::diagonal(semi_axes)?)
    }

    pub fn lp_ball(dimension: usize, p: f64, radius: f64) -> Result<Self> {
        check_dimension(dimension)?;
        if !(p > 0.0) {
            return Err(Error::InvalidBody(format!(
                "l_p exponent must be positive, got {p}"
            )));
        }
        Ok(StarBody {
            dimension,
            shape: Shape::LpBall {
                p,
                radius: positive("radius", radius)?,
            },
            symmetry: Flag::Yes,
            convexity: if p >= 1.0 { Flag::Yes } else { Flag::No },
        })
    }

    pub fn polytope(p: Polytope) -> Self {
        let symmetry = if p.is_symmetric() {
            Flag::Yes
        } else {
            Flag::No
        };
        StarBody {
            dimension: p.dimension(),
            shape: Shape::Polytope(Arc::new(p)),
            symmetry,
            convexity: Flag::Yes,
        }
    }

    /// `[-h, h]^n`.
    pub fn cube(dimension: usize, half_width: f64) -> Result<Self> {
        Ok(Self::polytope(Polytope::cube(
            dimension,
            positive("half width", half_width)?,
        )?))
    }

    pub fn grid_sampled(
        grid: &SphericalGrid,
        values: Vec<f64>,
        symmetry: Flag,
        convexity: Flag,
    ) -> Result<Self> {
        if values.len() != grid.len() {
            return Err(Error::InvalidBody(format!(
                "{} radial values for a grid of {} nodes",
                values.len(),
                grid.len()
            )));
        }
        if let Some((i, v)) = values
            .iter()
            .enumerate()
            .find(|(_, v)| !(**v > 0.0 && v.is_finite()))
        {
            return Err(Error::InvalidBody(format!(
                "radial value {v} at node {i} is not positive"
            )));
        }
        Ok(StarBody {
            dimension: grid.dimension(),
            shape: Shape::Sampled {
                grid: grid.clone(),
                values: Arc::new(values),
            },
            symmetry,
            convexity,
        })
    }

    /// User-supplied radial function (and optionally support function).
    pub fn custom(
        dimension: usize,
        label: impl Into<String>,
        radial: DirectionFn,
        support: Option<DirectionFn>,
        symmetry: Flag,
        convexity: Flag,
    ) -> Result<Self> {
        check_dimension(dimension)?;
        Ok(StarBody {
            dimension,
            shape: Shape::Custom {
                label: label.into(),
                radial,
                support,
            },
            symmetry,
            convexity,
        })
    }

    /// The ball `c + rB` described about the origin; requires `‖c‖ < r`.
    pub fn off_center_ball(center: &[f64], radius: f64) -> Result<Self> {
        let c = center.to_vec();
        let cn = norm(&c);
        if !(cn < radius) {
            return Err(Error::InvalidBody("origin must lie inside the ball".into()));
        }
        let c1 = c.clone();
        let radial: DirectionFn = Arc::new(move |u: &[f64]| {
            let cu = dot(&c1, u);
            cu + (cu * cu - cn * cn + radius * radius).sqrt()
        });
        let c2 = c.clone();
        let support: DirectionFn = Arc::new(move |u: &[f64]| dot(&c2, u) + radius);
        let label = format!("ball(c={:?},r={radius:e})", c);
        let symmetry = if cn == 0.0 { Flag::Yes } else { Flag::No };
        Self::custom(c.len(), label, radial, Some(support), symmetry, Flag::Yes)
    }

    pub fn dimension(&self) -> usize {
        self.dimension
    }

    pub fn symmetry(&self) -> Flag {
        self.symmetry
    }

    pub fn convexity(&self) -> Flag {
        self.convexity
    }

    pub fn kind(&self) -> BodyKind {
        match &self.shape {
            Shape::Ball { .. } => BodyKind::Ball,
            Shape::Ellipsoid { .. } => BodyKind::Ellipsoid,
            Shape::LpBall { .. } => BodyKind::LpBall,
            Shape::Polytope(_) => BodyKind::Polytope,
            Shape::Sampled { .. } => BodyKind::GridSampled,
            Shape::Random { .. } => BodyKind::RandomStar,
            Shape::Transformed { .. } => BodyKind::Transformed,
            Shape::Custom { .. } => BodyKind::Custom,
        }
    }

    /// Radius of a ball body.
    pub fn as_ball(&self) -> Option<f64> {
        match self.shape {
            Shape::Ball { radius } => Some(radius),
            _ => None,
        }
    }

    pub fn as_polytope(&self) -> Option<&Polytope> {
        match &self.shape {
            Shape::Polytope(p) => Some(p),
            _ => None,
        }
    }

    /// The map `A` of an ellipsoid body `A·B`.
    pub fn as_ellipsoid(&self) -> Option<&LinearMap> {
        match &self.shape {
            Shape::Ellipsoid { map } => Some(map),
            _ => None,
        }
    }

    /// Exact volume when a closed form is known.
    pub fn exact_volume(&self) -> Option<f64> {
        let n = self.dimension;
        match &self.shape {
            Shape::Ball { radius } => Some(unit_ball_volume(n) * radius.powi(n as i32)),
            Shape::Ellipsoid { map } => Some(unit_ball_volume(n) * map.det_abs()),
            Shape::Polytope(p) => p.volume(),
            Shape::Transformed { map, inner } => inner.exact_volume().map(|v| v * map.det_abs()),
            _ => None,
        }
    }

    /// `ρ_K(u)` for a unit vector `u`.
    pub fn radial(&self, u: &[f64]) -> f64 {
        match &self.shape {
            Shape::Ball { radius } => *radius,
            Shape::Ellipsoid { map } => 1.0 / norm(&map.apply_inverse(u)),
            Shape::LpBall { p, radius } => radius / lp_norm(u, *p),
            Shape::Polytope(p) => p.radial(u),
            Shape::Sampled { grid, values } => interpolate(grid, values, u),
            Shape::Random {
                perturbation,
                roughness,
                scale,
            } => scale * (1.0 + roughness * perturbation.eval(u)),
            Shape::Transformed { map, inner } => {
                let w = map.apply_inverse(u);
                let l = norm(&w);
                let dir: Vec<f64> = w.iter().map(|x| x / l).collect();
                inner.radial(&dir) / l
            }
            Shape::Custom { radial, .. } => radial(u),
        }
    }

    pub fn has_analytic_support(&self) -> bool {
        match &self.shape {
            Shape::Ball { .. }
            | Shape::Ellipsoid { .. }
            | Shape::LpBall { .. }
            | Shape::Polytope(_) => true,
            Shape::Sampled { .. } | Shape::Random { .. } => false,
            Shape::Transformed { inner, .. } => inner.has_analytic_support(),
            Shape::Custom { support, .. } => support.is_some(),
        }
    }

    /// Closed-form `h_K(u)` for a unit vector `u`, if available.
    pub fn support(&self, u: &[f64]) -> Option<f64> {
        match &self.shape {
            Shape::Ball { radius } => Some(*radius),
            Shape::Ellipsoid { map } => Some(norm(&map.apply_transpose(u))),
            Shape::LpBall { p, radius } => {
                let q = if *p >= 1.0 {
                    conjugate(*p)
                } else {
                    f64::INFINITY
                };
                Some(radius * lp_norm(u, q))
            }
            Shape::Polytope(p) => Some(p.support(u)),
            Shape::Sampled { .. } | Shape::Random { .. } => None,
            Shape::Transformed { map, inner } => {
                let v = map.apply_transpose(u);
                let l = norm(&v);
                let dir: Vec<f64> = v.iter().map(|x| x / l).collect();
                inner.support(&dir).map(|h| h * l)
            }
            Shape::Custom { support, .. } => support.as_ref().map(|s| s(u)),
        }
    }

    /// `λK` for `λ > 0`.
    pub fn scaled(&self, lambda: f64) -> Result<StarBody> {
        positive("scale factor", lambda)?;
        let shape = match &self.shape {
            Shape::Ball { radius } => Shape::Ball {
                radius: radius * lambda,
            },
            Shape::Ellipsoid { map } => Shape::Ellipsoid {
                map: LinearMap::scalar(self.dimension, lambda)?.compose(map),
            },
            Shape::LpBall { p, radius } => Shape::LpBall {
                p: *p,
                radius: radius * lambda,
            },
            Shape::Polytope(p) => Shape::Polytope(Arc::new(p.scaled(lambda))),
            Shape::Sampled { grid, values } => Shape::Sampled {
                grid: grid.clone(),
                values: Arc::new(values.iter().map(|v| v * lambda).collect()),
            },
            Shape::Random {
                perturbation,
                roughness,
                scale,
            } => Shape::Random {
                perturbation: perturbation.clone(),
                roughness: *roughness,
                scale: scale * lambda,
            },
            Shape::Transformed { map, inner } => Shape::Transformed {
                map: map.clone(),
                inner: Arc::new(inner.scaled(lambda)?),
            },
            Shape::Custom { .. } => Shape::Transformed {
                map: LinearMap::scalar(self.dimension, lambda)?,
                inner: Arc::new(self.clone()),
            },
        };
        Ok(StarBody {
            shape,
            ..self.clone()
        })
    }

    /// Polar body in closed form, when every layer of the representation has one.
    pub fn polar_analytic(&self) -> Result<Option<StarBody>> {
        let n = self.dimension;
        let body = match &self.shape {
            Shape::Ball { radius } => StarBody::ball(n, 1.0 / radius)?,
            Shape::Ellipsoid { map } => StarBody::ellipsoid(map.inverse_transpose())?,
            Shape::LpBall { p, radius } => {
                let q = if *p >= 1.0 {
                    conjugate(*p)
                } else {
                    f64::INFINITY
                };
                StarBody::lp_ball(n, q, 1.0 / radius)?
            }
            Shape::Polytope(p) => StarBody::polytope(p.polar()?),
            Shape::Sampled { .. } | Shape::Random { .. } => return Ok(None),
            Shape::Transformed { map, inner } => match inner.polar_analytic()? {
                Some(p) => transform(&map.inverse_transpose(), &p)?,
                None => return Ok(None),
            },
            Shape::Custom { label, support, .. } => match support {
                Some(s) => {
                    let s = s.clone();
                    let radial: DirectionFn = Arc::new(move |u: &[f64]| 1.0 / s(u));
                    StarBody::custom(
                        n,
                        format!("polar({label})"),
                        radial,
                        None,
                        self.symmetry,
                        Flag::Yes,
                    )?
                }
                None => return Ok(None),
            },
        };
        Ok(Some(StarBody {
            symmetry: self.symmetry,
            convexity: Flag::Yes,
            ..body
        }))
    }

    /// Deterministic text description used in digests and reports.
    pub fn descriptor(&self) -> String {
        let n = self.dimension;
        match &self.shape {
            Shape::Ball { radius } => format!("ball(n={n},r={radius:e})"),
            Shape::Ellipsoid { map } => format!("ellipsoid(n={n},A={:?})", map.rows()),
            Shape::LpBall { p, radius } => format!("lp-ball(n={n},p={p:e},r={radius:e})"),
            Shape::Polytope(p) => {
                let f: Vec<String> = p
                    .facets()
                    .iter()
                    .map(|f| format!("{:?}:{:e}", f.normal, f.offset))
                    .collect();
                format!("polytope(n={n},[{}])", f.join(";"))
            }
            Shape::Sampled { grid, values } => {
                format!("grid-sampled({};{:016x})", grid.descriptor(), fnv(values))
            }
            Shape::Random {
                perturbation,
                roughness,
                scale,
            } => format!(
                "random(n={n},seed={},symmetric={},roughness={roughness:e},scale={scale:e})",
                perturbation.seed, perturbation.symmetric
            ),
            Shape::Transformed { map, inner } => {
                format!("transformed({:?},{})", map.rows(), inner.descriptor())
            }
            Shape::Custom { label, .. } => format!("custom(n={n},{label})"),
        }
    }

    /// Replaces the metadata flags.
    pub fn with_flags(mut self, symmetry: Flag, convexity: Flag) -> Self {
        self.symmetry = symmetry;
        self.convexity = convexity;
        self
    }
}

fn interpolate(grid: &SphericalGrid, values: &[f64], u: &[f64]) -> f64 {
    if let (Some(order), Some(angles)) = (grid.angular_order(), grid.angles()) {
        let tau = 2.0 * std::f64::consts::PI;
        let mut theta = u[1].atan2(u[0]);
        if theta < 0.0 {
            theta += tau;
        }
        let n = order.len();
        let k = order.partition_point(|&i| angles[i] <= theta);
        let (lo, hi) = ((k + n - 1) % n, k % n);
        let (i0, i1) = (order[lo], order[hi]);
        let (a0, mut a1) = (angles[i0], angles[i1]);
        let mut t = theta;
        if a1 <= a0 {
            a1 += tau;
        }
        if t < a0 {
            t += tau;
        }
        let span = a1 - a0;
        if span <= 0.0 {
            return values[i0];
        }
        let w = ((t - a0) / span).clamp(0.0, 1.0);
        values[i0] * (1.0 - w) + values[i1] * w
    } else {
        let mut best = 0;
        let mut best_dot = f64::NEG_INFINITY;
        for (i, node) in grid.nodes().enumerate() {
            let d = dot(node, u);
            if d > best_dot {
                best_dot = d;
                best = i;
            }
        }
        values[best]
    }
}

/// A body together with its radial (and optionally support) samples on a grid.
#[derive(Debug, Clone)]
pub struct BodyOnGrid {
    pub body: StarBody,
    pub grid: SphericalGrid,
    pub rho: GridFunction,
    pub support: Option<GridFunction>,
}

fn check_dims(k: &StarBody, grid: &SphericalGrid) -> Result<()> {
    if k.dimension() != grid.dimension() {
        return Err(Error::Configuration(format!(
            "body dimension {} does not match grid dimension {}",
            k.dimension(),
            grid.dimension()
        )));
    }
    Ok(())
}

/// Radial samples `ρ_K(u_i)`; rejects non-positive or non-finite values.
pub fn radial_values(k: &StarBody, grid: &SphericalGrid) -> Result<Vec<f64>> {
    check_dims(k, grid)?;
    let values = match &k.shape {
        Shape::Sampled { grid: own, values } if own.same_as(grid) => values.as_ref().clone(),
        Shape::Ball { radius } => vec![*radius; grid.len()],
        _ => grid.nodes().map(|u| k.radial(u)).collect(),
    };
    if let Some((i, v)) = values
        .iter()
        .enumerate()
        .find(|(_, v)| !(**v > 0.0 && v.is_finite()))
    {
        return Err(Error::InvalidBody(format!(
            "radial value {v} at node {i} of {}",
            k.descriptor()
        )));
    }
    Ok(values)
}

pub fn radial_eval(k: &StarBody, grid: &SphericalGrid) -> Result<BodyOnGrid> {
    let rho = GridFunction::new(grid, radial_values(k, grid)?)?;
    let support = if k.has_analytic_support() {
        Some(support_eval(k, grid)?)
    } else {
        None
    };
    Ok(BodyOnGrid {
        body: k.clone(),
        grid: grid.clone(),
        rho,
        support,
    })
}

/// Support samples `h_K(u_i)`: closed form when available, otherwise the
/// support of the radial point cloud on this grid.
pub fn support_values(k: &StarBody, grid: &SphericalGrid) -> Result<Vec<f64>> {
    check_dims(k, grid)?;
    if k.has_analytic_support() {
        Ok(grid
            .nodes()
            .map(|u| k.support(u).expect("analytic support"))
            .collect())
    } else {
        let rho = radial_values(k, grid)?;
        Ok(cloud::support_on_grid(grid, &rho))
    }
}

pub fn support_eval(k: &StarBody, grid: &SphericalGrid) -> Result<GridFunction> {
    GridFunction::new(grid, support_values(k, grid)?)
}

/// Polar body `K°`, with `ρ_{K°} = 1/h_K`. Closed form when possible,
/// otherwise sampled on `grid`.
pub fn polar(k: &StarBody, grid: &SphericalGrid) -> Result<StarBody> {
    check_dims(k, grid)?;
    if let Some(p) = k.polar_analytic()? {
        return Ok(p);
    }
    let h = support_values(k, grid)?;
    if let Some((i, v)) = h.iter().enumerate().find(|(_, v)| !(**v > 0.0)) {
        return Err(Error::InvalidBody(format!(
            "support value {v} at node {i}: origin is not interior to the convex hull"
        )));
    }
    StarBody::grid_sampled(
        grid,
        h.iter().map(|v| 1.0 / v).collect(),
        k.symmetry(),
        Flag::Yes,
    )
}

/// Convex hull `(K°)°`. Convex inputs are returned unchanged.
pub fn convex_hull(k: &StarBody, grid: &SphericalGrid) -> Result<StarBody> {
    check_dims(k, grid)?;
    if k.convexity().is_yes() {
        return Ok(k.clone());
    }
    if let Some(p) = k.polar_analytic()? {
        if let Some(pp) = p.polar_analytic()? {
            return Ok(pp);
        }
    }
    let rho = radial_values(k, grid)?;
    StarBody::grid_sampled(grid, cloud::hull_radii(grid, &rho), k.symmetry(), Flag::Yes)
}

/// `TK`, keeping closed forms for balls, ellipsoids and polytopes.
pub fn transform(t: &LinearMap, k: &StarBody) -> Result<StarBody> {
    if t.dimension() != k.dimension() {
        return Err(Error::Configuration(format!(
            "map dimension {} does not match body dimension {}",
            t.dimension(),
            k.dimension()
        )));
    }
    if let Some(lambda) = t.as_scalar() {
        if lambda > 0.0 {
            return k.scaled(lambda);
        }
    }
    let shape = match &k.shape {
        Shape::Ball { radius } => Shape::Ellipsoid {
            map: t.compose(&LinearMap::scalar(k.dimension, *radius)?),
        },
        Shape::Ellipsoid { map } => Shape::Ellipsoid {
            map: t.compose(map),
        },
        Shape::Polytope(p) => Shape::Polytope(Arc::new(p.transformed(t)?)),
        Shape::Transformed { map, inner } => Shape::Transformed {
            map: t.compose(map),
            inner: inner.clone(),
        },
        _ => Shape::Transformed {
            map: t.clone(),
            inner: Arc::new(k.clone()),
        },
    };
    Ok(StarBody { shape, ..k.clone() })
}

/// `(1/|K|) ∫ ρ^{n+1} u dσ / (n+1)`.
pub fn centroid(k: &StarBody, grid: &SphericalGrid) -> Result<Vec<f64>> {
    let rho = radial_values(k, grid)?;
    let n = grid.dimension();
    let volume = grid.weighted_sum(|i| rho[i].powi(n as i32)) / n as f64;
    Ok((0..n)
        .map(|j| {
            let m = grid.weighted_sum(|i| rho[i].powi(n as i32 + 1) * grid.node(i)[j]);
            m / (n as f64 + 1.0) / volume
        })
        .collect())
}

fn vrad_on(k: &StarBody, grid: &SphericalGrid) -> Result<f64> {
    let rho = radial_values(k, grid)?;
    let n = grid.dimension();
    let v = grid.weighted_sum(|i| rho[i].powi(n as i32)) / n as f64;
    Ok((v / unit_ball_volume(n)).powf(1.0 / n as f64))
}

/// Membership in `K_c`: centroid norm at most `tol · vrad(K)`.
pub fn centroid_at_origin(k: &StarBody, grid: &SphericalGrid, tol: f64) -> Result<bool> {
    let c = centroid(k, grid)?;
    Ok(norm(&c) <= tol * vrad_on(k, grid)?)
}

/// Membership in `K̃`: convex, and centroid or Santaló point at the origin.
/// The Santaló point test checks the centroid of the polar body.
pub fn in_centered_class(k: &StarBody, grid: &SphericalGrid, tol: f64) -> Result<bool> {
    if !k.convexity().is_yes() {
        return Ok(false);
    }
    if k.symmetry().is_yes() || centroid_at_origin(k, grid, tol)? {
        return Ok(true);
    }
    centroid_at_origin(&polar(k, grid)?, grid, tol)
}

/// Membership in `S̃`: the polar body lies in `K̃`.
pub fn in_polar_centered_class(l: &StarBody, grid: &SphericalGrid, tol: f64) -> Result<bool> {
    in_centered_class(&polar(l, grid)?, grid, tol)
}

/// Seeded smooth random star body `ρ = 1 + roughness · g(u)` with `sup|g| ≤ 1`.
pub fn make_random_star(
    dimension: usize,
    seed: u64,
    roughness: f64,
    symmetric: bool,
) -> Result<StarBody> {
    check_dimension(dimension)?;
    if !(0.0..1.0).contains(&roughness) {
        return Err(Error::Configuration(format!(
            "roughness must lie in [0, 1), got {roughness}"
        )));
    }
    if roughness == 0.0 {
        return Ok(StarBody::unit_ball(dimension));
    }
    Ok(StarBody {
        dimension,
        shape: Shape::Random {
            perturbation: Arc::new(Perturbation::new(dimension, seed, symmetric)),
            roughness,
            scale: 1.0,
        },
        symmetry: if symmetric { Flag::Yes } else { Flag::Unknown },
        convexity: Flag::Unknown,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::sphgrid::Scheme;
    use std::f64::consts::PI;

    fn circle(n: usize) -> SphericalGrid {
        SphericalGrid::build(2, n, Scheme::UniformAngle, None).unwrap()
    }

    #[test]
    fn radial_examples() {
        let g = circle(8);
        assert!(radial_values(&StarBody::unit_ball(2), &g)
            .unwrap()
            .iter()
            .all(|&v| v == 1.0));
        let sq = StarBody::cube(2, 1.0).unwrap();
        let d = [0.5f64.sqrt(), 0.5f64.sqrt()];
        assert!((sq.radial(&d) - 2f64.sqrt()).abs() < 1e-12);
        let l1 = StarBody::lp_ball(2, 1.0, 1.0).unwrap();
        assert!((l1.radial(&[1.0, 0.0]) - 1.0).abs() < 1e-15);
    }

    #[test]
    fn support_examples() {
        let e = StarBody::ellipsoid_axes(&[2.0, 0.5]).unwrap();
        let sq = StarBody::cube(2, 1.0).unwrap();
        for k in 0..32 {
            let t = k as f64 * 0.2;
            let u = [t.cos(), t.sin()];
            let want = (4.0 * u[0] * u[0] + 0.25 * u[1] * u[1]).sqrt();
            assert!((e.support(&u).unwrap() - want).abs() < 1e-12);
            assert!((sq.support(&u).unwrap() - (u[0].abs() + u[1].abs())).abs() < 1e-12);
        }
    }

    #[test]
    fn polar_examples() {
        let g = circle(64);
        let p = polar(&StarBody::ball(2, 3.0).unwrap(), &g).unwrap();
        assert_eq!(p.as_ball(), Some(1.0 / 3.0));
        let e = polar(&StarBody::ellipsoid_axes(&[2.0, 0.5]).unwrap(), &g).unwrap();
        let want = StarBody::ellipsoid_axes(&[0.5, 2.0]).unwrap();
        for u in g.nodes() {
            assert!((e.radial(u) - want.radial(u)).abs() < 1e-12);
        }
        let cross = polar(&StarBody::cube(2, 1.0).unwrap(), &g).unwrap();
        for u in g.nodes() {
            assert!((cross.radial(u) - 1.0 / (u[0].abs() + u[1].abs())).abs() < 1e-12);
        }
    }

    #[test]
    fn sampled_polar_duality() {
        let g = circle(512);
        let e = StarBody::ellipsoid_axes(&[1.5, 0.8]).unwrap();
        let sampled =
            StarBody::grid_sampled(&g, radial_values(&e, &g).unwrap(), Flag::Yes, Flag::Yes)
                .unwrap();
        let p = polar(&sampled, &g).unwrap();
        assert_eq!(p.kind(), BodyKind::GridSampled);
        let hp = support_values(&p, &g).unwrap();
        let rho = radial_values(&sampled, &g).unwrap();
        for (r, h) in rho.iter().zip(&hp) {
            assert!((r * h - 1.0).abs() < 1e-3);
        }
    }

    #[test]
    fn hull_of_lp_quarter_is_cross_polytope() {
        let g = circle(128);
        let k = StarBody::lp_ball(2, 0.5, 1.0).unwrap();
        let hull = convex_hull(&k, &g).unwrap();
        assert_eq!(hull.kind(), BodyKind::LpBall);
        for u in g.nodes() {
            assert!((hull.radial(u) - 1.0 / (u[0].abs() + u[1].abs())).abs() < 1e-12);
        }
    }

    #[test]
    fn transform_examples() {
        let g = circle(512);
        let b = StarBody::unit_ball(2);
        let s = transform(
            &LinearMap::scalar(2, 2.0).unwrap(),
            &StarBody::ball(2, 1.5).unwrap(),
        )
        .unwrap();
        assert_eq!(s.as_ball(), Some(3.0));
        let d = transform(&LinearMap::diagonal(&[2.0, 0.5]).unwrap(), &b).unwrap();
        assert!((d.radial(&[1.0, 0.0]) - 2.0).abs() < 1e-12);
        assert_eq!(d.kind(), BodyKind::Ellipsoid);
        let shear = LinearMap::from_rows(&[vec![1.0, 1.0], vec![0.0, 1.0]]).unwrap();
        let sb = transform(&shear, &b).unwrap();
        let rho = radial_values(&sb, &g).unwrap();
        let vol = g.weighted_sum(|i| rho[i] * rho[i]) / 2.0;
        assert!((vol - PI).abs() / PI < 1e-6);
    }

    #[test]
    fn transform_composition_consistent() {
        let g = circle(64);
        let k = make_random_star(2, 4, 0.3, false).unwrap();
        let s = LinearMap::from_rows(&[vec![1.0, 0.4], vec![-0.2, 1.3]]).unwrap();
        let t = LinearMap::from_rows(&[vec![0.7, 0.0], vec![0.5, 1.1]]).unwrap();
        let a = transform(&s.compose(&t), &k).unwrap();
        let b = transform(&s, &transform(&t, &k).unwrap()).unwrap();
        for u in g.nodes() {
            assert!((a.radial(u) - b.radial(u)).abs() < 1e-10);
        }
    }

    #[test]
    fn centroid_of_shifted_disk() {
        let g = circle(512);
        let k = StarBody::off_center_ball(&[0.3, 0.0], 1.0).unwrap();
        let c = centroid(&k, &g).unwrap();
        assert!((c[0] - 0.3).abs() < 1e-3 && c[1].abs() < 1e-3);
        assert!(!centroid_at_origin(&k, &g, 1e-3).unwrap());
        let c0 = centroid(&StarBody::cube(2, 1.0).unwrap(), &g).unwrap();
        assert!(norm(&c0) < 1e-12);
    }

    #[test]
    fn random_star_examples() {
        let g = circle(256);
        assert_eq!(
            make_random_star(2, 1, 0.0, false).unwrap().as_ball(),
            Some(1.0)
        );
        let k = make_random_star(2, 5, 0.5, true).unwrap();
        assert_eq!(k.symmetry(), Flag::Yes);
        let r = radial_values(&k, &g).unwrap();
        for i in 0..128 {
            assert!((r[i] - r[i + 128]).abs() < 1e-10);
        }
        let again = radial_values(&make_random_star(2, 5, 0.5, true).unwrap(), &g).unwrap();
        assert_eq!(r, again);
        assert!(make_random_star(2, 1, 1.0, false).is_err());
    }

    #[test]
    fn sampled_interpolation_reproduces_nodes() {
        let g = SphericalGrid::build(2, 100, Scheme::MonteCarlo, Some(4)).unwrap();
        let vals: Vec<f64> = g.nodes().map(|u| 1.0 + 0.2 * u[0]).collect();
        let k = StarBody::grid_sampled(&g, vals.clone(), Flag::Unknown, Flag::Unknown).unwrap();
        for (i, u) in g.nodes().enumerate() {
            assert!((k.radial(u) - vals[i]).abs() < 1e-12);
        }
    }
}
