use serde::{Deserialize, Serialize};

use super::{make_random_star, transform, Flag, LinearMap, Polytope, StarBody};
use crate::error::{Error, Result};
use crate::sphgrid::SphericalGrid;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FacetSpec {
    pub normal: Vec<f64>,
    pub offset: f64,
}

/// Declarative body description, as read from a run configuration.
///
/// `kind` selects the family; only the fields that family uses may be set.
/// `scale` and `transform` are applied afterwards, in that order.
#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct BodySpec {
    pub kind: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub dimension: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub radius: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub semi_axes: Option<Vec<f64>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub matrix: Option<Vec<Vec<f64>>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub p: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub facets: Option<Vec<FacetSpec>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub half_width: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub sides: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub values: Option<Vec<f64>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub seed: Option<u64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub roughness: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub symmetric: Option<bool>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub center: Option<Vec<f64>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub scale: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub transform: Option<Vec<Vec<f64>>>,
}

fn need<T: Clone>(field: &Option<T>, name: &str, kind: &str) -> Result<T> {
    field
        .clone()
        .ok_or_else(|| Error::Configuration(format!("body kind '{kind}' requires field '{name}'")))
}

impl BodySpec {
    pub fn of_kind(kind: &str) -> Self {
        BodySpec {
            kind: kind.to_string(),
            ..Default::default()
        }
    }

    /// Builds the body on `grid`; `root_seed` seeds random bodies without an explicit seed.
    pub fn build(&self, grid: &SphericalGrid, root_seed: u64) -> Result<StarBody> {
        let n = self.dimension.unwrap_or(grid.dimension());
        if n != grid.dimension() {
            return Err(Error::Configuration(format!(
                "body dimension {n} does not match grid dimension {}",
                grid.dimension()
            )));
        }
        let kind = self.kind.as_str();
        let body = match kind {
            "ball" => StarBody::ball(n, self.radius.unwrap_or(1.0))?,
            "ellipsoid" => match (&self.semi_axes, &self.matrix) {
                (Some(a), None) => {
                    if a.len() != n {
                        return Err(Error::Configuration(format!(
                            "ellipsoid has {} semi-axes in dimension {n}",
                            a.len()
                        )));
                    }
                    StarBody::ellipsoid_axes(a)?
                }
                (None, Some(m)) => StarBody::ellipsoid(LinearMap::from_rows(m)?)?,
                _ => {
                    return Err(Error::Configuration(
                        "ellipsoid requires exactly one of 'semi_axes' or 'matrix'".into(),
                    ))
                }
            },
            "lp-ball" => {
                StarBody::lp_ball(n, need(&self.p, "p", kind)?, self.radius.unwrap_or(1.0))?
            }
            "cube" => StarBody::cube(n, self.half_width.unwrap_or(1.0))?,
            "cross-polytope" => {
                StarBody::polytope(Polytope::cross_polytope(n, self.radius.unwrap_or(1.0))?)
            }
            "regular-polygon" => {
                if n != 2 {
                    return Err(Error::Configuration("regular-polygon is planar".into()));
                }
                StarBody::polytope(Polytope::regular_polygon(
                    need(&self.sides, "sides", kind)?,
                    self.radius.unwrap_or(1.0),
                    0.0,
                )?)
            }
            "polytope" => {
                let facets = need(&self.facets, "facets", kind)?;
                let hs: Vec<_> = facets
                    .iter()
                    .map(|f| (f.normal.clone(), f.offset))
                    .collect();
                StarBody::polytope(Polytope::from_halfspaces(n, &hs)?)
            }
            "grid-sampled" => StarBody::grid_sampled(
                grid,
                need(&self.values, "values", kind)?,
                if self.symmetric == Some(true) {
                    Flag::Yes
                } else {
                    Flag::Unknown
                },
                Flag::Unknown,
            )?,
            "random" => make_random_star(
                n,
                self.seed.unwrap_or(root_seed),
                need(&self.roughness, "roughness", kind)?,
                self.symmetric.unwrap_or(false),
            )?,
            "off-center-ball" => StarBody::off_center_ball(
                &need(&self.center, "center", kind)?,
                self.radius.unwrap_or(1.0),
            )?,
            other => return Err(Error::Configuration(format!("unknown body kind '{other}'"))),
        };
        let body = match self.scale {
            Some(s) => body.scaled(s)?,
            None => body,
        };
        match &self.transform {
            Some(rows) => transform(&LinearMap::from_rows(rows)?, &body),
            None => Ok(body),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::bodies::BodyKind;
    use crate::sphgrid::Scheme;

    #[test]
    fn builds_families() {
        let g = SphericalGrid::build(2, 16, Scheme::UniformAngle, None).unwrap();
        let e = BodySpec {
            semi_axes: Some(vec![2.0, 0.5]),
            ..BodySpec::of_kind("ellipsoid")
        };
        assert_eq!(e.build(&g, 0).unwrap().kind(), BodyKind::Ellipsoid);
        let r = BodySpec {
            roughness: Some(0.3),
            symmetric: Some(true),
            ..BodySpec::of_kind("random")
        };
        assert_eq!(r.build(&g, 9).unwrap().symmetry(), Flag::Yes);
        assert!(BodySpec::of_kind("lp-ball").build(&g, 0).is_err());
        assert!(BodySpec::of_kind("torus").build(&g, 0).is_err());
        let scaled = BodySpec {
            scale: Some(2.0),
            ..BodySpec::of_kind("ball")
        };
        assert_eq!(scaled.build(&g, 0).unwrap().as_ball(), Some(2.0));
    }
}
