//! Dual Orlicz-Brunn-Minkowski functionals on discretized star bodies.

pub mod bodies;
pub mod error;
pub mod extremal;
pub mod functionals;
pub mod orlicz;
pub mod sphgrid;
pub mod verify;

pub use bodies::{BodyKind, BodyOnGrid, BodySpec, Flag, LinearMap, Polytope, StarBody};
pub use error::{Error, Result};
pub use extremal::{
    estimate, estimate_ellipsoid_restricted, estimate_ith_mixed, estimate_multi, ExtremalProblem,
    ExtremalResult, SearchOptions, Sense, Target,
};
pub use functionals::FunctionalValue;
pub use orlicz::{Classification, FunctionClass, FunctionSpec, OrliczFunction};
pub use sphgrid::{GridFunction, Scheme, SphericalGrid};
pub use verify::{
    find_check, registry, run_check, Check, CheckReport, Mode, Row, RowVerdict, Verdict, Verifier,
    VerifyConfig,
};
