//! Orlicz functions `φ : (0, ∞) → (0, ∞)`, their class membership relative to a
//! dimension `n`, and compositions `H = φ ∘ ψ⁻¹`.
//!
//! Membership is decided on `F(t) = φ(t^{1/n})`:
//!
//! * `Φ̃`: F constant or strictly convex;
//! * `Ψ̃`: F constant, or increasing and strictly concave;
//! * `Φ̃₁`: F constant, or decreasing and strictly convex.
//!
//! Powers `t^p` use the closed-form catalogue; other functions are probed on
//! `t ∈ 10^{linspace(-4, 4, 161)}` with a threshold of 1e-9 on normalised
//! second differences. Numeric probing can only suggest strict convexity, so
//! the result is advisory for non-power functions.

mod expr;

use std::fmt;
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

pub use expr::{parse, Expr};

pub const PROBE_POINTS: usize = 161;
pub const CONVEXITY_THRESHOLD: f64 = 1e-9;

/// `10^{-4 + 8k/160}` for `k = 0..=160`.
pub fn probe_grid() -> Vec<f64> {
    (0..PROBE_POINTS)
        .map(|k| 10f64.powf(-4.0 + 8.0 * k as f64 / (PROBE_POINTS - 1) as f64))
        .collect()
}

type ScalarFn = Arc<dyn Fn(f64) -> f64 + Send + Sync>;

#[derive(Clone)]
enum Form {
    Power(f64),
    Constant(f64),
    Expr(Arc<Expr>),
    Custom(ScalarFn),
}

/// A positive continuous function on `(0, ∞)`.
#[derive(Clone)]
pub struct OrliczFunction {
    form: Form,
    label: String,
}

impl fmt::Debug for OrliczFunction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "OrliczFunction({})", self.label)
    }
}

impl OrliczFunction {
    /// `t^p`.
    pub fn power(p: f64) -> Result<Self> {
        if !p.is_finite() {
            return Err(Error::Configuration(format!(
                "power exponent must be finite, got {p}"
            )));
        }
        if p == 0.0 {
            return Ok(OrliczFunction {
                form: Form::Constant(1.0),
                label: "t^0".into(),
            });
        }
        Ok(OrliczFunction {
            form: Form::Power(p),
            label: format!("t^{p}"),
        })
    }

    /// `φ ≡ α` with `α > 0`.
    pub fn constant(alpha: f64) -> Result<Self> {
        if !(alpha > 0.0 && alpha.is_finite()) {
            return Err(Error::Configuration(format!(
                "constant must be positive, got {alpha}"
            )));
        }
        Ok(OrliczFunction {
            form: Form::Constant(alpha),
            label: format!("{alpha}"),
        })
    }

    /// Parses an arithmetic expression in `t`.
    pub fn expression(src: &str) -> Result<Self> {
        let e = parse(src)?;
        if e.is_constant() {
            return Self::constant(e.eval(1.0)).map(|f| OrliczFunction {
                label: src.trim().to_string(),
                ..f
            });
        }
        Ok(OrliczFunction {
            form: Form::Expr(Arc::new(e)),
            label: src.trim().to_string(),
        })
    }

    pub fn custom(
        label: impl Into<String>,
        f: impl Fn(f64) -> f64 + Send + Sync + 'static,
    ) -> Self {
        OrliczFunction {
            form: Form::Custom(Arc::new(f)),
            label: label.into(),
        }
    }

    #[inline]
    pub fn eval(&self, t: f64) -> f64 {
        match &self.form {
            Form::Power(p) => pow(t, *p),
            Form::Constant(a) => *a,
            Form::Expr(e) => e.eval(t),
            Form::Custom(f) => f(t),
        }
    }

    pub fn label(&self) -> &str {
        &self.label
    }

    pub fn as_power(&self) -> Option<f64> {
        match self.form {
            Form::Power(p) => Some(p),
            Form::Constant(_) if self.label == "t^0" => Some(0.0),
            _ => None,
        }
    }

    pub fn as_constant(&self) -> Option<f64> {
        match self.form {
            Form::Constant(a) => Some(a),
            _ => None,
        }
    }

    /// Positive and finite on the probe grid `[1e-6, 1e6]`.
    pub fn check_positive(&self) -> Result<()> {
        for k in 0..=120 {
            let t = 10f64.powf(-6.0 + 0.1 * k as f64);
            let v = self.eval(t);
            if !(v > 0.0 && v.is_finite()) {
                return Err(Error::NumericalDomain {
                    node: k,
                    detail: format!("{}({t:e}) = {v}", self.label),
                });
            }
        }
        Ok(())
    }
}

#[inline]
fn pow(t: f64, p: f64) -> f64 {
    if p == 1.0 {
        t
    } else if p == -1.0 {
        1.0 / t
    } else if p == 2.0 {
        t * t
    } else if p == 3.0 {
        t * t * t
    } else if p == 0.5 {
        t.sqrt()
    } else if p == -2.0 {
        1.0 / (t * t)
    } else {
        t.powf(p)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Monotonicity {
    Increasing,
    Decreasing,
    Constant,
    Mixed,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum FunctionClass {
    /// F constant or strictly convex.
    Phi,
    /// F constant, or increasing and strictly concave.
    Psi,
    /// F constant, or decreasing and strictly convex.
    PhiOne,
}

impl fmt::Display for FunctionClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            FunctionClass::Phi => "Phi",
            FunctionClass::Psi => "Psi",
            FunctionClass::PhiOne => "Phi1",
        })
    }
}

/// Class membership of `φ` relative to a dimension.
#[derive(Debug, Clone, PartialEq)]
pub struct Classification {
    pub dimension: usize,
    /// Monotonicity of `φ` (equivalently of `F`).
    pub monotonicity: Monotonicity,
    pub phi: bool,
    pub psi: bool,
    pub phi_one: bool,
    /// Set for `t^n`, which the theory excludes.
    pub excluded: bool,
    /// Decided from the closed-form catalogue rather than by probing.
    pub exact: bool,
    pub diagnostic: Option<String>,
}

impl Classification {
    pub fn contains(&self, class: FunctionClass) -> bool {
        match class {
            FunctionClass::Phi => self.phi,
            FunctionClass::Psi => self.psi,
            FunctionClass::PhiOne => self.phi_one,
        }
    }

    pub fn classes(&self) -> Vec<FunctionClass> {
        [
            FunctionClass::Phi,
            FunctionClass::Psi,
            FunctionClass::PhiOne,
        ]
        .into_iter()
        .filter(|c| self.contains(*c))
        .collect()
    }

    pub fn is_constant(&self) -> bool {
        self.monotonicity == Monotonicity::Constant
    }
}

/// `φ = t^p` with its catalogue classification in dimension `n`.
pub fn power(p: f64, n: usize) -> Result<(OrliczFunction, Classification)> {
    let f = OrliczFunction::power(p)?;
    let c = classify(&f, n)?;
    Ok((f, c))
}

fn power_catalogue(p: f64, n: usize) -> Classification {
    let nf = n as f64;
    let base = Classification {
        dimension: n,
        monotonicity: Monotonicity::Constant,
        phi: true,
        psi: true,
        phi_one: true,
        excluded: false,
        exact: true,
        diagnostic: None,
    };
    if p == 0.0 {
        return base;
    }
    if p == nf {
        return Classification {
            monotonicity: Monotonicity::Increasing,
            phi: false,
            psi: false,
            phi_one: false,
            excluded: true,
            diagnostic: Some(format!("t^{n} is excluded in dimension {n}")),
            ..base
        };
    }
    Classification {
        monotonicity: if p > 0.0 {
            Monotonicity::Increasing
        } else {
            Monotonicity::Decreasing
        },
        phi: p < 0.0 || p > nf,
        psi: p > 0.0 && p < nf,
        phi_one: p < 0.0,
        ..base
    }
}

/// Class membership of `φ` in dimension `n`.
pub fn classify(phi: &OrliczFunction, n: usize) -> Result<Classification> {
    if n < 2 {
        return Err(Error::Configuration(format!(
            "dimension must be >= 2, got {n}"
        )));
    }
    if let Some(p) = phi.as_power() {
        return Ok(power_catalogue(p, n));
    }
    classify_numeric(phi, n)
}

/// Probe-based classification, used for every non-power function.
pub fn classify_numeric(phi: &OrliczFunction, n: usize) -> Result<Classification> {
    let ts = probe_grid();
    let inv_n = 1.0 / n as f64;
    let mut f = Vec::with_capacity(ts.len());
    for (k, &t) in ts.iter().enumerate() {
        let v = phi.eval(t.powf(inv_n));
        if !(v.is_finite() && v > 0.0) {
            return Err(Error::NumericalDomain {
                node: k,
                detail: format!("{}(t^(1/{n})) = {v} at t = {t:e}", phi.label()),
            });
        }
        f.push(v);
    }
    let shape = probe_shape(&ts, &f, CONVEXITY_THRESHOLD);
    let base = Classification {
        dimension: n,
        monotonicity: shape.monotonicity,
        phi: true,
        psi: true,
        phi_one: true,
        excluded: false,
        exact: false,
        diagnostic: None,
    };
    if shape.monotonicity == Monotonicity::Constant {
        return Ok(base);
    }
    let phi_c = shape.strictly_convex;
    let psi_c = shape.strictly_concave && shape.monotonicity == Monotonicity::Increasing;
    let phi_one = phi_c && shape.monotonicity == Monotonicity::Decreasing;
    let diagnostic = if !phi_c && !psi_c {
        Some(format!(
            "F(t) = {}(t^(1/{n})) is {:?} with min/max normalised second difference {:.3e}/{:.3e}",
            phi.label(),
            shape.monotonicity,
            shape.min_curvature,
            shape.max_curvature
        ))
    } else {
        None
    };
    Ok(Classification {
        phi: phi_c,
        psi: psi_c,
        phi_one,
        diagnostic,
        ..base
    })
}

#[derive(Debug, Clone, Copy)]
struct Shape {
    monotonicity: Monotonicity,
    strictly_convex: bool,
    strictly_concave: bool,
    min_curvature: f64,
    max_curvature: f64,
}

/// Monotonicity and convexity of samples `(x_k, y_k)` with `x` increasing.
fn probe_shape(x: &[f64], y: &[f64], tau: f64) -> Shape {
    let y0 = y[0];
    let spread = y.iter().fold(0.0f64, |m, v| m.max((v - y0).abs()));
    if spread <= 1e-12 * y0.abs().max(f64::MIN_POSITIVE) {
        return Shape {
            monotonicity: Monotonicity::Constant,
            strictly_convex: false,
            strictly_concave: false,
            min_curvature: 0.0,
            max_curvature: 0.0,
        };
    }
    let inc = y.windows(2).all(|w| w[1] > w[0]);
    let dec = y.windows(2).all(|w| w[1] < w[0]);
    let mut lo = f64::INFINITY;
    let mut hi = f64::NEG_INFINITY;
    for k in 1..x.len() - 1 {
        let sl = (y[k] - y[k - 1]) / (x[k] - x[k - 1]);
        let sr = (y[k + 1] - y[k]) / (x[k + 1] - x[k]);
        let denom = sl.abs() + sr.abs();
        let d = if denom > 0.0 { (sr - sl) / denom } else { 0.0 };
        lo = lo.min(d);
        hi = hi.max(d);
    }
    Shape {
        monotonicity: if inc {
            Monotonicity::Increasing
        } else if dec {
            Monotonicity::Decreasing
        } else {
            Monotonicity::Mixed
        },
        strictly_convex: lo > tau,
        strictly_concave: hi < -tau,
        min_curvature: lo,
        max_curvature: hi,
    }
}

/// `H = φ ∘ ψ⁻¹` with probed shape, used to dispatch the cyclic inequalities.
#[derive(Clone, Debug)]
pub struct Composition {
    pub phi: OrliczFunction,
    pub psi: OrliczFunction,
    pub psi_increasing: bool,
    pub monotonicity: Monotonicity,
    /// Non-strict convexity on the probe range (within the threshold).
    pub convex: bool,
    /// Non-strict concavity on the probe range (within the threshold).
    pub concave: bool,
}

impl Composition {
    /// `ψ⁻¹(s)`, by closed form for powers and log-space bisection otherwise.
    pub fn psi_inverse(&self, s: f64) -> Option<f64> {
        invert(&self.psi, self.psi_increasing, s)
    }

    /// `H(s) = φ(ψ⁻¹(s))`; NaN outside the range of ψ.
    pub fn eval(&self, s: f64) -> f64 {
        match self.psi_inverse(s) {
            Some(t) => self.phi.eval(t),
            None => f64::NAN,
        }
    }
}

fn invert(psi: &OrliczFunction, increasing: bool, s: f64) -> Option<f64> {
    if !(s > 0.0 && s.is_finite()) {
        return None;
    }
    if let Some(q) = psi.as_power() {
        if q != 0.0 {
            return Some(s.powf(1.0 / q));
        }
    }
    // g(log t) = ψ(t) - s, monotone in log t
    let sign = if increasing { 1.0 } else { -1.0 };
    let g = |lt: f64| sign * (psi.eval(lt.exp()) - s);
    let (mut lo, mut hi) = ((1e-4f64).ln(), (1e4f64).ln());
    let mut widen = 0;
    while g(lo) > 0.0 {
        lo -= 10.0;
        widen += 1;
        if widen > 60 || !g(lo).is_finite() {
            return None;
        }
    }
    widen = 0;
    while g(hi) < 0.0 {
        hi += 10.0;
        widen += 1;
        if widen > 60 || !g(hi).is_finite() {
            return None;
        }
    }
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        if g(mid) < 0.0 {
            lo = mid;
        } else {
            hi = mid;
        }
        if hi - lo < 1e-14 {
            break;
        }
    }
    Some((0.5 * (lo + hi)).exp())
}

/// Builds `H = φ ∘ ψ⁻¹`; ψ must be strictly monotone on the probe grid.
pub fn compose_h(phi: &OrliczFunction, psi: &OrliczFunction) -> Result<Composition> {
    // probe points where either function overflows are dropped
    let mut ts = Vec::with_capacity(PROBE_POINTS);
    let mut ps = Vec::with_capacity(PROBE_POINTS);
    let mut fs = Vec::with_capacity(PROBE_POINTS);
    for t in probe_grid() {
        let (s, f) = (psi.eval(t), phi.eval(t));
        if s.is_nan() || f.is_nan() {
            return Err(Error::InvalidComposition(format!(
                "{} or {} is undefined at t = {t:e}",
                phi.label(),
                psi.label()
            )));
        }
        if s.is_finite() && f.is_finite() {
            if !(s > 0.0 && f > 0.0) {
                return Err(Error::InvalidComposition(format!(
                    "{} or {} is not positive at t = {t:e}",
                    phi.label(),
                    psi.label()
                )));
            }
            ts.push(t);
            ps.push(s);
            fs.push(f);
        }
    }
    if 2 * ts.len() < PROBE_POINTS {
        return Err(Error::InvalidComposition(format!(
            "{} or {} overflows on most of the probe range",
            phi.label(),
            psi.label()
        )));
    }
    let increasing = ps.windows(2).all(|w| w[1] > w[0]);
    let decreasing = ps.windows(2).all(|w| w[1] < w[0]);
    if !increasing && !decreasing {
        return Err(Error::InvalidComposition(format!(
            "{} is not strictly monotone on the probe range",
            psi.label()
        )));
    }
    // H(ψ(t)) = φ(t): probe H at s = ψ(t) with s sorted ascending
    let mut pairs: Vec<(f64, f64)> = ps.into_iter().zip(fs).collect();
    if decreasing {
        pairs.reverse();
    }
    let (x, y): (Vec<f64>, Vec<f64>) = pairs.into_iter().unzip();
    let shape = probe_shape(&x, &y, CONVEXITY_THRESHOLD);
    Ok(Composition {
        phi: phi.clone(),
        psi: psi.clone(),
        psi_increasing: increasing,
        monotonicity: shape.monotonicity,
        convex: shape.monotonicity == Monotonicity::Constant
            || shape.min_curvature >= -CONVEXITY_THRESHOLD,
        concave: shape.monotonicity == Monotonicity::Constant
            || shape.max_curvature <= CONVEXITY_THRESHOLD,
    })
}

/// Declarative function description, as read from a run configuration.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FunctionSpec {
    pub kind: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub p: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub value: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub expr: Option<String>,
}

impl FunctionSpec {
    pub fn power(p: f64) -> Self {
        FunctionSpec {
            kind: "power".into(),
            p: Some(p),
            value: None,
            expr: None,
        }
    }

    pub fn build(&self) -> Result<OrliczFunction> {
        match self.kind.as_str() {
            "power" => OrliczFunction::power(
                self.p
                    .ok_or_else(|| Error::Configuration("power function requires 'p'".into()))?,
            ),
            "constant" => OrliczFunction::constant(self.value.ok_or_else(|| {
                Error::Configuration("constant function requires 'value'".into())
            })?),
            "expr" => OrliczFunction::expression(
                self.expr
                    .as_deref()
                    .ok_or_else(|| Error::Configuration("expr function requires 'expr'".into()))?,
            ),
            other => Err(Error::Configuration(format!(
                "unknown function kind '{other}'"
            ))),
        }
    }
}
