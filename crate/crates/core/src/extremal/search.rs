//! Compass pattern search with a shrinking step.

/// One row of an optimisation trace.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TracePoint {
    /// Global evaluation counter at the time of recording.
    pub evaluation: usize,
    pub restart: usize,
    /// Best objective so far in this restart (in the problem's own sign).
    pub objective: f64,
    pub step: f64,
}

#[derive(Debug, Clone, Copy)]
pub(crate) struct Settings {
    pub initial_step: f64,
    pub min_step: f64,
}

#[derive(Debug, Clone)]
pub(crate) struct Outcome {
    pub x: Vec<f64>,
    /// Minimised quantity `sign · objective`; `+∞` when nothing evaluated.
    pub best: f64,
    pub final_step: f64,
    pub evaluations: usize,
    pub trace: Vec<(usize, f64, f64)>,
}

/// Minimises `f` from `x0`. `f` returns `None` for an infeasible point.
///
/// Each sweep tries `±step` along every coordinate; an accepted move is
/// repeated while it keeps improving. A sweep without progress halves the
/// step. Stops when the step drops below `min_step` or `budget` runs out.
pub(crate) fn pattern_search(
    x0: Vec<f64>,
    settings: Settings,
    budget: usize,
    f: &mut dyn FnMut(&[f64]) -> Option<f64>,
) -> Outcome {
    let mut evals = 0usize;
    let mut call = |x: &[f64], evals: &mut usize| -> f64 {
        *evals += 1;
        f(x).filter(|v| v.is_finite()).unwrap_or(f64::INFINITY)
    };
    let mut x = x0;
    let mut fx = if budget > 0 {
        call(&x, &mut evals)
    } else {
        f64::INFINITY
    };
    let mut step = settings.initial_step;
    let mut trace = vec![(evals, fx, step)];
    let d = x.len();
    while step >= settings.min_step && evals < budget && d > 0 {
        let mut improved = false;
        'coords: for k in 0..d {
            for dir in [1.0, -1.0] {
                if evals >= budget {
                    break 'coords;
                }
                let mut y = x.clone();
                y[k] += dir * step;
                let fy = call(&y, &mut evals);
                if fy < fx {
                    x = y;
                    fx = fy;
                    improved = true;
                    while evals < budget {
                        let mut z = x.clone();
                        z[k] += dir * step;
                        let fz = call(&z, &mut evals);
                        if fz < fx {
                            x = z;
                            fx = fz;
                        } else {
                            break;
                        }
                    }
                    break;
                }
            }
        }
        if !improved {
            step *= 0.5;
        }
        trace.push((evals, fx, step));
    }
    Outcome {
        x,
        best: fx,
        final_step: step,
        evaluations: evals,
        trace,
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn finds_quadratic_minimum() {
        let settings = Settings {
            initial_step: 0.3,
            min_step: 1e-6,
        };
        let mut f = |x: &[f64]| Some((x[0] - 1.0).powi(2) + 3.0 * (x[1] + 0.5).powi(2));
        let out = pattern_search(vec![0.0, 0.0], settings, 10_000, &mut f);
        assert!((out.x[0] - 1.0).abs() < 1e-5 && (out.x[1] + 0.5).abs() < 1e-5);
        assert!(out.final_step < 1e-6);
    }

    #[test]
    fn respects_budget_and_infeasibility() {
        let settings = Settings {
            initial_step: 0.3,
            min_step: 1e-9,
        };
        let mut f = |x: &[f64]| if x[0] < 0.5 { None } else { Some(x[0]) };
        let out = pattern_search(vec![1.0], settings, 50, &mut f);
        assert_eq!(out.evaluations, 50);
        assert!(out.best >= 0.5 && out.best < 0.6);
        let mut never = |_: &[f64]| None;
        assert!(pattern_search(vec![0.0], settings, 10, &mut never)
            .best
            .is_infinite());
    }
}
