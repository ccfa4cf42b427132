//! Deep-cut ellipsoid method for maximizing a concave function over a
//! Euclidean ball, given a supergradient oracle.
//!
//! The ellipsoid {c + Bu : ‖u‖ ≤ 1} is kept in Shor's factored form so the
//! shape matrix never has to be squared. Every evaluated feasible center
//! yields the certified bound g* ≤ g(c) + ‖Bᵀs‖.

#[derive(Debug, Clone)]
pub(crate) struct Outcome {
    pub best_x: Vec<f64>,
    pub best_value: f64,
    pub upper_bound: f64,
    pub converged: bool,
}

pub(crate) struct Problem<'a> {
    pub center: &'a [f64],
    pub radius: f64,
    pub tol: f64,
    pub max_iters: usize,
}

/// Maximizes `oracle` (returning value and a supergradient) over the ball
/// described by `problem`. `start` seeds the incumbent.
pub(crate) fn maximize<F>(problem: &Problem<'_>, start: Option<(Vec<f64>, f64)>, mut oracle: F) -> Outcome
where
    F: FnMut(&[f64]) -> (f64, Vec<f64>),
{
    let p = problem.center.len();
    let (mut best_x, mut best_value) = start.unwrap_or_else(|| (problem.center.to_vec(), f64::NEG_INFINITY));
    if best_value == f64::NEG_INFINITY {
        best_value = oracle(&best_x).0;
    }
    if p == 1 {
        return bisect(problem, best_x, best_value, oracle);
    }

    let pf = p as f64;
    let mut c = problem.center.to_vec();
    let mut b = vec![0.0; p * p];
    for i in 0..p {
        b[i * p + i] = problem.radius;
    }
    let mut upper = f64::INFINITY;
    let mut bt = vec![0.0; p];
    let mut bg = vec![0.0; p];

    for _ in 0..problem.max_iters {
        let offset: Vec<f64> = c.iter().zip(problem.center).map(|(x, y)| x - y).collect();
        let r = norm(&offset);
        let (a, depth) = if r > problem.radius {
            (offset.iter().map(|x| x / r).collect::<Vec<_>>(), r - problem.radius)
        } else {
            let (val, s) = oracle(&c);
            if val > best_value {
                best_value = val;
                best_x = c.clone();
            }
            for (j, slot) in bt.iter_mut().enumerate() {
                *slot = (0..p).map(|i| b[i * p + j] * s[i]).sum();
            }
            let reach = norm(&bt);
            upper = upper.min(val + reach);
            if reach == 0.0 {
                // zero supergradient: c is a maximizer
                upper = val;
            }
            (s.iter().map(|x| -x).collect(), (best_value - val).max(0.0))
        };
        if upper - best_value <= problem.tol {
            return Outcome {
                best_x,
                best_value,
                upper_bound: upper,
                converged: true,
            };
        }

        for (j, slot) in bt.iter_mut().enumerate() {
            *slot = (0..p).map(|i| b[i * p + j] * a[i]).sum();
        }
        let nb = norm(&bt);
        if !(nb > 0.0) || !nb.is_finite() {
            break;
        }
        let alpha = (depth / nb).min(0.999);
        for x in bt.iter_mut() {
            *x /= nb;
        }
        for (i, slot) in bg.iter_mut().enumerate() {
            *slot = (0..p).map(|j| b[i * p + j] * bt[j]).sum();
        }
        let shift = (1.0 + pf * alpha) / (pf + 1.0);
        for (ci, gi) in c.iter_mut().zip(&bg) {
            *ci -= shift * gi;
        }
        let sigma = pf * ((1.0 - alpha * alpha) / (pf * pf - 1.0)).sqrt();
        let tau = sigma * ((pf - 1.0) * (1.0 - alpha) / ((pf + 1.0) * (1.0 + alpha))).sqrt();
        for i in 0..p {
            for j in 0..p {
                b[i * p + j] = sigma * b[i * p + j] + (tau - sigma) * bg[i] * bt[j];
            }
        }
    }
    let converged = upper - best_value <= problem.tol;
    Outcome {
        best_x,
        best_value,
        upper_bound: upper,
        converged,
    }
}

/// One-dimensional case: bisection on the sign of the supergradient.
fn bisect<F>(problem: &Problem<'_>, mut best_x: Vec<f64>, mut best_value: f64, mut oracle: F) -> Outcome
where
    F: FnMut(&[f64]) -> (f64, Vec<f64>),
{
    let mut lo = problem.center[0] - problem.radius;
    let mut hi = problem.center[0] + problem.radius;
    let mut iterations = 0usize;
    for ends in [lo, hi] {
        let (v, _) = oracle(&[ends]);
        if v > best_value {
            best_value = v;
            best_x = vec![ends];
        }
    }
    while hi - lo > 1e-15 * (1.0 + problem.radius) && iterations < problem.max_iters.max(200) {
        iterations += 1;
        let mid = 0.5 * (lo + hi);
        let (v, s) = oracle(&[mid]);
        if v > best_value {
            best_value = v;
            best_x = vec![mid];
        }
        if s[0] > 0.0 {
            lo = mid;
        } else if s[0] < 0.0 {
            hi = mid;
        } else {
            break;
        }
    }
    Outcome {
        best_x,
        best_value,
        upper_bound: best_value,
        converged: true,
    }
}

fn norm(v: &[f64]) -> f64 {
    v.iter().map(|x| x * x).sum::<f64>().sqrt()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn maximizes_a_sharp_concave_function() {
        // g(x) = −|x0 − 0.3| − 2|x1 + 0.2| − |x2|, max 0 at (0.3, −0.2, 0)
        let problem = Problem {
            center: &[0.0, 0.0, 0.0],
            radius: 1.0,
            tol: 1e-12,
            max_iters: 20_000,
        };
        let out = maximize(&problem, None, |x| {
            let v = -(x[0] - 0.3).abs() - 2.0 * (x[1] + 0.2).abs() - x[2].abs();
            let s = vec![-(x[0] - 0.3).signum(), -2.0 * (x[1] + 0.2).signum(), -x[2].signum()];
            (v, s)
        });
        assert!(out.converged);
        assert!(out.best_value > -1e-11);
        assert!((out.best_x[0] - 0.3).abs() < 1e-10);
    }

    #[test]
    fn respects_the_ball() {
        // linear objective: maximizer on the boundary at (1, 0)
        let problem = Problem {
            center: &[0.0, 0.0],
            radius: 1.0,
            tol: 1e-12,
            max_iters: 20_000,
        };
        let out = maximize(&problem, None, |x| (x[0], vec![1.0, 0.0]));
        assert!((out.best_value - 1.0).abs() < 1e-10, "{out:?}");
        assert!(norm(&out.best_x) <= 1.0 + 1e-15);
    }

    #[test]
    fn one_dimensional_bisection() {
        let problem = Problem {
            center: &[0.0],
            radius: 2.0,
            tol: 1e-12,
            max_iters: 0,
        };
        let out = maximize(&problem, None, |x| (-(x[0] - 0.7).powi(2), vec![-2.0 * (x[0] - 0.7)]));
        assert!((out.best_x[0] - 0.7).abs() < 1e-12);
    }
}
