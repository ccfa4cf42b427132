//! Best-effort maximization of g on the unit sphere when the ball maximum is
//! not positive.
//!
//! Each start is improved by a step-halving tangent supergradient ascent and
//! the best few are refined by tangent-plane rounds: for unit u0 the
//! restriction of g to the affine plane u0 + T y (T an orthonormal basis of
//! the real tangent space) is concave, and since every point of the plane
//! has norm ≥ 1, a plane point w with g(w) ≥ g(u0) ≤ 0 normalizes to a
//! sphere point at least as good. A sphere maximizer is a fixed point.

use num_complex::Complex64;

use super::ellipsoid::{self, Problem};
use super::{from_real, to_real, CostOptions, CostOracle};
use crate::matcore::matrix;
use crate::matcore::random::{random_pure_state_with, stream_rng};

const LOCAL_ITERS: usize = 200;
const REFINED: usize = 4;
const PLANE_RADIUS: f64 = 1.0;
const PLANE_ROUNDS: usize = 60;
const PLANE_TOL: f64 = 1e-13;
const PLANE_MAX_ITERS: usize = 6_000;
/// Rounds stop once the improvement falls below this.
const STALL: f64 = 1e-14;

pub(crate) struct SphereOutcome {
    pub v: Vec<Complex64>,
    pub value: f64,
    pub converged: bool,
}

fn normalize(v: Vec<Complex64>) -> Vec<Complex64> {
    matrix::normalized(&v).unwrap_or(v)
}

/// Step-halving ascent along the projected supergradient, retracting onto
/// the sphere after every step.
fn local_ascent(oracle: &CostOracle<'_>, mut v: Vec<Complex64>) -> (Vec<Complex64>, f64) {
    let mut e = oracle.eval(&v);
    let mut step = 0.5;
    for _ in 0..LOCAL_ITERS {
        let overlap: Complex64 = v.iter().zip(&e.supergradient).map(|(a, s)| a.conj() * s).sum();
        // real tangent projection: remove the component along v in R^{2d}
        let tangent: Vec<Complex64> = e
            .supergradient
            .iter()
            .zip(&v)
            .map(|(s, a)| s - a * overlap.re)
            .collect();
        let tn = matrix::norm(&tangent);
        if tn < 1e-15 {
            break;
        }
        let trial = normalize(v.iter().zip(&tangent).map(|(a, t)| a + t * (step / tn)).collect());
        let te = oracle.eval(&trial);
        if te.value > e.value {
            v = trial;
            e = te;
            step = (step * 1.5).min(1.0);
        } else {
            step *= 0.5;
            if step < 1e-12 {
                break;
            }
        }
    }
    (v, e.value)
}

/// Orthonormal basis (as columns, stored row-major p × (p−1)) of the
/// orthogonal complement of the unit vector x0, via a Householder reflector.
fn tangent_basis(x0: &[f64]) -> Vec<Vec<f64>> {
    let p = x0.len();
    let sign = if x0[0] >= 0.0 { 1.0 } else { -1.0 };
    let mut w = x0.to_vec();
    w[0] += sign;
    let ww: f64 = w.iter().map(|x| x * x).sum();
    (1..p)
        .map(|col| {
            (0..p)
                .map(|i| f64::from(u8::from(i == col)) - 2.0 * w[i] * w[col] / ww)
                .collect()
        })
        .collect()
}

/// Repeated tangent-plane maximization from `v`. Returns the final point,
/// its value and whether the rounds stalled rather than ran out.
fn refine(oracle: &CostOracle<'_>, mut v: Vec<Complex64>, mut value: f64) -> (Vec<Complex64>, f64, bool) {
    for _ in 0..PLANE_ROUNDS {
        let x0 = to_real(&v);
        let basis = tangent_basis(&x0);
        let point = |y: &[f64]| -> Vec<f64> {
            let mut x = x0.clone();
            for (yk, col) in y.iter().zip(&basis) {
                for (xi, ci) in x.iter_mut().zip(col) {
                    *xi += yk * ci;
                }
            }
            x
        };
        let center = vec![0.0; basis.len()];
        let problem = Problem {
            center: &center,
            radius: PLANE_RADIUS,
            tol: PLANE_TOL,
            max_iters: PLANE_MAX_ITERS,
        };
        let out = ellipsoid::maximize(&problem, Some((center.clone(), value)), |y| {
            let (val, s) = oracle.eval_real(&point(y));
            let grad = basis
                .iter()
                .map(|col| col.iter().zip(&s).map(|(c, si)| c * si).sum())
                .collect();
            (val, grad)
        });
        let candidate = normalize(from_real(&point(&out.best_x)));
        let cv = oracle.eval(&candidate).value;
        if cv <= value + STALL {
            if cv > value {
                v = candidate;
                value = cv;
            }
            return (v, value, true);
        }
        v = candidate;
        value = cv;
    }
    (v, value, false)
}

/// Multistart search: `seeds` first, then random unit vectors from
/// independent streams of `opts.seed` until `opts.restarts` starts are used.
pub(crate) fn search(oracle: &CostOracle<'_>, seeds: &[Vec<Complex64>], opts: &CostOptions) -> SphereOutcome {
    let d = oracle.d();
    let total = opts.restarts.max(seeds.len()).max(1);
    let mut locals: Vec<(usize, Vec<Complex64>, f64)> = (0..total)
        .map(|k| {
            let start = seeds
                .get(k)
                .cloned()
                .unwrap_or_else(|| random_pure_state_with(d, &mut stream_rng(opts.seed, k as u64)).into_amplitudes());
            let (v, value) = local_ascent(oracle, normalize(start));
            (k, v, value)
        })
        .collect();
    locals.sort_by(|a, b| b.2.total_cmp(&a.2).then(a.0.cmp(&b.0)));

    let mut best: Option<SphereOutcome> = None;
    for (_, v, value) in locals.into_iter().take(REFINED) {
        let (v, value, converged) = refine(oracle, v, value);
        if best.as_ref().is_none_or(|b| value > b.value + 1e-12) {
            best = Some(SphereOutcome { v, value, converged });
        }
    }
    best.expect("at least one start")
}
