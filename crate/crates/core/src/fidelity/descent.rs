//! Minimum entanglement fidelity by multi-start Riemannian gradient descent.
//!
//! The minimization runs over joint pure inputs |Ψ⟩ ∈ C^n ⊗ C^n, i.e. over
//! purifications of every reduced state ρ_B (a reference system of
//! dimension n purifies any ρ_B). The objective is the squared fidelity
//!
//!   f(Ψ) = Σ_i |⟨Ψ|(I ⊗ K_i)|Ψ⟩|² = Σ_i |Tr(ρ_B K_i)|²,
//!
//! minimized on the unit sphere of C^{n²} by projected gradient steps with
//! Armijo backtracking and renormalization.

use num_complex::Complex64;
use rayon::prelude::*;

use super::optimal_w;
use crate::channels::{JointPureState, KrausChannel};
use crate::error::Result;
use crate::matcore::matrix::{self, ZERO};
use crate::matcore::random::{gaussian_vector, stream_rng};
use crate::matcore::DensityMatrix;

const ARMIJO: f64 = 1e-4;
const INITIAL_STEP: f64 = 1.0;
const MAX_STEP: f64 = 1e3;
const MIN_STEP: f64 = 1e-20;
/// Best values at or below this are flagged as possibly zero.
const ZERO_FLAG: f64 = 1e-7;
/// Restarts within this of each other tie; the lower index wins.
const TIE_TOL: f64 = 1e-12;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FminOptions {
    pub restarts: usize,
    pub max_iters: usize,
    /// Stop once the Riemannian gradient norm of f falls below this.
    pub grad_tol: f64,
    pub seed: u64,
}

impl Default for FminOptions {
    fn default() -> Self {
        Self {
            restarts: 32,
            max_iters: 10_000,
            grad_tol: 1e-10,
            seed: 0,
        }
    }
}

#[derive(Debug, Clone)]
pub struct FidelityResult {
    /// F_min estimate, the best value over all restarts.
    pub value: f64,
    /// Joint input attaining `value`, phase gauge fixed.
    pub minimizer: JointPureState,
    /// Tr_A of the minimizer.
    pub reduced_state: DensityMatrix,
    /// Optimal weights at the minimizer; `None` when `possibly_zero`.
    pub optimal_w: Option<Vec<Complex64>>,
    /// Iterations used by the winning restart.
    pub iterations: usize,
    pub restarts_used: usize,
    pub converged: bool,
    pub gradient_norm: f64,
    pub possibly_zero: bool,
}

/// f(Ψ) and ∂f/∂Ψ̄ = Σ_i [conj(c_i)(I⊗K_i)Ψ + c_i(I⊗K_i†)Ψ] with
/// c_i = ⟨Ψ|(I⊗K_i)|Ψ⟩, for Ψ laid out as `dim_a` blocks of length n.
pub fn squared_fidelity_and_gradient(channel: &KrausChannel, psi: &[Complex64], dim_a: usize) -> (f64, Vec<Complex64>) {
    let n = channel.n();
    debug_assert_eq!(psi.len(), dim_a * n);
    let mut grad = vec![ZERO; psi.len()];
    let mut f = 0.0;
    let mut kpsi = vec![ZERO; psi.len()];
    let mut kdag_psi = vec![ZERO; psi.len()];
    for k in channel.kraus() {
        for a in 0..dim_a {
            let block = &psi[a * n..(a + 1) * n];
            kpsi[a * n..(a + 1) * n].copy_from_slice(&k.mul_vec(block));
            kdag_psi[a * n..(a + 1) * n].copy_from_slice(&k.adjoint_mul_vec(block));
        }
        let c = matrix::inner(psi, &kpsi);
        f += c.norm_sqr();
        let cc = c.conj();
        for ((g, x), y) in grad.iter_mut().zip(&kpsi).zip(&kdag_psi) {
            *g += cc * x + c * y;
        }
    }
    (f, grad)
}

#[cfg(test)]
fn squared_fidelity(channel: &KrausChannel, psi: &[Complex64], dim_a: usize) -> f64 {
    let n = channel.n();
    channel
        .kraus()
        .iter()
        .map(|k| {
            let c: Complex64 = (0..dim_a).map(|a| k.expectation(&psi[a * n..(a + 1) * n])).sum();
            c.norm_sqr()
        })
        .sum()
}

/// f(trial) − f(psi), evaluated from the difference δ = trial − psi so that
/// decreases far below the rounding unit of f stay resolvable:
/// Δf = Σ_i Re(δc_i · conj(c_i + c_i')) with δc_i = ⟨δ|K_i|trial⟩ + ⟨psi|K_i|δ⟩.
fn squared_fidelity_change(channel: &KrausChannel, psi: &[Complex64], trial: &[Complex64], dim_a: usize) -> f64 {
    let n = channel.n();
    let delta: Vec<Complex64> = trial.iter().zip(psi).map(|(t, p)| t - p).collect();
    channel
        .kraus()
        .iter()
        .map(|k| {
            let mut c_old = ZERO;
            let mut c_new = ZERO;
            let mut dc = ZERO;
            for a in 0..dim_a {
                let (p, t, d) = (
                    &psi[a * n..(a + 1) * n],
                    &trial[a * n..(a + 1) * n],
                    &delta[a * n..(a + 1) * n],
                );
                let k_trial = k.mul_vec(t);
                c_old += matrix::inner(p, &k.mul_vec(p));
                c_new += matrix::inner(t, &k_trial);
                dc += matrix::inner(d, &k_trial) + matrix::inner(p, &k.mul_vec(d));
            }
            (dc * (c_old + c_new).conj()).re
        })
        .sum()
}

/// Riemannian gradient of f on the sphere (real-coordinate gradient 2∂f/∂Ψ̄
/// with the component along Ψ removed).
fn tangent_gradient(psi: &[Complex64], grad: &[Complex64]) -> Vec<Complex64> {
    let along = matrix::inner(psi, grad);
    grad.iter().zip(psi).map(|(g, p)| (g - along * p) * 2.0).collect()
}

struct RestartOutcome {
    f: f64,
    psi: Vec<Complex64>,
    iterations: usize,
    converged: bool,
    gradient_norm: f64,
}

fn descend(channel: &KrausChannel, start: Vec<Complex64>, opts: &FminOptions) -> RestartOutcome {
    let dim_a = channel.n();
    let mut psi = matrix::normalized(&start).expect("nonzero start");
    let (mut f, mut grad) = squared_fidelity_and_gradient(channel, &psi, dim_a);
    let mut step = INITIAL_STEP;
    let mut gnorm = f64::INFINITY;
    // previous point and tangent gradient, for the Barzilai–Borwein trial step
    let mut previous: Option<(Vec<Complex64>, Vec<Complex64>)> = None;
    for it in 0..opts.max_iters {
        let g = tangent_gradient(&psi, &grad);
        gnorm = matrix::norm(&g);
        if gnorm <= opts.grad_tol {
            return RestartOutcome {
                f,
                psi,
                iterations: it,
                converged: true,
                gradient_norm: gnorm,
            };
        }
        let mut alpha = match &previous {
            Some((p0, g0)) => {
                let s: Vec<Complex64> = psi.iter().zip(p0).map(|(a, b)| a - b).collect();
                let y: Vec<Complex64> = g.iter().zip(g0).map(|(a, b)| a - b).collect();
                let sy = matrix::inner(&s, &y).re;
                if sy > 0.0 {
                    (matrix::inner(&s, &s).re / sy).clamp(MIN_STEP, MAX_STEP)
                } else {
                    (2.0 * step).min(MAX_STEP)
                }
            }
            None => step,
        };
        let accepted = loop {
            let trial: Vec<Complex64> = psi.iter().zip(&g).map(|(p, d)| p - d * alpha).collect();
            if let Some(trial) = matrix::normalized(&trial) {
                if squared_fidelity_change(channel, &psi, &trial, dim_a) <= -ARMIJO * alpha * gnorm * gnorm {
                    break Some(trial);
                }
            }
            alpha *= 0.5;
            if alpha < MIN_STEP {
                break None;
            }
        };
        match accepted {
            Some(trial) => {
                previous = Some((std::mem::replace(&mut psi, trial), g));
                step = alpha;
                let (fv, gv) = squared_fidelity_and_gradient(channel, &psi, dim_a);
                f = fv;
                grad = gv;
            }
            // no descent possible at double precision: stationary for all
            // practical purposes
            None => {
                return RestartOutcome {
                    f,
                    psi,
                    iterations: it,
                    converged: gnorm <= opts.grad_tol.sqrt(),
                    gradient_norm: gnorm,
                };
            }
        }
    }
    RestartOutcome {
        f,
        psi,
        iterations: opts.max_iters,
        converged: false,
        gradient_norm: gnorm,
    }
}

/// Starting point of restart `k`: the maximally entangled input for k = 0,
/// otherwise a Gaussian vector from stream k of the seed.
fn initial_point(n: usize, k: usize, seed: u64) -> Vec<Complex64> {
    if k == 0 {
        let mut v = vec![ZERO; n * n];
        for i in 0..n {
            v[i * n + i] = Complex64::new(1.0, 0.0);
        }
        v
    } else {
        gaussian_vector(n * n, &mut stream_rng(seed, k as u64))
    }
}

/// F_min(K) = min over joint pure inputs of the entanglement fidelity.
///
/// Restarts run in parallel; the best value wins, ties going to the lowest
/// restart index. When the best value is at most 1e-7 the result is flagged
/// `possibly_zero` and no weight vector is reported.
pub fn fmin_descent(channel: &KrausChannel, opts: &FminOptions) -> Result<FidelityResult> {
    let n = channel.n();
    let restarts = opts.restarts.max(1);
    let outcomes: Vec<RestartOutcome> = (0..restarts)
        .into_par_iter()
        .map(|k| descend(channel, initial_point(n, k, opts.seed), opts))
        .collect();

    let mut best = 0;
    for (k, o) in outcomes.iter().enumerate() {
        if o.f.sqrt() < outcomes[best].f.sqrt() - TIE_TOL {
            best = k;
        }
    }
    let win = &outcomes[best];
    let minimizer = JointPureState::normalized(n, n, &win.psi)?.gauge_fixed();
    let reduced_state = minimizer.reduced_b();
    let value = super::entanglement_fidelity(&reduced_state, channel)?;
    let possibly_zero = value <= ZERO_FLAG;
    let optimal_w = if possibly_zero {
        None
    } else {
        Some(optimal_w(&reduced_state, channel)?)
    };
    Ok(FidelityResult {
        value,
        minimizer,
        reduced_state,
        optimal_w,
        iterations: win.iterations,
        restarts_used: restarts,
        converged: win.converged,
        gradient_norm: win.gradient_norm,
        possibly_zero,
    })
}

#[cfg(test)]
fn probe_upper_bound(channel: &KrausChannel, samples: usize, seed: u64) -> Result<f64> {
    super::random_density_probe(channel, samples, &mut stream_rng(seed, u64::MAX))
}
