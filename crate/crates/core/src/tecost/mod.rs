//! Time-energy cost of unitaries and channels, depolarizing closed forms and
//! the time-energy uncertainty calculators.
//!
//! The channel cost is cos‖K‖ = max over unit v of g(v), where
//! g(v) = λ_min((K_v + K_v†)/2) and K_v = Σ_j v_j K_j. g is concave in the
//! real coordinates of v and positively homogeneous, and g(0) = 0, so its
//! maximum over the unit ball equals max(cos‖K‖, 0). [`channel_cost`]
//! solves the ball problem globally and falls back to a multistart search on
//! the sphere only when that maximum is not positive.

mod ellipsoid;
mod sphere;
mod teur;

pub use teur::{
    bures_angle, chau_comparison, cost_energy_product, energy_spread, fastest_state_time, orthogonalization_time,
    teur_bound_check, ChauComparison, TeurReport, CHAU_A,
};

use std::f64::consts::FRAC_PI_2;

use num_complex::Complex64;
use serde::Serialize;

use crate::channels::kraus::depolarizing_min_q;
use crate::channels::KrausChannel;
use crate::error::{Error, Result};
use crate::matcore::matrix::{self, ComplexMatrix, ZERO};
use crate::matcore::{hermitian_eigen, unitary_eigenangles, PureState, DEFAULT_TOL};

/// Values of the ball maximum above this count as positive.
const REGIME_TOL: f64 = 1e-9;
const POLISH_ROUNDS: usize = 100;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CostOptions {
    /// Supergradient ascent iterations.
    pub iters: usize,
    /// Multistart count for the sphere search in the non-positive regime.
    pub restarts: usize,
    /// Ascent step scale c in c/√k.
    pub step_c: f64,
    /// Certified optimality gap targeted by the ellipsoid stage.
    pub tol: f64,
    pub seed: u64,
    /// ħ for the energy conversions; the cost itself is dimensionless.
    pub hbar: f64,
}

impl Default for CostOptions {
    fn default() -> Self {
        Self {
            iters: 20_000,
            restarts: 64,
            step_c: 1.0,
            tol: 1e-10,
            seed: 0,
            hbar: 1.0,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum Regime {
    Positive,
    NonPositive,
    Boundary,
}

#[derive(Debug, Clone)]
pub struct TECostResult {
    /// cos‖K‖ (best sphere value in the non-positive regime).
    pub cos_value: f64,
    /// ‖K‖ = arccos(cos_value) ∈ [0, π].
    pub angle: f64,
    /// Unit coefficient vector attaining `cos_value`.
    pub optimal_v: Vec<Complex64>,
    /// Minimum eigenvector of (K_v + K_v†)/2 at `optimal_v`.
    pub witness: PureState,
    pub converged: bool,
    pub regime: Regime,
    /// |cos_value − λ_min recomputed at optimal_v|
    pub certificate_gap: f64,
}

/// ‖U‖ = max_j |θ_j|.
pub fn unitary_cost(u: &ComplexMatrix) -> Result<f64> {
    Ok(unitary_eigenangles(u, DEFAULT_TOL)?.max_abs())
}

/// Cost of the channel ρ ↦ UρU†. When every |θ_j| ≤ π/2 this is
/// (θ_max − θ_min)/2; otherwise it is computed by [`channel_cost`].
pub fn unitary_channel_cost(u: &ComplexMatrix, opts: &CostOptions) -> Result<f64> {
    let angles = unitary_eigenangles(u, DEFAULT_TOL)?;
    if angles.max_abs() <= FRAC_PI_2 + 1e-12 {
        Ok((angles.max() - angles.min()) / 2.0)
    } else {
        Ok(channel_cost(&KrausChannel::unitary(u)?, opts)?.angle)
    }
}

/// √(q + (1 − q)/n²), the minimum entanglement fidelity of the depolarizing
/// channel.
pub fn depolarizing_fmin_closed_form(n: usize, q: f64) -> Result<f64> {
    let min = depolarizing_min_q(n);
    if n < 2 || !(q >= min - 1e-14 && q <= 1.0) {
        return Err(Error::OutOfRange {
            name: "q",
            value: q,
            min,
            max: 1.0,
        });
    }
    Ok((q + (1.0 - q) / (n * n) as f64).max(0.0).sqrt())
}

/// arccos √(q + (1 − q)/n²)
pub fn depolarizing_cost_closed_form(n: usize, q: f64) -> Result<f64> {
    Ok(depolarizing_fmin_closed_form(n, q)?.min(1.0).acos())
}

/// E_j = ħθ_j/t for the principal-branch eigen-angles of U = exp(−iHt/ħ).
pub fn hamiltonian_energies_from_unitary(u: &ComplexMatrix, t: f64, hbar: f64) -> Result<Vec<f64>> {
    if !(t > 0.0) {
        return Err(Error::NonPositiveTime(t));
    }
    let angles = unitary_eigenangles(u, DEFAULT_TOL)?;
    Ok(angles.as_slice().iter().map(|th| hbar * th / t).collect())
}

/// g(v) = λ_min((K_v + K_v†)/2) for any v ∈ C^d (not only unit vectors),
/// with the supergradient conj(⟨ψ_min|K_j|ψ_min⟩).
pub fn cost_objective(channel: &KrausChannel, v: &[Complex64]) -> Result<(f64, Vec<Complex64>)> {
    if v.len() != channel.d() {
        return Err(Error::DimensionMismatch {
            expected: channel.d(),
            found: v.len(),
        });
    }
    if let Some(j) = v.iter().position(|z| !(z.re.is_finite() && z.im.is_finite())) {
        return Err(Error::NonFinite { row: j, col: 0 });
    }
    let e = CostOracle::new(channel).eval(v);
    Ok((e.value, e.supergradient))
}

/// Evaluates g(v) = λ_min(Herm K_v) with its minimizing eigenvector and
/// the supergradient conj(⟨ψ|K_j|ψ⟩).
pub(crate) struct CostOracle<'a> {
    channel: &'a KrausChannel,
}

pub(crate) struct Evaluation {
    pub value: f64,
    pub psi: Vec<Complex64>,
    pub supergradient: Vec<Complex64>,
}

impl<'a> CostOracle<'a> {
    pub(crate) fn new(channel: &'a KrausChannel) -> Self {
        Self { channel }
    }

    pub(crate) fn d(&self) -> usize {
        self.channel.d()
    }

    pub(crate) fn eval(&self, v: &[Complex64]) -> Evaluation {
        let h = self.channel.combination_unchecked(v).hermitian_part();
        let eig = hermitian_eigen(&h, f64::INFINITY).expect("Hermitian part of a finite matrix");
        let psi = eig.vector(0);
        let supergradient = self
            .channel
            .kraus()
            .iter()
            .map(|k| k.expectation(&psi).conj())
            .collect();
        Evaluation {
            value: eig.eigenvalues[0],
            psi,
            supergradient,
        }
    }

    /// Oracle in the real coordinates (Re v_1, Im v_1, Re v_2, ...).
    pub(crate) fn eval_real(&self, x: &[f64]) -> (f64, Vec<f64>) {
        let e = self.eval(&from_real(x));
        (e.value, to_real(&e.supergradient))
    }
}

pub(crate) fn to_real(v: &[Complex64]) -> Vec<f64> {
    v.iter().flat_map(|z| [z.re, z.im]).collect()
}

pub(crate) fn from_real(x: &[f64]) -> Vec<Complex64> {
    x.chunks_exact(2).map(|c| Complex64::new(c[0], c[1])).collect()
}

fn project_to_ball(v: &mut [Complex64]) {
    let nv = matrix::norm(v);
    if nv > 1.0 {
        for z in v.iter_mut() {
            *z /= nv;
        }
    }
}

/// Deterministic starting point: conj(Tr K_j) normalized, the optimal
/// weights for the maximally mixed input.
fn initial_direction(channel: &KrausChannel) -> Vec<Complex64> {
    let traces: Vec<Complex64> = channel.kraus().iter().map(|k| k.trace().conj()).collect();
    matrix::normalized(&traces)
        .filter(|_| matrix::norm(&traces) > 1e-12)
        .unwrap_or_else(|| {
            let mut e = vec![ZERO; channel.d()];
            e[0] = Complex64::new(1.0, 0.0);
            e
        })
}

/// Projected supergradient ascent on the unit ball with steps c/√k.
/// Returns the better of the best iterate and the step-weighted average.
fn supergradient_ascent(oracle: &CostOracle<'_>, start: Vec<Complex64>, opts: &CostOptions) -> (Vec<Complex64>, f64) {
    let mut v = start;
    let mut best = (v.clone(), oracle.eval(&v).value);
    let mut avg = vec![ZERO; v.len()];
    let mut weight = 0.0;
    for k in 1..=opts.iters {
        let e = oracle.eval(&v);
        if e.value > best.1 {
            best = (v.clone(), e.value);
        }
        let sn = matrix::norm(&e.supergradient);
        if sn == 0.0 {
            break;
        }
        let step = opts.step_c / (k as f64).sqrt();
        for (x, s) in v.iter_mut().zip(&e.supergradient) {
            *x += s * (step / sn);
        }
        project_to_ball(&mut v);
        for (a, x) in avg.iter_mut().zip(&v) {
            *a += x * step;
        }
        weight += step;
    }
    if weight > 0.0 {
        let mean: Vec<Complex64> = avg.iter().map(|a| a / weight).collect();
        let val = oracle.eval(&mean).value;
        if val > best.1 {
            best = (mean, val);
        }
    }
    best
}

/// Alternates v ← conj(c)/‖c‖ at the current minimum eigenvector and
/// ψ ← min eigenvector at the new v, keeping only improving moves.
pub(crate) fn alternating_polish(
    oracle: &CostOracle<'_>,
    mut v: Vec<Complex64>,
    mut value: f64,
) -> (Vec<Complex64>, f64) {
    for _ in 0..POLISH_ROUNDS {
        let e = oracle.eval(&v);
        let Some(next) = matrix::normalized(&e.supergradient) else {
            break;
        };
        let nv = oracle.eval(&next).value;
        if nv > value {
            v = next;
            value = nv;
        } else {
            break;
        }
    }
    (v, value)
}

/// Time-energy cost of a channel: cos‖K‖ = max_{‖v‖=1} λ_min((K_v + K_v†)/2).
///
/// Stages: supergradient ascent on the unit ball, a deep-cut ellipsoid
/// refinement that certifies the ball maximum to `opts.tol`, and an
/// alternating polish. A positive ball maximum lies on the sphere by
/// homogeneity. Otherwise the sphere problem is non-concave and is searched
/// with `opts.restarts` seeded starts; that value is best effort and only
/// max(cos‖K‖, 0) = 0 is certified.
pub fn channel_cost(channel: &KrausChannel, opts: &CostOptions) -> Result<TECostResult> {
    let oracle = CostOracle::new(channel);
    let d = channel.d();

    let (ascent_v, ascent_val) = supergradient_ascent(&oracle, initial_direction(channel), opts);
    let (start_v, start_val) = if ascent_val > 0.0 {
        (ascent_v, ascent_val)
    } else {
        (vec![ZERO; d], 0.0)
    };
    let center = vec![0.0; 2 * d];
    let problem = ellipsoid::Problem {
        center: &center,
        radius: 1.0,
        tol: opts.tol,
        max_iters: 20_000,
    };
    let ell = ellipsoid::maximize(&problem, Some((to_real(&start_v), start_val)), |x| oracle.eval_real(x));
    let ball_v = from_real(&ell.best_x);
    let (ball_v, ball_val) = alternating_polish(&oracle, ball_v, ell.best_value);

    let (optimal_v, regime, converged) = if ball_val > REGIME_TOL {
        let unit = matrix::normalized(&ball_v).expect("positive value implies v != 0");
        (
            unit,
            Regime::Positive,
            ell.upper_bound - ball_val <= opts.tol.max(REGIME_TOL),
        )
    } else {
        let seeds: Vec<Vec<Complex64>> = [matrix::normalized(&ball_v), Some(initial_direction(channel))]
            .into_iter()
            .flatten()
            .collect();
        let found = sphere::search(&oracle, &seeds, opts);
        let regime = if found.value < -REGIME_TOL {
            Regime::NonPositive
        } else {
            Regime::Boundary
        };
        (found.v, regime, ell.converged && found.converged)
    };

    let e = oracle.eval(&optimal_v);
    let cos_value = e.value.clamp(-1.0, 1.0);
    let witness = PureState::normalized(e.psi)?.gauge_fixed();
    Ok(TECostResult {
        cos_value,
        angle: cos_value.acos(),
        certificate_gap: (cos_value - oracle.eval(&optimal_v).value).abs(),
        optimal_v,
        witness,
        converged,
        regime,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::matcore::matrix::{pauli, ComplexMatrix, I, ONE};
    use crate::matcore::random::random_pure_state_with;
    use crate::matcore::random::{random_unitary, seeded_rng};
    use crate::matcore::unitary_from_angles;
    use std::f64::consts::{FRAC_1_SQRT_2, FRAC_PI_4, PI};

    fn bit_flip() -> ComplexMatrix {
        pauli::x().scale(-I)
    }

    fn g(channel: &KrausChannel, v: &[Complex64]) -> f64 {
        CostOracle::new(channel).eval(v).value
    }

    #[test]
    fn unitary_cost_examples() {
        assert_eq!(unitary_cost(&ComplexMatrix::identity(2)).unwrap(), 0.0);
        assert!((unitary_cost(&bit_flip()).unwrap() - FRAC_PI_2).abs() < 1e-14);
        for theta in [0.1, 1.0, 2.5, PI] {
            let u = ComplexMatrix::from_diag(&[ONE, Complex64::from_polar(1.0, -theta)]);
            assert!((unitary_cost(&u).unwrap() - theta).abs() < 1e-12);
        }
    }

    #[test]
    fn unitary_channel_cost_examples() {
        let o = CostOptions::default();
        assert_eq!(unitary_channel_cost(&ComplexMatrix::identity(2), &o).unwrap(), 0.0);
        let u = ComplexMatrix::from_diag(&[ONE, Complex64::from_polar(1.0, -PI / 3.0)]);
        assert!((unitary_channel_cost(&u, &o).unwrap() - PI / 6.0).abs() < 1e-12);
        assert!((unitary_channel_cost(&bit_flip(), &o).unwrap() - FRAC_PI_2).abs() < 1e-12);
    }

    #[test]
    fn identity_channel_cost() {
        let r = channel_cost(&KrausChannel::identity(3).unwrap(), &CostOptions::default()).unwrap();
        assert_eq!(r.angle, 0.0);
        assert_eq!(r.cos_value, 1.0);
        assert_eq!(r.regime, Regime::Positive);
    }

    #[test]
    fn dephasing_cost() {
        let r = channel_cost(&KrausChannel::dephasing(2).unwrap(), &CostOptions::default()).unwrap();
        assert!((r.angle - FRAC_PI_4).abs() < 1e-8, "{}", r.angle);
        assert!((r.cos_value - FRAC_1_SQRT_2).abs() < 1e-9);
        // λ_min(diag(Re v1, Re v2)) on the sphere peaks at v = (1, 1)/√2
        for z in &r.optimal_v {
            assert!((z - Complex64::new(FRAC_1_SQRT_2, 0.0)).norm() < 1e-4);
        }
        assert!(r.converged);
    }

    #[test]
    fn depolarizing_cost_matches_closed_form() {
        for (n, q) in [(2, 0.5), (3, 0.2), (2, 0.0), (4, -0.05)] {
            let r = channel_cost(&KrausChannel::depolarizing(n, q).unwrap(), &CostOptions::default()).unwrap();
            let closed = depolarizing_cost_closed_form(n, q).unwrap();
            assert!((r.angle - closed).abs() < 1e-7, "n={n} q={q}: {} vs {closed}", r.angle);
        }
    }

    #[test]
    fn bit_flip_is_on_the_boundary() {
        let r = channel_cost(&KrausChannel::unitary(&bit_flip()).unwrap(), &CostOptions::default()).unwrap();
        assert_eq!(r.regime, Regime::Boundary);
        assert!((r.angle - FRAC_PI_2).abs() < 1e-8, "{}", r.angle);
        assert!(r.cos_value.max(0.0) < 1e-9);
    }

    #[test]
    fn strongly_rotating_unitary_is_non_positive() {
        // eigenvalues 1, e^{-2πi/3}, e^{-4πi/3} surround the origin
        let v = random_unitary(3, 5);
        let u = unitary_from_angles(&v, &[0.0, 2.0 * PI / 3.0, -2.0 * PI / 3.0]);
        let r = channel_cost(&KrausChannel::unitary(&u).unwrap(), &CostOptions::default()).unwrap();
        assert_eq!(r.regime, Regime::NonPositive);
        // best rotation puts one eigenvalue at −1... max_γ min_j cos(γ − θ_j) = cos(2π/3) = −1/2
        assert!((r.cos_value + 0.5).abs() < 1e-7, "{}", r.cos_value);
    }

    #[test]
    fn certificate_holds_in_positive_regime() {
        let k = KrausChannel::random(3, 3, 2).unwrap();
        let r = channel_cost(&k, &CostOptions::default()).unwrap();
        if r.regime == Regime::Positive {
            assert!((matrix::norm(&r.optimal_v) - 1.0).abs() < 1e-10);
            let h = k.kraus_combination(&r.optimal_v).unwrap().hermitian_part();
            let (lmin, _) = crate::matcore::min_eigenpair(&h).unwrap();
            assert!((lmin - r.cos_value).abs() < 1e-8);
        }
        assert!((r.angle - r.cos_value.acos()).abs() < 1e-12);
        assert!(r.certificate_gap < 1e-12);
    }

    #[test]
    fn g_is_homogeneous_and_concave() {
        let mut rng = seeded_rng(3);
        let k = KrausChannel::random(3, 3, 9).unwrap();
        for _ in 0..50 {
            let v1 = random_pure_state_with(3, &mut rng).into_amplitudes();
            let v2 = random_pure_state_with(3, &mut rng).into_amplitudes();
            let t = 0.37;
            let scaled: Vec<Complex64> = v1.iter().map(|z| z * t).collect();
            assert!((g(&k, &scaled) - t * g(&k, &v1)).abs() < 1e-10);
            let mid: Vec<Complex64> = v1.iter().zip(&v2).map(|(a, b)| (a + b) * 0.5).collect();
            assert!(g(&k, &mid) >= 0.5 * (g(&k, &v1) + g(&k, &v2)) - 1e-10);
        }
    }

    #[test]
    fn energies_from_unitary() {
        let e = hamiltonian_energies_from_unitary(&bit_flip(), 1.0, 1.0).unwrap();
        assert!((e[0] + FRAC_PI_2).abs() < 1e-14 && (e[1] - FRAC_PI_2).abs() < 1e-14);
        let e = hamiltonian_energies_from_unitary(&ComplexMatrix::identity(2), 3.0, 1.0).unwrap();
        assert_eq!(e, vec![0.0, 0.0]);
        let u = ComplexMatrix::from_diag(&[ONE, Complex64::from_polar(1.0, -PI / 4.0)]);
        let e = hamiltonian_energies_from_unitary(&u, 2.0, 1.0).unwrap();
        assert!(e[0].abs() < 1e-15 && (e[1] - PI / 8.0).abs() < 1e-14);
        assert_eq!(
            hamiltonian_energies_from_unitary(&u, 0.0, 1.0),
            Err(Error::NonPositiveTime(0.0))
        );
    }

    #[test]
    fn depolarizing_closed_form_examples() {
        assert_eq!(depolarizing_cost_closed_form(2, 1.0).unwrap(), 0.0);
        let v = depolarizing_cost_closed_form(2, 0.5).unwrap();
        assert!((v - 0.625f64.sqrt().acos()).abs() < 1e-15);
        assert!((v - 0.659_058_2).abs() < 1e-6);
        assert!((depolarizing_cost_closed_form(2, -1.0 / 3.0).unwrap() - FRAC_PI_2).abs() < 1e-7);
        assert!(depolarizing_cost_closed_form(2, -0.4).is_err());
    }
}
