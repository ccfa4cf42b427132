//! Time-energy uncertainty calculators: the cost–energy product, fastest
//! evolution and orthogonalization times, the Chau comparison and a
//! Mandelstam–Tamm bound check for a concrete Hamiltonian.

use std::f64::consts::PI;

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::matcore::{hermitian_eigen, ComplexMatrix, DensityMatrix, PureState, DEFAULT_TOL};

/// Chau's constant in t ≥ ħ/(A·ε).
pub const CHAU_A: f64 = 0.724611;
/// Slack on the bound check t·ΔE ≥ ħ·arccos F.
const BOUND_SLACK: f64 = 1e-9;
/// Negative variances down to this are treated as round-off.
const VARIANCE_FLOOR: f64 = -1e-12;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TeurReport {
    pub e_max: f64,
    pub e_min: f64,
    pub time: f64,
    pub hbar: f64,
    /// (e_max − e_min)·time/(2ħ)
    pub cost: f64,
    /// |⟨ψ|exp(−iHt/ħ)|ψ⟩|
    pub fidelity: f64,
    /// Energy standard deviation of ψ.
    pub delta_e: f64,
    /// t·ΔE ≥ ħ·arccos(F) − 1e-9
    pub bound_satisfied: bool,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ChauComparison {
    pub chau_time: f64,
    pub fastest_time: f64,
}

fn check_time(t: f64) -> Result<()> {
    if t > 0.0 {
        Ok(())
    } else {
        Err(Error::NonPositiveTime(t))
    }
}

fn check_strict_interval(e_max: f64, e_min: f64) -> Result<f64> {
    if e_max > e_min {
        Ok(e_max - e_min)
    } else {
        Err(Error::BadInterval { e_max, e_min })
    }
}

/// (e_max − e_min)·t/(2ħ)
pub fn cost_energy_product(e_max: f64, e_min: f64, t: f64, hbar: f64) -> Result<f64> {
    if !(e_max >= e_min) {
        return Err(Error::BadInterval { e_max, e_min });
    }
    check_time(t)?;
    Ok((e_max - e_min) * t / (2.0 * hbar))
}

/// 2ħ·arccos(F)/(e_max − e_min), the time the fastest state needs to reach
/// fidelity F.
pub fn fastest_state_time(fidelity: f64, e_max: f64, e_min: f64, hbar: f64) -> Result<f64> {
    if !(0.0..=1.0).contains(&fidelity) {
        return Err(Error::FidelityOutOfRange(fidelity));
    }
    let spread = check_strict_interval(e_max, e_min)?;
    Ok(2.0 * hbar * fidelity.acos() / spread)
}

/// πħ/(e_max − e_min)
pub fn orthogonalization_time(e_max: f64, e_min: f64, hbar: f64) -> Result<f64> {
    Ok(PI * hbar / check_strict_interval(e_max, e_min)?)
}

/// Chau's bound ħ/(Aε) against the fastest time πħ/(2ε) for the spectrum
/// {−ε, ε}; the latter is always the larger.
pub fn chau_comparison(epsilon: f64, hbar: f64) -> Result<ChauComparison> {
    if !(epsilon > 0.0) {
        return Err(Error::OutOfRange {
            name: "epsilon",
            value: epsilon,
            min: 0.0,
            max: f64::INFINITY,
        });
    }
    let out = ChauComparison {
        chau_time: hbar / (CHAU_A * epsilon),
        fastest_time: PI * hbar / (2.0 * epsilon),
    };
    debug_assert!(out.fastest_time > out.chau_time);
    Ok(out)
}

/// √(Tr(H²ρ) − Tr(Hρ)²)
pub fn energy_spread(h: &ComplexMatrix, rho: &DensityMatrix) -> Result<f64> {
    let dev = h.hermitian_deviation();
    if dev > DEFAULT_TOL * h.max_abs().max(1.0) {
        return Err(Error::NotHermitian(dev));
    }
    let mean = rho.expectation(h)?.re;
    let square = rho.expectation(&(h * h))?.re;
    let variance = square - mean * mean;
    Ok(if (VARIANCE_FLOOR..0.0).contains(&variance) {
        0.0
    } else {
        variance.sqrt()
    })
}

/// Evolves ψ under H for time t and checks t·ΔE ≥ ħ·arccos|⟨ψ|ψ(t)⟩|.
pub fn teur_bound_check(h: &ComplexMatrix, psi: &PureState, t: f64, hbar: f64) -> Result<TeurReport> {
    check_time(t)?;
    let eig = hermitian_eigen(h, DEFAULT_TOL)?;
    if psi.dim() != eig.dim() {
        return Err(Error::DimensionMismatch {
            expected: eig.dim(),
            found: psi.dim(),
        });
    }
    let propagator = eig.map_spectrum(|e| Complex64::from_polar(1.0, -e * t / hbar));
    let fidelity = propagator.expectation(psi.amplitudes()).norm().min(1.0);
    let delta_e = energy_spread(h, &DensityMatrix::from_pure(psi))?;
    let (e_min, e_max) = (eig.eigenvalues[0], eig.eigenvalues[eig.dim() - 1]);
    Ok(TeurReport {
        e_max,
        e_min,
        time: t,
        hbar,
        cost: (e_max - e_min) * t / (2.0 * hbar),
        fidelity,
        delta_e,
        bound_satisfied: t * delta_e >= hbar * fidelity.acos() - BOUND_SLACK,
    })
}

/// arccos|⟨ψ1|ψ2⟩| ∈ [0, π/2]
pub fn bures_angle(psi1: &PureState, psi2: &PureState) -> Result<f64> {
    Ok(psi1.overlap(psi2)?.norm().min(1.0).acos())
}
