//! Pure states, density matrices and the validation predicates shared by
//! the rest of the crate.

use num_complex::Complex64;
use serde::Serialize;

use super::eigen::{hermitian_eigen, EigenDecomposition, DEFAULT_TOL};
use super::matrix::{self, ComplexMatrix, ONE, ZERO};
use crate::error::{Error, Result};

/// Norm tolerance for [`PureState`].
pub const STATE_NORM_TOL: f64 = 1e-10;
/// Tolerance for the density-matrix invariants.
pub const DENSITY_TOL: f64 = 1e-9;

/// Outcome of a validation predicate: the verdict plus the worst violation
/// seen, so callers can report how far off an input was.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Check {
    pub valid: bool,
    /// Largest violation among the tested conditions (0 when valid).
    pub worst: f64,
    pub reason: Option<&'static str>,
}

impl Check {
    fn pass() -> Self {
        Self {
            valid: true,
            worst: 0.0,
            reason: None,
        }
    }

    fn fail(worst: f64, reason: &'static str) -> Self {
        Self {
            valid: false,
            worst,
            reason: Some(reason),
        }
    }
}

pub fn validate_unitary(u: &ComplexMatrix, tol: f64) -> Check {
    if !u.is_square() {
        return Check::fail(f64::INFINITY, "not square");
    }
    let dev = u.unitary_deviation();
    if dev <= tol {
        Check::pass()
    } else {
        Check::fail(dev, "U^dag U differs from identity")
    }
}

pub fn validate_psd(a: &ComplexMatrix, tol: f64) -> Check {
    if !a.is_square() {
        return Check::fail(f64::INFINITY, "not square");
    }
    let dev = a.hermitian_deviation();
    if dev > tol {
        return Check::fail(dev, "not Hermitian");
    }
    match hermitian_eigen(a, tol) {
        Ok(e) if e.eigenvalues[0] >= -tol => Check::pass(),
        Ok(e) => Check::fail(-e.eigenvalues[0], "negative eigenvalue"),
        Err(_) => Check::fail(f64::INFINITY, "eigensolver failed"),
    }
}

/// Hermitian, PSD (eigenvalues ≥ −tol) and unit trace within `tol`.
pub fn validate_density(rho: &ComplexMatrix, tol: f64) -> Check {
    let psd = validate_psd(rho, tol);
    if !psd.valid {
        return psd;
    }
    let trace_err = (rho.trace() - ONE).norm();
    if trace_err > tol {
        return Check::fail(trace_err, "trace differs from 1");
    }
    Check::pass()
}

/// A unit vector in C^dim.
#[derive(Debug, Clone, PartialEq)]
pub struct PureState {
    amplitudes: Vec<Complex64>,
}

impl PureState {
    /// Accepts amplitudes whose norm is 1 within 1e-10.
    pub fn new(amplitudes: Vec<Complex64>) -> Result<Self> {
        let n = matrix::norm(&amplitudes);
        if amplitudes.is_empty() || (n - 1.0).abs() > STATE_NORM_TOL {
            return Err(Error::NotUnitVector(n));
        }
        Ok(Self { amplitudes })
    }

    /// Rescales arbitrary nonzero amplitudes to unit norm.
    pub fn normalized(amplitudes: Vec<Complex64>) -> Result<Self> {
        matrix::normalized(&amplitudes)
            .filter(|v| !v.is_empty())
            .map(|amplitudes| Self { amplitudes })
            .ok_or(Error::NotUnitVector(matrix::norm(&amplitudes)))
    }

    pub fn basis(dim: usize, index: usize) -> Self {
        let mut amplitudes = vec![ZERO; dim];
        amplitudes[index] = ONE;
        Self { amplitudes }
    }

    pub fn dim(&self) -> usize {
        self.amplitudes.len()
    }

    pub fn amplitudes(&self) -> &[Complex64] {
        &self.amplitudes
    }

    pub fn into_amplitudes(self) -> Vec<Complex64> {
        self.amplitudes
    }

    /// ⟨self|other⟩
    pub fn overlap(&self, other: &Self) -> Result<Complex64> {
        if self.dim() != other.dim() {
            return Err(Error::DimensionMismatch {
                expected: self.dim(),
                found: other.dim(),
            });
        }
        Ok(matrix::inner(&self.amplitudes, &other.amplitudes))
    }

    pub fn projector(&self) -> ComplexMatrix {
        ComplexMatrix::outer(&self.amplitudes, &self.amplitudes)
    }

    /// Copy with the first non-negligible amplitude made real positive.
    pub fn gauge_fixed(&self) -> Self {
        let mut amplitudes = self.amplitudes.clone();
        matrix::fix_phase(&mut amplitudes, 1e-12);
        Self { amplitudes }
    }
}

/// A validated density matrix.
#[derive(Debug, Clone, PartialEq)]
pub struct DensityMatrix {
    matrix: ComplexMatrix,
}

impl DensityMatrix {
    pub fn new(matrix: ComplexMatrix) -> Result<Self> {
        Self::with_tolerance(matrix, DENSITY_TOL)
    }

    pub fn with_tolerance(matrix: ComplexMatrix, tol: f64) -> Result<Self> {
        let check = validate_density(&matrix, tol);
        if !check.valid {
            return Err(Error::InvalidDensity(format!(
                "{} (violation {:e})",
                check.reason.unwrap_or("invalid"),
                check.worst
            )));
        }
        Ok(Self {
            matrix: matrix.hermitian_part(),
        })
    }

    /// For matrices that are density operators by construction; only the
    /// Hermitian part is kept.
    pub(crate) fn from_trusted(matrix: ComplexMatrix) -> Self {
        Self {
            matrix: matrix.hermitian_part(),
        }
    }

    pub fn from_pure(psi: &PureState) -> Self {
        Self {
            matrix: psi.projector(),
        }
    }

    pub fn maximally_mixed(n: usize) -> Self {
        Self {
            matrix: ComplexMatrix::identity(n).scale_real(1.0 / n as f64),
        }
    }

    pub fn dim(&self) -> usize {
        self.matrix.rows()
    }

    pub fn matrix(&self) -> &ComplexMatrix {
        &self.matrix
    }

    pub fn eigen(&self) -> EigenDecomposition {
        hermitian_eigen(&self.matrix, f64::INFINITY).expect("density matrices are Hermitian")
    }

    pub fn purity(&self) -> f64 {
        self.matrix.as_slice().iter().map(Complex64::norm_sqr).sum()
    }

    /// Tr(ρA)
    pub fn expectation(&self, a: &ComplexMatrix) -> Result<Complex64> {
        if a.rows() != self.dim() || a.cols() != self.dim() {
            return Err(Error::DimensionMismatch {
                expected: self.dim(),
                found: a.rows(),
            });
        }
        let n = self.dim();
        let mut s = ZERO;
        for i in 0..n {
            for j in 0..n {
                s += self.matrix[(i, j)] * a[(j, i)];
            }
        }
        Ok(s)
    }

    pub fn is_valid(&self) -> bool {
        validate_density(&self.matrix, DEFAULT_TOL.max(DENSITY_TOL)).valid
    }
}
