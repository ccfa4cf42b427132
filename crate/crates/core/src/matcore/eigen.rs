//! Cyclic Jacobi eigensolver for complex Hermitian matrices and the
//! eigen-angle extraction for unitaries built on top of it.

use std::f64::consts::PI;

use num_complex::Complex64;

use super::matrix::{ComplexMatrix, ZERO};
use super::state::PureState;
use crate::error::{Error, Result};

/// Default tolerance used by the validation predicates and decompositions.
pub const DEFAULT_TOL: f64 = 1e-10;

const MAX_SWEEPS: usize = 100;
/// Convergence when the off-diagonal Frobenius mass drops below this
/// fraction of ‖A‖_F.
const OFF_DIAGONAL_RTOL: f64 = 1e-12;
/// Angles this close to −π are reported as +π.
const BRANCH_CUT_TOL: f64 = 1e-12;
/// Eigenvalues of (U + U†)/2 closer than this are treated as one cluster.
const CLUSTER_TOL: f64 = 1e-9;

/// Full spectrum of a Hermitian matrix, eigenvalues ascending and the
/// matching unit eigenvectors stored as columns.
#[derive(Debug, Clone)]
pub struct EigenDecomposition {
    pub eigenvalues: Vec<f64>,
    pub eigenvectors: ComplexMatrix,
}

impl EigenDecomposition {
    pub fn dim(&self) -> usize {
        self.eigenvalues.len()
    }

    pub fn vector(&self, i: usize) -> Vec<Complex64> {
        self.eigenvectors.column(i)
    }

    /// V diag(λ) V†
    pub fn reconstruct(&self) -> ComplexMatrix {
        let d: Vec<Complex64> = self.eigenvalues.iter().map(|&x| Complex64::new(x, 0.0)).collect();
        let v = &self.eigenvectors;
        &(v * &ComplexMatrix::from_diag(&d)) * &v.adjoint()
    }

    /// V diag(f(λ)) V†, used for matrix exponentials of Hermitian operators.
    pub fn map_spectrum(&self, f: impl Fn(f64) -> Complex64) -> ComplexMatrix {
        let d: Vec<Complex64> = self.eigenvalues.iter().map(|&x| f(x)).collect();
        let v = &self.eigenvectors;
        &(v * &ComplexMatrix::from_diag(&d)) * &v.adjoint()
    }
}

/// Eigen-angles θ_j of a unitary, with eigenvalues exp(−iθ_j) and every
/// angle in (−π, π], sorted ascending.
#[derive(Debug, Clone, PartialEq)]
pub struct AngleList(Vec<f64>);

impl AngleList {
    pub fn new(mut angles: Vec<f64>) -> Result<Self> {
        for a in &mut angles {
            *a = wrap_angle(*a);
        }
        angles.sort_by(f64::total_cmp);
        Ok(Self(angles))
    }

    pub fn as_slice(&self) -> &[f64] {
        &self.0
    }

    pub fn max_abs(&self) -> f64 {
        self.0.iter().map(|a| a.abs()).fold(0.0, f64::max)
    }

    pub fn min(&self) -> f64 {
        self.0.first().copied().unwrap_or(0.0)
    }

    pub fn max(&self) -> f64 {
        self.0.last().copied().unwrap_or(0.0)
    }
}

/// Maps any finite angle into (−π, π]; values within 1e-12 of −π land on π.
pub fn wrap_angle(theta: f64) -> f64 {
    let mut t = theta.rem_euclid(2.0 * PI);
    if t > PI {
        t -= 2.0 * PI;
    }
    if t <= -PI + BRANCH_CUT_TOL {
        t = PI;
    }
    t
}

/// Diagonalizes a Hermitian matrix with cyclic complex Jacobi rotations.
///
/// The input must satisfy ‖A − A†‖_max ≤ `tol`; its exact Hermitian part is
/// what gets diagonalized.
pub fn hermitian_eigen(a: &ComplexMatrix, tol: f64) -> Result<EigenDecomposition> {
    let n = a.ensure_square()?;
    let dev = a.hermitian_deviation();
    if dev > tol {
        return Err(Error::NotHermitian(dev));
    }
    let mut w = a.hermitian_part();
    let mut v = ComplexMatrix::identity(n);
    let fro = w.frobenius_norm();

    let mut converged = fro == 0.0 || n == 1;
    for _ in 0..MAX_SWEEPS {
        if converged {
            break;
        }
        if off_diagonal_norm(&w) <= OFF_DIAGONAL_RTOL * fro {
            converged = true;
            break;
        }
        for p in 0..n - 1 {
            for q in p + 1..n {
                rotate(&mut w, &mut v, p, q);
            }
        }
    }
    if !converged && off_diagonal_norm(&w) > OFF_DIAGONAL_RTOL * fro {
        return Err(Error::NoConvergence { sweeps: MAX_SWEEPS });
    }

    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&i, &j| w[(i, i)].re.total_cmp(&w[(j, j)].re).then(i.cmp(&j)));
    let eigenvalues = order.iter().map(|&i| w[(i, i)].re).collect();
    let cols: Vec<Vec<Complex64>> = order.iter().map(|&i| v.column(i)).collect();
    Ok(EigenDecomposition {
        eigenvalues,
        eigenvectors: ComplexMatrix::from_columns(&cols)?,
    })
}

fn off_diagonal_norm(a: &ComplexMatrix) -> f64 {
    let n = a.rows();
    let mut s = 0.0;
    for i in 0..n {
        for j in 0..n {
            if i != j {
                s += a[(i, j)].norm_sqr();
            }
        }
    }
    s.sqrt()
}

/// One Jacobi step zeroing the (p, q) entry: A ← J†AJ, V ← VJ with
/// J = diag(1, e^{−iφ}) · R(c, s) restricted to rows/cols p, q.
fn rotate(a: &mut ComplexMatrix, v: &mut ComplexMatrix, p: usize, q: usize) {
    let apq = a[(p, q)];
    let mag = apq.norm();
    if mag < 1e-300 {
        return;
    }
    let phase = apq / mag;
    let app = a[(p, p)].re;
    let aqq = a[(q, q)].re;
    let theta = (aqq - app) / (2.0 * mag);
    let t = if theta.is_infinite() {
        0.0
    } else {
        let sign = if theta >= 0.0 { 1.0 } else { -1.0 };
        sign / (theta.abs() + (theta * theta + 1.0).sqrt())
    };
    let c = 1.0 / (t * t + 1.0).sqrt();
    let s = t * c;
    let e = phase.conj();
    let j_pp = Complex64::new(c, 0.0);
    let j_pq = Complex64::new(s, 0.0);
    let j_qp = e * (-s);
    let j_qq = e * c;

    let n = a.rows();
    // columns: A ← A J
    for k in 0..n {
        let akp = a[(k, p)];
        let akq = a[(k, q)];
        a[(k, p)] = akp * j_pp + akq * j_qp;
        a[(k, q)] = akp * j_pq + akq * j_qq;
    }
    // rows: A ← J† A
    for k in 0..n {
        let apk = a[(p, k)];
        let aqk = a[(q, k)];
        a[(p, k)] = j_pp.conj() * apk + j_qp.conj() * aqk;
        a[(q, k)] = j_pq.conj() * apk + j_qq.conj() * aqk;
    }
    a[(p, q)] = ZERO;
    a[(q, p)] = ZERO;
    a[(p, p)] = Complex64::new(a[(p, p)].re, 0.0);
    a[(q, q)] = Complex64::new(a[(q, q)].re, 0.0);

    for k in 0..n {
        let vkp = v[(k, p)];
        let vkq = v[(k, q)];
        v[(k, p)] = vkp * j_pp + vkq * j_qp;
        v[(k, q)] = vkp * j_pq + vkq * j_qq;
    }
}

/// Smallest eigenvalue and a unit eigenvector for it.
pub fn min_eigenpair(a: &ComplexMatrix) -> Result<(f64, PureState)> {
    let tol = DEFAULT_TOL * a.max_abs().max(1.0);
    let eig = hermitian_eigen(a, tol)?;
    let psi = PureState::normalized(eig.vector(0))?;
    Ok((eig.eigenvalues[0], psi))
}

/// Eigen-angles of a unitary, θ_j with eigenvalues exp(−iθ_j).
///
/// U is normal, so its eigenvectors diagonalize (U + U†)/2. Clusters of
/// equal eigenvalues there (θ and −θ share a cosine) are split by
/// diagonalizing (U − U†)/(2i) compressed onto the cluster.
pub fn unitary_eigenangles(u: &ComplexMatrix, tol: f64) -> Result<AngleList> {
    let vectors = unitary_eigenvectors(u, tol)?;
    let angles = vectors
        .iter()
        .map(|x| {
            let lambda = u.expectation(x);
            wrap_angle(-lambda.im.atan2(lambda.re))
        })
        .collect();
    AngleList::new(angles)
}

/// An orthonormal eigenbasis of a unitary, returned as a list of vectors.
pub fn unitary_eigenvectors(u: &ComplexMatrix, tol: f64) -> Result<Vec<Vec<Complex64>>> {
    u.ensure_square()?;
    let dev = u.unitary_deviation();
    if dev > tol {
        return Err(Error::NotUnitary(dev));
    }
    let re_part = u.hermitian_part();
    let im_part = u.skew_hermitian_part();
    let eig = hermitian_eigen(&re_part, f64::INFINITY)?;
    let n = eig.dim();

    let mut vectors: Vec<Vec<Complex64>> = (0..n).map(|i| eig.vector(i)).collect();
    let mut start = 0;
    while start < n {
        let mut end = start + 1;
        while end < n && eig.eigenvalues[end] - eig.eigenvalues[end - 1] <= CLUSTER_TOL {
            end += 1;
        }
        if end - start > 1 {
            let basis = ComplexMatrix::from_columns(&vectors[start..end])?;
            let compressed = &(&basis.adjoint() * &im_part) * &basis;
            let sub = hermitian_eigen(&compressed, f64::INFINITY)?;
            let rotated = &basis * &sub.eigenvectors;
            for (k, slot) in vectors[start..end].iter_mut().enumerate() {
                *slot = rotated.column(k);
            }
        }
        start = end;
    }
    Ok(vectors)
}

/// Builds V diag(exp(−iθ_j)) V† from a unitary eigenbasis V and angles θ.
pub fn unitary_from_angles(v: &ComplexMatrix, angles: &[f64]) -> ComplexMatrix {
    let d: Vec<Complex64> = angles.iter().map(|&t| Complex64::from_polar(1.0, -t)).collect();
    &(v * &ComplexMatrix::from_diag(&d)) * &v.adjoint()
}
