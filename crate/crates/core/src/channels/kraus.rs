use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::matcore::matrix::{self, ComplexMatrix, ONE, ZERO};
use crate::matcore::random::{random_isometry_with, seeded_rng};
use crate::matcore::state::{validate_unitary, DensityMatrix, STATE_NORM_TOL};
use crate::matcore::{hermitian_eigen, DEFAULT_TOL};

/// Eigenvalues of a Choi matrix below this are dropped when extracting
/// Kraus operators.
const CHOI_RANK_CUTOFF: f64 = 1e-12;

/// A trace-preserving channel on C^n given by d Kraus operators.
#[derive(Debug, Clone, PartialEq)]
pub struct KrausChannel {
    n: usize,
    kraus: Vec<ComplexMatrix>,
}

/// max |Σ_j K_j†K_j − I|
pub fn completeness_residual(kraus: &[ComplexMatrix]) -> f64 {
    let Some(first) = kraus.first() else {
        return f64::INFINITY;
    };
    let n = first.cols();
    let mut sum = ComplexMatrix::zeros(n, n);
    for k in kraus {
        if k.rows() != n || k.cols() != n {
            return f64::INFINITY;
        }
        sum = &sum + &(&k.adjoint() * k);
    }
    (&sum - &ComplexMatrix::identity(n)).max_abs()
}

impl KrausChannel {
    /// Validates trace preservation at 1e-9·n.
    pub fn new(kraus: Vec<ComplexMatrix>) -> Result<Self> {
        let n = kraus.first().map_or(0, ComplexMatrix::rows);
        Self::with_tolerance(kraus, 1e-9 * n as f64)
    }

    /// Validates trace preservation at an explicit tolerance. An infinite
    /// tolerance accepts any square, equally sized operator set.
    pub fn with_tolerance(kraus: Vec<ComplexMatrix>, tol: f64) -> Result<Self> {
        let first = kraus.first().ok_or(Error::EmptyChannel)?;
        let n = first.ensure_square()?;
        if n < 2 {
            return Err(Error::EmptyChannel);
        }
        for k in &kraus {
            let m = k.ensure_square()?;
            if m != n {
                return Err(Error::DimensionMismatch { expected: n, found: m });
            }
        }
        let residual = completeness_residual(&kraus);
        if !(residual <= tol) && tol.is_finite() {
            return Err(Error::InvalidChannel { residual, tol });
        }
        Ok(Self { n, kraus })
    }

    /// System dimension.
    pub fn n(&self) -> usize {
        self.n
    }

    /// Number of Kraus operators.
    pub fn d(&self) -> usize {
        self.kraus.len()
    }

    pub fn kraus(&self) -> &[ComplexMatrix] {
        &self.kraus
    }

    pub fn completeness_residual(&self) -> f64 {
        completeness_residual(&self.kraus)
    }

    pub fn identity(n: usize) -> Result<Self> {
        Self::new(vec![ComplexMatrix::identity(n)])
    }

    /// ρ ↦ UρU†
    pub fn unitary(u: &ComplexMatrix) -> Result<Self> {
        let check = validate_unitary(u, DEFAULT_TOL);
        if !check.valid {
            return Err(Error::NotUnitary(check.worst));
        }
        Self::new(vec![u.clone()])
    }

    /// Complete dephasing in the computational basis, K_j = |j⟩⟨j|.
    pub fn dephasing(n: usize) -> Result<Self> {
        let kraus = (0..n)
            .map(|j| {
                let mut k = ComplexMatrix::zeros(n, n);
                k[(j, j)] = ONE;
                k
            })
            .collect();
        Self::new(kraus)
    }

    /// ρ ↦ qρ + (1 − q)I/n for −1/(n² − 1) ≤ q ≤ 1.
    ///
    /// For q ≥ 0 the Kraus set is the scaled Weyl (shift-and-clock) basis;
    /// for negative q it is read off the eigendecomposition of the Choi
    /// matrix qΦ + (1 − q)I/n².
    pub fn depolarizing(n: usize, q: f64) -> Result<Self> {
        check_depolarizing_range(n, q)?;
        if q >= 0.0 {
            let mut kraus = Vec::with_capacity(n * n);
            let w0 = (q + (1.0 - q) / (n * n) as f64).sqrt();
            let w = ((1.0 - q) / (n * n) as f64).sqrt();
            for a in 0..n {
                for b in 0..n {
                    if a == 0 && b == 0 {
                        kraus.push(ComplexMatrix::identity(n).scale_real(w0));
                    } else if w > 0.0 {
                        kraus.push(weyl(n, a, b).scale_real(w));
                    }
                }
            }
            Self::new(kraus)
        } else {
            let nn = n * n;
            let omega = maximally_entangled_projector(n);
            let choi = &omega.scale_real(q) + &ComplexMatrix::identity(nn).scale_real((1.0 - q) / nn as f64);
            Self::from_choi(&choi, n)
        }
    }

    /// Channel whose Kraus operators are the n×n blocks of a Haar-random
    /// isometry C^n → C^{nd}.
    pub fn random(n: usize, d: usize, seed: u64) -> Result<Self> {
        if d == 0 {
            return Err(Error::EmptyChannel);
        }
        let v = random_isometry_with(n * d, n, &mut seeded_rng(seed));
        let kraus = (0..d)
            .map(|j| {
                let mut k = ComplexMatrix::zeros(n, n);
                for r in 0..n {
                    for c in 0..n {
                        k[(r, c)] = v[(j * n + r, c)];
                    }
                }
                k
            })
            .collect();
        Self::new(kraus)
    }

    /// Kraus operators from a Choi matrix J = (I ⊗ K)(|Ω⟩⟨Ω|), with
    /// |Ω⟩ = Σ_i |ii⟩/√n and the A (reference) index first.
    pub fn from_choi(choi: &ComplexMatrix, n: usize) -> Result<Self> {
        let nn = choi.ensure_square()?;
        if nn != n * n {
            return Err(Error::DimensionMismatch {
                expected: n * n,
                found: nn,
            });
        }
        let eig = hermitian_eigen(choi, DEFAULT_TOL * choi.max_abs().max(1.0))?;
        let mut kraus = Vec::new();
        for (k, &mu) in eig.eigenvalues.iter().enumerate().rev() {
            if mu < -1e-9 {
                return Err(Error::InvalidChannel {
                    residual: -mu,
                    tol: 1e-9,
                });
            }
            if mu <= CHOI_RANK_CUTOFF {
                continue;
            }
            let x = eig.vector(k);
            let scale = (n as f64 * mu).sqrt();
            let mut op = ComplexMatrix::zeros(n, n);
            for a in 0..n {
                for b in 0..n {
                    op[(b, a)] = x[a * n + b] * scale;
                }
            }
            kraus.push(op);
        }
        Self::new(kraus)
    }

    /// Σ_j K_j ρ K_j†
    pub fn apply(&self, rho: &DensityMatrix) -> Result<DensityMatrix> {
        self.check_dim(rho.dim())?;
        let mut out = ComplexMatrix::zeros(self.n, self.n);
        for k in &self.kraus {
            out = &out + &(&(k * rho.matrix()) * &k.adjoint());
        }
        Ok(DensityMatrix::from_trusted(out))
    }

    /// (I ⊗ K)(|Ω⟩⟨Ω|) on C^n ⊗ C^n, reference system first.
    pub fn choi_matrix(&self) -> DensityMatrix {
        let n = self.n;
        let inv_sqrt = 1.0 / (n as f64).sqrt();
        let mut choi = ComplexMatrix::zeros(n * n, n * n);
        for k in &self.kraus {
            let mut vec = vec![ZERO; n * n];
            for a in 0..n {
                for b in 0..n {
                    vec[a * n + b] = k[(b, a)] * inv_sqrt;
                }
            }
            choi = &choi + &ComplexMatrix::outer(&vec, &vec);
        }
        DensityMatrix::from_trusted(choi)
    }

    /// max-entry distance between Choi matrices; the channel-equality test.
    pub fn choi_distance(&self, other: &Self) -> f64 {
        if self.n != other.n {
            return f64::INFINITY;
        }
        self.choi_matrix().matrix().distance_max(other.choi_matrix().matrix())
    }

    /// K_v = Σ_j v_j K_j for a unit vector v ∈ C^d.
    pub fn kraus_combination(&self, v: &[Complex64]) -> Result<ComplexMatrix> {
        if v.len() != self.d() {
            return Err(Error::DimensionMismatch {
                expected: self.d(),
                found: v.len(),
            });
        }
        let nv = matrix::norm(v);
        if (nv - 1.0).abs() > STATE_NORM_TOL {
            return Err(Error::NotUnitVector(nv));
        }
        Ok(self.combination_unchecked(v))
    }

    /// Σ_j v_j K_j for any coefficient vector of length d.
    pub(crate) fn combination_unchecked(&self, v: &[Complex64]) -> ComplexMatrix {
        let mut out = ComplexMatrix::zeros(self.n, self.n);
        for (k, &c) in self.kraus.iter().zip(v) {
            if c != ZERO {
                out = &out + &k.scale(c);
            }
        }
        out
    }

    pub(crate) fn check_dim(&self, dim: usize) -> Result<()> {
        if dim == self.n {
            Ok(())
        } else {
            Err(Error::DimensionMismatch {
                expected: self.n,
                found: dim,
            })
        }
    }
}

fn check_depolarizing_range(n: usize, q: f64) -> Result<()> {
    if n < 2 {
        return Err(Error::UnsupportedDimension(n));
    }
    let min = depolarizing_min_q(n);
    // tolerate representation error at the CP boundary, e.g. q = -1.0/3.0
    if !(q >= min - 1e-14 && q <= 1.0) {
        return Err(Error::OutOfRange {
            name: "q",
            value: q,
            min,
            max: 1.0,
        });
    }
    Ok(())
}

/// Smallest q for which the depolarizing map is completely positive.
pub fn depolarizing_min_q(n: usize) -> f64 {
    -1.0 / ((n * n) as f64 - 1.0)
}

/// X^a Z^b with X|j⟩ = |j+1⟩ and Z|j⟩ = ω^j|j⟩.
pub fn weyl(n: usize, a: usize, b: usize) -> ComplexMatrix {
    let mut w = ComplexMatrix::zeros(n, n);
    for j in 0..n {
        let phase = 2.0 * std::f64::consts::PI * ((b * j) % n) as f64 / n as f64;
        w[((j + a) % n, j)] = Complex64::from_polar(1.0, phase);
    }
    w
}

/// |Ω⟩⟨Ω| with |Ω⟩ = Σ_i |ii⟩/√n.
pub fn maximally_entangled_projector(n: usize) -> ComplexMatrix {
    let mut omega = vec![ZERO; n * n];
    for i in 0..n {
        omega[i * n + i] = Complex64::new(1.0 / (n as f64).sqrt(), 0.0);
    }
    ComplexMatrix::outer(&omega, &omega)
}
