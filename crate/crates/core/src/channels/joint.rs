use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::matcore::matrix::{self, ComplexMatrix, ZERO};
use crate::matcore::state::{DensityMatrix, PureState, STATE_NORM_TOL};

/// Eigenvalues below this are treated as zero when purifying.
pub const PURIFY_RANK_CUTOFF: f64 = 1e-12;

/// Pure state on C^dimA ⊗ C^dimB, amplitude of |a⟩|b⟩ at index a·dimB + b.
#[derive(Debug, Clone, PartialEq)]
pub struct JointPureState {
    dim_a: usize,
    dim_b: usize,
    amplitudes: Vec<Complex64>,
}

impl JointPureState {
    pub fn new(dim_a: usize, dim_b: usize, amplitudes: Vec<Complex64>) -> Result<Self> {
        if amplitudes.len() != dim_a * dim_b || dim_a == 0 || dim_b == 0 {
            return Err(Error::DimensionMismatch {
                expected: dim_a * dim_b,
                found: amplitudes.len(),
            });
        }
        let n = matrix::norm(&amplitudes);
        if (n - 1.0).abs() > STATE_NORM_TOL {
            return Err(Error::NotUnitVector(n));
        }
        Ok(Self {
            dim_a,
            dim_b,
            amplitudes,
        })
    }

    pub(crate) fn normalized(dim_a: usize, dim_b: usize, amplitudes: &[Complex64]) -> Result<Self> {
        let v = matrix::normalized(amplitudes).ok_or(Error::NotUnitVector(0.0))?;
        Self::new(dim_a, dim_b, v)
    }

    /// Σ_i |ii⟩/√n
    pub fn maximally_entangled(n: usize) -> Result<Self> {
        if n < 2 {
            return Err(Error::UnsupportedDimension(n));
        }
        let mut amps = vec![ZERO; n * n];
        let c = Complex64::new(1.0 / (n as f64).sqrt(), 0.0);
        for i in 0..n {
            amps[i * n + i] = c;
        }
        Self::new(n, n, amps)
    }

    /// |a⟩ ⊗ |b⟩
    pub fn product(a: &PureState, b: &PureState) -> Self {
        let mut amps = Vec::with_capacity(a.dim() * b.dim());
        for x in a.amplitudes() {
            for y in b.amplitudes() {
                amps.push(x * y);
            }
        }
        Self {
            dim_a: a.dim(),
            dim_b: b.dim(),
            amplitudes: amps,
        }
    }

    /// Spectral purification Σ_k √p_k |k⟩_A|e_k⟩_B with ancilla dimension
    /// equal to the numerical rank of ρ.
    pub fn purify(rho: &DensityMatrix) -> Self {
        let eig = rho.eigen();
        let n = rho.dim();
        let mut kept: Vec<usize> = (0..n).filter(|&k| eig.eigenvalues[k] > PURIFY_RANK_CUTOFF).collect();
        // largest weight first; stable on ties
        kept.sort_by(|&i, &j| eig.eigenvalues[j].total_cmp(&eig.eigenvalues[i]));
        let rank = kept.len().max(1);
        let mut amps = vec![ZERO; rank * n];
        for (a, &k) in kept.iter().enumerate() {
            let w = eig.eigenvalues[k].sqrt();
            for (b, z) in eig.vector(k).into_iter().enumerate() {
                amps[a * n + b] = z * w;
            }
        }
        Self::normalized(rank, n, &amps).expect("a density matrix has positive trace")
    }

    pub fn dim_a(&self) -> usize {
        self.dim_a
    }

    pub fn dim_b(&self) -> usize {
        self.dim_b
    }

    pub fn amplitudes(&self) -> &[Complex64] {
        &self.amplitudes
    }

    pub fn as_pure_state(&self) -> PureState {
        PureState::normalized(self.amplitudes.clone()).expect("unit norm by construction")
    }

    /// Coefficient matrix C with C[a][b] = ⟨ab|Ψ⟩, so ρ_B = (C†C)ᵀ.
    pub fn coefficients(&self) -> ComplexMatrix {
        ComplexMatrix::new(self.dim_a, self.dim_b, self.amplitudes.clone()).expect("shape checked")
    }

    /// Tr_A |Ψ⟩⟨Ψ|
    pub fn reduced_b(&self) -> DensityMatrix {
        let (da, db) = (self.dim_a, self.dim_b);
        let mut rho = ComplexMatrix::zeros(db, db);
        for a in 0..da {
            let row = &self.amplitudes[a * db..(a + 1) * db];
            for b in 0..db {
                for b2 in 0..db {
                    rho[(b, b2)] += row[b] * row[b2].conj();
                }
            }
        }
        DensityMatrix::from_trusted(rho)
    }

    /// Tr_B |Ψ⟩⟨Ψ|
    pub fn reduced_a(&self) -> DensityMatrix {
        let (da, db) = (self.dim_a, self.dim_b);
        let mut rho = ComplexMatrix::zeros(da, da);
        for a in 0..da {
            for a2 in 0..da {
                let mut s = ZERO;
                for b in 0..db {
                    s += self.amplitudes[a * db + b] * self.amplitudes[a2 * db + b].conj();
                }
                rho[(a, a2)] = s;
            }
        }
        DensityMatrix::from_trusted(rho)
    }

    pub fn projector(&self) -> ComplexMatrix {
        ComplexMatrix::outer(&self.amplitudes, &self.amplitudes)
    }

    pub fn gauge_fixed(&self) -> Self {
        let mut amplitudes = self.amplitudes.clone();
        matrix::fix_phase(&mut amplitudes, 1e-12);
        Self { amplitudes, ..*self }
    }
}
