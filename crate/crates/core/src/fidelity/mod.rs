//! Entanglement fidelity of a channel, its optimal weight vector, the
//! minimum-entanglement-fidelity solver and a brute-force oracle for it.

mod bruteforce;
mod descent;

pub use bruteforce::fmin_bruteforce;
pub use descent::{fmin_descent, squared_fidelity_and_gradient, FidelityResult, FminOptions};

use num_complex::Complex64;
use rand::Rng;

use crate::channels::{JointPureState, KrausChannel};
use crate::error::{Error, Result};
use crate::matcore::matrix::{self, ComplexMatrix, ZERO};
use crate::matcore::random::{random_pure_state_with, seeded_rng};
use crate::matcore::{hermitian_eigen, DensityMatrix};

/// Overshoot above 1 that is silently clamped.
const CLAMP_SLACK: f64 = 1e-12;
/// Below this, Σ|Tr(ρK_i)|² is treated as zero and w is undefined.
const ZERO_FIDELITY_FLOOR: f64 = 1e-14;
/// Relative gap under which extreme eigenvalues count as one flat edge.
const EDGE_CLUSTER_RTOL: f64 = 1e-6;

fn kraus_traces(rho: &DensityMatrix, channel: &KrausChannel) -> Result<Vec<Complex64>> {
    channel.check_dim(rho.dim())?;
    channel.kraus().iter().map(|k| rho.expectation(k)).collect()
}

fn clamp_fidelity(f: f64) -> f64 {
    if f > 1.0 && f <= 1.0 + CLAMP_SLACK {
        1.0
    } else {
        f
    }
}

/// F_e(ρ, K) = √(Σ_i |Tr(ρK_i)|²)
pub fn entanglement_fidelity(rho: &DensityMatrix, channel: &KrausChannel) -> Result<f64> {
    let c = kraus_traces(rho, channel)?;
    Ok(clamp_fidelity(matrix::norm(&c)))
}

/// Fidelity between |Ψ⟩⟨Ψ| and (I ⊗ K)(|Ψ⟩⟨Ψ|), evaluated by building the
/// output state on A ⊗ B explicitly.
pub fn entanglement_fidelity_direct(psi: &JointPureState, channel: &KrausChannel) -> Result<f64> {
    channel.check_dim(psi.dim_b())?;
    let (da, db) = (psi.dim_a(), psi.dim_b());
    let amps = psi.amplitudes();
    let mut out = ComplexMatrix::zeros(da * db, da * db);
    for k in channel.kraus() {
        let mut phi = vec![ZERO; da * db];
        for a in 0..da {
            let row = k.mul_vec(&amps[a * db..(a + 1) * db]);
            phi[a * db..(a + 1) * db].copy_from_slice(&row);
        }
        out = &out + &ComplexMatrix::outer(&phi, &phi);
    }
    let overlap = out.expectation(amps).re.max(0.0);
    Ok(clamp_fidelity(overlap.sqrt()))
}

/// The unit w maximizing |Σ_i w_i Tr(ρK_i)|: w_i = conj(Tr(ρK_i)) / F_e.
pub fn optimal_w(rho: &DensityMatrix, channel: &KrausChannel) -> Result<Vec<Complex64>> {
    let c = kraus_traces(rho, channel)?;
    let norm = matrix::norm(&c);
    if norm < ZERO_FIDELITY_FLOOR {
        return Err(Error::ZeroFidelity);
    }
    Ok(c.iter().map(|z| z.conj() / norm).collect())
}

/// Points of the numerical range W(A): `m` values ⟨ψ|A|ψ⟩ at seeded random
/// ψ, followed by boundary points from the extreme eigenvectors of the
/// Hermitian part of e^{iφ}A at m equally spaced φ ∈ [0, 2π). When an
/// extreme eigenvalue is (nearly) degenerate the boundary has a flat edge,
/// and both of its endpoints are added as well.
pub fn numerical_range_sample(a: &ComplexMatrix, m: usize, seed: u64) -> Result<Vec<Complex64>> {
    let n = a.ensure_square()?;
    let mut rng = seeded_rng(seed);
    let mut points = Vec::with_capacity(3 * m);
    for _ in 0..m {
        let psi = random_pure_state_with(n, &mut rng);
        points.push(a.expectation(psi.amplitudes()));
    }
    let cluster_tol = EDGE_CLUSTER_RTOL * a.max_abs().max(1.0);
    for k in 0..m {
        let phi = 2.0 * std::f64::consts::PI * k as f64 / m as f64;
        let rotated = a.scale(Complex64::from_polar(1.0, phi));
        let eig = hermitian_eigen(&rotated.hermitian_part(), f64::INFINITY)?;
        let lo = eig.eigenvalues[0];
        let hi = eig.eigenvalues[n - 1];
        let low: Vec<usize> = (0..n).take_while(|&i| eig.eigenvalues[i] - lo <= cluster_tol).collect();
        let high: Vec<usize> = (0..n)
            .rev()
            .take_while(|&i| hi - eig.eigenvalues[i] <= cluster_tol)
            .collect();
        for cluster in [low, high] {
            if cluster.len() == 1 {
                points.push(a.expectation(&eig.vector(cluster[0])));
                continue;
            }
            // compress the skew part onto the cluster; its extreme
            // eigenvectors give the ends of the flat edge
            let basis = ComplexMatrix::from_columns(&cluster.iter().map(|&i| eig.vector(i)).collect::<Vec<_>>())?;
            let compressed = &(&basis.adjoint() * &rotated.skew_hermitian_part()) * &basis;
            let inner_eig = hermitian_eigen(&compressed.hermitian_part(), f64::INFINITY)?;
            for j in [0, cluster.len() - 1] {
                points.push(a.expectation(&basis.mul_vec(&inner_eig.vector(j))));
            }
        }
    }
    Ok(points)
}

/// Upper-bound probe of F_min: minimum of the entanglement fidelity over
/// `samples` random reduced states of every rank.
pub(crate) fn random_density_probe<R: Rng>(channel: &KrausChannel, samples: usize, rng: &mut R) -> Result<f64> {
    let n = channel.n();
    let mut best = f64::INFINITY;
    for s in 0..samples {
        let rank = 1 + s % n;
        let psi = random_pure_state_with(rank * n, rng);
        let joint = JointPureState::new(rank, n, psi.into_amplitudes())?;
        best = best.min(entanglement_fidelity(&joint.reduced_b(), channel)?);
    }
    Ok(best)
}
