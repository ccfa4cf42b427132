//! Independent F_min oracle: exhaustive grid search for qubits, seeded
//! random search for n = 3, 4.

use num_complex::Complex64;

use super::random_density_probe;
use crate::channels::KrausChannel;
use crate::error::{Error, Result};
use crate::matcore::matrix::pauli;
use crate::matcore::random::seeded_rng;

const MIN_RANDOM_SAMPLES: usize = 100_000;
const ORACLE_SEED: u64 = 0x005E_ED0F_F1DE;

/// Upper bound on F_min by direct search over input states.
///
/// For n = 2 the reduced input is a point r·u of the Bloch ball. The polar
/// and azimuthal angles of u run over a `resolution`×`resolution` grid; along
/// each direction F_e² is a convex quadratic in r ∈ [0, 1] and is minimized
/// exactly. For n = 3, 4 the minimum is taken over max(resolution², 10⁵)
/// seeded random reduced states of every rank.
pub fn fmin_bruteforce(channel: &KrausChannel, resolution: usize) -> Result<f64> {
    match channel.n() {
        2 => Ok(bloch_grid(channel, resolution.max(2))),
        3 | 4 => {
            let samples = (resolution * resolution).max(MIN_RANDOM_SAMPLES);
            random_density_probe(channel, samples, &mut seeded_rng(ORACLE_SEED))
        }
        n => Err(Error::UnsupportedDimension(n)),
    }
}

fn bloch_grid(channel: &KrausChannel, resolution: usize) -> f64 {
    let (sx, sy, sz) = (pauli::x(), pauli::y(), pauli::z());
    // Tr(K σ) for each Kraus operator and Pauli, and Tr(K)/2
    let half = 0.5;
    let traces: Vec<(Complex64, [Complex64; 3])> = channel
        .kraus()
        .iter()
        .map(|k| {
            (
                k.trace() * half,
                [
                    (k * &sx).trace() * half,
                    (k * &sy).trace() * half,
                    (k * &sz).trace() * half,
                ],
            )
        })
        .collect();

    let mut best = f64::INFINITY;
    for i in 0..resolution {
        let theta = std::f64::consts::PI * i as f64 / (resolution - 1) as f64;
        for j in 0..resolution {
            let phi = 2.0 * std::f64::consts::PI * j as f64 / resolution as f64;
            let u = [theta.sin() * phi.cos(), theta.sin() * phi.sin(), theta.cos()];
            // c_i(r) = α_i + r β_i,  f(r) = A + 2rB + r²C
            let (mut a, mut b, mut c) = (0.0, 0.0, 0.0);
            for (alpha, t) in &traces {
                let beta = t[0] * u[0] + t[1] * u[1] + t[2] * u[2];
                a += alpha.norm_sqr();
                b += (alpha.conj() * beta).re;
                c += beta.norm_sqr();
            }
            let r = if c > 0.0 { (-b / c).clamp(0.0, 1.0) } else { 0.0 };
            let f = a + 2.0 * r * b + r * r * c;
            best = best.min(f.max(0.0));
        }
    }
    best.sqrt()
}
