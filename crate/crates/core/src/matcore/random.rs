//! Seeded random ensembles.
//!
//! Every generator here is a [`ChaCha8Rng`]. A `(seed, stream)` pair selects
//! an independent keystream, which is how parallel restarts and trials get
//! their own generators: restart `k` of a solver seeded with `s` draws from
//! `stream_rng(s, k)`. [`split_seed`] derives child seeds (SplitMix64) when a
//! whole sub-computation needs its own master seed.

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;

use super::matrix::{self, ComplexMatrix};
use super::state::{DensityMatrix, PureState};

pub type SeededRng = ChaCha8Rng;

pub fn seeded_rng(seed: u64) -> SeededRng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Generator for stream `stream` of master seed `seed`.
pub fn stream_rng(seed: u64, stream: u64) -> SeededRng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(stream);
    rng
}

/// SplitMix64 of `seed + golden·(index + 1)`.
pub fn split_seed(seed: u64, index: u64) -> u64 {
    let mut z = seed.wrapping_add(0x9E37_79B9_7F4A_7C15u64.wrapping_mul(index.wrapping_add(1)));
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

/// Standard complex Gaussian, E|z|² = 1.
pub fn complex_gaussian<R: Rng + ?Sized>(rng: &mut R) -> Complex64 {
    let re: f64 = rng.sample(StandardNormal);
    let im: f64 = rng.sample(StandardNormal);
    Complex64::new(re, im) * std::f64::consts::FRAC_1_SQRT_2
}

pub fn gaussian_vector<R: Rng + ?Sized>(n: usize, rng: &mut R) -> Vec<Complex64> {
    (0..n).map(|_| complex_gaussian(rng)).collect()
}

/// Haar-random isometry C^cols → C^rows (rows ≥ cols): Gram–Schmidt on a
/// complex Gaussian matrix. Gram–Schmidt produces the QR factor whose
/// triangular part has positive real diagonal, which is what makes the
/// result Haar distributed.
pub fn random_isometry_with<R: Rng + ?Sized>(rows: usize, cols: usize, rng: &mut R) -> ComplexMatrix {
    assert!(rows >= cols && cols >= 1, "isometry needs rows >= cols >= 1");
    let mut columns: Vec<Vec<Complex64>> = Vec::with_capacity(cols);
    while columns.len() < cols {
        let mut v = gaussian_vector(rows, rng);
        // two passes of modified Gram–Schmidt keep orthogonality at machine
        // precision
        for _ in 0..2 {
            for q in &columns {
                let r = matrix::inner(q, &v);
                for (x, qi) in v.iter_mut().zip(q) {
                    *x -= r * qi;
                }
            }
        }
        // a rank-deficient draw has probability zero; redraw if it happens
        if let Some(u) = matrix::normalized(&v).filter(|_| matrix::norm(&v) > 1e-8) {
            columns.push(u);
        }
    }
    ComplexMatrix::from_columns(&columns).expect("columns have equal length")
}

pub fn random_unitary_with<R: Rng + ?Sized>(n: usize, rng: &mut R) -> ComplexMatrix {
    random_isometry_with(n, n, rng)
}

/// Haar-random n×n unitary.
pub fn random_unitary(n: usize, seed: u64) -> ComplexMatrix {
    random_unitary_with(n, &mut seeded_rng(seed))
}

pub fn random_isometry(rows: usize, cols: usize, seed: u64) -> ComplexMatrix {
    random_isometry_with(rows, cols, &mut seeded_rng(seed))
}

pub fn random_pure_state_with<R: Rng + ?Sized>(n: usize, rng: &mut R) -> PureState {
    loop {
        if let Ok(s) = PureState::normalized(gaussian_vector(n, rng)) {
            return s;
        }
    }
}

/// Unitarily invariant (Fubini–Study uniform) pure state.
pub fn random_pure_state(n: usize, seed: u64) -> PureState {
    random_pure_state_with(n, &mut seeded_rng(seed))
}

/// ρ = GG†/Tr(GG†) for an n×rank complex Gaussian G (induced measure).
///
/// # Panics
/// If `rank` is zero or exceeds `n`.
pub fn random_density_with<R: Rng + ?Sized>(n: usize, rank: usize, rng: &mut R) -> DensityMatrix {
    assert!(rank >= 1 && rank <= n, "rank must lie in 1..=n");
    let g = ComplexMatrix::new(n, rank, gaussian_vector(n * rank, rng)).expect("finite entries");
    let m = &g * &g.adjoint();
    let tr = m.trace().re;
    DensityMatrix::from_trusted(m.scale_real(1.0 / tr))
}

pub fn random_density(n: usize, rank: usize, seed: u64) -> DensityMatrix {
    random_density_with(n, rank, &mut seeded_rng(seed))
}

/// GUE sample (G + G†)/2.
pub fn random_hermitian(n: usize, seed: u64) -> ComplexMatrix {
    let mut rng = seeded_rng(seed);
    let g = ComplexMatrix::new(n, n, gaussian_vector(n * n, &mut rng)).expect("finite entries");
    g.hermitian_part()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::matcore::state::validate_unitary;

    #[test]
    fn unitary_passes_validation() {
        for seed in 0..10 {
            let u = random_unitary(4, seed);
            assert!(validate_unitary(&u, 1e-10).valid);
        }
    }

    #[test]
    fn density_rank_is_bounded() {
        let rho = random_density(3, 2, 11);
        assert!(rho.is_valid());
        let e = rho.eigen();
        assert!(e.eigenvalues[0].abs() <= 1e-12, "{:?}", e.eigenvalues);
    }

    #[test]
    fn same_seed_is_bitwise_identical() {
        assert_eq!(random_unitary(5, 42), random_unitary(5, 42));
        assert_eq!(random_pure_state(3, 9), random_pure_state(3, 9));
        assert_eq!(random_density(4, 3, 1), random_density(4, 3, 1));
        assert_ne!(random_unitary(5, 42), random_unitary(5, 43));
    }

    #[test]
    fn streams_differ() {
        let a: u64 = stream_rng(1, 0).random();
        let b: u64 = stream_rng(1, 1).random();
        assert_ne!(a, b);
        assert_eq!(a, stream_rng(1, 0).random::<u64>());
        assert_ne!(split_seed(5, 0), split_seed(5, 1));
    }

    #[test]
    fn isometry_columns_are_orthonormal() {
        let v = random_isometry(8, 3, 3);
        let gram = &v.adjoint() * &v;
        assert!(gram.distance_max(&ComplexMatrix::identity(3)) < 1e-13);
    }
}
