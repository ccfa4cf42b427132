//! Self-contained dense complex linear algebra: Hermitian eigendecomposition,
//! unitary eigen-angles, validation predicates and seeded random ensembles.

pub mod eigen;
pub mod matrix;
pub mod random;
pub mod state;

pub use eigen::{
    hermitian_eigen, min_eigenpair, unitary_eigenangles, unitary_eigenvectors, unitary_from_angles, wrap_angle,
    AngleList, EigenDecomposition, DEFAULT_TOL,
};
pub use matrix::{pauli, ComplexMatrix};
pub use random::{
    random_density, random_hermitian, random_isometry, random_pure_state, random_unitary, seeded_rng, split_seed,
    stream_rng, SeededRng,
};
pub use state::{validate_density, validate_psd, validate_unitary, Check, DensityMatrix, PureState};
