//! Kraus-operator channels: validation, application, standard families,
//! Choi matrices, purifications and the channel file format.

pub mod file;
pub mod joint;
pub mod kraus;

pub use file::{parse_channel, parse_channel_lenient, write_channel, ChannelFile, FILE_COMPLETENESS_TOL};
pub use joint::JointPureState;
pub use kraus::{completeness_residual, depolarizing_min_q, weyl, KrausChannel};

pub use crate::matcore::{DensityMatrix, PureState};

use crate::error::Result;
use crate::matcore::ComplexMatrix;

/// Σ_j K_j ρ K_j†
pub fn apply(channel: &KrausChannel, rho: &DensityMatrix) -> Result<DensityMatrix> {
    channel.apply(rho)
}

pub fn unitary_channel(u: &ComplexMatrix) -> Result<KrausChannel> {
    KrausChannel::unitary(u)
}

pub fn random_channel(n: usize, d: usize, seed: u64) -> Result<KrausChannel> {
    KrausChannel::random(n, d, seed)
}

pub fn purify(rho: &DensityMatrix) -> JointPureState {
    JointPureState::purify(rho)
}
