//! Time-energy cost and minimum entanglement fidelity of finite-dimensional
//! quantum channels.
//!
//! A channel given by Kraus operators {K_j} has a time-energy cost ‖K‖, the
//! smallest largest-eigen-angle over unitary extensions, computable as
//! arccos max_v λ_min((K_v + K_v†)/2). Its minimum entanglement fidelity
//! F_min is the worst-case overlap between an entangled input and the
//! channel output. The two are tied by F_min = max(cos ‖K‖, 0). This crate
//! computes both sides with unrelated algorithms:
//!
//! - [`tecost::channel_cost`] maximizes the concave function
//!   v ↦ λ_min((K_v + K_v†)/2) over the unit ball,
//! - [`fidelity::fmin_descent`] minimizes the entanglement fidelity over
//!   joint pure input states by Riemannian gradient descent,
//!
//! so the identity can be checked numerically.

// `!(x > 0.0)` style checks are how NaN gets rejected.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod channels;
pub mod error;
pub mod fidelity;
pub mod matcore;
pub mod tecost;

pub use num_complex::Complex64;

pub use channels::{JointPureState, KrausChannel};
pub use error::{Error, Result};
pub use fidelity::{FidelityResult, FminOptions};
pub use matcore::{ComplexMatrix, DensityMatrix, PureState};
pub use tecost::{CostOptions, Regime, TECostResult, TeurReport};
