//! Dephasing of a two-qubit Bell-diagonal pair by a quantum kicked top: echo
//! (fidelity-decay) amplitudes of the top, closed-form discord, classical
//! correlation and entanglement of the resulting X state, brute-force oracles,
//! and a reproducible scenario runner.

#![allow(clippy::needless_range_loop)]

pub mod correlations;
pub mod dephasing_channels;
pub mod kicked_top;
pub mod linalg;
pub mod runner;
pub mod spin_algebra;

pub use correlations::{BellDiagonalParams, CorrelationRecord, XState};
pub use dephasing_channels::DephasingSource;
pub use kicked_top::{FidelitySeries, KickedTopParams};
pub use spin_algebra::{SpinCoherentAngles, SpinOperatorSet, SpinParams, StateVector};
