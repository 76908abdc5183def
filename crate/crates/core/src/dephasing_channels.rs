//! Interchangeable dephasing amplitudes (kicked-top echo vs memoryless phase
//! damping) and classification of the classical-correlation dynamics they induce.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::correlations::{theta1, theta2, BellDiagonalParams};
use crate::kicked_top::FidelitySeries;

#[derive(Debug, Error, PartialEq)]
pub enum ChannelError {
    #[error("dephasing rate gamma = {0} must be finite and non-negative")]
    InvalidGamma(f64),
    #[error("kick {n} is beyond the fidelity series (length {len})")]
    OutOfRange { n: usize, len: usize },
    #[error("classical correlation of {0:?} has no sudden change")]
    NotSuddenChange(BellDiagonalParams),
}

/// Source of the dephasing amplitude `f(n)` acting on the probe qubit.
#[derive(Debug, Clone, PartialEq)]
pub enum DephasingSource {
    /// Echo amplitude of a kicked top.
    Qkt(FidelitySeries),
    /// Phase damping with amplitude `e^{−γn}`.
    Markovian { gamma: f64 },
}

impl DephasingSource {
    pub fn markovian(gamma: f64) -> Result<Self, ChannelError> {
        if !gamma.is_finite() || gamma < 0.0 {
            return Err(ChannelError::InvalidGamma(gamma));
        }
        Ok(Self::Markovian { gamma })
    }

    pub fn f(&self, n: usize) -> Result<Complex64, ChannelError> {
        match self {
            Self::Qkt(series) => series.amplitude(n).ok_or(ChannelError::OutOfRange {
                n,
                len: series.len(),
            }),
            Self::Markovian { gamma } => Ok(markovian_amplitude(*gamma, n)),
        }
    }

    /// Amplitudes for `n = 0..=n_max`.
    pub fn amplitudes(&self, n_max: usize) -> Result<Vec<Complex64>, ChannelError> {
        (0..=n_max).map(|n| self.f(n)).collect()
    }
}

/// `e^{−γn}`: real and positive, so the phase vanishes and `F(n) = e^{−2γn}`.
pub fn markovian_amplitude(gamma: f64, n: usize) -> Complex64 {
    Complex64::new((-gamma * n as f64).exp(), 0.0)
}

/// Mean and standard deviation of `F` over `window`, a measure of the residual
/// (finite-J) fluctuations left after the initial decay.
pub fn fluctuation_amplitude(
    series: &FidelitySeries,
    window: std::ops::Range<usize>,
) -> Result<(f64, f64), ChannelError> {
    if window.is_empty() || window.end > series.len() {
        return Err(ChannelError::OutOfRange {
            n: window.end,
            len: series.len(),
        });
    }
    let f = &series.fidelity()[window];
    let mean = f.iter().sum::<f64>() / f.len() as f64;
    let var = f.iter().map(|x| (x - mean).powi(2)).sum::<f64>() / f.len() as f64;
    Ok((mean, var.sqrt()))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum CcDynamicsClass {
    Constant,
    SuddenChange,
    MonotonicDecay,
}

/// Constant when `|c_z| ≥ max(|c_x|, |c_y|)`, monotonic decay when `c_z = 0`,
/// sudden change otherwise.
pub fn classify_cc_dynamics(c: BellDiagonalParams) -> CcDynamicsClass {
    if c.cz.abs() >= c.cx.abs().max(c.cy.abs()) {
        CcDynamicsClass::Constant
    } else if c.cz == 0.0 {
        CcDynamicsClass::MonotonicDecay
    } else {
        CcDynamicsClass::SuddenChange
    }
}

/// A change of the selected θ branch between kicks `index − 1` and `index`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Crossing {
    pub index: usize,
    /// Linearly interpolated crossing time in kicks.
    pub time: f64,
    /// True when the `θ_1` branch is selected after the crossing.
    pub into_theta1: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub enum SuddenChange {
    None,
    Crossed { first: Crossing, all: Vec<Crossing> },
}

impl SuddenChange {
    pub fn first(&self) -> Option<&Crossing> {
        match self {
            Self::None => None,
            Self::Crossed { first, .. } => Some(first),
        }
    }

    pub fn crossings(&self) -> &[Crossing] {
        match self {
            Self::None => &[],
            Self::Crossed { all, .. } => all,
        }
    }
}

/// Locates every kick where the sign of `θ_1 − θ_2(n)` flips, `θ`s evaluated with the
/// source's `F(n)` and `α(n)`. A vanishing difference counts as the `θ_1` side, so an
/// exact tie resolves to the earlier kick.
pub fn sudden_change_time(
    c: BellDiagonalParams,
    source: &DephasingSource,
    n_max: usize,
) -> Result<SuddenChange, ChannelError> {
    if classify_cc_dynamics(c) != CcDynamicsClass::SuddenChange {
        return Err(ChannelError::NotSuddenChange(c));
    }
    let t1 = theta1(c);
    let diffs = source
        .amplitudes(n_max)?
        .into_iter()
        .map(|f| {
            let alpha = crate::kicked_top::principal_arg(f);
            t1 - theta2(c, f.norm_sqr(), alpha)
        })
        .collect::<Vec<_>>();

    let mut all = Vec::new();
    for n in 1..diffs.len() {
        let (prev, cur) = (diffs[n - 1], diffs[n]);
        if (prev >= 0.0) != (cur >= 0.0) {
            all.push(Crossing {
                index: n,
                time: (n - 1) as f64 + prev / (prev - cur),
                into_theta1: cur >= 0.0,
            });
        }
    }
    Ok(match all.first() {
        None => SuddenChange::None,
        Some(&first) => SuddenChange::Crossed { first, all },
    })
}
