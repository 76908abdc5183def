//! Perturbed Floquet operators of the kicked top, kick iteration, and the
//! fidelity-decay amplitude with its revival and decay-profile analysis.

use std::ops::Range;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::linalg::{inner, CMatrix};
use crate::spin_algebra::{SpinOperatorSet, SpinParams, StateVector};

#[derive(Debug, Error, PartialEq)]
pub enum TopError {
    #[error("invalid kicked-top parameter {name} = {value}")]
    InvalidParam { name: &'static str, value: f64 },
    #[error("operator set has dimension {got}, parameters need {expected}")]
    DimensionMismatch { expected: usize, got: usize },
    #[error("fit window {start}..{end} is empty or outside a series of length {len}")]
    BadWindow {
        start: usize,
        end: usize,
        len: usize,
    },
    #[error("fidelity vanishes at kick {0}; logarithmic fit undefined")]
    ZeroFidelity(usize),
}

/// Kicked-top parameters. The kick period is the time unit.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct KickedTopParams {
    pub nu: f64,
    pub eta: f64,
    pub epsilon: f64,
    pub spin: SpinParams,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Regime {
    Regular,
    Mixed,
    Chaotic,
}

impl KickedTopParams {
    pub fn new(nu: f64, eta: f64, epsilon: f64, spin: SpinParams) -> Result<Self, TopError> {
        if !nu.is_finite() {
            return Err(TopError::InvalidParam {
                name: "nu",
                value: nu,
            });
        }
        if !eta.is_finite() || eta < 0.0 {
            return Err(TopError::InvalidParam {
                name: "eta",
                value: eta,
            });
        }
        if !epsilon.is_finite() || epsilon < 0.0 {
            return Err(TopError::InvalidParam {
                name: "epsilon",
                value: epsilon,
            });
        }
        Ok(Self {
            nu,
            eta,
            epsilon,
            spin,
        })
    }

    /// Chaoticity label of the classical top at `ν = π/2`: regular for `η ≤ 2.5`,
    /// chaotic for `η ≥ 3`.
    pub fn regime(&self) -> Regime {
        if self.eta <= 2.5 {
            Regime::Regular
        } else if self.eta >= 3.0 {
            Regime::Chaotic
        } else {
            Regime::Mixed
        }
    }
}

/// Eigenbranch `σ_z^B = ±1` of the probe qubit, or the bare top.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Branch {
    Plus,
    Minus,
    Unperturbed,
}

impl Branch {
    fn sign(self) -> f64 {
        match self {
            Branch::Plus => 1.0,
            Branch::Minus => -1.0,
            Branch::Unperturbed => 0.0,
        }
    }
}

/// `exp[−i(ν + sε)J_x] · exp[−i(η/2J)J_z²]`, precession applied after the kick.
pub fn build_floquet(
    params: &KickedTopParams,
    ops: &SpinOperatorSet,
    branch: Branch,
) -> Result<CMatrix, TopError> {
    if ops.params() != params.spin {
        return Err(TopError::DimensionMismatch {
            expected: params.spin.dim(),
            got: ops.dim(),
        });
    }
    let spin = params.spin;
    let strength = params.eta / (2.0 * spin.j());
    let kick: Vec<Complex64> = (0..spin.dim())
        .map(|k| {
            let m = spin.m(k);
            Complex64::from_polar(1.0, -strength * m * m)
        })
        .collect();

    let mut u = ops.exp_jx(params.nu + branch.sign() * params.epsilon);
    let n = u.dim();
    for r in 0..n {
        for (c, k) in kick.iter().enumerate() {
            u[(r, c)] *= k;
        }
    }
    Ok(u)
}

/// `Uⁿ ψ₀` by repeated matrix–vector application.
pub fn evolve(u: &CMatrix, psi0: &StateVector, n: usize) -> StateVector {
    let mut cur = psi0.amplitudes().to_vec();
    let mut next = vec![Complex64::new(0.0, 0.0); cur.len()];
    for _ in 0..n {
        u.matvec_into(&cur, &mut next);
        std::mem::swap(&mut cur, &mut next);
    }
    StateVector::from_unitary_image(cur)
}

/// Per-kick echo amplitudes `f_n` for `n = 0..=n_max`.
#[derive(Debug, Clone, PartialEq)]
pub struct FidelitySeries {
    f: Vec<Complex64>,
    /// Coupling that produced the series, when known.
    epsilon: Option<f64>,
}

impl FidelitySeries {
    pub fn from_amplitudes(f: Vec<Complex64>, epsilon: Option<f64>) -> Self {
        Self { f, epsilon }
    }

    /// Series with the given fidelities and zero phase, for synthetic profiles.
    pub fn from_fidelities(fidelity: &[f64]) -> Self {
        Self {
            f: fidelity
                .iter()
                .map(|&x| Complex64::new(x.max(0.0).sqrt(), 0.0))
                .collect(),
            epsilon: None,
        }
    }

    pub fn amplitudes(&self) -> &[Complex64] {
        &self.f
    }

    pub fn amplitude(&self, n: usize) -> Option<Complex64> {
        self.f.get(n).copied()
    }

    pub fn epsilon(&self) -> Option<f64> {
        self.epsilon
    }

    pub fn len(&self) -> usize {
        self.f.len()
    }

    pub fn is_empty(&self) -> bool {
        self.f.is_empty()
    }

    /// `F_n = |f_n|²`.
    pub fn fidelity(&self) -> Vec<f64> {
        self.f.iter().map(|z| z.norm_sqr()).collect()
    }

    /// Principal phase `α_n = arg f_n ∈ (−π, π]`.
    pub fn alpha(&self) -> Vec<f64> {
        self.f.iter().map(|z| principal_arg(*z)).collect()
    }

    /// Phase made continuous by removing `2π` jumps between consecutive kicks.
    pub fn alpha_unwrapped(&self) -> Vec<f64> {
        let mut out = Vec::with_capacity(self.f.len());
        let mut offset = 0.0;
        let mut prev: Option<f64> = None;
        for a in self.alpha() {
            if let Some(p) = prev {
                let jump = a - p;
                if jump > std::f64::consts::PI {
                    offset -= std::f64::consts::TAU;
                } else if jump < -std::f64::consts::PI {
                    offset += std::f64::consts::TAU;
                }
            }
            prev = Some(a);
            out.push(a + offset);
        }
        out
    }
}

/// `arg z` mapped into `(−π, π]`; `atan2` can return `−π` for a negative-zero
/// imaginary part.
pub fn principal_arg(z: Complex64) -> f64 {
    let a = z.im.atan2(z.re);
    if a <= -std::f64::consts::PI {
        a + std::f64::consts::TAU
    } else {
        a
    }
}

/// `⟨U_aⁿψ₀ | U_bⁿψ₀⟩` for `n = 0..=n_max` by co-evolving two vectors.
pub fn echo_amplitudes(
    u_bra: &CMatrix,
    u_ket: &CMatrix,
    psi0: &StateVector,
    n_max: usize,
) -> Vec<Complex64> {
    let dim = psi0.dim();
    let mut bra = psi0.amplitudes().to_vec();
    let mut ket = bra.clone();
    let mut scratch = vec![Complex64::new(0.0, 0.0); dim];
    let mut f = Vec::with_capacity(n_max + 1);
    f.push(Complex64::new(1.0, 0.0));
    for _ in 0..n_max {
        u_bra.matvec_into(&bra, &mut scratch);
        std::mem::swap(&mut bra, &mut scratch);
        u_ket.matvec_into(&ket, &mut scratch);
        std::mem::swap(&mut ket, &mut scratch);
        f.push(inner(&bra, &ket));
    }
    f
}

/// `f_n = ⟨ψ₀|(U_+†)ⁿ(U_−)ⁿ|ψ₀⟩` for `n = 0..=n_max`.
pub fn fidelity_series(
    params: &KickedTopParams,
    ops: &SpinOperatorSet,
    psi0: &StateVector,
    n_max: usize,
) -> Result<FidelitySeries, TopError> {
    let plus = build_floquet(params, ops, Branch::Plus)?;
    let minus = build_floquet(params, ops, Branch::Minus)?;
    Ok(FidelitySeries {
        f: echo_amplitudes(&plus, &minus, psi0, n_max),
        epsilon: Some(params.epsilon),
    })
}

/// Default threshold separating revivals from chaotic fluctuations.
pub const DEFAULT_REVIVAL_THRESHOLD: f64 = 0.5;
/// Half-width of the neighborhood over which a revival must be a maximum.
pub const REVIVAL_NEIGHBORHOOD: usize = 5;

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RevivalReport {
    pub revival_times: Vec<usize>,
    pub revival_peaks: Vec<f64>,
    /// Mean gap between consecutive revivals, in kicks.
    pub estimated_period: Option<f64>,
    /// `estimated_period × ε`, the constant in `τ = k/ε`.
    pub k_estimate: Option<f64>,
}

/// Local maxima of `F_n` at or above `threshold`, excluding `n = 0` and the last kick.
///
/// A kick is a maximum when it strictly exceeds the preceding kicks and is not
/// exceeded by the following kicks within the neighborhood, so flat plateaus
/// yield at most their first point and constant series yield nothing.
pub fn detect_revivals(series: &FidelitySeries, threshold: f64) -> RevivalReport {
    let fid = series.fidelity();
    let len = fid.len();
    let mut times = Vec::new();
    let mut peaks = Vec::new();
    if len >= 3 {
        for n in 1..len - 1 {
            let value = fid[n];
            if value < threshold {
                continue;
            }
            let lo = n.saturating_sub(REVIVAL_NEIGHBORHOOD);
            let hi = (n + REVIVAL_NEIGHBORHOOD).min(len - 1);
            let left_ok = fid[lo..n].iter().all(|&x| value > x);
            let right_ok = fid[n + 1..=hi].iter().all(|&x| value >= x);
            if left_ok && right_ok {
                times.push(n);
                peaks.push(value);
            }
        }
    }
    let estimated_period = (times.len() >= 2)
        .then(|| (times[times.len() - 1] - times[0]) as f64 / (times.len() - 1) as f64);
    let k_estimate = estimated_period.zip(series.epsilon).map(|(p, e)| p * e);
    RevivalReport {
        revival_times: times,
        revival_peaks: peaks,
        estimated_period,
        k_estimate,
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum DecayModel {
    Gaussian,
    Exponential,
}

/// Which profile(s) `fit_decay` should fit.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum FitRequest {
    Only(DecayModel),
    /// Fit both profiles and keep the one with the lower residual.
    Best,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct DecayFit {
    pub model: DecayModel,
    pub rate: f64,
    pub window: Range<usize>,
    /// RMS error of the fit on `ln F`.
    pub residual: f64,
}

/// `1..n` where `n` is the first kick with `F < e^{−2}` (or the series end).
pub fn default_fit_window(series: &FidelitySeries) -> Range<usize> {
    let cutoff = (-2.0f64).exp();
    let fid = series.fidelity();
    let end = fid
        .iter()
        .enumerate()
        .skip(1)
        .find(|(_, &x)| x < cutoff)
        .map(|(n, _)| n)
        .unwrap_or(fid.len());
    1..end
}

/// Least-squares fit of `ln F_n ≈ −rate · n` (exponential) or `−rate · n²` (Gaussian)
/// over `window`.
pub fn fit_decay(
    series: &FidelitySeries,
    window: Range<usize>,
    request: FitRequest,
) -> Result<DecayFit, TopError> {
    let len = series.len();
    if window.start >= window.end || window.end > len {
        return Err(TopError::BadWindow {
            start: window.start,
            end: window.end,
            len,
        });
    }
    let fid = series.fidelity();
    let mut log_f = Vec::with_capacity(window.len());
    for n in window.clone() {
        if fid[n] <= 0.0 {
            return Err(TopError::ZeroFidelity(n));
        }
        log_f.push(fid[n].ln());
    }

    let fit_one = |model: DecayModel| -> DecayFit {
        let xs: Vec<f64> = window
            .clone()
            .map(|n| match model {
                DecayModel::Exponential => n as f64,
                DecayModel::Gaussian => (n as f64) * (n as f64),
            })
            .collect();
        let sxx: f64 = xs.iter().map(|x| x * x).sum();
        let sxy: f64 = xs.iter().zip(&log_f).map(|(x, y)| x * y).sum();
        let rate = if sxx > 0.0 { -sxy / sxx } else { 0.0 };
        let sse: f64 = xs
            .iter()
            .zip(&log_f)
            .map(|(x, y)| (y + rate * x).powi(2))
            .sum();
        DecayFit {
            model,
            rate,
            window: window.clone(),
            residual: (sse / xs.len() as f64).sqrt(),
        }
    };

    Ok(match request {
        FitRequest::Only(model) => fit_one(model),
        FitRequest::Best => {
            let g = fit_one(DecayModel::Gaussian);
            let e = fit_one(DecayModel::Exponential);
            if e.residual < g.residual {
                e
            } else {
                g
            }
        }
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::spin_algebra::build_spin_operators;

    fn half_spin_top(nu: f64, eta: f64, eps: f64) -> (KickedTopParams, SpinOperatorSet) {
        let spin = SpinParams::new(0.5).unwrap();
        (
            KickedTopParams::new(nu, eta, eps, spin).unwrap(),
            build_spin_operators(spin).unwrap(),
        )
    }

    #[test]
    fn params_validation() {
        let spin = SpinParams::new(1.0).unwrap();
        assert!(KickedTopParams::new(1.0, -0.1, 0.0, spin).is_err());
        assert!(KickedTopParams::new(1.0, 0.1, -1e-3, spin).is_err());
        assert!(KickedTopParams::new(f64::INFINITY, 0.1, 0.0, spin).is_err());
        let p = KickedTopParams::new(1.0, 20.0, 0.001, spin).unwrap();
        assert_eq!(p.regime(), Regime::Chaotic);
        assert_eq!(KickedTopParams { eta: 0.1, ..p }.regime(), Regime::Regular);
        assert_eq!(KickedTopParams { eta: 2.7, ..p }.regime(), Regime::Mixed);
    }

    #[test]
    fn zero_coupling_branches_are_identical() {
        let spin = SpinParams::new(3.0).unwrap();
        let ops = build_spin_operators(spin).unwrap();
        let p = KickedTopParams::new(1.3, 4.0, 0.0, spin).unwrap();
        let plus = build_floquet(&p, &ops, Branch::Plus).unwrap();
        let minus = build_floquet(&p, &ops, Branch::Minus).unwrap();
        assert_eq!(plus, minus);
    }

    #[test]
    fn spin_half_floquet_closed_form() {
        let (nu, eps) = (0.7, 0.05);
        let (p, ops) = half_spin_top(nu, 0.0, eps);
        for (branch, angle) in [(Branch::Plus, nu + eps), (Branch::Minus, nu - eps)] {
            let u = build_floquet(&p, &ops, branch).unwrap();
            let (c, s) = ((angle / 2.0).cos(), (angle / 2.0).sin());
            let want = CMatrix::from_row_major(
                2,
                vec![
                    Complex64::new(c, 0.0),
                    Complex64::new(0.0, -s),
                    Complex64::new(0.0, -s),
                    Complex64::new(c, 0.0),
                ],
            );
            assert!(u.max_abs_diff(&want) < 1e-14);
        }
    }

    #[test]
    fn mismatched_operators_rejected() {
        let (p, _) = half_spin_top(0.7, 1.0, 0.01);
        let other = build_spin_operators(SpinParams::new(1.0).unwrap()).unwrap();
        assert_eq!(
            build_floquet(&p, &other, Branch::Plus).unwrap_err(),
            TopError::DimensionMismatch {
                expected: 2,
                got: 3
            }
        );
    }

    #[test]
    fn evolve_composition() {
        let spin = SpinParams::new(2.0).unwrap();
        let ops = build_spin_operators(spin).unwrap();
        let p = KickedTopParams::new(1.1, 3.0, 0.02, spin).unwrap();
        let u = build_floquet(&p, &ops, Branch::Plus).unwrap();
        let psi = StateVector::highest_weight(ops.dim());
        assert_eq!(evolve(&u, &psi, 0), psi);
        let twice = evolve(&u, &evolve(&u, &psi, 1), 1);
        let direct = evolve(&u, &psi, 2);
        assert_eq!(twice, direct);
        let id = CMatrix::identity(ops.dim());
        assert_eq!(evolve(&id, &psi, 17), psi);
    }

    #[test]
    fn zero_coupling_gives_unit_amplitude() {
        let spin = SpinParams::new(5.0).unwrap();
        let ops = build_spin_operators(spin).unwrap();
        let p = KickedTopParams::new(1.0, 6.0, 0.0, spin).unwrap();
        let psi = crate::spin_algebra::spin_coherent_state(
            &ops,
            crate::spin_algebra::SpinCoherentAngles::new(0.8, 1.9).unwrap(),
        );
        let series = fidelity_series(&p, &ops, &psi, 50).unwrap();
        for (n, f) in series.amplitudes().iter().enumerate() {
            assert!((f - Complex64::new(1.0, 0.0)).norm() < 1e-12, "n = {n}");
        }
        assert!(series.alpha().iter().all(|a| a.abs() < 1e-12));
    }

    #[test]
    fn principal_arg_range() {
        assert_eq!(
            principal_arg(Complex64::new(-1.0, -0.0)),
            std::f64::consts::PI
        );
        assert_eq!(
            principal_arg(Complex64::new(-1.0, 0.0)),
            std::f64::consts::PI
        );
        assert_eq!(principal_arg(Complex64::new(1.0, 0.0)), 0.0);
    }

    #[test]
    fn unwrapped_phase_is_continuous() {
        let f: Vec<Complex64> = (0..200)
            .map(|n| Complex64::from_polar(1.0, 0.1 * n as f64))
            .collect();
        let series = FidelitySeries::from_amplitudes(f, None);
        let un = series.alpha_unwrapped();
        for (n, a) in un.iter().enumerate() {
            assert!((a - 0.1 * n as f64).abs() < 1e-9);
        }
    }

    #[test]
    fn constant_series_has_no_revivals() {
        let series = FidelitySeries::from_fidelities(&[1.0; 100]);
        let report = detect_revivals(&series, 0.5);
        assert!(report.revival_times.is_empty());
        assert_eq!(report.estimated_period, None);
    }

    #[test]
    fn periodic_bumps_give_period() {
        let fid: Vec<f64> = (0..2600)
            .map(|n| {
                let x = (n % 500) as f64;
                (-x * x / 1e4).exp()
            })
            .collect();
        let series = FidelitySeries::from_fidelities(&fid);
        let report = detect_revivals(&series, 0.5);
        assert_eq!(report.revival_times, vec![500, 1000, 1500, 2000, 2500]);
        assert!((report.estimated_period.unwrap() - 500.0).abs() <= 1.0);
        assert_eq!(report.k_estimate, None);
    }

    #[test]
    fn gaussian_and_exponential_fits() {
        let g: Vec<f64> = (0..40).map(|n| (-0.01 * (n * n) as f64).exp()).collect();
        let series = FidelitySeries::from_fidelities(&g);
        let fit = fit_decay(&series, 1..40, FitRequest::Only(DecayModel::Gaussian)).unwrap();
        assert!((fit.rate - 0.01).abs() < 1e-6);
        assert!(fit.residual < 1e-10);
        assert_eq!(
            fit_decay(&series, 1..40, FitRequest::Best).unwrap().model,
            DecayModel::Gaussian
        );

        let e: Vec<f64> = (0..200).map(|n| (-0.02 * n as f64).exp()).collect();
        let series = FidelitySeries::from_fidelities(&e);
        let fit = fit_decay(&series, 1..200, FitRequest::Only(DecayModel::Exponential)).unwrap();
        assert!((fit.rate - 0.02).abs() < 1e-6);
        assert_eq!(
            fit_decay(&series, 1..200, FitRequest::Best).unwrap().model,
            DecayModel::Exponential
        );
    }

    #[test]
    fn fit_errors() {
        let series = FidelitySeries::from_fidelities(&[1.0, 0.5, 0.0, 0.2]);
        assert_eq!(
            fit_decay(&series, 1..4, FitRequest::Best).unwrap_err(),
            TopError::ZeroFidelity(2)
        );
        assert!(matches!(
            fit_decay(&series, 2..2, FitRequest::Best),
            Err(TopError::BadWindow { .. })
        ));
        assert!(matches!(
            fit_decay(&series, 1..9, FitRequest::Best),
            Err(TopError::BadWindow { .. })
        ));
    }

    #[test]
    fn default_window_stops_below_cutoff() {
        let fid: Vec<f64> = (0..100).map(|n| (-0.1 * n as f64).exp()).collect();
        let series = FidelitySeries::from_fidelities(&fid);
        // e^{−0.1 n} < e^{−2} first at n = 21.
        assert_eq!(default_fit_window(&series), 1..21);
    }
}
