//! Two-qubit X states built from Bell-diagonal correlations and a dephasing
//! amplitude, with closed-form discord, classical correlation, relative entropy
//! of entanglement and concurrence, plus a brute-force discord minimizer.
//!
//! All entropies are in bits with `0 · log 0 = 0`.

use std::f64::consts::{FRAC_PI_2, TAU};

use num_complex::Complex64;
use serde::{Deserialize, Serialize};
use thiserror::Error;

/// Eigenvalues down to this far below zero are floating-point dust and clipped.
pub const NEGATIVE_EIGENVALUE_TOLERANCE: f64 = 1e-10;
/// Clamping a θ by more than this is reported as a formula-domain warning.
pub const THETA_CLAMP_WARN: f64 = 1e-9;

#[derive(Debug, Error, PartialEq)]
pub enum CorrelationError {
    #[error("correlation coefficients ({cx}, {cy}, {cz}) do not describe a physical state")]
    Unphysical { cx: f64, cy: f64, cz: f64 },
    #[error("fidelity amplitude modulus {0} exceeds 1")]
    AmplitudeTooLarge(f64),
    #[error("fidelity F = {0} outside [0, 1]")]
    FidelityOutOfRange(f64),
    #[error("non-finite input: {0}")]
    NotFinite(&'static str),
    #[error("matrix is not a valid X state: {0}")]
    NotXState(&'static str),
}

/// Correlation coefficients `(c_x, c_y, c_z)` of a Bell-diagonal two-qubit state.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct BellDiagonalParams {
    pub cx: f64,
    pub cy: f64,
    pub cz: f64,
}

impl BellDiagonalParams {
    pub const PHYSICALITY_TOLERANCE: f64 = 1e-12;

    pub fn new(cx: f64, cy: f64, cz: f64) -> Result<Self, CorrelationError> {
        if !(cx.is_finite() && cy.is_finite() && cz.is_finite()) {
            return Err(CorrelationError::NotFinite("correlation coefficient"));
        }
        let c = Self { cx, cy, cz };
        let in_range = [cx, cy, cz].iter().all(|v| (-1.0..=1.0).contains(v));
        if !in_range
            || c.bell_weights()
                .iter()
                .any(|&w| w < -Self::PHYSICALITY_TOLERANCE)
        {
            return Err(CorrelationError::Unphysical { cx, cy, cz });
        }
        Ok(c)
    }

    /// Four times the Bell-state weights; all must be non-negative.
    pub fn bell_weights(&self) -> [f64; 4] {
        let Self { cx, cy, cz } = *self;
        [
            1.0 - cx - cy - cz,
            1.0 - cx + cy + cz,
            1.0 + cx - cy + cz,
            1.0 + cx + cy - cz,
        ]
    }
}

/// Two-qubit density matrix in the basis `|00⟩, |01⟩, |10⟩, |11⟩` whose only
/// non-zero entries are on the diagonal and anti-diagonal.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct XState {
    rho: [[Complex64; 4]; 4],
}

const ZERO: Complex64 = Complex64::new(0.0, 0.0);

fn finite(z: Complex64) -> bool {
    z.re.is_finite() && z.im.is_finite()
}

impl XState {
    pub const TOLERANCE: f64 = 1e-12;

    /// Validates an arbitrary 4×4 matrix as an X state.
    pub fn from_matrix(rho: [[Complex64; 4]; 4]) -> Result<Self, CorrelationError> {
        if rho.iter().flatten().any(|z| !finite(*z)) {
            return Err(CorrelationError::NotFinite("density matrix entry"));
        }
        for i in 0..4 {
            for j in 0..4 {
                if i != j && i + j != 3 && rho[i][j].norm() > Self::TOLERANCE {
                    return Err(CorrelationError::NotXState("entry outside the X pattern"));
                }
                if (rho[i][j] - rho[j][i].conj()).norm() > Self::TOLERANCE {
                    return Err(CorrelationError::NotXState("not Hermitian"));
                }
            }
        }
        let trace: f64 = (0..4).map(|i| rho[i][i].re).sum();
        if (trace - 1.0).abs() > Self::TOLERANCE {
            return Err(CorrelationError::NotXState("trace differs from 1"));
        }
        let s = Self { rho };
        if s.eigenvalues()
            .iter()
            .any(|&l| l < -NEGATIVE_EIGENVALUE_TOLERANCE)
        {
            return Err(CorrelationError::NotXState("negative eigenvalue"));
        }
        Ok(s)
    }

    pub fn matrix(&self) -> &[[Complex64; 4]; 4] {
        &self.rho
    }

    /// `(i, j)` entry with zero-based indices.
    pub fn entry(&self, i: usize, j: usize) -> Complex64 {
        self.rho[i][j]
    }

    /// Spectrum from the two 2×2 blocks `{|00⟩, |11⟩}` and `{|01⟩, |10⟩}`.
    pub fn eigenvalues(&self) -> [f64; 4] {
        let block = |a: usize, b: usize| {
            let (p, q) = (self.rho[a][a].re, self.rho[b][b].re);
            let mid = 0.5 * (p + q);
            let rad = (0.25 * (p - q) * (p - q) + self.rho[a][b].norm_sqr()).sqrt();
            (mid + rad, mid - rad)
        };
        let (l1, l2) = block(0, 3);
        let (l3, l4) = block(1, 2);
        [l1, l2, l3, l4]
    }

    /// Diagonal of `ρ_A` (its coherence vanishes for X states).
    pub fn marginal_a(&self) -> [f64; 2] {
        [
            self.rho[0][0].re + self.rho[1][1].re,
            self.rho[2][2].re + self.rho[3][3].re,
        ]
    }

    pub fn marginal_b(&self) -> [f64; 2] {
        [
            self.rho[0][0].re + self.rho[2][2].re,
            self.rho[1][1].re + self.rho[3][3].re,
        ]
    }

    /// Local Bloch vectors `a`, `b` and correlation matrix `T_ij = Tr[ρ σ_i ⊗ σ_j]`.
    pub fn pauli_decomposition(&self) -> ([f64; 3], [f64; 3], [[f64; 3]; 3]) {
        let paulis = pauli_matrices();
        let id = [
            [Complex64::new(1.0, 0.0), ZERO],
            [ZERO, Complex64::new(1.0, 0.0)],
        ];
        let expect = |sa: &[[Complex64; 2]; 2], sb: &[[Complex64; 2]; 2]| -> f64 {
            // Tr[ρ (A ⊗ B)] = Σ ρ_{(ij),(kl)} A_{ki} B_{lj}
            let mut acc = ZERO;
            for i in 0..2 {
                for j in 0..2 {
                    for k in 0..2 {
                        for l in 0..2 {
                            acc += self.rho[2 * i + j][2 * k + l] * sa[k][i] * sb[l][j];
                        }
                    }
                }
            }
            acc.re
        };
        let mut a = [0.0; 3];
        let mut b = [0.0; 3];
        let mut t = [[0.0; 3]; 3];
        for i in 0..3 {
            a[i] = expect(&paulis[i], &id);
            b[i] = expect(&id, &paulis[i]);
            for j in 0..3 {
                t[i][j] = expect(&paulis[i], &paulis[j]);
            }
        }
        (a, b, t)
    }
}

fn pauli_matrices() -> [[[Complex64; 2]; 2]; 3] {
    let one = Complex64::new(1.0, 0.0);
    let i = Complex64::new(0.0, 1.0);
    [
        [[ZERO, one], [one, ZERO]],
        [[ZERO, -i], [i, ZERO]],
        [[one, ZERO], [ZERO, -one]],
    ]
}

/// X state with Bell-diagonal populations and coherences scaled by the amplitude `f`.
pub fn xstate(c: BellDiagonalParams, f: Complex64) -> Result<XState, CorrelationError> {
    if !finite(f) {
        return Err(CorrelationError::NotFinite("fidelity amplitude"));
    }
    if f.norm() > 1.0 + XState::TOLERANCE {
        return Err(CorrelationError::AmplitudeTooLarge(f.norm()));
    }
    let c = BellDiagonalParams::new(c.cx, c.cy, c.cz)?;
    let d_plus = Complex64::new((1.0 + c.cz) / 4.0, 0.0);
    let d_minus = Complex64::new((1.0 - c.cz) / 4.0, 0.0);
    let r14 = f * ((c.cx - c.cy) / 4.0);
    let r23 = f * ((c.cx + c.cy) / 4.0);
    Ok(XState {
        rho: [
            [d_plus, ZERO, ZERO, r14],
            [ZERO, d_minus, r23, ZERO],
            [ZERO, r23.conj(), d_minus, ZERO],
            [r14.conj(), ZERO, ZERO, d_plus],
        ],
    })
}

fn check_fidelity(fidelity: f64) -> Result<(), CorrelationError> {
    if !fidelity.is_finite() {
        return Err(CorrelationError::NotFinite("fidelity"));
    }
    if !(-XState::TOLERANCE..=1.0 + XState::TOLERANCE).contains(&fidelity) {
        return Err(CorrelationError::FidelityOutOfRange(fidelity));
    }
    Ok(())
}

/// `λ_1..λ_4` in the printed order:
/// `[1 + c_z ± |c_x − c_y|√F]/4`, `[1 − c_z ± |c_x + c_y|√F]/4`.
pub fn xstate_eigenvalues(c: BellDiagonalParams, fidelity: f64) -> [f64; 4] {
    let s = fidelity.clamp(0.0, 1.0).sqrt();
    let a = (c.cx - c.cy).abs() * s;
    let b = (c.cx + c.cy).abs() * s;
    [
        (1.0 + c.cz + a) / 4.0,
        (1.0 + c.cz - a) / 4.0,
        (1.0 - c.cz + b) / 4.0,
        (1.0 - c.cz - b) / 4.0,
    ]
}

/// `x log₂ x` with the `0 log 0 = 0` convention; dust below zero counts as zero.
pub fn xlog2x(x: f64) -> f64 {
    if x <= 0.0 {
        0.0
    } else {
        x * x.log2()
    }
}

pub fn binary_entropy(p: f64) -> f64 {
    -xlog2x(p) - xlog2x(1.0 - p)
}

/// `−Σ_k (1 ± θ)/2 log₂ (1 ± θ)/2`.
pub fn theta_entropy(theta: f64) -> f64 {
    binary_entropy((1.0 + theta) / 2.0)
}

pub fn von_neumann_entropy(spectrum: &[f64]) -> f64 {
    -spectrum.iter().map(|&l| xlog2x(l)).sum::<f64>()
}

/// Classical correlation together with the two branch parameters it selects between.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ClassicalCorrelation {
    pub value: f64,
    pub theta1: f64,
    pub theta2: f64,
    /// Largest amount by which θ had to be clamped into `[0, 1]`.
    pub clamp_excess: f64,
}

impl ClassicalCorrelation {
    /// True when the `θ_1` (`c_z`) branch carries the minimum; ties count.
    pub fn theta1_branch(&self) -> bool {
        self.theta1 >= self.theta2
    }
}

/// `θ_1 = |c_z|`.
pub fn theta1(c: BellDiagonalParams) -> f64 {
    c.cz.abs()
}

/// `θ_2 = √([2(c_x² + c_y²) + 2|c_x² − c_y²|(|cos 2α| + |sin 2α|)] F) / 2`, unclamped.
pub fn theta2(c: BellDiagonalParams, fidelity: f64, alpha: f64) -> f64 {
    let (x2, y2) = (c.cx * c.cx, c.cy * c.cy);
    let phase = (2.0 * alpha).cos().abs() + (2.0 * alpha).sin().abs();
    let inner = (2.0 * (x2 + y2) + 2.0 * (x2 - y2).abs() * phase) * fidelity.max(0.0);
    inner.sqrt() / 2.0
}

pub fn classical_correlation_detail(
    c: BellDiagonalParams,
    fidelity: f64,
    alpha: f64,
) -> Result<ClassicalCorrelation, CorrelationError> {
    check_fidelity(fidelity)?;
    if !alpha.is_finite() {
        return Err(CorrelationError::NotFinite("alpha"));
    }
    let raw = [theta1(c), theta2(c, fidelity, alpha)];
    let clamped = raw.map(|t| t.clamp(0.0, 1.0));
    let clamp_excess = raw
        .iter()
        .zip(&clamped)
        .map(|(r, k)| (r - k).abs())
        .fold(0.0, f64::max);
    if clamp_excess > THETA_CLAMP_WARN {
        log::warn!(
            "theta clamped into [0, 1] by {clamp_excess:.3e} (c = {c:?}, F = {fidelity}, alpha = {alpha})"
        );
    }
    let h1 = theta_entropy(clamped[0]);
    let h2 = theta_entropy(clamped[1]);
    Ok(ClassicalCorrelation {
        value: 1.0 - h1.min(h2),
        theta1: clamped[0],
        theta2: clamped[1],
        clamp_excess,
    })
}

/// `C = 1 − min[H(θ_1), H(θ_2)]` in bits.
pub fn classical_correlation(
    c: BellDiagonalParams,
    fidelity: f64,
    alpha: f64,
) -> Result<f64, CorrelationError> {
    classical_correlation_detail(c, fidelity, alpha).map(|cc| cc.value)
}

/// `2 + Σ λ_i log₂ λ_i`, the mutual information of the X state (both marginals are
/// maximally mixed).
pub fn closed_form_mutual_information(c: BellDiagonalParams, fidelity: f64) -> f64 {
    2.0 + xstate_eigenvalues(c, fidelity)
        .iter()
        .map(|&l| xlog2x(l))
        .sum::<f64>()
}

/// `Q = 2 + Σ λ_i log₂ λ_i − C`.
pub fn quantum_discord(
    c: BellDiagonalParams,
    fidelity: f64,
    alpha: f64,
) -> Result<f64, CorrelationError> {
    let cc = classical_correlation(c, fidelity, alpha)?;
    Ok(closed_form_mutual_information(c, fidelity) - cc)
}

/// `S(ρ_A) + S(ρ_B) − S(ρ_AB)` in bits.
pub fn mutual_information(s: &XState) -> f64 {
    von_neumann_entropy(&s.marginal_a()) + von_neumann_entropy(&s.marginal_b())
        - von_neumann_entropy(&s.eigenvalues())
}

/// `E = 1 + β′ log₂ β′ + (1 − β′) log₂(1 − β′)` with `β′ = max(½, λ_max)`.
pub fn ree(c: BellDiagonalParams, fidelity: f64) -> Result<f64, CorrelationError> {
    check_fidelity(fidelity)?;
    let lambda_max = xstate_eigenvalues(c, fidelity)
        .into_iter()
        .fold(f64::NEG_INFINITY, f64::max);
    let beta = lambda_max.max(0.5);
    Ok(1.0 + xlog2x(beta) + xlog2x(1.0 - beta))
}

/// `2 · max(0, |ρ₂₃| − √(ρ₁₁ρ₄₄), |ρ₁₄| − √(ρ₂₂ρ₃₃))`.
pub fn concurrence(s: &XState) -> f64 {
    let r = &s.rho;
    let diag = |i: usize| r[i][i].re.max(0.0);
    let a = r[1][2].norm() - (diag(0) * diag(3)).sqrt();
    let b = r[0][3].norm() - (diag(1) * diag(2)).sqrt();
    (2.0 * a.max(b).max(0.0)).min(1.0)
}

/// Brute-force discord over projective measurements on qubit B.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct NumericDiscord {
    pub discord: f64,
    pub classical: f64,
    /// Polar angle of the optimal measurement axis on B's Bloch sphere.
    pub theta: f64,
    pub phi: f64,
}

pub const DEFAULT_COARSE_GRID: usize = 64;
pub const DEFAULT_REFINE_ITERS: usize = 40;

/// Minimizes `Σ_j p_j S(ρ_{A|Π_j})` over measurement axes on B: a coarse
/// `grid × grid` scan of the upper half-sphere followed by coordinate descent with
/// step halving. Returns `Q* = I − C*`.
pub fn discord_numeric(s: &XState, coarse_grid: usize, refine_iters: usize) -> NumericDiscord {
    let (a, b, t) = s.pauli_decomposition();
    let conditional = |theta: f64, phi: f64| -> f64 {
        let n = [
            theta.sin() * phi.cos(),
            theta.sin() * phi.sin(),
            theta.cos(),
        ];
        let bn: f64 = (0..3).map(|k| b[k] * n[k]).sum();
        let tn: [f64; 3] = std::array::from_fn(|i| (0..3).map(|j| t[i][j] * n[j]).sum());
        [1.0, -1.0]
            .iter()
            .map(|&sign| {
                let p = 0.5 * (1.0 + sign * bn);
                if p <= 0.0 {
                    return 0.0;
                }
                let r = (0..3)
                    .map(|i| (a[i] + sign * tn[i]) / (1.0 + sign * bn))
                    .map(|x| x * x)
                    .sum::<f64>()
                    .sqrt()
                    .min(1.0);
                p * theta_entropy(r)
            })
            .sum()
    };

    let grid = coarse_grid.max(2);
    let dtheta = FRAC_PI_2 / (grid - 1) as f64;
    let dphi = TAU / grid as f64;
    let mut best = (f64::INFINITY, 0.0, 0.0);
    for i in 0..grid {
        let theta = dtheta * i as f64;
        for k in 0..grid {
            let phi = dphi * k as f64;
            let v = conditional(theta, phi);
            if v < best.0 {
                best = (v, theta, phi);
            }
        }
    }

    let (mut st, mut sp) = (dtheta, dphi);
    for _ in 0..refine_iters {
        let mut improved = false;
        for (dt, dp) in [(st, 0.0), (-st, 0.0), (0.0, sp), (0.0, -sp)] {
            let (theta, phi) = (best.1 + dt, best.2 + dp);
            let v = conditional(theta, phi);
            if v < best.0 {
                best = (v, theta, phi);
                improved = true;
            }
        }
        if !improved {
            st *= 0.5;
            sp *= 0.5;
        }
    }

    // Fold the axis back onto the upper half-sphere with φ in [0, 2π).
    let (mut theta, mut phi) = (best.1, best.2);
    if theta < 0.0 {
        theta = -theta;
        phi += std::f64::consts::PI;
    }
    if theta > std::f64::consts::PI {
        theta = TAU - theta;
        phi += std::f64::consts::PI;
    }
    if theta > FRAC_PI_2 {
        theta = std::f64::consts::PI - theta;
        phi += std::f64::consts::PI;
    }
    phi = phi.rem_euclid(TAU);

    let classical = von_neumann_entropy(&s.marginal_a()) - best.0;
    NumericDiscord {
        discord: mutual_information(s) - classical,
        classical,
        theta,
        phi,
    }
}

/// All correlation measures at one kick.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct CorrelationRecord {
    pub fidelity: f64,
    pub alpha: f64,
    pub lambdas: [f64; 4],
    pub discord: f64,
    pub classical: f64,
    pub mutual_information: f64,
    pub ree: f64,
    pub concurrence: f64,
    /// θ-clamp excess from the classical-correlation formula (0 when in domain).
    pub clamp_excess: f64,
}

pub fn correlation_record(
    c: BellDiagonalParams,
    f: Complex64,
) -> Result<CorrelationRecord, CorrelationError> {
    let state = xstate(c, f)?;
    let fidelity = f.norm_sqr().min(1.0);
    let alpha = crate::kicked_top::principal_arg(f);
    let cc = classical_correlation_detail(c, fidelity, alpha)?;
    let mi = mutual_information(&state);
    Ok(CorrelationRecord {
        fidelity,
        alpha,
        lambdas: xstate_eigenvalues(c, fidelity),
        discord: mi - cc.value,
        classical: cc.value,
        mutual_information: mi,
        ree: ree(c, fidelity)?,
        concurrence: concurrence(&state),
        clamp_excess: cc.clamp_excess,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn bd(cx: f64, cy: f64, cz: f64) -> BellDiagonalParams {
        BellDiagonalParams::new(cx, cy, cz).unwrap()
    }

    fn one() -> Complex64 {
        Complex64::new(1.0, 0.0)
    }

    #[test]
    fn physicality() {
        assert!(BellDiagonalParams::new(1.0, -1.0, 1.0).is_ok());
        assert!(BellDiagonalParams::new(0.95, -0.85, 0.85).is_ok());
        assert!(BellDiagonalParams::new(1.0, 1.0, 1.0).is_err());
        assert!(BellDiagonalParams::new(1.2, 0.0, 0.0).is_err());
        assert!(BellDiagonalParams::new(f64::NAN, 0.0, 0.0).is_err());
    }

    #[test]
    fn bell_projector() {
        let s = xstate(bd(1.0, -1.0, 1.0), one()).unwrap();
        let h = 0.5;
        for (i, j) in [(0, 0), (0, 3), (3, 0), (3, 3)] {
            assert_eq!(s.entry(i, j), Complex64::new(h, 0.0));
        }
        for (i, j) in [(1, 1), (2, 2), (1, 2), (2, 1)] {
            assert_eq!(s.entry(i, j), ZERO);
        }
        assert!((mutual_information(&s) - 2.0).abs() < 1e-12);
        assert!((concurrence(&s) - 1.0).abs() < 1e-12);
    }

    #[test]
    fn maximally_mixed() {
        let s = xstate(bd(0.0, 0.0, 0.0), Complex64::new(0.3, -0.4)).unwrap();
        for i in 0..4 {
            for j in 0..4 {
                let want = if i == j { 0.25 } else { 0.0 };
                assert_eq!(s.entry(i, j), Complex64::new(want, 0.0));
            }
        }
        assert!(mutual_information(&s).abs() < 1e-12);
        assert_eq!(concurrence(&s), 0.0);
        assert_eq!(xstate_eigenvalues(bd(0.0, 0.0, 0.0), 0.6), [0.25; 4]);
        assert!(quantum_discord(bd(0.0, 0.0, 0.0), 0.6, 0.3).unwrap().abs() < 1e-12);
    }

    #[test]
    fn reference_state_is_physical() {
        let c = bd(0.95, -0.85, 0.85);
        let s = xstate(c, one()).unwrap();
        let min = s.eigenvalues().into_iter().fold(f64::INFINITY, f64::min);
        assert!((min - 0.05 / 4.0).abs() < 1e-15);
    }

    #[test]
    fn xstate_rejects_bad_inputs() {
        let c = BellDiagonalParams {
            cx: 1.0,
            cy: 1.0,
            cz: 1.0,
        };
        assert!(matches!(
            xstate(c, one()),
            Err(CorrelationError::Unphysical { .. })
        ));
        assert!(matches!(
            xstate(bd(0.1, 0.1, 0.1), Complex64::new(1.1, 0.0)),
            Err(CorrelationError::AmplitudeTooLarge(_))
        ));
        assert!(xstate(bd(0.1, 0.1, 0.1), Complex64::new(f64::NAN, 0.0)).is_err());
    }

    #[test]
    fn eigenvalues_of_pure_bell() {
        assert_eq!(
            xstate_eigenvalues(bd(1.0, -1.0, 1.0), 1.0),
            [1.0, 0.0, 0.0, 0.0]
        );
    }

    #[test]
    fn pure_bell_correlations() {
        let c = bd(1.0, -1.0, 1.0);
        assert!((classical_correlation(c, 1.0, 0.0).unwrap() - 1.0).abs() < 1e-15);
        assert!((quantum_discord(c, 1.0, 0.0).unwrap() - 1.0).abs() < 1e-15);
        assert!((ree(c, 1.0).unwrap() - 1.0).abs() < 1e-15);
    }

    #[test]
    fn theta2_reduces_for_real_or_imaginary_amplitude() {
        let c = bd(0.6, -0.3, 0.2);
        for alpha in [0.0, FRAC_PI_2, std::f64::consts::PI, -FRAC_PI_2] {
            for f in [0.0, 0.3, 1.0] {
                let want = f64::sqrt(f) * 0.6;
                assert!((theta2(c, f, alpha) - want).abs() < 1e-15);
            }
        }
    }

    #[test]
    fn cz_only_state() {
        let want = 1.0 - binary_entropy(0.925);
        for (f, a) in [(1.0, 0.0), (0.4, 1.0), (0.0, -2.0)] {
            let cc = classical_correlation(bd(0.0, 0.0, 0.85), f, a).unwrap();
            assert!((cc - want).abs() < 1e-15);
        }
    }

    #[test]
    fn ree_vanishes_below_half() {
        // λ_max = (1 + 0.2 + 0.1)/4 < 1/2
        assert_eq!(ree(bd(0.1, 0.0, 0.2), 1.0).unwrap(), 0.0);
    }

    #[test]
    fn nan_rejected() {
        assert!(classical_correlation(bd(0.1, 0.1, 0.1), f64::NAN, 0.0).is_err());
        assert!(classical_correlation(bd(0.1, 0.1, 0.1), 0.5, f64::NAN).is_err());
        assert!(ree(bd(0.1, 0.1, 0.1), 1.5).is_err());
    }

    #[test]
    fn clamping_is_reported() {
        // α = π/8 maximizes |cos 2α| + |sin 2α| = √2.
        let cc = classical_correlation_detail(bd(1.0, 0.0, 0.0), 1.0, std::f64::consts::FRAC_PI_8)
            .unwrap();
        assert!(cc.clamp_excess > THETA_CLAMP_WARN);
        assert_eq!(cc.theta2, 1.0);
        assert_eq!(cc.value, 1.0);
    }

    #[test]
    fn numeric_discord_bell_and_classical_quantum() {
        let bell = xstate(bd(1.0, -1.0, 1.0), one()).unwrap();
        let nd = discord_numeric(&bell, DEFAULT_COARSE_GRID, DEFAULT_REFINE_ITERS);
        assert!((nd.discord - 1.0).abs() < 2e-3);

        let cq = xstate(bd(0.0, 0.0, 0.5), one()).unwrap();
        let nd = discord_numeric(&cq, DEFAULT_COARSE_GRID, DEFAULT_REFINE_ITERS);
        assert!(nd.discord.abs() < 2e-3);
        assert!((0.0..=FRAC_PI_2).contains(&nd.theta));
        assert!((0.0..TAU).contains(&nd.phi));
    }

    #[test]
    fn from_matrix_validation() {
        let good = *xstate(bd(0.5, -0.2, 0.1), Complex64::new(0.0, 0.7))
            .unwrap()
            .matrix();
        assert!(XState::from_matrix(good).is_ok());
        let mut bad = good;
        bad[0][1] = Complex64::new(0.1, 0.0);
        bad[1][0] = Complex64::new(0.1, 0.0);
        assert!(XState::from_matrix(bad).is_err());
        let mut bad = good;
        bad[0][3] = Complex64::new(0.1, 0.0);
        assert!(XState::from_matrix(bad).is_err());
        let mut bad = good;
        bad[0][0] += Complex64::new(0.1, 0.0);
        assert!(XState::from_matrix(bad).is_err());
    }

    #[test]
    fn pauli_decomposition_of_bell_diagonal() {
        let s = xstate(bd(0.5, -0.2, 0.1), one()).unwrap();
        let (a, b, t) = s.pauli_decomposition();
        assert!(a.iter().chain(&b).all(|x| x.abs() < 1e-15));
        let want = [[0.5, 0.0, 0.0], [0.0, -0.2, 0.0], [0.0, 0.0, 0.1]];
        for i in 0..3 {
            for j in 0..3 {
                assert!((t[i][j] - want[i][j]).abs() < 1e-15);
            }
        }
    }
}
