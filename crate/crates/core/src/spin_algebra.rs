//! Spin-J angular momentum operators, rotations about axes in the x–y plane,
//! and spin coherent states.
//!
//! Basis convention: row `k` of every operator is the `J_z` eigenstate with
//! `m = J − k`, so `|J, J⟩` is the first basis vector.
//!
//! Phase convention for coherent states: `|θ, φ⟩` is exactly
//! `exp[−iθ(J_x sin φ − J_y cos φ)] |J, J⟩` with `|J, J⟩ = (1, 0, …, 0)`. With this
//! sign the mean spin points along `(−sin θ cos φ, −sin θ sin φ, cos θ)` and the
//! amplitudes are `c_m = √C(2J, J+m) · cos^{J+m}(θ/2) · (−e^{iφ} sin(θ/2))^{J−m}`.

use std::f64::consts::{FRAC_PI_2, PI, TAU};

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use thiserror::Error;

use crate::linalg::{self, eig_symmetric_tridiagonal, CMatrix, LinalgError, SymmetricEigen};

/// Largest spin supported by the dense operator representation.
pub const MAX_TWICE_J: u32 = 4096;

#[derive(Debug, Error, PartialEq)]
pub enum SpinError {
    #[error("spin j = {0} is not a positive half-integer")]
    InvalidSpin(f64),
    #[error("spin j = {0} exceeds the supported maximum of 2048")]
    TooLarge(f64),
    #[error("coherent-state angles out of range: theta = {theta}, phi = {phi}")]
    InvalidAngles { theta: f64, phi: f64 },
    #[error("state vector is not normalized (norm = {0})")]
    NotNormalized(f64),
    #[error(transparent)]
    Linalg(#[from] LinalgError),
}

/// Spin quantum number, stored as `2J` so half-integers are exact.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct SpinParams {
    twice_j: u32,
}

impl SpinParams {
    pub fn new(j: f64) -> Result<Self, SpinError> {
        let twice = 2.0 * j;
        if !j.is_finite() || j <= 0.0 || twice.fract() != 0.0 {
            return Err(SpinError::InvalidSpin(j));
        }
        if twice > MAX_TWICE_J as f64 {
            return Err(SpinError::TooLarge(j));
        }
        Ok(Self {
            twice_j: twice as u32,
        })
    }

    pub fn from_twice_j(twice_j: u32) -> Result<Self, SpinError> {
        Self::new(twice_j as f64 / 2.0)
    }

    pub fn j(&self) -> f64 {
        self.twice_j as f64 / 2.0
    }

    pub fn twice_j(&self) -> u32 {
        self.twice_j
    }

    pub fn dim(&self) -> usize {
        self.twice_j as usize + 1
    }

    pub fn is_integer(&self) -> bool {
        self.twice_j.is_multiple_of(2)
    }

    /// `m` quantum number of basis row `k`.
    pub fn m(&self, k: usize) -> f64 {
        self.j() - k as f64
    }
}

/// `J_x`, `J_y`, `J_z` for one spin plus the cached spectral decomposition of `J_x`.
#[derive(Debug, Clone)]
pub struct SpinOperatorSet {
    params: SpinParams,
    /// `(J_x)_{k,k+1}`; `J_x` is zero on the diagonal.
    jx_offdiag: Vec<f64>,
    pub jx: CMatrix,
    pub jy: CMatrix,
    pub jz: CMatrix,
    pub jx_spectrum: SymmetricEigen,
}

impl SpinOperatorSet {
    pub fn params(&self) -> SpinParams {
        self.params
    }

    pub fn dim(&self) -> usize {
        self.params.dim()
    }

    pub fn jx_offdiag(&self) -> &[f64] {
        &self.jx_offdiag
    }

    /// `exp(−i · angle · J_x)` from the cached spectrum.
    pub fn exp_jx(&self, angle: f64) -> CMatrix {
        axis_rotation_unitary(self, FRAC_PI_2, angle)
    }
}

pub fn build_spin_operators(p: SpinParams) -> Result<SpinOperatorSet, SpinError> {
    let n = p.dim();
    let j = p.j();
    let casimir = j * (j + 1.0);

    // (J_+)_{k,k+1} = √(J(J+1) − m(m+1)) with m = m_{k+1}.
    let raise: Vec<f64> = (0..n - 1)
        .map(|k| {
            let m = p.m(k + 1);
            (casimir - m * (m + 1.0)).max(0.0).sqrt()
        })
        .collect();
    let jx_offdiag: Vec<f64> = raise.iter().map(|b| 0.5 * b).collect();

    let mut jx = CMatrix::zeros(n);
    let mut jy = CMatrix::zeros(n);
    let mut jz = CMatrix::zeros(n);
    for k in 0..n {
        jz[(k, k)] = Complex64::new(p.m(k), 0.0);
    }
    for (k, &b) in raise.iter().enumerate() {
        jx[(k, k + 1)] = Complex64::new(0.5 * b, 0.0);
        jx[(k + 1, k)] = Complex64::new(0.5 * b, 0.0);
        jy[(k, k + 1)] = Complex64::new(0.0, -0.5 * b);
        jy[(k + 1, k)] = Complex64::new(0.0, 0.5 * b);
    }

    let jx_spectrum = eig_symmetric_tridiagonal(&vec![0.0; n], &jx_offdiag)?;
    Ok(SpinOperatorSet {
        params: p,
        jx_offdiag,
        jx,
        jy,
        jz,
        jx_spectrum,
    })
}

/// Gauge phases `d_k = e^{−ikψ}`, `ψ = π/2 − φ`, with `J_x sin φ − J_y cos φ = D J_x D†`.
fn gauge(dim: usize, axis_phi: f64) -> Vec<Complex64> {
    let psi = FRAC_PI_2 - axis_phi;
    (0..dim)
        .map(|k| Complex64::from_polar(1.0, -(k as f64) * psi))
        .collect()
}

/// `exp[−i · angle · (J_x sin φ − J_y cos φ)]`.
///
/// The generator is tridiagonal with a constant off-diagonal phase, so a diagonal
/// gauge maps it onto the real symmetric `J_x`, whose spectrum is cached in `ops`.
pub fn axis_rotation_unitary(ops: &SpinOperatorSet, axis_phi: f64, angle: f64) -> CMatrix {
    let n = ops.dim();
    let eig = &ops.jx_spectrum;
    let d = gauge(n, axis_phi);
    let phases: Vec<Complex64> = eig
        .values
        .iter()
        .map(|&l| Complex64::from_polar(1.0, -angle * l))
        .collect();

    let mut out = CMatrix::zeros(n);
    for r in 0..n {
        let vr = &eig.vectors[r * n..(r + 1) * n];
        for c in r..n {
            let vc = &eig.vectors[c * n..(c + 1) * n];
            let s = vr
                .iter()
                .zip(vc)
                .zip(&phases)
                .fold(Complex64::new(0.0, 0.0), |acc, ((a, b), p)| {
                    acc + p * (a * b)
                });
            // The real-symmetric core is symmetric; the gauge makes the result D S D†.
            out[(r, c)] = d[r] * s * d[c].conj();
            if c != r {
                out[(c, r)] = d[c] * s * d[r].conj();
            }
        }
    }
    out
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SpinCoherentAngles {
    theta: f64,
    phi: f64,
}

impl SpinCoherentAngles {
    pub fn new(theta: f64, phi: f64) -> Result<Self, SpinError> {
        if !(0.0..=PI).contains(&theta) || !(0.0..TAU).contains(&phi) {
            return Err(SpinError::InvalidAngles { theta, phi });
        }
        Ok(Self { theta, phi })
    }

    pub fn theta(&self) -> f64 {
        self.theta
    }

    pub fn phi(&self) -> f64 {
        self.phi
    }
}

/// Normalized state of the spin.
#[derive(Debug, Clone, PartialEq)]
pub struct StateVector(Vec<Complex64>);

impl StateVector {
    pub const NORM_TOLERANCE: f64 = 1e-12;

    pub fn new(amplitudes: Vec<Complex64>) -> Result<Self, SpinError> {
        let norm = linalg::norm(&amplitudes);
        if (norm - 1.0).abs() > Self::NORM_TOLERANCE {
            return Err(SpinError::NotNormalized(norm));
        }
        Ok(Self(amplitudes))
    }

    /// Wraps amplitudes produced by a norm-preserving map without re-checking.
    pub(crate) fn from_unitary_image(amplitudes: Vec<Complex64>) -> Self {
        Self(amplitudes)
    }

    /// `|J, J⟩`.
    pub fn highest_weight(dim: usize) -> Self {
        let mut v = vec![Complex64::new(0.0, 0.0); dim];
        v[0] = Complex64::new(1.0, 0.0);
        Self(v)
    }

    pub fn amplitudes(&self) -> &[Complex64] {
        &self.0
    }

    pub fn dim(&self) -> usize {
        self.0.len()
    }

    pub fn norm(&self) -> f64 {
        linalg::norm(&self.0)
    }

    /// `⟨ψ|A|ψ⟩`.
    pub fn expectation(&self, op: &CMatrix) -> Complex64 {
        linalg::inner(&self.0, &op.matvec(&self.0))
    }

    pub fn into_inner(self) -> Vec<Complex64> {
        self.0
    }
}

/// `exp[−iθ(J_x sin φ − J_y cos φ)] |J, J⟩`, computed as the first column of the
/// rotation without forming the full matrix.
pub fn spin_coherent_state(ops: &SpinOperatorSet, angles: SpinCoherentAngles) -> StateVector {
    let n = ops.dim();
    let eig = &ops.jx_spectrum;
    let d = gauge(n, angles.phi);
    let v0 = &eig.vectors[0..n];
    let weighted: Vec<Complex64> = eig
        .values
        .iter()
        .zip(v0)
        .map(|(&l, &a)| Complex64::from_polar(a, -angles.theta * l))
        .collect();
    let amps = (0..n)
        .map(|r| {
            let vr = &eig.vectors[r * n..(r + 1) * n];
            let s = vr
                .iter()
                .zip(&weighted)
                .fold(Complex64::new(0.0, 0.0), |acc, (a, w)| acc + w * a);
            d[r] * s
        })
        .collect();
    StateVector(amps)
}

/// Deterministic stream of directions uniformly distributed on the unit sphere.
///
/// Backed by ChaCha8 seeded from a `u64`, which is portable across platforms.
pub struct SphereSampler {
    rng: ChaCha8Rng,
}

impl SphereSampler {
    pub fn new(seed: u64) -> Self {
        Self {
            rng: ChaCha8Rng::seed_from_u64(seed),
        }
    }
}

impl Iterator for SphereSampler {
    type Item = SpinCoherentAngles;

    fn next(&mut self) -> Option<SpinCoherentAngles> {
        let u: f64 = self.rng.random();
        let v: f64 = self.rng.random();
        let theta = (1.0 - 2.0 * u).clamp(-1.0, 1.0).acos();
        let mut phi = TAU * v;
        if phi >= TAU {
            phi = 0.0;
        }
        Some(SpinCoherentAngles { theta, phi })
    }
}

/// One direction uniform on the sphere (`cos θ` uniform on `[−1, 1]`).
pub fn random_sphere_angles(seed: u64) -> SpinCoherentAngles {
    SphereSampler::new(seed)
        .next()
        .expect("sphere sampler is infinite")
}
