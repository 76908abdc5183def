//! Independent brute-force oracles shared by the integration tests. Nothing here
//! calls into the crate's eigensolver or closed forms.
#![allow(dead_code, clippy::needless_range_loop)]

use num_complex::Complex64;
use rand::Rng;
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;

pub type C = Complex64;
pub type Dense = Vec<Vec<C>>;

pub fn c(re: f64, im: f64) -> C {
    C::new(re, im)
}

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Cyclic Jacobi on a dense real symmetric matrix. Returns ascending eigenvalues
/// and the matching eigenvectors as columns of `v`.
pub fn jacobi_symmetric(mut a: Vec<Vec<f64>>) -> (Vec<f64>, Vec<Vec<f64>>) {
    let n = a.len();
    let mut v = vec![vec![0.0; n]; n];
    for (i, row) in v.iter_mut().enumerate() {
        row[i] = 1.0;
    }
    for _sweep in 0..100 {
        let off: f64 = (0..n)
            .flat_map(|i| (0..n).filter(move |&j| j != i).map(move |j| (i, j)))
            .map(|(i, j)| a[i][j] * a[i][j])
            .sum();
        if off < 1e-30 {
            break;
        }
        for p in 0..n {
            for q in p + 1..n {
                if a[p][q].abs() < 1e-300 {
                    continue;
                }
                let theta = (a[q][q] - a[p][p]) / (2.0 * a[p][q]);
                let t = theta.signum() / (theta.abs() + (theta * theta + 1.0).sqrt());
                let t = if theta == 0.0 { 1.0 } else { t };
                let cs = 1.0 / (t * t + 1.0).sqrt();
                let sn = t * cs;
                for k in 0..n {
                    let (akp, akq) = (a[k][p], a[k][q]);
                    a[k][p] = cs * akp - sn * akq;
                    a[k][q] = sn * akp + cs * akq;
                }
                for k in 0..n {
                    let (apk, aqk) = (a[p][k], a[q][k]);
                    a[p][k] = cs * apk - sn * aqk;
                    a[q][k] = sn * apk + cs * aqk;
                }
                for row in v.iter_mut() {
                    let (vkp, vkq) = (row[p], row[q]);
                    row[p] = cs * vkp - sn * vkq;
                    row[q] = sn * vkp + cs * vkq;
                }
            }
        }
    }
    let mut idx: Vec<usize> = (0..n).collect();
    idx.sort_by(|&i, &j| a[i][i].total_cmp(&a[j][j]));
    let vals = idx.iter().map(|&i| a[i][i]).collect();
    let vecs = (0..n)
        .map(|r| idx.iter().map(|&i| v[r][i]).collect())
        .collect();
    (vals, vecs)
}

/// Real embedding `[[A, −B], [B, A]]` of `H = A + iB`.
fn embed(h: &Dense) -> Vec<Vec<f64>> {
    let n = h.len();
    let mut e = vec![vec![0.0; 2 * n]; 2 * n];
    for i in 0..n {
        for j in 0..n {
            e[i][j] = h[i][j].re;
            e[i + n][j + n] = h[i][j].re;
            e[i][j + n] = -h[i][j].im;
            e[i + n][j] = h[i][j].im;
        }
    }
    e
}

/// Ascending eigenvalues of a Hermitian matrix. Every eigenvalue of the real
/// embedding is doubled, so every other one is kept.
pub fn hermitian_eigenvalues(h: &Dense) -> Vec<f64> {
    let (vals, _) = jacobi_symmetric(embed(h));
    vals.into_iter().step_by(2).collect()
}

/// `g(H)` for Hermitian `H`, evaluated on the real embedding.
pub fn hermitian_function(h: &Dense, g: impl Fn(f64) -> f64) -> Dense {
    let n = h.len();
    let (vals, vecs) = jacobi_symmetric(embed(h));
    let m = 2 * n;
    let mut out = vec![vec![c(0.0, 0.0); n]; n];
    for i in 0..n {
        for j in 0..n {
            let entry = |r: usize, s: usize| -> f64 {
                (0..m).map(|k| vecs[r][k] * g(vals[k]) * vecs[s][k]).sum()
            };
            out[i][j] = c(entry(i, j), entry(i + n, j));
        }
    }
    out
}

pub fn matmul(a: &Dense, b: &Dense) -> Dense {
    let n = a.len();
    (0..n)
        .map(|i| {
            (0..n)
                .map(|j| (0..n).map(|k| a[i][k] * b[k][j]).sum())
                .collect()
        })
        .collect()
}

pub fn from_array(rho: &[[C; 4]; 4]) -> Dense {
    rho.iter().map(|r| r.to_vec()).collect()
}

/// Partial transpose on the second qubit, basis `|ab⟩` with index `2a + b`.
pub fn partial_transpose_b(rho: &Dense) -> Dense {
    let mut out = vec![vec![c(0.0, 0.0); 4]; 4];
    for a in 0..2 {
        for b in 0..2 {
            for a2 in 0..2 {
                for b2 in 0..2 {
                    out[2 * a + b][2 * a2 + b2] = rho[2 * a + b2][2 * a2 + b];
                }
            }
        }
    }
    out
}

/// Wootters concurrence from `√(√ρ ρ̃ √ρ)` with `ρ̃ = (σ_y⊗σ_y) ρ* (σ_y⊗σ_y)`.
pub fn wootters_concurrence(rho: &Dense) -> f64 {
    // σ_y ⊗ σ_y has entries ±1 on the anti-diagonal: -1 at (0,3),(3,0), +1 at (1,2),(2,1).
    let yy = |i: usize| if i == 0 || i == 3 { -1.0 } else { 1.0 };
    let mut tilde = vec![vec![c(0.0, 0.0); 4]; 4];
    for i in 0..4 {
        for j in 0..4 {
            tilde[i][j] = rho[3 - i][3 - j].conj() * yy(i) * yy(j);
        }
    }
    let sq = hermitian_function(rho, |x| x.max(0.0).sqrt());
    let m = matmul(&matmul(&sq, &tilde), &sq);
    let mut r: Vec<f64> = hermitian_eigenvalues(&m)
        .into_iter()
        .map(|x| x.max(0.0).sqrt())
        .collect();
    r.sort_by(|a, b| b.total_cmp(a));
    (r[0] - r[1] - r[2] - r[3]).max(0.0)
}

/// Uniform draw of Bell-diagonal coefficients inside the physical tetrahedron.
pub fn random_physical_c(r: &mut ChaCha8Rng) -> (f64, f64, f64) {
    loop {
        let (x, y, z): (f64, f64, f64) = (
            r.random_range(-1.0..1.0),
            r.random_range(-1.0..1.0),
            r.random_range(-1.0..1.0),
        );
        let w = [
            1.0 - x - y - z,
            1.0 - x + y + z,
            1.0 + x - y + z,
            1.0 + x + y - z,
        ];
        if w.iter().all(|&v| v >= 0.0) {
            return (x, y, z);
        }
    }
}

/// One-sample Kolmogorov–Smirnov statistic against U(lo, hi).
pub fn ks_uniform(samples: &mut [f64], lo: f64, hi: f64) -> f64 {
    samples.sort_by(f64::total_cmp);
    let n = samples.len() as f64;
    samples
        .iter()
        .enumerate()
        .map(|(i, &x)| {
            let cdf = ((x - lo) / (hi - lo)).clamp(0.0, 1.0);
            (cdf - i as f64 / n)
                .abs()
                .max(((i + 1) as f64 / n - cdf).abs())
        })
        .fold(0.0, f64::max)
}
