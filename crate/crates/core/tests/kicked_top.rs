mod common;

use common::{c, rng};
use num_complex::Complex64;
use qkt_discord::kicked_top::{
    build_floquet, default_fit_window, detect_revivals, echo_amplitudes, evolve, fidelity_series,
    fit_decay, Branch, DecayModel, FitRequest, DEFAULT_REVIVAL_THRESHOLD,
};
use qkt_discord::spin_algebra::{build_spin_operators, random_sphere_angles, spin_coherent_state};
use qkt_discord::{KickedTopParams, SpinCoherentAngles, SpinParams};
use rand::Rng;
use std::f64::consts::{FRAC_PI_2, PI, TAU};

fn top(j: f64, eta: f64, epsilon: f64) -> KickedTopParams {
    KickedTopParams::new(FRAC_PI_2, eta, epsilon, SpinParams::new(j).unwrap()).unwrap()
}

fn spin_half_oracle(n: usize, eps: f64, theta: f64, phi: f64) -> Complex64 {
    let sx = -theta.sin() * phi.cos();
    let x = n as f64 * eps;
    c(x.cos(), x.sin() * sx)
}

#[test]
fn spin_half_echo_matches_closed_form() {
    let mut r = rng(12);
    for _ in 0..10 {
        let nu = r.random_range(0.0..TAU);
        let eta = r.random_range(0.0..30.0);
        let eps = r.random_range(0.0..0.5);
        let theta = r.random_range(0.0..PI);
        let phi = r.random_range(0.0..TAU);
        let p = KickedTopParams::new(nu, eta, eps, SpinParams::new(0.5).unwrap()).unwrap();
        let ops = build_spin_operators(p.spin).unwrap();
        let psi = spin_coherent_state(&ops, SpinCoherentAngles::new(theta, phi).unwrap());
        let s = fidelity_series(&p, &ops, &psi, 200).unwrap();
        for (n, f) in s.amplitudes().iter().enumerate() {
            assert!(
                (f - spin_half_oracle(n, eps, theta, phi)).norm() < 1e-10,
                "n = {n}"
            );
        }
    }
}

#[test]
fn doubling_epsilon_doubles_phase() {
    // θ = π/2, φ = π puts the mean spin on +x, so f_n = e^{inε}.
    let psi_angles = SpinCoherentAngles::new(FRAC_PI_2, PI).unwrap();
    let eps = 0.003;
    let phase = |e: f64| {
        let p = top(0.5, 5.0, e);
        let ops = build_spin_operators(p.spin).unwrap();
        let psi = spin_coherent_state(&ops, psi_angles);
        fidelity_series(&p, &ops, &psi, 100).unwrap().alpha()
    };
    let (a1, a2) = (phase(eps), phase(2.0 * eps));
    for n in 0..=100 {
        assert!((a1[n] - n as f64 * eps).abs() < 1e-10);
        assert!((a2[n] - 2.0 * a1[n]).abs() < 1e-10);
    }
}

#[test]
fn swapped_branches_conjugate_amplitude() {
    let p = top(30.0, 20.0, 0.01);
    let ops = build_spin_operators(p.spin).unwrap();
    let psi = spin_coherent_state(&ops, random_sphere_angles(3));
    let plus = build_floquet(&p, &ops, Branch::Plus).unwrap();
    let minus = build_floquet(&p, &ops, Branch::Minus).unwrap();
    let f = echo_amplitudes(&plus, &minus, &psi, 300);
    let g = echo_amplitudes(&minus, &plus, &psi, 300);
    for (a, b) in f.iter().zip(&g) {
        assert!((a.conj() - b).norm() < 1e-12);
        assert!(a.norm() <= 1.0 + 1e-10);
    }
}

#[test]
fn zero_epsilon_has_zero_phase() {
    let p = top(20.0, 20.0, 0.0);
    let ops = build_spin_operators(p.spin).unwrap();
    let psi = spin_coherent_state(&ops, random_sphere_angles(9));
    let s = fidelity_series(&p, &ops, &psi, 100).unwrap();
    assert!(s.alpha().iter().all(|&a| a == 0.0));
    assert!(s.fidelity().iter().all(|&f| (f - 1.0).abs() < 1e-12));
}

#[test]
fn norm_preserved_over_ten_thousand_kicks() {
    let p = top(100.0, 20.0, 0.001);
    let ops = build_spin_operators(p.spin).unwrap();
    let mut psi = spin_coherent_state(&ops, random_sphere_angles(1));
    for branch in [Branch::Plus, Branch::Minus] {
        let u = build_floquet(&p, &ops, branch).unwrap();
        assert!(u.unitarity_residual() < 1e-10);
        for _ in 0..10 {
            psi = evolve(&u, &psi, 500);
            assert!((psi.norm() - 1.0).abs() < 1e-10, "{}", psi.norm());
        }
    }
}

#[test]
fn chaotic_decay_fit_picks_lower_residual() {
    let p = top(100.0, 20.0, 0.001);
    let ops = build_spin_operators(p.spin).unwrap();
    let psi = spin_coherent_state(&ops, random_sphere_angles(1));
    let s = fidelity_series(&p, &ops, &psi, 600).unwrap();
    let w = default_fit_window(&s);
    let g = fit_decay(&s, w.clone(), FitRequest::Only(DecayModel::Gaussian)).unwrap();
    let e = fit_decay(&s, w.clone(), FitRequest::Only(DecayModel::Exponential)).unwrap();
    let best = fit_decay(&s, w, FitRequest::Best).unwrap();
    assert!(best.residual.is_finite() && best.residual >= 0.0);
    assert_eq!(best.residual, g.residual.min(e.residual));
    assert!(best.rate > 0.0);
}

#[test]
fn regular_revival_period_scales_inversely_with_epsilon() {
    let period = |eps: f64, n: usize| {
        let p = top(100.0, 0.1, eps);
        let ops = build_spin_operators(p.spin).unwrap();
        let psi = spin_coherent_state(&ops, random_sphere_angles(1));
        let s = fidelity_series(&p, &ops, &psi, n).unwrap();
        detect_revivals(&s, DEFAULT_REVIVAL_THRESHOLD)
    };
    let r1 = period(0.004, 2000);
    let r2 = period(0.008, 2000);
    assert!(r1.revival_times.len() >= 2 && r2.revival_times.len() >= 2);
    let ratio = r1.estimated_period.unwrap() / r2.estimated_period.unwrap();
    assert!((ratio - 2.0).abs() < 0.3, "ratio {ratio}");
    assert!(r1.revival_times.windows(2).all(|w| w[0] < w[1]));
    assert!(r1
        .revival_peaks
        .iter()
        .all(|&p| p >= DEFAULT_REVIVAL_THRESHOLD));
}
