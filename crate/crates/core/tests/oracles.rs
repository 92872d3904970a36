//! Reference values checked against independent evaluations.

mod common;

use std::f64::consts::PI;
use std::sync::Arc;

use common::{rel, rodrigues};
use rand::Rng;
use trimer::charge::{kernel_k, mellin_symbol, phi_form, psi_form, sigma_symbol, ChargeProfile};
use trimer::mass::{efimov_lambda, m_star, MassParams};
use trimer::quadrature::{gauss_grid, integrate_finite, integrate_semi_infinite, GridMap, Integrator};
use trimer::special::{bump_integral, c_ell, legendre_p, phi_by, phi_ell, phi_envelope, theta, PhiMethod};
use trimer::TWO_PI_SQ;

// Closed form evaluated to 40 digits with arbitrary-precision arithmetic.
const LAMBDA_AT_ONE: f64 = 0.136_877_054_458_112_13;

#[test]
fn efimov_function_at_unit_mass() {
    assert!((efimov_lambda(1.0).unwrap() - LAMBDA_AT_ONE).abs() < 1e-15);
}

#[test]
fn legendre_matches_rodrigues() {
    let mut rng = common::rng(11);
    for ell in 0..=7 {
        for _ in 0..50 {
            let y: f64 = rng.gen_range(-1.0..=1.0);
            let a = legendre_p(ell, y).unwrap();
            assert!((a - rodrigues(ell, y)).abs() < 1e-12, "ell={ell} y={y}");
        }
    }
    assert!((legendre_p(5, 0.7).unwrap() - rodrigues(5, 0.7)).abs() < 1e-12);
}

#[test]
fn phi1_closed_form_against_quadrature() {
    let q = integrate_finite(|y| y / (y + 2.0), -1.0, 1.0, 1e-13).unwrap();
    let exact = 2.0 - 2.0 * 3f64.ln();
    assert!((q.value - exact).abs() < 1e-12);
    assert!((phi_ell(1, 2.0).unwrap().value - exact).abs() < 1e-14);
    assert!((exact + 0.197_224_577_336_219_4).abs() < 1e-15);
}

#[test]
fn phi_agrees_with_direct_legendre_quadrature() {
    for ell in [1u32, 3, 5, 7] {
        for z in [1.01, 1.3, 2.0, 7.5, 40.0] {
            let direct = Integrator::new(1e-13)
                .integrate(|y| rodrigues(ell, y) / (y + z), -1.0, 1.0)
                .unwrap()
                .value;
            let v = phi_ell(ell, z).unwrap().value;
            assert!((v - direct).abs() < 1e-9 * direct.abs() + 1e-12, "ell={ell} z={z}: {v} vs {direct}");
        }
    }
}

#[test]
fn phi_branches_agree_across_the_switch() {
    let mut z = 10.0f64;
    while z <= 1000.0 {
        let series = phi_by(1, z, PhiMethod::Asymptotic).unwrap();
        let closed = phi_by(1, z, PhiMethod::ClosedForm).unwrap();
        let quad = phi_by(1, z, PhiMethod::Quadrature).unwrap();
        assert!(rel(closed, series) < 1e-9, "z={z}: {closed} vs {series}");
        assert!(rel(quad, series) < 1e-9, "z={z}");
        for ell in [3u32, 5] {
            let s = phi_by(ell, z, PhiMethod::Asymptotic).unwrap();
            let q = phi_by(ell, z, PhiMethod::Quadrature).unwrap();
            assert!(rel(q, s) < 1e-9, "ell={ell} z={z}: {q} vs {s}");
        }
        z *= 1.25;
    }
}

#[test]
fn phi1_bound_and_ordering() {
    for z in [1.1, 2.0, 10.0] {
        assert!(phi_ell(1, z).unwrap().value.abs() <= (2.0 / 3.0) / ((z - 1.0) * (z - 1.0)));
    }
    let p1 = phi_ell(1, 3.0).unwrap().value;
    let p3 = phi_ell(3, 3.0).unwrap().value;
    assert!(p1 < p3 && p3 < 0.0);
}

#[test]
fn correction_constants() {
    let ms = m_star();
    let c1 = c_ell(1, ms).unwrap();
    let c3 = c_ell(3, ms).unwrap();
    assert!((c1 - 2.74).abs() < 0.01, "C1 = {c1}");
    assert!((c3 - 6.07).abs() < 0.01, "C3 = {c3}");
    // Frozen from an independent evaluation.
    assert!((c1 - 2.740_252_17).abs() < 1e-7);
    assert!((c3 - 6.071_672_52).abs() < 1e-7);
    for (ell, c) in [(1u32, c1), (3, c3)] {
        let z0 = 1.0 + ms;
        let tangent = c * phi_envelope(ell, z0);
        assert!(rel(tangent, phi_ell(ell, z0).unwrap().value.abs()) < 1e-8);
        let mut z = z0 * 1.001;
        while z < 1e3 {
            assert!(phi_ell(ell, z).unwrap().value.abs() <= c * phi_envelope(ell, z) * (1.0 + 1e-12));
            z *= 1.1;
        }
    }
    assert!((bump_integral(1) - 4.0 / 3.0).abs() < 1e-15);
    assert!((bump_integral(3) - 32.0 / 35.0).abs() < 1e-15);
}

#[test]
fn theta_limits() {
    let p = MassParams::new(0.5).unwrap();
    let r = 1e-6;
    let t = theta(1.0, r, &p).unwrap();
    assert!(rel(t * t / (r * r), p.nu() / 2.0) < 1e-6);
    let r = 1e6;
    let t = theta(1.0, r, &p).unwrap();
    assert!(rel(t / r.sqrt(), p.nu().powf(0.25)) < 1e-5);
}

#[test]
fn quadrature_battery_is_conservative() {
    let cases: Vec<(f64, f64)> = vec![
        {
            let q = integrate_finite(|y| y * y, -1.0, 1.0, 1e-12).unwrap();
            (q.value - 2.0 / 3.0, q.error_estimate)
        },
        {
            let q = integrate_finite(|y| y / (y + 2.0), -1.0, 1.0, 1e-12).unwrap();
            (q.value - (2.0 - 2.0 * 3f64.ln()), q.error_estimate)
        },
        {
            let q = integrate_finite(|r| 1.0 / r.sqrt(), 0.0, 1.0, 1e-10).unwrap();
            (q.value - 2.0, q.error_estimate)
        },
        {
            let q = integrate_semi_infinite(|r| (-r * r).exp(), 1e-10).unwrap();
            (q.value - PI.sqrt() / 2.0, q.error_estimate)
        },
        {
            let q = integrate_semi_infinite(|r| r / ((r * r + 1.0) * (r * r + 1.0)), 1e-10).unwrap();
            (q.value - 0.5, q.error_estimate)
        },
        {
            let q = integrate_semi_infinite(|r| r.powi(3) / (1.0 + r * r).powi(3), 1e-10).unwrap();
            (q.value - 0.25, q.error_estimate)
        },
    ];
    for (k, (err, est)) in cases.into_iter().enumerate() {
        assert!(err.abs() < 1e-9, "case {k}: error {err}");
        assert!(err.abs() <= est + 1e-15, "case {k}: error {err} above estimate {est}");
    }
}

#[test]
fn radial_grid_sanity() {
    for map in [GridMap::default(), GridMap::exponential(1.0)] {
        let g = gauss_grid(200, map).unwrap();
        let s = g.integrate(|r| (-r).exp());
        assert!((s - 1.0).abs() < 1e-8, "{map:?}: {s}");
        assert!(g.nodes().windows(2).all(|p| p[0] < p[1]));
        assert!(g.weights().iter().all(|w| *w > 0.0));
    }
    let s200 = gauss_grid(200, GridMap::default()).unwrap().integrate(|r| (-r).exp());
    let s400 = gauss_grid(400, GridMap::default()).unwrap().integrate(|r| (-r).exp());
    assert!((s200 - s400).abs() < 1e-10);
}

#[test]
fn gaussian_moment_of_phi_form() {
    let p = MassParams::new(1.0).unwrap();
    let g = gauss_grid(400, GridMap::default()).unwrap();
    let f = ChargeProfile::from_fn(1, g, |r| (-r * r / 2.0).exp()).unwrap();
    let v = phi_form(0.0, &p, &f).unwrap();
    let exact = TWO_PI_SQ * (3f64.sqrt() / 2.0) * 0.5;
    assert!(rel(v, exact) < 1e-10);
    assert!((v - 8.546).abs() < 2e-3);
}

#[test]
fn psi_against_log_fourier_oracle() {
    // f(r) = exp(-(ln r)^2)/r^2 has a Gaussian log-Fourier transform, so
    // Psi_{0,1}[f] = -2 pi^2 int sigma_1(k) |f#(k)|^2 dk = -pi^2 int sigma_1(k) e^{-k^2/2} dk.
    for m in [0.2, 1.0, 3.0] {
        let p = MassParams::new(m).unwrap();
        let g = Arc::new(gauss_grid(300, GridMap::Exponential { scale: 1.0, log_min: -9.0, log_max: 9.0 }).unwrap());
        let f = ChargeProfile::from_fn(1, g, |r| (-(r.ln()).powi(2)).exp() / (r * r)).unwrap();
        let lhs = psi_form(0.0, 1, &p, &f).unwrap();
        let half = integrate_semi_infinite(|k| sigma_symbol(1, k, &p).unwrap() * (-k * k / 2.0).exp(), 1e-12)
            .unwrap()
            .value;
        let rhs = -PI * PI * 2.0 * half;
        assert!(rel(lhs, rhs) < 1e-6, "m={m}: {lhs} vs {rhs}");
    }
}

#[test]
fn mellin_values_at_zero() {
    let p = MassParams::new(1.0).unwrap();
    let l0 = mellin_symbol(0, 0.0, &p).unwrap();
    assert!(rel(l0, 2.0 * PI.powi(3) / 3.0) < 1e-12);
    assert!((l0 - 20.671).abs() < 1e-3);
    for m in [0.1, 0.5, 1.0] {
        let p = MassParams::new(m).unwrap();
        let l1 = mellin_symbol(1, 0.0, &p).unwrap();
        let exact = TWO_PI_SQ * p.nu().sqrt() * efimov_lambda(m).unwrap();
        assert!(rel(l1.abs(), exact) < 1e-8, "m={m}");
    }
}

#[test]
fn kernel_small_radius_limit() {
    for m in [0.2, 1.0] {
        let p = MassParams::new(m).unwrap();
        let (mu, nu) = (p.mu(), p.nu());
        let t1 = theta(1.0, 1.0, &p).unwrap();
        let limit = -(2.0 / 3.0) * mu * (2.0 / nu).sqrt() / (4.0 * PI * t1);
        let k3 = kernel_k(1, &p, 1e-3, 1.0).unwrap();
        let k5 = kernel_k(1, &p, 1e-5, 1.0).unwrap();
        assert!(rel(k3, limit) < 1e-5, "m={m}: {k3} vs {limit}");
        assert!(rel(k5, limit) < 1e-9, "m={m}: {k5} vs {limit}");
        assert!(kernel_k(1, &p, 1e-150, 1.0).unwrap().is_finite());
    }
}
