//! Randomized invariants.

mod common;

use common::{decomposition_sides, profile_grid, psi_direct, random_profile, rel, rodrigues};
use proptest::prelude::*;
use trimer::charge::{mellin_symbol, psi_form, sigma_symbol, t_expectation, ChargeProfile};
use trimer::mass::{efimov_lambda, m_star, mass_of_s, MassParams};
use trimer::quadrature::gauss_legendre;
use trimer::schur::{a_ell1, a_ell3, certify_ell1, certify_ell3, maximize_scan, r_max_ell1, r_max_ell3};
use trimer::special::{legendre_p, phi_ell};
use trimer::TWO_PI_SQ;

fn config(cases: u32) -> ProptestConfig {
    ProptestConfig { cases, ..ProptestConfig::default() }
}

proptest! {
    #![proptest_config(config(100))]

    #[test]
    fn mass_identity(m in 1e-3f64..1e3) {
        let p = MassParams::new(m).unwrap();
        prop_assert!((p.nu() + p.mu() * p.mu() / 4.0 - 1.0).abs() < 4.0 * f64::EPSILON);
    }

    #[test]
    fn legendre_recurrence_vs_rodrigues(ell in 0u32..=7, y in -1.0f64..=1.0) {
        prop_assert!((legendre_p(ell, y).unwrap() - rodrigues(ell, y)).abs() < 1e-12);
    }

    #[test]
    fn sigma_tower_and_mass_order(k in -12.0f64..12.0, m1 in 0.08f64..5.0, dm in 0.01f64..5.0) {
        let p1 = MassParams::new(m1).unwrap();
        let p2 = MassParams::new(m1 + dm).unwrap();
        let s1 = sigma_symbol(1, k, &p1).unwrap();
        let s3 = sigma_symbol(3, k, &p1).unwrap();
        let s5 = sigma_symbol(5, k, &p1).unwrap();
        prop_assert!(s1 > s3 && s3 > s5 && s5 > 0.0, "k={} m={}: {} {} {}", k, m1, s1, s3, s5);
        prop_assert!(sigma_symbol(1, k, &p2).unwrap() < s1);
        prop_assert!((sigma_symbol(1, -k, &p1).unwrap() - s1).abs() <= 1e-14 * s1.abs().max(1e-300));
    }

    #[test]
    fn phi_ordering_random(z in 1.0001f64..1e4) {
        let v: Vec<f64> = [1u32, 3, 5, 7].iter().map(|&l| phi_ell(l, z).unwrap().value).collect();
        prop_assert!(v[0] < v[1] && v[1] < v[2] && v[2] < v[3] && v[3] < 0.0, "z={}: {:?}", z, v);
    }
}

proptest! {
    #![proptest_config(config(12))]

    #[test]
    fn psi_signs(seed in any::<u64>(), m in 0.08f64..10.0, lambda in 0.01f64..5.0) {
        let p = MassParams::new(m).unwrap();
        let g = profile_grid(60);
        let mut rng = common::rng(seed);
        for ell in [0u32, 2] {
            let f = random_profile(&mut rng, ell, &g);
            prop_assert!(psi_form(0.0, ell, &p, &f).unwrap() >= 0.0);
            prop_assert!(psi_form(lambda, ell, &p, &f).unwrap() >= 0.0);
            prop_assert!(t_expectation(1.0, &p, &f).unwrap() >= TWO_PI_SQ * f.norm_sq());
        }
        for ell in [1u32, 3] {
            let f = random_profile(&mut rng, ell, &g);
            let p0 = psi_form(0.0, ell, &p, &f).unwrap();
            let pl = psi_form(lambda, ell, &p, &f).unwrap();
            prop_assert!(p0 <= pl && pl <= 0.0, "ell={}: {} {}", ell, p0, pl);
        }
    }

    #[test]
    fn decomposition_consistency(seed in any::<u64>(), m in 0.08f64..10.0, ell in prop::sample::select(vec![1u32, 3])) {
        let p = MassParams::new(m).unwrap();
        let g = profile_grid(60);
        let f = random_profile(&mut common::rng(seed), ell, &g);
        let (lhs, rhs) = decomposition_sides(&p, &f);
        prop_assert!(rel(lhs, rhs) < 1e-8, "{} vs {}", lhs, rhs);
    }

    #[test]
    fn psi_against_direct_quadrature(seed in any::<u64>(), m in 0.08f64..10.0, lambda in 0.0f64..2.0,
                                     ell in prop::sample::select(vec![1u32, 3, 5])) {
        let p = MassParams::new(m).unwrap();
        let g = profile_grid(40);
        let f = random_profile(&mut common::rng(seed), ell, &g);
        let a = psi_form(lambda, ell, &p, &f).unwrap();
        let b = psi_direct(lambda, &p, &f);
        prop_assert!((a - b).abs() <= 1e-8 * b.abs() + 1e-14, "{} vs {}", a, b);
    }

    #[test]
    fn t_form_increases_with_mass(seed in any::<u64>(), m in 0.08f64..5.0, dm in 0.05f64..2.0) {
        let g = profile_grid(60);
        let f = random_profile(&mut common::rng(seed), 1, &g);
        let a = t_expectation(1.0, &MassParams::new(m).unwrap(), &f).unwrap();
        let b = t_expectation(1.0, &MassParams::new(m + dm).unwrap(), &f).unwrap();
        prop_assert!(b > a);
    }
}

#[test]
fn efimov_function_decreasing_and_positive() {
    let v: Vec<f64> =
        (0..100).map(|k| efimov_lambda(1e-3 * 1e6f64.powf(k as f64 / 99.0)).unwrap()).collect();
    assert!(v.iter().all(|x| *x > 0.0));
    assert!(v.windows(2).all(|p| p[1] < p[0]));
}

#[test]
fn mass_of_s_increasing() {
    let ms: Vec<f64> = [0.0, 0.25, 0.5, 0.75, 1.0].iter().map(|&s| mass_of_s(s, 1e-10).unwrap()).collect();
    assert!(ms.windows(2).all(|p| p[1] > p[0]), "{ms:?}");
    assert!(rel(ms[0], m_star()) < 1e-6);
}

#[test]
fn phi_increasing_on_geometric_grid() {
    let zs: Vec<f64> = (0..200).map(|k| 1.05 * (1e4f64 / 1.05).powf(k as f64 / 199.0)).collect();
    for ell in [1u32, 3, 5] {
        let v: Vec<f64> = zs.iter().map(|&z| phi_ell(ell, z).unwrap().value).collect();
        assert!(v.windows(2).all(|p| p[1] > p[0]), "ell={ell}");
    }
    for &z in &zs {
        let v: Vec<f64> = [1u32, 3, 5].iter().map(|&l| phi_ell(l, z).unwrap().value).collect();
        assert!(v[0] < v[1] && v[1] < v[2] && v[2] < 0.0);
    }
}

#[test]
fn gauss_polynomial_exactness() {
    for n in [1usize, 2, 5, 10, 20, 48] {
        let (x, w) = gauss_legendre(n);
        for p in [2 * n - 2, 2 * n - 1] {
            let q: f64 = x.iter().zip(&w).map(|(x, w)| w * x.powi(p as i32)).sum();
            let exact = if p % 2 == 1 { 0.0 } else { 2.0 / (p as f64 + 1.0) };
            assert!((q - exact).abs() < 1e-13, "n={n} p={p}");
        }
    }
}

#[test]
fn mellin_extremum_at_zero() {
    let rhos: Vec<f64> = (0..40).map(|k| k as f64 * 0.25).collect();
    for m in [0.1, 0.5, 2.0] {
        let p = MassParams::new(m).unwrap();
        for ell in [0u32, 2] {
            let v: Vec<f64> = rhos.iter().map(|&r| mellin_symbol(ell, r, &p).unwrap()).collect();
            assert!(v.windows(2).all(|q| q[1] < q[0]), "even ell={ell} m={m}");
        }
        for ell in [1u32, 3] {
            let v: Vec<f64> = rhos.iter().map(|&r| mellin_symbol(ell, r, &p).unwrap()).collect();
            assert!(v.windows(2).all(|q| q[1] > q[0]), "odd ell={ell} m={m}");
        }
    }
}

#[test]
fn closed_form_maximizers_match_scan() {
    let ms = m_star();
    for k in 0..10 {
        let m = ms * (1.0 + 1e-6) * (10.0 / ms).powf(k as f64 / 9.0);
        let nu = MassParams::new(m).unwrap().nu();
        let (r1, _) = maximize_scan(|r| a_ell1(r, nu), 50.0);
        let (r3, _) = maximize_scan(|r| a_ell3(r, nu), 50.0);
        assert!(rel(r1, r_max_ell1(nu)) < 1e-4, "m={m}: {r1} vs {}", r_max_ell1(nu));
        assert!(rel(r3, r_max_ell3(nu)) < 1e-4, "m={m}: {r3} vs {}", r_max_ell3(nu));
    }
}

#[test]
fn certificates_decrease_with_mass() {
    let ms = m_star();
    let masses: Vec<f64> = (0..64).map(|k| ms * (1.0 + 1e-6) * (10.0 / ms).powf(k as f64 / 63.0)).collect();
    for cert in [certify_ell1 as fn(f64) -> trimer::Result<_>, certify_ell3] {
        let b: Vec<f64> = masses.iter().map(|&m| cert(m).unwrap().bound).collect();
        assert!(b.windows(2).all(|p| p[1] < p[0]));
    }
}

#[test]
fn profile_scaling_is_quadratic() {
    let p = MassParams::new(0.3).unwrap();
    let g = profile_grid(60);
    let f = random_profile(&mut common::rng(3), 1, &g);
    let f2: ChargeProfile = f.scaled(2.0);
    let a = t_expectation(1.0, &p, &f).unwrap();
    assert!(rel(t_expectation(1.0, &p, &f2).unwrap(), 4.0 * a) < 1e-12);
}
