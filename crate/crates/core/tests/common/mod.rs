#![allow(dead_code)]

use std::sync::Arc;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use trimer::charge::ChargeProfile;
use trimer::quadrature::{gauss_grid, GridMap, RadialGrid};

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Exponential grid wide enough for Gaussian-type profiles.
pub fn profile_grid(n: usize) -> Arc<RadialGrid> {
    Arc::new(
        gauss_grid(n, GridMap::Exponential { scale: 1.0, log_min: -10.0, log_max: 3.5 }).unwrap(),
    )
}

/// Random smooth profile r^ell * sum_j c_j exp(-b_j r^2) in sector `ell`.
pub fn random_profile(rng: &mut ChaCha8Rng, ell: u32, grid: &Arc<RadialGrid>) -> ChargeProfile {
    let terms: Vec<(f64, f64)> =
        (0..3).map(|_| (rng.gen_range(-1.0..1.0), rng.gen_range(0.2..3.0))).collect();
    ChargeProfile::from_fn(ell, grid.clone(), |r| {
        r.powi(ell as i32) * terms.iter().map(|(c, b)| c * (-b * r * r).exp()).sum::<f64>()
    })
    .unwrap()
}

/// P_ell(y) from Rodrigues' formula: expand (y^2 - 1)^ell, differentiate the
/// coefficients ell times, divide by 2^ell ell!.
pub fn rodrigues(ell: u32, y: f64) -> f64 {
    let l = ell as usize;
    // (y^2 - 1)^l = sum_k binom(l, k) (-1)^(l-k) y^(2k)
    let mut coef = vec![0.0f64; 2 * l + 1];
    let mut binom = 1.0f64;
    for k in 0..=l {
        if k > 0 {
            binom = binom * (l - k + 1) as f64 / k as f64;
        }
        coef[2 * k] = binom * if (l - k) & 1 == 0 { 1.0 } else { -1.0 };
    }
    for _ in 0..l {
        coef = (1..coef.len()).map(|p| coef[p] * p as f64).collect();
    }
    let value = coef.iter().rev().fold(0.0, |acc, c| acc * y + c);
    let fact: f64 = (1..=l).map(|k| k as f64).product();
    value / (2f64.powi(ell as i32) * fact)
}

pub fn rel(a: f64, b: f64) -> f64 {
    (a - b).abs() / b.abs().max(f64::MIN_POSITIVE)
}

use trimer::charge::{kernel_k, t_expectation};
use trimer::mass::MassParams;
use trimer::quadrature::gauss_legendre;
use trimer::special::theta;
use trimer::TWO_PI_SQ;

/// Both sides of T_1 - 2 pi^2 = R_1 (2 pi^2 + S_1) R_1 on one sector profile.
/// The left side goes through the form, the right through theta_1 and K_ell.
pub fn decomposition_sides(params: &MassParams, f: &ChargeProfile) -> (f64, f64) {
    let lhs = t_expectation(1.0, params, f).unwrap() - TWO_PI_SQ * f.norm_sq();
    let g = f.grid();
    let (r, w) = (g.nodes(), g.weights());
    let th: Vec<f64> = r.iter().map(|&x| theta(1.0, x, params).unwrap()).collect();
    let a: Vec<f64> = (0..r.len()).map(|i| w[i] * r[i] * r[i] * th[i] * f.values()[i]).collect();
    let diag: f64 = (0..r.len()).map(|i| a[i] * th[i] * f.values()[i]).sum();
    let mut off = 0.0;
    for i in 0..r.len() {
        for j in 0..r.len() {
            off += a[i] * kernel_k(f.ell(), params, r[i], r[j]).unwrap() * a[j];
        }
    }
    (lhs, TWO_PI_SQ * (diag + off))
}

/// Psi_{lambda,ell}[f] with the y-integral done by brute-force Gauss in y.
pub fn psi_direct(lambda: f64, params: &MassParams, f: &ChargeProfile) -> f64 {
    let (y, wy) = gauss_legendre(200);
    let p: Vec<f64> = y.iter().map(|&t| rodrigues(f.ell(), t)).collect();
    let g = f.grid();
    let (r, w) = (g.nodes(), g.weights());
    let mut s = 0.0;
    for i in 0..r.len() {
        for j in 0..r.len() {
            let base = r[i] * r[i] + r[j] * r[j] + lambda;
            let b = params.mu() * r[i] * r[j];
            let ang: f64 = (0..y.len()).map(|k| wy[k] * p[k] / (base + b * y[k])).sum();
            s += w[i] * r[i] * r[i] * f.values()[i] * w[j] * r[j] * r[j] * f.values()[j] * ang;
        }
    }
    2.0 * std::f64::consts::PI * s
}
