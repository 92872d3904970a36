//! Schur-test certificates for the sector kernels K_ell.
//!
//! A certificate with bound C(m) < 1 shows ||K_ell|| < 1, hence no bound
//! state in that sector.

use std::f64::consts::PI;
use std::sync::OnceLock;

use nalgebra::{DMatrix, DVector};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::charge::kernel_k_unchecked;
use crate::error::{domain, Error, Result};
use crate::mass::{m_star, MassParams};
use crate::quadrature::RadialGrid;
use crate::roots::brent;
use crate::special::{c_ell, theta_sq};

/// Intermediate quantities of a certificate.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CertificateParts {
    pub r_max: f64,
    pub a_of_r_max: f64,
    pub multiplier: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Certificate {
    pub ell: u32,
    pub m: f64,
    pub bound: f64,
    pub certifies_absence: bool,
    pub intermediates: CertificateParts,
}

impl Certificate {
    fn new(ell: u32, m: f64, multiplier: f64, r_max: f64, a_of_r_max: f64) -> Self {
        let bound = multiplier * a_of_r_max;
        Certificate {
            ell,
            m,
            bound,
            certifies_absence: bound < 1.0,
            intermediates: CertificateParts { r_max, a_of_r_max, multiplier },
        }
    }
}

/// C_1 and C_3 at m*, computed once.
pub fn correction_constants() -> (f64, f64) {
    static C: OnceLock<(f64, f64)> = OnceLock::new();
    *C.get_or_init(|| {
        let ms = m_star();
        (c_ell(1, ms).expect("C_1 quadrature"), c_ell(3, ms).expect("C_3 quadrature"))
    })
}

/// A(r) = r^3/(theta_1(r)^2 (1 + r^2)).
pub fn a_ell1(r: f64, nu: f64) -> f64 {
    r * r * r / (theta_sq(1.0, r, nu) * (1.0 + r * r))
}

/// A(r) = r^4/(theta_1(r)^2 (r^2 + 1)^{3/2}).
pub fn a_ell3(r: f64, nu: f64) -> f64 {
    r.powi(4) / (theta_sq(1.0, r, nu) * (r * r + 1.0).powf(1.5))
}

/// Maximizer of A for ell = 1.
pub fn r_max_ell1(nu: f64) -> f64 {
    (-1.0 + 2.0 * nu + 2.0 * (1.0 - nu + nu * nu).sqrt()).sqrt()
}

/// Maximizer of A for ell = 3.
pub fn r_max_ell3(nu: f64) -> f64 {
    (1.5 * (9.0 * nu * nu - 4.0 * nu + 4.0).sqrt() + 4.5 * nu - 1.0).sqrt()
}

/// Maximum of a unimodal `a` on (0, hi] by a log-spaced scan refined with golden sections.
pub fn maximize_scan<F: Fn(f64) -> f64>(a: F, hi: f64) -> (f64, f64) {
    let n = 2000;
    let lo = 1e-3f64;
    let step = (hi / lo).ln() / n as f64;
    let mut best = (lo, a(lo));
    for i in 1..=n {
        let r = lo * (step * i as f64).exp();
        let v = a(r);
        if v > best.1 {
            best = (r, v);
        }
    }
    let (mut x0, mut x1) = (best.0 * (-step).exp(), (best.0 * step.exp()).min(hi));
    let g = 0.5 * (5f64.sqrt() - 1.0);
    for _ in 0..100 {
        let c = x1 - g * (x1 - x0);
        let d = x0 + g * (x1 - x0);
        if a(c) > a(d) {
            x1 = d;
        } else {
            x0 = c;
        }
    }
    let r = 0.5 * (x0 + x1);
    (r, a(r))
}

fn check_cross(closed: f64, r_max: f64, a: impl Fn(f64) -> f64) {
    if cfg!(debug_assertions) {
        let (_, scanned) = maximize_scan(&a, 50.0);
        debug_assert!(
            (scanned - closed).abs() <= 1e-9 * closed && scanned >= a(r_max) * (1.0 - 1e-12),
            "closed-form maximum {closed} disagrees with scan {scanned}"
        );
    }
}

/// Schur bound for ell = 1: C(m) = mu C_1 A(r_max)/(3 pi). Requires m > m*.
pub fn certify_ell1(m: f64) -> Result<Certificate> {
    let p = MassParams::new(m)?;
    if m <= m_star() {
        return domain(format!("ell = 1 certificate needs m > m* = {}, got {m}", m_star()));
    }
    let nu = p.nu();
    let r_max = r_max_ell1(nu);
    let a = a_ell1(r_max, nu);
    check_cross(a, r_max, |r| a_ell1(r, nu));
    let (c1, _) = correction_constants();
    Ok(Certificate::new(1, m, p.mu() * c1 / (3.0 * PI), r_max, a))
}

/// Schur bound for ell = 3: C(m) = C_3 mu^3 A(r_max)/280. Allowed at m = m* itself.
pub fn certify_ell3(m: f64) -> Result<Certificate> {
    let p = MassParams::new(m)?;
    if m < m_star() * (1.0 - 1e-12) {
        return domain(format!("ell = 3 certificate needs m >= m* = {}, got {m}", m_star()));
    }
    let nu = p.nu();
    let r_max = r_max_ell3(nu);
    let a = a_ell3(r_max, nu);
    check_cross(a, r_max, |r| a_ell3(r, nu));
    let (_, c3) = correction_constants();
    Ok(Certificate::new(3, m, c3 * p.mu().powi(3) / 280.0, r_max, a))
}

/// Root of certify_ell1(m).bound = 1 on (m*, 1]; an upper bound on the absence threshold.
pub fn absence_threshold(tol: f64) -> Result<f64> {
    let lo = m_star() * (1.0 + 1e-9);
    brent(|m| Ok(certify_ell1(m)?.bound - 1.0), lo, 1.0, tol).map_err(|e| match e {
        Error::Bracket { .. } => Error::Numerical("absence certificate has no root on (m*, 1]".into()),
        other => other,
    })
}

/// Symmetrized Nystrom matrix sqrt(w_i) r_i K_ell(r_i, r_j) sqrt(w_j) r_j.
pub fn kernel_matrix(ell: u32, m: f64, grid: &RadialGrid) -> Result<DMatrix<f64>> {
    if ell % 2 == 0 {
        return Err(Error::UnsupportedSector(ell));
    }
    let p = MassParams::new(m)?;
    let r = grid.nodes();
    let s: Vec<f64> = r.iter().zip(grid.weights()).map(|(r, w)| w.sqrt() * r).collect();
    let n = r.len();
    let rows: Vec<Vec<f64>> = (0..n)
        .into_par_iter()
        .map(|i| (0..n).map(|j| s[i] * kernel_k_unchecked(ell, &p, r[i], r[j]) * s[j]).collect())
        .collect();
    let mut a = DMatrix::from_fn(n, n, |i, j| rows[i][j]);
    // Symmetrize against rounding in the two evaluation orders.
    for i in 0..n {
        for j in 0..i {
            let v = 0.5 * (a[(i, j)] + a[(j, i)]);
            a[(i, j)] = v;
            a[(j, i)] = v;
        }
    }
    Ok(a)
}

const POWER_MAX_ITER: usize = 20_000;
const POWER_TOL: f64 = 1e-13;

/// Top two singular values of a symmetric matrix by power iteration on A^T A
/// with deflation of the first singular vector.
pub fn top_singular_values(a: &DMatrix<f64>) -> Result<[f64; 2]> {
    let n = a.nrows();
    let start = DVector::from_fn(n, |i, _| 1.0 + 0.1 * ((i as f64) * 0.7).sin());
    let (s1, v1) = power_gram(a, start, None)?;
    if n < 2 {
        return Ok([s1, 0.0]);
    }
    let start = DVector::from_fn(n, |i, _| if i % 2 == 0 { 1.0 } else { -1.0 } + 0.05 * (i as f64).cos());
    let (s2, _) = power_gram(a, start, Some(&v1))?;
    Ok([s1, s2])
}

fn power_gram(a: &DMatrix<f64>, mut v: DVector<f64>, deflate: Option<&DVector<f64>>) -> Result<(f64, DVector<f64>)> {
    let project = |v: &mut DVector<f64>| {
        if let Some(u) = deflate {
            let c = u.dot(v);
            v.axpy(-c, u, 1.0);
        }
    };
    project(&mut v);
    let norm = v.norm();
    if norm == 0.0 {
        return Ok((0.0, v));
    }
    v /= norm;
    let mut est = 0.0;
    for _ in 0..POWER_MAX_ITER {
        let av = a * &v;
        let mut w = a.transpose() * &av;
        project(&mut w);
        let next = av.norm_squared();
        let wn = w.norm();
        if wn == 0.0 {
            return Ok((0.0, v));
        }
        v = w / wn;
        if (next - est).abs() <= POWER_TOL * next {
            return Ok((next.sqrt(), v));
        }
        est = next;
    }
    Err(Error::Accuracy { best: est.sqrt(), error: f64::NAN })
}

/// ||K_ell|| on L^2(r^2 dr), estimated on `grid`.
pub fn numeric_kernel_norm(ell: u32, m: f64, grid: &RadialGrid) -> Result<f64> {
    let a = kernel_matrix(ell, m, grid)?;
    Ok(top_singular_values(&a)?[0])
}
