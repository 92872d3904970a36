//! Mass parameters, the Efimov function and the critical masses.

use std::f64::consts::PI;
use std::sync::OnceLock;

use serde::{Deserialize, Serialize};

use crate::error::{domain, Result};
use crate::quadrature::Integrator;
use crate::roots::brent;
use crate::special::phi_value;

/// Default root tolerance.
pub const ROOT_TOL: f64 = 1e-10;
/// Default relative quadrature tolerance.
pub const QUAD_TOL: f64 = 1e-9;

/// The triple (m, mu, nu) with mu = 2/(m+1) and nu = m(m+2)/(m+1)^2.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct MassParams {
    m: f64,
    mu: f64,
    nu: f64,
}

impl MassParams {
    pub fn new(m: f64) -> Result<Self> {
        if !(m.is_finite() && m > 0.0) {
            return domain(format!("mass ratio must be positive and finite, got {m}"));
        }
        let mu = 2.0 / (m + 1.0);
        let nu = m * (m + 2.0) / ((m + 1.0) * (m + 1.0));
        Ok(Self { m, mu, nu })
    }

    pub fn m(&self) -> f64 {
        self.m
    }

    pub fn mu(&self) -> f64 {
        self.mu
    }

    pub fn nu(&self) -> f64 {
        self.nu
    }
}

/// Same as [`MassParams::new`].
pub fn mass_params(m: f64) -> Result<MassParams> {
    MassParams::new(m)
}

/// Lambda(m) = (2/pi)(m+1)^2 (1/sqrt(m(m+2)) - arcsin(1/(m+1))).
pub fn efimov_lambda(m: f64) -> Result<f64> {
    MassParams::new(m)?;
    let x = 1.0 / (m + 1.0);
    let diff = if x < 0.1 {
        // x/sqrt(1-x^2) - asin x = sum_k binom(2k,k)/4^k * 2k/(2k+1) x^(2k+1)
        let x2 = x * x;
        let mut coef = 1.0;
        let mut pow = x;
        let mut sum = 0.0;
        for k in 1..40 {
            let kf = k as f64;
            coef *= (2.0 * kf - 1.0) / (2.0 * kf);
            pow *= x2;
            let term = coef * 2.0 * kf / (2.0 * kf + 1.0) * pow;
            sum += term;
            if term < 1e-18 * sum {
                break;
            }
        }
        sum
    } else {
        1.0 / (m * (m + 2.0)).sqrt() - x.asin()
    };
    Ok(2.0 / PI * diff / (x * x))
}

/// Root of Lambda(m) = 1 on [1e-4, 1].
pub fn critical_mass_star(tol: f64) -> Result<f64> {
    brent(|m| Ok(efimov_lambda(m)? - 1.0), 1e-4, 1.0, tol)
}

/// m* to near machine precision, computed once.
pub fn m_star() -> f64 {
    static M: OnceLock<f64> = OnceLock::new();
    *M.get_or_init(|| critical_mass_star(1e-15).expect("Efimov function has a root on [1e-4, 1]"))
}

fn mass_of_s_residual(s: f64, m: f64, tol: f64) -> Result<f64> {
    let p = MassParams::new(m)?;
    let mu = p.mu();
    let q = Integrator::relative(tol).integrate_from(
        |r| {
            if r == 0.0 {
                return 0.0;
            }
            let z = (r * r + 1.0) / (mu * r);
            r.powf(s) * phi_value(1, z) / (mu * r)
        },
        0.0,
    )?;
    Ok(PI * p.nu().sqrt() + q.value)
}

/// The mass m(s) solving pi sqrt(nu) + int_0^inf r^s phi_1((r^2+1)/(mu r))/(mu r) dr = 0.
pub fn mass_of_s(s: f64, tol: f64) -> Result<f64> {
    if !(0.0..=1.0).contains(&s) {
        return domain(format!("s must lie in [0, 1], got {s}"));
    }
    let quad_tol = QUAD_TOL.min(tol * 1e-2).max(1e-14);
    brent(|m| mass_of_s_residual(s, m, quad_tol), 1e-3, 1.0, tol)
}

/// m** = m(1).
pub fn critical_mass_double_star(tol: f64) -> Result<f64> {
    mass_of_s(1.0, tol)
}
