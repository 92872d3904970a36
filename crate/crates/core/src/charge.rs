//! Sector reductions of the charge operator: quadratic forms, kernels,
//! Mellin symbols and the W Gram form.
//!
//! A charge in sector `ell` is xi(p) = f(|p|) Y_{ell,M}(p/|p|); only the
//! radial factor `f` is stored, sampled on a [`RadialGrid`].

use std::f64::consts::PI;
use std::sync::Arc;

use rayon::prelude::*;

use crate::error::{domain, Error, Result};
use crate::mass::MassParams;
use crate::quadrature::{Integrator, RadialGrid};
use crate::special::{angular_integral, legendre_unchecked, theta_sq};
use crate::TWO_PI_SQ;

/// Radial factor of a charge in one angular sector, sampled on a grid.
#[derive(Debug, Clone, PartialEq)]
pub struct ChargeProfile {
    ell: u32,
    grid: Arc<RadialGrid>,
    values: Vec<f64>,
}

impl ChargeProfile {
    pub fn new(ell: u32, grid: impl Into<Arc<RadialGrid>>, values: Vec<f64>) -> Result<Self> {
        let grid = grid.into();
        if values.len() != grid.size() {
            return Err(Error::Shape(format!(
                "{} samples on a grid of {} nodes",
                values.len(),
                grid.size()
            )));
        }
        if values.iter().any(|v| !v.is_finite()) {
            return domain("profile samples must be finite");
        }
        Ok(Self { ell, grid, values })
    }

    /// Samples `f` at the grid nodes.
    pub fn from_fn<F: Fn(f64) -> f64>(ell: u32, grid: impl Into<Arc<RadialGrid>>, f: F) -> Result<Self> {
        let grid = grid.into();
        let values = grid.nodes().iter().map(|r| f(*r)).collect();
        Self::new(ell, grid, values)
    }

    pub fn ell(&self) -> u32 {
        self.ell
    }

    pub fn grid(&self) -> &Arc<RadialGrid> {
        &self.grid
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    /// ||f||^2 in L^2(r^2 dr).
    pub fn norm_sq(&self) -> f64 {
        let g = &self.grid;
        g.nodes()
            .iter()
            .zip(g.weights())
            .zip(&self.values)
            .map(|((r, w), f)| w * r * r * f * f)
            .sum()
    }

    /// The same profile scaled by `c`.
    pub fn scaled(&self, c: f64) -> Self {
        Self { ell: self.ell, grid: self.grid.clone(), values: self.values.iter().map(|v| c * v).collect() }
    }

    fn check_compatible(&self, other: &Self) -> Result<()> {
        if self.ell != other.ell {
            return Err(Error::Shape(format!("sectors {} and {} differ", self.ell, other.ell)));
        }
        if !(Arc::ptr_eq(&self.grid, &other.grid) || *self.grid == *other.grid) {
            return Err(Error::Shape("profiles live on different grids".into()));
        }
        Ok(())
    }
}

/// k(r, r') = 2 pi int P_ell(y)/(r^2 + r'^2 + mu r r' y + lambda) dy, the
/// kernel of the off-diagonal part of T_lambda in sector `ell`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SectorKernel {
    ell: u32,
    lambda: f64,
    params: MassParams,
}

impl SectorKernel {
    pub fn new(ell: u32, lambda: f64, params: MassParams) -> Result<Self> {
        if !(lambda >= 0.0 && lambda.is_finite()) {
            return domain(format!("lambda must be >= 0, got {lambda}"));
        }
        Ok(Self { ell, lambda, params })
    }

    pub fn ell(&self) -> u32 {
        self.ell
    }

    pub fn lambda(&self) -> f64 {
        self.lambda
    }

    pub fn params(&self) -> MassParams {
        self.params
    }

    pub fn eval(&self, r: f64, rp: f64) -> f64 {
        let a = r * r + rp * rp + self.lambda;
        let b = self.params.mu() * r * rp;
        2.0 * PI * angular_integral(self.ell, a, b, 1)
    }

    /// Kernel of the W form: -2 * 2 pi int P_ell(y)/(...)^2 dy.
    pub fn eval_w(&self, r: f64, rp: f64) -> f64 {
        let a = r * r + rp * rp + self.lambda;
        let b = self.params.mu() * r * rp;
        -4.0 * PI * angular_integral(self.ell, a, b, 2)
    }
}

fn check_lambda(lambda: f64, strict: bool) -> Result<()> {
    let ok = lambda.is_finite() && if strict { lambda > 0.0 } else { lambda >= 0.0 };
    if ok {
        Ok(())
    } else {
        domain(format!("lambda out of range: {lambda}"))
    }
}

/// Phi_lambda[f] = 2 pi^2 int r^2 sqrt(nu r^2 + lambda) f^2 dr.
pub fn phi_form(lambda: f64, params: &MassParams, f: &ChargeProfile) -> Result<f64> {
    check_lambda(lambda, false)?;
    let nu = params.nu();
    let g = f.grid();
    Ok(TWO_PI_SQ
        * g.nodes()
            .iter()
            .zip(g.weights())
            .zip(f.values())
            .map(|((r, w), v)| w * r * r * (nu * r * r + lambda).sqrt() * v * v)
            .sum::<f64>())
}

// sum_ij w_i w_j r_i^2 f_i r_j^2 g_j k(r_i, r_j), rows in parallel, summed in order.
fn double_sum<K>(f: &ChargeProfile, g: &ChargeProfile, kernel: K) -> f64
where
    K: Fn(f64, f64) -> f64 + Sync,
{
    let grid = f.grid();
    let r = grid.nodes();
    let w = grid.weights();
    let a: Vec<f64> = (0..r.len()).map(|i| w[i] * r[i] * r[i] * f.values()[i]).collect();
    let b: Vec<f64> = (0..r.len()).map(|i| w[i] * r[i] * r[i] * g.values()[i]).collect();
    let rows: Vec<f64> = (0..r.len())
        .into_par_iter()
        .map(|i| {
            if a[i] == 0.0 {
                return 0.0;
            }
            let mut s = 0.0;
            for j in 0..r.len() {
                if b[j] != 0.0 {
                    s += kernel(r[i], r[j]) * b[j];
                }
            }
            a[i] * s
        })
        .collect();
    rows.iter().sum()
}

/// Psi_{lambda,ell}[f] = int int r^2 f(r) r'^2 f(r') k(r, r') dr dr'.
pub fn psi_form(lambda: f64, ell: u32, params: &MassParams, f: &ChargeProfile) -> Result<f64> {
    check_lambda(lambda, false)?;
    if f.ell() != ell {
        return Err(Error::Shape(format!("profile is in sector {}, not {ell}", f.ell())));
    }
    let k = SectorKernel::new(ell, lambda, *params)?;
    Ok(double_sum(f, f, |r, rp| k.eval(r, rp)))
}

/// <xi, T_lambda xi> restricted to the profile's sector.
pub fn t_expectation(lambda: f64, params: &MassParams, f: &ChargeProfile) -> Result<f64> {
    Ok(phi_form(lambda, params, f)? + psi_form(lambda, f.ell(), params, f)?)
}

/// K_ell(r, r') = phi_ell(z)/(pi mu r r' theta_1(r) theta_1(r')), z = (r^2+r'^2+1)/(mu r r').
pub fn kernel_k(ell: u32, params: &MassParams, r: f64, rp: f64) -> Result<f64> {
    if ell % 2 == 0 {
        return Err(Error::UnsupportedSector(ell));
    }
    if !(r > 0.0 && rp > 0.0 && r.is_finite() && rp.is_finite()) {
        return domain(format!("kernel radii must be positive, got ({r}, {rp})"));
    }
    Ok(kernel_k_unchecked(ell, params, r, rp))
}

// phi_ell(z)/(mu r r') is the angular integral itself, so no division by r r'.
pub(crate) fn kernel_k_unchecked(ell: u32, params: &MassParams, r: f64, rp: f64) -> f64 {
    let nu = params.nu();
    let ang = angular_integral(ell, r * r + rp * rp + 1.0, params.mu() * r * rp, 1);
    ang / (PI * (theta_sq(1.0, r, nu) * theta_sq(1.0, rp, nu)).sqrt())
}

// sinh(rho a)/sinh(rho pi/2) and cosh(rho a)/cosh(rho pi/2) for 0 <= a < pi/2,
// written with decaying exponentials only.
fn hyperbolic_ratio(rho: f64, a: f64, odd: bool) -> f64 {
    let rho = rho.abs();
    let half_pi = 0.5 * PI;
    if odd {
        if rho == 0.0 {
            return a / half_pi;
        }
        ((a - half_pi) * rho).exp() * (-(-2.0 * rho * a).exp_m1()) / (-(-PI * rho).exp_m1())
    } else {
        ((a - half_pi) * rho).exp() * (1.0 + (-2.0 * rho * a).exp()) / (1.0 + (-PI * rho).exp())
    }
}

/// The Mellin multiplier lambda_ell(rho) of the homogeneous sector kernel.
pub fn mellin_symbol(ell: u32, rho: f64, params: &MassParams) -> Result<f64> {
    if !rho.is_finite() {
        return domain(format!("rho must be finite, got {rho}"));
    }
    let mp1 = params.m() + 1.0;
    let odd = ell % 2 == 1;
    let q = Integrator::new(1e-13).integrate(
        |x| {
            let a = (x / mp1).asin();
            legendre_unchecked(ell, x) * hyperbolic_ratio(rho, a, odd) / a.cos()
        },
        0.0,
        1.0,
    )?;
    Ok(if odd { -TWO_PI_SQ * q.value } else { TWO_PI_SQ * q.value })
}

/// sigma_ell(k) = 1/2 int P_ell(y) sinh(k a)/(cos a sinh(k pi/2)) dy, a = arcsin(y/(m+1)).
pub fn sigma_symbol(ell: u32, k: f64, params: &MassParams) -> Result<f64> {
    if ell % 2 == 0 {
        return Err(Error::UnsupportedSector(ell));
    }
    if !k.is_finite() {
        return domain(format!("k must be finite, got {k}"));
    }
    let mp1 = params.m() + 1.0;
    // The integrand is even in y for odd ell.
    let q = Integrator::new(1e-13).integrate(
        |y| {
            let a = (y / mp1).asin();
            legendre_unchecked(ell, y) * hyperbolic_ratio(k, a, true) / a.cos()
        },
        0.0,
        1.0,
    )?;
    Ok(q.value)
}

/// <u_f, u_g> = 2 pi^2 int r^2 f g / sqrt(nu r^2 + lambda) dr
///            - 2 * 2 pi int int r^2 f(r) r'^2 g(r') int P_ell/(r^2+r'^2+mu r r' y+lambda)^2 dy dr dr'.
pub fn w_form(
    lambda: f64,
    ell: u32,
    params: &MassParams,
    f: &ChargeProfile,
    g: &ChargeProfile,
) -> Result<f64> {
    check_lambda(lambda, true)?;
    f.check_compatible(g)?;
    if f.ell() != ell {
        return Err(Error::Shape(format!("profiles are in sector {}, not {ell}", f.ell())));
    }
    let nu = params.nu();
    let grid = f.grid();
    let diag: f64 = grid
        .nodes()
        .iter()
        .zip(grid.weights())
        .zip(f.values().iter().zip(g.values()))
        .map(|((r, w), (a, b))| w * r * r * a * b / (nu * r * r + lambda).sqrt())
        .sum();
    let k = SectorKernel::new(ell, lambda, *params)?;
    Ok(TWO_PI_SQ * diag + double_sum(f, g, |r, rp| k.eval_w(r, rp)))
}
