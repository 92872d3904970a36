//! Legendre polynomials, the angular integrals phi_ell, the constants C_ell
//! and the weight theta_lambda.

use std::sync::OnceLock;

use serde::{Deserialize, Serialize};

use crate::error::{domain, Error, Result};
use crate::mass::MassParams;
use crate::quadrature::{gauss_legendre, Integrator};

/// Above this argument phi_ell is summed from its large-z series.
pub const Z_SWITCH: f64 = 100.0;
/// Number of nonzero series terms kept above [`Z_SWITCH`].
pub const SERIES_TERMS: usize = 6;

const PHI_QUAD_TOL: f64 = 1e-13;
const MAX_TABULATED_ELL: u32 = 15;

/// P_ell(y) by the Bonnet recurrence.
pub fn legendre_p(ell: u32, y: f64) -> Result<f64> {
    if !(y.abs() <= 1.0) {
        return domain(format!("Legendre argument must lie in [-1, 1], got {y}"));
    }
    Ok(legendre_unchecked(ell, y))
}

pub(crate) fn legendre_unchecked(ell: u32, y: f64) -> f64 {
    if ell == 0 {
        return 1.0;
    }
    let mut p0 = 1.0;
    let mut p1 = y;
    for k in 1..ell {
        let kf = k as f64;
        let p2 = ((2.0 * kf + 1.0) * y * p1 - kf * p0) / (kf + 1.0);
        p0 = p1;
        p1 = p2;
    }
    p1
}

/// Branch used to evaluate phi_ell.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum PhiMethod {
    ClosedForm,
    Quadrature,
    Asymptotic,
}

/// phi_ell(z) = int_{-1}^{1} P_ell(y)/(y+z) dy with the branch that produced it.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PhiEval {
    pub ell: u32,
    pub z: f64,
    pub value: f64,
    pub method: PhiMethod,
}

fn check_phi_args(ell: u32, z: f64) -> Result<()> {
    if ell % 2 == 0 {
        return Err(Error::UnsupportedSector(ell));
    }
    if !(z > 1.0 && z.is_finite()) {
        return domain(format!("phi_ell needs a finite z > 1, got {z}"));
    }
    Ok(())
}

/// phi_ell(z) for odd `ell` and z > 1.
pub fn phi_ell(ell: u32, z: f64) -> Result<PhiEval> {
    check_phi_args(ell, z)?;
    let method = default_method(ell, z);
    let value = phi_by(ell, z, method)?;
    Ok(PhiEval { ell, z, value, method })
}

fn default_method(ell: u32, z: f64) -> PhiMethod {
    if z > Z_SWITCH {
        PhiMethod::Asymptotic
    } else if ell == 1 {
        PhiMethod::ClosedForm
    } else {
        PhiMethod::Quadrature
    }
}

/// phi_ell(z) through a specific branch. The closed form exists only for ell = 1.
pub fn phi_by(ell: u32, z: f64, method: PhiMethod) -> Result<f64> {
    check_phi_args(ell, z)?;
    match method {
        PhiMethod::ClosedForm if ell == 1 => Ok(2.0 - 2.0 * z * (1.0 / z).atanh()),
        PhiMethod::ClosedForm => domain(format!("no closed form for phi_{ell}")),
        PhiMethod::Asymptotic => Ok(series(ell, 1.0 / z, 0) / z),
        PhiMethod::Quadrature => positive_form(ell, z, 1).map(|v| -v),
    }
}

/// phi_ell(z) without argument checks, for inner loops. `ell` odd, `z > 1`.
pub(crate) fn phi_value(ell: u32, z: f64) -> f64 {
    debug_assert!(ell % 2 == 1 && z > 1.0);
    resolvent(ell, z)
}

/// d phi_ell / dz for odd `ell` and z > 1; positive.
pub fn phi_ell_derivative(ell: u32, z: f64) -> Result<f64> {
    check_phi_args(ell, z)?;
    Ok(resolvent_deriv(ell, z))
}

// int P_ell(y)/(y+z) dy for any ell and z > 1.
pub(crate) fn resolvent(ell: u32, z: f64) -> f64 {
    if z > Z_SWITCH {
        return series(ell, 1.0 / z, 0) / z;
    }
    match ell {
        0 => 2.0 * (1.0 / z).atanh(),
        1 => 2.0 - 2.0 * z * (1.0 / z).atanh(),
        _ => parity(ell) * positive_form(ell, z, 1).expect("quadrature converges for z > 1"),
    }
}

// d/dz of `resolvent`.
pub(crate) fn resolvent_deriv(ell: u32, z: f64) -> f64 {
    if z > Z_SWITCH {
        return -series(ell, 1.0 / z, 1) / (z * z);
    }
    match ell {
        0 => -2.0 / ((z - 1.0) * (z + 1.0)),
        1 => -2.0 * (1.0 / z).atanh() + 2.0 * z / ((z - 1.0) * (z + 1.0)),
        _ => {
            -parity(ell)
                * (ell as f64 + 1.0)
                * positive_form(ell, z, 2).expect("quadrature converges for z > 1")
        }
    }
}

/// int_{-1}^{1} P_ell(y)/(a + b y)^power dy for power 1 or 2, a > |b| >= 0.
///
/// Small `b` (large a/b) goes through the series in t = b/a, which never
/// divides by `b`, so the result stays finite when a radius tends to zero.
pub(crate) fn angular_integral(ell: u32, a: f64, b: f64, power: u32) -> f64 {
    debug_assert!(power == 1 || power == 2);
    if b == 0.0 {
        return if ell == 0 { 2.0 / a.powi(power as i32) } else { 0.0 };
    }
    let z = a / b;
    if z > Z_SWITCH {
        let t = b / a;
        let s = series(ell, t, power - 1);
        return if power == 1 { s / a } else { s / (a * a) };
    }
    if power == 1 {
        resolvent(ell, z) / b
    } else {
        -resolvent_deriv(ell, z) / (b * b)
    }
}

fn parity(ell: u32) -> f64 {
    if ell % 2 == 0 { 1.0 } else { -1.0 }
}

// 2^-ell int (1-y^2)^ell / (y+z)^(ell+extra) dy.
// With extra = 1 this is (-1)^ell int P_ell/(y+z) dy: ell-fold integration
// by parts against Rodrigues' formula leaves an integrand of one sign.
fn positive_form(ell: u32, z: f64, extra: u32) -> Result<f64> {
    let p = (ell + extra) as i32;
    let scale = 0.5f64.powi(ell as i32);
    let q = Integrator::relative(PHI_QUAD_TOL).integrate(
        |y| (1.0 - y * y).powi(ell as i32) / (y + z).powi(p),
        -1.0,
        1.0,
    )?;
    Ok(scale * q.value)
}

// Expanding 1/(y+z) geometrically in t = 1/z:
//   deriv = 0:  z * int P_ell/(y+z) dy      = (-1)^ell sum_k M_{ell,k} t^k
//   deriv = 1:  z^2 * int P_ell/(y+z)^2 dy  = (-1)^ell sum_k (k+1) M_{ell,k} t^k
// with k = ell, ell+2, ... and M_{ell,k} = int P_ell y^k dy.
fn series(ell: u32, t: f64, deriv: u32) -> f64 {
    let t2 = t * t;
    let mut tp = t.powi(ell as i32);
    let mut sum = 0.0;
    for (j, moment) in series_moments(ell).iter().enumerate() {
        let k = ell as f64 + 2.0 * j as f64;
        sum += if deriv == 0 { moment * tp } else { moment * (k + 1.0) * tp };
        tp *= t2;
    }
    parity(ell) * sum
}

fn series_moments(ell: u32) -> Vec<f64> {
    static TABLE: OnceLock<Vec<Vec<f64>>> = OnceLock::new();
    if ell <= MAX_TABULATED_ELL {
        let table = TABLE.get_or_init(|| (0..=MAX_TABULATED_ELL).map(compute_moments).collect());
        table[ell as usize].clone()
    } else {
        compute_moments(ell)
    }
}

// M_{ell,k} = int P_ell(y) y^k dy for k = ell, ell+2, ...; exact by Gauss.
fn compute_moments(ell: u32) -> Vec<f64> {
    let kmax = ell as usize + 2 * SERIES_TERMS;
    let (x, w) = gauss_legendre(kmax / 2 + ell as usize / 2 + 2);
    (0..SERIES_TERMS)
        .map(|j| {
            let k = ell as i32 + 2 * j as i32;
            x.iter().zip(&w).map(|(y, wi)| wi * legendre_unchecked(ell, *y) * y.powi(k)).sum()
        })
        .collect()
}

/// int_{-1}^{1} (1-y^2)^ell dy.
pub fn bump_integral(ell: u32) -> f64 {
    let (x, w) = gauss_legendre(ell as usize + 1);
    x.iter().zip(&w).map(|(y, wi)| wi * (1.0 - y * y).powi(ell as i32)).sum()
}

/// The envelope 2^-ell int(1-y^2)^ell dy / z^(ell+1).
pub fn phi_envelope(ell: u32, z: f64) -> f64 {
    0.5f64.powi(ell as i32) * bump_integral(ell) / z.powi(ell as i32 + 1)
}

/// C_ell = 2^ell (1+m*)^(ell+1) int (-P_ell(y))/(y+1+m*) dy / int (1-y^2)^ell dy.
pub fn c_ell(ell: u32, m_star: f64) -> Result<f64> {
    if ell % 2 == 0 {
        return Err(Error::UnsupportedSector(ell));
    }
    if !(m_star.is_finite() && m_star > 0.0) {
        return domain(format!("m* must be positive, got {m_star}"));
    }
    let z = 1.0 + m_star;
    let q = Integrator::new(1e-14).integrate(|y| -legendre_unchecked(ell, y) / (y + z), -1.0, 1.0)?;
    Ok(2f64.powi(ell as i32) * z.powi(ell as i32 + 1) * q.value / bump_integral(ell))
}

/// theta_lambda(r) = sqrt(sqrt(nu r^2 + lambda) - sqrt(lambda)).
pub fn theta(lambda: f64, r: f64, params: &MassParams) -> Result<f64> {
    if !(lambda > 0.0 && lambda.is_finite()) {
        return domain(format!("theta needs lambda > 0, got {lambda}"));
    }
    if !(r >= 0.0 && r.is_finite()) {
        return domain(format!("theta needs r >= 0, got {r}"));
    }
    Ok(theta_sq(lambda, r, params.nu()).sqrt())
}

// theta^2 written without the subtraction of close square roots.
pub(crate) fn theta_sq(lambda: f64, r: f64, nu: f64) -> f64 {
    let a = nu * r * r;
    a / ((a + lambda).sqrt() + lambda.sqrt())
}
