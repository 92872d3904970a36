//! Gauss-Legendre rules, adaptive panel quadrature and radial grids on (0, inf).

use std::cmp::Ordering;
use std::collections::BinaryHeap;
use std::sync::OnceLock;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Default evaluation budget for adaptive integration.
pub const DEFAULT_MAX_EVALS: usize = 1_000_000;

const PANEL_ORDER: usize = 10;

// At an integrable endpoint singularity such as r^(-1/2) the halved rule
// gains only a factor sqrt(2), so |coarse - fine| underestimates the error
// of `fine` by about 2.4. The factor keeps the estimate an upper bound there.
const ERROR_SAFETY: f64 = 4.0;

/// Gauss-Legendre nodes and weights on [-1, 1], nodes ascending.
pub fn gauss_legendre(n: usize) -> (Vec<f64>, Vec<f64>) {
    assert!(n >= 1, "Gauss-Legendre rule needs at least one node");
    let mut x = vec![0.0; n];
    let mut w = vec![0.0; n];
    let nf = n as f64;
    for i in 0..n.div_ceil(2) {
        // Tricomi initial guess, then Newton on the three-term recurrence.
        let mut t = (std::f64::consts::PI * (i as f64 + 0.75) / (nf + 0.5)).cos();
        let mut dp = 0.0;
        for _ in 0..100 {
            let (p, d) = legendre_with_derivative(n, t);
            dp = d;
            let dt = p / d;
            t -= dt;
            if dt.abs() <= 1e-16 * t.abs().max(1.0) {
                break;
            }
        }
        let (_, d) = legendre_with_derivative(n, t);
        if d.is_finite() {
            dp = d;
        }
        let wi = 2.0 / ((1.0 - t * t) * dp * dp);
        x[i] = -t;
        x[n - 1 - i] = t;
        w[i] = wi;
        w[n - 1 - i] = wi;
    }
    if n % 2 == 1 {
        x[n / 2] = 0.0;
    }
    (x, w)
}

fn legendre_with_derivative(n: usize, t: f64) -> (f64, f64) {
    let mut p0 = 1.0;
    let mut p1 = t;
    for k in 2..=n {
        let kf = k as f64;
        let p2 = ((2.0 * kf - 1.0) * t * p1 - (kf - 1.0) * p0) / kf;
        p0 = p1;
        p1 = p2;
    }
    if n == 0 {
        return (1.0, 0.0);
    }
    let d = n as f64 * (t * p1 - p0) / (t * t - 1.0);
    (p1, d)
}

fn panel_rule() -> &'static (Vec<f64>, Vec<f64>) {
    static RULE: OnceLock<(Vec<f64>, Vec<f64>)> = OnceLock::new();
    RULE.get_or_init(|| gauss_legendre(PANEL_ORDER))
}

/// Outcome of an adaptive integration.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct QuadResult {
    pub value: f64,
    pub error_estimate: f64,
    pub evaluations: usize,
}

/// Adaptive integrator. A panel's error is the difference between the
/// Gauss rule on the panel and the same rule on its two halves; the panel
/// with the largest error is split next.
#[derive(Debug, Clone, Copy)]
pub struct Integrator {
    pub abs_tol: f64,
    pub rel_tol: f64,
    pub max_evals: usize,
}

impl Integrator {
    /// The contract tolerance `tol * max(1, |value|)`.
    pub fn new(tol: f64) -> Self {
        Self { abs_tol: tol, rel_tol: tol, max_evals: DEFAULT_MAX_EVALS }
    }

    /// Purely relative tolerance, for integrands of fixed sign.
    pub fn relative(rel_tol: f64) -> Self {
        Self { abs_tol: 0.0, rel_tol, max_evals: DEFAULT_MAX_EVALS }
    }

    pub fn integrate<F: Fn(f64) -> f64>(&self, f: F, a: f64, b: f64) -> Result<QuadResult> {
        if !(a.is_finite() && b.is_finite()) || a >= b {
            return Err(Error::Domain(format!("invalid interval [{a}, {b}]")));
        }
        if !(self.abs_tol >= 0.0 && self.rel_tol >= 0.0 && self.abs_tol + self.rel_tol > 0.0) {
            return Err(Error::Config("quadrature tolerance must be positive".into()));
        }
        let mut evals = 0usize;
        let mut heap = BinaryHeap::new();
        let first = Panel::new(&f, a, b, &mut evals)?;
        let mut value = first.fine;
        let mut error = first.err;
        heap.push(first);
        loop {
            if error <= self.abs_tol.max(self.rel_tol * value.abs()) {
                break;
            }
            if evals >= self.max_evals {
                return Err(Error::Accuracy { best: value, error });
            }
            let worst = heap.pop().expect("heap holds at least one panel");
            let mid = 0.5 * (worst.a + worst.b);
            if !(mid > worst.a && mid < worst.b) {
                // Panel cannot be split further in floating point.
                heap.push(Panel { err: 0.0, ..worst });
                error -= worst.err;
                continue;
            }
            let left = Panel::new(&f, worst.a, mid, &mut evals)?;
            let right = Panel::new(&f, mid, worst.b, &mut evals)?;
            value += left.fine + right.fine - worst.fine;
            error += left.err + right.err - worst.err;
            heap.push(left);
            heap.push(right);
            if heap.len() % 64 == 0 {
                // Re-sum to keep the running totals free of drift.
                value = heap.iter().map(|p| p.fine).sum();
                error = heap.iter().map(|p| p.err).sum();
            }
        }
        let value: f64 = heap.iter().map(|p| p.fine).sum();
        let error: f64 = heap.iter().map(|p| p.err).sum();
        Ok(QuadResult { value, error_estimate: error, evaluations: evals })
    }

    /// Integral over [a, inf) through r = a + L u/(1-u) with L = 1.
    pub fn integrate_from<F: Fn(f64) -> f64>(&self, f: F, a: f64) -> Result<QuadResult> {
        self.integrate(
            |u| {
                let s = 1.0 - u;
                let v = f(a + u / s) / (s * s);
                // Overflow only at the far end of the map, where f has decayed.
                if v.is_finite() || s > 1e-6 { v } else { 0.0 }
            },
            0.0,
            1.0,
        )
    }
}

#[derive(Debug, Clone, Copy)]
struct Panel {
    a: f64,
    b: f64,
    fine: f64,
    err: f64,
}

impl Panel {
    fn new<F: Fn(f64) -> f64>(f: &F, a: f64, b: f64, evals: &mut usize) -> Result<Self> {
        let mid = 0.5 * (a + b);
        let coarse = gauss_panel(f, a, b, evals)?;
        let fine = gauss_panel(f, a, mid, evals)? + gauss_panel(f, mid, b, evals)?;
        Ok(Panel { a, b, fine, err: ERROR_SAFETY * (fine - coarse).abs() })
    }
}

impl PartialEq for Panel {
    fn eq(&self, other: &Self) -> bool {
        self.err.total_cmp(&other.err) == Ordering::Equal
    }
}
impl Eq for Panel {}
impl PartialOrd for Panel {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}
impl Ord for Panel {
    fn cmp(&self, other: &Self) -> Ordering {
        self.err.total_cmp(&other.err)
    }
}

fn gauss_panel<F: Fn(f64) -> f64>(f: &F, a: f64, b: f64, evals: &mut usize) -> Result<f64> {
    let (x, w) = panel_rule();
    let h = 0.5 * (b - a);
    let c = 0.5 * (a + b);
    let mut s = 0.0;
    for (xi, wi) in x.iter().zip(w) {
        let v = f(c + h * xi);
        if !v.is_finite() {
            return Err(Error::Domain(format!("integrand not finite at {}", c + h * xi)));
        }
        s += wi * v;
    }
    *evals += x.len();
    Ok(h * s)
}

/// Adaptive integral over [a, b] to `tol * max(1, |value|)`.
pub fn integrate_finite<F: Fn(f64) -> f64>(f: F, a: f64, b: f64, tol: f64) -> Result<QuadResult> {
    Integrator::new(tol).integrate(f, a, b)
}

/// Adaptive integral over (0, inf) through r = u/(1-u).
pub fn integrate_semi_infinite<F: Fn(f64) -> f64>(f: F, tol: f64) -> Result<QuadResult> {
    Integrator::new(tol).integrate_from(f, 0.0)
}

/// Change of variables that carries Gauss-Legendre nodes onto (0, inf).
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum GridMap {
    /// r = L u/(1-u), u in (0, 1).
    Rational { scale: f64 },
    /// r = L e^t, t in [log_min, log_max].
    Exponential { scale: f64, log_min: f64, log_max: f64 },
    /// Nodes supplied directly.
    Custom,
}

impl GridMap {
    pub const DEFAULT_LOG_MIN: f64 = -20.0;
    pub const DEFAULT_LOG_MAX: f64 = 16.0;

    pub fn rational(scale: f64) -> Self {
        GridMap::Rational { scale }
    }

    pub fn exponential(scale: f64) -> Self {
        GridMap::Exponential { scale, log_min: Self::DEFAULT_LOG_MIN, log_max: Self::DEFAULT_LOG_MAX }
    }

    /// Build a map from its tag, `rational` or `exponential`.
    pub fn from_tag(tag: &str, scale: f64) -> Result<Self> {
        match tag {
            "rational" => Ok(Self::rational(scale)),
            "exponential" => Ok(Self::exponential(scale)),
            other => Err(Error::Config(format!("unknown grid mapping '{other}'"))),
        }
    }

    pub fn tag(&self) -> &'static str {
        match self {
            GridMap::Rational { .. } => "rational",
            GridMap::Exponential { .. } => "exponential",
            GridMap::Custom => "custom",
        }
    }

    /// The same map with its scale multiplied by `factor`.
    pub fn scaled(&self, factor: f64) -> Self {
        match *self {
            GridMap::Rational { scale } => GridMap::Rational { scale: scale * factor },
            GridMap::Exponential { scale, log_min, log_max } => {
                GridMap::Exponential { scale: scale * factor, log_min, log_max }
            }
            GridMap::Custom => GridMap::Custom,
        }
    }
}

impl Default for GridMap {
    fn default() -> Self {
        GridMap::rational(1.0)
    }
}

/// Quadrature nodes and weights on (0, inf).
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RadialGrid {
    nodes: Vec<f64>,
    weights: Vec<f64>,
    mapping: GridMap,
}

impl RadialGrid {
    /// Validates positivity, finiteness and strict ordering.
    pub fn from_parts(nodes: Vec<f64>, weights: Vec<f64>, mapping: GridMap) -> Result<Self> {
        if nodes.len() != weights.len() {
            return Err(Error::Shape(format!("{} nodes but {} weights", nodes.len(), weights.len())));
        }
        if nodes.is_empty() {
            return Err(Error::Shape("empty grid".into()));
        }
        if nodes.iter().any(|r| !(r.is_finite() && *r > 0.0)) {
            return Err(Error::Numerical("grid node not finite and positive".into()));
        }
        if weights.iter().any(|w| !(w.is_finite() && *w > 0.0)) {
            return Err(Error::Numerical("grid weight not finite and positive".into()));
        }
        if nodes.windows(2).any(|p| p[0] >= p[1]) {
            return Err(Error::Numerical("grid nodes not strictly increasing".into()));
        }
        Ok(Self { nodes, weights, mapping })
    }

    pub fn nodes(&self) -> &[f64] {
        &self.nodes
    }

    pub fn weights(&self) -> &[f64] {
        &self.weights
    }

    pub fn mapping(&self) -> GridMap {
        self.mapping
    }

    pub fn size(&self) -> usize {
        self.nodes.len()
    }

    /// Sum of w_i f(r_i).
    pub fn integrate<F: Fn(f64) -> f64>(&self, f: F) -> f64 {
        self.nodes.iter().zip(&self.weights).map(|(r, w)| w * f(*r)).sum()
    }
}

/// Gauss-Legendre grid of `n` nodes carried to (0, inf) by `mapping`.
pub fn gauss_grid(n: usize, mapping: GridMap) -> Result<RadialGrid> {
    if n < 2 {
        return Err(Error::Domain(format!("grid needs n >= 2, got {n}")));
    }
    let (x, w) = gauss_legendre(n);
    let (nodes, weights): (Vec<f64>, Vec<f64>) = match mapping {
        GridMap::Rational { scale } => {
            if !(scale.is_finite() && scale > 0.0) {
                return Err(Error::Config(format!("map scale must be positive, got {scale}")));
            }
            x.iter()
                .zip(&w)
                .map(|(xi, wi)| {
                    let u = 0.5 * (xi + 1.0);
                    let s = 1.0 - u;
                    (scale * u / s, 0.5 * wi * scale / (s * s))
                })
                .unzip()
        }
        GridMap::Exponential { scale, log_min, log_max } => {
            if !(scale.is_finite() && scale > 0.0) {
                return Err(Error::Config(format!("map scale must be positive, got {scale}")));
            }
            if !(log_min.is_finite() && log_max.is_finite() && log_min < log_max) {
                return Err(Error::Config("exponential map needs log_min < log_max".into()));
            }
            let h = 0.5 * (log_max - log_min);
            x.iter()
                .zip(&w)
                .map(|(xi, wi)| {
                    let r = scale * (log_min + h * (xi + 1.0)).exp();
                    (r, wi * h * r)
                })
                .unzip()
        }
        GridMap::Custom => {
            return Err(Error::Config("custom grids are built with RadialGrid::from_parts".into()));
        }
    };
    RadialGrid::from_parts(nodes, weights, mapping)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn gauss_rule_is_exact_for_degree_2n_minus_1() {
        for n in [3usize, 8, 20, 64] {
            let (x, w) = gauss_legendre(n);
            let k = 2 * n - 2;
            let s: f64 = x.iter().zip(&w).map(|(x, w)| w * x.powi(k as i32)).sum();
            assert!((s - 2.0 / (k as f64 + 1.0)).abs() < 1e-13, "n={n}");
            let odd: f64 = x.iter().zip(&w).map(|(x, w)| w * x.powi(k as i32 + 1)).sum();
            assert!(odd.abs() < 1e-13);
        }
    }

    #[test]
    fn weights_sum_to_two_for_large_rules() {
        let (_, w) = gauss_legendre(1600);
        assert!((w.iter().sum::<f64>() - 2.0).abs() < 1e-12);
    }

    #[test]
    fn polynomial_integral() {
        let q = integrate_finite(|y| y * y, -1.0, 1.0, 1e-12).unwrap();
        assert!((q.value - 2.0 / 3.0).abs() < 1e-12);
    }

    #[test]
    fn endpoint_singularity() {
        let q = integrate_finite(|r| 1.0 / r.sqrt(), 0.0, 1.0, 1e-10).unwrap();
        assert!((q.value - 2.0).abs() <= q.error_estimate.max(1e-10) * 2.0);
        assert!((q.value - 2.0).abs() < 1e-9);
    }

    #[test]
    fn budget_exhaustion_reports_best_estimate() {
        let integ = Integrator { abs_tol: 1e-15, rel_tol: 1e-15, max_evals: 200 };
        match integ.integrate(|r| 1.0 / r.sqrt(), 0.0, 1.0) {
            Err(Error::Accuracy { best, .. }) => assert!((best - 2.0).abs() < 0.1),
            other => panic!("expected accuracy error, got {other:?}"),
        }
    }

    #[test]
    fn unknown_tag_is_config_error() {
        assert!(matches!(GridMap::from_tag("spline", 1.0), Err(Error::Config(_))));
    }
}
