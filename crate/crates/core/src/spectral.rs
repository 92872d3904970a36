//! The sector eigenproblem for T_1, bound-state energies, the variational
//! existence threshold, mass sweeps and the essential-spectrum witness.
//!
//! A bound state of energy E < -alpha^2/(4 pi^4) corresponds to an
//! eigenvalue eps = |alpha|/sqrt(-E) of T_1 below 2 pi^2, so everything is
//! solved at shift 1 and mapped back through E = -alpha^2/eps^2.

use std::f64::consts::PI;
use std::sync::{Arc, OnceLock};

use nalgebra::{DMatrix, DVector, SymmetricEigen};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::charge::{t_expectation, w_form, ChargeProfile, SectorKernel};
use crate::error::{domain, Error, Result};
use crate::mass::{efimov_lambda, m_star, MassParams};
use crate::quadrature::{gauss_grid, gauss_legendre, GridMap, Integrator, RadialGrid};
use crate::roots::brent;
use crate::TWO_PI_SQ;

/// Grid and gate settings for the eigenproblem.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SolverConfig {
    pub grid_n: usize,
    pub map: GridMap,
    /// Largest relative drift a level may show under refinement and rescaling.
    pub drift_tol: f64,
    /// Smallest relative binding gap (2 pi^2 - eps)/(2 pi^2) a level may have.
    pub min_gap: f64,
}

impl Default for SolverConfig {
    fn default() -> Self {
        Self { grid_n: 400, map: GridMap::exponential(1.0), drift_tol: 1e-4, min_gap: 1e-6 }
    }
}

impl SolverConfig {
    pub fn grid(&self) -> Result<RadialGrid> {
        gauss_grid(self.grid_n, self.map)
    }

    fn refined_grid(&self) -> Result<RadialGrid> {
        gauss_grid(2 * self.grid_n, self.map)
    }

    fn rescaled_grid(&self) -> Result<RadialGrid> {
        gauss_grid(self.grid_n, self.map.scaled(2.0))
    }
}

/// Symmetric Nystrom matrix of T_1 in one odd sector, measure r^2 dr.
#[derive(Debug, Clone)]
pub struct DiscretizedOperator {
    sector: u32,
    params: MassParams,
    grid: Arc<RadialGrid>,
    matrix: DMatrix<f64>,
}

impl DiscretizedOperator {
    pub fn sector(&self) -> u32 {
        self.sector
    }

    pub fn params(&self) -> MassParams {
        self.params
    }

    pub fn grid(&self) -> &Arc<RadialGrid> {
        &self.grid
    }

    pub fn matrix(&self) -> &DMatrix<f64> {
        &self.matrix
    }

    pub fn lambda_shift(&self) -> f64 {
        1.0
    }

    /// Grid samples of f turned into the vector sqrt(w_i) r_i f(r_i).
    pub fn weighted(&self, f: &ChargeProfile) -> Result<DVector<f64>> {
        if f.grid().as_ref() != self.grid.as_ref() {
            return Err(Error::Shape("profile grid differs from operator grid".into()));
        }
        let g = &self.grid;
        Ok(DVector::from_iterator(
            g.size(),
            g.nodes().iter().zip(g.weights()).zip(f.values()).map(|((r, w), v)| w.sqrt() * r * v),
        ))
    }

    /// Inverse of [`Self::weighted`].
    pub fn profile(&self, v: &DVector<f64>) -> Result<ChargeProfile> {
        let g = &self.grid;
        let values = g.nodes().iter().zip(g.weights()).zip(v.iter()).map(|((r, w), x)| x / (w.sqrt() * r)).collect();
        ChargeProfile::new(self.sector, self.grid.clone(), values)
    }
}

/// M_ij = delta_ij 2 pi^2 sqrt(nu r_i^2 + 1) + sqrt(w_i) r_i k(r_i, r_j) sqrt(w_j) r_j.
pub fn assemble_t1(ell: u32, params: &MassParams, grid: impl Into<Arc<RadialGrid>>) -> Result<DiscretizedOperator> {
    if ell % 2 == 0 {
        return Err(Error::UnsupportedSector(ell));
    }
    let grid = grid.into();
    let kernel = SectorKernel::new(ell, 1.0, *params)?;
    let r = grid.nodes();
    let s: Vec<f64> = r.iter().zip(grid.weights()).map(|(r, w)| w.sqrt() * r).collect();
    let n = r.len();
    let nu = params.nu();
    let upper: Vec<Vec<f64>> = (0..n)
        .into_par_iter()
        .map(|i| (i..n).map(|j| s[i] * kernel.eval(r[i], r[j]) * s[j]).collect())
        .collect();
    let mut m = DMatrix::zeros(n, n);
    for (i, row) in upper.iter().enumerate() {
        for (k, v) in row.iter().enumerate() {
            let j = i + k;
            m[(i, j)] = *v;
            m[(j, i)] = *v;
        }
        m[(i, i)] += TWO_PI_SQ * (nu * r[i] * r[i] + 1.0).sqrt();
    }
    Ok(DiscretizedOperator { sector: ell, params: *params, grid, matrix: m })
}

/// One eigenpair of a discretized operator.
#[derive(Debug, Clone)]
pub struct Eigenpair {
    pub epsilon: f64,
    /// Unit vector in the weighted coordinates sqrt(w_i) r_i f_i.
    pub vector: DVector<f64>,
    /// eps < 2 pi^2; still subject to the convergence gate.
    pub candidate: bool,
}

fn eigen(op: &DiscretizedOperator) -> Result<SymmetricEigen<f64, nalgebra::Dyn>> {
    SymmetricEigen::try_new(op.matrix.clone(), 1e-15, 100_000)
        .ok_or_else(|| Error::Numerical("symmetric eigensolver did not converge".into()))
}

fn sorted_eigenvalues(m: &DMatrix<f64>) -> Vec<f64> {
    let mut ev: Vec<f64> = m.symmetric_eigenvalues().iter().copied().collect();
    ev.sort_by(f64::total_cmp);
    ev
}

/// The `count` smallest eigenpairs, ascending.
pub fn sector_spectrum(op: &DiscretizedOperator, count: usize) -> Result<Vec<Eigenpair>> {
    let eig = eigen(op)?;
    let mut idx: Vec<usize> = (0..eig.eigenvalues.len()).collect();
    idx.sort_by(|a, b| eig.eigenvalues[*a].total_cmp(&eig.eigenvalues[*b]));
    Ok(idx
        .into_iter()
        .take(count)
        .map(|k| {
            let epsilon = eig.eigenvalues[k];
            Eigenpair { epsilon, vector: eig.eigenvectors.column(k).into_owned(), candidate: epsilon < TWO_PI_SQ }
        })
        .collect())
}

/// A level below 2 pi^2 that survived the refinement gate.
#[derive(Debug, Clone)]
pub struct ConvergedLevel {
    pub index: usize,
    pub epsilon: f64,
    /// Relative change under N -> 2N.
    pub drift_refined: f64,
    /// Relative change under L -> 2L.
    pub drift_rescaled: f64,
    pub vector: DVector<f64>,
}

/// Eigenproblem of one sector at one mass, after the gate.
#[derive(Debug, Clone)]
pub struct SectorSolution {
    pub operator: DiscretizedOperator,
    /// Lowest eigenvalue on the base grid, whether or not below 2 pi^2.
    pub epsilon_min: f64,
    pub levels: Vec<ConvergedLevel>,
    /// Base-grid candidates below 2 pi^2 that failed the gate.
    pub rejected: Vec<f64>,
}

/// Assemble, diagonalize and gate. A candidate eps_k < 2 pi^2 is kept only if
/// the k-th eigenvalue on the refined and on the rescaled grid is also below
/// 2 pi^2 and within `drift_tol` relative of eps_k, and if the gap to 2 pi^2
/// is at least `min_gap` relative and 100 times the larger of the two shifts.
/// The last condition removes continuum values that sit a rounding-size
/// distance below the threshold and therefore move very little.
pub fn solve_sector(ell: u32, params: &MassParams, config: &SolverConfig) -> Result<SectorSolution> {
    let op = assemble_t1(ell, params, config.grid()?)?;
    let pairs = sector_spectrum(&op, op.grid.size())?;
    let epsilon_min = pairs[0].epsilon;
    let candidates: Vec<&Eigenpair> = pairs.iter().take_while(|p| p.candidate).collect();
    let mut levels = Vec::new();
    let mut rejected = Vec::new();
    if !candidates.is_empty() {
        let refined = assemble_t1(ell, params, config.refined_grid()?)?;
        let rescaled = assemble_t1(ell, params, config.rescaled_grid()?)?;
        let (ev_ref, ev_res) = rayon::join(
            || sorted_eigenvalues(&refined.matrix),
            || sorted_eigenvalues(&rescaled.matrix),
        );
        for (k, p) in candidates.iter().enumerate() {
            let d1 = (ev_ref[k] - p.epsilon).abs() / p.epsilon.abs();
            let d2 = (ev_res[k] - p.epsilon).abs() / p.epsilon.abs();
            let shift = (ev_ref[k] - p.epsilon).abs().max((ev_res[k] - p.epsilon).abs());
            let gap = TWO_PI_SQ - p.epsilon;
            let ok = ev_ref[k] < TWO_PI_SQ
                && ev_res[k] < TWO_PI_SQ
                && d1 < config.drift_tol
                && d2 < config.drift_tol
                && gap > config.min_gap * TWO_PI_SQ
                && gap > 100.0 * shift;
            if ok {
                levels.push(ConvergedLevel {
                    index: k,
                    epsilon: p.epsilon,
                    drift_refined: d1,
                    drift_rescaled: d2,
                    vector: p.vector.clone(),
                });
            } else {
                rejected.push(p.epsilon);
            }
        }
    }
    Ok(SectorSolution { operator: op, epsilon_min, levels, rejected })
}

/// Window that contains the discrete spectrum for alpha < 0.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SpectralWindow {
    pub lower: f64,
    pub upper: f64,
    pub alpha: f64,
    pub m: f64,
}

impl SpectralWindow {
    pub fn contains(&self, e: f64) -> bool {
        e >= self.lower && e < self.upper
    }
}

/// Location of the spectrum for a given mass and coupling.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum SpectralPicture {
    /// alpha >= 0: essential spectrum [essential_bottom, inf), no discrete spectrum.
    HalfLine { essential_bottom: f64 },
    /// alpha < 0: essential spectrum [upper, inf), discrete spectrum in [lower, upper).
    Window(SpectralWindow),
}

/// Spectral picture for m > m*.
pub fn spectral_window(m: f64, alpha: f64) -> Result<SpectralPicture> {
    MassParams::new(m)?;
    if m <= m_star() {
        return domain(format!("spectral window needs m > m* = {}, got {m}", m_star()));
    }
    if !alpha.is_finite() {
        return domain("alpha must be finite");
    }
    if alpha >= 0.0 {
        return Ok(SpectralPicture::HalfLine { essential_bottom: 0.0 });
    }
    let lam = efimov_lambda(m)?;
    let upper = -alpha * alpha / (4.0 * PI.powi(4));
    Ok(SpectralPicture::Window(SpectralWindow { lower: upper / (1.0 - lam * lam), upper, alpha, m }))
}

/// A discrete eigenvalue of the three-body Hamiltonian.
#[derive(Debug, Clone)]
pub struct BoundState {
    /// E = -alpha^2/eps^2.
    pub energy: f64,
    pub epsilon: f64,
    /// Eigencharge at shift 1, normalized so that w_form(1, f, f) = 1.
    pub charge: ChargeProfile,
    /// ||(M - eps) v|| for the unit eigenvector v.
    pub residual: f64,
    pub drift: f64,
}

#[derive(Debug, Clone)]
pub struct BoundStates {
    pub m: f64,
    pub alpha: f64,
    pub picture: SpectralPicture,
    pub states: Vec<BoundState>,
    pub note: Option<String>,
}

/// Converged bound states of sector `ell` at mass `m` and coupling `alpha`.
pub fn bound_states(m: f64, alpha: f64, ell: u32, config: &SolverConfig) -> Result<BoundStates> {
    let params = MassParams::new(m)?;
    let picture = spectral_window(m, alpha)?;
    if alpha >= 0.0 {
        return Ok(BoundStates {
            m,
            alpha,
            picture,
            states: Vec::new(),
            note: Some("alpha >= 0: the discrete spectrum is empty".into()),
        });
    }
    let sol = solve_sector(ell, &params, config)?;
    bound_states_from(&sol, alpha)
}

/// Bound states read off an already gated sector solution.
pub fn bound_states_from(sol: &SectorSolution, alpha: f64) -> Result<BoundStates> {
    let op = &sol.operator;
    let params = op.params();
    let m = params.m();
    let picture = spectral_window(m, alpha)?;
    let window = match picture {
        SpectralPicture::HalfLine { .. } => {
            return Ok(BoundStates {
                m,
                alpha,
                picture,
                states: Vec::new(),
                note: Some("alpha >= 0: the discrete spectrum is empty".into()),
            })
        }
        SpectralPicture::Window(w) => w,
    };
    let mut states = Vec::new();
    for level in &sol.levels {
        let v = &level.vector;
        let residual = (op.matrix() * v - v * level.epsilon).norm() / v.norm();
        let f = op.profile(v)?;
        let wn = w_form(1.0, op.sector(), &params, &f, &f)?;
        if !(wn > 0.0) {
            return Err(Error::Numerical(format!("W norm of eigencharge is not positive: {wn}")));
        }
        let energy = -alpha * alpha / (level.epsilon * level.epsilon);
        if !window.contains(energy) {
            return Err(Error::Numerical(format!(
                "energy {energy} outside the window [{}, {})",
                window.lower, window.upper
            )));
        }
        states.push(BoundState {
            energy,
            epsilon: level.epsilon,
            charge: f.scaled(1.0 / wn.sqrt()),
            residual,
            drift: level.drift_refined.max(level.drift_rescaled),
        });
    }
    Ok(BoundStates { m, alpha, picture, states, note: None })
}

/// Trial charge f(r) = exp(-b r^2)/(r ln(r + a)).
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Trial {
    pub a: f64,
    pub b: f64,
}

impl Default for Trial {
    fn default() -> Self {
        Trial { a: 1.2, b: 0.05 }
    }
}

impl Trial {
    pub fn eval(&self, r: f64) -> f64 {
        (-self.b * r * r).exp() / (r * (r + self.a).ln())
    }

    fn validate(&self) -> Result<()> {
        if !(self.a > 1.0 && self.a.is_finite() && self.b > 0.0 && self.b.is_finite()) {
            return domain(format!("trial needs a > 1 and b > 0, got a = {}, b = {}", self.a, self.b));
        }
        Ok(())
    }
}

fn trial_grid() -> Arc<RadialGrid> {
    static GRID: OnceLock<Arc<RadialGrid>> = OnceLock::new();
    GRID.get_or_init(|| Arc::new(gauss_grid(400, GridMap::rational(2.0)).expect("valid trial grid"))).clone()
}

/// Rayleigh quotient B(m) = <f, T_1 f>/||f||^2 of the trial charge in sector 1.
pub fn variational_quotient(m: f64, trial: Trial) -> Result<f64> {
    trial.validate()?;
    let params = MassParams::new(m)?;
    let f = ChargeProfile::from_fn(1, trial_grid(), |r| trial.eval(r))?;
    Ok(t_expectation(1.0, &params, &f)? / f.norm_sq())
}

/// Root of B(m) = 2 pi^2; bound states exist for m* < m < root.
pub fn existence_threshold(trial: Trial, tol: f64) -> Result<f64> {
    trial.validate()?;
    brent(|m| Ok(variational_quotient(m, trial)? - TWO_PI_SQ), m_star() * (1.0 + 1e-6), 1.0, tol).map_err(
        |e| match e {
            Error::Bracket { .. } => Error::Numerical("B(m) - 2 pi^2 has no sign change on (m*, 1]".into()),
            other => other,
        },
    )
}

/// Lowest eigenvalue at one mass of a sweep.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SweepPoint {
    pub m: f64,
    pub epsilon_min: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Sweep {
    pub points: Vec<SweepPoint>,
    /// Indices k with eps_min(m_{k+1}) below eps_min(m_k) by more than [`SWEEP_TOL`].
    pub violations: Vec<usize>,
}

/// Slack, relative to 2 pi^2, before a decrease counts as a violation. Lowest
/// eigenvalues in the continuum scatter around 2 pi^2 at the 1e-9 level.
pub const SWEEP_TOL: f64 = 1e-6;

/// eps_min(m) on the base grid for increasing masses above m*.
pub fn monotonicity_sweep(masses: &[f64], ell: u32, config: &SolverConfig) -> Result<Sweep> {
    if masses.windows(2).any(|p| !(p[0] < p[1])) {
        return Err(Error::Config("mass grid must be strictly increasing".into()));
    }
    if let Some(m) = masses.iter().find(|m| !(**m > m_star())) {
        return domain(format!("sweep masses must exceed m* = {}, got {m}", m_star()));
    }
    if ell % 2 == 0 {
        return Err(Error::UnsupportedSector(ell));
    }
    let grid = Arc::new(config.grid()?);
    let points = masses
        .par_iter()
        .map(|&m| {
            let params = MassParams::new(m)?;
            let op = assemble_t1(ell, &params, grid.clone())?;
            Ok(SweepPoint { m, epsilon_min: sorted_eigenvalues(op.matrix())[0] })
        })
        .collect::<Result<Vec<_>>>()?;
    let violations = points
        .windows(2)
        .enumerate()
        .filter(|(_, p)| p[1].epsilon_min < p[0].epsilon_min - SWEEP_TOL * TWO_PI_SQ)
        .map(|(k, _)| k)
        .collect();
    Ok(Sweep { points, violations })
}

/// One element xi_n of the singular sequence.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct WitnessRow {
    pub n: u32,
    /// ||(T_lambda + alpha) xi_n|| in H^{1/2}.
    pub residual_norm: f64,
    /// <xi_n, W xi_next> for the next index; absent on the last row.
    pub gram_offdiag: Option<f64>,
    /// ||xi_n||^2 in H^{-1/2}.
    pub h_minus_half_norm_sq: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct WitnessTable {
    pub m: f64,
    pub alpha: f64,
    pub lambda: f64,
    pub r0: f64,
    pub rows: Vec<WitnessRow>,
}

impl WitnessTable {
    /// Residuals strictly decreasing.
    pub fn residuals_decay(&self) -> bool {
        self.rows.windows(2).all(|p| p[1].residual_norm < p[0].residual_norm)
    }

    /// |gram_offdiag| strictly decreasing.
    pub fn gram_decays(&self) -> bool {
        let g: Vec<f64> = self.rows.iter().filter_map(|r| r.gram_offdiag).map(f64::abs).collect();
        g.windows(2).all(|p| p[1] < p[0])
    }
}

const SHELL_NODES: usize = 48;

// Support [r0 + 1/n, r0 + 2/n] of f_n = sqrt(n)/r.
fn shell(r0: f64, n: u32) -> (f64, f64) {
    let nf = n as f64;
    (r0 + 1.0 / nf, r0 + 2.0 / nf)
}

fn shell_rule(a: f64, b: f64) -> (Vec<f64>, Vec<f64>) {
    let (x, w) = gauss_legendre(SHELL_NODES);
    let h = 0.5 * (b - a);
    (x.iter().map(|x| a + h * (x + 1.0)).collect(), w.iter().map(|w| w * h).collect())
}

/// Singular sequence xi_n with radial factor (sqrt(n)/r) on [r0+1/n, r0+2/n],
/// where 2 pi^2 sqrt(nu r0^2 + lambda) = |alpha|.
pub fn witness_sequence(m: f64, alpha: f64, lambda: f64, indices: &[u32]) -> Result<WitnessTable> {
    let params = MassParams::new(m)?;
    if !(alpha < 0.0 && alpha.is_finite()) {
        return domain(format!("witness needs alpha < 0, got {alpha}"));
    }
    let lam_max = alpha * alpha / (4.0 * PI.powi(4));
    if !(lambda > 0.0 && lambda <= lam_max) {
        return domain(format!("lambda must lie in (0, {lam_max}], got {lambda}"));
    }
    if indices.is_empty() {
        return domain("witness needs at least one index");
    }
    if indices.contains(&0) {
        return domain("witness indices must be positive");
    }
    if indices.windows(2).any(|p| p[1] < 2 * p[0]) {
        return domain("consecutive witness indices need n_next >= 2 n so that supports are disjoint");
    }
    let r0 = ((lam_max - lambda).max(0.0) / params.nu()).sqrt();
    let kernel = SectorKernel::new(1, lambda, params)?;
    let nu = params.nu();
    let a_abs = alpha.abs();

    let rows_partial = indices
        .par_iter()
        .map(|&n| {
            let (a, b) = shell(r0, n);
            let (rs, ws) = shell_rule(a, b);
            let amp = (n as f64).sqrt();
            // h(r) = int r'^2 f_n(r') k(r, r') dr'
            let h = |r: f64| -> f64 {
                rs.iter().zip(&ws).map(|(rp, w)| w * rp * amp * kernel.eval(r, *rp)).sum()
            };
            let diag = |r: f64| 2.0 * PI * PI * (nu * r * r + lambda).sqrt() - a_abs;
            let outside = |r: f64| {
                let v = h(r);
                r * r * (r * r + 1.0).sqrt() * v * v
            };
            let inside = |r: f64| {
                let v = diag(r) * amp / r + h(r);
                r * r * (r * r + 1.0).sqrt() * v * v
            };
            let integ = Integrator::new(1e-11);
            let mut res2 = integ.integrate(inside, a, b)?.value;
            if a > 0.0 {
                res2 += integ.integrate(outside, 0.0, a)?.value;
            }
            res2 += integ.integrate_from(outside, b)?.value;
            let hm = n as f64 * (b.asinh() - a.asinh());
            Ok((res2.sqrt(), hm))
        })
        .collect::<Result<Vec<_>>>()?;

    let grams = indices
        .par_windows(2)
        .map(|p| witness_gram(&params, lambda, r0, p[0], p[1]))
        .collect::<Result<Vec<_>>>()?;

    let rows = indices
        .iter()
        .zip(rows_partial)
        .enumerate()
        .map(|(k, (&n, (residual_norm, hm)))| WitnessRow {
            n,
            residual_norm,
            gram_offdiag: grams.get(k).copied(),
            h_minus_half_norm_sq: hm,
        })
        .collect();
    Ok(WitnessTable { m, alpha, lambda, r0, rows })
}

/// <xi_n, W_lambda xi_k> for support-disjoint shells, on a grid made of Gauss
/// rules over the two supports (the profiles vanish elsewhere).
pub fn witness_gram(params: &MassParams, lambda: f64, r0: f64, n: u32, k: u32) -> Result<f64> {
    let (an, bn) = shell(r0, n);
    let (ak, bk) = shell(r0, k);
    let (rn, wn) = shell_rule(an, bn);
    let (rk, wk) = shell_rule(ak, bk);
    let mut pts: Vec<(f64, f64, f64, f64)> = rn
        .iter()
        .zip(&wn)
        .map(|(r, w)| (*r, *w, (n as f64).sqrt() / r, 0.0))
        .chain(rk.iter().zip(&wk).map(|(r, w)| (*r, *w, 0.0, (k as f64).sqrt() / r)))
        .collect();
    pts.sort_by(|x, y| x.0.total_cmp(&y.0));
    let grid = Arc::new(RadialGrid::from_parts(
        pts.iter().map(|p| p.0).collect(),
        pts.iter().map(|p| p.1).collect(),
        GridMap::Custom,
    )?);
    let f = ChargeProfile::new(1, grid.clone(), pts.iter().map(|p| p.2).collect())?;
    let g = ChargeProfile::new(1, grid, pts.iter().map(|p| p.3).collect())?;
    w_form(lambda, 1, params, &f, &g)
}
