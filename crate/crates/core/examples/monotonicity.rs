//! Lowest eigenvalue of T_1 across the existence window, and the variational bound above it.

use trimer::mass::m_star;
use trimer::spectral::{monotonicity_sweep, variational_quotient, SolverConfig, Trial};
use trimer::TWO_PI_SQ;

fn main() -> trimer::Result<()> {
    let lo = m_star() * 1.02;
    let hi = 0.13;
    let masses: Vec<f64> = (0..12).map(|k| lo + (hi - lo) * k as f64 / 11.0).collect();
    let sweep = monotonicity_sweep(&masses, 1, &SolverConfig::default())?;
    println!("{:>8} {:>12} {:>12}", "m", "eps_min/2pi^2", "B/2pi^2");
    for p in &sweep.points {
        let b = variational_quotient(p.m, Trial::default())?;
        println!("{:>8.5} {:>12.7} {:>12.7}", p.m, p.epsilon_min / TWO_PI_SQ, b / TWO_PI_SQ);
    }
    println!("violations: {:?}", sweep.violations);
    Ok(())
}
