//! The four critical masses.
//!
//! ```text
//! cargo run --release --example thresholds
//! ```

use trimer::mass::{critical_mass_double_star, critical_mass_star, efimov_lambda, mass_of_s};
use trimer::schur::absence_threshold;
use trimer::spectral::{existence_threshold, Trial};

fn main() -> trimer::Result<()> {
    let tol = 1e-10;
    let m_star = critical_mass_star(tol)?;
    println!("Lambda(m*)   = {:.12}", efimov_lambda(m_star)?);
    println!("m*           = {m_star:.10}  (1/m* = {:.5})", 1.0 / m_star);

    for s in [0.25, 0.5, 0.75] {
        println!("m(s = {s:.2})  = {:.10}", mass_of_s(s, tol)?);
    }
    let m2 = critical_mass_double_star(tol)?;
    println!("m**          = {m2:.10}  (1/m** = {:.5})", 1.0 / m2);

    let exist = existence_threshold(Trial::default(), tol)?;
    println!("existence    = {exist:.10}  (1/m = {:.5})", 1.0 / exist);

    let absent = absence_threshold(tol)?;
    println!("absence root = {absent:.10}  (1/m = {:.5})", 1.0 / absent);
    Ok(())
}
