//! Angular functions, Mellin multipliers and Fourier symbols.

use trimer::charge::{mellin_symbol, sigma_symbol};
use trimer::mass::{efimov_lambda, MassParams};
use trimer::special::{phi_ell, phi_envelope};
use trimer::TWO_PI_SQ;

fn main() -> trimer::Result<()> {
    println!("phi_l(z):");
    for z in [1.01, 1.5, 3.0, 30.0, 3000.0] {
        let v: Vec<String> = [1, 3, 5]
            .iter()
            .map(|&l| phi_ell(l, z).map(|e| format!("{:>13.6e} ({:?})", e.value, e.method)))
            .collect::<trimer::Result<_>>()?;
        println!("  z = {z:>7}: {}", v.join("  "));
    }
    println!("  envelope of phi_1 at z = 30: {:.6e}", phi_envelope(1, 30.0));

    let p = MassParams::new(0.5)?;
    println!("\nm = 0.5: |lambda_1(0)| = {:.10}", mellin_symbol(1, 0.0, &p)?.abs());
    println!("        2pi^2 sqrt(nu) Lambda = {:.10}", TWO_PI_SQ * p.nu().sqrt() * efimov_lambda(0.5)?);
    for k in [0.0, 1.0, 2.0, 4.0] {
        println!(
            "  sigma_1({k}) = {:.6}  sigma_3({k}) = {:.6}",
            sigma_symbol(1, k, &p)?,
            sigma_symbol(3, k, &p)?
        );
    }
    Ok(())
}
