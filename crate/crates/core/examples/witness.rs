//! Singular sequence at a point of the essential spectrum below zero.

use trimer::spectral::witness_sequence;
use trimer::TWO_PI_SQ;

fn main() -> trimer::Result<()> {
    let t = witness_sequence(1.0, -TWO_PI_SQ, 0.5, &[8, 16, 32, 64, 128])?;
    println!("r0 = {:.6}, limit of the H^-1/2 norm = {:.6}", t.r0, 1.0 / (t.r0 * t.r0 + 1.0).sqrt());
    println!("{:>5} {:>12} {:>14} {:>12}", "n", "residual", "<xi_n,W xi_2n>", "H^-1/2");
    for row in &t.rows {
        let g = row.gram_offdiag.map_or("-".to_string(), |g| format!("{g:.6}"));
        println!("{:>5} {:>12.6} {:>14} {:>12.6}", row.n, row.residual_norm, g, row.h_minus_half_norm_sq);
    }
    println!("residuals decreasing: {}, gram decreasing: {}", t.residuals_decay(), t.gram_decays());
    Ok(())
}
