//! Operator norms of the sector kernels K_1, K_3, K_5 against their Schur bounds.

use trimer::schur::{certify_ell1, certify_ell3, kernel_matrix, numeric_kernel_norm, top_singular_values};
use trimer::spectral::SolverConfig;

fn main() -> trimer::Result<()> {
    let grid = SolverConfig::default().grid()?;
    for m in [0.2, 0.4, 1.0] {
        let norms: Vec<f64> =
            [1, 3, 5].iter().map(|&l| numeric_kernel_norm(l, m, &grid)).collect::<trimer::Result<_>>()?;
        println!(
            "m = {m}: |K1| = {:.6} (bound {:.4})  |K3| = {:.6} (bound {:.4})  |K5| = {:.6}",
            norms[0],
            certify_ell1(m)?.bound,
            norms[1],
            certify_ell3(m)?.bound,
            norms[2]
        );
    }

    // The gap between the two largest singular values of the discretized kernel.
    let a = kernel_matrix(1, 0.2, &grid)?;
    let [s1, s2] = top_singular_values(&a)?;
    println!("m = 0.2, l = 1: s1 = {s1:.6}, s2 = {s2:.6}");
    Ok(())
}
