//! Schur-test certificates for sectors 1 and 3 over a mass grid.

use trimer::mass::m_star;
use trimer::schur::{certify_ell1, certify_ell3, correction_constants};

fn main() -> trimer::Result<()> {
    let (c1, c3) = correction_constants();
    println!("C1 = {c1:.6}, C3 = {c3:.6}");

    let c = certify_ell3(m_star())?;
    println!(
        "ell=3 at m*: r_max = {:.5}, A(r_max) = {:.5}, bound = {:.5}",
        c.intermediates.r_max, c.intermediates.a_of_r_max, c.bound
    );

    println!("\n{:>8} {:>10} {:>10}  absent", "m", "C_1(m)", "C_3(m)");
    for m in [0.08, 0.1, 0.2, 0.3, 0.38, 0.4, 0.5, 1.0, 2.0, 10.0] {
        let a = certify_ell1(m)?;
        let b = certify_ell3(m)?;
        println!("{m:>8.3} {:>10.5} {:>10.5}  {}", a.bound, b.bound, a.certifies_absence && b.certifies_absence);
    }
    Ok(())
}
