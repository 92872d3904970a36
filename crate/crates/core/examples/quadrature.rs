//! Gauss rules, adaptive integration and radial grids.

use trimer::quadrature::{gauss_grid, gauss_legendre, integrate_finite, integrate_semi_infinite, GridMap};

fn main() -> trimer::Result<()> {
    let (x, w) = gauss_legendre(5);
    println!("5-point rule: nodes {x:.6?}");
    println!("              weights {w:.6?}");

    let q = integrate_finite(|r| 1.0 / r.sqrt(), 0.0, 1.0, 1e-10)?;
    println!("int_0^1 r^-1/2 = {:.12} (est. {:.1e}, {} evals)", q.value, q.error_estimate, q.evaluations);

    let q = integrate_semi_infinite(|r| r.powi(3) / (1.0 + r * r).powi(3), 1e-10)?;
    println!("int_0^inf r^3/(1+r^2)^3 = {:.12} (est. {:.1e})", q.value, q.error_estimate);

    for map in [GridMap::rational(1.0), GridMap::exponential(1.0)] {
        let g = gauss_grid(200, map)?;
        println!("{:>12} grid: int e^-r = {:.14}", map.tag(), g.integrate(|r| (-r).exp()));
    }
    Ok(())
}
