//! Bound states of the trimer in the l = 1 sector.
//!
//! Pass a mass and a (negative) coupling, e.g.
//! `cargo run --release --example bound_states -- 0.1 -1`.

use trimer::spectral::{bound_states, SolverConfig, SpectralPicture};
use trimer::TWO_PI_SQ;

fn main() -> trimer::Result<()> {
    let args: Vec<f64> = std::env::args().skip(1).filter_map(|a| a.parse().ok()).collect();
    let m = args.first().copied().unwrap_or(0.1);
    let alpha = args.get(1).copied().unwrap_or(-1.0);

    let states = bound_states(m, alpha, 1, &SolverConfig::default())?;
    if let SpectralPicture::Window(w) = states.picture {
        println!("m = {m}, alpha = {alpha}: discrete spectrum confined to [{:.6e}, {:.6e})", w.lower, w.upper);
    }
    if let Some(note) = &states.note {
        println!("{note}");
    }
    for (k, s) in states.states.iter().enumerate() {
        println!(
            "level {k}: eps/2pi^2 = {:.8}  E = {:.8e}  residual = {:.1e}  drift = {:.1e}",
            s.epsilon / TWO_PI_SQ,
            s.energy,
            s.residual,
            s.drift
        );
    }
    if states.states.is_empty() {
        println!("no converged level below the essential spectrum");
    }
    Ok(())
}
