//! Strain sensitivity spectra of a lossy cavity with and without internal
//! squeezing, in both noise models.
//!
//!     cargo run --example spectrum

use squeezelim::spectrum::{log_grid, spectrum};
use squeezelim::{model::db_to_factor, CavityParams, ModelKind, SqueezeSettings};

fn main() -> squeezelim::Result<()> {
    // A short cavity keeps the full model's free spectral range in view.
    let params = CavityParams::default().with_tau(1e-8).with_losses(0.001, 0.05, 0.0);
    let beta = db_to_factor(10.0);
    let omega = log_grid(1e4, 1e8, 9);

    for q in [0.0, 0.006] {
        let settings = SqueezeSettings::new(q, beta, 1.0);
        let sm = spectrum(ModelKind::SingleMode, &params, &settings, &omega)?;
        let full = spectrum(ModelKind::Full, &params, &settings, &omega)?;
        println!("q = {q}");
        println!("{:>12} {:>14} {:>14}", "omega", "single_mode", "full");
        for ((w, a), b) in omega.iter().zip(&sm.s_hh).zip(&full.s_hh) {
            println!("{w:>12.3e} {a:>14.6e} {b:>14.6e}");
        }
        println!();
    }
    Ok(())
}
