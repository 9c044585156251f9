//! Where the single-mode approximation departs from the exact two-photon
//! model: growing transmission and frequencies approaching the free spectral
//! range.
//!
//!     cargo run --example full_vs_single_mode

use squeezelim::{CavityParams, ModelKind, SqueezeSettings};

fn main() -> squeezelim::Result<()> {
    let settings = SqueezeSettings::new(0.0, 4.0, 1.0);
    println!("{:>6} {:>10} {:>14}", "T_c", "omega tau", "full / single");
    for t_c in [0.01, 0.05, 0.2] {
        let p = CavityParams::default().with_tau(1e-8).with_t_c(t_c).with_losses(0.001, 0.05, 0.0);
        let s = settings.with_q(0.5 * p.threshold());
        for omega_tau in [0.0, 0.01, 0.1, 0.5] {
            let omega = omega_tau / p.tau;
            let full = ModelKind::Full.sensitivity(&p, &s, omega)?;
            let sm = ModelKind::SingleMode.sensitivity(&p, &s, omega)?;
            println!("{t_c:>6} {omega_tau:>10} {:>14.6}", full / sm);
        }
    }
    Ok(())
}
