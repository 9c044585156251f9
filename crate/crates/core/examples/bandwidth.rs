//! Half-width bandwidth and sensitivity-bandwidth product as the internal
//! gain rises towards threshold.
//!
//!     cargo run --example bandwidth

use squeezelim::optimize::{bandwidth, sbp_gain, SbpReference};
use squeezelim::{CavityParams, ModelKind, SqueezeSettings};

fn main() -> squeezelim::Result<()> {
    let params = CavityParams::default().with_tau(1e-8).with_losses(0.0, 0.05, 0.0);
    let base = bandwidth(&params, &SqueezeSettings::coherent(), ModelKind::Full)?;
    println!("coherent: omega_hwhm = {:.4e} rad/s", base.omega_hwhm);

    for frac in [0.2, 0.5, 0.8, 0.9, 0.95] {
        let q = frac * params.threshold();
        let b = bandwidth(&params, &SqueezeSettings::coherent().with_q(q), ModelKind::Full)?;
        println!(
            "q = {frac:.2} q_th: bandwidth x{:.3}, peak sensitivity x{:.3}, SBP x{:.3}",
            b.omega_hwhm / base.omega_hwhm,
            base.s_peak / b.s_peak,
            b.sbp / base.sbp
        );
    }

    let g = sbp_gain(ModelKind::Full, &params, 1.0, SbpReference::Standard)?;
    println!("at the optimum q = {:.5}: SBP x{:.3} over the standard limit", g.q_opt, g.ratio);
    Ok(())
}
