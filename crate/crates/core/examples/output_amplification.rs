//! Injection loss and a phase-sensitive amplifier after the cavity: the
//! optimised sensitivity approaches the internal-loss floor as the output
//! gain grows.
//!
//!     cargo run --example output_amplification

use squeezelim::single_mode::{full_opt_sensitivity, limit_injection, limit_output_amp_only};
use squeezelim::{model::db_to_factor, CavityParams};

fn main() {
    let p = CavityParams::default().with_losses(0.001, 0.1, 0.02);
    let n0 = p.normalization().n0;
    let beta = db_to_factor(15.0);

    println!("{:>8} {:>14} {:>14}", "zeta dB", "S_opt/N0", "inj limit/N0");
    for zeta_db in [0.0, 5.0, 10.0, 20.0, 40.0] {
        let zeta = db_to_factor(zeta_db);
        println!(
            "{zeta_db:>8} {:>14.6e} {:>14.6e}",
            full_opt_sensitivity(&p, beta, zeta, 0.0) / n0,
            limit_injection(&p, zeta) / n0
        );
    }
    println!("output amplification without internal squeezing: {:.6e}", limit_output_amp_only(&p) / n0);
}
