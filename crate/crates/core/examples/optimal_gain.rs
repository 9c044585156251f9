//! Closed-form optimal internal gain against a brute-force golden-section
//! search, across readout losses.
//!
//!     cargo run --example optimal_gain

use squeezelim::optimize::numeric_optimal_gain;
use squeezelim::single_mode::optimal_sensitivity;
use squeezelim::{model::db_to_factor, CavityParams, ModelKind};

fn main() -> squeezelim::Result<()> {
    let beta = db_to_factor(15.0);
    println!("{:>9} {:>12} {:>12} {:>12} {:>12}", "eps_read", "q_opt", "q_star", "S_opt/N0", "S_full/N0");
    for eps_read in [0.001, 0.01, 0.0252, 0.05, 0.1, 0.3] {
        let p = CavityParams::default().with_losses(0.001, eps_read, 0.0);
        let n0 = p.normalization().n0;
        let analytic = optimal_sensitivity(&p, beta);
        let numeric = numeric_optimal_gain(&p, beta, 1.0, 0.0, ModelKind::SingleMode)?;
        let full = numeric_optimal_gain(&p, beta, 1.0, 0.0, ModelKind::Full)?;
        println!(
            "{eps_read:>9} {:>12.6e} {:>12.6e} {:>12.6e} {:>12.6e}",
            analytic.q_opt,
            numeric.q_star,
            analytic.s_hh / n0,
            full.s_star / n0
        );
    }
    Ok(())
}
