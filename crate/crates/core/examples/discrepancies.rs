//! Closed forms from the literature that disagree with the model, next to
//! the model's own values.
//!
//!     cargo run --example discrepancies

use squeezelim::discrepancy::{printed_optimal_gain, printed_reference_q0_no_squeezing};
use squeezelim::single_mode::{limit_q0, optimal_gain, sensitivity_sm};
use squeezelim::{model::db_to_factor, CavityParams, SqueezeSettings};

fn main() -> squeezelim::Result<()> {
    let p = CavityParams::default().with_losses(0.001, 0.1, 0.0);
    let n0 = p.normalization().n0;
    let beta = db_to_factor(15.0);

    let printed = printed_optimal_gain(&p, beta);
    let derived = optimal_gain(&p, beta);
    let at = |q| sensitivity_sm(&p, &SqueezeSettings::new(q, beta, 1.0), 0.0);
    println!("optimal gain: printed {printed:.6e} -> S/N0 = {:.6e}", at(printed)? / n0);
    println!("              minimiser {derived:.6e} -> S/N0 = {:.6e}", at(derived)? / n0);

    println!(
        "beta = 1, q = 0 reference: printed {:.6e}, model {:.6e} (x N0)",
        printed_reference_q0_no_squeezing(&p) / n0,
        limit_q0(&p, 1.0) / n0
    );
    Ok(())
}
