//! Every closed-form sensitivity limit for one loss budget, normalised to
//! the shot-noise scale N0.
//!
//!     cargo run --example limits

use squeezelim::{model::db_to_factor, CavityParams, LimitReport, SqueezeSettings};

fn main() {
    let params = CavityParams::default().with_losses(0.001, 0.1, 0.0);
    let settings = SqueezeSettings::new(0.0, db_to_factor(15.0), 1.0);
    let r = LimitReport::compute(&params, &settings);
    let n = |v: f64| v / r.n0;

    println!("N0 = {:.6e} 1/Hz, q_th = {}", r.n0, r.q_th);
    println!("no internal squeezing, no external   {:.6e}", n(r.ref_no_isqz_nosqz));
    println!("no internal squeezing, 15 dB         {:.6e}", n(r.ref_no_isqz));
    println!("no internal squeezing, infinite      {:.6e}", n(r.ref_no_isqz_infsqz));
    println!("internal squeezing at threshold      {:.6e}", n(r.at_threshold));
    println!("optimal internal gain (q = {:+.5})  {:.6e}", r.q_opt, n(r.optimal));
    println!("infinite external squeezing          {:.6e}", n(r.decoherence_limit));
    println!("output amplification only, zeta->inf {:.6e}", n(r.output_amp_only_limit));
    if let Some(eps) = r.q_opt_sign_change_eps_read {
        println!("internal amplification is optimal above eps_read = {eps:.4}");
    }
}
