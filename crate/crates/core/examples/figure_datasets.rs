//! Regenerates the built-in figure datasets into a directory and prints the
//! readout loss at which each Fig. 5 curve reaches unity.
//!
//!     cargo run --example figure_datasets -- /tmp/figures

use std::path::PathBuf;

use squeezelim::scenario::figures::{emit_figure_datasets, fig5_unity_points, Figure};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let out: PathBuf = std::env::args().nth(1).unwrap_or_else(|| "figures".into()).into();
    for figure in Figure::ALL {
        for path in emit_figure_datasets(figure, &out, None)? {
            println!("wrote {}", path.display());
        }
    }
    for (db, eps) in fig5_unity_points() {
        println!("{db} dB: q_opt = 0 at eps_read = {eps:?}");
    }
    Ok(())
}
