#![allow(dead_code)]

use rand::Rng;
use squeezelim::FullModelParams;

pub fn rel(a: f64, b: f64) -> f64 {
    ((a - b) / b).abs()
}

/// A below-threshold exact-model configuration. `u` places the gain inside
/// the open stability interval `(sqrt(rho), 1/sqrt(rho))` on a log scale.
pub fn full_params(
    t_c: f64,
    r_b: f64,
    eps_int: f64,
    eps_inj: f64,
    eps_read: f64,
    u: f64,
    zeta: f64,
) -> FullModelParams {
    let mut fp = FullModelParams {
        r_c: (1.0 - t_c).sqrt(),
        r_b,
        r_int: eps_int.sqrt(),
        r_i: eps_inj.sqrt(),
        r_d: eps_read.sqrt(),
        gain: 1.0,
        tau: 1e-8,
        zeta,
    };
    fp.gain = (-0.25 * fp.round_trip().ln() * u).exp();
    fp
}

/// Random draw used by the oracle checks: moderate finesse, all ports open.
pub fn random_full_params<R: Rng>(rng: &mut R) -> (FullModelParams, f64, f64) {
    let fp = full_params(
        rng.gen_range(0.005..0.3),
        rng.gen_range(0.95..=1.0),
        rng.gen_range(0.0..0.05),
        rng.gen_range(0.0..0.3),
        rng.gen_range(0.0..0.5),
        rng.gen_range(-0.95..0.95),
        rng.gen_range(1.0..100.0),
    );
    let beta = 10f64.powf(rng.gen_range(0.0..3.0));
    let omega = rng.gen_range(0.0..std::f64::consts::PI) / fp.tau;
    (fp, beta, omega)
}
