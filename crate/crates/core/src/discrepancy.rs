//! Closed forms as they appear in the literature where they disagree with
//! the model they are meant to summarise.
//!
//! None of these feed the computations in the rest of the crate. They exist
//! so the differences can be measured and reported (see
//! [`LimitReport`](crate::single_mode::LimitReport)) instead of silently
//! reconciled.

use crate::full_model::{injected_variance, NoiseTerms};
use crate::model::{CavityParams, FullModelParams};

/// `T_c (1 - 2 eps_r / (beta (1 - eps_r) - eps_r)) - eps_int`.
///
/// Not the minimiser of the single-mode sensitivity: it disagrees with the
/// `beta = 1` optimum `q_th - 2 (T_c eps_r + eps_int)` and tends to
/// `T_c - eps_int` rather than `-q_th` for infinite squeezing. Compare
/// [`optimal_gain`](crate::single_mode::optimal_gain).
pub fn printed_optimal_gain(params: &CavityParams, beta: f64) -> f64 {
    let r = params.eps_read;
    params.t_c * (1.0 - 2.0 * r / (beta * (1.0 - r) - r)) - params.eps_int
}

/// `N0/(1 - eps_r) (T_c eps_r / 4 + eps_int / 2 + eps_int^2 / (4 T_c))`.
///
/// The model gives `T_c / 4` for the first term: without internal or
/// external squeezing the output is vacuum whatever the readout loss, so a
/// lossless cavity sits at `N0 T_c / 4`, not zero. Compare
/// [`limit_q0`](crate::single_mode::limit_q0).
pub fn printed_reference_q0_no_squeezing(params: &CavityParams) -> f64 {
    let n0 = params.normalization().n0;
    let (t_c, e, r) = (params.t_c, params.eps_int, params.eps_read);
    n0 / (1.0 - r) * (t_c * r / 4.0 + e / 2.0 + e * e / (4.0 * t_c))
}

/// The grouped noise term `S2` with `R_b - G^4 R_c` in place of
/// `R_b + G^4 R_c`. With it the closed-form noise of a lossless passive
/// cavity is `1 - 2 R_c / |D|^2` instead of 1.
pub fn printed_s2(fp: &FullModelParams, beta: f64) -> f64 {
    let g2 = fp.gain * fp.gain;
    let (r_c2, r_b2) = (fp.r_c * fp.r_c, fp.r_b * fp.r_b);
    let sv = injected_variance(beta, fp.eps_inj());
    g2 * g2 + r_b2 * r_c2 - fp.zeta * (sv * (r_b2 - g2 * g2 * r_c2) + g2 * (1.0 - r_b2) * (1.0 - r_c2))
}

/// Closed-form readout noise evaluated with [`printed_s2`].
pub fn printed_noise_psd(fp: &FullModelParams, beta: f64, omega: f64) -> f64 {
    let NoiseTerms { s1, s3, d_sq, .. } = crate::full_model::noise_terms(fp, beta, omega);
    let s2 = printed_s2(fp, beta);
    let cos = (2.0 * omega * fp.tau).cos();
    1.0 - (1.0 - fp.eps_read()) / d_sq * (s1 * fp.eps_int() + s2 + s3 * fp.round_trip() * cos)
}

/// Optimised sensitivity with the numerator factor `1 - eps_inj (1 + beta)`
/// in place of `1 + eps_inj (beta - 1)`. Goes negative for large `beta`
/// whenever `eps_inj > 0`.
pub fn printed_full_opt_sensitivity(params: &CavityParams, beta: f64, zeta: f64, omega: f64) -> f64 {
    let n0 = params.normalization().n0;
    let (t_c, r, ei) = (params.t_c, params.eps_read, params.eps_inj);
    let injected = 1.0 - (1.0 - beta) * ei;
    let weight = beta * r + zeta * (1.0 - r) * injected;
    let peak = t_c * r * (1.0 - ei * (1.0 + beta)) / weight;
    let spread = 4.0 * (omega * params.tau).powi(2) / (t_c * beta * zeta * (1.0 - r)) * weight;
    n0 * (peak + params.eps_int + spread)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::full_model::noise_psd_closed;
    use crate::single_mode::{full_opt_sensitivity, limit_q0, optimal_gain};

    #[test]
    fn printed_gain_differs_from_minimiser() {
        let p = CavityParams::default().with_losses(0.001, 0.1, 0.0);
        let printed = printed_optimal_gain(&p, 31.6228);
        assert!((printed - 8.929_48e-3).abs() < 1e-8);
        assert!((printed - optimal_gain(&p, 31.6228)).abs() > 1e-2);
    }

    #[test]
    fn printed_reference_vanishes_for_lossless_cavity() {
        let p = CavityParams::default();
        assert_eq!(printed_reference_q0_no_squeezing(&p), 0.0);
        assert!(limit_q0(&p, 1.0) > 0.0);
        // agrees once eps_read = 1 would make T_c eps_r / 4 = T_c / 4
        let p = CavityParams::default().with_losses(0.002, 0.0, 0.0);
        let diff = limit_q0(&p, 1.0) - printed_reference_q0_no_squeezing(&p);
        assert!((diff / (p.normalization().n0 * 0.01 / 4.0) - 1.0).abs() < 1e-12);
    }

    #[test]
    fn printed_s2_breaks_vacuum_throughput() {
        let fp = FullModelParams::passive(0.99f64.sqrt(), 1e-8);
        assert!((noise_psd_closed(&fp, 1.0, 0.0).unwrap() - 1.0).abs() < 1e-12);
        let printed = printed_noise_psd(&fp, 1.0, 0.0);
        let d_sq = crate::full_model::denominator_sq(&fp, 0.0);
        assert!((printed - (1.0 - 2.0 * 0.99 / d_sq)).abs() < 1e-6 * printed.abs());
    }

    #[test]
    fn printed_full_optimum_goes_negative() {
        let p = CavityParams::default().with_losses(1e-4, 0.1, 0.05);
        assert!(printed_full_opt_sensitivity(&p, 1e9, 1.0, 0.0) < 0.0);
        assert!(full_opt_sensitivity(&p, 1e9, 1.0, 0.0) > 0.0);
        let p0 = CavityParams::default().with_losses(0.001, 0.1, 0.0);
        assert_eq!(
            printed_full_opt_sensitivity(&p0, 30.0, 2.0, 1e3),
            full_opt_sensitivity(&p0, 30.0, 2.0, 1e3)
        );
    }
}
