//! Single-mode approximation: noise, signal transfer and strain sensitivity
//! of the squeezer cavity, together with the closed-form limiting cases and
//! the optimal internal gain.
//!
//! With `D(Omega) = (q + T_c + eps_int)^2 + 16 Omega^2 tau^2` the readout
//! noise (no injection loss, no output amplification) is
//!
//! ```text
//! S_n = [D - 4 q T_c (1 - eps_read)
//!          - (1 - 1/beta)(1 - eps_read)((q - T_c + eps_int)^2 + 16 Omega^2 tau^2)] / D
//! ```
//!
//! and the signal transfer `|T|^2 = (8 pi P_c / hbar lambda c) 4 T_c (1 - eps_read) / D`.
//! Injection loss replaces `1/beta` by `eps_inj + (1 - eps_inj)/beta`; an
//! output amplifier scales the cavity output by `zeta` ahead of the readout
//! loss. Both reduce exactly to the expression above when `eps_inj = 0` and
//! `zeta = 1`.
//!
//! All strain PSDs are in the same units as [`NormalizationConstants::n0`](crate::model::NormalizationConstants).

use serde::Serialize;

use crate::error::Result;
use crate::full_model::injected_variance;
use crate::model::{signal_scale, validate, CavityParams, SqueezeSettings};

/// Guard `delta = THRESHOLD_GUARD * q_th` kept between any optimised gain and
/// the threshold.
pub const THRESHOLD_GUARD: f64 = 1e-6;

/// Value standing in for infinite external squeezing or output amplification
/// in large-parameter cross-checks.
pub const LARGE_FACTOR: f64 = 1e9;

fn linewidth_sq(params: &CavityParams, q: f64, omega: f64) -> f64 {
    let detuning = 4.0 * omega * params.tau;
    (q + params.t_c + params.eps_int).powi(2) + detuning * detuning
}

fn squeezing_term(params: &CavityParams, q: f64, omega: f64) -> f64 {
    let detuning = 4.0 * omega * params.tau;
    (q - params.t_c + params.eps_int).powi(2) + detuning * detuning
}

/// Readout noise spectral density, dimensionless (vacuum = 1).
pub fn noise_sm(params: &CavityParams, settings: &SqueezeSettings, omega: f64) -> Result<f64> {
    validate(params, settings).into_result()?;
    let SqueezeSettings { q, beta, zeta } = *settings;
    let kept = 1.0 - params.eps_read;
    let d = linewidth_sq(params, q, omega);
    let x = squeezing_term(params, q, omega);
    let sv = injected_variance(beta, params.eps_inj);

    let mut numerator = d - 4.0 * q * params.t_c * kept - (1.0 - sv) * kept * x;
    if zeta != 1.0 {
        numerator += (zeta - 1.0) * kept * (sv * x + 4.0 * params.t_c * params.eps_int);
    }
    Ok(numerator / d)
}

/// Signal power transfer including the `8 pi P_c / (hbar lambda c)`
/// displacement normalisation.
pub fn transfer_sq_sm(params: &CavityParams, settings: &SqueezeSettings, omega: f64) -> Result<f64> {
    validate(params, settings).into_result()?;
    let d = linewidth_sq(params, settings.q, omega);
    Ok(signal_scale(params) * 4.0 * params.t_c * (1.0 - params.eps_read) * settings.zeta / d)
}

/// Strain-referred noise-to-signal ratio.
pub fn sensitivity_sm(params: &CavityParams, settings: &SqueezeSettings, omega: f64) -> Result<f64> {
    let noise = noise_sm(params, settings, omega)?;
    let transfer = transfer_sq_sm(params, settings, omega)?;
    Ok(noise / transfer / (params.length * params.length))
}

/// Lossless quantum Cramér-Rao bound as quoted in the literature,
/// `N0 (T_c - q)^2 / (beta T_c)`. Loss fields are ignored.
pub fn qcrb(params: &CavityParams, settings: &SqueezeSettings) -> f64 {
    let n0 = params.normalization().n0;
    n0 * (params.t_c - settings.q).powi(2) / (settings.beta * params.t_c)
}

/// The lossless limit of [`sensitivity_sm`] at `Omega = 0`,
/// `N0 (T_c - q)^2 / (4 beta T_c)`. Differs from [`qcrb`] by exactly 4.
pub fn qcrb_model(params: &CavityParams, settings: &SqueezeSettings) -> f64 {
    qcrb(params, settings) / 4.0
}

/// Sensitivity without internal squeezing at `Omega = 0`, for any external
/// squeeze factor (injection loss included).
pub fn limit_q0(params: &CavityParams, beta: f64) -> f64 {
    let n0 = params.normalization().n0;
    let kept = 1.0 - params.eps_read;
    let sv = injected_variance(beta, params.eps_inj);
    let sum = params.t_c + params.eps_int;
    let diff = params.t_c - params.eps_int;
    n0 * (sum * sum - kept * (1.0 - sv) * diff * diff) / (4.0 * params.t_c * kept)
}

/// `beta -> infinity` reference without internal squeezing,
/// `N0/(1 - eps_r) (T_c eps_r / 4 + (2 - eps_r) eps_int / 2 + eps_r eps_int^2 / (4 T_c))`.
pub fn limit_q0_infinite_squeezing(params: &CavityParams) -> f64 {
    let n0 = params.normalization().n0;
    let (t_c, e, r) = (params.t_c, params.eps_int, params.eps_read);
    n0 / (1.0 - r) * (t_c * r / 4.0 + (2.0 - r) * e / 2.0 + r * e * e / (4.0 * t_c))
}

/// Internal squeezing at threshold,
/// `N0/(1 - eps_r) (T_c eps_r + eps_int + eps_int^2 / (4 T_c))`, independent
/// of `beta`.
///
/// The model evaluated at `q -> q_th` agrees to leading order in the losses;
/// it differs by `eps_int eps_r + (3/4) eps_int^2 / T_c` at `beta = 1`.
pub fn limit_threshold(params: &CavityParams) -> f64 {
    let n0 = params.normalization().n0;
    let (t_c, e, r) = (params.t_c, params.eps_int, params.eps_read);
    n0 / (1.0 - r) * (t_c * r + e + e * e / (4.0 * t_c))
}

/// Optimal internal gain together with the sensitivity it reaches.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct OptimalGain {
    pub s_hh: f64,
    /// Optimal gain restricted to `[-q_th + delta, q_th - delta]`.
    pub q_opt: f64,
    pub q_unclamped: f64,
    pub clamped: bool,
}

/// Clamps `q` into the guarded open interval below threshold.
pub fn clamp_gain(params: &CavityParams, q: f64) -> (f64, bool) {
    let q_th = params.threshold();
    let bound = q_th * (1.0 - THRESHOLD_GUARD);
    if q > bound {
        (bound, true)
    } else if q < -bound {
        (-bound, true)
    } else {
        (q, false)
    }
}

/// Gain minimising the `Omega = 0` sensitivity for arbitrary injection loss
/// and output amplification:
/// `q* = [A (T_c - eps_int) - eps_r (T_c + eps_int)] / (A + eps_r)` with
/// `A = zeta (1 - eps_r)(eps_inj + (1 - eps_inj)/beta)`.
///
/// The minimiser does not depend on `Omega`. It lies in `[-q_th, T_c - eps_int]`,
/// reaching `-q_th` only for infinite squeezing.
pub fn optimal_gain_general(params: &CavityParams, beta: f64, zeta: f64) -> f64 {
    let r = params.eps_read;
    let a = zeta * (1.0 - r) * injected_variance(beta, params.eps_inj);
    (a * (params.t_c - params.eps_int) - r * (params.t_c + params.eps_int)) / (a + r)
}

/// Optimal gain without injection loss or output amplification,
/// `q_opt = T_c (1 - 2 beta eps_r / (1 + eps_r (beta - 1))) - eps_int`.
pub fn optimal_gain(params: &CavityParams, beta: f64) -> f64 {
    let r = params.eps_read;
    params.t_c * (1.0 - 2.0 * beta * r / (1.0 + r * (beta - 1.0))) - params.eps_int
}

/// Best `Omega = 0` sensitivity over internal gain (no injection loss, no
/// output amplification): `N0 (T_c eps_r / (1 + eps_r (beta - 1)) + eps_int)`.
pub fn optimal_sensitivity(params: &CavityParams, beta: f64) -> OptimalGain {
    let n0 = params.normalization().n0;
    let r = params.eps_read;
    let s_hh = n0 * (params.t_c * r / (1.0 + r * (beta - 1.0)) + params.eps_int);
    let q_unclamped = optimal_gain(params, beta);
    let (q_opt, clamped) = clamp_gain(params, q_unclamped);
    OptimalGain {
        s_hh,
        q_opt,
        q_unclamped,
        clamped,
    }
}

/// Sensitivity at the optimal internal gain with injection loss, output
/// amplification and finite frequency.
pub fn full_opt_sensitivity(params: &CavityParams, beta: f64, zeta: f64, omega: f64) -> f64 {
    let n0 = params.normalization().n0;
    let (t_c, r, e) = (params.t_c, params.eps_read, params.eps_int);
    // beta times the injected readout-quadrature variance
    let injected = 1.0 + (beta - 1.0) * params.eps_inj;
    let weight = beta * r + zeta * (1.0 - r) * injected;
    let peak = t_c * r * injected / weight;
    let spread = 4.0 * (omega * params.tau).powi(2) / (t_c * beta * zeta * (1.0 - r)) * weight;
    n0 * (peak + e + spread)
}

/// `beta -> infinity` limit of [`full_opt_sensitivity`] at `Omega = 0`:
/// `N0 (T_c eps_r eps_inj / (eps_r + zeta eps_inj (1 - eps_r)) + eps_int)`.
pub fn limit_injection(params: &CavityParams, zeta: f64) -> f64 {
    let n0 = params.normalization().n0;
    let (t_c, r, ei) = (params.t_c, params.eps_read, params.eps_inj);
    let den = r + zeta * ei * (1.0 - r);
    let term = if den > 0.0 { t_c * r * ei / den } else { 0.0 };
    n0 * (term + params.eps_int)
}

/// Output amplification and external squeezing, both infinite, without
/// internal squeezing: `N0 (eps_int + eps_inj (T_c - eps_int)^2 / (4 T_c))`.
pub fn limit_output_amp_only(params: &CavityParams) -> f64 {
    let n0 = params.normalization().n0;
    let (t_c, e) = (params.t_c, params.eps_int);
    n0 * (e + params.eps_inj * (t_c - e).powi(2) / (4.0 * t_c))
}

/// Internal-loss floor `N0 eps_int`, the infinite-squeezing optimum.
pub fn decoherence_limit(params: &CavityParams) -> f64 {
    params.normalization().n0 * params.eps_int
}

/// Every named limit for one parameter set, evaluated at `Omega = 0`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct LimitReport {
    pub n0: f64,
    pub q_th: f64,
    pub qcrb: f64,
    /// Lossless model value; see [`qcrb_model`].
    pub qcrb_model: f64,
    /// `qcrb / qcrb_model`.
    pub qcrb_ratio: f64,
    /// `q = 0`, `beta = 1`.
    pub ref_no_isqz_nosqz: f64,
    /// The literature expression for `q = 0`, `beta = 1`, kept for comparison.
    pub ref_no_isqz_nosqz_printed: f64,
    /// `q = 0`, `beta -> infinity`.
    pub ref_no_isqz_infsqz: f64,
    /// `q = 0` at the configured `beta`.
    pub ref_no_isqz: f64,
    pub at_threshold: f64,
    pub optimal: f64,
    pub q_opt: f64,
    pub q_opt_clamped: bool,
    /// The literature closed form for the optimal gain, kept for comparison.
    pub q_opt_printed: f64,
    pub decoherence_limit: f64,
    /// Optimised sensitivity with injection loss and output amplification.
    pub full_opt: f64,
    pub q_opt_general: f64,
    /// `beta -> infinity` at the configured `zeta`.
    pub inj_limit: f64,
    pub zeta_inf_limit: f64,
    pub output_amp_only_limit: f64,
    /// Readout loss at which the optimal gain changes sign (squeezing to
    /// amplification), if any.
    pub q_opt_sign_change_eps_read: Option<f64>,
}

impl LimitReport {
    pub fn compute(params: &CavityParams, settings: &SqueezeSettings) -> Self {
        let n0 = params.normalization().n0;
        let beta = settings.beta;
        let optimum = optimal_sensitivity(params, beta);
        let qcrb = qcrb(params, settings);
        let qcrb_model = qcrb_model(params, settings);
        LimitReport {
            n0,
            q_th: params.threshold(),
            qcrb,
            qcrb_model,
            qcrb_ratio: qcrb / qcrb_model,
            ref_no_isqz_nosqz: limit_q0(params, 1.0),
            ref_no_isqz_nosqz_printed: crate::discrepancy::printed_reference_q0_no_squeezing(params),
            ref_no_isqz_infsqz: limit_q0_infinite_squeezing(params),
            ref_no_isqz: limit_q0(params, beta),
            at_threshold: limit_threshold(params),
            optimal: optimum.s_hh,
            q_opt: optimum.q_opt,
            q_opt_clamped: optimum.clamped,
            q_opt_printed: crate::discrepancy::printed_optimal_gain(params, beta),
            decoherence_limit: decoherence_limit(params),
            full_opt: full_opt_sensitivity(params, beta, settings.zeta, 0.0),
            q_opt_general: optimal_gain_general(params, beta, settings.zeta),
            inj_limit: limit_injection(params, settings.zeta),
            zeta_inf_limit: decoherence_limit(params),
            output_amp_only_limit: limit_output_amp_only(params),
            q_opt_sign_change_eps_read: crate::optimize::gain_sign_change_eps_read(params, beta),
        }
    }
}
