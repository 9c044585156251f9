//! Numerical machinery: optimal internal gain by golden-section search,
//! half-width-half-maximum bandwidth by bisection, SNR gain and the
//! sensitivity-bandwidth product (SBP).
//!
//! The SBP is `S * B` with `S = 1 / S_hh(0)` (peak inverse strain PSD) and
//! `B` the HWHM bandwidth in rad/s, i.e. the frequency at which `S_hh`
//! doubles. For coherent light without losses it equals `1 / (N0 tau)`
//! whatever the cavity coupling.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::model::{validate, CavityParams, SqueezeSettings};
use crate::single_mode::{self, clamp_gain, THRESHOLD_GUARD};
use crate::spectrum::ModelKind;

/// One-line description of the SBP written into dataset headers.
pub const SBP_DEFINITION: &str =
    "sbp = omega_hwhm / S_hh(0); omega_hwhm solves S_hh(omega) = 2 S_hh(0) (rad/s)";

/// SNR gains above this are reported as this value.
pub const SNR_GAIN_CAP: f64 = 1e12;

const INV_PHI: f64 = 0.618_033_988_749_894_8;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Minimum {
    pub x: f64,
    pub fx: f64,
    pub n_evals: usize,
}

/// Golden-section minimisation of a unimodal `f` on `[lo, hi]` down to a
/// bracket of width `xtol`. The endpoints are evaluated too, so the result is
/// never worse than either end of the interval.
pub fn golden_section<F>(mut f: F, lo: f64, hi: f64, xtol: f64, max_iter: usize) -> Result<Minimum>
where
    F: FnMut(f64) -> Result<f64>,
{
    let (mut a, mut b) = (lo, hi);
    let mut c = b - INV_PHI * (b - a);
    let mut d = a + INV_PHI * (b - a);
    let (mut fc, mut fd) = (f(c)?, f(d)?);
    let mut n_evals = 2;
    let mut iter = 0;
    while b - a > xtol {
        if iter == max_iter {
            return Err(Error::NonConvergence { iterations: iter });
        }
        iter += 1;
        if fc < fd {
            b = d;
            d = c;
            fd = fc;
            c = b - INV_PHI * (b - a);
            fc = f(c)?;
        } else {
            a = c;
            c = d;
            fc = fd;
            d = a + INV_PHI * (b - a);
            fd = f(d)?;
        }
        n_evals += 1;
    }

    let mid = 0.5 * (a + b);
    let mut best = Minimum {
        x: mid,
        fx: f(mid)?,
        n_evals: n_evals + 1,
    };
    for end in [lo, hi] {
        let fe = f(end)?;
        best.n_evals += 1;
        if fe < best.fx {
            best.x = end;
            best.fx = fe;
        }
    }
    Ok(best)
}

/// Bisection for a sign change of `f` in `[lo, hi]`, stopping when the
/// bracket is narrower than `rtol` times its upper magnitude (or `rtol`
/// absolute near zero).
pub fn bisect<F>(mut f: F, mut lo: f64, mut hi: f64, rtol: f64, max_iter: usize) -> Result<f64>
where
    F: FnMut(f64) -> Result<f64>,
{
    let mut f_lo = f(lo)?;
    let f_hi = f(hi)?;
    if f_lo == 0.0 {
        return Ok(lo);
    }
    if f_hi == 0.0 {
        return Ok(hi);
    }
    if f_lo.signum() == f_hi.signum() {
        return Err(Error::Bracket(format!(
            "no sign change on [{lo:e}, {hi:e}] (f = {f_lo:e}, {f_hi:e})"
        )));
    }
    for _ in 0..max_iter {
        let mid = 0.5 * (lo + hi);
        if hi - lo <= rtol * lo.abs().max(hi.abs()).max(1.0e-300) {
            return Ok(mid);
        }
        let f_mid = f(mid)?;
        if f_mid == 0.0 {
            return Ok(mid);
        }
        if f_mid.signum() == f_lo.signum() {
            lo = mid;
            f_lo = f_mid;
        } else {
            hi = mid;
        }
    }
    Err(Error::NonConvergence { iterations: max_iter })
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct OptimizerConfig {
    /// Absolute tolerance in `q`.
    pub xtol: f64,
    pub max_iter: usize,
}

impl Default for OptimizerConfig {
    fn default() -> Self {
        Self {
            xtol: 1e-10,
            max_iter: 500,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct OptimizationResult {
    pub q_star: f64,
    pub s_star: f64,
    pub n_evals: usize,
    pub converged: bool,
    /// The optimum sits on the guarded search boundary.
    pub clamped: bool,
}

/// Minimises the strain sensitivity over internal gain on
/// `(-q_th + delta, q_th - delta)`, `delta = 1e-6 q_th`.
pub fn numeric_optimal_gain(
    params: &CavityParams,
    beta: f64,
    zeta: f64,
    omega: f64,
    model: ModelKind,
) -> Result<OptimizationResult> {
    numeric_optimal_gain_with(OptimizerConfig::default(), params, beta, zeta, omega, model)
}

pub fn numeric_optimal_gain_with(
    config: OptimizerConfig,
    params: &CavityParams,
    beta: f64,
    zeta: f64,
    omega: f64,
    model: ModelKind,
) -> Result<OptimizationResult> {
    let settings = SqueezeSettings::new(0.0, beta, zeta);
    validate(params, &settings).into_result()?;
    let bound = params.threshold() * (1.0 - THRESHOLD_GUARD);
    let min = golden_section(
        |q| model.sensitivity(params, &settings.with_q(q), omega),
        -bound,
        bound,
        config.xtol,
        config.max_iter,
    )?;
    let edge = 2.0 * config.xtol;
    Ok(OptimizationResult {
        q_star: min.x,
        s_star: min.fx,
        n_evals: min.n_evals,
        converged: true,
        clamped: min.x - (-bound) <= edge || bound - min.x <= edge,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct BandwidthResult {
    pub omega_hwhm: f64,
    pub s_peak: f64,
    pub sbp: f64,
}

/// Relative tolerance on the HWHM frequency.
pub const BANDWIDTH_RTOL: f64 = 1e-12;

/// Half-width half-maximum of the sensitivity: the `Omega > 0` at which
/// `S_hh(Omega) = 2 S_hh(0)`. The bracket grows geometrically from
/// `1/(100 tau)` and gives up at `pi/(4 tau)`.
pub fn bandwidth(params: &CavityParams, settings: &SqueezeSettings, model: ModelKind) -> Result<BandwidthResult> {
    let s_peak = model.sensitivity(params, settings, 0.0)?;
    let excess = |omega: f64| Ok(model.sensitivity(params, settings, omega)? - 2.0 * s_peak);

    let limit = std::f64::consts::FRAC_PI_4 / params.tau;
    let mut lo = 0.0;
    let mut hi = 1.0 / (100.0 * params.tau);
    while excess(hi)? < 0.0 {
        if hi >= limit {
            return Err(Error::Bracket(format!(
                "sensitivity does not double below pi/(4 tau) = {limit:e} rad/s"
            )));
        }
        lo = hi;
        hi = (2.0 * hi).min(limit);
    }
    let omega_hwhm = bisect(excess, lo, hi, BANDWIDTH_RTOL, 200)?;
    Ok(BandwidthResult {
        omega_hwhm,
        s_peak,
        sbp: omega_hwhm / s_peak,
    })
}

/// `S_hh(q = 0) / S_hh(q)` at the same external squeezing; above one means
/// internal squeezing helps.
pub fn snr_gain(model: ModelKind, params: &CavityParams, beta: f64, q: f64, omega: f64) -> Result<f64> {
    let settings = SqueezeSettings::new(q, beta, 1.0);
    let reference = model.sensitivity(params, &settings.with_q(0.0), omega)?;
    let value = model.sensitivity(params, &settings, omega)?;
    if value <= 0.0 || reference / value > SNR_GAIN_CAP {
        Ok(SNR_GAIN_CAP)
    } else {
        Ok(reference / value)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum SbpReference {
    /// No internal and no external squeezing: the standard
    /// sensitivity-bandwidth limit.
    Standard,
    /// External squeezing at the same level, no internal squeezing.
    ExternalOnly,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct SbpGain {
    /// SBP at optimal internal gain over the reference SBP.
    pub ratio: f64,
    pub bandwidth_ratio: f64,
    pub q_opt: f64,
    pub optimum: BandwidthResult,
    pub reference: BandwidthResult,
}

/// Optimal internal gain for the chosen model: closed form (clamped) for the
/// single-mode model, golden-section search for the exact model.
pub fn optimal_gain_for(model: ModelKind, params: &CavityParams, beta: f64) -> Result<f64> {
    match model {
        ModelKind::SingleMode => Ok(clamp_gain(params, single_mode::optimal_gain_general(params, beta, 1.0)).0),
        ModelKind::Full => Ok(numeric_optimal_gain(params, beta, 1.0, 0.0, ModelKind::Full)?.q_star),
    }
}

/// SBP at optimal internal gain relative to a reference configuration.
pub fn sbp_gain(model: ModelKind, params: &CavityParams, beta: f64, reference: SbpReference) -> Result<SbpGain> {
    let q_opt = optimal_gain_for(model, params, beta)?;
    let optimum = bandwidth(params, &SqueezeSettings::new(q_opt, beta, 1.0), model)?;
    let reference_beta = match reference {
        SbpReference::Standard => 1.0,
        SbpReference::ExternalOnly => beta,
    };
    let reference = bandwidth(params, &SqueezeSettings::new(0.0, reference_beta, 1.0), model)?;
    Ok(SbpGain {
        ratio: optimum.sbp / reference.sbp,
        bandwidth_ratio: optimum.omega_hwhm / reference.omega_hwhm,
        q_opt,
        optimum,
        reference,
    })
}

/// Readout loss at which the optimal internal gain changes sign, found by
/// bisection. Below it internal squeezing is optimal, above it internal
/// amplification. At this point the optimum is `q = 0`, so the SBP relative
/// to external squeezing alone equals one there and exceeds one elsewhere.
///
/// `None` when the optimal gain is non-positive already without readout loss
/// (`eps_int >= T_c`).
pub fn gain_sign_change_eps_read(params: &CavityParams, beta: f64) -> Option<f64> {
    let gain_at = |eps_read: f64| {
        let p = CavityParams { eps_read, ..*params };
        Ok(single_mode::optimal_gain(&p, beta))
    };
    bisect(gain_at, 0.0, 1.0 - 1e-12, 1e-13, 200).ok()
}
