//! Shared domain types: cavity parameters, squeeze settings, amplitude-domain
//! parameters of the exact cavity model, strain normalisation and validation.
//!
//! Conventions used throughout the crate:
//!
//! * every loss (`eps_*`) and the coupling-mirror transmissivity `t_c` is a
//!   *power* fraction;
//! * `q` is the single-mode internal gain. `q > 0` squeezes the signal (phase)
//!   quadrature inside the cavity, `q < 0` amplifies it. The parametric
//!   threshold is `q_th = t_c + eps_int` and `|q| < q_th` is required;
//! * the exact model is parameterised by the single-pass amplitude gain
//!   `G`, mapped from `q` so that both models share the threshold
//!   (`G ~ exp(q / 4)` to first order);
//! * `beta = exp(2 r_ext) >= 1` is the external squeeze factor in power, and
//!   `zeta >= 1` the output amplification in power.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Reduced Planck constant, J s (CODATA 2018).
pub const HBAR: f64 = 1.054_571_817e-34;
/// Speed of light in vacuum, m/s.
pub const SPEED_OF_LIGHT: f64 = 299_792_458.0;

/// `t_c + eps_int + |q|` above which the single-mode approximation is flagged.
pub const SINGLE_MODE_VALIDITY_LIMIT: f64 = 0.1;

/// Converts a squeeze (or amplification) level in dB to a power factor.
pub fn db_to_factor(db: f64) -> f64 {
    10f64.powf(db / 10.0)
}

pub fn factor_to_db(factor: f64) -> f64 {
    10.0 * factor.log10()
}

/// Geometry, power and loss budget of the sensing cavity.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CavityParams {
    /// Power transmissivity of the coupling (front) mirror, in (0, 1).
    pub t_c: f64,
    /// Round-trip internal power loss, in [0, 1).
    #[serde(default)]
    pub eps_int: f64,
    /// Readout loss (propagation and detection inefficiency), in [0, 1).
    #[serde(default)]
    pub eps_read: f64,
    /// Injection loss on the externally squeezed field, in [0, 1).
    #[serde(default)]
    pub eps_inj: f64,
    /// Single-pass time, s.
    #[serde(default = "defaults::tau")]
    pub tau: f64,
    /// Arm length used for strain referencing, m.
    #[serde(default = "defaults::length")]
    pub length: f64,
    /// Intracavity power, W. Held fixed for every internal gain.
    #[serde(default = "defaults::power")]
    pub power: f64,
    /// Carrier wavelength, m.
    #[serde(default = "defaults::wavelength")]
    pub wavelength: f64,
}

mod defaults {
    pub fn length() -> f64 {
        4.0e3
    }
    pub fn tau() -> f64 {
        length() / super::SPEED_OF_LIGHT
    }
    pub fn power() -> f64 {
        7.5e5
    }
    pub fn wavelength() -> f64 {
        1.064e-6
    }
}

impl Default for CavityParams {
    /// A lossless 4 km arm with 1% coupling-mirror transmission, 750 kW
    /// circulating at 1064 nm.
    fn default() -> Self {
        Self {
            t_c: 0.01,
            eps_int: 0.0,
            eps_read: 0.0,
            eps_inj: 0.0,
            tau: defaults::tau(),
            length: defaults::length(),
            power: defaults::power(),
            wavelength: defaults::wavelength(),
        }
    }
}

impl CavityParams {
    pub fn with_losses(mut self, eps_int: f64, eps_read: f64, eps_inj: f64) -> Self {
        self.eps_int = eps_int;
        self.eps_read = eps_read;
        self.eps_inj = eps_inj;
        self
    }

    pub fn with_t_c(mut self, t_c: f64) -> Self {
        self.t_c = t_c;
        self
    }

    pub fn with_tau(mut self, tau: f64) -> Self {
        self.tau = tau;
        self
    }

    /// Parametric threshold `q_th = t_c + eps_int`.
    pub fn threshold(&self) -> f64 {
        self.t_c + self.eps_int
    }

    pub fn normalization(&self) -> NormalizationConstants {
        NormalizationConstants::new(self)
    }

    /// Whether the single-mode formulas are trustworthy at internal gain `q`.
    pub fn single_mode_valid(&self, q: f64) -> bool {
        self.t_c + self.eps_int + q.abs() <= SINGLE_MODE_VALIDITY_LIMIT
    }
}

/// Internal gain, external squeezing and output amplification.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SqueezeSettings {
    pub q: f64,
    pub beta: f64,
    pub zeta: f64,
}

impl Default for SqueezeSettings {
    fn default() -> Self {
        Self::coherent()
    }
}

impl SqueezeSettings {
    pub fn new(q: f64, beta: f64, zeta: f64) -> Self {
        Self { q, beta, zeta }
    }

    /// No squeezing and no amplification anywhere.
    pub fn coherent() -> Self {
        Self::new(0.0, 1.0, 1.0)
    }

    pub fn from_db(q: f64, sqz_db: f64, zeta_db: f64) -> Self {
        Self::new(q, db_to_factor(sqz_db), db_to_factor(zeta_db))
    }

    pub fn with_q(mut self, q: f64) -> Self {
        self.q = q;
        self
    }

    pub fn with_beta(mut self, beta: f64) -> Self {
        self.beta = beta;
        self
    }

    pub fn with_zeta(mut self, zeta: f64) -> Self {
        self.zeta = zeta;
        self
    }
}

/// Amplitude-domain parameters of the exact input-output model.
///
/// Only reflectivities are stored; every transmissivity is derived as
/// `sqrt(1 - r^2)`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct FullModelParams {
    /// Coupling mirror.
    pub r_c: f64,
    /// Back mirror.
    pub r_b: f64,
    /// Internal-loss port.
    pub r_int: f64,
    /// Injection-loss port.
    pub r_i: f64,
    /// Readout-loss port.
    pub r_d: f64,
    /// Single-pass amplitude gain on the amplitude quadrature.
    pub gain: f64,
    pub tau: f64,
    pub zeta: f64,
}

fn transmissivity(r: f64) -> f64 {
    (1.0 - r * r).max(0.0).sqrt()
}

impl FullModelParams {
    /// A lossless passive cavity with the given coupling-mirror reflectivity.
    pub fn passive(r_c: f64, tau: f64) -> Self {
        Self {
            r_c,
            r_b: 1.0,
            r_int: 0.0,
            r_i: 0.0,
            r_d: 0.0,
            gain: 1.0,
            tau,
            zeta: 1.0,
        }
    }

    pub fn t_c(&self) -> f64 {
        transmissivity(self.r_c)
    }
    pub fn t_b(&self) -> f64 {
        transmissivity(self.r_b)
    }
    pub fn t_int(&self) -> f64 {
        transmissivity(self.r_int)
    }
    pub fn t_i(&self) -> f64 {
        transmissivity(self.r_i)
    }
    pub fn t_d(&self) -> f64 {
        transmissivity(self.r_d)
    }

    pub fn eps_int(&self) -> f64 {
        self.r_int * self.r_int
    }
    pub fn eps_inj(&self) -> f64 {
        self.r_i * self.r_i
    }
    pub fn eps_read(&self) -> f64 {
        self.r_d * self.r_d
    }

    /// Round-trip amplitude attenuation `r_b r_c t_int` of the passive cavity.
    pub fn round_trip(&self) -> f64 {
        self.r_b * self.r_c * self.t_int()
    }

    /// Largest round-trip amplitude gain over both quadratures. The model is
    /// below threshold when this is strictly less than one.
    pub fn loop_gain(&self) -> f64 {
        let g2 = self.gain * self.gain;
        self.round_trip() * g2.max(1.0 / g2)
    }

    pub(crate) fn check(&self) -> Result<()> {
        for (field, r) in [
            ("r_c", self.r_c),
            ("r_b", self.r_b),
            ("r_int", self.r_int),
            ("r_i", self.r_i),
            ("r_d", self.r_d),
        ] {
            if !(0.0..=1.0).contains(&r) {
                return Err(Error::InvalidParameter {
                    field,
                    value: r,
                    reason: "amplitude reflectivity must lie in [0, 1]",
                });
            }
        }
        if !(self.gain > 0.0 && self.gain.is_finite()) {
            return Err(Error::InvalidParameter {
                field: "gain",
                value: self.gain,
                reason: "must be positive",
            });
        }
        if !(self.zeta >= 1.0) {
            return Err(Error::InvalidParameter {
                field: "zeta",
                value: self.zeta,
                reason: "must be >= 1",
            });
        }
        if self.loop_gain() >= 1.0 {
            return Err(Error::Threshold {
                gain: self.gain,
                threshold: self.round_trip().powf(-0.5),
            });
        }
        Ok(())
    }
}

/// Physical constants and the strain prefactor `hbar lambda c / (8 pi P_c L^2)`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct NormalizationConstants {
    pub hbar: f64,
    pub c: f64,
    /// Strain PSD per unit of dimensionless noise-to-signal ratio.
    pub n0: f64,
}

impl NormalizationConstants {
    pub fn new(params: &CavityParams) -> Self {
        let n0 = HBAR * params.wavelength * SPEED_OF_LIGHT
            / (8.0 * std::f64::consts::PI * params.power * params.length * params.length);
        Self {
            hbar: HBAR,
            c: SPEED_OF_LIGHT,
            n0,
        }
    }
}

/// Signal normalisation `8 pi P_c / (hbar lambda c)` converting mirror
/// displacement to the dimensionless signal field.
pub fn signal_scale(params: &CavityParams) -> f64 {
    8.0 * std::f64::consts::PI * params.power / (HBAR * params.wavelength * SPEED_OF_LIGHT)
}

#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Violation {
    OutOfRange {
        field: &'static str,
        value: f64,
        allowed: &'static str,
    },
    AtOrAboveThreshold {
        q: f64,
        q_th: f64,
    },
}

impl Violation {
    pub fn into_error(self) -> Error {
        match self {
            Violation::OutOfRange {
                field,
                value,
                allowed,
            } => Error::InvalidParameter {
                field,
                value,
                reason: allowed,
            },
            Violation::AtOrAboveThreshold { q, q_th } => Error::Threshold {
                gain: q,
                threshold: q_th,
            },
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ValidationReport {
    pub violations: Vec<Violation>,
    /// `q_th - |q|`; negative when above threshold.
    pub threshold_margin: f64,
    /// Set when `t_c + eps_int + |q|` exceeds [`SINGLE_MODE_VALIDITY_LIMIT`].
    pub single_mode_warning: bool,
}

impl ValidationReport {
    pub fn is_ok(&self) -> bool {
        self.violations.is_empty()
    }

    pub fn into_result(self) -> Result<()> {
        match self.violations.into_iter().next() {
            None => Ok(()),
            Some(v) => Err(v.into_error()),
        }
    }
}

/// Checks every range invariant of `params` and `settings`. Never fails; the
/// report carries all violations.
pub fn validate(params: &CavityParams, settings: &SqueezeSettings) -> ValidationReport {
    let mut violations = Vec::new();
    let mut range = |field, value: f64, ok: bool, allowed| {
        if !ok {
            violations.push(Violation::OutOfRange {
                field,
                value,
                allowed,
            });
        }
    };

    range("t_c", params.t_c, params.t_c > 0.0 && params.t_c < 1.0, "(0, 1)");
    for (field, value) in [
        ("eps_int", params.eps_int),
        ("eps_read", params.eps_read),
        ("eps_inj", params.eps_inj),
    ] {
        range(field, value, (0.0..1.0).contains(&value), "[0, 1)");
    }
    for (field, value) in [
        ("tau", params.tau),
        ("length", params.length),
        ("power", params.power),
        ("wavelength", params.wavelength),
    ] {
        range(field, value, value > 0.0 && value.is_finite(), "> 0");
    }
    range("q", settings.q, settings.q.is_finite(), "finite");
    range("beta", settings.beta, settings.beta >= 1.0 && settings.beta.is_finite(), ">= 1");
    range("zeta", settings.zeta, settings.zeta >= 1.0 && settings.zeta.is_finite(), ">= 1");

    let q_th = params.threshold();
    let threshold_margin = q_th - settings.q.abs();
    if !(threshold_margin > 0.0) {
        violations.push(Violation::AtOrAboveThreshold {
            q: settings.q,
            q_th,
        });
    }

    ValidationReport {
        violations,
        threshold_margin,
        single_mode_warning: !params.single_mode_valid(settings.q),
    }
}

/// Maps single-mode parameters onto the exact model: `r_c = sqrt(1 - t_c)`,
/// `r_b = 1` (back-mirror transmission folded into `eps_int`), loss ports
/// `r = sqrt(eps)` and `G = (r_c t_int)^(-q / (2 q_th))`.
///
/// The gain agrees with `exp(q / 4)` to first order in `t_c` and `eps_int`
/// but puts `q = q_th` exactly on the exact-model threshold
/// `G^2 r_c t_int = 1`. With plain `exp(q / 4)` the two thresholds differ by
/// `O(t_c^2)`, which near threshold is a 10 % error in the noise.
pub fn map_single_mode_to_full(
    params: &CavityParams,
    settings: &SqueezeSettings,
) -> Result<FullModelParams> {
    validate(params, settings).into_result()?;
    let fp = FullModelParams {
        r_c: (1.0 - params.t_c).sqrt(),
        r_b: 1.0,
        r_int: params.eps_int.sqrt(),
        r_i: params.eps_inj.sqrt(),
        r_d: params.eps_read.sqrt(),
        gain: ((1.0 - params.t_c) * (1.0 - params.eps_int)).powf(-settings.q / (4.0 * params.threshold())),
        tau: params.tau,
        zeta: settings.zeta,
    };
    fp.check()?;
    Ok(fp)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn identity_configuration_is_valid() {
        let report = validate(&CavityParams::default(), &SqueezeSettings::coherent());
        assert!(report.is_ok(), "{report:?}");
        assert!(!report.single_mode_warning);
        assert!((report.threshold_margin - 0.01).abs() < 1e-15);
    }

    #[test]
    fn threshold_violation_reports_margin() {
        let params = CavityParams::default().with_losses(0.001, 0.0, 0.0);
        let report = validate(&params, &SqueezeSettings::coherent().with_q(0.011));
        assert_eq!(report.violations.len(), 1);
        assert!(matches!(
            report.violations[0],
            Violation::AtOrAboveThreshold { q, q_th } if q == 0.011 && (q_th - 0.011).abs() < 1e-15
        ));
        assert!(report.threshold_margin <= 0.0);
        // negative gain has the same threshold
        let report = validate(&params, &SqueezeSettings::coherent().with_q(-0.0115));
        assert!(!report.is_ok());
    }

    #[test]
    fn unit_readout_loss_is_out_of_range() {
        let params = CavityParams::default().with_losses(0.0, 1.0, 0.0);
        let report = validate(&params, &SqueezeSettings::coherent());
        assert!(matches!(
            report.violations[..],
            [Violation::OutOfRange { field: "eps_read", .. }]
        ));
        assert!(matches!(
            report.into_result(),
            Err(Error::InvalidParameter { field: "eps_read", .. })
        ));
    }

    #[test]
    fn collects_every_violation() {
        let params = CavityParams {
            t_c: 1.0,
            tau: -1.0,
            ..CavityParams::default()
        };
        let report = validate(&params, &SqueezeSettings::new(0.0, 0.5, 0.9));
        let fields: Vec<_> = report
            .violations
            .iter()
            .filter_map(|v| match v {
                Violation::OutOfRange { field, .. } => Some(*field),
                _ => None,
            })
            .collect();
        assert_eq!(fields, ["t_c", "tau", "beta", "zeta"]);
    }

    #[test]
    fn single_mode_warning_above_limit() {
        let params = CavityParams::default().with_t_c(0.08).with_losses(0.01, 0.0, 0.0);
        let report = validate(&params, &SqueezeSettings::coherent().with_q(0.02));
        assert!(report.is_ok());
        assert!(report.single_mode_warning);
    }

    #[test]
    fn passive_mapping() {
        let fp = map_single_mode_to_full(&CavityParams::default(), &SqueezeSettings::coherent())
            .unwrap();
        assert_eq!(fp.r_c, 0.99f64.sqrt());
        assert_eq!(fp.gain, 1.0);
        assert_eq!(fp.r_b, 1.0);
        assert_eq!(fp.t_b(), 0.0);
    }

    #[test]
    fn gain_mapping_is_quarter_exponent_to_first_order() {
        let params = CavityParams::default().with_losses(0.001, 0.0, 0.0);
        for q in [-0.008, 0.005] {
            let fp = map_single_mode_to_full(&params, &SqueezeSettings::coherent().with_q(q)).unwrap();
            assert!((fp.gain.ln() - q / 4.0).abs() < 0.011 * 0.011);
        }
        let fp = map_single_mode_to_full(&params, &SqueezeSettings::coherent().with_q(0.011 * (1.0 - 1e-9)))
            .unwrap();
        assert!((fp.gain / crate::full_model::threshold_gain(&fp) - 1.0).abs() < 1e-10);
        assert!(fp.loop_gain() < 1.0);
    }

    #[test]
    fn mapping_at_single_mode_threshold_is_rejected() {
        let params = CavityParams::default();
        let err = map_single_mode_to_full(&params, &SqueezeSettings::coherent().with_q(0.01))
            .unwrap_err();
        assert!(matches!(err, Error::Threshold { .. }));
        // Under plain G = exp(q / 4) the thresholds agree only to O(t_c^2).
        let g = (0.01f64 / 4.0).exp();
        let loop_gain = g * g * (1.0 - params.t_c).sqrt();
        assert!((loop_gain - 1.0).abs() < 0.01 * 0.01);
        assert!(loop_gain < 1.0);
    }

    #[test]
    fn n0_recomputed_from_constituents() {
        let params = CavityParams::default();
        let n = params.normalization();
        let expected = HBAR * 1.064e-6 * SPEED_OF_LIGHT / (8.0 * std::f64::consts::PI * 7.5e5 * 16e6);
        assert!((n.n0 / expected - 1.0).abs() < 1e-15);
        assert!((n.n0 * signal_scale(&params) * params.length.powi(2) - 1.0).abs() < 1e-14);
    }

    #[test]
    fn db_conversion() {
        assert!((db_to_factor(15.0) - 31.622_776_601_683_8).abs() < 1e-12);
        assert_eq!(db_to_factor(0.0), 1.0);
        assert!((factor_to_db(db_to_factor(6.0)) - 6.0).abs() < 1e-12);
    }
}
