//! Exact two-photon input-output model of the squeezer cavity.
//!
//! The cavity is a coupling mirror `c` and a back mirror `b` with a
//! phase-sensitive gain medium between them. The medium amplifies the
//! amplitude quadrature by `G` per pass and deamplifies the phase quadrature
//! by `1/G`. Losses are beam splitters mixing in vacuum: internal loss once
//! per round trip, injection loss on the squeezed input, readout loss after
//! the (optional) phase-sensitive output amplifier `zeta`.
//!
//! With `D_y = G^2 - r_c r_b t_int e^{2 i Omega tau}` the phase-quadrature
//! output is
//!
//! ```text
//! d_y = zeta^{1/2} t_d / D_y [ s t_c t_int G e^{i Omega tau}
//!                             + n_int t_c r_int G^2
//!                             + n_c   t_c t_b t_int G e^{i Omega tau}
//!                             + (t_i v + r_i n_i)(r_b t_int e^{2 i Omega tau} - r_c G^2) ]
//!       + r_d n_d
//! ```
//!
//! and the amplitude quadrature follows from `G -> 1/G`, `zeta -> 1/zeta`
//! with no signal. The readout is the phase quadrature.

use num_complex::Complex64;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::model::{map_single_mode_to_full, CavityParams, FullModelParams, SqueezeSettings};

/// Denominators smaller than this are treated as oscillation.
pub const DENOMINATOR_GUARD: f64 = 1e-12;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Quadrature {
    /// `x`, amplified by the medium for `G > 1`, carries the anti-squeezed
    /// external field.
    Amplitude,
    /// `y`, the signal quadrature and the one read out.
    Phase,
}

/// Transfer coefficients from every input port into one output quadrature.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PortSet {
    /// Externally squeezed field.
    pub v: Complex64,
    /// Vacuum through the back mirror.
    pub n_c: Complex64,
    pub n_int: Complex64,
    pub n_i: Complex64,
    pub n_d: Complex64,
    /// Dimensionless signal field.
    pub s: Complex64,
}

impl PortSet {
    /// Output variance for the given variance of `v`; every other noise
    /// port carries vacuum.
    pub fn output_variance(&self, v_variance: f64) -> f64 {
        v_variance * self.v.norm_sqr()
            + self.n_c.norm_sqr()
            + self.n_int.norm_sqr()
            + self.n_i.norm_sqr()
            + self.n_d.norm_sqr()
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PortCoefficients {
    pub omega: f64,
    pub x: PortSet,
    pub y: PortSet,
}

impl PortCoefficients {
    pub fn quadrature(&self, quadrature: Quadrature) -> &PortSet {
        match quadrature {
            Quadrature::Amplitude => &self.x,
            Quadrature::Phase => &self.y,
        }
    }
}

fn quadrature_ports(fp: &FullModelParams, omega: f64, quadrature: Quadrature) -> Result<PortSet> {
    let (g, zeta_amp) = match quadrature {
        Quadrature::Amplitude => (1.0 / fp.gain, fp.zeta.powf(-0.5)),
        Quadrature::Phase => (fp.gain, fp.zeta.sqrt()),
    };
    let g2 = g * g;
    let (t_c, t_b, t_int, t_i, t_d) = (fp.t_c(), fp.t_b(), fp.t_int(), fp.t_i(), fp.t_d());
    let single = Complex64::from_polar(1.0, omega * fp.tau);
    let double = single * single;

    let den = g2 - fp.round_trip() * double;
    if den.norm() < DENOMINATOR_GUARD {
        return Err(Error::Threshold {
            gain: fp.gain,
            threshold: threshold_gain(fp),
        });
    }
    let pre = zeta_amp * t_d / den;
    let reflect = fp.r_b * t_int * double - fp.r_c * g2;

    Ok(PortSet {
        v: pre * t_i * reflect,
        n_c: pre * t_c * t_b * t_int * g * single,
        n_int: pre * t_c * fp.r_int * g2,
        n_i: pre * fp.r_i * reflect,
        n_d: Complex64::new(fp.r_d, 0.0),
        s: match quadrature {
            Quadrature::Amplitude => Complex64::new(0.0, 0.0),
            Quadrature::Phase => pre * t_c * t_int * g * single,
        },
    })
}

/// Closed-form output coefficients of both quadratures at sideband `omega`.
pub fn io_coefficients(fp: &FullModelParams, omega: f64) -> Result<PortCoefficients> {
    fp.check()?;
    Ok(PortCoefficients {
        omega,
        x: quadrature_ports(fp, omega, Quadrature::Amplitude)?,
        y: quadrature_ports(fp, omega, Quadrature::Phase)?,
    })
}

/// Variance of the input `v` in the given quadrature: the readout quadrature
/// is squeezed, the amplitude quadrature anti-squeezed.
pub fn squeezed_input_variance(beta: f64, quadrature: Quadrature) -> f64 {
    match quadrature {
        Quadrature::Amplitude => beta,
        Quadrature::Phase => 1.0 / beta,
    }
}

fn check_beta(beta: f64) -> Result<()> {
    if beta >= 1.0 && beta.is_finite() {
        Ok(())
    } else {
        Err(Error::InvalidParameter {
            field: "beta",
            value: beta,
            reason: "must be >= 1",
        })
    }
}

/// Output noise variance of one quadrature as the sum over input ports of
/// input variance times `|coefficient|^2`.
pub fn quadrature_variance(
    fp: &FullModelParams,
    beta: f64,
    omega: f64,
    quadrature: Quadrature,
) -> Result<f64> {
    check_beta(beta)?;
    fp.check()?;
    let ports = quadrature_ports(fp, omega, quadrature)?;
    Ok(ports.output_variance(squeezed_input_variance(beta, quadrature)))
}

/// Readout noise spectral density from the port-coefficient sum. Independent
/// of [`noise_psd_closed`], which it checks.
pub fn noise_psd_sum(fp: &FullModelParams, beta: f64, omega: f64) -> Result<f64> {
    quadrature_variance(fp, beta, omega, Quadrature::Phase)
}

/// `|D(Omega)|^2 = G^4 + R_b R_c (1 - eps_int) - 2 G^2 sqrt(R_b R_c (1 - eps_int)) cos(2 Omega tau)`.
pub fn denominator_sq(fp: &FullModelParams, omega: f64) -> f64 {
    let g2 = fp.gain * fp.gain;
    let rho = fp.round_trip();
    // (G^2 - rho)^2 + 4 G^2 rho sin^2(Omega tau), free of cancellation near resonance
    (g2 - rho).powi(2) + 4.0 * g2 * rho * (omega * fp.tau).sin().powi(2)
}

/// The three grouped terms of the closed-form readout noise.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct NoiseTerms {
    pub s1: f64,
    pub s2: f64,
    pub s3: f64,
    pub d_sq: f64,
}

/// Effective variance of the injected readout-quadrature field after
/// injection loss, `eps_i + (1 - eps_i) / beta`.
pub fn injected_variance(beta: f64, eps_inj: f64) -> f64 {
    eps_inj + (1.0 - eps_inj) / beta
}

pub fn noise_terms(fp: &FullModelParams, beta: f64, omega: f64) -> NoiseTerms {
    let g2 = fp.gain * fp.gain;
    let g4 = g2 * g2;
    let (r_c2, r_b2) = (fp.r_c * fp.r_c, fp.r_b * fp.r_b);
    let (t_c2, t_b2) = (1.0 - r_c2, 1.0 - r_b2);
    let sv = injected_variance(beta, fp.eps_inj());
    let zeta = fp.zeta;

    let s1 = -r_b2 * r_c2 + zeta * (g2 * t_c2 * (t_b2 - g2) + r_b2 * sv);
    // R_b + G^4 R_c: the sign follows from |r_b t_int e^{2i Omega tau} - r_c G^2|^2.
    let s2 = g4 + r_b2 * r_c2 - zeta * (sv * (r_b2 + g4 * r_c2) + g2 * t_b2 * t_c2);
    let s3 = 2.0 * g2 * (-1.0 + zeta * sv);
    NoiseTerms {
        s1,
        s2,
        s3,
        // expanded like the terms above so that their cancellation is exact
        d_sq: {
            let rho = fp.round_trip();
            g4 + rho * rho - 2.0 * g2 * rho * (2.0 * omega * fp.tau).cos()
        },
    }
}

/// Closed-form readout noise spectral density
/// `S_n = 1 - (1 - eps_read) / |D|^2 (S1 eps_int + S2 + S3 sqrt(R_b R_c (1 - eps_int)) cos 2 Omega tau)`.
pub fn noise_psd_closed(fp: &FullModelParams, beta: f64, omega: f64) -> Result<f64> {
    check_beta(beta)?;
    fp.check()?;
    let terms = noise_terms(fp, beta, omega);
    if !(terms.d_sq.sqrt() >= DENOMINATOR_GUARD) {
        return Err(Error::Threshold {
            gain: fp.gain,
            threshold: threshold_gain(fp),
        });
    }
    let cos = (2.0 * omega * fp.tau).cos();
    let bracket = terms.s1 * fp.eps_int() + terms.s2 + terms.s3 * fp.round_trip() * cos;
    Ok(1.0 - (1.0 - fp.eps_read()) / terms.d_sq * bracket)
}

/// Closed-form signal power transfer
/// `zeta G^2 T_c (1 - eps_d)(1 - eps_int) / |D|^2`, without the
/// displacement-to-field normalisation.
pub fn transfer_sq_closed(fp: &FullModelParams, omega: f64) -> Result<f64> {
    fp.check()?;
    let d_sq = denominator_sq(fp, omega);
    if d_sq.sqrt() < DENOMINATOR_GUARD {
        return Err(Error::Threshold {
            gain: fp.gain,
            threshold: threshold_gain(fp),
        });
    }
    let g2 = fp.gain * fp.gain;
    let t_c2 = 1.0 - fp.r_c * fp.r_c;
    Ok(fp.zeta * g2 * t_c2 * (1.0 - fp.eps_read()) * (1.0 - fp.eps_int()) / d_sq)
}

/// Amplitude gain at which the amplitude-quadrature denominator vanishes at
/// `Omega = 0`: `(r_b r_c sqrt(1 - eps_int))^{-1/2}`.
pub fn threshold_gain(fp: &FullModelParams) -> f64 {
    fp.round_trip().powf(-0.5)
}

/// Strain-referred sensitivity of the exact model for single-mode inputs,
/// `N0 S_n / |T|^2`. The noise comes from the port sum: every term is
/// non-negative, whereas the grouped closed form cancels to a few digits
/// within `1e-6 q_th` of threshold.
pub fn sensitivity(params: &CavityParams, settings: &SqueezeSettings, omega: f64) -> Result<f64> {
    let fp = map_single_mode_to_full(params, settings)?;
    let noise = noise_psd_sum(&fp, settings.beta, omega)?;
    let transfer = transfer_sq_closed(&fp, omega)?;
    Ok(params.normalization().n0 * noise / transfer)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn rel(a: f64, b: f64) -> f64 {
        ((a - b) / b).abs()
    }

    fn lossless(r_c: f64, gain: f64) -> FullModelParams {
        FullModelParams {
            gain,
            ..FullModelParams::passive(r_c, 1e-8)
        }
    }

    #[test]
    fn resonant_buildup_of_signal() {
        let fp = lossless(0.99f64.sqrt(), 1.0);
        let c = io_coefficients(&fp, 0.0).unwrap();
        let expected = fp.t_c() / (1.0 - fp.r_c);
        assert!(rel(c.y.s.re, expected) < 1e-12);
        assert!(c.y.s.im.abs() < 1e-9);
        assert_eq!(c.x.s, Complex64::new(0.0, 0.0));
    }

    #[test]
    fn lossless_passive_cavity_reflects_everything() {
        let fp = lossless(0.9, 1.0);
        for omega in [0.0, 1e5, 3.3e6, 7.7e7] {
            let c = io_coefficients(&fp, omega).unwrap();
            assert!((c.y.v.norm_sqr() - 1.0).abs() < 1e-12);
            assert!((c.x.v.norm_sqr() - 1.0).abs() < 1e-12);
        }
    }

    #[test]
    fn vacuum_throughput() {
        let fp = lossless(0.99f64.sqrt(), 1.0);
        for omega in [0.0, 1e6, 5e7] {
            assert!((noise_psd_closed(&fp, 1.0, omega).unwrap() - 1.0).abs() < 1e-12);
            assert!((noise_psd_sum(&fp, 1.0, omega).unwrap() - 1.0).abs() < 1e-12);
        }
    }

    #[test]
    fn reflected_squeezing_on_resonance() {
        let fp = lossless(0.99f64.sqrt(), 1.0);
        assert!((noise_psd_closed(&fp, 10.0, 0.0).unwrap() - 0.1).abs() < 1e-12);
    }

    #[test]
    fn passivity_with_losses() {
        let fp = FullModelParams {
            r_c: 0.9,
            r_b: 0.97,
            r_int: 0.2,
            r_i: 0.3,
            r_d: 0.4,
            gain: 1.0,
            tau: 1e-8,
            zeta: 1.0,
        };
        for omega in [0.0, 1e6, 2e7] {
            assert!((noise_psd_closed(&fp, 1.0, omega).unwrap() - 1.0).abs() < 1e-12);
            assert!((noise_psd_sum(&fp, 1.0, omega).unwrap() - 1.0).abs() < 1e-12);
        }
    }

    #[test]
    fn closed_form_matches_port_sum_with_losses() {
        let fp = map_single_mode_to_full(
            &CavityParams::default().with_losses(0.001, 0.05, 0.0),
            &SqueezeSettings::coherent().with_q(0.005),
        )
        .unwrap();
        let closed = noise_psd_closed(&fp, 1.0, 0.0).unwrap();
        let sum = noise_psd_sum(&fp, 1.0, 0.0).unwrap();
        assert!(rel(closed, sum) < 1e-10, "{closed} vs {sum}");
    }

    #[test]
    fn transfer_peaks_on_resonance_and_dips_at_antiresonance() {
        let fp = lossless(0.99f64.sqrt(), 1.0);
        let t0 = transfer_sq_closed(&fp, 0.0).unwrap();
        let expected = 0.01 / (1.0 - 0.99f64.sqrt()).powi(2);
        assert!(rel(t0, expected) < 1e-12, "{t0} vs {expected}");
        assert!(rel(t0, 4.0 / 0.01) < 0.01);

        let anti = std::f64::consts::PI / (2.0 * fp.tau);
        let t_anti = transfer_sq_closed(&fp, anti).unwrap();
        for k in 0..200 {
            let omega = k as f64 / 200.0 * std::f64::consts::PI / fp.tau;
            assert!(transfer_sq_closed(&fp, omega).unwrap() >= t_anti * (1.0 - 1e-12));
        }
    }

    #[test]
    fn threshold_gain_values() {
        let fp = lossless(0.99f64.sqrt(), 1.0);
        let g_th = threshold_gain(&fp);
        assert!((g_th - 0.99f64.powf(-0.25)).abs() < 1e-15);
        assert!((g_th - 1.002_515_7).abs() < 1e-7);
        // single-mode gain equivalent q = 4 ln G_th = -ln(0.99)
        assert!(((4.0 * g_th.ln()) - (-(0.99f64.ln()))).abs() < 1e-15);
        assert!((4.0 * g_th.ln() - 0.01).abs() < 0.01 * 0.01);

        assert_eq!(threshold_gain(&lossless(1.0, 1.0)), 1.0);

        let fp = FullModelParams {
            r_int: 0.001f64.sqrt(),
            ..lossless(0.99f64.sqrt(), 1.0)
        };
        let g_th = threshold_gain(&fp);
        assert!(rel(g_th, (0.99f64 * 0.999).powf(-0.25)) < 1e-14);
        assert!((4.0 * g_th.ln() - 0.011).abs() < 0.011 * 0.011);
    }

    #[test]
    fn threshold_is_an_error() {
        let mut fp = lossless(0.99f64.sqrt(), 1.0);
        fp.gain = threshold_gain(&fp);
        assert!(matches!(io_coefficients(&fp, 0.0), Err(Error::Threshold { .. })));
        assert!(matches!(noise_psd_closed(&fp, 1.0, 0.0), Err(Error::Threshold { .. })));
        assert!(matches!(transfer_sq_closed(&fp, 0.0), Err(Error::Threshold { .. })));
        fp.gain = 1.0 / threshold_gain(&fp) * 0.999;
        assert!(matches!(noise_psd_sum(&fp, 1.0, 0.0), Err(Error::Threshold { .. })));
    }

    #[test]
    fn rejects_beta_below_one() {
        let fp = lossless(0.9, 1.0);
        assert!(matches!(
            noise_psd_closed(&fp, 0.5, 0.0),
            Err(Error::InvalidParameter { field: "beta", .. })
        ));
    }

    #[test]
    fn spectra_are_periodic_and_even() {
        let fp = map_single_mode_to_full(
            &CavityParams::default().with_tau(1e-8).with_losses(0.002, 0.1, 0.03),
            &SqueezeSettings::new(-0.004, 5.0, 2.0),
        )
        .unwrap();
        let fsr = std::f64::consts::PI / fp.tau;
        for omega in [0.0, 1.3e5, 4.2e6, 9.9e7] {
            let n = noise_psd_closed(&fp, 5.0, omega).unwrap();
            let t = transfer_sq_closed(&fp, omega).unwrap();
            assert!(rel(noise_psd_closed(&fp, 5.0, omega + fsr).unwrap(), n) < 1e-9);
            assert!(rel(transfer_sq_closed(&fp, omega + fsr).unwrap(), t) < 1e-9);
            assert_eq!(noise_psd_closed(&fp, 5.0, -omega).unwrap(), n);
            assert_eq!(transfer_sq_closed(&fp, -omega).unwrap(), t);
        }
    }
}
