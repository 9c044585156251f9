//! Quantum-noise limits of lossy cavity-enhanced interferometers with
//! internal squeezing, external squeezing and output amplification.
//!
//! Two noise models are provided:
//!
//! * [`full_model`]: the exact two-photon input-output solution of a cavity
//!   with an intracavity phase-sensitive amplifier, three loss channels
//!   (injection, internal, readout) and an output amplifier;
//! * [`single_mode`]: its high-finesse, low-frequency approximation together
//!   with every closed-form limit (lossless bound, references without
//!   internal squeezing, internal squeezing at threshold, optimal internal
//!   gain, internal-loss floor, injection-loss and output-amplification
//!   limits).
//!
//! [`optimize`] supplies the numerical counterparts (golden-section optimal
//! gain, HWHM bandwidth, sensitivity-bandwidth product) and [`scenario`]
//! drives configurable sweeps and the built-in figure datasets behind the
//! `squeezelim` binary.
//!
//! ```
//! use squeezelim::{single_mode, CavityParams, SqueezeSettings};
//!
//! let params = CavityParams::default().with_losses(0.001, 0.1, 0.0);
//! let beta = squeezelim::model::db_to_factor(15.0);
//! let best = single_mode::optimal_sensitivity(&params, beta);
//! let at_best = single_mode::sensitivity_sm(&params, &SqueezeSettings::new(best.q_opt, beta, 1.0), 0.0)?;
//! assert!((at_best / best.s_hh - 1.0).abs() < 1e-9);
//! # Ok::<(), squeezelim::Error>(())
//! ```

pub mod discrepancy;
pub mod error;
pub mod full_model;
pub mod model;
pub mod optimize;
pub mod scenario;
pub mod single_mode;
pub mod spectrum;

pub use error::{Error, Result};
pub use model::{
    map_single_mode_to_full, validate, CavityParams, FullModelParams, NormalizationConstants, SqueezeSettings,
    ValidationReport,
};
pub use single_mode::LimitReport;
pub use spectrum::{ModelKind, SensitivitySpectrum};
