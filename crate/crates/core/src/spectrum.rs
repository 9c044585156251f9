//! Model selection and strain-sensitivity spectra on frequency grids.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::model::{CavityParams, SqueezeSettings};
use crate::{full_model, single_mode};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ModelKind {
    SingleMode,
    Full,
}

impl ModelKind {
    pub fn as_str(self) -> &'static str {
        match self {
            ModelKind::SingleMode => "single_mode",
            ModelKind::Full => "full",
        }
    }

    /// Strain-referred sensitivity at sideband frequency `omega` (rad/s).
    pub fn sensitivity(self, params: &CavityParams, settings: &SqueezeSettings, omega: f64) -> Result<f64> {
        match self {
            ModelKind::SingleMode => single_mode::sensitivity_sm(params, settings, omega),
            ModelKind::Full => full_model::sensitivity(params, settings, omega),
        }
    }
}

impl std::fmt::Display for ModelKind {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(self.as_str())
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SpectrumMeta {
    pub cavity: CavityParams,
    pub squeeze: SqueezeSettings,
    pub model: ModelKind,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SensitivitySpectrum {
    /// Sideband angular frequencies, rad/s, strictly increasing.
    pub omega: Vec<f64>,
    /// Strain PSD at each frequency.
    pub s_hh: Vec<f64>,
    pub meta: SpectrumMeta,
}

/// `points` logarithmically spaced values from `start` to `stop` inclusive.
pub fn log_grid(start: f64, stop: f64, points: usize) -> Vec<f64> {
    match points {
        0 => Vec::new(),
        1 => vec![start],
        n => {
            let (a, b) = (start.ln(), stop.ln());
            (0..n)
                .map(|i| {
                    if i == 0 {
                        start
                    } else if i == n - 1 {
                        stop
                    } else {
                        (a + (b - a) * i as f64 / (n - 1) as f64).exp()
                    }
                })
                .collect()
        }
    }
}

pub fn linear_grid(start: f64, stop: f64, points: usize) -> Vec<f64> {
    match points {
        0 => Vec::new(),
        1 => vec![start],
        n => (0..n)
            .map(|i| {
                if i == n - 1 {
                    stop
                } else {
                    start + (stop - start) * i as f64 / (n - 1) as f64
                }
            })
            .collect(),
    }
}

pub const DEFAULT_GRID_POINTS: usize = 200;

/// 200 log-spaced points from `1/(1000 tau)` to `1/(2 tau)`.
pub fn default_grid(tau: f64) -> Vec<f64> {
    log_grid(1.0 / (1000.0 * tau), 1.0 / (2.0 * tau), DEFAULT_GRID_POINTS)
}

pub fn spectrum(
    model: ModelKind,
    params: &CavityParams,
    settings: &SqueezeSettings,
    omega: &[f64],
) -> Result<SensitivitySpectrum> {
    if omega.windows(2).any(|w| !(w[1] > w[0])) {
        return Err(Error::InvalidParameter {
            field: "omega",
            value: f64::NAN,
            reason: "frequency grid must be strictly increasing",
        });
    }
    let s_hh = omega
        .iter()
        .map(|&w| model.sensitivity(params, settings, w))
        .collect::<Result<Vec<_>>>()?;
    Ok(SensitivitySpectrum {
        omega: omega.to_vec(),
        s_hh,
        meta: SpectrumMeta {
            cavity: *params,
            squeeze: *settings,
            model,
        },
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn grids_hit_endpoints() {
        let g = log_grid(1e-4, 0.5, 50);
        assert_eq!(g.len(), 50);
        assert_eq!(g[0], 1e-4);
        assert_eq!(g[49], 0.5);
        assert!(g.windows(2).all(|w| w[1] > w[0]));
        let g = linear_grid(-1.0, 1.0, 5);
        assert_eq!(g, vec![-1.0, -0.5, 0.0, 0.5, 1.0]);
    }

    #[test]
    fn default_grid_spans_plateau_to_half_fsr() {
        let g = default_grid(1e-8);
        assert_eq!(g.len(), 200);
        assert!((g[0] - 1e5).abs() < 1e-6);
        assert_eq!(g[199], 5e7);
    }

    #[test]
    fn spectra_positive_and_even() {
        let params = CavityParams::default().with_tau(1e-8).with_losses(0.001, 0.05, 0.02);
        let settings = SqueezeSettings::new(0.004, 10.0, 1.0);
        for model in [ModelKind::SingleMode, ModelKind::Full] {
            let spec = spectrum(model, &params, &settings, &default_grid(params.tau)).unwrap();
            assert!(spec.s_hh.iter().all(|v| v.is_finite() && *v > 0.0));
            for &w in &spec.omega[..10] {
                assert_eq!(
                    model.sensitivity(&params, &settings, w).unwrap(),
                    model.sensitivity(&params, &settings, -w).unwrap()
                );
            }
        }
    }

    #[test]
    fn rejects_unsorted_grid() {
        let err = spectrum(
            ModelKind::SingleMode,
            &CavityParams::default(),
            &SqueezeSettings::coherent(),
            &[1.0, 1.0],
        )
        .unwrap_err();
        assert!(matches!(err, Error::InvalidParameter { field: "omega", .. }));
    }
}
