//! Evaluation of configured points into [`ResultRow`]s and the `run` entry
//! points.

use std::path::{Path, PathBuf};

use rayon::prelude::*;
use serde::Serialize;

use super::config::{Format, Point, Scale, ScenarioConfig, Task};
use super::table::{sha256_hex, struct_cells, Cell, Table};
use super::{with_pool, ConfigError, ScenarioError};
use crate::model::SqueezeSettings;
use crate::optimize::{bandwidth, numeric_optimal_gain, snr_gain};
use crate::single_mode::{self, clamp_gain, LimitReport};
use crate::spectrum::ModelKind;

/// One evaluated point. Input columns come first so that every row can be
/// recomputed from its own contents.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ResultRow {
    pub t_c: f64,
    pub eps_int: f64,
    pub eps_read: f64,
    pub eps_inj: f64,
    pub beta: f64,
    pub zeta: f64,
    pub q: f64,
    pub omega: f64,
    pub q_th: f64,
    /// Strain PSD at the row's settings.
    pub s_hh: f64,
    /// Same with `q = 0`.
    pub s_hh_q0: f64,
    pub snr_gain: f64,
    /// Closed-form optimal gain at `Omega = 0` (clamped).
    pub q_opt: f64,
    pub q_opt_over_q_th: f64,
    /// Numerically optimal gain for this model at the row's `omega`.
    pub q_star: f64,
    pub s_hh_opt: f64,
    pub limit_threshold: f64,
    /// `s_hh_q0 / s_hh_opt`.
    pub improvement_vs_q0: f64,
    /// `limit_threshold / s_hh_opt`.
    pub improvement_vs_threshold: f64,
    pub omega_hwhm: f64,
    pub sbp: f64,
    /// `omega_hwhm` relative to the same settings with `q = 0`.
    pub bandwidth_ratio_vs_q0: f64,
    /// HWHM and SBP at the model's optimal gain for `Omega = 0`.
    pub omega_hwhm_opt: f64,
    pub sbp_opt: f64,
    /// `sbp_opt` over the coherent, unsqueezed, unamplified cavity.
    pub sbp_gain_vs_ssbl: f64,
    /// `sbp_opt` over the same external squeezing without internal gain.
    pub sbp_gain_vs_external: f64,
}

/// Column order of sweep datasets: `axis`, `value`, `model`, then the
/// [`ResultRow`] fields.
pub const RESULT_COLUMNS: [&str; 29] = [
    "axis",
    "value",
    "model",
    "t_c",
    "eps_int",
    "eps_read",
    "eps_inj",
    "beta",
    "zeta",
    "q",
    "omega",
    "q_th",
    "s_hh",
    "s_hh_q0",
    "snr_gain",
    "q_opt",
    "q_opt_over_q_th",
    "q_star",
    "s_hh_opt",
    "limit_threshold",
    "improvement_vs_q0",
    "improvement_vs_threshold",
    "omega_hwhm",
    "sbp",
    "bandwidth_ratio_vs_q0",
    "omega_hwhm_opt",
    "sbp_opt",
    "sbp_gain_vs_ssbl",
    "sbp_gain_vs_external",
];

pub fn evaluate_point(model: ModelKind, point: &Point) -> crate::Result<ResultRow> {
    let p = &point.params;
    let s = point.settings;
    let omega = point.omega;
    let q_th = p.threshold();

    let s_hh = model.sensitivity(p, &s, omega)?;
    let s_hh_q0 = model.sensitivity(p, &s.with_q(0.0), omega)?;
    let (q_opt, _) = clamp_gain(p, single_mode::optimal_gain_general(p, s.beta, s.zeta));
    let numeric = numeric_optimal_gain(p, s.beta, s.zeta, omega, model)?;
    let q_at_dc = if omega == 0.0 {
        numeric.q_star
    } else {
        numeric_optimal_gain(p, s.beta, s.zeta, 0.0, model)?.q_star
    };
    let limit_threshold = single_mode::limit_threshold(p);

    let here = bandwidth(p, &s, model)?;
    let no_gain = bandwidth(p, &s.with_q(0.0), model)?;
    let optimum = bandwidth(p, &s.with_q(q_at_dc), model)?;
    let standard = bandwidth(p, &SqueezeSettings::coherent(), model)?;

    Ok(ResultRow {
        t_c: p.t_c,
        eps_int: p.eps_int,
        eps_read: p.eps_read,
        eps_inj: p.eps_inj,
        beta: s.beta,
        zeta: s.zeta,
        q: s.q,
        omega,
        q_th,
        s_hh,
        s_hh_q0,
        snr_gain: snr_gain_with(model, point)?,
        q_opt,
        q_opt_over_q_th: q_opt / q_th,
        q_star: numeric.q_star,
        s_hh_opt: numeric.s_star,
        limit_threshold,
        improvement_vs_q0: s_hh_q0 / numeric.s_star,
        improvement_vs_threshold: limit_threshold / numeric.s_star,
        omega_hwhm: here.omega_hwhm,
        sbp: here.sbp,
        bandwidth_ratio_vs_q0: here.omega_hwhm / no_gain.omega_hwhm,
        omega_hwhm_opt: optimum.omega_hwhm,
        sbp_opt: optimum.sbp,
        sbp_gain_vs_ssbl: optimum.sbp / standard.sbp,
        sbp_gain_vs_external: optimum.sbp / no_gain.sbp,
    })
}

fn snr_gain_with(model: ModelKind, point: &Point) -> crate::Result<f64> {
    let s = point.settings;
    if s.zeta == 1.0 {
        return snr_gain(model, &point.params, s.beta, s.q, point.omega);
    }
    let reference = model.sensitivity(&point.params, &s.with_q(0.0), point.omega)?;
    let value = model.sensitivity(&point.params, &s, point.omega)?;
    Ok((reference / value).min(crate::optimize::SNR_GAIN_CAP))
}

fn numerical(point: &Point, model: Option<ModelKind>, source: crate::Error) -> ScenarioError {
    let point = match model {
        Some(m) => format!("{} (model {m})", point.label()),
        None => point.label(),
    };
    ScenarioError::Numerical { point, source }
}

fn axis_cells(point: &Point) -> [Cell; 2] {
    match point.axis {
        Some((axis, value)) => [axis.as_str().into(), value.into()],
        None => [Cell::Empty, Cell::Empty],
    }
}

/// Evaluates every point of `config` for each selected model, in parallel,
/// and assembles the rows in sweep order (models interleaved per point).
pub fn sweep_table(config: &ScenarioConfig, config_hash: &str, threads: Option<usize>) -> Result<Table, ScenarioError> {
    let points = config.points();
    let kinds = config.model.kinds();
    let jobs: Vec<(Point, ModelKind)> = points
        .iter()
        .flat_map(|p| kinds.iter().map(move |&k| (*p, k)))
        .collect();
    let results: Vec<_> = with_pool(threads, || {
        jobs.par_iter()
            .map(|(p, k)| evaluate_point(*k, p).map_err(|e| numerical(p, Some(*k), e)))
            .collect()
    });

    let mut table = Table::new(task_name(config.task), config_hash, &RESULT_COLUMNS);
    describe(config, &mut table);
    for ((point, kind), result) in jobs.iter().zip(results) {
        let row = result?;
        let mut cells: Vec<Cell> = axis_cells(point).into();
        cells.push(kind.as_str().into());
        cells.extend(struct_cells(&row).into_iter().map(|(_, c)| c));
        table.push(cells);
    }
    Ok(table)
}

/// Closed-form limits for every point of `config`; the model selection does
/// not apply (the limits are single-mode expressions at `Omega = 0`).
pub fn limits_table(config: &ScenarioConfig, config_hash: &str, threads: Option<usize>) -> Result<Table, ScenarioError> {
    let points = config.points();
    let reports: Vec<_> = with_pool(threads, || {
        points
            .par_iter()
            .map(|p| {
                crate::model::validate(&p.params, &p.settings)
                    .into_result()
                    .map(|_| LimitReport::compute(&p.params, &p.settings))
                    .map_err(|e| numerical(p, None, e))
            })
            .collect()
    });

    let template = struct_cells(&LimitReport::compute(&config.cavity, &SqueezeSettings::coherent()));
    let mut columns = vec!["axis", "value"];
    columns.extend(template.iter().map(|(k, _)| k.as_str()));
    let mut table = Table::new("limits", config_hash, &columns);
    describe(config, &mut table);
    table.note("limits: single-mode closed forms at omega = 0");
    for (point, report) in points.iter().zip(reports) {
        let mut cells: Vec<Cell> = axis_cells(point).into();
        cells.extend(struct_cells(&report?).into_iter().map(|(_, c)| c));
        table.push(cells);
    }
    Ok(table)
}

fn task_name(task: Task) -> &'static str {
    match task {
        Task::Spectrum => "spectrum",
        Task::Limits => "limits",
        Task::Optimize => "optimize",
        Task::Bandwidth => "bandwidth",
        Task::Sweep => "sweep",
    }
}

fn describe(config: &ScenarioConfig, table: &mut Table) {
    let c = &config.cavity;
    let s = config.settings();
    table.note(format!("task: {}", task_name(config.task)));
    table.note(format!(
        "models: {}",
        config.model.kinds().iter().map(|k| k.as_str()).collect::<Vec<_>>().join(", ")
    ));
    table.note(format!(
        "cavity: t_c={} eps_int={} eps_read={} eps_inj={} tau={} length={} power={} wavelength={}",
        c.t_c, c.eps_int, c.eps_read, c.eps_inj, c.tau, c.length, c.power, c.wavelength
    ));
    table.note(format!("squeeze: q={} beta={} zeta={} omega={}", s.q, s.beta, s.zeta, config.omega));
    if let Some(sweep) = &config.sweep {
        let scale = match sweep.scale {
            Scale::Linear => "linear",
            Scale::Log => "log",
        };
        table.note(format!(
            "sweep: {} {scale} [{}, {}] {} points",
            sweep.axis.as_str(),
            sweep.start,
            sweep.stop,
            sweep.points
        ));
    }
    if config.uses_default_grid() {
        table.note("grid: default (200 log-spaced omega from 1/(1000 tau) to 1/(2 tau))");
    }
}

/// Evaluates `config` and writes its dataset to `out` (or the configured
/// path, resolved against `base_dir`). Returns the path written.
pub fn run_config(
    config: &ScenarioConfig,
    config_hash: &str,
    base_dir: &Path,
    out: Option<&Path>,
    threads: Option<usize>,
) -> Result<PathBuf, ScenarioError> {
    let table = match config.task {
        Task::Limits => limits_table(config, config_hash, threads)?,
        _ => sweep_table(config, config_hash, threads)?,
    };
    let path = match out {
        Some(p) => p.to_path_buf(),
        None if config.output.path.is_absolute() => config.output.path.clone(),
        None => base_dir.join(&config.output.path),
    };
    write_table(&table, &path, config.output.format)?;
    Ok(path)
}

pub fn write_table(table: &Table, path: &Path, format: Format) -> Result<(), ScenarioError> {
    let io = |source| ScenarioError::Io {
        path: path.to_path_buf(),
        source,
    };
    if let Some(dir) = path.parent().filter(|d| !d.as_os_str().is_empty()) {
        std::fs::create_dir_all(dir).map_err(io)?;
    }
    let mut buf = Vec::new();
    match format {
        Format::Csv => table.write_csv(&mut buf),
        Format::Json => table.write_json(&mut buf),
    }
    .map_err(io)?;
    std::fs::write(path, buf).map_err(io)
}

/// Reads, validates and runs a configuration file.
pub fn run_file(path: &Path, out: Option<&Path>, threads: Option<usize>) -> Result<PathBuf, ScenarioError> {
    let bytes = std::fs::read(path).map_err(|source| ScenarioError::Io {
        path: path.to_path_buf(),
        source,
    })?;
    let source = String::from_utf8(bytes.clone()).map_err(|_| ConfigError {
        line: None,
        field: None,
        message: "configuration is not valid UTF-8".into(),
    })?;
    let config = ScenarioConfig::from_toml_str(&source)?;
    let base_dir = path.parent().unwrap_or(Path::new("."));
    run_config(&config, &sha256_hex(&bytes), base_dir, out, threads)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::CavityParams;

    #[test]
    fn columns_match_row_fields() {
        let p = Point {
            axis: None,
            params: CavityParams::default().with_tau(1e-8).with_losses(0.001, 0.1, 0.0),
            settings: SqueezeSettings::new(0.0, 31.6228, 1.0),
            omega: 0.0,
        };
        let row = evaluate_point(ModelKind::SingleMode, &p).unwrap();
        let names: Vec<_> = struct_cells(&row).into_iter().map(|(k, _)| k).collect();
        assert_eq!(names, RESULT_COLUMNS[3..]);
    }

    #[test]
    fn row_values_agree_with_library() {
        let params = CavityParams::default().with_tau(1e-8).with_losses(0.001, 0.1, 0.0);
        let beta = 31.6228;
        let p = Point {
            axis: None,
            params,
            settings: SqueezeSettings::new(0.002, beta, 1.0),
            omega: 0.0,
        };
        let row = evaluate_point(ModelKind::SingleMode, &p).unwrap();
        let best = single_mode::optimal_sensitivity(&params, beta);
        assert!((row.q_star - best.q_opt).abs() < 1e-6);
        assert!((row.s_hh_opt / best.s_hh - 1.0).abs() < 1e-8);
        assert!((row.s_hh_q0 / single_mode::limit_q0(&params, beta) - 1.0).abs() < 1e-12);
        assert!((row.improvement_vs_q0 - row.s_hh_q0 / best.s_hh).abs() < 1e-6 * row.improvement_vs_q0);
        assert!(row.sbp_gain_vs_external >= 1.0);
    }

    #[test]
    fn threshold_point_is_numerical_failure() {
        let src = r#"
task = "optimize"
[cavity]
t_c = 0.01
[squeeze]
q = 0.02
[output]
path = "x.csv"
"#;
        let config = ScenarioConfig::from_toml_str(src).unwrap();
        let err = sweep_table(&config, "h", Some(1)).unwrap_err();
        assert_eq!(err.exit_code(), 2);
        assert!(err.to_string().contains("configured point"), "{err}");
    }
}
