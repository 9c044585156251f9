//! Built-in datasets behind the published figures. Every panel is one
//! [`Table`]; caption parameters and the grids chosen where the captions are
//! silent are recorded in the header notes.
//!
//! All panels use the single-mode model at `Omega = 0` with `T_c = 0.01` and
//! the default 4 km arm.

use std::path::{Path, PathBuf};

use rayon::prelude::*;

use super::config::Format;
use super::run::write_table;
use super::table::{sha256_hex, Cell, Table};
use super::{with_pool, ScenarioError};
use crate::model::{db_to_factor, CavityParams, SqueezeSettings};
use crate::optimize::{bandwidth, gain_sign_change_eps_read, snr_gain, BandwidthResult};
use crate::single_mode::{self, clamp_gain};
use crate::spectrum::{linear_grid, log_grid, ModelKind};

pub const T_C: f64 = 0.01;
/// Readout-loss axis shared by the loss sweeps.
pub const EPS_READ_RANGE: (f64, f64, usize) = (1e-4, 0.5, 50);
pub const SQZ_DB_LEVELS: [f64; 3] = [6.0, 10.0, 15.0];

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Figure {
    Fig2,
    Fig3,
    Fig4,
    Fig5,
}

impl Figure {
    pub const ALL: [Figure; 4] = [Figure::Fig2, Figure::Fig3, Figure::Fig4, Figure::Fig5];

    pub fn as_str(self) -> &'static str {
        match self {
            Figure::Fig2 => "fig2",
            Figure::Fig3 => "fig3",
            Figure::Fig4 => "fig4",
            Figure::Fig5 => "fig5",
        }
    }

    pub fn tables(self, threads: Option<usize>) -> crate::Result<Vec<Table>> {
        with_pool(threads, || match self {
            Figure::Fig2 => Ok(vec![fig2_top()?, fig2_bottom()?]),
            Figure::Fig3 => fig3(),
            Figure::Fig4 => Ok(vec![fig4_top()?, fig4_bottom()?]),
            Figure::Fig5 => fig5(),
        })
    }
}

impl std::str::FromStr for Figure {
    type Err = String;
    fn from_str(s: &str) -> Result<Self, String> {
        Figure::ALL
            .into_iter()
            .find(|f| f.as_str() == s)
            .ok_or_else(|| format!("unknown figure {s:?}; expected fig2, fig3, fig4 or fig5"))
    }
}

/// Writes every panel of `figure` as `<out_dir>/<panel>.csv`.
pub fn emit_figure_datasets(figure: Figure, out_dir: &Path, threads: Option<usize>) -> Result<Vec<PathBuf>, ScenarioError> {
    let tables = figure.tables(threads).map_err(|source| ScenarioError::Numerical {
        point: format!("{} preset", figure.as_str()),
        source,
    })?;
    let mut written = Vec::new();
    for table in tables {
        let path = out_dir.join(format!("{}.csv", table.name));
        write_table(&table, &path, Format::Csv)?;
        written.push(path);
    }
    Ok(written)
}

fn cavity(eps_int: f64, eps_read: f64) -> CavityParams {
    CavityParams::default().with_t_c(T_C).with_losses(eps_int, eps_read, 0.0)
}

fn eps_read_grid() -> Vec<f64> {
    let (a, b, n) = EPS_READ_RANGE;
    log_grid(a, b, n)
}

/// Builds a table whose notes double as the preset description hashed into
/// `config_sha256`.
fn table(name: &str, notes: &[String], columns: &[&str]) -> Table {
    let description = format!("{name}\n{}\n{}", notes.join("\n"), columns.join(","));
    let mut t = Table::new(name, sha256_hex(description.as_bytes()), columns);
    for n in notes {
        t.note(n.clone());
    }
    t
}

/// Evaluates `f` over `jobs` in parallel, keeping their order.
fn rows<J: Sync, F>(jobs: &[J], f: F) -> crate::Result<Vec<Vec<Cell>>>
where
    F: Fn(&J) -> crate::Result<Vec<Cell>> + Sync + Send,
{
    jobs.par_iter().map(f).collect()
}

const IMPROVEMENT_COLUMNS: [&str; 9] = [
    "sqz_db",
    "beta",
    "eps_int",
    "eps_read",
    "q_opt",
    "q_opt_over_q_th",
    "s_hh_q0",
    "s_hh_opt",
    "improvement",
];

fn improvement_row(sqz_db: f64, eps_int: f64, eps_read: f64) -> crate::Result<Vec<Cell>> {
    let beta = db_to_factor(sqz_db);
    let p = cavity(eps_int, eps_read);
    let best = single_mode::optimal_sensitivity(&p, beta);
    let s_opt = single_mode::sensitivity_sm(&p, &SqueezeSettings::new(best.q_opt, beta, 1.0), 0.0)?;
    let s_q0 = single_mode::limit_q0(&p, beta);
    Ok(vec![
        sqz_db.into(),
        beta.into(),
        eps_int.into(),
        eps_read.into(),
        best.q_opt.into(),
        (best.q_opt / p.threshold()).into(),
        s_q0.into(),
        s_opt.into(),
        (s_q0 / s_opt).into(),
    ])
}

/// Improvement of optimal internal gain over none, against readout loss,
/// one curve per external squeezing level, `eps_int = 0.001`.
pub fn fig2_top() -> crate::Result<Table> {
    let notes = [
        format!("caption: T_c={T_C}, eps_int=0.001, omega=0, sqz_db in {SQZ_DB_LEVELS:?}"),
        "default: eps_read log [1e-4, 0.5], 50 points (grid not stated in caption)".to_owned(),
        "model: single_mode; improvement = s_hh_q0 / s_hh_opt".to_owned(),
    ];
    let mut t = table("fig2_top", &notes, &IMPROVEMENT_COLUMNS);
    let jobs: Vec<_> = SQZ_DB_LEVELS
        .iter()
        .flat_map(|&db| eps_read_grid().into_iter().map(move |r| (db, r)))
        .collect();
    for row in rows(&jobs, |&(db, r)| improvement_row(db, 0.001, r))? {
        t.push(row);
    }
    Ok(t)
}

/// As [`fig2_top`] at 15 dB, one curve per internal loss.
pub fn fig2_bottom() -> crate::Result<Table> {
    const EPS_INT: [f64; 3] = [1e-4, 1e-3, 1e-2];
    let notes = [
        format!("caption: T_c={T_C}, sqz_db=15, omega=0, eps_int in {EPS_INT:?}"),
        "default: eps_read log [1e-4, 0.5], 50 points; eps_int levels (not stated in caption)".to_owned(),
        "model: single_mode; improvement = s_hh_q0 / s_hh_opt".to_owned(),
    ];
    let mut t = table("fig2_bottom", &notes, &IMPROVEMENT_COLUMNS);
    let jobs: Vec<_> = EPS_INT
        .iter()
        .flat_map(|&e| eps_read_grid().into_iter().map(move |r| (e, r)))
        .collect();
    for row in rows(&jobs, |&(e, r)| improvement_row(15.0, e, r))? {
        t.push(row);
    }
    Ok(t)
}

/// Readout losses of the internal-squeezing-only curves.
pub const FIG3_EPS_READ: [f64; 4] = [0.01, 0.05, 0.1, 0.2];
/// Number of gain points per curve, linear on `[0, 0.995 q_th]`.
pub const FIG3_POINTS: usize = 100;

/// Internal squeezing alone (`beta = 1`, `eps_int = 0`): SNR gain (top),
/// bandwidth and SBP relative to `q = 0` (bottom), against internal gain.
pub fn fig3() -> crate::Result<Vec<Table>> {
    let notes = [
        format!("caption: T_c={T_C}, eps_int=0, beta=1, omega=0"),
        format!(
            "default: eps_read in {FIG3_EPS_READ:?}; q linear [0, 0.995 q_th], {FIG3_POINTS} points (not stated in caption)"
        ),
        "model: single_mode".to_owned(),
    ];
    let q_grid = linear_grid(0.0, 0.995 * T_C, FIG3_POINTS);
    let jobs: Vec<_> = FIG3_EPS_READ
        .iter()
        .flat_map(|&r| q_grid.iter().map(move |&q| (r, q)))
        .collect();
    let evaluated = rows(&jobs, |&(r, q)| {
        let p = cavity(0.0, r);
        let model = ModelKind::SingleMode;
        let gain = snr_gain(model, &p, 1.0, q, 0.0)?;
        let at = bandwidth(&p, &SqueezeSettings::coherent().with_q(q), model)?;
        let base = bandwidth(&p, &SqueezeSettings::coherent(), model)?;
        Ok(vec![
            r.into(),
            q.into(),
            (q / p.threshold()).into(),
            gain.into(),
            (at.omega_hwhm / base.omega_hwhm).into(),
            (at.sbp / base.sbp).into(),
        ])
    })?;

    let mut top = table(
        "fig3_top",
        &notes,
        &["eps_read", "q", "q_over_q_th", "snr_gain"],
    );
    let mut bottom = table(
        "fig3_bottom",
        &notes,
        &["eps_read", "q", "q_over_q_th", "bandwidth_ratio", "sbp_ratio"],
    );
    for row in evaluated {
        top.push(row[..4].to_vec());
        bottom.push([&row[..3], &row[4..]].concat());
    }
    Ok(vec![top, bottom])
}

const THRESHOLD_COLUMNS: [&str; 9] = [
    "sqz_db",
    "beta",
    "eps_int",
    "eps_read",
    "q_opt",
    "q_opt_over_q_th",
    "s_hh_threshold",
    "s_hh_opt",
    "improvement",
];

fn threshold_row(sqz_db: f64, eps_int: f64, eps_read: f64) -> crate::Result<Vec<Cell>> {
    let beta = db_to_factor(sqz_db);
    let p = cavity(eps_int, eps_read);
    let best = single_mode::optimal_sensitivity(&p, beta);
    let s_th = single_mode::limit_threshold(&p);
    Ok(vec![
        sqz_db.into(),
        beta.into(),
        eps_int.into(),
        eps_read.into(),
        best.q_opt.into(),
        (best.q_opt / p.threshold()).into(),
        s_th.into(),
        best.s_hh.into(),
        (s_th / best.s_hh).into(),
    ])
}

/// Improvement of optimal internal gain over operation at threshold, and
/// `q_opt / q_th`, against readout loss; `eps_int = 0.001`.
pub fn fig4_top() -> crate::Result<Table> {
    let notes = [
        format!("caption: T_c={T_C}, eps_int=0.001, omega=0"),
        format!("default: sqz_db in {SQZ_DB_LEVELS:?}; eps_read log [1e-4, 0.5], 50 points (not stated in caption)"),
        "model: single_mode; improvement = s_hh_threshold / s_hh_opt".to_owned(),
    ];
    let mut t = table("fig4_top", &notes, &THRESHOLD_COLUMNS);
    let jobs: Vec<_> = SQZ_DB_LEVELS
        .iter()
        .flat_map(|&db| eps_read_grid().into_iter().map(move |r| (db, r)))
        .collect();
    for row in rows(&jobs, |&(db, r)| threshold_row(db, 0.001, r))? {
        t.push(row);
    }
    Ok(t)
}

pub const FIG4_BOTTOM_EPS_READ: [f64; 4] = [0.001, 0.005, 0.01, 0.02];

/// As [`fig4_top`] against internal loss at 15 dB, one curve per readout
/// loss.
pub fn fig4_bottom() -> crate::Result<Table> {
    let notes = [
        format!("caption: T_c={T_C}, sqz_db=15, omega=0"),
        format!(
            "default: eps_read in {FIG4_BOTTOM_EPS_READ:?}; eps_int log [1e-5, 1e-2], 50 points (not stated in caption)"
        ),
        "model: single_mode; improvement = s_hh_threshold / s_hh_opt".to_owned(),
    ];
    let mut t = table("fig4_bottom", &notes, &THRESHOLD_COLUMNS);
    let jobs: Vec<_> = FIG4_BOTTOM_EPS_READ
        .iter()
        .flat_map(|&r| log_grid(1e-5, 1e-2, 50).into_iter().map(move |e| (r, e)))
        .collect();
    for row in rows(&jobs, |&(r, e)| threshold_row(15.0, e, r))? {
        t.push(row);
    }
    Ok(t)
}

pub const FIG5_EPS_INT: f64 = 1e-4;

struct Fig5Point {
    q_opt: f64,
    optimum: BandwidthResult,
    standard: BandwidthResult,
    external: BandwidthResult,
}

fn fig5_point(beta: f64, eps_read: f64) -> crate::Result<Fig5Point> {
    let p = cavity(FIG5_EPS_INT, eps_read);
    let model = ModelKind::SingleMode;
    let (q_opt, _) = clamp_gain(&p, single_mode::optimal_gain(&p, beta));
    Ok(Fig5Point {
        q_opt,
        optimum: bandwidth(&p, &SqueezeSettings::new(q_opt, beta, 1.0), model)?,
        standard: bandwidth(&p, &SqueezeSettings::coherent(), model)?,
        external: bandwidth(&p, &SqueezeSettings::new(0.0, beta, 1.0), model)?,
    })
}

/// Readout loss per squeezing level at which the optimal internal gain
/// vanishes, where the SBP equals that of external squeezing alone.
pub fn fig5_unity_points() -> Vec<(f64, Option<f64>)> {
    SQZ_DB_LEVELS
        .iter()
        .map(|&db| (db, gain_sign_change_eps_read(&cavity(FIG5_EPS_INT, 0.0), db_to_factor(db))))
        .collect()
}

/// Bandwidth (top) and SBP (bottom) at optimal internal gain, relative to
/// the standard interferometer (left) and to external squeezing alone
/// (right), against readout loss; `eps_int = 1e-4`.
pub fn fig5() -> crate::Result<Vec<Table>> {
    let mut notes = vec![
        format!("caption: T_c={T_C}, eps_int={FIG5_EPS_INT}, omega=0"),
        format!("default: sqz_db in {SQZ_DB_LEVELS:?}; eps_read log [1e-4, 0.5], 50 points (not stated in caption)"),
        "model: single_mode; standard = no internal or external squeezing; external = external squeezing only"
            .to_owned(),
    ];
    for (db, point) in fig5_unity_points() {
        let at = point.map_or("none".to_owned(), |r| format!("{r:.11e}"));
        notes.push(format!("unity: sqz_db={db} eps_read={at} (sbp ratio vs external = 1, q_opt = 0)"));
    }

    let jobs: Vec<_> = SQZ_DB_LEVELS
        .iter()
        .flat_map(|&db| eps_read_grid().into_iter().map(move |r| (db, r)))
        .collect();
    let points: Vec<Fig5Point> = jobs
        .par_iter()
        .map(|&(db, r)| fig5_point(db_to_factor(db), r))
        .collect::<crate::Result<_>>()?;

    let lead = |db: f64, r: f64, q: f64| -> Vec<Cell> { vec![db.into(), r.into(), q.into()] };
    let mut bw_std = table(
        "fig5_bandwidth_vs_standard",
        &notes,
        &["sqz_db", "eps_read", "q_opt", "omega_hwhm_opt", "omega_hwhm_standard", "bandwidth_ratio"],
    );
    let mut bw_ext = table(
        "fig5_bandwidth_vs_external",
        &notes,
        &["sqz_db", "eps_read", "q_opt", "omega_hwhm_opt", "omega_hwhm_external", "bandwidth_ratio"],
    );
    let mut sbp_std = table(
        "fig5_sbp_vs_standard",
        &notes,
        &["sqz_db", "eps_read", "q_opt", "sbp_opt", "sbp_standard", "sbp_ratio", "sbp_ratio_external_only"],
    );
    let mut sbp_ext = table(
        "fig5_sbp_vs_external",
        &notes,
        &["sqz_db", "eps_read", "q_opt", "sbp_opt", "sbp_external", "sbp_ratio"],
    );
    for (&(db, r), pt) in jobs.iter().zip(&points) {
        let (o, s, e) = (&pt.optimum, &pt.standard, &pt.external);
        let mut row = lead(db, r, pt.q_opt);
        row.extend([o.omega_hwhm.into(), s.omega_hwhm.into(), (o.omega_hwhm / s.omega_hwhm).into()]);
        bw_std.push(row);
        let mut row = lead(db, r, pt.q_opt);
        row.extend([o.omega_hwhm.into(), e.omega_hwhm.into(), (o.omega_hwhm / e.omega_hwhm).into()]);
        bw_ext.push(row);
        let mut row = lead(db, r, pt.q_opt);
        row.extend([o.sbp.into(), s.sbp.into(), (o.sbp / s.sbp).into(), (e.sbp / s.sbp).into()]);
        sbp_std.push(row);
        let mut row = lead(db, r, pt.q_opt);
        row.extend([o.sbp.into(), e.sbp.into(), (o.sbp / e.sbp).into()]);
        sbp_ext.push(row);
    }
    Ok(vec![bw_std, bw_ext, sbp_std, sbp_ext])
}
