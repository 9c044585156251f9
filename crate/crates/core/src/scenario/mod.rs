//! Scenario runner behind the `squeezelim` binary: TOML configurations,
//! parameter sweeps, built-in figure datasets and their CSV / JSON output.

pub mod config;
pub mod figures;
pub mod run;
pub mod table;

pub use config::{Axis, ConfigError, Format, ModelChoice, ScenarioConfig, Task};
pub use run::{evaluate_point, limits_table, run_config, run_file, sweep_table, ResultRow, RESULT_COLUMNS};
pub use table::{Cell, Table};

/// Environment variable capping the number of worker threads.
pub const THREADS_ENV: &str = "SQUEEZELIM_THREADS";

/// Failure of a scenario run, with the process exit code it maps to.
#[derive(Debug)]
pub enum ScenarioError {
    Config(ConfigError),
    /// A numerical failure (threshold, non-convergence, bracketing) at one
    /// evaluation point.
    Numerical {
        point: String,
        source: crate::Error,
    },
    Io {
        path: std::path::PathBuf,
        source: std::io::Error,
    },
}

impl ScenarioError {
    /// 1 for configuration and I/O problems, 2 for numerical failures.
    pub fn exit_code(&self) -> i32 {
        match self {
            ScenarioError::Config(_) | ScenarioError::Io { .. } => 1,
            ScenarioError::Numerical { .. } => 2,
        }
    }
}

impl std::fmt::Display for ScenarioError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            ScenarioError::Config(e) => write!(f, "config error: {e}"),
            ScenarioError::Numerical { point, source } => write!(f, "numerical failure at {point}: {source}"),
            ScenarioError::Io { path, source } => write!(f, "{}: {source}", path.display()),
        }
    }
}

impl std::error::Error for ScenarioError {}

impl From<ConfigError> for ScenarioError {
    fn from(e: ConfigError) -> Self {
        ScenarioError::Config(e)
    }
}

/// Reads [`THREADS_ENV`]. Unset or empty means "use all cores".
pub fn threads_from_env() -> Result<Option<usize>, ScenarioError> {
    match std::env::var(THREADS_ENV) {
        Err(_) => Ok(None),
        Ok(v) if v.trim().is_empty() => Ok(None),
        Ok(v) => match v.trim().parse::<usize>() {
            Ok(n) if n >= 1 => Ok(Some(n)),
            _ => Err(ScenarioError::Config(ConfigError {
                line: None,
                field: Some(THREADS_ENV.into()),
                message: format!("expected a positive integer, got {v:?}"),
            })),
        },
    }
}

/// Runs `f` on a rayon pool with at most `threads` workers.
pub(crate) fn with_pool<T: Send>(threads: Option<usize>, f: impl FnOnce() -> T + Send) -> T {
    let mut builder = rayon::ThreadPoolBuilder::new();
    if let Some(n) = threads {
        builder = builder.num_threads(n);
    }
    match builder.build() {
        Ok(pool) => pool.install(f),
        Err(_) => f(),
    }
}
