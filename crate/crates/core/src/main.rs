use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};

use squeezelim::model::{db_to_factor, validate, CavityParams, SqueezeSettings};
use squeezelim::scenario::figures::{emit_figure_datasets, Figure};
use squeezelim::scenario::table::round_json;
use squeezelim::scenario::{run_file, threads_from_env, ScenarioError};
use squeezelim::LimitReport;

#[derive(Parser)]
#[command(name = "squeezelim", version, about = "Quantum-noise limits of cavities with internal squeezing")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Evaluate a TOML scenario and write its dataset.
    Run {
        config: PathBuf,
        /// Write here instead of the configured output path.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Write the built-in datasets of one figure as CSV files.
    Figure {
        #[arg(value_parser = clap::value_parser!(FigureArg))]
        figure: FigureArg,
        #[arg(long)]
        out: PathBuf,
    },
    /// Print every closed-form limit for one configuration as JSON.
    Limits {
        #[arg(long = "tc")]
        t_c: f64,
        #[arg(long, default_value_t = 0.0)]
        eps_int: f64,
        #[arg(long, default_value_t = 0.0)]
        eps_read: f64,
        #[arg(long, default_value_t = 0.0)]
        eps_inj: f64,
        /// External squeezing, dB.
        #[arg(long, default_value_t = 0.0)]
        sqz_db: f64,
        /// Output amplification, dB.
        #[arg(long, default_value_t = 0.0)]
        zeta_db: f64,
        /// Internal gain used for the lossless bounds.
        #[arg(long, default_value_t = 0.0, allow_negative_numbers = true)]
        q: f64,
    },
}

#[derive(Clone, Copy)]
struct FigureArg(Figure);

impl std::str::FromStr for FigureArg {
    type Err = String;
    fn from_str(s: &str) -> Result<Self, String> {
        s.parse().map(FigureArg)
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match execute(cli.command) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}

fn execute(command: Command) -> Result<(), ScenarioError> {
    let threads = threads_from_env()?;
    match command {
        Command::Run { config, out } => {
            let path = run_file(&config, out.as_deref(), threads)?;
            println!("{}", path.display());
        }
        Command::Figure { figure, out } => {
            for path in emit_figure_datasets(figure.0, &out, threads)? {
                println!("{}", path.display());
            }
        }
        Command::Limits {
            t_c,
            eps_int,
            eps_read,
            eps_inj,
            sqz_db,
            zeta_db,
            q,
        } => {
            let params = CavityParams::default().with_t_c(t_c).with_losses(eps_int, eps_read, eps_inj);
            let settings = SqueezeSettings::new(q, db_to_factor(sqz_db), db_to_factor(zeta_db));
            validate(&params, &settings)
                .into_result()
                .map_err(|e| match e {
                    squeezelim::Error::InvalidParameter { field, .. } => {
                        ScenarioError::Config(squeezelim::scenario::ConfigError {
                            line: None,
                            field: Some(field.into()),
                            message: e.to_string(),
                        })
                    }
                    other => ScenarioError::Numerical {
                        point: "command-line parameters".into(),
                        source: other,
                    },
                })?;
            let report = round_json(serde_json::to_value(LimitReport::compute(&params, &settings)).expect("serialises"));
            println!("{}", serde_json::to_string_pretty(&report).expect("serialises"));
        }
    }
    Ok(())
}
