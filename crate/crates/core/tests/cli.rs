use std::path::Path;
use std::process::{Command, Output};

const BIN: &str = env!("CARGO_BIN_EXE_squeezelim");

fn squeezelim(args: &[&str], threads: Option<&str>) -> Output {
    let mut cmd = Command::new(BIN);
    cmd.args(args);
    match threads {
        Some(t) => cmd.env("SQUEEZELIM_THREADS", t),
        None => cmd.env_remove("SQUEEZELIM_THREADS"),
    };
    cmd.output().expect("binary runs")
}

fn figure(name: &str, dir: &Path, threads: Option<&str>) {
    let out = squeezelim(&["figure", name, "--out", dir.to_str().unwrap()], threads);
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
}

fn golden_view(csv: &str) -> String {
    let header: Vec<&str> = csv.lines().filter(|l| l.starts_with('#')).collect();
    let body: Vec<&str> = csv.lines().filter(|l| !l.starts_with('#')).collect();
    let mut lines = header;
    lines.extend([body[0], body[1], body[body.len() - 1]]);
    lines.join("\n") + "\n"
}

#[test]
fn figure_datasets_match_golden_files() {
    let dir = tempfile::tempdir().unwrap();
    for name in ["fig2", "fig3", "fig4", "fig5"] {
        figure(name, dir.path(), None);
    }
    let golden = Path::new(env!("CARGO_MANIFEST_DIR")).join("tests/golden");
    let mut checked = 0;
    for entry in std::fs::read_dir(&golden).unwrap() {
        let path = entry.unwrap().path();
        let stem = path.file_stem().unwrap().to_str().unwrap().to_owned();
        let expected = std::fs::read_to_string(&path).unwrap();
        let csv = std::fs::read_to_string(dir.path().join(format!("{stem}.csv"))).unwrap();
        assert_eq!(golden_view(&csv), expected, "{stem}");
        checked += 1;
    }
    assert_eq!(checked, 10);
}

#[test]
fn figure_output_independent_of_thread_count() {
    let a = tempfile::tempdir().unwrap();
    let b = tempfile::tempdir().unwrap();
    figure("fig5", a.path(), Some("1"));
    figure("fig5", b.path(), Some("4"));
    for name in ["fig5_sbp_vs_external", "fig5_bandwidth_vs_standard"] {
        let read = |d: &Path| std::fs::read(d.join(format!("{name}.csv"))).unwrap();
        assert_eq!(read(a.path()), read(b.path()));
    }
}

#[test]
fn invalid_thread_cap_is_config_error() {
    let dir = tempfile::tempdir().unwrap();
    let out = squeezelim(&["figure", "fig2", "--out", dir.path().to_str().unwrap()], Some("zero"));
    assert_eq!(out.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&out.stderr).contains("SQUEEZELIM_THREADS"));
}

const SWEEP: &str = r#"
model = "both"
task = "sweep"

[cavity]
t_c = 0.01
eps_int = 0.001
tau = 1e-8

[squeeze]
sqz_db = 10.0

[sweep]
axis = "eps_read"
start = 1e-3
stop = 0.3
points = 6
scale = "log"

[output]
path = "out/sweep.csv"
"#;

fn write_config(dir: &Path, text: &str) -> String {
    let path = dir.join("scenario.toml");
    std::fs::write(&path, text).unwrap();
    path.to_str().unwrap().to_owned()
}

#[test]
fn run_is_deterministic_and_rows_recompute() {
    let dir = tempfile::tempdir().unwrap();
    let config = write_config(dir.path(), SWEEP);
    let out = squeezelim(&["run", &config], None);
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    let first = std::fs::read(dir.path().join("out/sweep.csv")).unwrap();
    let out = squeezelim(&["run", &config], Some("2"));
    assert!(out.status.success());
    assert_eq!(first, std::fs::read(dir.path().join("out/sweep.csv")).unwrap());

    let text = String::from_utf8(first).unwrap();
    assert!(text.contains("# config_sha256: "));
    assert!(text.contains("# sbp: "));
    let mut reader = csv::ReaderBuilder::new().comment(Some(b'#')).from_reader(text.as_bytes());
    let headers = reader.headers().unwrap().clone();
    let col = |name: &str| headers.iter().position(|h| h == name).unwrap();
    let mut n = 0;
    for record in reader.records() {
        let r = record.unwrap();
        let get = |name: &str| r[col(name)].parse::<f64>().unwrap();
        let params = squeezelim::CavityParams::default()
            .with_tau(1e-8)
            .with_t_c(get("t_c"))
            .with_losses(get("eps_int"), get("eps_read"), get("eps_inj"));
        let settings = squeezelim::SqueezeSettings::new(get("q"), get("beta"), get("zeta"));
        let model = match &r[col("model")] {
            "single_mode" => squeezelim::ModelKind::SingleMode,
            _ => squeezelim::ModelKind::Full,
        };
        let s = model.sensitivity(&params, &settings, get("omega")).unwrap();
        assert!((s / get("s_hh") - 1.0).abs() < 1e-10);
        n += 1;
    }
    assert_eq!(n, 12);
}

#[test]
fn json_output_and_limits_task() {
    let dir = tempfile::tempdir().unwrap();
    let config = write_config(
        dir.path(),
        r#"
task = "limits"
[cavity]
t_c = 0.01
eps_int = 0.001
eps_read = 0.1
[squeeze]
sqz_db = 15.0
[output]
path = "limits.json"
format = "json"
"#,
    );
    let out = squeezelim(&["run", &config], None);
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    let json: serde_json::Value =
        serde_json::from_slice(&std::fs::read(dir.path().join("limits.json")).unwrap()).unwrap();
    let row = &json["rows"][0];
    let n0 = row["n0"].as_f64().unwrap();
    assert!((row["optimal"].as_f64().unwrap() / n0 - 1.24617e-3).abs() < 1e-8);
    assert!((row["q_opt_printed"].as_f64().unwrap() - 8.92948e-3).abs() < 1e-8);
    assert!((row["q_opt"].as_f64().unwrap() + 6.56899e-3).abs() < 1e-8);
    assert!(json["sbp_definition"].as_str().unwrap().contains("omega_hwhm"));
}

#[test]
fn config_errors_exit_one_with_location() {
    let dir = tempfile::tempdir().unwrap();
    let config = write_config(dir.path(), &SWEEP.replace("eps_int = 0.001", "eps_int = 0.001\nepsint = 2"));
    let out = squeezelim(&["run", &config], None);
    assert_eq!(out.status.code(), Some(1));
    let err = String::from_utf8_lossy(&out.stderr);
    assert!(err.contains("line 8") && err.contains("epsint"), "{err}");

    let config = write_config(dir.path(), &SWEEP.replace("t_c = 0.01", "t_c = 1.5"));
    let out = squeezelim(&["run", &config], None);
    assert_eq!(out.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&out.stderr).contains("cavity.t_c"));
}

#[test]
fn threshold_in_sweep_exits_two_naming_point() {
    let dir = tempfile::tempdir().unwrap();
    let text = SWEEP
        .replace("axis = \"eps_read\"", "axis = \"q\"")
        .replace("start = 1e-3", "start = 0.0")
        .replace("stop = 0.3", "stop = 0.02")
        .replace("scale = \"log\"", "scale = \"linear\"");
    let config = write_config(dir.path(), &text);
    let out = squeezelim(&["run", &config], None);
    assert_eq!(out.status.code(), Some(2));
    let err = String::from_utf8_lossy(&out.stderr);
    assert!(err.contains("q = 1.2e-2"), "{err}");
}

#[test]
fn limits_subcommand_prints_report() {
    let out = squeezelim(
        &["limits", "--tc", "0.01", "--eps-int", "0.001", "--eps-read", "0.1", "--sqz-db", "15"],
        None,
    );
    assert!(out.status.success());
    let json: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(json["qcrb_ratio"].as_f64(), Some(4.0));
    let eps = json["q_opt_sign_change_eps_read"].as_f64().unwrap();
    assert!((eps - 0.0252206).abs() < 1e-6);

    let out = squeezelim(&["limits", "--tc", "0.01", "--eps-read", "1.2"], None);
    assert_eq!(out.status.code(), Some(1));
}
