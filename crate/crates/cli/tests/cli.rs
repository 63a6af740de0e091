use std::path::Path;
use std::process::{Command, Output};

const CONFIG: &str = r#"
seed = 7

[scenario]
carrier_frequency_hz = 10e9
receive_antennas = 4

[sweep]
m = [16]
z0 = [3.0, 5.0]

[[scheme]]
kind = "ula"

[[scheme]]
kind = "closed-form"
alpha = -0.25
"#;

fn adfsim(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_adfsim")).args(args).output().expect("binary runs")
}

fn stdout(args: &[&str]) -> String {
    let out = adfsim(args);
    assert!(out.status.success(), "{args:?}: {}", String::from_utf8_lossy(&out.stderr));
    String::from_utf8(out.stdout).unwrap()
}

fn write_config(dir: &Path, text: &str) -> String {
    let path = dir.join("exp.toml");
    std::fs::write(&path, text).unwrap();
    path.to_str().unwrap().to_string()
}

#[test]
fn sweep_is_reproducible_and_seed_overrides() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write_config(dir.path(), CONFIG);
    let a = stdout(&["--config", &cfg, "sweep"]);
    let b = stdout(&["--config", &cfg, "--threads", "1", "sweep"]);
    assert_eq!(a, b);
    assert!(a.starts_with("scheme,M,z0,alpha,trial,rate_bits,wall_time_ms,seed\n"));
    assert_eq!(a.lines().count(), 1 + 4);
    assert!(a.lines().skip(1).all(|l| l.ends_with(",7")));

    let out = dir.path().join("r.csv");
    let c = stdout(&["--config", &cfg, "--seed", "11", "--out", out.to_str().unwrap(), "sweep"]);
    assert!(c.is_empty());
    let file = std::fs::read_to_string(&out).unwrap();
    assert!(file.lines().skip(1).all(|l| l.ends_with(",11")));
}

#[test]
fn closed_form_and_evaluate_agree_with_sweep() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write_config(dir.path(), CONFIG);
    let placement = dir.path().join("p.csv");
    stdout(&["--config", &cfg, "--out", placement.to_str().unwrap(), "closed-form", "--alpha", "-0.25", "--positions"]);
    let eval = stdout(&["--config", &cfg, "evaluate", "--placement", placement.to_str().unwrap()]);
    let sweep = stdout(&["--config", &cfg, "sweep"]);
    assert!(eval.starts_with("trial,z0,rate_bits\n"));
    // The closed-form rows of the sweep carry the same rates at z0 = 3.
    let eval_rate = eval.lines().nth(1).unwrap().rsplit(',').next().unwrap().to_string();
    let sweep_row = sweep.lines().find(|l| l.starts_with("closed-form,16,3,")).unwrap();
    assert_eq!(sweep_row.split(',').nth(5).unwrap(), eval_rate);
}

#[test]
fn simplified_closed_form_without_config() {
    let text = stdout(&["closed-form", "--alpha", "0", "--m", "5", "--positions"]);
    assert_eq!(text, "index,p\n1,-1\n2,-0.5\n3,0\n4,0.5\n5,1\n");
    let adf = stdout(&["closed-form", "--alpha", "-0.25", "--m", "16"]);
    assert!(adf.starts_with("index,p,w\n"));
}

#[test]
fn optimize_writes_trace_and_side_files() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write_config(dir.path(), CONFIG);
    let adf = dir.path().join("w.csv");
    let placement = dir.path().join("p.csv");
    let trace = stdout(&[
        "--config",
        &cfg,
        "optimize",
        "--iterations",
        "3",
        "--step",
        "300",
        "--adf",
        adf.to_str().unwrap(),
        "--placement",
        placement.to_str().unwrap(),
    ]);
    assert!(trace.starts_with("iteration,rate,delta_norm\n0,"));
    assert!(trace.lines().count() <= 5);
    assert_eq!(std::fs::read_to_string(&placement).unwrap().lines().count(), 17);
    assert!(std::fs::read_to_string(&adf).unwrap().starts_with("index,p,w\n"));
}

#[test]
fn montecarlo_emits_cdf() {
    let dir = tempfile::tempdir().unwrap();
    let text = CONFIG.replace("receive_antennas = 4", "receive_antennas = 4\npropagation = \"rician\"");
    let cfg = write_config(dir.path(), &text);
    let records = dir.path().join("records.csv");
    let cdf = stdout(&["--config", &cfg, "montecarlo", "--trials", "3", "--records", records.to_str().unwrap()]);
    assert!(cdf.starts_with("key,rate_bits,fraction\n"));
    // Two schemes at two distances, three draws each.
    assert_eq!(cdf.lines().count(), 1 + 12);
    assert_eq!(std::fs::read_to_string(&records).unwrap().lines().count(), 1 + 12);
}

#[test]
fn asymptotics_and_curve_tables() {
    let table = stdout(&["asymptotics", "--alpha", "-0.25", "--n", "8,64"]);
    let rows: Vec<Vec<f64>> =
        table.lines().skip(1).map(|l| l.split(',').map(|v| v.parse().unwrap()).collect()).collect();
    assert_eq!(table.lines().next().unwrap(), "N,exact_logdet,fh_logdet,abs_error");
    assert_eq!(rows.len(), 2);
    assert!(rows[1][3] < rows[0][3]);

    let curve = stdout(&["curve", "--alpha", "-0.25", "--samples", "11"]);
    assert_eq!(curve.lines().count(), 12);
    assert!(curve.starts_with("index,x,y\n1,-1,0\n"));
}

#[test]
fn errors_exit_nonzero_with_diagnostic() {
    let dir = tempfile::tempdir().unwrap();
    let bad = write_config(dir.path(), "[sweep]\nm = [1]\n");
    let cases: Vec<Vec<&str>> = vec![
        vec!["sweep"],
        vec!["--config", "/nonexistent/exp.toml", "sweep"],
        vec!["--config", &bad, "sweep"],
        vec!["closed-form", "--alpha", "-0.7", "--m", "8"],
        vec!["curve", "--alpha", "0.3"],
        vec!["--threads", "0", "curve", "--alpha", "0"],
    ];
    for args in cases {
        let out = adfsim(&args);
        assert!(!out.status.success(), "{args:?} succeeded");
        let err = String::from_utf8_lossy(&out.stderr);
        assert!(err.starts_with("adfsim: "), "{args:?}: {err}");
    }
    let out = adfsim(&["--config", &bad, "sweep"]);
    let err = String::from_utf8_lossy(&out.stderr);
    assert!(err.contains("sweep.m") && err.contains("receive_antennas"), "{err}");

    let out = adfsim(&["frobnicate"]);
    assert!(!out.status.success());
}
