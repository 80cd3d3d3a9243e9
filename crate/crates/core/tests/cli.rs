use std::fs;
use std::path::{Path, PathBuf};
use std::process::{Command, Output};

fn detrace(args: &[&str], out_env: Option<&Path>) -> Output {
    let mut cmd = Command::new(env!("CARGO_BIN_EXE_detrace"));
    cmd.args(args);
    match out_env {
        Some(dir) => cmd.env("DETRACE_OUT_DIR", dir),
        None => cmd.env_remove("DETRACE_OUT_DIR"),
    };
    cmd.output().expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).into_owned()
}

fn stderr(o: &Output) -> String {
    String::from_utf8_lossy(&o.stderr).into_owned()
}

fn synthetic(name: &str) -> String {
    PathBuf::from(env!("CARGO_MANIFEST_DIR"))
        .join("tests/data/synthetic")
        .join(name)
        .to_string_lossy()
        .into_owned()
}

const SMALL: &str = r#"
[experiment]
id = "small"
p = 20
n = 40
reps = 30
seed = 9
theory_overlay = true

[covariance]
kind = "ar1"
rho = 0.4
"#;

#[test]
fn theory_d_prints_limits() {
    let o = detrace(
        &[
            "theory", "d", "--y", "0.5", "--lambda", "0.5", "--delta2", "2",
        ],
        None,
    );
    assert!(o.status.success());
    let text = stdout(&o);
    let value = |key: &str| -> f64 {
        text.lines()
            .find_map(|l| l.strip_prefix(key))
            .unwrap_or_else(|| panic!("{key} missing from {text}"))
            .trim()
            .parse()
            .unwrap()
    };
    assert!((value("theta1 ") + 0.35355).abs() < 1e-5);
    assert!((value("Phi(theta1) ") - 0.3618).abs() < 1e-4);
    assert!((value("tau ") - 0.5f64.sqrt()).abs() < 1e-12);
}

#[test]
fn simulate_writes_identical_files_on_rerun() {
    let dir = tempfile::tempdir().unwrap();
    let config = dir.path().join("small.toml");
    fs::write(&config, SMALL).unwrap();
    let cfg = config.to_str().unwrap();
    let a = dir.path().join("a");
    let b = dir.path().join("b");
    let first = detrace(&["simulate", "--config", cfg, "--workers", "1"], Some(&a));
    assert!(first.status.success(), "{}", stderr(&first));
    let second = detrace(
        &[
            "simulate",
            "--config",
            cfg,
            "--workers",
            "3",
            "--out",
            b.to_str().unwrap(),
        ],
        None,
    );
    assert!(second.status.success(), "{}", stderr(&second));
    for name in ["small_results.csv", "small_results.json"] {
        assert_eq!(
            fs::read(a.join(name)).unwrap(),
            fs::read(b.join(name)).unwrap(),
            "{name}"
        );
    }
    let csv = fs::read_to_string(a.join("small_results.csv")).unwrap();
    assert_eq!(
        csv.lines().count(),
        5,
        "header plus four classifiers:\n{csv}"
    );
    assert!(
        csv.starts_with("experiment_id,classifier,median_error_pct,se_pct,reps,theory_pred_pct\n")
    );
}

#[test]
fn validation_errors_exit_one() {
    let dir = tempfile::tempdir().unwrap();
    let wide = dir.path().join("wide.toml");
    fs::write(
        &wide,
        "[experiment]\np = 100\nn = 30\nseed = 1\n[classifiers]\nids = [\"d\", \"t\"]\n",
    )
    .unwrap();
    let o = detrace(
        &["simulate", "--config", wide.to_str().unwrap()],
        Some(dir.path()),
    );
    assert_eq!(o.status.code(), Some(1));
    assert!(
        stderr(&o).contains("smaller than n1 + n2 - 2"),
        "{}",
        stderr(&o)
    );

    let bad = dir.path().join("bad.toml");
    fs::write(
        &bad,
        "[experiment]\np = 5\nn = 30\nseed = 1\n[covariance]\nkind = \"equal_corr\"\nrho = 1.2\n",
    )
    .unwrap();
    let o = detrace(
        &["simulate", "--config", bad.to_str().unwrap()],
        Some(dir.path()),
    );
    assert_eq!(o.status.code(), Some(1));
    let err = stderr(&o);
    assert!(err.contains("[covariance].rho"), "{err}");
    assert!(
        err.contains("[experiment]") && err.contains("[classifiers]"),
        "schema help shown"
    );

    let o = detrace(&["simulate"], None);
    assert_eq!(o.status.code(), Some(1));
}

#[test]
fn classify_synthetic_split() {
    let dir = tempfile::tempdir().unwrap();
    let o = detrace(
        &[
            "classify",
            "--train",
            &synthetic("train.csv"),
            "--test",
            &synthetic("test.csv"),
            "--labels",
            &synthetic("train_labels.csv"),
            "--test-labels",
            &synthetic("test_labels.csv"),
            "--classifier",
            "t",
            "--classifier",
            "nb",
            "--out",
            dir.path().to_str().unwrap(),
        ],
        None,
    );
    assert!(o.status.success(), "{}", stderr(&o));
    let csv = fs::read_to_string(dir.path().join("classify_errors.csv")).unwrap();
    assert_eq!(
        csv,
        "classifier,train_errors,train_n,test_errors,test_n\nt,0,40,0,40\nnb,0,40,0,40\n"
    );
}

#[test]
fn theory_t_lists_variants() {
    let dir = tempfile::tempdir().unwrap();
    let config = dir.path().join("t.toml");
    fs::write(
        &config,
        "[experiment]\np = 500\nn = 100\nseed = 1\n[scenario]\nkind = \"localized\"\nn0 = 10\n",
    )
    .unwrap();
    let o = detrace(&["theory", "t", "--config", config.to_str().unwrap()], None);
    assert!(o.status.success(), "{}", stderr(&o));
    let text = stdout(&o);
    let v2 = text.lines().find(|l| l.starts_with("v2")).expect("v2 row");
    let fields: Vec<&str> = v2.split_whitespace().collect();
    assert!(
        (fields[1].parse::<f64>().unwrap() - 79.6).abs() < 1e-9,
        "{v2}"
    );
    assert!(
        (fields[2].parse::<f64>().unwrap() - 13.35).abs() < 0.01,
        "{v2}"
    );
    for variant in ["full", "v1", "v3"] {
        assert!(
            text.lines().any(|l| l.starts_with(variant)),
            "{variant} missing"
        );
    }
}
