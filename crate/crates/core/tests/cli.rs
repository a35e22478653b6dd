use std::fs;
use std::path::Path;
use std::process::{Command, Output};

use serde_json::Value;
use teletomo::expcli::{
    cmd_simulate, read_records, write_json, ExperimentConfig, InputSpec, StateFile, StateSource,
};
use teletomo::qstate::{BellOutcome, Density, InputLabel};
use tempfile::TempDir;

fn teletomo(dir: &Path, args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_teletomo"))
        .current_dir(dir)
        .args(args)
        .output()
        .expect("spawn teletomo")
}

fn ok(dir: &Path, args: &[&str]) -> Output {
    let out = teletomo(dir, args);
    assert!(
        out.status.success(),
        "{args:?} failed: {}",
        String::from_utf8_lossy(&out.stderr)
    );
    out
}

fn json(path: &Path) -> Value {
    serde_json::from_slice(&fs::read(path).unwrap()).unwrap()
}

fn write_state(path: &Path, rho: &Density<f64>) {
    write_json(path, &StateFile::from_density(rho)).unwrap();
}

fn singlet_dir() -> TempDir {
    let dir = tempfile::tempdir().unwrap();
    let rho = Density::from_pure(&BellOutcome::PsiMinus.state::<f64>()).unwrap();
    write_state(&dir.path().join("singlet.json"), &rho);
    dir
}

fn verify(dir: &Path, truth: &str, estimate: &str) -> Value {
    let out = ok(dir, &["verify", "--truth", truth, "--estimate", estimate]);
    serde_json::from_slice(&out.stdout).unwrap()
}

#[test]
fn gen_is_deterministic_and_validates_rank() {
    let dir = tempfile::tempdir().unwrap();
    ok(
        dir.path(),
        &["gen", "--qubits", "2", "--seed", "11", "--out", "a.json"],
    );
    ok(
        dir.path(),
        &["gen", "--qubits", "2", "--seed", "11", "--out", "b.json"],
    );
    assert_eq!(
        fs::read(dir.path().join("a.json")).unwrap(),
        fs::read(dir.path().join("b.json")).unwrap()
    );
    let state = json(&dir.path().join("a.json"));
    assert_eq!(state["qubits"], 2);
    assert_eq!(state["mat"].as_array().unwrap().len(), 16);

    let out = teletomo(
        dir.path(),
        &[
            "gen", "--qubits", "2", "--rank", "5", "--seed", "0", "--out", "c.json",
        ],
    );
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn simulate_singlet_gives_input_projectors() {
    let dir = singlet_dir();
    ok(
        dir.path(),
        &["simulate", "--state", "singlet.json", "--out", "rec.json"],
    );
    let file = read_records(&dir.path().join("rec.json")).unwrap();
    assert_eq!(file.records.len(), 4);
    let plus = file
        .records
        .iter()
        .find(|r| r.arrangement == vec![InputSpec::Label(InputLabel::Plus)])
        .unwrap();
    assert!((plus.q - 0.25).abs() < 1e-12);
    for t in &plus.tilde {
        assert!((t[0] - 0.125).abs() < 1e-12 && t[1].abs() < 1e-12);
    }
}

#[test]
fn simulate_three_qubits_gives_sixteen_records() {
    let dir = tempfile::tempdir().unwrap();
    ok(
        dir.path(),
        &[
            "simulate",
            "--state-seed",
            "3",
            "--qubits",
            "3",
            "--out",
            "rec.json",
        ],
    );
    assert_eq!(
        read_records(&dir.path().join("rec.json"))
            .unwrap()
            .records
            .len(),
        16
    );
    ok(
        dir.path(),
        &[
            "simulate",
            "--state-seed",
            "3",
            "--qubits",
            "3",
            "--all-outcomes",
            "--out",
            "all.json",
        ],
    );
    assert_eq!(
        read_records(&dir.path().join("all.json"))
            .unwrap()
            .records
            .len(),
        256
    );
}

#[test]
fn exact_pipeline_recovers_state() {
    let dir = tempfile::tempdir().unwrap();
    for (n, rank) in [("2", "3"), ("3", "8")] {
        ok(
            dir.path(),
            &[
                "gen",
                "--qubits",
                n,
                "--rank",
                rank,
                "--seed",
                "5",
                "--out",
                "truth.json",
            ],
        );
        ok(
            dir.path(),
            &["simulate", "--state", "truth.json", "--out", "rec.json"],
        );
        ok(
            dir.path(),
            &[
                "reconstruct",
                "--records",
                "rec.json",
                "--out",
                "closed.json",
            ],
        );
        ok(
            dir.path(),
            &[
                "reconstruct",
                "--records",
                "rec.json",
                "--method",
                "linear",
                "--out",
                "linear.json",
            ],
        );
        assert!(
            verify(dir.path(), "truth.json", "closed.json")["frobenius"]
                .as_f64()
                .unwrap()
                < 1e-10
        );
        assert!(
            verify(dir.path(), "closed.json", "linear.json")["max_entry"]
                .as_f64()
                .unwrap()
                < 1e-9
        );
        assert_eq!(json(&dir.path().join("closed.json"))["projected"], false);
    }
}

#[test]
fn non_designated_outcome_pipeline() {
    let dir = tempfile::tempdir().unwrap();
    ok(
        dir.path(),
        &["gen", "--qubits", "3", "--seed", "9", "--out", "truth.json"],
    );
    ok(
        dir.path(),
        &[
            "simulate",
            "--state",
            "truth.json",
            "--outcome",
            "PhiPlus,PsiPlus",
            "--out",
            "rec.json",
        ],
    );
    ok(
        dir.path(),
        &["reconstruct", "--records", "rec.json", "--out", "est.json"],
    );
    assert!(
        verify(dir.path(), "truth.json", "est.json")["frobenius"]
            .as_f64()
            .unwrap()
            < 1e-10
    );
}

#[test]
fn verify_reports_all_metrics() {
    let dir = tempfile::tempdir().unwrap();
    let zero = Density::from_pure(
        &teletomo::qstate::PureQubit::<f64>::standard(InputLabel::Zero).amplitudes(),
    )
    .unwrap();
    write_state(&dir.path().join("zero.json"), &zero);
    write_state(&dir.path().join("mixed.json"), &Density::maximally_mixed(1));
    let m = verify(dir.path(), "zero.json", "mixed.json");
    assert!((m["trace_distance"].as_f64().unwrap() - 0.5).abs() < 1e-12);
    assert!((m["frobenius"].as_f64().unwrap() - 0.5f64.sqrt()).abs() < 1e-12);
    assert!((m["max_entry"].as_f64().unwrap() - 0.5).abs() < 1e-12);
    assert_eq!(
        verify(dir.path(), "zero.json", "zero.json")["trace_distance"]
            .as_f64()
            .unwrap(),
        0.0
    );

    ok(
        dir.path(),
        &["gen", "--qubits", "2", "--seed", "1", "--out", "two.json"],
    );
    assert_eq!(
        teletomo(
            dir.path(),
            &["verify", "--truth", "zero.json", "--estimate", "two.json"]
        )
        .status
        .code(),
        Some(2)
    );
}

#[test]
fn sampled_runs_are_reproducible_and_physical() {
    let dir = singlet_dir();
    let args = |out: &'static str| {
        [
            "simulate",
            "--state",
            "singlet.json",
            "--mode",
            "sampled",
            "--shots",
            "5000",
            "--seed",
            "42",
            "--out",
            out,
        ]
    };
    ok(dir.path(), &args("a.json"));
    ok(dir.path(), &args("b.json"));
    assert_eq!(
        fs::read(dir.path().join("a.json")).unwrap(),
        fs::read(dir.path().join("b.json")).unwrap()
    );
    let file = read_records(&dir.path().join("a.json")).unwrap();
    assert!(file.records.iter().all(|r| r.shots == Some(4 * 5000)));

    ok(
        dir.path(),
        &["reconstruct", "--records", "a.json", "--out", "est.json"],
    );
    let d = verify(dir.path(), "singlet.json", "est.json")["trace_distance"]
        .as_f64()
        .unwrap();
    assert!(d > 0.0 && d < 0.2, "trace distance {d}");
}

#[test]
fn convergence_writes_one_row_per_pair() {
    let dir = singlet_dir();
    ok(
        dir.path(),
        &[
            "convergence",
            "--state",
            "singlet.json",
            "--shots",
            "100,1000,10000",
            "--seeds",
            "4",
            "--out",
            "c.csv",
        ],
    );
    let csv = fs::read_to_string(dir.path().join("c.csv")).unwrap();
    let lines: Vec<&str> = csv.lines().collect();
    assert_eq!(lines[0], "n_shots,seed,trace_distance");
    assert_eq!(lines.len(), 1 + 3 * 4);
    for row in &lines[1..] {
        let d: f64 = row.split(',').nth(2).unwrap().parse().unwrap();
        assert!((0.0..=1.0).contains(&d));
    }
}

#[test]
fn record_file_roundtrips_byte_identically() {
    let dir = tempfile::tempdir().unwrap();
    ok(
        dir.path(),
        &[
            "simulate",
            "--state-seed",
            "8",
            "--qubits",
            "3",
            "--mode",
            "sampled",
            "--shots",
            "300",
            "--out",
            "rec.json",
        ],
    );
    let path = dir.path().join("rec.json");
    let file = read_records(&path).unwrap();
    write_json(&dir.path().join("again.json"), &file).unwrap();
    assert_eq!(
        fs::read(&path).unwrap(),
        fs::read(dir.path().join("again.json")).unwrap()
    );
}

#[test]
fn missing_record_exits_with_insufficient_data() {
    let dir = singlet_dir();
    ok(
        dir.path(),
        &["simulate", "--state", "singlet.json", "--out", "rec.json"],
    );
    let mut v = json(&dir.path().join("rec.json"));
    v["records"].as_array_mut().unwrap().pop();
    fs::write(
        dir.path().join("short.json"),
        serde_json::to_vec(&v).unwrap(),
    )
    .unwrap();
    let out = teletomo(
        dir.path(),
        &["reconstruct", "--records", "short.json", "--out", "x.json"],
    );
    assert_eq!(out.status.code(), Some(3));
    assert!(!dir.path().join("x.json").exists());
}

#[test]
fn coplanar_inputs_exit_with_numerical_error() {
    let dir = singlet_dir();
    let h = std::f64::consts::FRAC_1_SQRT_2;
    let mut config = ExperimentConfig::exact(2);
    config.input_set = vec![
        InputSpec::Label(InputLabel::Zero),
        InputSpec::Label(InputLabel::One),
        InputSpec::Label(InputLabel::Plus),
        InputSpec::Amplitudes([[h, 0.0], [-h, 0.0]]),
    ];
    let path = dir.path().join("coplanar.json");
    cmd_simulate(
        StateSource::File(&dir.path().join("singlet.json")),
        &config,
        &path,
    )
    .unwrap();
    let out = teletomo(
        dir.path(),
        &[
            "reconstruct",
            "--records",
            "coplanar.json",
            "--method",
            "linear",
            "--out",
            "x.json",
        ],
    );
    assert_eq!(out.status.code(), Some(4));
}

#[test]
fn bad_usage_exits_with_two() {
    let dir = tempfile::tempdir().unwrap();
    assert_eq!(teletomo(dir.path(), &["frobnicate"]).status.code(), Some(2));
    assert_eq!(
        teletomo(
            dir.path(),
            &["reconstruct", "--records", "nope.json", "--out", "x.json"]
        )
        .status
        .code(),
        Some(2)
    );
    fs::write(dir.path().join("junk.json"), "{").unwrap();
    assert_eq!(
        teletomo(
            dir.path(),
            &["reconstruct", "--records", "junk.json", "--out", "x.json"]
        )
        .status
        .code(),
        Some(2)
    );
}
