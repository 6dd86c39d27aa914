use serde_json::Value;
use std::path::Path;
use std::process::{Command, Output};

fn altes(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_altes"))
        .args(args)
        .env("RUST_LOG", "error")
        .output()
        .expect("spawn altes")
}

fn code(o: &Output) -> i32 {
    o.status.code().expect("exit code")
}

fn json(path: &Path) -> Value {
    serde_json::from_str(&std::fs::read_to_string(path).unwrap()).unwrap()
}

fn out_arg(dir: &Path, sub: &str) -> String {
    dir.join(sub).to_str().unwrap().to_owned()
}

#[test]
fn help_and_version_exit_zero() {
    assert_eq!(code(&altes(&["--help"])), 0);
    assert_eq!(code(&altes(&["--version"])), 0);
    assert_eq!(code(&altes(&["synth", "--help"])), 0);
}

#[test]
fn unknown_subcommand_and_bad_numbers_are_usage_errors() {
    assert_eq!(code(&altes(&["transmogrify"])), 2);
    assert_eq!(code(&altes(&["verify", "--omega0", "abc"])), 2);
    assert_eq!(code(&altes(&[])), 2);
}

#[test]
fn synth_example_two_writes_calibrated_outputs() {
    let tmp = tempfile::tempdir().unwrap();
    let out = out_arg(tmp.path(), "ex2");
    let o = altes(&[
        "synth",
        "--omega0",
        "0.5236",
        "--bandwidth",
        "0.6283",
        "--lambda",
        "0.75",
        "--out",
        &out,
    ]);
    assert_eq!(code(&o), 0, "{}", String::from_utf8_lossy(&o.stderr));
    let dir = Path::new(&out);
    for f in ["spectrum.csv", "signal.bin", "signal.csv", "summary.json"] {
        assert!(dir.join(f).is_file(), "missing {f}");
    }
    let s = json(&dir.join("summary.json"));
    let b = s["bandwidth"].as_f64().unwrap();
    assert!((b - 0.6283).abs() < 1e-9, "bandwidth {b}");
    let measured = s["diagnostics"]["bandwidth_measured"].as_f64().unwrap();
    let step = 2.0 * std::f64::consts::PI / 4096.0;
    assert!((measured - b).abs() <= 2.0 * step, "measured {measured}");

    let spectrum = std::fs::read_to_string(dir.join("spectrum.csv")).unwrap();
    let mut lines = spectrum.lines();
    assert!(lines.next().unwrap().starts_with("# config: {"));
    assert_eq!(lines.next().unwrap(), "omega,real,imag,magnitude_db,phase");

    let sig = altes::io::read_signal_binary(std::fs::File::open(dir.join("signal.bin")).unwrap()).unwrap();
    assert_eq!(sig.len(), 4096);
}

#[test]
fn synth_classic_parameters() {
    let tmp = tempfile::tempdir().unwrap();
    let out = out_arg(tmp.path(), "ex1");
    let o = altes(&[
        "synth",
        "--classic",
        "--nu",
        "-0.55",
        "--k",
        "1.8",
        "--c",
        "-0.35",
        "--out",
        &out,
    ]);
    assert_eq!(code(&o), 0, "{}", String::from_utf8_lossy(&o.stderr));
    let s = json(&Path::new(&out).join("summary.json"));
    assert!((s["params"]["lambda"].as_f64().unwrap() - 0.1865).abs() < 5e-4);
    assert!((s["bandwidth"].as_f64().unwrap() - 7.3440).abs() < 1e-3);
}

#[test]
fn synth_rejects_missing_and_conflicting_flags_without_leaving_output() {
    let tmp = tempfile::tempdir().unwrap();
    let out = out_arg(tmp.path(), "bad");
    assert_eq!(
        code(&altes(&["synth", "--omega0", "0.5", "--lambda", "0.5", "--out", &out])),
        2
    );
    assert!(!Path::new(&out).exists());
    let o = altes(&[
        "synth",
        "--omega0",
        "1",
        "--omega-c",
        "0.5",
        "--lambda",
        "0.5",
        "--out",
        &out,
    ]);
    assert_eq!(code(&o), 2);
    assert!(!Path::new(&out).exists());
    let o = altes(&[
        "synth",
        "--omega0",
        "1",
        "--omega-c",
        "2",
        "--bandwidth",
        "1",
        "--lambda",
        "0.5",
        "--out",
        &out,
    ]);
    assert_eq!(code(&o), 2);
    let o = altes(&[
        "synth",
        "--omega0",
        "1",
        "--omega-c",
        "2",
        "--lambda",
        "1",
        "--out",
        &out,
    ]);
    assert_eq!(code(&o), 2);
    let o = altes(&[
        "synth",
        "--omega0",
        "0.5",
        "--omega-c",
        "3",
        "--lambda",
        "0.5",
        "--nfft",
        "1000",
        "--out",
        &out,
    ]);
    assert_eq!(code(&o), 2);
}

#[test]
fn verify_reference_passes_and_off_gate_params_only_warn() {
    let o = altes(&["verify"]);
    assert_eq!(code(&o), 0);
    let report: Value = serde_json::from_slice(&o.stdout).unwrap();
    assert_eq!(report["all_passed"], Value::Bool(true));
    let errs = report["scale_law"]["relative_errors"].as_array().unwrap();
    assert_eq!(errs.len(), 5);
    assert_eq!(errs[0].as_f64().unwrap(), 0.0);

    let o = altes(&["verify", "--omega0", "2.0", "--omega-c", "3.14159", "--lambda", "0.5"]);
    assert_eq!(code(&o), 0);
    let report: Value = serde_json::from_slice(&o.stdout).unwrap();
    assert_eq!(report["all_passed"], Value::Bool(true));
}

#[test]
fn verify_writes_report_file() {
    let tmp = tempfile::tempdir().unwrap();
    let path = tmp.path().join("report.json");
    let o = altes(&[
        "verify",
        "--pi-units",
        "--omega0",
        "0.25",
        "--omega-c",
        "1",
        "--lambda",
        "0.3",
        "--out",
        path.to_str().unwrap(),
    ]);
    assert_eq!(code(&o), 0);
    let report = json(&path);
    assert!(report["checks"].as_array().unwrap().len() >= 7);
}

#[test]
fn sweep_small_grid_and_empty_grid() {
    let tmp = tempfile::tempdir().unwrap();
    let out = out_arg(tmp.path(), "sw");
    let o = altes(&[
        "sweep",
        "--n-omega0",
        "4",
        "--n-cutoff",
        "4",
        "--n-lambda",
        "3",
        "--out",
        &out,
    ]);
    assert_eq!(code(&o), 0, "{}", String::from_utf8_lossy(&o.stderr));
    let dir = Path::new(&out);
    let adv = json(&dir.join("advisory.json"));
    assert_eq!(adv["records"].as_u64().unwrap(), 48);
    let sweep = std::fs::read_to_string(dir.join("sweep.csv")).unwrap();
    let header = sweep.lines().nth(1).unwrap();
    assert!(header.starts_with("omega0,omega_c,lambda,bandwidth,delay_spread,oscillations,n_fft,on_frontier"));
    assert_eq!(sweep.lines().count(), 2 + 48);
    let frontier = std::fs::read_to_string(dir.join("frontier.csv")).unwrap();
    assert_eq!(
        frontier.lines().count(),
        2 + adv["frontier_size"].as_u64().unwrap() as usize
    );

    let empty = out_arg(tmp.path(), "empty");
    assert_eq!(code(&altes(&["sweep", "--n-lambda", "0", "--out", &empty])), 2);
    assert!(!Path::new(&empty).exists());
    let inverted = out_arg(tmp.path(), "inv");
    assert_eq!(
        code(&altes(&[
            "sweep",
            "--omega0-min",
            "2",
            "--omega0-max",
            "1",
            "--out",
            &inverted
        ])),
        2
    );
}

#[test]
fn sweep_family_advice_stays_at_1024() {
    let tmp = tempfile::tempdir().unwrap();
    let out = out_arg(tmp.path(), "fam");
    let o = altes(&[
        "sweep",
        "--lambda-max",
        "0.9",
        "--omega0-min",
        "0.3142",
        "--n-cutoff",
        "1",
        "--n-omega0",
        "8",
        "--out",
        &out,
    ]);
    assert_eq!(code(&o), 0, "{}", String::from_utf8_lossy(&o.stderr));
    let adv = json(&Path::new(&out).join("advisory.json"));
    assert_eq!(adv["max_advised_n_fft"].as_u64().unwrap(), 1024);
}

#[test]
fn benchmark_default_passes_and_is_reproducible() {
    let tmp = tempfile::tempdir().unwrap();
    let a = out_arg(tmp.path(), "a");
    let b = out_arg(tmp.path(), "b");
    assert_eq!(code(&altes(&["benchmark", "--seed", "3", "--out", &a])), 0);
    assert_eq!(code(&altes(&["benchmark", "--seed", "3", "--out", &b])), 0);
    let files = [
        "signal.bin",
        "signal.csv",
        "ground_truth.json",
        "stft.csv",
        "morlet.csv",
        "hct.csv",
        "ridges_hct.csv",
        "ridges_morlet.csv",
        "detection_report.json",
    ];
    for f in files {
        let x = std::fs::read(Path::new(&a).join(f)).unwrap();
        let y = std::fs::read(Path::new(&b).join(f)).unwrap();
        assert!(x == y, "{f} differs between runs");
    }
    let report = json(&Path::new(&a).join("detection_report.json"));
    assert_eq!(report["passed"], Value::Bool(true));
    assert_eq!(report["hct"]["hits"].as_u64().unwrap(), 3);
}

#[test]
fn benchmark_rejects_malformed_spec() {
    let tmp = tempfile::tempdir().unwrap();
    let spec = tmp.path().join("spec.json");
    std::fs::write(&spec, "{\"chirps\": [}").unwrap();
    let out = out_arg(tmp.path(), "o");
    let o = altes(&["benchmark", "--spec", spec.to_str().unwrap(), "--out", &out]);
    assert_eq!(code(&o), 2);
    assert!(String::from_utf8_lossy(&o.stderr).contains("line 1"));
    assert!(!Path::new(&out).exists());
}

#[test]
fn benchmark_missed_chirps_exit_one() {
    // chirps buried 25 dB under the noise
    let tmp = tempfile::tempdir().unwrap();
    let out = out_arg(tmp.path(), "o");
    let o = altes(&["benchmark", "--snr-db", "-25", "--out", &out]);
    assert_eq!(code(&o), 1);
    assert!(Path::new(&out).join("detection_report.json").is_file());
    let zero_tol = out_arg(tmp.path(), "z");
    assert_eq!(code(&altes(&["benchmark", "--tol", "0", "--out", &zero_tol])), 2);
}

#[test]
fn thread_env_must_be_numeric() {
    let o = Command::new(env!("CARGO_BIN_EXE_altes"))
        .arg("verify")
        .env("ALTES_THREADS", "many")
        .output()
        .unwrap();
    assert_eq!(code(&o), 2);
}
