//! Binary-level checks: exit codes, the `ERROR:` stderr prefix, CSV output
//! determinism, and the documented subcommand examples.

use std::fs;
use std::path::Path;
use std::process::{Command, Output};

fn eitsim(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_eitsim"))
        .args(args)
        .output()
        .expect("spawn eitsim")
}

fn stdout(out: &Output) -> String {
    String::from_utf8_lossy(&out.stdout).into_owned()
}

fn stderr(out: &Output) -> String {
    String::from_utf8_lossy(&out.stderr).into_owned()
}

#[test]
fn unknown_preset_is_a_config_error() {
    let out = eitsim(&["features", "--preset", "nope"]);
    assert_eq!(out.status.code(), Some(1));
    assert!(stderr(&out).starts_with("ERROR:"), "{}", stderr(&out));
}

#[test]
fn domain_errors_from_configs_exit_one() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("bad.cfg");
    fs::write(
        &path,
        "picture = electrical\nR1 = 0\nR2 = 51.7\nL1 = 1e-3\nL2 = 1e-3\nC1 = 1e-7\n\
         C2 = 1e-7\nC = -1e-7\nAs = 1.0\ngrid = 80000:220000:2001\n",
    )
    .unwrap();
    let out = eitsim(&["spectrum", "--config", path.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(1));
    let err = stderr(&out);
    assert!(err.starts_with("ERROR:") && err.contains("C:"), "{err}");
}

#[test]
fn numerical_failures_exit_two() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("undamped.cfg");
    // undamped uncoupled oscillator swept across its resonance: the sweep
    // records a hole, and feature extraction refuses holes
    fs::write(
        &path,
        "picture = mechanical\nm1 = 1\nm2 = 1\nk1 = 4\nk2 = 4\nK = 0\ngamma1 = 0\n\
         gamma2 = 0\nF = 0.1\ngrid = 1.5:2.5:5\n",
    )
    .unwrap();
    let out = eitsim(&["features", "--config", path.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(2));
    assert!(stderr(&out).starts_with("ERROR:"), "{}", stderr(&out));
}

#[test]
fn features_reports_the_transparency_dip() {
    let out = eitsim(&["features", "--preset", "fig3b"]);
    assert_eq!(out.status.code(), Some(0), "{}", stderr(&out));
    let text = stdout(&out);
    let dip_line = text
        .lines()
        .find(|l| l.trim_start().starts_with("dip:"))
        .expect("dip line");
    assert!(dip_line.contains("omega = 1.999"), "{dip_line}");
    assert!(dip_line.contains("depth_ratio = 0.999"), "{dip_line}");
    assert!(text.contains("phase jumps: 3"), "{text}");
}

#[test]
fn spectrum_peak_matches_the_stated_open_resonance() {
    let dir = tempfile::tempdir().unwrap();
    let csv = dir.path().join("o.csv");
    let out = eitsim(&[
        "spectrum",
        "--preset",
        "fig6a",
        "--switch",
        "open",
        "--output",
        csv.to_str().unwrap(),
    ]);
    assert_eq!(out.status.code(), Some(0), "{}", stderr(&out));

    let parsed = eitsim::csv::read_spectrum_csv(&fs::read_to_string(&csv).unwrap()).unwrap();
    let f_hz = parsed.f_hz.expect("electrical hz column");
    let (mut best_f, mut best_v) = (0.0, f64::MIN);
    for (f, v) in f_hz.iter().zip(&parsed.re) {
        let v = v.unwrap();
        if v > best_v {
            best_v = v;
            best_f = *f;
        }
    }
    assert!(
        (best_f - 20_000.0).abs() / 20_000.0 < 0.05,
        "peak at {best_f} Hz"
    );
}

#[test]
fn identical_invocations_write_identical_bytes() {
    let dir = tempfile::tempdir().unwrap();
    let a = dir.path().join("a.csv");
    let b = dir.path().join("b.csv");
    for (path, _) in [(&a, 0), (&b, 1)] {
        let out = eitsim(&[
            "spectrum",
            "--preset",
            "fig3f",
            "--output",
            path.to_str().unwrap(),
        ]);
        assert_eq!(out.status.code(), Some(0));
    }
    assert_eq!(fs::read(&a).unwrap(), fs::read(&b).unwrap());
}

#[test]
fn verify_passes_the_oracle_gate() {
    let out = eitsim(&["verify", "--preset", "fig3b", "--points", "21"]);
    assert_eq!(out.status.code(), Some(0), "{}", stderr(&out));
    let text = stdout(&out);
    let line = text
        .lines()
        .find(|l| l.starts_with("oracle comparison:"))
        .expect("summary line");
    let err: f64 = line
        .rsplit(' ')
        .next()
        .unwrap()
        .parse()
        .expect("max rel err number");
    assert!(err <= 1e-3, "{line}");
}

#[test]
fn timedomain_writes_a_readable_trajectory() {
    let dir = tempfile::tempdir().unwrap();
    let csv = dir.path().join("traj.csv");
    let out = eitsim(&[
        "timedomain",
        "--preset",
        "fig3a",
        "--drive",
        "2.0",
        "--output",
        csv.to_str().unwrap(),
    ]);
    assert_eq!(out.status.code(), Some(0), "{}", stderr(&out));
    assert!(stdout(&out).contains("demodulated amplitude:"));
    let parsed =
        eitsim::csv::read_trajectory_csv(&fs::read_to_string(&csv).unwrap()).unwrap();
    assert!(parsed.t.len() > 100);
    // from rest
    assert_eq!(parsed.x1[0], 0.0);
}

#[test]
fn translate_emits_a_reparseable_document() {
    let out = eitsim(&["translate", "--preset", "fig3b"]);
    assert_eq!(out.status.code(), Some(0), "{}", stderr(&out));
    let text = stdout(&out);
    let doc: String = text
        .lines()
        .skip_while(|l| !l.starts_with("picture = "))
        .map(|l| format!("{l}\n"))
        .collect();
    let preset = eitsim::parse_config(&doc).expect("translated doc parses");
    // fig3b is mechanical, so the echo is electrical with gamma preserved
    let eitsim_core::Params64::Electrical(c) = preset.params else {
        panic!("expected electrical output");
    };
    assert!((c.r2 / c.l2 - 0.04).abs() < 1e-12);
}

#[test]
fn emit_plot_references_the_csv() {
    let dir = tempfile::tempdir().unwrap();
    let csv = dir.path().join("s.csv");
    let gp = dir.path().join("s.gp");
    let out = eitsim(&[
        "spectrum",
        "--preset",
        "fig3b",
        "--observable",
        "dispersion",
        "--output",
        csv.to_str().unwrap(),
        "--emit-plot",
        gp.to_str().unwrap(),
    ]);
    assert_eq!(out.status.code(), Some(0), "{}", stderr(&out));
    let script = fs::read_to_string(&gp).unwrap();
    assert!(script.contains(csv.to_str().unwrap()));
    assert!(script.contains("with lines"));
}

#[test]
fn grid_override_controls_the_sweep() {
    let dir = tempfile::tempdir().unwrap();
    let csv = dir.path().join("g.csv");
    let out = eitsim(&[
        "spectrum",
        "--preset",
        "fig3b",
        "--grid",
        "1.9:2.1:11",
        "--output",
        csv.to_str().unwrap(),
    ]);
    assert_eq!(out.status.code(), Some(0));
    let text = fs::read_to_string(&csv).unwrap();
    assert_eq!(text.lines().count(), 12);
}

#[test]
fn run_report_round_trips_written_files() {
    // every path the report mentions exists and parses
    let dir = tempfile::tempdir().unwrap();
    let csv = dir.path().join("out.csv");
    let out = eitsim(&[
        "spectrum",
        "--preset",
        "fig6d",
        "--output",
        csv.to_str().unwrap(),
    ]);
    assert_eq!(out.status.code(), Some(0));
    for line in stdout(&out).lines().filter(|l| l.starts_with("wrote ")) {
        let path = line.rsplit(": ").next().unwrap();
        assert!(Path::new(path).exists(), "{line}");
    }
    assert!(eitsim::csv::read_spectrum_csv(&fs::read_to_string(&csv).unwrap()).is_ok());
}
