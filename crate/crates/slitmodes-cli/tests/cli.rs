//! End-to-end tests of the `slitmodes` binary: flag handling, exit codes,
//! file formats, determinism, and agreement with the library.

use std::process::{Command, Output};

use slitmodes::montecarlo::{self, SamplerConfig};
use slitmodes::{bright_probability, SlitGeometry};
use slitmodes_cli::output::fmt_float;
use slitmodes_cli::reader::{parse_csv, ParsedRecord};

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_slitmodes"))
}

fn run(args: &[&str]) -> Output {
    bin().args(args).output().expect("binary runs")
}

fn run_ok(args: &[&str]) -> String {
    let out = run(args);
    assert!(
        out.status.success(),
        "exit {:?}; stderr: {}",
        out.status.code(),
        String::from_utf8_lossy(&out.stderr)
    );
    String::from_utf8(out.stdout).expect("utf-8 output")
}

fn exit_code(args: &[&str]) -> i32 {
    run(args).status.code().expect("exit code")
}

fn parsed(args: &[&str]) -> ParsedRecord {
    parse_csv(&run_ok(args)).expect("well-formed CSV")
}

const BETA_03PI: &str = "0.94247779607"; // 0.3 pi to the digits used in docs

#[test]
fn pattern_emits_the_expected_grid() {
    let text = run_ok(&[
        "pattern",
        "--slit-width",
        "5e-6",
        "--wavelength",
        "1e-6",
        "--theta-min",
        "-0.5",
        "--theta-max",
        "0.5",
        "--points",
        "1001",
        "--no-provenance",
    ]);
    assert!(text.starts_with("theta,beta,intensity\n"));
    let record = parse_csv(&text).unwrap();
    assert_eq!(record.rows.len(), 1001);

    // The grid contains theta = 0 and peaks there at exactly 1.
    let max = (0..record.rows.len())
        .map(|i| (record.float(i, "intensity").unwrap(), i))
        .max_by(|a, b| a.0.total_cmp(&b.0))
        .unwrap();
    assert_eq!(max.0, 1.0);
    assert_eq!(record.float(max.1, "theta"), Some(0.0));

    // Row-for-row identical to the library computation.
    let geom = SlitGeometry::new(5e-6, 1e-6).unwrap();
    let grid: Vec<f64> = (0..1001).map(|i| -0.5 + i as f64 / 1000.0).collect();
    for (i, point) in slitmodes::pattern(&geom, &grid).unwrap().iter().enumerate() {
        assert_eq!(record.rows[i][0], fmt_float(point.theta));
        assert_eq!(record.rows[i][1], fmt_float(point.beta));
        assert_eq!(record.rows[i][2], fmt_float(point.intensity));
    }
}

#[test]
fn pattern_vanishes_at_the_first_minimum() {
    // b = 2 lambda puts beta = pi at theta = pi/6; make that a grid point.
    let record = parsed(&[
        "pattern",
        "--slit-width",
        "2.0",
        "--wavelength",
        "1.0",
        "--theta-min",
        "0.5235987755982988",
        "--theta-max",
        "0.6",
        "--points",
        "2",
    ]);
    assert!(record.float(0, "intensity").unwrap() <= 1e-28);
}

#[test]
fn pattern_rejects_bad_flags() {
    assert_eq!(
        exit_code(&[
            "pattern",
            "--slit-width",
            "1.0",
            "--wavelength",
            "1.0",
            "--theta-min",
            "-0.5",
            "--theta-max",
            "0.5",
            "--points",
            "1",
        ]),
        2
    );
    // Unknown flag goes through clap.
    assert_eq!(exit_code(&["pattern", "--bogus"]), 2);
}

#[test]
fn decompose_matches_reference_weights() {
    let record = parsed(&["decompose", "--beta", BETA_03PI, "--nmax", "2"]);
    assert_eq!(
        record.columns,
        vec!["n", "re", "im", "weight", "dark_share"]
    );
    assert_eq!(record.rows.len(), 5);

    // n runs -2..=2; the bright row sits in the middle.
    let bright = record.float(2, "weight").unwrap();
    assert!((bright - 0.737).abs() <= 1e-3, "bright = {bright}");
    let share1 = record.float(3, "dark_share").unwrap();
    assert!((share1 - 0.514).abs() <= 1e-3, "share = {share1}");
    assert_eq!(record.rows[2][4], "", "bright row has no dark share");

    let captured = record.footer_float("captured_weight").unwrap();
    let tail = record.footer_float("tail_bound").unwrap();
    assert!(captured + tail >= 1.0);
    assert!(captured <= 1.0 + 1e-12);
}

#[test]
fn decompose_at_zero_beta_is_a_single_unit_row() {
    let record = parsed(&["decompose", "--beta", "0", "--nmax", "5"]);
    assert_eq!(record.rows.len(), 11);
    for i in 0..record.rows.len() {
        let n: i64 = record.rows[i][0].parse().unwrap();
        let weight = record.float(i, "weight").unwrap();
        if n == 0 {
            assert_eq!(weight, 1.0);
        } else {
            assert!(weight <= 1e-28, "n = {n}: weight = {weight}");
        }
        assert_eq!(record.rows[i][4], "", "no dark shares at beta = 0");
    }
}

#[test]
fn decompose_rejects_conflicting_angle_styles() {
    assert_eq!(
        exit_code(&[
            "decompose",
            "--beta",
            "1.0",
            "--slit-width",
            "1.0",
            "--wavelength",
            "1.0",
            "--theta",
            "0.2",
        ]),
        2
    );
    assert_eq!(exit_code(&["decompose", "--nmax", "4"]), 2);
}

#[test]
fn angle_styles_agree_numerically() {
    // beta = pi * 2 * sin(0.15) / 1.5 computed two ways.
    let direct = parsed(&["decompose", "--beta", "0.6259649855269834", "--nmax", "3"]);
    let triple = parsed(&[
        "decompose",
        "--slit-width",
        "2.0",
        "--wavelength",
        "1.5",
        "--theta",
        "0.15",
        "--nmax",
        "3",
    ]);
    for i in 0..direct.rows.len() {
        let a = direct.float(i, "weight").unwrap();
        let b = triple.float(i, "weight").unwrap();
        assert!((a - b).abs() <= 1e-12, "row {i}: {a} vs {b}");
    }
}

#[test]
fn correlate_fock_two() {
    let record = parsed(&["correlate", "--source", "fock:2", "--beta", BETA_03PI]);
    assert_eq!(record.float(0, "g2"), Some(0.5));
    let g1 = record.float(0, "g1").unwrap();
    assert!((g1 - 2.0 * 0.7368).abs() <= 1e-3);
    assert_eq!(record.float(0, "mean_total_photons"), Some(2.0));
}

#[test]
fn correlate_coherent_with_physical_triple() {
    let record = parsed(&[
        "correlate",
        "--source",
        "coherent:1,0",
        "--slit-width",
        "1",
        "--wavelength",
        "1",
        "--theta",
        "0",
    ]);
    assert_eq!(record.float(0, "g2"), Some(1.0));
    assert_eq!(record.float(0, "g1"), Some(1.0));
    assert_eq!(record.float(0, "mean_total_photons"), Some(1.0));
}

#[test]
fn correlate_reports_undefined_at_dark_angles() {
    let record = parsed(&["correlate", "--source", "fock:3", "--beta", "3.14159265359"]);
    let idx = record.column_index("g2").unwrap();
    assert_eq!(record.rows[0][idx], "undefined");
}

#[test]
fn correlate_rejects_bad_sources() {
    assert_eq!(
        exit_code(&["correlate", "--source", "fock:0", "--beta", "1"]),
        2
    );
    assert_eq!(
        exit_code(&["correlate", "--source", "maser", "--beta", "1"]),
        2
    );
    // Coherent photon number needs the slit width.
    assert_eq!(
        exit_code(&["correlate", "--source", "coherent:1,0", "--beta", "1"]),
        2
    );
}

#[test]
fn verify_quick_passes_and_reports_the_03pi_residual() {
    let out = run(&["verify", "--level", "quick"]);
    assert!(out.status.success());
    let text = String::from_utf8(out.stdout).unwrap();
    let record = parse_csv(&text).unwrap();
    let check_col = record.column_index("check").unwrap();
    let status_col = record.column_index("status").unwrap();
    assert!(record
        .rows
        .iter()
        .any(|row| row[check_col].contains("normalization") && row[check_col].contains("0.3pi")));
    assert!(record.rows.iter().all(|row| row[status_col] == "pass"));
    assert_eq!(record.meta["footer:failures"], "0");
}

#[test]
fn verify_fault_injection_fails_with_exit_one() {
    let out = run(&["verify", "--level", "quick", "--inject-fault", "flip-phase"]);
    assert_eq!(out.status.code(), Some(1));
    let record = parse_csv(&String::from_utf8(out.stdout).unwrap()).unwrap();
    let check_col = record.column_index("check").unwrap();
    let status_col = record.column_index("status").unwrap();
    let ladder = record
        .rows
        .iter()
        .find(|row| row[check_col].contains("ladder identity"))
        .expect("ladder check present");
    assert_eq!(ladder[status_col], "fail");
}

#[test]
fn sample_pattern_is_reproducible_byte_for_byte() {
    let args = [
        "sample",
        "--source",
        "single",
        "--shots",
        "100000",
        "--seed",
        "7",
        "--slit-width",
        "5.0",
        "--wavelength",
        "1.0",
        "--bins",
        "101",
        "--no-provenance",
    ];
    let first = run_ok(&args);
    let second = run_ok(&args);
    assert_eq!(first, second);

    let record = parse_csv(&first).unwrap();
    assert_eq!(record.rows.len(), 101);
    let total: u64 = (0..record.rows.len())
        .map(|i| record.rows[i][2].parse::<u64>().unwrap())
        .sum();
    assert_eq!(total, 100_000);
    assert_eq!(record.meta["footer:total"], "100000");
    assert_eq!(record.meta["param:seed"], "7");
}

#[test]
fn sample_histogram_is_quiet_at_the_minimum() {
    let text = run_ok(&[
        "sample",
        "--source",
        "single",
        "--shots",
        "200000",
        "--seed",
        "3",
        "--slit-width",
        "5.0",
        "--wavelength",
        "1.0",
        "--bins",
        "201",
        "--no-provenance",
    ]);
    let record = parse_csv(&text).unwrap();

    let geom = SlitGeometry::new(5.0, 1.0).unwrap();
    let cfg = SamplerConfig::new(3, 200_000, -0.5, 0.5, 201).unwrap();
    let masses = montecarlo::analytic_bin_masses(&geom, &cfg).unwrap();
    let theta_star = 0.2f64.asin();
    let bin = ((theta_star + 0.5) * 201.0) as usize;
    let count: f64 = record.rows[bin][2].parse().unwrap();
    let expected = 200_000.0 * masses[bin];
    let sigma = (200_000.0 * masses[bin]).sqrt();
    assert!(
        count <= expected + 5.0 * sigma,
        "dark bin {bin}: {count} vs {expected:.1}"
    );
}

#[test]
fn sample_g2_estimates_track_the_closed_form() {
    let record = parsed(&[
        "sample",
        "--observable",
        "g2",
        "--source",
        "fock:2",
        "--beta",
        BETA_03PI,
        "--shots",
        "200000",
        "--seed",
        "11",
    ]);
    assert_eq!(record.columns, vec!["g2", "stderr", "shots"]);
    let g2 = record.float(0, "g2").unwrap();
    let stderr = record.float(0, "stderr").unwrap();
    assert!(
        (g2 - 0.5).abs() <= 3.0 * stderr + 1e-3,
        "g2 = {g2} +/- {stderr}"
    );
    assert_eq!(record.float(0, "shots"), Some(200000.0));
}

#[test]
fn sample_rejects_zero_shots_and_dark_angles() {
    assert_eq!(
        exit_code(&[
            "sample",
            "--source",
            "single",
            "--shots",
            "0",
            "--seed",
            "1",
            "--slit-width",
            "1.0",
            "--wavelength",
            "1.0",
        ]),
        2
    );
    assert_eq!(
        exit_code(&[
            "sample",
            "--observable",
            "g2",
            "--source",
            "fock:2",
            "--beta",
            "3.141592653589793",
            "--shots",
            "100",
            "--seed",
            "1",
        ]),
        2
    );
}

#[test]
fn unwritable_output_path_exits_three_and_leaves_nothing() {
    let dir = tempfile::tempdir().unwrap();
    let blocker = dir.path().join("not-a-dir");
    std::fs::write(&blocker, "plain file").unwrap();
    let target = blocker.join("out.csv");
    let code = exit_code(&[
        "decompose",
        "--beta",
        "1.0",
        "--nmax",
        "4",
        "--out",
        target.to_str().unwrap(),
    ]);
    assert_eq!(code, 3);
    assert!(!target.exists());
    // No stray temporaries either.
    assert_eq!(std::fs::read_dir(dir.path()).unwrap().count(), 1);
}

#[test]
fn atomic_write_produces_the_file() {
    let dir = tempfile::tempdir().unwrap();
    let target = dir.path().join("dec.csv");
    let out = run(&[
        "decompose",
        "--beta",
        BETA_03PI,
        "--nmax",
        "2",
        "--out",
        target.to_str().unwrap(),
    ]);
    assert!(out.status.success());
    let record = parse_csv(&std::fs::read_to_string(&target).unwrap()).unwrap();
    assert_eq!(record.rows.len(), 5);
    assert_eq!(std::fs::read_dir(dir.path()).unwrap().count(), 1);
}

#[test]
fn every_emitted_csv_round_trips_to_the_last_digit() {
    let outputs = [
        run_ok(&[
            "pattern",
            "--slit-width",
            "3e-6",
            "--wavelength",
            "1e-6",
            "--theta-min",
            "-0.4",
            "--theta-max",
            "0.4",
            "--points",
            "41",
        ]),
        run_ok(&["decompose", "--beta", BETA_03PI, "--nmax", "4"]),
        run_ok(&["correlate", "--source", "fock:5", "--beta", "0.8"]),
        run_ok(&[
            "sample",
            "--source",
            "fock:2",
            "--shots",
            "5000",
            "--seed",
            "5",
            "--slit-width",
            "2.0",
            "--wavelength",
            "1.0",
            "--bins",
            "31",
        ]),
    ];
    for text in &outputs {
        let record = parse_csv(text).expect("parseable CSV");
        for row in &record.rows {
            for cell in row {
                if cell.is_empty() || cell.chars().any(|c| c.is_alphabetic() && c != 'e') {
                    continue;
                }
                if cell.contains('.') || cell.contains('e') {
                    let value: f64 = cell.parse().expect("float cell");
                    assert_eq!(&fmt_float(value), cell, "cell {cell} does not round-trip");
                }
            }
        }
    }
}

#[test]
fn json_output_is_well_formed() {
    let text = run_ok(&[
        "decompose",
        "--beta",
        BETA_03PI,
        "--nmax",
        "2",
        "--format",
        "json",
    ]);
    let value: serde_json::Value = serde_json::from_str(&text).expect("valid JSON");
    assert_eq!(value["schema_version"], "1");
    assert_eq!(value["command"], "decompose");
    assert_eq!(value["columns"][0], "n");
    let rows = value["rows"].as_array().unwrap();
    assert_eq!(rows.len(), 5);
    let bright_weight = rows[2][3].as_f64().unwrap();
    assert!((bright_weight - 0.7368).abs() <= 1e-3);
    // Bright row's dark share is null.
    assert!(rows[2][4].is_null());
    let captured = value["footer"]["captured_weight"].as_f64().unwrap();
    assert!(captured <= 1.0 + 1e-12);

    // Provenance present by default, with a timestamp; suppressed on demand.
    assert!(value["provenance"]["timestamp"].is_string());
    let quiet = run_ok(&[
        "decompose",
        "--beta",
        BETA_03PI,
        "--nmax",
        "2",
        "--format",
        "json",
        "--no-provenance",
    ]);
    let quiet: serde_json::Value = serde_json::from_str(&quiet).unwrap();
    assert!(quiet.get("provenance").is_none());
}

#[test]
fn sample_json_carries_seed_provenance() {
    let text = run_ok(&[
        "sample",
        "--source",
        "single",
        "--shots",
        "1000",
        "--seed",
        "99",
        "--slit-width",
        "1.0",
        "--wavelength",
        "1.0",
        "--bins",
        "11",
        "--format",
        "json",
    ]);
    let value: serde_json::Value = serde_json::from_str(&text).unwrap();
    assert_eq!(value["provenance"]["seed"], 99);
    assert_eq!(value["footer"]["total"], 1000);
}

#[test]
fn help_and_version_exit_zero() {
    assert_eq!(exit_code(&["--help"]), 0);
    assert_eq!(exit_code(&["--version"]), 0);
    assert_eq!(exit_code(&["pattern", "--help"]), 0);
}

#[test]
fn beta_must_be_finite() {
    assert_eq!(exit_code(&["decompose", "--beta", "nan", "--nmax", "4"]), 2);
    assert_eq!(exit_code(&["decompose", "--beta", "inf", "--nmax", "4"]), 2);
    // Truncation too small for the requested beta.
    assert_eq!(
        exit_code(&["decompose", "--beta", "10.0", "--nmax", "2"]),
        2
    );
}

#[test]
fn pattern_overwrites_atomically() {
    let dir = tempfile::tempdir().unwrap();
    let target = dir.path().join("p.csv");
    std::fs::write(&target, "stale").unwrap();
    let out = run(&[
        "pattern",
        "--slit-width",
        "1.0",
        "--wavelength",
        "1.0",
        "--theta-min",
        "-0.1",
        "--theta-max",
        "0.1",
        "--points",
        "3",
        "--out",
        target.to_str().unwrap(),
    ]);
    assert!(out.status.success());
    let text = std::fs::read_to_string(&target).unwrap();
    assert!(text.starts_with("theta,beta,intensity"));
}

#[test]
fn pattern_row_matches_the_closed_form() {
    // Spot-check one CLI row against the library's closed form.
    let record = parsed(&[
        "pattern",
        "--slit-width",
        "5.0",
        "--wavelength",
        "1.0",
        "--theta-min",
        "0.05",
        "--theta-max",
        "0.10",
        "--points",
        "2",
    ]);
    let geom = SlitGeometry::new(5.0, 1.0).unwrap();
    for (i, &theta) in [0.05, 0.10].iter().enumerate() {
        let beta = slitmodes::beta_from_angle(&geom, theta).unwrap();
        assert_eq!(record.float(i, "intensity"), Some(bright_probability(beta)));
        assert_eq!(record.float(i, "beta"), Some(beta.value()));
    }
    // Degenerate range is a usage error.
    assert_eq!(
        exit_code(&[
            "pattern",
            "--slit-width",
            "1.0",
            "--wavelength",
            "1.0",
            "--theta-min",
            "0.05",
            "--theta-max",
            "0.05",
            "--points",
            "2",
        ]),
        2
    );
}
