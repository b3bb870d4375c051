//! End-to-end tests of the `fracwave` binary: exit codes, output formats,
//! reproducibility, and the file handshake between `solve` and `spectrum`.

use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use serde_json::Value;

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_fracwave"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn code(out: &Output) -> i32 {
    out.status.code().expect("terminated by signal")
}

fn stdout_json(out: &Output) -> Value {
    serde_json::from_slice(&out.stdout).unwrap_or_else(|e| {
        panic!(
            "stdout is not JSON ({e}): {}",
            String::from_utf8_lossy(&out.stdout)
        )
    })
}

fn tmp(name: &str) -> PathBuf {
    let dir = Path::new(env!("CARGO_TARGET_TMPDIR")).join("cli");
    std::fs::create_dir_all(&dir).expect("tmp dir");
    dir.join(name)
}

/// Assert that a table cell was printed by `{:.16e}`: parsing and
/// reprinting must reproduce the bytes, which makes the encoding lossless.
fn assert_reprints(cell: &str) {
    let v: f64 = cell.parse().unwrap_or_else(|_| panic!("not a float: {cell}"));
    assert_eq!(format!("{v:.16e}"), cell);
}

#[test]
fn help_and_version_exit_zero() {
    let help = run(&["--help"]);
    assert_eq!(code(&help), 0);
    let text = String::from_utf8_lossy(&help.stdout);
    for sub in ["solve", "validate", "spectrum", "sweep", "stokes"] {
        assert!(text.contains(sub), "help lists {sub}");
    }
    assert_eq!(code(&run(&["--version"])), 0);
    assert_eq!(code(&run(&["sweep", "--help"])), 0);
}

#[test]
fn bad_invocations_are_usage_errors() {
    assert_eq!(code(&run(&[])), 1, "missing subcommand");
    assert_eq!(code(&run(&["solve", "--bogus"])), 1, "unknown flag");
    assert_eq!(code(&run(&["solve", "--s", "1.5"])), 1, "s out of range");
    assert_eq!(code(&run(&["solve", "--n", "9"])), 1, "odd grid size");
    assert_eq!(code(&run(&["frobnicate"])), 1, "unknown subcommand");
}

#[test]
fn solve_returns_the_constant_branch_below_bifurcation() {
    let out = run(&["solve", "--s", "0.7", "--omega", "0.4", "--n", "64"]);
    assert_eq!(code(&out), 0);
    let doc = stdout_json(&out);
    assert_eq!(doc["converged"], Value::Bool(true));
    assert_eq!(doc["iterations"], 0);
    assert!(doc["trace"]["error"].as_array().unwrap().is_empty());
    let root = 0.4f64.sqrt();
    for v in doc["profile"].as_array().unwrap() {
        assert!((v.as_f64().unwrap() - root).abs() < 1e-15);
    }
    assert_eq!(doc["config"]["subcommand"], "solve");
    assert_eq!(doc["config"]["omega"], 0.4);
}

#[test]
fn exhausted_budget_exits_two_but_still_writes_the_artifact() {
    let out = run(&["solve", "--s", "1", "--omega", "1", "--n", "256", "--max-iter", "1"]);
    assert_eq!(code(&out), 2);
    let doc = stdout_json(&out);
    assert_eq!(doc["converged"], Value::Bool(false));
    assert_eq!(doc["trace"]["error"].as_array().unwrap().len(), 1);
    assert!(String::from_utf8_lossy(&out.stderr).contains("did not converge"));
}

#[test]
fn solve_peak_matches_the_dnoidal_amplitude() {
    let out = run(&["solve", "--s", "1.0", "--omega", "1.0", "--n", "1024"]);
    assert_eq!(code(&out), 0);
    let doc = stdout_json(&out);
    let peak = doc["profile"]
        .as_array()
        .unwrap()
        .iter()
        .map(|v| v.as_f64().unwrap())
        .fold(f64::NEG_INFINITY, f64::max);
    let eta1 = fracwave::closed_form::dn_solution_params(1.0).unwrap().eta1;
    assert!(
        (peak - eta1).abs() <= 1e-6,
        "peak {peak} vs closed-form amplitude {eta1}"
    );
}

#[test]
fn identical_runs_are_byte_identical() {
    let args = ["solve", "--s", "0.8", "--omega", "1.3", "--n", "256"];
    let a = run(&args);
    let b = run(&args);
    assert_eq!(code(&a), 0);
    assert_eq!(a.stdout, b.stdout);
}

#[test]
fn solve_csv_has_config_line_and_lossless_cells() {
    let out = run(&["solve", "--s", "1", "--omega", "1", "--n", "64", "--format", "csv"]);
    assert_eq!(code(&out), 0);
    let text = String::from_utf8(out.stdout).unwrap();
    assert!(text.starts_with("# config {"));
    let mut rdr = csv::ReaderBuilder::new()
        .comment(Some(b'#'))
        .from_reader(text.as_bytes());
    assert_eq!(
        rdr.headers().unwrap(),
        &csv::StringRecord::from(vec!["x", "phi"])
    );
    let records: Vec<csv::StringRecord> = rdr.records().map(|r| r.unwrap()).collect();
    assert_eq!(records.len(), 64);
    for rec in &records {
        assert_reprints(&rec[0]);
        assert_reprints(&rec[1]);
    }
}

#[test]
fn validate_dn_passes_at_unit_frequency() {
    let out = run(&["validate", "--case", "dn", "--omega", "1", "--n", "1024"]);
    assert_eq!(code(&out), 0);
    let doc = stdout_json(&out);
    assert!(doc["sup_discrepancy"].as_f64().unwrap() <= 1e-8);
    assert_eq!(doc["pass"], Value::Bool(true));
    assert!(doc["monitors"]["res"].as_f64().unwrap() < 1e-9);
}

#[test]
fn validate_dn_rejects_fractional_order() {
    let out = run(&["validate", "--case", "dn", "--s", "0.5"]);
    assert_eq!(code(&out), 1);
    assert!(String::from_utf8_lossy(&out.stderr).contains("--s 1"));
}

#[test]
fn validate_stokes_order_study_lands_near_sixteen() {
    let out = run(&["validate", "--case", "stokes", "--s", "0.8", "--a", "0.05", "--n", "512"]);
    assert_eq!(code(&out), 0);
    let doc = stdout_json(&out);
    let ratio = doc["ratio"].as_f64().unwrap();
    assert!((14.0..=19.0).contains(&ratio), "ratio {ratio}");
    let g = doc["gamma"].as_f64().unwrap();
    assert_eq!(g, fracwave::closed_form::gamma(0.8));
}

#[test]
fn spectrum_from_file_and_inline_agree_exactly() {
    let wave = tmp("wave.json");
    let wave_path = wave.to_str().unwrap();
    let solved = run(&["solve", "--s", "1", "--omega", "1", "--n", "512", "--out", wave_path]);
    assert_eq!(code(&solved), 0);

    let from_file = run(&["spectrum", "--in", wave_path, "--modes", "64"]);
    let inline = run(&["spectrum", "--s", "1", "--omega", "1", "--n", "512", "--modes", "64"]);
    assert_eq!(code(&from_file), 0);
    assert_eq!(code(&inline), 0);

    let a = stdout_json(&from_file);
    let b = stdout_json(&inline);
    for (doc, label) in [(&a, "file"), (&b, "inline")] {
        let r = &doc["report"];
        assert_eq!(
            (r["n_l1"].as_i64(), r["z_l1"].as_i64(), r["n_l2"].as_i64(), r["z_l2"].as_i64()),
            (Some(1), Some(1), Some(0), Some(1)),
            "{label} counts"
        );
    }
    // the profile makes a lossless JSON round trip, so the two reports are
    // computed from identical bits and must agree exactly
    assert_eq!(a["report"], b["report"]);
}

#[test]
fn spectrum_counts_are_stable_under_doubled_truncation() {
    let wave = tmp("wave_trunc.json");
    let wave_path = wave.to_str().unwrap();
    assert_eq!(
        code(&run(&["solve", "--s", "1", "--omega", "1", "--n", "512", "--out", wave_path])),
        0
    );
    let counts = |modes: &str| {
        let doc = stdout_json(&run(&["spectrum", "--in", wave_path, "--modes", modes]));
        let r = doc["report"].clone();
        (r["n_l1"].as_i64(), r["z_l1"].as_i64(), r["n_l2"].as_i64(), r["z_l2"].as_i64())
    };
    assert_eq!(counts("64"), counts("128"));
}

#[test]
fn spectrum_reports_the_constant_branch_index() {
    let out = run(&["spectrum", "--s", "0.7", "--omega", "0.4", "--n", "128", "--modes", "16"]);
    assert_eq!(code(&out), 0);
    let r = stdout_json(&out)["report"].clone();
    assert_eq!(r["n_l1"], 1);
    assert_eq!(r["z_l1"], 0);
}

#[test]
fn spectrum_input_errors_are_usage_errors() {
    let garbage = tmp("garbage.json");
    std::fs::write(&garbage, "not json").unwrap();
    assert_eq!(code(&run(&["spectrum", "--in", garbage.to_str().unwrap()])), 1);
    assert_eq!(code(&run(&["spectrum", "--in", tmp("missing.json").to_str().unwrap()])), 1);
    // --in carries its own parameters; combining it with inline flags is a contradiction
    let both = run(&["spectrum", "--in", garbage.to_str().unwrap(), "--s", "0.8"]);
    assert_eq!(code(&both), 1);
}

#[test]
fn sweep_writes_table_and_verdict_sidecar() {
    let csv_path = tmp("sweep.csv");
    let out = run(&[
        "sweep", "--s", "1.0", "--omega-min", "0.6", "--omega-max", "1.4",
        "--steps", "9", "--n", "256", "--out", csv_path.to_str().unwrap(),
    ]);
    assert_eq!(code(&out), 0);

    let text = std::fs::read_to_string(&csv_path).unwrap();
    assert!(text.starts_with("# config {"));
    let mut rdr = csv::ReaderBuilder::new()
        .comment(Some(b'#'))
        .from_reader(text.as_bytes());
    assert_eq!(
        rdr.headers().unwrap(),
        &csv::StringRecord::from(vec!["omega", "mass", "q", "converged"])
    );
    let records: Vec<csv::StringRecord> = rdr.records().map(|r| r.unwrap()).collect();
    assert_eq!(records.len(), 9);
    for (i, rec) in records.iter().enumerate() {
        assert_reprints(&rec[0]);
        assert_reprints(&rec[1]);
        assert_eq!(&rec[3], "true");
        if i + 1 < records.len() {
            assert_reprints(&rec[2]);
            assert!(rec[2].parse::<f64>().unwrap() > 0.0, "integrable branch is stable");
        } else {
            assert!(rec[2].is_empty(), "no forward difference on the last row");
        }
    }

    let sidecar: Value =
        serde_json::from_str(&std::fs::read_to_string(tmp("sweep.json")).unwrap()).unwrap();
    assert_eq!(sidecar["classification"], "Stable");
    assert_eq!(sidecar["points"], 9);
    assert_eq!(sidecar["converged_points"], 9);
    assert_eq!(sidecar["config"]["subcommand"], "sweep");
}

#[test]
fn sweep_without_out_prints_table_and_sidecar_to_separate_streams() {
    let out = run(&[
        "sweep", "--s", "0.8", "--omega-min", "0.6", "--omega-max", "1.0",
        "--steps", "4", "--n", "256",
    ]);
    assert_eq!(code(&out), 0);
    let table = String::from_utf8(out.stdout).unwrap();
    assert!(table.starts_with("# config {"));
    assert!(table.lines().nth(1) == Some("omega,mass,q,converged"));
    let sidecar: Value = serde_json::from_slice(&out.stderr).expect("sidecar JSON on stderr");
    assert!(sidecar["classification"].is_string());
}

#[test]
fn sweep_usage_errors() {
    // below the bifurcation there is no wave branch to sweep
    assert_eq!(
        code(&run(&["sweep", "--s", "0.8", "--omega-min", "0.3", "--omega-max", "0.4", "--n", "64"])),
        1
    );
    // a .json table would be overwritten by its own sidecar
    assert_eq!(
        code(&run(&["sweep", "--s", "0.8", "--out", tmp("table.json").to_str().unwrap()])),
        1
    );
    // the preset fixes the range; overriding pieces of it is contradictory
    assert_eq!(code(&run(&["sweep", "--s", "0.8", "--full-scale", "--steps", "9"])), 1);
}

#[test]
fn parallel_sweep_is_reproducible_and_matches_sequential_cold_start() {
    let base = [
        "sweep", "--s", "0.8", "--omega-min", "0.6", "--omega-max", "1.0",
        "--steps", "4", "--n", "256",
    ];
    let mut parallel = base.to_vec();
    parallel.push("--parallel");
    let p1 = run(&parallel);
    let p2 = run(&parallel);
    assert_eq!(code(&p1), 0);
    assert_eq!(p1.stdout, p2.stdout, "parallel sweeps are deterministic");

    let mut cold = base.to_vec();
    cold.push("--cold-start");
    let c = run(&cold);
    // same points solved from the same seeds: identical numbers, and the
    // config line is the only difference between the two tables
    let strip = |bytes: &[u8]| {
        String::from_utf8(bytes.to_vec())
            .unwrap()
            .lines()
            .skip(1)
            .collect::<Vec<_>>()
            .join("\n")
    };
    assert_eq!(strip(&p1.stdout), strip(&c.stdout));
}

#[test]
fn stokes_reports_the_expansion_and_warns_out_of_regime() {
    let out = run(&["stokes", "--s", "0.6", "--a", "0.1", "--n", "128"]);
    assert_eq!(code(&out), 0);
    assert!(out.stderr.is_empty());
    let doc = stdout_json(&out);
    let g = doc["gamma"].as_f64().unwrap();
    assert_eq!(g, fracwave::closed_form::gamma(0.6));
    assert_eq!(doc["omega"].as_f64().unwrap(), 0.5 + 0.01 * g);
    assert_eq!(doc["profile"].as_array().unwrap().len(), 128);

    let loud = run(&["stokes", "--a", "0.25", "--n", "64"]);
    assert_eq!(code(&loud), 0);
    assert!(String::from_utf8_lossy(&loud.stderr).contains("asymptotic regime"));
}
