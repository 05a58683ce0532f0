mod common;

use std::path::PathBuf;

use common::*;
use serde_json::Value;

fn golden(name: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("tests/golden").join(name)
}

/// Compares stdout with a stored file; `UPDATE_GOLDEN=1` rewrites it.
fn check_golden(name: &str, args: &[&str]) {
    let r = run(args);
    assert_eq!(r.code, 0, "{}", r.stderr);
    let path = golden(name);
    if std::env::var_os("UPDATE_GOLDEN").is_some() {
        std::fs::write(&path, &r.stdout).unwrap();
    }
    let want = std::fs::read_to_string(&path).unwrap();
    assert_eq!(r.stdout, want, "{name} drifted");
}

#[test]
fn golden_spectrum() {
    check_golden("spectrum_alpha_0.707.csv", &["spectrum", "--alpha", ALPHA, "--levels", "4"]);
}

#[test]
fn golden_hermite_check() {
    check_golden("hermite_alpha_0.707_n5.csv", &["hermite-check", "--alpha", ALPHA, "--n-max", "5"]);
}

#[test]
fn golden_scan() {
    check_golden(
        "scan_alpha_0.707_minus.csv",
        &["scan", "--alpha", ALPHA, "--branch", "minus", "--nu-min", "1.4", "--nu-max", "1.6", "--step", "0.05"],
    );
}

#[test]
fn golden_spectrum_json() {
    check_golden(
        "spectrum_alpha_1.json",
        &["spectrum", "--alpha", "1", "--levels", "3", "--format", "json", "--deterministic"],
    );
}

#[test]
fn usage_errors_exit_one() {
    for args in [
        vec!["spectrum", "--levels", "0", "--alpha", "1"],
        vec!["spectrum", "--levels", "2"],
        vec!["spectrum", "--alpha", "1", "--m", "1", "--g", "1", "--levels", "1"],
        vec!["spectrum", "--m", "1", "--levels", "1"],
        vec!["hermite-check", "--alpha", "1", "--n-max", "251"],
        vec!["spectrum", "--alpha", "1", "--levels", "1", "--format", "xml"],
        vec!["frobnicate"],
        vec![],
    ] {
        let r = run(&args);
        assert_eq!(r.code, 1, "{args:?}: {}", r.stderr);
        assert!(r.stdout.is_empty());
    }
    assert_eq!(run(&["--help"]).code, 0);
}

#[test]
fn domain_errors_exit_two() {
    for args in [
        vec!["spectrum", "--m", "-1", "--g", "1", "--levels", "1"],
        vec!["spectrum", "--alpha", "1", "--levels", "1", "--step", "0"],
        vec!["spectrum", "--alpha", "1", "--levels", "1", "--tol-nu", "-1"],
        vec!["scan", "--alpha", "1", "--branch", "plus", "--nu-min", "-2", "--nu-max", "0"],
        vec!["oracle-compare", "--alpha", "1", "--h", "0.5"],
        vec!["oracle-compare", "--alpha", "1", "--x-max", "5"],
        vec!["spectrum", "--alpha", "1", "--levels", "1", "--nu-cap", "500"],
    ] {
        let r = run(&args);
        assert_eq!(r.code, 2, "{args:?}: {}", r.stderr);
        assert!(r.stderr.starts_with("error: "));
    }
}

#[test]
fn unknown_level_exits_two() {
    let r = run(&["wavefunction", "--alpha", "1", "--level", "10", "--nu-cap", "3"]);
    assert_eq!(r.code, 2, "{}", r.stderr);
    assert!(r.stderr.contains("levels before reaching"));
}

#[test]
fn grid_beyond_the_sampling_range_exits_three() {
    for g in ["1", "4"] {
        let edge = 30.0 / g.parse::<f64>().unwrap().sqrt();
        let (lo, hi) = (format!("{}", -edge), format!("{edge}"));
        let r = run(&[
            "wavefunction",
            "--m",
            "0.5",
            "--g",
            g,
            "--level",
            "1",
            "--x-min",
            &lo,
            "--x-max",
            &hi,
            "--dx",
            "0.5",
        ]);
        assert_eq!(r.code, 3, "{}", r.stderr);
    }
}

#[test]
fn alpha_and_mass_coupling_agree() {
    let a = run(&["spectrum", "--alpha", ALPHA, "--levels", "3"]);
    let b = run(&["spectrum", "--m", "1", "--g", "2", "--levels", "3"]);
    for (x, y) in floats(&a.stdout, "nu").iter().zip(floats(&b.stdout, "nu")) {
        assert!((x - y).abs() <= 1e-12, "{x} {y}");
    }
    let (ea, eb) = (floats(&a.stdout, "e_plus"), floats(&b.stdout, "e_plus"));
    for (x, y) in ea.iter().zip(&eb) {
        assert!((y / x - 2f64.sqrt()).abs() <= 1e-12);
    }
}

#[test]
fn spectrum_metadata_goes_to_stderr() {
    let r = run(&["spectrum", "--alpha", ALPHA, "--levels", "2"]);
    assert!(r.stdout.starts_with("index,nu,branch,e_plus,e_minus,residual,below_zero\n"));
    assert!(!r.stdout.contains('#'));
    assert!(r.stderr.contains("# alpha: 7.0710678118654757e-1"));
    assert_eq!(column(&r.stdout, "branch"), ["plus", "minus"]);
    assert_eq!(column(&r.stdout, "below_zero"), ["false", "false"]);
}

#[test]
fn massless_spectrum_flags_the_level_below_zero() {
    let r = run(&["spectrum", "--alpha", "0", "--levels", "2"]);
    assert_eq!(r.code, 0);
    assert_eq!(column(&r.stdout, "below_zero"), ["true", "false"]);
    assert!(r.stderr.contains("warning: level 1 has nu"));
    // and the shooting solver confirms it is a real level
    let o = run(&["oracle-compare", "--alpha", "0", "--levels", "1"]);
    assert_eq!(o.code, 0, "{}", o.stdout);
}

#[test]
fn scan_flags_the_analytic_root_and_the_forms_agree() {
    let r = run(&["scan", "--alpha", ALPHA, "--branch", "plus", "--nu-min", "-0.5", "--nu-max", "0.5"]);
    assert_eq!(r.code, 0);
    let nu = floats(&r.stdout, "nu");
    let flags = column(&r.stdout, "sign_change");
    let flagged: Vec<f64> = nu.iter().zip(&flags).filter(|(_, f)| *f == "true").map(|(n, _)| *n).collect();
    assert_eq!(flagged, [0.0]);
    let a = floats(&r.stdout, "residual");
    let b = floats(&r.stdout, "residual_derivative_form");
    for (x, y) in a.iter().zip(&b) {
        assert!((x + y).abs() <= 1e-12 * x.abs().max(1.0), "{x} {y}");
    }
}

#[test]
fn empty_scan_is_header_only() {
    let r = run(&["scan", "--alpha", "1", "--branch", "minus", "--nu-min", "2", "--nu-max", "1"]);
    assert_eq!(r.code, 0);
    assert_eq!(r.stdout, "nu,residual,residual_derivative_form,sign_change\n");
}

#[test]
fn wavefunction_is_continuous_and_normalized() {
    let r = run(&[
        "wavefunction",
        "--alpha",
        ALPHA,
        "--level",
        "1",
        "--x-min",
        "-5",
        "--x-max",
        "5",
        "--dx",
        "0.01",
        "--normalize",
    ]);
    assert_eq!(r.code, 0, "{}", r.stderr);
    let x = floats(&r.stdout, "x");
    let (p1, p2) = (floats(&r.stdout, "psi1"), floats(&r.stdout, "psi2"));
    assert_eq!(x.len(), 1001);
    assert_eq!(x[500], 0.0);
    let rho: Vec<f64> = p1.iter().zip(&p2).map(|(a, b)| a * a + b * b).collect();
    let norm = simpson(&rho, 0.01);
    assert!((norm - 1.0).abs() <= 1e-6, "{norm}");
    for key in ["c_plus", "d_plus", "c_minus", "d_minus", "norm_before"] {
        assert!(r.stderr.contains(&format!("# {key}: ")), "{key}");
    }

    // just either side of the kink
    let r = run(&["wavefunction", "--alpha", ALPHA, "--level", "2", "--x-min=-1e-12", "--x-max", "0", "--dx", "1e-12"]);
    let (p1, p2) = (floats(&r.stdout, "psi1"), floats(&r.stdout, "psi2"));
    assert_eq!(p1.len(), 2);
    assert!((p1[0] - p1[1]).abs() <= 1e-9 * p1[1].abs());
    assert!((p2[0] - p2[1]).abs() <= 1e-9 * p2[1].abs());
}

#[test]
fn negative_energy_flips_psi2() {
    let base = ["wavefunction", "--alpha", "1", "--level", "2", "--x-min", "-1", "--x-max", "1", "--dx", "0.5"];
    let pos = run(&base);
    let mut args = base.to_vec();
    args.extend(["--energy-sign", "negative"]);
    let neg = run(&args);
    assert_eq!(floats(&pos.stdout, "psi1"), floats(&neg.stdout, "psi1"));
    let flipped: Vec<f64> = floats(&neg.stdout, "psi2").iter().map(|v| -v).collect();
    assert_eq!(floats(&pos.stdout, "psi2"), flipped);
}

#[test]
fn hermite_check_counts_roots() {
    let r = run(&["hermite-check", "--alpha", ALPHA]);
    assert_eq!(r.code, 0);
    let roots: Vec<String> = column(&r.stdout, "is_root");
    assert_eq!(roots.len(), 251);
    assert_eq!(roots.iter().filter(|v| *v == "true").count(), 1);
    assert_eq!(roots[0], "true");
    assert!(r.stderr.contains("# root_count: 1") && r.stderr.contains("# roots: 0\n"));

    let single = run(&["hermite-check", "--alpha", "0", "--n-max", "0"]);
    assert_eq!(csv(&single.stdout).1.len(), 1);
}

#[test]
fn hermite_overflow_is_a_warning() {
    let r = run(&["hermite-check", "--alpha", "20", "--n-max", "250"]);
    assert_eq!(r.code, 0);
    let overflow = column(&r.stdout, "overflow");
    assert!(overflow.iter().any(|v| v == "true"));
    assert!(r.stderr.contains("warning: n = "));
}

#[test]
fn oracle_compare_passes_and_coarse_step_fails() {
    for alpha in ["0", ALPHA, "2"] {
        let r = run(&["oracle-compare", "--alpha", alpha, "--levels", "4"]);
        assert_eq!(r.code, 0, "{}", r.stdout);
        assert!(column(&r.stdout, "pass").iter().all(|p| p == "true"));
    }
    let r = run(&["oracle-compare", "--alpha", ALPHA, "--levels", "4", "--h", "0.5", "--allow-coarse"]);
    assert_eq!(r.code, 4);
    assert!(column(&r.stdout, "pass").iter().any(|p| p == "false"));
    assert!(r.stderr.contains("disagree beyond the tolerance"));
    // the same run passes once the tolerance is loose enough
    let r = run(&[
        "oracle-compare",
        "--alpha",
        ALPHA,
        "--levels",
        "4",
        "--h",
        "0.5",
        "--allow-coarse",
        "--tol-energy",
        "0.1",
    ]);
    assert_eq!(r.code, 0);
}

#[test]
fn out_flag_writes_the_file() {
    let dir = std::env::temp_dir().join(format!("weber-dirac-cli-test-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let path = dir.join("spectrum.csv");
    let r = run(&["spectrum", "--alpha", "1", "--levels", "2", "--out", path.to_str().unwrap()]);
    assert_eq!(r.code, 0);
    assert!(r.stdout.is_empty());
    let written = std::fs::read_to_string(&path).unwrap();
    assert_eq!(written, run(&["spectrum", "--alpha", "1", "--levels", "2"]).stdout);
    std::fs::remove_dir_all(&dir).unwrap();
}

fn schema() -> jsonschema::Validator {
    let text =
        std::fs::read_to_string(PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("schema/output.schema.json")).unwrap();
    jsonschema::validator_for(&serde_json::from_str(&text).unwrap()).unwrap()
}

#[test]
fn json_output_matches_the_schema() {
    let validator = schema();
    for args in every_command() {
        for deterministic in [true, false] {
            let mut a = args.clone();
            a.extend(["--format", "json"]);
            if deterministic {
                a.push("--deterministic");
            }
            let r = run(&a);
            assert_eq!(r.code, 0, "{a:?}");
            let v: Value = serde_json::from_str(&r.stdout).unwrap();
            let errors: Vec<String> = validator.iter_errors(&v).map(|e| e.to_string()).collect();
            assert!(errors.is_empty(), "{a:?}: {errors:?}");
            assert_eq!(v.get("timestamp_unix").is_some(), !deterministic);
            assert_eq!(v["rows"][0].as_array().unwrap().len(), v["columns"].as_array().unwrap().len());
        }
    }
}

#[test]
fn schema_rejects_malformed_output() {
    let validator = schema();
    let good: Value =
        serde_json::from_str(&run(&["spectrum", "--alpha", "1", "--levels", "1", "--format", "json"]).stdout).unwrap();
    assert!(validator.is_valid(&good));
    let mut bad = good.clone();
    bad["schema_version"] = "0.9".into();
    assert!(!validator.is_valid(&bad));
    let mut bad = good.clone();
    bad["columns"][0] = "level".into();
    assert!(!validator.is_valid(&bad));
    let mut bad = good;
    bad.as_object_mut().unwrap().remove("rows");
    assert!(!validator.is_valid(&bad));
}

#[test]
fn deterministic_runs_are_byte_identical() {
    for args in every_command() {
        for format in ["csv", "json"] {
            let mut a = args.clone();
            a.extend(["--format", format, "--deterministic"]);
            let (x, y) = (run(&a), run(&a));
            assert_eq!(x.code, y.code);
            assert_eq!(x.stdout, y.stdout, "{a:?}");
            assert_eq!(x.stderr, y.stderr, "{a:?}");
        }
    }
}
