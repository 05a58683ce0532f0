#![allow(dead_code)]

use std::process::Command;

pub const ALPHA: &str = "0.7071067811865476";

pub struct Run {
    pub code: i32,
    pub stdout: String,
    pub stderr: String,
}

pub fn run(args: &[&str]) -> Run {
    let out = Command::new(env!("CARGO_BIN_EXE_weber-dirac")).args(args).output().expect("binary runs");
    Run {
        code: out.status.code().expect("exited normally"),
        stdout: String::from_utf8(out.stdout).unwrap(),
        stderr: String::from_utf8(out.stderr).unwrap(),
    }
}

/// Header and rows of a CSV table.
pub fn csv(text: &str) -> (Vec<String>, Vec<Vec<String>>) {
    let mut lines = text.lines();
    let header = lines.next().expect("header").split(',').map(str::to_string).collect();
    let rows = lines.map(|l| l.split(',').map(str::to_string).collect()).collect();
    (header, rows)
}

pub fn column(text: &str, name: &str) -> Vec<String> {
    let (header, rows) = csv(text);
    let i = header.iter().position(|h| h == name).unwrap_or_else(|| panic!("no column {name}"));
    rows.into_iter().map(|r| r[i].clone()).collect()
}

pub fn floats(text: &str, name: &str) -> Vec<f64> {
    column(text, name).iter().map(|v| v.parse().unwrap()).collect()
}

/// Composite Simpson over equally spaced samples (even interval count).
pub fn simpson(y: &[f64], dx: f64) -> f64 {
    assert!(y.len() % 2 == 1);
    let n = y.len() - 1;
    let mut s = y[0] + y[n];
    for (i, v) in y.iter().enumerate().take(n).skip(1) {
        s += if i % 2 == 1 { 4.0 * v } else { 2.0 * v };
    }
    s * dx / 3.0
}

/// One invocation of every command, for determinism and schema checks.
pub fn every_command() -> Vec<Vec<&'static str>> {
    vec![
        vec!["spectrum", "--alpha", ALPHA, "--levels", "4"],
        vec!["spectrum", "--m", "1", "--g", "2", "--levels", "3"],
        vec!["scan", "--alpha", ALPHA, "--branch", "plus", "--nu-min", "-0.5", "--nu-max", "1", "--step", "0.05"],
        vec![
            "wavefunction",
            "--alpha",
            ALPHA,
            "--level",
            "2",
            "--normalize",
            "--x-min",
            "-2",
            "--x-max",
            "2",
            "--dx",
            "0.1",
        ],
        vec!["hermite-check", "--alpha", ALPHA, "--n-max", "250"],
        vec!["oracle-compare", "--alpha", "0", "--levels", "3"],
    ]
}
