// Copyright contributors to the ctsynth project
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

use std::path::PathBuf;
use std::process::{Command, Output};

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_ctsynth"))
}

fn run(args: &[&str]) -> Output {
    bin().args(args).output().expect("binary runs")
}

fn stdout_of(out: &Output) -> String {
    assert!(out.status.success(), "stderr: {}", String::from_utf8_lossy(&out.stderr));
    String::from_utf8(out.stdout.clone()).unwrap()
}

fn field(line: &str, key: &str) -> f64 {
    line.split_whitespace()
        .find_map(|tok| tok.strip_prefix(&format!("{key}=")))
        .unwrap_or_else(|| panic!("missing {key} in {line}"))
        .parse()
        .unwrap()
}

fn tmp(name: &str) -> PathBuf {
    let mut p = std::env::temp_dir();
    p.push(format!("ctsynth-cli-test-{}-{name}", std::process::id()));
    p
}

#[test]
fn synth_single_report_and_verify_agree() {
    let out_path = tmp("single.qct");
    let out = run(&[
        "synth-single",
        "--target",
        "z-rotation:0.7",
        "--epsilon",
        "0.1",
        "--parity",
        "even",
        "--out",
        out_path.to_str().unwrap(),
    ]);
    let stdout = stdout_of(&out);
    let report = stdout.lines().next().unwrap();
    let distance = field(report, "distance");
    assert!(distance < 0.1);
    assert_eq!(field(report, "epsilon"), 0.1);

    let verify = run(&[
        "verify",
        "--kind",
        "single",
        "--circuit",
        out_path.to_str().unwrap(),
        "--target",
        "z-rotation:0.7",
    ]);
    let vd = field(stdout_of(&verify).lines().last().unwrap(), "distance");
    assert!((vd - distance).abs() < 1e-9);
    let _ = std::fs::remove_file(out_path);
}

#[test]
fn emitted_circuits_round_trip() {
    let out_path = tmp("ctrl.qct");
    let out = run(&[
        "synth-controlled",
        "--n",
        "1",
        "--epsilon",
        "0.1",
        "--seed",
        "7",
        "--out",
        out_path.to_str().unwrap(),
    ]);
    let stdout = stdout_of(&out);
    assert!(stdout.contains("formula_bound="));
    let text = std::fs::read_to_string(&out_path).unwrap();
    let circuit = ctsynth::circuit::Circuit::parse(&text).unwrap();
    assert_eq!(circuit.emit(), text);

    // verify recomputes the same per-branch distances
    let report = stdout.lines().next().unwrap();
    let distance = field(report, "distance");
    let verify = run(&[
        "verify",
        "--kind",
        "controlled",
        "--circuit",
        out_path.to_str().unwrap(),
        "--n",
        "1",
        "--seed",
        "7",
    ]);
    let vd = field(stdout_of(&verify).lines().last().unwrap(), "distance");
    assert!((vd - distance).abs() < 1e-9);
    let _ = std::fs::remove_file(out_path);
}

#[test]
fn audit_reports_zero_sde_for_clifford_circuit() {
    let path = tmp("clifford.qct");
    std::fs::write(&path, "registers A=1 B=1 C=0 D=0\nCNOT q0 q1\nS q1\nZ q0\n").unwrap();
    let out = run(&["audit", "--circuit", path.to_str().unwrap()]);
    let stdout = stdout_of(&out);
    assert!(stdout.contains("sde\t0"), "{stdout}");
    assert!(stdout.contains("chain_holds\ttrue"));
    let _ = std::fs::remove_file(path);
}

#[test]
fn json_matrix_targets_parse() {
    let path = tmp("target.json");
    // Hadamard-like SU(2): normalized internally.
    let h = std::f64::consts::FRAC_1_SQRT_2;
    std::fs::write(
        &path,
        format!("[[[{h},0],[{h},0]],[[{h},0],[-{h},0]]]"),
    )
    .unwrap();
    let out = run(&[
        "synth-single",
        "--target",
        &format!("file:{}", path.display()),
        "--epsilon",
        "0.2",
    ]);
    let stdout = stdout_of(&out);
    // without --out the circuit text precedes the report line
    let report = stdout.lines().find(|l| l.contains("t_count=")).unwrap();
    assert!(field(report, "distance") < 0.2);
    let _ = std::fs::remove_file(path);
}

#[test]
fn parse_errors_exit_2_with_machine_readable_stderr() {
    let out = run(&["synth-single", "--target", "bogus:1", "--epsilon", "0.1"]);
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("error=parse"));
}

#[test]
fn epsilon_too_small_exits_3() {
    let out = run(&[
        "synth-single",
        "--target",
        "haar:3",
        "--epsilon",
        "0.0001",
        "--m-cap",
        "8",
    ]);
    assert_eq!(out.status.code(), Some(3));
    assert!(String::from_utf8_lossy(&out.stderr).contains("error=epsilon_too_small"));
}

#[test]
fn seeded_runs_are_deterministic() {
    let args = ["synth-controlled", "--n", "2", "--epsilon", "0.2", "--seed", "42"];
    let a = stdout_of(&run(&args));
    let b = stdout_of(&run(&args));
    assert_eq!(a, b);
}
