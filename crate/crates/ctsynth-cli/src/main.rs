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

//! Command-line front end: synthesize controlled SU(2)/U(2) and SU(4)
//! targets into Clifford+T circuits, audit T-count lower bounds, and
//! re-verify emitted circuits independently of the synthesis path.
//!
//! Exit codes: 2 for argument or target parse errors, 3 when synthesis
//! hits an epsilon or capacity limit, 1 for anything else. Failures also
//! print a machine-readable `error=<code>` line on stderr.

use clap::{Parser, Subcommand, ValueEnum};
use ctsynth::apps::{synth_controlled_u2, synth_su4, u2_trace_distances};
use ctsynth::circuit::Circuit;
use ctsynth::ctrl::{synth_controlled_su2, verify_controlled, CtrlMode};
use ctsynth::lbound::lower_bound_check;
use ctsynth::mat::{CMat, C64};
use ctsynth::sample::{haar_su2, haar_su4, haar_u2, seeded_rng};
use ctsynth::sim::{
    block_diagonal_extract, diamond_distance_2x2, diamond_distance_unitary, exact_simulate,
    float_simulate,
};
use ctsynth::synth1q::{approx_su2, normalize_su2, Parity, SynthRequest, DEFAULT_M_CAP};
use rand::Rng;
use std::path::PathBuf;
use std::process::ExitCode;

/// Print to stdout, exiting quietly if a downstream consumer closed the
/// pipe after reading what it wanted.
fn say(text: std::fmt::Arguments) {
    use std::io::Write;
    let mut out = std::io::stdout();
    if out.write_fmt(text).and_then(|_| out.write_all(b"\n")).is_err() {
        std::process::exit(0);
    }
}

macro_rules! sayln {
    ($($arg:tt)*) => { say(format_args!($($arg)*)) };
}

#[derive(Parser)]
#[command(name = "ctsynth", version, about = "Clifford+T synthesis of controlled and two-qubit gates")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, ValueEnum)]
enum ModeArg {
    Ancilla,
    AncillaFree,
}

#[derive(Clone, Copy, ValueEnum)]
enum ParityArg {
    Even,
    Any,
}

#[derive(Clone, Copy, ValueEnum)]
enum FormatArg {
    Qct,
}

#[derive(Clone, Copy, ValueEnum)]
enum VerifyKind {
    Single,
    Controlled,
    ControlledU2,
    Su4,
}

#[derive(Subcommand)]
enum Command {
    /// Approximate a single SU(2) target by a normal form.
    SynthSingle {
        /// Target: `z-rotation:<theta>`, `haar:<seed>`, or `file:<path>`
        /// (JSON 2x2 matrix of [re, im] pairs).
        #[arg(long)]
        target: String,
        #[arg(long)]
        epsilon: f64,
        #[arg(long, value_enum, default_value = "even")]
        parity: ParityArg,
        #[arg(long, default_value_t = DEFAULT_M_CAP)]
        m_cap: u32,
        #[arg(long)]
        out: Option<PathBuf>,
        #[arg(long, value_enum, default_value = "qct")]
        format: FormatArg,
    },
    /// Compile 2^n Haar-seeded SU(2) blocks into a controlled circuit.
    SynthControlled {
        #[arg(long)]
        n: u32,
        #[arg(long)]
        epsilon: f64,
        #[arg(long)]
        seed: u64,
        #[arg(long, value_enum)]
        mode: Option<ModeArg>,
        #[arg(long, default_value_t = DEFAULT_M_CAP)]
        m_cap: u32,
        #[arg(long)]
        out: Option<PathBuf>,
        #[arg(long, value_enum, default_value = "qct")]
        format: FormatArg,
    },
    /// Compile 2^n Haar-seeded U(2) blocks with one extra clean ancilla.
    SynthControlledU2 {
        #[arg(long)]
        n: u32,
        #[arg(long)]
        epsilon: f64,
        #[arg(long)]
        seed: u64,
        #[arg(long, default_value_t = DEFAULT_M_CAP)]
        m_cap: u32,
        #[arg(long)]
        out: Option<PathBuf>,
        #[arg(long, value_enum, default_value = "qct")]
        format: FormatArg,
    },
    /// Synthesize a two-qubit SU(4) target, ancilla-free.
    SynthSu4 {
        /// Target: `haar:<seed>` or `file:<path>` (JSON 4x4 matrix).
        #[arg(long)]
        target: String,
        #[arg(long)]
        epsilon: f64,
        #[arg(long, default_value_t = DEFAULT_M_CAP)]
        m_cap: u32,
        #[arg(long)]
        out: Option<PathBuf>,
        #[arg(long, value_enum, default_value = "qct")]
        format: FormatArg,
    },
    /// T-count lower-bound report for an ancilla-free block-diagonal circuit.
    Audit {
        #[arg(long)]
        circuit: PathBuf,
    },
    /// Median T-count sweep over Haar targets at several epsilons.
    Bench {
        #[arg(long, default_value_t = 50)]
        targets: u32,
        #[arg(long)]
        seed: u64,
        /// Repeatable: one epsilon per flag.
        #[arg(long = "epsilon", required = true)]
        epsilons: Vec<f64>,
        #[arg(long, default_value_t = 18)]
        m_cap: u32,
    },
    /// Recompute the distance of an emitted circuit to its target,
    /// independently of how it was synthesized.
    Verify {
        #[arg(long, value_enum)]
        kind: VerifyKind,
        #[arg(long)]
        circuit: PathBuf,
        /// Target spec for `single` and `su4` (same grammar as synthesis).
        #[arg(long)]
        target: Option<String>,
        /// Block count exponent and seed for `controlled`/`controlled-u2`.
        #[arg(long)]
        n: Option<u32>,
        #[arg(long)]
        seed: Option<u64>,
    },
}

#[derive(Debug)]
enum CliError {
    Parse(String),
    Limit(String),
    Internal(String),
}

impl From<ctsynth::Error> for CliError {
    fn from(e: ctsynth::Error) -> CliError {
        match e {
            ctsynth::Error::EpsilonTooSmall { .. } => CliError::Limit("epsilon_too_small".into()),
            ctsynth::Error::CapExceeded(_) => CliError::Limit("cap_exceeded".into()),
            ctsynth::Error::Parse(m) => CliError::Parse(m),
            other => CliError::Internal(other.to_string()),
        }
    }
}

fn parse_matrix_json(path: &str, dim: usize) -> Result<CMat, CliError> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| CliError::Parse(format!("cannot read {path}: {e}")))?;
    let value: serde_json::Value =
        serde_json::from_str(&text).map_err(|e| CliError::Parse(format!("bad JSON: {e}")))?;
    let rows = value
        .as_array()
        .filter(|r| r.len() == dim)
        .ok_or_else(|| CliError::Parse(format!("expected {dim} rows")))?;
    let mut m = CMat::zeros(dim);
    for (i, row) in rows.iter().enumerate() {
        let cols = row
            .as_array()
            .filter(|c| c.len() == dim)
            .ok_or_else(|| CliError::Parse(format!("expected {dim} columns in row {i}")))?;
        for (j, entry) in cols.iter().enumerate() {
            let pair = entry
                .as_array()
                .filter(|p| p.len() == 2)
                .ok_or_else(|| CliError::Parse("entries must be [re, im] pairs".into()))?;
            let re = pair[0].as_f64().ok_or_else(|| CliError::Parse("non-numeric entry".into()))?;
            let im = pair[1].as_f64().ok_or_else(|| CliError::Parse("non-numeric entry".into()))?;
            m[(i, j)] = C64::new(re, im);
        }
    }
    if !m.is_unitary(1e-10) {
        return Err(CliError::Parse("matrix is not unitary".into()));
    }
    Ok(m)
}

/// `z-rotation:<theta>`, `haar:<seed>` or `file:<path>`, normalized to SU(2).
fn parse_target_1q(spec: &str) -> Result<CMat, CliError> {
    if let Some(theta) = spec.strip_prefix("z-rotation:") {
        let theta: f64 =
            theta.parse().map_err(|_| CliError::Parse(format!("bad angle: {theta}")))?;
        let mut m = CMat::zeros(2);
        m[(0, 0)] = C64::from_polar(1.0, -theta / 2.0);
        m[(1, 1)] = C64::from_polar(1.0, theta / 2.0);
        return Ok(m);
    }
    if let Some(seed) = spec.strip_prefix("haar:") {
        let seed: u64 = seed.parse().map_err(|_| CliError::Parse(format!("bad seed: {seed}")))?;
        return Ok(haar_su2(&mut seeded_rng(seed)));
    }
    if let Some(path) = spec.strip_prefix("file:") {
        return normalize_su2(&parse_matrix_json(path, 2)?).map_err(CliError::from);
    }
    Err(CliError::Parse(format!("unknown target spec: {spec}")))
}

fn parse_target_su4(spec: &str) -> Result<CMat, CliError> {
    if let Some(seed) = spec.strip_prefix("haar:") {
        let seed: u64 = seed.parse().map_err(|_| CliError::Parse(format!("bad seed: {seed}")))?;
        return Ok(haar_su4(&mut seeded_rng(seed)));
    }
    if let Some(path) = spec.strip_prefix("file:") {
        let m = parse_matrix_json(path, 4)?;
        let det = ctsynth::mat::det4(&m);
        if (det - C64::new(1.0, 0.0)).norm() > 1e-8 {
            return Err(CliError::Parse("matrix is not special unitary".into()));
        }
        return Ok(m);
    }
    Err(CliError::Parse(format!("unknown target spec: {spec}")))
}

fn seeded_su2_blocks(n: u32, seed: u64) -> Vec<CMat> {
    let mut rng = seeded_rng(seed);
    (0..1usize << n).map(|_| haar_su2(&mut rng)).collect()
}

fn seeded_u2_blocks(n: u32, seed: u64) -> Vec<CMat> {
    let mut rng = seeded_rng(seed);
    (0..1usize << n).map(|_| haar_u2(&mut rng)).collect()
}

/// Write the circuit before any report chatter, so a truncated stdout
/// consumer cannot lose the artifact.
fn emit_circuit(circuit: &Circuit, out: &Option<PathBuf>) -> Result<(), CliError> {
    let text = circuit.emit();
    match out {
        Some(path) => std::fs::write(path, text)
            .map_err(|e| CliError::Internal(format!("cannot write circuit: {e}"))),
        None => {
            use std::io::Write;
            if std::io::stdout().write_all(text.as_bytes()).is_err() {
                std::process::exit(0);
            }
            Ok(())
        }
    }
}

fn report_line(t_count: usize, epsilon: f64, distance: f64, formula_bound: f64) {
    sayln!("t_count={t_count} epsilon={epsilon} distance={distance:.12} formula_bound={formula_bound:.4}");
}

fn run(cli: Cli) -> Result<(), CliError> {
    match cli.command {
        Command::SynthSingle { target, epsilon, parity, m_cap, out, format: FormatArg::Qct } => {
            let target = parse_target_1q(&target)?;
            let parity = match parity {
                ParityArg::Even => Parity::Even,
                ParityArg::Any => Parity::Any,
            };
            let res = approx_su2(&SynthRequest { target, epsilon, parity, m_cap })?;
            let mut circuit = Circuit::new(ctsynth::circuit::Registers::new(0, 0, 0));
            circuit.extend(res.form.to_gates(0));
            emit_circuit(&circuit, &out)?;
            report_line(
                circuit.t_count(),
                epsilon,
                res.achieved_distance,
                3.0 * (1.0 / epsilon).log2() + 12.0,
            );
            Ok(())
        }
        Command::SynthControlled { n, epsilon, seed, mode, m_cap, out, format: FormatArg::Qct } => {
            let mode = match mode {
                Some(ModeArg::Ancilla) => CtrlMode::Ancilla,
                Some(ModeArg::AncillaFree) => CtrlMode::AncillaFreeN1,
                None if n == 1 => CtrlMode::AncillaFreeN1,
                None => CtrlMode::Ancilla,
            };
            let blocks = seeded_su2_blocks(n, seed);
            let synth = synth_controlled_su2(&blocks, epsilon, mode, m_cap)?;
            emit_circuit(&synth.circuit, &out)?;
            let layout = synth.table.layout;
            report_line(
                synth.circuit.t_count(),
                epsilon,
                synth.max_distance(),
                synth.gadget_t_formula as f64,
            );
            sayln!(
                "m={} l={} c={} b={} gadget_t={} oracle_t={}",
                layout.m,
                layout.l,
                layout.c,
                layout.width(),
                synth.gadget_t_count,
                synth.oracle_t_count
            );
            for (i, br) in synth.branches.iter().enumerate() {
                sayln!("branch={i} m_i={} s={} distance={:.12}", br.m_i, br.s, br.distance);
            }
            Ok(())
        }
        Command::SynthControlledU2 { n, epsilon, seed, m_cap, out, format: FormatArg::Qct } => {
            let blocks = seeded_u2_blocks(n, seed);
            let synth = synth_controlled_u2(&blocks, epsilon, m_cap)?;
            emit_circuit(&synth.circuit, &out)?;
            let su_max = synth.su_part.max_distance().max(synth.phase_part.max_distance());
            report_line(
                synth.circuit.t_count(),
                epsilon,
                su_max,
                6.0 * (1.0 / epsilon).log2() + 2.0 * 34.0,
            );
            Ok(())
        }
        Command::SynthSu4 { target, epsilon, m_cap, out, format: FormatArg::Qct } => {
            let target = parse_target_su4(&target)?;
            let synth = synth_su4(&target, epsilon, m_cap)?;
            emit_circuit(&synth.circuit, &out)?;
            report_line(
                synth.t_count(),
                epsilon,
                synth.final_distance,
                9.0 * (1.0 / epsilon).log2() + 60.0,
            );
            sayln!(
                "stage_distances={:.6?} chain_distances={:.6?}",
                synth.stage_distances, synth.chain_distances
            );
            Ok(())
        }
        Command::Audit { circuit } => {
            let text = std::fs::read_to_string(&circuit)
                .map_err(|e| CliError::Parse(format!("cannot read circuit: {e}")))?;
            let circuit = Circuit::parse(&text)?;
            let report = lower_bound_check(&circuit)?;
            use std::io::Write;
            if std::io::stdout().write_all(report.tsv().as_bytes()).is_err() {
                std::process::exit(0);
            }
            Ok(())
        }
        Command::Bench { targets, seed, epsilons, m_cap } => {
            let mut rng = seeded_rng(seed);
            let batch: Vec<CMat> = (0..targets).map(|_| haar_su2(&mut rng)).collect();
            sayln!("epsilon\tmedian_t\tmin_t\tmax_t\tbound");
            for eps in epsilons {
                let mut counts = Vec::with_capacity(batch.len());
                for t in &batch {
                    let res = approx_su2(&SynthRequest {
                        target: t.clone(),
                        epsilon: eps,
                        parity: Parity::Even,
                        m_cap,
                    })?;
                    counts.push(res.t_count);
                }
                counts.sort_unstable();
                let median = counts[counts.len() / 2];
                sayln!(
                    "{eps}\t{median}\t{}\t{}\t{:.2}",
                    counts[0],
                    counts[counts.len() - 1],
                    3.0 * (1.0 / eps).log2() + 12.0
                );
            }
            Ok(())
        }
        Command::Verify { kind, circuit, target, n, seed } => {
            let text = std::fs::read_to_string(&circuit)
                .map_err(|e| CliError::Parse(format!("cannot read circuit: {e}")))?;
            let circuit = Circuit::parse(&text)?;
            verify_command(kind, &circuit, target, n, seed)
        }
    }
}

fn verify_command(
    kind: VerifyKind,
    circuit: &Circuit,
    target: Option<String>,
    n: Option<u32>,
    seed: Option<u64>,
) -> Result<(), CliError> {
    let need_target =
        || target.clone().ok_or_else(|| CliError::Parse("--target required".into()));
    let need_n = || n.ok_or_else(|| CliError::Parse("--n required".into()));
    let need_seed = || seed.ok_or_else(|| CliError::Parse("--seed required".into()));
    match kind {
        VerifyKind::Single => {
            let target = parse_target_1q(&need_target()?)?;
            let u = float_simulate(circuit)?;
            let d = diamond_distance_2x2(&u, &target);
            sayln!("distance={d:.12}");
            Ok(())
        }
        VerifyKind::Su4 => {
            let target = parse_target_su4(&need_target()?)?;
            let u = float_simulate(circuit)?;
            let d = diamond_distance_unitary(&u, &target)?;
            sayln!("distance={d:.12}");
            Ok(())
        }
        VerifyKind::Controlled => {
            let blocks = seeded_su2_blocks(need_n()?, need_seed()?);
            let got = if circuit.registers.n_clean == 0 && circuit.registers.n_dirty == 0 {
                let u = exact_simulate(circuit)?;
                block_diagonal_extract(&u, circuit.registers.n_control)?
            } else {
                let v = verify_controlled(circuit)?;
                sayln!("clean_restored={} dirty_invariant={}", v.clean_restored, v.dirty_invariant);
                v.blocks
            };
            let mut worst = 0.0f64;
            for (i, (target, block)) in blocks.iter().zip(&got).enumerate() {
                let d = diamond_distance_2x2(target, &block.to_cmat());
                sayln!("branch={i} distance={d:.12}");
                worst = worst.max(d);
            }
            sayln!("distance={worst:.12}");
            Ok(())
        }
        VerifyKind::ControlledU2 => {
            let blocks = seeded_u2_blocks(need_n()?, need_seed()?);
            // The phase ancilla is the first clean qubit by construction.
            let anc = circuit.registers.c(0);
            let dim = 1usize << (circuit.registers.n_control + 1);
            let mut rng = seeded_rng(need_seed()?.wrapping_add(1));
            let inputs: Vec<Vec<C64>> = (0..20)
                .map(|_| {
                    let mut v: Vec<C64> = (0..dim)
                        .map(|_| C64::new(rng.random::<f64>() - 0.5, rng.random::<f64>() - 0.5))
                        .collect();
                    let norm: f64 = v.iter().map(|a| a.norm_sqr()).sum::<f64>().sqrt();
                    for a in v.iter_mut() {
                        *a /= norm;
                    }
                    v
                })
                .collect();
            let dists = u2_trace_distances(circuit, anc, &blocks, &inputs)?;
            let worst = dists.iter().copied().fold(0.0, f64::max);
            sayln!("distance={worst:.12}");
            Ok(())
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(CliError::Parse(msg)) => {
            eprintln!("error=parse");
            eprintln!("{msg}");
            ExitCode::from(2)
        }
        Err(CliError::Limit(code)) => {
            eprintln!("error={code}");
            ExitCode::from(3)
        }
        Err(CliError::Internal(msg)) => {
            eprintln!("error=internal");
            eprintln!("{msg}");
            ExitCode::FAILURE
        }
    }
}
