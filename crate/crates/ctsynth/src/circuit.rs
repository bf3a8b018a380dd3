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

//! Gate list intermediate representation over the four-register layout
//! A (controls), B (target), C (clean ancillae), D (dirty ancillae), plus
//! the line-oriented text format.

use crate::error::{Error, Result};
use std::fmt::Write as _;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum GateKind {
    H,
    S,
    Sdg,
    T,
    Tdg,
    X,
    Y,
    Z,
    Cnot,
    Swap,
}

impl GateKind {
    pub fn name(&self) -> &'static str {
        match self {
            GateKind::H => "H",
            GateKind::S => "S",
            GateKind::Sdg => "Sdg",
            GateKind::T => "T",
            GateKind::Tdg => "Tdg",
            GateKind::X => "X",
            GateKind::Y => "Y",
            GateKind::Z => "Z",
            GateKind::Cnot => "CNOT",
            GateKind::Swap => "SWAP",
        }
    }

    pub fn from_name(s: &str) -> Option<GateKind> {
        Some(match s {
            "H" => GateKind::H,
            "S" => GateKind::S,
            "Sdg" => GateKind::Sdg,
            "T" => GateKind::T,
            "Tdg" => GateKind::Tdg,
            "X" => GateKind::X,
            "Y" => GateKind::Y,
            "Z" => GateKind::Z,
            "CNOT" => GateKind::Cnot,
            "SWAP" => GateKind::Swap,
            _ => return None,
        })
    }

    pub fn is_two_qubit(&self) -> bool {
        matches!(self, GateKind::Cnot | GateKind::Swap)
    }

    pub fn dagger(&self) -> GateKind {
        match self {
            GateKind::S => GateKind::Sdg,
            GateKind::Sdg => GateKind::S,
            GateKind::T => GateKind::Tdg,
            GateKind::Tdg => GateKind::T,
            k => *k,
        }
    }

    pub fn is_t(&self) -> bool {
        matches!(self, GateKind::T | GateKind::Tdg)
    }
}

/// A gate on one or two global qubit indices. For CNOT, `q0` is the control
/// and `q1` the target.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct Gate {
    pub kind: GateKind,
    pub q0: u32,
    pub q1: Option<u32>,
}

impl Gate {
    pub fn one(kind: GateKind, q: u32) -> Gate {
        debug_assert!(!kind.is_two_qubit());
        Gate { kind, q0: q, q1: None }
    }

    pub fn cnot(control: u32, target: u32) -> Gate {
        Gate { kind: GateKind::Cnot, q0: control, q1: Some(target) }
    }

    pub fn swap(a: u32, b: u32) -> Gate {
        Gate { kind: GateKind::Swap, q0: a, q1: Some(b) }
    }

    pub fn dagger(&self) -> Gate {
        Gate { kind: self.kind.dagger(), q0: self.q0, q1: self.q1 }
    }
}

/// Register sizes and the global qubit numbering A-then-B-then-C-then-D,
/// zero-based. The target register B always has exactly one qubit.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Registers {
    pub n_control: u32,
    pub n_clean: u32,
    pub n_dirty: u32,
}

impl Registers {
    pub fn new(n_control: u32, n_clean: u32, n_dirty: u32) -> Registers {
        Registers { n_control, n_clean, n_dirty }
    }

    pub fn n_target(&self) -> u32 {
        1
    }

    pub fn total(&self) -> u32 {
        self.n_control + 1 + self.n_clean + self.n_dirty
    }

    pub fn a(&self, i: u32) -> u32 {
        debug_assert!(i < self.n_control);
        i
    }

    pub fn b(&self) -> u32 {
        self.n_control
    }

    pub fn c(&self, i: u32) -> u32 {
        debug_assert!(i < self.n_clean);
        self.n_control + 1 + i
    }

    pub fn d(&self, i: u32) -> u32 {
        debug_assert!(i < self.n_dirty);
        self.n_control + 1 + self.n_clean + i
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Circuit {
    pub registers: Registers,
    pub gates: Vec<Gate>,
}

impl Circuit {
    pub fn new(registers: Registers) -> Circuit {
        Circuit { registers, gates: Vec::new() }
    }

    pub fn push(&mut self, gate: Gate) {
        self.gates.push(gate);
    }

    pub fn push_one(&mut self, kind: GateKind, q: u32) {
        self.push(Gate::one(kind, q));
    }

    pub fn extend(&mut self, gates: impl IntoIterator<Item = Gate>) {
        self.gates.extend(gates);
    }

    /// Number of T and T-dagger gates.
    pub fn t_count(&self) -> usize {
        self.gates.iter().filter(|g| g.kind.is_t()).count()
    }

    /// The inverse circuit: gates reversed, each replaced by its dagger.
    pub fn inverse(&self) -> Circuit {
        Circuit {
            registers: self.registers,
            gates: self.gates.iter().rev().map(Gate::dagger).collect(),
        }
    }

    pub fn validate(&self) -> Result<()> {
        let n = self.registers.total();
        for g in &self.gates {
            if g.kind.is_two_qubit() != g.q1.is_some() {
                return Err(Error::InconsistentInput(format!("gate arity mismatch: {g:?}")));
            }
            if g.q0 >= n || g.q1.is_some_and(|q| q >= n) {
                return Err(Error::InconsistentInput(format!("qubit out of range: {g:?}")));
            }
            if g.q1 == Some(g.q0) {
                return Err(Error::InconsistentInput(format!("two-qubit gate on equal qubits: {g:?}")));
            }
        }
        Ok(())
    }

    /// Line-oriented text format: a `registers` header then one gate per line.
    pub fn emit(&self) -> String {
        let r = self.registers;
        let mut out = String::new();
        writeln!(out, "registers A={} B=1 C={} D={}", r.n_control, r.n_clean, r.n_dirty).unwrap();
        for g in &self.gates {
            match g.q1 {
                Some(q1) => writeln!(out, "{} q{} q{}", g.kind.name(), g.q0, q1).unwrap(),
                None => writeln!(out, "{} q{}", g.kind.name(), g.q0).unwrap(),
            }
        }
        out
    }

    pub fn parse(text: &str) -> Result<Circuit> {
        let mut lines = text.lines().filter(|l| !l.trim().is_empty());
        let header = lines.next().ok_or_else(|| Error::Parse("empty circuit file".into()))?;
        let registers = parse_header(header.trim())?;
        let mut circuit = Circuit::new(registers);
        for line in lines {
            let mut parts = line.split_whitespace();
            let name = parts.next().ok_or_else(|| Error::Parse(format!("bad line: {line}")))?;
            let kind = GateKind::from_name(name)
                .ok_or_else(|| Error::Parse(format!("unknown gate: {name}")))?;
            let q0 = parse_qubit(parts.next(), line)?;
            let q1 = if kind.is_two_qubit() {
                Some(parse_qubit(parts.next(), line)?)
            } else {
                None
            };
            if parts.next().is_some() {
                return Err(Error::Parse(format!("trailing tokens: {line}")));
            }
            circuit.push(Gate { kind, q0, q1 });
        }
        circuit.validate()?;
        Ok(circuit)
    }
}

fn parse_qubit(tok: Option<&str>, line: &str) -> Result<u32> {
    let tok = tok.ok_or_else(|| Error::Parse(format!("missing qubit: {line}")))?;
    let idx = tok
        .strip_prefix('q')
        .and_then(|s| s.parse::<u32>().ok())
        .ok_or_else(|| Error::Parse(format!("bad qubit token {tok:?}: {line}")))?;
    Ok(idx)
}

fn parse_header(header: &str) -> Result<Registers> {
    let mut parts = header.split_whitespace();
    if parts.next() != Some("registers") {
        return Err(Error::Parse(format!("expected registers header, got: {header}")));
    }
    let mut sizes = [None::<u32>; 4];
    for part in parts {
        let (name, value) = part
            .split_once('=')
            .ok_or_else(|| Error::Parse(format!("bad header field: {part}")))?;
        let slot = match name {
            "A" => 0,
            "B" => 1,
            "C" => 2,
            "D" => 3,
            _ => return Err(Error::Parse(format!("unknown register: {name}"))),
        };
        let n = value
            .parse::<u32>()
            .map_err(|_| Error::Parse(format!("bad register size: {part}")))?;
        sizes[slot] = Some(n);
    }
    match sizes {
        [Some(a), Some(1), Some(c), Some(d)] => Ok(Registers::new(a, c, d)),
        [_, Some(b), _, _] if b != 1 => Err(Error::Parse(format!("register B must have 1 qubit, got {b}"))),
        _ => Err(Error::Parse(format!("incomplete registers header: {header}"))),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn sample() -> Circuit {
        let regs = Registers::new(2, 3, 1);
        let mut c = Circuit::new(regs);
        c.push_one(GateKind::H, regs.a(0));
        c.push_one(GateKind::T, regs.b());
        c.push(Gate::cnot(regs.a(1), regs.c(2)));
        c.push_one(GateKind::Tdg, regs.d(0));
        c.push(Gate::swap(regs.c(0), regs.c(1)));
        c
    }

    #[test]
    fn round_trip_is_bit_exact() {
        let c = sample();
        let text = c.emit();
        let parsed = Circuit::parse(&text).unwrap();
        assert_eq!(parsed, c);
        assert_eq!(parsed.emit(), text);
    }

    #[test]
    fn t_count_counts_t_and_tdg() {
        assert_eq!(sample().t_count(), 2);
    }

    #[test]
    fn inverse_reverses_and_daggers() {
        let c = sample();
        let inv = c.inverse();
        assert_eq!(inv.gates.len(), c.gates.len());
        assert_eq!(inv.gates[0].kind, GateKind::Swap);
        assert_eq!(inv.gates[1].kind, GateKind::T);
        assert_eq!(inv.gates.last().unwrap().kind, GateKind::H);
    }

    #[test]
    fn parse_rejects_garbage() {
        assert!(Circuit::parse("").is_err());
        assert!(Circuit::parse("registers A=1 B=1 C=0 D=0\nQ q0").is_err());
        assert!(Circuit::parse("registers A=1 B=2 C=0 D=0\n").is_err());
        assert!(Circuit::parse("registers A=1 B=1 C=0 D=0\nCNOT q0 q0").is_err());
        assert!(Circuit::parse("registers A=1 B=1 C=0 D=0\nH q7").is_err());
    }

    #[test]
    fn numbering_is_a_b_c_d() {
        let r = Registers::new(2, 3, 2);
        assert_eq!(r.a(0), 0);
        assert_eq!(r.a(1), 1);
        assert_eq!(r.b(), 2);
        assert_eq!(r.c(0), 3);
        assert_eq!(r.d(0), 6);
        assert_eq!(r.total(), 8);
    }
}
