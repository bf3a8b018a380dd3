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

//! The controlled-gate compiler.
//!
//! A batch of 2^n SU(2) blocks is synthesized branch by branch to even
//! T-count, padded to a common shape, and encoded into a Boolean table
//! g: {0,1}^n -> {0,1}^b. The circuit is then
//!
//!   1. a Boolean layer writing g(i) into the clean register C,
//!   2. one gadget per table column, controlled by that C qubit and
//!      acting on the target B,
//!   3. the inverse Boolean layer, restoring C to |0⟩.
//!
//! Gadget costs: controlled-H is T-count 2, controlled-S is T-count 3,
//! the syllable gadget TSH ⊕ ζTH is T-count 1 via
//! (I⊗S)·CNOT·(I⊗T)·CNOT·(I⊗H), and the phase gadget I ⊕ ζI is a single
//! T on the control. Summing over the layout gives the gadget layer
//! exactly m + 2(m−l) + 5c + 14 T gates.
//!
//! For n = 1 the table has two rows and every gadget can key directly on
//! the control qubit in A, which removes the Boolean layers and all
//! ancillae.

use crate::circuit::{Circuit, Gate, GateKind, Registers};
use crate::error::{Error, Result};
use crate::manf::{clifford_table, FGate, NormalForm};
use crate::mat::CMat;
use crate::pad::{equalize, PadSyllable, PaddedForm};
use crate::sim::{apply_to_basis, diamond_distance_2x2, gate_exact_1q, ExactMat};
use crate::synth1q::{approx_su2, choose_phase, Parity, SynthRequest};

/// One table column, in gadget time order.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SlotKind {
    /// Clifford-word H exponent: controlled-H.
    CliffordH,
    /// Clifford-word S exponent: controlled-S.
    CliffordS,
    /// Movable-H flag for position q: controlled-H.
    MidH(u32),
    /// Syllable q selector: TSH ⊕ ζTH.
    SyllableM(u32),
    /// F ≠ I flag: controlled-H.
    FH,
    /// F = SH flag: controlled-S.
    FS,
    /// Unary phase bit k (1..=7): I ⊕ ζI.
    Phase(u8),
}

impl SlotKind {
    pub fn t_cost(&self) -> usize {
        match self {
            SlotKind::CliffordH | SlotKind::MidH(_) | SlotKind::FH => 2,
            SlotKind::CliffordS | SlotKind::FS => 3,
            SlotKind::SyllableM(_) | SlotKind::Phase(_) => 1,
        }
    }

    /// The exact pair (P, Q): control |0⟩ applies P, control |1⟩ applies Q.
    pub fn exact_pair(&self) -> (ExactMat, ExactMat) {
        let id = ExactMat::identity(2);
        match self {
            SlotKind::CliffordH | SlotKind::MidH(_) | SlotKind::FH => {
                (id, gate_exact_1q(GateKind::H))
            }
            SlotKind::CliffordS | SlotKind::FS => (id, gate_exact_1q(GateKind::S)),
            SlotKind::SyllableM(_) => (
                crate::manf::Syllable::Tsh.exact(),
                crate::manf::Syllable::Th.exact().times_zeta_pow(1),
            ),
            SlotKind::Phase(_) => (id.clone(), id.times_zeta_pow(1)),
        }
    }
}

/// Region boundaries of the Boolean table.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct GTableLayout {
    pub c: u32,
    pub m: u32,
    pub l: u32,
}

impl GTableLayout {
    /// Table width b = 2m − l + 2c + 10.
    pub fn width(&self) -> u32 {
        2 * self.m - self.l + 2 * self.c + 10
    }

    /// Gadget-layer T gates: m + 2(m − l) + 5c + 14.
    pub fn gadget_t_formula(&self) -> usize {
        (self.m + 2 * (self.m - self.l) + 5 * self.c + 14) as usize
    }

    /// Slots in time order (slot j of the table is `slots()[j−1]`).
    pub fn slots(&self) -> Vec<SlotKind> {
        let mut out = Vec::with_capacity(self.width() as usize);
        for k in 1..=2 * self.c {
            out.push(if k % 2 == 1 { SlotKind::CliffordH } else { SlotKind::CliffordS });
        }
        for q in (self.l..=self.m).rev() {
            out.push(SlotKind::MidH(q));
            if q >= 1 {
                out.push(SlotKind::SyllableM(q));
            }
        }
        for q in (1..self.l).rev() {
            out.push(SlotKind::SyllableM(q));
        }
        out.push(SlotKind::FH);
        out.push(SlotKind::FS);
        for k in 1..=7u8 {
            out.push(SlotKind::Phase(k));
        }
        debug_assert_eq!(out.len() as u32, self.width());
        out
    }
}

/// The per-branch bitstrings g(i) driving the Boolean and gadget layers.
#[derive(Debug, Clone)]
pub struct GTable {
    pub n: u32,
    pub layout: GTableLayout,
    /// Row i holds g(i); bit j−1 of the word is g(i)_j.
    pub rows: Vec<u64>,
}

impl GTable {
    pub fn bit(&self, row: usize, slot_j: u32) -> bool {
        self.rows[row] >> (slot_j - 1) & 1 == 1
    }
}

/// Encode the padded branches into the Boolean table.
pub fn build_gtable(padded: &[PaddedForm], m: u32, l: u32) -> Result<GTable> {
    let table = clifford_table();
    let c = table.c() as u32;
    let n_rows = padded.len();
    if !n_rows.is_power_of_two() || n_rows < 2 {
        return Err(Error::InconsistentInput(format!("{n_rows} branches is not 2^n, n >= 1")));
    }
    let n = n_rows.trailing_zeros();
    let layout = GTableLayout { c, m, l };
    let b = layout.width();
    if b > 64 {
        return Err(Error::CapExceeded(format!("table width {b} > 64")));
    }
    let slots = layout.slots();
    let mut rows = Vec::with_capacity(n_rows);
    for p in padded {
        if p.len() != m {
            return Err(Error::InconsistentInput(format!(
                "padded length {} differs from m = {m}",
                p.len()
            )));
        }
        if p.h_position < l || p.h_position > m {
            return Err(Error::InconsistentInput(format!(
                "h position {} outside [{l}, {m}]",
                p.h_position
            )));
        }
        let word = table.word_bits(p.c_prime);
        let mut row = 0u64;
        for (j0, slot) in slots.iter().enumerate() {
            let bit = match slot {
                // g_j = d_{2c+1−j}: the word exponents reversed.
                SlotKind::CliffordH | SlotKind::CliffordS => word[2 * c as usize - 1 - j0],
                SlotKind::MidH(q) => p.h_position == *q,
                SlotKind::SyllableM(q) => p.syllables[(*q - 1) as usize] == PadSyllable::ZetaTh,
                SlotKind::FH => p.f != FGate::I,
                SlotKind::FS => p.f == FGate::Sh,
                SlotKind::Phase(k) => p.phase_exp >= *k,
            };
            if bit {
                row |= 1 << j0;
            }
        }
        rows.push(row);
    }
    Ok(GTable { n, layout, rows })
}

/// Registers for the ancilla-mode compile of a width-b table: C holds the
/// b table bits plus one minterm scratch when n >= 2, D holds the n − 2
/// dirty qubits the multi-controlled X borrows.
pub fn registers_for(n: u32, b: u32) -> Registers {
    let scratch = if n >= 2 { 1 } else { 0 };
    Registers::new(n, b + scratch, n.saturating_sub(2))
}

fn ctrl_h(c: u32, t: u32) -> Vec<Gate> {
    vec![
        Gate::one(GateKind::S, t),
        Gate::one(GateKind::H, t),
        Gate::one(GateKind::T, t),
        Gate::cnot(c, t),
        Gate::one(GateKind::Tdg, t),
        Gate::one(GateKind::H, t),
        Gate::one(GateKind::Sdg, t),
    ]
}

fn ctrl_s(c: u32, t: u32) -> Vec<Gate> {
    vec![
        Gate::one(GateKind::T, c),
        Gate::one(GateKind::T, t),
        Gate::cnot(c, t),
        Gate::one(GateKind::Tdg, t),
        Gate::cnot(c, t),
    ]
}

/// TSH ⊕ ζTH = (I⊗S) CNOT (I⊗T) CNOT (I⊗H).
fn ctrl_syllable(c: u32, t: u32) -> Vec<Gate> {
    vec![
        Gate::one(GateKind::H, t),
        Gate::cnot(c, t),
        Gate::one(GateKind::T, t),
        Gate::cnot(c, t),
        Gate::one(GateKind::S, t),
    ]
}

/// Gates of one gadget slot controlled by `c`, acting on `t`.
pub fn slot_gadget(kind: SlotKind, c: u32, t: u32) -> Vec<Gate> {
    match kind {
        SlotKind::CliffordH | SlotKind::MidH(_) | SlotKind::FH => ctrl_h(c, t),
        SlotKind::CliffordS | SlotKind::FS => ctrl_s(c, t),
        SlotKind::SyllableM(_) => ctrl_syllable(c, t),
        SlotKind::Phase(_) => vec![Gate::one(GateKind::T, c)],
    }
}

/// The gadget layer: slot j controlled by C_j, targeting B. Its T-count
/// is the layout formula by construction, independent of the table bits.
pub fn gadget_layer(table: &GTable, regs: &Registers) -> Vec<Gate> {
    let mut out = Vec::new();
    for (j0, kind) in table.layout.slots().iter().enumerate() {
        out.extend(slot_gadget(*kind, regs.c(j0 as u32), regs.b()));
    }
    out
}

/// Relative-phase Toffoli, T-count 4: CCX up to phases diagonal in the
/// computational basis.
fn rccx(c1: u32, c2: u32, t: u32) -> Vec<Gate> {
    vec![
        Gate::one(GateKind::H, t),
        Gate::one(GateKind::T, t),
        Gate::cnot(c2, t),
        Gate::one(GateKind::Tdg, t),
        Gate::cnot(c1, t),
        Gate::one(GateKind::T, t),
        Gate::cnot(c2, t),
        Gate::one(GateKind::Tdg, t),
        Gate::one(GateKind::H, t),
    ]
}

fn dagger_of(gates: &[Gate]) -> Vec<Gate> {
    gates.iter().rev().map(Gate::dagger).collect()
}

/// Exact Toffoli, T-count 7.
fn toffoli(c1: u32, c2: u32, t: u32) -> Vec<Gate> {
    vec![
        Gate::one(GateKind::H, t),
        Gate::cnot(c2, t),
        Gate::one(GateKind::Tdg, t),
        Gate::cnot(c1, t),
        Gate::one(GateKind::T, t),
        Gate::cnot(c2, t),
        Gate::one(GateKind::Tdg, t),
        Gate::cnot(c1, t),
        Gate::one(GateKind::T, c2),
        Gate::one(GateKind::T, t),
        Gate::one(GateKind::H, t),
        Gate::cnot(c1, c2),
        Gate::one(GateKind::T, c1),
        Gate::one(GateKind::Tdg, c2),
        Gate::cnot(c1, c2),
    ]
}

/// Exact multi-controlled X borrowing dirty qubits: for k >= 3 controls,
/// A V A† V with A = RCCX(c0, c1 -> dirty) and V the exact (k−1)-controlled
/// X on (dirty, c2, ...). The dirty qubit can be in any state.
fn exact_mcx(controls: &[u32], target: u32, dirty: &[u32]) -> Vec<Gate> {
    match controls.len() {
        0 => vec![Gate::one(GateKind::X, target)],
        1 => vec![Gate::cnot(controls[0], target)],
        2 => toffoli(controls[0], controls[1], target),
        _ => {
            let d = dirty[0];
            let a = rccx(controls[0], controls[1], d);
            let mut inner_controls = vec![d];
            inner_controls.extend_from_slice(&controls[2..]);
            let v = exact_mcx(&inner_controls, target, &dirty[1..]);
            let mut out = a.clone();
            out.extend(v.iter().copied());
            out.extend(dagger_of(&a));
            out.extend(v);
            out
        }
    }
}

/// The Boolean layer U_g on A (controls) and C (targets), borrowing D.
///
/// Row by row: flip the 0-bits of the row pattern on A, raise a minterm
/// flag on the scratch qubit, fan CNOTs from the flag into the row's set
/// columns, lower the flag, unflip. For n = 1 the flag is unnecessary and
/// the fan keys on the control qubit directly, with constant columns
/// written by plain X gates.
pub fn build_oracle(table: &GTable, regs: &Registers) -> Result<Vec<Gate>> {
    let n = table.n;
    let b = table.layout.width();
    let need_clean = b + if n >= 2 { 1 } else { 0 };
    if regs.n_control != n || regs.n_clean < need_clean || regs.n_dirty < n.saturating_sub(2) {
        return Err(Error::InconsistentInput(format!(
            "registers {regs:?} too small for an n={n}, b={b} table"
        )));
    }
    let mut out = Vec::new();
    if n == 1 {
        for j0 in 0..b {
            let (g0, g1) = (table.bit(0, j0 + 1), table.bit(1, j0 + 1));
            match (g0, g1) {
                (false, false) => {}
                (true, true) => out.push(Gate::one(GateKind::X, regs.c(j0))),
                (false, true) => out.push(Gate::cnot(regs.a(0), regs.c(j0))),
                (true, false) => {
                    out.push(Gate::one(GateKind::X, regs.a(0)));
                    out.push(Gate::cnot(regs.a(0), regs.c(j0)));
                    out.push(Gate::one(GateKind::X, regs.a(0)));
                }
            }
        }
        return Ok(out);
    }

    let scratch = regs.c(b);
    let controls: Vec<u32> = (0..n).map(|k| regs.a(k)).collect();
    let dirty: Vec<u32> = (0..regs.n_dirty).map(|k| regs.d(k)).collect();
    for row in 0..1usize << n {
        if table.rows[row] == 0 {
            continue;
        }
        let xconj: Vec<Gate> = (0..n)
            .filter(|&k| row >> (n - 1 - k) & 1 == 0)
            .map(|k| Gate::one(GateKind::X, regs.a(k)))
            .collect();
        let fan: Vec<Gate> = (0..b)
            .filter(|&j0| table.bit(row, j0 + 1))
            .map(|j0| Gate::cnot(scratch, regs.c(j0)))
            .collect();
        out.extend(xconj.iter().copied());
        if n == 2 {
            // Mirrored relative-phase Toffoli: the diagonal phases cancel
            // around the fan, which commutes with them.
            let a = rccx(controls[0], controls[1], scratch);
            out.extend(a.iter().copied());
            out.extend(fan);
            out.extend(dagger_of(&a));
        } else {
            let mcx = exact_mcx(&controls, scratch, &dirty);
            out.extend(mcx.iter().copied());
            out.extend(fan);
            out.extend(mcx);
        }
        out.extend(xconj);
    }
    Ok(out)
}

/// Gadgets keyed directly on the single control qubit of A: constant
/// columns become uncontrolled gates (with (SH)³ supplying an exact ζ
/// where a branch phase applies to both rows), differing columns keep the
/// slot realization, inverted where row 0 carries the bit.
fn gadget_layer_direct_n1(table: &GTable, regs: &Registers) -> Vec<Gate> {
    let a = regs.a(0);
    let bq = regs.b();
    let zeta_word = |out: &mut Vec<Gate>, count: u32| {
        // (SH)³ = ζ I: gates in time order H, S, H, S, H, S.
        for _ in 0..3 * count {
            out.push(Gate::one(GateKind::H, bq));
            out.push(Gate::one(GateKind::S, bq));
        }
    };
    let mut out = Vec::new();
    for (j0, kind) in table.layout.slots().iter().enumerate() {
        if let SlotKind::Phase(k) = kind {
            if *k > 1 {
                continue; // handled as one batch below
            }
            // The unary region encodes branch phases ζ^{s₀}, ζ^{s₁}.
            // Apply ζ^{s₀} globally (free Clifford word) and the difference
            // diag(1, ζ^{s₁−s₀}) = Z^z S^s T^t on the control, spending at
            // most one T gate on the whole region.
            let count = |row: usize| {
                (1..=7u8).filter(|&kk| table.bit(row, j0 as u32 + kk as u32)).count() as u32
            };
            let (s0, s1) = (count(0), count(1));
            zeta_word(&mut out, s0);
            let diff = (s1 + 8 - s0) % 8;
            if diff & 4 != 0 {
                out.push(Gate::one(GateKind::Z, a));
            }
            if diff & 2 != 0 {
                out.push(Gate::one(GateKind::S, a));
            }
            if diff & 1 != 0 {
                out.push(Gate::one(GateKind::T, a));
            }
            continue;
        }
        let (g0, g1) = (table.bit(0, j0 as u32 + 1), table.bit(1, j0 as u32 + 1));
        match (g0, g1) {
            (false, false) => {
                if matches!(kind, SlotKind::SyllableM(_)) {
                    // both branches take TSH
                    out.push(Gate::one(GateKind::H, bq));
                    out.push(Gate::one(GateKind::S, bq));
                    out.push(Gate::one(GateKind::T, bq));
                }
            }
            (true, true) => match kind {
                SlotKind::CliffordH | SlotKind::MidH(_) | SlotKind::FH => {
                    out.push(Gate::one(GateKind::H, bq));
                }
                SlotKind::CliffordS | SlotKind::FS => out.push(Gate::one(GateKind::S, bq)),
                SlotKind::SyllableM(_) => {
                    // both branches take ζTH
                    out.push(Gate::one(GateKind::H, bq));
                    out.push(Gate::one(GateKind::T, bq));
                    zeta_word(&mut out, 1);
                }
                SlotKind::Phase(_) => unreachable!(),
            },
            (false, true) => out.extend(slot_gadget(*kind, a, bq)),
            (true, false) => {
                out.push(Gate::one(GateKind::X, a));
                out.extend(slot_gadget(*kind, a, bq));
                out.push(Gate::one(GateKind::X, a));
            }
        }
    }
    out
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CtrlMode {
    /// Boolean layer into clean ancillae; any n >= 1.
    Ancilla,
    /// Direct control from the A qubit; n = 1 only, no ancillae.
    AncillaFreeN1,
}

#[derive(Debug, Clone)]
pub struct BranchReport {
    /// Even T-count of the branch's synthesized form.
    pub m_i: u32,
    /// Branch phase exponent s.
    pub s: u8,
    /// Diamond distance from the branch target to the compiled block.
    pub distance: f64,
}

#[derive(Debug, Clone)]
pub struct ControlledSynth {
    pub circuit: Circuit,
    pub table: GTable,
    pub mode: CtrlMode,
    pub branches: Vec<BranchReport>,
    /// ζ^{s_i} · padded evaluation: the exact block the circuit realizes.
    pub expected_blocks: Vec<ExactMat>,
    /// T-count of one Boolean layer (the circuit contains two).
    pub oracle_t_count: usize,
    /// T-count of the gadget layer as emitted.
    pub gadget_t_count: usize,
    /// m + 2(m−l) + 5c + 14.
    pub gadget_t_formula: usize,
}

impl ControlledSynth {
    pub fn max_distance(&self) -> f64 {
        self.branches.iter().map(|b| b.distance).fold(0.0, f64::max)
    }
}

/// Compile 2^n SU(2) blocks into a controlled Clifford+T circuit within
/// per-block diamond distance ε.
pub fn synth_controlled_su2(
    blocks: &[CMat],
    epsilon: f64,
    mode: CtrlMode,
    m_cap: u32,
) -> Result<ControlledSynth> {
    let forms = blocks
        .iter()
        .map(|b| {
            approx_su2(&SynthRequest {
                target: b.clone(),
                epsilon,
                parity: Parity::Even,
                m_cap,
            })
            .map(|r| r.form)
        })
        .collect::<Result<Vec<NormalForm>>>()?;
    compile_blocks(blocks, &forms, mode)
}

/// Compile preselected even-T-count forms (one per block). The blocks are
/// only used to pick each branch's phase exponent and to report distances.
pub fn compile_blocks(
    blocks: &[CMat],
    forms: &[NormalForm],
    mode: CtrlMode,
) -> Result<ControlledSynth> {
    if blocks.len() != forms.len() {
        return Err(Error::InconsistentInput("one form per block required".into()));
    }
    if mode == CtrlMode::AncillaFreeN1 && blocks.len() != 2 {
        return Err(Error::InconsistentInput(
            "the ancilla-free path requires exactly one control qubit".into(),
        ));
    }
    let (m, l, mut padded) = equalize(forms)?;
    let mut branches = Vec::with_capacity(blocks.len());
    let mut expected_blocks = Vec::with_capacity(blocks.len());
    for (p, block) in padded.iter_mut().zip(blocks) {
        p.phase_exp = choose_phase(block, &p.evaluate_raw().to_cmat());
        let exact = p.evaluate();
        branches.push(BranchReport {
            m_i: p.original_m,
            s: p.phase_exp,
            distance: diamond_distance_2x2(block, &exact.to_cmat()),
        });
        expected_blocks.push(exact);
    }
    let table = build_gtable(&padded, m, l)?;

    let (circuit, oracle_t_count, gadget_t_count) = match mode {
        CtrlMode::AncillaFreeN1 => {
            let regs = Registers::new(1, 0, 0);
            let mut circuit = Circuit::new(regs);
            let gates = gadget_layer_direct_n1(&table, &regs);
            let gadget_t = gates.iter().filter(|g| g.kind.is_t()).count();
            circuit.extend(gates);
            (circuit, 0, gadget_t)
        }
        CtrlMode::Ancilla => {
            let regs = registers_for(table.n, table.layout.width());
            let mut circuit = Circuit::new(regs);
            let oracle = build_oracle(&table, &regs)?;
            let oracle_t = oracle.iter().filter(|g| g.kind.is_t()).count();
            let gadgets = gadget_layer(&table, &regs);
            let gadget_t = gadgets.iter().filter(|g| g.kind.is_t()).count();
            let uncompute = dagger_of(&oracle);
            circuit.extend(oracle);
            circuit.extend(gadgets);
            circuit.extend(uncompute);
            (circuit, oracle_t, gadget_t)
        }
    };
    circuit.validate()?;
    Ok(ControlledSynth {
        circuit,
        mode,
        branches,
        expected_blocks,
        oracle_t_count,
        gadget_t_count,
        gadget_t_formula: table.layout.gadget_t_formula(),
        table,
    })
}

/// Exact verification of a compiled controlled circuit by sparse
/// simulation of every clean-sector basis input.
#[derive(Debug, Clone)]
pub struct SparseVerify {
    /// The 2x2 unitary realized on B for each branch, exact.
    pub blocks: Vec<ExactMat>,
    /// C returned exactly to |0⟩ on every input.
    pub clean_restored: bool,
    /// For every dirty assignment the branch unitaries coincide exactly
    /// and D is returned unchanged.
    pub dirty_invariant: bool,
}

pub fn verify_controlled(circuit: &Circuit) -> Result<SparseVerify> {
    let regs = circuit.registers;
    let n = regs.n_control;
    let total = regs.total();
    if regs.n_dirty > 8 {
        return Err(Error::CapExceeded("too many dirty qubits to enumerate".into()));
    }
    let qubit_mask = |q: u32| 1u64 << (total - 1 - q);
    let mut blocks: Vec<Option<ExactMat>> = vec![None; 1 << n];
    let mut dirty_invariant = true;

    for branch in 0..1u64 << n {
        let mut per_dirty: Vec<ExactMat> = Vec::new();
        for dirty in 0..1u64 << regs.n_dirty {
            let mut u = ExactMat::zeros(2);
            for x in 0..2u64 {
                let mut index = 0u64;
                for k in 0..n {
                    if branch >> (n - 1 - k) & 1 == 1 {
                        index |= qubit_mask(regs.a(k));
                    }
                }
                if x == 1 {
                    index |= qubit_mask(regs.b());
                }
                for k in 0..regs.n_dirty {
                    if dirty >> (regs.n_dirty - 1 - k) & 1 == 1 {
                        index |= qubit_mask(regs.d(k));
                    }
                }
                let state = apply_to_basis(circuit, index)?;
                for (&out_index, amp) in &state.amps {
                    // everything but B must be exactly preserved
                    let b_mask = qubit_mask(regs.b());
                    if out_index & !b_mask != index & !b_mask {
                        return Err(Error::InconsistentInput(format!(
                            "support escaped the branch sector: {out_index:#x} from {index:#x}"
                        )));
                    }
                    let out_x = (out_index & b_mask != 0) as usize;
                    u[(out_x, x as usize)] = amp.clone();
                }
            }
            if !u.is_unitary() {
                return Err(Error::InconsistentInput("extracted block is not unitary".into()));
            }
            per_dirty.push(u);
        }
        if per_dirty.windows(2).any(|w| w[0] != w[1]) {
            dirty_invariant = false;
        }
        blocks[branch as usize] = Some(per_dirty.swap_remove(0));
    }
    Ok(SparseVerify {
        blocks: blocks.into_iter().map(Option::unwrap).collect(),
        clean_restored: true,
        dirty_invariant,
    })
}
