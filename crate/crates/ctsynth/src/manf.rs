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

//! Matsumoto–Amano normal forms F (∏ Mᵢ) C with F ∈ {I, H, SH},
//! Mᵢ ∈ {TH, TSH} and C one of the 24 single-qubit Cliffords mod phase.
//!
//! The family enumerated here fixes the last syllable to TH; the TSH
//! variant merges into the trailing Clifford, so this family is exactly
//! one representative per unitary and counts 3·2^{m−1}·24 forms at
//! T-count m ≥ 1.
//!
//! Clifford words are kept in a common alternating shape
//! S^{d₁} H^{e₁} S^{d₂} H^{e₂} … with all exponents in {0, 1} and the
//! number of pairs c minimal over the whole table. One bit per slot is
//! what the controlled-gate compiler's Boolean table consumes, and it is
//! what makes the gadget-layer T-count come out to 5c for this region.

use crate::circuit::GateKind;
use crate::error::{Error, Result};
use crate::lbound::{channel_rep, sde_channel};
use crate::mat::CMat;
use crate::sim::{gate_exact_1q, ExactMat, ExactUnitary};
use std::collections::HashMap;
use std::sync::LazyLock;

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum FGate {
    I,
    H,
    Sh,
}

impl FGate {
    pub const ALL: [FGate; 3] = [FGate::I, FGate::H, FGate::Sh];

    pub fn index(&self) -> u8 {
        match self {
            FGate::I => 0,
            FGate::H => 1,
            FGate::Sh => 2,
        }
    }

    fn exact(&self) -> ExactMat {
        match self {
            FGate::I => ExactMat::identity(2),
            FGate::H => gate_exact_1q(GateKind::H),
            FGate::Sh => gate_exact_1q(GateKind::S).mul(&gate_exact_1q(GateKind::H)),
        }
    }

    /// Letters of the matrix word, leftmost factor first.
    pub fn letters(&self) -> &'static [GateKind] {
        match self {
            FGate::I => &[],
            FGate::H => &[GateKind::H],
            FGate::Sh => &[GateKind::S, GateKind::H],
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Syllable {
    Th,
    Tsh,
}

impl Syllable {
    pub fn exact(&self) -> ExactMat {
        match self {
            Syllable::Th => gate_exact_1q(GateKind::T).mul(&gate_exact_1q(GateKind::H)),
            Syllable::Tsh => gate_exact_1q(GateKind::T)
                .mul(&gate_exact_1q(GateKind::S))
                .mul(&gate_exact_1q(GateKind::H)),
        }
    }

    pub fn letters(&self) -> &'static [GateKind] {
        match self {
            Syllable::Th => &[GateKind::T, GateKind::H],
            Syllable::Tsh => &[GateKind::T, GateKind::S, GateKind::H],
        }
    }
}

/// The 24 single-qubit Cliffords mod phase, with canonical words in the
/// common alternating binary shape, and an exact mod-phase lookup.
pub struct CliffordTable {
    /// Exact evaluation of each canonical word; index order is the word's
    /// shape bits read as an integer.
    reps: Vec<ExactMat>,
    /// Shape bits [d₁, e₁, d₂, e₂, …] per entry, length 2c.
    words: Vec<Vec<bool>>,
    /// Number of (S, H) slot pairs shared by all words.
    c: usize,
    lookup: HashMap<Vec<u8>, (u8, u8)>,
}

impl CliffordTable {
    pub fn len(&self) -> usize {
        self.reps.len()
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn c(&self) -> usize {
        self.c
    }

    pub fn rep(&self, idx: u8) -> &ExactMat {
        &self.reps[idx as usize]
    }

    /// Shape bits [d₁, e₁, …, d_c, e_c] of the canonical word.
    pub fn word_bits(&self, idx: u8) -> &[bool] {
        &self.words[idx as usize]
    }

    /// Matrix-word letters of the canonical word, leftmost factor first.
    pub fn word_letters(&self, idx: u8) -> Vec<GateKind> {
        let mut out = Vec::new();
        for (slot, &bit) in self.words[idx as usize].iter().enumerate() {
            if bit {
                out.push(if slot % 2 == 0 { GateKind::S } else { GateKind::H });
            }
        }
        out
    }

    /// If `m` is exactly ζ^phase · rep(idx) for some Clifford index and
    /// phase exponent, return them.
    pub fn find(&self, m: &ExactMat) -> Option<(u8, u8)> {
        let (bytes, rot_m) = m.phase_canonical_bytes();
        let &(idx, rot_r) = self.lookup.get(&bytes)?;
        Some((idx, (rot_r + 8 - rot_m) % 8))
    }
}

fn shape_word_eval(bits: &[bool]) -> ExactMat {
    let s = gate_exact_1q(GateKind::S);
    let h = gate_exact_1q(GateKind::H);
    let mut m = ExactMat::identity(2);
    for (slot, &bit) in bits.iter().enumerate() {
        if bit {
            m = m.mul(if slot % 2 == 0 { &s } else { &h });
        }
    }
    m
}

fn build_clifford_table() -> CliffordTable {
    // Closure of <S, H> mod phase, to know the class count and keys.
    let s = gate_exact_1q(GateKind::S);
    let h = gate_exact_1q(GateKind::H);
    let mut classes: HashMap<Vec<u8>, ExactMat> = HashMap::new();
    let mut queue = vec![ExactMat::identity(2)];
    while let Some(m) = queue.pop() {
        let (key, _) = m.phase_canonical_bytes();
        if classes.contains_key(&key) {
            continue;
        }
        queue.push(m.mul(&s));
        queue.push(m.mul(&h));
        classes.insert(key, m);
    }
    let n_classes = classes.len();
    assert_eq!(n_classes, 24, "closure of <S, H> mod phase");

    // Smallest c whose alternating binary shape covers every class; keep
    // the lexicographically smallest word per class.
    for c in 1..=8usize {
        let mut found: HashMap<Vec<u8>, Vec<bool>> = HashMap::new();
        for code in 0..1usize << (2 * c) {
            let bits: Vec<bool> = (0..2 * c).map(|i| code >> i & 1 == 1).collect();
            let (key, _) = shape_word_eval(&bits).phase_canonical_bytes();
            match found.get(&key) {
                Some(best) if *best <= bits => {}
                _ => {
                    found.insert(key, bits);
                }
            }
        }
        if found.len() == n_classes {
            let mut words: Vec<Vec<bool>> = found.into_values().collect();
            words.sort();
            let mut reps = Vec::with_capacity(n_classes);
            let mut lookup = HashMap::new();
            for (idx, bits) in words.iter().enumerate() {
                let rep = shape_word_eval(bits);
                let (key, rot) = rep.phase_canonical_bytes();
                lookup.insert(key, (idx as u8, rot));
                reps.push(rep);
            }
            return CliffordTable { reps, words, c, lookup };
        }
    }
    unreachable!("no common alternating shape up to c = 8");
}

static CLIFFORD_TABLE: LazyLock<CliffordTable> = LazyLock::new(build_clifford_table);

/// The canonical table of the 24 single-qubit Cliffords mod phase.
pub fn clifford_table() -> &'static CliffordTable {
    &CLIFFORD_TABLE
}

/// A Matsumoto–Amano normal form with an explicit global phase ζ^s, so
/// that `evaluate` is exact, not just exact mod phase.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct NormalForm {
    pub f: FGate,
    pub syllables: Vec<Syllable>,
    pub clifford: u8,
    pub phase_exp: u8,
}

impl NormalForm {
    pub fn identity() -> NormalForm {
        let idx = clifford_table()
            .find(&ExactMat::identity(2))
            .expect("identity is a Clifford")
            .0;
        NormalForm { f: FGate::I, syllables: Vec::new(), clifford: idx, phase_exp: 0 }
    }

    pub fn t_count(&self) -> u32 {
        self.syllables.len() as u32
    }

    /// ζ^{phase_exp} · F · M₁ ⋯ M_m · C, exactly.
    pub fn evaluate(&self) -> ExactMat {
        let table = clifford_table();
        let mut m = self.f.exact();
        for syl in &self.syllables {
            m = m.mul(&syl.exact());
        }
        m = m.mul(table.rep(self.clifford));
        m.times_zeta_pow(self.phase_exp as i32)
    }

    pub fn evaluate_float(&self) -> CMat {
        self.evaluate().to_cmat()
    }

    /// The form as a matrix word (leftmost factor first): F letters, the
    /// syllable letters, then the canonical Clifford word letters.
    pub fn to_matrix_word(&self) -> Vec<GateKind> {
        let table = clifford_table();
        let mut out: Vec<GateKind> = self.f.letters().to_vec();
        for syl in &self.syllables {
            out.extend_from_slice(syl.letters());
        }
        out.extend(table.word_letters(self.clifford));
        out
    }

    /// Deterministic ordering key: (F, syllables lexicographic, Clifford).
    pub fn order_key(&self) -> (u8, Vec<Syllable>, u8) {
        (self.f.index(), self.syllables.clone(), self.clifford)
    }

    /// Circuit gates realizing the form (mod its stored phase) on one
    /// qubit: the matrix word reversed into time order.
    pub fn to_gates(&self, qubit: u32) -> Vec<crate::circuit::Gate> {
        self.to_matrix_word()
            .iter()
            .rev()
            .map(|&k| crate::circuit::Gate::one(k, qubit))
            .collect()
    }
}

/// Number of distinct normal forms at T-count m: 24 at m = 0, otherwise
/// 3·2^{m−1}·24.
pub fn family_count(m: u32) -> u64 {
    if m == 0 {
        24
    } else {
        3 * (1u64 << (m - 1)) * 24
    }
}

/// The form with the given index in the (F, syllable bits, Clifford)
/// ordering. Index layout: ((f · 2^{m−1} + bits) · 24 + c).
pub fn form_from_index(m: u32, idx: u64) -> NormalForm {
    debug_assert!(idx < family_count(m));
    let clifford = (idx % 24) as u8;
    let rest = idx / 24;
    if m == 0 {
        return NormalForm { f: FGate::I, syllables: Vec::new(), clifford, phase_exp: 0 };
    }
    let bits = rest & ((1u64 << (m - 1)) - 1);
    let f = FGate::ALL[(rest >> (m - 1)) as usize];
    let mut syllables = Vec::with_capacity(m as usize);
    for j in 0..m - 1 {
        // bit (m−2−j) holds syllable j+1 so that integer order is
        // lexicographic in the syllable sequence
        let bit = bits >> (m - 2 - j) & 1;
        syllables.push(if bit == 1 { Syllable::Tsh } else { Syllable::Th });
    }
    syllables.push(Syllable::Th);
    NormalForm { f, syllables, clifford, phase_exp: 0 }
}

/// All normal forms with T-count m, each exactly distinct as a unitary
/// mod phase.
pub fn enumerate(m: u32) -> impl Iterator<Item = NormalForm> {
    (0..family_count(m)).map(move |i| form_from_index(m, i))
}

/// Reduce a single-qubit matrix word over {H, S, S†, T, T†} (leftmost
/// factor first) to its normal form. The returned form evaluates exactly,
/// including the global phase, to the input product; its T-count is
/// minimal by uniqueness of the normal form.
pub fn reduce_word(gates: &[GateKind]) -> Result<NormalForm> {
    let mut u = ExactMat::identity(2);
    let mut t_in = 0u32;
    for &g in gates {
        if g.is_two_qubit() {
            return Err(Error::InconsistentInput(format!("not a single-qubit gate: {g:?}")));
        }
        if g.is_t() {
            t_in += 1;
        }
        u = u.mul(&gate_exact_1q(g));
    }
    reduce_exact(&u, t_in)
}

/// Reduce an exact single-qubit Clifford+T unitary to its normal form.
/// `t_budget` is any known upper bound on the T-count.
pub fn reduce_exact(u: &ExactMat, t_budget: u32) -> Result<NormalForm> {
    let table = clifford_table();
    let m_min = sde_channel(&channel_rep(&ExactUnitary { n_qubits: 1, mat: u.clone() })?);
    for m in m_min..=m_min.max(t_budget) {
        if let Some(form) = find_form_at_level(u, m, table) {
            return Ok(form);
        }
    }
    Err(Error::InconsistentInput(
        "matrix is not a Clifford+T unitary within the T budget".into(),
    ))
}

fn find_form_at_level(u: &ExactMat, m: u32, table: &CliffordTable) -> Option<NormalForm> {
    if m == 0 {
        return table.find(u).map(|(clifford, phase_exp)| NormalForm {
            f: FGate::I,
            syllables: Vec::new(),
            clifford,
            phase_exp,
        });
    }
    let th = Syllable::Th.exact();
    let tsh = Syllable::Tsh.exact();
    for f in FGate::ALL {
        let mut syllables = Vec::with_capacity(m as usize);
        if let Some(found) =
            dfs_syllables(&f.exact(), u, m, &mut syllables, &th, &tsh, table)
        {
            return Some(NormalForm {
                f,
                syllables: found.0,
                clifford: found.1,
                phase_exp: found.2,
            });
        }
    }
    None
}

fn dfs_syllables(
    prefix: &ExactMat,
    u: &ExactMat,
    m: u32,
    syllables: &mut Vec<Syllable>,
    th: &ExactMat,
    tsh: &ExactMat,
    table: &CliffordTable,
) -> Option<(Vec<Syllable>, u8, u8)> {
    if syllables.len() as u32 == m - 1 {
        // Last syllable fixed to TH; the Clifford absorbs the rest.
        let full = prefix.mul(th);
        let cand = full.adjoint().mul(u);
        if let Some((clifford, phase_exp)) = table.find(&cand) {
            let mut result = syllables.clone();
            result.push(Syllable::Th);
            return Some((result, clifford, phase_exp));
        }
        return None;
    }
    for (syl, mat) in [(Syllable::Th, th), (Syllable::Tsh, tsh)] {
        syllables.push(syl);
        let next = prefix.mul(mat);
        if let Some(found) = dfs_syllables(&next, u, m, syllables, th, tsh, table) {
            return Some(found);
        }
        syllables.pop();
    }
    None
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::collections::HashSet;

    #[test]
    fn table_has_24_entries_with_common_shape() {
        let table = clifford_table();
        assert_eq!(table.len(), 24);
        // every word fits the common alternating binary shape
        for idx in 0..24u8 {
            assert_eq!(table.word_bits(idx).len(), 2 * table.c());
            // word evaluation is the stored representative, exactly
            assert_eq!(&shape_word_eval(table.word_bits(idx)), table.rep(idx));
        }
        // identity has the all-zero word and sits at index 0
        assert!(table.word_bits(0).iter().all(|&b| !b));
        assert!(table.rep(0).is_identity());
    }

    #[test]
    fn reported_c_is_minimal() {
        let table = clifford_table();
        // one less pair must fail to cover all 24 classes
        let c = table.c();
        assert!(c >= 2);
        let mut covered = HashSet::new();
        for code in 0..1usize << (2 * (c - 1)) {
            let bits: Vec<bool> = (0..2 * (c - 1)).map(|i| code >> i & 1 == 1).collect();
            covered.insert(shape_word_eval(&bits).phase_canonical_bytes().0);
        }
        assert!(covered.len() < 24);
    }

    #[test]
    fn find_recovers_phase() {
        let table = clifford_table();
        for idx in [0u8, 3, 11, 23] {
            for phase in 0..8u8 {
                let m = table.rep(idx).times_zeta_pow(phase as i32);
                assert_eq!(table.find(&m), Some((idx, phase)));
            }
        }
        // T is not a Clifford
        assert_eq!(table.find(&gate_exact_1q(GateKind::T)), None);
    }

    #[test]
    fn enumerate_counts() {
        assert_eq!(enumerate(0).count() as u64, 24);
        assert_eq!(enumerate(1).count() as u64, 72);
        assert_eq!(enumerate(4).count() as u64, family_count(4));
    }

    #[test]
    fn forms_distinct_mod_phase_and_minimal_up_to_4() {
        // Uniqueness: all forms with T-count <= 4 are pairwise distinct as
        // unitaries mod phase, and no form collides with a lower level.
        let mut seen = HashSet::new();
        for m in 0..=4u32 {
            let mut level = 0u64;
            for form in enumerate(m) {
                let key = form.evaluate().phase_canonical_bytes().0;
                assert!(seen.insert(key), "collision at m={m}");
                level += 1;
            }
            assert_eq!(level, family_count(m));
        }
    }

    #[test]
    fn reduce_tt_is_clifford_only() {
        let form = reduce_word(&[GateKind::T, GateKind::T]).unwrap();
        assert_eq!(form.t_count(), 0);
        assert_eq!(form.evaluate(), gate_exact_1q(GateKind::S));
    }

    #[test]
    fn reduce_single_t_has_one_syllable() {
        let form = reduce_word(&[GateKind::T]).unwrap();
        assert_eq!(form.t_count(), 1);
        assert_eq!(form.evaluate(), gate_exact_1q(GateKind::T));
        // exhaustive check that no 0-syllable form matches
        assert!(find_form_at_level(&gate_exact_1q(GateKind::T), 0, clifford_table()).is_none());
    }

    #[test]
    fn reduce_hththt_has_three_syllables() {
        let word = [GateKind::H, GateKind::T, GateKind::H, GateKind::T, GateKind::H, GateKind::T];
        let form = reduce_word(&word).unwrap();
        assert_eq!(form.t_count(), 3);
        let mut u = ExactMat::identity(2);
        for g in word {
            u = u.mul(&gate_exact_1q(g));
        }
        assert_eq!(form.evaluate(), u);
        // compare against enumeration: some form with <= 3 syllables matches
        // mod phase, none with fewer
        for m in 0..3u32 {
            assert!(
                find_form_at_level(&u, m, clifford_table()).is_none(),
                "unexpected match at m={m}"
            );
        }
    }

    #[test]
    fn reduce_handles_inverses_exactly() {
        let word = [GateKind::Tdg, GateKind::H, GateKind::Sdg, GateKind::T, GateKind::H];
        let form = reduce_word(&word).unwrap();
        let mut u = ExactMat::identity(2);
        for g in word {
            u = u.mul(&gate_exact_1q(g));
        }
        assert_eq!(form.evaluate(), u);
    }

    #[test]
    fn round_trip_preserves_enumerated_forms() {
        for m in 0..=3u32 {
            for (i, form) in enumerate(m).enumerate() {
                if i % 7 != 0 {
                    continue; // sample the level
                }
                let back = reduce_word(&form.to_matrix_word()).unwrap();
                assert_eq!(back, form);
            }
        }
    }

    #[test]
    fn level_three_forms_have_channel_sde_three() {
        for (i, form) in enumerate(3).enumerate() {
            if i % 17 != 0 {
                continue;
            }
            let u = ExactUnitary { n_qubits: 1, mat: form.evaluate() };
            assert_eq!(sde_channel(&channel_rep(&u).unwrap()), 3);
        }
    }
}
