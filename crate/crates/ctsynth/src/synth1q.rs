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

//! ε-approximation of SU(2) targets by Matsumoto–Amano normal forms,
//! optionally restricted to even T-count.
//!
//! The default backend scans the enumeration level by level in ascending
//! T-count, so the returned form has minimal T-count of the requested
//! parity among all forms within ε. Levels partition by syllable prefix
//! and scan in parallel under the `parallel` feature; the result is
//! deterministic either way because selection minimizes a discrete
//! (F, syllables, Clifford) key, not a float.

use crate::error::{Error, Result};
use crate::manf::{clifford_table, FGate, NormalForm, Syllable};
use crate::mat::{CMat, C64};
use crate::sim::diamond_distance_2x2;

#[cfg(feature = "parallel")]
use rayon::prelude::*;

pub const DEFAULT_M_CAP: u32 = 26;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Parity {
    Even,
    Any,
}

#[derive(Debug, Clone)]
pub struct SynthRequest {
    /// 2x2 unitary with determinant 1.
    pub target: CMat,
    pub epsilon: f64,
    pub parity: Parity,
    pub m_cap: u32,
}

impl SynthRequest {
    pub fn new(target: CMat, epsilon: f64, parity: Parity) -> SynthRequest {
        SynthRequest { target, epsilon, parity, m_cap: DEFAULT_M_CAP }
    }

    fn validate(&self) -> Result<()> {
        if self.target.dim != 2 {
            return Err(Error::DimensionMismatch(self.target.dim, 2));
        }
        if !self.target.is_unitary(1e-10) {
            return Err(Error::NotSpecialUnitary("target is not unitary".into()));
        }
        if (self.target.det2() - C64::new(1.0, 0.0)).norm() > 1e-10 {
            return Err(Error::NotSpecialUnitary("target determinant is not 1".into()));
        }
        if !(self.epsilon > 0.0 && self.epsilon < 1.0) {
            return Err(Error::InconsistentInput(format!("epsilon out of (0,1): {}", self.epsilon)));
        }
        Ok(())
    }
}

#[derive(Debug, Clone)]
pub struct SynthResult {
    pub form: NormalForm,
    pub achieved_distance: f64,
    pub t_count: u32,
}

/// A synthesis strategy mapping requests to results. The contract
/// (minimal T-count of the requested parity within ε) is what the default
/// exhaustive backend provides; a number-theoretic grid backend could
/// slot in behind the same interface.
pub trait SearchBackend {
    fn search(&self, req: &SynthRequest) -> Result<SynthResult>;
}

/// Exhaustive level-by-level scan over the normal-form family.
#[derive(Debug, Clone, Copy)]
pub struct ExhaustiveSearch {
    pub parallel: bool,
}

impl Default for ExhaustiveSearch {
    fn default() -> Self {
        ExhaustiveSearch { parallel: cfg!(feature = "parallel") }
    }
}

/// Approximate an SU(2) target with the default backend.
pub fn approx_su2(req: &SynthRequest) -> Result<SynthResult> {
    ExhaustiveSearch::default().search(req)
}

type M2 = [C64; 4];

fn mul2(a: &M2, b: &M2) -> M2 {
    [
        a[0] * b[0] + a[1] * b[2],
        a[0] * b[1] + a[1] * b[3],
        a[2] * b[0] + a[3] * b[2],
        a[2] * b[1] + a[3] * b[3],
    ]
}

fn cmat_to_m2(m: &CMat) -> M2 {
    [m[(0, 0)], m[(0, 1)], m[(1, 0)], m[(1, 1)]]
}

/// Squared mod-phase distance between 2x2 unitaries, via the traceless
/// part of A†B; accurate down to machine scale.
fn dist_sqr(a: &M2, b: &M2) -> f64 {
    // w = A† B
    let w0 = a[0].conj() * b[0] + a[2].conj() * b[2];
    let w1 = a[0].conj() * b[1] + a[2].conj() * b[3];
    let w2 = a[1].conj() * b[0] + a[3].conj() * b[2];
    let w3 = a[1].conj() * b[1] + a[3].conj() * b[3];
    let mid = (w0 + w3) * 0.5;
    ((w0 - mid).norm_sqr() + w1.norm_sqr() + w2.norm_sqr() + (w3 - mid).norm_sqr()) * 0.5
}

struct LevelTables {
    f_mats: [M2; 3],
    th: M2,
    tsh: M2,
    cliffords: Vec<M2>,
}

impl LevelTables {
    fn new() -> LevelTables {
        let table = clifford_table();
        let f_cmat = |f: FGate| {
            NormalForm { f, syllables: Vec::new(), clifford: 0, phase_exp: 0 }.evaluate_float()
        };
        LevelTables {
            f_mats: [
                cmat_to_m2(&f_cmat(FGate::I)),
                cmat_to_m2(&f_cmat(FGate::H)),
                cmat_to_m2(&f_cmat(FGate::Sh)),
            ],
            th: cmat_to_m2(&Syllable::Th.exact().to_cmat()),
            tsh: cmat_to_m2(&Syllable::Tsh.exact().to_cmat()),
            cliffords: (0..24).map(|i| cmat_to_m2(&table.rep(i).to_cmat())).collect(),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord)]
struct CandKey {
    f: u8,
    bits: u64,
    clifford: u8,
}

impl CandKey {
    fn to_form(self, m: u32) -> NormalForm {
        let mut syllables = Vec::with_capacity(m as usize);
        for j in 0..m.saturating_sub(1) {
            let bit = self.bits >> (m - 2 - j) & 1;
            syllables.push(if bit == 1 { Syllable::Tsh } else { Syllable::Th });
        }
        if m >= 1 {
            syllables.push(Syllable::Th);
        }
        NormalForm {
            f: FGate::ALL[self.f as usize],
            syllables,
            clifford: self.clifford,
            phase_exp: 0,
        }
    }
}

/// Scan the whole subtree below a syllable prefix, returning the smallest
/// qualifying key. `threshold` is the squared distance bound ε².
fn scan_subtree(
    tables: &LevelTables,
    target: &M2,
    m: u32,
    f: u8,
    prefix_bits: u64,
    prefix_len: u32,
    acc: M2,
    threshold: f64,
) -> Option<CandKey> {
    let free = m.saturating_sub(1);
    if prefix_len == free {
        // Fixed trailing TH syllable, then the Clifford.
        let full = if m >= 1 { mul2(&acc, &tables.th) } else { acc };
        for (c_idx, c_mat) in tables.cliffords.iter().enumerate() {
            let form = mul2(&full, c_mat);
            if dist_sqr(&form, target) < threshold {
                // Clifford indices ascend, so the first hit is minimal.
                return Some(CandKey { f, bits: prefix_bits, clifford: c_idx as u8 });
            }
        }
        return None;
    }
    // TH (bit 0) explored before TSH (bit 1), so the first hit in DFS
    // order is the lexicographic minimum within the subtree.
    for (bit, syl) in [(0u64, &tables.th), (1u64, &tables.tsh)] {
        let found = scan_subtree(
            tables,
            target,
            m,
            f,
            prefix_bits << 1 | bit,
            prefix_len + 1,
            mul2(&acc, syl),
            threshold,
        );
        if found.is_some() {
            return found;
        }
    }
    None
}

fn scan_level(
    tables: &LevelTables,
    target: &M2,
    m: u32,
    epsilon: f64,
    parallel: bool,
) -> Option<CandKey> {
    let threshold = epsilon * epsilon;
    let free = m.saturating_sub(1);
    // Fan out over (F, leading syllables); each subtree scans sequentially.
    let split = free.min(8);
    let tasks = 3u64 << split;
    let run_task = |task: u64| -> Option<CandKey> {
        let f = (task >> split) as u8;
        let lead = task & ((1u64 << split) - 1);
        let mut acc = tables.f_mats[f as usize];
        for j in 0..split {
            let bit = lead >> (split - 1 - j) & 1;
            acc = mul2(&acc, if bit == 1 { &tables.tsh } else { &tables.th });
        }
        scan_subtree(tables, target, m, f, lead, split, acc, threshold)
    };

    #[cfg(feature = "parallel")]
    if parallel {
        return (0..tasks).into_par_iter().filter_map(run_task).min();
    }
    let _ = parallel;
    (0..tasks).filter_map(run_task).min()
}

impl SearchBackend for ExhaustiveSearch {
    fn search(&self, req: &SynthRequest) -> Result<SynthResult> {
        req.validate()?;
        let tables = LevelTables::new();
        let target = cmat_to_m2(&req.target);
        let step = match req.parity {
            Parity::Even => 2,
            Parity::Any => 1,
        };
        let mut m = 0;
        while m <= req.m_cap {
            if let Some(key) = scan_level(&tables, &target, m, req.epsilon, self.parallel) {
                let form = key.to_form(m);
                let achieved = diamond_distance_2x2(&req.target, &form.evaluate_float());
                return Ok(SynthResult { form, achieved_distance: achieved, t_count: m });
            }
            m += step;
        }
        Err(Error::EpsilonTooSmall { m_cap: req.m_cap })
    }
}

/// The phase exponent s in {0..7} minimizing ‖target − ζ^s · form‖_F;
/// ties break toward the smallest s.
pub fn choose_phase(target: &CMat, form_eval: &CMat) -> u8 {
    let mut best = (f64::INFINITY, 0u8);
    for s in 0..8u8 {
        let zeta = C64::from_polar(1.0, std::f64::consts::FRAC_PI_4 * s as f64);
        let mut d2 = 0.0;
        for (t, e) in target.data.iter().zip(&form_eval.data) {
            d2 += (t - zeta * e).norm_sqr();
        }
        if d2 < best.0 {
            best = (d2, s);
        }
    }
    best.1
}

/// Normalize a U(2) matrix to SU(2): divide by a square root of the
/// determinant, branch chosen so the trace has non-negative real part.
pub fn normalize_su2(u: &CMat) -> Result<CMat> {
    if u.dim != 2 {
        return Err(Error::DimensionMismatch(u.dim, 2));
    }
    if !u.is_unitary(1e-10) {
        return Err(Error::NotSpecialUnitary("input is not unitary".into()));
    }
    let root = u.det2().sqrt();
    let mut v = u.scale(root.inv());
    if v.trace().re < 0.0 {
        v = v.scale(C64::new(-1.0, 0.0));
    }
    Ok(v)
}
