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

//! Acceptance suite: one test per criterion, each printing a PASS/FAIL
//! line (visible with `cargo test --test acceptance -- --nocapture`).

use ctsynth::apps::{
    exp_pauli2, so6_rep, synth_controlled_u2, synth_su4, u2_trace_distances, PAULI_PLANE_TABLE,
};
use ctsynth::circuit::{Circuit, Gate, GateKind, Registers};
use ctsynth::ctrl::{
    gadget_layer, registers_for, slot_gadget, synth_controlled_su2, verify_controlled,
    ControlledSynth, CtrlMode, SlotKind,
};
use ctsynth::lbound::{channel_rep, lower_bound_check, sde_channel};
use ctsynth::manf::{enumerate, family_count, form_from_index};
use ctsynth::mat::{CMat, C64};
use ctsynth::pad::pad_to;
use ctsynth::sample::{haar_su2, haar_su4, haar_u2, seeded_rng};
use ctsynth::sim::{
    block_diagonal_extract, diamond_distance_2x2, exact_simulate, gate_exact_1q, ExactMat,
    ExactUnitary,
};
use ctsynth::synth1q::{approx_su2, Parity, SynthRequest};
use rand::Rng;
use std::time::Instant;

/// Run a fallible check over a batch, collecting failure messages; fans
/// out over rayon when the crate's parallel feature is on.
fn check_all<T, F>(items: &[T], f: F) -> Vec<String>
where
    T: Sync,
    F: Fn(&T) -> Result<(), String> + Sync,
{
    #[cfg(feature = "parallel")]
    {
        use rayon::prelude::*;
        items.par_iter().filter_map(|t| f(t).err()).collect()
    }
    #[cfg(not(feature = "parallel"))]
    {
        items.iter().filter_map(|t| f(t).err()).collect()
    }
}

fn report(criterion: u32, name: &str, started: Instant, pass: bool, detail: &str) {
    println!(
        "acceptance {criterion} ({name}): {} [{:.1}s] {detail}",
        if pass { "PASS" } else { "FAIL" },
        started.elapsed().as_secs_f64()
    );
    assert!(pass, "criterion {criterion} failed: {detail}");
}

fn word(kinds: &[GateKind]) -> ExactMat {
    let mut m = ExactMat::identity(2);
    for &k in kinds {
        m = m.mul(&gate_exact_1q(k));
    }
    m
}

/// Criterion 1: unpadding identities, the TSH ⊕ ζTH and T ⊗ I identities,
/// and the controlled-H / controlled-S realizations, all exact over the
/// ring and at the advertised T-counts.
#[test]
fn criterion_1_exact_identities() {
    let started = Instant::now();
    use GateKind::{H, S, T, X, Z};
    let mut ok = true;
    let mut detail = String::new();

    ok &= word(&[T, H]).adjoint() == word(&[H, T, S, H, H, Z]);
    ok &= word(&[T, H, T, H]).adjoint() == word(&[H, T, S, H, T, H, H, X]).times_zeta_pow(-1);
    ok &= word(&[T, H, T, H, T, H]).adjoint()
        == word(&[H, T, S, H, T, H, T, S, H, H]).times_zeta_pow(-1);
    if !ok {
        detail.push_str("unpadding identity failed; ");
    }

    let regs = Registers::new(1, 0, 0);
    let build = |gates: Vec<Gate>| {
        let mut c = Circuit::new(regs);
        c.extend(gates);
        c
    };

    // TSH ⊕ ζTH = (I⊗S) CNOT (I⊗T) CNOT (I⊗H) at T-count 1.
    let m_circ = build(slot_gadget(SlotKind::SyllableM(1), 0, 1));
    let tsh = word(&[T, S, H]);
    let zth = word(&[T, H]).times_zeta_pow(1);
    ok &= exact_simulate(&m_circ).unwrap().mat == ExactMat::block_diag2(&[tsh, zth])
        && m_circ.t_count() == 1;

    // I ⊕ ζI = T ⊗ I at T-count 1.
    let phase_circ = build(slot_gadget(SlotKind::Phase(1), 0, 1));
    ok &= exact_simulate(&phase_circ).unwrap().mat
        == gate_exact_1q(T).kron(&ExactMat::identity(2))
        && phase_circ.t_count() == 1;

    // Controlled-H at T-count 2, controlled-S at T-count 3, exact.
    let ch = build(slot_gadget(SlotKind::CliffordH, 0, 1));
    ok &= exact_simulate(&ch).unwrap().mat
        == ExactMat::block_diag2(&[ExactMat::identity(2), gate_exact_1q(H)])
        && ch.t_count() == 2;
    let cs = build(slot_gadget(SlotKind::CliffordS, 0, 1));
    ok &= exact_simulate(&cs).unwrap().mat
        == ExactMat::block_diag2(&[ExactMat::identity(2), gate_exact_1q(S)])
        && cs.t_count() == 3;

    report(1, "exact identities", started, ok, &detail);
}

/// Criterion 2: padding 200 random even-T-count forms to random larger
/// even lengths m <= 20 is exact up to the recorded ζ power.
#[test]
fn criterion_2_padding_exactness() {
    let started = Instant::now();
    let mut rng = seeded_rng(20_002);
    let cases: Vec<(u32, u64, u32)> = (0..200)
        .map(|_| {
            let mi = 2 * rng.random_range(0..=7u32);
            let idx = rng.random_range(0..family_count(mi));
            let m = mi + 2 * rng.random_range(0..=(20 - mi) / 2);
            (mi, idx, m)
        })
        .collect();
    let failures = check_all(&cases, |&(mi, idx, m)| {
        let form = form_from_index(mi, idx);
        let padded = pad_to(&form, m).map_err(|e| e.to_string())?;
        if padded.evaluate_raw() == &form.evaluate().times_zeta_pow(padded.phase_adjust as i32) {
            Ok(())
        } else {
            Err(format!("inexact padding at m_i={mi}, m={m}"))
        }
    });
    report(
        2,
        "padding exactness",
        started,
        failures.is_empty(),
        &format!("200 forms, m <= 20; {:?}", failures.first()),
    );
}

fn criterion3_instances() -> Vec<(f64, [CMat; 2])> {
    let mut rng = seeded_rng(30_003);
    let mut out = Vec::new();
    for &eps in &[0.2, 0.1, 0.05] {
        for _ in 0..50 {
            out.push((eps, [haar_su2(&mut rng), haar_su2(&mut rng)]));
        }
    }
    out
}

fn compile_c3(eps: f64, blocks: &[CMat; 2]) -> ControlledSynth {
    synth_controlled_su2(blocks, eps, CtrlMode::AncillaFreeN1, 26).unwrap()
}

/// Criterion 3: ancilla-free two-qubit compiles for 50 Haar pairs at each
/// ε in {0.2, 0.1, 0.05}: the exact block-diagonal form exists, per-block
/// diamond distance stays below ε, and the gadget layer of the same table
/// costs exactly m + 2(m−l) + 5c + 14 T gates.
#[test]
fn criterion_3_theorem2_end_to_end() {
    let started = Instant::now();
    let instances = criterion3_instances();
    let failures = check_all(&instances, |(eps, blocks)| {
        let synth = compile_c3(*eps, blocks);
        let u = exact_simulate(&synth.circuit).map_err(|e| e.to_string())?;
        let got = block_diagonal_extract(&u, 1).map_err(|e| e.to_string())?;
        if got != synth.expected_blocks {
            return Err("blocks differ from expected".into());
        }
        for (target, block) in blocks.iter().zip(&got) {
            let d = diamond_distance_2x2(target, &block.to_cmat());
            if d >= *eps {
                return Err(format!("block distance {d} >= {eps}"));
            }
        }
        let regs = registers_for(synth.table.n, synth.table.layout.width());
        let t = gadget_layer(&synth.table, &regs).iter().filter(|g| g.kind.is_t()).count();
        if t != synth.gadget_t_formula {
            return Err(format!("gadget T {t} != formula {}", synth.gadget_t_formula));
        }
        Ok(())
    });
    report(
        3,
        "two-qubit end to end",
        started,
        failures.is_empty(),
        &format!("150 instances; {:?}", failures.first()),
    );
}

/// Criterion 4: clean-ancilla compiles at n = 2 and n = 3, ε = 0.1: the
/// clean register returns exactly to |0⟩, the dirty register factorizes
/// exactly, and every block lands within ε.
#[test]
fn criterion_4_theorem1_end_to_end() {
    let started = Instant::now();
    let mut rng = seeded_rng(40_004);
    let mut cases = Vec::new();
    for n in [2u32, 3] {
        for _ in 0..10 {
            let blocks: Vec<CMat> = (0..1usize << n).map(|_| haar_su2(&mut rng)).collect();
            cases.push(blocks);
        }
    }
    let failures = check_all(&cases, |blocks| {
        let synth =
            synth_controlled_su2(blocks, 0.1, CtrlMode::Ancilla, 26).map_err(|e| e.to_string())?;
        let verify = verify_controlled(&synth.circuit).map_err(|e| e.to_string())?;
        if !verify.clean_restored || !verify.dirty_invariant {
            return Err("ancilla contract violated".into());
        }
        if verify.blocks != synth.expected_blocks {
            return Err("simulated blocks differ from expected".into());
        }
        for (target, block) in blocks.iter().zip(&verify.blocks) {
            let d = diamond_distance_2x2(target, &block.to_cmat());
            if d >= 0.1 {
                return Err(format!("block distance {d}"));
            }
        }
        Ok(())
    });
    report(
        4,
        "multi-control end to end",
        started,
        failures.is_empty(),
        &format!("20 instances; {:?}", failures.first()),
    );
}

/// Criterion 5: the T-count lower-bound chain holds on every criterion-3
/// circuit, and sde(channel rep) equals the T-count exactly on all
/// enumerated normal forms with m <= 8.
#[test]
fn criterion_5_lower_bound() {
    let started = Instant::now();
    let instances = criterion3_instances();
    let chain_failures = check_all(&instances, |(eps, blocks)| {
        let synth = compile_c3(*eps, blocks);
        let rep = lower_bound_check(&synth.circuit).map_err(|e| e.to_string())?;
        if rep.chain_holds() && rep.extraction_consistent {
            Ok(())
        } else {
            Err(format!("chain violated: t={} sde={}", rep.t_count, rep.sde_full))
        }
    });

    let mut form_count = 0u64;
    let mut sde_failures = Vec::new();
    for m in 0..=8u32 {
        let indices: Vec<u64> = (0..family_count(m)).collect();
        form_count += indices.len() as u64;
        sde_failures.extend(check_all(&indices, |&idx| {
            let form = form_from_index(m, idx);
            let u = ExactUnitary { n_qubits: 1, mat: form.evaluate() };
            let got = sde_channel(&channel_rep(&u).map_err(|e| e.to_string())?);
            if got == m {
                Ok(())
            } else {
                Err(format!("sde {got} != m {m} at index {idx}"))
            }
        }));
    }
    let pass = chain_failures.is_empty() && sde_failures.is_empty();
    report(
        5,
        "sde lower bound",
        started,
        pass,
        &format!(
            "150 circuits + {form_count} forms; {:?}",
            chain_failures.first().or(sde_failures.first())
        ),
    );
}

/// Criterion 6: over 100 Haar targets, the median minimal even T-count is
/// nondecreasing in 1/ε across ε in {0.3, 0.15, 0.08} and bounded by
/// 3·log₂(1/ε) + 12 at every ε (the paper's leading coefficient with a
/// desk-scale slack constant).
#[test]
fn criterion_6_scaling() {
    let started = Instant::now();
    let mut rng = seeded_rng(60_006);
    let targets: Vec<CMat> = (0..100).map(|_| haar_su2(&mut rng)).collect();
    let mut medians = Vec::new();
    let mut ok = true;
    let mut detail = String::new();
    for &eps in &[0.3, 0.15, 0.08] {
        let mut counts: Vec<u32> = targets
            .iter()
            .map(|t| {
                approx_su2(&SynthRequest {
                    target: t.clone(),
                    epsilon: eps,
                    parity: Parity::Even,
                    m_cap: 18,
                })
                .map(|r| r.t_count)
                .unwrap_or(u32::MAX)
            })
            .collect();
        if counts.contains(&u32::MAX) {
            ok = false;
            detail.push_str("synthesis failed at the cap; ");
        }
        counts.sort_unstable();
        let median = (counts[49] + counts[50]) as f64 / 2.0;
        let bound = 3.0 * (1.0 / eps).log2() + 12.0;
        if median > bound {
            ok = false;
            detail.push_str(&format!("median {median} > bound {bound:.2} at eps {eps}; "));
        }
        medians.push(median);
    }
    if !(medians[0] <= medians[1] && medians[1] <= medians[2]) {
        ok = false;
        detail.push_str("medians not nondecreasing; ");
    }
    report(6, "T-count scaling", started, ok, &format!("medians {medians:?} {detail}"));
}

/// Criterion 7: ten Haar SU(4) targets at ε = 0.2: every stage lands
/// within ε/4, the telescoping chain steps stay within ε/4, the final
/// distance is below ε, and the total T-count is at most 9·log₂(1/ε) + 60.
#[test]
fn criterion_7_su4_pipeline() {
    let started = Instant::now();
    let mut rng = seeded_rng(70_007);
    let eps = 0.2f64;
    let t_bound = 9.0 * (1.0 / eps).log2() + 60.0;
    let targets: Vec<CMat> = (0..10).map(|_| haar_su4(&mut rng)).collect();
    let failures = check_all(&targets, |u| {
        let s = synth_su4(u, eps, 26).map_err(|e| e.to_string())?;
        for d in s.stage_distances {
            if d >= eps / 4.0 {
                return Err(format!("stage distance {d}"));
            }
        }
        for d in s.chain_distances {
            if d >= eps / 4.0 + 1e-9 {
                return Err(format!("chain distance {d}"));
            }
        }
        if s.final_distance >= eps {
            return Err(format!("final distance {}", s.final_distance));
        }
        if (s.t_count() as f64) > t_bound {
            return Err(format!("T-count {} > {t_bound:.1}", s.t_count()));
        }
        Ok(())
    });
    report(
        7,
        "SU(4) pipeline",
        started,
        failures.is_empty(),
        &format!("10 targets, T bound {t_bound:.1}; {:?}", failures.first()),
    );
}

/// Criterion 8: controlled-U(2) synthesis at n = 1, 2, ε = 0.1: after
/// tracing out the ancillae, the trace distance to the target output is
/// below ε on 50 random pure inputs per target.
#[test]
fn criterion_8_u2_channel() {
    let started = Instant::now();
    let mut rng = seeded_rng(80_008);
    let mut ok = true;
    let mut detail = String::new();
    for n in [1u32, 2] {
        for _ in 0..5 {
            let blocks: Vec<CMat> = (0..1usize << n).map(|_| haar_u2(&mut rng)).collect();
            let synth = synth_controlled_u2(&blocks, 0.1, 26).unwrap();
            let dim = 1usize << (n + 1);
            let inputs: Vec<Vec<C64>> = (0..50)
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
            let dists = u2_trace_distances(&synth.circuit, synth.anc, &blocks, &inputs).unwrap();
            let worst = dists.iter().copied().fold(0.0, f64::max);
            if worst >= 0.1 {
                ok = false;
                detail.push_str(&format!("n={n}: trace distance {worst}; "));
            }
        }
    }
    report(8, "controlled U(2) channel", started, ok, &detail);
}

/// Criterion 9: the calibrated SO(6) representation reproduces all 15
/// plane assignments and is a homomorphism to 1e-9 on 100 random pairs.
#[test]
fn criterion_9_so6_table() {
    let started = Instant::now();
    let mut ok = true;
    let mut detail = String::new();
    for ((i, j), plane) in PAULI_PLANE_TABLE {
        let r = so6_rep(&exp_pauli2(i, j, 0.23)).unwrap();
        let (a, b) = (plane.0 - 1, plane.1 - 1);
        for row in 0..6 {
            for col in 0..6 {
                let in_plane = (row == a || row == b) && (col == a || col == b);
                let want = if row == col { 1.0 } else { 0.0 };
                if !in_plane && (r.0[row][col] - want).abs() > 1e-9 {
                    ok = false;
                    detail.push_str(&format!("pauli ({i},{j}) leaks; "));
                }
            }
        }
    }
    let mut rng = seeded_rng(90_009);
    let mut worst: f64 = 0.0;
    for _ in 0..100 {
        let u = haar_su4(&mut rng);
        let v = haar_su4(&mut rng);
        let lhs = so6_rep(&u.mul(&v)).unwrap();
        let rhs = so6_rep(&u).unwrap().mul(&so6_rep(&v).unwrap());
        worst = worst.max(lhs.max_abs_diff(&rhs));
        worst = worst.max(lhs.orthogonality_residual());
    }
    if worst > 1e-9 {
        ok = false;
        detail.push_str(&format!("homomorphism residual {worst:.2e}; "));
    }
    report(9, "SO(6) correspondence", started, ok, &format!("residual {worst:.2e} {detail}"));
}

/// The enumeration family stays pairwise distinct mod phase through m = 6
/// and never collides with a lower level (uniqueness and minimality of
/// the normal form at small scale).
#[test]
fn family_unique_and_minimal_to_six() {
    let started = Instant::now();
    let mut seen = std::collections::HashSet::new();
    let mut ok = true;
    for m in 0..=6u32 {
        for form in enumerate(m) {
            if !seen.insert(form.evaluate().phase_canonical_bytes().0) {
                ok = false;
            }
        }
    }
    report(0, "normal form uniqueness to m=6", started, ok, "");
}
