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

//! Length equalization of even-T-count normal forms.
//!
//! A form of T-count m_i is rewritten to a fixed larger even length m as
//!
//!   F · (M′₁ ⋯ M′_h) · H · (M′_{h+1} ⋯ M′_m) · C′,    h = (m_i + m)/2,
//!
//! with every syllable either ζTH or TSH:
//!   * j ≤ m_i: ζTH where the original syllable was TH, else TSH;
//!   * m_i < j ≤ h: ζTH;
//!   * j > h: ζTH iff j ≡ h + 2 (mod 3), else TSH;
//!
//! and C′ = HZC, HXC or HC according to (m − m_i)/2 mod 3 = 1, 2, 0.
//!
//! The rewrite is exact: the padded evaluation equals ζ^k times the
//! original, with k recorded. It rests on the ring identities
//!   (TH)†     = HTSH · HZ
//!   (THTH)†   = ζ⁻¹ HTSHTH · HX
//!   (THTHTH)† = ζ⁻¹ HTSHTHTSH · H
//! which are unit-tested below, and exactness of every padding is
//! asserted at construction.

use crate::circuit::GateKind;
use crate::error::{Error, Result};
use crate::manf::{clifford_table, FGate, NormalForm, Syllable};
use crate::sim::{gate_exact_1q, ExactMat};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum PadSyllable {
    ZetaTh,
    Tsh,
}

impl PadSyllable {
    pub fn exact(&self) -> ExactMat {
        match self {
            PadSyllable::ZetaTh => Syllable::Th.exact().times_zeta_pow(1),
            PadSyllable::Tsh => Syllable::Tsh.exact(),
        }
    }
}

/// An even-T-count normal form padded to a common length m.
#[derive(Debug, Clone)]
pub struct PaddedForm {
    pub f: FGate,
    pub syllables: Vec<PadSyllable>,
    /// Where the explicit H sits: between syllables h and h+1.
    pub h_position: u32,
    /// Canonical table index of C′.
    pub c_prime: u8,
    /// Branch phase exponent s (of ζ); assigned by the compiler, zero here.
    pub phase_exp: u8,
    pub original_m: u32,
    /// evaluate_raw() = ζ^{phase_adjust} · original evaluation, exactly.
    pub phase_adjust: u8,
    eval_raw: ExactMat,
}

impl PaddedForm {
    pub fn len(&self) -> u32 {
        self.syllables.len() as u32
    }

    pub fn is_empty(&self) -> bool {
        self.syllables.is_empty()
    }

    /// Exact evaluation without the branch phase ζ^{phase_exp}.
    pub fn evaluate_raw(&self) -> &ExactMat {
        &self.eval_raw
    }

    /// Exact evaluation including the branch phase: ζ^{s} F (∏M′) H (∏M′) C′.
    pub fn evaluate(&self) -> ExactMat {
        self.eval_raw.times_zeta_pow(self.phase_exp as i32)
    }
}

fn evaluate_padded(
    f: FGate,
    syllables: &[PadSyllable],
    h_position: u32,
    c_prime: u8,
) -> ExactMat {
    let table = clifford_table();
    let h = gate_exact_1q(GateKind::H);
    let mut m = match f {
        FGate::I => ExactMat::identity(2),
        FGate::H => h.clone(),
        FGate::Sh => gate_exact_1q(GateKind::S).mul(&h),
    };
    for (j, syl) in syllables.iter().enumerate() {
        m = m.mul(&syl.exact());
        if (j + 1) as u32 == h_position {
            m = m.mul(&h);
        }
    }
    if h_position == 0 {
        // Degenerate all-Clifford case: the explicit H leads the word.
        m = m.mul(&h);
    }
    m.mul(table.rep(c_prime))
}

/// Pad a form to length m ≥ m_i of the same parity, exactly. The case
/// tables only need (m − m_i)/2 to be an integer; synthesized branches
/// are always even, while the split-half compiler pads equal odd halves.
pub fn pad_to(form: &NormalForm, m: u32) -> Result<PaddedForm> {
    let mi = form.t_count();
    if m % 2 != mi % 2 || m < mi {
        return Err(Error::ParityMismatch(format!("target length {m} invalid for T-count {mi}")));
    }
    let h_position = (mi + m) / 2;
    let mut syllables = Vec::with_capacity(m as usize);
    for j in 1..=m {
        let syl = if j <= mi {
            match form.syllables[(j - 1) as usize] {
                Syllable::Th => PadSyllable::ZetaTh,
                Syllable::Tsh => PadSyllable::Tsh,
            }
        } else if j <= h_position || j % 3 == (h_position + 2) % 3 {
            // leading pad region, and the period-3 tail positions
            PadSyllable::ZetaTh
        } else {
            PadSyllable::Tsh
        };
        syllables.push(syl);
    }

    let table = clifford_table();
    let c_mat = table.rep(form.clifford);
    let tail = match ((m - mi) / 2) % 3 {
        1 => gate_exact_1q(GateKind::H).mul(&gate_exact_1q(GateKind::Z)),
        2 => gate_exact_1q(GateKind::H).mul(&gate_exact_1q(GateKind::X)),
        _ => gate_exact_1q(GateKind::H),
    };
    let c_prime_mat = tail.mul(c_mat);
    let (c_prime, _) = table
        .find(&c_prime_mat)
        .expect("product of Cliffords is a Clifford");

    let eval_raw = evaluate_padded(form.f, &syllables, h_position, c_prime);
    let phase_adjust = form
        .evaluate()
        .phase_factor_to(&eval_raw)
        .ok_or_else(|| Error::InconsistentInput("padding is not phase-exact".into()))?;
    Ok(PaddedForm {
        f: form.f,
        syllables,
        h_position,
        c_prime,
        phase_exp: 0,
        original_m: mi,
        phase_adjust,
        eval_raw,
    })
}

/// Pad a set of matching-parity forms to the common length m = max mᵢ and
/// report l = (m + min mᵢ)/2, the first index at which a branch's H can
/// appear.
pub fn equalize(forms: &[NormalForm]) -> Result<(u32, u32, Vec<PaddedForm>)> {
    if forms.is_empty() {
        return Err(Error::InconsistentInput("no forms to equalize".into()));
    }
    let counts: Vec<u32> = forms.iter().map(NormalForm::t_count).collect();
    if counts.iter().any(|c| c % 2 != counts[0] % 2) {
        return Err(Error::ParityMismatch("mixed T-count parities in equalize input".into()));
    }
    let m = *counts.iter().max().unwrap();
    let l = (m + counts.iter().min().unwrap()) / 2;
    let padded: Vec<PaddedForm> = forms.iter().map(|f| pad_to(f, m)).collect::<Result<_>>()?;
    for p in &padded {
        debug_assert!(p.h_position >= l && p.h_position <= m);
    }
    Ok((m, l, padded))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::manf::{enumerate, family_count, form_from_index, reduce_word};
    use crate::sample::seeded_rng;
    use rand::Rng;

    fn word(kinds: &[GateKind]) -> ExactMat {
        let mut m = ExactMat::identity(2);
        for &k in kinds {
            m = m.mul(&gate_exact_1q(k));
        }
        m
    }

    use GateKind::{H, S, T, X, Z};

    #[test]
    fn unpadding_identities_hold_exactly() {
        // (TH)† = HTSH·HZ
        assert_eq!(word(&[T, H]).adjoint(), word(&[H, T, S, H, H, Z]));
        // (THTH)† = ζ⁻¹ HTSHTH·HX
        assert_eq!(
            word(&[T, H, T, H]).adjoint(),
            word(&[H, T, S, H, T, H, H, X]).times_zeta_pow(-1)
        );
        // (THTHTH)† = ζ⁻¹ HTSHTHTSH·H
        assert_eq!(
            word(&[T, H, T, H, T, H]).adjoint(),
            word(&[H, T, S, H, T, H, T, S, H, H]).times_zeta_pow(-1)
        );
    }

    fn random_even_form(rng: &mut impl Rng, max_m: u32) -> NormalForm {
        let m = 2 * rng.random_range(0..=max_m / 2);
        let idx = rng.random_range(0..family_count(m));
        form_from_index(m, idx)
    }

    #[test]
    fn pad_identity_length_is_exact() {
        let form = reduce_word(&[T, H, T, H]).unwrap();
        assert_eq!(form.t_count(), 2);
        let padded = pad_to(&form, 2).unwrap();
        assert_eq!(padded.h_position, 2);
        // syllable relabeling only: TH -> ζTH bookkeeping
        assert_eq!(
            padded.evaluate_raw(),
            &form.evaluate().times_zeta_pow(padded.phase_adjust as i32)
        );
    }

    #[test]
    fn pad_by_two_and_six_are_exact() {
        let mut rng = seeded_rng(8);
        for _ in 0..10 {
            let form = random_even_form(&mut rng, 6);
            for extra in [2u32, 6] {
                let m = form.t_count() + extra;
                let padded = pad_to(&form, m).unwrap();
                assert_eq!(padded.len(), m);
                assert_eq!(
                    padded.evaluate_raw(),
                    &form.evaluate().times_zeta_pow(padded.phase_adjust as i32),
                );
            }
        }
    }

    #[test]
    fn padded_region_structure() {
        let form = form_from_index(2, 40);
        let m = 8;
        let padded = pad_to(&form, m).unwrap();
        let h = padded.h_position;
        assert_eq!(h, (2 + m) / 2);
        for j in (2 + 1)..=h {
            assert_eq!(padded.syllables[(j - 1) as usize], PadSyllable::ZetaTh);
        }
        for j in (h + 1)..=m {
            let expect = if j % 3 == (h + 2) % 3 { PadSyllable::ZetaTh } else { PadSyllable::Tsh };
            assert_eq!(padded.syllables[(j - 1) as usize], expect, "syllable {j}");
        }
    }

    #[test]
    fn equalize_arithmetic() {
        // all equal lengths: l = m
        let forms: Vec<NormalForm> = enumerate(2).take(3).collect();
        let (m, l, padded) = equalize(&forms).unwrap();
        assert_eq!((m, l), (2, 2));
        assert!(padded.iter().all(|p| p.h_position == 2));

        // lengths 2 and 6: m = 6, l = 4, h positions {4, 6}
        let f2 = form_from_index(2, 17);
        let f6 = form_from_index(6, 1234);
        let (m, l, padded) = equalize(&[f2, f6]).unwrap();
        assert_eq!((m, l), (6, 4));
        let hs: Vec<u32> = padded.iter().map(|p| p.h_position).collect();
        assert_eq!(hs, vec![4, 6]);
    }

    #[test]
    fn equalize_random_forms_is_exact_per_branch() {
        let mut rng = seeded_rng(15);
        let forms: Vec<NormalForm> = (0..3).map(|_| random_even_form(&mut rng, 8)).collect();
        let (m, l, padded) = equalize(&forms).unwrap();
        for (form, p) in forms.iter().zip(&padded) {
            assert_eq!(p.len(), m);
            assert!(p.h_position >= l && p.h_position <= m);
            assert_eq!(
                p.evaluate_raw(),
                &form.evaluate().times_zeta_pow(p.phase_adjust as i32),
            );
        }
    }

    #[test]
    fn parity_mismatches_are_rejected() {
        let odd = reduce_word(&[T]).unwrap();
        assert!(matches!(pad_to(&odd, 4), Err(Error::ParityMismatch(_))));
        let even = reduce_word(&[T, H, T, H]).unwrap();
        assert!(matches!(equalize(&[odd, even]), Err(Error::ParityMismatch(_))));
    }

    #[test]
    fn equal_odd_halves_pad_exactly() {
        // the split-half compiler pads equal odd T-counts; m = m_i works
        let odd = reduce_word(&[T, H, T, H, T]).unwrap();
        assert_eq!(odd.t_count() % 2, 1);
        let padded = pad_to(&odd, odd.t_count()).unwrap();
        assert_eq!(
            padded.evaluate_raw(),
            &odd.evaluate().times_zeta_pow(padded.phase_adjust as i32)
        );
        let odd2 = reduce_word(&[H, T, S, H, T, S, H, T, H]).unwrap();
        let (m, l, padded) = equalize(&[odd.clone(), odd2]).unwrap();
        assert_eq!(m % 2, 1);
        for p in &padded {
            assert!(p.h_position >= l && p.h_position <= m);
        }
    }

    #[test]
    fn all_clifford_branch_pads_to_zero_length() {
        let form = NormalForm::identity();
        let padded = pad_to(&form, 0).unwrap();
        assert_eq!(padded.len(), 0);
        assert_eq!(padded.h_position, 0);
        assert!(padded.evaluate_raw().is_identity());
    }
}
