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

//! Applications of the controlled-gate compiler: general controlled U(2)
//! gates through a phase gadget on one extra clean ancilla, split-half
//! SU(2)⊕SU(2) circuits at half the T budget, and ancilla-free SU(4)
//! synthesis through the SU(4)/Z₂ ≅ SO(6) correspondence.

use crate::circuit::{Circuit, Gate, GateKind, Registers};
use crate::ctrl::{compile_blocks, synth_controlled_su2, ControlledSynth, CtrlMode};
use crate::error::{Error, Result};
use crate::manf::reduce_word;
use crate::mat::{eig_hermitian, CMat, C64};
use crate::sim::{apply_to_basis, diamond_distance_unitary, ExactMat};
use crate::synth1q::{approx_su2, Parity, SynthRequest, SynthResult};
use std::sync::LazyLock;

// ---------------------------------------------------------------------
// SO(6) correspondence
// ---------------------------------------------------------------------

/// A 6x6 real matrix claimed orthogonal with determinant +1.
#[derive(Debug, Clone, PartialEq)]
pub struct So6Matrix(pub [[f64; 6]; 6]);

impl So6Matrix {
    pub fn identity() -> So6Matrix {
        let mut m = [[0.0; 6]; 6];
        for (i, row) in m.iter_mut().enumerate() {
            row[i] = 1.0;
        }
        So6Matrix(m)
    }

    pub fn mul(&self, rhs: &So6Matrix) -> So6Matrix {
        let mut out = [[0.0; 6]; 6];
        for i in 0..6 {
            for j in 0..6 {
                out[i][j] = (0..6).map(|k| self.0[i][k] * rhs.0[k][j]).sum();
            }
        }
        So6Matrix(out)
    }

    pub fn orthogonality_residual(&self) -> f64 {
        let mut worst = 0.0f64;
        for i in 0..6 {
            for j in 0..6 {
                let dot: f64 = (0..6).map(|k| self.0[k][i] * self.0[k][j]).sum();
                let want = if i == j { 1.0 } else { 0.0 };
                worst = worst.max((dot - want).abs());
            }
        }
        worst
    }

    pub fn det(&self) -> f64 {
        // Gaussian elimination with partial pivoting.
        let mut m = self.0;
        let mut det = 1.0;
        for col in 0..6 {
            let pivot = (col..6).max_by(|&a, &b| m[a][col].abs().total_cmp(&m[b][col].abs())).unwrap();
            if m[pivot][col].abs() < 1e-14 {
                return 0.0;
            }
            if pivot != col {
                m.swap(pivot, col);
                det = -det;
            }
            det *= m[col][col];
            for row in col + 1..6 {
                let f = m[row][col] / m[col][col];
                for k in col..6 {
                    m[row][k] -= f * m[col][k];
                }
            }
        }
        det
    }

    pub fn max_abs_diff(&self, rhs: &So6Matrix) -> f64 {
        let mut worst = 0.0f64;
        for i in 0..6 {
            for j in 0..6 {
                worst = worst.max((self.0[i][j] - rhs.0[i][j]).abs());
            }
        }
        worst
    }
}

fn pauli1_f64(idx: u8) -> CMat {
    let z = C64::new(0.0, 0.0);
    let o = C64::new(1.0, 0.0);
    let i = C64::new(0.0, 1.0);
    match idx {
        0 => CMat::identity(2),
        1 => CMat::from_rows(&[&[z, o], &[o, z]]),
        2 => CMat::from_rows(&[&[z, -i], &[i, z]]),
        3 => CMat::from_rows(&[&[o, z], &[z, -o]]),
        _ => unreachable!(),
    }
}

/// σ_i ⊗ σ_j for two-qubit Pauli products.
pub fn pauli2_f64(i: u8, j: u8) -> CMat {
    pauli1_f64(i).kron(&pauli1_f64(j))
}

/// exp(iθ σ_i⊗σ_j) = cos θ I + i sin θ σ_i⊗σ_j.
pub fn exp_pauli2(i: u8, j: u8, theta: f64) -> CMat {
    let p = pauli2_f64(i, j);
    let mut out = CMat::identity(4).scale(C64::new(theta.cos(), 0.0));
    let s = C64::new(0.0, theta.sin());
    for k in 0..16 {
        out.data[k] += s * p.data[k];
    }
    out
}

/// The fifteen Pauli products and their coordinate planes (1-based axes):
/// I⊗X ↔ (2,3), I⊗Y ↔ (1,3), I⊗Z ↔ (1,2), X⊗I ↔ (5,6), Y⊗I ↔ (4,6),
/// Z⊗I ↔ (4,5), X⊗X ↔ (1,4), Y⊗X ↔ (1,5), Z⊗X ↔ (1,6), X⊗Y ↔ (2,4),
/// Y⊗Y ↔ (2,5), Z⊗Y ↔ (2,6), X⊗Z ↔ (3,4), Y⊗Z ↔ (3,5), Z⊗Z ↔ (3,6).
pub const PAULI_PLANE_TABLE: [((u8, u8), (usize, usize)); 15] = [
    ((0, 1), (2, 3)),
    ((0, 2), (1, 3)),
    ((0, 3), (1, 2)),
    ((1, 0), (5, 6)),
    ((2, 0), (4, 6)),
    ((3, 0), (4, 5)),
    ((1, 1), (1, 4)),
    ((2, 1), (1, 5)),
    ((3, 1), (1, 6)),
    ((1, 2), (2, 4)),
    ((2, 2), (2, 5)),
    ((3, 2), (2, 6)),
    ((1, 3), (3, 4)),
    ((2, 3), (3, 5)),
    ((3, 3), (3, 6)),
];

/// Basis of the real six-dimensional representation: fixed points of the
/// antilinear map ω ↦ ⋆(ω̄) on antisymmetric 4x4 matrices, orthonormal
/// under <x, y> = tr(x†y)/2. SU(4) acts by ω ↦ U ω Uᵀ.
struct RawBasis {
    omegas: [CMat; 6],
}

fn antisym_unit(a: usize, b: usize) -> CMat {
    let mut m = CMat::zeros(4);
    m[(a, b)] = C64::new(1.0, 0.0);
    m[(b, a)] = C64::new(-1.0, 0.0);
    m
}

fn raw_basis() -> RawBasis {
    let h = C64::new(std::f64::consts::FRAC_1_SQRT_2, 0.0);
    let ih = C64::new(0.0, std::f64::consts::FRAC_1_SQRT_2);
    let pair = |ab: (usize, usize), cd: (usize, usize), sign: f64| {
        let (e1, e2) = (antisym_unit(ab.0, ab.1), antisym_unit(cd.0, cd.1));
        let mut re = CMat::zeros(4);
        let mut im = CMat::zeros(4);
        for k in 0..16 {
            re.data[k] = h * (e1.data[k] + sign * e2.data[k]);
            im.data[k] = ih * (e1.data[k] - sign * e2.data[k]);
        }
        (re, im)
    };
    // Hodge pairs: *E12 = E34, *E13 = -E24, *E14 = E23.
    let (w1, w2) = pair((0, 1), (2, 3), 1.0);
    let (w3, w4) = pair((0, 2), (1, 3), -1.0);
    let (w5, w6) = pair((0, 3), (1, 2), 1.0);
    RawBasis { omegas: [w1, w2, w3, w4, w5, w6] }
}

fn raw_rep(basis: &RawBasis, u: &CMat) -> [[f64; 6]; 6] {
    let ut = {
        let mut t = CMat::zeros(4);
        for i in 0..4 {
            for j in 0..4 {
                t[(i, j)] = u[(j, i)];
            }
        }
        t
    };
    let mut out = [[0.0; 6]; 6];
    for (b, omega) in basis.omegas.iter().enumerate() {
        let img = u.mul(omega).mul(&ut);
        for (a, wa) in basis.omegas.iter().enumerate() {
            let mut v = C64::new(0.0, 0.0);
            for k in 0..16 {
                v += wa.data[k].conj() * img.data[k];
            }
            out[a][b] = 0.5 * v.re;
        }
    }
    out
}

pub struct So6Calibration {
    basis: RawBasis,
    /// Columns are the axis vectors of the plane-aligned frame, expressed
    /// in raw-basis coordinates.
    q: [[f64; 6]; 6],
    /// Per Pauli (table order): the rotation orientation in its plane.
    pub plane_sign: [f64; 15],
}

impl So6Calibration {
    fn rep(&self, u: &CMat) -> [[f64; 6]; 6] {
        let raw = raw_rep(&self.basis, u);
        // Q^T raw Q
        let mut tmp = [[0.0; 6]; 6];
        for i in 0..6 {
            for j in 0..6 {
                tmp[i][j] = (0..6).map(|k| raw[i][k] * self.q[k][j]).sum();
            }
        }
        let mut out = [[0.0; 6]; 6];
        for i in 0..6 {
            for j in 0..6 {
                out[i][j] = (0..6).map(|k| self.q[k][i] * tmp[k][j]).sum();
            }
        }
        out
    }
}

fn plane_span(basis: &RawBasis, i: u8, j: u8, theta0: f64) -> [[f64; 6]; 2] {
    // Antisymmetric generator via a symmetric difference; its column
    // space is the rotation plane.
    let rp = raw_rep(basis, &exp_pauli2(i, j, theta0));
    let rm = raw_rep(basis, &exp_pauli2(i, j, -theta0));
    let mut gen = [[0.0; 6]; 6];
    for a in 0..6 {
        for b in 0..6 {
            gen[a][b] = (rp[a][b] - rm[a][b]) / 2.0;
        }
    }
    // Two dominant orthonormal columns.
    let mut cols: Vec<[f64; 6]> = (0..6).map(|c| std::array::from_fn(|r| gen[r][c])).collect();
    cols.sort_by(|a, b| {
        let na: f64 = a.iter().map(|v| v * v).sum();
        let nb: f64 = b.iter().map(|v| v * v).sum();
        nb.total_cmp(&na)
    });
    let mut u = cols[0];
    let nu: f64 = u.iter().map(|v| v * v).sum::<f64>().sqrt();
    for v in u.iter_mut() {
        *v /= nu;
    }
    // pick the next column with the largest component orthogonal to u
    let mut best: Option<[f64; 6]> = None;
    let mut best_norm = 0.0;
    for c in &cols[1..] {
        let dot: f64 = c.iter().zip(&u).map(|(a, b)| a * b).sum();
        let mut w = *c;
        for (wk, uk) in w.iter_mut().zip(&u) {
            *wk -= dot * uk;
        }
        let nw: f64 = w.iter().map(|v| v * v).sum::<f64>().sqrt();
        if nw > best_norm {
            best_norm = nw;
            let mut wn = w;
            for v in wn.iter_mut() {
                *v /= nw;
            }
            best = Some(wn);
        }
    }
    [u, best.expect("rotation plane is two-dimensional")]
}

/// Unit vector in the intersection of two planes, sign-canonicalized.
fn plane_intersection(p1: &[[f64; 6]; 2], p2: &[[f64; 6]; 2]) -> [f64; 6] {
    // P1 P2 P1 as a 6x6 symmetric matrix; its top eigenvector spans the
    // intersection.
    let proj = |p: &[[f64; 6]; 2], v: &[f64; 6]| -> [f64; 6] {
        let mut out = [0.0; 6];
        for basis_vec in p {
            let dot: f64 = basis_vec.iter().zip(v).map(|(a, b)| a * b).sum();
            for (o, bv) in out.iter_mut().zip(basis_vec) {
                *o += dot * bv;
            }
        }
        out
    };
    let mut m = CMat::zeros(6);
    for c in 0..6 {
        let mut e = [0.0; 6];
        e[c] = 1.0;
        let w = proj(p1, &proj(p2, &proj(p1, &e)));
        for r in 0..6 {
            m[(r, c)] = C64::new(w[r], 0.0);
        }
    }
    let (vals, vecs) = eig_hermitian(&m);
    let top = (0..6).max_by(|&a, &b| vals[a].total_cmp(&vals[b])).unwrap();
    let mut v: [f64; 6] = std::array::from_fn(|r| vecs[(r, top)].re);
    let lead = (0..6).max_by(|&a, &b| v[a].abs().total_cmp(&v[b].abs())).unwrap();
    if v[lead] < 0.0 {
        for x in v.iter_mut() {
            *x = -*x;
        }
    }
    let n: f64 = v.iter().map(|x| x * x).sum::<f64>().sqrt();
    for x in v.iter_mut() {
        *x /= n;
    }
    v
}


fn build_calibration() -> So6Calibration {
    let basis = raw_basis();
    let theta0 = 0.11;
    let span = |i: u8, j: u8| plane_span(&basis, i, j, theta0);
    // Each axis is the intersection of two of its planes.
    let axes: [[f64; 6]; 6] = [
        plane_intersection(&span(0, 3), &span(0, 2)), // axis 1 = (1,2) ∩ (1,3)
        plane_intersection(&span(0, 3), &span(0, 1)), // axis 2 = (1,2) ∩ (2,3)
        plane_intersection(&span(0, 2), &span(0, 1)), // axis 3 = (1,3) ∩ (2,3)
        plane_intersection(&span(3, 0), &span(2, 0)), // axis 4 = (4,5) ∩ (4,6)
        plane_intersection(&span(3, 0), &span(1, 0)), // axis 5 = (4,5) ∩ (5,6)
        plane_intersection(&span(2, 0), &span(1, 0)), // axis 6 = (4,6) ∩ (5,6)
    ];
    let mut q = [[0.0; 6]; 6];
    for (col, axis) in axes.iter().enumerate() {
        for row in 0..6 {
            q[row][col] = axis[row];
        }
    }
    let mut cal = So6Calibration { basis, q, plane_sign: [0.0; 15] };

    // Record each Pauli's rotation orientation in the aligned frame, and
    // sanity-check the angle doubling and the plane assignment.
    for (idx, ((i, j), plane)) in PAULI_PLANE_TABLE.iter().enumerate() {
        let r = cal.rep(&exp_pauli2(*i, *j, theta0));
        let (a, b) = (plane.0 - 1, plane.1 - 1);
        for row in 0..6 {
            for col in 0..6 {
                let in_plane = (row == a || row == b) && (col == a || col == b);
                let want = if row == col { 1.0 } else { 0.0 };
                if !in_plane {
                    assert!(
                        (r[row][col] - want).abs() < 1e-9,
                        "Pauli ({i},{j}) leaks outside plane {plane:?} at ({row},{col})"
                    );
                }
            }
        }
        let phi = r[b][a].atan2(r[a][a]);
        assert!(
            (phi.abs() - 2.0 * theta0).abs() < 1e-9,
            "angle factor is not 2 for Pauli ({i},{j}): {phi}"
        );
        cal.plane_sign[idx] = phi.signum();
    }
    cal
}

static SO6_CAL: LazyLock<So6Calibration> = LazyLock::new(build_calibration);

/// The calibrated SO(6) representation: a group homomorphism mod sign,
/// with exp(iθ σ_i⊗σ_j) mapping to a rotation by 2θ in exactly the plane
/// the correspondence table assigns.
pub fn so6_rep(u: &CMat) -> Result<So6Matrix> {
    if u.dim != 4 {
        return Err(Error::DimensionMismatch(u.dim, 4));
    }
    if !u.is_unitary(1e-9) {
        return Err(Error::NotSpecialUnitary("input is not unitary".into()));
    }
    let det = crate::mat::det4(u);
    if (det - C64::new(1.0, 0.0)).norm() > 1e-8 {
        return Err(Error::NotSpecialUnitary(format!("determinant {det} is not 1")));
    }
    let m = So6Matrix(SO6_CAL.rep(u));
    Ok(m)
}

// ---------------------------------------------------------------------
// Givens decomposition of SU(4)
// ---------------------------------------------------------------------

/// Angles θ₁..θ₉ and the exact residuals: applying the first five plane
/// rotations reduces the SO(6) image to SO(5)⊕1, the next four to
/// SO(4)⊕I₂.
#[derive(Debug, Clone)]
pub struct GivensPlan {
    pub thetas: [f64; 9],
    pub u1: CMat,
    pub u2: CMat,
}

/// Stage-1 Pauli sequence: planes through axis 6.
const STAGE1: [(u8, u8); 5] = [(1, 0), (2, 0), (3, 1), (3, 2), (3, 3)];
/// Stage-2 Pauli sequence: planes through axis 5.
const STAGE2: [(u8, u8); 4] = [(3, 0), (2, 1), (2, 2), (2, 3)];

/// Peel rotations G(θ)⁻¹·R in the listed order, zeroing the `col` entries
/// row by row; returns the angles and leaves R reduced.
fn peel_stage(r: &mut [[f64; 6]; 6], paulis: &[(u8, u8)], col: usize) -> Vec<f64> {
    let cal = &*SO6_CAL;
    let mut thetas = Vec::with_capacity(paulis.len());
    for (i, j) in paulis {
        let idx = PAULI_PLANE_TABLE.iter().position(|((a, b), _)| (a, b) == (i, j)).unwrap();
        let (pa, pb) = PAULI_PLANE_TABLE[idx].1;
        let (a, b) = (pa - 1, pb - 1);
        debug_assert_eq!(b, col);
        let sign = cal.plane_sign[idx];
        let x = r[a][col];
        let y = r[b][col];
        let rad = x.hypot(y);
        if rad < 1e-12 {
            thetas.push(0.0);
            continue;
        }
        // G(θ) rotates by φ = 2θ with orientation `sign`; choose φ so the
        // peeled (a,col) entry vanishes and (b,col) accumulates +rad.
        let (sin_phi, cos_phi) = (-sign * x / rad, y / rad);
        for k in 0..6 {
            let (ra, rb) = (r[a][k], r[b][k]);
            r[a][k] = cos_phi * ra + sign * sin_phi * rb;
            r[b][k] = -sign * sin_phi * ra + cos_phi * rb;
        }
        thetas.push(sin_phi.atan2(cos_phi) / 2.0);
    }
    thetas
}

fn exp_seq(paulis: &[(u8, u8)], thetas: &[f64]) -> CMat {
    let mut out = CMat::identity(4);
    for ((i, j), theta) in paulis.iter().zip(thetas) {
        out = out.mul(&exp_pauli2(*i, *j, *theta));
    }
    out
}

/// Decompose U ∈ SU(4) into nine Pauli-plane rotations and a residual
/// whose SO(6) image fixes axes 5 and 6.
pub fn decompose_su4(u: &CMat) -> Result<GivensPlan> {
    let mut r = so6_rep(u)?.0;
    let t1 = peel_stage(&mut r, &STAGE1, 5);
    let u1 = exp_seq(&STAGE1, &t1).adjoint().mul(u);
    let t2 = peel_stage(&mut r, &STAGE2, 4);
    let u2 = exp_seq(&STAGE2, &t2).adjoint().mul(&u1);

    // The residual's image must fix axes 5 and 6.
    let r2 = so6_rep(&u2)?.0;
    for k in 0..6 {
        let want5 = if k == 4 { 1.0 } else { 0.0 };
        let want6 = if k == 5 { 1.0 } else { 0.0 };
        if (r2[k][4] - want5).abs() > 1e-8 || (r2[k][5] - want6).abs() > 1e-8 {
            return Err(Error::NotSpecialUnitary(
                "Givens peel failed to fix the last axes".into(),
            ));
        }
    }
    let thetas: [f64; 9] = std::array::from_fn(|i| if i < 5 { t1[i] } else { t2[i - 5] });
    Ok(GivensPlan { thetas, u1, u2 })
}

// ---------------------------------------------------------------------
// Split-half SU(2) ⊕ SU(2)
// ---------------------------------------------------------------------

/// An ancilla-free SU(2)⊕SU(2) circuit with exact halves V₁, V₂ whose
/// relative product V₁V₂† approximates the requested target.
#[derive(Debug, Clone)]
pub struct SplitHalf {
    pub synth: ControlledSynth,
    pub v1: ExactMat,
    pub v2: ExactMat,
    /// D(V₁V₂†, target), strictly below the requested ε.
    pub distance: f64,
}

impl SplitHalf {
    pub fn circuit(&self) -> &Circuit {
        &self.synth.circuit
    }
}

fn dagger_word(word: &[GateKind]) -> Vec<GateKind> {
    word.iter().rev().map(|g| g.dagger()).collect()
}

/// Approximate `target` by an even-T-count form, split the word at the
/// T-count midpoint into V₁·V₂†, and compile V₁ ⊕ V₂ ancilla-free.
///
/// The Frobenius-minimizing phase ζ^s is folded into V₁, so V₁V₂† is not
/// just within ε of the target mod phase: its eigenvalue pairing against
/// the target is the aligned e^{±iθ} one. Downstream assemblies pin one
/// block of a direct sum exactly, where an unaligned global phase would
/// spread the eigenvalue hull and break the per-stage error budget.
pub fn split_half(target: &CMat, epsilon: f64, m_cap: u32) -> Result<SplitHalf> {
    let SynthResult { form, achieved_distance, t_count } =
        approx_su2(&SynthRequest { target: target.clone(), epsilon, parity: Parity::Even, m_cap })?;
    let align = crate::synth1q::choose_phase(target, &form.evaluate_float());
    let half = (t_count / 2) as usize;

    // V1 = F M_1 .. M_half; V2 = (M_{half+1} .. M_m C)†.
    let mut word_v1: Vec<GateKind> = form.f.letters().to_vec();
    for syl in &form.syllables[..half] {
        word_v1.extend_from_slice(syl.letters());
    }
    let mut word_suffix: Vec<GateKind> = Vec::new();
    for syl in &form.syllables[half..] {
        word_suffix.extend_from_slice(syl.letters());
    }
    word_suffix.extend(crate::manf::clifford_table().word_letters(form.clifford));

    let form_v1 = reduce_word(&word_v1)?;
    let form_v2 = reduce_word(&dagger_word(&word_suffix))?;
    debug_assert_eq!(form_v1.t_count(), t_count / 2);
    debug_assert_eq!(form_v2.t_count(), t_count.div_ceil(2));

    let v1 = form_v1.evaluate().times_zeta_pow(align as i32);
    let v2 = form_v2.evaluate();
    // V1 V2† reproduces the phase-aligned synthesized form exactly.
    debug_assert_eq!(v1.mul(&v2.adjoint()), form.evaluate().times_zeta_pow(align as i32));

    let blocks = [v1.to_cmat(), v2.to_cmat()];
    let synth = compile_blocks(&blocks, &[form_v1, form_v2], CtrlMode::AncillaFreeN1)?;
    // the compiled blocks are the halves, exactly
    if synth.expected_blocks[0] != v1 || synth.expected_blocks[1] != v2 {
        return Err(Error::InconsistentInput("split halves drifted in compilation".into()));
    }
    Ok(SplitHalf { synth, v1, v2, distance: achieved_distance })
}

// ---------------------------------------------------------------------
// SU(4) synthesis
// ---------------------------------------------------------------------

#[derive(Debug, Clone)]
pub struct Su4Synth {
    pub circuit: Circuit,
    /// The assembled matrix product the circuit realizes, for structural
    /// cross-checks against simulation.
    pub assembled: CMat,
    pub thetas: [f64; 9],
    /// The four ε/4 approximation errors: V₁⊕V₂, V₃, V₄⊕V₅, V₆⊕V₇.
    pub stage_distances: [f64; 4],
    /// Distances along the telescoping chain U′ → U′₁ → U′₂ → U′₃ → U.
    pub chain_distances: [f64; 4],
    pub final_distance: f64,
}

impl Su4Synth {
    pub fn t_count(&self) -> usize {
        self.circuit.t_count()
    }
}

fn su2_xyz(theta_x: f64, theta_y: f64, theta_z: f64) -> CMat {
    let x = exp_pauli1(1, theta_x);
    let y = exp_pauli1(2, theta_y);
    let z = exp_pauli1(3, theta_z);
    x.mul(&y).mul(&z)
}

fn exp_pauli1(idx: u8, theta: f64) -> CMat {
    let p = pauli1_f64(idx);
    let mut out = CMat::identity(2).scale(C64::new(theta.cos(), 0.0));
    let s = C64::new(0.0, theta.sin());
    for k in 0..4 {
        out.data[k] += s * p.data[k];
    }
    out
}

/// The split-half target e^{iθ_a X} e^{iθ_b Y} e^{2iθ_c Z} e^{iθ_b Y} e^{iθ_a X}.
fn mirror_target(theta_a: f64, theta_b: f64, theta_c: f64) -> CMat {
    let x = exp_pauli1(1, theta_a);
    let y = exp_pauli1(2, theta_b);
    let z = exp_pauli1(3, 2.0 * theta_c);
    x.mul(&y).mul(&z).mul(&y).mul(&x)
}

/// Synthesize an SU(4) target as an ancilla-free two-qubit Clifford+T
/// circuit within diamond distance ε.
pub fn synth_su4(u: &CMat, epsilon: f64, m_cap: u32) -> Result<Su4Synth> {
    let eps4 = epsilon / 4.0;

    // Stage 1: peel the five plane rotations through axis 6.
    let mut r = so6_rep(u)?.0;
    let t1 = peel_stage(&mut r, &STAGE1, 5);
    let u1 = exp_seq(&STAGE1, &t1).adjoint().mul(u);

    // V1 ⊕ V2 against the mirrored product of θ₃, θ₄, θ₅.
    let split1 = split_half(&mirror_target(t1[2], t1[3], t1[4]), eps4, m_cap)?;
    let v1f = split1.v1.to_cmat();

    // Stage 2 on (I ⊗ V₁† e^{iθ₃X} e^{iθ₄Y} e^{iθ₅Z}) U₁, using the exact V₁.
    // det(V₁) is a power of ζ; pull W₁ back into SU(2) before tensoring so
    // the product stays in SU(4) with axis 6 still fixed. Correcting the
    // determinant on the 4x4 product instead can negate the whole SO(6)
    // image and silently wreck the residual's block structure.
    let w1 = v1f.adjoint().mul(&su2_xyz(t1[2], t1[3], t1[4]));
    let w1 = w1.scale(w1.det2().sqrt().inv());
    let u1_adj = CMat::identity(2).kron(&w1).mul(&u1);
    let mut r2 = so6_rep(&u1_adj)?.0;
    let t2 = peel_stage(&mut r2, &STAGE2, 4);
    let u2 = exp_seq(&STAGE2, &t2).adjoint().mul(&u1_adj);

    // V3 against e^{iθ₁X} e^{iθ₂Y} e^{iθ₆Z}.
    let v3_target = su2_xyz(t1[0], t1[1], t2[0]);
    let v3_res = approx_su2(&SynthRequest {
        target: v3_target.clone(),
        epsilon: eps4,
        parity: Parity::Any,
        m_cap,
    })?;
    let v3f = v3_res.form.evaluate_float();

    // V4 ⊕ V5 against the mirrored product of θ₇, θ₈, θ₉.
    let split2 = split_half(&mirror_target(t2[1], t2[2], t2[3]), eps4, m_cap)?;
    let v4f = split2.v1.to_cmat();

    // V6 ⊕ V7 against (H ⊗ V₄† e^{iθ₇X} e^{iθ₈Y} e^{iθ₉Z}) U₂ (H ⊗ I₂).
    let w4 = v4f.adjoint().mul(&su2_xyz(t2[1], t2[2], t2[3]));
    let h = crate::sim::gate_exact_1q(GateKind::H).to_cmat();
    let tb_target = h.kron(&w4).mul(&u2).mul(&h.kron(&CMat::identity(2)));
    // Both blocks share the determinant det(V₄†), so dividing by one
    // principal root keeps their relative phase intact.
    let mut blocks = Vec::with_capacity(2);
    for b in 0..2 {
        let mut sub = CMat::zeros(2);
        for i in 0..2 {
            for j in 0..2 {
                sub[(i, j)] = tb_target[(2 * b + i, 2 * b + j)];
            }
        }
        blocks.push(sub);
    }
    let root = blocks[0].det2().sqrt();
    for b in blocks.iter_mut() {
        *b = b.scale(root.inv());
    }
    // off-block leakage is numerical noise from the peels
    let leak = (0..4)
        .flat_map(|i| (0..4).map(move |j| (i, j)))
        .filter(|&(i, j)| i / 2 != j / 2)
        .map(|(i, j)| tb_target[(i, j)].norm())
        .fold(0.0, f64::max);
    if leak > 1e-7 {
        return Err(Error::NotSpecialUnitary(format!("residual is not block diagonal: {leak:.2e}")));
    }
    let tb = synth_controlled_su2(&blocks, eps4, CtrlMode::AncillaFreeN1, m_cap)?;

    // Assemble (V₃⊗I)(V₁⊕V₂)(SH⊗I)(V₄⊕V₅)(HS†H⊗I)(V₆⊕V₇)(H⊗I): the
    // rightmost factor is first in time.
    let regs = Registers::new(1, 0, 0);
    let mut circuit = Circuit::new(regs);
    circuit.push_one(GateKind::H, 0);
    circuit.extend(tb.circuit.gates.iter().copied());
    circuit.push_one(GateKind::H, 0);
    circuit.push_one(GateKind::Sdg, 0);
    circuit.push_one(GateKind::H, 0);
    circuit.extend(split2.synth.circuit.gates.iter().copied());
    circuit.push_one(GateKind::H, 0);
    circuit.push_one(GateKind::S, 0);
    circuit.extend(split1.synth.circuit.gates.iter().copied());
    circuit.extend(v3_res.form.to_gates(0));

    // Verify against the target and record the telescoping chain.
    let id2 = CMat::identity(2);
    let v12 = CMat::block_diag2(&[split1.v1.to_cmat(), split1.v2.to_cmat()]);
    let v45 = CMat::block_diag2(&[split2.v1.to_cmat(), split2.v2.to_cmat()]);
    let v67 = CMat::block_diag2(&[
        tb.expected_blocks[0].to_cmat(),
        tb.expected_blocks[1].to_cmat(),
    ]);
    let sh = crate::sim::gate_exact_1q(GateKind::S).to_cmat().mul(&h);
    let hsdgh = h.mul(&crate::sim::gate_exact_1q(GateKind::Sdg).to_cmat()).mul(&h);

    let u_prime = v3f
        .kron(&id2)
        .mul(&v12)
        .mul(&sh.kron(&id2))
        .mul(&v45)
        .mul(&hsdgh.kron(&id2))
        .mul(&v67)
        .mul(&h.kron(&id2));
    let u_prime1 = v3f
        .kron(&id2)
        .mul(&v12)
        .mul(&sh.kron(&id2))
        .mul(&v45)
        .mul(&h.mul(&crate::sim::gate_exact_1q(GateKind::Sdg).to_cmat()).kron(&id2))
        .mul(&id2.kron(&w4))
        .mul(&u2);
    let yxyz = exp_pauli2(2, 1, t2[1]).mul(&exp_pauli2(2, 2, t2[2])).mul(&exp_pauli2(2, 3, t2[3]));
    let u_prime2 = v3f.kron(&id2).mul(&v12).mul(&yxyz).mul(&u2);
    let zxyz = exp_pauli2(3, 1, t1[2]).mul(&exp_pauli2(3, 2, t1[3])).mul(&exp_pauli2(3, 3, t1[4]));
    let w1_inv_v1 = exp_pauli1(3, -t1[4])
        .mul(&exp_pauli1(2, -t1[3]))
        .mul(&exp_pauli1(1, -t1[2]))
        .mul(&v1f);
    let u_prime3 = v3f.kron(&id2).mul(&zxyz).mul(&id2.kron(&w1_inv_v1)).mul(&yxyz).mul(&u2);

    let chain_distances = [
        diamond_distance_unitary(&u_prime, &u_prime1)?,
        diamond_distance_unitary(&u_prime1, &u_prime2)?,
        diamond_distance_unitary(&u_prime2, &u_prime3)?,
        diamond_distance_unitary(&u_prime3, u)?,
    ];
    let final_distance = diamond_distance_unitary(&u_prime, u)?;

    let stage_distances = [
        split1.distance,
        v3_res.achieved_distance,
        split2.distance,
        diamond_distance_unitary(&v67, &tb_target)?,
    ];

    let thetas: [f64; 9] = std::array::from_fn(|i| if i < 5 { t1[i] } else { t2[i - 5] });
    Ok(Su4Synth {
        circuit,
        assembled: u_prime,
        thetas,
        stage_distances,
        chain_distances,
        final_distance,
    })
}

// ---------------------------------------------------------------------
// Controlled U(2) with one extra clean ancilla
// ---------------------------------------------------------------------

#[derive(Debug, Clone)]
pub struct U2Synth {
    pub circuit: Circuit,
    pub su_part: ControlledSynth,
    pub phase_part: ControlledSynth,
    pub thetas: Vec<f64>,
    /// Global qubit index of the phase ancilla (first C qubit).
    pub anc: u32,
}

fn remap_gates(gates: &[Gate], f: impl Fn(u32) -> u32) -> Vec<Gate> {
    gates
        .iter()
        .map(|g| Gate { kind: g.kind, q0: f(g.q0), q1: g.q1.map(&f) })
        .collect()
}

/// Synthesize a controlled gate with U(2) blocks: the SU(2) parts compile
/// directly, the residual phases become diag(e^{iθ_j}, e^{-iθ_j}) blocks
/// targeting one extra clean ancilla.
pub fn synth_controlled_u2(blocks: &[CMat], epsilon: f64, m_cap: u32) -> Result<U2Synth> {
    if !blocks.len().is_power_of_two() || blocks.len() < 2 {
        return Err(Error::InconsistentInput("need 2^n blocks, n >= 1".into()));
    }
    let mut su_blocks = Vec::with_capacity(blocks.len());
    let mut phase_blocks = Vec::with_capacity(blocks.len());
    let mut thetas = Vec::with_capacity(blocks.len());
    for b in blocks {
        if b.dim != 2 || !b.is_unitary(1e-9) {
            return Err(Error::NotSpecialUnitary("block is not a 2x2 unitary".into()));
        }
        let theta = b.det2().arg() / 2.0;
        let phase = C64::from_polar(1.0, -theta);
        su_blocks.push(b.scale(phase));
        let mut w = CMat::identity(2);
        w[(0, 0)] = C64::from_polar(1.0, theta);
        w[(1, 1)] = C64::from_polar(1.0, -theta);
        phase_blocks.push(w);
        thetas.push(theta);
    }
    let half = epsilon / 2.0;
    let su_part = synth_controlled_su2(&su_blocks, half, CtrlMode::Ancilla, m_cap)?;
    let phase_part = synth_controlled_su2(&phase_blocks, half, CtrlMode::Ancilla, m_cap)?;

    // Shared registers: C = [phase ancilla][max of both table regions],
    // D = max of both dirty needs. The phase compile's target register is
    // the ancilla.
    let (r1, r2) = (su_part.circuit.registers, phase_part.circuit.registers);
    let n = r1.n_control;
    let regs = Registers::new(n, 1 + r1.n_clean.max(r2.n_clean), r1.n_dirty.max(r2.n_dirty));
    let anc = regs.c(0);
    let mut circuit = Circuit::new(regs);
    circuit.extend(remap_gates(&su_part.circuit.gates, |q| {
        if q < n + 1 {
            q // A and B
        } else if q < n + 1 + r1.n_clean {
            regs.c(1 + (q - n - 1)) // table bits shift past the ancilla
        } else {
            regs.d(q - n - 1 - r1.n_clean)
        }
    }));
    circuit.extend(remap_gates(&phase_part.circuit.gates, |q| {
        if q < n {
            q
        } else if q == n {
            anc // the phase target is the ancilla
        } else if q < n + 1 + r2.n_clean {
            regs.c(1 + (q - n - 1))
        } else {
            regs.d(q - n - 1 - r2.n_clean)
        }
    }));
    circuit.validate()?;
    Ok(U2Synth { circuit, su_part, phase_part, thetas, anc })
}

/// State-level check of a compiled controlled-U(2) channel: exact columns
/// for every branch basis state are combined into random pure inputs on
/// A⊗B, the ancillae are traced out, and the trace distance to the target
/// output is returned per input. `anc` is the phase ancilla's qubit.
pub fn u2_trace_distances(
    circuit: &Circuit,
    anc: u32,
    blocks: &[CMat],
    inputs: &[Vec<C64>],
) -> Result<Vec<f64>> {
    let regs = circuit.registers;
    let n = regs.n_control;
    let dim = 1usize << (n + 1);
    let total = regs.total();
    let qmask = |q: u32| 1u64 << (total - 1 - q);

    // Exact columns of the A⊗B sector (C = 0, D = 0), keyed by anc value.
    let mut cols: Vec<Vec<(u64, C64)>> = Vec::with_capacity(dim);
    for basis in 0..dim {
        let branch = basis >> 1;
        let x = basis & 1;
        let mut index = 0u64;
        for k in 0..n {
            if branch >> (n - 1 - k) & 1 == 1 {
                index |= qmask(regs.a(k));
            }
        }
        if x == 1 {
            index |= qmask(regs.b());
        }
        let state = apply_to_basis(circuit, index)?;
        let mut entries = Vec::with_capacity(state.amps.len());
        for (out, amp) in &state.amps {
            // A must be intact, table C bits and D restored; only B and
            // the phase ancilla may differ.
            let b_mask = qmask(regs.b());
            let anc_mask = qmask(anc);
            if out & !(b_mask | anc_mask) != index & !(b_mask | anc_mask) {
                return Err(Error::InconsistentInput("support escaped A⊗B⊗anc".into()));
            }
            entries.push((*out, amp.to_complex()));
        }
        cols.push(entries);
    }

    let mut out = Vec::with_capacity(inputs.len());
    for psi in inputs {
        if psi.len() != dim {
            return Err(Error::DimensionMismatch(psi.len(), dim));
        }
        // rho on A⊗B = sum over anc sectors of |v⟩⟨v|
        let mut v0 = vec![C64::new(0.0, 0.0); dim];
        let mut v1 = vec![C64::new(0.0, 0.0); dim];
        for (basis, amp_in) in psi.iter().enumerate() {
            for &(outidx, amp) in &cols[basis] {
                let mut ab = 0usize;
                for k in 0..n {
                    if outidx & qmask(regs.a(k)) != 0 {
                        ab |= 1 << (n - k);
                    }
                }
                if outidx & qmask(regs.b()) != 0 {
                    ab |= 1;
                }
                let dst = if outidx & qmask(anc) != 0 { &mut v1 } else { &mut v0 };
                dst[ab] += amp_in * amp;
            }
        }
        let mut rho = CMat::zeros(dim);
        for v in [&v0, &v1] {
            for i in 0..dim {
                for j in 0..dim {
                    rho[(i, j)] += v[i] * v[j].conj();
                }
            }
        }
        // target pure state
        let mut t = vec![C64::new(0.0, 0.0); dim];
        for (basis, amp_in) in psi.iter().enumerate() {
            let branch = basis >> 1;
            let x = basis & 1;
            for outx in 0..2 {
                t[branch << 1 | outx] += blocks[branch][(outx, x)] * amp_in;
            }
        }
        let mut diff = rho;
        for i in 0..dim {
            for j in 0..dim {
                diff[(i, j)] -= t[i] * t[j].conj();
            }
        }
        let (eigs, _) = eig_hermitian(&diff);
        out.push(eigs.iter().map(|e| e.abs()).sum::<f64>() / 2.0);
    }
    Ok(out)
}
