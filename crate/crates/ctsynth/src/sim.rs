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

//! Circuit semantics: exact matrices over Z[ζ, 1/√2], dense exact and
//! floating-point simulation, sparse exact state simulation for wide
//! compiled circuits, block extraction and the diamond distance between
//! unitaries.
//!
//! Basis convention: qubit 0 is the most significant bit of a basis index,
//! so register A occupies the top bits and a controlled gate is literally
//! block diagonal.

use crate::circuit::{Circuit, Gate, GateKind};
use crate::error::{Error, Result};
use crate::mat::{eig_unitary, hull_distance_to_origin, CMat};
use crate::ring::ExactScalar;
use std::collections::HashMap;

/// Dense matrix with entries in Z[ζ, 1/√2].
#[derive(Debug, Clone, PartialEq)]
pub struct ExactMat {
    pub dim: usize,
    pub data: Vec<ExactScalar>,
}

impl ExactMat {
    pub fn zeros(dim: usize) -> ExactMat {
        ExactMat { dim, data: vec![ExactScalar::zero(); dim * dim] }
    }

    pub fn identity(dim: usize) -> ExactMat {
        let mut m = ExactMat::zeros(dim);
        for i in 0..dim {
            m[(i, i)] = ExactScalar::one();
        }
        m
    }

    pub fn from_rows(rows: &[&[ExactScalar]]) -> ExactMat {
        let dim = rows.len();
        let mut m = ExactMat::zeros(dim);
        for (i, row) in rows.iter().enumerate() {
            assert_eq!(row.len(), dim);
            for (j, v) in row.iter().enumerate() {
                m[(i, j)] = v.clone();
            }
        }
        m
    }

    pub fn mul(&self, rhs: &ExactMat) -> ExactMat {
        assert_eq!(self.dim, rhs.dim);
        let d = self.dim;
        let mut out = ExactMat::zeros(d);
        for i in 0..d {
            for k in 0..d {
                let a = &self[(i, k)];
                if a.is_zero() {
                    continue;
                }
                for j in 0..d {
                    let b = &rhs[(k, j)];
                    if b.is_zero() {
                        continue;
                    }
                    let p = a.mul(b);
                    out[(i, j)] = out[(i, j)].add(&p);
                }
            }
        }
        out
    }

    pub fn adjoint(&self) -> ExactMat {
        let d = self.dim;
        let mut out = ExactMat::zeros(d);
        for i in 0..d {
            for j in 0..d {
                out[(j, i)] = self[(i, j)].conj();
            }
        }
        out
    }

    pub fn kron(&self, rhs: &ExactMat) -> ExactMat {
        let (da, db) = (self.dim, rhs.dim);
        let mut out = ExactMat::zeros(da * db);
        for i in 0..da {
            for j in 0..da {
                if self[(i, j)].is_zero() {
                    continue;
                }
                for k in 0..db {
                    for l in 0..db {
                        out[(i * db + k, j * db + l)] = self[(i, j)].mul(&rhs[(k, l)]);
                    }
                }
            }
        }
        out
    }

    pub fn scale(&self, s: &ExactScalar) -> ExactMat {
        ExactMat { dim: self.dim, data: self.data.iter().map(|v| v.mul(s)).collect() }
    }

    pub fn times_zeta_pow(&self, j: i32) -> ExactMat {
        ExactMat { dim: self.dim, data: self.data.iter().map(|v| v.times_zeta_pow(j)).collect() }
    }

    /// Direct sum of 2x2 blocks.
    pub fn block_diag2(blocks: &[ExactMat]) -> ExactMat {
        let mut out = ExactMat::zeros(2 * blocks.len());
        for (b, m) in blocks.iter().enumerate() {
            assert_eq!(m.dim, 2);
            for i in 0..2 {
                for j in 0..2 {
                    out[(2 * b + i, 2 * b + j)] = m[(i, j)].clone();
                }
            }
        }
        out
    }

    pub fn is_identity(&self) -> bool {
        self == &ExactMat::identity(self.dim)
    }

    /// Exact unitarity: U†U = I over the ring.
    pub fn is_unitary(&self) -> bool {
        self.adjoint().mul(self).is_identity()
    }

    /// If ζ^j · self == other for some j in 0..8, return that j.
    pub fn phase_factor_to(&self, other: &ExactMat) -> Option<u8> {
        if self.dim != other.dim {
            return None;
        }
        'outer: for j in 0..8u8 {
            for (a, b) in self.data.iter().zip(&other.data) {
                if &a.times_zeta_pow(j as i32) != b {
                    continue 'outer;
                }
            }
            return Some(j);
        }
        None
    }

    /// Canonical bytes of the matrix modulo a global ζ^j phase, plus the
    /// rotation applied. Used as a hash key for mod-phase matrix identity.
    pub fn phase_canonical_bytes(&self) -> (Vec<u8>, u8) {
        let mut best: Option<(Vec<u8>, u8)> = None;
        for j in 0..8u8 {
            let rotated = self.times_zeta_pow(j as i32);
            let bytes = rotated.raw_bytes();
            if best.as_ref().is_none_or(|(b, _)| bytes < *b) {
                best = Some((bytes, j));
            }
        }
        best.unwrap()
    }

    fn raw_bytes(&self) -> Vec<u8> {
        let mut out = Vec::new();
        for v in &self.data {
            out.extend_from_slice(&v.k().to_le_bytes());
            for coeff in &v.num().c {
                let (sign, bytes) = coeff.to_bytes_le();
                out.push(match sign {
                    num_bigint::Sign::Minus => 0,
                    num_bigint::Sign::NoSign => 1,
                    num_bigint::Sign::Plus => 2,
                });
                out.extend_from_slice(&(bytes.len() as u32).to_le_bytes());
                out.extend_from_slice(&bytes);
            }
        }
        out
    }

    pub fn to_cmat(&self) -> CMat {
        CMat { dim: self.dim, data: self.data.iter().map(|v| v.to_complex()).collect() }
    }
}

impl std::ops::Index<(usize, usize)> for ExactMat {
    type Output = ExactScalar;
    fn index(&self, (i, j): (usize, usize)) -> &ExactScalar {
        &self.data[i * self.dim + j]
    }
}

impl std::ops::IndexMut<(usize, usize)> for ExactMat {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut ExactScalar {
        &mut self.data[i * self.dim + j]
    }
}

/// Exact 2x2 matrix of a one-qubit gate.
pub fn gate_exact_1q(kind: GateKind) -> ExactMat {
    let zero = ExactScalar::zero;
    let one = ExactScalar::one;
    let zeta = ExactScalar::zeta_pow;
    let h = ExactScalar::inv_sqrt2();
    let rows: [[ExactScalar; 2]; 2] = match kind {
        GateKind::H => [[h.clone(), h.clone()], [h.clone(), h.neg()]],
        GateKind::S => [[one(), zero()], [zero(), zeta(2)]],
        GateKind::Sdg => [[one(), zero()], [zero(), zeta(-2)]],
        GateKind::T => [[one(), zero()], [zero(), zeta(1)]],
        GateKind::Tdg => [[one(), zero()], [zero(), zeta(-1)]],
        GateKind::X => [[zero(), one()], [one(), zero()]],
        GateKind::Y => [[zero(), zeta(-2)], [zeta(2), zero()]],
        GateKind::Z => [[one(), zero()], [zero(), zeta(4)]],
        _ => panic!("not a one-qubit gate: {kind:?}"),
    };
    ExactMat::from_rows(&[&rows[0], &rows[1]])
}

/// A unitary with exact entries; the carrier of exact circuit semantics.
#[derive(Debug, Clone, PartialEq)]
pub struct ExactUnitary {
    pub n_qubits: u32,
    pub mat: ExactMat,
}

impl ExactUnitary {
    pub fn dim(&self) -> usize {
        self.mat.dim
    }
}

/// Dense exact simulation cap (matrix is 4^cap scalars).
pub const DENSE_EXACT_CAP: u32 = 12;
/// Dense floating-point simulation cap.
pub const DENSE_FLOAT_CAP: u32 = 14;

fn bit_mask(n_qubits: u32, qubit: u32) -> usize {
    1usize << (n_qubits - 1 - qubit)
}

/// Exact product of the circuit's gate matrices in time order.
pub fn exact_simulate(circuit: &Circuit) -> Result<ExactUnitary> {
    exact_simulate_capped(circuit, DENSE_EXACT_CAP)
}

pub fn exact_simulate_capped(circuit: &Circuit, cap: u32) -> Result<ExactUnitary> {
    let n = circuit.registers.total();
    if n > cap {
        return Err(Error::CapExceeded(format!("{n} qubits > dense exact cap {cap}")));
    }
    circuit.validate()?;
    let dim = 1usize << n;
    let mut u = ExactMat::identity(dim);
    for gate in &circuit.gates {
        apply_gate_exact(&mut u, gate, n);
    }
    Ok(ExactUnitary { n_qubits: n, mat: u })
}

fn apply_gate_exact(u: &mut ExactMat, gate: &Gate, n_qubits: u32) {
    let dim = u.dim;
    match gate.kind {
        GateKind::Cnot | GateKind::Swap => {
            let m0 = bit_mask(n_qubits, gate.q0);
            let m1 = bit_mask(n_qubits, gate.q1.unwrap());
            for row in 0..dim {
                let partner = match gate.kind {
                    GateKind::Cnot => {
                        if row & m0 == 0 || row & m1 != 0 {
                            continue;
                        }
                        row | m1
                    }
                    _ => {
                        // SWAP: exchange rows where the two bits differ (01 <-> 10)
                        if row & m0 != 0 || row & m1 == 0 {
                            continue;
                        }
                        (row | m0) & !m1
                    }
                };
                for col in 0..dim {
                    let a = row * dim + col;
                    let b = partner * dim + col;
                    u.data.swap(a, b);
                }
            }
        }
        kind => {
            let g = gate_exact_1q(kind);
            let mask = bit_mask(n_qubits, gate.q0);
            for row in 0..dim {
                if row & mask != 0 {
                    continue;
                }
                let r1 = row | mask;
                for col in 0..dim {
                    let a = row * dim + col;
                    let b = r1 * dim + col;
                    let v0 = u.data[a].clone();
                    let v1 = u.data[b].clone();
                    u.data[a] = g[(0, 0)].mul(&v0).add(&g[(0, 1)].mul(&v1));
                    u.data[b] = g[(1, 0)].mul(&v0).add(&g[(1, 1)].mul(&v1));
                }
            }
        }
    }
}

/// Floating-point product of the circuit's gate matrices in time order.
pub fn float_simulate(circuit: &Circuit) -> Result<CMat> {
    float_simulate_capped(circuit, DENSE_FLOAT_CAP)
}

pub fn float_simulate_capped(circuit: &Circuit, cap: u32) -> Result<CMat> {
    let n = circuit.registers.total();
    if n > cap {
        return Err(Error::CapExceeded(format!("{n} qubits > dense float cap {cap}")));
    }
    circuit.validate()?;
    let dim = 1usize << n;
    let mut u = CMat::identity(dim);
    for gate in &circuit.gates {
        apply_gate_float(&mut u, gate, n);
    }
    Ok(u)
}

fn apply_gate_float(u: &mut CMat, gate: &Gate, n_qubits: u32) {
    let dim = u.dim;
    match gate.kind {
        GateKind::Cnot | GateKind::Swap => {
            let m0 = bit_mask(n_qubits, gate.q0);
            let m1 = bit_mask(n_qubits, gate.q1.unwrap());
            for row in 0..dim {
                let partner = match gate.kind {
                    GateKind::Cnot => {
                        if row & m0 == 0 || row & m1 != 0 {
                            continue;
                        }
                        row | m1
                    }
                    _ => {
                        if row & m0 != 0 || row & m1 == 0 {
                            continue;
                        }
                        (row | m0) & !m1
                    }
                };
                for col in 0..dim {
                    u.data.swap(row * dim + col, partner * dim + col);
                }
            }
        }
        kind => {
            let g = gate_exact_1q(kind).to_cmat();
            let mask = bit_mask(n_qubits, gate.q0);
            for row in 0..dim {
                if row & mask != 0 {
                    continue;
                }
                let r1 = row | mask;
                for col in 0..dim {
                    let a = row * dim + col;
                    let b = r1 * dim + col;
                    let v0 = u.data[a];
                    let v1 = u.data[b];
                    u.data[a] = g[(0, 0)] * v0 + g[(0, 1)] * v1;
                    u.data[b] = g[(1, 0)] * v0 + g[(1, 1)] * v1;
                }
            }
        }
    }
}

/// Sparse exact state: basis index -> amplitude. Amplitude cancellation is
/// exact over the ring, so structured circuits keep the support tiny even
/// at forty-odd qubits.
#[derive(Debug, Clone)]
pub struct SparseState {
    pub n_qubits: u32,
    pub amps: HashMap<u64, ExactScalar>,
}

impl SparseState {
    pub fn basis(n_qubits: u32, index: u64) -> SparseState {
        assert!(n_qubits <= 63);
        let mut amps = HashMap::new();
        amps.insert(index, ExactScalar::one());
        SparseState { n_qubits, amps }
    }

    pub fn support(&self) -> usize {
        self.amps.len()
    }

    fn mask(&self, qubit: u32) -> u64 {
        1u64 << (self.n_qubits - 1 - qubit)
    }

    pub fn apply_gate(&mut self, gate: &Gate) {
        match gate.kind {
            GateKind::Cnot => {
                let mc = self.mask(gate.q0);
                let mt = self.mask(gate.q1.unwrap());
                self.amps = self
                    .amps
                    .drain()
                    .map(|(idx, amp)| (if idx & mc != 0 { idx ^ mt } else { idx }, amp))
                    .collect();
            }
            GateKind::Swap => {
                let m0 = self.mask(gate.q0);
                let m1 = self.mask(gate.q1.unwrap());
                self.amps = self
                    .amps
                    .drain()
                    .map(|(idx, amp)| {
                        let (b0, b1) = (idx & m0 != 0, idx & m1 != 0);
                        (if b0 != b1 { idx ^ m0 ^ m1 } else { idx }, amp)
                    })
                    .collect();
            }
            kind => {
                let g = gate_exact_1q(kind);
                let mask = self.mask(gate.q0);
                let mut next: HashMap<u64, ExactScalar> = HashMap::with_capacity(self.amps.len() * 2);
                for (idx, amp) in self.amps.drain() {
                    let b = usize::from(idx & mask != 0);
                    for ob in 0..2usize {
                        let coeff = &g[(ob, b)];
                        if coeff.is_zero() {
                            continue;
                        }
                        let out_idx = if ob == 1 { idx | mask } else { idx & !mask };
                        let contrib = coeff.mul(&amp);
                        match next.get_mut(&out_idx) {
                            Some(v) => {
                                let sum = v.add(&contrib);
                                if sum.is_zero() {
                                    next.remove(&out_idx);
                                } else {
                                    *v = sum;
                                }
                            }
                            None => {
                                next.insert(out_idx, contrib);
                            }
                        }
                    }
                }
                self.amps = next;
            }
        }
    }
}

/// Apply a circuit to a computational basis state, exactly.
pub fn apply_to_basis(circuit: &Circuit, index: u64) -> Result<SparseState> {
    let n = circuit.registers.total();
    if n > 63 {
        return Err(Error::CapExceeded(format!("{n} qubits > sparse index width")));
    }
    circuit.validate()?;
    let mut state = SparseState::basis(n, index);
    for gate in &circuit.gates {
        state.apply_gate(gate);
    }
    Ok(state)
}

/// The 2^n diagonal 2x2 blocks of an exactly block-diagonal unitary on
/// n + 1 qubits. Any nonzero off-block entry is an error.
pub fn block_diagonal_extract(u: &ExactUnitary, n: u32) -> Result<Vec<ExactMat>> {
    let dim = u.dim();
    if dim != 1usize << (n + 1) {
        return Err(Error::DimensionMismatch(dim, 1usize << (n + 1)));
    }
    for r in 0..dim {
        for c in 0..dim {
            if r / 2 != c / 2 && !u.mat[(r, c)].is_zero() {
                return Err(Error::NotBlockDiagonal(r, c));
            }
        }
    }
    Ok((0..dim / 2)
        .map(|b| {
            ExactMat::from_rows(&[
                &[u.mat[(2 * b, 2 * b)].clone(), u.mat[(2 * b, 2 * b + 1)].clone()],
                &[u.mat[(2 * b + 1, 2 * b)].clone(), u.mat[(2 * b + 1, 2 * b + 1)].clone()],
            ])
        })
        .collect())
}

/// Diamond distance between the channels of two unitaries:
/// sqrt(1 - d^2) where d is the distance from the origin to the convex hull
/// of the eigenvalues of U V†. Global phases drop out.
pub fn diamond_distance_unitary(u: &CMat, v: &CMat) -> Result<f64> {
    if u.dim != v.dim {
        return Err(Error::DimensionMismatch(u.dim, v.dim));
    }
    let w = u.mul(&v.adjoint());
    let eigs = eig_unitary(&w);
    let d = hull_distance_to_origin(&eigs);
    Ok((1.0 - d * d).max(0.0).sqrt())
}

/// Fast path for 2x2 unitaries. Writing W = U V† = e^{iγ}(cos(Δ/2) I +
/// i sin(Δ/2) n·σ), the distance is |sin(Δ/2)| = ‖W − (tr W/2) I‖_F / √2.
/// Unlike 1 − |tr|²/4 this stays accurate down to machine scale.
pub fn diamond_distance_2x2(u: &CMat, v: &CMat) -> f64 {
    debug_assert_eq!(u.dim, 2);
    debug_assert_eq!(v.dim, 2);
    let w = u.mul(&v.adjoint());
    let mid = (w[(0, 0)] + w[(1, 1)]) * 0.5;
    let d2 = ((w[(0, 0)] - mid).norm_sqr()
        + w[(0, 1)].norm_sqr()
        + w[(1, 0)].norm_sqr()
        + (w[(1, 1)] - mid).norm_sqr())
        * 0.5;
    d2.sqrt().min(1.0)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::circuit::Registers;
    use crate::mat::C64;
    use crate::sample::haar_su2;
    use rand_chacha::ChaCha8Rng;

    fn one_qubit_circuit(kinds: &[GateKind]) -> Circuit {
        let mut c = Circuit::new(Registers::new(0, 0, 0));
        for &k in kinds {
            c.push_one(k, 0);
        }
        c
    }

    #[test]
    fn hh_is_identity() {
        let u = exact_simulate(&one_qubit_circuit(&[GateKind::H, GateKind::H])).unwrap();
        assert!(u.mat.is_identity());
    }

    #[test]
    fn tt_is_s() {
        let u = exact_simulate(&one_qubit_circuit(&[GateKind::T, GateKind::T])).unwrap();
        assert_eq!(u.mat, gate_exact_1q(GateKind::S));
    }

    #[test]
    fn gate_matrices_are_unitary() {
        for kind in [
            GateKind::H,
            GateKind::S,
            GateKind::Sdg,
            GateKind::T,
            GateKind::Tdg,
            GateKind::X,
            GateKind::Y,
            GateKind::Z,
        ] {
            assert!(gate_exact_1q(kind).is_unitary(), "{kind:?}");
        }
    }

    /// Eq-style identity: TSH ⊕ ζTH = (I⊗S) CNOT (I⊗T) CNOT (I⊗H),
    /// with the control on the first qubit.
    fn tsh_zeta_th_circuit() -> Circuit {
        let regs = Registers::new(1, 0, 0);
        let mut c = Circuit::new(regs);
        c.push_one(GateKind::H, regs.b());
        c.push(Gate::cnot(regs.a(0), regs.b()));
        c.push_one(GateKind::T, regs.b());
        c.push(Gate::cnot(regs.a(0), regs.b()));
        c.push_one(GateKind::S, regs.b());
        c
    }

    fn word_1q(kinds: &[GateKind]) -> ExactMat {
        // Matrix product of the word, rightmost gate applied first.
        let mut m = ExactMat::identity(2);
        for &k in kinds.iter().rev() {
            m = gate_exact_1q(k).mul(&m);
        }
        m
    }

    #[test]
    fn controlled_tsh_zeta_th_identity() {
        let u = exact_simulate(&tsh_zeta_th_circuit()).unwrap();
        let tsh = word_1q(&[GateKind::T, GateKind::S, GateKind::H]);
        let zth = word_1q(&[GateKind::T, GateKind::H]).times_zeta_pow(1);
        let expected = ExactMat::block_diag2(&[tsh.clone(), zth.clone()]);
        assert_eq!(u.mat, expected);

        let blocks = block_diagonal_extract(&u, 1).unwrap();
        assert_eq!(blocks[0], tsh);
        assert_eq!(blocks[1], zth);
    }

    #[test]
    fn cnot_blocks_are_i_and_x() {
        let regs = Registers::new(1, 0, 0);
        let mut c = Circuit::new(regs);
        c.push(Gate::cnot(0, 1));
        let u = exact_simulate(&c).unwrap();
        let blocks = block_diagonal_extract(&u, 1).unwrap();
        assert!(blocks[0].is_identity());
        assert_eq!(blocks[1], gate_exact_1q(GateKind::X));
    }

    #[test]
    fn block_extract_rejects_entangling() {
        let regs = Registers::new(1, 0, 0);
        let mut c = Circuit::new(regs);
        c.push_one(GateKind::H, 0);
        let u = exact_simulate(&c).unwrap();
        assert!(matches!(block_diagonal_extract(&u, 1), Err(Error::NotBlockDiagonal(..))));
    }

    #[test]
    fn float_matches_exact() {
        let c = tsh_zeta_th_circuit();
        let exact = exact_simulate(&c).unwrap().mat.to_cmat();
        let float = float_simulate(&c).unwrap();
        assert!(exact.max_abs_diff(&float) < 1e-12);
    }

    #[test]
    fn concatenation_is_matrix_product() {
        let c1 = one_qubit_circuit(&[GateKind::H, GateKind::T]);
        let c2 = one_qubit_circuit(&[GateKind::S, GateKind::H, GateKind::Tdg]);
        let mut cat = c1.clone();
        cat.extend(c2.gates.iter().copied());
        let u1 = exact_simulate(&c1).unwrap().mat;
        let u2 = exact_simulate(&c2).unwrap().mat;
        let ucat = exact_simulate(&cat).unwrap().mat;
        assert_eq!(ucat, u2.mul(&u1));
    }

    #[test]
    fn circuits_emit_exactly_unitary_matrices() {
        let u = exact_simulate(&tsh_zeta_th_circuit()).unwrap();
        assert!(u.mat.is_unitary());
    }

    #[test]
    fn sparse_matches_dense_columns() {
        let c = tsh_zeta_th_circuit();
        let u = exact_simulate(&c).unwrap();
        for col in 0..4u64 {
            let state = apply_to_basis(&c, col).unwrap();
            for row in 0..4u64 {
                let want = &u.mat[(row as usize, col as usize)];
                match state.amps.get(&row) {
                    Some(amp) => assert_eq!(amp, want),
                    None => assert!(want.is_zero()),
                }
            }
        }
    }

    #[test]
    fn sparse_support_collapses_after_cancellation() {
        let c = one_qubit_circuit(&[GateKind::H, GateKind::T, GateKind::Tdg, GateKind::H]);
        let state = apply_to_basis(&c, 0).unwrap();
        assert_eq!(state.support(), 1);
        assert_eq!(state.amps.get(&0), Some(&ExactScalar::one()));
    }

    #[test]
    fn diamond_distance_trivial_cases() {
        let mut rng = <ChaCha8Rng as rand::SeedableRng>::seed_from_u64(11);
        let u = haar_su2(&mut rng);
        assert!(diamond_distance_unitary(&u, &u).unwrap() < 1e-12);

        let id = CMat::identity(2);
        let z = gate_exact_1q(GateKind::Z).to_cmat();
        assert!((diamond_distance_unitary(&id, &z).unwrap() - 1.0).abs() < 1e-12);

        // exp(i θ Z) vs identity: distance sin θ.
        let theta = 0.3f64;
        let mut rz = CMat::identity(2);
        rz[(0, 0)] = C64::new(theta.cos(), theta.sin());
        rz[(1, 1)] = C64::new(theta.cos(), -theta.sin());
        let d = diamond_distance_unitary(&id, &rz).unwrap();
        assert!((d - theta.sin()).abs() < 1e-12, "{d}");
    }

    #[test]
    fn dense_caps_are_enforced() {
        let big = Circuit::new(Registers::new(14, 0, 0));
        assert!(matches!(exact_simulate(&big), Err(Error::CapExceeded(_))));
        let bigger = Circuit::new(Registers::new(15, 0, 0));
        assert!(matches!(float_simulate(&bigger), Err(Error::CapExceeded(_))));
        let a = CMat::identity(2);
        let b = CMat::identity(4);
        assert!(matches!(diamond_distance_unitary(&a, &b), Err(Error::DimensionMismatch(2, 4))));
    }

    #[test]
    fn diamond_distance_phase_invariant_and_pseudometric() {
        let mut rng = <ChaCha8Rng as rand::SeedableRng>::seed_from_u64(23);
        for _ in 0..20 {
            let u = haar_su2(&mut rng);
            let v = haar_su2(&mut rng);
            let w = haar_su2(&mut rng);
            let duv = diamond_distance_unitary(&u, &v).unwrap();
            let dvu = diamond_distance_unitary(&v, &u).unwrap();
            assert!((duv - dvu).abs() < 1e-9);
            // global phase invariance
            let phase = C64::new(0.0, 0.77).exp();
            let vp = v.scale(phase);
            assert!((diamond_distance_unitary(&u, &vp).unwrap() - duv).abs() < 1e-9);
            // triangle inequality
            let duw = diamond_distance_unitary(&u, &w).unwrap();
            let dvw = diamond_distance_unitary(&v, &w).unwrap();
            assert!(duv <= duw + dvw + 1e-9);
            // 2x2 fast path agrees
            assert!((diamond_distance_2x2(&u, &v) - duv).abs() < 1e-9);
        }
    }
}
