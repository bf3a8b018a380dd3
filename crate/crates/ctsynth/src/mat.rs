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

//! Small dense complex matrices and the eigenvalue machinery needed for
//! diamond distances. Everything here is at most 16x16, so a hand-rolled
//! cyclic Jacobi solver is simpler and more dependable than pulling in a
//! LAPACK binding.

use num_complex::Complex64;

pub type C64 = Complex64;

/// Dense row-major complex matrix.
#[derive(Debug, Clone, PartialEq)]
pub struct CMat {
    pub dim: usize,
    pub data: Vec<C64>,
}

impl CMat {
    pub fn zeros(dim: usize) -> Self {
        CMat { dim, data: vec![C64::new(0.0, 0.0); dim * dim] }
    }

    pub fn identity(dim: usize) -> Self {
        let mut m = CMat::zeros(dim);
        for i in 0..dim {
            m[(i, i)] = C64::new(1.0, 0.0);
        }
        m
    }

    pub fn from_rows(rows: &[&[C64]]) -> Self {
        let dim = rows.len();
        let mut m = CMat::zeros(dim);
        for (i, row) in rows.iter().enumerate() {
            assert_eq!(row.len(), dim);
            for (j, v) in row.iter().enumerate() {
                m[(i, j)] = *v;
            }
        }
        m
    }

    pub fn mul(&self, rhs: &CMat) -> CMat {
        assert_eq!(self.dim, rhs.dim);
        let d = self.dim;
        let mut out = CMat::zeros(d);
        for i in 0..d {
            for k in 0..d {
                let a = self[(i, k)];
                if a.norm_sqr() == 0.0 {
                    continue;
                }
                for j in 0..d {
                    out[(i, j)] += a * rhs[(k, j)];
                }
            }
        }
        out
    }

    pub fn adjoint(&self) -> CMat {
        let d = self.dim;
        let mut out = CMat::zeros(d);
        for i in 0..d {
            for j in 0..d {
                out[(j, i)] = self[(i, j)].conj();
            }
        }
        out
    }

    pub fn scale(&self, s: C64) -> CMat {
        CMat { dim: self.dim, data: self.data.iter().map(|v| v * s).collect() }
    }

    pub fn sub(&self, rhs: &CMat) -> CMat {
        assert_eq!(self.dim, rhs.dim);
        CMat {
            dim: self.dim,
            data: self.data.iter().zip(&rhs.data).map(|(a, b)| a - b).collect(),
        }
    }

    pub fn kron(&self, rhs: &CMat) -> CMat {
        let (da, db) = (self.dim, rhs.dim);
        let d = da * db;
        let mut out = CMat::zeros(d);
        for i in 0..da {
            for j in 0..da {
                for k in 0..db {
                    for l in 0..db {
                        out[(i * db + k, j * db + l)] = self[(i, j)] * rhs[(k, l)];
                    }
                }
            }
        }
        out
    }

    pub fn trace(&self) -> C64 {
        (0..self.dim).map(|i| self[(i, i)]).sum()
    }

    pub fn det2(&self) -> C64 {
        assert_eq!(self.dim, 2);
        self[(0, 0)] * self[(1, 1)] - self[(0, 1)] * self[(1, 0)]
    }

    pub fn frobenius_norm(&self) -> f64 {
        self.data.iter().map(|v| v.norm_sqr()).sum::<f64>().sqrt()
    }

    pub fn max_abs_diff(&self, rhs: &CMat) -> f64 {
        self.data
            .iter()
            .zip(&rhs.data)
            .map(|(a, b)| (a - b).norm())
            .fold(0.0, f64::max)
    }

    pub fn is_unitary(&self, tol: f64) -> bool {
        self.adjoint().mul(self).max_abs_diff(&CMat::identity(self.dim)) < tol
    }

    /// Direct sum of 2x2 blocks.
    pub fn block_diag2(blocks: &[CMat]) -> CMat {
        let d = 2 * blocks.len();
        let mut out = CMat::zeros(d);
        for (b, m) in blocks.iter().enumerate() {
            assert_eq!(m.dim, 2);
            for i in 0..2 {
                for j in 0..2 {
                    out[(2 * b + i, 2 * b + j)] = m[(i, j)];
                }
            }
        }
        out
    }
}

impl std::ops::Index<(usize, usize)> for CMat {
    type Output = C64;
    fn index(&self, (i, j): (usize, usize)) -> &C64 {
        &self.data[i * self.dim + j]
    }
}

impl std::ops::IndexMut<(usize, usize)> for CMat {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut C64 {
        &mut self.data[i * self.dim + j]
    }
}

/// Eigen-decomposition of a Hermitian matrix by cyclic Jacobi rotations.
/// Returns (eigenvalues, unitary Q with columns the eigenvectors), so that
/// A = Q diag(w) Q†.
pub fn eig_hermitian(a: &CMat) -> (Vec<f64>, CMat) {
    let d = a.dim;
    let mut m = a.clone();
    let mut q = CMat::identity(d);
    let scale = a.frobenius_norm().max(1e-300);
    for _sweep in 0..60 {
        let mut off = 0.0f64;
        for i in 0..d {
            for j in (i + 1)..d {
                off = off.max(m[(i, j)].norm());
            }
        }
        if off < 1e-15 * scale {
            break;
        }
        for p in 0..d {
            for r in (p + 1)..d {
                let apr = m[(p, r)];
                if apr.norm() < 1e-18 * scale {
                    continue;
                }
                // Zero the (p, r) entry of the Hermitian block
                // [[alpha, a], [conj(a), beta]] with the plane rotation
                // G = [[c, s], [-conj(s), c]], s = phase(a) sin(theta),
                // tan(2 theta) = 2|a| / (beta - alpha).
                let alpha = m[(p, p)].re;
                let beta = m[(r, r)].re;
                let abs = apr.norm();
                let phase = apr / abs;
                let theta = 0.5 * (2.0 * abs).atan2(beta - alpha);
                let c = C64::new(theta.cos(), 0.0);
                let s = phase * theta.sin();
                // m <- (m G) then G† (m G), in place; q <- q G.
                for i in 0..d {
                    let (mp, mr) = (m[(i, p)], m[(i, r)]);
                    m[(i, p)] = mp * c - mr * s.conj();
                    m[(i, r)] = mp * s + mr * c;
                }
                for j in 0..d {
                    let (mp, mr) = (m[(p, j)], m[(r, j)]);
                    m[(p, j)] = mp * c - mr * s;
                    m[(r, j)] = mp * s.conj() + mr * c;
                }
                for i in 0..d {
                    let (qp, qr) = (q[(i, p)], q[(i, r)]);
                    q[(i, p)] = qp * c - qr * s.conj();
                    q[(i, r)] = qp * s + qr * c;
                }
            }
        }
    }
    let w = (0..d).map(|i| m[(i, i)].re).collect();
    (w, q)
}

/// Eigenvalues of a unitary matrix, all on the unit circle.
///
/// A unitary W is normal, so its Hermitian and anti-Hermitian parts commute
/// and can be diagonalized in two stages. This stays accurate for clustered
/// and repeated eigenvalues, which a generic root finder would not.
pub fn eig_unitary(w: &CMat) -> Vec<C64> {
    let d = w.dim;
    let wd = w.adjoint();
    let mut h = CMat::zeros(d);
    for i in 0..d * d {
        h.data[i] = (w.data[i] + wd.data[i]) * 0.5;
    }
    let (re_parts, q) = eig_hermitian(&h);

    // Group eigenvalues of the Hermitian part into degenerate clusters.
    let mut order: Vec<usize> = (0..d).collect();
    order.sort_by(|&i, &j| re_parts[i].total_cmp(&re_parts[j]));
    let mut eigs = Vec::with_capacity(d);
    let mut start = 0;
    while start < d {
        let mut end = start + 1;
        while end < d && (re_parts[order[end]] - re_parts[order[start]]).abs() < 1e-8 {
            end += 1;
        }
        let cluster: Vec<usize> = order[start..end].to_vec();
        let k = cluster.len();
        // Restrict W to the cluster's invariant subspace.
        let mut b = CMat::zeros(k);
        for (bi, &ci) in cluster.iter().enumerate() {
            for (bj, &cj) in cluster.iter().enumerate() {
                let mut v = C64::new(0.0, 0.0);
                for r in 0..d {
                    for s in 0..d {
                        v += q[(r, ci)].conj() * w[(r, s)] * q[(s, cj)];
                    }
                }
                b[(bi, bj)] = v;
            }
        }
        // Within the cluster the Hermitian part is ~const, so the
        // anti-Hermitian part separates the eigenvalues.
        let bd = b.adjoint();
        let mut s_mat = CMat::zeros(k);
        for i in 0..k * k {
            s_mat.data[i] = (b.data[i] - bd.data[i]) * C64::new(0.0, -0.5);
        }
        let (im_parts, _) = eig_hermitian(&s_mat);
        for im in im_parts {
            let lambda = C64::new(re_parts[order[start]], im);
            // Unitary spectrum lies on the unit circle; renormalize.
            let n = lambda.norm();
            eigs.push(if n > 1e-12 { lambda / n } else { lambda });
        }
        start = end;
    }
    eigs
}

/// Distance from the origin to the convex hull of points on the unit circle.
///
/// Points are sorted by phase; the hull of circle points is their polygon in
/// phase order. The origin lies inside iff no phase gap reaches pi, else the
/// minimum is attained on one of the chords (or an endpoint).
pub fn hull_distance_to_origin(points: &[C64]) -> f64 {
    assert!(!points.is_empty());
    if points.len() == 1 {
        return points[0].norm();
    }
    let mut phases: Vec<f64> = points.iter().map(|p| p.im.atan2(p.re)).collect();
    phases.sort_by(f64::total_cmp);
    let n = phases.len();
    let mut max_gap = 0.0f64;
    for i in 0..n {
        let next = if i + 1 == n { phases[0] + std::f64::consts::TAU } else { phases[i + 1] };
        max_gap = max_gap.max(next - phases[i]);
    }
    if max_gap < std::f64::consts::PI {
        return 0.0;
    }
    let pts: Vec<C64> = phases.iter().map(|&t| C64::new(t.cos(), t.sin())).collect();
    let mut best = f64::INFINITY;
    for i in 0..n {
        let a = pts[i];
        let b = pts[(i + 1) % n];
        best = best.min(point_segment_distance(a, b));
    }
    best
}

/// Determinant of a 4x4 complex matrix by Laplace expansion.
pub fn det4(m: &CMat) -> C64 {
    assert_eq!(m.dim, 4);
    fn det3(m: &CMat, rows: [usize; 3], cols: [usize; 3]) -> C64 {
        let e = |i: usize, j: usize| m[(rows[i], cols[j])];
        e(0, 0) * (e(1, 1) * e(2, 2) - e(1, 2) * e(2, 1))
            - e(0, 1) * (e(1, 0) * e(2, 2) - e(1, 2) * e(2, 0))
            + e(0, 2) * (e(1, 0) * e(2, 1) - e(1, 1) * e(2, 0))
    }
    let mut det = C64::new(0.0, 0.0);
    let all = [1usize, 2, 3];
    for j in 0..4 {
        let cols: Vec<usize> = (0..4).filter(|&c| c != j).collect();
        let minor = det3(m, all, [cols[0], cols[1], cols[2]]);
        let sign = if j % 2 == 0 { 1.0 } else { -1.0 };
        det += m[(0, j)] * minor * sign;
    }
    det
}

fn point_segment_distance(a: C64, b: C64) -> f64 {
    let ab = b - a;
    let len2 = ab.norm_sqr();
    if len2 < 1e-30 {
        return a.norm();
    }
    // Project the origin onto the segment: t = -<a, ab> / |ab|^2
    let t = (-(a.re * ab.re + a.im * ab.im) / len2).clamp(0.0, 1.0);
    (a + ab * t).norm()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn random_unitary(dim: usize, seed: u64) -> CMat {
        // Ginibre + Gram-Schmidt with a tiny xorshift; test-only.
        let mut state = seed.wrapping_mul(0x9E3779B97F4A7C15).wrapping_add(1);
        let mut next = move || {
            state ^= state << 13;
            state ^= state >> 7;
            state ^= state << 17;
            (state >> 11) as f64 / (1u64 << 53) as f64 - 0.5
        };
        let mut cols: Vec<Vec<C64>> = (0..dim)
            .map(|_| (0..dim).map(|_| C64::new(next(), next())).collect())
            .collect();
        for i in 0..dim {
            for j in 0..i {
                let dot: C64 = (0..dim).map(|r| cols[j][r].conj() * cols[i][r]).sum();
                for r in 0..dim {
                    let v = cols[j][r];
                    cols[i][r] -= dot * v;
                }
            }
            let norm: f64 = cols[i].iter().map(|v| v.norm_sqr()).sum::<f64>().sqrt();
            for v in cols[i].iter_mut() {
                *v /= norm;
            }
        }
        let mut m = CMat::zeros(dim);
        for i in 0..dim {
            for j in 0..dim {
                m[(i, j)] = cols[j][i];
            }
        }
        m
    }

    #[test]
    fn hermitian_eig_recovers_diagonal() {
        let u = random_unitary(4, 7);
        let mut d = CMat::zeros(4);
        let w = [3.0, -1.0, 0.5, 0.5];
        for i in 0..4 {
            d[(i, i)] = C64::new(w[i], 0.0);
        }
        let a = u.mul(&d).mul(&u.adjoint());
        let (mut got, q) = eig_hermitian(&a);
        got.sort_by(f64::total_cmp);
        let mut want = w;
        want.sort_by(f64::total_cmp);
        for (g, e) in got.iter().zip(want.iter()) {
            assert!((g - e).abs() < 1e-10, "{g} vs {e}");
        }
        assert!(q.is_unitary(1e-10));
    }

    #[test]
    fn unitary_eig_identity_is_exact() {
        let eigs = eig_unitary(&CMat::identity(4));
        for e in eigs {
            assert!((e - C64::new(1.0, 0.0)).norm() < 1e-12);
        }
    }

    #[test]
    fn unitary_eig_matches_construction() {
        let u = random_unitary(4, 13);
        let phases = [0.3f64, -1.2, 0.3, 2.9];
        let mut d = CMat::zeros(4);
        for i in 0..4 {
            d[(i, i)] = C64::new(phases[i].cos(), phases[i].sin());
        }
        let w = u.mul(&d).mul(&u.adjoint());
        let mut got: Vec<f64> = eig_unitary(&w).iter().map(|e| e.im.atan2(e.re)).collect();
        got.sort_by(f64::total_cmp);
        let mut want = phases;
        want.sort_by(f64::total_cmp);
        for (g, e) in got.iter().zip(want.iter()) {
            assert!((g - e).abs() < 1e-9, "{g} vs {e}");
        }
    }

    #[test]
    fn hull_distance_basics() {
        let one = C64::new(1.0, 0.0);
        assert!((hull_distance_to_origin(&[one]) - 1.0).abs() < 1e-15);
        // Antipodal points: hull passes through the origin.
        assert!(hull_distance_to_origin(&[one, -one]) < 1e-15);
        // e^{±iθ}: chord at distance cos θ.
        let t = 0.7f64;
        let pts = [C64::new(t.cos(), t.sin()), C64::new(t.cos(), -t.sin())];
        assert!((hull_distance_to_origin(&pts) - t.cos()).abs() < 1e-12);
    }
}
