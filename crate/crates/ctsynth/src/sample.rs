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

//! Seeded Haar sampling of SU(2), U(2) and SU(4) targets. Benchmarks and
//! "w.h.p." style tests need reproducible targets, so everything takes an
//! explicit rng.

use crate::mat::{det4, CMat, C64};
use rand::Rng;
use rand_chacha::ChaCha8Rng;

pub fn seeded_rng(seed: u64) -> ChaCha8Rng {
    <ChaCha8Rng as rand::SeedableRng>::seed_from_u64(seed)
}

fn gaussian_pair(rng: &mut impl Rng) -> (f64, f64) {
    // Box-Muller
    let u1: f64 = rng.random::<f64>().max(1e-300);
    let u2: f64 = rng.random();
    let r = (-2.0 * u1.ln()).sqrt();
    let t = std::f64::consts::TAU * u2;
    (r * t.cos(), r * t.sin())
}

/// Haar-random SU(2) via a uniform unit quaternion.
pub fn haar_su2(rng: &mut impl Rng) -> CMat {
    let (a, b) = gaussian_pair(rng);
    let (c, d) = gaussian_pair(rng);
    let n = (a * a + b * b + c * c + d * d).sqrt();
    let (a, b, c, d) = (a / n, b / n, c / n, d / n);
    // q = a + b i + c j + d k  ->  [[a+bi, c+di], [-c+di, a-bi]]
    CMat::from_rows(&[
        &[C64::new(a, b), C64::new(c, d)],
        &[C64::new(-c, d), C64::new(a, -b)],
    ])
}

/// Haar-random U(2): Haar SU(2) times a uniform global phase.
pub fn haar_u2(rng: &mut impl Rng) -> CMat {
    let phase = C64::from_polar(1.0, std::f64::consts::TAU * rng.random::<f64>());
    haar_su2(rng).scale(phase)
}

/// Haar-random SU(4): complex Ginibre, QR by Gram-Schmidt with the phase
/// convention fixed, then a determinant root to land in SU(4).
pub fn haar_su4(rng: &mut impl Rng) -> CMat {
    let dim = 4;
    let mut cols: Vec<Vec<C64>> = (0..dim)
        .map(|_| {
            (0..dim)
                .map(|_| {
                    let (re, im) = gaussian_pair(rng);
                    C64::new(re, im)
                })
                .collect()
        })
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
    let mut u = CMat::zeros(dim);
    for i in 0..dim {
        for j in 0..dim {
            u[(i, j)] = cols[j][i];
        }
    }
    // det(u) is a unit-modulus number; divide by its fourth root.
    let det = det4(&u);
    let root = C64::from_polar(1.0, det.arg() / 4.0);
    u.scale(root.inv())
}


#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn haar_su2_is_special_unitary() {
        let mut rng = seeded_rng(1);
        for _ in 0..50 {
            let u = haar_su2(&mut rng);
            assert!(u.is_unitary(1e-12));
            assert!((u.det2() - C64::new(1.0, 0.0)).norm() < 1e-12);
        }
    }

    #[test]
    fn haar_su4_is_special_unitary() {
        let mut rng = seeded_rng(2);
        for _ in 0..20 {
            let u = haar_su4(&mut rng);
            assert!(u.is_unitary(1e-10));
            assert!((det4(&u) - C64::new(1.0, 0.0)).norm() < 1e-10);
        }
    }

    #[test]
    fn seeding_is_reproducible() {
        let a = haar_su4(&mut seeded_rng(7));
        let b = haar_su4(&mut seeded_rng(7));
        assert_eq!(a.data, b.data);
    }
}
