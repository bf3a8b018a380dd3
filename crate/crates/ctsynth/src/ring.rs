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

//! Exact arithmetic in the rings Z[√2], Z[1/√2] and Z[ζ] with ζ = e^{iπ/4}.
//!
//! Every scalar that appears in a Clifford+T unitary lives in Z[ζ]
//! scaled by a power of 1/√2, so circuits can be simulated and compared
//! without any floating point. Coefficients are arbitrary precision:
//! entries of deep circuits overflow machine integers.

use num_bigint::BigInt;
use num_complex::Complex64;
use num_traits::{Signed, ToPrimitive, Zero};

/// An element a + b√2 of Z[√2].
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct RootTwoInt {
    pub a: BigInt,
    pub b: BigInt,
}

impl RootTwoInt {
    pub fn new(a: impl Into<BigInt>, b: impl Into<BigInt>) -> Self {
        RootTwoInt { a: a.into(), b: b.into() }
    }

    pub fn zero() -> Self {
        RootTwoInt::new(0, 0)
    }

    pub fn one() -> Self {
        RootTwoInt::new(1, 0)
    }

    pub fn is_zero(&self) -> bool {
        self.a.is_zero() && self.b.is_zero()
    }

    pub fn add(&self, rhs: &Self) -> Self {
        RootTwoInt { a: &self.a + &rhs.a, b: &self.b + &rhs.b }
    }

    pub fn sub(&self, rhs: &Self) -> Self {
        RootTwoInt { a: &self.a - &rhs.a, b: &self.b - &rhs.b }
    }

    pub fn mul(&self, rhs: &Self) -> Self {
        // (a + b√2)(c + d√2) = ac + 2bd + (ad + bc)√2
        RootTwoInt {
            a: &self.a * &rhs.a + 2 * (&self.b * &rhs.b),
            b: &self.a * &rhs.b + &self.b * &rhs.a,
        }
    }

    pub fn neg(&self) -> Self {
        RootTwoInt { a: -&self.a, b: -&self.b }
    }

    /// The ring automorphism a + b√2 ↦ a − b√2.
    pub fn conj_sqrt2(&self) -> Self {
        RootTwoInt { a: self.a.clone(), b: -&self.b }
    }

    /// Multiplication by √2.
    pub fn times_sqrt2(&self) -> Self {
        RootTwoInt { a: 2 * &self.b, b: self.a.clone() }
    }

    /// Exact division by √2, when possible. (a + b√2)/√2 = b + (a/2)√2.
    pub fn div_sqrt2(&self) -> Option<Self> {
        if (&self.a % 2u8).is_zero() {
            Some(RootTwoInt { a: self.b.clone(), b: &self.a / 2 })
        } else {
            None
        }
    }

    pub fn to_f64(&self) -> f64 {
        self.a.to_f64().unwrap_or(f64::NAN) + self.b.to_f64().unwrap_or(f64::NAN) * std::f64::consts::SQRT_2
    }
}

/// An element of Z[1/√2] in the canonical form num / √2^k, where either
/// k = 0 or num is not divisible by √2 in Z[√2]. The canonical k is the
/// smallest denominator exponent of the value.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct DyadicRootTwo {
    num: RootTwoInt,
    k: u32,
}

impl DyadicRootTwo {
    pub fn new(num: RootTwoInt, k: u32) -> Self {
        let mut v = DyadicRootTwo { num, k };
        v.canonicalize();
        v
    }

    pub fn from_int(n: impl Into<BigInt>) -> Self {
        DyadicRootTwo::new(RootTwoInt::new(n, 0), 0)
    }

    pub fn zero() -> Self {
        DyadicRootTwo { num: RootTwoInt::zero(), k: 0 }
    }

    pub fn one() -> Self {
        DyadicRootTwo { num: RootTwoInt::one(), k: 0 }
    }

    fn canonicalize(&mut self) {
        if self.num.is_zero() {
            self.k = 0;
            return;
        }
        while self.k > 0 {
            match self.num.div_sqrt2() {
                Some(reduced) => {
                    self.num = reduced;
                    self.k -= 1;
                }
                None => break,
            }
        }
    }

    pub fn num(&self) -> &RootTwoInt {
        &self.num
    }

    pub fn k(&self) -> u32 {
        self.k
    }

    pub fn is_zero(&self) -> bool {
        self.num.is_zero()
    }

    /// Rescale so the denominator exponent is exactly `k` (k ≥ sde).
    fn with_k(&self, k: u32) -> RootTwoInt {
        let mut num = self.num.clone();
        for _ in self.k..k {
            num = num.times_sqrt2();
        }
        num
    }

    pub fn add(&self, rhs: &Self) -> Self {
        let k = self.k.max(rhs.k);
        DyadicRootTwo::new(self.with_k(k).add(&rhs.with_k(k)), k)
    }

    pub fn sub(&self, rhs: &Self) -> Self {
        let k = self.k.max(rhs.k);
        DyadicRootTwo::new(self.with_k(k).sub(&rhs.with_k(k)), k)
    }

    pub fn mul(&self, rhs: &Self) -> Self {
        DyadicRootTwo::new(self.num.mul(&rhs.num), self.k + rhs.k)
    }

    pub fn neg(&self) -> Self {
        DyadicRootTwo { num: self.num.neg(), k: self.k }
    }

    pub fn to_f64(&self) -> f64 {
        let mut v = self.num.to_f64() / 2f64.powi((self.k / 2) as i32);
        if self.k % 2 == 1 {
            v /= std::f64::consts::SQRT_2;
        }
        v
    }
}

/// Smallest denominator exponent: the minimal k ≥ 0 with √2^k · x ∈ Z[√2].
pub fn sde(x: &DyadicRootTwo) -> u32 {
    x.k()
}

/// An element a + bζ + cζ² + dζ³ of Z[ζ], ζ = e^{iπ/4}, with ζ⁴ = −1
/// reduction applied so the representation is unique.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct OmegaInt {
    pub c: [BigInt; 4],
}

impl OmegaInt {
    pub fn new(a: impl Into<BigInt>, b: impl Into<BigInt>, c: impl Into<BigInt>, d: impl Into<BigInt>) -> Self {
        OmegaInt { c: [a.into(), b.into(), c.into(), d.into()] }
    }

    pub fn zero() -> Self {
        OmegaInt::new(0, 0, 0, 0)
    }

    pub fn one() -> Self {
        OmegaInt::new(1, 0, 0, 0)
    }

    pub fn is_zero(&self) -> bool {
        self.c.iter().all(|x| x.is_zero())
    }

    pub fn add(&self, rhs: &Self) -> Self {
        OmegaInt {
            c: [
                &self.c[0] + &rhs.c[0],
                &self.c[1] + &rhs.c[1],
                &self.c[2] + &rhs.c[2],
                &self.c[3] + &rhs.c[3],
            ],
        }
    }

    pub fn sub(&self, rhs: &Self) -> Self {
        OmegaInt {
            c: [
                &self.c[0] - &rhs.c[0],
                &self.c[1] - &rhs.c[1],
                &self.c[2] - &rhs.c[2],
                &self.c[3] - &rhs.c[3],
            ],
        }
    }

    pub fn mul(&self, rhs: &Self) -> Self {
        let mut out = [BigInt::ZERO, BigInt::ZERO, BigInt::ZERO, BigInt::ZERO];
        for i in 0..4 {
            if self.c[i].is_zero() {
                continue;
            }
            for j in 0..4 {
                if rhs.c[j].is_zero() {
                    continue;
                }
                let p = &self.c[i] * &rhs.c[j];
                if i + j < 4 {
                    out[i + j] += p;
                } else {
                    out[i + j - 4] -= p; // ζ⁴ = −1
                }
            }
        }
        OmegaInt { c: out }
    }

    pub fn neg(&self) -> Self {
        OmegaInt { c: [-&self.c[0], -&self.c[1], -&self.c[2], -&self.c[3]] }
    }

    /// Complex conjugation: ζ ↦ ζ⁻¹ = −ζ³.
    pub fn conj(&self) -> Self {
        OmegaInt { c: [self.c[0].clone(), -&self.c[3], -&self.c[2], -&self.c[1]] }
    }

    /// Multiplication by ζ^j for any integer j.
    pub fn times_zeta_pow(&self, j: i32) -> Self {
        let j = j.rem_euclid(8) as usize;
        let mut out = [BigInt::ZERO, BigInt::ZERO, BigInt::ZERO, BigInt::ZERO];
        for (i, coeff) in self.c.iter().enumerate() {
            let pos = (i + j) % 8;
            if pos < 4 {
                out[pos] += coeff;
            } else {
                out[pos - 4] -= coeff;
            }
        }
        OmegaInt { c: out }
    }

    /// Multiplication by √2 = ζ − ζ³.
    pub fn times_sqrt2(&self) -> Self {
        let [a, b, c, d] = &self.c;
        OmegaInt { c: [b - d, a + c, b + d, c - a] }
    }

    /// Exact division by √2: possible iff c₀ ≡ c₂ and c₁ ≡ c₃ (mod 2).
    pub fn div_sqrt2(&self) -> Option<Self> {
        let [a, b, c, d] = &self.c;
        if ((a + c) % 2u8).is_zero() && ((b + d) % 2u8).is_zero() {
            Some(OmegaInt { c: [(b - d) / 2, (a + c) / 2, (b + d) / 2, (c - a) / 2] })
        } else {
            None
        }
    }

    /// Real elements are exactly those of the form a + b(ζ − ζ³) = a + b√2.
    pub fn as_real(&self) -> Option<RootTwoInt> {
        if self.c[2].is_zero() && self.c[1] == -&self.c[3] {
            Some(RootTwoInt { a: self.c[0].clone(), b: self.c[1].clone() })
        } else {
            None
        }
    }

    pub fn to_complex(&self) -> Complex64 {
        let h = std::f64::consts::FRAC_1_SQRT_2;
        let f = |x: &BigInt| x.to_f64().unwrap_or(f64::NAN);
        let (a, b, c, d) = (f(&self.c[0]), f(&self.c[1]), f(&self.c[2]), f(&self.c[3]));
        Complex64::new(a + (b - d) * h, c + (b + d) * h)
    }

    fn coeff_bound(&self) -> BigInt {
        self.c.iter().map(|x| x.abs()).max().unwrap()
    }
}

/// An element of Z[ζ, 1/√2] in the canonical form num / √2^k, where
/// either k = 0 or num is not divisible by ζ − ζ³ in Z[ζ]. Entries of
/// exact unitaries are represented this way.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct ExactScalar {
    num: OmegaInt,
    k: u32,
}

/// Canonical form for num / √2^k; the value is preserved exactly.
pub fn reduce(num: OmegaInt, k: u32) -> ExactScalar {
    let mut v = ExactScalar { num, k };
    v.canonicalize();
    v
}

impl ExactScalar {
    pub fn new(num: OmegaInt, k: u32) -> Self {
        reduce(num, k)
    }

    pub fn zero() -> Self {
        ExactScalar { num: OmegaInt::zero(), k: 0 }
    }

    pub fn one() -> Self {
        ExactScalar { num: OmegaInt::one(), k: 0 }
    }

    pub fn from_int(n: impl Into<BigInt>) -> Self {
        ExactScalar { num: OmegaInt::new(n, 0, 0, 0), k: 0 }
    }

    /// ζ^j as an exact scalar.
    pub fn zeta_pow(j: i32) -> Self {
        ExactScalar { num: OmegaInt::one().times_zeta_pow(j), k: 0 }
    }

    /// 1/√2 = (ζ − ζ³)/2.
    pub fn inv_sqrt2() -> Self {
        ExactScalar::new(OmegaInt::one(), 1)
    }

    fn canonicalize(&mut self) {
        if self.num.is_zero() {
            self.k = 0;
            return;
        }
        while self.k > 0 {
            match self.num.div_sqrt2() {
                Some(reduced) => {
                    self.num = reduced;
                    self.k -= 1;
                }
                None => break,
            }
        }
    }

    pub fn num(&self) -> &OmegaInt {
        &self.num
    }

    pub fn k(&self) -> u32 {
        self.k
    }

    pub fn is_zero(&self) -> bool {
        self.num.is_zero()
    }

    pub fn is_one(&self) -> bool {
        self.k == 0 && self.num == OmegaInt::one()
    }

    fn with_k(&self, k: u32) -> OmegaInt {
        let mut num = self.num.clone();
        for _ in self.k..k {
            num = num.times_sqrt2();
        }
        num
    }

    pub fn add(&self, rhs: &Self) -> Self {
        let k = self.k.max(rhs.k);
        ExactScalar::new(self.with_k(k).add(&rhs.with_k(k)), k)
    }

    pub fn sub(&self, rhs: &Self) -> Self {
        let k = self.k.max(rhs.k);
        ExactScalar::new(self.with_k(k).sub(&rhs.with_k(k)), k)
    }

    pub fn mul(&self, rhs: &Self) -> Self {
        ExactScalar::new(self.num.mul(&rhs.num), self.k + rhs.k)
    }

    pub fn neg(&self) -> Self {
        ExactScalar { num: self.num.neg(), k: self.k }
    }

    pub fn conj(&self) -> Self {
        // Conjugation commutes with division by √2, so k is still canonical.
        ExactScalar { num: self.num.conj(), k: self.k }
    }

    pub fn times_zeta_pow(&self, j: i32) -> Self {
        // |ζ| = 1, so canonicality is preserved.
        ExactScalar { num: self.num.times_zeta_pow(j), k: self.k }
    }

    /// Divide by √2^j.
    pub fn div_sqrt2_pow(&self, j: u32) -> Self {
        ExactScalar::new(self.num.clone(), self.k + j)
    }

    /// The value as a real element of Z[1/√2], if it is real.
    pub fn as_dyadic_root_two(&self) -> Option<DyadicRootTwo> {
        self.num.as_real().map(|r| DyadicRootTwo::new(r, self.k))
    }

    pub fn to_complex(&self) -> Complex64 {
        // 2^(k/2) is exact in f64; at most one inexact √2 division.
        let mut z = self.num.to_complex() / 2f64.powi((self.k / 2) as i32);
        if self.k % 2 == 1 {
            z /= std::f64::consts::SQRT_2;
        }
        z
    }

    /// Crude magnitude bound used by tests to keep proptest inputs sane.
    pub fn coeff_bound(&self) -> BigInt {
        self.num.coeff_bound()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn omega(a: i64, b: i64, c: i64, d: i64) -> OmegaInt {
        OmegaInt::new(a, b, c, d)
    }

    /// Independent membership test by brute force: √2^k·x ∈ Z[√2] iff
    /// repeated multiplication by √2 lands on integer coordinates.
    fn sde_brute_force(num: &RootTwoInt, k: u32) -> u32 {
        for j in 0..=k {
            // value · √2^j = num · √2^j / √2^k ∈ Z[√2] iff k − j divisions succeed
            let mut v = num.clone();
            let mut ok = true;
            for _ in 0..(k - j) {
                match v.div_sqrt2() {
                    Some(r) => v = r,
                    None => {
                        ok = false;
                        break;
                    }
                }
            }
            if ok {
                return j;
            }
        }
        k
    }

    #[test]
    fn sde_of_integer_is_zero() {
        assert_eq!(sde(&DyadicRootTwo::from_int(3)), 0);
    }

    #[test]
    fn sde_of_inv_sqrt2_is_one() {
        // 1/√2 = √2/2 = (0 + 1·√2)/√2²
        let x = DyadicRootTwo::new(RootTwoInt::new(0, 1), 2);
        assert_eq!(sde(&x), 1);
    }

    #[test]
    fn sde_of_one_plus_sqrt2_over_two() {
        // (1+√2)/2 = (1+√2)/√2²; brute-force oracle confirms k = 2 is minimal.
        let x = DyadicRootTwo::new(RootTwoInt::new(1, 1), 2);
        assert_eq!(sde_brute_force(&RootTwoInt::new(1, 1), 2), 2);
        assert_eq!(sde(&x), 2);
    }

    #[test]
    fn reduce_sqrt2_over_sqrt2() {
        // (ζ − ζ³)/√2 = 1
        let v = reduce(omega(0, 1, 0, -1), 1);
        assert_eq!(v, ExactScalar::one());
    }

    #[test]
    fn reduce_two_over_two() {
        let v = reduce(omega(2, 0, 0, 0), 2);
        assert_eq!(v, ExactScalar::one());
    }

    #[test]
    fn reduce_one_plus_i_over_sqrt2() {
        // (1 + ζ²)/√2 = (1 + i)/√2 = ζ, since 1 + i = √2 ζ.
        let v = reduce(omega(1, 0, 1, 0), 1);
        assert_eq!(v, ExactScalar::zeta_pow(1));
    }

    #[test]
    fn reduce_irreducible_stays() {
        // 1 + ζ is not divisible by ζ − ζ³ (coefficient parity fails).
        let v = reduce(omega(1, 1, 0, 0), 1);
        assert_eq!(v.k(), 1);
        assert_eq!(v.num(), &omega(1, 1, 0, 0));
    }

    #[test]
    fn to_complex_examples() {
        let one = ExactScalar::one().to_complex();
        assert!((one - Complex64::new(1.0, 0.0)).norm() < 1e-15);

        let zeta = ExactScalar::zeta_pow(1).to_complex();
        let h = std::f64::consts::FRAC_1_SQRT_2;
        assert!((zeta - Complex64::new(h, h)).norm() < 1e-15);

        // (1 + ζ²)/√2 = (1 + i)/√2
        let v = ExactScalar::new(omega(1, 0, 1, 0), 1).to_complex();
        assert!((v - Complex64::new(h, h)).norm() < 1e-15);
    }

    #[test]
    fn zeta_eighth_power_is_one() {
        let mut z = ExactScalar::one();
        for _ in 0..8 {
            z = z.times_zeta_pow(1);
        }
        assert_eq!(z, ExactScalar::one());
        assert_eq!(ExactScalar::zeta_pow(4), ExactScalar::from_int(-1));
    }

    #[test]
    fn conj_is_involution_and_matches_complex() {
        let v = ExactScalar::new(omega(3, -2, 5, 7), 3);
        assert_eq!(v.conj().conj(), v);
        let z = v.to_complex();
        assert!((v.conj().to_complex() - z.conj()).norm() < 1e-12);
    }

    fn arb_omega() -> impl Strategy<Value = OmegaInt> {
        (-1000i64..1000, -1000i64..1000, -1000i64..1000, -1000i64..1000)
            .prop_map(|(a, b, c, d)| OmegaInt::new(a, b, c, d))
    }

    fn arb_root2() -> impl Strategy<Value = RootTwoInt> {
        (-1000i64..1000, -1000i64..1000).prop_map(|(a, b)| RootTwoInt::new(a, b))
    }

    fn arb_scalar() -> impl Strategy<Value = ExactScalar> {
        (arb_omega(), 0u32..6).prop_map(|(n, k)| ExactScalar::new(n, k))
    }

    fn arb_dyadic() -> impl Strategy<Value = DyadicRootTwo> {
        (arb_root2(), 0u32..6).prop_map(|(n, k)| DyadicRootTwo::new(n, k))
    }

    proptest! {
        #[test]
        fn ring_laws_omega(x in arb_omega(), y in arb_omega(), z in arb_omega()) {
            prop_assert_eq!(x.add(&y), y.add(&x));
            prop_assert_eq!(x.mul(&y), y.mul(&x));
            prop_assert_eq!(x.mul(&y).mul(&z), x.mul(&y.mul(&z)));
            prop_assert_eq!(x.mul(&y.add(&z)), x.mul(&y).add(&x.mul(&z)));
        }

        #[test]
        fn ring_laws_root2(x in arb_root2(), y in arb_root2(), z in arb_root2()) {
            prop_assert_eq!(x.mul(&y), y.mul(&x));
            prop_assert_eq!(x.mul(&y).mul(&z), x.mul(&y.mul(&z)));
            prop_assert_eq!(x.mul(&y.add(&z)), x.mul(&y).add(&x.mul(&z)));
        }

        #[test]
        fn conj_sqrt2_is_homomorphism(x in arb_root2(), y in arb_root2()) {
            prop_assert_eq!(x.mul(&y).conj_sqrt2(), x.conj_sqrt2().mul(&y.conj_sqrt2()));
            prop_assert_eq!(x.conj_sqrt2().conj_sqrt2(), x);
        }

        #[test]
        fn sde_subadditive(x in arb_dyadic(), y in arb_dyadic()) {
            prop_assert!(sde(&x.mul(&y)) <= sde(&x) + sde(&y));
            prop_assert!(sde(&x.add(&y)) <= sde(&x).max(sde(&y)));
        }

        #[test]
        fn to_complex_homomorphism(x in arb_scalar(), y in arb_scalar()) {
            // 1e-12 relative to the magnitudes involved; the absolute
            // error of f64 evaluation scales with the coefficients.
            let sum = x.add(&y).to_complex();
            let prod = x.mul(&y).to_complex();
            let scale = 1.0 + x.to_complex().norm() + y.to_complex().norm();
            prop_assert!((sum - (x.to_complex() + y.to_complex())).norm() < 1e-12 * scale);
            prop_assert!(
                (prod - (x.to_complex() * y.to_complex())).norm() < 1e-12 * scale * scale
            );
        }

        #[test]
        fn canonical_form_round_trips(x in arb_scalar(), j in 0u32..5) {
            // scaling num by √2^j and k by j reduces back to the same value
            let mut num = x.num().clone();
            for _ in 0..j {
                num = num.times_sqrt2();
            }
            prop_assert_eq!(reduce(num, x.k() + j), x);
        }
    }
}
