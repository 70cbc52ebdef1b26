//! Arithmetic in GF(2^m) for `1 <= m <= 16`.
//!
//! Elements are stored in polynomial basis: bit `i` of [`FieldElem::bits`] is
//! the coefficient of `x^i`. Addition is XOR, multiplication is a carryless
//! product reduced modulo the field's irreducible polynomial.

use std::fmt;
use std::ops::{Add, AddAssign};

use serde::Serialize;

use crate::error::{param_err, Result};

/// Largest supported extension degree.
pub const MAX_DEGREE: u32 = 16;

/// An element of some GF(2^m), in polynomial basis.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct FieldElem(u32);

impl FieldElem {
    pub const ZERO: FieldElem = FieldElem(0);
    pub const ONE: FieldElem = FieldElem(1);

    #[inline]
    pub const fn new(bits: u32) -> Self {
        FieldElem(bits)
    }

    #[inline]
    pub const fn bits(self) -> u32 {
        self.0
    }

    #[inline]
    pub const fn is_zero(self) -> bool {
        self.0 == 0
    }
}

// addition in characteristic two is XOR
#[allow(clippy::suspicious_arithmetic_impl)]
impl Add for FieldElem {
    type Output = FieldElem;

    #[inline]
    fn add(self, rhs: FieldElem) -> FieldElem {
        FieldElem(self.0 ^ rhs.0)
    }
}

#[allow(clippy::suspicious_op_assign_impl)]
impl AddAssign for FieldElem {
    #[inline]
    fn add_assign(&mut self, rhs: FieldElem) {
        self.0 ^= rhs.0;
    }
}

impl fmt::Display for FieldElem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:#x}", self.0)
    }
}

/// A concrete realization of GF(2^m): the degree and the reduction polynomial.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
pub struct FieldSpec {
    m: u32,
    /// Irreducible polynomial of degree `m`, leading bit included.
    modulus: u32,
}

impl FieldSpec {
    /// GF(2^m) reduced by the numerically (lexicographically) smallest
    /// irreducible polynomial of degree `m`.
    pub fn new(m: u32) -> Result<Self> {
        check_degree(m)?;
        let modulus = ((1u32 << m)..(1u32 << (m + 1)))
            .find(|&p| is_irreducible(p))
            .expect("an irreducible polynomial exists in every degree");
        Ok(FieldSpec { m, modulus })
    }

    /// GF(2^m) with a caller-chosen modulus, which must be irreducible of degree `m`.
    pub fn with_modulus(m: u32, modulus: u32) -> Result<Self> {
        check_degree(m)?;
        if poly_degree(modulus) != Some(m) {
            return Err(param_err!("modulus {modulus:#b} does not have degree {m}"));
        }
        if !is_irreducible(modulus) {
            return Err(param_err!("modulus {modulus:#b} is reducible over GF(2)"));
        }
        Ok(FieldSpec { m, modulus })
    }

    /// Every irreducible polynomial of degree `m`, in increasing order.
    pub fn irreducible_moduli(m: u32) -> Result<Vec<u32>> {
        check_degree(m)?;
        Ok(((1u32 << m)..(1u32 << (m + 1)))
            .filter(|&p| is_irreducible(p))
            .collect())
    }

    #[inline]
    pub fn degree(&self) -> u32 {
        self.m
    }

    #[inline]
    pub fn modulus(&self) -> u32 {
        self.modulus
    }

    /// Number of field elements, `q = 2^m`.
    #[inline]
    pub fn order(&self) -> usize {
        1usize << self.m
    }

    /// Modulus rendered as a polynomial in `x`, e.g. `x^4 + x + 1`.
    pub fn modulus_string(&self) -> String {
        poly_to_string(self.modulus)
    }

    /// All elements in increasing bit order.
    pub fn elements(&self) -> impl Iterator<Item = FieldElem> {
        (0..self.order() as u32).map(FieldElem)
    }

    #[inline]
    pub fn contains(&self, a: FieldElem) -> bool {
        (a.0 >> self.m) == 0
    }

    /// Element from raw bits, rejecting values of `2^m` or more.
    pub fn elem(&self, bits: u32) -> Result<FieldElem> {
        let a = FieldElem(bits);
        if self.contains(a) {
            Ok(a)
        } else {
            Err(param_err!(
                "{bits:#x} is not an element of GF(2^{})",
                self.m
            ))
        }
    }

    /// Carryless product reduced modulo the field polynomial.
    #[inline]
    pub fn mul(&self, a: FieldElem, b: FieldElem) -> FieldElem {
        debug_assert!(self.contains(a) && self.contains(b));
        let mut acc = 0u32;
        let mut x = a.0;
        let mut y = b.0;
        let top = 1u32 << self.m;
        while y != 0 {
            if y & 1 != 0 {
                acc ^= x;
            }
            y >>= 1;
            x <<= 1;
            if x & top != 0 {
                x ^= self.modulus;
            }
        }
        FieldElem(acc)
    }

    #[inline]
    pub fn square(&self, a: FieldElem) -> FieldElem {
        self.mul(a, a)
    }

    /// `a^e` by square-and-multiply; `pow(0, 0) = 1`.
    pub fn pow(&self, a: FieldElem, mut e: u64) -> FieldElem {
        let mut base = a;
        let mut acc = FieldElem::ONE;
        while e != 0 {
            if e & 1 != 0 {
                acc = self.mul(acc, base);
            }
            e >>= 1;
            if e != 0 {
                base = self.square(base);
            }
        }
        acc
    }

    /// Multiplicative inverse, `None` for zero.
    pub fn inv(&self, a: FieldElem) -> Option<FieldElem> {
        if a.is_zero() {
            None
        } else {
            Some(self.pow(a, (self.order() - 2) as u64))
        }
    }

    /// `a^e` for every element `a`, indexed by `a.bits()`.
    pub fn power_table(&self, e: u64) -> Vec<FieldElem> {
        self.elements().map(|a| self.pow(a, e)).collect()
    }
}

impl fmt::Display for FieldSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "GF(2^{}) mod {}", self.m, self.modulus_string())
    }
}

fn check_degree(m: u32) -> Result<()> {
    if (1..=MAX_DEGREE).contains(&m) {
        Ok(())
    } else {
        Err(param_err!("field degree m = {m} outside 1..={MAX_DEGREE}"))
    }
}

fn poly_degree(p: u32) -> Option<u32> {
    (p != 0).then(|| 31 - p.leading_zeros())
}

/// Remainder of carryless division `a mod b`, `b != 0`.
fn poly_rem(mut a: u32, b: u32) -> u32 {
    let db = poly_degree(b).expect("division by the zero polynomial");
    while let Some(da) = poly_degree(a) {
        if da < db {
            break;
        }
        a ^= b << (da - db);
    }
    a
}

/// Trial division by every polynomial of degree `1..=deg(p)/2`.
pub fn is_irreducible(p: u32) -> bool {
    let Some(deg) = poly_degree(p) else {
        return false;
    };
    if deg == 0 {
        return false;
    }
    (2u32..(1u32 << (deg / 2 + 1))).all(|d| poly_rem(p, d) != 0)
}

fn poly_to_string(p: u32) -> String {
    let mut terms = Vec::new();
    for i in (0..32).rev() {
        if p >> i & 1 == 1 {
            terms.push(match i {
                0 => "1".to_string(),
                1 => "x".to_string(),
                _ => format!("x^{i}"),
            });
        }
    }
    if terms.is_empty() {
        "0".to_string()
    } else {
        terms.join(" + ")
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    /// Plain carryless product with no reduction.
    fn clmul(a: u32, b: u32) -> u32 {
        (0..16)
            .filter(|i| b >> i & 1 == 1)
            .fold(0, |acc, i| acc ^ (a << i))
    }

    /// Irreducible iff it is not the product of two polynomials of positive degree.
    fn irreducible_by_factor_search(p: u32) -> bool {
        let deg = poly_degree(p).unwrap();
        for a in 2u32..(1 << deg) {
            for b in 2u32..(1 << deg) {
                if clmul(a, b) == p {
                    return false;
                }
            }
        }
        true
    }

    #[test]
    fn smallest_moduli() {
        assert_eq!(FieldSpec::new(1).unwrap().modulus(), 0b10);
        assert_eq!(FieldSpec::new(2).unwrap().modulus(), 0b111);
        assert_eq!(FieldSpec::new(4).unwrap().modulus(), 0b10011);
        assert_eq!(FieldSpec::new(4).unwrap().modulus_string(), "x^4 + x + 1");
    }

    #[test]
    fn modulus_matches_factor_search_oracle() {
        for m in 1..=6 {
            let oracle = ((1u32 << m)..(1 << (m + 1)))
                .find(|&p| irreducible_by_factor_search(p))
                .unwrap();
            assert_eq!(FieldSpec::new(m).unwrap().modulus(), oracle, "m = {m}");
        }
    }

    #[test]
    fn degree_out_of_range() {
        assert!(matches!(FieldSpec::new(0), Err(crate::Error::Param(_))));
        assert!(matches!(FieldSpec::new(17), Err(crate::Error::Param(_))));
        assert!(FieldSpec::new(16).is_ok());
    }

    #[test]
    fn with_modulus_rejects_reducible() {
        assert!(FieldSpec::with_modulus(4, 0b10001).is_err());
        assert!(FieldSpec::with_modulus(4, 0b111).is_err());
        assert!(FieldSpec::with_modulus(4, 0b11001).is_ok());
        assert_eq!(
            FieldSpec::irreducible_moduli(4).unwrap(),
            vec![0b10011, 0b11001, 0b11111]
        );
    }

    #[test]
    fn gf4_products() {
        let f = FieldSpec::new(2).unwrap();
        assert_eq!(f.mul(FieldElem(0b10), FieldElem(0b10)), FieldElem(0b11));
        for a in f.elements() {
            assert_eq!(f.mul(a, FieldElem::ZERO), FieldElem::ZERO);
            assert_eq!(f.mul(a, FieldElem::ONE), a);
            assert_eq!(f.pow(a, 1), a);
            if !a.is_zero() {
                assert_eq!(f.pow(a, 3), FieldElem::ONE);
            }
        }
        assert_eq!(f.pow(FieldElem::ZERO, 0), FieldElem::ONE);
    }

    #[test]
    fn frobenius_in_gf8() {
        let f = FieldSpec::new(3).unwrap();
        for a in f.elements() {
            assert_eq!(f.pow(a, 8), a);
        }
    }

    #[test]
    fn field_axioms_exhaustive() {
        for m in 1..=4 {
            let f = FieldSpec::new(m).unwrap();
            for a in f.elements() {
                for b in f.elements() {
                    assert_eq!(f.mul(a, b), f.mul(b, a));
                    for c in f.elements() {
                        assert_eq!(f.mul(f.mul(a, b), c), f.mul(a, f.mul(b, c)));
                        assert_eq!(f.mul(a, b + c), f.mul(a, b) + f.mul(a, c));
                    }
                }
                if !a.is_zero() {
                    let inv = f.inv(a).unwrap();
                    assert_eq!(f.mul(a, inv), FieldElem::ONE);
                }
            }
        }
    }

    #[test]
    fn fermat_exhaustive() {
        for m in 1..=8 {
            let f = FieldSpec::new(m).unwrap();
            let e = (1u64 << m) - 1;
            for a in f.elements().skip(1) {
                assert_eq!(f.pow(a, e), FieldElem::ONE, "m = {m}, a = {a}");
            }
        }
    }

    proptest! {
        #[test]
        fn pow_doubling(m in 1u32..=16, raw in any::<u32>(), e in 0u64..1_000_000) {
            let f = FieldSpec::new(m).unwrap();
            let a = FieldElem(raw & ((1 << m) - 1));
            let half = f.pow(a, e);
            prop_assert_eq!(f.pow(a, 2 * e), f.mul(half, half));
        }
    }
}
