//! Exact arithmetic in the ring Z[√2].

use std::cmp::Ordering;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::{BigInt, BigUint, Sign};
use num_traits::Signed;

/// The number `u + v√2` with integer coordinates.
///
/// Coordinates are `i128`; ring operations panic on overflow, which for the
/// powers of `2 + √2` used here happens only beyond exponent 70 or so.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Default)]
pub struct Zsqrt2 {
    pub u: i128,
    pub v: i128,
}

impl Zsqrt2 {
    pub const ZERO: Zsqrt2 = Zsqrt2 { u: 0, v: 0 };
    pub const ONE: Zsqrt2 = Zsqrt2 { u: 1, v: 0 };

    pub const fn new(u: i128, v: i128) -> Self {
        Zsqrt2 { u, v }
    }

    pub const fn from_int(u: i128) -> Self {
        Zsqrt2 { u, v: 0 }
    }

    /// `u - v√2`.
    pub fn conjugate(self) -> Self {
        Zsqrt2 {
            u: self.u,
            v: -self.v,
        }
    }

    pub fn pow(self, mut e: u32) -> Self {
        let mut base = self;
        let mut acc = Zsqrt2::ONE;
        while e > 0 {
            if e & 1 == 1 {
                acc = acc * base;
            }
            e >>= 1;
            if e > 0 {
                base = base * base;
            }
        }
        acc
    }

    /// Sign of the real number `u + v√2`, decided with integer arithmetic only.
    pub fn signum(self) -> Ordering {
        let (u, v) = (self.u.cmp(&0), self.v.cmp(&0));
        match (u, v) {
            (Ordering::Equal, s) | (s, Ordering::Equal) => s,
            (Ordering::Greater, Ordering::Greater) => Ordering::Greater,
            (Ordering::Less, Ordering::Less) => Ordering::Less,
            // opposite signs: compare u^2 with 2 v^2; the term of larger
            // magnitude wins, and equality is impossible since √2 is irrational
            _ => {
                let u2 = BigInt::from(self.u).pow(2);
                let v2 = BigInt::from(self.v).pow(2) * 2;
                if u2 > v2 {
                    u
                } else {
                    v
                }
            }
        }
    }

    /// `floor(u + v√2)`.
    pub fn floor(self) -> BigInt {
        let v_abs = BigInt::from(self.v).abs();
        let two_v2: BigUint = (&v_abs * &v_abs * 2u32).to_biguint().expect("non-negative");
        let root: BigInt = BigInt::from(two_v2.sqrt());
        // v√2 is irrational for v != 0, so ceil = isqrt + 1
        let v_part = match self.v.cmp(&0) {
            Ordering::Less => -(root + BigInt::from(1)),
            _ => root,
        };
        BigInt::from(self.u) + v_part
    }

    /// Approximate value, for display only.
    pub fn to_f64(self) -> f64 {
        self.u as f64 + self.v as f64 * std::f64::consts::SQRT_2
    }

    pub fn is_nonneg(self) -> bool {
        self.signum() != Ordering::Less
    }
}

impl Add for Zsqrt2 {
    type Output = Zsqrt2;

    fn add(self, rhs: Zsqrt2) -> Zsqrt2 {
        Zsqrt2 {
            u: self.u.checked_add(rhs.u).expect("Z[√2] overflow"),
            v: self.v.checked_add(rhs.v).expect("Z[√2] overflow"),
        }
    }
}

impl Sub for Zsqrt2 {
    type Output = Zsqrt2;

    fn sub(self, rhs: Zsqrt2) -> Zsqrt2 {
        self + (-rhs)
    }
}

impl Neg for Zsqrt2 {
    type Output = Zsqrt2;

    fn neg(self) -> Zsqrt2 {
        Zsqrt2 {
            u: -self.u,
            v: -self.v,
        }
    }
}

impl Mul for Zsqrt2 {
    type Output = Zsqrt2;

    /// `(u1 + v1√2)(u2 + v2√2) = (u1 u2 + 2 v1 v2) + (u1 v2 + u2 v1)√2`.
    fn mul(self, rhs: Zsqrt2) -> Zsqrt2 {
        let mul = |a: i128, b: i128| a.checked_mul(b).expect("Z[√2] overflow");
        let add = |a: i128, b: i128| a.checked_add(b).expect("Z[√2] overflow");
        Zsqrt2 {
            u: add(mul(self.u, rhs.u), mul(2, mul(self.v, rhs.v))),
            v: add(mul(self.u, rhs.v), mul(rhs.u, self.v)),
        }
    }
}

impl PartialOrd for Zsqrt2 {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Zsqrt2 {
    fn cmp(&self, other: &Self) -> Ordering {
        // difference computed in BigInt to stay overflow-free near i128 limits
        let du = BigInt::from(self.u) - BigInt::from(other.u);
        let dv = BigInt::from(self.v) - BigInt::from(other.v);
        big_signum(&du, &dv)
    }
}

fn big_signum(u: &BigInt, v: &BigInt) -> Ordering {
    let sign = |x: &BigInt| match x.sign() {
        Sign::Minus => Ordering::Less,
        Sign::NoSign => Ordering::Equal,
        Sign::Plus => Ordering::Greater,
    };
    match (sign(u), sign(v)) {
        (Ordering::Equal, s) | (s, Ordering::Equal) => s,
        (a, b) if a == b => a,
        (a, b) => {
            if u * u > v * v * 2 {
                a
            } else {
                b
            }
        }
    }
}

impl fmt::Display for Zsqrt2 {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.v < 0 {
            write!(f, "{} - {}√2", self.u, -self.v)
        } else {
            write!(f, "{} + {}√2", self.u, self.v)
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn multiplication_rule() {
        let a = Zsqrt2::new(2, 1);
        assert_eq!(a * a, Zsqrt2::new(6, 4));
        assert_eq!(a * a.conjugate(), Zsqrt2::from_int(2));
        assert_eq!(a.pow(0), Zsqrt2::ONE);
        assert_eq!(a.pow(3), a * a * a);
    }

    #[test]
    fn signs() {
        assert_eq!(Zsqrt2::new(1, -1).signum(), Ordering::Less);
        assert_eq!(Zsqrt2::new(-1, 1).signum(), Ordering::Greater);
        assert_eq!(Zsqrt2::new(3, -2).signum(), Ordering::Greater);
        assert_eq!(Zsqrt2::new(-3, 2).signum(), Ordering::Less);
        assert_eq!(Zsqrt2::ZERO.signum(), Ordering::Equal);
        assert!(Zsqrt2::new(1, 1) > Zsqrt2::from_int(2));
        assert!(Zsqrt2::new(1, 1) < Zsqrt2::from_int(3));
    }

    #[test]
    fn floors() {
        assert_eq!(Zsqrt2::new(0, 1).floor(), BigInt::from(1));
        assert_eq!(Zsqrt2::new(0, -1).floor(), BigInt::from(-2));
        assert_eq!(Zsqrt2::new(5, 3).floor(), BigInt::from(9)); // 5 + 4.242...
        assert_eq!(Zsqrt2::new(7, 0).floor(), BigInt::from(7));
    }

    proptest! {
        #[test]
        fn ordering_agrees_with_floats(u in -1_000_000i128..1_000_000, v in -1_000_000i128..1_000_000) {
            let x = Zsqrt2::new(u, v);
            let f = x.to_f64();
            // floats are reliable away from zero at this magnitude
            if f.abs() > 1e-6 {
                prop_assert_eq!(x.signum() == Ordering::Greater, f > 0.0);
            }
            let fl = x.floor();
            prop_assert!((fl.to_string().parse::<f64>().unwrap() - f.floor()).abs() < 1.5);
        }

        #[test]
        fn ring_laws(a in -1000i128..1000, b in -1000i128..1000, c in -1000i128..1000, d in -1000i128..1000) {
            let x = Zsqrt2::new(a, b);
            let y = Zsqrt2::new(c, d);
            prop_assert_eq!(x * y, y * x);
            prop_assert_eq!((x + y) * x, x * x + y * x);
            prop_assert_eq!(x.cmp(&y), (x - y).signum());
        }
    }
}
