//! Carry-free binary combinatorics: Lucas parity, the `B_s` sets and the
//! monomial counts `N_m` that bound the rank of the evaluation matrix.
//!
//! For a weight exponent `r >= 1`,
//! `B_s = { 2^r l1 + l2 : l1 + l2 fits carry-free under s }` and
//! `N_m = sum over s < 2^m of |B_s|`. The classical family uses `r = 1`.

use num_bigint::BigUint;
use num_traits::ToPrimitive;
use serde::Serialize;

use crate::error::{budget_err, param_err, Result};
use crate::zsqrt2::Zsqrt2;

/// Largest `m` accepted by [`count_nm`]; the enumeration touches `4^m` pairs.
pub const MAX_ENUMERATION_M: u32 = 14;

/// Largest `m` for the closed form and recurrences (values stay inside `u128`).
pub const MAX_SEQUENCE_M: u32 = 64;

/// Parameters of a generalized count: weight exponent `r` and bit length `m`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct CarryFreeParams {
    r: u32,
    m: u32,
}

impl CarryFreeParams {
    pub fn new(r: u32, m: u32) -> Result<Self> {
        check_r(r)?;
        Ok(CarryFreeParams { r, m })
    }

    pub fn r(&self) -> u32 {
        self.r
    }

    pub fn m(&self) -> u32 {
        self.m
    }

    pub fn count(&self) -> Result<u64> {
        count_nm(self.m, self.r)
    }

    pub fn bound(&self) -> Result<NmBound> {
        nm_bound(self.m, self.r)
    }
}

fn check_r(r: u32) -> Result<()> {
    if (1..=32).contains(&r) {
        Ok(())
    } else {
        Err(param_err!("weight exponent r = {r} outside 1..=32"))
    }
}

/// `a + b ⋖ c`: the digitwise sums `a_i + b_i` never exceed `c_i`.
#[inline]
pub fn lessdot(a: u64, b: u64, c: u64) -> bool {
    a & b == 0 && (a | b) & !c == 0
}

/// Parity of the multinomial coefficient `n! / (parts[0]! parts[1]! ...)`.
///
/// By Lucas' theorem the coefficient is odd exactly when the parts have
/// pairwise disjoint binary digits that together make up `n`.
pub fn multinomial_parity(n: u64, parts: &[u64]) -> Result<bool> {
    let sum = parts
        .iter()
        .try_fold(0u64, |acc, &p| acc.checked_add(p))
        .ok_or_else(|| param_err!("parts overflow"))?;
    if sum != n {
        return Err(param_err!("parts sum to {sum}, expected {n}"));
    }
    let mut seen = 0u64;
    for &p in parts {
        if seen & p != 0 {
            return Ok(false);
        }
        seen |= p;
    }
    Ok(seen == n)
}

/// Parity of the binomial coefficient `C(n, k)`.
#[inline]
pub fn binomial_is_odd(n: u64, k: u64) -> bool {
    k <= n && k & !n == 0
}

/// Visits every pair `(l1, l2)` with `l1 + l2 ⋖ s` (there are `3^popcount(s)`).
fn for_each_carry_free_pair(s: u64, mut visit: impl FnMut(u64, u64)) {
    let mut l1 = s;
    loop {
        let rest = s & !l1;
        let mut l2 = rest;
        loop {
            visit(l1, l2);
            if l2 == 0 {
                break;
            }
            l2 = (l2 - 1) & rest;
        }
        if l1 == 0 {
            break;
        }
        l1 = (l1 - 1) & s;
    }
}

fn b_values(s: u64, r: u32, out: &mut Vec<u64>) {
    out.clear();
    for_each_carry_free_pair(s, |l1, l2| out.push((l1 << r) + l2));
    out.sort_unstable();
    out.dedup();
}

/// The set `B_s` for weight exponent `r`, sorted ascending.
pub fn b_set(s: u64, r: u32) -> Result<Vec<u64>> {
    check_r(r)?;
    if s >> 31 != 0 {
        return Err(param_err!("s = {s} too large (must be below 2^31)"));
    }
    let mut out = Vec::new();
    b_values(s, r, &mut out);
    Ok(out)
}

/// `b_s = |B_s|`.
pub fn b_count(s: u64, r: u32) -> Result<usize> {
    Ok(b_set(s, r)?.len())
}

/// `N_m = sum_{s < 2^m} |B_s|`, by direct enumeration of every `B_s`.
pub fn count_nm(m: u32, r: u32) -> Result<u64> {
    check_r(r)?;
    if m > MAX_ENUMERATION_M {
        return Err(budget_err!(
            "direct enumeration of N_m needs 4^{m} steps; m is capped at {MAX_ENUMERATION_M}"
        ));
    }
    let mut scratch = Vec::new();
    let mut total = 0u64;
    for s in 0..(1u64 << m) {
        b_values(s, r, &mut scratch);
        total += scratch.len() as u64;
    }
    Ok(total)
}

/// `sum_{s < 2^k} #{(l1, l2) : l1 + l2 ⋖ s}`, counted pair by pair.
pub fn pair_count(k: u32) -> Result<u64> {
    if k > MAX_ENUMERATION_M {
        return Err(budget_err!(
            "pair enumeration capped at k = {MAX_ENUMERATION_M}"
        ));
    }
    let mut total = 0u64;
    for s in 0..(1u64 << k) {
        for_each_carry_free_pair(s, |_, _| total += 1);
    }
    Ok(total)
}

fn check_sequence_m(m: u32) -> Result<()> {
    if m > MAX_SEQUENCE_M {
        Err(param_err!("m = {m} exceeds {MAX_SEQUENCE_M}"))
    } else {
        Ok(())
    }
}

/// `(2 + √2)^m` exactly.
pub fn two_plus_sqrt2_pow(m: u32) -> Zsqrt2 {
    Zsqrt2::new(2, 1).pow(m)
}

/// Closed form `((1+√2)(2+√2)^m + (1-√2)(2-√2)^m) / 2`, evaluated in Z[√2].
pub fn nm_closed_form(m: u32) -> Result<u128> {
    check_sequence_m(m)?;
    let power = two_plus_sqrt2_pow(m);
    let twice = Zsqrt2::new(1, 1) * power + Zsqrt2::new(1, -1) * power.conjugate();
    debug_assert_eq!(twice.v, 0, "conjugate terms cancel");
    debug_assert_eq!(twice.u % 2, 0);
    Ok((twice.u / 2) as u128)
}

/// `N_m = 4 N_{m-1} - 2 N_{m-2}` seeded with `N_0 = 1`, `N_1 = 4`.
pub fn nm_recurrence(m: u32) -> Result<u128> {
    check_sequence_m(m)?;
    let (mut prev, mut cur) = (1u128, 4u128);
    if m == 0 {
        return Ok(prev);
    }
    for _ in 1..m {
        (prev, cur) = (cur, 4 * cur - 2 * prev);
    }
    Ok(cur)
}

/// `N_m = sum_{j=1}^{m+1} (2^j - 1) N_{m-j}` with seeds `N_0 = N_{-1} = 1`.
pub fn nm_long_recurrence(m: u32) -> Result<u128> {
    check_sequence_m(m)?;
    // seq[k] holds N_{k-1}
    let mut seq: Vec<u128> = vec![1, 1];
    for k in 1..=m as usize {
        let value = (1..=k + 1)
            .map(|j| ((1u128 << j) - 1) * seq[k + 1 - j])
            .sum();
        seq.push(value);
    }
    Ok(seq[m as usize + 1])
}

/// `15 * 4^(r-1)`, the bound on `N_{r+1}` for weight exponent `r`.
pub fn first_block_bound(r: u32) -> u128 {
    15 * 4u128.pow(r - 1)
}

/// A value of `N_m` checked against its exact upper bounds.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct NmBound {
    pub m: u32,
    pub r: u32,
    pub n_m: u128,
    /// `t = floor(m / (r + 1))`, the number of full `(r+1)`-bit blocks.
    pub blocks: u32,
    /// `15^t * 4^(m - 2t)`, i.e. `(15/16)^t * 4^m` as an integer.
    pub block_bound: u128,
    pub block_bound_ok: bool,
    /// `N_m^(r+1) * 16^m <= 15^m * 4^(m(r+1))`, the real-exponent form
    /// `N_m <= (15/16)^(m/(r+1)) 4^m` raised to the power `r + 1`.
    pub real_exponent_ok: bool,
    /// For `r = 1`: `floor((1+√2)/2 (2+√2)^m)`.
    pub closed_form_bound: Option<u128>,
    /// For `r = 1`: `N_m <= (1+√2)/2 (2+√2)^m`, decided exactly.
    pub closed_form_ok: Option<bool>,
}

impl NmBound {
    /// The sharpest bound that applies: the closed form for `r = 1`, the
    /// block bound otherwise.
    pub fn bound(&self) -> u128 {
        self.closed_form_bound.unwrap_or(self.block_bound)
    }

    /// Every proven bound holds.
    pub fn holds(&self) -> bool {
        self.block_bound_ok && self.closed_form_ok.unwrap_or(true)
    }
}

/// Enumerates `N_m` for weight exponent `r` and checks it against the bounds.
pub fn nm_bound(m: u32, r: u32) -> Result<NmBound> {
    let n_m = count_nm(m, r)?;
    nm_bound_for(m, r, n_m as u128)
}

/// `N_m` by the recurrence for `r = 1` (any `m <= 64`), by enumeration otherwise.
pub fn nm_value(m: u32, r: u32) -> Result<u128> {
    if r == 1 {
        nm_recurrence(m)
    } else {
        Ok(count_nm(m, r)? as u128)
    }
}

/// Checks a given value `n_m` against the bounds for `(m, r)`.
pub fn nm_bound_for(m: u32, r: u32, n_m: u128) -> Result<NmBound> {
    CarryFreeParams::new(r, m)?;
    check_sequence_m(m)?;
    let blocks = m / (r + 1);
    let block_bound = 15u128
        .checked_pow(blocks)
        .zip(4u128.checked_pow(m - 2 * blocks))
        .and_then(|(a, b)| a.checked_mul(b))
        .ok_or_else(|| budget_err!("block bound for m = {m}, r = {r} exceeds 128 bits"))?;

    let lhs = BigUint::from(n_m).pow(r + 1) * BigUint::from(16u32).pow(m);
    let rhs = BigUint::from(15u32).pow(m) * BigUint::from(4u32).pow(m * (r + 1));
    let real_exponent_ok = lhs <= rhs;

    let (closed_form_bound, closed_form_ok) = if r == 1 {
        (
            Some(closed_form_bound_floor(m)),
            Some(within_closed_form_bound(n_m, m)),
        )
    } else {
        (None, None)
    };

    Ok(NmBound {
        m,
        r,
        n_m,
        blocks,
        block_bound,
        block_bound_ok: n_m <= block_bound,
        real_exponent_ok,
        closed_form_bound,
        closed_form_ok,
    })
}

/// `true` when the closed-form bound `(1+√2)/2 (2+√2)^m` is at least `value`.
pub fn within_closed_form_bound(value: u128, m: u32) -> bool {
    // (1+√2)/2 (2+√2)^m >= v  <=>  (1+√2)(2+√2)^m >= 2v
    let scaled = Zsqrt2::new(1, 1) * two_plus_sqrt2_pow(m);
    scaled >= Zsqrt2::from_int(2 * value as i128)
}

/// `floor((1+√2)/2 (2+√2)^m)`.
pub fn closed_form_bound_floor(m: u32) -> u128 {
    let scaled = Zsqrt2::new(1, 1) * two_plus_sqrt2_pow(m);
    (scaled.floor() / 2u32).to_u128().expect("fits u128")
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::collections::BTreeSet;

    fn factorial(n: u64) -> u128 {
        (1..=n as u128).product()
    }

    fn compositions(n: u64, k: usize) -> Vec<Vec<u64>> {
        if k == 1 {
            return vec![vec![n]];
        }
        (0..=n)
            .flat_map(|first| {
                compositions(n - first, k - 1)
                    .into_iter()
                    .map(move |mut rest| {
                        rest.insert(0, first);
                        rest
                    })
            })
            .collect()
    }

    /// `B_s` straight from the definition: all pairs `(l1, l2)` up to `s`.
    fn b_set_by_definition(s: u64, r: u32) -> Vec<u64> {
        let mut out = BTreeSet::new();
        for l1 in 0..=s {
            for l2 in 0..=s {
                let digit_ok = (0..64).all(|i| (l1 >> i & 1) + (l2 >> i & 1) <= (s >> i & 1));
                if digit_ok {
                    out.insert((l1 << r) + l2);
                }
            }
        }
        out.into_iter().collect()
    }

    #[test]
    fn lessdot_examples() {
        assert!(lessdot(1, 2, 3));
        assert!(!lessdot(1, 1, 3));
        assert!(lessdot(5, 2, 7));
        assert!(!lessdot(4, 0, 3));
    }

    #[test]
    fn multinomial_examples() {
        assert!(multinomial_parity(3, &[1, 2]).unwrap());
        assert!(!multinomial_parity(3, &[1, 1, 1]).unwrap());
        assert!(!multinomial_parity(3, &[1, 1, 0, 1]).unwrap());
        assert!(multinomial_parity(3, &[0, 1, 2, 0]).unwrap());
        assert!(matches!(
            multinomial_parity(3, &[1, 1]),
            Err(crate::Error::Param(_))
        ));
    }

    #[test]
    fn multinomial_matches_factorials() {
        for n in 0..=12u64 {
            for k in 1..=4 {
                for parts in compositions(n, k) {
                    let denom: u128 = parts.iter().map(|&p| factorial(p)).product();
                    let odd = (factorial(n) / denom) % 2 == 1;
                    assert_eq!(multinomial_parity(n, &parts).unwrap(), odd, "{n} {parts:?}");
                }
            }
        }
    }

    #[test]
    fn b_set_examples() {
        assert_eq!(b_set(0, 1).unwrap(), vec![0]);
        assert_eq!(b_set(0, 5).unwrap(), vec![0]);
        assert_eq!(b_set(1, 1).unwrap(), vec![0, 1, 2]);
        assert_eq!(b_set(1, 3).unwrap(), vec![0, 1, 8]);
        assert_eq!(b_set(3, 1).unwrap(), (0..=6).collect::<Vec<_>>());
        assert_eq!(b_count(2, 1).unwrap(), 3);
    }

    #[test]
    fn b_set_matches_definition() {
        for r in 1..=3 {
            for s in 0..64 {
                assert_eq!(
                    b_set(s, r).unwrap(),
                    b_set_by_definition(s, r),
                    "s={s} r={r}"
                );
            }
        }
    }

    #[test]
    fn small_counts() {
        assert_eq!(count_nm(0, 1).unwrap(), 1);
        assert_eq!(count_nm(1, 1).unwrap(), 4);
        assert_eq!(count_nm(2, 1).unwrap(), 14);
        assert_eq!(count_nm(3, 1).unwrap(), 48);
        assert_eq!(count_nm(4, 1).unwrap(), 164);
        assert_eq!(count_nm(3, 1).unwrap(), 4 * 14 - 2 * 4);
        for r in 1..=4 {
            for k in 0..=r {
                assert_eq!(count_nm(k, r).unwrap(), 4u64.pow(k));
            }
        }
        assert!(matches!(count_nm(15, 1), Err(crate::Error::Budget(_))));
    }

    #[test]
    fn sequences() {
        assert_eq!(nm_closed_form(0).unwrap(), 1);
        assert_eq!(nm_closed_form(2).unwrap(), 14);
        assert_eq!(nm_closed_form(5).unwrap(), 4 * 164 - 2 * 48);
        assert_eq!(nm_closed_form(5).unwrap(), 560);
        assert_eq!(nm_recurrence(1).unwrap(), 4);
        assert_eq!(nm_recurrence(2).unwrap(), 14);
        assert_eq!(nm_recurrence(4).unwrap(), count_nm(4, 1).unwrap() as u128);
        assert_eq!(nm_long_recurrence(1).unwrap(), 4);
        assert_eq!(nm_long_recurrence(2).unwrap(), 14);
        assert_eq!(nm_long_recurrence(6).unwrap(), nm_recurrence(6).unwrap());
        for m in 0..=MAX_SEQUENCE_M {
            let a = nm_recurrence(m).unwrap();
            assert_eq!(a, nm_closed_form(m).unwrap());
            assert_eq!(a, nm_long_recurrence(m).unwrap());
        }
        assert!(nm_closed_form(MAX_SEQUENCE_M + 1).is_err());
    }

    #[test]
    fn bounds() {
        let b = nm_bound(3, 2).unwrap();
        assert!(b.n_m <= first_block_bound(2));
        assert!(b.holds());

        let b = nm_bound(2, 1).unwrap();
        assert_eq!(b.n_m, 14);
        assert_eq!(b.closed_form_ok, Some(true));
        // (1+√2)/2 (6+4√2) = 7 + 5√2 = 14.07..
        assert_eq!(b.closed_form_bound, Some(14));

        let b = nm_bound(8, 2).unwrap();
        assert!(b.holds());
    }

    #[test]
    fn pair_counts() {
        for k in 0..=8 {
            assert_eq!(pair_count(k).unwrap(), 4u64.pow(k));
        }
    }
}
