//! Sparse polynomials over GF(2) in the variables `x1, x2, y1, y2`, their
//! coefficient matrices, and the polynomial-rank certificate for unit rate.
//!
//! The coefficient matrix of `h` has rows indexed by the `x`-exponent pair
//! `(i1, i2)` and columns by the `y`-exponent pair `(j1, j2)`; the rank of `h`
//! is the GF(2) rank of that matrix.

use std::collections::{BTreeMap, HashMap};
use std::fmt;

use serde::Serialize;

use crate::bitmatrix::{BitMatrix, SparseBitMatrix};
use crate::carryfree::binomial_is_odd;
use crate::error::{budget_err, param_err, Result};
use crate::field::{FieldElem, FieldSpec};

/// Largest exponent allowed in any variable.
pub const MAX_EXPONENT: u32 = 1 << 24;

/// Default cap on the number of monomial products formed by one multiplication.
pub const DEFAULT_TERM_BUDGET: usize = 100_000_000;

/// Largest field degree accepted by [`eval_matrix`].
pub const MAX_EVAL_M: u32 = 6;

/// `x1^x1 * x2^x2 * y1^y1 * y2^y2`.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
pub struct Monomial {
    pub x1: u32,
    pub x2: u32,
    pub y1: u32,
    pub y2: u32,
}

impl Monomial {
    pub const ONE: Monomial = Monomial {
        x1: 0,
        x2: 0,
        y1: 0,
        y2: 0,
    };

    pub const fn new(x1: u32, x2: u32, y1: u32, y2: u32) -> Self {
        Monomial { x1, x2, y1, y2 }
    }

    /// Row key of the coefficient matrix.
    pub fn x_key(&self) -> (u32, u32) {
        (self.x1, self.x2)
    }

    /// Column key of the coefficient matrix.
    pub fn y_key(&self) -> (u32, u32) {
        (self.y1, self.y2)
    }

    fn max_exponent(&self) -> u32 {
        self.x1.max(self.x2).max(self.y1).max(self.y2)
    }

    #[inline]
    fn pack(self) -> u128 {
        (self.x1 as u128) << 96
            | (self.x2 as u128) << 64
            | (self.y1 as u128) << 32
            | self.y2 as u128
    }

    #[inline]
    fn unpack(v: u128) -> Self {
        Monomial {
            x1: (v >> 96) as u32,
            x2: (v >> 64) as u32,
            y1: (v >> 32) as u32,
            y2: v as u32,
        }
    }
}

impl fmt::Display for Monomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = [
            ("x1", self.x1),
            ("x2", self.x2),
            ("y1", self.y1),
            ("y2", self.y2),
        ]
        .into_iter()
        .filter(|&(_, e)| e > 0)
        .map(|(v, e)| {
            if e == 1 {
                v.to_string()
            } else {
                format!("{v}^{e}")
            }
        })
        .collect();
        if parts.is_empty() {
            write!(f, "1")
        } else {
            write!(f, "{}", parts.join("*"))
        }
    }
}

/// A polynomial over GF(2): the set of monomials with coefficient one.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash)]
pub struct SparsePoly {
    /// Sorted, without repeats.
    terms: Vec<Monomial>,
}

impl SparsePoly {
    pub fn zero() -> Self {
        SparsePoly::default()
    }

    pub fn one() -> Self {
        SparsePoly {
            terms: vec![Monomial::ONE],
        }
    }

    pub fn monomial(m: Monomial) -> Self {
        SparsePoly { terms: vec![m] }
    }

    /// Sum of the given monomials; a monomial listed twice cancels.
    pub fn from_monomials<I: IntoIterator<Item = Monomial>>(iter: I) -> Result<Self> {
        let mut packed = Vec::new();
        for m in iter {
            if m.max_exponent() > MAX_EXPONENT {
                return Err(param_err!("exponent in {m} exceeds {MAX_EXPONENT}"));
            }
            packed.push(m.pack());
        }
        Ok(SparsePoly {
            terms: reduce_mod2(packed),
        })
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_empty(&self) -> bool {
        self.is_zero()
    }

    pub fn terms(&self) -> &[Monomial] {
        &self.terms
    }

    pub fn contains(&self, m: &Monomial) -> bool {
        self.terms.binary_search(m).is_ok()
    }

    /// Sum over GF(2), i.e. symmetric difference of the monomial sets.
    pub fn add(&self, other: &SparsePoly) -> SparsePoly {
        let packed = self
            .terms
            .iter()
            .chain(&other.terms)
            .map(|m| m.pack())
            .collect();
        SparsePoly {
            terms: reduce_mod2(packed),
        }
    }

    /// Largest exponent of each variable, `(x1, x2, y1, y2)`.
    pub fn degrees(&self) -> (u32, u32, u32, u32) {
        self.terms.iter().fold((0, 0, 0, 0), |(a, b, c, d), m| {
            (a.max(m.x1), b.max(m.x2), c.max(m.y1), d.max(m.y2))
        })
    }

    /// Largest per-variable degree.
    pub fn max_degree(&self) -> u32 {
        let (a, b, c, d) = self.degrees();
        a.max(b).max(c).max(d)
    }

    pub fn mul(&self, other: &SparsePoly) -> Result<SparsePoly> {
        poly_mul(self, other, DEFAULT_TERM_BUDGET)
    }
}

impl fmt::Display for SparsePoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        let parts: Vec<String> = self.terms.iter().map(Monomial::to_string).collect();
        write!(f, "{}", parts.join(" + "))
    }
}

/// Sorts packed monomials and keeps those occurring an odd number of times.
fn reduce_mod2(mut packed: Vec<u128>) -> Vec<Monomial> {
    packed.sort_unstable();
    let mut out = Vec::with_capacity(packed.len());
    let mut i = 0;
    while i < packed.len() {
        let mut j = i + 1;
        while j < packed.len() && packed[j] == packed[i] {
            j += 1;
        }
        if (j - i) % 2 == 1 {
            out.push(Monomial::unpack(packed[i]));
        }
        i = j;
    }
    out
}

/// `d = (x1 + y1)^n + x2 + y2`, expanded with odd binomials only.
pub fn poly_d(n: u32) -> Result<SparsePoly> {
    if n.is_multiple_of(2) {
        return Err(param_err!("n = {n} must be odd"));
    }
    let binomial_terms = (0..=n)
        .filter(|&i| binomial_is_odd(n as u64, i as u64))
        .map(|i| Monomial::new(i, 0, n - i, 0));
    SparsePoly::from_monomials(
        binomial_terms.chain([Monomial::new(0, 1, 0, 0), Monomial::new(0, 0, 0, 1)]),
    )
}

/// Product over GF(2). `max_terms` caps the number of pairwise monomial
/// products formed before cancellation.
pub fn poly_mul(p: &SparsePoly, q: &SparsePoly, max_terms: usize) -> Result<SparsePoly> {
    let pairs = p.len().saturating_mul(q.len());
    if pairs > max_terms {
        return Err(budget_err!(
            "{} x {} monomial products exceed the budget of {max_terms}",
            p.len(),
            q.len()
        ));
    }
    let (a1, a2, a3, a4) = p.degrees();
    let (b1, b2, b3, b4) = q.degrees();
    if [a1 + b1, a2 + b2, a3 + b3, a4 + b4]
        .iter()
        .any(|&e| e > MAX_EXPONENT)
    {
        return Err(budget_err!("product exponent exceeds {MAX_EXPONENT}"));
    }
    let rhs: Vec<u128> = q.terms.iter().map(|m| m.pack()).collect();
    let mut packed = Vec::with_capacity(pairs);
    for a in &p.terms {
        let a = a.pack();
        // exponents stay below 2^25, so lane-wise addition never carries
        packed.extend(rhs.iter().map(|&b| a + b));
    }
    Ok(SparsePoly {
        terms: reduce_mod2(packed),
    })
}

/// `p^(2^i)`: in characteristic two this multiplies every exponent by `2^i`.
pub fn frobenius(p: &SparsePoly, i: u32) -> Result<SparsePoly> {
    if i >= 25 || p.max_degree() as u64 * (1u64 << i) > MAX_EXPONENT as u64 {
        return Err(budget_err!(
            "Frobenius power 2^{i} pushes exponents past {MAX_EXPONENT}"
        ));
    }
    let terms = p
        .terms
        .iter()
        .map(|m| Monomial::new(m.x1 << i, m.x2 << i, m.y1 << i, m.y2 << i))
        .collect();
    // shifting all exponents by the same amount preserves the order
    Ok(SparsePoly { terms })
}

/// `p^(2^t - 1)` as the product of `p^(2^i)` for `i = 0..t`.
pub fn poly_pow_mersenne(p: &SparsePoly, t: u32, max_terms: usize) -> Result<SparsePoly> {
    if t == 0 {
        return Err(param_err!("t must be positive"));
    }
    let mut acc = p.clone();
    for i in 1..t {
        acc = poly_mul(&acc, &frobenius(p, i)?, max_terms)?;
    }
    Ok(acc)
}

/// The coefficient matrix: one entry per monomial, row `(e_x1, e_x2)`,
/// column `(e_y1, e_y2)`.
pub fn coeff_matrix(p: &SparsePoly) -> SparseBitMatrix<(u32, u32), (u32, u32)> {
    p.terms.iter().map(|m| (m.x_key(), m.y_key())).collect()
}

/// Rank of the polynomial, summed over the independent blocks of its
/// coefficient matrix.
pub fn poly_rank(p: &SparsePoly) -> Result<usize> {
    coeff_matrix(p).block_rank()
}

/// Rank of the polynomial by one elimination on the whole compacted
/// coefficient matrix.
pub fn poly_rank_dense(p: &SparsePoly) -> Result<usize> {
    Ok(coeff_matrix(p).compact()?.rank())
}

/// A dense matrix with entries in some GF(2^m).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FieldMatrix {
    spec: FieldSpec,
    rows: usize,
    cols: usize,
    data: Vec<FieldElem>,
}

impl FieldMatrix {
    pub fn zeros(spec: FieldSpec, rows: usize, cols: usize) -> Self {
        FieldMatrix {
            spec,
            rows,
            cols,
            data: vec![FieldElem::ZERO; rows * cols],
        }
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn field(&self) -> &FieldSpec {
        &self.spec
    }

    pub fn get(&self, r: usize, c: usize) -> FieldElem {
        self.data[r * self.cols + c]
    }

    pub fn set(&mut self, r: usize, c: usize, v: FieldElem) {
        self.data[r * self.cols + c] = v;
    }

    /// Every entry is 0 or 1.
    pub fn is_binary(&self) -> bool {
        self.data.iter().all(|e| e.bits() <= 1)
    }

    /// The same matrix as a [`BitMatrix`], if all entries are 0 or 1.
    pub fn to_bitmatrix(&self) -> Option<BitMatrix> {
        if !self.is_binary() {
            return None;
        }
        let mut out = BitMatrix::try_zeros(self.rows, self.cols).ok()?;
        for r in 0..self.rows {
            for c in 0..self.cols {
                if self.get(r, c) == FieldElem::ONE {
                    out.set(r, c, true);
                }
            }
        }
        Some(out)
    }

    /// Entrywise product in the field.
    pub fn hadamard(&self, other: &FieldMatrix) -> Result<FieldMatrix> {
        if self.rows != other.rows || self.cols != other.cols || self.spec != other.spec {
            return Err(param_err!(
                "Hadamard product needs equal shapes over one field"
            ));
        }
        let data = self
            .data
            .iter()
            .zip(&other.data)
            .map(|(&a, &b)| self.spec.mul(a, b))
            .collect();
        Ok(FieldMatrix {
            spec: self.spec,
            rows: self.rows,
            cols: self.cols,
            data,
        })
    }

    /// Rank over GF(2^m). Binary matrices take the packed GF(2) path, which
    /// gives the same rank since rank does not change under field extension.
    pub fn rank(&self) -> usize {
        if let Some(bits) = self.to_bitmatrix() {
            return bits.rank();
        }
        let f = &self.spec;
        let mut a = self.data.clone();
        let cols = self.cols;
        let mut rank = 0;
        for c in 0..cols {
            if rank == self.rows {
                break;
            }
            let Some(p) = (rank..self.rows).find(|&r| !a[r * cols + c].is_zero()) else {
                continue;
            };
            if p != rank {
                for k in c..cols {
                    a.swap(p * cols + k, rank * cols + k);
                }
            }
            let inv = f.inv(a[rank * cols + c]).expect("pivot is nonzero");
            for k in c..cols {
                a[rank * cols + k] = f.mul(a[rank * cols + k], inv);
            }
            for r in rank + 1..self.rows {
                let factor = a[r * cols + c];
                if factor.is_zero() {
                    continue;
                }
                for k in c..cols {
                    let sub = f.mul(factor, a[rank * cols + k]);
                    a[r * cols + k] += sub;
                }
            }
            rank += 1;
        }
        rank
    }
}

/// The evaluation matrix of `p` over `GF(q)^2 x GF(q)^2`: entry
/// `p(x1, x2, y1, y2)` at row `x = (x1, x2)`, column `y = (y1, y2)`, both in
/// the vertex encoding `x1 << m | x2`.
pub fn eval_matrix(p: &SparsePoly, spec: &FieldSpec) -> Result<FieldMatrix> {
    let m = spec.degree();
    if m > MAX_EVAL_M {
        return Err(budget_err!(
            "evaluation matrices are capped at m <= {MAX_EVAL_M}"
        ));
    }
    let size = 1usize << (2 * m);

    let mut tables: HashMap<u32, Vec<FieldElem>> = HashMap::new();
    for t in &p.terms {
        for e in [t.x1, t.x2, t.y1, t.y2] {
            tables
                .entry(e)
                .or_insert_with(|| spec.power_table(e as u64));
        }
    }
    let monomial_value = |e1: u32, e2: u32, v: usize| {
        let a = v >> m;
        let b = v & ((1 << m) - 1);
        spec.mul(tables[&e1][a], tables[&e2][b])
    };

    // p(x, y) = sum over row keys k of X_k(x) * G_k(y), G_k = sum of its y-monomials
    let mut by_row: BTreeMap<(u32, u32), Vec<(u32, u32)>> = BTreeMap::new();
    for t in &p.terms {
        by_row.entry(t.x_key()).or_default().push(t.y_key());
    }
    let mut out = FieldMatrix::zeros(*spec, size, size);
    for (&(i1, i2), col_keys) in &by_row {
        let g: Vec<FieldElem> = (0..size)
            .map(|y| {
                col_keys.iter().fold(FieldElem::ZERO, |acc, &(j1, j2)| {
                    acc + monomial_value(j1, j2, y)
                })
            })
            .collect();
        for x in 0..size {
            let xv = monomial_value(i1, i2, x);
            if xv.is_zero() {
                continue;
            }
            let row = &mut out.data[x * size..(x + 1) * size];
            for (entry, &gy) in row.iter_mut().zip(&g) {
                *entry += spec.mul(xv, gy);
            }
        }
    }
    Ok(out)
}

/// One step of the certification search.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct TraceEntry {
    pub t: u32,
    /// `rank(d^(2^t - 1))`.
    pub rank: usize,
    /// `4^t`.
    pub threshold: u64,
    /// Monomials in `d^(2^t - 1)`.
    pub terms: usize,
}

/// Outcome of searching for `t` with `rank(d^(2^t - 1)) < 4^t`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct CertificationResult {
    pub n: u32,
    pub trace: Vec<TraceEntry>,
    pub certified: bool,
    /// Smallest certifying `t`.
    pub t_star: Option<u32>,
    /// `max rank(d^(2^i - 1))` over `0 <= i < t_star` (all computed `i` when
    /// no `t` certifies); `d^0 = 1` contributes rank 1.
    pub c_constant: usize,
}

impl CertificationResult {
    /// Rank at the certifying `t`.
    pub fn poly_rank(&self) -> Option<usize> {
        self.t_star
            .and_then(|t| self.trace.iter().find(|e| e.t == t))
            .map(|e| e.rank)
    }

    pub fn threshold(&self) -> Option<u64> {
        self.t_star.map(|t| 4u64.pow(t))
    }
}

/// Computes `rank(d^(2^t - 1))` for `t = 1, 2, ..., t_max`, stopping at the
/// first `t` whose rank is below `4^t`.
pub fn certify_unit_rate(n: u32, t_max: u32, max_terms: usize) -> Result<CertificationResult> {
    if n.is_multiple_of(2) {
        return Err(param_err!("n = {n} must be odd"));
    }
    if t_max == 0 || t_max > 12 {
        return Err(param_err!("t_max = {t_max} outside 1..=12"));
    }
    let d = poly_d(n)?;
    let mut trace: Vec<TraceEntry> = Vec::new();
    let mut power = d.clone();
    for t in 1..=t_max {
        if t > 1 {
            // d^(2^t - 1) = d^(2^(t-1) - 1) * d^(2^(t-1))
            let step = frobenius(&d, t - 1).and_then(|f| poly_mul(&power, &f, max_terms));
            power = match step {
                Ok(p) => p,
                Err(e) => return Err(with_trace(e, &trace)),
            };
        }
        let rank = poly_rank(&power).map_err(|e| with_trace(e, &trace))?;
        let threshold = 4u64.pow(t);
        trace.push(TraceEntry {
            t,
            rank,
            threshold,
            terms: power.len(),
        });
        if (rank as u64) < threshold {
            let c_constant = earlier_max(&trace[..trace.len() - 1]);
            return Ok(CertificationResult {
                n,
                trace,
                certified: true,
                t_star: Some(t),
                c_constant,
            });
        }
    }
    let c_constant = earlier_max(&trace[..trace.len() - 1]);
    Ok(CertificationResult {
        n,
        trace,
        certified: false,
        t_star: None,
        c_constant,
    })
}

fn earlier_max(entries: &[TraceEntry]) -> usize {
    entries.iter().map(|e| e.rank).fold(1, usize::max)
}

fn with_trace(err: crate::Error, trace: &[TraceEntry]) -> crate::Error {
    let done: Vec<String> = trace
        .iter()
        .map(|e| format!("t={} rank={}", e.t, e.rank))
        .collect();
    match err {
        crate::Error::Budget(msg) => {
            crate::Error::Budget(format!("{msg}; partial trace [{}]", done.join(", ")))
        }
        other => other,
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn mono(x1: u32, x2: u32, y1: u32, y2: u32) -> Monomial {
        Monomial::new(x1, x2, y1, y2)
    }

    fn poly(terms: &[Monomial]) -> SparsePoly {
        SparsePoly::from_monomials(terms.iter().copied()).unwrap()
    }

    #[test]
    fn d_polynomials() {
        let d3 = poly_d(3).unwrap();
        assert_eq!(d3.len(), 6);
        for m in [
            mono(3, 0, 0, 0),
            mono(2, 0, 1, 0),
            mono(1, 0, 2, 0),
            mono(0, 0, 3, 0),
            mono(0, 1, 0, 0),
            mono(0, 0, 0, 1),
        ] {
            assert!(d3.contains(&m));
        }
        let d5 = poly_d(5).unwrap();
        assert_eq!(
            d5,
            poly(&[
                mono(5, 0, 0, 0),
                mono(4, 0, 1, 0),
                mono(1, 0, 4, 0),
                mono(0, 0, 5, 0),
                mono(0, 1, 0, 0),
                mono(0, 0, 0, 1)
            ])
        );
        assert_eq!(poly_d(7).unwrap().len(), 10);
        assert_eq!(
            poly_d(1).unwrap(),
            poly(&[
                mono(1, 0, 0, 0),
                mono(0, 0, 1, 0),
                mono(0, 1, 0, 0),
                mono(0, 0, 0, 1)
            ])
        );
        assert!(poly_d(4).is_err());
    }

    #[test]
    fn xor_semantics() {
        let p = poly(&[mono(1, 0, 0, 0), mono(1, 0, 0, 0), mono(0, 0, 1, 0)]);
        assert_eq!(p, poly(&[mono(0, 0, 1, 0)]));
        assert!(p.add(&p).is_zero());
    }

    #[test]
    fn multiplication() {
        let d3 = poly_d(3).unwrap();
        assert_eq!(d3.mul(&SparsePoly::one()).unwrap(), d3);
        let s = poly(&[mono(1, 0, 0, 0), mono(0, 0, 1, 0)]);
        assert_eq!(
            s.mul(&s).unwrap(),
            poly(&[mono(2, 0, 0, 0), mono(0, 0, 2, 0)])
        );
        assert_eq!(d3.mul(&d3).unwrap(), frobenius(&d3, 1).unwrap());
        assert!(matches!(
            poly_mul(&d3, &d3, 35),
            Err(crate::Error::Budget(_))
        ));
    }

    #[test]
    fn frobenius_examples() {
        let x2 = SparsePoly::monomial(mono(0, 1, 0, 0));
        assert_eq!(
            frobenius(&x2, 1).unwrap(),
            SparsePoly::monomial(mono(0, 2, 0, 0))
        );
        let d7 = poly_d(7).unwrap();
        assert_eq!(frobenius(&d7, 3).unwrap().len(), d7.len());
        assert_eq!(
            poly_rank(&frobenius(&d7, 3).unwrap()).unwrap(),
            poly_rank(&d7).unwrap()
        );
        assert!(frobenius(&d7, 25).is_err());
    }

    #[test]
    fn mersenne_powers() {
        let p = poly(&[mono(1, 0, 0, 0), Monomial::ONE]);
        assert_eq!(poly_pow_mersenne(&p, 1, DEFAULT_TERM_BUDGET).unwrap(), p);
        assert_eq!(
            poly_pow_mersenne(&p, 2, DEFAULT_TERM_BUDGET).unwrap(),
            poly(&[
                mono(3, 0, 0, 0),
                mono(2, 0, 0, 0),
                mono(1, 0, 0, 0),
                Monomial::ONE
            ])
        );
    }

    #[test]
    fn mersenne_matches_repeated_multiplication() {
        let tiny = [
            poly_d(3).unwrap(),
            poly(&[mono(1, 1, 0, 0), mono(0, 0, 1, 2), Monomial::ONE]),
            poly(&[mono(2, 0, 1, 0), mono(0, 1, 1, 1)]),
        ];
        for p in &tiny {
            for t in 1..=3 {
                let mut naive = p.clone();
                for _ in 0..(1u32 << t) - 2 {
                    naive = naive.mul(p).unwrap();
                }
                assert_eq!(poly_pow_mersenne(p, t, DEFAULT_TERM_BUDGET).unwrap(), naive);
            }
        }
    }

    #[test]
    fn coefficient_matrices() {
        let s = poly(&[mono(0, 1, 0, 0), mono(0, 0, 0, 1)]);
        let c = coeff_matrix(&s);
        assert_eq!(c.len(), 2);
        assert!(c.contains(&(0, 1), &(0, 0)));
        assert!(c.contains(&(0, 0), &(0, 1)));

        let d3 = poly_d(3).unwrap();
        let c = coeff_matrix(&d3);
        assert_eq!(c.len(), 6);
        assert_eq!(c.row_keys().len(), 5);
        assert_eq!(c.col_keys().len(), 5);
        // rows x1^3 and x2 both hold only the column y^0, so the rank is 4
        let dense = c.compact().unwrap();
        assert_eq!((dense.rows(), dense.cols(), dense.rank()), (5, 5, 4));
        assert_eq!(poly_rank(&d3).unwrap(), 4);
        assert_eq!(poly_rank_dense(&d3).unwrap(), 4);
    }

    #[test]
    fn evaluation_examples() {
        let f8 = FieldSpec::new(3).unwrap();
        let d3 = poly_d(3).unwrap();
        assert_eq!(eval_matrix(&d3, &f8).unwrap().rank(), 4);

        let one = eval_matrix(&SparsePoly::one(), &f8).unwrap();
        assert_eq!(one.to_bitmatrix().unwrap(), BitMatrix::ones(64, 64));
        assert_eq!(one.rank(), 1);
    }

    #[test]
    fn evaluation_of_full_power_is_w() {
        // d^(q-1) is the indicator of (x1+y1)^3 != x2 + y2, i.e. W = H + J
        for m in 2..=4 {
            let f = FieldSpec::new(m).unwrap();
            let params = crate::cayley::FamilyParams::new(3, m).unwrap();
            let h = crate::code::coset_matrix(params, &f).unwrap();
            let power = poly_pow_mersenne(&poly_d(3).unwrap(), m, DEFAULT_TERM_BUDGET).unwrap();
            let e = eval_matrix(&power, &f).unwrap();
            assert_eq!(e.to_bitmatrix().unwrap(), h.complement(), "m={m}");
        }
    }

    #[test]
    fn field_rank_on_nonbinary() {
        let f = FieldSpec::new(2).unwrap();
        let mut a = FieldMatrix::zeros(f, 2, 2);
        // [[1, w], [w, w^2]] has rank 1; [[1, w], [w, 1]] has rank 2
        let w = FieldElem::new(2);
        a.set(0, 0, FieldElem::ONE);
        a.set(0, 1, w);
        a.set(1, 0, w);
        a.set(1, 1, f.mul(w, w));
        assert_eq!(a.rank(), 1);
        a.set(1, 1, FieldElem::ONE);
        assert_eq!(a.rank(), 2);
    }

    #[test]
    fn certification_small() {
        let r = certify_unit_rate(1, 3, DEFAULT_TERM_BUDGET).unwrap();
        assert!(r.certified);
        assert_eq!(r.t_star, Some(1));
        assert_eq!(r.trace[0].rank, 2);
        assert_eq!(r.c_constant, 1);

        let r = certify_unit_rate(3, 1, DEFAULT_TERM_BUDGET).unwrap();
        assert!(!r.certified);
        assert_eq!(r.trace[0].rank, 4);
        assert_eq!(r.trace[0].threshold, 4);
        assert!(certify_unit_rate(4, 2, DEFAULT_TERM_BUDGET).is_err());
    }

    #[test]
    fn certification_budget_keeps_trace() {
        let err = certify_unit_rate(7, 4, 500).unwrap_err();
        match err {
            crate::Error::Budget(msg) => assert!(msg.contains("t=1 rank="), "{msg}"),
            other => panic!("unexpected {other:?}"),
        }
    }
}
