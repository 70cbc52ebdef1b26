//! Dense bit-packed matrices over GF(2).
//!
//! Rows are stored contiguously as `u64` words, least significant bit first:
//! column `j` of a row lives in word `j / 64`, bit `j % 64`. Pad bits past the
//! last column are always zero, so whole-word operations never need masking.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;
use std::io::{BufRead, Write};

use petgraph::unionfind::UnionFind;
use rand::Rng;

use crate::error::{budget_err, param_err, Result};

const WORD: usize = 64;

/// Upper bound on `rows * cols` for any dense matrix (1 GiB of packed bits).
pub const MAX_BITS: u64 = 1 << 33;

#[inline]
fn words_for(bits: usize) -> usize {
    bits.div_ceil(WORD)
}

/// A packed vector over GF(2).
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct BitVec {
    len: usize,
    words: Vec<u64>,
}

impl BitVec {
    pub fn zeros(len: usize) -> Self {
        BitVec {
            len,
            words: vec![0; words_for(len)],
        }
    }

    /// Vector with a single one at `index`.
    pub fn unit(len: usize, index: usize) -> Self {
        let mut v = BitVec::zeros(len);
        v.set(index, true);
        v
    }

    pub fn from_bools(bits: &[bool]) -> Self {
        let mut v = BitVec::zeros(bits.len());
        for (i, &b) in bits.iter().enumerate() {
            v.set(i, b);
        }
        v
    }

    fn from_words(len: usize, words: &[u64]) -> Self {
        debug_assert_eq!(words.len(), words_for(len));
        BitVec {
            len,
            words: words.to_vec(),
        }
    }

    #[inline]
    pub fn len(&self) -> usize {
        self.len
    }

    #[inline]
    pub fn is_empty(&self) -> bool {
        self.len == 0
    }

    #[inline]
    pub fn words(&self) -> &[u64] {
        &self.words
    }

    #[inline]
    pub fn get(&self, i: usize) -> bool {
        assert!(i < self.len, "bit index {i} out of range {}", self.len);
        self.words[i / WORD] >> (i % WORD) & 1 == 1
    }

    #[inline]
    pub fn set(&mut self, i: usize, value: bool) {
        assert!(i < self.len, "bit index {i} out of range {}", self.len);
        let mask = 1u64 << (i % WORD);
        if value {
            self.words[i / WORD] |= mask;
        } else {
            self.words[i / WORD] &= !mask;
        }
    }

    #[inline]
    pub fn flip(&mut self, i: usize) {
        assert!(i < self.len, "bit index {i} out of range {}", self.len);
        self.words[i / WORD] ^= 1u64 << (i % WORD);
    }

    pub fn xor_assign(&mut self, other: &BitVec) {
        assert_eq!(self.len, other.len, "length mismatch");
        for (a, b) in self.words.iter_mut().zip(&other.words) {
            *a ^= b;
        }
    }

    pub fn is_zero(&self) -> bool {
        self.words.iter().all(|&w| w == 0)
    }

    pub fn count_ones(&self) -> usize {
        self.words.iter().map(|w| w.count_ones() as usize).sum()
    }

    /// Inner product over GF(2).
    pub fn dot(&self, other: &BitVec) -> bool {
        assert_eq!(self.len, other.len, "length mismatch");
        parity_and(&self.words, &other.words)
    }

    pub fn iter_ones(&self) -> impl Iterator<Item = usize> + '_ {
        (0..self.len).filter(move |&i| self.get(i))
    }
}

impl fmt::Debug for BitVec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s: String = (0..self.len)
            .map(|i| if self.get(i) { '1' } else { '0' })
            .collect();
        write!(f, "BitVec[{s}]")
    }
}

#[inline]
fn parity_and(a: &[u64], b: &[u64]) -> bool {
    a.iter()
        .zip(b)
        .fold(0u32, |acc, (x, y)| acc ^ (x & y).count_ones())
        & 1
        == 1
}

/// A dense row-major GF(2) matrix.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct BitMatrix {
    rows: usize,
    cols: usize,
    stride: usize,
    data: Vec<u64>,
}

impl BitMatrix {
    /// Zero matrix, or a budget error when `rows * cols` exceeds [`MAX_BITS`].
    pub fn try_zeros(rows: usize, cols: usize) -> Result<Self> {
        let bits = (rows as u128) * (cols as u128);
        if bits > MAX_BITS as u128 {
            return Err(budget_err!(
                "{rows} x {cols} matrix exceeds {MAX_BITS} bits"
            ));
        }
        let stride = words_for(cols);
        Ok(BitMatrix {
            rows,
            cols,
            stride,
            data: vec![0; rows * stride],
        })
    }

    /// Zero matrix. Panics past [`MAX_BITS`]; use [`BitMatrix::try_zeros`] for
    /// sizes that come from user input.
    pub fn zeros(rows: usize, cols: usize) -> Self {
        Self::try_zeros(rows, cols).expect("matrix size")
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m.set(i, i, true);
        }
        m
    }

    /// The all-one matrix `J`.
    pub fn ones(rows: usize, cols: usize) -> Self {
        let mut m = Self::zeros(rows, cols);
        m.data.fill(!0);
        m.clear_padding();
        m
    }

    pub fn from_rows(rows: &[Vec<bool>]) -> Result<Self> {
        let cols = rows.first().map_or(0, Vec::len);
        if rows.iter().any(|r| r.len() != cols) {
            return Err(param_err!("ragged rows"));
        }
        let mut m = Self::try_zeros(rows.len(), cols)?;
        for (i, row) in rows.iter().enumerate() {
            for (j, &b) in row.iter().enumerate() {
                m.set(i, j, b);
            }
        }
        Ok(m)
    }

    /// Matrix whose rows are the given vectors, all of length `cols`.
    pub fn from_bitvecs(cols: usize, vectors: &[BitVec]) -> Result<Self> {
        let mut m = Self::try_zeros(vectors.len(), cols)?;
        for (i, v) in vectors.iter().enumerate() {
            if v.len() != cols {
                return Err(param_err!("row {i} has length {} not {cols}", v.len()));
            }
            m.row_words_mut(i).copy_from_slice(v.words());
        }
        Ok(m)
    }

    /// Uniformly random matrix.
    pub fn random<R: Rng + ?Sized>(rows: usize, cols: usize, rng: &mut R) -> Self {
        let mut m = Self::zeros(rows, cols);
        rng.fill(&mut m.data[..]);
        m.clear_padding();
        m
    }

    /// Random matrix whose entries are one with probability `density`.
    pub fn random_with_density<R: Rng + ?Sized>(
        rows: usize,
        cols: usize,
        density: f64,
        rng: &mut R,
    ) -> Self {
        let mut m = Self::zeros(rows, cols);
        for i in 0..rows {
            for j in 0..cols {
                if rng.gen_bool(density) {
                    m.set(i, j, true);
                }
            }
        }
        m
    }

    fn clear_padding(&mut self) {
        let tail = self.cols % WORD;
        if tail == 0 || self.stride == 0 {
            return;
        }
        let mask = (1u64 << tail) - 1;
        for r in 0..self.rows {
            self.data[r * self.stride + self.stride - 1] &= mask;
        }
    }

    #[inline]
    pub fn rows(&self) -> usize {
        self.rows
    }

    #[inline]
    pub fn cols(&self) -> usize {
        self.cols
    }

    #[inline]
    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    #[inline]
    pub fn get(&self, r: usize, c: usize) -> bool {
        assert!(
            r < self.rows && c < self.cols,
            "index ({r}, {c}) out of range"
        );
        self.data[r * self.stride + c / WORD] >> (c % WORD) & 1 == 1
    }

    #[inline]
    pub fn set(&mut self, r: usize, c: usize, value: bool) {
        assert!(
            r < self.rows && c < self.cols,
            "index ({r}, {c}) out of range"
        );
        let w = &mut self.data[r * self.stride + c / WORD];
        let mask = 1u64 << (c % WORD);
        if value {
            *w |= mask;
        } else {
            *w &= !mask;
        }
    }

    #[inline]
    pub fn flip(&mut self, r: usize, c: usize) {
        assert!(
            r < self.rows && c < self.cols,
            "index ({r}, {c}) out of range"
        );
        self.data[r * self.stride + c / WORD] ^= 1u64 << (c % WORD);
    }

    /// Sets every entry of row `r` to `value`.
    pub fn fill_row(&mut self, r: usize, value: bool) {
        assert!(r < self.rows, "row {r} out of range");
        let tail = self.cols % WORD;
        let row = self.row_words_mut(r);
        row.fill(if value { !0 } else { 0 });
        if value && tail != 0 {
            if let Some(last) = row.last_mut() {
                *last &= (1u64 << tail) - 1;
            }
        }
    }

    #[inline]
    pub fn row_words(&self, r: usize) -> &[u64] {
        &self.data[r * self.stride..(r + 1) * self.stride]
    }

    #[inline]
    fn row_words_mut(&mut self, r: usize) -> &mut [u64] {
        &mut self.data[r * self.stride..(r + 1) * self.stride]
    }

    pub fn row(&self, r: usize) -> BitVec {
        BitVec::from_words(self.cols, self.row_words(r))
    }

    pub fn row_weight(&self, r: usize) -> usize {
        self.row_words(r)
            .iter()
            .map(|w| w.count_ones() as usize)
            .sum()
    }

    pub fn count_ones(&self) -> usize {
        self.data.iter().map(|w| w.count_ones() as usize).sum()
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(|&w| w == 0)
    }

    pub fn transpose(&self) -> BitMatrix {
        let mut t = Self::zeros(self.cols, self.rows);
        for r in 0..self.rows {
            for (wi, &w) in self.row_words(r).iter().enumerate() {
                let mut w = w;
                while w != 0 {
                    let c = wi * WORD + w.trailing_zeros() as usize;
                    t.set(c, r, true);
                    w &= w - 1;
                }
            }
        }
        t
    }

    /// `M * v` over GF(2).
    pub fn mul_vec(&self, v: &BitVec) -> Result<BitVec> {
        if v.len() != self.cols {
            return Err(param_err!(
                "vector length {} for {} columns",
                v.len(),
                self.cols
            ));
        }
        let mut out = BitVec::zeros(self.rows);
        for r in 0..self.rows {
            if parity_and(self.row_words(r), v.words()) {
                out.set(r, true);
            }
        }
        Ok(out)
    }

    /// Entrywise sum (XOR).
    pub fn add(&self, other: &BitMatrix) -> Result<BitMatrix> {
        self.check_same_shape(other)?;
        let mut out = self.clone();
        for (a, b) in out.data.iter_mut().zip(&other.data) {
            *a ^= b;
        }
        Ok(out)
    }

    /// Entrywise complement, i.e. `M + J`.
    pub fn complement(&self) -> BitMatrix {
        let mut out = self.clone();
        for w in &mut out.data {
            *w = !*w;
        }
        out.clear_padding();
        out
    }

    /// Hadamard (entrywise) product, which over GF(2) is bitwise AND.
    pub fn hadamard(&self, other: &BitMatrix) -> Result<BitMatrix> {
        self.check_same_shape(other)?;
        let mut out = self.clone();
        for (a, b) in out.data.iter_mut().zip(&other.data) {
            *a &= b;
        }
        Ok(out)
    }

    fn check_same_shape(&self, other: &BitMatrix) -> Result<()> {
        if self.rows != other.rows || self.cols != other.cols {
            return Err(param_err!(
                "shape mismatch: {}x{} vs {}x{}",
                self.rows,
                self.cols,
                other.rows,
                other.cols
            ));
        }
        Ok(())
    }

    /// Kronecker product: entry `(i1 * rows(B) + i2, j1 * cols(B) + j2)` is
    /// `A[i1][j1] * B[i2][j2]` (0-based).
    pub fn tensor(&self, other: &BitMatrix) -> Result<BitMatrix> {
        let rows = self.rows * other.rows;
        let cols = self.cols * other.cols;
        let mut out = Self::try_zeros(rows, cols)?;
        for i1 in 0..self.rows {
            for j1 in 0..self.cols {
                if !self.get(i1, j1) {
                    continue;
                }
                for i2 in 0..other.rows {
                    for j2 in 0..other.cols {
                        if other.get(i2, j2) {
                            out.set(i1 * other.rows + i2, j1 * other.cols + j2, true);
                        }
                    }
                }
            }
        }
        Ok(out)
    }

    /// Matrix with entry `(i, j)` taken from `(row_perm[i], col_perm[j])`.
    pub fn permuted(&self, row_perm: &[usize], col_perm: &[usize]) -> Result<BitMatrix> {
        if !is_permutation(row_perm, self.rows) || !is_permutation(col_perm, self.cols) {
            return Err(param_err!("invalid permutation"));
        }
        let mut out = Self::zeros(self.rows, self.cols);
        for (i, &src_r) in row_perm.iter().enumerate() {
            for (j, &src_c) in col_perm.iter().enumerate() {
                if self.get(src_r, src_c) {
                    out.set(i, j, true);
                }
            }
        }
        Ok(out)
    }

    /// Rank over GF(2). The receiver is left untouched.
    pub fn rank(&self) -> usize {
        let mut work = self.clone();
        work.eliminate(false).len()
    }

    /// Reduced row echelon form and its pivot columns.
    pub fn rref(&self) -> (BitMatrix, Vec<usize>) {
        let mut work = self.clone();
        let pivots = work.eliminate(true);
        (work, pivots)
    }

    /// Basis of the right null space `{v : M v = 0}`, of size `cols - rank`.
    pub fn kernel_basis(&self) -> Vec<BitVec> {
        let (reduced, pivots) = self.rref();
        let mut is_pivot = vec![false; self.cols];
        for &p in &pivots {
            is_pivot[p] = true;
        }
        (0..self.cols)
            .filter(|&c| !is_pivot[c])
            .map(|free| {
                let mut v = BitVec::unit(self.cols, free);
                for (i, &p) in pivots.iter().enumerate() {
                    if reduced.get(i, free) {
                        v.set(p, true);
                    }
                }
                v
            })
            .collect()
    }

    /// In-place Gaussian elimination with first-nonzero pivoting.
    ///
    /// Pivot rows end up in positions `0..rank`; with `full` the pivot columns
    /// are also cleared above each pivot. Returns the pivot columns.
    fn eliminate(&mut self, full: bool) -> Vec<usize> {
        let stride = self.stride;
        let mut pivots = Vec::new();
        let mut rank = 0;
        for c in 0..self.cols {
            if rank == self.rows {
                break;
            }
            let wi = c / WORD;
            let mask = 1u64 << (c % WORD);
            let Some(p) = (rank..self.rows).find(|&r| self.data[r * stride + wi] & mask != 0)
            else {
                continue;
            };
            if p != rank {
                for k in wi..stride {
                    self.data.swap(p * stride + k, rank * stride + k);
                }
            }
            let (head, tail) = self.data.split_at_mut((rank + 1) * stride);
            let pivot_row = &head[rank * stride + wi..(rank + 1) * stride];
            for row in tail.chunks_exact_mut(stride) {
                if row[wi] & mask != 0 {
                    xor_into(&mut row[wi..], pivot_row);
                }
            }
            if full {
                let (above, rest) = head.split_at_mut(rank * stride);
                let pivot_row = &rest[wi..stride];
                for row in above.chunks_exact_mut(stride) {
                    if row[wi] & mask != 0 {
                        xor_into(&mut row[wi..], pivot_row);
                    }
                }
            }
            pivots.push(c);
            rank += 1;
        }
        pivots
    }

    /// Text dump: a `rows cols` header line, then one hex string per row.
    ///
    /// Each hex digit covers four consecutive columns; digit `k` holds columns
    /// `4k..4k+4` with column `4k` in the least significant bit. A row is
    /// therefore `ceil(cols / 4)` digits long, lowest columns first.
    pub fn write_dump<W: Write>(&self, mut out: W) -> Result<()> {
        writeln!(out, "{} {}", self.rows, self.cols)?;
        let digits = self.cols.div_ceil(4);
        let mut line = String::with_capacity(digits);
        for r in 0..self.rows {
            line.clear();
            let words = self.row_words(r);
            for k in 0..digits {
                let nibble = (words[k / 16] >> ((k % 16) * 4)) & 0xf;
                line.push(char::from_digit(nibble as u32, 16).unwrap());
            }
            writeln!(out, "{line}")?;
        }
        Ok(())
    }

    /// Inverse of [`BitMatrix::write_dump`].
    pub fn read_dump<R: BufRead>(input: R) -> Result<BitMatrix> {
        let mut lines = input.lines();
        let header = lines.next().ok_or_else(|| param_err!("empty dump"))??;
        let mut parts = header.split_whitespace().map(str::parse::<usize>);
        let (Some(Ok(rows)), Some(Ok(cols)), None) = (parts.next(), parts.next(), parts.next())
        else {
            return Err(param_err!("malformed dump header {header:?}"));
        };
        let mut m = Self::try_zeros(rows, cols)?;
        let digits = cols.div_ceil(4);
        for r in 0..rows {
            let line = lines
                .next()
                .ok_or_else(|| param_err!("dump truncated at row {r}"))??;
            let line = line.trim();
            if line.len() != digits {
                return Err(param_err!("row {r}: expected {digits} hex digits"));
            }
            for (k, ch) in line.chars().enumerate() {
                let nibble = ch
                    .to_digit(16)
                    .ok_or_else(|| param_err!("row {r}: bad hex digit {ch:?}"))?;
                for b in 0..4 {
                    let c = 4 * k + b;
                    if nibble >> b & 1 == 1 {
                        if c >= cols {
                            return Err(param_err!("row {r}: bit set past column {cols}"));
                        }
                        m.set(r, c, true);
                    }
                }
            }
        }
        Ok(m)
    }
}

impl fmt::Debug for BitMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "BitMatrix {}x{}", self.rows, self.cols)?;
        for r in 0..self.rows.min(64) {
            let s: String = (0..self.cols.min(128))
                .map(|c| if self.get(r, c) { '1' } else { '.' })
                .collect();
            writeln!(f, "  {s}")?;
        }
        Ok(())
    }
}

#[inline]
fn xor_into(dst: &mut [u64], src: &[u64]) {
    for (d, s) in dst.iter_mut().zip(src) {
        *d ^= s;
    }
}

fn is_permutation(perm: &[usize], n: usize) -> bool {
    if perm.len() != n {
        return false;
    }
    let mut seen = vec![false; n];
    perm.iter()
        .all(|&p| p < n && !std::mem::replace(&mut seen[p], true))
}

/// A 0/1 matrix given by the positions of its ones, with arbitrary ordered
/// row and column keys. Absent keys stand for all-zero rows and columns.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SparseBitMatrix<R: Ord, C: Ord> {
    entries: BTreeSet<(R, C)>,
}

impl<R: Ord + Clone, C: Ord + Clone> Default for SparseBitMatrix<R, C> {
    fn default() -> Self {
        Self::new()
    }
}

impl<R: Ord + Clone, C: Ord + Clone> SparseBitMatrix<R, C> {
    pub fn new() -> Self {
        SparseBitMatrix {
            entries: BTreeSet::new(),
        }
    }

    /// Sets the entry to one; returns `false` if it already was.
    pub fn insert(&mut self, row: R, col: C) -> bool {
        self.entries.insert((row, col))
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn contains(&self, row: &R, col: &C) -> bool {
        self.entries.contains(&(row.clone(), col.clone()))
    }

    pub fn iter(&self) -> impl Iterator<Item = &(R, C)> {
        self.entries.iter()
    }

    /// Distinct row keys with at least one entry, sorted.
    pub fn row_keys(&self) -> Vec<R> {
        let set: BTreeSet<&R> = self.entries.iter().map(|(r, _)| r).collect();
        set.into_iter().cloned().collect()
    }

    /// Distinct column keys with at least one entry, sorted.
    pub fn col_keys(&self) -> Vec<C> {
        let set: BTreeSet<&C> = self.entries.iter().map(|(_, c)| c).collect();
        set.into_iter().cloned().collect()
    }

    /// Dense matrix on the occupied rows and columns, in sorted key order.
    pub fn compact(&self) -> Result<BitMatrix> {
        let rows = index_map(self.row_keys());
        let cols = index_map(self.col_keys());
        let mut m = BitMatrix::try_zeros(rows.len(), cols.len())?;
        for (r, c) in &self.entries {
            m.set(rows[r], cols[c], true);
        }
        Ok(m)
    }

    /// Splits the matrix into blocks that share no row or column keys.
    ///
    /// The blocks are the connected components of the bipartite row/column
    /// incidence graph, ordered by their smallest entry. The matrix is the
    /// direct sum of its blocks up to a permutation of rows and columns.
    pub fn blocks(&self) -> Vec<SparseBitMatrix<R, C>> {
        let rows = index_map(self.row_keys());
        let cols = index_map(self.col_keys());
        let mut uf = UnionFind::<usize>::new(rows.len() + cols.len());
        for (r, c) in &self.entries {
            uf.union(rows[r], rows.len() + cols[c]);
        }
        let mut by_root: BTreeMap<usize, usize> = BTreeMap::new();
        let mut blocks: Vec<SparseBitMatrix<R, C>> = Vec::new();
        for (r, c) in &self.entries {
            let root = uf.find(rows[r]);
            let idx = *by_root.entry(root).or_insert_with(|| {
                blocks.push(SparseBitMatrix::new());
                blocks.len() - 1
            });
            blocks[idx].insert(r.clone(), c.clone());
        }
        blocks
    }

    /// Rank as the sum of the dense ranks of the independent blocks.
    pub fn block_rank(&self) -> Result<usize> {
        self.blocks().iter().map(|b| Ok(b.compact()?.rank())).sum()
    }
}

impl<R: Ord, C: Ord> FromIterator<(R, C)> for SparseBitMatrix<R, C> {
    fn from_iter<I: IntoIterator<Item = (R, C)>>(iter: I) -> Self {
        SparseBitMatrix {
            entries: iter.into_iter().collect(),
        }
    }
}

fn index_map<K: Ord>(keys: Vec<K>) -> BTreeMap<K, usize> {
    keys.into_iter().enumerate().map(|(i, k)| (k, i)).collect()
}
