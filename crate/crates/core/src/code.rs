//! Storage codes on the Cayley graphs: the coset matrix `H = A + I`, its
//! complement `W = H + J`, the substituted evaluation matrix `D`, and the
//! neighbour-repair property of the code `ker H`.

use num_rational::Ratio;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::bitmatrix::{BitMatrix, BitVec};
use crate::carryfree::{count_nm, within_closed_form_bound};
use crate::cayley::{connection_set, CayleyGraph, FamilyParams, MAX_GRAPH_M};
use crate::error::{budget_err, param_err, Result};
use crate::field::{FieldElem, FieldSpec};

/// Largest `m` for the `4^m x 4^m` code matrices.
pub const MAX_MATRIX_M: u32 = MAX_GRAPH_M;

fn check_matrix_budget(params: FamilyParams, spec: &FieldSpec) -> Result<()> {
    if spec.degree() != params.m() {
        return Err(param_err!(
            "field degree {} does not match m = {}",
            spec.degree(),
            params.m()
        ));
    }
    if params.m() > MAX_MATRIX_M {
        return Err(budget_err!(
            "4^{} square matrices exceed the m <= {MAX_MATRIX_M} budget",
            params.m()
        ));
    }
    Ok(())
}

/// `H[x][y] = 1` iff `x - y` lies in the connection set (zero included),
/// so `H = A(Γ) + I`.
pub fn coset_matrix(params: FamilyParams, spec: &FieldSpec) -> Result<BitMatrix> {
    check_matrix_budget(params, spec)?;
    let set = connection_set(params, spec)?;
    let n = params.num_vertices();
    let mut h = BitMatrix::try_zeros(n, n)?;
    for x in 0..n {
        for &s in set.vectors() {
            h.set(x, x ^ s as usize, true);
        }
    }
    Ok(h)
}

/// `W = H + J`, the entrywise complement of a square matrix.
pub fn w_matrix(h: &BitMatrix) -> Result<BitMatrix> {
    if !h.is_square() {
        return Err(param_err!(
            "expected a square matrix, got {}x{}",
            h.rows(),
            h.cols()
        ));
    }
    Ok(h.complement())
}

/// `D[x][y] = 1` iff `(x1+y1)^n + (x2 + x1^n) + (y2 + y1^n) != 0`.
///
/// This is `W` after the change of coordinates `x2 -> x2 + x1^n` on both
/// rows and columns, evaluated directly rather than by permuting `W`.
pub fn d_matrix(params: FamilyParams, spec: &FieldSpec) -> Result<BitMatrix> {
    check_matrix_budget(params, spec)?;
    let m = params.m();
    let q = spec.order();
    let pow_n = spec.power_table(params.n() as u64);
    let n = params.num_vertices();
    let mut d = BitMatrix::try_zeros(n, n)?;
    for x1 in 0..q {
        for x2 in 0..q {
            let row = (x1 << m) | x2;
            d.fill_row(row, true);
            // the entry is 0 exactly where y2 = (x1+y1)^n + x1^n + y1^n + x2
            for y1 in 0..q {
                let y2 = pow_n[x1 ^ y1] + pow_n[x1] + pow_n[y1] + FieldElem::new(x2 as u32);
                d.set(row, (y1 << m) | y2.bits() as usize, false);
            }
        }
    }
    Ok(d)
}

/// The weight exponent `r` of the carry-free count bounding `rank(D)`,
/// available when `n = 2^r + 1` (the classical `n = 3` has `r = 1`).
pub fn counting_exponent(params: FamilyParams) -> Option<u32> {
    params.r_plus()
}

/// Exact bound checks attached to a [`CodeReport`].
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct BoundChecks {
    /// `|rank(H) - rank(W)| <= 1`.
    pub sandwich_ok: bool,
    /// `rank(W) = rank(D)`.
    pub substitution_ok: bool,
    /// `rank(D) <= N_m` and `rank(H) <= N_m + 1`, when `N_m` applies.
    pub nm_ok: Option<bool>,
    /// `n = 3` only: `rank(D) <= N_m <= (1+√2)/2 (2+√2)^m`, decided in Z[√2].
    pub closed_form_ok: Option<bool>,
}

impl BoundChecks {
    pub fn all_ok(&self) -> bool {
        self.sandwich_ok
            && self.substitution_ok
            && self.nm_ok.unwrap_or(true)
            && self.closed_form_ok.unwrap_or(true)
    }
}

/// Ranks, dimension and exact rate of one family member.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct CodeReport {
    pub n: u32,
    pub m: u32,
    pub modulus: u32,
    /// Matrix size `4^m`, also the code length.
    pub size: usize,
    pub rank_h: usize,
    pub rank_w: usize,
    pub rank_d: usize,
    /// `4^m - rank(H)`.
    pub dimension: usize,
    pub rate_num: u64,
    pub rate_den: u64,
    pub weight_exponent: Option<u32>,
    pub n_m: Option<u64>,
    pub checks: BoundChecks,
}

impl CodeReport {
    /// Code rate `dimension / 4^m` in lowest terms.
    pub fn rate(&self) -> Ratio<u64> {
        Ratio::new(self.rate_num, self.rate_den)
    }

    /// Rate of `H`, `rank(H) / 4^m`.
    pub fn matrix_rate(&self) -> Ratio<u64> {
        Ratio::new(self.rank_h as u64, self.size as u64)
    }

    /// Decimal rendering of the code rate to six places.
    pub fn rate_decimal(&self) -> String {
        format!("{:.6}", self.rate_num as f64 / self.rate_den as f64)
    }
}

pub fn code_report(params: FamilyParams, spec: &FieldSpec) -> Result<CodeReport> {
    let h = coset_matrix(params, spec)?;
    let rank_h = h.rank();
    let rank_w = w_matrix(&h)?.rank();
    drop(h);
    let rank_d = d_matrix(params, spec)?.rank();

    let size = params.num_vertices();
    let dimension = size - rank_h;
    let rate = Ratio::new(dimension as u64, size as u64);

    let weight_exponent = counting_exponent(params);
    let n_m = weight_exponent
        .map(|r| count_nm(params.m(), r))
        .transpose()?;
    let nm_ok = n_m.map(|n_m| rank_d as u64 <= n_m && rank_h as u64 <= n_m + 1);
    let closed_form_ok = match (params.n(), n_m) {
        (3, Some(n_m)) => {
            Some(rank_d as u64 <= n_m && within_closed_form_bound(n_m as u128, params.m()))
        }
        _ => None,
    };

    Ok(CodeReport {
        n: params.n(),
        m: params.m(),
        modulus: spec.modulus(),
        size,
        rank_h,
        rank_w,
        rank_d,
        dimension,
        rate_num: *rate.numer(),
        rate_den: *rate.denom(),
        weight_exponent,
        n_m,
        checks: BoundChecks {
            sandwich_ok: rank_h.abs_diff(rank_w) <= 1,
            substitution_ok: rank_w == rank_d,
            nm_ok,
            closed_form_ok,
        },
    })
}

/// Deterministic pseudo-random codewords: each is a random GF(2)
/// combination of a kernel basis of `H`.
pub fn sample_codewords(h: &BitMatrix, count: usize, seed: u64) -> Result<Vec<BitVec>> {
    if count == 0 {
        return Err(param_err!("count must be positive"));
    }
    let basis = h.kernel_basis();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    Ok((0..count)
        .map(|_| {
            let mut word = BitVec::zeros(h.cols());
            for b in &basis {
                if rng.gen::<bool>() {
                    word.xor_assign(b);
                }
            }
            word
        })
        .collect())
}

/// The storage property checked on the graph itself: every coordinate equals
/// the XOR of the coordinates at its neighbours.
pub fn verify_repair(graph: &CayleyGraph, codeword: &BitVec) -> Result<bool> {
    let n = graph.num_vertices();
    if codeword.len() != n {
        return Err(param_err!(
            "codeword length {} for {n} vertices",
            codeword.len()
        ));
    }
    let adj = graph.adjacency();
    let words = codeword.words();
    Ok((0..n).all(|v| {
        let parity = adj
            .row_words(v)
            .iter()
            .zip(words)
            .fold(0u32, |acc, (a, c)| acc ^ (a & c).count_ones())
            & 1;
        (parity == 1) == codeword.get(v)
    }))
}
