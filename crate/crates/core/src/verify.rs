//! One-shot reproduction of every checkable claim, at three budgets.

use std::time::Instant;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::bitmatrix::BitMatrix;
use crate::carryfree::{
    b_count, b_set, count_nm, first_block_bound, nm_bound, nm_closed_form, nm_long_recurrence,
    nm_recurrence, within_closed_form_bound,
};
use crate::cayley::{
    bfs_connected, build_graph, gcd_rule, is_connected, is_triangle_free_criterion,
    triangle_oracle, FamilyParams,
};
use crate::code::{code_report, coset_matrix, sample_codewords, verify_repair};
use crate::error::{property_err, Result};
use crate::field::FieldSpec;
use crate::poly::{
    certify_unit_rate, eval_matrix, frobenius, poly_rank, Monomial, SparsePoly, DEFAULT_TERM_BUDGET,
};

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum VerifyBudget {
    /// Small fields only: `m <= 4`, `n` in `{3, 5, 7, 9}`.
    Quick,
    /// Full parameter ranges plus the `n = 7` certificate.
    Full,
    /// Adds the `n = 11` and `n = 13` certificates.
    Extended,
}

#[derive(Clone, Debug, Serialize)]
pub struct ClaimOutcome {
    pub id: u32,
    pub claim: &'static str,
    pub passed: bool,
    pub detail: String,
    pub elapsed_ms: u64,
}

type Check = fn(VerifyBudget) -> Result<String>;

const CLAIMS: &[(u32, &str, VerifyBudget, Check)] = &[
    (
        1,
        "carry-free counts b_0..b_3 and N_1, N_2",
        VerifyBudget::Quick,
        small_counts,
    ),
    (
        2,
        "N_m by enumeration, both recurrences and the closed form",
        VerifyBudget::Quick,
        sequences,
    ),
    (
        3,
        "B_s split, product and Mersenne-index laws",
        VerifyBudget::Quick,
        b_set_laws,
    ),
    (
        4,
        "generalized N_m(r) values and block bounds",
        VerifyBudget::Quick,
        generalized_bounds,
    ),
    (
        5,
        "rank sandwich for H, W and substitution W ~ D",
        VerifyBudget::Quick,
        sandwich,
    ),
    (
        6,
        "rank(D) bounded by the carry-free count",
        VerifyBudget::Quick,
        counting_bound,
    ),
    (
        7,
        "BCH matrix rates decrease under the N_m bound",
        VerifyBudget::Quick,
        rate_trend,
    ),
    (
        8,
        "triangle-freeness, connectivity and edge counts",
        VerifyBudget::Quick,
        graph_criteria,
    ),
    (
        9,
        "sampled codewords satisfy the storage property",
        VerifyBudget::Quick,
        storage_property,
    ),
    (
        10,
        "tensor, Hadamard, Frobenius and evaluation rank laws",
        VerifyBudget::Quick,
        rank_laws,
    ),
    (
        11,
        "n = 7 certificate rank(d^63) = 3256",
        VerifyBudget::Full,
        certificate_n7,
    ),
    (
        12,
        "n = 11, 13 certificates 15018 and 14442",
        VerifyBudget::Extended,
        certificates_extended,
    ),
];

/// Runs every claim available at `budget`, in order.
pub fn verify_all(budget: VerifyBudget) -> Vec<ClaimOutcome> {
    CLAIMS
        .iter()
        .filter(|(_, _, needs, _)| *needs <= budget)
        .map(|&(id, claim, _, check)| {
            let start = Instant::now();
            let (passed, detail) = match check(budget) {
                Ok(detail) => (true, detail),
                Err(e) => (false, e.to_string()),
            };
            ClaimOutcome {
                id,
                claim,
                passed,
                detail,
                elapsed_ms: start.elapsed().as_millis() as u64,
            }
        })
        .collect()
}

fn ensure(cond: bool, what: impl FnOnce() -> String) -> Result<()> {
    if cond {
        Ok(())
    } else {
        Err(property_err!("{}", what()))
    }
}

fn small_counts(_: VerifyBudget) -> Result<String> {
    let b: Vec<usize> = (0..4).map(|s| b_count(s, 1)).collect::<Result<_>>()?;
    ensure(b == [1, 3, 3, 7], || format!("b_0..b_3 = {b:?}"))?;
    let n = (count_nm(1, 1)?, count_nm(2, 1)?);
    ensure(n == (4, 14), || format!("(N_1, N_2) = {n:?}"))?;
    Ok("b = [1, 3, 3, 7], N_1 = 4, N_2 = 14".into())
}

fn sequences(budget: VerifyBudget) -> Result<String> {
    let m_max = if budget == VerifyBudget::Quick { 8 } else { 12 };
    for m in 0..=m_max {
        let values = [
            count_nm(m, 1)? as u128,
            nm_recurrence(m)?,
            nm_long_recurrence(m)?,
            nm_closed_form(m)?,
        ];
        ensure(values.iter().all(|&v| v == values[0]), || {
            format!("m = {m}: {values:?}")
        })?;
    }
    Ok(format!(
        "agree for m <= {m_max}, N_{m_max} = {}",
        nm_recurrence(m_max)?
    ))
}

fn b_set_laws(budget: VerifyBudget) -> Result<String> {
    let bits = if budget == VerifyBudget::Quick { 8 } else { 12 };
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    for _ in 0..200 {
        let s = rng.gen_range(1u64..1 << bits);
        let k = rng.gen_range(1..bits);
        let (hi, lo) = (s >> k, s & ((1 << k) - 1));
        let mut sumset: Vec<u64> = b_set(hi, 1)?
            .into_iter()
            .flat_map(|x| b_set(lo, 1).unwrap().into_iter().map(move |y| (x << k) + y))
            .collect();
        sumset.sort_unstable();
        sumset.dedup();
        ensure(sumset == b_set(s, 1)?, || {
            format!("split law fails at s = {s}, k = {k}")
        })?;
    }
    for s in 0u64..1 << bits {
        for k in 0..bits - 1 {
            if s >> k & 1 == 0 {
                let (hi, lo) = (s >> (k + 1), s & ((1 << k) - 1));
                let product = b_count(hi, 1)? * b_count(lo, 1)?;
                ensure(b_count(s, 1)? == product, || {
                    format!("product law fails at s = {s}, k = {k}")
                })?;
            }
        }
    }
    for i in 1..=bits {
        let b = b_count((1 << (i - 1)) - 1, 1)?;
        ensure(b == (1 << i) - 1, || format!("b_(2^{} - 1) = {b}", i - 1))?;
    }
    Ok(format!("s < 2^{bits}"))
}

fn generalized_bounds(budget: VerifyBudget) -> Result<String> {
    for r in 1..=4u32 {
        for k in 1..=r {
            let n = count_nm(k, r)?;
            ensure(n == 4u64.pow(k), || format!("N_{k}({r}) = {n}"))?;
        }
    }
    for r in [2u32, 3] {
        let n = count_nm(r + 1, r)? as u128;
        ensure(n <= first_block_bound(r), || {
            format!("N_{}({r}) = {n}", r + 1)
        })?;
    }
    let m_max = if budget == VerifyBudget::Quick { 8 } else { 10 };
    for m in 1..=m_max {
        let b = nm_bound(m, 2)?;
        ensure(b.block_bound_ok, || {
            format!("block bound fails for r = 2, m = {m}: {b:?}")
        })?;
    }
    Ok(format!("r = 2 block bound for m <= {m_max}"))
}

fn sandwich(budget: VerifyBudget) -> Result<String> {
    let m_max = if budget == VerifyBudget::Quick { 4 } else { 5 };
    let mut ranks = Vec::new();
    for m in 1..=m_max {
        let r = code_report(FamilyParams::bch(m)?, &FieldSpec::new(m)?)?;
        ensure(r.checks.sandwich_ok && r.checks.substitution_ok, || {
            format!(
                "m = {m}: rank H, W, D = {}, {}, {}",
                r.rank_h, r.rank_w, r.rank_d
            )
        })?;
        ranks.push((r.rank_h, r.rank_w, r.rank_d));
    }
    Ok(format!("(H, W, D) ranks {ranks:?}"))
}

fn counting_bound(budget: VerifyBudget) -> Result<String> {
    let m3 = if budget == VerifyBudget::Quick { 4 } else { 5 };
    let cases = (1..=m3).map(|m| (3, m)).chain(
        [5, 9]
            .into_iter()
            .flat_map(|n| (1..=4).map(move |m| (n, m))),
    );
    let mut count = 0;
    for (n, m) in cases {
        let r = code_report(FamilyParams::new(n, m)?, &FieldSpec::new(m)?)?;
        let n_m = r.n_m.expect("n = 2^r + 1");
        ensure(r.rank_d as u64 <= n_m, || {
            format!("n = {n}, m = {m}: rank(D) = {} > N_m = {n_m}", r.rank_d)
        })?;
        count += 1;
    }
    Ok(format!("{count} family members"))
}

fn rate_trend(budget: VerifyBudget) -> Result<String> {
    let m_max = if budget == VerifyBudget::Quick { 4 } else { 6 };
    let mut rates = Vec::new();
    for m in 1..=m_max {
        let spec = FieldSpec::new(m)?;
        let rank = coset_matrix(FamilyParams::bch(m)?, &spec)?.rank() as u64;
        let n_m = count_nm(m, 1)?;
        ensure(rank <= n_m + 1, || {
            format!("m = {m}: rank(H) = {rank} > N_m + 1")
        })?;
        ensure(within_closed_form_bound(n_m as u128, m), || {
            format!("N_{m} above the closed-form bound")
        })?;
        rates.push(num_rational::Ratio::new(rank, 4u64.pow(m)));
    }
    let shown: Vec<String> = rates.iter().map(|r| r.to_string()).collect();
    let ties: Vec<String> = (1..rates.len())
        .filter(|&i| rates[i] >= rates[i - 1])
        .map(|i| format!("m = {} -> {}", i, i + 1))
        .collect();
    ensure(ties.is_empty(), || {
        format!(
            "not strictly decreasing at {}: rank(H)/4^m = {}",
            ties.join(", "),
            shown.join(", ")
        )
    })?;
    Ok(format!("rank(H)/4^m = {}", shown.join(", ")))
}

fn graph_criteria(budget: VerifyBudget) -> Result<String> {
    let m_max = if budget == VerifyBudget::Quick { 4 } else { 5 };
    let mut checked = 0;
    for r in 1..=3u32 {
        for n in [(1u32 << r) + 1, (1 << r) - 1] {
            if n < 3 {
                continue;
            }
            for m in 1..=m_max {
                let (params, spec) = (FamilyParams::new(n, m)?, FieldSpec::new(m)?);
                let graph = build_graph(params, &spec)?;
                let scan = is_triangle_free_criterion(params, &spec)?;
                ensure(triangle_oracle(&graph) == scan, || {
                    format!("n = {n}, m = {m}: oracle disagrees")
                })?;
                if let Some(rule) = gcd_rule(params) {
                    ensure(rule == scan, || {
                        format!("n = {n}, m = {m}: gcd rule disagrees")
                    })?;
                }
                checked += 1;
            }
        }
    }
    for n in (3..=15).step_by(2) {
        for m in 1..=m_max {
            let (params, spec) = (FamilyParams::new(n, m)?, FieldSpec::new(m)?);
            let graph = build_graph(params, &spec)?;
            ensure(
                is_connected(params, &spec)? == bfs_connected(&graph),
                || format!("n = {n}, m = {m}: connectivity disagrees"),
            )?;
            let expected = (1usize << (2 * m)) * ((1 << m) - 1) / 2;
            ensure(graph.num_edges() == expected, || {
                format!("n = {n}, m = {m}: {} edges", graph.num_edges())
            })?;
        }
    }
    Ok(format!(
        "{checked} triangle cases, odd n <= 15 for connectivity, m <= {m_max}"
    ))
}

fn storage_property(_: VerifyBudget) -> Result<String> {
    for n in [3, 5] {
        for m in [2, 3] {
            let (params, spec) = (FamilyParams::new(n, m)?, FieldSpec::new(m)?);
            let graph = build_graph(params, &spec)?;
            let h = coset_matrix(params, &spec)?;
            for (i, word) in sample_codewords(&h, 100, 0x5eed + m as u64)
                .unwrap()
                .into_iter()
                .enumerate()
            {
                ensure(verify_repair(&graph, &word)?, || {
                    format!("n = {n}, m = {m}: sample {i} not repairable")
                })?;
                for v in 0..word.len() {
                    let mut bad = word.clone();
                    bad.flip(v);
                    ensure(!verify_repair(&graph, &bad)?, || {
                        format!("n = {n}, m = {m}: flip {v} undetected")
                    })?;
                }
            }
        }
    }
    Ok("400 codewords, every single-bit corruption detected".into())
}

fn random_poly(rng: &mut ChaCha8Rng, max_deg: u32, terms: usize) -> SparsePoly {
    SparsePoly::from_monomials((0..terms).map(|_| {
        Monomial::new(
            rng.gen_range(0..=max_deg),
            rng.gen_range(0..=max_deg),
            rng.gen_range(0..=max_deg),
            rng.gen_range(0..=max_deg),
        )
    }))
    .expect("small exponents")
}

fn rank_laws(budget: VerifyBudget) -> Result<String> {
    let mut rng = ChaCha8Rng::seed_from_u64(10);
    for _ in 0..100 {
        let a = BitMatrix::random(6, 6, &mut rng);
        let b = BitMatrix::random(6, 6, &mut rng);
        let t = a.tensor(&b)?.rank();
        ensure(t == a.rank() * b.rank(), || {
            "tensor rank not multiplicative".into()
        })?;
        let a = BitMatrix::random(8, 8, &mut rng);
        let b = BitMatrix::random(8, 8, &mut rng);
        ensure(a.hadamard(&b)?.rank() <= a.rank() * b.rank(), || {
            "Hadamard rank exceeds product".into()
        })?;
    }
    for _ in 0..50 {
        let p = random_poly(&mut rng, 6, 12);
        let i = rng.gen_range(1..4);
        ensure(poly_rank(&frobenius(&p, i)?)? == poly_rank(&p)?, || {
            format!("Frobenius changes rank of {p}")
        })?;
    }
    let fields: &[u32] = if budget == VerifyBudget::Quick {
        &[3]
    } else {
        &[3, 4]
    };
    for k in 0..50 {
        let spec = FieldSpec::new(fields[k % fields.len()])?;
        let max_deg = (spec.order() as u32 - 1).min(6);
        let p = random_poly(&mut rng, max_deg, 10);
        let e = eval_matrix(&p, &spec)?.rank();
        ensure(e == poly_rank(&p)?, || {
            format!("evaluation rank {e} for {p} over GF({})", spec.order())
        })?;
    }
    Ok("tensor, Hadamard, Frobenius, evaluation".into())
}

fn certificate(n: u32, t: u32, expected: usize) -> Result<String> {
    let r = certify_unit_rate(n, t, DEFAULT_TERM_BUDGET)?;
    let last = r.trace.last().expect("non-empty trace");
    ensure(
        r.certified && r.t_star == Some(t) && last.rank == expected,
        || {
            format!(
                "n = {n}: t* = {:?}, rank at t = {} is {}",
                r.t_star, last.t, last.rank
            )
        },
    )?;
    Ok(format!(
        "n = {n}: rank(d^{}) = {} < 4^{t}",
        (1u32 << t) - 1,
        last.rank
    ))
}

fn certificate_n7(_: VerifyBudget) -> Result<String> {
    certificate(7, 6, 3256)
}

fn certificates_extended(_: VerifyBudget) -> Result<String> {
    Ok(format!(
        "{}; {}",
        certificate(11, 7, 15018)?,
        certificate(13, 7, 14442)?
    ))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn quick_budget_outcomes() {
        let outcomes = verify_all(VerifyBudget::Quick);
        assert_eq!(outcomes.len(), 10);
        for o in &outcomes {
            if o.id == 7 {
                // rank(H_1)/4 = rank(H_2)/16 = 1/2, so strict decrease fails at the first step
                assert!(!o.passed);
                assert!(
                    o.detail.contains("m = 1 -> 2") && !o.detail.contains("m = 2 -> 3"),
                    "{}",
                    o.detail
                );
            } else {
                assert!(o.passed, "claim {}: {}", o.id, o.detail);
            }
        }
    }
}
