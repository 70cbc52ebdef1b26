//! Cayley graphs `Cay(GF(q)^2, S \ {0})` for the connection sets
//! `S = {(a, a^n) : a in GF(q)}`, `q = 2^m`.
//!
//! A vector `(x1, x2)` is encoded as the integer `x1.bits() << m | x2.bits()`;
//! this encoding is also the row and column order of every matrix built on
//! the vertex set.

use std::collections::VecDeque;
use std::io::{BufRead, Write};

use num_integer::Integer;
use serde::Serialize;

use crate::bitmatrix::BitMatrix;
use crate::error::{budget_err, param_err, property_err, Result};
use crate::field::{FieldElem, FieldSpec};

/// Largest field degree for which the `4^m x 4^m` adjacency is materialized
/// (32 MiB of packed bits at `m = 7`).
pub const MAX_GRAPH_M: u32 = 7;

/// Parameters `(n, m)` of the generalized BCH family member on `GF(2^m)^2`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
pub struct FamilyParams {
    n: u32,
    m: u32,
}

impl FamilyParams {
    /// Requires `n` odd with `n > 1`. Exponents above `2^m - 1` are accepted
    /// so that small fields can be paired with any member of the family.
    pub fn new(n: u32, m: u32) -> Result<Self> {
        if m == 0 || m > crate::field::MAX_DEGREE {
            return Err(param_err!(
                "m = {m} outside 1..={}",
                crate::field::MAX_DEGREE
            ));
        }
        if n.is_multiple_of(2) {
            return Err(param_err!("n = {n} must be odd"));
        }
        if n <= 1 {
            return Err(param_err!("n = {n} must exceed 1"));
        }
        Ok(FamilyParams { n, m })
    }

    /// The classical BCH member, `n = 3`.
    pub fn bch(m: u32) -> Result<Self> {
        Self::new(3, m)
    }

    pub fn n(&self) -> u32 {
        self.n
    }

    pub fn m(&self) -> u32 {
        self.m
    }

    /// `r` with `n = 2^r + 1`, if any.
    pub fn r_plus(&self) -> Option<u32> {
        let k = self.n - 1;
        k.is_power_of_two().then(|| k.trailing_zeros())
    }

    /// `r >= 2` with `n = 2^r - 1`, if any.
    pub fn r_minus(&self) -> Option<u32> {
        let k = self.n + 1;
        (k.is_power_of_two() && k >= 4).then(|| k.trailing_zeros())
    }

    pub fn num_vertices(&self) -> usize {
        1usize << (2 * self.m)
    }

    pub fn degree(&self) -> usize {
        (1usize << self.m) - 1
    }

    pub fn num_edges(&self) -> usize {
        self.num_vertices() * self.degree() / 2
    }

    fn check_field(&self, spec: &FieldSpec) -> Result<()> {
        if spec.degree() != self.m {
            return Err(param_err!(
                "field degree {} does not match m = {}",
                spec.degree(),
                self.m
            ));
        }
        Ok(())
    }
}

/// Packs a vector of `GF(2^m)^2` into its vertex index.
#[inline]
pub fn encode_vertex(m: u32, x1: FieldElem, x2: FieldElem) -> usize {
    ((x1.bits() as usize) << m) | x2.bits() as usize
}

/// Inverse of [`encode_vertex`].
#[inline]
pub fn decode_vertex(m: u32, v: usize) -> (FieldElem, FieldElem) {
    let mask = (1usize << m) - 1;
    (
        FieldElem::new((v >> m) as u32),
        FieldElem::new((v & mask) as u32),
    )
}

/// The set `{(a, a^n)}` as sorted vertex encodings, zero included.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ConnectionSet {
    params: FamilyParams,
    vectors: Vec<u32>,
}

impl ConnectionSet {
    pub fn params(&self) -> FamilyParams {
        self.params
    }

    pub fn vectors(&self) -> &[u32] {
        &self.vectors
    }

    pub fn nonzero(&self) -> impl Iterator<Item = u32> + '_ {
        self.vectors.iter().copied().filter(|&v| v != 0)
    }

    pub fn contains(&self, v: u32) -> bool {
        self.vectors.binary_search(&v).is_ok()
    }

    pub fn len(&self) -> usize {
        self.vectors.len()
    }

    pub fn is_empty(&self) -> bool {
        self.vectors.is_empty()
    }

    /// Membership mask over all `4^m` vertex encodings.
    pub fn indicator(&self) -> Vec<bool> {
        let mut mask = vec![false; self.params.num_vertices()];
        for &v in &self.vectors {
            mask[v as usize] = true;
        }
        mask
    }
}

pub fn connection_set(params: FamilyParams, spec: &FieldSpec) -> Result<ConnectionSet> {
    params.check_field(spec)?;
    let m = params.m;
    let mut vectors: Vec<u32> = spec
        .elements()
        .map(|a| encode_vertex(m, a, spec.pow(a, params.n as u64)) as u32)
        .collect();
    vectors.sort_unstable();
    Ok(ConnectionSet { params, vectors })
}

/// `Cay(GF(q)^2, S \ {0})` with its adjacency matrix materialized.
#[derive(Clone, Debug)]
pub struct CayleyGraph {
    params: FamilyParams,
    spec: FieldSpec,
    connection: ConnectionSet,
    adjacency: BitMatrix,
}

impl CayleyGraph {
    pub fn params(&self) -> FamilyParams {
        self.params
    }

    pub fn field(&self) -> &FieldSpec {
        &self.spec
    }

    pub fn connection_set(&self) -> &ConnectionSet {
        &self.connection
    }

    pub fn adjacency(&self) -> &BitMatrix {
        &self.adjacency
    }

    pub fn num_vertices(&self) -> usize {
        self.adjacency.rows()
    }

    pub fn degree_of(&self, v: usize) -> usize {
        self.adjacency.row_weight(v)
    }

    pub fn num_edges(&self) -> usize {
        self.adjacency.count_ones() / 2
    }

    pub fn is_adjacent(&self, u: usize, v: usize) -> bool {
        self.adjacency.get(u, v)
    }

    pub fn neighbors(&self, v: usize) -> impl Iterator<Item = usize> + '_ {
        self.connection.nonzero().map(move |s| v ^ s as usize)
    }

    /// Edges `(u, v)` with `u < v`, in lexicographic order.
    pub fn edges(&self) -> Vec<(usize, usize)> {
        let mut out = Vec::with_capacity(self.params.num_edges());
        for u in 0..self.num_vertices() {
            let mut nbrs: Vec<usize> = self.neighbors(u).filter(|&v| v > u).collect();
            nbrs.sort_unstable();
            out.extend(nbrs.into_iter().map(|v| (u, v)));
        }
        out
    }
}

pub fn build_graph(params: FamilyParams, spec: &FieldSpec) -> Result<CayleyGraph> {
    params.check_field(spec)?;
    if params.m > MAX_GRAPH_M {
        return Err(budget_err!(
            "adjacency of 4^{} vertices exceeds the m <= {MAX_GRAPH_M} budget",
            params.m
        ));
    }
    let connection = connection_set(params, spec)?;
    let n = params.num_vertices();
    let mut adjacency = BitMatrix::try_zeros(n, n)?;
    for x in 0..n {
        for s in connection.nonzero() {
            adjacency.set(x, x ^ s as usize, true);
        }
    }
    Ok(CayleyGraph {
        params,
        spec: *spec,
        connection,
        adjacency,
    })
}

/// Triangle-freeness from the single-variable equation: the graph has a
/// triangle iff `(x+1)^n = x^n + 1` has a root `x` outside `{0, 1}`.
///
/// For `n = 2^r + 1` and `n = 2^r - 1` the scan is cross-checked against the
/// closed gcd rules; a disagreement is reported as a property violation.
pub fn is_triangle_free_criterion(params: FamilyParams, spec: &FieldSpec) -> Result<bool> {
    params.check_field(spec)?;
    let n = params.n as u64;
    let free = spec
        .elements()
        .skip(2)
        .all(|x| spec.pow(x + FieldElem::ONE, n) != spec.pow(x, n) + FieldElem::ONE);
    if let Some(expected) = gcd_rule(params) {
        if expected != free {
            return Err(property_err!(
                "equation scan gives triangle_free = {free} but the gcd rule gives {expected} for n = {}, m = {}",
                params.n,
                params.m
            ));
        }
    }
    Ok(free)
}

/// The closed gcd rule when `n = 2^r + 1` (`gcd(r, m) = 1`) or `n = 2^r - 1`
/// (`gcd(r - 1, m) = 1`).
pub fn gcd_rule(params: FamilyParams) -> Option<bool> {
    let m = params.m;
    params
        .r_plus()
        .map(|r| r.gcd(&m) == 1)
        .or_else(|| params.r_minus().map(|r| (r - 1).gcd(&m) == 1))
}

/// Brute-force triangle search on the built graph.
///
/// The graph is vertex-transitive, so it is triangle-free iff no two
/// neighbours of vertex 0 are adjacent.
pub fn triangle_oracle(graph: &CayleyGraph) -> bool {
    let adj = graph.adjacency();
    let zero_row = adj.row_words(0);
    (0..graph.num_vertices())
        .filter(|&u| adj.get(0, u))
        .all(|u| {
            adj.row_words(u)
                .iter()
                .zip(zero_row)
                .all(|(a, b)| a & b == 0)
        })
}

/// Connectivity through the span of the connection set: a Cayley graph on an
/// F_2-vector space is connected iff its connection set spans the space.
pub fn is_connected(params: FamilyParams, spec: &FieldSpec) -> Result<bool> {
    Ok(span_dimension(params, spec)? == 2 * params.m as usize)
}

/// F_2-dimension of the span of the connection set inside `GF(q)^2`.
pub fn span_dimension(params: FamilyParams, spec: &FieldSpec) -> Result<usize> {
    let set = connection_set(params, spec)?;
    let dim = 2 * params.m as usize;
    let mut rows = BitMatrix::try_zeros(set.len(), dim)?;
    for (i, &v) in set.vectors().iter().enumerate() {
        for b in 0..dim {
            if v >> b & 1 == 1 {
                rows.set(i, b, true);
            }
        }
    }
    Ok(rows.rank())
}

/// Breadth-first connectivity check on the built graph.
pub fn bfs_connected(graph: &CayleyGraph) -> bool {
    let n = graph.num_vertices();
    let mut seen = vec![false; n];
    let mut queue = VecDeque::from([0usize]);
    seen[0] = true;
    let mut reached = 1;
    while let Some(u) = queue.pop_front() {
        for v in graph.adjacency().row(u).iter_ones() {
            if !seen[v] {
                seen[v] = true;
                reached += 1;
                queue.push_back(v);
            }
        }
    }
    reached == n
}

/// Writes the edge list: a `# cayley n=.. m=.. vertices=.. edges=..` header,
/// then one `u v` line per edge with `u < v`.
pub fn export_edges<W: Write>(graph: &CayleyGraph, mut sink: W) -> Result<()> {
    let p = graph.params();
    let edges = graph.edges();
    writeln!(
        sink,
        "# cayley n={} m={} vertices={} edges={}",
        p.n(),
        p.m(),
        graph.num_vertices(),
        edges.len()
    )?;
    for (u, v) in edges {
        writeln!(sink, "{u} {v}")?;
    }
    sink.flush()?;
    Ok(())
}

/// An edge list read back from [`export_edges`] output.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct EdgeList {
    pub n: u32,
    pub m: u32,
    pub num_vertices: usize,
    pub edges: Vec<(usize, usize)>,
}

impl EdgeList {
    pub fn adjacency(&self) -> Result<BitMatrix> {
        let mut adj = BitMatrix::try_zeros(self.num_vertices, self.num_vertices)?;
        for &(u, v) in &self.edges {
            adj.set(u, v, true);
            adj.set(v, u, true);
        }
        Ok(adj)
    }
}

pub fn import_edges<R: BufRead>(source: R) -> Result<EdgeList> {
    let mut lines = source.lines();
    let header = lines
        .next()
        .ok_or_else(|| param_err!("empty edge list"))??;
    let fields = header
        .strip_prefix("# cayley ")
        .ok_or_else(|| param_err!("missing edge-list header"))?;
    let get = |key: &str| -> Result<usize> {
        fields
            .split_whitespace()
            .find_map(|kv| kv.strip_prefix(key).and_then(|v| v.strip_prefix('=')))
            .and_then(|v| v.parse().ok())
            .ok_or_else(|| param_err!("header field {key} missing"))
    };
    let n = get("n")? as u32;
    let m = get("m")? as u32;
    let num_vertices = get("vertices")?;
    let expected_edges = get("edges")?;
    let mut edges = Vec::with_capacity(expected_edges);
    for line in lines {
        let line = line?;
        if line.trim().is_empty() {
            continue;
        }
        let mut it = line.split_whitespace().map(str::parse::<usize>);
        let (Some(Ok(u)), Some(Ok(v)), None) = (it.next(), it.next(), it.next()) else {
            return Err(param_err!("malformed edge line {line:?}"));
        };
        if u >= v || v >= num_vertices {
            return Err(param_err!("edge {u} {v} out of order or range"));
        }
        edges.push((u, v));
    }
    if edges.len() != expected_edges {
        return Err(param_err!(
            "header promises {expected_edges} edges, found {}",
            edges.len()
        ));
    }
    Ok(EdgeList {
        n,
        m,
        num_vertices,
        edges,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn setup(n: u32, m: u32) -> (FamilyParams, FieldSpec) {
        (FamilyParams::new(n, m).unwrap(), FieldSpec::new(m).unwrap())
    }

    /// Triples of distinct nonzero connection vectors summing to zero.
    fn has_zero_sum_triple(set: &ConnectionSet) -> bool {
        let v: Vec<u32> = set.nonzero().collect();
        for i in 0..v.len() {
            for j in i + 1..v.len() {
                for k in j + 1..v.len() {
                    if v[i] ^ v[j] ^ v[k] == 0 {
                        return true;
                    }
                }
            }
        }
        false
    }

    #[test]
    fn params_validation() {
        assert!(FamilyParams::new(4, 3).is_err());
        assert!(FamilyParams::new(1, 3).is_err());
        assert!(FamilyParams::new(9, 3).is_ok());
        assert!(FamilyParams::new(7, 3).is_ok());
        assert!(FamilyParams::new(3, 1).is_ok());
        assert!(FamilyParams::new(5, 2).is_ok());
        assert!(FamilyParams::new(5, 1).is_ok());
        assert!(FamilyParams::new(3, 0).is_err());
        let p = FamilyParams::new(9, 4).unwrap();
        assert_eq!((p.r_plus(), p.r_minus()), (Some(3), None));
        let p = FamilyParams::new(7, 4).unwrap();
        assert_eq!((p.r_plus(), p.r_minus()), (None, Some(3)));
        let p = FamilyParams::new(3, 4).unwrap();
        assert_eq!((p.r_plus(), p.r_minus()), (Some(1), Some(2)));
    }

    #[test]
    fn connection_sets() {
        let (p, f) = setup(3, 1);
        assert_eq!(connection_set(p, &f).unwrap().vectors(), &[0, 3]);

        let (p, f) = setup(3, 2);
        let set = connection_set(p, &f).unwrap();
        assert_eq!(set.vectors(), &[0, 0b0101, 0b1001, 0b1101]);

        let (p, f) = setup(3, 3);
        let set = connection_set(p, &f).unwrap();
        assert_eq!(set.len(), 8);
        let seconds: std::collections::BTreeSet<u32> =
            set.vectors().iter().map(|v| v & 7).collect();
        assert_eq!(seconds.len(), 8);
        assert_eq!(set.vectors().iter().filter(|&&v| v == 0).count(), 1);
    }

    #[test]
    fn graph_sizes() {
        for (m, edges) in [(1, 2), (2, 24), (3, 224)] {
            let (p, f) = setup(3, m);
            let g = build_graph(p, &f).unwrap();
            assert_eq!(g.num_vertices(), 1 << (2 * m));
            assert_eq!(g.num_edges(), edges);
            for v in 0..g.num_vertices() {
                assert_eq!(g.degree_of(v), (1 << m) - 1);
                assert!(!g.is_adjacent(v, v));
            }
            assert_eq!(g.adjacency().transpose(), *g.adjacency());
        }
    }

    #[test]
    fn triangle_examples() {
        let (p, f) = setup(3, 4);
        assert!(is_triangle_free_criterion(p, &f).unwrap());
        let (p, f) = setup(5, 2);
        assert!(!is_triangle_free_criterion(p, &f).unwrap());
        let (p, f) = setup(7, 4);
        assert!(!is_triangle_free_criterion(p, &f).unwrap());
        let (p, f) = setup(7, 3);
        assert!(is_triangle_free_criterion(p, &f).unwrap());

        let (p, f) = setup(3, 3);
        assert!(triangle_oracle(&build_graph(p, &f).unwrap()));
        let (p, f) = setup(5, 2);
        let g = build_graph(p, &f).unwrap();
        assert!(!triangle_oracle(&g));
        assert!(has_zero_sum_triple(g.connection_set()));
        let (p, f) = setup(9, 4);
        assert!(triangle_oracle(&build_graph(p, &f).unwrap()));
    }

    #[test]
    fn triangle_oracle_matches_triples() {
        for m in 2..=5 {
            for n in (3..(1u32 << m)).step_by(2) {
                let (p, f) = setup(n, m);
                let g = build_graph(p, &f).unwrap();
                assert_eq!(
                    triangle_oracle(&g),
                    !has_zero_sum_triple(g.connection_set())
                );
            }
        }
    }

    #[test]
    fn connectivity_examples() {
        let (p, f) = setup(3, 2);
        assert_eq!(span_dimension(p, &f).unwrap(), 3);
        assert!(!is_connected(p, &f).unwrap());
        assert!(!bfs_connected(&build_graph(p, &f).unwrap()));
        let (p, f) = setup(3, 3);
        assert!(is_connected(p, &f).unwrap());
        assert!(bfs_connected(&build_graph(p, &f).unwrap()));
        for r in 1..=3 {
            for m in (2 * r + 1)..=8 {
                let (p, f) = setup((1 << r) + 1, m);
                assert!(is_connected(p, &f).unwrap(), "r={r} m={m}");
            }
        }
    }

    #[test]
    fn export_matching() {
        let (p, f) = setup(3, 1);
        let mut buf = Vec::new();
        export_edges(&build_graph(p, &f).unwrap(), &mut buf).unwrap();
        assert_eq!(
            String::from_utf8(buf).unwrap(),
            "# cayley n=3 m=1 vertices=4 edges=2\n0 3\n1 2\n"
        );
    }

    #[test]
    fn export_small() {
        let (p, f) = setup(3, 2);
        let g = build_graph(p, &f).unwrap();
        let mut buf = Vec::new();
        export_edges(&g, &mut buf).unwrap();
        let text = String::from_utf8(buf.clone()).unwrap();
        assert!(text.starts_with("# cayley n=3 m=2 vertices=16 edges=24\n"));
        assert!(text.contains("\n0 5\n"));
        let back = import_edges(&buf[..]).unwrap();
        assert_eq!((back.n, back.m, back.num_vertices), (3, 2, 16));
        assert_eq!(back.adjacency().unwrap(), *g.adjacency());
    }

    #[test]
    fn build_budget() {
        let (p, f) = setup(3, 8);
        assert!(matches!(build_graph(p, &f), Err(crate::Error::Budget(_))));
        let f3 = FieldSpec::new(3).unwrap();
        assert!(matches!(build_graph(p, &f3), Err(crate::Error::Param(_))));
    }
}
