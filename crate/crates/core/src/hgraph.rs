//! 3-uniform hypergraphs on dense vertex sets `0..n`.
//!
//! A [`Hypergraph3`] keeps its edges twice: as a sorted list of ascending
//! triples (the interchange form) and as a bitset over the colexicographic
//! rank of every triple, so membership tests in search loops are O(1).

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

pub type Vertex = usize;

/// Ascending vertex triple.
pub type Triple = [Vertex; 3];

/// Number of 3-subsets of an `n`-set.
pub fn binom3(n: usize) -> usize {
    if n < 3 {
        0
    } else {
        n * (n - 1) * (n - 2) / 6
    }
}

pub fn binom2(n: usize) -> usize {
    if n < 2 {
        0
    } else {
        n * (n - 1) / 2
    }
}

/// Colexicographic rank of an ascending triple `a < b < c`.
#[inline]
pub fn triple_rank(t: Triple) -> usize {
    let [a, b, c] = t;
    a + binom2(b) + binom3(c)
}

/// Inverse of [`triple_rank`].
pub fn triple_unrank(mut r: usize) -> Triple {
    let mut c = 2;
    while binom3(c + 1) <= r {
        c += 1;
    }
    r -= binom3(c);
    let mut b = 1;
    while binom2(b + 1) <= r {
        b += 1;
    }
    r -= binom2(b);
    [r, b, c]
}

#[inline]
pub fn sort3(mut t: Triple) -> Triple {
    if t[0] > t[1] {
        t.swap(0, 1);
    }
    if t[1] > t[2] {
        t.swap(1, 2);
    }
    if t[0] > t[1] {
        t.swap(0, 1);
    }
    t
}

/// All ascending triples of `0..n` in colexicographic order.
pub fn colex_triples(n: usize) -> Vec<Triple> {
    (0..binom3(n)).map(triple_unrank).collect()
}

#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Hypergraph3 {
    n: usize,
    edges: Vec<Triple>,
    mask: Vec<u64>,
}

impl Hypergraph3 {
    /// Builds a hypergraph, collapsing duplicate triples.
    pub fn new<I>(n: usize, triples: I) -> Result<Self>
    where
        I: IntoIterator<Item = Triple>,
    {
        let mut edges = Vec::new();
        for t in triples {
            for &v in &t {
                if v >= n {
                    return Err(Error::VertexOutOfRange { vertex: v, n });
                }
            }
            if t[0] == t[1] || t[1] == t[2] || t[0] == t[2] {
                return Err(Error::RepeatedVertex(t));
            }
            edges.push(sort3(t));
        }
        Ok(Self::from_sorted_triples(n, edges))
    }

    /// Caller guarantees every triple is ascending, distinct and in range.
    pub(crate) fn from_sorted_triples(n: usize, mut edges: Vec<Triple>) -> Self {
        edges.sort_unstable();
        edges.dedup();
        let mut mask = vec![0u64; binom3(n).div_ceil(64)];
        for &e in &edges {
            let r = triple_rank(e);
            mask[r / 64] |= 1 << (r % 64);
        }
        Hypergraph3 { n, edges, mask }
    }

    pub(crate) fn from_ranks(n: usize, ranks: impl IntoIterator<Item = usize>) -> Self {
        Self::from_sorted_triples(n, ranks.into_iter().map(triple_unrank).collect())
    }

    pub fn empty(n: usize) -> Self {
        Self::from_sorted_triples(n, Vec::new())
    }

    /// The complete 3-graph on `n` vertices.
    pub fn complete(n: usize) -> Self {
        Self::from_sorted_triples(n, colex_triples(n))
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    /// Edges as ascending triples in lexicographic order.
    pub fn edges(&self) -> &[Triple] {
        &self.edges
    }

    /// Membership test; the vertices may come in any order.
    #[inline]
    pub fn contains(&self, a: Vertex, b: Vertex, c: Vertex) -> bool {
        if a >= self.n || b >= self.n || c >= self.n || a == b || b == c || a == c {
            return false;
        }
        self.contains_sorted(sort3([a, b, c]))
    }

    #[inline]
    pub(crate) fn contains_sorted(&self, t: Triple) -> bool {
        let r = triple_rank(t);
        self.mask[r / 64] >> (r % 64) & 1 == 1
    }

    pub fn degree(&self, v: Vertex) -> usize {
        self.edges.iter().filter(|e| e.contains(&v)).count()
    }

    pub fn degrees(&self) -> Vec<usize> {
        let mut deg = vec![0; self.n];
        for e in &self.edges {
            for &v in e {
                deg[v] += 1;
            }
        }
        deg
    }

    /// Number of edges containing both `u` and `v`.
    pub fn pair_degree(&self, u: Vertex, v: Vertex) -> Result<usize> {
        self.check_vertex(u)?;
        self.check_vertex(v)?;
        if u == v {
            return Err(crate::error::invalid(format!(
                "pair degree needs two distinct vertices, got {u} twice"
            )));
        }
        Ok((0..self.n)
            .filter(|&w| w != u && w != v && self.contains(u, v, w))
            .count())
    }

    pub fn link_graph(&self, v: Vertex) -> Result<LinkGraph> {
        self.check_vertex(v)?;
        let edges = self
            .edges
            .iter()
            .filter(|e| e.contains(&v))
            .map(|e| {
                let mut it = e.iter().copied().filter(|&x| x != v);
                [it.next().unwrap(), it.next().unwrap()]
            })
            .collect();
        Ok(LinkGraph { center: v, edges })
    }

    /// Triples of `0..n` that are not edges, in lexicographic order.
    pub fn non_edges(&self) -> Vec<Triple> {
        let mut out: Vec<Triple> = colex_triples(self.n)
            .into_iter()
            .filter(|&t| !self.contains_sorted(t))
            .collect();
        out.sort_unstable();
        out
    }

    pub fn with_edge(&self, t: Triple) -> Result<Self> {
        let mut edges = self.edges.clone();
        edges.push(t);
        Self::new(self.n, edges)
    }

    /// Relabels vertex `v` as `perm[v]`.
    pub fn relabel(&self, perm: &[Vertex]) -> Result<Self> {
        if perm.len() != self.n {
            return Err(crate::error::invalid(format!(
                "permutation of length {} for {} vertices",
                perm.len(),
                self.n
            )));
        }
        let mut seen = vec![false; self.n];
        for &p in perm {
            if p >= self.n || std::mem::replace(&mut seen[p], true) {
                return Err(crate::error::invalid("relabeling is not a permutation"));
            }
        }
        Ok(Self::from_sorted_triples(
            self.n,
            self.edges
                .iter()
                .map(|e| sort3([perm[e[0]], perm[e[1]], perm[e[2]]]))
                .collect(),
        ))
    }

    /// Copy of the graph placed on a larger vertex set, shifted by `offset`.
    pub fn embed_into(&self, n: usize, offset: usize) -> Result<Self> {
        if offset + self.n > n {
            return Err(crate::error::invalid("target vertex set too small"));
        }
        Ok(Self::from_sorted_triples(
            n,
            self.edges
                .iter()
                .map(|e| [e[0] + offset, e[1] + offset, e[2] + offset])
                .collect(),
        ))
    }

    /// Edge-set union; both graphs must have the same vertex count.
    pub fn union(&self, other: &Self) -> Result<Self> {
        if self.n != other.n {
            return Err(crate::error::invalid("union of graphs on different vertex sets"));
        }
        let mut edges = self.edges.clone();
        edges.extend_from_slice(&other.edges);
        Ok(Self::from_sorted_triples(self.n, edges))
    }

    pub fn is_subgraph_of(&self, other: &Self) -> bool {
        self.n <= other.n && self.edges.iter().all(|&e| other.contains_sorted(e))
    }

    /// Serializes to the H3 text format: `n m` then one `a b c` line per edge.
    pub fn to_h3(&self) -> String {
        let mut s = format!("{} {}\n", self.n, self.edges.len());
        for [a, b, c] in &self.edges {
            s.push_str(&format!("{a} {b} {c}\n"));
        }
        s
    }

    /// Parses the H3 text format. Blank lines and `#` comment lines are
    /// skipped; the edge count in the header must match.
    pub fn from_h3(text: &str) -> Result<Self> {
        let mut lines = text
            .lines()
            .enumerate()
            .map(|(i, l)| (i + 1, l.trim()))
            .filter(|(_, l)| !l.is_empty() && !l.starts_with('#'));
        let (hl, header) = lines.next().ok_or(Error::Parse {
            line: 0,
            msg: "missing header".into(),
        })?;
        let head = parse_numbers(hl, header, 2)?;
        let (n, m) = (head[0], head[1]);
        let mut triples = Vec::with_capacity(m);
        for (ln, line) in lines {
            let v = parse_numbers(ln, line, 3)?;
            triples.push([v[0], v[1], v[2]]);
        }
        if triples.len() != m {
            return Err(Error::Parse {
                line: hl,
                msg: format!("header announces {m} edges, found {}", triples.len()),
            });
        }
        Self::new(n, triples)
    }

    fn check_vertex(&self, v: Vertex) -> Result<()> {
        if v >= self.n {
            Err(Error::VertexOutOfRange { vertex: v, n: self.n })
        } else {
            Ok(())
        }
    }
}

fn parse_numbers(line: usize, s: &str, count: usize) -> Result<Vec<usize>> {
    let v: Vec<usize> = s
        .split_whitespace()
        .map(|tok| {
            tok.parse::<usize>().map_err(|e| Error::Parse {
                line,
                msg: format!("{tok:?}: {e}"),
            })
        })
        .collect::<Result<_>>()?;
    if v.len() != count {
        return Err(Error::Parse {
            line,
            msg: format!("expected {count} integers, found {}", v.len()),
        });
    }
    Ok(v)
}

impl fmt::Debug for Hypergraph3 {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Hypergraph3(n={}, {:?})", self.n, self.edges)
    }
}

impl AsRef<Hypergraph3> for Hypergraph3 {
    fn as_ref(&self) -> &Hypergraph3 {
        self
    }
}

impl Serialize for Hypergraph3 {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_str(&self.to_h3())
    }
}

impl<'de> Deserialize<'de> for Hypergraph3 {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let s = String::deserialize(d)?;
        Hypergraph3::from_h3(&s).map_err(serde::de::Error::custom)
    }
}

/// The 2-uniform link of a vertex: `{e \ {v} : v ∈ e}`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LinkGraph {
    pub center: Vertex,
    /// Ascending pairs in lexicographic order.
    pub edges: Vec<[Vertex; 2]>,
}

impl LinkGraph {
    pub fn len(&self) -> usize {
        self.edges.len()
    }

    pub fn is_empty(&self) -> bool {
        self.edges.is_empty()
    }

    pub fn contains(&self, u: Vertex, v: Vertex) -> bool {
        let p = if u < v { [u, v] } else { [v, u] };
        self.edges.binary_search(&p).is_ok()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn f5() -> Hypergraph3 {
        Hypergraph3::new(5, [[0, 1, 2], [0, 1, 3], [2, 3, 4]]).unwrap()
    }

    #[test]
    fn rank_roundtrip() {
        for (r, t) in colex_triples(9).into_iter().enumerate() {
            assert!(t[0] < t[1] && t[1] < t[2]);
            assert_eq!(triple_rank(t), r);
        }
    }

    #[test]
    fn make_hypergraph_examples() {
        let h = f5();
        assert_eq!(h.n(), 5);
        assert_eq!(h.edges(), &[[0, 1, 2], [0, 1, 3], [2, 3, 4]]);
        assert_eq!(Hypergraph3::new(4, []).unwrap().edge_count(), 0);
        let d = Hypergraph3::new(3, [[0, 1, 2], [2, 1, 0]]).unwrap();
        assert_eq!(d.edge_count(), 1);
    }

    #[test]
    fn make_hypergraph_errors() {
        assert_eq!(
            Hypergraph3::new(3, [[0, 1, 3]]),
            Err(Error::VertexOutOfRange { vertex: 3, n: 3 })
        );
        assert_eq!(Hypergraph3::new(4, [[0, 1, 1]]), Err(Error::RepeatedVertex([0, 1, 1])));
    }

    #[test]
    fn links_of_f5() {
        let h = f5();
        assert_eq!(h.link_graph(4).unwrap().edges, vec![[2, 3]]);
        assert_eq!(h.link_graph(0).unwrap().edges, vec![[1, 2], [1, 3]]);
        assert!(Hypergraph3::empty(4).link_graph(2).unwrap().is_empty());
        assert!(h.link_graph(5).is_err());
    }

    #[test]
    fn pair_degrees() {
        let h = f5();
        assert_eq!(h.pair_degree(0, 1), Ok(2));
        assert_eq!(h.pair_degree(0, 4), Ok(0));
        let k5 = Hypergraph3::complete(5);
        assert_eq!(k5.edge_count(), 10);
        for u in 0..5 {
            for v in 0..5 {
                if u != v {
                    assert_eq!(k5.pair_degree(u, v), Ok(3));
                }
            }
        }
        assert!(h.pair_degree(1, 1).is_err());
        assert!(h.pair_degree(1, 9).is_err());
    }

    #[test]
    fn h3_format() {
        let h = f5();
        let text = h.to_h3();
        assert_eq!(text, "5 3\n0 1 2\n0 1 3\n2 3 4\n");
        assert_eq!(Hypergraph3::from_h3(&text).unwrap(), h);
        let commented = "# kind params\n5 3\n0 1 2\n\n0 1 3\n2 3 4\n";
        assert_eq!(Hypergraph3::from_h3(commented).unwrap(), h);
        assert!(Hypergraph3::from_h3("5 2\n0 1 2\n").is_err());
        assert!(Hypergraph3::from_h3("5 1\n0 1\n").is_err());
        assert!(Hypergraph3::from_h3("").is_err());
    }

    fn arb_graph() -> impl Strategy<Value = Hypergraph3> {
        (3usize..10).prop_flat_map(|n| {
            proptest::collection::vec(proptest::bool::ANY, binom3(n)).prop_map(move |bits| {
                Hypergraph3::from_ranks(n, bits.iter().enumerate().filter(|(_, b)| **b).map(|(i, _)| i))
            })
        })
    }

    proptest! {
        #[test]
        fn link_sizes_sum_to_three_times_edges(h in arb_graph()) {
            let total: usize = (0..h.n()).map(|v| h.link_graph(v).unwrap().len()).sum();
            prop_assert_eq!(total, 3 * h.edge_count());
        }

        #[test]
        fn pair_degree_matches_link(h in arb_graph()) {
            for u in 0..h.n() {
                let link = h.link_graph(u).unwrap();
                for v in 0..h.n() {
                    if u == v { continue; }
                    let in_link = link.edges.iter().filter(|p| p.contains(&v)).count();
                    prop_assert_eq!(h.pair_degree(u, v).unwrap(), in_link);
                }
            }
        }

        #[test]
        fn rebuild_is_idempotent(h in arb_graph()) {
            let again = Hypergraph3::new(h.n(), h.edges().iter().copied()).unwrap();
            prop_assert_eq!(&again, &h);
            prop_assert_eq!(Hypergraph3::from_h3(&h.to_h3()).unwrap(), h);
        }
    }
}
