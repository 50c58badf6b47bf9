//! Catalog of forbidden configurations around F5 and its blow-ups.
//!
//! Vertex numbering is fixed per family so fixtures stay reproducible:
//!
//! * `F5`: f1..f5 are vertices 0..4, edges f1f2f3, f1f2f4, f3f4f5.
//! * blow-ups: vertex `i` keeps index `i` as its first copy; extra copies are
//!   appended after the original vertices, vertex by vertex.
//! * `F5S` / `F5SK`: parts X = [0,m), Y = [m,2m), Z = [2m,3m); S0 = the first
//!   s vertices of Z, S1 = the next s; T = [3m, 3m+t).
//! * `Fsim`: the 8-vertex base f1..f8 = 0..7, extra copies of f8 from 8 on.
//! * `Ktss`: T = [0,t), S0 = [t,t+s), S1 = [t+s,t+2s).
//! * `Sunflower`: core {0,1}, petals 2..t+2.
//! * `DisjointUnion`: copy `i` occupies [i*v, (i+1)*v).

use std::fmt;

use serde::Serialize;

use crate::constructs::complete_partite;
use crate::error::{invalid, Result};
use crate::hgraph::{Hypergraph3, Triple};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
pub enum Family {
    F5,
    F5BlowVertex,
    F5S,
    F5SK,
    Fsim,
    DisjointUnion,
    Ktss,
    Sunflower,
    Custom,
}

/// A forbidden configuration: a graph plus advisory family metadata.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Pattern {
    graph: Hypergraph3,
    family: Family,
    params: Vec<(&'static str, usize)>,
}

impl Pattern {
    /// Wraps an arbitrary graph; it must have at least one edge.
    pub fn custom(graph: Hypergraph3) -> Result<Self> {
        Self::build(graph, Family::Custom, vec![])
    }

    fn build(graph: Hypergraph3, family: Family, params: Vec<(&'static str, usize)>) -> Result<Self> {
        if graph.edge_count() == 0 {
            return Err(invalid("a pattern needs at least one edge"));
        }
        Ok(Pattern { graph, family, params })
    }

    pub fn graph(&self) -> &Hypergraph3 {
        &self.graph
    }

    pub fn family(&self) -> Family {
        self.family
    }

    pub fn params(&self) -> &[(&'static str, usize)] {
        &self.params
    }

    pub fn vertex_count(&self) -> usize {
        self.graph.n()
    }

    pub fn edge_count(&self) -> usize {
        self.graph.edge_count()
    }

    /// Human-readable vertex-numbering convention for this pattern.
    pub fn describe(&self) -> String {
        let p = |k: &str| {
            self.params
                .iter()
                .find(|(name, _)| *name == k)
                .map(|(_, v)| *v)
                .unwrap_or(0)
        };
        let body = match self.family {
            Family::F5 => "f1..f5 = 0..4; edges f1f2f3, f1f2f4, f3f4f5".to_string(),
            Family::F5BlowVertex => format!(
                "F5 with f{} blown up to {} copies; f1..f5 = 0..4, extra copies of f{} = 5..{}",
                p("i"),
                p("t"),
                p("i"),
                3 + p("t")
            ),
            Family::F5S | Family::F5SK => {
                let (m, t, s) = (p("m"), p("t").max(1), p("s").max(1));
                format!(
                    "X = [0,{m}), Y = [{m},{}), Z = [{},{}); S0 = [{},{}), S1 = [{},{}); T = [{},{})",
                    2 * m,
                    2 * m,
                    3 * m,
                    2 * m,
                    2 * m + s,
                    2 * m + s,
                    2 * m + 2 * s,
                    3 * m,
                    3 * m + t
                )
            }
            Family::Fsim => format!(
                "f1..f8 = 0..7; base edges f1f2f3, f1f2f4, f3f4f5, f5f6f7, f6f7f8; extra copies of f8 = 8..{}",
                7 + p("t")
            ),
            Family::Ktss => {
                let (t, s) = (p("t"), p("s"));
                format!("T = [0,{t}), S0 = [{t},{}), S1 = [{},{})", t + s, t + s, t + 2 * s)
            }
            Family::Sunflower => format!("core {{0,1}}, petals 2..{}", p("t") + 1),
            Family::DisjointUnion => format!("{} copies; copy i occupies [i*{v}, (i+1)*{v})", p("k"), v = p("v")),
            Family::Custom => "vertices 0..n as given".to_string(),
        };
        format!(
            "{self}: {} vertices, {} edges; {body}",
            self.vertex_count(),
            self.edge_count()
        )
    }
}

impl fmt::Display for Pattern {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:?}", self.family)?;
        if !self.params.is_empty() {
            let ps: Vec<String> = self.params.iter().map(|(k, v)| format!("{k}={v}")).collect();
            write!(f, "({})", ps.join(","))?;
        }
        Ok(())
    }
}

impl AsRef<Hypergraph3> for Pattern {
    fn as_ref(&self) -> &Hypergraph3 {
        &self.graph
    }
}

fn f5_graph() -> Hypergraph3 {
    Hypergraph3::from_sorted_triples(5, vec![[0, 1, 2], [0, 1, 3], [2, 3, 4]])
}

pub fn f5() -> Pattern {
    Pattern {
        graph: f5_graph(),
        family: Family::F5,
        params: vec![],
    }
}

/// Replaces vertex `i` by `mult[i]` copies and every edge by the complete
/// 3-partite family over the copy classes.
pub fn blow_up(p: &Pattern, mult: &[usize]) -> Result<Pattern> {
    let g = blow_up_graph(p.graph(), mult)?;
    Pattern::build(g, Family::Custom, vec![])
}

pub(crate) fn blow_up_graph(g: &Hypergraph3, mult: &[usize]) -> Result<Hypergraph3> {
    let n = g.n();
    if mult.len() != n {
        return Err(invalid(format!("blow-up needs {n} multiplicities, got {}", mult.len())));
    }
    if let Some(i) = mult.iter().position(|&m| m == 0) {
        return Err(invalid(format!("zero multiplicity at vertex {i}")));
    }
    let mut classes: Vec<Vec<usize>> = (0..n).map(|i| vec![i]).collect();
    let mut next = n;
    for (i, &m) in mult.iter().enumerate() {
        for _ in 1..m {
            classes[i].push(next);
            next += 1;
        }
    }
    let mut edges: Vec<Triple> = Vec::new();
    for &[a, b, c] in g.edges() {
        for &x in &classes[a] {
            for &y in &classes[b] {
                for &z in &classes[c] {
                    edges.push([x, y, z]);
                }
            }
        }
    }
    Hypergraph3::new(next, edges)
}

/// F5 with vertex f_i (1-based) blown up to `t` copies.
pub fn f5_blow_vertex(i: usize, t: usize) -> Result<Pattern> {
    if !(1..=5).contains(&i) {
        return Err(invalid(format!("F5 vertex index must be in 1..=5, got {i}")));
    }
    if t == 0 {
        return Err(invalid("blow-up size t must be positive"));
    }
    let mut mult = [1; 5];
    mult[i - 1] = t;
    let g = blow_up_graph(&f5_graph(), &mult)?;
    Pattern::build(g, Family::F5BlowVertex, vec![("i", i), ("t", t)])
}

/// T3(3m,3) plus a vertex v and one edge through v and two vertices of a part.
pub fn f5_s(m: usize) -> Result<Pattern> {
    if m < 2 {
        return Err(invalid(format!("F5^S(m) needs m >= 2, got {m}")));
    }
    let g = f5_s_k_graph(m, 1, 1);
    Pattern::build(g, Family::F5S, vec![("m", m)])
}

fn f5_s_k_graph(m: usize, t: usize, s: usize) -> Hypergraph3 {
    let base = complete_partite(&[m, m, m]);
    let n = 3 * m + t;
    let mut edges = base.edges().to_vec();
    let z = 2 * m;
    for x in 3 * m..n {
        for a in z..z + s {
            for b in z + s..z + 2 * s {
                edges.push([a, b, x]);
            }
        }
    }
    Hypergraph3::from_sorted_triples(n, edges)
}

/// T3(3m,3) plus t vertices whose links are K_{s,s} between two disjoint
/// s-sets of one part. `(t, s) = (1, 1)` is accepted and coincides with
/// [`f5_s`].
pub fn f5_s_k(m: usize, t: usize, s: usize) -> Result<Pattern> {
    if t == 0 || s == 0 {
        return Err(invalid("F5^S(m,t,K_{s,s}) needs t, s >= 1"));
    }
    if t + s < 3 && (t, s) != (1, 1) {
        return Err(invalid(format!(
            "F5^S(m,t,K_{{s,s}}) needs t + s >= 3, got t={t}, s={s}"
        )));
    }
    if m < 2 * s {
        return Err(invalid(format!("F5^S(m,t,K_{{s,s}}) needs m >= 2s, got m={m}, s={s}")));
    }
    Pattern::build(f5_s_k_graph(m, t, s), Family::F5SK, vec![("m", m), ("t", t), ("s", s)])
}

/// {f1f2f3, f1f2f4, f3f4f5, f5f6f7, f6f7f8} with f8 blown up to `t` copies.
pub fn f_sim(t: usize) -> Result<Pattern> {
    if t == 0 {
        return Err(invalid("F_sim(t) needs t >= 1"));
    }
    let base = Hypergraph3::from_sorted_triples(8, vec![[0, 1, 2], [0, 1, 3], [2, 3, 4], [4, 5, 6], [5, 6, 7]]);
    let g = blow_up_graph(&base, &[1, 1, 1, 1, 1, 1, 1, t])?;
    Pattern::build(g, Family::Fsim, vec![("t", t)])
}

/// `k` vertex-disjoint copies of `p`.
pub fn disjoint_union(p: &Pattern, k: usize) -> Result<Pattern> {
    if k == 0 {
        return Err(invalid("disjoint union needs k >= 1"));
    }
    let v = p.vertex_count();
    let mut edges = Vec::with_capacity(k * p.edge_count());
    for i in 0..k {
        let off = i * v;
        edges.extend(p.graph().edges().iter().map(|e| [e[0] + off, e[1] + off, e[2] + off]));
    }
    let g = Hypergraph3::from_sorted_triples(k * v, edges);
    Pattern::build(g, Family::DisjointUnion, vec![("k", k), ("v", v)])
}

/// Complete 3-partite 3-graph with parts of order t, s, s.
pub fn k_tss(t: usize, s: usize) -> Result<Pattern> {
    if t == 0 || s == 0 {
        return Err(invalid("K_{t,s,s} needs t, s >= 1"));
    }
    Pattern::build(complete_partite(&[t, s, s]), Family::Ktss, vec![("t", t), ("s", s)])
}

/// `t` edges pairwise meeting exactly in the core {0,1}.
pub fn sunflower(t: usize) -> Result<Pattern> {
    if t == 0 {
        return Err(invalid("sunflower needs t >= 1"));
    }
    let edges = (0..t).map(|i| [0, 1, i + 2]).collect();
    Pattern::build(
        Hypergraph3::from_sorted_triples(t + 2, edges),
        Family::Sunflower,
        vec![("t", t)],
    )
}
