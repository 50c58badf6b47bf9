//! Extremal and lower-bound constructions.
//!
//! Part layout is fixed: parts are consecutive blocks, remainder vertices go
//! to the lowest-indexed parts, and apex/clique vertices take the highest
//! indices.

use std::collections::HashMap;
use std::fmt;

use serde::Serialize;

use crate::error::{invalid, Error, Result};
use crate::formulas::f_sim_formula;
use crate::hgraph::{binom3, colex_triples, Hypergraph3, Triple};
use crate::patterns::k_tss;
use crate::solver::{self, SolverLimits};

/// Sizes of a balanced `k`-partition of `n`, larger parts first.
pub fn balanced_parts(n: usize, k: usize) -> Vec<usize> {
    (0..k).map(|i| n / k + usize::from(i < n % k)).collect()
}

/// Complete multipartite 3-graph over consecutive blocks of the given sizes.
pub fn complete_partite(sizes: &[usize]) -> Hypergraph3 {
    let n: usize = sizes.iter().sum();
    let mut part = Vec::with_capacity(n);
    for (i, &s) in sizes.iter().enumerate() {
        part.extend(std::iter::repeat_n(i, s));
    }
    let edges = colex_triples(n)
        .into_iter()
        .filter(|&[a, b, c]| part[a] != part[b] && part[b] != part[c] && part[a] != part[c])
        .collect();
    Hypergraph3::from_sorted_triples(n, edges)
}

/// Vertex ranges of consecutive blocks.
pub fn part_ranges(sizes: &[usize]) -> Vec<std::ops::Range<usize>> {
    let mut start = 0;
    sizes
        .iter()
        .map(|&s| {
            let r = start..start + s;
            start += s;
            r
        })
        .collect()
}

/// T_3(n,k): complete k-partite 3-graph with balanced parts.
pub fn turan_partite(n: usize, k: usize) -> Result<Hypergraph3> {
    if k < 3 {
        return Err(invalid(format!("Turán graph needs k >= 3 parts, got {k}")));
    }
    Ok(complete_partite(&balanced_parts(n, k)))
}

/// How the in-part graphs of a construction were produced.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum FillMode {
    Exact,
    Greedy,
}

impl fmt::Display for FillMode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            FillMode::Exact => "exact",
            FillMode::Greedy => "greedy",
        })
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum ConstructionKind {
    TuranPartite,
    TuranPlus,
    GConstruction,
    FsimExtremal,
    KtssFreeEmbedded,
}

/// A requested construction with its parameters.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ConstructionSpec {
    pub kind: ConstructionKind,
    pub n: usize,
    pub k: Option<usize>,
    pub t: Option<usize>,
    pub m: Option<usize>,
    pub s: Option<usize>,
}

/// Output of [`build`]: the graph plus how it was filled.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Construction {
    pub spec: ConstructionSpec,
    pub mode: FillMode,
    pub graph: Hypergraph3,
}

impl Construction {
    /// `# kind params mode` header line.
    pub fn header(&self) -> String {
        let s = &self.spec;
        let mut params = vec![format!("n={}", s.n)];
        for (name, v) in [("k", s.k), ("t", s.t), ("m", s.m), ("s", s.s)] {
            if let Some(v) = v {
                params.push(format!("{name}={v}"));
            }
        }
        format!("# {:?} {} {}", s.kind, params.join(","), self.mode)
    }

    pub fn to_h3_with_header(&self) -> String {
        format!("{}\n{}", self.header(), self.graph.to_h3())
    }
}

fn need(v: Option<usize>, name: &str) -> Result<usize> {
    v.ok_or_else(|| invalid(format!("missing parameter {name}")))
}

/// Builds any construction; `greedy` allows heuristic in-part fills above
/// the exact-solver bounds.
pub fn build(spec: &ConstructionSpec, greedy: bool) -> Result<Construction> {
    let n = spec.n;
    let (graph, mode) = match spec.kind {
        ConstructionKind::TuranPartite => (turan_partite(n, spec.k.unwrap_or(3))?, FillMode::Exact),
        ConstructionKind::TuranPlus => turan_plus_with(n, need(spec.t, "t")?, greedy)?,
        ConstructionKind::GConstruction => (
            g_construction(need(spec.t, "t")?, need(spec.m, "m")?, n)?,
            FillMode::Exact,
        ),
        ConstructionKind::FsimExtremal => (f_sim_extremal(n, need(spec.t, "t")?)?, FillMode::Exact),
        ConstructionKind::KtssFreeEmbedded => {
            ktss_free_embedded_with(n, need(spec.t, "t")?, need(spec.s, "s")?, greedy)?
        }
    };
    Ok(Construction {
        spec: spec.clone(),
        mode,
        graph,
    })
}

/// Places `inner` graphs (one per part, on local labels) inside the parts of `base`.
fn fill_parts(base: &Hypergraph3, sizes: &[usize], inner: &[Hypergraph3]) -> Hypergraph3 {
    let mut edges: Vec<Triple> = base.edges().to_vec();
    for (range, g) in part_ranges(sizes).into_iter().zip(inner) {
        let off = range.start;
        edges.extend(g.edges().iter().map(|e| [e[0] + off, e[1] + off, e[2] + off]));
    }
    Hypergraph3::from_sorted_triples(base.n(), edges)
}

/// Lexicographic greedy packing with every pair in at most `cap` triples.
pub fn greedy_design(n: usize, cap: usize) -> Hypergraph3 {
    let mut load = vec![0usize; n * n];
    let mut all = colex_triples(n);
    all.sort_unstable();
    let mut edges = Vec::new();
    for [a, b, c] in all {
        if load[a * n + b] < cap && load[a * n + c] < cap && load[b * n + c] < cap {
            load[a * n + b] += 1;
            load[a * n + c] += 1;
            load[b * n + c] += 1;
            edges.push([a, b, c]);
        }
    }
    Hypergraph3::from_sorted_triples(n, edges)
}

/// T_3(n,3)^{t+}: T_3(n,3) with a maximum packing (pair-degree <= t-1)
/// inside every part, solved exactly.
pub fn turan_plus(n: usize, t: usize) -> Result<Hypergraph3> {
    Ok(turan_plus_with(n, t, false)?.0)
}

pub fn turan_plus_with(n: usize, t: usize, greedy: bool) -> Result<(Hypergraph3, FillMode)> {
    if t < 2 {
        return Err(invalid(format!("T_3(n,3)^(t+) needs t >= 2, got {t}")));
    }
    turan_plus_capacity(n, t, t - 1, greedy)
}

/// Same layout as [`turan_plus`] but with an explicit in-part pair capacity.
/// Exposed for mutation tests of the verification harness.
pub fn turan_plus_capacity(n: usize, t: usize, cap: usize, greedy: bool) -> Result<(Hypergraph3, FillMode)> {
    if t < 2 {
        return Err(invalid(format!("T_3(n,3)^(t+) needs t >= 2, got {t}")));
    }
    if n < 3 {
        return Err(invalid(format!("T_3(n,3)^(t+) needs n >= 3, got {n}")));
    }
    let sizes = balanced_parts(n, 3);
    let limits = SolverLimits::default();
    let exact = sizes.iter().all(|&s| s <= limits.design_max_n);
    if !exact && !greedy {
        return Err(Error::BoundExceeded {
            what: "part size for an exact design",
            value: sizes[0],
            limit: limits.design_max_n,
        });
    }
    let mut cache: HashMap<usize, Hypergraph3> = HashMap::new();
    let mut inner = Vec::new();
    for &s in &sizes {
        if let std::collections::hash_map::Entry::Vacant(e) = cache.entry(s) {
            let g = if exact {
                solver::solve_design_capacity(s, cap, &limits)?.witness
            } else {
                greedy_design(s, cap)
            };
            e.insert(g);
        }
        inner.push(cache[&s].clone());
    }
    let mode = if exact { FillMode::Exact } else { FillMode::Greedy };
    Ok((fill_parts(&complete_partite(&sizes), &sizes, &inner), mode))
}

/// G(t,m,n): T_3(n-t,3) on the low vertices plus every triple meeting the
/// t-set T = [n-t, n).
pub fn g_construction(t: usize, m: usize, n: usize) -> Result<Hypergraph3> {
    if m < 2 {
        return Err(invalid(format!("G(t,m,n) needs m >= 2, got {m}")));
    }
    if n < t + 6 {
        return Err(invalid(format!("G(t,m,n) needs n >= t + 6, got t={t}, n={n}")));
    }
    let base = turan_partite(n - t, 3)?;
    let mut edges = base.edges().to_vec();
    edges.extend(colex_triples(n).into_iter().filter(|e| e[2] >= n - t));
    Ok(Hypergraph3::from_sorted_triples(n, edges))
}

/// T_3(a,b,c) with a t-clique on the top vertices, every clique vertex also
/// joined to every pair inside a part. The part sizes are the maximising
/// composition reported by [`f_sim_formula`].
pub fn f_sim_extremal(n: usize, t: usize) -> Result<Hypergraph3> {
    let (_, (a, b, c)) = f_sim_formula(n, t)?;
    f_sim_extremal_parts(t, [a, b, c])
}

/// The same construction over explicit part sizes.
pub fn f_sim_extremal_parts(t: usize, sizes: [usize; 3]) -> Result<Hypergraph3> {
    if sizes.contains(&0) {
        return Err(invalid("parts must be non-empty"));
    }
    let low: usize = sizes.iter().sum();
    let n = low + t;
    let mut edges = complete_partite(&sizes).edges().to_vec();
    let apex = low..n;
    for x in apex.clone() {
        for r in part_ranges(&sizes) {
            for p in r.clone() {
                for q in p + 1..r.end {
                    edges.push([p, q, x]);
                }
            }
        }
    }
    for x in apex.clone() {
        for y in x + 1..n {
            for z in y + 1..n {
                edges.push([x, y, z]);
            }
        }
    }
    debug_assert_eq!(
        edges.len(),
        sizes.iter().product::<usize>()
            + t * sizes.iter().map(|&s| crate::hgraph::binom2(s)).sum::<usize>()
            + binom3(t)
    );
    Ok(Hypergraph3::from_sorted_triples(n, edges))
}

/// T_3(n,3) with an exact maximum K_{t,s,s}-free graph inside every part.
pub fn ktss_free_embedded(n: usize, t: usize, s: usize) -> Result<Hypergraph3> {
    Ok(ktss_free_embedded_with(n, t, s, false)?.0)
}

/// Largest part size [`ktss_free_embedded`] fills exactly.
pub const KTSS_EXACT_PART_BOUND: usize = 9;

pub fn ktss_free_embedded_with(n: usize, t: usize, s: usize, greedy: bool) -> Result<(Hypergraph3, FillMode)> {
    let pattern = k_tss(t, s)?;
    let sizes = balanced_parts(n, 3);
    let exact = sizes[0] <= KTSS_EXACT_PART_BOUND;
    if !exact && !greedy {
        return Err(Error::BoundExceeded {
            what: "part size for an exact K_{t,s,s}-free fill",
            value: sizes[0],
            limit: KTSS_EXACT_PART_BOUND,
        });
    }
    let mut cache: HashMap<usize, Hypergraph3> = HashMap::new();
    let mut inner = Vec::new();
    for &size in &sizes {
        if let std::collections::hash_map::Entry::Vacant(e) = cache.entry(size) {
            let g = if exact {
                solver::solve_ex(size, &pattern)?.witness
            } else {
                greedy_free(size, &pattern)
            };
            e.insert(g);
        }
        inner.push(cache[&size].clone());
    }
    let mode = if exact { FillMode::Exact } else { FillMode::Greedy };
    Ok((fill_parts(&complete_partite(&sizes), &sizes, &inner), mode))
}

/// Adds triples in lexicographic order while the graph stays free of `pattern`.
pub fn greedy_free(n: usize, pattern: &crate::patterns::Pattern) -> Hypergraph3 {
    let mut all = colex_triples(n);
    all.sort_unstable();
    let mut g = Hypergraph3::empty(n);
    for t in all {
        let cand = Hypergraph3::from_sorted_triples(n, g.edges().iter().copied().chain([t]).collect());
        if crate::embed::is_free(&cand, pattern) {
            g = cand;
        }
    }
    g
}
