//! Exact small-n extremal numbers.
//!
//! Turán numbers and their bipartite variant go through a hitting-set branch
//! and bound over the precomputed copies of the pattern. Pair-capacity
//! packings use a separate colex search, so the two engines can check each
//! other where the problems coincide.

mod design;
mod hitting;

use std::collections::{BTreeSet, HashSet};
use std::ops::ControlFlow;
use std::time::{Duration, Instant};

use crate::canon::{canonical_code, CanonicalCode, DEFAULT_CANON_BOUND};
use crate::embed::{for_each_embedding, is_free};
use crate::error::{invalid, Error, Result};
use crate::hgraph::{binom2, binom3, triple_rank, Hypergraph3, Triple};
use crate::patterns::Pattern;

use design::Packing;
use hitting::{Engine, Goal};

/// Size limits beyond which the exact engines refuse to run.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct SolverLimits {
    pub ex_max_n: usize,
    pub bip_max_a: usize,
    pub bip_max_b: usize,
    pub design_max_n: usize,
}

impl Default for SolverLimits {
    fn default() -> Self {
        SolverLimits {
            ex_max_n: 10,
            bip_max_a: 6,
            bip_max_b: 8,
            design_max_n: 12,
        }
    }
}

#[derive(Clone, Debug)]
pub struct SearchReport {
    pub optimum: u64,
    pub witness: Hypergraph3,
    pub num_extremal_classes: Option<usize>,
    pub nodes_explored: u64,
    pub time: Duration,
    /// Always true; the engines never fall back to heuristics.
    pub exact: bool,
}

impl SearchReport {
    fn new(witness: Hypergraph3, nodes: u64, start: Instant) -> Self {
        SearchReport {
            optimum: witness.edge_count() as u64,
            witness,
            num_extremal_classes: None,
            nodes_explored: nodes,
            time: start.elapsed(),
            exact: true,
        }
    }
}

#[derive(Clone, Debug)]
pub enum ExtremalMode {
    TuranPattern(Pattern),
    /// Packings with every pair in at most `t - 1` triples.
    Design(usize),
}

fn check_bound(what: &'static str, value: usize, limit: usize) -> Result<()> {
    if value > limit {
        return Err(Error::BoundExceeded { what, value, limit });
    }
    Ok(())
}

/// Edge-rank sets of every copy of `p` in K_n, deduplicated and sorted.
fn copy_sets(n: usize, p: &Pattern) -> Vec<Vec<u32>> {
    let host = Hypergraph3::complete(n);
    let mut seen: HashSet<Vec<u32>> = HashSet::new();
    for_each_embedding(&host, p, |map| {
        let mut set: Vec<u32> = p
            .graph()
            .edges()
            .iter()
            .map(|&[a, b, c]| {
                let mut t = [map[a], map[b], map[c]];
                t.sort_unstable();
                triple_rank(t) as u32
            })
            .collect();
        set.sort_unstable();
        seen.insert(set);
        ControlFlow::Continue(())
    });
    let mut sets: Vec<Vec<u32>> = seen.into_iter().collect();
    sets.sort_unstable();
    sets
}

/// Runs the hitting engine with item 0 forced in. Item 0 lies in a single
/// orbit of the symmetry group, so an optimum avoiding it exists only when
/// the optimum is empty.
fn hitting_search<F>(items: usize, sets: &[Vec<u32>], goal: Goal, on_solution: F) -> (Vec<u32>, u64)
where
    F: FnMut(&[u32]) -> ControlFlow<()>,
{
    if items == 0 {
        return (Vec::new(), 0);
    }
    let out = Engine::new(items, sets).run(&[0], goal, on_solution);
    (out.best.unwrap_or_default(), out.nodes)
}

/// ex_3(n, P) by exhaustive branch and bound.
pub fn solve_ex(n: usize, p: &Pattern) -> Result<SearchReport> {
    solve_ex_with(n, p, &SolverLimits::default())
}

pub fn solve_ex_with(n: usize, p: &Pattern, limits: &SolverLimits) -> Result<SearchReport> {
    check_bound("n for solve_ex", n, limits.ex_max_n)?;
    let start = Instant::now();
    if p.vertex_count() > n {
        return Ok(SearchReport::new(Hypergraph3::complete(n), 0, start));
    }
    let sets = copy_sets(n, p);
    let (best, nodes) = hitting_search(binom3(n), &sets, Goal::Maximize, |_| ControlFlow::Continue(()));
    let witness = Hypergraph3::from_ranks(n, best.iter().map(|&r| r as usize));
    Ok(SearchReport::new(witness, nodes, start))
}

struct BipInstance {
    m_a: usize,
    n_b: usize,
    pairs: Vec<[usize; 2]>,
    sets: Vec<Vec<u32>>,
}

impl BipInstance {
    fn new(m_a: usize, n_b: usize, t: usize, s: usize) -> Self {
        let mut pairs = Vec::new();
        for y in 0..n_b {
            for x in 0..y {
                pairs.push([x, y]);
            }
        }
        let pair_index = |x: usize, y: usize| {
            let (x, y) = if x < y { (x, y) } else { (y, x) };
            x + binom2(y)
        };
        let np = pairs.len();
        let mut sets = BTreeSet::new();
        let a_subsets = subsets(m_a, t);
        let b_subsets = subsets(n_b, s);
        for (i, s0) in b_subsets.iter().enumerate() {
            for s1 in &b_subsets[i + 1..] {
                if s0.iter().any(|x| s1.contains(x)) {
                    continue;
                }
                for ta in &a_subsets {
                    let mut set: Vec<u32> = Vec::new();
                    for &a in ta {
                        for &x in s0 {
                            for &y in s1 {
                                set.push((a * np + pair_index(x, y)) as u32);
                            }
                        }
                    }
                    set.sort_unstable();
                    sets.insert(set);
                }
            }
        }
        BipInstance {
            m_a,
            n_b,
            pairs,
            sets: sets.into_iter().collect(),
        }
    }

    fn items(&self) -> usize {
        self.m_a * self.pairs.len()
    }

    fn graph(&self, items: &[u32]) -> Hypergraph3 {
        let np = self.pairs.len();
        let edges = items.iter().map(|&i| {
            let i = i as usize;
            let [x, y] = self.pairs[i % np];
            [i / np, self.m_a + x, self.m_a + y]
        });
        Hypergraph3::new(self.m_a + self.n_b, edges).expect("bipartite items are valid triples")
    }
}

/// All k-subsets of 0..n in lexicographic order.
fn subsets(n: usize, k: usize) -> Vec<Vec<usize>> {
    fn rec(start: usize, n: usize, k: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if cur.len() == k {
            out.push(cur.clone());
            return;
        }
        for v in start..n {
            cur.push(v);
            rec(v + 1, n, k, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    if k <= n {
        rec(0, n, k, &mut Vec::new(), &mut out);
    }
    out
}

/// Maximum number of triples with one vertex in A and two in B such that no
/// K_{s,s} in B lies in the links of t vertices of A. The witness uses
/// A = 0..mA and B = mA..mA+nB.
pub fn solve_ex_bip(m_a: usize, n_b: usize, t: usize, s: usize) -> Result<SearchReport> {
    solve_ex_bip_with(m_a, n_b, t, s, &SolverLimits::default())
}

pub fn solve_ex_bip_with(m_a: usize, n_b: usize, t: usize, s: usize, limits: &SolverLimits) -> Result<SearchReport> {
    check_bound("A size for solve_ex_bip", m_a, limits.bip_max_a)?;
    check_bound("B size for solve_ex_bip", n_b, limits.bip_max_b)?;
    if t == 0 || s == 0 {
        return Err(invalid(format!("needs t, s >= 1, got t={t}, s={s}")));
    }
    let start = Instant::now();
    let inst = BipInstance::new(m_a, n_b, t, s);
    let (best, nodes) = hitting_search(inst.items(), &inst.sets, Goal::Maximize, |_| ControlFlow::Continue(()));
    Ok(SearchReport::new(inst.graph(&best), nodes, start))
}

/// Largest 3-graph on n vertices with every pair in at most t-1 triples.
pub fn solve_max_design(n: usize, t: usize) -> Result<SearchReport> {
    if t < 2 {
        return Err(invalid(format!("needs t >= 2, got {t}")));
    }
    solve_design_capacity(n, t - 1, &SolverLimits::default())
}

/// Largest 3-graph on n vertices with every pair degree at most `cap`.
pub fn solve_design_capacity(n: usize, cap: usize, limits: &SolverLimits) -> Result<SearchReport> {
    check_bound("n for solve_max_design", n, limits.design_max_n)?;
    let start = Instant::now();
    let mut search = Packing::new(n, cap);
    let best = search.run(Goal::Maximize, |_| ControlFlow::Continue(()));
    let witness = Hypergraph3::new(n, best).expect("packing triples are valid");
    Ok(SearchReport::new(witness, search.nodes(), start))
}

/// Optimum together with the number of isomorphism classes of optimal
/// hypergraphs.
pub fn enumerate_extremal(n: usize, mode: &ExtremalMode) -> Result<SearchReport> {
    enumerate_extremal_with(n, mode, &SolverLimits::default())
}

pub fn enumerate_extremal_with(n: usize, mode: &ExtremalMode, limits: &SolverLimits) -> Result<SearchReport> {
    check_bound("n for canonical labelling", n, DEFAULT_CANON_BOUND)?;
    let start = Instant::now();
    let mut classes: HashSet<CanonicalCode> = HashSet::new();
    let mut failure = None;
    let mut record = |g: Hypergraph3| match canonical_code(&g) {
        Ok(code) => {
            classes.insert(code);
            ControlFlow::Continue(())
        }
        Err(e) => {
            failure = Some(e);
            ControlFlow::Break(())
        }
    };
    let (witness, nodes) = match mode {
        ExtremalMode::Design(t) => {
            if *t < 2 {
                return Err(invalid(format!("needs t >= 2, got {t}")));
            }
            check_bound("n for solve_max_design", n, limits.design_max_n)?;
            let opt = solve_design_capacity(n, t - 1, limits)?;
            let mut search = Packing::new(n, t - 1);
            search.run(Goal::Enumerate(opt.optimum as usize), |ts| {
                record(Hypergraph3::new(n, ts.iter().copied()).expect("valid triples"))
            });
            (opt.witness, opt.nodes_explored + search.nodes())
        }
        ExtremalMode::TuranPattern(p) => {
            let opt = solve_ex_with(n, p, limits)?;
            if p.vertex_count() > n || opt.optimum == 0 {
                // the complete or the empty graph is the only optimum
                let _ = record(opt.witness.clone());
                (opt.witness, opt.nodes_explored)
            } else {
                let sets = copy_sets(n, p);
                let (_, nodes) = hitting_search(binom3(n), &sets, Goal::Enumerate(opt.optimum as usize), |items| {
                    record(Hypergraph3::from_ranks(n, items.iter().map(|&r| r as usize)))
                });
                (opt.witness, opt.nodes_explored + nodes)
            }
        }
    };
    if let Some(e) = failure {
        return Err(e);
    }
    let mut report = SearchReport::new(witness, nodes, start);
    report.num_extremal_classes = Some(classes.len());
    Ok(report)
}

/// Non-edges of `h` whose addition keeps it `p`-free, in lexicographic order.
pub fn saturation_check(h: &Hypergraph3, p: &Pattern) -> Vec<Triple> {
    h.non_edges()
        .into_iter()
        .filter(|&e| is_free(&h.with_edge(e).expect("non-edge is a valid triple"), p))
        .collect()
}
