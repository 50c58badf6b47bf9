//! Non-induced subhypergraph containment.
//!
//! The matcher places pattern vertices one at a time. Pattern vertices are
//! ordered so that each one closes as many pattern edges as possible with the
//! vertices already placed (ties by degree, then pair-degree sum). Candidates
//! for the next vertex come from the host's pair neighbourhood of an already
//! mapped pattern pair when one exists, otherwise from the host neighbourhood
//! of a mapped vertex, and are filtered by degree before every closed pattern
//! edge is checked against the host.

use std::collections::HashSet;
use std::ops::ControlFlow;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::hgraph::{Hypergraph3, Vertex};

/// Default number of distinct copies [`find_disjoint_copies`] may enumerate.
pub const DEFAULT_COPY_CAP: usize = 200_000;

/// Injective map pattern vertex -> host vertex.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize)]
pub struct Embedding {
    pub map: Vec<Vertex>,
}

impl Embedding {
    /// Re-checks injectivity and every pattern edge against the host.
    pub fn is_valid(&self, host: &Hypergraph3, pattern: &Hypergraph3) -> bool {
        if self.map.len() != pattern.n() {
            return false;
        }
        let mut seen = HashSet::new();
        if !self.map.iter().all(|&x| x < host.n() && seen.insert(x)) {
            return false;
        }
        pattern
            .edges()
            .iter()
            .all(|&[a, b, c]| host.contains(self.map[a], self.map[b], self.map[c]))
    }

    /// Host vertex set covered by the image, ascending.
    pub fn image(&self) -> Vec<Vertex> {
        let mut v = self.map.clone();
        v.sort_unstable();
        v
    }

    /// One `p_i -> h_j` line per pattern vertex.
    pub fn to_map_text(&self) -> String {
        self.map
            .iter()
            .enumerate()
            .map(|(p, h)| format!("p_{p} -> h_{h}\n"))
            .collect()
    }
}

struct Step {
    /// pattern vertex placed at this depth
    vertex: Vertex,
    /// positions (earlier depths) of pattern pairs closing an edge with `vertex`
    closing: Vec<(usize, usize)>,
    /// an earlier depth sharing an edge with `vertex`, used when nothing closes
    neighbor: Option<usize>,
    degree: usize,
}

struct Matcher<'a> {
    host: &'a Hypergraph3,
    steps: Vec<Step>,
    host_degree: Vec<usize>,
    pair_nbrs: Vec<Vec<Vertex>>,
    nbrs: Vec<Vec<Vertex>>,
}

impl<'a> Matcher<'a> {
    fn new(host: &'a Hypergraph3, pattern: &Hypergraph3) -> Self {
        let n = host.n();
        let mut pair_nbrs = vec![Vec::new(); n * n];
        let mut nbr_sets = vec![std::collections::BTreeSet::new(); n];
        for &[a, b, c] in host.edges() {
            for (x, y, z) in [(a, b, c), (a, c, b), (b, c, a)] {
                pair_nbrs[x * n + y].push(z);
                pair_nbrs[y * n + x].push(z);
            }
            nbr_sets[a].extend([b, c]);
            nbr_sets[b].extend([a, c]);
            nbr_sets[c].extend([a, b]);
        }
        for l in &mut pair_nbrs {
            l.sort_unstable();
        }
        Matcher {
            host,
            steps: plan(pattern),
            host_degree: host.degrees(),
            pair_nbrs,
            nbrs: nbr_sets.into_iter().map(|s| s.into_iter().collect()).collect(),
        }
    }

    fn run<F>(&self, f: &mut F) -> ControlFlow<()>
    where
        F: FnMut(&[Vertex]) -> ControlFlow<()>,
    {
        let k = self.steps.len();
        if k > self.host.n() {
            return ControlFlow::Continue(());
        }
        let mut placed = vec![0; k];
        let mut used = vec![false; self.host.n()];
        let mut map = vec![0; k];
        self.extend(0, &mut placed, &mut used, &mut map, f)
    }

    fn extend<F>(
        &self,
        depth: usize,
        placed: &mut [Vertex],
        used: &mut [bool],
        map: &mut [Vertex],
        f: &mut F,
    ) -> ControlFlow<()>
    where
        F: FnMut(&[Vertex]) -> ControlFlow<()>,
    {
        if depth == self.steps.len() {
            return f(map);
        }
        let step = &self.steps[depth];
        let n = self.host.n();
        let all: Vec<Vertex>;
        let candidates: &[Vertex] = if let Some(&(i, j)) = step.closing.first() {
            &self.pair_nbrs[placed[i] * n + placed[j]]
        } else if let Some(i) = step.neighbor {
            &self.nbrs[placed[i]]
        } else {
            all = (0..n).collect();
            &all
        };
        for &x in candidates {
            if used[x] || self.host_degree[x] < step.degree {
                continue;
            }
            if !step
                .closing
                .iter()
                .all(|&(i, j)| self.host.contains(placed[i], placed[j], x))
            {
                continue;
            }
            placed[depth] = x;
            used[x] = true;
            map[step.vertex] = x;
            let r = self.extend(depth + 1, placed, used, map, f);
            used[x] = false;
            r?;
        }
        ControlFlow::Continue(())
    }
}

fn plan(pattern: &Hypergraph3) -> Vec<Step> {
    let k = pattern.n();
    let deg = pattern.degrees();
    let mut pair_sum = vec![0usize; k];
    for &[a, b, c] in pattern.edges() {
        // each edge adds 2 to the pair-degree sum of its vertices
        for v in [a, b, c] {
            pair_sum[v] += 2;
        }
    }
    let mut pos: Vec<Option<usize>> = vec![None; k];
    let mut steps: Vec<Step> = Vec::with_capacity(k);
    for depth in 0..k {
        let score = |v: Vertex| {
            let mut closes = 0;
            let mut touches = 0;
            for e in pattern.edges().iter().filter(|e| e.contains(&v)) {
                let others = e.iter().filter(|&&u| u != v && pos[u].is_some()).count();
                if others == 2 {
                    closes += 1;
                }
                touches += others;
            }
            (closes, touches, deg[v], pair_sum[v])
        };
        // first maximum in vertex order keeps the plan deterministic
        let mut best: Option<(Vertex, (usize, usize, usize, usize))> = None;
        for v in (0..k).filter(|&v| pos[v].is_none()) {
            let s = score(v);
            if best.is_none_or(|(_, b)| s > b) {
                best = Some((v, s));
            }
        }
        let v = best.expect("an unplaced vertex remains").0;
        let mut closing = Vec::new();
        let mut neighbor = None;
        for e in pattern.edges().iter().filter(|e| e.contains(&v)) {
            let others: Vec<usize> = e.iter().filter(|&&u| u != v).filter_map(|&u| pos[u]).collect();
            if others.len() == 2 {
                closing.push((others[0], others[1]));
            } else if let Some(&p) = others.first() {
                neighbor.get_or_insert(p);
            }
        }
        pos[v] = Some(depth);
        steps.push(Step {
            vertex: v,
            closing,
            neighbor,
            degree: deg[v],
        });
    }
    steps
}

/// Calls `f` on every embedding (as a pattern-indexed map) in a fixed order
/// until `f` breaks.
pub fn for_each_embedding<F>(host: &Hypergraph3, pattern: impl AsRef<Hypergraph3>, mut f: F)
where
    F: FnMut(&[Vertex]) -> ControlFlow<()>,
{
    let pattern = pattern.as_ref();
    let _ = Matcher::new(host, pattern).run(&mut f);
}

/// First embedding of `pattern` into `host` in the matcher's search order.
pub fn find_embedding(host: &Hypergraph3, pattern: impl AsRef<Hypergraph3>) -> Option<Embedding> {
    let mut found = None;
    for_each_embedding(host, pattern, |m| {
        found = Some(Embedding { map: m.to_vec() });
        ControlFlow::Break(())
    });
    found
}

pub fn is_free(host: &Hypergraph3, pattern: impl AsRef<Hypergraph3>) -> bool {
    find_embedding(host, pattern).is_none()
}

/// Number of embeddings (distinct maps, automorphisms not quotiented),
/// truncated at `cap`.
pub fn count_embeddings(host: &Hypergraph3, pattern: impl AsRef<Hypergraph3>, cap: u64) -> u64 {
    let mut count = 0u64;
    if cap == 0 {
        return 0;
    }
    for_each_embedding(host, pattern, |_| {
        count += 1;
        if count >= cap {
            ControlFlow::Break(())
        } else {
            ControlFlow::Continue(())
        }
    });
    count
}

/// Copies of `pattern` in `host`, one embedding per distinct host vertex set,
/// in discovery order. `Err(Inconclusive)` when more than `cap` exist.
pub fn enumerate_copies(host: &Hypergraph3, pattern: impl AsRef<Hypergraph3>, cap: usize) -> Result<Vec<Embedding>> {
    let mut seen: HashSet<Vec<Vertex>> = HashSet::new();
    let mut copies = Vec::new();
    let mut overflow = false;
    for_each_embedding(host, pattern, |m| {
        let mut img = m.to_vec();
        img.sort_unstable();
        if seen.insert(img) {
            if copies.len() == cap {
                overflow = true;
                return ControlFlow::Break(());
            }
            copies.push(Embedding { map: m.to_vec() });
        }
        ControlFlow::Continue(())
    });
    if overflow {
        Err(Error::Inconclusive { cap })
    } else {
        Ok(copies)
    }
}

/// Searches for `k` pairwise vertex-disjoint copies of `pattern`.
///
/// Copies are enumerated first (at most `cap` distinct vertex sets) and then
/// packed exactly by backtracking. `Ok(None)` is a proof of absence;
/// `Err(Inconclusive)` means the copy list was truncated.
pub fn find_disjoint_copies(
    host: &Hypergraph3,
    pattern: impl AsRef<Hypergraph3>,
    k: usize,
    cap: usize,
) -> Result<Option<Vec<Embedding>>> {
    if k == 0 {
        return Err(crate::error::invalid("k must be at least 1"));
    }
    let copies = enumerate_copies(host, pattern, cap)?;
    let words = host.n().div_ceil(64).max(1);
    let masks: Vec<Vec<u64>> = copies
        .iter()
        .map(|c| {
            let mut m = vec![0u64; words];
            for &x in &c.map {
                m[x / 64] |= 1 << (x % 64);
            }
            m
        })
        .collect();
    let mut chosen = Vec::with_capacity(k);
    let mut used = vec![0u64; words];
    if pack(&masks, 0, k, &mut used, &mut chosen) {
        Ok(Some(chosen.into_iter().map(|i| copies[i].clone()).collect()))
    } else {
        Ok(None)
    }
}

fn pack(masks: &[Vec<u64>], from: usize, k: usize, used: &mut [u64], chosen: &mut Vec<usize>) -> bool {
    if chosen.len() == k {
        return true;
    }
    let need = k - chosen.len();
    for i in from..masks.len() {
        if masks.len() - i < need {
            break;
        }
        if masks[i].iter().zip(used.iter()).any(|(a, b)| a & b != 0) {
            continue;
        }
        for (u, m) in used.iter_mut().zip(&masks[i]) {
            *u |= m;
        }
        chosen.push(i);
        if pack(masks, i + 1, k, used, chosen) {
            return true;
        }
        chosen.pop();
        for (u, m) in used.iter_mut().zip(&masks[i]) {
            *u &= !m;
        }
    }
    false
}


#[cfg(test)]
mod tests {
    use super::oracle::brute_embeddings;
    use super::*;
    use crate::constructs::{g_construction, turan_partite, turan_plus};
    use crate::hgraph::binom3;
    use crate::patterns::{disjoint_union, f5, f5_blow_vertex, f5_s, k_tss, sunflower, Pattern};
    use proptest::prelude::*;
    use rand::seq::SliceRandom;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn single_edge() -> Pattern {
        k_tss(1, 1).unwrap()
    }

    fn random_graph(n: usize, p: f64, rng: &mut ChaCha8Rng) -> Hypergraph3 {
        let ranks: Vec<usize> = (0..binom3(n)).filter(|_| rng.gen_bool(p)).collect();
        Hypergraph3::from_ranks(n, ranks)
    }

    #[test]
    fn turan_graph_is_f5_free() {
        let t = turan_partite(9, 3).unwrap();
        assert!(find_embedding(&t, f5()).is_none());
    }

    #[test]
    fn f5_finds_itself() {
        let e = find_embedding(f5().graph(), f5()).unwrap();
        assert_eq!(e.map, vec![0, 1, 2, 3, 4]);
    }

    #[test]
    fn extra_edge_in_a_part_creates_f5() {
        let t = turan_partite(9, 3).unwrap();
        // parts [0,3), [3,6), [6,9)
        let h = t.with_edge([0, 1, 3]).unwrap();
        let e = find_embedding(&h, f5()).unwrap();
        assert!(e.is_valid(&h, f5().graph()));
        assert!(!brute_embeddings(&h, f5().graph()).is_empty());
    }

    #[test]
    fn is_free_examples() {
        let h = turan_plus(12, 2).unwrap();
        assert!(is_free(&h, f5_blow_vertex(3, 2).unwrap()));
        assert!(!is_free(&Hypergraph3::complete(5), f5()));
        assert!(is_free(&Hypergraph3::complete(4), f5()));
    }

    #[test]
    fn count_examples() {
        // F5 has four automorphisms: f1<->f2 and f3<->f4 independently
        assert_eq!(count_embeddings(f5().graph(), f5(), u64::MAX), 4);
        assert_eq!(brute_embeddings(f5().graph(), f5().graph()).len(), 4);
        assert_eq!(count_embeddings(&Hypergraph3::empty(6), f5(), 10), 0);
        let k222 = k_tss(2, 2).unwrap();
        assert_eq!(count_embeddings(k222.graph(), single_edge(), u64::MAX), 48);
        assert_eq!(brute_embeddings(k222.graph(), single_edge().graph()).len(), 48);
        assert_eq!(count_embeddings(k222.graph(), single_edge(), 5), 5);
    }

    #[test]
    fn disjoint_copies_examples() {
        let g = g_construction(1, 2, 15).unwrap();
        let p = f5_s(2).unwrap();
        let one = find_disjoint_copies(&g, &p, 1, DEFAULT_COPY_CAP).unwrap().unwrap();
        assert!(one[0].is_valid(&g, p.graph()));
        assert_eq!(find_disjoint_copies(&g, &p, 2, DEFAULT_COPY_CAP), Ok(None));

        let u = disjoint_union(&f5(), 2).unwrap();
        let two = find_disjoint_copies(u.graph(), f5(), 2, DEFAULT_COPY_CAP)
            .unwrap()
            .unwrap();
        assert_eq!(two.len(), 2);
        let mut all: Vec<usize> = two.iter().flat_map(|e| e.map.clone()).collect();
        all.sort_unstable();
        all.dedup();
        assert_eq!(all.len(), 10);
    }

    #[test]
    fn disjoint_copies_reports_cap() {
        let k = Hypergraph3::complete(8);
        assert_eq!(
            find_disjoint_copies(&k, f5(), 2, 10),
            Err(Error::Inconclusive { cap: 10 })
        );
    }

    #[test]
    fn fewer_host_vertices_than_pattern() {
        assert!(is_free(&Hypergraph3::complete(6), f5_s(2).unwrap()));
    }

    #[test]
    fn matches_brute_force_on_random_instances() {
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        let patterns = [
            f5(),
            sunflower(2).unwrap(),
            sunflower(3).unwrap(),
            k_tss(1, 2).unwrap(),
            f5_blow_vertex(5, 1).unwrap(),
            f5_blow_vertex(3, 2).unwrap(),
            single_edge(),
        ];
        for _ in 0..60 {
            let n = rng.gen_range(3..=7);
            let h = random_graph(n, rng.gen_range(0.1..0.9), &mut rng);
            for p in &patterns {
                let brute = brute_embeddings(&h, p.graph());
                assert_eq!(is_free(&h, p), brute.is_empty());
                assert_eq!(count_embeddings(&h, p, u64::MAX), brute.len() as u64);
                if let Some(e) = find_embedding(&h, p) {
                    assert!(e.is_valid(&h, p.graph()));
                }
            }
        }
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(48))]

        #[test]
        fn freeness_consistent_and_monotone(seed in any::<u64>()) {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let n = rng.gen_range(5..=9);
            let h = random_graph(n, 0.35, &mut rng);
            let p = f5();
            let free = is_free(&h, &p);
            prop_assert_eq!(free, count_embeddings(&h, &p, 1) == 0);
            if free {
                let sub: Vec<_> = h.edges().iter().copied().filter(|_| rng.gen_bool(0.6)).collect();
                let sub = Hypergraph3::new(n, sub).unwrap();
                prop_assert!(is_free(&sub, &p));
            }
        }

        #[test]
        fn freeness_invariant_under_relabeling(seed in any::<u64>()) {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let n = rng.gen_range(5..=10);
            let h = random_graph(n, 0.3, &mut rng);
            let mut perm: Vec<usize> = (0..n).collect();
            perm.shuffle(&mut rng);
            let g = h.relabel(&perm).unwrap();
            for p in [f5(), sunflower(3).unwrap(), f5_blow_vertex(3, 2).unwrap()] {
                prop_assert_eq!(is_free(&h, &p), is_free(&g, &p));
                prop_assert_eq!(count_embeddings(&h, &p, u64::MAX), count_embeddings(&g, &p, u64::MAX));
            }
        }
    }
}
