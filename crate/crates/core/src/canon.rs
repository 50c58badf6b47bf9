//! Canonical forms for small 3-graphs.
//!
//! Vertices are first partitioned by iterated refinement: a vertex's new
//! colour is its old colour together with the multiset of colour pairs it
//! sees across its edges (degree and pair-degree information in one pass).
//! The residual cells are then resolved by individualising vertices one at a
//! time, and the lexicographically least relabelled edge list over all leaves
//! is the code. Automorphisms discovered between equal leaves prune sibling
//! branches that lie in a common orbit.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::hgraph::{sort3, Hypergraph3, Vertex};

/// Largest vertex count accepted by [`canonical_code`].
pub const DEFAULT_CANON_BOUND: usize = 14;

/// Isomorphism-invariant byte string: `n` followed by the relabelled edges.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
pub struct CanonicalCode(pub Vec<u8>);

pub fn canonical_code(h: &Hypergraph3) -> Result<CanonicalCode> {
    canonical_code_with_bound(h, DEFAULT_CANON_BOUND)
}

pub fn canonical_code_with_bound(h: &Hypergraph3, bound: usize) -> Result<CanonicalCode> {
    Ok(canonical_form(h, bound)?.0)
}

/// Canonical code plus one labeling `v -> label[v]` that realises it.
pub fn canonical_form(h: &Hypergraph3, bound: usize) -> Result<(CanonicalCode, Vec<Vertex>)> {
    let limit = bound.min(u8::MAX as usize);
    if h.n() > limit {
        return Err(Error::BoundExceeded {
            what: "canonical form vertex count",
            value: h.n(),
            limit,
        });
    }
    let mut search = Canon::new(h);
    let colors = vec![0; h.n()];
    let mut prefix = Vec::new();
    search.descend(colors, &mut prefix);
    let (edges, perm) = search.best.expect("search visits at least one leaf");
    let mut bytes = Vec::with_capacity(1 + 3 * edges.len());
    bytes.push(h.n() as u8);
    for e in edges {
        bytes.extend_from_slice(&e);
    }
    Ok((CanonicalCode(bytes), perm))
}

pub fn is_isomorphic(a: &Hypergraph3, b: &Hypergraph3) -> Result<bool> {
    if a.n() != b.n() || a.edge_count() != b.edge_count() {
        // still enforce the bound so the error contract is uniform
        for h in [a, b] {
            if h.n() > DEFAULT_CANON_BOUND {
                return Err(Error::BoundExceeded {
                    what: "canonical form vertex count",
                    value: h.n(),
                    limit: DEFAULT_CANON_BOUND,
                });
            }
        }
        return Ok(false);
    }
    Ok(canonical_code(a)? == canonical_code(b)?)
}

type Leaf = (Vec<[u8; 3]>, Vec<Vertex>);

struct Canon<'a> {
    h: &'a Hypergraph3,
    incident: Vec<Vec<[Vertex; 2]>>,
    best: Option<Leaf>,
    automorphisms: Vec<Vec<Vertex>>,
}

impl<'a> Canon<'a> {
    fn new(h: &'a Hypergraph3) -> Self {
        let mut incident = vec![Vec::new(); h.n()];
        for &[a, b, c] in h.edges() {
            incident[a].push([b, c]);
            incident[b].push([a, c]);
            incident[c].push([a, b]);
        }
        Canon {
            h,
            incident,
            best: None,
            automorphisms: Vec::new(),
        }
    }

    fn refine(&self, colors: &mut [usize]) {
        let n = colors.len();
        let mut classes = count_classes(colors);
        loop {
            let sigs: Vec<(usize, Vec<(usize, usize)>)> = (0..n)
                .map(|v| {
                    let mut seen: Vec<(usize, usize)> = self.incident[v]
                        .iter()
                        .map(|&[x, y]| {
                            let (cx, cy) = (colors[x], colors[y]);
                            (cx.min(cy), cx.max(cy))
                        })
                        .collect();
                    seen.sort_unstable();
                    (colors[v], seen)
                })
                .collect();
            let mut distinct = sigs.clone();
            distinct.sort();
            distinct.dedup();
            for v in 0..n {
                colors[v] = distinct.binary_search(&sigs[v]).unwrap();
            }
            if distinct.len() == classes {
                return;
            }
            classes = distinct.len();
        }
    }

    fn descend(&mut self, mut colors: Vec<usize>, prefix: &mut Vec<Vertex>) {
        self.refine(&mut colors);
        let n = colors.len();
        let mut sizes = vec![0usize; n.max(1)];
        for &c in &colors {
            sizes[c] += 1;
        }
        let Some(target) = (0..n).find(|&c| sizes[c] > 1) else {
            self.leaf(&colors);
            return;
        };
        let cell: Vec<Vertex> = (0..n).filter(|&v| colors[v] == target).collect();
        let mut tried: Vec<Vertex> = Vec::new();
        for &v in &cell {
            if !tried.is_empty() && self.same_orbit_as_any(v, &tried, prefix) {
                continue;
            }
            tried.push(v);
            // individualise v: it keeps the cell's position, the rest move up by one
            let next: Vec<usize> = (0..n)
                .map(|u| 2 * colors[u] + usize::from(colors[u] == target && u != v))
                .collect();
            prefix.push(v);
            self.descend(next, prefix);
            prefix.pop();
        }
    }

    /// Whether some automorphism fixing `prefix` pointwise links `v` to a
    /// vertex already explored at this node.
    fn same_orbit_as_any(&self, v: Vertex, tried: &[Vertex], prefix: &[Vertex]) -> bool {
        let n = self.h.n();
        let gens: Vec<&Vec<Vertex>> = self
            .automorphisms
            .iter()
            .filter(|g| prefix.iter().all(|&p| g[p] == p))
            .collect();
        if gens.is_empty() {
            return false;
        }
        let mut parent: Vec<usize> = (0..n).collect();
        fn find(p: &mut [usize], mut x: usize) -> usize {
            while p[x] != x {
                p[x] = p[p[x]];
                x = p[x];
            }
            x
        }
        for g in gens {
            for (x, &gx) in g.iter().enumerate() {
                let (a, b) = (find(&mut parent, x), find(&mut parent, gx));
                if a != b {
                    parent[a] = b;
                }
            }
        }
        let root = find(&mut parent, v);
        tried.iter().any(|&u| find(&mut parent, u) == root)
    }

    fn leaf(&mut self, colors: &[usize]) {
        let perm: Vec<Vertex> = colors.to_vec();
        let mut edges: Vec<[u8; 3]> = self
            .h
            .edges()
            .iter()
            .map(|e| {
                let t = sort3([perm[e[0]], perm[e[1]], perm[e[2]]]);
                [t[0] as u8, t[1] as u8, t[2] as u8]
            })
            .collect();
        edges.sort_unstable();
        match &self.best {
            None => self.best = Some((edges, perm)),
            Some((best_edges, best_perm)) => match edges.cmp(best_edges) {
                std::cmp::Ordering::Less => self.best = Some((edges, perm)),
                std::cmp::Ordering::Equal => {
                    // best_perm^{-1} . perm is an automorphism
                    let mut inv = vec![0; perm.len()];
                    for (v, &p) in best_perm.iter().enumerate() {
                        inv[p] = v;
                    }
                    let auto: Vec<Vertex> = perm.iter().map(|&p| inv[p]).collect();
                    if auto.iter().enumerate().any(|(i, &x)| i != x) {
                        self.automorphisms.push(auto);
                    }
                }
                std::cmp::Ordering::Greater => {}
            },
        }
    }
}

fn count_classes(colors: &[usize]) -> usize {
    let mut c = colors.to_vec();
    c.sort_unstable();
    c.dedup();
    c.len()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::hgraph::binom3;
    use proptest::prelude::*;
    use rand::seq::SliceRandom;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn f5() -> Hypergraph3 {
        Hypergraph3::new(5, [[0, 1, 2], [0, 1, 3], [2, 3, 4]]).unwrap()
    }

    /// Reference canonical form: least relabelled edge list over all n! permutations.
    fn brute_code(h: &Hypergraph3) -> Vec<[usize; 3]> {
        let n = h.n();
        let mut perm: Vec<usize> = (0..n).collect();
        let mut best: Option<Vec<[usize; 3]>> = None;
        permute(&mut perm, 0, &mut |p| {
            let mut e: Vec<[usize; 3]> = h.edges().iter().map(|t| sort3([p[t[0]], p[t[1]], p[t[2]]])).collect();
            e.sort_unstable();
            if best.as_ref().is_none_or(|b| e < *b) {
                best = Some(e);
            }
        });
        best.unwrap()
    }

    fn permute(p: &mut Vec<usize>, k: usize, f: &mut impl FnMut(&[usize])) {
        if k == p.len() {
            f(p);
            return;
        }
        for i in k..p.len() {
            p.swap(k, i);
            permute(p, k + 1, f);
            p.swap(k, i);
        }
    }

    fn tripartite(sizes: [usize; 3]) -> Hypergraph3 {
        let mut edges = Vec::new();
        let off = [0, sizes[0], sizes[0] + sizes[1]];
        for a in 0..sizes[0] {
            for b in 0..sizes[1] {
                for c in 0..sizes[2] {
                    edges.push([off[0] + a, off[1] + b, off[2] + c]);
                }
            }
        }
        Hypergraph3::new(sizes.iter().sum(), edges).unwrap()
    }

    #[test]
    fn relabelled_f5_has_equal_code() {
        let h = f5();
        let g = h.relabel(&[4, 2, 0, 3, 1]).unwrap();
        assert_eq!(canonical_code(&h).unwrap(), canonical_code(&g).unwrap());
        assert!(is_isomorphic(&h, &g).unwrap());
    }

    #[test]
    fn distinct_shapes_get_distinct_codes() {
        // F5 against another 3-edge graph on 5 vertices: a 3-sunflower
        let sun = Hypergraph3::new(5, [[0, 1, 2], [0, 1, 3], [0, 1, 4]]).unwrap();
        assert_ne!(canonical_code(&f5()).unwrap(), canonical_code(&sun).unwrap());
        let minus = Hypergraph3::new(5, [[0, 1, 2], [0, 1, 3]]).unwrap();
        assert!(!is_isomorphic(&f5(), &minus).unwrap());
    }

    #[test]
    fn turan_parts_permuted() {
        let t = tripartite([2, 2, 2]);
        let g = t.relabel(&[4, 5, 0, 1, 2, 3]).unwrap();
        assert_eq!(canonical_code(&t).unwrap(), canonical_code(&g).unwrap());
    }

    #[test]
    fn vertex_transitive_graph_is_fast_enough() {
        let t = tripartite([4, 4, 4]);
        let g = t.relabel(&[11, 3, 7, 0, 5, 9, 1, 2, 10, 4, 6, 8]).unwrap();
        assert_eq!(canonical_code(&t).unwrap(), canonical_code(&g).unwrap());
        let k = Hypergraph3::complete(14);
        assert!(canonical_code(&k).is_ok());
    }

    #[test]
    fn bound_is_enforced() {
        let h = Hypergraph3::empty(15);
        assert!(matches!(canonical_code(&h), Err(Error::BoundExceeded { .. })));
        assert!(canonical_code_with_bound(&h, 20).is_ok());
    }

    #[test]
    fn codes_agree_with_brute_force_classes() {
        // exhaustive over all 3-graphs on 5 vertices: code equality <=> brute code equality
        let n = 5;
        let m = binom3(n);
        let mut pairs = Vec::new();
        for bits in 0u32..(1 << m) {
            let h = Hypergraph3::from_ranks(n, (0..m).filter(|i| bits >> i & 1 == 1));
            pairs.push((canonical_code(&h).unwrap(), brute_code(&h)));
        }
        let mut a: Vec<_> = pairs.iter().map(|p| p.0.clone()).collect();
        a.sort();
        a.dedup();
        let mut b: Vec<_> = pairs.iter().map(|p| p.1.clone()).collect();
        b.sort();
        b.dedup();
        // 34 isomorphism classes of 3-graphs on 5 vertices
        assert_eq!(a.len(), 34);
        assert_eq!(b.len(), 34);
        // code -> brute class is a function between two 34-element sets, hence a bijection
        let mut map = std::collections::HashMap::new();
        for (code, brute) in &pairs {
            assert_eq!(map.entry(code.clone()).or_insert(brute), &brute);
        }
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(64))]
        #[test]
        fn code_invariant_under_permutation(n in 3usize..=10, seed in any::<u64>(), density in 0.05f64..0.6) {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let ranks: Vec<usize> = (0..binom3(n)).filter(|_| rand::Rng::gen_bool(&mut rng, density)).collect();
            let h = Hypergraph3::from_ranks(n, ranks);
            let mut perm: Vec<usize> = (0..n).collect();
            perm.shuffle(&mut rng);
            let g = h.relabel(&perm).unwrap();
            prop_assert_eq!(canonical_code(&h).unwrap(), canonical_code(&g).unwrap());
        }
    }
}
