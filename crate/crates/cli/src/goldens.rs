//! Recomputes every value in fixtures/goldens.txt with brute-force code that
//! shares nothing with the solvers, and checks the file against it.
//!
//! `cargo test -p hyperturan-cli goldens -- --nocapture` prints the
//! recomputed table.

use std::collections::{BTreeMap, BTreeSet};

use serde_json::{json, Value};

use crate::verify::{parse_goldens, GOLDENS};

type Edge = [usize; 3];

fn triples(n: usize) -> Vec<Edge> {
    let mut out = Vec::new();
    for a in 0..n {
        for b in a + 1..n {
            for c in b + 1..n {
                out.push([a, b, c]);
            }
        }
    }
    out
}

fn norm(mut e: Edge) -> Edge {
    e.sort_unstable();
    e
}

/// Every injective map of the pattern's vertices, checked edge by edge.
fn contains(host: &BTreeSet<Edge>, n: usize, pattern: &[Edge], k: usize) -> bool {
    fn rec(
        i: usize,
        k: usize,
        n: usize,
        map: &mut Vec<usize>,
        used: &mut Vec<bool>,
        host: &BTreeSet<Edge>,
        pat: &[Edge],
    ) -> bool {
        if i == k {
            return pat
                .iter()
                .all(|&[a, b, c]| host.contains(&norm([map[a], map[b], map[c]])));
        }
        for v in 0..n {
            if !used[v] {
                used[v] = true;
                map.push(v);
                if rec(i + 1, k, n, map, used, host, pat) {
                    return true;
                }
                map.pop();
                used[v] = false;
            }
        }
        false
    }
    k <= n && rec(0, k, n, &mut Vec::new(), &mut vec![false; n], host, pattern)
}

fn brute_ex(n: usize, pattern: &[Edge], k: usize) -> u64 {
    let all = triples(n);
    let mut best = 0;
    for mask in 0u64..1 << all.len() {
        let size = mask.count_ones() as u64;
        if size <= best {
            continue;
        }
        let host: BTreeSet<Edge> = (0..all.len()).filter(|i| mask >> i & 1 == 1).map(|i| all[i]).collect();
        if !contains(&host, n, pattern, k) {
            best = size;
        }
    }
    best
}

/// Plain depth-first search over triples in lexicographic order, pruned only
/// by the total remaining pair capacity.
struct Packer {
    all: Vec<Edge>,
    n: usize,
    cap: usize,
    load: Vec<usize>,
    free: usize,
    chosen: Vec<Edge>,
    best: usize,
    /// Collect every packing of exactly this size instead of maximising.
    collect: Option<usize>,
    found: Vec<Vec<Edge>>,
}

impl Packer {
    fn new(n: usize, cap: usize, collect: Option<usize>) -> Self {
        Packer {
            all: triples(n),
            n,
            cap,
            load: vec![0; n * n],
            free: cap * n * n.saturating_sub(1) / 2,
            chosen: Vec::new(),
            best: 0,
            collect,
            found: Vec::new(),
        }
    }

    fn pairs(&self, [a, b, c]: Edge) -> [usize; 3] {
        [a * self.n + b, a * self.n + c, b * self.n + c]
    }

    fn go(&mut self, i: usize) {
        let bound = self.chosen.len() + (self.free / 3).min(self.all.len() - i);
        match self.collect {
            Some(target) if bound < target => return,
            None if bound <= self.best && !self.chosen.is_empty() => return,
            _ => {}
        }
        if i == self.all.len() {
            self.best = self.best.max(self.chosen.len());
            if self.collect == Some(self.chosen.len()) {
                self.found.push(self.chosen.clone());
            }
            return;
        }
        let e = self.all[i];
        let ps = self.pairs(e);
        if ps.iter().all(|&p| self.load[p] < self.cap) {
            ps.iter().for_each(|&p| self.load[p] += 1);
            self.free -= 3;
            self.chosen.push(e);
            self.go(i + 1);
            self.chosen.pop();
            self.free += 3;
            ps.iter().for_each(|&p| self.load[p] -= 1);
        }
        self.go(i + 1);
    }
}

fn max_packing(n: usize, cap: usize) -> u64 {
    let mut p = Packer::new(n, cap, None);
    p.go(0);
    p.best as u64
}

/// Lexicographically least relabelled edge list over all n! permutations.
fn brute_canonical(n: usize, edges: &[Edge]) -> Vec<Edge> {
    fn perms(n: usize) -> Vec<Vec<usize>> {
        if n == 0 {
            return vec![vec![]];
        }
        let mut out = Vec::new();
        for p in perms(n - 1) {
            for pos in 0..=p.len() {
                let mut q = p.clone();
                q.insert(pos, n - 1);
                out.push(q);
            }
        }
        out
    }
    perms(n)
        .into_iter()
        .map(|p| {
            let mut es: Vec<Edge> = edges.iter().map(|&[a, b, c]| norm([p[a], p[b], p[c]])).collect();
            es.sort_unstable();
            es
        })
        .min()
        .unwrap()
}

fn packing_classes(n: usize, cap: usize) -> u64 {
    let opt = max_packing(n, cap) as usize;
    let mut p = Packer::new(n, cap, Some(opt));
    p.go(0);
    p.found
        .iter()
        .map(|es| brute_canonical(n, es))
        .collect::<BTreeSet<_>>()
        .len() as u64
}

/// Max edges of a 4-vertex graph with no 4-cycle.
fn zarankiewicz_4() -> u64 {
    let pairs: Vec<(usize, usize)> = (0..4).flat_map(|y| (0..y).map(move |x| (x, y))).collect();
    (0u32..1 << pairs.len())
        .filter(|&m| {
            let has = |a: usize, b: usize| {
                let key = if a < b { (a, b) } else { (b, a) };
                m >> pairs.iter().position(|&p| p == key).unwrap() & 1 == 1
            };
            // the three ways to split 4 vertices into opposite pairs of a 4-cycle
            ![(0, 1, 2, 3), (0, 2, 1, 3), (0, 3, 1, 2)]
                .iter()
                .any(|&(a, b, c, d)| has(a, c) && has(a, d) && has(b, c) && has(b, d))
        })
        .map(|m| m.count_ones() as u64)
        .max()
        .unwrap()
}

fn recompute() -> BTreeMap<String, Value> {
    let f5: (Vec<Edge>, usize) = (vec![[0, 1, 2], [0, 1, 3], [2, 3, 4]], 5);
    let sunflower2: (Vec<Edge>, usize) = (vec![[0, 1, 2], [0, 1, 3]], 4);
    let ktss11: (Vec<Edge>, usize) = (vec![[0, 1, 2]], 3);
    let mut out = BTreeMap::new();
    for (name, (pat, k)) in [("f5", &f5), ("sunflower2", &sunflower2), ("ktss11", &ktss11)] {
        for n in 3..=5 {
            out.insert(format!("ex/{name}/{n}"), json!(brute_ex(n, pat, *k)));
        }
    }
    for n in 3..=9 {
        out.insert(format!("design/2/{n}"), json!(max_packing(n, 1)));
    }
    for n in 4..=8 {
        out.insert(format!("design/3/{n}"), json!(max_packing(n, 2)));
    }
    for n in [6, 7] {
        out.insert(format!("classes/design2/{n}"), json!(packing_classes(n, 1)));
    }
    out.insert("bip/1_4_1_2".into(), json!(zarankiewicz_4()));
    out
}

#[test]
fn goldens_match_brute_force() {
    let recomputed = recompute();
    for (k, v) in &recomputed {
        println!("{k} = {v}");
    }
    let frozen = parse_goldens(GOLDENS).unwrap();
    assert_eq!(frozen, recomputed);
}
