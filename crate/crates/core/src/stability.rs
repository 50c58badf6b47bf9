//! Near-tripartitions of a host and the quantities measured against them.

use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;

use crate::constructs::balanced_parts;
use crate::error::{invalid, Result};
use crate::hgraph::{Hypergraph3, Vertex};

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
pub enum Part {
    A,
    B,
    C,
}

impl Part {
    pub const ALL: [Part; 3] = [Part::A, Part::B, Part::C];

    fn index(self) -> usize {
        self as usize
    }
}

/// A vertex 3-colouring with its edge accounting: good edges meet all three
/// parts, missing ones are crossing triples absent from the host, extra ones
/// are host edges that are not crossing.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Tripartition {
    pub assignment: Vec<Part>,
    pub good: usize,
    pub missing: usize,
    pub extra: usize,
}

fn is_good(assignment: &[Part], [a, b, c]: [Vertex; 3]) -> bool {
    let (x, y, z) = (assignment[a], assignment[b], assignment[c]);
    x != y && y != z && x != z
}

impl Tripartition {
    pub fn new(h: &Hypergraph3, assignment: Vec<Part>) -> Result<Self> {
        if assignment.len() != h.n() {
            return Err(invalid(format!(
                "assignment covers {} vertices, host has {}",
                assignment.len(),
                h.n()
            )));
        }
        let good = h.edges().iter().filter(|&&e| is_good(&assignment, e)).count();
        let mut t = Tripartition {
            assignment,
            good,
            missing: 0,
            extra: h.edge_count() - good,
        };
        let [a, b, c] = t.part_sizes();
        t.missing = a * b * c - good;
        Ok(t)
    }

    pub fn part_sizes(&self) -> [usize; 3] {
        let mut s = [0; 3];
        for p in &self.assignment {
            s[p.index()] += 1;
        }
        s
    }

    pub fn members(&self, part: Part) -> Vec<Vertex> {
        (0..self.assignment.len())
            .filter(|&v| self.assignment[v] == part)
            .collect()
    }
}

/// Renames parts in order of first appearance so that equivalent
/// colourings compare equal.
fn normalize(assignment: &[Part]) -> Vec<Part> {
    let mut map: [Option<Part>; 3] = [None; 3];
    let mut next = 0;
    assignment
        .iter()
        .map(|p| {
            *map[p.index()].get_or_insert_with(|| {
                let q = Part::ALL[next];
                next += 1;
                q
            })
        })
        .collect()
}

struct LocalSearch<'a> {
    h: &'a Hypergraph3,
    incident: Vec<Vec<[Vertex; 2]>>,
}

impl<'a> LocalSearch<'a> {
    fn new(h: &'a Hypergraph3) -> Self {
        let mut incident = vec![Vec::new(); h.n()];
        for &[a, b, c] in h.edges() {
            incident[a].push([b, c]);
            incident[b].push([a, c]);
            incident[c].push([a, b]);
        }
        LocalSearch { h, incident }
    }

    fn good_at(&self, assignment: &[Part], v: Vertex, p: Part) -> usize {
        self.incident[v]
            .iter()
            .filter(|&&[x, y]| {
                let (px, py) = (assignment[x], assignment[y]);
                px != py && px != p && py != p
            })
            .count()
    }

    /// First-improvement descent from a random balanced colouring.
    fn run(&self, seed: u64, stream: u64) -> Vec<Part> {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        rng.set_stream(stream);
        let n = self.h.n();
        let mut assignment: Vec<Part> = balanced_parts(n, 3)
            .into_iter()
            .zip(Part::ALL)
            .flat_map(|(size, p)| std::iter::repeat_n(p, size))
            .collect();
        assignment.shuffle(&mut rng);
        loop {
            let mut improved = false;
            for v in 0..n {
                let cur = assignment[v];
                let here = self.good_at(&assignment, v, cur);
                for p in Part::ALL {
                    if p != cur && self.good_at(&assignment, v, p) > here {
                        assignment[v] = p;
                        improved = true;
                        break;
                    }
                }
            }
            if !improved {
                return assignment;
            }
        }
    }
}

/// Best of `restarts` seeded local searches maximising the good-edge count.
/// Ties go to the lexicographically least normalised colouring, so the
/// result does not depend on how restarts are scheduled.
pub fn best_tripartition(h: &Hypergraph3, restarts: usize, seed: u64) -> Result<Tripartition> {
    if h.n() < 3 {
        return Err(invalid(format!("needs at least 3 vertices, got {}", h.n())));
    }
    if restarts == 0 {
        return Err(invalid("needs at least one restart".to_string()));
    }
    let search = LocalSearch::new(h);
    let runs: Vec<Tripartition> = (0..restarts as u64)
        .into_par_iter()
        .map(|r| Tripartition::new(h, normalize(&search.run(seed, r))).expect("full assignment"))
        .collect();
    Ok(runs
        .into_iter()
        .min_by(|x, y| y.good.cmp(&x.good).then_with(|| x.assignment.cmp(&y.assignment)))
        .expect("at least one restart"))
}

/// `1/(10t)`.
pub fn delta_preset_t(t: usize) -> f64 {
    1.0 / (10.0 * t as f64)
}

/// `1/(100m)`.
pub fn delta_preset_m(m: usize) -> f64 {
    1.0 / (100.0 * m as f64)
}

/// The coupled choice `eps = delta^3`.
pub fn eps_coupled(delta: f64) -> f64 {
    delta.powi(3)
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct StabilityReport {
    pub part_sizes: [usize; 3],
    pub good: usize,
    pub missing: usize,
    pub extra: usize,
    /// Vertices of A, B, C whose good degree falls below `|other|*|other| - 2 delta n^2`.
    pub a_prime: Vec<Vertex>,
    pub b_prime: Vec<Vertex>,
    pub c_prime: Vec<Vertex>,
    /// Pairs lying in more than `sqrt(eps) n` missing triples.
    pub improper_pairs: usize,
    pub x_size: usize,
    /// `1.5 delta^2 n`.
    pub x_limit: f64,
    pub x_within_limit: bool,
    pub warnings: Vec<String>,
}

pub fn stability_report(h: &Hypergraph3, part: &Tripartition, delta: f64, eps: f64) -> Result<StabilityReport> {
    if !(delta > 0.0 && delta < 1.0 && eps > 0.0 && eps < 1.0) {
        return Err(invalid(format!(
            "needs 0 < delta, eps < 1, got delta={delta}, eps={eps}"
        )));
    }
    let n = h.n();
    let fresh = Tripartition::new(h, part.assignment.clone())?;
    let asg = &fresh.assignment;
    let sizes = fresh.part_sizes();
    let nf = n as f64;

    let mut good_deg = vec![0usize; n];
    for &e in h.edges() {
        if is_good(asg, e) {
            for v in e {
                good_deg[v] += 1;
            }
        }
    }
    let mut primes: [Vec<Vertex>; 3] = Default::default();
    for v in 0..n {
        let i = asg[v].index();
        let others: usize = (0..3).filter(|&j| j != i).map(|j| sizes[j]).product();
        if (good_deg[v] as f64) < others as f64 - 2.0 * delta * nf * nf {
            primes[i].push(v);
        }
    }

    let pair_limit = eps.sqrt() * nf;
    let mut improper = 0;
    for u in 0..n {
        for v in u + 1..n {
            if asg[u] == asg[v] {
                continue;
            }
            let missing = (0..n)
                .filter(|&w| asg[w] != asg[u] && asg[w] != asg[v] && !h.contains(u, v, w))
                .count();
            if missing as f64 > pair_limit {
                improper += 1;
            }
        }
    }

    let x_size = primes.iter().map(Vec::len).sum();
    let x_limit = 1.5 * delta * delta * nf;
    let mut warnings = Vec::new();
    if nf * delta * delta < 1.0 {
        warnings.push("vacuous scale: n*delta^2 < 1".to_string());
    }
    let coupled = eps_coupled(delta);
    if (coupled - eps).abs() > 1e-9 * eps.max(coupled) {
        warnings.push(format!("delta^3 = {coupled} differs from eps = {eps}"));
    }
    let [a_prime, b_prime, c_prime] = primes;
    Ok(StabilityReport {
        part_sizes: sizes,
        good: fresh.good,
        missing: fresh.missing,
        extra: fresh.extra,
        a_prime,
        b_prime,
        c_prime,
        improper_pairs: improper,
        x_size,
        x_limit,
        x_within_limit: x_size as f64 <= x_limit,
        warnings,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::constructs::{f_sim_extremal, turan_partite};
    use crate::hgraph::binom2;
    use proptest::prelude::*;

    fn planted(sizes: [usize; 3]) -> Vec<Part> {
        sizes
            .into_iter()
            .zip(Part::ALL)
            .flat_map(|(s, p)| std::iter::repeat_n(p, s))
            .collect()
    }

    /// Maximum good count over every colouring.
    fn brute_max_good(h: &Hypergraph3) -> usize {
        let n = h.n();
        (0..3usize.pow(n as u32))
            .map(|mut code| {
                let asg: Vec<Part> = (0..n)
                    .map(|_| {
                        let p = Part::ALL[code % 3];
                        code /= 3;
                        p
                    })
                    .collect();
                h.edges().iter().filter(|&&e| is_good(&asg, e)).count()
            })
            .max()
            .unwrap()
    }

    #[test]
    fn turan_graph_is_recovered() {
        let h = turan_partite(9, 3).unwrap();
        let t = best_tripartition(&h, 20, 1).unwrap();
        assert_eq!((t.good, t.missing, t.extra), (27, 0, 0));
        let h = turan_partite(12, 3).unwrap();
        let t = best_tripartition(&h, 20, 1).unwrap();
        assert_eq!((t.missing, t.extra), (0, 0));
    }

    #[test]
    fn empty_graph() {
        let h = Hypergraph3::empty(7);
        let t = best_tripartition(&h, 3, 5).unwrap();
        let [a, b, c] = t.part_sizes();
        assert_eq!((t.good, t.extra, t.missing), (0, 0, a * b * c));
        assert!(best_tripartition(&Hypergraph3::empty(2), 3, 5).is_err());
    }

    #[test]
    fn f_sim_extremal_partition() {
        // n - t = 9 splits as 3,3,3 with the apex vertex 9 on top
        let h = f_sim_extremal(10, 1).unwrap();
        let mut known = planted([3, 3, 3]);
        known.push(Part::A);
        let k = Tripartition::new(&h, known).unwrap();
        assert_eq!(k.extra, 3 * binom2(3));
        assert_eq!(k.good, 27);
        let found = best_tripartition(&h, 20, 1).unwrap();
        assert_eq!(found.good, brute_max_good(&h));
        assert_eq!(found.good, k.good);
        assert_eq!(found.extra, 9);
    }

    #[test]
    fn deterministic_and_stable_under_relabelling() {
        let h = f_sim_extremal(11, 2).unwrap();
        let a = best_tripartition(&h, 8, 3).unwrap();
        let b = best_tripartition(&h, 8, 3).unwrap();
        assert_eq!(a, b);
        let perm: Vec<usize> = (0..11).rev().collect();
        let r = best_tripartition(&h.relabel(&perm).unwrap(), 8, 3).unwrap();
        assert_eq!((r.good, r.missing, r.extra), (a.good, a.missing, a.extra));
    }

    #[test]
    fn report_examples() {
        let h = turan_partite(9, 3).unwrap();
        let part = Tripartition::new(&h, planted([3, 3, 3])).unwrap();
        let r = stability_report(&h, &part, 0.1, 0.001).unwrap();
        assert!(r.a_prime.is_empty() && r.b_prime.is_empty() && r.c_prime.is_empty());
        assert_eq!(r.improper_pairs, 0);
        assert!(r.x_within_limit);

        let v = 0;
        let stripped = Hypergraph3::new(9, h.edges().iter().copied().filter(|e| !e.contains(&v))).unwrap();
        let r = stability_report(&stripped, &part, 0.01, 0.001).unwrap();
        assert_eq!(r.a_prime, vec![v]);
        assert_eq!(r.good + r.missing, 27);
        assert!(r.warnings.iter().any(|w| w.starts_with("vacuous")));
        assert!(r.warnings.iter().any(|w| w.contains("differs")));

        let r = stability_report(&h, &part, 0.1, eps_coupled(0.1)).unwrap();
        assert!(!r.warnings.iter().any(|w| w.contains("differs")));
        assert!(stability_report(&h, &part, 0.0, 0.1).is_err());
        assert!(stability_report(&h, &part, 0.5, 1.0).is_err());
    }

    #[test]
    fn presets() {
        assert_eq!(delta_preset_t(2), 0.05);
        assert_eq!(delta_preset_m(1), 0.01);
        assert!((eps_coupled(0.1) - 0.001).abs() < 1e-15);
    }

    fn arb_graph() -> impl Strategy<Value = Hypergraph3> {
        (3usize..=12).prop_flat_map(|n| {
            let all = crate::hgraph::colex_triples(n);
            proptest::sample::subsequence(all.clone(), 0..=all.len())
                .prop_map(move |es| Hypergraph3::new(n, es).unwrap())
        })
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(100))]

        #[test]
        fn accounting_identities(h in arb_graph(), seed in any::<u64>()) {
            let t = best_tripartition(&h, 3, seed).unwrap();
            let [a, b, c] = t.part_sizes();
            prop_assert_eq!(t.assignment.len(), h.n());
            prop_assert_eq!(t.good + t.extra, h.edge_count());
            prop_assert_eq!(t.good + t.missing, a * b * c);
            // local optimum: no single move gains
            let ls = LocalSearch::new(&h);
            for v in 0..h.n() {
                let here = ls.good_at(&t.assignment, v, t.assignment[v]);
                for p in Part::ALL {
                    prop_assert!(ls.good_at(&t.assignment, v, p) <= here);
                }
            }
            let r = stability_report(&h, &t, 0.2, 0.008).unwrap();
            prop_assert!(r.improper_pairs <= h.n() * (h.n() - 1) / 2);
            for v in &r.a_prime {
                prop_assert_eq!(t.assignment[*v], Part::A);
            }
            for v in &r.b_prime {
                prop_assert_eq!(t.assignment[*v], Part::B);
            }
            for v in &r.c_prime {
                prop_assert_eq!(t.assignment[*v], Part::C);
            }
        }
    }
}
