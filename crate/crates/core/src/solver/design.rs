//! Maximum triple packings where every pair lies in at most `cap` triples.
//!
//! Include/exclude search over triples in colex order. Two bounds are
//! combined: each vertex can still gain at most half its residual pair
//! capacity in new triples, and every remaining triple has its largest vertex
//! at or above the current one, consuming two units of capacity on pairs below
//! that vertex.

use std::ops::ControlFlow;

use super::hitting::Goal;
use crate::hgraph::{colex_triples, Triple};

pub(crate) struct Packing {
    n: usize,
    cap: u8,
    triples: Vec<Triple>,
    load: Vec<u8>,
    res: Vec<i64>,
    res_low: Vec<i64>,
    chosen: Vec<usize>,
    best: Option<Vec<usize>>,
    nodes: u64,
}

impl Packing {
    pub fn new(n: usize, cap: usize) -> Self {
        let cap = cap.min(u8::MAX as usize) as u8;
        let res = vec![cap as i64 * n.saturating_sub(1) as i64; n];
        let res_low = (0..n).map(|w| cap as i64 * w as i64).collect();
        Packing {
            n,
            cap,
            triples: colex_triples(n),
            load: vec![0; n * n],
            res,
            res_low,
            chosen: Vec::new(),
            best: None,
            nodes: 0,
        }
    }

    pub fn nodes(&self) -> u64 {
        self.nodes
    }

    /// Runs the search with triple {0,1,2} fixed in, which loses nothing up
    /// to isomorphism when any triple fits at all. Returns the first optimum.
    pub fn run<F>(&mut self, goal: Goal, mut on_solution: F) -> Vec<Triple>
    where
        F: FnMut(&[Triple]) -> ControlFlow<()>,
    {
        if self.triples.is_empty() || self.cap == 0 {
            let _ = on_solution(&[]);
            return Vec::new();
        }
        self.toggle(0, true);
        let _ = self.dfs(1, &goal, &mut on_solution);
        self.toggle(0, false);
        self.best
            .as_ref()
            .map(|b| b.iter().map(|&i| self.triples[i]).collect())
            .unwrap_or_default()
    }

    fn fits(&self, i: usize) -> bool {
        let [a, b, c] = self.triples[i];
        let n = self.n;
        self.load[a * n + b] < self.cap && self.load[a * n + c] < self.cap && self.load[b * n + c] < self.cap
    }

    fn toggle(&mut self, i: usize, on: bool) {
        let [a, b, c] = self.triples[i];
        let n = self.n;
        let d: i64 = if on { 1 } else { -1 };
        for (u, w) in [(a, b), (a, c), (b, c)] {
            if on {
                self.load[u * n + w] += 1;
            } else {
                self.load[u * n + w] -= 1;
            }
            self.res[u] -= d;
            self.res[w] -= d;
            self.res_low[w] -= d;
        }
        if on {
            self.chosen.push(i);
        } else {
            self.chosen.pop();
        }
    }

    fn upper(&self, idx: usize) -> usize {
        let global = self.res.iter().map(|r| r / 2).sum::<i64>() / 3;
        let c = self.triples[idx][2];
        let colex: i64 = self.res_low[c..].iter().map(|r| r / 2).sum();
        let rest = (self.triples.len() - idx) as i64;
        self.chosen.len() + global.min(colex).min(rest).max(0) as usize
    }

    fn dfs<F>(&mut self, idx: usize, goal: &Goal, on_solution: &mut F) -> ControlFlow<()>
    where
        F: FnMut(&[Triple]) -> ControlFlow<()>,
    {
        self.nodes += 1;
        if idx == self.triples.len() {
            let value = self.chosen.len();
            match goal {
                Goal::Maximize => {
                    if self.best.as_ref().is_none_or(|b| value > b.len()) {
                        self.best = Some(self.chosen.clone());
                    }
                }
                Goal::Enumerate(target) => {
                    if value == *target {
                        if self.best.is_none() {
                            self.best = Some(self.chosen.clone());
                        }
                        let ts: Vec<Triple> = self.chosen.iter().map(|&i| self.triples[i]).collect();
                        return on_solution(&ts);
                    }
                }
            }
            return ControlFlow::Continue(());
        }
        let ub = self.upper(idx);
        match goal {
            Goal::Maximize => {
                if self.best.as_ref().is_some_and(|b| ub <= b.len()) {
                    return ControlFlow::Continue(());
                }
            }
            Goal::Enumerate(target) => {
                if ub < *target {
                    return ControlFlow::Continue(());
                }
            }
        }
        if self.fits(idx) {
            self.toggle(idx, true);
            let flow = self.dfs(idx + 1, goal, on_solution);
            self.toggle(idx, false);
            flow?;
        }
        self.dfs(idx + 1, goal, on_solution)
    }
}
