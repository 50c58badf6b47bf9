//! Branch and bound for the largest item set containing no forbidden set.
//!
//! Equivalently a minimum hitting set of the forbidden family. Per-set
//! counters of selected and rejected items make every assignment O(degree);
//! a set with all but one item selected forces its last item out. The bound
//! subtracts a greedy packing of still-unhit sets that are pairwise disjoint
//! on their undecided items, since each of them costs at least one item.

use std::ops::ControlFlow;

const UNDECIDED: u8 = 0;
const IN: u8 = 1;
const OUT: u8 = 2;

pub(crate) enum Goal {
    Maximize,
    /// Visit every solution of exactly this size.
    Enumerate(usize),
}

pub(crate) struct Outcome {
    pub best: Option<Vec<u32>>,
    pub nodes: u64,
}

pub(crate) struct Engine<'a> {
    sets: &'a [Vec<u32>],
    containing: Vec<Vec<u32>>,
    status: Vec<u8>,
    cnt_in: Vec<u32>,
    cnt_out: Vec<u32>,
    n_in: usize,
    n_undecided: usize,
    trail: Vec<u32>,
    queue: Vec<u32>,
    stamp: Vec<u32>,
    generation: u32,
    buckets: Vec<Vec<u32>>,
    best: Option<Vec<u32>>,
    best_value: usize,
    nodes: u64,
}

impl<'a> Engine<'a> {
    pub fn new(items: usize, sets: &'a [Vec<u32>]) -> Self {
        let mut containing = vec![Vec::new(); items];
        let mut max_len = 0;
        for (i, s) in sets.iter().enumerate() {
            max_len = max_len.max(s.len());
            for &x in s {
                containing[x as usize].push(i as u32);
            }
        }
        Engine {
            sets,
            containing,
            status: vec![UNDECIDED; items],
            cnt_in: vec![0; sets.len()],
            cnt_out: vec![0; sets.len()],
            n_in: 0,
            n_undecided: items,
            trail: Vec::with_capacity(items),
            queue: Vec::new(),
            stamp: vec![0; items],
            generation: 0,
            buckets: vec![Vec::new(); max_len + 1],
            best: None,
            best_value: 0,
            nodes: 0,
        }
    }

    /// Runs the search. `seed` items are fixed in before branching; a
    /// conflicting seed yields no solution at all.
    pub fn run<F>(mut self, seed: &[u32], goal: Goal, mut on_solution: F) -> Outcome
    where
        F: FnMut(&[u32]) -> ControlFlow<()>,
    {
        let mut ok = true;
        for (i, s) in self.sets.iter().enumerate() {
            if s.len() == 1 {
                self.queue.push(i as u32);
            }
        }
        ok &= self.propagate();
        for &x in seed {
            if !ok {
                break;
            }
            ok = match self.status[x as usize] {
                IN => true,
                OUT => false,
                _ => self.assign(x, IN) && self.propagate(),
            };
        }
        if ok {
            let _ = self.dfs(&goal, &mut on_solution);
        }
        Outcome {
            best: self.best,
            nodes: self.nodes,
        }
    }

    fn assign(&mut self, x: u32, val: u8) -> bool {
        let xi = x as usize;
        debug_assert_eq!(self.status[xi], UNDECIDED);
        self.status[xi] = val;
        self.n_undecided -= 1;
        self.trail.push(x);
        let mut ok = true;
        if val == IN {
            self.n_in += 1;
            for &s in &self.containing[xi] {
                let si = s as usize;
                self.cnt_in[si] += 1;
                if self.cnt_out[si] == 0 {
                    let len = self.sets[si].len() as u32;
                    if self.cnt_in[si] == len {
                        ok = false;
                    } else if self.cnt_in[si] + 1 == len {
                        self.queue.push(s);
                    }
                }
            }
        } else {
            for &s in &self.containing[xi] {
                self.cnt_out[s as usize] += 1;
            }
        }
        ok
    }

    fn propagate(&mut self) -> bool {
        while let Some(s) = self.queue.pop() {
            let si = s as usize;
            if self.cnt_out[si] > 0 {
                continue;
            }
            let len = self.sets[si].len() as u32;
            if self.cnt_in[si] == len {
                self.queue.clear();
                return false;
            }
            let last = self.sets[si]
                .iter()
                .copied()
                .find(|&x| self.status[x as usize] == UNDECIDED)
                .expect("one undecided item remains");
            self.assign(last, OUT);
        }
        true
    }

    fn undo(&mut self, mark: usize) {
        while self.trail.len() > mark {
            let x = self.trail.pop().unwrap();
            let xi = x as usize;
            let val = self.status[xi];
            self.status[xi] = UNDECIDED;
            self.n_undecided += 1;
            if val == IN {
                self.n_in -= 1;
                for &s in &self.containing[xi] {
                    self.cnt_in[s as usize] -= 1;
                }
            } else {
                for &s in &self.containing[xi] {
                    self.cnt_out[s as usize] -= 1;
                }
            }
        }
    }

    /// Greedy disjoint packing of unhit sets; returns its size and the unhit
    /// set with fewest undecided items.
    fn bound(&mut self) -> (usize, Option<u32>) {
        for b in &mut self.buckets {
            b.clear();
        }
        for (i, s) in self.sets.iter().enumerate() {
            if self.cnt_out[i] == 0 {
                let und = s.len() - self.cnt_in[i] as usize;
                self.buckets[und].push(i as u32);
            }
        }
        self.generation = self.generation.wrapping_add(1);
        if self.generation == 0 {
            self.stamp.iter_mut().for_each(|x| *x = 0);
            self.generation = 1;
        }
        let g = self.generation;
        let mut packed = 0;
        let mut pick = None;
        for b in 0..self.buckets.len() {
            for k in 0..self.buckets[b].len() {
                let s = self.buckets[b][k] as usize;
                pick.get_or_insert(s as u32);
                let free = self.sets[s]
                    .iter()
                    .all(|&x| self.status[x as usize] != UNDECIDED || self.stamp[x as usize] != g);
                if free {
                    packed += 1;
                    for &x in &self.sets[s] {
                        if self.status[x as usize] == UNDECIDED {
                            self.stamp[x as usize] = g;
                        }
                    }
                }
            }
        }
        (packed, pick)
    }

    fn dfs<F>(&mut self, goal: &Goal, on_solution: &mut F) -> ControlFlow<()>
    where
        F: FnMut(&[u32]) -> ControlFlow<()>,
    {
        self.nodes += 1;
        let (packed, pick) = self.bound();
        let upper = self.n_in + self.n_undecided - packed;
        match goal {
            Goal::Maximize => {
                if self.best.is_some() && upper <= self.best_value {
                    return ControlFlow::Continue(());
                }
            }
            Goal::Enumerate(target) => {
                if upper < *target {
                    return ControlFlow::Continue(());
                }
            }
        }
        let Some(set) = pick else {
            // every forbidden set is hit: all undecided items go in
            let sol: Vec<u32> = (0..self.status.len() as u32)
                .filter(|&x| self.status[x as usize] != OUT)
                .collect();
            let value = sol.len();
            match goal {
                Goal::Maximize => {
                    if self.best.is_none() || value > self.best_value {
                        self.best_value = value;
                        self.best = Some(sol);
                    }
                }
                Goal::Enumerate(target) => {
                    if value == *target {
                        if self.best.is_none() {
                            self.best_value = value;
                            self.best = Some(sol.clone());
                        }
                        return on_solution(&sol);
                    }
                }
            }
            return ControlFlow::Continue(());
        };
        let undecided: Vec<u32> = self.sets[set as usize]
            .iter()
            .copied()
            .filter(|&x| self.status[x as usize] == UNDECIDED)
            .collect();
        // branch i: the first i undecided items are in, item i is out
        for i in 0..undecided.len() {
            let mark = self.trail.len();
            let mut ok = true;
            for &x in &undecided[..i] {
                ok = match self.status[x as usize] {
                    IN => true,
                    OUT => false,
                    _ => self.assign(x, IN) && self.propagate(),
                };
                if !ok {
                    break;
                }
            }
            if ok {
                let x = undecided[i];
                ok = match self.status[x as usize] {
                    OUT => true,
                    IN => false,
                    _ => self.assign(x, OUT) && self.propagate(),
                };
            }
            self.queue.clear();
            let flow = if ok {
                self.dfs(goal, on_solution)
            } else {
                ControlFlow::Continue(())
            };
            self.undo(mark);
            flow?;
        }
        ControlFlow::Continue(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn brute(items: usize, sets: &[Vec<u32>]) -> usize {
        (0u32..1 << items)
            .filter(|m| !sets.iter().any(|s| s.iter().all(|&x| m >> x & 1 == 1)))
            .map(|m| m.count_ones() as usize)
            .max()
            .unwrap()
    }

    #[test]
    fn small_families_match_brute_force() {
        let fams: Vec<(usize, Vec<Vec<u32>>)> = vec![
            (4, vec![vec![0, 1], vec![1, 2], vec![2, 3], vec![3, 0]]),
            (5, vec![vec![0, 1, 2], vec![2, 3, 4], vec![0, 4], vec![1]]),
            (
                6,
                vec![vec![0, 1, 2], vec![1, 2, 3], vec![3, 4, 5], vec![0, 5], vec![2, 4]],
            ),
            (3, vec![]),
            (3, vec![vec![0], vec![1], vec![2]]),
        ];
        for (items, sets) in &fams {
            let out = Engine::new(*items, sets).run(&[], Goal::Maximize, |_| ControlFlow::Continue(()));
            let best = out.best.unwrap();
            assert_eq!(best.len(), brute(*items, sets));
            assert!(!sets.iter().any(|s| s.iter().all(|x| best.contains(x))));
        }
    }

    #[test]
    fn enumeration_visits_each_optimum_once() {
        // 4-cycle of forbidden pairs: optima are {0,2} and {1,3}
        let sets = vec![vec![0, 1], vec![1, 2], vec![2, 3], vec![3, 0]];
        let mut seen = Vec::new();
        Engine::new(4, &sets).run(&[], Goal::Enumerate(2), |s| {
            seen.push(s.to_vec());
            ControlFlow::Continue(())
        });
        seen.sort();
        assert_eq!(seen, vec![vec![0, 2], vec![1, 3]]);
    }

    #[test]
    fn conflicting_seed_gives_nothing() {
        let sets = vec![vec![0]];
        let out = Engine::new(2, &sets).run(&[0], Goal::Maximize, |_| ControlFlow::Continue(()));
        assert!(out.best.is_none());
    }
}
