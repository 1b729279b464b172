//! The lifted graph on (vertex, value) pairs and conflicting paths.
//!
//! Node `(v, a)` has an arc to `(w, b)` when the constraint from `v` to `w`
//! forces `b` from `a`, and to the sink `(w, ⊥)` when it leaves no value.
//! Implicational paths start at `(v, φ(v))`; they conflict when they reach
//! `(w, b)` with `φ(w) ≠ b` or any `(w, ⊥)`.

use super::instance::CspInstance;
use super::relation::Succ;

/// Value marking a forced deletion step `(w, ⊥)`.
pub const DEAD: u32 = u32::MAX;

/// Sequence of steps `(vertex, value)`; `DEAD` may appear only last.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct ImplPath {
    pub steps: Vec<(usize, u32)>,
}

impl ImplPath {
    /// Vertices with multiplicity.
    pub fn vertices(&self) -> impl Iterator<Item = usize> + '_ {
        self.steps.iter().map(|&(v, _)| v)
    }

    /// Checks the implication chain and the conflict at the end.
    pub fn is_conflicting(&self, inst: &CspInstance) -> bool {
        let Some(&(v1, a1)) = self.steps.first() else { return false };
        if !inst.is_alive(v1) || inst.phi(v1) != Some(a1) || self.steps.len() < 2 {
            return false;
        }
        for w in self.steps.windows(2) {
            let ((u, a), (v, b)) = (w[0], w[1]);
            if a == DEAD || !inst.is_alive(v) {
                return false;
            }
            let Some((_, rel)) = inst.constraints_at(u).find(|&(x, _)| x == v) else { return false };
            let ok = match inst.succ(rel, a) {
                Succ::One(c) => c == b,
                Succ::None => b == DEAD,
                Succ::All => false,
            };
            if !ok {
                return false;
            }
        }
        let mut seen = std::collections::HashSet::new();
        if !self.steps.iter().all(|s| seen.insert(*s)) {
            return false;
        }
        let &(vl, al) = self.steps.last().unwrap();
        al == DEAD || inst.phi(vl).is_some_and(|c| c != al)
    }
}

/// Lifted graph restricted to nodes on some source–sink path.
#[derive(Clone, Debug)]
pub struct Lifted {
    /// `d + 1`; node id is `v * stride + a`, with `a = d` for `(v, ⊥)`.
    pub stride: usize,
    pub d: u32,
    /// Kept node ids, ascending.
    pub nodes: Vec<usize>,
    /// Dense index of a node id in `nodes`, or `usize::MAX`.
    pub index: Vec<usize>,
    /// CSR out-arcs over dense indices.
    pub out_start: Vec<usize>,
    pub out: Vec<usize>,
    pub is_source: Vec<bool>,
    pub is_sink: Vec<bool>,
}

impl Lifted {
    pub fn build(inst: &CspInstance) -> Lifted {
        let d = inst.domain_size();
        let stride = d as usize + 1;
        let total = inst.num_ids() * stride;
        let id = |v: usize, a: u32| v * stride + if a == DEAD { d as usize } else { a as usize };

        // forward reach from sources, recording arcs
        let mut seen = vec![false; total];
        let mut stack = Vec::new();
        for v in inst.assigned() {
            let x = id(v, inst.phi(v).unwrap());
            seen[x] = true;
            stack.push(x);
        }
        let mut arcs: Vec<(usize, usize)> = Vec::new();
        while let Some(x) = stack.pop() {
            let (u, a) = (x / stride, (x % stride) as u32);
            if a == d {
                continue;
            }
            for (w, rel) in inst.constraints_at(u) {
                let y = match inst.succ(rel, a) {
                    Succ::All => continue,
                    Succ::One(b) => id(w, b),
                    Succ::None => id(w, DEAD),
                };
                arcs.push((x, y));
                if !seen[y] {
                    seen[y] = true;
                    stack.push(y);
                }
            }
        }
        let sink = |x: usize| {
            let (v, a) = (x / stride, x % stride);
            a == d as usize || inst.phi(v).is_some_and(|c| c as usize != a)
        };

        // backward prune to nodes that reach a sink
        let reached: Vec<usize> = (0..total).filter(|&x| seen[x]).collect();
        let mut rindex = vec![usize::MAX; total];
        for (i, &x) in reached.iter().enumerate() {
            rindex[x] = i;
        }
        let mut rev: Vec<Vec<usize>> = vec![Vec::new(); reached.len()];
        for &(x, y) in &arcs {
            rev[rindex[y]].push(rindex[x]);
        }
        let mut good = vec![false; reached.len()];
        let mut stack: Vec<usize> = (0..reached.len()).filter(|&i| sink(reached[i])).collect();
        for &i in &stack {
            good[i] = true;
        }
        while let Some(i) = stack.pop() {
            for &j in &rev[i] {
                if !good[j] {
                    good[j] = true;
                    stack.push(j);
                }
            }
        }
        let nodes: Vec<usize> = reached.iter().enumerate().filter(|&(i, _)| good[i]).map(|(_, &x)| x).collect();
        let mut index = vec![usize::MAX; total];
        for (i, &x) in nodes.iter().enumerate() {
            index[x] = i;
        }
        let mut deg = vec![0usize; nodes.len() + 1];
        arcs.sort_unstable();
        arcs.dedup();
        arcs.retain(|&(x, y)| index[x] != usize::MAX && index[y] != usize::MAX);
        for &(x, _) in &arcs {
            deg[index[x] + 1] += 1;
        }
        for i in 0..nodes.len() {
            deg[i + 1] += deg[i];
        }
        let out_start = deg;
        let mut fill = out_start.clone();
        let mut out = vec![0; arcs.len()];
        for &(x, y) in &arcs {
            out[fill[index[x]]] = index[y];
            fill[index[x]] += 1;
        }
        let is_source = nodes.iter().map(|&x| (x % stride) < d as usize && inst.phi(x / stride) == Some((x % stride) as u32)).collect();
        let is_sink = nodes.iter().map(|&x| sink(x)).collect();
        Lifted { stride, d, nodes, index, out_start, out, is_source, is_sink }
    }

    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }

    pub fn succs(&self, i: usize) -> &[usize] {
        &self.out[self.out_start[i]..self.out_start[i + 1]]
    }

    pub fn vertex(&self, i: usize) -> usize {
        self.nodes[i] / self.stride
    }

    pub fn value(&self, i: usize) -> u32 {
        let a = (self.nodes[i] % self.stride) as u32;
        if a == self.d {
            DEAD
        } else {
            a
        }
    }

    pub fn has_dead(&self) -> bool {
        (0..self.len()).any(|i| self.value(i) == DEAD)
    }

    pub fn step(&self, i: usize) -> (usize, u32) {
        (self.vertex(i), self.value(i))
    }
}

/// All conflicting paths with at most `max_len` steps and pairwise distinct
/// steps. Exponential; intended as a test oracle.
pub fn enumerate_conflicting_paths(inst: &CspInstance, max_len: usize) -> Vec<ImplPath> {
    let l = Lifted::build(inst);
    let mut out = Vec::new();
    let mut on_path = vec![false; l.len()];
    let mut path = Vec::new();
    fn rec(l: &Lifted, x: usize, max_len: usize, on_path: &mut [bool], path: &mut Vec<usize>, out: &mut Vec<ImplPath>) {
        on_path[x] = true;
        path.push(x);
        if path.len() > 1 && l.is_sink[x] {
            out.push(ImplPath { steps: path.iter().map(|&i| l.step(i)).collect() });
        }
        if path.len() < max_len {
            for &y in l.succs(x) {
                if !on_path[y] {
                    rec(l, y, max_len, on_path, path, out);
                }
            }
        }
        path.pop();
        on_path[x] = false;
    }
    for s in 0..l.len() {
        if l.is_source[s] {
            rec(&l, s, max_len, &mut on_path, &mut path, &mut out);
        }
    }
    out.sort();
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::csp::{CspBuilder, Relation};

    #[test]
    fn chain_has_two_paths() {
        let mut b = CspBuilder::new(2, 2).budget(1);
        b.assign(0, 0).assign(1, 1).constrain(0, 1, Relation::equality(2));
        let inst = b.build().unwrap();
        let paths = enumerate_conflicting_paths(&inst, 8);
        assert_eq!(paths, vec![ImplPath { steps: vec![(0, 0), (1, 0)] }, ImplPath { steps: vec![(1, 1), (0, 1)] }]);
        assert!(paths.iter().all(|p| p.is_conflicting(&inst)));
    }

    #[test]
    fn no_assignment_no_paths() {
        let mut b = CspBuilder::new(2, 3);
        b.constrain(0, 1, Relation::not_equal()).constrain(1, 2, Relation::not_equal()).constrain(2, 0, Relation::not_equal());
        assert!(enumerate_conflicting_paths(&b.build().unwrap(), 10).is_empty());
        let mut b = CspBuilder::new(2, 1);
        b.assign(0, 0);
        assert!(enumerate_conflicting_paths(&b.build().unwrap(), 10).is_empty());
    }

    #[test]
    fn odd_cycle_through_seed() {
        let mut b = CspBuilder::new(2, 3);
        b.assign(0, 0);
        b.constrain(0, 1, Relation::not_equal()).constrain(1, 2, Relation::not_equal()).constrain(2, 0, Relation::not_equal());
        let paths = enumerate_conflicting_paths(&b.build().unwrap(), 10);
        assert_eq!(paths.len(), 2);
        assert!(paths.iter().all(|p| p.steps.len() == 4 && p.steps[3] == (0, 1)));
    }

    #[test]
    fn zero_row_gives_dead_step() {
        let mut b = CspBuilder::new(2, 2);
        b.assign(0, 0).constrain(0, 1, Relation::from_pairs(2, &[(1, 0), (1, 1)]).unwrap());
        let inst = b.build().unwrap();
        let paths = enumerate_conflicting_paths(&inst, 4);
        assert_eq!(paths, vec![ImplPath { steps: vec![(0, 0), (1, DEAD)] }]);
    }
}
