//! Unit-capacity max-flow and minimum vertex cuts via vertex splitting.

use std::collections::VecDeque;

use thiserror::Error;

use crate::graph::{Graph, MwcInstance};

const INF: i64 = 1 << 40;

/// Dinic's algorithm on an explicit arc list.
#[derive(Clone, Debug)]
pub struct Dinic {
    head: Vec<usize>,
    next: Vec<usize>,
    to: Vec<usize>,
    cap: Vec<i64>,
    level: Vec<u32>,
    iter: Vec<usize>,
}

const NIL: usize = usize::MAX;

impl Dinic {
    pub fn new(n: usize) -> Self {
        Dinic { head: vec![NIL; n], next: Vec::new(), to: Vec::new(), cap: Vec::new(), level: vec![0; n], iter: vec![0; n] }
    }

    pub fn node_count(&self) -> usize {
        self.head.len()
    }

    /// Adds arc `u → v` with capacity `c` and returns its index; the reverse
    /// residual arc has index `id ^ 1`.
    pub fn add_arc(&mut self, u: usize, v: usize, c: i64) -> usize {
        let id = self.to.len();
        for (a, b, cap) in [(u, v, c), (v, u, 0)] {
            self.to.push(b);
            self.cap.push(cap);
            self.next.push(self.head[a]);
            self.head[a] = self.to.len() - 1;
        }
        id
    }

    /// Raises (or with negative `delta`, lowers) the residual capacity of `arc`.
    pub fn add_capacity(&mut self, arc: usize, delta: i64) {
        self.cap[arc] += delta;
    }

    pub fn residual(&self, arc: usize) -> i64 {
        self.cap[arc]
    }

    /// Flow currently on arc `arc` (as returned by `add_arc`).
    pub fn flow_on(&self, arc: usize) -> i64 {
        self.cap[arc ^ 1]
    }

    pub fn arc_target(&self, arc: usize) -> usize {
        self.to[arc]
    }

    /// Outgoing arc ids of `u` (forward and residual).
    pub fn arcs_from(&self, u: usize) -> impl Iterator<Item = usize> + '_ {
        let mut e = self.head[u];
        std::iter::from_fn(move || {
            if e == NIL {
                return None;
            }
            let cur = e;
            e = self.next[e];
            Some(cur)
        })
    }

    fn bfs(&mut self, s: usize, t: usize) -> bool {
        self.level.iter_mut().for_each(|l| *l = u32::MAX);
        self.level[s] = 0;
        let mut q = VecDeque::from([s]);
        while let Some(u) = q.pop_front() {
            let mut e = self.head[u];
            while e != NIL {
                let v = self.to[e];
                if self.cap[e] > 0 && self.level[v] == u32::MAX {
                    self.level[v] = self.level[u] + 1;
                    q.push_back(v);
                }
                e = self.next[e];
            }
        }
        self.level[t] != u32::MAX
    }

    fn dfs(&mut self, u: usize, t: usize, pushed: i64) -> i64 {
        if u == t {
            return pushed;
        }
        while self.iter[u] != NIL {
            let e = self.iter[u];
            let v = self.to[e];
            if self.cap[e] > 0 && self.level[v] == self.level[u] + 1 {
                let got = self.dfs(v, t, pushed.min(self.cap[e]));
                if got > 0 {
                    self.cap[e] -= got;
                    self.cap[e ^ 1] += got;
                    return got;
                }
            }
            self.iter[u] = self.next[e];
        }
        0
    }

    /// Augments from `s` to `t` until maximal or until the total pushed in
    /// this call exceeds `limit`.
    pub fn max_flow(&mut self, s: usize, t: usize, limit: i64) -> i64 {
        let mut total = 0;
        while total <= limit && self.bfs(s, t) {
            self.iter.copy_from_slice(&self.head);
            loop {
                let f = self.dfs(s, t, INF);
                if f == 0 {
                    break;
                }
                total += f;
                if total > limit {
                    break;
                }
            }
        }
        total
    }

    /// Nodes reachable from `s` in the residual graph.
    pub fn residual_reach(&self, s: usize) -> Vec<bool> {
        let mut seen = vec![false; self.head.len()];
        seen[s] = true;
        let mut stack = vec![s];
        while let Some(u) = stack.pop() {
            for e in self.arcs_from(u) {
                let v = self.to[e];
                if self.cap[e] > 0 && !seen[v] {
                    seen[v] = true;
                    stack.push(v);
                }
            }
        }
        seen
    }

    /// Nodes that can reach `t` in the residual graph.
    pub fn residual_coreach(&self, t: usize) -> Vec<bool> {
        let mut seen = vec![false; self.head.len()];
        seen[t] = true;
        let mut stack = vec![t];
        while let Some(v) = stack.pop() {
            // arc e: v → u is the reverse of u → v, whose residual is cap[e ^ 1]
            for e in self.arcs_from(v) {
                let u = self.to[e];
                if self.cap[e ^ 1] > 0 && !seen[u] {
                    seen[u] = true;
                    stack.push(u);
                }
            }
        }
        seen
    }
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum CutError {
    #[error("sources and sinks cannot be separated by deletable vertices")]
    Uncuttable,
    #[error("minimum cut exceeds the limit {0}")]
    ExceedsLimit(usize),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Default)]
pub enum CutSide {
    /// The unique minimum cut with the smallest source side.
    #[default]
    Closest,
    /// The unique minimum cut with the largest source side.
    Furthest,
}

#[derive(Clone, Debug, Default)]
pub struct CutOptions<'a> {
    /// Vertices that may not be cut (besides sources and sinks).
    pub undeletable: Option<&'a [bool]>,
    /// Vertices absent from the graph.
    pub removed: Option<&'a [bool]>,
    pub side: CutSide,
    pub limit: Option<usize>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct VertexCut {
    pub value: usize,
    /// Sorted cut vertices.
    pub cut: Vec<usize>,
    /// Vertices reachable from the sources in `G - cut`.
    pub source_side: Vec<bool>,
}

fn mask_get(mask: Option<&[bool]>, v: usize) -> bool {
    mask.is_some_and(|m| m[v])
}

/// Minimum set of vertices outside `sources ∪ sinks` meeting every
/// source–sink path.
pub fn min_vertex_cut(g: &Graph, sources: &[usize], sinks: &[usize]) -> Result<VertexCut, CutError> {
    vertex_cut(g, sources, sinks, &CutOptions::default())
}

pub fn vertex_cut(g: &Graph, sources: &[usize], sinks: &[usize], opts: &CutOptions) -> Result<VertexCut, CutError> {
    let n = g.n();
    let mut role = vec![0u8; n]; // 1 source, 2 sink
    for &s in sources {
        role[s] = 1;
    }
    for &t in sinks {
        assert!(role[t] != 1, "vertex {t} is both source and sink");
        role[t] = 2;
    }
    let present = |v: usize| !mask_get(opts.removed, v);
    let hard = |v: usize| role[v] != 0 || mask_get(opts.undeletable, v);

    // Any source–sink path through uncuttable vertices only?
    let mut seen = vec![false; n];
    let mut stack: Vec<usize> = sources.iter().copied().filter(|&s| present(s)).collect();
    for &s in &stack {
        seen[s] = true;
    }
    while let Some(u) = stack.pop() {
        if role[u] == 2 {
            return Err(CutError::Uncuttable);
        }
        for &w in g.neighbors(u) {
            if !seen[w] && present(w) && hard(w) {
                seen[w] = true;
                stack.push(w);
            }
        }
    }

    let (s, t) = (2 * n, 2 * n + 1);
    let mut net = Dinic::new(2 * n + 2);
    for v in 0..n {
        if !present(v) {
            continue;
        }
        net.add_arc(2 * v, 2 * v + 1, if hard(v) { INF } else { 1 });
        for &w in g.neighbors(v) {
            if present(w) {
                net.add_arc(2 * v + 1, 2 * w, INF);
            }
        }
        match role[v] {
            1 => {
                net.add_arc(s, 2 * v, INF);
            }
            2 => {
                net.add_arc(2 * v + 1, t, INF);
            }
            _ => {}
        }
    }
    let limit = opts.limit.map_or(INF - 1, |l| l as i64);
    let value = net.max_flow(s, t, limit);
    if value > limit {
        return Err(CutError::ExceedsLimit(opts.limit.unwrap()));
    }
    debug_assert!(value < INF);
    let cut: Vec<usize> = match opts.side {
        CutSide::Closest => {
            let reach = net.residual_reach(s);
            (0..n).filter(|&v| present(v) && reach[2 * v] && !reach[2 * v + 1]).collect()
        }
        CutSide::Furthest => {
            let co = net.residual_coreach(t);
            (0..n).filter(|&v| present(v) && co[2 * v + 1] && !co[2 * v]).collect()
        }
    };
    let mut blocked: Vec<bool> = (0..n).map(|v| !present(v)).collect();
    for &v in &cut {
        blocked[v] = true;
    }
    let source_side = reach_from(g, sources, &blocked);
    debug_assert_eq!(cut.len() as i64, value);
    Ok(VertexCut { value: value as usize, cut, source_side })
}

/// Vertices reachable from `sources` avoiding `blocked`.
pub fn reach_from(g: &Graph, sources: &[usize], blocked: &[bool]) -> Vec<bool> {
    let mut seen = vec![false; g.n()];
    let mut stack = Vec::new();
    for &s in sources {
        if !blocked[s] && !seen[s] {
            seen[s] = true;
            stack.push(s);
        }
    }
    while let Some(u) = stack.pop() {
        for &w in g.neighbors(u) {
            if !seen[w] && !blocked[w] {
                seen[w] = true;
                stack.push(w);
            }
        }
    }
    seen
}

/// Multiway cut heuristic: for each terminal in ascending id order, cut it
/// from the remaining terminals by a minimum cut (closest to it) in the graph
/// with all earlier cuts removed.
pub fn isolating_cut_approx(inst: &MwcInstance) -> Result<Vec<usize>, CutError> {
    let g = &inst.graph;
    let mut terminals = inst.terminals.clone();
    terminals.sort_unstable();
    let mut removed = vec![false; g.n()];
    let mut solution = Vec::new();
    for (i, &t) in terminals.iter().enumerate() {
        let others: Vec<usize> = terminals.iter().enumerate().filter(|&(j, _)| j != i).map(|(_, &u)| u).collect();
        let opts = CutOptions { removed: Some(&removed), ..Default::default() };
        let cut = vertex_cut(g, &[t], &others, &opts)?;
        for v in cut.cut {
            removed[v] = true;
            solution.push(v);
        }
    }
    solution.sort_unstable();
    Ok(solution)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn path_and_parallel_paths() {
        let p = Graph::from_edges(3, [(0, 1), (1, 2)]);
        let c = min_vertex_cut(&p, &[0], &[2]).unwrap();
        assert_eq!((c.value, c.cut), (1, vec![1]));
        let two = Graph::from_edges(4, [(0, 1), (1, 3), (0, 2), (2, 3)]);
        assert_eq!(min_vertex_cut(&two, &[0], &[3]).unwrap().value, 2);
    }

    #[test]
    fn k4_opposite() {
        // s = 0, t = 1 in K4 minus the s–t edge
        let g = Graph::from_edges(4, [(0, 2), (0, 3), (1, 2), (1, 3), (2, 3)]);
        let c = min_vertex_cut(&g, &[0], &[1]).unwrap();
        assert_eq!((c.value, c.cut), (2, vec![2, 3]));
    }

    #[test]
    fn adjacency_is_uncuttable() {
        let g = Graph::from_edges(2, [(0, 1)]);
        assert_eq!(min_vertex_cut(&g, &[0], &[1]), Err(CutError::Uncuttable));
        let g = Graph::from_edges(3, [(0, 1), (1, 2)]);
        let und = [false, true, false];
        let opts = CutOptions { undeletable: Some(&und), ..Default::default() };
        assert_eq!(vertex_cut(&g, &[0], &[2], &opts), Err(CutError::Uncuttable));
    }

    #[test]
    fn closest_and_furthest() {
        let g = Graph::from_edges(4, [(0, 1), (1, 2), (2, 3)]);
        let near = vertex_cut(&g, &[0], &[3], &CutOptions::default()).unwrap();
        let far = vertex_cut(&g, &[0], &[3], &CutOptions { side: CutSide::Furthest, ..Default::default() }).unwrap();
        assert_eq!(near.cut, vec![1]);
        assert_eq!(far.cut, vec![2]);
        assert_eq!(far.source_side, vec![true, true, false, false]);
    }

    #[test]
    fn limit_stops_early() {
        let g = Graph::from_edges(4, [(0, 1), (1, 3), (0, 2), (2, 3)]);
        let opts = CutOptions { limit: Some(1), ..Default::default() };
        assert_eq!(vertex_cut(&g, &[0], &[3], &opts), Err(CutError::ExceedsLimit(1)));
    }

    #[test]
    fn isolating_examples() {
        let path = MwcInstance::new(Graph::from_edges(4, [(0, 1), (1, 2), (2, 3)]), vec![0, 3]);
        assert_eq!(isolating_cut_approx(&path).unwrap().len(), 1);
        let star = MwcInstance::new(Graph::from_edges(4, [(3, 0), (3, 1), (3, 2)]), vec![0, 1, 2]);
        assert_eq!(isolating_cut_approx(&star).unwrap(), vec![3]);
        let edge = MwcInstance::new(Graph::from_edges(2, [(0, 1)]), vec![0, 1]);
        assert_eq!(isolating_cut_approx(&edge), Err(CutError::Uncuttable));
    }
}
