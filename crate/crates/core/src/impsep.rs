//! Multiway Cut by branching over important separators.

use crate::flow::{reach_from, vertex_cut, CutError, CutOptions, CutSide};
use crate::frontends::{mwc_simple_preprocess, FrontendError};
use crate::graph::{components_avoiding, Graph, MwcInstance};
use crate::solver::Limits;

#[derive(Clone, Debug)]
pub struct ImportantSeparatorQuery<'a> {
    pub graph: &'a Graph,
    pub sources: Vec<usize>,
    pub sinks: Vec<usize>,
    pub k: usize,
    /// Vertices that may not be cut besides sources and sinks.
    pub undeletable: Option<&'a [bool]>,
    /// Vertices absent from the graph.
    pub removed: Option<&'a [bool]>,
}

/// Vertices reachable from the sources once `sep` is removed.
fn reach_set(q: &ImportantSeparatorQuery, sep: &[usize]) -> Vec<bool> {
    let n = q.graph.n();
    let mut blocked: Vec<bool> = (0..n).map(|v| q.removed.is_some_and(|r| r[v])).collect();
    for &v in sep {
        blocked[v] = true;
    }
    reach_from(q.graph, &q.sources, &blocked)
}

/// Checks the definition directly: `sep` separates, is inclusion-minimal,
/// and no separator of at most its size has a strictly larger source side.
pub fn is_important(q: &ImportantSeparatorQuery, sep: &[usize]) -> bool {
    let reach = reach_set(q, sep);
    if q.sinks.iter().any(|&t| reach[t]) {
        return false;
    }
    for (i, _) in sep.iter().enumerate() {
        let rest: Vec<usize> = sep.iter().enumerate().filter(|&(j, _)| j != i).map(|(_, &v)| v).collect();
        if !q.sinks.iter().any(|&t| reach_set(q, &rest)[t]) {
            return false;
        }
    }
    let n = q.graph.n();
    let side: Vec<usize> = (0..n).filter(|&v| reach[v]).collect();
    let opts = CutOptions { undeletable: q.undeletable, removed: q.removed, side: CutSide::Furthest, limit: None };
    // a cut from the whole source side is at most |sep|; importance needs it
    // to be exactly |sep| with nothing beyond the current side
    match vertex_cut(q.graph, &side, &q.sinks, &opts) {
        Ok(c) => c.value == sep.len() && c.source_side == reach,
        Err(_) => false,
    }
}

/// All important source–sink separators of size at most `k`, each sorted,
/// in lexicographic order. Fails when no separator exists at all.
pub fn enumerate_important_separators(q: &ImportantSeparatorQuery) -> Result<Vec<Vec<usize>>, CutError> {
    let n = q.graph.n();
    let undeletable: Vec<bool> = (0..n).map(|v| q.undeletable.is_some_and(|u| u[v])).collect();
    let removed: Vec<bool> = (0..n).map(|v| q.removed.is_some_and(|r| r[v])).collect();
    let probe = CutOptions { undeletable: Some(&undeletable), removed: Some(&removed), ..Default::default() };
    vertex_cut(q.graph, &q.sources, &q.sinks, &probe).map(|_| ()).or_else(|e| match e {
        CutError::Uncuttable => Err(e),
        CutError::ExceedsLimit(_) => Ok(()),
    })?;
    let mut out = Vec::new();
    recurse(q.graph, &q.sources, &q.sinks, q.k, &mut undeletable.clone(), &mut removed.clone(), &mut Vec::new(), &mut out);
    for s in &mut out {
        s.sort_unstable();
    }
    out.sort();
    out.dedup();
    out.retain(|s| is_important(q, s));
    assert!(out.len() as f64 <= 4f64.powi(q.k as i32), "{} important separators of size ≤ {}", out.len(), q.k);
    Ok(out)
}

/// Branches on a vertex of the furthest minimum cut: either it joins the
/// separator, or it joins the source side, which raises the cut value.
#[allow(clippy::too_many_arguments)]
fn recurse(g: &Graph, sources: &[usize], sinks: &[usize], k: usize, hard: &mut Vec<bool>, removed: &mut Vec<bool>, chosen: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
    let opts = CutOptions { undeletable: Some(hard), removed: Some(removed), side: CutSide::Furthest, limit: Some(k) };
    let Ok(cut) = vertex_cut(g, sources, sinks, &opts) else { return };
    if cut.value == 0 {
        out.push(chosen.clone());
        return;
    }
    let side: Vec<usize> = (0..g.n()).filter(|&v| cut.source_side[v]).collect();
    let v = cut.cut[0];

    removed[v] = true;
    chosen.push(v);
    recurse(g, &side, sinks, k - 1, hard, removed, chosen, out);
    chosen.pop();
    removed[v] = false;

    let mut wider = side;
    wider.push(v);
    let was_hard = std::mem::replace(&mut hard[v], true);
    recurse(g, &wider, sinks, k, hard, removed, chosen, out);
    hard[v] = was_hard;
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct ImpSepStats {
    pub nodes: u64,
    pub separators: u64,
}

#[derive(Clone, Debug)]
pub struct ImpSepResult {
    /// `None` on timeout.
    pub opt: Option<usize>,
    pub solution: Vec<usize>,
    pub stats: ImpSepStats,
}

#[derive(Debug)]
struct TimedOut;

struct Search<'a> {
    g: &'a Graph,
    is_terminal: Vec<bool>,
    split: bool,
    limits: Limits,
    stats: ImpSepStats,
}

impl Search<'_> {
    fn isolating_cut(&self, t: usize, others: &[usize], removed: &[bool]) -> usize {
        let opts = CutOptions { undeletable: None, removed: Some(removed), ..Default::default() };
        vertex_cut(self.g, &[t], others, &opts).map(|c| c.value).expect("preprocessing removed terminal edges")
    }

    /// Terminals still connected to another terminal.
    fn active(&self, terminals: &[usize], removed: &[bool]) -> Vec<usize> {
        let mut blocked = removed.to_vec();
        for &t in terminals {
            blocked[t] = true;
        }
        let mut act = Vec::new();
        for &t in terminals {
            blocked[t] = false;
            let reach = reach_from(self.g, &[t], &blocked);
            blocked[t] = true;
            let reached = terminals.iter().any(|&u| u != t && self.g.neighbors(u).iter().any(|&w| reach[w]));
            if reached {
                act.push(t);
            }
        }
        act
    }

    /// Lower bound: the largest minimum isolating cut.
    fn lower_bound(&self, terminals: &[usize], removed: &[bool]) -> usize {
        let act = self.active(terminals, removed);
        act.iter().map(|&t| self.isolating_cut(t, &others(&act, t), removed)).max().unwrap_or(0)
    }

    /// Cheapest multiway cut of `terminals` in the graph minus `removed` with
    /// at most `k` deletions, if any.
    fn decide(&mut self, terminals: &[usize], removed: &mut [bool], k: usize) -> Result<Option<Vec<usize>>, TimedOut> {
        self.stats.nodes += 1;
        if self.limits.deadline.is_some_and(|d| std::time::Instant::now() >= d) {
            return Err(TimedOut);
        }
        let act = self.active(terminals, removed);
        if act.is_empty() {
            return Ok(Some(Vec::new()));
        }
        if self.split {
            let comps = components_avoiding(self.g, removed);
            let parts: Vec<Vec<usize>> = comps.iter().map(|c| c.iter().copied().filter(|&v| self.is_terminal[v] && act.contains(&v)).collect()).filter(|ts: &Vec<usize>| ts.len() >= 2).collect();
            if parts.len() > 1 {
                return self.decide_split(&parts, removed, k);
            }
        }

        let mut best: Option<(usize, usize)> = None;
        for &t in &act {
            let c = self.isolating_cut(t, &others(&act, t), removed);
            if c > k {
                return Ok(None);
            }
            if best.is_none_or(|(bc, _)| c > bc) {
                best = Some((c, t));
            }
        }
        let t = best.unwrap().1;
        let rest = others(&act, t);
        let q = ImportantSeparatorQuery { graph: self.g, sources: vec![t], sinks: rest.clone(), k, undeletable: Some(&self.is_terminal), removed: Some(removed) };
        let seps = enumerate_important_separators(&q).expect("terminal edges were removed");
        self.stats.separators += seps.len() as u64;
        for sep in seps {
            let mut child = removed.to_vec();
            for &v in &sep {
                child[v] = true;
            }
            // drop the separated side so it is never searched again
            let side = reach_from(self.g, &[t], &child);
            for v in 0..side.len() {
                if side[v] {
                    child[v] = true;
                }
            }
            if let Some(mut sol) = self.decide(&rest, &mut child, k - sep.len())? {
                sol.extend(sep);
                return Ok(Some(sol));
            }
        }
        Ok(None)
    }

    /// Components are independent: solve each to optimality in turn.
    fn decide_split(&mut self, parts: &[Vec<usize>], removed: &mut [bool], k: usize) -> Result<Option<Vec<usize>>, TimedOut> {
        let mut used = 0;
        let mut sol = Vec::new();
        for ts in parts {
            let mut found = None;
            for kk in self.lower_bound(ts, removed)..=k - used {
                if let Some(s) = self.decide(ts, &mut removed.to_vec(), kk)? {
                    found = Some(s);
                    break;
                }
            }
            let Some(s) = found else { return Ok(None) };
            used += s.len();
            sol.extend(s);
        }
        Ok(Some(sol))
    }
}

fn others(ts: &[usize], t: usize) -> Vec<usize> {
    ts.iter().copied().filter(|&u| u != t).collect()
}

/// Exact Multiway Cut by ascending budgets from the largest isolating cut.
pub fn solve_mwc_impsep(inst: &MwcInstance, split_components: bool, limits: Limits) -> Result<ImpSepResult, FrontendError> {
    let pre = mwc_simple_preprocess(&MwcInstance { budget: None, ..inst.clone() })?;
    let g = &pre.instance.graph;
    let mut s = Search { g, is_terminal: pre.instance.terminal_mask(), split: split_components, limits, stats: ImpSepStats::default() };
    let mut removed = vec![false; g.n()];
    for &v in &pre.forced {
        removed[v] = true;
    }
    let terminals = pre.instance.terminals.clone();
    let upper = g.n();
    for k in s.lower_bound(&terminals, &removed)..=upper {
        match s.decide(&terminals, &mut removed.clone(), k) {
            Ok(Some(mut sol)) => {
                sol.extend(pre.forced.iter().copied());
                sol.sort_unstable();
                return Ok(ImpSepResult { opt: Some(sol.len()), solution: sol, stats: s.stats });
            }
            Ok(None) => continue,
            Err(TimedOut) => return Ok(ImpSepResult { opt: None, solution: Vec::new(), stats: s.stats }),
        }
    }
    unreachable!("deleting every non-terminal separates the terminals")
}
