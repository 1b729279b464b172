//! Reductions from OCT and MWC to CSP 0/1/all, and lifting solutions back.

use thiserror::Error;

use crate::csp::{CspBuilder, CspInstance, Relation};
use crate::graph::{Graph, MwcInstance, OctInstance};
use crate::solver::{solve_optimum, Limits, OptResult, SolverVariant};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum FrontendError {
    #[error("terminals {0} and {1} are adjacent")]
    TerminalEdge(usize, usize),
    #[error("forced deletions exceed the budget")]
    BudgetExhausted,
}

/// Correspondence between CSP vertex ids and original vertex ids.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Mapping {
    pub to_original: Vec<usize>,
    pub forced: Vec<usize>,
}

impl Mapping {
    fn identity(n: usize) -> Self {
        Mapping { to_original: (0..n).collect(), forced: Vec::new() }
    }
}

/// One not-equal constraint per edge over a binary domain.
pub fn oct_to_csp(inst: &OctInstance) -> (CspInstance, Mapping) {
    let g = &inst.graph;
    let mut b = CspBuilder::new(2, g.n()).budget(inst.budget.unwrap_or(g.n()));
    for (u, v) in g.edges() {
        b.constrain(u, v, Relation::not_equal());
    }
    (b.build().expect("not-equal is 0/1/all"), Mapping::identity(g.n()))
}

#[derive(Clone, Debug)]
pub struct MwcPreprocessed {
    pub forced: Vec<usize>,
    /// The input with forced vertices isolated and the budget reduced.
    pub instance: MwcInstance,
}

/// Deletes every non-terminal adjacent to two or more terminals.
pub fn mwc_simple_preprocess(inst: &MwcInstance) -> Result<MwcPreprocessed, FrontendError> {
    let g = &inst.graph;
    let is_t = inst.terminal_mask();
    for (u, v) in g.edges() {
        if is_t[u] && is_t[v] {
            return Err(FrontendError::TerminalEdge(u, v));
        }
    }
    let forced: Vec<usize> = (0..g.n()).filter(|&v| !is_t[v] && g.neighbors(v).iter().filter(|&&u| is_t[u]).count() >= 2).collect();
    let budget = match inst.budget {
        Some(k) if forced.len() > k => return Err(FrontendError::BudgetExhausted),
        Some(k) => Some(k - forced.len()),
        None => None,
    };
    let mut graph = g.clone();
    for &v in &forced {
        graph.isolate(v);
    }
    Ok(MwcPreprocessed { instance: MwcInstance { graph, terminals: inst.terminals.clone(), budget }, forced })
}

/// Domain = terminals, equality on every edge of `G − T`, and each neighbour
/// of terminal `i` assigned label `i`. Isolated non-terminals are dropped.
pub fn mwc_to_csp(pre: &MwcPreprocessed) -> (CspInstance, Mapping) {
    let inst = &pre.instance;
    let g = &inst.graph;
    let is_t = inst.terminal_mask();
    let mut forced_mask = vec![false; g.n()];
    for &v in &pre.forced {
        forced_mask[v] = true;
    }
    let keep: Vec<usize> = (0..g.n()).filter(|&v| !is_t[v] && !forced_mask[v]).collect();
    let mut index = vec![usize::MAX; g.n()];
    for (i, &v) in keep.iter().enumerate() {
        index[v] = i;
    }
    let d = inst.terminals.len().max(1) as u32;
    let mut b = CspBuilder::new(d, keep.len()).budget(inst.budget.unwrap_or(keep.len()));
    for (label, &t) in inst.terminals.iter().enumerate() {
        for &v in g.neighbors(t) {
            b.assign(index[v], label as u32);
        }
    }
    for (u, v) in g.edges() {
        if index[u] != usize::MAX && index[v] != usize::MAX {
            b.constrain(index[u], index[v], Relation::equality(d));
        }
    }
    let inst = b.build().expect("equality is 0/1/all");
    (inst, Mapping { to_original: keep, forced: pre.forced.clone() })
}

/// Original ids of `forced ∪ mapped CSP deletions`, sorted.
pub fn lift_solution(mapping: &Mapping, csp_solution: &[usize]) -> Vec<usize> {
    let mut out: Vec<usize> = mapping.forced.iter().copied().chain(csp_solution.iter().map(|&v| mapping.to_original[v])).collect();
    out.sort_unstable();
    out
}

#[derive(Clone, Debug)]
pub struct Solved {
    /// `None` on timeout.
    pub opt: Option<usize>,
    pub solution: Vec<usize>,
    pub result: OptResult,
}

pub fn solve_oct(g: &Graph, variant: SolverVariant, limits: Limits) -> Solved {
    let (csp, map) = oct_to_csp(&OctInstance { graph: g.clone(), budget: None });
    let result = solve_optimum(&csp, variant, limits);
    Solved { opt: result.opt, solution: lift_solution(&map, &result.solution), result }
}

pub fn solve_mwc(inst: &MwcInstance, variant: SolverVariant, limits: Limits) -> Result<Solved, FrontendError> {
    let pre = mwc_simple_preprocess(&MwcInstance { budget: None, ..inst.clone() })?;
    let (csp, map) = mwc_to_csp(&pre);
    let result = solve_optimum(&csp, variant, limits);
    Ok(Solved { opt: result.opt.map(|o| o + pre.forced.len()), solution: lift_solution(&map, &result.solution), result })
}

/// An MWC instance after forced deletions and root persistence, rebuilt as
/// a graph: undeletable vertices are contracted into their terminal.
#[derive(Clone, Debug)]
pub struct MwcReduced {
    /// Terminals first, then the remaining non-terminals; budget unset.
    pub instance: MwcInstance,
    /// Original id of every vertex of `instance`.
    pub original: Vec<usize>,
    /// Forced and persistence deletions, original ids, sorted.
    pub deleted: Vec<usize>,
    pub undeletable: Vec<usize>,
    /// Terminals left without neighbours by the reduction.
    pub resolved_terminals: usize,
}

impl MwcReduced {
    /// Remaining non-terminals adjacent to a terminal.
    pub fn terminal_neighbourhood(&self) -> usize {
        let inst = &self.instance;
        let is_t = inst.terminal_mask();
        (0..inst.graph.n()).filter(|&v| !is_t[v] && inst.graph.neighbors(v).iter().any(|&u| is_t[u])).count()
    }
}

pub fn mwc_root_reduce(inst: &MwcInstance) -> Result<MwcReduced, FrontendError> {
    let pre = mwc_simple_preprocess(&MwcInstance { budget: None, ..inst.clone() })?;
    let (csp, map) = mwc_to_csp(&pre);
    let red = crate::solver::preprocess(&csp, false);
    let work = &red.instance;
    let keep: Vec<usize> = work.alive_vertices().collect();
    let used: Vec<bool> = (0..inst.terminals.len()).map(|i| keep.iter().any(|&v| work.phi(v) == Some(i as u32))).collect();
    let mut original: Vec<usize> = inst.terminals.iter().zip(&used).filter(|(_, &u)| u).map(|(&t, _)| t).collect();
    let mut new_terminal = vec![usize::MAX; inst.terminals.len()];
    let mut next = 0;
    for (i, &u) in used.iter().enumerate() {
        if u {
            new_terminal[i] = next;
            next += 1;
        }
    }
    let terminals: Vec<usize> = (0..original.len()).collect();
    let mut index = vec![usize::MAX; csp.num_ids()];
    for &v in &keep {
        index[v] = original.len();
        original.push(map.to_original[v]);
    }
    let mut g = Graph::new(original.len());
    for &v in &keep {
        if let Some(a) = work.phi(v) {
            g.add_edge(new_terminal[a as usize], index[v]);
        }
        for (u, _) in work.constraints_at(v) {
            g.add_edge(index[v], index[u]);
        }
    }
    let mut deleted: Vec<usize> = pre.forced.iter().copied().chain(red.deleted.iter().map(|&v| map.to_original[v])).collect();
    deleted.sort_unstable();
    let mut undeletable: Vec<usize> = red.undeletable.iter().map(|&v| map.to_original[v]).collect();
    undeletable.sort_unstable();
    let resolved_terminals = used.iter().filter(|&&u| !u).count();
    Ok(MwcReduced { instance: MwcInstance { graph: g, terminals, budget: None }, original, deleted, undeletable, resolved_terminals })
}

/// Whether the instance has a multiway cut of size at most `k`, decided by
/// the branching solver.
pub fn mwc_within(inst: &MwcInstance, k: usize, limits: Limits) -> Option<bool> {
    let pre = match mwc_simple_preprocess(&MwcInstance { budget: Some(k), ..inst.clone() }) {
        Ok(p) => p,
        Err(_) => return Some(false),
    };
    let (csp, _) = mwc_to_csp(&pre);
    match crate::solver::solve_decision(&csp, SolverVariant::LB2, limits).outcome {
        crate::solver::Outcome::Feasible(_) => Some(true),
        crate::solver::Outcome::Infeasible => Some(false),
        crate::solver::Outcome::Timeout => None,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::{is_multiway_cut, is_oct};

    fn complete(n: usize) -> Graph {
        Graph::from_edges(n, (0..n).flat_map(|u| (u + 1..n).map(move |v| (u, v))))
    }

    #[test]
    fn oct_examples() {
        let tri = complete(3);
        let (csp, _) = oct_to_csp(&OctInstance { graph: tri.clone(), budget: Some(1) });
        assert_eq!(csp.dump().lines().count(), 3);
        for (g, opt) in [(tri, 1), (Graph::from_edges(4, [(0, 1), (1, 2), (2, 3), (3, 0)]), 0), (complete(4), 2)] {
            let s = solve_oct(&g, SolverVariant::LB2, Limits::none());
            assert_eq!(s.opt, Some(opt));
            assert!(is_oct(&g, &s.solution));
        }
    }

    #[test]
    fn star_center_is_forced() {
        let g = Graph::from_edges(4, [(3, 0), (3, 1), (3, 2)]);
        let mut inst = MwcInstance::new(g, vec![0, 1, 2]);
        inst.budget = Some(1);
        let pre = mwc_simple_preprocess(&inst).unwrap();
        assert_eq!(pre.forced, vec![3]);
        assert_eq!(pre.instance.budget, Some(0));
        let (csp, map) = mwc_to_csp(&pre);
        assert_eq!(csp.alive_count(), 0);
        assert_eq!(lift_solution(&map, &[]), vec![3]);
        assert_eq!(solve_mwc(&inst, SolverVariant::CSP, Limits::none()).unwrap().opt, Some(1));
    }

    #[test]
    fn chain_maps_to_one_equality() {
        // t1 - a - b - t2 with ids t1=0, a=1, b=2, t2=3
        let inst = MwcInstance::new(Graph::from_edges(4, [(0, 1), (1, 2), (2, 3)]), vec![0, 3]);
        let pre = mwc_simple_preprocess(&inst).unwrap();
        assert!(pre.forced.is_empty());
        let (csp, map) = mwc_to_csp(&pre);
        assert_eq!(map.to_original, vec![1, 2]);
        assert_eq!((csp.phi(0), csp.phi(1)), (Some(0), Some(1)));
        assert_eq!(csp.dump().lines().count(), 1);
        assert_eq!(lift_solution(&map, &[0]), vec![1]);
        let s = solve_mwc(&inst, SolverVariant::LB1, Limits::none()).unwrap();
        assert_eq!(s.opt, Some(1));
        assert!(is_multiway_cut(&inst, &s.solution));
    }

    #[test]
    fn terminal_edge_is_rejected() {
        let inst = MwcInstance::new(Graph::from_edges(2, [(0, 1)]), vec![0, 1]);
        assert_eq!(mwc_simple_preprocess(&inst).unwrap_err(), FrontendError::TerminalEdge(0, 1));
    }

    #[test]
    fn separate_terminals_need_nothing() {
        let inst = MwcInstance::new(Graph::new(2), vec![0, 1]);
        let (csp, _) = mwc_to_csp(&mwc_simple_preprocess(&inst).unwrap());
        assert_eq!(csp.num_ids(), 0);
        assert_eq!(solve_mwc(&inst, SolverVariant::LB2, Limits::none()).unwrap().opt, Some(0));
    }

    #[test]
    fn forced_plus_empty_solution() {
        let g = Graph::from_edges(4, [(2, 0), (2, 1), (3, 0), (3, 1)]);
        let pre = mwc_simple_preprocess(&MwcInstance::new(g, vec![0, 1])).unwrap();
        let (_, map) = mwc_to_csp(&pre);
        assert_eq!(lift_solution(&map, &[]).len(), 2);
    }
}
