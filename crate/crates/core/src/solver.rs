//! Branching over the half-integral relaxation, with optional lower-bound
//! pruning and connected-component splitting.

use std::fmt;
use std::time::{Duration, Instant};

use crate::csp::{lb1, lb2, persistence_reduce, CspError, CspInstance, PackingState};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum LowerBound {
    None,
    Lb1,
    Lb2,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct SolverVariant {
    pub lower_bound: LowerBound,
    pub split_components: bool,
}

impl SolverVariant {
    pub const CSP: SolverVariant = SolverVariant { lower_bound: LowerBound::None, split_components: false };
    pub const LB1: SolverVariant = SolverVariant { lower_bound: LowerBound::Lb1, split_components: false };
    pub const LB2: SolverVariant = SolverVariant { lower_bound: LowerBound::Lb2, split_components: false };

    pub fn with_cc(self, on: bool) -> Self {
        SolverVariant { split_components: on, ..self }
    }

    pub fn all() -> [SolverVariant; 6] {
        [Self::CSP, Self::LB1, Self::LB2, Self::CSP.with_cc(true), Self::LB1.with_cc(true), Self::LB2.with_cc(true)]
    }

    fn wants_paths(self) -> bool {
        self.lower_bound == LowerBound::Lb2
    }
}

impl fmt::Display for SolverVariant {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let base = match self.lower_bound {
            LowerBound::None => "CSP",
            LowerBound::Lb1 => "CSP LB1",
            LowerBound::Lb2 => "CSP LB2",
        };
        write!(f, "{base}{}", if self.split_components { "+CC" } else { "" })
    }
}

impl std::str::FromStr for SolverVariant {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        let lower = s.to_ascii_lowercase();
        let (base, cc) = match lower.strip_suffix("+cc") {
            Some(b) => (b, true),
            None => (lower.as_str(), false),
        };
        let v = match base {
            "csp" => Self::CSP,
            "lb1" | "csp-lb1" => Self::LB1,
            "lb2" | "csp-lb2" => Self::LB2,
            _ => return Err(format!("unknown variant {s:?} (expected csp, lb1, lb2, optionally with +cc)")),
        };
        Ok(v.with_cc(cc))
    }
}

#[derive(Clone, Copy, Debug, Default)]
pub struct Limits {
    pub deadline: Option<Instant>,
}

impl Limits {
    pub fn none() -> Self {
        Limits::default()
    }

    pub fn timeout(d: Duration) -> Self {
        Limits { deadline: Some(Instant::now() + d) }
    }

    fn expired(&self) -> bool {
        self.deadline.is_some_and(|d| Instant::now() >= d)
    }
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct SolveStats {
    pub nodes: u64,
    pub max_depth: usize,
    /// Branchings on a half-weight vertex, those after which the child's
    /// slack did not drop by at least one half, and those where it rose.
    pub branchings: u64,
    pub slack_violations: u64,
    pub slack_increases: u64,
    /// Size of the first packing at the root and the bounds it gives, in
    /// terms of the instance passed in.
    pub root_packing: usize,
    pub root_lb1: usize,
    pub root_lb2: usize,
}

impl SolveStats {
    fn absorb(&mut self, other: &SolveStats) {
        self.nodes += other.nodes;
        self.max_depth = self.max_depth.max(other.max_depth);
        self.branchings += other.branchings;
        self.slack_violations += other.slack_violations;
        self.slack_increases += other.slack_increases;
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Outcome {
    /// Deletion set in the instance's vertex ids, including deletions the
    /// instance already carried.
    Feasible(Vec<usize>),
    Infeasible,
    Timeout,
}

#[derive(Clone, Debug)]
pub struct SolveResult {
    pub outcome: Outcome,
    pub stats: SolveStats,
}

#[derive(Clone, Debug)]
pub struct OptResult {
    /// `None` on timeout.
    pub opt: Option<usize>,
    pub solution: Vec<usize>,
    pub stats: SolveStats,
}

#[derive(Debug)]
struct TimedOut;

struct Search {
    variant: SolverVariant,
    limits: Limits,
    stats: SolveStats,
}

/// Lower bound of a relaxation state as used by `variant`.
fn bound(variant: SolverVariant, st: &PackingState) -> usize {
    let b1 = lb1(st.value);
    match (variant.lower_bound, &st.packing) {
        (LowerBound::Lb2, Some(p)) => b1.max(lb2(p)),
        _ => b1,
    }
}

impl Search {

    fn node(&mut self, mut inst: CspInstance, depth: usize, parent_slack2: Option<i64>) -> Result<Option<CspInstance>, TimedOut> {
        self.stats.nodes += 1;
        self.stats.max_depth = self.stats.max_depth.max(depth);
        if self.limits.expired() {
            return Err(TimedOut);
        }
        let red = match persistence_reduce(&mut inst, self.variant.wants_paths()) {
            Ok(r) => r,
            Err(CspError::BudgetExhausted) => return Ok(None),
            Err(e) => unreachable!("{e}"),
        };
        let st = red.state;
        let k = inst.budget();
        let slack2 = 2 * k - st.value as i64;
        if let Some(ps) = parent_slack2 {
            if st.cover.is_some() && slack2 > ps - 1 {
                self.stats.slack_violations += 1;
                if slack2 > ps {
                    self.stats.slack_increases += 1;
                }
            }
        }
        match self.variant.lower_bound {
            LowerBound::None => {}
            LowerBound::Lb1 if slack2 < 0 => return Ok(None),
            LowerBound::Lb2 if k < bound(self.variant, &st) as i64 => return Ok(None),
            _ => {}
        }
        if inst.alive_count() == 0 {
            return Ok(Some(inst));
        }

        let assigned: Vec<usize> = inst.assigned().collect();
        if assigned.is_empty() {
            let v = pick_max_degree(&inst, inst.alive_vertices());
            let values: Vec<u32> = if inst.value_symmetric() { vec![0] } else { (0..inst.domain_size()).collect() };
            for a in values {
                let mut child = inst.clone();
                child.assign(v, a);
                if let Some(done) = self.node(child, depth + 1, None)? {
                    return Ok(Some(done));
                }
            }
            return Ok(None);
        }

        let (v, certified) = match &st.cover {
            Some(c) if assigned.iter().any(|&u| c.is_half(u)) => (pick_max_degree(&inst, assigned.iter().copied().filter(|&u| c.is_half(u))), true),
            _ => (pick_max_degree(&inst, assigned.iter().copied()), false),
        };
        if certified {
            self.stats.branchings += 1;
        }
        let ps = certified.then_some(slack2);
        // twins of `v` follow it into either branch
        let class: Vec<usize> = std::iter::once(v).chain(inst.twins_of(v)).collect();
        let mut child = inst.clone();
        if class.iter().all(|&u| child.proclaim_deleted(u).is_ok()) {
            if let Some(done) = self.node(child, depth + 1, ps)? {
                return Ok(Some(done));
            }
        }
        let mut child = inst;
        if class.iter().all(|&u| !child.is_alive(u) || child.proclaim_undeletable(u).is_ok()) {
            if let Some(done) = self.node(child, depth + 1, ps)? {
                return Ok(Some(done));
            }
        }
        Ok(None)
    }
}

fn pick_max_degree(inst: &CspInstance, cands: impl Iterator<Item = usize>) -> usize {
    let mut best: Option<(usize, usize)> = None;
    for v in cands {
        let d = inst.degree(v);
        if best.is_none_or(|(bd, _)| d > bd) {
            best = Some((d, v));
        }
    }
    best.expect("no candidate vertex").1
}

/// Decides whether at most `inst.budget()` further deletions suffice.
pub fn solve_decision(inst: &CspInstance, variant: SolverVariant, limits: Limits) -> SolveResult {
    let mut s = Search { variant, limits, stats: SolveStats::default() };
    let outcome = match s.node(inst.clone(), 0, None) {
        Ok(Some(done)) => Outcome::Feasible(done.deleted().to_vec()),
        Ok(None) => Outcome::Infeasible,
        Err(TimedOut) => Outcome::Timeout,
    };
    SolveResult { outcome, stats: s.stats }
}

#[derive(Clone, Debug)]
pub struct Preprocessed {
    pub deleted: Vec<usize>,
    pub undeletable: Vec<usize>,
    /// Reduced instance with an empty running solution.
    pub instance: CspInstance,
    /// First relaxation at the root, before any reduction.
    pub first: PackingState,
    /// Relaxation of the reduced instance.
    pub state: PackingState,
}

/// The reductions applied before the first branching step, with an
/// unlimited budget.
pub fn preprocess(inst: &CspInstance, want_paths: bool) -> Preprocessed {
    let mut work = inst.restrict(&inst.alive_vertices().collect::<Vec<_>>(), inst.alive_count() as i64);
    let first = crate::csp::max_halfintegral_packing(&work, want_paths);
    let red = persistence_reduce(&mut work, want_paths).expect("budget covers every vertex");
    let keep: Vec<usize> = work.alive_vertices().collect();
    let instance = work.restrict(&keep, 0);
    Preprocessed { deleted: red.deleted, undeletable: red.undeletable, instance, first, state: red.state }
}

/// Minimum deletion set by ascending budgets from the root lower bound.
pub fn solve_optimum(inst: &CspInstance, variant: SolverVariant, limits: Limits) -> OptResult {
    let mut stats = SolveStats::default();
    let pre = preprocess(inst, variant.wants_paths());
    let base = pre.deleted.len();
    stats.root_packing = pre.first.value;
    stats.root_lb1 = lb1(pre.first.value);
    stats.root_lb2 = match &pre.first.packing {
        Some(p) => stats.root_lb1.max(lb2(p)),
        None => stats.root_lb1,
    };
    let rest = solve_reduced(&pre.instance, variant, limits, bound(variant, &pre.state), &mut stats);
    let opt_and_sol = rest.map(|(o, mut sol)| {
        sol.extend(pre.deleted.iter().copied());
        sol.sort_unstable();
        (base + o, sol)
    });
    match opt_and_sol {
        Some((opt, solution)) => OptResult { opt: Some(opt), solution, stats },
        None => OptResult { opt: None, solution: Vec::new(), stats },
    }
}

/// Optimum of an already reduced instance; `None` on timeout.
fn solve_reduced(inst: &CspInstance, variant: SolverVariant, limits: Limits, lb: usize, stats: &mut SolveStats) -> Option<(usize, Vec<usize>)> {
    if variant.split_components {
        let comps = inst.components();
        if comps.len() > 1 {
            let mut total = 0;
            let mut sol = Vec::new();
            for comp in comps {
                let sub = inst.restrict(&comp, 0);
                let pre = preprocess(&sub, variant.wants_paths());
                let (o, part) = solve_reduced(&pre.instance, variant, limits, bound(variant, &pre.state), stats)?;
                total += pre.deleted.len() + o;
                sol.extend(part);
                sol.extend(pre.deleted);
            }
            return Some((total, sol));
        }
    }
    let upper = inst.alive_count();
    for k in lb..=upper.max(lb) {
        let mut at_k = inst.clone();
        at_k.set_budget(k as i64);
        let res = solve_decision(&at_k, variant, limits);
        stats.absorb(&res.stats);
        match res.outcome {
            Outcome::Feasible(sol) => return Some((sol.len(), sol)),
            Outcome::Infeasible => continue,
            Outcome::Timeout => return None,
        }
    }
    unreachable!("deleting every vertex is always feasible")
}
