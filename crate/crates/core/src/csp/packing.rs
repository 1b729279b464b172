//! Maximum half-integral packings of conflicting paths and minimum
//! half-integral covers.
//!
//! Binary domains without zero rows have a mirror symmetry `(v, a) ↔ (v, 1-a)`
//! on the lifted graph, so a maximum packing is a maximum set of node-disjoint
//! source–sink paths there and a minimum node cut halves into a cover. Other
//! instances go through the bundle-flow LP and the path-potential cover LP;
//! every cover is certified by exact integer shortest paths before use.

use std::cmp::Reverse;
use std::collections::BinaryHeap;

use minilp::{ComparisonOp, OptimizationDirection, Problem};

use super::instance::CspInstance;
use super::lifted::{ImplPath, Lifted};
use crate::flow::Dinic;

const EPS: f64 = 1e-6;
const BIG: i64 = 1 << 40;

/// Vertex weighting with values in `{0, 1/2, 1}`, stored doubled.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct HalfIntegralCover {
    pub twice: Vec<u8>,
}

impl HalfIntegralCover {
    pub fn zero(n: usize) -> Self {
        HalfIntegralCover { twice: vec![0; n] }
    }

    /// Doubled total weight.
    pub fn weight_twice(&self) -> usize {
        self.twice.iter().map(|&w| w as usize).sum()
    }

    pub fn is_half(&self, v: usize) -> bool {
        self.twice[v] == 1
    }

    /// Doubled weight of a path, counting repeated vertices.
    pub fn path_weight_twice(&self, p: &ImplPath) -> usize {
        p.vertices().map(|v| self.twice[v] as usize).sum()
    }
}

/// Multiset of conflicting paths loading every vertex at most twice.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct HalfIntegralPacking {
    pub paths: Vec<ImplPath>,
}

impl HalfIntegralPacking {
    pub fn len(&self) -> usize {
        self.paths.len()
    }

    pub fn is_empty(&self) -> bool {
        self.paths.is_empty()
    }

    pub fn load(&self, n: usize) -> Vec<u32> {
        let mut load = vec![0; n];
        for p in &self.paths {
            for v in p.vertices() {
                load[v] += 1;
            }
        }
        load
    }

    pub fn is_valid(&self, inst: &CspInstance) -> bool {
        self.paths.iter().all(|p| p.is_conflicting(inst)) && self.load(inst.num_ids()).iter().all(|&l| l <= 2)
    }
}

/// Result of the relaxation at one search node.
#[derive(Clone, Debug)]
pub struct PackingState {
    /// Maximum packing size `|F|`, equal to the doubled minimum cover weight.
    pub value: usize,
    /// Explicit packing when one was extracted; maximum iff its length is
    /// `value`, otherwise a greedy fallback.
    pub packing: Option<HalfIntegralPacking>,
    /// Minimum cover, present when certified.
    pub cover: Option<HalfIntegralCover>,
    /// Number of lifted nodes, for statistics.
    pub lifted_nodes: usize,
}

impl PackingState {
    pub fn packing(&self) -> HalfIntegralPacking {
        self.packing.clone().unwrap_or_default()
    }
}

/// Computes a maximum half-integral packing. `want_paths` asks for an
/// explicit path list even where the value alone would do.
pub fn max_halfintegral_packing(inst: &CspInstance, want_paths: bool) -> PackingState {
    let n = inst.num_ids();
    let l = Lifted::build(inst);
    if l.is_empty() {
        return PackingState { value: 0, packing: Some(HalfIntegralPacking::default()), cover: Some(HalfIntegralCover::zero(n)), lifted_nodes: 0 };
    }
    if inst.domain_size() == 2 && !inst.has_zero_rows() {
        return flow_route(&l, n);
    }
    lp_route(&l, n, want_paths)
}

/// Cover of the state, if certified.
pub fn extract_cover(state: &PackingState) -> Option<HalfIntegralCover> {
    state.cover.clone()
}

fn flow_route(l: &Lifted, n: usize) -> PackingState {
    let m = l.len();
    let (s, t) = (2 * m, 2 * m + 1);
    let mut net = Dinic::new(2 * m + 2);
    let mut node_arc = vec![0; m];
    for i in 0..m {
        node_arc[i] = net.add_arc(2 * i, 2 * i + 1, 1);
        for &j in l.succs(i) {
            net.add_arc(2 * i + 1, 2 * j, BIG);
        }
        if l.is_source[i] {
            net.add_arc(s, 2 * i, BIG);
        }
        if l.is_sink[i] {
            net.add_arc(2 * i + 1, t, BIG);
        }
    }
    let value = net.max_flow(s, t, BIG) as usize;

    let mut paths = Vec::with_capacity(value);
    for e in net.arcs_from(s).collect::<Vec<_>>() {
        if e % 2 == 1 || net.flow_on(e) == 0 {
            continue;
        }
        let mut x = net.arc_target(e) / 2;
        let mut steps = vec![l.step(x)];
        'walk: loop {
            for a in net.arcs_from(2 * x + 1) {
                if a % 2 == 0 && net.flow_on(a) > 0 {
                    let y = net.arc_target(a);
                    if y == t {
                        break 'walk;
                    }
                    x = y / 2;
                    steps.push(l.step(x));
                    continue 'walk;
                }
            }
            unreachable!("flow path stopped before the sink");
        }
        paths.push(ImplPath { steps });
    }
    debug_assert_eq!(paths.len(), value);

    let reach = push_cut_away(&mut net, l, n, &node_arc, s, t);
    let mut twice = vec![0u8; n];
    for i in 0..m {
        if reach[2 * i] && !reach[2 * i + 1] {
            twice[l.vertex(i)] += 1;
        }
    }
    let cover = HalfIntegralCover { twice };
    let ok = cover.weight_twice() == value && cover_is_valid(l, &cover);
    debug_assert!(ok, "cut cover failed certification");
    PackingState { value, packing: Some(HalfIntegralPacking { paths }), cover: ok.then_some(cover), lifted_nodes: m }
}

/// Flow-route analogue of `push_away_from_sources`: a vertex touched by the
/// source side of the cut has its copies made uncuttable when that leaves
/// the sink unreachable, so the closest cut moves past it. Returns the final
/// source side.
fn push_cut_away(net: &mut Dinic, l: &Lifted, n: usize, node_arc: &[usize], s: usize, t: usize) -> Vec<bool> {
    let mut copies: Vec<Vec<usize>> = vec![Vec::new(); n];
    for i in 0..l.len() {
        copies[l.vertex(i)].push(i);
    }
    let mut tried = vec![false; n];
    let mut reach = net.residual_reach(s);
    loop {
        let next = (0..l.len()).filter(|&i| reach[2 * i] && !tried[l.vertex(i)]).map(|i| l.vertex(i)).min();
        let Some(v) = next else { return reach };
        tried[v] = true;
        for &i in &copies[v] {
            net.add_capacity(node_arc[i], BIG);
        }
        let r = net.residual_reach(s);
        if r[t] {
            for &i in &copies[v] {
                net.add_capacity(node_arc[i], -BIG);
            }
        } else {
            reach = r;
        }
    }
}

/// Exact check that every source–sink path of `l` has doubled weight ≥ 2.
pub fn cover_is_valid(l: &Lifted, cover: &HalfIntegralCover) -> bool {
    let m = l.len();
    let w = |i: usize| cover.twice[l.vertex(i)] as u32;
    let mut dist = vec![u32::MAX; m];
    let mut heap = BinaryHeap::new();
    for i in 0..m {
        if l.is_source[i] {
            dist[i] = w(i);
            heap.push(Reverse((dist[i], i)));
        }
    }
    while let Some(Reverse((dx, x))) = heap.pop() {
        if dx > dist[x] {
            continue;
        }
        if dx >= 2 {
            continue;
        }
        for &y in l.succs(x) {
            let nd = dx + w(y);
            if nd < dist[y] {
                dist[y] = nd;
                heap.push(Reverse((nd, y)));
            }
        }
    }
    (0..m).all(|i| !l.is_sink[i] || dist[i] >= 2)
}

fn lp_route(l: &Lifted, n: usize, want_paths: bool) -> PackingState {
    let m = l.len();
    let (tau2, cover) = match cover_lp(l, n) {
        Some(r) => r,
        None => {
            log::warn!("cover LP failed on a lifted graph with {m} nodes");
            return PackingState { value: 0, packing: None, cover: None, lifted_nodes: m };
        }
    };
    let mut state = PackingState { value: tau2, packing: None, cover, lifted_nodes: m };
    if want_paths {
        match packing_lp(l, n) {
            Some(p) if p.len() == tau2 => state.packing = Some(p),
            other => {
                if let Some(p) = other {
                    log::warn!("bundle flow of size {} disagrees with doubled cover value {tau2}", p.len());
                }
                state.packing = Some(greedy_packing(l, n));
            }
        }
    }
    state
}

/// Minimises `Σ f(v)` subject to every source–sink path having weight ≥ 1,
/// using potentials `p` bounded by path weights. Returns the doubled optimum
/// and the rounded cover when it certifies.
fn cover_lp(l: &Lifted, n: usize) -> Option<(usize, Option<HalfIntegralCover>)> {
    let m = l.len();
    let mut pb = Problem::new(OptimizationDirection::Minimize);
    let mut fvar = vec![None; n];
    for i in 0..m {
        let v = l.vertex(i);
        if fvar[v].is_none() {
            fvar[v] = Some(pb.add_var(1.0, (0.0, 1.0)));
        }
    }
    let p: Vec<_> = (0..m).map(|i| pb.add_var(0.0, if l.is_sink[i] { (1.0, 1.0) } else { (0.0, 1.0) })).collect();
    for x in 0..m {
        if l.is_source[x] {
            pb.add_constraint([(p[x], 1.0), (fvar[l.vertex(x)].unwrap(), -1.0)], ComparisonOp::Le, 0.0);
        }
        for &y in l.succs(x) {
            pb.add_constraint([(p[y], 1.0), (p[x], -1.0), (fvar[l.vertex(y)].unwrap(), -1.0)], ComparisonOp::Le, 0.0);
        }
    }
    let sol = pb.solve().ok()?;
    let obj2 = 2.0 * sol.objective();
    let tau2 = obj2.round();
    if (obj2 - tau2).abs() > 1e-4 {
        log::warn!("cover LP optimum {} is not half-integral", sol.objective());
        return Some(((obj2 - EPS).ceil() as usize, None));
    }
    let sol = push_away_from_sources(l, n, &fvar, sol);
    let mut twice = vec![0u8; n];
    let mut half_integral = true;
    for v in 0..n {
        if let Some(var) = fvar[v] {
            let g = 2.0 * sol[var];
            let r = g.round();
            if (g - r).abs() > 1e-4 {
                half_integral = false;
            }
            twice[v] = r.clamp(0.0, 2.0) as u8;
        }
    }
    let cover = HalfIntegralCover { twice };
    let certified = half_integral && cover.weight_twice() == tau2 as usize && cover_is_valid(l, &cover);
    if !certified {
        log::debug!("cover LP vertex not half-integral; cover left uncertified");
    }
    Some((tau2 as usize, certified.then_some(cover)))
}

/// Grows the weight-zero region reachable from the sources as far as the
/// optimum allows: each vertex on its frontier is tentatively fixed to zero
/// and kept there if the optimum does not rise. Feasible zero regions are
/// closed under union, so a vertex that fails once never succeeds later.
fn push_away_from_sources(l: &Lifted, n: usize, fvar: &[Option<minilp::Variable>], mut sol: minilp::Solution) -> minilp::Solution {
    let m = l.len();
    let target = sol.objective() + 1e-7;
    let mut copies: Vec<Vec<usize>> = vec![Vec::new(); n];
    let mut has_pred = vec![Vec::new(); m];
    for x in 0..m {
        copies[l.vertex(x)].push(x);
        for &y in l.succs(x) {
            has_pred[y].push(x);
        }
    }
    let mut zero = vec![false; n];
    let mut tried = vec![false; n];
    let mut in_region = vec![false; m];
    let is_zero_now = |sol: &minilp::Solution, v: usize| sol[fvar[v].unwrap()] < EPS;

    // region nodes: reachable from sources through zero vertices
    let enter = |x: usize, in_region: &[bool]| l.is_source[x] || has_pred[x].iter().any(|&p| in_region[p]);
    let mut frontier: Vec<usize> = (0..m).filter(|&x| l.is_source[x]).map(|x| l.vertex(x)).collect();
    frontier.sort_unstable();
    frontier.dedup();
    while let Some(v) = frontier.pop() {
        if zero[v] || tried[v] {
            continue;
        }
        let entering: Vec<usize> = copies[v].iter().copied().filter(|&x| enter(x, &in_region)).collect();
        if entering.is_empty() {
            continue;
        }
        // minilp occasionally reports a near-zero fix as infeasible; such a
        // vertex goes through the full test instead
        let quick = if is_zero_now(&sol, v) { sol.clone().fix_var(fvar[v].unwrap(), 0.0).ok() } else { None };
        let accept = if let Some(next) = quick {
            sol = next;
            true
        } else {
            tried[v] = true;
            // a zero-weight source–sink path would make the LP infeasible
            let mut reach = in_region.clone();
            let mut stack = entering.clone();
            for &x in &stack {
                reach[x] = true;
            }
            let mut blocked = false;
            while let Some(x) = stack.pop() {
                if l.is_sink[x] {
                    blocked = true;
                    break;
                }
                for &y in l.succs(x) {
                    if !reach[y] && (zero[l.vertex(y)] || l.vertex(y) == v) {
                        reach[y] = true;
                        stack.push(y);
                    }
                }
            }
            if blocked {
                false
            } else {
                let var = fvar[v].unwrap();
                match sol.clone().fix_var(var, 0.0) {
                    Ok(next) if next.objective() <= target => {
                        sol = next;
                        true
                    }
                    _ => false,
                }
            }
        };
        if !accept {
            continue;
        }
        zero[v] = true;
        let mut stack = entering;
        for &x in &stack {
            in_region[x] = true;
        }
        while let Some(x) = stack.pop() {
            for &y in l.succs(x) {
                let w = l.vertex(y);
                if in_region[y] {
                    continue;
                }
                if zero[w] {
                    in_region[y] = true;
                    stack.push(y);
                } else if !tried[w] {
                    frontier.push(w);
                }
            }
        }
    }
    sol
}

/// Repeatedly takes a shortest conflicting path within the remaining vertex
/// capacities. Maximal, not necessarily maximum.
fn greedy_packing(l: &Lifted, n: usize) -> HalfIntegralPacking {
    let m = l.len();
    let mut cap = vec![2u32; n];
    let mut paths = Vec::new();
    loop {
        let mut pred = vec![usize::MAX; m];
        let mut seen = vec![false; m];
        let mut queue: std::collections::VecDeque<usize> = (0..m).filter(|&x| l.is_source[x] && cap[l.vertex(x)] > 0).collect();
        for &x in &queue {
            seen[x] = true;
        }
        let mut end = None;
        while let Some(x) = queue.pop_front() {
            if l.is_sink[x] {
                end = Some(x);
                break;
            }
            for &y in l.succs(x) {
                if !seen[y] && cap[l.vertex(y)] > 0 {
                    seen[y] = true;
                    pred[y] = x;
                    queue.push_back(y);
                }
            }
        }
        let Some(mut x) = end else { break };
        let mut nodes = vec![x];
        while pred[x] != usize::MAX {
            x = pred[x];
            nodes.push(x);
        }
        nodes.reverse();
        let mut need = vec![0u32; n];
        for &x in &nodes {
            need[l.vertex(x)] += 1;
        }
        if nodes.iter().any(|&x| need[l.vertex(x)] > cap[l.vertex(x)]) {
            break;
        }
        for &x in &nodes {
            cap[l.vertex(x)] -= 1;
        }
        paths.push(ImplPath { steps: nodes.iter().map(|&x| l.step(x)).collect() });
    }
    HalfIntegralPacking { paths }
}

/// Bundle-flow LP: arc flows in the lifted graph with every vertex carrying
/// at most two units over all its copies. Returns the decomposed packing when
/// the optimum found is integral.
fn packing_lp(l: &Lifted, n: usize) -> Option<HalfIntegralPacking> {
    let m = l.len();
    let mut pb = Problem::new(OptimizationDirection::Maximize);
    // Total arc flow is at most 2n, so this tie-break never trades away a
    // path; preferring short paths keeps basic solutions integral in practice.
    let arc_cost = 1.0 / (4 * n + 2) as f64;
    let arc: Vec<_> = (0..l.out.len()).map(|_| pb.add_var(-arc_cost, (0.0, 2.0))).collect();
    let src: Vec<_> = (0..m).map(|i| l.is_source[i].then(|| pb.add_var(1.0, (0.0, 2.0)))).collect();
    let snk: Vec<_> = (0..m).map(|i| l.is_sink[i].then(|| pb.add_var(0.0, (0.0, 2.0)))).collect();
    let mut inflow: Vec<Vec<usize>> = vec![Vec::new(); m];
    for x in 0..m {
        for e in l.out_start[x]..l.out_start[x + 1] {
            inflow[l.out[e]].push(e);
        }
    }
    let mut through: Vec<Vec<(minilp::Variable, f64)>> = vec![Vec::new(); n];
    for x in 0..m {
        let mut cons: Vec<(minilp::Variable, f64)> = Vec::new();
        let mut into: Vec<(minilp::Variable, f64)> = inflow[x].iter().map(|&e| (arc[e], 1.0)).collect();
        if let Some(s) = src[x] {
            into.push((s, 1.0));
        }
        cons.extend(into.iter().copied());
        for e in l.out_start[x]..l.out_start[x + 1] {
            cons.push((arc[e], -1.0));
        }
        if let Some(t) = snk[x] {
            cons.push((t, -1.0));
        }
        pb.add_constraint(cons, ComparisonOp::Eq, 0.0);
        through[l.vertex(x)].extend(into);
    }
    for terms in through.into_iter().filter(|t| !t.is_empty()) {
        pb.add_constraint(terms, ComparisonOp::Le, 2.0);
    }
    let sol = pb.solve().ok()?;
    let round = |v: f64| -> Option<u32> {
        let r = v.round();
        ((v - r).abs() < EPS).then_some(r as u32)
    };
    let mut flow: Vec<u32> = arc.iter().map(|&a| round(sol[a])).collect::<Option<_>>()?;
    let mut start: Vec<u32> = src.iter().map(|s| s.map_or(Some(0), |s| round(sol[s]))).collect::<Option<_>>()?;
    let mut end: Vec<u32> = snk.iter().map(|t| t.map_or(Some(0), |t| round(sol[t]))).collect::<Option<_>>()?;

    let mut paths = Vec::new();
    for s in 0..m {
        while start[s] > 0 {
            start[s] -= 1;
            let mut walk = vec![s];
            let mut pos = vec![usize::MAX; m];
            pos[s] = 0;
            loop {
                let x = *walk.last().unwrap();
                if walk.len() > 1 && end[x] > 0 {
                    end[x] -= 1;
                    break;
                }
                let e = (l.out_start[x]..l.out_start[x + 1]).find(|&e| flow[e] > 0);
                let Some(e) = e else {
                    if end[x] > 0 {
                        end[x] -= 1;
                        break;
                    }
                    log::warn!("bundle flow does not decompose");
                    return None;
                };
                flow[e] -= 1;
                let y = l.out[e];
                if pos[y] != usize::MAX {
                    // cycle: its flow is already consumed, cut it out
                    for &z in &walk[pos[y] + 1..] {
                        pos[z] = usize::MAX;
                    }
                    walk.truncate(pos[y] + 1);
                } else {
                    pos[y] = walk.len();
                    walk.push(y);
                }
            }
            paths.push(ImplPath { steps: walk.iter().map(|&i| l.step(i)).collect() });
        }
    }
    let packing = HalfIntegralPacking { paths };
    if packing.load(n).iter().any(|&x| x > 2) {
        log::warn!("decomposed bundle flow overloads a vertex");
        return None;
    }
    Some(packing)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::csp::{CspBuilder, Relation};

    fn chain() -> CspInstance {
        let mut b = CspBuilder::new(2, 2).budget(1);
        b.assign(0, 0).assign(1, 1).constrain(0, 1, Relation::equality(2));
        b.build().unwrap()
    }

    #[test]
    fn chain_packing_and_cover() {
        let st = max_halfintegral_packing(&chain(), true);
        assert_eq!(st.value, 2);
        let p = st.packing();
        assert!(p.is_valid(&chain()));
        assert_eq!(p.load(2), vec![2, 2]);
        // the cover is pushed off vertex 0, so vertex 1 carries all of it
        assert_eq!(extract_cover(&st).unwrap().twice, vec![0, 2]);
    }

    #[test]
    fn empty_assignment() {
        let mut b = CspBuilder::new(2, 2);
        b.constrain(0, 1, Relation::not_equal());
        let st = max_halfintegral_packing(&b.build().unwrap(), true);
        assert_eq!(st.value, 0);
        assert_eq!(st.cover.unwrap().twice, vec![0, 0]);
    }

    #[test]
    fn hub_carries_full_weight() {
        // v = 0 assigned 0, equality to three vertices assigned 1
        let mut b = CspBuilder::new(2, 4).budget(1);
        b.assign(0, 0);
        for u in 1..4 {
            b.assign(u, 1).constrain(0, u, Relation::equality(2));
        }
        let st = max_halfintegral_packing(&b.build().unwrap(), true);
        assert_eq!(st.value, 2);
        assert_eq!(st.cover.unwrap().twice, vec![2, 0, 0, 0]);
    }

    #[test]
    fn lp_route_on_three_labels() {
        // terminal-neighbour triangle with three labels, equality constraints
        let mut b = CspBuilder::new(3, 3).budget(2);
        for v in 0..3 {
            b.assign(v, v as u32);
        }
        b.constrain(0, 1, Relation::equality(3)).constrain(1, 2, Relation::equality(3)).constrain(2, 0, Relation::equality(3));
        let inst = b.build().unwrap();
        let st = max_halfintegral_packing(&inst, true);
        assert_eq!(st.value, 3);
        let cover = st.cover.unwrap();
        assert_eq!(cover.twice, vec![1, 1, 1]);
        let p = st.packing.unwrap();
        assert_eq!(p.len(), 3);
        assert!(p.is_valid(&inst));
    }
}
