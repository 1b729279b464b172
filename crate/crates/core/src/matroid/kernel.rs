//! Representative-set kernels for OCT and MWC.
//!
//! OCT. Let `Y` be an odd cycle transversal and `c` a 2-colouring of `G − Y`.
//! The auxiliary graph `H` is `G − Y` plus two terminals `y_0, y_1` per
//! `y ∈ Y`, where `y_j` is adjacent to the neighbours of `y` of colour `j`.
//! Fixing which vertices of `Y` a solution keeps and their colours splits the
//! terminals into sides `A`, `B` and the deleted pairs `C`; the rest of the
//! solution is then a minimum vertex cut between `A ∪ C` and `B ∪ C` in `H`
//! (cuts may contain terminals, and `C` lies in every such cut). A
//! non-terminal that lies in no minimum cut for any pair of terminal subsets
//! can be made undeletable.
//!
//! Such "essential" vertices are captured by one triple per non-terminal `v`:
//! its sink-only copy (in-arcs from `N(v)`) in two independent copies of the
//! gammoid of `H` with the terminals as sources, and `v` itself in a uniform
//! matroid of rank `|Y|`. If `v` lies in every minimum cut, take `X_A` and
//! `X_B`, the minimum cuts closest to either side: the triple of `v` extends
//! `X_A` (first copy), `X_B` (second copy) and `X_A − v` (uniform) to an
//! independent set, and no other non-terminal's triple does. So `v` survives
//! in every representative set. The ranks `2|Y|, 2|Y|, |Y|` bound the set
//! by `4|Y|³`.
//!
//! MWC. Components of `G − T` are independent subproblems. Per component,
//! one gammoid per adjacent terminal `t` with sources `N(t)`, plus a uniform
//! matroid of rank `k`; each non-terminal contributes its sink copy in every
//! gammoid and itself in the uniform part. Vertices outside the
//! representative set are bypassed one at a time, and each bypass is checked
//! with an exact decision solve at budget `k` before it is kept.

use rand::prelude::*;
use rand_chacha::ChaCha8Rng;
use thiserror::Error;

use super::field::{Field, DEFAULT_PRIME};
use super::gammoid::{gammoid_representation, uniform_representation, Digraph};
use super::repset::{binomial, representative_product, RepSetError};
use crate::frontends::mwc_within;
use crate::graph::{components_avoiding, is_oct, two_coloring, Graph, MwcInstance};
use crate::solver::Limits;

#[derive(Clone, Copy, Debug)]
pub struct KernelOptions {
    pub prime: u64,
    pub seed: u64,
    /// Ceiling on the bytes held by the representative-set basis.
    pub mem_limit: Option<u128>,
}

impl Default for KernelOptions {
    fn default() -> Self {
        KernelOptions { prime: DEFAULT_PRIME, seed: 0, mem_limit: Some(2 << 30) }
    }
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum KernelError {
    #[error("the given set is not an odd cycle transversal")]
    NotTransversal,
    #[error("round {round}: {source}")]
    Resource { round: usize, source: RepSetError },
    #[error("the instance has no multiway cut of size {0}")]
    BudgetTooSmall(usize),
    #[error("{0} is not the optimum: a smaller multiway cut exists")]
    NotOptimal(usize),
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct KernelStats {
    pub rounds: usize,
    /// Total rank of the direct sum in the last round.
    pub rank: usize,
    pub family: usize,
    pub representative: usize,
    pub peak_bytes: u128,
    /// Size bound asserted on the representative set.
    pub bound: u128,
    /// Bypasses undone by the exact check (MWC only).
    pub rejected: usize,
}

impl KernelStats {
    fn record(&mut self, rank: usize, family: usize, representative: usize, peak: u128) {
        self.rounds += 1;
        self.rank = rank;
        self.family = family;
        self.representative = representative;
        self.peak_bytes = self.peak_bytes.max(peak);
    }
}

/// Odd cycle transversal from a maximal induced bipartite subgraph, grown in
/// order of increasing degree.
pub fn greedy_oct(g: &Graph) -> Vec<usize> {
    let n = g.n();
    let mut parent: Vec<usize> = (0..n).collect();
    let mut parity = vec![0u8; n];
    fn find(parent: &mut [usize], parity: &mut [u8], v: usize) -> (usize, u8) {
        if parent[v] == v {
            return (v, 0);
        }
        let (r, p) = find(parent, parity, parent[v]);
        parent[v] = r;
        parity[v] ^= p;
        (r, parity[v])
    }
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by_key(|&v| (g.degree(v), v));
    let mut kept = vec![false; n];
    let mut y = Vec::new();
    for v in order {
        let mut side: Vec<(usize, u8)> = Vec::new();
        let mut ok = true;
        for &u in g.neighbors(v) {
            if !kept[u] {
                continue;
            }
            let (r, p) = find(&mut parent, &mut parity, u);
            match side.iter().find(|&&(r2, _)| r2 == r) {
                Some(&(_, p2)) if p2 != p => {
                    ok = false;
                    break;
                }
                Some(_) => {}
                None => side.push((r, p)),
            }
        }
        if !ok {
            y.push(v);
            continue;
        }
        kept[v] = true;
        // v takes the colour opposite to each neighbour
        for (r, p) in side {
            parent[r] = v;
            parity[r] = p ^ 1;
        }
    }
    y.sort_unstable();
    y
}

#[derive(Clone, Debug)]
pub struct OctKernel {
    pub y: Vec<usize>,
    pub undeletable: Vec<usize>,
    /// `V ∖ undeletable`: `Y` and the vertices kept by the last
    /// representative set.
    pub deletable: Vec<usize>,
    pub stats: KernelStats,
}

/// Sink-only copy of every candidate, appended after the vertices of `h`.
fn with_sink_copies(h: &Graph, arcs_ok: impl Fn(usize, usize) -> bool, cands: &[usize]) -> (Digraph, Vec<usize>) {
    let mut d = Digraph::new(h.n());
    for (u, v) in h.edges() {
        if arcs_ok(u, v) {
            d.add_arc(u, v);
            d.add_arc(v, u);
        }
    }
    let mut sinks = Vec::with_capacity(cands.len());
    for &v in cands {
        let s = d.add_vertex();
        for &u in h.neighbors(v) {
            if arcs_ok(u, v) {
                d.add_arc(u, s);
            }
        }
        sinks.push(s);
    }
    (d, sinks)
}

/// Proclaims vertices undeletable one at a time while some vertex outside
/// `Y` falls outside the representative set; every proclamation preserves
/// the optimum.
pub fn oct_kernel(g: &Graph, y: &[usize], opts: &KernelOptions) -> Result<OctKernel, KernelError> {
    let n = g.n();
    let mut y: Vec<usize> = y.to_vec();
    y.sort_unstable();
    y.dedup();
    if !is_oct(g, &y) {
        return Err(KernelError::NotTransversal);
    }
    let mut is_y = vec![false; n];
    for &v in &y {
        is_y[v] = true;
    }
    let colour = two_coloring(g, &is_y).expect("G − Y is bipartite");
    let f = Field::new(opts.prime);
    let mut rng = ChaCha8Rng::seed_from_u64(opts.seed);
    let ny = y.len();
    let t = 2 * ny;
    let bound = 4 * (ny as u128).pow(3);
    let mut stats = KernelStats { bound: 8 * (ny as u128).pow(3), ..Default::default() };
    let mut undeletable = vec![false; n];
    let mut kept: Vec<usize> = Vec::new();
    loop {
        let mut h = Graph::new(n + t);
        for (u, v) in g.edges() {
            if !is_y[u] && !is_y[v] {
                h.add_edge(u, v);
            }
        }
        for (i, &yv) in y.iter().enumerate() {
            for &u in g.neighbors(yv) {
                if !is_y[u] {
                    h.add_edge(n + 2 * i + colour[u] as usize, u);
                }
            }
        }
        for v in (0..n).filter(|&v| undeletable[v]) {
            h.bypass(v);
        }
        let cands: Vec<usize> = (0..n).filter(|&v| !is_y[v] && !undeletable[v]).collect();
        if cands.is_empty() {
            kept.clear();
            break;
        }
        let (d, sinks) = with_sink_copies(&h, |_, _| true, &cands);
        let sources: Vec<usize> = (n..n + t).collect();
        let m1 = gammoid_representation(f, &d, &sources, &sinks, &mut rng);
        let m2 = gammoid_representation(f, &d, &sources, &sinks, &mut rng);
        let m3 = uniform_representation(f, &cands, ny);
        let tuples: Vec<Vec<usize>> = (0..cands.len()).map(|j| vec![j, j, j]).collect();
        let res = representative_product(&[&m1, &m2, &m3], &tuples, opts.mem_limit).map_err(|source| KernelError::Resource { round: stats.rounds, source })?;
        stats.record(res.ranks.iter().sum(), tuples.len() - res.dependent, res.kept.len(), res.peak_bytes);
        kept = res.kept.iter().map(|&j| cands[j]).collect();
        assert!(kept.len() as u128 <= bound, "representative set exceeds 4|Y|^3");
        assert!((kept.len() + ny) as u128 <= stats.bound.max(ny as u128), "|Z| exceeds 8|Y|^3");
        let mut in_z = vec![false; n];
        for &v in &kept {
            in_z[v] = true;
        }
        match cands.iter().find(|&&v| !in_z[v]) {
            Some(&x) => undeletable[x] = true,
            None => break,
        }
    }
    let mut deletable: Vec<usize> = y.iter().copied().chain(kept).collect();
    deletable.sort_unstable();
    let undeletable: Vec<usize> = (0..n).filter(|&v| undeletable[v]).collect();
    log::info!("oct kernel: |Y| {} rounds {} |Z| {} bound {}", ny, stats.rounds, deletable.len(), stats.bound);
    Ok(OctKernel { y, undeletable, deletable, stats })
}

#[derive(Clone, Debug)]
pub struct MwcKernel {
    /// Remaining vertices, terminals first, with budget `k`.
    pub instance: MwcInstance,
    /// Id in the input of every vertex of `instance`.
    pub original: Vec<usize>,
    /// Input ids of the bypassed vertices, in order.
    pub bypassed: Vec<usize>,
    pub stats: KernelStats,
}

/// Reduced copy of `inst` with the same optimum `k`. Expects the root
/// reduction to have been applied, so that `|N(T)| ≤ 2k`.
pub fn mwc_kernel(inst: &MwcInstance, k: usize, opts: &KernelOptions) -> Result<MwcKernel, KernelError> {
    let n = inst.graph.n();
    let is_t = inst.terminal_mask();
    if mwc_within(inst, k, Limits::none()) != Some(true) {
        return Err(KernelError::BudgetTooSmall(k));
    }
    if k > 0 && mwc_within(inst, k - 1, Limits::none()) == Some(true) {
        return Err(KernelError::NotOptimal(k));
    }
    let f = Field::new(opts.prime);
    let mut rng = ChaCha8Rng::seed_from_u64(opts.seed);
    let mut g = inst.graph.clone();
    let mut removed = vec![false; n];
    let mut rejected = vec![false; n];
    let mut bypassed = Vec::new();
    let mut stats = KernelStats::default();
    'restart: loop {
        let cands: Vec<usize> = (0..n).filter(|&v| !is_t[v] && !removed[v]).collect();
        if cands.is_empty() {
            break;
        }
        let (d, sinks) = with_sink_copies(&g, |u, v| !is_t[u] && !is_t[v], &cands);
        let mut sink_of = vec![usize::MAX; n];
        for (&v, &s) in cands.iter().zip(&sinks) {
            sink_of[v] = s;
        }
        let blocked: Vec<bool> = (0..n).map(|v| is_t[v] || removed[v]).collect();
        let mut in_z = vec![false; n];
        let (mut rank, mut family, mut kept, mut peak, mut bound) = (0, 0, 0, 0, 0);
        for comp in components_avoiding(&g, &blocked) {
            let mut in_comp = vec![false; n];
            for &v in &comp {
                in_comp[v] = true;
            }
            let comp_sinks: Vec<usize> = comp.iter().map(|&v| sink_of[v]).collect();
            let mut parts = Vec::new();
            for &t in &inst.terminals {
                let sources: Vec<usize> = g.neighbors(t).iter().copied().filter(|&u| in_comp[u]).collect();
                if !sources.is_empty() {
                    parts.push(gammoid_representation(f, &d, &sources, &comp_sinks, &mut rng));
                }
            }
            parts.push(uniform_representation(f, &comp, k));
            let a = parts.len();
            let refs: Vec<_> = parts.iter().collect();
            let tuples: Vec<Vec<usize>> = (0..comp.len()).map(|j| vec![j; a]).collect();
            let res = representative_product(&refs, &tuples, opts.mem_limit).map_err(|source| KernelError::Resource { round: stats.rounds, source })?;
            let r: usize = res.ranks.iter().sum();
            let b = binomial(r, a);
            assert!(res.kept.len() as u128 <= b, "representative set exceeds C(r, |T|+1)");
            rank = rank.max(r);
            family += tuples.len() - res.dependent;
            kept += res.kept.len();
            peak = peak.max(res.peak_bytes);
            bound += b;
            for &j in &res.kept {
                in_z[comp[j]] = true;
            }
        }
        stats.record(rank, family, kept, peak);
        stats.bound = bound;
        let outside: Vec<usize> = cands.iter().copied().filter(|&x| !in_z[x] && !rejected[x]).collect();
        for x in outside {
            let mut trial = g.clone();
            trial.bypass(x);
            let probe = MwcInstance { graph: trial, terminals: inst.terminals.clone(), budget: None };
            if mwc_within(&probe, k, Limits::none()) == Some(true) {
                g = probe.graph;
                removed[x] = true;
                bypassed.push(x);
                continue 'restart;
            }
            rejected[x] = true;
            stats.rejected += 1;
        }
        break;
    }
    let keep: Vec<usize> = inst.terminals.iter().copied().chain((0..n).filter(|&v| !is_t[v] && !removed[v])).collect();
    let (graph, original) = g.induced(&keep);
    let terminals = (0..inst.terminals.len()).collect();
    log::info!("mwc kernel: k {} rounds {} left {} rejected {}", k, stats.rounds, keep.len(), stats.rejected);
    Ok(MwcKernel { instance: MwcInstance { graph, terminals, budget: Some(k) }, original, bypassed, stats })
}
