//! Brute-force oracles and random instance generators shared by the
//! integration tests.
#![allow(dead_code)]

use rand::prelude::*;
use rand_chacha::ChaCha8Rng;
use sepsolve::csp::{enumerate_conflicting_paths, validate_01all, CspBuilder, CspInstance, Relation};
use sepsolve::graph::{is_multiway_cut, is_oct, Graph, MwcInstance};
use sepsolve::matroid::{Digraph, Field, MatroidRepr, Matrix};

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Subsets of `items` of size `k`, in lexicographic order.
pub fn subsets_of_size(items: &[usize], k: usize) -> Vec<Vec<usize>> {
    fn rec(items: &[usize], k: usize, start: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if cur.len() == k {
            out.push(cur.clone());
            return;
        }
        for i in start..items.len() {
            if items.len() - i < k - cur.len() {
                break;
            }
            cur.push(items[i]);
            rec(items, k, i + 1, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    rec(items, k, 0, &mut Vec::new(), &mut out);
    out
}

/// Smallest `s` with `ok(S)` for some `|S| = s`, with a witness.
pub fn min_subset(items: &[usize], mut ok: impl FnMut(&[usize]) -> bool) -> (usize, Vec<usize>) {
    for k in 0..=items.len() {
        for s in subsets_of_size(items, k) {
            if ok(&s) {
                return (k, s);
            }
        }
    }
    unreachable!("the full set must succeed")
}

pub fn brute_oct(g: &Graph) -> usize {
    let all: Vec<usize> = (0..g.n()).collect();
    min_subset(&all, |s| is_oct(g, s)).0
}

pub fn brute_mwc(inst: &MwcInstance) -> Option<usize> {
    let term = inst.terminal_mask();
    let cand: Vec<usize> = (0..inst.graph.n()).filter(|&v| !term[v]).collect();
    if !is_multiway_cut(inst, &cand) {
        return None;
    }
    Some(min_subset(&cand, |s| is_multiway_cut(inst, s)).0)
}

/// Minimum deletion set of a CSP instance ignoring its budget.
pub fn brute_csp(inst: &CspInstance) -> usize {
    let alive: Vec<usize> = inst.alive_vertices().collect();
    min_subset(&alive, |s| inst.is_solution(s)).0
}

/// Maximum multiset of conflicting paths with every vertex loaded at most
/// twice, by exhaustive search.
pub fn brute_packing(inst: &CspInstance) -> usize {
    let paths = enumerate_conflicting_paths(inst, inst.num_ids() * (inst.domain_size() as usize + 1));
    let loads: Vec<Vec<usize>> = paths.iter().map(|p| p.vertices().collect()).collect();
    let mut cap = vec![2u32; inst.num_ids()];
    fn rec(i: usize, loads: &[Vec<usize>], cap: &mut [u32], cur: usize, best: &mut usize) {
        if i == loads.len() {
            *best = (*best).max(cur);
            return;
        }
        // crude bound: every remaining path could be taken twice
        let free: u32 = cap.iter().sum();
        if cur + (free as usize) / 2 <= *best && cur + 2 * (loads.len() - i) <= *best {
            return;
        }
        for times in (0..=2).rev() {
            let mut ok = true;
            let mut used = Vec::new();
            for _ in 0..times {
                for &v in &loads[i] {
                    if cap[v] == 0 {
                        ok = false;
                    } else {
                        cap[v] -= 1;
                        used.push(v);
                    }
                }
            }
            if ok {
                rec(i + 1, loads, cap, cur + times, best);
            }
            for v in used {
                cap[v] += 1;
            }
        }
    }
    let mut best = 0;
    rec(0, &loads, &mut cap, 0, &mut best);
    best
}

/// Minimum doubled weight of a {0, 1/2, 1} cover, by exhaustive search.
pub fn brute_cover_twice(inst: &CspInstance) -> usize {
    let paths = enumerate_conflicting_paths(inst, inst.num_ids() * (inst.domain_size() as usize + 1));
    let vs: Vec<usize> = inst.alive_vertices().collect();
    let mut best = usize::MAX;
    let total = 3usize.pow(vs.len() as u32);
    let mut w = vec![0usize; inst.num_ids()];
    for code in 0..total {
        let mut c = code;
        let mut sum = 0;
        for &v in &vs {
            w[v] = c % 3;
            sum += c % 3;
            c /= 3;
        }
        if sum < best && paths.iter().all(|p| p.vertices().map(|v| w[v]).sum::<usize>() >= 2) {
            best = sum;
        }
    }
    best
}

pub fn random_relation(rng: &mut impl Rng, d: u32) -> Relation {
    match rng.random_range(0..3) {
        0 => {
            let mut pi: Vec<u32> = (0..d).collect();
            pi.shuffle(rng);
            Relation::perm(pi).unwrap()
        }
        1 => Relation::TwoSat { a: rng.random_range(0..d), b: rng.random_range(0..d) },
        _ => loop {
            let pairs: Vec<(u32, u32)> = (0..d).flat_map(|x| (0..d).map(move |y| (x, y))).filter(|_| rng.random_bool(0.4)).collect();
            if validate_01all(&pairs, d) {
                break Relation::from_pairs(d, &pairs).unwrap();
            }
        },
    }
}

/// Random CSP with `n` vertices over domain `d`; `tagged_only` avoids
/// explicit relations.
pub fn random_csp(rng: &mut impl Rng, n: usize, d: u32, p_edge: f64, p_assign: f64, tagged_only: bool) -> CspInstance {
    let mut b = CspBuilder::new(d, n).budget(n);
    for v in 0..n {
        if rng.random_bool(p_assign) {
            b.assign(v, rng.random_range(0..d));
        }
    }
    for u in 0..n {
        for v in u + 1..n {
            if rng.random_bool(p_edge) {
                let rel = loop {
                    let r = random_relation(rng, d);
                    if !tagged_only || !matches!(r, Relation::Explicit { .. }) {
                        break r;
                    }
                };
                b.constrain(u, v, rel);
            }
        }
    }
    b.build().unwrap()
}

pub fn random_graph(rng: &mut impl Rng, n: usize, p: f64) -> Graph {
    let mut edges = Vec::new();
    for u in 0..n {
        for v in u + 1..n {
            if rng.random_bool(p) {
                edges.push((u, v));
            }
        }
    }
    Graph::from_edges(n, edges)
}

/// Random MWC instance with no terminal–terminal edges.
pub fn random_mwc(rng: &mut impl Rng, n: usize, t: usize, p: f64) -> MwcInstance {
    let mut ids: Vec<usize> = (0..n).collect();
    ids.shuffle(rng);
    let mut terminals: Vec<usize> = ids[..t].to_vec();
    terminals.sort_unstable();
    let mut is_t = vec![false; n];
    for &x in &terminals {
        is_t[x] = true;
    }
    let mut edges = Vec::new();
    for u in 0..n {
        for v in u + 1..n {
            if !(is_t[u] && is_t[v]) && rng.random_bool(p) {
                edges.push((u, v));
            }
        }
    }
    MwcInstance::new(Graph::from_edges(n, edges), terminals)
}

pub fn random_repr(r: &mut impl Rng, rows: usize, cols: usize) -> MatroidRepr {
    let f = Field::default();
    // small entries make dependent sets common
    let data: Vec<Vec<u64>> = (0..rows).map(|_| (0..cols).map(|_| r.random_range(0..3)).collect()).collect();
    MatroidRepr::new(f, Matrix::from_rows(f, &data), (0..cols).collect())
}

/// Checks the representative property for every `B` with `|B| ≤ rank − a`.
pub fn is_representative(m: &MatroidRepr, fam: &[Vec<usize>], sub: &[Vec<usize>]) -> bool {
    let rank = m.rank();
    let a = fam.first().map_or(0, |t| t.len());
    if a > rank {
        return true;
    }
    let ground: Vec<usize> = (0..m.ground_size()).collect();
    let extends = |t: &[usize], b: &[usize]| !t.iter().any(|x| b.contains(x)) && m.is_independent(&[t, b].concat());
    (0..=rank - a).all(|size| subsets_of_size(&ground, size).iter().all(|b| !fam.iter().any(|t| extends(t, b)) || sub.iter().any(|t| extends(t, b))))
}

/// Maximum number of vertex-disjoint paths from `sources` ending in `targets`
/// (distinct end vertices), by augmenting paths on the split graph.
pub fn disjoint_paths(d: &Digraph, sources: &[usize], targets: &[usize]) -> usize {
    let n = d.n();
    // nodes: v_in = 2v, v_out = 2v+1, s = 2n, t = 2n+1
    let (s, t) = (2 * n, 2 * n + 1);
    let mut cap = vec![vec![0i32; 2 * n + 2]; 2 * n + 2];
    for v in 0..n {
        cap[2 * v][2 * v + 1] = 1;
    }
    for (u, v) in d.arcs() {
        cap[2 * u + 1][2 * v] = 1;
    }
    for &v in sources {
        cap[s][2 * v] = 1;
    }
    for &v in targets {
        cap[2 * v + 1][t] = 1;
    }
    let mut flow = 0;
    loop {
        let mut prev = vec![usize::MAX; 2 * n + 2];
        prev[s] = s;
        let mut queue = std::collections::VecDeque::from([s]);
        while let Some(x) = queue.pop_front() {
            for y in 0..2 * n + 2 {
                if prev[y] == usize::MAX && cap[x][y] > 0 {
                    prev[y] = x;
                    queue.push_back(y);
                }
            }
        }
        if prev[t] == usize::MAX {
            return flow;
        }
        let mut y = t;
        while y != s {
            let x = prev[y];
            cap[x][y] -= 1;
            cap[y][x] += 1;
            y = x;
        }
        flow += 1;
    }
}

pub fn binomial(n: usize, k: usize) -> u128 {
    if k > n {
        return 0;
    }
    (0..k).fold(1u128, |acc, i| acc * (n - i) as u128 / (i as u128 + 1))
}
