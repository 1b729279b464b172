//! Terminals from a 5-scattered set: each chosen vertex swallows its
//! neighbourhood and becomes a terminal.

use rand::prelude::*;
use rand_chacha::ChaCha8Rng;
use thiserror::Error;

use crate::graph::{Graph, MwcInstance};

pub const RESTARTS: usize = 100;
const SCATTER: usize = 5;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum SparseMode {
    Fixed(usize),
    Max,
}

impl SparseMode {
    /// Terminal count in file names; `0` stands for `max`.
    pub fn label(self) -> usize {
        match self {
            SparseMode::Fixed(t) => t,
            SparseMode::Max => 0,
        }
    }
}

impl std::str::FromStr for SparseMode {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        match s {
            "max" | "0" => Ok(SparseMode::Max),
            _ => s.parse().map(SparseMode::Fixed).map_err(|_| format!("terminal count {s:?} is neither a number nor max")),
        }
    }
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum SparseError {
    #[error("no 5-scattered set of size {wanted} found in {RESTARTS} restarts (largest: {found})")]
    GenerationFailed { wanted: usize, found: usize },
}

pub fn file_name(name: &str, mode: SparseMode) -> String {
    format!("sparse_{name}_{}.mwc", mode.label())
}

/// One randomized greedy pass: vertices in random order, each taken if it is
/// at distance at least 5 from everything taken so far.
fn greedy_scattered(g: &Graph, rng: &mut impl Rng) -> Vec<usize> {
    let mut order: Vec<usize> = (0..g.n()).collect();
    order.shuffle(rng);
    let mut near = vec![false; g.n()];
    let blocked = vec![false; g.n()];
    let mut chosen = Vec::new();
    for v in order {
        if near[v] {
            continue;
        }
        chosen.push(v);
        for (u, d) in g.bfs_dist(v, &blocked).into_iter().enumerate() {
            if d < SCATTER {
                near[u] = true;
            }
        }
    }
    chosen
}

pub fn scattered_set(g: &Graph, mode: SparseMode, seed: u64) -> Result<Vec<usize>, SparseError> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut best: Vec<usize> = Vec::new();
    for _ in 0..RESTARTS {
        let s = greedy_scattered(g, &mut rng);
        if let SparseMode::Fixed(t) = mode {
            if s.len() >= t {
                let mut s = s[..t].to_vec();
                s.sort_unstable();
                return Ok(s);
            }
        }
        if s.len() > best.len() {
            best = s;
        }
    }
    match mode {
        SparseMode::Fixed(t) => Err(SparseError::GenerationFailed { wanted: t, found: best.len() }),
        SparseMode::Max => {
            best.sort_unstable();
            Ok(best)
        }
    }
}

/// Contracts `N(s)` onto `s` for every `s` in the scattered set `s_set` and
/// makes the set the terminals. Remaining vertices keep their relative order.
pub fn contract_scattered(g: &Graph, s_set: &[usize]) -> MwcInstance {
    let mut swallowed = vec![false; g.n()];
    for &s in s_set {
        for &u in g.neighbors(s) {
            swallowed[u] = true;
        }
    }
    let (mut h, map) = g.without(&swallowed);
    let mut index = vec![usize::MAX; g.n()];
    for (i, &v) in map.iter().enumerate() {
        index[v] = i;
    }
    for &s in s_set {
        for &u in g.neighbors(s) {
            for &w in g.neighbors(u) {
                if !swallowed[w] && w != s {
                    h.add_edge(index[s], index[w]);
                }
            }
        }
    }
    MwcInstance::new(h, s_set.iter().map(|&s| index[s]).collect())
}

pub fn gen_sparse(g: &Graph, mode: SparseMode, seed: u64) -> Result<MwcInstance, SparseError> {
    Ok(contract_scattered(g, &scattered_set(g, mode, seed)?))
}
