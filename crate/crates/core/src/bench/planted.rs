//! Planted instances: a core clique `K0` all of whose satellite cliques hang
//! off distinct terminals.

use log::info;
use rand::prelude::*;
use rand_chacha::ChaCha8Rng;

use crate::graph::{Graph, MwcInstance};

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct PlantedParams {
    pub t: usize,
    /// Core clique size.
    pub a: usize,
    /// Satellite clique size.
    pub b: usize,
    /// Probability of keeping each edge.
    pub p: f64,
    pub seed: u64,
}

impl PlantedParams {
    /// Whether `K0` is the unique optimum at `p = 1`.
    pub fn planted_guarantee(&self) -> bool {
        self.a < self.t.saturating_sub(1) * self.b
    }

    /// `planted_a_t_b_p.mwc` with `p` in percent.
    pub fn file_name(&self) -> String {
        format!("planted_{:03}_{:03}_{:03}_{:02}.mwc", self.a, self.t, self.b, (self.p * 100.0).round() as u32)
    }
}

#[derive(Clone, Debug)]
pub struct Planted {
    /// Terminals `0..t`, then `K0`, then the satellites `K1..Kt`.
    pub instance: MwcInstance,
    pub core: Vec<usize>,
    /// Seed that produced the instance; differs from the requested one when
    /// an isolated terminal forced regeneration.
    pub seed: u64,
}

const MAX_ATTEMPTS: u64 = 1000;

fn sample(params: &PlantedParams, seed: u64) -> Graph {
    let PlantedParams { t, a, b, p, .. } = *params;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let core: Vec<usize> = (t..t + a).collect();
    let sat = |i: usize| (t + a + i * b..t + a + (i + 1) * b).collect::<Vec<_>>();
    let mut g = Graph::new(t + a + t * b);
    let mut keep = |g: &mut Graph, u: usize, v: usize| {
        if rng.random_bool(p) {
            g.add_edge(u, v);
        }
    };
    for (i, &u) in core.iter().enumerate() {
        for &v in &core[i + 1..] {
            keep(&mut g, u, v);
        }
    }
    for ti in 0..t {
        let si = sat(ti);
        for (j, &u) in si.iter().enumerate() {
            for &v in &si[j + 1..] {
                keep(&mut g, u, v);
            }
            for &c in &core {
                keep(&mut g, u, c);
            }
            keep(&mut g, ti, u);
        }
    }
    g
}

pub fn gen_planted(params: &PlantedParams) -> Planted {
    assert!((0.0..=1.0).contains(&params.p), "edge probability {} outside [0, 1]", params.p);
    let t = params.t;
    let mut seed = params.seed;
    let mut g = sample(params, seed);
    // with p = 0 (or b = 0) every terminal is isolated whatever the seed
    let can_attach = params.p > 0.0 && params.b > 0;
    while can_attach && (0..t).any(|ti| g.degree(ti) == 0) && seed < params.seed + MAX_ATTEMPTS {
        info!("planted {}: isolated terminal with seed {seed}, regenerating", params.file_name());
        seed += 1;
        g = sample(params, seed);
    }
    let core = (t..t + params.a).collect();
    Planted { instance: MwcInstance::new(g, (0..t).collect()), core, seed }
}
