mod common;

use std::path::PathBuf;
use std::time::Duration;

use common::*;
use proptest::prelude::*;
use sepsolve::bench::maxcut::{expected_opt, weighted_gadget};
use sepsolve::bench::*;
use sepsolve::frontends::solve_mwc;
use sepsolve::graph::{parse_mwc, write_mwc, Graph, MwcInstance};
use sepsolve::solver::{Limits, SolverVariant};

fn brute_maxcut(h: &Graph) -> usize {
    (0u32..1 << h.n()).map(|side| h.edges().filter(|&(u, v)| (side >> u & 1) != (side >> v & 1)).count()).max().unwrap_or(0)
}

/// Edge-weighted multiway cut over every assignment of the non-terminals.
fn brute_weighted_mwc(nodes: usize, edges: &[(usize, usize, usize)]) -> usize {
    let free = nodes - 3;
    let mut side = vec![0usize; nodes];
    side[..3].copy_from_slice(&[0, 1, 2]);
    (0..3usize.pow(free as u32))
        .map(|mut code| {
            for s in &mut side[3..] {
                *s = code % 3;
                code /= 3;
            }
            edges.iter().filter(|&&(u, v, _)| side[u] != side[v]).map(|&(_, _, w)| w).sum::<usize>()
        })
        .min()
        .unwrap()
}

fn scratch_dir(name: &str) -> PathBuf {
    let dir = std::env::temp_dir().join(format!("sepsolve-{}-{name}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    dir
}

#[test]
fn weighted_gadget_encodes_maxcut() {
    for name in ["k2", "p3"] {
        let h = source_graph(name).unwrap();
        let (nodes, edges) = weighted_gadget(&h);
        assert_eq!(brute_weighted_mwc(nodes, &edges), expected_opt(&h, brute_maxcut(&h)), "{name}");
    }
}

#[test]
fn maxcut_k2_decodes() {
    let h = source_graph("k2").unwrap();
    let inst = gen_maxcut(&h);
    let opt = solve_mwc(&inst, SolverVariant::LB2, Limits::none()).unwrap().opt.unwrap();
    assert_eq!(decode_maxcut(&h, opt), Some(1));
}

#[test]
fn maxcut_with_isolated_source_vertex() {
    let h = Graph::from_edges(3, [(0, 1)]);
    let opt = solve_mwc(&gen_maxcut(&h), SolverVariant::LB2, Limits::none()).unwrap().opt.unwrap();
    assert_eq!(decode_maxcut(&h, opt), Some(1));
}

#[test]
fn planted_full_edge_count() {
    for (t, a, b) in [(2, 2, 3), (3, 4, 2), (4, 1, 1), (3, 0, 5)] {
        let inst = gen_planted(&PlantedParams { t, a, b, p: 1.0, seed: 0 }).instance;
        let pairs = |k: usize| k * k.saturating_sub(1) / 2;
        assert_eq!(inst.graph.m(), pairs(a) + t * pairs(b) + t * a * b + t * b, "t {t} a {a} b {b}");
        assert_eq!(inst.graph.n(), t + a + t * b);
    }
}

#[test]
fn planted_full_size_and_round_trip() {
    let params = PlantedParams { t: 3, a: 100, b: 200, p: 0.2, seed: 0 };
    assert_eq!(params.file_name(), "planted_100_003_200_20.mwc");
    let inst = gen_planted(&params).instance;
    assert_eq!(inst.graph.n() - inst.terminals.len(), 700);
    assert_eq!(parse_mwc(&write_mwc(&inst)).unwrap(), inst);
}

#[test]
fn planted_regenerates_isolated_terminals() {
    // with p = 0.05 and b = 2 a terminal is usually isolated
    let params = PlantedParams { t: 3, a: 2, b: 2, p: 0.05, seed: 0 };
    let out = gen_planted(&params);
    assert!(out.seed >= params.seed);
    if out.seed < params.seed + 1000 {
        assert!(out.instance.terminals.iter().all(|&t| out.instance.graph.degree(t) > 0));
    }
    assert_eq!(gen_planted(&PlantedParams { seed: out.seed, ..params }).instance, out.instance);
}

#[test]
fn sparse_needs_enough_room() {
    let path = Graph::from_edges(9, (1..9).map(|i| (i - 1, i)));
    assert_eq!(scattered_set(&path, SparseMode::Fixed(3), 0), Err(SparseError::GenerationFailed { wanted: 3, found: 2 }));
    assert_eq!(scattered_set(&path, SparseMode::Max, 0).unwrap().len(), 2);
}

#[test]
fn filter_keeps_instances_the_approximation_misses() {
    // three terminals with private neighbours meeting at a hub: the closest
    // isolating cuts take all three neighbours, OPT is the hub alone
    let mut g = Graph::new(7);
    for (t, a) in [(0, 3), (1, 4), (2, 5)] {
        g.add_edge(t, a);
        g.add_edge(a, 6);
    }
    let inst = MwcInstance::new(g, vec![0, 1, 2]);
    assert_eq!(filter_suboptimal(&inst, Limits::none()), Some(true));
}

#[test]
fn harness_survives_bad_files() {
    let dir = scratch_dir("bad");
    let good = MwcInstance::new(Graph::from_edges(4, [(0, 1), (1, 2), (2, 3)]), vec![0, 3]);
    std::fs::write(dir.join("b_good.mwc"), write_mwc(&good)).unwrap();
    std::fs::write(dir.join("a_broken.mwc"), "3 1 2\n0\n").unwrap();
    std::fs::write(dir.join("manifest.txt"), "# two instances\nb_good.mwc\n\na_broken.mwc\nc_missing.mwc\n").unwrap();
    let files = read_manifest(&dir.join("manifest.txt")).unwrap();
    assert_eq!(files.len(), 3);
    let variants = parse_variants("lb2,impsep").unwrap();
    let rows = run_experiments(&files, &variants, Duration::from_secs(10));
    let names: Vec<&str> = rows.iter().map(|r| r.as_ref().map_or_else(|e| e.test.as_str(), |r| r.test.as_str())).collect();
    assert_eq!(names, ["a_broken", "b_good", "c_missing"]);
    assert!(rows[0].is_err() && rows[2].is_err());
    let csv_text = to_csv(&rows, &variants).unwrap();
    let mut reader = csv::Reader::from_reader(csv_text.as_bytes());
    let head: Vec<String> = reader.headers().unwrap().iter().map(String::from).collect();
    assert_eq!(head.len(), HEADER.len() + 2);
    assert_eq!(&head[HEADER.len()..], ["CSP_LB2", "IMPSEP"]);
    let recs: Vec<csv::StringRecord> = reader.records().map(Result::unwrap).collect();
    assert_eq!(recs.len(), 3);
    assert_eq!(&recs[0][1], "ERROR");
    assert_eq!(&recs[1][6], "1");
    std::fs::remove_dir_all(&dir).ok();
}

#[test]
fn cli_generates_and_solves() {
    let dir = scratch_dir("cli");
    let bin = env!("CARGO_BIN_EXE_sepsolve");
    let out = std::process::Command::new(bin).args(["gen", "maxcut", "--source", "k2", "--out-dir"]).arg(&dir).output().unwrap();
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    let path = String::from_utf8(out.stdout).unwrap().trim().to_string();
    assert!(path.ends_with("maxcut_k2.mwc"));
    let out = std::process::Command::new(bin).args(["solve", &path]).output().unwrap();
    assert!(out.status.success());
    let text = String::from_utf8(out.stdout).unwrap();
    let sol = sepsolve::graph::parse_solution(&text).unwrap();
    assert_eq!(sol.len(), 17);
    let inst = parse_mwc(&std::fs::read_to_string(&path).unwrap()).unwrap();
    assert!(sepsolve::graph::is_multiway_cut(&inst, &sol));
    std::fs::remove_dir_all(&dir).ok();
}

#[test]
fn rows_satisfy_bound_chain() {
    for seed in 0..40 {
        let mut r = rng(12_000 + seed);
        let inst = random_mwc(&mut r, 10, 3, 0.35);
        let variants = parse_variants("csp,lb1,lb2,impsep").unwrap();
        let row = measure("random", &inst, &variants, Duration::from_secs(30)).unwrap();
        let opt = row.opt.unwrap();
        assert_eq!(Some(opt), brute_mwc(&inst), "seed {seed}");
        assert!(row.lb1 <= row.lb2 && row.lb2 <= opt && opt <= row.appx.unwrap(), "seed {seed} {row:?}");
        assert_eq!(row.pre_left_opt.map(|o| o + row.pre_del), Some(opt), "seed {seed}");
        assert!(row.pre_left_deg <= 2 * row.pre_left_opt.unwrap(), "seed {seed}");
    }
}

fn sparse_graph() -> impl Strategy<Value = Graph> {
    (5usize..=30, proptest::collection::vec((0usize..30, 0usize..30), 0..40))
        .prop_map(|(n, es)| Graph::from_edges(n, es.into_iter().map(|(u, v)| (u % n, v % n)).filter(|(u, v)| u != v)))
}

fn distances(g: &Graph, s: usize) -> Vec<usize> {
    g.bfs_dist(s, &vec![false; g.n()])
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn scattered_sets_are_far_apart(g in sparse_graph(), seed in 0u64..1000) {
        let s = scattered_set(&g, SparseMode::Max, seed).unwrap();
        prop_assert!(!s.is_empty());
        for &a in &s {
            let d = distances(&g, a);
            for &b in &s {
                prop_assert!(a == b || d[b] >= 5);
            }
        }
    }

    #[test]
    fn contraction_links_second_neighbourhood(g in sparse_graph(), seed in 0u64..1000) {
        let s = scattered_set(&g, SparseMode::Max, seed).unwrap();
        let inst = contract_scattered(&g, &s);
        let mut swallowed = vec![false; g.n()];
        for &x in &s {
            for &u in g.neighbors(x) {
                swallowed[u] = true;
            }
        }
        let kept: Vec<usize> = (0..g.n()).filter(|&v| !swallowed[v]).collect();
        prop_assert_eq!(inst.graph.n(), kept.len());
        for (i, &x) in s.iter().enumerate() {
            let d = distances(&g, x);
            let want: Vec<usize> = kept.iter().enumerate().filter(|&(_, &v)| d[v] == 2).map(|(j, _)| j).collect();
            let mut got = inst.graph.neighbors(inst.terminals[i]).to_vec();
            got.sort_unstable();
            prop_assert_eq!(got, want);
        }
        // edges between kept non-terminals are untouched
        let is_t = inst.terminal_mask();
        for (a, &u) in kept.iter().enumerate() {
            for (b, &v) in kept.iter().enumerate() {
                if !is_t[a] && !is_t[b] && a != b {
                    prop_assert_eq!(inst.graph.has_edge(a, b), g.has_edge(u, v));
                }
            }
        }
    }

    #[test]
    fn planted_is_deterministic(t in 2usize..5, a in 0usize..6, b in 0usize..6, pct in 0u32..=100, seed in 0u64..100) {
        let params = PlantedParams { t, a, b, p: pct as f64 / 100.0, seed };
        let x = gen_planted(&params);
        let y = gen_planted(&params);
        prop_assert_eq!(&x.instance, &y.instance);
        prop_assert_eq!(x.instance.graph.n(), t + a + t * b);
        prop_assert_eq!(&x.core, &(t..t + a).collect::<Vec<_>>());
        // no terminal-terminal edges and no edges between distinct satellites
        for (u, v) in x.instance.graph.edges() {
            prop_assert!(u >= t || v >= t);
            let sat = |w: usize| (w >= t + a).then(|| (w - t - a) / b.max(1));
            if let (Some(i), Some(j)) = (sat(u), sat(v)) {
                prop_assert_eq!(i, j);
            }
        }
    }
}
