mod common;

use common::*;
use rand::prelude::*;
use sepsolve::csp::CspInstance;
use sepsolve::frontends::{mwc_simple_preprocess, solve_mwc, solve_oct};
use sepsolve::graph::{is_multiway_cut, is_oct};
use sepsolve::solver::*;

fn check_csp(inst: &CspInstance, seed: u64) {
    let want = brute_csp(inst);
    for v in SolverVariant::all() {
        let r = solve_optimum(inst, v, Limits::none());
        assert_eq!(r.opt, Some(want), "{v} seed {seed}\n{}", inst.dump());
        assert!(inst.is_solution(&r.solution), "{v} seed {seed}");
        assert_eq!(r.solution.len(), want);
        assert_eq!(r.stats.slack_increases, 0, "{v} seed {seed}");
        assert!(r.stats.root_lb1 <= r.stats.root_lb2 && r.stats.root_lb2 <= want, "{v} seed {seed}");
    }
}

#[test]
fn csp_optimum_matches_oracle() {
    for seed in 0..300 {
        let mut r = rng(seed);
        let n = r.random_range(2..=7);
        let d = if seed % 2 == 0 { 2 } else { 3 };
        let inst = random_csp(&mut r, n, d, 0.45, 0.4, false);
        check_csp(&inst, seed);
    }
}

#[test]
fn decision_is_monotone_in_budget() {
    for seed in 0..100 {
        let mut r = rng(1000 + seed);
        let n = r.random_range(2..=7);
        let mut inst = random_csp(&mut r, n, 2, 0.5, 0.5, true);
        let opt = brute_csp(&inst);
        for k in 0..=n {
            inst.set_budget(k as i64);
            let res = solve_decision(&inst, SolverVariant::LB2, Limits::none());
            assert_eq!(matches!(res.outcome, Outcome::Feasible(_)), k >= opt, "seed {seed} k {k}");
        }
    }
}

#[test]
fn oct_variants_match_brute_force() {
    for seed in 0..150 {
        let mut r = rng(2000 + seed);
        let n = r.random_range(1..=11);
        let g = random_graph(&mut r, n, 0.3);
        let want = brute_oct(&g);
        for v in SolverVariant::all() {
            let s = solve_oct(&g, v, Limits::none());
            assert_eq!(s.opt, Some(want), "{v} seed {seed}");
            assert!(is_oct(&g, &s.solution));
            assert_eq!(s.result.stats.slack_violations, 0, "{v} seed {seed}");
        }
    }
}

#[test]
fn mwc_variants_match_brute_force() {
    for seed in 0..150 {
        let mut r = rng(3000 + seed);
        let n = r.random_range(3..=11);
        let t = r.random_range(2..=3.min(n));
        let inst = random_mwc(&mut r, n, t, 0.35);
        let want = brute_mwc(&inst).expect("no terminal edges");
        for v in SolverVariant::all() {
            let s = solve_mwc(&inst, v, Limits::none()).unwrap();
            assert_eq!(s.opt, Some(want), "{v} seed {seed}");
            assert!(is_multiway_cut(&inst, &s.solution));
            assert_eq!(s.result.stats.slack_violations, 0, "{v} seed {seed}");
            let forced = mwc_simple_preprocess(&inst).unwrap().forced.len();
            assert!(s.result.stats.root_packing >= want - forced, "{v} seed {seed}");
        }
    }
}

#[test]
fn expired_deadline_times_out() {
    let mut r = rng(7);
    let g = random_graph(&mut r, 30, 0.3);
    let s = solve_oct(&g, SolverVariant::CSP, Limits { deadline: Some(std::time::Instant::now()) });
    assert_eq!(s.opt, None);
}
