//! Benchmark generators, the suboptimality filter and the CSV harness.

pub mod harness;
pub mod maxcut;
pub mod planted;
pub mod sparse;

pub use harness::{format_runtime, measure, parse_variants, read_manifest, run_experiments, to_csv, BenchVariant, ResultRow, RowError, HEADER};
pub use maxcut::{decode_maxcut, gen_maxcut, source_graph};
pub use planted::{gen_planted, Planted, PlantedParams};
pub use sparse::{contract_scattered, gen_sparse, scattered_set, SparseError, SparseMode};

use crate::flow::isolating_cut_approx;
use crate::frontends::solve_mwc;
use crate::graph::MwcInstance;
use crate::solver::{Limits, SolverVariant};

/// Whether the isolating-cut approximation is beaten by the optimum; `None`
/// when the solver runs out of time or two terminals are adjacent.
pub fn filter_suboptimal(inst: &MwcInstance, limits: Limits) -> Option<bool> {
    let appx = isolating_cut_approx(inst).ok()?.len();
    let opt = solve_mwc(inst, SolverVariant::LB2, limits).ok()?.opt?;
    Some(appx > opt)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::Graph;

    #[test]
    fn chain_and_separated_terminals_are_discarded() {
        let chain = MwcInstance::new(Graph::from_edges(4, [(0, 1), (1, 2), (2, 3)]), vec![0, 3]);
        assert_eq!(filter_suboptimal(&chain, Limits::none()), Some(false));
        let apart = MwcInstance::new(Graph::from_edges(4, [(0, 1), (2, 3)]), vec![0, 3]);
        assert_eq!(filter_suboptimal(&apart, Limits::none()), Some(false));
    }
}
