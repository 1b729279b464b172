//! Exact solvers and kernels for vertex-deletion Odd Cycle Transversal and
//! Multiway Cut.

pub mod bench;
pub mod csp;
pub mod flow;
pub mod frontends;
pub mod graph;
pub mod impsep;
pub mod matroid;
pub mod solver;
