//! Linear matroids over a prime field: gammoid representations,
//! representative sets of tuple families, and the OCT and MWC kernels built
//! on them.

pub mod field;
pub mod gammoid;
pub mod kernel;
pub mod matrix;
pub mod repset;

pub use field::{Field, FieldElem, DEFAULT_PRIME};
pub use gammoid::{gammoid_representation, uniform_representation, Digraph};
pub use kernel::{greedy_oct, mwc_kernel, oct_kernel, KernelError, KernelOptions, KernelStats, MwcKernel, OctKernel};
pub use matrix::{determinant, matrix_rank, row_basis, row_reduce, Echelon, Matrix};
pub use repset::{representative_product, representative_set, ProductResult, RepSetError, RepSetResult, TupleFamily};

/// A linear matroid: column `j` represents element `labels[j]`. The rank is
/// at most the number of rows.
#[derive(Clone, Debug)]
pub struct MatroidRepr {
    pub field: Field,
    pub matrix: Matrix,
    pub labels: Vec<usize>,
}

impl MatroidRepr {
    pub fn new(field: Field, matrix: Matrix, labels: Vec<usize>) -> Self {
        assert_eq!(matrix.cols(), labels.len(), "one label per column");
        MatroidRepr { field, matrix, labels }
    }

    /// Rank bound `r`.
    pub fn r(&self) -> usize {
        self.matrix.rows()
    }

    pub fn ground_size(&self) -> usize {
        self.matrix.cols()
    }

    pub fn rank(&self) -> usize {
        matrix_rank(self.field, &self.matrix)
    }

    /// Whether the given columns are distinct and linearly independent.
    pub fn is_independent(&self, cols: &[usize]) -> bool {
        let mut sorted = cols.to_vec();
        sorted.sort_unstable();
        sorted.dedup();
        sorted.len() == cols.len() && matrix_rank(self.field, &self.matrix.select_columns(cols)) == cols.len()
    }
}
