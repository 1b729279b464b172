//! Representative sets of tuple families via wedge coordinates.
//!
//! Each independent `a`-tuple `A` maps to `w_A`, the vector of its `a × a`
//! minors over a fixed row basis. `A ∪ B` is independent iff `w_A` pairs
//! nonzero with the complementary wedge of `B`, a linear functional, so any
//! maximal linearly independent subset of `{w_A}` is representative.

use thiserror::Error;

use super::field::{Field, FieldElem};
use super::matrix::{determinant, row_basis, Matrix};
use super::MatroidRepr;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TupleFamily {
    pub a: usize,
    /// Column indices into the matroid.
    pub tuples: Vec<Vec<usize>>,
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum RepSetError {
    #[error("tuple size {a} exceeds rank bound {r}")]
    InvalidParameters { a: usize, r: usize },
    #[error("tuple {0} is not an independent set of the right size")]
    DependentTuple(usize),
    #[error("representative set needs about {needed} bytes, limit is {limit}")]
    Resource { needed: u128, limit: u128 },
}

#[derive(Clone, Debug)]
pub struct RepSetResult {
    pub family: TupleFamily,
    /// Positions in the input family of the kept tuples.
    pub kept: Vec<usize>,
    /// Length of the coordinate vectors.
    pub dim: usize,
    pub peak_bytes: u128,
}

/// Incrementally maintained set of linearly independent vectors in echelon
/// form.
pub(crate) struct SpanBasis {
    f: Field,
    rows: Vec<Vec<FieldElem>>,
    pivots: Vec<usize>,
}

impl SpanBasis {
    pub(crate) fn new(f: Field) -> Self {
        SpanBasis { f, rows: Vec::new(), pivots: Vec::new() }
    }

    /// Adds `v` if it is outside the current span.
    pub(crate) fn insert(&mut self, mut v: Vec<FieldElem>) -> bool {
        let f = self.f;
        for (row, &p) in self.rows.iter().zip(&self.pivots) {
            let c = v[p];
            if c != 0 {
                for (x, &y) in v.iter_mut().zip(row) {
                    *x = f.sub(*x, f.mul(c, y));
                }
            }
        }
        let Some(p) = v.iter().position(|&x| x != 0) else { return false };
        let inv = f.inv(v[p]);
        for x in v.iter_mut() {
            *x = f.mul(*x, inv);
        }
        self.rows.push(v);
        self.pivots.push(p);
        true
    }

    pub(crate) fn len(&self) -> usize {
        self.rows.len()
    }
}

pub(crate) fn binomial(n: usize, k: usize) -> u128 {
    if k > n {
        return 0;
    }
    let k = k.min(n - k);
    let mut r: u128 = 1;
    for i in 0..k {
        r = r.saturating_mul((n - i) as u128) / (i as u128 + 1);
    }
    r
}

fn check_memory(vectors: usize, dim: usize, limit: Option<u128>) -> Result<u128, RepSetError> {
    let needed = (vectors.min(dim) as u128).saturating_mul(dim as u128).saturating_mul(8);
    match limit {
        Some(limit) if needed > limit => Err(RepSetError::Resource { needed, limit }),
        _ => Ok(needed),
    }
}

fn subsets(n: usize, k: usize) -> Vec<Vec<usize>> {
    fn rec(n: usize, k: usize, start: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if cur.len() == k {
            out.push(cur.clone());
            return;
        }
        for i in start..n {
            if n - i < k - cur.len() {
                break;
            }
            cur.push(i);
            rec(n, k, i + 1, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    rec(n, k, 0, &mut Vec::new(), &mut out);
    out
}

/// An `(r − a)`-representative subfamily of size at most `C(r, a)`.
pub fn representative_set(m: &MatroidRepr, fam: &TupleFamily, mem_limit: Option<u128>) -> Result<RepSetResult, RepSetError> {
    let (f, a, r) = (m.field, fam.a, m.r());
    if a > r {
        return Err(RepSetError::InvalidParameters { a, r });
    }
    let basis = m.matrix.select_rows(&row_basis(f, &m.matrix));
    let coords = subsets(basis.rows(), a);
    let dim = coords.len();
    check_memory(fam.tuples.len(), dim, mem_limit)?;
    let mut span = SpanBasis::new(f);
    let mut kept = Vec::new();
    for (i, tuple) in fam.tuples.iter().enumerate() {
        let mut distinct = tuple.clone();
        distinct.sort_unstable();
        distinct.dedup();
        if tuple.len() != a || distinct.len() != a {
            return Err(RepSetError::DependentTuple(i));
        }
        let block = basis.select_columns(tuple);
        let w: Vec<FieldElem> = coords.iter().map(|rows| determinant(f, &block.select_rows(rows))).collect();
        if w.iter().all(|&x| x == 0) {
            return Err(RepSetError::DependentTuple(i));
        }
        if span.insert(w) {
            kept.push(i);
        }
    }
    assert!(kept.len() as u128 <= binomial(r, a), "representative set larger than C({r}, {a})");
    let family = TupleFamily { a, tuples: kept.iter().map(|&i| fam.tuples[i].clone()).collect() };
    let peak_bytes = (span.len() as u128) * (dim as u128) * 8;
    Ok(RepSetResult { family, kept, dim, peak_bytes })
}

#[derive(Clone, Debug)]
pub struct ProductResult {
    /// Positions of the kept tuples.
    pub kept: Vec<usize>,
    /// Product of the part ranks; bounds `kept.len()`.
    pub dim: usize,
    pub ranks: Vec<usize>,
    /// Tuples skipped because some part was a zero column.
    pub dependent: usize,
    pub peak_bytes: u128,
}

/// Representative set in the direct sum `M_1 ⊕ … ⊕ M_a` for tuples holding
/// one element of each summand (`tuples[i][j]` is a column of `parts[j]`).
///
/// The only nonzero wedge coordinates of such a tuple take one row from each
/// summand, where the minor is the product of the chosen entries, so `w_A` is
/// the tensor product of the projected columns. The result and the bound
/// `Π rank(M_j)` are those of [`representative_set`] on the sum.
pub fn representative_product(parts: &[&MatroidRepr], tuples: &[Vec<usize>], mem_limit: Option<u128>) -> Result<ProductResult, RepSetError> {
    let f = parts.first().map_or_else(Field::default, |p| p.field);
    let projected: Vec<Matrix> = parts.iter().map(|p| p.matrix.select_rows(&row_basis(f, &p.matrix))).collect();
    let ranks: Vec<usize> = projected.iter().map(|m| m.rows()).collect();
    let dim = ranks.iter().try_fold(1usize, |acc, &r| acc.checked_mul(r)).unwrap_or(usize::MAX);
    check_memory(tuples.len(), dim, mem_limit)?;
    let mut span = SpanBasis::new(f);
    let mut kept = Vec::new();
    let mut dependent = 0;
    for (i, tuple) in tuples.iter().enumerate() {
        assert_eq!(tuple.len(), parts.len(), "one element per summand");
        let cols: Vec<Vec<FieldElem>> = tuple.iter().zip(&projected).map(|(&c, m)| m.column(c)).collect();
        if cols.iter().any(|c| c.iter().all(|&x| x == 0)) {
            dependent += 1;
            continue;
        }
        let mut w = vec![1];
        for c in &cols {
            let mut next = Vec::with_capacity(w.len() * c.len());
            for &x in &w {
                next.extend(c.iter().map(|&y| f.mul(x, y)));
            }
            w = next;
        }
        if span.insert(w) {
            kept.push(i);
        }
    }
    assert!(kept.len() <= dim, "representative set larger than the product of ranks");
    let peak_bytes = (span.len() as u128) * (dim as u128) * 8;
    Ok(ProductResult { kept, dim, ranks, dependent, peak_bytes })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn repr(f: Field, rows: &[Vec<u64>]) -> MatroidRepr {
        let m = Matrix::from_rows(f, rows);
        let n = m.cols();
        MatroidRepr::new(f, m, (0..n).collect())
    }

    #[test]
    fn three_vectors_in_the_plane() {
        let f = Field::default();
        let m = repr(f, &[vec![1, 0, 1], vec![0, 1, 1]]);
        let fam = TupleFamily { a: 1, tuples: vec![vec![0], vec![1], vec![2]] };
        let res = representative_set(&m, &fam, None).unwrap();
        assert_eq!(res.family.tuples, vec![vec![0], vec![1]]);
    }

    #[test]
    fn full_rank_tuple_and_empty_family() {
        let f = Field::default();
        let m = repr(f, &[vec![1, 0, 1], vec![0, 1, 1]]);
        let fam = TupleFamily { a: 2, tuples: vec![vec![0, 1], vec![1, 2], vec![0, 2]] };
        assert_eq!(representative_set(&m, &fam, None).unwrap().family.tuples.len(), 1);
        let empty = TupleFamily { a: 2, tuples: vec![] };
        assert!(representative_set(&m, &empty, None).unwrap().family.tuples.is_empty());
        let big = TupleFamily { a: 3, tuples: vec![] };
        assert_eq!(representative_set(&m, &big, None).unwrap_err(), RepSetError::InvalidParameters { a: 3, r: 2 });
    }

    #[test]
    fn memory_ceiling_is_reported() {
        let f = Field::default();
        let m = repr(f, &[vec![1, 0], vec![0, 1]]);
        let fam = TupleFamily { a: 1, tuples: vec![vec![0], vec![1]] };
        assert!(matches!(representative_set(&m, &fam, Some(8)), Err(RepSetError::Resource { needed: 32, limit: 8 })));
    }
}
