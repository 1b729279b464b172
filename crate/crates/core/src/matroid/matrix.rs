//! Dense matrices over a prime field and Gaussian elimination.

use super::field::{Field, FieldElem};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Matrix {
    rows: usize,
    cols: usize,
    data: Vec<FieldElem>,
}

impl Matrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        Matrix { rows, cols, data: vec![0; rows * cols] }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Matrix::zeros(n, n);
        for i in 0..n {
            m.set(i, i, 1);
        }
        m
    }

    /// Entries are reduced modulo `f.p()`.
    pub fn from_rows(f: Field, rows: &[Vec<u64>]) -> Self {
        let cols = rows.first().map_or(0, |r| r.len());
        let mut m = Matrix::zeros(rows.len(), cols);
        for (i, row) in rows.iter().enumerate() {
            assert_eq!(row.len(), cols, "ragged rows");
            for (j, &x) in row.iter().enumerate() {
                m.set(i, j, f.elem(x));
            }
        }
        m
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn get(&self, i: usize, j: usize) -> FieldElem {
        self.data[i * self.cols + j]
    }

    pub fn set(&mut self, i: usize, j: usize, x: FieldElem) {
        self.data[i * self.cols + j] = x;
    }

    pub fn row(&self, i: usize) -> &[FieldElem] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn column(&self, j: usize) -> Vec<FieldElem> {
        (0..self.rows).map(|i| self.get(i, j)).collect()
    }

    pub fn select_columns(&self, cols: &[usize]) -> Matrix {
        let mut m = Matrix::zeros(self.rows, cols.len());
        for i in 0..self.rows {
            for (jj, &j) in cols.iter().enumerate() {
                m.set(i, jj, self.get(i, j));
            }
        }
        m
    }

    pub fn select_rows(&self, rows: &[usize]) -> Matrix {
        let mut m = Matrix::zeros(rows.len(), self.cols);
        for (ii, &i) in rows.iter().enumerate() {
            m.data[ii * self.cols..(ii + 1) * self.cols].copy_from_slice(self.row(i));
        }
        m
    }

    pub fn transpose(&self) -> Matrix {
        let mut m = Matrix::zeros(self.cols, self.rows);
        for i in 0..self.rows {
            for j in 0..self.cols {
                m.set(j, i, self.get(i, j));
            }
        }
        m
    }

    pub fn mul(&self, f: Field, other: &Matrix) -> Matrix {
        assert_eq!(self.cols, other.rows, "dimension mismatch");
        let mut out = Matrix::zeros(self.rows, other.cols);
        for i in 0..self.rows {
            for l in 0..self.cols {
                let a = self.get(i, l);
                if a == 0 {
                    continue;
                }
                for j in 0..other.cols {
                    let cur = out.get(i, j);
                    out.set(i, j, f.add(cur, f.mul(a, other.get(l, j))));
                }
            }
        }
        out
    }

    fn swap_rows(&mut self, a: usize, b: usize) {
        if a != b {
            for j in 0..self.cols {
                self.data.swap(a * self.cols + j, b * self.cols + j);
            }
        }
    }

    /// `row[dst] -= c · row[src]`.
    fn sub_row(&mut self, f: Field, dst: usize, src: usize, c: FieldElem) {
        if c == 0 {
            return;
        }
        for j in 0..self.cols {
            let x = f.sub(self.get(dst, j), f.mul(c, self.get(src, j)));
            self.set(dst, j, x);
        }
    }
}

/// Reduced row echelon form with the pivot column of each nonzero row and
/// the original row each pivot row came from.
#[derive(Clone, Debug)]
pub struct Echelon {
    pub matrix: Matrix,
    pub pivot_cols: Vec<usize>,
    pub source_rows: Vec<usize>,
}

impl Echelon {
    pub fn rank(&self) -> usize {
        self.pivot_cols.len()
    }
}

pub fn row_reduce(f: Field, m: &Matrix) -> Echelon {
    let mut a = m.clone();
    let mut origin: Vec<usize> = (0..m.rows).collect();
    let mut pivot_cols = Vec::new();
    let mut r = 0;
    for c in 0..a.cols {
        if r == a.rows {
            break;
        }
        let Some(p) = (r..a.rows).find(|&i| a.get(i, c) != 0) else { continue };
        a.swap_rows(r, p);
        origin.swap(r, p);
        let inv = f.inv(a.get(r, c));
        for j in 0..a.cols {
            let x = f.mul(a.get(r, j), inv);
            a.set(r, j, x);
        }
        for i in 0..a.rows {
            if i != r {
                let c_i = a.get(i, c);
                a.sub_row(f, i, r, c_i);
            }
        }
        pivot_cols.push(c);
        r += 1;
    }
    origin.truncate(r);
    Echelon { matrix: a, pivot_cols, source_rows: origin }
}

pub fn matrix_rank(f: Field, m: &Matrix) -> usize {
    row_reduce(f, m).rank()
}

/// Indices of a maximal set of linearly independent rows, in increasing
/// order.
pub fn row_basis(f: Field, m: &Matrix) -> Vec<usize> {
    let mut rows = row_reduce(f, &m.transpose()).pivot_cols;
    rows.sort_unstable();
    rows
}

/// Determinant of a square matrix.
pub fn determinant(f: Field, m: &Matrix) -> FieldElem {
    assert_eq!(m.rows, m.cols, "determinant of a non-square matrix");
    let mut a = m.clone();
    let n = a.rows;
    let mut det = 1;
    for c in 0..n {
        let Some(p) = (c..n).find(|&i| a.get(i, c) != 0) else { return 0 };
        if p != c {
            a.swap_rows(c, p);
            det = f.neg(det);
        }
        let piv = a.get(c, c);
        det = f.mul(det, piv);
        let inv = f.inv(piv);
        for i in c + 1..n {
            let factor = f.mul(a.get(i, c), inv);
            a.sub_row(f, i, c, factor);
        }
    }
    det
}

/// Solves `A X = B` for square invertible `A`; `None` when `A` is singular.
pub fn solve(f: Field, a: &Matrix, b: &Matrix) -> Option<Matrix> {
    let n = a.rows;
    assert_eq!(a.cols, n);
    assert_eq!(b.rows, n);
    let w = n + b.cols;
    let mut aug = Matrix::zeros(n, w);
    for i in 0..n {
        aug.data[i * w..i * w + n].copy_from_slice(a.row(i));
        aug.data[i * w + n..(i + 1) * w].copy_from_slice(b.row(i));
    }
    for c in 0..n {
        let p = (c..n).find(|&i| aug.get(i, c) != 0)?;
        aug.swap_rows(c, p);
        let inv = f.inv(aug.get(c, c));
        for j in c..w {
            let x = f.mul(aug.get(c, j), inv);
            aug.set(c, j, x);
        }
        for i in 0..n {
            if i != c {
                let factor = aug.get(i, c);
                if factor != 0 {
                    for j in c..w {
                        let x = f.sub(aug.get(i, j), f.mul(factor, aug.get(c, j)));
                        aug.set(i, j, x);
                    }
                }
            }
        }
    }
    let mut x = Matrix::zeros(n, b.cols);
    for i in 0..n {
        x.data[i * b.cols..(i + 1) * b.cols].copy_from_slice(&aug.row(i)[n..]);
    }
    Some(x)
}
