//! Randomized linear representations of gammoids and uniform matroids.

use rand::prelude::*;

use super::field::Field;
use super::matrix::{solve, Matrix};
use super::MatroidRepr;
use crate::graph::Graph;

#[derive(Clone, Debug, Default)]
pub struct Digraph {
    out: Vec<Vec<usize>>,
}

impl Digraph {
    pub fn new(n: usize) -> Self {
        Digraph { out: vec![Vec::new(); n] }
    }

    /// Both orientations of every edge.
    pub fn symmetric(g: &Graph) -> Self {
        let mut d = Digraph::new(g.n());
        for (u, v) in g.edges() {
            d.add_arc(u, v);
            d.add_arc(v, u);
        }
        d
    }

    pub fn n(&self) -> usize {
        self.out.len()
    }

    pub fn add_vertex(&mut self) -> usize {
        self.out.push(Vec::new());
        self.out.len() - 1
    }

    pub fn add_arc(&mut self, u: usize, v: usize) {
        assert!(u != v, "loop at {u}");
        if !self.out[u].contains(&v) {
            self.out[u].push(v);
        }
    }

    pub fn out(&self, u: usize) -> &[usize] {
        &self.out[u]
    }

    pub fn arcs(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        self.out.iter().enumerate().flat_map(|(u, vs)| vs.iter().map(move |&v| (u, v)))
    }
}

/// Rows are the sources and column `j` represents `ground[j]`: a column set
/// is independent iff (with high probability) its vertices are linked from
/// the sources by vertex-disjoint paths.
///
/// With random arc weights `W`, row `s` of `(I − W)^{-1}` is the
/// path-generating function from `s`; its minors are nonzero exactly when a
/// linkage exists. Vertices without out-arcs do not appear on any other
/// vertex's paths, so their columns are computed from their in-neighbours
/// after solving the system on the rest.
pub fn gammoid_representation(f: Field, d: &Digraph, sources: &[usize], ground: &[usize], rng: &mut impl Rng) -> MatroidRepr {
    let n = d.n();
    let mut is_source = vec![false; n];
    for &s in sources {
        assert!(!is_source[s], "duplicate source {s}");
        is_source[s] = true;
    }
    let mut in_arcs: Vec<Vec<usize>> = vec![Vec::new(); n];
    for (u, v) in d.arcs() {
        in_arcs[v].push(u);
    }
    let core: Vec<usize> = (0..n).filter(|&v| is_source[v] || !d.out(v).is_empty()).collect();
    let mut index = vec![usize::MAX; n];
    for (i, &v) in core.iter().enumerate() {
        index[v] = i;
    }
    loop {
        let mut weight = std::collections::HashMap::new();
        for (u, v) in d.arcs() {
            weight.insert((u, v), f.random_nonzero(rng));
        }
        // (I − W)^T restricted to the core, one right-hand side per source
        let c = core.len();
        let mut a = Matrix::identity(c);
        for (&(u, v), &w) in &weight {
            if index[u] != usize::MAX && index[v] != usize::MAX {
                let cur = a.get(index[v], index[u]);
                a.set(index[v], index[u], f.sub(cur, w));
            }
        }
        let mut rhs = Matrix::zeros(c, sources.len());
        for (i, &s) in sources.iter().enumerate() {
            rhs.set(index[s], i, 1);
        }
        let Some(x) = solve(f, &a, &rhs) else { continue };
        let column = |v: usize| -> Vec<u64> {
            if index[v] != usize::MAX {
                return x.row(index[v]).to_vec();
            }
            let mut col = vec![0; sources.len()];
            for &u in &in_arcs[v] {
                if index[u] != usize::MAX {
                    let w = weight[&(u, v)];
                    for (i, c) in col.iter_mut().enumerate() {
                        *c = f.add(*c, f.mul(w, x.get(index[u], i)));
                    }
                }
            }
            col
        };
        let mut m = Matrix::zeros(sources.len(), ground.len());
        for (j, &v) in ground.iter().enumerate() {
            for (i, e) in column(v).into_iter().enumerate() {
                m.set(i, j, e);
            }
        }
        return MatroidRepr::new(f, m, ground.to_vec());
    }
}

/// Vandermonde columns `(1, x, …, x^(r−1))` at distinct points: every `r`
/// columns are independent.
pub fn uniform_representation(f: Field, labels: &[usize], r: usize) -> MatroidRepr {
    let mut m = Matrix::zeros(r, labels.len());
    for j in 0..labels.len() {
        let x = f.elem(j as u64 + 1);
        let mut e = 1;
        for i in 0..r {
            m.set(i, j, e);
            e = f.mul(e, x);
        }
    }
    MatroidRepr::new(f, m, labels.to_vec())
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand_chacha::ChaCha8Rng;

    fn rng() -> ChaCha8Rng {
        ChaCha8Rng::seed_from_u64(5)
    }

    #[test]
    fn chain_has_rank_one() {
        let f = Field::default();
        let mut d = Digraph::new(3);
        d.add_arc(0, 1);
        d.add_arc(1, 2);
        let m = gammoid_representation(f, &d, &[0], &[0, 1, 2], &mut rng());
        assert_eq!(m.rank(), 1);
        for j in 0..3 {
            assert!(m.is_independent(&[j]));
        }
        assert!(!m.is_independent(&[1, 2]));
    }

    #[test]
    fn isolated_sources_are_free() {
        let f = Field::default();
        let d = Digraph::new(3);
        let m = gammoid_representation(f, &d, &[0, 1, 2], &[0, 1, 2], &mut rng());
        assert!(m.is_independent(&[0, 1, 2]));
    }

    #[test]
    fn private_paths_are_linked() {
        let f = Field::default();
        let mut d = Digraph::new(4);
        d.add_arc(0, 2);
        d.add_arc(1, 3);
        let m = gammoid_representation(f, &d, &[0, 1], &[2, 3], &mut rng());
        assert!(m.is_independent(&[0, 1]));
        let mut shared = Digraph::new(4);
        shared.add_arc(0, 2);
        shared.add_arc(1, 2);
        shared.add_arc(2, 3);
        let m = gammoid_representation(f, &shared, &[0, 1], &[2, 3], &mut rng());
        assert!(!m.is_independent(&[0, 1]));
    }

    #[test]
    fn uniform_any_r_independent() {
        let f = Field::default();
        let u = uniform_representation(f, &[0, 1, 2, 3, 4], 3);
        assert!(u.is_independent(&[0, 2, 4]));
        assert!(!u.is_independent(&[0, 1, 2, 3]));
    }
}
