//! CSP 0/1/all Extension instances with deletion and undeletable proclamation.

use std::fmt::Write as _;
use std::collections::HashMap;
use std::sync::Arc;

use super::relation::{Relation, Succ};
use super::CspError;

#[derive(Debug)]
struct Shared {
    d: u32,
    /// `adj[u]` holds `(v, rel)` with `rels[rel]` oriented from `u` to `v`.
    adj: Vec<Vec<(usize, usize)>>,
    rels: Vec<Relation>,
    value_symmetric: bool,
    zero_rows: bool,
    /// Vertices grouped by identical constraint lists (false twins).
    twins: Vec<Vec<usize>>,
    twin_class: Vec<usize>,
}

/// A CSP instance: constraint graph, partial assignment, budget, and the
/// deletions committed so far. Cloning copies only the per-vertex state.
#[derive(Clone, Debug)]
pub struct CspInstance {
    shared: Arc<Shared>,
    alive: Vec<bool>,
    phi: Vec<Option<u32>>,
    k: i64,
    deleted: Vec<usize>,
    undeletable: Vec<usize>,
}

#[derive(Clone, Debug)]
pub struct CspBuilder {
    d: u32,
    n: usize,
    edges: Vec<(usize, usize, Relation)>,
    phi: Vec<Option<u32>>,
    k: i64,
}

impl CspBuilder {
    pub fn new(d: u32, n: usize) -> Self {
        assert!(d >= 1, "empty domain");
        CspBuilder { d, n, edges: Vec::new(), phi: vec![None; n], k: 0 }
    }

    pub fn budget(mut self, k: usize) -> Self {
        self.k = k as i64;
        self
    }

    pub fn assign(&mut self, v: usize, a: u32) -> &mut Self {
        assert!(a < self.d, "value {a} outside domain");
        self.phi[v] = Some(a);
        self
    }

    /// Adds constraint `rel` oriented from `u` to `v`.
    pub fn constrain(&mut self, u: usize, v: usize, rel: Relation) -> &mut Self {
        assert!(u != v && u < self.n && v < self.n, "bad constraint endpoints ({u},{v})");
        self.edges.push((u, v, rel));
        self
    }

    pub fn build(self) -> Result<CspInstance, CspError> {
        let d = self.d;
        let mut adj = vec![Vec::new(); self.n];
        let mut rels = Vec::with_capacity(2 * self.edges.len());
        for (u, v, rel) in self.edges {
            if let Relation::Explicit { d: dd, ref allowed } = rel {
                let pairs: Vec<(u32, u32)> = (0..dd * dd).filter(|&i| allowed[i as usize]).map(|i| (i / dd, i % dd)).collect();
                if dd != d || !super::relation::validate_01all(&pairs, d) {
                    return Err(CspError::InvalidRelation(format!("constraint ({u},{v}) is not 0/1/all over d = {d}")));
                }
            }
            if let Relation::Perm(ref pi) = rel {
                if pi.len() != d as usize {
                    return Err(CspError::InvalidRelation(format!("constraint ({u},{v}) has permutation of wrong length")));
                }
            }
            if let Relation::TwoSat { a, b } = rel {
                if a >= d || b >= d {
                    return Err(CspError::InvalidRelation(format!("constraint ({u},{v}) names values outside the domain")));
                }
            }
            if adj[u].iter().any(|&(w, _)| w == v) {
                return Err(CspError::DuplicateConstraint(u, v));
            }
            let rev = rel.reversed(d);
            adj[u].push((v, rels.len()));
            rels.push(rel);
            adj[v].push((u, rels.len()));
            rels.push(rev);
        }
        let value_symmetric = rels.iter().all(|r| r.value_symmetric(d));
        let zero_rows = rels.iter().any(|r| r.has_zero_row(d));
        let (twins, twin_class) = twin_classes(d, &adj, &rels);
        let shared = Arc::new(Shared { d, adj, rels, value_symmetric, zero_rows, twins, twin_class });
        Ok(CspInstance { shared, alive: vec![true; self.n], phi: self.phi, k: self.k, deleted: Vec::new(), undeletable: Vec::new() })
    }
}

/// Neighbours with the relation pairs towards them, sorted.
type TwinKey = Vec<(usize, Vec<(u32, u32)>)>;

fn twin_classes(d: u32, adj: &[Vec<(usize, usize)>], rels: &[Relation]) -> (Vec<Vec<usize>>, Vec<usize>) {
    let mut by_key: HashMap<TwinKey, usize> = HashMap::new();
    let mut twins: Vec<Vec<usize>> = Vec::new();
    let mut class = Vec::with_capacity(adj.len());
    for (u, list) in adj.iter().enumerate() {
        let mut key: TwinKey = list.iter().map(|&(v, r)| (v, rels[r].pairs(d))).collect();
        key.sort_unstable();
        let c = *by_key.entry(key).or_insert_with(|| {
            twins.push(Vec::new());
            twins.len() - 1
        });
        twins[c].push(u);
        class.push(c);
    }
    (twins, class)
}

impl CspInstance {
    pub fn domain_size(&self) -> u32 {
        self.shared.d
    }

    /// Number of vertex ids (alive or not).
    pub fn num_ids(&self) -> usize {
        self.alive.len()
    }

    pub fn alive_count(&self) -> usize {
        self.alive.iter().filter(|&&a| a).count()
    }

    pub fn is_alive(&self, v: usize) -> bool {
        self.alive[v]
    }

    pub fn alive_vertices(&self) -> impl Iterator<Item = usize> + '_ {
        (0..self.alive.len()).filter(|&v| self.alive[v])
    }

    pub fn phi(&self, v: usize) -> Option<u32> {
        self.phi[v]
    }

    pub fn budget(&self) -> i64 {
        self.k
    }

    pub fn set_budget(&mut self, k: i64) {
        self.k = k;
    }

    pub fn deleted(&self) -> &[usize] {
        &self.deleted
    }

    pub fn undeletable(&self) -> &[usize] {
        &self.undeletable
    }

    pub fn value_symmetric(&self) -> bool {
        self.shared.value_symmetric
    }

    pub fn has_zero_rows(&self) -> bool {
        self.shared.zero_rows
    }

    /// Alive neighbours with the relation oriented away from `u`.
    pub fn constraints_at(&self, u: usize) -> impl Iterator<Item = (usize, &Relation)> + '_ {
        self.shared.adj[u].iter().filter(|&&(v, _)| self.alive[v]).map(|&(v, r)| (v, &self.shared.rels[r]))
    }

    pub fn degree(&self, u: usize) -> usize {
        self.constraints_at(u).count()
    }

    /// Alive vertices other than `v` with exactly `v`'s constraints and the
    /// same assigned value. If `v` is kept, any solution stays one after
    /// keeping these too; if `v` is deleted while one of them is kept,
    /// keeping `v` as well is no worse.
    pub fn twins_of(&self, v: usize) -> impl Iterator<Item = usize> + '_ {
        let p = self.phi[v];
        self.shared.twins[self.shared.twin_class[v]].iter().copied().filter(move |&u| u != v && self.alive[u] && self.phi[u] == p)
    }

    pub fn succ(&self, rel: &Relation, a: u32) -> Succ {
        rel.succ(a, self.shared.d)
    }

    pub fn assigned(&self) -> impl Iterator<Item = usize> + '_ {
        self.alive_vertices().filter(|&v| self.phi[v].is_some())
    }

    /// Copy of this instance restricted to the alive vertices in `keep`, with
    /// an empty running solution.
    pub fn restrict(&self, keep: &[usize], k: i64) -> CspInstance {
        let mut alive = vec![false; self.alive.len()];
        for &v in keep {
            alive[v] = self.alive[v];
        }
        CspInstance { shared: Arc::clone(&self.shared), alive, phi: self.phi.clone(), k, deleted: Vec::new(), undeletable: Vec::new() }
    }

    /// Components of the alive constraint graph, each sorted.
    pub fn components(&self) -> Vec<Vec<usize>> {
        let n = self.alive.len();
        let mut seen = vec![false; n];
        let mut out = Vec::new();
        for s in self.alive_vertices() {
            if seen[s] {
                continue;
            }
            seen[s] = true;
            let mut comp = vec![s];
            let mut i = 0;
            while i < comp.len() {
                let u = comp[i];
                i += 1;
                for (w, _) in self.constraints_at(u) {
                    if !seen[w] {
                        seen[w] = true;
                        comp.push(w);
                    }
                }
            }
            comp.sort_unstable();
            out.push(comp);
        }
        out
    }

    /// Removes `v` into the solution, spending one unit of budget.
    pub fn proclaim_deleted(&mut self, v: usize) -> Result<(), CspError> {
        assert!(self.alive[v], "vertex {v} already removed");
        if self.k <= 0 {
            return Err(CspError::BudgetExhausted);
        }
        self.alive[v] = false;
        self.k -= 1;
        self.deleted.push(v);
        Ok(())
    }

    /// Commits `v` to its assigned value: neighbours are forced, deleted when
    /// they conflict, and `v` leaves the graph without spending budget.
    pub fn proclaim_undeletable(&mut self, v: usize) -> Result<(), CspError> {
        assert!(self.alive[v], "vertex {v} already removed");
        let a = self.phi[v].expect("undeletable vertex needs an assigned value");
        let d = self.shared.d;
        let shared = Arc::clone(&self.shared);
        self.alive[v] = false;
        self.undeletable.push(v);
        for &(u, r) in &shared.adj[v] {
            if !self.alive[u] {
                continue;
            }
            match shared.rels[r].succ(a, d) {
                Succ::All => {}
                Succ::None => self.proclaim_deleted(u)?,
                Succ::One(b) => match self.phi[u] {
                    None => self.phi[u] = Some(b),
                    Some(c) if c == b => {}
                    Some(_) => self.proclaim_deleted(u)?,
                },
            }
        }
        Ok(())
    }

    /// Fixes `phi(v) = a` for a currently unassigned vertex.
    pub fn assign(&mut self, v: usize, a: u32) {
        assert!(a < self.shared.d);
        self.phi[v] = Some(a);
    }

    /// Checks that deleting `x` from the original instance leaves an
    /// assignment extending the current `phi`; used as an oracle.
    pub fn is_solution(&self, x: &[usize]) -> bool {
        find_assignment(self, x).is_some()
    }

    /// One line per constraint: `u v TAG data`.
    pub fn dump(&self) -> String {
        let mut out = String::new();
        for u in self.alive_vertices() {
            for &(v, r) in &self.shared.adj[u] {
                if u < v && self.alive[v] {
                    writeln!(out, "{u} {v} {}", self.shared.rels[r]).unwrap();
                }
            }
        }
        out
    }
}

/// Backtracking search for an assignment of the alive vertices outside `x`
/// that extends `phi` and satisfies all constraints among them.
pub fn find_assignment(inst: &CspInstance, x: &[usize]) -> Option<Vec<Option<u32>>> {
    let n = inst.num_ids();
    let d = inst.domain_size();
    let mut present = inst.alive.clone();
    for &v in x {
        present[v] = false;
    }
    let mut val: Vec<Option<u32>> = (0..n).map(|v| if present[v] { inst.phi[v] } else { None }).collect();
    for u in 0..n {
        if !present[u] {
            continue;
        }
        if let Some(a) = val[u] {
            for &(w, r) in &inst.shared.adj[u] {
                if present[w] {
                    if let Some(b) = val[w] {
                        if !inst.shared.rels[r].allows(a, b, d) {
                            return None;
                        }
                    }
                }
            }
        }
    }
    let free: Vec<usize> = (0..n).filter(|&v| present[v] && val[v].is_none()).collect();
    fn rec(i: usize, free: &[usize], val: &mut [Option<u32>], present: &[bool], inst: &CspInstance) -> bool {
        let Some(&u) = free.get(i) else { return true };
        let d = inst.domain_size();
        for a in 0..d {
            let ok = inst.shared.adj[u]
                .iter()
                .all(|&(w, r)| !present[w] || val[w].is_none_or(|b| inst.shared.rels[r].allows(a, b, d)));
            if ok {
                val[u] = Some(a);
                if rec(i + 1, free, val, present, inst) {
                    return true;
                }
                val[u] = None;
            }
        }
        false
    }
    rec(0, &free, &mut val, &present, inst).then_some(val)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn chain() -> CspInstance {
        // a = 0 (φ = t1), b = 1 (φ = t2), equality
        let mut b = CspBuilder::new(2, 2).budget(1);
        b.assign(0, 0).assign(1, 1).constrain(0, 1, Relation::equality(2));
        b.build().unwrap()
    }

    #[test]
    fn delete_spends_budget() {
        let mut one = CspBuilder::new(2, 1).budget(1).build().unwrap();
        one.proclaim_deleted(0).unwrap();
        assert_eq!((one.alive_count(), one.budget()), (0, 0));
        let mut inst = chain();
        inst.proclaim_deleted(0).unwrap();
        assert_eq!(inst.phi(1), Some(1));
        assert_eq!(inst.proclaim_deleted(1), Err(CspError::BudgetExhausted));
    }

    #[test]
    fn undeletable_cases() {
        let mut b = CspBuilder::new(2, 2).budget(0);
        b.assign(0, 0).constrain(0, 1, Relation::equality(2));
        let mut inst = b.build().unwrap();
        inst.proclaim_undeletable(0).unwrap();
        assert_eq!(inst.phi(1), Some(0));
        assert!(!inst.is_alive(0));

        let mut inst = chain();
        inst.proclaim_undeletable(0).unwrap();
        assert_eq!(inst.deleted(), &[1]);
        assert_eq!(inst.budget(), 0);

        let mut b = CspBuilder::new(2, 1);
        b.assign(0, 1);
        let mut iso = b.build().unwrap();
        iso.proclaim_undeletable(0).unwrap();
        assert_eq!((iso.alive_count(), iso.budget()), (0, 0));
    }

    #[test]
    fn duplicate_and_invalid_constraints() {
        let mut b = CspBuilder::new(2, 2);
        b.constrain(0, 1, Relation::not_equal()).constrain(1, 0, Relation::not_equal());
        assert_eq!(b.build().unwrap_err(), CspError::DuplicateConstraint(1, 0));
        let mut b = CspBuilder::new(3, 2);
        b.constrain(0, 1, Relation::Explicit { d: 3, allowed: vec![true, true, false, false, false, false, false, false, false] });
        assert!(matches!(b.build(), Err(CspError::InvalidRelation(_))));
    }

    #[test]
    fn dump_format() {
        let mut b = CspBuilder::new(2, 3);
        b.constrain(0, 1, Relation::not_equal()).constrain(2, 1, Relation::TwoSat { a: 0, b: 1 });
        assert_eq!(b.build().unwrap().dump(), "0 1 PERM 1,0\n1 2 2SAT 1 0\n");
    }
}
