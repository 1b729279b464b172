//! Persistence: commit full-weight vertices of the minimum cover to the
//! solution and proclaim weight-zero implicational regions undeletable.

use std::collections::VecDeque;

use super::instance::CspInstance;
use super::packing::{max_halfintegral_packing, PackingState};
use super::CspError;

#[derive(Clone, Debug)]
pub struct Reduction {
    pub deleted: Vec<usize>,
    pub undeletable: Vec<usize>,
    /// Relaxation of the reduced instance.
    pub state: PackingState,
    pub rounds: usize,
}

/// Applies the persistence rules to a fixpoint, mutating `inst`.
pub fn persistence_reduce(inst: &mut CspInstance, want_paths: bool) -> Result<Reduction, CspError> {
    let (del0, und0) = (inst.deleted().len(), inst.undeletable().len());
    let mut rounds = 0;
    loop {
        rounds += 1;
        let state = max_halfintegral_packing(inst, want_paths);
        let Some(cover) = state.cover.as_ref() else {
            return Ok(finish(inst, del0, und0, state, rounds));
        };
        let mut changed = false;
        for v in 0..inst.num_ids() {
            if inst.is_alive(v) && cover.twice[v] == 2 {
                inst.proclaim_deleted(v)?;
                changed = true;
            }
        }
        let mut queue: VecDeque<usize> = inst.assigned().filter(|&v| cover.twice[v] == 0).collect();
        while let Some(v) = queue.pop_front() {
            if !inst.is_alive(v) {
                continue;
            }
            let nbrs: Vec<usize> = inst.constraints_at(v).map(|(u, _)| u).collect();
            inst.proclaim_undeletable(v)?;
            changed = true;
            for u in nbrs {
                if inst.is_alive(u) && cover.twice[u] == 0 && inst.phi(u).is_some() {
                    queue.push_back(u);
                }
            }
        }
        if !changed {
            return Ok(finish(inst, del0, und0, state, rounds));
        }
    }
}

fn finish(inst: &CspInstance, del0: usize, und0: usize, state: PackingState, rounds: usize) -> Reduction {
    Reduction { deleted: inst.deleted()[del0..].to_vec(), undeletable: inst.undeletable()[und0..].to_vec(), state, rounds }
}
