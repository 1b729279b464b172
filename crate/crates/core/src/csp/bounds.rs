//! Slack and the packing lower bounds.

use std::collections::HashMap;
use std::fmt;

use super::packing::HalfIntegralPacking;

/// `k - |F|/2`, stored doubled.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub struct Slack {
    pub twice: i64,
}

impl Slack {
    pub fn is_negative(self) -> bool {
        self.twice < 0
    }
}

impl fmt::Display for Slack {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.twice % 2 == 0 {
            write!(f, "{}", self.twice / 2)
        } else {
            write!(f, "{}/2", self.twice)
        }
    }
}

pub fn slack(k: i64, packing_size: usize) -> Slack {
    Slack { twice: 2 * k - packing_size as i64 }
}

/// `⌈|F|/2⌉`.
pub fn lb1(packing_size: usize) -> usize {
    packing_size.div_ceil(2)
}

/// Paths sharing no vertex with any other packed path each need their own
/// deletion; the rest load every vertex at most twice.
pub fn lb2(packing: &HalfIntegralPacking) -> usize {
    let mut count: HashMap<usize, usize> = HashMap::new();
    for p in &packing.paths {
        let mut vs: Vec<usize> = p.vertices().collect();
        vs.sort_unstable();
        vs.dedup();
        for v in vs {
            *count.entry(v).or_default() += 1;
        }
    }
    let flowers = packing.paths.iter().filter(|p| p.vertices().all(|v| count[&v] == 1)).count();
    flowers + lb1(packing.len() - flowers)
}
