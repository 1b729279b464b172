//! Binary 0/1/all relations in tagged form.

use std::fmt;

use super::CspError;

/// Successors of a fixed value under an oriented relation.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Succ {
    None,
    One(u32),
    All,
}

/// A relation `ψ ⊆ D × D` oriented from `u` to `v`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Relation {
    /// `v = π(u)`.
    Perm(Vec<u32>),
    /// `(u = a) ∨ (v = b)`.
    TwoSat { a: u32, b: u32 },
    /// Row-major `d × d` membership table.
    Explicit { d: u32, allowed: Vec<bool> },
}

impl Relation {
    pub fn equality(d: u32) -> Self {
        Relation::Perm((0..d).collect())
    }

    /// Inequality over a binary domain.
    pub fn not_equal() -> Self {
        Relation::Perm(vec![1, 0])
    }

    pub fn perm(pi: Vec<u32>) -> Result<Self, CspError> {
        let d = pi.len();
        let mut seen = vec![false; d];
        for &b in &pi {
            if b as usize >= d || std::mem::replace(&mut seen[b as usize], true) {
                return Err(CspError::InvalidRelation(format!("{pi:?} is not a permutation")));
            }
        }
        Ok(Relation::Perm(pi))
    }

    /// Builds a relation from its pairs, choosing the tagged form when one fits.
    pub fn from_pairs(d: u32, pairs: &[(u32, u32)]) -> Result<Self, CspError> {
        let du = d as usize;
        let mut allowed = vec![false; du * du];
        for &(a, b) in pairs {
            if a >= d || b >= d {
                return Err(CspError::InvalidRelation(format!("pair ({a},{b}) outside domain of size {d}")));
            }
            allowed[a as usize * du + b as usize] = true;
        }
        if !table_is_01all(d, &allowed) {
            return Err(CspError::InvalidRelation(format!("{pairs:?} is not 0/1/all over d = {d}")));
        }
        let rows: Vec<usize> = (0..du).map(|a| (0..du).filter(|&b| allowed[a * du + b]).count()).collect();
        if rows.iter().all(|&c| c == 1) {
            let pi = (0..du).map(|a| (0..du).find(|&b| allowed[a * du + b]).unwrap() as u32).collect();
            if let Ok(p) = Relation::perm(pi) {
                return Ok(p);
            }
        }
        for a in 0..d {
            for b in 0..d {
                let cand = Relation::TwoSat { a, b };
                if (0..d).all(|x| (0..d).all(|y| cand.allows(x, y, d) == allowed[(x * d + y) as usize])) {
                    return Ok(cand);
                }
            }
        }
        Ok(Relation::Explicit { d, allowed })
    }

    pub fn allows(&self, x: u32, y: u32, d: u32) -> bool {
        match self {
            Relation::Perm(pi) => pi[x as usize] == y,
            Relation::TwoSat { a, b } => x == *a || y == *b,
            Relation::Explicit { allowed, .. } => allowed[(x * d + y) as usize],
        }
    }

    pub fn succ(&self, x: u32, d: u32) -> Succ {
        match self {
            Relation::Perm(pi) => Succ::One(pi[x as usize]),
            Relation::TwoSat { a, b } => {
                if x == *a {
                    Succ::All
                } else {
                    Succ::One(*b)
                }
            }
            Relation::Explicit { allowed, .. } => {
                let row = &allowed[(x * d) as usize..((x + 1) * d) as usize];
                let mut it = row.iter().enumerate().filter(|(_, &ok)| ok);
                match (it.next(), it.next()) {
                    (None, _) => Succ::None,
                    (Some((b, _)), None) if d > 1 => Succ::One(b as u32),
                    _ => Succ::All,
                }
            }
        }
    }

    /// The same relation oriented from `v` to `u`.
    pub fn reversed(&self, d: u32) -> Relation {
        match self {
            Relation::Perm(pi) => {
                let mut inv = vec![0; pi.len()];
                for (a, &b) in pi.iter().enumerate() {
                    inv[b as usize] = a as u32;
                }
                Relation::Perm(inv)
            }
            Relation::TwoSat { a, b } => Relation::TwoSat { a: *b, b: *a },
            Relation::Explicit { allowed, .. } => {
                let du = d as usize;
                let t = (0..du * du).map(|i| allowed[(i % du) * du + i / du]).collect();
                Relation::Explicit { d, allowed: t }
            }
        }
    }

    /// Some value in this orientation has no successor.
    pub fn has_zero_row(&self, d: u32) -> bool {
        (0..d).any(|x| self.succ(x, d) == Succ::None)
    }

    /// Invariant under every permutation of the domain applied to both sides.
    pub fn value_symmetric(&self, d: u32) -> bool {
        let diag: Vec<bool> = (0..d).map(|x| self.allows(x, x, d)).collect();
        let off: Vec<bool> = (0..d).flat_map(|x| (0..d).filter(move |&y| y != x).map(move |y| (x, y))).map(|(x, y)| self.allows(x, y, d)).collect();
        diag.windows(2).all(|w| w[0] == w[1]) && off.windows(2).all(|w| w[0] == w[1])
    }

    pub fn pairs(&self, d: u32) -> Vec<(u32, u32)> {
        (0..d).flat_map(|x| (0..d).map(move |y| (x, y))).filter(|&(x, y)| self.allows(x, y, d)).collect()
    }

    pub fn tag(&self) -> &'static str {
        match self {
            Relation::Perm(_) => "PERM",
            Relation::TwoSat { .. } => "2SAT",
            Relation::Explicit { .. } => "EXPL",
        }
    }
}

impl fmt::Display for Relation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Relation::Perm(pi) => {
                let parts: Vec<String> = pi.iter().map(|b| b.to_string()).collect();
                write!(f, "PERM {}", parts.join(","))
            }
            Relation::TwoSat { a, b } => write!(f, "2SAT {a} {b}"),
            Relation::Explicit { allowed, .. } => {
                let bits: String = allowed.iter().map(|&ok| if ok { '1' } else { '0' }).collect();
                write!(f, "EXPL {bits}")
            }
        }
    }
}

fn table_is_01all(d: u32, allowed: &[bool]) -> bool {
    let du = d as usize;
    let ok = |c: usize| c == 0 || c == 1 || c == du;
    (0..du).all(|a| ok((0..du).filter(|&b| allowed[a * du + b]).count()))
        && (0..du).all(|b| ok((0..du).filter(|&a| allowed[a * du + b]).count()))
}

/// Whether `pairs ⊆ D × D` leaves 0, 1 or all values in every row and column.
pub fn validate_01all(pairs: &[(u32, u32)], d: u32) -> bool {
    let du = d as usize;
    let mut allowed = vec![false; du * du];
    for &(a, b) in pairs {
        if a >= d || b >= d {
            return false;
        }
        allowed[a as usize * du + b as usize] = true;
    }
    table_is_01all(d, &allowed)
}
