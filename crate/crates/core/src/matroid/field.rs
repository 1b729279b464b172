//! Arithmetic modulo a prime below 2^62, with products in u128.

use rand::prelude::*;

/// 2^62 − 57.
pub const DEFAULT_PRIME: u64 = 4_611_686_018_427_387_847;

/// A field element is a plain `u64` in `0..p`; the field carries `p`.
pub type FieldElem = u64;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Field {
    p: u64,
}

impl Default for Field {
    fn default() -> Self {
        Field { p: DEFAULT_PRIME }
    }
}

impl Field {
    /// `p` must be an odd prime below 2^62 so that sums fit in a `u64`.
    pub fn new(p: u64) -> Self {
        assert!(p > 2 && p < (1 << 62), "prime {p} out of range");
        assert!(is_prime(p), "{p} is not prime");
        Field { p }
    }

    pub fn p(self) -> u64 {
        self.p
    }

    pub fn elem(self, x: u64) -> FieldElem {
        x % self.p
    }

    pub fn add(self, a: FieldElem, b: FieldElem) -> FieldElem {
        let s = a + b;
        if s >= self.p {
            s - self.p
        } else {
            s
        }
    }

    pub fn sub(self, a: FieldElem, b: FieldElem) -> FieldElem {
        if a >= b {
            a - b
        } else {
            a + self.p - b
        }
    }

    pub fn neg(self, a: FieldElem) -> FieldElem {
        if a == 0 {
            0
        } else {
            self.p - a
        }
    }

    pub fn mul(self, a: FieldElem, b: FieldElem) -> FieldElem {
        ((a as u128 * b as u128) % self.p as u128) as u64
    }

    pub fn pow(self, mut a: FieldElem, mut e: u64) -> FieldElem {
        let mut r = 1;
        while e > 0 {
            if e & 1 == 1 {
                r = self.mul(r, a);
            }
            a = self.mul(a, a);
            e >>= 1;
        }
        r
    }

    pub fn inv(self, a: FieldElem) -> FieldElem {
        assert!(a != 0, "inverse of zero");
        self.pow(a, self.p - 2)
    }

    pub fn random(self, rng: &mut impl Rng) -> FieldElem {
        rng.random_range(0..self.p)
    }

    pub fn random_nonzero(self, rng: &mut impl Rng) -> FieldElem {
        rng.random_range(1..self.p)
    }
}

/// Deterministic Miller–Rabin for 64-bit inputs.
pub fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    for q in [2u64, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37] {
        if n.is_multiple_of(q) {
            return n == q;
        }
    }
    let mulmod = |a: u64, b: u64| ((a as u128 * b as u128) % n as u128) as u64;
    let powmod = |mut a: u64, mut e: u64| {
        let mut r = 1u64;
        while e > 0 {
            if e & 1 == 1 {
                r = mulmod(r, a);
            }
            a = mulmod(a, a);
            e >>= 1;
        }
        r
    };
    let (mut d, mut s) = (n - 1, 0);
    while d % 2 == 0 {
        d /= 2;
        s += 1;
    }
    'witness: for a in [2u64, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37] {
        let mut x = powmod(a, d);
        if x == 1 || x == n - 1 {
            continue;
        }
        for _ in 1..s {
            x = mulmod(x, x);
            if x == n - 1 {
                continue 'witness;
            }
        }
        return false;
    }
    true
}
