use num_bigint::BigUint;
use num_traits::ToPrimitive;
use rand::Rng;

use super::FiniteField;
use crate::arith;
use crate::error::{Error, Result};

/// The prime field `F_p`, elements stored as residues in `[0, p)`.
///
/// Any prime below `2^32` is accepted so that the same type also serves the
/// small residue fields `Z/ℓZ`; curves separately insist on `p > 3`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct PrimeField {
    p: u64,
}

impl PrimeField {
    pub fn new(p: u64) -> Result<Self> {
        if p >= 1 << 32 {
            return Err(Error::UnsupportedCharacteristic(p));
        }
        if !arith::is_prime(p) {
            return Err(Error::NotPrime(p));
        }
        Ok(PrimeField { p })
    }

    #[inline]
    pub fn p(&self) -> u64 {
        self.p
    }

    #[inline]
    pub fn reduce(&self, v: i64) -> u64 {
        arith::modulo(v, self.p)
    }

    /// Symmetric lift of a residue into `(-p/2, p/2]`.
    pub fn lift_signed(&self, a: u64) -> i64 {
        if a > self.p / 2 {
            a as i64 - self.p as i64
        } else {
            a as i64
        }
    }

    /// Table of quadratic characters for every residue; used by point counting.
    pub fn character_table(&self) -> Vec<i8> {
        let p = self.p as usize;
        let mut table = vec![-1i8; p];
        table[0] = 0;
        for x in 1..p {
            table[(x * x) % p] = 1;
        }
        table
    }
}

impl FiniteField for PrimeField {
    type Elem = u64;

    fn characteristic(&self) -> u64 {
        self.p
    }

    fn degree(&self) -> usize {
        1
    }

    fn zero(&self) -> u64 {
        0
    }

    fn one(&self) -> u64 {
        1 % self.p
    }

    fn from_int(&self, v: i64) -> u64 {
        self.reduce(v)
    }

    fn is_zero(&self, a: &u64) -> bool {
        *a == 0
    }

    #[inline]
    fn add(&self, a: &u64, b: &u64) -> u64 {
        let s = a + b;
        if s >= self.p {
            s - self.p
        } else {
            s
        }
    }

    #[inline]
    fn sub(&self, a: &u64, b: &u64) -> u64 {
        if a >= b {
            a - b
        } else {
            a + self.p - b
        }
    }

    #[inline]
    fn neg(&self, a: &u64) -> u64 {
        if *a == 0 {
            0
        } else {
            self.p - a
        }
    }

    #[inline]
    fn mul(&self, a: &u64, b: &u64) -> u64 {
        (a * b) % self.p
    }

    fn inv(&self, a: &u64) -> Result<u64> {
        if *a == 0 {
            return Err(Error::DivisionByZero);
        }
        Ok(arith::pow_mod(*a, self.p - 2, self.p))
    }

    fn element_at(&self, index: &BigUint) -> u64 {
        (index % self.p).to_u64().unwrap_or(0)
    }

    fn random<R: Rng + ?Sized>(&self, rng: &mut R) -> u64 {
        rng.gen_range(0..self.p)
    }

    fn to_base(&self, a: &u64) -> Option<u64> {
        Some(*a)
    }

    fn pow_u64(&self, a: &u64, e: u64) -> u64 {
        arith::pow_mod(*a, e, self.p)
    }

    fn frobenius(&self, a: &u64) -> u64 {
        *a
    }

    fn legendre(&self, a: &u64) -> i32 {
        if *a == 0 {
            return 0;
        }
        if self.p == 2 {
            return 1;
        }
        if arith::pow_mod(*a, (self.p - 1) / 2, self.p) == 1 {
            1
        } else {
            -1
        }
    }
}
