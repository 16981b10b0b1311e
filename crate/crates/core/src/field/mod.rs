//! Prime fields, their extensions as polynomial quotient rings, and
//! polynomial arithmetic over either.
//!
//! Field values never carry a pointer to their parent: every operation goes
//! through the field object, which keeps elements small and `Hash`-able.

mod ext;
mod poly;
mod prime;

pub use ext::{ExtField, FieldElem};
pub use poly::{Poly, PolyRing};
pub use prime::PrimeField;

use std::fmt::Debug;
use std::hash::Hash;

use num_bigint::BigUint;
use num_traits::{One, Zero};
use rand::Rng;

use crate::error::Result;

/// Operations shared by prime fields and their extensions.
pub trait FiniteField: Clone + Debug + PartialEq + Eq + Send + Sync {
    type Elem: Clone + Debug + PartialEq + Eq + Hash + Ord + Send + Sync;

    fn characteristic(&self) -> u64;
    fn degree(&self) -> usize;

    fn zero(&self) -> Self::Elem;
    fn one(&self) -> Self::Elem;
    #[allow(clippy::wrong_self_convention)]
    fn from_int(&self, v: i64) -> Self::Elem;
    fn is_zero(&self, a: &Self::Elem) -> bool;

    fn add(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem;
    fn sub(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem;
    fn neg(&self, a: &Self::Elem) -> Self::Elem;
    fn mul(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem;
    fn inv(&self, a: &Self::Elem) -> Result<Self::Elem>;

    /// The element at position `index` of the canonical enumeration
    /// (little-endian base-`p` digits as coefficients).
    fn element_at(&self, index: &BigUint) -> Self::Elem;
    fn random<R: Rng + ?Sized>(&self, rng: &mut R) -> Self::Elem;

    /// Coefficient in the prime subfield, if `a` lies there.
    fn to_base(&self, a: &Self::Elem) -> Option<u64>;

    fn order(&self) -> BigUint {
        BigUint::from(self.characteristic()).pow(self.degree() as u32)
    }

    fn square(&self, a: &Self::Elem) -> Self::Elem {
        self.mul(a, a)
    }

    fn div(&self, a: &Self::Elem, b: &Self::Elem) -> Result<Self::Elem> {
        Ok(self.mul(a, &self.inv(b)?))
    }

    fn scale(&self, a: &Self::Elem, k: i64) -> Self::Elem {
        self.mul(a, &self.from_int(k))
    }

    fn pow(&self, a: &Self::Elem, e: &BigUint) -> Self::Elem {
        let mut acc = self.one();
        for i in (0..e.bits()).rev() {
            acc = self.square(&acc);
            if e.bit(i) {
                acc = self.mul(&acc, a);
            }
        }
        acc
    }

    fn pow_u64(&self, a: &Self::Elem, e: u64) -> Self::Elem {
        let mut acc = self.one();
        for i in (0..64 - e.leading_zeros()).rev() {
            acc = self.square(&acc);
            if (e >> i) & 1 == 1 {
                acc = self.mul(&acc, a);
            }
        }
        acc
    }

    /// The absolute Frobenius `a -> a^p`.
    fn frobenius(&self, a: &Self::Elem) -> Self::Elem {
        self.pow_u64(a, self.characteristic())
    }

    /// Quadratic character: `0`, `1` or `-1`.
    fn legendre(&self, a: &Self::Elem) -> i32 {
        if self.is_zero(a) {
            return 0;
        }
        let e = (self.order() - 1u32) >> 1;
        if self.pow(a, &e) == self.one() {
            1
        } else {
            -1
        }
    }

    fn is_square(&self, a: &Self::Elem) -> bool {
        self.legendre(a) >= 0
    }

    /// Square root by Tonelli–Shanks; of the two roots the canonically smaller
    /// one is returned.
    fn sqrt(&self, a: &Self::Elem) -> Option<Self::Elem> {
        if self.is_zero(a) {
            return Some(self.zero());
        }
        if self.legendre(a) != 1 {
            return None;
        }
        let order_minus_one = self.order() - 1u32;
        let s = order_minus_one.trailing_zeros().unwrap_or(0);
        let odd = &order_minus_one >> s;
        let root = if s == 1 {
            self.pow(a, &((&odd + 1u32) >> 1))
        } else {
            let z = self.non_residue();
            let mut m = s;
            let mut c = self.pow(&z, &odd);
            let mut t = self.pow(a, &odd);
            let mut r = self.pow(a, &((&odd + 1u32) >> 1));
            let one = self.one();
            while t != one {
                let mut i = 0;
                let mut t2 = t.clone();
                while t2 != one {
                    t2 = self.square(&t2);
                    i += 1;
                }
                let mut b = c.clone();
                for _ in 0..(m - i - 1) {
                    b = self.square(&b);
                }
                m = i;
                c = self.square(&b);
                t = self.mul(&t, &c);
                r = self.mul(&r, &b);
            }
            r
        };
        let other = self.neg(&root);
        Some(if other < root { other } else { root })
    }

    /// The first quadratic non-residue in the canonical enumeration.
    fn non_residue(&self) -> Self::Elem {
        let mut i = BigUint::one() + BigUint::one();
        loop {
            let z = self.element_at(&i);
            if self.legendre(&z) == -1 {
                return z;
            }
            i += 1u32;
        }
    }

    /// Every element in canonical order; only sensible for tiny fields.
    fn elements(&self) -> Vec<Self::Elem> {
        let mut out = Vec::new();
        let mut i = BigUint::zero();
        let n = self.order();
        while i < n {
            out.push(self.element_at(&i));
            i += 1u32;
        }
        out
    }
}
