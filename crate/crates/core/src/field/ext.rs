use std::collections::HashMap;
use std::sync::{Arc, Mutex, OnceLock};

use num_bigint::BigUint;
use num_traits::ToPrimitive;
use rand::Rng;

use super::{FiniteField, Poly, PolyRing, PrimeField};
use crate::error::{Error, Result};

/// An element of `F_p[x]/(m)`, stored as exactly `k` little-endian residues.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct FieldElem(pub Vec<u64>);

/// `F_{p^k}` as `F_p[x]/(m)` with `m` the least monic irreducible of degree `k`
/// when coefficient vectors `(c_0, ..., c_{k-1})` are compared lexicographically.
#[derive(Clone, Debug)]
pub struct ExtField {
    base: PrimeField,
    k: usize,
    modulus: Arc<Vec<u64>>,
    // Nonzero terms of -(m - x^k), used for reduction.
    tail: Arc<Vec<(usize, u64)>>,
    non_residue: Arc<OnceLock<FieldElem>>,
}

impl PartialEq for ExtField {
    fn eq(&self, other: &Self) -> bool {
        self.base == other.base && self.modulus == other.modulus
    }
}

impl Eq for ExtField {}

fn modulus_cache() -> &'static Mutex<HashMap<(u64, usize), Arc<Vec<u64>>>> {
    static CACHE: OnceLock<Mutex<HashMap<(u64, usize), Arc<Vec<u64>>>>> = OnceLock::new();
    CACHE.get_or_init(|| Mutex::new(HashMap::new()))
}

fn least_irreducible(base: PrimeField, k: usize) -> Vec<u64> {
    if k == 1 {
        return vec![0, 1];
    }
    let p = base.p();
    let ring = PolyRing::new(base);
    // Odometer over (c_0, ..., c_{k-1}) with c_{k-1} the fastest digit; c_0 = 0 is
    // always reducible so it starts at 1.
    let mut digits = vec![0u64; k];
    digits[0] = 1;
    loop {
        let mut coeffs = digits.clone();
        coeffs.push(1);
        let f = ring.from_coeffs(coeffs.clone());
        if ring.is_irreducible(&f) {
            return coeffs;
        }
        let mut i = k - 1;
        loop {
            digits[i] += 1;
            if digits[i] < p {
                break;
            }
            digits[i] = 0;
            i -= 1;
        }
    }
}

impl ExtField {
    pub fn new(base: PrimeField, k: usize) -> Result<Self> {
        if k == 0 {
            return Err(Error::InvalidArgument("extension degree must be positive".into()));
        }
        let key = (base.p(), k);
        let cached = modulus_cache().lock().expect("cache poisoned").get(&key).cloned();
        let modulus = match cached {
            Some(m) => m,
            None => {
                let m = Arc::new(least_irreducible(base, k));
                modulus_cache().lock().expect("cache poisoned").insert(key, m.clone());
                m
            }
        };
        Ok(Self::from_parts(base, modulus))
    }

    /// Use a caller-chosen monic irreducible modulus (little-endian, leading 1).
    pub fn with_modulus(base: PrimeField, modulus: Vec<u64>) -> Result<Self> {
        let ring = PolyRing::new(base);
        let f = ring.from_coeffs(modulus.iter().map(|&c| c % base.p()).collect());
        if f.leading() != Some(&1) || !ring.is_irreducible(&f) {
            return Err(Error::InvalidArgument("modulus must be monic irreducible".into()));
        }
        Ok(Self::from_parts(base, Arc::new(f.into_coeffs())))
    }

    fn from_parts(base: PrimeField, modulus: Arc<Vec<u64>>) -> Self {
        let k = modulus.len() - 1;
        let p = base.p();
        let tail = modulus[..k]
            .iter()
            .enumerate()
            .filter(|(_, &c)| c != 0)
            .map(|(i, &c)| (i, (p - c) % p))
            .collect();
        ExtField {
            base,
            k,
            modulus,
            tail: Arc::new(tail),
            non_residue: Arc::new(OnceLock::new()),
        }
    }

    pub fn base(&self) -> PrimeField {
        self.base
    }

    pub fn modulus(&self) -> &[u64] {
        &self.modulus
    }

    pub fn embed(&self, a: u64) -> FieldElem {
        let mut v = vec![0u64; self.k];
        v[0] = a % self.base.p();
        FieldElem(v)
    }

    /// The class of `x` (`x` itself when `k = 1` reduces to a constant).
    pub fn generator(&self) -> FieldElem {
        self.from_poly(&[0, 1])
    }

    /// Reduce an arbitrary `F_p` polynomial into the field.
    pub fn from_poly(&self, coeffs: &[u64]) -> FieldElem {
        let p = self.base.p();
        let mut v: Vec<u64> = coeffs.iter().map(|c| c % p).collect();
        self.reduce_in_place(&mut v);
        FieldElem(v)
    }

    fn reduce_in_place(&self, v: &mut Vec<u64>) {
        let p = self.base.p();
        let k = self.k;
        for i in (k..v.len()).rev() {
            let c = v[i];
            if c == 0 {
                continue;
            }
            for &(j, m) in self.tail.iter() {
                let idx = i - k + j;
                v[idx] = (v[idx] + c * m) % p;
            }
        }
        v.resize(k, 0);
    }
}

impl FiniteField for ExtField {
    type Elem = FieldElem;

    fn characteristic(&self) -> u64 {
        self.base.p()
    }

    fn degree(&self) -> usize {
        self.k
    }

    fn zero(&self) -> FieldElem {
        FieldElem(vec![0; self.k])
    }

    fn one(&self) -> FieldElem {
        self.embed(1)
    }

    fn from_int(&self, v: i64) -> FieldElem {
        self.embed(self.base.reduce(v))
    }

    fn is_zero(&self, a: &FieldElem) -> bool {
        a.0.iter().all(|&c| c == 0)
    }

    fn add(&self, a: &FieldElem, b: &FieldElem) -> FieldElem {
        FieldElem(a.0.iter().zip(&b.0).map(|(x, y)| self.base.add(x, y)).collect())
    }

    fn sub(&self, a: &FieldElem, b: &FieldElem) -> FieldElem {
        FieldElem(a.0.iter().zip(&b.0).map(|(x, y)| self.base.sub(x, y)).collect())
    }

    fn neg(&self, a: &FieldElem) -> FieldElem {
        FieldElem(a.0.iter().map(|x| self.base.neg(x)).collect())
    }

    fn mul(&self, a: &FieldElem, b: &FieldElem) -> FieldElem {
        let k = self.k;
        let p = self.base.p() as u128;
        let mut acc = vec![0u128; 2 * k - 1];
        for (i, &x) in a.0.iter().enumerate() {
            if x == 0 {
                continue;
            }
            for (j, &y) in b.0.iter().enumerate() {
                acc[i + j] += (x * y) as u128;
            }
        }
        let mut v: Vec<u64> = acc.into_iter().map(|c| (c % p) as u64).collect();
        self.reduce_in_place(&mut v);
        FieldElem(v)
    }

    fn inv(&self, a: &FieldElem) -> Result<FieldElem> {
        if self.is_zero(a) {
            return Err(Error::DivisionByZero);
        }
        let ring = PolyRing::new(self.base);
        let f: Poly<u64> = ring.from_coeffs(a.0.clone());
        let m = ring.from_coeffs(self.modulus.to_vec());
        let (g, s, _) = ring.ext_gcd(&f, &m);
        if g.degree() != Some(0) {
            return Err(Error::Invariant("extension modulus is reducible".into()));
        }
        Ok(self.from_poly(s.coeffs()))
    }

    fn element_at(&self, index: &BigUint) -> FieldElem {
        let p = self.base.p();
        let mut n = index.clone();
        let mut v = Vec::with_capacity(self.k);
        for _ in 0..self.k {
            v.push((&n % p).to_u64().unwrap_or(0));
            n /= p;
        }
        FieldElem(v)
    }

    fn random<R: Rng + ?Sized>(&self, rng: &mut R) -> FieldElem {
        FieldElem((0..self.k).map(|_| self.base.random(rng)).collect())
    }

    /// The least non-residue in canonical order, memoized. In even degree
    /// every base element is a square, so the scan starts at `x`.
    fn non_residue(&self) -> FieldElem {
        self.non_residue
            .get_or_init(|| {
                let mut i = BigUint::from(if self.k.is_multiple_of(2) { self.base.p() } else { 2 });
                loop {
                    let z = self.element_at(&i);
                    if self.legendre(&z) == -1 {
                        return z;
                    }
                    i += 1u32;
                }
            })
            .clone()
    }

    fn to_base(&self, a: &FieldElem) -> Option<u64> {
        a.0[1..].iter().all(|&c| c == 0).then_some(a.0[0])
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn least_quadratic_modulus_over_five() {
        let f = ExtField::new(PrimeField::new(5).unwrap(), 2).unwrap();
        assert_eq!(f.modulus(), &[1, 1, 1]);
    }

    #[test]
    fn field_axioms_hold_in_f_7_cubed() {
        let f = ExtField::new(PrimeField::new(7).unwrap(), 3).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        for _ in 0..100 {
            let a = f.random(&mut rng);
            let b = f.random(&mut rng);
            let c = f.random(&mut rng);
            assert_eq!(f.mul(&a, &f.add(&b, &c)), f.add(&f.mul(&a, &b), &f.mul(&a, &c)));
            if !f.is_zero(&a) {
                assert_eq!(f.mul(&a, &f.inv(&a).unwrap()), f.one());
            }
            // Fermat in F_{343}.
            assert_eq!(f.pow_u64(&a, 343), a);
        }
    }

    #[test]
    fn square_roots_in_extension() {
        let f = ExtField::new(PrimeField::new(13).unwrap(), 2).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        for _ in 0..50 {
            let a = f.random(&mut rng);
            let sq = f.square(&a);
            let r = f.sqrt(&sq).unwrap();
            assert_eq!(f.square(&r), sq);
        }
        // Every base-field element is a square in F_{p^2}.
        for c in 0..13 {
            assert!(f.is_square(&f.embed(c)));
        }
    }

    #[test]
    fn custom_modulus_rejected_when_reducible() {
        let base = PrimeField::new(5).unwrap();
        assert!(ExtField::with_modulus(base, vec![1, 0, 1]).is_err());
        assert!(ExtField::with_modulus(base, vec![2, 0, 1]).is_ok());
    }
}
