use num_bigint::BigUint;
use rand::Rng;

use super::FiniteField;
use crate::error::{Error, Result};

/// Dense polynomial with little-endian coefficients; the zero polynomial has
/// no coefficients and the leading coefficient is otherwise nonzero.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Poly<E> {
    coeffs: Vec<E>,
}

impl<E> Poly<E> {
    pub fn coeffs(&self) -> &[E] {
        &self.coeffs
    }

    pub fn into_coeffs(self) -> Vec<E> {
        self.coeffs
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// `None` for the zero polynomial.
    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn leading(&self) -> Option<&E> {
        self.coeffs.last()
    }

    pub fn coeff(&self, i: usize) -> Option<&E> {
        self.coeffs.get(i)
    }
}

/// Polynomial arithmetic over a fixed field.
#[derive(Clone, Debug)]
pub struct PolyRing<F: FiniteField> {
    field: F,
}

impl<F: FiniteField> PolyRing<F> {
    pub fn new(field: F) -> Self {
        PolyRing { field }
    }

    pub fn field(&self) -> &F {
        &self.field
    }

    pub fn from_coeffs(&self, mut coeffs: Vec<F::Elem>) -> Poly<F::Elem> {
        while coeffs.last().is_some_and(|c| self.field.is_zero(c)) {
            coeffs.pop();
        }
        Poly { coeffs }
    }

    pub fn from_ints(&self, coeffs: &[i64]) -> Poly<F::Elem> {
        self.from_coeffs(coeffs.iter().map(|&c| self.field.from_int(c)).collect())
    }

    pub fn zero(&self) -> Poly<F::Elem> {
        Poly { coeffs: Vec::new() }
    }

    pub fn one(&self) -> Poly<F::Elem> {
        self.constant(self.field.one())
    }

    pub fn constant(&self, c: F::Elem) -> Poly<F::Elem> {
        self.from_coeffs(vec![c])
    }

    pub fn x(&self) -> Poly<F::Elem> {
        self.from_coeffs(vec![self.field.zero(), self.field.one()])
    }

    /// `x - c`.
    pub fn linear(&self, c: &F::Elem) -> Poly<F::Elem> {
        self.from_coeffs(vec![self.field.neg(c), self.field.one()])
    }

    pub fn add(&self, a: &Poly<F::Elem>, b: &Poly<F::Elem>) -> Poly<F::Elem> {
        let n = a.coeffs.len().max(b.coeffs.len());
        let zero = self.field.zero();
        let coeffs = (0..n)
            .map(|i| {
                let x = a.coeffs.get(i).unwrap_or(&zero);
                let y = b.coeffs.get(i).unwrap_or(&zero);
                self.field.add(x, y)
            })
            .collect();
        self.from_coeffs(coeffs)
    }

    pub fn sub(&self, a: &Poly<F::Elem>, b: &Poly<F::Elem>) -> Poly<F::Elem> {
        let n = a.coeffs.len().max(b.coeffs.len());
        let zero = self.field.zero();
        let coeffs = (0..n)
            .map(|i| {
                let x = a.coeffs.get(i).unwrap_or(&zero);
                let y = b.coeffs.get(i).unwrap_or(&zero);
                self.field.sub(x, y)
            })
            .collect();
        self.from_coeffs(coeffs)
    }

    pub fn neg(&self, a: &Poly<F::Elem>) -> Poly<F::Elem> {
        Poly {
            coeffs: a.coeffs.iter().map(|c| self.field.neg(c)).collect(),
        }
    }

    pub fn scale(&self, a: &Poly<F::Elem>, k: &F::Elem) -> Poly<F::Elem> {
        self.from_coeffs(a.coeffs.iter().map(|c| self.field.mul(c, k)).collect())
    }

    pub fn mul(&self, a: &Poly<F::Elem>, b: &Poly<F::Elem>) -> Poly<F::Elem> {
        if a.is_zero() || b.is_zero() {
            return self.zero();
        }
        let mut out = vec![self.field.zero(); a.coeffs.len() + b.coeffs.len() - 1];
        for (i, x) in a.coeffs.iter().enumerate() {
            if self.field.is_zero(x) {
                continue;
            }
            for (j, y) in b.coeffs.iter().enumerate() {
                let prod = self.field.mul(x, y);
                out[i + j] = self.field.add(&out[i + j], &prod);
            }
        }
        self.from_coeffs(out)
    }

    pub fn divrem(&self, a: &Poly<F::Elem>, b: &Poly<F::Elem>) -> Result<(Poly<F::Elem>, Poly<F::Elem>)> {
        let db = b.degree().ok_or(Error::DivisionByZero)?;
        let lead_inv = self.field.inv(b.leading().expect("nonzero"))?;
        let mut rem = a.coeffs.clone();
        if rem.len() <= db {
            return Ok((self.zero(), self.from_coeffs(rem)));
        }
        let mut quot = vec![self.field.zero(); rem.len() - db];
        for i in (db..rem.len()).rev() {
            let c = self.field.mul(&rem[i], &lead_inv);
            if self.field.is_zero(&c) {
                continue;
            }
            for (j, bj) in b.coeffs.iter().enumerate() {
                let t = self.field.mul(&c, bj);
                rem[i - db + j] = self.field.sub(&rem[i - db + j], &t);
            }
            quot[i - db] = c;
        }
        rem.truncate(db);
        Ok((self.from_coeffs(quot), self.from_coeffs(rem)))
    }

    pub fn rem(&self, a: &Poly<F::Elem>, b: &Poly<F::Elem>) -> Result<Poly<F::Elem>> {
        Ok(self.divrem(a, b)?.1)
    }

    /// Exact quotient; errors if `b` does not divide `a`.
    pub fn div_exact(&self, a: &Poly<F::Elem>, b: &Poly<F::Elem>) -> Result<Poly<F::Elem>> {
        let (q, r) = self.divrem(a, b)?;
        if !r.is_zero() {
            return Err(Error::Invariant("inexact polynomial division".into()));
        }
        Ok(q)
    }

    pub fn is_one(&self, f: &Poly<F::Elem>) -> bool {
        f.degree() == Some(0) && f.coeffs[0] == self.field.one()
    }

    pub fn monic(&self, a: &Poly<F::Elem>) -> Poly<F::Elem> {
        match a.leading() {
            None => self.zero(),
            Some(l) => {
                let inv = self.field.inv(l).expect("leading coefficient is nonzero");
                self.scale(a, &inv)
            }
        }
    }

    /// Monic greatest common divisor (zero only if both inputs are zero).
    pub fn gcd(&self, a: &Poly<F::Elem>, b: &Poly<F::Elem>) -> Poly<F::Elem> {
        let mut x = a.clone();
        let mut y = b.clone();
        while !y.is_zero() {
            let r = self.rem(&x, &y).expect("nonzero divisor");
            x = y;
            y = r;
        }
        self.monic(&x)
    }

    /// `(g, s, t)` with `s a + t b = g` and `g` monic.
    pub fn ext_gcd(&self, a: &Poly<F::Elem>, b: &Poly<F::Elem>) -> (Poly<F::Elem>, Poly<F::Elem>, Poly<F::Elem>) {
        let (mut r0, mut r1) = (a.clone(), b.clone());
        let (mut s0, mut s1) = (self.one(), self.zero());
        let (mut t0, mut t1) = (self.zero(), self.one());
        while !r1.is_zero() {
            let (q, r) = self.divrem(&r0, &r1).expect("nonzero divisor");
            r0 = std::mem::replace(&mut r1, r);
            let s = self.sub(&s0, &self.mul(&q, &s1));
            s0 = std::mem::replace(&mut s1, s);
            let t = self.sub(&t0, &self.mul(&q, &t1));
            t0 = std::mem::replace(&mut t1, t);
        }
        match r0.leading() {
            None => (r0, s0, t0),
            Some(l) => {
                let inv = self.field.inv(l).expect("nonzero");
                (self.scale(&r0, &inv), self.scale(&s0, &inv), self.scale(&t0, &inv))
            }
        }
    }

    pub fn mulmod(&self, a: &Poly<F::Elem>, b: &Poly<F::Elem>, m: &Poly<F::Elem>) -> Poly<F::Elem> {
        self.rem(&self.mul(a, b), m).expect("nonzero modulus")
    }

    pub fn powmod(&self, base: &Poly<F::Elem>, e: &BigUint, m: &Poly<F::Elem>) -> Poly<F::Elem> {
        let base = self.rem(base, m).expect("nonzero modulus");
        let mut acc = self.rem(&self.one(), m).expect("nonzero modulus");
        for i in (0..e.bits()).rev() {
            acc = self.mulmod(&acc, &acc, m);
            if e.bit(i) {
                acc = self.mulmod(&acc, &base, m);
            }
        }
        acc
    }

    pub fn eval(&self, f: &Poly<F::Elem>, x: &F::Elem) -> F::Elem {
        f.coeffs
            .iter()
            .rev()
            .fold(self.field.zero(), |acc, c| self.field.add(&self.field.mul(&acc, x), c))
    }

    pub fn derivative(&self, f: &Poly<F::Elem>) -> Poly<F::Elem> {
        let coeffs = f
            .coeffs
            .iter()
            .enumerate()
            .skip(1)
            .map(|(i, c)| self.field.scale(c, i as i64))
            .collect();
        self.from_coeffs(coeffs)
    }

    /// `∏ (x - r)` over the given roots.
    pub fn from_roots(&self, roots: &[F::Elem]) -> Poly<F::Elem> {
        roots.iter().fold(self.one(), |acc, r| self.mul(&acc, &self.linear(r)))
    }

    /// `x^{|F|^k} mod m`.
    fn frobenius_power_of_x(&self, k: usize, m: &Poly<F::Elem>) -> Poly<F::Elem> {
        let q = self.field.order();
        (0..k).fold(self.rem(&self.x(), m).expect("nonzero"), |acc, _| {
            self.powmod(&acc, &q, m)
        })
    }

    pub fn random_below(&self, degree: usize, rng: &mut (impl Rng + ?Sized)) -> Poly<F::Elem> {
        self.from_coeffs((0..degree).map(|_| self.field.random(rng)).collect())
    }

    /// Ben-Or's irreducibility test: no factor of degree `i <= n/2`, found by
    /// `gcd(x^{q^i} - x, f)`. Reducible inputs usually exit early.
    pub fn is_irreducible(&self, f: &Poly<F::Elem>) -> bool {
        let n = match f.degree() {
            None | Some(0) => return false,
            Some(1) => return true,
            Some(n) => n,
        };
        let q = self.field.order();
        let x = self.rem(&self.x(), f).expect("nonzero");
        let mut h = x.clone();
        for _ in 0..n / 2 {
            h = self.powmod(&h, &q, f);
            if self.gcd(&self.sub(&h, &x), f).degree() != Some(0) {
                return false;
            }
        }
        true
    }

    /// Distinct roots of `f` in increasing canonical order.
    pub fn roots(&self, f: &Poly<F::Elem>, rng: &mut (impl Rng + ?Sized)) -> Vec<F::Elem> {
        match f.degree() {
            None | Some(0) => return Vec::new(),
            _ => {}
        }
        if self.field.order() <= BigUint::from(64u32) {
            return self
                .field
                .elements()
                .into_iter()
                .filter(|c| self.field.is_zero(&self.eval(f, c)))
                .collect();
        }
        let f = self.monic(f);
        let xq = self.frobenius_power_of_x(1, &f);
        let g = self.gcd(&self.sub(&xq, &self.x()), &f);
        let mut roots: Vec<F::Elem> = self
            .equal_degree_split(&g, 1, rng)
            .into_iter()
            .map(|lin| self.field.neg(&lin.coeffs[0]))
            .collect();
        roots.sort();
        roots
    }

    /// Split a monic product of distinct irreducibles of degree `d`
    /// (Cantor–Zassenhaus; odd characteristic).
    pub fn equal_degree_split(&self, g: &Poly<F::Elem>, d: usize, rng: &mut (impl Rng + ?Sized)) -> Vec<Poly<F::Elem>> {
        let n = match g.degree() {
            None | Some(0) => return Vec::new(),
            Some(n) => n,
        };
        if n == d {
            return vec![self.monic(g)];
        }
        let exp = (self.field.order().pow(d as u32) - 1u32) >> 1;
        loop {
            let r = self.random_below(n, rng);
            if r.degree().unwrap_or(0) == 0 {
                continue;
            }
            let w = self.sub(&self.powmod(&r, &exp, g), &self.one());
            let h = self.gcd(&w, g);
            let dh = h.degree().unwrap_or(0);
            if dh > 0 && dh < n {
                let rest = self.div_exact(g, &h).expect("h divides g");
                let mut out = self.equal_degree_split(&h, d, rng);
                out.extend(self.equal_degree_split(&rest, d, rng));
                return out;
            }
        }
    }

    /// Distinct-degree factorization of a monic squarefree `f`: pairs
    /// `(d, g_d)` where `g_d` is the product of the degree-`d` irreducible factors.
    pub fn distinct_degree(&self, f: &Poly<F::Elem>) -> Vec<(usize, Poly<F::Elem>)> {
        let mut out = Vec::new();
        let mut rest = self.monic(f);
        let q = self.field.order();
        let x = self.x();
        let mut h = self.rem(&x, &rest).expect("nonzero");
        let mut d = 0;
        while rest.degree().is_some_and(|n| n >= 2 * (d + 1)) {
            d += 1;
            h = self.powmod(&h, &q, &rest);
            let g = self.gcd(&self.sub(&h, &x), &rest);
            if g.degree().unwrap_or(0) > 0 {
                rest = self.div_exact(&rest, &g).expect("g divides rest");
                h = self.rem(&h, &rest).expect("nonzero");
                out.push((d, g));
            }
        }
        if let Some(n) = rest.degree() {
            if n > 0 {
                out.push((n, rest));
            }
        }
        out
    }

    /// Squarefree decomposition `f = c ∏ s_i^i` (returns the `(s_i, i)` with
    /// nonconstant `s_i`).
    pub fn squarefree(&self, f: &Poly<F::Elem>) -> Vec<(Poly<F::Elem>, u32)> {
        let p = self.field.characteristic();
        let mut out = Vec::new();
        let f = self.monic(f);
        if f.degree().unwrap_or(0) == 0 {
            return out;
        }
        let df = self.derivative(&f);
        if df.is_zero() {
            // f is a p-th power: take p-th roots of its coefficients.
            let root = self.pth_root(&f);
            for (s, m) in self.squarefree(&root) {
                out.push((s, m * p as u32));
            }
            return out;
        }
        let mut c = self.gcd(&f, &df);
        let mut w = self.div_exact(&f, &c).expect("gcd divides");
        let mut i = 1u32;
        while w.degree().unwrap_or(0) > 0 {
            let y = self.gcd(&w, &c);
            let z = self.div_exact(&w, &y).expect("gcd divides");
            if z.degree().unwrap_or(0) > 0 {
                out.push((z, i));
            }
            i += 1;
            w = y;
            c = self.div_exact(&c, &w).expect("gcd divides");
        }
        if c.degree().unwrap_or(0) > 0 {
            let root = self.pth_root(&c);
            for (s, m) in self.squarefree(&root) {
                out.push((s, m * p as u32));
            }
        }
        out
    }

    fn pth_root(&self, f: &Poly<F::Elem>) -> Poly<F::Elem> {
        let p = self.field.characteristic() as usize;
        // a -> a^{p^{k-1}} inverts the absolute Frobenius on F_{p^k}.
        let e = BigUint::from(p as u64).pow(self.field.degree() as u32 - 1);
        let coeffs = f.coeffs.iter().step_by(p).map(|c| self.field.pow(c, &e)).collect();
        self.from_coeffs(coeffs)
    }

    /// Complete factorization into monic irreducibles with multiplicities,
    /// sorted by (degree, coefficients).
    pub fn factor(&self, f: &Poly<F::Elem>, rng: &mut (impl Rng + ?Sized)) -> Vec<(Poly<F::Elem>, u32)> {
        let mut out = Vec::new();
        for (s, m) in self.squarefree(f) {
            for (d, g) in self.distinct_degree(&s) {
                for irr in self.equal_degree_split(&g, d, rng) {
                    out.push((irr, m));
                }
            }
        }
        out.sort_by(|(a, _), (b, _)| a.degree().cmp(&b.degree()).then_with(|| a.cmp(b)));
        out
    }
}
