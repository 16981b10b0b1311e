//! The action of split prime ideals on curves: torsion bases over
//! `F_{q^{ell-1}}`, the matrix of Frobenius on `E[ell]`, eigenspace kernels
//! and Vélu codomains, and relation walks.

use std::collections::HashMap;

use num_bigint::BigUint;
use num_traits::Zero;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::arith;
use crate::curve::{cardinality_ext, velu, Curve, FrobeniusData, Point, Subgroup};
use crate::error::{Error, Result};
use crate::field::{ExtField, FieldElem, FiniteField, PolyRing, PrimeField};
use crate::quadorder::{FactorBase, PrimeIdealClass};
use crate::relations::Relation;

type ExtPoint = Point<FieldElem>;

/// A basis `(P, Q)` of `E[ell]` over the degree `ell - 1` extension.
#[derive(Clone, Debug)]
pub struct TorsionBasis {
    pub ell: u64,
    pub ext: ExtField,
    pub curve: Curve<ExtField>,
    pub p: ExtPoint,
    pub q: ExtPoint,
}

/// `pi(P) = m[0][0] P + m[0][1] Q`, `pi(Q) = m[1][0] P + m[1][1] Q`, mod `ell`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct FrobMatrix {
    pub ell: u64,
    pub m: [[u64; 2]; 2],
}

impl FrobMatrix {
    pub fn trace(&self) -> u64 {
        (self.m[0][0] + self.m[1][1]) % self.ell
    }

    pub fn det(&self) -> u64 {
        let l = self.ell;
        (arith::mul_mod(self.m[0][0], self.m[1][1], l) + l - arith::mul_mod(self.m[0][1], self.m[1][0], l)) % l
    }

    /// `M^2 - tM + q I = 0` mod `ell`.
    pub fn satisfies_charpoly(&self, t: i64, q: u64) -> bool {
        let l = self.ell;
        let m = self.m;
        let tm = arith::modulo(t, l);
        let qm = q % l;
        (0..2).all(|i| {
            (0..2).all(|j| {
                let sq = (arith::mul_mod(m[i][0], m[0][j], l) + arith::mul_mod(m[i][1], m[1][j], l)) % l;
                let id = if i == j { qm } else { 0 };
                (sq + l - arith::mul_mod(tm, m[i][j], l) + id).is_multiple_of(l)
            })
        })
    }

    /// Eigenvalues mod `ell`, ascending.
    pub fn eigenvalues(&self) -> Vec<u64> {
        let l = self.ell;
        let (t, d) = (self.trace(), self.det());
        (0..l)
            .filter(|&x| (arith::mul_mod(x, x, l) + l - arith::mul_mod(t, x, l) + d).is_multiple_of(l))
            .collect()
    }
}

/// How the two-dimensional discrete logarithm is solved.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Default)]
pub enum DlogStrategy {
    /// Table of `aP`, then scan `b`: `O(ell)` group operations.
    #[default]
    Table,
    /// All `ell^2` combinations.
    Exhaustive,
}

fn ell_part(mut n: BigUint, ell: u64) -> (BigUint, u32) {
    let mut k = 0;
    let l = BigUint::from(ell);
    while (&n % &l).is_zero() {
        n /= &l;
        k += 1;
    }
    (n, k)
}

/// `k` with `P` of order exactly `ell^k` (given `ell^K P = O` for some `K`).
fn ell_order(e: &Curve<ExtField>, p: &ExtPoint, ell: u64) -> u32 {
    let mut k = 0;
    let mut x = p.clone();
    while !x.is_infinity() {
        x = e.smul_u64(ell, &x);
        k += 1;
    }
    k
}

/// Lift random points to a basis of `E[ell]` over `F_{q^{ell-1}}`.
pub fn torsion_basis<R: Rng + ?Sized>(
    e: &Curve<PrimeField>,
    fd: &FrobeniusData,
    ell: u64,
    rng: &mut R,
) -> Result<TorsionBasis> {
    if fd.delta % ell as i64 == 0 {
        return Err(Error::InvalidArgument(format!(
            "{ell} divides the Frobenius discriminant"
        )));
    }
    let degree = (ell - 1).max(1) as usize;
    let card = cardinality_ext(fd, degree as u32);
    let (m, k) = ell_part(card, ell);
    if k < 2 {
        return Err(Error::TorsionNotRational { ell, degree });
    }
    let ext = ExtField::new(*e.field(), degree)?;
    let curve = e.base_change(&ext);
    // Step b onwards; a bounded number of restarts guards against a wrong
    // structure assumption.
    for _ in 0..200 {
        let mut p = curve.smul_jacobian(&m, &curve.random_point(rng));
        let mut q = curve.smul_jacobian(&m, &curve.random_point(rng));
        let mut kp = ell_order(&curve, &p, ell);
        let mut kq = ell_order(&curve, &q, ell);
        if kp < kq {
            std::mem::swap(&mut p, &mut q);
            std::mem::swap(&mut kp, &mut kq);
        }
        if kq == 0 {
            continue;
        }
        let p1 = curve.smul(&BigUint::from(ell).pow(kp - 1), &p);
        let mut table: HashMap<ExtPoint, u64> = HashMap::new();
        let mut acc = Point::Infinity;
        for i in 0..ell {
            table.insert(acc.clone(), i);
            acc = curve.add(&acc, &p1);
        }
        for j in (0..kq).rev() {
            let s = curve.smul(&BigUint::from(ell).pow(j), &q);
            if s.is_infinity() {
                continue;
            }
            match table.get(&s) {
                None => {
                    return Ok(TorsionBasis {
                        ell,
                        ext,
                        curve,
                        p: p1,
                        q: s,
                    });
                }
                Some(&i) => {
                    let shift = BigUint::from(ell).pow(kp - j - 1) * i;
                    q = curve.sub(&q, &curve.smul(&shift, &p));
                    if q.is_infinity() {
                        break;
                    }
                }
            }
        }
    }
    Err(Error::TorsionNotRational { ell, degree })
}

fn dlog_table(b: &TorsionBasis, target: &ExtPoint) -> Option<(u64, u64)> {
    let e = &b.curve;
    let mut table: HashMap<ExtPoint, u64> = HashMap::new();
    let mut acc = Point::Infinity;
    for a in 0..b.ell {
        table.insert(acc.clone(), a);
        acc = e.add(&acc, &b.p);
    }
    let mut r = target.clone();
    for bb in 0..b.ell {
        if let Some(&a) = table.get(&r) {
            return Some((a, bb));
        }
        r = e.sub(&r, &b.q);
    }
    None
}

fn dlog_exhaustive(b: &TorsionBasis, target: &ExtPoint) -> Option<(u64, u64)> {
    let e = &b.curve;
    let mut ap = Point::Infinity;
    for a in 0..b.ell {
        let mut r = ap.clone();
        for bb in 0..b.ell {
            if &r == target {
                return Some((a, bb));
            }
            r = e.add(&r, &b.q);
        }
        ap = e.add(&ap, &b.p);
    }
    None
}

pub fn frobenius_matrix(b: &TorsionBasis, strategy: DlogStrategy) -> Result<FrobMatrix> {
    let e = &b.curve;
    let solve = |pt: &ExtPoint| match strategy {
        DlogStrategy::Table => dlog_table(b, pt),
        DlogStrategy::Exhaustive => dlog_exhaustive(b, pt),
    };
    let not_stable = || Error::Invariant("Frobenius image outside the torsion basis span".into());
    let (m00, m01) = solve(&e.frobenius(&b.p)).ok_or_else(not_stable)?;
    let (m10, m11) = solve(&e.frobenius(&b.q)).ok_or_else(not_stable)?;
    Ok(FrobMatrix {
        ell: b.ell,
        m: [[m00, m01], [m10, m11]],
    })
}

/// Kernel of the isogeny attached to the prime `(ell, pi - lambda)`: the
/// subgroup generated by `K = uP + vQ` with `(u, v) M = lambda (u, v)`.
pub fn kernel_for_ideal(
    b: &TorsionBasis,
    m: &FrobMatrix,
    prime: &PrimeIdealClass,
) -> Result<(ExtPoint, Subgroup<u64>)> {
    let l = b.ell;
    let lambda = prime.lambda % l;
    let mismatch = Error::EigenvalueMismatch { ell: l, lambda };
    if !m.eigenvalues().contains(&lambda) {
        return Err(mismatch);
    }
    let a = [
        [(m.m[0][0] + l - lambda) % l, m.m[0][1]],
        [m.m[1][0], (m.m[1][1] + l - lambda) % l],
    ];
    let is_null = |u: u64, v: u64| {
        (0..2).all(|j| (arith::mul_mod(u, a[0][j], l) + arith::mul_mod(v, a[1][j], l)).is_multiple_of(l))
    };
    let (u, v) = std::iter::once((0u64, 1u64))
        .chain((0..l).map(|v| (1, v)))
        .find(|&(u, v)| is_null(u, v))
        .ok_or(mismatch)?;
    let e = &b.curve;
    let k = e.add(&e.smul_u64(u, &b.p), &e.smul_u64(v, &b.q));
    let ext = &b.ext;
    let ext_ring = PolyRing::new(ext.clone());
    let xs: Vec<FieldElem> = if l == 2 {
        vec![k.x().cloned().expect("order two point")]
    } else {
        let mut out = Vec::new();
        let mut acc = k.clone();
        for _ in 0..(l - 1) / 2 {
            out.push(acc.x().cloned().expect("affine multiple"));
            acc = e.add(&acc, &k);
        }
        out
    };
    let poly = ext_ring.from_roots(&xs);
    let coeffs = poly
        .coeffs()
        .iter()
        .map(|c| ext.to_base(c))
        .collect::<Option<Vec<u64>>>()
        .ok_or_else(|| Error::Invariant(format!("kernel polynomial for ell = {l} is not rational")))?;
    let ring = PolyRing::new(ext.base());
    Ok((
        k,
        Subgroup {
            order: l,
            kernel: ring.from_coeffs(coeffs),
        },
    ))
}

/// The codomain of the isogeny with kernel `E[prime]`.
pub fn apply_ideal<R: Rng + ?Sized>(
    e: &Curve<PrimeField>,
    fd: &FrobeniusData,
    prime: &PrimeIdealClass,
    rng: &mut R,
) -> Result<Curve<PrimeField>> {
    let basis = torsion_basis(e, fd, prime.ell, rng)?;
    let m = frobenius_matrix(&basis, DlogStrategy::Table)?;
    let (_, kernel) = kernel_for_ideal(&basis, &m, prime)?;
    velu(e, &kernel)
}

/// Ideal actions memoized on `(j, ell, lambda)`. Walks along one prime
/// reduce the step count modulo the cycle length once a cycle closes.
#[derive(Debug)]
pub struct Walker {
    fd: FrobeniusData,
    rng: ChaCha8Rng,
    cache: HashMap<(u64, u64, u64), Curve<PrimeField>>,
    pub computed: usize,
}

impl Walker {
    pub fn new(fd: &FrobeniusData, seed: u64) -> Self {
        Walker {
            fd: fd.clone(),
            rng: ChaCha8Rng::seed_from_u64(seed),
            cache: HashMap::new(),
            computed: 0,
        }
    }

    pub fn step(&mut self, e: &Curve<PrimeField>, prime: &PrimeIdealClass) -> Result<Curve<PrimeField>> {
        let key = (e.j_invariant(), prime.ell, prime.lambda);
        if let Some(c) = self.cache.get(&key) {
            return Ok(c.clone());
        }
        let next = apply_ideal(e, &self.fd, prime, &mut self.rng)?;
        self.computed += 1;
        let back = (next.j_invariant(), prime.ell, prime.conjugate().lambda);
        self.cache.entry(back).or_insert_with(|| e.clone());
        self.cache.insert(key, next.clone());
        Ok(next)
    }

    /// Apply `prime` `count` times.
    pub fn walk(&mut self, e: &Curve<PrimeField>, prime: &PrimeIdealClass, count: u64) -> Result<Curve<PrimeField>> {
        let start = e.j_invariant();
        let mut cur = e.clone();
        let mut remaining = count;
        let mut done = 0u64;
        while remaining > 0 {
            cur = self.step(&cur, prime)?;
            remaining -= 1;
            done += 1;
            if cur.j_invariant() == start && remaining > 0 {
                remaining %= done;
            }
        }
        Ok(cur)
    }

    /// Walk the relation: positive exponents in ascending prime order, then
    /// the conjugates; `true` iff the walk closes.
    pub fn holds(&mut self, e: &Curve<PrimeField>, base: &FactorBase, r: &Relation) -> Result<bool> {
        let mut cur = e.clone();
        for sign in [1i64, -1] {
            for (i, &n) in r.n.iter().enumerate() {
                if n.signum() != sign {
                    continue;
                }
                let prime = if sign > 0 {
                    base.primes[i]
                } else {
                    base.primes[i].conjugate()
                };
                cur = self.walk(&cur, &prime, n.unsigned_abs())?;
            }
        }
        Ok(cur.j_invariant() == e.j_invariant())
    }
}

/// Whether the relation `r` over `base` fixes `E` in the isogeny graph.
pub fn holds_in_graph<R: Rng + ?Sized>(
    e: &Curve<PrimeField>,
    fd: &FrobeniusData,
    base: &FactorBase,
    r: &Relation,
    rng: &mut R,
) -> Result<bool> {
    Walker::new(fd, rng.gen()).holds(e, base, r)
}

/// Order of `[p]` acting on `E`: steps until the `p`-walk returns.
pub fn cycle_length(
    walker: &mut Walker,
    e: &Curve<PrimeField>,
    prime: &PrimeIdealClass,
    cap: u64,
) -> Result<Option<u64>> {
    let start = e.j_invariant();
    let mut cur = e.clone();
    for n in 1..=cap {
        cur = walker.step(&cur, prime)?;
        if cur.j_invariant() == start {
            return Ok(Some(n));
        }
    }
    Ok(None)
}
