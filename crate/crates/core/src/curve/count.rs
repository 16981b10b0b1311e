use std::collections::{BTreeSet, HashMap};

use num_bigint::{BigInt, BigUint};
use num_traits::ToPrimitive;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use super::{Curve, Point};
use crate::arith;
use crate::error::{Error, Result};
use crate::field::PrimeField;

/// Largest characteristic counted by the exhaustive character sum.
pub const EXHAUSTIVE_CAP: u64 = 10_000;
/// Largest characteristic accepted for point counting at all.
pub const COUNT_CAP: u64 = 1_000_000;

/// Trace of Frobenius and the discriminant data derived from it.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct FrobeniusData {
    pub q: u64,
    pub t: i64,
    /// `t^2 - 4q`.
    pub delta: i64,
    pub delta_factorization: Vec<(u64, u32)>,
    /// Fundamental discriminant with `delta = f_max^2 d_k`.
    pub d_k: i64,
    pub f_max: u64,
}

impl FrobeniusData {
    pub fn new(q: u64, t: i64) -> Result<Self> {
        let delta = (t as i128) * (t as i128) - 4 * q as i128;
        if delta >= 0 {
            return Err(Error::InvalidArgument(format!(
                "trace {t} violates the Hasse bound for q = {q}"
            )));
        }
        let delta = i64::try_from(delta).map_err(|_| Error::OutOfScale(format!("discriminant of q = {q}")))?;
        Self::from_delta(q, t, delta)
    }

    /// Frobenius data with the given discriminant: `t = D mod 2`,
    /// `q = (t^2 - D)/4`. Used wherever only `D` matters.
    pub fn synthetic(d: i64) -> Result<Self> {
        if d >= 0 || !matches!(d.rem_euclid(4), 0 | 1) {
            return Err(Error::InvalidDiscriminant(d));
        }
        let t = d.rem_euclid(2);
        let q = ((t * t - d) / 4) as u64;
        Self::from_delta(q, t, d)
    }

    fn from_delta(q: u64, t: i64, delta: i64) -> Result<Self> {
        let (d_k, f_max) = arith::fundamental_split(delta).ok_or(Error::InvalidDiscriminant(delta))?;
        Ok(FrobeniusData {
            q,
            t,
            delta,
            delta_factorization: arith::factorize(delta.unsigned_abs()),
            d_k,
            f_max,
        })
    }

    pub fn from_curve(e: &Curve<PrimeField>) -> Result<Self> {
        Self::new(e.field().p(), trace_of(e)?)
    }

    /// `#E(F_q) = q + 1 - t`.
    pub fn cardinality(&self) -> BigUint {
        cardinality_ext(self, 1)
    }

    /// Coefficients `[q, -t, 1]` of `x^2 - tx + q`.
    pub fn chi(&self) -> [i64; 3] {
        [self.q as i64, -self.t, 1]
    }
}

/// Ordinary over a prime field means `p` does not divide `t`.
pub fn is_ordinary(fd: &FrobeniusData) -> bool {
    fd.t.rem_euclid(fd.q as i64) != 0
}

/// `#E(F_{q^n}) = q^n + 1 - t_n` with `t_0 = 2`, `t_1 = t`,
/// `t_{i+1} = t t_i - q t_{i-1}`.
pub fn cardinality_ext(fd: &FrobeniusData, n: u32) -> BigUint {
    let q = BigInt::from(fd.q);
    let t = BigInt::from(fd.t);
    let (mut prev, mut cur) = (BigInt::from(2), t.clone());
    for _ in 1..n {
        let next = &t * &cur - &q * &prev;
        prev = cur;
        cur = next;
    }
    let total: BigInt = q.pow(n) + 1 - cur;
    total.to_biguint().expect("Hasse bound keeps the count positive")
}

fn trace_of(e: &Curve<PrimeField>) -> Result<i64> {
    let p = e.field().p();
    if p > COUNT_CAP {
        return Err(Error::OutOfScale(format!(
            "point counting supports p <= {COUNT_CAP}, got {p}"
        )));
    }
    if p <= EXHAUSTIVE_CAP {
        Ok(trace_exhaustive(e))
    } else {
        Ok(trace_bsgs(e))
    }
}

/// `t = -sum_x (x^3 + ax + b / p)`.
pub(crate) fn trace_exhaustive(e: &Curve<PrimeField>) -> i64 {
    let f = e.field();
    let p = f.p();
    let table = f.character_table();
    let (a, b) = (*e.a(), *e.b());
    let mut sum = 0i64;
    for x in 0..p {
        let rhs = ((x * x % p + a) % p * x + b) % p;
        sum += table[rhs as usize] as i64;
    }
    -sum
}

/// All `n` in `[lo, hi]` with `nP = O`, by baby steps `jP` and giant steps of
/// size `m`.
fn annihilators_in_interval(e: &Curve<PrimeField>, p: &Point<u64>, lo: u64, hi: u64) -> Vec<u64> {
    let width = hi - lo + 1;
    let m = arith::isqrt(width) + 1;
    // n = lo + i m + j annihilates P iff (lo + i m) P = -jP.
    let mut baby: HashMap<Point<u64>, Vec<u64>> = HashMap::new();
    let mut jp = Point::Infinity;
    for j in 0..m {
        baby.entry(e.neg(&jp)).or_default().push(j);
        jp = e.add(&jp, p);
    }
    let step = e.smul_u64(m, p);
    let mut giant = e.smul_u64(lo, p);
    let mut out = Vec::new();
    let mut i = 0;
    while lo + i * m <= hi {
        if let Some(js) = baby.get(&giant) {
            for &j in js {
                let n = lo + i * m + j;
                if n <= hi {
                    out.push(n);
                }
            }
        }
        giant = e.add(&giant, &step);
        i += 1;
    }
    out
}

/// Shanks–Mestre: intersect the Hasse-interval annihilators of random points
/// on `E` and on its twist until one trace survives.
pub(crate) fn trace_bsgs(e: &Curve<PrimeField>) -> i64 {
    let p = e.field().p();
    let bound = 2 * arith::isqrt(p) + 2;
    let twist = e.twist();
    // Deterministic per curve so repeated counts agree.
    let mut rng = ChaCha8Rng::seed_from_u64(p ^ (e.a() << 20) ^ (e.b() << 42));
    let lo = p + 1 - bound;
    let hi = p + 1 + bound;
    let mut candidates: BTreeSet<i64> = (-(bound as i64)..=bound as i64)
        .filter(|t| (*t as i128) * (*t as i128) <= 4 * p as i128)
        .collect();
    for _ in 0..64 {
        let pt = e.random_point(&mut rng);
        let on_e: BTreeSet<i64> = annihilators_in_interval(e, &pt, lo, hi)
            .into_iter()
            .map(|n| (p + 1) as i64 - n as i64)
            .collect();
        candidates = candidates.intersection(&on_e).copied().collect();
        let pt = twist.random_point(&mut rng);
        let on_twist: BTreeSet<i64> = annihilators_in_interval(&twist, &pt, lo, hi)
            .into_iter()
            .map(|n| n as i64 - (p + 1) as i64)
            .collect();
        candidates = candidates.intersection(&on_twist).copied().collect();
        if candidates.len() == 1 {
            return *candidates.iter().next().expect("one candidate");
        }
    }
    trace_exhaustive(e)
}

impl FrobeniusData {
    /// Cardinality as a machine integer, for scales where it fits.
    pub fn cardinality_u64(&self) -> u64 {
        self.cardinality().to_u64().expect("fits at desk scale")
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn trace_over_f11() {
        let e = Curve::over_prime(11, 1, 1).unwrap();
        let fd = FrobeniusData::from_curve(&e).unwrap();
        assert_eq!(fd.t, -2);
        assert_eq!(fd.delta, -40);
        assert_eq!(fd.cardinality_u64(), 14);
        assert_eq!(fd.cardinality_u64() as usize, e.points().len() + 1);
        assert!(is_ordinary(&fd));
    }

    #[test]
    fn curve_over_f31_with_28_points() {
        let mut found = None;
        'outer: for a in 0..31 {
            for b in 0..31 {
                if let Ok(e) = Curve::over_prime(31, a, b) {
                    if FrobeniusData::from_curve(&e).unwrap().t == 4 {
                        found = Some(e);
                        break 'outer;
                    }
                }
            }
        }
        let fd = FrobeniusData::from_curve(&found.unwrap()).unwrap();
        assert_eq!(fd.delta, -108);
        assert_eq!((fd.d_k, fd.f_max), (-3, 6));
    }

    #[test]
    fn ordinary_flag() {
        assert!(!is_ordinary(&FrobeniusData::new(7, 0).unwrap()));
        assert!(!is_ordinary(&FrobeniusData {
            t: 7,
            ..FrobeniusData::new(7, 0).unwrap()
        }));
    }

    #[test]
    fn extension_cardinalities() {
        let fd = FrobeniusData::new(11, -2).unwrap();
        assert_eq!(cardinality_ext(&fd, 1), BigUint::from(14u32));
        assert_eq!(cardinality_ext(&fd, 2), BigUint::from(140u32));
        assert_eq!(cardinality_ext(&fd, 6), BigUint::from(1_770_860u32));
        for n in 1..=12u32 {
            for m in 1..=n {
                if n % m == 0 {
                    let big = cardinality_ext(&fd, n);
                    assert_eq!(big % cardinality_ext(&fd, m), BigUint::from(0u32));
                }
            }
        }
    }

    #[test]
    fn bsgs_agrees_with_character_sum() {
        for (p, a, b) in [(10_007u64, 3i64, 5i64), (10_009, 1, 1), (20_011, 7, 2), (1_009, 2, 3)] {
            let e = Curve::over_prime(p, a, b).unwrap();
            assert_eq!(trace_bsgs(&e), trace_exhaustive(&e), "p={p}");
        }
    }

    #[test]
    fn synthetic_data_has_requested_discriminant() {
        for d in [-3i64, -4, -23, -40, -108, -4999] {
            let fd = FrobeniusData::synthetic(d).unwrap();
            assert_eq!(fd.delta, d);
        }
        assert!(FrobeniusData::synthetic(-5).is_err());
    }
}
