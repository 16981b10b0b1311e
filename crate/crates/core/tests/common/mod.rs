#![allow(dead_code)]

use endoring::arith;
use endoring::endoring::oracle_in_scope;
use endoring::{Curve, FrobeniusData, PrimeField};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

/// Ordinary curves with `j != 0, 1728` over primes in `lo..hi`, with
/// `f_max > 1` and within reach of the oracle.
pub fn non_maximal_curves(seed: u64, lo: u64, hi: u64, count: usize) -> Vec<(Curve<PrimeField>, FrobeniusData)> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut out = Vec::new();
    while out.len() < count {
        let p = rng.gen_range(lo..hi);
        if !arith::is_prime(p) {
            continue;
        }
        let (a, b) = (rng.gen_range(0..p) as i64, rng.gen_range(0..p) as i64);
        let Ok(e) = Curve::over_prime(p, a, b) else { continue };
        let j = e.j_invariant();
        if j == 0 || j == 1728 % p {
            continue;
        }
        let fd = FrobeniusData::from_curve(&e).unwrap();
        if fd.t % p as i64 == 0 || fd.f_max == 1 || !oracle_in_scope(&fd) {
            continue;
        }
        out.push((e, fd));
    }
    out
}

/// Every curve of trace 4 over `F_31`, whose Frobenius discriminant is -108.
pub fn trace_four_over_31() -> Vec<Curve<PrimeField>> {
    let mut out = Vec::new();
    for a in 0..31 {
        for b in 0..31 {
            if let Ok(e) = Curve::over_prime(31, a, b) {
                if FrobeniusData::from_curve(&e).unwrap().t == 4 {
                    out.push(e);
                }
            }
        }
    }
    out
}
