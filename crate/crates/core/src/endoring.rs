//! Computing `End E`: volcano levels at small primes, the randomized order
//! test, the ascent through the lattice of orders, and an all-primes volcano
//! oracle used for verification.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::arith;
use crate::curve::{rational_subgroups, velu, Curve, FrobeniusData};
use crate::error::{Error, Result};
use crate::field::PrimeField;
use crate::isogeny::Walker;
use crate::quadorder::QuadOrder;
use crate::relations::{Relation, RelationParams, RelationSampler};

/// Fixed seed for subgroup enumeration inside volcano walks; the level does
/// not depend on it.
const VOLCANO_SEED: u64 = 0x766f_6c63;

/// Largest prime the oracle climbs volcanoes at, and the deepest volcano.
pub const ORACLE_MAX_PRIME: u64 = 13;
pub const ORACLE_MAX_HEIGHT: u32 = 6;

/// One call of the order test.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct OrderTest {
    pub conductor: u64,
    pub accepted: bool,
    /// Relations drawn, in order; the last one failed when the test rejected
    /// in the graph.
    pub relations: Vec<Relation>,
    /// `(p, level)` for the local checks that ran.
    pub local: Vec<(u64, u32)>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct EndRingResult {
    pub order: QuadOrder,
    /// Conductors accepted along the ascent, starting at `f_max`.
    pub path: Vec<u64>,
    /// `(p, val_p(f))` for every prime `p | f_max`.
    pub local_valuations: Vec<(u64, u32)>,
    /// `(p, level)` for the volcano levels that were measured.
    pub volcano_levels: Vec<(u64, u32)>,
    pub tests: Vec<OrderTest>,
}

impl EndRingResult {
    fn new(order: QuadOrder, path: Vec<u64>, volcano_levels: Vec<(u64, u32)>, tests: Vec<OrderTest>) -> Self {
        let local_valuations = arith::prime_divisors(order.f_max)
            .into_iter()
            .map(|p| (p, arith::valuation(order.f, p)))
            .collect();
        EndRingResult {
            order,
            path,
            local_valuations,
            volcano_levels,
            tests,
        }
    }

    pub fn conductor(&self) -> u64 {
        self.order.f
    }

    pub fn disc(&self) -> i64 {
        self.order.disc()
    }

    pub fn relations_used(&self) -> usize {
        self.tests.iter().map(|t| t.relations.len()).sum()
    }
}

fn require_ordinary(e: &Curve<PrimeField>, fd: &FrobeniusData) -> Result<()> {
    let p = e.field().p();
    if fd.t % p as i64 == 0 {
        return Err(Error::NotOrdinary { p, t: fd.t });
    }
    Ok(())
}

/// Codomains of the rational `p`-isogenies from `e`.
fn neighbours(e: &Curve<PrimeField>, p: u64, rng: &mut ChaCha8Rng) -> Result<Vec<Curve<PrimeField>>> {
    rational_subgroups(e, p, rng)?.iter().map(|s| velu(e, s)).collect()
}

/// `val_p` of the conductor of `End E`, from three lockstep non-backtracking
/// walks: the first to reach a curve with at most one rational `p`-subgroup
/// has descended straight to the floor.
pub fn volcano_level(e: &Curve<PrimeField>, fd: &FrobeniusData, p: u64) -> Result<u32> {
    let h = arith::valuation(fd.f_max, p);
    if h == 0 {
        return Ok(0);
    }
    let mut rng = ChaCha8Rng::seed_from_u64(VOLCANO_SEED);
    let first = neighbours(e, p, &mut rng)?;
    if first.len() <= 1 {
        return Ok(h);
    }
    // (previous j, current curve) per walk, with distinct first steps.
    let mut walks: Vec<(u64, Curve<PrimeField>)> = Vec::new();
    for c in first {
        if walks.len() == 3 {
            break;
        }
        if walks.iter().all(|(_, w)| w.j_invariant() != c.j_invariant()) {
            walks.push((e.j_invariant(), c));
        }
    }
    for step in 1..=h + 1 {
        let mut next = Vec::with_capacity(walks.len());
        for (prev, cur) in &walks {
            let ns = neighbours(cur, p, &mut rng)?;
            if ns.len() <= 1 {
                return Ok(h - (step.min(h)));
            }
            let fwd = ns.iter().find(|c| c.j_invariant() != *prev).unwrap_or(&ns[0]).clone();
            next.push((cur.j_invariant(), fwd));
        }
        walks = next;
    }
    Err(Error::WalkBudgetExceeded { p, steps: h + 1 })
}

/// Whether `End E` contains `o`: `r` random relations of `o` must fix `E`,
/// and at 2 and 3 the volcano level must not exceed `val_p(o.f)`.
pub fn order_contains_endring<R: Rng + ?Sized>(
    e: &Curve<PrimeField>,
    fd: &FrobeniusData,
    o: &QuadOrder,
    params: &RelationParams,
    rng: &mut R,
) -> Result<bool> {
    let mut levels = Vec::new();
    Ok(order_test(e, fd, o, params, &mut levels, rng)?.accepted)
}

fn cached_level(e: &Curve<PrimeField>, fd: &FrobeniusData, p: u64, cache: &mut Vec<(u64, u32)>) -> Result<u32> {
    if let Some(&(_, l)) = cache.iter().find(|(q, _)| *q == p) {
        return Ok(l);
    }
    let l = volcano_level(e, fd, p)?;
    cache.push((p, l));
    Ok(l)
}

fn order_test<R: Rng + ?Sized>(
    e: &Curve<PrimeField>,
    fd: &FrobeniusData,
    o: &QuadOrder,
    params: &RelationParams,
    levels: &mut Vec<(u64, u32)>,
    rng: &mut R,
) -> Result<OrderTest> {
    require_ordinary(e, fd)?;
    let mut test = OrderTest {
        conductor: o.f,
        accepted: false,
        relations: Vec::new(),
        local: Vec::new(),
    };
    // The minimal order is contained in every endomorphism ring.
    if o.f == fd.f_max {
        test.accepted = true;
        return Ok(test);
    }
    let sampler = RelationSampler::new(o, fd, params)?;
    let mut walker = Walker::new(fd, rng.gen());
    for _ in 0..sampler.params.r {
        let rel = sampler.find(rng)?;
        let ok = walker.holds(e, &sampler.base, &rel)?;
        test.relations.push(rel);
        if !ok {
            return Ok(test);
        }
    }
    for p in [2u64, 3] {
        if !fd.f_max.is_multiple_of(p) {
            continue;
        }
        let level = cached_level(e, fd, p, levels)?;
        test.local.push((p, level));
        if arith::valuation(o.f, p) < level {
            return Ok(test);
        }
    }
    test.accepted = true;
    Ok(test)
}

/// Climb from `Z[pi]` towards `O_K`, moving to the first order directly
/// above (by increasing prime index) that passes the order test.
pub fn ascend<R: Rng + ?Sized>(
    e: &Curve<PrimeField>,
    fd: &FrobeniusData,
    params: &RelationParams,
    rng: &mut R,
) -> Result<EndRingResult> {
    require_ordinary(e, fd)?;
    let mut cur = QuadOrder::from_frobenius(fd)?;
    let mut path = vec![cur.f];
    let mut tests = Vec::new();
    let mut levels = Vec::new();
    'up: loop {
        for o in cur.orders_directly_above() {
            let t = order_test(e, fd, &o, params, &mut levels, rng)?;
            let accepted = t.accepted;
            tests.push(t);
            if accepted {
                cur = o;
                path.push(cur.f);
                continue 'up;
            }
        }
        break;
    }
    levels.sort_unstable();
    Ok(EndRingResult::new(cur, path, levels, tests))
}

/// Deterministic conductor `prod p^level` from volcano climbing at every
/// prime dividing `f_max`.
pub fn oracle_endring(e: &Curve<PrimeField>, fd: &FrobeniusData) -> Result<EndRingResult> {
    require_ordinary(e, fd)?;
    let top = QuadOrder::from_frobenius(fd)?;
    let mut levels = Vec::new();
    let mut f = 1u64;
    for p in arith::prime_divisors(fd.f_max) {
        let h = arith::valuation(fd.f_max, p);
        if p > ORACLE_MAX_PRIME || h > ORACLE_MAX_HEIGHT {
            return Err(Error::OutOfScale(format!(
                "oracle needs primes <= {ORACLE_MAX_PRIME} and heights <= {ORACLE_MAX_HEIGHT} in f_max = {}",
                fd.f_max
            )));
        }
        let level = volcano_level(e, fd, p)?;
        levels.push((p, level));
        f *= p.pow(level);
    }
    let order = top.with_conductor(f)?;
    Ok(EndRingResult::new(order, vec![fd.f_max, f], levels, Vec::new()))
}

/// Whether the oracle can certify `fd`.
pub fn oracle_in_scope(fd: &FrobeniusData) -> bool {
    arith::prime_divisors(fd.f_max)
        .into_iter()
        .all(|p| p <= ORACLE_MAX_PRIME && arith::valuation(fd.f_max, p) <= ORACLE_MAX_HEIGHT)
}
