//! Random short relations in class groups, the relation lattice of an order,
//! and the test for when one lattice contains another.

use std::collections::{HashMap, VecDeque};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use crate::arith;
use crate::curve::FrobeniusData;
use crate::error::{Error, Result};
use crate::lattice;
use crate::quadorder::{
    class_group_structure, class_logs, enumerate_classes, subgroup_order, FactorBase, QForm, QuadOrder,
};

/// A signed exponent vector over a factor base; negative entries stand for
/// the conjugate ideal.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Relation {
    pub n: Vec<i64>,
}

impl Relation {
    pub fn zero(len: usize) -> Self {
        Relation { n: vec![0; len] }
    }

    pub fn l1(&self) -> u64 {
        self.n.iter().map(|x| x.unsigned_abs()).sum()
    }

    pub fn is_zero(&self) -> bool {
        self.n.iter().all(|&x| x == 0)
    }

    /// `(index, exponent)` pairs with nonzero exponent.
    pub fn support(&self) -> Vec<(usize, i64)> {
        self.n
            .iter()
            .enumerate()
            .filter(|(_, &x)| x != 0)
            .map(|(i, &x)| (i, x))
            .collect()
    }
}

/// How the set of primes carrying random exponents is chosen.
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum SmallNorm {
    /// The smallest bound whose split primes generate the class group.
    Generating,
    /// `ceil(log^{2+eps} |D|)`.
    Formula,
    Fixed(u64),
}

#[derive(Clone, Debug, PartialEq)]
pub struct RelationParams {
    pub z: f64,
    pub epsilon: f64,
    pub coord_bound: Option<u64>,
    pub small_norm: SmallNorm,
    pub n_override: Option<u64>,
    pub r_min: usize,
    pub max_trials: usize,
}

impl Default for RelationParams {
    fn default() -> Self {
        RelationParams {
            z: 1.0 / (2.0 * std::f64::consts::SQRT_2),
            epsilon: 1.0,
            coord_bound: None,
            small_norm: SmallNorm::Generating,
            n_override: None,
            r_min: 8,
            max_trials: 10_000,
        }
    }
}

/// Parameters with every bound evaluated for one discriminant.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ResolvedParams {
    pub n: u64,
    pub coord_bound: u64,
    pub small_norm_bound: u64,
    pub r: usize,
    pub max_trials: usize,
}

/// `max(12 ln^2 |Delta|, L(q)^z)`, at least 3.
pub fn default_norm_bound(fd: &FrobeniusData, z: f64) -> u64 {
    let ln = (fd.delta.unsigned_abs() as f64).ln();
    let bach = 12.0 * ln * ln;
    let subexp = arith::l_function(fd.q as f64).powf(z);
    bach.max(subexp).ceil().max(3.0) as u64
}

impl RelationParams {
    pub fn resolve(&self, order: &QuadOrder, fd: &FrobeniusData) -> Result<ResolvedParams> {
        let n = self.n_override.unwrap_or_else(|| default_norm_bound(fd, self.z));
        let ln_d = (order.disc().unsigned_abs() as f64).ln().max(1.0);
        let coord_bound = self
            .coord_bound
            .unwrap_or_else(|| (ln_d.powf(4.0 + self.epsilon).ceil() as u64).max(8));
        let base = FactorBase::build(&fd_order(order, fd), fd, n)?.in_order(order)?;
        let small_norm_bound = match self.small_norm {
            SmallNorm::Fixed(s) => s,
            SmallNorm::Formula => ln_d.powf(2.0 + self.epsilon).ceil() as u64,
            SmallNorm::Generating => generating_bound(&base)?,
        };
        // At least one base prime must carry a random exponent.
        let small_norm_bound = small_norm_bound.max(base.primes[0].ell + 1);
        let lnln = (fd.q as f64).ln().max(1.0).ln().max(0.0);
        let r = ((3.0 * lnln).ceil() as usize).max(self.r_min);
        Ok(ResolvedParams {
            n,
            coord_bound,
            small_norm_bound,
            r,
            max_trials: self.max_trials,
        })
    }
}

fn fd_order(order: &QuadOrder, fd: &FrobeniusData) -> QuadOrder {
    QuadOrder { f: fd.f_max, ..*order }
}

/// Smallest `S` such that the base primes of norm `< S` generate `cl(O)`;
/// falls back to just past the first prime when the whole base does not.
fn generating_bound(base: &FactorBase) -> Result<u64> {
    let d = base.order.disc();
    let h = enumerate_classes(d)?.len();
    let mut gens = Vec::new();
    for p in &base.primes {
        gens.push(p.reduced());
        if subgroup_order(d, &gens) == h {
            return Ok(p.ell + 1);
        }
    }
    Ok(base.primes[0].ell + 1)
}

/// Draws relations of one order.
#[derive(Clone, Debug)]
pub struct RelationSampler {
    pub base: FactorBase,
    pub params: ResolvedParams,
    small: Vec<usize>,
}

const CHUNK: usize = 32;

impl RelationSampler {
    pub fn new(order: &QuadOrder, fd: &FrobeniusData, params: &RelationParams) -> Result<Self> {
        let resolved = params.resolve(order, fd)?;
        let base = FactorBase::build(&fd_order(order, fd), fd, resolved.n)?.in_order(order)?;
        Self::with_base(base, resolved)
    }

    pub fn with_base(base: FactorBase, params: ResolvedParams) -> Result<Self> {
        let small: Vec<usize> = (0..base.len())
            .filter(|&i| base.primes[i].ell < params.small_norm_bound)
            .collect();
        if small.is_empty() {
            return Err(Error::EmptyFactorBase(params.small_norm_bound));
        }
        Ok(RelationSampler { base, params, small })
    }

    pub fn small_indices(&self) -> &[usize] {
        &self.small
    }

    fn trial(&self, seed: [u8; 32], index: u64) -> Option<Relation> {
        let mut rng = ChaCha8Rng::from_seed(seed);
        rng.set_stream(index);
        let mut x = vec![0i64; self.base.len()];
        for &i in &self.small {
            x[i] = rng.gen_range(0..self.params.coord_bound) as i64;
        }
        let g = self.base.sigma(&x);
        let y = self.base.factor_form(&g)?;
        Some(Relation {
            n: x.iter().zip(&y).map(|(a, b)| a - b).collect(),
        })
    }

    /// One relation; trials are independent streams of a master seed drawn
    /// from `rng`, and the lowest successful trial index wins.
    pub fn find<R: Rng + ?Sized>(&self, rng: &mut R) -> Result<Relation> {
        Ok(self.find_counted(rng)?.0)
    }

    /// As `find`, also returning the number of trials up to the winner.
    pub fn find_counted<R: Rng + ?Sized>(&self, rng: &mut R) -> Result<(Relation, usize)> {
        let seed: [u8; 32] = rng.gen();
        let total = self.params.max_trials;
        let mut start = 0;
        while start < total {
            let end = (start + CHUNK).min(total);
            let hit = (start..end)
                .into_par_iter()
                .map(|i| self.trial(seed, i as u64).map(|r| (r, i + 1)))
                .find_first(|r| r.is_some())
                .flatten();
            if let Some(found) = hit {
                return Ok(found);
            }
            start = end;
        }
        Err(Error::MaxTrialsExceeded(total))
    }

    /// `|B_small| * coord_bound` plus the largest exponent a smooth norm
    /// below `sqrt(|D|/3)` can contribute.
    pub fn l1_bound(&self) -> u64 {
        let a_max = arith::isqrt(self.base.order.disc().unsigned_abs() / 3).max(1);
        let smooth = 64 - a_max.leading_zeros() as u64;
        self.small.len() as u64 * self.params.coord_bound + smooth
    }
}

pub fn find_relation<R: Rng + ?Sized>(
    order: &QuadOrder,
    fd: &FrobeniusData,
    params: &RelationParams,
    rng: &mut R,
) -> Result<Relation> {
    RelationSampler::new(order, fd, params)?.find(rng)
}

/// Whether the relation is trivial in the order `base.order`.
pub fn holds_in_order(r: &Relation, base: &FactorBase) -> bool {
    base.sigma(&r.n).is_identity()
}

/// Shortest-`l1` preimages under `sigma` of every class, by breadth-first
/// search with steps `+-e_p`.
fn sigma_preimages(base: &FactorBase) -> Result<HashMap<QForm, Vec<i64>>> {
    let d = base.order.disc();
    let h = enumerate_classes(d)?.len();
    let id = QForm::identity(d);
    let steps: Vec<(usize, i64, QForm)> = base
        .primes
        .iter()
        .enumerate()
        .flat_map(|(i, p)| [(i, 1, p.reduced()), (i, -1, p.reduced().inverse())])
        .collect();
    let mut table = HashMap::from([(id, vec![0i64; base.len()])]);
    let mut queue = VecDeque::from([id]);
    while let Some(c) = queue.pop_front() {
        if table.len() == h {
            break;
        }
        let v = table[&c].clone();
        for (i, s, g) in &steps {
            let next = c.compose(g);
            if let std::collections::hash_map::Entry::Vacant(e) = table.entry(next) {
                let mut w = v.clone();
                w[*i] += s;
                e.insert(w);
                queue.push_back(next);
            }
        }
    }
    if table.len() < h {
        return Err(Error::BaseDoesNotGenerate(d));
    }
    Ok(table)
}

fn bits(mut n: u64) -> Vec<u64> {
    let mut out = Vec::new();
    while n > 0 {
        out.push(n & 1);
        n >>= 1;
    }
    out
}

/// A generating set of the relation lattice of `base.order` built by double
/// and add over the structure generators of its class group.
pub fn relation_lattice_basis(base: &FactorBase) -> Result<Vec<Relation>> {
    let d = base.order.disc();
    let m = base.len();
    let pre = sigma_preimages(base)?;
    let structure = class_group_structure(d)?;
    let logs = class_logs(d, &structure);
    let sub = |a: &[i64], b: &[i64], k: i64| -> Vec<i64> { a.iter().zip(b).map(|(x, y)| x - k * y).collect() };
    let mut out = Vec::new();
    // pows[i][j] = preimage of alpha_i^{2^j}.
    let mut pows: Vec<Vec<Vec<i64>>> = Vec::new();
    for (alpha, ord) in &structure {
        let len = bits(*ord).len();
        let mut cls = *alpha;
        let mut table = Vec::new();
        for _ in 0..len {
            table.push(pre[&cls].clone());
            cls = cls.square();
        }
        for j in 1..len {
            out.push(Relation {
                n: sub(&table[j], &table[j - 1], 2),
            });
        }
        let mut order_rel = vec![0i64; m];
        for (j, bit) in bits(*ord).into_iter().enumerate() {
            if bit == 1 {
                order_rel = sub(&order_rel, &table[j], -1);
            }
        }
        out.push(Relation { n: order_rel });
        pows.push(table);
    }
    for (k, p) in base.primes.iter().enumerate() {
        let mut rel = vec![0i64; m];
        rel[k] = 1;
        let c = &logs[&p.reduced()];
        for (i, &ci) in c.iter().enumerate() {
            for (j, bit) in bits(ci).into_iter().enumerate() {
                if bit == 1 {
                    rel = sub(&rel, &pows[i][j], 1);
                }
            }
        }
        out.push(Relation { n: rel });
    }
    Ok(out.into_iter().filter(|r| !r.is_zero()).collect())
}

/// `[Z^B : Lambda]` for a set of relations, or `None` when they do not span.
pub fn relation_lattice_index(base: &FactorBase, rels: &[Relation]) -> Result<Option<u128>> {
    let rows: Vec<Vec<i64>> = rels.iter().map(|r| r.n.clone()).collect();
    let order: Vec<usize> = (0..base.len()).rev().collect();
    lattice::lattice_index(&rows, base.len(), &order)
}

/// Whether the relation lattice of `o2` contains that of `o`.
pub fn lattice_contains(o: &QuadOrder, o2: &QuadOrder) -> bool {
    if o.f.is_multiple_of(o2.f) {
        return true;
    }
    if o.d_k == -4 && o2.f == 2 {
        return true;
    }
    if o.d_k == -3 && (o2.f == 2 || o2.f == 3) {
        return true;
    }
    if arith::kronecker(o.d_k, 2) == 1 && o2.f.is_multiple_of(2) {
        let u = o2.f / 2;
        if u % 2 == 1 && o.f.is_multiple_of(u) {
            return true;
        }
    }
    false
}

/// `[Lambda_O : Lambda_O cap Lambda_O2]`, as the order of the subgroup of
/// `cl(O2)` generated by the images of a basis of `Lambda_O`.
pub fn subset_holding_probability_index(o: &QuadOrder, o2: &QuadOrder, base: &FactorBase) -> Result<usize> {
    let b1 = base.in_order(o)?;
    let b2 = base.in_order(o2)?;
    let images: Vec<QForm> = relation_lattice_basis(&b1)?.iter().map(|r| b2.sigma(&r.n)).collect();
    Ok(subgroup_order(o2.disc(), &images))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn base_for(d: i64, n: u64) -> FactorBase {
        let fd = FrobeniusData::synthetic(d).unwrap();
        let o = QuadOrder::from_frobenius(&fd).unwrap();
        FactorBase::build(&o, &fd, n).unwrap()
    }

    #[test]
    fn relations_hold_by_construction() {
        let fd = FrobeniusData::synthetic(-4 * 1021).unwrap();
        let o = QuadOrder::from_frobenius(&fd).unwrap();
        let sampler = RelationSampler::new(&o, &fd, &RelationParams::default()).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        for _ in 0..20 {
            let r = sampler.find(&mut rng).unwrap();
            assert!(holds_in_order(&r, &sampler.base));
            assert!(r.l1() <= sampler.l1_bound());
        }
        let mut r1 = ChaCha8Rng::seed_from_u64(9);
        let mut r2 = ChaCha8Rng::seed_from_u64(9);
        assert_eq!(sampler.find(&mut r1).unwrap(), sampler.find(&mut r2).unwrap());
    }

    #[test]
    fn relation_for_minus_forty() {
        let fd = FrobeniusData::new(11, -2).unwrap();
        let o = QuadOrder::from_frobenius(&fd).unwrap();
        let params = RelationParams {
            n_override: Some(10),
            ..Default::default()
        };
        let sampler = RelationSampler::new(&o, &fd, &params).unwrap();
        assert_eq!(sampler.base.norms(), vec![7]);
        let ord = sampler.base.primes[0].form.order() as i64;
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        for _ in 0..10 {
            let r = sampler.find(&mut rng).unwrap();
            assert_eq!(r.n[0] % ord, 0);
        }
    }

    #[test]
    fn lattice_basis_index_is_class_number() {
        for d in [-4i64, -23, -40, -108, -164, -231, -3299, -4 * 1999] {
            let b = base_for(d, 200);
            let rels = relation_lattice_basis(&b).unwrap();
            assert!(rels.iter().all(|r| holds_in_order(r, &b)));
            let h = enumerate_classes(d).unwrap().len() as u128;
            assert_eq!(relation_lattice_index(&b, &rels).unwrap(), Some(h), "D={d}");
        }
    }

    #[test]
    fn proposition_cases() {
        let o = |d_k, f, f_max| QuadOrder { d_k, f, f_max };
        assert!(lattice_contains(&o(-40, 2, 2), &o(-40, 1, 2)));
        assert!(lattice_contains(&o(-4, 1, 2), &o(-4, 2, 2)));
        assert!(!lattice_contains(&o(-40, 1, 2), &o(-40, 2, 2)));
        assert!(lattice_contains(&o(-3, 1, 6), &o(-3, 3, 6)));
        assert!(lattice_contains(&o(-7, 1, 2), &o(-7, 2, 2)));
    }

    #[test]
    fn holding_index_for_minus_108() {
        let b = base_for(-108, 200);
        let bottom = b.order;
        assert_eq!(
            subset_holding_probability_index(&bottom, &bottom.maximal(), &b).unwrap(),
            1
        );
        let k = subset_holding_probability_index(&bottom.maximal(), &bottom, &b).unwrap();
        assert_eq!(k, 3);
    }
}
