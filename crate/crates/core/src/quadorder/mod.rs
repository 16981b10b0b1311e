//! Imaginary quadratic orders, their class groups as reduced forms, and
//! factor bases of split primes.

mod form;

pub use form::QForm;

use std::collections::{HashMap, HashSet, VecDeque};

use crate::arith;
use crate::curve::FrobeniusData;
use crate::error::{Error, Result};
use crate::lattice;

/// The order `Z + f O_K` inside `K = Q(sqrt d_k)`, remembering the conductor
/// `f_max` of `Z[pi]` so that every order handled lies above `Z[pi]`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct QuadOrder {
    pub d_k: i64,
    pub f: u64,
    pub f_max: u64,
}

impl QuadOrder {
    /// `Z[pi]` for the given Frobenius data.
    pub fn from_frobenius(fd: &FrobeniusData) -> Result<Self> {
        if fd.delta >= 0 {
            return Err(Error::InvalidDiscriminant(fd.delta));
        }
        Ok(QuadOrder {
            d_k: fd.d_k,
            f: fd.f_max,
            f_max: fd.f_max,
        })
    }

    /// The order of conductor `f` in the same lattice.
    pub fn with_conductor(&self, f: u64) -> Result<Self> {
        if f == 0 || !self.f_max.is_multiple_of(f) {
            return Err(Error::InvalidArgument(format!(
                "conductor {f} does not divide {}",
                self.f_max
            )));
        }
        Ok(QuadOrder { f, ..*self })
    }

    pub fn maximal(&self) -> Self {
        QuadOrder { f: 1, ..*self }
    }

    /// `D = f^2 d_K`.
    pub fn disc(&self) -> i64 {
        (self.f * self.f) as i64 * self.d_k
    }

    /// `Delta = f_max^2 d_K`.
    pub fn frobenius_disc(&self) -> i64 {
        (self.f_max * self.f_max) as i64 * self.d_k
    }

    /// `[O : Z[pi]] = f_max / f`.
    pub fn index_over_frobenius(&self) -> u64 {
        self.f_max / self.f
    }

    /// Whether `other` is a suborder of `self`.
    pub fn contains(&self, other: &QuadOrder) -> bool {
        self.d_k == other.d_k && other.f.is_multiple_of(self.f)
    }

    /// Orders containing `self` with prime index, by increasing prime.
    pub fn orders_directly_above(&self) -> Vec<QuadOrder> {
        arith::prime_divisors(self.f)
            .into_iter()
            .map(|l| QuadOrder { f: self.f / l, ..*self })
            .collect()
    }

    /// Every order in the lattice between `Z[pi]` and `O_K`, by conductor.
    pub fn lattice(&self) -> Vec<QuadOrder> {
        arith::divisors(self.f_max)
            .into_iter()
            .map(|f| QuadOrder { f, ..*self })
            .collect()
    }
}

/// A prime ideal of norm `ell` coprime to `Delta`, identified by the root
/// `lambda` of `x^2 - tx + q` mod `ell`, together with its reduced-form
/// class in a given order.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct PrimeIdealClass {
    pub ell: u64,
    pub lambda: u64,
    /// `(ell, b, c)` with `b in (-ell, ell]`; not necessarily reduced.
    pub form: QForm,
    /// Set on the ideal with the larger eigenvalue.
    pub conjugate_flag: bool,
    lambda_bar: u64,
}

impl PrimeIdealClass {
    pub fn conjugate(&self) -> Self {
        PrimeIdealClass {
            ell: self.ell,
            lambda: self.lambda_bar,
            form: QForm {
                b: -self.form.b,
                ..self.form
            },
            conjugate_flag: !self.conjugate_flag,
            lambda_bar: self.lambda,
        }
    }

    pub fn reduced(&self) -> QForm {
        self.form.reduce()
    }
}

/// `b` for the prime `(ell, pi - lambda)` of `O`. With `g = [O : Z[pi]]`,
/// `pi = (t + g sqrt D)/2`, so the form's `b` satisfies `g b = 2 lambda - t`
/// modulo `2 ell` (modulo 4 when `ell = 2`).
fn prime_form_b(order: &QuadOrder, t: i64, ell: u64, lambda: u64) -> Option<i64> {
    let d = order.disc();
    let g = order.index_over_frobenius();
    let target = 2 * lambda as i64 - t;
    let b = if ell == 2 {
        let g_inv = arith::inv_mod(g as i64, 4)? as i64;
        let r = (target * g_inv).rem_euclid(4);
        if r % 2 == 0 || d.rem_euclid(8) != 1 {
            return None;
        }
        // Representative of r mod 4 in (-2, 2].
        if r == 3 {
            -1
        } else {
            1
        }
    } else {
        let l = ell as i64;
        let g_inv = arith::inv_mod(g as i64, ell)? as i64;
        let r = (target.rem_euclid(l) * g_inv).rem_euclid(l);
        // The lift of r mod ell with the parity of D, in (-ell, ell].
        let lifted = if (r - d).rem_euclid(2) == 0 { r } else { r - l };
        if lifted <= -l {
            lifted + 2 * l
        } else {
            lifted
        }
    };
    Some(b)
}

/// The prime above `ell` with the smaller eigenvalue, or `None` when `ell`
/// divides `Delta` or is not split.
pub fn prime_ideal_above(order: &QuadOrder, fd: &FrobeniusData, ell: u64) -> Option<PrimeIdealClass> {
    if !arith::is_prime(ell) || fd.delta % ell as i64 == 0 {
        return None;
    }
    if arith::kronecker(order.disc(), ell) != 1 {
        return None;
    }
    let (l1, l2) = eigenvalues(fd, ell)?;
    prime_with_eigenvalue(order, fd, ell, l1, l2)
}

/// Roots of `x^2 - tx + q` mod `ell` in increasing order, when distinct.
pub fn eigenvalues(fd: &FrobeniusData, ell: u64) -> Option<(u64, u64)> {
    let t = arith::modulo(fd.t, ell);
    let q = fd.q % ell;
    let roots: Vec<u64> = (0..ell)
        .filter(|&x| (arith::mul_mod(x, x, ell) + q + ell - arith::mul_mod(t, x, ell)).is_multiple_of(ell))
        .take(2)
        .collect();
    match roots[..] {
        [a, b] => Some((a, b)),
        _ => None,
    }
}

fn prime_with_eigenvalue(
    order: &QuadOrder,
    fd: &FrobeniusData,
    ell: u64,
    lambda: u64,
    lambda_bar: u64,
) -> Option<PrimeIdealClass> {
    let b = prime_form_b(order, fd.t, ell, lambda)?;
    let form = QForm::from_ab(ell as i64, b, order.disc()).ok()?;
    Some(PrimeIdealClass {
        ell,
        lambda,
        form,
        conjugate_flag: false,
        lambda_bar,
    })
}

/// Split primes `ell < n` coprime to `Delta`, one ideal per prime.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FactorBase {
    pub order: QuadOrder,
    pub fd: FrobeniusData,
    pub n: u64,
    pub primes: Vec<PrimeIdealClass>,
}

impl FactorBase {
    pub fn build(order: &QuadOrder, fd: &FrobeniusData, n: u64) -> Result<Self> {
        let primes: Vec<_> = arith::primes_below(n)
            .into_iter()
            .filter_map(|l| prime_ideal_above(order, fd, l))
            .collect();
        if primes.is_empty() {
            return Err(Error::EmptyFactorBase(n));
        }
        Ok(FactorBase {
            order: *order,
            fd: fd.clone(),
            n,
            primes,
        })
    }

    pub fn len(&self) -> usize {
        self.primes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.primes.is_empty()
    }

    pub fn norms(&self) -> Vec<u64> {
        self.primes.iter().map(|p| p.ell).collect()
    }

    /// The same ideals of `Z[pi]` pushed into another order of the lattice.
    pub fn in_order(&self, other: &QuadOrder) -> Result<FactorBase> {
        if other.d_k != self.order.d_k || other.f_max != self.order.f_max {
            return Err(Error::InvalidArgument("order outside the lattice of the base".into()));
        }
        let primes = self
            .primes
            .iter()
            .map(|p| {
                prime_with_eigenvalue(other, &self.fd, p.ell, p.lambda, p.lambda_bar)
                    .ok_or_else(|| Error::Invariant(format!("prime {} does not embed", p.ell)))
            })
            .collect::<Result<_>>()?;
        Ok(FactorBase {
            order: *other,
            fd: self.fd.clone(),
            n: self.n,
            primes,
        })
    }

    /// `sigma(n) = prod p^{n_p}` in the base's own order.
    pub fn sigma(&self, n: &[i64]) -> QForm {
        debug_assert_eq!(n.len(), self.primes.len());
        n.iter()
            .zip(&self.primes)
            .filter(|(k, _)| **k != 0)
            .fold(QForm::identity(self.order.disc()), |acc, (&k, p)| {
                acc.compose(&p.form.pow(k))
            })
    }

    /// Signed exponents `y` with `sigma(y)` equal to the class of the reduced
    /// form `g`, if `g.a` factors over the base norms.
    pub fn factor_form(&self, g: &QForm) -> Option<Vec<i64>> {
        let mut a = g.a as u64;
        let mut y = vec![0i64; self.primes.len()];
        for (slot, p) in y.iter_mut().zip(&self.primes) {
            if a == 1 {
                break;
            }
            let mut e = 0;
            while a.is_multiple_of(p.ell) {
                a /= p.ell;
                e += 1;
            }
            if e == 0 {
                continue;
            }
            let m = if p.ell == 2 { 4 } else { p.ell as i64 };
            let same = (g.b - p.form.b).rem_euclid(m) == 0;
            *slot = if same { e } else { -e };
        }
        (a == 1).then_some(y)
    }
}

/// All reduced primitive forms of discriminant `d`, sorted by `(a, b)`.
pub fn enumerate_classes(d: i64) -> Result<Vec<QForm>> {
    if d >= 0 || !matches!(d.rem_euclid(4), 0 | 1) {
        return Err(Error::InvalidDiscriminant(d));
    }
    let n = d.unsigned_abs();
    let mut out = Vec::new();
    let a_max = arith::isqrt(n / 3) as i64;
    for a in 1..=a_max {
        for b in -a + 1..=a {
            if (b - d).rem_euclid(2) != 0 {
                continue;
            }
            let num = b * b - d;
            if num % (4 * a) != 0 {
                continue;
            }
            let c = num / (4 * a);
            let f = QForm { a, b, c };
            if c >= a && f.is_reduced() && f.is_primitive() {
                out.push(f);
            }
        }
    }
    Ok(out)
}

/// Order of the subgroup generated by `gens`, by closure.
pub fn subgroup_order(d: i64, gens: &[QForm]) -> usize {
    subgroup_elements(d, gens).len()
}

fn subgroup_elements(d: i64, gens: &[QForm]) -> HashSet<QForm> {
    let id = QForm::identity(d);
    let gens: Vec<QForm> = gens.iter().map(|g| g.reduce()).filter(|g| *g != id).collect();
    let mut seen = HashSet::from([id]);
    let mut queue = VecDeque::from([id]);
    while let Some(x) = queue.pop_front() {
        for g in &gens {
            let y = x.compose(g);
            if seen.insert(y) {
                queue.push_back(y);
            }
        }
    }
    seen
}

/// Whether `gens` generate all of `cl(D)`.
pub fn generates(d: i64, gens: &[QForm]) -> Result<bool> {
    Ok(subgroup_order(d, gens) == enumerate_classes(d)?.len())
}

/// `cl(D) = prod <alpha_i>` with `ord(alpha_{i+1}) | ord(alpha_i)`; the trivial
/// group gives an empty list.
pub fn class_group_structure(d: i64) -> Result<Vec<(QForm, u64)>> {
    let classes = enumerate_classes(d)?;
    let h = classes.len();
    let id = QForm::identity(d);
    // Greedy generators with triangular relations g_i^{k_i} = prod_{j<i} g_j^{e_j}.
    let mut gens: Vec<QForm> = Vec::new();
    let mut rows: Vec<Vec<i64>> = Vec::new();
    let mut log: HashMap<QForm, Vec<i64>> = HashMap::from([(id, Vec::new())]);
    while log.len() < h {
        let g = *classes.iter().find(|c| !log.contains_key(c)).expect("proper subgroup");
        let i = gens.len();
        let mut power = g;
        let mut k = 1i64;
        while !log.contains_key(&power) {
            power = power.compose(&g);
            k += 1;
        }
        let mut row: Vec<i64> = log[&power].iter().map(|x| -x).collect();
        row.resize(i, 0);
        row.push(k);
        rows.push(row);
        gens.push(g);
        let old: Vec<(QForm, Vec<i64>)> = log.iter().map(|(f, v)| (*f, v.clone())).collect();
        for (f, v) in old {
            let mut x = f;
            for m in 1..k {
                x = x.compose(&g);
                let mut w = v.clone();
                w.resize(i, 0);
                w.push(m);
                log.insert(x, w);
            }
        }
        for v in log.values_mut() {
            v.resize(i + 1, 0);
        }
    }
    let n = gens.len();
    if n == 0 {
        return Ok(Vec::new());
    }
    let matrix: Vec<Vec<i128>> = rows
        .iter()
        .map(|r| {
            let mut r: Vec<i128> = r.iter().map(|&x| x as i128).collect();
            r.resize(n, 0);
            r
        })
        .collect();
    let snf = lattice::smith(&matrix, n)?;
    let mut out: Vec<(QForm, u64)> = Vec::new();
    for (i, &d_i) in snf.diagonal.iter().enumerate() {
        if d_i == 1 {
            continue;
        }
        let alpha = gens
            .iter()
            .zip(&snf.v_inv[i])
            .fold(id, |acc, (g, &e)| acc.compose(&g.pow(e as i64)));
        out.push((alpha, d_i as u64));
    }
    out.reverse();
    Ok(out)
}

/// Discrete logarithms on the structure generators: a table from every class
/// to its exponent vector.
pub fn class_logs(d: i64, structure: &[(QForm, u64)]) -> HashMap<QForm, Vec<u64>> {
    let mut table = HashMap::from([(QForm::identity(d), vec![0u64; structure.len()])]);
    for (i, (g, ord)) in structure.iter().enumerate() {
        let snapshot: Vec<(QForm, Vec<u64>)> = table.iter().map(|(f, v)| (*f, v.clone())).collect();
        for (f, v) in snapshot {
            let mut x = f;
            for m in 1..*ord {
                x = x.compose(g);
                let mut w = v.clone();
                w[i] = m;
                table.insert(x, w);
            }
        }
    }
    table
}
