use rand::Rng;

use super::Curve;
use crate::error::{Error, Result};
use crate::field::{ExtField, FiniteField, Poly, PolyRing, PrimeField};

/// A finite subgroup given by its order and kernel polynomial
/// `prod (x - x(Q))` over one representative of each pair `{Q, -Q}`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Subgroup<E> {
    pub order: u64,
    pub kernel: Poly<E>,
}

impl<E> Subgroup<E> {
    pub fn trivial<F: FiniteField<Elem = E>>(ring: &PolyRing<F>) -> Self {
        Subgroup {
            order: 1,
            kernel: ring.one(),
        }
    }
}

/// Reduced division polynomials `h_n` with `psi_n = h_n` for odd `n` and
/// `psi_n = y h_n` for even `n`.
fn reduced_division_polys<F: FiniteField>(e: &Curve<F>, m: usize) -> Vec<Poly<F::Elem>> {
    let f = e.field();
    let ring = PolyRing::new(f.clone());
    let (a, b) = (e.a().clone(), e.b().clone());
    let c = |k: i64| f.from_int(k);
    let a2 = f.square(&a);
    let h3 = ring.from_coeffs(vec![f.neg(&a2), f.scale(&b, 12), f.scale(&a, 6), f.zero(), c(3)]);
    let h4 = ring.scale(
        &ring.from_coeffs(vec![
            f.sub(&f.neg(&f.scale(&f.square(&b), 8)), &f.mul(&a2, &a)),
            f.neg(&f.scale(&f.mul(&a, &b), 4)),
            f.neg(&f.scale(&a2, 5)),
            f.scale(&b, 20),
            f.scale(&a, 5),
            f.zero(),
            c(1),
        ]),
        &c(4),
    );
    let rhs = ring.from_coeffs(vec![b, a, f.zero(), f.one()]);
    let rhs2 = ring.mul(&rhs, &rhs);
    let half = f.inv(&c(2)).expect("odd characteristic");
    let mut h = vec![ring.zero(), ring.one(), ring.constant(c(2)), h3, h4];
    for k in 5..=m {
        let n = k / 2;
        let next = if k % 2 == 1 {
            let t1 = ring.mul(&h[n + 2], &ring.mul(&h[n], &ring.mul(&h[n], &h[n])));
            let t2 = ring.mul(&h[n - 1], &ring.mul(&h[n + 1], &ring.mul(&h[n + 1], &h[n + 1])));
            if n % 2 == 0 {
                ring.sub(&ring.mul(&rhs2, &t1), &t2)
            } else {
                ring.sub(&t1, &ring.mul(&rhs2, &t2))
            }
        } else {
            let inner = ring.sub(
                &ring.mul(&h[n + 2], &ring.mul(&h[n - 1], &h[n - 1])),
                &ring.mul(&h[n - 2], &ring.mul(&h[n + 1], &h[n + 1])),
            );
            ring.scale(&ring.mul(&h[n], &inner), &half)
        };
        h.push(next);
    }
    h.truncate(m + 1);
    h
}

/// The polynomial whose roots are the `x`-coordinates of the nonzero
/// `m`-torsion points: `psi_m` for odd `m`, `(psi_m / 2y) (x^3 + ax + b)` for even `m`.
pub fn division_poly<F: FiniteField>(e: &Curve<F>, m: usize) -> Result<Poly<F::Elem>> {
    if m < 2 {
        return Err(Error::InvalidArgument(format!("division polynomial index {m} < 2")));
    }
    let f = e.field();
    let ring = PolyRing::new(f.clone());
    let h = reduced_division_polys(e, m).pop().expect("nonempty");
    if m % 2 == 1 {
        return Ok(h);
    }
    let rhs = ring.from_coeffs(vec![e.b().clone(), e.a().clone(), f.zero(), f.one()]);
    let half = f.inv(&f.from_int(2)).expect("odd characteristic");
    Ok(ring.scale(&ring.mul(&h, &rhs), &half))
}

/// `x(2P)` from `x(P)`.
fn x_double<F: FiniteField>(e: &Curve<F>, x: &F::Elem) -> Option<F::Elem> {
    let f = e.field();
    let x2 = f.square(x);
    let num = f.add(
        &f.sub(
            &f.sub(&f.square(&x2), &f.scale(&f.mul(e.a(), &x2), 2)),
            &f.scale(&f.mul(e.b(), x), 8),
        ),
        &f.square(e.a()),
    );
    let den = f.scale(&e.rhs(x), 4);
    f.div(&num, &den).ok()
}

/// `x(P + Q)` from `x(P)`, `x(Q)` and `x(P - Q)`.
fn x_add<F: FiniteField>(e: &Curve<F>, x1: &F::Elem, x2: &F::Elem, x_diff: &F::Elem) -> Option<F::Elem> {
    let f = e.field();
    let s = f.add(x1, x2);
    let num = f.add(
        &f.scale(&f.mul(&s, &f.add(&f.mul(x1, x2), e.a())), 2),
        &f.scale(e.b(), 4),
    );
    let d = f.sub(x1, x2);
    let q = f.div(&num, &f.square(&d)).ok()?;
    Some(f.sub(&q, x_diff))
}

/// `x(iP)` for `i = 1..=n` given `x(P)`, where `P` has order `> 2n`.
pub(crate) fn x_multiples<F: FiniteField>(e: &Curve<F>, x: &F::Elem, n: usize) -> Option<Vec<F::Elem>> {
    let mut xs = vec![x.clone()];
    if n >= 2 {
        xs.push(x_double(e, x)?);
    }
    for i in 2..n {
        let next = x_add(e, &xs[i - 1], x, &xs[i - 2])?;
        xs.push(next);
    }
    Some(xs)
}

/// The Frobenius-stable subgroups of order `p`, sorted by kernel polynomial.
pub fn rational_subgroups<R: Rng + ?Sized>(e: &Curve<PrimeField>, p: u64, rng: &mut R) -> Result<Vec<Subgroup<u64>>> {
    if !crate::arith::is_prime(p) {
        return Err(Error::NotPrime(p));
    }
    let base = *e.field();
    if p == base.p() {
        return Err(Error::InvalidArgument(
            "subgroup order equals the characteristic".into(),
        ));
    }
    let ring = PolyRing::new(base);
    if p == 2 {
        let f = ring.from_coeffs(vec![*e.b(), *e.a(), 0, 1]);
        return Ok(ring
            .roots(&f, rng)
            .into_iter()
            .map(|r| Subgroup {
                order: 2,
                kernel: ring.linear(&r),
            })
            .collect());
    }
    let half = ((p - 1) / 2) as usize;
    let psi = division_poly(e, p as usize)?;
    let mut out = Vec::new();
    for (d, g) in ring.distinct_degree(&psi) {
        // x(P) of a point in a rational subgroup generates a subfield of the
        // degree-(p-1)/2 extension cut out by the kernel polynomial.
        if !half.is_multiple_of(d) {
            continue;
        }
        for u in ring.equal_degree_split(&g, d, rng) {
            let kernel = if d == 1 && half == 1 {
                u.clone()
            } else {
                let field = ExtField::with_modulus(base, u.coeffs().to_vec())?;
                let ext_curve = e.base_change(&field);
                let xs = x_multiples(&ext_curve, &field.generator(), half)
                    .ok_or_else(|| Error::Invariant("torsion multiple hit a pole".into()))?;
                let ext_ring = PolyRing::new(field.clone());
                let k = ext_ring.from_roots(&xs);
                match k
                    .coeffs()
                    .iter()
                    .map(|c| field.to_base(c))
                    .collect::<Option<Vec<u64>>>()
                {
                    Some(cs) => ring.from_coeffs(cs),
                    None => continue,
                }
            };
            let sub = Subgroup { order: p, kernel };
            if !out.contains(&sub) {
                out.push(sub);
            }
        }
    }
    out.sort();
    Ok(out)
}

/// Vélu's formulas in Kohel's form: the codomain of the isogeny with the given
/// kernel of order 1, 2 or an odd prime.
pub fn velu<F: FiniteField>(e: &Curve<F>, ker: &Subgroup<F::Elem>) -> Result<Curve<F>> {
    let f = e.field();
    let (a, b) = (e.a(), e.b());
    let coeff = |i: usize| ker.kernel.coeff(i).cloned().unwrap_or_else(|| f.zero());
    let (t, w) = match ker.order {
        1 => return Ok(e.clone()),
        2 => {
            if ker.kernel.degree() != Some(1) {
                return Err(Error::InvalidArgument("order-2 kernel must be linear".into()));
            }
            let x0 = f.neg(&coeff(0));
            let v = f.add(&f.scale(&f.square(&x0), 3), a);
            let w = f.mul(&x0, &v);
            (v, w)
        }
        ell if ell % 2 == 1 => {
            let n = ((ell - 1) / 2) as usize;
            if ker.kernel.degree() != Some(n) {
                return Err(Error::InvalidArgument(format!(
                    "kernel polynomial of an order-{ell} subgroup must have degree {n}"
                )));
            }
            // Elementary symmetric functions from the monic kernel polynomial.
            let s1 = f.neg(&coeff(n - 1));
            let s2 = if n >= 2 { coeff(n - 2) } else { f.zero() };
            let s3 = if n >= 3 { f.neg(&coeff(n - 3)) } else { f.zero() };
            let p1 = s1.clone();
            let p2 = f.sub(&f.square(&s1), &f.scale(&s2, 2));
            let p3 = f.add(
                &f.sub(&f.pow_u64(&s1, 3), &f.scale(&f.mul(&s1, &s2), 3)),
                &f.scale(&s3, 3),
            );
            let nn = n as i64;
            let t = f.add(&f.scale(&p2, 6), &f.scale(a, 2 * nn));
            let w = f.add(
                &f.add(&f.scale(&p3, 10), &f.scale(&f.mul(a, &p1), 6)),
                &f.scale(b, 4 * nn),
            );
            (t, w)
        }
        other => return Err(Error::InvalidArgument(format!("unsupported kernel order {other}"))),
    };
    let a2 = f.sub(a, &f.scale(&t, 5));
    let b2 = f.sub(b, &f.scale(&w, 7));
    Curve::new(f.clone(), a2, b2)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::curve::{FrobeniusData, Point};
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn small_division_polynomials() {
        let e = Curve::over_prime(101, 7, 13).unwrap();
        let ring = PolyRing::new(*e.field());
        assert_eq!(division_poly(&e, 2).unwrap(), ring.from_ints(&[13, 7, 0, 1]));
        assert_eq!(
            division_poly(&e, 3).unwrap(),
            ring.from_ints(&[-49, 12 * 13, 6 * 7, 0, 3])
        );
        let e0 = Curve::over_prime(101, 0, 13).unwrap();
        assert_eq!(division_poly(&e0, 3).unwrap(), ring.from_ints(&[0, 12 * 13, 0, 0, 3]));
        for m in 2..=9usize {
            let deg = division_poly(&e, m).unwrap().degree().unwrap();
            let expect = if m % 2 == 1 { (m * m - 1) / 2 } else { (m * m + 2) / 2 };
            assert_eq!(deg, expect);
        }
    }

    #[test]
    fn division_polynomial_roots_are_torsion() {
        let e = Curve::over_prime(43, 2, 9).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(8);
        for m in 2..=7usize {
            let psi = division_poly(&e, m).unwrap();
            let ring = PolyRing::new(*e.field());
            let degrees: Vec<usize> = ring
                .factor(&psi, &mut rng)
                .iter()
                .map(|(g, _)| g.degree().unwrap())
                .collect();
            let l = degrees.iter().fold(1usize, |acc, &d| num_integer::lcm(acc, d));
            let ext = ExtField::new(*e.field(), 2 * l).unwrap();
            let ee = e.base_change(&ext);
            let psi_ext = PolyRing::new(ext.clone()).from_coeffs(psi.coeffs().iter().map(|&c| ext.embed(c)).collect());
            for r in PolyRing::new(ext.clone()).roots(&psi_ext, &mut rng) {
                let y = ext.sqrt(&ee.rhs(&r)).expect("square in the doubled extension");
                let pt = Point::Affine(r, y);
                assert!(ee.smul_u64(m as u64, &pt).is_infinity());
            }
        }
    }

    #[test]
    fn velu_codomain_is_isogenous() {
        let mut rng = ChaCha8Rng::seed_from_u64(12);
        let mut checked = 0;
        for (p, a, b) in [
            (101u64, 1i64, 3i64),
            (103, 5, 7),
            (107, 2, 11),
            (211, 3, 8),
            (223, 9, 1),
        ] {
            let e = Curve::over_prime(p, a, b).unwrap();
            let t = FrobeniusData::from_curve(&e).unwrap().t;
            for ell in [2u64, 3, 5, 7] {
                for sub in rational_subgroups(&e, ell, &mut rng).unwrap() {
                    let e2 = velu(&e, &sub).unwrap();
                    assert_eq!(FrobeniusData::from_curve(&e2).unwrap().t, t);
                    checked += 1;
                }
            }
            let ring = PolyRing::new(*e.field());
            assert_eq!(velu(&e, &Subgroup::trivial(&ring)).unwrap(), e);
        }
        assert!(checked > 0);
    }
}
