//! Short Weierstrass curves `y^2 = x^3 + ax + b` in characteristic `> 3`.

mod count;
mod torsion;

pub use count::{cardinality_ext, is_ordinary, FrobeniusData, COUNT_CAP, EXHAUSTIVE_CAP};
pub use torsion::{division_poly, rational_subgroups, velu, Subgroup};

use num_bigint::BigUint;
use rand::Rng;

use crate::error::{Error, Result};
use crate::field::{ExtField, FieldElem, FiniteField, PrimeField};

#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Point<E> {
    Infinity,
    Affine(E, E),
}

impl<E> Point<E> {
    pub fn is_infinity(&self) -> bool {
        matches!(self, Point::Infinity)
    }

    pub fn x(&self) -> Option<&E> {
        match self {
            Point::Infinity => None,
            Point::Affine(x, _) => Some(x),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Curve<F: FiniteField> {
    field: F,
    a: F::Elem,
    b: F::Elem,
}

impl Curve<PrimeField> {
    /// Convenience constructor for `y^2 = x^3 + ax + b` over `F_p`.
    pub fn over_prime(p: u64, a: i64, b: i64) -> Result<Self> {
        let field = PrimeField::new(p)?;
        let (a, b) = (field.from_int(a), field.from_int(b));
        Curve::new(field, a, b)
    }

    pub fn base_change(&self, ext: &ExtField) -> Curve<ExtField> {
        Curve {
            field: ext.clone(),
            a: ext.embed(self.a),
            b: ext.embed(self.b),
        }
    }

    /// The quadratic twist by the least non-residue.
    pub fn twist(&self) -> Self {
        let f = &self.field;
        let d = f.non_residue();
        let d2 = f.square(&d);
        let d3 = f.mul(&d2, &d);
        Curve {
            field: *f,
            a: f.mul(&self.a, &d2),
            b: f.mul(&self.b, &d3),
        }
    }

    /// Every affine point, in increasing `(x, y)` order.
    pub fn points(&self) -> Vec<Point<u64>> {
        let f = &self.field;
        let mut out = Vec::new();
        for x in 0..f.p() {
            let rhs = self.rhs(&x);
            if let Some(y) = f.sqrt(&rhs) {
                out.push(Point::Affine(x, y));
                if y != 0 {
                    out.push(Point::Affine(x, f.neg(&y)));
                }
            }
        }
        out.sort();
        out
    }
}

impl<F: FiniteField> Curve<F> {
    pub fn new(field: F, a: F::Elem, b: F::Elem) -> Result<Self> {
        let p = field.characteristic();
        if p <= 3 {
            return Err(Error::UnsupportedCharacteristic(p));
        }
        let disc = field.add(
            &field.scale(&field.pow_u64(&a, 3), 4),
            &field.scale(&field.square(&b), 27),
        );
        if field.is_zero(&disc) {
            return Err(Error::SingularCurve);
        }
        Ok(Curve { field, a, b })
    }

    pub fn field(&self) -> &F {
        &self.field
    }

    pub fn a(&self) -> &F::Elem {
        &self.a
    }

    pub fn b(&self) -> &F::Elem {
        &self.b
    }

    /// `x^3 + ax + b`.
    pub fn rhs(&self, x: &F::Elem) -> F::Elem {
        let f = &self.field;
        let x2 = f.square(x);
        f.add(&f.mul(&f.add(&x2, &self.a), x), &self.b)
    }

    pub fn j_invariant(&self) -> F::Elem {
        let f = &self.field;
        let a3 = f.scale(&f.pow_u64(&self.a, 3), 4);
        let denom = f.add(&a3, &f.scale(&f.square(&self.b), 27));
        let num = f.scale(&a3, 1728);
        f.div(&num, &denom).expect("nonsingular curve")
    }

    pub fn contains(&self, p: &Point<F::Elem>) -> bool {
        match p {
            Point::Infinity => true,
            Point::Affine(x, y) => self.field.square(y) == self.rhs(x),
        }
    }

    pub fn neg(&self, p: &Point<F::Elem>) -> Point<F::Elem> {
        match p {
            Point::Infinity => Point::Infinity,
            Point::Affine(x, y) => Point::Affine(x.clone(), self.field.neg(y)),
        }
    }

    pub fn add(&self, p: &Point<F::Elem>, q: &Point<F::Elem>) -> Point<F::Elem> {
        let f = &self.field;
        let (x1, y1, x2, y2) = match (p, q) {
            (Point::Infinity, _) => return q.clone(),
            (_, Point::Infinity) => return p.clone(),
            (Point::Affine(x1, y1), Point::Affine(x2, y2)) => (x1, y1, x2, y2),
        };
        let slope = if x1 == x2 {
            if f.is_zero(&f.add(y1, y2)) {
                return Point::Infinity;
            }
            let num = f.add(&f.scale(&f.square(x1), 3), &self.a);
            f.div(&num, &f.scale(y1, 2)).expect("nonzero y")
        } else {
            f.div(&f.sub(y2, y1), &f.sub(x2, x1)).expect("distinct x")
        };
        let x3 = f.sub(&f.sub(&f.square(&slope), x1), x2);
        let y3 = f.sub(&f.mul(&slope, &f.sub(x1, &x3)), y1);
        Point::Affine(x3, y3)
    }

    pub fn double(&self, p: &Point<F::Elem>) -> Point<F::Elem> {
        self.add(p, p)
    }

    pub fn sub(&self, p: &Point<F::Elem>, q: &Point<F::Elem>) -> Point<F::Elem> {
        self.add(p, &self.neg(q))
    }

    pub fn smul(&self, k: &BigUint, p: &Point<F::Elem>) -> Point<F::Elem> {
        let mut acc = Point::Infinity;
        for i in (0..k.bits()).rev() {
            acc = self.double(&acc);
            if k.bit(i) {
                acc = self.add(&acc, p);
            }
        }
        acc
    }

    pub fn smul_u64(&self, k: u64, p: &Point<F::Elem>) -> Point<F::Elem> {
        let mut acc = Point::Infinity;
        for i in (0..64 - k.leading_zeros()).rev() {
            acc = self.double(&acc);
            if (k >> i) & 1 == 1 {
                acc = self.add(&acc, p);
            }
        }
        acc
    }

    /// `kP` in Jacobian coordinates with a single inversion at the end; the
    /// method of choice over extension fields where inversion is expensive.
    pub fn smul_jacobian(&self, k: &BigUint, p: &Point<F::Elem>) -> Point<F::Elem> {
        let f = &self.field;
        let (x2, y2) = match p {
            Point::Infinity => return Point::Infinity,
            Point::Affine(x, y) => (x, y),
        };
        // (X, Y, Z) with x = X/Z^2, y = Y/Z^3; Z = 0 is infinity.
        let mut acc = (f.one(), f.one(), f.zero());
        for i in (0..k.bits()).rev() {
            acc = self.jacobian_double(&acc);
            if k.bit(i) {
                acc = self.jacobian_add_affine(&acc, x2, y2);
            }
        }
        let (x, y, z) = acc;
        if f.is_zero(&z) {
            return Point::Infinity;
        }
        let zi = f.inv(&z).expect("nonzero");
        let zi2 = f.square(&zi);
        Point::Affine(f.mul(&x, &zi2), f.mul(&y, &f.mul(&zi2, &zi)))
    }

    fn jacobian_double(&self, (x, y, z): &(F::Elem, F::Elem, F::Elem)) -> (F::Elem, F::Elem, F::Elem) {
        let f = &self.field;
        if f.is_zero(z) || f.is_zero(y) {
            return (f.one(), f.one(), f.zero());
        }
        let xx = f.square(x);
        let yy = f.square(y);
        let yyyy = f.square(&yy);
        let zz = f.square(z);
        let s = f.scale(&f.mul(x, &yy), 4);
        let m = f.add(&f.scale(&xx, 3), &f.mul(&self.a, &f.square(&zz)));
        let x3 = f.sub(&f.square(&m), &f.scale(&s, 2));
        let y3 = f.sub(&f.mul(&m, &f.sub(&s, &x3)), &f.scale(&yyyy, 8));
        let z3 = f.scale(&f.mul(y, z), 2);
        (x3, y3, z3)
    }

    fn jacobian_add_affine(
        &self,
        acc: &(F::Elem, F::Elem, F::Elem),
        x2: &F::Elem,
        y2: &F::Elem,
    ) -> (F::Elem, F::Elem, F::Elem) {
        let f = &self.field;
        let (x1, y1, z1) = acc;
        if f.is_zero(z1) {
            return (x2.clone(), y2.clone(), f.one());
        }
        let z1z1 = f.square(z1);
        let u2 = f.mul(x2, &z1z1);
        let s2 = f.mul(y2, &f.mul(z1, &z1z1));
        let h = f.sub(&u2, x1);
        let r = f.sub(&s2, y1);
        if f.is_zero(&h) {
            if f.is_zero(&r) {
                return self.jacobian_double(acc);
            }
            return (f.one(), f.one(), f.zero());
        }
        let hh = f.square(&h);
        let hhh = f.mul(&h, &hh);
        let v = f.mul(x1, &hh);
        let x3 = f.sub(&f.sub(&f.square(&r), &hhh), &f.scale(&v, 2));
        let y3 = f.sub(&f.mul(&r, &f.sub(&v, &x3)), &f.mul(y1, &hhh));
        let z3 = f.mul(z1, &h);
        (x3, y3, z3)
    }

    /// Signed scalar multiple.
    pub fn smul_i64(&self, k: i64, p: &Point<F::Elem>) -> Point<F::Elem> {
        let q = self.smul_u64(k.unsigned_abs(), p);
        if k < 0 {
            self.neg(&q)
        } else {
            q
        }
    }

    /// Coordinatewise `q`-power Frobenius with `q = p` the characteristic.
    pub fn frobenius(&self, p: &Point<F::Elem>) -> Point<F::Elem> {
        match p {
            Point::Infinity => Point::Infinity,
            Point::Affine(x, y) => Point::Affine(self.field.frobenius(x), self.field.frobenius(y)),
        }
    }

    /// Uniform affine point. `x` is drawn until the right-hand side is a square;
    /// a two-torsion `x` is kept with probability 1/2 so every affine point has
    /// the same weight. Never returns infinity.
    pub fn random_point<R: Rng + ?Sized>(&self, rng: &mut R) -> Point<F::Elem> {
        let f = &self.field;
        loop {
            let x = f.random(rng);
            let rhs = self.rhs(&x);
            if f.is_zero(&rhs) {
                if rng.gen_bool(0.5) {
                    return Point::Affine(x, rhs);
                }
                continue;
            }
            if let Some(y) = f.sqrt(&rhs) {
                let y = if rng.gen_bool(0.5) { f.neg(&y) } else { y };
                return Point::Affine(x, y);
            }
        }
    }
}

impl Curve<ExtField> {
    /// Coefficients back in the prime field, when they lie there.
    pub fn descend(&self) -> Option<Curve<PrimeField>> {
        let f = self.field.base();
        Some(Curve {
            field: f,
            a: self.field.to_base(&self.a)?,
            b: self.field.to_base(&self.b)?,
        })
    }
}

/// Whether two ordinary curves over the same prime field are isomorphic:
/// same trace and same `j`.
pub fn isomorphic(e1: &Curve<PrimeField>, e2: &Curve<PrimeField>) -> Result<bool> {
    if e1.field != e2.field {
        return Err(Error::InvalidArgument("curves over different fields".into()));
    }
    if e1.j_invariant() != e2.j_invariant() {
        return Ok(false);
    }
    Ok(FrobeniusData::from_curve(e1)?.t == FrobeniusData::from_curve(e2)?.t)
}

pub type ExtPoint = Point<FieldElem>;
