use std::fmt;

use num_integer::Integer;

use crate::error::{Error, Result};

/// Primitive positive definite binary quadratic form `ax^2 + bxy + cy^2`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct QForm {
    pub a: i64,
    pub b: i64,
    pub c: i64,
}

impl fmt::Display for QForm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}, {}, {})", self.a, self.b, self.c)
    }
}

impl QForm {
    /// The form `(a, b, (b^2 - D)/4a)`; fails unless `4a | b^2 - D` and `a > 0`.
    pub fn from_ab(a: i64, b: i64, d: i64) -> Result<Self> {
        let num = (b as i128) * (b as i128) - d as i128;
        if a <= 0 || num % (4 * a as i128) != 0 {
            return Err(Error::InvalidArgument(format!(
                "no form ({a}, {b}, *) of discriminant {d}"
            )));
        }
        Ok(QForm {
            a,
            b,
            c: (num / (4 * a as i128)) as i64,
        })
    }

    pub fn disc(&self) -> i64 {
        self.b * self.b - 4 * self.a * self.c
    }

    /// The principal form of discriminant `d`.
    pub fn identity(d: i64) -> Self {
        let b = d.rem_euclid(2);
        QForm {
            a: 1,
            b,
            c: (b * b - d) / 4,
        }
    }

    pub fn is_identity(&self) -> bool {
        self.a == 1
    }

    pub fn is_primitive(&self) -> bool {
        self.a.gcd(&self.b).gcd(&self.c) == 1
    }

    pub fn is_reduced(&self) -> bool {
        self.b.abs() <= self.a && self.a <= self.c && !((self.b.abs() == self.a || self.a == self.c) && self.b < 0)
    }

    /// Move `b` into `(-a, a]` by `x -> x + ky`.
    fn normalize(self) -> Self {
        let d = self.disc() as i128;
        let two_a = 2 * self.a as i128;
        let mut b = (self.b as i128).rem_euclid(two_a);
        if b > self.a as i128 {
            b -= two_a;
        }
        let c = (b * b - d) / (2 * two_a);
        QForm {
            a: self.a,
            b: b as i64,
            c: c as i64,
        }
    }

    /// Gauss reduction to the unique reduced form in the class.
    pub fn reduce(self) -> Self {
        let mut f = self.normalize();
        while f.a > f.c {
            f = QForm {
                a: f.c,
                b: -f.b,
                c: f.a,
            }
            .normalize();
        }
        if f.a == f.c && f.b < 0 {
            f.b = -f.b;
        }
        f
    }

    pub fn inverse(&self) -> Self {
        QForm {
            a: self.a,
            b: -self.b,
            c: self.c,
        }
        .reduce()
    }

    /// Dirichlet composition followed by reduction.
    pub fn compose(&self, other: &QForm) -> QForm {
        let d = self.disc() as i128;
        debug_assert_eq!(d, other.disc() as i128);
        let (a1, b1) = (self.a as i128, self.b as i128);
        let (a2, b2) = (other.a as i128, other.b as i128);
        let s = (b1 + b2) / 2;
        let e12 = a1.extended_gcd(&a2);
        let e = e12.gcd.extended_gcd(&s);
        let g = e.gcd;
        let (e1, e2, e3) = (e.x * e12.x, e.x * e12.y, e.y);
        let a3 = a1 / g * a2 / g;
        let two_a3 = 2 * a3;
        // Terms are reduced mod 2 a3 g before the exact division by g.
        let modulus = two_a3 * g;
        let t1 = (e1 * a1 % modulus) * b2 % modulus;
        let t2 = (e2 * a2 % modulus) * b1 % modulus;
        let t3 = e3 % modulus * (((b1 * b2 + d) / 2) % modulus) % modulus;
        let b3 = ((t1 + t2 + t3).rem_euclid(modulus) / g).rem_euclid(two_a3);
        let c3 = (b3 * b3 - d) / (4 * a3);
        QForm {
            a: a3 as i64,
            b: b3 as i64,
            c: c3 as i64,
        }
        .reduce()
    }

    pub fn square(&self) -> QForm {
        self.compose(self)
    }

    /// `self^k` for signed `k`.
    pub fn pow(&self, k: i64) -> QForm {
        let base = if k < 0 { self.inverse() } else { self.reduce() };
        let mut e = k.unsigned_abs();
        let mut acc = QForm::identity(self.disc());
        let mut sq = base;
        while e > 0 {
            if e & 1 == 1 {
                acc = acc.compose(&sq);
            }
            e >>= 1;
            if e > 0 {
                sq = sq.square();
            }
        }
        acc
    }

    /// Order in the class group (for forms of small order; brute force).
    pub fn order(&self) -> u64 {
        let mut x = self.reduce();
        let mut k = 1;
        while !x.is_identity() {
            x = x.compose(self);
            k += 1;
        }
        k
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn cube_of_two_one_three() {
        let f = QForm { a: 2, b: 1, c: 3 };
        assert_eq!(f.square(), QForm { a: 2, b: -1, c: 3 });
        assert!(f.pow(3).is_identity());
        assert_eq!(f.order(), 3);
        assert_eq!(f.compose(&QForm::identity(-23)), f);
        assert!(f.compose(&f.inverse()).is_identity());
    }

    #[test]
    fn reduction_examples() {
        let f = QForm { a: 4, b: -3, c: 2 }.reduce();
        assert_eq!(f, QForm { a: 2, b: -1, c: 3 });
        assert!(f.is_reduced());
        assert_eq!(QForm { a: 3, b: -3, c: 1 }.reduce().disc(), -3);
        assert_eq!(QForm::identity(-4), QForm { a: 1, b: 0, c: 1 });
    }
}
