//! Integer helpers shared by the field, form and ring layers.

use num_integer::Integer;
use num_prime::nt_funcs::{factorize64, is_prime64};

pub fn is_prime(n: u64) -> bool {
    is_prime64(n)
}

/// Prime factorization of `n` as ascending `(prime, exponent)` pairs. `n = 0, 1` give `[]`.
pub fn factorize(n: u64) -> Vec<(u64, u32)> {
    if n < 2 {
        return Vec::new();
    }
    // BTreeMap keeps the primes sorted.
    factorize64(n).into_iter().map(|(p, e)| (p, e as u32)).collect()
}

/// Distinct prime divisors of `n`, ascending.
pub fn prime_divisors(n: u64) -> Vec<u64> {
    factorize(n).into_iter().map(|(p, _)| p).collect()
}

/// All primes `< bound`, ascending.
pub fn primes_below(bound: u64) -> Vec<u64> {
    if bound < 3 {
        return Vec::new();
    }
    let n = bound as usize;
    let mut sieve = vec![true; n];
    sieve[0] = false;
    sieve[1] = false;
    let mut i = 2;
    while i * i < n {
        if sieve[i] {
            let mut j = i * i;
            while j < n {
                sieve[j] = false;
                j += i;
            }
        }
        i += 1;
    }
    sieve
        .iter()
        .enumerate()
        .filter_map(|(k, &s)| s.then_some(k as u64))
        .collect()
}

pub fn valuation(mut n: u64, p: u64) -> u32 {
    if n == 0 {
        return u32::MAX;
    }
    let mut v = 0;
    while n.is_multiple_of(p) {
        n /= p;
        v += 1;
    }
    v
}

pub fn isqrt(n: u64) -> u64 {
    if n < 2 {
        return n;
    }
    let mut r = (n as f64).sqrt() as u64;
    while r * r > n {
        r -= 1;
    }
    while (r + 1) * (r + 1) <= n {
        r += 1;
    }
    r
}

pub fn is_square(n: u64) -> bool {
    let r = isqrt(n);
    r * r == n
}

/// `a mod m` in `[0, m)` for signed `a`.
pub fn modulo(a: i64, m: u64) -> u64 {
    a.rem_euclid(m as i64) as u64
}

pub fn mul_mod(a: u64, b: u64, m: u64) -> u64 {
    ((a as u128 * b as u128) % m as u128) as u64
}

pub fn pow_mod(mut base: u64, mut exp: u64, m: u64) -> u64 {
    if m == 1 {
        return 0;
    }
    let mut acc = 1u64;
    base %= m;
    while exp > 0 {
        if exp & 1 == 1 {
            acc = mul_mod(acc, base, m);
        }
        base = mul_mod(base, base, m);
        exp >>= 1;
    }
    acc
}

/// Inverse of `a` modulo `m`, if `gcd(a, m) = 1`.
pub fn inv_mod(a: i64, m: u64) -> Option<u64> {
    let m_i = m as i128;
    let g = (a as i128).extended_gcd(&m_i);
    if g.gcd != 1 {
        return None;
    }
    Some(g.x.rem_euclid(m_i) as u64)
}

/// Kronecker symbol `(d / n)` for `n >= 1`.
pub fn kronecker(d: i64, n: u64) -> i32 {
    if n == 0 {
        return if d.abs() == 1 { 1 } else { 0 };
    }
    let mut n = n;
    let mut result = 1i32;
    // Factor of two in n.
    let twos = n.trailing_zeros();
    n >>= twos;
    if twos > 0 {
        if d % 2 == 0 {
            return 0;
        }
        if twos % 2 == 1 {
            let r = d.rem_euclid(8);
            if r == 3 || r == 5 {
                result = -result;
            }
        }
    }
    // Now n is odd: Jacobi symbol (d mod n / n).
    let mut a = d.rem_euclid(n as i64) as u64;
    while a != 0 {
        let t = a.trailing_zeros();
        a >>= t;
        if t % 2 == 1 && (n % 8 == 3 || n % 8 == 5) {
            result = -result;
        }
        if a % 4 == 3 && n % 4 == 3 {
            result = -result;
        }
        std::mem::swap(&mut a, &mut n);
        a %= n;
    }
    if n == 1 {
        result
    } else {
        0
    }
}

/// `L(x) = exp(sqrt(log x log log x))`, the usual subexponential scale.
pub fn l_function(x: f64) -> f64 {
    let lx = x.ln();
    if lx <= 1.0 {
        return 1.0;
    }
    (lx * lx.ln()).sqrt().exp()
}

/// Is `d` a fundamental discriminant (negative or positive)?
pub fn is_fundamental(d: i64) -> bool {
    if d == 0 || d == 1 {
        return false;
    }
    let r = d.rem_euclid(4);
    if r == 1 {
        return is_squarefree(d.unsigned_abs());
    }
    if r == 0 {
        let m = d / 4;
        let mr = m.rem_euclid(4);
        return (mr == 2 || mr == 3) && is_squarefree(m.unsigned_abs());
    }
    false
}

pub fn is_squarefree(n: u64) -> bool {
    factorize(n).iter().all(|&(_, e)| e == 1)
}

/// Split a negative discriminant `d = f^2 d_K` into fundamental part and conductor.
pub fn fundamental_split(d: i64) -> Option<(i64, u64)> {
    if d >= 0 || !matches!(d.rem_euclid(4), 0 | 1) {
        return None;
    }
    let n = d.unsigned_abs();
    let mut square_root = 1u64;
    let mut free = 1u64;
    for (p, e) in factorize(n) {
        square_root *= p.pow(e / 2);
        if e % 2 == 1 {
            free *= p;
        }
    }
    let d0 = -(free as i64);
    if d0.rem_euclid(4) == 1 {
        Some((d0, square_root))
    } else {
        // d ≡ 0 mod 4 forces an even square part here.
        Some((4 * d0, square_root / 2))
    }
}

pub fn divisors(n: u64) -> Vec<u64> {
    let mut out = vec![1u64];
    for (p, e) in factorize(n) {
        let len = out.len();
        let mut pk = 1;
        for _ in 0..e {
            pk *= p;
            for i in 0..len {
                out.push(out[i] * pk);
            }
        }
    }
    out.sort_unstable();
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn kronecker_matches_legendre_for_odd_primes() {
        for p in [3u64, 5, 7, 11, 13, 101] {
            for d in -60i64..60 {
                let r = d.rem_euclid(p as i64) as u64;
                let expect = if r == 0 {
                    0
                } else if (1..p).any(|x| x * x % p == r) {
                    1
                } else {
                    -1
                };
                assert_eq!(kronecker(d, p), expect, "d={d} p={p}");
            }
        }
    }

    #[test]
    fn kronecker_at_two() {
        assert_eq!(kronecker(-7, 2), 1);
        assert_eq!(kronecker(-3, 2), -1);
        assert_eq!(kronecker(-4, 2), 0);
        assert_eq!(kronecker(-40, 3), -1);
    }

    #[test]
    fn fundamental_decomposition() {
        assert_eq!(fundamental_split(-40), Some((-40, 1)));
        assert_eq!(fundamental_split(-108), Some((-3, 6)));
        assert_eq!(fundamental_split(-16), Some((-4, 2)));
        assert_eq!(fundamental_split(-23), Some((-23, 1)));
        assert_eq!(fundamental_split(-5), None);
        assert!(is_fundamental(-40));
        assert!(!is_fundamental(-108));
    }

    #[test]
    fn factorization_is_sorted_and_complete() {
        assert_eq!(factorize(1_770_860), vec![(2, 2), (5, 1), (7, 2), (13, 1), (139, 1)]);
        assert_eq!(factorize(1), vec![]);
        assert_eq!(primes_below(20), vec![2, 3, 5, 7, 11, 13, 17, 19]);
    }
}
