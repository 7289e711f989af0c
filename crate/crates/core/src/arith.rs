// SPDX-License-Identifier: Apache-2.0
//! Exact integer helpers: checked 128-bit arithmetic, roots, primes,
//! factorization under a budget, squarefree tests and the Kronecker symbol.

use crate::error::{Error, Result};
use num_integer::{Integer, Roots};

/// Trial-division limit for exact factorization.
pub const TRIAL_DIVISION_LIMIT: u64 = 1_000_000;

#[inline]
pub(crate) fn mul(a: i128, b: i128, ctx: &'static str) -> Result<i128> {
    a.checked_mul(b).ok_or(Error::Overflow(ctx))
}

#[inline]
pub(crate) fn add(a: i128, b: i128, ctx: &'static str) -> Result<i128> {
    a.checked_add(b).ok_or(Error::Overflow(ctx))
}

#[inline]
pub(crate) fn sub(a: i128, b: i128, ctx: &'static str) -> Result<i128> {
    a.checked_sub(b).ok_or(Error::Overflow(ctx))
}

/// Narrow an `i128` to `i64`, reporting overflow.
#[inline]
pub fn to_i64(v: i128, ctx: &'static str) -> Result<i64> {
    i64::try_from(v).map_err(|_| Error::Overflow(ctx))
}

/// Floor of the square root of a non-negative integer.
pub fn isqrt(n: i128) -> i128 {
    debug_assert!(n >= 0);
    (n as u128).sqrt() as i128
}

/// Whether `n` is a perfect square (negative numbers never are).
pub fn is_square(n: i128) -> bool {
    if n < 0 {
        return false;
    }
    let r = isqrt(n);
    r * r == n
}

/// Exact integer cube root if `n` is a perfect cube.
pub fn exact_cbrt(n: i128) -> Option<i128> {
    let r = n.cbrt();
    (r * r * r == n).then_some(r)
}

/// Non-negative gcd.
pub fn gcd(a: i128, b: i128) -> i128 {
    a.gcd(&b)
}

/// Floor division.
#[inline]
pub fn fdiv(a: i128, b: i128) -> i128 {
    Integer::div_floor(&a, &b)
}

/// Least non-negative residue.
#[inline]
pub fn rem(a: i128, m: i128) -> i128 {
    a.mod_floor(&m)
}

/// Modular inverse of `a` modulo `m` (m > 1), if it exists.
pub fn mod_inverse(a: i128, m: i128) -> Option<i128> {
    let e = rem(a, m).extended_gcd(&m);
    (e.gcd == 1).then(|| rem(e.x, m))
}

/// Bezout coefficients: returns (x, y) with a·x + b·y = gcd(a, b).
pub fn bezout(a: i128, b: i128) -> (i128, i128, i128) {
    let e = a.extended_gcd(&b);
    if e.gcd < 0 {
        (-e.gcd, -e.x, -e.y)
    } else {
        (e.gcd, e.x, e.y)
    }
}

/// Primality by trial division; intended for the modest primes met here.
pub fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    if n < 4 {
        return true;
    }
    if n.is_multiple_of(2) || n.is_multiple_of(3) {
        return false;
    }
    let mut d = 5u64;
    while d.saturating_mul(d) <= n {
        if n.is_multiple_of(d) || n.is_multiple_of(d + 2) {
            return false;
        }
        d += 6;
    }
    true
}

/// All primes `<= n` (sieve of Eratosthenes).
pub fn primes_up_to(n: u64) -> Vec<u64> {
    if n < 2 {
        return Vec::new();
    }
    let n = n as usize;
    let mut composite = vec![false; n + 1];
    let mut out = Vec::new();
    for i in 2..=n {
        if !composite[i] {
            out.push(i as u64);
            let mut j = i * i;
            while j <= n {
                composite[j] = true;
                j += i;
            }
        }
    }
    out
}

/// Smallest-prime-factor table for fast factorization of many small integers.
#[derive(Debug, Clone)]
pub struct SpfSieve {
    spf: Vec<u32>,
}

impl SpfSieve {
    /// Build the table for `1..=limit`.
    pub fn new(limit: u64) -> Result<Self> {
        let limit = usize::try_from(limit).map_err(|_| Error::Overflow("sieve size"))?;
        if limit > u32::MAX as usize {
            return Err(Error::Budget(format!("sieve limit {limit} too large")));
        }
        let mut spf = vec![0u32; limit + 1];
        for i in 2..=limit {
            if spf[i] == 0 {
                let mut j = i;
                while j <= limit {
                    if spf[j] == 0 {
                        spf[j] = i as u32;
                    }
                    j += i;
                }
            }
        }
        Ok(SpfSieve { spf })
    }

    /// Largest integer the table covers.
    pub fn limit(&self) -> u64 {
        (self.spf.len() - 1) as u64
    }

    /// Distinct prime divisors of `n` (requires `1 <= n <= limit`).
    pub fn distinct_primes(&self, mut n: u64, out: &mut Vec<u64>) {
        debug_assert!(n >= 1 && n <= self.limit());
        while n > 1 {
            let p = self.spf[n as usize] as u64;
            out.push(p);
            while n.is_multiple_of(p) {
                n /= p;
            }
        }
    }
}

/// Factor `n > 0` by trial division up to [`TRIAL_DIVISION_LIMIT`].
///
/// A remaining cofactor below the square of the limit is prime; anything
/// larger is reported as a budget failure.
pub fn factor(n: u128) -> Result<Vec<(u128, u32)>> {
    if n == 0 {
        return Err(Error::invalid("cannot factor zero"));
    }
    let mut n = n;
    let mut out = Vec::new();
    let mut push = |n: &mut u128, p: u128| {
        let mut e = 0;
        while (*n).is_multiple_of(p) {
            *n /= p;
            e += 1;
        }
        if e > 0 {
            out.push((p, e));
        }
    };
    push(&mut n, 2);
    push(&mut n, 3);
    let lim = TRIAL_DIVISION_LIMIT as u128;
    let mut d: u128 = 5;
    while d <= lim && d * d <= n {
        push(&mut n, d);
        push(&mut n, d + 2);
        d += 6;
    }
    if n > 1 {
        if d * d <= n && n >= lim * lim {
            return Err(Error::Budget(format!(
                "cofactor {n} exceeds trial division limit {TRIAL_DIVISION_LIMIT}"
            )));
        }
        out.push((n, 1));
    }
    Ok(out)
}

/// Whether `n != 0` is squarefree (sign ignored).
pub fn is_squarefree(n: i128) -> Result<bool> {
    if n == 0 {
        return Ok(false);
    }
    Ok(factor(n.unsigned_abs())?.iter().all(|&(_, e)| e == 1))
}

/// Squarefree indicator for `0..=n` (index 0 is false).
pub fn squarefree_table(n: usize) -> Vec<bool> {
    let mut sf = vec![true; n + 1];
    sf[0] = false;
    let mut q = 2usize;
    while q * q <= n {
        let mut j = q * q;
        while j <= n {
            sf[j] = false;
            j += q * q;
        }
        q += 1;
    }
    sf
}

/// Kronecker symbol `(D/n)` for `n >= 1`.
///
/// At 2 this uses `(D/2) = 0` for even `D`, `1` for `D ≡ ±1 (mod 8)` and
/// `-1` for `D ≡ ±3 (mod 8)`; for discriminants that is the familiar rule
/// `1` when `D ≡ 1 (mod 8)` and `-1` when `D ≡ 5 (mod 8)`.
pub fn kronecker(d: i128, n: u128) -> i32 {
    assert!(n >= 1, "kronecker symbol needs n >= 1");
    let mut n = n;
    let mut sign = 1i32;
    while n.is_multiple_of(2) {
        n /= 2;
        match rem(d, 8) {
            0 | 2 | 4 | 6 => return 0,
            1 | 7 => {}
            _ => sign = -sign,
        }
    }
    sign * jacobi(rem(d, n as i128) as u128, n)
}

/// Jacobi symbol `(a/n)` for odd `n >= 1`.
fn jacobi(a: u128, n: u128) -> i32 {
    let (mut a, mut n) = (a % n, n);
    let mut result = 1i32;
    while a != 0 {
        while a % 2 == 0 {
            a /= 2;
            if n % 8 == 3 || n % 8 == 5 {
                result = -result;
            }
        }
        std::mem::swap(&mut a, &mut n);
        if a % 4 == 3 && n % 4 == 3 {
            result = -result;
        }
        a %= n;
    }
    if n == 1 {
        result
    } else {
        0
    }
}

/// Fundamental discriminant test (1 counts as fundamental).
pub fn is_fundamental_discriminant(d: i128) -> bool {
    if d == 0 {
        return false;
    }
    let ok = |m: i128| is_squarefree(m).unwrap_or(false);
    match rem(d, 4) {
        1 => ok(d),
        0 => {
            let m = d / 4;
            matches!(rem(m, 4), 2 | 3) && ok(m)
        }
        _ => false,
    }
}

/// Power of `p` dividing `n != 0`.
pub fn valuation(n: i128, p: i128) -> u32 {
    let mut n = n;
    let mut v = 0;
    while n != 0 && n % p == 0 {
        n /= p;
        v += 1;
    }
    v
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn kronecker_examples() {
        assert_eq!(kronecker(-3, 2), -1);
        assert_eq!(kronecker(5, 5), 0);
        assert_eq!(kronecker(13, 3), 1);
        assert_eq!(kronecker(-4, 3), -1);
        assert_eq!(kronecker(1, 7), 1);
        assert_eq!(kronecker(17, 2), 1);
    }

    #[test]
    fn kronecker_matches_euler_criterion_on_odd_primes() {
        for &p in primes_up_to(200).iter().skip(1) {
            for d in -60i128..60 {
                let a = rem(d, p as i128);
                let expected = if a == 0 {
                    0
                } else {
                    let mut acc = 1i128;
                    for _ in 0..(p - 1) / 2 {
                        acc = acc * a % p as i128;
                    }
                    if acc == 1 {
                        1
                    } else {
                        -1
                    }
                };
                assert_eq!(kronecker(d, p as u128), expected, "d={d} p={p}");
            }
        }
    }

    #[test]
    fn factor_and_squarefree() {
        assert_eq!(factor(360).unwrap(), vec![(2, 3), (3, 2), (5, 1)]);
        assert_eq!(factor(1).unwrap(), vec![]);
        assert_eq!(factor(999_983 * 999_979).unwrap(), vec![(999_979, 1), (999_983, 1)]);
        assert!(matches!(factor(1_000_003u128 * 1_000_033 * 1_000_037), Err(Error::Budget(_))));
        assert!(is_squarefree(30).unwrap());
        assert!(!is_squarefree(-12).unwrap());
        let t = squarefree_table(100);
        for (n, &sf) in t.iter().enumerate().skip(1) {
            assert_eq!(sf, is_squarefree(n as i128).unwrap());
        }
    }

    #[test]
    fn fundamental_discriminants() {
        let f: Vec<i128> = (-30..=30).filter(|&d| is_fundamental_discriminant(d)).collect();
        assert_eq!(
            f,
            vec![-24, -23, -20, -19, -15, -11, -8, -7, -4, -3, 1, 5, 8, 12, 13, 17, 21, 24, 28, 29]
        );
    }

    #[test]
    fn spf_sieve_factors() {
        let s = SpfSieve::new(1000).unwrap();
        let mut v = Vec::new();
        s.distinct_primes(360, &mut v);
        assert_eq!(v, vec![2, 3, 5]);
        v.clear();
        s.distinct_primes(997, &mut v);
        assert_eq!(v, vec![997]);
    }

    #[test]
    fn roots() {
        assert_eq!(isqrt(99), 9);
        assert!(is_square(144));
        assert!(!is_square(-4));
        assert_eq!(exact_cbrt(-27), Some(-3));
        assert_eq!(exact_cbrt(26), None);
        assert_eq!(bezout(6, 15), (3, -2, 1));
    }
}
