// SPDX-License-Identifier: Apache-2.0
//! Pure cubic fields: exact counts from coprime squarefree pairs under a
//! hyperbola, and Dedekind's classification as an independent oracle.

use crate::arith::{gcd, isqrt, squarefree_table};
use crate::error::{Error, Result};
use serde::{Deserialize, Serialize};

/// Largest hyperbola parameter accepted (the squarefree table has this many entries).
const MAX_N: u64 = 200_000_000;

/// Congruence between the two members of a pair modulo 9.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Residue9 {
    Any,
    /// `a ≡ b (mod 9)`.
    Plus,
    /// `a ≡ -b (mod 9)`.
    Minus,
}

impl Residue9 {
    fn accepts(self, a: u64, b: u64) -> bool {
        match self {
            Residue9::Any => true,
            Residue9::Plus => (a + 9 - b % 9).is_multiple_of(9),
            Residue9::Minus => (a + b).is_multiple_of(9),
        }
    }
}

fn check_n(n: u64) -> Result<()> {
    if n > MAX_N {
        return Err(Error::Budget(format!("hyperbola parameter {n} exceeds {MAX_N}")));
    }
    Ok(())
}

/// Ordered pairs `(a, b)` of coprime squarefree positive integers with
/// `ab <= n` in the given residue relation.
pub fn count_a_class(n: u64, class: Residue9) -> Result<u64> {
    check_n(n)?;
    if n == 0 {
        return Ok(0);
    }
    let sf = squarefree_table(n as usize);
    let s = isqrt(n as i128) as u64;
    let ok = |a: u64, b: u64| sf[b as usize] && class.accepts(a, b) && gcd(a as i128, b as i128) == 1;
    // Both relations are symmetric in (a, b): count pairs with a <= √n or
    // b <= √n by the hyperbola trick.
    let mut twice = 0u64;
    let mut square = 0u64;
    for a in 1..=s {
        if !sf[a as usize] {
            continue;
        }
        for b in 1..=n / a {
            if ok(a, b) {
                twice += 1;
                if b <= s {
                    square += 1;
                }
            }
        }
    }
    Ok(2 * twice - square)
}

/// `A(n)` when `mod9` is false, `A₂(n)` (pairs with `a ≡ b (mod 9)`) when true.
pub fn count_a(n: u64, mod9: bool) -> Result<u64> {
    count_a_class(n, if mod9 { Residue9::Plus } else { Residue9::Any })
}

/// Field counts by shape for pure cubic fields of `|disc| < X`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct PureCounts {
    /// Largest `N` with `3N² < X`.
    pub conductor_bound: u64,
    /// Fields whose ring of integers has shape `xy`.
    pub q1: u64,
    /// Shape `x² + 3xy`.
    pub q9_1: u64,
    /// Shape `2x² + 3xy`.
    pub q9_2: u64,
    /// All pure cubic fields.
    pub total: u64,
}

/// Largest `N` with `3N² < X`.
pub fn conductor_bound(x: u64) -> u64 {
    if x == 0 {
        0
    } else {
        isqrt((x as i128 - 1) / 3) as u64
    }
}

/// Exact pure-field counts from the hyperbola counts.
pub fn pure_field_counts(x: u64) -> Result<PureCounts> {
    if x == 0 {
        return Err(Error::invalid("X must be at least 1"));
    }
    let n = conductor_bound(x);
    let third = n / 3;
    let any3 = count_a_class(third, Residue9::Any)?;
    let plus3 = count_a_class(third, Residue9::Plus)?;
    let minus3 = count_a_class(third, Residue9::Minus)?;
    let plus = count_a_class(n, Residue9::Plus)?;
    let minus = count_a_class(n, Residue9::Minus)?;
    // Ordered pairs come in swapped couples except (1, 1), which lies in the
    // Plus class and gives the reducible form of the unit lattice point.
    let q1 = (any3 - plus3 - minus3) / 2;
    let q9_1 = plus.saturating_sub(1) / 2;
    let q9_2 = minus / 2;
    Ok(PureCounts { conductor_bound: n, q1, q9_1, q9_2, total: q1 + q9_1 + q9_2 })
}

/// Pure cubic fields split by Dedekind type.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct DedekindCounts {
    /// `a² ≢ b² (mod 9)`: discriminant `-27a²b²`.
    pub type1: u64,
    /// `a² ≡ b² (mod 9)`: discriminant `-3a²b²`.
    pub type2: u64,
}

impl DedekindCounts {
    pub fn total(&self) -> u64 {
        self.type1 + self.type2
    }
}

/// Enumerate `ℚ(∛(ab²))` once each (the member with `a > b`) and count by type.
pub fn dedekind_oracle(x: u64) -> Result<DedekindCounts> {
    if x == 0 {
        return Err(Error::invalid("X must be at least 1"));
    }
    let n = conductor_bound(x);
    check_n(n)?;
    let sf = squarefree_table(n as usize);
    let mut out = DedekindCounts { type1: 0, type2: 0 };
    let x = x as u128;
    for a in 2..=n {
        if !sf[a as usize] {
            continue;
        }
        for b in 1..a.min(n / a + 1) {
            if !sf[b as usize] || gcd(a as i128, b as i128) != 1 {
                continue;
            }
            let k = (a * b) as u128;
            if (a * a) % 9 != (b * b) % 9 {
                if 27 * k * k < x {
                    out.type1 += 1;
                }
            } else if 3 * k * k < x {
                out.type2 += 1;
            }
        }
    }
    Ok(out)
}

/// Canonical pair `(a, b)` with `a > b` for the field `ℚ(∛m)`, `m > 1` cubefree.
pub fn field_key(m: u64) -> Option<(u64, u64)> {
    let mut a = 1;
    let mut b = 1;
    let mut rest = m;
    let mut p = 2;
    while p * p <= rest {
        let mut e = 0;
        while rest.is_multiple_of(p) {
            rest /= p;
            e += 1;
        }
        match e {
            0 => {}
            1 => a *= p,
            2 => b *= p,
            _ => return None,
        }
        p += 1;
    }
    if rest > 1 {
        a *= rest;
    }
    if a == b {
        return None;
    }
    Some((a.max(b), a.min(b)))
}
