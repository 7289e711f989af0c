// SPDX-License-Identifier: Apache-2.0
//! Binary quadratic and cubic forms, unimodular matrices and their actions.

use crate::arith::{self, add, gcd, mul, sub, to_i64};
use crate::error::{Error, Result};
use num_bigint::BigInt;
use num_traits::{Signed, Zero};
use std::fmt;

/// The quadratic form `r x² + s xy + t y²`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct QuadForm {
    r: i64,
    s: i64,
    t: i64,
}

impl QuadForm {
    /// Build a form; fails for the zero form or when `s² - 4rt` leaves `i64`.
    ///
    /// Coefficients equal to `i64::MIN` are rejected so that negation is total.
    pub fn new(r: i64, s: i64, t: i64) -> Result<Self> {
        if r == 0 && s == 0 && t == 0 {
            return Err(Error::invalid("zero quadratic form"));
        }
        if [r, s, t].contains(&i64::MIN) {
            return Err(Error::Overflow("quadratic coefficient"));
        }
        let (r2, s2, t2) = (r as i128, s as i128, t as i128);
        let four_rt = mul(4 * r2, t2, "quadratic discriminant")?;
        let d = sub(s2 * s2, four_rt, "quadratic discriminant")?;
        to_i64(d, "quadratic discriminant")?;
        Ok(QuadForm { r, s, t })
    }

    pub(crate) fn from_i128(r: i128, s: i128, t: i128) -> Result<Self> {
        QuadForm::new(
            to_i64(r, "quadratic coefficient")?,
            to_i64(s, "quadratic coefficient")?,
            to_i64(t, "quadratic coefficient")?,
        )
    }

    pub fn r(&self) -> i64 {
        self.r
    }
    pub fn s(&self) -> i64 {
        self.s
    }
    pub fn t(&self) -> i64 {
        self.t
    }

    /// Coefficients `(r, s, t)`.
    pub fn coeffs(&self) -> (i64, i64, i64) {
        (self.r, self.s, self.t)
    }

    /// Discriminant `s² - 4rt` (range checked at construction).
    pub fn disc(&self) -> i64 {
        let (r, s, t) = (self.r as i128, self.s as i128, self.t as i128);
        (s * s - 4 * r * t) as i64
    }

    /// The adjoint form `t x² - s xy + r y²`.
    pub fn adjoint(&self) -> QuadForm {
        QuadForm { r: self.t, s: -self.s, t: self.r }
    }

    /// `r x² - s xy + t y²`.
    pub fn conjugate(&self) -> QuadForm {
        QuadForm { r: self.r, s: -self.s, t: self.t }
    }

    /// Value at `(x, y)`.
    pub fn eval(&self, x: i128, y: i128) -> Result<i128> {
        const C: &str = "quadratic evaluation";
        let a = mul(mul(self.r as i128, x, C)?, x, C)?;
        let b = mul(mul(self.s as i128, x, C)?, y, C)?;
        let c = mul(mul(self.t as i128, y, C)?, y, C)?;
        add(add(a, b, C)?, c, C)
    }

    /// Value at `(x, y)` in arbitrary precision.
    pub fn eval_big(&self, x: &BigInt, y: &BigInt) -> BigInt {
        BigInt::from(self.r) * x * x + BigInt::from(self.s) * x * y + BigInt::from(self.t) * y * y
    }

    /// `(content, primitive part)` with positive content.
    pub fn content_primitive(&self) -> (i64, QuadForm) {
        let g = gcd(gcd(self.r as i128, self.s as i128), self.t as i128) as i64;
        (g, QuadForm { r: self.r / g, s: self.s / g, t: self.t / g })
    }

    pub fn is_primitive(&self) -> bool {
        self.content_primitive().0 == 1
    }

    pub fn is_positive_definite(&self) -> bool {
        self.disc() < 0 && self.r > 0
    }

    pub fn is_negative_definite(&self) -> bool {
        self.disc() < 0 && self.r < 0
    }

    pub fn is_indefinite(&self) -> bool {
        self.disc() > 0
    }

    /// Whether the discriminant is a perfect square (including zero).
    pub fn has_square_disc(&self) -> bool {
        arith::is_square(self.disc() as i128)
    }
}

impl fmt::Display for QuadForm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({},{},{})", self.r, self.s, self.t)
    }
}

/// The cubic form `a x³ + b x²y + c xy² + d y³`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct CubicForm {
    a: i64,
    b: i64,
    c: i64,
    d: i64,
    disc: i128,
}

impl CubicForm {
    /// Build a form; fails when its discriminant overflows 128 bits.
    pub fn new(a: i64, b: i64, c: i64, d: i64) -> Result<Self> {
        let disc = cubic_disc(a as i128, b as i128, c as i128, d as i128)?;
        Ok(CubicForm { a, b, c, d, disc })
    }

    pub(crate) fn from_i128(a: i128, b: i128, c: i128, d: i128) -> Result<Self> {
        const C: &str = "cubic coefficient";
        CubicForm::new(to_i64(a, C)?, to_i64(b, C)?, to_i64(c, C)?, to_i64(d, C)?)
    }

    pub fn a(&self) -> i64 {
        self.a
    }
    pub fn b(&self) -> i64 {
        self.b
    }
    pub fn c(&self) -> i64 {
        self.c
    }
    pub fn d(&self) -> i64 {
        self.d
    }

    /// Coefficients `(a, b, c, d)`.
    pub fn coeffs(&self) -> (i64, i64, i64, i64) {
        (self.a, self.b, self.c, self.d)
    }

    /// Coefficients widened to `i128`.
    pub fn coeffs_i128(&self) -> [i128; 4] {
        [self.a as i128, self.b as i128, self.c as i128, self.d as i128]
    }

    /// `b²c² - 4ac³ - 4b³d - 27a²d² + 18abcd`.
    pub fn disc(&self) -> i128 {
        self.disc
    }

    pub fn is_zero(&self) -> bool {
        self.a == 0 && self.b == 0 && self.c == 0 && self.d == 0
    }

    /// Hessian coefficients `(b² - 3ac, bc - 9ad, c² - 3bd)` without range narrowing.
    pub fn hessian_coeffs(&self) -> (i128, i128, i128) {
        let [a, b, c, d] = self.coeffs_i128();
        (b * b - 3 * a * c, b * c - 9 * a * d, c * c - 3 * b * d)
    }

    /// The Hessian covariant as a quadratic form.
    pub fn hessian(&self) -> Result<QuadForm> {
        let (p, q, r) = self.hessian_coeffs();
        QuadForm::from_i128(p, q, r)
    }

    /// `(content, primitive part)`; fails on the zero form.
    pub fn content_primitive(&self) -> Result<(i64, CubicForm)> {
        if self.is_zero() {
            return Err(Error::invalid("zero cubic form"));
        }
        let [a, b, c, d] = self.coeffs_i128();
        let g = gcd(gcd(a, b), gcd(c, d));
        let prim = CubicForm::from_i128(a / g, b / g, c / g, d / g)?;
        Ok((g as i64, prim))
    }

    /// Value at `(x, y)` in arbitrary precision.
    pub fn eval_big(&self, x: &BigInt, y: &BigInt) -> BigInt {
        let x2 = x * x;
        let y2 = y * y;
        BigInt::from(self.a) * &x2 * x
            + BigInt::from(self.b) * &x2 * y
            + BigInt::from(self.c) * x * &y2
            + BigInt::from(self.d) * &y2 * y
    }
}

impl fmt::Display for CubicForm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({},{},{},{})", self.a, self.b, self.c, self.d)
    }
}

fn cubic_disc(a: i128, b: i128, c: i128, d: i128) -> Result<i128> {
    const C: &str = "cubic discriminant";
    let m = |x: i128, y: i128| mul(x, y, C);
    let bc = m(b, c)?;
    let t1 = m(bc, bc)?;
    let t2 = m(m(4 * a, c)?, m(c, c)?)?;
    let t3 = m(m(4 * d, b)?, m(b, b)?)?;
    let ad = m(a, d)?;
    let t4 = m(27, m(ad, ad)?)?;
    let t5 = m(m(18, ad)?, bc)?;
    let mut acc = sub(t1, t2, C)?;
    acc = sub(acc, t3, C)?;
    acc = sub(acc, t4, C)?;
    add(acc, t5, C)
}

/// A 2×2 integer matrix `((a, b), (c, d))` of determinant ±1.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct UnimodularMatrix {
    m: [[i64; 2]; 2],
}

impl UnimodularMatrix {
    /// Build from rows; fails unless the determinant is ±1.
    pub fn new(a: i64, b: i64, c: i64, d: i64) -> Result<Self> {
        let det = a as i128 * d as i128 - b as i128 * c as i128;
        if det != 1 && det != -1 {
            return Err(Error::invalid(format!("determinant {det} is not ±1")));
        }
        Ok(UnimodularMatrix { m: [[a, b], [c, d]] })
    }

    pub(crate) fn from_i128(a: i128, b: i128, c: i128, d: i128) -> Result<Self> {
        const C: &str = "matrix entry";
        UnimodularMatrix::new(to_i64(a, C)?, to_i64(b, C)?, to_i64(c, C)?, to_i64(d, C)?)
    }

    pub fn identity() -> Self {
        UnimodularMatrix { m: [[1, 0], [0, 1]] }
    }

    /// Rows as a plain array.
    pub fn entries(&self) -> [[i64; 2]; 2] {
        self.m
    }

    pub fn det(&self) -> i64 {
        self.m[0][0] * self.m[1][1] - self.m[0][1] * self.m[1][0]
    }

    /// Matrix product `self · other`.
    pub fn mul(&self, other: &UnimodularMatrix) -> Result<UnimodularMatrix> {
        const C: &str = "matrix product";
        let e = |i: usize, j: usize| -> Result<i128> {
            add(
                mul(self.m[i][0] as i128, other.m[0][j] as i128, C)?,
                mul(self.m[i][1] as i128, other.m[1][j] as i128, C)?,
                C,
            )
        };
        UnimodularMatrix::from_i128(e(0, 0)?, e(0, 1)?, e(1, 0)?, e(1, 1)?)
    }

    pub fn inverse(&self) -> UnimodularMatrix {
        let [[a, b], [c, d]] = self.m;
        let det = self.det();
        UnimodularMatrix { m: [[d * det, -b * det], [-c * det, a * det]] }
    }

    /// Integer power (negative exponents use the inverse).
    pub fn pow(&self, k: i64) -> Result<UnimodularMatrix> {
        let base = if k < 0 { self.inverse() } else { *self };
        let mut acc = UnimodularMatrix::identity();
        for _ in 0..k.unsigned_abs() {
            acc = acc.mul(&base)?;
        }
        Ok(acc)
    }

    /// Image of a column vector: `M · (x, y)ᵗ`.
    pub fn apply_column(&self, x: i128, y: i128) -> Result<(i128, i128)> {
        const C: &str = "matrix-vector product";
        let [[a, b], [c, d]] = self.m;
        let u = add(mul(a as i128, x, C)?, mul(b as i128, y, C)?, C)?;
        let v = add(mul(c as i128, x, C)?, mul(d as i128, y, C)?, C)?;
        Ok((u, v))
    }
}

impl fmt::Display for UnimodularMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let [[a, b], [c, d]] = self.m;
        write!(f, "(({a},{b}),({c},{d}))")
    }
}

/// Discriminant of a quadratic form.
pub fn disc_quadratic(q: &QuadForm) -> i64 {
    q.disc()
}

/// Adjoint form `(t, -s, r)`.
pub fn adjoint(q: &QuadForm) -> QuadForm {
    q.adjoint()
}

/// Discriminant of a cubic form.
pub fn disc_cubic(f: &CubicForm) -> i128 {
    f.disc()
}

/// Hessian covariant of a cubic form.
pub fn hessian(f: &CubicForm) -> Result<QuadForm> {
    f.hessian()
}

/// `Q((x, y) g)`: the substitution acts on row vectors.
pub fn act_on_quadratic(g: &UnimodularMatrix, q: &QuadForm) -> Result<QuadForm> {
    const C: &str = "quadratic action";
    let [[a, b], [c, d]] = g.m.map(|row| row.map(|v| v as i128));
    let (r, s, t) = (q.r as i128, q.s as i128, q.t as i128);
    let new_r = q.eval(a, b)?;
    let new_t = q.eval(c, d)?;
    let mid = add(mul(a, d, C)?, mul(b, c, C)?, C)?;
    let new_s = add(
        add(mul(mul(2 * r, a, C)?, c, C)?, mul(s, mid, C)?, C)?,
        mul(mul(2 * t, b, C)?, d, C)?,
        C,
    )?;
    QuadForm::from_i128(new_r, new_s, new_t)
}

/// Twisted action `(1/det g) · f((x, y) g)`.
pub fn act_on_cubic_twisted(g: &UnimodularMatrix, f: &CubicForm) -> Result<CubicForm> {
    const C: &str = "cubic action";
    let [[a, b], [c, d]] = g.m.map(|row| row.map(|v| v as i128));
    // X = a x + c y and Y = b x + d y as coefficient vectors in (x, y).
    let lx = [a, c];
    let ly = [b, d];
    let coeffs = f.coeffs_i128();
    let mut out = [0i128; 4];
    for (k, &coef) in coeffs.iter().enumerate() {
        if coef == 0 {
            continue;
        }
        // Monomial X^(3-k) Y^k.
        let mut poly = vec![1i128];
        for i in 0..3 {
            let lin = if i < 3 - k { lx } else { ly };
            let mut next = vec![0i128; poly.len() + 1];
            for (j, &p) in poly.iter().enumerate() {
                next[j] = add(next[j], mul(p, lin[0], C)?, C)?;
                next[j + 1] = add(next[j + 1], mul(p, lin[1], C)?, C)?;
            }
            poly = next;
        }
        for j in 0..4 {
            out[j] = add(out[j], mul(coef, poly[j], C)?, C)?;
        }
    }
    let det = g.det() as i128;
    CubicForm::from_i128(out[0] * det, out[1] * det, out[2] * det, out[3] * det)
}

/// Whether `f` has no linear factor over the rationals.
///
/// A modular prefilter settles most forms: a rational linear factor survives
/// reduction modulo any prime that does not kill `f`, so a rootless reduction
/// proves irreducibility. Otherwise candidate roots `p/q` with `p | d` and
/// `q | a` are tested exactly.
pub fn is_irreducible_cubic(f: &CubicForm) -> Result<bool> {
    if f.is_zero() {
        return Err(Error::invalid("zero cubic form"));
    }
    let (_, g) = f.content_primitive()?;
    let [a, b, c, d] = g.coeffs_i128();
    if a == 0 || d == 0 {
        return Ok(false);
    }
    for p in [2i128, 3, 5, 7, 11, 13, 17, 19] {
        let red = [a, b, c, d].map(|v| arith::rem(v, p));
        if red.iter().all(|&v| v == 0) {
            continue;
        }
        let has_root = red[0] == 0
            || (0..p).any(|x| (((red[0] * x + red[1]) * x + red[2]) * x + red[3]) % p == 0);
        if !has_root {
            return Ok(true);
        }
    }
    let dp = divisors(d.unsigned_abs())?;
    let dq = divisors(a.unsigned_abs())?;
    for &num in &dp {
        for &den in &dq {
            if arith::gcd(num as i128, den as i128) != 1 {
                continue;
            }
            for sign in [1i64, -1] {
                let x = BigInt::from(num) * sign;
                let y = BigInt::from(den);
                if g.eval_big(&x, &y).is_zero() {
                    return Ok(false);
                }
            }
        }
    }
    Ok(true)
}

fn divisors(n: u128) -> Result<Vec<u128>> {
    let mut divs = vec![1u128];
    for (p, e) in arith::factor(n)? {
        let len = divs.len();
        let mut pk = 1u128;
        for _ in 0..e {
            pk *= p;
            for i in 0..len {
                divs.push(divs[i] * pk);
            }
        }
    }
    Ok(divs)
}

/// `(content, primitive part)` of a quadratic form.
pub fn content_primitive_quadratic(q: &QuadForm) -> (i64, QuadForm) {
    q.content_primitive()
}

/// `(content, primitive part)` of a cubic form.
pub fn content_primitive_cubic(f: &CubicForm) -> Result<(i64, CubicForm)> {
    f.content_primitive()
}

/// Whether the BigInt vector `(x, y)` leaves `q` fixed under `g` given as BigInt rows.
pub(crate) fn big_matrix_fixes(m: &[[BigInt; 2]; 2], q: &QuadForm) -> bool {
    let [[a, b], [c, d]] = m;
    let (r, s, t) = (BigInt::from(q.r), BigInt::from(q.s), BigInt::from(q.t));
    let new_r = q.eval_big(a, b);
    let new_t = q.eval_big(c, d);
    let new_s: BigInt = BigInt::from(2) * &r * a * c + &s * (a * d + b * c) + BigInt::from(2) * &t * b * d;
    new_r == r && new_s == s && new_t == t && (a * d - b * c).abs() == BigInt::from(1)
}
