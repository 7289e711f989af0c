// SPDX-License-Identifier: Apache-2.0
//! The shape lattice `L(Q)` and the point/form bijection.

use super::domain::Domain;
use crate::arith::{self, gcd, mul, rem};
use crate::error::{Error, Result};
use crate::forms_core::{is_reduced_square, CubicForm, QuadForm};

/// Which parametrization a lattice uses.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum LatticeKind {
    /// Non-square discriminant: coordinates `(b, c)`, the middle coefficients.
    Nonsquare,
    /// Square discriminant, reduced shape `r x² + s xy`: coordinates `(a, d)`.
    Square,
}

/// The lattice of admissible coordinates for a fixed shape.
#[derive(Debug, Clone)]
pub struct ShapeLattice {
    shape: QuadForm,
    kind: LatticeKind,
    basis: [(i64, i64); 2],
    covolume: i64,
    domain: Domain,
}

impl ShapeLattice {
    pub fn shape(&self) -> &QuadForm {
        &self.shape
    }
    pub fn kind(&self) -> LatticeKind {
        self.kind
    }
    /// Hermite basis `(p, 0), (q, h)`.
    pub fn basis(&self) -> [(i64, i64); 2] {
        self.basis
    }
    pub fn covolume(&self) -> i64 {
        self.covolume
    }
    pub(crate) fn domain(&self) -> &Domain {
        &self.domain
    }

    /// Disc of the shape.
    pub fn disc(&self) -> i64 {
        self.shape.disc()
    }

    /// Congruence membership test.
    pub fn contains(&self, x: i64, y: i64) -> bool {
        let (r, s, t) = self.shape.coeffs();
        let (r, s, t, x, y) = (r as i128, s as i128, t as i128, x as i128, y as i128);
        match self.kind {
            LatticeKind::Nonsquare => {
                rem(s * x - r * y, 3 * t) == 0 && rem(s * y - t * x, 3 * r) == 0
            }
            LatticeKind::Square => {
                let d = self.shape.disc() as i128;
                rem(3 * y, d) == 0
            }
        }
    }

    /// Point with lattice coordinates `(i, j)` in the stored basis.
    pub fn from_basis_coords(&self, i: i64, j: i64) -> Result<(i64, i64)> {
        let [(p, _), (q, h)] = self.basis;
        let x = arith::add(mul(i as i128, p as i128, "basis")?, mul(j as i128, q as i128, "basis")?, "basis")?;
        let y = mul(j as i128, h as i128, "basis")?;
        Ok((arith::to_i64(x, "basis")?, arith::to_i64(y, "basis")?))
    }

    /// Multiplier `n` of the coordinates (zero on the degenerate cone).
    pub fn multiplier(&self, x: i64, y: i64) -> Result<i128> {
        const C: &str = "multiplier";
        let (r, s, t) = self.shape.coeffs();
        let (r, s, t) = (r as i128, s as i128, t as i128);
        let (x, y) = (x as i128, y as i128);
        match self.kind {
            LatticeKind::Nonsquare => {
                let qp = self.shape.adjoint().eval(x, y)?;
                let rt = mul(r, t, C)?;
                if qp % rt != 0 {
                    return Err(Error::invalid("multiplier is not integral"));
                }
                Ok(qp / rt)
            }
            LatticeKind::Square => {
                // n = 9 d (r³ d - s³ a) / D²
                let (a, d) = (x, y);
                let g = arith::sub(mul(mul(r * r, r, C)?, d, C)?, mul(mul(s * s, s, C)?, a, C)?, C)?;
                let num = mul(mul(9, d, C)?, g, C)?;
                let dd = self.shape.disc() as i128;
                let den = dd * dd;
                if num % den != 0 {
                    return Err(Error::invalid("multiplier is not integral"));
                }
                Ok(num / den)
            }
        }
    }

    /// Build a point, checking membership and non-degeneracy.
    pub fn point(&self, x: i64, y: i64) -> Result<ShapePoint<'_>> {
        if !self.contains(x, y) {
            return Err(Error::invalid(format!("({x},{y}) is not in the lattice of {}", self.shape)));
        }
        let n = self.multiplier(x, y)?;
        if n == 0 {
            return Err(Error::invalid(format!("({x},{y}) is a degenerate point")));
        }
        let d = self.shape.disc() as i128;
        let ringdisc = arith::mul(arith::mul(n, n, "ring discriminant")?, -d, "ring discriminant")? / 3;
        Ok(ShapePoint { lattice: self, x, y, n, ringdisc })
    }
}

/// A non-degenerate lattice point together with its multiplier.
#[derive(Debug, Clone, Copy)]
pub struct ShapePoint<'a> {
    lattice: &'a ShapeLattice,
    x: i64,
    y: i64,
    n: i128,
    ringdisc: i128,
}

impl PartialEq for ShapePoint<'_> {
    fn eq(&self, other: &Self) -> bool {
        std::ptr::eq(self.lattice, other.lattice) && self.x == other.x && self.y == other.y
    }
}

impl<'a> ShapePoint<'a> {
    pub fn lattice(&self) -> &'a ShapeLattice {
        self.lattice
    }
    /// `(b, c)` or `(a, d)` depending on the lattice kind.
    pub fn coords(&self) -> (i64, i64) {
        (self.x, self.y)
    }
    /// Hessian scale: the attached form has Hessian `n · Q`.
    pub fn n(&self) -> i128 {
        self.n
    }
    /// `-n² D / 3`, the discriminant of the attached ring.
    pub fn ringdisc(&self) -> i128 {
        self.ringdisc
    }
    /// Whether the point lies in the positive cone (`n > 0`).
    pub fn is_plus(&self) -> bool {
        self.n > 0
    }
}

/// Build the shape lattice.
///
/// Non-square shapes need `r, t != 0`; square shapes must already be reduced
/// (`r x² + s xy`, `0 <= r < s`).
pub fn lattice_for(q: &QuadForm) -> Result<ShapeLattice> {
    if !q.is_primitive() {
        return Err(Error::invalid(format!("shape {q} is not primitive")));
    }
    if q.is_negative_definite() {
        return Err(Error::invalid(format!("shape {q} is negative definite")));
    }
    let d = q.disc() as i128;
    if d >= 0 && arith::is_square(d) {
        if !is_reduced_square(q) {
            return Err(Error::unsupported(format!("square shape {q} is not reduced")));
        }
        let step = arith::to_i64(d / gcd(d, 3), "lattice step")?;
        let lat = ShapeLattice {
            shape: *q,
            kind: LatticeKind::Square,
            basis: [(1, 0), (0, step)],
            covolume: step,
            domain: Domain::Square,
        };
        return Ok(lat);
    }
    let (r, s, t) = (q.r() as i128, q.s() as i128, q.t() as i128);
    if r == 0 || t == 0 {
        return Err(Error::unsupported(format!("shape {q} needs r, t != 0")));
    }
    let (m1, b1) = solve_linear(s, 0, 3 * t.abs());
    let (m2, b2) = solve_linear(t, 0, 3 * r.abs());
    debug_assert!(b1 == Some(0) && b2 == Some(0));
    let p = num_integer::lcm(m1, m2);
    // Smallest c > 0 admitting some b, and that b.
    let period = num_integer::lcm(3 * t.abs(), 3 * r.abs());
    let mut found = None;
    for c in 1..=period {
        if let Some(b) = solve_row(r, s, t, c) {
            found = Some((b, c));
            break;
        }
    }
    let (q0, h) = found.ok_or_else(|| Error::invalid("lattice has rank below two"))?;
    let covolume = p * h;
    let alpha = if rem(d, 3) == 0 { 1 } else { 2 };
    let expected = 3i128.pow(alpha) * (r * t).abs();
    if covolume != expected {
        return Err(Error::invalid(format!(
            "covolume {covolume} differs from {expected} for {q}"
        )));
    }
    let shape = *q;
    let domain = Domain::build(&shape)?;
    Ok(ShapeLattice {
        shape,
        kind: LatticeKind::Nonsquare,
        basis: [
            (arith::to_i64(p, "basis")?, 0),
            (arith::to_i64(q0, "basis")?, arith::to_i64(h, "basis")?),
        ],
        covolume: arith::to_i64(covolume, "covolume")?,
        domain,
    })
}

/// Solve `a x ≡ b (mod m)`: returns `(modulus, residue)` of the solution set.
fn solve_linear(a: i128, b: i128, m: i128) -> (i128, Option<i128>) {
    let g = gcd(a, m);
    let m2 = m / g;
    if rem(b, g) != 0 {
        return (m2, None);
    }
    if m2 == 1 {
        return (1, Some(0));
    }
    let inv = arith::mod_inverse(a / g, m2).expect("coprime after division");
    (m2, Some(rem((b / g) * inv, m2)))
}

/// Least `b >= 0` with `(b, c)` in the lattice, if any.
fn solve_row(r: i128, s: i128, t: i128, c: i128) -> Option<i128> {
    let (m1, b1) = solve_linear(s, r * c, 3 * t.abs());
    let (m2, b2) = solve_linear(t, s * c, 3 * r.abs());
    let (b1, b2) = (b1?, b2?);
    // Chinese remainder for b ≡ b1 (m1), b ≡ b2 (m2).
    let g = gcd(m1, m2);
    if rem(b2 - b1, g) != 0 {
        return None;
    }
    let l = num_integer::lcm(m1, m2);
    let (_, u, _) = arith::bezout(m1, m2);
    let k = rem((b2 - b1) / g * u, m2 / g);
    Some(rem(b1 + m1 * k, l))
}

/// The cubic form attached to a lattice point.
pub fn point_to_form(p: &ShapePoint<'_>) -> Result<CubicForm> {
    const C: &str = "point to form";
    let q = p.lattice.shape;
    let (r, s, t) = (q.r() as i128, q.s() as i128, q.t() as i128);
    let (x, y) = (p.x as i128, p.y as i128);
    match p.lattice.kind {
        LatticeKind::Nonsquare => {
            let (b, c) = (x, y);
            let a_num = arith::sub(mul(s, b, C)?, mul(r, c, C)?, C)?;
            let d_num = arith::sub(mul(s, c, C)?, mul(t, b, C)?, C)?;
            debug_assert!(a_num % (3 * t) == 0 && d_num % (3 * r) == 0);
            CubicForm::from_i128(a_num / (3 * t), b, c, d_num / (3 * r))
        }
        LatticeKind::Square => {
            let (a, d) = (x, y);
            let bb = mul(mul(3 * r, r, C)?, d, C)? / (s * s);
            let cc = mul(3 * r, d, C)? / s;
            CubicForm::from_i128(a, bb, cc, d)
        }
    }
}

/// Inverse of [`point_to_form`]: read the coordinates of `f` in `lattice`.
pub fn form_to_point<'a>(lattice: &'a ShapeLattice, f: &CubicForm) -> Result<ShapePoint<'a>> {
    let (h1, h2, h3) = f.hessian_coeffs();
    let q = lattice.shape;
    let (r, s, t) = (q.r() as i128, q.s() as i128, q.t() as i128);
    // Find n with H = n Q.
    let n = if r != 0 {
        h1 / r
    } else if s != 0 {
        h2 / s
    } else {
        h3 / t
    };
    if n == 0 || h1 != n * r || h2 != n * s || h3 != n * t {
        return Err(Error::invalid(format!("Hessian of {f} is not a nonzero multiple of {q}")));
    }
    let (x, y) = match lattice.kind {
        LatticeKind::Nonsquare => (f.b(), f.c()),
        LatticeKind::Square => (f.a(), f.d()),
    };
    let p = lattice.point(x, y)?;
    if p.n != n || point_to_form(&p)? != *f {
        return Err(Error::invalid(format!("{f} is not attached to a point of {q}")));
    }
    Ok(p)
}
