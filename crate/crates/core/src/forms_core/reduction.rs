// SPDX-License-Identifier: Apache-2.0
//! SL₂(ℤ) reduction, canonical class representatives and class numbers.

use super::forms::{act_on_quadratic, QuadForm, UnimodularMatrix};
use crate::arith::{self, isqrt};
use crate::error::{Error, Result};
use std::collections::BTreeSet;

/// A form together with the matrix carrying the input onto it.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Reduced {
    /// The resulting form.
    pub form: QuadForm,
    /// `form = act_on_quadratic(transform, input)`.
    pub transform: UnimodularMatrix,
}

struct Tracker {
    form: QuadForm,
    g: UnimodularMatrix,
}

impl Tracker {
    fn new(form: QuadForm) -> Self {
        Tracker { form, g: UnimodularMatrix::identity() }
    }

    fn apply(&mut self, h: UnimodularMatrix) -> Result<()> {
        self.form = act_on_quadratic(&h, &self.form)?;
        self.g = h.mul(&self.g)?;
        Ok(())
    }
}

fn translate(k: i64) -> Result<UnimodularMatrix> {
    UnimodularMatrix::new(1, 0, k, 1)
}

fn swap() -> UnimodularMatrix {
    UnimodularMatrix::new(0, 1, -1, 0).expect("determinant one")
}

/// Gauss reduction of a positive definite form.
fn reduce_definite(q: &QuadForm) -> Result<Reduced> {
    let mut tr = Tracker::new(*q);
    loop {
        let (r, s, _) = tr.form.coeffs();
        // Bring s into (-r, r].
        let k = arith::fdiv(r as i128 - s as i128, 2 * r as i128) as i64;
        if k != 0 {
            tr.apply(translate(k)?)?;
        }
        let (r, s, t) = tr.form.coeffs();
        if r > t || (r == t && s < 0) {
            tr.apply(swap())?;
            continue;
        }
        return Ok(Reduced { form: tr.form, transform: tr.g });
    }
}

fn is_reduced_indefinite(q: &QuadForm) -> bool {
    let d = q.disc() as i128;
    let (r, s, _) = q.coeffs();
    let (r, s) = ((r as i128).abs(), s as i128);
    if s <= 0 || s * s >= d {
        return false;
    }
    let lower = (2 * r + s) * (2 * r + s) > d;
    let upper = 2 * r - s < 0 || (2 * r - s) * (2 * r - s) < d;
    lower && upper
}

/// One step of the reduction operator on indefinite forms, with its matrix.
fn rho(q: &QuadForm) -> Result<UnimodularMatrix> {
    let d = q.disc() as i128;
    let (_, s, t) = q.coeffs();
    let (s, t) = (s as i128, t as i128);
    let at = t.abs();
    let root = isqrt(d);
    let target = if at * at > d {
        // s' in (-|t|, |t|]
        let v = arith::rem(-s, 2 * at);
        if v > at {
            v - 2 * at
        } else {
            v
        }
    } else {
        // s' in [root - 2|t| + 1, root]
        let lo = root - 2 * at + 1;
        lo + arith::rem(-s - lo, 2 * at)
    };
    // s' = -s + 2tk
    let k = (target + s) / (2 * t);
    let k = arith::to_i64(k, "reduction step")?;
    UnimodularMatrix::new(0, 1, -1, k)
}

/// Apply `rho` until the form is reduced; returns the form and the step count.
fn reduce_indefinite_form(q: &QuadForm) -> Result<(QuadForm, u64)> {
    let mut form = *q;
    let mut steps = 0u64;
    while !is_reduced_indefinite(&form) {
        form = act_on_quadratic(&rho(&form)?, &form)?;
        steps += 1;
        if steps > 10_000 {
            return Err(Error::Budget("indefinite reduction did not terminate".into()));
        }
    }
    Ok((form, steps))
}

/// The full cycle of reduced forms through a reduced indefinite form.
///
/// Only forms are kept: the accumulated matrices grow like powers of the
/// fundamental unit and leave 64-bit range on long cycles.
fn cycle_of(start: &QuadForm) -> Result<Vec<QuadForm>> {
    let mut out = Vec::new();
    let mut form = *start;
    loop {
        out.push(form);
        form = act_on_quadratic(&rho(&form)?, &form)?;
        if form == *start {
            return Ok(out);
        }
        if out.len() > 1_000_000 {
            return Err(Error::Budget("reduced cycle too long".into()));
        }
    }
}

/// Replay `steps` applications of `rho` from `q`, accumulating the matrix.
fn replay(q: &QuadForm, steps: usize) -> Result<Reduced> {
    let mut tr = Tracker::new(*q);
    for _ in 0..steps {
        let h = rho(&tr.form)?;
        tr.apply(h)?;
    }
    Ok(Reduced { form: tr.form, transform: tr.g })
}

/// Reduced form and the position of the least form on its cycle.
fn indefinite_canonical(q: &QuadForm) -> Result<(QuadForm, u64, usize)> {
    let (red, steps) = reduce_indefinite_form(q)?;
    let cyc = cycle_of(&red)?;
    let (pos, least) = cyc.iter().enumerate().min_by_key(|(_, f)| f.coeffs()).expect("non-empty cycle");
    Ok((*least, steps, pos))
}

fn check_canonical_input(q: &QuadForm) -> Result<()> {
    let d = q.disc();
    if d == 0 || arith::is_square(d as i128) {
        return Err(Error::unsupported(format!("square discriminant {d}")));
    }
    if !q.is_primitive() {
        return Err(Error::invalid(format!("{q} is not primitive")));
    }
    if q.is_negative_definite() {
        return Err(Error::invalid(format!("{q} is negative definite")));
    }
    Ok(())
}

/// Canonical SL₂(ℤ) representative with the matrix reaching it.
///
/// Definite forms use Gauss reduction. Indefinite forms are reduced and the
/// lexicographically least `(r, s, t)` on the cycle of reduced forms is chosen.
pub fn canonical_sl2_with_transform(q: &QuadForm) -> Result<Reduced> {
    check_canonical_input(q)?;
    if q.disc() < 0 {
        return reduce_definite(q);
    }
    let (_, steps, pos) = indefinite_canonical(q)?;
    replay(q, steps as usize + pos)
}

/// Canonical SL₂(ℤ) representative: equal outputs exactly for equivalent inputs.
pub fn canonical_sl2(q: &QuadForm) -> Result<QuadForm> {
    check_canonical_input(q)?;
    if q.disc() < 0 {
        return Ok(reduce_definite(q)?.form);
    }
    Ok(indefinite_canonical(q)?.0)
}

/// Whether `q` is SL₂(ℤ)-equivalent to `r x² - s xy + t y²`.
pub fn is_ambiguous(q: &QuadForm) -> Result<bool> {
    Ok(canonical_sl2(q)? == canonical_sl2(&q.conjugate())?)
}

/// Class group data: one representative per SL₂(ℤ) class.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ClassGroupData {
    /// The discriminant.
    pub d: i64,
    /// Number of classes (positive definite classes when `d < 0`).
    pub h: usize,
    /// Canonical representatives, sorted.
    pub reps: Vec<QuadForm>,
}

/// Validate a non-square discriminant.
pub fn check_discriminant(d: i64) -> Result<()> {
    if d == 0 || arith::is_square(d as i128) {
        return Err(Error::invalid(format!("{d} is a square")));
    }
    if !matches!(arith::rem(d as i128, 4), 0 | 1) {
        return Err(Error::invalid(format!("{d} is not 0 or 1 mod 4")));
    }
    Ok(())
}

/// Class number and representatives for a non-square discriminant.
pub fn narrow_class_number(d: i64) -> Result<ClassGroupData> {
    check_discriminant(d)?;
    let dd = d as i128;
    let mut reps = BTreeSet::new();
    if d < 0 {
        let n = -dd;
        let mut r = 1i128;
        while 3 * r * r <= n {
            for s in -r + 1..=r {
                if arith::rem(s * s - dd, 4 * r) != 0 {
                    continue;
                }
                let t = (s * s - dd) / (4 * r);
                if t < r || (r == t && s < 0) {
                    continue;
                }
                if arith::gcd(arith::gcd(r, s), t) != 1 {
                    continue;
                }
                reps.insert(QuadForm::from_i128(r, s, t)?);
            }
            r += 1;
        }
    } else {
        let root = isqrt(dd);
        let mut seen: BTreeSet<QuadForm> = BTreeSet::new();
        for s in 1..=root {
            if arith::rem(dd - s * s, 4) != 0 {
                continue;
            }
            let m = (dd - s * s) / 4;
            let mut a = 1i128;
            while a * a <= m {
                if m % a == 0 {
                    for &r in &[a, m / a] {
                        for sign in [1i128, -1] {
                            let rr = sign * r;
                            let t = -m / rr;
                            if arith::gcd(arith::gcd(rr, s), t) != 1 {
                                continue;
                            }
                            let f = QuadForm::from_i128(rr, s, t)?;
                            if !is_reduced_indefinite(&f) || seen.contains(&f) {
                                continue;
                            }
                            let cyc = cycle_of(&f)?;
                            let least = cyc.iter().copied().min().expect("non-empty");
                            for g in cyc {
                                seen.insert(g);
                            }
                            reps.insert(least);
                        }
                    }
                }
                a += 1;
            }
        }
    }
    let reps: Vec<QuadForm> = reps.into_iter().collect();
    Ok(ClassGroupData { d, h: reps.len(), reps })
}

/// Square-discriminant normal form `r x² + s xy` with `0 <= r < s = √D`.
pub fn normalize_square(q: &QuadForm) -> Result<Reduced> {
    let d = q.disc() as i128;
    if d <= 0 || !arith::is_square(d) {
        return Err(Error::unsupported(format!("{q} has non-square or zero discriminant")));
    }
    if !q.is_primitive() {
        return Err(Error::invalid(format!("{q} is not primitive")));
    }
    let s0 = isqrt(d);
    let (r, s, t) = (q.r() as i128, q.s() as i128, q.t() as i128);
    let roots: Vec<(i128, i128)> = if r != 0 {
        vec![(-s + s0, 2 * r), (-s - s0, 2 * r)]
    } else {
        vec![(1, 0), (-t, s)]
    };
    for (u, v) in roots {
        let g = arith::gcd(u, v);
        let (u, v) = (u / g, v / g);
        // Complete (p, q; u, v) with p v - q u = 1.
        let (_, x, y) = arith::bezout(v, -u);
        let m = UnimodularMatrix::from_i128(x, y, u, v)?;
        let f = act_on_quadratic(&m, q)?;
        debug_assert_eq!(f.t(), 0);
        if f.s() > 0 {
            let k = -arith::fdiv(f.r() as i128, f.s() as i128);
            let shift = UnimodularMatrix::from_i128(1, k, 0, 1)?;
            let form = act_on_quadratic(&shift, &f)?;
            return Ok(Reduced { form, transform: shift.mul(&m)? });
        }
    }
    Err(Error::unsupported(format!("{q}: no root gives a positive middle coefficient")))
}

/// Whether `q` is already in the square-discriminant normal form.
pub fn is_reduced_square(q: &QuadForm) -> bool {
    let d = q.disc() as i128;
    d > 0 && arith::is_square(d) && q.t() == 0 && q.s() as i128 == isqrt(d) && q.r() >= 0 && q.r() < q.s()
}

/// SL₂ representative suitable for lattice work.
///
/// Definite forms are returned unchanged. Indefinite forms with `r, t > 0` are
/// kept; others are moved to such a representative. Square discriminants are
/// brought to `r x² + s xy` with `0 <= r < s`.
pub fn normalize_shape(q: &QuadForm) -> Result<Reduced> {
    if !q.is_primitive() {
        return Err(Error::invalid(format!("shape {q} is not primitive")));
    }
    if q.is_negative_definite() {
        return Err(Error::invalid(format!("shape {q} is negative definite")));
    }
    let d = q.disc();
    if d >= 0 && arith::is_square(d as i128) {
        return normalize_square(q);
    }
    let id = UnimodularMatrix::identity();
    if d < 0 || (q.r() > 0 && q.t() > 0) {
        return Ok(Reduced { form: *q, transform: id });
    }
    let mut tr = Tracker::new(*q);
    if q.r() <= 0 {
        let (x, y) = first_positive_value(q)?;
        let (_, u, v) = arith::bezout(x, y);
        // rows (x, y), (-v, u): x u + y v = 1.
        tr.apply(UnimodularMatrix::from_i128(x, y, -v, u)?)?;
    }
    let mut k = 0i64;
    while tr.form.t() <= 0 {
        k = if k > 0 { -k } else { -k + 1 };
        let cand = act_on_quadratic(&translate(k)?, &tr.form)?;
        if cand.t() > 0 {
            tr.apply(translate(k)?)?;
        }
    }
    Ok(Reduced { form: tr.form, transform: tr.g })
}

fn first_positive_value(q: &QuadForm) -> Result<(i128, i128)> {
    for radius in 1i128..=1000 {
        for x in -radius..=radius {
            for y in [-radius, radius].into_iter().chain((-radius + 1)..radius) {
                if x.abs() != radius && y.abs() != radius {
                    continue;
                }
                if arith::gcd(x, y) == 1 && q.eval(x, y)? > 0 {
                    return Ok((x, y));
                }
            }
        }
    }
    Err(Error::Budget(format!("no small positive value of {q}")))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q(r: i64, s: i64, t: i64) -> QuadForm {
        QuadForm::new(r, s, t).unwrap()
    }

    #[test]
    fn canonical_examples() {
        assert_eq!(canonical_sl2(&q(1, 1, 1)).unwrap(), q(1, 1, 1));
        assert_eq!(canonical_sl2(&q(1, -1, 1)).unwrap(), q(1, 1, 1));
        assert_ne!(canonical_sl2(&q(2, 1, 3)).unwrap(), canonical_sl2(&q(2, -1, 3)).unwrap());
        assert!(matches!(canonical_sl2(&q(0, 1, 0)), Err(Error::Unsupported(_))));
        assert!(canonical_sl2(&q(2, 2, 2)).is_err());
    }

    #[test]
    fn transforms_are_consistent() {
        for f in [q(5, 7, 3), q(13, 17, 6), q(1, 3, 1), q(7, 11, -3), q(-2, 9, 7)] {
            let red = canonical_sl2_with_transform(&f).unwrap();
            assert_eq!(act_on_quadratic(&red.transform, &f).unwrap(), red.form);
            assert_eq!(red.transform.det(), 1);
        }
    }

    #[test]
    fn ambiguity() {
        assert!(is_ambiguous(&q(1, 1, 1)).unwrap());
        assert!(!is_ambiguous(&q(2, 1, 3)).unwrap());
        assert!(is_ambiguous(&q(1, 0, 1)).unwrap());
        assert!(is_ambiguous(&q(1, 3, 1)).unwrap());
    }

    #[test]
    fn class_numbers() {
        assert_eq!(narrow_class_number(-3).unwrap().h, 1);
        assert_eq!(narrow_class_number(-23).unwrap().h, 3);
        assert_eq!(narrow_class_number(12).unwrap().h, 2);
        assert_eq!(narrow_class_number(-36).unwrap().h, 2);
        assert_eq!(narrow_class_number(5).unwrap().h, 1);
        assert_eq!(narrow_class_number(-47).unwrap().h, 5);
        assert!(narrow_class_number(9).is_err());
        assert!(narrow_class_number(-5).is_err());
    }

    #[test]
    fn square_normalization() {
        assert_eq!(normalize_square(&q(0, 1, 0)).unwrap().form, q(0, 1, 0));
        assert_eq!(normalize_square(&q(0, -1, 0)).unwrap().form, q(0, 1, 0));
        assert_eq!(normalize_square(&q(1, 3, 0)).unwrap().form, q(1, 3, 0));
        assert_eq!(normalize_square(&q(2, 3, 0)).unwrap().form, q(2, 3, 0));
        for f in [q(0, -18, 0).content_primitive().1, q(2, 5, 2), q(1, 5, 4), q(3, 7, 2)] {
            let red = normalize_square(&f).unwrap();
            assert!(is_reduced_square(&red.form), "{f} -> {}", red.form);
            assert_eq!(act_on_quadratic(&red.transform, &f).unwrap(), red.form);
        }
    }

    #[test]
    fn indefinite_normalization() {
        let red = normalize_shape(&q(1, 1, -1)).unwrap();
        assert_eq!(red.form, q(1, 3, 1));
        for f in [q(-1, 3, 1), q(-3, 1, 3), q(2, 7, -1), q(1, 3, 1)] {
            let red = normalize_shape(&f).unwrap();
            assert!(red.form.r() > 0 && red.form.t() > 0, "{f} -> {}", red.form);
            assert_eq!(act_on_quadratic(&red.transform, &f).unwrap(), red.form);
        }
        assert_eq!(normalize_shape(&q(1, 3, 1)).unwrap().transform, UnimodularMatrix::identity());
    }
}
