// SPDX-License-Identifier: Apache-2.0
//! Row decomposition of the counting regions.
//!
//! Every region is cut into rows of fixed second coordinate. A row is an
//! interval of first coordinates intersected with one residue class, so its
//! size is a closed-form progression count.

use crate::arith::{self, fdiv, isqrt, mul, rem};
use crate::error::{Error, Result};
use crate::shape_param::{big_inverse, big_mul, sector_of, LatticeKind, ShapeLattice};
use crate::forms_core::BigMatrix;
use num_bigint::BigInt;

/// Points `(x, y)` with `lo <= x <= hi` and `x ≡ residue (mod modulus)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub(crate) struct Row {
    pub y: i64,
    pub lo: i128,
    pub hi: i128,
    pub residue: i128,
    pub modulus: i128,
    /// Sector piece the row belongs to (always 0 outside the sector).
    pub piece: usize,
}

impl Row {
    pub fn len(&self) -> u64 {
        if self.lo > self.hi {
            return 0;
        }
        let m = self.modulus;
        let above = |v: i128| fdiv(v - self.residue, m);
        (above(self.hi) - above(self.lo - 1)) as u64
    }

    pub fn points(&self) -> impl Iterator<Item = i128> + '_ {
        let m = self.modulus;
        let first = self.lo + rem(self.residue - self.lo, m);
        (0..self.len() as i128).map(move |k| first + k * m)
    }
}

/// One third of the indefinite sector, moved onto the short wedge.
///
/// The points of `L` with `ε^(2k) <= η/ξ < ε^(2k+2)` correspond to the points
/// of `A⁻ᵏ L` in the short wedge, where `A` raises `η/ξ` by `ε²`. `A` need not
/// preserve `L`, so each piece carries its own lattice.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub(crate) struct Piece {
    /// `Aᵏ`, mapping the short wedge back to the original coordinates.
    pub to_original: [[i128; 2]; 2],
    /// Hermite basis `(p, 0), (q, h)` of `A⁻ᵏ L`.
    pub p: i128,
    pub q: i128,
    pub h: i128,
}

impl Piece {
    pub fn map(&self, b: i128, c: i128) -> Result<(i128, i128)> {
        const C: &str = "sector piece";
        let m = &self.to_original;
        Ok((
            arith::add(mul(m[0][0], b, C)?, mul(m[0][1], c, C)?, C)?,
            arith::add(mul(m[1][0], b, C)?, mul(m[1][1], c, C)?, C)?,
        ))
    }
}

fn small(m: &BigMatrix) -> Result<[[i128; 2]; 2]> {
    let e = |i: usize, j: usize| i128::try_from(&m[i][j]).map_err(|_| Error::Overflow("sector piece"));
    Ok([[e(0, 0)?, e(0, 1)?], [e(1, 0)?, e(1, 1)?]])
}

/// The three pieces of the sector of `lat`.
pub(crate) fn sector_pieces(lat: &ShapeLattice) -> Result<Vec<Piece>> {
    const C: &str = "sector piece";
    let sector = sector_of(lat).ok_or_else(|| Error::unsupported("shape has no sector"))?;
    let [(p, _), (q, h)] = lat.basis();
    let one = BigInt::from(1);
    let zero = BigInt::from(0);
    let mut power: BigMatrix = [[one.clone(), zero.clone()], [zero, one]];
    let mut out = Vec::new();
    for _ in 0..SECTOR_PIECES {
        let fwd = small(&power)?;
        let back = small(&big_inverse(&power))?;
        let image = |x: i128, y: i128| -> Result<(i128, i128)> {
            Ok((
                arith::add(mul(back[0][0], x, C)?, mul(back[0][1], y, C)?, C)?,
                arith::add(mul(back[1][0], x, C)?, mul(back[1][1], y, C)?, C)?,
            ))
        };
        let (x1, y1) = image(p as i128, 0)?;
        let (x2, y2) = image(q as i128, h as i128)?;
        let (g, u, v) = arith::bezout(y1, y2);
        let q2 = arith::add(mul(u, x1, C)?, mul(v, x2, C)?, C)?;
        let det = arith::sub(mul(x1, y2, C)?, mul(x2, y1, C)?, C)?.abs();
        let p2 = det / g;
        out.push(Piece { to_original: fwd, p: p2, q: rem(q2, p2), h: g });
        power = big_mul(&sector.raise, &power);
    }
    Ok(out)
}

/// Number of `ε²` pieces making up the sector.
pub(crate) const SECTOR_PIECES: u32 = crate::shape_param::SECTOR_POWER / 2;

/// Which geometry a lattice counts in.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub(crate) enum Geometry {
    /// Ellipse; rows hold every point and orbits are split afterwards.
    Definite { orbit_size: u64 },
    /// Sector of the hyperbolic region; rows hold representatives only.
    Sector,
    /// Region under a rectangular hyperbola with `d > 0`.
    Square,
}

/// Region `{0 < |ringdisc| < X}` in lattice coordinates.
#[derive(Debug, Clone, Copy)]
pub(crate) struct Region {
    pub geometry: Geometry,
    /// Non-square: largest admissible `Q'(b, c)`. Square: largest admissible `d·g`.
    pub bound: i128,
}

pub(crate) fn region_for(lat: &ShapeLattice, x: u64, orbit_size: u64) -> Result<Region> {
    const C: &str = "region bound";
    let q = lat.shape();
    let d = q.disc() as i128;
    let xx = x as i128;
    match lat.kind() {
        LatticeKind::Nonsquare => {
            let (r, t) = (q.r() as i128, q.t() as i128);
            if r <= 0 || t <= 0 {
                return Err(Error::unsupported(format!("shape {q} must have r, t > 0 for counting")));
            }
            let rt = mul(r, t, C)?;
            let num = arith::sub(mul(mul(3, mul(rt, rt, C)?, C)?, xx, C)?, 1, C)?;
            let bound = isqrt(num / d.abs());
            let geometry = if d < 0 {
                Geometry::Definite { orbit_size }
            } else {
                if sector_of(lat).is_none() {
                    return Err(Error::unsupported(format!("shape {q} has no sector")));
                }
                Geometry::Sector
            };
            Ok(Region { geometry, bound })
        }
        LatticeKind::Square => {
            let d3 = mul(mul(d, d, C)?, d, C)?;
            let num = arith::sub(mul(d3, xx, C)?, 1, C)?;
            Ok(Region { geometry: Geometry::Square, bound: isqrt(num / 27) })
        }
    }
}

/// Rows covering the region, in increasing `y`.
pub(crate) fn rows(lat: &ShapeLattice, region: &Region) -> Result<Vec<Row>> {
    const C: &str = "row bounds";
    let q = lat.shape();
    let (r, s, t) = (q.r() as i128, q.s() as i128, q.t() as i128);
    let d = q.disc() as i128;
    let m = region.bound;
    let [(p, _), (q0, h)] = lat.basis();
    let (p, q0, h) = (p as i128, q0 as i128, h as i128);
    let mut out = Vec::new();
    let row = |c: i128, lo: i128, hi: i128| -> Result<Row> {
        let j = c / h;
        Ok(Row { y: arith::to_i64(c, C)?, lo, hi, residue: rem(j * q0, p), modulus: p, piece: 0 })
    };
    // Upper and lower roots in b of Q'(b, c) = m.
    let b_hi = |c: i128| -> Result<i128> {
        let disc = arith::add(mul(mul(d, c, C)?, c, C)?, mul(4 * t, m, C)?, C)?;
        Ok(fdiv(arith::add(mul(s, c, C)?, isqrt(disc), C)?, 2 * t))
    };
    let b_lo = |c: i128| -> Result<i128> {
        let disc = arith::add(mul(mul(d, c, C)?, c, C)?, mul(4 * t, m, C)?, C)?;
        Ok(-fdiv(arith::add(mul(-s, c, C)?, isqrt(disc), C)?, 2 * t))
    };
    match region.geometry {
        Geometry::Definite { .. } => {
            if m <= 0 {
                return Ok(out);
            }
            let cmax = isqrt(mul(4 * t, m, C)? / -d);
            let cmax = cmax - cmax % h;
            let mut c = -cmax;
            while c <= cmax {
                let (lo, hi) = (b_lo(c)?, b_hi(c)?);
                if c == 0 {
                    out.push(row(c, lo, -1)?);
                    out.push(row(c, 1, hi)?);
                } else {
                    out.push(row(c, lo, hi)?);
                }
                c += h;
            }
        }
        Geometry::Sector => {
            let wedge = &sector_of(lat).expect("checked in region_for").short;
            let last = wedge.last_row(m)?;
            for (k, piece) in sector_pieces(lat)?.iter().enumerate() {
                let mut c = 0;
                while c <= last {
                    let lo = wedge.floor_c_lambda(c)? + 1;
                    let residue = rem((c / piece.h) * piece.q, piece.p);
                    let y = arith::to_i64(c, C)?;
                    out.push(Row { y, lo, hi: b_hi(c)?, residue, modulus: piece.p, piece: k });
                    c += piece.h;
                }
            }
        }
        Geometry::Square => {
            let s3 = s * s * s;
            let r3 = r * r * r;
            let step = h;
            let mut dd = step;
            while dd <= m {
                let gmax = m / dd;
                let top = mul(r3, dd, C)?;
                // g = r³d - s³a runs over 1..=gmax.
                let lo = -fdiv(gmax - top, s3);
                let hi = fdiv(top - 1, s3);
                out.push(Row { y: arith::to_i64(dd, C)?, lo, hi, residue: 0, modulus: 1, piece: 0 });
                dd += step;
            }
        }
    }
    Ok(out)
}

/// Bounding box `(x_lo, x_hi, y_lo, y_hi)` enclosing every point of the region
/// (for the sector: every point of the short wedge).
pub(crate) fn bounding_box(lat: &ShapeLattice, region: &Region) -> Result<(i128, i128, i128, i128)> {
    const C: &str = "bounding box";
    let q = lat.shape();
    let (r, s, t) = (q.r() as i128, q.s() as i128, q.t() as i128);
    let d = q.disc() as i128;
    let m = region.bound.max(0);
    match region.geometry {
        Geometry::Definite { .. } => {
            let cmax = isqrt(mul(4 * t, m, C)? / -d) + 1;
            let bmax = isqrt(mul(4 * r, m, C)? / -d) + 1;
            Ok((-bmax, bmax, -cmax, cmax))
        }
        Geometry::Sector => {
            let sector = &sector_of(lat).expect("checked in region_for").short;
            let cmax = sector.last_row(m)? + 1;
            let disc = arith::add(mul(mul(d, cmax, C)?, cmax, C)?, mul(4 * t, m, C)?, C)?;
            let bmax = (mul(s.abs(), cmax, C)? + isqrt(disc)) / (2 * t) + 1;
            let bmin = sector.floor_c_lambda(cmax)?.min(0) - 1;
            Ok((bmin, bmax, 0, cmax))
        }
        Geometry::Square => {
            let s3 = s * s * s;
            let r3 = r * r * r;
            Ok((-m / s3 - 1, mul(r3, m, C)? / s3 + 1, 1, m))
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn progression_lengths() {
        let row = Row { y: 0, lo: -7, hi: 12, residue: 2, modulus: 5, piece: 0 };
        let pts: Vec<i128> = row.points().collect();
        assert_eq!(pts, vec![-3, 2, 7, 12]);
        assert_eq!(row.len(), 4);
        let empty = Row { y: 0, lo: 3, hi: 2, residue: 0, modulus: 1, piece: 0 };
        assert_eq!(empty.len(), 0);
        let one = Row { y: 0, lo: 3, hi: 3, residue: 3, modulus: 9, piece: 0 };
        assert_eq!(one.points().collect::<Vec<_>>(), vec![3]);
    }
}
