// SPDX-License-Identifier: Apache-2.0
//! Exact counts of cubic-action orbit representatives of bounded ring
//! discriminant, with irreducibility and maximality filters, plus independent
//! oracles for pure cubic fields.

mod fields;
mod pure;
mod region;

pub use fields::{m3_d, n_d};
pub use pure::{conductor_bound, count_a, count_a_class, dedekind_oracle, field_key, pure_field_counts, DedekindCounts, PureCounts, Residue9};

use crate::arith::{self, SpfSieve};
use crate::error::{Error, Result};
use crate::forms_core::{is_ambiguous, is_irreducible_cubic, QuadForm};
use crate::maximality::{is_maximal_with_primes, SieveConfig};
use crate::shape_param::{is_fundamental_rep, lattice_for, point_to_form, LatticeKind, ShapeLattice, ShapePoint};
use rayon::prelude::*;
use region::{Geometry, Region, Row};
use serde::{Deserialize, Serialize};
use std::time::Instant;

/// Which points are counted beyond membership in the region.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase", tag = "kind")]
pub enum Filter {
    None,
    Irreducible,
    Maximal { sieve: SieveConfig },
}

/// Counting strategy.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Engine {
    /// Exact row intervals and progression counts.
    #[default]
    Fast,
    /// Bounding-box scan testing every lattice point.
    Naive,
}

/// Options for [`count_orbits`].
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct CountOptions {
    pub filter: Filter,
    pub engine: Engine,
    /// Collect and verify one [`AuditRecord`] per representative.
    pub audit: bool,
    /// Worker threads; `None` uses the global pool.
    pub threads: Option<usize>,
}

impl Default for CountOptions {
    fn default() -> Self {
        CountOptions { filter: Filter::None, engine: Engine::Fast, audit: false, threads: None }
    }
}

/// One representative seen by an audited count.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct AuditRecord {
    pub x: i64,
    pub y: i64,
    pub n: i128,
    pub disc: i128,
    pub irreducible: Option<bool>,
    pub maximal: Option<bool>,
}

impl AuditRecord {
    /// Tab-separated line: coordinates, multiplier, discriminant, flags.
    pub fn to_tsv(&self) -> String {
        let flag = |v: Option<bool>| match v {
            Some(true) => "1",
            Some(false) => "0",
            None => "-",
        };
        format!(
            "{}\t{}\t{}\t{}\t{}\t{}",
            self.x,
            self.y,
            self.n,
            self.disc,
            flag(self.irreducible),
            flag(self.maximal)
        )
    }
}

pub(crate) mod dec {
    //! Integers as decimal strings in serialized reports.
    use serde::{de::Error, Deserialize, Deserializer, Serializer};

    pub fn serialize<S: Serializer>(v: &u64, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(&v.to_string())
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<u64, D::Error> {
        String::deserialize(d)?.parse().map_err(D::Error::custom)
    }

    pub mod opt {
        use super::*;

        pub fn serialize<S: Serializer>(v: &Option<u64>, s: S) -> Result<S::Ok, S::Error> {
            match v {
                Some(v) => s.serialize_some(&v.to_string()),
                None => s.serialize_none(),
            }
        }

        pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Option<u64>, D::Error> {
            Option::<String>::deserialize(d)?
                .map(|s| s.parse().map_err(D::Error::custom))
                .transpose()
        }
    }
}


/// Result of [`count_orbits`].
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CountReport {
    pub shape: (i64, i64, i64),
    #[serde(with = "dec")]
    pub x: u64,
    pub filter: Filter,
    pub engine: Engine,
    /// Orbit representatives in the positive cone with `|disc| < X`.
    #[serde(with = "dec")]
    pub points_total: u64,
    /// Those whose form is irreducible.
    #[serde(with = "dec::opt")]
    pub points_irreducible: Option<u64>,
    /// Those whose ring is maximal (reducible rings included).
    #[serde(with = "dec::opt")]
    pub points_maximal: Option<u64>,
    /// Oriented orders: irreducible representatives, or all of them without a filter.
    #[serde(with = "dec")]
    pub oriented: u64,
    /// `oriented / 2^gamma`, rounded up.
    #[serde(with = "dec")]
    pub unoriented: u64,
    /// Maximal orders in fields.
    #[serde(with = "dec::opt")]
    pub maximal_oriented: Option<u64>,
    pub gamma: u32,
    pub seconds: f64,
    pub audited: bool,
    #[serde(skip)]
    pub audit: Vec<AuditRecord>,
}

impl CountReport {
    /// The count selected by the filter.
    pub fn filtered(&self) -> u64 {
        match self.filter {
            Filter::None => self.points_total,
            Filter::Irreducible => self.oriented,
            Filter::Maximal { .. } => self.maximal_oriented.unwrap_or(0),
        }
    }

    /// Same report with the timing zeroed, for reproducibility comparisons.
    pub fn without_timing(&self) -> CountReport {
        CountReport { seconds: 0.0, ..self.clone() }
    }
}

#[derive(Debug, Default, Clone)]
struct Tally {
    total: u64,
    irreducible: u64,
    maximal: u64,
    maximal_fields: u64,
    audit: Vec<AuditRecord>,
}

impl Tally {
    fn absorb(&mut self, other: Tally) {
        self.total += other.total;
        self.irreducible += other.irreducible;
        self.maximal += other.maximal;
        self.maximal_fields += other.maximal_fields;
        self.audit.extend(other.audit);
    }
}

/// Shared read-only context for the workers.
struct Ctx<'a> {
    lat: &'a ShapeLattice,
    x: u64,
    opts: CountOptions,
    sieve: Option<SpfSieve>,
    disc_primes: Vec<u64>,
    needs_rep_check: bool,
    pieces: Vec<region::Piece>,
    bound: i128,
}

impl Ctx<'_> {
    fn candidate_primes(&self, n: i128, out: &mut Vec<u64>) -> Result<()> {
        out.clear();
        out.extend_from_slice(&self.disc_primes);
        let n = n.unsigned_abs();
        match &self.sieve {
            Some(s) if n as u64 <= s.limit() => s.distinct_primes(n as u64, out),
            _ => out.extend(arith::factor(n)?.into_iter().map(|(p, _)| p as u64)),
        }
        if let Filter::Maximal { sieve: SieveConfig::Truncated { prime_bound } } = self.opts.filter {
            out.retain(|&p| p <= prime_bound);
        }
        out.sort_unstable();
        out.dedup();
        Ok(())
    }

    /// Classify a representative already known to lie in the region.
    fn visit(&self, p: &ShapePoint<'_>, tally: &mut Tally, scratch: &mut Vec<u64>) -> Result<()> {
        tally.total += 1;
        let want_irr = !matches!(self.opts.filter, Filter::None);
        let want_max = matches!(self.opts.filter, Filter::Maximal { .. });
        let mut irr = None;
        let mut max = None;
        if want_irr || self.opts.audit {
            let f = point_to_form(p)?;
            if self.opts.audit {
                self.audit_point(p, &f)?;
            }
            if want_irr {
                let i = is_irreducible_cubic(&f)?;
                irr = Some(i);
                tally.irreducible += i as u64;
            }
            if want_max {
                self.candidate_primes(p.n(), scratch)?;
                let m = is_maximal_with_primes(&f, scratch);
                max = Some(m);
                tally.maximal += m as u64;
                tally.maximal_fields += (m && irr == Some(true)) as u64;
            }
        }
        if self.opts.audit {
            let (x, y) = p.coords();
            tally.audit.push(AuditRecord { x, y, n: p.n(), disc: p.ringdisc(), irreducible: irr, maximal: max });
        }
        Ok(())
    }

    fn audit_point(&self, p: &ShapePoint<'_>, f: &crate::forms_core::CubicForm) -> Result<()> {
        let (x, y) = p.coords();
        let ok = f.disc() == p.ringdisc()
            && f.disc().unsigned_abs() < self.x as u128
            && self.lat.contains(x, y)
            && p.is_plus()
            && is_fundamental_rep(p)?;
        if ok {
            Ok(())
        } else {
            Err(Error::invalid(format!("audit failed at ({x},{y}) for {}", self.lat.shape())))
        }
    }

    fn is_rep(&self, p: &ShapePoint<'_>) -> Result<bool> {
        if self.needs_rep_check {
            is_fundamental_rep(p)
        } else {
            Ok(true)
        }
    }

    fn needs_points(&self) -> bool {
        self.opts.audit || !matches!(self.opts.filter, Filter::None)
    }

    fn count_row(&self, row: &Row) -> Result<Tally> {
        let mut tally = Tally::default();
        if !self.needs_points() {
            tally.total = row.len();
            return Ok(tally);
        }
        let mut scratch = Vec::new();
        for xv in row.points() {
            let (xv, yv) = match self.pieces.get(row.piece) {
                Some(piece) => piece.map(xv, row.y as i128)?,
                None => (xv, row.y as i128),
            };
            let p = self.lat.point(arith::to_i64(xv, "row point")?, arith::to_i64(yv, "row point")?)?;
            if self.is_rep(&p)? {
                self.visit(&p, &mut tally, &mut scratch)?;
            }
        }
        Ok(tally)
    }

    fn scan_column(&self, y: i128, xlo: i128, xhi: i128) -> Result<Tally> {
        let mut tally = Tally::default();
        let mut scratch = Vec::new();
        let wedge = crate::shape_param::sector_of(self.lat).map(|s| &s.short);
        for xv in xlo..=xhi {
            let targets = match wedge {
                None => vec![(xv, y)],
                Some(w) => {
                    // Q' is invariant under the pieces' maps: test it first.
                    let qp = self.lat.shape().adjoint().eval(xv, y)?;
                    if qp <= 0 || qp > self.bound {
                        continue;
                    }
                    if !w.contains(arith::to_i64(xv, "scan")?, arith::to_i64(y, "scan")?)? {
                        continue;
                    }
                    let mut v = Vec::with_capacity(self.pieces.len());
                    for piece in &self.pieces {
                        v.push(piece.map(xv, y)?);
                    }
                    v
                }
            };
            for (xv, yv) in targets {
                let (Ok(xv), Ok(yv)) = (i64::try_from(xv), i64::try_from(yv)) else { continue };
                if !self.lat.contains(xv, yv) || self.lat.multiplier(xv, yv)? <= 0 {
                    continue;
                }
                let p = self.lat.point(xv, yv)?;
                if p.ringdisc().unsigned_abs() >= self.x as u128 || !is_fundamental_rep(&p)? {
                    continue;
                }
                self.visit(&p, &mut tally, &mut scratch)?;
            }
        }
        Ok(tally)
    }
}

/// Count cubic-action representatives in `L(Q)⁺` with `|ringdisc| < X`.
///
/// Indefinite shapes must satisfy `r, t > 0` and square shapes must be in the
/// reduced form `r x² + s xy`; see [`crate::forms_core::normalize_shape`].
pub fn count_orbits(q: &QuadForm, x: u64, opts: CountOptions) -> Result<CountReport> {
    if x == 0 {
        return Err(Error::invalid("X must be at least 1"));
    }
    if let Some(0) = opts.threads {
        return Err(Error::invalid("thread count must be positive"));
    }
    let limit = match (opts.engine, opts.filter) {
        (Engine::Naive, _) => MAX_X_NAIVE,
        (Engine::Fast, Filter::None) => MAX_X,
        (Engine::Fast, _) => MAX_X_FILTERED,
    };
    if x > limit {
        return Err(Error::Budget(format!("X = {x} exceeds the limit {limit} for this engine and filter")));
    }
    let start = Instant::now();
    let lat = lattice_for(q)?;
    let orbit_size = orbit_size(&lat)?;
    let region = region::region_for(&lat, x, orbit_size)?;
    let gamma = match lat.kind() {
        LatticeKind::Nonsquare => is_ambiguous(q)? as u32,
        LatticeKind::Square => square_gamma(q),
    };
    let want_max = matches!(opts.filter, Filter::Maximal { .. });
    let n_max = match lat.kind() {
        LatticeKind::Nonsquare => region.bound / (q.r() as i128 * q.t() as i128),
        LatticeKind::Square => 9 * region.bound / (q.disc() as i128 * q.disc() as i128),
    };
    let sieve = if want_max && n_max <= SIEVE_LIMIT {
        Some(SpfSieve::new(n_max.max(1) as u64)?)
    } else {
        None
    };
    let mut disc_primes: Vec<u64> = arith::factor(q.disc().unsigned_abs() as u128)?
        .into_iter()
        .map(|(p, _)| p as u64)
        .collect();
    disc_primes.push(3);
    let ctx = Ctx {
        lat: &lat,
        x,
        opts,
        sieve,
        disc_primes,
        needs_rep_check: matches!(region.geometry, Geometry::Definite { .. }),
        pieces: match region.geometry {
            Geometry::Sector => region::sector_pieces(&lat)?,
            _ => Vec::new(),
        },
        bound: region.bound,
    };
    let run = || -> Result<Tally> {
        match opts.engine {
            Engine::Fast => fast(&ctx, &region),
            Engine::Naive => naive(&ctx, &region),
        }
    };
    let tally = match opts.threads {
        Some(k) => rayon::ThreadPoolBuilder::new()
            .num_threads(k)
            .build()
            .map_err(|e| Error::invalid(format!("thread pool: {e}")))?
            .install(run)?,
        None => run()?,
    };
    let total = tally.total;
    let irreducible = (!matches!(opts.filter, Filter::None)).then_some(tally.irreducible);
    let maximal = want_max.then_some(tally.maximal);
    let oriented = irreducible.unwrap_or(total);
    let div = 1u64 << gamma;
    Ok(CountReport {
        shape: q.coeffs(),
        x,
        filter: opts.filter,
        engine: opts.engine,
        points_total: total,
        points_irreducible: irreducible,
        points_maximal: maximal,
        oriented,
        unoriented: oriented.div_ceil(div),
        maximal_oriented: want_max.then_some(tally.maximal_fields),
        gamma,
        seconds: start.elapsed().as_secs_f64(),
        audited: opts.audit,
        audit: tally.audit,
    })
}

/// Largest X for unfiltered fast counts, which cost little beyond the row bounds.
pub const MAX_X: u64 = 10_000_000_000_000_000;
/// Largest X for filtered fast counts, which test every representative.
pub const MAX_X_FILTERED: u64 = 100_000_000_000_000;
/// Largest X accepted by the bounding-box scan.
pub const MAX_X_NAIVE: u64 = 1_000_000_000_000;
const SIEVE_LIMIT: i128 = 20_000_000;

fn orbit_size(lat: &ShapeLattice) -> Result<u64> {
    if lat.kind() == LatticeKind::Square || lat.disc() > 0 {
        return Ok(1);
    }
    // Cube images of a generic point: the group acts freely off the origin.
    let probe = lat.point(lat.basis()[0].0, 0)?;
    Ok(crate::shape_param::cubic_orbit(&probe, 0)?.len() as u64)
}

/// Square shapes `x² + 3xy`-type: the reduced representative of the conjugate
/// differs unless `r = 0`.
fn square_gamma(q: &QuadForm) -> u32 {
    match crate::forms_core::normalize_square(&q.conjugate()) {
        Ok(red) => (red.form == *q) as u32,
        Err(_) => 0,
    }
}

fn fast(ctx: &Ctx<'_>, region: &Region) -> Result<Tally> {
    let rows = region::rows(ctx.lat, region)?;
    let parts: Vec<Result<Tally>> = rows.par_iter().map(|row| ctx.count_row(row)).collect();
    let mut tally = Tally::default();
    for part in parts {
        tally.absorb(part?);
    }
    if let Geometry::Definite { orbit_size } = region.geometry {
        if !ctx.needs_points() {
            if tally.total % orbit_size != 0 {
                return Err(Error::invalid("region count is not a multiple of the orbit size"));
            }
            tally.total /= orbit_size;
        }
    }
    Ok(tally)
}

fn naive(ctx: &Ctx<'_>, region: &Region) -> Result<Tally> {
    let (xlo, xhi, ylo, yhi) = region::bounding_box(ctx.lat, region)?;
    let parts: Vec<Result<Tally>> = (ylo..=yhi)
        .into_par_iter()
        .map(|y| ctx.scan_column(y, xlo, xhi))
        .collect();
    let mut tally = Tally::default();
    for part in parts {
        tally.absorb(part?);
    }
    Ok(tally)
}

#[cfg(test)]
mod tests;
