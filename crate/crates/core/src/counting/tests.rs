use super::*;
use crate::forms_core::{pell_fundamental, QuadIrr};
use crate::maximality::is_maximal_pure;
use num_bigint::BigInt;
use num_rational::BigRational;
use std::cmp::Ordering;

fn qf(r: i64, s: i64, t: i64) -> QuadForm {
    QuadForm::new(r, s, t).unwrap()
}

fn opts(filter: Filter, engine: Engine) -> CountOptions {
    CountOptions { filter, engine, ..CountOptions::default() }
}

const MAXIMAL: Filter = Filter::Maximal { sieve: SieveConfig::Exact };

fn suite() -> Vec<QuadForm> {
    [(1, 1, 1), (1, 0, 1), (2, 1, 3), (1, 3, 1), (2, 2, 3), (3, 3, 1), (1, 5, 2), (1, 1, 2), (0, 1, 0), (1, 3, 0), (2, 3, 0)]
        .into_iter()
        .map(|(r, s, t)| qf(r, s, t))
        .collect()
}

#[test]
fn boundary_examples() {
    let q = qf(1, 1, 1);
    let irr = opts(Filter::Irreducible, Engine::Fast);
    let at50 = count_orbits(&q, 50, irr).unwrap();
    assert_eq!(at50.oriented, 2);
    assert_eq!(at50.unoriented, 1);
    assert_eq!(count_orbits(&q, 49, irr).unwrap().oriented, 0);
    assert_eq!(count_orbits(&q, 2, irr).unwrap().oriented, 0);
    assert!(count_orbits(&q, 2, irr).unwrap().points_total > 0);
    for shape in suite() {
        assert_eq!(count_orbits(&shape, 1, CountOptions::default()).unwrap().points_total, 0);
    }
}

#[test]
fn engines_agree_on_suite() {
    for shape in suite() {
        for x in [1_000u64, 20_000] {
            for filter in [Filter::None, Filter::Irreducible, MAXIMAL] {
                let a = count_orbits(&shape, x, opts(filter, Engine::Fast)).unwrap();
                let b = count_orbits(&shape, x, opts(filter, Engine::Naive)).unwrap();
                assert_eq!(a.without_timing(), CountReport { engine: Engine::Fast, ..b.without_timing() }, "{shape} X={x}");
            }
        }
    }
}

#[test]
fn audit_checks_every_point() {
    for shape in suite() {
        let o = CountOptions { audit: true, filter: MAXIMAL, ..CountOptions::default() };
        let rep = count_orbits(&shape, 30_000, o).unwrap();
        assert_eq!(rep.audit.len() as u64, rep.points_total);
        for rec in &rep.audit {
            assert!(rec.disc.unsigned_abs() < 30_000);
            assert_eq!(rec.to_tsv().split('\t').count(), 6);
        }
    }
}

#[test]
fn report_invariants_and_monotonicity() {
    for shape in suite() {
        let mut prev: Option<CountReport> = None;
        for x in [1u64, 10, 100, 1_000, 10_000, 100_000] {
            let rep = count_orbits(&shape, x, opts(MAXIMAL, Engine::Fast)).unwrap();
            let irr = rep.points_irreducible.unwrap();
            let max = rep.points_maximal.unwrap();
            assert!(max <= irr + 1 && irr <= rep.points_total, "{shape} X={x}");
            assert!(rep.maximal_oriented.unwrap() <= max.min(irr));
            if let Some(p) = prev {
                assert!(p.points_total <= rep.points_total);
                assert!(p.oriented <= rep.oriented);
                assert!(p.points_maximal <= rep.points_maximal);
                assert!(p.maximal_oriented <= rep.maximal_oriented);
            }
            prev = Some(rep);
        }
    }
}

#[test]
fn ambiguous_shapes_have_even_oriented_counts() {
    for shape in suite() {
        let rep = count_orbits(&shape, 200_000, opts(Filter::Irreducible, Engine::Fast)).unwrap();
        if rep.gamma == 1 {
            assert_eq!(rep.oriented % 2, 0, "{shape}");
        }
    }
}

#[test]
fn thread_counts_do_not_change_reports() {
    let q = qf(2, 1, 3);
    let base = CountOptions { filter: MAXIMAL, audit: true, threads: Some(1), ..CountOptions::default() };
    let one = count_orbits(&q, 300_000, base).unwrap();
    for k in [2, 4, 8] {
        let other = count_orbits(&q, 300_000, CountOptions { threads: Some(k), ..base }).unwrap();
        assert_eq!(one.without_timing(), other.without_timing());
    }
}

#[test]
fn unnormalized_shapes_are_rejected() {
    let err = count_orbits(&qf(1, 1, -1), 100, CountOptions::default()).unwrap_err();
    assert_eq!(err.exit_code(), 1);
    assert!(count_orbits(&qf(1, 1, 1), 0, CountOptions::default()).is_err());
}

/// Points of the sector `1 <= η/ξ < ε^power`, tested one by one.
fn brute_sector_count(q: &QuadForm, x: u64, power: u32) -> u64 {
    let d = q.disc();
    let (u, w) = pell_fundamental(d).unwrap().power(power);
    let e = QuadIrr::from_ints(u, w, 2, d).unwrap();
    let theta = QuadIrr::from_ints(q.s(), 1, 2 * q.t(), d).unwrap();
    let theta_conj = theta.conjugate();
    let lat = lattice_for(q).unwrap();
    let mut count = 0;
    for c in 0..400i64 {
        for b in -400i64..2000 {
            if !lat.contains(b, c) || lat.multiplier(b, c).unwrap() <= 0 {
                continue;
            }
            let p = lat.point(b, c).unwrap();
            if p.ringdisc().unsigned_abs() >= x as u128 {
                continue;
            }
            let bq = QuadIrr::rational(BigRational::from_integer(b.into()), d).unwrap();
            let xi = &bq - &theta.scale(&BigInt::from(c));
            let eta = &bq - &theta_conj.scale(&BigInt::from(c));
            if xi.signum() == Ordering::Greater && (&(&e * &xi) - &eta).signum() == Ordering::Greater {
                count += 1;
            }
        }
    }
    count
}

#[test]
fn sector_count_matches_point_tests() {
    for (shape, x) in [(qf(1, 3, 1), 20_000u64), (qf(1, 4, 1), 5_000), (qf(1, 6, 1), 2_000)] {
        let fast = count_orbits(&shape, x, CountOptions::default()).unwrap().points_total;
        assert_eq!(fast, brute_sector_count(&shape, x, 6), "{shape}");
    }
}

#[test]
fn uncubed_generator_can_move_the_lattice() {
    // For D = 5 the thirds of the sector hold equally many points, for D = 12
    // they do not, so the thirds must be counted on their own lattices.
    let q5 = qf(1, 3, 1);
    assert_eq!(brute_sector_count(&q5, 20_000, 6), 3 * brute_sector_count(&q5, 20_000, 2));
    let q12 = qf(1, 4, 1);
    assert_ne!(brute_sector_count(&q12, 5_000, 6), 3 * brute_sector_count(&q12, 5_000, 2));
}

#[test]
fn reducible_points_are_scarce() {
    let rep = count_orbits(&qf(1, 1, 1), 10_000_000_000, opts(Filter::Irreducible, Engine::Fast)).unwrap();
    assert!(rep.points_total - rep.oriented < 1000);
}

#[test]
fn pure_counts_match_lattice_enumeration() {
    for x in [1_000u64, 50_000, 400_000] {
        let pure = pure_field_counts(x).unwrap();
        let mut got = Vec::new();
        for shape in [qf(0, 1, 0), qf(1, 3, 0), qf(2, 3, 0)] {
            let rep = count_orbits(&shape, x, CountOptions { filter: MAXIMAL, audit: true, ..CountOptions::default() }).unwrap();
            let lat = lattice_for(&shape).unwrap();
            // The closed-form maximality criterion agrees with the local test.
            let mut by_criterion = 0;
            for rec in &rep.audit {
                let p = lat.point(rec.x, rec.y).unwrap();
                let m = is_maximal_pure(&p).unwrap();
                assert_eq!(Some(m), rec.maximal);
                by_criterion += (m && rec.irreducible == Some(true)) as u64;
            }
            assert_eq!(by_criterion, rep.maximal_oriented.unwrap());
            got.push(rep.maximal_oriented.unwrap());
        }
        assert_eq!(got, vec![2 * pure.q1, 2 * pure.q9_1, 2 * pure.q9_2], "X={x}");
    }
}

#[test]
fn field_counts_by_resolvent() {
    assert_eq!(m3_d(-3, 50).unwrap(), 1);
    assert_eq!(m3_d(-3, 49).unwrap(), 0);
    assert_eq!(m3_d(-4 * 25, 10_000).unwrap(), 0);
    assert_eq!(n_d(-3, 100).unwrap(), pure_field_counts(100).unwrap().total);
    assert_eq!(n_d(-4, 5_000).unwrap(), m3_d(12, 5_000).unwrap());
    assert_eq!(n_d(12, 5_000).unwrap(), m3_d(-36, 5_000).unwrap() + m3_d(-4, 5_000).unwrap());
    assert!(n_d(8 * 9, 100).is_err());
}

#[test]
fn cyclic_fields_match_known_table() {
    // Cyclic cubic fields have conductors 7, 9, 13, 19, 31, 37, 43, 61, 63,
    // 67, 73, 79, 97 (two fields each at 63 and 91) and discriminant f².
    let conductors = [7u64, 9, 13, 19, 31, 37, 43, 61, 63, 63, 67, 73, 79, 91, 91, 97];
    let x = 100 * 100;
    let expected = conductors.iter().filter(|&&f| f * f < x).count() as u64;
    assert_eq!(n_d(1, x).unwrap(), expected);
}
