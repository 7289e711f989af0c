use super::*;
use crate::shape_param::point_to_form;

fn cf(a: i64, b: i64, c: i64, d: i64) -> CubicForm {
    CubicForm::new(a, b, c, d).unwrap()
}

fn qf(r: i64, s: i64, t: i64) -> QuadForm {
    QuadForm::new(r, s, t).unwrap()
}

#[test]
fn local_examples() {
    assert!(!is_maximal_at(&cf(2, 2, 2, 2), 2).unwrap());
    assert!(is_maximal_at(&cf(1, 0, 0, 2), 2).unwrap());
    assert!(!is_maximal_at(&cf(1, 0, 0, 4), 2).unwrap());
    assert!(is_maximal_at(&cf(1, 0, 0, 4), 3).is_ok());
    assert!(is_maximal_at(&cf(1, 0, 0, 2), 4).is_err());
}

#[test]
fn table_examples() {
    assert_eq!(mu_p(-3, 2), Density::new(3, 4));
    assert_eq!(mu_p(-4, 3), Density::new(16, 27));
    assert_eq!(mu_p(45, 3), Density::new(2, 3));
    assert_eq!(mu_p(-3, 3), Density::new(22, 27));
    assert_eq!(mu_p(5, 5), Density::new(4, 5));
    assert_eq!(mu_p(-4, 2), Density::new(1, 2));
    assert_eq!(mu_p(-12, 2), Density::new(0, 1));
    assert_eq!(mu_p(12, 2), Density::new(1, 2));
    assert_eq!(mu_p(-8, 2), Density::new(1, 2));
    assert_eq!(mu_p(-7, 7), Density::new(6, 7));
}

#[test]
fn empirical_examples() {
    assert_eq!(empirical_mu_p(&qf(1, 1, 1), 2).unwrap(), Density::new(3, 4));
    assert_eq!(empirical_mu_p(&qf(1, 1, 1), 3).unwrap(), Density::new(22, 27));
    assert_eq!(empirical_mu_p(&qf(1, 0, 1), 3).unwrap(), Density::new(16, 27));
}

#[test]
fn empirical_matches_table() {
    let shapes = [(1, 1, 1), (1, 0, 1), (2, 1, 3), (1, 3, 1), (1, 1, -1), (1, 0, -3), (1, 1, 2), (1, 0, 2)];
    for (r, s, t) in shapes {
        let q = qf(r, s, t);
        for p in [2u64, 3, 5, 7] {
            assert_eq!(
                empirical_mu_p(&q, p).unwrap(),
                mu_p(q.disc(), p),
                "shape {q} at {p}"
            );
        }
    }
}

#[test]
fn admissibility() {
    assert!(admissible_shape_disc(-3));
    assert!(admissible_shape_disc(45));
    assert!(!admissible_shape_disc(25));
    assert!(admissible_shape_disc(1));
    assert!(admissible_shape_disc(9));
    assert!(!admissible_shape_disc(-12 * 4));
}

#[test]
fn pure_examples() {
    let l1 = lattice_for(&qf(0, 1, 0)).unwrap();
    assert!(is_maximal_pure(&l1.point(1, 2).unwrap()).unwrap());
    assert!(!is_maximal_pure(&l1.point(1, 8).unwrap()).unwrap());
    let l9 = lattice_for(&qf(1, 3, 0)).unwrap();
    assert!(is_maximal_pure(&l9.point(0, 3).unwrap()).unwrap());
}

#[test]
fn pure_criterion_agrees_with_local_test() {
    for shape in [qf(0, 1, 0), qf(1, 3, 0), qf(2, 3, 0)] {
        let lat = lattice_for(&shape).unwrap();
        let step = lat.basis()[1].1;
        for a in -40i64..=40 {
            for k in 1..=40i64 {
                let d = k * step;
                let Ok(p) = lat.point(a, d) else { continue };
                let f = point_to_form(&p).unwrap();
                if f.disc() == 0 {
                    continue;
                }
                assert_eq!(
                    is_maximal_pure(&p).unwrap(),
                    is_maximal(&f, SieveConfig::Exact).unwrap(),
                    "shape {shape} point ({a},{d}) form {f}"
                );
            }
        }
    }
}

#[test]
fn fast_candidates_match_full_scan() {
    // Scanning every point of the projective line is the reference.
    let scan = |c: &[i128; 4], p: i128| -> bool {
        let p2 = p * p;
        let c = c.map(|v| rem(v, p2));
        if c.iter().all(|&v| v % p == 0) {
            return false;
        }
        let mut pts: Vec<(i128, i128)> = (0..p).map(|x| (x, 1)).collect();
        pts.push((1, 0));
        !pts.into_iter().any(|(u, v)| {
            let (f, fx, fy) = eval_with_partials(&c, u, v, p);
            f == 0 && fx == 0 && fy == 0 && moved_form_is_nonmaximal(&c, u, v, p)
        })
    };
    for p in [5i128, 7, 11] {
        for a in 0..p * p {
            for b in [0, 1, p, 2 * p + 1] {
                for c in [0, 3, p, p * p - 1] {
                    for d in [0, 1, p, 2, p * p - p] {
                        let co = [a, b, c, d];
                        assert_eq!(maximal_at_raw(&co, p), scan(&co, p), "{co:?} at {p}");
                    }
                }
            }
        }
    }
}

#[test]
fn completion_choice_is_irrelevant() {
    let f = [4i128, 12, 9, 18];
    let mut seen = 0;
    for p in [2i128, 3] {
        for (u, v) in [(1i128, 0i128), (0, 1), (1, 1), (2, 1)] {
            if eval_with_partials(&f, u, v, p).0 != 0 {
                continue;
            }
            let (_, x, y) = arith::bezout(u, v);
            let base = moved_leading(&f, u, v, -y, x, p);
            for k in -3..=3 {
                let alt = moved_leading(&f, u, v, -y + k * u, x + k * v, p);
                assert_eq!(base.0, alt.0);
                assert_eq!(base.1 == 0, alt.1 == 0);
            }
            seen += 1;
        }
    }
    assert!(seen > 0);
}

#[test]
fn truncated_is_weaker_than_exact() {
    for a in 1..6 {
        for d in [2 * 49, 3 * 121, 5, 169 * 2] {
            let f = cf(a, 0, 0, d);
            let exact = is_maximal(&f, SieveConfig::Exact).unwrap();
            let trunc = is_maximal(&f, SieveConfig::Truncated { prime_bound: 5 }).unwrap();
            if !trunc {
                assert!(!exact);
            }
        }
    }
}
