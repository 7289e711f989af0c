// SPDX-License-Identifier: Apache-2.0
//! Acceptance report: one PASS/FAIL line per criterion.
//!
//! The process exits non-zero only if a criterion fails that is not listed in
//! `KNOWN_FAILURES`; known failures still print FAIL with their numbers.

use cubic_shapes::arith::{gcd, is_square, rem};
use cubic_shapes::asymptotics::{analytic_coeff_tol, geometric_coeff, square_order_prediction};
use cubic_shapes::cli_harness::{check_hessian_identities, compare_one, ReportRecord};
use cubic_shapes::counting::{count_orbits, dedekind_oracle, pure_field_counts, CountOptions, Engine, Filter};
use cubic_shapes::forms_core::{
    fixes, narrow_class_number, normalize_shape, pell_fundamental, so_q_info, verify_pell_minimal,
    GroupOrder, MinimalityCertificate, QuadForm,
};
use cubic_shapes::maximality::{empirical_mu_p, mu_entry, DensityCase, SieveConfig};
use cubic_shapes::shape_param::{form_to_point, lattice_for, point_to_form, LatticeKind, ShapeLattice};
use cubic_shapes::{Error, Result};
use std::collections::BTreeSet;
use std::f64::consts::PI;
use std::time::Instant;

/// Criteria expected to fail, with the reason recorded in the project notes.
const KNOWN_FAILURES: &[u32] = &[6];

const TEN_10: u64 = 10_000_000_000;

fn qf(r: i64, s: i64, t: i64) -> QuadForm {
    QuadForm::new(r, s, t).expect("valid shape")
}

fn maximal() -> Filter {
    Filter::Maximal { sieve: SieveConfig::Exact }
}

fn opts(filter: Filter) -> CountOptions {
    CountOptions { filter, ..CountOptions::default() }
}

fn shape_suite() -> Vec<QuadForm> {
    let mut v = vec![qf(1, 1, 1), qf(1, 0, 1), qf(2, 1, 3), qf(1, 3, 1), qf(2, 2, 3), qf(3, 3, 1), qf(1, 5, 2)];
    v.push(normalize_shape(&qf(1, 1, -1)).unwrap().form);
    v.extend([qf(0, 1, 0), qf(1, 3, 0), qf(2, 3, 0)]);
    v
}

type Outcome = Result<(bool, String)>;

fn identities() -> Outcome {
    let t = check_hessian_identities(100_000, 20_240_601)?;
    let ok = t.disc_ok == t.pairs && t.covariance_ok == t.pairs;
    Ok((ok, format!("{} pairs, disc identity {} ok, covariance {} ok", t.pairs, t.disc_ok, t.covariance_ok)))
}

/// Round trip and discriminant checks at one point.
fn check_point(lat: &ShapeLattice, x: i64, y: i64) -> Result<bool> {
    let q = lat.shape();
    let d = q.disc() as i128;
    let (r, s, t) = (q.r() as i128, q.s() as i128, q.t() as i128);
    let p = lat.point(x, y)?;
    let f = point_to_form(&p)?;
    let n = p.n();
    let mut ok = f.disc() == p.ringdisc() && f.disc() == -n * n * d / 3;
    ok &= f.hessian_coeffs() == (n * r, n * s, n * t);
    ok &= form_to_point(lat, &f)?.coords() == (x, y);
    ok &= match lat.kind() {
        LatticeKind::Square => {
            let k = r * r * r * (y as i128) * (y as i128) - s * s * s * (x as i128) * (y as i128);
            f.disc() * d * d * d == -27 * k * k
        }
        LatticeKind::Nonsquare => {
            let qp = q.adjoint().eval(x as i128, y as i128)?;
            f.disc() * 3 * r * r * t * t == -qp * qp * d
        }
    };
    Ok(ok)
}

fn bijection() -> Outcome {
    let x = 1_000_000u64;
    let shapes = [qf(1, 1, 1), qf(1, 0, 1), qf(2, 1, 3), qf(1, 3, 1), normalize_shape(&qf(1, 1, -1))?.form, qf(0, 1, 0), qf(1, 3, 0), qf(2, 3, 0)];
    let (mut checked, mut bad) = (0u64, 0u64);
    for q in shapes {
        let lat = lattice_for(&q)?;
        // Fundamental representatives, which cover every shape kind.
        let rep = count_orbits(&q, x, CountOptions { audit: true, ..CountOptions::default() })?;
        for rec in &rep.audit {
            checked += 1;
            bad += u64::from(!check_point(&lat, rec.x, rec.y)? || rec.disc.unsigned_abs() >= x as u128);
        }
        // Every lattice point of a definite shape, not only representatives.
        if q.disc() < 0 {
            let ad = q.disc().unsigned_abs() as i128;
            let n_max = cubic_shapes::arith::isqrt(3 * (x as i128 - 1) / ad);
            let big = q.r().max(q.t()) as i128;
            let rt = q.r() as i128 * q.t() as i128;
            let b = (cubic_shapes::arith::isqrt(4 * big * rt * n_max / ad) + 1) as i64;
            for u in -b..=b {
                for v in -b..=b {
                    if !lat.contains(u, v) || (u, v) == (0, 0) {
                        continue;
                    }
                    let n = lat.multiplier(u, v)?;
                    if n * n * ad / 3 >= x as i128 {
                        continue;
                    }
                    checked += 1;
                    bad += u64::from(!check_point(&lat, u, v)?);
                }
            }
        }
    }
    Ok((bad == 0 && checked > 0, format!("{checked} points checked, {bad} mismatches")))
}

/// Number of `(b, c)` modulo `L = lcm(3|t|, 3|r|)` satisfying the lattice congruences.
fn residue_count(r: i64, s: i64, t: i64) -> (u64, u64) {
    let (mt, mr) = (3 * t.unsigned_abs(), 3 * r.unsigned_abs());
    let g = gcd(mt as i128, mr as i128) as u64;
    let l = mt / g * mr;
    // The first congruence depends on c only modulo 3|t|, the second modulo
    // 3|r|; tabulate solutions b by their class modulo g for each residue.
    let table = |m: u64, ok: &dyn Fn(i64, i64) -> bool| -> Vec<Vec<u64>> {
        (0..m as i64)
            .map(|c| {
                let mut v = vec![0u64; g as usize];
                for b in 0..m as i64 {
                    if ok(b, c) {
                        v[(b as u64 % g) as usize] += 1;
                    }
                }
                v
            })
            .collect()
    };
    let n1 = table(mt, &|b, c| rem((s * b - r * c) as i128, mt as i128) == 0);
    let n2 = table(mr, &|b, c| rem((s * c - t * b) as i128, mr as i128) == 0);
    let mut count = 0u64;
    for c in 0..l {
        let (a, b) = (&n1[(c % mt) as usize], &n2[(c % mr) as usize]);
        count += a.iter().zip(b).map(|(x, y)| x * y).sum::<u64>();
    }
    (l * l, count)
}

fn covolume() -> Outcome {
    let (mut forms, mut bad, mut lattice_checked) = (0u64, Vec::new(), 0u64);
    for r in -20i64..=20 {
        for t in -20i64..=20 {
            if r == 0 || t == 0 {
                continue;
            }
            for s in -20i64..=20 {
                if gcd(gcd(r as i128, s as i128), t as i128) != 1 {
                    continue;
                }
                forms += 1;
                let d = s * s - 4 * r * t;
                let alpha = if rem(d as i128, 3) == 0 { 1 } else { 2 };
                let expected = 3u64.pow(alpha) * (r * t).unsigned_abs();
                let (area, count) = residue_count(r, s, t);
                if area % count != 0 || area / count != expected {
                    bad.push((r, s, t));
                    continue;
                }
                let q = qf(r, s, t);
                let square = d >= 0 && is_square(d as i128);
                if !square && !q.is_negative_definite() {
                    lattice_checked += 1;
                    if lattice_for(&q)?.covolume() as u64 != expected {
                        bad.push((r, s, t));
                    }
                }
            }
        }
    }
    let head: Vec<String> = bad.iter().take(5).map(|f| format!("{f:?}")).collect();
    Ok((
        bad.is_empty(),
        format!("{forms} primitive forms by residue count, {lattice_checked} also by Hermite basis, {} mismatches {}", bad.len(), head.join(" ")),
    ))
}

fn group_data() -> Outcome {
    let mut definite = 0;
    let mut bad = Vec::new();
    let mut d = -3i64;
    while definite < 100 {
        if rem(d as i128, 4) <= 1 {
            for q in narrow_class_number(d)?.reps {
                if definite == 100 {
                    break;
                }
                definite += 1;
                let info = so_q_info(&q)?;
                let want = match d {
                    -3 => 6,
                    -4 => 4,
                    _ => 2,
                };
                let cubes = if want == 6 { 2 } else { want };
                let ok = info.order == GroupOrder::Finite(want)
                    && info.cubes_order == Some(cubes)
                    && fixes(&info.generator, &q)
                    && info.generator_i64()?.pow(want as i64)? == cubic_shapes::forms_core::UnimodularMatrix::identity()
                    && (1..want).all(|k| info.generator_i64().and_then(|g| g.pow(k as i64)).map(|m| m != cubic_shapes::forms_core::UnimodularMatrix::identity()).unwrap_or(false));
                if !ok {
                    bad.push(q.to_string());
                }
            }
        }
        d -= 1;
    }
    let (mut pell_count, mut scan, mut power, mut gens) = (0, 0, 0, 0);
    for d in 5i64..1000 {
        if rem(d as i128, 4) > 1 || is_square(d as i128) {
            continue;
        }
        pell_count += 1;
        let p = pell_fundamental(d)?;
        match verify_pell_minimal(&p, 1_000_000) {
            Ok(MinimalityCertificate::Exhaustive) => scan += 1,
            Ok(MinimalityCertificate::NotAPower { .. }) => power += 1,
            Err(e) => bad.push(format!("pell {d}: {e}")),
        }
        for q in narrow_class_number(d)?.reps {
            gens += 1;
            if !fixes(&so_q_info(&q)?.generator, &q) {
                bad.push(format!("generator of {q}"));
            }
        }
    }
    Ok((
        bad.is_empty(),
        format!(
            "{definite} definite groups, {pell_count} Pell solutions minimal ({scan} by scan, {power} by power test), {gens} indefinite generators fix Q; {} problems",
            bad.len()
        ),
    ))
}

fn densities() -> Outcome {
    let suite = [
        qf(1, 1, 1),  // D = -3
        qf(1, 0, 1),  // D = -4, 4 || D with D/4 = 3 mod 4
        qf(1, 0, 3),  // D = -12, 4 || D with D/4 = 1 mod 4
        qf(1, 0, 2),  // D = -8
        qf(1, 0, 4),  // D = -16
        qf(1, 1, 2),  // D = -7
        qf(1, 0, 5),  // D = -20
        qf(1, 0, 7),  // D = -28
        qf(1, 0, 13), // D = -52
        qf(2, 2, 5),  // D = -36
        qf(1, 1, 19), // D = -75
        qf(1, 0, 27), // D = -108
        qf(1, 1, 61), // D = -243
        qf(1, 0, 25), // D = -100
        qf(1, 0, 49), // D = -196
        qf(1, 0, 169), // D = -676
        qf(1, 3, 1),  // D = 5
        qf(1, 4, 1),  // D = 12
        qf(1, 5, 1),  // D = 21
        qf(1, 1, -3), // D = 13
    ];
    let mut columns = BTreeSet::new();
    let mut mu3 = BTreeSet::new();
    let mut bad = Vec::new();
    let mut pairs = 0;
    for q in suite {
        for p in [2u64, 3, 5, 7, 13] {
            let entry = mu_entry(q.disc(), p);
            let emp = empirical_mu_p(&q, p)?;
            pairs += 1;
            if emp != entry.density {
                bad.push(format!("{q} p={p}: table {} empirical {emp}", entry.density));
            }
            let col = match entry.case {
                DensityCase::Ramified2 { m_mod4: Some(m) } => format!("p^2||D,m={m}"),
                c => format!("{c:?}"),
            };
            columns.insert(format!("{}:{col}", if p <= 3 { p } else { 0 }));
            if p == 3 {
                mu3.insert(entry.density.to_string());
            }
        }
    }
    let needed = ["16/27", "22/27", "2/3"].iter().all(|v| mu3.contains(*v))
        && columns.contains("2:p^2||D,m=3")
        && columns.contains("2:p^2||D,m=1");
    Ok((
        bad.is_empty() && needed,
        format!(
            "{pairs} (shape, p) pairs exact, {} table columns covered, mu3 values {:?}; {}",
            columns.len(),
            mu3,
            if bad.is_empty() { "no mismatches".to_string() } else { bad.join("; ") }
        ),
    ))
}

fn hexagonal_orders() -> Outcome {
    let rep = count_orbits(&qf(1, 1, 1), TEN_10, opts(Filter::Irreducible))?;
    let target = PI / (3.0 * 3f64.sqrt()) * 1e5;
    let dev = rep.oriented as f64 / target - 1.0;
    let halves = rep.unoriented * 2 == rep.oriented && rep.gamma == 1;
    Ok((
        dev.abs() <= 0.005 && halves,
        format!(
            "oriented {} vs {target:.1} ({:+.3}%, tolerance 0.5%), unoriented {} = oriented/2: {halves}; all rings {} ({:+.3}%), reducible {}",
            rep.oriented,
            100.0 * dev,
            rep.unoriented,
            rep.points_total,
            100.0 * (rep.points_total as f64 / target - 1.0),
            rep.points_total - rep.oriented
        ),
    ))
}

fn cross_consistency() -> Outcome {
    let (mut def, mut indef, mut worst) = (0, 0, 0f64);
    let mut d = -3i64;
    while def < 30 && d >= -500 {
        if rem(d as i128, 4) <= 1 {
            let q = *narrow_class_number(d)?.reps.last().expect("nonempty class group");
            let rel = (geometric_coeff(&q)? / analytic_coeff_tol(d, 1e-8)? - 1.0).abs();
            worst = worst.max(rel);
            def += 1;
        }
        d -= 1;
    }
    let mut d = 5i64;
    while indef < 10 && d <= 500 {
        if rem(d as i128, 4) <= 1 && !is_square(d as i128) {
            let q = normalize_shape(narrow_class_number(d)?.reps.last().expect("nonempty class group"))?.form;
            let rel = (geometric_coeff(&q)? / analytic_coeff_tol(d, 1e-8)? - 1.0).abs();
            worst = worst.max(rel);
            indef += 1;
        }
        d += 1;
    }
    Ok((worst <= 1e-6 && def == 30 && indef == 10, format!("{def} definite, {indef} indefinite, worst relative gap {worst:.2e}")))
}

fn ratio_line(rec: &ReportRecord, tol: f64) -> (bool, String) {
    let ratio = rec.ratio.unwrap_or(f64::NAN);
    let predicted = rec.predicted + rec.second_term.unwrap_or(0.0);
    (
        (ratio - 1.0).abs() <= tol,
        format!("({},{},{}) X={} {} count {} vs {predicted:.1}, ratio {ratio:.5}, tolerance {}%", rec.r, rec.s, rec.t, rec.x, rec.stage, rec.empirical, 100.0 * tol),
    )
}

fn indefinite() -> Outcome {
    let (_, rec) = compare_one("acceptance", &qf(1, 3, 1), TEN_10, opts(Filter::Irreducible), 100_000)?;
    Ok(ratio_line(&rec, 0.02))
}

fn cohn() -> Outcome {
    let (rep, rec) = compare_one("acceptance", &qf(1, 1, 1), TEN_10, opts(maximal()), 100_000)?;
    let (ok, line) = ratio_line(&rec, 0.02);
    let fields = rep.maximal_oriented.unwrap_or(0) / 2;
    Ok((ok, format!("{line}; fields {fields} vs Cohn {:.1}", rec.predicted / 2.0)))
}

fn pure_oracle() -> Outcome {
    let mut parts = Vec::new();
    let mut ok = true;
    for x in [10_000u64, 1_000_000, 100_000_000] {
        let a = pure_field_counts(x)?.total;
        let b = dedekind_oracle(x)?.total();
        ok &= a == b;
        parts.push(format!("X={x}: {a} = {b}"));
    }
    Ok((ok, parts.join(", ")))
}

fn square_two_term() -> Outcome {
    let rep = count_orbits(&qf(0, 1, 0), TEN_10, opts(Filter::None))?;
    let t = square_order_prediction(1, TEN_10 as f64)?;
    let ratio = rep.points_total as f64 / t.total();
    Ok((
        (ratio - 1.0).abs() <= 0.005,
        format!("points {} vs {:.1} (main {:.1}, second {:.1}), ratio {ratio:.6}, tolerance 0.5%", rep.points_total, t.total(), t.main, t.second),
    ))
}

fn engines_and_threads() -> Outcome {
    let mut compared = 0;
    let mut bad = Vec::new();
    for q in shape_suite() {
        for x in [1_000u64, 100_000] {
            for filter in [Filter::None, Filter::Irreducible, maximal()] {
                let fast = count_orbits(&q, x, CountOptions { filter, engine: Engine::Fast, ..CountOptions::default() })?;
                let naive = count_orbits(&q, x, CountOptions { filter, engine: Engine::Naive, ..CountOptions::default() })?;
                compared += 1;
                let strip = |r: &cubic_shapes::counting::CountReport| (r.points_total, r.points_irreducible, r.points_maximal, r.oriented, r.unoriented, r.maximal_oriented);
                if strip(&fast) != strip(&naive) {
                    bad.push(format!("{q} X={x} {filter:?}"));
                }
            }
        }
    }
    let mut identical = 0;
    for q in shape_suite() {
        let mut bodies = BTreeSet::new();
        for threads in [1usize, 4, 8] {
            let o = CountOptions { filter: maximal(), threads: Some(threads), ..CountOptions::default() };
            let (rep, rec) = compare_one("determinism", &q, 1_000_000, o, 100_000)?;
            let json = serde_json::to_string(&rep.without_timing()).map_err(|e| Error::Invalid(e.to_string()))?;
            let mut w = csv::Writer::from_writer(Vec::new());
            w.serialize(rec.without_timing()).map_err(|e| Error::Invalid(e.to_string()))?;
            let csv = w.into_inner().map_err(|e| Error::Invalid(e.to_string()))?;
            bodies.insert((json, csv));
        }
        if bodies.len() == 1 {
            identical += 1;
        } else {
            bad.push(format!("{q} differs across threads"));
        }
    }
    Ok((bad.is_empty(), format!("{compared} fast/naive comparisons, {identical} shapes byte-identical at 1/4/8 threads; {}", if bad.is_empty() { "no differences".into() } else { bad.join("; ") })))
}

type Criterion = (u32, &'static str, fn() -> Outcome);

fn main() {
    let criteria: Vec<Criterion> = vec![
        (1, "Hessian identities", identities),
        (2, "bijection audit", bijection),
        (3, "covolume", covolume),
        (4, "group data", group_data),
        (5, "density table", densities),
        (6, "C3 orders at 1e10", hexagonal_orders),
        (7, "coefficient cross-check", cross_consistency),
        (8, "indefinite shape at 1e10", indefinite),
        (9, "cyclic fields at 1e10", cohn),
        (10, "pure field oracle", pure_oracle),
        (11, "square shape two-term", square_two_term),
        (12, "engines and threads", engines_and_threads),
    ];
    let mut unexpected = Vec::new();
    for (id, name, f) in criteria {
        let start = Instant::now();
        let (ok, detail) = match f() {
            Ok(v) => v,
            Err(e) => (false, format!("error: {e}")),
        };
        let secs = start.elapsed().as_secs_f64();
        let known = !ok && KNOWN_FAILURES.contains(&id);
        println!(
            "criterion {id:>2} {}: {name}: {detail} [{secs:.2} s]{}",
            if ok { "PASS" } else { "FAIL" },
            if known { " (known failure, see notes)" } else { "" }
        );
        if !ok && !known {
            unexpected.push(id);
        }
    }
    if !unexpected.is_empty() {
        eprintln!("unexpected failures: {unexpected:?}");
        std::process::exit(1);
    }
}
