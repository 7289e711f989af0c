// SPDX-License-Identifier: Apache-2.0
//! Command-line front end: argument parsing, experiments and report output.
//!
//! Every subcommand writes either CSV or JSON. Counts are decimal strings in
//! JSON, predictions are floats, and apart from `seconds` the output does
//! not depend on the thread count.

pub mod args;
mod oracle;

pub use args::Cli;
pub use oracle::{check_hessian_identities, random_cubic, random_matrix, IdentityTally};

use crate::asymptotics::{
    self, analytic_coeff, cohn_coeff, geometric_coeff, maximal_coeff, prediction_coefficients,
    pure_field_prediction, resolvent_field_coeff, square_order_prediction, universal_constants,
    Bounded, PureTarget,
};
use crate::counting::{self, count_orbits, dec, CountOptions, CountReport, Engine, Filter};
use crate::error::{Error, Result};
use crate::forms_core::{
    is_ambiguous, narrow_class_number, normalize_shape, pell_fundamental, QuadForm,
};
use crate::maximality::{empirical_mu_p, mu_entry, DensityCase, SieveConfig};
use args::{Command, EngineArg, FilterArg, Format, Output, Target};
use clap::Parser;
use serde::{Deserialize, Serialize};
use std::ffi::OsString;
use std::fs::File;
use std::io::{BufWriter, Write};
use std::time::Instant;

/// One row of a count-versus-prediction report.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ReportRecord {
    pub experiment: String,
    #[serde(rename = "D")]
    pub d: i64,
    pub r: i64,
    pub s: i64,
    pub t: i64,
    #[serde(rename = "X", with = "dec")]
    pub x: u64,
    /// Filter stage of the empirical count: `total`, `irreducible` or `maximal`.
    pub stage: String,
    #[serde(with = "dec")]
    pub empirical: u64,
    /// Main term at `X`.
    pub predicted: f64,
    /// Second term at `X`, where one is known.
    pub second_term: Option<f64>,
    /// `empirical / (predicted + second_term)`; absent when that sum is 0.
    pub ratio: Option<f64>,
    /// Relative half-width of the interval around the prediction.
    pub tol: f64,
    pub seconds: f64,
}

impl ReportRecord {
    /// Same record with the timing zeroed.
    pub fn without_timing(&self) -> ReportRecord {
        ReportRecord { seconds: 0.0, ..self.clone() }
    }
}

/// Prediction of one quantity, either a coefficient or its value at `X`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PredictionRecord {
    pub target: String,
    #[serde(rename = "D")]
    pub d: Option<i64>,
    pub shape: Option<String>,
    #[serde(rename = "X", with = "dec::opt")]
    pub x: Option<u64>,
    pub value: f64,
    pub lo: f64,
    pub hi: f64,
    pub second_term: Option<f64>,
}

/// Table density against the exhaustive count at one prime.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct DensityRow {
    #[serde(rename = "D")]
    pub d: i64,
    pub p: u64,
    pub case: String,
    pub table: String,
    pub empirical: String,
    pub equal: bool,
}

/// One class representative.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ClassRow {
    #[serde(rename = "D")]
    pub d: i64,
    pub h: usize,
    pub r: i64,
    pub s: i64,
    pub t: i64,
    pub ambiguous: bool,
}

/// Fundamental Pell solution.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PellRow {
    #[serde(rename = "D")]
    pub d: i64,
    pub u0: String,
    pub w0: String,
    pub log_epsilon: f64,
}

/// Result of one oracle comparison.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct OracleRow {
    pub check: String,
    #[serde(rename = "X", with = "dec::opt")]
    pub x: Option<u64>,
    #[serde(with = "dec")]
    pub left: u64,
    #[serde(with = "dec")]
    pub right: u64,
    pub equal: bool,
}

/// Parse a positive integer, allowing `1e10` and `3e5` style input.
pub fn parse_x(s: &str) -> Result<u64> {
    let s = s.trim();
    let bad = || Error::invalid(format!("X must be a positive integer, got {s:?}"));
    let v = if let Some((m, e)) = s.split_once(['e', 'E']) {
        let m: u64 = m.parse().map_err(|_| bad())?;
        let e: u32 = e.parse().map_err(|_| bad())?;
        10u64.checked_pow(e).and_then(|p| p.checked_mul(m)).ok_or_else(bad)?
    } else {
        s.parse().map_err(|_| bad())?
    };
    if v == 0 {
        return Err(bad());
    }
    Ok(v)
}

fn parse_list<T>(s: &str, item: impl Fn(&str) -> Result<T>) -> Result<Vec<T>> {
    let out = s.split(',').map(|p| item(p.trim())).collect::<Result<Vec<_>>>()?;
    if out.is_empty() {
        return Err(Error::invalid("empty list"));
    }
    Ok(out)
}

/// Parse `r,s,t` into a form (not yet normalized).
pub fn parse_shape(s: &str) -> Result<QuadForm> {
    let v = parse_list(s, |p| {
        p.parse::<i64>().map_err(|_| Error::invalid(format!("bad shape coefficient {p:?}")))
    })?;
    match v.as_slice() {
        [r, s, t] => QuadForm::new(*r, *s, *t),
        _ => Err(Error::invalid("shape needs three coefficients r,s,t")),
    }
}

fn filter_of(c: &args::Counting) -> Filter {
    match c.filter {
        FilterArg::None => Filter::None,
        FilterArg::Irreducible => Filter::Irreducible,
        FilterArg::Maximal => Filter::Maximal {
            sieve: match c.sieve_bound {
                Some(prime_bound) => SieveConfig::Truncated { prime_bound },
                None => SieveConfig::Exact,
            },
        },
    }
}

fn options_of(c: &args::Counting, audit: bool) -> CountOptions {
    CountOptions {
        filter: filter_of(c),
        engine: match c.engine {
            EngineArg::Fast => Engine::Fast,
            EngineArg::Naive => Engine::Naive,
        },
        audit,
        threads: c.threads,
    }
}

fn stage_of(filter: Filter) -> &'static str {
    match filter {
        Filter::None => "total",
        Filter::Irreducible => "irreducible",
        Filter::Maximal { .. } => "maximal",
    }
}

/// Main term, optional second term and relative tolerance for a counted stage.
pub fn prediction_for(q: &QuadForm, filter: Filter, x: u64, prime_bound: u64) -> Result<(f64, Option<f64>, f64)> {
    let d = q.disc();
    let xf = x as f64;
    let rel = |b: Bounded| if b.value == 0.0 { 0.0 } else { b.tail() / b.value };
    if q.has_square_disc() {
        return match filter {
            Filter::Maximal { .. } => {
                let target = match d {
                    1 => PureTarget::Q1,
                    9 => PureTarget::Q9,
                    _ => return Ok((0.0, Some(0.0), 0.0)),
                };
                let u = universal_constants(prime_bound)?;
                // The oriented count sees each pure field twice.
                let t = pure_field_prediction(target, xf, &u);
                let tol = u.c.tail() / u.c.value + 12.0 * u.kappa.tail() / xf.ln();
                Ok((2.0 * t.main, Some(2.0 * t.second), tol))
            }
            _ => {
                let t = square_order_prediction(d, xf)?;
                Ok((t.main, Some(t.second), 0.0))
            }
        };
    }
    match filter {
        Filter::Maximal { .. } => {
            let b = maximal_coeff(d, prime_bound)?;
            Ok((b.value * xf.sqrt(), None, rel(b)))
        }
        _ => Ok((geometric_coeff(q)? * xf.sqrt(), None, 0.0)),
    }
}

fn record(experiment: &str, q: &QuadForm, rep: &CountReport, prime_bound: u64) -> Result<ReportRecord> {
    let (predicted, second_term, tol) = prediction_for(q, rep.filter, rep.x, prime_bound)?;
    let empirical = rep.filtered();
    let total = predicted + second_term.unwrap_or(0.0);
    Ok(ReportRecord {
        experiment: experiment.to_string(),
        d: q.disc(),
        r: q.r(),
        s: q.s(),
        t: q.t(),
        x: rep.x,
        stage: stage_of(rep.filter).to_string(),
        empirical,
        predicted,
        second_term,
        ratio: (total != 0.0).then(|| empirical as f64 / total),
        tol,
        seconds: rep.seconds,
    })
}

/// Count one shape at one `X` and build its report record.
pub fn compare_one(experiment: &str, q: &QuadForm, x: u64, opts: CountOptions, prime_bound: u64) -> Result<(CountReport, ReportRecord)> {
    let q = normalize_shape(q)?.form;
    let rep = count_orbits(&q, x, opts)?;
    let rec = record(experiment, &q, &rep, prime_bound)?;
    Ok((rep, rec))
}

struct Sink {
    out: Box<dyn Write>,
}

impl Sink {
    fn open(o: &Output, stdout: Box<dyn Write>) -> Result<Sink> {
        let out: Box<dyn Write> = match &o.output {
            Some(path) => Box::new(BufWriter::new(
                File::create(path).map_err(|e| Error::invalid(format!("{}: {e}", path.display())))?,
            )),
            None => stdout,
        };
        Ok(Sink { out })
    }

    fn emit<T: Serialize>(mut self, format: Format, rows: &[T]) -> Result<()> {
        let io = |e: std::io::Error| Error::invalid(format!("write failed: {e}"));
        match format {
            Format::Json => {
                let text = serde_json::to_string_pretty(rows).map_err(|e| Error::invalid(e.to_string()))?;
                writeln!(self.out, "{text}").map_err(io)?;
            }
            Format::Csv => {
                let mut w = csv::Writer::from_writer(&mut self.out);
                for row in rows {
                    w.serialize(row).map_err(|e| Error::invalid(e.to_string()))?;
                }
                w.flush().map_err(io)?;
            }
        }
        self.out.flush().map_err(io)
    }
}

fn count_cmd(a: &args::CountArgs, stdout: Box<dyn Write>) -> Result<()> {
    let q = parse_shape(&a.shape)?;
    let x = parse_x(&a.x)?;
    let opts = options_of(&a.counting, a.audit.is_some());
    let (rep, rec) = compare_one("count", &q, x, opts, a.counting.prime_bound)?;
    if let Some(path) = &a.audit {
        let io = |e: std::io::Error| Error::invalid(format!("{}: {e}", path.display()));
        let mut w = BufWriter::new(File::create(path).map_err(io)?);
        writeln!(w, "x\ty\tn\tdisc\tirreducible\tmaximal").map_err(io)?;
        for r in &rep.audit {
            writeln!(w, "{}", r.to_tsv()).map_err(io)?;
        }
        w.flush().map_err(io)?;
    }
    let sink = Sink::open(&a.output, stdout)?;
    match a.output.format {
        Format::Json => sink.emit(Format::Json, &[rep]),
        Format::Csv => sink.emit(Format::Csv, &[rec]),
    }
}

fn compare_cmd(experiment: &str, shape: &str, xs: &[u64], c: &args::Counting, o: &Output, stdout: Box<dyn Write>) -> Result<()> {
    let q = parse_shape(shape)?;
    let opts = options_of(c, false);
    let rows = xs
        .iter()
        .map(|&x| compare_one(experiment, &q, x, opts, c.prime_bound).map(|r| r.1))
        .collect::<Result<Vec<_>>>()?;
    Sink::open(o, stdout)?.emit(o.format, &rows)
}

/// `points` log-spaced integers from `lo` to `hi`, deduplicated.
pub fn log_spaced(lo: u64, hi: u64, points: u32) -> Result<Vec<u64>> {
    if lo > hi || points == 0 {
        return Err(Error::invalid("need x-min <= x-max and at least one point"));
    }
    if points == 1 {
        return Ok(vec![hi]);
    }
    let (a, b) = ((lo as f64).ln(), (hi as f64).ln());
    let mut out: Vec<u64> = (0..points)
        .map(|i| {
            let f = (a + (b - a) * i as f64 / (points - 1) as f64).exp().round() as u64;
            f.clamp(lo, hi)
        })
        .collect();
    out.dedup();
    Ok(out)
}

fn require<T>(v: Option<T>, what: &str) -> Result<T> {
    v.ok_or_else(|| Error::invalid(format!("this target needs {what}")))
}

fn predict_cmd(a: &args::PredictArgs, stdout: Box<dyn Write>) -> Result<()> {
    let x = a.x.as_deref().map(parse_x).transpose()?;
    let pb = a.prime_bound;
    if pb < 2 {
        return Err(Error::invalid("prime bound must be at least 2"));
    }
    let sink = Sink::open(&a.output, stdout)?;
    let scale = x.map_or(1.0, |x| (x as f64).sqrt());
    let rec = |target: &str, d: Option<i64>, shape: Option<String>, b: Bounded| PredictionRecord {
        target: target.to_string(),
        d,
        shape,
        x,
        value: b.value * scale,
        lo: b.lo * scale,
        hi: b.hi * scale,
        second_term: None,
    };
    let point = |v: f64| Bounded { value: v, lo: v, hi: v };
    let two_term = |target: &str, d: Option<i64>, t: asymptotics::TwoTerm| PredictionRecord {
        target: target.to_string(),
        d,
        shape: None,
        x,
        value: t.main,
        lo: t.main,
        hi: t.main,
        second_term: Some(t.second),
    };
    let rows = match a.target {
        Target::Coefficients => {
            if a.output.format != Format::Json {
                return Err(Error::invalid("--target coefficients needs --format json"));
            }
            let d = require(a.disc, "--disc")?;
            return sink.emit(Format::Json, &[prediction_coefficients(d, pb)?]);
        }
        Target::Analytic => {
            let d = require(a.disc, "--disc")?;
            vec![rec("analytic", Some(d), None, point(analytic_coeff(d)?))]
        }
        Target::Geometric => {
            let q = normalize_shape(&parse_shape(require(a.shape.as_deref(), "--shape")?)?)?.form;
            let (r, s, t) = q.coeffs();
            vec![rec("geometric", Some(q.disc()), Some(format!("{r},{s},{t}")), point(geometric_coeff(&q)?))]
        }
        Target::Maximal => {
            let d = require(a.disc, "--disc")?;
            vec![rec("maximal", Some(d), None, maximal_coeff(d, pb)?)]
        }
        Target::Resolvent => {
            let d = require(a.disc, "--disc")?;
            vec![rec("resolvent", Some(d), None, resolvent_field_coeff(d, pb)?)]
        }
        Target::Cohn => vec![rec("cohn", Some(-3), None, cohn_coeff(pb))],
        Target::SquareOrders => {
            let d = require(a.disc, "--disc")?;
            let xv = require(x, "--x")? as f64;
            vec![two_term("square-orders", Some(d), square_order_prediction(d, xv)?)]
        }
        Target::PureQ1 | Target::PureQ9 | Target::PureAll => {
            let xv = require(x, "--x")? as f64;
            let u = universal_constants(pb.max(100))?;
            let (name, t, d) = match a.target {
                Target::PureQ1 => ("pure-q1", PureTarget::Q1, Some(1)),
                Target::PureQ9 => ("pure-q9", PureTarget::Q9, Some(9)),
                _ => ("pure-all", PureTarget::All, None),
            };
            vec![two_term(name, d, pure_field_prediction(t, xv, &u))]
        }
        Target::Constants => {
            let u = universal_constants(pb.max(100))?;
            let plain = |target: &str, b: Bounded| PredictionRecord {
                target: target.to_string(),
                d: None,
                shape: None,
                x: None,
                value: b.value,
                lo: b.lo,
                hi: b.hi,
                second_term: None,
            };
            vec![plain("C", u.c), plain("kappa", u.kappa), plain("euler_gamma", point(u.euler_gamma))]
        }
    };
    sink.emit(a.output.format, &rows)
}

fn case_name(c: DensityCase) -> String {
    match c {
        DensityCase::Inert => "inert".into(),
        DensityCase::Split => "split".into(),
        DensityCase::Ramified1 => "p||D".into(),
        DensityCase::Ramified2 { m_mod4: Some(m) } => format!("p^2||D,D/4={m} mod 4"),
        DensityCase::Ramified2 { m_mod4: None } => "p^2||D".into(),
        DensityCase::Ramified3 => "p^3||D".into(),
        DensityCase::Ramified4 => "p^4|D".into(),
    }
}

/// Table density and exhaustive density of `q` at each prime.
pub fn density_rows(q: &QuadForm, primes: &[u64]) -> Result<Vec<DensityRow>> {
    primes
        .iter()
        .map(|&p| {
            if !crate::arith::is_prime(p) {
                return Err(Error::invalid(format!("{p} is not prime")));
            }
            let entry = mu_entry(q.disc(), p);
            let emp = empirical_mu_p(q, p)?;
            Ok(DensityRow {
                d: q.disc(),
                p,
                case: case_name(entry.case),
                table: entry.density.to_string(),
                empirical: emp.to_string(),
                equal: emp == entry.density,
            })
        })
        .collect()
}

/// Pure-field counts against the independent oracle at each `X`.
pub fn oracle_rows(xs: &[u64]) -> Result<Vec<OracleRow>> {
    xs.iter()
        .map(|&x| {
            let left = counting::pure_field_counts(x)?.total;
            let right = counting::dedekind_oracle(x)?.total();
            Ok(OracleRow { check: "pure-vs-dedekind".into(), x: Some(x), left, right, equal: left == right })
        })
        .collect()
}

fn run_command(cmd: &Command, stdout: Box<dyn Write>) -> Result<()> {
    match cmd {
        Command::Count(a) => count_cmd(a, stdout),
        Command::Predict(a) => predict_cmd(a, stdout),
        Command::Compare(a) => {
            let xs = parse_list(&a.x, parse_x)?;
            compare_cmd("compare", &a.shape, &xs, &a.counting, &a.output, stdout)
        }
        Command::Sweep(a) => {
            let xs = log_spaced(parse_x(&a.x_min)?, parse_x(&a.x_max)?, a.points)?;
            compare_cmd("sweep", &a.shape, &xs, &a.counting, &a.output, stdout)
        }
        Command::Densities(a) => {
            let q = parse_shape(&a.shape)?;
            let primes = parse_list(&a.primes, |p| {
                p.parse::<u64>().map_err(|_| Error::invalid(format!("bad prime {p:?}")))
            })?;
            Sink::open(&a.output, stdout)?.emit(a.output.format, &density_rows(&q, &primes)?)
        }
        Command::Classgroup(a) => {
            let g = narrow_class_number(a.disc)?;
            let rows = g
                .reps
                .iter()
                .map(|q| {
                    Ok(ClassRow { d: g.d, h: g.h, r: q.r(), s: q.s(), t: q.t(), ambiguous: is_ambiguous(q)? })
                })
                .collect::<Result<Vec<_>>>()?;
            Sink::open(&a.output, stdout)?.emit(a.output.format, &rows)
        }
        Command::Pell(a) => {
            let p = pell_fundamental(a.disc)?;
            let row = PellRow { d: p.d, u0: p.u0.to_string(), w0: p.w0.to_string(), log_epsilon: p.log_epsilon() };
            Sink::open(&a.output, stdout)?.emit(a.output.format, &[row])
        }
        Command::Oracle(a) => {
            let xs = parse_list(&a.x, parse_x)?;
            let mut rows = oracle_rows(&xs)?;
            if a.identities > 0 {
                let t = check_hessian_identities(a.identities, a.seed)?;
                for (check, ok) in [("hessian-disc", t.disc_ok), ("hessian-covariance", t.covariance_ok)] {
                    rows.push(OracleRow { check: check.into(), x: None, left: ok, right: t.pairs, equal: ok == t.pairs });
                }
            }
            Sink::open(&a.output, stdout)?.emit(a.output.format, &rows)
        }
    }
}

/// Run the tool on `args` (program name first) and return the exit code.
///
/// Parse errors and invalid input give 1, overflow and budget failures give 2.
pub fn run<I, T>(args: I, mut stdout: Box<dyn Write>, stderr: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) if e.use_stderr() => {
            let _ = write!(stderr, "{}", e.render());
            return 1;
        }
        Err(e) => {
            // Help and version requests.
            let _ = write!(stdout, "{}", e.render());
            return 0;
        }
    };
    let start = Instant::now();
    match run_command(&cli.command, stdout) {
        Ok(()) => 0,
        Err(e) => {
            let _ = writeln!(stderr, "error: {e} (after {:.3} s)", start.elapsed().as_secs_f64());
            e.exit_code()
        }
    }
}
