use std::collections::BTreeSet;
use std::fmt::Write as _;
use std::process::ExitCode;

use anyhow::{bail, Context, Result};
use clap::{Parser, Subcommand, ValueEnum};
use serde::Serialize;

use equidist::addpoly::{
    decompose, ktilde, reduce, shadow, tau, candidate_report, coprime_report, SparsePoly,
    CandidateReport, CoprimeReport,
};
use equidist::charsum::{
    best_rational_approx, equidist_histogram, expsum_naive, weyl_scan, TallyReport,
};
use equidist::construct::{build_counterexample, verify_counterexample, Gamma};
use equidist::laurent::{psi_l, split, Coeff, Poly};
use equidist::text::{
    fmt_additive, fmt_coeff, fmt_poly, fmt_series, fmt_sparse, parse_additive, parse_coeff,
    parse_field, parse_poly, parse_ratfn, parse_series, parse_sparse,
};
use equidist::{random, Error, FieldCtx};

/// Exponential sums and equidistribution of polynomial sequences over
/// F_q[t].
#[derive(Parser, Debug)]
#[command(name = "equidist", version)]
struct Cli {
    /// Field: `p^m/modulus`, `p^m` or `q`.
    #[arg(long, global = true, default_value = "2")]
    field: String,

    #[arg(long, global = true, value_enum, default_value_t = Output::Text)]
    output: Output,

    /// Precision floor: coefficients are expanded down to `t^lo`.
    #[arg(long, global = true, allow_hyphen_values = true)]
    lo: Option<i64>,

    /// Worker threads for complete sums. Results do not depend on it.
    #[arg(long, global = true, default_value_t = 1)]
    workers: usize,

    /// Seed for randomized checks.
    #[arg(long, global = true, default_value_t = 0)]
    seed: u64,

    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum Output {
    Text,
    Json,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Split f into its constant and additive parts A_r(x^r).
    Decompose { f: String },
    /// tau(A) for an additive polynomial A.
    Tau { a: String },
    /// Replace every additive part by its linear reduction.
    Reduce { f: String },
    /// Exponents j with p not dividing C(r, j) for some r in K.
    Shadow { k: String },
    /// The iterated star-set closure of K.
    Ktilde { k: String },
    /// Which equidistribution criteria apply to support K with the given
    /// irrational exponents.
    Hypothesis {
        k: String,
        #[arg(long, default_value = "")]
        irr: String,
    },
    /// sum over ord u < N of e(h f(u)).
    Expsum {
        f: String,
        #[arg(long, default_value = "1")]
        h: String,
        #[arg(long = "N")]
        n: u32,
    },
    /// The sums of `expsum` for every nonzero h with ord h < H.
    Weyl {
        f: String,
        #[arg(long = "N")]
        n: u32,
        #[arg(long = "H")]
        big_h: u32,
    },
    /// Counts of the first d fractional coefficients of f(u), ord u < N.
    Hist {
        f: String,
        #[arg(long = "N")]
        n: u32,
        #[arg(long)]
        d: u32,
    },
    /// Best monic g with ord g <= G for ord(g alpha - a).
    Approx {
        alpha: String,
        #[arg(long = "G")]
        big_g: u32,
    },
    /// Build and check f(x) = A(x^(q+1)) - x^2/t with tau(A) = gamma.
    Counterexample {
        #[arg(long, default_value = "1/t", conflicts_with = "irr_gamma")]
        gamma: String,
        /// Use the default irrational target instead of --gamma.
        #[arg(long)]
        irr_gamma: bool,
        #[arg(long = "N")]
        n: u32,
        #[arg(long = "H")]
        big_h: u32,
    },
    /// psi_l(alpha).
    Psi {
        #[arg(allow_hyphen_values = true)]
        l: i64,
        alpha: String,
    },
    /// (psi_{p-1}(alpha), ..., psi_0(alpha)).
    Split { alpha: String },
    /// Seeded random checks of the reduction identity e(f(u)) = e(g(u)).
    Selfcheck {
        #[arg(long, default_value_t = 20)]
        count: usize,
    },
}

const DEFAULT_LO: i64 = -64;
/// The canonical streams start at `(p + 1)!`, so certificates for small
/// `h` need deep windows.
const COUNTEREXAMPLE_LO: i64 = -1000;

struct Ctx {
    field: FieldCtx,
    lo: i64,
    json: bool,
    workers: usize,
    seed: u64,
}

/// Aligned `key  value` lines.
fn aligned(rows: &[(&str, String)]) -> String {
    let width = rows.iter().map(|(k, _)| k.len()).max().unwrap_or(0);
    let mut out = String::new();
    for (k, v) in rows {
        writeln!(out, "{k:<width$}  {v}").unwrap();
    }
    out
}

fn parse_set(text: &str) -> Result<BTreeSet<u64>> {
    text.split(',')
        .map(str::trim)
        .filter(|s| !s.is_empty())
        .map(|s| {
            let k: u64 = s.parse().with_context(|| format!("not a positive integer: {s:?}"))?;
            if k == 0 {
                bail!("exponents must be positive");
            }
            Ok(k)
        })
        .collect()
}

fn fmt_set(s: &BTreeSet<u64>) -> String {
    let items: Vec<String> = s.iter().map(u64::to_string).collect();
    format!("{{{}}}", items.join(", "))
}

fn emit<T: Serialize>(c: &Ctx, value: &T, text: impl FnOnce() -> String) -> Result<String> {
    if c.json {
        Ok(serde_json::to_string_pretty(value)? + "\n")
    } else {
        Ok(text())
    }
}

#[derive(Serialize)]
struct PartReport {
    r: u64,
    additive: String,
}

#[derive(Serialize)]
struct DecomposeReport {
    constant: String,
    parts: Vec<PartReport>,
}

#[derive(Serialize)]
struct ValueReport {
    value: String,
}

#[derive(Serialize)]
struct SetReport {
    set: Vec<u64>,
}

#[derive(Serialize)]
struct HypothesisReport {
    candidates: CandidateReport,
    coprime: CoprimeReport,
}

#[derive(Serialize)]
struct WeylReportRow {
    h: String,
    #[serde(flatten)]
    sum: TallyReport,
}

#[derive(Serialize)]
struct ApproxReport {
    g: String,
    a: String,
    gap: String,
}

#[derive(Serialize)]
struct SplitReport {
    parts: Vec<String>,
}

#[derive(Serialize)]
struct SelfcheckReport {
    seed: u64,
    checked: usize,
    failures: usize,
}

fn tally_text(t: &TallyReport) -> String {
    let counts: Vec<String> = t.tally.iter().map(u64::to_string).collect();
    aligned(&[
        ("tally", format!("[{}]", counts.join(", "))),
        ("magnitude", format!("{}", t.magnitude)),
        ("normalized", format!("{}", t.normalized)),
    ])
}

/// The support K with an irrational stream at each `irr` exponent and
/// the constant 1 elsewhere.
fn support_poly(ctx: &FieldCtx, k: &BTreeSet<u64>, irr: &BTreeSet<u64>) -> Result<SparsePoly> {
    if let Some(bad) = irr.difference(k).next() {
        bail!("--irr exponent {bad} is not in K");
    }
    let p = ctx.p() as u64;
    let terms = k.iter().map(|&r| {
        let c = if irr.contains(&r) {
            match Gamma::default_irrational(p) {
                Gamma::Irrational(s) => Coeff::from(s),
                Gamma::Rational(r) => Coeff::Rational(r),
            }
        } else {
            Coeff::one()
        };
        (r, c)
    });
    Ok(SparsePoly::from_terms(ctx, terms))
}

fn selfcheck(c: &Ctx, count: usize) -> Result<SelfcheckReport> {
    let ctx = &c.field;
    let mut rng = random::rng(c.seed);
    let mut failures = 0;
    for _ in 0..count {
        let f = random::sparse(ctx, &mut rng, 12, 3, |r| random::mixed_coeff(ctx, r));
        let g = reduce(ctx, &f, -40);
        let lhs = expsum_naive(ctx, &f, &Poly::one(), 3, c.workers)?;
        let rhs = expsum_naive(ctx, &g, &Poly::one(), 3, c.workers)?;
        if lhs != rhs {
            failures += 1;
        }
    }
    Ok(SelfcheckReport {
        seed: c.seed,
        checked: count,
        failures,
    })
}

fn run(cli: Cli) -> Result<String> {
    let field = parse_field(&cli.field)?;
    let c = Ctx {
        field,
        lo: cli.lo.unwrap_or(DEFAULT_LO),
        json: cli.output == Output::Json,
        workers: cli.workers,
        seed: cli.seed,
    };
    if c.lo > -1 && !matches!(cli.command, Command::Shadow { .. } | Command::Ktilde { .. } | Command::Hypothesis { .. }) {
        bail!("--lo must be at most -1");
    }
    let ctx = &c.field;
    let p = ctx.p() as u64;
    match cli.command {
        Command::Decompose { f } => {
            let d = decompose(ctx, &parse_sparse(ctx, &f, c.lo)?);
            let report = DecomposeReport {
                constant: fmt_coeff(ctx, &d.constant),
                parts: d
                    .parts
                    .iter()
                    .map(|(&r, a)| PartReport { r, additive: fmt_additive(ctx, a) })
                    .collect(),
            };
            emit(&c, &report, || {
                let mut rows = vec![("constant".to_string(), report.constant.clone())];
                for part in &report.parts {
                    rows.push((format!("A_{}", part.r), part.additive.clone()));
                }
                let rows: Vec<(&str, String)> = rows.iter().map(|(k, v)| (k.as_str(), v.clone())).collect();
                aligned(&rows)
            })
        }
        Command::Tau { a } => {
            let a = parse_additive(ctx, &a, c.lo)?;
            let value = fmt_series(ctx, &tau(ctx, &a, c.lo));
            emit(&c, &ValueReport { value: value.clone() }, || value + "\n")
        }
        Command::Reduce { f } => {
            let g = reduce(ctx, &parse_sparse(ctx, &f, c.lo)?, c.lo);
            let value = fmt_sparse(ctx, &g);
            emit(&c, &ValueReport { value: value.clone() }, || value + "\n")
        }
        Command::Shadow { k } => {
            let s = shadow(&parse_set(&k)?, p);
            emit(&c, &SetReport { set: s.iter().copied().collect() }, || fmt_set(&s) + "\n")
        }
        Command::Ktilde { k } => {
            let s = ktilde(&parse_set(&k)?, p);
            emit(&c, &SetReport { set: s.iter().copied().collect() }, || fmt_set(&s) + "\n")
        }
        Command::Hypothesis { k, irr } => {
            let f = support_poly(ctx, &parse_set(&k)?, &parse_set(&irr)?)?;
            let report = HypothesisReport {
                candidates: candidate_report(&f, p),
                coprime: coprime_report(&f, p),
            };
            emit(&c, &report, || {
                let cand = &report.candidates;
                let cands: BTreeSet<u64> = cand.candidates.iter().map(|x| x.k).collect();
                let irr: BTreeSet<u64> = cand.irrational_candidates.iter().copied().collect();
                let coprime = &report.coprime;
                aligned(&[
                    ("candidates", fmt_set(&cands)),
                    ("irrational candidates", fmt_set(&irr)),
                    ("equidistributed (candidates)", cand.equidistributed.to_string()),
                    ("coprime support", coprime.applicable.to_string()),
                    ("equidistributed (coprime)", coprime.equidistributed.to_string()),
                ])
            })
        }
        Command::Expsum { f, h, n } => {
            let f = parse_sparse(ctx, &f, c.lo)?;
            let h = parse_poly(ctx, &h)?;
            if h.is_zero() {
                bail!("h must be nonzero");
            }
            let report = expsum_naive(ctx, &f, &h, n, c.workers)?.report();
            emit(&c, &report, || tally_text(&report))
        }
        Command::Weyl { f, n, big_h } => {
            let f = parse_sparse(ctx, &f, c.lo)?;
            let rows: Vec<WeylReportRow> = weyl_scan(ctx, &f, n, big_h, c.workers)?
                .into_iter()
                .map(|row| WeylReportRow { h: fmt_poly(ctx, &row.h), sum: row.tally.report() })
                .collect();
            emit(&c, &rows, || {
                let width = rows.iter().map(|r| r.h.len()).max().unwrap_or(1).max(1);
                let mut out = format!("{:<width$}  {:>12}  {}\n", "h", "normalized", "tally");
                for r in &rows {
                    let counts: Vec<String> = r.sum.tally.iter().map(u64::to_string).collect();
                    writeln!(out, "{:<width$}  {:>12.6}  [{}]", r.h, r.sum.normalized, counts.join(", ")).unwrap();
                }
                out
            })
        }
        Command::Hist { f, n, d } => {
            let f = parse_sparse(ctx, &f, c.lo)?;
            let report = equidist_histogram(ctx, &f, n, d, c.workers)?.report(ctx);
            emit(&c, &report, || {
                let width = report.bins.0.iter().map(|(k, _)| k.len()).max().unwrap_or(0);
                let mut out = String::new();
                for (k, v) in &report.bins.0 {
                    writeln!(out, "{k:<width$}  {v}").unwrap();
                }
                writeln!(out, "max_deviation  {}", report.max_deviation).unwrap();
                out
            })
        }
        Command::Approx { alpha, big_g } => {
            let alpha = parse_coeff(ctx, &alpha, c.lo)?;
            let best = best_rational_approx(ctx, &alpha, big_g, c.lo)?;
            let report = ApproxReport {
                g: fmt_poly(ctx, &best.g),
                a: fmt_poly(ctx, &best.a),
                gap: best.gap.to_string(),
            };
            emit(&c, &report, || {
                aligned(&[("g", report.g.clone()), ("a", report.a.clone()), ("gap", report.gap.clone())])
            })
        }
        Command::Counterexample { gamma, irr_gamma, n, big_h } => {
            let gamma = if irr_gamma {
                Gamma::default_irrational(p)
            } else {
                Gamma::Rational(parse_ratfn(ctx, &gamma)?)
            };
            let lo = cli.lo.unwrap_or(COUNTEREXAMPLE_LO);
            let ce = build_counterexample(ctx, gamma)?;
            let v = verify_counterexample(ctx, &ce, n, big_h, lo, c.workers)?;
            let report = v.report(ctx);
            emit(&c, &report, || {
                let certs: Vec<String> = report
                    .nonmembership_certificates
                    .iter()
                    .map(|x| match x.witness_exponent {
                        Some(e) => format!("{}: t^{e}", x.h),
                        None => format!("{}: none", x.h),
                    })
                    .collect();
                let sums: Vec<String> = report
                    .additive_part_sums
                    .iter()
                    .map(|x| format!("{}: {:?}", x.h, x.tally))
                    .collect();
                aligned(&[
                    ("f", fmt_sparse(ctx, &ce.f)),
                    ("tau(A) = gamma", report.tau_a_matches_gamma.to_string()),
                    ("certificates", certs.join("; ")),
                    ("full_sum", report.full_sum.map_or("not an integer".into(), |s| s.to_string())),
                    ("additive sums", sums.join("; ")),
                    ("all checks", v.all_hold().to_string()),
                ])
            })
        }
        Command::Psi { l, alpha } => {
            let s = parse_series(ctx, &alpha, p as i64 * c.lo)?;
            let value = fmt_series(ctx, &psi_l(ctx, l, &s));
            emit(&c, &ValueReport { value: value.clone() }, || value + "\n")
        }
        Command::Split { alpha } => {
            let s = parse_series(ctx, &alpha, p as i64 * c.lo)?;
            let parts: Vec<String> = split(ctx, &s).iter().map(|x| fmt_series(ctx, x)).collect();
            let report = SplitReport { parts };
            emit(&c, &report, || format!("({})\n", report.parts.join(", ")))
        }
        Command::Selfcheck { count } => {
            let report = selfcheck(&c, count)?;
            emit(&c, &report, || {
                aligned(&[
                    ("seed", report.seed.to_string()),
                    ("checked", report.checked.to_string()),
                    ("failures", report.failures.to_string()),
                ])
            })
        }
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 1 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    match run(cli) {
        Ok(out) => {
            print!("{out}");
            ExitCode::SUCCESS
        }
        Err(e) => {
            if let Some(Error::Precision { required_floor, .. }) = e.downcast_ref::<Error>() {
                eprintln!("error: {e}");
                eprintln!("required floor: {required_floor}");
                return ExitCode::from(2);
            }
            eprintln!("error: {e:#}");
            ExitCode::from(1)
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn sets_parse() {
        assert_eq!(parse_set("3, 1,3").unwrap(), BTreeSet::from([1, 3]));
        assert!(parse_set("0").is_err());
        assert!(parse_set("a").is_err());
    }

    #[test]
    fn support_with_irrational_exponent() {
        let ctx = parse_field("3").unwrap();
        let f = support_poly(&ctx, &BTreeSet::from([2, 4]), &BTreeSet::from([4])).unwrap();
        assert!(matches!(f.coeff(4), Some(Coeff::Lazy(_))));
        assert!(support_poly(&ctx, &BTreeSet::from([2]), &BTreeSet::from([5])).is_err());
    }

    #[test]
    fn cli_definition_is_consistent() {
        use clap::CommandFactory;
        Cli::command().debug_assert();
    }
}
