//! Acceptance suite: one PASS/FAIL line per criterion, with its runtime
//! against the target. Exits nonzero if any criterion fails.
//!
//! Run with `cargo test -p equidist-cli --test acceptance`.

use std::collections::BTreeSet;
use std::path::PathBuf;
use std::process::{Command, ExitCode};
use std::time::{Duration, Instant};

use equidist::addpoly::{decompose, ktilde, recompose, reduce, shadow, thm12_candidates, SparsePoly};
use equidist::charsum::{char_e, equidist_histogram, expsum_linear, expsum_naive, Tally};
use equidist::construct::{build_counterexample, u_power_identity_check, verify_counterexample, Gamma};
use equidist::laurent::{psi, psi_l, Coeff, Order, Poly, RatFn, Series};
use equidist::random::{self, SeededRng};
use equidist::text::parse_field;
use equidist::{CharExp, FieldCtx, FqElem};
use rand::Rng;

struct Outcome {
    ok: bool,
    detail: String,
}

fn pass(detail: impl Into<String>) -> Outcome {
    Outcome { ok: true, detail: detail.into() }
}

fn fail(detail: impl Into<String>) -> Outcome {
    Outcome { ok: false, detail: detail.into() }
}

fn field(q: u32) -> FieldCtx {
    parse_field(&q.to_string()).unwrap()
}

fn all_polys(ctx: &FieldCtx, n: u32) -> impl Iterator<Item = Poly> + '_ {
    (0..(ctx.q() as u64).pow(n)).map(move |i| Poly::from_index(ctx, i, n as usize))
}

/// `e(f(u))` from a direct series evaluation of every term.
fn eval_char(ctx: &FieldCtx, f: &SparsePoly, u: &Poly) -> CharExp {
    let mut acc = Series::zero();
    for (&r, c) in f.terms() {
        let ur = u.pow(ctx, r);
        let c = c.to_series(ctx, -2 - ur.deg().unwrap_or(0) as i64);
        acc = acc.add(ctx, &c.mul_poly(ctx, &ur));
    }
    char_e(ctx, &acc).unwrap()
}

fn criterion_1() -> Outcome {
    let mut cases = 0u64;
    for q in [2u32, 3, 4, 9] {
        let ctx = field(q);
        let p = ctx.p() as u64;
        let mut rng = random::rng(1000 + q as u64);
        let us: Vec<Poly> = all_polys(&ctx, 4).collect();
        for i in 0..100 {
            let alpha = random::series(&ctx, &mut rng, -30, 5, false);
            let psi_alpha = psi(&ctx, &alpha);
            for u in &us {
                let lhs = char_e(&ctx, &alpha.mul_poly(&ctx, &u.pow(&ctx, p)));
                let rhs = char_e(&ctx, &psi_alpha.mul_poly(&ctx, u));
                match (lhs, rhs) {
                    (Ok(a), Ok(b)) if a == b => cases += 1,
                    _ => return fail(format!("q = {q}, alpha #{i}, u = {u:?}")),
                }
            }
        }
    }
    pass(format!("{cases} (alpha, u) pairs"))
}

fn criterion_2() -> Outcome {
    let mut cases = 0u64;
    for q in [2u32, 3] {
        let ctx = field(q);
        let mut rng = random::rng(2000 + q as u64);
        let hs: Vec<Poly> = all_polys(&ctx, 2).filter(|h| !h.is_zero()).collect();
        let us: Vec<Poly> = all_polys(&ctx, 3).collect();
        for i in 0..50 {
            let terms = rng.gen_range(1..=5);
            let f = random::sparse(&ctx, &mut rng, 12, terms, |r| random::mixed_coeff(&ctx, r));
            for h in &hs {
                let hf = SparsePoly::from_terms(&ctx, f.terms().iter().map(|(&r, c)| (r, c.mul_poly(&ctx, h))));
                let g = reduce(&ctx, &hf, -60);
                for u in &us {
                    if eval_char(&ctx, &hf, u) != eval_char(&ctx, &g, u) {
                        return fail(format!("q = {q}, f #{i}, h = {h:?}, u = {u:?}"));
                    }
                    cases += 1;
                }
            }
        }
    }
    pass(format!("{cases} (f, h, u) triples"))
}

fn criterion_3() -> Outcome {
    let qs = [2u32, 3, 4, 5];
    let mut rng = random::rng(3000);
    for i in 0..200 {
        let ctx = field(qs[i % qs.len()]);
        let terms = rng.gen_range(1..=8);
        let f = random::sparse(&ctx, &mut rng, 50, terms, |r| random::mixed_coeff(&ctx, r));
        let d = decompose(&ctx, &f);
        let p = ctx.p() as u64;
        if recompose(&ctx, &d) != f || d.parts.keys().any(|r| r % p == 0) || decompose(&ctx, &f.clone()) != d {
            return fail(format!("f #{i}"));
        }
    }
    pass("200 decompositions")
}

fn criterion_4() -> Outcome {
    let mut checks = 0;
    for q in [2u32, 3, 4] {
        let ctx = field(q);
        let p = ctx.p() as i64;
        let mut rng = random::rng(4000 + q as u64);
        for i in 0..100 {
            let a = random::series(&ctx, &mut rng, -30, 4, false);
            let b = random::series(&ctx, &mut rng, -25, 4, false);
            let ab = a.mul(&ctx, &b).unwrap();
            for l in 0..p {
                let lhs = psi_l(&ctx, l, &ab);
                let mut rhs = Series::zero();
                for k in 0..p {
                    rhs = rhs.add(&ctx, &psi_l(&ctx, k, &a).mul(&ctx, &psi_l(&ctx, l - k, &b)).unwrap());
                }
                if !lhs.agrees_with(&rhs) {
                    return fail(format!("q = {q}, pair #{i}, l = {l}"));
                }
                checks += 1;
            }
        }
    }
    pass(format!("{checks} (pair, l) checks"))
}

fn criterion_5() -> Outcome {
    let mut counts = [0u32; 2];
    for q in [2u32, 3] {
        let ctx = field(q);
        let mut rng = random::rng(5000 + q as u64);
        for i in 0..200 {
            let n = 1 + (i % 4) as u32;
            let mut beta = random::series(&ctx, &mut rng, -12, 3, true);
            // clear the top fractional coefficients half of the time
            if rng.gen_bool(0.5) {
                let kill: Vec<(i64, FqElem)> = (1..=n as i64).map(|k| (-k, beta.coeff(-k).unwrap())).collect();
                beta = beta.sub(&ctx, &Series::exact_from_terms(&ctx, &kill));
            }
            let f = SparsePoly::monomial(1, Coeff::Window(beta.clone()));
            let naive = expsum_naive(&ctx, &f, &Poly::one(), n, 1).unwrap();
            let linear = expsum_linear(&ctx, &beta, n).unwrap();
            let qn = (q as i64).pow(n);
            let small = match beta.fractional_part().ord() {
                Order::NegInfinity => true,
                Order::Exactly(e) => e < -(n as i64),
                Order::Below(_) => return fail("exact input has a window"),
            };
            let want = if small { qn } else { 0 };
            if naive != linear || naive.integer_value() != Some(want) {
                return fail(format!("q = {q}, beta #{i}: {:?} vs {:?}", naive.counts(), linear.counts()));
            }
            counts[small as usize] += 1;
        }
    }
    pass(format!("{} sums of q^N, {} sums of 0", counts[1], counts[0]))
}

fn criterion_6() -> Outcome {
    let mut details = Vec::new();
    for (q, n, want) in [(3u32, 3u32, 27i64), (2, 4, 16)] {
        let ctx = field(q);
        let gamma = Gamma::Rational(RatFn::monomial(FqElem::ONE, -1));
        let ce = match build_counterexample(&ctx, gamma) {
            Ok(ce) => ce,
            Err(e) => return fail(format!("q = {q}: {e}")),
        };
        let v = match verify_counterexample(&ctx, &ce, n, 2, -1000, 1) {
            Ok(v) => v,
            Err(e) => return fail(format!("q = {q}: {e}")),
        };
        if v.full_sum.integer_value() != Some(want) {
            return fail(format!("q = {q}: full sum {:?}", v.full_sum.counts()));
        }
        if !(v.tau_matches && v.certificates_hold() && v.additive_sums_vanish()) {
            return fail(format!("q = {q}: tau {} certificates {} additive {}", v.tau_matches, v.certificates_hold(), v.additive_sums_vanish()));
        }
        details.push(format!("q = {q}: sum {want}, {} certificates, {} vanishing additive sums", v.certificates.len(), v.additive_sums.len()));
    }
    pass(details.join("; "))
}

fn criterion_7() -> Outcome {
    for q in [2u32, 3, 4] {
        if !u_power_identity_check(&field(q), 4).unwrap() {
            return fail(format!("q = {q}"));
        }
    }
    pass("q in {2, 3, 4}, N = 4")
}

fn binomials_mod(n: usize, p: u64) -> Vec<Vec<u64>> {
    let mut rows: Vec<Vec<u64>> = vec![vec![1]];
    for i in 1..=n {
        let prev = &rows[i - 1];
        let row = (0..=i)
            .map(|j| {
                let a = if j > 0 { prev[j - 1] } else { 0 };
                let b = prev.get(j).copied().unwrap_or(0);
                (a + b) % p
            })
            .collect();
        rows.push(row);
    }
    rows
}

fn criterion_8() -> Outcome {
    for p in [2u64, 3, 5, 7] {
        let table = binomials_mod(200, p);
        for r in 1..=200u64 {
            let want: BTreeSet<u64> = (1..=r).filter(|&j| table[r as usize][j as usize] != 0).collect();
            if shadow(&BTreeSet::from([r]), p) != want {
                return fail(format!("shadow p = {p}, r = {r}"));
            }
        }
    }
    let mut rng: SeededRng = random::rng(8000);
    for i in 0..50 {
        let p = [2u64, 3, 5][i % 3];
        let size = rng.gen_range(1..=8);
        let k = random::int_set(&mut rng, 200, size, Some(p));
        if ktilde(&k, p) != k {
            return fail(format!("ktilde p = {p}, K = {k:?}"));
        }
    }
    let examples: [(u64, &[u64], &[u64]); 3] = [(3, &[6, 3, 2], &[]), (3, &[4, 3], &[4]), (3, &[4, 12, 2], &[2])];
    for (p, k, want) in examples {
        let k: BTreeSet<u64> = k.iter().copied().collect();
        let want: BTreeSet<u64> = want.iter().copied().collect();
        if thm12_candidates(&k, p) != want {
            return fail(format!("candidates p = {p}, K = {k:?}"));
        }
    }
    pass("Lucas r, j <= 200 for p in {2, 3, 5, 7}; 50 coprime K; 3 candidate examples")
}

fn criterion_9() -> Outcome {
    let ctx = field(2);
    let f = SparsePoly::monomial(1, Coeff::Rational(RatFn::monomial(FqElem::ONE, -1)));
    let h = equidist_histogram(&ctx, &f, 3, 1, 1).unwrap();
    if h.max_deviation() != 0.0 || h.total() != 8 {
        return fail(format!("t^-1 x: {:?}", h.counts()));
    }
    for q in [2u32, 3] {
        let ctx = field(q);
        let mut rng = random::rng(9000 + q as u64);
        for _ in 0..5 {
            let poly_coeff = |r: &mut SeededRng| Coeff::Rational(RatFn::from_poly(random::poly(&ctx, r, 3)));
            let f = random::sparse(&ctx, &mut rng, 6, 3, poly_coeff);
            for d in [1u32, 2] {
                let h = equidist_histogram(&ctx, &f, 3, d, 1).unwrap();
                let want = 1.0 - (q as f64).powi(-(d as i32));
                if h.max_deviation() != want {
                    return fail(format!("q = {q}, d = {d}: {}", h.max_deviation()));
                }
            }
            let g = random::sparse(&ctx, &mut rng, 8, 3, |r| random::mixed_coeff(&ctx, r));
            let fine = equidist_histogram(&ctx, &g, 3, 2, 1).unwrap();
            if fine.coarsen() != equidist_histogram(&ctx, &g, 3, 1, 1).unwrap() {
                return fail(format!("coarsening, q = {q}"));
            }
        }
    }
    pass("deviation 0 for t^-1 x; 1 - q^-d for polynomial f; coarsening")
}

const GOLDEN: &[(&str, &[&str])] = &[
    ("shadow_f2", &["--field", "2^1", "shadow", "3"]),
    ("weyl_f2", &["--field", "2", "weyl", "x^3/t", "--N", "3", "--H", "2"]),
    ("hist_f2", &["--field", "2", "--output", "json", "hist", "x/t", "--N", "3", "--d", "1"]),
    ("counterexample_f3", &["--field", "3^1", "--output", "json", "counterexample", "--gamma", "1/t", "--N", "3", "--H", "2"]),
    ("selfcheck", &["--field", "3", "--seed", "11", "selfcheck", "--count", "5"]),
];

fn run_cli(args: &[&str]) -> Vec<u8> {
    Command::new(env!("CARGO_BIN_EXE_equidist")).args(args).output().expect("binary runs").stdout
}

fn criterion_10() -> Outcome {
    for q in [2u32, 3, 4] {
        let ctx = field(q);
        let mut rng = random::rng(10_000 + q as u64);
        for i in 0..5 {
            let f = random::sparse(&ctx, &mut rng, 10, 3, |r| random::mixed_coeff(&ctx, r));
            let base: Tally = expsum_naive(&ctx, &f, &Poly::one(), 4, 1).unwrap();
            let hist = equidist_histogram(&ctx, &f, 4, 2, 1).unwrap();
            for w in [2, 4, 8] {
                if expsum_naive(&ctx, &f, &Poly::one(), 4, w).unwrap() != base
                    || equidist_histogram(&ctx, &f, 4, 2, w).unwrap() != hist
                {
                    return fail(format!("q = {q}, f #{i}, workers = {w}"));
                }
            }
        }
    }
    let dir = PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("tests/golden");
    for (name, args) in GOLDEN {
        let want = std::fs::read(dir.join(format!("{name}.txt"))).unwrap_or_default();
        for run in 0..2 {
            if run_cli(args) != want {
                return fail(format!("golden {name}, run {run}"));
            }
        }
    }
    pass("workers 1, 2, 4, 8 agree; golden files byte-stable")
}

type Criterion = (&'static str, fn() -> Outcome, u64);

fn main() -> ExitCode {
    let criteria: [Criterion; 10] = [
        ("twisted character e(alpha u^p) = e(psi(alpha) u)", criterion_1, 5),
        ("reduction preserves e(h f(u))", criterion_2, 10),
        ("decomposition round trip and canonicity", criterion_3, 1),
        ("psi_l convolution", criterion_4, 5),
        ("linear sums are q^N or 0", criterion_5, 10),
        ("counter-example", criterion_6, 30),
        ("u^q = u mod t", criterion_7, 1),
        ("shadow, ktilde and candidate sets", criterion_8, 5),
        ("histogram sanity", criterion_9, 1),
        ("determinism and parallel merge", criterion_10, 10),
    ];
    let mut failures = 0;
    for (i, (name, check, target)) in criteria.iter().enumerate() {
        let start = Instant::now();
        let outcome = check();
        let elapsed = start.elapsed();
        let in_time = elapsed < Duration::from_secs(*target);
        let ok = outcome.ok && in_time;
        if !ok {
            failures += 1;
        }
        println!(
            "{} {:>2}. {name}: {} [{:.2}s / {target}s{}]",
            if ok { "PASS" } else { "FAIL" },
            i + 1,
            outcome.detail,
            elapsed.as_secs_f64(),
            if in_time { "" } else { ", over time" },
        );
    }
    if failures == 0 {
        println!("all criteria passed");
        ExitCode::SUCCESS
    } else {
        println!("{failures} criteria failed");
        ExitCode::FAILURE
    }
}
