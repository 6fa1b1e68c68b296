//! The character `e(alpha) = e_q(res alpha)` and exact complete sums over
//! `{u in F_q[t] : ord u < N}`.
//!
//! A sum of p-th roots of unity is stored as a [`Tally`] of exponents, so
//! every identity is checked exactly. Floating point only appears in report
//! columns.

mod approx;
mod tally;

pub use approx::{best_rational_approx, Approximation, Gap};
pub use tally::{Histogram, HistogramReport, Tally, TallyReport};

use std::thread;

use crate::addpoly::SparsePoly;
use crate::error::{Error, Result};
use crate::ffield::{CharExp, FieldCtx, FqElem};
use crate::laurent::{Poly, Series};

/// `e(alpha)`.
pub fn char_e(ctx: &FieldCtx, alpha: &Series) -> Result<CharExp> {
    Ok(ctx.char_eq(alpha.residue()?))
}

/// `q^n` as a `u64`, rejecting ranges that are too large to enumerate.
pub fn count_range(ctx: &FieldCtx, n: u32) -> Result<u64> {
    (ctx.q() as u64)
        .checked_pow(n)
        .filter(|&c| c <= 1 << 40)
        .ok_or_else(|| Error::OutOfRange(format!("q^{n} is too large to enumerate")))
}

/// Splits `0..total` into at most `workers` contiguous blocks, runs `job` on
/// each block and merges the partial results in block order.
pub fn partitioned<T, J, M>(total: u64, workers: usize, job: J, merge: M) -> Result<T>
where
    T: Send,
    J: Fn(u64, u64) -> Result<T> + Sync,
    M: Fn(T, T) -> T,
{
    let workers = (workers.max(1) as u64).min(total.max(1));
    if workers == 1 {
        return job(0, total);
    }
    let chunk = total.div_ceil(workers);
    let results: Vec<Result<T>> = thread::scope(|scope| {
        let handles: Vec<_> = (0..workers)
            .map(|w| {
                let job = &job;
                let start = (w * chunk).min(total);
                let end = ((w + 1) * chunk).min(total);
                scope.spawn(move || job(start, end))
            })
            .collect();
        handles
            .into_iter()
            .map(|h| h.join().expect("worker panicked"))
            .collect()
    });
    let mut iter = results.into_iter();
    let mut acc = iter.next().expect("at least one block")?;
    for r in iter {
        acc = merge(acc, r?);
    }
    Ok(acc)
}

/// Coefficients of `h * f`, expanded deep enough to read the coefficients
/// of `h f(u)` at exponents `-1 .. -depth` for every `ord u < n`.
///
/// `u^r` has order at most `r (n - 1)`, so `h alpha_r` is needed down to
/// `-depth - r (n - 1)`, which means `alpha_r` down to
/// `-depth - deg h - r (n - 1)`.
struct Prepared {
    terms: Vec<(u64, Series)>,
}

impl Prepared {
    fn new(ctx: &FieldCtx, f: &SparsePoly, h: &Poly, n: u32, depth: i64) -> Result<Self> {
        let deg_h = h.deg().unwrap_or(0) as i64;
        let mut terms = Vec::new();
        for (&r, c) in f.terms() {
            let need = -depth - r as i64 * (n as i64 - 1);
            if let Some(avail) = c.to_series(ctx, need - deg_h).floor() {
                if avail > need - deg_h {
                    return Err(Error::precision(
                        format!("coefficient of x^{r}"),
                        need - deg_h,
                        avail,
                    ));
                }
            }
            let s = c.mul_poly(ctx, h).to_series(ctx, need);
            if !s.is_zero() {
                terms.push((r, s));
            }
        }
        Ok(Prepared { terms })
    }

    fn max_exponent(&self) -> u64 {
        self.terms.iter().map(|(r, _)| *r).max().unwrap_or(0)
    }

    /// Coefficients of `h f(u)` at `-1, ..., -depth`.
    fn fractional_coeffs(
        &self,
        ctx: &FieldCtx,
        powers: &[Poly],
        depth: i64,
        out: &mut [FqElem],
    ) -> Result<()> {
        out.fill(FqElem::ZERO);
        for (r, s) in &self.terms {
            let ur = &powers[*r as usize];
            for (k, slot) in out.iter_mut().enumerate().take(depth as usize) {
                let c = s.coeff_times_poly(ctx, ur, -1 - k as i64)?;
                *slot = ctx.add(*slot, c);
            }
        }
        Ok(())
    }
}

/// `u^0, u^1, ..., u^max` with powers only computed where needed.
fn powers_of(ctx: &FieldCtx, u: &Poly, needed: &[u64], max: u64) -> Vec<Poly> {
    let mut out = vec![Poly::zero(); max as usize + 1];
    let mut last_e = 0u64;
    let mut last = Poly::one();
    out[0] = Poly::one();
    for &r in needed {
        if r == 0 {
            continue;
        }
        last = last.mul(ctx, &u.pow(ctx, r - last_e));
        last_e = r;
        out[r as usize] = last.clone();
    }
    out
}

/// The exact tally of `e(h f(u))` over all `u` with `ord u < n`.
///
/// `u` runs over `0..q^n` in row-major order of `(u_0, ..., u_{n-1})`;
/// the range is split into `workers` contiguous blocks.
pub fn expsum_naive(ctx: &FieldCtx, f: &SparsePoly, h: &Poly, n: u32, workers: usize) -> Result<Tally> {
    let total = count_range(ctx, n)?;
    let prep = Prepared::new(ctx, f, h, n, 1)?;
    let needed: Vec<u64> = prep.terms.iter().map(|(r, _)| *r).collect();
    let max = prep.max_exponent();
    let p = ctx.p();
    partitioned(
        total,
        workers,
        |start, end| {
            let mut tally = Tally::new(p);
            let mut buf = [FqElem::ZERO];
            for idx in start..end {
                let u = Poly::from_index(ctx, idx, n as usize);
                let powers = powers_of(ctx, &u, &needed, max);
                prep.fractional_coeffs(ctx, &powers, 1, &mut buf)?;
                tally.record(ctx.char_eq(buf[0]));
            }
            Ok(tally)
        },
        |a, b| a.merge(&b),
    )
}

/// The complete linear sum `sum_{ord u < n} e(beta u)` in closed form: `q^n`
/// when the coefficients of `beta` at `-1, ..., -n` all vanish, and a
/// perfectly balanced tally (value 0) otherwise.
pub fn expsum_linear(ctx: &FieldCtx, beta: &Series, n: u32) -> Result<Tally> {
    let total = count_range(ctx, n)?;
    let mut vanishing = true;
    for k in 1..=n as i64 {
        if !beta.coeff_checked(-k, "linear sum")?.is_zero() {
            vanishing = false;
        }
    }
    let p = ctx.p();
    Ok(if vanishing {
        Tally::concentrated(p, total)
    } else {
        Tally::balanced(p, total / p as u64)
    })
}

/// One row of a Weyl-criterion scan.
#[derive(Clone, Debug, PartialEq)]
pub struct WeylRow {
    pub h: Poly,
    pub tally: Tally,
}

/// The polynomial whose base-q digits are those of `n`, constant term
/// least significant.
pub fn poly_from_number(ctx: &FieldCtx, mut n: u64) -> Poly {
    let q = ctx.q() as u64;
    let mut coeffs = Vec::new();
    while n > 0 {
        coeffs.push(FqElem::from_index((n % q) as usize));
        n /= q;
    }
    Poly::new(coeffs)
}

/// All nonzero `h` with `ord h < big_h`, ordered by degree, then digits.
pub fn nonzero_polys_below(ctx: &FieldCtx, big_h: u32) -> Result<Vec<Poly>> {
    let total = count_range(ctx, big_h)?;
    Ok((1..total).map(|n| poly_from_number(ctx, n)).collect())
}

/// `sum_{ord u < n} e(h f(u))` for every nonzero `h` with `ord h < big_h`.
pub fn weyl_scan(ctx: &FieldCtx, f: &SparsePoly, n: u32, big_h: u32, workers: usize) -> Result<Vec<WeylRow>> {
    nonzero_polys_below(ctx, big_h)?
        .into_iter()
        .map(|h| {
            let tally = expsum_naive(ctx, f, &h, n, workers)?;
            Ok(WeylRow { h, tally })
        })
        .collect()
}

/// Counts of the first `d` fractional coefficients `(a_-1, ..., a_-d)` of
/// `f(u)` over all `ord u < n`.
pub fn equidist_histogram(ctx: &FieldCtx, f: &SparsePoly, n: u32, d: u32, workers: usize) -> Result<Histogram> {
    let total = count_range(ctx, n)?;
    let bins = count_range(ctx, d)?;
    if d == 0 {
        return Err(Error::OutOfRange("histogram depth must be at least 1".into()));
    }
    let prep = Prepared::new(ctx, f, &Poly::one(), n, d as i64)?;
    let needed: Vec<u64> = prep.terms.iter().map(|(r, _)| *r).collect();
    let max = prep.max_exponent();
    let q = ctx.q() as u64;
    partitioned(
        total,
        workers,
        |start, end| {
            let mut hist = Histogram::new(q, d, bins as usize);
            let mut buf = vec![FqElem::ZERO; d as usize];
            for idx in start..end {
                let u = Poly::from_index(ctx, idx, n as usize);
                let powers = powers_of(ctx, &u, &needed, max);
                prep.fractional_coeffs(ctx, &powers, d as i64, &mut buf)?;
                let bin = buf.iter().fold(0u64, |acc, c| acc * q + c.index() as u64);
                hist.record(bin as usize);
            }
            Ok(hist)
        },
        |a, b| a.merge(&b),
    )
}
