//! An additive polynomial `A = alpha x + beta x^p` with a prescribed
//! `tau(A) = gamma` whose multiples `tau(hA)` stay irrational, and the
//! polynomial `f(x) = A(x^(q+1)) - x^2/t` built from it: every value of `f`
//! has trivial character although one additive part of `f` is
//! equidistributed.

use std::sync::Arc;

use serde::Serialize;

use crate::addpoly::{tau, AdditivePoly, SparsePoly};
use crate::charsum::{expsum_naive, nonzero_polys_below, Tally};
use crate::error::{Error, Result};
use crate::ffield::{FieldCtx, FqElem};
use crate::laurent::{psi_l, Coeff, GapRule, IrrationalStream, Order, Poly, RatFn, Series};
use crate::text::fmt_poly;

/// The prescribed value of `tau(A)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Gamma {
    Rational(RatFn),
    Irrational(IrrationalStream),
}

impl Gamma {
    fn coeff(&self) -> Coeff {
        match self {
            Gamma::Rational(r) => Coeff::Rational(r.clone()),
            Gamma::Irrational(s) => Coeff::from(s.clone()),
        }
    }

    /// The default irrational target `sum_i t^-((p i + 1)! + 1)`, whose
    /// support misses every factorial.
    pub fn default_irrational(p: u64) -> Self {
        let rule = GapRule::Affine {
            scale: 1,
            shift: 1,
            inner: Arc::new(GapRule::Factorial { stride: p, offset: 1 }),
        };
        Gamma::Irrational(IrrationalStream::new(rule).expect("valid rule"))
    }
}

/// `p` irrational streams `xi_0, ..., xi_{p-1}` and the target `gamma`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct XiFamily {
    pub xis: Vec<IrrationalStream>,
    pub gamma: Gamma,
}

impl XiFamily {
    /// `xi_j = sum_{i >= 1} t^-((p i + j + 1)!)`: pairwise disjoint
    /// factorial supports.
    pub fn canonical(ctx: &FieldCtx, gamma: Gamma) -> Self {
        let p = ctx.p() as u64;
        let xis = (0..p)
            .map(|j| {
                IrrationalStream::new(GapRule::Factorial {
                    stride: p,
                    offset: j + 1,
                })
                .expect("valid rule")
            })
            .collect();
        XiFamily { xis, gamma }
    }
}

/// `lambda(h; alpha, xi) = h alpha + sum_l psi_l(h) xi_l`.
pub fn lambda_form(ctx: &FieldCtx, h: &Poly, alpha: &Series, xis: &[Series]) -> Result<Series> {
    let hs = Series::from_poly(h);
    let mut acc = hs.mul(ctx, alpha)?;
    for (l, xi) in xis.iter().enumerate() {
        let coeff = psi_l(ctx, l as i64, &hs);
        acc = acc.add(ctx, &coeff.mul(ctx, xi)?);
    }
    Ok(acc)
}

/// The stream `beta` with `psi_{p-1-l}(beta) = xi_l` for every `l`.
///
/// All coefficients of the `xi_l` are one, so `beta` has a one at
/// `p e + (p - 1 - l)` for every exponent `e` of `xi_l`, i.e. at gap
/// `p g - (p - 1 - l)`.
fn unsplit_streams(p: u64, xis: &[IrrationalStream]) -> IrrationalStream {
    let parts = xis
        .iter()
        .enumerate()
        .map(|(l, xi)| GapRule::Affine {
            scale: p,
            shift: -((p - 1 - l as u64) as i64),
            inner: Arc::new(xi.rule().clone()),
        })
        .collect();
    IrrationalStream::new(GapRule::Union(parts)).expect("valid rule")
}

/// `A(x) = (gamma - xi_0) x + beta x^p` with `psi_{p-1-l}(beta) = xi_l`, so
/// that `tau(A) = gamma`.
pub fn build_a(ctx: &FieldCtx, family: &XiFamily) -> Result<AdditivePoly> {
    if let Gamma::Rational(r) = &family.gamma {
        if r.is_polynomial() {
            return Err(Error::InvalidGamma(
                "gamma must lie outside F_q[t]".into(),
            ));
        }
    }
    if family.xis.len() != ctx.p() as usize {
        return Err(Error::OutOfRange(format!("need {} streams", ctx.p())));
    }
    let alpha = family.gamma.coeff().sub(ctx, &Coeff::from(family.xis[0].clone()));
    let beta = Coeff::from(unsplit_streams(ctx.p() as u64, &family.xis));
    Ok(AdditivePoly::from_terms(ctx, [(0, alpha), (1, beta)]))
}

/// Which grouping of `f` into additive parts exhibits an additive part of
/// `f` that is equidistributed.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Regrouping {
    /// Parts `{q+1, 2}` with `A_2(x) = -x/t`.
    OddCharacteristic,
    /// Parts `{q+1, 1}` with `A_1(x) = x^2/t`, since `x^2` is additive.
    EvenCharacteristic,
}

#[derive(Clone, Debug)]
pub struct CounterExample {
    pub a: AdditivePoly,
    pub f: SparsePoly,
    pub family: XiFamily,
    pub regrouping: Regrouping,
}

/// `f(x) = A(x^(q+1)) - x^2/t`.
pub fn build_counterexample(ctx: &FieldCtx, gamma: Gamma) -> Result<CounterExample> {
    let family = XiFamily::canonical(ctx, gamma);
    let a = build_a(ctx, &family)?;
    let q = ctx.q() as u64;
    let minus_one_over_t = RatFn::monomial(ctx.neg(FqElem::ONE), -1);
    let f = a
        .compose_power(ctx, q + 1)
        .add(ctx, &SparsePoly::monomial(2, Coeff::Rational(minus_one_over_t)));
    let regrouping = if ctx.p() == 2 {
        Regrouping::EvenCharacteristic
    } else {
        Regrouping::OddCharacteristic
    };
    Ok(CounterExample {
        a,
        f,
        family,
        regrouping,
    })
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Certificate {
    pub h: String,
    /// The highest negative exponent of `{tau(hA)}` with a nonzero
    /// coefficient; `None` if the window shows none.
    pub witness_exponent: Option<i64>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct AdditiveSum {
    pub h: String,
    pub tally: Vec<u64>,
}

/// The JSON report of the counter-example checks.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct VerificationReport {
    #[serde(rename = "tau_A_matches_gamma")]
    pub tau_a_matches_gamma: bool,
    pub nonmembership_certificates: Vec<Certificate>,
    /// The value of the complete sum when it is a rational integer.
    pub full_sum: Option<i64>,
    pub additive_part_sums: Vec<AdditiveSum>,
}

/// Verdicts and raw data behind a [`VerificationReport`].
#[derive(Clone, Debug)]
pub struct Verification {
    pub tau_a: Series,
    pub tau_matches: bool,
    pub certificates: Vec<(Poly, Option<i64>)>,
    pub full_sum: Tally,
    pub additive_sums: Vec<(Poly, Tally)>,
    pub q_pow_n: u64,
}

impl Verification {
    /// (ii): every tested `h` has a nonzero fractional coefficient in view.
    pub fn certificates_hold(&self) -> bool {
        self.certificates.iter().all(|(_, w)| w.is_some())
    }

    /// (iii): `sum_{ord u < N} e(f(u)) = q^N`.
    pub fn full_sum_is_trivial(&self) -> bool {
        self.full_sum.is_trivial() && self.full_sum.total() == self.q_pow_n
    }

    /// (iv): every tested additive sum vanishes.
    pub fn additive_sums_vanish(&self) -> bool {
        self.additive_sums.iter().all(|(_, t)| t.is_zero_sum())
    }

    pub fn all_hold(&self) -> bool {
        self.tau_matches && self.certificates_hold() && self.full_sum_is_trivial() && self.additive_sums_vanish()
    }

    pub fn report(&self, ctx: &FieldCtx) -> VerificationReport {
        VerificationReport {
            tau_a_matches_gamma: self.tau_matches,
            nonmembership_certificates: self
                .certificates
                .iter()
                .map(|(h, w)| Certificate {
                    h: fmt_poly(ctx, h),
                    witness_exponent: *w,
                })
                .collect(),
            full_sum: self.full_sum.integer_value(),
            additive_part_sums: self
                .additive_sums
                .iter()
                .map(|(h, t)| AdditiveSum {
                    h: fmt_poly(ctx, h),
                    tally: t.counts().to_vec(),
                })
                .collect(),
        }
    }
}

/// Runs the four checks at scale `(n, big_h)` with windows down to `lo`:
///
/// 1. `tau(A) = gamma` on the window;
/// 2. for `h` outside `{0, 1}` with `ord h < big_h`, `{tau(hA)}` has a
///    known nonzero coefficient (so `tau(hA)` is not a polynomial);
/// 3. `sum_{ord u < n} e(f(u)) = q^n`;
/// 4. for those `h` whose witness is at least `-n`, the sum of `e(h A(u))`
///    vanishes, as the closed form for linear sums predicts.
pub fn verify_counterexample(
    ctx: &FieldCtx,
    ce: &CounterExample,
    n: u32,
    big_h: u32,
    lo: i64,
    workers: usize,
) -> Result<Verification> {
    let tau_a = tau(ctx, &ce.a, lo);
    let gamma = ce.family.gamma.coeff().to_series(ctx, lo);
    let tau_matches = tau_a.agrees_with(&gamma);

    let mut certificates = Vec::new();
    let mut additive_sums = Vec::new();
    let a_sparse = ce.a.to_sparse(ctx);
    for h in nonzero_polys_below(ctx, big_h)? {
        if h.is_one() {
            continue;
        }
        let t = tau(ctx, &ce.a.mul_poly(ctx, &h), lo);
        let witness = t.nonpolynomial_witness();
        if witness.is_some_and(|w| w >= -(n as i64)) {
            let tally = expsum_naive(ctx, &a_sparse, &h, n, workers)?;
            additive_sums.push((h.clone(), tally));
        }
        certificates.push((h, witness));
    }
    let full_sum = expsum_naive(ctx, &ce.f, &Poly::one(), n, workers)?;
    Ok(Verification {
        tau_a,
        tau_matches,
        certificates,
        full_sum,
        additive_sums,
        q_pow_n: (ctx.q() as u64).pow(n),
    })
}

/// `u^q = u mod t` for every `ord u < n`, by direct polynomial arithmetic.
pub fn u_power_identity_check(ctx: &FieldCtx, n: u32) -> Result<bool> {
    let total = crate::charsum::count_range(ctx, n)?;
    let q = ctx.q() as u64;
    Ok((0..total).all(|idx| {
        let u = Poly::from_index(ctx, idx, n as usize);
        u.pow(ctx, q).sub(ctx, &u).coeff(0).is_zero()
    }))
}

/// The order of `{tau(hA)}`, for reports.
pub fn fractional_order(s: &Series) -> Order {
    s.fractional_part().ord()
}
