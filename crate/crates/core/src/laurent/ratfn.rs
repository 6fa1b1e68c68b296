use crate::error::{Error, Result};
use crate::ffield::{FieldCtx, FqElem};
use crate::laurent::{Poly, Series};

/// An element `num / den` of F_q(t), kept in lowest terms with monic `den`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct RatFn {
    num: Poly,
    den: Poly,
}

impl RatFn {
    pub fn new(ctx: &FieldCtx, num: Poly, den: Poly) -> Result<Self> {
        if den.is_zero() {
            return Err(Error::DivisionByZero);
        }
        if num.is_zero() {
            return Ok(RatFn::zero());
        }
        let g = num.gcd(ctx, &den);
        let (num, _) = num.div_rem(ctx, &g)?;
        let (den, _) = den.div_rem(ctx, &g)?;
        let lead_inv = ctx.inv(den.lead().expect("nonzero"))?;
        Ok(RatFn {
            num: num.scale(ctx, lead_inv),
            den: den.scale(ctx, lead_inv),
        })
    }

    pub fn zero() -> Self {
        RatFn {
            num: Poly::zero(),
            den: Poly::one(),
        }
    }

    pub fn one() -> Self {
        RatFn::from_poly(Poly::one())
    }

    pub fn from_poly(p: Poly) -> Self {
        RatFn {
            num: p,
            den: Poly::one(),
        }
    }

    pub fn constant(c: FqElem) -> Self {
        RatFn::from_poly(Poly::constant(c))
    }

    /// `c * t^k` for any integer `k`.
    pub fn monomial(c: FqElem, k: i64) -> Self {
        if c.is_zero() {
            return RatFn::zero();
        }
        if k >= 0 {
            RatFn::from_poly(Poly::monomial(c, k as usize))
        } else {
            RatFn {
                num: Poly::constant(c),
                den: Poly::monomial(FqElem::ONE, (-k) as usize),
            }
        }
    }

    pub fn num(&self) -> &Poly {
        &self.num
    }

    pub fn den(&self) -> &Poly {
        &self.den
    }

    pub fn is_zero(&self) -> bool {
        self.num.is_zero()
    }

    /// Membership in F_q[t], decided exactly.
    pub fn is_polynomial(&self) -> bool {
        self.den.is_one()
    }

    /// The constant value if this is an element of F_q.
    pub fn as_constant(&self) -> Option<FqElem> {
        (self.den.is_one() && self.num.is_constant()).then(|| self.num.coeff(0))
    }

    /// `ord = deg num - deg den`, `None` for zero.
    pub fn ord(&self) -> Option<i64> {
        Some(self.num.deg()? as i64 - self.den.deg()? as i64)
    }

    pub fn add(&self, ctx: &FieldCtx, other: &RatFn) -> RatFn {
        let num = self
            .num
            .mul(ctx, &other.den)
            .add(ctx, &other.num.mul(ctx, &self.den));
        RatFn::new(ctx, num, self.den.mul(ctx, &other.den)).expect("nonzero denominator")
    }

    pub fn neg(&self, ctx: &FieldCtx) -> RatFn {
        RatFn {
            num: self.num.neg(ctx),
            den: self.den.clone(),
        }
    }

    pub fn sub(&self, ctx: &FieldCtx, other: &RatFn) -> RatFn {
        self.add(ctx, &other.neg(ctx))
    }

    pub fn mul(&self, ctx: &FieldCtx, other: &RatFn) -> RatFn {
        RatFn::new(
            ctx,
            self.num.mul(ctx, &other.num),
            self.den.mul(ctx, &other.den),
        )
        .expect("nonzero denominator")
    }

    pub fn mul_poly(&self, ctx: &FieldCtx, h: &Poly) -> RatFn {
        self.mul(ctx, &RatFn::from_poly(h.clone()))
    }

    pub fn inv(&self, ctx: &FieldCtx) -> Result<RatFn> {
        RatFn::new(ctx, self.den.clone(), self.num.clone())
    }

    pub fn div(&self, ctx: &FieldCtx, other: &RatFn) -> Result<RatFn> {
        Ok(self.mul(ctx, &other.inv(ctx)?))
    }

    pub fn pow(&self, ctx: &FieldCtx, e: i64) -> Result<RatFn> {
        let base = if e < 0 { self.inv(ctx)? } else { self.clone() };
        let e = e.unsigned_abs();
        Ok(RatFn {
            num: base.num.pow(ctx, e),
            den: base.den.pow(ctx, e),
        })
    }

    /// If the denominator is a power of `t`, the Laurent polynomial terms.
    pub fn laurent_terms(&self) -> Option<Vec<(i64, FqElem)>> {
        if !(self.den.is_monomial() || self.den.is_one()) {
            return None;
        }
        let shift = self.den.deg()? as i64;
        Some(
            self.num
                .terms_desc()
                .map(|(e, c)| (e - shift, c))
                .collect(),
        )
    }

    /// Laurent expansion in `1/t`, exact on every exponent `>= lo`.
    ///
    /// Long division by the monic denominator; when the remainder vanishes
    /// the expansion terminates and the result is flagged exact.
    pub fn to_series(&self, ctx: &FieldCtx, lo: i64) -> Series {
        let (Some(dn), Some(dd)) = (self.num.deg(), self.den.deg()) else {
            return Series::zero();
        };
        let (dn, dd) = (dn as i64, dd as i64);
        if self.den.is_monomial() {
            // den is monic, so it is exactly t^dd
            return Series::from_window(-dd, self.num.coeffs().to_vec(), true);
        }
        let top = dn - dd;
        if top < lo {
            return Series::from_window(lo, Vec::new(), false);
        }
        // The running remainder touches exponents in [min(lo, 0), dn].
        let offset = -lo.min(0);
        let idx = |e: i64| (e + offset) as usize;
        let mut rem = vec![FqElem::ZERO; (dn + offset + 1) as usize];
        for (e, &c) in self.num.coeffs().iter().enumerate() {
            rem[idx(e as i64)] = c;
        }
        let den = self.den.coeffs();
        let mut out = vec![FqElem::ZERO; (top - lo + 1) as usize];
        for k in (lo..=top).rev() {
            let c = rem[idx(k + dd)];
            out[(k - lo) as usize] = c;
            if c.is_zero() {
                continue;
            }
            for (i, &d) in den.iter().enumerate() {
                let j = idx(k + i as i64);
                rem[j] = ctx.sub(rem[j], ctx.mul(c, d));
            }
        }
        let terminated = rem.iter().all(|c| c.is_zero());
        Series::from_window(lo, out, terminated)
    }
}
