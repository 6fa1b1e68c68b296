use crate::error::{Error, Result};
use crate::ffield::{FieldCtx, FqElem};

/// A polynomial in `t` over F_q, low degree first, trailing zeros trimmed.
///
/// The zero polynomial has no coefficients and degree `None` (that is, -inf).
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Poly {
    coeffs: Vec<FqElem>,
}

impl Poly {
    pub fn new(mut coeffs: Vec<FqElem>) -> Self {
        while coeffs.last().is_some_and(|c| c.is_zero()) {
            coeffs.pop();
        }
        Poly { coeffs }
    }

    pub fn zero() -> Self {
        Poly { coeffs: Vec::new() }
    }

    pub fn one() -> Self {
        Poly::constant(FqElem::ONE)
    }

    pub fn constant(c: FqElem) -> Self {
        Poly::new(vec![c])
    }

    /// `c * t^k`.
    pub fn monomial(c: FqElem, k: usize) -> Self {
        let mut v = vec![FqElem::ZERO; k + 1];
        v[k] = c;
        Poly::new(v)
    }

    /// `t`.
    pub fn t() -> Self {
        Poly::monomial(FqElem::ONE, 1)
    }

    /// The polynomial whose coefficients are the base-q digits of `index`,
    /// with `len` coefficients and `u_0` the most significant digit.
    ///
    /// Iterating `index` over `0..q^len` enumerates `{u : ord u < len}` in
    /// row-major order of `(u_0, ..., u_{len-1})`.
    pub fn from_index(ctx: &FieldCtx, mut index: u64, len: usize) -> Self {
        let q = ctx.q() as u64;
        let mut v = vec![FqElem::ZERO; len];
        for slot in v.iter_mut().rev() {
            *slot = FqElem::from_index((index % q) as usize);
            index /= q;
        }
        Poly::new(v)
    }

    pub fn coeffs(&self) -> &[FqElem] {
        &self.coeffs
    }

    pub fn coeff(&self, i: usize) -> FqElem {
        self.coeffs.get(i).copied().unwrap_or(FqElem::ZERO)
    }

    /// Degree, or `None` for the zero polynomial.
    pub fn deg(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    /// `ord` as a signed integer, `None` meaning -inf.
    pub fn ord(&self) -> Option<i64> {
        self.deg().map(|d| d as i64)
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn is_one(&self) -> bool {
        self.coeffs.len() == 1 && self.coeffs[0] == FqElem::ONE
    }

    pub fn is_constant(&self) -> bool {
        self.coeffs.len() <= 1
    }

    pub fn lead(&self) -> Option<FqElem> {
        self.coeffs.last().copied()
    }

    pub fn is_monic(&self) -> bool {
        self.lead() == Some(FqElem::ONE)
    }

    /// Lowest exponent with a nonzero coefficient.
    pub fn low_degree(&self) -> Option<usize> {
        self.coeffs.iter().position(|c| !c.is_zero())
    }

    /// `(exponent, coefficient)` for every nonzero coefficient, highest first.
    pub fn terms_desc(&self) -> impl Iterator<Item = (i64, FqElem)> + '_ {
        self.coeffs
            .iter()
            .enumerate()
            .rev()
            .filter(|(_, c)| !c.is_zero())
            .map(|(i, &c)| (i as i64, c))
    }

    pub fn add(&self, ctx: &FieldCtx, other: &Poly) -> Poly {
        let n = self.coeffs.len().max(other.coeffs.len());
        Poly::new(
            (0..n)
                .map(|i| ctx.add(self.coeff(i), other.coeff(i)))
                .collect(),
        )
    }

    pub fn neg(&self, ctx: &FieldCtx) -> Poly {
        Poly::new(self.coeffs.iter().map(|&c| ctx.neg(c)).collect())
    }

    pub fn sub(&self, ctx: &FieldCtx, other: &Poly) -> Poly {
        let n = self.coeffs.len().max(other.coeffs.len());
        Poly::new(
            (0..n)
                .map(|i| ctx.sub(self.coeff(i), other.coeff(i)))
                .collect(),
        )
    }

    pub fn scale(&self, ctx: &FieldCtx, c: FqElem) -> Poly {
        Poly::new(self.coeffs.iter().map(|&a| ctx.mul(a, c)).collect())
    }

    pub fn mul(&self, ctx: &FieldCtx, other: &Poly) -> Poly {
        if self.is_zero() || other.is_zero() {
            return Poly::zero();
        }
        let mut out = vec![FqElem::ZERO; self.coeffs.len() + other.coeffs.len() - 1];
        for (i, &a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, &b) in other.coeffs.iter().enumerate() {
                out[i + j] = ctx.add(out[i + j], ctx.mul(a, b));
            }
        }
        Poly::new(out)
    }

    pub fn pow(&self, ctx: &FieldCtx, mut e: u64) -> Poly {
        let mut result = Poly::one();
        let mut base = self.clone();
        while e > 0 {
            if e & 1 == 1 {
                result = result.mul(ctx, &base);
            }
            e >>= 1;
            if e > 0 {
                base = base.mul(ctx, &base);
            }
        }
        result
    }

    /// `u^p`, computed coefficient-wise as `sum u_i^p t^(ip)`.
    pub fn frobenius(&self, ctx: &FieldCtx) -> Poly {
        let p = ctx.p() as usize;
        let mut out = vec![FqElem::ZERO; self.coeffs.len().saturating_sub(1) * p + 1];
        for (i, &c) in self.coeffs.iter().enumerate() {
            out[i * p] = ctx.frobenius(c);
        }
        Poly::new(out)
    }

    /// Euclidean division: `self = q * divisor + r` with `deg r < deg divisor`.
    pub fn div_rem(&self, ctx: &FieldCtx, divisor: &Poly) -> Result<(Poly, Poly)> {
        let dd = divisor.deg().ok_or(Error::DivisionByZero)?;
        let lead_inv = ctx.inv(divisor.coeffs[dd])?;
        let mut rem = self.coeffs.clone();
        if rem.len() <= dd {
            return Ok((Poly::zero(), self.clone()));
        }
        let mut quot = vec![FqElem::ZERO; rem.len() - dd];
        for k in (0..quot.len()).rev() {
            let c = ctx.mul(rem[k + dd], lead_inv);
            quot[k] = c;
            if c.is_zero() {
                continue;
            }
            for (i, &d) in divisor.coeffs.iter().enumerate() {
                rem[k + i] = ctx.sub(rem[k + i], ctx.mul(c, d));
            }
        }
        rem.truncate(dd);
        Ok((Poly::new(quot), Poly::new(rem)))
    }

    /// Scales to a monic polynomial (zero stays zero).
    pub fn monic(&self, ctx: &FieldCtx) -> Poly {
        match self.lead() {
            Some(c) if c != FqElem::ONE => self.scale(ctx, ctx.inv(c).expect("nonzero lead")),
            _ => self.clone(),
        }
    }

    /// Monic greatest common divisor.
    pub fn gcd(&self, ctx: &FieldCtx, other: &Poly) -> Poly {
        let mut a = self.clone();
        let mut b = other.clone();
        while !b.is_zero() {
            let (_, r) = a.div_rem(ctx, &b).expect("nonzero divisor");
            a = b;
            b = r;
        }
        a.monic(ctx)
    }

    /// `self * t^k`.
    pub fn shift(&self, k: usize) -> Poly {
        if self.is_zero() {
            return Poly::zero();
        }
        let mut v = vec![FqElem::ZERO; k];
        v.extend_from_slice(&self.coeffs);
        Poly::new(v)
    }

    /// Whether `self = c * t^k` for some `c != 0`.
    pub fn is_monomial(&self) -> bool {
        self.coeffs.iter().filter(|c| !c.is_zero()).count() == 1
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn f3() -> FieldCtx {
        FieldCtx::prime(3).unwrap()
    }

    fn poly(ctx: &FieldCtx, c: &[i64]) -> Poly {
        Poly::new(c.iter().map(|&x| ctx.from_int(x)).collect())
    }

    #[test]
    fn division_identity() {
        let ctx = f3();
        let a = poly(&ctx, &[1, 2, 0, 1, 2]);
        let b = poly(&ctx, &[2, 1, 1]);
        let (q, r) = a.div_rem(&ctx, &b).unwrap();
        assert!(r.deg().unwrap_or(0) < 2);
        assert_eq!(q.mul(&ctx, &b).add(&ctx, &r), a);
        assert_eq!(a.div_rem(&ctx, &Poly::zero()), Err(Error::DivisionByZero));
    }

    #[test]
    fn gcd_is_monic_common_factor() {
        let ctx = f3();
        let f = poly(&ctx, &[1, 1]); // t + 1
        let a = f.mul(&ctx, &poly(&ctx, &[2, 0, 1]));
        let b = f.mul(&ctx, &poly(&ctx, &[0, 2])).scale(&ctx, ctx.from_int(2));
        assert_eq!(a.gcd(&ctx, &b), f);
    }

    #[test]
    fn frobenius_matches_power() {
        let ctx = FieldCtx::new(2, 2, None).unwrap();
        for idx in 0..64 {
            let u = Poly::from_index(&ctx, idx, 3);
            assert_eq!(u.frobenius(&ctx), u.pow(&ctx, 2));
        }
    }

    #[test]
    fn enumeration_is_row_major() {
        let ctx = FieldCtx::prime(2).unwrap();
        // index 1 of length 3 sets u_2, the fastest-varying digit.
        assert_eq!(Poly::from_index(&ctx, 1, 3), Poly::monomial(FqElem::ONE, 2));
        assert_eq!(Poly::from_index(&ctx, 4, 3), Poly::one());
        assert!(Poly::from_index(&ctx, 0, 3).is_zero());
        assert_eq!(Poly::zero().deg(), None);
    }
}
