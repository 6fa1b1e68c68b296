//! Windowed Laurent series in `1/t`.
//!
//! A [`Series`] stands for an element `alpha = sum a_i t^i` of F_q((1/t)).
//! It stores the coefficients on an interval `[lo, hi]`: everything above
//! `hi` is zero, everything in the interval is exact, and everything below
//! `lo` is unknown unless the series is flagged exact (then it is zero).
//! Operations propagate the floor so that a result never claims a
//! coefficient it cannot determine.

use std::cmp::max;

use crate::error::{Error, Result};
use crate::ffield::{FieldCtx, FqElem};
use crate::laurent::Poly;

/// Leading exponent information of a series.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Order {
    /// The series is exactly zero.
    NegInfinity,
    /// The leading nonzero coefficient sits at this exponent.
    Exactly(i64),
    /// Every known coefficient vanishes; the true order is below this floor.
    Below(i64),
}

/// A truncation of an element of F_q((1/t)).
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Series {
    /// Exponent of `coeffs[0]`. For inexact series this is the floor.
    lo: i64,
    coeffs: Vec<FqElem>,
    exact: bool,
}

pub(crate) fn ceil_div(a: i64, b: i64) -> i64 {
    -((-a).div_euclid(b))
}

impl Series {
    pub fn zero() -> Self {
        Series {
            lo: 0,
            coeffs: Vec::new(),
            exact: true,
        }
    }

    pub fn one() -> Self {
        Series::monomial(FqElem::ONE, 0)
    }

    /// `c * t^e`, exact.
    pub fn monomial(c: FqElem, e: i64) -> Self {
        Series::normalized(e, vec![c], true)
    }

    pub fn from_poly(p: &Poly) -> Self {
        Series::normalized(0, p.coeffs().to_vec(), true)
    }

    /// An exact series from `(exponent, coefficient)` terms (repeated
    /// exponents are summed).
    pub fn exact_from_terms(ctx: &FieldCtx, terms: &[(i64, FqElem)]) -> Self {
        Self::from_terms_inner(ctx, terms, None)
    }

    /// A series known on exponents `>= lo` with the given terms.
    ///
    /// Terms below the floor contradict the window and are rejected.
    pub fn windowed_from_terms(ctx: &FieldCtx, terms: &[(i64, FqElem)], lo: i64) -> Result<Self> {
        if let Some((e, _)) = terms.iter().find(|(e, c)| *e < lo && !c.is_zero()) {
            return Err(Error::EmptyWindow(format!(
                "term t^{e} lies below the declared floor {lo}"
            )));
        }
        Ok(Self::from_terms_inner(ctx, terms, Some(lo)))
    }

    fn from_terms_inner(ctx: &FieldCtx, terms: &[(i64, FqElem)], floor: Option<i64>) -> Self {
        let nonzero: Vec<_> = terms.iter().filter(|(_, c)| !c.is_zero()).collect();
        let top = nonzero.iter().map(|(e, _)| *e).max();
        let bottom = nonzero.iter().map(|(e, _)| *e).min();
        let lo = match (floor, bottom) {
            (Some(f), _) => f,
            (None, Some(b)) => b,
            (None, None) => return Series::zero(),
        };
        let hi = top.unwrap_or(lo).max(lo);
        let mut coeffs = vec![FqElem::ZERO; (hi - lo + 1) as usize];
        for &&(e, c) in &nonzero {
            let slot = &mut coeffs[(e - lo) as usize];
            *slot = ctx.add(*slot, c);
        }
        Series::normalized(lo, coeffs, floor.is_none())
    }

    /// A window `[lo, lo + coeffs.len() - 1]`; for exact series the
    /// coefficients below `lo` are zero.
    pub fn from_window(lo: i64, coeffs: Vec<FqElem>, exact: bool) -> Self {
        Series::normalized(lo, coeffs, exact)
    }

    fn normalized(mut lo: i64, mut coeffs: Vec<FqElem>, exact: bool) -> Self {
        if exact {
            while coeffs.last().is_some_and(|c| c.is_zero()) {
                coeffs.pop();
            }
            let lead_zeros = coeffs.iter().take_while(|c| c.is_zero()).count();
            if lead_zeros == coeffs.len() {
                return Series::zero();
            }
            coeffs.drain(..lead_zeros);
            lo += lead_zeros as i64;
        } else {
            while coeffs.len() > 1 && coeffs.last().is_some_and(|c| c.is_zero()) {
                coeffs.pop();
            }
            // Everything above the bound is a known zero, so the window can
            // always be widened to contain the floor itself.
            if coeffs.is_empty() {
                coeffs.push(FqElem::ZERO);
            }
        }
        Series { lo, coeffs, exact }
    }

    pub fn is_exact(&self) -> bool {
        self.exact
    }

    /// The precision floor, `None` when the series is exact.
    pub fn floor(&self) -> Option<i64> {
        (!self.exact).then_some(self.lo)
    }

    /// The floor as an integer, with exact series reported as `i64::MIN`.
    pub fn floor_or_min(&self) -> i64 {
        self.floor().unwrap_or(i64::MIN)
    }

    /// Upper exponent bound (`None` for exact zero).
    pub fn hi(&self) -> Option<i64> {
        if self.coeffs.is_empty() {
            None
        } else {
            Some(self.lo + self.coeffs.len() as i64 - 1)
        }
    }

    /// Lowest stored exponent.
    pub fn lo(&self) -> i64 {
        self.lo
    }

    pub fn is_zero(&self) -> bool {
        self.exact && self.coeffs.is_empty()
    }

    /// Coefficient of `t^e`, or `None` if it lies below the floor.
    pub fn coeff(&self, e: i64) -> Option<FqElem> {
        if e < self.lo {
            return if self.exact { Some(FqElem::ZERO) } else { None };
        }
        Some(
            self.coeffs
                .get((e - self.lo) as usize)
                .copied()
                .unwrap_or(FqElem::ZERO),
        )
    }

    /// Coefficient of `t^e`, failing with a precision error when unknown.
    pub fn coeff_checked(&self, e: i64, context: &str) -> Result<FqElem> {
        self.coeff(e)
            .ok_or_else(|| Error::precision(context, e, self.lo))
    }

    /// Known nonzero terms, highest exponent first.
    pub fn terms_desc(&self) -> impl Iterator<Item = (i64, FqElem)> + '_ {
        self.coeffs
            .iter()
            .enumerate()
            .rev()
            .filter(|(_, c)| !c.is_zero())
            .map(move |(i, &c)| (self.lo + i as i64, c))
    }

    pub fn ord(&self) -> Order {
        match self.terms_desc().next() {
            Some((e, _)) => Order::Exactly(e),
            None if self.exact => Order::NegInfinity,
            None => Order::Below(self.lo),
        }
    }

    pub fn add(&self, ctx: &FieldCtx, other: &Series) -> Series {
        self.combine(other, |a, b| ctx.add(a, b))
    }

    pub fn sub(&self, ctx: &FieldCtx, other: &Series) -> Series {
        self.combine(other, |a, b| ctx.sub(a, b))
    }

    fn combine(&self, other: &Series, op: impl Fn(FqElem, FqElem) -> FqElem) -> Series {
        let exact = self.exact && other.exact;
        let lo = match (self.floor(), other.floor()) {
            (Some(a), Some(b)) => max(a, b),
            (Some(a), None) | (None, Some(a)) => a,
            (None, None) => {
                let mut candidates = Vec::new();
                if !self.coeffs.is_empty() {
                    candidates.push(self.lo);
                }
                if !other.coeffs.is_empty() {
                    candidates.push(other.lo);
                }
                match candidates.into_iter().min() {
                    Some(l) => l,
                    None => return Series::zero(),
                }
            }
        };
        let hi = max(self.hi().unwrap_or(lo), other.hi().unwrap_or(lo)).max(lo);
        let coeffs = (lo..=hi)
            .map(|e| {
                op(
                    self.coeff(e).expect("inside window"),
                    other.coeff(e).expect("inside window"),
                )
            })
            .collect();
        Series::normalized(lo, coeffs, exact)
    }

    pub fn neg(&self, ctx: &FieldCtx) -> Series {
        Series {
            lo: self.lo,
            coeffs: self.coeffs.iter().map(|&c| ctx.neg(c)).collect(),
            exact: self.exact,
        }
    }

    pub fn scale(&self, ctx: &FieldCtx, c: FqElem) -> Series {
        if c.is_zero() {
            return Series::zero();
        }
        Series {
            lo: self.lo,
            coeffs: self.coeffs.iter().map(|&a| ctx.mul(a, c)).collect(),
            exact: self.exact,
        }
    }

    /// Multiplication by `t^k`.
    pub fn shift(&self, k: i64) -> Series {
        if self.is_zero() {
            return Series::zero();
        }
        Series {
            lo: self.lo + k,
            coeffs: self.coeffs.clone(),
            exact: self.exact,
        }
    }

    /// Product with precision propagation.
    ///
    /// An inexact factor with floor `lo_a` pollutes exponents below
    /// `lo_a + hi_b`; the result floor is the largest such bound over the
    /// inexact factors. An exact zero factor gives an exact zero.
    pub fn mul(&self, ctx: &FieldCtx, other: &Series) -> Result<Series> {
        if self.is_zero() || other.is_zero() {
            return Ok(Series::zero());
        }
        let (hi_a, hi_b) = (self.hi().unwrap(), other.hi().unwrap());
        let mut floor: Option<i64> = None;
        if let Some(la) = self.floor() {
            floor = Some(la + hi_b);
        }
        if let Some(lb) = other.floor() {
            floor = Some(floor.map_or(lb + hi_a, |f| max(f, lb + hi_a)));
        }
        let base = self.lo + other.lo;
        let mut prod = vec![FqElem::ZERO; self.coeffs.len() + other.coeffs.len() - 1];
        for (i, &a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, &b) in other.coeffs.iter().enumerate() {
                if !b.is_zero() {
                    prod[i + j] = ctx.add(prod[i + j], ctx.mul(a, b));
                }
            }
        }
        match floor {
            None => Ok(Series::normalized(base, prod, true)),
            Some(f) => {
                let hi = hi_a + hi_b;
                if f > hi + 1 {
                    return Err(Error::EmptyWindow(format!(
                        "product floor {f} lies above its bound {hi}"
                    )));
                }
                let kept = if f >= base {
                    let skip = (f - base) as usize;
                    if skip < prod.len() {
                        prod.split_off(skip)
                    } else {
                        Vec::new()
                    }
                } else {
                    let mut v = vec![FqElem::ZERO; (base - f) as usize];
                    v.extend(prod);
                    v
                };
                Ok(Series::normalized(f, kept, false))
            }
        }
    }

    pub fn mul_poly(&self, ctx: &FieldCtx, p: &Poly) -> Series {
        self.mul(ctx, &Series::from_poly(p))
            .expect("products with exact factors always have a window")
    }

    /// Forgets everything below `lo`.
    pub fn truncate(&self, lo: i64) -> Series {
        let new_lo = match self.floor() {
            Some(f) => max(f, lo),
            None => lo,
        };
        let hi = self.hi().unwrap_or(new_lo).max(new_lo);
        let coeffs = (new_lo..=hi)
            .map(|e| self.coeff(e).expect("inside window"))
            .collect();
        Series::normalized(new_lo, coeffs, false)
    }

    /// The coefficient of `t^-1`.
    pub fn residue(&self) -> Result<FqElem> {
        self.coeff_checked(-1, "residue")
    }

    /// `{alpha}`: drops every coefficient at a non-negative exponent.
    pub fn fractional_part(&self) -> Series {
        let coeffs = self
            .coeffs
            .iter()
            .enumerate()
            .map(|(i, &c)| if self.lo + i as i64 >= 0 { FqElem::ZERO } else { c })
            .collect();
        Series::normalized(self.lo, coeffs, self.exact)
    }

    /// The polynomial part `sum_{i >= 0} a_i t^i`.
    pub fn polynomial_part(&self) -> Result<Poly> {
        if !self.exact && self.lo > 0 {
            return Err(Error::precision("polynomial part", 0, self.lo));
        }
        let hi = self.hi().unwrap_or(-1);
        Ok(Poly::new(
            (0..=hi.max(-1))
                .filter(|&e| e >= 0)
                .map(|e| self.coeff(e).unwrap())
                .collect(),
        ))
    }

    /// Whether two series agree on every exponent both of them determine.
    pub fn agrees_with(&self, other: &Series) -> bool {
        let lo = max(self.floor_or_min(), other.floor_or_min());
        let lo = if lo == i64::MIN {
            self.lo.min(other.lo)
        } else {
            lo
        };
        let hi = max(self.hi().unwrap_or(lo), other.hi().unwrap_or(lo));
        (lo..=hi).all(|e| self.coeff(e) == other.coeff(e))
    }

    /// The highest negative exponent with a nonzero known coefficient: a
    /// certificate that the element is not in F_q[t].
    pub fn nonpolynomial_witness(&self) -> Option<i64> {
        self.terms_desc().map(|(e, _)| e).find(|&e| e < 0)
    }

    /// Membership in F_q[t]: decided for exact series; for inexact ones
    /// only the negative answer can be certified.
    pub fn is_polynomial(&self) -> Option<bool> {
        if self.nonpolynomial_witness().is_some() {
            Some(false)
        } else if self.exact {
            Some(true)
        } else {
            None
        }
    }

    /// Coefficient of `t^e` in `self * u` for a polynomial `u`, i.e.
    /// `sum_i u_i a_{e-i}`. Fails if a needed `a_{e-i}` is below the floor.
    pub fn coeff_times_poly(&self, ctx: &FieldCtx, u: &Poly, e: i64) -> Result<FqElem> {
        let mut acc = FqElem::ZERO;
        for (i, &ui) in u.coeffs().iter().enumerate() {
            if ui.is_zero() {
                continue;
            }
            let a = self.coeff_checked(e - i as i64, "coefficient of product")?;
            acc = ctx.add(acc, ctx.mul(ui, a));
        }
        Ok(acc)
    }
}
