use std::cmp::Ordering;
use std::fmt;

use crate::error::Result;
use crate::ffield::{FieldCtx, FqElem};
use crate::laurent::{Coeff, Order, Poly, RatFn, Series};

use super::{count_range, poly_from_number};

/// `ord(g alpha - a)`, as far as it is determined.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Gap {
    /// `g alpha` is a polynomial.
    NegInfinity,
    Exactly(i64),
    /// Every known coefficient vanishes: the order is below this bound.
    Below(i64),
}

impl Gap {
    /// The least upper bound the gap is known to satisfy.
    fn bound(self) -> i64 {
        match self {
            Gap::NegInfinity => i64::MIN,
            Gap::Exactly(e) => e,
            Gap::Below(b) => b - 1,
        }
    }
}

impl fmt::Display for Gap {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Gap::NegInfinity => write!(f, "-inf"),
            Gap::Exactly(e) => write!(f, "{e}"),
            Gap::Below(b) => write!(f, "<{b}"),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Approximation {
    pub g: Poly,
    pub a: Poly,
    pub gap: Gap,
}

fn gap_of(ctx: &FieldCtx, alpha: &Coeff, g: &Poly, floor: i64) -> Result<(Poly, Gap)> {
    if let Coeff::Rational(r) = alpha {
        let prod = r.mul_poly(ctx, g);
        let (a, rem) = prod.num().div_rem(ctx, prod.den())?;
        let gap = match RatFn::new(ctx, rem, prod.den().clone())?.ord() {
            None => Gap::NegInfinity,
            Some(e) => Gap::Exactly(e),
        };
        return Ok((a, gap));
    }
    let s: Series = alpha.mul_poly(ctx, g).to_series(ctx, floor);
    let a = s.polynomial_part()?;
    let gap = match s.fractional_part().ord() {
        Order::NegInfinity => Gap::NegInfinity,
        Order::Exactly(e) => Gap::Exactly(e),
        Order::Below(b) => Gap::Below(b),
    };
    Ok((a, gap))
}

/// Exhaustive search over monic `g` with `ord g <= big_g` for the least
/// `ord(g alpha - a)`, where `a` is the polynomial part of `g alpha`.
///
/// Candidates are ranked by the best certified upper bound on the gap, then
/// by `ord g`, then by the coefficient vector of `g`. Rational `alpha` is
/// handled exactly; other coefficients are expanded down to `floor`.
pub fn best_rational_approx(ctx: &FieldCtx, alpha: &Coeff, big_g: u32, floor: i64) -> Result<Approximation> {
    let mut best: Option<Approximation> = None;
    for k in 0..=big_g {
        let lower = count_range(ctx, k)?;
        for n in 0..lower {
            let g = poly_from_number(ctx, n).add(ctx, &Poly::monomial(FqElem::ONE, k as usize));
            let (a, gap) = gap_of(ctx, alpha, &g, floor)?;
            let cand = Approximation { g, a, gap };
            let better = match &best {
                None => true,
                Some(b) => match cand.gap.bound().cmp(&b.gap.bound()) {
                    Ordering::Less => true,
                    Ordering::Greater => false,
                    Ordering::Equal => (cand.g.deg(), cand.g.coeffs()) < (b.g.deg(), b.g.coeffs()),
                },
            };
            if better {
                best = Some(cand);
            }
        }
    }
    Ok(best.expect("g = 1 is always a candidate"))
}
