//! Coefficients of polynomials in `x`: elements of K_infinity with a known
//! provenance and an on-demand expansion to any precision floor.

use crate::error::Result;
use crate::ffield::{FieldCtx, FqElem};
use crate::laurent::{IrrationalStream, Poly, RatFn, Series};

/// What is certified about an element's rationality.
#[derive(Clone, Copy, Debug, PartialEq, Eq, serde::Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Provenance {
    Rational,
    Irrational,
    Unknown,
}

/// `rational + sum_k mult_k * stream_k`, expanded lazily.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Lazy {
    rational: RatFn,
    streams: Vec<(RatFn, IrrationalStream)>,
}

impl Lazy {
    pub fn rational(&self) -> &RatFn {
        &self.rational
    }

    pub fn streams(&self) -> &[(RatFn, IrrationalStream)] {
        &self.streams
    }

    fn normalized(ctx: &FieldCtx, rational: RatFn, streams: Vec<(RatFn, IrrationalStream)>) -> Coeff {
        let mut merged: Vec<(RatFn, IrrationalStream)> = Vec::new();
        for (mult, stream) in streams {
            match merged.iter_mut().find(|(_, s)| *s == stream) {
                Some((m, _)) => *m = m.add(ctx, &mult),
                None => merged.push((mult, stream)),
            }
        }
        merged.retain(|(m, _)| !m.is_zero());
        if merged.is_empty() {
            Coeff::Rational(rational)
        } else {
            Coeff::Lazy(Lazy {
                rational,
                streams: merged,
            })
        }
    }
}

/// A coefficient `alpha` in K_infinity.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum Coeff {
    /// An element of K, expandable to any depth.
    Rational(RatFn),
    /// A fixed truncation; only its window is known.
    Window(Series),
    /// Rational combination of irrational streams, expandable to any depth.
    Lazy(Lazy),
}

impl From<RatFn> for Coeff {
    fn from(r: RatFn) -> Self {
        Coeff::Rational(r)
    }
}

impl From<Series> for Coeff {
    fn from(s: Series) -> Self {
        Coeff::Window(s)
    }
}

impl From<IrrationalStream> for Coeff {
    fn from(s: IrrationalStream) -> Self {
        Coeff::Lazy(Lazy {
            rational: RatFn::zero(),
            streams: vec![(RatFn::one(), s)],
        })
    }
}

impl Coeff {
    pub fn zero() -> Self {
        Coeff::Rational(RatFn::zero())
    }

    pub fn one() -> Self {
        Coeff::Rational(RatFn::one())
    }

    pub fn constant(c: FqElem) -> Self {
        Coeff::Rational(RatFn::constant(c))
    }

    /// Exactly zero. A window of zeros is not certified zero.
    pub fn is_zero(&self) -> bool {
        match self {
            Coeff::Rational(r) => r.is_zero(),
            Coeff::Window(s) => s.is_zero(),
            Coeff::Lazy(_) => false,
        }
    }

    pub fn provenance(&self) -> Provenance {
        match self {
            Coeff::Rational(_) => Provenance::Rational,
            Coeff::Window(s) if s.is_exact() => Provenance::Rational,
            Coeff::Window(_) => Provenance::Unknown,
            // A nonzero rational multiple of one irrational plus a rational
            // is irrational; independence of several streams is not certified.
            Coeff::Lazy(l) if l.streams.len() == 1 => Provenance::Irrational,
            Coeff::Lazy(_) => Provenance::Unknown,
        }
    }

    /// Certified membership in F_q[t]: `Some(true)`/`Some(false)` when
    /// decided, `None` when the representation cannot tell.
    pub fn is_polynomial(&self) -> Option<bool> {
        match self {
            Coeff::Rational(r) => Some(r.is_polynomial()),
            Coeff::Window(s) => s.is_polynomial(),
            Coeff::Lazy(_) => match self.provenance() {
                Provenance::Irrational => Some(false),
                _ => None,
            },
        }
    }

    /// An upper bound for the order (`None` for zero).
    pub fn ord_upper(&self) -> Option<i64> {
        match self {
            Coeff::Rational(r) => r.ord(),
            Coeff::Window(s) => s.hi(),
            Coeff::Lazy(l) => {
                let parts = l.streams.iter().filter_map(|(m, s)| Some(m.ord()? + s.leading_exponent()?));
                parts.chain(l.rational.ord()).max()
            }
        }
    }

    /// A series exact on every exponent `>= floor`.
    ///
    /// Windowed coefficients are returned unchanged; callers reading below
    /// their floor get a precision error from the series itself.
    pub fn to_series(&self, ctx: &FieldCtx, floor: i64) -> Series {
        match self {
            Coeff::Rational(r) => r.to_series(ctx, floor),
            Coeff::Window(s) => s.clone(),
            Coeff::Lazy(l) => {
                let mut acc = l.rational.to_series(ctx, floor);
                for (mult, stream) in &l.streams {
                    acc = acc.add(ctx, &scaled_stream(ctx, mult, stream, floor));
                }
                acc.truncate(floor)
            }
        }
    }

    pub fn neg(&self, ctx: &FieldCtx) -> Coeff {
        match self {
            Coeff::Rational(r) => Coeff::Rational(r.neg(ctx)),
            Coeff::Window(s) => Coeff::Window(s.neg(ctx)),
            Coeff::Lazy(l) => Coeff::Lazy(Lazy {
                rational: l.rational.neg(ctx),
                streams: l.streams.iter().map(|(m, s)| (m.neg(ctx), s.clone())).collect(),
            }),
        }
    }

    pub fn add(&self, ctx: &FieldCtx, other: &Coeff) -> Coeff {
        match (self, other) {
            (Coeff::Rational(a), Coeff::Rational(b)) => Coeff::Rational(a.add(ctx, b)),
            (Coeff::Window(s), x) | (x, Coeff::Window(s)) => {
                let floor = s.floor_or_min();
                let floor = if floor == i64::MIN { s.lo() } else { floor };
                let xs = x.to_series(ctx, floor);
                if s.is_exact() && xs.is_exact() {
                    return Coeff::Window(s.add(ctx, &xs));
                }
                Coeff::Window(s.add(ctx, &xs.truncate(floor)))
            }
            (a, b) => {
                let (ra, sa) = a.lazy_parts();
                let (rb, sb) = b.lazy_parts();
                let streams = sa.into_iter().chain(sb).collect();
                Lazy::normalized(ctx, ra.add(ctx, &rb), streams)
            }
        }
    }

    pub fn sub(&self, ctx: &FieldCtx, other: &Coeff) -> Coeff {
        self.add(ctx, &other.neg(ctx))
    }

    /// Product. Two irrational factors multiply only through their
    /// truncations, so the result is then a window of the given depth.
    pub fn mul(&self, ctx: &FieldCtx, other: &Coeff, depth: i64) -> Result<Coeff> {
        match (self, other) {
            (Coeff::Rational(a), Coeff::Rational(b)) => Ok(Coeff::Rational(a.mul(ctx, b))),
            (Coeff::Rational(r), Coeff::Lazy(l)) | (Coeff::Lazy(l), Coeff::Rational(r)) => {
                let streams = l.streams.iter().map(|(m, s)| (m.mul(ctx, r), s.clone())).collect();
                Ok(Lazy::normalized(ctx, l.rational.mul(ctx, r), streams))
            }
            (Coeff::Window(s), x) | (x, Coeff::Window(s)) => {
                if s.is_zero() || x.is_zero() {
                    return Ok(Coeff::zero());
                }
                let Some(hi_s) = s.hi() else {
                    return Ok(Coeff::zero());
                };
                let hx = x.ord_upper().unwrap_or(0);
                let xs = if s.is_exact() {
                    x.to_series(ctx, depth - hi_s)
                } else {
                    x.to_series(ctx, s.lo() + hx - hi_s)
                };
                Ok(Coeff::Window(s.mul(ctx, &xs)?))
            }
            (a, b) => {
                let hb = b.ord_upper().unwrap_or(0);
                let ha = a.ord_upper().unwrap_or(0);
                let sa = a.to_series(ctx, depth - hb);
                let sb = b.to_series(ctx, depth - ha);
                Ok(Coeff::Window(sa.mul(ctx, &sb)?.truncate(depth)))
            }
        }
    }

    /// `h * alpha` for a polynomial `h`.
    pub fn mul_poly(&self, ctx: &FieldCtx, h: &Poly) -> Coeff {
        let r = Coeff::Rational(RatFn::from_poly(h.clone()));
        self.mul(ctx, &r, 0)
            .expect("a polynomial factor never empties a window")
    }

    pub fn scale(&self, ctx: &FieldCtx, c: FqElem) -> Coeff {
        self.mul_poly(ctx, &Poly::constant(c))
    }

    fn lazy_parts(&self) -> (RatFn, Vec<(RatFn, IrrationalStream)>) {
        match self {
            Coeff::Rational(r) => (r.clone(), Vec::new()),
            Coeff::Lazy(l) => (l.rational.clone(), l.streams.clone()),
            Coeff::Window(_) => unreachable!("windows are handled before"),
        }
    }
}

/// `mult * stream`, exact on exponents `>= floor`.
fn scaled_stream(ctx: &FieldCtx, mult: &RatFn, stream: &IrrationalStream, floor: i64) -> Series {
    let Some(ord_m) = mult.ord() else {
        return Series::zero();
    };
    let xi = stream.truncate(ctx, floor - ord_m);
    let hi_xi = xi.hi().expect("window contains its floor");
    if ord_m + hi_xi < floor {
        return Series::from_window(floor, Vec::new(), false);
    }
    let m = mult.to_series(ctx, floor - hi_xi);
    m.mul(ctx, &xi)
        .expect("window contains its floor")
        .truncate(floor)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn lazy_expansion_matches_direct_truncation() {
        let ctx = FieldCtx::prime(3).unwrap();
        let xi = IrrationalStream::default();
        let c = Coeff::from(xi.clone()).mul_poly(&ctx, &Poly::t());
        let s = c.to_series(&ctx, -30);
        assert_eq!(s.floor(), Some(-30));
        let direct = xi.truncate(&ctx, -31).shift(1);
        assert!(s.agrees_with(&direct));
        assert_eq!(s.coeff(-1), Some(FqElem::ONE));
        assert_eq!(s.coeff(-5), Some(FqElem::ONE));
        assert_eq!(c.provenance(), Provenance::Irrational);
    }

    #[test]
    fn streams_cancel() {
        let ctx = FieldCtx::prime(2).unwrap();
        let xi = Coeff::from(IrrationalStream::default());
        let z = xi.add(&ctx, &xi);
        assert!(z.is_zero());
        assert_eq!(z.provenance(), Provenance::Rational);
    }

    #[test]
    fn rational_division_of_stream() {
        let ctx = FieldCtx::prime(2).unwrap();
        // (1/(t+1)) * xi, checked against a deep product of truncations.
        let den = Poly::new(vec![FqElem::ONE, FqElem::ONE]);
        let r = RatFn::new(&ctx, Poly::one(), den).unwrap();
        let c = Coeff::from(IrrationalStream::default()).mul(&ctx, &Coeff::Rational(r.clone()), 0).unwrap();
        let s = c.to_series(&ctx, -20);
        let deep = r
            .to_series(&ctx, -60)
            .mul(&ctx, &IrrationalStream::default().truncate(&ctx, -60))
            .unwrap();
        assert!(s.agrees_with(&deep));
        assert_eq!(s.floor(), Some(-20));
    }

    #[test]
    fn window_plus_rational() {
        let ctx = FieldCtx::prime(2).unwrap();
        let w = Series::windowed_from_terms(&ctx, &[(-1, FqElem::ONE)], -5).unwrap();
        let sum = Coeff::Window(w).add(&ctx, &Coeff::Rational(RatFn::monomial(FqElem::ONE, -2)));
        let Coeff::Window(s) = sum else { panic!() };
        assert_eq!(s.floor(), Some(-5));
        assert_eq!(s.coeff(-2), Some(FqElem::ONE));
        assert_eq!(s.coeff(-1), Some(FqElem::ONE));
    }
}
