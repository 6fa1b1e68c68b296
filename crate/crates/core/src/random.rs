//! Seeded generators for randomized checks. Every generator draws from an
//! explicit RNG, so runs are reproducible from the seed.

use std::collections::BTreeSet;

use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::addpoly::SparsePoly;
use crate::ffield::{FieldCtx, FqElem};
use crate::laurent::{Coeff, GapRule, IrrationalStream, Poly, RatFn, Series};

pub type SeededRng = ChaCha8Rng;

pub fn rng(seed: u64) -> SeededRng {
    ChaCha8Rng::seed_from_u64(seed)
}

pub fn elem(ctx: &FieldCtx, rng: &mut impl Rng) -> FqElem {
    FqElem::from_index(rng.gen_range(0..ctx.q() as usize))
}

pub fn nonzero_elem(ctx: &FieldCtx, rng: &mut impl Rng) -> FqElem {
    FqElem::from_index(rng.gen_range(1..ctx.q() as usize))
}

/// A polynomial with `len` uniform coefficients (degree below `len`).
pub fn poly(ctx: &FieldCtx, rng: &mut impl Rng, len: usize) -> Poly {
    Poly::new((0..len).map(|_| elem(ctx, rng)).collect())
}

pub fn monic(ctx: &FieldCtx, rng: &mut impl Rng, deg: usize) -> Poly {
    poly(ctx, rng, deg).add(ctx, &Poly::monomial(FqElem::ONE, deg))
}

/// Uniform coefficients on `[lo, hi]`; exact or known only down to `lo`.
pub fn series(ctx: &FieldCtx, rng: &mut impl Rng, lo: i64, hi: i64, exact: bool) -> Series {
    let coeffs = (lo..=hi).map(|_| elem(ctx, rng)).collect();
    Series::from_window(lo, coeffs, exact)
}

/// A rational function with numerator degree below 3 and a random monic
/// denominator of degree 1 to 3.
pub fn ratfn(ctx: &FieldCtx, rng: &mut impl Rng) -> RatFn {
    let num = poly(ctx, rng, 3);
    let den_deg = rng.gen_range(1..=3);
    RatFn::new(ctx, num, monic(ctx, rng, den_deg)).expect("monic denominator")
}

/// A random gap rule with super-linear growth.
pub fn gap_rule(rng: &mut impl Rng) -> GapRule {
    if rng.gen_bool(0.5) {
        GapRule::Factorial {
            stride: rng.gen_range(1..=3),
            offset: rng.gen_range(1..=3),
        }
    } else {
        GapRule::Powers {
            base: rng.gen_range(2..=3),
        }
    }
}

/// Rational, or a rational plus a constant multiple of an irrational stream.
pub fn mixed_coeff(ctx: &FieldCtx, rng: &mut impl Rng) -> Coeff {
    let r = Coeff::Rational(ratfn(ctx, rng));
    if rng.gen_bool(0.5) {
        return r;
    }
    let stream = IrrationalStream::new(gap_rule(rng)).expect("valid rule");
    let c = nonzero_elem(ctx, rng);
    let shift = rng.gen_range(0..=2usize);
    let mult = Coeff::Rational(RatFn::from_poly(Poly::monomial(c, shift)));
    r.add(ctx, &Coeff::from(stream).mul(ctx, &mult, 0).expect("rational factor"))
}

/// A polynomial with `terms` random exponents in `1..=max_r`.
pub fn sparse<R: Rng>(
    ctx: &FieldCtx,
    rng: &mut R,
    max_r: u64,
    terms: usize,
    mut coeff: impl FnMut(&mut R) -> Coeff,
) -> SparsePoly {
    let mut f = SparsePoly::zero();
    for _ in 0..terms {
        let r = rng.gen_range(1..=max_r);
        let c = coeff(rng);
        f.add_term(ctx, r, c);
    }
    f
}

/// `size` distinct integers in `1..=max`, optionally all coprime to `p`.
pub fn int_set(rng: &mut impl Rng, max: u64, size: usize, coprime_to: Option<u64>) -> BTreeSet<u64> {
    let mut out = BTreeSet::new();
    let mut attempts = 0;
    while out.len() < size && attempts < 100 * size + 100 {
        attempts += 1;
        let k = rng.gen_range(1..=max);
        if coprime_to.is_none_or(|p| k % p != 0) {
            out.insert(k);
        }
    }
    out
}
