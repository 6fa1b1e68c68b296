//! The Frobenius-twisted coefficient extractions `psi_l`, the twist
//! `psi = psi_{p-1}` and the splitting bijection `Psi`.
//!
//! `psi_l(sum a_i t^i) = sum_j a_{pj+l}^(1/p) t^j`, for any integer `l`.
//! For `l` outside `[0, p-1]` the same formula is used verbatim, which gives
//! `psi_{l-p} = t * psi_l`.

use crate::error::{Error, Result};
use crate::ffield::{FieldCtx, FqElem};
use crate::laurent::series::ceil_div;
use crate::laurent::Series;

/// `psi_l(alpha)`. The output floor is the least `j` with `pj + l >= lo`.
pub fn psi_l(ctx: &FieldCtx, l: i64, alpha: &Series) -> Series {
    if alpha.is_zero() {
        return Series::zero();
    }
    let p = ctx.p() as i64;
    let hi = alpha.hi().expect("nonzero series has a bound");
    let lo = alpha.lo();
    let j_lo = ceil_div(lo - l, p);
    let j_hi = (hi - l).div_euclid(p).max(j_lo);
    let coeffs: Vec<FqElem> = (j_lo..=j_hi)
        .map(|j| {
            let a = alpha.coeff(p * j + l).expect("index inside the window");
            ctx.frobenius_inverse(a)
        })
        .collect();
    Series::from_window(j_lo, coeffs, alpha.is_exact())
}

/// `psi = psi_{p-1}`, the map with `e(alpha xi^p) = e(psi(alpha) xi)`.
pub fn psi(ctx: &FieldCtx, alpha: &Series) -> Series {
    psi_l(ctx, ctx.p() as i64 - 1, alpha)
}

/// The `nu`-fold composition `psi^nu` (`psi^0` is the identity).
pub fn psi_pow(ctx: &FieldCtx, nu: u32, alpha: &Series) -> Series {
    let mut out = alpha.clone();
    for _ in 0..nu {
        out = psi(ctx, &out);
    }
    out
}

/// `Psi(alpha) = (psi_{p-1}(alpha), ..., psi_0(alpha))`.
pub fn split(ctx: &FieldCtx, alpha: &Series) -> Vec<Series> {
    let p = ctx.p() as i64;
    (0..p).map(|slot| psi_l(ctx, p - 1 - slot, alpha)).collect()
}

/// The inverse of [`split`]: the unique `beta` with
/// `psi_{p-1-i}(beta) = parts[i]` on the determined window.
///
/// The coefficient of `beta` at `pj + (p-1-i)` is `parts[i]_j^p`. Each
/// inexact part leaves one residue class undetermined below its floor, so the
/// floor of `beta` is the least exponent above every such gap.
pub fn unsplit(ctx: &FieldCtx, parts: &[Series]) -> Result<Series> {
    let p = ctx.p() as i64;
    if parts.len() != p as usize {
        return Err(Error::OutOfRange(format!(
            "unsplit expects {p} parts, got {}",
            parts.len()
        )));
    }
    let residue = |slot: usize| p - 1 - slot as i64;
    let floor = parts
        .iter()
        .enumerate()
        .filter_map(|(slot, s)| s.floor().map(|f| p * (f - 1) + residue(slot) + 1))
        .max();
    let hi = parts
        .iter()
        .enumerate()
        .filter_map(|(slot, s)| s.hi().map(|h| p * h + residue(slot)))
        .max();
    let lowest_exact = parts
        .iter()
        .enumerate()
        .filter(|(_, s)| s.is_exact() && !s.is_zero())
        .map(|(slot, s)| p * s.lo() + residue(slot))
        .min();
    let lo = match (floor, lowest_exact) {
        (Some(f), _) => f,
        (None, Some(l)) => l,
        (None, None) => return Ok(Series::zero()),
    };
    let hi = hi.unwrap_or(lo).max(lo);
    let coeffs = (lo..=hi)
        .map(|e| {
            let r = e.rem_euclid(p);
            let j = (e - r) / p;
            let slot = (p - 1 - r) as usize;
            let c = parts[slot].coeff(j).expect("index inside the window");
            ctx.frobenius(c)
        })
        .collect();
    Ok(Series::from_window(lo, coeffs, floor.is_none()))
}
