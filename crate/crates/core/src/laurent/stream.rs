use std::fmt;
use std::sync::Arc;

use crate::error::{Error, Result};
use crate::ffield::{FieldCtx, FqElem};
use crate::laurent::Series;

/// A strictly increasing sequence of positive integers `g(1) < g(2) < ...`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum GapRule {
    /// `g(i) = (stride * i + offset)!`
    Factorial { stride: u64, offset: u64 },
    /// `g(i) = base^(i - 1)`
    Powers { base: u64 },
    /// `g(i) = scale * inner(i) + shift`
    Affine {
        scale: u64,
        shift: i64,
        inner: Arc<GapRule>,
    },
    /// Set union of the supports of several rules.
    Union(Vec<GapRule>),
}

impl Default for GapRule {
    /// `g(i) = (i + 1)!`
    fn default() -> Self {
        GapRule::Factorial {
            stride: 1,
            offset: 1,
        }
    }
}

impl GapRule {
    pub fn validate(&self) -> Result<()> {
        match self {
            GapRule::Factorial { stride, offset } => {
                if *stride == 0 || stride + offset < 2 {
                    return Err(Error::OutOfRange(
                        "factorial gaps need stride >= 1 and stride + offset >= 2".into(),
                    ));
                }
            }
            GapRule::Powers { base } => {
                if *base < 2 {
                    return Err(Error::OutOfRange("power gaps need base >= 2".into()));
                }
            }
            GapRule::Affine { scale, shift, inner } => {
                inner.validate()?;
                if *scale == 0 {
                    return Err(Error::OutOfRange("affine gaps need scale >= 1".into()));
                }
                let first = inner.gaps_up_to(u64::MAX / 4).first().copied().unwrap_or(1);
                if (*scale as i128) * first as i128 + (*shift as i128) < 1 {
                    return Err(Error::OutOfRange("affine gaps must stay positive".into()));
                }
            }
            GapRule::Union(parts) => {
                for part in parts {
                    part.validate()?;
                }
            }
        }
        Ok(())
    }

    /// Every `g(i) <= depth`, ascending.
    pub fn gaps_up_to(&self, depth: u64) -> Vec<u64> {
        match self {
            GapRule::Factorial { stride, offset } => {
                let mut out = Vec::new();
                for i in 1u64.. {
                    let n = stride * i + offset;
                    let mut f: u64 = 1;
                    let mut overflow = false;
                    for k in 2..=n {
                        match f.checked_mul(k) {
                            Some(v) if v <= depth => f = v,
                            _ => {
                                overflow = true;
                                break;
                            }
                        }
                    }
                    if overflow || f > depth {
                        break;
                    }
                    out.push(f);
                }
                out
            }
            GapRule::Powers { base } => {
                let mut out = Vec::new();
                let mut g: u64 = 1;
                while g <= depth {
                    out.push(g);
                    match g.checked_mul(*base) {
                        Some(v) => g = v,
                        None => break,
                    }
                }
                out
            }
            GapRule::Affine { scale, shift, inner } => {
                // scale * g + shift <= depth  <=>  g <= (depth - shift) / scale
                let inner_depth = (depth as i128 - *shift as i128).max(0) / *scale as i128;
                let inner_depth = inner_depth.min(u64::MAX as i128) as u64;
                inner
                    .gaps_up_to(inner_depth)
                    .into_iter()
                    .map(|g| (*scale as i128 * g as i128 + *shift as i128) as u64)
                    .filter(|&g| g >= 1 && g <= depth)
                    .collect()
            }
            GapRule::Union(parts) => {
                let mut all: Vec<u64> = parts.iter().flat_map(|r| r.gaps_up_to(depth)).collect();
                all.sort_unstable();
                all.dedup();
                all
            }
        }
    }
}

impl fmt::Display for GapRule {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            GapRule::Factorial { stride, offset } => write!(f, "fact({stride},{offset})"),
            GapRule::Powers { base } => write!(f, "pow({base})"),
            GapRule::Affine { scale, shift, inner } => write!(f, "aff({scale},{shift},{inner})"),
            GapRule::Union(parts) => {
                let parts: Vec<String> = parts.iter().map(|p| p.to_string()).collect();
                write!(f, "union({})", parts.join(","))
            }
        }
    }
}

/// The element `sum_{i >= 1} t^(-g(i))` for a gap rule `g`.
///
/// All coefficients are one and the gaps between consecutive exponents are
/// unbounded, so the coefficient sequence is never eventually periodic and
/// the element is irrational.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
#[derive(Default)]
pub struct IrrationalStream {
    rule: GapRule,
}


impl IrrationalStream {
    pub fn new(rule: GapRule) -> Result<Self> {
        rule.validate()?;
        Ok(IrrationalStream { rule })
    }

    pub fn rule(&self) -> &GapRule {
        &self.rule
    }

    /// Exponents `-g(i)` with `-g(i) >= lo`, highest first.
    pub fn support_above(&self, lo: i64) -> Vec<i64> {
        if lo > -1 {
            return Vec::new();
        }
        self.rule
            .gaps_up_to(lo.unsigned_abs())
            .into_iter()
            .map(|g| -(g as i64))
            .collect()
    }

    /// Exponent of the leading term `-g(1)`, or `None` if it does not fit
    /// in an `i64`.
    pub fn leading_exponent(&self) -> Option<i64> {
        self.rule
            .gaps_up_to(i64::MAX as u64)
            .first()
            .map(|&g| -(g as i64))
    }

    /// The truncation with floor `lo`: exact coefficients on `[lo, -1]`.
    pub fn truncate(&self, ctx: &FieldCtx, lo: i64) -> Series {
        let terms: Vec<(i64, FqElem)> = self
            .support_above(lo)
            .into_iter()
            .map(|e| (e, FqElem::ONE))
            .collect();
        Series::windowed_from_terms(ctx, &terms, lo).expect("support lies above the floor")
    }
}

impl fmt::Display for IrrationalStream {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "irr[{}]", self.rule)
    }
}
