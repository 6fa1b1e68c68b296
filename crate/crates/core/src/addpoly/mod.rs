//! Polynomials in `x` with coefficients in K_infinity, additive polynomials,
//! the decomposition into additive parts and the twist-reduction.

mod shadow;

pub use shadow::{
    ktilde, shadow, candidate_report, coprime_report, thm12_candidates, CandidateReport,
    CoprimeReport,
};

use std::collections::BTreeMap;

use crate::ffield::FieldCtx;
use crate::laurent::{psi_pow, Coeff, Poly, Series};

/// `f(x) = sum_r alpha_r x^r`, with nonzero stored coefficients.
/// The key `0` holds the constant term.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct SparsePoly {
    terms: BTreeMap<u64, Coeff>,
}

impl SparsePoly {
    pub fn zero() -> Self {
        SparsePoly::default()
    }

    pub fn from_terms(ctx: &FieldCtx, terms: impl IntoIterator<Item = (u64, Coeff)>) -> Self {
        let mut f = SparsePoly::zero();
        for (r, c) in terms {
            f.add_term(ctx, r, c);
        }
        f
    }

    /// `c * x^r`.
    pub fn monomial(r: u64, c: Coeff) -> Self {
        let mut terms = BTreeMap::new();
        if !c.is_zero() {
            terms.insert(r, c);
        }
        SparsePoly { terms }
    }

    pub fn add_term(&mut self, ctx: &FieldCtx, r: u64, c: Coeff) {
        let sum = match self.terms.remove(&r) {
            Some(old) => old.add(ctx, &c),
            None => c,
        };
        if !sum.is_zero() {
            self.terms.insert(r, sum);
        }
    }

    pub fn terms(&self) -> &BTreeMap<u64, Coeff> {
        &self.terms
    }

    pub fn coeff(&self, r: u64) -> Option<&Coeff> {
        self.terms.get(&r)
    }

    /// `f(0)`.
    pub fn constant(&self) -> Coeff {
        self.terms.get(&0).cloned().unwrap_or_else(Coeff::zero)
    }

    /// The positive exponents carrying a coefficient.
    pub fn support(&self) -> Vec<u64> {
        self.terms.keys().copied().filter(|&r| r > 0).collect()
    }

    pub fn degree(&self) -> Option<u64> {
        self.terms.keys().next_back().copied()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn add(&self, ctx: &FieldCtx, other: &SparsePoly) -> SparsePoly {
        let mut out = self.clone();
        for (&r, c) in &other.terms {
            out.add_term(ctx, r, c.clone());
        }
        out
    }

    /// `h * f`, coefficient-wise.
    pub fn mul_poly(&self, ctx: &FieldCtx, h: &Poly) -> SparsePoly {
        SparsePoly::from_terms(
            ctx,
            self.terms.iter().map(|(&r, c)| (r, c.mul_poly(ctx, h))),
        )
    }
}

/// `A(x) = sum_nu alpha_nu x^(p^nu)`.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct AdditivePoly {
    terms: BTreeMap<u32, Coeff>,
}

impl AdditivePoly {
    pub fn from_terms(ctx: &FieldCtx, terms: impl IntoIterator<Item = (u32, Coeff)>) -> Self {
        let mut out: BTreeMap<u32, Coeff> = BTreeMap::new();
        for (nu, c) in terms {
            let sum = match out.remove(&nu) {
                Some(old) => old.add(ctx, &c),
                None => c,
            };
            if !sum.is_zero() {
                out.insert(nu, sum);
            }
        }
        AdditivePoly { terms: out }
    }

    /// Reads an additive polynomial off a sparse one; `None` unless every
    /// exponent is a power of `p`.
    pub fn from_sparse(ctx: &FieldCtx, f: &SparsePoly) -> Option<Self> {
        let p = ctx.p() as u64;
        let mut terms = Vec::new();
        for (&r, c) in f.terms() {
            terms.push((log_p(r, p)?, c.clone()));
        }
        Some(AdditivePoly::from_terms(ctx, terms))
    }

    /// `nu -> alpha_nu`.
    pub fn terms(&self) -> &BTreeMap<u32, Coeff> {
        &self.terms
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    /// `A(x^r)` as a sparse polynomial.
    pub fn compose_power(&self, ctx: &FieldCtx, r: u64) -> SparsePoly {
        let p = ctx.p() as u64;
        SparsePoly::from_terms(
            ctx,
            self.terms
                .iter()
                .map(|(&nu, c)| (r * p.pow(nu), c.clone())),
        )
    }

    pub fn to_sparse(&self, ctx: &FieldCtx) -> SparsePoly {
        self.compose_power(ctx, 1)
    }

    /// `h * A`.
    pub fn mul_poly(&self, ctx: &FieldCtx, h: &Poly) -> AdditivePoly {
        AdditivePoly::from_terms(ctx, self.terms.iter().map(|(&nu, c)| (nu, c.mul_poly(ctx, h))))
    }
}

/// `f(x) = f(0) + sum_r A_r(x^r)` with every `r` coprime to `p`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Decomposition {
    pub constant: Coeff,
    pub parts: BTreeMap<u64, AdditivePoly>,
}

/// `v_p(n)` and `n / p^(v_p(n))` for `n >= 1`.
fn split_p_power(mut n: u64, p: u64) -> (u32, u64) {
    let mut v = 0;
    while n.is_multiple_of(p) {
        n /= p;
        v += 1;
    }
    (v, n)
}

/// `nu` with `n = p^nu`.
fn log_p(n: u64, p: u64) -> Option<u32> {
    if n == 0 {
        return None;
    }
    let (v, rest) = split_p_power(n, p);
    (rest == 1).then_some(v)
}

/// Groups `alpha_i x^i` by `r = i / p^(v_p(i))`: the term becomes
/// `alpha_i y^(p^nu)` in `A_r(y)`, with `y = x^r`.
pub fn decompose(ctx: &FieldCtx, f: &SparsePoly) -> Decomposition {
    let p = ctx.p() as u64;
    let mut grouped: BTreeMap<u64, Vec<(u32, Coeff)>> = BTreeMap::new();
    for (&i, c) in f.terms() {
        if i == 0 {
            continue;
        }
        let (nu, r) = split_p_power(i, p);
        grouped.entry(r).or_default().push((nu, c.clone()));
    }
    Decomposition {
        constant: f.constant(),
        parts: grouped
            .into_iter()
            .map(|(r, terms)| (r, AdditivePoly::from_terms(ctx, terms)))
            .collect(),
    }
}

pub fn recompose(ctx: &FieldCtx, d: &Decomposition) -> SparsePoly {
    let mut f = SparsePoly::monomial(0, d.constant.clone());
    for (&r, a) in &d.parts {
        f = f.add(ctx, &a.compose_power(ctx, r));
    }
    f
}

/// `tau(A) = sum_nu psi^nu(alpha_nu)`, exact on exponents `>= floor`
/// wherever the coefficients can be expanded that far.
///
/// `psi^nu` sends exponent `p^nu j + p^nu - 1` to `j`, so `alpha_nu` is
/// expanded down to `p^nu (floor + 1) - 1`.
pub fn tau(ctx: &FieldCtx, a: &AdditivePoly, floor: i64) -> Series {
    let p = ctx.p() as i64;
    let mut acc = Series::zero();
    for (&nu, c) in a.terms() {
        let scale = p.pow(nu);
        let s = c.to_series(ctx, scale * (floor + 1) - 1);
        acc = acc.add(ctx, &psi_pow(ctx, nu, &s));
    }
    acc
}

/// `g(x) = f(0) + sum_r tau(A_r) x^r`, which has `e(f(u)) = e(g(u))` for
/// every `u` in F_q[t]. The coefficient of `x^r` is exact down to `floor`
/// where the input allows it.
pub fn reduce(ctx: &FieldCtx, f: &SparsePoly, floor: i64) -> SparsePoly {
    let d = decompose(ctx, f);
    let mut g = SparsePoly::monomial(0, d.constant.clone());
    for (&r, a) in &d.parts {
        let t = tau(ctx, a, floor);
        // a single linear term keeps its symbolic coefficient
        let coeff = match a.terms().get(&0) {
            Some(c) if a.terms().len() == 1 => c.clone(),
            _ => Coeff::Window(t),
        };
        g.add_term(ctx, r, coeff);
    }
    g
}

/// Whether every exponent of `f` is a power of `p`.
pub fn is_additive(ctx: &FieldCtx, f: &SparsePoly) -> bool {
    let p = ctx.p() as u64;
    f.terms().keys().all(|&r| log_p(r, p).is_some())
}
