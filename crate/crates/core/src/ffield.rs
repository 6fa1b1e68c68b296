//! Arithmetic in the finite field F_q = F_p[w]/(modulus), q = p^m.
//!
//! Elements are stored as a packed base-p integer whose digits are the
//! coordinates in the basis {1, w, ..., w^(m-1)}. All operations go through
//! precomputed tables held by [`FieldCtx`], so every field is limited to
//! `q <= MAX_ORDER`.

use std::fmt;
use std::ops::{Add, Neg, Sub};

use serde::{Serialize, Serializer};

use crate::error::{Error, Result};

/// Largest field order supported by the table-driven arithmetic.
pub const MAX_ORDER: u32 = 1024;

/// An element of F_q, as the packed integer `sum_i coords[i] * p^i`.
///
/// The packed order is the enumeration order used everywhere an iteration
/// over F_q happens: `0, 1, ..., p-1, w, w+1, ...`.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct FqElem(u16);

impl FqElem {
    pub const ZERO: FqElem = FqElem(0);
    pub const ONE: FqElem = FqElem(1);

    /// The element with the given packed index. The caller guarantees `index < q`.
    pub const fn from_index(index: usize) -> Self {
        FqElem(index as u16)
    }

    pub const fn index(self) -> usize {
        self.0 as usize
    }

    pub const fn is_zero(self) -> bool {
        self.0 == 0
    }
}

/// A p-th root of unity `exp(2 pi i k / p)`, stored by its exponent `k` in Z/p.
///
/// Adding two exponents multiplies the corresponding character values, so
/// exponential sums stay exact.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct CharExp {
    k: u16,
    p: u16,
}

impl CharExp {
    pub fn new(k: u32, p: u32) -> Self {
        CharExp {
            k: (k % p) as u16,
            p: p as u16,
        }
    }

    pub fn zero(p: u32) -> Self {
        CharExp::new(0, p)
    }

    pub fn k(self) -> u32 {
        self.k as u32
    }

    pub fn p(self) -> u32 {
        self.p as u32
    }

    pub fn is_trivial(self) -> bool {
        self.k == 0
    }

    /// The complex value `(cos, sin)` of the root of unity, for reporting only.
    pub fn to_complex(self) -> (f64, f64) {
        let theta = 2.0 * std::f64::consts::PI * self.k as f64 / self.p as f64;
        (theta.cos(), theta.sin())
    }
}

impl Add for CharExp {
    type Output = CharExp;

    fn add(self, rhs: CharExp) -> CharExp {
        debug_assert_eq!(self.p, rhs.p, "mixing characters of different primes");
        CharExp {
            k: ((self.k as u32 + rhs.k as u32) % self.p as u32) as u16,
            p: self.p,
        }
    }
}

impl Neg for CharExp {
    type Output = CharExp;

    fn neg(self) -> CharExp {
        CharExp {
            k: ((self.p - self.k) % self.p),
            p: self.p,
        }
    }
}

impl Sub for CharExp {
    type Output = CharExp;

    fn sub(self, rhs: CharExp) -> CharExp {
        self + (-rhs)
    }
}

impl Serialize for CharExp {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        serializer.serialize_u32(self.k as u32)
    }
}

/// The field F_q together with its lookup tables.
///
/// Immutable after construction; share it freely (`&FieldCtx` is `Sync`).
#[derive(Clone)]
pub struct FieldCtx {
    p: u32,
    m: u32,
    q: u32,
    /// Monic modulus over F_p, low degree first, length m + 1.
    modulus: Vec<u32>,
    symbol: char,
    add: Vec<u16>,
    mul: Vec<u16>,
    neg: Vec<u16>,
    inv: Vec<u16>,
    frob: Vec<u16>,
    frob_inv: Vec<u16>,
    trace: Vec<u16>,
}

impl fmt::Debug for FieldCtx {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "FieldCtx({})", self.spec())
    }
}

impl PartialEq for FieldCtx {
    fn eq(&self, other: &Self) -> bool {
        self.p == other.p && self.m == other.m && self.modulus == other.modulus
    }
}

impl Eq for FieldCtx {}

/// Built-in moduli for the non-prime fields of order at most 81.
const DEFAULT_MODULI: &[(u32, u32, &[u32])] = &[
    (2, 2, &[1, 1, 1]),
    (2, 3, &[1, 1, 0, 1]),
    (2, 4, &[1, 1, 0, 0, 1]),
    (2, 5, &[1, 0, 1, 0, 0, 1]),
    (2, 6, &[1, 1, 0, 0, 0, 0, 1]),
    (3, 2, &[1, 0, 1]),
    (3, 3, &[1, 2, 0, 1]),
    (3, 4, &[2, 0, 0, 2, 1]),
    (5, 2, &[2, 4, 1]),
    (7, 2, &[3, 6, 1]),
];

pub(crate) fn is_prime(n: u32) -> bool {
    if n < 2 {
        return false;
    }
    let mut d = 2;
    while d * d <= n {
        if n.is_multiple_of(d) {
            return false;
        }
        d += 1;
    }
    true
}

// --- polynomials over F_p, low degree first, used only to build the tables ---

fn fp_trim(a: &mut Vec<u32>) {
    while a.last() == Some(&0) {
        a.pop();
    }
}

fn fp_inv(a: u32, p: u32) -> u32 {
    // p is prime and small: Fermat.
    let mut result = 1u64;
    let mut base = a as u64 % p as u64;
    let mut e = p - 2;
    while e > 0 {
        if e & 1 == 1 {
            result = result * base % p as u64;
        }
        base = base * base % p as u64;
        e >>= 1;
    }
    result as u32
}

/// Remainder of `a` modulo `b` over F_p; `b` must be nonzero.
fn fp_rem(a: &[u32], b: &[u32], p: u32) -> Vec<u32> {
    let mut r = a.to_vec();
    fp_trim(&mut r);
    let db = b.len() - 1;
    let lead_inv = fp_inv(b[db], p);
    while r.len() > db {
        let shift = r.len() - 1 - db;
        let c = (*r.last().unwrap() as u64 * lead_inv as u64 % p as u64) as u32;
        for (i, &bi) in b.iter().enumerate() {
            let sub = (c as u64 * bi as u64 % p as u64) as u32;
            r[shift + i] = (r[shift + i] + p - sub) % p;
        }
        fp_trim(&mut r);
    }
    r
}

/// Trial division by every monic polynomial of degree 1..=deg/2.
pub(crate) fn fp_is_irreducible(f: &[u32], p: u32) -> bool {
    let deg = f.len() - 1;
    if deg == 0 {
        return false;
    }
    for d in 1..=deg / 2 {
        let count = (p as u64).pow(d as u32);
        for lower in 0..count {
            let mut g = vec![0u32; d + 1];
            let mut x = lower;
            for slot in g.iter_mut().take(d) {
                *slot = (x % p as u64) as u32;
                x /= p as u64;
            }
            g[d] = 1;
            if fp_rem(f, &g, p).is_empty() {
                return false;
            }
        }
    }
    true
}

fn first_irreducible(p: u32, m: u32) -> Vec<u32> {
    let count = (p as u64).pow(m);
    for lower in 0..count {
        let mut g = vec![0u32; m as usize + 1];
        let mut x = lower;
        for slot in g.iter_mut().take(m as usize) {
            *slot = (x % p as u64) as u32;
            x /= p as u64;
        }
        g[m as usize] = 1;
        if fp_is_irreducible(&g, p) {
            return g;
        }
    }
    unreachable!("irreducible polynomials of every degree exist")
}

impl FieldCtx {
    /// Builds F_{p^m}. With `modulus = None` the built-in table (or, beyond
    /// it, the first irreducible polynomial in enumeration order) is used.
    /// A supplied modulus must be monic of degree m and is checked for
    /// irreducibility.
    pub fn new(p: u32, m: u32, modulus: Option<Vec<u32>>) -> Result<Self> {
        if !is_prime(p) {
            return Err(Error::InvalidField(format!("{p} is not prime")));
        }
        if m == 0 {
            return Err(Error::InvalidField("extension degree must be >= 1".into()));
        }
        let q = (p as u64)
            .checked_pow(m)
            .filter(|&q| q <= MAX_ORDER as u64)
            .ok_or_else(|| Error::InvalidField(format!("{p}^{m} exceeds the supported order {MAX_ORDER}")))?
            as u32;
        let modulus = match modulus {
            Some(mut f) => {
                for c in f.iter_mut() {
                    *c %= p;
                }
                fp_trim(&mut f);
                if f.len() != m as usize + 1 {
                    return Err(Error::InvalidField(format!(
                        "modulus has degree {}, expected {m}",
                        f.len() as i64 - 1
                    )));
                }
                if f[m as usize] != 1 {
                    return Err(Error::InvalidField("modulus must be monic".into()));
                }
                f
            }
            None if m == 1 => vec![0, 1],
            None => DEFAULT_MODULI
                .iter()
                .find(|(pp, mm, _)| *pp == p && *mm == m)
                .map(|(_, _, f)| f.to_vec())
                .unwrap_or_else(|| first_irreducible(p, m)),
        };
        if !fp_is_irreducible(&modulus, p) {
            return Err(Error::InvalidField("modulus is reducible".into()));
        }
        Ok(Self::build(p, m, q, modulus))
    }

    /// The prime field F_p.
    pub fn prime(p: u32) -> Result<Self> {
        Self::new(p, 1, None)
    }

    fn build(p: u32, m: u32, q: u32, modulus: Vec<u32>) -> Self {
        let qs = q as usize;
        let digits = |x: usize| -> Vec<u32> {
            let mut v = Vec::with_capacity(m as usize);
            let mut x = x as u32;
            for _ in 0..m {
                v.push(x % p);
                x /= p;
            }
            v
        };
        let pack = |v: &[u32]| -> u16 {
            let mut x = 0u32;
            for &c in v.iter().rev() {
                x = x * p + c;
            }
            x as u16
        };
        let coords: Vec<Vec<u32>> = (0..qs).map(digits).collect();

        let mut add = vec![0u16; qs * qs];
        let mut mul = vec![0u16; qs * qs];
        for a in 0..qs {
            for b in a..qs {
                let s: Vec<u32> = coords[a]
                    .iter()
                    .zip(&coords[b])
                    .map(|(x, y)| (x + y) % p)
                    .collect();
                let s = pack(&s);
                add[a * qs + b] = s;
                add[b * qs + a] = s;

                let mut prod = vec![0u32; 2 * m as usize - 1];
                for (i, &x) in coords[a].iter().enumerate() {
                    if x == 0 {
                        continue;
                    }
                    for (j, &y) in coords[b].iter().enumerate() {
                        prod[i + j] = (prod[i + j] + x * y) % p;
                    }
                }
                let mut r = fp_rem(&prod, &modulus, p);
                r.resize(m as usize, 0);
                let r = pack(&r);
                mul[a * qs + b] = r;
                mul[b * qs + a] = r;
            }
        }
        let mut neg = vec![0u16; qs];
        for (a, slot) in neg.iter_mut().enumerate() {
            let v: Vec<u32> = coords[a].iter().map(|&c| (p - c) % p).collect();
            *slot = pack(&v);
        }
        let mut inv = vec![0u16; qs];
        for a in 1..qs {
            for b in 1..qs {
                if mul[a * qs + b] == 1 {
                    inv[a] = b as u16;
                    break;
                }
            }
        }
        let mut ctx = FieldCtx {
            p,
            m,
            q,
            modulus,
            symbol: 'w',
            add,
            mul,
            neg,
            inv,
            frob: Vec::new(),
            frob_inv: Vec::new(),
            trace: Vec::new(),
        };
        ctx.frob = (0..qs)
            .map(|a| ctx.pow(FqElem(a as u16), p as u64).0)
            .collect();
        ctx.frob_inv = (0..qs)
            .map(|a| {
                let mut x = a as u16;
                for _ in 1..m {
                    x = ctx.frob[x as usize];
                }
                x
            })
            .collect();
        ctx.trace = (0..qs)
            .map(|a| {
                let mut acc = FqElem::ZERO;
                let mut x = FqElem(a as u16);
                for _ in 0..m {
                    acc = ctx.add(acc, x);
                    x = FqElem(ctx.frob[x.index()]);
                }
                debug_assert!(acc.index() < p as usize, "trace must land in F_p");
                acc.0
            })
            .collect();
        ctx
    }

    /// Replaces the generator symbol used in text I/O.
    pub fn with_symbol(mut self, symbol: char) -> Result<Self> {
        if !symbol.is_ascii_lowercase() || symbol == 't' || symbol == 'x' {
            return Err(Error::InvalidField(format!(
                "generator symbol must be a lowercase letter other than t and x, got {symbol:?}"
            )));
        }
        self.symbol = symbol;
        Ok(self)
    }

    pub fn p(&self) -> u32 {
        self.p
    }

    pub fn m(&self) -> u32 {
        self.m
    }

    pub fn q(&self) -> u32 {
        self.q
    }

    pub fn modulus(&self) -> &[u32] {
        &self.modulus
    }

    pub fn symbol(&self) -> char {
        self.symbol
    }

    /// All elements of F_q in enumeration order.
    pub fn elements(&self) -> impl Iterator<Item = FqElem> + Clone {
        (0..self.q as usize).map(FqElem::from_index)
    }

    /// The generator `w` (for m = 1 there is none; returns `None`).
    pub fn generator(&self) -> Option<FqElem> {
        (self.m > 1).then_some(FqElem(self.p as u16))
    }

    /// The image of an integer in the prime field.
    pub fn from_int(&self, n: i64) -> FqElem {
        FqElem(n.rem_euclid(self.p as i64) as u16)
    }

    pub fn from_coords(&self, coords: &[u32]) -> Result<FqElem> {
        if coords.len() > self.m as usize || coords.iter().any(|&c| c >= self.p) {
            return Err(Error::OutOfRange(format!(
                "coordinates {coords:?} do not describe an element of F_{}",
                self.q
            )));
        }
        let mut x = 0u32;
        for &c in coords.iter().rev() {
            x = x * self.p + c;
        }
        Ok(FqElem(x as u16))
    }

    pub fn coords(&self, a: FqElem) -> Vec<u32> {
        let mut x = a.0 as u32;
        (0..self.m)
            .map(|_| {
                let c = x % self.p;
                x /= self.p;
                c
            })
            .collect()
    }

    #[inline]
    pub fn add(&self, a: FqElem, b: FqElem) -> FqElem {
        FqElem(self.add[a.index() * self.q as usize + b.index()])
    }

    #[inline]
    pub fn neg(&self, a: FqElem) -> FqElem {
        FqElem(self.neg[a.index()])
    }

    #[inline]
    pub fn sub(&self, a: FqElem, b: FqElem) -> FqElem {
        self.add(a, self.neg(b))
    }

    #[inline]
    pub fn mul(&self, a: FqElem, b: FqElem) -> FqElem {
        FqElem(self.mul[a.index() * self.q as usize + b.index()])
    }

    pub fn inv(&self, a: FqElem) -> Result<FqElem> {
        if a.is_zero() {
            Err(Error::DivisionByZero)
        } else {
            Ok(FqElem(self.inv[a.index()]))
        }
    }

    pub fn div(&self, a: FqElem, b: FqElem) -> Result<FqElem> {
        Ok(self.mul(a, self.inv(b)?))
    }

    pub fn pow(&self, a: FqElem, mut e: u64) -> FqElem {
        let mut result = FqElem::ONE;
        let mut base = a;
        while e > 0 {
            if e & 1 == 1 {
                result = self.mul(result, base);
            }
            base = self.mul(base, base);
            e >>= 1;
        }
        result
    }

    /// `a^p`.
    #[inline]
    pub fn frobenius(&self, a: FqElem) -> FqElem {
        FqElem(self.frob[a.index()])
    }

    /// `b^(1/p) = b^(p^(m-1))`.
    #[inline]
    pub fn frobenius_inverse(&self, b: FqElem) -> FqElem {
        FqElem(self.frob_inv[b.index()])
    }

    /// The absolute trace `a + a^p + ... + a^(p^(m-1))`, as an element of Z/p.
    #[inline]
    pub fn trace(&self, a: FqElem) -> u32 {
        self.trace[a.index()] as u32
    }

    /// The base additive character `e_q(a) = exp(2 pi i tr(a) / p)`.
    #[inline]
    pub fn char_eq(&self, a: FqElem) -> CharExp {
        CharExp::new(self.trace(a), self.p)
    }

    /// Canonical field spec string, e.g. `2^2/w^2+w+1` or `3^1`.
    pub fn spec(&self) -> String {
        if self.m == 1 {
            format!("{}^1", self.p)
        } else {
            format!("{}^{}/{}", self.p, self.m, self.fmt_fp_poly(&self.modulus))
        }
    }

    fn fmt_fp_poly(&self, coeffs: &[u32]) -> String {
        let mut terms = Vec::new();
        for (k, &c) in coeffs.iter().enumerate().rev() {
            if c == 0 {
                continue;
            }
            let mono = match k {
                0 => String::new(),
                1 => self.symbol.to_string(),
                _ => format!("{}^{k}", self.symbol),
            };
            terms.push(match (c, k) {
                (_, 0) => c.to_string(),
                (1, _) => mono,
                _ => format!("{c}*{mono}"),
            });
        }
        if terms.is_empty() {
            "0".to_string()
        } else {
            terms.join("+")
        }
    }

    /// Text form of an element: an F_p-polynomial in the generator symbol.
    pub fn fmt_elem(&self, a: FqElem) -> String {
        self.fmt_fp_poly(&self.coords(a))
    }

    /// Whether the text form of `a` is a single term (needs no parentheses
    /// when used as a multiplicative coefficient).
    pub(crate) fn elem_is_simple(&self, a: FqElem) -> bool {
        self.coords(a).iter().filter(|&&c| c != 0).count() <= 1
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn f4() -> FieldCtx {
        FieldCtx::new(2, 2, Some(vec![1, 1, 1])).unwrap()
    }

    fn f9() -> FieldCtx {
        FieldCtx::new(3, 2, Some(vec![1, 0, 1])).unwrap()
    }

    fn w(ctx: &FieldCtx) -> FqElem {
        ctx.generator().unwrap()
    }

    #[test]
    fn f4_products_and_frobenius() {
        let ctx = f4();
        let w = w(&ctx);
        let w1 = ctx.from_coords(&[1, 1]).unwrap();
        assert_eq!(ctx.mul(w, w), w1);
        assert_eq!(ctx.frobenius_inverse(w), w1);
        assert_eq!(ctx.frobenius(w1), w);
        assert_eq!(ctx.trace(w), 1);
        assert_eq!(ctx.char_eq(w).k(), 1);
        assert_eq!(ctx.fmt_elem(w1), "w+1");
    }

    #[test]
    fn f9_square_of_generator() {
        let ctx = f9();
        let w = w(&ctx);
        assert_eq!(ctx.mul(w, w), ctx.from_int(2));
        assert_eq!(ctx.trace(w), 0);
    }

    #[test]
    fn prime_field_maps() {
        let f2 = FieldCtx::prime(2).unwrap();
        for b in f2.elements() {
            assert_eq!(f2.frobenius_inverse(b), b);
        }
        assert_eq!(f2.trace(FqElem::ONE), 1);
        let f3 = FieldCtx::prime(3).unwrap();
        assert_eq!(f3.char_eq(f3.from_int(2)).k(), 2);
        assert!(f3.generator().is_none());
    }

    #[test]
    fn zero_one_and_identity() {
        for ctx in [f4(), f9(), FieldCtx::prime(5).unwrap()] {
            assert_eq!(ctx.frobenius_inverse(FqElem::ZERO), FqElem::ZERO);
            assert_eq!(ctx.frobenius_inverse(FqElem::ONE), FqElem::ONE);
            assert!(ctx.char_eq(FqElem::ZERO).is_trivial());
            for x in ctx.elements() {
                assert_eq!(ctx.add(x, FqElem::ZERO), x);
            }
        }
    }

    #[test]
    fn inverse_of_zero_is_an_error() {
        assert_eq!(f4().inv(FqElem::ZERO), Err(Error::DivisionByZero));
    }

    #[test]
    fn reducible_modulus_rejected() {
        // w^2 + 1 = (w + 1)^2 over F_2
        assert!(matches!(
            FieldCtx::new(2, 2, Some(vec![1, 0, 1])),
            Err(Error::InvalidField(_))
        ));
        assert!(FieldCtx::new(4, 1, None).is_err());
        assert!(FieldCtx::new(2, 11, None).is_err());
    }

    #[test]
    fn default_table_is_irreducible() {
        for &(p, m, _) in DEFAULT_MODULI {
            let ctx = FieldCtx::new(p, m, None).unwrap();
            assert_eq!(ctx.q(), p.pow(m));
        }
        // beyond the table: first irreducible in enumeration order
        let f125 = FieldCtx::new(5, 3, None).unwrap();
        assert!(fp_is_irreducible(f125.modulus(), 5));
    }

    fn all_small_fields() -> Vec<FieldCtx> {
        let mut v = Vec::new();
        for (p, m) in [(2, 1), (2, 2), (2, 3), (2, 4), (2, 5), (2, 6), (3, 1), (3, 2), (3, 3), (3, 4), (5, 1), (5, 2), (7, 1), (7, 2)] {
            v.push(FieldCtx::new(p, m, None).unwrap());
        }
        v
    }

    #[test]
    fn frobenius_inverse_exhaustive() {
        for ctx in all_small_fields() {
            for x in ctx.elements() {
                assert_eq!(ctx.frobenius(ctx.frobenius_inverse(x)), x);
                assert_eq!(ctx.frobenius_inverse(ctx.frobenius(x)), x);
                assert_eq!(ctx.trace(ctx.frobenius(x)), ctx.trace(x));
            }
        }
    }

    #[test]
    fn trace_and_root_are_additive_exhaustive() {
        for ctx in all_small_fields() {
            let p = ctx.p();
            for a in ctx.elements() {
                for b in ctx.elements() {
                    let s = ctx.add(a, b);
                    assert_eq!(ctx.trace(s), (ctx.trace(a) + ctx.trace(b)) % p);
                    assert_eq!(ctx.char_eq(s), ctx.char_eq(a) + ctx.char_eq(b));
                    assert_eq!(
                        ctx.frobenius_inverse(s),
                        ctx.add(ctx.frobenius_inverse(a), ctx.frobenius_inverse(b))
                    );
                }
            }
        }
    }

    #[test]
    fn field_axioms_small_fields() {
        for ctx in all_small_fields().into_iter().filter(|c| c.q() <= 9) {
            for a in ctx.elements() {
                assert_eq!(ctx.add(a, ctx.neg(a)), FqElem::ZERO);
                assert_eq!(ctx.mul(a, FqElem::ONE), a);
                if !a.is_zero() {
                    assert_eq!(ctx.mul(a, ctx.inv(a).unwrap()), FqElem::ONE);
                }
                for b in ctx.elements() {
                    assert_eq!(ctx.mul(a, b), ctx.mul(b, a));
                    for c in ctx.elements() {
                        assert_eq!(ctx.add(ctx.add(a, b), c), ctx.add(a, ctx.add(b, c)));
                        assert_eq!(ctx.mul(ctx.mul(a, b), c), ctx.mul(a, ctx.mul(b, c)));
                        assert_eq!(
                            ctx.mul(a, ctx.add(b, c)),
                            ctx.add(ctx.mul(a, b), ctx.mul(a, c))
                        );
                    }
                }
            }
        }
    }

    #[test]
    fn char_exp_arithmetic() {
        let a = CharExp::new(2, 3);
        let b = CharExp::new(2, 3);
        assert_eq!((a + b).k(), 1);
        assert_eq!((-a).k(), 1);
        assert_eq!((a - b).k(), 0);
    }

    #[test]
    fn spec_strings() {
        assert_eq!(f4().spec(), "2^2/w^2+w+1");
        assert_eq!(FieldCtx::prime(3).unwrap().spec(), "3^1");
        assert_eq!(f9().spec(), "3^2/w^2+1");
    }
}
