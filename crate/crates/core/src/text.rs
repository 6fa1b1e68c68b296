//! Text input and output.
//!
//! Grammar (whitespace is insignificant):
//!
//! ```text
//! expr   := sum [ "!lo=" int ]
//! sum    := ["-"] term (("+" | "-") term)*
//! term   := factor (("*" | "/") factor)*
//! factor := atom ["^" ["-"] int]
//! atom   := int | <generator> | "t" | "x" | "irr" ["[" rule "]"] | "(" expr ")"
//! rule   := "fact(" int "," int ")" | "pow(" int ")"
//!         | "aff(" int "," ["-"] int "," rule ")" | "union(" rule ("," rule)* ")"
//! ```
//!
//! The floor suffix binds loosest and turns every coefficient into a
//! truncation known on exponents `>= lo`.

use std::collections::BTreeMap;
use std::sync::Arc;

use crate::addpoly::{AdditivePoly, SparsePoly};
use crate::error::{Error, Result};
use crate::ffield::{FieldCtx, FqElem};
use crate::laurent::{Coeff, GapRule, IrrationalStream, Poly, RatFn, Series};

// ---------------------------------------------------------------- printing

/// `c` in front of a power of `t`: `""` for one, `"c*"` or `"(c)*"`.
fn coeff_prefix(ctx: &FieldCtx, c: FqElem) -> String {
    if c == FqElem::ONE {
        String::new()
    } else if ctx.elem_is_simple(c) {
        format!("{}*", ctx.fmt_elem(c))
    } else {
        format!("({})*", ctx.fmt_elem(c))
    }
}

fn fmt_terms(ctx: &FieldCtx, terms: impl Iterator<Item = (i64, FqElem)>) -> String {
    let parts: Vec<String> = terms
        .map(|(e, c)| match e {
            0 => ctx.fmt_elem(c),
            1 => format!("{}t", coeff_prefix(ctx, c)),
            _ => format!("{}t^{e}", coeff_prefix(ctx, c)),
        })
        .collect();
    if parts.is_empty() {
        "0".to_string()
    } else {
        parts.join(" + ")
    }
}

pub fn fmt_poly(ctx: &FieldCtx, p: &Poly) -> String {
    fmt_terms(ctx, p.terms_desc())
}

pub fn fmt_series(ctx: &FieldCtx, s: &Series) -> String {
    let body = fmt_terms(ctx, s.terms_desc());
    match s.floor() {
        Some(lo) => format!("{body} !lo={lo}"),
        None => body,
    }
}

fn is_single_term(ctx: &FieldCtx, p: &Poly) -> bool {
    let mut terms = p.terms_desc();
    match (terms.next(), terms.next()) {
        (Some((_, c)), None) => ctx.elem_is_simple(c),
        (None, _) => true,
        _ => false,
    }
}

fn fmt_poly_factor(ctx: &FieldCtx, p: &Poly) -> String {
    if is_single_term(ctx, p) {
        fmt_poly(ctx, p)
    } else {
        format!("({})", fmt_poly(ctx, p))
    }
}

pub fn fmt_ratfn(ctx: &FieldCtx, r: &RatFn) -> String {
    if r.is_polynomial() {
        fmt_poly(ctx, r.num())
    } else {
        format!("{}/{}", fmt_poly_factor(ctx, r.num()), fmt_poly_factor(ctx, r.den()))
    }
}

pub fn fmt_coeff(ctx: &FieldCtx, c: &Coeff) -> String {
    match c {
        Coeff::Rational(r) => fmt_ratfn(ctx, r),
        Coeff::Window(s) => fmt_series(ctx, s),
        Coeff::Lazy(l) => {
            let mut parts = Vec::new();
            if !l.rational().is_zero() {
                parts.push(fmt_ratfn(ctx, l.rational()));
            }
            for (m, s) in l.streams() {
                let m_text = fmt_ratfn(ctx, m);
                parts.push(if m_text == "1" {
                    s.to_string()
                } else if is_simple_text(&m_text) {
                    format!("{m_text}*{s}")
                } else {
                    format!("({m_text})*{s}")
                });
            }
            parts.join(" + ")
        }
    }
}

fn is_simple_text(s: &str) -> bool {
    !s.contains(['+', '/', ' ', '(', '!'])
}

pub fn fmt_sparse(ctx: &FieldCtx, f: &SparsePoly) -> String {
    if f.is_zero() {
        return "0".to_string();
    }
    let parts: Vec<String> = f
        .terms()
        .iter()
        .rev()
        .map(|(&r, c)| {
            let text = fmt_coeff(ctx, c);
            let mono = if r == 1 { "x".to_string() } else { format!("x^{r}") };
            if r == 0 {
                text
            } else if text == "1" {
                mono
            } else if is_simple_text(&text) {
                format!("{text}*{mono}")
            } else {
                format!("({text})*{mono}")
            }
        })
        .collect();
    parts.join(" + ")
}

pub fn fmt_additive(ctx: &FieldCtx, a: &AdditivePoly) -> String {
    fmt_sparse(ctx, &a.to_sparse(ctx))
}

// ----------------------------------------------------------------- fields

/// Parses `p^m/modulus`, `p^m` or a prime power `q`.
pub fn parse_field(spec: &str) -> Result<FieldCtx> {
    let spec = spec.trim();
    let (head, modulus) = match spec.split_once('/') {
        Some((h, m)) => (h.trim(), Some(m.trim())),
        None => (spec, None),
    };
    let (p, m) = match head.split_once('^') {
        Some((p, m)) => (parse_uint(p)?, parse_uint(m)?),
        None => prime_power(parse_uint(head)?)?,
    };
    let p = u32::try_from(p).map_err(|_| Error::InvalidField(format!("{p} is too large")))?;
    let m = u32::try_from(m).map_err(|_| Error::InvalidField(format!("{m} is too large")))?;
    let symbol = 'w';
    let modulus = match modulus {
        Some(text) => Some(parse_fp_poly(text, p, symbol)?),
        None => None,
    };
    FieldCtx::new(p, m, modulus)
}

fn parse_uint(s: &str) -> Result<u64> {
    s.trim()
        .parse::<u64>()
        .map_err(|_| Error::parse(format!("expected a non-negative integer, got {s:?}")))
}

fn prime_power(q: u64) -> Result<(u64, u64)> {
    let p = (2..=q).find(|d| q.is_multiple_of(*d)).ok_or_else(|| Error::InvalidField(format!("{q} is not a prime power")))?;
    let mut rest = q;
    let mut m = 0;
    while rest.is_multiple_of(p) {
        rest /= p;
        m += 1;
    }
    if rest != 1 {
        return Err(Error::InvalidField(format!("{q} is not a prime power")));
    }
    Ok((p, m))
}

/// An F_p-polynomial in `symbol`, e.g. `w^2+w+1`, as low-first coefficients.
pub fn parse_fp_poly(text: &str, p: u32, symbol: char) -> Result<Vec<u32>> {
    let mut coeffs: Vec<u32> = Vec::new();
    let cleaned: String = text.chars().filter(|c| !c.is_whitespace()).collect();
    if cleaned.is_empty() {
        return Err(Error::parse("empty polynomial"));
    }
    for term in cleaned.split('+') {
        let (c, k) = match term.split_once(symbol) {
            None => (parse_uint(term)?, 0),
            Some((c, rest)) => {
                let c = match c.strip_suffix('*') {
                    Some(c) => parse_uint(c)?,
                    None if c.is_empty() => 1,
                    None => return Err(Error::parse(format!("bad term {term:?}"))),
                };
                let k = match rest.strip_prefix('^') {
                    Some(k) => parse_uint(k)?,
                    None if rest.is_empty() => 1,
                    None => return Err(Error::parse(format!("bad term {term:?}"))),
                };
                (c, k)
            }
        };
        let k = k as usize;
        if coeffs.len() <= k {
            coeffs.resize(k + 1, 0);
        }
        coeffs[k] = ((coeffs[k] as u64 + c) % p as u64) as u32;
    }
    Ok(coeffs)
}

// ---------------------------------------------------------------- parsing

#[derive(Clone, Debug, PartialEq)]
enum Tok {
    Int(u64),
    Ident(String),
    Sym(char),
    Floor(i64),
}

fn tokenize(text: &str) -> Result<Vec<Tok>> {
    let chars: Vec<char> = text.chars().collect();
    let mut out = Vec::new();
    let mut i = 0;
    while i < chars.len() {
        let c = chars[i];
        if c.is_whitespace() {
            i += 1;
        } else if c.is_ascii_digit() {
            let start = i;
            while i < chars.len() && chars[i].is_ascii_digit() {
                i += 1;
            }
            let s: String = chars[start..i].iter().collect();
            out.push(Tok::Int(s.parse().map_err(|_| Error::parse(format!("integer {s} too large")))?));
        } else if c.is_ascii_alphabetic() {
            let start = i;
            while i < chars.len() && chars[i].is_ascii_alphabetic() {
                i += 1;
            }
            out.push(Tok::Ident(chars[start..i].iter().collect()));
        } else if c == '!' {
            let rest: String = chars[i + 1..].iter().collect();
            let rest = rest.trim_start();
            let Some(num) = rest.strip_prefix("lo").map(str::trim_start).and_then(|r| r.strip_prefix('=')) else {
                return Err(Error::parse("expected '!lo=<integer>'"));
            };
            let num = num.trim();
            let lo = num
                .parse::<i64>()
                .map_err(|_| Error::parse(format!("bad floor {num:?}; '!lo=' must end the expression")))?;
            out.push(Tok::Floor(lo));
            break;
        } else if "+-*/^()[],".contains(c) {
            out.push(Tok::Sym(c));
            i += 1;
        } else {
            return Err(Error::parse(format!("unexpected character {c:?}")));
        }
    }
    Ok(out)
}

/// A polynomial in `x` during evaluation.
type XPoly = BTreeMap<u64, Coeff>;

struct Parser<'a> {
    ctx: &'a FieldCtx,
    toks: Vec<Tok>,
    pos: usize,
    depth: i64,
}

impl<'a> Parser<'a> {
    fn peek(&self) -> Option<&Tok> {
        self.toks.get(self.pos)
    }

    fn next(&mut self) -> Option<Tok> {
        let t = self.toks.get(self.pos).cloned();
        self.pos += 1;
        t
    }

    fn eat(&mut self, c: char) -> bool {
        if self.peek() == Some(&Tok::Sym(c)) {
            self.pos += 1;
            true
        } else {
            false
        }
    }

    fn expect(&mut self, c: char) -> Result<()> {
        if self.eat(c) {
            Ok(())
        } else {
            Err(Error::parse(format!("expected '{c}' at token {}", self.pos)))
        }
    }

    fn int(&mut self) -> Result<u64> {
        match self.next() {
            Some(Tok::Int(n)) => Ok(n),
            _ => Err(Error::parse(format!("expected an integer at token {}", self.pos - 1))),
        }
    }

    fn signed_int(&mut self) -> Result<i64> {
        let neg = self.eat('-');
        let n = i64::try_from(self.int()?).map_err(|_| Error::parse("integer too large"))?;
        Ok(if neg { -n } else { n })
    }

    fn expr(&mut self) -> Result<XPoly> {
        let value = self.sum()?;
        if let Some(Tok::Floor(lo)) = self.peek().cloned() {
            self.pos += 1;
            return with_floor(self.ctx, value, lo);
        }
        Ok(value)
    }

    fn sum(&mut self) -> Result<XPoly> {
        let negate_first = self.eat('-');
        let mut acc = self.term()?;
        if negate_first {
            acc = neg(self.ctx, &acc);
        }
        loop {
            if self.eat('+') {
                let t = self.term()?;
                acc = add(self.ctx, &acc, &t);
            } else if self.eat('-') {
                let t = self.term()?;
                acc = add(self.ctx, &acc, &neg(self.ctx, &t));
            } else {
                return Ok(acc);
            }
        }
    }

    fn term(&mut self) -> Result<XPoly> {
        let mut acc = self.factor()?;
        loop {
            if self.eat('*') {
                let f = self.factor()?;
                acc = mul(self.ctx, &acc, &f, self.depth)?;
            } else if self.eat('/') {
                let f = self.factor()?;
                let inv = invert(self.ctx, &f)?;
                acc = mul(self.ctx, &acc, &inv, self.depth)?;
            } else {
                return Ok(acc);
            }
        }
    }

    fn factor(&mut self) -> Result<XPoly> {
        let base = self.atom()?;
        if !self.eat('^') {
            return Ok(base);
        }
        let e = self.signed_int()?;
        let (base, e) = if e < 0 { (invert(self.ctx, &base)?, -e) } else { (base, e) };
        let mut acc = constant(Coeff::one());
        for _ in 0..e {
            acc = mul(self.ctx, &acc, &base, self.depth)?;
        }
        Ok(acc)
    }

    fn atom(&mut self) -> Result<XPoly> {
        match self.next() {
            Some(Tok::Int(n)) => Ok(constant(Coeff::constant(self.ctx.from_int((n % self.ctx.p() as u64) as i64)))),
            Some(Tok::Sym('(')) => {
                let v = self.expr()?;
                self.expect(')')?;
                Ok(v)
            }
            Some(Tok::Ident(name)) => self.ident(&name),
            other => Err(Error::parse(format!("unexpected token {other:?}"))),
        }
    }

    fn ident(&mut self, name: &str) -> Result<XPoly> {
        let ctx = self.ctx;
        match name {
            "t" => Ok(constant(Coeff::Rational(RatFn::from_poly(Poly::t())))),
            "x" => Ok(BTreeMap::from([(1, Coeff::one())])),
            "irr" => {
                let rule = if self.eat('[') {
                    let r = self.rule()?;
                    self.expect(']')?;
                    r
                } else {
                    GapRule::default()
                };
                Ok(constant(Coeff::from(IrrationalStream::new(rule)?)))
            }
            s if s.len() == 1 && s.starts_with(ctx.symbol()) => {
                let g = ctx
                    .generator()
                    .ok_or_else(|| Error::parse(format!("'{s}' needs an extension field")))?;
                Ok(constant(Coeff::constant(g)))
            }
            _ => Err(Error::parse(format!("unknown symbol {name:?}"))),
        }
    }

    fn rule(&mut self) -> Result<GapRule> {
        let Some(Tok::Ident(name)) = self.next() else {
            return Err(Error::parse("expected a gap rule"));
        };
        self.expect('(')?;
        let rule = match name.as_str() {
            "fact" => {
                let stride = self.int()?;
                self.expect(',')?;
                let offset = self.int()?;
                GapRule::Factorial { stride, offset }
            }
            "pow" => GapRule::Powers { base: self.int()? },
            "aff" => {
                let scale = self.int()?;
                self.expect(',')?;
                let shift = self.signed_int()?;
                self.expect(',')?;
                let inner = Arc::new(self.rule()?);
                GapRule::Affine { scale, shift, inner }
            }
            "union" => {
                let mut parts = vec![self.rule()?];
                while self.eat(',') {
                    parts.push(self.rule()?);
                }
                GapRule::Union(parts)
            }
            other => return Err(Error::parse(format!("unknown gap rule {other:?}"))),
        };
        self.expect(')')?;
        rule.validate()?;
        Ok(rule)
    }
}

fn constant(c: Coeff) -> XPoly {
    let mut m = BTreeMap::new();
    if !c.is_zero() {
        m.insert(0, c);
    }
    m
}

fn add(ctx: &FieldCtx, a: &XPoly, b: &XPoly) -> XPoly {
    let mut out = a.clone();
    for (&r, c) in b {
        let sum = match out.remove(&r) {
            Some(old) => old.add(ctx, c),
            None => c.clone(),
        };
        if !sum.is_zero() {
            out.insert(r, sum);
        }
    }
    out
}

fn neg(ctx: &FieldCtx, a: &XPoly) -> XPoly {
    a.iter().map(|(&r, c)| (r, c.neg(ctx))).collect()
}

fn mul(ctx: &FieldCtx, a: &XPoly, b: &XPoly, depth: i64) -> Result<XPoly> {
    let mut out = XPoly::new();
    for (&ra, ca) in a {
        for (&rb, cb) in b {
            let prod = ca.mul(ctx, cb, depth)?;
            out = add(ctx, &out, &BTreeMap::from([(ra + rb, prod)]));
        }
    }
    out.retain(|_, c| !c.is_zero());
    Ok(out)
}

/// Inverse of an `x`-free rational value.
fn invert(ctx: &FieldCtx, a: &XPoly) -> Result<XPoly> {
    if a.is_empty() {
        return Err(Error::DivisionByZero);
    }
    match (a.len(), a.get(&0)) {
        (1, Some(Coeff::Rational(r))) => Ok(constant(Coeff::Rational(r.inv(ctx)?))),
        (1, Some(_)) => Err(Error::parse("only rational functions of t can be divided by")),
        _ => Err(Error::parse("cannot divide by a polynomial in x")),
    }
}

fn with_floor(ctx: &FieldCtx, mut value: XPoly, lo: i64) -> Result<XPoly> {
    if value.keys().all(|&r| r == 0) {
        value.entry(0).or_insert_with(Coeff::zero);
    }
    value
        .into_iter()
        .map(|(r, c)| {
            let s = match &c {
                Coeff::Rational(rf) => match rf.laurent_terms() {
                    Some(terms) => Series::windowed_from_terms(ctx, &terms, lo)?,
                    None => rf.to_series(ctx, lo),
                },
                Coeff::Window(s) => {
                    if let Some(e) = s.terms_desc().map(|(e, _)| e).find(|&e| e < lo) {
                        return Err(Error::EmptyWindow(format!(
                            "term t^{e} lies below the declared floor {lo}"
                        )));
                    }
                    s.truncate(lo)
                }
                Coeff::Lazy(_) => c.to_series(ctx, lo),
            };
            Ok((r, Coeff::Window(s)))
        })
        .collect()
}

fn parse_xpoly(ctx: &FieldCtx, text: &str, depth: i64) -> Result<XPoly> {
    let toks = tokenize(text)?;
    if toks.is_empty() {
        return Err(Error::parse("empty input"));
    }
    let mut p = Parser {
        ctx,
        toks,
        pos: 0,
        depth,
    };
    let v = p.expr()?;
    if p.pos < p.toks.len() {
        return Err(Error::parse(format!("trailing input at token {}", p.pos)));
    }
    Ok(v)
}

/// A coefficient: an `x`-free expression. `depth` bounds truncations forced
/// by products of two irrational factors.
pub fn parse_coeff(ctx: &FieldCtx, text: &str, depth: i64) -> Result<Coeff> {
    let v = parse_xpoly(ctx, text, depth)?;
    if v.keys().any(|&r| r > 0) {
        return Err(Error::parse("expected an element of K_infinity, found x"));
    }
    Ok(v.get(&0).cloned().unwrap_or_else(Coeff::zero))
}

/// A series; non-terminating values are expanded down to `lo`.
pub fn parse_series(ctx: &FieldCtx, text: &str, lo: i64) -> Result<Series> {
    Ok(parse_coeff(ctx, text, lo)?.to_series(ctx, lo))
}

pub fn parse_ratfn(ctx: &FieldCtx, text: &str) -> Result<RatFn> {
    match parse_coeff(ctx, text, 0)? {
        Coeff::Rational(r) => Ok(r),
        _ => Err(Error::parse("expected a rational function of t")),
    }
}

pub fn parse_poly(ctx: &FieldCtx, text: &str) -> Result<Poly> {
    let r = parse_ratfn(ctx, text)?;
    if !r.is_polynomial() {
        return Err(Error::parse("expected a polynomial in t"));
    }
    Ok(r.num().clone())
}

pub fn parse_sparse(ctx: &FieldCtx, text: &str, depth: i64) -> Result<SparsePoly> {
    let v = parse_xpoly(ctx, text, depth)?;
    Ok(SparsePoly::from_terms(ctx, v))
}

pub fn parse_additive(ctx: &FieldCtx, text: &str, depth: i64) -> Result<AdditivePoly> {
    let f = parse_sparse(ctx, text, depth)?;
    AdditivePoly::from_sparse(ctx, &f)
        .ok_or_else(|| Error::parse("not additive: every exponent of x must be a power of p"))
}
