//! Decomposition, tau, reduction and the shadow sets.

use std::collections::BTreeSet;

use equidist::addpoly::{
    decompose, recompose, reduce, shadow, tau, thm12_candidates, AdditivePoly, SparsePoly,
};
use equidist::addpoly::ktilde;
use equidist::charsum::char_e;
use equidist::laurent::{Coeff, Poly, Series};
use equidist::random;
use equidist::text::parse_field;
use equidist::FieldCtx;
use proptest::prelude::*;

fn field(q: u32) -> FieldCtx {
    parse_field(&q.to_string()).unwrap()
}

fn series_coeff(ctx: &FieldCtx, rng: &mut random::SeededRng) -> Coeff {
    Coeff::Window(random::series(ctx, rng, -25, 2, true))
}

/// `A(xi)` evaluated term by term as a series.
fn eval_additive(ctx: &FieldCtx, a: &AdditivePoly, xi: &Poly, floor: i64) -> Series {
    let p = ctx.p() as u64;
    let mut acc = Series::zero();
    for (&nu, c) in a.terms() {
        let x = xi.pow(ctx, p.pow(nu));
        let c = c.to_series(ctx, floor - x.deg().unwrap_or(0) as i64);
        acc = acc.add(ctx, &c.mul_poly(ctx, &x));
    }
    acc
}

/// `e(f(u))` by direct series evaluation.
fn eval_char(ctx: &FieldCtx, f: &SparsePoly, u: &Poly) -> equidist::CharExp {
    let mut acc = Series::zero();
    for (&r, c) in f.terms() {
        let ur = u.pow(ctx, r);
        let c = c.to_series(ctx, -2 - ur.deg().unwrap_or(0) as i64);
        acc = acc.add(ctx, &c.mul_poly(ctx, &ur));
    }
    char_e(ctx, &acc).unwrap()
}

/// Every `u` with `ord u < n`.
fn all_polys(ctx: &FieldCtx, n: u32) -> impl Iterator<Item = Poly> + '_ {
    (0..(ctx.q() as u64).pow(n)).map(move |i| Poly::from_index(ctx, i, n as usize))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn decomposition_round_trips(
        q in prop::sample::select(vec![2u32, 3, 4, 5]),
        seed in any::<u64>(),
        terms in 1usize..8,
    ) {
        let ctx = field(q);
        let mut rng = random::rng(seed);
        let f = random::sparse(&ctx, &mut rng, 60, terms, |r| random::mixed_coeff(&ctx, r));
        let d = decompose(&ctx, &f);
        prop_assert_eq!(recompose(&ctx, &d), f.clone());
        let p = ctx.p() as u64;
        for r in d.parts.keys() {
            prop_assert!(r % p != 0);
        }
        // uniqueness: the same f always yields the same grouping
        prop_assert_eq!(decompose(&ctx, &recompose(&ctx, &d)), d);
    }

    #[test]
    fn tau_carries_the_character(
        q in prop::sample::select(vec![2u32, 3, 4]),
        seed in any::<u64>(),
        nus in prop::collection::btree_set(0u32..3, 1..3),
    ) {
        let ctx = field(q);
        let mut rng = random::rng(seed);
        let a = AdditivePoly::from_terms(&ctx, nus.into_iter().map(|nu| (nu, series_coeff(&ctx, &mut rng))));
        let t = tau(&ctx, &a, -6);
        let n = if q == 4 { 3 } else { 4 };
        for xi in all_polys(&ctx, n) {
            let lhs = char_e(&ctx, &eval_additive(&ctx, &a, &xi, -2)).unwrap();
            let rhs = char_e(&ctx, &t.mul_poly(&ctx, &xi)).unwrap();
            prop_assert_eq!(lhs, rhs, "xi = {:?}", xi);
        }
    }

    #[test]
    fn reduction_preserves_characters(
        q in prop::sample::select(vec![2u32, 3]),
        seed in any::<u64>(),
        terms in 1usize..5,
    ) {
        let ctx = field(q);
        let mut rng = random::rng(seed);
        let f = random::sparse(&ctx, &mut rng, 12, terms, |r| series_coeff(&ctx, r));
        let g = reduce(&ctx, &f, -12);
        for u in all_polys(&ctx, 3) {
            prop_assert_eq!(eval_char(&ctx, &f, &u), eval_char(&ctx, &g, &u));
        }
        let p = ctx.p() as u64;
        prop_assert!(g.support().iter().all(|r| *r == 0 || r % p != 0));
    }

    #[test]
    fn shadow_contains_its_seed(p in prop::sample::select(vec![2u64, 3, 5]), seed in any::<u64>()) {
        let k = random::int_set(&mut random::rng(seed), 80, 5, None);
        let s = shadow(&k, p);
        prop_assert!(k.is_subset(&s));
        let kt = ktilde(&k, p);
        prop_assert!(kt.is_subset(&k));
        let cands = thm12_candidates(&k, p);
        prop_assert!(kt.is_subset(&cands));
        let coprime: BTreeSet<u64> = kt.iter().copied().filter(|&c| {
            let mut m = c;
            while m % p == 0 {
                m /= p;
            }
            (0..8).all(|v| !k.contains(&(m * p.pow(v))) || m * p.pow(v) == c)
        }).collect();
        prop_assert!(coprime.is_subset(&cands));
    }

    #[test]
    fn ktilde_of_coprime_sets(p in prop::sample::select(vec![2u64, 3, 5]), seed in any::<u64>()) {
        let k = random::int_set(&mut random::rng(seed), 120, 6, Some(p));
        let kt = ktilde(&k, p);
        prop_assert!(kt.iter().all(|c| c % p != 0));
        prop_assert!(kt.is_subset(&k));
    }
}

/// Binomial coefficients mod p via Pascal's rule.
fn pascal_mod(n: usize, p: u64) -> Vec<Vec<u64>> {
    let mut rows = vec![vec![1u64]];
    for i in 1..=n {
        let prev = &rows[i - 1];
        let mut row = vec![1u64; i + 1];
        for j in 1..i {
            row[j] = (prev[j - 1] + prev[j]) % p;
        }
        rows.push(row);
    }
    rows
}

#[test]
fn shadow_matches_binomials_up_to_200() {
    for p in [2u64, 3, 5, 7] {
        let table = pascal_mod(200, p);
        for r in 1..=200u64 {
            let got = shadow(&BTreeSet::from([r]), p);
            let want: BTreeSet<u64> = (1..=r).filter(|&j| table[r as usize][j as usize] != 0).collect();
            assert_eq!(got, want, "p = {p}, r = {r}");
        }
    }
}

#[test]
fn decomposition_of_plain_examples() {
    let ctx = field(3);
    let one = || Coeff::one();
    let f = SparsePoly::from_terms(&ctx, [(1, one()), (3, one()), (9, one()), (2, one()), (6, one())]);
    let d = decompose(&ctx, &f);
    assert_eq!(d.parts.keys().copied().collect::<Vec<_>>(), vec![1, 2]);
    assert_eq!(d.parts[&1].terms().keys().copied().collect::<Vec<_>>(), vec![0, 1, 2]);
    assert_eq!(d.parts[&2].terms().keys().copied().collect::<Vec<_>>(), vec![0, 1]);
}
