//! Shadow sets, the iterated star-set union and the structural
//! hypotheses of the equidistribution theorems.

use std::collections::BTreeSet;

use serde::Serialize;

use crate::laurent::Provenance;

use super::SparsePoly;

fn digits(mut n: u64, p: u64) -> Vec<u64> {
    let mut d = Vec::new();
    while n > 0 {
        d.push(n % p);
        n /= p;
    }
    d
}

/// `{j >= 1 : p does not divide C(r, j) for some r in K}`.
///
/// By Lucas' theorem these are the `j` whose base-`p` digits are bounded by
/// those of some `r`.
pub fn shadow(k: &BTreeSet<u64>, p: u64) -> BTreeSet<u64> {
    let mut out = BTreeSet::new();
    for &r in k {
        let ds = digits(r, p);
        let mut place = Vec::with_capacity(ds.len());
        let mut v = 1u64;
        for _ in &ds {
            place.push(v);
            v = v.saturating_mul(p);
        }
        // odometer over digit vectors bounded by ds
        let mut cur = vec![0u64; ds.len()];
        loop {
            let j: u64 = cur.iter().zip(&place).map(|(a, b)| a * b).sum();
            if j > 0 {
                out.insert(j);
            }
            let mut i = 0;
            while i < cur.len() && cur[i] == ds[i] {
                cur[i] = 0;
                i += 1;
            }
            if i == cur.len() {
                break;
            }
            cur[i] += 1;
        }
    }
    out
}

/// `{k in K : p does not divide k and p^v k is not in S for all v >= 1}`.
fn star(k: &BTreeSet<u64>, s: &BTreeSet<u64>, p: u64) -> BTreeSet<u64> {
    let bound = s.iter().next_back().copied().unwrap_or(0);
    k.iter()
        .copied()
        .filter(|&x| x % p != 0)
        .filter(|&x| {
            let mut y = x;
            while let Some(next) = y.checked_mul(p).filter(|&n| n <= bound) {
                y = next;
                if s.contains(&y) {
                    return false;
                }
            }
            true
        })
        .collect()
}

/// The union of the star sets `K_n^*`, where `K_0 = K` and
/// `K_{n+1} = K_n \ K_n^*`, stopping at the first empty star set.
pub fn ktilde(k: &BTreeSet<u64>, p: u64) -> BTreeSet<u64> {
    let mut current = k.clone();
    let mut out = BTreeSet::new();
    for _ in 0..=k.len() {
        let s = star(&current, &shadow(&current, p), p);
        if s.is_empty() {
            break;
        }
        current = current.difference(&s).copied().collect();
        out.extend(s);
    }
    out
}

/// `{k in K : p does not divide k and p^v k is not in K for all v >= 1}`.
pub fn thm12_candidates(k: &BTreeSet<u64>, p: u64) -> BTreeSet<u64> {
    star(k, k, p)
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct CandidateProvenance {
    pub k: u64,
    pub provenance: Provenance,
}

/// Whether a polynomial meets the hypothesis of the theorem that an
/// irrational coefficient at a candidate exponent forces equidistribution.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct CandidateReport {
    pub support: Vec<u64>,
    pub candidates: Vec<CandidateProvenance>,
    /// Candidates whose coefficient is certified irrational.
    pub irrational_candidates: Vec<u64>,
    /// True when equidistribution is certified; false means the criterion is
    /// silent (not that equidistribution fails).
    pub equidistributed: bool,
}

pub fn candidate_report(f: &SparsePoly, p: u64) -> CandidateReport {
    let support: BTreeSet<u64> = f.support().into_iter().collect();
    let candidates: Vec<CandidateProvenance> = thm12_candidates(&support, p)
        .into_iter()
        .map(|k| CandidateProvenance {
            k,
            provenance: f.coeff(k).expect("candidate lies in the support").provenance(),
        })
        .collect();
    let irrational_candidates: Vec<u64> = candidates
        .iter()
        .filter(|c| c.provenance == Provenance::Irrational)
        .map(|c| c.k)
        .collect();
    CandidateReport {
        support: support.into_iter().collect(),
        equidistributed: !irrational_candidates.is_empty(),
        candidates,
        irrational_candidates,
    }
}

/// The hypothesis for polynomials whose exponents are all coprime to `p`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct CoprimeReport {
    /// Every positive exponent is coprime to `p`.
    pub applicable: bool,
    pub irrational_exponents: Vec<u64>,
    pub equidistributed: bool,
}

pub fn coprime_report(f: &SparsePoly, p: u64) -> CoprimeReport {
    let support = f.support();
    let applicable = support.iter().all(|r| r % p != 0);
    let irrational_exponents: Vec<u64> = support
        .into_iter()
        .filter(|&r| f.coeff(r).is_some_and(|c| c.provenance() == Provenance::Irrational))
        .collect();
    CoprimeReport {
        equidistributed: applicable && !irrational_exponents.is_empty(),
        applicable,
        irrational_exponents,
    }
}
