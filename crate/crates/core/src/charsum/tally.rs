use serde::ser::{SerializeMap, Serializer};
use serde::Serialize;

use crate::ffield::{CharExp, FieldCtx, FqElem};

/// An exact sum of p-th roots of unity: `counts[k]` summands equal
/// `exp(2 pi i k / p)`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Tally {
    counts: Vec<u64>,
}

impl Tally {
    pub fn new(p: u32) -> Self {
        Tally {
            counts: vec![0; p as usize],
        }
    }

    pub fn from_counts(counts: Vec<u64>) -> Self {
        Tally { counts }
    }

    /// `n` summands, all equal to 1.
    pub fn concentrated(p: u32, n: u64) -> Self {
        let mut t = Tally::new(p);
        t.counts[0] = n;
        t
    }

    /// `each` summands at every root of unity: value zero.
    pub fn balanced(p: u32, each: u64) -> Self {
        Tally {
            counts: vec![each; p as usize],
        }
    }

    pub fn p(&self) -> u32 {
        self.counts.len() as u32
    }

    pub fn counts(&self) -> &[u64] {
        &self.counts
    }

    #[inline]
    pub fn record(&mut self, e: CharExp) {
        self.counts[e.k() as usize] += 1;
    }

    pub fn merge(&self, other: &Tally) -> Tally {
        Tally {
            counts: self.counts.iter().zip(&other.counts).map(|(a, b)| a + b).collect(),
        }
    }

    pub fn total(&self) -> u64 {
        self.counts.iter().sum()
    }

    /// The sum vanishes exactly when all counts agree, since the only
    /// rational relation among the p-th roots of unity is their full sum.
    pub fn is_zero_sum(&self) -> bool {
        self.counts.windows(2).all(|w| w[0] == w[1])
    }

    /// Whether every summand is 1.
    pub fn is_trivial(&self) -> bool {
        self.counts[1..].iter().all(|&c| c == 0)
    }

    /// The value when it is a rational integer, i.e. when the counts at
    /// every nontrivial root agree: `counts[0] - counts[1]`.
    pub fn integer_value(&self) -> Option<i64> {
        if self.counts.len() < 2 {
            return Some(self.counts.first().copied().unwrap_or(0) as i64);
        }
        self.counts[1..]
            .windows(2)
            .all(|w| w[0] == w[1])
            .then(|| self.counts[0] as i64 - self.counts[1] as i64)
    }

    /// The complex value, for reporting.
    pub fn value(&self) -> (f64, f64) {
        let p = self.p();
        self.counts
            .iter()
            .enumerate()
            .fold((0.0, 0.0), |(re, im), (k, &c)| {
                let (cr, ci) = CharExp::new(k as u32, p).to_complex();
                (re + c as f64 * cr, im + c as f64 * ci)
            })
    }

    pub fn magnitude(&self) -> f64 {
        if self.is_zero_sum() {
            return 0.0;
        }
        if let Some(v) = self.integer_value() {
            return v.unsigned_abs() as f64;
        }
        let (re, im) = self.value();
        re.hypot(im)
    }

    pub fn report(&self) -> TallyReport {
        let magnitude = self.magnitude();
        let total = self.total();
        TallyReport {
            tally: self.counts.clone(),
            magnitude,
            normalized: if total == 0 { 0.0 } else { magnitude / total as f64 },
        }
    }
}

/// `{"tally": [...], "magnitude": |S|, "normalized": |S| / q^N}`.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct TallyReport {
    pub tally: Vec<u64>,
    pub magnitude: f64,
    pub normalized: f64,
}

/// Bin counts of the first `depth` fractional coefficients, bin index
/// `sum_k idx(a_-k) q^(depth - k)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Histogram {
    q: u64,
    depth: u32,
    counts: Vec<u64>,
}

impl Histogram {
    pub fn new(q: u64, depth: u32, bins: usize) -> Self {
        Histogram {
            q,
            depth,
            counts: vec![0; bins],
        }
    }

    pub fn depth(&self) -> u32 {
        self.depth
    }

    pub fn counts(&self) -> &[u64] {
        &self.counts
    }

    #[inline]
    pub fn record(&mut self, bin: usize) {
        self.counts[bin] += 1;
    }

    pub fn merge(&self, other: &Histogram) -> Histogram {
        Histogram {
            q: self.q,
            depth: self.depth,
            counts: self.counts.iter().zip(&other.counts).map(|(a, b)| a + b).collect(),
        }
    }

    pub fn total(&self) -> u64 {
        self.counts.iter().sum()
    }

    /// `max_bins |count / total - q^-depth|`.
    pub fn max_deviation(&self) -> f64 {
        let total = self.total() as f64;
        let uniform = (self.q as f64).powi(-(self.depth as i32));
        self.counts
            .iter()
            .map(|&c| (c as f64 / total - uniform).abs())
            .fold(0.0, f64::max)
    }

    /// Forgets the deepest coefficient.
    pub fn coarsen(&self) -> Histogram {
        let mut counts = vec![0; self.counts.len() / self.q as usize];
        for (bin, &c) in self.counts.iter().enumerate() {
            counts[bin / self.q as usize] += c;
        }
        Histogram {
            q: self.q,
            depth: self.depth - 1,
            counts,
        }
    }

    /// Bins keyed by comma-joined coefficient literals, in index order.
    pub fn report(&self, ctx: &FieldCtx) -> HistogramReport {
        let bins = self
            .counts
            .iter()
            .enumerate()
            .map(|(bin, &c)| {
                let mut digits = vec![FqElem::ZERO; self.depth as usize];
                let mut rest = bin as u64;
                for slot in digits.iter_mut().rev() {
                    *slot = FqElem::from_index((rest % self.q) as usize);
                    rest /= self.q;
                }
                let key: Vec<String> = digits.iter().map(|&a| ctx.fmt_elem(a)).collect();
                (key.join(","), c)
            })
            .collect();
        HistogramReport {
            depth: self.depth,
            bins: Bins(bins),
            max_deviation: self.max_deviation(),
        }
    }
}

/// `{"depth": d, "bins": {...}, "max_deviation": float}`.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct HistogramReport {
    pub depth: u32,
    pub bins: Bins,
    pub max_deviation: f64,
}

/// Ordered bins; serialized as a JSON object in index order.
#[derive(Clone, Debug, PartialEq)]
pub struct Bins(pub Vec<(String, u64)>);

impl Serialize for Bins {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        let mut map = serializer.serialize_map(Some(self.0.len()))?;
        for (k, v) in &self.0 {
            map.serialize_entry(k, v)?;
        }
        map.end()
    }
}
