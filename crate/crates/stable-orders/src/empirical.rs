//! Empirical distributions, Kolmogorov-Smirnov tests, and mergeable moment
//! accumulators.

use crate::error::{Error, Result};
use crate::rng::RngState;
use serde::{Deserialize, Serialize};

/// Sorted sample with seed provenance, supporting CDF / quantile / stop-loss
/// queries. The stop-loss transform pi(t) = E[(X - t)+] is evaluated from a
/// suffix-sum table in O(log n).
#[derive(Debug, Clone)]
pub struct EmpiricalDistribution {
    values: Vec<f64>,
    suffix_sums: Vec<f64>, // suffix_sums[i] = sum of values[i..]
    pub seed_provenance: RngState,
}

impl EmpiricalDistribution {
    pub fn from_samples(mut values: Vec<f64>, seed_provenance: RngState) -> Result<Self> {
        if values.is_empty() {
            return Err(Error::NotEnoughSamples { need: 1, got: 0 });
        }
        values.sort_by(|a, b| a.partial_cmp(b).expect("non-NaN samples"));
        let mut suffix_sums = vec![0.0; values.len() + 1];
        for i in (0..values.len()).rev() {
            suffix_sums[i] = suffix_sums[i + 1] + values[i];
        }
        Ok(EmpiricalDistribution {
            values,
            suffix_sums,
            seed_provenance,
        })
    }

    pub fn n(&self) -> usize {
        self.values.len()
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn min(&self) -> f64 {
        self.values[0]
    }

    pub fn max(&self) -> f64 {
        *self.values.last().unwrap()
    }

    /// F(x) = #{v <= x} / n.
    pub fn cdf(&self, x: f64) -> f64 {
        self.rank_le(x) as f64 / self.n() as f64
    }

    /// P[X >= x] = #{v >= x} / n.
    pub fn survival(&self, x: f64) -> f64 {
        (self.n() - self.rank_lt(x)) as f64 / self.n() as f64
    }

    /// number of values <= x
    fn rank_le(&self, x: f64) -> usize {
        self.values.partition_point(|v| *v <= x)
    }

    /// number of values < x
    fn rank_lt(&self, x: f64) -> usize {
        self.values.partition_point(|v| *v < x)
    }

    /// q-quantile by order statistic, q in [0,1].
    pub fn quantile(&self, q: f64) -> f64 {
        let idx = ((q * self.n() as f64).floor() as usize).min(self.n() - 1);
        self.values[idx]
    }

    /// Stop-loss transform pi(t) = mean of max(v - t, 0).
    pub fn stop_loss(&self, t: f64) -> f64 {
        let i = self.rank_le(t);
        let tail = self.n() - i;
        (self.suffix_sums[i] - t * tail as f64) / self.n() as f64
    }

    pub fn mean(&self) -> f64 {
        self.suffix_sums[0] / self.n() as f64
    }

    pub fn variance(&self) -> f64 {
        let m = self.mean();
        let n = self.n() as f64;
        self.values.iter().map(|v| (v - m) * (v - m)).sum::<f64>() / (n - 1.0)
    }
}

/// One-sided DKW half-width: eps(n, delta) = sqrt(log(2/delta) / (2n)).
pub fn dkw_epsilon(n: usize, delta: f64) -> f64 {
    ((2.0 / delta).ln() / (2.0 * n as f64)).sqrt()
}

/// Kolmogorov limiting distribution Q(lambda) = P[sup |B| > lambda],
/// evaluated by whichever of the two classical series converges fast.
pub fn kolmogorov_q(lambda: f64) -> f64 {
    if lambda < 1e-8 {
        return 1.0;
    }
    if lambda < 1.18 {
        // Q = 1 - sqrt(2 pi)/lambda * sum exp(-(2j-1)^2 pi^2 / (8 lambda^2))
        let t = std::f64::consts::PI * std::f64::consts::PI / (8.0 * lambda * lambda);
        let mut s = 0.0;
        for j in 1..100 {
            let q = (2 * j - 1) as f64;
            let term = (-q * q * t).exp();
            s += term;
            if term < 1e-18 {
                break;
            }
        }
        1.0 - (2.0 * std::f64::consts::PI).sqrt() / lambda * s
    } else {
        let mut s = 0.0;
        for j in 1..100 {
            let jf = j as f64;
            let term = (-2.0 * jf * jf * lambda * lambda).exp();
            s += if j % 2 == 1 { term } else { -term };
            if term < 1e-18 {
                break;
            }
        }
        (2.0 * s).clamp(0.0, 1.0)
    }
}

#[derive(Debug, Clone, Copy, Serialize, Deserialize)]
pub struct KsOutcome {
    pub statistic: f64,
    pub p_value: f64,
}

fn ks_p_from_statistic(d: f64, n_eff: f64) -> f64 {
    let sq = n_eff.sqrt();
    kolmogorov_q((sq + 0.12 + 0.11 / sq) * d)
}

/// Two-sample Kolmogorov-Smirnov test with the asymptotic p-value.
pub fn ks_two_sample(xs: &EmpiricalDistribution, ys: &EmpiricalDistribution) -> KsOutcome {
    let (a, b) = (xs.values(), ys.values());
    let (n, m) = (a.len(), b.len());
    let (mut i, mut j) = (0usize, 0usize);
    let mut d: f64 = 0.0;
    while i < n && j < m {
        let x = a[i].min(b[j]);
        while i < n && a[i] <= x {
            i += 1;
        }
        while j < m && b[j] <= x {
            j += 1;
        }
        let diff = (i as f64 / n as f64 - j as f64 / m as f64).abs();
        if diff > d {
            d = diff;
        }
    }
    let n_eff = (n as f64 * m as f64) / (n as f64 + m as f64);
    KsOutcome {
        statistic: d,
        p_value: ks_p_from_statistic(d, n_eff),
    }
}

/// One-sample Kolmogorov-Smirnov test against a reference CDF.
pub fn ks_one_sample<F: Fn(f64) -> f64>(xs: &EmpiricalDistribution, cdf: F) -> KsOutcome {
    let v = xs.values();
    let n = v.len() as f64;
    let mut d: f64 = 0.0;
    for (k, &x) in v.iter().enumerate() {
        let f = cdf(x);
        let hi = (k + 1) as f64 / n - f;
        let lo = f - k as f64 / n;
        d = d.max(hi).max(lo);
    }
    KsOutcome {
        statistic: d,
        p_value: ks_p_from_statistic(d, n),
    }
}

/// Mergeable mean/variance accumulator (Chan et al. pairwise update).
/// Merging is associative and order-insensitive up to floating-point
/// reassociation.
#[derive(Debug, Clone, Copy, Default, Serialize, Deserialize)]
pub struct Moments {
    pub n: u64,
    mean: f64,
    m2: f64,
}

impl Moments {
    pub fn push(&mut self, x: f64) {
        self.n += 1;
        let d = x - self.mean;
        self.mean += d / self.n as f64;
        self.m2 += d * (x - self.mean);
    }

    pub fn merge(self, other: Moments) -> Moments {
        if self.n == 0 {
            return other;
        }
        if other.n == 0 {
            return self;
        }
        let n = self.n + other.n;
        let d = other.mean - self.mean;
        let nf = n as f64;
        Moments {
            n,
            mean: self.mean + d * other.n as f64 / nf,
            m2: self.m2 + other.m2 + d * d * (self.n as f64) * (other.n as f64) / nf,
        }
    }

    pub fn mean(&self) -> f64 {
        self.mean
    }

    pub fn variance(&self) -> f64 {
        if self.n < 2 {
            0.0
        } else {
            self.m2 / (self.n as f64 - 1.0)
        }
    }

    /// Standard error of the mean.
    pub fn se(&self) -> f64 {
        (self.variance() / self.n as f64).sqrt()
    }
}

pub fn moments_of(xs: &[f64]) -> Moments {
    let mut m = Moments::default();
    for &x in xs {
        m.push(x);
    }
    m
}

/// Freedman-Diaconis histogram over [0, max]. Returns (bin_width, counts).
pub fn fd_histogram(sorted: &[f64]) -> (f64, Vec<u64>) {
    let n = sorted.len();
    let iqr = sorted[(3 * n) / 4] - sorted[n / 4];
    let width = 2.0 * iqr / (n as f64).cbrt();
    let hi = sorted[n - 1];
    let bins = ((hi / width).ceil() as usize).max(1).min(4_000_000);
    let mut counts = vec![0u64; bins];
    for &x in sorted {
        let mut b = (x / width) as usize;
        if b >= bins {
            b = bins - 1;
        }
        counts[b] += 1;
    }
    (width, counts)
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    fn ed(v: Vec<f64>) -> EmpiricalDistribution {
        EmpiricalDistribution::from_samples(v, RngState::new(0, 0)).unwrap()
    }

    #[test]
    fn cdf_survival_stop_loss_small() {
        let d = ed(vec![3.0, 1.0, 2.0, 4.0]);
        assert_eq!(d.cdf(2.0), 0.5);
        assert_eq!(d.survival(2.0), 0.75);
        assert_eq!(d.survival(2.5), 0.5);
        // pi(1.5) = ((2-1.5)+(3-1.5)+(4-1.5))/4 = 4.5/4
        assert_relative_eq!(d.stop_loss(1.5), 1.125);
        assert_relative_eq!(d.stop_loss(0.0), d.mean());
        assert_eq!(d.stop_loss(5.0), 0.0);
    }

    #[test]
    fn kolmogorov_q_reference_points() {
        // classical critical values: Q(1.224) ~ 0.100, Q(1.358) ~ 0.050
        assert_relative_eq!(kolmogorov_q(1.224), 0.1, max_relative = 1e-2);
        assert_relative_eq!(kolmogorov_q(1.358), 0.05, max_relative = 1e-2);
        assert!(kolmogorov_q(0.3) > 0.999999);
        assert!(kolmogorov_q(3.0) < 1e-7);
        // the two series branches agree at the crossover
        let a = kolmogorov_q(1.18 - 1e-9);
        let b = kolmogorov_q(1.18 + 1e-9);
        assert!((a - b).abs() < 1e-9, "branch mismatch: {a} vs {b}");
        // monotone decreasing
        let mut prev = 1.0;
        for k in 1..60 {
            let q = kolmogorov_q(k as f64 * 0.05);
            assert!(q <= prev + 1e-12);
            prev = q;
        }
    }

    #[test]
    fn ks_two_sample_identical_is_zero() {
        let a = ed((1..100).map(|i| i as f64).collect());
        let b = ed((1..100).map(|i| i as f64).collect());
        let out = ks_two_sample(&a, &b);
        assert_eq!(out.statistic, 0.0);
        assert!(out.p_value > 0.999);
    }

    #[test]
    fn ks_two_sample_disjoint_is_one() {
        let a = ed((0..50).map(|i| i as f64).collect());
        let b = ed((100..150).map(|i| i as f64).collect());
        let out = ks_two_sample(&a, &b);
        assert_eq!(out.statistic, 1.0);
        assert!(out.p_value < 1e-10);
    }

    #[test]
    fn ks_one_sample_uniform() {
        // deterministic stratified uniform sample: D ~ 1/(2n), p close to 1
        let n = 1000;
        let a = ed((0..n).map(|i| (i as f64 + 0.5) / n as f64).collect());
        let out = ks_one_sample(&a, |x| x.clamp(0.0, 1.0));
        assert!(out.statistic <= 0.5 / n as f64 + 1e-12);
        assert!(out.p_value > 0.99);
    }

    #[test]
    fn dkw_matches_formula() {
        assert_relative_eq!(
            dkw_epsilon(1_000_000, 1e-3),
            ((2000.0f64).ln() / 2e6).sqrt(),
            max_relative = 1e-14
        );
    }

    #[test]
    fn moments_merge_is_order_insensitive() {
        let xs: Vec<f64> = (0..1000).map(|i| ((i * 2654435761u64) % 1000) as f64 / 7.0).collect();
        let whole = moments_of(&xs);
        let (a, b) = xs.split_at(317);
        let merged = moments_of(a).merge(moments_of(b));
        let merged_rev = moments_of(b).merge(moments_of(a));
        assert_relative_eq!(whole.mean(), merged.mean(), max_relative = 1e-12);
        assert_relative_eq!(whole.variance(), merged.variance(), max_relative = 1e-12);
        assert_relative_eq!(merged.mean(), merged_rev.mean(), max_relative = 1e-12);
        assert_relative_eq!(merged.variance(), merged_rev.variance(), max_relative = 1e-12);
    }
}
