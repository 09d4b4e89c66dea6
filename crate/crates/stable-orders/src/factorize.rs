//! Beta/Gamma factorization plans for Z_{p/n}^{-p} with rational index.
//!
//! For integers n > p >= 1 the negative power Z_{p/n}^{-p} of the positive
//! stable variable factorizes into independent Gamma and Beta variables
//! (the Beta-Gamma plan), or into a power of the unit exponential and Beta
//! variables only (the Beta plan). Both plans are driven by the index family
//!   q_0 = 0, q_p = n, q_j = sup{ i >= 1 : i p < j n }  (1 <= j <= p-1),
//! and sampling a plan draws each factor independently, raises it to its
//! exponent, multiplies, and scales by the prefactor.

use crate::error::{Error, Result};
use crate::rng::StreamRng;
use crate::special::{gamma_ratio, ln_gamma};
use rand_distr::{Distribution, Gamma as GammaDist};
use serde::{Deserialize, Serialize};

/// A rational stability index p/n with 1 <= p < n. Reduction is not
/// required; plans built from non-reduced pairs sample the same laws.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct RationalAlpha {
    pub p: u32,
    pub n: u32,
}

impl RationalAlpha {
    pub fn new(p: u32, n: u32) -> Result<Self> {
        if p >= 1 && p < n {
            Ok(RationalAlpha { p, n })
        } else {
            Err(Error::BadRationalIndex { p, n })
        }
    }

    pub fn alpha(&self) -> f64 {
        self.p as f64 / self.n as f64
    }

    /// Canonical reduced form, used for caching keys.
    pub fn reduced(&self) -> RationalAlpha {
        let g = gcd(self.p, self.n);
        RationalAlpha {
            p: self.p / g,
            n: self.n / g,
        }
    }

    /// Complementary index (n-p)/n.
    pub fn complement(&self) -> RationalAlpha {
        RationalAlpha {
            p: self.n - self.p,
            n: self.n,
        }
    }
}

fn gcd(a: u32, b: u32) -> u32 {
    if b == 0 {
        a
    } else {
        gcd(b, a % b)
    }
}

/// The index family q_0..q_p driving both factorizations.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct QIndices {
    q: Vec<u32>,
}

impl QIndices {
    pub fn as_slice(&self) -> &[u32] {
        &self.q
    }

    /// Interior index ranges: for each j in [0, p-1], the i-range
    /// [q_j + 1, q_{j+1} - 1] (possibly empty), yielded as (j, i) pairs in
    /// lexicographic order.
    pub fn interior(&self) -> impl Iterator<Item = (u32, u32)> + '_ {
        self.q
            .windows(2)
            .enumerate()
            .flat_map(|(j, w)| (w[0] + 1..w[1]).map(move |i| (j as u32, i)))
    }
}

/// q_j = sup{ i >= 1 : i p < j n }, with q_0 = 0 and q_p = n.
pub fn compute_q_indices(r: RationalAlpha) -> QIndices {
    let (p, n) = (r.p as u64, r.n as u64);
    let mut q = Vec::with_capacity(r.p as usize + 1);
    q.push(0);
    for j in 1..p {
        let jn = j * n;
        let sup = if jn % p == 0 { jn / p - 1 } else { jn / p };
        q.push(sup as u32);
    }
    q.push(r.n);
    QIndices { q }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", content = "params", rename_all = "snake_case")]
pub enum FactorKind {
    /// Beta(a, b) on (0,1).
    Beta { a: f64, b: f64 },
    /// Gamma with the given shape and unit rate.
    Gamma { shape: f64 },
    /// L^power for a unit exponential L.
    ExpPower { power: f64 },
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Factor {
    #[serde(flatten)]
    pub kind: FactorKind,
    pub exponent: f64,
}

/// An immutable sampling plan: a scalar prefactor times an independent
/// product of factors, each raised to its exponent.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FactorizationPlan {
    pub prefactor: f64,
    pub factors: Vec<Factor>,
}

/// Gamma(shape, 1) draw. `rand_distr` uses Marsaglia-Tsang squeeze with the
/// boosted-shape transform below shape 1, which keeps acceptance rates high
/// for the shapes as small as 1/n that these plans produce.
pub fn draw_gamma(shape: f64, rng: &mut StreamRng) -> f64 {
    debug_assert!(shape > 0.0);
    GammaDist::new(shape, 1.0).expect("positive shape").sample(rng)
}

/// Beta(a, b) draw by the two-Gamma ratio construction.
pub fn draw_beta(a: f64, b: f64, rng: &mut StreamRng) -> f64 {
    let x = draw_gamma(a, rng);
    let y = draw_gamma(b, rng);
    x / (x + y)
}

impl FactorizationPlan {
    pub fn sample(&self, rng: &mut StreamRng) -> f64 {
        let mut out = self.prefactor;
        for f in &self.factors {
            let v = match f.kind {
                FactorKind::Beta { a, b } => draw_beta(a, b, rng),
                FactorKind::Gamma { shape } => draw_gamma(shape, rng),
                FactorKind::ExpPower { power } => {
                    crate::dist::sample_exponential(rng).powf(power)
                }
            };
            out *= if f.exponent == 1.0 { v } else { v.powf(f.exponent) };
        }
        out
    }

    pub fn samples(&self, count: usize, state: crate::rng::RngState) -> Vec<f64> {
        let mut rng = state.stream();
        (0..count).map(|_| self.sample(&mut rng)).collect()
    }

    /// Analytic fractional moment E[plan^s] from the factor moment formulas:
    /// E[B_{a,b}^s] = G(a+s)G(a+b)/(G(a)G(a+b+s)), E[Gamma_c^s] = G(c+s)/G(c),
    /// E[(L^k)^s] = G(1+ks). Returns None where a factor moment diverges.
    pub fn moment(&self, s: f64) -> Option<f64> {
        let mut log_m = s * self.prefactor.ln();
        for f in &self.factors {
            let t = s * f.exponent;
            match f.kind {
                FactorKind::Beta { a, b } => {
                    if a + t <= 0.0 {
                        return None;
                    }
                    log_m += ln_gamma(a + t) + ln_gamma(a + b) - ln_gamma(a) - ln_gamma(a + b + t);
                }
                FactorKind::Gamma { shape } => {
                    if shape + t <= 0.0 {
                        return None;
                    }
                    log_m += ln_gamma(shape + t) - ln_gamma(shape);
                }
                FactorKind::ExpPower { power } => {
                    if 1.0 + power * t <= 0.0 {
                        return None;
                    }
                    log_m += ln_gamma(1.0 + power * t);
                }
            }
        }
        Some(log_m.exp())
    }

    /// Raise the whole plan to a power: (c prod F_i^{e_i})^t.
    pub fn powered(&self, t: f64) -> FactorizationPlan {
        FactorizationPlan {
            prefactor: self.prefactor.powf(t),
            factors: self
                .factors
                .iter()
                .map(|f| Factor {
                    kind: f.kind,
                    exponent: f.exponent * t,
                })
                .collect(),
        }
    }
}

/// The target moment curve of both plans: E[Z_{p/n}^{-p s}] = G(1+ns)/G(1+ps).
pub fn plan_moment_oracle(r: RationalAlpha, s: f64) -> f64 {
    gamma_ratio(1.0 + r.n as f64 * s, 1.0 + r.p as f64 * s)
}

fn push_beta(factors: &mut Vec<Factor>, a: f64, b: f64) {
    // A Beta with vanishing second parameter is the constant 1; this occurs
    // exactly at non-reduced (n, p) and is dropped from the plan.
    if b > 1e-12 {
        factors.push(Factor {
            kind: FactorKind::Beta { a, b },
            exponent: 1.0,
        });
    }
}

/// Beta-Gamma plan: Z_{p/n}^{-p} = (n^n / p^p) * prod interior Gamma_{i/n}
/// * prod edge B_{q_j/n, j/p - q_j/n}.
pub fn build_beta_gamma_plan(r: RationalAlpha) -> FactorizationPlan {
    let (pf, nf) = (r.p as f64, r.n as f64);
    let q = compute_q_indices(r);
    let mut factors = Vec::new();
    for (_, i) in q.interior() {
        factors.push(Factor {
            kind: FactorKind::Gamma {
                shape: i as f64 / nf,
            },
            exponent: 1.0,
        });
    }
    for j in 1..r.p {
        let qj = q.as_slice()[j as usize] as f64;
        push_beta(&mut factors, qj / nf, j as f64 / pf - qj / nf);
    }
    FactorizationPlan {
        prefactor: nf.powf(nf) / pf.powf(pf),
        factors,
    }
}

/// Beta plan: Z_{p/n}^{-p} = n^n / (p^p (n-p)^{n-p}) * L^{n-p}
/// * prod interior B_{i/n, (i-j)/(n-p) - i/n} * prod edge B_{q_j/n, j/p - q_j/n}.
pub fn build_beta_plan(r: RationalAlpha) -> FactorizationPlan {
    let mut plan = build_k_np_plan(r);
    plan.factors.insert(
        0,
        Factor {
            kind: FactorKind::ExpPower {
                power: (r.n - r.p) as f64,
            },
            exponent: 1.0,
        },
    );
    plan
}

/// The bounded factor K_{n,p}: the Beta plan with the exponential power
/// removed, so that Z_{p/n}^{-p} = L^{n-p} * K_{n,p} and
/// Z_{(n-p)/n}^{-(n-p)} = L^p * K_{n,p}.
pub fn build_k_np_plan(r: RationalAlpha) -> FactorizationPlan {
    let (pf, nf) = (r.p as f64, r.n as f64);
    let kf = nf - pf;
    let q = compute_q_indices(r);
    let mut factors = Vec::new();
    for (j, i) in q.interior() {
        let a = i as f64 / nf;
        push_beta(&mut factors, a, (i - j) as f64 / kf - a);
    }
    for j in 1..r.p {
        let qj = q.as_slice()[j as usize] as f64;
        push_beta(&mut factors, qj / nf, j as f64 / pf - qj / nf);
    }
    FactorizationPlan {
        prefactor: nf.powf(nf) / (pf.powf(pf) * kf.powf(kf)),
        factors,
    }
}

/// n-th moment of the bounded variable X_{p,0} with binomial moments
/// C(np, n) = Gamma(1 + n p) / (Gamma(1 + n(p-1)) n!), defined for p >= 1.
pub fn binomial_moment_x(p_real: f64, nth: u32) -> Result<f64> {
    if !(p_real.is_finite() && p_real >= 1.0) {
        return Err(Error::BinomialIndexOutOfRange(p_real));
    }
    let nf = nth as f64;
    Ok(
        (ln_gamma(1.0 + nf * p_real) - ln_gamma(1.0 + nf * (p_real - 1.0)) - ln_gamma(1.0 + nf))
            .exp(),
    )
}
