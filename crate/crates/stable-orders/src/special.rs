//! Gamma-arithmetic helpers and stabilized sine evaluations.
//!
//! Thin wrappers over `statrs` plus the few pieces it does not provide:
//! a reciprocal gamma that is finite at the poles, log-space gamma ratios,
//! and sin(pi x) evaluated from the fractional part so that arguments near
//! integers keep full precision.

use statrs::function::erf;
use statrs::function::gamma as sg;

pub fn gamma(x: f64) -> f64 {
    sg::gamma(x)
}

pub fn ln_gamma(x: f64) -> f64 {
    sg::ln_gamma(x)
}

pub fn erfc(x: f64) -> f64 {
    erf::erfc(x)
}

pub fn erf(x: f64) -> f64 {
    erf::erf(x)
}

/// Gamma(a) / Gamma(b) for positive a, b, computed in log space.
pub fn gamma_ratio(a: f64, b: f64) -> f64 {
    (ln_gamma(a) - ln_gamma(b)).exp()
}

/// 1 / Gamma(x), finite everywhere (0 at the poles x = 0, -1, -2, ...).
pub fn rgamma(x: f64) -> f64 {
    if x > 0.0 {
        (-ln_gamma(x)).exp()
    } else {
        // reflection: 1/Gamma(x) = sin(pi x) Gamma(1-x) / pi
        sinpi(x) * gamma(1.0 - x) / std::f64::consts::PI
    }
}

/// sin(pi x) computed from the fractional part of x.
pub fn sinpi(x: f64) -> f64 {
    let n = x.floor();
    let r = x - n;
    let sign = if n.rem_euclid(2.0) < 0.5 { 1.0 } else { -1.0 };
    if r == 0.0 {
        return 0.0;
    }
    // fold to [0, 1/2] where sin(pi r) is well conditioned
    let v = if r <= 0.5 {
        (std::f64::consts::PI * r).sin()
    } else {
        (std::f64::consts::PI * (1.0 - r)).sin()
    };
    sign * v
}

/// log(sin(pi t) / (pi t)) for t in (0, 1), stable at both endpoints.
///
/// For t <= 1/2 this is log of the sinc residual; for t > 1/2 it folds
/// through sin(pi t) = sin(pi (1-t)).
pub fn ln_sinc_pi(t: f64) -> f64 {
    debug_assert!(t > 0.0 && t < 1.0);
    if t <= 0.5 {
        let x = std::f64::consts::PI * t;
        if x < 1e-6 {
            // log(sin x / x) = -x^2/6 - x^4/180 + O(x^6)
            let x2 = x * x;
            -x2 / 6.0 - x2 * x2 / 180.0
        } else {
            (x.sin() / x).ln()
        }
    } else {
        let y = std::f64::consts::PI * (1.0 - t);
        y.sin().ln() - (std::f64::consts::PI * t).ln()
    }
}

/// Two-sided 99% normal quantile used for order-statistic confidence bands.
pub const Z99: f64 = 2.5758293035489004;
