//! Statistical utilities: an exact-form binomial tail bound, the two-sample
//! Kolmogorov-Smirnov test over integer samples, and chi-square helpers.

use statrs::distribution::{ChiSquared, ContinuousCDF};
use thiserror::Error;

#[derive(Debug, Error, PartialEq)]
pub enum StatsError {
    #[error("domain violation: need 0 < p < a < 1, got p = {p}, a = {a}")]
    TailBoundDomain { p: f64, a: f64 },
    #[error("empty sample")]
    EmptySample,
    #[error("significance must lie in (0, 1), got {0}")]
    BadSignificance(f64),
}

/// Upper bound on P[B(n, p) >= a n]:
/// exp(-n (a ln(a/p) + (1-a) ln((1-a)/(1-p)))).
pub fn binomial_tail_bound(n: u64, p: f64, a: f64) -> Result<f64, StatsError> {
    if !(p > 0.0 && p < a && a < 1.0) {
        return Err(StatsError::TailBoundDomain { p, a });
    }
    let kl = a * (a / p).ln() + (1.0 - a) * ((1.0 - a) / (1.0 - p)).ln();
    Ok((-(n as f64) * kl).exp())
}

/// Exact upper tail P[B(n, p) >= k] by direct summation. Intended for the
/// small n (a few hundred at most) where the terms stay well conditioned.
pub fn binomial_upper_tail(n: u64, p: f64, k: u64) -> f64 {
    if k == 0 {
        return 1.0;
    }
    if k > n {
        return 0.0;
    }
    let ln_term = ln_choose(n, k) + k as f64 * p.ln() + (n - k) as f64 * (1.0 - p).ln();
    let mut term = ln_term.exp();
    let mut sum = 0.0f64;
    for j in k..=n {
        sum += term;
        if j < n {
            term *= (n - j) as f64 / (j + 1) as f64 * (p / (1.0 - p));
        }
    }
    sum.min(1.0)
}

fn ln_choose(n: u64, k: u64) -> f64 {
    ln_factorial(n) - ln_factorial(k) - ln_factorial(n - k)
}

fn ln_factorial(n: u64) -> f64 {
    (2..=n).map(|i| (i as f64).ln()).sum()
}

/// Two-sample Kolmogorov-Smirnov report.
#[derive(Debug, Clone, serde::Serialize)]
pub struct KsReport {
    pub statistic: f64,
    pub critical: f64,
    pub alpha: f64,
    pub m: usize,
    pub n: usize,
    /// True iff the statistic is below the critical value.
    pub consistent: bool,
}

/// Asymptotic two-sample critical value c(alpha) sqrt((m+n)/(m n)) with
/// c(alpha) = sqrt(-ln(alpha/2)/2). Conservative for discrete samples.
pub fn ks_critical_value(m: usize, n: usize, alpha: f64) -> Result<f64, StatsError> {
    if !(alpha > 0.0 && alpha < 1.0) {
        return Err(StatsError::BadSignificance(alpha));
    }
    if m == 0 || n == 0 {
        return Err(StatsError::EmptySample);
    }
    let c = (-(alpha / 2.0).ln() / 2.0).sqrt();
    Ok(c * ((m + n) as f64 / (m as f64 * n as f64)).sqrt())
}

/// Two-sample KS test over integer-valued samples. Censored observations are
/// passed as `u64::MAX` and participate as values beyond every finite one,
/// which is the standard extended-line treatment.
pub fn ks_two_sample(xs: &[u64], ys: &[u64], alpha: f64) -> Result<KsReport, StatsError> {
    if xs.is_empty() || ys.is_empty() {
        return Err(StatsError::EmptySample);
    }
    let mut xs = xs.to_vec();
    let mut ys = ys.to_vec();
    xs.sort_unstable();
    ys.sort_unstable();
    let (m, n) = (xs.len(), ys.len());
    let (mut i, mut j) = (0usize, 0usize);
    let mut d = 0.0f64;
    while i < m && j < n {
        let v = xs[i].min(ys[j]);
        while i < m && xs[i] == v {
            i += 1;
        }
        while j < n && ys[j] == v {
            j += 1;
        }
        let diff = (i as f64 / m as f64 - j as f64 / n as f64).abs();
        if diff > d {
            d = diff;
        }
    }
    let critical = ks_critical_value(m, n, alpha)?;
    Ok(KsReport {
        statistic: d,
        critical,
        alpha,
        m,
        n,
        consistent: d < critical,
    })
}

/// Chi-square statistic for a two-category (success/failure) goodness-of-fit
/// against success probability `p`; one degree of freedom.
pub fn chi_square_binary_stat(successes: u64, trials: u64, p: f64) -> f64 {
    assert!(trials > 0 && p > 0.0 && p < 1.0);
    let t = trials as f64;
    let (es, ef) = (t * p, t * (1.0 - p));
    let (os, of) = (successes as f64, (trials - successes) as f64);
    (os - es).powi(2) / es + (of - ef).powi(2) / ef
}

/// Critical value of the chi-square distribution with `df` degrees of freedom
/// at significance `alpha` (upper tail).
pub fn chi_square_critical(df: f64, alpha: f64) -> Result<f64, StatsError> {
    if !(alpha > 0.0 && alpha < 1.0) {
        return Err(StatsError::BadSignificance(alpha));
    }
    let dist = ChiSquared::new(df).expect("positive degrees of freedom");
    Ok(dist.inverse_cdf(1.0 - alpha))
}
