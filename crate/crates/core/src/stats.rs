//! Goodness-of-fit statistics for sampled batches.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// `(1/n) Σ cos(t xᵢ)`, the real part of the empirical characteristic
/// function. Summation is sequential so the result is independent of thread
/// count.
pub fn empirical_cf(draws: &[f64], t: f64) -> Result<f64> {
    if draws.is_empty() {
        return Err(Error::Precondition("empirical cf of an empty batch".into()));
    }
    if t == 0.0 {
        return Ok(1.0);
    }
    let cos: Vec<f64> = draws.par_iter().map(|x| (t * x).cos()).collect();
    Ok(cos.iter().sum::<f64>() / draws.len() as f64)
}

/// `P(K > λ)` for the Kolmogorov distribution.
pub fn kolmogorov_sf(lambda: f64) -> f64 {
    if lambda <= 0.0 {
        return 1.0;
    }
    if lambda < 0.2 {
        // series below converges slowly here and the value is 1 to 1e-50
        return 1.0;
    }
    let mut sum = 0.0;
    for k in 1..=100 {
        let term = (-2.0 * (k * k) as f64 * lambda * lambda).exp();
        sum += if k % 2 == 1 { term } else { -term };
        if term < 1e-18 {
            break;
        }
    }
    (2.0 * sum).clamp(0.0, 1.0)
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct KsResult {
    /// Supremum distance between the distribution functions.
    pub statistic: f64,
    /// Effective sample size (`nm/(n+m)` for two samples).
    pub n_eff: f64,
    /// Asymptotic p-value with Stephens' finite-sample correction.
    pub p_value: f64,
}

impl KsResult {
    fn new(statistic: f64, n_eff: f64) -> Self {
        let s = n_eff.sqrt();
        let p_value = kolmogorov_sf((s + 0.12 + 0.11 / s) * statistic);
        Self {
            statistic,
            n_eff,
            p_value,
        }
    }

    /// True when the test does not reject at level `alpha`.
    pub fn passes(&self, alpha: f64) -> bool {
        self.p_value > alpha
    }
}

fn sorted(draws: &[f64]) -> Result<Vec<f64>> {
    if draws.is_empty() {
        return Err(Error::Precondition("KS test of an empty batch".into()));
    }
    if let Some(x) = draws.iter().find(|x| x.is_nan()) {
        return Err(Error::Precondition(format!("batch contains {x}")));
    }
    let mut v = draws.to_vec();
    v.par_sort_unstable_by(f64::total_cmp);
    Ok(v)
}

/// One-sample Kolmogorov–Smirnov test against a continuous distribution
/// function.
pub fn ks_one_sample(draws: &[f64], cdf: impl Fn(f64) -> f64) -> Result<KsResult> {
    let v = sorted(draws)?;
    let n = v.len() as f64;
    let mut d: f64 = 0.0;
    for (i, &x) in v.iter().enumerate() {
        let f = cdf(x);
        d = d.max((i + 1) as f64 / n - f).max(f - i as f64 / n);
    }
    Ok(KsResult::new(d, n))
}

/// Two-sample Kolmogorov–Smirnov test.
pub fn ks_two_sample(a: &[f64], b: &[f64]) -> Result<KsResult> {
    let (a, b) = (sorted(a)?, sorted(b)?);
    let (n, m) = (a.len() as f64, b.len() as f64);
    let (mut i, mut j) = (0, 0);
    let mut d: f64 = 0.0;
    while i < a.len() && j < b.len() {
        let x = a[i].min(b[j]);
        while i < a.len() && a[i] <= x {
            i += 1;
        }
        while j < b.len() && b[j] <= x {
            j += 1;
        }
        d = d.max((i as f64 / n - j as f64 / m).abs());
    }
    Ok(KsResult::new(d, n * m / (n + m)))
}

/// Mean and unbiased variance.
pub fn mean_variance(draws: &[f64]) -> Result<(f64, f64)> {
    if draws.len() < 2 {
        return Err(Error::Precondition("need at least two draws".into()));
    }
    let n = draws.len() as f64;
    let mean = draws.iter().sum::<f64>() / n;
    let var = draws.iter().map(|x| (x - mean) * (x - mean)).sum::<f64>() / (n - 1.0);
    Ok((mean, var))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn kolmogorov_quantiles() {
        // classical critical values
        assert!((kolmogorov_sf(1.6276) - 0.01).abs() < 1e-4);
        assert!((kolmogorov_sf(1.3581) - 0.05).abs() < 1e-4);
        assert_eq!(kolmogorov_sf(0.0), 1.0);
    }

    #[test]
    fn uniform_grid_is_a_perfect_fit() {
        let n = 1000;
        let x: Vec<f64> = (0..n).map(|i| (i as f64 + 0.5) / n as f64).collect();
        let r = ks_one_sample(&x, |u| u.clamp(0.0, 1.0)).unwrap();
        assert!((r.statistic - 0.5 / n as f64).abs() < 1e-12);
        assert!(r.passes(0.01));
    }

    #[test]
    fn shifted_samples_are_rejected() {
        let a: Vec<f64> = (0..2000).map(|i| i as f64 / 2000.0).collect();
        let b: Vec<f64> = a.iter().map(|x| x + 0.2).collect();
        let r = ks_two_sample(&a, &b).unwrap();
        assert!((r.statistic - 0.2).abs() < 1e-3);
        assert!(!r.passes(0.01));
        assert!(ks_two_sample(&a, &a).unwrap().statistic == 0.0);
    }

    #[test]
    fn ecf_edge_cases() {
        assert_eq!(empirical_cf(&[0.0; 10], 3.0).unwrap(), 1.0);
        assert_eq!(empirical_cf(&[1.0, 2.0], 0.0).unwrap(), 1.0);
        assert!(empirical_cf(&[], 1.0).is_err());
    }
}
