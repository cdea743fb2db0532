use std::f64::consts::PI;

use serde::{Deserialize, Serialize};

use super::hyperbolic::trigamma;
use crate::error::{ensure_finite, Error, Result};
use crate::law::LawId;

/// Truncation of the infinite product representation of a hyperbolic
/// characteristic function after `k` factors.
///
/// `log_error_bound` bounds `|log(partial product) - log(cf)|` uniformly for
/// `|t| ≤ t_max`. It equals `t_max²` times the exact tail sum of the factor
/// coefficients, using `log(1+y) ≤ y` on every omitted factor.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ProductTruncation {
    law: LawId,
    k: usize,
    t_max: f64,
    log_error_bound: f64,
}

impl ProductTruncation {
    pub fn new(law: LawId, k: usize, t_max: f64) -> Result<Self> {
        if !LawId::HYPERBOLIC.contains(&law) {
            return Err(Error::Precondition(format!(
                "{law} has no product representation"
            )));
        }
        if k == 0 {
            return Err(Error::Precondition("at least one factor is required".into()));
        }
        ensure_finite("t_max", t_max)?;
        if t_max < 0.0 {
            return Err(Error::Precondition(format!("t_max must be ≥ 0, got {t_max}")));
        }
        Ok(Self {
            law,
            k,
            t_max,
            log_error_bound: t_max * t_max * coefficient_tail(law, k),
        })
    }

    pub fn law(&self) -> LawId {
        self.law
    }

    pub fn k(&self) -> usize {
        self.k
    }

    pub fn t_max(&self) -> f64 {
        self.t_max
    }

    pub fn log_error_bound(&self) -> f64 {
        self.log_error_bound
    }
}

/// `Σ_{j>k} c_j`, where the factors are `1 + c_j t²` (cosh, sinh) or the
/// ratio `(1 + a_j t²)/(1 + b_j t²)` with `c_j = b_j - a_j` (tanh).
pub(crate) fn coefficient_tail(law: LawId, k: usize) -> f64 {
    let k = k as f64;
    let pi2 = PI * PI;
    match law {
        // Σ_{j>k} 4/((2j-1)²π²) = ψ'(k + 1/2) / π²
        LawId::CoshLaw => trigamma(k + 0.5) / pi2,
        // Σ_{j>k} 1/(j²π²) = ψ'(k + 1) / π²
        LawId::SinhLaw => trigamma(k + 1.0) / pi2,
        LawId::TanhLaw => (trigamma(k + 0.5) - trigamma(k + 1.0)) / pi2,
        _ => unreachable!(),
    }
}

/// The `k`-factor partial product approximating the characteristic function
/// of a hyperbolic law.
pub fn truncated_product_cf(law: LawId, t: f64, trunc: &ProductTruncation) -> Result<f64> {
    ensure_finite("t", t)?;
    if law != trunc.law {
        return Err(Error::Precondition(format!(
            "truncation was built for {}, not {law}",
            trunc.law
        )));
    }
    if t.abs() > trunc.t_max {
        return Err(Error::Precondition(format!(
            "|t| = {} exceeds t_max = {}",
            t.abs(),
            trunc.t_max
        )));
    }
    let t2 = t * t;
    let pi2 = PI * PI;
    let log_cf: f64 = (1..=trunc.k)
        .map(|j| {
            let j = j as f64;
            match law {
                LawId::CoshLaw => {
                    let odd = 2.0 * j - 1.0;
                    -(4.0 * t2 / (odd * odd * pi2)).ln_1p()
                }
                LawId::SinhLaw => -(t2 / (j * j * pi2)).ln_1p(),
                LawId::TanhLaw => {
                    let h = j - 0.5;
                    (t2 / (j * j * pi2)).ln_1p() - (t2 / (h * h * pi2)).ln_1p()
                }
                _ => unreachable!(),
            }
        })
        .sum();
    Ok(log_cf.exp())
}
