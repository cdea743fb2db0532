//! Closed forms for the seven laws: characteristic functions and their
//! logarithms, Lévy densities, the densities that exist in closed form,
//! truncated product representations, and the selfdecomposability
//! factor `ρ_c`.
//!
//! All functions are pure and evaluate in `O(1)` except the product
//! truncation, which is linear in the number of retained factors.

pub(crate) mod hyperbolic;
mod levy;
mod product;

use std::f64::consts::PI;

use serde::{Deserialize, Serialize};

use crate::error::{ensure_finite, Error, Result};
use crate::law::LawId;

pub use levy::{levy_density, LevyDensityProfile, MeasureKind};
pub use product::{truncated_product_cf, ProductTruncation};
pub(crate) use product::coefficient_tail;

/// Default argument grid on which identities are checked. It reaches both
/// the Taylor regime near the origin and the exponential regime.
pub const DEFAULT_GRID: [f64; 9] = [0.01, 0.1, 0.25, 0.5, 1.0, 2.0, 5.0, 10.0, 25.0];

/// A characteristic function value. All laws here are symmetric, so the
/// value is real and even in `t`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CharFnValue {
    pub t: f64,
    pub value: f64,
}

impl CharFnValue {
    pub fn of(law: LawId, t: f64) -> Result<Self> {
        Ok(Self {
            t,
            value: cf_value(law, t)?,
        })
    }
}

/// Characteristic function of `law` at `t`.
///
/// The `Bdlp*` laws return `ψ(t)`, the characteristic function of the
/// time-one marginal of the driving process.
pub fn cf_value(law: LawId, t: f64) -> Result<f64> {
    use hyperbolic::*;
    ensure_finite("t", t)?;
    Ok(match law {
        LawId::Laplace => 1.0 / (1.0 + t * t),
        LawId::CoshLaw => sech(t),
        LawId::SinhLaw => t_over_sinh(t),
        LawId::TanhLaw => tanh_over_t(t),
        LawId::BdlpCosh => (-t_tanh(t)).exp(),
        LawId::BdlpSinh => (-t_coth_minus_one(t)).exp(),
        LawId::BdlpTanh => double_angle_minus_one(t).exp(),
    })
}

/// Logarithm of [`cf_value`], computed from stable forms rather than by
/// taking the log of a possibly underflowed value.
pub fn log_cf_value(law: LawId, t: f64) -> Result<f64> {
    use hyperbolic::*;
    ensure_finite("t", t)?;
    Ok(match law {
        LawId::Laplace => -(t * t).ln_1p(),
        LawId::CoshLaw => -log_cosh(t),
        LawId::SinhLaw => log_t_over_sinh(t),
        LawId::TanhLaw => log_tanh_over_t(t),
        LawId::BdlpCosh => -t_tanh(t),
        LawId::BdlpSinh => -t_coth_minus_one(t),
        LawId::BdlpTanh => double_angle_minus_one(t),
    })
}

/// Probability density, for the laws that have one in closed form:
/// `Laplace` (`e^{-|x|}/2`), `CoshLaw` (`1/(2 cosh(πx/2))`) and `SinhLaw`
/// (`(π/4) sech²(πx/2)`).
pub fn pdf_value(law: LawId, x: f64) -> Result<f64> {
    ensure_finite("x", x)?;
    match law {
        LawId::Laplace => Ok(0.5 * (-x.abs()).exp()),
        LawId::CoshLaw => Ok(0.5 * hyperbolic::sech(0.5 * PI * x)),
        LawId::SinhLaw => {
            let s = hyperbolic::sech(0.5 * PI * x);
            Ok(0.25 * PI * s * s)
        }
        other => Err(Error::Unsupported(other)),
    }
}

/// Distribution function matching [`pdf_value`]. The cosh law is the
/// hyperbolic secant law, the sinh law the logistic law with scale `1/π`.
pub fn cdf_value(law: LawId, x: f64) -> Result<f64> {
    ensure_finite("x", x)?;
    match law {
        LawId::Laplace => Ok(if x < 0.0 {
            0.5 * x.exp()
        } else {
            1.0 - 0.5 * (-x).exp()
        }),
        LawId::CoshLaw => Ok(2.0 / PI * (0.5 * PI * x).exp().atan()),
        LawId::SinhLaw => Ok(1.0 / (1.0 + (-PI * x).exp())),
        other => Err(Error::Unsupported(other)),
    }
}

/// The factor `ρ_c(t) = φ(t) / φ(ct)` of the selfdecomposability relation.
pub fn sd_factor_cf(law: LawId, c: f64, t: f64) -> Result<f64> {
    if !law.is_selfdecomposable() {
        return Err(Error::Precondition(format!(
            "{law} is not one of the selfdecomposable laws"
        )));
    }
    if !(c > 0.0 && c < 1.0) {
        return Err(Error::Precondition(format!("c must lie in (0, 1), got {c}")));
    }
    Ok((log_cf_value(law, t)? - log_cf_value(law, c * t)?).exp())
}

/// Outcome of [`sd_necessary_condition_check`].
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct MonotonicityVerdict {
    pub holds: bool,
    /// Index `i` of the first grid point with `x_i h(x_i) > x_{i-1} h(x_{i-1})`.
    pub first_violation: Option<usize>,
}

/// Relative slack under which consecutive values of `x h(x)` count as ties.
pub const MONOTONICITY_TIE_TOL: f64 = 1e-12;

/// Checks that `x ↦ x·h(x)` is non-increasing along `grid`, which a Lévy
/// density `h` of a selfdecomposable law must satisfy on each half-line.
pub fn sd_necessary_condition_check<F>(density: F, grid: &[f64]) -> Result<MonotonicityVerdict>
where
    F: Fn(f64) -> f64,
{
    if grid.len() < 3 {
        return Err(Error::Precondition("grid needs at least 3 points".into()));
    }
    if grid.iter().any(|&x| !(x > 0.0) || !x.is_finite()) {
        return Err(Error::Precondition("grid points must be finite and > 0".into()));
    }
    if grid.windows(2).any(|w| w[1] <= w[0]) {
        return Err(Error::Precondition("grid must be strictly increasing".into()));
    }

    let mut prev: Option<f64> = None;
    for (i, &x) in grid.iter().enumerate() {
        let h = density(x);
        if !h.is_finite() {
            return Err(Error::Evaluation { x, value: h });
        }
        let g = x * h;
        if let Some(p) = prev {
            if g - p > MONOTONICITY_TIE_TOL * p.abs() {
                return Ok(MonotonicityVerdict {
                    holds: false,
                    first_violation: Some(i),
                });
            }
        }
        prev = Some(g);
    }
    Ok(MonotonicityVerdict {
        holds: true,
        first_violation: None,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn non_finite_arguments_are_domain_errors() {
        for law in LawId::ALL {
            assert!(matches!(cf_value(law, f64::NAN), Err(Error::Domain(_))));
            assert!(matches!(log_cf_value(law, f64::INFINITY), Err(Error::Domain(_))));
        }
    }

    #[test]
    fn pdf_is_unsupported_without_closed_form() {
        for law in [LawId::TanhLaw, LawId::BdlpCosh, LawId::BdlpSinh, LawId::BdlpTanh] {
            assert_eq!(pdf_value(law, 0.3), Err(Error::Unsupported(law)));
            assert_eq!(cdf_value(law, 0.3), Err(Error::Unsupported(law)));
        }
    }

    #[test]
    fn cdf_is_the_integral_of_pdf() {
        for law in [LawId::Laplace, LawId::CoshLaw, LawId::SinhLaw] {
            assert!((cdf_value(law, 0.0).unwrap() - 0.5).abs() < 1e-15);
            for x in [-3.0, -0.7, 0.2, 1.5, 4.0] {
                let h = 1e-5;
                let fd = (cdf_value(law, x + h).unwrap() - cdf_value(law, x - h).unwrap())
                    / (2.0 * h);
                let pdf = pdf_value(law, x).unwrap();
                assert!((fd - pdf).abs() < 1e-9 * pdf.max(1.0), "{law} at {x}");
            }
        }
    }

    #[test]
    fn sd_factor_rejects_bad_c() {
        assert!(sd_factor_cf(LawId::CoshLaw, 0.0, 1.0).is_err());
        assert!(sd_factor_cf(LawId::CoshLaw, 1.0, 1.0).is_err());
        assert!(sd_factor_cf(LawId::BdlpCosh, 0.5, 1.0).is_err());
    }

    #[test]
    fn monotonicity_check_validates_grid() {
        let h = |x: f64| (-x).exp() / x;
        assert!(sd_necessary_condition_check(h, &[1.0, 2.0]).is_err());
        assert!(sd_necessary_condition_check(h, &[0.0, 1.0, 2.0]).is_err());
        assert!(sd_necessary_condition_check(h, &[1.0, 3.0, 2.0]).is_err());
        assert!(matches!(
            sd_necessary_condition_check(|_| f64::NAN, &[1.0, 2.0, 3.0]),
            Err(Error::Evaluation { .. })
        ));
    }
}
