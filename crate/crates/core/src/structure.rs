//! Pointwise algebraic checks that need no integration: the factorizations
//! of the characteristic functions, additivity of the Lévy densities, and the
//! derivative link between each law's measure and its driving law's.

use serde::{Deserialize, Serialize};

use crate::analytic::{self, levy_density, sd_necessary_condition_check, LevyDensityProfile};
use crate::error::{Error, Result};
use crate::law::LawId;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum CheckId {
    /// `φ_C = φ_S · φ_T`
    #[serde(rename = "Eq4")]
    CfFactorization,
    /// `log ψ_C = log ψ_S + log ψ_T`
    #[serde(rename = "Eq8")]
    DriverFactorization,
    /// `m_C = m_S + m_T`, relative
    #[serde(rename = "AdditivityM")]
    MAdditivity,
    /// `n_C = n_S + n_T`, relative
    #[serde(rename = "AdditivityN")]
    NAdditivity,
    /// `-(x m(x))' = n(x)` by finite differences, relative
    #[serde(rename = "DerivativeLink")]
    DerivativeLink,
    /// `x m(x)` non-increasing on a grid
    #[serde(rename = "MonotoneProfile")]
    MonotoneProfile,
    /// `x e^{-x}` must be flagged as not non-increasing
    #[serde(rename = "NonSdFlagged")]
    NonSdFlagged,
}

impl CheckId {
    pub fn name(self) -> &'static str {
        match self {
            CheckId::CfFactorization => "Eq4",
            CheckId::DriverFactorization => "Eq8",
            CheckId::MAdditivity => "AdditivityM",
            CheckId::NAdditivity => "AdditivityN",
            CheckId::DerivativeLink => "DerivativeLink",
            CheckId::MonotoneProfile => "MonotoneProfile",
            CheckId::NonSdFlagged => "NonSdFlagged",
        }
    }
}

impl std::fmt::Display for CheckId {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(self.name())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CheckRecord {
    pub check: CheckId,
    pub law: Option<LawId>,
    /// The `t` or `x` at which the check was made; 0 for grid-wide checks.
    pub at: f64,
    pub lhs: f64,
    pub rhs: f64,
    /// Absolute, or relative for the density checks.
    pub error: f64,
    pub tolerance: f64,
    pub passed: bool,
}

impl CheckRecord {
    fn new(check: CheckId, law: Option<LawId>, at: f64, lhs: f64, rhs: f64, relative: bool, tolerance: f64) -> Self {
        let diff = (lhs - rhs).abs();
        let error = if relative { diff / rhs.abs() } else { diff };
        Self {
            check,
            law,
            at,
            lhs,
            rhs,
            error,
            tolerance,
            passed: error <= tolerance,
        }
    }
}

pub const FACTORIZATION_TOL: f64 = 1e-12;
pub const ADDITIVITY_TOL: f64 = 1e-12;
pub const DERIVATIVE_TOL: f64 = 1e-6;

/// `x` grid for the density checks: 60 log-spaced points on `[0.1, 10]`.
pub fn default_x_grid() -> Vec<f64> {
    (0..60).map(|i| 0.1 * 100f64.powf(i as f64 / 59.0)).collect()
}

/// Runs every check: factorizations over `t_grid`, density relations over
/// `x_grid`, and the monotonicity verdicts on a fine grid over `(0, 40]`.
pub fn structural_suite(t_grid: &[f64], x_grid: &[f64]) -> Result<Vec<CheckRecord>> {
    use LawId::*;
    let mut out = Vec::new();
    for &t in t_grid {
        let c = analytic::cf_value(CoshLaw, t)?;
        let product = analytic::cf_value(SinhLaw, t)? * analytic::cf_value(TanhLaw, t)?;
        out.push(CheckRecord::new(CheckId::CfFactorization, None, t, c, product, false, FACTORIZATION_TOL));
        let lc = analytic::log_cf_value(BdlpCosh, t)?;
        let sum = analytic::log_cf_value(BdlpSinh, t)? + analytic::log_cf_value(BdlpTanh, t)?;
        out.push(CheckRecord::new(CheckId::DriverFactorization, None, t, lc, sum, false, FACTORIZATION_TOL));
    }
    for &x in x_grid {
        let m = |law| levy_density(&LevyDensityProfile::m(law)?, x);
        let n = |law| levy_density(&LevyDensityProfile::n(law)?, x);
        out.push(CheckRecord::new(CheckId::MAdditivity, None, x, m(CoshLaw)?, m(SinhLaw)? + m(TanhLaw)?, true, ADDITIVITY_TOL));
        out.push(CheckRecord::new(CheckId::NAdditivity, None, x, n(BdlpCosh)?, n(BdlpSinh)? + n(BdlpTanh)?, true, ADDITIVITY_TOL));
        for law in LawId::HYPERBOLIC {
            let mp = LevyDensityProfile::m(law)?;
            let xm = |y: f64| -> Result<f64> { Ok(y * levy_density(&mp, y)?) };
            // five-point stencil: the densities decay like e^{-πx}, which
            // defeats a plain central difference near x = 10
            let h = 1e-3 * x;
            let derivative = -(8.0 * (xm(x + h)? - xm(x - h)?) - (xm(x + 2.0 * h)? - xm(x - 2.0 * h)?)) / (12.0 * h);
            let paired = mp.paired_n().ok_or(Error::Unsupported(law))?;
            let exact = levy_density(&paired, x)?;
            out.push(CheckRecord::new(CheckId::DerivativeLink, Some(law), x, derivative, exact, true, DERIVATIVE_TOL));
        }
    }
    let fine: Vec<f64> = (1..=4000).map(|i| i as f64 * 0.01).collect();
    for law in [Laplace, CoshLaw, SinhLaw, TanhLaw] {
        let mp = LevyDensityProfile::m(law)?;
        let verdict = sd_necessary_condition_check(|x| levy_density(&mp, x).unwrap_or(f64::NAN), &fine)?;
        let holds = f64::from(u8::from(verdict.holds));
        out.push(CheckRecord::new(CheckId::MonotoneProfile, Some(law), 0.0, holds, 1.0, false, 0.0));
    }
    let verdict = sd_necessary_condition_check(|x| (-x).exp(), &fine)?;
    let flagged = f64::from(u8::from(!verdict.holds));
    out.push(CheckRecord::new(CheckId::NonSdFlagged, None, 0.0, flagged, 1.0, false, 0.0));
    Ok(out)
}
