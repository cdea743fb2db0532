//! Numerical proof of the Lévy–Khintchine identities.
//!
//! Each `verify_*` operation integrates one side of an identity and compares
//! it with the closed form from [`crate::analytic`]. Integrands are symmetric,
//! so only the positive half-line is integrated and the result doubled.
//!
//! The half-line is split in three:
//!
//! * `(0, singularity_split]`: the density's pole at the origin is cancelled
//!   analytically. `1 - cos tx` and `x^p · density(x)` are expanded as power
//!   series and the product integrated term by term.
//! * `[singularity_split, tail_cut]`: adaptive Gauss–Kronrod. For `|t| > 10`
//!   the initial panels are at most `2π/(8|t|)` wide, so every period of
//!   `cos tx` gets at least eight panels.
//! * `[tail_cut, ∞)`: dropped. An exponential envelope of the density bounds
//!   what is lost, and the bound is added to the reported error.

mod kronrod;
mod series;

use std::f64::consts::PI;
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::analytic::{self, hyperbolic, LevyDensityProfile};
use crate::error::{ensure_finite, Error, Result};
use crate::law::LawId;

use kronrod::{integrate, partition};
use series::{regularized_density, Series};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct QuadratureConfig {
    /// Absolute accuracy requested from the integrator.
    pub abs_tol: f64,
    /// Relative accuracy requested from the integrator.
    pub rel_tol: f64,
    pub singularity_split: f64,
    pub tail_cut: f64,
    pub max_subdivisions: usize,
    /// Largest `|lhs - rhs|` for which an identity is reported as passing.
    pub identity_tol: f64,
}

impl Default for QuadratureConfig {
    fn default() -> Self {
        Self {
            abs_tol: 1e-11,
            rel_tol: 1e-13,
            singularity_split: 0.1,
            tail_cut: 60.0,
            max_subdivisions: 20_000,
            identity_tol: 1e-8,
        }
    }
}

impl QuadratureConfig {
    pub fn validate(&self) -> Result<()> {
        let positive = |name: &str, v: f64| {
            if v > 0.0 && v.is_finite() {
                Ok(())
            } else {
                Err(Error::Config(format!("{name} must be positive, got {v}")))
            }
        };
        positive("abs_tol", self.abs_tol)?;
        positive("rel_tol", self.rel_tol)?;
        positive("singularity_split", self.singularity_split)?;
        positive("identity_tol", self.identity_tol)?;
        if !(self.tail_cut > self.singularity_split) || !self.tail_cut.is_finite() {
            return Err(Error::Config(format!(
                "need 0 < singularity_split ({}) < tail_cut ({})",
                self.singularity_split, self.tail_cut
            )));
        }
        // the series is only trusted well inside its radius of convergence (2)
        if self.singularity_split > 0.5 {
            return Err(Error::Config(format!(
                "singularity_split {} is too large for the origin expansion",
                self.singularity_split
            )));
        }
        if self.max_subdivisions == 0 {
            return Err(Error::Config("max_subdivisions must be ≥ 1".into()));
        }
        Ok(())
    }

    fn check_tail(&self, bound: f64) -> Result<()> {
        if bound > self.abs_tol / 10.0 {
            return Err(Error::Config(format!(
                "tail beyond {} may contribute {bound:e}, more than abs_tol/10",
                self.tail_cut
            )));
        }
        Ok(())
    }
}

/// The identities checked numerically. The serialized names are the report
/// identifiers used by the command line.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum IdentityId {
    /// `∫(1 - cos tx) n_C(x) dx = t tanh t`
    #[serde(rename = "Eq9")]
    NCosh,
    /// `∫(1 - cos tx) n_S(x) dx = t coth t - 1`
    #[serde(rename = "Eq10")]
    NSinh,
    /// `∫(1 - cos tx) n_T(x) dx = 1 - 2t / sinh 2t`
    #[serde(rename = "Eq11")]
    NTanh,
    /// `∫ cos tx · n_T(x) dx = 2t / sinh 2t`
    #[serde(rename = "Eq12")]
    CosineTransform,
    #[serde(rename = "LKlogLaplace")]
    LevyKhintchineLaplace,
    #[serde(rename = "LKlogCosh")]
    LevyKhintchineCosh,
    #[serde(rename = "LKlogSinh")]
    LevyKhintchineSinh,
    #[serde(rename = "LKlogTanh")]
    LevyKhintchineTanh,
    /// `∫_0^t log ψ(v) dv/v = log φ(t)`
    #[serde(rename = "PropD_Cosh")]
    LogIntegralCosh,
    #[serde(rename = "PropD_Sinh")]
    LogIntegralSinh,
    #[serde(rename = "PropD_Tanh")]
    LogIntegralTanh,
    /// `∫_{|x|≥ε} log(1+|x|) dN(x) < ∞`
    #[serde(rename = "LogMomentN")]
    LogMoment,
}

impl IdentityId {
    pub const ALL: [IdentityId; 12] = [
        IdentityId::NCosh,
        IdentityId::NSinh,
        IdentityId::NTanh,
        IdentityId::CosineTransform,
        IdentityId::LevyKhintchineLaplace,
        IdentityId::LevyKhintchineCosh,
        IdentityId::LevyKhintchineSinh,
        IdentityId::LevyKhintchineTanh,
        IdentityId::LogIntegralCosh,
        IdentityId::LogIntegralSinh,
        IdentityId::LogIntegralTanh,
        IdentityId::LogMoment,
    ];

    pub fn name(self) -> &'static str {
        match self {
            IdentityId::NCosh => "Eq9",
            IdentityId::NSinh => "Eq10",
            IdentityId::NTanh => "Eq11",
            IdentityId::CosineTransform => "Eq12",
            IdentityId::LevyKhintchineLaplace => "LKlogLaplace",
            IdentityId::LevyKhintchineCosh => "LKlogCosh",
            IdentityId::LevyKhintchineSinh => "LKlogSinh",
            IdentityId::LevyKhintchineTanh => "LKlogTanh",
            IdentityId::LogIntegralCosh => "PropD_Cosh",
            IdentityId::LogIntegralSinh => "PropD_Sinh",
            IdentityId::LogIntegralTanh => "PropD_Tanh",
            IdentityId::LogMoment => "LogMomentN",
        }
    }

    /// The law whose measure or transform the identity is about, when the
    /// identifier determines it.
    pub fn law(self) -> Option<LawId> {
        use IdentityId::*;
        Some(match self {
            NCosh => LawId::BdlpCosh,
            NSinh => LawId::BdlpSinh,
            NTanh | CosineTransform => LawId::BdlpTanh,
            LevyKhintchineLaplace => LawId::Laplace,
            LevyKhintchineCosh | LogIntegralCosh => LawId::CoshLaw,
            LevyKhintchineSinh | LogIntegralSinh => LawId::SinhLaw,
            LevyKhintchineTanh | LogIntegralTanh => LawId::TanhLaw,
            LogMoment => return None,
        })
    }
}

impl fmt::Display for IdentityId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for IdentityId {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        IdentityId::ALL
            .into_iter()
            .find(|id| id.name() == s.trim())
            .ok_or_else(|| Error::Config(format!("unknown identity `{s}`")))
    }
}

/// One checked instance of an identity.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct IdentityRecord {
    pub identity_id: IdentityId,
    pub law: LawId,
    /// Argument `t`, or the cut-off `ε` for the logarithmic moment.
    pub t: f64,
    pub lhs_numeric: f64,
    pub rhs_analytic: f64,
    pub abs_err: f64,
    /// Integrator error estimate including the dropped tail.
    pub quad_err: f64,
    pub tolerance: f64,
    pub passed: bool,
}

impl IdentityRecord {
    fn new(
        identity_id: IdentityId,
        law: LawId,
        t: f64,
        lhs: f64,
        rhs: f64,
        quad_err: f64,
        tolerance: f64,
    ) -> Self {
        let abs_err = (lhs - rhs).abs();
        Self {
            identity_id,
            law,
            t,
            lhs_numeric: lhs,
            rhs_analytic: rhs,
            abs_err,
            quad_err,
            tolerance,
            passed: abs_err <= tolerance,
        }
    }
}

/// `2 ∫_0^∞ (1 - cos tx) density(x) dx`, with its error estimate.
fn lk_integral(profile: &LevyDensityProfile, t: f64, cfg: &QuadratureConfig) -> Result<(f64, f64)> {
    cfg.validate()?;
    let tail = 4.0 * profile.tail_mass_bound(cfg.tail_cut);
    cfg.check_tail(tail)?;
    if t == 0.0 {
        return Ok((0.0, 0.0));
    }

    let split = cfg.singularity_split;
    let p = profile.origin_order() as usize;
    // (1 - cos tx) d(x) = [(1 - cos tx)/x²] · x^{2-p} · [x^p d(x)]
    let near = &Series::one_minus_cos_over_square(t).shift_up(2 - p) * &regularized_density(profile);
    let near_value = near.integrate_to(split);

    let width = if t.abs() > 10.0 {
        (2.0 * PI / (8.0 * t.abs())).min(1.0)
    } else {
        1.0
    };
    let breaks = partition(split, cfg.tail_cut, width);
    let far = integrate(
        |x| {
            let s = (0.5 * t * x).sin();
            2.0 * s * s * profile.eval(x)
        },
        &breaks,
        0.5 * cfg.abs_tol,
        cfg.rel_tol,
        cfg.max_subdivisions,
    )?;
    Ok((2.0 * (near_value + far.value), 2.0 * far.error + tail))
}

/// Checks `2 ∫_0^∞ (1 - cos tx) n(x) dx` against its closed form for one of
/// the three driving-law densities.
pub fn verify_n_identity(
    identity_id: IdentityId,
    t: f64,
    cfg: &QuadratureConfig,
) -> Result<IdentityRecord> {
    ensure_finite("t", t)?;
    let rhs = match identity_id {
        IdentityId::NCosh => hyperbolic::t_tanh(t),
        IdentityId::NSinh => hyperbolic::t_coth_minus_one(t),
        IdentityId::NTanh => -hyperbolic::double_angle_minus_one(t),
        other => {
            return Err(Error::Precondition(format!(
                "{other} is not a driving-law Lévy–Khintchine identity"
            )))
        }
    };
    let law = identity_id.law().expect("driving law");
    let profile = LevyDensityProfile::n(law)?;
    let (lhs, err) = lk_integral(&profile, t, cfg)?;
    Ok(IdentityRecord::new(identity_id, law, t, lhs, rhs, err, cfg.identity_tol))
}

/// Checks `-2 ∫_0^∞ (1 - cos tx) m(x) dx = log φ(t)` for a selfdecomposable
/// law.
pub fn verify_m_identity(law: LawId, t: f64, cfg: &QuadratureConfig) -> Result<IdentityRecord> {
    ensure_finite("t", t)?;
    let identity_id = match law {
        LawId::Laplace => IdentityId::LevyKhintchineLaplace,
        LawId::CoshLaw => IdentityId::LevyKhintchineCosh,
        LawId::SinhLaw => IdentityId::LevyKhintchineSinh,
        LawId::TanhLaw => IdentityId::LevyKhintchineTanh,
        other => {
            return Err(Error::Precondition(format!(
                "{other} is not one of the selfdecomposable laws"
            )))
        }
    };
    let profile = LevyDensityProfile::m(law)?;
    let (integral, err) = lk_integral(&profile, t, cfg)?;
    let rhs = analytic::log_cf_value(law, t)?;
    Ok(IdentityRecord::new(identity_id, law, t, -integral, rhs, err, cfg.identity_tol))
}

/// Checks that the bounded density `n_T` has cosine transform `2t / sinh 2t`.
/// At `t = 0` this is the statement that it integrates to one.
pub fn verify_cosine_transform(t: f64, cfg: &QuadratureConfig) -> Result<IdentityRecord> {
    ensure_finite("t", t)?;
    cfg.validate()?;
    let profile = LevyDensityProfile::n(LawId::BdlpTanh)?;
    let tail = 2.0 * profile.tail_mass_bound(cfg.tail_cut);
    cfg.check_tail(tail)?;

    let width = if t.abs() > 10.0 {
        (2.0 * PI / (8.0 * t.abs())).min(1.0)
    } else {
        1.0
    };
    let breaks = partition(0.0, cfg.tail_cut, width);
    let r = integrate(
        |x| (t * x).cos() * profile.eval(x),
        &breaks,
        0.5 * cfg.abs_tol,
        cfg.rel_tol,
        cfg.max_subdivisions,
    )?;
    let rhs = hyperbolic::t_over_sinh(2.0 * t);
    Ok(IdentityRecord::new(
        IdentityId::CosineTransform,
        LawId::BdlpTanh,
        t,
        2.0 * r.value,
        rhs,
        2.0 * r.error + tail,
        cfg.identity_tol,
    ))
}

/// `log ψ(v) / v`, bounded at the origin. Below `1e-2` the quotient is
/// replaced by its odd expansion so `1 - v coth v` is never formed.
fn log_driving_cf_over_v(law: LawId, v: f64) -> f64 {
    const SERIES_BELOW: f64 = 1e-2;
    let s = v * v;
    match law {
        LawId::CoshLaw => -v.tanh(),
        LawId::SinhLaw if v < SERIES_BELOW => -v * (1.0 / 3.0 - s / 45.0 + 2.0 * s * s / 945.0),
        LawId::SinhLaw => -hyperbolic::t_coth_minus_one(v) / v,
        LawId::TanhLaw if v < SERIES_BELOW => {
            v * (-2.0 / 3.0 + 14.0 * s / 45.0 - 124.0 * s * s / 945.0)
        }
        LawId::TanhLaw => hyperbolic::double_angle_minus_one(v) / v,
        _ => unreachable!(),
    }
}

/// Checks `∫_0^t log ψ(v) dv/v = log φ(t)`, the integral link between a
/// hyperbolic law and its driving law.
pub fn verify_prop_d_integral(law: LawId, t: f64, cfg: &QuadratureConfig) -> Result<IdentityRecord> {
    ensure_finite("t", t)?;
    cfg.validate()?;
    let identity_id = match law {
        LawId::CoshLaw => IdentityId::LogIntegralCosh,
        LawId::SinhLaw => IdentityId::LogIntegralSinh,
        LawId::TanhLaw => IdentityId::LogIntegralTanh,
        other => {
            return Err(Error::Precondition(format!(
                "{other} is not one of the hyperbolic laws"
            )))
        }
    };
    if !(t > 0.0) {
        return Err(Error::Precondition(format!("t must be > 0, got {t}")));
    }
    let breaks = partition(0.0, t, 1.0);
    let r = integrate(
        |v| log_driving_cf_over_v(law, v),
        &breaks,
        cfg.abs_tol,
        cfg.rel_tol,
        cfg.max_subdivisions,
    )?;
    let rhs = analytic::log_cf_value(law, t)?;
    Ok(IdentityRecord::new(
        identity_id,
        law,
        t,
        r.value,
        rhs,
        r.error,
        cfg.identity_tol,
    ))
}

fn log_moment_integral(
    profile: &LevyDensityProfile,
    eps: f64,
    cut: f64,
    cfg: &QuadratureConfig,
) -> Result<(f64, f64)> {
    let (rate, amp) = profile.exponential_envelope();
    let cut = cut.max(1.0);
    // ∫_L^∞ log(1+x) A e^{-κx} dx ≤ A e^{-κL} (log(1+L)/κ + 1/(κ²(1+L)))
    let tail = 2.0 * amp * (-rate * cut).exp() * ((1.0 + cut).ln() / rate + 1.0 / (rate * rate * (1.0 + cut)));
    if eps >= cut {
        return Ok((0.0, tail));
    }
    let mut breaks = partition(eps, cut, 1.0);
    if eps < cfg.singularity_split && cfg.singularity_split < cut {
        breaks.insert(1, cfg.singularity_split);
        breaks.dedup();
    }
    let r = integrate(
        |x| x.ln_1p() * profile.eval(x),
        &breaks,
        0.5 * cfg.abs_tol,
        cfg.rel_tol,
        cfg.max_subdivisions,
    )?;
    Ok((2.0 * r.value, 2.0 * r.error + tail))
}

/// Computes `∫_{|x|≥ε} log(1+|x|) n(x) dx` for a driving law and checks it is
/// stable when the tail cut is doubled. The record's `rhs_analytic` holds the
/// value at the doubled cut.
pub fn verify_log_moment(law: LawId, eps: f64, cfg: &QuadratureConfig) -> Result<IdentityRecord> {
    ensure_finite("eps", eps)?;
    cfg.validate()?;
    if !law.is_bdlp() {
        return Err(Error::Precondition(format!("{law} is not a driving law")));
    }
    if eps < 0.0 {
        return Err(Error::Precondition(format!("eps must be ≥ 0, got {eps}")));
    }
    let profile = LevyDensityProfile::n(law)?;
    // log(1+x)·x^{-p} ~ x^{1-p} is integrable at 0 only for p < 2
    if eps == 0.0 && profile.origin_order() >= 2 {
        return Err(Error::Divergent(format!(
            "the {law} Lévy density has a pole of order {} at the origin; \
             the logarithmic moment needs eps > 0",
            profile.origin_order()
        )));
    }
    let (value, err) = log_moment_integral(&profile, eps, cfg.tail_cut, cfg)?;
    let (extended, err2) = log_moment_integral(&profile, eps, 2.0 * cfg.tail_cut, cfg)?;
    let mut rec = IdentityRecord::new(
        IdentityId::LogMoment,
        law,
        eps,
        value,
        extended,
        err.max(err2),
        cfg.identity_tol,
    );
    rec.passed &= value.is_finite() && extended.is_finite();
    Ok(rec)
}

/// Runs every identity over a `t` grid: the three driving-law identities,
/// the cosine transform, the four Lévy–Khintchine exponents, the three
/// log-integral relations (for `t > 0`), and the logarithmic moments at
/// `ε ∈ {0.01, 1}`.
pub fn identity_suite(grid: &[f64], cfg: &QuadratureConfig) -> Result<Vec<IdentityRecord>> {
    let mut out = Vec::new();
    for &t in grid {
        for id in [IdentityId::NCosh, IdentityId::NSinh, IdentityId::NTanh] {
            out.push(verify_n_identity(id, t, cfg)?);
        }
        out.push(verify_cosine_transform(t, cfg)?);
        for law in [LawId::Laplace, LawId::CoshLaw, LawId::SinhLaw, LawId::TanhLaw] {
            out.push(verify_m_identity(law, t, cfg)?);
        }
        if t > 0.0 {
            for law in LawId::HYPERBOLIC {
                out.push(verify_prop_d_integral(law, t, cfg)?);
            }
        }
    }
    for law in [LawId::BdlpCosh, LawId::BdlpSinh, LawId::BdlpTanh] {
        for eps in [0.01, 1.0] {
            out.push(verify_log_moment(law, eps, cfg)?);
        }
    }
    out.push(verify_log_moment(LawId::BdlpTanh, 0.0, cfg)?);
    Ok(out)
}
