use std::f64::consts::PI;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::law::LawId;

/// Which Lévy measure a profile describes.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum MeasureKind {
    /// Spectral measure of the selfdecomposable law itself.
    M,
    /// Spectral measure of the time-one marginal of its driving process.
    N,
}

/// A symmetric Lévy density on the punctured line together with the order of
/// its pole at the origin: `density(x) ~ C / |x|^origin_order` as `x → 0`.
///
/// Valid pairs are `M` with one of the selfdecomposable laws, and `N` with
/// one of the `Bdlp*` laws or with `Laplace` (whose driving law is compound
/// Poisson with density `e^{-|x|}`).
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct LevyDensityProfile {
    law: LawId,
    kind: MeasureKind,
}

impl LevyDensityProfile {
    pub fn new(law: LawId, kind: MeasureKind) -> Result<Self> {
        let ok = match kind {
            MeasureKind::M => law.is_selfdecomposable(),
            MeasureKind::N => law.is_bdlp() || law == LawId::Laplace,
        };
        if ok {
            Ok(Self { law, kind })
        } else {
            Err(Error::Precondition(format!(
                "no {kind:?}-density is defined for {law}"
            )))
        }
    }

    /// The `M` density of a selfdecomposable law.
    pub fn m(law: LawId) -> Result<Self> {
        Self::new(law, MeasureKind::M)
    }

    /// The `N` density of the driving law of `law`. Accepts either the
    /// hyperbolic law or its `Bdlp*` counterpart.
    pub fn n(law: LawId) -> Result<Self> {
        Self::new(law.bdlp().unwrap_or(law), MeasureKind::N)
    }

    pub fn law(&self) -> LawId {
        self.law
    }

    pub fn kind(&self) -> MeasureKind {
        self.kind
    }

    pub fn origin_order(&self) -> u32 {
        use LawId::*;
        match (self.kind, self.law) {
            (MeasureKind::M, CoshLaw | SinhLaw) => 2,
            (MeasureKind::M, _) => 1,
            (MeasureKind::N, BdlpCosh | BdlpSinh) => 2,
            (MeasureKind::N, _) => 0,
        }
    }

    /// The `N` profile paired with this `M` profile through
    /// `dN(x) = -(x h(x))' dx`.
    pub fn paired_n(&self) -> Option<Self> {
        match (self.kind, self.law) {
            (MeasureKind::M, LawId::Laplace) => Some(Self {
                law: LawId::Laplace,
                kind: MeasureKind::N,
            }),
            (MeasureKind::M, law) => law.bdlp().map(|b| Self {
                law: b,
                kind: MeasureKind::N,
            }),
            (MeasureKind::N, _) => None,
        }
    }

    /// Rate `κ` and amplitude `A` with `density(x) ≤ A e^{-κ x}` for `x ≥ 1`.
    pub(crate) fn exponential_envelope(&self) -> (f64, f64) {
        use LawId::*;
        match (self.kind, self.law) {
            (MeasureKind::M, Laplace) | (MeasureKind::N, Laplace) => (1.0, 1.0),
            (MeasureKind::M, CoshLaw) => (PI / 2.0, 1.05),
            (MeasureKind::M, SinhLaw) => (PI, 1.05),
            (MeasureKind::M, TanhLaw) => (PI / 2.0, 1.0),
            (MeasureKind::N, BdlpCosh) => (PI / 2.0, 2.0),
            (MeasureKind::N, BdlpSinh) => (PI, 3.5),
            (MeasureKind::N, BdlpTanh) => (PI / 2.0, PI / 2.0),
            _ => unreachable!("profile validated at construction"),
        }
    }

    /// Upper bound on `∫_L^∞ density(x) dx` for `L ≥ 1`.
    pub(crate) fn tail_mass_bound(&self, cut: f64) -> f64 {
        let (rate, amp) = self.exponential_envelope();
        amp * (-rate * cut.max(1.0)).exp() / rate
    }

    /// Evaluates the density at `x ≠ 0` without domain checks.
    pub(crate) fn eval(&self, x: f64) -> f64 {
        use LawId::*;
        let a = x.abs();
        match (self.kind, self.law) {
            (MeasureKind::M, Laplace) => (-a).exp() / a,
            (MeasureKind::M, CoshLaw) => {
                // 1 / (2a sinh u), u = πa/2
                let u = 0.5 * PI * a;
                (-u).exp() / (a * -(-2.0 * u).exp_m1())
            }
            (MeasureKind::M, SinhLaw) => {
                // (coth u - 1) / (2a)
                let u = 0.5 * PI * a;
                (-2.0 * u).exp() / (a * -(-2.0 * u).exp_m1())
            }
            (MeasureKind::M, TanhLaw) => {
                // (1 - tanh v) / (2a), v = πa/4
                let e = (-0.5 * PI * a).exp();
                e / (a * (1.0 + e))
            }
            (MeasureKind::N, Laplace) => (-a).exp(),
            (MeasureKind::N, BdlpCosh) => {
                // (π/4) cosh u / sinh² u
                let u = 0.5 * PI * a;
                let e2 = (-2.0 * u).exp();
                let d = -(-2.0 * u).exp_m1();
                0.5 * PI * (-u).exp() * (1.0 + e2) / (d * d)
            }
            (MeasureKind::N, BdlpSinh) => {
                // (π/4) / sinh² u
                let u = 0.5 * PI * a;
                let d = -(-2.0 * u).exp_m1();
                PI * (-2.0 * u).exp() / (d * d)
            }
            (MeasureKind::N, BdlpTanh) => {
                // (π/8) sech² v
                let e = (-0.5 * PI * a).exp();
                0.5 * PI * e / ((1.0 + e) * (1.0 + e))
            }
            _ => unreachable!("profile validated at construction"),
        }
    }
}

/// Closed-form Lévy density of `profile` at `x`.
pub fn levy_density(profile: &LevyDensityProfile, x: f64) -> Result<f64> {
    if !x.is_finite() {
        return Err(Error::Domain(format!("x must be finite, got {x}")));
    }
    if x == 0.0 {
        return Err(Error::Domain("Lévy densities have a pole at x = 0".into()));
    }
    Ok(profile.eval(x))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn rel(a: f64, b: f64) -> f64 {
        ((a - b) / b).abs()
    }

    #[test]
    fn invalid_pairs_are_rejected() {
        assert!(LevyDensityProfile::new(LawId::BdlpCosh, MeasureKind::M).is_err());
        assert!(LevyDensityProfile::new(LawId::TanhLaw, MeasureKind::N).is_err());
        assert_eq!(
            LevyDensityProfile::n(LawId::TanhLaw).unwrap().law(),
            LawId::BdlpTanh
        );
    }

    #[test]
    fn origin_orders_match_small_x_behaviour() {
        for law in [LawId::Laplace, LawId::CoshLaw, LawId::SinhLaw, LawId::TanhLaw] {
            let m = LevyDensityProfile::m(law).unwrap();
            let n = m.paired_n().unwrap();
            for p in [m, n] {
                let order = p.origin_order() as i32;
                let c1 = p.eval(1e-6) * 1e-6f64.powi(order);
                let c2 = p.eval(1e-7) * 1e-7f64.powi(order);
                assert!(rel(c1, c2) < 1e-5, "{p:?}: {c1} vs {c2}");
                assert!(c1 > 0.0);
            }
        }
    }

    #[test]
    fn envelope_dominates_density() {
        for law in [LawId::Laplace, LawId::CoshLaw, LawId::SinhLaw, LawId::TanhLaw] {
            let m = LevyDensityProfile::m(law).unwrap();
            for p in [m, m.paired_n().unwrap()] {
                let (rate, amp) = p.exponential_envelope();
                for i in 0..400 {
                    let x = 1.0 + 0.1 * i as f64;
                    assert!(p.eval(x) <= amp * (-rate * x).exp(), "{p:?} at {x}");
                }
            }
        }
    }

    #[test]
    fn pole_and_non_finite_arguments_are_domain_errors() {
        let p = LevyDensityProfile::m(LawId::CoshLaw).unwrap();
        assert!(matches!(levy_density(&p, 0.0), Err(Error::Domain(_))));
        assert!(matches!(levy_density(&p, f64::NAN), Err(Error::Domain(_))));
    }
}
