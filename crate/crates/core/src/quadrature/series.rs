//! Truncated power series in `x`, used to integrate the Lévy–Khintchine
//! integrands on `(0, split]` where the pole of the density and the zero of
//! `1 - cos tx` cancel.

use std::f64::consts::PI;
use std::ops::Mul;

use crate::analytic::{LevyDensityProfile, MeasureKind};
use crate::law::LawId;

pub(crate) const TERMS: usize = 48;

#[derive(Debug, Clone, PartialEq)]
pub(crate) struct Series(Vec<f64>);

impl Series {
    fn from_fn(f: impl Fn(usize) -> f64) -> Self {
        Series((0..TERMS).map(f).collect())
    }

    fn constant(c: f64) -> Self {
        Self::from_fn(|n| if n == 0 { c } else { 0.0 })
    }

    fn monomial(c: f64, power: usize) -> Self {
        Self::from_fn(|n| if n == power { c } else { 0.0 })
    }

    /// `sinh(u)/u` in powers of `u`
    fn sinhc() -> Self {
        Self::from_fn(|n| if n % 2 == 0 { 1.0 / factorial(n + 1) } else { 0.0 })
    }

    fn cosh() -> Self {
        Self::from_fn(|n| if n % 2 == 0 { 1.0 / factorial(n) } else { 0.0 })
    }

    fn exp_neg() -> Self {
        Self::from_fn(|n| {
            let sign = if n % 2 == 0 { 1.0 } else { -1.0 };
            sign / factorial(n)
        })
    }

    /// `(1 - cos(t u)) / u²`
    pub(crate) fn one_minus_cos_over_square(t: f64) -> Self {
        Self::from_fn(|n| {
            if n % 2 == 1 {
                return 0.0;
            }
            let k = n / 2 + 1;
            let sign = if k % 2 == 1 { 1.0 } else { -1.0 };
            sign * t.powi(2 * k as i32) / factorial(2 * k)
        })
    }

    /// `f(c·x)` from the series of `f(u)`.
    fn scale_arg(&self, c: f64) -> Self {
        let mut p = 1.0;
        Series(
            self.0
                .iter()
                .map(|&a| {
                    let v = a * p;
                    p *= c;
                    v
                })
                .collect(),
        )
    }

    fn scale(&self, c: f64) -> Self {
        Series(self.0.iter().map(|a| a * c).collect())
    }

    fn add(&self, other: &Self) -> Self {
        Series(self.0.iter().zip(&other.0).map(|(a, b)| a + b).collect())
    }

    /// Multiplicative inverse; requires a nonzero constant term.
    fn recip(&self) -> Self {
        let a = &self.0;
        let mut b = vec![0.0; TERMS];
        b[0] = 1.0 / a[0];
        for n in 1..TERMS {
            let s: f64 = (1..=n).map(|k| a[k] * b[n - k]).sum();
            b[n] = -s / a[0];
        }
        Series(b)
    }

    /// Multiplies by `x^p`, dropping terms past the truncation order.
    pub(crate) fn shift_up(&self, p: usize) -> Self {
        Self::from_fn(|n| if n >= p { self.0[n - p] } else { 0.0 })
    }

    /// `∫_0^a` of the series.
    pub(crate) fn integrate_to(&self, a: f64) -> f64 {
        let mut p = a;
        let mut total = 0.0;
        for (n, c) in self.0.iter().enumerate() {
            total += c * p / (n + 1) as f64;
            p *= a;
        }
        total
    }
}

impl Mul for &Series {
    type Output = Series;

    fn mul(self, rhs: &Series) -> Series {
        let (a, b) = (&self.0, &rhs.0);
        Series::from_fn(|n| (0..=n).map(|k| a[k] * b[n - k]).sum())
    }
}

fn factorial(n: usize) -> f64 {
    (1..=n).fold(1.0, |acc, k| acc * k as f64)
}

/// Series of `x^p · density(x)` for `x > 0`, `p` the origin order.
pub(crate) fn regularized_density(profile: &LevyDensityProfile) -> Series {
    use LawId::*;
    let half_pi = 0.5 * PI;
    // u/sinh u and cosh u, with u = πx/2
    let csch_u = || Series::sinhc().recip().scale_arg(half_pi);
    let cosh_u = || Series::cosh().scale_arg(half_pi);
    // 1 - tanh v, v = πx/4
    let one_minus_tanh_v = || {
        let v = 0.25 * PI;
        let tanh_over_v = &Series::sinhc() * &Series::cosh().recip();
        Series::constant(1.0).add(&tanh_over_v.shift_up(1).scale_arg(v).scale(-1.0))
    };
    let sech_v = || Series::cosh().recip().scale_arg(0.25 * PI);

    match (profile.kind(), profile.law()) {
        // e^{-x}
        (MeasureKind::M, Laplace) | (MeasureKind::N, Laplace) => Series::exp_neg(),
        // x/(2 sinh u) = (1/π)·u/sinh u
        (MeasureKind::M, CoshLaw) => csch_u().scale(1.0 / PI),
        // (x/2)(coth u - 1) = (1/π)·u cosh u / sinh u - x/2
        (MeasureKind::M, SinhLaw) => (&cosh_u() * &csch_u())
            .scale(1.0 / PI)
            .add(&Series::monomial(-0.5, 1)),
        // (1 - tanh v)/2
        (MeasureKind::M, TanhLaw) => one_minus_tanh_v().scale(0.5),
        // (π/4) x² cosh u / sinh² u = (1/π) cosh u (u/sinh u)²
        (MeasureKind::N, BdlpCosh) => {
            let c = csch_u();
            (&cosh_u() * &(&c * &c)).scale(1.0 / PI)
        }
        // (π/4) x² / sinh² u = (1/π) (u/sinh u)²
        (MeasureKind::N, BdlpSinh) => {
            let c = csch_u();
            (&c * &c).scale(1.0 / PI)
        }
        // (π/8) sech² v
        (MeasureKind::N, BdlpTanh) => {
            let s = sech_v();
            (&s * &s).scale(PI / 8.0)
        }
        _ => unreachable!("profile validated at construction"),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn regularized_series_match_closed_forms() {
        for law in [LawId::Laplace, LawId::CoshLaw, LawId::SinhLaw, LawId::TanhLaw] {
            let m = LevyDensityProfile::m(law).unwrap();
            for p in [m, m.paired_n().unwrap()] {
                let s = regularized_density(&p);
                for x in [1e-3_f64, 0.05, 0.1, 0.3] {
                    let mut approx = 0.0;
                    for (n, c) in s.0.iter().enumerate() {
                        approx += c * x.powi(n as i32);
                    }
                    let exact = p.eval(x) * x.powi(p.origin_order() as i32);
                    assert!(
                        ((approx - exact) / exact).abs() < 1e-14,
                        "{p:?} at {x}: {approx} vs {exact}"
                    );
                }
            }
        }
    }

    #[test]
    fn one_minus_cos_series() {
        let s = Series::one_minus_cos_over_square(7.0);
        let x: f64 = 0.2;
        let approx: f64 = s.0.iter().enumerate().map(|(n, c)| c * x.powi(n as i32)).sum();
        let exact = (1.0 - (7.0 * x).cos()) / (x * x);
        assert!((approx - exact).abs() < 1e-13);
    }
}
