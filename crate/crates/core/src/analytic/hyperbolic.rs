//! Overflow-free, cancellation-aware kernels for the hyperbolic ratios.
//!
//! Every function is even in its argument. Below [`SMALL`] the removable
//! singularity at the origin is replaced by a sixth-order Taylor polynomial;
//! above [`LARGE`] the ratio is rewritten in terms of `e^{-2|t|}`.

/// Crossover to the Taylor branch. The first omitted term is `O(t^8)`,
/// i.e. below `1e-16` here.
pub(crate) const SMALL: f64 = 1e-2;

/// Crossover to the exponentially small rewrite.
pub(crate) const LARGE: f64 = 30.0;

/// `1 / cosh t`
pub(crate) fn sech(t: f64) -> f64 {
    let a = t.abs();
    if a > LARGE {
        let e = (-a).exp();
        2.0 * e / (1.0 + e * e)
    } else {
        1.0 / a.cosh()
    }
}

/// `t / sinh t`
pub(crate) fn t_over_sinh(t: f64) -> f64 {
    let a = t.abs();
    if a < SMALL {
        let s = a * a;
        1.0 - s / 6.0 + 7.0 * s * s / 360.0 - 31.0 * s * s * s / 15120.0
    } else if a > LARGE {
        let e = (-a).exp();
        2.0 * a * e / (1.0 - e * e)
    } else {
        a / a.sinh()
    }
}

/// `tanh t / t`
pub(crate) fn tanh_over_t(t: f64) -> f64 {
    let a = t.abs();
    if a < SMALL {
        let s = a * a;
        1.0 - s / 3.0 + 2.0 * s * s / 15.0 - 17.0 * s * s * s / 315.0
    } else {
        a.tanh() / a
    }
}

/// `t tanh t`
pub(crate) fn t_tanh(t: f64) -> f64 {
    let a = t.abs();
    a * a.tanh()
}

/// `t coth t - 1`
pub(crate) fn t_coth_minus_one(t: f64) -> f64 {
    let a = t.abs();
    if a < SMALL {
        let s = a * a;
        s / 3.0 - s * s / 45.0 + 2.0 * s * s * s / 945.0
    } else if a > LARGE {
        let e2 = (-2.0 * a).exp();
        (a - 1.0) + 2.0 * a * e2 / (1.0 - e2)
    } else {
        a / a.tanh() - 1.0
    }
}

/// `2t / sinh 2t - 1`, the exponent of the compound Poisson driving law.
pub(crate) fn double_angle_minus_one(t: f64) -> f64 {
    let a = 2.0 * t.abs();
    if a < SMALL {
        let s = a * a;
        -s / 6.0 + 7.0 * s * s / 360.0 - 31.0 * s * s * s / 15120.0
    } else {
        t_over_sinh(a) - 1.0
    }
}

/// `log cosh t`
pub(crate) fn log_cosh(t: f64) -> f64 {
    let a = t.abs();
    if a < SMALL {
        let s = a * a;
        s / 2.0 - s * s / 12.0 + s * s * s / 45.0
    } else if a > LARGE {
        a - std::f64::consts::LN_2 + (-2.0 * a).exp().ln_1p()
    } else {
        // cosh a - 1 = 2 sinh²(a/2)
        let h = (0.5 * a).sinh();
        (2.0 * h * h).ln_1p()
    }
}

/// `log(t / sinh t)`
pub(crate) fn log_t_over_sinh(t: f64) -> f64 {
    let a = t.abs();
    if a < SMALL {
        let s = a * a;
        -s / 6.0 + s * s / 180.0 - s * s * s / 2835.0
    } else if a > LARGE {
        a.ln() - a + std::f64::consts::LN_2 - (-(-2.0 * a).exp()).ln_1p()
    } else {
        (a / a.sinh()).ln()
    }
}

/// `log(tanh t / t)`
pub(crate) fn log_tanh_over_t(t: f64) -> f64 {
    let a = t.abs();
    if a < SMALL {
        let s = a * a;
        -s / 3.0 + 7.0 * s * s / 90.0 - 62.0 * s * s * s / 2835.0
    } else if a > LARGE {
        let e2 = (-2.0 * a).exp();
        (-e2).ln_1p() - e2.ln_1p() - a.ln()
    } else {
        (a.tanh() / a).ln()
    }
}

/// Trigamma function `ψ'(x)` for `x > 0`.
///
/// Shifted upward by the recurrence `ψ'(x) = ψ'(x+1) + 1/x²` and finished
/// with the asymptotic Bernoulli series.
pub(crate) fn trigamma(mut x: f64) -> f64 {
    debug_assert!(x > 0.0);
    let mut acc = 0.0;
    while x < 12.0 {
        acc += 1.0 / (x * x);
        x += 1.0;
    }
    let r = 1.0 / x;
    let r2 = r * r;
    let series = r
        + 0.5 * r2
        + r * r2
            * (1.0 / 6.0
                + r2 * (-1.0 / 30.0 + r2 * (1.0 / 42.0 + r2 * (-1.0 / 30.0 + r2 * 5.0 / 66.0))));
    acc + series
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::PI;

    fn rel(a: f64, b: f64) -> f64 {
        ((a - b) / b).abs()
    }

    #[test]
    fn taylor_and_direct_branches_agree_at_crossover() {
        let a = SMALL * (1.0 + 1e-15);
        let b = SMALL * (1.0 - 1e-15);
        assert!(rel(t_over_sinh(a), t_over_sinh(b)) < 1e-14);
        assert!(rel(tanh_over_t(a), tanh_over_t(b)) < 1e-14);
        assert!(rel(log_cosh(a), log_cosh(b)) < 1e-13);
        assert!((t_coth_minus_one(a) - t_coth_minus_one(b)).abs() < 1e-15);
        assert!((log_tanh_over_t(a) - log_tanh_over_t(b)).abs() < 1e-15);
    }

    #[test]
    fn large_argument_branches_match_direct_forms() {
        for t in [30.5_f64, 35.0, 50.0] {
            assert!(rel(sech(t), 1.0 / t.cosh()) < 1e-14);
            assert!(rel(t_over_sinh(t), t / t.sinh()) < 1e-14);
            assert!(rel(log_cosh(t), t.cosh().ln()) < 1e-14);
            assert!(rel(log_t_over_sinh(t), (t / t.sinh()).ln()) < 1e-14);
            assert!(rel(t_coth_minus_one(t), t / t.tanh() - 1.0) < 1e-14);
        }
        // no overflow far beyond the exponent range of cosh
        assert!(sech(1000.0) == 0.0);
        assert!((log_cosh(1000.0) - (1000.0 - std::f64::consts::LN_2)).abs() < 1e-12);
        assert!(log_t_over_sinh(1000.0).is_finite());
    }

    #[test]
    fn trigamma_reference_points() {
        assert!(rel(trigamma(1.0), PI * PI / 6.0) < 1e-14);
        assert!(rel(trigamma(0.5), PI * PI / 2.0) < 1e-14);
        // ψ'(K+1) = π²/6 - Σ_{k≤K} 1/k²
        let k = 50;
        let partial: f64 = (1..=k).map(|j| 1.0 / (j * j) as f64).sum();
        assert!(rel(trigamma(k as f64 + 1.0), PI * PI / 6.0 - partial) < 1e-12);
    }
}
