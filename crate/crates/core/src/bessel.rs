//! Monte Carlo for squared Bessel processes and the functionals whose
//! Laplace transforms are the hyperbolic characteristic functions.
//!
//! Paths are simulated on `[0, horizon]` with a uniform grid. Free paths use
//! an Euler scheme with full truncation. Bridges to zero use the space-time
//! transform `X(t) = (1-t)² Z(t/(1-t))` with `Z` a free squared Bessel
//! process of the same dimension; written in `X` coordinates one step reads
//!
//! ```text
//! X' = r² X + δ h r + 2 r^{3/2} √(X h) N,    r = (1 - t')/(1 - t)
//! ```
//!
//! so the last step (`t' = 1`, `r = 0`) lands exactly on zero.
//!
//! Estimators run one random stream per path and never store paths, so a
//! run of 10⁵ paths of 10⁴ steps needs memory for 10⁵ numbers.

use rand::Rng;
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::analytic::hyperbolic;
use crate::error::{Error, Result};
use crate::law::LawId;
use crate::rng::{Domain, StreamFamily};
use crate::samplers::{Method, SampleBatch, SamplerConfig};

/// Largest terminal value accepted for a bridge path. The scheme pins the
/// endpoint exactly, so this is only a guard.
pub const BRIDGE_END_TOLERANCE: f64 = 1e-12;

/// Step limit for hitting-time and occupation paths.
pub const MAX_PATH_STEPS: usize = 1_000_000;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct BesqSpec {
    /// Dimension `δ`.
    pub delta: f64,
    /// Starting value `x`.
    pub x0: f64,
    pub horizon: f64,
    pub n_steps: usize,
    pub bridge_to_zero: bool,
}

impl BesqSpec {
    pub fn free(delta: f64, x0: f64, n_steps: usize) -> Self {
        Self {
            delta,
            x0,
            horizon: 1.0,
            n_steps,
            bridge_to_zero: false,
        }
    }

    pub fn bridge(delta: f64, x0: f64, n_steps: usize) -> Self {
        Self {
            bridge_to_zero: true,
            ..Self::free(delta, x0, n_steps)
        }
    }

    pub fn validate(&self) -> Result<()> {
        for (name, v) in [("delta", self.delta), ("x0", self.x0)] {
            if !(v >= 0.0) || !v.is_finite() {
                return Err(Error::Config(format!("{name} must be ≥ 0, got {v}")));
            }
        }
        if !(self.horizon > 0.0) || !self.horizon.is_finite() {
            return Err(Error::Config(format!("horizon must be > 0, got {}", self.horizon)));
        }
        if self.n_steps == 0 {
            return Err(Error::Config("n_steps must be ≥ 1".into()));
        }
        if self.bridge_to_zero && self.horizon != 1.0 {
            return Err(Error::Config("bridges are defined on [0, 1]".into()));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PathGrid {
    pub times: Vec<f64>,
    pub values: Vec<f64>,
}

/// Monte Carlo targets. The serialized names are the report identifiers.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum TargetId {
    /// Independent free paths add: `(δ, x) ⋆ (δ', x') = (δ+δ', x+x')`.
    #[serde(rename = "Eq13")]
    Composition,
    /// Bridge to zero of any dimension.
    #[serde(rename = "Eq14")]
    BridgeFunctional,
    /// Zero-dimensional bridge to zero.
    #[serde(rename = "Eq15")]
    ZeroDimBridge,
    #[serde(rename = "Eq16")]
    FreeFunctional,
    #[serde(rename = "Eq17_d1")]
    HittingTimeD1,
    #[serde(rename = "Eq17_d3")]
    HittingTimeD3,
    #[serde(rename = "Eq18_occupation_d1")]
    OccupationD1,
    #[serde(rename = "Eq18_occupation_d3")]
    OccupationD3,
}

impl TargetId {
    pub const ALL: [TargetId; 8] = [
        TargetId::Composition,
        TargetId::BridgeFunctional,
        TargetId::ZeroDimBridge,
        TargetId::FreeFunctional,
        TargetId::HittingTimeD1,
        TargetId::HittingTimeD3,
        TargetId::OccupationD1,
        TargetId::OccupationD3,
    ];

    pub fn name(self) -> &'static str {
        match self {
            TargetId::Composition => "Eq13",
            TargetId::BridgeFunctional => "Eq14",
            TargetId::ZeroDimBridge => "Eq15",
            TargetId::FreeFunctional => "Eq16",
            TargetId::HittingTimeD1 => "Eq17_d1",
            TargetId::HittingTimeD3 => "Eq17_d3",
            TargetId::OccupationD1 => "Eq18_occupation_d1",
            TargetId::OccupationD3 => "Eq18_occupation_d3",
        }
    }
}

impl std::fmt::Display for TargetId {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(self.name())
    }
}

impl std::str::FromStr for TargetId {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        TargetId::ALL
            .into_iter()
            .find(|id| id.name().eq_ignore_ascii_case(s.trim()))
            .ok_or_else(|| Error::Config(format!("unknown target `{s}`")))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct FunctionalEstimate {
    pub target_id: TargetId,
    pub lambda: f64,
    pub delta: f64,
    pub x0: f64,
    pub mc_mean: f64,
    pub mc_stderr: f64,
    pub analytic: f64,
    pub n_paths: usize,
}

impl FunctionalEstimate {
    /// `|mc_mean - analytic|`
    pub fn abs_dev(&self) -> f64 {
        (self.mc_mean - self.analytic).abs()
    }

    /// True when the deviation is within `max(sigmas · stderr, rel · analytic)`.
    pub fn within(&self, sigmas: f64, rel: f64) -> bool {
        self.abs_dev() <= (sigmas * self.mc_stderr).max(rel * self.analytic.abs())
    }
}

/// Closed form of `E exp(-λ²/2 ∫₀¹ X ds)` for a free path.
pub fn free_functional(lambda: f64, delta: f64, x0: f64) -> f64 {
    (-0.5 * delta * hyperbolic::log_cosh(lambda) - 0.5 * x0 * hyperbolic::t_tanh(lambda)).exp()
}

/// Closed form of `E exp(-λ²/2 ∫₀¹ X ds)` for a bridge to zero.
pub fn bridge_functional(lambda: f64, delta: f64, x0: f64) -> f64 {
    (0.5 * delta * hyperbolic::log_t_over_sinh(lambda)
        - 0.5 * x0 * hyperbolic::t_coth_minus_one(lambda))
    .exp()
}

/// Closed form for a hitting-time or occupation target.
pub fn closed_form(target: TargetId, lambda: f64) -> Option<f64> {
    Some(match target {
        TargetId::HittingTimeD1 => hyperbolic::sech(lambda),
        TargetId::HittingTimeD3 => hyperbolic::t_over_sinh(lambda),
        TargetId::OccupationD1 => (-hyperbolic::t_tanh(lambda)).exp(),
        TargetId::OccupationD3 => (-hyperbolic::t_coth_minus_one(lambda)).exp(),
        _ => return None,
    })
}

#[inline]
fn normal(rng: &mut ChaCha8Rng) -> f64 {
    rng.sample(StandardNormal)
}

/// One full-truncation Euler step.
#[inline]
fn free_step(x: f64, delta: f64, h: f64, sqrt_h: f64, z: f64) -> f64 {
    (x + delta * h + 2.0 * x.max(0.0).sqrt() * sqrt_h * z).max(0.0)
}

/// One bridge step from grid index `i` to `i + 1` of `n`.
#[inline]
fn bridge_step(x: f64, delta: f64, i: usize, n: usize, z: f64) -> f64 {
    if i + 1 == n {
        return 0.0;
    }
    let h = 1.0 / n as f64;
    let r = (n - i - 1) as f64 / (n - i) as f64;
    (r * r * x + delta * h * r + 2.0 * r * r.sqrt() * (x * h).sqrt() * z).max(0.0)
}

/// Walks one path, calling `visit(i, value)` for every grid point. Returns
/// early once a zero-dimensional path is absorbed at 0; the remaining values
/// are all zero.
fn walk(spec: &BesqSpec, rng: &mut ChaCha8Rng, mut visit: impl FnMut(usize, f64)) {
    let n = spec.n_steps;
    let h = spec.horizon / n as f64;
    let sqrt_h = h.sqrt();
    let mut x = spec.x0;
    visit(0, x);
    for i in 0..n {
        if spec.delta == 0.0 && x == 0.0 {
            return;
        }
        let z = normal(rng);
        x = if spec.bridge_to_zero {
            bridge_step(x, spec.delta, i, n, z)
        } else {
            free_step(x, spec.delta, h, sqrt_h, z)
        };
        visit(i + 1, x);
    }
}

/// Trapezoidal `∫ X ds` of one simulated path, without storing it.
fn path_integral(spec: &BesqSpec, rng: &mut ChaCha8Rng) -> f64 {
    let n = spec.n_steps;
    let h = spec.horizon / n as f64;
    let mut acc = 0.0;
    walk(spec, rng, |i, x| {
        acc += if i == 0 || i == n { 0.5 * x } else { x };
    });
    acc * h
}

fn path_grid(spec: &BesqSpec, rng: &mut ChaCha8Rng) -> PathGrid {
    let n = spec.n_steps;
    let h = spec.horizon / n as f64;
    let mut values = vec![0.0; n + 1];
    walk(spec, rng, |i, x| values[i] = x);
    let times = (0..=n).map(|i| if i == n { spec.horizon } else { i as f64 * h }).collect();
    PathGrid { times, values }
}

/// Simulates one free squared Bessel path.
pub fn simulate_besq(spec: &BesqSpec, seed: u64) -> Result<PathGrid> {
    spec.validate()?;
    if spec.bridge_to_zero {
        return Err(Error::Precondition("use simulate_besq_bridge_to_zero for bridges".into()));
    }
    Ok(path_grid(spec, &mut StreamFamily::new(seed, Domain::Besq).stream(0)))
}

/// Simulates one squared Bessel bridge from `x0` to 0 on `[0, 1]`.
pub fn simulate_besq_bridge_to_zero(spec: &BesqSpec, seed: u64) -> Result<PathGrid> {
    spec.validate()?;
    if !spec.bridge_to_zero {
        return Err(Error::Precondition("path specification is not a bridge".into()));
    }
    let path = path_grid(spec, &mut StreamFamily::new(seed, Domain::Bridge).stream(0));
    let end = *path.values.last().expect("n_steps ≥ 1");
    if end > BRIDGE_END_TOLERANCE {
        return Err(Error::Simulation(format!("bridge ended at {end}")));
    }
    Ok(path)
}

/// Trapezoidal approximation of `∫ X ds` over the grid.
pub fn integrated_path(path: &PathGrid) -> f64 {
    path.times
        .windows(2)
        .zip(path.values.windows(2))
        .map(|(t, v)| 0.5 * (t[1] - t[0]) * (v[0] + v[1]))
        .sum()
}

/// Mean and standard error.
fn mean_stderr(values: &[f64]) -> (f64, f64) {
    let n = values.len() as f64;
    let mean = values.iter().sum::<f64>() / n;
    if values.len() < 2 {
        return (mean, f64::NAN);
    }
    let var = values.iter().map(|v| (v - mean) * (v - mean)).sum::<f64>() / (n - 1.0);
    (mean, (var / n).sqrt())
}

fn check_paths(n_paths: usize, n_steps: usize) -> Result<()> {
    if n_paths < 2 || n_steps == 0 {
        return Err(Error::Config(format!(
            "need n_paths ≥ 2 and n_steps ≥ 1, got {n_paths} and {n_steps}"
        )));
    }
    Ok(())
}

fn check_lambdas(lambdas: &[f64]) -> Result<()> {
    match lambdas.iter().find(|l| !(**l > 0.0) || !l.is_finite()) {
        Some(l) => Err(Error::Precondition(format!("lambda must be > 0, got {l}"))),
        None => Ok(()),
    }
}

/// Paths advanced together by one thread. Their dependency chains are
/// independent, so the processor overlaps them.
const LANES: usize = 8;

/// `finish(rng, ∫X ds)` for paths `start..start + len`, each on its own
/// stream. Per path this consumes exactly the draws of [`path_integral`].
fn lane_integrals(
    spec: &BesqSpec,
    family: &StreamFamily,
    start: u64,
    len: usize,
    finish: &(impl Fn(&mut ChaCha8Rng, f64) -> f64 + Sync),
) -> Vec<f64> {
    let n = spec.n_steps;
    let h = spec.horizon / n as f64;
    let sqrt_h = h.sqrt();
    let mut rngs: Vec<ChaCha8Rng> = (0..len as u64).map(|j| family.stream(start + j)).collect();
    let mut x = vec![spec.x0; len];
    let mut acc = vec![0.5 * spec.x0; len];
    let absorbing = spec.delta == 0.0;
    for i in 0..n {
        let weight = if i + 1 == n { 0.5 } else { 1.0 };
        if spec.bridge_to_zero {
            if i + 1 == n {
                break;
            }
            let r = (n - i - 1) as f64 / (n - i) as f64;
            let (a, b, c) = (r * r, spec.delta * h * r, 2.0 * r * r.sqrt() * sqrt_h);
            for (xj, (aj, rng)) in x.iter_mut().zip(acc.iter_mut().zip(rngs.iter_mut())) {
                if absorbing && *xj == 0.0 {
                    continue;
                }
                let z = normal(rng);
                *xj = (a * *xj + b + c * xj.sqrt() * z).max(0.0);
                *aj += weight * *xj;
            }
        } else {
            for (xj, (aj, rng)) in x.iter_mut().zip(acc.iter_mut().zip(rngs.iter_mut())) {
                if absorbing && *xj == 0.0 {
                    continue;
                }
                let z = normal(rng);
                *xj = free_step(*xj, spec.delta, h, sqrt_h, z);
                *aj += weight * *xj;
            }
        }
    }
    rngs.iter_mut().zip(acc).map(|(rng, a)| finish(rng, a * h)).collect()
}

/// Per-path `finish(rng, ∫X ds)` for `n_paths` paths.
fn integrals_with(
    spec: &BesqSpec,
    n_paths: usize,
    family: &StreamFamily,
    finish: impl Fn(&mut ChaCha8Rng, f64) -> f64 + Sync,
) -> Vec<f64> {
    let chunks = n_paths.div_ceil(LANES);
    let parts: Vec<Vec<f64>> = (0..chunks)
        .into_par_iter()
        .map(|c| {
            let start = c * LANES;
            let len = LANES.min(n_paths - start);
            lane_integrals(spec, family, start as u64, len, &finish)
        })
        .collect();
    parts.concat()
}

/// Per-path `∫₀¹ X ds`.
fn integrals(spec: &BesqSpec, n_paths: usize, seed: u64) -> Vec<f64> {
    let domain = if spec.bridge_to_zero { Domain::Bridge } else { Domain::Besq };
    integrals_with(spec, n_paths, &StreamFamily::new(seed, domain), |_, a| a)
}

fn summarize(
    target_id: TargetId,
    lambda: f64,
    delta: f64,
    x0: f64,
    analytic: f64,
    samples: &[f64],
    weight: impl Fn(f64) -> f64,
) -> FunctionalEstimate {
    let values: Vec<f64> = samples.iter().map(|&a| weight(a)).collect();
    let (mc_mean, mc_stderr) = mean_stderr(&values);
    FunctionalEstimate {
        target_id,
        lambda,
        delta,
        x0,
        mc_mean,
        mc_stderr,
        analytic,
        n_paths: samples.len(),
    }
}

/// Like [`estimate_laplace_functional`] for several `λ` at once. All
/// estimates share the same paths.
pub fn estimate_laplace_functionals(
    target_id: TargetId,
    lambdas: &[f64],
    delta: f64,
    x0: f64,
    n_paths: usize,
    n_steps: usize,
    seed: u64,
) -> Result<Vec<FunctionalEstimate>> {
    check_lambdas(lambdas)?;
    check_paths(n_paths, n_steps)?;
    let (spec, closed): (BesqSpec, fn(f64, f64, f64) -> f64) = match target_id {
        TargetId::BridgeFunctional => (BesqSpec::bridge(delta, x0, n_steps), bridge_functional),
        TargetId::ZeroDimBridge if delta == 0.0 => {
            (BesqSpec::bridge(delta, x0, n_steps), bridge_functional)
        }
        TargetId::ZeroDimBridge => {
            return Err(Error::Precondition(format!(
                "the zero-dimensional bridge needs delta = 0, got {delta}"
            )))
        }
        TargetId::FreeFunctional => (BesqSpec::free(delta, x0, n_steps), free_functional),
        other => {
            return Err(Error::Precondition(format!(
                "{other} is not a path-integral functional"
            )))
        }
    };
    spec.validate()?;
    let a = integrals(&spec, n_paths, seed);
    Ok(lambdas
        .iter()
        .map(|&l| {
            summarize(target_id, l, delta, x0, closed(l, delta, x0), &a, |v| {
                (-0.5 * l * l * v).exp()
            })
        })
        .collect())
}

/// Estimates `E exp(-λ²/2 ∫₀¹ X ds)` under a bridge to zero
/// ([`TargetId::BridgeFunctional`], [`TargetId::ZeroDimBridge`]) or a free
/// path ([`TargetId::FreeFunctional`]).
pub fn estimate_laplace_functional(
    target_id: TargetId,
    lambda: f64,
    delta: f64,
    x0: f64,
    n_paths: usize,
    n_steps: usize,
    seed: u64,
) -> Result<FunctionalEstimate> {
    estimate_laplace_functionals(target_id, &[lambda], delta, x0, n_paths, n_steps, seed)
        .map(|mut v| v.remove(0))
}

/// Brownian motion at time `∫₀¹ X ds` for `X` a zero-dimensional bridge from
/// 2 to 0 (driving law of Sinh) or a free zero-dimensional path from 2
/// (driving law of Cosh).
pub fn sample_bdlp_bessel(law: LawId, n: usize, n_steps: usize, seed: u64) -> Result<SampleBatch> {
    let spec = match law {
        LawId::BdlpSinh => BesqSpec::bridge(0.0, 2.0, n_steps),
        LawId::BdlpCosh => BesqSpec::free(0.0, 2.0, n_steps),
        other => {
            return Err(Error::Config(format!(
                "Bessel subordination samples the driving laws of Cosh and Sinh, not {other}"
            )))
        }
    };
    check_paths(n.max(2), n_steps)?;
    let domain = if spec.bridge_to_zero { Domain::Bridge } else { Domain::Besq };
    let family = StreamFamily::new(seed, domain);
    let draws = integrals_with(&spec, n, &family, |rng, a| a.sqrt() * normal(rng));
    let mut config = SamplerConfig::new(law, Method::BesselSubordination, n, seed);
    config.n_steps = n_steps;
    Ok(SampleBatch {
        law,
        draws,
        config,
        truncation_sd: 0.0,
    })
}

fn check_dimension(delta: u32) -> Result<()> {
    if delta == 1 || delta == 3 {
        Ok(())
    } else {
        Err(Error::Precondition(format!("dimension must be 1 or 3, got {delta}")))
    }
}

/// First time the norm of a `δ`-dimensional Brownian motion from 0 reaches 1,
/// monitored on a grid of step `1/n_steps_per_unit` with linear
/// interpolation of the crossing.
fn hitting_time(delta: usize, h: f64, rng: &mut ChaCha8Rng) -> Result<f64> {
    let sqrt_h = h.sqrt();
    let mut w = [0.0f64; 3];
    let mut r_prev = 0.0;
    for step in 1..=MAX_PATH_STEPS {
        for c in w.iter_mut().take(delta) {
            *c += sqrt_h * normal(rng);
        }
        let r = w[..delta].iter().map(|c| c * c).sum::<f64>().sqrt();
        if r >= 1.0 {
            let t_prev = (step - 1) as f64 * h;
            return Ok(t_prev + h * (1.0 - r_prev) / (r - r_prev));
        }
        r_prev = r;
    }
    Err(Error::Simulation(format!(
        "no hit of level 1 within {MAX_PATH_STEPS} steps"
    )))
}

/// One hitting time of level 1 by the `δ`-dimensional Bessel process from 0.
pub fn simulate_hitting_time(delta: u32, n_steps_per_unit: usize, seed: u64) -> Result<f64> {
    check_dimension(delta)?;
    check_paths(2, n_steps_per_unit)?;
    let mut rng = StreamFamily::new(seed, Domain::HittingTime).stream(0);
    hitting_time(delta as usize, 1.0 / n_steps_per_unit as f64, &mut rng)
}

/// Estimates `E exp(-t²T/2)` for the hitting time `T` of level 1, one
/// estimate per `t`, all from the same paths.
pub fn estimate_hitting_time_transform(
    delta: u32,
    ts: &[f64],
    n_paths: usize,
    n_steps_per_unit: usize,
    seed: u64,
) -> Result<Vec<FunctionalEstimate>> {
    check_dimension(delta)?;
    check_lambdas(ts)?;
    check_paths(n_paths, n_steps_per_unit)?;
    let h = 1.0 / n_steps_per_unit as f64;
    let family = StreamFamily::new(seed, Domain::HittingTime);
    let times = (0..n_paths as u64)
        .into_par_iter()
        .map(|i| hitting_time(delta as usize, h, &mut family.stream(i)))
        .collect::<Result<Vec<f64>>>()?;
    let target = if delta == 1 { TargetId::HittingTimeD1 } else { TargetId::HittingTimeD3 };
    Ok(ts
        .iter()
        .map(|&t| {
            let exact = closed_form(target, t).expect("hitting target");
            summarize(target, t, delta as f64, 0.0, exact, &times, |v| (-0.5 * t * t * v).exp())
        })
        .collect())
}

/// Time spent at or below level 1 by the `δ`-dimensional Bessel process
/// started at 1, up to the moment its local time at 1 reaches the level the
/// closed forms refer to.
///
/// Local time is measured as `(time with |R - 1| < ε) / (4ε)` and the path
/// stops when it reaches 1. Excursions above `1 + ε` contribute nothing and
/// are independent of the excursions below, so each one is cut out and the
/// path restarts at `1 + ε`. In dimension 3 this includes the final
/// excursion to infinity: the occupation is that of the excursions below 1
/// accumulated over a full unit of local time.
fn occupation(delta: usize, eps: f64, h: f64, rng: &mut ChaCha8Rng) -> Result<f64> {
    let sqrt_h = h.sqrt();
    let band_target = 4.0 * eps;
    let mut w = [1.0f64, 0.0, 0.0];
    let mut r = 1.0f64;
    let mut band = 0.0;
    let mut below = 0.0;
    for _ in 0..MAX_PATH_STEPS {
        if r <= 1.0 {
            below += h;
        }
        if (r - 1.0).abs() < eps {
            band += h;
            if band >= band_target {
                return Ok(below);
            }
        }
        for c in w.iter_mut().take(delta) {
            *c += sqrt_h * normal(rng);
        }
        r = w[..delta].iter().map(|c| c * c).sum::<f64>().sqrt();
        if r > 1.0 + eps {
            let top = 1.0 + eps;
            for c in w.iter_mut().take(delta) {
                *c *= top / r;
            }
            r = top;
        }
    }
    Err(Error::Simulation(format!(
        "local time did not reach its target within {MAX_PATH_STEPS} steps"
    )))
}

/// One draw of the occupation time below level 1 up to the inverse local
/// time at 1.
pub fn occupation_until_inverse_local_time(
    delta: u32,
    eps_local_time: f64,
    n_steps_per_unit: usize,
    seed: u64,
) -> Result<f64> {
    check_dimension(delta)?;
    check_lambdas(&[eps_local_time])?;
    check_paths(2, n_steps_per_unit)?;
    let mut rng = StreamFamily::new(seed, Domain::Occupation).stream(0);
    occupation(delta as usize, eps_local_time, 1.0 / n_steps_per_unit as f64, &mut rng)
}

/// Estimates `E exp(-λ²A/2)` for the occupation time `A` of
/// [`occupation_until_inverse_local_time`], one estimate per `λ`.
pub fn estimate_occupation_transform(
    delta: u32,
    lambdas: &[f64],
    eps_local_time: f64,
    n_paths: usize,
    n_steps_per_unit: usize,
    seed: u64,
) -> Result<Vec<FunctionalEstimate>> {
    check_dimension(delta)?;
    check_lambdas(lambdas)?;
    check_lambdas(&[eps_local_time])?;
    check_paths(n_paths, n_steps_per_unit)?;
    let h = 1.0 / n_steps_per_unit as f64;
    let family = StreamFamily::new(seed, Domain::Occupation);
    let occ = (0..n_paths as u64)
        .into_par_iter()
        .map(|i| occupation(delta as usize, eps_local_time, h, &mut family.stream(i)))
        .collect::<Result<Vec<f64>>>()?;
    let target = if delta == 1 { TargetId::OccupationD1 } else { TargetId::OccupationD3 };
    Ok(lambdas
        .iter()
        .map(|&l| {
            let exact = closed_form(target, l).expect("occupation target");
            summarize(target, l, delta as f64, 1.0, exact, &occ, |v| (-0.5 * l * l * v).exp())
        })
        .collect())
}

/// Checks that independent free paths add in dimension and starting point:
/// the Laplace functional of `∫X + ∫X'` must match the closed form for
/// `(δ₁ + δ₂, x₁ + x₂)`.
#[allow(clippy::too_many_arguments)]
pub fn verify_shiga_watanabe(
    delta1: f64,
    x1: f64,
    delta2: f64,
    x2: f64,
    lambda: f64,
    n_paths: usize,
    n_steps: usize,
    seed: u64,
) -> Result<FunctionalEstimate> {
    check_lambdas(&[lambda])?;
    check_paths(n_paths, n_steps)?;
    let first = BesqSpec::free(delta1, x1, n_steps);
    let second = BesqSpec::free(delta2, x2, n_steps);
    first.validate()?;
    second.validate()?;
    let family = StreamFamily::new(seed, Domain::Besq);
    let sums: Vec<f64> = (0..n_paths as u64)
        .into_par_iter()
        .map(|i| {
            let mut rng = family.stream(i);
            path_integral(&first, &mut rng) + path_integral(&second, &mut rng)
        })
        .collect();
    let (delta, x0) = (delta1 + delta2, x1 + x2);
    Ok(summarize(
        TargetId::Composition,
        lambda,
        delta,
        x0,
        free_functional(lambda, delta, x0),
        &sums,
        |v| (-0.5 * lambda * lambda * v).exp(),
    ))
}
