//! Random generation for the seven laws.
//!
//! | method                | laws                          |
//! |-----------------------|-------------------------------|
//! | `Series`              | Laplace, Cosh, Sinh, Tanh     |
//! | `StoppedBrownian`     | Laplace                       |
//! | `CompoundPoisson`     | driving law of Tanh           |
//! | `ExpKernelIntegral`   | Tanh                          |
//! | `BesselSubordination` | driving laws of Cosh and Sinh |
//!
//! Every draw reads its own random stream, addressed by `(seed, method,
//! draw index)`, so a batch is bitwise reproducible and independent of the
//! number of worker threads. Within a draw the series summands consume the
//! stream in order, so raising `k` only appends randomness after the
//! summands already present.

use std::f64::consts::PI;

use rand::distr::Open01;
use rand::Rng;
use rand_distr::{Exp1, StandardNormal};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::analytic::{self, coefficient_tail};
use crate::bessel;
use crate::error::{Error, Result};
use crate::law::LawId;
use crate::rng::{Domain, StreamFamily};
use crate::stats;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Method {
    Series,
    CompoundPoisson,
    ExpKernelIntegral,
    StoppedBrownian,
    BesselSubordination,
}

impl Method {
    pub const ALL: [Method; 5] = [
        Method::Series,
        Method::CompoundPoisson,
        Method::ExpKernelIntegral,
        Method::StoppedBrownian,
        Method::BesselSubordination,
    ];

    pub fn as_str(self) -> &'static str {
        match self {
            Method::Series => "Series",
            Method::CompoundPoisson => "CompoundPoisson",
            Method::ExpKernelIntegral => "ExpKernelIntegral",
            Method::StoppedBrownian => "StoppedBrownian",
            Method::BesselSubordination => "BesselSubordination",
        }
    }

    pub fn supports(self, law: LawId) -> bool {
        use LawId::*;
        match self {
            // a Laplace "series" is its single summand
            Method::Series => matches!(law, Laplace | CoshLaw | SinhLaw | TanhLaw),
            Method::CompoundPoisson => law == BdlpTanh,
            Method::ExpKernelIntegral => law == TanhLaw,
            Method::StoppedBrownian => law == Laplace,
            Method::BesselSubordination => matches!(law, BdlpCosh | BdlpSinh),
        }
    }

    /// The conventional method for a law.
    pub fn default_for(law: LawId) -> Method {
        match law {
            LawId::BdlpTanh => Method::CompoundPoisson,
            LawId::BdlpCosh | LawId::BdlpSinh => Method::BesselSubordination,
            _ => Method::Series,
        }
    }

    fn domain(self) -> Domain {
        match self {
            Method::Series => Domain::Series,
            Method::CompoundPoisson => Domain::CompoundPoisson,
            Method::ExpKernelIntegral => Domain::ExpKernel,
            Method::StoppedBrownian => Domain::StoppedBrownian,
            Method::BesselSubordination => Domain::Bridge,
        }
    }
}

impl std::fmt::Display for Method {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(self.as_str())
    }
}

impl std::str::FromStr for Method {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let key = s.trim().to_ascii_lowercase().replace(['-', '_'], "");
        Method::ALL
            .into_iter()
            .find(|m| m.as_str().to_ascii_lowercase() == key)
            .ok_or_else(|| Error::Config(format!("unknown method `{s}`")))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SamplerConfig {
    pub law: LawId,
    pub method: Method,
    /// Number of retained series summands.
    pub k: usize,
    /// Horizon of the exponential-kernel integral.
    pub s_max: f64,
    pub seed: u64,
    pub n: usize,
    /// Replace the omitted series tail by a centred Gaussian of the same
    /// variance.
    pub tail_compensation: bool,
    /// Time steps per path for Bessel subordination.
    pub n_steps: usize,
}

impl SamplerConfig {
    pub const DEFAULT_K: usize = 1024;
    pub const DEFAULT_S_MAX: f64 = 20.0;
    pub const DEFAULT_N_STEPS: usize = 10_000;

    pub fn new(law: LawId, method: Method, n: usize, seed: u64) -> Self {
        Self {
            law,
            method,
            k: Self::DEFAULT_K,
            s_max: Self::DEFAULT_S_MAX,
            seed,
            n,
            tail_compensation: true,
            n_steps: Self::DEFAULT_N_STEPS,
        }
    }

    pub fn validate(&self) -> Result<()> {
        if !self.method.supports(self.law) {
            return Err(Error::Config(format!(
                "method {} cannot sample {}",
                self.method, self.law
            )));
        }
        if self.k == 0 || self.n == 0 || self.n_steps == 0 {
            return Err(Error::Config("k, n and n_steps must all be ≥ 1".into()));
        }
        if !(self.s_max > 0.0) || !self.s_max.is_finite() {
            return Err(Error::Config(format!("s_max must be positive, got {}", self.s_max)));
        }
        Ok(())
    }

    /// Standard deviation of what truncation leaves out: the series tail
    /// beyond `k` summands, or the kernel integral beyond `s_max`.
    pub fn truncation_tail_sd(&self) -> f64 {
        match (self.method, self.law) {
            (Method::Series, LawId::CoshLaw | LawId::SinhLaw | LawId::TanhLaw) => {
                series_tail_sd(self.law, self.k)
            }
            // E[J²] = Var(cosh) + Var(sinh) = 1 + 1/3
            (Method::ExpKernelIntegral, _) => {
                ((4.0 / 3.0) * (-2.0 * self.s_max).exp() / 2.0).sqrt()
            }
            (Method::CompoundPoisson, _) => {
                // one Poisson(1) count of cosh + sinh draws
                (series_tail_sd(LawId::CoshLaw, self.k).powi(2)
                    + series_tail_sd(LawId::SinhLaw, self.k).powi(2))
                .sqrt()
            }
            _ => 0.0,
        }
    }
}

/// `√(2 Σ_{j>k} λ_j²)` (thinned for tanh), the sd of the omitted summands.
fn series_tail_sd(law: LawId, k: usize) -> f64 {
    (2.0 * coefficient_tail(law, k)).sqrt()
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SampleBatch {
    pub law: LawId,
    pub draws: Vec<f64>,
    pub config: SamplerConfig,
    /// [`SamplerConfig::truncation_tail_sd`] at generation time.
    pub truncation_sd: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EcfReport {
    pub t_grid: Vec<f64>,
    pub ecf: Vec<f64>,
    pub analytic: Vec<f64>,
    pub max_abs_dev: f64,
    /// `4/√n`
    pub band: f64,
}

impl EcfReport {
    pub fn within_band(&self) -> bool {
        self.max_abs_dev <= self.band
    }
}

/// Laplace summand `η`: sign times a unit exponential. The sign is set
/// bitwise; a branch on it would be mispredicted half the time.
#[inline]
fn laplace<R: Rng>(rng: &mut R) -> f64 {
    let e: f64 = rng.sample(Exp1);
    let sign = u64::from(rng.next_u32() & 1) << 63;
    f64::from_bits(e.to_bits() | sign)
}

/// Series coefficients and, for tanh, the thinning probabilities.
struct SeriesPlan {
    scale: Vec<f64>,
    keep: Option<Vec<f64>>,
    tail_sd: f64,
}

impl SeriesPlan {
    fn new(law: LawId, k: usize, compensate: bool) -> Self {
        let (scale, keep) = match law {
            LawId::CoshLaw => ((1..=k).map(|j| 2.0 / ((2 * j - 1) as f64 * PI)).collect(), None),
            LawId::SinhLaw => ((1..=k).map(|j| 1.0 / (j as f64 * PI)).collect(), None),
            LawId::TanhLaw => (
                (1..=k).map(|j| 1.0 / ((j as f64 - 0.5) * PI)).collect(),
                // 1 - ((j - 1/2)/j)²
                Some((1..=k).map(|j| (j as f64 - 0.25) / (j * j) as f64).collect()),
            ),
            _ => unreachable!("checked by the caller"),
        };
        let tail_sd = if compensate { series_tail_sd(law, k) } else { 0.0 };
        Self {
            scale,
            keep,
            tail_sd,
        }
    }

    fn draw<R: Rng>(&self, rng: &mut R) -> f64 {
        let mut sum = 0.0;
        match &self.keep {
            None => {
                for &c in &self.scale {
                    sum += c * laplace(rng);
                }
            }
            Some(keep) => {
                for (&c, &p) in self.scale.iter().zip(keep) {
                    if rng.random_bool(p) {
                        sum += c * laplace(rng);
                    }
                }
            }
        }
        if self.tail_sd > 0.0 {
            let z: f64 = rng.sample(StandardNormal);
            sum += self.tail_sd * z;
        }
        sum
    }
}

fn generate(config: &SamplerConfig, draw: impl Fn(&mut rand_chacha::ChaCha8Rng) -> f64 + Sync) -> SampleBatch {
    // distinct laws never share randomness, even under one seed
    let salt = LawId::ALL.iter().position(|&l| l == config.law).unwrap_or(0) as u64;
    let family = StreamFamily::salted(config.seed, config.method.domain(), salt);
    let draws = (0..config.n as u64)
        .into_par_iter()
        .map(|i| draw(&mut family.stream(i)))
        .collect();
    SampleBatch {
        law: config.law,
        draws,
        config: *config,
        truncation_sd: config.truncation_tail_sd(),
    }
}

fn require(config: &SamplerConfig, laws: &[LawId], method: Method) -> Result<()> {
    config.validate()?;
    if !laws.contains(&config.law) || config.method != method {
        return Err(Error::Config(format!(
            "expected method {method} for one of {laws:?}, got {} for {}",
            config.method, config.law
        )));
    }
    Ok(())
}

/// Draws with density `e^{-|x|}/2` by inversion.
pub fn sample_laplace(config: &SamplerConfig) -> Result<SampleBatch> {
    require(config, &[LawId::Laplace], Method::Series)?;
    Ok(generate(config, laplace))
}

/// Laplace series for the cosh and sinh laws, Bernoulli-thinned series for
/// the tanh law.
pub fn sample_hyperbolic_series(config: &SamplerConfig) -> Result<SampleBatch> {
    require(config, &LawId::HYPERBOLIC, Method::Series)?;
    let plan = SeriesPlan::new(config.law, config.k, config.tail_compensation);
    Ok(generate(config, |rng| plan.draw(rng)))
}

/// Compound Poisson with unit rate whose jumps are sums of independent cosh
/// and sinh series draws. A zero count gives an exact zero.
pub fn sample_bdlp_tanh(config: &SamplerConfig) -> Result<SampleBatch> {
    require(config, &[LawId::BdlpTanh], Method::CompoundPoisson)?;
    let cosh = SeriesPlan::new(LawId::CoshLaw, config.k, config.tail_compensation);
    let sinh = SeriesPlan::new(LawId::SinhLaw, config.k, config.tail_compensation);
    Ok(generate(config, |rng| {
        let count = poisson_one(rng);
        let mut sum = 0.0;
        for _ in 0..count {
            sum += cosh.draw(rng) + sinh.draw(rng);
        }
        sum
    }))
}

/// Poisson(1) by sequential inversion of one uniform.
fn poisson_one<R: Rng>(rng: &mut R) -> u32 {
    let u: f64 = rng.sample(Open01);
    let mut p = (-1.0f64).exp();
    let mut cdf = p;
    let mut k = 0;
    while u > cdf && k < 40 {
        k += 1;
        p /= k as f64;
        cdf += p;
    }
    k
}

/// `Σ e^{-sᵢ} Jᵢ` over the unit-rate Poisson epochs `sᵢ ≤ s_max` of the tanh
/// driving process. Jumps use exact inversion of the cosh and sinh
/// distribution functions.
pub fn sample_sd_integral_tanh(config: &SamplerConfig) -> Result<SampleBatch> {
    require(config, &[LawId::TanhLaw], Method::ExpKernelIntegral)?;
    let s_max = config.s_max;
    Ok(generate(config, |rng| {
        let mut s = 0.0;
        let mut sum = 0.0;
        loop {
            let gap: f64 = rng.sample(Exp1);
            s += gap;
            if s > s_max {
                return sum;
            }
            let (uc, us): (f64, f64) = (rng.sample(Open01), rng.sample(Open01));
            let c = (2.0 / PI) * (0.5 * PI * uc).tan().ln();
            let l = (us / (1.0 - us)).ln() / PI;
            sum += (-s).exp() * (c + l);
        }
    }))
}

/// `√2 · B` at an independent unit-exponential time: `√(2E) · Z`.
pub fn sample_stopped_brownian(config: &SamplerConfig) -> Result<SampleBatch> {
    require(config, &[LawId::Laplace], Method::StoppedBrownian)?;
    Ok(generate(config, |rng| {
        let e: f64 = rng.sample(Exp1);
        let z: f64 = rng.sample(StandardNormal);
        (2.0 * e).sqrt() * z
    }))
}

/// Dispatches on `config.law` and `config.method`.
pub fn sample(config: &SamplerConfig) -> Result<SampleBatch> {
    config.validate()?;
    match (config.method, config.law) {
        (Method::Series, LawId::Laplace) => sample_laplace(config),
        (Method::Series, _) => sample_hyperbolic_series(config),
        (Method::CompoundPoisson, _) => sample_bdlp_tanh(config),
        (Method::ExpKernelIntegral, _) => sample_sd_integral_tanh(config),
        (Method::StoppedBrownian, _) => sample_stopped_brownian(config),
        (Method::BesselSubordination, law) => {
            let mut batch = bessel::sample_bdlp_bessel(law, config.n, config.n_steps, config.seed)?;
            batch.config = *config;
            Ok(batch)
        }
    }
}

/// Compares the batch's empirical characteristic function with the closed
/// form on `t_grid`.
pub fn ecf_report(batch: &SampleBatch, t_grid: &[f64]) -> Result<EcfReport> {
    if batch.draws.is_empty() {
        return Err(Error::Precondition("empty batch".into()));
    }
    let mut ecf = Vec::with_capacity(t_grid.len());
    let mut exact = Vec::with_capacity(t_grid.len());
    for &t in t_grid {
        ecf.push(stats::empirical_cf(&batch.draws, t)?);
        exact.push(analytic::cf_value(batch.law, t)?);
    }
    let max_abs_dev = ecf
        .iter()
        .zip(&exact)
        .map(|(a, b)| (a - b).abs())
        .fold(0.0, f64::max);
    Ok(EcfReport {
        t_grid: t_grid.to_vec(),
        ecf,
        analytic: exact,
        max_abs_dev,
        band: 4.0 / (batch.draws.len() as f64).sqrt(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn compatibility_table() {
        assert!(Method::Series.supports(LawId::TanhLaw));
        assert!(!Method::Series.supports(LawId::BdlpTanh));
        assert!(Method::CompoundPoisson.supports(LawId::BdlpTanh));
        assert!(!Method::ExpKernelIntegral.supports(LawId::CoshLaw));
        assert!(Method::BesselSubordination.supports(LawId::BdlpSinh));
        let bad = SamplerConfig::new(LawId::CoshLaw, Method::StoppedBrownian, 10, 1);
        assert!(matches!(sample(&bad), Err(Error::Config(_))));
    }

    #[test]
    fn first_thinning_probability() {
        let plan = SeriesPlan::new(LawId::TanhLaw, 3, false);
        assert_eq!(plan.keep.unwrap()[0], 0.75);
    }

    #[test]
    fn poisson_inversion_mass_at_zero() {
        let family = StreamFamily::new(5, Domain::CompoundPoisson);
        let n = 200_000;
        let zeros = (0..n).filter(|&i| poisson_one(&mut family.stream(i)) == 0).count();
        let p = zeros as f64 / n as f64;
        let sd = ((-1.0f64).exp() * (1.0 - (-1.0f64).exp()) / n as f64).sqrt();
        assert!((p - (-1.0f64).exp()).abs() < 4.0 * sd);
    }

    #[test]
    fn tail_sd_matches_direct_sum() {
        let k = 50;
        let direct: f64 = (k + 1..200_000)
            .map(|j| 2.0 * (1.0 / (j as f64 * PI)).powi(2))
            .sum::<f64>()
            .sqrt();
        assert!((series_tail_sd(LawId::SinhLaw, k) - direct).abs() < 1e-5);
    }

    #[test]
    fn method_names_parse() {
        for m in Method::ALL {
            assert_eq!(m.as_str().parse::<Method>().unwrap(), m);
        }
        assert_eq!("compound-poisson".parse::<Method>().unwrap(), Method::CompoundPoisson);
    }
}
