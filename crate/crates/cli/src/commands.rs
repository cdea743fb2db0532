use std::io::Write;
use std::path::Path;

use hyperbolic_sd::analytic::DEFAULT_GRID;
use hyperbolic_sd::bessel::{self, FunctionalEstimate, TargetId};
use hyperbolic_sd::quadrature::{identity_suite, QuadratureConfig};
use hyperbolic_sd::samplers::{self, Method, SamplerConfig};
use hyperbolic_sd::structure::{default_x_grid, structural_suite};
use hyperbolic_sd::LawId;
use serde::{Deserialize, Serialize};

use crate::error::{CliError, CliResult};
use crate::format::{self, EcfDocument, Format, Provenance, Summary};
use crate::manifest::RunManifest;

/// Result of a command that ran to completion.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Outcome {
    pub passed: bool,
}

/// Where a report goes, and where its one-line summary goes.
pub struct Sink<'a> {
    pub out: Option<&'a Path>,
    pub stdout: &'a mut dyn Write,
    pub stderr: &'a mut dyn Write,
}

impl Sink<'_> {
    fn report(&mut self, bytes: &[u8], manifest: &RunManifest) -> CliResult<()> {
        match self.out {
            Some(path) => {
                std::fs::write(path, bytes).map_err(|e| CliError::io(path, e))?;
                manifest.write_beside(path)
            }
            None => self.stdout.write_all(bytes).map_err(|e| CliError::io("<stdout>", e)),
        }
    }

    /// Summaries go to stdout when the report went to a file.
    fn summary(&mut self, summary: &Summary) -> CliResult<()> {
        let line = serde_json::to_string(summary).expect("plain struct");
        let w: &mut dyn Write = if self.out.is_some() { self.stdout } else { self.stderr };
        writeln!(w, "{line}").map_err(|e| CliError::io("<output>", e))
    }
}

/// Parses a comma list of finite reals; an empty list is a usage error.
pub fn parse_grid(s: &str, what: &str) -> CliResult<Vec<f64>> {
    let grid = s
        .split(',')
        .map(str::trim)
        .filter(|v| !v.is_empty())
        .map(|v| {
            v.parse::<f64>()
                .ok()
                .filter(|x| x.is_finite())
                .ok_or_else(|| CliError::Usage(format!("{what}: `{v}` is not a finite number")))
        })
        .collect::<CliResult<Vec<f64>>>()?;
    if grid.is_empty() {
        return Err(CliError::Usage(format!("{what} is empty")));
    }
    Ok(grid)
}

fn read_text(path: &Path) -> CliResult<String> {
    let bytes = std::fs::read(path).map_err(|e| CliError::io(path, e))?;
    String::from_utf8(bytes).map_err(|_| CliError::data(path, "not UTF-8 text"))
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct VerifyConfig {
    pub quadrature: QuadratureConfig,
    pub t_grid: Vec<f64>,
    pub x_grid: Vec<f64>,
}

/// One row of the identity report, from either the quadrature suite or the
/// pointwise structural checks.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct IdentityRow {
    pub suite: String,
    pub id: String,
    pub law: Option<LawId>,
    /// `t`, `ε` or `x`, depending on the check.
    pub at: f64,
    pub lhs: f64,
    pub rhs: f64,
    pub error: f64,
    pub quad_err: Option<f64>,
    pub tolerance: f64,
    pub passed: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct IdentityReport {
    pub summary: Summary,
    pub rows: Vec<IdentityRow>,
}

pub fn verify_identities(
    tolerance: Option<f64>,
    t_grid: Option<&str>,
    format: Format,
    sink: &mut Sink<'_>,
) -> CliResult<Outcome> {
    let mut quadrature = QuadratureConfig::default();
    if let Some(tol) = tolerance {
        quadrature.identity_tol = tol;
    }
    let config = VerifyConfig {
        quadrature,
        t_grid: match t_grid {
            Some(s) => parse_grid(s, "--t-grid")?,
            None => DEFAULT_GRID.to_vec(),
        },
        x_grid: default_x_grid(),
    };
    let mut rows: Vec<IdentityRow> = identity_suite(&config.t_grid, &config.quadrature)?
        .into_iter()
        .map(|r| IdentityRow {
            suite: "identity".into(),
            id: r.identity_id.name().into(),
            law: Some(r.law),
            at: r.t,
            lhs: r.lhs_numeric,
            rhs: r.rhs_analytic,
            error: r.abs_err,
            quad_err: Some(r.quad_err),
            tolerance: r.tolerance,
            passed: r.passed,
        })
        .collect();
    rows.extend(
        structural_suite(&config.t_grid, &config.x_grid)?
            .into_iter()
            .map(|r| IdentityRow {
                suite: "structural".into(),
                id: r.check.name().into(),
                law: r.law,
                at: r.at,
                lhs: r.lhs,
                rhs: r.rhs,
                error: r.error,
                quad_err: None,
                tolerance: r.tolerance,
                passed: r.passed,
            }),
    );
    let summary = Summary::of(rows.iter().map(|r| r.passed));
    let bytes = match format {
        Format::Csv => {
            let mut p = Provenance::new("verify-identities");
            p.push("config", serde_json::to_string(&config).expect("plain struct"));
            format::write_csv(&p, &rows)?
        }
        Format::Json => format::to_json(&IdentityReport { summary, rows })?,
    };
    sink.report(&bytes, &RunManifest::new("verify-identities", &config, None))?;
    sink.summary(&summary)?;
    Ok(Outcome {
        passed: summary.all_passed(),
    })
}

/// Law × method table, one line per law.
pub fn compatibility_table() -> String {
    let mut s = format!("{:<10}", "law");
    for m in Method::ALL {
        s += &format!(" {:<20}", m.as_str());
    }
    s.push('\n');
    for law in LawId::ALL {
        s += &format!("{:<10}", law.as_str());
        for m in Method::ALL {
            s += &format!(" {:<20}", if m.supports(law) { "yes" } else { "-" });
        }
        s.push('\n');
    }
    s
}

pub fn sample(config: &SamplerConfig, format: Format, sink: &mut Sink<'_>) -> CliResult<Outcome> {
    if !config.method.supports(config.law) {
        let _ = write!(sink.stderr, "{}", compatibility_table());
        return Err(CliError::Usage(format!(
            "method {} cannot sample {}",
            config.method, config.law
        )));
    }
    let batch = samplers::sample(config)?;
    let bytes = format::emit_batch(&batch, format)?;
    sink.report(&bytes, &RunManifest::new("sample", config, Some(config.seed)))?;
    Ok(Outcome { passed: true })
}

pub fn ecf(
    batch_path: &Path,
    law: Option<LawId>,
    t_grid: Option<&str>,
    format: Format,
    sink: &mut Sink<'_>,
) -> CliResult<Outcome> {
    let t_grid = match t_grid {
        Some(s) => parse_grid(s, "--t-grid")?,
        None => DEFAULT_GRID.to_vec(),
    };
    let mut batch = format::parse_batch(&read_text(batch_path)?, batch_path)?;
    if let Some(law) = law {
        batch.law = law;
    }
    if batch.draws.iter().any(|x| !x.is_finite()) {
        return Err(CliError::data(batch_path, "batch holds non-finite draws"));
    }
    let report = samplers::ecf_report(&batch, &t_grid)?;
    let doc = EcfDocument {
        law: batch.law,
        n: batch.draws.len(),
        passed: report.within_band(),
        report,
    };
    #[derive(Serialize)]
    struct Snapshot<'a> {
        batch: &'a Path,
        law: LawId,
        t_grid: &'a [f64],
        sampler: SamplerConfig,
    }
    let snapshot = Snapshot {
        batch: batch_path,
        law: batch.law,
        t_grid: &t_grid,
        sampler: batch.config,
    };
    let bytes = format::emit_ecf(&doc, format)?;
    sink.report(&bytes, &RunManifest::new("ecf", &snapshot, Some(batch.config.seed)))?;
    sink.summary(&Summary::of([doc.passed]))?;
    Ok(Outcome { passed: doc.passed })
}

/// Half-width of the local-time band for the occupation targets.
pub const OCCUPATION_EPS: f64 = 0.05;

/// How far an estimate may sit from its closed form: the larger of
/// `sigmas · stderr` and `rel · |analytic|`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Tolerance {
    pub sigmas: f64,
    pub rel: f64,
}

pub fn tolerance_for(target: TargetId) -> Tolerance {
    use TargetId::*;
    match target {
        Composition | BridgeFunctional | ZeroDimBridge | FreeFunctional => Tolerance { sigmas: 3.0, rel: 0.01 },
        // a discrete grid detects crossings late
        HittingTimeD1 | HittingTimeD3 => Tolerance { sigmas: 3.0, rel: 0.02 },
        OccupationD1 | OccupationD3 => Tolerance { sigmas: 0.0, rel: 0.05 },
    }
}

/// One Monte Carlo configuration of a target.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub enum Job {
    Functional { target: TargetId, delta: f64, x0: f64 },
    Composition { delta1: f64, x1: f64, delta2: f64, x2: f64 },
    Hitting { target: TargetId, delta: u32 },
    Occupation { target: TargetId, delta: u32 },
}

const STARTS: [f64; 3] = [1.0, 2.0, 4.0];
const DIMENSIONS: [f64; 4] = [0.0, 1.0, 2.0, 3.0];

/// The configurations run for a target by default.
pub fn jobs_for(target: TargetId) -> Vec<Job> {
    use TargetId::*;
    let grid = |target| {
        DIMENSIONS
            .iter()
            .flat_map(|&delta| STARTS.iter().map(move |&x0| Job::Functional { target, delta, x0 }))
            .collect()
    };
    match target {
        Composition => vec![
            Job::Composition { delta1: 1.0, x1: 0.0, delta2: 1.0, x2: 0.0 },
            Job::Composition { delta1: 0.0, x1: 1.0, delta2: 0.0, x2: 1.0 },
            Job::Composition { delta1: 1.0, x1: 1.0, delta2: 2.0, x2: 3.0 },
        ],
        BridgeFunctional | FreeFunctional => grid(target),
        ZeroDimBridge => STARTS
            .iter()
            .map(|&x0| Job::Functional { target, delta: 0.0, x0 })
            .collect(),
        HittingTimeD1 => vec![Job::Hitting { target, delta: 1 }],
        HittingTimeD3 => vec![Job::Hitting { target, delta: 3 }],
        OccupationD1 => vec![Job::Occupation { target, delta: 1 }],
        OccupationD3 => vec![Job::Occupation { target, delta: 3 }],
    }
}

/// Default `λ` (or `t`) values for a target.
pub fn default_lambdas(target: TargetId) -> Vec<f64> {
    match target {
        TargetId::Composition | TargetId::OccupationD1 | TargetId::OccupationD3 => vec![1.0],
        _ => vec![0.5, 1.0, 2.0],
    }
}

/// Runs one job. `n_steps` is steps over the unit horizon for the path
/// functionals and steps per unit time for hitting and occupation.
pub fn run_job(job: Job, lambdas: &[f64], n_paths: usize, n_steps: usize, seed: u64) -> CliResult<Vec<FunctionalEstimate>> {
    Ok(match job {
        Job::Functional { target, delta, x0 } => {
            bessel::estimate_laplace_functionals(target, lambdas, delta, x0, n_paths, n_steps, seed)?
        }
        Job::Composition { delta1, x1, delta2, x2 } => lambdas
            .iter()
            .map(|&l| bessel::verify_shiga_watanabe(delta1, x1, delta2, x2, l, n_paths, n_steps, seed))
            .collect::<Result<_, _>>()?,
        Job::Hitting { delta, .. } => bessel::estimate_hitting_time_transform(delta, lambdas, n_paths, n_steps, seed)?,
        Job::Occupation { delta, .. } => {
            bessel::estimate_occupation_transform(delta, lambdas, OCCUPATION_EPS, n_paths, n_steps, seed)?
        }
    })
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EstimateRow {
    pub target_id: TargetId,
    pub lambda: f64,
    pub delta: f64,
    pub x0: f64,
    pub mc_mean: f64,
    pub mc_stderr: f64,
    pub analytic: f64,
    pub n_paths: usize,
    pub abs_dev: f64,
    pub allowed: f64,
    pub passed: bool,
}

impl EstimateRow {
    pub fn judge(e: &FunctionalEstimate) -> Self {
        let tol = tolerance_for(e.target_id);
        let allowed = (tol.sigmas * e.mc_stderr).max(tol.rel * e.analytic.abs());
        Self {
            target_id: e.target_id,
            lambda: e.lambda,
            delta: e.delta,
            x0: e.x0,
            mc_mean: e.mc_mean,
            mc_stderr: e.mc_stderr,
            analytic: e.analytic,
            n_paths: e.n_paths,
            abs_dev: e.abs_dev(),
            allowed,
            passed: e.abs_dev() <= allowed,
        }
    }
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct BesselConfig {
    pub targets: Vec<TargetId>,
    pub lambdas: Option<Vec<f64>>,
    pub n_paths: usize,
    pub n_steps: usize,
    pub seed: u64,
    pub occupation_eps: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BesselReport {
    pub summary: Summary,
    pub rows: Vec<EstimateRow>,
}

/// Parses `Eq14,Eq16`-style target lists.
pub fn parse_targets(s: &str) -> CliResult<Vec<TargetId>> {
    let targets = s
        .split(',')
        .map(str::trim)
        .filter(|v| !v.is_empty())
        .map(|v| v.parse::<TargetId>().map_err(|e| CliError::Usage(e.to_string())))
        .collect::<CliResult<Vec<_>>>()?;
    if targets.is_empty() {
        return Err(CliError::Usage("--targets is empty".into()));
    }
    Ok(targets)
}

pub fn bessel_verify(config: &BesselConfig, format: Format, sink: &mut Sink<'_>) -> CliResult<Outcome> {
    if config.n_paths == 0 || config.n_steps == 0 {
        return Err(CliError::Usage("--paths and --steps must be at least 1".into()));
    }
    let mut rows = Vec::new();
    for &target in &config.targets {
        let lambdas = config.lambdas.clone().unwrap_or_else(|| default_lambdas(target));
        let index = TargetId::ALL.iter().position(|&t| t == target).expect("listed") as u64;
        for (j, job) in jobs_for(target).into_iter().enumerate() {
            // a job's seed depends only on the job, not on which others run
            let seed = config.seed.wrapping_add(1000 * index + j as u64);
            let estimates = run_job(job, &lambdas, config.n_paths, config.n_steps, seed)?;
            rows.extend(estimates.iter().map(EstimateRow::judge));
        }
    }
    let summary = Summary::of(rows.iter().map(|r| r.passed));
    let bytes = match format {
        Format::Csv => {
            let mut p = Provenance::new("bessel-verify");
            p.push("seed", config.seed)
                .push("config", serde_json::to_string(config).expect("plain struct"));
            format::write_csv(&p, &rows)?
        }
        Format::Json => format::to_json(&BesselReport { summary, rows })?,
    };
    sink.report(&bytes, &RunManifest::new("bessel-verify", config, Some(config.seed)))?;
    sink.summary(&summary)?;
    Ok(Outcome {
        passed: summary.all_passed(),
    })
}

