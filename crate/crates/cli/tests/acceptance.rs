//! Acceptance run: one line per criterion, at full scale. Exits non-zero if
//! any criterion fails. Runtime budgets are part of each criterion.

use std::path::Path;
use std::process::Command;
use std::time::Instant;

use hyperbolic_sd::analytic::{cdf_value, DEFAULT_GRID};
use hyperbolic_sd::bessel::{self, FunctionalEstimate, TargetId};
use hyperbolic_sd::quadrature::{identity_suite, QuadratureConfig};
use hyperbolic_sd::samplers::{ecf_report, sample, Method, SampleBatch, SamplerConfig};
use hyperbolic_sd::stats::{ks_one_sample, ks_two_sample};
use hyperbolic_sd::structure::{default_x_grid, structural_suite, CheckId};
use hyperbolic_sd::LawId;
use hypsd_cli::manifest::RunManifest;

const N: usize = 1_000_000;
const PATHS: usize = 100_000;
const STEPS: usize = 10_000;
const KS_LEVEL: f64 = 0.01;

struct Verdict {
    passed: bool,
    detail: String,
}

fn verdict(passed: bool, detail: impl Into<String>) -> Verdict {
    Verdict {
        passed,
        detail: detail.into(),
    }
}

fn criterion(id: u32, name: &str, budget_secs: f64, failures: &mut u32, check: impl FnOnce() -> Verdict) {
    let start = Instant::now();
    let v = check();
    let secs = start.elapsed().as_secs_f64();
    let in_time = secs <= budget_secs;
    let ok = v.passed && in_time;
    if !ok {
        *failures += 1;
    }
    println!(
        "{} {id:>2} {name}: {} [{secs:.1} s of {budget_secs:.0} s{}]",
        if ok { "PASS" } else { "FAIL" },
        v.detail,
        if in_time { "" } else { ", over budget" }
    );
}

fn batch(law: LawId, method: Method, seed: u64) -> SampleBatch {
    sample(&SamplerConfig::new(law, method, N, seed)).expect("valid sampler config")
}

fn ecf_ok(b: &SampleBatch, slack: f64, detail: &mut Vec<String>) -> bool {
    let r = ecf_report(b, &DEFAULT_GRID).expect("non-empty batch");
    detail.push(format!("{} ecf dev {:.2e} (band {:.2e})", b.law, r.max_abs_dev, r.band + slack));
    r.max_abs_dev <= r.band + slack
}

fn ks_ok(b: &SampleBatch, detail: &mut Vec<String>) -> bool {
    let ks = ks_one_sample(&b.draws, |x| cdf_value(b.law, x).expect("closed-form cdf")).expect("non-empty");
    detail.push(format!("{} KS p {:.3}", b.law, ks.p_value));
    ks.passes(KS_LEVEL)
}

fn all_within(estimates: &[FunctionalEstimate], sigmas: f64, rel: f64, worst: &mut f64) -> bool {
    let mut ok = true;
    for e in estimates {
        let allowed = (sigmas * e.mc_stderr).max(rel * e.analytic.abs());
        *worst = worst.max(e.abs_dev() / allowed);
        if !e.within(sigmas, rel) {
            ok = false;
            println!(
                "     miss {} λ={} δ={} x={}: {:.6} ± {:.1e} vs {:.6}",
                e.target_id, e.lambda, e.delta, e.x0, e.mc_mean, e.mc_stderr, e.analytic
            );
        }
    }
    ok
}

fn hypsd(args: &[&str]) -> i32 {
    Command::new(env!("CARGO_BIN_EXE_hypsd"))
        .args(args)
        .output()
        .expect("binary runs")
        .status
        .code()
        .unwrap_or(-1)
}

fn identical_reruns(dir: &Path, name: &str, args: &[&str]) -> Result<(), String> {
    let mut outputs = Vec::new();
    for run in 0..2 {
        let out = dir.join(format!("{name}-{run}"));
        let mut full: Vec<&str> = args.to_vec();
        let out_str = out.to_str().expect("utf-8 temp path").to_owned();
        full.extend(["--out", &out_str]);
        let code = hypsd(&full);
        if code > 1 {
            return Err(format!("{name} exited {code}"));
        }
        let manifest: RunManifest =
            serde_json::from_slice(&std::fs::read(RunManifest::sidecar_path(&out)).map_err(|e| e.to_string())?)
                .map_err(|e| e.to_string())?;
        outputs.push((std::fs::read(&out).map_err(|e| e.to_string())?, manifest));
    }
    if !outputs[0].1.same_run(&outputs[1].1) {
        return Err(format!("{name}: manifests differ"));
    }
    if outputs[0].0 != outputs[1].0 {
        return Err(format!("{name}: outputs differ"));
    }
    Ok(())
}

fn main() {
    let mut failures = 0;
    let cfg = QuadratureConfig::default();

    criterion(1, "integral identities at abs tol 1e-8", 30.0, &mut failures, || {
        match identity_suite(&DEFAULT_GRID, &cfg) {
            Ok(records) => {
                let bad = records.iter().filter(|r| !r.passed || r.tolerance > 1e-8).count();
                let worst = records.iter().map(|r| r.abs_err).fold(0.0, f64::max);
                verdict(bad == 0, format!("{} records, {bad} failed, worst {worst:.1e}", records.len()))
            }
            Err(e) => verdict(false, e.to_string()),
        }
    });

    let structural = structural_suite(&DEFAULT_GRID, &default_x_grid()).expect("structural checks run");
    let summarize = |ids: &[CheckId]| {
        let picked: Vec<_> = structural.iter().filter(|r| ids.contains(&r.check)).collect();
        let bad = picked.iter().filter(|r| !r.passed).count();
        let worst = picked.iter().map(|r| r.error).fold(0.0, f64::max);
        verdict(bad == 0 && !picked.is_empty(), format!("{} checks, {bad} failed, worst {worst:.1e}", picked.len()))
    };

    criterion(2, "factorizations and density additivity to 1e-12", 1.0, &mut failures, || {
        summarize(&[
            CheckId::CfFactorization,
            CheckId::DriverFactorization,
            CheckId::MAdditivity,
            CheckId::NAdditivity,
        ])
    });

    criterion(3, "derivative link, monotone x·m, flagged counterexample", 5.0, &mut failures, || {
        let v = summarize(&[CheckId::DerivativeLink, CheckId::MonotoneProfile, CheckId::NonSdFlagged]);
        let flagged = structural.iter().any(|r| r.check == CheckId::NonSdFlagged && r.passed);
        verdict(v.passed && flagged, v.detail)
    });

    criterion(4, "series samplers at n = 1e6: ECF, KS, sum of Sinh and Tanh", 120.0, &mut failures, || {
        let mut detail = Vec::new();
        let cosh = batch(LawId::CoshLaw, Method::Series, 101);
        let sinh = batch(LawId::SinhLaw, Method::Series, 102);
        let tanh = batch(LawId::TanhLaw, Method::Series, 103);
        let laplace = batch(LawId::Laplace, Method::Series, 104);
        let mut ok = true;
        for b in [&cosh, &sinh, &tanh, &laplace] {
            ok &= ecf_ok(b, 0.0, &mut detail);
        }
        for b in [&cosh, &sinh, &laplace] {
            ok &= ks_ok(b, &mut detail);
        }
        let sum: Vec<f64> = sinh.draws.iter().zip(&tanh.draws).map(|(s, t)| s + t).collect();
        let ks = ks_two_sample(&sum, &cosh.draws).expect("non-empty");
        detail.push(format!("Sinh+Tanh vs Cosh KS p {:.3}", ks.p_value));
        ok &= ks.passes(KS_LEVEL);
        verdict(ok, detail.join("; "))
    });

    criterion(5, "exponential-kernel Tanh sampler at s_max = 20", 120.0, &mut failures, || {
        let mut detail = Vec::new();
        let b = batch(LawId::TanhLaw, Method::ExpKernelIntegral, 105);
        let ok = b.config.s_max == 20.0 && ecf_ok(&b, 0.0, &mut detail);
        verdict(ok, detail.join("; "))
    });

    criterion(6, "compound Poisson driving law of Tanh", 60.0, &mut failures, || {
        let mut detail = Vec::new();
        let b = batch(LawId::BdlpTanh, Method::CompoundPoisson, 106);
        let p = (-1.0f64).exp();
        let atom = b.draws.iter().filter(|&&x| x == 0.0).count() as f64 / N as f64;
        let sigma = (p * (1.0 - p) / N as f64).sqrt();
        let atom_ok = (atom - p).abs() <= 3.0 * sigma;
        detail.push(format!("atom {atom:.5} vs {p:.5} ({:.2} σ)", (atom - p).abs() / sigma));
        let ok = atom_ok & ecf_ok(&b, 0.0, &mut detail);
        verdict(ok, detail.join("; "))
    });

    criterion(7, "squared Bessel functionals, composition, subordinated laws", 600.0, &mut failures, || {
        let lambdas = [0.5, 1.0, 2.0];
        let (mut ok, mut worst, mut runs) = (true, 0.0f64, 0);
        let mut seed = 200;
        let mut run = |target, delta, x0| {
            seed += 1;
            runs += 1;
            bessel::estimate_laplace_functionals(target, &lambdas, delta, x0, PATHS, STEPS, seed).expect("valid")
        };
        for delta in [0.0, 1.0, 2.0, 3.0] {
            for x0 in [1.0, 2.0, 4.0] {
                for target in [TargetId::BridgeFunctional, TargetId::FreeFunctional] {
                    ok &= all_within(&run(target, delta, x0), 3.0, 0.01, &mut worst);
                }
                if delta == 0.0 {
                    ok &= all_within(&run(TargetId::ZeroDimBridge, delta, x0), 3.0, 0.01, &mut worst);
                }
            }
        }
        let mut detail = vec![format!("{runs} configs × 3 λ, worst {worst:.2} of allowance")];

        let pair = bessel::verify_shiga_watanabe(0.0, 1.0, 1.0, 1.0, 1.0, PATHS, STEPS, 301).expect("valid");
        let single =
            bessel::estimate_laplace_functional(TargetId::FreeFunctional, 1.0, 1.0, 2.0, PATHS, STEPS, 302).expect("valid");
        let combined = (pair.mc_stderr.powi(2) + single.mc_stderr.powi(2)).sqrt();
        let gap = (pair.mc_mean - single.mc_mean).abs();
        ok &= gap <= 3.0 * combined;
        detail.push(format!("composition gap {:.2} σ", gap / combined));

        for (law, seed) in [(LawId::BdlpSinh, 303), (LawId::BdlpCosh, 304)] {
            let b = bessel::sample_bdlp_bessel(law, PATHS, STEPS, seed).expect("valid");
            ok &= ecf_ok(&b, 0.01, &mut detail);
        }
        verdict(ok, detail.join("; "))
    });

    criterion(8, "hitting times of level 1, δ ∈ {1, 3}", 600.0, &mut failures, || {
        let (mut ok, mut worst) = (true, 0.0f64);
        let mut detail = Vec::new();
        for (delta, seed) in [(1, 401), (3, 402)] {
            let est = bessel::estimate_hitting_time_transform(delta, &[0.5, 1.0, 2.0], PATHS, STEPS, seed).expect("valid");
            ok &= all_within(&est, 3.0, 0.02, &mut worst);
            for e in &est {
                detail.push(format!("δ={delta} t={}: {:+.2}%", e.lambda, 100.0 * (e.mc_mean / e.analytic - 1.0)));
            }
        }
        detail.insert(0, format!("worst {worst:.2} of allowance"));
        verdict(ok, detail.join("; "))
    });

    criterion(9, "occupation below 1 until local time 1, λ = 1, ε = 0.05", 900.0, &mut failures, || {
        let mut ok = true;
        let mut detail = Vec::new();
        for (delta, seed) in [(1, 501), (3, 502)] {
            let e = &bessel::estimate_occupation_transform(delta, &[1.0], 0.05, PATHS, STEPS, seed).expect("valid")[0];
            ok &= e.within(0.0, 0.05);
            let rel = e.mc_mean / e.analytic - 1.0;
            let direction = if rel < 0.0 { "below" } else { "above" };
            detail.push(format!(
                "δ={delta}: {:.4} vs {:.4}, {:+.2}% ({direction} the closed form)",
                e.mc_mean,
                e.analytic,
                100.0 * rel
            ));
        }
        verdict(ok, detail.join("; "))
    });

    criterion(10, "bitwise-identical CLI reruns", 300.0, &mut failures, || {
        let dir = tempfile::tempdir().expect("temp dir");
        let batch = dir.path().join("batch.csv");
        let batch_str = batch.to_str().expect("utf-8 temp path").to_owned();
        let runs: Vec<(&str, Vec<&str>)> = vec![
            ("laplace", vec!["sample", "--law", "Laplace", "--method", "StoppedBrownian", "--n", "10", "--seed", "7"]),
            ("cosh", vec!["sample", "--law", "CoshLaw", "--n", "20000", "--seed", "8"]),
            ("cp", vec!["sample", "--law", "BdlpTanh", "--n", "20000", "--seed", "9", "--format", "json"]),
            ("bessel-law", vec!["sample", "--law", "BdlpCosh", "--n", "2000", "--steps", "500", "--seed", "10"]),
            ("identities", vec!["verify-identities"]),
            ("functionals", vec!["bessel-verify", "--targets", "Eq15,Eq17_d1", "--paths", "2000", "--steps", "500"]),
        ];
        let mut problems = Vec::new();
        for (name, args) in &runs {
            if let Err(e) = identical_reruns(dir.path(), name, args) {
                problems.push(e);
            }
        }
        if hypsd(&["sample", "--law", "CoshLaw", "--n", "20000", "--seed", "8", "--out", &batch_str]) != 0 {
            problems.push("batch for ecf failed".into());
        }
        if let Err(e) = identical_reruns(dir.path(), "ecf", &["ecf", &batch_str, "--format", "json"]) {
            problems.push(e);
        }
        let total = runs.len() + 1;
        verdict(
            problems.is_empty(),
            if problems.is_empty() {
                format!("{total} commands rerun byte-identical")
            } else {
                problems.join("; ")
            },
        )
    });

    println!("acceptance: {} of 10 criteria failed", failures);
    if failures > 0 {
        std::process::exit(1);
    }
}
