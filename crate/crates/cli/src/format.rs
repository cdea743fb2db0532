//! File formats. CSV files open with `# key: value` provenance lines, then a
//! mandatory header row; floats are written in shortest round-trip form so
//! that parsing an emitted file gives back the same bits.

use std::path::Path;

use hyperbolic_sd::samplers::{EcfReport, SampleBatch, SamplerConfig};
use serde::de::DeserializeOwned;
use serde::{Deserialize, Serialize};

use crate::error::{CliError, CliResult};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, clap::ValueEnum)]
pub enum Format {
    #[default]
    Csv,
    Json,
}

/// Ordered `# key: value` lines.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct Provenance(Vec<(String, String)>);

impl Provenance {
    pub fn new(command: &str) -> Self {
        let mut p = Provenance(Vec::new());
        p.push("tool", "hypsd");
        p.push("tool_version", env!("CARGO_PKG_VERSION"));
        p.push("command", command);
        p
    }

    pub fn push(&mut self, key: &str, value: impl ToString) -> &mut Self {
        self.0.push((key.to_owned(), value.to_string()));
        self
    }

    pub fn get(&self, key: &str) -> Option<&str> {
        self.0.iter().find(|(k, _)| k == key).map(|(_, v)| v.as_str())
    }
}

pub fn write_csv<T: Serialize>(provenance: &Provenance, rows: &[T]) -> CliResult<Vec<u8>> {
    let mut out = Vec::new();
    for (k, v) in &provenance.0 {
        // keep each entry on one line whatever the value holds
        out.extend_from_slice(format!("# {k}: {}\n", v.replace('\n', " ")).as_bytes());
    }
    let mut w = csv::Writer::from_writer(out);
    for row in rows {
        w.serialize(row).map_err(|e| CliError::Usage(format!("cannot encode row: {e}")))?;
    }
    w.into_inner().map_err(|e| CliError::Usage(format!("cannot encode rows: {e}")))
}

pub fn read_csv<T: DeserializeOwned>(text: &str, path: &Path) -> CliResult<(Provenance, Vec<T>)> {
    let mut provenance = Provenance::default();
    let mut body = 0;
    for line in text.split_inclusive('\n') {
        let Some(entry) = line.strip_prefix('#') else { break };
        let (k, v) = entry
            .trim()
            .split_once(':')
            .ok_or_else(|| CliError::data(path, format!("provenance line without `key:` in {line:?}")))?;
        provenance.push(k.trim(), v.trim());
        body += line.len();
    }
    let mut reader = csv::ReaderBuilder::new().from_reader(&text.as_bytes()[body..]);
    let headers = reader.headers().map_err(|e| CliError::data(path, e.to_string()))?;
    if headers.is_empty() {
        return Err(CliError::data(path, "missing header row"));
    }
    let rows = reader
        .deserialize()
        .collect::<Result<Vec<T>, _>>()
        .map_err(|e| CliError::data(path, e.to_string()))?;
    Ok((provenance, rows))
}

fn field<'a>(p: &'a Provenance, key: &str, path: &Path) -> CliResult<&'a str> {
    p.get(key)
        .ok_or_else(|| CliError::data(path, format!("provenance lacks `{key}`")))
}

fn parse_f64(s: &str, key: &str, path: &Path) -> CliResult<f64> {
    s.parse()
        .map_err(|_| CliError::data(path, format!("`{key}` is not a number: {s:?}")))
}

#[derive(Debug, Serialize, Deserialize)]
struct DrawRow {
    draw: f64,
}

pub fn emit_batch(batch: &SampleBatch, format: Format) -> CliResult<Vec<u8>> {
    match format {
        Format::Json => to_json(batch),
        Format::Csv => {
            let mut p = Provenance::new("sample");
            p.push("seed", batch.config.seed)
                .push("law", batch.law)
                .push("truncation_sd", format!("{:?}", batch.truncation_sd))
                .push("config", serde_json::to_string(&batch.config).expect("plain struct"));
            let rows: Vec<DrawRow> = batch.draws.iter().map(|&draw| DrawRow { draw }).collect();
            write_csv(&p, &rows)
        }
    }
}

/// Reads a batch in either format; JSON is recognised by its leading brace.
pub fn parse_batch(text: &str, path: &Path) -> CliResult<SampleBatch> {
    if text.trim_start().starts_with('{') {
        return serde_json::from_str(text).map_err(|e| CliError::data(path, e.to_string()));
    }
    let (p, rows) = read_csv::<DrawRow>(text, path)?;
    let config: SamplerConfig = serde_json::from_str(field(&p, "config", path)?)
        .map_err(|e| CliError::data(path, format!("bad config: {e}")))?;
    let truncation_sd = parse_f64(field(&p, "truncation_sd", path)?, "truncation_sd", path)?;
    if rows.is_empty() {
        return Err(CliError::data(path, "batch holds no draws"));
    }
    Ok(SampleBatch {
        law: config.law,
        draws: rows.into_iter().map(|r| r.draw).collect(),
        config,
        truncation_sd,
    })
}

#[derive(Debug, Serialize, Deserialize)]
struct EcfRow {
    t: f64,
    ecf: f64,
    analytic: f64,
    abs_dev: f64,
}

/// An ECF report with what it was computed against.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EcfDocument {
    pub law: hyperbolic_sd::LawId,
    pub n: usize,
    pub passed: bool,
    pub report: EcfReport,
}

pub fn emit_ecf(doc: &EcfDocument, format: Format) -> CliResult<Vec<u8>> {
    match format {
        Format::Json => to_json(doc),
        Format::Csv => {
            let mut p = Provenance::new("ecf");
            p.push("law", doc.law)
                .push("n", doc.n)
                .push("band", format!("{:?}", doc.report.band))
                .push("max_abs_dev", format!("{:?}", doc.report.max_abs_dev))
                .push("passed", doc.passed);
            let r = &doc.report;
            let rows: Vec<EcfRow> = (0..r.t_grid.len())
                .map(|i| EcfRow {
                    t: r.t_grid[i],
                    ecf: r.ecf[i],
                    analytic: r.analytic[i],
                    abs_dev: (r.ecf[i] - r.analytic[i]).abs(),
                })
                .collect();
            write_csv(&p, &rows)
        }
    }
}

pub fn parse_ecf(text: &str, path: &Path) -> CliResult<EcfDocument> {
    if text.trim_start().starts_with('{') {
        return serde_json::from_str(text).map_err(|e| CliError::data(path, e.to_string()));
    }
    let (p, rows) = read_csv::<EcfRow>(text, path)?;
    let law = field(&p, "law", path)?
        .parse()
        .map_err(|e: hyperbolic_sd::Error| CliError::data(path, e.to_string()))?;
    let n = field(&p, "n", path)?
        .parse()
        .map_err(|_| CliError::data(path, "`n` is not a count"))?;
    let passed = field(&p, "passed", path)? == "true";
    let report = EcfReport {
        t_grid: rows.iter().map(|r| r.t).collect(),
        ecf: rows.iter().map(|r| r.ecf).collect(),
        analytic: rows.iter().map(|r| r.analytic).collect(),
        max_abs_dev: parse_f64(field(&p, "max_abs_dev", path)?, "max_abs_dev", path)?,
        band: parse_f64(field(&p, "band", path)?, "band", path)?,
    };
    Ok(EcfDocument { law, n, passed, report })
}

pub fn to_json<T: Serialize>(value: &T) -> CliResult<Vec<u8>> {
    let mut v = serde_json::to_vec_pretty(value).map_err(|e| CliError::Usage(e.to_string()))?;
    v.push(b'\n');
    Ok(v)
}

/// `{total, passed, failed}` for a verification run.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct Summary {
    pub total: usize,
    pub passed: usize,
    pub failed: usize,
}

impl Summary {
    pub fn of(flags: impl IntoIterator<Item = bool>) -> Self {
        let (mut total, mut passed) = (0, 0);
        for f in flags {
            total += 1;
            passed += usize::from(f);
        }
        Summary {
            total,
            passed,
            failed: total - passed,
        }
    }

    pub fn all_passed(&self) -> bool {
        self.failed == 0
    }
}
