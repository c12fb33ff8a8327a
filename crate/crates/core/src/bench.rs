//! Benchmark grid over records, noise kinds, input SNRs and methods.
//!
//! Each cell writes `{record}_{noise}_{snr}dB.csv` with measured rows for
//! every method followed by the published rows for the same cell. One
//! `summary_{noise}.csv` per noise kind lays the cells side by side.

use std::fmt::Write as _;
use std::fs;
use std::path::{Path, PathBuf};

use crate::error::{Error, Result};
use crate::metrics::AggregateReport;
use crate::noise::{NoiseKind, NoiseSource};
use crate::pipeline::{run_record, Method, PipelineConfig};
use crate::reference::published_for;
use crate::signal::Signal;
use crate::wfdb::{locate_record, read_record};

#[derive(Debug, Clone, PartialEq)]
pub struct BenchSpec {
    pub records: Vec<String>,
    pub noises: Vec<NoiseKind>,
    pub snrs: Vec<f64>,
    pub methods: Vec<Method>,
    pub seed: u64,
    pub output_dir: PathBuf,
    pub data_dir: PathBuf,
    pub segment_len: usize,
    /// Use only the first `n` segments of each record.
    pub max_segments: Option<usize>,
    /// Lead description to use; the first lead when `None`.
    pub lead: Option<String>,
    /// Start of the noise stretch in the noise record, in samples.
    pub noise_offset: usize,
    /// Shared settings; `method` is overridden per row.
    pub config: PipelineConfig,
}

impl BenchSpec {
    pub fn new(output_dir: PathBuf, data_dir: PathBuf) -> Self {
        Self {
            records: vec!["100".into(), "103".into(), "105".into()],
            noises: vec![NoiseKind::Awgn],
            snrs: vec![10.0],
            methods: vec![Method::Wlnh, Method::Vlwnh],
            seed: 0,
            output_dir,
            data_dir,
            segment_len: 3600,
            max_segments: None,
            lead: None,
            noise_offset: 0,
            config: PipelineConfig::default(),
        }
    }

    pub fn validate(&self) -> Result<()> {
        if self.records.is_empty() || self.noises.is_empty() || self.snrs.is_empty() || self.methods.is_empty() {
            return Err(Error::Config(
                "bench needs at least one record, noise kind, SNR and method".into(),
            ));
        }
        if self.segment_len == 0 {
            return Err(Error::Config("segment length must be positive".into()));
        }
        self.config.validate()
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct MethodResult {
    pub method: Method,
    pub aggregate: AggregateReport,
}

#[derive(Debug, Clone, PartialEq)]
pub enum CellOutcome {
    Ran {
        path: PathBuf,
        results: Vec<MethodResult>,
    },
    Skipped {
        reason: String,
    },
}

#[derive(Debug, Clone, PartialEq)]
pub struct Cell {
    pub record: String,
    pub noise: NoiseKind,
    pub snr_db: f64,
    pub outcome: CellOutcome,
}

impl Cell {
    pub fn result(&self, method: Method) -> Option<&AggregateReport> {
        match &self.outcome {
            CellOutcome::Ran { results, .. } => results
                .iter()
                .find(|r| r.method == method)
                .map(|r| &r.aggregate),
            CellOutcome::Skipped { .. } => None,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct BenchSummary {
    pub cells: Vec<Cell>,
    pub summaries: Vec<PathBuf>,
}

impl BenchSummary {
    pub fn ran(&self) -> usize {
        self.cells
            .iter()
            .filter(|c| matches!(c.outcome, CellOutcome::Ran { .. }))
            .count()
    }

    pub fn cell(&self, record: &str, noise: NoiseKind, snr_db: f64) -> Option<&Cell> {
        self.cells
            .iter()
            .find(|c| c.record == record && c.noise == noise && c.snr_db == snr_db)
    }
}

fn load_lead(root: &Path, name: &str, lead: Option<&str>) -> std::result::Result<Signal, String> {
    let path = locate_record(root, name).ok_or_else(|| {
        format!(
            "record {name} not found under {}; run `ecgscrub fetch --out {}`",
            root.display(),
            root.display()
        )
    })?;
    let rec = read_record(&path).map_err(|e| e.to_string())?;
    rec.lead(lead).cloned().map_err(|e| e.to_string())
}

fn snr_label(snr: f64) -> String {
    format!("{snr}").replace('-', "m")
}

/// Runs every cell of the grid. Missing records skip their cells; it is an
/// error only if no cell ran.
pub fn run_bench(spec: &BenchSpec) -> Result<BenchSummary> {
    spec.validate()?;
    fs::create_dir_all(&spec.output_dir).map_err(|e| Error::io(&spec.output_dir, e))?;
    let mut cells = Vec::new();
    for record in &spec.records {
        let clean = load_lead(&spec.data_dir, record, spec.lead.as_deref());
        for &noise in &spec.noises {
            let source = match (&clean, noise.record_name()) {
                (Err(_), _) => None,
                (Ok(_), None) => Some(Ok(NoiseSource::Awgn { seed: spec.seed })),
                (Ok(_), Some(name)) => Some(load_lead(&spec.data_dir, name, None).map(|record| {
                    NoiseSource::Record {
                        kind: noise,
                        channel: 0,
                        offset: spec.noise_offset,
                        record,
                    }
                })),
            };
            for &snr_db in &spec.snrs {
                let outcome = match (&clean, &source) {
                    (Err(reason), _) | (_, Some(Err(reason))) => CellOutcome::Skipped {
                        reason: reason.clone(),
                    },
                    (Ok(clean), Some(Ok(source))) => run_cell(spec, record, clean, source, snr_db)?,
                    (Ok(_), None) => unreachable!(),
                };
                cells.push(Cell {
                    record: record.clone(),
                    noise,
                    snr_db,
                    outcome,
                });
            }
        }
    }
    let mut summary = BenchSummary {
        cells,
        summaries: Vec::new(),
    };
    if summary.ran() == 0 {
        let reasons: Vec<String> = summary
            .cells
            .iter()
            .filter_map(|c| match &c.outcome {
                CellOutcome::Skipped { reason } => Some(reason.clone()),
                CellOutcome::Ran { .. } => None,
            })
            .collect();
        return Err(Error::Config(format!(
            "no bench cell ran: {}",
            reasons.first().cloned().unwrap_or_default()
        )));
    }
    for &noise in &spec.noises {
        let path = spec.output_dir.join(format!("summary_{noise}.csv"));
        let text = summary_table(spec, &summary, noise);
        fs::write(&path, text).map_err(|e| Error::io(&path, e))?;
        summary.summaries.push(path);
    }
    Ok(summary)
}

fn run_cell(
    spec: &BenchSpec,
    record: &str,
    clean: &Signal,
    source: &NoiseSource,
    snr_db: f64,
) -> Result<CellOutcome> {
    let clean = match spec.max_segments {
        Some(n) if n * spec.segment_len < clean.len() => {
            clean.with_samples(clean.samples()[..n * spec.segment_len].to_vec())?
        }
        _ => clean.clone(),
    };
    let mut results = Vec::new();
    for &method in &spec.methods {
        let cfg = PipelineConfig {
            method,
            ..spec.config.clone()
        };
        let run = run_record(&clean, source, snr_db, &cfg, spec.segment_len)?;
        results.push(MethodResult {
            method,
            aggregate: run.aggregate,
        });
    }
    let path = spec
        .output_dir
        .join(format!("{record}_{}_{}dB.csv", source.kind(), snr_label(snr_db)));
    let text = cell_csv(spec, record, source, snr_db, &results, clean.len() / spec.segment_len);
    fs::write(&path, text).map_err(|e| Error::io(&path, e))?;
    Ok(CellOutcome::Ran { path, results })
}

fn opt(v: Option<f64>) -> String {
    v.map(|v| format!("{v:e}")).unwrap_or_default()
}

fn config_comment(spec: &BenchSpec) -> String {
    let mut out = String::new();
    for line in spec.config.to_kv().lines().filter(|l| !l.starts_with("method")) {
        writeln!(out, "# {line}").unwrap();
    }
    out
}

fn cell_csv(
    spec: &BenchSpec,
    record: &str,
    source: &NoiseSource,
    snr_db: f64,
    results: &[MethodResult],
    segments: usize,
) -> String {
    let mut out = String::new();
    writeln!(
        out,
        "# record={record} lead={} snr_db={snr_db} segments={segments} segment_len={}",
        spec.lead.as_deref().unwrap_or("first"),
        spec.segment_len
    )
    .unwrap();
    writeln!(out, "# noise: {}", source.describe()).unwrap();
    out.push_str(&config_comment(spec));
    out.push_str("source,method,mse,rmse,prd,snr_imp,prd_sd,snr_imp_sd\n");
    for r in results {
        let (m, s) = (&r.aggregate.mean, &r.aggregate.sd);
        writeln!(
            out,
            "measured,{},{:e},{:e},{:e},{:e},{:e},{:e}",
            r.method, m.mse, m.rmse, m.prd, m.snr_imp, s.prd, s.snr_imp
        )
        .unwrap();
    }
    for p in published_for(record, source.kind(), snr_db) {
        writeln!(
            out,
            "published,{},{},{},{:e},{:e},,",
            p.method,
            opt(p.mse),
            opt(p.rmse),
            p.prd,
            p.snr_imp
        )
        .unwrap();
    }
    out
}

/// Rows are (record, snr, measure); columns are the measured methods, then
/// the published methods of that grid.
fn summary_table(spec: &BenchSpec, summary: &BenchSummary, noise: NoiseKind) -> String {
    let cells: Vec<&Cell> = summary.cells.iter().filter(|c| c.noise == noise).collect();
    let mut published_methods: Vec<&str> = Vec::new();
    for c in &cells {
        for p in published_for(&c.record, noise, c.snr_db) {
            if !published_methods.contains(&p.method) {
                published_methods.push(p.method);
            }
        }
    }
    let mut out = format!("# seed={} noise={noise}\n", spec.seed);
    out.push_str(&config_comment(spec));
    out.push_str("record,snr_db,measure");
    for m in &spec.methods {
        write!(out, ",{m}").unwrap();
    }
    for m in &published_methods {
        write!(out, ",published {m}").unwrap();
    }
    out.push('\n');
    type Pick = fn(&crate::metrics::MetricReport) -> f64;
    let measures: [(&str, Pick, fn(&crate::reference::Published) -> Option<f64>); 4] = [
        ("mse", |m| m.mse, |p| p.mse),
        ("rmse", |m| m.rmse, |p| p.rmse),
        ("prd", |m| m.prd, |p| Some(p.prd)),
        ("snr_imp", |m| m.snr_imp, |p| Some(p.snr_imp)),
    ];
    for c in &cells {
        for (name, measured, published) in &measures {
            write!(out, "{},{},{name}", c.record, c.snr_db).unwrap();
            for &m in &spec.methods {
                match c.result(m) {
                    Some(a) => write!(out, ",{:e}", measured(&a.mean)).unwrap(),
                    None => out.push_str(",SKIPPED"),
                }
            }
            let row = published_for(&c.record, noise, c.snr_db);
            for m in &published_methods {
                let v = row.iter().find(|p| p.method == *m).and_then(|p| published(p));
                write!(out, ",{}", opt(v)).unwrap();
            }
            out.push('\n');
        }
    }
    out
}
