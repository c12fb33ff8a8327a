//! Command-line front end: `decompose`, `denoise`, `bench`, `synth`, `fetch`.

use std::ffi::OsString;
use std::fmt::Write as _;
use std::fs;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand};
use rustfft::{num_complex::Complex64, FftPlanner};

use crate::bench::{run_bench, BenchSpec, CellOutcome};
use crate::error::{Error, Result};
use crate::noise::{awgn, mix_at_snr, synth_ecg, NoiseKind, NoiseSource};
use crate::pipeline::{decompose, run, Method, PipelineConfig};
use crate::signal::Signal;
use crate::wfdb::{data_dir, fetch_record, read_csv, read_record, write_csv, MITDB_URL, NSTDB_URL};

#[derive(Debug, Parser)]
#[command(name = "ecgscrub", version, about = "ECG denoising by decomposition, normality screening, shrinkage, high-pass and nonlocal means")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Write each wavelet or VMD component and its spectrum as CSV.
    Decompose(DecomposeArgs),
    /// Denoise a signal and write the result as CSV.
    Denoise(DenoiseArgs),
    /// Run the record × noise × SNR × method grid.
    Bench(BenchArgs),
    /// Write a synthetic ECG, optionally with noise.
    Synth(SynthArgs),
    /// Download MIT-BIH records and noise records.
    Fetch(FetchArgs),
}

#[derive(Debug, Args)]
pub struct InputArgs {
    /// WFDB header (.hea) or one-column CSV.
    #[arg(long, short)]
    pub input: PathBuf,
    /// Sampling rate of a CSV input, Hz.
    #[arg(long, default_value_t = 360.0)]
    pub fs: f64,
    /// Lead of a WFDB input; the first lead by default.
    #[arg(long)]
    pub lead: Option<String>,
}

/// Pipeline settings; flags override `--config`.
#[derive(Debug, Args, Default)]
pub struct PipelineArgs {
    /// Key-value config file.
    #[arg(long)]
    pub config: Option<PathBuf>,
    /// wlnh (wavelet) or vlwnh (vmd).
    #[arg(long)]
    pub method: Option<String>,
    #[arg(long)]
    pub levels: Option<usize>,
    #[arg(long)]
    pub modes: Option<usize>,
    /// Lilliefors significance level; 0 keeps every component.
    #[arg(long)]
    pub alpha_lilliefors: Option<f64>,
    /// Stage-5 high-pass cutoff in Hz, or "off".
    #[arg(long)]
    pub highpass_hz: Option<String>,
    /// NLM bandwidth in signal units, or "auto".
    #[arg(long)]
    pub nlm_bandwidth: Option<String>,
    /// NLM patch half-width, samples.
    #[arg(long)]
    pub nlm_patch: Option<usize>,
    /// NLM search half-width, samples.
    #[arg(long)]
    pub nlm_search: Option<usize>,
    /// Extra `key=value` settings, as in the config file.
    #[arg(long = "set", value_name = "KEY=VALUE")]
    pub set: Vec<String>,
}

impl PipelineArgs {
    pub fn resolve(&self) -> Result<PipelineConfig> {
        let mut cfg = match &self.config {
            Some(path) => PipelineConfig::load(path)?,
            None => PipelineConfig::default(),
        };
        let pairs: [(&str, Option<String>); 8] = [
            ("method", self.method.clone()),
            ("levels", self.levels.map(|v| v.to_string())),
            ("modes", self.modes.map(|v| v.to_string())),
            ("alpha_lilliefors", self.alpha_lilliefors.map(|v| v.to_string())),
            ("highpass_hz", self.highpass_hz.clone()),
            ("nlm_bandwidth", self.nlm_bandwidth.clone()),
            ("nlm_patch", self.nlm_patch.map(|v| v.to_string())),
            ("nlm_search", self.nlm_search.map(|v| v.to_string())),
        ];
        for (key, value) in pairs {
            if let Some(v) = value {
                cfg.set(key, &v)?;
            }
        }
        for kv in &self.set {
            let (k, v) = kv
                .split_once('=')
                .ok_or_else(|| Error::Config(format!("--set expects KEY=VALUE, got {kv:?}")))?;
            cfg.set(k, v)?;
        }
        cfg.validate()?;
        Ok(cfg)
    }
}

#[derive(Debug, Args)]
pub struct DecomposeArgs {
    #[command(flatten)]
    pub input: InputArgs,
    #[command(flatten)]
    pub pipeline: PipelineArgs,
    /// Output directory.
    #[arg(long)]
    pub out: PathBuf,
}

#[derive(Debug, Args)]
pub struct DenoiseArgs {
    #[command(flatten)]
    pub input: InputArgs,
    #[command(flatten)]
    pub pipeline: PipelineArgs,
    /// Output CSV.
    #[arg(long)]
    pub out: PathBuf,
    /// Also write every stage's output to this CSV.
    #[arg(long)]
    pub trace: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct BenchArgs {
    #[command(flatten)]
    pub pipeline: PipelineArgs,
    #[arg(long, value_delimiter = ',', default_values_t = ["100".to_string(), "103".to_string(), "105".to_string()])]
    pub records: Vec<String>,
    /// Noise kinds: awgn, bw, ma.
    #[arg(long, value_delimiter = ',', default_values_t = ["awgn".to_string()])]
    pub noise: Vec<String>,
    #[arg(long, value_delimiter = ',', default_values_t = [10.0])]
    pub snr_db: Vec<f64>,
    /// Methods to compare; a single `--method` takes precedence.
    #[arg(long, value_delimiter = ',', default_values_t = ["wlnh".to_string(), "vlwnh".to_string()])]
    pub methods: Vec<String>,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    /// Only the first N segments of each record.
    #[arg(long)]
    pub segments: Option<usize>,
    #[arg(long, default_value_t = 3600)]
    pub segment_len: usize,
    #[arg(long)]
    pub lead: Option<String>,
    #[arg(long, default_value_t = 0)]
    pub noise_offset: usize,
    /// Dataset root; defaults to $ECGSCRUB_DATA_DIR.
    #[arg(long)]
    pub data_dir: Option<PathBuf>,
    /// Output directory.
    #[arg(long)]
    pub out: PathBuf,
}

#[derive(Debug, Args)]
pub struct SynthArgs {
    /// Seconds.
    #[arg(long, default_value_t = 10.0)]
    pub duration: f64,
    #[arg(long, default_value_t = 360.0)]
    pub fs: f64,
    /// Beats per minute.
    #[arg(long, default_value_t = 72.0)]
    pub heart_rate: f64,
    /// Add white Gaussian noise at `--snr-db`.
    #[arg(long)]
    pub noise: Option<String>,
    #[arg(long, default_value_t = 10.0)]
    pub snr_db: f64,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    /// Output CSV.
    #[arg(long)]
    pub out: PathBuf,
    /// Also write the noise-free signal here.
    #[arg(long)]
    pub clean_out: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct FetchArgs {
    #[arg(long, value_delimiter = ',', default_values_t = ["100".to_string(), "103".to_string(), "105".to_string()])]
    pub records: Vec<String>,
    /// Noise stress test records to fetch as well.
    #[arg(long, value_delimiter = ',', default_values_t = ["bw".to_string(), "ma".to_string()])]
    pub noise_records: Vec<String>,
    #[arg(long, default_value = MITDB_URL)]
    pub base_url: String,
    #[arg(long, default_value = NSTDB_URL)]
    pub noise_base_url: String,
    /// Dataset root; defaults to $ECGSCRUB_DATA_DIR.
    #[arg(long)]
    pub out: Option<PathBuf>,
}

/// Reads a WFDB record (by `.hea` path or extensionless name) or a CSV file.
pub fn load_input(args: &InputArgs) -> Result<Signal> {
    let p = &args.input;
    let is_wfdb = p.extension().is_some_and(|e| e == "hea")
        || (p.extension().is_none() && p.with_extension("hea").is_file());
    if is_wfdb {
        let rec = read_record(p)?;
        for w in &rec.warnings {
            eprintln!("warning: {w}");
        }
        rec.lead(args.lead.as_deref()).cloned()
    } else {
        read_csv(p, args.fs)
    }
}

fn comments(command: &str, cfg: &PipelineConfig, extra: &[String]) -> Vec<String> {
    let mut c = vec![format!("ecgscrub {} {command}", env!("CARGO_PKG_VERSION"))];
    c.extend(extra.iter().cloned());
    c.push(cfg.to_kv());
    c
}

fn create_dir(dir: &Path) -> Result<()> {
    fs::create_dir_all(dir).map_err(|e| Error::io(dir, e))
}

pub fn cmd_decompose(args: &DecomposeArgs) -> Result<()> {
    let cfg = args.pipeline.resolve()?;
    let signal = load_input(&args.input)?;
    let decomp = decompose(&signal, &cfg)?;
    create_dir(&args.out)?;
    let header = comments("decompose", &cfg, &[format!("input={}", args.input.input.display())]);
    let mut manifest = String::from("index,label,center_freq_hz,component_file,spectrum_file\n");
    let mut planner = FftPlanner::new();
    let n = signal.len();
    let fft = planner.plan_fft_forward(n);
    for (i, c) in decomp.components().iter().enumerate() {
        let stem = format!("{:02}_{}", i + 1, c.label);
        let comp_file = format!("component_{stem}.csv");
        let spec_file = format!("spectrum_{stem}.csv");
        write_csv(&args.out.join(&comp_file), &decomp.component_signal(i)?, &header)?;

        let mut buf: Vec<Complex64> = c.samples.iter().map(|&v| Complex64::new(v, 0.0)).collect();
        fft.process(&mut buf);
        let mut spectrum = String::from("frequency_hz,magnitude\n");
        for (k, v) in buf.iter().take(n / 2 + 1).enumerate() {
            writeln!(spectrum, "{:?},{:?}", k as f64 * signal.fs() / n as f64, v.norm() / n as f64).unwrap();
        }
        let path = args.out.join(&spec_file);
        fs::write(&path, spectrum).map_err(|e| Error::io(&path, e))?;
        writeln!(
            manifest,
            "{},{},{},{comp_file},{spec_file}",
            i + 1,
            c.label,
            c.center_freq.map(|f| format!("{f:?}")).unwrap_or_default()
        )
        .unwrap();
    }
    let path = args.out.join("manifest.csv");
    fs::write(&path, manifest).map_err(|e| Error::io(&path, e))
}

pub fn cmd_denoise(args: &DenoiseArgs) -> Result<()> {
    let mut cfg = args.pipeline.resolve()?;
    cfg.keep_intermediates = args.trace.is_some();
    let signal = load_input(&args.input)?;
    let (out, trace) = run(&signal, &cfg)?;
    let removed: Vec<String> = trace.removed.iter().map(|l| l.to_string()).collect();
    let mut extra = vec![
        format!("input={}", args.input.input.display()),
        format!("removed={}", removed.join(" ")),
    ];
    if let Some(k) = trace.nlm_bandwidth {
        extra.push(format!("nlm_bandwidth_used={k:?}"));
    }
    write_csv(&args.out, &out, &comments("denoise", &cfg, &extra))?;
    if let Some(path) = &args.trace {
        fs::write(path, trace.to_csv()).map_err(|e| Error::io(path, e))?;
    }
    Ok(())
}

fn resolve_data_dir(flag: &Option<PathBuf>) -> Result<PathBuf> {
    flag.clone()
        .or_else(data_dir)
        .ok_or_else(|| Error::Config("no dataset root: pass --data-dir/--out or set ECGSCRUB_DATA_DIR".into()))
}

/// Drops blank entries, so `--records ""` means none.
fn non_empty(list: &[String]) -> Vec<String> {
    list.iter().map(|s| s.trim()).filter(|s| !s.is_empty()).map(String::from).collect()
}

pub fn cmd_bench(args: &BenchArgs) -> Result<()> {
    let config = args.pipeline.resolve()?;
    let spec = BenchSpec {
        records: non_empty(&args.records),
        noises: non_empty(&args.noise)
            .iter()
            .map(|n| n.parse::<NoiseKind>())
            .collect::<Result<_>>()?,
        snrs: args.snr_db.clone(),
        methods: match &args.pipeline.method {
            Some(m) => std::slice::from_ref(m),
            None => &args.methods[..],
        }
            .iter()
            .map(|m| m.parse::<Method>())
            .collect::<Result<_>>()?,
        seed: args.seed,
        output_dir: args.out.clone(),
        data_dir: resolve_data_dir(&args.data_dir)?,
        segment_len: args.segment_len,
        max_segments: args.segments,
        lead: args.lead.clone(),
        noise_offset: args.noise_offset,
        config,
    };
    let summary = run_bench(&spec)?;
    for cell in &summary.cells {
        let head = format!("{} {} {} dB", cell.record, cell.noise, cell.snr_db);
        match &cell.outcome {
            CellOutcome::Ran { path, results } => {
                let parts: Vec<String> = results
                    .iter()
                    .map(|r| {
                        format!(
                            "{} PRD {:.2}% SNRimp {:.2} dB",
                            r.method, r.aggregate.mean.prd, r.aggregate.mean.snr_imp
                        )
                    })
                    .collect();
                println!("{head}: {} -> {}", parts.join(", "), path.display());
            }
            CellOutcome::Skipped { reason } => println!("{head}: SKIPPED ({reason})"),
        }
    }
    Ok(())
}

pub fn cmd_synth(args: &SynthArgs) -> Result<()> {
    let clean = synth_ecg(args.duration, args.fs, args.heart_rate)?;
    let mut notes = vec![format!(
        "synthetic ecg duration={} fs={} heart_rate={}",
        args.duration, args.fs, args.heart_rate
    )];
    let out = match args.noise.as_deref() {
        None => clean.clone(),
        Some(kind) => match kind.parse::<NoiseKind>()? {
            NoiseKind::Awgn => {
                notes.push(format!(
                    "{} snr_db={}",
                    NoiseSource::Awgn { seed: args.seed }.describe(),
                    args.snr_db
                ));
                mix_at_snr(&clean, &awgn(clean.len(), args.fs, args.seed)?, args.snr_db)?
            }
            other => {
                return Err(Error::Config(format!(
                    "synth only adds awgn; use bench for {other} noise records"
                )))
            }
        },
    };
    write_csv(&args.out, &out, &notes)?;
    if let Some(path) = &args.clean_out {
        write_csv(path, &clean, &notes[..1])?;
    }
    Ok(())
}

pub fn cmd_fetch(args: &FetchArgs) -> Result<()> {
    let root = resolve_data_dir(&args.out)?;
    for r in &non_empty(&args.records) {
        let path = fetch_record(&args.base_url, r, &root.join("mitdb"))?;
        println!("{}", path.display());
    }
    for r in &non_empty(&args.noise_records) {
        let path = fetch_record(&args.noise_base_url, r, &root.join("nstdb"))?;
        println!("{}", path.display());
    }
    Ok(())
}

pub fn execute(cli: &Cli) -> Result<()> {
    match &cli.command {
        Command::Decompose(a) => cmd_decompose(a),
        Command::Denoise(a) => cmd_denoise(a),
        Command::Bench(a) => cmd_bench(a),
        Command::Synth(a) => cmd_synth(a),
        Command::Fetch(a) => cmd_fetch(a),
    }
}

/// Failure class shown in front of a diagnostic.
pub fn error_class(err: &Error) -> &'static str {
    match err {
        Error::Stage { source, .. } => error_class(source),
        Error::Io { .. } | Error::Fetch { .. } | Error::Truncated { .. } => "I/O error",
        Error::Config(_) | Error::InvalidParameter(_) | Error::CutoffAboveNyquist { .. } => "config error",
        Error::Header { .. } | Error::Parse { .. } | Error::UnsupportedFormat(_) => "input error",
        _ => "numeric error",
    }
}

/// Parses `args`, runs the command and returns the process exit code.
pub fn main_with<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return e.exit_code();
        }
    };
    match execute(&cli) {
        Ok(()) => 0,
        Err(e) => {
            let msg = e.to_string();
            let class = error_class(&e);
            // `Error::Config` already reads "config: ..."; avoid saying it twice.
            let msg = match msg.strip_prefix("config: ") {
                Some(rest) if class == "config error" => rest.to_string(),
                _ => msg,
            };
            eprintln!("ecgscrub: {class}: {msg}");
            1
        }
    }
}
