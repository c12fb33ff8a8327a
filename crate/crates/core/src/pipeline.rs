//! The six-stage denoiser.
//!
//! 1. Decompose (wavelet MRA for WLNH, VMD sorted by descending center
//!    frequency for VLWNH).
//! 2. Drop every component of the first group that passes the Lilliefors
//!    normality test.
//! 3. Wavelet-denoise the sum of the surviving first-group components.
//! 4. Wavelet-denoise the sum of the remaining components at a lower level.
//! 5. Add both and high-pass against motion artifacts.
//! 6. Nonlocal means.

use std::fmt;
use std::fs;
use std::path::Path;
use std::str::FromStr;

use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::iir::{apply_spec, FilterKind, IirSpec};
use crate::lilliefors::{lilliefors_test, LillieforsResult, SUPPORTED_ALPHAS};
use crate::metrics::{AggregateReport, MetricReport};
use crate::nlm::{auto_bandwidth, nlm_denoise, NlmMethod, NlmParams};
use crate::noise::{mix_at_snr, NoiseSource};
use crate::signal::{segment, sum_components, ComponentLabel, Decomposition, Signal};
use crate::vmd::{sort_modes_by_freq, vmd_decompose, FreqOrder, VmdConfig, VmdInit};
use crate::wavelet::{mra_decompose, wavelet_denoise, DenoiseSpec, FilterBank, Shrinkage, ThresholdRule};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default)]
pub enum Method {
    /// Wavelet MRA front end.
    #[default]
    Wlnh,
    /// VMD front end.
    Vlwnh,
}

impl fmt::Display for Method {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Method::Wlnh => "wlnh",
            Method::Vlwnh => "vlwnh",
        })
    }
}

impl FromStr for Method {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "wlnh" | "wavelet" => Ok(Method::Wlnh),
            "vlwnh" | "vmd" => Ok(Method::Vlwnh),
            other => Err(Error::Config(format!("unknown method {other:?} (expected wlnh or vlwnh)"))),
        }
    }
}

/// What stage 5 adds to the denoised remainder.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Stage5Input {
    /// The stage-3 output.
    #[default]
    Denoised,
    /// The surviving first-group components before stage-3 shrinkage.
    Raw,
}

/// NLM settings; the bandwidth may be estimated from the stage-5 output.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct NlmConfig {
    /// Fixed bandwidth in mV; `None` uses `bandwidth_factor * noise_sigma`.
    pub bandwidth: Option<f64>,
    pub bandwidth_factor: f64,
    pub patch_half: usize,
    pub search_half: usize,
    pub method: NlmMethod,
}

impl Default for NlmConfig {
    fn default() -> Self {
        Self {
            bandwidth: None,
            bandwidth_factor: 0.6,
            patch_half: 10,
            search_half: 500,
            method: NlmMethod::Direct,
        }
    }
}

impl NlmConfig {
    /// Concrete parameters for `x`, or `None` when the estimated noise level is zero.
    pub fn params_for(&self, x: &[f64]) -> Option<NlmParams> {
        let k = self
            .bandwidth
            .unwrap_or_else(|| auto_bandwidth(x, self.bandwidth_factor));
        (k > 0.0).then_some(NlmParams {
            bandwidth: k,
            patch_half: self.patch_half,
            search_half: self.search_half,
            method: self.method,
        })
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct PipelineConfig {
    pub method: Method,
    pub levels: usize,
    pub modes: usize,
    pub first_group: usize,
    /// 0 disables component removal.
    pub lilliefors_alpha: f64,
    pub high_group_denoise_level: usize,
    pub low_group_denoise_level: usize,
    /// `Fixed(0.0)` disables stages 3 and 4 shrinkage.
    pub threshold: ThresholdRule,
    pub shrinkage: Shrinkage,
    pub highpass: Option<IirSpec>,
    pub nlm: Option<NlmConfig>,
    /// `vmd.modes` is overridden by `modes`.
    pub vmd: VmdConfig,
    pub wavelet_bank: FilterBank,
    pub stage5_input: Stage5Input,
    pub keep_intermediates: bool,
}

impl Default for PipelineConfig {
    fn default() -> Self {
        Self {
            method: Method::Wlnh,
            levels: 10,
            modes: 10,
            first_group: 5,
            lilliefors_alpha: 0.05,
            high_group_denoise_level: 5,
            low_group_denoise_level: 2,
            threshold: ThresholdRule::Universal,
            shrinkage: Shrinkage::Soft,
            highpass: Some(IirSpec::motion_highpass()),
            nlm: Some(NlmConfig::default()),
            vmd: VmdConfig::default(),
            wavelet_bank: FilterBank::fk14(),
            stage5_input: Stage5Input::Denoised,
            keep_intermediates: false,
        }
    }
}

impl PipelineConfig {
    pub fn vlwnh() -> Self {
        Self {
            method: Method::Vlwnh,
            ..Self::default()
        }
    }

    /// Every stage disabled: the output is the MRA (or VMD) reconstruction.
    pub fn pass_through(method: Method) -> Self {
        Self {
            method,
            lilliefors_alpha: 0.0,
            threshold: ThresholdRule::Fixed(0.0),
            highpass: None,
            nlm: None,
            ..Self::default()
        }
    }

    pub fn component_count(&self) -> usize {
        match self.method {
            Method::Wlnh => self.levels + 1,
            Method::Vlwnh => self.modes,
        }
    }

    pub fn vmd_config(&self) -> VmdConfig {
        VmdConfig {
            modes: self.modes,
            ..self.vmd
        }
    }

    pub fn validate(&self) -> Result<()> {
        let bad = |m: String| Err(Error::Config(m));
        if self.levels == 0 || self.modes == 0 {
            return bad("levels and modes must be ≥ 1".into());
        }
        if self.first_group == 0 || self.first_group >= self.levels + 1 || self.first_group >= self.modes {
            return bad(format!(
                "first_group {} must satisfy 1 ≤ first_group < levels + 1 = {} and < modes = {}",
                self.first_group,
                self.levels + 1,
                self.modes
            ));
        }
        if self.lilliefors_alpha != 0.0 && !SUPPORTED_ALPHAS.iter().any(|a| (a - self.lilliefors_alpha).abs() < 1e-12) {
            return bad(format!(
                "alpha_lilliefors {} not in {{0}} ∪ {:?}",
                self.lilliefors_alpha, SUPPORTED_ALPHAS
            ));
        }
        if self.high_group_denoise_level == 0 || self.low_group_denoise_level == 0 {
            return bad("denoise levels must be ≥ 1".into());
        }
        if let ThresholdRule::Fixed(t) = self.threshold {
            if !(t >= 0.0 && t.is_finite()) {
                return bad(format!("threshold must be non-negative, got {t}"));
            }
        }
        if let Some(hp) = &self.highpass {
            if !(hp.cutoff > 0.0 && hp.cutoff.is_finite()) || hp.order == 0 {
                return bad(format!("invalid high-pass {} Hz order {}", hp.cutoff, hp.order));
            }
        }
        if let Some(nlm) = &self.nlm {
            let probe = NlmParams {
                bandwidth: nlm.bandwidth.unwrap_or(1.0),
                patch_half: nlm.patch_half,
                search_half: nlm.search_half,
                method: nlm.method,
            };
            probe.validate().map_err(|e| Error::Config(e.to_string()))?;
            if !(nlm.bandwidth_factor > 0.0 && nlm.bandwidth_factor.is_finite()) {
                return bad(format!("nlm_bandwidth_factor must be positive, got {}", nlm.bandwidth_factor));
            }
        }
        self.vmd_config().validate().map_err(|e| Error::Config(e.to_string()))
    }

    /// Applies one `key = value` setting (the keys written by [`PipelineConfig::to_kv`]).
    pub fn set(&mut self, key: &str, value: &str) -> Result<()> {
        let key = key.trim().replace('-', "_");
        let value = value.trim();
        let num = |v: &str| -> Result<f64> {
            v.parse::<f64>()
                .map_err(|_| Error::Config(format!("{key}: expected a number, got {v:?}")))
        };
        let count = |v: &str| -> Result<usize> {
            v.parse::<usize>()
                .map_err(|_| Error::Config(format!("{key}: expected a count, got {v:?}")))
        };
        let off = |v: &str| matches!(v.to_ascii_lowercase().as_str(), "off" | "none" | "false" | "0");
        match key.as_str() {
            "method" => self.method = value.parse()?,
            "levels" => self.levels = count(value)?,
            "modes" => self.modes = count(value)?,
            "first_group" => self.first_group = count(value)?,
            "alpha_lilliefors" | "lilliefors_alpha" => self.lilliefors_alpha = num(value)?,
            "high_group_level" => self.high_group_denoise_level = count(value)?,
            "low_group_level" => self.low_group_denoise_level = count(value)?,
            "threshold" => {
                self.threshold = match value {
                    "universal" => ThresholdRule::Universal,
                    v => ThresholdRule::Fixed(num(v)?),
                }
            }
            "shrinkage" => {
                self.shrinkage = match value {
                    "soft" => Shrinkage::Soft,
                    "hard" => Shrinkage::Hard,
                    v => return Err(Error::Config(format!("shrinkage: expected soft or hard, got {v:?}"))),
                }
            }
            "highpass_hz" => {
                self.highpass = if off(value) {
                    None
                } else {
                    let base = self.highpass.unwrap_or_else(IirSpec::motion_highpass);
                    Some(IirSpec {
                        cutoff: num(value)?,
                        ..base
                    })
                }
            }
            "highpass_order" => {
                let order = count(value)?;
                if let Some(hp) = &mut self.highpass {
                    hp.order = order;
                }
            }
            "nlm" => {
                self.nlm = if off(value) {
                    None
                } else {
                    Some(self.nlm.unwrap_or_default())
                }
            }
            "nlm_bandwidth" | "nlm_bandwidth_factor" | "nlm_patch" | "nlm_search" | "nlm_method" => {
                let nlm = self.nlm.get_or_insert_with(NlmConfig::default);
                match key.as_str() {
                    "nlm_bandwidth" => {
                        nlm.bandwidth = if value == "auto" { None } else { Some(num(value)?) }
                    }
                    "nlm_bandwidth_factor" => nlm.bandwidth_factor = num(value)?,
                    "nlm_patch" => nlm.patch_half = count(value)?,
                    "nlm_search" => nlm.search_half = count(value)?,
                    _ => {
                        nlm.method = match value {
                            "direct" => NlmMethod::Direct,
                            "integral" => NlmMethod::Integral,
                            v => return Err(Error::Config(format!("nlm_method: expected direct or integral, got {v:?}"))),
                        }
                    }
                }
            }
            "vmd_alpha" => self.vmd.alpha = num(value)?,
            "vmd_tau" => self.vmd.tau = num(value)?,
            "vmd_tol" => self.vmd.tol = num(value)?,
            "vmd_max_iter" => self.vmd.max_iter = count(value)?,
            "vmd_init" => {
                self.vmd.init = match value {
                    "uniform" => VmdInit::UniformFreq,
                    "zero" => VmdInit::Zero,
                    v => return Err(Error::Config(format!("vmd_init: expected uniform or zero, got {v:?}"))),
                }
            }
            "wavelet" => self.wavelet_bank = FilterBank::by_name(value).map_err(|e| Error::Config(e.to_string()))?,
            "stage5_input" => {
                self.stage5_input = match value {
                    "denoised" => Stage5Input::Denoised,
                    "raw" => Stage5Input::Raw,
                    v => return Err(Error::Config(format!("stage5_input: expected denoised or raw, got {v:?}"))),
                }
            }
            other => return Err(Error::Config(format!("unknown key {other:?}"))),
        }
        Ok(())
    }

    /// Parses `key = value` lines; `#` starts a comment.
    pub fn from_kv(text: &str) -> Result<Self> {
        let mut cfg = Self::default();
        cfg.apply_kv(text)?;
        Ok(cfg)
    }

    pub fn apply_kv(&mut self, text: &str) -> Result<()> {
        for (i, raw) in text.lines().enumerate() {
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let (k, v) = line
                .split_once('=')
                .ok_or_else(|| Error::Config(format!("line {}: expected key = value", i + 1)))?;
            self.set(k, v)
                .map_err(|e| Error::Config(format!("line {}: {e}", i + 1)))?;
        }
        Ok(())
    }

    pub fn load(path: &Path) -> Result<Self> {
        let text = fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
        Self::from_kv(&text)
    }

    pub fn to_kv(&self) -> String {
        let threshold = match self.threshold {
            ThresholdRule::Universal => "universal".to_string(),
            ThresholdRule::Fixed(t) => format!("{t:?}"),
        };
        let mut lines = vec![
            format!("method = {}", self.method),
            format!("levels = {}", self.levels),
            format!("modes = {}", self.modes),
            format!("first_group = {}", self.first_group),
            format!("alpha_lilliefors = {:?}", self.lilliefors_alpha),
            format!("high_group_level = {}", self.high_group_denoise_level),
            format!("low_group_level = {}", self.low_group_denoise_level),
            format!("threshold = {threshold}"),
            format!(
                "shrinkage = {}",
                match self.shrinkage {
                    Shrinkage::Soft => "soft",
                    Shrinkage::Hard => "hard",
                }
            ),
        ];
        match &self.highpass {
            Some(hp) => {
                lines.push(format!("highpass_hz = {:?}", hp.cutoff));
                lines.push(format!("highpass_order = {}", hp.order));
            }
            None => lines.push("highpass_hz = off".into()),
        }
        match &self.nlm {
            Some(n) => {
                lines.push("nlm = on".into());
                lines.push(match n.bandwidth {
                    Some(k) => format!("nlm_bandwidth = {k:?}"),
                    None => "nlm_bandwidth = auto".into(),
                });
                lines.push(format!("nlm_bandwidth_factor = {:?}", n.bandwidth_factor));
                lines.push(format!("nlm_patch = {}", n.patch_half));
                lines.push(format!("nlm_search = {}", n.search_half));
                lines.push(format!(
                    "nlm_method = {}",
                    match n.method {
                        NlmMethod::Direct => "direct",
                        NlmMethod::Integral => "integral",
                    }
                ));
            }
            None => lines.push("nlm = off".into()),
        }
        lines.push(format!("vmd_alpha = {:?}", self.vmd.alpha));
        lines.push(format!("vmd_tau = {:?}", self.vmd.tau));
        lines.push(format!("vmd_tol = {:?}", self.vmd.tol));
        lines.push(format!("vmd_max_iter = {}", self.vmd.max_iter));
        lines.push(format!(
            "vmd_init = {}",
            match self.vmd.init {
                VmdInit::UniformFreq => "uniform",
                VmdInit::Zero => "zero",
            }
        ));
        lines.push(format!("wavelet = {}", self.wavelet_bank.name()));
        lines.push(format!(
            "stage5_input = {}",
            match self.stage5_input {
                Stage5Input::Denoised => "denoised",
                Stage5Input::Raw => "raw",
            }
        ));
        let mut text = lines.join("\n");
        text.push('\n');
        text
    }
}

#[derive(Debug, Clone, PartialEq, Default)]
pub struct StageTrace {
    /// Labels of the first-group components judged Gaussian, in component order.
    pub removed: Vec<ComponentLabel>,
    /// Lilliefors verdict for each tested component.
    pub tests: Vec<(ComponentLabel, LillieforsResult)>,
    /// Center frequencies (Hz) of the VMD modes, in component order.
    pub center_freqs: Vec<f64>,
    /// Bandwidth used by stage 6, if it ran.
    pub nlm_bandwidth: Option<f64>,
    /// Named stage outputs, filled when `keep_intermediates` is set.
    pub intermediates: Vec<(String, Signal)>,
}

impl StageTrace {
    /// One column per intermediate signal, one row per sample.
    pub fn to_csv(&self) -> String {
        let mut out = String::from("sample");
        for (name, _) in &self.intermediates {
            out.push(',');
            out.push_str(name);
        }
        out.push('\n');
        let len = self.intermediates.first().map_or(0, |(_, s)| s.len());
        for i in 0..len {
            out.push_str(&i.to_string());
            for (_, s) in &self.intermediates {
                out.push(',');
                out.push_str(&format!("{:?}", s.samples()[i]));
            }
            out.push('\n');
        }
        out
    }
}

/// Stage 1 alone.
pub fn decompose(noisy: &Signal, cfg: &PipelineConfig) -> Result<Decomposition> {
    match cfg.method {
        Method::Wlnh => mra_decompose(noisy, cfg.levels, &cfg.wavelet_bank),
        Method::Vlwnh => {
            let result = vmd_decompose(noisy, &cfg.vmd_config())?;
            Ok(sort_modes_by_freq(result, FreqOrder::Descending).modes)
        }
    }
}

pub fn run(noisy: &Signal, cfg: &PipelineConfig) -> Result<(Signal, StageTrace)> {
    cfg.validate()?;
    let mut trace = StageTrace::default();
    let keep = |trace: &mut StageTrace, name: &str, s: &Signal| {
        if cfg.keep_intermediates {
            trace.intermediates.push((name.to_string(), s.clone()));
        }
    };
    keep(&mut trace, "input", noisy);

    let decomp = decompose(noisy, cfg).map_err(|e| e.in_stage(1))?;
    trace.center_freqs = decomp.components().iter().filter_map(|c| c.center_freq).collect();
    let (first, rest) = decomp.components().split_at(cfg.first_group);

    let mut kept = Vec::with_capacity(first.len());
    for c in first {
        if cfg.lilliefors_alpha > 0.0 {
            let verdict = lilliefors_test(&c.samples, cfg.lilliefors_alpha).map_err(|e| e.in_stage(2))?;
            trace.tests.push((c.label, verdict));
            if verdict.is_gaussian {
                trace.removed.push(c.label);
                continue;
            }
        }
        kept.push(c);
    }

    let len = noisy.len();
    let fs = noisy.fs();
    let first_sum = noisy.with_samples(sum_components(len, kept.iter().copied()))?;
    let spec = |level| DenoiseSpec {
        level,
        threshold_rule: cfg.threshold,
        shrinkage: cfg.shrinkage,
    };
    let high = wavelet_denoise(&first_sum, &spec(cfg.high_group_denoise_level), &cfg.wavelet_bank)
        .map_err(|e| e.in_stage(3))?;
    keep(&mut trace, "stage3", &high);

    let rest_sum = noisy.with_samples(sum_components(len, rest))?;
    let low = wavelet_denoise(&rest_sum, &spec(cfg.low_group_denoise_level), &cfg.wavelet_bank)
        .map_err(|e| e.in_stage(4))?;
    keep(&mut trace, "stage4", &low);

    let stage5_in = match cfg.stage5_input {
        Stage5Input::Denoised => high.add(&low),
        Stage5Input::Raw => first_sum.add(&low),
    }
    .map_err(|e| e.in_stage(5))?;
    keep(&mut trace, "stage5_sum", &stage5_in);
    let filtered = match &cfg.highpass {
        Some(spec) => apply_spec(&stage5_in, spec).map_err(|e| e.in_stage(5))?,
        None => stage5_in,
    };
    keep(&mut trace, "stage5_highpass", &filtered);

    let out = match cfg.nlm.as_ref().and_then(|n| n.params_for(filtered.samples())) {
        Some(params) => {
            trace.nlm_bandwidth = Some(params.bandwidth);
            nlm_denoise(&filtered, &params).map_err(|e| e.in_stage(6))?
        }
        None => filtered,
    };
    keep(&mut trace, "stage6_nlm", &out);
    debug_assert_eq!(out.len(), len);
    debug_assert_eq!(out.fs(), fs);
    Ok((out, trace))
}

/// The clean signal as the denoiser is asked to recover it: the stage-5
/// high-pass removes everything below its cutoff, clean content included.
pub fn reference_clean(clean: &Signal, cfg: &PipelineConfig) -> Result<Signal> {
    match &cfg.highpass {
        Some(spec) if spec.kind == FilterKind::HighPass => apply_spec(clean, spec),
        _ => Ok(clean.clone()),
    }
}

/// Scores `denoised` in the band the pipeline keeps: clean and noisy are both
/// passed through [`reference_clean`] first, so `snr_in` describes the input
/// as it looks after the stage-5 high-pass alone.
pub fn evaluate(clean: &Signal, noisy: &Signal, denoised: &Signal, cfg: &PipelineConfig) -> Result<MetricReport> {
    MetricReport::compute(
        &reference_clean(clean, cfg)?,
        &reference_clean(noisy, cfg)?,
        denoised,
    )
}

#[derive(Debug, Clone, PartialEq)]
pub struct RecordRun {
    pub aggregate: AggregateReport,
    /// One report per segment, in segment order.
    pub segments: Vec<MetricReport>,
    /// Segments whose components were removed, per segment.
    pub removed_counts: Vec<usize>,
}

/// Segments `record`, adds noise per segment at `snr_db`, denoises each
/// segment and scores it with [`evaluate`].
pub fn run_record(
    record: &Signal,
    noise: &NoiseSource,
    snr_db: f64,
    cfg: &PipelineConfig,
    segment_len: usize,
) -> Result<RecordRun> {
    cfg.validate()?;
    let segments = segment(record, segment_len)?;
    let results: Vec<(MetricReport, usize)> = segments
        .segments()
        .par_iter()
        .enumerate()
        .map(|(i, clean)| {
            let n = noise.realization(i, segment_len, clean.fs())?;
            let noisy = mix_at_snr(clean, &n, snr_db)?;
            let (denoised, trace) = run(&noisy, cfg)?;
            let report = evaluate(clean, &noisy, &denoised, cfg)?;
            Ok((report, trace.removed.len()))
        })
        .collect::<Result<_>>()?;
    let (reports, removed_counts): (Vec<_>, Vec<_>) = results.into_iter().unzip();
    Ok(RecordRun {
        aggregate: AggregateReport::from_reports(&reports)?,
        segments: reports,
        removed_counts,
    })
}
