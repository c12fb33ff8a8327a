//! Shift-invariant wavelet multiresolution analysis and wavelet-shrinkage
//! denoising.
//!
//! The transform is undecimated, so every component keeps the input length
//! and the components add back up to the input. Boundaries are handled by
//! running the circular transform over a period of the extended signal:
//! the signal itself for [`Boundary::Periodic`], or the signal followed by
//! its mirror image for [`Boundary::Symmetric`].

mod fk;
mod swt;

pub use fk::{FK14_KERNEL_DEGREE, FK14_LOWPASS};

use crate::error::{Error, Result};
use crate::signal::{
    sum_components, Component, ComponentLabel, Decomposition, DecompositionKind, Signal,
};

/// Orthogonal two-channel filter bank.
#[derive(Debug, Clone, PartialEq)]
pub struct FilterBank {
    name: String,
    h0: Vec<f64>,
    h1: Vec<f64>,
}

impl FilterBank {
    /// Builds a bank from its low-pass filter; the high-pass is the
    /// quadrature mirror `h1[n] = (-1)^n h0[L-1-n]`.
    pub fn from_lowpass(name: impl Into<String>, h0: Vec<f64>) -> Result<Self> {
        if h0.len() < 2 || h0.len() % 2 != 0 {
            return Err(Error::InvalidParameter(format!(
                "orthogonal low-pass filter needs an even tap count ≥ 2, got {}",
                h0.len()
            )));
        }
        let sum: f64 = h0.iter().sum();
        if (sum - std::f64::consts::SQRT_2).abs() > 1e-10 {
            return Err(Error::InvalidParameter(format!(
                "low-pass taps must sum to sqrt(2), got {sum}"
            )));
        }
        let len = h0.len();
        let h1 = (0..len)
            .map(|n| if n % 2 == 0 { 1.0 } else { -1.0 } * h0[len - 1 - n])
            .collect();
        Ok(Self {
            name: name.into(),
            h0,
            h1,
        })
    }

    /// Fejér-Korovkin 14-tap bank.
    pub fn fk14() -> Self {
        Self::from_lowpass("fk14", FK14_LOWPASS.to_vec()).expect("embedded fk14 taps are valid")
    }

    /// Haar bank, mostly useful for tests.
    pub fn haar() -> Self {
        let c = std::f64::consts::FRAC_1_SQRT_2;
        Self::from_lowpass("haar", vec![c, c]).expect("haar taps are valid")
    }

    /// Looks up a shipped bank by name (`fk14`, `haar`).
    pub fn by_name(name: &str) -> Result<Self> {
        match name.to_ascii_lowercase().as_str() {
            "fk14" => Ok(Self::fk14()),
            "haar" | "db1" => Ok(Self::haar()),
            other => Err(Error::InvalidParameter(format!("unknown wavelet `{other}`"))),
        }
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn lowpass(&self) -> &[f64] {
        &self.h0
    }

    pub fn highpass(&self) -> &[f64] {
        &self.h1
    }
}

impl Default for FilterBank {
    fn default() -> Self {
        Self::fk14()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Boundary {
    #[default]
    Symmetric,
    Periodic,
}

impl Boundary {
    fn extend(self, x: &[f64]) -> Vec<f64> {
        match self {
            Boundary::Periodic => x.to_vec(),
            Boundary::Symmetric => x.iter().chain(x.iter().rev()).copied().collect(),
        }
    }

    fn period(self, len: usize) -> usize {
        match self {
            Boundary::Periodic => len,
            Boundary::Symmetric => 2 * len,
        }
    }
}

/// The extended period must hold at least one full coarsest-scale cycle.
fn check_levels(len: usize, levels: usize, boundary: Boundary) -> Result<()> {
    if levels == 0 {
        return Err(Error::InvalidParameter("levels must be ≥ 1".into()));
    }
    if levels >= usize::BITS as usize - 1 || boundary.period(len) < (1usize << levels) {
        let needed = match boundary {
            Boundary::Periodic => 1usize.checked_shl(levels as u32).unwrap_or(usize::MAX),
            Boundary::Symmetric => 1usize.checked_shl(levels as u32 - 1).unwrap_or(usize::MAX),
        };
        return Err(Error::InsufficientLengthForLevels {
            levels,
            needed,
            got: len,
        });
    }
    Ok(())
}

/// Decomposes `signal` into `levels + 1` additive components ordered
/// detail-1 (finest) … detail-L, approximation-L, with symmetric boundaries.
///
/// Detail `i` nominally covers `(fs / 2^(i+1), fs / 2^i]`.
pub fn mra_decompose(signal: &Signal, levels: usize, bank: &FilterBank) -> Result<Decomposition> {
    mra_decompose_with(signal, levels, bank, Boundary::Symmetric)
}

pub fn mra_decompose_with(
    signal: &Signal,
    levels: usize,
    bank: &FilterBank,
    boundary: Boundary,
) -> Result<Decomposition> {
    let n = signal.len();
    check_levels(n, levels, boundary)?;
    let extended = boundary.extend(signal.samples());
    let parts = swt::mra(&extended, levels, bank);
    let components = parts
        .into_iter()
        .enumerate()
        .map(|(i, mut samples)| {
            samples.truncate(n);
            let label = if i < levels {
                ComponentLabel::Detail(i + 1)
            } else {
                ComponentLabel::Approximation(levels)
            };
            Component {
                samples,
                label,
                center_freq: None,
            }
        })
        .collect();
    Decomposition::new(DecompositionKind::WaveletMra, signal.fs(), n, components)
}

/// Nominal fraction of the `[0, fs/2]` band covered by the first
/// `first_group` details: `1 - 2^-first_group`.
pub fn nominal_band_fraction(first_group: usize) -> f64 {
    1.0 - 0.5f64.powi(first_group as i32)
}

/// Splits a decomposition into the sum of its first `first_group_size`
/// components and the sum of the rest.
pub fn group_split(decomp: &Decomposition, first_group_size: usize) -> Result<(Signal, Signal)> {
    if first_group_size == 0 || first_group_size >= decomp.len() {
        return Err(Error::InvalidParameter(format!(
            "group size {first_group_size} must lie in [1, {})",
            decomp.len()
        )));
    }
    let (head, tail) = decomp.components().split_at(first_group_size);
    let n = decomp.source_len();
    Ok((
        Signal::new(sum_components(n, head), decomp.fs())?,
        Signal::new(sum_components(n, tail), decomp.fs())?,
    ))
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum ThresholdRule {
    /// `sigma * sqrt(2 ln N)` with `sigma = median(|d1|) / 0.6745`.
    Universal,
    /// A fixed threshold in signal units; `Fixed(0.0)` disables shrinkage.
    Fixed(f64),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Shrinkage {
    Soft,
    Hard,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DenoiseSpec {
    pub level: usize,
    pub threshold_rule: ThresholdRule,
    pub shrinkage: Shrinkage,
}

impl DenoiseSpec {
    pub fn universal_soft(level: usize) -> Self {
        Self {
            level,
            threshold_rule: ThresholdRule::Universal,
            shrinkage: Shrinkage::Soft,
        }
    }
}

pub(crate) fn median_abs(values: &[f64]) -> f64 {
    let mut v: Vec<f64> = values.iter().map(|x| x.abs()).collect();
    if v.is_empty() {
        return 0.0;
    }
    let mid = v.len() / 2;
    let (_, m, _) = v.select_nth_unstable_by(mid, f64::total_cmp);
    let upper = *m;
    if v.len() % 2 == 1 {
        upper
    } else {
        let lower = v[..mid].iter().copied().fold(f64::NEG_INFINITY, f64::max);
        0.5 * (lower + upper)
    }
}

fn shrink(x: f64, t: f64, rule: Shrinkage) -> f64 {
    match rule {
        Shrinkage::Soft => x.signum() * (x.abs() - t).max(0.0),
        Shrinkage::Hard => {
            if x.abs() > t {
                x
            } else {
                0.0
            }
        }
    }
}

/// Undecimated wavelet shrinkage: thresholds every detail level up to
/// `spec.level` and keeps the approximation.
pub fn wavelet_denoise(signal: &Signal, spec: &DenoiseSpec, bank: &FilterBank) -> Result<Signal> {
    let n = signal.len();
    check_levels(n, spec.level, Boundary::Symmetric)?;
    let extended = Boundary::Symmetric.extend(signal.samples());
    let mut coeffs = swt::analyze(&extended, spec.level, bank);
    let threshold = match spec.threshold_rule {
        ThresholdRule::Universal => {
            let sigma = median_abs(&coeffs.details[0][..n]) / 0.6745;
            sigma * (2.0 * (n as f64).ln()).sqrt()
        }
        ThresholdRule::Fixed(t) if t >= 0.0 => t,
        ThresholdRule::Fixed(t) => {
            return Err(Error::InvalidParameter(format!(
                "threshold must be non-negative, got {t}"
            )))
        }
    };
    if threshold > 0.0 {
        for d in &mut coeffs.details {
            d.iter_mut()
                .for_each(|v| *v = shrink(*v, threshold, spec.shrinkage));
        }
    }
    let mut out = swt::synthesize(&coeffs, bank);
    out.truncate(n);
    signal.with_samples(out)
}
