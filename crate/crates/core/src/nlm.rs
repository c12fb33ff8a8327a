//! Nonlocal means for 1-D signals.
//!
//! Each output sample is a weighted average of the samples in its search
//! window, weighted by `exp(-d / (2 k^2))` where `d` is the mean squared
//! difference between the two surrounding patches. Patch offsets that fall
//! outside the signal are skipped and `d` is averaged over the offsets that
//! remain.

use crate::error::{Error, Result};
use crate::signal::Signal;
use crate::wavelet::median_abs;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum NlmMethod {
    /// Patch distances summed explicitly for every pair.
    #[default]
    Direct,
    /// Patch distances from running sums of squared differences per offset.
    /// Agrees with `Direct` to rounding, about `search / patch` times faster.
    Integral,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct NlmParams {
    /// Similarity bandwidth `k`, in signal units.
    pub bandwidth: f64,
    /// Patch size is `2 * patch_half + 1`.
    pub patch_half: usize,
    pub search_half: usize,
    pub method: NlmMethod,
}

impl NlmParams {
    pub fn new(bandwidth: f64, patch_half: usize, search_half: usize) -> Self {
        Self {
            bandwidth,
            patch_half,
            search_half,
            method: NlmMethod::Direct,
        }
    }

    pub fn patch_len(&self) -> usize {
        2 * self.patch_half + 1
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.bandwidth > 0.0 && self.bandwidth.is_finite()) {
            return Err(Error::InvalidParameter(format!(
                "NLM bandwidth must be positive, got {}",
                self.bandwidth
            )));
        }
        if self.patch_half < 1 {
            return Err(Error::InvalidParameter("NLM patch half-width must be ≥ 1".into()));
        }
        if self.search_half < self.patch_half {
            return Err(Error::InvalidParameter(format!(
                "NLM search half-width {} is smaller than patch half-width {}",
                self.search_half, self.patch_half
            )));
        }
        Ok(())
    }
}

/// Noise level from first differences: `median(|x[i+1] - x[i]|) / (0.6745 * sqrt 2)`.
pub fn noise_sigma(x: &[f64]) -> f64 {
    let diffs: Vec<f64> = x.windows(2).map(|w| w[1] - w[0]).collect();
    median_abs(&diffs) / (0.6745 * std::f64::consts::SQRT_2)
}

/// Bandwidth `factor * noise_sigma(x)`.
pub fn auto_bandwidth(x: &[f64], factor: f64) -> f64 {
    factor * noise_sigma(x)
}

/// Raw weight between positions `m` and `n` (before normalization).
pub fn weight(x: &[f64], m: usize, n: usize, params: &NlmParams) -> f64 {
    let (dist, count) = patch_distance(x, m, n, params.patch_half);
    (-(dist / count as f64) / (2.0 * params.bandwidth * params.bandwidth)).exp()
}

fn patch_distance(x: &[f64], m: usize, n: usize, patch_half: usize) -> (f64, usize) {
    let len = x.len() as isize;
    let p = patch_half as isize;
    let (m, n) = (m as isize, n as isize);
    let mut dist = 0.0;
    let mut count = 0;
    for delta in -p..=p {
        let (i, j) = (m + delta, n + delta);
        if (0..len).contains(&i) && (0..len).contains(&j) {
            let d = x[i as usize] - x[j as usize];
            dist += d * d;
            count += 1;
        }
    }
    (dist, count)
}

pub fn nlm_denoise(signal: &Signal, params: &NlmParams) -> Result<Signal> {
    params.validate()?;
    let x = signal.samples();
    if x.len() <= params.patch_len() {
        return Err(Error::InsufficientLength {
            needed: params.patch_len() + 1,
            got: x.len(),
        });
    }
    let (num, den) = match params.method {
        NlmMethod::Direct => accumulate_direct(x, params),
        NlmMethod::Integral => accumulate_integral(x, params),
    };
    let lo = x.iter().copied().fold(f64::INFINITY, f64::min);
    let hi = x.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    // Weighted mean of deviations from x[m]: a constant maps to itself exactly.
    let out = x
        .iter()
        .zip(num.iter().zip(&den))
        .map(|(&xm, (&s, &w))| (xm + s / w).clamp(lo, hi))
        .collect();
    signal.with_samples(out)
}

/// Returns per-sample `(sum w * (x[n] - x[m]), sum w)`; offsets are visited
/// in ascending order in both methods.
fn accumulate_direct(x: &[f64], params: &NlmParams) -> (Vec<f64>, Vec<f64>) {
    let len = x.len();
    let inv = 1.0 / (2.0 * params.bandwidth * params.bandwidth);
    let mut num = vec![0.0; len];
    let mut den = vec![0.0; len];
    for m in 0..len {
        let lo = m.saturating_sub(params.search_half);
        let hi = (m + params.search_half).min(len - 1);
        for n in lo..=hi {
            let (dist, count) = patch_distance(x, m, n, params.patch_half);
            let w = (-(dist / count as f64) * inv).exp();
            num[m] += w * (x[n] - x[m]);
            den[m] += w;
        }
    }
    (num, den)
}

fn accumulate_integral(x: &[f64], params: &NlmParams) -> (Vec<f64>, Vec<f64>) {
    let len = x.len() as isize;
    let p = params.patch_half as isize;
    let s = params.search_half.min(x.len() - 1) as isize;
    let inv = 1.0 / (2.0 * params.bandwidth * params.bandwidth);
    let mut num = vec![0.0; x.len()];
    let mut den = vec![0.0; x.len()];
    let mut prefix = vec![0.0; x.len() + 1];
    for d in -s..=s {
        // e[i] = (x[i] - x[i + d])^2 for i in [i_lo, i_hi)
        let i_lo = (-d).max(0);
        let i_hi = (len - d).min(len);
        prefix[0] = 0.0;
        for (k, i) in (i_lo..i_hi).enumerate() {
            let diff = x[i as usize] - x[(i + d) as usize];
            prefix[k + 1] = prefix[k] + diff * diff;
        }
        for m in i_lo..i_hi {
            let a = (m - p).max(i_lo);
            let b = (m + p + 1).min(i_hi);
            let dist = prefix[(b - i_lo) as usize] - prefix[(a - i_lo) as usize];
            let w = (-(dist.max(0.0) / (b - a) as f64) * inv).exp();
            let n = (m + d) as usize;
            let m = m as usize;
            num[m] += w * (x[n] - x[m]);
            den[m] += w;
        }
    }
    (num, den)
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn noisy(len: usize, seed: u64) -> Vec<f64> {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        (0..len)
            .map(|i| (i as f64 * 0.05).sin() + rng.random_range(-0.3..0.3))
            .collect()
    }

    #[test]
    fn constant_is_fixed_point() {
        let s = Signal::new(vec![0.42; 300], 360.0).unwrap();
        for method in [NlmMethod::Direct, NlmMethod::Integral] {
            let p = NlmParams { method, ..NlmParams::new(0.1, 5, 40) };
            assert_eq!(nlm_denoise(&s, &p).unwrap(), s);
        }
    }

    #[test]
    fn methods_agree() {
        let x = noisy(400, 1);
        let s = Signal::new(x.clone(), 360.0).unwrap();
        let direct = nlm_denoise(&s, &NlmParams::new(0.2, 4, 60)).unwrap();
        let fast = nlm_denoise(&s, &NlmParams { method: NlmMethod::Integral, ..NlmParams::new(0.2, 4, 60) }).unwrap();
        for (a, b) in direct.samples().iter().zip(fast.samples()) {
            assert!((a - b).abs() < 1e-10, "{a} vs {b}");
        }
    }

    #[test]
    fn self_weight_and_symmetry() {
        let x = noisy(200, 2);
        let p = NlmParams::new(0.3, 5, 50);
        assert_eq!(weight(&x, 17, 17, &p), 1.0);
        for (m, n) in [(10, 40), (50, 51), (100, 180)] {
            assert_eq!(weight(&x, m, n, &p), weight(&x, n, m, &p));
        }
    }

    #[test]
    fn amplitude_covariance() {
        let x = noisy(300, 3);
        let a = 3.7;
        let s = Signal::new(x.clone(), 360.0).unwrap();
        let sa = s.scaled(a).unwrap();
        let base = nlm_denoise(&s, &NlmParams::new(0.25, 6, 80)).unwrap();
        let scaled = nlm_denoise(&sa, &NlmParams::new(0.25 * a, 6, 80)).unwrap();
        for (u, v) in base.samples().iter().zip(scaled.samples()) {
            assert!((a * u - v).abs() < 1e-10);
        }
    }

    #[test]
    fn parameter_errors() {
        let s = Signal::new(noisy(50, 4), 360.0).unwrap();
        assert!(nlm_denoise(&s, &NlmParams::new(0.0, 2, 5)).is_err());
        assert!(nlm_denoise(&s, &NlmParams::new(-1.0, 2, 5)).is_err());
        assert!(nlm_denoise(&s, &NlmParams::new(1.0, 0, 5)).is_err());
        assert!(nlm_denoise(&s, &NlmParams::new(1.0, 6, 5)).is_err());
        let short = Signal::new(vec![1.0, 2.0, 3.0, 4.0, 5.0], 360.0).unwrap();
        assert!(nlm_denoise(&short, &NlmParams::new(1.0, 2, 4)).is_err());
    }

    #[test]
    fn huge_bandwidth_is_windowed_mean() {
        let x = noisy(250, 6);
        let s = Signal::new(x.clone(), 360.0).unwrap();
        let (search, range) = (30usize, 2.0);
        let out = nlm_denoise(&s, &NlmParams::new(1e6 * range, 3, search)).unwrap();
        for (m, got) in out.samples().iter().enumerate() {
            let w = &x[m.saturating_sub(search)..(m + search + 1).min(x.len())];
            let mean = w.iter().sum::<f64>() / w.len() as f64;
            assert!((got - mean).abs() <= 1e-6 * mean.abs().max(1e-3));
        }
    }

    proptest! {
        #[test]
        fn output_stays_in_range(
            x in proptest::collection::vec(-5.0f64..5.0, 30..120),
            k in 0.01f64..3.0,
            fast in any::<bool>(),
        ) {
            let s = Signal::new(x.clone(), 100.0).unwrap();
            let method = if fast { NlmMethod::Integral } else { NlmMethod::Direct };
            let out = nlm_denoise(&s, &NlmParams { method, ..NlmParams::new(k, 3, 20) }).unwrap();
            let lo = x.iter().copied().fold(f64::INFINITY, f64::min);
            let hi = x.iter().copied().fold(f64::NEG_INFINITY, f64::max);
            prop_assert_eq!(out.len(), x.len());
            prop_assert!(out.samples().iter().all(|&v| lo <= v && v <= hi));
        }
    }

    #[test]
    fn noise_sigma_of_white_noise() {
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        let x: Vec<f64> = (0..20000)
            .map(|_| rand_distr::Distribution::<f64>::sample(&rand_distr::StandardNormal, &mut rng) * 0.5)
            .collect();
        assert!((noise_sigma(&x) - 0.5).abs() < 0.02);
    }
}
