//! Variational mode decomposition.
//!
//! Alternating minimization in the frequency domain: each mode spectrum is
//! a Wiener-filtered residual centred on its current center frequency, the
//! center frequency moves to the spectral centroid of its mode, and the
//! Lagrange multiplier takes a dual-ascent step. Only the non-negative half
//! of the spectrum is iterated; modes are real, so the other half follows by
//! conjugate symmetry.

use num_complex::Complex64;
use rustfft::FftPlanner;

use crate::error::{Error, Result};
use crate::signal::{Component, ComponentLabel, Decomposition, DecompositionKind, Signal};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum VmdInit {
    /// `omega_k = k / (2K)` in cycles per sample, spread over `[0, fs/2)`.
    UniformFreq,
    Zero,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct VmdConfig {
    pub modes: usize,
    /// Bandwidth penalty.
    pub alpha: f64,
    /// Dual-ascent step; 0 turns off exact reconstruction (noise slack).
    pub tau: f64,
    /// Relative change of the mode spectra that stops the iteration.
    pub tol: f64,
    pub max_iter: usize,
    pub init: VmdInit,
}

impl Default for VmdConfig {
    fn default() -> Self {
        Self {
            modes: 10,
            alpha: 2000.0,
            tau: 0.0,
            tol: 1e-7,
            max_iter: 500,
            init: VmdInit::UniformFreq,
        }
    }
}

impl VmdConfig {
    pub fn with_modes(modes: usize) -> Self {
        Self {
            modes,
            ..Self::default()
        }
    }

    pub fn validate(&self) -> Result<()> {
        let bad = |m: String| Err(Error::InvalidParameter(m));
        if self.modes == 0 {
            return bad("VMD needs at least one mode".into());
        }
        if !(self.alpha > 0.0 && self.alpha.is_finite()) {
            return bad(format!("VMD alpha must be positive, got {}", self.alpha));
        }
        if !(self.tau >= 0.0 && self.tau.is_finite()) {
            return bad(format!("VMD tau must be non-negative, got {}", self.tau));
        }
        if !(self.tol > 0.0 && self.tol < 1.0) {
            return bad(format!("VMD tol must lie in (0, 1), got {}", self.tol));
        }
        if self.max_iter == 0 {
            return bad("VMD max_iter must be ≥ 1".into());
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct VmdResult {
    pub modes: Decomposition,
    /// Hz, in the same order as `modes`.
    pub center_freqs: Vec<f64>,
    pub iterations: usize,
    pub converged: bool,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum FreqOrder {
    Descending,
    Ascending,
}

pub fn vmd_decompose(signal: &Signal, cfg: &VmdConfig) -> Result<VmdResult> {
    cfg.validate()?;
    let x = signal.samples();
    let n = x.len();
    if cfg.modes > n / 2 {
        return Err(Error::OverParameterized {
            modes: cfg.modes,
            len: n,
        });
    }

    // Mirror half the signal onto each side: total length 2n.
    let half = n / 2;
    let mirrored: Vec<f64> = x[..half]
        .iter()
        .rev()
        .chain(x)
        .chain(x[half..].iter().rev())
        .copied()
        .collect();
    let t = mirrored.len();
    let bins = t / 2;

    let mut planner = FftPlanner::<f64>::new();
    let mut spectrum: Vec<Complex64> = mirrored.iter().map(|&v| Complex64::new(v, 0.0)).collect();
    planner.plan_fft_forward(t).process(&mut spectrum);
    // Non-negative frequencies 0, 1/t, ..., (t/2 - 1)/t cycles per sample.
    let f_hat: Vec<Complex64> = spectrum[..bins].to_vec();
    let freqs: Vec<f64> = (0..bins).map(|i| i as f64 / t as f64).collect();

    let k_modes = cfg.modes;
    let mut omega: Vec<f64> = match cfg.init {
        VmdInit::UniformFreq => (0..k_modes).map(|k| 0.5 * k as f64 / k_modes as f64).collect(),
        VmdInit::Zero => vec![0.0; k_modes],
    };
    let mut u_hat = vec![vec![Complex64::new(0.0, 0.0); bins]; k_modes];
    let mut lambda = vec![Complex64::new(0.0, 0.0); bins];
    let mut total: Vec<Complex64> = vec![Complex64::new(0.0, 0.0); bins];

    let mut iterations = 0;
    let mut converged = false;
    while iterations < cfg.max_iter {
        iterations += 1;
        let mut change = 0.0;
        let mut norm = 0.0;
        // Resummed every sweep so the running total cannot drift.
        total.iter_mut().enumerate().for_each(|(i, t)| {
            *t = u_hat.iter().map(|u| u[i]).sum();
        });
        for k in 0..k_modes {
            let w_k = omega[k];
            let mut weighted = 0.0;
            let mut power = 0.0;
            for i in 0..bins {
                let old = u_hat[k][i];
                let others = total[i] - old;
                let d = freqs[i] - w_k;
                let new = (f_hat[i] - others - lambda[i] * 0.5) / (1.0 + cfg.alpha * d * d);
                total[i] = others + new;
                u_hat[k][i] = new;
                let p = new.norm_sqr();
                weighted += freqs[i] * p;
                power += p;
                change += (new - old).norm_sqr();
                norm += p;
            }
            if power > 0.0 {
                omega[k] = weighted / power;
            }
        }
        if cfg.tau > 0.0 {
            for i in 0..bins {
                lambda[i] += cfg.tau * (total[i] - f_hat[i]);
            }
        }
        if norm == 0.0 || change / norm < cfg.tol {
            converged = true;
            break;
        }
    }

    let ifft = planner.plan_fft_inverse(t);
    let scale = 1.0 / t as f64;
    let fs = signal.fs();
    let mut components = Vec::with_capacity(k_modes);
    for (k, spec) in u_hat.iter().enumerate() {
        let mut full = vec![Complex64::new(0.0, 0.0); t];
        full[..bins].copy_from_slice(spec);
        for i in 1..bins {
            full[t - i] = spec[i].conj();
        }
        ifft.process(&mut full);
        let samples = full[half..half + n].iter().map(|c| c.re * scale).collect();
        components.push(Component {
            samples,
            label: ComponentLabel::Mode(k + 1),
            center_freq: Some((omega[k] * fs).clamp(0.0, fs / 2.0)),
        });
    }
    let center_freqs = components.iter().map(|c| c.center_freq.unwrap()).collect();
    Ok(VmdResult {
        modes: Decomposition::new(DecompositionKind::Vmd, fs, n, components)?,
        center_freqs,
        iterations,
        converged,
    })
}

/// Reorders modes and center frequencies together; ties keep the original
/// order. Mode labels are renumbered to the new positions.
pub fn sort_modes_by_freq(result: VmdResult, order: FreqOrder) -> VmdResult {
    let VmdResult {
        modes,
        center_freqs,
        iterations,
        converged,
    } = result;
    let fs = modes.fs();
    let len = modes.source_len();
    let mut indexed: Vec<(usize, Component)> = modes.into_parts().into_iter().enumerate().collect();
    indexed.sort_by(|(_, a), (_, b)| {
        let (fa, fb) = (a.center_freq.unwrap_or(0.0), b.center_freq.unwrap_or(0.0));
        match order {
            FreqOrder::Ascending => fa.total_cmp(&fb),
            FreqOrder::Descending => fb.total_cmp(&fa),
        }
    });
    let mut freqs = Vec::with_capacity(center_freqs.len());
    let components: Vec<Component> = indexed
        .into_iter()
        .enumerate()
        .map(|(pos, (orig, mut c))| {
            freqs.push(center_freqs[orig]);
            c.label = ComponentLabel::Mode(pos + 1);
            c
        })
        .collect();
    VmdResult {
        modes: Decomposition::new(DecompositionKind::Vmd, fs, len, components)
            .expect("permutation keeps components valid"),
        center_freqs: freqs,
        iterations,
        converged,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::PI;

    const FS: f64 = 360.0;

    fn cosine(freq: f64, n: usize) -> Vec<f64> {
        (0..n).map(|i| (2.0 * PI * freq * i as f64 / FS).cos()).collect()
    }

    fn correlation(a: &[f64], b: &[f64]) -> f64 {
        let n = a.len() as f64;
        let (ma, mb) = (a.iter().sum::<f64>() / n, b.iter().sum::<f64>() / n);
        let cov: f64 = a.iter().zip(b).map(|(x, y)| (x - ma) * (y - mb)).sum();
        let va: f64 = a.iter().map(|x| (x - ma).powi(2)).sum();
        let vb: f64 = b.iter().map(|y| (y - mb).powi(2)).sum();
        cov / (va * vb).sqrt()
    }

    fn fake_result(freqs: &[f64]) -> VmdResult {
        let comps = freqs
            .iter()
            .enumerate()
            .map(|(i, &f)| Component {
                samples: vec![i as f64; 4],
                label: ComponentLabel::Mode(i + 1),
                center_freq: Some(f),
            })
            .collect();
        VmdResult {
            modes: Decomposition::new(DecompositionKind::Vmd, FS, 4, comps).unwrap(),
            center_freqs: freqs.to_vec(),
            iterations: 1,
            converged: true,
        }
    }

    #[test]
    fn single_tone() {
        let x = cosine(10.0, 3600);
        let s = Signal::new(x.clone(), FS).unwrap();
        let r = vmd_decompose(&s, &VmdConfig::with_modes(1)).unwrap();
        assert!((r.center_freqs[0] - 10.0).abs() < 0.2, "{:?}", r.center_freqs);
        assert!(correlation(&r.modes.components()[0].samples, &x) > 0.99);
    }

    #[test]
    fn constant_is_a_dc_mode() {
        let s = Signal::new(vec![1.5; 1000], FS).unwrap();
        let r = vmd_decompose(&s, &VmdConfig::with_modes(1)).unwrap();
        assert!(r.center_freqs[0] < 0.5);
        assert!(r.modes.components()[0].samples.iter().all(|v| (v - 1.5).abs() < 1e-6));
    }

    #[test]
    fn deterministic() {
        let x: Vec<f64> = cosine(5.0, 1200).iter().zip(cosine(60.0, 1200)).map(|(a, b)| a + b).collect();
        let s = Signal::new(x, FS).unwrap();
        let a = vmd_decompose(&s, &VmdConfig::with_modes(3)).unwrap();
        let b = vmd_decompose(&s, &VmdConfig::with_modes(3)).unwrap();
        assert_eq!(a, b);
    }

    #[test]
    fn rejects_bad_configs() {
        let s = Signal::new(cosine(10.0, 10), FS).unwrap();
        let err = vmd_decompose(&s, &VmdConfig::with_modes(6)).unwrap_err();
        assert!(err.to_string().contains("over-parameterized"));
        assert!(vmd_decompose(&s, &VmdConfig { alpha: 0.0, ..VmdConfig::with_modes(1) }).is_err());
        assert!(vmd_decompose(&s, &VmdConfig { tol: 1.0, ..VmdConfig::with_modes(1) }).is_err());
        assert!(vmd_decompose(&s, &VmdConfig::with_modes(0)).is_err());
    }

    #[test]
    fn sorting_permutes_together() {
        let r = sort_modes_by_freq(fake_result(&[3.0, 50.0, 120.0]), FreqOrder::Descending);
        assert_eq!(r.center_freqs, vec![120.0, 50.0, 3.0]);
        let firsts: Vec<f64> = r.modes.components().iter().map(|c| c.samples[0]).collect();
        assert_eq!(firsts, vec![2.0, 1.0, 0.0]);
        assert_eq!(r.modes.components()[0].label, ComponentLabel::Mode(1));
        assert_eq!(r.modes.components()[0].center_freq, Some(120.0));

        let again = sort_modes_by_freq(r.clone(), FreqOrder::Descending);
        assert_eq!(again, r);

        let tied = sort_modes_by_freq(fake_result(&[7.0, 9.0, 7.0]), FreqOrder::Ascending);
        let firsts: Vec<f64> = tied.modes.components().iter().map(|c| c.samples[0]).collect();
        assert_eq!(firsts, vec![0.0, 2.0, 1.0]);
    }
}
