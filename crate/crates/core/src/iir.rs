//! Butterworth low/high-pass design as cascaded second-order sections, with
//! single-pass and forward-backward (zero-phase) application.

use std::f64::consts::PI;

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::signal::Signal;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum FilterKind {
    LowPass,
    HighPass,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct IirSpec {
    pub kind: FilterKind,
    /// Hz
    pub cutoff: f64,
    pub order: usize,
    pub zero_phase: bool,
}

impl IirSpec {
    /// The order-4 zero-phase 3 Hz high-pass used against motion artifacts.
    pub fn motion_highpass() -> Self {
        Self {
            kind: FilterKind::HighPass,
            cutoff: 3.0,
            order: 4,
            zero_phase: true,
        }
    }

    pub fn lowpass(cutoff: f64, order: usize) -> Self {
        Self {
            kind: FilterKind::LowPass,
            cutoff,
            order,
            zero_phase: false,
        }
    }
}

/// One biquad `(b0 + b1 z^-1 + b2 z^-2) / (1 + a1 z^-1 + a2 z^-2)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Section {
    pub b: [f64; 3],
    pub a: [f64; 2],
}

impl Section {
    fn is_stable(&self) -> bool {
        let [a1, a2] = self.a;
        a2.abs() < 1.0 && a1.abs() < 1.0 + a2
    }

    fn response(&self, z_inv: Complex64) -> Complex64 {
        let z2 = z_inv * z_inv;
        (self.b[0] + self.b[1] * z_inv + self.b[2] * z2) / (1.0 + self.a[0] * z_inv + self.a[1] * z2)
    }

    /// Direct-form II transposed state after settling on a constant input of 1.
    fn step_state(&self) -> [f64; 2] {
        let [b0, b1, b2] = self.b;
        let [a1, a2] = self.a;
        let dc = (b0 + b1 + b2) / (1.0 + a1 + a2);
        let s2 = b2 - a2 * dc;
        let s1 = b1 - a1 * dc + s2;
        [s1, s2]
    }

    fn dc_gain(&self) -> f64 {
        (self.b.iter().sum::<f64>()) / (1.0 + self.a[0] + self.a[1])
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct BiquadChain {
    pub sections: Vec<Section>,
    pub gain: f64,
    /// Filter order, used to size the zero-phase edge padding.
    pub order: usize,
}

impl BiquadChain {
    /// Complex frequency response at `freq` Hz.
    pub fn response(&self, freq: f64, fs: f64) -> Complex64 {
        let z_inv = Complex64::from_polar(1.0, -2.0 * PI * freq / fs);
        self.sections
            .iter()
            .fold(Complex64::new(self.gain, 0.0), |acc, s| acc * s.response(z_inv))
    }

    pub fn magnitude_db(&self, freq: f64, fs: f64) -> f64 {
        20.0 * self.response(freq, fs).norm().log10()
    }

    /// Edge padding used by zero-phase filtering: `3 * (2 * order)` samples.
    pub fn pad_len(&self) -> usize {
        6 * self.order
    }

    /// Causal single pass starting from rest.
    pub fn filter(&self, x: &[f64]) -> Vec<f64> {
        self.run(x, None)
    }

    /// Single pass with every section started from its steady state for a
    /// constant input equal to `x[0]`.
    fn run(&self, x: &[f64], settle_on: Option<f64>) -> Vec<f64> {
        let mut y: Vec<f64> = x.iter().map(|v| v * self.gain).collect();
        let mut level = settle_on.map(|v| v * self.gain);
        for s in &self.sections {
            let [b0, b1, b2] = s.b;
            let [a1, a2] = s.a;
            let [mut s1, mut s2] = match level {
                Some(l) => {
                    let st = s.step_state();
                    [st[0] * l, st[1] * l]
                }
                None => [0.0, 0.0],
            };
            for v in y.iter_mut() {
                let input = *v;
                let out = b0 * input + s1;
                s1 = b1 * input - a1 * out + s2;
                s2 = b2 * input - a2 * out;
                *v = out;
            }
            level = level.map(|l| l * s.dc_gain());
        }
        y
    }

    /// Forward-backward filtering with odd-reflection padding and
    /// steady-state initial conditions; squared magnitude, zero phase.
    pub fn filtfilt(&self, x: &[f64]) -> Result<Vec<f64>> {
        let pad = self.pad_len();
        if x.len() <= pad {
            return Err(Error::InsufficientLength {
                needed: pad + 1,
                got: x.len(),
            });
        }
        let n = x.len();
        let (first, last) = (x[0], x[n - 1]);
        let mut ext = Vec::with_capacity(n + 2 * pad);
        ext.extend((1..=pad).rev().map(|i| 2.0 * first - x[i]));
        ext.extend_from_slice(x);
        ext.extend((1..=pad).map(|i| 2.0 * last - x[n - 1 - i]));

        let mut fwd = self.run(&ext, Some(ext[0]));
        fwd.reverse();
        let start = fwd[0];
        let mut back = self.run(&fwd, Some(start));
        back.reverse();
        Ok(back[pad..pad + n].to_vec())
    }
}

/// Butterworth design via the bilinear transform with cutoff pre-warping.
pub fn design(spec: &IirSpec, fs: f64) -> Result<BiquadChain> {
    if spec.order == 0 {
        return Err(Error::InvalidParameter("filter order must be ≥ 1".into()));
    }
    if !(spec.cutoff > 0.0) {
        return Err(Error::InvalidParameter(format!(
            "cutoff must be positive, got {}",
            spec.cutoff
        )));
    }
    if spec.cutoff >= fs / 2.0 {
        return Err(Error::CutoffAboveNyquist {
            cutoff: spec.cutoff,
            fs,
        });
    }
    let w = (PI * spec.cutoff / fs).tan();
    let w2 = w * w;
    let order = spec.order;
    let mut sections = Vec::with_capacity(order.div_ceil(2));
    for k in 1..=order / 2 {
        // s^2 + c s + 1 with c = 2 sin((2k-1) pi / 2N)
        let c = 2.0 * ((2 * k - 1) as f64 * PI / (2 * order) as f64).sin();
        let d = 1.0 + c * w + w2;
        let a = [2.0 * (w2 - 1.0) / d, (1.0 - c * w + w2) / d];
        let b = match spec.kind {
            FilterKind::LowPass => [w2 / d, 2.0 * w2 / d, w2 / d],
            FilterKind::HighPass => [1.0 / d, -2.0 / d, 1.0 / d],
        };
        sections.push(Section { b, a });
    }
    if order % 2 == 1 {
        let d = 1.0 + w;
        let a = [(w - 1.0) / d, 0.0];
        let b = match spec.kind {
            FilterKind::LowPass => [w / d, w / d, 0.0],
            FilterKind::HighPass => [1.0 / d, -1.0 / d, 0.0],
        };
        sections.push(Section { b, a });
    }
    debug_assert!(sections.iter().all(Section::is_stable));
    Ok(BiquadChain {
        sections,
        gain: 1.0,
        order,
    })
}

/// Designs the filter for `signal.fs()` and applies it.
pub fn apply_spec(signal: &Signal, spec: &IirSpec) -> Result<Signal> {
    let chain = design(spec, signal.fs())?;
    apply(signal, &chain, spec.zero_phase)
}

pub fn apply(signal: &Signal, chain: &BiquadChain, zero_phase: bool) -> Result<Signal> {
    let out = if zero_phase {
        chain.filtfilt(signal.samples())?
    } else {
        chain.filter(signal.samples())
    };
    signal.with_samples(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    const FS: f64 = 360.0;

    fn tone(freq: f64, len: usize) -> Vec<f64> {
        (0..len).map(|i| (2.0 * PI * freq * i as f64 / FS).sin()).collect()
    }

    /// Analog Butterworth magnitude evaluated at the pre-warped frequency,
    /// which the bilinear transform maps exactly onto the digital response.
    fn analog_db(kind: FilterKind, cutoff: f64, order: usize, f: f64) -> f64 {
        let wa = (PI * f / FS).tan();
        let wc = (PI * cutoff / FS).tan();
        let ratio = match kind {
            FilterKind::LowPass => wa / wc,
            FilterKind::HighPass => wc / wa,
        };
        -10.0 * (1.0 + ratio.powi(2 * order as i32)).log10()
    }

    #[test]
    fn matches_analog_prototype() {
        for kind in [FilterKind::LowPass, FilterKind::HighPass] {
            for order in 1..=6 {
                let spec = IirSpec { kind, cutoff: 15.0, order, zero_phase: false };
                let chain = design(&spec, FS).unwrap();
                for f in [0.5, 3.0, 15.0, 40.0, 120.0] {
                    let got = chain.magnitude_db(f, FS);
                    let want = analog_db(kind, 15.0, order, f);
                    assert!((got - want).abs() < 1e-6, "{kind:?} order {order} f {f}: {got} vs {want}");
                }
            }
        }
    }

    #[test]
    fn cutoff_is_minus_three_db() {
        let hp = design(&IirSpec::motion_highpass(), FS).unwrap();
        assert!((hp.magnitude_db(3.0, FS) + 3.0103).abs() < 0.1);
        let lp = design(&IirSpec::lowpass(40.0, 4), FS).unwrap();
        assert!(lp.magnitude_db(0.0, FS).abs() < 1e-6);
        assert!(hp.magnitude_db(0.05, FS) < -60.0);
    }

    #[test]
    fn rejects_cutoff_above_nyquist() {
        let err = design(&IirSpec::lowpass(180.0, 2), FS).unwrap_err();
        assert!(err.to_string().contains("cutoff above Nyquist"));
        assert!(design(&IirSpec::lowpass(10.0, 0), FS).is_err());
    }

    #[test]
    fn sections_are_stable_and_decay() {
        for cutoff in [0.5, 3.0, 15.0, 40.0, 150.0] {
            for kind in [FilterKind::LowPass, FilterKind::HighPass] {
                let chain = design(&IirSpec { kind, cutoff, order: 4, zero_phase: false }, FS).unwrap();
                assert!(chain.sections.iter().all(Section::is_stable));
                // Slowest pole radius sets the time constant.
                let tau = chain
                    .sections
                    .iter()
                    .map(|s| {
                        let r = s.a[1].abs().sqrt().max(1e-300);
                        -1.0 / r.ln()
                    })
                    .fold(0.0, f64::max);
                let len = (10.0 * tau * 5.0).ceil() as usize + 64;
                let mut impulse = vec![0.0; len];
                impulse[0] = 1.0;
                let h = chain.filter(&impulse);
                assert!(h[len - 16..].iter().all(|v| v.abs() < 1e-12), "cutoff {cutoff} {kind:?}");
            }
        }
    }

    #[test]
    fn highpass_kills_dc() {
        let chain = design(&IirSpec::motion_highpass(), FS).unwrap();
        let out = chain.filtfilt(&vec![2.5; 3600]).unwrap();
        assert!(out.iter().all(|v| v.abs() < 1e-3 * 2.5));
    }

    #[test]
    fn zero_phase_preserves_passband_tone() {
        let chain = design(&IirSpec::motion_highpass(), FS).unwrap();
        let x = tone(50.0, 3600);
        let y = chain.filtfilt(&x).unwrap();
        let rms = |v: &[f64]| (v.iter().map(|a| a * a).sum::<f64>() / v.len() as f64).sqrt();
        let ratio = rms(&y[360..3240]) / rms(&x[360..3240]);
        assert!((ratio - 1.0).abs() < 0.01, "{ratio}");
    }

    #[test]
    fn zero_phase_requires_padding_room() {
        let chain = design(&IirSpec::motion_highpass(), FS).unwrap();
        assert!(chain.filtfilt(&[1.0; 24]).is_err());
        assert!(chain.filtfilt(&[1.0; 25]).is_ok());
    }

    #[test]
    fn linear_and_time_invariant() {
        let chain = design(&IirSpec::lowpass(30.0, 3), FS).unwrap();
        let x = tone(7.0, 500);
        let y: Vec<f64> = (0..500).map(|i| ((i * 37) % 11) as f64 - 5.0).collect();
        let combo: Vec<f64> = x.iter().zip(&y).map(|(a, b)| 2.0 * a - 0.5 * b).collect();
        let (fx, fy, fc) = (chain.filter(&x), chain.filter(&y), chain.filter(&combo));
        for i in 0..500 {
            assert!((fc[i] - (2.0 * fx[i] - 0.5 * fy[i])).abs() < 1e-10);
        }
        let zz = chain.filtfilt(&combo).unwrap();
        let (zx, zy) = (chain.filtfilt(&x).unwrap(), chain.filtfilt(&y).unwrap());
        for i in 0..500 {
            assert!((zz[i] - (2.0 * zx[i] - 0.5 * zy[i])).abs() < 1e-10);
        }
        // Shift by 40 samples of a signal that starts at rest.
        let mut shifted = vec![0.0; 40];
        shifted.extend_from_slice(&y[..460]);
        let fs_ = chain.filter(&shifted);
        for i in 0..460 {
            assert!((fs_[i + 40] - fy[i]).abs() < 1e-12);
        }
    }
}
