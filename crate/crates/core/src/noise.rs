//! Noise generation, SNR-controlled mixing and a synthetic clean ECG.

use std::f64::consts::{PI, TAU};
use std::fmt;
use std::str::FromStr;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, StandardNormal};

use crate::error::{Error, Result};
use crate::signal::Signal;

/// Generator used for every seeded noise draw.
pub const RNG_NAME: &str = "chacha8";

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum NoiseKind {
    Awgn,
    /// Baseline wander.
    Bw,
    /// Muscle artifact.
    Ma,
}

impl NoiseKind {
    /// Record name in the noise stress test database, if recorded noise.
    pub fn record_name(self) -> Option<&'static str> {
        match self {
            NoiseKind::Awgn => None,
            NoiseKind::Bw => Some("bw"),
            NoiseKind::Ma => Some("ma"),
        }
    }
}

impl fmt::Display for NoiseKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            NoiseKind::Awgn => "awgn",
            NoiseKind::Bw => "bw",
            NoiseKind::Ma => "ma",
        })
    }
}

impl FromStr for NoiseKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "awgn" => Ok(NoiseKind::Awgn),
            "bw" => Ok(NoiseKind::Bw),
            "ma" => Ok(NoiseKind::Ma),
            other => Err(Error::InvalidParameter(format!(
                "unknown noise kind {other:?} (expected awgn, bw or ma)"
            ))),
        }
    }
}

/// Where the noise for each segment comes from.
#[derive(Debug, Clone, PartialEq)]
pub enum NoiseSource {
    /// Segment `i` draws from stream `i` of a generator seeded with `seed`.
    Awgn { seed: u64 },
    /// Segment `i` uses `record[offset + i * len ..][..len]`, wrapping around
    /// the end of the record.
    Record {
        kind: NoiseKind,
        channel: usize,
        offset: usize,
        record: Signal,
    },
}

impl NoiseSource {
    pub fn kind(&self) -> NoiseKind {
        match self {
            NoiseSource::Awgn { .. } => NoiseKind::Awgn,
            NoiseSource::Record { kind, .. } => *kind,
        }
    }

    /// Noise for segment `index`, `len` samples at `fs`.
    pub fn realization(&self, index: usize, len: usize, fs: f64) -> Result<Signal> {
        match self {
            NoiseSource::Awgn { seed } => awgn_stream(len, fs, *seed, index as u64),
            NoiseSource::Record {
                kind,
                offset,
                record,
                ..
            } => {
                if record.fs() != fs {
                    return Err(Error::RateMismatch(record.fs(), fs));
                }
                let total = record.len();
                if total < len {
                    return Err(Error::InvalidParameter(format!(
                        "{kind} noise record has {total} samples, segment needs {len}"
                    )));
                }
                let start = (offset + index * len) % total;
                let src = record.samples();
                let samples = (0..len).map(|i| src[(start + i) % total]).collect();
                Signal::new(samples, fs)
            }
        }
    }

    /// One-line description for output headers.
    pub fn describe(&self) -> String {
        match self {
            NoiseSource::Awgn { seed } => format!("awgn rng={RNG_NAME} seed={seed} stream=segment"),
            NoiseSource::Record {
                kind,
                channel,
                offset,
                record,
            } => format!(
                "{kind} channel={channel} offset={offset} record_len={}",
                record.len()
            ),
        }
    }
}

/// Zero-mean unit-variance Gaussian noise.
pub fn awgn(len: usize, fs: f64, seed: u64) -> Result<Signal> {
    awgn_stream(len, fs, seed, 0)
}

/// Like [`awgn`], drawing from an independent stream of the same seed.
pub fn awgn_stream(len: usize, fs: f64, seed: u64, stream: u64) -> Result<Signal> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(stream);
    let samples = (0..len).map(|_| StandardNormal.sample(&mut rng)).collect();
    Signal::new(samples, fs)
}

/// Gain `g` such that `10 log10(E[clean] / E[g * noise]) = snr_db`.
pub fn snr_gain(clean: &Signal, noise: &Signal, snr_db: f64) -> Result<f64> {
    clean.check_compatible(noise)?;
    if !snr_db.is_finite() {
        return Err(Error::InvalidParameter(format!("SNR must be finite, got {snr_db}")));
    }
    let pc = clean.energy();
    let pn = noise.energy();
    if pn == 0.0 {
        return Err(Error::ZeroEnergy("noise"));
    }
    if pc == 0.0 {
        return Err(Error::ZeroEnergy("clean signal"));
    }
    Ok((pc / (pn * 10f64.powf(snr_db / 10.0))).sqrt())
}

/// `clean + g * noise` at the requested input SNR.
pub fn mix_at_snr(clean: &Signal, noise: &Signal, snr_db: f64) -> Result<Signal> {
    let g = snr_gain(clean, noise, snr_db)?;
    let mixed = clean
        .samples()
        .iter()
        .zip(noise.samples())
        .map(|(c, n)| c + g * n)
        .collect();
    clean.with_samples(mixed)
}

/// One wave of the beat template: amplitude (mV), phase (rad), width (rad).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Wave {
    pub amplitude: f64,
    pub phase: f64,
    pub width: f64,
}

/// P, Q, R, S, T. Phases are relative to the R peak.
pub const BEAT_TEMPLATE: [Wave; 5] = [
    Wave { amplitude: 0.15, phase: -70.0 * PI / 180.0, width: 0.25 },
    Wave { amplitude: -0.10, phase: -15.0 * PI / 180.0, width: 0.1 },
    Wave { amplitude: 1.0, phase: 0.0, width: 0.1 },
    Wave { amplitude: -0.25, phase: 15.0 * PI / 180.0, width: 0.1 },
    Wave { amplitude: 0.30, phase: 100.0 * PI / 180.0, width: 0.4 },
];

/// Noise-free ECG with a fixed heart rate. Beat `k` occupies
/// `[k T, (k + 1) T)` with its R peak at `(k + 1/2) T`, `T = 60 / heart_rate`.
pub fn synth_ecg(duration: f64, fs: f64, heart_rate: f64) -> Result<Signal> {
    if !(duration > 0.0 && duration.is_finite()) {
        return Err(Error::InvalidParameter(format!("duration must be positive, got {duration}")));
    }
    if !(fs > 0.0 && fs.is_finite()) {
        return Err(Error::InvalidParameter(format!("sampling rate must be positive, got {fs}")));
    }
    if !(20.0..=220.0).contains(&heart_rate) {
        return Err(Error::InvalidParameter(format!(
            "heart rate {heart_rate} bpm outside [20, 220]"
        )));
    }
    let len = (duration * fs).round() as usize;
    if len == 0 {
        return Err(Error::InvalidParameter("duration shorter than one sample".into()));
    }
    let beats_per_sec = heart_rate / 60.0;
    let samples = (0..len)
        .map(|i| {
            let cycle = (i as f64 / fs * beats_per_sec).fract();
            let theta = TAU * cycle - PI;
            BEAT_TEMPLATE
                .iter()
                .map(|w| {
                    let d = wrap(theta - w.phase);
                    w.amplitude * (-d * d / (2.0 * w.width * w.width)).exp()
                })
                .sum()
        })
        .collect();
    Signal::new(samples, fs)
}

fn wrap(angle: f64) -> f64 {
    (angle + PI).rem_euclid(TAU) - PI
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lilliefors::lilliefors_test;
    use rustfft::{num_complex::Complex64, FftPlanner};

    #[test]
    fn awgn_moments() {
        let x = awgn(1_000_000, 360.0, 11).unwrap();
        let n = x.len() as f64;
        let mean = x.samples().iter().sum::<f64>() / n;
        let var = x.samples().iter().map(|v| (v - mean).powi(2)).sum::<f64>() / (n - 1.0);
        assert!(mean.abs() < 0.005, "mean {mean}");
        assert!((0.99..=1.01).contains(&var), "var {var}");
    }

    #[test]
    fn awgn_is_deterministic_and_streams_differ() {
        assert_eq!(awgn(1000, 360.0, 3).unwrap(), awgn(1000, 360.0, 3).unwrap());
        assert_ne!(awgn_stream(1000, 360.0, 3, 0).unwrap(), awgn_stream(1000, 360.0, 3, 1).unwrap());
    }

    #[test]
    fn awgn_is_white() {
        let x = awgn(100_000, 360.0, 5).unwrap();
        let x = x.samples();
        let energy: f64 = x.iter().map(|v| v * v).sum();
        for lag in 1..=100 {
            let r: f64 = x.iter().zip(&x[lag..]).map(|(a, b)| a * b).sum::<f64>() / energy;
            assert!(r.abs() < 0.05, "lag {lag}: {r}");
        }
    }

    #[test]
    fn awgn_passes_lilliefors() {
        let accepted = (0..1000u64)
            .filter(|&seed| {
                let x = awgn(3600, 360.0, seed).unwrap();
                lilliefors_test(x.samples(), 0.05).unwrap().is_gaussian
            })
            .count();
        assert!(accepted >= 930, "{accepted}/1000 accepted");
    }

    #[test]
    fn mixing_hits_target_snr() {
        let clean = synth_ecg(10.0, 360.0, 72.0).unwrap();
        let noise = awgn(clean.len(), 360.0, 1).unwrap();
        for (snr, ratio) in [(0.0, 1.0), (10.0, 10.0)] {
            let mixed = mix_at_snr(&clean, &noise, snr).unwrap();
            let added: f64 = mixed
                .samples()
                .iter()
                .zip(clean.samples())
                .map(|(m, c)| (m - c).powi(2))
                .sum();
            let got = clean.energy() / added;
            assert!((got / ratio - 1.0).abs() < 1e-10, "{got}");
        }
    }

    #[test]
    fn mixed_noise_is_proportional() {
        let clean = synth_ecg(3.0, 360.0, 80.0).unwrap();
        let noise = awgn(clean.len(), 360.0, 9).unwrap();
        let mixed = mix_at_snr(&clean, &noise, 4.0).unwrap();
        let g = snr_gain(&clean, &noise, 4.0).unwrap();
        for ((m, c), n) in mixed.samples().iter().zip(clean.samples()).zip(noise.samples()) {
            if n.abs() > 1e-3 {
                assert!(((m - c) / n / g - 1.0).abs() < 1e-12);
            }
        }
    }

    #[test]
    fn mixing_rejects_silent_noise() {
        let clean = synth_ecg(1.0, 360.0, 60.0).unwrap();
        let silent = Signal::zeros(clean.len(), 360.0).unwrap();
        assert!(matches!(mix_at_snr(&clean, &silent, 10.0), Err(Error::ZeroEnergy(_))));
    }

    fn r_peaks(x: &[f64]) -> Vec<usize> {
        (1..x.len() - 1)
            .filter(|&i| x[i] > 0.5 && x[i] >= x[i - 1] && x[i] > x[i + 1])
            .collect()
    }

    #[test]
    fn synth_beats_land_where_expected() {
        let ecg = synth_ecg(10.0, 360.0, 60.0).unwrap();
        assert_eq!(ecg.len(), 3600);
        let peaks = r_peaks(ecg.samples());
        assert_eq!(peaks.len(), 10);
        for w in peaks.windows(2) {
            assert!((w[1] - w[0]).abs_diff(360) <= 1);
        }
        for (k, beat) in ecg.samples().chunks(360).enumerate() {
            let argmax = beat
                .iter()
                .enumerate()
                .max_by(|a, b| a.1.total_cmp(b.1))
                .unwrap()
                .0;
            assert_eq!(k * 360 + argmax, peaks[k]);
        }
    }

    #[test]
    fn synth_is_band_limited() {
        let ecg = synth_ecg(10.0, 360.0, 75.0).unwrap();
        let n = ecg.len();
        let mut buf: Vec<Complex64> = ecg.samples().iter().map(|&v| Complex64::new(v, 0.0)).collect();
        FftPlanner::new().plan_fft_forward(n).process(&mut buf);
        let bin_hz = 360.0 / n as f64;
        let (mut high, mut total) = (0.0, 0.0);
        for (k, c) in buf.iter().enumerate().take(n / 2 + 1) {
            let e = c.norm_sqr();
            total += e;
            if k as f64 * bin_hz > 100.0 {
                high += e;
            }
        }
        assert!(high < 0.01 * total, "{}", high / total);
    }

    #[test]
    fn synth_rejects_bad_inputs() {
        assert!(synth_ecg(0.0, 360.0, 60.0).is_err());
        assert!(synth_ecg(10.0, 360.0, 19.0).is_err());
        assert!(synth_ecg(10.0, 360.0, 221.0).is_err());
    }

    #[test]
    fn record_source_wraps() {
        let record = Signal::new((0..10).map(f64::from).collect(), 360.0).unwrap();
        let src = NoiseSource::Record {
            kind: NoiseKind::Bw,
            channel: 0,
            offset: 7,
            record,
        };
        let seg = src.realization(1, 4, 360.0).unwrap();
        assert_eq!(seg.samples(), &[1.0, 2.0, 3.0, 4.0]);
        assert!(src.realization(0, 11, 360.0).is_err());
        assert!(src.realization(0, 4, 250.0).is_err());
    }
}
