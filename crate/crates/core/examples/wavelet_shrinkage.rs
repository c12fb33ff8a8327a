//! Universal soft-threshold shrinkage on white noise and on a noisy ECG.
//!
//! ```bash
//! cargo run --release -p ecgscrub --example wavelet_shrinkage
//! ```

use ecgscrub::metrics::prd;
use ecgscrub::noise::{awgn, mix_at_snr, synth_ecg};
use ecgscrub::wavelet::{wavelet_denoise, DenoiseSpec, FilterBank, Shrinkage, ThresholdRule};

fn variance(x: &[f64]) -> f64 {
    let m = x.iter().sum::<f64>() / x.len() as f64;
    x.iter().map(|v| (v - m) * (v - m)).sum::<f64>() / x.len() as f64
}

fn main() -> ecgscrub::Result<()> {
    let bank = FilterBank::fk14();
    let noise = awgn(3600, 360.0, 3)?;
    for level in [1, 3, 5] {
        let out = wavelet_denoise(&noise, &DenoiseSpec::universal_soft(level), &bank)?;
        println!("white noise, level {level}: variance {:.3} -> {:.3}", variance(noise.samples()), variance(out.samples()));
    }

    let clean = synth_ecg(10.0, 360.0, 72.0)?;
    let noisy = mix_at_snr(&clean, &awgn(clean.len(), 360.0, 4)?, 10.0)?;
    for shrinkage in [Shrinkage::Soft, Shrinkage::Hard] {
        let spec = DenoiseSpec {
            level: 4,
            threshold_rule: ThresholdRule::Universal,
            shrinkage,
        };
        let out = wavelet_denoise(&noisy, &spec, &bank)?;
        println!("ecg at 10 dB, {shrinkage:?}: PRD {:.2}% -> {:.2}%", prd(&clean, &noisy)?, prd(&clean, &out)?);
    }
    Ok(())
}
