//! Variational mode decomposition of a noisy synthetic ECG, modes sorted by
//! descending center frequency as the pipeline uses them.
//!
//! ```bash
//! cargo run --release -p ecgscrub --example vmd_modes -- 6
//! ```

use ecgscrub::noise::{awgn, mix_at_snr, synth_ecg};
use ecgscrub::vmd::{sort_modes_by_freq, vmd_decompose, FreqOrder, VmdConfig};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let modes = std::env::args().nth(1).map(|k| k.parse()).transpose()?.unwrap_or(10);
    let clean = synth_ecg(10.0, 360.0, 72.0)?;
    let noisy = mix_at_snr(&clean, &awgn(clean.len(), 360.0, 1)?, 10.0)?;

    let result = vmd_decompose(&noisy, &VmdConfig::with_modes(modes))?;
    println!("{} iterations, converged: {}", result.iterations, result.converged);
    let result = sort_modes_by_freq(result, FreqOrder::Descending);
    for (c, f) in result.modes.components().iter().zip(&result.center_freqs) {
        let rms = (c.samples.iter().map(|v| v * v).sum::<f64>() / c.samples.len() as f64).sqrt();
        println!("{:<8} {:>8.2} Hz  rms {:.4}", c.label.to_string(), f, rms);
    }
    Ok(())
}
