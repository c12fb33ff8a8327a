//! Synthetic ECG, seeded white noise and SNR-controlled mixing.
//!
//! ```bash
//! cargo run --release -p ecgscrub --example noise_lab
//! ```

use ecgscrub::metrics::snr_db;
use ecgscrub::noise::{awgn, awgn_stream, mix_at_snr, synth_ecg, RNG_NAME};

fn main() -> ecgscrub::Result<()> {
    let clean = synth_ecg(10.0, 360.0, 60.0)?;
    let peak = clean.samples().iter().copied().fold(f64::NEG_INFINITY, f64::max);
    println!("synthetic ECG: {} samples, R peak {peak:.3} mV", clean.len());

    let noise = awgn(clean.len(), 360.0, 42)?;
    for target in [0.0, 5.0, 10.0, 20.0] {
        let noisy = mix_at_snr(&clean, &noise, target)?;
        println!("mix at {target:>4} dB -> measured {:.10} dB", snr_db(&clean, &noisy)?);
    }

    // Segment i of a record draws from stream i of the same seed.
    let a = awgn_stream(4, 360.0, 42, 0)?;
    let b = awgn_stream(4, 360.0, 42, 1)?;
    println!("{RNG_NAME} stream 0: {:?}", a.samples());
    println!("{RNG_NAME} stream 1: {:?}", b.samples());
    Ok(())
}
