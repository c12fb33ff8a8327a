//! Nonlocal means on a noisy synthetic ECG across a few bandwidths.
//!
//! ```bash
//! cargo run --release -p ecgscrub --example nlm_smoothing
//! ```

use ecgscrub::metrics::mse;
use ecgscrub::nlm::{nlm_denoise, noise_sigma, NlmMethod, NlmParams};
use ecgscrub::noise::{awgn, mix_at_snr, synth_ecg};

fn main() -> ecgscrub::Result<()> {
    let clean = synth_ecg(10.0, 360.0, 72.0)?;
    let noisy = mix_at_snr(&clean, &awgn(clean.len(), 360.0, 5)?, 5.0)?;
    let sigma = noise_sigma(noisy.samples());
    println!("estimated noise sigma {sigma:.4}, input MSE {:.3e}", mse(&clean, &noisy)?);

    for factor in [0.3, 0.6, 1.0, 2.0] {
        let params = NlmParams::new(factor * sigma, 10, 500);
        let out = nlm_denoise(&noisy, &params)?;
        println!("k = {factor:.1} sigma: MSE {:.3e}", mse(&clean, &out)?);
    }

    // Prefix-sum patch distances: same result up to rounding, far fewer operations.
    let fast = NlmParams {
        method: NlmMethod::Integral,
        ..NlmParams::new(0.6 * sigma, 10, 500)
    };
    println!("integral method: MSE {:.3e}", mse(&clean, &nlm_denoise(&noisy, &fast)?)?);
    Ok(())
}
