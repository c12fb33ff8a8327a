//! Runs the Lilliefors normality screen over the finest MRA components of a
//! noisy ECG. Components that look Gaussian are the ones the pipeline drops.
//!
//! ```bash
//! cargo run --release -p ecgscrub --example lilliefors_screen -- 0.05
//! ```

use ecgscrub::lilliefors::{critical_value, lilliefors_test};
use ecgscrub::noise::{awgn, mix_at_snr, synth_ecg};
use ecgscrub::wavelet::{mra_decompose, FilterBank};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let alpha: f64 = std::env::args().nth(1).map(|a| a.parse()).transpose()?.unwrap_or(0.05);
    let clean = synth_ecg(10.0, 360.0, 72.0)?;
    let noisy = mix_at_snr(&clean, &awgn(clean.len(), 360.0, 7)?, 5.0)?;
    let decomp = mra_decompose(&noisy, 10, &FilterBank::fk14())?;

    println!("n = {}, alpha = {alpha}, critical D = {:.5}", noisy.len(), critical_value(alpha, noisy.len())?);
    for c in &decomp.components()[..5] {
        let r = lilliefors_test(&c.samples, alpha)?;
        let verdict = if r.is_gaussian { "gaussian, removed" } else { "structured, kept" };
        println!("{:<10} D = {:.5}  {verdict}", c.label.to_string(), r.statistic);
    }
    Ok(())
}
