//! Splits a synthetic ECG into Fk14 MRA components and prints where the
//! energy sits.
//!
//! ```bash
//! cargo run --release -p ecgscrub --example wavelet_mra
//! ```

use ecgscrub::noise::synth_ecg;
use ecgscrub::recombine;
use ecgscrub::wavelet::{mra_decompose, FilterBank};

fn main() -> ecgscrub::Result<()> {
    let ecg = synth_ecg(10.0, 360.0, 72.0)?;
    let decomp = mra_decompose(&ecg, 10, &FilterBank::fk14())?;
    let total: f64 = decomp
        .components()
        .iter()
        .map(|c| c.samples.iter().map(|v| v * v).sum::<f64>())
        .sum();
    println!("{:<18} {:>16} {:>8}", "component", "nominal band Hz", "energy");
    for (i, c) in decomp.components().iter().enumerate() {
        let e: f64 = c.samples.iter().map(|v| v * v).sum();
        // Detail j covers [fs/2^(j+1), fs/2^j]; the approximation is everything below.
        let j = i as i32 + 1;
        let band = if i + 1 < decomp.len() {
            format!("{:.2}-{:.2}", 360.0 / 2f64.powi(j + 1), 360.0 / 2f64.powi(j))
        } else {
            format!("0-{:.2}", 360.0 / 2f64.powi(j))
        };
        println!("{:<18} {:>16} {:>7.2}%", c.label.to_string(), band, 100.0 * e / total);
    }
    let back = recombine(&decomp)?;
    let err = back
        .samples()
        .iter()
        .zip(ecg.samples())
        .map(|(a, b)| (a - b).abs())
        .fold(0.0, f64::max);
    println!("reconstruction max abs error {err:.2e}");
    Ok(())
}
