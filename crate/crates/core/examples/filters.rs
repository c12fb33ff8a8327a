//! Butterworth responses: the 3 Hz motion high-pass and the 15 / 40 Hz
//! low-pass variants, plus a baseline-wander removal demo.
//!
//! ```bash
//! cargo run --release -p ecgscrub --example filters
//! ```

use ecgscrub::iir::{apply_spec, design, IirSpec};
use ecgscrub::noise::synth_ecg;

fn main() -> ecgscrub::Result<()> {
    let fs = 360.0;
    let specs = [
        ("high-pass 3 Hz", IirSpec::motion_highpass()),
        ("low-pass 15 Hz", IirSpec::lowpass(15.0, 4)),
        ("low-pass 40 Hz", IirSpec::lowpass(40.0, 4)),
    ];
    let freqs = [0.05, 0.3, 1.0, 3.0, 10.0, 15.0, 40.0, 60.0, 150.0];
    print!("{:<16}", "|H| dB");
    for f in freqs {
        print!("{f:>9}");
    }
    println!();
    for (name, spec) in &specs {
        let chain = design(spec, fs)?;
        print!("{name:<16}");
        for f in freqs {
            print!("{:>9.2}", chain.magnitude_db(f, fs));
        }
        println!();
    }

    let ecg = synth_ecg(20.0, fs, 72.0)?;
    let drift: Vec<f64> = ecg
        .samples()
        .iter()
        .enumerate()
        .map(|(i, v)| v + 0.5 * (2.0 * std::f64::consts::PI * 0.3 * i as f64 / fs).sin())
        .collect();
    let out = apply_spec(&ecg.with_samples(drift)?, &IirSpec::motion_highpass())?;
    let mean = out.samples().iter().sum::<f64>() / out.len() as f64;
    println!("0.3 Hz drift removed: output mean {mean:.2e}");
    Ok(())
}
