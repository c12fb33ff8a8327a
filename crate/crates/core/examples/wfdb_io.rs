//! Reads a WFDB format-212 record. With no argument, writes a small
//! synthetic record to a temporary directory and reads it back.
//!
//! ```bash
//! cargo run --release -p ecgscrub --example wfdb_io -- $ECGSCRUB_DATA_DIR/mitdb/100.hea
//! ```

use std::path::PathBuf;

use ecgscrub::noise::synth_ecg;
use ecgscrub::wfdb::{encode_212, read_record};

fn synthetic_record() -> Result<PathBuf, Box<dyn std::error::Error>> {
    let dir = std::env::temp_dir().join("ecgscrub-wfdb-example");
    std::fs::create_dir_all(&dir)?;
    let ecg = synth_ecg(5.0, 360.0, 72.0)?;
    let adu: Vec<i16> = ecg.samples().iter().map(|v| (v * 200.0).round() as i16 + 1024).collect();
    std::fs::write(dir.join("syn.dat"), encode_212(&adu)?)?;
    let checksum = adu.iter().fold(0i16, |acc, &v| acc.wrapping_add(v));
    std::fs::write(
        dir.join("syn.hea"),
        format!("syn 1 360 {}\nsyn.dat 212 200 11 1024 {} {checksum} 0 MLII\n", adu.len(), adu[0]),
    )?;
    Ok(dir.join("syn.hea"))
}

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let path = match std::env::args().nth(1) {
        Some(p) => PathBuf::from(p),
        None => synthetic_record()?,
    };
    let rec = read_record(&path)?;
    let h = &rec.header;
    println!("{}: {} leads at {} Hz, {} samples", h.record_name, h.n_signals(), h.fs, rec.signals[0].len());
    for (spec, (sig, adu)) in h.signals.iter().zip(rec.signals.iter().zip(&rec.adu)) {
        println!(
            "  {:<6} gain {} adu/{} first adu {:?} first values {:?}",
            spec.description,
            spec.gain,
            spec.units,
            &adu[..5],
            &sig.samples()[..5]
        );
    }
    for w in &rec.warnings {
        println!("warning: {w}");
    }
    Ok(())
}
