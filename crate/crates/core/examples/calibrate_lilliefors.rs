//! Regenerates the Lilliefors critical-value table.
//!
//! ```bash
//! cargo run --release -p ecgscrub --example calibrate_lilliefors -- crates/core/data/lilliefors_critical.tsv
//! ```
//!
//! Pass a replicate count as the second argument for a quicker, coarser table.

use std::time::Instant;

use ecgscrub::lilliefors::{
    CriticalTable, CALIBRATION_GRID, DEFAULT_REPLICATES, DEFAULT_SEED, SUPPORTED_ALPHAS,
};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let mut args = std::env::args().skip(1);
    let out = args.next().unwrap_or_else(|| "lilliefors_critical.tsv".into());
    let replicates = match args.next() {
        Some(r) => r.parse()?,
        None => DEFAULT_REPLICATES,
    };
    let start = Instant::now();
    let table = CriticalTable::calibrate(&CALIBRATION_GRID, &SUPPORTED_ALPHAS, replicates, DEFAULT_SEED);
    std::fs::write(&out, table.to_text())?;
    eprintln!(
        "wrote {out}: {} sample sizes x {} levels, {replicates} replicates each, {:.1}s",
        CALIBRATION_GRID.len(),
        SUPPORTED_ALPHAS.len(),
        start.elapsed().as_secs_f64()
    );
    for n in [64, 512, 3600] {
        println!("n={n:5}  D(0.05)={:.5}  sqrt(n)*D={:.4}", table.critical_value(0.05, n)?, table.critical_value(0.05, n)? * (n as f64).sqrt());
    }
    Ok(())
}
