//! Runs the record x noise x SNR grid on MIT-BIH data found under
//! `$ECGSCRUB_DATA_DIR`, writing one CSV per cell next to the published
//! numbers. Without data it prints the published tables only.
//!
//! ```bash
//! ecgscrub fetch --out data && ECGSCRUB_DATA_DIR=data \
//!     cargo run --release -p ecgscrub --example bench_grid -- bench-out 20
//! ```

use std::path::PathBuf;

use ecgscrub::bench::{run_bench, BenchSpec, CellOutcome};
use ecgscrub::reference::{AWGN_10DB, BASELINE_WANDER, MUSCLE_ARTIFACT};
use ecgscrub::wfdb::data_dir;

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let mut args = std::env::args().skip(1);
    let out = PathBuf::from(args.next().unwrap_or_else(|| "bench-out".into()));
    let max_segments = args.next().map(|s| s.parse()).transpose()?;

    let Some(root) = data_dir() else {
        println!("no dataset root set; published rows:");
        for p in AWGN_10DB.iter().chain(BASELINE_WANDER).chain(MUSCLE_ARTIFACT) {
            println!("  {} {} {:>4} dB {:<13} PRD {:>7}% SNRimp {:>6} dB", p.record, p.noise, p.snr_db, p.method, p.prd, p.snr_imp);
        }
        return Ok(());
    };
    let spec = BenchSpec {
        max_segments,
        ..BenchSpec::new(out, root)
    };
    let summary = run_bench(&spec)?;
    for cell in &summary.cells {
        match &cell.outcome {
            CellOutcome::Ran { path, results } => {
                for r in results {
                    println!(
                        "{} {} {} dB {}: PRD {:.2}% SNRimp {:.2} dB",
                        cell.record, cell.noise, cell.snr_db, r.method, r.aggregate.mean.prd, r.aggregate.mean.snr_imp
                    );
                }
                println!("  -> {}", path.display());
            }
            CellOutcome::Skipped { reason } => println!("{} skipped: {reason}", cell.record),
        }
    }
    Ok(())
}
