//! Per-segment metric reports, their CSV form, and the mean / SD aggregate.
//!
//! ```bash
//! cargo run --release -p ecgscrub --example metrics_report
//! ```

use ecgscrub::metrics::{AggregateReport, MetricReport};
use ecgscrub::noise::{awgn, mix_at_snr, synth_ecg};
use ecgscrub::pipeline::{evaluate, run, PipelineConfig};

fn main() -> ecgscrub::Result<()> {
    let cfg = PipelineConfig::default();
    let clean = synth_ecg(10.0, 360.0, 72.0)?;
    println!("{}", MetricReport::CSV_HEADER);
    let mut reports = Vec::new();
    for seed in 0..5 {
        let noisy = mix_at_snr(&clean, &awgn(clean.len(), 360.0, seed)?, 10.0)?;
        let (out, _) = run(&noisy, &cfg)?;
        let r = evaluate(&clean, &noisy, &out, &cfg)?;
        println!("{}", r.csv_row());
        assert_eq!(MetricReport::parse_csv_row(&r.csv_row())?, r);
        reports.push(r);
    }
    let agg = AggregateReport::from_reports(&reports)?;
    println!(
        "mean over {}: PRD {:.2}% (sd {:.2}), SNRimp {:.2} dB (sd {:.2})",
        agg.count, agg.mean.prd, agg.sd.prd, agg.mean.snr_imp, agg.sd.snr_imp
    );
    Ok(())
}
