//! Reconstruction quality: MSE, RMSE, PRD and SNR improvement.
//!
//! `snr_in` compares the noisy input with the clean reference and `snr_out`
//! compares the denoised output with it.

use std::fmt::Write as _;

use crate::error::{Error, Result};
use crate::signal::Signal;

fn error_energy(clean: &Signal, estimate: &Signal) -> Result<f64> {
    clean.check_compatible(estimate)?;
    Ok(clean
        .samples()
        .iter()
        .zip(estimate.samples())
        .map(|(x, y)| (y - x) * (y - x))
        .sum())
}

pub fn mse(clean: &Signal, estimate: &Signal) -> Result<f64> {
    Ok(error_energy(clean, estimate)? / clean.len() as f64)
}

pub fn rmse(clean: &Signal, estimate: &Signal) -> Result<f64> {
    mse(clean, estimate).map(f64::sqrt)
}

/// Percent root-mean-square difference.
pub fn prd(clean: &Signal, estimate: &Signal) -> Result<f64> {
    let err = error_energy(clean, estimate)?;
    let energy = clean.energy();
    if energy == 0.0 {
        return Err(Error::ZeroEnergy("clean reference"));
    }
    Ok(100.0 * (err / energy).sqrt())
}

/// `10 log10(E[clean] / E[estimate - clean])`.
pub fn snr_db(clean: &Signal, estimate: &Signal) -> Result<f64> {
    let err = error_energy(clean, estimate)?;
    if err == 0.0 {
        return Err(Error::PerfectEstimate);
    }
    let energy = clean.energy();
    if energy == 0.0 {
        return Err(Error::ZeroEnergy("clean reference"));
    }
    Ok(10.0 * (energy / err).log10())
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SnrImprovement {
    pub snr_in: f64,
    pub snr_out: f64,
    pub snr_imp: f64,
}

pub fn snr_improvement(clean: &Signal, noisy: &Signal, denoised: &Signal) -> Result<SnrImprovement> {
    let snr_in = snr_db(clean, noisy)?;
    let snr_out = snr_db(clean, denoised)?;
    Ok(SnrImprovement {
        snr_in,
        snr_out,
        snr_imp: snr_out - snr_in,
    })
}

/// Units: mse mV², rmse mV, prd percent, SNRs dB.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MetricReport {
    pub mse: f64,
    pub rmse: f64,
    pub prd: f64,
    pub snr_in: f64,
    pub snr_out: f64,
    pub snr_imp: f64,
}

impl MetricReport {
    /// Column order of [`MetricReport::csv_row`].
    pub const CSV_HEADER: &'static str = "mse,rmse,prd,snr_in,snr_out,snr_imp";

    pub fn compute(clean: &Signal, noisy: &Signal, denoised: &Signal) -> Result<Self> {
        let mse = mse(clean, denoised)?;
        let snr = snr_improvement(clean, noisy, denoised)?;
        Ok(Self {
            mse,
            rmse: mse.sqrt(),
            prd: prd(clean, denoised)?,
            snr_in: snr.snr_in,
            snr_out: snr.snr_out,
            snr_imp: snr.snr_imp,
        })
    }

    fn fields(&self) -> [f64; 6] {
        [self.mse, self.rmse, self.prd, self.snr_in, self.snr_out, self.snr_imp]
    }

    fn from_fields(v: [f64; 6]) -> Self {
        Self {
            mse: v[0],
            rmse: v[1],
            prd: v[2],
            snr_in: v[3],
            snr_out: v[4],
            snr_imp: v[5],
        }
    }

    /// Values in [`MetricReport::CSV_HEADER`] order, round-trip exact.
    pub fn csv_row(&self) -> String {
        let mut row = String::new();
        for (i, v) in self.fields().iter().enumerate() {
            if i > 0 {
                row.push(',');
            }
            write!(row, "{v:e}").unwrap();
        }
        row
    }

    pub fn parse_csv_row(line: &str) -> Result<Self> {
        let values: Vec<f64> = line
            .split(',')
            .map(|f| f.trim().parse::<f64>())
            .collect::<std::result::Result<_, _>>()
            .map_err(|e| Error::InvalidParameter(format!("metric row {line:?}: {e}")))?;
        let fields: [f64; 6] = values
            .try_into()
            .map_err(|v: Vec<f64>| Error::InvalidParameter(format!("metric row has {} fields, expected 6", v.len())))?;
        Ok(Self::from_fields(fields))
    }
}

/// Per-field mean and sample standard deviation over segment reports.
///
/// `mean.rmse` is the mean of the per-segment RMSEs, not the root of the mean MSE.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AggregateReport {
    pub count: usize,
    pub mean: MetricReport,
    pub sd: MetricReport,
}

impl AggregateReport {
    /// Reports are summed in the order given.
    pub fn from_reports(reports: &[MetricReport]) -> Result<Self> {
        if reports.is_empty() {
            return Err(Error::InvalidParameter("no reports to aggregate".into()));
        }
        let n = reports.len() as f64;
        let mut mean = [0.0; 6];
        for r in reports {
            for (m, v) in mean.iter_mut().zip(r.fields()) {
                *m += v;
            }
        }
        mean.iter_mut().for_each(|m| *m /= n);
        let mut sd = [0.0; 6];
        if reports.len() > 1 {
            for r in reports {
                for ((s, v), m) in sd.iter_mut().zip(r.fields()).zip(mean) {
                    *s += (v - m) * (v - m);
                }
            }
            sd.iter_mut().for_each(|s| *s = (*s / (n - 1.0)).sqrt());
        }
        Ok(Self {
            count: reports.len(),
            mean: MetricReport::from_fields(mean),
            sd: MetricReport::from_fields(sd),
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::noise::{awgn, mix_at_snr, synth_ecg};
    use proptest::prelude::*;

    fn sig(v: &[f64]) -> Signal {
        Signal::new(v.to_vec(), 360.0).unwrap()
    }

    #[test]
    fn hand_computed_values() {
        let clean = sig(&[1.0, 2.0]);
        let est = sig(&[1.0, 3.0]);
        assert_eq!(mse(&clean, &clean).unwrap(), 0.0);
        assert_eq!(mse(&clean, &est).unwrap(), 0.5);
        assert_eq!(prd(&clean, &clean).unwrap(), 0.0);
        assert!((prd(&clean, &est).unwrap() - 100.0 * 0.2f64.sqrt()).abs() < 1e-12);
        assert!((prd(&clean, &est).unwrap() - 44.72).abs() < 0.005);
        assert_eq!(prd(&clean, &sig(&[2.0, 4.0])).unwrap(), 100.0);
        let shifted = sig(&[1.25, 2.25]);
        assert_eq!(mse(&clean, &shifted).unwrap(), 0.0625);
    }

    #[test]
    fn errors() {
        let clean = sig(&[1.0, 2.0]);
        assert!(matches!(mse(&clean, &sig(&[1.0])), Err(Error::LengthMismatch(2, 1))));
        assert!(matches!(prd(&sig(&[0.0, 0.0]), &clean), Err(Error::ZeroEnergy(_))));
        assert!(matches!(
            snr_improvement(&clean, &sig(&[1.0, 3.0]), &clean),
            Err(Error::PerfectEstimate)
        ));
    }

    #[test]
    fn snr_identities() {
        let clean = synth_ecg(10.0, 360.0, 70.0).unwrap();
        let noise = awgn(clean.len(), 360.0, 2).unwrap();
        let noisy = mix_at_snr(&clean, &noise, 7.5).unwrap();
        let same = snr_improvement(&clean, &noisy, &noisy).unwrap();
        assert_eq!(same.snr_imp, 0.0);
        assert!((same.snr_in - 7.5).abs() < 1e-8);
        let halved: Vec<f64> = clean
            .samples()
            .iter()
            .zip(noisy.samples())
            .map(|(c, y)| c + 0.5 * (y - c))
            .collect();
        let halved = clean.with_samples(halved).unwrap();
        let s = snr_improvement(&clean, &noisy, &halved).unwrap();
        assert!((s.snr_imp - 20.0 * 2f64.log10()).abs() < 1e-10);
        assert!((s.snr_imp - 6.0206).abs() < 1e-4);
    }

    #[test]
    fn report_csv_roundtrip_and_aggregate() {
        let r = MetricReport {
            mse: 2.3e-4,
            rmse: 2.3e-4f64.sqrt(),
            prd: 4.67,
            snr_in: 10.0,
            snr_out: 36.59,
            snr_imp: 26.59,
        };
        assert_eq!(MetricReport::parse_csv_row(&r.csv_row()).unwrap(), r);
        let one = AggregateReport::from_reports(&[r]).unwrap();
        assert_eq!(one.mean, r);
        assert_eq!(one.sd.prd, 0.0);
        assert!(AggregateReport::from_reports(&[]).is_err());
        let mut r2 = r;
        r2.prd = 6.67;
        let two = AggregateReport::from_reports(&[r, r2]).unwrap();
        assert!((two.mean.prd - 5.67).abs() < 1e-12);
        assert!((two.sd.prd - 2f64.sqrt()).abs() < 1e-12);
    }

    proptest! {
        #[test]
        fn scale_covariance(
            seed in 0u64..1000,
            a in prop_oneof![-50.0f64..-0.01, 0.01f64..50.0],
        ) {
            let clean = synth_ecg(2.0, 360.0, 75.0).unwrap();
            let noisy = mix_at_snr(&clean, &awgn(clean.len(), 360.0, seed).unwrap(), 5.0).unwrap();
            let den = mix_at_snr(&clean, &awgn(clean.len(), 360.0, seed + 1).unwrap(), 15.0).unwrap();
            let base = MetricReport::compute(&clean, &noisy, &den).unwrap();
            let s = |x: &Signal| x.scaled(a).unwrap();
            let scaled = MetricReport::compute(&s(&clean), &s(&noisy), &s(&den)).unwrap();
            prop_assert!((scaled.prd - base.prd).abs() < 1e-10);
            prop_assert!((scaled.snr_in - base.snr_in).abs() < 1e-10);
            prop_assert!((scaled.snr_out - base.snr_out).abs() < 1e-10);
            prop_assert!((scaled.snr_imp - base.snr_imp).abs() < 1e-10);
            prop_assert!((scaled.mse / (a * a * base.mse) - 1.0).abs() < 1e-10);
            prop_assert_eq!(base.rmse, base.mse.sqrt());
            prop_assert_eq!(base.snr_imp, base.snr_out - base.snr_in);
        }
    }
}
