//! Lilliefors test for normality with mean and variance estimated from the
//! sample.
//!
//! Critical values come from a seeded Monte Carlo calibration of the null
//! distribution of the statistic on a grid of sample sizes, interpolated
//! linearly in `(ln n, ln D)`. A default table produced by
//! [`CriticalTable::calibrate`] ships with the crate; [`CriticalTable::load_or_calibrate`]
//! maintains an on-disk cache for other seeds or replicate counts.

use std::fmt::Write as _;
use std::fs;
use std::io::Write as _;
use std::path::Path;
use std::sync::OnceLock;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, StandardNormal};
use rayon::prelude::*;
use statrs::function::erf::erfc;

use crate::error::{Error, Result};

/// Significance levels the calibration tabulates.
pub const SUPPORTED_ALPHAS: [f64; 5] = [0.01, 0.05, 0.10, 0.15, 0.20];

/// Sample sizes the calibration tabulates.
pub const CALIBRATION_GRID: [usize; 22] = [
    4, 5, 6, 7, 8, 10, 12, 15, 20, 25, 30, 40, 50, 64, 100, 150, 256, 512, 1000, 2000, 3600, 5000,
];

pub const DEFAULT_SEED: u64 = 0x1111_e7_0f;
pub const DEFAULT_REPLICATES: usize = 100_000;

const BLOCK: usize = 1000;

static SHIPPED_TABLE: &str = include_str!("../data/lilliefors_critical.tsv");

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LillieforsResult {
    pub statistic: f64,
    pub critical_value: f64,
    pub alpha: f64,
    pub n: usize,
    pub is_gaussian: bool,
}

fn normal_cdf(z: f64) -> f64 {
    0.5 * erfc(-z / std::f64::consts::SQRT_2)
}

/// Maximum distance between the empirical CDF of `samples` and the normal
/// CDF with the sample mean and (n-1)-denominator standard deviation.
pub fn statistic(samples: &[f64]) -> Result<f64> {
    let n = samples.len();
    if n < 4 {
        return Err(Error::SampleTooSmall(n));
    }
    let nf = n as f64;
    let mean = samples.iter().sum::<f64>() / nf;
    let var = samples.iter().map(|x| (x - mean).powi(2)).sum::<f64>() / (nf - 1.0);
    let sd = var.sqrt();
    if !(sd > 0.0) || sd <= f64::EPSILON * mean.abs() {
        return Err(Error::DegenerateSample);
    }
    let mut z: Vec<f64> = samples.iter().map(|x| (x - mean) / sd).collect();
    z.sort_unstable_by(f64::total_cmp);
    Ok(sorted_statistic(&z))
}

/// Statistic for already standardized, ascending samples.
fn sorted_statistic(sorted: &[f64]) -> f64 {
    let nf = sorted.len() as f64;
    sorted
        .iter()
        .enumerate()
        .map(|(i, &x)| {
            let f = normal_cdf(x);
            let above = (i as f64 + 1.0) / nf - f;
            let below = f - i as f64 / nf;
            above.abs().max(below.abs())
        })
        .fold(0.0, f64::max)
}

fn standardized_null_statistic(rng: &mut ChaCha8Rng, n: usize, buf: &mut Vec<f64>) -> f64 {
    buf.clear();
    buf.extend((0..n).map(|_| -> f64 { StandardNormal.sample(rng) }));
    let nf = n as f64;
    let mean = buf.iter().sum::<f64>() / nf;
    let sd = (buf.iter().map(|x| (x - mean).powi(2)).sum::<f64>() / (nf - 1.0)).sqrt();
    buf.iter_mut().for_each(|x| *x = (*x - mean) / sd);
    buf.sort_unstable_by(f64::total_cmp);
    sorted_statistic(buf)
}

fn block_rng(seed: u64, n: usize, block: usize) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(((n as u64) << 32) | block as u64);
    rng
}

/// Null distribution of the statistic for sample size `n`, sorted ascending.
///
/// Replicates are drawn in fixed blocks with independent generator streams,
/// so the result does not depend on the number of worker threads.
pub fn null_distribution(n: usize, replicates: usize, seed: u64) -> Vec<f64> {
    let blocks = replicates.div_ceil(BLOCK);
    let mut stats: Vec<f64> = (0..blocks)
        .into_par_iter()
        .flat_map_iter(|b| {
            let mut rng = block_rng(seed, n, b);
            let count = BLOCK.min(replicates - b * BLOCK);
            let mut buf = Vec::with_capacity(n);
            (0..count)
                .map(|_| standardized_null_statistic(&mut rng, n, &mut buf))
                .collect::<Vec<_>>()
        })
        .collect();
    stats.sort_unstable_by(f64::total_cmp);
    stats
}

/// Upper `alpha` quantile of a sorted sample (type-1 empirical quantile).
fn upper_quantile(sorted: &[f64], alpha: f64) -> f64 {
    let idx = ((1.0 - alpha) * sorted.len() as f64).ceil() as usize;
    sorted[idx.clamp(1, sorted.len()) - 1]
}

/// Tabulated critical values: one row per sample size, one column per alpha.
#[derive(Debug, Clone, PartialEq)]
pub struct CriticalTable {
    seed: u64,
    replicates: usize,
    alphas: Vec<f64>,
    rows: Vec<(usize, Vec<f64>)>,
}

impl CriticalTable {
    pub fn calibrate(grid: &[usize], alphas: &[f64], replicates: usize, seed: u64) -> Self {
        let rows = grid
            .iter()
            .map(|&n| {
                let dist = null_distribution(n, replicates, seed);
                (n, alphas.iter().map(|&a| upper_quantile(&dist, a)).collect())
            })
            .collect();
        Self {
            seed,
            replicates,
            alphas: alphas.to_vec(),
            rows,
        }
    }

    /// The table embedded in the crate (default seed and grid, 10^5 replicates).
    pub fn shipped() -> &'static CriticalTable {
        static TABLE: OnceLock<CriticalTable> = OnceLock::new();
        TABLE.get_or_init(|| Self::parse(SHIPPED_TABLE).expect("shipped table parses"))
    }

    pub fn seed(&self) -> u64 {
        self.seed
    }

    pub fn replicates(&self) -> usize {
        self.replicates
    }

    pub fn alphas(&self) -> &[f64] {
        &self.alphas
    }

    pub fn grid(&self) -> Vec<usize> {
        self.rows.iter().map(|(n, _)| *n).collect()
    }

    /// Tab-separated text: a `#` header line recording seed and replicate
    /// count, a column header `n<TAB>alpha...`, then one row per `n`.
    pub fn to_text(&self) -> String {
        let mut s = format!(
            "# lilliefors critical values; seed={} replicates={} rng=chacha8\n",
            self.seed, self.replicates
        );
        s.push('n');
        for a in &self.alphas {
            write!(s, "\t{a}").unwrap();
        }
        s.push('\n');
        for (n, vals) in &self.rows {
            write!(s, "{n}").unwrap();
            for v in vals {
                write!(s, "\t{v:.17e}").unwrap();
            }
            s.push('\n');
        }
        s
    }

    pub fn parse(text: &str) -> Result<Self> {
        let bad = |msg: &str| Error::Config(format!("critical-value table: {msg}"));
        let mut lines = text.lines().filter(|l| !l.trim().is_empty());
        let header = lines.next().ok_or_else(|| bad("empty"))?;
        let field = |key: &str| -> Result<&str> {
            header
                .split_whitespace()
                .find_map(|t| t.strip_prefix(key))
                .ok_or_else(|| bad(&format!("header lacks {key}")))
        };
        let seed = field("seed=")?.parse().map_err(|_| bad("bad seed"))?;
        let replicates = field("replicates=")?
            .parse()
            .map_err(|_| bad("bad replicate count"))?;
        let cols = lines.next().ok_or_else(|| bad("missing column header"))?;
        let alphas = cols
            .split('\t')
            .skip(1)
            .map(|a| a.trim().parse::<f64>().map_err(|_| bad("bad alpha")))
            .collect::<Result<Vec<_>>>()?;
        let mut rows = Vec::new();
        for line in lines {
            let mut parts = line.split('\t');
            let n = parts
                .next()
                .and_then(|v| v.trim().parse::<usize>().ok())
                .ok_or_else(|| bad("bad sample size"))?;
            let vals = parts
                .map(|v| v.trim().parse::<f64>().map_err(|_| bad("bad value")))
                .collect::<Result<Vec<_>>>()?;
            if vals.len() != alphas.len() {
                return Err(bad("row width mismatch"));
            }
            rows.push((n, vals));
        }
        if rows.is_empty() || rows.windows(2).any(|w| w[0].0 >= w[1].0) {
            return Err(bad("rows must be non-empty and strictly increasing in n"));
        }
        Ok(Self {
            seed,
            replicates,
            alphas,
            rows,
        })
    }

    /// Reads the cache at `path` if it matches `seed`/`replicates`; otherwise
    /// calibrates and writes it through a temporary file and an atomic
    /// rename, so concurrent callers never observe a partial file.
    pub fn load_or_calibrate(
        path: &Path,
        grid: &[usize],
        replicates: usize,
        seed: u64,
    ) -> Result<Self> {
        if let Ok(text) = fs::read_to_string(path) {
            if let Ok(t) = Self::parse(&text) {
                if t.seed == seed && t.replicates == replicates && t.grid() == grid {
                    return Ok(t);
                }
            }
        }
        let table = Self::calibrate(grid, &SUPPORTED_ALPHAS, replicates, seed);
        let dir = path.parent().filter(|p| !p.as_os_str().is_empty());
        if let Some(dir) = dir {
            fs::create_dir_all(dir).map_err(|e| Error::io(dir, e))?;
        }
        let tmp = path.with_extension(format!("tmp{}", std::process::id()));
        let mut f = fs::File::create(&tmp).map_err(|e| Error::io(&tmp, e))?;
        f.write_all(table.to_text().as_bytes())
            .and_then(|_| f.sync_all())
            .map_err(|e| Error::io(&tmp, e))?;
        fs::rename(&tmp, path).map_err(|e| Error::io(path, e))?;
        Ok(table)
    }

    /// Critical value for `alpha` at sample size `n`.
    ///
    /// Between grid points the value is interpolated linearly in
    /// `(ln n, ln D)`; beyond the largest grid point it follows `D ∝ 1/sqrt(n)`.
    pub fn critical_value(&self, alpha: f64, n: usize) -> Result<f64> {
        if n < 4 {
            return Err(Error::SampleTooSmall(n));
        }
        let col = self
            .alphas
            .iter()
            .position(|a| (a - alpha).abs() < 1e-12)
            .ok_or_else(|| {
                Error::InvalidParameter(format!(
                    "unsupported significance level {alpha}; supported: {:?}",
                    self.alphas
                ))
            })?;
        let (first_n, first) = (&self.rows[0].0, &self.rows[0].1);
        if n <= *first_n {
            return Ok(first[col]);
        }
        let (last_n, last) = self.rows.last().map(|(n, v)| (*n, v)).unwrap();
        if n >= last_n {
            return Ok(last[col] * (last_n as f64 / n as f64).sqrt());
        }
        let hi = self.rows.iter().position(|(m, _)| *m >= n).unwrap();
        let (n0, v0) = (&self.rows[hi - 1].0, self.rows[hi - 1].1[col]);
        let (n1, v1) = (&self.rows[hi].0, self.rows[hi].1[col]);
        if *n1 == n {
            return Ok(v1);
        }
        let t = ((n as f64).ln() - (*n0 as f64).ln()) / ((*n1 as f64).ln() - (*n0 as f64).ln());
        Ok((v0.ln() + t * (v1.ln() - v0.ln())).exp())
    }
}

/// Critical value from the shipped calibration table.
pub fn critical_value(alpha: f64, n: usize) -> Result<f64> {
    CriticalTable::shipped().critical_value(alpha, n)
}

/// Tests `samples` for normality at significance level `alpha`.
pub fn lilliefors_test(samples: &[f64], alpha: f64) -> Result<LillieforsResult> {
    lilliefors_test_with(CriticalTable::shipped(), samples, alpha)
}

pub fn lilliefors_test_with(
    table: &CriticalTable,
    samples: &[f64],
    alpha: f64,
) -> Result<LillieforsResult> {
    let statistic = statistic(samples)?;
    let critical_value = table.critical_value(alpha, samples.len())?;
    Ok(LillieforsResult {
        statistic,
        critical_value,
        alpha,
        n: samples.len(),
        is_gaussian: statistic <= critical_value,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn statistic_matches_brute_force_supremum() {
        // Dense evaluation of |S(x) - F(x)| just left and right of every jump.
        let x = [0.3, -1.2, 2.5, 0.0, 0.9, -0.4, 1.7, -2.2];
        let n = x.len() as f64;
        let mean = x.iter().sum::<f64>() / n;
        let sd = (x.iter().map(|v| (v - mean).powi(2)).sum::<f64>() / (n - 1.0)).sqrt();
        let ecdf = |t: f64| x.iter().filter(|&&v| v <= t).count() as f64 / n;
        let mut sup: f64 = 0.0;
        for &v in &x {
            for t in [v - 1e-12, v, v + 1e-12] {
                sup = sup.max((ecdf(t) - normal_cdf((t - mean) / sd)).abs());
            }
        }
        let d = statistic(&x).unwrap();
        assert!((d - sup).abs() < 1e-9, "{d} vs {sup}");
    }

    #[test]
    fn precondition_errors() {
        assert!(matches!(
            lilliefors_test(&[1.0, 2.0, 3.0], 0.05),
            Err(Error::SampleTooSmall(3))
        ));
        assert!(matches!(
            lilliefors_test(&[2.0; 10], 0.05),
            Err(Error::DegenerateSample)
        ));
        assert!(lilliefors_test(&[1.0, 2.0, 4.0, 3.5, 0.2], 0.07).is_err());
        assert!(critical_value(0.05, 3).is_err());
    }

    #[test]
    fn shipped_table_shape() {
        let t = CriticalTable::shipped();
        assert_eq!(t.seed(), DEFAULT_SEED);
        assert_eq!(t.replicates(), DEFAULT_REPLICATES);
        assert_eq!(t.grid(), CALIBRATION_GRID.to_vec());
        assert_eq!(t.alphas(), &SUPPORTED_ALPHAS);
    }

    #[test]
    fn shipped_table_is_reproducible() {
        // Recalibrating one small grid point regenerates the shipped values bit for bit.
        let t = CriticalTable::calibrate(&[20], &SUPPORTED_ALPHAS, DEFAULT_REPLICATES, DEFAULT_SEED);
        for &a in &SUPPORTED_ALPHAS {
            assert_eq!(
                t.critical_value(a, 20).unwrap(),
                CriticalTable::shipped().critical_value(a, 20).unwrap()
            );
        }
    }

    #[test]
    fn critical_values_order() {
        for &a in &SUPPORTED_ALPHAS {
            let mut prev = f64::INFINITY;
            for n in (4..6000).step_by(7) {
                let v = critical_value(a, n).unwrap();
                assert!(v < prev, "alpha {a}: not decreasing at n={n}");
                prev = v;
            }
        }
        assert!(critical_value(0.05, 100).unwrap() > critical_value(0.05, 1000).unwrap());
        for n in [4, 10, 64, 512, 3600] {
            assert!(critical_value(0.01, n).unwrap() > critical_value(0.05, n).unwrap());
        }
    }

    #[test]
    fn small_n_matches_published_lilliefors_values() {
        // Lilliefors' 1967 table at alpha 0.05: n=4 → 0.381, n=10 → 0.258, n=20 → 0.190.
        for (n, published) in [(4, 0.381), (10, 0.258), (20, 0.190)] {
            let v = critical_value(0.05, n).unwrap();
            assert!((v - published).abs() < 0.01, "n={n}: {v}");
        }
    }

    #[test]
    fn large_n_scales_like_inverse_sqrt() {
        let c = critical_value(0.05, 5000).unwrap() * (5000f64).sqrt();
        assert!((c - 0.886).abs() < 0.03, "{c}");
    }

    #[test]
    fn cache_roundtrip_and_reuse() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("cache").join("crit.tsv");
        let a = CriticalTable::load_or_calibrate(&path, &[8, 16], 2000, 9).unwrap();
        let text = fs::read_to_string(&path).unwrap();
        assert!(text.starts_with("# lilliefors critical values; seed=9 replicates=2000"));
        let b = CriticalTable::load_or_calibrate(&path, &[8, 16], 2000, 9).unwrap();
        assert_eq!(a, b);
        assert_eq!(CriticalTable::parse(&a.to_text()).unwrap(), a);
        // A different seed invalidates the cache.
        let c = CriticalTable::load_or_calibrate(&path, &[8, 16], 2000, 10).unwrap();
        assert_eq!(c.seed(), 10);
    }

    #[test]
    fn null_distribution_is_deterministic() {
        assert_eq!(null_distribution(12, 2500, 3), null_distribution(12, 2500, 3));
        assert_ne!(null_distribution(12, 2500, 3), null_distribution(12, 2500, 4));
    }

    proptest! {
        #[test]
        fn affine_invariance(
            x in proptest::collection::vec(-10.0f64..10.0, 8..200),
            a in 0.01f64..100.0,
            b in -50.0f64..50.0,
        ) {
            let d0 = match statistic(&x) { Ok(d) => d, Err(_) => return Ok(()) };
            let y: Vec<f64> = x.iter().map(|v| a * v + b).collect();
            let d1 = statistic(&y).unwrap();
            prop_assert!((d0 - d1).abs() < 1e-12);
            prop_assert!((0.0..=1.0).contains(&d0));
        }
    }
}
