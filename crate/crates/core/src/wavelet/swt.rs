//! Undecimated (à-trous) wavelet transform over a periodic buffer.
//!
//! Level `j` filters with taps spaced `2^(j-1)` apart. Analysis is circular
//! correlation with `h0`/`h1`; synthesis is the adjoint scaled by 1/2, which
//! inverts analysis exactly for any orthonormal quadrature-mirror pair
//! because `|H0|^2 + |H1|^2 = 2`.

use super::FilterBank;

pub(crate) struct SwtCoeffs {
    /// `details[j-1]` holds level-`j` detail coefficients.
    pub details: Vec<Vec<f64>>,
    pub approx: Vec<f64>,
}

fn correlate(x: &[f64], taps: &[f64], step: usize) -> Vec<f64> {
    let n = x.len();
    let mut out = vec![0.0; n];
    for (k, &h) in taps.iter().enumerate() {
        let shift = (step * k) % n;
        // out[i] += h * x[(i + shift) mod n]
        let (head, tail) = x.split_at(shift);
        for (o, v) in out.iter_mut().zip(tail.iter().chain(head)) {
            *o += h * v;
        }
    }
    out
}

/// `out += 0.5 * sum_k taps[k] * y[(m - step*k) mod n]`
fn accumulate_adjoint(out: &mut [f64], y: &[f64], taps: &[f64], step: usize) {
    let n = y.len();
    for (k, &h) in taps.iter().enumerate() {
        let shift = (step * k) % n;
        let g = 0.5 * h;
        // y[(m - shift) mod n] for m = 0.. is y rotated right by shift
        let (head, tail) = y.split_at(n - shift);
        for (o, v) in out.iter_mut().zip(tail.iter().chain(head)) {
            *o += g * v;
        }
    }
}

fn adjoint(y: &[f64], taps: &[f64], step: usize) -> Vec<f64> {
    let mut out = vec![0.0; y.len()];
    accumulate_adjoint(&mut out, y, taps, step);
    out
}

fn step_for(level: usize) -> usize {
    1usize << (level - 1)
}

pub(crate) fn analyze(x: &[f64], levels: usize, bank: &FilterBank) -> SwtCoeffs {
    let mut approx = x.to_vec();
    let mut details = Vec::with_capacity(levels);
    for level in 1..=levels {
        let step = step_for(level);
        details.push(correlate(&approx, bank.highpass(), step));
        approx = correlate(&approx, bank.lowpass(), step);
    }
    SwtCoeffs { details, approx }
}

pub(crate) fn synthesize(coeffs: &SwtCoeffs, bank: &FilterBank) -> Vec<f64> {
    let mut approx = coeffs.approx.clone();
    for level in (1..=coeffs.details.len()).rev() {
        let step = step_for(level);
        let mut next = adjoint(&approx, bank.lowpass(), step);
        accumulate_adjoint(&mut next, &coeffs.details[level - 1], bank.highpass(), step);
        approx = next;
    }
    approx
}

/// Projects coefficients at `level` back to the signal domain through the
/// low-pass synthesis chain of the coarser-to-finer levels below it.
fn lift(mut x: Vec<f64>, level: usize, bank: &FilterBank) -> Vec<f64> {
    for l in (1..level).rev() {
        x = adjoint(&x, bank.lowpass(), step_for(l));
    }
    x
}

/// Additive multiresolution components: details 1..=L then approximation L.
pub(crate) fn mra(x: &[f64], levels: usize, bank: &FilterBank) -> Vec<Vec<f64>> {
    let coeffs = analyze(x, levels, bank);
    let mut out = Vec::with_capacity(levels + 1);
    for level in 1..=levels {
        let top = adjoint(&coeffs.details[level - 1], bank.highpass(), step_for(level));
        out.push(lift(top, level, bank));
    }
    let top = adjoint(&coeffs.approx, bank.lowpass(), step_for(levels));
    out.push(lift(top, levels, bank));
    out
}
