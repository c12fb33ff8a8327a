/// Fejér-Korovkin 14-tap orthogonal low-pass (scaling) filter.
///
/// Squared response: the odd-frequency part of the ideal half-band response
/// smoothed by the degree-14 Fejér-Korovkin kernel, rescaled so that
/// `|H(0)|^2 = 2` and `|H(pi)|^2 = 0`; the taps are its minimum-phase spectral
/// factor, normalized to sum to `sqrt(2)`. Values were produced with 60-digit
/// arithmetic and rounded to 20 significant digits.
pub const FK14_LOWPASS: [f64; 14] = [
    0.26037176930370085539,
    0.68689147724663607004,
    0.61155465394720985048,
    0.051421654128927564029,
    -0.24561392816100151247,
    -0.048575339077288753707,
    0.12428256092000188585,
    0.022226739618766142267,
    -0.063997373038793996594,
    -0.0050743725474976209074,
    0.029779711589290988008,
    -0.0032974791532950297575,
    -0.0092706133738605462683,
    0.0035141009702991524377,
];

/// Degree of the Fejér-Korovkin kernel behind [`FK14_LOWPASS`].
pub const FK14_KERNEL_DEGREE: usize = 14;
