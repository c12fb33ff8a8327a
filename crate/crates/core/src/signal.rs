//! Shared value types: uniformly sampled signals, additive decompositions
//! and fixed-length segmentation.

use std::fmt;

use crate::error::{Error, Result};

/// A single-lead, uniformly sampled signal in millivolts.
///
/// Construction validates that `fs > 0`, the signal is non-empty and every
/// sample is finite, so downstream code never has to re-check.
#[derive(Debug, Clone, PartialEq)]
pub struct Signal {
    samples: Vec<f64>,
    fs: f64,
}

impl Signal {
    pub fn new(samples: Vec<f64>, fs: f64) -> Result<Self> {
        if !(fs.is_finite() && fs > 0.0) {
            return Err(Error::InvalidParameter(format!(
                "sampling rate must be positive, got {fs}"
            )));
        }
        if samples.is_empty() {
            return Err(Error::InsufficientLength { needed: 1, got: 0 });
        }
        if let Some(i) = samples.iter().position(|v| !v.is_finite()) {
            return Err(Error::NonFinite(i));
        }
        Ok(Self { samples, fs })
    }

    /// Zero signal of `len` samples.
    pub fn zeros(len: usize, fs: f64) -> Result<Self> {
        Self::new(vec![0.0; len], fs)
    }

    pub fn samples(&self) -> &[f64] {
        &self.samples
    }

    pub fn into_samples(self) -> Vec<f64> {
        self.samples
    }

    pub fn fs(&self) -> f64 {
        self.fs
    }

    pub fn len(&self) -> usize {
        self.samples.len()
    }

    pub fn is_empty(&self) -> bool {
        self.samples.is_empty()
    }

    pub fn duration(&self) -> f64 {
        self.samples.len() as f64 / self.fs
    }

    /// Same sampling rate, new samples. Re-validates finiteness.
    pub fn with_samples(&self, samples: Vec<f64>) -> Result<Self> {
        Self::new(samples, self.fs)
    }

    pub fn energy(&self) -> f64 {
        self.samples.iter().map(|v| v * v).sum()
    }

    pub fn scaled(&self, factor: f64) -> Result<Self> {
        self.with_samples(self.samples.iter().map(|v| v * factor).collect())
    }

    pub fn add(&self, other: &Signal) -> Result<Self> {
        self.check_compatible(other)?;
        self.with_samples(
            self.samples
                .iter()
                .zip(&other.samples)
                .map(|(a, b)| a + b)
                .collect(),
        )
    }

    pub(crate) fn check_compatible(&self, other: &Signal) -> Result<()> {
        if self.len() != other.len() {
            return Err(Error::LengthMismatch(self.len(), other.len()));
        }
        if self.fs != other.fs {
            return Err(Error::RateMismatch(self.fs, other.fs));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum ComponentLabel {
    Detail(usize),
    Approximation(usize),
    Mode(usize),
}

impl fmt::Display for ComponentLabel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ComponentLabel::Detail(l) => write!(f, "detail-{l}"),
            ComponentLabel::Approximation(l) => write!(f, "approximation-{l}"),
            ComponentLabel::Mode(i) => write!(f, "mode-{i}"),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Component {
    pub samples: Vec<f64>,
    pub label: ComponentLabel,
    /// Center frequency in Hz; present only for VMD modes.
    pub center_freq: Option<f64>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum DecompositionKind {
    WaveletMra,
    Vmd,
}

/// Ordered set of same-length components of one source signal.
#[derive(Debug, Clone, PartialEq)]
pub struct Decomposition {
    source_len: usize,
    fs: f64,
    kind: DecompositionKind,
    components: Vec<Component>,
}

impl Decomposition {
    pub fn new(
        kind: DecompositionKind,
        fs: f64,
        source_len: usize,
        components: Vec<Component>,
    ) -> Result<Self> {
        for c in &components {
            if c.samples.len() != source_len {
                return Err(Error::LengthMismatch(c.samples.len(), source_len));
            }
            let is_mode = matches!(c.label, ComponentLabel::Mode(_));
            match c.center_freq {
                Some(f) if !is_mode || !(0.0..=fs / 2.0).contains(&f) => {
                    return Err(Error::InvalidParameter(format!(
                        "center frequency {f} Hz invalid for {}",
                        c.label
                    )))
                }
                None if is_mode => {
                    return Err(Error::InvalidParameter(format!(
                        "{} lacks a center frequency",
                        c.label
                    )))
                }
                _ => {}
            }
        }
        Ok(Self {
            source_len,
            fs,
            kind,
            components,
        })
    }

    pub fn kind(&self) -> DecompositionKind {
        self.kind
    }

    pub fn fs(&self) -> f64 {
        self.fs
    }

    pub fn source_len(&self) -> usize {
        self.source_len
    }

    pub fn components(&self) -> &[Component] {
        &self.components
    }

    pub fn len(&self) -> usize {
        self.components.len()
    }

    pub fn is_empty(&self) -> bool {
        self.components.is_empty()
    }

    pub fn component_signal(&self, index: usize) -> Result<Signal> {
        let c = self.components.get(index).ok_or_else(|| {
            Error::InvalidParameter(format!(
                "component {index} out of range ({} components)",
                self.components.len()
            ))
        })?;
        Signal::new(c.samples.clone(), self.fs)
    }

    /// Multiplies every component by `factor`.
    pub fn scaled(&self, factor: f64) -> Self {
        let mut out = self.clone();
        for c in &mut out.components {
            c.samples.iter_mut().for_each(|v| *v *= factor);
        }
        out
    }

    pub(crate) fn into_parts(self) -> Vec<Component> {
        self.components
    }
}

/// Element-wise sum of the given components (all must share one length).
pub(crate) fn sum_components<'a>(
    len: usize,
    components: impl IntoIterator<Item = &'a Component>,
) -> Vec<f64> {
    let mut acc = vec![0.0; len];
    for c in components {
        for (a, v) in acc.iter_mut().zip(&c.samples) {
            *a += v;
        }
    }
    acc
}

/// Sums all components back into a signal.
pub fn recombine(decomp: &Decomposition) -> Result<Signal> {
    if decomp.is_empty() {
        return Err(Error::InvalidParameter(
            "cannot recombine an empty decomposition".into(),
        ));
    }
    Signal::new(
        sum_components(decomp.source_len, decomp.components()),
        decomp.fs,
    )
}

/// Equal-length, non-overlapping segments cut from one signal.
#[derive(Debug, Clone, PartialEq)]
pub struct SegmentSet {
    segments: Vec<Signal>,
    segment_len: usize,
}

impl SegmentSet {
    pub fn segments(&self) -> &[Signal] {
        &self.segments
    }

    pub fn segment_len(&self) -> usize {
        self.segment_len
    }

    pub fn len(&self) -> usize {
        self.segments.len()
    }

    pub fn is_empty(&self) -> bool {
        self.segments.is_empty()
    }

    pub fn iter(&self) -> std::slice::Iter<'_, Signal> {
        self.segments.iter()
    }

    /// Concatenation of all segments.
    pub fn concat(&self) -> Vec<f64> {
        self.segments
            .iter()
            .flat_map(|s| s.samples().iter().copied())
            .collect()
    }
}

impl<'a> IntoIterator for &'a SegmentSet {
    type Item = &'a Signal;
    type IntoIter = std::slice::Iter<'a, Signal>;

    fn into_iter(self) -> Self::IntoIter {
        self.segments.iter()
    }
}

/// Cuts `signal` into `floor(len / segment_len)` consecutive segments; the
/// trailing remainder is dropped.
pub fn segment(signal: &Signal, segment_len: usize) -> Result<SegmentSet> {
    if segment_len == 0 {
        return Err(Error::InvalidParameter("segment length must be ≥ 1".into()));
    }
    if signal.len() < segment_len {
        return Err(Error::InsufficientLength {
            needed: segment_len,
            got: signal.len(),
        });
    }
    let segments = signal
        .samples()
        .chunks_exact(segment_len)
        .map(|chunk| Signal::new(chunk.to_vec(), signal.fs()))
        .collect::<Result<Vec<_>>>()?;
    Ok(SegmentSet {
        segments,
        segment_len,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn comp(samples: Vec<f64>, i: usize) -> Component {
        Component {
            samples,
            label: ComponentLabel::Detail(i),
            center_freq: None,
        }
    }

    #[test]
    fn rejects_invalid_signals() {
        assert!(Signal::new(vec![], 360.0).is_err());
        assert!(Signal::new(vec![1.0], 0.0).is_err());
        assert!(matches!(
            Signal::new(vec![1.0, f64::NAN], 360.0),
            Err(Error::NonFinite(1))
        ));
    }

    #[test]
    fn full_record_gives_180_segments() {
        let s = Signal::new(vec![0.5; 650_000], 360.0).unwrap();
        let set = segment(&s, 3600).unwrap();
        assert_eq!(set.len(), 180);
        assert!(set.iter().all(|seg| seg.len() == 3600 && seg.fs() == 360.0));
    }

    #[test]
    fn exact_length_is_identity() {
        let s = Signal::new((0..3600).map(|i| i as f64).collect(), 360.0).unwrap();
        let set = segment(&s, 3600).unwrap();
        assert_eq!(set.len(), 1);
        assert_eq!(set.segments()[0], s);
    }

    #[test]
    fn short_signal_is_rejected() {
        let s = Signal::new(vec![0.0; 3599], 360.0).unwrap();
        let err = segment(&s, 3600).unwrap_err();
        assert!(err.to_string().contains("insufficient length"));
    }

    #[test]
    fn recombine_cases() {
        let one = Decomposition::new(
            DecompositionKind::WaveletMra,
            360.0,
            3,
            vec![comp(vec![1.0, -2.0, 3.0], 1)],
        )
        .unwrap();
        assert_eq!(recombine(&one).unwrap().samples(), &[1.0, -2.0, 3.0]);

        let two = Decomposition::new(
            DecompositionKind::WaveletMra,
            360.0,
            2,
            vec![comp(vec![1.0, 1.0], 1), comp(vec![2.0, 2.0], 2)],
        )
        .unwrap();
        assert_eq!(recombine(&two).unwrap().samples(), &[3.0, 3.0]);

        let empty = Decomposition::new(DecompositionKind::Vmd, 360.0, 2, vec![]).unwrap();
        assert!(recombine(&empty).is_err());
    }

    #[test]
    fn center_freq_only_on_modes() {
        let mut c = comp(vec![0.0; 4], 1);
        c.center_freq = Some(10.0);
        assert!(Decomposition::new(DecompositionKind::WaveletMra, 360.0, 4, vec![c]).is_err());
        let m = Component {
            samples: vec![0.0; 4],
            label: ComponentLabel::Mode(0),
            center_freq: Some(200.0),
        };
        assert!(Decomposition::new(DecompositionKind::Vmd, 360.0, 4, vec![m]).is_err());
    }

    proptest! {
        #[test]
        fn segments_concat_to_prefix(
            data in proptest::collection::vec(-5.0f64..5.0, 1..400),
            seg in 1usize..50,
        ) {
            prop_assume!(data.len() >= seg);
            let s = Signal::new(data.clone(), 250.0).unwrap();
            let set = segment(&s, seg).unwrap();
            let keep = (data.len() / seg) * seg;
            prop_assert_eq!(set.concat(), data[..keep].to_vec());
        }

        #[test]
        fn recombine_is_linear(
            a in proptest::collection::vec(-5.0f64..5.0, 8),
            b in proptest::collection::vec(-5.0f64..5.0, 8),
            c in -3.0f64..3.0,
        ) {
            let d = Decomposition::new(
                DecompositionKind::WaveletMra, 100.0, 8,
                vec![comp(a, 1), comp(b, 2)],
            ).unwrap();
            let lhs = recombine(&d.scaled(c)).unwrap();
            let rhs = recombine(&d).unwrap();
            for (x, y) in lhs.samples().iter().zip(rhs.samples()) {
                prop_assert!((x - c * y).abs() < 1e-12);
            }
        }
    }
}
