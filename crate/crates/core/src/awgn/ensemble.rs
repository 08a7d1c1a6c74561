use rand::Rng;
use rand_distr::StandardNormal;
use serde::{Deserialize, Serialize};
use std::fmt;

use crate::error::{Error, Result};
use crate::rng::{self, Op};

/// LLR magnitude beyond which a value is treated as saturated (`±∞`).
pub const LLR_SATURATION: f64 = 700.0;

/// Paired `(bit, LLR)` samples. LLRs are natural-log ratios
/// `ln P(X=+1|·)/P(X=−1|·)`.
#[derive(Debug, Clone, PartialEq)]
pub struct LlrEnsemble {
    llrs: Vec<f64>,
    labels: Option<Vec<i8>>,
    /// The ensemble claims the true-APP (consistency) property.
    pub consistent: bool,
    /// The ensemble claims Gaussian LLRs `N(m·x, 2m)`.
    pub gaussian: bool,
}

impl LlrEnsemble {
    pub fn new(llrs: Vec<f64>, labels: Option<Vec<i8>>) -> Result<Self> {
        if llrs.is_empty() {
            return Err(Error::domain("ensemble must be nonempty"));
        }
        if let Some(x) = &labels {
            if x.len() != llrs.len() {
                return Err(Error::LengthMismatch {
                    what: "ensemble labels",
                    expected: llrs.len(),
                    actual: x.len(),
                });
            }
            if x.iter().any(|&b| b != 1 && b != -1) {
                return Err(Error::domain("labels must be +1 or -1"));
            }
        }
        if llrs.iter().any(|l| l.is_nan()) {
            return Err(Error::domain("llr values must not be NaN"));
        }
        Ok(LlrEnsemble {
            llrs,
            labels,
            consistent: false,
            gaussian: false,
        })
    }

    pub fn llrs(&self) -> &[f64] {
        &self.llrs
    }

    pub fn labels(&self) -> Option<&[i8]> {
        self.labels.as_deref()
    }

    pub fn len(&self) -> usize {
        self.llrs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.llrs.is_empty()
    }

    /// Same LLRs with the transmitted bits removed, as seen by a receiver.
    pub fn without_labels(&self) -> Self {
        LlrEnsemble {
            labels: None,
            ..self.clone()
        }
    }

    /// Apply `f` to every LLR, keeping the declared claims so that a
    /// consistency check tests them against the transformed values.
    pub fn map_llrs(&self, f: impl Fn(f64) -> f64) -> Self {
        LlrEnsemble {
            llrs: self.llrs.iter().map(|&l| f(l)).collect(),
            labels: self.labels.clone(),
            consistent: self.consistent,
            gaussian: self.gaussian,
        }
    }
}

/// The four transfer-chart measures.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum MeasureKind {
    /// M1: `I(X; L)` in bits.
    MutualInfo,
    /// M2: `E[x·tanh(L/2)]`.
    Fidelity,
    /// M3: `E[L²]`.
    SecondMoment,
    /// M4: `E[tanh²(L/2)] = 1 − MMSE`.
    OneMinusMse,
}

impl MeasureKind {
    pub const ALL: [MeasureKind; 4] = [
        MeasureKind::MutualInfo,
        MeasureKind::Fidelity,
        MeasureKind::SecondMoment,
        MeasureKind::OneMinusMse,
    ];

    pub fn needs_labels(self) -> bool {
        matches!(self, MeasureKind::MutualInfo | MeasureKind::Fidelity)
    }

    fn tag(self) -> &'static str {
        match self {
            MeasureKind::MutualInfo => "M1",
            MeasureKind::Fidelity => "M2",
            MeasureKind::SecondMoment => "M3",
            MeasureKind::OneMinusMse => "M4",
        }
    }
}

impl fmt::Display for MeasureKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.tag())
    }
}

/// Sample mean with its standard error.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct MeasureEstimate {
    pub value: f64,
    pub stderr: f64,
}

fn saturate(l: f64) -> f64 {
    if l > LLR_SATURATION {
        f64::INFINITY
    } else if l < -LLR_SATURATION {
        f64::NEG_INFINITY
    } else {
        l
    }
}

/// `1 − log2(1 + e^(−z))` with the limits `1` at `+∞` and `−∞` at `−∞`.
fn info_term(z: f64) -> f64 {
    let nats = if z < 0.0 {
        -z + z.exp().ln_1p()
    } else {
        (-z).exp().ln_1p()
    };
    1.0 - nats / std::f64::consts::LN_2
}

pub(crate) fn tanh2_half(l: f64) -> f64 {
    let t = (0.5 * saturate(l)).tanh();
    t * t
}

/// Mean and standard error of `f(i)` over `0..n` with a fixed reduction
/// order (chunk sums added in chunk order).
pub(crate) fn chunked_mean<F>(n: usize, f: F) -> MeasureEstimate
where
    F: Fn(usize) -> f64 + Sync + Send,
{
    let parts = rng::map_chunks(rng::chunks(n).collect(), |(_, start, len)| {
        let mut acc = Moments::default();
        for i in start..start + len {
            acc.push(f(i));
        }
        acc
    });
    let mut total = Moments::default();
    for p in parts {
        total.merge(&p);
    }
    total.estimate()
}

/// Running mean and centred sum of squares (Welford, merged with Chan's rule).
#[derive(Debug, Clone, Copy, Default)]
pub(crate) struct Moments {
    n: f64,
    mean: f64,
    m2: f64,
    pos_inf: bool,
    neg_inf: bool,
}

impl Moments {
    pub(crate) fn push(&mut self, v: f64) {
        if v.is_infinite() {
            self.pos_inf |= v > 0.0;
            self.neg_inf |= v < 0.0;
            return;
        }
        self.n += 1.0;
        let d = v - self.mean;
        self.mean += d / self.n;
        self.m2 += d * (v - self.mean);
    }

    pub(crate) fn merge(&mut self, o: &Moments) {
        self.pos_inf |= o.pos_inf;
        self.neg_inf |= o.neg_inf;
        if o.n == 0.0 {
            return;
        }
        let n = self.n + o.n;
        let d = o.mean - self.mean;
        self.mean += d * o.n / n;
        self.m2 += o.m2 + d * d * self.n * o.n / n;
        self.n = n;
    }

    pub(crate) fn estimate(&self) -> MeasureEstimate {
        if self.pos_inf || self.neg_inf {
            let value = match (self.pos_inf, self.neg_inf) {
                (true, true) => f64::NAN,
                (true, false) => f64::INFINITY,
                _ => f64::NEG_INFINITY,
            };
            return MeasureEstimate {
                value,
                stderr: f64::INFINITY,
            };
        }
        let var = if self.n > 1.0 {
            (self.m2 / (self.n - 1.0)).max(0.0)
        } else {
            0.0
        };
        MeasureEstimate {
            value: self.mean,
            stderr: if self.n > 0.0 {
                (var / self.n).sqrt()
            } else {
                0.0
            },
        }
    }
}

/// `n` pairs with `x` uniform on `±1` and `L ~ N(m·x, 2m)`; the LLR of an
/// AWGN channel at SNR `γ = m/2`.
pub fn sample_consistent_llr(m: f64, n: usize, seed: u64) -> Result<LlrEnsemble> {
    if !(m >= 0.0) || !m.is_finite() {
        return Err(Error::domain(format!(
            "mean must be finite and >= 0, got {m}"
        )));
    }
    if n == 0 {
        return Err(Error::domain("ensemble size must be >= 1"));
    }
    let sd = (2.0 * m).sqrt();
    let parts = rng::map_chunks(rng::chunks(n).collect(), |(c, _, len)| {
        let mut r = rng::stream(seed, Op::ConsistentLlr, c);
        let mut x = Vec::with_capacity(len);
        let mut l = Vec::with_capacity(len);
        for _ in 0..len {
            let bit: i8 = if r.random::<bool>() { 1 } else { -1 };
            let z: f64 = r.sample(StandardNormal);
            x.push(bit);
            l.push(m * bit as f64 + sd * z);
        }
        (x, l)
    });
    let mut labels = Vec::with_capacity(n);
    let mut llrs = Vec::with_capacity(n);
    for (x, l) in parts {
        labels.extend(x);
        llrs.extend(l);
    }
    let mut e = LlrEnsemble::new(llrs, Some(labels))?;
    e.consistent = true;
    e.gaussian = true;
    Ok(e)
}

/// Sample estimate of a measure. M3 and M4 read only the LLR values.
pub fn extract_measure(e: &LlrEnsemble, kind: MeasureKind) -> Result<f64> {
    extract_measure_with_stderr(e, kind).map(|m| m.value)
}

pub fn extract_measure_with_stderr(e: &LlrEnsemble, kind: MeasureKind) -> Result<MeasureEstimate> {
    let l = e.llrs();
    let n = l.len();
    match kind {
        MeasureKind::SecondMoment => Ok(chunked_mean(n, |i| {
            let v = saturate(l[i]);
            v * v
        })),
        MeasureKind::OneMinusMse => Ok(chunked_mean(n, |i| tanh2_half(l[i]))),
        MeasureKind::MutualInfo | MeasureKind::Fidelity => {
            let x = e.labels().ok_or(Error::MissingLabels(kind.tag()))?;
            Ok(if kind == MeasureKind::MutualInfo {
                chunked_mean(n, |i| info_term(x[i] as f64 * saturate(l[i])))
            } else {
                chunked_mean(n, |i| x[i] as f64 * (0.5 * saturate(l[i])).tanh())
            })
        }
    }
}

/// Outcome of [`consistency_check`].
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ConsistencyReport {
    /// `M2 − M4`.
    pub m2_m4_gap: f64,
    /// Standard error of the paired difference.
    pub m2_m4_stderr: f64,
    /// `mean(x·L) / (var(x·L)/2)`; 1 for consistent Gaussian LLRs. `None`
    /// unless the ensemble claims to be Gaussian.
    pub gaussian_mean_var_ratio: Option<f64>,
    pub pass: bool,
}

/// Test the true-APP condition `E[x·tanh(L/2)] = E[tanh²(L/2)]` (and, for
/// ensembles declared Gaussian, `mean = variance/2`) at three standard errors.
pub fn consistency_check(e: &LlrEnsemble) -> Result<ConsistencyReport> {
    let x = e
        .labels()
        .ok_or(Error::MissingLabels("consistency check"))?;
    let l = e.llrs();
    let n = l.len();
    let diff = chunked_mean(n, |i| {
        let t = (0.5 * saturate(l[i])).tanh();
        x[i] as f64 * t - t * t
    });
    let mut pass = diff.value.abs() <= 3.0 * diff.stderr + 1e-15;

    let mut ratio = None;
    if e.gaussian {
        let signed = chunked_mean(n, |i| x[i] as f64 * l[i]);
        let nf = n as f64;
        let var = signed.stderr * signed.stderr * nf;
        let mean = signed.value;
        let half_var = 0.5 * var;
        ratio = Some(if half_var == 0.0 && mean == 0.0 {
            1.0
        } else {
            mean / half_var
        });
        let se = (var / nf + var * var / (2.0 * nf)).sqrt();
        pass &= (mean - half_var).abs() <= 3.0 * se + 1e-12;
    }
    Ok(ConsistencyReport {
        m2_m4_gap: diff.value,
        m2_m4_stderr: diff.stderr,
        gaussian_mean_var_ratio: ratio,
        pass,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn zero_information_ensemble() {
        let e = sample_consistent_llr(0.0, 1000, 3).unwrap();
        assert!(e.llrs().iter().all(|&l| l == 0.0));
        for k in MeasureKind::ALL {
            assert_eq!(extract_measure(&e, k).unwrap(), 0.0, "{k}");
        }
        let r = consistency_check(&e).unwrap();
        assert!(r.pass);
        assert_eq!(r.m2_m4_gap, 0.0);
    }

    #[test]
    fn near_noiseless_ensemble() {
        let e = sample_consistent_llr(50.0, 100_000, 5).unwrap();
        assert!(extract_measure(&e, MeasureKind::OneMinusMse).unwrap() > 0.999);
    }

    #[test]
    fn second_moment_matches_gaussian() {
        let e = sample_consistent_llr(2.0, 1_000_000, 11).unwrap();
        let m3 = extract_measure_with_stderr(&e, MeasureKind::SecondMoment).unwrap();
        assert!((m3.value - 8.0).abs() <= 3.0 * m3.stderr, "{m3:?}");
    }

    #[test]
    fn labels_required_for_m1_m2() {
        let e = sample_consistent_llr(1.0, 100, 1).unwrap().without_labels();
        assert_eq!(
            extract_measure(&e, MeasureKind::Fidelity),
            Err(Error::MissingLabels("M2"))
        );
        assert!(extract_measure(&e, MeasureKind::MutualInfo).is_err());
        assert!(extract_measure(&e, MeasureKind::OneMinusMse).is_ok());
        assert!(consistency_check(&e).is_err());
    }

    #[test]
    fn saturated_llrs_use_limits() {
        let e = LlrEnsemble::new(vec![1e308, -f64::INFINITY, 800.0], Some(vec![1, -1, 1])).unwrap();
        assert_eq!(extract_measure(&e, MeasureKind::OneMinusMse).unwrap(), 1.0);
        assert_eq!(extract_measure(&e, MeasureKind::Fidelity).unwrap(), 1.0);
        assert_eq!(extract_measure(&e, MeasureKind::MutualInfo).unwrap(), 1.0);
        let wrong = LlrEnsemble::new(vec![f64::INFINITY], Some(vec![-1])).unwrap();
        assert_eq!(
            extract_measure(&wrong, MeasureKind::MutualInfo).unwrap(),
            f64::NEG_INFINITY
        );
    }

    #[test]
    fn doubling_breaks_consistency() {
        let e = sample_consistent_llr(2.0, 1_000_000, 17).unwrap();
        assert!(consistency_check(&e).unwrap().pass);
        let doubled = e.map_llrs(|l| 2.0 * l);
        let r = consistency_check(&doubled).unwrap();
        assert!(!r.pass);
        // Overconfident LLRs overstate reliability: M4 > M2.
        assert!(r.m2_m4_gap < 0.0);
        assert!((r.gaussian_mean_var_ratio.unwrap() - 0.5).abs() < 0.01);
    }

    #[test]
    fn ensemble_validation() {
        assert!(LlrEnsemble::new(vec![], None).is_err());
        assert!(LlrEnsemble::new(vec![1.0], Some(vec![0])).is_err());
        assert!(LlrEnsemble::new(vec![1.0, 2.0], Some(vec![1])).is_err());
        assert!(sample_consistent_llr(-1.0, 10, 0).is_err());
        assert!(sample_consistent_llr(1.0, 0, 0).is_err());
    }

    #[test]
    fn generation_is_deterministic() {
        let a = sample_consistent_llr(1.5, 200_000, 42).unwrap();
        let b = sample_consistent_llr(1.5, 200_000, 42).unwrap();
        assert_eq!(a, b);
        let c = sample_consistent_llr(1.5, 200_000, 43).unwrap();
        assert_ne!(a.llrs(), c.llrs());
    }
}
