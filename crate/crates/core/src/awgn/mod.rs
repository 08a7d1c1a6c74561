//! Scalar information measures of the binary-input AWGN channel
//! `Y = √γ·X + N`, `X ∈ {±1}`, `N ~ N(0, 1)`, plus LLR ensembles and the
//! four transfer-chart measures built on them.
//!
//! Units: mutual information is in bits, integrals over SNR ("areas") are in
//! nats. The two meet through `d I₂/dγ = φ(γ)/ln 4`.

pub(crate) mod ensemble;

pub use ensemble::{
    consistency_check, extract_measure, extract_measure_with_stderr, sample_consistent_llr,
    ConsistencyReport, LlrEnsemble, MeasureEstimate, MeasureKind, LLR_SATURATION,
};

use serde::{Deserialize, Serialize};
use std::f64::consts::LN_2;

use crate::error::{Error, Result};
use crate::quadrature::gaussian_expectation;

/// `ln 4`, the total area under `φ`.
pub const LN4: f64 = 2.0 * LN_2;

/// Upper end of the `phi_inverse` bisection bracket.
pub const SNR_CEILING: f64 = 1e6;

/// `sech²(u)` is below `1e-21` outside this range.
const SECH2_WINDOW: (f64, f64) = (-25.0, 25.0);

/// `log2(1 + e^(-2u))` is below `1e-25` above this point.
const SOFTPLUS_CUTOFF: f64 = 29.0;

/// Linear signal-to-noise ratio `γ ≥ 0`.
#[derive(Debug, Clone, Copy, PartialEq, PartialOrd, Serialize, Deserialize)]
#[serde(try_from = "f64", into = "f64")]
pub struct Snr(f64);

impl Snr {
    pub const ZERO: Snr = Snr(0.0);

    pub fn new(value: f64) -> Result<Self> {
        if value >= 0.0 && !value.is_nan() {
            Ok(Snr(value))
        } else {
            Err(Error::domain(format!("snr must be >= 0, got {value}")))
        }
    }

    pub fn from_db(db: f64) -> Result<Self> {
        Snr::new(db_to_linear(db))
    }

    pub fn value(self) -> f64 {
        self.0
    }

    pub fn db(self) -> f64 {
        linear_to_db(self.0)
    }
}

impl TryFrom<f64> for Snr {
    type Error = Error;
    fn try_from(v: f64) -> Result<Self> {
        Snr::new(v)
    }
}

impl From<Snr> for f64 {
    fn from(s: Snr) -> f64 {
        s.0
    }
}

/// Mean-squared error of a ±1 bit estimate, in `[0, 1]`.
#[derive(Debug, Clone, Copy, PartialEq, PartialOrd, Serialize, Deserialize)]
#[serde(try_from = "f64", into = "f64")]
pub struct Mmse(f64);

impl Mmse {
    pub const ONE: Mmse = Mmse(1.0);
    pub const ZERO: Mmse = Mmse(0.0);

    pub fn new(value: f64) -> Result<Self> {
        if (0.0..=1.0).contains(&value) {
            Ok(Mmse(value))
        } else {
            Err(Error::domain(format!(
                "mmse must lie in [0, 1], got {value}"
            )))
        }
    }

    /// Clamp a numerically computed value into `[0, 1]`.
    pub fn saturating(value: f64) -> Self {
        Mmse(if value.is_nan() {
            1.0
        } else {
            value.clamp(0.0, 1.0)
        })
    }

    pub fn value(self) -> f64 {
        self.0
    }
}

impl TryFrom<f64> for Mmse {
    type Error = Error;
    fn try_from(v: f64) -> Result<Self> {
        Mmse::new(v)
    }
}

impl From<Mmse> for f64 {
    fn from(m: Mmse) -> f64 {
        m.0
    }
}

/// `P(X = +1)`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct BitPrior(f64);

impl BitPrior {
    pub const UNIFORM: BitPrior = BitPrior(0.5);

    pub fn new(p: f64) -> Result<Self> {
        if (0.0..=1.0).contains(&p) {
            Ok(BitPrior(p))
        } else {
            Err(Error::domain(format!(
                "bit prior must lie in [0, 1], got {p}"
            )))
        }
    }

    pub fn p(self) -> f64 {
        self.0
    }

    /// Binary entropy in bits.
    pub fn entropy_bits(self) -> f64 {
        binary_entropy(self.0)
    }

    fn is_deterministic(self) -> bool {
        self.0 == 0.0 || self.0 == 1.0
    }

    /// Half the prior log-odds.
    fn half_log_odds(self) -> f64 {
        0.5 * (self.0 / (1.0 - self.0)).ln()
    }
}

impl Default for BitPrior {
    fn default() -> Self {
        BitPrior::UNIFORM
    }
}

pub fn db_to_linear(db: f64) -> f64 {
    10f64.powf(db / 10.0)
}

pub fn linear_to_db(v: f64) -> f64 {
    10.0 * v.log10()
}

/// Binary entropy `h(p)` in bits.
pub fn binary_entropy(p: f64) -> f64 {
    let term = |q: f64| if q > 0.0 { -q * q.log2() } else { 0.0 };
    term(p) + term(1.0 - p)
}

fn sech2(u: f64) -> f64 {
    if u.abs() > 350.0 {
        return 0.0;
    }
    let c = u.cosh();
    1.0 / (c * c)
}

/// `log2(1 + e^(-2u))`, stable for any sign of `u`.
fn softplus_bits(u: f64) -> f64 {
    let z = -2.0 * u;
    let nats = if z > 0.0 {
        z + (-z).exp().ln_1p()
    } else {
        z.exp().ln_1p()
    };
    nats / LN_2
}

/// `E[f(γ + √γ·N + shift)]` restricted to `window`.
fn half_llr_expectation(f: fn(f64) -> f64, g: f64, shift: f64, window: (f64, f64)) -> f64 {
    gaussian_expectation(f, g + shift, g.sqrt(), window)
}

/// MMSE of estimating `X` from `Y` at SNR `gamma` with prior `prior`.
///
/// With `L` the posterior log-odds, the estimate is `tanh(L/2)` and the error
/// is `E[sech²(L/2)]`. Given `X = ±1`, `±L/2 = γ + √γ·N ± λ/2` where `λ` is
/// the prior log-odds.
pub fn phi(gamma: Snr, prior: BitPrior) -> Mmse {
    Mmse::saturating(phi_raw(gamma.0, prior))
}

fn phi_raw(g: f64, prior: BitPrior) -> f64 {
    if prior.is_deterministic() {
        return 0.0;
    }
    let p = prior.p();
    if p == 0.5 {
        return half_llr_expectation(sech2, g, 0.0, SECH2_WINDOW);
    }
    let s = prior.half_log_odds();
    p * half_llr_expectation(sech2, g, s, SECH2_WINDOW)
        + (1.0 - p) * half_llr_expectation(sech2, g, -s, SECH2_WINDOW)
}

/// `φ(γ)` for equiprobable bits on raw values. `g` must be `≥ 0`; `+∞`
/// gives zero.
pub fn phi_half(g: f64) -> f64 {
    debug_assert!(g >= 0.0, "negative snr {g}");
    if g.is_infinite() {
        return 0.0;
    }
    half_llr_expectation(sech2, g, 0.0, SECH2_WINDOW).clamp(0.0, 1.0)
}

/// Mutual information `I₂(γ, p)` in bits.
pub fn mutual_info_binary(gamma: Snr, prior: BitPrior) -> f64 {
    if prior.is_deterministic() {
        return 0.0;
    }
    let g = gamma.0;
    let p = prior.p();
    let window = (f64::NEG_INFINITY, SOFTPLUS_CUTOFF);
    let equivocation = if p == 0.5 {
        half_llr_expectation(softplus_bits, g, 0.0, window)
    } else {
        let s = prior.half_log_odds();
        p * half_llr_expectation(softplus_bits, g, s, window)
            + (1.0 - p) * half_llr_expectation(softplus_bits, g, -s, window)
    };
    (prior.entropy_bits() - equivocation).clamp(0.0, prior.entropy_bits())
}

/// `I₂(γ)` for equiprobable bits on raw values.
pub fn mutual_info_half(g: f64) -> f64 {
    mutual_info_binary(Snr(g.max(0.0)), BitPrior::UNIFORM)
}

/// Result of inverting `φ`: a finite SNR, or the `γ = ∞` endpoint reached by
/// an MMSE of exactly zero.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum SnrOrSaturated {
    Finite(Snr),
    Saturated,
}

impl SnrOrSaturated {
    /// The SNR, mapping saturation to `+∞`.
    pub fn value_or_inf(self) -> f64 {
        match self {
            SnrOrSaturated::Finite(s) => s.0,
            SnrOrSaturated::Saturated => f64::INFINITY,
        }
    }
}

/// Invert `φ` (equiprobable bits) by bisection on `[0, 1e6]`.
///
/// A target of zero has no finite preimage; use [`snr_for_mmse`] when that
/// endpoint is legitimate.
pub fn phi_inverse(target: Mmse) -> Result<Snr> {
    let t = target.0;
    if t <= 0.0 {
        return Err(Error::domain(
            "phi_inverse(0) is infinite; handle saturation via snr_for_mmse",
        ));
    }
    Ok(Snr(bisect_phi(t)))
}

/// Like [`phi_inverse`] but maps an MMSE of zero to [`SnrOrSaturated::Saturated`].
pub fn snr_for_mmse(target: Mmse) -> SnrOrSaturated {
    if target.0 <= 0.0 {
        SnrOrSaturated::Saturated
    } else {
        SnrOrSaturated::Finite(Snr(bisect_phi(target.0)))
    }
}

/// Raw inverse for `t ∈ (0, 1]`; `t ≤ 0` gives `+∞`.
pub fn phi_inverse_raw(t: f64) -> f64 {
    if t <= 0.0 {
        f64::INFINITY
    } else {
        bisect_phi(t.min(1.0))
    }
}

fn bisect_phi(t: f64) -> f64 {
    if t >= 1.0 {
        return 0.0;
    }
    let (mut lo, mut hi) = (0.0f64, SNR_CEILING);
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        if mid <= lo || mid >= hi {
            break;
        }
        if phi_half(mid) > t {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    0.5 * (lo + hi)
}

/// `∫_a^∞ φ(γ, p) dγ = ln4·(H(p) − I₂(a, p))`, in nats.
pub fn tail_area(gamma_low: Snr, prior: BitPrior) -> f64 {
    let remaining = prior.entropy_bits() - mutual_info_binary(gamma_low, prior);
    LN4 * remaining.max(0.0)
}

/// Raw-value tail area for equiprobable bits; `+∞` gives zero.
pub fn tail_area_half(g: f64) -> f64 {
    if g.is_infinite() {
        0.0
    } else {
        tail_area(Snr(g.max(0.0)), BitPrior::UNIFORM)
    }
}

/// Largest `|ΔI₂/Δγ − φ(γ)/ln4|` over `grid`, with central differences of
/// half-width `h` (mutual information in bits).
pub fn verify_immse(grid: &[Snr], h: f64, prior: BitPrior) -> Result<f64> {
    if !(h > 0.0) {
        return Err(Error::domain(format!("step must be positive, got {h}")));
    }
    let mut worst = 0.0f64;
    for &g in grid {
        if g.0 < h {
            return Err(Error::domain(format!(
                "grid point {} is closer than the step {h} to zero",
                g.0
            )));
        }
        let up = mutual_info_binary(Snr(g.0 + h), prior);
        let down = mutual_info_binary(Snr(g.0 - h), prior);
        let slope = (up - down) / (2.0 * h);
        let expected = phi(g, prior).0 / LN4;
        worst = worst.max((slope - expected).abs());
    }
    Ok(worst)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn snr(v: f64) -> Snr {
        Snr::new(v).unwrap()
    }

    #[test]
    fn phi_endpoints() {
        assert_eq!(phi(Snr::ZERO, BitPrior::UNIFORM).value(), 1.0);
        assert!(phi(snr(100.0), BitPrior::UNIFORM).value() < 1e-6);
        for g in [0.0, 0.5, 3.0, 40.0] {
            assert_eq!(phi(snr(g), BitPrior::new(0.0).unwrap()).value(), 0.0);
            assert_eq!(phi(snr(g), BitPrior::new(1.0).unwrap()).value(), 0.0);
        }
    }

    #[test]
    fn phi_at_zero_snr_is_prior_variance() {
        let p = BitPrior::new(0.3).unwrap();
        assert!((phi(Snr::ZERO, p).value() - 0.84).abs() < 1e-15);
    }

    #[test]
    fn rejects_invalid_arguments() {
        assert!(Snr::new(-1.0).is_err());
        assert!(Snr::new(f64::NAN).is_err());
        assert!(BitPrior::new(1.2).is_err());
        assert!(BitPrior::new(-0.1).is_err());
        assert!(Mmse::new(1.5).is_err());
        assert!(phi_inverse(Mmse::ZERO).is_err());
    }

    #[test]
    fn mutual_info_endpoints() {
        assert_eq!(mutual_info_binary(Snr::ZERO, BitPrior::UNIFORM), 0.0);
        assert!((mutual_info_binary(snr(100.0), BitPrior::UNIFORM) - 1.0).abs() < 1e-6);
        let p = BitPrior::new(0.3).unwrap();
        assert!(mutual_info_binary(snr(50.0), p) <= p.entropy_bits());
    }

    #[test]
    fn phi_is_strictly_decreasing_on_log_grid() {
        let grid: Vec<f64> = (0..200)
            .map(|k| 1e-3 * 1e5f64.powf(k as f64 / 199.0))
            .collect();
        let vals: Vec<f64> = grid.iter().map(|&g| phi_half(g)).collect();
        assert_eq!(phi_half(0.0), 1.0);
        for w in vals.windows(2) {
            assert!(w[1] < w[0], "{} !< {}", w[1], w[0]);
        }
        let info: Vec<f64> = grid.iter().map(|&g| mutual_info_half(g)).collect();
        for w in info.windows(2) {
            assert!(w[1] > w[0] || w[1] == 1.0);
        }
    }

    #[test]
    fn inverse_roundtrip() {
        assert_eq!(phi_inverse(Mmse::ONE).unwrap().value(), 0.0);
        let g2 = phi_inverse(phi(snr(2.0), BitPrior::UNIFORM))
            .unwrap()
            .value();
        assert!((g2 - 2.0).abs() < 1e-8);
        for k in 0..60 {
            let g = 1e-3 * (5e4f64).powf(k as f64 / 59.0);
            let back = phi_inverse(phi(snr(g), BitPrior::UNIFORM)).unwrap().value();
            assert!((back - g).abs() <= 1e-8 * g.max(1.0), "{g} -> {back}");
            assert!((phi_half(back) - phi_half(g)).abs() <= 1e-10);
        }
        assert_eq!(snr_for_mmse(Mmse::ZERO), SnrOrSaturated::Saturated);
    }

    #[test]
    fn tail_area_closed_form() {
        assert!((tail_area(Snr::ZERO, BitPrior::UNIFORM) - LN4).abs() < 1e-12);
        assert!(tail_area(snr(200.0), BitPrior::UNIFORM) < 1e-30);
        assert_eq!(tail_area_half(f64::INFINITY), 0.0);
        let p = BitPrior::new(0.2).unwrap();
        assert!((tail_area(Snr::ZERO, p) - LN4 * binary_entropy(0.2)).abs() < 1e-12);
    }

    #[test]
    fn immse_near_zero_snr() {
        // dI₂/dγ at 0⁺ equals φ(0)/ln4 = 1/ln4.
        let h = 1e-5;
        let slope = mutual_info_half(h) / h;
        assert!((slope - 1.0 / LN4).abs() < 1e-4);
        assert!(verify_immse(&[snr(1e-4)], 1e-3, BitPrior::UNIFORM).is_err());
        assert!(verify_immse(&[snr(1.0)], 0.0, BitPrior::UNIFORM).is_err());
    }

    #[test]
    fn db_conversions() {
        assert!((Snr::from_db(3.0).unwrap().value() - 1.9952623149688795).abs() < 1e-15);
        assert!((snr(10.0).db() - 10.0).abs() < 1e-12);
    }
}
