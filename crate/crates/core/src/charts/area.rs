use serde::{Deserialize, Serialize};

use crate::awgn::{phi_half, phi_inverse_raw, tail_area_half, LN4};
use crate::error::{Error, Result};

use super::{Axis, MmseSnrCurve, Role, TailRule};

/// Relative slack on `ln 4` accepted by [`rate_from_area`].
pub const AREA_TOLERANCE: f64 = 1e-3;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct AreaReport {
    /// Total area in nats.
    pub area: f64,
    /// Part integrated over the sampled grid.
    pub grid_part: f64,
    /// Closed-form continuation past the last point.
    pub tail: f64,
    /// Grid-halving difference plus the disagreement between tail models.
    pub error_estimate: f64,
    /// Monte-Carlo standard error propagated through the quadrature weights.
    pub stderr: f64,
}

/// Quadrature weights for `∫ y dγ` over `g`.
///
/// Segments starting at `γ = 0` use the trapezoid rule. Every other segment
/// `[a, b]` uses the two-point rule that is exact for `y = 1` and `y = 1/γ`,
/// which tracks the slow decay of MMSE curves on log-spaced grids far better
/// than a linear trapezoid.
fn weights(g: &[f64]) -> Vec<f64> {
    let mut w = vec![0.0; g.len()];
    for i in 0..g.len().saturating_sub(1) {
        let (a, b) = (g[i], g[i + 1]);
        let h = b - a;
        if a == 0.0 {
            w[i] += 0.5 * h;
            w[i + 1] += 0.5 * h;
        } else {
            let wb = b - a * b * (b / a).ln() / h;
            w[i] += h - wb;
            w[i + 1] += wb;
        }
    }
    w
}

fn integrate(g: &[f64], y: &[f64]) -> f64 {
    weights(g).iter().zip(y).map(|(w, v)| w * v).sum()
}

/// Tail beyond the last point by two models: fitting `φ⁻¹(mmse)` affinely
/// through the last two points (exact for curves `φ(aγ + b)`), and scaling
/// the uncoded tail by `mmse/φ(γ)` at the last point.
fn tails(g: &[f64], y: &[f64]) -> (f64, f64) {
    let n = g.len();
    let (gl, ml) = (g[n - 1], y[n - 1]);
    if ml <= 0.0 {
        return (0.0, 0.0);
    }
    let ref_phi = phi_half(gl);
    let proportional = if ref_phi > 0.0 {
        ml / ref_phi * tail_area_half(gl)
    } else {
        0.0
    };
    if n < 2 {
        return (proportional, proportional);
    }
    let (s0, s1) = (phi_inverse_raw(y[n - 2]), phi_inverse_raw(ml));
    let a = (s1 - s0) / (gl - g[n - 2]);
    if a.is_finite() && a > 0.0 {
        (tail_area_half(s1) / a, proportional)
    } else {
        (proportional, proportional)
    }
}

/// `∫ mmse dγ` over the curve's grid, continued past the last point
/// according to its [`TailRule`]. Integration starts at the first grid
/// point, so full areas need a grid starting at `γ = 0`.
pub fn area(curve: &MmseSnrCurve) -> Result<AreaReport> {
    let g = curve.gammas();
    let y = curve.mmses();
    let w = weights(&g);
    let grid_part: f64 = w.iter().zip(&y).map(|(w, v)| w * v).sum();
    let stderr = w
        .iter()
        .zip(curve.points())
        .map(|(w, p)| (w * p.stderr).powi(2))
        .sum::<f64>()
        .sqrt();
    let (tail, alt) = match curve.tail_rule() {
        TailRule::AnalyticTail => tails(&g, &y),
        TailRule::Truncate => (0.0, 0.0),
    };
    let halving = if g.len() >= 3 {
        let mut idx: Vec<usize> = (0..g.len()).step_by(2).collect();
        if *idx.last().unwrap() != g.len() - 1 {
            idx.push(g.len() - 1);
        }
        let gc: Vec<f64> = idx.iter().map(|&i| g[i]).collect();
        let yc: Vec<f64> = idx.iter().map(|&i| y[i]).collect();
        (integrate(&gc, &yc) - grid_part).abs()
    } else {
        0.0
    };
    let area = grid_part + tail;
    if !area.is_finite() {
        return Err(Error::InvalidCurve("area is not finite".into()));
    }
    Ok(AreaReport {
        area,
        grid_part,
        tail,
        error_estimate: halving + (tail - alt).abs(),
        stderr,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct RateEstimate {
    pub rate: f64,
    /// Set when the raw estimate fell outside `[0, 1]` and was clamped.
    pub clamped: bool,
}

/// Rate read off an area in nats.
///
/// An outer code's output MMSE integrates to `R·ln 4` against its a-priori
/// SNR and to `(1 − R)·ln 4` against its extrinsic SNR. For an inner code
/// the extrinsic-axis area is `R_max·ln 4`, with `R_max` the largest outer
/// rate it supports, and the a-priori-axis area is `(1 − R_max)·ln 4`.
pub fn rate_from_area(a: f64, role: Role, axis: Axis) -> Result<RateEstimate> {
    let slack = LN4 * AREA_TOLERANCE;
    if !(a >= -slack && a <= LN4 + slack) {
        return Err(Error::domain(format!(
            "area {a} outside [0, ln 4] beyond tolerance"
        )));
    }
    let frac = a / LN4;
    let raw = match (role, axis) {
        (Role::Outer, Axis::APriori) | (Role::Inner, Axis::Extrinsic) => frac,
        (Role::Outer, Axis::Extrinsic) | (Role::Inner, Axis::APriori) => 1.0 - frac,
    };
    Ok(RateEstimate {
        rate: raw.clamp(0.0, 1.0),
        clamped: !(0.0..=1.0).contains(&raw),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::charts::{default_grid, linear_grid};

    #[test]
    fn full_area_of_phi_is_ln4() {
        let c = MmseSnrCurve::analytic(&default_grid(), phi_half, TailRule::AnalyticTail).unwrap();
        let r = area(&c).unwrap();
        assert!((r.area - LN4).abs() < 1e-4, "{r:?}");
        assert!(r.error_estimate < 1e-3);
        assert_eq!(r.stderr, 0.0);
    }

    #[test]
    fn affine_tail_is_exact_for_scaled_snr() {
        // φ(3γ + 0.5) on a short grid: the tail carries most of the area.
        let grid = linear_grid(0.0, 1.0, 11);
        let f = |g: f64| phi_half(3.0 * g + 0.5);
        let c = MmseSnrCurve::analytic(&grid, f, TailRule::AnalyticTail).unwrap();
        let r = area(&c).unwrap();
        let exact = tail_area_half(0.5) / 3.0;
        assert!((r.area - exact).abs() < 2e-3, "{} vs {exact}", r.area);
        assert!((r.tail - tail_area_half(3.5) / 3.0).abs() < 1e-9);
    }

    #[test]
    fn truncation_drops_the_tail() {
        let grid = linear_grid(0.0, 1.0, 3);
        let c = MmseSnrCurve::analytic(&grid, |_| 0.5, TailRule::Truncate).unwrap();
        let r = area(&c).unwrap();
        assert_eq!(r.tail, 0.0);
        assert!((r.area - 0.5).abs() < 1e-15);
    }

    #[test]
    fn rates() {
        let half = rate_from_area(LN4 / 2.0, Role::Outer, Axis::APriori).unwrap();
        assert!((half.rate - 0.5).abs() < 1e-15);
        assert_eq!(
            rate_from_area(0.0, Role::Outer, Axis::APriori)
                .unwrap()
                .rate,
            0.0
        );
        let r = rate_from_area(0.75 * LN4, Role::Outer, Axis::Extrinsic).unwrap();
        assert!((r.rate - 0.25).abs() < 1e-15);
        let c = rate_from_area(LN4 * 1.0005, Role::Outer, Axis::APriori).unwrap();
        assert!(c.clamped && c.rate == 1.0);
        assert!(rate_from_area(LN4 * 1.01, Role::Outer, Axis::APriori).is_err());
        assert!(rate_from_area(-0.1, Role::Inner, Axis::APriori).is_err());
    }
}
