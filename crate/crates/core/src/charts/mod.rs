//! Transfer curves, MMSE-versus-SNR curves and the quantities read off them:
//! areas, rates, matching gaps, decoding trajectories and thresholds.

mod area;
mod build;
pub mod io;
mod ldpc;
pub mod presets;

pub use area::{area, rate_from_area, AreaReport, RateEstimate, AREA_TOLERANCE};
pub use build::{
    check_node_curve, default_grid, linear_grid, log_grid, outer_points, repetition_curve,
    snr_grid, vnd_curve, McSettings,
};
pub use ldpc::{
    channel_snr_from_ebno, ldpc_chart_pair, matching_gap, threshold, threshold_with, trajectory,
    ChartPair, GapPoint, MatchingGap, Trajectory, TrajectoryStep, DEFAULT_MAX_ITER, DEFAULT_TOL,
};

use serde::{Deserialize, Serialize};

use crate::awgn::{mutual_info_half, phi_half, phi_inverse_raw, Mmse, Snr};
use crate::decoders::TransferPoint;
use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, Default)]
#[serde(rename_all = "snake_case")]
pub enum Role {
    Inner,
    #[default]
    Outer,
}

/// Which SNR parameterizes an MMSE-versus-SNR curve.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, Default)]
#[serde(rename_all = "snake_case")]
pub enum Axis {
    #[default]
    APriori,
    Extrinsic,
}

/// How the integral is continued past the last grid point.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, Default)]
#[serde(rename_all = "snake_case")]
pub enum TailRule {
    #[default]
    AnalyticTail,
    Truncate,
}

/// Slack allowed when checking monotonicity of sampled curves.
fn slack(se_a: f64, se_b: f64) -> f64 {
    3.0 * (se_a + se_b) + 1e-12
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CurvePoint {
    pub mmse_ap: Mmse,
    pub mmse_ext: Mmse,
    pub stderr: f64,
}

/// Extrinsic MMSE as a function of a-priori MMSE for one decoder.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TransferCurve {
    points: Vec<CurvePoint>,
    role: Role,
    label: String,
}

impl TransferCurve {
    /// Points must have strictly decreasing `mmse_ap` and, up to three
    /// standard errors, nonincreasing `mmse_ext`.
    pub fn new(points: Vec<CurvePoint>, role: Role, label: impl Into<String>) -> Result<Self> {
        if points.len() < 2 {
            return Err(Error::InvalidCurve(
                "a transfer curve needs at least 2 points".into(),
            ));
        }
        for (i, w) in points.windows(2).enumerate() {
            if !(w[1].mmse_ap.value() < w[0].mmse_ap.value()) {
                return Err(Error::InvalidCurve(format!(
                    "mmse_ap not strictly decreasing at point {}",
                    i + 1
                )));
            }
            if w[1].mmse_ext.value() > w[0].mmse_ext.value() + slack(w[0].stderr, w[1].stderr) {
                return Err(Error::InvalidCurve(format!(
                    "mmse_ext increases at point {}",
                    i + 1
                )));
            }
        }
        if points.iter().any(|p| !(p.stderr >= 0.0)) {
            return Err(Error::InvalidCurve("negative or NaN standard error".into()));
        }
        Ok(TransferCurve {
            points,
            role,
            label: label.into(),
        })
    }

    /// Curve through transfer points ordered by increasing `gamma_ap`.
    pub fn from_points(
        points: &[TransferPoint],
        role: Role,
        label: impl Into<String>,
    ) -> Result<Self> {
        let pts = points
            .iter()
            .map(|p| CurvePoint {
                mmse_ap: Mmse::saturating(phi_half(p.gamma_ap.value())),
                mmse_ext: p.mmse_ext,
                stderr: p.stderr,
            })
            .collect();
        TransferCurve::new(pts, role, label)
    }

    pub fn points(&self) -> &[CurvePoint] {
        &self.points
    }

    pub fn role(&self) -> Role {
        self.role
    }

    pub fn label(&self) -> &str {
        &self.label
    }

    pub fn with_label(mut self, label: impl Into<String>) -> Self {
        self.label = label.into();
        self
    }

    /// The same curve with the axes exchanged, as drawn for the partner
    /// decoder on a shared chart. Requires strictly decreasing `mmse_ext`.
    pub fn flipped(&self, role: Role) -> Result<Self> {
        let pts = self
            .points
            .iter()
            .map(|p| CurvePoint {
                mmse_ap: p.mmse_ext,
                mmse_ext: p.mmse_ap,
                stderr: p.stderr,
            })
            .collect();
        TransferCurve::new(pts, role, format!("{} (flipped)", self.label))
    }

    /// `mmse_ext` at `mmse_ap = x` by linear interpolation, clamped to the
    /// sampled range.
    pub fn ext_at(&self, x: f64) -> f64 {
        let xs: Vec<f64> = self.points.iter().map(|p| p.mmse_ap.value()).collect();
        let ys: Vec<f64> = self.points.iter().map(|p| p.mmse_ext.value()).collect();
        interp_monotone(&xs, &ys, x)
    }

    /// `mmse_ap` giving `mmse_ext = y`, the inverse of [`ext_at`](Self::ext_at).
    pub fn ap_for_ext(&self, y: f64) -> f64 {
        let xs: Vec<f64> = self.points.iter().map(|p| p.mmse_ext.value()).collect();
        let ys: Vec<f64> = self.points.iter().map(|p| p.mmse_ap.value()).collect();
        interp_monotone(&xs, &ys, y)
    }

    pub fn max_stderr(&self) -> f64 {
        self.points.iter().map(|p| p.stderr).fold(0.0, f64::max)
    }
}

/// Piecewise-linear interpolation over a nonincreasing or nondecreasing
/// abscissa; outside the range the end value is returned.
pub(crate) fn interp_monotone(xs: &[f64], ys: &[f64], x: f64) -> f64 {
    debug_assert_eq!(xs.len(), ys.len());
    let n = xs.len();
    let decreasing = xs[0] > xs[n - 1];
    let key = |v: f64| if decreasing { -v } else { v };
    let kx = key(x);
    if kx <= key(xs[0]) {
        return ys[0];
    }
    if kx >= key(xs[n - 1]) {
        return ys[n - 1];
    }
    let i = xs.partition_point(|&v| key(v) <= kx);
    let (x0, x1, y0, y1) = (xs[i - 1], xs[i], ys[i - 1], ys[i]);
    if x1 == x0 {
        return y0;
    }
    y0 + (y1 - y0) * (x - x0) / (x1 - x0)
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SnrPoint {
    pub gamma: Snr,
    pub mmse: Mmse,
    pub stderr: f64,
}

/// Output MMSE sampled against SNR; the object whose area the rate
/// identities concern.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MmseSnrCurve {
    points: Vec<SnrPoint>,
    tail_rule: TailRule,
}

impl MmseSnrCurve {
    /// Points must have strictly increasing `gamma` and, up to three
    /// standard errors, nonincreasing `mmse`.
    pub fn new(points: Vec<SnrPoint>, tail_rule: TailRule) -> Result<Self> {
        if points.is_empty() {
            return Err(Error::InvalidCurve("empty MMSE curve".into()));
        }
        for (i, w) in points.windows(2).enumerate() {
            if !(w[1].gamma.value() > w[0].gamma.value()) {
                return Err(Error::InvalidCurve(format!(
                    "gamma not strictly increasing at point {}",
                    i + 1
                )));
            }
            if w[1].mmse.value() > w[0].mmse.value() + slack(w[0].stderr, w[1].stderr) {
                return Err(Error::InvalidCurve(format!(
                    "mmse increases at point {}",
                    i + 1
                )));
            }
        }
        if points.iter().any(|p| !(p.stderr >= 0.0)) {
            return Err(Error::InvalidCurve("negative or NaN standard error".into()));
        }
        Ok(MmseSnrCurve { points, tail_rule })
    }

    /// `f` sampled on `grid` (strictly increasing).
    pub fn analytic(grid: &[f64], f: impl Fn(f64) -> f64, tail_rule: TailRule) -> Result<Self> {
        let points = grid
            .iter()
            .map(|&g| {
                Ok(SnrPoint {
                    gamma: Snr::new(g)?,
                    mmse: Mmse::saturating(f(g)),
                    stderr: 0.0,
                })
            })
            .collect::<Result<Vec<_>>>()?;
        MmseSnrCurve::new(points, tail_rule)
    }

    /// Measured output MMSE of transfer points against their a-priori SNR.
    pub fn from_points(points: &[TransferPoint], tail_rule: TailRule) -> Result<Self> {
        let pts = points
            .iter()
            .map(|p| SnrPoint {
                gamma: p.gamma_ap,
                mmse: p.mmse_out,
                stderr: p.stderr_out,
            })
            .collect();
        MmseSnrCurve::new(pts, tail_rule)
    }

    pub fn points(&self) -> &[SnrPoint] {
        &self.points
    }

    pub fn tail_rule(&self) -> TailRule {
        self.tail_rule
    }

    pub fn gammas(&self) -> Vec<f64> {
        self.points.iter().map(|p| p.gamma.value()).collect()
    }

    pub fn mmses(&self) -> Vec<f64> {
        self.points.iter().map(|p| p.mmse.value()).collect()
    }
}

/// Re-plot a transfer curve as output MMSE against SNR, assuming Gaussian
/// messages: a point `(a, e)` has a-priori SNR `φ⁻¹(a)`, extrinsic SNR
/// `φ⁻¹(e)` and output MMSE `φ(φ⁻¹(a) + φ⁻¹(e))`.
///
/// On the extrinsic axis points that do not advance the extrinsic SNR are
/// dropped; on either axis points at infinite SNR are left to the tail.
pub fn to_mmse_vs_snr(curve: &TransferCurve, axis: Axis) -> Result<MmseSnrCurve> {
    let mut pts: Vec<SnrPoint> = Vec::with_capacity(curve.points.len());
    for p in &curve.points {
        let ga = phi_inverse_raw(p.mmse_ap.value());
        let ge = phi_inverse_raw(p.mmse_ext.value());
        let x = match axis {
            Axis::APriori => ga,
            Axis::Extrinsic => ge,
        };
        if !x.is_finite() {
            continue;
        }
        if let Some(last) = pts.last() {
            if x <= last.gamma.value() {
                continue;
            }
        }
        pts.push(SnrPoint {
            gamma: Snr::new(x)?,
            mmse: Mmse::saturating(phi_half(ga + ge)),
            stderr: 0.0,
        });
    }
    if pts.len() < 2 {
        return Err(Error::InvalidCurve(format!(
            "fewer than 2 points with finite {} SNR",
            match axis {
                Axis::APriori => "a-priori",
                Axis::Extrinsic => "extrinsic",
            }
        )));
    }
    MmseSnrCurve::new(pts, TailRule::AnalyticTail)
}

/// Mutual-information chart of the same decoder.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ExitCurve {
    /// `(i_ap, i_ext)` in bits.
    pub points: Vec<(f64, f64)>,
}

/// Map both coordinates through `I₂(φ⁻¹(·))`; zero MMSE maps to one bit.
pub fn exit_curve_from_mse(curve: &TransferCurve) -> ExitCurve {
    let info = |m: Mmse| {
        let g = phi_inverse_raw(m.value());
        if g.is_infinite() {
            1.0
        } else {
            mutual_info_half(g)
        }
    };
    ExitCurve {
        points: curve
            .points
            .iter()
            .map(|p| (info(p.mmse_ap), info(p.mmse_ext)))
            .collect(),
    }
}
