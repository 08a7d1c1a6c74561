use serde::{Deserialize, Serialize};

use crate::awgn::{phi_half, Mmse, Snr};
use crate::decoders::{
    check_node_ext_mmse, check_node_transfer, conv_transfer_point, repetition_transfer,
    vnd_transfer, ConvRole, DegreeProfile, InnerChannelSpec, McBudget, TransferPoint,
};
use crate::error::{Error, Result};

use super::presets::CodePreset;
use super::{CurvePoint, Role, TransferCurve};

/// `n` points from `lo` to `hi`, evenly spaced in `ln γ`.
pub fn log_grid(lo: f64, hi: f64, n: usize) -> Vec<f64> {
    assert!(lo > 0.0 && hi > lo && n >= 2);
    let (a, b) = (lo.ln(), hi.ln());
    (0..n)
        .map(|i| (a + (b - a) * i as f64 / (n - 1) as f64).exp())
        .collect()
}

/// `n` evenly spaced points from `lo` to `hi`.
pub fn linear_grid(lo: f64, hi: f64, n: usize) -> Vec<f64> {
    assert!(hi > lo && n >= 2);
    (0..n)
        .map(|i| lo + (hi - lo) * i as f64 / (n - 1) as f64)
        .collect()
}

/// `γ = 0` followed by 60 log-spaced points on `[10⁻³, 100]`.
pub fn default_grid() -> Vec<f64> {
    let mut g = vec![0.0];
    g.extend(log_grid(1e-3, 100.0, 60));
    g
}

pub fn snr_grid(values: &[f64]) -> Result<Vec<Snr>> {
    values.iter().map(|&v| Snr::new(v)).collect()
}

fn curve_from_fn(
    grid: &[f64],
    f: impl Fn(f64) -> Result<f64>,
    role: Role,
    label: String,
) -> Result<TransferCurve> {
    let pts = grid
        .iter()
        .map(|&g| {
            Ok(CurvePoint {
                mmse_ap: Mmse::saturating(phi_half(g)),
                mmse_ext: Mmse::saturating(f(g)?),
                stderr: 0.0,
            })
        })
        .collect::<Result<Vec<_>>>()?;
    TransferCurve::new(pts, role, label)
}

/// Analytic repetition-`n` transfer curve.
pub fn repetition_curve(n: u32, grid: &[f64], role: Role) -> Result<TransferCurve> {
    curve_from_fn(
        grid,
        |g| Ok(repetition_transfer(n, Snr::new(g)?)?.mmse_ext.value()),
        role,
        format!("rep-{n}"),
    )
}

/// Check-node side of an ensemble, `Σ ρⱼ·(1 − (1 − φ)^(j−1))`.
pub fn check_node_curve(profile: &DegreeProfile, grid: &[f64]) -> Result<TransferCurve> {
    curve_from_fn(
        grid,
        |g| {
            let s = Snr::new(g)?;
            profile
                .rho()
                .iter()
                .map(|(&d, &f)| Ok(f * check_node_ext_mmse(d, s)?.value()))
                .sum()
        },
        Role::Outer,
        "check nodes".into(),
    )
}

/// Variable-node side of an ensemble with the given channel.
pub fn vnd_curve(
    profile: &DegreeProfile,
    channel: &InnerChannelSpec,
    grid: &[f64],
) -> Result<TransferCurve> {
    curve_from_fn(
        grid,
        |g| {
            Ok(vnd_transfer(profile, channel, Snr::new(g)?)?
                .mmse_ext
                .value())
        },
        Role::Inner,
        "variable nodes".into(),
    )
}

/// Sampling budget for simulated transfer points.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct McSettings {
    /// Scored bits per point.
    pub samples: usize,
    pub seed: u64,
    /// Info bits per block for trellis codes.
    pub block_len: usize,
}

impl Default for McSettings {
    fn default() -> Self {
        McSettings {
            samples: 1_000_000,
            seed: 1,
            block_len: 10_000,
        }
    }
}

/// Transfer points of `code` used as an outer code, one per grid SNR.
///
/// Repetition codes are exact; single-parity-check codes and trellis codes
/// are simulated with per-point seeds derived from `mc.seed`.
pub fn outer_points(code: &CodePreset, grid: &[f64], mc: McSettings) -> Result<Vec<TransferPoint>> {
    grid.iter()
        .enumerate()
        .map(|(i, &g)| {
            let s = Snr::new(g)?;
            let seed = mc.seed.wrapping_add(i as u64);
            match code {
                CodePreset::Repetition(n) => repetition_transfer(*n, s),
                CodePreset::Spc(n) => check_node_transfer(*n, s, mc.samples, seed),
                CodePreset::Conv(c) => {
                    let per_block = 2 * (mc.block_len + c.tail_len());
                    let budget = McBudget {
                        block_len: mc.block_len,
                        n_blocks: mc.samples.div_ceil(per_block).max(1),
                        seed,
                    };
                    conv_transfer_point(c, ConvRole::Outer, s, budget)
                }
                CodePreset::Ldpc(_) => Err(Error::InvalidCode(
                    "an LDPC ensemble is a pair of curves; use the chart-pair commands".into(),
                )),
            }
        })
        .collect()
}
