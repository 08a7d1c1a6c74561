use serde::{Deserialize, Serialize};

use crate::awgn::{db_to_linear, phi_half, phi_inverse_raw, Mmse, Snr};
use crate::decoders::{DegreeProfile, InnerChannelSpec};
use crate::error::{Error, Result};

use super::build::{check_node_curve, vnd_curve};
use super::TransferCurve;

pub const DEFAULT_MAX_ITER: usize = 500;
pub const DEFAULT_TOL: f64 = 1e-6;

/// Inner and outer transfer curves of one iterative decoder.
///
/// Both are compared on the SNR `u` of the messages the inner decoder sends
/// to the outer one: the inner decoder produces `u` from an a-priori SNR
/// `v_in(u)`, the outer decoder turns `u` into `v_out(u)`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ChartPair {
    pub inner: TransferCurve,
    pub outer: TransferCurve,
    pub channel: InnerChannelSpec,
}

/// Variable nodes (inner, with the channel) against check nodes (outer).
pub fn ldpc_chart_pair(
    profile: &DegreeProfile,
    channel_snr: Snr,
    grid: &[f64],
) -> Result<ChartPair> {
    let channel = InnerChannelSpec::awgn(channel_snr);
    Ok(ChartPair {
        inner: vnd_curve(profile, &channel, grid)?,
        outer: check_node_curve(profile, grid)?,
        channel,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct GapPoint {
    /// Inner-to-outer message SNR.
    pub u: f64,
    /// `φ(u + v_in(u))`.
    pub inner: f64,
    /// `φ(u + v_out(u))`.
    pub outer: f64,
    pub gap: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MatchingGap {
    pub min_gap: f64,
    pub max_gap: f64,
    /// The gap takes both signs beyond `tolerance`.
    pub crossing: bool,
    pub tolerance: f64,
    pub gap_curve: Vec<GapPoint>,
}

/// Output MMSEs of both decoders along the shared message axis.
///
/// A positive gap means the outer decoder returns more than the inner one
/// needs to reach `u`, so iterations pass through that point.
pub fn matching_gap(pair: &ChartPair) -> Result<MatchingGap> {
    let inner_u: Vec<f64> = pair
        .inner
        .points()
        .iter()
        .map(|p| phi_inverse_raw(p.mmse_ext.value()))
        .collect();
    let outer_u: Vec<f64> = pair
        .outer
        .points()
        .iter()
        .map(|p| phi_inverse_raw(p.mmse_ap.value()))
        .collect();
    let span = |v: &[f64]| {
        let f: Vec<f64> = v.iter().copied().filter(|x| x.is_finite()).collect();
        (
            f.iter().copied().fold(f64::INFINITY, f64::min),
            f.iter().copied().fold(f64::NEG_INFINITY, f64::max),
        )
    };
    let (a0, a1) = span(&inner_u);
    let (b0, b1) = span(&outer_u);
    let (lo, hi) = (a0.max(b0), a1.min(b1));
    if !(lo < hi) {
        return Err(Error::InvalidCurve(
            "inner and outer curves do not overlap on the message axis".into(),
        ));
    }
    let mut grid: Vec<f64> = inner_u
        .iter()
        .chain(&outer_u)
        .copied()
        .filter(|&u| u >= lo && u <= hi)
        .collect();
    grid.sort_by(f64::total_cmp);
    grid.dedup();

    let tolerance = 1e-9 + 3.0 * (pair.inner.max_stderr() + pair.outer.max_stderr());
    let gap_curve: Vec<GapPoint> = grid
        .into_iter()
        .map(|u| {
            let m = phi_half(u);
            let v_in = phi_inverse_raw(pair.inner.ap_for_ext(m));
            let v_out = phi_inverse_raw(pair.outer.ext_at(m));
            let inner = phi_half(u + v_in);
            let outer = phi_half(u + v_out);
            GapPoint {
                u,
                inner,
                outer,
                gap: inner - outer,
            }
        })
        .collect();
    let min_gap = gap_curve
        .iter()
        .map(|p| p.gap)
        .fold(f64::INFINITY, f64::min);
    let max_gap = gap_curve
        .iter()
        .map(|p| p.gap)
        .fold(f64::NEG_INFINITY, f64::max);
    Ok(MatchingGap {
        min_gap,
        max_gap,
        crossing: min_gap < -tolerance && max_gap > tolerance,
        tolerance,
        gap_curve,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct TrajectoryStep {
    pub iteration: usize,
    /// Variable-to-check message MMSE entering the check nodes.
    pub x: Mmse,
    /// Check-to-variable message MMSE they return.
    pub y: Mmse,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Trajectory {
    pub steps: Vec<TrajectoryStep>,
    pub converged: bool,
    pub iterations_used: usize,
    /// Variable-to-check MMSE after the last iteration.
    pub final_mmse: f64,
}

fn check_side(profile: &DegreeProfile, u: f64) -> f64 {
    let keep = 1.0 - phi_half(u);
    profile
        .rho()
        .iter()
        .map(|(&d, &f)| f * (1.0 - keep.powi(d as i32 - 1)))
        .sum()
}

fn variable_side(profile: &DegreeProfile, v: f64, ch: f64) -> f64 {
    profile
        .lambda()
        .iter()
        .map(|(&i, &f)| f * phi_half((i - 1) as f64 * v + ch))
        .sum()
}

/// Message-SNR recursion of belief propagation with Gaussian messages.
///
/// Each iteration maps the variable-to-check SNR `u` through the check
/// nodes, `v = φ⁻¹(Σ ρⱼ·(1 − (1 − φ(u))^(j−1)))`, and back through the
/// variable nodes, `u' = φ⁻¹(Σ λᵢ·φ((i−1)·v + γ_ch))`. Stops when `φ(u')`
/// reaches `tol`, stops making progress, or after `max_iter` iterations.
pub fn trajectory(
    profile: &DegreeProfile,
    channel_snr: Snr,
    max_iter: usize,
    tol: f64,
) -> Result<Trajectory> {
    if !(tol > 0.0 && tol < 1.0) {
        return Err(Error::domain(format!("tolerance {tol} outside (0, 1)")));
    }
    let ch = channel_snr.value();
    let mut x = variable_side(profile, 0.0, ch);
    let mut steps = Vec::new();
    for it in 1..=max_iter {
        let u = phi_inverse_raw(x);
        let y = check_side(profile, u);
        let v = phi_inverse_raw(y);
        let x_next = variable_side(profile, v, ch);
        steps.push(TrajectoryStep {
            iteration: it,
            x: Mmse::saturating(x),
            y: Mmse::saturating(y),
        });
        if x_next > x + 1e-12 {
            return Err(Error::NonMonotone {
                iteration: it,
                mmse: x_next,
            });
        }
        if x_next <= tol {
            return Ok(Trajectory {
                steps,
                converged: true,
                iterations_used: it,
                final_mmse: x_next,
            });
        }
        if x - x_next <= 1e-13 {
            return Ok(Trajectory {
                steps,
                converged: false,
                iterations_used: it,
                final_mmse: x_next,
            });
        }
        x = x_next;
    }
    Ok(Trajectory {
        steps,
        converged: false,
        iterations_used: max_iter,
        final_mmse: x,
    })
}

/// Channel SNR `γ = 2R·Eb/N0` for an ensemble of design rate `R`.
pub fn channel_snr_from_ebno(profile: &DegreeProfile, ebno_db: f64) -> Result<Snr> {
    Snr::new(2.0 * profile.design_rate() * db_to_linear(ebno_db))
}

/// [`threshold_with`] at the default iteration budget and tolerance.
pub fn threshold(profile: &DegreeProfile, lo_db: f64, hi_db: f64, tol_db: f64) -> Result<f64> {
    threshold_with(profile, lo_db, hi_db, tol_db, DEFAULT_MAX_ITER, DEFAULT_TOL)
}

/// Smallest `Eb/N0` in dB at which [`trajectory`] converges, by bisection
/// to `tol_db`. The recursion must fail at `lo_db` and succeed at `hi_db`.
pub fn threshold_with(
    profile: &DegreeProfile,
    lo_db: f64,
    hi_db: f64,
    tol_db: f64,
    max_iter: usize,
    tol: f64,
) -> Result<f64> {
    let bracket = |reason: &str| Error::Bracket {
        lo_db,
        hi_db,
        reason: reason.into(),
    };
    if !(tol_db > 0.0) || !(lo_db < hi_db) {
        return Err(bracket("need lo_db < hi_db and a positive tolerance"));
    }
    if profile.design_rate() <= 0.0 {
        return Err(bracket("a rate-0 ensemble has no finite threshold"));
    }
    let ok = |db: f64| -> Result<bool> {
        Ok(trajectory(profile, channel_snr_from_ebno(profile, db)?, max_iter, tol)?.converged)
    };
    if ok(lo_db)? {
        return Err(bracket("decoding already converges at the lower end"));
    }
    if !ok(hi_db)? {
        return Err(bracket("decoding does not converge at the upper end"));
    }
    let (mut lo, mut hi) = (lo_db, hi_db);
    while hi - lo > tol_db {
        let mid = 0.5 * (lo + hi);
        if ok(mid)? {
            hi = mid;
        } else {
            lo = mid;
        }
    }
    Ok(0.5 * (lo + hi))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::charts::{log_grid, repetition_curve, Role};

    #[test]
    fn flipped_partner_has_zero_gap() {
        let grid = log_grid(1e-2, 30.0, 40);
        let inner = repetition_curve(3, &grid, Role::Inner).unwrap();
        let outer = inner.flipped(Role::Outer).unwrap();
        let pair = ChartPair {
            inner,
            outer,
            channel: InnerChannelSpec::None,
        };
        let g = matching_gap(&pair).unwrap();
        assert!(g.min_gap.abs() < 1e-9 && g.max_gap.abs() < 1e-9, "{g:?}");
        assert!(!g.crossing);
    }

    #[test]
    fn no_channel_no_progress() {
        let p = DegreeProfile::regular(3, 6).unwrap();
        let t = trajectory(&p, Snr::ZERO, 50, DEFAULT_TOL).unwrap();
        assert!(!t.converged);
        assert_eq!(t.final_mmse, 1.0);
    }

    #[test]
    fn noiseless_channel_converges_at_once() {
        let p = DegreeProfile::regular(3, 6).unwrap();
        let t = trajectory(&p, Snr::new(1e6).unwrap(), 50, DEFAULT_TOL).unwrap();
        assert!(t.converged);
        assert_eq!(t.iterations_used, 1);
    }

    #[test]
    fn trajectory_is_monotone() {
        let p = DegreeProfile::regular(3, 6).unwrap();
        let t = trajectory(
            &p,
            channel_snr_from_ebno(&p, 1.5).unwrap(),
            500,
            DEFAULT_TOL,
        )
        .unwrap();
        assert!(t.converged);
        for w in t.steps.windows(2) {
            assert!(w[1].x.value() <= w[0].x.value());
            assert!(w[1].y.value() <= w[0].y.value());
        }
    }

    #[test]
    fn rate_zero_has_no_threshold() {
        let p = DegreeProfile::regular(2, 2).unwrap();
        assert!(matches!(
            threshold(&p, -5.0, 20.0, 0.01),
            Err(Error::Bracket { .. })
        ));
    }
}
