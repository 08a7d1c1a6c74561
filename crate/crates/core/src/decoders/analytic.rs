use crate::awgn::{phi_half, Mmse, Snr};
use crate::charts::{MmseSnrCurve, SnrPoint, TailRule};
use crate::error::{Error, Result};

use super::{DegreeProfile, InnerChannelSpec, TransferPoint};

/// Repetition code of length `n`: the other `n − 1` copies add their SNRs.
pub fn repetition_transfer(n: u32, gamma_ap: Snr) -> Result<TransferPoint> {
    if n == 0 {
        return Err(Error::InvalidCode(
            "repetition length must be at least 1".into(),
        ));
    }
    let g = gamma_ap.value();
    Ok(TransferPoint::analytic(
        gamma_ap,
        phi_half((n - 1) as f64 * g),
        phi_half(n as f64 * g),
    ))
}

/// Extrinsic MMSE of a degree-`degree` check node fed consistent Gaussian
/// LLRs at SNR `gamma_ap`.
///
/// `tanh(L_ext/2)` is the product of the independent incoming `tanh(Lⱼ/2)`,
/// so `E[tanh²(L_ext/2)] = (1 − φ(γ))^(degree−1)` with no approximation.
pub fn check_node_ext_mmse(degree: u32, gamma_ap: Snr) -> Result<Mmse> {
    if degree < 2 {
        return Err(Error::InvalidCode(format!("check degree {degree} below 2")));
    }
    Ok(Mmse::saturating(check_mmse_raw(degree, gamma_ap.value())))
}

pub(crate) fn check_mmse_raw(degree: u32, g: f64) -> f64 {
    let keep = 1.0 - phi_half(g);
    1.0 - keep.powi(degree as i32 - 1)
}

/// Variable-node side of an LDPC ensemble: a degree-`i` node sees `i − 1`
/// other edges at `gamma_ap` plus the channel.
pub fn vnd_transfer(
    profile: &DegreeProfile,
    channel: &InnerChannelSpec,
    gamma_ap: Snr,
) -> Result<TransferPoint> {
    let ch = channel.gaussian_snr("vnd_transfer")?;
    let g = gamma_ap.value();
    let mut ext = 0.0;
    let mut out = 0.0;
    for (&i, &f) in profile.lambda() {
        ext += f * phi_half((i - 1) as f64 * g + ch);
        out += f * phi_half(i as f64 * g + ch);
    }
    Ok(TransferPoint::analytic(gamma_ap, ext, out))
}

/// Output MMSE of a memoryless channel seen alongside an a-priori
/// observation at SNR `γ`, sampled on `grid`.
pub fn uncoded_inner_curve(channel: &InnerChannelSpec, grid: &[Snr]) -> Result<MmseSnrCurve> {
    let f: Box<dyn Fn(f64) -> f64> = match *channel {
        InnerChannelSpec::Awgn { snr } => {
            let s = snr.value();
            Box::new(move |g| phi_half(g + s))
        }
        InnerChannelSpec::Erasure { epsilon } => Box::new(move |g| epsilon * phi_half(g)),
        InnerChannelSpec::None => Box::new(phi_half),
    };
    let points = grid
        .iter()
        .map(|&gamma| SnrPoint {
            gamma,
            mmse: Mmse::saturating(f(gamma.value())),
            stderr: 0.0,
        })
        .collect();
    MmseSnrCurve::new(points, TailRule::AnalyticTail)
}
