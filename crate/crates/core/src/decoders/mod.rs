//! Transfer points of component decoders.
//!
//! Repetition codes, LDPC variable nodes and uncoded channels have closed
//! forms in terms of [`phi`](crate::awgn::phi). Check nodes and
//! convolutional codes are simulated: consistent Gaussian a-priori LLRs go
//! in, exact APP extrinsic LLRs come out, and the MMSE is `1 − E[tanh²]`.

mod analytic;
mod brute;
mod conv;
mod montecarlo;
mod profile;

pub use analytic::{check_node_ext_mmse, repetition_transfer, uncoded_inner_curve, vnd_transfer};
pub use brute::{brute_force_app, trellis_codebook, MAX_BRUTE_CODEBOOK, MAX_BRUTE_LEN};
pub use conv::{AppOutput, ConvCodeSpec, Termination, Trellis, MAX_MEMORY};
pub use montecarlo::{
    check_node_transfer, conv_transfer_point, ConvRole, McBudget, MIN_CHECK_SAMPLES,
};
pub use profile::DegreeProfile;

use serde::{Deserialize, Serialize};

use crate::awgn::{Mmse, Snr};
use crate::error::{Error, Result};

/// MMSEs of one decoder at one a-priori SNR.
///
/// `mmse_ext` is measured on the extrinsic LLR alone, `mmse_out` on
/// `L_ap + L_ext`. Analytic points carry zero standard errors.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct TransferPoint {
    pub gamma_ap: Snr,
    pub mmse_ext: Mmse,
    pub mmse_out: Mmse,
    pub stderr: f64,
    pub stderr_out: f64,
}

impl TransferPoint {
    pub fn analytic(gamma_ap: Snr, mmse_ext: f64, mmse_out: f64) -> Self {
        TransferPoint {
            gamma_ap,
            mmse_ext: Mmse::saturating(mmse_ext),
            mmse_out: Mmse::saturating(mmse_out),
            stderr: 0.0,
            stderr_out: 0.0,
        }
    }
}

/// Observation of the coded bits besides the a-priori input.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "RawChannel", into = "RawChannel")]
pub enum InnerChannelSpec {
    Awgn { snr: Snr },
    Erasure { epsilon: f64 },
    None,
}

#[derive(Debug, Clone, Copy, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case", deny_unknown_fields)]
enum RawChannel {
    Awgn { snr: Snr },
    Erasure { epsilon: f64 },
    None,
}

impl InnerChannelSpec {
    pub fn awgn(snr: Snr) -> Self {
        InnerChannelSpec::Awgn { snr }
    }

    pub fn erasure(epsilon: f64) -> Result<Self> {
        if !(0.0..=1.0).contains(&epsilon) {
            return Err(Error::domain(format!(
                "erasure probability {epsilon} outside [0, 1]"
            )));
        }
        Ok(InnerChannelSpec::Erasure { epsilon })
    }

    /// SNR of an AWGN channel, `0` for no channel, error for erasures.
    pub(crate) fn gaussian_snr(&self, what: &str) -> Result<f64> {
        match *self {
            InnerChannelSpec::Awgn { snr } => Ok(snr.value()),
            InnerChannelSpec::None => Ok(0.0),
            InnerChannelSpec::Erasure { .. } => Err(Error::domain(format!(
                "{what} supports awgn or none channels; erasure is analytic only"
            ))),
        }
    }
}

impl TryFrom<RawChannel> for InnerChannelSpec {
    type Error = Error;
    fn try_from(r: RawChannel) -> Result<Self> {
        Ok(match r {
            RawChannel::Awgn { snr } => InnerChannelSpec::Awgn { snr },
            RawChannel::Erasure { epsilon } => InnerChannelSpec::erasure(epsilon)?,
            RawChannel::None => InnerChannelSpec::None,
        })
    }
}

impl From<InnerChannelSpec> for RawChannel {
    fn from(c: InnerChannelSpec) -> Self {
        match c {
            InnerChannelSpec::Awgn { snr } => RawChannel::Awgn { snr },
            InnerChannelSpec::Erasure { epsilon } => RawChannel::Erasure { epsilon },
            InnerChannelSpec::None => RawChannel::None,
        }
    }
}

/// Extrinsic LLRs of one block of `code` given a-priori LLRs on the info
/// bits and channel outputs `y = √snr·x + n` for every coded bit.
///
/// With no channel `noisy_obs` must be empty or all zeros of the coded length.
pub fn bcjr_extrinsic(
    code: &ConvCodeSpec,
    channel: &InnerChannelSpec,
    llr_ap: &[f64],
    noisy_obs: &[f64],
) -> Result<AppOutput> {
    let snr = channel.gaussian_snr("bcjr_extrinsic")?;
    let trellis = Trellis::new(code);
    let n = trellis.coded_len(llr_ap.len());
    let coded_ap: Vec<f64> = match channel {
        InnerChannelSpec::None if noisy_obs.is_empty() => vec![0.0; n],
        _ => {
            if noisy_obs.len() != n {
                return Err(Error::LengthMismatch {
                    what: "channel observations",
                    expected: n,
                    actual: noisy_obs.len(),
                });
            }
            let scale = 2.0 * snr.sqrt();
            noisy_obs.iter().map(|&y| scale * y).collect()
        }
    };
    trellis.app(llr_ap, &coded_ap)
}
