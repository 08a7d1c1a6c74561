use rand::Rng;
use rand_distr::StandardNormal;
use serde::{Deserialize, Serialize};

use crate::awgn::ensemble::{tanh2_half, Moments};
use crate::awgn::{Mmse, Snr};
use crate::error::{Error, Result};
use crate::rng::{self, Op};

use super::{ConvCodeSpec, InnerChannelSpec, TransferPoint, Trellis};

/// Smallest Monte-Carlo sample count accepted for check nodes.
pub const MIN_CHECK_SAMPLES: usize = 10_000;

/// `L = 2γx + 2√γ·z`: the LLR of `x` seen at SNR `γ`.
fn channel_llr<R: Rng>(rng: &mut R, g: f64, x: f64) -> f64 {
    let z: f64 = rng.sample(StandardNormal);
    2.0 * g * x + 2.0 * g.sqrt() * z
}

/// Monte-Carlo transfer point of a degree-`degree` check node at a-priori
/// SNR `gamma_ap`.
///
/// Each sample draws a random even-parity word, observes every bit at
/// `gamma_ap`, forms the extrinsic LLR of one bit with the tanh rule and
/// scores it alone and combined with that bit's own a-priori LLR.
pub fn check_node_transfer(
    degree: u32,
    gamma_ap: Snr,
    n_samples: usize,
    seed: u64,
) -> Result<TransferPoint> {
    if degree < 2 {
        return Err(Error::InvalidCode(format!("check degree {degree} below 2")));
    }
    if n_samples < MIN_CHECK_SAMPLES {
        return Err(Error::domain(format!(
            "{n_samples} samples is below the minimum {MIN_CHECK_SAMPLES}"
        )));
    }
    let g = gamma_ap.value();
    let parts = rng::map_chunks(rng::chunks(n_samples).collect(), |(c, _, len)| {
        let mut r = rng::stream(seed, Op::CheckNode, c);
        let mut ext = Moments::default();
        let mut out = Moments::default();
        for _ in 0..len {
            let mut prod = 1.0;
            let mut x0 = 1.0;
            for _ in 1..degree {
                let x = if r.random::<bool>() { 1.0 } else { -1.0 };
                x0 *= x;
                prod *= (0.5 * channel_llr(&mut r, g, x)).tanh();
            }
            let l_ap = channel_llr(&mut r, g, x0);
            let l_ext = 2.0 * prod.atanh();
            ext.push(prod * prod);
            out.push(tanh2_half(l_ap + l_ext));
        }
        (ext, out)
    });
    let (mut ext, mut out) = (Moments::default(), Moments::default());
    for (e, o) in &parts {
        ext.merge(e);
        out.merge(o);
    }
    let (e, o) = (ext.estimate(), out.estimate());
    Ok(TransferPoint {
        gamma_ap,
        mmse_ext: Mmse::saturating(1.0 - e.value),
        mmse_out: Mmse::saturating(1.0 - o.value),
        stderr: e.stderr,
        stderr_out: o.stderr,
    })
}

/// Which bits of a convolutional code receive the a-priori input and are
/// scored.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "role", rename_all = "snake_case")]
pub enum ConvRole {
    /// A-priori LLRs on the coded bits; the coded bits are scored.
    Outer,
    /// A-priori LLRs on the info bits, coded bits seen through `channel`;
    /// the info bits are scored.
    Inner { channel: InnerChannelSpec },
}

/// Block simulation budget.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct McBudget {
    pub block_len: usize,
    pub n_blocks: usize,
    pub seed: u64,
}

impl McBudget {
    /// 50 blocks of 10⁴ info bits: 10⁶ scored coded bits for a rate-1/2
    /// outer code.
    pub const fn standard(seed: u64) -> Self {
        McBudget {
            block_len: 10_000,
            n_blocks: 50,
            seed,
        }
    }
}

/// Monte-Carlo transfer point of a convolutional code decoded by BCJR.
///
/// Standard errors are batch means over blocks, which accounts for the
/// correlation of extrinsic LLRs inside a block. With a single block they
/// fall back to the per-bit estimate.
pub fn conv_transfer_point(
    code: &ConvCodeSpec,
    role: ConvRole,
    gamma_ap: Snr,
    budget: McBudget,
) -> Result<TransferPoint> {
    if budget.block_len == 0 || budget.n_blocks == 0 {
        return Err(Error::domain(
            "block length and block count must be positive",
        ));
    }
    let ch = match role {
        ConvRole::Outer => None,
        ConvRole::Inner { channel } => Some(channel.gaussian_snr("conv_transfer_point")?),
    };
    let trellis = Trellis::new(code);
    let k = budget.block_len;
    let g = gamma_ap.value();
    let blocks: Vec<(u64, usize, usize)> = (0..budget.n_blocks).map(|b| (b as u64, 0, k)).collect();
    let parts = rng::map_chunks(blocks, |(b, _, _)| -> Result<(Moments, Moments)> {
        let mut r = rng::stream(budget.seed, Op::ConvBlock, b);
        let info: Vec<u8> = (0..k).map(|_| r.random::<bool>() as u8).collect();
        let coded = trellis.encode(&info);
        let sym = |bit: u8| if bit == 0 { 1.0 } else { -1.0 };
        let mut ext = Moments::default();
        let mut out = Moments::default();
        match ch {
            None => {
                let coded_ap: Vec<f64> = coded
                    .iter()
                    .map(|&c| channel_llr(&mut r, g, sym(c)))
                    .collect();
                let app = trellis.app(&vec![0.0; k], &coded_ap)?;
                for (la, le) in coded_ap.iter().zip(&app.coded_ext) {
                    ext.push(tanh2_half(*le));
                    out.push(tanh2_half(la + le));
                }
            }
            Some(s) => {
                let info_ap: Vec<f64> = info
                    .iter()
                    .map(|&u| channel_llr(&mut r, g, sym(u)))
                    .collect();
                let coded_ch: Vec<f64> = coded
                    .iter()
                    .map(|&c| channel_llr(&mut r, s, sym(c)))
                    .collect();
                let app = trellis.app(&info_ap, &coded_ch)?;
                for (la, le) in info_ap.iter().zip(&app.info_ext) {
                    ext.push(tanh2_half(*le));
                    out.push(tanh2_half(la + le));
                }
            }
        }
        Ok((ext, out))
    });
    let parts = parts.into_iter().collect::<Result<Vec<_>>>()?;
    let (ext, se_ext) = pooled(parts.iter().map(|p| &p.0));
    let (out, se_out) = pooled(parts.iter().map(|p| &p.1));
    Ok(TransferPoint {
        gamma_ap,
        mmse_ext: Mmse::saturating(1.0 - ext),
        mmse_out: Mmse::saturating(1.0 - out),
        stderr: se_ext,
        stderr_out: se_out,
    })
}

/// Pooled mean of equal-size batches with a batch-means standard error.
fn pooled<'a>(batches: impl Iterator<Item = &'a Moments>) -> (f64, f64) {
    let mut all = Moments::default();
    let mut means = Moments::default();
    let mut count = 0;
    for b in batches {
        all.merge(b);
        means.push(b.estimate().value);
        count += 1;
    }
    let total = all.estimate();
    let se = if count > 1 {
        means.estimate().stderr
    } else {
        total.stderr
    };
    (total.value, se)
}
