use crate::error::{Error, Result};

use super::conv::{clamp_llr, max_star};

/// Longest codeword accepted by [`brute_force_app`].
pub const MAX_BRUTE_LEN: usize = 64;
/// Largest codebook accepted by [`brute_force_app`].
pub const MAX_BRUTE_CODEBOOK: usize = 1 << 16;

/// Exact extrinsic LLRs by enumerating `codebook` (rows of ±1 symbols).
///
/// Inputs are clamped to `±LLR_SATURATION`. A bit that takes one value in
/// every codeword gets an infinite extrinsic LLR of that sign.
pub fn brute_force_app(codebook: &[Vec<i8>], llr_in: &[f64]) -> Result<Vec<f64>> {
    let first = codebook
        .first()
        .ok_or_else(|| Error::InvalidCode("empty codebook".into()))?;
    let n = first.len();
    if n == 0 || n > MAX_BRUTE_LEN {
        return Err(Error::InvalidCode(format!(
            "codeword length {n} outside 1..={MAX_BRUTE_LEN}"
        )));
    }
    if codebook.len() > MAX_BRUTE_CODEBOOK {
        return Err(Error::InvalidCode(format!(
            "codebook of {} words exceeds {MAX_BRUTE_CODEBOOK}",
            codebook.len()
        )));
    }
    if llr_in.len() != n {
        return Err(Error::LengthMismatch {
            what: "llr_in",
            expected: n,
            actual: llr_in.len(),
        });
    }
    if llr_in.iter().any(|l| l.is_nan()) {
        return Err(Error::domain("NaN LLR input"));
    }
    for c in codebook {
        if c.len() != n {
            return Err(Error::LengthMismatch {
                what: "codeword",
                expected: n,
                actual: c.len(),
            });
        }
        if c.iter().any(|&x| x != 1 && x != -1) {
            return Err(Error::InvalidCode("codeword symbols must be ±1".into()));
        }
    }
    let half: Vec<f64> = llr_in.iter().map(|&l| 0.5 * clamp_llr(l)).collect();
    let mut acc = vec![[f64::NEG_INFINITY; 2]; n];
    for c in codebook {
        for k in 0..n {
            let m: f64 = (0..n)
                .filter(|&j| j != k)
                .map(|j| c[j] as f64 * half[j])
                .sum();
            let slot = usize::from(c[k] < 0);
            acc[k][slot] = max_star(acc[k][slot], m);
        }
    }
    Ok(acc
        .iter()
        .map(|a| match (a[0].is_finite(), a[1].is_finite()) {
            (true, true) => a[0] - a[1],
            (true, false) => f64::INFINITY,
            _ => f64::NEG_INFINITY,
        })
        .collect())
}

/// All codewords of a [`Trellis`](super::Trellis) block of `k` info bits as
/// `[info ‖ coded]` symbol rows.
pub fn trellis_codebook(trellis: &super::Trellis, k: usize) -> Result<Vec<Vec<i8>>> {
    if k >= 17 || 1usize << k > MAX_BRUTE_CODEBOOK {
        return Err(Error::InvalidCode(format!("2^{k} codewords is too many")));
    }
    let sym = |b: u8| if b == 0 { 1i8 } else { -1 };
    Ok((0..1u32 << k)
        .map(|w| {
            let info: Vec<u8> = (0..k).map(|i| (w >> i & 1) as u8).collect();
            let coded = trellis.encode(&info);
            info.iter().chain(&coded).map(|&b| sym(b)).collect()
        })
        .collect())
}
