//! Named codes and ensembles.
//!
//! | name                 | code                                              |
//! |----------------------|---------------------------------------------------|
//! | `rep-N`              | repetition code of length `N`                     |
//! | `spc-n`              | single parity check of length `n`                 |
//! | `conv-5-7`           | `(5,7)₈` feedforward, memory 2, terminated        |
//! | `conv-23-35`         | `(23,35)₈` feedforward, memory 4, terminated      |
//! | `regular-3-6`        | `(3,6)` regular LDPC ensemble                     |
//! | `designed-ldpc-05db` | `λ₂=.254, λ₄=.419, λ₁₈=.327`, all checks degree 8 |
//!
//! The designed ensemble's check side is fixed by its rate: with the listed
//! variable side `Σ λᵢ/i ≈ 0.2499`, a single check degree giving rate 1/2
//! is 8.

use std::fmt;
use std::str::FromStr;

use crate::decoders::{ConvCodeSpec, DegreeProfile, Termination};
use crate::error::{Error, Result};

#[derive(Debug, Clone, PartialEq)]
pub enum CodePreset {
    Repetition(u32),
    Spc(u32),
    Conv(ConvCodeSpec),
    Ldpc(DegreeProfile),
}

pub const NAMES: [&str; 6] = [
    "rep-N",
    "spc-n",
    "conv-5-7",
    "conv-23-35",
    "regular-3-6",
    "designed-ldpc-05db",
];

pub fn designed_profile() -> DegreeProfile {
    DegreeProfile::from_pairs(&[(2, 0.254), (4, 0.419), (18, 0.327)], &[(8, 1.0)])
        .expect("designed profile is valid")
}

impl CodePreset {
    /// Rate of the code, asymptotic in the block length for trellis codes.
    pub fn rate(&self) -> f64 {
        match self {
            CodePreset::Repetition(n) => 1.0 / *n as f64,
            CodePreset::Spc(n) => (*n - 1) as f64 / *n as f64,
            CodePreset::Conv(c) => 1.0 / c.feedforward().len() as f64,
            CodePreset::Ldpc(p) => p.design_rate(),
        }
    }

    pub fn is_simulated(&self) -> bool {
        matches!(self, CodePreset::Spc(_) | CodePreset::Conv(_))
    }
}

impl FromStr for CodePreset {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let unknown = || {
            Error::InvalidCode(format!(
                "unknown code `{s}`; expected one of {}",
                NAMES.join(", ")
            ))
        };
        let count = |t: &str, min: u32| -> Result<u32> {
            let n: u32 = t.parse().map_err(|_| unknown())?;
            if n < min {
                return Err(Error::InvalidCode(format!(
                    "`{s}`: length must be at least {min}"
                )));
            }
            Ok(n)
        };
        if let Some(t) = s.strip_prefix("rep-") {
            return Ok(CodePreset::Repetition(count(t, 1)?));
        }
        if let Some(t) = s.strip_prefix("spc-") {
            return Ok(CodePreset::Spc(count(t, 2)?));
        }
        Ok(match s {
            "conv-5-7" => CodePreset::Conv(ConvCodeSpec::from_octal(
                &["5", "7"],
                None,
                Termination::Terminated,
            )?),
            "conv-23-35" => CodePreset::Conv(ConvCodeSpec::from_octal(
                &["23", "35"],
                None,
                Termination::Terminated,
            )?),
            "regular-3-6" => CodePreset::Ldpc(DegreeProfile::regular(3, 6)?),
            "designed-ldpc-05db" => CodePreset::Ldpc(designed_profile()),
            _ => return Err(unknown()),
        })
    }
}

impl fmt::Display for CodePreset {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CodePreset::Repetition(n) => write!(f, "rep-{n}"),
            CodePreset::Spc(n) => write!(f, "spc-{n}"),
            CodePreset::Conv(c) => write!(f, "conv {}", c.label()),
            CodePreset::Ldpc(p) => write!(f, "ldpc rate {:.4}", p.design_rate()),
        }
    }
}
