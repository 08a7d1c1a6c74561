//! CSV and JSON forms of curves.
//!
//! CSV files carry a header row: `gamma,mmse,stderr` for MMSE-versus-SNR
//! curves and `mmse_ap,mmse_ext,stderr` for transfer curves. JSON documents
//! wrap the points with a `format_version` and run metadata.

use std::io::{Read, Write};

use serde::{Deserialize, Serialize};

use crate::awgn::{Mmse, Snr};
use crate::error::{Error, Result};

use super::{CurvePoint, MmseSnrCurve, Role, SnrPoint, TailRule, TransferCurve};

pub const FORMAT_VERSION: u32 = 1;

pub const SNR_HEADER: [&str; 3] = ["gamma", "mmse", "stderr"];
pub const TRANSFER_HEADER: [&str; 3] = ["mmse_ap", "mmse_ext", "stderr"];

/// Write rows of numbers under `header`.
pub fn write_rows<W: Write>(
    w: W,
    header: &[&str],
    rows: impl IntoIterator<Item = Vec<f64>>,
) -> Result<()> {
    let mut out = csv::Writer::from_writer(w);
    out.write_record(header)?;
    for row in rows {
        out.write_record(row.iter().map(|v| format!("{v:e}")))?;
    }
    out.flush()?;
    Ok(())
}

/// Read numeric rows, returning the columns named in `want` in that order.
/// Missing columns are reported by name.
pub fn read_columns<R: Read>(r: R, want: &[&str]) -> Result<Vec<Vec<f64>>> {
    let mut rd = csv::ReaderBuilder::new()
        .trim(csv::Trim::All)
        .from_reader(r);
    let headers = rd.headers()?.clone();
    let idx = want
        .iter()
        .map(|name| {
            headers
                .iter()
                .position(|h| h == *name)
                .ok_or_else(|| Error::InvalidCurve(format!("missing column `{name}`")))
        })
        .collect::<Result<Vec<_>>>()?;
    let mut cols = vec![Vec::new(); want.len()];
    for (line, rec) in rd.records().enumerate() {
        let rec = rec?;
        for (c, &i) in idx.iter().enumerate() {
            let field = rec.get(i).unwrap_or("");
            let v: f64 = field.parse().map_err(|_| {
                Error::InvalidCurve(format!(
                    "row {}: `{field}` in column `{}` is not a number",
                    line + 2,
                    want[c]
                ))
            })?;
            cols[c].push(v);
        }
    }
    if cols[0].is_empty() {
        return Err(Error::InvalidCurve("no data rows".into()));
    }
    Ok(cols)
}

pub fn write_snr_csv<W: Write>(curve: &MmseSnrCurve, w: W) -> Result<()> {
    write_rows(
        w,
        &SNR_HEADER,
        curve
            .points()
            .iter()
            .map(|p| vec![p.gamma.value(), p.mmse.value(), p.stderr]),
    )
}

pub fn read_snr_csv<R: Read>(r: R, tail_rule: TailRule) -> Result<MmseSnrCurve> {
    let c = read_columns(r, &SNR_HEADER)?;
    let points = (0..c[0].len())
        .map(|i| {
            Ok(SnrPoint {
                gamma: Snr::new(c[0][i])?,
                mmse: Mmse::new(c[1][i])?,
                stderr: c[2][i],
            })
        })
        .collect::<Result<Vec<_>>>()?;
    MmseSnrCurve::new(points, tail_rule)
}

pub fn write_transfer_csv<W: Write>(curve: &TransferCurve, w: W) -> Result<()> {
    write_rows(
        w,
        &TRANSFER_HEADER,
        curve
            .points()
            .iter()
            .map(|p| vec![p.mmse_ap.value(), p.mmse_ext.value(), p.stderr]),
    )
}

pub fn read_transfer_csv<R: Read>(r: R, role: Role, label: &str) -> Result<TransferCurve> {
    let c = read_columns(r, &TRANSFER_HEADER)?;
    let points = (0..c[0].len())
        .map(|i| {
            Ok(CurvePoint {
                mmse_ap: Mmse::new(c[0][i])?,
                mmse_ext: Mmse::new(c[1][i])?,
                stderr: c[2][i],
            })
        })
        .collect::<Result<Vec<_>>>()?;
    TransferCurve::new(points, role, label)
}

/// Provenance recorded next to a curve.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize, Default)]
pub struct CurveMetadata {
    pub label: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub role: Option<Role>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub seed: Option<u64>,
    #[serde(default)]
    pub grid: Vec<f64>,
    #[serde(default)]
    pub tail_rule: TailRule,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub integration_error: Option<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum CurveBody {
    MmseSnr { curve: MmseSnrCurve },
    Transfer { curve: TransferCurve },
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CurveDocument {
    pub format_version: u32,
    pub metadata: CurveMetadata,
    #[serde(flatten)]
    pub body: CurveBody,
}

impl CurveDocument {
    pub fn new(metadata: CurveMetadata, body: CurveBody) -> Self {
        CurveDocument {
            format_version: FORMAT_VERSION,
            metadata,
            body,
        }
    }

    pub fn to_json(&self) -> Result<String> {
        Ok(serde_json::to_string_pretty(self)?)
    }

    /// Parse and check the format version.
    pub fn from_json(s: &str) -> Result<Self> {
        let doc: CurveDocument = serde_json::from_str(s)?;
        if doc.format_version != FORMAT_VERSION {
            return Err(Error::InvalidCurve(format!(
                "unsupported format_version {}",
                doc.format_version
            )));
        }
        // Deserialization bypasses the constructors; re-validate.
        match &doc.body {
            CurveBody::MmseSnr { curve } => {
                MmseSnrCurve::new(curve.points().to_vec(), curve.tail_rule())?;
            }
            CurveBody::Transfer { curve } => {
                TransferCurve::new(curve.points().to_vec(), curve.role(), curve.label())?;
            }
        }
        Ok(doc)
    }
}
