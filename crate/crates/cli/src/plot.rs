//! Plotting scripts for the CSV outputs. The scripts only read and draw;
//! every number comes from the CSV.

use std::fs::File;
use std::path::{Path, PathBuf};

use msechart::charts::io::read_columns;
use msechart::Error;
use serde::{Deserialize, Serialize};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, clap::ValueEnum)]
#[serde(rename_all = "snake_case")]
pub enum PlotKind {
    Transfer,
    MmseSnr,
    ChartPair,
    Trajectory,
}

impl PlotKind {
    pub fn columns(self) -> &'static [&'static str] {
        match self {
            PlotKind::Transfer => &["mmse_ap", "mmse_ext"],
            PlotKind::MmseSnr => &["gamma", "mmse"],
            PlotKind::ChartPair => &["inner_ap", "inner_ext", "outer_ap", "outer_ext"],
            PlotKind::Trajectory => &["iteration", "x", "y"],
        }
    }
}

fn check_schema(csv: &Path, kind: PlotKind) -> Result<(), Error> {
    let f = File::open(csv).map_err(|e| Error::config(csv.display().to_string(), e.to_string()))?;
    read_columns(f, kind.columns())
        .map(|_| ())
        .map_err(|e| Error::config(csv.display().to_string(), e.to_string()))
}

fn py_str(p: &Path) -> String {
    serde_json::to_string(&p.display().to_string()).expect("string serializes")
}

const PRELUDE: &str = r#"import csv
import matplotlib
matplotlib.use("Agg")
import matplotlib.pyplot as plt


def columns(path):
    with open(path, newline="") as f:
        rows = list(csv.DictReader(f))
    return {k.strip(): [float(r[k]) for r in rows] for k in rows[0]}


"#;

/// Script drawing `csv` as `kind`, saving an SVG next to it. For
/// `chart_pair` an optional trajectory CSV adds the decoding staircase.
pub fn plot_script(csv: &Path, kind: PlotKind, trajectory: Option<&Path>) -> Result<String, Error> {
    check_schema(csv, kind)?;
    if let Some(t) = trajectory {
        check_schema(t, PlotKind::Trajectory)?;
    }
    let svg = csv.with_extension("svg");
    let mut s = String::from(PRELUDE);
    s += &format!(
        "data = columns({})\nfig, ax = plt.subplots(figsize=(5, 5))\n",
        py_str(csv)
    );
    s += match kind {
        PlotKind::Transfer => {
            r#"if "stderr" in data:
    ax.errorbar(data["mmse_ap"], data["mmse_ext"], yerr=data["stderr"], marker=".", capsize=2)
else:
    ax.plot(data["mmse_ap"], data["mmse_ext"], marker=".")
ax.set_xlabel("a-priori MMSE")
ax.set_ylabel("extrinsic MMSE")
ax.set_xlim(0, 1)
ax.set_ylim(0, 1)
"#
        }
        PlotKind::MmseSnr => {
            r#"ax.plot(data["gamma"], data["mmse"], marker=".")
ax.set_xlabel("SNR")
ax.set_ylabel("MMSE")
ax.set_ylim(0, 1)
"#
        }
        PlotKind::ChartPair => {
            r#"ax.plot(data["inner_ext"], data["inner_ap"], label="inner")
ax.plot(data["outer_ap"], data["outer_ext"], label="outer")
ax.set_xlabel("MMSE of inner-to-outer messages")
ax.set_ylabel("MMSE of outer-to-inner messages")
ax.set_xlim(0, 1)
ax.set_ylim(0, 1)
"#
        }
        PlotKind::Trajectory => {
            r#"ax.semilogy(data["iteration"], data["x"], marker=".", label="inner output")
ax.semilogy(data["iteration"], data["y"], marker=".", label="outer output")
ax.set_xlabel("iteration")
ax.set_ylabel("MMSE")
"#
        }
    };
    if let (PlotKind::ChartPair, Some(t)) = (kind, trajectory) {
        s += &format!(
            r#"steps = columns({})
sx, sy = [steps["x"][0]], [1.0]
for x, y, nx in zip(steps["x"], steps["y"], steps["x"][1:] + [None]):
    sx.append(x)
    sy.append(y)
    if nx is not None:
        sx.append(nx)
        sy.append(y)
ax.plot(sx, sy, color="black", linewidth=0.8, label="trajectory")
"#,
            py_str(t)
        );
    }
    if matches!(kind, PlotKind::ChartPair | PlotKind::Trajectory) {
        s += "ax.legend()\n";
    }
    s += &format!(
        "ax.grid(True, alpha=0.3)\nfig.tight_layout()\nfig.savefig({})\n",
        py_str(&svg)
    );
    Ok(s)
}

/// Path of the script written for `csv`.
pub fn script_path(csv: &Path) -> PathBuf {
    csv.with_extension("py")
}
