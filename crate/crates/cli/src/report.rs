use std::fmt::Write as _;
use std::io::Write;
use std::path::{Path, PathBuf};

use msechart::Error;
use serde::{Deserialize, Serialize};

use crate::config::RunConfig;

pub const REPORT_VERSION: u32 = 1;

/// One number produced by a run.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Measured {
    pub name: String,
    pub value: f64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub target: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub tolerance: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub pass: Option<bool>,
}

impl Measured {
    pub fn value(name: impl Into<String>, value: f64) -> Self {
        Measured {
            name: name.into(),
            value,
            target: None,
            tolerance: None,
            pass: None,
        }
    }

    /// `|value − target| <= tolerance`.
    pub fn against(name: impl Into<String>, value: f64, target: f64, tolerance: f64) -> Self {
        Measured {
            name: name.into(),
            value,
            target: Some(target),
            tolerance: Some(tolerance),
            pass: Some((value - target).abs() <= tolerance),
        }
    }

    /// `value <= tolerance` with a verdict computed elsewhere.
    pub fn bounded(name: impl Into<String>, value: f64, tolerance: f64, pass: bool) -> Self {
        Measured {
            name: name.into(),
            value,
            target: None,
            tolerance: Some(tolerance),
            pass: Some(pass),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RunReport {
    pub format_version: u32,
    pub tool_version: String,
    /// The fully resolved configuration; rerunning it reproduces `results`.
    pub config: RunConfig,
    pub elapsed_s: f64,
    pub results: Vec<Measured>,
    pub warnings: Vec<String>,
    pub outputs: Vec<PathBuf>,
}

impl RunReport {
    pub fn new(config: RunConfig) -> Self {
        RunReport {
            format_version: REPORT_VERSION,
            tool_version: env!("CARGO_PKG_VERSION").into(),
            config,
            elapsed_s: 0.0,
            results: Vec::new(),
            warnings: Vec::new(),
            outputs: Vec::new(),
        }
    }

    pub fn failed(&self) -> bool {
        self.results.iter().any(|m| m.pass == Some(false))
    }

    pub fn to_json(&self) -> Result<String, Error> {
        Ok(serde_json::to_string_pretty(self)?)
    }

    pub fn from_json(s: &str) -> Result<Self, Error> {
        let de = &mut serde_json::Deserializer::from_str(s);
        let r: RunReport = serde_path_to_error::deserialize(de)
            .map_err(|e| Error::config(e.path().to_string(), e.inner().to_string()))?;
        if r.format_version != REPORT_VERSION {
            return Err(Error::config(
                "format_version",
                format!("unsupported report version {}", r.format_version),
            ));
        }
        Ok(r)
    }

    /// Console rendering. Numbers use the shortest digits that round-trip,
    /// so they parse back to the values in the JSON form.
    pub fn render(&self) -> String {
        let c = &self.config;
        let mut s = String::new();
        let code = match (&c.code, &c.lambda) {
            (Some(code), _) => code.clone(),
            (None, Some(_)) => "custom ensemble".into(),
            _ => "-".into(),
        };
        let _ = writeln!(
            s,
            "msechart {} | code {} | seed {}",
            c.command.name(),
            code,
            c.seed.unwrap_or_default()
        );
        for m in &self.results {
            let verdict = match m.pass {
                Some(true) => "PASS ",
                Some(false) => "FAIL ",
                None => "     ",
            };
            let _ = write!(s, "  {verdict}{} = {}", m.name, num(m.value));
            match (m.target, m.tolerance) {
                (Some(t), Some(tol)) => {
                    let _ = write!(s, " (target {} ± {})", num(t), num(tol));
                }
                (None, Some(tol)) => {
                    let _ = write!(s, " (tolerance {})", num(tol));
                }
                _ => {}
            }
            s.push('\n');
        }
        for w in &self.warnings {
            let _ = writeln!(s, "  warning: {w}");
        }
        for o in &self.outputs {
            let _ = writeln!(s, "  wrote {}", o.display());
        }
        let _ = writeln!(s, "  elapsed {:.3} s", self.elapsed_s);
        s
    }
}

/// Shortest round-trip form, in exponent notation for very small or large
/// magnitudes.
fn num(v: f64) -> String {
    let a = v.abs();
    if a == 0.0 || (1e-3..1e7).contains(&a) {
        format!("{v}")
    } else {
        format!("{v:e}")
    }
}

/// Write through a temporary file in the target directory and rename it
/// into place.
pub fn write_atomic(path: &Path, bytes: &[u8]) -> Result<(), Error> {
    let dir = match path.parent() {
        Some(d) if !d.as_os_str().is_empty() => d,
        _ => Path::new("."),
    };
    let mut tmp = tempfile::NamedTempFile::new_in(dir)?;
    tmp.write_all(bytes)?;
    tmp.flush()?;
    tmp.persist(path).map_err(|e| Error::Io(e.to_string()))?;
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn json_and_console_carry_the_same_numbers() {
        let mut r = RunReport::new(RunConfig::default());
        r.results.push(Measured::against(
            "area",
            0.6926371830129,
            std::f64::consts::LN_2,
            0.02,
        ));
        r.results.push(Measured::value("tiny", 1.2345678901234e-9));
        let text = r.render();
        let back = RunReport::from_json(&r.to_json().unwrap()).unwrap();
        for m in &back.results {
            let shown = text
                .lines()
                .find_map(|l| l.trim().split_once(&format!("{} = ", m.name)))
                .map(|(_, rest)| rest.split_whitespace().next().unwrap().to_string())
                .unwrap();
            assert_eq!(shown.parse::<f64>().unwrap(), m.value, "{text}");
        }
        assert_eq!(back, r);
    }

    #[test]
    fn atomic_write_replaces_content() {
        let dir = tempfile::tempdir().unwrap();
        let p = dir.path().join("x.txt");
        write_atomic(&p, b"one").unwrap();
        write_atomic(&p, b"two").unwrap();
        assert_eq!(std::fs::read_to_string(&p).unwrap(), "two");
        assert_eq!(std::fs::read_dir(dir.path()).unwrap().count(), 1);
    }
}
