use std::path::{Path, PathBuf};

use msechart::charts::presets::CodePreset;
use msechart::charts::{linear_grid, log_grid, Axis, Role, TailRule};
use msechart::decoders::{DegreeProfile, InnerChannelSpec, MIN_CHECK_SAMPLES};
use msechart::Error;
use serde::{Deserialize, Serialize};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, Default)]
#[serde(rename_all = "kebab-case")]
pub enum Command {
    PhiTable,
    Curve,
    #[default]
    Area,
    Threshold,
    Trajectory,
    Verify,
}

impl Command {
    pub fn name(self) -> &'static str {
        match self {
            Command::PhiTable => "phi-table",
            Command::Curve => "curve",
            Command::Area => "area",
            Command::Threshold => "threshold",
            Command::Trajectory => "trajectory",
            Command::Verify => "verify",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, Default)]
#[serde(rename_all = "snake_case")]
pub enum SnrUnit {
    #[default]
    Linear,
    Db,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, Default)]
#[serde(rename_all = "snake_case")]
pub enum InfoUnit {
    #[default]
    Bits,
    Nats,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum GridScale {
    Log,
    Linear,
}

/// SNR grid: `points` values from `lo` to `hi`, optionally preceded by 0.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GridSpec {
    pub scale: GridScale,
    pub lo: f64,
    pub hi: f64,
    pub points: usize,
    pub include_zero: bool,
}

impl GridSpec {
    /// Grid for closed-form curves.
    pub const ANALYTIC: GridSpec = GridSpec {
        scale: GridScale::Log,
        lo: 1e-3,
        hi: 100.0,
        points: 60,
        include_zero: true,
    };

    /// Grid for simulated curves: 20 points on `[0, 4]`.
    pub const SIMULATED: GridSpec = GridSpec {
        scale: GridScale::Log,
        lo: 0.02,
        hi: 4.0,
        points: 19,
        include_zero: true,
    };

    pub fn values(&self) -> Vec<f64> {
        let mut g = if self.include_zero {
            vec![0.0]
        } else {
            Vec::new()
        };
        g.extend(match self.scale {
            GridScale::Log => log_grid(self.lo, self.hi, self.points),
            GridScale::Linear => linear_grid(self.lo, self.hi, self.points),
        });
        g
    }

    fn validate(&self) -> Result<(), Error> {
        if self.points < 2 {
            return Err(Error::config("grid.points", "need at least 2 points"));
        }
        if !(self.lo.is_finite() && self.hi.is_finite() && self.hi > self.lo) {
            return Err(Error::config("grid.hi", "need finite lo < hi"));
        }
        let min_lo = match self.scale {
            GridScale::Log => f64::MIN_POSITIVE,
            GridScale::Linear => 0.0,
        };
        if self.lo < min_lo || (self.include_zero && self.lo <= 0.0) {
            return Err(Error::config(
                "grid.lo",
                "must be > 0 (log scale or include_zero) and >= 0 otherwise",
            ));
        }
        Ok(())
    }
}

/// Everything a run depends on. Unset fields are filled by
/// [`RunConfig::resolve`] and echoed in the report.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize, Default)]
#[serde(default, deny_unknown_fields)]
pub struct RunConfig {
    pub command: Command,
    /// Preset name (`rep-N`, `spc-n`, `conv-5-7`, `conv-23-35`,
    /// `regular-3-6`, `designed-ldpc-05db`, or `uncoded` for inner runs).
    #[serde(skip_serializing_if = "Option::is_none")]
    pub code: Option<String>,
    /// Custom LDPC ensemble as `[degree, fraction]` pairs; overrides `code`.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub lambda: Option<Vec<(u32, f64)>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub rho: Option<Vec<(u32, f64)>>,
    pub role: Role,
    pub axis: Axis,
    pub channel: Option<InnerChannelSpec>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub grid: Option<GridSpec>,
    pub tail_rule: TailRule,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub seed: Option<u64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub samples: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub block_len: Option<usize>,
    /// Eb/N0 for chart pairs and trajectories.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub ebno_db: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub lo_db: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub hi_db: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub tol_db: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub max_iter: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub tol: Option<f64>,
    /// CSV output for `phi-table`, `curve` and `trajectory`.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub out: Option<PathBuf>,
    /// JSON report file, in addition to the console rendering.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub report: Option<PathBuf>,
    /// Write a plotting script next to each CSV.
    pub plot: bool,
    /// `transfer` or `mmse_snr` output from `curve`.
    pub curve_kind: CurveKind,
    pub snr_unit: SnrUnit,
    pub info_unit: InfoUnit,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, Default)]
#[serde(rename_all = "snake_case")]
pub enum CurveKind {
    #[default]
    Transfer,
    MmseSnr,
}

/// What `code` (or `lambda`/`rho`) names.
#[derive(Debug, Clone, PartialEq)]
pub enum CodeChoice {
    Preset(CodePreset),
    Uncoded,
}

impl CodeChoice {
    pub fn profile(&self) -> Option<&DegreeProfile> {
        match self {
            CodeChoice::Preset(CodePreset::Ldpc(p)) => Some(p),
            _ => None,
        }
    }
}

/// Read a TOML or JSON config; errors name the offending key path.
pub fn load(path: &Path) -> Result<RunConfig, Error> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| Error::config(path.display().to_string(), e.to_string()))?;
    let is_json = path.extension().is_some_and(|e| e == "json");
    if is_json {
        let de = &mut serde_json::Deserializer::from_str(&text);
        serde_path_to_error::deserialize(de).map_err(|e| keyed(e.path().to_string(), e.inner()))
    } else {
        let de = toml::Deserializer::parse(&text).map_err(|e| Error::config(".", e.to_string()))?;
        serde_path_to_error::deserialize(de).map_err(|e| keyed(e.path().to_string(), e.inner()))
    }
}

/// TOML errors span several lines (location, snippet, caret, message);
/// keep the location and the message.
fn keyed(path: String, e: &impl std::fmt::Display) -> Error {
    let msg = e.to_string();
    let lines: Vec<&str> = msg
        .lines()
        .map(str::trim)
        .filter(|l| !l.is_empty())
        .collect();
    let text = match (lines.first(), lines.last()) {
        (Some(a), Some(b)) if a != b => format!("{a}: {b}"),
        (Some(a), _) => a.to_string(),
        _ => String::new(),
    };
    Error::config(path, text)
}

impl RunConfig {
    fn simulated(&self) -> Result<bool, Error> {
        Ok(match self.code_choice()? {
            CodeChoice::Preset(p) => p.is_simulated(),
            CodeChoice::Uncoded => false,
        })
    }

    /// Fill every unset field with its default for the command, then
    /// validate.
    pub fn resolve(mut self) -> Result<RunConfig, Error> {
        let ldpc_command = matches!(self.command, Command::Threshold | Command::Trajectory);
        if self.code.is_none() && self.lambda.is_none() {
            self.code = Some(
                match (self.command, self.role) {
                    _ if ldpc_command => "regular-3-6",
                    (_, Role::Inner) => "uncoded",
                    _ => "conv-5-7",
                }
                .into(),
            );
        }
        if self.lambda.is_some() != self.rho.is_some() {
            return Err(Error::config(
                "rho",
                "lambda and rho must be given together",
            ));
        }
        if self.lambda.is_some() {
            self.code = None;
        }
        let choice = self.code_choice()?;
        if self.grid.is_none() {
            let tabulates_phi = self.command == Command::PhiTable;
            self.grid = Some(if !tabulates_phi && self.simulated()? {
                GridSpec::SIMULATED
            } else {
                GridSpec::ANALYTIC
            });
        }
        self.seed.get_or_insert(1);
        self.samples.get_or_insert(1_000_000);
        self.block_len.get_or_insert(10_000);
        self.ebno_db.get_or_insert(1.5);
        self.lo_db.get_or_insert(-1.0);
        self.hi_db.get_or_insert(4.0);
        self.tol_db.get_or_insert(0.01);
        self.max_iter
            .get_or_insert(msechart::charts::DEFAULT_MAX_ITER);
        self.tol.get_or_insert(msechart::charts::DEFAULT_TOL);
        if self.channel.is_none() && self.role == Role::Inner {
            self.channel = Some(InnerChannelSpec::None);
        }
        if self.out.is_none() {
            let stem = match self.command {
                Command::PhiTable => Some("phi_table.csv"),
                Command::Curve => Some("curve.csv"),
                Command::Trajectory => Some("trajectory.csv"),
                _ => None,
            };
            self.out = stem.map(PathBuf::from);
        }

        self.grid.unwrap().validate()?;
        if self.samples.unwrap() < MIN_CHECK_SAMPLES {
            return Err(Error::config(
                "samples",
                format!("must be at least {MIN_CHECK_SAMPLES}"),
            ));
        }
        if self.block_len.unwrap() == 0 {
            return Err(Error::config("block_len", "must be positive"));
        }
        if !(self.tol_db.unwrap() > 0.0) {
            return Err(Error::config("tol_db", "must be positive"));
        }
        if !(self.lo_db.unwrap() < self.hi_db.unwrap()) {
            return Err(Error::config("hi_db", "must exceed lo_db"));
        }
        if !(self.tol.unwrap() > 0.0 && self.tol.unwrap() < 1.0) {
            return Err(Error::config("tol", "must lie in (0, 1)"));
        }
        if !self.ebno_db.unwrap().is_finite() {
            return Err(Error::config("ebno_db", "must be finite"));
        }
        let ldpc = choice.profile().is_some();
        let key = if self.lambda.is_some() {
            "lambda"
        } else {
            "code"
        };
        match self.command {
            Command::Threshold | Command::Trajectory if !ldpc => {
                return Err(Error::config(key, "needs an LDPC ensemble"));
            }
            Command::Area if ldpc => {
                return Err(Error::config(
                    key,
                    "area needs a component code, not an ensemble",
                ));
            }
            _ => {}
        }
        if self.role == Role::Inner {
            let ok = match &choice {
                CodeChoice::Uncoded => true,
                CodeChoice::Preset(CodePreset::Conv(_)) => {
                    !matches!(self.channel, Some(InnerChannelSpec::Erasure { .. }))
                }
                _ => false,
            };
            if !ok && matches!(self.command, Command::Curve | Command::Area) {
                return Err(Error::config(
                    key,
                    "inner role supports `uncoded` or a convolutional code over awgn/none",
                ));
            }
        } else if choice == CodeChoice::Uncoded {
            return Err(Error::config("code", "`uncoded` is an inner code"));
        }
        Ok(self)
    }

    pub fn code_choice(&self) -> Result<CodeChoice, Error> {
        if let (Some(l), Some(r)) = (&self.lambda, &self.rho) {
            return DegreeProfile::from_pairs(l, r)
                .map(|p| CodeChoice::Preset(CodePreset::Ldpc(p)))
                .map_err(|e| Error::config("lambda", e.to_string()));
        }
        match self.code.as_deref() {
            Some("uncoded") => Ok(CodeChoice::Uncoded),
            Some(name) => name
                .parse()
                .map(CodeChoice::Preset)
                .map_err(|e: Error| Error::config("code", e.to_string())),
            None => Err(Error::config("code", "missing")),
        }
    }

    pub fn grid_values(&self) -> Vec<f64> {
        self.grid.unwrap_or(GridSpec::ANALYTIC).values()
    }
}
