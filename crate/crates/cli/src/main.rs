//! `msechart`: MMSE transfer curves, areas, thresholds and trajectories from
//! the command line.
//!
//! Exit status: 0 on success, 1 when a run fails or `verify` finds a
//! violated invariant, 2 on configuration or input-schema errors.

// `!(x > 0.0)` style checks are meant to reject NaN.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

mod config;
mod plot;
mod report;
mod run;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use msechart::charts::{Axis, Role, TailRule};
use msechart::decoders::InnerChannelSpec;
use msechart::Error;
use serde::de::DeserializeOwned;

use config::{Command, CurveKind, GridScale, GridSpec, InfoUnit, RunConfig, SnrUnit};
use plot::PlotKind;
use report::{write_atomic, RunReport};

#[derive(Parser)]
#[command(
    name = "msechart",
    version,
    about = "MMSE transfer charts for iterative decoders"
)]
struct Cli {
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Subcommand)]
enum Cmd {
    /// Tabulate φ(γ) and I₂(γ) on the grid.
    PhiTable(RunArgs),
    /// Transfer curve of a code, or the chart pair of an LDPC ensemble.
    Curve(RunArgs),
    /// Area under the MMSE-versus-SNR curve and the rate it implies.
    Area(RunArgs),
    /// Decoding threshold of an LDPC ensemble by bisection.
    Threshold(RunArgs),
    /// Iterations of the message-SNR recursion at one Eb/N0.
    Trajectory(RunArgs),
    /// Run the invariant suite; exits 1 if any check fails.
    Verify(RunArgs),
    /// Rerun the configuration echoed in a JSON report.
    Replay {
        report: PathBuf,
        #[arg(long)]
        json: bool,
        /// Where to write the new report.
        #[arg(long = "report-out")]
        report_out: Option<PathBuf>,
    },
    /// Write a plotting script for a CSV produced by another command.
    Plot {
        csv: PathBuf,
        #[arg(long, value_enum)]
        kind: PlotKind,
        /// Trajectory CSV drawn as a staircase over a chart pair.
        #[arg(long)]
        trajectory: Option<PathBuf>,
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

fn parse_enum<T: DeserializeOwned>(s: &str) -> Result<T, String> {
    serde_json::from_value(serde_json::Value::String(s.replace('-', "_")))
        .map_err(|e| e.to_string())
}

/// `none`, `awgn:<snr>` or `erasure:<epsilon>`.
fn parse_channel(s: &str) -> Result<InnerChannelSpec, String> {
    let (kind, arg) = s.split_once(':').unwrap_or((s, ""));
    let num = || arg.parse::<f64>().map_err(|e| format!("`{arg}`: {e}"));
    match kind {
        "none" => Ok(InnerChannelSpec::None),
        "awgn" => Ok(InnerChannelSpec::awgn(
            msechart::awgn::Snr::new(num()?).map_err(|e| e.to_string())?,
        )),
        "erasure" => InnerChannelSpec::erasure(num()?).map_err(|e| e.to_string()),
        _ => Err("expected none, awgn:<snr> or erasure:<epsilon>".into()),
    }
}

/// Flags override the config file, which overrides the defaults.
#[derive(Args, Default)]
struct RunArgs {
    /// TOML or JSON configuration document.
    #[arg(long)]
    config: Option<PathBuf>,
    /// Code or ensemble preset.
    #[arg(long, visible_alias = "profile")]
    code: Option<String>,
    #[arg(long, value_parser = parse_enum::<Role>)]
    role: Option<Role>,
    /// Axis of the MMSE-versus-SNR curve: a-priori or extrinsic.
    #[arg(long, value_parser = parse_enum::<Axis>)]
    axis: Option<Axis>,
    /// none, awgn:<snr> or erasure:<epsilon>.
    #[arg(long, value_parser = parse_channel)]
    channel: Option<InnerChannelSpec>,
    #[arg(long, value_parser = parse_enum::<GridScale>)]
    grid_scale: Option<GridScale>,
    #[arg(long)]
    grid_lo: Option<f64>,
    #[arg(long)]
    grid_hi: Option<f64>,
    #[arg(long)]
    grid_points: Option<usize>,
    #[arg(long)]
    grid_zero: Option<bool>,
    #[arg(long, value_parser = parse_enum::<TailRule>)]
    tail_rule: Option<TailRule>,
    #[arg(long)]
    seed: Option<u64>,
    #[arg(long)]
    samples: Option<usize>,
    #[arg(long)]
    block_len: Option<usize>,
    #[arg(long, allow_hyphen_values = true)]
    ebno_db: Option<f64>,
    #[arg(long, allow_hyphen_values = true)]
    lo_db: Option<f64>,
    #[arg(long, allow_hyphen_values = true)]
    hi_db: Option<f64>,
    #[arg(long)]
    tol_db: Option<f64>,
    #[arg(long)]
    max_iter: Option<usize>,
    #[arg(long)]
    tol: Option<f64>,
    /// CSV output path.
    #[arg(long)]
    out: Option<PathBuf>,
    /// JSON report path.
    #[arg(long)]
    report: Option<PathBuf>,
    /// Also write a plotting script for each CSV.
    #[arg(long)]
    plot: bool,
    #[arg(long, value_parser = parse_enum::<CurveKind>)]
    curve_kind: Option<CurveKind>,
    #[arg(long, value_parser = parse_enum::<SnrUnit>)]
    snr_unit: Option<SnrUnit>,
    #[arg(long, value_parser = parse_enum::<InfoUnit>)]
    info_unit: Option<InfoUnit>,
    /// Print the JSON report instead of the text rendering.
    #[arg(long)]
    json: bool,
}

impl RunArgs {
    fn into_config(self, command: Command) -> Result<RunConfig, Error> {
        let mut c = match &self.config {
            Some(p) => config::load(p)?,
            None => RunConfig::default(),
        };
        c.command = command;
        if self.code.is_some() {
            c.lambda = None;
            c.rho = None;
        }
        macro_rules! set {
            ($($f:ident),*) => {$(if let Some(v) = self.$f { c.$f = Some(v); })*};
        }
        set!(
            code, channel, seed, samples, block_len, ebno_db, lo_db, hi_db, tol_db, max_iter, tol,
            out, report
        );
        if let Some(v) = self.role {
            c.role = v;
        }
        if let Some(v) = self.axis {
            c.axis = v;
        }
        if let Some(v) = self.tail_rule {
            c.tail_rule = v;
        }
        if let Some(v) = self.curve_kind {
            c.curve_kind = v;
        }
        if let Some(v) = self.snr_unit {
            c.snr_unit = v;
        }
        if let Some(v) = self.info_unit {
            c.info_unit = v;
        }
        c.plot |= self.plot;
        let grid_flags = self.grid_scale.is_some()
            || self.grid_lo.is_some()
            || self.grid_hi.is_some()
            || self.grid_points.is_some()
            || self.grid_zero.is_some();
        if grid_flags {
            let base = c.grid.unwrap_or(GridSpec::ANALYTIC);
            c.grid = Some(GridSpec {
                scale: self.grid_scale.unwrap_or(base.scale),
                lo: self.grid_lo.unwrap_or(base.lo),
                hi: self.grid_hi.unwrap_or(base.hi),
                points: self.grid_points.unwrap_or(base.points),
                include_zero: self.grid_zero.unwrap_or(base.include_zero),
            });
        }
        c.resolve()
    }
}

fn exit_for(e: &Error) -> ExitCode {
    match e {
        Error::Config { .. } => ExitCode::from(2),
        _ => ExitCode::from(1),
    }
}

fn finish(rep: &RunReport, json: bool) -> Result<ExitCode, Error> {
    if json {
        println!("{}", rep.to_json()?);
    } else {
        print!("{}", rep.render());
    }
    Ok(if rep.failed() && rep.config.command == Command::Verify {
        ExitCode::from(1)
    } else {
        ExitCode::SUCCESS
    })
}

fn dispatch(cmd: Cmd) -> Result<ExitCode, Error> {
    let (command, args) = match cmd {
        Cmd::PhiTable(a) => (Command::PhiTable, a),
        Cmd::Curve(a) => (Command::Curve, a),
        Cmd::Area(a) => (Command::Area, a),
        Cmd::Threshold(a) => (Command::Threshold, a),
        Cmd::Trajectory(a) => (Command::Trajectory, a),
        Cmd::Verify(a) => (Command::Verify, a),
        Cmd::Replay {
            report,
            json,
            report_out,
        } => {
            let text = std::fs::read_to_string(&report)
                .map_err(|e| Error::config(report.display().to_string(), e.to_string()))?;
            let mut config = RunReport::from_json(&text)?.config;
            config.report = report_out;
            let rep = run::run(config.resolve()?)?;
            return finish(&rep, json);
        }
        Cmd::Plot {
            csv,
            kind,
            trajectory,
            out,
        } => {
            let script = plot::plot_script(&csv, kind, trajectory.as_deref())?;
            let path = out.unwrap_or_else(|| plot::script_path(&csv));
            write_atomic(&path, script.as_bytes())?;
            println!("wrote {}", path.display());
            return Ok(ExitCode::SUCCESS);
        }
    };
    let json = args.json;
    let config = args.into_config(command)?;
    let rep = run::run(config)?;
    finish(&rep, json)
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match dispatch(cli.cmd) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("msechart: {e}");
            exit_for(&e)
        }
    }
}
