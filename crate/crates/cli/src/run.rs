use std::path::{Path, PathBuf};
use std::time::Instant;

use msechart::awgn::Snr;
use msechart::awgn::{linear_to_db, mutual_info_half, phi_half, LN4};
use msechart::charts::io::{write_rows, write_snr_csv, write_transfer_csv};
use msechart::charts::presets::CodePreset;
use msechart::charts::*;
use msechart::decoders::{
    conv_transfer_point, ConvRole, InnerChannelSpec, McBudget, TransferPoint,
};
use msechart::verify::{run_suite, SuiteSettings};
use msechart::Error;

use crate::config::{CodeChoice, Command, CurveKind, InfoUnit, RunConfig, SnrUnit};
use crate::plot::{plot_script, script_path, PlotKind};
use crate::report::{write_atomic, Measured, RunReport};

/// Execute a resolved configuration.
pub fn run(config: RunConfig) -> Result<RunReport, Error> {
    let start = Instant::now();
    let mut rep = RunReport::new(config.clone());
    match config.command {
        Command::PhiTable => phi_table(&config, &mut rep)?,
        Command::Curve => curve(&config, &mut rep)?,
        Command::Area => area_cmd(&config, &mut rep)?,
        Command::Threshold => threshold_cmd(&config, &mut rep)?,
        Command::Trajectory => trajectory_cmd(&config, &mut rep)?,
        Command::Verify => verify(&config, &mut rep)?,
    }
    rep.elapsed_s = start.elapsed().as_secs_f64();
    if let Some(path) = &config.report {
        rep.outputs.push(path.clone());
        write_atomic(path, rep.to_json()?.as_bytes())?;
    }
    Ok(rep)
}

fn mc(c: &RunConfig) -> McSettings {
    McSettings {
        samples: c.samples.unwrap(),
        seed: c.seed.unwrap(),
        block_len: c.block_len.unwrap(),
    }
}

fn write_csv(
    rep: &mut RunReport,
    c: &RunConfig,
    path: &Path,
    kind: Option<PlotKind>,
    body: impl FnOnce(&mut Vec<u8>) -> Result<(), Error>,
) -> Result<(), Error> {
    let mut buf = Vec::new();
    body(&mut buf)?;
    write_atomic(path, &buf)?;
    rep.outputs.push(path.to_path_buf());
    if c.plot {
        match kind {
            Some(k) => emit_script(rep, path, k, None)?,
            None => rep
                .warnings
                .push(format!("no plot style for {}", path.display())),
        }
    }
    Ok(())
}

fn emit_script(
    rep: &mut RunReport,
    csv: &Path,
    kind: PlotKind,
    trajectory: Option<&Path>,
) -> Result<(), Error> {
    let script = plot_script(csv, kind, trajectory)?;
    let path = script_path(csv);
    write_atomic(&path, script.as_bytes())?;
    rep.outputs.push(path);
    Ok(())
}

fn out_path(c: &RunConfig) -> PathBuf {
    c.out.clone().expect("resolved config has an output path")
}

fn phi_table(c: &RunConfig, rep: &mut RunReport) -> Result<(), Error> {
    let grid = c.grid_values();
    let g_col = match c.snr_unit {
        SnrUnit::Linear => "gamma",
        SnrUnit::Db => "gamma_db",
    };
    let i_col = match c.info_unit {
        InfoUnit::Bits => "i2_bits",
        InfoUnit::Nats => "i2_nats",
    };
    let rows: Vec<Vec<f64>> = grid
        .iter()
        .filter(|&&g| c.snr_unit == SnrUnit::Linear || g > 0.0)
        .map(|&g| {
            let x = match c.snr_unit {
                SnrUnit::Linear => g,
                SnrUnit::Db => linear_to_db(g),
            };
            let i = match c.info_unit {
                InfoUnit::Bits => mutual_info_half(g),
                InfoUnit::Nats => mutual_info_half(g) * std::f64::consts::LN_2,
            };
            vec![x, phi_half(g), i]
        })
        .collect();
    if c.snr_unit == SnrUnit::Db && grid.contains(&0.0) {
        rep.warnings
            .push("γ = 0 has no dB value and was skipped".into());
    }
    rep.results.push(Measured::value("rows", rows.len() as f64));
    let full = MmseSnrCurve::analytic(&grid, phi_half, TailRule::AnalyticTail)?;
    let a = area(&full)?;
    rep.results
        .push(Measured::against("area_phi_nats", a.area, LN4, 1e-3));
    write_csv(rep, c, &out_path(c), None, |buf| {
        write_rows(buf, &[g_col, "phi", i_col], rows)
    })
}

/// Transfer points of the configured component code over the grid.
fn component_points(c: &RunConfig, choice: &CodeChoice) -> Result<Vec<TransferPoint>, Error> {
    let grid = c.grid_values();
    match (c.role, choice) {
        (Role::Outer, CodeChoice::Preset(p)) => outer_points(p, &grid, mc(c)),
        (Role::Inner, CodeChoice::Uncoded) => {
            let channel = c.channel.unwrap_or(InnerChannelSpec::None);
            grid.iter()
                .map(|&g| {
                    let s = Snr::new(g)?;
                    Ok(match channel {
                        InnerChannelSpec::Awgn { snr } => {
                            let v = snr.value();
                            TransferPoint::analytic(s, phi_half(v), phi_half(g + v))
                        }
                        InnerChannelSpec::Erasure { epsilon } => {
                            TransferPoint::analytic(s, epsilon, epsilon * phi_half(g))
                        }
                        InnerChannelSpec::None => TransferPoint::analytic(s, 1.0, phi_half(g)),
                    })
                })
                .collect()
        }
        (Role::Inner, CodeChoice::Preset(CodePreset::Conv(code))) => {
            let channel = c.channel.unwrap_or(InnerChannelSpec::None);
            let m = mc(c);
            let n_blocks = m.samples.div_ceil(m.block_len).max(1);
            grid.iter()
                .enumerate()
                .map(|(i, &g)| {
                    let budget = McBudget {
                        block_len: m.block_len,
                        n_blocks,
                        seed: m.seed.wrapping_add(i as u64),
                    };
                    conv_transfer_point(code, ConvRole::Inner { channel }, Snr::new(g)?, budget)
                })
                .collect()
        }
        _ => Err(Error::config("code", "not usable in this role")),
    }
}

fn label(c: &RunConfig) -> String {
    c.code.clone().unwrap_or_else(|| "custom ensemble".into())
}

fn mmse_snr(
    c: &RunConfig,
    pts: &[TransferPoint],
    transfer: &TransferCurve,
) -> Result<MmseSnrCurve, Error> {
    match c.axis {
        Axis::APriori => MmseSnrCurve::from_points(pts, c.tail_rule),
        Axis::Extrinsic => {
            let m = to_mmse_vs_snr(transfer, Axis::Extrinsic)?;
            MmseSnrCurve::new(m.points().to_vec(), c.tail_rule)
        }
    }
}

fn curve(c: &RunConfig, rep: &mut RunReport) -> Result<(), Error> {
    let choice = c.code_choice()?;
    let path = out_path(c);
    if let Some(profile) = choice.profile() {
        let s = channel_snr_from_ebno(profile, c.ebno_db.unwrap())?;
        let pair = ldpc_chart_pair(profile, s, &c.grid_values())?;
        chart_pair_results(rep, &pair)?;
        return write_csv(rep, c, &path, Some(PlotKind::ChartPair), |buf| {
            write_chart_pair(&pair, buf)
        });
    }
    let pts = component_points(c, &choice)?;
    let transfer = TransferCurve::from_points(&pts, c.role, label(c))?;
    rep.results
        .push(Measured::value("points", pts.len() as f64));
    rep.results
        .push(Measured::value("max_stderr", transfer.max_stderr()));
    match c.curve_kind {
        CurveKind::Transfer => write_csv(rep, c, &path, Some(PlotKind::Transfer), |buf| {
            write_transfer_csv(&transfer, buf)
        }),
        CurveKind::MmseSnr => {
            let m = mmse_snr(c, &pts, &transfer)?;
            write_csv(rep, c, &path, Some(PlotKind::MmseSnr), |buf| {
                write_snr_csv(&m, buf)
            })
        }
    }
}

fn write_chart_pair(pair: &ChartPair, buf: &mut Vec<u8>) -> Result<(), Error> {
    let rows = pair
        .inner
        .points()
        .iter()
        .zip(pair.outer.points())
        .map(|(i, o)| {
            vec![
                i.mmse_ap.value(),
                i.mmse_ext.value(),
                o.mmse_ap.value(),
                o.mmse_ext.value(),
            ]
        });
    write_rows(
        buf,
        &["inner_ap", "inner_ext", "outer_ap", "outer_ext"],
        rows,
    )
}

fn chart_pair_results(rep: &mut RunReport, pair: &ChartPair) -> Result<(), Error> {
    let gap = matching_gap(pair)?;
    rep.results.push(Measured::value("min_gap", gap.min_gap));
    rep.results.push(Measured::value("max_gap", gap.max_gap));
    rep.results
        .push(Measured::value("crossing", gap.crossing as u8 as f64));
    Ok(())
}

fn area_cmd(c: &RunConfig, rep: &mut RunReport) -> Result<(), Error> {
    let choice = c.code_choice()?;
    let pts = component_points(c, &choice)?;
    let transfer = TransferCurve::from_points(&pts, c.role, label(c))?;
    let m = mmse_snr(c, &pts, &transfer)?;
    let a = area(&m)?;
    let est = rate_from_area(a.area, c.role, c.axis)?;
    rep.results.push(Measured::value("area", a.area));
    rep.results.push(Measured::value("grid_part", a.grid_part));
    rep.results.push(Measured::value("tail", a.tail));
    rep.results
        .push(Measured::value("integration_error", a.error_estimate));
    rep.results.push(Measured::value("stderr", a.stderr));
    let target = match (&choice, c.channel) {
        (CodeChoice::Preset(p), _) if c.role == Role::Outer => Some(p.rate()),
        (CodeChoice::Uncoded, Some(InnerChannelSpec::Awgn { snr })) => {
            Some(mutual_info_half(snr.value()))
        }
        (CodeChoice::Uncoded, Some(InnerChannelSpec::Erasure { epsilon })) => Some(1.0 - epsilon),
        (CodeChoice::Uncoded, _) => Some(0.0),
        _ => None,
    };
    match target {
        // Simulated curves are held to 3% of the rate, closed forms to
        // the integration tolerance.
        Some(t) => {
            let tol = if pts.iter().any(|p| p.stderr_out > 0.0) {
                0.03 * t.max(1e-3)
            } else {
                AREA_TOLERANCE / LN4
            };
            rep.results
                .push(Measured::against("rate", est.rate, t, tol));
        }
        None => rep.results.push(Measured::value("rate", est.rate)),
    }
    if est.clamped {
        rep.warnings
            .push("area fell outside [0, ln4] within its error; rate clamped".into());
    }
    Ok(())
}

fn threshold_cmd(c: &RunConfig, rep: &mut RunReport) -> Result<(), Error> {
    let choice = c.code_choice()?;
    let p = choice.profile().expect("validated as LDPC");
    let t = threshold_with(
        p,
        c.lo_db.unwrap(),
        c.hi_db.unwrap(),
        c.tol_db.unwrap(),
        c.max_iter.unwrap(),
        c.tol.unwrap(),
    )?;
    rep.results.push(Measured::value("threshold_db", t));
    rep.results.push(Measured::value(
        "channel_snr",
        channel_snr_from_ebno(p, t)?.value(),
    ));
    rep.results
        .push(Measured::value("design_rate", p.design_rate()));
    Ok(())
}

fn trajectory_cmd(c: &RunConfig, rep: &mut RunReport) -> Result<(), Error> {
    let choice = c.code_choice()?;
    let p = choice.profile().expect("validated as LDPC");
    let s = channel_snr_from_ebno(p, c.ebno_db.unwrap())?;
    let t = trajectory(p, s, c.max_iter.unwrap(), c.tol.unwrap())?;
    rep.results
        .push(Measured::value("converged", t.converged as u8 as f64));
    rep.results
        .push(Measured::value("iterations", t.iterations_used as f64));
    rep.results
        .push(Measured::value("final_mmse", t.final_mmse));
    let path = out_path(c);
    let rows = t
        .steps
        .iter()
        .map(|s| vec![s.iteration as f64, s.x.value(), s.y.value()]);
    let mut buf = Vec::new();
    write_rows(&mut buf, &["iteration", "x", "y"], rows)?;
    write_atomic(&path, &buf)?;
    rep.outputs.push(path.clone());

    let pair = ldpc_chart_pair(p, s, &c.grid_values())?;
    chart_pair_results(rep, &pair)?;
    let stem = path.file_stem().unwrap_or_default().to_string_lossy();
    let chart = path.with_file_name(format!("{stem}_chart.csv"));
    let mut buf = Vec::new();
    write_chart_pair(&pair, &mut buf)?;
    write_atomic(&chart, &buf)?;
    rep.outputs.push(chart.clone());
    if c.plot {
        emit_script(rep, &path, PlotKind::Trajectory, None)?;
        emit_script(rep, &chart, PlotKind::ChartPair, Some(&path))?;
    }
    Ok(())
}

fn verify(c: &RunConfig, rep: &mut RunReport) -> Result<(), Error> {
    let checks = run_suite(SuiteSettings {
        seed: c.seed.unwrap(),
        samples: c.samples.unwrap(),
        ..SuiteSettings::default()
    })?;
    rep.results.extend(
        checks
            .into_iter()
            .map(|k| Measured::bounded(k.name, k.value, k.tolerance, k.pass)),
    );
    Ok(())
}
