//! Browser bindings. Every export takes a JSON request and returns a JSON
//! response; the `*_json` functions are the same operations on plain
//! strings for native callers and tests.

use msechart::awgn::{phi_half, Snr};
use msechart::charts::presets::CodePreset;
use msechart::charts::{
    area, channel_snr_from_ebno, default_grid, ldpc_chart_pair, log_grid, matching_gap,
    outer_points, rate_from_area, threshold_with, to_mmse_vs_snr, trajectory, Axis, McSettings,
    MmseSnrCurve, Role, TailRule, TransferCurve, DEFAULT_MAX_ITER, DEFAULT_TOL,
};
use msechart::decoders::{DegreeProfile, MIN_CHECK_SAMPLES};
use serde::{Deserialize, Serialize};
use wasm_bindgen::prelude::*;

/// Samples per simulated point are capped to keep the page responsive.
pub const MAX_SAMPLES: usize = 2_000_000;

/// A preset name or an explicit edge-perspective degree distribution.
#[derive(Debug, Clone, Deserialize)]
#[serde(untagged)]
pub enum ProfileSpec {
    Preset(String),
    Custom {
        lambda: Vec<(u32, f64)>,
        rho: Vec<(u32, f64)>,
    },
}

impl ProfileSpec {
    fn resolve(&self) -> Result<DegreeProfile, String> {
        match self {
            ProfileSpec::Preset(name) => match name.parse::<CodePreset>().map_err(err)? {
                CodePreset::Ldpc(p) => Ok(p),
                other => Err(format!("`{other}` is not an LDPC ensemble")),
            },
            ProfileSpec::Custom { lambda, rho } => {
                DegreeProfile::from_pairs(lambda, rho).map_err(err)
            }
        }
    }
}

fn err(e: impl std::fmt::Display) -> String {
    e.to_string()
}

fn parse<'a, T: Deserialize<'a>>(s: &'a str) -> Result<T, String> {
    serde_json::from_str(s).map_err(|e| format!("bad request: {e}"))
}

fn reply<T: Serialize>(v: &T) -> Result<String, String> {
    serde_json::to_string(v).map_err(err)
}

fn default_samples() -> usize {
    100_000
}

fn default_seed() -> u64 {
    1
}

fn default_points() -> usize {
    16
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ComponentRequest {
    pub code: String,
    #[serde(default = "default_samples")]
    pub samples: usize,
    #[serde(default = "default_seed")]
    pub seed: u64,
    /// Log-spaced a-priori SNRs in `[0.02, 4]`, plus zero.
    #[serde(default = "default_points")]
    pub points: usize,
}

#[derive(Debug, Serialize)]
pub struct ComponentResponse {
    pub label: String,
    pub rate: f64,
    pub area: f64,
    pub area_stderr: f64,
    pub rate_estimate: f64,
    /// `[mmse_ap, mmse_ext, stderr]` rows.
    pub transfer: Vec<[f64; 3]>,
    /// `[gamma, mmse]` rows of the extrinsic MMSE against a-priori SNR.
    pub snr_curve: Vec<[f64; 2]>,
}

/// Transfer curve of an outer component code and the rate read off the area
/// under its MMSE-versus-SNR curve.
pub fn component_curve_json(req: &str) -> Result<String, String> {
    let r: ComponentRequest = parse(req)?;
    if !(MIN_CHECK_SAMPLES..=MAX_SAMPLES).contains(&r.samples) {
        return Err(format!(
            "samples must lie in [{MIN_CHECK_SAMPLES}, {MAX_SAMPLES}]"
        ));
    }
    if !(2..=64).contains(&r.points) {
        return Err("points must lie in [2, 64]".into());
    }
    let code: CodePreset = r.code.parse().map_err(err)?;
    if matches!(code, CodePreset::Ldpc(_)) {
        return Err("LDPC ensembles are drawn by the chart operation".into());
    }
    let grid: Vec<f64> = if code.is_simulated() {
        std::iter::once(0.0)
            .chain(log_grid(0.02, 4.0, r.points - 1))
            .collect()
    } else {
        default_grid()
    };
    let mc = McSettings {
        samples: r.samples,
        seed: r.seed,
        block_len: 2_000,
    };
    let pts = outer_points(&code, &grid, mc).map_err(err)?;
    let transfer = TransferCurve::from_points(&pts, Role::Outer, code.to_string()).map_err(err)?;
    let curve = MmseSnrCurve::from_points(&pts, TailRule::AnalyticTail).map_err(err)?;
    let a = area(&curve).map_err(err)?;
    let est = rate_from_area(a.area, Role::Outer, Axis::APriori).map_err(err)?;
    let ext = to_mmse_vs_snr(&transfer, Axis::APriori).map_err(err)?;
    reply(&ComponentResponse {
        label: code.to_string(),
        rate: code.rate(),
        area: a.area,
        area_stderr: a.stderr,
        rate_estimate: est.rate,
        transfer: transfer
            .points()
            .iter()
            .map(|p| [p.mmse_ap.value(), p.mmse_ext.value(), p.stderr])
            .collect(),
        snr_curve: ext
            .gammas()
            .into_iter()
            .zip(ext.mmses())
            .map(|(g, m)| [g, m])
            .collect(),
    })
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ChartRequest {
    pub profile: ProfileSpec,
    pub ebno_db: f64,
}

#[derive(Debug, Serialize)]
pub struct TrajectoryView {
    pub converged: bool,
    pub iterations: usize,
    pub final_mmse: f64,
    /// `[x, y]`: MMSE entering the check nodes and the MMSE they return.
    pub steps: Vec<[f64; 2]>,
}

#[derive(Debug, Serialize)]
pub struct ChartResponse {
    pub design_rate: f64,
    pub channel_snr: f64,
    /// Channel-only MMSE, where decoding starts.
    pub start_mmse: f64,
    /// `[inner_ext, inner_ap]`: variable-node curve in chart coordinates.
    pub inner: Vec<[f64; 2]>,
    /// `[outer_ap, outer_ext]`: check-node curve in chart coordinates.
    pub outer: Vec<[f64; 2]>,
    pub min_gap: f64,
    pub max_gap: f64,
    pub crossing: bool,
    pub trajectory: TrajectoryView,
}

/// Chart pair of an LDPC ensemble at one `Eb/N0` with the decoding
/// trajectory through it.
pub fn ldpc_chart_json(req: &str) -> Result<String, String> {
    let r: ChartRequest = parse(req)?;
    let p = r.profile.resolve()?;
    let s = channel_snr_from_ebno(&p, r.ebno_db).map_err(err)?;
    let pair = ldpc_chart_pair(&p, s, &default_grid()).map_err(err)?;
    let gap = matching_gap(&pair).map_err(err)?;
    let t = trajectory(&p, s, DEFAULT_MAX_ITER, DEFAULT_TOL).map_err(err)?;
    reply(&ChartResponse {
        design_rate: p.design_rate(),
        channel_snr: s.value(),
        start_mmse: phi_half(s.value()),
        inner: pair
            .inner
            .points()
            .iter()
            .map(|q| [q.mmse_ext.value(), q.mmse_ap.value()])
            .collect(),
        outer: pair
            .outer
            .points()
            .iter()
            .map(|q| [q.mmse_ap.value(), q.mmse_ext.value()])
            .collect(),
        min_gap: gap.min_gap,
        max_gap: gap.max_gap,
        crossing: gap.crossing,
        trajectory: TrajectoryView {
            converged: t.converged,
            iterations: t.iterations_used,
            final_mmse: t.final_mmse,
            steps: t.steps.iter().map(|q| [q.x.value(), q.y.value()]).collect(),
        },
    })
}

fn default_lo() -> f64 {
    -1.0
}

fn default_hi() -> f64 {
    4.0
}

fn default_tol_db() -> f64 {
    0.01
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ThresholdRequest {
    pub profile: ProfileSpec,
    #[serde(default = "default_lo")]
    pub lo_db: f64,
    #[serde(default = "default_hi")]
    pub hi_db: f64,
    #[serde(default = "default_tol_db")]
    pub tol_db: f64,
}

#[derive(Debug, Serialize)]
pub struct ThresholdResponse {
    pub threshold_db: f64,
    pub channel_snr: f64,
    pub design_rate: f64,
}

/// Decoding threshold of an LDPC ensemble in `Eb/N0` dB.
pub fn ldpc_threshold_json(req: &str) -> Result<String, String> {
    let r: ThresholdRequest = parse(req)?;
    let p = r.profile.resolve()?;
    let t = threshold_with(
        &p,
        r.lo_db,
        r.hi_db,
        r.tol_db,
        DEFAULT_MAX_ITER,
        DEFAULT_TOL,
    )
    .map_err(err)?;
    reply(&ThresholdResponse {
        threshold_db: t,
        channel_snr: channel_snr_from_ebno(&p, t).map_err(err)?.value(),
        design_rate: p.design_rate(),
    })
}

/// `φ(γ)` for a single SNR.
pub fn phi_value(gamma: f64) -> Result<f64, String> {
    Ok(phi_half(Snr::new(gamma).map_err(err)?.value()))
}

#[wasm_bindgen]
pub fn component_curve(req: &str) -> Result<String, JsError> {
    component_curve_json(req).map_err(|e| JsError::new(&e))
}

#[wasm_bindgen]
pub fn ldpc_chart(req: &str) -> Result<String, JsError> {
    ldpc_chart_json(req).map_err(|e| JsError::new(&e))
}

#[wasm_bindgen]
pub fn ldpc_threshold(req: &str) -> Result<String, JsError> {
    ldpc_threshold_json(req).map_err(|e| JsError::new(&e))
}

#[wasm_bindgen]
pub fn phi(gamma: f64) -> Result<f64, JsError> {
    phi_value(gamma).map_err(|e| JsError::new(&e))
}
