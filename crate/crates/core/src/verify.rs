//! Self-checks of the library's identities, run by `msechart verify`.

use rand::Rng;
use rand_distr::StandardNormal;
use serde::{Deserialize, Serialize};

use crate::awgn::{
    consistency_check, extract_measure, mutual_info_half, phi_half, sample_consistent_llr,
    verify_immse, BitPrior, MeasureKind, Snr, LN4,
};
use crate::charts::{
    area, default_grid, linear_grid, repetition_curve, snr_grid, to_mmse_vs_snr, Axis,
    MmseSnrCurve, Role, TailRule,
};
use crate::decoders::{
    bcjr_extrinsic, brute_force_app, check_node_ext_mmse, check_node_transfer, trellis_codebook,
    uncoded_inner_curve, ConvCodeSpec, InnerChannelSpec, Termination, Trellis,
};
use crate::error::Result;
use crate::rng::{self, Op};

/// One measured invariant.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Check {
    pub name: String,
    pub value: f64,
    pub tolerance: f64,
    pub pass: bool,
}

fn within(name: impl Into<String>, value: f64, tolerance: f64) -> Check {
    Check {
        name: name.into(),
        value,
        tolerance,
        pass: value <= tolerance,
    }
}

/// Budget of the randomized checks.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SuiteSettings {
    pub seed: u64,
    /// LLR samples per ensemble and per check-node estimate.
    pub samples: usize,
    pub oracle_blocks: usize,
}

impl Default for SuiteSettings {
    fn default() -> Self {
        SuiteSettings {
            seed: 1,
            samples: 1_000_000,
            oracle_blocks: 100,
        }
    }
}

/// Run every check. Each value is a deviation, absolute or in standard
/// errors, compared against its tolerance.
pub fn run_suite(s: SuiteSettings) -> Result<Vec<Check>> {
    let mut out = Vec::new();

    let grid = snr_grid(&linear_grid(0.1, 10.0, 991))?;
    out.push(within(
        "immse.max_deviation",
        verify_immse(&grid, 1e-3, BitPrior::UNIFORM)?,
        1e-4,
    ));

    let full = MmseSnrCurve::analytic(&default_grid(), phi_half, TailRule::AnalyticTail)?;
    out.push(within(
        "area.total_phi",
        (area(&full)?.area - LN4).abs(),
        1e-3,
    ));

    for n in [2u32, 3, 4, 8] {
        let c = repetition_curve(n, &default_grid(), Role::Outer)?;
        let a = area(&to_mmse_vs_snr(&c, Axis::Extrinsic)?)?.area;
        out.push(within(
            format!("area.repetition_{n}_extrinsic"),
            (a - (1.0 - 1.0 / n as f64) * LN4).abs(),
            1e-3,
        ));
    }

    let sgrid = snr_grid(&default_grid())?;
    for snr in [0.5, 1.0, 2.0] {
        let c = uncoded_inner_curve(&InnerChannelSpec::awgn(Snr::new(snr)?), &sgrid)?;
        out.push(within(
            format!("area.uncoded_awgn_{snr}"),
            (area(&c)?.area - LN4 * (1.0 - mutual_info_half(snr))).abs(),
            1e-3,
        ));
    }
    for eps in [0.3, 0.5] {
        let c = uncoded_inner_curve(&InnerChannelSpec::erasure(eps)?, &sgrid)?;
        out.push(within(
            format!("area.erasure_{eps}"),
            (area(&c)?.area - eps * LN4).abs(),
            1e-3,
        ));
    }

    for (octal, name) in [(["5", "7"], "5_7"), (["23", "35"], "23_35")] {
        for term in [Termination::Terminated, Termination::Unterminated] {
            let code = ConvCodeSpec::from_octal(&octal, None, term)?;
            let tag = match term {
                Termination::Terminated => "terminated",
                Termination::Unterminated => "unterminated",
            };
            out.push(within(
                format!("bcjr_oracle.{name}_{tag}"),
                oracle_deviation(&code, s.oracle_blocks, s.seed)?,
                1e-9,
            ));
        }
    }

    for (i, m) in [0.5, 2.0, 8.0].into_iter().enumerate() {
        let e = sample_consistent_llr(m, s.samples, s.seed.wrapping_add(i as u64))?;
        let r = consistency_check(&e)?;
        out.push(Check {
            name: format!("consistency.m{m}.m2_minus_m4_in_stderr"),
            value: r.m2_m4_gap.abs() / r.m2_m4_stderr.max(f64::MIN_POSITIVE),
            tolerance: 3.0,
            // Also requires mean = variance/2 for the Gaussian ensemble.
            pass: r.pass,
        });
        let with = extract_measure(&e, MeasureKind::OneMinusMse)?;
        let without = extract_measure(&e.without_labels(), MeasureKind::OneMinusMse)?;
        out.push(within(
            format!("consistency.m{m}.unlabeled_m4_difference"),
            (with - without).abs(),
            0.0,
        ));
    }

    let g = Snr::new(2.0)?;
    let p = check_node_transfer(6, g, s.samples, s.seed)?;
    let exact = check_node_ext_mmse(6, g)?.value();
    out.push(within(
        "check_node.degree6_in_stderr",
        (p.mmse_ext.value() - exact).abs() / p.stderr,
        3.0,
    ));

    Ok(out)
}

/// Largest |BCJR − exhaustive APP| over random blocks of up to 12 info bits.
fn oracle_deviation(code: &ConvCodeSpec, blocks: usize, seed: u64) -> Result<f64> {
    let t = Trellis::new(code);
    let mut worst = 0.0f64;
    for b in 0..blocks as u64 {
        let mut r = rng::stream(seed, Op::BcjrOracle, b);
        let k = r.random_range(1..=12usize);
        let g: f64 = r.random_range(0.05..3.0);
        let ap_scale: f64 = r.random_range(0.0..3.0);
        let info: Vec<u8> = (0..k).map(|_| r.random::<bool>() as u8).collect();
        let y: Vec<f64> = t
            .encode(&info)
            .iter()
            .map(|&c| g.sqrt() * (1.0 - 2.0 * c as f64) + r.sample::<f64, _>(StandardNormal))
            .collect();
        let ap: Vec<f64> = (0..k)
            .map(|_| ap_scale * r.sample::<f64, _>(StandardNormal))
            .collect();
        let fast = bcjr_extrinsic(code, &InnerChannelSpec::awgn(Snr::new(g)?), &ap, &y)?;
        let llr: Vec<f64> = ap
            .iter()
            .copied()
            .chain(y.iter().map(|v| 2.0 * g.sqrt() * v))
            .collect();
        let exact = brute_force_app(&trellis_codebook(&t, k)?, &llr)?;
        for (a, e) in fast.info_ext.iter().chain(&fast.coded_ext).zip(&exact) {
            worst = worst.max((a - e).abs());
        }
    }
    Ok(worst)
}
