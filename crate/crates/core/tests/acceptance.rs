//! Acceptance suite: one PASS/FAIL line per criterion with the measured
//! value, the tolerance and the wall time against its budget.

use std::process::ExitCode;
use std::time::{Duration, Instant};

use msechart::awgn::*;
use msechart::charts::presets::{designed_profile, CodePreset};
use msechart::charts::*;
use msechart::decoders::*;
use msechart::rng::{self, Op};
use rand::Rng;
use rand_distr::StandardNormal;

struct Outcome {
    pass: bool,
    detail: String,
}

fn check(pass: bool, detail: impl Into<String>) -> Outcome {
    Outcome {
        pass,
        detail: detail.into(),
    }
}

fn snr(v: f64) -> Snr {
    Snr::new(v).unwrap()
}

fn immse() -> Outcome {
    let grid = snr_grid(&linear_grid(0.1, 10.0, 991)).unwrap();
    let worst = verify_immse(&grid, 1e-3, BitPrior::UNIFORM).unwrap();
    check(
        worst <= 1e-4,
        format!("max |dI2/dγ − φ/ln4| = {worst:.3e} (tol 1e-4)"),
    )
}

fn total_area() -> Outcome {
    let c = MmseSnrCurve::analytic(&default_grid(), phi_half, TailRule::AnalyticTail).unwrap();
    let a = area(&c).unwrap().area;
    let dev = (a - LN4).abs();
    check(
        dev <= 1e-3,
        format!("∫φ = {a:.7} vs ln4 = {LN4:.7}, |Δ| = {dev:.2e} (tol 1e-3)"),
    )
}

fn conv_areas() -> Outcome {
    let mut grid = vec![0.0];
    grid.extend(log_grid(0.02, 4.0, 19));
    let mc = McSettings {
        samples: 1_000_000,
        seed: 1,
        block_len: 10_000,
    };
    let target = std::f64::consts::LN_2;
    let mut pass = true;
    let mut parts = Vec::new();
    for name in ["conv-5-7", "conv-23-35"] {
        let code: CodePreset = name.parse().unwrap();
        let pts = outer_points(&code, &grid, mc).unwrap();
        let curve = MmseSnrCurve::from_points(&pts, TailRule::AnalyticTail).unwrap();
        let r = area(&curve).unwrap();
        let rel = (r.area / target - 1.0).abs();
        pass &= rel <= 0.03;
        parts.push(format!(
            "{name} area {:.4} ± {:.1e} ({:+.2}% of ln2)",
            r.area,
            r.stderr,
            100.0 * (r.area / target - 1.0)
        ));
    }
    check(pass, format!("{} (tol 3%)", parts.join(", ")))
}

fn repetition_ext_areas() -> Outcome {
    let mut pass = true;
    let mut worst = 0.0f64;
    for n in [2u32, 3, 4, 8] {
        let c = repetition_curve(n, &default_grid(), Role::Outer).unwrap();
        let a = area(&to_mmse_vs_snr(&c, Axis::Extrinsic).unwrap())
            .unwrap()
            .area;
        let dev = (a - (1.0 - 1.0 / n as f64) * LN4).abs();
        worst = worst.max(dev);
        pass &= dev <= 1e-3;
    }
    check(
        pass,
        format!("N ∈ {{2,3,4,8}}: max |area − (1−1/N)ln4| = {worst:.2e} (tol 1e-3)"),
    )
}

fn inner_areas() -> Outcome {
    let grid = snr_grid(&default_grid()).unwrap();
    let mut worst = 0.0f64;
    for s in [0.5, 1.0, 2.0] {
        let c = uncoded_inner_curve(&InnerChannelSpec::awgn(snr(s)), &grid).unwrap();
        let a = area(&c).unwrap().area;
        worst = worst.max((a - LN4 * (1.0 - mutual_info_half(s))).abs());
    }
    let mut worst_er = 0.0f64;
    for eps in [0.3, 0.5] {
        let c = uncoded_inner_curve(&InnerChannelSpec::erasure(eps).unwrap(), &grid).unwrap();
        worst_er = worst_er.max((area(&c).unwrap().area - eps * LN4).abs());
    }
    check(
        worst <= 1e-3 && worst_er <= 1e-3,
        format!("awgn max |Δ| = {worst:.2e}, erasure max |Δ| = {worst_er:.2e} (tol 1e-3)"),
    )
}

fn thresholds() -> Outcome {
    let regular = threshold(&DegreeProfile::regular(3, 6).unwrap(), -1.0, 4.0, 0.01).unwrap();
    let designed = threshold(&designed_profile(), -1.0, 4.0, 0.01).unwrap();
    let ok_r = (regular - 1.05).abs() <= 0.15;
    let ok_d = (designed - 0.51).abs() <= 0.15;
    check(
        ok_r && ok_d,
        format!("(3,6) {regular:.3} dB vs 1.05 ± 0.15; designed {designed:.3} dB vs 0.51 ± 0.15"),
    )
}

fn oracle_equivalence() -> Outcome {
    let code: CodePreset = "conv-5-7".parse().unwrap();
    let CodePreset::Conv(code) = code else {
        unreachable!()
    };
    let t = Trellis::new(&code);
    let mut worst = 0.0f64;
    for b in 0..100u64 {
        let mut r = rng::stream(2024, Op::BcjrOracle, b);
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
        let fast = bcjr_extrinsic(&code, &InnerChannelSpec::awgn(snr(g)), &ap, &y).unwrap();
        let llr: Vec<f64> = ap
            .iter()
            .copied()
            .chain(y.iter().map(|v| 2.0 * g.sqrt() * v))
            .collect();
        let exact = brute_force_app(&trellis_codebook(&t, k).unwrap(), &llr).unwrap();
        for (a, e) in fast.info_ext.iter().chain(&fast.coded_ext).zip(&exact) {
            worst = worst.max((a - e).abs());
        }
    }
    check(
        worst <= 1e-9,
        format!("100 blocks, max |BCJR − APP| = {worst:.2e} (tol 1e-9)"),
    )
}

fn measure_identity() -> Outcome {
    let mut pass = true;
    let mut parts = Vec::new();
    for (i, m) in [0.5, 2.0, 8.0].into_iter().enumerate() {
        let e = sample_consistent_llr(m, 1_000_000, 100 + i as u64).unwrap();
        let m2 = extract_measure_with_stderr(&e, MeasureKind::Fidelity).unwrap();
        let m4 = extract_measure_with_stderr(&e, MeasureKind::OneMinusMse).unwrap();
        let combined = (m2.stderr.powi(2) + m4.stderr.powi(2)).sqrt();
        let gap = (m2.value - m4.value).abs();
        let blind = extract_measure(&e.without_labels(), MeasureKind::OneMinusMse).unwrap();
        let exact = blind.to_bits() == m4.value.to_bits();
        pass &= gap <= 3.0 * combined && exact;
        parts.push(format!(
            "m={m}: |M2−M4| = {gap:.2e} ≤ 3·{combined:.2e}, unlabeled M4 bit-exact {exact}"
        ));
    }
    check(pass, parts.join("; "))
}

fn rate_ordering() -> Outcome {
    let grid = default_grid();
    let rate = |c: &TransferCurve| {
        let a = area(&to_mmse_vs_snr(c, Axis::APriori).unwrap())
            .unwrap()
            .area;
        rate_from_area(a, Role::Outer, Axis::APriori).unwrap().rate
    };
    let curves: Vec<TransferCurve> = [2u32, 3, 4]
        .iter()
        .map(|&n| repetition_curve(n, &grid, Role::Outer).unwrap())
        .collect();
    let rates: Vec<f64> = curves.iter().map(rate).collect();
    let mut pass = rates[0] > rates[1] && rates[1] > rates[2];
    for w in curves.windows(2) {
        let dominated = w[1]
            .points()
            .iter()
            .zip(w[0].points())
            .all(|(lo, hi)| lo.mmse_ext.value() <= hi.mmse_ext.value());
        pass &= dominated;
    }
    let same = curves.iter().all(|c| rate(c) == rate(&c.clone()));
    pass &= same;
    check(
        pass,
        format!(
            "rep-2/3/4 rates {:.4} > {:.4} > {:.4}; identical curves equal: {same}",
            rates[0], rates[1], rates[2]
        ),
    )
}

type Criterion = (&'static str, Duration, fn() -> Outcome);

fn main() -> ExitCode {
    let criteria: [Criterion; 9] = [
        ("I-MMSE derivative", Duration::from_secs(1), immse),
        ("total area under φ", Duration::from_secs(1), total_area),
        (
            "convolutional outer areas",
            Duration::from_secs(600),
            conv_areas,
        ),
        (
            "repetition extrinsic areas",
            Duration::from_secs(1),
            repetition_ext_areas,
        ),
        ("inner-code areas", Duration::from_secs(1), inner_areas),
        ("LDPC thresholds", Duration::from_secs(300), thresholds),
        (
            "BCJR oracle equivalence",
            Duration::from_secs(30),
            oracle_equivalence,
        ),
        (
            "measure identity",
            Duration::from_secs(10),
            measure_identity,
        ),
        ("rate ordering", Duration::from_secs(1), rate_ordering),
    ];
    let mut failed = 0;
    for (i, (name, budget, run)) in criteria.iter().enumerate() {
        let start = Instant::now();
        let out = run();
        let took = start.elapsed();
        let pass = out.pass && took <= *budget;
        failed += !pass as usize;
        println!(
            "{} criterion {}: {name}: {} [{:.2}s of {}s]",
            if pass { "PASS" } else { "FAIL" },
            i + 1,
            out.detail,
            took.as_secs_f64(),
            budget.as_secs()
        );
    }
    println!("acceptance: {} of {} criteria pass", 9 - failed, 9);
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
