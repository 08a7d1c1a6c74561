use msechart::awgn::{mutual_info_half, phi_half, Snr, LN4};
use msechart::charts::{area, default_grid, MmseSnrCurve, TailRule};
use msechart::decoders::*;
use msechart::rng::{self, Op};
use rand::Rng;
use rand_distr::StandardNormal;

fn snr(v: f64) -> Snr {
    Snr::new(v).unwrap()
}

fn max_dev(a: &[f64], b: &[f64]) -> f64 {
    assert_eq!(a.len(), b.len());
    a.iter()
        .zip(b)
        .map(|(x, y)| {
            if x.is_infinite() || y.is_infinite() {
                if x == y {
                    0.0
                } else {
                    f64::INFINITY
                }
            } else {
                (x - y).abs()
            }
        })
        .fold(0.0, f64::max)
}

/// BCJR against enumeration of the whole block code, random inputs on
/// every info and coded bit.
fn bcjr_matches_enumeration(code: &ConvCodeSpec, lengths: &[usize], seed: u64) -> f64 {
    let t = Trellis::new(code);
    let mut worst = 0.0f64;
    for (i, &k) in lengths.iter().enumerate() {
        let mut r = rng::stream(seed, Op::BcjrOracle, i as u64);
        let n = t.coded_len(k);
        let scale: f64 = r.random_range(0.2..4.0);
        let info_ap: Vec<f64> = (0..k)
            .map(|_| scale * r.sample::<f64, _>(StandardNormal))
            .collect();
        let coded_ap: Vec<f64> = (0..n)
            .map(|_| scale * r.sample::<f64, _>(StandardNormal))
            .collect();
        let fast = t.app(&info_ap, &coded_ap).unwrap();
        let book = trellis_codebook(&t, k).unwrap();
        let llr: Vec<f64> = info_ap.iter().chain(&coded_ap).copied().collect();
        let exact = brute_force_app(&book, &llr).unwrap();
        worst = worst.max(max_dev(&fast.info_ext, &exact[..k]));
        worst = worst.max(max_dev(&fast.coded_ext, &exact[k..]));
    }
    worst
}

#[test]
fn bcjr_equals_enumeration_for_5_7() {
    let code = ConvCodeSpec::from_octal(&["5", "7"], None, Termination::Terminated).unwrap();
    let lengths: Vec<usize> = (0..40).map(|i| 1 + i % 12).collect();
    let dev = bcjr_matches_enumeration(&code, &lengths, 1);
    assert!(dev <= 1e-9, "max deviation {dev}");
}

#[test]
fn bcjr_equals_enumeration_for_other_trellises() {
    let codes = [
        ConvCodeSpec::from_octal(&["23", "35"], None, Termination::Terminated).unwrap(),
        ConvCodeSpec::from_octal(&["5", "7"], None, Termination::Unterminated).unwrap(),
        ConvCodeSpec::from_octal(&["7", "5"], Some("7"), Termination::Terminated).unwrap(),
        ConvCodeSpec::from_octal(&["23", "35"], Some("23"), Termination::Unterminated).unwrap(),
    ];
    for (i, c) in codes.iter().enumerate() {
        let dev = bcjr_matches_enumeration(c, &[3, 7, 10], 10 + i as u64);
        assert!(dev <= 1e-9, "{}: {dev}", c.label());
    }
}

#[test]
fn block_of_eight_matches_256_codewords() {
    let code = ConvCodeSpec::from_octal(&["5", "7"], None, Termination::Terminated).unwrap();
    let t = Trellis::new(&code);
    assert_eq!(trellis_codebook(&t, 8).unwrap().len(), 256);
    assert!(bcjr_matches_enumeration(&code, &[8], 99) <= 1e-9);
}

#[test]
fn bcjr_extrinsic_channel_path_matches_enumeration() {
    // Channel observations enter as 2√γ·y on the coded bits.
    let code = ConvCodeSpec::from_octal(&["5", "7"], None, Termination::Terminated).unwrap();
    let t = Trellis::new(&code);
    let mut r = rng::stream(5, Op::BcjrOracle, 1000);
    let k = 9;
    let g: f64 = 0.7;
    let info: Vec<u8> = (0..k).map(|_| r.random::<bool>() as u8).collect();
    let coded = t.encode(&info);
    let y: Vec<f64> = coded
        .iter()
        .map(|&b| g.sqrt() * (1.0 - 2.0 * b as f64) + r.sample::<f64, _>(StandardNormal))
        .collect();
    let ap: Vec<f64> = (0..k).map(|_| r.sample::<f64, _>(StandardNormal)).collect();
    let out = bcjr_extrinsic(&code, &InnerChannelSpec::awgn(snr(g)), &ap, &y).unwrap();
    let llr: Vec<f64> = ap
        .iter()
        .copied()
        .chain(y.iter().map(|v| 2.0 * g.sqrt() * v))
        .collect();
    let exact = brute_force_app(&trellis_codebook(&t, k).unwrap(), &llr).unwrap();
    assert!(max_dev(&out.info_ext, &exact[..k]) <= 1e-9);
}

#[test]
fn check_node_self_oracle() {
    let g = snr(2.0);
    let a = check_node_transfer(6, g, 1_000_000, 7).unwrap();
    let b = check_node_transfer(6, g, 10_000_000, 8).unwrap();
    let combined = (a.stderr.powi(2) + b.stderr.powi(2)).sqrt();
    assert!((a.mmse_ext.value() - b.mmse_ext.value()).abs() <= 3.0 * combined);
    let exact = check_node_ext_mmse(6, g).unwrap().value();
    assert!((b.mmse_ext.value() - exact).abs() <= 3.0 * b.stderr);
}

#[test]
fn data_processing_holds_for_simulated_points() {
    let code = ConvCodeSpec::from_octal(&["5", "7"], None, Termination::Terminated).unwrap();
    let budget = McBudget {
        block_len: 2000,
        n_blocks: 5,
        seed: 3,
    };
    for g in [0.1, 0.6, 1.5] {
        for p in [
            check_node_transfer(4, snr(g), 50_000, 1).unwrap(),
            conv_transfer_point(&code, ConvRole::Outer, snr(g), budget).unwrap(),
            conv_transfer_point(
                &code,
                ConvRole::Inner {
                    channel: InnerChannelSpec::awgn(snr(0.5)),
                },
                snr(g),
                budget,
            )
            .unwrap(),
        ] {
            let bound = p.mmse_ext.value().min(phi_half(g));
            assert!(
                p.mmse_out.value() <= bound + 3.0 * p.stderr_out + 1e-12,
                "{p:?}"
            );
        }
    }
}

fn full_area(f: impl Fn(f64) -> f64) -> f64 {
    let c = MmseSnrCurve::analytic(&default_grid(), f, TailRule::AnalyticTail).unwrap();
    area(&c).unwrap().area
}

#[test]
fn repetition_extrinsic_axis_area() {
    for n in [2u32, 3, 4, 8] {
        // On the extrinsic axis γ_ext = (N−1)γ, so the output is φ(N/(N−1)·γ_ext).
        let k = n as f64 / (n - 1) as f64;
        let a = full_area(|ge| {
            repetition_transfer(n, snr(ge / (n - 1) as f64))
                .unwrap()
                .mmse_out
                .value()
        });
        assert!(
            (a - (1.0 - 1.0 / n as f64) * LN4).abs() < 1e-3,
            "N={n}: {a}"
        );
        assert!((a - full_area(|ge| phi_half(k * ge))).abs() < 1e-12);
    }
}

#[test]
fn variable_node_output_area() {
    let p = DegreeProfile::regular(3, 6).unwrap();
    for s in [0.5, 1.0, 2.0] {
        let ch = InnerChannelSpec::awgn(snr(s));
        let a = full_area(|g| vnd_transfer(&p, &ch, snr(g)).unwrap().mmse_out.value());
        let expect = LN4 / 3.0 * (1.0 - mutual_info_half(s));
        assert!((a - expect).abs() < 1e-3, "snr {s}: {a} vs {expect}");
    }
}

#[test]
fn uncoded_inner_areas() {
    let grid = msechart::charts::snr_grid(&default_grid()).unwrap();
    for s in [0.5, 1.0, 2.0] {
        let c = uncoded_inner_curve(&InnerChannelSpec::awgn(snr(s)), &grid).unwrap();
        let a = area(&c).unwrap().area;
        assert!((a - LN4 * (1.0 - mutual_info_half(s))).abs() < 1e-3);
    }
    for eps in [0.0, 0.3, 0.5] {
        let c = uncoded_inner_curve(&InnerChannelSpec::erasure(eps).unwrap(), &grid).unwrap();
        assert!((area(&c).unwrap().area - eps * LN4).abs() < 1e-3);
    }
}
