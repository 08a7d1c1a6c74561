use msechart::awgn::{mutual_info_half, phi_half, Snr, LN4};
use msechart::charts::io::*;
use msechart::charts::presets::{designed_profile, CodePreset};
use msechart::charts::*;
use msechart::decoders::{DegreeProfile, InnerChannelSpec};

fn regular() -> DegreeProfile {
    DegreeProfile::regular(3, 6).unwrap()
}

#[test]
fn repetition_replot_is_phi_of_n_gamma() {
    let grid = default_grid();
    for n in [2u32, 3, 5] {
        let c = repetition_curve(n, &grid, Role::Outer).unwrap();
        let m = to_mmse_vs_snr(&c, Axis::APriori).unwrap();
        for p in m.points() {
            let g = p.gamma.value();
            assert!(
                (p.mmse.value() - phi_half(n as f64 * g)).abs() < 1e-8,
                "N={n} γ={g}"
            );
        }
    }
}

#[test]
fn axis_split_adds_to_full_area() {
    // A-priori and extrinsic areas of a repetition code partition ln4.
    for n in [2u32, 3, 4, 8] {
        let grid = default_grid();
        let c = repetition_curve(n, &grid, Role::Outer).unwrap();
        let ap = area(&to_mmse_vs_snr(&c, Axis::APriori).unwrap())
            .unwrap()
            .area;
        let ext = area(&to_mmse_vs_snr(&c, Axis::Extrinsic).unwrap())
            .unwrap()
            .area;
        assert!((ap - LN4 / n as f64).abs() < 1e-3, "N={n}: {ap}");
        assert!((ap + ext - LN4).abs() < 2e-3);
        let r = rate_from_area(ap, Role::Outer, Axis::APriori).unwrap();
        assert!((r.rate - 1.0 / n as f64).abs() < 1e-3);
        let r = rate_from_area(ext, Role::Outer, Axis::Extrinsic).unwrap();
        assert!((r.rate - 1.0 / n as f64).abs() < 1e-3);
    }
}

#[test]
fn regular_chart_is_open_at_1_5_db_and_closed_at_0_5_db() {
    let p = regular();
    let grid = default_grid();
    let open = ldpc_chart_pair(&p, channel_snr_from_ebno(&p, 1.5).unwrap(), &grid).unwrap();
    let g = matching_gap(&open).unwrap();
    assert!(
        !g.crossing && g.min_gap >= -g.tolerance && g.max_gap > 0.0,
        "{} {}",
        g.min_gap,
        g.max_gap
    );
    let shut = ldpc_chart_pair(&p, channel_snr_from_ebno(&p, 0.5).unwrap(), &grid).unwrap();
    let g = matching_gap(&shut).unwrap();
    assert!(g.crossing && g.min_gap < 0.0);
}

#[test]
fn trajectory_either_side_of_threshold() {
    let p = regular();
    let t = trajectory(&p, channel_snr_from_ebno(&p, 1.3).unwrap(), 500, 1e-6).unwrap();
    assert!(t.converged && t.final_mmse <= 1e-6);
    let t = trajectory(&p, channel_snr_from_ebno(&p, 0.9).unwrap(), 500, 1e-6).unwrap();
    assert!(!t.converged);
    assert!(t.final_mmse > 1e-2);
    for w in t.steps.windows(2) {
        assert!(w[1].x.value() <= w[0].x.value());
    }
}

#[test]
fn thresholds_increase_with_check_degree() {
    let th: Vec<f64> = [5, 6, 7]
        .iter()
        .map(|&dc| threshold(&DegreeProfile::regular(3, dc).unwrap(), -1.0, 4.0, 0.01).unwrap())
        .collect();
    assert!(th[0] < th[1] && th[1] < th[2], "{th:?}");
}

#[test]
fn threshold_bracket_errors() {
    let p = regular();
    assert!(threshold(&p, 2.0, 3.0, 0.01).is_err());
    assert!(threshold(&p, -3.0, -2.0, 0.01).is_err());
    assert!(threshold(&p, 1.0, 0.0, 0.01).is_err());
    let rep = DegreeProfile::from_pairs(&[(2, 1.0)], &[(2, 1.0)]).unwrap();
    assert!(threshold(&rep, 0.0, 5.0, 0.01).is_err());
}

#[test]
fn designed_profile_beats_regular() {
    let d = threshold(&designed_profile(), -1.0, 3.0, 0.01).unwrap();
    let r = threshold(&regular(), -1.0, 3.0, 0.01).unwrap();
    assert!(d < r);
}

#[test]
fn exit_curve_is_monotone_and_in_range() {
    let grid = default_grid();
    for c in [
        repetition_curve(3, &grid, Role::Outer).unwrap(),
        check_node_curve(&regular(), &grid).unwrap(),
        vnd_curve(
            &regular(),
            &InnerChannelSpec::awgn(Snr::new(1.0).unwrap()),
            &grid,
        )
        .unwrap(),
    ] {
        let e = exit_curve_from_mse(&c);
        for w in e.points.windows(2) {
            assert!(w[1].0 >= w[0].0 - 1e-12 && w[1].1 >= w[0].1 - 1e-12);
        }
        assert!(e
            .points
            .iter()
            .all(|&(a, b)| (0.0..=1.0).contains(&a) && (0.0..=1.0).contains(&b)));
    }
}

#[test]
fn exit_curve_of_repetition_is_i2_of_scaled_snr() {
    let grid = log_grid(0.01, 10.0, 20);
    let c = repetition_curve(3, &grid, Role::Outer).unwrap();
    for (&g, &(ia, ie)) in grid.iter().zip(&exit_curve_from_mse(&c).points) {
        assert!((ia - mutual_info_half(g)).abs() < 1e-8);
        assert!((ie - mutual_info_half(2.0 * g)).abs() < 1e-8);
    }
}

#[test]
fn simulated_spc_curve_matches_closed_form() {
    let grid = linear_grid(0.0, 3.0, 6);
    let mc = McSettings {
        samples: 100_000,
        seed: 4,
        block_len: 1000,
    };
    let pts = outer_points(&CodePreset::Spc(4), &grid, mc).unwrap();
    let exact = check_node_curve(&DegreeProfile::regular(3, 4).unwrap(), &grid).unwrap();
    for (p, e) in pts.iter().zip(exact.points()) {
        assert!((p.mmse_ext.value() - e.mmse_ext.value()).abs() <= 4.0 * p.stderr + 1e-12);
    }
    assert!(outer_points(&CodePreset::Ldpc(regular()), &grid, mc).is_err());
}

#[test]
fn outer_points_are_reproducible() {
    let grid = [0.3, 1.0];
    let mc = McSettings {
        samples: 20_000,
        seed: 9,
        block_len: 500,
    };
    let code: CodePreset = "conv-5-7".parse().unwrap();
    assert_eq!(
        outer_points(&code, &grid, mc).unwrap(),
        outer_points(&code, &grid, mc).unwrap()
    );
}

#[test]
fn csv_and_json_roundtrip() {
    let grid = default_grid();
    let c = repetition_curve(4, &grid, Role::Outer).unwrap();
    let mut buf = Vec::new();
    write_transfer_csv(&c, &mut buf).unwrap();
    let back = read_transfer_csv(&buf[..], Role::Outer, "rep-4").unwrap();
    assert_eq!(back, c);

    let m = to_mmse_vs_snr(&c, Axis::APriori).unwrap();
    let mut buf = Vec::new();
    write_snr_csv(&m, &mut buf).unwrap();
    assert_eq!(read_snr_csv(&buf[..], TailRule::AnalyticTail).unwrap(), m);

    let meta = CurveMetadata {
        label: "rep-4".into(),
        role: Some(Role::Outer),
        seed: None,
        grid: grid.clone(),
        tail_rule: TailRule::AnalyticTail,
        integration_error: Some(area(&m).unwrap().error_estimate),
    };
    let doc = CurveDocument::new(meta, CurveBody::MmseSnr { curve: m });
    assert_eq!(
        CurveDocument::from_json(&doc.to_json().unwrap()).unwrap(),
        doc
    );
}

#[test]
fn csv_schema_errors_name_the_column() {
    let err = read_snr_csv(&b"gamma,stderr\n0.1,0\n"[..], TailRule::AnalyticTail).unwrap_err();
    assert!(err.to_string().contains("mmse"), "{err}");
    assert!(read_snr_csv(&b""[..], TailRule::AnalyticTail).is_err());
}

#[test]
fn matching_gap_inner_side_is_closed_form() {
    // A degree-3 variable node emits u = s + 2v, so v_in(u) = (u − s)/2.
    let p = regular();
    let s = channel_snr_from_ebno(&p, 1.5).unwrap().value();
    let pair = ldpc_chart_pair(&p, Snr::new(s).unwrap(), &default_grid()).unwrap();
    let g = matching_gap(&pair).unwrap();
    let interior = g
        .gap_curve
        .iter()
        .filter(|gp| gp.u > s + 0.1 && gp.u < 20.0);
    let mut seen = 0;
    for gp in interior {
        let expect = phi_half(gp.u + (gp.u - s) / 2.0);
        assert!(
            (gp.inner - expect).abs() < 5e-3,
            "u={} {} vs {expect}",
            gp.u,
            gp.inner
        );
        seen += 1;
    }
    assert!(seen > 5);
}
