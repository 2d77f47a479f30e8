mod support;

use std::fs;

use fgc_core::ingest::read_curves;
use fgc_core::Grid;
use support::{fgc, read_report, stderr, stdout, write};

#[test]
fn shifted_predictor_is_detected() {
    let dir = tempfile::tempdir().unwrap();
    let (g, x, y) = support::shifted_ar_pair(3, 0.9, 100, 21);
    let (xp, yp, out) = (
        dir.path().join("x.csv"),
        dir.path().join("y.csv"),
        dir.path().join("r.txt"),
    );
    write(&xp, &g, x);
    write(&yp, &g, y);
    let o = fgc([
        "analyze",
        "--x",
        xp.to_str().unwrap(),
        "--y",
        yp.to_str().unwrap(),
        "--out",
        out.to_str().unwrap(),
    ]);
    assert!(o.status.success(), "{}", stderr(&o));
    let keys = read_report(&out);
    assert_eq!(keys["result.decision"], "XCausesY");
    assert!(keys["result.gcgmc_y"].parse::<f64>().unwrap() > 0.0);
    assert!(keys["result.gcgmc_x"].parse::<f64>().unwrap() < 0.0);
    assert!(
        stdout(&o).starts_with("x Granger-causes y"),
        "{}",
        stdout(&o)
    );

    let steps = fs::read_to_string(dir.path().join("r.txt.steps.csv")).unwrap();
    let mut lines = steps.lines();
    assert_eq!(
        lines.next().unwrap(),
        "direction,time_index,ise_auto,ise_cross,bandwidth_auto,bandwidth_cross"
    );
    assert_eq!(lines.count(), 2 * 20);
}

#[test]
fn report_echoes_effective_configuration() {
    let dir = tempfile::tempdir().unwrap();
    let (g, x, y) = support::independent_pair(1, 30, 11);
    let (xp, yp, out) = (
        dir.path().join("x.csv"),
        dir.path().join("y.csv"),
        dir.path().join("r.txt"),
    );
    write(&xp, &g, x);
    write(&yp, &g, y);
    let o = fgc([
        "analyze",
        "--x",
        xp.to_str().unwrap(),
        "--y",
        yp.to_str().unwrap(),
        "--train-frac",
        "0.7",
        "--deriv-order",
        "1",
        "--freeze-bandwidths",
        "--bandwidth-quantiles",
        "0.1,0.3",
        "--min-active",
        "2",
        "--out",
        out.to_str().unwrap(),
    ]);
    assert!(o.status.success(), "{}", stderr(&o));
    let k = read_report(&out);
    assert_eq!(k["format_version"], "1");
    assert_eq!(k["config.train_fraction"], "0.7");
    assert_eq!(k["config.n_total"], "30");
    assert_eq!(k["config.n_train_initial"], "21");
    assert_eq!(k["config.n_test"], "9");
    assert_eq!(k["config.derivative_order"], "1");
    assert_eq!(k["config.kernel"], "quadratic");
    assert_eq!(k["config.bandwidth_quantiles"], "0.1,0.3");
    assert_eq!(k["config.min_active_neighbors"], "2");
    assert_eq!(k["config.refresh_bandwidths"], "false");
    assert_eq!(k["x.label"], "x");
    for key in ["result.sum_ise_auto_x", "result.sum_ise_cross_y"] {
        assert!(k[key].parse::<f64>().unwrap() >= 0.0);
    }
}

#[test]
fn null_coupling_still_yields_a_decision() {
    let dir = tempfile::tempdir().unwrap();
    let (g, x, y) = support::independent_pair(8, 40, 15);
    let (xp, yp) = (dir.path().join("a.csv"), dir.path().join("b.csv"));
    write(&xp, &g, x);
    write(&yp, &g, y);
    let o = fgc([
        "analyze",
        "--x",
        xp.to_str().unwrap(),
        "--y",
        yp.to_str().unwrap(),
    ]);
    assert!(o.status.success(), "{}", stderr(&o));
    let text = stdout(&o);
    let k = support::report_keys(&text);
    let decisions = [
        "XCausesY",
        "YCausesX",
        "YMorePredictable",
        "XMorePredictable",
        "Indeterminate",
    ];
    assert!(decisions.contains(&k["result.decision"].as_str()));
    assert!(text.contains("[steps]"));
}

#[test]
fn length_mismatch_names_both_lengths() {
    let dir = tempfile::tempdir().unwrap();
    let (g, x, y) = support::independent_pair(2, 12, 7);
    let (xp, yp) = (dir.path().join("x.csv"), dir.path().join("y.csv"));
    write(&xp, &g, x);
    write(&yp, &g, y[..10].to_vec());
    let o = fgc([
        "analyze",
        "--x",
        xp.to_str().unwrap(),
        "--y",
        yp.to_str().unwrap(),
    ]);
    assert_eq!(o.status.code(), Some(2));
    let err = stderr(&o);
    assert!(err.contains("12") && err.contains("10"), "{err}");
}

#[test]
fn malformed_input_exits_with_two_and_location() {
    let dir = tempfile::tempdir().unwrap();
    let bad = dir.path().join("bad.csv");
    fs::write(&bad, "0,0.5,1\n1,2,3\n1,oops,3\n1,2,3\n1,2,3\n").unwrap();
    let o = fgc([
        "analyze",
        "--x",
        bad.to_str().unwrap(),
        "--y",
        bad.to_str().unwrap(),
    ]);
    assert_eq!(o.status.code(), Some(2));
    let err = stderr(&o);
    assert!(err.contains("oops") && err.contains('3'), "{err}");

    let missing = dir.path().join("missing.csv");
    let o = fgc([
        "analyze",
        "--x",
        missing.to_str().unwrap(),
        "--y",
        bad.to_str().unwrap(),
    ]);
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn invalid_configuration_is_rejected_before_reading_files() {
    for args in [
        vec!["--train-frac", "1.5"],
        vec!["--deriv-order", "3"],
        vec!["--bandwidth-quantiles", "0.5,0.2"],
        vec!["--min-active", "0"],
        vec!["--n-train", "1"],
    ] {
        let mut full = vec!["analyze", "--x", "nowhere-x.csv", "--y", "nowhere-y.csv"];
        full.extend(args.iter().copied());
        let o = fgc(&full);
        assert_eq!(o.status.code(), Some(2), "{args:?}: {}", stderr(&o));
    }
    let o = fgc([
        "simulate",
        "--n",
        "20",
        "--p",
        "8",
        "--reps",
        "0",
        "--out",
        "never.csv",
    ]);
    assert_eq!(o.status.code(), Some(2));
    assert!(!std::path::Path::new("never.csv").exists());
    let o = fgc(["frobnicate"]);
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn bad_thread_setting_is_a_usage_error() {
    let o = std::process::Command::new(env!("CARGO_BIN_EXE_fgc"))
        .args([
            "simulate", "--n", "20", "--p", "8", "--reps", "1", "--out", "x.csv",
        ])
        .env("FGC_THREADS", "zero")
        .output()
        .unwrap();
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn simulate_is_deterministic() {
    let dir = tempfile::tempdir().unwrap();
    let run = |name: &str, seed: &str| {
        let out = dir.path().join(name);
        let o = fgc([
            "simulate",
            "--n",
            "20",
            "--p",
            "8,10",
            "--reps",
            "2",
            "--seed",
            seed,
            "--out",
            out.to_str().unwrap(),
        ]);
        assert!(o.status.success(), "{}", stderr(&o));
        fs::read(out).unwrap()
    };
    let a = run("a.csv", "5");
    let b = run("b.csv", "5");
    assert_eq!(a, b);
    let text = String::from_utf8(a).unwrap();
    let mut lines = text.lines();
    assert_eq!(
        lines.next().unwrap(),
        "n,p,count_predictable,count_causal,replications,undefined_count"
    );
    let rows: Vec<&str> = lines.collect();
    assert_eq!(rows.len(), 2);
    assert!(rows[0].starts_with("20,8,") && rows[1].starts_with("20,10,"));
}

#[test]
fn preprocess_constant_prices_gives_zero_returns() {
    let dir = tempfile::tempdir().unwrap();
    let g = Grid::uniform(1.0, 12.0, 12).unwrap();
    let (inp, out) = (dir.path().join("p.csv"), dir.path().join("r.csv"));
    write(&inp, &g, vec![vec![7.5; 12]; 5]);
    let o = fgc([
        "preprocess",
        "log-returns",
        "--in",
        inp.to_str().unwrap(),
        "--out",
        out.to_str().unwrap(),
    ]);
    assert!(o.status.success(), "{}", stderr(&o));
    let r = read_curves(&out, b',').unwrap();
    assert_eq!(r.len(), 5);
    assert_eq!(r.grid().len(), 11);
    assert!(r.rows().all(|row| row.iter().all(|v| *v == 0.0)));
}

#[test]
fn cpi_of_one_hundred_is_the_identity() {
    let dir = tempfile::tempdir().unwrap();
    let g = Grid::uniform(0.0, 1.0, 6).unwrap();
    let prices: Vec<Vec<f64>> = (0..4)
        .map(|t| (0..6).map(|j| 10.0 + (t * 6 + j) as f64 * 0.37).collect())
        .collect();
    let (p, c, out) = (
        dir.path().join("p.csv"),
        dir.path().join("c.csv"),
        dir.path().join("o.csv"),
    );
    write(&p, &g, prices.clone());
    write(&c, &g, vec![vec![100.0; 6]; 4]);
    let o = fgc([
        "preprocess",
        "cpi-normalize",
        "--in",
        p.to_str().unwrap(),
        "--cpi",
        c.to_str().unwrap(),
        "--out",
        out.to_str().unwrap(),
    ]);
    assert!(o.status.success(), "{}", stderr(&o));
    let r = read_curves(&out, b',').unwrap();
    for (a, b) in r.rows().zip(&prices) {
        assert_eq!(a, b.as_slice());
    }
    let o = fgc([
        "preprocess",
        "cpi-normalize",
        "--in",
        p.to_str().unwrap(),
        "--out",
        out.to_str().unwrap(),
    ]);
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn preprocess_then_analyze_pipeline() {
    let dir = tempfile::tempdir().unwrap();
    let (g, x, y) = support::independent_pair(4, 24, 13);
    // Turn the curves into positive "prices".
    let to_prices = |rows: Vec<Vec<f64>>| -> Vec<Vec<f64>> {
        rows.into_iter()
            .map(|r| {
                let mut level = 100.0;
                r.iter()
                    .map(|v| {
                        level *= (0.05 * v).exp();
                        level
                    })
                    .collect()
            })
            .collect()
    };
    let (px, py) = (dir.path().join("px.csv"), dir.path().join("py.csv"));
    write(&px, &g, to_prices(x));
    write(&py, &g, to_prices(y));
    let (rx, ry) = (dir.path().join("rx.csv"), dir.path().join("ry.csv"));
    for (i, o) in [(&px, &rx), (&py, &ry)] {
        let out = fgc([
            "preprocess",
            "log-returns",
            "--midpoint",
            "--in",
            i.to_str().unwrap(),
            "--out",
            o.to_str().unwrap(),
        ]);
        assert!(out.status.success(), "{}", stderr(&out));
    }
    let report = dir.path().join("report.txt");
    let o = fgc([
        "analyze",
        "--x",
        rx.to_str().unwrap(),
        "--y",
        ry.to_str().unwrap(),
        "--out",
        report.to_str().unwrap(),
    ]);
    assert!(o.status.success(), "{}", stderr(&o));
    let k = read_report(&report);
    assert_eq!(k["config.n_total"], "24");
    assert_eq!(k["x.label"], "rx");
}

#[test]
fn tab_delimited_input_is_accepted() {
    let dir = tempfile::tempdir().unwrap();
    let (g, x, y) = support::shifted_ar_pair(1, 0.9, 20, 9);
    let (xp, yp) = (dir.path().join("x.tsv"), dir.path().join("y.tsv"));
    for (path, rows) in [(&xp, x), (&yp, y)] {
        let s = fgc_core::CurveSeries::from_rows(g.clone(), rows, "s").unwrap();
        fgc_core::ingest::write_curves(&s, path, b'\t').unwrap();
    }
    let o = fgc([
        "analyze",
        "--delimiter",
        "tab",
        "--x",
        xp.to_str().unwrap(),
        "--y",
        yp.to_str().unwrap(),
        "--n-train",
        "12",
    ]);
    assert!(o.status.success(), "{}", stderr(&o));
    let k = support::report_keys(&stdout(&o));
    assert_eq!(k["config.n_train_initial"], "12");
    assert_eq!(k["config.train_fraction"], "none");
}
