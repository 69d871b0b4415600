use std::process::{Command, Output};

fn bianchi(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_bianchi"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn stderr(o: &Output) -> String {
    String::from_utf8(o.stderr.clone()).unwrap()
}

const EH: &[&str] = &[
    "--group", "IX", "--kind", "hk", "--family", "eguchi-hanson", "--a", "1",
    "--t-min", "1.1", "--t-max", "3", "--samples", "25",
];

fn with<'a>(base: &[&'a str], extra: &[&'a str]) -> Vec<&'a str> {
    base.iter().chain(extra).copied().collect()
}

/// Eguchi-Hanson flags behind a subcommand.
fn eh<'a>(sub: &'a str, extra: &[&'a str]) -> Vec<&'a str> {
    with(&with(&[sub], EH), extra)
}

#[test]
fn list_shows_partners_and_rejects_class_b() {
    let o = bianchi(&["list"]);
    assert_eq!(o.status.code(), Some(0));
    let text = stdout(&o);
    let row = |g: &str| {
        text.lines()
            .find(|l| l.split_whitespace().next() == Some(g))
            .unwrap_or_else(|| panic!("no row {g}"))
            .to_string()
    };
    assert!(row("IX").contains("(1,1,1)") && row("IX").contains("(1,1,-1)"));
    assert!(row("IX").contains("VIII"));
    assert!(row("VII0").contains("VI0"));
    for b in ["V", "IV", "III", "VIIa", "VIa"] {
        assert!(row(b).contains("Bianchi type A"), "{b}");
    }

    let json: serde_json::Value = serde_json::from_str(&stdout(&bianchi(&["list", "--format", "json"]))).unwrap();
    let rows = json.as_array().unwrap();
    assert_eq!(rows.len(), 11);
    let viii = rows.iter().find(|r| r["group"] == "VIII").unwrap();
    assert_eq!(viii["sigma_hk"], serde_json::json!([1, 1, -1]));
    assert_eq!(viii["hs_partner"], "IX");
}

#[test]
fn eguchi_hanson_passes() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("eh.json");
    let o = bianchi(&eh("verify", &["--out", path.to_str().unwrap()]));
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    let run: serde_json::Value = serde_json::from_slice(&std::fs::read(&path).unwrap()).unwrap();
    assert_eq!(run["verdict"], "pass");
    let results = run["results"].as_array().unwrap();
    assert_eq!(results.len(), 25);
    for r in results {
        assert!(r["ricci_max_abs"].as_f64().unwrap() < 1e-8);
        assert!(r["dF_max_abs"].as_f64().unwrap() < 1e-12);
        assert_eq!(r["pass"]["all"], true);
    }
}

#[test]
fn perturbed_run_fails_with_exit_one() {
    let o = bianchi(&eh("verify", &["--perturb", "1e-2"]));
    assert_eq!(o.status.code(), Some(1));
    let run: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(run["verdict"], "fail");
    assert!(run["results"][0]["residual_max_abs"].as_f64().unwrap() > 1e-4);
}

#[test]
fn class_b_group_is_a_usage_error() {
    for g in ["V", "IV", "III", "VIIa"] {
        let o = bianchi(&[
            "verify", "--group", g, "--kind", "hk", "--family", "flat", "--t-min", "0", "--t-max", "1",
        ]);
        assert_eq!(o.status.code(), Some(2), "{g}");
        assert!(stderr(&o).contains("Bianchi type A"), "{g}: {}", stderr(&o));
    }
    let o = bianchi(&[
        "verify", "--group", "VIa", "--group-a", "3", "--kind", "hs", "--family", "flat",
        "--t-min", "0", "--t-max", "1",
    ]);
    assert_eq!(o.status.code(), Some(2));
    assert!(stderr(&o).contains("Bianchi type A"));
}

#[test]
fn malformed_input_is_a_usage_error() {
    assert_eq!(bianchi(&["verify", "--group", "IX"]).status.code(), Some(2));
    assert_eq!(bianchi(&["frobnicate"]).status.code(), Some(2));
    let missing_param = bianchi(&[
        "verify", "--group", "IX", "--kind", "hk", "--family", "eguchi-hanson", "--t-min", "1.1",
        "--t-max", "2",
    ]);
    assert_eq!(missing_param.status.code(), Some(2));
    assert!(stderr(&missing_param).contains("--a"));
    // bolt at t = a lies inside the window
    let outside = bianchi(&[
        "verify", "--group", "IX", "--kind", "hk", "--family", "eguchi-hanson", "--a", "1",
        "--t-min", "0.5", "--t-max", "2",
    ]);
    assert_eq!(outside.status.code(), Some(2));
    // a triaxial family does not solve the hyper-symplectic IX system
    let mismatch = bianchi(&[
        "verify", "--group", "IX", "--kind", "hs", "--family", "bgpp-triaxial", "--a", "1", "--b",
        "2", "--c", "3", "--t-min", "3.5", "--t-max", "4",
    ]);
    assert_eq!(mismatch.status.code(), Some(2));
}

#[test]
fn reports_are_byte_identical() {
    let dir = tempfile::tempdir().unwrap();
    let a = dir.path().join("a.json");
    let b = dir.path().join("b.json");
    for p in [&a, &b] {
        let o = bianchi(&eh("verify", &["--out", p.to_str().unwrap()]));
        assert_eq!(o.status.code(), Some(0));
    }
    let (x, y) = (std::fs::read(&a).unwrap(), std::fs::read(&b).unwrap());
    assert!(!x.is_empty());
    assert_eq!(x, y);
}

#[test]
fn triaxial_trajectory_export() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("traj.csv");
    let o = bianchi(&[
        "export", "--group", "IX", "--kind", "hk", "--family", "bgpp-triaxial", "--a", "1", "--b",
        "2", "--c", "3", "--t-min", "3.1", "--t-max", "6", "--samples", "100", "--out",
        path.to_str().unwrap(),
    ]);
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    let mut rdr = csv::Reader::from_path(&path).unwrap();
    assert_eq!(rdr.headers().unwrap(), vec!["t", "f1", "f2", "f3", "f"]);
    let rows: Vec<Vec<f64>> = rdr
        .records()
        .map(|r| r.unwrap().iter().map(|x| x.parse().unwrap()).collect())
        .collect();
    assert_eq!(rows.len(), 100);
    for r in &rows {
        assert!(r[1] != r[2] && r[2] != r[3] && r[1] != r[3], "{r:?}");
        assert!(r.iter().all(|v| v.is_finite()));
    }
}

#[test]
fn integrated_trajectory_tracks_the_closed_form() {
    let base = [
        "export", "--group", "IX", "--kind", "hk", "--family", "bgpp-triaxial", "--a", "1", "--b",
        "2", "--c", "3", "--t-min", "3.2", "--t-max", "5", "--samples", "10", "--format", "json",
    ];
    let exact: serde_json::Value = serde_json::from_str(&stdout(&bianchi(&base))).unwrap();
    let rk = bianchi(&with(&base, &["--source", "integrate", "--step", "1e-3"]));
    assert_eq!(rk.status.code(), Some(0), "{}", stderr(&rk));
    let rk: serde_json::Value = serde_json::from_str(&stdout(&rk)).unwrap();
    let (e, r) = (exact["points"].as_array().unwrap(), rk["points"].as_array().unwrap());
    assert_eq!(e.len(), r.len());
    for (p, q) in e.iter().zip(r) {
        for i in 0..3 {
            let d = p["f"][i].as_f64().unwrap() - q["f"][i].as_f64().unwrap();
            assert!(d.abs() < 1e-8, "{d}");
        }
    }
}

#[test]
fn heisenberg_metric_export() {
    let o = bianchi(&[
        "export", "--group", "II", "--kind", "hk", "--family", "heisenberg-gh", "--t-min", "4",
        "--t-max", "4", "--samples", "1", "--what", "metric", "--format", "json",
    ]);
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    let v: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    let g: Vec<f64> = v[0]["g"].as_array().unwrap().iter().map(|x| x.as_f64().unwrap()).collect();
    // upper triangle of diag(4, 4, 4, 1/4) in (t, x, y, z)
    let want = [4.0, 0.0, 0.0, 0.0, 4.0, 0.0, 0.0, 4.0, 0.0, 0.25];
    for (a, b) in g.iter().zip(want) {
        assert!((a - b).abs() < 1e-14);
    }
    assert_eq!(v[0]["signature"], serde_json::json!([4, 0]));

    let hs = bianchi(&[
        "export", "--group", "II", "--kind", "hs", "--family", "heisenberg-gh", "--t-min", "1",
        "--t-max", "2", "--samples", "3", "--what", "metric", "--coords", "0.3,-1,2",
    ]);
    assert_eq!(hs.status.code(), Some(0), "{}", stderr(&hs));
    for line in stdout(&hs).lines().skip(1) {
        assert!(line.ends_with(",2,2"), "{line}");
    }
}

#[test]
fn flat_curvature_series_vanishes() {
    let o = bianchi(&[
        "export", "--group", "I", "--kind", "hk", "--family", "flat", "--t-min", "0", "--t-max",
        "2", "--samples", "5", "--what", "plot",
    ]);
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    let text = stdout(&o);
    let mut lines = text.lines();
    assert_eq!(lines.next(), Some("t,ricci_max_abs,weyl_sd_norm,riemann_norm"));
    let mut n = 0;
    for line in lines {
        let v: Vec<f64> = line.split(',').map(|x| x.parse().unwrap()).collect();
        assert!(v[1..].iter().all(|x| x.abs() < 1e-12), "{line}");
        n += 1;
    }
    assert_eq!(n, 5);

    let curved = bianchi(&eh("export", &["--what", "curvature", "--format", "json"]));
    assert_eq!(curved.status.code(), Some(0), "{}", stderr(&curved));
    let reports: serde_json::Value = serde_json::from_str(&stdout(&curved)).unwrap();
    assert!(reports[0]["riemann_norm"].as_f64().unwrap() > 1e-2);
    assert!(reports[0]["weyl_sd_norm"].as_f64().unwrap() < 1e-8);
}

#[test]
fn unwritable_output_is_a_usage_error() {
    let dir = tempfile::tempdir().unwrap();
    let bad = dir.path().join("missing").join("out.json");
    let o = bianchi(&eh("verify", &["--out", bad.to_str().unwrap()]));
    assert_eq!(o.status.code(), Some(2));
    assert!(stderr(&o).contains("cannot write"));
}
