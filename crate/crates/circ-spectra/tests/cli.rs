use std::path::Path;
use std::process::{Command, Output};

use circ_spectra::output::Table;
use circ_spectra::params::read_params;
use circ_spectra_core::{surrogate_params, GraphSpec, LawMethod, WishartIndex};

fn bin() -> Command {
    let mut c = Command::new(env!("CARGO_BIN_EXE_circ-spectra"));
    c.env_remove("CIRC_SPECTRA_THREADS");
    c
}

fn run(args: &[&str]) -> Output {
    bin().args(args).output().unwrap()
}

fn ok(args: &[&str]) -> String {
    let out = run(args);
    assert!(
        out.status.success(),
        "{args:?} failed: {}",
        String::from_utf8_lossy(&out.stderr)
    );
    String::from_utf8(out.stdout).unwrap()
}

fn read_csv(path: &Path) -> Table {
    Table::parse_csv(&std::fs::read_to_string(path).unwrap()).unwrap()
}

fn error_json(out: &Output) -> serde_json::Value {
    let text = String::from_utf8_lossy(&out.stderr);
    serde_json::from_str(text.trim()).unwrap_or_else(|e| panic!("stderr is not JSON ({e}): {text}"))
}

#[test]
fn law_single_entry() {
    let stdout = ok(&[
        "law", "--n", "1", "--u", "0", "--v", "0", "--sigma2", "1", "--tau2", "1",
    ]);
    assert_eq!(stdout, "k,nu\n1,0\n2,0\n\nk,l,T\n1,1,1\n1,2,0\n2,1,0\n2,2,1\n");
}

#[test]
fn law_files_and_sidecars() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("law");
    let o = out.to_str().unwrap();
    ok(&["law", "--preset", "fig1", "--out", o]);
    let nu = read_csv(&out.join("nu.csv"));
    let cov = read_csv(&out.join("cov.csv"));
    assert_eq!(nu.columns, ["k", "nu"]);
    assert_eq!(cov.columns, ["k", "l", "T"]);
    assert_eq!((nu.rows.len(), cov.rows.len()), (10, 100));
    let law = circ_spectra_core::spectral_law(
        &circ_spectra::presets::preset("fig1").unwrap().params(),
        LawMethod::ClosedForm,
    );
    assert_eq!(nu.column("nu").unwrap(), law.nu());
    assert_eq!(cov.rows[12][2], law.cov()[(1, 2)]);

    let meta: serde_json::Value =
        serde_json::from_str(&std::fs::read_to_string(out.join("nu.csv.meta.json")).unwrap()).unwrap();
    assert_eq!(meta["subcommand"], "law");
    assert_eq!(meta["seed"], 0);
    assert_eq!(meta["config"]["params"]["preset"], "fig1");
    assert_eq!(meta["params_hash"].as_str().unwrap().len(), 64);
    assert!(meta["version"].as_str().unwrap().starts_with(env!("CARGO_PKG_VERSION")));

    ok(&["law", "--preset", "fig1", "--format", "json", "--out", o]);
    let doc: serde_json::Value = serde_json::from_str(&std::fs::read_to_string(out.join("law.json")).unwrap()).unwrap();
    assert_eq!(doc["n"], 5);
    assert_eq!(doc["cov"][1][2].as_f64().unwrap(), law.cov()[(1, 2)]);
}

#[test]
fn refuses_overwrite_without_force() {
    let dir = tempfile::tempdir().unwrap();
    let o = dir.path().to_str().unwrap();
    let args = ["law", "--n", "2", "--out", o];
    ok(&args);
    let before = std::fs::read_to_string(dir.path().join("nu.csv")).unwrap();
    let out = run(&["law", "--n", "2", "--u", "5", "--out", o]);
    assert_eq!(out.status.code(), Some(2));
    assert_eq!(error_json(&out)["error"]["kind"], "config");
    assert_eq!(std::fs::read_to_string(dir.path().join("nu.csv")).unwrap(), before);
    ok(&["law", "--n", "2", "--u", "5", "--out", o, "--force"]);
    assert_ne!(std::fs::read_to_string(dir.path().join("nu.csv")).unwrap(), before);
}

#[test]
fn wishart_density_grid() {
    let dir = tempfile::tempdir().unwrap();
    let o = dir.path().to_str().unwrap();
    ok(&[
        "density",
        "--preset",
        "fig5",
        "--density",
        "wishart",
        "--grid",
        "0:200:0.5",
        "--out",
        o,
    ]);
    let t = read_csv(&dir.path().join("density.csv"));
    assert_eq!(t.columns, ["x", "density"]);
    assert_eq!(t.rows.len(), 401);
    assert!(t.rows.iter().all(|r| r[1] >= 0.0 && r[1].is_finite()));
    let trapezoid: f64 = t
        .rows
        .windows(2)
        .map(|w| 0.5 * (w[1][0] - w[0][0]) * (w[0][1] + w[1][1]))
        .sum();
    let law = circ_spectra_core::spectral_law(
        &circ_spectra::presets::preset("fig5").unwrap().params(),
        LawMethod::ClosedForm,
    );
    let tail = 1.0 - law.wishart_cdf(WishartIndex::Unordered, 200.0).unwrap();
    assert!((trapezoid + tail - 1.0).abs() < 1e-4, "{trapezoid} + {tail}");
}

#[test]
fn density_kinds() {
    let re = ok(&[
        "density",
        "--preset",
        "fig14",
        "--density",
        "re",
        "--grid",
        "-30:30:0.5",
    ]);
    let t = Table::parse_csv(&re).unwrap();
    let mass: f64 = t.rows.iter().map(|r| r[1] * 0.5).sum();
    assert!((mass - 1.0).abs() < 1e-3, "{mass}");

    let ordered = ok(&[
        "density",
        "--preset",
        "fig14",
        "--density",
        "im",
        "--index",
        "2",
        "--grid",
        "-2:2:1",
    ]);
    assert_eq!(Table::parse_csv(&ordered).unwrap().rows.len(), 5);

    let joint = ok(&[
        "density",
        "--preset",
        "fig1",
        "--density",
        "joint",
        "--index",
        "1",
        "--grid",
        "0:1:0.5",
        "--grid-y",
        "-1:1:1",
    ]);
    assert_eq!(Table::parse_csv(&joint).unwrap().rows.len(), 9);

    let dir = tempfile::tempdir().unwrap();
    let etas = dir.path().join("eta.csv");
    std::fs::write(&etas, "re_1,im_1,re_2,im_2,re_3,im_3\n1,0,0.5,2,-1,0.25\n0,0,0,0,0,0\n").unwrap();
    let e = etas.to_str().unwrap();
    let base = [
        "--n",
        "3",
        "--u",
        "1,0,-1",
        "--sigma2",
        "1,2,3",
        "--tau2",
        "0.5",
        "--eta-file",
        e,
    ];
    let ord = Table::parse_csv(&ok(&[&["density", "--density", "jpdf"][..], &base].concat())).unwrap();
    let unord = Table::parse_csv(&ok(&[&["density", "--density", "jpdf-unordered"][..], &base].concat())).unwrap();
    assert_eq!(ord.columns, ["row", "log_density", "density"]);
    assert_eq!(ord.rows.len(), 2);
    // The all-zero vector is fixed by every permutation.
    assert!((ord.rows[1][1] - unord.rows[1][1]).abs() < 1e-12);
}

#[test]
fn exit_codes() {
    let out = run(&["law", "--nonsense"]);
    assert_eq!(out.status.code(), Some(2));
    assert_eq!(error_json(&out)["error"]["code"], 2);

    let out = run(&["law"]);
    assert_eq!(out.status.code(), Some(2));

    let out = run(&["law", "--params", "/nonexistent/params.json"]);
    assert_eq!(out.status.code(), Some(2));

    let out = run(&[
        "density",
        "--n",
        "4",
        "--v",
        "0",
        "--tau2",
        "0",
        "--density",
        "im",
        "--grid",
        "-1:1:1",
    ]);
    assert_eq!(out.status.code(), Some(3));
    assert_eq!(error_json(&out)["error"]["kind"], "numerical");

    let out = run(&["simulate", "--n", "50", "--m", "1000", "--max-values", "1000"]);
    assert_eq!(out.status.code(), Some(4));
    assert_eq!(error_json(&out)["error"]["kind"], "capacity");

    let dir = tempfile::tempdir().unwrap();
    let etas = dir.path().join("eta.csv");
    let header: Vec<String> = (1..=18).map(|i| format!("c{i}")).collect();
    std::fs::write(&etas, format!("{}\n{}\n", header.join(","), vec!["0"; 18].join(","))).unwrap();
    let out = run(&[
        "density",
        "--n",
        "9",
        "--density",
        "jpdf-unordered",
        "--eta-file",
        etas.to_str().unwrap(),
    ]);
    assert_eq!(out.status.code(), Some(4));

    let out = bin()
        .env("CIRC_SPECTRA_THREADS", "zero")
        .args(["law", "--n", "1"])
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn simulate_is_reproducible_across_thread_counts() {
    let dirs: Vec<_> = ["1", "3"]
        .iter()
        .map(|threads| {
            let dir = tempfile::tempdir().unwrap();
            let status = bin()
                .env("CIRC_SPECTRA_THREADS", threads)
                .args([
                    "simulate", "--preset", "fig14", "--m", "3000", "--seed", "17", "--bins", "auto", "--out",
                ])
                .arg(dir.path())
                .status()
                .unwrap();
            assert!(status.success());
            dir
        })
        .collect();
    for name in ["samples.csv", "histogram.csv", "summary.json"] {
        let a = std::fs::read(dirs[0].path().join(name)).unwrap();
        let b = std::fs::read(dirs[1].path().join(name)).unwrap();
        assert!(a == b, "{name} differs");
    }
    let samples = read_csv(&dirs[0].path().join("samples.csv"));
    assert_eq!(samples.columns, ["re", "im"]);
    assert_eq!(samples.rows.len(), 3000 * 4);
}

#[test]
fn streaming_histogram_and_moments() {
    let stored = ok(&[
        "simulate",
        "--n",
        "4",
        "--m",
        "1500",
        "--observable",
        "r",
        "--bins",
        "-10:10:0.5",
    ]);
    let streamed = ok(&[
        "simulate",
        "--n",
        "4",
        "--m",
        "1500",
        "--observable",
        "r",
        "--bins",
        "-10:10:0.5",
        "--no-samples",
        "--moments",
    ]);
    // stdout holds the histogram and then the summary; the histograms agree.
    let hist = |s: &str| s.split("\n\n").find(|b| b.starts_with("lo,hi")).unwrap().to_owned();
    assert_eq!(hist(&stored), hist(&streamed));
    let summary: serde_json::Value = serde_json::from_str(streamed.split("\n\n").last().unwrap()).unwrap();
    assert_eq!(summary["moments"]["mean"].as_array().unwrap().len(), 4);

    let ordered = ok(&[
        "simulate",
        "--n",
        "3",
        "--m",
        "5",
        "--observable",
        "w",
        "--ordered",
        "true",
    ]);
    assert!(ordered.starts_with("w_1,w_2,w_3\n"));
}

#[test]
fn graph_outputs() {
    let dir = tempfile::tempdir().unwrap();
    let o = dir.path().to_str().unwrap();
    ok(&[
        "graph",
        "--kind",
        "directed",
        "--n",
        "12",
        "--p1",
        "0.3",
        "--m",
        "40",
        "--seed",
        "2",
        "--columns",
        "--out",
        o,
    ]);
    let spectrum = read_csv(&dir.path().join("spectrum.csv"));
    let columns = read_csv(&dir.path().join("columns.csv"));
    assert_eq!(spectrum.columns, ["re", "im"]);
    assert_eq!(spectrum.rows.len(), 40 * 12);
    assert_eq!(columns.columns[0], "a_1");
    assert_eq!(columns.columns[12], "b_1");
    assert_eq!(columns.rows.len(), 40);
    for (g, row) in columns.rows.iter().enumerate() {
        assert_eq!(row[0], 0.0);
        let degree: f64 = row[..12].iter().sum();
        assert_eq!(spectrum.rows[12 * g][0], degree);
    }
    let surrogate = read_params(&dir.path().join("surrogate.json")).unwrap();
    assert_eq!(surrogate, surrogate_params(&GraphSpec::directed(12, 0.3).unwrap()));

    let out = run(&["graph", "--kind", "directed", "--n", "5", "--p1", "0.3", "--p2", "0.1"]);
    assert_eq!(out.status.code(), Some(2));
    let out = run(&["graph", "--kind", "double", "--n", "5", "--p1", "0.3"]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn params_round_trip_through_files() {
    let dir = tempfile::tempdir().unwrap();
    let o = dir.path().to_str().unwrap();
    ok(&["graph", "--preset", "fig12", "--m", "2", "--out", o]);
    let path = dir.path().join("surrogate.json");
    let a = ok(&["law", "--params", path.to_str().unwrap()]);
    let b = ok(&["law", "--preset", "fig12"]);
    assert_eq!(a, b);
}

#[test]
fn directed_graph_pipeline() {
    let dir = tempfile::tempdir().unwrap();
    let g = dir.path().join("g");
    let c = dir.path().join("c");
    ok(&[
        "graph",
        "--preset",
        "fig7",
        "--tau-scenario",
        "zero",
        "--seed",
        "7",
        "--out",
        g.to_str().unwrap(),
    ]);
    let stdout = ok(&[
        "compare",
        "--params",
        g.join("surrogate.json").to_str().unwrap(),
        "--samples",
        g.join("spectrum.csv").to_str().unwrap(),
        "--density",
        "im",
        "--exclude-forced-real",
        "--out",
        c.to_str().unwrap(),
    ]);
    let report: serde_json::Value = serde_json::from_str(&stdout).unwrap();
    assert!(report["ks"].as_f64().unwrap() < 0.02, "{report}");
    assert!(report["dropped"].as_u64().unwrap() >= 2 * 2000);
    let residuals = read_csv(&c.join("residuals.csv"));
    assert_eq!(residuals.columns, ["lo", "hi", "residual"]);
    assert!(c.join("compare.json.meta.json").exists());
}
