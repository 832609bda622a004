use std::fs;
use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use acthull::data::load_vectors;
use acthull::geometry::exact_extremes_2d;
use serde_json::Value;
use sha2::{Digest, Sha256};
use tempfile::TempDir;

const MNIST: &str = concat!(env!("CARGO_MANIFEST_DIR"), "/../../data/mnist-5k");

fn acthull(dir: &Path, args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_acthull"))
        .current_dir(dir)
        .env_remove("RUST_BACKTRACE")
        .args(args)
        .output()
        .expect("spawn acthull")
}

fn ok(dir: &Path, args: &[&str]) -> String {
    let out = acthull(dir, args);
    assert!(
        out.status.success(),
        "acthull {args:?} failed:\n{}",
        String::from_utf8_lossy(&out.stderr)
    );
    String::from_utf8(out.stdout).unwrap()
}

fn json(path: &Path) -> Value {
    serde_json::from_str(&fs::read_to_string(path).unwrap()).unwrap()
}

fn mnist(name: &str) -> String {
    format!("{MNIST}/{name}")
}

#[test]
fn toy_hull_matches_exact_planar_hull() {
    let tmp = TempDir::new().unwrap();
    let d = tmp.path();
    for (kind, noise) in [("moons", "0.05"), ("circles", "0.05"), ("centers", "0")] {
        let data = format!("{kind}.csv");
        let hull = format!("{kind}.json");
        ok(
            d,
            &[
                "gen-toy", "--kind", kind, "--n", "150", "--noise", noise, "--seed", "3", "--out",
                &data,
            ],
        );
        for algo in ["revised-ge", "ge"] {
            ok(
                d,
                &[
                    "hull",
                    "build",
                    "--input",
                    &data,
                    "--algo",
                    algo,
                    "--epsilon-rel",
                    "1e-9",
                    "--out",
                    &hull,
                ],
            );
            let got: Vec<usize> = json(&d.join(&hull))["vertex_indices"]
                .as_array()
                .unwrap()
                .iter()
                .map(|v| v.as_u64().unwrap() as usize)
                .collect();
            let pts = load_vectors(d.join(&data)).unwrap();
            let want = exact_extremes_2d(&pts.vectors).unwrap();
            assert_eq!(got, want, "{kind} {algo}");
        }
    }
}

#[test]
fn svg_overlay_is_written() {
    let tmp = TempDir::new().unwrap();
    let d = tmp.path();
    ok(
        d,
        &[
            "gen-toy", "--kind", "center", "--n", "60", "--out", "c.avec",
        ],
    );
    ok(
        d,
        &[
            "hull", "build", "--input", "c.avec", "--out", "h.json", "--svg", "h.svg",
        ],
    );
    let svg = fs::read_to_string(d.join("h.svg")).unwrap();
    assert!(svg.starts_with("<svg") || svg.starts_with("<?xml"));
    assert!(svg.matches("<circle").count() >= 60);
}

#[test]
fn bench_ge_costs_more_qp_solves() {
    let tmp = TempDir::new().unwrap();
    let d = tmp.path();
    ok(
        d,
        &[
            "gen-toy", "--kind", "moons", "--n", "100", "--noise", "0.05", "--seed", "1", "--out",
            "m.csv",
        ],
    );
    ok(
        d,
        &["hull", "bench", "--inputs", "m.csv", "--out", "bench.csv"],
    );
    let text = fs::read_to_string(d.join("bench.csv")).unwrap();
    let mut lines = text.lines();
    assert_eq!(
        lines.next().unwrap(),
        "dataset,algo,n,d,vertices,iterations,qp_solve_count,wall_time_secs"
    );
    let rows: Vec<Vec<&str>> = lines.map(|l| l.split(',').collect()).collect();
    assert_eq!(rows.len(), 2);
    let qp = |algo: &str| -> u64 {
        rows.iter().find(|r| r[1] == algo).unwrap()[6]
            .parse()
            .unwrap()
    };
    assert!(qp("ge") > qp("revised-ge"));
    assert_eq!(
        rows[0][4], rows[1][4],
        "both builders find the same vertex count"
    );
}

#[test]
fn missing_input_names_the_path() {
    let tmp = TempDir::new().unwrap();
    let d = tmp.path();
    let cases: [&[&str]; 4] = [
        &["hull", "build", "--input", "absent.csv", "--out", "h.json"],
        &[
            "analyze",
            "radius",
            "--acts",
            "absent.avec",
            "--out",
            "r.json",
        ],
        &[
            "baseline",
            "knn",
            "--train",
            "absent.avec",
            "--test",
            "absent.avec",
            "--out",
            "k.csv",
        ],
        &[
            "convert",
            "--images",
            "absent-images.gz",
            "--labels",
            "absent-labels.gz",
            "--out",
            "x.avec",
        ],
    ];
    for args in cases {
        let out = acthull(d, args);
        assert!(!out.status.success(), "{args:?} should fail");
        let err = String::from_utf8_lossy(&out.stderr);
        assert!(err.contains("absent"), "{args:?}: {err}");
        assert!(!err.contains("Stack backtrace"), "{args:?}: {err}");
    }
}

#[test]
fn bad_arguments_are_rejected() {
    let tmp = TempDir::new().unwrap();
    let d = tmp.path();
    ok(
        d,
        &["gen-toy", "--kind", "moons", "--n", "40", "--out", "m.csv"],
    );
    for args in [
        vec!["gen-toy", "--kind", "spiral", "--out", "s.csv"],
        vec![
            "hull",
            "build",
            "--input",
            "m.csv",
            "--epsilon-rel",
            "-1",
            "--out",
            "h.json",
        ],
        vec![
            "hull",
            "build",
            "--input",
            "m.csv",
            "--algo",
            "quickhull",
            "--out",
            "h.json",
        ],
        vec![
            "baseline", "knn", "--train", "m.csv", "--test", "m.csv", "--k", "0", "--out", "k.csv",
        ],
    ] {
        let out = acthull(d, &args);
        assert!(!out.status.success(), "{args:?} should fail");
    }
}

fn sha256(path: &Path) -> String {
    hex::encode(Sha256::digest(fs::read(path).unwrap()))
}

#[test]
fn manifest_records_inputs_and_outputs() {
    let tmp = TempDir::new().unwrap();
    let d = tmp.path();
    ok(
        d,
        &[
            "gen-toy", "--kind", "circles", "--n", "80", "--noise", "0.05", "--seed", "9", "--out",
            "c.csv",
        ],
    );
    ok(
        d,
        &[
            "baseline", "knn", "--train", "c.csv", "--test", "c.csv", "--k", "3", "--out", "k.json",
        ],
    );
    let m = json(&d.join("k.json.manifest.json"));
    assert_eq!(m["command"], "baseline knn");
    assert_eq!(m["config"]["k"], 3);
    assert!(m["threads"].as_u64().unwrap() >= 1);
    assert_eq!(m["inputs"][0]["sha256"], sha256(&d.join("c.csv")));
    assert_eq!(m["outputs"][0]["sha256"], sha256(&d.join("k.json")));
    assert!(m["wall_time_secs"].as_f64().unwrap() >= 0.0);
    let g = json(&d.join("c.csv.manifest.json"));
    assert_eq!(g["seed"], 9);
    assert_eq!(g["inputs"].as_array().unwrap().len(), 0);
}

/// Runs a small MNIST pipeline in `dir` and returns the files whose bytes
/// must not depend on the run.
fn pipeline(dir: &Path, threads: &str) -> Vec<PathBuf> {
    let t = |args: &[&str]| {
        let mut v = vec!["--threads", threads];
        v.extend_from_slice(args);
        ok(dir, &v)
    };
    t(&[
        "convert",
        "--images",
        &mnist("train-images-idx3-ubyte.gz"),
        "--labels",
        &mnist("train-labels-idx1-ubyte.gz"),
        "--limit",
        "300",
        "--out",
        "train.avec",
    ]);
    t(&[
        "convert",
        "--images",
        &mnist("t10k-images-idx3-ubyte.gz"),
        "--labels",
        &mnist("t10k-labels-idx1-ubyte.gz"),
        "--limit",
        "100",
        "--out",
        "test.avec",
    ]);
    t(&["convert", "--input", "test.avec", "--out", "test.csv"]);
    t(&[
        "mlp",
        "train",
        "--train",
        "train.avec",
        "--test",
        "test.avec",
        "--widths",
        "32,32",
        "--epochs",
        "3",
        "--seed",
        "5",
        "--out",
        "mlp.json",
    ]);
    for (split, data) in [("train", "train.avec"), ("test", "test.avec")] {
        t(&[
            "mlp",
            "extract",
            "--model",
            "mlp.json",
            "--data",
            data,
            "--layer",
            "2",
            "--split",
            split,
            "--out",
            &format!("l2_{split}.avec"),
        ]);
    }
    t(&[
        "classify",
        "fit",
        "--acts-train",
        "l2_train.avec",
        "--out",
        "model",
    ]);
    t(&[
        "classify",
        "eval",
        "--acts-train",
        "l2_train.avec",
        "--acts-test",
        "l2_test.avec",
        "--mlp-report",
        "mlp.json.report.json",
        "--dataset",
        "mnist",
        "--out",
        "eval",
    ]);
    t(&[
        "analyze",
        "extreme",
        "--acts",
        "l2_train.avec",
        "--out",
        "extreme.json",
    ]);
    t(&[
        "analyze",
        "inclusion",
        "--acts",
        "l2_train.avec",
        "--hulls",
        "model",
        "--out",
        "inclusion.json",
    ]);
    t(&[
        "analyze",
        "inner-hist",
        "--acts",
        "l2_train.avec",
        "--csv-dir",
        "hist",
        "--out",
        "hist.json",
    ]);
    t(&[
        "analyze",
        "inter-matrix",
        "--acts",
        "l2_train.avec",
        "--csv",
        "matrix.csv",
        "--out",
        "matrix.json",
    ]);
    t(&[
        "analyze",
        "radius",
        "--acts",
        "l2_train.avec",
        "--out",
        "radius.json",
    ]);
    t(&[
        "baseline",
        "knn",
        "--train",
        "train.avec",
        "--test",
        "test.avec",
        "--out",
        "knn.csv",
    ]);
    t(&[
        "baseline",
        "logreg",
        "--train",
        "l2_train.avec",
        "--test",
        "l2_test.avec",
        "--max-iters",
        "50",
        "--out",
        "logreg.json",
    ]);

    let mut files = vec![
        "train.avec",
        "test.avec",
        "test.csv",
        "mlp.json",
        "mlp.json.report.json",
        "l2_train.avec",
        "l2_train.avec.meta.json",
        "l2_test.avec",
        "eval/accuracy.csv",
        "eval/report.json",
        "extreme.json",
        "inclusion.json",
        "hist.json",
        "matrix.csv",
        "matrix.json",
        "radius.json",
        "knn.csv",
        "logreg.json",
    ]
    .into_iter()
    .map(PathBuf::from)
    .collect::<Vec<_>>();
    for c in 0..10 {
        files.push(PathBuf::from(format!("model/class_{c}.avec")));
        files.push(PathBuf::from(format!("hist/inner_class_{c}.csv")));
    }
    files
}

#[test]
fn pipeline_is_deterministic_across_runs_and_threads() {
    let a = TempDir::new().unwrap();
    let b = TempDir::new().unwrap();
    let files = pipeline(a.path(), "1");
    pipeline(b.path(), "2");
    for f in &files {
        let x = fs::read(a.path().join(f)).unwrap_or_else(|e| panic!("{}: {e}", f.display()));
        let y = fs::read(b.path().join(f)).unwrap();
        assert!(x == y, "{} differs between runs", f.display());
    }

    let d = a.path();
    let eval = json(&d.join("eval/report.json"));
    let layer = &eval["data"]["layers"][0];
    assert_eq!(layer["layer_index"], 2);
    assert!(eval["data"]["gap"]["mlp_gap"].is_number());
    let csv = fs::read_to_string(d.join("eval/accuracy.csv")).unwrap();
    assert!(csv.starts_with("dataset,split,layer_2\nmnist,train,"));

    let meta = json(&d.join("l2_train.avec.meta.json"));
    assert_eq!(meta["data"]["layer_index"], 2);
    assert_eq!(meta["data"]["split"], "train");
    let acts = acthull::nn::load_activations(d.join("l2_train.avec")).unwrap();
    assert_eq!((acts.len(), acts.dim()), (300, 32));

    let model = json(&d.join("model/model.json"));
    assert_eq!(model["schema"], "nearest-hull-model");
}
