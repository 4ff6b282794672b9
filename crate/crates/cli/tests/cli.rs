use std::fs;
use std::path::Path;
use std::process::{Command, Output};

use serde_json::Value;

fn fhfilter(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_fhfilter"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn ok(args: &[&str]) -> String {
    let out = fhfilter(args);
    assert!(
        out.status.success(),
        "{args:?}: {}",
        String::from_utf8_lossy(&out.stderr)
    );
    String::from_utf8(out.stdout).unwrap()
}

fn csv_rows(path: &Path) -> (Vec<String>, Vec<Vec<f64>>) {
    let text = fs::read_to_string(path).unwrap();
    let mut lines = text.lines();
    let header = lines.next().unwrap().split(',').map(String::from).collect();
    let rows = lines
        .map(|l| l.split(',').map(|v| v.parse().unwrap()).collect())
        .collect();
    (header, rows)
}

fn json(path: &Path) -> Value {
    serde_json::from_str(&fs::read_to_string(path).unwrap()).unwrap()
}

fn eigenvalues(dir: &Path) -> Vec<(f64, f64)> {
    fs::read_to_string(dir.join("eigenvalues.txt"))
        .unwrap()
        .lines()
        .map(|l| {
            let mut it = l.split(' ').map(|v| v.parse::<f64>().unwrap());
            (it.next().unwrap(), it.next().unwrap())
        })
        .collect()
}

#[test]
fn eigen_two_by_two() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().to_str().unwrap();
    ok(&[
        "eigen",
        "--M",
        "1",
        "--no-filter",
        "--k",
        "0.5",
        "--m",
        "1",
        "--out",
        out,
    ]);
    let ev = eigenvalues(dir.path());
    assert_eq!(ev.len(), 2);
    assert!(ev.iter().all(|(re, _)| re.abs() <= 1e-14));
    assert!((ev[0].1 + 0.5).abs() <= 1e-14 && (ev[1].1 - 0.5).abs() <= 1e-14);
}

#[test]
fn eigen_spectra_with_and_without_filter() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().to_str().unwrap();
    ok(&["eigen", "--M", "30", "--no-filter", "--out", out]);
    let ev = eigenvalues(dir.path());
    assert_eq!(ev.len(), 31);
    assert!(ev.iter().all(|(re, _)| re.abs() <= 1e-10));
    // sorted by (re, im)
    assert!(ev.windows(2).all(|w| w[0] <= w[1]));

    ok(&["eigen", "--M", "30", "--filter", "hou-li", "--out", out]);
    let summary = json(&dir.path().join("eigen.json"));
    assert!(summary["spectral_abscissa"].as_f64().unwrap() < 0.0);

    let code = fhfilter(&["eigen", "--M", "30", "--m", "0", "--with-g"])
        .status
        .code();
    assert_eq!(code, Some(1));
}

#[test]
fn dispersion_root_and_sweep() {
    let text = ok(&["dispersion", "--k", "0.5"]);
    let row: Vec<f64> = text
        .lines()
        .nth(1)
        .unwrap()
        .split(',')
        .map(|v| v.parse().unwrap())
        .collect();
    assert!((row[1] - 1.416).abs() <= 1e-3);
    assert!((row[2] - 0.15336).abs() <= 1e-5);
    assert!(row[3] <= 1e-10);

    let dir = tempfile::tempdir().unwrap();
    ok(&[
        "dispersion",
        "--sweep",
        "0.3:0.6:0.05",
        "--out",
        dir.path().to_str().unwrap(),
    ]);
    let (header, rows) = csv_rows(&dir.path().join("dispersion.csv"));
    assert_eq!(header, ["k", "omega_p", "gamma", "residual"]);
    assert_eq!(rows.len(), 7);
    assert!(rows.windows(2).all(|w| w[1][2] > w[0][2]));
    assert!(rows.iter().all(|r| r[3] <= 1e-10));
}

#[test]
fn advection_early_energy_matches_closed_form() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().to_str().unwrap();
    ok(&[
        "advection",
        "--M",
        "30",
        "--no-filter",
        "--t-end",
        "5",
        "--out",
        out,
    ]);
    let (header, rows) = csv_rows(&dir.path().join("energy.csv"));
    assert_eq!(
        header,
        ["t", "E", "logE", "mass", "mode_norm_0", "mode_norm_1"]
    );
    let (_, exact) = csv_rows(&dir.path().join("exact.csv"));
    assert_eq!(rows.len(), exact.len());
    for (r, x) in rows.iter().zip(&exact) {
        assert_eq!(r[1], x[1]);
        if r[0] <= 2.0 {
            assert!((r[1] - x[2]).abs() <= 1e-6 * x[2], "t={}", r[0]);
        }
    }
    let summary = json(&dir.path().join("summary.json"));
    assert!(summary["summary"]["max_exact_rel_error"].as_f64().unwrap() <= 1e-4);
    for path in summary["outputs"].as_array().unwrap() {
        assert!(Path::new(path.as_str().unwrap()).exists());
    }
}

#[test]
fn landau_rate_from_summary() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().to_str().unwrap();
    ok(&[
        "landau",
        "--M",
        "90",
        "--no-filter",
        "--tF",
        "26",
        "--tF",
        "1",
        "--out",
        out,
    ]);
    let summary = json(&dir.path().join("summary.json"));
    let fits = summary["summary"]["fits"].as_array().unwrap();
    let rate = fits[0]["rate"].as_f64().unwrap();
    assert!((rate - 0.154173).abs() <= 0.002, "rate {rate}");
    // too short a window is reported, not fatal
    assert!(fits[1]["error"].is_string());
    let (header, _) = csv_rows(&dir.path().join("energy.csv"));
    assert_eq!(header.len(), 4 + 4);
}

#[test]
fn forced_modes_decay() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().to_str().unwrap();
    ok(&[
        "forced", "--M", "30", "--mc", "5", "--filter", "hou-li", "--out", out,
    ]);
    let (header, rows) = csv_rows(&dir.path().join("energy.csv"));
    assert_eq!(header.len(), 4 + 6);
    let (first, last) = (&rows[0], rows.last().unwrap());
    assert!(last[0] >= 80.0);
    // measured |f^(1)(80)| / |f^(1)(0)| is about 2e-3, far from a steady state at 1e-6
    let ratio = last[5] / first[5];
    println!("|f^(1)(80)| / |f^(1)(0)| = {ratio:.3e}");
    assert!(ratio < 1e-2);
    assert!(last[6..].windows(2).all(|w| w[1] < w[0]));
    assert!(rows.iter().all(|r| (r[3] - 1.0).abs() <= 1e-12));
}

#[test]
fn identical_flags_give_identical_csv() {
    let a = tempfile::tempdir().unwrap();
    let b = tempfile::tempdir().unwrap();
    let args = |dir: &Path| {
        vec![
            "landau".to_string(),
            "--M".into(),
            "40".into(),
            "--t-end".into(),
            "20".into(),
            "--out".into(),
            dir.to_str().unwrap().into(),
        ]
    };
    let run = |dir: &Path| {
        let v = args(dir);
        ok(&v.iter().map(String::as_str).collect::<Vec<_>>());
        fs::read(dir.join("energy.csv")).unwrap()
    };
    assert_eq!(run(a.path()), run(b.path()));
}

#[test]
fn summary_reproduces_run_through_config() {
    let a = tempfile::tempdir().unwrap();
    let b = tempfile::tempdir().unwrap();
    let (pa, pb) = (a.path().to_str().unwrap(), b.path().to_str().unwrap());
    ok(&[
        "forced",
        "--M",
        "24",
        "--mc",
        "2",
        "--filter",
        "threshold",
        "--alpha",
        "20",
        "--epsilon",
        "0.5",
        "--t-end",
        "15",
        "--sample-every",
        "3",
        "--tF",
        "12",
        "--out",
        pa,
    ]);
    let summary_a = a.path().join("summary.json");
    ok(&[
        "forced",
        "--config",
        summary_a.to_str().unwrap(),
        "--out",
        pb,
    ]);
    assert_eq!(
        fs::read(a.path().join("energy.csv")).unwrap(),
        fs::read(b.path().join("energy.csv")).unwrap()
    );
    let (ja, jb) = (json(&summary_a), json(&b.path().join("summary.json")));
    assert_eq!(ja["config"], jb["config"]);
    assert_eq!(ja["t_f"], jb["t_f"]);

    // a bare configuration object works too
    let bare = a.path().join("bare.json");
    fs::write(&bare, serde_json::to_string(&ja["config"]).unwrap()).unwrap();
    ok(&["forced", "--config", bare.to_str().unwrap(), "--out", pb]);
    assert_eq!(
        fs::read(a.path().join("energy.csv")).unwrap(),
        fs::read(b.path().join("energy.csv")).unwrap()
    );

    // a forced configuration is not a landau run
    let code = fhfilter(&[
        "landau",
        "--config",
        summary_a.to_str().unwrap(),
        "--out",
        pb,
    ])
    .status
    .code();
    assert_eq!(code, Some(1));
}

#[test]
fn exit_codes() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().to_str().unwrap();
    let code = |args: &[&str]| fhfilter(args).status.code();
    assert_eq!(code(&["advection", "--bogus"]), Some(1));
    assert_eq!(
        code(&["advection", "--filter", "timestep", "--out", out]),
        Some(1)
    );
    assert_eq!(
        code(&["advection", "--no-filter", "--alpha", "3", "--out", out]),
        Some(1)
    );
    assert_eq!(code(&["advection", "--M", "0", "--out", out]), Some(1));
    assert_eq!(
        code(&["landau", "--linearized", "--mc", "3", "--out", out]),
        Some(1)
    );
    assert_eq!(code(&["dispersion", "--k", "50"]), Some(1));
    assert_eq!(code(&["dispersion", "--sweep", "1:2"]), Some(1));
    // an unstable step size blows up
    assert_eq!(
        code(&[
            "landau",
            "--M",
            "30",
            "--no-filter",
            "--cfl-c",
            "20",
            "--t-end",
            "2000",
            "--out",
            out
        ]),
        Some(2)
    );
    assert_eq!(code(&["--help"]), Some(0));
}
