use std::fs;
use std::path::Path;
use std::process::{Command, Output};

fn qshutter(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_qshutter"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn column(csv: &str, name: &str) -> Vec<f64> {
    let mut lines = csv.lines();
    let header: Vec<_> = lines.next().unwrap().split(',').collect();
    let i = header.iter().position(|h| *h == name).unwrap();
    lines
        .map(|l| l.split(',').nth(i).unwrap().parse().unwrap())
        .collect()
}

#[test]
fn poles_table() {
    let o = qshutter(&["poles", "--config", "triple_barrier_paper", "--n", "2"]);
    assert!(o.status.success());
    let text = stdout(&o);
    assert_eq!(
        text.lines().next().unwrap(),
        "n,E_meV,Gamma_meV,Re_k_per_nm,Im_k_per_nm,tau_ps"
    );
    let e = column(&text, "E_meV");
    let g = column(&text, "Gamma_meV");
    assert_eq!(e.len(), 2);
    // published 11.512/0.4089 and 14.387/0.6365 meV
    assert!((e[0] - 11.512).abs() < 0.01 && (g[0] - 0.4089).abs() < 0.002);
    assert!((e[1] - 14.387).abs() < 0.03 && (g[1] - 0.6365).abs() < 0.003);
    let im = column(&text, "Im_k_per_nm");
    assert!(im.iter().all(|v| *v < 0.0));
}

#[test]
fn transmission_peak_of_the_double_barrier() {
    let o = qshutter(&[
        "transmission",
        "--config",
        "double_barrier_paper",
        "--from",
        "70",
        "--to",
        "90",
        "--points",
        "400",
    ]);
    assert!(o.status.success());
    let text = stdout(&o);
    assert_eq!(text.lines().next().unwrap(), "E_meV,T");
    let e = column(&text, "E_meV");
    let t = column(&text, "T");
    assert_eq!(e.len(), 400);
    let (i, peak) = t
        .iter()
        .enumerate()
        .fold((0, 0.0), |a, (i, &v)| if v > a.1 { (i, v) } else { a });
    assert!((e[i] - 80.11).abs() < 0.1, "peak at {}", e[i]);
    assert!(peak > 0.99);
}

#[test]
fn transmission_rejects_a_reversed_range() {
    let o = qshutter(&[
        "transmission",
        "--config",
        "double_barrier_paper",
        "--from",
        "90",
        "--to",
        "70",
    ]);
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn evolve_on_an_empty_config_fails_to_parse() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("empty.conf");
    fs::write(&path, "").unwrap();
    let o = qshutter(&[
        "evolve",
        "--config",
        path.to_str().unwrap(),
        "--out",
        dir.path().to_str().unwrap(),
    ]);
    assert_eq!(o.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&o.stderr).contains("config"));
}

#[test]
fn evolve_reports_line_and_field() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("bad.conf");
    fs::write(
        &path,
        "name = a\nmass = 0.067\nlayer = 3 nm, 0.1 eV\nshape = round\n",
    )
    .unwrap();
    let o = qshutter(&["evolve", "--config", path.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(2));
    let err = String::from_utf8_lossy(&o.stderr);
    assert!(err.contains("line 4") && err.contains("shape"), "{err}");
}

fn evolve_into(dir: &Path) -> Output {
    qshutter(&[
        "evolve",
        "--config",
        "triple_barrier_paper",
        "--out",
        dir.to_str().unwrap(),
        "--points",
        "300",
    ])
}

#[test]
fn evolve_writes_schema_stable_deterministic_csv() {
    let (a, b) = (tempfile::tempdir().unwrap(), tempfile::tempdir().unwrap());
    let o = evolve_into(a.path());
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    evolve_into(b.path());
    for name in [
        "triple_barrier_paper_exact.csv",
        "triple_barrier_paper_two-level-closed.csv",
        "triple_barrier_paper.gp",
        "triple_barrier_paper_manifest.txt",
    ] {
        let first = fs::read(a.path().join(name)).unwrap();
        assert_eq!(first, fs::read(b.path().join(name)).unwrap(), "{name}");
    }
    let csv = fs::read_to_string(a.path().join("triple_barrier_paper_exact.csv")).unwrap();
    assert_eq!(csv.lines().next().unwrap(), "t_ps,t_over_tau1,density,method");
    assert_eq!(csv.lines().count(), 301);
    let tau = column(&csv, "t_over_tau1");
    assert!((tau.last().unwrap() - 10.0).abs() < 1e-6);
    assert!(csv.lines().skip(1).all(|l| l.ends_with(",exact")));
    let manifest = fs::read_to_string(a.path().join("triple_barrier_paper_manifest.txt")).unwrap();
    assert!(manifest
        .lines()
        .any(|l| l.starts_with("check: ") && l.ends_with("PASS")));
}

#[test]
fn evolve_at_an_interior_point() {
    let dir = tempfile::tempdir().unwrap();
    let o = qshutter(&[
        "evolve",
        "--config",
        "double_barrier_paper",
        "--out",
        dir.path().to_str().unwrap(),
        "--points",
        "50",
        "--x",
        "7.5",
        "--n",
        "2",
    ]);
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    let manifest = fs::read_to_string(dir.path().join("double_barrier_paper_manifest.txt")).unwrap();
    assert!(manifest.contains("double_barrier_paper.x_nm: 7.5"));
    assert!(!manifest.contains("pole3"));
}

#[test]
fn figure_writes_curves_script_and_manifest() {
    let dir = tempfile::tempdir().unwrap();
    let o = qshutter(&["figure", "fig3a", "--out", dir.path().to_str().unwrap()]);
    let manifest = fs::read_to_string(dir.path().join("fig3a_manifest.txt")).unwrap();
    // the exit status mirrors the manifest verdicts
    let failed = manifest
        .lines()
        .any(|l| l.starts_with("check: ") && l.ends_with("FAIL"));
    assert_eq!(o.status.code(), Some(if failed { 1 } else { 0 }));
    assert!(manifest.contains("check: fig3a.T_triple_center, 0.119,"));
    assert!(manifest.contains("check: fig3a.T_double, 0.0229,"));
    assert!(manifest.contains("check: double.tau1_ps, 6.37,"));
    for name in ["fig3a_triple_exact.csv", "fig3a_double_exact.csv", "fig3a.gp"] {
        assert!(dir.path().join(name).exists(), "{name}");
    }
    let script = fs::read_to_string(dir.path().join("fig3a.gp")).unwrap();
    assert_eq!(script.matches("set arrow").count(), 2);
}

#[test]
fn unknown_preset_is_a_usage_error() {
    let o = qshutter(&["figure", "fig9"]);
    assert_eq!(o.status.code(), Some(2));
}
