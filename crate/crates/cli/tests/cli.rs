use std::path::Path;
use std::process::{Command, Output};

fn hwlaw(dir: &Path, args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_hwlaw"))
        .arg("--out-dir")
        .arg(dir)
        .args(args)
        .output()
        .expect("binary runs")
}

fn code(o: &Output) -> i32 {
    o.status.code().expect("exit code")
}

fn rows(path: &Path) -> Vec<Vec<String>> {
    let mut r = csv::ReaderBuilder::new().flexible(true).from_path(path).unwrap();
    r.records().map(|x| x.unwrap().iter().map(String::from).collect()).collect()
}

fn json(path: &Path) -> serde_json::Value {
    serde_json::from_str(&std::fs::read_to_string(path).unwrap()).unwrap()
}

fn num(s: &str) -> f64 {
    s.parse().unwrap()
}

#[test]
fn theta_single_value() {
    let d = tempfile::tempdir().unwrap();
    let o = hwlaw(d.path(), &["theta", "--r", "1", "--t", "1", "--rep", "coscos"]);
    assert_eq!(code(&o), 0, "{}", String::from_utf8_lossy(&o.stderr));
    let r = rows(&d.path().join("theta.csv"));
    assert_eq!(r.len(), 1);
    assert_eq!(r[0][2], "coscos");
    assert!((num(&r[0][3]) - 0.739076531303232).abs() < 1e-10);
}

#[test]
fn theta_all_representations() {
    let d = tempfile::tempdir().unwrap();
    let o = hwlaw(d.path(), &["theta", "--r", "1", "--t", "1", "--rep", "all"]);
    assert_eq!(code(&o), 0);
    let v: Vec<f64> = rows(&d.path().join("theta.csv")).iter().map(|r| num(&r[3])).collect();
    assert_eq!(v.len(), 5);
    for x in &v {
        assert!((x - v[0]).abs() < 1e-8);
    }
}

#[test]
fn usage_and_domain_errors_exit_2() {
    let d = tempfile::tempdir().unwrap();
    assert_eq!(code(&hwlaw(d.path(), &["theta", "--r", "", "--t", "1"])), 2);
    assert_eq!(code(&hwlaw(d.path(), &["theta", "--r", "-1", "--t", "1"])), 2);
    assert_eq!(code(&hwlaw(d.path(), &["theta", "--r", "1", "--t", "0.1", "--rep", "yor"])), 2);
    assert_eq!(code(&hwlaw(d.path(), &["theta", "--r", "1", "--t", "1", "--rep", "bogus"])), 2);
    assert_eq!(code(&hwlaw(d.path(), &["mc", "expfun", "--t", "1"])), 2);
    assert_eq!(code(&hwlaw(d.path(), &["density", "amu", "--mu", "-1.5", "--method", "hermite"])), 2);
}

#[test]
fn unreachable_tolerance_exits_3() {
    let d = tempfile::tempdir().unwrap();
    let o = hwlaw(d.path(), &["--abs-tol", "1e-300", "--rel-tol", "1e-15", "theta", "--r", "1", "--t", "1"]);
    assert_eq!(code(&o), 3);
    // outputs and manifest are still written
    assert!(d.path().join("theta.csv").exists());
    assert!(d.path().join("theta.manifest.json").exists());
}

#[test]
fn config_file() {
    let d = tempfile::tempdir().unwrap();
    let cfg = d.path().join("hw.conf");
    std::fs::write(&cfg, "# tolerances\nabs_tol = 1e-11\nrel_tol=1e-9\n").unwrap();
    let o = hwlaw(d.path(), &["--config", cfg.to_str().unwrap(), "theta", "--r", "1", "--t", "1"]);
    assert_eq!(code(&o), 0);
    let m = json(&d.path().join("theta.manifest.json"));
    assert_eq!(m["quadrature"]["abs_tol"], 1e-11);
    assert_eq!(m["quadrature"]["rel_tol"], 1e-9);
    std::fs::write(&cfg, "abs_tol = 1e-11\nnonsense = 3\n").unwrap();
    assert_eq!(code(&hwlaw(d.path(), &["--config", cfg.to_str().unwrap(), "theta", "--r", "1", "--t", "1"])), 2);
}

#[test]
fn manifest_lists_every_output() {
    let d = tempfile::tempdir().unwrap();
    let o = hwlaw(d.path(), &["mc", "bessel", "--nu", "-1", "--a", "1", "--t", "1", "--seed", "7", "--paths", "2000", "--steps", "200"]);
    assert_eq!(code(&o), 0);
    let m = json(&d.path().join("mc-bessel.manifest.json"));
    assert_eq!(m["interface_version"], 1);
    assert_eq!(m["seed"], 7);
    let outs = m["outputs"].as_array().unwrap();
    assert_eq!(outs.len(), 3);
    for p in outs {
        assert!(Path::new(p.as_str().unwrap()).exists());
    }
    let stats = json(&d.path().join("mc-bessel.json"));
    assert!(stats[0]["survival_fraction"].as_f64().unwrap() > 0.3);
    let header = std::fs::read_to_string(d.path().join("mc-bessel.csv")).unwrap();
    assert!(header.starts_with("path_id,clock,survived,terminal_r,outcome,survival_weight"));
}

#[test]
fn mc_reruns_and_replays_are_identical() {
    let a = tempfile::tempdir().unwrap();
    let b = tempfile::tempdir().unwrap();
    let c = tempfile::tempdir().unwrap();
    let args = ["mc", "expfun", "--mu", "0", "--t", "1", "--paths", "5000", "--steps", "200", "--seed", "7"];
    assert_eq!(code(&hwlaw(a.path(), &args)), 0);
    assert_eq!(code(&hwlaw(b.path(), &args)), 0);
    let manifest = a.path().join("mc-expfun.manifest.json");
    assert_eq!(code(&hwlaw(c.path(), &["replay", manifest.to_str().unwrap()])), 0);
    for f in ["mc-expfun.csv", "mc-expfun.json"] {
        let x = std::fs::read(a.path().join(f)).unwrap();
        assert_eq!(x, std::fs::read(b.path().join(f)).unwrap(), "{f}");
        assert_eq!(x, std::fs::read(c.path().join(f)).unwrap(), "{f}");
    }
}

#[test]
fn thread_count_does_not_change_output() {
    let run = |threads: &str| {
        let d = tempfile::tempdir().unwrap();
        let o = Command::new(env!("CARGO_BIN_EXE_hwlaw"))
            .env("HW_NUM_THREADS", threads)
            .arg("--out-dir")
            .arg(d.path())
            .args(["mc", "expfun", "--t", "1", "--paths", "3000", "--steps", "100", "--seed", "3"])
            .output()
            .unwrap();
        assert_eq!(code(&o), 0);
        std::fs::read(d.path().join("mc-expfun.csv")).unwrap()
    };
    assert_eq!(run("1"), run("3"));
}

#[test]
fn verify_exit_codes() {
    let d = tempfile::tempdir().unwrap();
    assert_eq!(code(&hwlaw(d.path(), &["verify", "identities"])), 0);
    let recs = json(&d.path().join("verify-identities.json"));
    assert!(recs.as_array().unwrap().iter().all(|r| r["pass"] == true));
    assert_eq!(code(&hwlaw(d.path(), &["verify", "identities", "--draws", "2", "--tol", "1e-20"])), 1);
    let o = hwlaw(d.path(), &["verify", "flatness"]);
    assert!(matches!(code(&o), 0 | 1));
    let recs = json(&d.path().join("verify-flatness.json"));
    assert_eq!(recs.as_array().unwrap().len(), 10);
}

#[test]
fn density_normalization_rows() {
    let d = tempfile::tempdir().unwrap();
    assert_eq!(code(&hwlaw(d.path(), &["density", "amu", "--mu", "0", "--t", "1"])), 0);
    let r = rows(&d.path().join("density-amu.csv"));
    let last = r.last().unwrap();
    assert_eq!(last[0], "normalization");
    assert!((num(&last[1]) - 1.0).abs() < 1e-4);
    assert_eq!(code(&hwlaw(d.path(), &["density", "amu", "--mu", "1", "--t", "1", "--method", "both"])), 0);
    for row in rows(&d.path().join("density-amu.csv")).iter().filter(|r| r[0] != "normalization") {
        assert!(num(&row[3]) < 1e-6, "{row:?}");
    }
}

#[test]
fn clock_density_matches_transformed_functional_density() {
    let d = tempfile::tempdir().unwrap();
    let o = hwlaw(d.path(), &["density", "bessel-clock", "--nu", "-2", "--a", "1", "--t", "1", "--u", "0.5,1,2"]);
    assert_eq!(code(&o), 0, "{}", String::from_utf8_lossy(&o.stderr));
    let clock = rows(&d.path().join("density-bessel-clock.csv"));
    for row in clock.iter().filter(|r| r[0] != "normalization") {
        let u = &row[0];
        let e = tempfile::tempdir().unwrap();
        assert_eq!(code(&hwlaw(e.path(), &["density", "amu", "--mu", "0", "--t", u, "--v", "1"])), 0);
        let amu = num(&rows(&e.path().join("density-amu.csv"))[0][1]);
        let want = (-2.0 * num(u)).exp() * amu;
        assert!((num(&row[1]) - want).abs() <= 1e-8 * want, "u={u}");
    }
}

#[test]
fn bougerol_summary() {
    let d = tempfile::tempdir().unwrap();
    let o = hwlaw(d.path(), &["mc", "bougerol", "--t", "1", "--paths", "10000", "--steps", "500", "--seed", "7"]);
    assert_eq!(code(&o), 0);
    let s = json(&d.path().join("mc-bougerol.json"));
    assert_eq!(s[0]["pass"], true);
    assert_eq!(rows(&d.path().join("mc-bougerol.csv")).len(), 1);
}
