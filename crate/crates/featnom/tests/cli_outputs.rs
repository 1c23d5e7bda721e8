use std::fs;
use std::path::Path;
use std::process::Command;

use featnom::config::{resolve, SweepKind, SweepOverrides};
use featnom::sweep::{run_and_write, SUMMARY_COLUMNS, TRIAL_COLUMNS};

fn featnom(args: &[&str]) -> std::process::Output {
    Command::new(env!("CARGO_BIN_EXE_featnom")).args(args).output().expect("run featnom")
}

fn header(path: &Path) -> String {
    fs::read_to_string(path).unwrap().lines().next().unwrap_or_default().to_owned()
}

#[test]
fn sweep_csv_schemas_and_reruns() {
    let dir = tempfile::tempdir().unwrap();
    let flags = SweepOverrides { trials: Some(2), eps: Some(vec![0.0, 0.5]), ks: Some(vec![1, 40]), ..Default::default() };
    let cfg = resolve(SweepKind::Eps, None, &flags).unwrap();
    let rows = run_and_write(&cfg, &dir.path().join("a")).unwrap();
    assert_eq!(rows.len(), 4);
    assert!(rows.iter().all(|r| r.trials == 2));
    let summary = dir.path().join("a/eps-sweep_summary.csv");
    assert_eq!(header(&summary), SUMMARY_COLUMNS.join(","));
    assert_eq!(header(&dir.path().join("a/eps-sweep_trials.csv")), TRIAL_COLUMNS.join(","));
    assert_eq!(fs::read_to_string(dir.path().join("a/eps-sweep_trials.csv")).unwrap().lines().count(), 1 + 2 * 2 * 2);

    run_and_write(&cfg, &dir.path().join("b")).unwrap();
    assert_eq!(fs::read(&summary).unwrap(), fs::read(dir.path().join("b/eps-sweep_summary.csv")).unwrap());
}

#[test]
fn simulate_then_nominate() {
    let dir = tempfile::tempdir().unwrap();
    let sim = dir.path().join("sim");
    let out = dir.path().join("out");
    let s = sim.to_str().unwrap();
    let o = featnom(&["simulate", "sbm", "--eps", "0.5", "--delta", "1", "--seed", "3", "--out", s]);
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    for f in ["g1.edges", "g2.edges", "x.csv", "y.csv", "seeds.txt", "interest.txt"] {
        assert!(sim.join(f).is_file(), "{f}");
    }
    let p = |f: &str| sim.join(f).to_str().unwrap().to_owned();
    let o = featnom(&[
        "nominate",
        "--g1", &p("g1.edges"),
        "--g2", &p("g2.edges"),
        "--features1", &p("x.csv"),
        "--features2", &p("y.csv"),
        "--seeds", &p("seeds.txt"),
        "--interest", &p("interest.txt"),
        "--order", "250",
        "--dim", "5",
        "--components", "5",
        "--inputs", "gf,g,f",
        "--out", out.to_str().unwrap(),
    ]);
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    assert_eq!(header(&out.join("curve.csv")), "x,y_gf,y_g,y_f");
    for tag in ["gf", "g", "f"] {
        let path = out.join(format!("nominations_{tag}.csv"));
        assert_eq!(header(&path), "rank,vertex,distance,is_truth");
        assert_eq!(fs::read_to_string(&path).unwrap().lines().count(), 1 + 240);
    }
    let curve = fs::read_to_string(out.join("curve.csv")).unwrap();
    let last: Vec<usize> = curve.lines().last().unwrap().split(',').skip(1).map(|v| v.parse().unwrap()).collect();
    assert_eq!(last, vec![240, 240, 240]);
}

#[test]
fn oracle_suite_writes_tables_and_verdict() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("oracle");
    let o = featnom(&["oracle-suite", "--instances", "mixed-4,empty-graph", "--out", out.to_str().unwrap()]);
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stdout));
    assert!(String::from_utf8_lossy(&o.stdout).ends_with("verdict: pass\n"));
    assert_eq!(header(&out.join("oracle_mixed-4.csv")), "k,loss_fa,loss_fo,loss_no,H,I_graphs,I_features");
    assert_eq!(fs::read_to_string(out.join("oracle_empty-graph.csv")).unwrap().lines().count(), 4);
    assert_eq!(header(&out.join("checks.csv")), "instance,check,status,detail");
}

#[test]
fn invalid_invocations_fail_cleanly() {
    let o = featnom(&["oracle-suite", "--instances", "no-such-instance"]);
    assert_eq!(o.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&o.stderr).contains("unknown instance"));

    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("bad.toml");
    fs::write(&cfg, "trials = 0\n").unwrap();
    let o = featnom(&["eps-sweep", "--config", cfg.to_str().unwrap(), "--out", dir.path().to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&o.stderr).contains("trials"));
}
