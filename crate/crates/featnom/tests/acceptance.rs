//! Acceptance suite: one PASS/FAIL line per criterion.

#[path = "../../core/tests/support/brute_force.rs"]
mod brute_force;

use std::panic::{catch_unwind, AssertUnwindSafe};
use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::time::{Duration, Instant};

use brute_force::brute_force_loss;
use featnom::config::{resolve, SweepConfig, SweepKind, SweepOverrides};
use featnom::nominate::{nominate_files, NominateJob};
use featnom::suite::{run_suite, write_suite, SuiteOptions};
use featnom::sweep::{run_and_write, SummaryRow};
use featnom_core::gmm_nominate::{gmm_fit, Inputs, PipelineOptions};
use featnom_core::models::{BundledInstance, BUNDLED_INSTANCES};
use featnom_core::oracle::{
    bayes_scheme, exhaustive_min_loss, level_k_loss, r_k_statistic, verify_information_theorem, AssumptionPolicy,
    Mode, RankList, SchemeTable, SymmetryPolicy, TheoremVariant,
};
use featnom_core::rng::stream_rng;
use featnom_core::spectral::{ase, pass_to_ranks, procrustes, WeightedAdjacency};
use nalgebra::DMatrix;
use rand::Rng;
use rand_distr::StandardNormal;

const EXACT_TOL: f64 = 1e-9;
const STATISTIC_TOL: f64 = 1e-12;
const PTR_MEAN_TOL: f64 = 1e-12;
const SPECTRAL_TOL: f64 = 1e-8;
const EM_RELATIVE_SLACK: f64 = 1e-9;
const BAYES_RUNTIME: Duration = Duration::from_secs(60);
const SWEEP_RUNTIME: Duration = Duration::from_secs(600);

/// `L_1(FO) − L_1(FA)` on the two-block pair with `a = 0.4, b = 0.1, c = 0.7`.
const EXAMPLE_MARGIN: f64 = 0.31231;
/// `L_1(NO) − L_1(FA)` on the graph-signal instance.
const GRAPH_SIGNAL_MARGIN: f64 = 0.227395;
/// `y_gf(10) − y_f(10)` on the bundled connectome pair.
const CONNECTOME_MARGIN: i64 = 43;

type Outcome = Result<String, String>;

fn ensure(ok: bool, msg: impl Into<String>) -> Result<(), String> {
    if ok {
        Ok(())
    } else {
        Err(msg.into())
    }
}

fn err<E: std::fmt::Display>(e: E) -> String {
    e.to_string()
}

fn bayes(dist: &featnom_core::models::EnumerableNominatableDistribution, mode: Mode) -> Result<SchemeTable, String> {
    bayes_scheme(dist, mode, SymmetryPolicy::Average, RankList::identity(dist.m())).map_err(err)
}

fn bayes_optimality() -> Outcome {
    let start = Instant::now();
    let mut worst = 0.0f64;
    for b in [BundledInstance::Mixed4, BundledInstance::EmptyGraph] {
        let d = b.build().map_err(err)?;
        ensure(d.n() == 4 && d.m() == 4, format!("{} is not n = m = 4", b.name()))?;
        let s = bayes(&d, Mode::FeatureAware)?;
        for k in 1..=3 {
            let bayes_loss = level_k_loss(&s, &d, k).map_err(err)?;
            let exhaustive = exhaustive_min_loss(s.partition(), &d, k).map_err(err)?;
            let brute = brute_force_loss(&d, Mode::FeatureAware.view(), k);
            worst = worst.max((bayes_loss - exhaustive).abs()).max((bayes_loss - brute).abs());
        }
    }
    let elapsed = start.elapsed();
    ensure(worst <= EXACT_TOL, format!("gap {worst:.3e}"))?;
    ensure(elapsed < BAYES_RUNTIME, format!("took {elapsed:?}"))?;
    Ok(format!("max gap {worst:.1e} in {:.1} s", elapsed.as_secs_f64()))
}

fn random_schemes() -> Outcome {
    let mut violations = 0usize;
    let mut comparisons = 0usize;
    for (i, b) in BUNDLED_INSTANCES.iter().enumerate() {
        let d = b.build().map_err(err)?;
        let s = bayes(&d, Mode::FeatureAware)?;
        let mut rng = stream_rng(2, i as u64);
        for _ in 0..100 {
            let random = SchemeTable::random(s.partition_arc(), &mut rng);
            for k in 1..d.m() {
                for c in 0..s.partition().classes().len() {
                    let r = r_k_statistic(&random, c, k).map_err(err)?;
                    let best = r_k_statistic(&s, c, k).map_err(err)?;
                    comparisons += 1;
                    violations += usize::from(r > best + STATISTIC_TOL);
                }
            }
        }
    }
    ensure(violations == 0, format!("{violations} violations"))?;
    Ok(format!("0 violations in {comparisons} comparisons"))
}

fn features_comparison() -> Outcome {
    let d = BundledInstance::ConstFeatures.build().map_err(err)?;
    let levels = d.m() - 1;
    for k in 1..d.m() {
        let r = verify_information_theorem(&d, k, TheoremVariant::Features, AssumptionPolicy::Require).map_err(err)?;
        ensure(r.losses_equal && r.margin().abs() <= EXACT_TOL, format!("(a) k={k}: margin {:.3e}", r.margin()))?;
        ensure(r.information_equal_somewhere && r.holds, format!("(a) k={k}: no tie-break with I = H"))?;
    }

    let d = BundledInstance::Example41Small.build().map_err(err)?;
    let r = verify_information_theorem(&d, 1, TheoremVariant::Features, AssumptionPolicy::Report).map_err(err)?;
    let brute = brute_force_loss(&d, Mode::FeatureOblivious.view(), 1) - brute_force_loss(&d, Mode::FeatureAware.view(), 1);
    ensure(r.exhaustive_tie_breaks, "(b) tie-break orders not exhaustive")?;
    ensure(r.margin() > 0.0, format!("(b) margin {:.6} not positive", r.margin()))?;
    ensure((r.margin() - EXAMPLE_MARGIN).abs() <= EXACT_TOL, format!("(b) margin {:.12} != {EXAMPLE_MARGIN}", r.margin()))?;
    ensure((brute - EXAMPLE_MARGIN).abs() <= EXACT_TOL, format!("(b) brute-force margin {brute:.12}"))?;
    let min_gap = r.outcomes.iter().map(|o| o.entropy - o.mutual_information).fold(f64::INFINITY, f64::min);
    ensure(!r.information_equal_somewhere && min_gap > EXACT_TOL, "(b) I = H under some tie-break")?;
    Ok(format!(
        "(a) equal losses, I = H attained for k = 1..{levels}; (b) margin {:.5}, min H - I {min_gap:.4} over {} tie-breaks",
        r.margin(),
        r.outcomes.len()
    ))
}

fn topology_comparison() -> Outcome {
    let d = BundledInstance::EmptyGraph.build().map_err(err)?;
    for k in 1..d.m() {
        let r = verify_information_theorem(&d, k, TheoremVariant::Topology, AssumptionPolicy::Require).map_err(err)?;
        ensure(r.losses_equal && r.margin().abs() <= EXACT_TOL, format!("empty graph k={k}: margin {:.3e}", r.margin()))?;
        ensure(r.information_equal_somewhere && r.holds, format!("empty graph k={k}: no tie-break with I = H"))?;
    }
    let d = BundledInstance::GraphSignal.build().map_err(err)?;
    let r = verify_information_theorem(&d, 1, TheoremVariant::Topology, AssumptionPolicy::Require).map_err(err)?;
    let brute = brute_force_loss(&d, Mode::NetworkOblivious.view(), 1) - brute_force_loss(&d, Mode::FeatureAware.view(), 1);
    ensure(r.exhaustive_tie_breaks, "graph signal: tie-break orders not exhaustive")?;
    ensure(r.margin() > 0.0, "graph signal: margin not positive")?;
    ensure(
        (r.margin() - GRAPH_SIGNAL_MARGIN).abs() <= EXACT_TOL,
        format!("graph signal: margin {:.12} != {GRAPH_SIGNAL_MARGIN}", r.margin()),
    )?;
    ensure((brute - GRAPH_SIGNAL_MARGIN).abs() <= EXACT_TOL, format!("graph signal: brute-force margin {brute:.12}"))?;
    ensure(!r.information_equal_somewhere, "graph signal: I = H under some tie-break")?;
    Ok(format!("empty graph equal for k = 1..3; graph signal margin {:.6}, I < H under all 24 tie-breaks", r.margin()))
}

fn posterior_mass() -> Outcome {
    let mut worst = 0.0f64;
    let mut classes = 0usize;
    for b in BUNDLED_INSTANCES {
        let d = b.build().map_err(err)?;
        for mode in Mode::ALL {
            let s = bayes(&d, mode)?;
            for c in s.partition().classes() {
                classes += 1;
                worst = worst.max((c.posterior().iter().sum::<f64>() - d.interest().len() as f64).abs());
            }
        }
    }
    ensure(worst <= EXACT_TOL, format!("deviation {worst:.3e}"))?;
    Ok(format!("{classes} classes, max deviation {worst:.1e}"))
}

fn gaussian(rows: usize, cols: usize, rng: &mut impl Rng) -> DMatrix<f64> {
    DMatrix::from_fn(rows, cols, |_, _| rng.sample(StandardNormal))
}

fn spectral_primitives() -> Outcome {
    let mut rng = stream_rng(6, 0);
    let mut ptr_worst = 0.0f64;
    let mut ase_worst = 0.0f64;
    let mut procrustes_worst = 0.0f64;
    for trial in 0..20 {
        let n = 10 + 3 * trial;
        let mut a = DMatrix::zeros(n, n);
        for u in 0..n {
            for v in u + 1..n {
                if rng.random_bool(0.3) {
                    let w = f64::from(rng.random_range(1..8u32));
                    a[(u, v)] = w;
                    a[(v, u)] = w;
                }
            }
        }
        let p = pass_to_ranks(&WeightedAdjacency::new(a).map_err(err)?);
        let values: Vec<f64> = (0..n).flat_map(|u| (u + 1..n).map(move |v| (u, v))).map(|e| p.matrix()[e]).filter(|&w| w != 0.0).collect();
        ptr_worst = ptr_worst.max((values.iter().sum::<f64>() / values.len() as f64 - 1.0).abs());

        let d = 1 + trial % 4;
        let x = gaussian(n, d, &mut rng).map(|v| v.abs() + 0.1);
        let planted = &x * x.transpose();
        let z = ase(&WeightedAdjacency::new(planted.clone()).map_err(err)?, d).map_err(err)?;
        ase_worst = ase_worst.max((z.matrix() * z.matrix().transpose() - &planted).norm() / planted.norm());

        let y = gaussian(n, d, &mut rng);
        let q = gaussian(d, d, &mut rng).qr().q();
        let target = &y * &q;
        procrustes_worst = procrustes_worst.max((&y * procrustes(&y, &target).map_err(err)? - &target).norm());
    }
    ensure(ptr_worst <= PTR_MEAN_TOL, format!("pass-to-ranks mean off by {ptr_worst:.3e}"))?;
    ensure(ase_worst <= SPECTRAL_TOL, format!("embedding residual {ase_worst:.3e}"))?;
    ensure(procrustes_worst <= SPECTRAL_TOL, format!("Procrustes residual {procrustes_worst:.3e}"))?;

    let mut decreases = 0usize;
    for fit in 0..50u64 {
        let rows = rng.random_range(20..80usize);
        let d = rng.random_range(1..4usize);
        let k = rng.random_range(1..5usize);
        let shift = if fit % 2 == 0 { 3.0 } else { 0.0 };
        let z = gaussian(rows, d, &mut rng).map(|v| v + shift * v.signum());
        let m = gmm_fit(&z, k, fit).map_err(err)?;
        decreases += m
            .log_likelihood_trace()
            .windows(2)
            .filter(|w| w[1] < w[0] - EM_RELATIVE_SLACK * w[0].abs())
            .count();
    }
    ensure(decreases == 0, format!("{decreases} log-likelihood decreases"))?;
    Ok(format!(
        "ptr mean dev {ptr_worst:.1e}, embedding {ase_worst:.1e}, Procrustes {procrustes_worst:.1e}, 50 monotone fits"
    ))
}

fn sweep(kind: SweepKind, out: &Path) -> Result<(SweepConfig, Vec<SummaryRow>, Duration), String> {
    let cfg = resolve(kind, None, &SweepOverrides::default()).map_err(err)?;
    ensure(cfg.order == 250 && cfg.seeds == 10 && cfg.trials == 20, "sweep defaults changed")?;
    let start = Instant::now();
    let rows = run_and_write(&cfg, out).map_err(err)?;
    Ok((cfg, rows, start.elapsed()))
}

fn at(rows: &[SummaryRow], eps: f64, delta: f64, k: usize) -> Result<&SummaryRow, String> {
    rows.iter()
        .find(|r| r.eps == eps && r.delta == delta && r.k == k)
        .ok_or_else(|| format!("no summary row for eps={eps} delta={delta} k={k}"))
}

fn combined_se(a: &SummaryRow, b: &SummaryRow) -> f64 {
    (a.se_diff * a.se_diff + b.se_diff * b.se_diff).sqrt()
}

fn eps_sweep(out: &Path) -> Outcome {
    let (_, rows, elapsed) = sweep(SweepKind::Eps, out)?;
    let low = at(&rows, 0.0, 1.0, 40)?;
    let high = at(&rows, 0.5, 1.0, 40)?;
    let se = combined_se(low, high);
    ensure(high.mean_diff > 0.0, format!("diff at eps=0.5 is {:.3}", high.mean_diff))?;
    ensure(high.mean_diff - low.mean_diff > 2.0 * se, format!("rise {:.3} within 2 SE {:.3}", high.mean_diff - low.mean_diff, se))?;
    ensure(elapsed < SWEEP_RUNTIME, format!("took {elapsed:?}"))?;
    Ok(format!(
        "r_fg(40)-r_f(40): eps=0 {:.2}±{:.2}, eps=0.5 {:.2}±{:.2}, rise {:.1} combined SEs, {:.0} s",
        low.mean_diff,
        low.se_diff,
        high.mean_diff,
        high.se_diff,
        (high.mean_diff - low.mean_diff) / se,
        elapsed.as_secs_f64()
    ))
}

fn delta_sweep(out: &Path) -> Outcome {
    let (_, rows, _) = sweep(SweepKind::Delta, out)?;
    let low = at(&rows, 0.25, 0.0, 40)?;
    let high = at(&rows, 0.25, 2.0, 40)?;
    let se = combined_se(low, high);
    ensure(high.mean_diff > 0.0, format!("diff at delta=2 is {:.3}", high.mean_diff))?;
    ensure(high.mean_diff - low.mean_diff > 2.0 * se, format!("rise {:.3} within 2 SE {:.3}", high.mean_diff - low.mean_diff, se))?;
    ensure(low.mean_diff <= 3.0 * low.se_diff, format!("diff at delta=0 is {:.3}", low.mean_diff))?;
    Ok(format!(
        "r_fg(40)-r_g(40): delta=0 {:.2}±{:.2}, delta=2 {:.2}±{:.2}, rise {:.1} combined SEs",
        low.mean_diff,
        low.se_diff,
        high.mean_diff,
        high.se_diff,
        (high.mean_diff - low.mean_diff) / se
    ))
}

fn connectome_dir() -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("data/connectome")
}

fn connectome_job(out: &Path) -> NominateJob {
    let d = connectome_dir();
    NominateJob {
        g1: d.join("chemical.edges"),
        g2: d.join("electrical.edges"),
        features1: Some(d.join("types_chemical.csv")),
        features2: Some(d.join("types_electrical.csv")),
        seeds: d.join("seeds.txt"),
        interest: None,
        matches: Some(d.join("matches.txt")),
        order: None,
        inputs: vec![Inputs::GraphAndFeatures, Inputs::FeaturesOnly],
        options: PipelineOptions::default(),
        out: out.to_path_buf(),
    }
}

fn connectome(out: &Path) -> Outcome {
    let runs = nominate_files(&connectome_job(out)).map_err(err)?;
    ensure(out.join("curve.csv").is_file(), "curve.csv missing")?;
    for r in &runs {
        ensure(r.curve.windows(2).all(|w| w[0] <= w[1]), format!("{} curve not monotone", r.inputs.name()))?;
    }
    let (gf, f) = (runs[0].curve[9] as i64, runs[1].curve[9] as i64);
    ensure(gf > f, format!("y_gf(10) = {gf} not above y_f(10) = {f}"))?;
    ensure(gf - f == CONNECTOME_MARGIN, format!("margin {} != {CONNECTOME_MARGIN}", gf - f))?;
    Ok(format!("y_gf(10) = {gf}, y_f(10) = {f}, monotone curves of length {}", runs[0].curve.len()))
}

fn same_bytes(a: &Path, b: &Path) -> Result<(), String> {
    let x = std::fs::read(a).map_err(|e| format!("{}: {e}", a.display()))?;
    let y = std::fs::read(b).map_err(|e| format!("{}: {e}", b.display()))?;
    ensure(x == y, format!("{} and {} differ", a.display(), b.display()))
}

fn determinism(root: &Path, full_eps: &Path) -> Outcome {
    let small = SweepOverrides { trials: Some(3), ..Default::default() };
    let mut compared = 0usize;
    for kind in [SweepKind::Eps, SweepKind::Delta] {
        let cfg = resolve(kind, None, &small).map_err(err)?;
        let name = format!("{}_summary.csv", kind.name());
        let dirs = [root.join(format!("{}-1", kind.name())), root.join(format!("{}-4", kind.name()))];
        for (dir, threads) in dirs.iter().zip([1, 4]) {
            let pool = rayon::ThreadPoolBuilder::new().num_threads(threads).build().map_err(err)?;
            pool.install(|| run_and_write(&cfg, dir)).map_err(err)?;
        }
        same_bytes(&dirs[0].join(&name), &dirs[1].join(&name))?;
        compared += 1;
    }

    let full = resolve(SweepKind::Eps, None, &SweepOverrides::default()).map_err(err)?;
    let rerun = root.join("eps-full");
    run_and_write(&full, &rerun).map_err(err)?;
    same_bytes(&full_eps.join("eps-sweep_summary.csv"), &rerun.join("eps-sweep_summary.csv"))?;
    compared += 1;

    let instances = [BundledInstance::Mixed4, BundledInstance::EmptyGraph];
    for dir in ["suite-a", "suite-b"] {
        let report = run_suite(&instances, &SuiteOptions::default()).map_err(err)?;
        write_suite(&root.join(dir), &report).map_err(err)?;
    }
    for file in ["checks.csv", "oracle_mixed-4.csv", "oracle_empty-graph.csv"] {
        same_bytes(&root.join("suite-a").join(file), &root.join("suite-b").join(file))?;
        compared += 1;
    }

    for dir in ["nominate-a", "nominate-b"] {
        nominate_files(&connectome_job(&root.join(dir))).map_err(err)?;
    }
    for file in ["curve.csv", "nominations_gf.csv", "nominations_f.csv"] {
        same_bytes(&root.join("nominate-a").join(file), &root.join("nominate-b").join(file))?;
        compared += 1;
    }
    Ok(format!("{compared} CSV pairs byte-identical across reruns and thread counts"))
}

fn run(id: &str, title: &str, f: impl FnOnce() -> Outcome) -> bool {
    let outcome = catch_unwind(AssertUnwindSafe(f)).unwrap_or_else(|p| {
        Err(p.downcast_ref::<String>().cloned().or(p.downcast_ref::<&str>().map(|s| s.to_string())).unwrap_or_default())
    });
    let (tag, detail, ok) = match outcome {
        Ok(d) => ("PASS", d, true),
        Err(d) => ("FAIL", d, false),
    };
    println!("{tag} criterion {id:>2} {title}: {detail}");
    ok
}

fn main() -> ExitCode {
    let tmp = tempfile::tempdir().expect("temporary directory");
    let root = tmp.path();
    let eps_dir = root.join("eps");
    let results = [
        run("1", "Bayes optimality", bayes_optimality),
        run("2", "random schemes below the Bayes statistic", random_schemes),
        run("3", "feature-aware vs feature-oblivious", features_comparison),
        run("4", "feature-aware vs network-oblivious", topology_comparison),
        run("5", "posterior mass conservation", posterior_mass),
        run("6", "spectral primitives and EM", spectral_primitives),
        run("7", "eps sweep", || eps_sweep(&eps_dir)),
        run("8", "delta sweep", || delta_sweep(&root.join("delta"))),
        run("9", "synthetic connectome nomination", || connectome(&root.join("connectome"))),
        run("10", "determinism", || determinism(root, &eps_dir)),
    ];
    let passed = results.iter().filter(|&&ok| ok).count();
    println!("acceptance: {passed}/{} criteria passed", results.len());
    if passed == results.len() {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
