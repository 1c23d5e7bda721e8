//! The oracle suite over the bundled instances.

use std::fmt;
use std::path::Path;

use featnom_core::models::{BundledInstance, EnumerableNominatableDistribution};
use featnom_core::oracle::{
    bayes_scheme, check_distribution_consistency, exhaustive_min_loss, level_k_loss, r_k_statistic,
    rank_mutual_information, verify_information_theorem, AssumptionPolicy, ConsistencyOptions, InfoTarget, Mode,
    RankList, SchemeTable, SymmetryPolicy, TheoremVariant, INFO_TOL,
};
use featnom_core::rng::stream_rng;
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::io::{csv_writer, write_string};

/// Largest order compared against an exhaustive scheme search.
pub const EXHAUSTIVE_ORDER: usize = 4;
/// Slack allowed when a random scheme is compared with the Bayes statistic.
pub const STATISTIC_TOL: f64 = 1e-12;

pub const ORACLE_COLUMNS: [&str; 7] = ["k", "loss_fa", "loss_fo", "loss_no", "H", "I_graphs", "I_features"];
pub const CHECK_COLUMNS: [&str; 4] = ["instance", "check", "status", "detail"];

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Status {
    Pass,
    Fail,
    Skipped,
}

impl fmt::Display for Status {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Status::Pass => "pass",
            Status::Fail => "fail",
            Status::Skipped => "skipped",
        })
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct Check {
    pub instance: &'static str,
    pub name: String,
    pub status: Status,
    pub detail: String,
}

/// Losses and informations of one instance at one level.
#[derive(Clone, Debug, PartialEq)]
pub struct OracleRow {
    pub k: usize,
    pub loss_fa: f64,
    pub loss_fo: f64,
    pub loss_no: f64,
    /// Entropy of the feature-aware prefix.
    pub entropy: f64,
    pub info_graphs: f64,
    pub info_features: f64,
}

/// Which side of the loss comparison an instance is expected to land on.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Branch {
    /// Equal losses, attained with `I = H`.
    Equal,
    /// A strictly smaller feature-aware loss, with `I < H` under every
    /// tie-break order.
    Strict,
}

/// The loss comparison each bundled instance is built to exhibit.
pub fn expected_branch(instance: BundledInstance) -> (TheoremVariant, Branch) {
    match instance {
        BundledInstance::ConstFeatures => (TheoremVariant::Features, Branch::Equal),
        BundledInstance::Example41Small => (TheoremVariant::Features, Branch::Strict),
        BundledInstance::EmptyGraph => (TheoremVariant::Topology, Branch::Equal),
        BundledInstance::GraphSignal => (TheoremVariant::Topology, Branch::Strict),
        BundledInstance::Mixed4 => (TheoremVariant::Features, Branch::Strict),
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct InstanceReport {
    pub instance: BundledInstance,
    pub rows: Vec<OracleRow>,
    pub checks: Vec<Check>,
}

#[derive(Clone, Debug, PartialEq)]
pub struct SuiteReport {
    pub instances: Vec<InstanceReport>,
}

impl SuiteReport {
    pub fn checks(&self) -> impl Iterator<Item = &Check> {
        self.instances.iter().flat_map(|i| i.checks.iter())
    }

    pub fn passed(&self) -> bool {
        self.checks().all(|c| c.status != Status::Fail)
    }

    /// One line per check and a final verdict.
    pub fn verdict(&self) -> String {
        let mut s = String::new();
        for c in self.checks() {
            s.push_str(&format!("{:<18} {:<28} {:<7} {}\n", c.instance, c.name, c.status, c.detail));
        }
        s.push_str(if self.passed() { "verdict: pass\n" } else { "verdict: fail\n" });
        s
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct SuiteOptions {
    /// Random schemes compared with the Bayes statistic per instance.
    pub random_schemes: usize,
    pub seed: u64,
}

impl Default for SuiteOptions {
    fn default() -> Self {
        Self { random_schemes: 100, seed: 0 }
    }
}

/// The levels reported for an instance: `1..m`.
pub fn levels(m: usize) -> Vec<usize> {
    (1..m.max(2)).collect()
}

fn bayes(dist: &EnumerableNominatableDistribution, mode: Mode) -> Result<SchemeTable> {
    Ok(bayes_scheme(dist, mode, SymmetryPolicy::Average, RankList::identity(dist.m()))?)
}

fn check(instance: BundledInstance, name: impl Into<String>, ok: bool, detail: String) -> Check {
    Check { instance: instance.name(), name: name.into(), status: if ok { Status::Pass } else { Status::Fail }, detail }
}

/// Runs every check on one instance.
pub fn run_instance(instance: BundledInstance, opts: &SuiteOptions) -> Result<InstanceReport> {
    let dist = instance.build()?;
    let m = dist.m();
    let ks = levels(m);
    let schemes = [bayes(&dist, Mode::FeatureAware)?, bayes(&dist, Mode::FeatureOblivious)?, bayes(&dist, Mode::NetworkOblivious)?];
    let mut checks = Vec::new();

    let mut rows = Vec::new();
    for &k in &ks {
        let graphs = rank_mutual_information(&schemes[0], &dist, k, InfoTarget::Graphs)?;
        let features = rank_mutual_information(&schemes[0], &dist, k, InfoTarget::VertexFeatures)?;
        rows.push(OracleRow {
            k,
            loss_fa: level_k_loss(&schemes[0], &dist, k)?,
            loss_fo: level_k_loss(&schemes[1], &dist, k)?,
            loss_no: level_k_loss(&schemes[2], &dist, k)?,
            entropy: graphs.entropy,
            info_graphs: graphs.mutual_information,
            info_features: features.mutual_information,
        });
    }

    for s in &schemes {
        let worst = s
            .partition()
            .classes()
            .iter()
            .map(|c| (c.posterior().iter().sum::<f64>() - dist.interest().len() as f64).abs())
            .fold(0.0, f64::max);
        let name = format!("posterior-mass-{}", s.mode().short_name());
        checks.push(check(instance, name, worst <= INFO_TOL, format!("max deviation {worst:.3e}")));
    }

    for s in &schemes {
        let name = format!("bayes-vs-exhaustive-{}", s.mode().short_name());
        if m > EXHAUSTIVE_ORDER {
            checks.push(Check {
                instance: instance.name(),
                name,
                status: Status::Skipped,
                detail: format!("order {m} above {EXHAUSTIVE_ORDER}"),
            });
            continue;
        }
        let mut worst = 0.0f64;
        for &k in &ks {
            let gap = level_k_loss(s, &dist, k)? - exhaustive_min_loss(s.partition(), &dist, k)?;
            worst = worst.max(gap.abs());
        }
        checks.push(check(instance, name, worst <= INFO_TOL, format!("max gap {worst:.3e}")));
    }

    let mut rng = stream_rng(opts.seed, 0);
    let fa = &schemes[0];
    let mut exceed = 0.0f64;
    for _ in 0..opts.random_schemes {
        let random = SchemeTable::random(fa.partition_arc(), &mut rng);
        for &k in &ks {
            for c in 0..fa.partition().classes().len() {
                let d = r_k_statistic(&random, c, k)? - r_k_statistic(fa, c, k)?;
                exceed = exceed.max(d);
            }
        }
    }
    checks.push(check(
        instance,
        "random-schemes-below-bayes",
        exceed <= STATISTIC_TOL,
        format!("{} schemes, max excess {exceed:.3e}", opts.random_schemes),
    ));

    for s in &schemes {
        let report = check_distribution_consistency(s, &dist, &ConsistencyOptions::default())?;
        let mut detail = format!("{} points x {} obfuscations", report.points_checked, report.obfuscations_per_point);
        if !report.exhaustive {
            detail.push_str(", sampled obfuscations");
        }
        if let Some(w) = report.witnesses.first() {
            detail.push_str(&format!(", orbit {:?} ranks {:?} vs {:?}", w.orbit, w.ranks_first, w.ranks_second));
        }
        checks.push(check(instance, format!("consistency-{}", s.mode().short_name()), report.passed(), detail));
    }

    let (variant, branch) = expected_branch(instance);
    for &k in &ks {
        let r = verify_information_theorem(&dist, k, variant, AssumptionPolicy::Report)?;
        let branch_ok = match branch {
            Branch::Equal => r.losses_equal && r.information_equal_somewhere,
            Branch::Strict => !r.losses_equal && r.margin() > 0.0 && !r.information_equal_somewhere,
        };
        let mut detail = format!(
            "{:?} {:?}: margin {:.6e}, {} tie-breaks, violation mass {:.3}",
            variant,
            branch,
            r.margin(),
            r.outcomes.len(),
            r.violation_mass
        );
        if !r.exhaustive_tie_breaks {
            detail.push_str(", existential check incomplete");
        }
        checks.push(check(instance, format!("loss-vs-information-k{k}"), r.holds && branch_ok, detail));
    }

    Ok(InstanceReport { instance, rows, checks })
}

/// Runs the suite over `instances` in parallel, reporting in input order.
pub fn run_suite(instances: &[BundledInstance], opts: &SuiteOptions) -> Result<SuiteReport> {
    let instances = instances.par_iter().map(|&i| run_instance(i, opts)).collect::<Result<Vec<_>>>()?;
    Ok(SuiteReport { instances })
}

pub fn write_oracle_table(path: &Path, rows: &[OracleRow]) -> Result<()> {
    let mut w = csv_writer(path)?;
    w.write_record(ORACLE_COLUMNS)?;
    for r in rows {
        w.write_record([
            r.k.to_string(),
            r.loss_fa.to_string(),
            r.loss_fo.to_string(),
            r.loss_no.to_string(),
            r.entropy.to_string(),
            r.info_graphs.to_string(),
            r.info_features.to_string(),
        ])?;
    }
    w.flush().map_err(|e| Error::io(path, e))?;
    Ok(())
}

/// Writes `oracle_<instance>.csv`, `checks.csv` and `verdict.txt` under `out`.
pub fn write_suite(out: &Path, report: &SuiteReport) -> Result<()> {
    std::fs::create_dir_all(out).map_err(|e| Error::io(out, e))?;
    for i in &report.instances {
        write_oracle_table(&out.join(format!("oracle_{}.csv", i.instance.name())), &i.rows)?;
    }
    let path = out.join("checks.csv");
    let mut w = csv_writer(&path)?;
    w.write_record(CHECK_COLUMNS)?;
    for c in report.checks() {
        w.write_record([c.instance, c.name.as_str(), &c.status.to_string(), c.detail.as_str()])?;
    }
    w.flush().map_err(|e| Error::io(&path, e))?;
    write_string(&out.join("verdict.txt"), &report.verdict())
}
