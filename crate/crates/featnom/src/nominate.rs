//! Nomination on graphs and features read from files.

use std::collections::BTreeSet;
use std::path::{Path, PathBuf};

use featnom_core::gmm_nominate::{
    match_curve, match_ranks, run_pipeline, Inputs, NominationResult, PipelineInput, PipelineOptions,
};
use featnom_core::spectral::WeightedAdjacency;
use nalgebra::DMatrix;

use crate::error::{Error, Result};
use crate::io::{
    adjacency_from_edges, csv_writer, edge_list_order, read_edge_list, read_features, read_pairs, read_vertices,
    write_nominations, FeatureTable,
};

/// Short file tag of an input choice.
pub fn inputs_tag(inputs: Inputs) -> &'static str {
    match inputs {
        Inputs::GraphAndFeatures => "gf",
        Inputs::GraphOnly => "g",
        Inputs::FeaturesOnly => "f",
    }
}

pub fn options_for(inputs: Inputs, base: &PipelineOptions) -> PipelineOptions {
    PipelineOptions {
        use_graph: inputs != Inputs::FeaturesOnly,
        use_features: inputs != Inputs::GraphOnly,
        ..*base
    }
}

/// Files and settings of one nomination run.
#[derive(Clone, Debug)]
pub struct NominateJob {
    pub g1: PathBuf,
    pub g2: PathBuf,
    pub features1: Option<PathBuf>,
    /// Defaults to `features1`.
    pub features2: Option<PathBuf>,
    /// `a b` pairs: vertex `a` of `G1` is vertex `b` of `G2`.
    pub seeds: PathBuf,
    /// Vertices of interest in `G1`; every non-seed vertex when unset.
    pub interest: Option<PathBuf>,
    /// Known correspondences for scoring; the identity when unset.
    pub matches: Option<PathBuf>,
    /// Vertex count of both graphs; taken from the feature tables or the
    /// edge lists when unset.
    pub order: Option<usize>,
    pub inputs: Vec<Inputs>,
    pub options: PipelineOptions,
    pub out: PathBuf,
}

/// Outcome of one input choice.
#[derive(Clone, Debug, PartialEq)]
pub struct NominateRun {
    pub inputs: Inputs,
    pub dim: Option<usize>,
    pub components: usize,
    /// `y(x)` for `x = 1..=candidates`.
    pub curve: Vec<usize>,
}

/// Graphs, features and correspondences after loading and checking.
#[derive(Clone, Debug)]
pub struct LoadedPair {
    pub g1: WeightedAdjacency,
    pub g2: WeightedAdjacency,
    pub x: Option<DMatrix<f64>>,
    pub y: Option<DMatrix<f64>>,
    pub seeds: Vec<(usize, usize)>,
    pub interest: Vec<usize>,
    pub matches: Vec<(usize, usize)>,
}

fn graph_order(path: &Path, explicit: Option<usize>, features: Option<&FeatureTable>, edge_order: usize) -> Result<usize> {
    let n = explicit.or(features.map(|f| f.values.nrows())).unwrap_or(edge_order);
    if let (Some(e), Some(f)) = (explicit, features) {
        if e != f.values.nrows() {
            return Err(Error::Config(format!("{}: {} feature rows for {e} vertices", path.display(), f.values.nrows())));
        }
    }
    if edge_order > n {
        return Err(Error::Config(format!("{}: vertex {} out of range for {n} vertices", path.display(), edge_order - 1)));
    }
    Ok(n)
}

fn check_range(what: &str, vertices: impl IntoIterator<Item = usize>, n: usize) -> Result<()> {
    match vertices.into_iter().find(|&v| v >= n) {
        Some(v) => Err(Error::Config(format!("{what}: vertex {v} out of range for {n} vertices"))),
        None => Ok(()),
    }
}

pub fn load_pair(job: &NominateJob) -> Result<LoadedPair> {
    let t1 = job.features1.as_deref().map(read_features).transpose()?;
    let t2 = match (&job.features2, &t1) {
        (Some(p), _) => Some(read_features(p)?),
        (None, t) => t.clone(),
    };
    if let (Some(a), Some(b)) = (&t1, &t2) {
        if a.columns != b.columns {
            return Err(Error::Config(format!("feature columns differ: {:?} vs {:?}", a.columns, b.columns)));
        }
    }
    let e1 = read_edge_list(&job.g1)?;
    let e2 = read_edge_list(&job.g2)?;
    let n1 = graph_order(&job.g1, job.order, t1.as_ref(), edge_list_order(&e1))?;
    let n2 = graph_order(&job.g2, job.order, t2.as_ref(), edge_list_order(&e2))?;
    let g1 = adjacency_from_edges(&job.g1, &e1, n1)?;
    let g2 = adjacency_from_edges(&job.g2, &e2, n2)?;

    let seeds = read_pairs(&job.seeds)?;
    check_range("seeds", seeds.iter().map(|s| s.0), n1)?;
    check_range("seeds", seeds.iter().map(|s| s.1), n2)?;
    let seeded1: BTreeSet<usize> = seeds.iter().map(|s| s.0).collect();
    let seeded2: BTreeSet<usize> = seeds.iter().map(|s| s.1).collect();
    let interest = match &job.interest {
        Some(p) => read_vertices(p)?,
        None => (0..n1).filter(|v| !seeded1.contains(v)).collect(),
    };
    check_range("interest", interest.iter().copied(), n1)?;
    let matches = match &job.matches {
        Some(p) => read_pairs(p)?,
        None if n1 == n2 => (0..n1).map(|v| (v, v)).collect(),
        None => return Err(Error::Config("graphs differ in order; a matches file is required".into())),
    };
    check_range("matches", matches.iter().map(|m| m.0), n1)?;
    check_range("matches", matches.iter().map(|m| m.1), n2)?;
    let matches = matches.into_iter().filter(|(a, b)| !seeded1.contains(a) && !seeded2.contains(b)).collect();
    Ok(LoadedPair { g1, g2, x: t1.map(|t| t.values), y: t2.map(|t| t.values), seeds, interest, matches })
}

/// Nominates with one input choice and scores every known match.
pub fn nominate_pair(pair: &LoadedPair, inputs: Inputs, base: &PipelineOptions) -> Result<(NominateRun, NominationResult)> {
    let input = PipelineInput {
        g1: &pair.g1,
        g2: &pair.g2,
        x: pair.x.as_ref(),
        y: pair.y.as_ref(),
        seeds: &pair.seeds,
        interest: &pair.interest,
    };
    let out = run_pipeline(&input, &options_for(inputs, base))?;
    let excluded: Vec<usize> = pair.seeds.iter().map(|s| s.1).collect();
    let ranks = match_ranks(&out.first, &out.second, &pair.matches, &excluded)?;
    let candidates = out.result.len();
    let curve = match_curve(&ranks, candidates);
    Ok((NominateRun { inputs, dim: out.dim, components: out.model.k(), curve }, out.result))
}

/// Matches of the vertices of interest.
pub fn interest_truth(pair: &LoadedPair) -> Vec<usize> {
    let interest: BTreeSet<usize> = pair.interest.iter().copied().collect();
    pair.matches.iter().filter(|m| interest.contains(&m.0)).map(|m| m.1).collect()
}

/// Writes `nominations_<tag>.csv` per input choice and `curve.csv` with
/// columns `x,y_<tag>..` under the job's output directory.
pub fn nominate_files(job: &NominateJob) -> Result<Vec<NominateRun>> {
    if job.inputs.is_empty() {
        return Err(Error::Config("no input choice requested".into()));
    }
    let pair = load_pair(job)?;
    std::fs::create_dir_all(&job.out).map_err(|e| Error::io(&job.out, e))?;
    let truth = interest_truth(&pair);
    let mut runs = Vec::new();
    for &inputs in &job.inputs {
        let (run, result) = nominate_pair(&pair, inputs, &job.options)?;
        write_nominations(&job.out.join(format!("nominations_{}.csv", inputs_tag(inputs))), &result, &truth)?;
        runs.push(run);
    }
    write_curves(&job.out.join("curve.csv"), &runs)?;
    Ok(runs)
}

pub fn write_curves(path: &Path, runs: &[NominateRun]) -> Result<()> {
    let mut w = csv_writer(path)?;
    let mut header = vec!["x".to_owned()];
    header.extend(runs.iter().map(|r| format!("y_{}", inputs_tag(r.inputs))));
    w.write_record(&header)?;
    let len = runs.iter().map(|r| r.curve.len()).max().unwrap_or(0);
    for x in 0..len {
        let mut rec = vec![(x + 1).to_string()];
        rec.extend(runs.iter().map(|r| r.curve.get(x).or(r.curve.last()).copied().unwrap_or(0).to_string()));
        w.write_record(&rec)?;
    }
    w.flush().map_err(|e| Error::io(path, e))?;
    Ok(())
}
