//! Monte Carlo sweeps over the simulation model.

use std::path::Path;

use featnom_core::gmm_nominate::{precision_curve, run_pipeline, PipelineInput, PipelineOptions};
use featnom_core::models::{sample_sim_pair, SIM_BLOCKS};
use featnom_core::rng::stream_rng;
use rand::seq::SliceRandom;
use rand::Rng;
use rayon::prelude::*;

use crate::config::{SweepConfig, SweepKind};
use crate::error::Result;
use crate::io::csv_writer;

/// Precision of the three input choices on one simulated pair.
#[derive(Clone, Debug, PartialEq)]
pub struct TrialRecord {
    pub trial: usize,
    /// Stream of the root seed this trial was drawn from.
    pub stream: u64,
    pub eps: f64,
    pub delta: f64,
    /// `r(k)` per entry of the k grid.
    pub r_fg: Vec<usize>,
    pub r_f: Vec<usize>,
    pub r_g: Vec<usize>,
}

/// Mean and standard error of the sweep's difference at one grid point and k.
#[derive(Clone, Debug, PartialEq)]
pub struct SummaryRow {
    pub eps: f64,
    pub delta: f64,
    pub k: usize,
    pub mean_r_fg: f64,
    pub mean_r_f: f64,
    pub mean_r_g: f64,
    pub mean_diff: f64,
    pub se_diff: f64,
    pub trials: usize,
}

pub const TRIAL_COLUMNS: [&str; 8] = ["trial", "stream", "eps", "delta", "k", "r_fg", "r_f", "r_g"];
pub const SUMMARY_COLUMNS: [&str; 9] =
    ["eps", "delta", "k", "mean_r_fg", "mean_r_f", "mean_r_g", "mean_diff", "se_diff", "trials"];

/// Stream id of `trial` at grid point `point`.
pub fn trial_stream(point: usize, trial: usize) -> u64 {
    ((point as u64) << 32) | trial as u64
}

/// One simulated pair nominated with graph+features, features only and the
/// graph only. Seeds are drawn from block one, the vertices of interest are
/// block one of `G1` and the truth is its non-seed part in `G2`.
pub fn run_trial(cfg: &SweepConfig, eps: f64, delta: f64, trial: usize, stream: u64) -> Result<TrialRecord> {
    let mut rng = stream_rng(cfg.seed, stream);
    let pair = sample_sim_pair(eps, delta, cfg.order, &mut rng)?;
    let block = cfg.order / SIM_BLOCKS;
    let mut block_one: Vec<usize> = (0..block).collect();
    block_one.shuffle(&mut rng);
    let mut seed_vertices = block_one[..cfg.seeds].to_vec();
    seed_vertices.sort_unstable();
    let seeds: Vec<(usize, usize)> = seed_vertices.iter().map(|&s| (s, s)).collect();
    let interest: Vec<usize> = (0..block).collect();
    let truth: Vec<usize> = (0..block).filter(|v| seed_vertices.binary_search(v).is_err()).collect();
    let gmm_seed: u64 = rng.random();
    let input = PipelineInput { g1: &pair.g1, g2: &pair.g2, x: Some(&pair.x), y: Some(&pair.y), seeds: &seeds, interest: &interest };
    let run = |use_graph, use_features| -> Result<Vec<usize>> {
        let opts = PipelineOptions {
            use_graph,
            use_features,
            dim: Some(cfg.dim),
            components: Some(cfg.components),
            seed: gmm_seed,
            scale_features: false,
        };
        let out = run_pipeline(&input, &opts)?;
        Ok(precision_curve(&out.result, &truth, &cfg.ks)?)
    };
    Ok(TrialRecord { trial, stream, eps, delta, r_fg: run(true, true)?, r_f: run(false, true)?, r_g: run(true, false)? })
}

/// Every trial of every grid point, in grid then trial order. Trials run in
/// parallel; the result does not depend on the thread count.
pub fn run_sweep(cfg: &SweepConfig) -> Result<Vec<TrialRecord>> {
    cfg.validate()?;
    let jobs: Vec<(usize, f64, f64, usize)> = cfg
        .grid()
        .into_iter()
        .enumerate()
        .flat_map(|(p, (e, d))| (0..cfg.trials).map(move |t| (p, e, d, t)))
        .collect();
    jobs.into_par_iter().map(|(p, e, d, t)| run_trial(cfg, e, d, t, trial_stream(p, t))).collect()
}

fn mean_se(values: &[f64]) -> (f64, f64) {
    let n = values.len() as f64;
    let mean = values.iter().sum::<f64>() / n;
    if values.len() < 2 {
        return (mean, 0.0);
    }
    let var = values.iter().map(|v| (v - mean) * (v - mean)).sum::<f64>() / (n - 1.0);
    (mean, (var / n).sqrt())
}

/// Per grid point and k: means of each input choice and the mean and standard
/// error of `r_fg − r_f` (eps sweep) or `r_fg − r_g` (delta sweep).
pub fn summarize(cfg: &SweepConfig, records: &[TrialRecord]) -> Vec<SummaryRow> {
    let mut rows = Vec::new();
    for (eps, delta) in cfg.grid() {
        let point: Vec<&TrialRecord> = records.iter().filter(|r| r.eps == eps && r.delta == delta).collect();
        if point.is_empty() {
            continue;
        }
        for (i, &k) in cfg.ks.iter().enumerate() {
            let col = |f: fn(&TrialRecord) -> &Vec<usize>| point.iter().map(|r| f(r)[i] as f64).collect::<Vec<f64>>();
            let fg = col(|r| &r.r_fg);
            let f = col(|r| &r.r_f);
            let g = col(|r| &r.r_g);
            let other = match cfg.kind {
                SweepKind::Eps => &f,
                SweepKind::Delta => &g,
            };
            let diff: Vec<f64> = fg.iter().zip(other).map(|(a, b)| a - b).collect();
            let (mean_diff, se_diff) = mean_se(&diff);
            rows.push(SummaryRow {
                eps,
                delta,
                k,
                mean_r_fg: mean_se(&fg).0,
                mean_r_f: mean_se(&f).0,
                mean_r_g: mean_se(&g).0,
                mean_diff,
                se_diff,
                trials: point.len(),
            });
        }
    }
    rows
}

/// Long-format trial table, one row per trial and k.
pub fn write_trials(path: &Path, cfg: &SweepConfig, records: &[TrialRecord]) -> Result<()> {
    let mut w = csv_writer(path)?;
    w.write_record(TRIAL_COLUMNS)?;
    for r in records {
        for (i, k) in cfg.ks.iter().enumerate() {
            w.write_record([
                r.trial.to_string(),
                r.stream.to_string(),
                r.eps.to_string(),
                r.delta.to_string(),
                k.to_string(),
                r.r_fg[i].to_string(),
                r.r_f[i].to_string(),
                r.r_g[i].to_string(),
            ])?;
        }
    }
    w.flush().map_err(|e| crate::error::Error::io(path, e))?;
    Ok(())
}

pub fn write_summary(path: &Path, rows: &[SummaryRow]) -> Result<()> {
    let mut w = csv_writer(path)?;
    w.write_record(SUMMARY_COLUMNS)?;
    for r in rows {
        w.write_record([
            r.eps.to_string(),
            r.delta.to_string(),
            r.k.to_string(),
            r.mean_r_fg.to_string(),
            r.mean_r_f.to_string(),
            r.mean_r_g.to_string(),
            r.mean_diff.to_string(),
            r.se_diff.to_string(),
            r.trials.to_string(),
        ])?;
    }
    w.flush().map_err(|e| crate::error::Error::io(path, e))?;
    Ok(())
}

/// Runs a sweep and writes `<kind>_trials.csv` and `<kind>_summary.csv` under
/// `out`.
pub fn run_and_write(cfg: &SweepConfig, out: &Path) -> Result<Vec<SummaryRow>> {
    std::fs::create_dir_all(out).map_err(|e| crate::error::Error::io(out, e))?;
    let records = run_sweep(cfg)?;
    let rows = summarize(cfg, &records);
    write_trials(&out.join(format!("{}_trials.csv", cfg.kind.name())), cfg, &records)?;
    write_summary(&out.join(format!("{}_summary.csv", cfg.kind.name())), &rows)?;
    Ok(rows)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn mean_and_standard_error() {
        let (m, se) = mean_se(&[1.0, 2.0, 3.0, 4.0]);
        assert_eq!(m, 2.5);
        assert!((se - (5.0f64 / 3.0 / 4.0).sqrt()).abs() < 1e-15);
        assert_eq!(mean_se(&[7.0]), (7.0, 0.0));
    }

    #[test]
    fn streams_are_distinct_per_point_and_trial() {
        assert_ne!(trial_stream(0, 1), trial_stream(1, 0));
        assert_eq!(trial_stream(2, 3), (2 << 32) | 3);
    }
}
