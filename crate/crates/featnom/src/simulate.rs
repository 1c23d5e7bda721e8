//! Writes simulated inputs for the `nominate` subcommand.

use std::path::Path;

use featnom_core::models::{sample_sim_pair, synthetic_connectome, SIM_BLOCKS};
use featnom_core::rng::stream_rng;
use nalgebra::DMatrix;
use rand::seq::SliceRandom;

use crate::error::{Error, Result};
use crate::io::{csv_writer, write_categories, write_edge_list, write_pairs, write_vertices};

/// Neuron type names of the synthetic connectome, in type order.
pub const NEURON_TYPE_NAMES: [&str; 3] = ["sensory", "motor", "inter"];

fn write_matrix(path: &Path, m: &DMatrix<f64>) -> Result<()> {
    let mut w = csv_writer(path)?;
    let mut header = vec!["vertex".to_owned()];
    header.extend((1..=m.ncols()).map(|c| format!("f{c}")));
    w.write_record(&header)?;
    for (v, row) in m.row_iter().enumerate() {
        let mut rec = vec![v.to_string()];
        rec.extend(row.iter().map(|x| x.to_string()));
        w.write_record(&rec)?;
    }
    w.flush().map_err(|e| Error::io(path, e))
}

/// Writes `g1.edges`, `g2.edges`, `x.csv`, `y.csv`, `seeds.txt` (random
/// block-one vertices) and `interest.txt` (block one of `G1`).
pub fn write_sim(out: &Path, eps: f64, delta: f64, order: usize, seeds: usize, seed: u64) -> Result<()> {
    let mut rng = stream_rng(seed, 0);
    let pair = sample_sim_pair(eps, delta, order, &mut rng)?;
    let block = order / SIM_BLOCKS;
    if seeds == 0 || seeds >= block {
        return Err(Error::Config(format!("seeds must lie in 1..{block}")));
    }
    let mut block_one: Vec<usize> = (0..block).collect();
    block_one.shuffle(&mut rng);
    let mut chosen = block_one[..seeds].to_vec();
    chosen.sort_unstable();
    write_edge_list(&out.join("g1.edges"), &pair.g1)?;
    write_edge_list(&out.join("g2.edges"), &pair.g2)?;
    write_matrix(&out.join("x.csv"), &pair.x)?;
    write_matrix(&out.join("y.csv"), &pair.y)?;
    write_pairs(&out.join("seeds.txt"), &chosen.iter().map(|&s| (s, s)).collect::<Vec<_>>())?;
    write_vertices(&out.join("interest.txt"), &(0..block).collect::<Vec<_>>())
}

/// Writes the synthetic connectome: `chemical.edges`, `electrical.edges`,
/// `types_chemical.csv`, `types_electrical.csv`, `seeds.txt` (`seeds` random
/// matched pairs) and `matches.txt`.
pub fn write_connectome(out: &Path, seeds: usize, seed: u64) -> Result<()> {
    let mut rng = stream_rng(seed, 0);
    let pair = synthetic_connectome(&mut rng);
    let n = pair.n();
    if seeds == 0 || seeds >= n {
        return Err(Error::Config(format!("seeds must lie in 1..{n}")));
    }
    let mut vertices: Vec<usize> = (0..n).collect();
    vertices.shuffle(&mut rng);
    let mut chosen = vertices[..seeds].to_vec();
    chosen.sort_unstable();
    let matches: Vec<(usize, usize)> = pair.matching.iter().enumerate().map(|(v, &m)| (v, m)).collect();
    write_edge_list(&out.join("chemical.edges"), &pair.first)?;
    write_edge_list(&out.join("electrical.edges"), &pair.second)?;
    write_categories(&out.join("types_chemical.csv"), "type", &NEURON_TYPE_NAMES, &pair.first_types)?;
    write_categories(&out.join("types_electrical.csv"), "type", &NEURON_TYPE_NAMES, &pair.second_types)?;
    write_pairs(&out.join("seeds.txt"), &chosen.iter().map(|&v| matches[v]).collect::<Vec<_>>())?;
    write_pairs(&out.join("matches.txt"), &matches)
}
