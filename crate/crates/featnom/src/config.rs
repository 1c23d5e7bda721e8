//! Sweep configuration: kind defaults, a TOML file, then command-line flags.

use std::path::Path;

use featnom_core::models::{SIM_BLOCKS, SIM_ORDER};
use serde::Deserialize;

use crate::error::{Error, Result};

/// Trials per grid point at desk scale.
pub const DESK_TRIALS: usize = 20;
/// Trials per grid point with `--paper-scale`.
pub const FULL_TRIALS: usize = 100;

/// Which parameter a sweep varies.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum SweepKind {
    /// Graph signal varies; graph+features is compared with features only.
    Eps,
    /// Feature signal varies; graph+features is compared with the graph only.
    Delta,
}

impl SweepKind {
    pub fn name(self) -> &'static str {
        match self {
            SweepKind::Eps => "eps-sweep",
            SweepKind::Delta => "delta-sweep",
        }
    }
}

/// A fully resolved sweep.
#[derive(Clone, Debug, PartialEq)]
pub struct SweepConfig {
    pub kind: SweepKind,
    pub eps: Vec<f64>,
    pub delta: Vec<f64>,
    pub ks: Vec<usize>,
    pub trials: usize,
    pub seed: u64,
    /// Vertices per graph.
    pub order: usize,
    /// Seeded vertices drawn from block one.
    pub seeds: usize,
    pub dim: usize,
    pub components: usize,
}

impl SweepConfig {
    pub fn defaults(kind: SweepKind) -> Self {
        let (eps, delta) = match kind {
            SweepKind::Eps => (vec![0.0, 0.1, 0.2, 0.3, 0.5], vec![1.0]),
            SweepKind::Delta => (vec![0.25], vec![0.0, 0.5, 1.0, 1.5, 2.0]),
        };
        Self {
            kind,
            eps,
            delta,
            ks: vec![1, 10, 20, 30, 40],
            trials: DESK_TRIALS,
            seed: 1,
            order: SIM_ORDER,
            seeds: 10,
            dim: 5,
            components: 5,
        }
    }

    /// Grid points in row-major `(eps, delta)` order.
    pub fn grid(&self) -> Vec<(f64, f64)> {
        self.eps.iter().flat_map(|&e| self.delta.iter().map(move |&d| (e, d))).collect()
    }

    pub fn apply(&mut self, o: &SweepOverrides) {
        if let Some(v) = &o.eps {
            self.eps = v.clone();
        }
        if let Some(v) = &o.delta {
            self.delta = v.clone();
        }
        if let Some(v) = &o.ks {
            self.ks = v.clone();
        }
        if o.paper_scale == Some(true) {
            self.trials = FULL_TRIALS;
        }
        if let Some(v) = o.trials {
            self.trials = v;
        }
        if let Some(v) = o.seed {
            self.seed = v;
        }
        if let Some(v) = o.order {
            self.order = v;
        }
        if let Some(v) = o.seeds {
            self.seeds = v;
        }
        if let Some(v) = o.dim {
            self.dim = v;
        }
        if let Some(v) = o.components {
            self.components = v;
        }
    }

    pub fn validate(&self) -> Result<()> {
        let fail = |m: String| Err(Error::Config(m));
        if self.eps.is_empty() || self.delta.is_empty() || self.ks.is_empty() {
            return fail("eps, delta and k grids must be nonempty".into());
        }
        if let Some(e) = self.eps.iter().find(|e| !(0.0..=0.65).contains(*e)) {
            return fail(format!("eps {e} outside [0, 0.65]"));
        }
        if let Some(d) = self.delta.iter().find(|d| !d.is_finite()) {
            return fail(format!("delta {d} is not finite"));
        }
        if self.trials == 0 {
            return fail("trials must be at least 1".into());
        }
        if self.order == 0 || !self.order.is_multiple_of(SIM_BLOCKS) {
            return fail(format!("order {} is not a positive multiple of {SIM_BLOCKS}", self.order));
        }
        let block = self.order / SIM_BLOCKS;
        if self.seeds == 0 || self.seeds >= block {
            return fail(format!("seeds must lie in 1..{block}"));
        }
        let candidates = self.order - self.seeds;
        if let Some(k) = self.ks.iter().find(|&&k| k == 0 || k > candidates) {
            return fail(format!("k = {k} outside 1..={candidates}"));
        }
        if self.dim == 0 || self.dim > self.order || self.components == 0 {
            return fail("dim and components must be positive and dim at most the order".into());
        }
        Ok(())
    }
}

/// Optional settings read from a TOML file or flags.
#[derive(Clone, Debug, Default, PartialEq, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SweepOverrides {
    pub eps: Option<Vec<f64>>,
    pub delta: Option<Vec<f64>>,
    pub ks: Option<Vec<usize>>,
    pub trials: Option<usize>,
    pub paper_scale: Option<bool>,
    pub seed: Option<u64>,
    pub order: Option<usize>,
    pub seeds: Option<usize>,
    pub dim: Option<usize>,
    pub components: Option<usize>,
}

impl SweepOverrides {
    pub fn from_toml(text: &str) -> Result<Self> {
        Ok(toml::from_str(text)?)
    }

    pub fn from_file(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
        Self::from_toml(&text)
    }
}

/// Kind defaults, then the file, then the flags.
pub fn resolve(kind: SweepKind, file: Option<&SweepOverrides>, flags: &SweepOverrides) -> Result<SweepConfig> {
    let mut cfg = SweepConfig::defaults(kind);
    if let Some(f) = file {
        cfg.apply(f);
    }
    cfg.apply(flags);
    cfg.validate()?;
    Ok(cfg)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn layering() {
        let file = SweepOverrides::from_toml("trials = 3\neps = [0.0, 0.5]\nseed = 9\n").unwrap();
        let flags = SweepOverrides { trials: Some(2), ..Default::default() };
        let cfg = resolve(SweepKind::Eps, Some(&file), &flags).unwrap();
        assert_eq!(cfg.trials, 2);
        assert_eq!(cfg.eps, vec![0.0, 0.5]);
        assert_eq!(cfg.delta, vec![1.0]);
        assert_eq!(cfg.seed, 9);
        assert_eq!(cfg.grid(), vec![(0.0, 1.0), (0.5, 1.0)]);
    }

    #[test]
    fn paper_scale_and_validation() {
        let flags = SweepOverrides { paper_scale: Some(true), ..Default::default() };
        assert_eq!(resolve(SweepKind::Delta, None, &flags).unwrap().trials, FULL_TRIALS);
        assert!(SweepOverrides::from_toml("bogus = 1").is_err());
        for bad in [
            SweepOverrides { eps: Some(vec![0.9]), ..Default::default() },
            SweepOverrides { trials: Some(0), ..Default::default() },
            SweepOverrides { ks: Some(vec![241]), ..Default::default() },
            SweepOverrides { seeds: Some(50), ..Default::default() },
            SweepOverrides { order: Some(252), ..Default::default() },
        ] {
            assert!(resolve(SweepKind::Eps, None, &bad).is_err(), "{bad:?}");
        }
    }
}
