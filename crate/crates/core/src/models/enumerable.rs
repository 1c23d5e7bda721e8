//! Finite nominatable distributions: explicit probability tables over
//! featured graph pairs, built from product factors.

use alloc::collections::BTreeMap;
use alloc::format;
use alloc::vec;
use alloc::vec::Vec;

use crate::error::{Error, Result};
use crate::featured_graph::{
    is_f_asymmetric, pair_at, pair_count, pair_index, FeaturedGraph, Obfuscation, Symbol, VertexPermutation,
};
use crate::models::{check_probability, SbmParams};
use crate::sum::kahan_sum;

/// Default cap on the number of support entries.
pub const DEFAULT_SUPPORT_CAP: usize = 1_000_000;
const MASS_TOL: f64 = 1e-12;

/// Almost-sure regularity conditions a distribution may be required to meet.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Assumption {
    /// Neither featured graph has a nontrivial f-automorphism.
    FeatureAsymmetry,
    /// Neither underlying graph has a nontrivial automorphism.
    GraphAsymmetry,
    /// Neither graph repeats a vertex-feature row.
    DistinctRows,
}

impl Assumption {
    pub fn name(self) -> &'static str {
        match self {
            Assumption::FeatureAsymmetry => "feature asymmetry",
            Assumption::GraphAsymmetry => "graph asymmetry",
            Assumption::DistinctRows => "distinct vertex-feature rows",
        }
    }

    /// Whether the pair `(g1, g2)` meets the assumption.
    pub fn holds(self, g1: &FeaturedGraph, g2: &FeaturedGraph) -> Result<bool> {
        Ok(match self {
            Assumption::FeatureAsymmetry => is_f_asymmetric(g1)? && is_f_asymmetric(g2)?,
            Assumption::GraphAsymmetry => is_f_asymmetric(&g1.topology())? && is_f_asymmetric(&g2.topology())?,
            Assumption::DistinctRows => g1.has_distinct_vertex_rows() && g2.has_distinct_vertex_rows(),
        })
    }
}

/// What to do with support entries that violate a required assumption.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Default)]
pub enum ViolationPolicy {
    /// Drop them and renormalize the remaining mass.
    #[default]
    Drop,
    /// Fail on the first violation.
    Reject,
}

/// A finite distribution over feature rows of a fixed width.
#[derive(Clone, Debug, PartialEq)]
pub struct Categorical {
    outcomes: Vec<(Vec<Symbol>, f64)>,
}

impl Categorical {
    pub fn new(outcomes: Vec<(Vec<Symbol>, f64)>) -> Result<Self> {
        let width = outcomes.first().map(|o| o.0.len()).ok_or(Error::Empty("categorical"))?;
        if width == 0 {
            return Err(Error::InvalidDimension("feature rows must have width at least 1"));
        }
        for (row, p) in &outcomes {
            if row.len() != width {
                return Err(Error::SizeMismatch { what: "categorical row", expected: width, found: row.len() });
            }
            check_probability("categorical outcome", *p)?;
        }
        let total = kahan_sum(outcomes.iter().map(|o| o.1));
        if libm::fabs(total - 1.0) > MASS_TOL {
            return Err(Error::InvalidProbability { what: "categorical total", value: total });
        }
        Ok(Self { outcomes })
    }

    /// A single row with probability one.
    pub fn point(row: Vec<Symbol>) -> Self {
        Self { outcomes: vec![(row, 1.0)] }
    }

    /// Width-1 rows from `(symbol, probability)` pairs.
    pub fn symbols(weights: &[(u32, f64)]) -> Result<Self> {
        Self::new(weights.iter().map(|&(s, p)| (vec![Symbol(s)], p)).collect())
    }

    /// Uniform over width-1 symbols.
    pub fn uniform_symbols(symbols: &[u32]) -> Self {
        let p = 1.0 / symbols.len() as f64;
        Self { outcomes: symbols.iter().map(|&s| (vec![Symbol(s)], p)).collect() }
    }

    pub fn width(&self) -> usize {
        self.outcomes[0].0.len()
    }

    pub fn outcomes(&self) -> &[(Vec<Symbol>, f64)] {
        &self.outcomes
    }
}

/// Edge factors: independent Bernoulli indicators per vertex pair.
#[derive(Clone, Debug, PartialEq)]
pub struct EdgeModel {
    /// Edge probability of each pair of the first graph, in pair order.
    pub g1: Vec<f64>,
    /// Edge probability of each pair of the second graph, used for pairs
    /// that are not copied from the first graph.
    pub g2: Vec<f64>,
    /// When set, each core pair of the second graph copies the first graph's
    /// indicator and flips it with this probability.
    pub core_flip: Option<f64>,
    /// Row distribution drawn independently for every present edge of both
    /// graphs; `None` gives every edge the constant row `[0]`.
    pub edge_features: Option<Categorical>,
}

impl EdgeModel {
    /// Independent graphs with the given per-pair probabilities.
    pub fn independent(g1: Vec<f64>, g2: Vec<f64>) -> Self {
        Self { g1, g2, core_flip: None, edge_features: None }
    }

    /// Independent blockmodel graphs.
    pub fn sbm(p1: &SbmParams, p2: &SbmParams) -> Self {
        Self::independent(pair_probabilities(p1), pair_probabilities(p2))
    }

    /// Both graphs empty.
    pub fn empty(n: usize, m: usize) -> Self {
        Self::independent(vec![0.0; pair_count(n)], vec![0.0; pair_count(m)])
    }
}

/// Per-pair edge probabilities of a blockmodel, in pair order.
pub fn pair_probabilities(p: &SbmParams) -> Vec<f64> {
    (0..pair_count(p.n()))
        .map(|e| {
            let (u, v) = pair_at(p.n(), e);
            p.edge_probability(u, v)
        })
        .collect()
}

/// Vertex-feature factors.
#[derive(Clone, Debug, PartialEq)]
pub enum FeatureModel {
    /// Independent per-vertex rows. With `core_noise = Some(η)`, a core
    /// vertex of the second graph copies its first-graph row with
    /// probability `1 − η` and otherwise draws from its own categorical.
    Product { x: Vec<Categorical>, y: Vec<Categorical>, core_noise: Option<f64> },
    /// Explicit joint table of `(x, y)` feature matrices (row-major).
    Joint { d1: usize, d2: usize, table: Vec<(Vec<Symbol>, Vec<Symbol>, f64)> },
}

impl FeatureModel {
    /// Deterministic features.
    pub fn fixed(x: &[u32], y: &[u32]) -> Self {
        FeatureModel::Product {
            x: x.iter().map(|&s| Categorical::point(vec![Symbol(s)])).collect(),
            y: y.iter().map(|&s| Categorical::point(vec![Symbol(s)])).collect(),
            core_noise: None,
        }
    }

    fn widths(&self) -> Result<(usize, usize)> {
        match self {
            FeatureModel::Product { x, y, .. } => {
                let d1 = x.first().ok_or(Error::Empty("vertex feature factors"))?.width();
                let d2 = y.first().ok_or(Error::Empty("vertex feature factors"))?.width();
                if x.iter().any(|c| c.width() != d1) || y.iter().any(|c| c.width() != d2) {
                    return Err(Error::InvalidDimension("vertex feature factors differ in width"));
                }
                Ok((d1, d2))
            }
            FeatureModel::Joint { d1, d2, .. } => Ok((*d1, *d2)),
        }
    }
}

/// Declarative description of a finite nominatable distribution.
#[derive(Clone, Debug, PartialEq)]
pub struct NominatablePairSpec {
    pub n: usize,
    pub m: usize,
    /// Vertices `0..core` are shared by both graphs.
    pub core: usize,
    pub edges: EdgeModel,
    pub features: FeatureModel,
    pub interest: Vec<usize>,
    /// Defaults to `v ↦ (v + 1) mod m`.
    pub obfuscation: Option<Obfuscation>,
    pub require: Vec<Assumption>,
    pub policy: ViolationPolicy,
    pub cap: usize,
}

impl NominatablePairSpec {
    pub fn new(n: usize, m: usize, core: usize, edges: EdgeModel, features: FeatureModel, interest: Vec<usize>) -> Self {
        Self {
            n,
            m,
            core,
            edges,
            features,
            interest,
            obfuscation: None,
            require: Vec::new(),
            policy: ViolationPolicy::Drop,
            cap: DEFAULT_SUPPORT_CAP,
        }
    }

    pub fn require(mut self, a: Assumption) -> Self {
        self.require.push(a);
        self
    }

    pub fn policy(mut self, p: ViolationPolicy) -> Self {
        self.policy = p;
        self
    }

    pub fn cap(mut self, cap: usize) -> Self {
        self.cap = cap;
        self
    }

    pub fn obfuscation(mut self, o: Obfuscation) -> Self {
        self.obfuscation = Some(o);
        self
    }

    fn validate(&self) -> Result<()> {
        if self.n == 0 || self.m == 0 {
            return Err(Error::InvalidDimension("graph orders must be positive"));
        }
        if self.core > self.n.min(self.m) {
            return Err(Error::InvalidParameter(format!("core size {} exceeds graph orders", self.core)));
        }
        for (what, v, n) in [("first-graph edge factors", &self.edges.g1, self.n), ("second-graph edge factors", &self.edges.g2, self.m)] {
            if v.len() != pair_count(n) {
                return Err(Error::SizeMismatch { what, expected: pair_count(n), found: v.len() });
            }
            for &p in v {
                check_probability(what, p)?;
            }
        }
        if let Some(f) = self.edges.core_flip {
            check_probability("flip probability", f)?;
        }
        match &self.features {
            FeatureModel::Product { x, y, core_noise } => {
                if x.len() != self.n {
                    return Err(Error::SizeMismatch { what: "first-graph feature factors", expected: self.n, found: x.len() });
                }
                if y.len() != self.m {
                    return Err(Error::SizeMismatch { what: "second-graph feature factors", expected: self.m, found: y.len() });
                }
                if let Some(eta) = core_noise {
                    check_probability("feature noise", *eta)?;
                    let (d1, d2) = self.features.widths()?;
                    if d1 != d2 {
                        return Err(Error::InvalidDimension("copied feature rows need equal widths"));
                    }
                }
            }
            FeatureModel::Joint { d1, d2, table } => {
                for (x, y, p) in table {
                    if x.len() != self.n * d1 || y.len() != self.m * d2 {
                        return Err(Error::InvalidDimension("joint feature table entry has the wrong shape"));
                    }
                    check_probability("joint feature entry", *p)?;
                }
            }
        }
        self.features.widths()?;
        if self.interest.iter().any(|&v| v >= self.core) {
            return Err(Error::InvalidParameter("vertices of interest must be core vertices".into()));
        }
        if self.cap == 0 {
            return Err(Error::InvalidParameter("support cap must be positive".into()));
        }
        Ok(())
    }
}

/// One entry of a finite distribution.
#[derive(Clone, Debug, PartialEq)]
pub struct SupportPoint {
    pub g1: FeaturedGraph,
    pub g2: FeaturedGraph,
    pub p: f64,
}

/// An explicit probability table over featured graph pairs, together with
/// the vertices of interest and the obfuscation of the second graph.
#[derive(Clone, Debug, PartialEq)]
pub struct EnumerableNominatableDistribution {
    core: usize,
    support: Vec<SupportPoint>,
    interest: Vec<usize>,
    obfuscation: Obfuscation,
    enforced: Vec<Assumption>,
}

impl EnumerableNominatableDistribution {
    pub fn new(core: usize, support: Vec<SupportPoint>, mut interest: Vec<usize>, obfuscation: Obfuscation) -> Result<Self> {
        let first = support.first().ok_or(Error::Empty("support"))?;
        let shape = |g: &FeaturedGraph| (g.n(), g.d1(), g.d2());
        let (s1, s2) = (shape(&first.g1), shape(&first.g2));
        for point in &support {
            if shape(&point.g1) != s1 || shape(&point.g2) != s2 {
                return Err(Error::InvalidDimension("support graphs differ in shape"));
            }
            if !(point.p >= 0.0 && point.p.is_finite()) {
                return Err(Error::InvalidProbability { what: "support entry", value: point.p });
            }
        }
        let total = kahan_sum(support.iter().map(|s| s.p));
        if libm::fabs(total - 1.0) > MASS_TOL {
            return Err(Error::InvalidProbability { what: "support total", value: total });
        }
        if core > s1.0.min(s2.0) {
            return Err(Error::InvalidParameter(format!("core size {core} exceeds graph orders")));
        }
        interest.sort_unstable();
        interest.dedup();
        if interest.iter().any(|&v| v >= core) {
            return Err(Error::InvalidParameter("vertices of interest must be core vertices".into()));
        }
        if obfuscation.m() != s2.0 {
            return Err(Error::SizeMismatch { what: "obfuscation domain", expected: s2.0, found: obfuscation.m() });
        }
        Ok(Self { core, support, interest, obfuscation, enforced: Vec::new() })
    }

    pub fn n(&self) -> usize {
        self.support[0].g1.n()
    }

    pub fn m(&self) -> usize {
        self.support[0].g2.n()
    }

    pub fn core(&self) -> usize {
        self.core
    }

    pub fn support(&self) -> &[SupportPoint] {
        &self.support
    }

    pub fn interest(&self) -> &[usize] {
        &self.interest
    }

    pub fn obfuscation(&self) -> &Obfuscation {
        &self.obfuscation
    }

    /// Assumptions enforced when the table was enumerated.
    pub fn enforced(&self) -> &[Assumption] {
        &self.enforced
    }

    /// Positions of `o(V*)` in the order of `H`, sorted.
    pub fn interest_positions(&self) -> Vec<usize> {
        let mut p: Vec<usize> = self.interest.iter().map(|&v| self.obfuscation.position_of(v)).collect();
        p.sort_unstable();
        p
    }

    /// Same table with another obfuscation.
    pub fn with_obfuscation(mut self, o: Obfuscation) -> Result<Self> {
        if o.m() != self.m() {
            return Err(Error::SizeMismatch { what: "obfuscation domain", expected: self.m(), found: o.m() });
        }
        self.obfuscation = o;
        Ok(self)
    }

    /// Indices of support entries violating `a`.
    pub fn violations(&self, a: Assumption) -> Result<Vec<usize>> {
        let mut out = Vec::new();
        for (i, s) in self.support.iter().enumerate() {
            if !a.holds(&s.g1, &s.g2)? {
                out.push(i);
            }
        }
        Ok(out)
    }
}

/// The default obfuscation `v ↦ (v + 1) mod m`.
pub fn shift_obfuscation(m: usize) -> Obfuscation {
    let sigma = VertexPermutation::new((0..m).map(|v| (v + 1) % m).collect()).expect("cyclic shift");
    Obfuscation::from_permutation(&sigma)
}

/// Cartesian product of finite factors, skipping zero-probability outcomes.
fn product<T: Clone>(factors: &[Vec<(T, f64)>], cap: usize) -> Result<Vec<(Vec<T>, f64)>> {
    let factors: Vec<Vec<(T, f64)>> =
        factors.iter().map(|f| f.iter().filter(|o| o.1 > 0.0).cloned().collect()).collect();
    let size = factors.iter().fold(1usize, |acc, f| acc.saturating_mul(f.len()));
    if size > cap {
        return Err(Error::SupportCap { size, cap });
    }
    if size == 0 {
        return Ok(Vec::new());
    }
    let mut out = Vec::with_capacity(size);
    let mut idx = vec![0usize; factors.len()];
    loop {
        let values = factors.iter().zip(&idx).map(|(f, &i)| f[i].0.clone()).collect();
        let p = factors.iter().zip(&idx).map(|(f, &i)| f[i].1).product();
        out.push((values, p));
        let mut k = factors.len();
        loop {
            if k == 0 {
                return Ok(out);
            }
            k -= 1;
            idx[k] += 1;
            if idx[k] < factors[k].len() {
                break;
            }
            idx[k] = 0;
        }
    }
}

fn bernoulli(p: f64) -> Vec<(bool, f64)> {
    vec![(false, 1.0 - p), (true, p)]
}

type FeatureEntry = (Vec<Symbol>, Vec<Symbol>, f64);
type EdgeEntry = (Vec<Option<Symbol>>, Vec<Option<Symbol>>, f64);

fn enumerate_features(spec: &NominatablePairSpec) -> Result<Vec<FeatureEntry>> {
    match &spec.features {
        FeatureModel::Joint { table, .. } => Ok(table.iter().filter(|e| e.2 > 0.0).cloned().collect()),
        FeatureModel::Product { x, y, core_noise } => {
            let xf: Vec<Vec<(Vec<Symbol>, f64)>> = x.iter().map(|c| c.outcomes().to_vec()).collect();
            let mut out = Vec::new();
            for (xrows, px) in product(&xf, spec.cap)? {
                let yf: Vec<Vec<(Vec<Symbol>, f64)>> = y
                    .iter()
                    .enumerate()
                    .map(|(v, c)| match core_noise {
                        Some(eta) if v < spec.core => {
                            let mut merged: BTreeMap<Vec<Symbol>, f64> = BTreeMap::new();
                            *merged.entry(xrows[v].clone()).or_default() += 1.0 - eta;
                            for (row, p) in c.outcomes() {
                                *merged.entry(row.clone()).or_default() += eta * p;
                            }
                            merged.into_iter().collect()
                        }
                        _ => c.outcomes().to_vec(),
                    })
                    .collect();
                let xflat: Vec<Symbol> = xrows.concat();
                for (yrows, py) in product(&yf, spec.cap)? {
                    out.push((xflat.clone(), yrows.concat(), px * py));
                    if out.len() > spec.cap {
                        return Err(Error::SupportCap { size: out.len(), cap: spec.cap });
                    }
                }
            }
            Ok(out)
        }
    }
}

fn edge_rows(
    n: usize,
    bits: &[bool],
    edge_features: &Option<Categorical>,
    cap: usize,
) -> Result<Vec<(Vec<Option<Symbol>>, f64)>> {
    let d2 = edge_features.as_ref().map_or(1, |c| c.width());
    let present: Vec<usize> = (0..pair_count(n)).filter(|&e| bits[e]).collect();
    let factors: Vec<Vec<(Vec<Symbol>, f64)>> = match edge_features {
        Some(c) => present.iter().map(|_| c.outcomes().to_vec()).collect(),
        None => present.iter().map(|_| vec![(vec![Symbol(0)], 1.0)]).collect(),
    };
    Ok(product(&factors, cap)?
        .into_iter()
        .map(|(rows, p)| {
            let mut w = vec![None; pair_count(n) * d2];
            for (&e, row) in present.iter().zip(rows) {
                for (c, s) in row.into_iter().enumerate() {
                    w[e * d2 + c] = Some(s);
                }
            }
            (w, p)
        })
        .collect())
}

fn enumerate_edges(spec: &NominatablePairSpec, graph_asymmetric: &mut dyn FnMut(usize, &[bool]) -> Result<bool>) -> Result<Vec<EdgeEntry>> {
    let model = &spec.edges;
    let need_asym = spec.require.contains(&Assumption::GraphAsymmetry);
    let g1f: Vec<Vec<(bool, f64)>> = model.g1.iter().map(|&p| bernoulli(p)).collect();
    let mut out = Vec::new();
    for (b1, p1) in product(&g1f, spec.cap)? {
        if need_asym && !graph_asymmetric(spec.n, &b1)? {
            continue;
        }
        let g2f: Vec<Vec<(bool, f64)>> = (0..pair_count(spec.m))
            .map(|e| {
                let (u, v) = pair_at(spec.m, e);
                match model.core_flip {
                    Some(f) if v < spec.core => {
                        let b = b1[pair_index(spec.n, u, v)];
                        vec![(b, 1.0 - f), (!b, f)]
                    }
                    _ => bernoulli(model.g2[e]),
                }
            })
            .collect();
        for (b2, p2) in product(&g2f, spec.cap)? {
            if need_asym && !graph_asymmetric(spec.m, &b2)? {
                continue;
            }
            for (w1, q1) in edge_rows(spec.n, &b1, &model.edge_features, spec.cap)? {
                for (w2, q2) in edge_rows(spec.m, &b2, &model.edge_features, spec.cap)? {
                    out.push((w1.clone(), w2, p1 * p2 * q1 * q2));
                    if out.len() > spec.cap {
                        return Err(Error::SupportCap { size: out.len(), cap: spec.cap });
                    }
                }
            }
        }
    }
    Ok(out)
}

/// Expands a spec into its explicit probability table.
///
/// Feature configurations and graph configurations are enumerated
/// separately, so the row-distinctness and graph-asymmetry requirements are
/// applied before the two are combined; f-asymmetry is checked per pair.
pub fn enumerate_distribution(spec: &NominatablePairSpec) -> Result<EnumerableNominatableDistribution> {
    spec.validate()?;
    let (d1, d2) = spec.features.widths()?;
    let e = spec.edges.edge_features.as_ref().map_or(1, |c| c.width());
    let reject = spec.policy == ViolationPolicy::Reject;
    let mut considered = 0usize;

    let mut features = Vec::new();
    for (x, y, p) in enumerate_features(spec)? {
        if spec.require.contains(&Assumption::DistinctRows) {
            let gx = FeaturedGraph::edgeless(spec.n, d1, 1, x.clone())?;
            let gy = FeaturedGraph::edgeless(spec.m, d2, 1, y.clone())?;
            if !Assumption::DistinctRows.holds(&gx, &gy)? {
                if reject {
                    return Err(Error::AssumptionViolated { index: considered, assumption: Assumption::DistinctRows.name() });
                }
                considered += 1;
                continue;
            }
        }
        considered += 1;
        features.push((x, y, p));
    }

    let mut asym_memo: BTreeMap<Vec<bool>, bool> = BTreeMap::new();
    let mut graph_asymmetric = |n: usize, bits: &[bool]| -> Result<bool> {
        if let Some(&b) = asym_memo.get(bits) {
            return Ok(b);
        }
        let edges: Vec<(usize, usize)> = (0..bits.len()).filter(|&e| bits[e]).map(|e| pair_at(n, e)).collect();
        let b = is_f_asymmetric(&FeaturedGraph::plain(n, &edges)?)?;
        if !b && reject {
            return Err(Error::AssumptionViolated { index: 0, assumption: Assumption::GraphAsymmetry.name() });
        }
        asym_memo.insert(bits.to_vec(), b);
        Ok(b)
    };
    let edges = enumerate_edges(spec, &mut graph_asymmetric)?;

    let need_f_asym = spec.require.contains(&Assumption::FeatureAsymmetry);
    let mut f_memo: BTreeMap<FeaturedGraph, bool> = BTreeMap::new();
    let mut f_asymmetric = |g: &FeaturedGraph| -> Result<bool> {
        if g.has_distinct_vertex_rows() {
            return Ok(true);
        }
        if let Some(&b) = f_memo.get(g) {
            return Ok(b);
        }
        let b = is_f_asymmetric(g)?;
        f_memo.insert(g.clone(), b);
        Ok(b)
    };

    let mut support = Vec::new();
    for (index, (x, y, pf)) in features.iter().enumerate() {
        for (w1, w2, pe) in &edges {
            let p = pf * pe;
            if p == 0.0 {
                continue;
            }
            let g1 = FeaturedGraph::new(spec.n, d1, e, x.clone(), w1.clone())?;
            let g2 = FeaturedGraph::new(spec.m, d2, e, y.clone(), w2.clone())?;
            if need_f_asym && !(f_asymmetric(&g1)? && f_asymmetric(&g2)?) {
                if reject {
                    return Err(Error::AssumptionViolated { index, assumption: Assumption::FeatureAsymmetry.name() });
                }
                continue;
            }
            support.push(SupportPoint { g1, g2, p });
            if support.len() > spec.cap {
                return Err(Error::SupportCap { size: support.len(), cap: spec.cap });
            }
        }
    }

    let total = kahan_sum(support.iter().map(|s| s.p));
    if support.is_empty() || total <= 0.0 {
        return Err(Error::ZeroMass);
    }
    for s in &mut support {
        s.p /= total;
    }
    let obfuscation = spec.obfuscation.clone().unwrap_or_else(|| shift_obfuscation(spec.m));
    let mut dist = EnumerableNominatableDistribution::new(spec.core, support, spec.interest.clone(), obfuscation)?;
    dist.enforced = spec.require.clone();
    Ok(dist)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn single_point_support() {
        let spec = NominatablePairSpec::new(
            2,
            2,
            2,
            EdgeModel::independent(vec![1.0], vec![1.0]),
            FeatureModel::fixed(&[1, 2], &[1, 2]),
            vec![0],
        );
        let d = enumerate_distribution(&spec).unwrap();
        assert_eq!(d.support().len(), 1);
        assert_eq!(d.support()[0].p, 1.0);
        assert_eq!(d.interest_positions(), vec![1]);
    }

    #[test]
    fn product_of_fair_edges() {
        let spec = NominatablePairSpec::new(
            3,
            3,
            3,
            EdgeModel::independent(vec![0.5; 3], vec![0.5; 3]),
            FeatureModel::fixed(&[1, 2, 3], &[1, 2, 3]),
            vec![0],
        );
        let d = enumerate_distribution(&spec).unwrap();
        assert_eq!(d.support().len(), 64);
        assert!(d.support().iter().all(|s| (s.p - 1.0 / 64.0).abs() < 1e-15));
    }

    #[test]
    fn dropping_renormalizes_and_rejecting_fails() {
        let base = NominatablePairSpec::new(
            3,
            3,
            3,
            EdgeModel::independent(vec![0.5; 3], vec![0.5; 3]),
            FeatureModel::fixed(&[0, 0, 0], &[0, 0, 0]),
            vec![0],
        )
        .require(Assumption::GraphAsymmetry);
        // Every graph on three vertices is symmetric.
        assert_eq!(enumerate_distribution(&base), Err(Error::ZeroMass));
        let strict = base.policy(ViolationPolicy::Reject);
        assert!(matches!(enumerate_distribution(&strict), Err(Error::AssumptionViolated { .. })));
    }

    #[test]
    fn cap_is_enforced() {
        let spec = NominatablePairSpec::new(
            4,
            4,
            4,
            EdgeModel::independent(vec![0.5; 6], vec![0.5; 6]),
            FeatureModel::fixed(&[1, 2, 3, 4], &[1, 2, 3, 4]),
            vec![0],
        )
        .cap(1000);
        assert!(matches!(enumerate_distribution(&spec), Err(Error::SupportCap { .. })));
    }

    #[test]
    fn core_noise_merges_outcomes() {
        let spec = NominatablePairSpec::new(
            2,
            2,
            1,
            EdgeModel::empty(2, 2),
            FeatureModel::Product {
                x: vec![Categorical::point(vec![Symbol(0)]), Categorical::point(vec![Symbol(1)])],
                y: vec![Categorical::uniform_symbols(&[0, 1]), Categorical::point(vec![Symbol(1)])],
                core_noise: Some(0.5),
            },
            vec![0],
        );
        let d = enumerate_distribution(&spec).unwrap();
        assert_eq!(d.support().len(), 2);
        let p_copy = d.support().iter().find(|s| s.g2.vertex_row(0) == [Symbol(0)]).unwrap().p;
        assert!((p_copy - 0.75).abs() < 1e-15);
    }

    #[test]
    fn rejects_bad_specs() {
        let spec = NominatablePairSpec::new(
            2,
            2,
            1,
            EdgeModel::independent(vec![1.5], vec![0.0]),
            FeatureModel::fixed(&[0, 1], &[0, 1]),
            vec![0],
        );
        assert!(enumerate_distribution(&spec).is_err());
        let spec = NominatablePairSpec::new(
            2,
            2,
            1,
            EdgeModel::empty(2, 2),
            FeatureModel::fixed(&[0, 1], &[0, 1]),
            vec![1],
        );
        assert!(enumerate_distribution(&spec).is_err());
    }
}
