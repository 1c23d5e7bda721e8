//! Feature-preserving isomorphism search: colour refinement followed by
//! backtracking over colour-compatible assignments.

use alloc::vec;
use alloc::vec::Vec;

use super::permutation::next_permutation;
use super::{FeaturedGraph, VertexPermutation, View};
use crate::error::{Error, Result};

/// Largest order accepted by the exhaustive symmetry operations.
pub const SEARCH_LIMIT: usize = 10;

fn guard(n: usize) -> Result<()> {
    if n > SEARCH_LIMIT {
        Err(Error::SearchLimit { order: n, limit: SEARCH_LIMIT })
    } else {
        Ok(())
    }
}

fn rank_keys(keys: &[Vec<u64>]) -> Vec<u32> {
    let mut sorted: Vec<&Vec<u64>> = keys.iter().collect();
    sorted.sort();
    sorted.dedup();
    keys.iter()
        .map(|k| sorted.binary_search(&k).expect("key present") as u32)
        .collect()
}

fn distinct(colors: &[u32]) -> usize {
    let mut c = colors.to_vec();
    c.sort_unstable();
    c.dedup();
    c.len()
}

/// Stable colouring by iterated neighbourhood signatures. Colour ids are
/// ranks of label-free signatures, so isomorphic graphs get matching colours.
pub(crate) fn refine(g: &FeaturedGraph) -> Vec<u32> {
    let n = g.n();
    let keys: Vec<Vec<u64>> = (0..n)
        .map(|v| g.vertex_row(v).iter().map(|s| s.0 as u64).collect())
        .collect();
    let mut colors = rank_keys(&keys);
    let mut classes = distinct(&colors);
    loop {
        let keys: Vec<Vec<u64>> = (0..n)
            .map(|v| {
                let mut nb: Vec<Vec<u64>> = (0..n)
                    .filter(|&u| g.has_edge(u, v))
                    .map(|u| {
                        let mut k = vec![colors[u] as u64];
                        k.extend(g.edge_row(u, v).iter().map(|c| c.map_or(0, |s| s.0 as u64 + 1)));
                        k
                    })
                    .collect();
                nb.sort_unstable();
                let mut k = vec![colors[v] as u64, nb.len() as u64];
                nb.into_iter().for_each(|e| k.extend(e));
                k
            })
            .collect();
        let next = rank_keys(&keys);
        let count = distinct(&next);
        if count == classes {
            return colors;
        }
        colors = next;
        classes = count;
    }
}

struct Matcher<'a> {
    g: &'a FeaturedGraph,
    h: &'a FeaturedGraph,
    cg: Vec<u32>,
    ch: Vec<u32>,
    order: Vec<usize>,
    map: Vec<usize>,
    used: Vec<bool>,
    forced: Option<(usize, usize)>,
}

impl<'a> Matcher<'a> {
    fn new(g: &'a FeaturedGraph, h: &'a FeaturedGraph, forced: Option<(usize, usize)>) -> Option<Self> {
        let cg = refine(g);
        let ch = if core::ptr::eq(g, h) { cg.clone() } else { refine(h) };
        let mut sg = cg.clone();
        let mut sh = ch.clone();
        sg.sort_unstable();
        sh.sort_unstable();
        if sg != sh {
            return None;
        }
        if let Some((u, w)) = forced {
            if cg[u] != ch[w] {
                return None;
            }
        }
        let n = g.n();
        let cell_size = |v: usize| cg.iter().filter(|&&c| c == cg[v]).count();
        let mut order = Vec::with_capacity(n);
        let mut chosen = vec![false; n];
        if let Some((u, _)) = forced {
            order.push(u);
            chosen[u] = true;
        }
        while order.len() < n {
            let next = (0..n)
                .filter(|&v| !chosen[v])
                .min_by_key(|&v| {
                    let links = order.iter().filter(|&&u| g.has_edge(u, v)).count();
                    (usize::MAX - links, cell_size(v), v)
                })
                .expect("unchosen vertex");
            chosen[next] = true;
            order.push(next);
        }
        Some(Self { g, h, cg, ch, order, map: vec![usize::MAX; n], used: vec![false; n], forced })
    }

    fn feasible(&self, depth: usize, v: usize, w: usize) -> bool {
        if self.used[w] || self.cg[v] != self.ch[w] || self.g.vertex_row(v) != self.h.vertex_row(w) {
            return false;
        }
        self.order[..depth]
            .iter()
            .all(|&u| self.g.edge_row(u, v) == self.h.edge_row(self.map[u], w))
    }

    /// Visits every isomorphism; `visit` returns false to stop the search.
    fn run(&mut self, depth: usize, visit: &mut dyn FnMut(&[usize]) -> bool) -> bool {
        if depth == self.order.len() {
            return visit(&self.map);
        }
        let v = self.order[depth];
        let candidates: Vec<usize> = match self.forced {
            Some((u, w)) if u == v => vec![w],
            _ => (0..self.h.n()).collect(),
        };
        for w in candidates {
            if !self.feasible(depth, v, w) {
                continue;
            }
            self.map[v] = w;
            self.used[w] = true;
            let go_on = self.run(depth + 1, visit);
            self.used[w] = false;
            self.map[v] = usize::MAX;
            if !go_on {
                return false;
            }
        }
        true
    }
}

fn check_shapes(g1: &FeaturedGraph, g2: &FeaturedGraph) -> Result<()> {
    for (what, a, b) in [
        ("graph order", g1.n(), g2.n()),
        ("vertex feature width", g1.d1(), g2.d1()),
        ("edge feature width", g1.d2(), g2.d2()),
    ] {
        if a != b {
            return Err(Error::SizeMismatch { what, expected: a, found: b });
        }
    }
    Ok(())
}

/// Every `sigma` with `apply_permutation(g1, sigma) == g2`.
pub fn all_f_isomorphisms(g1: &FeaturedGraph, g2: &FeaturedGraph) -> Result<Vec<VertexPermutation>> {
    check_shapes(g1, g2)?;
    guard(g1.n())?;
    let mut out = Vec::new();
    if let Some(mut m) = Matcher::new(g1, g2, None) {
        m.run(0, &mut |map| {
            out.push(VertexPermutation::from_vec_unchecked(map.to_vec()));
            true
        });
    }
    out.sort();
    Ok(out)
}

/// Some `sigma` with `apply_permutation(g1, sigma) == g2`, if one exists.
pub fn f_isomorphism(g1: &FeaturedGraph, g2: &FeaturedGraph) -> Result<Option<VertexPermutation>> {
    check_shapes(g1, g2)?;
    guard(g1.n())?;
    Ok(first_match(g1, g2, None))
}

fn first_match(g1: &FeaturedGraph, g2: &FeaturedGraph, forced: Option<(usize, usize)>) -> Option<VertexPermutation> {
    let mut found = None;
    if let Some(mut m) = Matcher::new(g1, g2, forced) {
        m.run(0, &mut |map| {
            found = Some(VertexPermutation::from_vec_unchecked(map.to_vec()));
            false
        });
    }
    found
}

/// The f-automorphism group of `g`, sorted, identity first.
pub fn f_automorphisms(g: &FeaturedGraph) -> Result<Vec<VertexPermutation>> {
    all_f_isomorphisms(g, g)
}

/// True when the identity is the only f-automorphism of `g`.
pub fn is_f_asymmetric(g: &FeaturedGraph) -> Result<bool> {
    guard(g.n())?;
    let colors = refine(g);
    if distinct(&colors) == g.n() {
        return Ok(true);
    }
    let mut count = 0;
    if let Some(mut m) = Matcher::new(g, g, None) {
        m.run(0, &mut |_| {
            count += 1;
            count < 2
        });
    }
    Ok(count == 1)
}

/// Orbit of `u` under the symmetry group selected by `view`.
pub fn orbit(u: usize, g: &FeaturedGraph, view: View) -> Result<Vec<usize>> {
    if u >= g.n() {
        return Err(Error::VertexOutOfRange { vertex: u, order: g.n() });
    }
    guard(g.n())?;
    let p = view.project(g);
    Ok((0..p.n())
        .filter(|&w| w == u || first_match(&p, &p, Some((u, w))).is_some())
        .collect())
}

/// The orbit partition of `0..n` under the symmetry group selected by `view`,
/// each orbit sorted and orbits ordered by their smallest vertex.
pub fn orbits(g: &FeaturedGraph, view: View) -> Result<Vec<Vec<usize>>> {
    guard(g.n())?;
    let p = view.project(g);
    let n = p.n();
    let colors = refine(&p);
    let mut assigned = vec![false; n];
    let mut out = Vec::new();
    for u in 0..n {
        if assigned[u] {
            continue;
        }
        let mut cell = vec![u];
        assigned[u] = true;
        for w in u + 1..n {
            if !assigned[w] && colors[w] == colors[u] && first_match(&p, &p, Some((u, w))).is_some() {
                assigned[w] = true;
                cell.push(w);
            }
        }
        out.push(cell);
    }
    Ok(out)
}

/// A canonical relabeling: returns `(canon, pi)` with
/// `canon = apply_permutation(g, pi)` and `canon` equal for all graphs in one
/// f-isomorphism class.
pub fn canonical_labeling(g: &FeaturedGraph) -> Result<(FeaturedGraph, VertexPermutation)> {
    guard(g.n())?;
    let colors = refine(g);
    let n = g.n();
    let ncolors = colors.iter().map(|&c| c as usize + 1).max().unwrap_or(0);
    let mut cells: Vec<Vec<usize>> = vec![Vec::new(); ncolors];
    for v in 0..n {
        cells[colors[v] as usize].push(v);
    }
    let mut offsets = Vec::with_capacity(ncolors);
    let mut acc = 0;
    for c in &cells {
        offsets.push(acc);
        acc += c.len();
    }
    // Odometer over the product of per-cell orderings.
    let mut orders: Vec<Vec<usize>> = cells.iter().map(|c| (0..c.len()).collect()).collect();
    let mut image = vec![0; n];
    let mut best: Option<(FeaturedGraph, Vec<usize>)> = None;
    loop {
        for (ci, cell) in cells.iter().enumerate() {
            for (slot, &k) in orders[ci].iter().enumerate() {
                image[cell[k]] = offsets[ci] + slot;
            }
        }
        let candidate = g.relabel(&image);
        if best.as_ref().is_none_or(|(b, _)| candidate < *b) {
            best = Some((candidate, image.clone()));
        }
        let mut ci = ncolors;
        loop {
            if ci == 0 {
                let (canon, pi) = best.expect("at least one labeling");
                return Ok((canon, VertexPermutation::from_vec_unchecked(pi)));
            }
            ci -= 1;
            if next_permutation(&mut orders[ci]) {
                break;
            }
            orders[ci].sort_unstable();
        }
    }
}
