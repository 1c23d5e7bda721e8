use alloc::vec::Vec;

use crate::error::{Error, Result};

/// A bijection on `0..n`; `apply(v)` is the image of `v`.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct VertexPermutation {
    map: Vec<usize>,
}

impl VertexPermutation {
    pub fn new(map: Vec<usize>) -> Result<Self> {
        let n = map.len();
        let mut seen = alloc::vec![false; n];
        for &t in &map {
            if t >= n || seen[t] {
                return Err(Error::NotABijection(n));
            }
            seen[t] = true;
        }
        Ok(Self { map })
    }

    pub(crate) fn from_vec_unchecked(map: Vec<usize>) -> Self {
        Self { map }
    }

    pub fn identity(n: usize) -> Self {
        Self { map: (0..n).collect() }
    }

    /// Swaps `a` and `b`.
    pub fn transposition(n: usize, a: usize, b: usize) -> Self {
        let mut map: Vec<usize> = (0..n).collect();
        map.swap(a, b);
        Self { map }
    }

    pub fn len(&self) -> usize {
        self.map.len()
    }

    pub fn is_empty(&self) -> bool {
        self.map.is_empty()
    }

    pub fn apply(&self, v: usize) -> usize {
        self.map[v]
    }

    pub fn as_slice(&self) -> &[usize] {
        &self.map
    }

    pub fn is_identity(&self) -> bool {
        self.map.iter().enumerate().all(|(i, &t)| i == t)
    }

    pub fn inverse(&self) -> Self {
        let mut inv = alloc::vec![0; self.map.len()];
        for (i, &t) in self.map.iter().enumerate() {
            inv[t] = i;
        }
        Self { map: inv }
    }

    /// `self ∘ other`: first `other`, then `self`.
    pub fn compose(&self, other: &Self) -> Self {
        assert_eq!(self.len(), other.len(), "composing permutations of different orders");
        Self { map: other.map.iter().map(|&t| self.map[t]).collect() }
    }

    /// All permutations of `0..n` in lexicographic order of their maps.
    pub fn all(n: usize) -> Vec<Self> {
        let mut out = Vec::new();
        let mut cur: Vec<usize> = (0..n).collect();
        loop {
            out.push(Self { map: cur.clone() });
            if !next_permutation(&mut cur) {
                return out;
            }
        }
    }
}

/// Advances `v` to the next lexicographic permutation; false after the last.
pub(crate) fn next_permutation(v: &mut [usize]) -> bool {
    if v.len() < 2 {
        return false;
    }
    let mut i = v.len() - 1;
    while i > 0 && v[i - 1] >= v[i] {
        i -= 1;
    }
    if i == 0 {
        return false;
    }
    let mut j = v.len() - 1;
    while v[j] <= v[i - 1] {
        j -= 1;
    }
    v.swap(i - 1, j);
    v[i..].reverse();
    true
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rejects_non_bijections() {
        assert!(VertexPermutation::new(alloc::vec![0, 0]).is_err());
        assert!(VertexPermutation::new(alloc::vec![0, 2]).is_err());
        assert!(VertexPermutation::new(alloc::vec![1, 0]).is_ok());
    }

    #[test]
    fn all_counts_and_group_laws() {
        let perms = VertexPermutation::all(4);
        assert_eq!(perms.len(), 24);
        for p in &perms {
            assert!(p.compose(&p.inverse()).is_identity());
            assert!(p.inverse().compose(p).is_identity());
        }
        let a = &perms[5];
        let b = &perms[17];
        for v in 0..4 {
            assert_eq!(a.compose(b).apply(v), a.apply(b.apply(v)));
        }
    }
}
