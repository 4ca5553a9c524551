//! Finite posets with the Alexandrov topology (open = upward closed).

use std::collections::BTreeSet;
use std::fmt;

use itertools::Itertools;
use serde::{Deserialize, Serialize};

use crate::error::{CuError, Result};

#[derive(Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct FinitePoset {
    labels: Vec<String>,
    /// `le[i][j]` iff point `i ≤ j`; reflexive.
    le: Vec<Vec<bool>>,
}

impl FinitePoset {
    /// Builds a poset from labels and `(i, j)` pairs meaning `i ≤ j`.
    ///
    /// Reflexive pairs are added automatically; transitivity and
    /// antisymmetry are required of the given relation.
    pub fn new(labels: Vec<String>, relations: &[(usize, usize)]) -> Result<Self> {
        let n = labels.len();
        if labels.iter().collect::<BTreeSet<_>>().len() != n {
            return Err(CuError::InvalidPoset("duplicate point label".into()));
        }
        let mut le = vec![vec![false; n]; n];
        for (i, row) in le.iter_mut().enumerate() {
            row[i] = true;
        }
        for &(i, j) in relations {
            if i >= n || j >= n {
                return Err(CuError::InvalidPoset(format!("relation ({i}, {j}) out of range")));
            }
            le[i][j] = true;
        }
        for i in 0..n {
            for j in 0..n {
                if i != j && le[i][j] && le[j][i] {
                    return Err(CuError::InvalidPoset(format!(
                        "relation not antisymmetric: {} and {} are mutually related",
                        labels[i], labels[j]
                    )));
                }
                for k in 0..n {
                    if le[i][j] && le[j][k] && !le[i][k] {
                        return Err(CuError::InvalidPoset(format!(
                            "relation not transitive: {}<={} and {}<={} but not {}<={}",
                            labels[i], labels[j], labels[j], labels[k], labels[i], labels[k]
                        )));
                    }
                }
            }
        }
        Ok(FinitePoset { labels, le })
    }

    /// Like [`FinitePoset::new`], but takes the transitive closure first.
    pub fn from_generators(labels: Vec<String>, relations: &[(usize, usize)]) -> Result<Self> {
        let n = labels.len();
        let mut le = vec![vec![false; n]; n];
        for (i, row) in le.iter_mut().enumerate() {
            row[i] = true;
        }
        for &(i, j) in relations {
            if i >= n || j >= n {
                return Err(CuError::InvalidPoset(format!("relation ({i}, {j}) out of range")));
            }
            le[i][j] = true;
        }
        for k in 0..n {
            for i in 0..n {
                for j in 0..n {
                    if le[i][k] && le[k][j] {
                        le[i][j] = true;
                    }
                }
            }
        }
        let pairs: Vec<_> = (0..n).cartesian_product(0..n).filter(|&(i, j)| le[i][j]).collect();
        FinitePoset::new(labels, &pairs)
    }

    pub fn point() -> Self {
        FinitePoset::antichain(1)
    }

    /// Antichain on points `a, b, c, …`.
    pub fn antichain(n: usize) -> Self {
        FinitePoset::new(default_labels(n), &[]).expect("antichain is a poset")
    }

    /// Chain `a < b < c < …`.
    pub fn chain(n: usize) -> Self {
        let rel: Vec<_> = (0..n).tuple_combinations().collect();
        FinitePoset::new(default_labels(n), &rel).expect("chain is a poset")
    }

    pub fn len(&self) -> usize {
        self.labels.len()
    }

    pub fn is_empty(&self) -> bool {
        self.labels.is_empty()
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    pub fn index_of(&self, label: &str) -> Option<usize> {
        self.labels.iter().position(|l| l == label)
    }

    pub fn le(&self, i: usize, j: usize) -> bool {
        self.le[i][j]
    }

    /// Strict relations `i < j`.
    pub fn strict_pairs(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        let n = self.len();
        (0..n)
            .cartesian_product(0..n)
            .filter(move |&(i, j)| i != j && self.le[i][j])
    }

    pub fn is_upward_closed(&self, set: &[bool]) -> bool {
        set.len() == self.len() && self.strict_pairs().all(|(i, j)| !set[i] || set[j])
    }

    pub fn is_minimal(&self, p: usize) -> bool {
        (0..self.len()).all(|q| q == p || !self.le[q][p])
    }

    /// All upward-closed subsets, as indicator vectors, in binary-counting order.
    pub fn open_sets(&self) -> Vec<Vec<bool>> {
        let n = self.len();
        (0u32..(1 << n))
            .map(|mask| (0..n).map(|i| mask & (1 << i) != 0).collect::<Vec<_>>())
            .filter(|s| self.is_upward_closed(s))
            .collect()
    }

    /// The sub-poset on the points where `keep` is true.
    pub fn restrict(&self, keep: &[bool]) -> FinitePoset {
        let idx: Vec<usize> = (0..self.len()).filter(|&i| keep[i]).collect();
        let labels = idx.iter().map(|&i| self.labels[i].clone()).collect();
        let rel: Vec<_> = idx
            .iter()
            .enumerate()
            .cartesian_product(idx.iter().enumerate())
            .filter(|((_, &i), (_, &j))| self.le[i][j])
            .map(|((a, _), (b, _))| (a, b))
            .collect();
        FinitePoset::new(labels, &rel).expect("restriction of a poset is a poset")
    }

    /// Structural relabelling-invariant key.
    fn canonical_key(&self) -> Vec<bool> {
        let n = self.len();
        (0..n)
            .permutations(n)
            .map(|perm| {
                (0..n)
                    .cartesian_product(0..n)
                    .map(|(i, j)| self.le[perm[i]][perm[j]])
                    .collect::<Vec<_>>()
            })
            .min()
            .unwrap_or_default()
    }

    /// Every poset on `n` points, up to isomorphism, with default labels.
    pub fn all_up_to_iso(n: usize) -> Vec<FinitePoset> {
        let pairs: Vec<(usize, usize)> = (0..n).cartesian_product(0..n).filter(|(i, j)| i != j).collect();
        let mut seen = BTreeSet::new();
        let mut out = Vec::new();
        for mask in 0u64..(1 << pairs.len()) {
            let rel: Vec<_> = pairs
                .iter()
                .enumerate()
                .filter(|(b, _)| mask & (1 << b) != 0)
                .map(|(_, &p)| p)
                .collect();
            if let Ok(p) = FinitePoset::new(default_labels(n), &rel) {
                if seen.insert(p.canonical_key()) {
                    out.push(p);
                }
            }
        }
        // fewest relations first: antichain leads
        out.sort_by_key(|p| p.strict_pairs().count());
        out
    }

    /// Short description such as `antichain(2)`, `chain(3)` or the relation list.
    pub fn describe(&self) -> String {
        let n = self.len();
        let strict = self.strict_pairs().count();
        if strict == 0 {
            return if n == 1 {
                "point".into()
            } else {
                format!("antichain({n})")
            };
        }
        if strict == n * (n - 1) / 2 && *self == FinitePoset::chain(n) {
            return format!("chain({n})");
        }
        self.to_string()
    }
}

fn default_labels(n: usize) -> Vec<String> {
    (0..n)
        .map(|i| {
            if i < 26 {
                ((b'a' + i as u8) as char).to_string()
            } else {
                format!("p{i}")
            }
        })
        .collect()
}

impl fmt::Display for FinitePoset {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let rel = self
            .strict_pairs()
            .map(|(i, j)| format!("{}<={}", self.labels[i], self.labels[j]))
            .join(",");
        write!(f, "poset[{}; {}]", self.labels.join(","), rel)
    }
}

impl fmt::Debug for FinitePoset {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn counts_up_to_iso() {
        assert_eq!(FinitePoset::all_up_to_iso(1).len(), 1);
        assert_eq!(FinitePoset::all_up_to_iso(2).len(), 2);
        assert_eq!(FinitePoset::all_up_to_iso(3).len(), 5);
        assert_eq!(FinitePoset::all_up_to_iso(4).len(), 16);
    }

    #[test]
    fn rejects_non_transitive() {
        let labels = vec!["a".to_string(), "b".into(), "c".into()];
        let err = FinitePoset::new(labels.clone(), &[(0, 1), (1, 2)]).unwrap_err();
        assert!(err.to_string().contains("not transitive"));
        assert!(FinitePoset::from_generators(labels, &[(0, 1), (1, 2)]).is_ok());
    }

    #[test]
    fn rejects_cycles() {
        let labels = vec!["a".to_string(), "b".into()];
        assert!(FinitePoset::new(labels, &[(0, 1), (1, 0)]).is_err());
    }

    #[test]
    fn open_sets_of_chain() {
        // chain a<b: {}, {b}, {a,b}
        assert_eq!(FinitePoset::chain(2).open_sets().len(), 3);
        assert_eq!(FinitePoset::antichain(2).open_sets().len(), 4);
    }

    #[test]
    fn restriction_keeps_order() {
        let c = FinitePoset::chain(3);
        let r = c.restrict(&[true, false, true]);
        assert!(r.le(0, 1));
        assert_eq!(r.labels(), &["a".to_string(), "c".to_string()]);
    }
}
