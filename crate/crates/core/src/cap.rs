//! Finite enumeration windows ("caps") and precomputed relation tables.

use std::collections::HashMap;

use itertools::Itertools;
use serde::{Deserialize, Serialize};

use crate::error::{CuError, Result};
use crate::model::{CuModel, Element, Values};
use crate::scalar::Scalar;

/// `{x : x ≤ bound}` restricted to grid values: compact ranks `0..=ceiling`,
/// soft rationals with denominator at most `denominator` and value at most
/// `ceiling`, and `∞`. A missing bound means "no bound" (finite tables).
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Cap {
    pub bound: Option<Element>,
    pub ceiling: u32,
    pub denominator: u32,
}

pub const DEFAULT_DENOMINATOR: u32 = 4;

impl Cap {
    pub fn new(model: &CuModel, bound: Element, ceiling: u32, denominator: u32) -> Result<Cap> {
        model.check(&bound)?;
        if denominator == 0 {
            return Err(CuError::Precondition("cap denominator must be positive".into()));
        }
        Ok(Cap {
            bound: Some(bound),
            ceiling,
            denominator,
        })
    }

    /// The cap below the largest element of the model (all grid elements).
    pub fn full(model: &CuModel, ceiling: u32) -> Cap {
        Cap::with_denominator(model, ceiling, DEFAULT_DENOMINATOR)
    }

    pub fn with_denominator(model: &CuModel, ceiling: u32, denominator: u32) -> Cap {
        Cap {
            bound: model.top(),
            ceiling,
            denominator: denominator.max(1),
        }
    }

    pub fn describe(&self, model: &CuModel) -> String {
        let b = self
            .bound
            .as_ref()
            .map(|b| model.fmt_element(b))
            .unwrap_or_else(|| "none".into());
        format!("bound={b}, ceiling={}, denominator={}", self.ceiling, self.denominator)
    }

    /// Lists the cap in lexicographic order (points or components in order,
    /// scalar grid values ordered by rank, compact before soft).
    pub fn enumerate(&self, model: &CuModel) -> Vec<Element> {
        enumerate_below(model, self.bound.as_ref(), self.ceiling, self.denominator)
    }
}

fn enumerate_below(model: &CuModel, bound: Option<&Element>, ceiling: u32, den: u32) -> Vec<Element> {
    match model {
        CuModel::Lsc(m) => {
            let grid = m.kind.grid(ceiling, den);
            let per_point: Vec<Vec<Scalar>> = (0..m.poset.len())
                .map(|p| {
                    grid.iter()
                        .copied()
                        .filter(|v| bound.is_none_or(|b| v.le(&b.as_values()[p])))
                        .collect()
                })
                .collect();
            let mut out = Vec::new();
            let mut cur = Values::new();
            lsc_rec(m, &per_point, &mut cur, &mut out);
            out
        }
        CuModel::Product(ms) => {
            let comps: Vec<Vec<Element>> = ms
                .iter()
                .enumerate()
                .map(|(i, m)| {
                    let b = bound.map(|b| match b {
                        Element::Tuple(t) => &t[i],
                        _ => unreachable!("product bound is a tuple"),
                    });
                    enumerate_below(m, b, ceiling, den)
                })
                .collect();
            comps
                .into_iter()
                .multi_cartesian_product()
                .map(Element::Tuple)
                .collect()
        }
        CuModel::Quotient { base, .. } => {
            let mut seen = HashMap::new();
            let mut out = Vec::new();
            for e in enumerate_below(base, bound, ceiling, den) {
                let c = model.canonical(&e);
                if seen.insert(c.clone(), ()).is_none() {
                    out.push(c);
                }
            }
            out
        }
        CuModel::Table(t) => (0..t.len())
            .map(|i| Element::Index(i as u32))
            .filter(|e| bound.is_none_or(|b| model.le(e, b)))
            .collect(),
    }
}

fn lsc_rec(m: &crate::model::LscModel, per_point: &[Vec<Scalar>], cur: &mut Values, out: &mut Vec<Element>) {
    let p = cur.len();
    if p == per_point.len() {
        out.push(Element::Values(cur.clone()));
        return;
    }
    for v in &per_point[p] {
        let ok = (0..p).all(|q| (!m.poset.le(q, p) || cur[q].le(v)) && (!m.poset.le(p, q) || v.le(&cur[q])));
        if ok {
            cur.push(*v);
            lsc_rec(m, per_point, cur, out);
            cur.pop();
        }
    }
}

/// Dense square bit matrix.
#[derive(Clone, Debug)]
pub struct BitMatrix {
    n: usize,
    words: usize,
    bits: Vec<u64>,
}

impl BitMatrix {
    pub fn new(n: usize) -> Self {
        let words = n.div_ceil(64).max(1);
        BitMatrix {
            n,
            words,
            bits: vec![0; n * words],
        }
    }

    pub fn build(n: usize, f: impl Fn(usize, usize) -> bool) -> Self {
        let mut m = BitMatrix::new(n);
        for i in 0..n {
            for j in 0..n {
                if f(i, j) {
                    m.set(i, j);
                }
            }
        }
        m
    }

    #[inline]
    pub fn get(&self, i: usize, j: usize) -> bool {
        self.bits[i * self.words + j / 64] >> (j % 64) & 1 == 1
    }

    #[inline]
    pub fn set(&mut self, i: usize, j: usize) {
        self.bits[i * self.words + j / 64] |= 1 << (j % 64);
    }

    pub fn row(&self, i: usize) -> &[u64] {
        &self.bits[i * self.words..(i + 1) * self.words]
    }

    pub fn len(&self) -> usize {
        self.n
    }

    pub fn is_empty(&self) -> bool {
        self.n == 0
    }
}

/// A cap's elements together with their order and way-below tables, and
/// optionally the table of pairwise sums.
pub struct CapIndex<'m> {
    pub model: &'m CuModel,
    pub cap: Cap,
    /// Cap elements first (indices `0..n`), then any interned extras.
    elems: Vec<Element>,
    n: usize,
    lookup: HashMap<Element, u32>,
    le: BitMatrix,
    wb: BitMatrix,
    sums: Vec<u32>,
    max_wb_below: Vec<Vec<u32>>,
}

impl<'m> CapIndex<'m> {
    /// Enumerates the cap and builds the order tables on the cap elements.
    pub fn new(model: &'m CuModel, cap: &Cap) -> Self {
        Self::build(model, cap, false)
    }

    /// Like [`CapIndex::new`], additionally interning all pairwise sums of cap
    /// elements and extending the order tables to them.
    pub fn with_sums(model: &'m CuModel, cap: &Cap) -> Self {
        Self::build(model, cap, true)
    }

    fn build(model: &'m CuModel, cap: &Cap, sums: bool) -> Self {
        let mut elems = cap.enumerate(model);
        let n = elems.len();
        let mut lookup: HashMap<Element, u32> = elems.iter().enumerate().map(|(i, e)| (e.clone(), i as u32)).collect();
        let mut sum_idx = Vec::new();
        if sums {
            sum_idx.reserve(n * n);
            for i in 0..n {
                for j in 0..n {
                    let k = if j < i {
                        sum_idx[j * n + i]
                    } else {
                        let s = model.plus(&elems[i], &elems[j]);
                        match lookup.get(&s) {
                            Some(&k) => k,
                            None => {
                                let k = elems.len() as u32;
                                lookup.insert(s.clone(), k);
                                elems.push(s);
                                k
                            }
                        }
                    };
                    sum_idx.push(k);
                }
            }
        }
        let u = elems.len();
        let le = BitMatrix::build(u, |i, j| model.le(&elems[i], &elems[j]));
        let wb = BitMatrix::build(u, |i, j| le.get(i, j) && model.wb(&elems[i], &elems[j]));
        let mut idx = CapIndex {
            model,
            cap: cap.clone(),
            elems,
            n,
            lookup,
            le,
            wb,
            sums: sum_idx,
            max_wb_below: Vec::new(),
        };
        idx.max_wb_below = (0..n)
            .map(|x| {
                let below: Vec<usize> = (0..n).filter(|&y| idx.wb.get(y, x)).collect();
                idx.maximal(&below).into_iter().map(|i| i as u32).collect()
            })
            .collect();
        idx
    }

    /// Number of cap elements.
    pub fn len(&self) -> usize {
        self.n
    }

    pub fn is_empty(&self) -> bool {
        self.n == 0
    }

    pub fn elem(&self, i: usize) -> &Element {
        &self.elems[i]
    }

    pub fn cap_elements(&self) -> &[Element] {
        &self.elems[..self.n]
    }

    pub fn index_of(&self, e: &Element) -> Option<usize> {
        self.lookup.get(e).map(|&i| i as usize)
    }

    /// Cap index of `e`, if `e` lies in the cap proper.
    pub fn cap_index_of(&self, e: &Element) -> Option<usize> {
        self.index_of(e).filter(|&i| i < self.n)
    }

    #[inline]
    pub fn le(&self, i: usize, j: usize) -> bool {
        self.le.get(i, j)
    }

    #[inline]
    pub fn wb(&self, i: usize, j: usize) -> bool {
        self.wb.get(i, j)
    }

    pub fn has_sums(&self) -> bool {
        !self.sums.is_empty() || self.n == 0
    }

    /// Index (in the interned universe) of `elem(i) + elem(j)` for cap indices.
    #[inline]
    pub fn sum(&self, i: usize, j: usize) -> usize {
        self.sums[i * self.n + j] as usize
    }

    /// Maximal cap elements `x'` with `x' ≪ x`.
    pub fn max_wb_below(&self, x: usize) -> &[u32] {
        &self.max_wb_below[x]
    }

    /// Maximal members of a set of indices.
    pub fn maximal(&self, set: &[usize]) -> Vec<usize> {
        set.iter()
            .copied()
            .filter(|&a| !set.iter().any(|&b| b != a && self.le(a, b)))
            .collect()
    }

    /// Whether a failed witness search below cap element `i` is conclusive.
    pub fn complete_below(&self, i: usize) -> bool {
        self.model.complete_below(&self.elems[i], self.cap.ceiling)
    }

    /// Cap elements below `i` in enumeration order.
    pub fn below(&self, i: usize) -> impl Iterator<Item = usize> + '_ {
        (0..self.n).filter(move |&j| self.le(j, i))
    }

    pub fn fmt(&self, i: usize) -> String {
        self.model.fmt_element(&self.elems[i])
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::poset::FinitePoset;
    use crate::scalar::ScalarKind;

    #[test]
    fn nbar_caps() {
        let m = CuModel::scalar(ScalarKind::NBar);
        let cap = Cap::full(&m, 4);
        assert_eq!(cap.enumerate(&m).len(), 6);
        let m2 = CuModel::lsc(FinitePoset::chain(2), ScalarKind::NBar);
        // monotone pairs over {0..4, inf}: 6*7/2
        assert_eq!(Cap::full(&m2, 4).enumerate(&m2).len(), 21);
    }

    #[test]
    fn bounded_cap_is_downward_closed() {
        let m = CuModel::lsc(FinitePoset::antichain(2), ScalarKind::NBar);
        let b = m.parse_element("(2,1)").unwrap();
        let cap = Cap::new(&m, b, 4, 1).unwrap();
        assert_eq!(cap.enumerate(&m).len(), 6);
    }

    #[test]
    fn index_tables() {
        let m = CuModel::scalar(ScalarKind::NBar);
        let idx = CapIndex::with_sums(&m, &Cap::full(&m, 3));
        assert_eq!(idx.len(), 5);
        let inf = idx.len() - 1;
        assert!(!idx.wb(inf, inf));
        assert!(idx.wb(2, 2));
        // maximal x' << inf within the cap is 3
        assert_eq!(idx.max_wb_below(inf), &[3]);
        let s = idx.sum(2, 3);
        assert_eq!(m.fmt_element(idx.elem(s)), "5");
    }
}
