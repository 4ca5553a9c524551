//! Concrete Cu-semigroups and their elements.
//!
//! Four model variants are supported:
//! * `Lsc(P, V)`: monotone functions from a finite poset into a scalar kind,
//!   ordered and added pointwise;
//! * finite products;
//! * quotients `S/I` by an ideal `I = {x : x ≤ ω_I}`, stored through the
//!   canonical representatives `x + ω_I`;
//! * finite table-presented monoids (all chains stabilize, so `≪` is `≤`).

use std::fmt;

use itertools::Itertools;
use num_rational::Rational64;
use num_traits::{ToPrimitive, Zero};
use serde::{Deserialize, Serialize};
use smallvec::SmallVec;

use crate::error::{CuError, Result};
use crate::ext::Ext;
use crate::poset::FinitePoset;
use crate::scalar::{Scalar, ScalarKind};

pub type Values = SmallVec<[Scalar; 4]>;

/// A member of some [`CuModel`]. Elements carry no model tag; operations
/// check the shape against the model they are applied to.
#[derive(Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(untagged)]
pub enum Element {
    Values(Values),
    Tuple(Vec<Element>),
    Index(u32),
}

impl Element {
    pub fn values(vals: impl IntoIterator<Item = Scalar>) -> Element {
        Element::Values(vals.into_iter().collect())
    }

    pub fn scalar(v: Scalar) -> Element {
        Element::values([v])
    }

    pub fn as_values(&self) -> &[Scalar] {
        match self {
            Element::Values(v) => v,
            _ => panic!("element is not a value table"),
        }
    }

    pub fn as_tuple(&self) -> &[Element] {
        match self {
            Element::Tuple(v) => v,
            _ => panic!("element is not a tuple"),
        }
    }

    pub fn as_index(&self) -> usize {
        match self {
            Element::Index(i) => *i as usize,
            _ => panic!("element is not a table index"),
        }
    }
}

impl fmt::Debug for Element {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Element::Values(v) if v.len() == 1 => write!(f, "{}", v[0]),
            Element::Values(v) => write!(f, "({})", v.iter().join(",")),
            Element::Tuple(t) => write!(f, "<{}>", t.iter().map(|e| format!("{e:?}")).join("; ")),
            Element::Index(i) => write!(f, "#{i}"),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LscModel {
    pub poset: FinitePoset,
    pub kind: ScalarKind,
}

/// A finite commutative monoid with a compatible partial order.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TableModel {
    names: Vec<String>,
    add: Vec<Vec<u32>>,
    le: Vec<Vec<bool>>,
}

impl TableModel {
    /// Validates a table presentation. Element 0 must be the neutral element;
    /// `order` lists pairs `(i, j)` meaning `i ≤ j` and is closed reflexively
    /// and transitively.
    pub fn new(names: Vec<String>, add: Vec<Vec<u32>>, order: &[(usize, usize)]) -> Result<Self> {
        let n = names.len();
        let bad = |m: String| Err(CuError::InvalidTable(m));
        if n == 0 {
            return bad("a table model needs at least the zero element".into());
        }
        if names.iter().unique().count() != n {
            return bad("duplicate element name".into());
        }
        if add.len() != n || add.iter().any(|r| r.len() != n) {
            return bad(format!("addition table must be {n}x{n}"));
        }
        if add.iter().flatten().any(|&v| v as usize >= n) {
            return bad("addition table entry out of range".into());
        }
        let name = |i: usize| names[i].as_str();
        for i in 0..n {
            if add[0][i] as usize != i {
                return bad(format!(
                    "{} is not neutral: {}+{} != {}",
                    name(0),
                    name(0),
                    name(i),
                    name(i)
                ));
            }
            for j in 0..n {
                if add[i][j] != add[j][i] {
                    return bad(format!("addition not commutative at ({}, {})", name(i), name(j)));
                }
                for k in 0..n {
                    let l = add[add[i][j] as usize][k];
                    let r = add[i][add[j][k] as usize];
                    if l != r {
                        return bad(format!(
                            "addition not associative at ({}, {}, {})",
                            name(i),
                            name(j),
                            name(k)
                        ));
                    }
                }
            }
        }
        let mut le = vec![vec![false; n]; n];
        for (i, row) in le.iter_mut().enumerate() {
            row[i] = true;
        }
        for &(i, j) in order {
            if i >= n || j >= n {
                return bad("order pair out of range".into());
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
        for i in 0..n {
            if !le[0][i] {
                return bad(format!("zero is not least: {} is not below {}", name(0), name(i)));
            }
            for j in 0..n {
                if i != j && le[i][j] && le[j][i] {
                    return bad(format!("order not antisymmetric at ({}, {})", name(i), name(j)));
                }
                if le[i][j] {
                    for k in 0..n {
                        if !le[add[i][k] as usize][add[j][k] as usize] {
                            return bad(format!(
                                "addition not monotone: {}<={} but {}+{} is not below {}+{}",
                                name(i),
                                name(j),
                                name(i),
                                name(k),
                                name(j),
                                name(k)
                            ));
                        }
                    }
                }
            }
        }
        Ok(TableModel { names, add, le })
    }

    pub fn len(&self) -> usize {
        self.names.len()
    }

    pub fn is_empty(&self) -> bool {
        self.names.is_empty()
    }

    pub fn names(&self) -> &[String] {
        &self.names
    }

    pub fn sum(&self, i: usize, j: usize) -> usize {
        self.add[i][j] as usize
    }

    pub fn le(&self, i: usize, j: usize) -> bool {
        self.le[i][j]
    }

    /// The order as a list of strict pairs, for re-serialization.
    pub fn strict_order(&self) -> Vec<(usize, usize)> {
        (0..self.len())
            .cartesian_product(0..self.len())
            .filter(|&(i, j)| i != j && self.le[i][j])
            .collect()
    }

    pub fn add_table(&self) -> &[Vec<u32>] {
        &self.add
    }

    fn glb(&self, i: usize, j: usize) -> Option<usize> {
        let lower: Vec<usize> = (0..self.len()).filter(|&k| self.le[k][i] && self.le[k][j]).collect();
        lower.iter().copied().find(|&m| lower.iter().all(|&k| self.le[k][m]))
    }

    /// `∞·i`: the stable value of `i, 2i, 4i, …`.
    fn saturate(&self, i: usize) -> usize {
        let mut cur = i;
        loop {
            let next = self.sum(cur, cur);
            if next == cur {
                return cur;
            }
            cur = next;
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum CuModel {
    Lsc(LscModel),
    Product(Vec<CuModel>),
    Quotient { base: Box<CuModel>, omega: Element },
    Table(TableModel),
}

impl CuModel {
    pub fn lsc(poset: FinitePoset, kind: ScalarKind) -> CuModel {
        CuModel::Lsc(LscModel { poset, kind })
    }

    /// The one-point model of a scalar kind.
    pub fn scalar(kind: ScalarKind) -> CuModel {
        CuModel::lsc(FinitePoset::point(), kind)
    }

    pub fn describe(&self) -> String {
        match self {
            CuModel::Lsc(m) if m.poset.len() == 1 => m.kind.name().to_string(),
            CuModel::Lsc(m) => format!("lsc({}, {})", m.poset.describe(), m.kind.name()),
            CuModel::Product(ms) => format!("product({})", ms.iter().map(|m| m.describe()).join(", ")),
            CuModel::Quotient { base, omega } => {
                format!("quotient({}, omega={})", base.describe(), base.fmt_element(omega))
            }
            CuModel::Table(t) => format!("table({})", t.names.join(",")),
        }
    }

    pub fn zero(&self) -> Element {
        match self {
            CuModel::Lsc(m) => Element::Values(smallvec::smallvec![Scalar::ZERO; m.poset.len()]),
            CuModel::Product(ms) => Element::Tuple(ms.iter().map(|m| m.zero()).collect()),
            CuModel::Quotient { omega, .. } => omega.clone(),
            CuModel::Table(_) => Element::Index(0),
        }
    }

    /// The largest element, when one exists.
    pub fn top(&self) -> Option<Element> {
        match self {
            CuModel::Lsc(m) => Some(Element::Values(smallvec::smallvec![Scalar::INF; m.poset.len()])),
            CuModel::Product(ms) => ms
                .iter()
                .map(|m| m.top())
                .collect::<Option<Vec<_>>>()
                .map(Element::Tuple),
            CuModel::Quotient { base, .. } => base.top(),
            CuModel::Table(t) => (0..t.len())
                .find(|&i| (0..t.len()).all(|j| t.le(j, i)))
                .map(|i| Element::Index(i as u32)),
        }
    }

    pub fn contains(&self, x: &Element) -> bool {
        match (self, x) {
            (CuModel::Lsc(m), Element::Values(v)) => {
                v.len() == m.poset.len()
                    && v.iter().all(|s| m.kind.contains(s))
                    && m.poset.strict_pairs().all(|(i, j)| v[i].le(&v[j]))
            }
            (CuModel::Product(ms), Element::Tuple(t)) => {
                t.len() == ms.len() && ms.iter().zip(t).all(|(m, e)| m.contains(e))
            }
            (CuModel::Quotient { base, omega }, _) => base.contains(x) && base.plus(x, omega) == *x,
            (CuModel::Table(t), Element::Index(i)) => (*i as usize) < t.len(),
            _ => false,
        }
    }

    pub fn check(&self, x: &Element) -> Result<()> {
        if self.contains(x) {
            Ok(())
        } else {
            Err(CuError::ModelMismatch(format!(
                "{x:?} is not an element of {}",
                self.describe()
            )))
        }
    }

    /// Maps a base element to its canonical representative; identity outside quotients.
    pub fn canonical(&self, x: &Element) -> Element {
        match self {
            CuModel::Quotient { base, omega } => base.plus(&base.canonical(x), omega),
            _ => x.clone(),
        }
    }

    // ---- unchecked operations (elements assumed to belong to the model) ----

    pub fn le(&self, x: &Element, y: &Element) -> bool {
        match self {
            CuModel::Lsc(_) => x.as_values().iter().zip(y.as_values()).all(|(a, b)| a.le(b)),
            CuModel::Product(ms) => ms
                .iter()
                .zip(x.as_tuple().iter().zip(y.as_tuple()))
                .all(|(m, (a, b))| m.le(a, b)),
            // canonical representatives: x ≤_I y  iff  x ≤ y + ω = y
            CuModel::Quotient { base, .. } => base.le(x, y),
            CuModel::Table(t) => t.le(x.as_index(), y.as_index()),
        }
    }

    pub fn plus(&self, x: &Element, y: &Element) -> Element {
        match self {
            CuModel::Lsc(_) => {
                Element::Values(x.as_values().iter().zip(y.as_values()).map(|(a, b)| a.add(b)).collect())
            }
            CuModel::Product(ms) => Element::Tuple(
                ms.iter()
                    .zip(x.as_tuple().iter().zip(y.as_tuple()))
                    .map(|(m, (a, b))| m.plus(a, b))
                    .collect(),
            ),
            CuModel::Quotient { base, .. } => base.plus(x, y),
            CuModel::Table(t) => Element::Index(t.sum(x.as_index(), y.as_index()) as u32),
        }
    }

    pub fn wb(&self, x: &Element, y: &Element) -> bool {
        self.wb_mod(x, y, None)
    }

    /// `x ≪ y` in the quotient by the ideal below `omega` (or in the model itself).
    fn wb_mod(&self, x: &Element, y: &Element, omega: Option<&Element>) -> bool {
        match self {
            CuModel::Lsc(_) => {
                let (xv, yv) = (x.as_values(), y.as_values());
                (0..xv.len()).all(|p| {
                    let killed = omega.is_some_and(|o| !o.as_values()[p].is_zero());
                    killed || xv[p].way_below(&yv[p])
                })
            }
            CuModel::Product(ms) => ms.iter().enumerate().all(|(i, m)| {
                let o = omega.map(|o| &o.as_tuple()[i]);
                m.wb_mod(&x.as_tuple()[i], &y.as_tuple()[i], o)
            }),
            CuModel::Quotient { base, omega: own } => {
                let combined = match omega {
                    Some(o) => base.plus(o, own),
                    None => own.clone(),
                };
                base.wb_mod(x, y, Some(&combined))
            }
            CuModel::Table(t) => match omega {
                None => t.le(x.as_index(), y.as_index()),
                Some(o) => {
                    let o = o.as_index();
                    t.le(t.sum(x.as_index(), o), t.sum(y.as_index(), o))
                }
            },
        }
    }

    /// `n·x`
    pub fn times(&self, x: &Element, n: u64) -> Element {
        match self {
            CuModel::Lsc(_) => Element::Values(x.as_values().iter().map(|v| v.mul(n)).collect()),
            _ => {
                let mut acc = self.zero();
                let mut base = x.clone();
                let mut k = n;
                while k > 0 {
                    if k & 1 == 1 {
                        acc = self.plus(&acc, &base);
                    }
                    k >>= 1;
                    if k > 0 {
                        base = self.plus(&base, &base);
                    }
                }
                acc
            }
        }
    }

    /// `∞·x = sup_n n·x`
    pub fn saturate(&self, x: &Element) -> Element {
        match self {
            CuModel::Lsc(_) => Element::Values(x.as_values().iter().map(|v| v.saturate()).collect()),
            CuModel::Product(ms) => Element::Tuple(ms.iter().zip(x.as_tuple()).map(|(m, e)| m.saturate(e)).collect()),
            CuModel::Quotient { base, .. } => base.saturate(x),
            CuModel::Table(t) => Element::Index(t.saturate(x.as_index()) as u32),
        }
    }

    /// Greatest lower bound, if it exists.
    pub fn meet(&self, x: &Element, y: &Element) -> Option<Element> {
        match self {
            CuModel::Lsc(_) => Some(Element::Values(
                x.as_values()
                    .iter()
                    .zip(y.as_values())
                    .map(|(a, b)| a.meet(b))
                    .collect(),
            )),
            CuModel::Product(ms) => ms
                .iter()
                .zip(x.as_tuple().iter().zip(y.as_tuple()))
                .map(|(m, (a, b))| m.meet(a, b))
                .collect::<Option<Vec<_>>>()
                .map(Element::Tuple),
            CuModel::Quotient { base, omega } => base.meet(x, y).map(|m| base.plus(&m, omega)),
            CuModel::Table(t) => t.glb(x.as_index(), y.as_index()).map(|i| Element::Index(i as u32)),
        }
    }

    /// Least upper bound, if it exists (used to build approximating sequences).
    pub fn join(&self, x: &Element, y: &Element) -> Option<Element> {
        match self {
            CuModel::Lsc(_) => x
                .as_values()
                .iter()
                .zip(y.as_values())
                .map(|(a, b)| a.join(b))
                .collect::<Option<Values>>()
                .map(Element::Values),
            CuModel::Product(ms) => ms
                .iter()
                .zip(x.as_tuple().iter().zip(y.as_tuple()))
                .map(|(m, (a, b))| m.join(a, b))
                .collect::<Option<Vec<_>>>()
                .map(Element::Tuple),
            CuModel::Quotient { base, .. } => base.join(x, y),
            CuModel::Table(t) => {
                let (i, j) = (x.as_index(), y.as_index());
                let upper: Vec<usize> = (0..t.len()).filter(|&k| t.le(i, k) && t.le(j, k)).collect();
                upper
                    .iter()
                    .copied()
                    .find(|&m| upper.iter().all(|&k| t.le(m, k)))
                    .map(|k| Element::Index(k as u32))
            }
        }
    }

    /// The `n`-th term of a `≪`-increasing sequence with supremum `x`.
    pub fn approximant(&self, x: &Element, n: u32) -> Element {
        match self {
            CuModel::Lsc(m) => Element::Values(lsc_approximant(m.kind, x.as_values(), n)),
            CuModel::Product(ms) => {
                Element::Tuple(ms.iter().zip(x.as_tuple()).map(|(m, e)| m.approximant(e, n)).collect())
            }
            CuModel::Quotient { base, omega } => base.plus(&base.approximant(x, n), omega),
            CuModel::Table(_) => x.clone(),
        }
    }

    /// Whether the model is a finite table (possibly inside products/quotients),
    /// so that every increasing sequence stabilizes.
    pub fn is_finite(&self) -> bool {
        match self {
            CuModel::Lsc(m) => m.poset.is_empty(),
            CuModel::Product(ms) => ms.iter().all(|m| m.is_finite()),
            CuModel::Quotient { base, .. } => base.is_finite(),
            CuModel::Table(_) => true,
        }
    }

    /// Whether a cap with the given ceiling lists every model element below `e`
    /// (so that a failed witness search below `e` is conclusive).
    pub fn complete_below(&self, e: &Element, ceiling: u32) -> bool {
        self.complete_below_mod(e, ceiling, None)
    }

    fn complete_below_mod(&self, e: &Element, ceiling: u32, omega: Option<&Element>) -> bool {
        match self {
            CuModel::Lsc(m) => e.as_values().iter().enumerate().all(|(p, v)| {
                let killed = omega.is_some_and(|o| !o.as_values()[p].is_zero());
                killed || v.is_zero() || (m.kind.is_discrete() && v.is_finite() && v.rank() <= Ext::int(ceiling as i64))
            }),
            CuModel::Product(ms) => ms
                .iter()
                .enumerate()
                .all(|(i, m)| m.complete_below_mod(&e.as_tuple()[i], ceiling, omega.map(|o| &o.as_tuple()[i]))),
            CuModel::Quotient { base, omega: own } => {
                let combined = match omega {
                    Some(o) => base.plus(o, own),
                    None => own.clone(),
                };
                base.complete_below_mod(e, ceiling, Some(&combined))
            }
            CuModel::Table(_) => true,
        }
    }

    /// Candidate elements assembled pointwise for Lsc models: each coordinate
    /// ranges over the values derived from `seeds` that satisfy `point_ok`;
    /// only monotone combinations are returned, in lexicographic order.
    pub fn pointwise_candidates(
        &self,
        seeds: &[Ext],
        point_ok: impl Fn(usize, &Scalar) -> bool,
        limit: usize,
    ) -> Vec<Element> {
        let CuModel::Lsc(m) = self else {
            return Vec::new();
        };
        let mut pool: Vec<Scalar> = vec![Scalar::ZERO, Scalar::INF];
        for r in seeds {
            pool.extend(scalars_of_rank(m.kind, *r));
        }
        pool.retain(|v| m.kind.contains(v));
        pool.sort_by_key(|v| v.enum_key());
        pool.dedup();
        let per_point: Vec<Vec<Scalar>> = (0..m.poset.len())
            .map(|p| pool.iter().copied().filter(|v| point_ok(p, v)).collect())
            .collect();
        let mut out = Vec::new();
        let mut cur: Values = SmallVec::new();
        monotone_product(&m.poset, &per_point, &mut cur, &mut out, limit);
        out
    }

    // ---- checked public operations ----

    fn check2(&self, x: &Element, y: &Element) -> Result<()> {
        self.check(x)?;
        self.check(y)
    }

    pub fn leq(&self, x: &Element, y: &Element) -> Result<bool> {
        self.check2(x, y)?;
        Ok(self.le(x, y))
    }

    pub fn add(&self, x: &Element, y: &Element) -> Result<Element> {
        self.check2(x, y)?;
        Ok(self.plus(x, y))
    }

    pub fn way_below(&self, x: &Element, y: &Element) -> Result<bool> {
        self.check2(x, y)?;
        Ok(self.wb(x, y))
    }

    pub fn is_compact(&self, x: &Element) -> Result<bool> {
        self.way_below(x, x)
    }

    /// Supremum of the affine chain `a + n·b`, namely `a + ∞·b`.
    pub fn sup_chain(&self, a: &Element, b: &Element) -> Result<Element> {
        self.check2(a, b)?;
        Ok(self.plus(a, &self.saturate(b)))
    }

    pub fn infimum(&self, x: &Element, y: &Element) -> Result<Option<Element>> {
        self.check2(x, y)?;
        Ok(self.meet(x, y))
    }

    pub fn multiple(&self, x: &Element, n: u64) -> Result<Element> {
        self.check(x)?;
        Ok(self.times(x, n))
    }

    // ---- text form ----

    pub fn fmt_element(&self, x: &Element) -> String {
        match (self, x) {
            (CuModel::Lsc(m), Element::Values(v)) if m.poset.len() == 1 => v[0].to_string(),
            (CuModel::Lsc(_), Element::Values(v)) => format!("({})", v.iter().join(",")),
            (CuModel::Product(ms), Element::Tuple(t)) if ms.len() == t.len() => {
                format!("<{}>", ms.iter().zip(t).map(|(m, e)| m.fmt_element(e)).join("; "))
            }
            (CuModel::Quotient { base, .. }, _) => base.fmt_element(x),
            (CuModel::Table(t), Element::Index(i)) if (*i as usize) < t.len() => t.names[*i as usize].clone(),
            _ => format!("{x:?}"),
        }
    }

    /// Parses the text form produced by [`CuModel::fmt_element`]. Quotient
    /// inputs may be any representative; they are canonicalized.
    pub fn parse_element(&self, s: &str) -> Result<Element> {
        let s = s.trim();
        let e = match self {
            CuModel::Lsc(m) => {
                let inner = s.strip_prefix('(').and_then(|r| r.strip_suffix(')'));
                let parts: Vec<&str> = match inner {
                    Some(body) if !body.trim().is_empty() => body.split(',').collect(),
                    Some(_) => Vec::new(),
                    None => vec![s],
                };
                if parts.len() != m.poset.len() {
                    return Err(CuError::ModelMismatch(format!(
                        "{s:?} has {} coordinates, the model has {} points",
                        parts.len(),
                        m.poset.len()
                    )));
                }
                let vals = parts
                    .iter()
                    .map(|p| m.kind.coerce(p.parse::<Scalar>()?))
                    .collect::<Result<Values>>()?;
                Element::Values(vals)
            }
            CuModel::Product(ms) => {
                let body = s
                    .strip_prefix('<')
                    .and_then(|r| r.strip_suffix('>'))
                    .ok_or_else(|| CuError::Parse(format!("product element must look like <a; b>: {s:?}")))?;
                let parts = split_top_level(body, ';');
                if parts.len() != ms.len() {
                    return Err(CuError::ModelMismatch(format!(
                        "{s:?} has {} components, the product has {}",
                        parts.len(),
                        ms.len()
                    )));
                }
                Element::Tuple(
                    ms.iter()
                        .zip(parts)
                        .map(|(m, p)| m.parse_element(p))
                        .collect::<Result<_>>()?,
                )
            }
            CuModel::Quotient { base, .. } => self.canonical(&base.parse_element(s)?),
            CuModel::Table(t) => {
                let i = t
                    .names
                    .iter()
                    .position(|n| n == s)
                    .ok_or_else(|| CuError::InvalidElement(format!("unknown table element {s:?}")))?;
                Element::Index(i as u32)
            }
        };
        self.check(&e)?;
        Ok(e)
    }
}

fn split_top_level(s: &str, sep: char) -> Vec<&str> {
    let mut depth = 0i32;
    let mut start = 0;
    let mut out = Vec::new();
    for (i, c) in s.char_indices() {
        match c {
            '(' | '<' => depth += 1,
            ')' | '>' => depth -= 1,
            c if c == sep && depth == 0 => {
                out.push(&s[start..i]);
                start = i + c.len_utf8();
            }
            _ => {}
        }
    }
    out.push(&s[start..]);
    out
}

/// Scalars whose rank is `r`: the compact class(es) when `r` is an integer,
/// and the soft value.
/// Whether every finite coordinate rank of `e` is at most `ceiling`.
pub fn within_ceiling(e: &Element, ceiling: u32) -> bool {
    match e {
        Element::Values(v) => v.iter().all(|s| s.rank() <= Ext::int(ceiling as i64) || !s.is_finite()),
        Element::Tuple(t) => t.iter().all(|x| within_ceiling(x, ceiling)),
        Element::Index(_) => true,
    }
}

pub fn scalars_of_rank(kind: ScalarKind, r: Ext) -> Vec<Scalar> {
    let mut out = Vec::new();
    match r {
        Ext::Inf => out.push(Scalar::INF),
        Ext::Fin(q) => {
            if q.is_integer() {
                let n = q.to_integer().to_u32().unwrap_or(u32::MAX);
                out.push(Scalar::compact(n));
                if kind == ScalarKind::Torsion && n > 0 {
                    out.push(Scalar::twisted(n));
                }
            }
            out.push(Scalar::soft(Ext::Fin(q)));
        }
    }
    out.retain(|v| kind.contains(v));
    out
}

fn monotone_product(
    poset: &FinitePoset,
    per_point: &[Vec<Scalar>],
    cur: &mut Values,
    out: &mut Vec<Element>,
    limit: usize,
) {
    if out.len() >= limit {
        return;
    }
    let p = cur.len();
    if p == per_point.len() {
        out.push(Element::Values(cur.clone()));
        return;
    }
    for v in &per_point[p] {
        let ok = (0..p).all(|q| (!poset.le(q, p) || cur[q].le(v)) && (!poset.le(p, q) || v.le(&cur[q])));
        if ok {
            cur.push(*v);
            monotone_product(poset, per_point, cur, out, limit);
            cur.pop();
        }
    }
}

/// Pointwise approximants with a uniform gap, so that monotonicity survives:
/// soft values `t` become `t − g/(n+2)` where `g` is below every soft value and
/// every gap between a compact value and a larger soft value; `∞` becomes an
/// integer above every finite rank present.
fn lsc_approximant(kind: ScalarKind, vals: &[Scalar], n: u32) -> Values {
    let finite_ranks: Vec<Rational64> = vals.iter().filter_map(|v| v.rank().finite()).collect();
    let c0 = finite_ranks.iter().map(|r| r.ceil().to_integer()).max().unwrap_or(0) + 1;
    let mut g = Rational64::from_integer(1);
    for v in vals {
        if let Scalar::Soft(Ext::Fin(t)) = v {
            g = g.min(*t);
            for w in vals {
                if let Scalar::Compact { rank, .. } = w {
                    let c = Rational64::from_integer(*rank as i64);
                    if c < *t {
                        g = g.min(*t - c);
                    }
                }
            }
        }
    }
    vals.iter()
        .map(|v| match v {
            Scalar::Compact { .. } => *v,
            Scalar::Soft(Ext::Fin(t)) => {
                let eps = g / Rational64::from_integer(n as i64 + 2);
                debug_assert!(!(*t - eps).is_zero());
                Scalar::Soft(Ext::Fin(*t - eps))
            }
            Scalar::Soft(Ext::Inf) => {
                let m = (c0 + n as i64) as u32;
                if kind == ScalarKind::ExtRational {
                    Scalar::soft(Ext::int(m as i64))
                } else {
                    Scalar::compact(m)
                }
            }
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn nbar2() -> CuModel {
        CuModel::lsc(FinitePoset::antichain(2), ScalarKind::NBar)
    }

    #[test]
    fn pointwise_operations() {
        let m = nbar2();
        let x = m.parse_element("(2,0)").unwrap();
        let y = m.parse_element("(0,3)").unwrap();
        assert_eq!(m.fmt_element(&m.add(&x, &y).unwrap()), "(2,3)");
        assert_eq!(m.fmt_element(&m.infimum(&x, &y).unwrap().unwrap()), "(0,0)");
        let a = m.parse_element("(1,0)").unwrap();
        let b = m.parse_element("(0,1)").unwrap();
        assert_eq!(m.fmt_element(&m.sup_chain(&a, &b).unwrap()), "(1,inf)");
    }

    #[test]
    fn mismatched_shapes_are_rejected() {
        let m = nbar2();
        let one = CuModel::scalar(ScalarKind::NBar);
        let x = one.parse_element("3").unwrap();
        assert!(matches!(m.leq(&x, &x), Err(CuError::ModelMismatch(_))));
        assert!(m.parse_element("(1,2,3)").is_err());
    }

    #[test]
    fn monotonicity_is_enforced() {
        let m = CuModel::lsc(FinitePoset::chain(2), ScalarKind::NBar);
        assert!(m.parse_element("(2,1)").is_err());
        assert!(m.parse_element("(1,2)").is_ok());
    }

    #[test]
    fn approximants_increase_rapidly() {
        let m = CuModel::lsc(FinitePoset::chain(2), ScalarKind::ZCu);
        let x = m.parse_element("(1,Soft(3/2))").unwrap();
        for n in 0..6 {
            let a = m.approximant(&x, n);
            let b = m.approximant(&x, n + 1);
            assert!(m.contains(&a));
            assert!(m.wb(&a, &b) && m.le(&b, &x));
        }
        let t = m.parse_element("(2,inf)").unwrap();
        assert!(m.contains(&m.approximant(&t, 0)));
    }

    #[test]
    fn table_validation() {
        let names = vec!["0".to_string(), "a".into()];
        // 0 <= a forces a = 0 + a <= a + a = 0
        let err = TableModel::new(names.clone(), vec![vec![0, 1], vec![1, 0]], &[(0, 1)]).unwrap_err();
        assert!(err.to_string().contains("monotone"));
        assert!(TableModel::new(names, vec![vec![0, 1], vec![1, 1]], &[(0, 1)]).is_ok());
    }

    #[test]
    fn table_rejects_non_associative() {
        let names: Vec<String> = ["0", "a", "b"].iter().map(|s| s.to_string()).collect();
        // (a+a)+b = b+b = a, but a+(a+b) = a+b = b
        let add = vec![vec![0, 1, 2], vec![1, 2, 2], vec![2, 2, 1]];
        let err = TableModel::new(names, add, &[]).unwrap_err();
        assert!(err.to_string().contains("associative"), "{err}");
    }
}
