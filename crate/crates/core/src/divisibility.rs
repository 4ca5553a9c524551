//! Divisibility, domination constants, softness and small soft elements.

use std::time::Instant;

use itertools::Itertools;
use serde::{Deserialize, Serialize};

use crate::axioms::{
    dominates_unchecked, finish, inf_distributivity_on, new_report, o5_on, weak_cancellation_on, Domination,
};
use crate::cap::{Cap, CapIndex};
use crate::error::{CuError, Result};
use crate::ext::Ext;
use crate::model::{CuModel, Element};
use crate::report::{el, CheckOptions, CheckReport, Instance, Item, Verdict};
use crate::scalar::Scalar;

/// `M = max{ nʳ(k−r) + nʳ⁻¹ : r = 1..k }`.
pub fn constant_m(k: u64, n: u64) -> Result<u64> {
    if k == 0 || n == 0 {
        return Err(CuError::Precondition("k and n must be positive".into()));
    }
    let overflow = || CuError::Precondition(format!("constant M({k}, {n}) overflows"));
    let mut best = 0u64;
    let mut pow_prev = 1u64; // n^(r-1)
    for r in 1..=k {
        let pow = pow_prev.checked_mul(n).ok_or_else(overflow)?;
        let v = pow
            .checked_mul(k - r)
            .and_then(|t| t.checked_add(pow_prev))
            .ok_or_else(overflow)?;
        best = best.max(v);
        pow_prev = pow;
    }
    Ok(best)
}

/// `N = n(M − 1) + 1`.
pub fn constant_n_wedge(n: u64, m: u64) -> Result<u64> {
    if n == 0 || m == 0 {
        return Err(CuError::Precondition("n and M must be positive".into()));
    }
    n.checked_mul(m - 1)
        .and_then(|v| v.checked_add(1))
        .ok_or_else(|| CuError::Precondition("constant N overflows".into()))
}

/// `N = k(M(k, n) − 1) + 1`.
pub fn constant_n_cugg(k: u64, n: u64) -> Result<u64> {
    constant_n_wedge(k, constant_m(k, n)?)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Mode {
    Plain,
    Weak,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Multiplicity {
    Finite(u64),
    /// Some `n` (searched up to the configured bound).
    Omega,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DivisibilityQuery {
    pub x: Element,
    pub k: u64,
    pub n: Multiplicity,
    pub mode: Mode,
}

/// Witnesses for one `x' ≪ x`: `k·y_j ≤ x` for all `j` and `x' ≤ Σ y_j`
/// (a single `y` repeated `n` times in plain mode).
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Certificate {
    pub x_prime: Element,
    pub ys: Vec<Element>,
    pub n: u64,
    /// Whether the strengthened form `k·y ≪ x`, `x' ≪ Σ y_j` holds.
    pub strong: bool,
}

impl Certificate {
    /// Re-checks every inequality with direct model evaluation.
    pub fn verify(&self, model: &CuModel, x: &Element, k: u64) -> bool {
        let sum = self.ys.iter().fold(model.zero(), |acc, y| model.plus(&acc, y));
        self.ys.iter().all(|y| model.le(&model.times(y, k), x)) && model.le(&self.x_prime, &sum)
    }
}

#[derive(Clone, Debug)]
pub struct DivisibilityResult {
    pub report: CheckReport,
    pub certificates: Vec<Certificate>,
}

/// Elements `x'` to test: the maximal cap elements way below `x`.
fn approximants_of(idx: &CapIndex, x: &Element) -> Vec<Element> {
    let m = idx.model;
    let below: Vec<usize> = (0..idx.len()).filter(|&i| m.wb(idx.elem(i), x)).collect();
    idx.maximal(&below).into_iter().map(|i| idx.elem(i).clone()).collect()
}

fn maximal_elements(model: &CuModel, set: Vec<Element>) -> Vec<Element> {
    let set: Vec<Element> = set.into_iter().unique().collect();
    set.iter()
        .filter(|a| !set.iter().any(|b| b != *a && model.le(a, b)))
        .cloned()
        .collect()
}

/// Maximal `y` with `k·y ≤ x`, from the cap and from pointwise candidates.
fn divisors(idx: &CapIndex, x: &Element, k: u64) -> Vec<Element> {
    let m = idx.model;
    let mut ys: Vec<Element> = (0..idx.len())
        .map(|i| idx.elem(i))
        .filter(|y| m.le(&m.times(y, k), x))
        .cloned()
        .collect();
    if let Element::Values(xv) = x {
        let mut seeds = Vec::new();
        for v in xv.iter() {
            if let Ext::Fin(r) = v.rank() {
                let q = r / num_rational::Rational64::from_integer(k as i64);
                seeds.push(Ext::Fin(q));
                seeds.push(Ext::Fin(q.floor()));
            }
        }
        let xv = xv.clone();
        ys.extend(m.pointwise_candidates(&seeds, |p, v| v.mul(k).le(&xv[p]), usize::MAX));
    }
    maximal_elements(m, ys)
}

fn sum_all(model: &CuModel, ys: &[&Element]) -> Element {
    ys.iter().fold(model.zero(), |acc, y| model.plus(&acc, y))
}

/// Decides the divisibility query for every maximal `x' ≪ x` in the cap.
///
/// Witnesses are maximal elements `y` with `k·y ≤ x` (the conditions are
/// monotone in `y`), drawn from the cap and from pointwise candidates.
/// Omega modes search `n ≤ n_bound`.
pub fn is_divisible(
    model: &CuModel,
    q: &DivisibilityQuery,
    cap: &Cap,
    opts: &CheckOptions,
) -> Result<DivisibilityResult> {
    model.check(&q.x)?;
    if q.k == 0 || q.n == Multiplicity::Finite(0) {
        return Err(CuError::Precondition("k and n must be positive".into()));
    }
    let idx = CapIndex::new(model, cap);
    Ok(divisible_on(&idx, q, opts))
}

pub(crate) fn divisible_on(idx: &CapIndex, q: &DivisibilityQuery, opts: &CheckOptions) -> DivisibilityResult {
    let start = Instant::now();
    let m = idx.model;
    let name = match (q.mode, q.n) {
        (Mode::Plain, Multiplicity::Finite(n)) => format!("({},{})-divisible", q.k, n),
        (Mode::Plain, Multiplicity::Omega) => format!("({},omega)-divisible", q.k),
        (Mode::Weak, Multiplicity::Finite(n)) => format!("weakly-({},{})-divisible", q.k, n),
        (Mode::Weak, Multiplicity::Omega) => format!("weakly-({},omega)-divisible", q.k),
    };
    let mut r = new_report(&name, idx);
    r.fact("x", m.fmt_element(&q.x));
    let ys = divisors(idx, &q.x, q.k);
    let complete = m.complete_below(&q.x, idx.cap.ceiling);
    let mut certs = Vec::new();
    for xp in approximants_of(idx, &q.x) {
        r.stats.tuples += 1;
        let cert = match (q.mode, q.n) {
            (Mode::Plain, n) => plain_witness(m, &xp, &ys, n, opts.n_bound),
            (Mode::Weak, Multiplicity::Finite(n)) => weak_witness(m, &xp, &ys, n),
            (Mode::Weak, Multiplicity::Omega) => (1..=opts.n_bound).find_map(|n| weak_witness(m, &xp, &ys, n)),
        };
        match cert {
            Some(mut c) => {
                let sum = sum_all(m, &c.ys.iter().collect::<Vec<_>>());
                c.strong = c.ys.iter().all(|y| m.wb(&m.times(y, q.k), &q.x)) && m.wb(&c.x_prime, &sum);
                let mut roles = vec![("x'", el(&c.x_prime))];
                let names: Vec<String> = (1..=c.ys.len()).map(|j| format!("y{j}")).collect();
                for (nm, y) in names.iter().zip(&c.ys) {
                    roles.push((nm.as_str(), el(y)));
                }
                roles.push(("n", Item::Count(c.n)));
                r.witness(Instance::new(m, &name, roles));
                certs.push(c);
            }
            None if complete || q.n == Multiplicity::Omega && dominated_nowhere(m, &xp, &ys) => {
                r.fail(Instance::new(
                    m,
                    &name,
                    vec![("x", el(&q.x)), ("x'", el(&xp)), ("k", Item::Count(q.k))],
                ));
            }
            None => r.inconclusive(format!("no witness for x'={} within the cap", m.fmt_element(&xp))),
        }
    }
    DivisibilityResult {
        report: finish(r, start),
        certificates: certs,
    }
}

fn dominated_nowhere(m: &CuModel, xp: &Element, ys: &[Element]) -> bool {
    // domination is decided exactly only on Lsc models
    matches!(m, CuModel::Lsc(_))
        && ys.iter().all(|y| {
            matches!(
                dominates_unchecked(m, xp, y, 0),
                Domination::No | Domination::OnlyInfinite
            )
        })
}

fn plain_witness(m: &CuModel, xp: &Element, ys: &[Element], n: Multiplicity, n_bound: u64) -> Option<Certificate> {
    let mut best: Option<(u64, &Element)> = None;
    for y in ys {
        if let Domination::Finite(d) = dominates_unchecked(m, xp, y, n_bound) {
            let d = d.max(1);
            if best.is_none_or(|(b, _)| d < b) {
                best = Some((d, y));
            }
        }
    }
    let (d, y) = best?;
    let n = match n {
        Multiplicity::Finite(n) if d <= n => n,
        Multiplicity::Finite(_) => return None,
        Multiplicity::Omega if d <= n_bound => d,
        Multiplicity::Omega => return None,
    };
    Some(Certificate {
        x_prime: xp.clone(),
        ys: vec![y.clone(); n as usize],
        n,
        strong: false,
    })
}

fn weak_witness(m: &CuModel, xp: &Element, ys: &[Element], n: u64) -> Option<Certificate> {
    (0..ys.len())
        .combinations_with_replacement(n as usize)
        .find(|c| m.le(xp, &sum_all(m, &c.iter().map(|&i| &ys[i]).collect::<Vec<_>>())))
        .map(|c| Certificate {
            x_prime: xp.clone(),
            ys: c.iter().map(|&i| ys[i].clone()).collect(),
            n,
            strong: false,
        })
}

/// Minimal `N` such that `x` is `(k, N)`-divisible on the cap:
/// `max over x' of min over y with k·y ≤ x of min{N : x' ≤ N·y}`.
pub fn minimal_plain_n(idx: &CapIndex, x: &Element, k: u64, n_bound: u64) -> Option<u64> {
    let m = idx.model;
    let ys = divisors(idx, x, k);
    let mut worst = 0u64;
    for xp in approximants_of(idx, x) {
        let best = ys
            .iter()
            .filter_map(|y| match dominates_unchecked(m, &xp, y, n_bound) {
                Domination::Finite(d) => Some(d.max(1)),
                _ => None,
            })
            .min()?;
        worst = worst.max(best);
    }
    Some(worst.max(1))
}

/// Lemma on infima: if `x ≤ M·y_j` for all `j` then `x ≤ N·⋀ y_j` with
/// `N = n(M − 1) + 1`; also reports the minimal such `N'`.
pub fn verify_wedgefull(model: &CuModel, x: &Element, ys: &[Element], m_const: u64) -> Result<CheckReport> {
    let start = Instant::now();
    model.check(x)?;
    if ys.is_empty() {
        return Err(CuError::Precondition("at least one y is required".into()));
    }
    for y in ys {
        model.check(y)?;
        if !model.le(x, &model.times(y, m_const)) {
            return Err(CuError::Precondition(format!(
                "x is not below {}·{}",
                m_const,
                model.fmt_element(y)
            )));
        }
    }
    let meet = ys[1..]
        .iter()
        .try_fold(ys[0].clone(), |acc, y| model.meet(&acc, y))
        .ok_or_else(|| CuError::Precondition("the y's have no infimum".into()))?;
    let n = constant_n_wedge(ys.len() as u64, m_const)?;
    let mut r = CheckReport::new("wedgefull", model, "none");
    r.fact("N", n);
    r.fact("meet", model.fmt_element(&meet));
    r.stats.tuples = 1;
    let roles = || vec![("x", el(x)), ("meet", el(&meet)), ("N", Item::Count(n))];
    if !model.le(x, &model.times(&meet, n)) {
        r.fail(Instance::new(model, "wedgefull", roles()));
    }
    match dominates_unchecked(model, x, &meet, n.max(16)) {
        Domination::Finite(d) => {
            r.fact("minimal_N", d);
            if d > n {
                r.fail(Instance::new(model, "wedgefull-minimal", roles()));
            }
        }
        other => r.fact("minimal_N", format!("{other:?}")),
    }
    Ok(finish(r, start))
}

/// The hypotheses of the divisibility theorem on the cap: O5, weak
/// cancellation and inf-semilattice ordering (existence of infima and the
/// distributive law).
pub fn cugg_hypotheses(model: &CuModel, cap: &Cap, opts: &CheckOptions) -> CheckReport {
    let start = Instant::now();
    let idx = CapIndex::with_sums(model, cap);
    let mut r = new_report("divisibility-hypotheses", &idx);
    r.push_part(o5_on(&idx));
    r.push_part(weak_cancellation_on(&idx));
    let dist = inf_distributivity_on(&idx, opts);
    // only the infima and the two-term law are hypotheses
    let mut inf = new_report("inf-semilattice-ordered", &idx);
    for name in ["infima-exist", "distributivity"] {
        if let Some(p) = dist.find_part(name) {
            inf.push_part(p.clone());
        }
    }
    r.push_part(inf);
    finish(r, start)
}

/// Whenever `x` is weakly `(k, n)`-divisible on the cap, `x` is
/// `(k, N)`-divisible with `N = k(M − 1) + 1`; reports the minimal plain `N`
/// per instance. `x = None` runs every cap element.
///
/// The theorem's hypotheses are evaluated first and reported as a part; a
/// bound violation counts as `fails` only where they hold, and as a noted
/// finding otherwise.
pub fn verify_cugg(
    model: &CuModel,
    x: Option<&Element>,
    k: u64,
    n: u64,
    cap: &Cap,
    opts: &CheckOptions,
) -> Result<CheckReport> {
    let start = Instant::now();
    if let Some(x) = x {
        model.check(x)?;
    }
    let bound = constant_n_cugg(k, n)?;
    let idx = CapIndex::new(model, cap);
    let mut r = new_report(&format!("cugg(k={k},n={n})"), &idx);
    r.fact("M", constant_m(k, n)?);
    r.fact("N", bound);
    let hyp = cugg_hypotheses(model, cap, opts);
    let hyp_hold = hyp.holds();
    r.fact("hypotheses_hold", hyp_hold);
    let xs: Vec<Element> = match x {
        Some(x) => vec![x.clone()],
        None => idx.cap_elements().to_vec(),
    };
    let mut weak_count = 0u64;
    let mut max_min_n = 0u64;
    let mut body = new_report("implication", &idx);
    for x in &xs {
        body.stats.tuples += 1;
        let q = DivisibilityQuery {
            x: x.clone(),
            k,
            n: Multiplicity::Finite(n),
            mode: Mode::Weak,
        };
        let weak = divisible_on(&idx, &q, opts).report.verdict;
        if weak != Verdict::Holds {
            continue;
        }
        weak_count += 1;
        let min_n = minimal_plain_n(&idx, x, k, bound.max(opts.n_bound));
        let roles = || vec![("x", el(x)), ("k", Item::Count(k)), ("n", Item::Count(n))];
        match min_n {
            Some(mn) => {
                max_min_n = max_min_n.max(mn);
                let mut roles = roles();
                roles.push(("minimal_N", Item::Count(mn)));
                if mn <= bound {
                    body.witness(Instance::new(model, "cugg-instance", roles));
                } else if hyp_hold {
                    body.fail(Instance::new(model, "cugg-bound", roles));
                } else {
                    body.note(format!(
                        "bound exceeded at x={} (minimal N {mn}) where the hypotheses fail",
                        model.fmt_element(x)
                    ));
                }
            }
            None if hyp_hold && model.complete_below(x, cap.ceiling) => {
                body.fail(Instance::new(model, "cugg-divisible", roles()));
            }
            None => body.inconclusive(format!(
                "no plain witness for x={} within the cap",
                model.fmt_element(x)
            )),
        }
    }
    body.fact("weakly_divisible_instances", weak_count);
    body.fact("max_minimal_N", max_min_n);
    r.fact("max_minimal_N", max_min_n);
    r.push_part(hyp);
    // the hypotheses are reported, not asserted
    r.verdict = Verdict::Holds;
    r.push_part(finish(body, start));
    Ok(finish(r, start))
}

/// Minimal `k ≥ 1` with `(k+1)a ≤ k·b` for scalars.
fn scalar_soft_k(a: &Scalar, b: &Scalar) -> Option<u64> {
    if a.is_zero() || !b.is_finite() {
        return Some(1);
    }
    let (Ext::Fin(ra), Ext::Fin(rb)) = (a.rank(), b.rank()) else {
        return None;
    };
    if ra >= rb {
        return None;
    }
    let k0 = (ra / (rb - ra)).ceil().to_integer().max(1) as u64;
    (k0..k0 + 3).find(|&k| a.mul(k + 1).le(&b.mul(k)))
}

/// Minimal `k` with `(k+1)x' ≤ k·x`, exact for Lsc models and searched up to
/// `n_bound` otherwise.
pub fn soft_multiplier(model: &CuModel, xp: &Element, x: &Element, n_bound: u64) -> Option<u64> {
    let k = match (model, xp, x) {
        (CuModel::Lsc(_), Element::Values(a), Element::Values(b)) => {
            let mut k = 1;
            for (u, v) in a.iter().zip(b.iter()) {
                k = k.max(scalar_soft_k(u, v)?);
            }
            // per-point conditions are monotone in k, so the maximum works everywhere
            Some(k)
        }
        _ => (1..=n_bound).find(|&k| model.le(&model.times(xp, k + 1), &model.times(x, k))),
    }?;
    model.le(&model.times(xp, k + 1), &model.times(x, k)).then_some(k)
}

/// Closed form on Lsc(ℕ̄): soft exactly when every value is 0 or ∞.
pub fn nbar_soft_closed_form(x: &Element) -> bool {
    x.as_values().iter().all(|v| v.is_zero() || !v.is_finite())
}

/// Softness: every `x' ≪ x` satisfies `(k+1)x' ≤ kx` for some `k`.
pub fn is_soft(model: &CuModel, x: &Element, cap: &Cap, opts: &CheckOptions) -> Result<CheckReport> {
    model.check(x)?;
    let idx = CapIndex::new(model, cap);
    Ok(soft_on(&idx, x, opts))
}

pub(crate) fn soft_on(idx: &CapIndex, x: &Element, opts: &CheckOptions) -> CheckReport {
    let start = Instant::now();
    let m = idx.model;
    let mut r = new_report("soft", idx);
    r.fact("x", m.fmt_element(x));
    let exact = matches!(m, CuModel::Lsc(_));
    for xp in approximants_of(idx, x) {
        r.stats.tuples += 1;
        match soft_multiplier(m, &xp, x, opts.n_bound) {
            Some(k) => r.witness(Instance::new(m, "soft", vec![("x'", el(&xp)), ("k", Item::Count(k))])),
            None if exact || m.is_finite() => {
                r.fail(Instance::new(m, "soft", vec![("x", el(x)), ("x'", el(&xp))]));
            }
            None => r.inconclusive(format!("no k ≤ {} for x'={}", opts.n_bound, m.fmt_element(&xp))),
        }
    }
    if let CuModel::Lsc(l) = m {
        if l.kind == crate::scalar::ScalarKind::NBar {
            let closed = nbar_soft_closed_form(x);
            r.fact("closed_form", closed);
            if closed != r.holds() && r.verdict != Verdict::Inconclusive {
                r.note("closed form disagrees with the search");
                r.fail(Instance::new(m, "soft-closed-form", vec![("x", el(x))]));
            }
        }
    }
    finish(r, start)
}

/// Softness of `x_1 + … + x_m + ∞·x_m` for a prefix with `x_j ∝ x_{j+1}`.
pub fn check_soft_sum(model: &CuModel, xs: &[Element], cap: &Cap, opts: &CheckOptions) -> Result<CheckReport> {
    if xs.is_empty() {
        return Err(CuError::Precondition("the sequence prefix is empty".into()));
    }
    for x in xs {
        model.check(x)?;
    }
    for (j, w) in xs.windows(2).enumerate() {
        if dominates_unchecked(model, &w[0], &w[1], opts.n_bound).dominated() != Some(true) {
            return Err(CuError::Precondition(format!(
                "x_{} = {} is not dominated by x_{} = {}",
                j + 1,
                model.fmt_element(&w[0]),
                j + 2,
                model.fmt_element(&w[1])
            )));
        }
    }
    let last = xs.last().unwrap();
    let sum = xs.iter().fold(model.saturate(last), |acc, x| model.plus(&acc, x));
    let mut r = is_soft(model, &sum, cap, opts)?;
    r.name = "soft-sum".into();
    r.fact("sum", model.fmt_element(&sum));
    Ok(r)
}

/// Full: `∞·x` is the largest element.
pub fn is_full(model: &CuModel, x: &Element) -> bool {
    match model.top() {
        Some(t) => model.saturate(x) == t,
        None => false,
    }
}

/// A soft full `z` with `n·z ≤ x` in the cap: the largest such element when
/// one exists, otherwise the first maximal one in enumeration order.
pub fn find_small_soft(
    model: &CuModel,
    x: &Element,
    n: u64,
    cap: &Cap,
    opts: &CheckOptions,
) -> Result<Option<Element>> {
    model.check(x)?;
    if !is_full(model, x) {
        return Err(CuError::Precondition(format!("{} is not full", model.fmt_element(x))));
    }
    let idx = CapIndex::new(model, cap);
    let cands: Vec<usize> = (0..idx.len())
        .filter(|&i| {
            let z = idx.elem(i);
            is_full(model, z) && model.le(&model.times(z, n), x) && soft_on(&idx, z, opts).holds()
        })
        .collect();
    let max = idx.maximal(&cands);
    Ok(max.first().map(|&i| idx.elem(i).clone()))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::poset::FinitePoset;
    use crate::scalar::ScalarKind;

    #[test]
    fn constants() {
        assert_eq!(constant_m(2, 2).unwrap(), 3);
        assert_eq!(constant_m(1, 5).unwrap(), 1);
        assert_eq!(constant_m(3, 2).unwrap(), 6);
        assert_eq!(constant_n_wedge(2, 3).unwrap(), 5);
        assert_eq!(constant_n_wedge(3, 2).unwrap(), 4);
        assert_eq!(constant_n_cugg(2, 2).unwrap(), 5);
        assert_eq!(constant_n_cugg(1, 1).unwrap(), 1);
        assert_eq!(constant_n_cugg(3, 2).unwrap(), 16);
    }

    #[test]
    fn nbar_divisibility() {
        let m = CuModel::scalar(ScalarKind::NBar);
        let cap = Cap::full(&m, 5);
        let o = CheckOptions::default();
        let e = |s: &str| m.parse_element(s).unwrap();
        let q = |x: &str, n| DivisibilityQuery {
            x: e(x),
            k: 2,
            n: Multiplicity::Finite(n),
            mode: Mode::Plain,
        };
        let r = is_divisible(&m, &q("4", 2), &cap, &o).unwrap();
        assert!(r.report.holds());
        assert_eq!(r.certificates[0].ys[0], e("2"));
        assert!(is_divisible(&m, &q("4", 1), &cap, &o).unwrap().report.fails());
        assert!(is_divisible(&m, &q("3", 2), &cap, &o).unwrap().report.fails());
        assert!(is_divisible(&m, &q("3", 3), &cap, &o).unwrap().report.holds());
    }

    #[test]
    fn wedgefull_example() {
        let m = CuModel::lsc(FinitePoset::antichain(2), ScalarKind::NBar);
        let e = |s: &str| m.parse_element(s).unwrap();
        let r = verify_wedgefull(&m, &e("(3,3)"), &[e("(3,1)"), e("(1,3)")], 3).unwrap();
        assert!(r.holds());
        assert_eq!(r.facts["N"], "5");
        assert_eq!(r.facts["minimal_N"], "3");
    }

    #[test]
    fn softness() {
        let o = CheckOptions::default();
        let nbar = CuModel::scalar(ScalarKind::NBar);
        let cap = Cap::full(&nbar, 4);
        assert!(is_soft(&nbar, &nbar.parse_element("inf").unwrap(), &cap, &o)
            .unwrap()
            .holds());
        assert!(is_soft(&nbar, &nbar.parse_element("3").unwrap(), &cap, &o)
            .unwrap()
            .fails());
        let z = CuModel::scalar(ScalarKind::ZCu);
        let zc = Cap::full(&z, 4);
        assert!(is_soft(&z, &z.parse_element("s2").unwrap(), &zc, &o).unwrap().holds());
        let w = find_small_soft(&z, &z.parse_element("4").unwrap(), 2, &zc, &o).unwrap();
        assert_eq!(w, Some(z.parse_element("s2").unwrap()));
    }
}
