//! Functionals: additive, order- and sup-preserving maps into `[0, ∞]`.

use std::time::Instant;

use num_rational::Rational64;
use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};

use crate::axioms::{finish, horizon, new_report};
use crate::cap::{Cap, CapIndex};
use crate::error::{CuError, Result};
use crate::ext::{farey_grid, Ext};
use crate::ideal::Ideal;
use crate::model::{CuModel, Element, TableModel};
use crate::report::{el, CheckReport, Instance, Item};

/// A functional on an Lsc model (weights per point, `λ(f) = Σ w(p)·f(p)`)
/// or on a finite table (one value per element).
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Functional {
    Weights(Vec<Ext>),
    Table(Vec<Ext>),
}

/// Largest table handled by exhaustive functional enumeration.
pub const MAX_TABLE_FOR_FUNCTIONALS: usize = 20;

impl Functional {
    pub fn values(&self) -> &[Ext] {
        match self {
            Functional::Weights(v) | Functional::Table(v) => v,
        }
    }

    pub fn is_zero(&self) -> bool {
        self.values().iter().all(Ext::is_zero)
    }

    pub fn scale(&self, c: Ext) -> Functional {
        let v = self.values().iter().map(|&w| w * c).collect();
        match self {
            Functional::Weights(_) => Functional::Weights(v),
            Functional::Table(_) => Functional::Table(v),
        }
    }

    pub fn plus(&self, other: &Functional) -> Functional {
        let v = self.values().iter().zip(other.values()).map(|(&a, &b)| a + b).collect();
        match self {
            Functional::Weights(_) => Functional::Weights(v),
            Functional::Table(_) => Functional::Table(v),
        }
    }

    pub fn describe(&self) -> String {
        let inner: Vec<String> = self.values().iter().map(|v| v.to_string()).collect();
        match self {
            Functional::Weights(_) => format!("w({})", inner.join(",")),
            Functional::Table(_) => format!("table({})", inner.join(",")),
        }
    }

    /// Checks the representation matches the model.
    pub fn check(&self, model: &CuModel) -> Result<()> {
        match (self, model) {
            (Functional::Weights(w), CuModel::Lsc(m)) if w.len() == m.poset.len() => Ok(()),
            (Functional::Table(v), CuModel::Table(t)) if v.len() == t.len() => {
                if table_functional_ok(t, v) {
                    Ok(())
                } else {
                    Err(CuError::NotAFunctional(self.describe()))
                }
            }
            _ => Err(CuError::ModelMismatch(format!(
                "{} is not a functional on {}",
                self.describe(),
                model.describe()
            ))),
        }
    }
}

fn table_functional_ok(t: &TableModel, v: &[Ext]) -> bool {
    let n = t.len();
    v[0].is_zero() && (0..n).all(|i| (0..n).all(|j| v[t.sum(i, j)] == v[i] + v[j] && (!t.le(i, j) || v[i] <= v[j])))
}

/// `λ(x)` without model checks; `0·∞ = 0`.
pub fn eval(model: &CuModel, lambda: &Functional, x: &Element) -> Ext {
    match (lambda, model) {
        (Functional::Weights(w), CuModel::Lsc(_)) => w.iter().zip(x.as_values()).map(|(&wp, v)| wp * v.rank()).sum(),
        (Functional::Table(v), CuModel::Table(_)) => v[x.as_index()],
        _ => unreachable!("functional checked against the model"),
    }
}

/// `λ(x)`, exact.
pub fn evaluate(model: &CuModel, lambda: &Functional, x: &Element) -> Result<Ext> {
    lambda.check(model)?;
    model.check(x)?;
    Ok(eval(model, lambda, x))
}

/// Every functional on a finite table: additivity forces values in `{0, ∞}`
/// (each element satisfies `nx = (n+k)x`), so a functional is determined by
/// its zero set, a hereditary submonoid.
pub fn table_functionals(t: &TableModel) -> Result<Vec<Functional>> {
    let n = t.len();
    if n > MAX_TABLE_FOR_FUNCTIONALS {
        return Err(CuError::Unsupported(format!(
            "functional enumeration on tables with more than {MAX_TABLE_FOR_FUNCTIONALS} elements"
        )));
    }
    let mut out = Vec::new();
    // bit i set = λ(i) = 0; element 0 is always in the zero set
    for rest in 0u32..(1 << (n - 1)) {
        let zero = |i: usize| i == 0 || rest >> (i - 1) & 1 == 1;
        let hereditary = (0..n).all(|j| !zero(j) || (0..n).all(|i| !t.le(i, j) || zero(i)));
        let closed = hereditary && (0..n).all(|i| !zero(i) || (0..n).all(|j| !zero(j) || zero(t.sum(i, j))));
        if closed {
            out.push(Functional::Table(
                (0..n).map(|i| if zero(i) { Ext::ZERO } else { Ext::Inf }).collect(),
            ));
        }
    }
    out.sort();
    Ok(out)
}

/// Generators of the functional cone: for Lsc models the zero functional,
/// the point masses `δ_p` and the `∞`-weighted masses; for tables every
/// functional.
pub fn functional_basis(model: &CuModel) -> Result<Vec<Functional>> {
    match model {
        CuModel::Lsc(m) => {
            let n = m.poset.len();
            let mass =
                |p: usize, w: Ext| Functional::Weights((0..n).map(|q| if q == p { w } else { Ext::ZERO }).collect());
            let mut out = vec![Functional::Weights(vec![Ext::ZERO; n])];
            out.extend((0..n).map(|p| mass(p, Ext::ONE)));
            out.extend((0..n).map(|p| mass(p, Ext::Inf)));
            Ok(out)
        }
        CuModel::Table(t) => table_functionals(t),
        _ => Err(CuError::Unsupported(format!("functionals on {}", model.describe()))),
    }
}

/// The functionals rank functions are recorded against: point masses for
/// Lsc models, the nonzero functionals for tables. Comparisons of rank
/// functions are decided coordinatewise on this set.
pub fn rank_basis(model: &CuModel) -> Result<Vec<Functional>> {
    match model {
        CuModel::Lsc(m) => {
            let n = m.poset.len();
            Ok((0..n)
                .map(|p| Functional::Weights((0..n).map(|q| if q == p { Ext::ONE } else { Ext::ZERO }).collect()))
                .collect())
        }
        CuModel::Table(t) => Ok(table_functionals(t)?.into_iter().filter(|f| !f.is_zero()).collect()),
        _ => Err(CuError::Unsupported(format!("functionals on {}", model.describe()))),
    }
}

/// Weight functionals with weights in `{a/b : b ≤ denominator} ∩ [0, 1]`
/// plus `∞` at every point (Lsc), or all functionals (tables).
pub fn grid_functionals(model: &CuModel, denominator: u32) -> Result<Vec<Functional>> {
    match model {
        CuModel::Lsc(m) => {
            let mut values: Vec<Ext> = farey_grid(denominator.max(1) as i64, Rational64::zero(), Rational64::one())
                .into_iter()
                .map(Ext::Fin)
                .collect();
            values.push(Ext::Inf);
            let mut out: Vec<Vec<Ext>> = vec![Vec::new()];
            for _ in 0..m.poset.len() {
                out = out
                    .into_iter()
                    .flat_map(|w| {
                        values.iter().map(move |&v| {
                            let mut w = w.clone();
                            w.push(v);
                            w
                        })
                    })
                    .collect();
            }
            Ok(out.into_iter().map(Functional::Weights).collect())
        }
        CuModel::Table(t) => table_functionals(t),
        _ => Err(CuError::Unsupported(format!("functionals on {}", model.describe()))),
    }
}

/// Closed form on Lsc models: densely finite exactly when every weight is
/// finite. Tables are decided directly: `λ(x) < ∞` whenever `x ≪ x̃`.
pub fn is_densely_finite(model: &CuModel, lambda: &Functional) -> Result<bool> {
    lambda.check(model)?;
    Ok(match (model, lambda) {
        (CuModel::Lsc(_), Functional::Weights(w)) => w.iter().all(Ext::is_finite),
        (CuModel::Table(t), Functional::Table(v)) => {
            (0..t.len()).all(|i| v[i].is_finite() || !(0..t.len()).any(|j| t.le(i, j)))
        }
        _ => unreachable!(),
    })
}

/// Densely finite check by definition on the cap.
pub fn densely_finite_on_cap(model: &CuModel, lambda: &Functional, cap: &Cap) -> Result<bool> {
    lambda.check(model)?;
    let idx = CapIndex::new(model, cap);
    Ok((0..idx.len()).all(|i| eval(model, lambda, idx.elem(i)).is_finite() || !(0..idx.len()).any(|j| idx.wb(i, j))))
}

/// Extreme in the sense of the definition, tested on a grid of functionals:
/// `λ` densely finite and every grid `μ ≤ Cλ` is `0` or a multiple of `λ`.
pub fn is_extreme(model: &CuModel, lambda: &Functional, grid: &[Functional]) -> Result<bool> {
    if !is_densely_finite(model, lambda)? {
        return Ok(false);
    }
    let lv = lambda.values();
    for mu in grid {
        let mv = mu.values();
        // μ ≤ Cλ for some C: μ vanishes where λ does and is finite where λ is
        let dominated = mv
            .iter()
            .zip(lv)
            .all(|(m, l)| (!l.is_zero() || m.is_zero()) && (!l.is_finite() || m.is_finite()));
        if !dominated || mu.is_zero() {
            continue;
        }
        if ray_coefficient(mu, lambda).is_none() {
            return Ok(false);
        }
    }
    Ok(true)
}

/// `c` with `μ = c·λ`, `c ∈ (0, ∞)`, if any.
pub fn ray_coefficient(mu: &Functional, lambda: &Functional) -> Option<Rational64> {
    let mut c: Option<Rational64> = None;
    for (m, l) in mu.values().iter().zip(lambda.values()) {
        match (m, l) {
            (Ext::Fin(a), Ext::Fin(b)) if b.is_zero() => {
                if !a.is_zero() {
                    return None;
                }
            }
            (Ext::Fin(a), Ext::Fin(b)) => {
                let r = a / b;
                if r.is_zero() || c.is_some_and(|c| c != r) {
                    return None;
                }
                c = Some(r);
            }
            (Ext::Inf, Ext::Inf) => {}
            _ => return None,
        }
    }
    c
}

/// Extends a functional on an ideal by `∞` off the ideal.
///
/// On Lsc models the ideal must come from an open set `U` (or have a
/// `{0, ∞}`-valued largest element); the result keeps the weights on `U`
/// and puts `∞` elsewhere.
pub fn extend_functional(model: &CuModel, ideal: &Ideal, lambda: &Functional) -> Result<Functional> {
    match (model, lambda) {
        (CuModel::Lsc(m), Functional::Weights(w)) => {
            if w.len() != m.poset.len() {
                return Err(CuError::ModelMismatch(lambda.describe()));
            }
            let omega = ideal.omega.as_values();
            if omega.iter().any(|v| !v.is_zero() && v.is_finite()) {
                return Err(CuError::Unsupported(
                    "ideals whose largest element is not {0,∞}-valued".into(),
                ));
            }
            Ok(Functional::Weights(
                w.iter()
                    .zip(omega)
                    .map(|(&wp, o)| if o.is_zero() { Ext::Inf } else { wp })
                    .collect(),
            ))
        }
        (CuModel::Table(t), Functional::Table(v)) => {
            if v.len() != t.len() {
                return Err(CuError::ModelMismatch(lambda.describe()));
            }
            let inside: Vec<bool> = (0..t.len())
                .map(|i| ideal.contains(model, &Element::Index(i as u32)))
                .collect();
            // λ must be a functional on I
            for i in (0..t.len()).filter(|&i| inside[i]) {
                for j in (0..t.len()).filter(|&j| inside[j]) {
                    if v[t.sum(i, j)] != v[i] + v[j] || (t.le(i, j) && v[i] > v[j]) {
                        return Err(CuError::NotAFunctional(format!("{} on the ideal", lambda.describe())));
                    }
                }
            }
            let ext = Functional::Table((0..t.len()).map(|i| if inside[i] { v[i] } else { Ext::Inf }).collect());
            ext.check(model)?;
            Ok(ext)
        }
        _ => Err(CuError::ModelMismatch(format!(
            "{} is not a functional on {}",
            lambda.describe(),
            model.describe()
        ))),
    }
}

/// The functional axioms on the cap: `λ(0) = 0`, additivity, monotonicity,
/// and preservation of suprema along the approximant chains.
pub fn check_functional(model: &CuModel, lambda: &Functional, cap: &Cap) -> Result<CheckReport> {
    let start = Instant::now();
    lambda.check(model)?;
    let idx = CapIndex::new(model, cap);
    let mut r = new_report("functional", &idx);
    r.fact("lambda", lambda.describe());
    let ev = |x: &Element| eval(model, lambda, x);
    if !ev(&model.zero()).is_zero() {
        r.fail(Instance::new(model, "zero", vec![("x", el(&model.zero()))]));
    }
    let vals: Vec<Ext> = (0..idx.len()).map(|i| ev(idx.elem(i))).collect();
    for i in 0..idx.len() {
        for j in 0..idx.len() {
            r.stats.tuples += 1;
            let (x, y) = (idx.elem(i), idx.elem(j));
            if ev(&model.plus(x, y)) != vals[i] + vals[j] {
                r.fail(Instance::new(model, "additive", vec![("x", el(x)), ("y", el(y))]));
            }
            if idx.le(i, j) && vals[i] > vals[j] {
                r.fail(Instance::new(
                    model,
                    "order-preserving",
                    vec![("x", el(x)), ("y", el(y))],
                ));
            }
        }
    }
    let h = horizon(model, cap) as u32;
    for (i, x) in idx.cap_elements().iter().enumerate() {
        let (a, b) = (ev(&model.approximant(x, h)), ev(&model.approximant(x, 2 * h)));
        let ok = match vals[i] {
            // linear growth or already infinite
            Ext::Inf => b == Ext::Inf || b > a,
            Ext::Fin(v) => {
                let bound = Ext::Fin(v * Rational64::new(h as i64 + 1, h as i64 + 2));
                a <= vals[i] && b <= vals[i] && a >= bound
            }
        };
        if !ok {
            r.fail(Instance::new(
                model,
                "sup-preserving",
                vec![("x", el(x)), ("n", Item::Count(h as u64))],
            ));
        }
    }
    Ok(finish(r, start))
}
