//! Rank functions `x̂(λ) = λ(x)`, chisels and infimum preservation.

use std::time::Instant;

use num_rational::Rational64;
use num_traits::{Signed, Zero};
use serde::{Deserialize, Serialize};

use super::functional::{eval, grid_functionals, is_extreme, rank_basis, ray_coefficient, Functional};
use crate::axioms::{finish, new_report};
use crate::cap::{Cap, CapIndex};
use crate::error::{CuError, Result};
use crate::ext::Ext;
use crate::model::{CuModel, Element};
use crate::report::{el, CheckReport, Instance, Item};
use crate::scalar::Scalar;

/// A function on the functional cone, recorded by its values on
/// [`rank_basis`]. On Lsc models these are the values per point; on
/// tables, the values on each nonzero functional.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct RankFunction {
    pub values: Vec<Ext>,
}

impl RankFunction {
    pub fn zero(len: usize) -> RankFunction {
        RankFunction {
            values: vec![Ext::ZERO; len],
        }
    }

    pub fn le(&self, other: &RankFunction) -> bool {
        self.values.iter().zip(&other.values).all(|(a, b)| a <= b)
    }

    pub fn plus(&self, other: &RankFunction) -> RankFunction {
        RankFunction {
            values: self.values.iter().zip(&other.values).map(|(&a, &b)| a + b).collect(),
        }
    }

    pub fn scale(&self, c: Ext) -> RankFunction {
        RankFunction {
            values: self.values.iter().map(|&a| a * c).collect(),
        }
    }

    pub fn meet(&self, other: &RankFunction) -> RankFunction {
        RankFunction {
            values: self.values.iter().zip(&other.values).map(|(&a, &b)| a.min(b)).collect(),
        }
    }

    pub fn is_zero(&self) -> bool {
        self.values.iter().all(Ext::is_zero)
    }

    /// `self ≤ (1−ε)·other` for some `ε > 0`, coordinatewise on the basis.
    pub fn strictly_below(&self, other: &RankFunction) -> bool {
        self.values.iter().zip(&other.values).all(|(a, b)| match b {
            Ext::Inf => true,
            _ if b.is_zero() => a.is_zero(),
            _ => a < b,
        })
    }

    /// Full: strictly positive on every nonzero functional.
    pub fn is_full(&self) -> bool {
        self.values.iter().all(|v| !v.is_zero())
    }

    pub fn describe(&self) -> String {
        let v: Vec<String> = self.values.iter().map(|x| x.to_string()).collect();
        if v.len() == 1 {
            v[0].clone()
        } else {
            format!("({})", v.join(","))
        }
    }
}

/// The canonical rank function of `x`.
pub fn rank(model: &CuModel, x: &Element) -> Result<RankFunction> {
    model.check(x)?;
    let basis = rank_basis(model)?;
    Ok(rank_on(model, &basis, x))
}

pub(crate) fn rank_on(model: &CuModel, basis: &[Functional], x: &Element) -> RankFunction {
    RankFunction {
        values: basis.iter().map(|l| eval(model, l, x)).collect(),
    }
}

/// `f(λ)`: linear extension from the point masses on Lsc models; lookup on
/// tables.
pub fn evaluate_rank(model: &CuModel, f: &RankFunction, lambda: &Functional) -> Result<Ext> {
    lambda.check(model)?;
    match (model, lambda) {
        (CuModel::Lsc(m), Functional::Weights(w)) if f.values.len() == m.poset.len() => {
            Ok(w.iter().zip(&f.values).map(|(&a, &b)| a * b).sum())
        }
        (CuModel::Table(_), Functional::Table(_)) => {
            if lambda.is_zero() {
                return Ok(Ext::ZERO);
            }
            let basis = rank_basis(model)?;
            let i = basis
                .iter()
                .position(|b| b == lambda)
                .ok_or_else(|| CuError::NotAFunctional(lambda.describe()))?;
            f.values
                .get(i)
                .copied()
                .ok_or_else(|| CuError::ModelMismatch("rank function length".into()))
        }
        _ => Err(CuError::ModelMismatch(format!("rank function on {}", model.describe()))),
    }
}

/// Parses `5/2`, `inf` or `(1,5/2)` as a rank function.
pub fn parse_rank(model: &CuModel, s: &str) -> Result<RankFunction> {
    let inner = s.trim().trim_start_matches('(').trim_end_matches(')');
    let values = inner
        .split(',')
        .map(|t| t.trim().parse::<Ext>())
        .collect::<std::result::Result<Vec<_>, _>>()?;
    let n = rank_basis(model)?.len();
    if values.len() != n {
        return Err(CuError::Parse(format!(
            "expected {n} rank values, got {}",
            values.len()
        )));
    }
    Ok(RankFunction { values })
}

/// Membership in `L(F(S))`. Lsc models: `L(F(S))` is the monotone
/// `[0, ∞]`-valued functions, and the test also confirms that the elements
/// `x_n(p) = ⌊n·f(p)⌋` (capped at `n²`) give `x̂_n/n ≤ f` and come within
/// `1/resolution` of `f` at `n = resolution`. Tables: `f` must be a rank.
pub fn in_realification(model: &CuModel, f: &RankFunction, resolution: u32) -> Result<bool> {
    match model {
        CuModel::Lsc(m) => {
            if f.values.len() != m.poset.len() {
                return Err(CuError::ModelMismatch("rank function length".into()));
            }
            if !m.poset.strict_pairs().all(|(i, j)| f.values[i] <= f.values[j]) {
                return Ok(false);
            }
            let n = resolution.max(1) as i64;
            let nn = Rational64::from_integer(n);
            let term: Vec<Scalar> = f
                .values
                .iter()
                .map(|v| match v {
                    Ext::Inf => Scalar::compact((n * n) as u32),
                    Ext::Fin(r) => Scalar::compact((r * nn).floor().to_integer() as u32),
                })
                .collect();
            let term_model = CuModel::lsc(m.poset.clone(), crate::scalar::ScalarKind::NBar);
            let x = Element::values(term);
            if !term_model.contains(&x) {
                return Ok(false);
            }
            let close = x.as_values().iter().zip(&f.values).all(|(s, v)| {
                let approx = s.rank().scale(Rational64::new(1, n));
                match v {
                    Ext::Inf => approx >= Ext::int(n),
                    Ext::Fin(r) => approx <= *v && (r - approx.finite().unwrap()) <= Rational64::new(1, n),
                }
            });
            Ok(close)
        }
        CuModel::Table(t) => {
            let basis = rank_basis(model)?;
            Ok((0..t.len()).any(|i| rank_on(model, &basis, &Element::Index(i as u32)) == *f))
        }
        _ => Err(CuError::Unsupported(format!("realification of {}", model.describe()))),
    }
}

/// The chisel at an extreme, densely finite functional.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Chisel {
    pub lambda: Functional,
    /// `σ_λ` on the rank basis.
    pub function: RankFunction,
    /// Membership in `L(F(S))` at resolution 64.
    pub in_realification: bool,
}

impl Chisel {
    /// `σ_λ(μ)` by definition: `0` at `0`, `c` on `μ = cλ`, `∞` otherwise.
    pub fn value(&self, mu: &Functional) -> Ext {
        if mu.is_zero() {
            return Ext::ZERO;
        }
        if self.lambda.is_zero() {
            return Ext::Inf;
        }
        match ray_coefficient(mu, &self.lambda) {
            Some(c) => Ext::Fin(c),
            None => Ext::Inf,
        }
    }
}

/// Chisel resolution for the membership test.
pub const CHISEL_RESOLUTION: u32 = 64;

/// `σ_λ` for extreme, densely finite `λ` on an Lsc model (zero or `c·δ_p`),
/// with extremality verified on the grid of functionals.
pub fn chisel(model: &CuModel, lambda: &Functional) -> Result<Chisel> {
    lambda.check(model)?;
    let CuModel::Lsc(m) = model else {
        return Err(CuError::Unsupported(format!("chisels on {}", model.describe())));
    };
    let grid = grid_functionals(model, 4)?;
    if !is_extreme(model, lambda, &grid)? {
        return Err(CuError::Precondition(format!(
            "{} is not extreme and densely finite",
            lambda.describe()
        )));
    }
    let n = m.poset.len();
    let function = match lambda.values().iter().position(|w| !w.is_zero()) {
        None => RankFunction {
            values: vec![Ext::Inf; n],
        },
        Some(p) => {
            let c = lambda.values()[p].finite().expect("densely finite");
            RankFunction {
                values: (0..n)
                    .map(|q| if q == p { Ext::Fin(c.recip()) } else { Ext::Inf })
                    .collect(),
            }
        }
    };
    let in_real = in_realification(model, &function, CHISEL_RESOLUTION)?;
    Ok(Chisel {
        lambda: lambda.clone(),
        function,
        in_realification: in_real,
    })
}

/// Additivity and homogeneity of `σ_λ` on a grid of functionals, compared
/// with its linear extension from the basis.
pub fn check_chisel_linearity(model: &CuModel, ch: &Chisel, grid: &[Functional]) -> Result<CheckReport> {
    let mut r = CheckReport::new("chisel-linearity", model, "grid");
    for mu in grid {
        r.stats.tuples += 1;
        let lin = evaluate_rank(model, &ch.function, mu)?;
        if lin != ch.value(mu) {
            r.fail(Instance::new(
                model,
                "chisel-linear",
                vec![("mu", Item::Text(mu.describe()))],
            ));
        }
        for c in [Rational64::new(1, 2), Rational64::from_integer(3)] {
            if ch.value(&mu.scale(Ext::Fin(c))) != ch.value(mu).scale(c) {
                r.fail(Instance::new(
                    model,
                    "chisel-homogeneous",
                    vec![("mu", Item::Text(mu.describe()))],
                ));
            }
        }
    }
    for (a, b) in grid.iter().zip(grid.iter().rev()).take(grid.len().min(256)) {
        if ch.value(&a.plus(b)) != ch.value(a) + ch.value(b) {
            r.fail(Instance::new(
                model,
                "chisel-additive",
                vec![("mu", Item::Text(a.describe())), ("nu", Item::Text(b.describe()))],
            ));
        }
    }
    Ok(r)
}

/// `(x∧y)^ = x̂ ∧ ŷ` and `(n(x∧y))^ = (nx ∧ ny)^` for `n ≤ 4` on the cap.
/// Pairs where `n(x∧y) ≠ nx∧ny` although the ranks agree are recorded as
/// witnesses.
pub fn check_hat_preserves_inf(model: &CuModel, cap: &Cap) -> Result<CheckReport> {
    let start = Instant::now();
    let basis = rank_basis(model)?;
    let idx = CapIndex::new(model, cap);
    let mut r = new_report("hat-preserves-inf", &idx);
    let hat = |x: &Element| rank_on(model, &basis, x);
    let mut differ = 0u64;
    let n = idx.cap_elements().len();
    for i in 0..n {
        for j in i..n {
            let (x, y) = (idx.elem(i), idx.elem(j));
            let Some(m) = model.meet(x, y) else {
                r.inconclusive(format!("{} and {} have no infimum", idx.fmt(i), idx.fmt(j)));
                continue;
            };
            r.stats.tuples += 1;
            if hat(&m) != hat(x).meet(&hat(y)) {
                r.fail(Instance::new(model, "hat-inf", vec![("x", el(x)), ("y", el(y))]));
            }
            for k in 2..=4u64 {
                let (kx, ky) = (model.times(x, k), model.times(y, k));
                let Some(km) = model.meet(&kx, &ky) else {
                    r.inconclusive(format!("{k}x and {k}y have no infimum"));
                    continue;
                };
                let mk = model.times(&m, k);
                if hat(&mk) != hat(&km) {
                    r.fail(Instance::new(
                        model,
                        "multiple-inf",
                        vec![("x", el(x)), ("y", el(y)), ("n", Item::Count(k))],
                    ));
                } else if mk != km {
                    differ += 1;
                    r.witness(Instance::new(
                        model,
                        "ranks-equal-elements-differ",
                        vec![
                            ("x", el(x)),
                            ("y", el(y)),
                            ("n", Item::Count(k)),
                            ("n(x∧y)", el(&mk)),
                            ("nx∧ny", el(&km)),
                        ],
                    ));
                }
            }
        }
    }
    r.fact("elementwise_multiple_inf_failures", differ);
    Ok(finish(r, start))
}

/// Strict-gap scaling helper: `c·f` for a nonnegative rational `c`.
pub fn scale_rank(f: &RankFunction, c: Rational64) -> RankFunction {
    debug_assert!(!c.is_negative());
    if c.is_zero() {
        return RankFunction::zero(f.values.len());
    }
    f.scale(Ext::Fin(c))
}
