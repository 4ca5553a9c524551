//! Edwards' condition:
//! `inf{λ₁(x) + λ₂(y) : λ = λ₁ + λ₂} = sup{λ(z) : z ≤ x, y}`.

use std::time::Instant;

use itertools::Itertools;
use num_rational::Rational64;

use super::functional::{eval, is_densely_finite, table_functionals, Functional};
use crate::axioms::{finish, new_report};
use crate::cap::{Cap, CapIndex};
use crate::error::{CuError, Result};
use crate::ext::Ext;
use crate::model::CuModel;
use crate::report::{el, CheckReport, Instance, Item};

/// Split of one weight: the part assigned to `λ₁` (the rest goes to `λ₂`).
fn split_options(w: Ext, interior: bool) -> Vec<(Ext, Ext)> {
    let mut out = vec![(w, Ext::ZERO), (Ext::ZERO, w)];
    if interior {
        match w {
            Ext::Fin(r) if r != Rational64::from_integer(0) => {
                for t in [Rational64::new(1, 4), Rational64::new(1, 2), Rational64::new(3, 4)] {
                    out.push((Ext::Fin(r * t), Ext::Fin(r * (Rational64::from_integer(1) - t))));
                }
            }
            Ext::Inf => {
                out.push((Ext::Inf, Ext::Inf));
                out.push((Ext::Inf, Ext::ONE));
                out.push((Ext::ONE, Ext::Inf));
            }
            _ => {}
        }
    }
    out
}

/// Checks Edwards' condition for `λ` on every pair of cap elements.
///
/// On Lsc models the infimum over decompositions is a linear program over
/// weight splits `w = w₁ + w₂`; it is evaluated at the vertices (each
/// weight entirely on one side) and the vertex minimum is confirmed against
/// interior splits. On tables every decomposition among the enumerated
/// functionals is tried. For extreme, densely finite `λ` the simplified
/// form `min{λ(x), λ(y)} = sup{λ(z) : z ≤ x, y}` is checked as well.
pub fn check_edwards(model: &CuModel, lambda: &Functional, cap: &Cap) -> Result<CheckReport> {
    let start = Instant::now();
    lambda.check(model)?;
    let idx = CapIndex::new(model, cap);
    let mut r = new_report("edwards", &idx);
    r.fact("lambda", lambda.describe());
    let n = idx.cap_elements().len();
    let vals: Vec<Ext> = (0..n).map(|i| eval(model, lambda, idx.elem(i))).collect();
    let extreme = is_densely_finite(model, lambda)? && lambda.values().iter().filter(|w| !w.is_zero()).count() <= 1;
    let extreme = extreme && matches!(model, CuModel::Lsc(_));
    r.fact("extreme", extreme);

    enum Lhs {
        Splits {
            vertices: Vec<Vec<(Ext, Ext)>>,
            interior: Vec<Vec<(Ext, Ext)>>,
        },
        Pairs(Vec<(Functional, Functional)>),
    }
    let lhs_kind = match (model, lambda) {
        (CuModel::Lsc(_), Functional::Weights(w)) => {
            let vertices = w
                .iter()
                .map(|&x| split_options(x, false))
                .multi_cartesian_product()
                .collect();
            let interior = w
                .iter()
                .map(|&x| split_options(x, true))
                .multi_cartesian_product()
                .collect();
            Lhs::Splits { vertices, interior }
        }
        (CuModel::Table(t), _) => {
            let all = table_functionals(t)?;
            let pairs = all
                .iter()
                .cartesian_product(all.iter())
                .filter(|(a, b)| a.plus(b) == *lambda)
                .map(|(a, b)| (a.clone(), b.clone()))
                .collect();
            Lhs::Pairs(pairs)
        }
        _ => {
            return Err(CuError::Unsupported(format!(
                "Edwards' condition on {}",
                model.describe()
            )))
        }
    };
    let split_value = |s: &[(Ext, Ext)], i: usize, j: usize| -> Ext {
        let (x, y) = (idx.elem(i).as_values(), idx.elem(j).as_values());
        s.iter()
            .zip(x.iter().zip(y))
            .map(|(&(a, b), (u, v))| a * u.rank() + b * v.rank())
            .sum()
    };
    let mut vertex_checks = 0u64;
    for i in 0..n {
        for j in i..n {
            r.stats.tuples += 1;
            let lhs = match &lhs_kind {
                Lhs::Splits { vertices, interior } => {
                    let vmin = vertices.iter().map(|s| split_value(s, i, j)).min().unwrap();
                    let imin = interior.iter().map(|s| split_value(s, i, j)).min().unwrap();
                    vertex_checks += 1;
                    if imin < vmin {
                        r.fail(Instance::new(
                            model,
                            "vertex-attainment",
                            vec![("x", el(idx.elem(i))), ("y", el(idx.elem(j)))],
                        ));
                    }
                    vmin
                }
                Lhs::Pairs(pairs) => pairs
                    .iter()
                    .map(|(a, b)| eval(model, a, idx.elem(i)) + eval(model, b, idx.elem(j)))
                    .min()
                    .unwrap_or(Ext::Inf),
            };
            let rhs = (0..n)
                .filter(|&z| idx.le(z, i) && idx.le(z, j))
                .map(|z| vals[z])
                .max()
                .unwrap();
            let roles = || {
                vec![
                    ("x", el(idx.elem(i))),
                    ("y", el(idx.elem(j))),
                    ("inf", Item::Ratio(lhs)),
                    ("sup", Item::Ratio(rhs)),
                ]
            };
            if lhs != rhs {
                r.fail(Instance::new(model, "edwards", roles()));
            }
            if extreme && vals[i].min(vals[j]) != rhs {
                r.fail(Instance::new(model, "edwards-min-form", roles()));
            }
        }
    }
    r.fact("vertex_attainment_checks", vertex_checks);
    Ok(finish(r, start))
}
