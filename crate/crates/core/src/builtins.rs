//! Built-in models and a small-monoid miner for counterexample tables.

use itertools::Itertools;

use crate::axioms::{o5_on, riesz_on};
use crate::cap::{Cap, CapIndex};
use crate::error::{CuError, Result};
use crate::model::{CuModel, TableModel};
use crate::poset::FinitePoset;
use crate::scalar::ScalarKind;

pub const BUILTIN_NAMES: &[&str] = &[
    "nbar",
    "nbar2",
    "nbar3",
    "chain2",
    "chain3",
    "zcu",
    "zcu-chain2",
    "extrational",
    "torsion",
    "torsion-table",
    "o5-violator",
    "riesz-violator",
];

/// Looks up a built-in model by name.
pub fn builtin(name: &str) -> Result<CuModel> {
    let lsc = |p: FinitePoset, k: ScalarKind| CuModel::lsc(p, k);
    Ok(match name {
        "nbar" => CuModel::scalar(ScalarKind::NBar),
        "nbar2" => lsc(FinitePoset::antichain(2), ScalarKind::NBar),
        "nbar3" => lsc(FinitePoset::antichain(3), ScalarKind::NBar),
        "chain2" => lsc(FinitePoset::chain(2), ScalarKind::NBar),
        "chain3" => lsc(FinitePoset::chain(3), ScalarKind::NBar),
        "zcu" => CuModel::scalar(ScalarKind::ZCu),
        "zcu-chain2" => lsc(FinitePoset::chain(2), ScalarKind::ZCu),
        "extrational" => CuModel::scalar(ScalarKind::ExtRational),
        "torsion" => CuModel::scalar(ScalarKind::Torsion),
        "torsion-table" => torsion_table(3),
        "o5-violator" => o5_violator(),
        "riesz-violator" => riesz_violator(),
        _ => {
            return Err(CuError::Parse(format!(
                "unknown built-in model {name:?} (known: {})",
                BUILTIN_NAMES.join(", ")
            )))
        }
    })
}

/// Lsc models over every poset with at most `max_points` points (up to
/// isomorphism) with the given scalar kind.
pub fn lsc_over_small_posets(max_points: usize, kind: ScalarKind) -> Vec<CuModel> {
    (1..=max_points)
        .flat_map(FinitePoset::all_up_to_iso)
        .map(|p| CuModel::lsc(p, kind))
        .collect()
}

/// The models the axiom suite is run on: ℕ̄, ℕ̄², Lsc over all posets with at
/// most three points over ℕ̄, the ZCu scalar and the torsion model.
pub fn axiom_suite_models() -> Vec<CuModel> {
    let mut out = vec![builtin("nbar").unwrap(), builtin("nbar2").unwrap()];
    out.extend(lsc_over_small_posets(3, ScalarKind::NBar));
    out.push(builtin("zcu").unwrap());
    out.push(builtin("torsion").unwrap());
    out
}

/// The monoid generated by `e, f` with `2e = 2f`, in normal forms
/// `k·2e + r` with `r ∈ {0, e, f, e+f}` and `k ≤ levels`, plus an absorbing
/// top `T` receiving every overflow. The order is the algebraic one.
pub fn torsion_table(levels: u32) -> CuModel {
    // (k, has_e, has_f)
    let forms: Vec<(u32, bool, bool)> = (0..=levels)
        .cartesian_product([(false, false), (true, false), (false, true), (true, true)])
        .map(|(k, (e, f))| (k, e, f))
        .collect();
    let n = forms.len() + 1;
    let top = forms.len();
    let name = |&(k, e, f): &(u32, bool, bool)| {
        let mut parts = Vec::new();
        if k > 0 {
            parts.push(if k == 1 {
                "2e".to_string()
            } else {
                format!("{}e", 2 * k)
            });
        }
        if e {
            parts.push("e".into());
        }
        if f {
            parts.push("f".into());
        }
        if parts.is_empty() {
            "0".into()
        } else {
            parts.join("+")
        }
    };
    let mut names: Vec<String> = forms.iter().map(name).collect();
    names.push("T".into());
    let index = |k: u32, e: bool, f: bool| -> usize {
        if k > levels {
            top
        } else {
            forms.iter().position(|&x| x == (k, e, f)).unwrap()
        }
    };
    let add: Vec<Vec<u32>> = (0..n)
        .map(|i| {
            (0..n)
                .map(|j| {
                    if i == top || j == top {
                        return top as u32;
                    }
                    let (a, b) = (forms[i], forms[j]);
                    let ce = a.1 as u32 + b.1 as u32;
                    let cf = a.2 as u32 + b.2 as u32;
                    let k = a.0 + b.0 + ce / 2 + cf / 2;
                    index(k, ce % 2 == 1, cf % 2 == 1) as u32
                })
                .collect()
        })
        .collect();
    let order: Vec<(usize, usize)> = (0..n)
        .cartesian_product(0..n)
        .map(|(i, j)| (i, add[i][j] as usize))
        .collect();
    CuModel::Table(TableModel::new(names, add, &order).expect("torsion normal forms form an ordered monoid"))
}

/// Labelled partial orders on `n` points, in relation-mask order.
fn labelled_posets(n: usize) -> Vec<FinitePoset> {
    let labels: Vec<String> = (0..n).map(|i| format!("m{i}")).collect();
    let pairs: Vec<(usize, usize)> = (0..n).cartesian_product(0..n).filter(|(i, j)| i != j).collect();
    (0u64..(1 << pairs.len()))
        .filter_map(|mask| {
            let rel: Vec<_> = pairs
                .iter()
                .enumerate()
                .filter(|(b, _)| mask >> b & 1 == 1)
                .map(|(_, &p)| p)
                .collect();
            FinitePoset::new(labels.clone(), &rel).ok()
        })
        .collect()
}

/// The table with zero, the points of `middle` and an absorbing top `T`;
/// every sum of two nonzero elements is `T`. Such tables are always
/// associative and monotone, so the search reduces to the order.
pub fn absorbing_table(middle: &FinitePoset) -> CuModel {
    let k = middle.len();
    let n = k + 2;
    let top = n - 1;
    let mut names = vec!["0".to_string()];
    names.extend(middle.labels().iter().cloned());
    names.push("T".into());
    let add: Vec<Vec<u32>> = (0..n)
        .map(|i| {
            (0..n)
                .map(|j| {
                    if i == 0 {
                        j as u32
                    } else if j == 0 {
                        i as u32
                    } else {
                        top as u32
                    }
                })
                .collect()
        })
        .collect();
    let mut order: Vec<(usize, usize)> = (1..n).flat_map(|i| [(0, i), (i, top)]).collect();
    order.extend(middle.strict_pairs().map(|(i, j)| (i + 1, j + 1)));
    CuModel::Table(TableModel::new(names, add, &order).expect("absorbing tables are ordered monoids"))
}

/// Exhaustive search over all commutative monoid tables with `n` elements
/// (element 0 neutral) and all compatible orders with 0 least, returning the
/// first valid model satisfying `pred`, in table-then-order enumeration order.
pub fn mine_small_monoid(n: usize, pred: impl Fn(&CuModel) -> bool) -> Option<CuModel> {
    let names: Vec<String> = (0..n)
        .map(|i| if i == 0 { "0".into() } else { format!("s{i}") })
        .collect();
    let free: Vec<(usize, usize)> = (1..n).flat_map(|i| (i..n).map(move |j| (i, j))).collect();
    let posets = labelled_posets(n - 1);
    let total = (n as u64).pow(free.len() as u32);
    for code in 0..total {
        let mut add = vec![vec![0u32; n]; n];
        for (i, row) in add.iter_mut().enumerate() {
            row[0] = i as u32;
        }
        for (j, v) in add[0].iter_mut().enumerate() {
            *v = j as u32;
        }
        let mut c = code;
        for &(i, j) in &free {
            let v = (c % n as u64) as u32;
            c /= n as u64;
            add[i][j] = v;
            add[j][i] = v;
        }
        for p in &posets {
            let mut order: Vec<(usize, usize)> = (1..n).map(|i| (0, i)).collect();
            order.extend(p.strict_pairs().map(|(i, j)| (i + 1, j + 1)));
            if let Ok(t) = TableModel::new(names.clone(), add.clone(), &order) {
                let m = CuModel::Table(t);
                if pred(&m) {
                    return Some(m);
                }
            }
        }
    }
    None
}

fn fails_o5(m: &CuModel) -> bool {
    o5_on(&CapIndex::with_sums(m, &Cap::full(m, 0))).fails()
}

fn fails_riesz(m: &CuModel) -> bool {
    riesz_on(&CapIndex::new(m, &Cap::full(m, 0))).fails()
}

/// The first small monoid (by exhaustive search, at most four elements)
/// violating O5.
pub fn o5_violator() -> CuModel {
    (2..=4)
        .find_map(|n| mine_small_monoid(n, fails_o5))
        .expect("a four-element monoid violates O5")
}

/// The first absorbing table over a poset of at most four middle points
/// violating Riesz interpolation.
pub fn riesz_violator() -> CuModel {
    (0..=4)
        .flat_map(FinitePoset::all_up_to_iso)
        .map(|p| absorbing_table(&p))
        .find(fails_riesz)
        .expect("the four-point crown gives a six-element violator")
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::Element;

    #[test]
    fn torsion_table_relations() {
        let m = torsion_table(2);
        let e = m.parse_element("e").unwrap();
        let f = m.parse_element("f").unwrap();
        assert_eq!(m.plus(&e, &e), m.plus(&f, &f));
        assert_ne!(e, f);
        assert!(!m.le(&e, &f));
    }

    #[test]
    fn mined_violators() {
        let o5 = o5_violator();
        assert!(fails_o5(&o5));
        let r = riesz_violator();
        let CuModel::Table(t) = &r else { panic!() };
        assert_eq!(t.len(), 6);
        assert!(fails_riesz(&r));
        let ix = |i: u32| Element::Index(i);
        assert!((0..6).any(|i| (0..6).any(|j| r.meet(&ix(i), &ix(j)).is_none())));
    }

    #[test]
    fn every_builtin_resolves() {
        for n in BUILTIN_NAMES {
            builtin(n).unwrap();
        }
        assert_eq!(axiom_suite_models().len(), 12);
    }
}
