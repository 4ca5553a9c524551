use cuntz_core::axioms::*;
use cuntz_core::builtins::{builtin, o5_violator, riesz_violator};
use cuntz_core::report::CheckOptions;
use cuntz_core::{Cap, CapIndex, CuModel, Element, Ext, FinitePoset, Scalar, ScalarKind};
use itertools::Itertools;
use num_rational::Rational64;

fn e(model: &CuModel, s: &str) -> Element {
    model.parse_element(s).unwrap()
}

/// Increasing scalar chains, given by their first `TERMS` terms and their
/// supremum: constant chains, `a + n·b` with `b ≠ 0` (supremum ∞), and soft
/// chains `t·n/(n+1)` converging to `t` from below.
const TERMS: i64 = 48;

#[derive(Clone)]
struct Chain {
    terms: Vec<Scalar>,
    sup: Scalar,
}

fn scalar_chains(kind: ScalarKind, grid: &[Scalar]) -> Vec<Chain> {
    let mut out = Vec::new();
    for &a in grid {
        out.push(Chain {
            terms: vec![a; TERMS as usize],
            sup: a,
        });
        for &b in grid.iter().filter(|b| !b.is_zero() && b.is_finite()) {
            let terms = (0..TERMS).map(|n| a.add(&b.mul(n as u64))).collect();
            out.push(Chain {
                terms,
                sup: Scalar::INF,
            });
        }
        if let (Scalar::Soft(Ext::Fin(t)), true) = (a, kind != ScalarKind::NBar) {
            let terms = (1..=TERMS)
                .map(|n| Scalar::soft(Ext::Fin(t * Rational64::new(n, n + 1))))
                .collect();
            out.push(Chain { terms, sup: a });
        }
    }
    out
}

/// `x ≪ y` by definition over the chain family: every chain whose supremum
/// dominates `y` has a term dominating `x`.
fn oracle_wb(chains: &[Chain], x: &Scalar, y: &Scalar) -> bool {
    chains
        .iter()
        .filter(|c| y.le(&c.sup))
        .all(|c| c.terms.iter().any(|t| x.le(t)))
}

fn zcu_grid() -> Vec<Scalar> {
    let mut g: Vec<Scalar> = (0..=3).map(Scalar::compact).collect();
    g.extend([1, 2, 3, 4, 5, 6].iter().map(|&n| Scalar::soft(Ext::ratio(n, 2))));
    g.push(Scalar::INF);
    g
}

#[test]
fn scalar_way_below_matches_chain_oracle() {
    let nbar: Vec<Scalar> = (0..=4).map(Scalar::compact).chain([Scalar::INF]).collect();
    for (kind, grid) in [(ScalarKind::NBar, nbar), (ScalarKind::ZCu, zcu_grid())] {
        let chains = scalar_chains(kind, &grid);
        for x in &grid {
            for y in &grid {
                assert_eq!(x.way_below(y), oracle_wb(&chains, x, y), "{kind:?}: {x} ≪ {y}");
            }
        }
    }
}

/// On Lsc models chains are taken coordinatewise with a common index and
/// kept when every term is monotone over the poset.
#[test]
fn lsc_way_below_matches_chain_oracle() {
    for (poset, kind, grid) in [
        (
            FinitePoset::chain(2),
            ScalarKind::NBar,
            (0..=2).map(Scalar::compact).chain([Scalar::INF]).collect(),
        ),
        (
            FinitePoset::antichain(2),
            ScalarKind::NBar,
            (0..=2).map(Scalar::compact).chain([Scalar::INF]).collect(),
        ),
        (
            FinitePoset::chain(2),
            ScalarKind::ZCu,
            vec![
                Scalar::ZERO,
                Scalar::compact(1),
                Scalar::soft(Ext::ONE),
                Scalar::soft(Ext::ratio(3, 2)),
                Scalar::INF,
            ],
        ),
    ] {
        let model = CuModel::lsc(poset.clone(), kind);
        let chains1 = scalar_chains(kind, &grid);
        let chains: Vec<(Vec<Element>, Element)> = chains1
            .iter()
            .cartesian_product(&chains1)
            .map(|(a, b)| {
                let terms: Vec<Element> = a
                    .terms
                    .iter()
                    .zip(&b.terms)
                    .map(|(&s, &t)| Element::values([s, t]))
                    .collect();
                (terms, Element::values([a.sup, b.sup]))
            })
            .filter(|(terms, sup)| terms.iter().all(|t| model.contains(t)) && model.contains(sup))
            .collect();
        let elems: Vec<Element> = grid
            .iter()
            .cartesian_product(&grid)
            .map(|(&s, &t)| Element::values([s, t]))
            .filter(|x| model.contains(x))
            .collect();
        for x in &elems {
            for y in &elems {
                let oracle = chains
                    .iter()
                    .filter(|(_, sup)| model.le(y, sup))
                    .all(|(terms, _)| terms.iter().any(|t| model.le(x, t)));
                assert_eq!(
                    model.wb(x, y),
                    oracle,
                    "{}: {} ≪ {}",
                    poset,
                    model.fmt_element(x),
                    model.fmt_element(y)
                );
            }
        }
    }
}

#[test]
fn order_and_addition_examples() {
    let n = builtin("nbar").unwrap();
    assert!(n.leq(&e(&n, "3"), &e(&n, "inf")).unwrap());
    assert_eq!(n.add(&e(&n, "2"), &e(&n, "inf")).unwrap(), e(&n, "inf"));
    let z = builtin("zcu").unwrap();
    assert!(!z.leq(&e(&z, "2"), &e(&z, "Soft(2)")).unwrap());
    assert_eq!(z.add(&e(&z, "1"), &e(&z, "Soft(1/2)")).unwrap(), e(&z, "Soft(3/2)"));
    let c = builtin("chain2").unwrap();
    assert!(c.leq(&e(&c, "(0,2)"), &e(&c, "(1,3)")).unwrap());
    let a = builtin("nbar2").unwrap();
    assert_eq!(a.add(&e(&a, "(2,0)"), &e(&a, "(0,3)")).unwrap(), e(&a, "(2,3)"));
    assert!(a.leq(&e(&a, "(1,1)"), &e(&n, "1")).is_err());
}

#[test]
fn way_below_and_compactness_examples() {
    let n = builtin("nbar").unwrap();
    assert!(n.way_below(&e(&n, "3"), &e(&n, "5")).unwrap());
    assert!(!n.way_below(&e(&n, "inf"), &e(&n, "inf")).unwrap());
    assert!(n.is_compact(&e(&n, "4")).unwrap());
    assert!(!n.is_compact(&e(&n, "inf")).unwrap());
    let z = builtin("zcu").unwrap();
    assert!(!z.is_compact(&e(&z, "Soft(1)")).unwrap());
    let a = builtin("nbar2").unwrap();
    assert!(!a.way_below(&e(&a, "(1,inf)"), &e(&a, "(2,inf)")).unwrap());
}

#[test]
fn sup_chain_and_domination_examples() {
    let n = builtin("nbar").unwrap();
    assert_eq!(n.sup_chain(&e(&n, "0"), &e(&n, "1")).unwrap(), e(&n, "inf"));
    assert_eq!(n.sup_chain(&e(&n, "3"), &e(&n, "0")).unwrap(), e(&n, "3"));
    let a = builtin("nbar2").unwrap();
    assert_eq!(a.sup_chain(&e(&a, "(1,0)"), &e(&a, "(0,1)")).unwrap(), e(&a, "(1,inf)"));
    assert_eq!(
        dominates(&n, &e(&n, "5"), &e(&n, "1"), 16).unwrap(),
        Domination::Finite(5)
    );
    assert_eq!(
        dominates(&a, &e(&a, "(1,1)"), &e(&a, "(1,0)"), 16).unwrap(),
        Domination::No
    );
    assert_eq!(
        dominates(&n, &e(&n, "inf"), &e(&n, "1"), 16).unwrap(),
        Domination::OnlyInfinite
    );
}

#[test]
fn infimum_examples() {
    let a = builtin("nbar2").unwrap();
    assert_eq!(
        a.infimum(&e(&a, "(2,0)"), &e(&a, "(0,3)")).unwrap(),
        Some(e(&a, "(0,0)"))
    );
    let z = builtin("zcu").unwrap();
    assert_eq!(
        z.infimum(&e(&z, "2"), &e(&z, "Soft(2)")).unwrap(),
        Some(e(&z, "Soft(2)"))
    );
    let r = riesz_violator();
    let CuModel::Table(t) = &r else { panic!("table") };
    let missing = (0..t.len())
        .cartesian_product(0..t.len())
        .any(|(i, j)| r.meet(&Element::Index(i as u32), &Element::Index(j as u32)).is_none());
    assert!(missing);
}

#[test]
fn axioms_hold_on_nbar_and_antichains() {
    let opts = CheckOptions::default();
    for name in ["nbar", "nbar2", "zcu"] {
        let m = builtin(name).unwrap();
        let r = check_axioms(&m, &Cap::full(&m, 4), &opts);
        assert!(r.holds(), "{name}: {}", r.render_text());
    }
}

#[test]
fn o5_examples() {
    let n = builtin("nbar").unwrap();
    assert!(check_o5(&n, &Cap::full(&n, 5)).holds());
    let v = o5_violator();
    let r = check_o5(&v, &Cap::full(&v, 2));
    assert!(r.fails());
    for ce in &r.counterexamples {
        let (xp, x, z) = (
            ce.element("x'").unwrap(),
            ce.element("x").unwrap(),
            ce.element("z").unwrap(),
        );
        assert!(v.wb(xp, x) && v.le(x, z));
    }
    // non-antichain posets: x = (0,1) compact below z = (1,1), no monotone w
    let c = builtin("chain2").unwrap();
    assert!(check_o5(&c, &Cap::full(&c, 3)).fails());
}

#[test]
fn o6plus_and_weak_cancellation() {
    let n = builtin("nbar").unwrap();
    assert!(check_o6plus(&n, &Cap::full(&n, 4)).holds());
    let a = builtin("nbar2").unwrap();
    let r = check_o6plus(&a, &Cap::full(&a, 3));
    assert!(r.holds());
    assert_eq!(
        r.facts.get("two_sided_meet_witnesses_failed").map(String::as_str),
        Some("0")
    );
    for name in ["nbar", "nbar2", "chain2", "torsion"] {
        let m = builtin(name).unwrap();
        let r = check_weak_cancellation(&m, &Cap::full(&m, 3));
        assert!(r.holds(), "{name}: {}", r.render_text());
        assert_eq!(r.facts["forms_equivalent"], "true");
    }
}

#[test]
fn riesz_and_distributivity() {
    let opts = CheckOptions::default();
    for name in ["nbar", "nbar2", "chain2", "chain3"] {
        let m = builtin(name).unwrap();
        assert!(check_riesz(&m, &Cap::full(&m, 3)).holds(), "{name}");
        let r = check_inf_distributivity(&m, &Cap::full(&m, 3), &opts);
        assert!(r.holds(), "{name}: {}", r.render_text());
    }
    let v = riesz_violator();
    assert!(check_riesz(&v, &Cap::full(&v, 2)).fails());
    let t = builtin("torsion").unwrap();
    let r = check_inf_distributivity(&t, &Cap::full(&t, 3), &opts);
    assert!(r.fails());
    let ce = r.all_counterexamples();
    assert!(ce.iter().any(|c| c.property == "multiple-distributivity"));
}

#[test]
fn order_compatibility_is_exhaustive() {
    for name in ["nbar2", "chain3", "zcu-chain2", "torsion-table"] {
        let m = builtin(name).unwrap();
        let r = check_order_compat(&m, &Cap::full(&m, 2));
        assert!(r.holds(), "{name}");
        assert_eq!(r.stats.cap_size as usize, CapIndex::new(&m, &Cap::full(&m, 2)).len());
    }
}
