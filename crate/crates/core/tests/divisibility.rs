use cuntz_core::builtins::{builtin, lsc_over_small_posets};
use cuntz_core::divisibility::*;
use cuntz_core::report::CheckOptions;
use cuntz_core::{Cap, CapIndex, CuModel, Element, ScalarKind};

fn e(model: &CuModel, s: &str) -> Element {
    model.parse_element(s).unwrap()
}

fn oracle_m(k: u32, n: u32) -> u128 {
    (1..=k)
        .map(|r| (n as u128).pow(r) * (k - r) as u128 + (n as u128).pow(r - 1))
        .max()
        .unwrap()
}

fn oracle_n_wedge(n: u128, m: u128) -> u128 {
    n * m - n + 1
}

#[test]
fn constants_match_oracle() {
    for k in 1..=6u32 {
        for n in 1..=6u32 {
            let m = oracle_m(k, n);
            assert_eq!(constant_m(k as u64, n as u64).unwrap() as u128, m, "M({k},{n})");
            assert_eq!(
                constant_n_cugg(k as u64, n as u64).unwrap() as u128,
                oracle_n_wedge(k as u128, m)
            );
        }
    }
    assert_eq!(oracle_m(2, 2), 3);
    assert_eq!(oracle_m(1, 5), 1);
    assert_eq!(oracle_m(3, 2), 6);
    for (n, m, want) in [(2, 3, 5), (3, 2, 4)] {
        assert_eq!(constant_n_wedge(n, m).unwrap(), want);
    }
    for m in 1..=9 {
        assert_eq!(constant_n_wedge(1, m).unwrap(), m);
    }
    for (k, n, want) in [(2, 2, 5), (1, 1, 1), (3, 2, 16)] {
        assert_eq!(constant_n_cugg(k, n).unwrap(), want);
    }
    assert!(constant_m(0, 2).is_err());
    assert!(constant_m(40, 40).is_err());
}

fn plain(model: &CuModel, x: &str, k: u64, n: u64) -> DivisibilityQuery {
    DivisibilityQuery {
        x: e(model, x),
        k,
        n: Multiplicity::Finite(n),
        mode: Mode::Plain,
    }
}

/// On ℕ̄ a finite `x` is `(k, n)`-divisible iff `x ≤ n·⌊x/k⌋`, since `x` is
/// its own largest approximant and `⌊x/k⌋` the largest `y` with `ky ≤ x`.
#[test]
fn nbar_divisibility_matches_arithmetic() {
    let m = builtin("nbar").unwrap();
    let cap = Cap::full(&m, 8);
    let opts = CheckOptions::default();
    for x in 0..=8u64 {
        for k in 1..=3 {
            for n in 1..=4 {
                let r = is_divisible(&m, &plain(&m, &x.to_string(), k, n), &cap, &opts).unwrap();
                let want = x <= n * (x / k);
                assert_eq!(r.report.holds(), want, "x={x} k={k} n={n}");
                for c in &r.certificates {
                    assert!(c.verify(&m, &e(&m, &x.to_string()), k));
                }
            }
        }
    }
    assert!(is_divisible(&m, &plain(&m, "inf", 2, 1), &cap, &opts)
        .unwrap()
        .report
        .holds());
}

#[test]
fn divisibility_examples() {
    let m = builtin("nbar").unwrap();
    let cap = Cap::full(&m, 6);
    let opts = CheckOptions::default();
    assert!(is_divisible(&m, &plain(&m, "4", 2, 1), &cap, &opts)
        .unwrap()
        .report
        .fails());
    assert!(is_divisible(&m, &plain(&m, "4", 2, 2), &cap, &opts)
        .unwrap()
        .report
        .holds());
    let omega = DivisibilityQuery {
        x: e(&m, "5"),
        k: 2,
        n: Multiplicity::Omega,
        mode: Mode::Plain,
    };
    let r = is_divisible(&m, &omega, &cap, &opts).unwrap();
    assert!(r.report.holds());
    assert_eq!(r.certificates[0].n, 3);
    let weak = DivisibilityQuery {
        x: e(&m, "5"),
        k: 2,
        n: Multiplicity::Finite(3),
        mode: Mode::Weak,
    };
    assert!(is_divisible(&m, &weak, &cap, &opts).unwrap().report.holds());
    assert!(is_divisible(&m, &plain(&m, "4", 0, 1), &cap, &opts).is_err());

    let a = builtin("nbar2").unwrap();
    let cap = Cap::full(&a, 4);
    let idx = CapIndex::new(&a, &cap);
    assert_eq!(minimal_plain_n(&idx, &e(&a, "(4,4)"), 2, 16), Some(2));
    assert_eq!(minimal_plain_n(&idx, &e(&a, "(3,4)"), 2, 16), Some(3));
    // weak divisibility with different y's
    let w = DivisibilityQuery {
        x: e(&a, "(3,1)"),
        k: 2,
        n: Multiplicity::Finite(4),
        mode: Mode::Weak,
    };
    assert!(is_divisible(&a, &w, &cap, &opts).unwrap().report.fails());
}

#[test]
fn wedgefull() {
    let a = builtin("nbar2").unwrap();
    let r = verify_wedgefull(&a, &e(&a, "(3,3)"), &[e(&a, "(3,1)"), e(&a, "(1,3)")], 3).unwrap();
    assert!(r.holds());
    assert_eq!(r.facts["N"], "5");
    assert_eq!(r.facts["minimal_N"], "3");
    assert!(verify_wedgefull(&a, &e(&a, "(4,4)"), &[e(&a, "(1,1)")], 3).is_err());
    // exhaustive on small values: x ≤ M·y_j for both j implies x ≤ N·(y_1 ∧ y_2)
    let vals = ["0", "1", "2", "3"];
    let elems: Vec<Element> = vals
        .iter()
        .flat_map(|p| vals.iter().map(move |q| format!("({p},{q})")))
        .map(|s| e(&a, &s))
        .collect();
    for x in &elems {
        for y1 in &elems {
            for y2 in &elems {
                if let Ok(r) = verify_wedgefull(&a, x, &[y1.clone(), y2.clone()], 3) {
                    assert!(r.holds(), "{}", r.render_text());
                }
            }
        }
    }
}

#[test]
fn cugg_examples() {
    let opts = CheckOptions::default();
    let n = builtin("nbar").unwrap();
    let r = verify_cugg(&n, Some(&e(&n, "5")), 2, 2, &Cap::full(&n, 6), &opts).unwrap();
    assert!(r.holds(), "{}", r.render_text());
    assert_eq!(r.facts["N"], "5");
    let a = builtin("nbar2").unwrap();
    let r = verify_cugg(&a, Some(&e(&a, "(4,4)")), 2, 2, &Cap::full(&a, 4), &opts).unwrap();
    assert!(r.holds());
    assert_eq!(r.facts["max_minimal_N"], "2");
}

#[test]
fn cugg_on_small_lsc_models() {
    let opts = CheckOptions::default();
    for kind in [ScalarKind::NBar, ScalarKind::ZCu] {
        for m in lsc_over_small_posets(2, kind) {
            for (k, n) in [(2, 2), (3, 2), (2, 3)] {
                let r = verify_cugg(&m, None, k, n, &Cap::full(&m, 3), &opts).unwrap();
                let body = r.find_part("implication").unwrap();
                assert!(!body.fails(), "{} (k={k}, n={n}): {}", m.describe(), r.render_text());
                let bound = constant_n_cugg(k, n).unwrap();
                let max: u64 = body.facts["max_minimal_N"].parse().unwrap();
                assert!(max <= bound);
            }
        }
    }
}

#[test]
fn softness() {
    let opts = CheckOptions::default();
    let n = builtin("nbar").unwrap();
    let cap = Cap::full(&n, 4);
    assert!(is_soft(&n, &e(&n, "inf"), &cap, &opts).unwrap().holds());
    assert!(is_soft(&n, &e(&n, "0"), &cap, &opts).unwrap().holds());
    assert!(is_soft(&n, &e(&n, "3"), &cap, &opts).unwrap().fails());
    let z = builtin("zcu").unwrap();
    let zc = Cap::full(&z, 4);
    assert!(is_soft(&z, &e(&z, "Soft(2)"), &zc, &opts).unwrap().holds());
    assert!(is_soft(&z, &e(&z, "2"), &zc, &opts).unwrap().fails());
    // closed form on ℕ̄²
    let a = builtin("nbar2").unwrap();
    let idx = CapIndex::new(&a, &Cap::full(&a, 2));
    for x in idx.cap_elements() {
        let r = is_soft(&a, x, &Cap::full(&a, 2), &opts).unwrap();
        assert_eq!(r.holds(), nbar_soft_closed_form(x));
    }
}

#[test]
fn soft_sums() {
    let opts = CheckOptions::default();
    let n = builtin("nbar").unwrap();
    let r = check_soft_sum(&n, &[e(&n, "1"), e(&n, "2")], &Cap::full(&n, 4), &opts).unwrap();
    assert!(r.holds());
    assert_eq!(r.facts["sum"], "inf");
    let a = builtin("nbar2").unwrap();
    let xs = [e(&a, "(1,0)"), e(&a, "(1,1)")];
    let r = check_soft_sum(&a, &xs, &Cap::full(&a, 3), &opts).unwrap();
    assert!(r.holds(), "{}", r.render_text());
    assert!(check_soft_sum(&a, &[e(&a, "(1,1)"), e(&a, "(1,0)")], &Cap::full(&a, 3), &opts).is_err());
}

#[test]
fn small_soft_elements() {
    let opts = CheckOptions::default();
    let a = builtin("nbar2").unwrap();
    let cap = Cap::full(&a, 3);
    assert_eq!(
        find_small_soft(&a, &e(&a, "(inf,inf)"), 2, &cap, &opts).unwrap(),
        Some(e(&a, "(inf,inf)"))
    );
    assert_eq!(find_small_soft(&a, &e(&a, "(2,2)"), 1, &cap, &opts).unwrap(), None);
    assert!(find_small_soft(&a, &e(&a, "(2,0)"), 1, &cap, &opts).is_err());
    let z = builtin("zcu").unwrap();
    let w = find_small_soft(&z, &e(&z, "4"), 2, &Cap::full(&z, 4), &opts).unwrap();
    assert_eq!(w, Some(e(&z, "Soft(2)")));
}
