//! Cap-bounded checkers for the order axioms and structural properties.
//!
//! Universally quantified statements are decided on the cap. An existential
//! witness is first searched in the cap (in enumeration order) and then among
//! pointwise-constructed candidates; when neither succeeds the verdict is
//! `fails` only if the cap lists every element the witness could be.

use std::time::Instant;

use itertools::Itertools;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::cap::{BitMatrix, Cap, CapIndex};
use crate::ext::Ext;
use crate::model::{CuModel, Element};
use crate::report::{el, CheckOptions, CheckReport, Instance, Item};

/// Number of chain terms examined before declaring a bound an upper bound.
///
/// Chosen so that `a + H·b` leaves the grid in every coordinate where `b`
/// is nonzero, and approximants come closer to their limit than any two
/// distinct grid values are to each other.
pub fn horizon(model: &CuModel, cap: &Cap) -> u64 {
    let d = cap.denominator as u64;
    let table = match model {
        CuModel::Table(t) => t.len() as u64,
        _ => 0,
    };
    (d * d + d * (cap.ceiling as u64 + 1) + 2).max(table + 1)
}

/// A report stamped with the model, cap description and cap size.
pub fn new_report(name: &str, idx: &CapIndex) -> CheckReport {
    let mut r = CheckReport::new(name, idx.model, &idx.cap.describe(idx.model));
    r.stats.cap_size = idx.len() as u64;
    r
}

pub(crate) fn cap_roles(idx: &CapIndex) -> Vec<(&'static str, Item)> {
    vec![
        ("ceiling", Item::Count(idx.cap.ceiling as u64)),
        ("denominator", Item::Count(idx.cap.denominator as u64)),
    ]
}

/// Records the elapsed time.
pub fn finish(mut r: CheckReport, start: Instant) -> CheckReport {
    r.stats.elapsed = start.elapsed();
    r
}

fn lsc_ranks(e: &Element) -> Option<Vec<Ext>> {
    match e {
        Element::Values(v) => Some(v.iter().map(|s| s.rank()).collect()),
        _ => None,
    }
}

/// `x ≤ y ⟹ x + z ≤ y + z`, and `0 ≤ x`.
pub fn check_order_compat(model: &CuModel, cap: &Cap) -> CheckReport {
    let idx = CapIndex::with_sums(model, cap);
    order_compat_on(&idx)
}

pub(crate) fn order_compat_on(idx: &CapIndex) -> CheckReport {
    let start = Instant::now();
    let mut r = new_report("order-compatibility", idx);
    let n = idx.len();
    let zero = idx.model.zero();
    for x in 0..n {
        if !idx.model.le(&zero, idx.elem(x)) {
            r.fail(Instance::new(idx.model, "positivity", vec![("x", el(idx.elem(x)))]));
        }
        for y in 0..n {
            if !idx.le(x, y) {
                continue;
            }
            for z in 0..n {
                r.stats.tuples += 1;
                if !idx.le(idx.sum(x, z), idx.sum(y, z)) {
                    r.fail(Instance::new(
                        idx.model,
                        "order-compatibility",
                        vec![("x", el(idx.elem(x))), ("y", el(idx.elem(y))), ("z", el(idx.elem(z)))],
                    ));
                }
            }
        }
    }
    finish(r, start)
}

/// Every encoded increasing sequence `a + n·b` has a supremum, computed as
/// `a + ∞·b`: it bounds the terms and lies below every cap element bounding
/// the first `H` terms.
pub fn check_o1(model: &CuModel, cap: &Cap) -> CheckReport {
    let idx = CapIndex::new(model, cap);
    o1_on(&idx)
}

pub(crate) fn o1_on(idx: &CapIndex) -> CheckReport {
    let start = Instant::now();
    let mut r = new_report("O1", idx);
    let m = idx.model;
    let h = horizon(m, &idx.cap);
    r.fact("horizon", h);
    let n = idx.len();
    for a in 0..n {
        for b in 0..n {
            r.stats.tuples += 1;
            let (ea, eb) = (idx.elem(a), idx.elem(b));
            let s = m.plus(ea, &m.saturate(eb));
            let mut term = ea.clone();
            let mut ok = true;
            for k in 0..=h {
                if k > 0 {
                    let next = m.plus(&term, eb);
                    if !m.le(&term, &next) {
                        r.fail(Instance::new(
                            m,
                            "O1-increasing",
                            vec![("a", el(ea)), ("b", el(eb)), ("k", Item::Count(k))],
                        ));
                        ok = false;
                        break;
                    }
                    term = next;
                }
                if !m.le(&term, &s) {
                    r.fail(Instance::new(
                        m,
                        "O1-upper",
                        vec![("a", el(ea)), ("b", el(eb)), ("k", Item::Count(k))],
                    ));
                    ok = false;
                    break;
                }
            }
            if !ok {
                continue;
            }
            for u in 0..n {
                let eu = idx.elem(u);
                if m.le(&term, eu) && !m.le(&s, eu) {
                    r.fail(Instance::new(
                        m,
                        "O1-least",
                        vec![("a", el(ea)), ("b", el(eb)), ("u", el(eu)), ("H", Item::Count(h))],
                    ));
                }
            }
        }
    }
    finish(r, start)
}

/// Every cap element is the supremum of a `≪`-increasing sequence.
pub fn check_o2(model: &CuModel, cap: &Cap) -> CheckReport {
    let idx = CapIndex::new(model, cap);
    o2_on(&idx)
}

pub(crate) fn o2_on(idx: &CapIndex) -> CheckReport {
    let start = Instant::now();
    let mut r = new_report("O2", idx);
    let m = idx.model;
    let h = horizon(m, &idx.cap) as u32;
    r.fact("horizon", h);
    for x in 0..idx.len() {
        r.stats.tuples += 1;
        let ex = idx.elem(x);
        let mut prev = m.approximant(ex, 0);
        let mut ok = true;
        for k in 0..h {
            let next = m.approximant(ex, k + 1);
            if !m.contains(&prev) || !m.wb(&prev, &next) || !m.le(&prev, ex) {
                r.fail(Instance::new(
                    m,
                    "O2-sequence",
                    vec![("x", el(ex)), ("n", Item::Count(k as u64))],
                ));
                ok = false;
                break;
            }
            prev = next;
        }
        if !ok {
            continue;
        }
        for u in 0..idx.len() {
            let eu = idx.elem(u);
            if m.le(&prev, eu) && !m.le(ex, eu) {
                r.fail(Instance::new(
                    m,
                    "O2-supremum",
                    vec![("x", el(ex)), ("u", el(eu)), ("H", Item::Count(h as u64))],
                ));
            }
        }
    }
    finish(r, start)
}

/// `x' ≪ x, y' ≪ y ⟹ x' + y' ≪ x + y` (maximal approximants suffice).
pub fn check_o3(model: &CuModel, cap: &Cap) -> CheckReport {
    let idx = CapIndex::with_sums(model, cap);
    o3_on(&idx)
}

pub(crate) fn o3_on(idx: &CapIndex) -> CheckReport {
    let start = Instant::now();
    let mut r = new_report("O3", idx);
    let n = idx.len();
    for x in 0..n {
        for y in x..n {
            let s = idx.sum(x, y);
            for &xp in idx.max_wb_below(x) {
                for &yp in idx.max_wb_below(y) {
                    r.stats.tuples += 1;
                    let (xp, yp) = (xp as usize, yp as usize);
                    if !idx.wb(idx.sum(xp, yp), s) {
                        r.fail(Instance::new(
                            idx.model,
                            "O3",
                            vec![
                                ("x'", el(idx.elem(xp))),
                                ("x", el(idx.elem(x))),
                                ("y'", el(idx.elem(yp))),
                                ("y", el(idx.elem(y))),
                            ],
                        ));
                    }
                }
            }
        }
    }
    finish(r, start)
}

/// Suprema of encoded sequences are additive:
/// `(a + ∞b) + (c + ∞d) = (a + c) + ∞(b + d)`, and `x ≤ y` is preserved.
/// Quadruples are sampled (seeded) when there are too many.
pub fn check_o4(model: &CuModel, cap: &Cap, opts: &CheckOptions) -> CheckReport {
    let idx = CapIndex::new(model, cap);
    o4_on(&idx, opts)
}

pub(crate) fn o4_on(idx: &CapIndex, opts: &CheckOptions) -> CheckReport {
    let start = Instant::now();
    let mut r = new_report("O4", idx);
    let m = idx.model;
    let n = idx.len();
    let total = (n as u128).pow(4);
    let check = |q: [usize; 4], r: &mut CheckReport| {
        r.stats.tuples += 1;
        let [a, b, c, d] = q.map(|i| idx.elem(i));
        let lhs = m.plus(&m.plus(a, &m.saturate(b)), &m.plus(c, &m.saturate(d)));
        let rhs = m.plus(&m.plus(a, c), &m.saturate(&m.plus(b, d)));
        if lhs != rhs {
            r.fail(Instance::new(
                m,
                "O4",
                vec![("a", el(a)), ("b", el(b)), ("c", el(c)), ("d", el(d))],
            ));
        }
    };
    if total <= opts.samples as u128 {
        for a in 0..n {
            for b in 0..n {
                for c in 0..n {
                    for d in 0..n {
                        check([a, b, c, d], &mut r);
                    }
                }
            }
        }
    } else {
        r.note(format!(
            "sampled {} of {} quadruples (seed {})",
            opts.samples, total, opts.seed
        ));
        let mut rng = ChaCha8Rng::seed_from_u64(opts.seed);
        for _ in 0..opts.samples {
            let q = [0; 4].map(|_| rng.gen_range(0..n));
            check(q, &mut r);
        }
    }
    finish(r, start)
}

/// Almost algebraic order: `x' ≪ x ≤ z ⟹ ∃w: x' + w ≤ z ≤ x + w`.
pub fn check_o5(model: &CuModel, cap: &Cap) -> CheckReport {
    let idx = CapIndex::with_sums(model, cap);
    o5_on(&idx)
}

pub(crate) fn o5_on(idx: &CapIndex) -> CheckReport {
    let start = Instant::now();
    let mut r = new_report("O5", idx);
    let m = idx.model;
    let n = idx.len();
    let mut outside = 0u64;
    for x in 0..n {
        for z in 0..n {
            if !idx.le(x, z) {
                continue;
            }
            for &xp in idx.max_wb_below(x) {
                let xp = xp as usize;
                r.stats.tuples += 1;
                let in_cap = idx
                    .below(z)
                    .find(|&w| idx.le(idx.sum(xp, w), z) && idx.le(z, idx.sum(x, w)));
                let w = match in_cap {
                    Some(w) => Some(idx.elem(w).clone()),
                    None => o5_hint(m, idx.elem(xp), idx.elem(x), idx.elem(z)),
                };
                let roles = || vec![("x'", el(idx.elem(xp))), ("x", el(idx.elem(x))), ("z", el(idx.elem(z)))];
                match w {
                    Some(w) => {
                        if in_cap.is_none() {
                            outside += 1;
                        }
                        if r.witnesses.len() < 8 {
                            let mut roles = roles();
                            roles.push(("w", el(&w)));
                            r.witness(Instance::new(m, "O5", roles));
                        }
                    }
                    None if idx.complete_below(z) => {
                        let mut roles = roles();
                        roles.extend(cap_roles(idx));
                        r.fail(Instance::new(m, "O5", roles));
                    }
                    None => r.inconclusive(format!("no witness w below z={} within the cap", idx.fmt(z))),
                }
            }
        }
    }
    r.fact("witnesses_outside_cap", outside);
    finish(r, start)
}

fn o5_hint(m: &CuModel, xp: &Element, x: &Element, z: &Element) -> Option<Element> {
    let (rp, rx, rz) = (lsc_ranks(xp)?, lsc_ranks(x)?, lsc_ranks(z)?);
    let mut seeds = Vec::new();
    for p in 0..rz.len() {
        seeds.push(rz[p].monus(rp[p]));
        seeds.push(rz[p].monus(rx[p]));
    }
    let (xv, xpv, zv) = (x.as_values(), xp.as_values(), z.as_values());
    m.pointwise_candidates(&seeds, |p, w| xpv[p].add(w).le(&zv[p]) && zv[p].le(&xv[p].add(w)), 1)
        .into_iter()
        .next()
}

/// Single-sided O6+: `a ≤ b + c`, `x' ≪ x ≤ a, b ⟹ ∃e: a ≤ e + c, x' ≪ e ≤ a, b`.
///
/// When `a ∧ b` exists it is tried first; it covers every `x'` at once.
/// Where both `a ∧ b` and `a ∧ c` exist, the two-sided witnesses
/// `a ≤ (a ∧ b) + (a ∧ c)` are confirmed as well.
pub fn check_o6plus(model: &CuModel, cap: &Cap) -> CheckReport {
    let idx = CapIndex::with_sums(model, cap);
    o6plus_on(&idx)
}

pub(crate) fn cap_meets(idx: &CapIndex) -> Vec<Option<Element>> {
    let n = idx.len();
    let mut out = vec![None; n * n];
    for a in 0..n {
        for b in a..n {
            let mt = idx.model.meet(idx.elem(a), idx.elem(b));
            out[a * n + b] = mt.clone();
            out[b * n + a] = mt;
        }
    }
    out
}

pub(crate) fn o6plus_on(idx: &CapIndex) -> CheckReport {
    let start = Instant::now();
    let mut r = new_report("O6+", idx);
    let m = idx.model;
    let n = idx.len();
    let meets = cap_meets(idx);
    let meet_idx: Vec<Option<usize>> = meets
        .iter()
        .map(|o| o.as_ref().and_then(|e| idx.cap_index_of(e)))
        .collect();
    let (mut via_meet, mut two_sided_ok, mut two_sided_bad) = (0u64, 0u64, 0u64);
    for a in 0..n {
        for b in 0..n {
            let mab = meet_idx[a * n + b];
            let mut d_max: Option<Vec<usize>> = None;
            for c in 0..n {
                if !idx.le(a, idx.sum(b, c)) {
                    continue;
                }
                r.stats.tuples += 1;
                if let Some(mi) = mab {
                    if let Some(mac) = meet_idx[a * n + c] {
                        if idx.le(a, idx.sum(mi, mac)) {
                            two_sided_ok += 1;
                        } else {
                            two_sided_bad += 1;
                        }
                    }
                    if idx.le(a, idx.sum(mi, c)) {
                        via_meet += 1;
                        continue;
                    }
                } else if let Some(me) = &meets[a * n + b] {
                    // meet outside the cap
                    if m.le(idx.elem(a), &m.plus(me, idx.elem(c))) {
                        via_meet += 1;
                        continue;
                    }
                }
                let dm = d_max.get_or_insert_with(|| {
                    let lower: Vec<usize> = (0..n).filter(|&x| idx.le(x, a) && idx.le(x, b)).collect();
                    let mut cand: Vec<usize> = lower
                        .iter()
                        .flat_map(|&x| idx.max_wb_below(x).iter().map(|&v| v as usize))
                        .collect();
                    cand.sort_unstable();
                    cand.dedup();
                    idx.maximal(&cand)
                });
                for &xp in dm.iter() {
                    let found = idx
                        .below(a)
                        .find(|&e| idx.le(e, b) && idx.wb(xp, e) && idx.le(a, idx.sum(e, c)));
                    match found {
                        Some(e) => {
                            if r.witnesses.len() < 8 {
                                r.witness(Instance::new(
                                    m,
                                    "O6+",
                                    vec![
                                        ("a", el(idx.elem(a))),
                                        ("b", el(idx.elem(b))),
                                        ("c", el(idx.elem(c))),
                                        ("x'", el(idx.elem(xp))),
                                        ("e", el(idx.elem(e))),
                                    ],
                                ));
                            }
                        }
                        None if idx.complete_below(a) => {
                            let mut roles = vec![
                                ("a", el(idx.elem(a))),
                                ("b", el(idx.elem(b))),
                                ("c", el(idx.elem(c))),
                                ("x'", el(idx.elem(xp))),
                            ];
                            roles.extend(cap_roles(idx));
                            r.fail(Instance::new(m, "O6+", roles));
                        }
                        None => r.inconclusive(format!("no witness e below a={} within the cap", idx.fmt(a))),
                    }
                }
            }
        }
    }
    r.fact("meet_witnesses", via_meet);
    r.fact("two_sided_meet_witnesses_confirmed", two_sided_ok);
    r.fact("two_sided_meet_witnesses_failed", two_sided_bad);
    finish(r, start)
}

/// The three equivalent forms of weak cancellation and cancellation of
/// compact elements, each as a sub-report.
pub fn check_weak_cancellation(model: &CuModel, cap: &Cap) -> CheckReport {
    let idx = CapIndex::with_sums(model, cap);
    weak_cancellation_on(&idx)
}

pub(crate) fn weak_cancellation_on(idx: &CapIndex) -> CheckReport {
    let start = Instant::now();
    let m = idx.model;
    let n = idx.len();
    let mut r = new_report("weak-cancellation", idx);
    let triple =
        |x: usize, y: usize, z: usize| vec![("x", el(idx.elem(x))), ("y", el(idx.elem(y))), ("z", el(idx.elem(z)))];

    let mut f1 = new_report("weak-cancellation(i)", idx);
    let mut f2 = new_report("weak-cancellation(ii)", idx);
    let mut cc = new_report("compact-cancellation", idx);
    for z in 0..n {
        let z_compact = idx.wb(z, z);
        for x in 0..n {
            let sx = idx.sum(x, z);
            for y in 0..n {
                let sy = idx.sum(y, z);
                f1.stats.tuples += 1;
                f2.stats.tuples += 1;
                if idx.wb(sx, sy) {
                    if !idx.wb(x, y) {
                        f1.fail(Instance::new(m, "weak-cancellation(i)", triple(x, y, z)));
                    }
                    if !idx.le(x, y) {
                        f2.fail(Instance::new(m, "weak-cancellation(ii)", triple(x, y, z)));
                    }
                }
                if z_compact {
                    cc.stats.tuples += 1;
                    if idx.le(sx, sy) && !idx.le(x, y) {
                        cc.fail(Instance::new(m, "compact-cancellation", triple(x, y, z)));
                    }
                }
            }
        }
    }

    // z' ranges over maximal approximants: the premise only weakens for smaller z'.
    let mut f3 = new_report("weak-cancellation(iii)", idx);
    for z in 0..n {
        for &zp in idx.max_wb_below(z) {
            let zp = zp as usize;
            for x in 0..n {
                let sx = idx.sum(x, z);
                for y in 0..n {
                    f3.stats.tuples += 1;
                    if idx.le(sx, idx.sum(y, zp)) && !idx.le(x, y) {
                        let mut roles = triple(x, y, z);
                        roles.push(("z'", el(idx.elem(zp))));
                        f3.fail(Instance::new(m, "weak-cancellation(iii)", roles));
                    }
                }
            }
        }
    }

    let pattern = [f1.verdict, f2.verdict, f3.verdict];
    let equivalent = pattern.iter().all(|v| *v == pattern[0]);
    r.fact("forms_equivalent", equivalent);
    r.fact(
        "form_verdicts",
        format!("(i)={} (ii)={} (iii)={}", pattern[0], pattern[1], pattern[2]),
    );
    if !equivalent {
        r.note("the three forms disagree on this cap");
    }
    for p in [f1, f2, f3, cc] {
        r.push_part(p);
    }
    finish(r, start)
}

/// Riesz interpolation: `u, v ≤ x, y ⟹ ∃z: u, v ≤ z ≤ x, y`.
///
/// Decided per pair `(x, y)`: interpolation holds for all `u, v` exactly when
/// the common lower bounds have a greatest element. The same pass confirms
/// that the computed infimum is that greatest element.
pub fn check_riesz(model: &CuModel, cap: &Cap) -> CheckReport {
    let idx = CapIndex::new(model, cap);
    riesz_on(&idx)
}

pub(crate) fn riesz_on(idx: &CapIndex) -> CheckReport {
    let start = Instant::now();
    let m = idx.model;
    let n = idx.len();
    let mut r = new_report("riesz", idx);
    let mut inf = new_report("infimum-agreement", idx);
    let down = BitMatrix::build(n, |i, j| idx.le(j, i));
    let words = n.div_ceil(64).max(1);
    let mut lset = vec![0u64; words];
    for x in 0..n {
        for y in x..n {
            r.stats.tuples += 1;
            for (w, (a, b)) in lset.iter_mut().zip(down.row(x).iter().zip(down.row(y))) {
                *w = a & b;
            }
            let members: Vec<usize> = (0..n).filter(|&j| lset[j / 64] >> (j % 64) & 1 == 1).collect();
            let greatest = members
                .iter()
                .rev()
                .copied()
                .find(|&g| lset.iter().zip(down.row(g)).all(|(l, d)| l & !d == 0));
            match greatest {
                Some(g) => {
                    inf.stats.tuples += 1;
                    match m.meet(idx.elem(x), idx.elem(y)) {
                        Some(mt) if mt == *idx.elem(g) => {}
                        other => {
                            let mut roles = vec![
                                ("x", el(idx.elem(x))),
                                ("y", el(idx.elem(y))),
                                ("greatest", el(idx.elem(g))),
                            ];
                            if let Some(mt) = other {
                                roles.push(("infimum", el(&mt)));
                            }
                            inf.fail(Instance::new(m, "infimum-agreement", roles));
                        }
                    }
                }
                None => {
                    let maximal = idx.maximal(&members);
                    let (u, v) = (maximal[0], maximal[1]);
                    if idx.complete_below(x) || idx.complete_below(y) {
                        let mut roles = vec![
                            ("u", el(idx.elem(u))),
                            ("v", el(idx.elem(v))),
                            ("x", el(idx.elem(x))),
                            ("y", el(idx.elem(y))),
                        ];
                        roles.extend(cap_roles(idx));
                        r.fail(Instance::new(m, "riesz", roles));
                    } else {
                        r.inconclusive(format!(
                            "lower bounds of {} and {} have no greatest element within the cap",
                            idx.fmt(x),
                            idx.fmt(y)
                        ));
                    }
                }
            }
        }
    }
    r.push_part(finish(inf, start));
    finish(r, start)
}

/// Distributivity of addition over infima, its iterated form
/// `Σ_k ⋀_i x_i^(k) = ⋀_(i_1..i_n) Σ_k x_(i_k)^(k)` for `n ≤ 2`, `N_k ≤ 3`,
/// and the multiple identity `n(x ∧ y) = nx ∧ ny` for `n ∈ {2, 3}`.
pub fn check_inf_distributivity(model: &CuModel, cap: &Cap, opts: &CheckOptions) -> CheckReport {
    let idx = CapIndex::with_sums(model, cap);
    inf_distributivity_on(&idx, opts)
}

pub(crate) fn inf_distributivity_on(idx: &CapIndex, opts: &CheckOptions) -> CheckReport {
    let start = Instant::now();
    let m = idx.model;
    let n = idx.len();
    let mut r = new_report("inf-distributivity", idx);
    let meets = cap_meets(idx);

    let mut exist = new_report("infima-exist", idx);
    for x in 0..n {
        for y in x..n {
            exist.stats.tuples += 1;
            if meets[x * n + y].is_none() {
                exist.fail(Instance::new(
                    m,
                    "infimum-exists",
                    vec![("x", el(idx.elem(x))), ("y", el(idx.elem(y)))],
                ));
            }
        }
    }
    let have_meets = exist.holds();
    r.push_part(exist);
    if !have_meets {
        r.note("the model lacks infima on the cap; identities not evaluated");
        return finish(r, start);
    }
    let meet = |a: &Element, b: &Element| m.meet(a, b).expect("infima exist on the cap");

    let mut eq1 = new_report("distributivity", idx);
    for x in 0..n {
        for y in x..n {
            let mxy = meets[x * n + y].as_ref().unwrap();
            let mi = idx.cap_index_of(mxy);
            for z in 0..n {
                eq1.stats.tuples += 1;
                let lhs = m.meet(idx.elem(idx.sum(x, z)), idx.elem(idx.sum(y, z)));
                let rhs = match mi {
                    Some(k) => idx.elem(idx.sum(k, z)).clone(),
                    None => m.plus(mxy, idx.elem(z)),
                };
                if lhs.as_ref() != Some(&rhs) {
                    eq1.fail(Instance::new(
                        m,
                        "distributivity",
                        vec![("x", el(idx.elem(x))), ("y", el(idx.elem(y))), ("z", el(idx.elem(z)))],
                    ));
                }
            }
        }
    }
    r.push_part(finish(eq1, start));

    let mut it = new_report("iterated-distributivity", idx);
    let mut rng = ChaCha8Rng::seed_from_u64(opts.seed);
    let mut sampled = false;
    for n1 in 1..=3usize {
        for n2 in 1..=3usize {
            let width = n1 + n2;
            let total = (n as u128).pow(width as u32);
            let eval = |t: &[usize], it: &mut CheckReport| {
                it.stats.tuples += 1;
                let (g1, g2) = t.split_at(n1);
                let fold = |g: &[usize]| {
                    g[1..]
                        .iter()
                        .fold(idx.elem(g[0]).clone(), |acc, &i| meet(&acc, idx.elem(i)))
                };
                let lhs = m.plus(&fold(g1), &fold(g2));
                let mut rhs: Option<Element> = None;
                for &i in g1 {
                    for &j in g2 {
                        let s = idx.elem(idx.sum(i, j)).clone();
                        rhs = Some(match rhs {
                            None => s,
                            Some(acc) => meet(&acc, &s),
                        });
                    }
                }
                if Some(&lhs) != rhs.as_ref() {
                    let mut roles: Vec<(&str, Item)> = Vec::new();
                    let names1 = ["x1", "x2", "x3"];
                    let names2 = ["y1", "y2", "y3"];
                    for (k, &i) in g1.iter().enumerate() {
                        roles.push((names1[k], el(idx.elem(i))));
                    }
                    for (k, &i) in g2.iter().enumerate() {
                        roles.push((names2[k], el(idx.elem(i))));
                    }
                    it.fail(Instance::new(m, "iterated-distributivity", roles));
                }
            };
            if total <= opts.samples as u128 {
                for t in (0..width).map(|_| 0..n).multi_cartesian_product() {
                    eval(&t, &mut it);
                }
            } else {
                sampled = true;
                for _ in 0..opts.samples {
                    let t: Vec<usize> = (0..width).map(|_| rng.gen_range(0..n)).collect();
                    eval(&t, &mut it);
                }
            }
        }
    }
    if sampled {
        it.note(format!(
            "shapes with more than {} tuples were sampled (seed {})",
            opts.samples, opts.seed
        ));
    }
    r.push_part(finish(it, start));

    let mut nf = new_report("multiple-distributivity", idx);
    for x in 0..n {
        for y in x..n {
            let mxy = meets[x * n + y].as_ref().unwrap();
            for k in [2u64, 3] {
                nf.stats.tuples += 1;
                let lhs = m.times(mxy, k);
                let rhs = meet(&m.times(idx.elem(x), k), &m.times(idx.elem(y), k));
                if lhs != rhs {
                    nf.fail(Instance::new(
                        m,
                        "multiple-distributivity",
                        vec![("x", el(idx.elem(x))), ("y", el(idx.elem(y))), ("n", Item::Count(k))],
                    ));
                }
            }
        }
    }
    r.push_part(finish(nf, start));
    finish(r, start)
}

/// The axiom suite: order compatibility, O1–O5, O6+ and weak cancellation.
pub fn check_axioms(model: &CuModel, cap: &Cap, opts: &CheckOptions) -> CheckReport {
    let start = Instant::now();
    let plain = CapIndex::new(model, cap);
    let idx = CapIndex::with_sums(model, cap);
    let mut r = new_report("axioms", &idx);
    r.push_part(order_compat_on(&idx));
    r.push_part(o1_on(&plain));
    r.push_part(o2_on(&plain));
    r.push_part(o3_on(&idx));
    r.push_part(o4_on(&plain, opts));
    r.push_part(o5_on(&idx));
    r.push_part(o6plus_on(&idx));
    r.push_part(weak_cancellation_on(&idx));
    finish(r, start)
}

/// Outcome of a domination query `x ∝ y`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, serde::Serialize, serde::Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Domination {
    /// Minimal `n` with `x ≤ n·y`.
    Finite(u64),
    /// No finite multiple works, but `x ≤ ∞·y`.
    OnlyInfinite,
    No,
    /// The search bound was reached without a decision.
    Inconclusive,
}

impl Domination {
    pub fn dominated(&self) -> Option<bool> {
        match self {
            Domination::Finite(_) => Some(true),
            Domination::OnlyInfinite | Domination::No => Some(false),
            Domination::Inconclusive => None,
        }
    }
}

/// Decides `x ∝ y` (some `n` with `x ≤ n·y`) with the minimal witness `n`.
///
/// Lsc models use the per-point minimal multiple; tables are decided
/// exactly because `n·y` stabilizes; other models search up to `n_bound`.
pub fn dominates(model: &CuModel, x: &Element, y: &Element, n_bound: u64) -> crate::Result<Domination> {
    model.check(x)?;
    model.check(y)?;
    Ok(dominates_unchecked(model, x, y, n_bound))
}

pub(crate) fn dominates_unchecked(model: &CuModel, x: &Element, y: &Element, n_bound: u64) -> Domination {
    match model {
        CuModel::Lsc(_) => {
            let mut n = 0;
            for (a, b) in x.as_values().iter().zip(y.as_values()) {
                match a.min_multiple(b) {
                    Some(k) => n = n.max(k),
                    None => {
                        return if a.le(&b.saturate()) {
                            Domination::OnlyInfinite
                        } else {
                            Domination::No
                        }
                    }
                }
            }
            Domination::Finite(n)
        }
        CuModel::Product(ms) => {
            let (Element::Tuple(xs), Element::Tuple(ys)) = (x, y) else {
                unreachable!("product elements are tuples")
            };
            let mut n = 0;
            let mut worst = None;
            for ((m, a), b) in ms.iter().zip(xs).zip(ys) {
                match dominates_unchecked(m, a, b, n_bound) {
                    Domination::Finite(k) => n = n.max(k),
                    Domination::No => return Domination::No,
                    other => {
                        worst = Some(match (worst, other) {
                            (Some(Domination::Inconclusive), _) | (_, Domination::Inconclusive) => {
                                Domination::Inconclusive
                            }
                            _ => Domination::OnlyInfinite,
                        })
                    }
                }
            }
            worst.unwrap_or(Domination::Finite(n))
        }
        _ => {
            let exact = model.is_finite();
            let bound = match model {
                CuModel::Table(t) => t.len() as u64 + 1,
                _ => n_bound,
            };
            let mut acc = model.zero();
            for k in 0..=bound {
                if model.le(x, &acc) {
                    return Domination::Finite(k);
                }
                acc = model.plus(&acc, y);
            }
            if !model.le(x, &model.saturate(y)) {
                Domination::No
            } else if exact {
                Domination::OnlyInfinite
            } else {
                Domination::Inconclusive
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::poset::FinitePoset;
    use crate::scalar::ScalarKind;

    fn nbar(n: usize) -> CuModel {
        CuModel::lsc(FinitePoset::antichain(n), ScalarKind::NBar)
    }

    #[test]
    fn nbar_axioms_hold() {
        let m = nbar(1);
        let r = check_axioms(&m, &Cap::full(&m, 4), &CheckOptions::default());
        assert!(r.holds(), "{}", r.render_text());
    }

    #[test]
    fn dominates_examples() {
        let m = nbar(1);
        let e = |s: &str| m.parse_element(s).unwrap();
        assert_eq!(dominates(&m, &e("5"), &e("1"), 16).unwrap(), Domination::Finite(5));
        assert_eq!(dominates(&m, &e("inf"), &e("1"), 16).unwrap(), Domination::OnlyInfinite);
        let m2 = nbar(2);
        let x = m2.parse_element("(1,1)").unwrap();
        let y = m2.parse_element("(1,0)").unwrap();
        assert_eq!(dominates(&m2, &x, &y, 16).unwrap(), Domination::No);
    }

    #[test]
    fn riesz_and_distributivity_on_antichain() {
        let m = nbar(2);
        let cap = Cap::full(&m, 3);
        assert!(check_riesz(&m, &cap).holds());
        assert!(check_inf_distributivity(&m, &cap, &CheckOptions::default()).holds());
    }
}
