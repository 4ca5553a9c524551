//! Acceptance suite: one PASS/FAIL line per criterion.
//!
//! A criterion may fail in a known, documented way (see `Outcome::known`);
//! the target then still exits successfully as long as the failure matches
//! the documented pattern exactly.

use std::process::{Command, ExitCode};
use std::time::{Duration, Instant};

use cuntz_cli::run::{run, RunConfig, Suite};
use cuntz_cli::ModelSpec;
use cuntz_core::axioms::{check_axioms, check_inf_distributivity, check_riesz};
use cuntz_core::builtins::{axiom_suite_models, builtin, lsc_over_small_posets};
use cuntz_core::divisibility::{constant_m, constant_n_cugg, verify_cugg};
use cuntz_core::functionals::functional::grid_functionals;
use cuntz_core::functionals::{
    alpha, check_edwards, check_hat_preserves_inf, check_realization, comparison_suite, dimension_function_cone, rank,
    ComparisonParams, RankFunction, Realization,
};
use cuntz_core::ideal::{ideal_from_open, pullback_check};
use cuntz_core::report::CheckOptions;
use cuntz_core::{Cap, CapIndex, CuModel, Element, Ext, Scalar, ScalarKind, Verdict};

struct Outcome {
    pass: bool,
    detail: String,
    /// Set when the criterion fails exactly as documented.
    known: Option<String>,
}

impl Outcome {
    fn new(pass: bool, detail: impl Into<String>) -> Outcome {
        Outcome {
            pass,
            detail: detail.into(),
            known: None,
        }
    }
}

fn lsc_poset(m: &CuModel) -> Option<&cuntz_core::FinitePoset> {
    match m {
        CuModel::Lsc(l) => Some(&l.poset),
        _ => None,
    }
}

fn is_antichain(m: &CuModel) -> bool {
    lsc_poset(m).is_some_and(|p| p.strict_pairs().next().is_none())
}

fn ones(m: &CuModel) -> Element {
    Element::values(vec![Scalar::compact(1); lsc_poset(m).unwrap().len()])
}

fn within(limit: Duration, start: Instant) -> bool {
    start.elapsed() <= limit
}

fn criterion_1() -> Outcome {
    let start = Instant::now();
    let opts = CheckOptions::default();
    let mut o5_failures = Vec::new();
    let mut other_failures = Vec::new();
    let models = axiom_suite_models();
    for m in &models {
        let r = check_axioms(m, &Cap::full(m, 4), &opts);
        for p in &r.parts {
            if p.verdict == Verdict::Holds {
                continue;
            }
            if p.name == "O5" && p.verdict == Verdict::Fails {
                o5_failures.push(m.clone());
            } else {
                other_failures.push(format!("{} {} {}", m.describe(), p.name, p.verdict));
            }
        }
        let wc = r.find_part("weak-cancellation").unwrap();
        if wc.facts.get("forms_equivalent").map(String::as_str) != Some("true") {
            other_failures.push(format!("{} weak-cancellation forms disagree", m.describe()));
        }
    }
    let fast = within(Duration::from_secs(60), start);
    let pass = o5_failures.is_empty() && other_failures.is_empty() && fast;
    let mut out = Outcome::new(
        pass,
        format!(
            "{} models, O5 fails on {}, other failures {:?}, {:.1}s",
            models.len(),
            o5_failures.len(),
            other_failures,
            start.elapsed().as_secs_f64()
        ),
    );
    // documented: O5 fails exactly on the Lsc(ℕ̄) models whose poset is not an antichain
    let o5_pattern = models
        .iter()
        .all(|m| o5_failures.contains(m) == (lsc_poset(m).is_some_and(|p| p.len() > 1) && !is_antichain(m)));
    if !pass && other_failures.is_empty() && fast && o5_pattern {
        out.known =
            Some("O5 fails on every non-antichain poset (compact (0,1) ≤ (1,1) has no monotone complement)".into());
    }
    out
}

fn criterion_2() -> Outcome {
    let start = Instant::now();
    let opts = CheckOptions::default();
    let mut problems = Vec::new();
    let lsc: Vec<CuModel> = axiom_suite_models()
        .into_iter()
        .filter(|m| matches!(m, CuModel::Lsc(_)))
        .collect();
    for m in &lsc {
        let cap = Cap::full(m, 4);
        let torsion = matches!(m, CuModel::Lsc(l) if l.kind == ScalarKind::Torsion);
        if !check_riesz(m, &cap).holds() {
            problems.push(format!("{} riesz", m.describe()));
        }
        let idx = CapIndex::new(m, &cap);
        let es = idx.cap_elements();
        if es
            .iter()
            .any(|x| es.iter().any(|y| m.infimum(x, y).ok().flatten().is_none()))
        {
            problems.push(format!("{} infimum missing", m.describe()));
        }
        let d = check_inf_distributivity(m, &cap, &opts);
        if torsion {
            let ce = d.all_counterexamples();
            let documented = ce.iter().any(|c| {
                c.property == "multiple-distributivity"
                    && c.element("x").map(|x| m.fmt_element(x)).as_deref() == Some("1")
                    && c.element("y").map(|y| m.fmt_element(y)).as_deref() == Some("1t")
                    && c.count("n") == Some(2)
            });
            let only_multiple = ce.iter().all(|c| c.property == "multiple-distributivity");
            if !(d.fails() && documented && only_multiple) {
                problems.push(format!("torsion distributivity: {}", d.verdict));
            }
        } else if !d.holds() {
            problems.push(format!("{} distributivity {}", m.describe(), d.verdict));
        }
    }
    let pass = problems.is_empty() && within(Duration::from_secs(120), start);
    Outcome::new(
        pass,
        format!(
            "{} Lsc models; torsion fails at x=e, y=e_t, n=2; problems {:?}, {:.1}s",
            lsc.len(),
            problems,
            start.elapsed().as_secs_f64()
        ),
    )
}

fn oracle_m(k: u64, n: u64) -> u64 {
    (1..=k)
        .map(|r| n.pow(r as u32) * (k - r) + n.pow(r as u32 - 1))
        .max()
        .unwrap()
}

fn criterion_3() -> Outcome {
    let start = Instant::now();
    let opts = CheckOptions::default();
    let mut problems = Vec::new();
    for (k, n, m, nc) in [(2, 2, 3, 5), (3, 2, 6, 16)] {
        if constant_m(k, n).unwrap() != m || oracle_m(k, n) != m {
            problems.push(format!("M({k},{n})"));
        }
        if constant_n_cugg(k, n).unwrap() != nc || k * (oracle_m(k, n) - 1) + 1 != nc {
            problems.push(format!("N({k},{n})"));
        }
    }
    let lsc: Vec<CuModel> = axiom_suite_models()
        .into_iter()
        .filter(|m| matches!(m, CuModel::Lsc(_)))
        .collect();
    let mut instances = 0u64;
    let mut worst = 0u64;
    for m in &lsc {
        let cap = Cap::full(m, 6);
        for k in [2, 3] {
            for n in [1, 2] {
                let r = verify_cugg(m, None, k, n, &cap, &opts).unwrap();
                let body = r.find_part("implication").unwrap();
                let bound = constant_n_cugg(k, n).unwrap();
                let max: u64 = body.facts["max_minimal_N"].parse().unwrap();
                instances += body.facts["weakly_divisible_instances"].parse::<u64>().unwrap();
                worst = worst.max(max);
                if max > bound || body.fails() || body.notes.iter().any(|n| n.contains("bound exceeded")) {
                    problems.push(format!("{} k={k} n={n}: minimal N {max} > {bound}", m.describe()));
                }
            }
        }
    }
    let pass = problems.is_empty() && within(Duration::from_secs(600), start);
    Outcome::new(
        pass,
        format!(
            "M(2,2)=3, N(2,2)=5, N(3,2)=16; {} models, {instances} weakly divisible instances, largest minimal N {worst}; problems {:?}, {:.1}s",
            lsc.len(),
            problems,
            start.elapsed().as_secs_f64()
        ),
    )
}

fn criterion_4() -> Outcome {
    let start = Instant::now();
    let mut problems = Vec::new();
    let mut count = 0;
    for name in ["nbar2", "chain2"] {
        let m = builtin(name).unwrap();
        let cap = Cap::full(&m, 4);
        for d in 1..=8 {
            for l in grid_functionals(&m, d).unwrap() {
                count += 1;
                let r = check_edwards(&m, &l, &cap).unwrap();
                let checks: u64 = r.facts["vertex_attainment_checks"].parse().unwrap();
                if !r.holds() || checks == 0 {
                    problems.push(format!("{name} {}", l.describe()));
                }
            }
        }
    }
    let pass = problems.is_empty() && within(Duration::from_secs(300), start);
    Outcome::new(
        pass,
        format!(
            "{count} grid functionals on ℕ̄² and the 2-chain; problems {:?}, {:.1}s",
            problems,
            start.elapsed().as_secs_f64()
        ),
    )
}

fn criterion_5() -> Outcome {
    let mut problems = Vec::new();
    let lsc: Vec<CuModel> = axiom_suite_models()
        .into_iter()
        .filter(|m| matches!(m, CuModel::Lsc(_)))
        .collect();
    for m in &lsc {
        let r = check_hat_preserves_inf(m, &Cap::full(m, 4)).unwrap();
        if !r.holds() {
            problems.push(m.describe());
        }
    }
    let t = builtin("torsion").unwrap();
    let (e, f) = (t.parse_element("1").unwrap(), t.parse_element("1t").unwrap());
    let lhs = t.meet(&t.times(&e, 2), &t.times(&f, 2)).unwrap();
    let rhs = t.times(&t.meet(&e, &f).unwrap(), 2);
    let hats_equal = rank(&t, &lhs).unwrap() == rank(&t, &rhs).unwrap();
    let elements_differ = lhs != rhs;
    let pass = problems.is_empty() && hats_equal && elements_differ;
    Outcome::new(
        pass,
        format!(
            "{} Lsc models; torsion 2e∧2f = {}, 2(e∧f) = {}, hats equal {hats_equal}; problems {:?}",
            lsc.len(),
            t.fmt_element(&lhs),
            t.fmt_element(&rhs),
            problems
        ),
    )
}

fn criterion_6() -> Outcome {
    let start = Instant::now();
    let mut problems = Vec::new();
    let z = builtin("zcu").unwrap();
    let zcap = Cap::with_denominator(&z, 6, 8);
    let mut grid: Vec<Ext> = Vec::new();
    for q in 1..=8 {
        for p in 1..=6 * q {
            grid.push(Ext::ratio(p, q));
        }
    }
    grid.sort();
    grid.dedup();
    for &v in &grid {
        let f = RankFunction { values: vec![v] };
        let (outcome, r) = check_realization(&z, &f, &zcap).unwrap();
        if outcome != Realization::Realized || !r.holds() {
            problems.push(format!("zcu f={v}: {}", outcome.label()));
        }
    }
    for n in 0..=6u32 {
        let f = rank(&z, &Element::scalar(Scalar::compact(n))).unwrap();
        let a = alpha(&z, &f, &zcap).unwrap();
        if a.value != Element::scalar(Scalar::soft(Ext::int(n as i64))) || a.verified != Verdict::Holds {
            problems.push(format!("α({n}̂) = {}", a.display));
        }
    }
    let p = CuModel::lsc(cuntz_core::FinitePoset::point(), ScalarKind::NBar);
    let pcap = Cap::with_denominator(&p, 6, 8);
    let mut obstructions = 0;
    for v in grid.iter().filter(|v| v.finite().is_some_and(|r| !r.is_integer())) {
        let (outcome, _) = check_realization(&p, &RankFunction { values: vec![*v] }, &pcap).unwrap();
        if outcome == Realization::ElementaryObstruction {
            obstructions += 1;
        } else {
            problems.push(format!("Lsc(point) f={v}: {}", outcome.label()));
        }
    }
    let pass = problems.is_empty() && within(Duration::from_secs(60), start);
    Outcome::new(
        pass,
        format!(
            "{} ZCu grid values realized, α(n̂)=Soft(n) for n≤6, {obstructions} elementary obstructions on Lsc(point); problems {:?}, {:.1}s",
            grid.len(),
            problems,
            start.elapsed().as_secs_f64()
        ),
    )
}

fn criterion_7() -> Outcome {
    let mut pairs = 0;
    let mut problems = Vec::new();
    for m in lsc_over_small_posets(3, ScalarKind::NBar) {
        let opens = lsc_poset(&m).unwrap().open_sets();
        let cap = Cap::full(&m, 3);
        for u in &opens {
            for v in &opens {
                pairs += 1;
                let r = pullback_check(
                    &m,
                    &ideal_from_open(&m, u).unwrap(),
                    &ideal_from_open(&m, v).unwrap(),
                    &cap,
                );
                if !r.holds() {
                    problems.push(format!("{} {:?} {:?}", m.describe(), u, v));
                }
            }
        }
    }
    Outcome::new(
        problems.is_empty(),
        format!("{pairs} ideal pairs on posets with ≤3 points; problems {:?}", problems),
    )
}

fn criterion_8() -> Outcome {
    let start = Instant::now();
    let opts = CheckOptions::default();
    let params = ComparisonParams::default();
    let mut problems = Vec::new();
    let mut models: Vec<CuModel> = [
        "nbar",
        "nbar2",
        "chain2",
        "zcu",
        "zcu-chain2",
        "torsion",
        "torsion-table",
    ]
    .iter()
    .map(|n| builtin(n).unwrap())
    .collect();
    models.extend(lsc_over_small_posets(3, ScalarKind::NBar));
    let mut rc_checked = 0;
    for m in &models {
        let u = matches!(m, CuModel::Lsc(_)).then(|| ones(m));
        let c = comparison_suite(m, u.as_ref(), &Cap::full(m, 3), &params, &opts).unwrap();
        if c.almost_unperforated != c.strict_comparison {
            problems.push(format!(
                "{}: AU {} vs SC {}",
                m.describe(),
                c.almost_unperforated,
                c.strict_comparison
            ));
        }
        if matches!(m, CuModel::Lsc(l) if l.kind == ScalarKind::NBar) {
            rc_checked += 1;
            if c.radius_of_comparison != Some(Ext::ZERO) {
                problems.push(format!("{}: rc = {:?}", m.describe(), c.radius_of_comparison));
            }
        }
    }
    let mut simplices = 0;
    for n in 1..=3 {
        let m = CuModel::lsc(cuntz_core::FinitePoset::antichain(n), ScalarKind::NBar);
        match dimension_function_cone(&m, &ones(&m), &Cap::full(&m, 3), &opts) {
            Ok(c) if c.simplex && c.vertices.len() == n => simplices += 1,
            Ok(c) => problems.push(format!(
                "antichain {n}: simplex {} with {} vertices",
                c.simplex,
                c.vertices.len()
            )),
            Err(e) => problems.push(format!("antichain {n}: {e}")),
        }
    }
    Outcome::new(
        problems.is_empty(),
        format!(
            "AU = SC on {} models, rc = 0 on {rc_checked} Lsc(ℕ̄) models, {simplices}/3 antichain cones are simplices; problems {:?}, {:.1}s",
            models.len(),
            problems,
            start.elapsed().as_secs_f64()
        ),
    )
}

fn criterion_9() -> Outcome {
    let mut problems = Vec::new();
    for name in ["nbar2", "chain2", "zcu", "torsion"] {
        let mut cfg = RunConfig::new(ModelSpec::Builtin { name: name.into() }, Suite::ALL.to_vec(), 3);
        cfg.seed = 7;
        let a = run(&cfg).unwrap().to_json();
        cfg.jobs = 4;
        let b = run(&cfg).unwrap().to_json();
        if a != b {
            problems.push(format!("{name}: library runs differ"));
        }
    }
    let bin = env!("CARGO_BIN_EXE_cu");
    let invoke = || {
        Command::new(bin)
            .args([
                "check",
                "--model",
                "nbar2",
                "--suite",
                "axioms,distributivity,comparison",
                "--cap",
                "3",
            ])
            .args(["--seed", "11", "--samples", "500", "--format", "json"])
            .output()
            .expect("cu runs")
            .stdout
    };
    let (x, y) = (invoke(), invoke());
    if x != y || x.is_empty() {
        problems.push("binary runs differ".into());
    }
    Outcome::new(
        problems.is_empty(),
        format!(
            "library and binary JSON byte-identical across runs; problems {:?}",
            problems
        ),
    )
}

type Criterion = (u32, &'static str, fn() -> Outcome);

fn main() -> ExitCode {
    let criteria: [Criterion; 9] = [
        (1, "axiom suite on built-in models", criterion_1),
        (2, "Riesz, infima and distributivity", criterion_2),
        (3, "divisibility constants and bound", criterion_3),
        (4, "Edwards' condition", criterion_4),
        (5, "hat/infimum compatibility", criterion_5),
        (6, "alpha realization", criterion_6),
        (7, "pullbacks of open-set ideals", criterion_7),
        (8, "comparison, radius and state cones", criterion_8),
        (9, "determinism", criterion_9),
    ];
    let mut unexpected = 0;
    for (id, name, f) in criteria {
        let o = f();
        let label = if o.pass { "PASS" } else { "FAIL" };
        println!("{label} criterion {id} ({name}): {}", o.detail);
        if let Some(k) = &o.known {
            println!("     known deviation: {k}");
        } else if !o.pass {
            unexpected += 1;
        }
    }
    if unexpected == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
