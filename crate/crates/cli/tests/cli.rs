use std::path::PathBuf;
use std::process::{Command, Output};

use cuntz_cli::run::{reverify, run, RunConfig, RunResult, Suite};
use cuntz_cli::{load_model, parse_model, CliError, ModelSpec};
use cuntz_core::builtins::builtin;
use cuntz_core::{CuModel, ScalarKind};

fn cu(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_cu"))
        .args(args)
        .output()
        .expect("cu runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).into_owned()
}

fn temp_file(name: &str, content: &str) -> PathBuf {
    let dir = std::env::temp_dir().join(format!("cu-cli-tests-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let p = dir.join(name);
    std::fs::write(&p, content).unwrap();
    p
}

#[test]
fn parses_antichain_model() {
    let (_, m) = load_model("model lsc { poset { points = [a,b]; relations = []; } scalar = nbar; }").unwrap();
    assert_eq!(m, builtin("nbar2").unwrap());
}

#[test]
fn parses_chain_over_zcu() {
    let (spec, m) = load_model("model lsc { poset { points = [a,b]; relations = [a<=b]; } scalar = zcu; }").unwrap();
    assert_eq!(m, builtin("zcu-chain2").unwrap());
    let json = serde_json::to_string(&spec).unwrap();
    assert_eq!(parse_model(&json).unwrap(), spec);
    assert!(m.parse_element("(1,Soft(3/2))").is_ok());
    assert!(m.parse_element("(2,1)").is_err());
}

#[test]
fn table_models() {
    let text =
        "model table {\n  elements = [0, e, T];\n  sums { e + e = T; e + T = T; T + T = T; }\n  order = algebraic;\n}";
    let (_, m) = load_model(text).unwrap();
    let CuModel::Table(t) = &m else {
        panic!("table expected")
    };
    assert_eq!(t.len(), 3);
    assert!(m.le(&m.parse_element("e").unwrap(), &m.parse_element("T").unwrap()));
    // (a+a)+b = a but a+(a+b) = b
    let bad = "model table { elements = [0, a, b]; sums { a + a = b; a + b = b; b + b = a; } order = [a<=b]; }";
    match load_model(bad) {
        Err(CliError::Semantic(e)) => assert!(e.to_string().contains("associative"), "{e}"),
        other => panic!("expected a semantic error, got {other:?}"),
    }
    let missing = "model table { elements = [0, a]; }";
    assert!(matches!(load_model(missing), Err(CliError::Semantic(_))));
}

#[test]
fn semantic_and_syntax_errors() {
    let e =
        load_model("model lsc { poset { points = [a,b,c]; relations = [a<=b, b<=c]; } scalar = nbar; }").unwrap_err();
    assert!(e.to_string().contains("relation not transitive"), "{e}");
    let e = parse_model("model lsc {\n  poset { points = [a, b]; }\n  scalar nbar;\n}").unwrap_err();
    match e {
        CliError::Syntax { line, column, .. } => assert_eq!((line, column), (3, 10)),
        other => panic!("{other:?}"),
    }
    assert!(matches!(parse_model("model lsc {"), Err(CliError::Syntax { .. })));
    assert!(parse_model("model lsc { poset { points = [a]; } scalar = qq; }")
        .unwrap()
        .build()
        .is_err());
}

#[test]
fn builtin_and_json_forms() {
    assert_eq!(
        parse_model("model builtin torsion;").unwrap(),
        ModelSpec::Builtin { name: "torsion".into() }
    );
    let spec = parse_model(r#"{"kind": "lsc", "points": ["a"], "scalar": "zcu"}"#).unwrap();
    assert_eq!(spec.build().unwrap(), CuModel::scalar(ScalarKind::ZCu));
}

#[test]
fn check_axioms_exit_zero() {
    let f = temp_file(
        "m.cu",
        "model lsc { poset { points = [a,b]; relations = []; } scalar = nbar; }\n",
    );
    let o = cu(&[
        "check",
        "--model",
        f.to_str().unwrap(),
        "--suite",
        "axioms",
        "--cap",
        "4",
    ]);
    assert_eq!(o.status.code(), Some(0));
    let out = stdout(&o);
    assert!(out.starts_with("axioms: holds"), "{out}");
    assert!(out.ends_with("status: holds\n"));
}

#[test]
fn divisibility_reports_constants() {
    let o = cu(&["check", "--suite", "divisibility", "--k", "2", "--n", "2"]);
    assert_eq!(o.status.code(), Some(0));
    let out = stdout(&o);
    assert!(out.contains("M = 3") && out.contains("N = 5"), "{out}");
    assert!(out.contains("minimal_N="), "{out}");
}

#[test]
fn alpha_on_zcu() {
    let f = temp_file(
        "zcu.cu",
        "model lsc { poset { points = [p]; relations = []; } scalar = zcu; }\n",
    );
    let o = cu(&["alpha", "--model", f.to_str().unwrap(), "--f", "5/2"]);
    assert_eq!(o.status.code(), Some(0));
    let out = stdout(&o);
    assert!(out.contains("= Soft(5/2)") && out.contains("realized = true"), "{out}");
    let o = cu(&["alpha", "--model", "nbar", "--f", "1/2", "--format", "json"]);
    let v: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
    assert_eq!(v["outcome"], "elementary-obstruction");
    assert_eq!(o.status.code(), Some(1));
}

#[test]
fn rank_command() {
    let o = cu(&["rank", "--model", "zcu-chain2", "--x", "(1,Soft(2))"]);
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).starts_with("rank((1,Soft(2))) = (1,2)"));
}

#[test]
fn exit_codes() {
    assert_eq!(
        cu(&["check", "--model", "chain2", "--suite", "axioms", "--cap", "2"])
            .status
            .code(),
        Some(1)
    );
    assert_eq!(cu(&["check", "--suite", "nonsense"]).status.code(), Some(3));
    assert_eq!(
        cu(&["check", "--model", "no-such-model", "--suite", "axioms"])
            .status
            .code(),
        Some(3)
    );
    assert_eq!(
        cu(&["check", "--model", "model lsc {", "--suite", "axioms"])
            .status
            .code(),
        Some(3)
    );
    // pullbacks need an Lsc model; the error is embedded and siblings still run
    let o = cu(&[
        "check",
        "--model",
        "torsion-table",
        "--suite",
        "pullback,divisibility",
        "--format",
        "json",
        "--cap",
        "2",
    ]);
    assert_eq!(o.status.code(), Some(3));
    let v: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
    assert!(v["results"][0]["error"].is_string());
    assert_eq!(v["results"][1]["verdict"], "holds");
    assert_eq!(cu(&["--help"]).status.code(), Some(0));
}

#[test]
fn default_ceiling_from_environment() {
    let o = Command::new(env!("CARGO_BIN_EXE_cu"))
        .args(["check", "--suite", "riesz"])
        .env("CU_DEFAULT_CAP", "7")
        .output()
        .unwrap();
    assert!(stdout(&o).contains("ceiling=7"), "{}", stdout(&o));
    let o = cu(&["check", "--suite", "riesz"]);
    assert!(stdout(&o).contains("ceiling=4"));
}

#[test]
fn json_reports_round_trip_and_reverify() {
    let mut cfg = RunConfig::new(ModelSpec::Builtin { name: "torsion".into() }, Suite::ALL.to_vec(), 3);
    cfg.seed = 3;
    let result = run(&cfg).unwrap();
    let json = result.to_json();
    let back: RunResult = serde_json::from_str(&json).unwrap();
    assert_eq!(back.to_json(), json);
    assert!(reverify(&back).unwrap().is_empty());
    let f = temp_file("torsion.json", &json);
    let o = cu(&["report", f.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(result.status.code() as i32));
    assert!(stdout(&o).contains("re-verified: 8 suite result(s) reproduced"));
}

#[test]
fn tampered_report_is_detected() {
    let cfg = RunConfig::new(ModelSpec::Builtin { name: "nbar".into() }, vec![Suite::Riesz], 3);
    let mut result = run(&cfg).unwrap();
    result.results[0].verdict = Some(cuntz_core::Verdict::Fails);
    assert_eq!(reverify(&result).unwrap().len(), 1);
}

#[test]
fn checkers_run_in_declared_order() {
    let cfg = RunConfig::new(
        ModelSpec::Builtin { name: "nbar2".into() },
        vec![Suite::Riesz, Suite::Axioms],
        2,
    );
    let r = run(&cfg).unwrap();
    let order: Vec<Suite> = r.results.iter().map(|s| s.suite).collect();
    assert_eq!(order, vec![Suite::Riesz, Suite::Axioms]);
}
