//! Suite orchestration and output.

use std::fmt::Write as _;

use cuntz_core::axioms::{check_axioms, check_inf_distributivity, check_riesz};
use cuntz_core::divisibility::verify_cugg;
use cuntz_core::functionals::functional::grid_functionals;
use cuntz_core::functionals::rank::parse_rank;
use cuntz_core::functionals::{
    alpha, check_edwards, check_realization, comparison_suite, evaluate, functional_basis, rank, AlphaResult,
    ComparisonParams, ComparisonReport, RankFunction, Realization,
};
use cuntz_core::ideal::{grothendieck_interpolation, ideal_from_open, pullback_check};
use cuntz_core::parallel::set_jobs;
use cuntz_core::report::CheckOptions;
use cuntz_core::{Cap, CheckReport, CuError, CuModel, Element, Ext, Scalar, Verdict};
use serde::{Deserialize, Serialize};

use crate::error::CliError;
use crate::grammar::ModelSpec;

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Serialize, Deserialize, clap::ValueEnum)]
#[serde(rename_all = "lowercase")]
pub enum Suite {
    Axioms,
    Riesz,
    Distributivity,
    Divisibility,
    Edwards,
    Comparison,
    Pullback,
    Grothendieck,
}

impl Suite {
    pub const ALL: [Suite; 8] = [
        Suite::Axioms,
        Suite::Riesz,
        Suite::Distributivity,
        Suite::Divisibility,
        Suite::Edwards,
        Suite::Comparison,
        Suite::Pullback,
        Suite::Grothendieck,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Suite::Axioms => "axioms",
            Suite::Riesz => "riesz",
            Suite::Distributivity => "distributivity",
            Suite::Divisibility => "divisibility",
            Suite::Edwards => "edwards",
            Suite::Comparison => "comparison",
            Suite::Pullback => "pullback",
            Suite::Grothendieck => "grothendieck",
        }
    }
}

/// The enumeration window: an optional bound element (text form), the
/// ceiling on finite values and the denominator of soft values.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CapParams {
    pub bound: Option<String>,
    pub ceiling: u32,
    pub denominator: u32,
}

impl CapParams {
    pub fn build(&self, model: &CuModel) -> Result<Cap, CliError> {
        if self.ceiling == 0 || self.denominator == 0 {
            return Err(CliError::Usage("cap ceiling and denominator must be positive".into()));
        }
        match &self.bound {
            Some(b) => Ok(Cap::new(
                model,
                model.parse_element(b)?,
                self.ceiling,
                self.denominator,
            )?),
            None => Ok(Cap::with_denominator(model, self.ceiling, self.denominator)),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct RunConfig {
    pub model: ModelSpec,
    pub suites: Vec<Suite>,
    pub cap: CapParams,
    pub k: u64,
    pub n: u64,
    /// `m` values for m-comparison; empty selects the defaults.
    pub m: Vec<u32>,
    pub gamma: Option<String>,
    pub u: Option<String>,
    pub x: Option<String>,
    pub seed: u64,
    pub samples: usize,
    pub n_bound: u64,
    /// Worker threads; does not affect results.
    #[serde(skip, default = "one")]
    pub jobs: usize,
}

fn one() -> usize {
    1
}

impl RunConfig {
    pub fn new(model: ModelSpec, suites: Vec<Suite>, ceiling: u32) -> RunConfig {
        let opts = CheckOptions::default();
        RunConfig {
            model,
            suites,
            cap: CapParams {
                bound: None,
                ceiling,
                denominator: cuntz_core::cap::DEFAULT_DENOMINATOR,
            },
            k: 2,
            n: 2,
            m: Vec::new(),
            gamma: None,
            u: None,
            x: None,
            seed: opts.seed,
            samples: opts.samples,
            n_bound: opts.n_bound,
            jobs: 1,
        }
    }

    pub fn options(&self) -> CheckOptions {
        CheckOptions {
            seed: self.seed,
            samples: self.samples,
            n_bound: self.n_bound,
        }
    }
}

/// Exit status: 0 all hold, 1 some check fails, 2 only inconclusive
/// results, 3 usage or parse errors (including checker errors).
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum ExitStatus {
    Ok,
    Fails,
    Inconclusive,
    Error,
}

impl ExitStatus {
    pub fn code(self) -> u8 {
        match self {
            ExitStatus::Ok => 0,
            ExitStatus::Fails => 1,
            ExitStatus::Inconclusive => 2,
            ExitStatus::Error => 3,
        }
    }
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct SuiteResult {
    pub suite: Suite,
    /// Absent when the checker returned an error.
    pub verdict: Option<Verdict>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub report: Option<CheckReport>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub comparison: Option<ComparisonReport>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub error: Option<String>,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct RunResult {
    pub config: RunConfig,
    pub results: Vec<SuiteResult>,
    pub status: ExitStatus,
}

impl RunResult {
    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("reports serialize")
    }

    pub fn render_text(&self) -> String {
        let mut out = String::new();
        for r in &self.results {
            if let Some(c) = &r.comparison {
                out.push_str(&render_comparison(c));
            }
            if let Some(rep) = &r.report {
                out.push_str(&rep.render_text());
            }
            if let Some(e) = &r.error {
                let _ = writeln!(out, "{}: error: {e}", r.suite.name());
            }
        }
        let _ = writeln!(out, "status: {}", status_label(self.status));
        out
    }
}

fn status_label(s: ExitStatus) -> &'static str {
    match s {
        ExitStatus::Ok => "holds",
        ExitStatus::Fails => "fails",
        ExitStatus::Inconclusive => "inconclusive-at-cap",
        ExitStatus::Error => "error",
    }
}

fn render_comparison(c: &ComparisonReport) -> String {
    let mut out = format!(
        "comparison summary: almost unperforated {}, strict comparison {}\n",
        c.almost_unperforated, c.strict_comparison
    );
    for (m, v) in &c.m_comparison {
        let _ = writeln!(out, "  {m}-comparison: {v}");
    }
    for (key, v) in &c.local_weak {
        let _ = writeln!(out, "  local weak ({key})-comparison: {v}");
    }
    if let Some(rc) = &c.radius_of_comparison {
        let _ = writeln!(out, "  radius of comparison: {rc}");
    }
    out
}

/// The all-ones element of an Lsc model.
pub fn default_unit(model: &CuModel) -> Option<Element> {
    match model {
        CuModel::Lsc(m) => Some(Element::values(vec![Scalar::compact(1); m.poset.len()])),
        _ => None,
    }
}

fn unit(model: &CuModel, cfg: &RunConfig) -> Result<Option<Element>, CuError> {
    match &cfg.u {
        Some(u) => model.parse_element(u).map(Some),
        None => Ok(default_unit(model)),
    }
}

fn comparison_params(cfg: &RunConfig) -> Result<ComparisonParams, CuError> {
    let mut params = ComparisonParams::default();
    if !cfg.m.is_empty() {
        params.ms = cfg.m.clone();
    }
    if let Some(g) = &cfg.gamma {
        let gamma = g
            .parse::<Ext>()?
            .finite()
            .ok_or_else(|| CuError::Precondition("gamma must be finite".into()))?;
        params.local = params.ms.iter().map(|&m| (m, gamma)).collect();
    }
    Ok(params)
}

/// Folds per-item reports into one parent report.
fn combine(name: &str, model: &CuModel, cap: &Cap, parts: Vec<CheckReport>) -> CheckReport {
    let mut r = CheckReport::new(name, model, &cap.describe(model));
    r.stats.tuples = parts.iter().map(|p| p.stats.tuples).sum();
    r.stats.cap_size = parts.iter().map(|p| p.stats.cap_size).max().unwrap_or(0);
    for p in parts {
        r.push_part(p);
    }
    r
}

fn run_suite(suite: Suite, model: &CuModel, cap: &Cap, cfg: &RunConfig) -> Result<SuiteResult, CuError> {
    let opts = cfg.options();
    let report = match suite {
        Suite::Axioms => check_axioms(model, cap, &opts),
        Suite::Riesz => check_riesz(model, cap),
        Suite::Distributivity => check_inf_distributivity(model, cap, &opts),
        Suite::Divisibility => {
            let x = cfg.x.as_deref().map(|x| model.parse_element(x)).transpose()?;
            verify_cugg(model, x.as_ref(), cfg.k, cfg.n, cap, &opts)?
        }
        Suite::Edwards => {
            let parts = grid_functionals(model, cap.denominator)?
                .iter()
                .map(|l| check_edwards(model, l, cap))
                .collect::<Result<Vec<_>, _>>()?;
            combine("edwards-grid", model, cap, parts)
        }
        Suite::Comparison => {
            let u = unit(model, cfg)?;
            let c = comparison_suite(model, u.as_ref(), cap, &comparison_params(cfg)?, &opts)?;
            return Ok(SuiteResult {
                suite,
                verdict: Some(c.report.verdict),
                report: None,
                comparison: Some(c),
                error: None,
            });
        }
        Suite::Pullback => {
            let CuModel::Lsc(l) = model else {
                return Err(CuError::Unsupported("pullbacks are checked on Lsc models".into()));
            };
            let opens = l.poset.open_sets();
            let mut parts = Vec::new();
            for u in &opens {
                for v in &opens {
                    let i = ideal_from_open(model, u)?;
                    let j = ideal_from_open(model, v)?;
                    parts.push(pullback_check(model, &i, &j, cap));
                }
            }
            combine("pullback-open-sets", model, cap, parts)
        }
        Suite::Grothendieck => {
            let u = unit(model, cfg)?.ok_or_else(|| CuError::Precondition("this model needs --u".into()))?;
            grothendieck_interpolation(model, &u, cap, &opts)?
        }
    };
    Ok(SuiteResult {
        suite,
        verdict: Some(report.verdict),
        report: Some(report),
        comparison: None,
        error: None,
    })
}

fn overall(results: &[SuiteResult]) -> ExitStatus {
    let verdicts: Vec<Option<Verdict>> = results.iter().map(|r| r.verdict).collect();
    if verdicts.contains(&Some(Verdict::Fails)) {
        ExitStatus::Fails
    } else if verdicts.contains(&None) {
        ExitStatus::Error
    } else if verdicts.contains(&Some(Verdict::Inconclusive)) {
        ExitStatus::Inconclusive
    } else {
        ExitStatus::Ok
    }
}

/// Runs the configured suites in order. Model and cap errors abort the run;
/// a checker error is recorded in its suite's result.
pub fn run(cfg: &RunConfig) -> Result<RunResult, CliError> {
    if cfg.k == 0 || cfg.n == 0 {
        return Err(CliError::Usage("--k and --n must be positive".into()));
    }
    let model = cfg.model.build().map_err(CliError::Semantic)?;
    let cap = cfg.cap.build(&model)?;
    set_jobs(cfg.jobs);
    let results: Vec<SuiteResult> = cfg
        .suites
        .iter()
        .map(|&s| {
            run_suite(s, &model, &cap, cfg).unwrap_or_else(|e| SuiteResult {
                suite: s,
                verdict: None,
                report: None,
                comparison: None,
                error: Some(e.to_string()),
            })
        })
        .collect();
    let status = overall(&results);
    Ok(RunResult {
        config: cfg.clone(),
        results,
        status,
    })
}

/// Re-runs a stored result's configuration and compares every suite
/// result; also re-checks that each recorded element belongs to the model.
/// Returns the discrepancies found.
pub fn reverify(stored: &RunResult) -> Result<Vec<String>, CliError> {
    let model = stored.config.model.build().map_err(CliError::Semantic)?;
    let mut issues = Vec::new();
    for r in &stored.results {
        let reports = r.report.iter().chain(r.comparison.iter().map(|c| &c.report));
        for rep in reports {
            for inst in rep.all_counterexamples() {
                for (role, item) in &inst.roles {
                    if let cuntz_core::Item::Element(e) = item {
                        if let Err(err) = model.check(e) {
                            issues.push(format!("{}: {role} of [{}]: {err}", r.suite.name(), inst.property));
                        }
                    }
                }
            }
        }
    }
    let fresh = run(&stored.config)?;
    for (old, new) in stored.results.iter().zip(&fresh.results) {
        let (a, b) = (serde_json::to_value(old), serde_json::to_value(new));
        if a.ok() != b.ok() {
            issues.push(format!(
                "{}: re-run differs (stored {:?}, now {:?})",
                old.suite.name(),
                old.verdict,
                new.verdict
            ));
        }
    }
    if stored.results.len() != fresh.results.len() || stored.status != fresh.status {
        issues.push("overall status differs on re-run".into());
    }
    Ok(issues)
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct AlphaOutput {
    pub model: String,
    pub f: String,
    pub alpha: AlphaResult,
    pub realized: bool,
    pub outcome: Realization,
    pub report: CheckReport,
}

impl AlphaOutput {
    pub fn render_text(&self) -> String {
        format!(
            "α({}) = {}\nrealized = {}\noutcome = {}\nverified = {}\n",
            self.f,
            self.alpha.display,
            self.realized,
            self.outcome.label(),
            self.alpha.verified
        )
    }

    pub fn status(&self) -> ExitStatus {
        overall(&[SuiteResult {
            suite: Suite::Comparison,
            verdict: Some(self.report.verdict.and(self.alpha.verified)),
            report: None,
            comparison: None,
            error: None,
        }])
    }
}

/// `α(f)` with its realization outcome.
pub fn alpha_command(model: &CuModel, f: &str, cap: &Cap) -> Result<AlphaOutput, CliError> {
    let rf = parse_rank(model, f)?;
    let a = alpha(model, &rf, cap)?;
    let (outcome, report) = check_realization(model, &rf, cap)?;
    Ok(AlphaOutput {
        model: model.describe(),
        f: rf.describe(),
        alpha: a,
        realized: report.holds(),
        outcome,
        report,
    })
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct RankOutput {
    pub model: String,
    pub x: String,
    pub rank: RankFunction,
    /// `(functional, value)` for each basis functional.
    pub values: Vec<(String, Ext)>,
}

impl RankOutput {
    pub fn render_text(&self) -> String {
        let mut out = format!("rank({}) = {}\n", self.x, self.rank.describe());
        for (l, v) in &self.values {
            let _ = writeln!(out, "  {l}: {v}");
        }
        out
    }
}

/// The rank function `x̂` and its values on the functional basis.
pub fn rank_command(model: &CuModel, x: &str) -> Result<RankOutput, CliError> {
    let e = model.parse_element(x)?;
    let values = functional_basis(model)?
        .iter()
        .map(|l| Ok((l.describe(), evaluate(model, l, &e)?)))
        .collect::<Result<Vec<_>, CuError>>()?;
    Ok(RankOutput {
        model: model.describe(),
        x: model.fmt_element(&e),
        rank: rank(model, &e)?,
        values,
    })
}
