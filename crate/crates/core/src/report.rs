//! Check reports: verdicts, counterexamples and witnesses.

use std::collections::BTreeMap;
use std::fmt;
use std::time::Duration;

use serde::{Deserialize, Serialize};

use crate::ext::Ext;
use crate::model::{CuModel, Element};

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum Verdict {
    #[serde(rename = "holds")]
    Holds,
    #[serde(rename = "inconclusive-at-cap")]
    Inconclusive,
    #[serde(rename = "fails")]
    Fails,
}

impl Verdict {
    /// The weaker of two verdicts (`fails` dominates, then inconclusive).
    pub fn and(self, other: Verdict) -> Verdict {
        self.max(other)
    }

    pub fn from_bool(b: bool) -> Verdict {
        if b {
            Verdict::Holds
        } else {
            Verdict::Fails
        }
    }
}

impl fmt::Display for Verdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Verdict::Holds => "holds",
            Verdict::Fails => "fails",
            Verdict::Inconclusive => "inconclusive-at-cap",
        })
    }
}

/// One entry of a witness or counterexample tuple.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Item {
    Element(Element),
    Count(u64),
    Ratio(Ext),
    Text(String),
}

/// A named tuple such as `(x'=1, x=2, z=3)` tagged with the property it
/// witnesses or violates.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Instance {
    pub property: String,
    pub roles: Vec<(String, Item)>,
    /// Human-readable rendering (element text forms).
    pub display: String,
}

impl Instance {
    pub fn new(model: &CuModel, property: &str, roles: Vec<(&str, Item)>) -> Instance {
        let display = roles
            .iter()
            .map(|(r, it)| {
                let v = match it {
                    Item::Element(e) => model.fmt_element(e),
                    Item::Count(n) => n.to_string(),
                    Item::Ratio(r) => r.to_string(),
                    Item::Text(t) => t.clone(),
                };
                format!("{r}={v}")
            })
            .collect::<Vec<_>>()
            .join(", ");
        Instance {
            property: property.to_string(),
            roles: roles.into_iter().map(|(r, i)| (r.to_string(), i)).collect(),
            display,
        }
    }

    pub fn element(&self, role: &str) -> Option<&Element> {
        self.roles.iter().find_map(|(r, it)| match it {
            Item::Element(e) if r == role => Some(e),
            _ => None,
        })
    }

    pub fn elements(&self, prefix: &str) -> Vec<&Element> {
        self.roles
            .iter()
            .filter_map(|(r, it)| match it {
                Item::Element(e) if r.starts_with(prefix) => Some(e),
                _ => None,
            })
            .collect()
    }

    pub fn count(&self, role: &str) -> Option<u64> {
        self.roles.iter().find_map(|(r, it)| match it {
            Item::Count(n) if r == role => Some(*n),
            _ => None,
        })
    }

    pub fn ratio(&self, role: &str) -> Option<Ext> {
        self.roles.iter().find_map(|(r, it)| match it {
            Item::Ratio(x) if r == role => Some(*x),
            _ => None,
        })
    }
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct Stats {
    pub cap_size: u64,
    pub tuples: u64,
    /// Total violations found (only the first few are recorded).
    pub violations: u64,
    #[serde(skip)]
    pub elapsed: Duration,
}

/// Upper bound on recorded counterexamples and witnesses per report.
pub const MAX_RECORDED: usize = 16;

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CheckReport {
    pub name: String,
    pub model: String,
    pub cap: String,
    pub verdict: Verdict,
    pub counterexamples: Vec<Instance>,
    pub witnesses: Vec<Instance>,
    pub notes: Vec<String>,
    /// Named findings such as constants or computed values.
    pub facts: BTreeMap<String, String>,
    pub parts: Vec<CheckReport>,
    pub stats: Stats,
}

impl CheckReport {
    pub fn new(name: &str, model: &CuModel, cap: &str) -> CheckReport {
        CheckReport {
            name: name.to_string(),
            model: model.describe(),
            cap: cap.to_string(),
            verdict: Verdict::Holds,
            counterexamples: Vec::new(),
            witnesses: Vec::new(),
            notes: Vec::new(),
            facts: BTreeMap::new(),
            parts: Vec::new(),
            stats: Stats::default(),
        }
    }

    pub fn fail(&mut self, inst: Instance) {
        self.verdict = Verdict::Fails;
        self.stats.violations += 1;
        if self.counterexamples.len() < MAX_RECORDED {
            self.counterexamples.push(inst);
        }
    }

    pub fn inconclusive(&mut self, note: impl Into<String>) {
        self.verdict = self.verdict.and(Verdict::Inconclusive);
        let note = note.into();
        if self.notes.len() < MAX_RECORDED && !self.notes.contains(&note) {
            self.notes.push(note);
        }
    }

    pub fn witness(&mut self, inst: Instance) {
        if self.witnesses.len() < MAX_RECORDED {
            self.witnesses.push(inst);
        }
    }

    pub fn note(&mut self, note: impl Into<String>) {
        let note = note.into();
        if !self.notes.contains(&note) {
            self.notes.push(note);
        }
    }

    pub fn fact(&mut self, key: &str, value: impl ToString) {
        self.facts.insert(key.to_string(), value.to_string());
    }

    /// Adds a sub-report and folds its verdict into this one.
    pub fn push_part(&mut self, part: CheckReport) {
        self.verdict = self.verdict.and(part.verdict);
        self.stats.tuples += part.stats.tuples;
        self.parts.push(part);
    }

    pub fn holds(&self) -> bool {
        self.verdict == Verdict::Holds
    }

    pub fn fails(&self) -> bool {
        self.verdict == Verdict::Fails
    }

    /// All counterexamples, including those of sub-reports.
    pub fn all_counterexamples(&self) -> Vec<&Instance> {
        let mut out: Vec<&Instance> = self.counterexamples.iter().collect();
        for p in &self.parts {
            out.extend(p.all_counterexamples());
        }
        out
    }

    pub fn find_part(&self, name: &str) -> Option<&CheckReport> {
        if self.name == name {
            return Some(self);
        }
        self.parts.iter().find_map(|p| p.find_part(name))
    }

    /// Indented multi-line rendering.
    pub fn render_text(&self) -> String {
        let mut out = String::new();
        self.render_into(&mut out, 0);
        out
    }

    fn render_into(&self, out: &mut String, depth: usize) {
        let pad = "  ".repeat(depth);
        out.push_str(&format!("{pad}{}: {}", self.name, self.verdict));
        if depth == 0 {
            out.push_str(&format!("  [{}; {}]", self.model, self.cap));
        }
        out.push_str(&format!("  ({} tuples)\n", self.stats.tuples));
        for (k, v) in &self.facts {
            out.push_str(&format!("{pad}  {k} = {v}\n"));
        }
        for n in &self.notes {
            out.push_str(&format!("{pad}  note: {n}\n"));
        }
        for c in &self.counterexamples {
            out.push_str(&format!("{pad}  counterexample [{}]: {}\n", c.property, c.display));
        }
        for w in self.witnesses.iter().take(4) {
            out.push_str(&format!("{pad}  witness [{}]: {}\n", w.property, w.display));
        }
        for p in &self.parts {
            p.render_into(out, depth + 1);
        }
    }
}

/// Builds an [`Item::Element`].
pub fn el(e: &Element) -> Item {
    Item::Element(e.clone())
}

/// Search and sampling parameters shared by checkers.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CheckOptions {
    /// Seed for sampled quantifier ranges that are too large to enumerate.
    pub seed: u64,
    /// Number of sampled tuples when a range exceeds this size.
    pub samples: usize,
    /// Bound on multiplicities searched for unbounded `∃n` quantifiers.
    pub n_bound: u64,
}

impl Default for CheckOptions {
    fn default() -> Self {
        CheckOptions {
            seed: 0,
            samples: 20_000,
            n_bound: 16,
        }
    }
}
