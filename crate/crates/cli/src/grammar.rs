//! Model descriptions: a small braces-and-semicolons text format and its
//! JSON equivalent.
//!
//! ```text
//! # two incomparable points over ℕ̄
//! model lsc {
//!     poset { points = [a, b]; relations = []; }
//!     scalar = nbar;
//! }
//!
//! model table {
//!     elements = [0, e, T];
//!     sums { e + e = T; e + T = T; T + T = T; }
//!     order = algebraic;          # or a list such as [e<=T]
//! }
//!
//! model builtin nbar2;
//! ```
//!
//! In tables the first element is the zero, `0 + x = x` and commutativity
//! are implied, and every other sum must be listed.

use std::collections::BTreeMap;

use cuntz_core::builtins::builtin;
use cuntz_core::model::TableModel;
use cuntz_core::{CuError, CuModel, FinitePoset, ScalarKind};
use serde::{Deserialize, Serialize};

use crate::error::CliError;

/// A parsed model description; also the JSON input format.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "lowercase")]
pub enum ModelSpec {
    Builtin {
        name: String,
    },
    Lsc {
        points: Vec<String>,
        #[serde(default)]
        relations: Vec<(String, String)>,
        scalar: String,
    },
    Table {
        elements: Vec<String>,
        #[serde(default)]
        sums: Vec<(String, String, String)>,
        /// `None` selects the algebraic order.
        #[serde(default)]
        order: Option<Vec<(String, String)>>,
    },
}

impl ModelSpec {
    /// Validates the description and builds the model.
    pub fn build(&self) -> Result<CuModel, CuError> {
        match self {
            ModelSpec::Builtin { name } => builtin(name),
            ModelSpec::Lsc {
                points,
                relations,
                scalar,
            } => {
                let kind: ScalarKind = scalar.parse()?;
                let pairs = resolve_pairs(points, relations, "point")?;
                Ok(CuModel::lsc(FinitePoset::new(points.clone(), &pairs)?, kind))
            }
            ModelSpec::Table { elements, sums, order } => build_table(elements, sums, order.as_deref()),
        }
    }
}

fn lookup(names: &[String], name: &str, what: &str) -> Result<usize, CuError> {
    names
        .iter()
        .position(|n| n == name)
        .ok_or_else(|| CuError::Parse(format!("unknown {what} {name:?}")))
}

fn resolve_pairs(names: &[String], pairs: &[(String, String)], what: &str) -> Result<Vec<(usize, usize)>, CuError> {
    pairs
        .iter()
        .map(|(a, b)| Ok((lookup(names, a, what)?, lookup(names, b, what)?)))
        .collect()
}

fn build_table(
    elements: &[String],
    sums: &[(String, String, String)],
    order: Option<&[(String, String)]>,
) -> Result<CuModel, CuError> {
    let n = elements.len();
    if n == 0 {
        return Err(CuError::InvalidTable("no elements".into()));
    }
    let mut table: BTreeMap<(usize, usize), usize> = BTreeMap::new();
    for i in 0..n {
        table.insert((0, i), i);
        table.insert((i, 0), i);
    }
    for (a, b, c) in sums {
        let (i, j, k) = (
            lookup(elements, a, "element")?,
            lookup(elements, b, "element")?,
            lookup(elements, c, "element")?,
        );
        for key in [(i, j), (j, i)] {
            if let Some(&prev) = table.get(&key) {
                if prev != k {
                    return Err(CuError::InvalidTable(format!(
                        "conflicting sums for {a} + {b}: {} and {c}",
                        elements[prev]
                    )));
                }
            }
            table.insert(key, k);
        }
    }
    let mut add = vec![vec![0u32; n]; n];
    for (i, row) in add.iter_mut().enumerate() {
        for (j, v) in row.iter_mut().enumerate() {
            let k = table
                .get(&(i, j))
                .ok_or_else(|| CuError::InvalidTable(format!("sum {} + {} is not given", elements[i], elements[j])))?;
            *v = *k as u32;
        }
    }
    let pairs = match order {
        Some(p) => resolve_pairs(elements, p, "element")?,
        None => (0..n)
            .flat_map(|i| (0..n).map(move |k| (i, k)))
            .map(|(i, k)| (i, add[i][k] as usize))
            .collect(),
    };
    Ok(CuModel::Table(TableModel::new(elements.to_vec(), add, &pairs)?))
}

/// Parses a model description, in the text format or as JSON.
pub fn parse_model(text: &str) -> Result<ModelSpec, CliError> {
    if text.trim_start().starts_with('{') {
        return serde_json::from_str(text).map_err(|e| CliError::Syntax {
            line: e.line(),
            column: e.column(),
            message: e.to_string(),
        });
    }
    let mut p = Parser {
        toks: tokenize(text)?,
        pos: 0,
        end: end_position(text),
    };
    let spec = p.model()?;
    if let Some(t) = p.toks.get(p.pos) {
        return Err(t.error(format!("unexpected {:?} after the model", t.text)));
    }
    Ok(spec)
}

/// Parses and builds in one step.
pub fn load_model(text: &str) -> Result<(ModelSpec, CuModel), CliError> {
    let spec = parse_model(text)?;
    let model = spec.build().map_err(CliError::Semantic)?;
    Ok((spec, model))
}

#[derive(Clone, Debug)]
struct Token {
    text: String,
    line: usize,
    column: usize,
}

impl Token {
    fn error(&self, message: String) -> CliError {
        CliError::Syntax {
            line: self.line,
            column: self.column,
            message,
        }
    }
}

fn is_word_char(c: char) -> bool {
    c.is_alphanumeric() || matches!(c, '_' | '-' | '\'' | '.' | '/')
}

fn tokenize(text: &str) -> Result<Vec<Token>, CliError> {
    let mut toks = Vec::new();
    for (li, line) in text.lines().enumerate() {
        let chars: Vec<char> = line.chars().collect();
        let mut i = 0;
        while i < chars.len() {
            let c = chars[i];
            let (line, column) = (li + 1, i + 1);
            if c == '#' {
                break;
            } else if c.is_whitespace() {
                i += 1;
            } else if c == '<' && chars.get(i + 1) == Some(&'=') {
                toks.push(Token {
                    text: "<=".into(),
                    line,
                    column,
                });
                i += 2;
            } else if "{}[];,=+".contains(c) {
                toks.push(Token {
                    text: c.to_string(),
                    line,
                    column,
                });
                i += 1;
            } else if is_word_char(c) {
                let start = i;
                while i < chars.len() && is_word_char(chars[i]) {
                    i += 1;
                }
                toks.push(Token {
                    text: chars[start..i].iter().collect(),
                    line,
                    column,
                });
            } else {
                return Err(CliError::Syntax {
                    line,
                    column,
                    message: format!("unexpected character {c:?}"),
                });
            }
        }
    }
    Ok(toks)
}

fn end_position(text: &str) -> (usize, usize) {
    let lines: Vec<&str> = text.lines().collect();
    (lines.len().max(1), lines.last().map_or(1, |l| l.chars().count() + 1))
}

struct Parser {
    toks: Vec<Token>,
    pos: usize,
    end: (usize, usize),
}

impl Parser {
    fn peek(&self) -> Option<&str> {
        self.toks.get(self.pos).map(|t| t.text.as_str())
    }

    fn next(&mut self, expected: &str) -> Result<Token, CliError> {
        match self.toks.get(self.pos) {
            Some(t) => {
                self.pos += 1;
                Ok(t.clone())
            }
            None => Err(CliError::Syntax {
                line: self.end.0,
                column: self.end.1,
                message: format!("unexpected end of input, expected {expected}"),
            }),
        }
    }

    fn expect(&mut self, s: &str) -> Result<(), CliError> {
        let t = self.next(&format!("{s:?}"))?;
        if t.text == s {
            Ok(())
        } else {
            Err(t.error(format!("expected {s:?}, found {:?}", t.text)))
        }
    }

    fn word(&mut self, what: &str) -> Result<String, CliError> {
        let t = self.next(what)?;
        if t.text.chars().all(is_word_char) {
            Ok(t.text)
        } else {
            Err(t.error(format!("expected {what}, found {:?}", t.text)))
        }
    }

    fn model(&mut self) -> Result<ModelSpec, CliError> {
        self.expect("model")?;
        let kind = self.next("a model kind")?;
        match kind.text.as_str() {
            "builtin" => {
                let name = self.word("a built-in model name")?;
                if self.peek() == Some(";") {
                    self.pos += 1;
                }
                Ok(ModelSpec::Builtin { name })
            }
            "lsc" => self.lsc(),
            "table" => self.table(),
            other => Err(kind.error(format!("unknown model kind {other:?} (expected lsc, table or builtin)"))),
        }
    }

    fn lsc(&mut self) -> Result<ModelSpec, CliError> {
        self.expect("{")?;
        let (mut points, mut relations, mut scalar) = (None, Vec::new(), None);
        while self.peek() != Some("}") {
            let key = self.next("poset or scalar")?;
            match key.text.as_str() {
                "poset" => {
                    self.expect("{")?;
                    while self.peek() != Some("}") {
                        let k = self.next("points or relations")?;
                        self.expect("=")?;
                        match k.text.as_str() {
                            "points" => points = Some(self.list()?),
                            "relations" => relations = self.relations()?,
                            other => return Err(k.error(format!("unknown poset field {other:?}"))),
                        }
                        self.expect(";")?;
                    }
                    self.expect("}")?;
                }
                "scalar" => {
                    self.expect("=")?;
                    scalar = Some(self.word("a scalar kind")?);
                    self.expect(";")?;
                }
                other => return Err(key.error(format!("unknown lsc field {other:?}"))),
            }
        }
        let close = self.next("}")?;
        let points = points.ok_or_else(|| close.error("the poset has no points".into()))?;
        let scalar = scalar.ok_or_else(|| close.error("missing scalar = ...".into()))?;
        Ok(ModelSpec::Lsc {
            points,
            relations,
            scalar,
        })
    }

    fn table(&mut self) -> Result<ModelSpec, CliError> {
        self.expect("{")?;
        let (mut elements, mut sums, mut order) = (None, Vec::new(), None);
        while self.peek() != Some("}") {
            let key = self.next("elements, sums or order")?;
            match key.text.as_str() {
                "elements" => {
                    self.expect("=")?;
                    elements = Some(self.list()?);
                    self.expect(";")?;
                }
                "sums" => {
                    self.expect("{")?;
                    while self.peek() != Some("}") {
                        let a = self.word("an element")?;
                        self.expect("+")?;
                        let b = self.word("an element")?;
                        self.expect("=")?;
                        let c = self.word("an element")?;
                        self.expect(";")?;
                        sums.push((a, b, c));
                    }
                    self.expect("}")?;
                }
                "order" => {
                    self.expect("=")?;
                    order = if self.peek() == Some("algebraic") {
                        self.pos += 1;
                        None
                    } else {
                        Some(self.relations()?)
                    };
                    self.expect(";")?;
                }
                other => return Err(key.error(format!("unknown table field {other:?}"))),
            }
        }
        let close = self.next("}")?;
        let elements = elements.ok_or_else(|| close.error("missing elements = [...]".into()))?;
        Ok(ModelSpec::Table { elements, sums, order })
    }

    fn list(&mut self) -> Result<Vec<String>, CliError> {
        self.expect("[")?;
        let mut out = Vec::new();
        while self.peek() != Some("]") {
            out.push(self.word("a name")?);
            if self.peek() == Some(",") {
                self.pos += 1;
            }
        }
        self.expect("]")?;
        Ok(out)
    }

    fn relations(&mut self) -> Result<Vec<(String, String)>, CliError> {
        self.expect("[")?;
        let mut out = Vec::new();
        while self.peek() != Some("]") {
            let a = self.word("a name")?;
            self.expect("<=")?;
            let b = self.word("a name")?;
            out.push((a, b));
            if self.peek() == Some(",") {
                self.pos += 1;
            }
        }
        self.expect("]")?;
        Ok(out)
    }
}
