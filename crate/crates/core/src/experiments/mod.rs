//! Scripted reproductions with declared tolerances.

mod lemma1;
mod oscillation;
mod parity;

use std::fmt::Write as _;

use serde::{Deserialize, Serialize};

pub use lemma1::{lemma1_cells, run_lemma1_counting, Lemma1Cell};
pub use oscillation::{run_oscillation, OscillationScenario};
pub use parity::{even_slice, parity_samples, run_parity, ParityTolerances};

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Quantity {
    pub label: String,
    pub bits: f64,
    /// How the value was computed.
    pub provenance: String,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum Relation {
    #[serde(rename = "<=")]
    AtMost,
    #[serde(rename = ">=")]
    AtLeast,
    #[serde(rename = "==")]
    Equal,
}

impl Relation {
    fn holds(self, lhs: f64, rhs: f64) -> bool {
        match self {
            Relation::AtMost => lhs <= rhs,
            Relation::AtLeast => lhs >= rhs,
            Relation::Equal => lhs == rhs,
        }
    }

    fn symbol(self) -> &'static str {
        match self {
            Relation::AtMost => "<=",
            Relation::AtLeast => ">=",
            Relation::Equal => "==",
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Check {
    pub label: String,
    pub lhs: f64,
    pub relation: Relation,
    pub rhs: f64,
    pub pass: bool,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ExperimentReport {
    pub name: String,
    pub version: String,
    pub params: serde_json::Value,
    pub quantities: Vec<Quantity>,
    pub checks: Vec<Check>,
    /// Observations that are reported but not checked.
    pub flags: Vec<String>,
}

impl ExperimentReport {
    pub fn new(name: &str, params: serde_json::Value) -> Self {
        Self { name: name.into(), version: crate::VERSION.into(), params, quantities: Vec::new(), checks: Vec::new(), flags: Vec::new() }
    }

    pub fn quantity(&mut self, label: impl Into<String>, bits: f64, provenance: impl Into<String>) -> f64 {
        self.quantities.push(Quantity { label: label.into(), bits, provenance: provenance.into() });
        bits
    }

    pub fn check(&mut self, label: impl Into<String>, lhs: f64, relation: Relation, rhs: f64) -> bool {
        let pass = relation.holds(lhs, rhs);
        self.checks.push(Check { label: label.into(), lhs, relation, rhs, pass });
        pass
    }

    pub fn get(&self, label: &str) -> Option<f64> {
        self.quantities.iter().find(|q| q.label == label).map(|q| q.bits)
    }

    pub fn check_named(&self, label: &str) -> Option<&Check> {
        self.checks.iter().find(|c| c.label == label)
    }

    pub fn passed(&self) -> bool {
        self.checks.iter().all(|c| c.pass)
    }

    pub fn to_table(&self) -> String {
        let mut out = String::new();
        let _ = writeln!(out, "{} (version {})", self.name, self.version);
        let _ = writeln!(out, "params: {}", self.params);
        let width = self.quantities.iter().map(|q| q.label.len()).max().unwrap_or(0);
        for q in &self.quantities {
            let _ = writeln!(out, "  {:<width$}  {:>14.4}  {}", q.label, q.bits, q.provenance);
        }
        for c in &self.checks {
            let status = if c.pass { "PASS" } else { "FAIL" };
            let _ = writeln!(out, "  [{status}] {}: {:.4} {} {:.4}", c.label, c.lhs, c.relation.symbol(), c.rhs);
        }
        for f in &self.flags {
            let _ = writeln!(out, "  note: {f}");
        }
        out
    }
}
