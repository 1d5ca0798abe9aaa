//! MDL search procedures.
//!
//! Every procedure emits a [`SearchTrace`]: explanations whose two-part
//! totals strictly decrease (the direct method orders by deficiency instead)
//! and whose program lengths never exceed the bound `alpha`.

mod dovetail;
mod merge;
mod output;

use serde::{Deserialize, Serialize};

use crate::codelen::{log2_binomial_pow2, CodeLength};
use crate::coders::{deficiency_in, khat_model, raw_model_bits, Coder, CoderFamily, NamedModels};
use crate::dfa::{DataSample, Dfa, SliceIndex};
use crate::error::{domain, Result};
use crate::exec::Execution;
use crate::ranking::subset_code_len;

pub use dovetail::{direct_method_search, dovetail_optimal, program_count, DovetailConfig};
pub use merge::{greedy_merge_search, MergeConfig};
pub use output::{trace_records, write_trace_csv, write_trace_jsonl, TraceRecord};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SearchMode {
    Merge,
    Dovetail,
    Direct,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Termination {
    /// The stage budget ran out before every program halted.
    Budget,
    /// No admissible move improves the current explanation.
    Fixpoint,
    /// Every program in the class halted.
    Exhausted,
}

/// When the merge walk may replace its current explanation.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SwitchRule {
    /// Any strict decrease of the total.
    #[default]
    Plain,
    /// Only switches passing [`safe_switch`].
    Safe,
}

/// How the program length of a model is reckoned.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ProgramCoding {
    /// `m(q, s)` plus a 1-bit method header.
    #[default]
    Raw,
    /// The shortest description, [`khat_model`].
    Shortest,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Explanation {
    pub model: Dfa,
    pub program_bits: CodeLength,
    pub data_bits: CodeLength,
    pub total: CodeLength,
    /// Walk step (merge) or dovetail stage at which the explanation appeared.
    pub step: u64,
    /// `log2 C(l, d) - K̂(D | A, d, n)`.
    pub deficiency: f64,
    /// Coder realising K̂(D | A, d, n).
    pub coder: Coder,
    /// Position of the model in the standard enumeration, when it came from there.
    pub enumeration_index: Option<u128>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SearchTrace {
    pub mode: SearchMode,
    pub alpha: CodeLength,
    pub explanations: Vec<Explanation>,
    pub terminated: Termination,
    /// Merge steps or dovetail stages executed.
    pub steps_run: u64,
}

impl SearchTrace {
    pub fn last(&self) -> &Explanation {
        self.explanations.last().expect("traces are never empty")
    }
}

/// Shared inputs of the search procedures.
#[derive(Clone, Debug, Default)]
pub struct SearchContext {
    pub named: NamedModels,
    pub family: CoderFamily,
    pub exec: Execution,
}

impl SearchContext {
    pub fn with_exec(exec: Execution) -> Self {
        Self { exec, ..Self::default() }
    }

    pub fn program_bits(&self, a: &Dfa, coding: ProgramCoding, n: usize) -> CodeLength {
        match coding {
            ProgramCoding::Raw => raw_model_bits(a),
            ProgramCoding::Shortest => khat_model(a, &self.named, n).bits,
        }
    }
}

/// Two-part total of a model that accepts the sample: program bits plus the
/// subset index of the sample within the model's slice.
pub(crate) fn two_part(sample: &DataSample, a: &Dfa, program_bits: CodeLength) -> Result<(CodeLength, u64)> {
    let slice = SliceIndex::new(a, sample.n())?;
    let data = subset_code_len(slice.len(), sample.d() as u64)?;
    Ok((program_bits + data, slice.len()))
}

pub(crate) fn explain(
    sample: &DataSample,
    a: Dfa,
    program_bits: CodeLength,
    step: u64,
    enumeration_index: Option<u128>,
    ctx: &SearchContext,
) -> Result<Explanation> {
    let slice = SliceIndex::new(&a, sample.n())?;
    let data_bits = subset_code_len(slice.len(), sample.d() as u64)?;
    let def = deficiency_in(sample, &slice, &ctx.family)?;
    Ok(Explanation {
        program_bits,
        data_bits,
        total: program_bits + data_bits,
        step,
        deficiency: def.exact,
        coder: def.khat.coder,
        enumeration_index,
        model: a,
    })
}

/// `10 log2 log2 C(2^n, d)`.
pub fn safe_switch_margin(n: usize, d: u64) -> Result<f64> {
    let log_c = log2_binomial_pow2(n as u32, d)?.bits();
    if log_c <= 1.0 {
        return domain(format!("log2 C(2^{n}, {d}) = {log_c} leaves the switch margin undefined"));
    }
    Ok(10.0 * log_c.log2())
}

/// The switch condition on bare numbers: accept iff
/// `new_total <= old_total - old_slack - margin`.
pub fn safe_switch_totals(old_total: f64, old_slack: f64, new_total: f64, margin: f64) -> bool {
    new_total <= old_total - old_slack - margin
}

/// Whether replacing `old` by `new` is a safe switch, where the slack of
/// `old` is its program length above the shortest model description.
pub fn safe_switch(old: &Explanation, new: &Explanation, n: usize, d: u64, named: &NamedModels) -> Result<bool> {
    let margin = safe_switch_margin(n, d)?;
    let slack = old.program_bits.bits() - khat_model(&old.model, named, n).bits.bits();
    Ok(safe_switch_totals(old.total.bits(), slack, new.total.bits(), margin))
}
