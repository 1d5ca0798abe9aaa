//! Dovetailed runs over the standard enumeration.
//!
//! Programs are the binary-alphabet machines with at most `max_states`
//! states whose raw description fits in `alpha` bits, numbered `k = 1, 2, ...`
//! in enumeration order. At stage `j` every program `k < j` that is still
//! running executes its step `j - k`. Program `k` runs `q s + n + 2` steps
//! (write the machine, run it over the sample, emit) and therefore halts at
//! stage `k + q s + n + 2`, when its explanation becomes visible.

use serde::{Deserialize, Serialize};

use super::{explain, two_part, Explanation, SearchContext, SearchMode, SearchTrace, Termination};
use crate::codelen::CodeLength;
use crate::coders::{deficiency_in, raw_model_bits};
use crate::dfa::{DataSample, EnumerationBlock, SliceIndex, StandardEnumeration};
use crate::error::{capacity, Error, Result};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct DovetailConfig {
    pub max_states: usize,
    /// Number of stages to execute.
    pub budget: u64,
}

impl Default for DovetailConfig {
    fn default() -> Self {
        Self { max_states: 3, budget: u64::MAX }
    }
}

/// Programs beyond this count are refused.
const MAX_PROGRAMS: u128 = 1 << 26;

/// The admissible blocks, in enumeration order.
fn program_blocks(config: &DovetailConfig, alpha: CodeLength) -> Result<Vec<EnumerationBlock>> {
    let e = StandardEnumeration::new(config.max_states.max(1) + 2)?;
    let blocks: Vec<EnumerationBlock> =
        e.blocks().filter(|b| b.s == 2 && b.q <= config.max_states).filter(|b| raw_model_bits(&b.dfa(0)) <= alpha).collect();
    let total: u128 = blocks.iter().map(|b| b.len).sum();
    if total > MAX_PROGRAMS {
        return capacity(format!("{total} programs exceed the limit of {MAX_PROGRAMS}"));
    }
    Ok(blocks)
}

/// Number of programs a dovetail run with these bounds would start.
pub fn program_count(config: &DovetailConfig, alpha: CodeLength) -> Result<u64> {
    Ok(program_blocks(config, alpha)?.iter().map(|b| b.len as u64).sum())
}

/// What program `k` leaves behind when it halts.
#[derive(Clone, Copy)]
struct Outcome {
    block: usize,
    local: u128,
    halt_stage: u64,
    key: f64,
}

/// Shared driver: `key` scores an accepting program (lower is better) and
/// replacement happens only on a strict decrease of the key.
fn run<K>(
    sample: &DataSample,
    alpha: CodeLength,
    config: &DovetailConfig,
    ctx: &SearchContext,
    mode: SearchMode,
    key: K,
) -> Result<SearchTrace>
where
    K: Fn(&crate::dfa::Dfa, CodeLength) -> Result<f64> + Sync + Send,
{
    let blocks = program_blocks(config, alpha)?;
    let n = sample.n() as u64;
    let starts: Vec<u64> = blocks
        .iter()
        .scan(1u64, |k, b| {
            let s = *k;
            *k += b.len as u64;
            Some(s)
        })
        .collect();
    let programs: u64 = blocks.iter().map(|b| b.len as u64).sum();
    let halt = |b: &EnumerationBlock, k: u64| k + (b.q * b.s) as u64 + n + 2;
    let last_halt = blocks.iter().zip(&starts).map(|(b, &s)| halt(b, s + b.len as u64 - 1)).max().unwrap_or(0);
    let stages = config.budget.min(last_halt);
    let exhausted = config.budget >= last_halt;

    // Each program's outcome is independent of the others; evaluate them
    // all, then replay the stage order sequentially.
    let outcomes: Vec<Result<Option<Outcome>>> = ctx.exec.map_range(0..programs as usize, |idx| {
        let k = idx as u64 + 1;
        let bi = starts.partition_point(|&s| s <= k) - 1;
        let b = &blocks[bi];
        let local = (k - starts[bi]) as u128;
        let halt_stage = halt(b, k);
        if halt_stage > stages {
            return Ok(None);
        }
        let a = b.dfa(local);
        if !a.accepts_all(sample) {
            return Ok(None);
        }
        let bits = raw_model_bits(&a);
        Ok(Some(Outcome { block: bi, local, halt_stage, key: key(&a, bits)? }))
    });
    let mut halted: Vec<Outcome> = outcomes.into_iter().filter_map(Result::transpose).collect::<Result<_>>()?;
    halted.sort_by_key(|o| o.halt_stage);

    let mut explanations: Vec<Explanation> = Vec::new();
    let mut best_key = f64::INFINITY;
    for o in &halted {
        if o.key < best_key {
            best_key = o.key;
            let b = &blocks[o.block];
            let a = b.dfa(o.local);
            let bits = raw_model_bits(&a);
            explanations.push(explain(sample, a, bits, o.halt_stage, Some(b.offset + o.local), ctx)?);
        }
    }
    if explanations.is_empty() {
        return Err(Error::EmptyTrace { t0_reached: false });
    }
    let terminated = if exhausted { Termination::Exhausted } else { Termination::Budget };
    Ok(SearchTrace { mode, alpha, explanations, terminated, steps_run: stages })
}

/// Dovetailed MDL: keep the explanation with the smallest two-part total.
pub fn dovetail_optimal(sample: &DataSample, alpha: CodeLength, config: &DovetailConfig, ctx: &SearchContext) -> Result<SearchTrace> {
    run(sample, alpha, config, ctx, SearchMode::Dovetail, |a, bits| Ok(two_part(sample, a, bits)?.0.bits()))
}

/// Direct method: keep the explanation with the smallest deficiency estimate.
pub fn direct_method_search(sample: &DataSample, alpha: CodeLength, config: &DovetailConfig, ctx: &SearchContext) -> Result<SearchTrace> {
    run(sample, alpha, config, ctx, SearchMode::Direct, |a, _| {
        let slice = SliceIndex::new(a, sample.n())?;
        Ok(deficiency_in(sample, &slice, &ctx.family)?.exact)
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::dfa::Dfa;

    fn parity3() -> DataSample {
        DataSample::from_strs(&["000", "011", "101", "110"]).unwrap()
    }

    #[test]
    fn program_counts() {
        let alpha = CodeLength::from_int(32);
        let c = DovetailConfig { max_states: 3, budget: u64::MAX };
        assert_eq!(program_count(&c, alpha).unwrap(), 1 + 64 + 6561);
        // m(3,2) + 1 = 10 log2 3 + 3 > 18
        assert_eq!(program_count(&c, CodeLength::from_int(18)).unwrap(), 1 + 64);
    }

    #[test]
    fn half_cube_prefers_the_universal_machine() {
        // parity: 11 + 0 bits; universal: 3 + ceil(log2 70) = 10 bits
        let t = dovetail_optimal(&parity3(), CodeLength::from_int(32), &DovetailConfig::default(), &SearchContext::default()).unwrap();
        assert_eq!(t.terminated, Termination::Exhausted);
        assert!(t.explanations.windows(2).all(|w| w[1].total < w[0].total));
        let last = t.last();
        assert_eq!(last.model, Dfa::universal(2));
        assert_eq!(last.total.bits(), 10.0);
        assert_eq!(last.enumeration_index, Some(1));
    }

    #[test]
    fn doubling_the_budget_keeps_the_limit() {
        let c = DovetailConfig::default();
        let full = dovetail_optimal(&parity3(), CodeLength::from_int(32), &c, &SearchContext::default()).unwrap();
        let stages = full.steps_run;
        let again =
            dovetail_optimal(&parity3(), CodeLength::from_int(32), &DovetailConfig { budget: stages * 2, ..c }, &SearchContext::default())
                .unwrap();
        assert_eq!(full.last(), again.last());
    }

    #[test]
    fn short_budget_reports_truncation() {
        let c = DovetailConfig { max_states: 3, budget: 1 };
        let r = dovetail_optimal(&parity3(), CodeLength::from_int(32), &c, &SearchContext::default());
        assert!(matches!(r, Err(Error::EmptyTrace { t0_reached: false })));
        let c = DovetailConfig { max_states: 3, budget: 200 };
        let t = dovetail_optimal(&parity3(), CodeLength::from_int(32), &c, &SearchContext::default()).unwrap();
        assert_eq!(t.terminated, Termination::Budget);
        assert_eq!(t.steps_run, 200);
    }

    #[test]
    fn direct_keys_decrease() {
        let t = direct_method_search(&parity3(), CodeLength::from_int(32), &DovetailConfig::default(), &SearchContext::default()).unwrap();
        assert!(t.explanations.windows(2).all(|w| w[1].deficiency < w[0].deficiency));
    }
}
