use std::collections::HashSet;

use serde::{Deserialize, Serialize};

use super::{
    explain, safe_switch, safe_switch_margin, two_part, ProgramCoding, SearchContext, SearchMode, SearchTrace, SwitchRule, Termination,
};
use crate::codelen::CodeLength;
use crate::dfa::{encode, merge_states, prefix_tree_acceptor, DataSample, Dfa};
use crate::error::{Error, Result};

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct MergeConfig {
    pub rule: SwitchRule,
    pub coding: ProgramCoding,
    /// Stop after this many accepted merges.
    pub max_steps: Option<u64>,
}

struct Candidate {
    model: Dfa,
    program_bits: CodeLength,
    total: CodeLength,
}

/// Encoding used to break ties between equal totals: shorter first, then
/// lexicographically smaller.
fn tie_key(a: &Dfa) -> (usize, String) {
    let bits = encode(a).expect("merged machines keep a final state").to_string();
    (bits.len(), bits)
}

/// All distinct machines obtained by merging one pair of states, in pair order.
fn merge_candidates(current: &Dfa) -> Vec<Dfa> {
    let q = current.q();
    let mut seen = HashSet::new();
    let mut out = Vec::new();
    for i in 0..q {
        for j in i + 1..q {
            let m = merge_states(current, i, j).expect("states in range");
            if seen.insert(m.clone()) {
                out.push(m);
            }
        }
    }
    out
}

/// Greedy state merging from the prefix-tree acceptor.
///
/// Each step evaluates every pairwise merge (closed under determinism) and
/// moves to the candidate with the smallest total that the rule admits.
/// The walk itself may pass through machines whose program exceeds `alpha`;
/// only admissible states of the walk are emitted.
pub fn greedy_merge_search(sample: &DataSample, alpha: CodeLength, config: MergeConfig, ctx: &SearchContext) -> Result<SearchTrace> {
    let n = sample.n();
    let d = sample.d() as u64;
    let mut current = {
        let a = prefix_tree_acceptor(sample);
        let bits = ctx.program_bits(&a, config.coding, n);
        explain(sample, a, bits, 0, None, ctx)?
    };
    let mut explanations = Vec::new();
    if current.program_bits <= alpha {
        explanations.push(current.clone());
    }
    // where the switch margin is undefined no switch can satisfy the rule
    let frozen = config.rule == SwitchRule::Safe && safe_switch_margin(n, d).is_err();
    let mut step = 0u64;
    let terminated = loop {
        if frozen {
            break Termination::Fixpoint;
        }
        if config.max_steps.is_some_and(|m| step >= m) {
            break Termination::Budget;
        }
        let models = merge_candidates(&current.model);
        let evaluated: Vec<Result<Candidate>> = ctx.exec.map(&models, |m| {
            let program_bits = ctx.program_bits(m, config.coding, n);
            let (total, _) = two_part(sample, m, program_bits)?;
            Ok(Candidate { model: m.clone(), program_bits, total })
        });
        let mut candidates = evaluated.into_iter().collect::<Result<Vec<_>>>()?;
        candidates.retain(|c| c.total < current.total);
        // stable: equal keys keep pair order
        candidates.sort_by_key(|c| c.total);
        let mut chosen = None;
        let mut i = 0;
        while i < candidates.len() {
            let mut j = i;
            while j < candidates.len() && candidates[j].total == candidates[i].total {
                j += 1;
            }
            let mut group: Vec<&Candidate> = candidates[i..j].iter().collect();
            if group.len() > 1 {
                group.sort_by_cached_key(|c| tie_key(&c.model));
            }
            for c in group {
                let next = explain(sample, c.model.clone(), c.program_bits, step + 1, None, ctx)?;
                let ok = match config.rule {
                    SwitchRule::Plain => true,
                    SwitchRule::Safe => safe_switch(&current, &next, n, d, &ctx.named)?,
                };
                if ok {
                    chosen = Some(next);
                    break;
                }
            }
            if chosen.is_some() || config.rule == SwitchRule::Plain {
                break;
            }
            i = j;
        }
        let Some(next) = chosen else {
            break Termination::Fixpoint;
        };
        step += 1;
        current = next;
        if current.program_bits <= alpha {
            explanations.push(current.clone());
        }
    };
    if explanations.is_empty() {
        return Err(Error::EmptyTrace { t0_reached: false });
    }
    Ok(SearchTrace { mode: SearchMode::Merge, alpha, explanations, terminated, steps_run: step })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::codelen::log2;
    use crate::dfa::Word;

    fn big() -> CodeLength {
        CodeLength::new(1e9).unwrap()
    }

    #[test]
    fn full_cube_collapses_to_universal() {
        let sample = DataSample::from_indices(3, 0..8).unwrap();
        let t = greedy_merge_search(&sample, big(), MergeConfig::default(), &SearchContext::default()).unwrap();
        let last = t.last();
        assert_eq!(last.model, Dfa::universal(2));
        assert_eq!(last.data_bits.bits(), 0.0);
        assert_eq!(t.terminated, Termination::Fixpoint);
        // the closed-form data cost for d = l
        assert!((crate::codelen::data_to_model_cost(8, 8, 3).unwrap().bits() - (1.0 + 2.0 * log2(3))).abs() < 1e-12);
    }

    #[test]
    fn totals_strictly_decrease() {
        let words: Vec<u64> = (0..256u64).filter(|i| i.count_ones() % 2 == 0).step_by(2).collect();
        let sample = DataSample::from_indices(8, words).unwrap();
        let t = greedy_merge_search(&sample, big(), MergeConfig::default(), &SearchContext::default()).unwrap();
        assert!(t.explanations.len() > 1);
        assert!(t.explanations.windows(2).all(|w| w[1].total < w[0].total));
        assert!(t.explanations.iter().all(|e| e.model.accepts_all(&sample)));
        assert_eq!(t.explanations[0].model, prefix_tree_acceptor(&sample));
    }

    #[test]
    fn singleton_keeps_a_literal_floor() {
        let x: Word = "10110010".parse().unwrap();
        let sample = DataSample::new(8, vec![x]).unwrap();
        let t = greedy_merge_search(&sample, big(), MergeConfig::default(), &SearchContext::default()).unwrap();
        assert!(t.last().total.bits() >= 8.0 - 2.0 * log2(8));
    }

    #[test]
    fn alpha_filters_emitted_models() {
        let sample = DataSample::from_indices(4, [0, 3, 5, 6, 9]).unwrap();
        let alpha = CodeLength::from_int(40);
        match greedy_merge_search(&sample, alpha, MergeConfig::default(), &SearchContext::default()) {
            Ok(t) => assert!(t.explanations.iter().all(|e| e.program_bits <= alpha)),
            Err(e) => assert!(matches!(e, Error::EmptyTrace { .. })),
        }
        let tiny = greedy_merge_search(&sample, CodeLength::ZERO, MergeConfig::default(), &SearchContext::default());
        assert!(matches!(tiny, Err(Error::EmptyTrace { .. })));
    }

    #[test]
    fn safe_rule_stays_put_on_the_full_cube() {
        let sample = DataSample::from_indices(3, 0..8).unwrap();
        let cfg = MergeConfig { rule: SwitchRule::Safe, ..MergeConfig::default() };
        let t = greedy_merge_search(&sample, big(), cfg, &SearchContext::default()).unwrap();
        assert_eq!(t.explanations.len(), 1);
        assert_eq!(t.terminated, Termination::Fixpoint);
    }

    #[test]
    fn safe_rule_only_takes_large_steps() {
        let words: Vec<u64> = (0..256u64).filter(|i| i.count_ones() % 2 == 0).collect();
        let sample = DataSample::from_indices(8, words).unwrap();
        let ctx = SearchContext::default();
        let cfg = MergeConfig { rule: SwitchRule::Safe, coding: ProgramCoding::Shortest, max_steps: None };
        let t = greedy_merge_search(&sample, big(), cfg, &ctx).unwrap();
        let margin = super::super::safe_switch_margin(8, sample.d() as u64).unwrap();
        for w in t.explanations.windows(2) {
            assert!(w[1].total.bits() <= w[0].total.bits() - margin);
        }
    }
}
