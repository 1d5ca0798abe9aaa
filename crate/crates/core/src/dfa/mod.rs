//! Total deterministic automata over a finite alphabet, with states numbered
//! so that the `f` final states are the last `f` states.

mod codec;
mod enumeration;
mod minimize;
mod ops;
mod pta;
mod slice;
mod text;
mod word;

use std::collections::VecDeque;

use serde::{Deserialize, Serialize};

use crate::error::{domain, Result};

pub use codec::{decode, encode, encoded_len, model_cost};
pub use enumeration::{EnumerationBlock, StandardEnumeration};
pub use minimize::minimize;
pub use ops::{equivalent_at, merge_states, restrict_to_length};
pub use pta::prefix_tree_acceptor;
pub use slice::{slice_count, slice_words, word_rank, word_unrank, SliceIndex, DEFAULT_SLICE_BOUND};
pub use text::{format_data_sample, format_dfa, parse_data_sample, parse_dfa};
pub use word::{DataSample, FiniteSetModel, Word, MAX_WORD_LEN};

#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Dfa {
    states: usize,
    symbols: usize,
    initial: usize,
    finals: usize,
    delta: Vec<usize>,
}

impl Dfa {
    /// Builds a DFA whose final states are `states - finals .. states`.
    /// `delta[state * symbols + symbol]` is the successor state.
    pub fn new(states: usize, symbols: usize, initial: usize, finals: usize, delta: Vec<usize>) -> Result<Self> {
        if states == 0 || symbols == 0 {
            return domain("a DFA needs at least one state and one symbol");
        }
        if finals > states {
            return domain(format!("{finals} final states but only {states} states"));
        }
        if initial >= states {
            return domain(format!("initial state {initial} out of range"));
        }
        if delta.len() != states * symbols {
            return domain(format!("expected {} transitions, got {}", states * symbols, delta.len()));
        }
        if let Some(&t) = delta.iter().find(|&&t| t >= states) {
            return domain(format!("transition target {t} out of range"));
        }
        Ok(Self { states, symbols, initial, finals, delta })
    }

    /// Builds a DFA from an arbitrary final-state set by stably moving final
    /// states to the end of the numbering.
    pub fn from_final_set(symbols: usize, initial: usize, is_final: &[bool], delta: &[usize]) -> Result<Self> {
        let states = is_final.len();
        if states == 0 || symbols == 0 || delta.len() != states * symbols || initial >= states {
            return domain("inconsistent DFA description");
        }
        let order: Vec<usize> = (0..states).filter(|&s| !is_final[s]).chain((0..states).filter(|&s| is_final[s])).collect();
        Self::renumbered(symbols, initial, &order, is_final, delta)
    }

    /// Keeps the states in `order` (old ids), renumbering them by position.
    /// Every transition out of a kept state must land on a kept state.
    fn renumbered(symbols: usize, initial: usize, order: &[usize], is_final: &[bool], delta: &[usize]) -> Result<Self> {
        let mut new_id = vec![usize::MAX; is_final.len()];
        for (i, &old) in order.iter().enumerate() {
            new_id[old] = i;
        }
        let mut d = Vec::with_capacity(order.len() * symbols);
        for &old in order {
            for a in 0..symbols {
                let t = new_id[delta[old * symbols + a]];
                if t == usize::MAX {
                    return domain("renumbering drops a reachable state");
                }
                d.push(t);
            }
        }
        let finals = order.iter().filter(|&&s| is_final[s]).count();
        Self::new(order.len(), symbols, new_id[initial], finals, d)
    }

    /// One-state machine accepting every word (`f = 1`).
    pub fn universal(symbols: usize) -> Self {
        Self::new(1, symbols, 0, 1, vec![0; symbols]).expect("valid")
    }

    /// One-state machine accepting nothing (`f = 0`).
    pub fn empty(symbols: usize) -> Self {
        Self::new(1, symbols, 0, 0, vec![0; symbols]).expect("valid")
    }

    /// Two-state binary machine accepting words with an even (or odd) number of ones.
    pub fn parity(even: bool) -> Self {
        // state 0 non-final, state 1 final; reading 1 swaps them.
        let initial = if even { 1 } else { 0 };
        Self::new(2, 2, initial, 1, vec![0, 1, 1, 0]).expect("valid")
    }

    pub fn q(&self) -> usize {
        self.states
    }

    pub fn s(&self) -> usize {
        self.symbols
    }

    pub fn initial(&self) -> usize {
        self.initial
    }

    pub fn final_count(&self) -> usize {
        self.finals
    }

    pub fn is_final(&self, state: usize) -> bool {
        state >= self.states - self.finals
    }

    pub fn next(&self, state: usize, symbol: usize) -> usize {
        self.delta[state * self.symbols + symbol]
    }

    pub fn transitions(&self) -> &[usize] {
        &self.delta
    }

    /// Runs the machine on `word`. Symbols outside the alphabet reject.
    pub fn run(&self, word: &Word) -> Option<usize> {
        let mut state = self.initial;
        for sym in word.symbols() {
            if sym >= self.symbols {
                return None;
            }
            state = self.next(state, sym);
        }
        Some(state)
    }

    pub fn accepts(&self, word: &Word) -> bool {
        self.run(word).is_some_and(|s| self.is_final(s))
    }

    pub fn accepts_all(&self, sample: &DataSample) -> bool {
        sample.words().iter().all(|w| self.accepts(w))
    }

    /// Removes unreachable states and renumbers in breadth-first order from
    /// the initial state (symbols in increasing order), then moves final
    /// states last while keeping that order.
    pub fn canonical(&self) -> Self {
        let mut seen = vec![false; self.states];
        let mut bfs = Vec::with_capacity(self.states);
        let mut queue = VecDeque::from([self.initial]);
        seen[self.initial] = true;
        while let Some(s) = queue.pop_front() {
            bfs.push(s);
            for a in 0..self.symbols {
                let t = self.next(s, a);
                if !seen[t] {
                    seen[t] = true;
                    queue.push_back(t);
                }
            }
        }
        let is_final: Vec<bool> = (0..self.states).map(|s| self.is_final(s)).collect();
        let order: Vec<usize> = bfs.iter().copied().filter(|&s| !is_final[s]).chain(bfs.iter().copied().filter(|&s| is_final[s])).collect();
        Self::renumbered(self.symbols, self.initial, &order, &is_final, &self.delta).expect("reachable set is closed")
    }

    pub fn is_canonical(&self) -> bool {
        self.canonical() == *self
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn w(s: &str) -> Word {
        s.parse().unwrap()
    }

    #[test]
    fn parity_acceptance() {
        let even = Dfa::parity(true);
        assert!(even.accepts(&w("0110")));
        assert!(!even.accepts(&w("010")));
        assert!(even.accepts(&w("")));
        let odd = Dfa::parity(false);
        assert!(odd.accepts(&w("001")));
        assert!(!odd.accepts(&w("011")));
    }

    #[test]
    fn universal_accepts_everything() {
        let u = Dfa::universal(2);
        for i in 0..16 {
            assert!(u.accepts(&Word::from_index(i, 4)));
        }
        assert!(!Dfa::empty(2).accepts(&w("0")));
    }

    #[test]
    fn out_of_alphabet_symbol_rejects() {
        let unary = Dfa::universal(1);
        assert!(unary.accepts(&w("000")));
        assert!(!unary.accepts(&w("010")));
    }

    #[test]
    fn invalid_descriptions_are_rejected() {
        assert!(Dfa::new(0, 2, 0, 0, vec![]).is_err());
        assert!(Dfa::new(2, 2, 2, 1, vec![0; 4]).is_err());
        assert!(Dfa::new(2, 2, 0, 3, vec![0; 4]).is_err());
        assert!(Dfa::new(2, 2, 0, 1, vec![0, 1, 2, 0]).is_err());
    }

    #[test]
    fn final_set_is_moved_last() {
        // state 0 final, state 1 non-final
        let a = Dfa::from_final_set(2, 0, &[true, false], &[1, 0, 0, 1]).unwrap();
        assert_eq!(a.initial(), 1);
        assert!(a.is_final(1));
        assert_eq!(a.transitions(), &[1, 0, 0, 1]);
    }

    #[test]
    fn canonical_drops_unreachable_states() {
        // 0 -> 1 on both symbols, 1 loops, 2 unreachable.
        let a = Dfa::new(3, 2, 0, 1, vec![1, 1, 2, 2, 2, 2]).unwrap();
        let c = a.canonical();
        assert_eq!(c.q(), 3);
        let b = Dfa::new(3, 2, 0, 1, vec![1, 1, 1, 1, 2, 2]).unwrap();
        assert_eq!(b.canonical().q(), 2);
        assert!(Dfa::parity(true).is_canonical());
        assert!(Dfa::parity(false).is_canonical());
    }
}
