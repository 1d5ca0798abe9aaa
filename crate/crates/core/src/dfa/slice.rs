//! Length-`n` slices `L^n(A) = L(A) ∩ {0,1}^n`: counting, listing and
//! enumerative ranking by path counts.

use num_bigint::BigUint;
use num_traits::{ToPrimitive, Zero};

use super::{Dfa, Word, MAX_WORD_LEN};
use crate::codelen::BigCount;
use crate::error::{capacity, domain, Result};

/// Default bound on the number of words `slice_words` will materialise.
pub const DEFAULT_SLICE_BOUND: u64 = 1 << 20;

fn binary_symbols(a: &Dfa) -> usize {
    a.s().min(2)
}

/// Exact `|L^n(A)|` by dynamic programming over `n` steps.
pub fn slice_count(a: &Dfa, n: usize) -> BigCount {
    let syms = binary_symbols(a);
    let mut ways: Vec<BigUint> = (0..a.q()).map(|s| BigUint::from(a.is_final(s) as u8)).collect();
    for _ in 0..n {
        ways = (0..a.q()).map(|s| (0..syms).fold(BigUint::zero(), |acc, sym| acc + &ways[a.next(s, sym)])).collect();
    }
    ways[a.initial()].clone()
}

/// Path-count table for ranking within one slice.
///
/// `ways(k, s)` is the number of binary words of length `k` leading from `s`
/// to a final state; all counts fit in `u64` because `n <= 62`.
#[derive(Clone, Debug)]
pub struct SliceIndex<'a> {
    dfa: &'a Dfa,
    n: usize,
    ways: Vec<u64>,
}

impl<'a> SliceIndex<'a> {
    pub fn new(dfa: &'a Dfa, n: usize) -> Result<Self> {
        if n > MAX_WORD_LEN {
            return domain(format!("slice length {n} exceeds {MAX_WORD_LEN}"));
        }
        let q = dfa.q();
        let syms = binary_symbols(dfa);
        let mut ways = vec![0u64; (n + 1) * q];
        for (s, w) in ways[..q].iter_mut().enumerate() {
            *w = dfa.is_final(s) as u64;
        }
        for k in 1..=n {
            let (prev, cur) = ways.split_at_mut(k * q);
            let prev = &prev[(k - 1) * q..];
            for (s, slot) in cur[..q].iter_mut().enumerate() {
                *slot = (0..syms).map(|sym| prev[dfa.next(s, sym)]).sum();
            }
        }
        Ok(Self { dfa, n, ways })
    }

    pub fn dfa(&self) -> &Dfa {
        self.dfa
    }

    pub fn n(&self) -> usize {
        self.n
    }

    fn ways(&self, k: usize, state: usize) -> u64 {
        self.ways[k * self.dfa.q() + state]
    }

    pub fn len(&self) -> u64 {
        self.ways(self.n, self.dfa.initial())
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    /// 0-based lexicographic rank of `w` within the slice, if it belongs to it.
    pub fn rank(&self, w: &Word) -> Option<u64> {
        if w.len() != self.n {
            return None;
        }
        let mut state = self.dfa.initial();
        let mut r = 0u64;
        for i in 0..self.n {
            let sym = w.symbol(i);
            if sym >= self.dfa.s() {
                return None;
            }
            if sym == 1 {
                r += self.ways(self.n - i - 1, self.dfa.next(state, 0));
            }
            state = self.dfa.next(state, sym);
        }
        self.dfa.is_final(state).then_some(r)
    }

    pub fn unrank(&self, mut r: u64) -> Option<Word> {
        if r >= self.len() {
            return None;
        }
        let mut state = self.dfa.initial();
        let mut bits = 0u64;
        for i in 0..self.n {
            let zero = self.ways(self.n - i - 1, self.dfa.next(state, 0));
            let sym = if r < zero {
                0
            } else {
                r -= zero;
                1
            };
            bits = (bits << 1) | sym as u64;
            state = self.dfa.next(state, sym);
        }
        Some(Word::from_index(bits, self.n))
    }

    pub fn words(&self) -> impl Iterator<Item = Word> + '_ {
        (0..self.len()).map(move |r| self.unrank(r).expect("rank in range"))
    }
}

/// Lexicographically ordered list of `L^n(A)`, refusing slices larger than `bound`.
pub fn slice_words(a: &Dfa, n: usize, bound: u64) -> Result<Vec<Word>> {
    let count = slice_count(a, n);
    if count > BigUint::from(bound) {
        return capacity(format!("slice has {count} words, bound is {bound}"));
    }
    Ok(SliceIndex::new(a, n)?.words().collect())
}

pub fn word_rank(a: &Dfa, n: usize, w: &Word) -> Result<BigCount> {
    match SliceIndex::new(a, n)?.rank(w) {
        Some(r) => Ok(BigUint::from(r)),
        None => domain(format!("word {w} is not in the length-{n} slice")),
    }
}

pub fn word_unrank(a: &Dfa, n: usize, rank: &BigCount) -> Result<Word> {
    let index = SliceIndex::new(a, n)?;
    match rank.to_u64().and_then(|r| index.unrank(r)) {
        Some(w) => Ok(w),
        None => domain(format!("rank {rank} out of range for a slice of {} words", index.len())),
    }
}
