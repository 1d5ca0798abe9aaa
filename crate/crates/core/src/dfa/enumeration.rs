//! The standard enumeration of DFAs.
//!
//! For `i = 2, 3, ...` and every split `i = q + s` (increasing `q`), list all
//! machines with `q` states and `s` symbols: final-state count `f = 1..=q`
//! outermost, then the initial state, then the transition table read as a
//! base-`q` numeral (first transition most significant). Each `(q, s)` block
//! therefore holds `q^(q s + 2)` machines.

use super::Dfa;
use crate::error::{capacity, domain, Result};

/// Largest `q + s` whose cumulative count still fits in a `u128`.
const MAX_INDEX_SUM: usize = 14;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct EnumerationBlock {
    pub q: usize,
    pub s: usize,
    pub offset: u128,
    pub len: u128,
}

impl EnumerationBlock {
    fn new(q: usize, s: usize, offset: u128) -> Self {
        let len = (q as u128).pow((q * s + 2) as u32);
        Self { q, s, offset, len }
    }

    fn table_len(&self) -> u128 {
        (self.q as u128).pow((self.q * self.s) as u32)
    }

    pub fn dfa(&self, local: u128) -> Dfa {
        assert!(local < self.len, "index outside block");
        let (q, qs) = (self.q as u128, self.q * self.s);
        let table = self.table_len();
        let head = local / table;
        let mut rest = local % table;
        let finals = (head / q) as usize + 1;
        let initial = (head % q) as usize;
        let mut delta = vec![0usize; qs];
        for slot in delta.iter_mut().rev() {
            *slot = (rest % q) as usize;
            rest /= q;
        }
        Dfa::new(self.q, self.s, initial, finals, delta).expect("enumerated machine is valid")
    }

    pub fn local_index(&self, a: &Dfa) -> Option<u128> {
        if a.q() != self.q || a.s() != self.s || a.final_count() == 0 {
            return None;
        }
        let q = self.q as u128;
        let table = a.transitions().iter().fold(0u128, |acc, &t| acc * q + t as u128);
        let head = (a.final_count() as u128 - 1) * q + a.initial() as u128;
        Some(head * self.table_len() + table)
    }

    /// Machines of the block in enumeration order.
    pub fn iter(self) -> impl Iterator<Item = Dfa> {
        let (q, s) = (self.q, self.s);
        let mut state: Option<(usize, usize, Vec<usize>)> = Some((1, 0, vec![0; q * s]));
        std::iter::from_fn(move || {
            let (f, init, delta) = state.as_mut()?;
            let out = Dfa::new(q, s, *init, *f, delta.clone()).expect("valid");
            // odometer over the table, then initial state, then final count
            let mut carry = true;
            for digit in delta.iter_mut().rev() {
                *digit += 1;
                if *digit < q {
                    carry = false;
                    break;
                }
                *digit = 0;
            }
            if carry {
                *init += 1;
                if *init == q {
                    *init = 0;
                    *f += 1;
                    if *f > q {
                        state = None;
                    }
                }
            }
            Some(out)
        })
    }
}

#[derive(Clone, Debug)]
pub struct StandardEnumeration {
    max_i: usize,
}

impl StandardEnumeration {
    /// Enumeration of all machines with `q + s <= max_i`.
    pub fn new(max_i: usize) -> Result<Self> {
        if max_i < 2 {
            return domain("standard enumeration needs max_i >= 2");
        }
        if max_i > MAX_INDEX_SUM {
            return capacity(format!("max_i = {max_i} exceeds {MAX_INDEX_SUM}"));
        }
        Ok(Self { max_i })
    }

    pub fn max_i(&self) -> usize {
        self.max_i
    }

    pub fn blocks(&self) -> impl Iterator<Item = EnumerationBlock> {
        let mut offset = 0u128;
        (2..=self.max_i).flat_map(|i| (1..i).map(move |q| (q, i - q))).map(move |(q, s)| {
            let b = EnumerationBlock::new(q, s, offset);
            offset += b.len;
            b
        })
    }

    pub fn len(&self) -> u128 {
        self.blocks().map(|b| b.len).sum()
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    /// All machines paired with their 0-based enumeration index.
    pub fn iter(&self) -> impl Iterator<Item = (u128, Dfa)> {
        self.blocks().flat_map(|b| {
            let offset = b.offset;
            b.iter().enumerate().map(move |(k, a)| (offset + k as u128, a))
        })
    }

    pub fn nth_dfa(&self, index: u128) -> Option<Dfa> {
        self.blocks().find(|b| index < b.offset + b.len).map(|b| b.dfa(index - b.offset))
    }

    pub fn index_of(&self, a: &Dfa) -> Option<u128> {
        self.blocks().find(|b| b.q == a.q() && b.s == a.s()).and_then(|b| b.local_index(a).map(|k| b.offset + k))
    }
}
