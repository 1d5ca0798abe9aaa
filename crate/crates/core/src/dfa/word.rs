use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{domain, Error, Result};

/// Longest supported word. Slice sizes then fit in a `u64`.
pub const MAX_WORD_LEN: usize = 62;

/// A binary word of length at most [`MAX_WORD_LEN`], packed most significant
/// symbol first so that numeric order on equal lengths is lexicographic order.
#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Word {
    len: u8,
    bits: u64,
}

impl Word {
    pub fn new(bits: u64, len: usize) -> Result<Self> {
        if len > MAX_WORD_LEN {
            return domain(format!("word length {len} exceeds {MAX_WORD_LEN}"));
        }
        if len < 64 && bits >> len != 0 {
            return domain(format!("value {bits} does not fit in {len} bits"));
        }
        Ok(Self { len: len as u8, bits })
    }

    /// Word whose symbols are the binary digits of `index` (`index < 2^len`).
    pub fn from_index(index: u64, len: usize) -> Self {
        Self::new(index, len).expect("index fits the word length")
    }

    pub fn len(&self) -> usize {
        self.len as usize
    }

    pub fn is_empty(&self) -> bool {
        self.len == 0
    }

    /// Position of the word in the lexicographic order of `{0,1}^len`.
    pub fn index(&self) -> u64 {
        self.bits
    }

    /// Symbol at position `i`, counted from the left.
    pub fn symbol(&self, i: usize) -> usize {
        debug_assert!(i < self.len());
        ((self.bits >> (self.len() - 1 - i)) & 1) as usize
    }

    pub fn symbols(&self) -> impl Iterator<Item = usize> + '_ {
        (0..self.len()).map(move |i| self.symbol(i))
    }

    pub fn ones(&self) -> u32 {
        self.bits.count_ones()
    }

    pub fn xor(&self, mask: u64) -> Word {
        Word::from_index(self.bits ^ mask, self.len())
    }

    /// Rearranges symbols: position `i` of the result holds symbol `perm[i]` of `self`.
    pub fn permute(&self, perm: &[usize]) -> Word {
        let mut v = 0u64;
        for &p in perm {
            v = (v << 1) | self.symbol(p) as u64;
        }
        Word::from_index(v, self.len())
    }
}

impl fmt::Display for Word {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for s in self.symbols() {
            write!(f, "{s}")?;
        }
        Ok(())
    }
}

impl fmt::Debug for Word {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Word({self})")
    }
}

impl FromStr for Word {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        if s.len() > MAX_WORD_LEN {
            return domain(format!("word length {} exceeds {MAX_WORD_LEN}", s.len()));
        }
        let mut v = 0u64;
        for c in s.chars() {
            v = (v << 1)
                | match c {
                    '0' => 0,
                    '1' => 1,
                    other => return domain(format!("non-binary symbol {other:?} in word")),
                };
        }
        Word::new(v, s.len())
    }
}

/// A nonempty set of distinct length-`n` words, kept in lexicographic order.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct DataSample {
    n: usize,
    words: Vec<Word>,
}

impl DataSample {
    /// Sorts `words`; rejects duplicates, wrong lengths and the empty set.
    pub fn new(n: usize, mut words: Vec<Word>) -> Result<Self> {
        if n > MAX_WORD_LEN {
            return domain(format!("word length {n} exceeds {MAX_WORD_LEN}"));
        }
        if words.is_empty() {
            return domain("a data sample needs at least one word");
        }
        if let Some(w) = words.iter().find(|w| w.len() != n) {
            return domain(format!("word {w} has length {}, expected {n}", w.len()));
        }
        words.sort_unstable();
        if let Some(pair) = words.windows(2).find(|p| p[0] == p[1]) {
            return domain(format!("duplicate word {}", pair[0]));
        }
        Ok(Self { n, words })
    }

    pub fn from_strs(words: &[&str]) -> Result<Self> {
        let parsed = words.iter().map(|w| w.parse()).collect::<Result<Vec<Word>>>()?;
        let n = parsed.first().map_or(0, Word::len);
        Self::new(n, parsed)
    }

    /// The sample whose members are the words with the given indices in `{0,1}^n`.
    pub fn from_indices(n: usize, indices: impl IntoIterator<Item = u64>) -> Result<Self> {
        let words = indices
            .into_iter()
            .map(|i| if n < 64 && i >> n != 0 { domain(format!("index {i} out of range for n = {n}")) } else { Ok(Word::from_index(i, n)) })
            .collect::<Result<Vec<_>>>()?;
        Self::new(n, words)
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn d(&self) -> usize {
        self.words.len()
    }

    pub fn words(&self) -> &[Word] {
        &self.words
    }

    pub fn contains(&self, w: &Word) -> bool {
        self.words.binary_search(w).is_ok()
    }

    /// Image of the sample under a word map, which must be injective.
    pub fn map(&self, f: impl Fn(&Word) -> Word) -> Result<Self> {
        Self::new(self.n, self.words.iter().map(f).collect())
    }
}

/// A finite-set model `M' ∪ {#d}`: members and the cardinality marker.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct FiniteSetModel {
    n: usize,
    members: Vec<Word>,
    d: usize,
}

impl FiniteSetModel {
    pub fn new(n: usize, mut members: Vec<Word>, d: usize) -> Result<Self> {
        if let Some(w) = members.iter().find(|w| w.len() != n) {
            return domain(format!("member {w} has length {}, expected {n}", w.len()));
        }
        members.sort_unstable();
        members.dedup();
        if d > members.len() {
            return domain(format!("marker d = {d} exceeds {} members", members.len()));
        }
        Ok(Self { n, members, d })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn d(&self) -> usize {
        self.d
    }

    pub fn m(&self) -> usize {
        self.members.len()
    }

    pub fn members(&self) -> &[Word] {
        &self.members
    }

    /// Whether the model explains `sample`: every word is a member and the marker matches.
    pub fn explains(&self, sample: &DataSample) -> bool {
        sample.n() == self.n && sample.d() == self.d && sample.words().iter().all(|w| self.members.binary_search(w).is_ok())
    }
}
