//! Computable upper bounds on conditional complexity.
//!
//! A description method is a [`Coder`]; a [`CoderFamily`] takes the minimum
//! over its members. Every payload starts with the self-delimiting code of
//! the coder id, so lengths always include that header. Values are only
//! comparable between runs that use the same family version.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use crate::bits::{BitReader, BitString};
use crate::codelen::{entropy, log2_binomial, self_delim_len, CodeLength, EXACT_BINOMIAL_LIMIT};
use crate::dfa::{equivalent_at, model_cost, DataSample, Dfa, SliceIndex, Word};
use crate::error::{domain, Error, Result};
use crate::ranking::{read_subset_index, subset_code_len, subset_rank, subset_unrank, write_subset_index};

/// Bumped whenever a coder's output changes.
pub const CODER_FAMILY_VERSION: u32 = 1;

/// An ordered set of length-`n` words with lexicographic ranks.
pub trait SliceView: Sync {
    fn n(&self) -> usize;
    fn len(&self) -> u64;
    fn rank(&self, w: &Word) -> Option<u64>;
    fn unrank(&self, r: u64) -> Option<Word>;

    fn is_empty(&self) -> bool {
        self.len() == 0
    }
}

impl SliceView for SliceIndex<'_> {
    fn n(&self) -> usize {
        SliceIndex::n(self)
    }
    fn len(&self) -> u64 {
        SliceIndex::len(self)
    }
    fn rank(&self, w: &Word) -> Option<u64> {
        SliceIndex::rank(self, w)
    }
    fn unrank(&self, r: u64) -> Option<Word> {
        SliceIndex::unrank(self, r)
    }
}

/// All of `{0,1}^n`.
#[derive(Clone, Copy, Debug)]
pub struct Cube {
    pub n: usize,
}

impl SliceView for Cube {
    fn n(&self) -> usize {
        self.n
    }
    fn len(&self) -> u64 {
        1 << self.n
    }
    fn rank(&self, w: &Word) -> Option<u64> {
        (w.len() == self.n).then(|| w.index())
    }
    fn unrank(&self, r: u64) -> Option<Word> {
        (r < self.len()).then(|| Word::from_index(r, self.n))
    }
}

/// An explicit sorted word set.
#[derive(Clone, Debug)]
pub struct WordSet {
    n: usize,
    words: Vec<Word>,
}

impl WordSet {
    pub fn new(n: usize, mut words: Vec<Word>) -> Result<Self> {
        if words.iter().any(|w| w.len() != n) {
            return domain(format!("word set members must have length {n}"));
        }
        words.sort_unstable();
        words.dedup();
        Ok(Self { n, words })
    }

    pub fn words(&self) -> &[Word] {
        &self.words
    }
}

impl SliceView for WordSet {
    fn n(&self) -> usize {
        self.n
    }
    fn len(&self) -> u64 {
        self.words.len() as u64
    }
    fn rank(&self, w: &Word) -> Option<u64> {
        self.words.binary_search(w).ok().map(|r| r as u64)
    }
    fn unrank(&self, r: u64) -> Option<Word> {
        self.words.get(r as usize).copied()
    }
}

/// A subset of `{0,1}^n` for `n <= 6`, one bit per word index.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct MaskSet {
    n: usize,
    mask: u64,
}

impl MaskSet {
    pub const MAX_N: usize = 6;

    pub fn new(n: usize, mask: u64) -> Result<Self> {
        if n > Self::MAX_N {
            return domain(format!("mask sets need n <= {}", Self::MAX_N));
        }
        if n < Self::MAX_N && mask >> (1u32 << n) != 0 {
            return domain("mask has bits beyond 2^n");
        }
        Ok(Self { n, mask })
    }

    pub fn of_sample(sample: &DataSample) -> Result<Self> {
        Self::new(sample.n(), sample.words().iter().fold(0, |m, w| m | 1 << w.index()))
    }

    pub fn mask(&self) -> u64 {
        self.mask
    }

    pub fn words(&self) -> Vec<Word> {
        (0..1u64 << self.n).filter(|i| self.mask >> i & 1 == 1).map(|i| Word::from_index(i, self.n)).collect()
    }
}

impl SliceView for MaskSet {
    fn n(&self) -> usize {
        self.n
    }
    fn len(&self) -> u64 {
        self.mask.count_ones() as u64
    }
    fn rank(&self, w: &Word) -> Option<u64> {
        let i = w.index();
        (w.len() == self.n && self.mask >> i & 1 == 1).then(|| (self.mask & ((1u64 << i) - 1)).count_ones() as u64)
    }
    fn unrank(&self, r: u64) -> Option<Word> {
        let mut m = self.mask;
        for _ in 0..r {
            m &= m.wrapping_sub(1);
        }
        (m != 0).then(|| Word::from_index(m.trailing_zeros() as u64, self.n))
    }
}

/// Description methods for a sample given its slice, `d` and `n`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Coder {
    /// Lexicographic index among the `d`-subsets of the slice.
    SubsetIndex = 1,
    /// The sample is the first or last `d` words of the slice.
    LexPrefix = 2,
    /// Run lengths of the membership bitmap over the slice.
    RunLength = 3,
    /// The words themselves.
    Literal = 4,
}

impl Coder {
    pub const ALL: [Coder; 4] = [Coder::SubsetIndex, Coder::LexPrefix, Coder::RunLength, Coder::Literal];

    pub fn id(self) -> u64 {
        self as u64
    }

    pub fn from_id(id: u64) -> Option<Self> {
        Self::ALL.into_iter().find(|c| c.id() == id)
    }

    pub fn name(self) -> &'static str {
        match self {
            Coder::SubsetIndex => "subset-index",
            Coder::LexPrefix => "lex-prefix",
            Coder::RunLength => "run-length",
            Coder::Literal => "literal",
        }
    }

    pub fn header_bits(self) -> u64 {
        self_delim_len(self.id()).expect("positive id")
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CoderInfo {
    pub id: u64,
    pub name: String,
    pub version: u32,
}

#[derive(Clone, Debug, PartialEq)]
pub struct KhatResult {
    /// Header plus payload length.
    pub bits: CodeLength,
    pub coder: Coder,
    /// The full description (header included) when it can be materialised.
    pub payload: Option<BitString>,
}

/// Ranks of the sample's words in the slice; `None` if some word is missing.
fn sample_ranks(sample: &DataSample, slice: &dyn SliceView) -> Option<Vec<u64>> {
    if sample.n() != slice.n() {
        return None;
    }
    // words are sorted, ranks are monotone
    sample.words().iter().map(|w| slice.rank(w)).collect()
}

/// Runs of the membership bitmap as (value, length), ignoring empty runs.
fn runs(l: u64, ranks: &[u64]) -> (bool, Vec<u64>) {
    let mut out = Vec::new();
    let mut pos = 0u64;
    let mut value = ranks.first() == Some(&0);
    let first = value;
    let mut i = 0;
    while pos < l {
        let end = if value {
            let mut end = ranks[i];
            while i < ranks.len() && ranks[i] == end {
                end += 1;
                i += 1;
            }
            end
        } else {
            ranks.get(i).copied().unwrap_or(l)
        };
        out.push(end - pos);
        pos = end;
        value = !value;
    }
    (first, out)
}

/// Whether the run starting at `pos` with value `value` is forced to reach the end.
fn run_is_implied(value: bool, pos: u64, ones: u64, l: u64, d: u64) -> bool {
    if value {
        d - ones == l - pos
    } else {
        ones == d
    }
}

/// Run-length code: first bit, then every run except an implied final one.
fn run_length_body(l: u64, d: u64, ranks: &[u64], out: Option<&mut BitString>) -> u64 {
    let (first, lens) = runs(l, ranks);
    let mut bits = 1;
    let mut sink = out;
    if let Some(o) = sink.as_deref_mut() {
        o.push(first);
    }
    let (mut pos, mut ones, mut value) = (0u64, 0u64, first);
    for len in lens {
        if run_is_implied(value, pos, ones, l, d) {
            break;
        }
        bits += self_delim_len(len).expect("runs are nonempty");
        if let Some(o) = sink.as_deref_mut() {
            o.push_self_delim(len);
        }
        pos += len;
        if value {
            ones += len;
        }
        value = !value;
    }
    bits
}

fn decode_run_length(r: &mut BitReader<'_>, l: u64, d: u64) -> Result<Vec<u64>> {
    let mut value = r.read_bit()?;
    let (mut pos, mut ones) = (0u64, 0u64);
    let mut members = Vec::new();
    loop {
        let len = if run_is_implied(value, pos, ones, l, d) {
            l - pos
        } else {
            let start = r.position();
            let len = r.read_self_delim()?;
            if len > l - pos || (value && ones + len > d) {
                return Err(Error::Decode { position: start, message: "run overruns the slice".into() });
            }
            len
        };
        if value {
            members.extend(pos..pos + len);
            ones += len;
        }
        pos += len;
        value = !value;
        if pos == l && run_is_implied(value, pos, ones, l, d) {
            return Ok(members);
        }
        if pos == l {
            return r.error("bitmap ended with members missing");
        }
    }
}

/// Versioned family of coders; K̂ is the minimum over the members.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CoderFamily {
    coders: Vec<Coder>,
}

impl Default for CoderFamily {
    fn default() -> Self {
        Self { coders: Coder::ALL.to_vec() }
    }
}

impl CoderFamily {
    pub fn new(mut coders: Vec<Coder>) -> Result<Self> {
        coders.sort_unstable();
        coders.dedup();
        if coders.is_empty() {
            return domain("a coder family needs at least one coder");
        }
        Ok(Self { coders })
    }

    pub fn coders(&self) -> &[Coder] {
        &self.coders
    }

    pub fn registry(&self) -> Vec<CoderInfo> {
        self.coders.iter().map(|c| CoderInfo { id: c.id(), name: c.name().into(), version: CODER_FAMILY_VERSION }).collect()
    }

    /// Length of one coder's description, or `None` when it does not apply.
    fn length(&self, coder: Coder, l: u64, d: u64, n: usize, ranks: &[u64]) -> Result<Option<u64>> {
        let body = match coder {
            Coder::SubsetIndex => Some(subset_code_len(l, d)?.bits() as u64),
            Coder::LexPrefix => {
                let prefix = ranks.iter().enumerate().all(|(i, &r)| r == i as u64);
                let suffix = ranks.iter().enumerate().all(|(i, &r)| r == l - d + i as u64);
                (prefix || suffix).then(|| 2 + self_delim_len(d).expect("d >= 1"))
            }
            Coder::RunLength => Some(run_length_body(l, d, ranks, None)),
            Coder::Literal => Some(d * n as u64 + self_delim_len(d)?),
        };
        Ok(body.map(|b| b + coder.header_bits()))
    }

    fn payload(&self, coder: Coder, sample: &DataSample, l: u64, ranks: &[u64]) -> Result<Option<BitString>> {
        let d = ranks.len() as u64;
        let mut out = BitString::new();
        out.push_self_delim(coder.id());
        match coder {
            Coder::SubsetIndex => {
                if l > EXACT_BINOMIAL_LIMIT {
                    return Ok(None);
                }
                write_subset_index(&subset_rank(l, ranks)?, &mut out)?;
            }
            Coder::LexPrefix => {
                out.push(false);
                out.push(ranks[0] != 0);
                out.push_self_delim(d);
            }
            Coder::RunLength => {
                run_length_body(l, d, ranks, Some(&mut out));
            }
            Coder::Literal => {
                out.push_self_delim(d);
                for w in sample.words() {
                    out.push_uint(w.index(), w.len() as u32);
                }
            }
        }
        Ok(Some(out))
    }

    /// K̂(D | slice, d, n): the shortest description in the family.
    /// Ties go to the smallest coder id.
    pub fn khat(&self, sample: &DataSample, slice: &dyn SliceView) -> Result<KhatResult> {
        self.khat_inner(sample, slice, true)
    }

    /// As [`CoderFamily::khat`] without building the payload.
    pub fn khat_len(&self, sample: &DataSample, slice: &dyn SliceView) -> Result<KhatResult> {
        self.khat_inner(sample, slice, false)
    }

    fn khat_inner(&self, sample: &DataSample, slice: &dyn SliceView, materialize: bool) -> Result<KhatResult> {
        let Some(ranks) = sample_ranks(sample, slice) else {
            return domain("the sample is not contained in the model's slice");
        };
        let (l, d) = (slice.len(), sample.d() as u64);
        let mut best: Option<(u64, Coder)> = None;
        for &coder in &self.coders {
            if let Some(bits) = self.length(coder, l, d, sample.n(), &ranks)? {
                if best.is_none_or(|(b, _)| bits < b) {
                    best = Some((bits, coder));
                }
            }
        }
        let Some((bits, coder)) = best else {
            return domain("no coder in the family applies to this sample");
        };
        let payload = if materialize { self.payload(coder, sample, l, &ranks)? } else { None };
        debug_assert!(payload.as_ref().is_none_or(|p| p.len() as u64 == bits));
        Ok(KhatResult { bits: CodeLength::from_int(bits), coder, payload })
    }

    /// Recovers the sample from a payload produced by [`CoderFamily::khat`].
    pub fn decode(&self, payload: &BitString, slice: &dyn SliceView, d: u64) -> Result<DataSample> {
        let mut r = payload.reader();
        let id = r.read_self_delim()?;
        let coder = match Coder::from_id(id) {
            Some(c) if self.coders.contains(&c) => c,
            _ => return Err(Error::Decode { position: 0, message: format!("unknown coder id {id}") }),
        };
        let l = slice.len();
        if d == 0 || d > l {
            return domain(format!("cannot decode {d} words from a slice of {l}"));
        }
        let n = slice.n();
        let ranks: Vec<u64> = match coder {
            Coder::SubsetIndex => subset_unrank(&read_subset_index(&mut r, l, d)?)?,
            Coder::LexPrefix => {
                let last = r.read_uint(2)?;
                if last > 1 {
                    return r.error("unknown prefix flag");
                }
                if r.read_self_delim()? != d {
                    return r.error("sample size mismatch");
                }
                if last == 1 {
                    (l - d..l).collect()
                } else {
                    (0..d).collect()
                }
            }
            Coder::RunLength => decode_run_length(&mut r, l, d)?,
            Coder::Literal => {
                if r.read_self_delim()? != d {
                    return r.error("sample size mismatch");
                }
                let words = (0..d).map(|_| Ok(Word::from_index(r.read_uint(n as u32)?, n))).collect::<Result<Vec<_>>>()?;
                r.finish()?;
                return DataSample::new(n, words);
            }
        };
        r.finish()?;
        let words = ranks.iter().map(|&k| slice.unrank(k).expect("rank within slice")).collect();
        DataSample::new(n, words)
    }
}

/// Distinguished models that may be named instead of spelled out.
#[derive(Clone, Debug)]
pub struct NamedModels {
    entries: Vec<(String, Dfa)>,
}

impl Default for NamedModels {
    /// Universal, even parity, odd parity (indices 1, 2, 3).
    fn default() -> Self {
        Self {
            entries: vec![
                ("universal".into(), Dfa::universal(2)),
                ("even-parity".into(), Dfa::parity(true)),
                ("odd-parity".into(), Dfa::parity(false)),
            ],
        }
    }
}

impl NamedModels {
    pub fn empty() -> Self {
        Self { entries: Vec::new() }
    }

    pub fn with(mut self, name: impl Into<String>, model: Dfa) -> Self {
        self.entries.push((name.into(), model));
        self
    }

    pub fn entries(&self) -> &[(String, Dfa)] {
        &self.entries
    }

    /// 1-based index of the first entry accepting the same length-`n` words.
    pub fn lookup(&self, a: &Dfa, n: usize) -> Option<u64> {
        self.entries.iter().position(|(_, m)| equivalent_at(a, m, n)).map(|i| i as u64 + 1)
    }
}

/// How a model description was obtained.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case", tag = "kind", content = "index")]
pub enum ModelCoding {
    /// `m(q, s)` bits of the machine, method header 1.
    Raw,
    /// Dictionary index, method header 2.
    Named(u64),
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct ModelCost {
    pub bits: CodeLength,
    pub coding: ModelCoding,
}

/// Cost of the raw machine description including its method header.
pub fn raw_model_bits(a: &Dfa) -> CodeLength {
    model_cost(a.q(), a.s()).expect("q, s >= 1") + CodeLength::from_int(1)
}

/// K̂(A): the cheaper of the raw machine cost and a dictionary reference,
/// with language equivalence judged on length-`n` words.
pub fn khat_model(a: &Dfa, named: &NamedModels, n: usize) -> ModelCost {
    let raw = raw_model_bits(a);
    let named_bits =
        named.lookup(a, n).map(|i| (CodeLength::from_int(self_delim_len(i).expect("i >= 1") + self_delim_len(2).expect("2")), i));
    match named_bits {
        Some((bits, i)) if bits < raw => ModelCost { bits, coding: ModelCoding::Named(i) },
        _ => ModelCost { bits: raw, coding: ModelCoding::Raw },
    }
}

/// Lower bound on the randomness deficiency of a sample in a model.
#[derive(Clone, Debug, PartialEq)]
pub struct Deficiency {
    pub l: u64,
    /// `log2 C(l, d) - K̂(D | A, d, n)`.
    pub exact: f64,
    /// `l H(d/l) - K̂(D | A, d, n)`, with `H` read as 0 at `d = l`.
    pub entropy: f64,
    pub khat: KhatResult,
}

pub fn deficiency_in(sample: &DataSample, slice: &dyn SliceView, family: &CoderFamily) -> Result<Deficiency> {
    let khat = family.khat_len(sample, slice)?;
    let (l, d) = (slice.len(), sample.d() as u64);
    let log_c = log2_binomial(l, d)?.bits();
    let lh = if d == l { 0.0 } else { l as f64 * entropy(d as f64 / l as f64)?.bits() };
    Ok(Deficiency { l, exact: log_c - khat.bits.bits(), entropy: lh - khat.bits.bits(), khat })
}

pub fn deficiency_lower_bound(sample: &DataSample, a: &Dfa, family: &CoderFamily) -> Result<Deficiency> {
    let slice = SliceIndex::new(a, sample.n())?;
    deficiency_in(sample, &slice, family)
}

pub fn khat_data_given_model(sample: &DataSample, a: &Dfa, family: &CoderFamily) -> Result<KhatResult> {
    let slice = SliceIndex::new(a, sample.n())?;
    family.khat(sample, &slice)
}

/// Stipulated complexities for labelled objects.
#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct ComplexityOracle {
    table: BTreeMap<String, CodeLength>,
}

impl ComplexityOracle {
    pub fn new(entries: impl IntoIterator<Item = (String, CodeLength)>) -> Self {
        Self { table: entries.into_iter().collect() }
    }

    pub fn get(&self, label: &str) -> Result<CodeLength> {
        self.table.get(label).copied().ok_or_else(|| Error::Domain(format!("no stipulated complexity for {label:?}")))
    }

    pub fn labels(&self) -> impl Iterator<Item = &str> {
        self.table.keys().map(String::as_str)
    }
}

/// Method used for the unconditional estimate K̂(D | n, d).
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case", tag = "kind", content = "model")]
pub enum SampleMethod {
    /// A model from the supplied list, then the sample given it.
    TwoPart(usize),
    /// The sample's membership within `{0,1}^n`.
    Bitmap,
    /// `d n` bits of words.
    Literal,
}

impl SampleMethod {
    pub fn header_bits(self) -> u64 {
        let id = match self {
            SampleMethod::TwoPart(_) => 1,
            SampleMethod::Bitmap => 2,
            SampleMethod::Literal => 3,
        };
        self_delim_len(id).expect("positive id")
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct SampleComplexity {
    pub bits: CodeLength,
    pub method: SampleMethod,
}

/// K̂(D | n, d): minimum of a two-part description through any of `models`,
/// the bitmap of `D` inside `{0,1}^n`, and the literal word list.
pub fn khat_unconditional(sample: &DataSample, models: &[Dfa], named: &NamedModels, family: &CoderFamily) -> Result<SampleComplexity> {
    let n = sample.n();
    let lit = SampleMethod::Literal;
    let mut best = SampleComplexity { bits: CodeLength::from_int(lit.header_bits() + (sample.d() * n) as u64), method: lit };
    let consider = |best: &mut SampleComplexity, bits: CodeLength, method: SampleMethod| {
        if bits < best.bits {
            *best = SampleComplexity { bits, method };
        }
    };
    if n < 63 {
        let k = family.khat_len(sample, &Cube { n })?.bits;
        consider(&mut best, k + CodeLength::from_int(SampleMethod::Bitmap.header_bits()), SampleMethod::Bitmap);
    }
    for (i, a) in models.iter().enumerate() {
        let slice = SliceIndex::new(a, n)?;
        if sample_ranks(sample, &slice).is_none() {
            continue;
        }
        let method = SampleMethod::TwoPart(i);
        let bits = khat_model(a, named, n).bits + family.khat_len(sample, &slice)?.bits + CodeLength::from_int(method.header_bits());
        consider(&mut best, bits, method);
    }
    Ok(best)
}
