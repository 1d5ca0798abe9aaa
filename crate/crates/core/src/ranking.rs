//! Enumerative coding of `d`-subsets of `[0, l)` in lexicographic order.

use num_bigint::BigUint;
use num_traits::{One, Zero};

use crate::bits::{BitReader, BitString};
use crate::codelen::{binomial, log2_binomial, CodeLength, EXACT_BINOMIAL_LIMIT};
use crate::error::{capacity, domain, Result};

/// Lexicographic rank of a `d`-subset of `[0, l)`; `rank < C(l, d)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SubsetIndex {
    pub rank: BigUint,
    pub l: u64,
    pub d: u64,
}

fn guard(l: u64) -> Result<()> {
    if l > EXACT_BINOMIAL_LIMIT {
        return capacity(format!("exact subset ranks need l <= {EXACT_BINOMIAL_LIMIT}, got {l}"));
    }
    Ok(())
}

/// Walks `C(l - 1 - j, k - 1)` along positions `j` while `k`, the number of
/// members still to place, shrinks. Every step is one exact small-integer
/// multiply and divide.
struct Walker {
    n: u64,
    r: u64,
    value: BigUint,
}

impl Walker {
    fn new(l: u64, d: u64) -> Self {
        Self { n: l - 1, r: d - 1, value: binomial(l - 1, d - 1) }
    }

    /// Advance one position; `taken` says whether the current one was a member.
    fn step(&mut self, taken: bool) {
        if taken {
            self.value = &self.value * self.r / self.n;
            self.r -= 1;
        } else {
            self.value = &self.value * (self.n - self.r) / self.n;
        }
        self.n -= 1;
    }
}

/// Rank of the subset `members` (strictly increasing, each `< l`).
pub fn subset_rank(l: u64, members: &[u64]) -> Result<SubsetIndex> {
    guard(l)?;
    let d = members.len() as u64;
    if d > l {
        return domain(format!("{d} members exceed l = {l}"));
    }
    if members.windows(2).any(|w| w[0] >= w[1]) {
        return domain("subset members must be strictly increasing");
    }
    if members.last().is_some_and(|&c| c >= l) {
        return domain(format!("subset member out of range [0, {l})"));
    }
    let mut rank = BigUint::zero();
    if d == 0 {
        return Ok(SubsetIndex { rank, l, d });
    }
    let mut walker = Walker::new(l, d);
    let mut next = members.iter().peekable();
    for j in 0..l {
        let taken = next.peek() == Some(&&j);
        if taken {
            next.next();
            if next.peek().is_none() {
                break;
            }
        } else {
            // every subset that takes j here sorts before ours
            rank += &walker.value;
        }
        walker.step(taken);
    }
    Ok(SubsetIndex { rank, l, d })
}

/// Inverse of [`subset_rank`].
pub fn subset_unrank(index: &SubsetIndex) -> Result<Vec<u64>> {
    let SubsetIndex { rank, l, d } = index;
    let (l, d) = (*l, *d);
    guard(l)?;
    if d > l || *rank >= binomial(l, d) {
        return domain(format!("rank out of range for C({l}, {d})"));
    }
    let mut members = Vec::with_capacity(d as usize);
    if d == 0 {
        return Ok(members);
    }
    let mut rest = rank.clone();
    let mut walker = Walker::new(l, d);
    for j in 0..l {
        let taken = rest < walker.value;
        if taken {
            members.push(j);
            if members.len() as u64 == d {
                break;
            }
        } else {
            rest -= &walker.value;
        }
        walker.step(taken);
    }
    Ok(members)
}

/// `ceil(log2 C(l, d))`, the width of a subset index.
pub fn subset_code_len(l: u64, d: u64) -> Result<CodeLength> {
    Ok(log2_binomial(l, d)?.ceil())
}

fn index_width(l: u64, d: u64) -> Result<u64> {
    Ok(subset_code_len(l, d)?.bits() as u64)
}

pub fn write_subset_index(index: &SubsetIndex, out: &mut BitString) -> Result<()> {
    out.push_big(&index.rank, index_width(index.l, index.d)?);
    Ok(())
}

pub fn read_subset_index(reader: &mut BitReader<'_>, l: u64, d: u64) -> Result<SubsetIndex> {
    guard(l)?;
    let start = reader.position();
    let rank = reader.read_big(index_width(l, d)?)?;
    if rank >= binomial(l, d) {
        return Err(crate::error::Error::Decode { position: start, message: format!("subset index out of range for C({l}, {d})") });
    }
    Ok(SubsetIndex { rank, l, d })
}

/// Number of `d`-subsets of `[0, l)`; exact for any size.
pub fn subset_count(l: u64, d: u64) -> BigUint {
    if d > l {
        BigUint::zero()
    } else if d == 0 || d == l {
        BigUint::one()
    } else {
        binomial(l, d)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_traits::ToPrimitive;
    use proptest::prelude::*;

    fn rank(l: u64, s: &[u64]) -> u64 {
        subset_rank(l, s).unwrap().rank.to_u64().unwrap()
    }

    /// All `d`-subsets of `[0, l)` in lexicographic order.
    fn listing(l: u64, d: u64) -> Vec<Vec<u64>> {
        let mut out = vec![];
        for mask in 0u32..1 << l {
            if mask.count_ones() as u64 == d {
                out.push((0..l).filter(|i| mask >> i & 1 == 1).collect::<Vec<_>>());
            }
        }
        out.sort();
        out
    }

    #[test]
    fn small_ranks() {
        assert_eq!(rank(4, &[0, 1]), 0);
        assert_eq!(rank(4, &[2, 3]), 5);
        assert_eq!(rank(4, &[]), 0);
        assert_eq!(rank(1, &[0]), 0);
    }

    #[test]
    fn exhaustive_order_up_to_eight() {
        for l in 0..=8 {
            for d in 0..=l {
                for (expected, s) in listing(l, d).iter().enumerate() {
                    let idx = subset_rank(l, s).unwrap();
                    assert_eq!(idx.rank.to_u64().unwrap(), expected as u64, "l={l} s={s:?}");
                    assert_eq!(&subset_unrank(&idx).unwrap(), s);
                }
            }
        }
    }

    #[test]
    fn code_lengths() {
        assert_eq!(subset_code_len(4, 2).unwrap().bits(), 3.0);
        assert_eq!(subset_code_len(9, 9).unwrap().bits(), 0.0);
        let big = subset_code_len(1 << 15, 1 << 14).unwrap().bits();
        // 2^15 - (1/2) log2(pi 2^14) ~ 2^15 - 8.3
        assert!((big - ((1u64 << 15) as f64 - 8.0)).abs() <= 2.0, "{big}");
    }

    #[test]
    fn invalid_inputs() {
        assert!(subset_rank(4, &[1, 1]).is_err());
        assert!(subset_rank(4, &[4]).is_err());
        assert!(matches!(subset_rank(20_000, &[1]), Err(crate::Error::Capacity(_))));
        let bad = SubsetIndex { rank: BigUint::from(6u8), l: 4, d: 2 };
        assert!(subset_unrank(&bad).is_err());
    }

    #[test]
    fn bit_round_trip() {
        let idx = subset_rank(10, &[1, 4, 9]).unwrap();
        let mut out = BitString::new();
        write_subset_index(&idx, &mut out).unwrap();
        assert_eq!(out.len(), 7); // C(10,3) = 120
        let mut r = out.reader();
        assert_eq!(read_subset_index(&mut r, 10, 3).unwrap(), idx);
        r.finish().unwrap();
    }

    proptest! {
        #[test]
        fn round_trip_large(l in 1u64..3000, picks in proptest::collection::btree_set(0u64..3000, 0..60)) {
            let s: Vec<u64> = picks.into_iter().filter(|&c| c < l).collect();
            let idx = subset_rank(l, &s).unwrap();
            prop_assert!(idx.rank < subset_count(l, s.len() as u64));
            prop_assert_eq!(subset_unrank(&idx).unwrap(), s);
        }

        #[test]
        fn code_len_within_one_bit(l in 0u64..300, frac in 0.0f64..=1.0) {
            let d = (l as f64 * frac) as u64;
            let exact = log2_binomial(l, d).unwrap().bits();
            let len = subset_code_len(l, d).unwrap().bits();
            prop_assert!(len >= exact && len < exact + 1.0);
        }
    }
}
