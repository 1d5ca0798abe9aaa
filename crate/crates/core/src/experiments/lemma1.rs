//! Counting check over every `d`-subset of an `m`-element slice: the share of
//! subsets whose index needs at least `log2 C(m, d) - delta` bits is at least
//! `1 - 2^-delta`.
//!
//! A subset's index length is `ceil(log2(rank + 1))`, the plain binary length
//! of its rank in lexicographic order.

use num_traits::ToPrimitive;
use serde::{Deserialize, Serialize};

use super::{ExperimentReport, Relation};
use crate::codelen::log2_binomial;
use crate::error::{domain, Result};
use crate::ranking::subset_rank;

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct Lemma1Cell {
    pub m: u64,
    pub d: u64,
    pub delta: u32,
    pub subsets: u64,
    /// Subsets whose index is at least `log2 C(m, d) - delta` bits long.
    pub long: u64,
}

impl Lemma1Cell {
    pub fn fraction(&self) -> f64 {
        self.long as f64 / self.subsets as f64
    }

    pub fn bound(&self) -> f64 {
        1.0 - (-(self.delta as f64)).exp2()
    }
}

fn index_len(rank: u64) -> u64 {
    u64::from(64 - rank.leading_zeros())
}

/// Cells for every `1 <= m <= max_m`, `0 <= d <= m` and each `delta`. The
/// slice consists of words of length `n`, so `m <= 2^n`.
pub fn lemma1_cells(n: usize, max_m: u64, deltas: &[u32]) -> Result<Vec<Lemma1Cell>> {
    if n > 4 || max_m > 8 || max_m > 1 << n {
        return domain(format!("counting check needs n <= 4 and m <= min(8, 2^n), got n = {n}, m = {max_m}"));
    }
    let mut cells = Vec::new();
    for m in 1..=max_m {
        for d in 0..=m {
            let threshold = log2_binomial(m, d)?.bits();
            let mut lengths = Vec::new();
            for mask in 0u64..1 << m {
                if u64::from(mask.count_ones()) != d {
                    continue;
                }
                let members: Vec<u64> = (0..m).filter(|i| mask >> i & 1 == 1).collect();
                let rank = subset_rank(m, &members)?.rank.to_u64().expect("ranks below 2^8");
                lengths.push(index_len(rank));
            }
            for &delta in deltas {
                let long = lengths.iter().filter(|&&len| len as f64 >= threshold - delta as f64).count() as u64;
                cells.push(Lemma1Cell { m, d, delta, subsets: lengths.len() as u64, long });
            }
        }
    }
    Ok(cells)
}

pub fn run_lemma1_counting(n: usize, max_m: u64, deltas: &[u32]) -> Result<ExperimentReport> {
    let cells = lemma1_cells(n, max_m, deltas)?;
    let mut r = ExperimentReport::new("lemma1", serde_json::json!({ "n": n, "max_m": max_m, "deltas": deltas }));
    for c in &cells {
        let label = format!("m={} d={} delta={}", c.m, c.d, c.delta);
        r.quantity(format!("fraction {label}"), c.fraction(), "long indices / C(m, d)");
        r.check(format!("bound {label}"), c.fraction(), Relation::AtLeast, c.bound());
    }
    Ok(r)
}
