//! Half of the even-parity slice, chosen lexicographically (`D0`) or at
//! random (`D1`), explained by its prefix-tree acceptor `A0`, the parity
//! machine `A1` and the universal machine `A2`.
//!
//! MDL lengths here use the closed-form data cost, `m(q, s) + data_to_model_cost`.

use rand::seq::index::sample as index_sample;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use super::{ExperimentReport, Relation};
use crate::codelen::data_to_model_cost;
use crate::coders::{deficiency_lower_bound, CoderFamily, Deficiency};
use crate::dfa::{model_cost, prefix_tree_acceptor, DataSample, Dfa};
use crate::error::{capacity, Result};

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct ParityTolerances {
    /// Accepted range of `MDL(D0, A1) / MDL(D0, A2)`.
    pub ratio: (f64, f64),
    /// `MDL(D, A0) >= (1 - epsilon) 2^n n`.
    pub a0_epsilon: f64,
    /// `deficiency(D0 | A1) >= 2^(n-1) - case1_slack`.
    pub case1_slack: f64,
    /// `|deficiency(D1 | A1)| <= case2_bound`.
    pub case2_bound: f64,
    /// `|deficiency(D | A0)| <= a0_deficiency_bound`.
    pub a0_deficiency_bound: f64,
}

impl ParityTolerances {
    pub fn for_n(n: usize) -> Self {
        let nf = n as f64;
        Self {
            ratio: if n >= 16 { (0.60, 0.64) } else { (0.58, 0.66) },
            a0_epsilon: 0.2,
            case1_slack: 64.0 * nf,
            case2_bound: 2.0 * nf + 64.0,
            a0_deficiency_bound: 5.0,
        }
    }
}

/// Indices of the even-parity words of length `n`, ascending.
pub fn even_slice(n: usize) -> Vec<u64> {
    (0..1u64 << n).filter(|i| i.count_ones() % 2 == 0).collect()
}

/// `(D0, D1)`: the first half of the even slice and a seeded random half.
pub fn parity_samples(n: usize, seed: u64) -> Result<(DataSample, DataSample)> {
    if !(8..=20).contains(&n) {
        return capacity(format!("parity experiment supports 8 <= n <= 20, got {n}"));
    }
    let even = even_slice(n);
    let half = even.len() / 2;
    let d0 = DataSample::from_indices(n, even[..half].iter().copied())?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let picked = index_sample(&mut rng, even.len(), half);
    let d1 = DataSample::from_indices(n, picked.iter().map(|i| even[i]))?;
    Ok((d0, d1))
}

fn mdl(sample: &DataSample, a: &Dfa, l: u64) -> Result<f64> {
    Ok(model_cost(a.q(), a.s())?.bits() + data_to_model_cost(l, sample.d() as u64, sample.n() as u64)?.bits())
}

fn record(r: &mut ExperimentReport, label: &str, def: &Deficiency) -> f64 {
    r.quantity(label, def.exact, "log2 C(l, d) - K̂(D | A, d, n)");
    r.quantity(format!("{label} (entropy form)"), def.entropy, "l H(d/l) - K̂(D | A, d, n)");
    def.exact
}

pub fn run_parity(n: usize, seed: u64) -> Result<ExperimentReport> {
    let tol = ParityTolerances::for_n(n);
    let (d0, d1) = parity_samples(n, seed)?;
    let family = CoderFamily::default();
    let mut r = ExperimentReport::new("parity", serde_json::json!({ "n": n, "seed": seed, "d": d0.d(), "tolerances": tol }));
    let nf = n as f64;
    let cube = 1u64 << n;
    let (a1, a2) = (Dfa::parity(true), Dfa::universal(2));
    const MDL: &str = "m(q, s) + data_to_model_cost(l, d, n)";

    let d0_a1 = r.quantity("mdl(D0, A1)", mdl(&d0, &a1, cube / 2)?, MDL);
    let d0_a2 = r.quantity("mdl(D0, A2)", mdl(&d0, &a2, cube)?, MDL);
    let ratio = r.quantity("mdl(D0, A1) / mdl(D0, A2)", d0_a1 / d0_a2, "ratio of the two lengths above");
    r.quantity("mdl(D1, A1)", mdl(&d1, &a1, cube / 2)?, MDL);

    let case1 = record(&mut r, "deficiency(D0 | A1)", &deficiency_lower_bound(&d0, &a1, &family)?);
    let case2 = record(&mut r, "deficiency(D1 | A1)", &deficiency_lower_bound(&d1, &a1, &family)?);
    let mut a0_rows = Vec::new();
    for (name, sample) in [("D0", &d0), ("D1", &d1)] {
        let a0 = prefix_tree_acceptor(sample);
        let m = mdl(sample, &a0, sample.d() as u64)?;
        let def = deficiency_lower_bound(sample, &a0, &family)?;
        a0_rows.push((name, a0.q(), m, def));
    }
    for (name, q, m, def) in &a0_rows {
        r.quantity(format!("states(A0 of {name})"), *q as f64, "prefix-tree acceptor size");
        r.quantity(format!("mdl({name}, A0)"), *m, MDL);
        record(&mut r, &format!("deficiency({name} | A0)"), def);
    }

    r.check("ratio lower bound", ratio, Relation::AtLeast, tol.ratio.0);
    r.check("ratio upper bound", ratio, Relation::AtMost, tol.ratio.1);
    let floor = (1.0 - tol.a0_epsilon) * cube as f64 * nf;
    for (name, _, m, def) in &a0_rows {
        r.check(format!("mdl({name}, A0) >= (1 - eps) 2^n n"), *m, Relation::AtLeast, floor);
        r.check(format!("|deficiency({name} | A0)| small"), def.exact.abs(), Relation::AtMost, tol.a0_deficiency_bound);
    }
    r.check("deficiency(D0 | A1) near 2^(n-1)", case1, Relation::AtLeast, (cube / 2) as f64 - tol.case1_slack);
    r.check("|deficiency(D1 | A1)| small", case2.abs(), Relation::AtMost, tol.case2_bound);
    Ok(r)
}
