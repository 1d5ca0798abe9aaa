//! Structure-function surrogates over enumerable model classes.
//!
//! Both `λ̂` and `β̂` depend on a model only through its cost and its
//! length-`n` slice, so a class is reduced to a [`Catalog`]: one entry per
//! distinct slice (a `u64` bitmask, hence `n <= 6`) carrying the cheapest
//! model that realises it. A catalog is built once per `(class, n)` and
//! shared by every sample.

use std::collections::HashMap;

use serde::{Deserialize, Serialize};

use crate::codelen::{ceil_log2, log2_binomial, CodeLength};
use crate::coders::{khat_model, CoderFamily, MaskSet, NamedModels, SampleComplexity, SampleMethod};
use crate::dfa::{minimize, prefix_tree_acceptor, DataSample, Dfa, StandardEnumeration, Word};
use crate::error::{capacity, domain, Result};
use crate::exec::Execution;
use crate::ranking::subset_code_len;

/// Longest coder header in the family; the unit of the slack budgets below.
pub const HEADER_BITS: f64 = 5.0;
/// `λ̂(α) >= K̂(D) - SLACK` and the weak-guarantee slack.
pub const SLACK: f64 = HEADER_BITS + 2.0;
/// Tolerance of the witness cross-check.
pub const WITNESS_SLACK: f64 = 2.0 * HEADER_BITS + 4.0;
/// Width of the surrogate strip: headers plus two subset roundings plus 8.
pub const STRIP_SLACK: f64 = 3.0 * HEADER_BITS + 2.0 + 8.0;
/// A model counts as a `β̂` witness when within this many bits of `β̂`.
pub const BETA_WITNESS_TOLERANCE: f64 = 1.0;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case", tag = "kind")]
pub enum ModelClass {
    /// Binary machines with at most `max_states` states.
    Dfa { max_states: usize },
    /// Every nonempty subset of `{0,1}^n`, costed through its minimal machine.
    Subsets,
}

const MAX_CLASS_SIZE: u128 = 1 << 22;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CatalogEntry {
    pub mask: u64,
    pub cost: CodeLength,
    pub model: Dfa,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Catalog {
    pub n: usize,
    pub class: ModelClass,
    /// Sorted by cost, ties by mask.
    pub entries: Vec<CatalogEntry>,
}

fn slice_mask(a: &Dfa, n: usize) -> u64 {
    (0..1u64 << n).filter(|&i| a.accepts(&Word::from_index(i, n))).fold(0, |m, i| m | 1 << i)
}

impl Catalog {
    pub fn build(n: usize, class: ModelClass, named: &NamedModels, exec: Execution) -> Result<Self> {
        if n > MaskSet::MAX_N {
            return capacity(format!("structure tables need n <= {}", MaskSet::MAX_N));
        }
        let pairs: Vec<(u64, CodeLength, Dfa)> = match class {
            ModelClass::Dfa { max_states } => {
                if max_states == 0 {
                    return domain("max_states must be positive");
                }
                let e = StandardEnumeration::new(max_states + 2)?;
                let blocks: Vec<_> = e.blocks().filter(|b| b.s == 2 && b.q <= max_states).collect();
                let size: u128 = blocks.iter().map(|b| b.len).sum();
                if size > MAX_CLASS_SIZE {
                    return capacity(format!("{size} machines exceed the class limit {MAX_CLASS_SIZE}"));
                }
                let machines: Vec<Dfa> = blocks.iter().flat_map(|b| b.iter()).collect();
                exec.map(&machines, |a| (slice_mask(a, n), khat_model(a, named, n).bits, a.clone()))
            }
            ModelClass::Subsets => {
                if n > 4 {
                    return capacity("the finite-subset class needs n <= 4");
                }
                let masks: Vec<u64> = (1..1u64 << (1u64 << n)).collect();
                exec.map(&masks, |&m| {
                    let words = MaskSet::new(n, m).expect("mask in range").words();
                    let a = minimize(&prefix_tree_acceptor(&DataSample::new(n, words).expect("nonempty")));
                    (m, khat_model(&a, named, n).bits, a)
                })
            }
        };
        // keep the first cheapest machine per slice
        let mut best: HashMap<u64, (CodeLength, Dfa)> = HashMap::new();
        for (mask, cost, model) in pairs {
            if mask == 0 {
                continue;
            }
            match best.get(&mask) {
                Some((c, _)) if *c <= cost => {}
                _ => {
                    best.insert(mask, (cost, model));
                }
            }
        }
        let mut entries: Vec<CatalogEntry> = best.into_iter().map(|(mask, (cost, model))| CatalogEntry { mask, cost, model }).collect();
        entries.sort_by(|a, b| a.cost.cmp(&b.cost).then(a.mask.cmp(&b.mask)));
        Ok(Self { n, class, entries })
    }
}

/// One feasible model: its catalog position and derived quantities.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Witness {
    /// Index into the catalog.
    pub id: usize,
    pub cost: f64,
    pub l: u64,
    /// Two-part length: cost plus subset index length.
    pub total: f64,
    /// `log2 C(l, d) - K̂(D | M)`.
    pub deficiency: f64,
}

/// A breakpoint of the step functions: the best values over all models
/// costing at most `cost`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Step {
    pub cost: f64,
    pub lambda: f64,
    pub lambda_witness: usize,
    pub beta: f64,
    pub beta_witness: usize,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct StructureRow {
    pub alpha: f64,
    pub lambda: Option<f64>,
    pub lambda_witness: Option<usize>,
    pub beta: Option<f64>,
    pub beta_witness: Option<usize>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct StructureTable {
    pub n: usize,
    pub d: usize,
    pub class: ModelClass,
    pub khat_d: SampleComplexity,
    pub rows: Vec<StructureRow>,
    /// Feasible models in catalog order.
    pub witnesses: Vec<Witness>,
    pub steps: Vec<Step>,
}

impl StructureTable {
    fn step_at(&self, alpha: f64) -> Option<&Step> {
        let k = self.steps.partition_point(|s| s.cost <= alpha);
        k.checked_sub(1).map(|i| &self.steps[i])
    }

    /// `λ̂(α)` for any real `α`; `None` stands for an empty feasible set.
    pub fn lambda_at(&self, alpha: f64) -> Option<f64> {
        self.step_at(alpha).map(|s| s.lambda)
    }

    pub fn beta_at(&self, alpha: f64) -> Option<f64> {
        self.step_at(alpha).map(|s| s.beta)
    }

    pub fn witness(&self, id: usize) -> Option<&Witness> {
        self.witnesses.iter().find(|w| w.id == id)
    }

    pub fn to_csv(&self) -> String {
        let mut out = String::from("alpha,lambda,lambda_witness_id,beta,beta_witness_id\n");
        let opt = |v: Option<f64>| v.map_or("inf".to_string(), |x| x.to_string());
        let id = |v: Option<usize>| v.map_or(String::new(), |x| x.to_string());
        for r in &self.rows {
            out += &format!("{},{},{},{},{}\n", r.alpha, opt(r.lambda), id(r.lambda_witness), opt(r.beta), id(r.beta_witness));
        }
        out
    }
}

/// Builds `λ̂` and `β̂` for `sample` over the catalog's class on the grid
/// `α = 0, 1, ..., ceil(K̂(D)) + 8`.
pub fn build_structure_table(sample: &DataSample, catalog: &Catalog, family: &CoderFamily) -> Result<StructureTable> {
    let n = sample.n();
    if n != catalog.n {
        return domain(format!("sample length {n} does not match catalog length {}", catalog.n));
    }
    let d = sample.d() as u64;
    let dmask = MaskSet::of_sample(sample)?.mask();
    let mut witnesses = Vec::new();
    let mut two_part_best = f64::INFINITY;
    for (id, e) in catalog.entries.iter().enumerate() {
        if e.mask & dmask != dmask {
            continue;
        }
        let slice = MaskSet::new(n, e.mask)?;
        let l = e.mask.count_ones() as u64;
        let khat = family.khat_len(sample, &slice)?.bits.bits();
        let cost = e.cost.bits();
        two_part_best = two_part_best.min(cost + khat);
        witnesses.push(Witness {
            id,
            cost,
            l,
            total: cost + subset_code_len(l, d)?.bits(),
            deficiency: log2_binomial(l, d)?.bits() - khat,
        });
    }
    let khat_d = unconditional(sample, two_part_best, family)?;

    let mut steps: Vec<Step> = Vec::new();
    for w in &witnesses {
        let next = match steps.last() {
            None => Step { cost: w.cost, lambda: w.total, lambda_witness: w.id, beta: w.deficiency, beta_witness: w.id },
            Some(prev) => {
                let mut s = prev.clone();
                s.cost = w.cost;
                if w.total < s.lambda {
                    s.lambda = w.total;
                    s.lambda_witness = w.id;
                }
                if w.deficiency < s.beta {
                    s.beta = w.deficiency;
                    s.beta_witness = w.id;
                }
                s
            }
        };
        match steps.last_mut() {
            Some(last) if last.cost == next.cost => *last = next,
            _ => steps.push(next),
        }
    }
    let mut table = StructureTable { n, d: sample.d(), class: catalog.class, khat_d, rows: Vec::new(), witnesses, steps };
    let top = khat_d.bits.bits().ceil() as u64 + 8;
    table.rows = (0..=top)
        .map(|a| {
            let s = table.step_at(a as f64);
            StructureRow {
                alpha: a as f64,
                lambda: s.map(|s| s.lambda),
                lambda_witness: s.map(|s| s.lambda_witness),
                beta: s.map(|s| s.beta),
                beta_witness: s.map(|s| s.beta_witness),
            }
        })
        .collect();
    Ok(table)
}

/// K̂(D | n, d) with the two-part branch taken over the table's class.
fn unconditional(sample: &DataSample, two_part: f64, family: &CoderFamily) -> Result<SampleComplexity> {
    let mut best = SampleComplexity {
        bits: CodeLength::from_int(SampleMethod::Literal.header_bits() + (sample.d() * sample.n()) as u64),
        method: SampleMethod::Literal,
    };
    let cube = crate::coders::Cube { n: sample.n() };
    let bitmap = family.khat_len(sample, &cube)?.bits + CodeLength::from_int(SampleMethod::Bitmap.header_bits());
    if bitmap < best.bits {
        best = SampleComplexity { bits: bitmap, method: SampleMethod::Bitmap };
    }
    let tp = two_part + SampleMethod::TwoPart(0).header_bits() as f64;
    if tp < best.bits.bits() {
        best = SampleComplexity { bits: CodeLength::new(tp)?, method: SampleMethod::TwoPart(0) };
    }
    Ok(best)
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SufficientStatistic {
    pub alpha: f64,
    pub witness: usize,
    pub lambda: f64,
    pub deficiency: f64,
}

/// Least grid `α` with `λ̂(α) <= K̂(D) + slack`, with its `λ̂` witness.
pub fn minimal_sufficient_alpha(table: &StructureTable, slack: f64) -> Option<SufficientStatistic> {
    let bound = table.khat_d.bits.bits() + slack;
    table.rows.iter().find_map(|r| match (r.lambda, r.lambda_witness) {
        (Some(l), Some(w)) if l <= bound => Some(SufficientStatistic {
            alpha: r.alpha,
            witness: w,
            lambda: l,
            deficiency: table.witness(w).expect("witness recorded").deficiency,
        }),
        _ => None,
    })
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct NonConverse {
    pub alpha: f64,
    pub beta_witness: usize,
    pub beta_witness_total: f64,
    pub lambda: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct WitnessReport {
    pub slack: f64,
    /// Grid points where the `λ̂` witness's deficiency exceeds `β̂ + slack`.
    pub forward_violations: Vec<f64>,
    /// Largest `deficiency(λ̂ witness) - β̂` over the grid.
    pub max_forward_gap: f64,
    /// A near-optimal `β̂` witness whose two-part length is far above `λ̂`.
    pub non_converse: Option<NonConverse>,
}

impl WitnessReport {
    pub fn forward_holds(&self) -> bool {
        self.forward_violations.is_empty()
    }
}

pub fn witness_cross_check(table: &StructureTable) -> WitnessReport {
    let slack = WITNESS_SLACK;
    let mut forward_violations = Vec::new();
    let mut max_forward_gap = f64::NEG_INFINITY;
    let mut non_converse = None;
    for r in &table.rows {
        let (Some(lambda), Some(lw), Some(beta)) = (r.lambda, r.lambda_witness, r.beta) else {
            continue;
        };
        let gap = table.witness(lw).expect("witness recorded").deficiency - beta;
        max_forward_gap = max_forward_gap.max(gap);
        if gap > slack {
            forward_violations.push(r.alpha);
        }
        if non_converse.is_none() {
            non_converse = table
                .witnesses
                .iter()
                .filter(|w| w.cost <= r.alpha && w.deficiency <= beta + BETA_WITNESS_TOLERANCE)
                .find(|w| w.total > lambda + slack)
                .map(|w| NonConverse { alpha: r.alpha, beta_witness: w.id, beta_witness_total: w.total, lambda });
        }
    }
    WitnessReport { slack, forward_violations, max_forward_gap, non_converse }
}

/// Largest `|β̂(α) + K̂(D) - λ̂(α)|` over grid points where both are finite.
pub fn strip_deviation(table: &StructureTable) -> f64 {
    let k = table.khat_d.bits.bits();
    table.rows.iter().filter_map(|r| Some((r.beta? + k - r.lambda?).abs())).fold(0.0, f64::max)
}

/// A computable bijection of `{0,1}^n`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case", tag = "kind", content = "arg")]
pub enum Recoding {
    Xor(u64),
    /// `perm[i]` is the source position of output symbol `i`.
    Permutation(Vec<usize>),
}

impl Recoding {
    pub fn bit_reversal(n: usize) -> Self {
        Recoding::Permutation((0..n).rev().collect())
    }

    fn validate(&self, n: usize) -> Result<()> {
        match self {
            Recoding::Xor(mask) if n < 64 && mask >> n != 0 => domain(format!("xor mask wider than {n} bits")),
            Recoding::Permutation(p) => {
                let mut seen = vec![false; n];
                if p.len() != n || p.iter().any(|&i| i >= n || std::mem::replace(&mut seen[i], true)) {
                    return domain(format!("not a permutation of {n} positions"));
                }
                Ok(())
            }
            _ => Ok(()),
        }
    }

    pub fn apply(&self, w: &Word) -> Word {
        match self {
            Recoding::Xor(mask) => w.xor(*mask),
            Recoding::Permutation(p) => w.permute(p),
        }
    }

    /// Description length of the map: the mask, or one index per position,
    /// plus 8 bits of fixed overhead.
    pub fn width(&self, n: usize) -> f64 {
        match self {
            Recoding::Xor(_) => n as f64 + 8.0,
            Recoding::Permutation(_) => (n as u64 * ceil_log2(n.max(1) as u64) as u64) as f64 + 8.0,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct StripReport {
    pub recoding: Recoding,
    pub width: f64,
    /// Largest `λ̂_{f(D)}(α + w) - λ̂_D(α)` over the checked `α`.
    pub forward_violation: f64,
    /// Largest `λ̂_D(α + w) - λ̂_{f(D)}(α)`.
    pub backward_violation: f64,
    pub alphas_checked: usize,
}

impl StripReport {
    pub fn holds(&self) -> bool {
        self.forward_violation <= 0.0 && self.backward_violation <= 0.0
    }
}

fn shifted_violation(shifted: &StructureTable, base: &StructureTable, w: f64, alphas: &[f64]) -> f64 {
    alphas
        .iter()
        .filter_map(|&a| {
            let rhs = base.lambda_at(a)?;
            Some(shifted.lambda_at(a + w).map_or(f64::INFINITY, |lhs| lhs - rhs))
        })
        .fold(f64::NEG_INFINITY, f64::max)
}

/// Compares the structure functions of `D` and `f(D)`: each, shifted right
/// by the description length of `f`, must lie below the other.
pub fn recoding_strip_check(sample: &DataSample, f: &Recoding, catalog: &Catalog, family: &CoderFamily) -> Result<StripReport> {
    f.validate(sample.n())?;
    let image = sample.map(|w| f.apply(w))?;
    let t = build_structure_table(sample, catalog, family)?;
    let u = build_structure_table(&image, catalog, family)?;
    let width = f.width(sample.n());
    let top = t.rows.len().max(u.rows.len());
    let alphas: Vec<f64> = (0..top).map(|a| a as f64).collect();
    Ok(StripReport {
        recoding: f.clone(),
        width,
        forward_violation: shifted_violation(&u, &t, width, &alphas),
        backward_violation: shifted_violation(&t, &u, width, &alphas),
        alphas_checked: alphas.len(),
    })
}

/// Whether a machine's slice at `n` is one of the catalog's sets; used to
/// look up where a search result sits in a table.
pub fn catalog_position(catalog: &Catalog, a: &Dfa) -> Option<usize> {
    let mask = slice_mask(a, catalog.n);
    catalog.entries.iter().position(|e| e.mask == mask)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::coders::Coder;
    use crate::dfa::SliceIndex;

    fn slice_len(a: &Dfa, n: usize) -> u64 {
        SliceIndex::new(a, n).unwrap().len()
    }

    fn ctx() -> (NamedModels, CoderFamily) {
        (NamedModels::default(), CoderFamily::default())
    }

    #[test]
    fn header_budget_matches_family() {
        let max = Coder::ALL.iter().map(|c| c.header_bits()).max().unwrap();
        assert_eq!(max as f64, HEADER_BITS);
    }

    #[test]
    fn catalog_masks_match_slices() {
        let (named, _) = ctx();
        let c = Catalog::build(3, ModelClass::Dfa { max_states: 2 }, &named, Execution::Sequential).unwrap();
        for e in &c.entries {
            assert_eq!(e.mask.count_ones() as u64, slice_len(&e.model, 3));
            assert_eq!(e.cost, khat_model(&e.model, &named, 3).bits);
        }
        assert!(c.entries.windows(2).all(|w| w[0].cost <= w[1].cost));
        let masks: std::collections::HashSet<u64> = c.entries.iter().map(|e| e.mask).collect();
        assert_eq!(masks.len(), c.entries.len());
    }

    #[test]
    fn subset_catalog_covers_every_set() {
        let (named, _) = ctx();
        let c = Catalog::build(2, ModelClass::Subsets, &named, Execution::Sequential).unwrap();
        assert_eq!(c.entries.len(), 15);
        assert!(Catalog::build(5, ModelClass::Subsets, &named, Execution::Sequential).is_err());
    }

    #[test]
    fn table_shape() {
        let (named, family) = ctx();
        let c = Catalog::build(3, ModelClass::Dfa { max_states: 3 }, &named, Execution::default()).unwrap();
        let d = DataSample::from_strs(&["000", "011", "101", "110"]).unwrap();
        let t = build_structure_table(&d, &c, &family).unwrap();
        // below the cheapest machine nothing is feasible
        assert_eq!(t.rows[0].lambda, None);
        let lambdas: Vec<f64> = t.rows.iter().filter_map(|r| r.lambda).collect();
        assert!(lambdas.windows(2).all(|w| w[1] <= w[0]));
        let betas: Vec<f64> = t.rows.iter().filter_map(|r| r.beta).collect();
        assert!(betas.windows(2).all(|w| w[1] <= w[0]));
        for l in &lambdas {
            assert!(*l >= t.khat_d.bits.bits() - SLACK);
        }
        // even parity is named: 4 bits, and it is the whole slice
        let last = t.rows.last().unwrap();
        assert_eq!(last.lambda, Some(4.0));
        assert!(t.to_csv().lines().nth(1).unwrap().starts_with("0,inf,,inf,"));
        // K̂(D) = 1 + 4 + 1; the universal machine (3 + 7 bits) is within slack
        assert_eq!(t.khat_d.bits.bits(), 6.0);
        assert_eq!(minimal_sufficient_alpha(&t, SLACK).unwrap().alpha, 3.0);
        let s = minimal_sufficient_alpha(&t, 0.0).unwrap();
        assert_eq!(s.alpha, 4.0);
        assert!(s.deficiency <= 1.0);
        let first_feasible = t.rows.iter().find(|r| r.lambda.is_some()).unwrap().alpha;
        assert_eq!(minimal_sufficient_alpha(&t, f64::INFINITY).unwrap().alpha, first_feasible);
    }

    #[test]
    fn identity_recoding_has_no_violation() {
        let (named, family) = ctx();
        let c = Catalog::build(3, ModelClass::Dfa { max_states: 2 }, &named, Execution::default()).unwrap();
        let d = DataSample::from_strs(&["001", "100", "111"]).unwrap();
        let r = recoding_strip_check(&d, &Recoding::Xor(0), &c, &family).unwrap();
        assert!(r.holds());
        assert_eq!(r.width, 11.0);
        assert!(recoding_strip_check(&d, &Recoding::Permutation(vec![0, 0, 1]), &c, &family).is_err());
        assert!(recoding_strip_check(&d, &Recoding::Xor(8), &c, &family).is_err());
    }
}
