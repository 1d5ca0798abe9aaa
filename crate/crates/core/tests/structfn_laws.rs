use mdl_dfa::coders::{CoderFamily, MaskSet, NamedModels};
use mdl_dfa::dfa::DataSample;
use mdl_dfa::exec::Execution;
use mdl_dfa::structfn::{
    build_structure_table, strip_deviation, witness_cross_check, Catalog, ModelClass, StructureTable, STRIP_SLACK, WITNESS_SLACK,
};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn every_sample(n: usize) -> impl Iterator<Item = DataSample> {
    (1u64..1 << (1 << n)).map(move |mask| DataSample::from_indices(n, (0..1u64 << n).filter(|i| mask >> i & 1 == 1)).unwrap())
}

fn nonincreasing(t: &StructureTable) -> bool {
    let lambda: Vec<f64> = t.rows.iter().map(|r| r.lambda.unwrap_or(f64::INFINITY)).collect();
    let beta: Vec<f64> = t.rows.iter().map(|r| r.beta.unwrap_or(f64::INFINITY)).collect();
    lambda.windows(2).all(|w| w[1] <= w[0]) && beta.windows(2).all(|w| w[1] <= w[0])
}

#[test]
fn exhaustive_small_tables() {
    let named = NamedModels::default();
    let family = CoderFamily::default();
    for n in 1..=3 {
        for class in [ModelClass::Dfa { max_states: 3 }, ModelClass::Subsets] {
            let catalog = Catalog::build(n, class, &named, Execution::default()).unwrap();
            for sample in every_sample(n) {
                let t = build_structure_table(&sample, &catalog, &family).unwrap();
                assert!(nonincreasing(&t), "n={n} {class:?} {sample:?}");
                let dev = strip_deviation(&t);
                assert!(dev <= STRIP_SLACK, "n={n} {class:?}: strip deviation {dev} for {sample:?}");
                assert!(witness_cross_check(&t).forward_holds(), "n={n} {class:?}: forward check fails for {sample:?}");
            }
        }
    }
}

/// Once the sample's own set is affordable, the best deficiency is within
/// the subset rounding of zero.
#[test]
fn deficiency_floor_once_the_sample_itself_is_a_model() {
    let catalog = Catalog::build(3, ModelClass::Subsets, &NamedModels::default(), Execution::default()).unwrap();
    let family = CoderFamily::default();
    for sample in every_sample(3) {
        let mask = MaskSet::of_sample(&sample).unwrap().mask();
        let own = catalog.entries.iter().find(|e| e.mask == mask).unwrap().cost.bits();
        let t = build_structure_table(&sample, &catalog, &family).unwrap();
        for r in t.rows.iter().filter(|r| r.alpha >= own) {
            assert!(r.beta.unwrap() <= 1.0, "alpha {}: beta {:?}", r.alpha, r.beta);
        }
    }
}

#[test]
fn sampled_length_four_tables() {
    let catalog = Catalog::build(4, ModelClass::Dfa { max_states: 3 }, &NamedModels::default(), Execution::default()).unwrap();
    let family = CoderFamily::default();
    let mut rng = ChaCha8Rng::seed_from_u64(4);
    let mut non_converse = None;
    let mut strip_violations = 0;
    for _ in 0..60 {
        let mask: u64 = rng.gen_range(1..1 << 16);
        let sample = DataSample::from_indices(4, (0..16).filter(|i| mask >> i & 1 == 1)).unwrap();
        let t = build_structure_table(&sample, &catalog, &family).unwrap();
        assert!(nonincreasing(&t));
        // the strip surrogate is reported at this length, not asserted
        if strip_deviation(&t) > STRIP_SLACK {
            strip_violations += 1;
        }
        let report = witness_cross_check(&t);
        if non_converse.is_none() {
            non_converse = report.non_converse.map(|w| (mask, w));
        }
    }
    eprintln!("strip surrogate exceeded on {strip_violations} of 60 sampled tables");
    let (mask, w) = non_converse.expect("some sampled sample has a low-deficiency model with a long two-part code");
    assert!(w.beta_witness_total > w.lambda + WITNESS_SLACK, "sample {mask:#06x}: {w:?}");

    // a fixed instance: {0001, 0010, 0100}
    let sample = DataSample::from_strs(&["0001", "0010", "0100"]).unwrap();
    let t = build_structure_table(&sample, &catalog, &family).unwrap();
    let w = witness_cross_check(&t).non_converse.expect("non-converse witness");
    assert_eq!((w.alpha, w.lambda), (19.0, 13.0));
    // a three-state machine, 3 + 10 log2 3 program bits plus a 9-bit index
    assert!((w.beta_witness_total - (12.0 + 10.0 * 3f64.log2())).abs() < 1e-9, "{w:?}");
}

#[test]
fn tables_do_not_depend_on_execution_strategy() {
    let named = NamedModels::default();
    let class = ModelClass::Dfa { max_states: 3 };
    let seq = Catalog::build(3, class, &named, Execution::Sequential).unwrap();
    let par = Catalog::build(3, class, &named, Execution::Parallel).unwrap();
    assert_eq!(seq, par);
}
