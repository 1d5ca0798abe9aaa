use mdl_dfa::experiments::{run_lemma1_counting, run_oscillation, run_parity, ExperimentReport};

fn json(r: &ExperimentReport) -> String {
    serde_json::to_string(r).unwrap()
}

#[test]
fn reports_are_reproducible() {
    assert_eq!(json(&run_parity(12, 3).unwrap()), json(&run_parity(12, 3).unwrap()));
    assert_eq!(json(&run_oscillation(180, 9).unwrap()), json(&run_oscillation(180, 9).unwrap()));
    assert_eq!(json(&run_lemma1_counting(3, 8, &[1, 2, 3]).unwrap()), json(&run_lemma1_counting(3, 8, &[1, 2, 3]).unwrap()));
}

#[test]
fn seeds_change_only_the_random_half() {
    let a = run_parity(10, 1).unwrap();
    let b = run_parity(10, 2).unwrap();
    for label in ["mdl(D0, A1)", "mdl(D0, A2)", "deficiency(D0 | A1)", "mdl(D0, A0)"] {
        assert_eq!(a.get(label), b.get(label), "{label}");
    }
    assert_ne!(a.get("mdl(D1, A0)"), b.get("mdl(D1, A0)"));
}

#[test]
fn oscillation_arithmetic_scales_with_n() {
    for n in [90, 180, 270, 900] {
        let r = run_oscillation(n, 0).unwrap();
        assert!(r.passed(), "{}", r.to_table());
        let (a, b) = (n / 3, 2 * n / 3);
        let nf = n as f64;
        assert_eq!(r.get(&format!("deficiency[M_{a}]")), Some(nf / 9.0));
        assert_eq!(r.get(&format!("deficiency[M_{b}]")), Some(2.0 * nf / 9.0));
        assert_eq!(r.get(&format!("shortest[M_{a}]")), Some(7.0 * nf / 9.0));
        assert_eq!(r.get(&format!("shortest[M_{b}]")), Some(8.0 * nf / 9.0));
        // the first switch clears the margin once 2n/9 >= 10 log2 n
        let margin = 10.0 * nf.log2();
        assert_eq!(r.get(&format!("safe switch M_0->M_{a}")), Some(if 2.0 * nf / 9.0 >= margin { 1.0 } else { 0.0 }));
    }
}

#[test]
fn parity_rejects_out_of_range_lengths() {
    assert!(matches!(run_parity(7, 0), Err(mdl_dfa::Error::Capacity(_))));
    assert!(matches!(run_oscillation(95, 0), Err(mdl_dfa::Error::Domain(_))));
}
