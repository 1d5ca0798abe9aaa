//! Three nested models for one string `x = u v w` whose complexities are
//! stipulated rather than measured.
//!
//! `M_i = {x[..i]} {0,1}^(n-i)`. Under a compressor that spends 0.9 bits per
//! prefix bit, `|M_i|`'s two-part length is `n - i/10`; under shortest coding
//! it is `K(x[..i]) + n - i`.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use super::{ExperimentReport, Relation};
use crate::codelen::{log2_binomial_pow2, CodeLength};
use crate::coders::ComplexityOracle;
use crate::error::{domain, Result};
use crate::search::{safe_switch_margin, safe_switch_totals};

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct OscillationScenario {
    pub n: usize,
    pub x: String,
    pub oracle: ComplexityOracle,
    /// Prefix lengths `i` of the models, in switch order.
    pub prefixes: [usize; 3],
    pub compressor_rate: f64,
}

fn random_bits(rng: &mut ChaCha8Rng, len: usize) -> String {
    (0..len).map(|_| if rng.gen::<bool>() { '1' } else { '0' }).collect()
}

impl OscillationScenario {
    pub fn new(n: usize, seed: u64) -> Result<Self> {
        if !n.is_multiple_of(30) || n < 90 {
            return domain(format!("oscillation needs n a multiple of 30 and at least 90, got {n}"));
        }
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let u = random_bits(&mut rng, n / 9).repeat(3);
        let v = random_bits(&mut rng, n / 3);
        let w = random_bits(&mut rng, n / 9).repeat(3);
        let int = |k: usize| CodeLength::from_int(k as u64);
        let oracle = ComplexityOracle::new([
            ("u".to_string(), int(n / 9)),
            ("v".to_string(), int(4 * n / 9)),
            ("w".to_string(), int(n / 9)),
            ("x".to_string(), int(2 * n / 3)),
        ]);
        Ok(Self { n, x: format!("{u}{v}{w}"), oracle, prefixes: [0, n / 3, 2 * n / 3], compressor_rate: 0.9 })
    }
}

pub fn run_oscillation(n: usize, seed: u64) -> Result<ExperimentReport> {
    let sc = OscillationScenario::new(n, seed)?;
    let k = |label: &str| sc.oracle.get(label).map(|c| c.bits());
    let (ku, kv, kw, kx) = (k("u")?, k("v")?, k("w")?, k("x")?);
    let nf = n as f64;
    let mut r = ExperimentReport::new("oscillation", serde_json::json!({ "n": n, "seed": seed, "x": sc.x, "oracle": sc.oracle }));

    // complexity of the prefix the model fixes, and of x given the model
    let fixed = [0.0, ku, ku + kv];
    let rest = [kx, kv + kw, kw];
    let mut mdl = [0.0; 3];
    let mut deficiency = [0.0; 3];
    let mut shortest = [0.0; 3];
    for (j, &i) in sc.prefixes.iter().enumerate() {
        // i is a multiple of 10, so 0.1 i is exact in integers
        mdl[j] = r.quantity(format!("mdl[M_{i}]"), (n - i / 10) as f64, "0.9 i + (n - i)");
        deficiency[j] = r.quantity(format!("deficiency[M_{i}]"), (n - i) as f64 - rest[j], "log|M_i| - K(x | M_i)");
        shortest[j] = r.quantity(format!("shortest[M_{i}]"), fixed[j] + (n - i) as f64, "K(x[..i]) + log|M_i|");
    }
    for j in 0..2 {
        let (i, i2) = (sc.prefixes[j], sc.prefixes[j + 1]);
        r.check(format!("mdl step M_{i}->M_{i2} equals 0.1 (i' - i)"), mdl[j] - mdl[j + 1], Relation::Equal, ((i2 - i) / 10) as f64);
        r.check(format!("plain rule accepts M_{i}->M_{i2}"), mdl[j + 1], Relation::AtMost, mdl[j] - 1.0);
    }
    let (a, b, c) = (sc.prefixes[0], sc.prefixes[1], sc.prefixes[2]);
    r.check(format!("M_{a}->M_{b} lowers deficiency by 2n/9"), deficiency[0] - deficiency[1], Relation::Equal, 2.0 * nf / 9.0);
    r.check(format!("M_{b}->M_{c} raises deficiency by n/9"), deficiency[2] - deficiency[1], Relation::Equal, nf / 9.0);
    r.check(format!("shortest coding improves M_{a}->M_{b} by 2n/9"), shortest[0] - shortest[1], Relation::Equal, 2.0 * nf / 9.0);
    r.check(format!("shortest coding rejects M_{b}->M_{c}"), shortest[2], Relation::AtLeast, shortest[1] + 1.0);

    let margin = r.quantity("switch margin", safe_switch_margin(n, 1)?, "10 log2 log2 C(2^n, 1)");
    let log_c = log2_binomial_pow2(n as u32, 1)?.bits();
    debug_assert_eq!(log_c, nf);
    // slack of a shortest program over its shortest description is zero
    let first = safe_switch_totals(shortest[0], 0.0, shortest[1], margin);
    let second = safe_switch_totals(shortest[1], 0.0, shortest[2], margin);
    r.quantity(format!("safe switch M_{a}->M_{b}"), first as u8 as f64, "1 if the switch condition holds");
    r.quantity(format!("safe switch M_{b}->M_{c}"), second as u8 as f64, "1 if the switch condition holds");
    r.check(format!("safe rule rejects M_{b}->M_{c}"), second as u8 as f64, Relation::Equal, 0.0);

    let v_len = (n / 3) as f64;
    if kv > v_len + 2.0 * v_len.log2() {
        r.flags.push(format!(
            "stipulated K(v) = {kv} exceeds |v| + 2 log2 |v| = {:.1}; no string of length {} has this complexity, so the deficiency ordering relies on the stipulation",
            v_len + 2.0 * v_len.log2(),
            n / 3
        ));
    }
    r.flags.push(format!(
        "safe switch M_{a}->M_{b} {} at n = {n}: needs 2n/9 = {:.1} >= margin {margin:.1}",
        if first { "holds" } else { "fails" },
        2.0 * nf / 9.0
    ));
    Ok(r)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn n90_values() {
        let r = run_oscillation(90, 7).unwrap();
        let get = |l: &str| r.get(l).unwrap();
        assert_eq!([get("mdl[M_0]"), get("mdl[M_30]"), get("mdl[M_60]")], [90.0, 87.0, 84.0]);
        assert_eq!([get("deficiency[M_0]"), get("deficiency[M_30]"), get("deficiency[M_60]")], [30.0, 10.0, 20.0]);
        assert_eq!([get("shortest[M_0]"), get("shortest[M_30]"), get("shortest[M_60]")], [90.0, 70.0, 80.0]);
        assert!((get("switch margin") - 64.918).abs() < 1e-3);
        assert_eq!(get("safe switch M_0->M_30"), 0.0);
        assert!(r.passed(), "{}", r.to_table());
        assert_eq!(r.flags.len(), 2);
    }

    #[test]
    fn large_n_passes_the_margin() {
        let r = run_oscillation(2700, 7).unwrap();
        assert_eq!(r.get("safe switch M_0->M_900"), Some(1.0));
        assert!(r.passed());
    }

    #[test]
    fn construction() {
        let sc = OscillationScenario::new(90, 1).unwrap();
        assert_eq!(sc.x.len(), 90);
        assert_eq!(&sc.x[0..10], &sc.x[10..20]);
        assert_eq!(&sc.x[60..70], &sc.x[80..90]);
        assert!(OscillationScenario::new(100, 1).is_err());
        assert!(OscillationScenario::new(60, 1).is_err());
    }
}
