//! Code-length primitives: log-binomials, binary entropy, self-delimiting
//! integer lengths and the data-to-model cost used for DFA models.

use std::cmp::Ordering;
use std::fmt;
use std::iter::Sum;
use std::ops::Add;

use num_bigint::BigUint;
use num_traits::{One, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{domain, Error, Result};

/// Arbitrary-precision nonnegative count.
pub type BigCount = BigUint;

/// Above this slice size binomials are summed in log space instead of
/// being materialised exactly.
pub const EXACT_BINOMIAL_LIMIT: u64 = 10_000;

/// A nonnegative, finite number of bits.
#[derive(Clone, Copy, Debug, Default, Serialize, Deserialize)]
#[serde(transparent)]
pub struct CodeLength(f64);

impl CodeLength {
    pub const ZERO: CodeLength = CodeLength(0.0);

    pub fn new(bits: f64) -> Result<Self> {
        if bits.is_finite() && bits >= 0.0 {
            Ok(Self(bits))
        } else {
            domain(format!("code length must be finite and nonnegative, got {bits}"))
        }
    }

    pub fn from_int(bits: u64) -> Self {
        Self(bits as f64)
    }

    pub fn bits(self) -> f64 {
        self.0
    }

    pub fn ceil(self) -> Self {
        Self(self.0.ceil())
    }
}

impl PartialEq for CodeLength {
    fn eq(&self, other: &Self) -> bool {
        self.0.total_cmp(&other.0) == Ordering::Equal
    }
}

impl Eq for CodeLength {}

impl PartialOrd for CodeLength {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for CodeLength {
    fn cmp(&self, other: &Self) -> Ordering {
        self.0.total_cmp(&other.0)
    }
}

impl Add for CodeLength {
    type Output = CodeLength;
    fn add(self, rhs: Self) -> Self {
        CodeLength(self.0 + rhs.0)
    }
}

impl Sum for CodeLength {
    fn sum<I: Iterator<Item = Self>>(iter: I) -> Self {
        iter.fold(CodeLength::ZERO, Add::add)
    }
}

impl fmt::Display for CodeLength {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

/// `ceil(log2 k)` with `ceil(log2 1) = 0`.
pub fn ceil_log2(k: u64) -> u32 {
    assert!(k >= 1, "ceil_log2 of zero");
    if k == 1 {
        0
    } else {
        64 - (k - 1).leading_zeros()
    }
}

/// `log2 x` with `log2 1 = 0`, as a float.
pub fn log2(x: u64) -> f64 {
    (x as f64).log2()
}

/// `log2` of an arbitrary-precision positive integer, accurate to a few ulps.
pub fn log2_big(x: &BigUint) -> f64 {
    assert!(!x.is_zero(), "log2 of zero");
    let bits = x.bits();
    if bits <= 64 {
        return x.to_u64().expect("fits").ilog2() as f64 + frac_log2(x.to_u64().expect("fits"));
    }
    let shift = bits - 64;
    let top = (x >> shift).to_u64().expect("64 bits");
    shift as f64 + (top as f64).log2()
}

fn frac_log2(x: u64) -> f64 {
    // log2(x) - floor(log2(x)), computed on the mantissa so powers of two are exact.
    let e = x.ilog2();
    let m = x as f64 / (1u64 << e) as f64;
    m.log2()
}

/// `ceil(log2 x)` for a positive big integer, exactly.
pub fn ceil_log2_big(x: &BigUint) -> u64 {
    assert!(!x.is_zero(), "log2 of zero");
    let bits = x.bits();
    if x.trailing_zeros() == Some(bits - 1) {
        bits - 1
    } else {
        bits
    }
}

/// Exact binomial coefficient.
pub fn binomial(l: u64, d: u64) -> BigCount {
    if d > l {
        return BigUint::zero();
    }
    let d = d.min(l - d);
    let mut acc = BigUint::one();
    for i in 1..=d {
        acc *= l - d + i;
        acc /= i;
    }
    acc
}

/// `log2 C(l, d)` in bits.
///
/// Exact through a big-integer binomial while `l <= 10^4`, otherwise a
/// compensated sum of `log2(1 + (l - d)/i)` terms.
pub fn log2_binomial(l: u64, d: u64) -> Result<CodeLength> {
    if d > l {
        return domain(format!("log2_binomial: d = {d} exceeds l = {l}"));
    }
    let k = d.min(l - d);
    if k == 0 {
        return Ok(CodeLength::ZERO);
    }
    if l <= EXACT_BINOMIAL_LIMIT {
        let c = binomial(l, k);
        let floor = c.bits() - 1;
        let is_pow2 = c.trailing_zeros() == Some(floor);
        let mut v = log2_big(&c);
        if is_pow2 {
            v = floor as f64;
        } else if v <= floor as f64 {
            v = f64::from_bits((floor as f64).to_bits() + 1);
        } else if v >= (floor + 1) as f64 {
            v = f64::from_bits(((floor + 1) as f64).to_bits() - 1);
        }
        return CodeLength::new(v);
    }
    CodeLength::new(log2_binomial_sum(l, k))
}

fn log2_binomial_sum(l: u64, k: u64) -> f64 {
    let rest = (l - k) as f64;
    let mut sum = 0.0f64;
    let mut comp = 0.0f64;
    for i in 1..=k {
        let term = (rest / i as f64).ln_1p() / std::f64::consts::LN_2;
        let y = term - comp;
        let t = sum + y;
        comp = (t - sum) - y;
        sum = t;
    }
    sum
}

/// `log2 C(l, d)` for slice sizes beyond `u64`, such as `l = 2^n` with large `n`.
pub fn log2_binomial_big(l: &BigUint, d: u64) -> Result<CodeLength> {
    if let Some(small) = l.to_u64() {
        return log2_binomial(small, d);
    }
    // l > u64::MAX >= d, so C(l, d) is never the reflected case.
    if d > 1 << 24 {
        return Err(Error::Capacity(format!("log2_binomial_big: d = {d} too large for term-wise summation")));
    }
    let log_l = log2_big(l);
    let mut sum = 0.0f64;
    let mut comp = 0.0f64;
    for i in 1..=d {
        // log2((l - i + 1) / i) = log2 l + log2(1 - (i-1)/l) - log2 i
        let ratio = ((i - 1) as f64).log2() - log_l;
        let shrink = if i == 1 { 0.0 } else { (-(ratio.exp2())).ln_1p() / std::f64::consts::LN_2 };
        let term = log_l + shrink - (i as f64).log2();
        let y = term - comp;
        let t = sum + y;
        comp = (t - sum) - y;
        sum = t;
    }
    CodeLength::new(sum)
}

/// `log2 C(2^n, d)`.
pub fn log2_binomial_pow2(n: u32, d: u64) -> Result<CodeLength> {
    log2_binomial_big(&(BigUint::one() << n), d)
}

/// Binary Shannon entropy `H(p)` for `0 < p < 1`.
pub fn entropy(p: f64) -> Result<CodeLength> {
    if !(p > 0.0 && p < 1.0) {
        return domain(format!("entropy: p = {p} outside (0, 1)"));
    }
    let q = 1.0 - p;
    CodeLength::new(-p * p.log2() - q * q.log2())
}

/// Data-to-model cost of `d` words drawn from an `l`-word slice of length-`n` words.
///
/// `1 + 2 log2 n` at `d = 1` or `d = l`, `2 log2 n + l H(d/l)` for
/// `1 < d <= l/2`, and the cost of `l - d` above `l/2`.
pub fn data_to_model_cost(l: u64, d: u64, n: u64) -> Result<CodeLength> {
    if n == 0 {
        return domain("data_to_model_cost: n must be positive");
    }
    if d == 0 || d > l {
        return domain(format!("data_to_model_cost: need 1 <= d <= l, got d = {d}, l = {l}"));
    }
    let log_n = log2(n);
    if d == 1 || d == l {
        return CodeLength::new(1.0 + 2.0 * log_n);
    }
    if 2 * d > l {
        return data_to_model_cost(l, l - d, n);
    }
    let h = entropy(d as f64 / l as f64)?.bits();
    CodeLength::new(2.0 * log_n + l as f64 * h)
}

/// Length of the self-delimiting code of `k`: `ceil(log2 k) + 2 ceil(log2 log2 k) + 1`,
/// with both ceilings taken as 0 where the logarithm vanishes or is undefined.
pub fn self_delim_len(k: u64) -> Result<u64> {
    if k == 0 {
        return domain("self_delim_len: k must be positive");
    }
    let a = ceil_log2(k);
    let b = if a == 0 { 0 } else { ceil_log2(a as u64) };
    Ok(a as u64 + 2 * b as u64 + 1)
}
