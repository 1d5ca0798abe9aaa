//! Self-delimiting binary encoding of a DFA.
//!
//! Field order: `s` and `q` in the self-delimiting integer code, then
//! `q - f`, the initial state and the `q * s` transitions (row-major over
//! states, then symbols), each in `ceil(log2 q)` bits, most significant bit
//! first. States are 0-based. Machines with `f = 0` are not encodable: the
//! `q - f` field has room for exactly `q` values, covering `1 <= f <= q`.

use super::Dfa;
use crate::bits::BitString;
use crate::codelen::{ceil_log2, log2, self_delim_len, CodeLength};
use crate::error::{domain, Result};

/// Largest alphabet accepted by the decoder.
const MAX_SYMBOLS: u64 = 1 << 16;

pub fn encode(a: &Dfa) -> Result<BitString> {
    if a.final_count() == 0 {
        return domain("machines without final states have no encoding");
    }
    let w = ceil_log2(a.q() as u64);
    let mut out = BitString::new();
    out.push_self_delim(a.s() as u64);
    out.push_self_delim(a.q() as u64);
    out.push_uint((a.q() - a.final_count()) as u64, w);
    out.push_uint(a.initial() as u64, w);
    for &t in a.transitions() {
        out.push_uint(t as u64, w);
    }
    Ok(out)
}

pub fn decode(bits: &BitString) -> Result<Dfa> {
    let mut r = bits.reader();
    let s = r.read_self_delim()?;
    if s > MAX_SYMBOLS {
        return r.error(format!("alphabet size {s} exceeds {MAX_SYMBOLS}"));
    }
    let q = r.read_self_delim()?;
    let w = ceil_log2(q);
    if w > 0 && (q.saturating_mul(s).saturating_add(2)).saturating_mul(w as u64) > r.remaining() as u64 {
        return r.error(format!("{q} states need more bits than remain"));
    }
    let read_state = |r: &mut crate::bits::BitReader<'_>, what: &str| -> Result<usize> {
        let start = r.position();
        let v = r.read_uint(w)?;
        if v >= q {
            Err(crate::error::Error::Decode { position: start, message: format!("{what} {v} out of range for {q} states") })
        } else {
            Ok(v as usize)
        }
    };
    let non_final = read_state(&mut r, "non-final count")?;
    let initial = read_state(&mut r, "initial state")?;
    let mut delta = Vec::with_capacity((q * s) as usize);
    for _ in 0..q * s {
        delta.push(read_state(&mut r, "transition target")?);
    }
    r.finish()?;
    Dfa::new(q as usize, s as usize, initial, q as usize - non_final, delta)
}

/// Closed-form length of `encode`: `sd(s) + sd(q) + (q s + 2) ceil(log2 q)`.
pub fn encoded_len(q: usize, s: usize) -> Result<u64> {
    if q == 0 || s == 0 {
        return domain("encoded_len: q and s must be positive");
    }
    Ok(self_delim_len(s as u64)? + self_delim_len(q as u64)? + (q as u64 * s as u64 + 2) * ceil_log2(q as u64) as u64)
}

/// Model cost `m(q, s) = (q s + 4) log2 q + 2 log2 s`.
pub fn model_cost(q: usize, s: usize) -> Result<CodeLength> {
    if q == 0 || s == 0 {
        return domain("model_cost: q and s must be positive");
    }
    CodeLength::new((q as f64 * s as f64 + 4.0) * log2(q as u64) + 2.0 * log2(s as u64))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::error::Error;

    #[test]
    fn parity_encoding() {
        let bits = encode(&Dfa::parity(true)).unwrap();
        assert_eq!(bits.len(), 10);
        assert_eq!(encoded_len(2, 2).unwrap(), 10);
        // s=2 "10", q=2 "10", q-f=1, q0=1, transitions 0 1 1 0
        assert_eq!(bits.to_string(), "1010110110");
        assert_eq!(decode(&bits).unwrap(), Dfa::parity(true));
    }

    #[test]
    fn universal_encoding() {
        let bits = encode(&Dfa::universal(2)).unwrap();
        assert_eq!(bits.len(), 3);
        assert_eq!(encoded_len(1, 2).unwrap(), 3);
        assert_eq!(decode(&bits).unwrap(), Dfa::universal(2));
    }

    #[test]
    fn empty_machine_is_not_encodable() {
        assert!(encode(&Dfa::empty(2)).is_err());
    }

    #[test]
    fn malformed_inputs() {
        let bad: BitString = "10101101101".parse().unwrap();
        assert!(matches!(decode(&bad), Err(Error::Decode { position: 10, .. })));
        let short: BitString = "101011".parse().unwrap();
        assert!(matches!(decode(&short), Err(Error::Decode { .. })));
        // q = 3, initial state field = 3 is out of range
        let mut b = BitString::new();
        b.push_self_delim(2);
        b.push_self_delim(3);
        b.push_uint(0, 2);
        b.push_uint(3, 2);
        b.push_uint(0, 12);
        assert!(matches!(decode(&b), Err(Error::Decode { position: 9, .. })));
    }

    #[test]
    fn model_costs() {
        assert_eq!(model_cost(2, 2).unwrap().bits(), 10.0);
        assert_eq!(model_cost(1, 2).unwrap().bits(), 2.0);
        assert_eq!(model_cost(4, 2).unwrap().bits(), 26.0);
        assert_eq!(model_cost(1, 1).unwrap().bits(), 0.0);
    }
}
