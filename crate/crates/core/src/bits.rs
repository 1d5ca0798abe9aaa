//! Bit strings, MSB-first fixed-width fields, and the self-delimiting
//! integer code whose length is `self_delim_len(k)`.

use std::fmt;
use std::str::FromStr;

use num_bigint::BigUint;
use serde::{Deserialize, Serialize};

use crate::codelen::ceil_log2;
use crate::error::{Error, Result};

#[derive(Clone, Debug, Default, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct BitString(Vec<bool>);

impl BitString {
    pub fn new() -> Self {
        Self(Vec::new())
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn as_slice(&self) -> &[bool] {
        &self.0
    }

    pub fn push(&mut self, bit: bool) {
        self.0.push(bit);
    }

    pub fn extend(&mut self, other: &BitString) {
        self.0.extend_from_slice(&other.0);
    }

    /// Appends the low `width` bits of `value`, most significant first.
    pub fn push_uint(&mut self, value: u64, width: u32) {
        debug_assert!(width == 64 || value >> width == 0, "value {value} does not fit in {width} bits");
        for i in (0..width).rev() {
            self.0.push((value >> i) & 1 == 1);
        }
    }

    /// Appends `k >= 1` in the self-delimiting code.
    ///
    /// Layout: `0` for 1, `10` for 2, otherwise `11`, then `b - 1` in unary
    /// (ones closed by a zero), then `a - 1` in `b` bits, then
    /// `k - 1 - 2^(a-1)` in `a - 1` bits, where `a = ceil(log2 k)` and
    /// `b = ceil(log2 a)`. The total is `a + 2b + 1` bits.
    pub fn push_self_delim(&mut self, k: u64) {
        assert!(k >= 1, "self-delimiting code is defined for k >= 1");
        match k {
            1 => self.push(false),
            2 => {
                self.push(true);
                self.push(false);
            }
            _ => {
                let a = ceil_log2(k);
                let b = ceil_log2(a as u64);
                self.push(true);
                self.push(true);
                for _ in 0..b - 1 {
                    self.push(true);
                }
                self.push(false);
                self.push_uint(a as u64 - 1, b);
                self.push_uint(k - 1 - (1u64 << (a - 1)), a - 1);
            }
        }
    }

    /// Appends `value` in exactly `width` bits, most significant first.
    pub fn push_big(&mut self, value: &BigUint, width: u64) {
        assert!(value.bits() <= width, "{value} does not fit in {width} bits");
        for i in (0..width).rev() {
            self.0.push(value.bit(i));
        }
    }

    pub fn reader(&self) -> BitReader<'_> {
        BitReader { bits: &self.0, pos: 0 }
    }
}

impl From<Vec<bool>> for BitString {
    fn from(v: Vec<bool>) -> Self {
        Self(v)
    }
}

impl fmt::Display for BitString {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for &b in &self.0 {
            f.write_str(if b { "1" } else { "0" })?;
        }
        Ok(())
    }
}

impl FromStr for BitString {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        s.trim()
            .chars()
            .enumerate()
            .map(|(i, c)| match c {
                '0' => Ok(false),
                '1' => Ok(true),
                other => Err(Error::Decode { position: i, message: format!("unexpected character {other:?}") }),
            })
            .collect::<Result<Vec<_>>>()
            .map(BitString)
    }
}

pub struct BitReader<'a> {
    bits: &'a [bool],
    pos: usize,
}

impl BitReader<'_> {
    pub fn position(&self) -> usize {
        self.pos
    }

    pub fn remaining(&self) -> usize {
        self.bits.len() - self.pos
    }

    pub fn error<T>(&self, message: impl Into<String>) -> Result<T> {
        Err(Error::Decode { position: self.pos, message: message.into() })
    }

    pub fn read_bit(&mut self) -> Result<bool> {
        match self.bits.get(self.pos) {
            Some(&b) => {
                self.pos += 1;
                Ok(b)
            }
            None => self.error("unexpected end of input"),
        }
    }

    pub fn read_uint(&mut self, width: u32) -> Result<u64> {
        if width > 64 {
            return self.error(format!("field width {width} exceeds 64"));
        }
        if self.remaining() < width as usize {
            return self.error(format!("need {width} bits, {} left", self.remaining()));
        }
        let mut v = 0u64;
        for _ in 0..width {
            v = (v << 1) | self.read_bit()? as u64;
        }
        Ok(v)
    }

    pub fn read_big(&mut self, width: u64) -> Result<BigUint> {
        if (self.remaining() as u64) < width {
            return self.error(format!("need {width} bits, {} left", self.remaining()));
        }
        let mut v = BigUint::default();
        for i in (0..width).rev() {
            if self.read_bit()? {
                v.set_bit(i, true);
            }
        }
        Ok(v)
    }

    pub fn read_self_delim(&mut self) -> Result<u64> {
        if !self.read_bit()? {
            return Ok(1);
        }
        if !self.read_bit()? {
            return Ok(2);
        }
        let mut b = 1u32;
        while self.read_bit()? {
            b += 1;
            if b > 7 {
                return self.error("self-delimiting length prefix too long");
            }
        }
        let a = self.read_uint(b)? + 1;
        if !(2..=64).contains(&a) || ceil_log2(a) != b {
            return self.error(format!("non-canonical length field {a} for prefix {b}"));
        }
        let low = self.read_uint(a as u32 - 1)?;
        match (1u64 << (a - 1)).checked_add(1).and_then(|x| x.checked_add(low)) {
            Some(k) => Ok(k),
            None => self.error("self-delimiting value overflows u64"),
        }
    }

    pub fn finish(&self) -> Result<()> {
        if self.remaining() == 0 {
            Ok(())
        } else {
            self.error(format!("{} trailing bits", self.remaining()))
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::codelen::self_delim_len;
    use proptest::prelude::*;

    #[test]
    fn small_codewords() {
        let enc = |k| {
            let mut b = BitString::new();
            b.push_self_delim(k);
            b.to_string()
        };
        assert_eq!(enc(1), "0");
        assert_eq!(enc(2), "10");
        assert_eq!(enc(3), "11010");
        assert_eq!(enc(4), "11011");
        assert_eq!(enc(16), "111011111");
    }

    #[test]
    fn truncated_input_reports_position() {
        let b: BitString = "1101".parse().unwrap();
        let err = b.reader().read_self_delim().unwrap_err();
        assert!(matches!(err, Error::Decode { position: 4, .. }));
    }

    proptest! {
        #[test]
        fn self_delim_round_trip(ks in prop::collection::vec(1u64..u64::MAX, 1..8)) {
            let mut b = BitString::new();
            for &k in &ks {
                b.push_self_delim(k);
            }
            let expected: u64 = ks.iter().map(|&k| self_delim_len(k).unwrap()).sum();
            prop_assert_eq!(b.len() as u64, expected);
            let mut r = b.reader();
            for &k in &ks {
                prop_assert_eq!(r.read_self_delim().unwrap(), k);
            }
            prop_assert!(r.finish().is_ok());
        }
    }
}
