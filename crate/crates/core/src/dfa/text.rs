//! Plain-text formats.
//!
//! DFA files: a header line `q s q0 f`, then `q * s` lines
//! `state symbol next` in lexicographic order of `(state, symbol)`.
//! Data files: a header line `n d`, then `d` distinct words of length `n`
//! in sorted order. Both accept blank lines and `#` comments.

use std::fmt::Write;

use super::{DataSample, Dfa, Word};
use crate::error::{Error, Result};

fn content_lines(text: &str) -> impl Iterator<Item = (usize, &str)> {
    text.lines().enumerate().map(|(i, l)| (i + 1, l.split('#').next().unwrap_or("").trim())).filter(|(_, l)| !l.is_empty())
}

fn parse_err<T>(line: usize, message: impl Into<String>) -> Result<T> {
    Err(Error::Parse { line, message: message.into() })
}

fn numbers<const N: usize>(line: usize, text: &str) -> Result<[usize; N]> {
    let fields: Vec<&str> = text.split_whitespace().collect();
    if fields.len() != N {
        return parse_err(line, format!("expected {N} fields, found {}", fields.len()));
    }
    let mut out = [0usize; N];
    for (slot, f) in out.iter_mut().zip(fields) {
        *slot = match f.parse() {
            Ok(v) => v,
            Err(_) => return parse_err(line, format!("not a nonnegative integer: {f:?}")),
        };
    }
    Ok(out)
}

pub fn parse_dfa(text: &str) -> Result<Dfa> {
    let mut lines = content_lines(text);
    let Some((hl, header)) = lines.next() else {
        return parse_err(0, "empty DFA file");
    };
    let [q, s, q0, f] = numbers::<4>(hl, header)?;
    let mut delta = Vec::with_capacity(q.saturating_mul(s));
    for state in 0..q {
        for sym in 0..s {
            let Some((ln, l)) = lines.next() else {
                return parse_err(hl, format!("missing transition for ({state}, {sym})"));
            };
            let [a, b, t] = numbers::<3>(ln, l)?;
            if (a, b) != (state, sym) {
                return parse_err(ln, format!("expected transition ({state}, {sym}), found ({a}, {b})"));
            }
            delta.push(t);
        }
    }
    if let Some((ln, _)) = lines.next() {
        return parse_err(ln, "unexpected trailing content");
    }
    Dfa::new(q, s, q0, f, delta).map_err(|e| Error::Parse { line: hl, message: e.to_string() })
}

pub fn format_dfa(a: &Dfa) -> String {
    let mut out = format!("{} {} {} {}\n", a.q(), a.s(), a.initial(), a.final_count());
    for state in 0..a.q() {
        for sym in 0..a.s() {
            writeln!(out, "{state} {sym} {}", a.next(state, sym)).expect("write to string");
        }
    }
    out
}

pub fn parse_data_sample(text: &str) -> Result<DataSample> {
    let mut lines = content_lines(text);
    let Some((hl, header)) = lines.next() else {
        return parse_err(0, "empty data file");
    };
    let [n, d] = numbers::<2>(hl, header)?;
    let mut words: Vec<Word> = Vec::with_capacity(d);
    for (ln, l) in lines {
        let w: Word = l.parse().map_err(|e: Error| Error::Parse { line: ln, message: e.to_string() })?;
        if w.len() != n {
            return parse_err(ln, format!("word has length {}, expected {n}", w.len()));
        }
        if let Some(prev) = words.last() {
            if *prev == w {
                return parse_err(ln, format!("duplicate word {w}"));
            }
            if *prev > w {
                return parse_err(ln, format!("words not sorted: {w} after {prev}"));
            }
        }
        words.push(w);
    }
    if words.len() != d {
        return parse_err(hl, format!("header announces {d} words, found {}", words.len()));
    }
    DataSample::new(n, words).map_err(|e| Error::Parse { line: hl, message: e.to_string() })
}

pub fn format_data_sample(sample: &DataSample) -> String {
    let mut out = format!("{} {}\n", sample.n(), sample.d());
    for w in sample.words() {
        writeln!(out, "{w}").expect("write to string");
    }
    out
}
