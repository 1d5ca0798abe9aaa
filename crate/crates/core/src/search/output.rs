use std::io::Write;

use serde::{Deserialize, Serialize};

use super::SearchTrace;
use crate::coders::Coder;

/// One line of a serialized trace.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct TraceRecord {
    pub step: u64,
    pub q: usize,
    pub s: usize,
    pub program_bits: f64,
    pub data_bits: f64,
    pub total: f64,
    pub deficiency_lower_bound: f64,
    pub coder: u64,
}

pub fn trace_records(trace: &SearchTrace) -> Vec<TraceRecord> {
    trace
        .explanations
        .iter()
        .map(|e| TraceRecord {
            step: e.step,
            q: e.model.q(),
            s: e.model.s(),
            program_bits: e.program_bits.bits(),
            data_bits: e.data_bits.bits(),
            total: e.total.bits(),
            deficiency_lower_bound: e.deficiency,
            coder: Coder::id(e.coder),
        })
        .collect()
}

#[derive(Serialize)]
struct Preamble<'a> {
    version: &'a str,
    config: &'a serde_json::Value,
    mode: super::SearchMode,
    alpha: f64,
    terminated: super::Termination,
    steps_run: u64,
}

fn preamble<'a>(trace: &SearchTrace, config: &'a serde_json::Value) -> Preamble<'a> {
    Preamble {
        version: crate::VERSION,
        config,
        mode: trace.mode,
        alpha: trace.alpha.bits(),
        terminated: trace.terminated,
        steps_run: trace.steps_run,
    }
}

/// CSV with a `#`-prefixed JSON preamble line carrying the run configuration.
pub fn write_trace_csv(trace: &SearchTrace, config: &serde_json::Value, mut out: impl Write) -> std::io::Result<()> {
    writeln!(out, "# {}", serde_json::to_string(&preamble(trace, config))?)?;
    writeln!(out, "step,q,s,program_bits,data_bits,total,deficiency_lower_bound,coder")?;
    for r in trace_records(trace) {
        writeln!(
            out,
            "{},{},{},{},{},{},{},{}",
            r.step, r.q, r.s, r.program_bits, r.data_bits, r.total, r.deficiency_lower_bound, r.coder
        )?;
    }
    Ok(())
}

/// One JSON object per line: the preamble, then one record per explanation.
pub fn write_trace_jsonl(trace: &SearchTrace, config: &serde_json::Value, mut out: impl Write) -> std::io::Result<()> {
    writeln!(out, "{}", serde_json::to_string(&preamble(trace, config))?)?;
    for r in trace_records(trace) {
        writeln!(out, "{}", serde_json::to_string(&r)?)?;
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::codelen::CodeLength;
    use crate::dfa::DataSample;
    use crate::search::{greedy_merge_search, MergeConfig, SearchContext};

    #[test]
    fn csv_and_jsonl_agree() {
        let sample = DataSample::from_indices(3, [0, 3, 5, 6]).unwrap();
        let t = greedy_merge_search(&sample, CodeLength::from_int(1000), MergeConfig::default(), &SearchContext::default()).unwrap();
        let cfg = serde_json::json!({"n": 3});
        let mut csv = Vec::new();
        write_trace_csv(&t, &cfg, &mut csv).unwrap();
        let csv = String::from_utf8(csv).unwrap();
        assert!(csv.starts_with("# {\"version\""));
        assert_eq!(csv.lines().count(), 2 + t.explanations.len());
        let mut jl = Vec::new();
        write_trace_jsonl(&t, &cfg, &mut jl).unwrap();
        let lines: Vec<&str> = std::str::from_utf8(&jl).unwrap().lines().collect();
        let head: serde_json::Value = serde_json::from_str(lines[0]).unwrap();
        assert_eq!(head["config"]["n"], 3);
        let recs: Vec<TraceRecord> = lines[1..].iter().map(|l| serde_json::from_str(l).unwrap()).collect();
        assert_eq!(recs, trace_records(&t));
    }
}
