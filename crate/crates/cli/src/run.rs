use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};

use mdl_dfa::bits::BitString;
use mdl_dfa::codelen::CodeLength;
use mdl_dfa::coders::{CoderFamily, NamedModels};
use mdl_dfa::dfa::{decode, encode, format_dfa, parse_data_sample, parse_dfa, DataSample};
use mdl_dfa::exec::Execution;
use mdl_dfa::experiments::{run_lemma1_counting, run_oscillation, run_parity, ExperimentReport};
use mdl_dfa::ranking::{subset_code_len, subset_rank, subset_unrank, SubsetIndex};
use mdl_dfa::search::{
    direct_method_search, dovetail_optimal, greedy_merge_search, write_trace_csv, write_trace_jsonl, DovetailConfig, MergeConfig,
    ProgramCoding, SearchContext, SearchTrace, SwitchRule,
};
use mdl_dfa::structfn::{build_structure_table, minimal_sufficient_alpha, Catalog, ModelClass, SLACK};
use mdl_dfa::VERSION;
use serde::Serialize;

use crate::args::*;

type Result<T> = std::result::Result<T, Box<dyn std::error::Error>>;

/// Everything that determines a run's outputs; embedded in every file written.
#[derive(Debug, Default, Serialize)]
pub struct RunConfig {
    pub subcommand: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub n: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub d: Option<u64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub data: Option<PathBuf>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub alpha: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub budget: Option<u64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub seed: Option<u64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub rule: Option<Rule>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub mode: Option<&'static str>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub coding: Option<Coding>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub max_states: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub class: Option<ClassArg>,
    #[serde(skip_serializing_if = "serde_json::Value::is_null")]
    pub params: serde_json::Value,
    pub outputs: Vec<PathBuf>,
}

impl RunConfig {
    fn new(subcommand: &str) -> Self {
        Self { subcommand: subcommand.into(), ..Self::default() }
    }

    fn json(&self) -> serde_json::Value {
        serde_json::to_value(self).expect("config serializes")
    }

    fn comment_line(&self) -> String {
        let header = serde_json::json!({ "version": VERSION, "config": self });
        format!("# {header}\n")
    }
}

pub fn run(cli: Cli) -> Result<()> {
    if let Some(t) = cli.threads {
        if t == 0 {
            return Err("--threads must be positive".into());
        }
        rayon::ThreadPoolBuilder::new().num_threads(t).build_global()?;
    }
    match cli.command {
        Command::Induce(a) => induce(a),
        Command::Dovetail(a) => enumerate(a, "dovetail"),
        Command::Direct(a) => enumerate(a, "direct"),
        Command::Structfn(a) => structfn(a),
        Command::Rank(a) => rank(a),
        Command::Experiment(e) => experiment(e),
        Command::EncodeDfa(a) => encode_dfa(a),
        Command::DecodeDfa(a) => decode_dfa(a),
    }
}

fn read(path: &Path) -> Result<String> {
    fs::read_to_string(path).map_err(|e| format!("cannot read {}: {e}", path.display()).into())
}

fn write(path: &Path, contents: &[u8]) -> Result<()> {
    fs::write(path, contents).map_err(|e| format!("cannot write {}: {e}", path.display()).into())
}

fn load_sample(args: &DataArgs, cfg: &mut RunConfig) -> Result<DataSample> {
    let sample = parse_data_sample(&read(&args.data)?)?;
    if let Some(n) = args.n {
        if n != sample.n() {
            return Err(format!("--n {n} disagrees with the data file's word length {}", sample.n()).into());
        }
    }
    cfg.n = Some(sample.n());
    cfg.d = Some(sample.d() as u64);
    cfg.data = Some(args.data.clone());
    Ok(sample)
}

fn emit_trace(trace: &SearchTrace, args: &TraceArgs, cfg: &RunConfig) -> Result<()> {
    let last = trace.last();
    println!(
        "{} explanations, terminated: {:?}; final: q = {}, program {} + data {} = {} bits, deficiency {:.4}",
        trace.explanations.len(),
        trace.terminated,
        last.model.q(),
        last.program_bits,
        last.data_bits,
        last.total,
        last.deficiency
    );
    let Some(path) = &args.trace else {
        return Ok(());
    };
    let format = args.format.unwrap_or(if path.extension().is_some_and(|e| e == "jsonl") { TraceFormat::Jsonl } else { TraceFormat::Csv });
    let mut buf = Vec::new();
    match format {
        TraceFormat::Csv => write_trace_csv(trace, &cfg.json(), &mut buf)?,
        TraceFormat::Jsonl => write_trace_jsonl(trace, &cfg.json(), &mut buf)?,
    }
    write(path, &buf)
}

fn induce(a: InduceArgs) -> Result<()> {
    let mut cfg = RunConfig::new("induce");
    let sample = load_sample(&a.data, &mut cfg)?;
    cfg.alpha = Some(a.trace.alpha);
    cfg.budget = a.budget;
    cfg.rule = Some(a.rule);
    cfg.coding = Some(a.coding);
    cfg.mode = Some("merge");
    cfg.outputs.extend(a.trace.trace.clone());
    let config = MergeConfig {
        rule: match a.rule {
            Rule::Plain => SwitchRule::Plain,
            Rule::Safe => SwitchRule::Safe,
        },
        coding: match a.coding {
            Coding::Raw => ProgramCoding::Raw,
            Coding::Shortest => ProgramCoding::Shortest,
        },
        max_steps: a.budget,
    };
    let trace = greedy_merge_search(&sample, CodeLength::new(a.trace.alpha)?, config, &SearchContext::default())?;
    emit_trace(&trace, &a.trace, &cfg)
}

fn enumerate(a: EnumArgs, mode: &'static str) -> Result<()> {
    let mut cfg = RunConfig::new(mode);
    let sample = load_sample(&a.data, &mut cfg)?;
    cfg.alpha = Some(a.trace.alpha);
    cfg.budget = a.budget;
    cfg.mode = Some(mode);
    cfg.max_states = Some(a.max_states);
    cfg.outputs.extend(a.trace.trace.clone());
    let config = DovetailConfig { max_states: a.max_states, budget: a.budget.unwrap_or(u64::MAX) };
    let alpha = CodeLength::new(a.trace.alpha)?;
    let ctx = SearchContext::default();
    let trace = if mode == "direct" {
        direct_method_search(&sample, alpha, &config, &ctx)?
    } else {
        dovetail_optimal(&sample, alpha, &config, &ctx)?
    };
    emit_trace(&trace, &a.trace, &cfg)
}

fn structfn(a: StructfnArgs) -> Result<()> {
    let mut cfg = RunConfig::new("structfn");
    let sample = load_sample(&a.data, &mut cfg)?;
    cfg.class = Some(a.class);
    let class = match a.class {
        ClassArg::Dfa => {
            cfg.max_states = Some(a.max_states);
            ModelClass::Dfa { max_states: a.max_states }
        }
        ClassArg::Subsets => ModelClass::Subsets,
    };
    cfg.outputs.extend(a.out.clone());
    cfg.outputs.extend(a.json.clone());
    let catalog = Catalog::build(sample.n(), class, &NamedModels::default(), Execution::Parallel)?;
    let family = CoderFamily::default();
    let table = build_structure_table(&sample, &catalog, &family)?;
    println!("K̂(D) = {} ({:?}); {} feasible models", table.khat_d.bits, table.khat_d.method, table.witnesses.len());
    if let Some(s) = minimal_sufficient_alpha(&table, SLACK) {
        println!("minimal sufficient statistic at alpha = {}: witness {}", s.alpha, s.witness);
    }
    print!("{}", table.to_csv());
    if let Some(path) = &a.out {
        write(path, format!("{}{}", cfg.comment_line(), table.to_csv()).as_bytes())?;
    }
    if let Some(path) = &a.json {
        let doc = serde_json::json!({ "version": VERSION, "config": cfg, "table": table });
        write(path, serde_json::to_string_pretty(&doc)?.as_bytes())?;
    }
    Ok(())
}

fn rank(a: RankArgs) -> Result<()> {
    let index = match (&a.members, &a.unrank) {
        (Some(members), _) => subset_rank(a.l, members)?,
        (None, Some(r)) => {
            let rank = r.parse().map_err(|_| format!("not a decimal rank: {r:?}"))?;
            SubsetIndex { rank, l: a.l, d: a.d.expect("clap requires --d") }
        }
        (None, None) => unreachable!("clap requires one of --members and --unrank"),
    };
    let members = subset_unrank(&index)?;
    let out = serde_json::json!({
        "version": VERSION,
        "l": index.l,
        "d": index.d,
        "rank": index.rank.to_string(),
        "members": members,
        "code_len": subset_code_len(index.l, index.d)?.bits(),
    });
    println!("{out}");
    Ok(())
}

fn experiment(e: Experiment) -> Result<()> {
    let mut cfg = RunConfig::new("experiment");
    let (report, out) = match e {
        Experiment::Oscillation(a) => {
            (cfg.n, cfg.seed, cfg.params) = (Some(a.n), Some(a.seed), "oscillation".into());
            (run_oscillation(a.n, a.seed)?, a.out.out)
        }
        Experiment::Parity(a) => {
            (cfg.n, cfg.seed, cfg.params) = (Some(a.n), Some(a.seed), "parity".into());
            (run_parity(a.n, a.seed)?, a.out.out)
        }
        Experiment::Lemma1(a) => {
            cfg.n = Some(a.n);
            cfg.params = serde_json::json!({ "experiment": "lemma1", "max_m": a.max_m, "deltas": a.deltas });
            (run_lemma1_counting(a.n, a.max_m, &a.deltas)?, a.out.out)
        }
    };
    cfg.outputs.extend(out.clone());
    print!("{}", report.to_table());
    if let Some(path) = out {
        write(&path, report_json(&report, &cfg)?.as_bytes())?;
    }
    if !report.passed() {
        eprintln!("note: {} check(s) failed", report.checks.iter().filter(|c| !c.pass).count());
    }
    Ok(())
}

fn report_json(report: &ExperimentReport, cfg: &RunConfig) -> Result<String> {
    let mut doc = serde_json::to_value(report)?;
    doc["config"] = cfg.json();
    Ok(serde_json::to_string_pretty(&doc)? + "\n")
}

fn encode_dfa(a: EncodeArgs) -> Result<()> {
    let dfa = parse_dfa(&read(&a.input)?)?;
    let bits = encode(&dfa)?.to_string();
    match &a.out {
        Some(path) => {
            let mut cfg = RunConfig::new("encode-dfa");
            cfg.data = Some(a.input.clone());
            cfg.outputs.push(path.clone());
            write(path, format!("{}{bits}\n", cfg.comment_line()).as_bytes())
        }
        None => {
            println!("{bits}");
            Ok(())
        }
    }
}

fn decode_dfa(a: DecodeArgs) -> Result<()> {
    let text = match (&a.input, &a.bits) {
        (Some(path), _) => read(path)?,
        (None, Some(bits)) => bits.clone(),
        (None, None) => unreachable!("clap requires one of --in and --bits"),
    };
    let cleaned: String = text.lines().filter(|l| !l.trim_start().starts_with('#')).flat_map(|l| l.trim().chars()).collect();
    let bits: BitString = cleaned.parse()?;
    let dfa = decode(&bits)?;
    let body = format_dfa(&dfa);
    match &a.out {
        Some(path) => {
            let mut cfg = RunConfig::new("decode-dfa");
            cfg.data = a.input.clone();
            cfg.outputs.push(path.clone());
            write(path, format!("{}{body}", cfg.comment_line()).as_bytes())
        }
        None => {
            std::io::stdout().write_all(body.as_bytes())?;
            Ok(())
        }
    }
}
