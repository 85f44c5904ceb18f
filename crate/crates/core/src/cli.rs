//! The `antiassoc` command line. Every subcommand prints JSON by default
//! and a human layout with `--format text`. Failures print an error object
//! and exit nonzero.

use std::ffi::OsString;
use std::io::Write;
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;
use serde_json::{json, Value};

use crate::cayley::{separates_exhaustive, ExhaustiveOptions, DEFAULT_EVAL_BUDGET};
use crate::demo::run_demo;
use crate::error::{Error, Result};
use crate::synth::{
    build_k_antiassociative, decide_finite_separability, AntiassocBuild, Certificate, FiniteVerdict, SearchOptions,
    DEFAULT_MAX_PAIRS, DEFAULT_SEARCH_BUDGET,
};
use crate::term::{catalan, enumerate_ordered_terms, parse_term, Term};
use crate::unify::{unify, UnifyResult};
use crate::vector::{OpSum, Register, VecGroupoid, DEFAULT_CAYLEY_BOUND};
use crate::verify::affine::affine_separation_decision;
use crate::verify::census::{census, CensusOptions};
use crate::verify::lemma::lemma_harness;

#[derive(Parser, Debug)]
#[command(name = "antiassoc", version, about = "Separate groupoid terms with explicit finite groupoids")]
pub struct Cli {
    #[command(flatten)]
    pub global: GlobalFlags,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Args, Debug, Clone)]
pub struct GlobalFlags {
    #[arg(long, global = true, value_enum, default_value_t = Format::Json)]
    pub format: Format,
    /// Threads for the census, exhaustive checks and separator search.
    #[arg(long, global = true, default_value_t = 1, value_parser = clap::value_parser!(u64).range(1..))]
    pub workers: u64,
    /// Assignment budget for brute-force checks.
    #[arg(long, global = true, default_value_t = DEFAULT_EVAL_BUDGET, value_parser = clap::value_parser!(u64).range(1..))]
    pub budget_evals: u64,
    /// Candidate budget for the separator search.
    #[arg(long, global = true, default_value_t = DEFAULT_SEARCH_BUDGET, value_parser = clap::value_parser!(u64).range(1..))]
    pub budget_candidates: u64,
}

#[derive(ValueEnum, Clone, Copy, Debug, PartialEq, Eq)]
pub enum Format {
    Json,
    Text,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// List or count the ordered terms on x1..xk.
    Terms {
        #[arg(value_enum)]
        action: TermsAction,
        #[arg(short)]
        k: usize,
    },
    /// Run syntactic unification and print the rule trace.
    Unify { s: String, t: String },
    /// Decide whether some finite groupoid separates two terms.
    Separate {
        s: String,
        t: String,
        /// Write the operation table of the separator as CSV.
        #[arg(long, value_name = "FILE")]
        emit_table: Option<PathBuf>,
        /// Write the separator's matrices as JSON.
        #[arg(long, value_name = "FILE")]
        emit_affine: Option<PathBuf>,
    },
    /// Build or check a groupoid separating all ordered terms on k variables.
    Antiassoc {
        #[arg(value_enum)]
        action: AntiassocAction,
        #[arg(short)]
        k: Option<usize>,
        /// Build output to check instead of building afresh.
        #[arg(long, value_name = "FILE")]
        input: Option<PathBuf>,
        #[arg(long, default_value_t = DEFAULT_MAX_PAIRS)]
        max_pairs: u64,
    },
    /// Count the n-element tables in which no triple associates.
    Census {
        #[arg(short)]
        n: usize,
        /// Allow n = 4.
        #[arg(long)]
        long: bool,
        #[arg(long, value_name = "FILE")]
        checkpoint: Option<PathBuf>,
        #[arg(long)]
        progress: bool,
    },
    /// Reproduce a worked computation.
    Demo { name: String },
    /// Random checks of the transfer-operation identities.
    Lemmas {
        #[arg(long, default_value_t = 1000)]
        trials: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
}

#[derive(ValueEnum, Clone, Copy, Debug, PartialEq, Eq)]
pub enum TermsAction {
    Enumerate,
    Count,
}

#[derive(ValueEnum, Clone, Copy, Debug, PartialEq, Eq)]
pub enum AntiassocAction {
    Build,
    Verify,
}

/// What `separate` prints.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct SeparateOutput {
    pub verdict: &'static str,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub construction: Option<&'static str>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub opsum: Option<OpSum>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub groupoid: Option<VecGroupoid>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub lambda: Option<Vec<Register>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub unifier: Option<crate::unify::Substitution>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub candidates_tried: Option<u64>,
}

impl SeparateOutput {
    fn from_verdict(v: FiniteVerdict) -> Self {
        let empty = SeparateOutput {
            verdict: "",
            construction: None,
            opsum: None,
            groupoid: None,
            lambda: None,
            unifier: None,
            candidates_tried: None,
        };
        match v {
            FiniteVerdict::NotSeparable { unifier } => SeparateOutput {
                verdict: "not-separable",
                construction: Some("unifier"),
                unifier: Some(unifier),
                ..empty
            },
            FiniteVerdict::Separated { certificate } => {
                let Certificate { construction, opsum, groupoid, lambda } = certificate;
                let name = match construction {
                    crate::synth::Construction::Cover => "cover",
                    crate::synth::Construction::Cycle => "cycle",
                    crate::synth::Construction::Search => "search",
                };
                SeparateOutput {
                    verdict: "separated",
                    construction: Some(name),
                    opsum: Some(opsum),
                    groupoid: Some(groupoid),
                    lambda: Some(lambda),
                    ..empty
                }
            }
            FiniteVerdict::Unknown { candidates_tried } => {
                SeparateOutput { verdict: "unknown", candidates_tried: Some(candidates_tried), ..empty }
            }
        }
    }
}

/// Per-pair results of `antiassoc verify`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct PairCheck {
    pub s: Term,
    pub t: Term,
    pub certificate: bool,
    pub affine_factor: bool,
    pub affine_whole: bool,
    /// `None` when brute force was over budget.
    pub exhaustive_factor: Option<bool>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct AntiassocCheck {
    pub k: usize,
    pub dim: usize,
    pub pairs: Vec<PairCheck>,
    pub all_passed: bool,
}

pub fn verify_build(build: &AntiassocBuild, opts: &ExhaustiveOptions) -> Result<AntiassocCheck> {
    let mut pairs = Vec::with_capacity(build.pairs.len());
    for pc in &build.pairs {
        pc.cover.validate(&pc.s, &pc.t)?;
        let factor = &pc.certificate.groupoid;
        let exhaustive_factor = if factor.dim() <= DEFAULT_CAYLEY_BOUND {
            let table = factor.to_cayley(DEFAULT_CAYLEY_BOUND)?;
            match separates_exhaustive(&table, &pc.s, &pc.t, opts) {
                Ok(v) => Some(v.separated),
                Err(Error::BudgetExceeded { .. }) => None,
                Err(e) => return Err(e),
            }
        } else {
            None
        };
        pairs.push(PairCheck {
            s: pc.s.clone(),
            t: pc.t.clone(),
            certificate: pc.certificate.verify(&pc.s, &pc.t)?,
            affine_factor: affine_separation_decision(factor, &pc.s, &pc.t).separated,
            affine_whole: affine_separation_decision(&build.groupoid, &pc.s, &pc.t).separated,
            exhaustive_factor,
        });
    }
    let all_passed =
        pairs.iter().all(|p| p.certificate && p.affine_factor && p.affine_whole && p.exhaustive_factor != Some(false));
    Ok(AntiassocCheck { k: build.k, dim: build.groupoid.dim(), pairs, all_passed })
}

/// Runs the command line and returns the process exit code.
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            use clap::error::ErrorKind;
            if matches!(e.kind(), ErrorKind::DisplayHelp | ErrorKind::DisplayVersion) {
                let _ = write!(out, "{e}");
                return 0;
            }
            let obj = json!({"error": {"kind": "usage", "message": e.to_string().trim()}});
            let _ = writeln!(out, "{obj}");
            return 2;
        }
    };
    let format = cli.global.format;
    match execute(&cli) {
        Ok((value, text, ok)) => {
            let _ = match format {
                Format::Json => writeln!(out, "{}", serde_json::to_string_pretty(&value).expect("serializable")),
                Format::Text => write!(out, "{text}"),
            };
            if ok {
                0
            } else {
                1
            }
        }
        Err(e) => {
            let code = if matches!(e, Error::Usage(_)) { 2 } else { 1 };
            match format {
                Format::Json => {
                    let _ = writeln!(out, "{}", json!({"error": {"kind": e.kind(), "message": e.to_string()}}));
                }
                Format::Text => {
                    let _ = writeln!(err, "error: {e}");
                }
            }
            code
        }
    }
}

/// JSON value, text rendering, and whether the command's own checks passed.
fn execute(cli: &Cli) -> Result<(Value, String, bool)> {
    let g = &cli.global;
    let workers = g.workers as usize;
    let exhaustive = ExhaustiveOptions { budget: g.budget_evals, workers };
    match &cli.command {
        Command::Terms { action, k } => {
            if *k == 0 {
                return Err(Error::Usage("k must be at least 1".into()));
            }
            let count = catalan(*k as u64 - 1)?;
            match action {
                TermsAction::Count => Ok((json!({"k": k, "count": count}), format!("{count}\n"), true)),
                TermsAction::Enumerate => {
                    let terms = enumerate_ordered_terms(*k)?;
                    let text = terms.iter().map(|t| format!("{t}\n")).collect();
                    Ok((json!({"k": k, "count": count, "terms": terms}), text, true))
                }
            }
        }
        Command::Unify { s, t } => {
            let (s, t) = (parse_term(s)?, parse_term(t)?);
            let outcome = unify(&s, &t);
            let mut text = String::new();
            for step in &outcome.trace {
                text += &format!("{:<10} {}", format!("{:?}", step.rule), step.consumed);
                if !step.produced.is_empty() {
                    let produced: Vec<String> = step.produced.iter().map(|p| p.to_string()).collect();
                    text += &format!("  =>  {}", produced.join(", "));
                }
                text.push('\n');
            }
            match &outcome.result {
                UnifyResult::Unifier { bindings } => {
                    text += "unifier:\n";
                    for (v, term) in bindings.bindings() {
                        text += &format!("  {v} := {term}\n");
                    }
                }
                UnifyResult::NotUnifiable => text += "not unifiable\n",
            }
            Ok((serde_json::to_value(&outcome)?, text, true))
        }
        Command::Separate { s, t, emit_table, emit_affine } => {
            let (s, t) = (parse_term(s)?, parse_term(t)?);
            let search = SearchOptions { budget: g.budget_candidates, workers, ..SearchOptions::default() };
            let output = SeparateOutput::from_verdict(decide_finite_separability(&s, &t, &search)?);
            if let Some(groupoid) = &output.groupoid {
                if let Some(path) = emit_affine {
                    std::fs::write(path, serde_json::to_string_pretty(groupoid)?)?;
                }
                if let Some(path) = emit_table {
                    std::fs::write(path, groupoid.to_cayley(DEFAULT_CAYLEY_BOUND)?.to_csv())?;
                }
            } else if emit_affine.is_some() || emit_table.is_some() {
                return Err(Error::Usage(format!("no separator to emit: verdict is {}", output.verdict)));
            }
            let mut text = format!("verdict: {}\n", output.verdict);
            if let Some(c) = output.construction {
                text += &format!("construction: {c}\n");
            }
            if let Some(op) = &output.opsum {
                text += &format!("operation: {op}\n");
            }
            if let Some(gr) = &output.groupoid {
                text += &format!("order: 2^{}\n", gr.dim());
            }
            if let Some(l) = &output.lambda {
                let regs: Vec<String> = l.iter().map(|r| r.to_string()).collect();
                text += &format!("parity registers: {{{}}}\n", regs.join(","));
            }
            if let Some(u) = &output.unifier {
                for (v, term) in u.bindings() {
                    text += &format!("  {v} := {term}\n");
                }
            }
            if let Some(n) = output.candidates_tried {
                text += &format!("candidates tried: {n}\n");
            }
            Ok((serde_json::to_value(&output)?, text, true))
        }
        Command::Antiassoc { action, k, input, max_pairs } => {
            let build = match (input, k) {
                (Some(path), _) if *action == AntiassocAction::Verify => {
                    serde_json::from_str::<AntiassocBuild>(&std::fs::read_to_string(path)?)?
                }
                (_, Some(k)) => build_k_antiassociative(*k, *max_pairs)?,
                _ => return Err(Error::Usage("give -k, or --input with verify".into())),
            };
            match action {
                AntiassocAction::Build => {
                    let text = format!(
                        "k = {}: {} pairs, direct sum of {} registers\n{}",
                        build.k,
                        build.pairs.len(),
                        build.groupoid.dim(),
                        build
                            .pairs
                            .iter()
                            .map(|p| format!("  {}  vs  {}  by  {}\n", p.s, p.t, p.certificate.opsum))
                            .collect::<String>()
                    );
                    Ok((serde_json::to_value(&build)?, text, true))
                }
                AntiassocAction::Verify => {
                    let check = verify_build(&build, &exhaustive)?;
                    let mut text = format!("k = {}: {} pairs over {} registers\n", check.k, check.pairs.len(), check.dim);
                    for p in &check.pairs {
                        let brute = match p.exhaustive_factor {
                            Some(true) => "pass",
                            Some(false) => "FAIL",
                            None => "skipped",
                        };
                        let mark = |b: bool| if b { "pass" } else { "FAIL" };
                        text += &format!(
                            "  {}  vs  {}: certificate {}, affine {}, whole {}, brute force {}\n",
                            p.s,
                            p.t,
                            mark(p.certificate),
                            mark(p.affine_factor),
                            mark(p.affine_whole),
                            brute
                        );
                    }
                    let ok = check.all_passed;
                    Ok((serde_json::to_value(&check)?, text, ok))
                }
            }
        }
        Command::Census { n, long, checkpoint, progress } => {
            let opts = CensusOptions {
                workers,
                long_run: *long,
                checkpoint: checkpoint.clone(),
                progress: *progress,
                ..CensusOptions::default()
            };
            let report = census(*n, &opts)?;
            let text = format!(
                "n = {}\ntables: {}\nantiassociative: {}\nliterally deranged: {}\nelapsed: {:.3} s on {} worker(s)\n",
                report.n,
                report.total_tables,
                report.antiassociative_count,
                report.literally_deranged_count,
                report.elapsed_secs,
                report.workers
            );
            Ok((serde_json::to_value(&report)?, text, true))
        }
        Command::Demo { name } => {
            let report = run_demo(name)?;
            let ok = report.passed();
            Ok((serde_json::to_value(&report)?, report.to_string(), ok))
        }
        Command::Lemmas { trials, seed } => {
            let report = lemma_harness(*trials, *seed);
            let text = format!(
                "{} trials ({} plain, {} tweaked; {} exhaustive, {} sampled), {} assignments, {} failures\n",
                report.trials,
                report.plain_trials,
                report.tweaked_trials,
                report.exhaustive_trials,
                report.sampled_trials,
                report.assignments_checked,
                report.failures.len()
            );
            let ok = report.passed();
            Ok((serde_json::to_value(&report)?, text, ok))
        }
    }
}
