//! Command-line front end: deterministic, scriptable reports over the
//! decision, separation, classical and self-test modules.
//!
//! Exit codes: 0 for valid, equal or equivalent; 1 for refuted, separated,
//! not equivalent or a failed self-test; 2 for unknown; 64 for usage errors
//! (including precondition violations such as a non-word argument to
//! `separate`); 65 for input syntax errors, which carry line and column.
//! Reports are human-readable by default and JSON with `--json`; both are
//! byte-identical across runs for fixed inputs and flags.

use std::collections::BTreeMap;
use std::collections::BTreeSet;
use std::ffi::OsString;
use std::fmt::Write as _;
use std::io::Write;

use clap::error::ErrorKind;
use clap::{Parser, Subcommand, ValueEnum};
use serde::Serialize;

use crate::classical::{lang_incl, nfa_over_v, nfa_over_vprime};
use crate::decision::{decide, Counterexample, Status, Verdict, MAX_WITNESS_LEN};
use crate::eval::{LangSpec, Valuation};
use crate::selftest::run_all;
use crate::separation::{lang1_decide, lang2_separate, separate_words, Separation, Separator};
use crate::term::{
    dnf_to_term, fresh_variable, parse, parse_query, top_expansion, Dnf, LitWord, ParseError,
    Query, QueryKind, Term, Variable,
};

#[derive(Parser)]
#[command(
    name = "kavc",
    version,
    about = "Decides equations of Kleene algebra terms with variable complements over language \
             valuations",
    color = clap::ColorChoice::Never
)]
struct Cli {
    #[command(subcommand)]
    command: Cmd,

    /// Length bound for the incomplete bounded refuter (at most 10).
    #[arg(long, global = true, default_value_t = 8, value_name = "N")]
    max_witness_len: usize,

    /// Emit machine-readable JSON instead of the human report.
    #[arg(long, global = true)]
    json: bool,

    /// Seed for the randomized self-test corpora.
    #[arg(long, global = true, default_value_t = 0, value_name = "S")]
    seed: u64,

    /// Alphabet for `langeq`: the doubled literal alphabet, or the declared
    /// variables plus one surrogate letter for complements.
    #[arg(long, global = true, value_enum, default_value_t = Over::Vprime)]
    over: Over,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Over {
    Vprime,
    V,
}

#[derive(Subcommand)]
enum Cmd {
    /// Decide an equation `s = t` or inequation `s <= t`.
    Decide {
        #[arg(value_name = "QUERY")]
        query: String,
    },
    /// Separate two literal words, or report that they are equal.
    Separate {
        #[arg(value_name = "LHS")]
        lhs: String,
        #[arg(value_name = "RHS")]
        rhs: String,
    },
    /// Decide a pair of one-variable words over a one-letter alphabet.
    Lang1 {
        #[arg(value_name = "LHS")]
        lhs: String,
        #[arg(value_name = "RHS")]
        rhs: String,
    },
    /// Separate a pair of one-variable words over a two-letter alphabet.
    Lang2 {
        #[arg(value_name = "LHS")]
        lhs: String,
        #[arg(value_name = "RHS")]
        rhs: String,
    },
    /// Compare two terms as plain regular expressions.
    Langeq {
        #[arg(value_name = "LHS")]
        lhs: String,
        #[arg(value_name = "RHS")]
        rhs: String,
    },
    /// Emit the three query reductions of a DNF formula (clauses on
    /// separate lines, literals joined by `&`, negation `!`).
    FromDnf {
        #[arg(value_name = "DNF")]
        dnf: String,
    },
    /// Run the acceptance criteria and print a pass/fail table.
    Selftest,
}

/// Parses the arguments, runs the selected command, and writes the report
/// to `out` (errors to `err`), returning the process exit code.
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> u8
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            return if matches!(e.kind(), ErrorKind::DisplayHelp | ErrorKind::DisplayVersion) {
                let _ = write!(out, "{e}");
                0
            } else {
                let _ = write!(err, "{e}");
                64
            };
        }
    };
    match dispatch(&cli) {
        Ok((report, code)) => {
            let _ = out.write_all(report.as_bytes());
            code
        }
        Err(failure) => {
            let _ = writeln!(err, "error: {}", failure.message);
            failure.code
        }
    }
}

struct Failure {
    code: u8,
    message: String,
}

fn usage(message: impl Into<String>) -> Failure {
    Failure { code: 64, message: message.into() }
}

fn syntax(e: ParseError) -> Failure {
    Failure { code: 65, message: e.to_string() }
}

fn dispatch(cli: &Cli) -> Result<(String, u8), Failure> {
    if cli.max_witness_len > MAX_WITNESS_LEN {
        return Err(usage(format!("--max-witness-len must be at most {MAX_WITNESS_LEN}")));
    }
    match &cli.command {
        Cmd::Decide { query } => decide_cmd(query, cli.max_witness_len, cli.json),
        Cmd::Separate { lhs, rhs } => separate_cmd(lhs, rhs, cli.json),
        Cmd::Lang1 { lhs, rhs } => lang1_cmd(lhs, rhs, cli.json),
        Cmd::Lang2 { lhs, rhs } => lang2_cmd(lhs, rhs, cli.json),
        Cmd::Langeq { lhs, rhs } => langeq_cmd(lhs, rhs, cli.over, cli.json),
        Cmd::FromDnf { dnf } => from_dnf_cmd(dnf, cli.json),
        Cmd::Selftest => Ok(selftest_cmd(cli.seed, cli.json)),
    }
}

#[derive(Serialize)]
#[serde(tag = "kind", rename_all = "lowercase")]
enum LangSpecJson {
    Finite { words: Vec<Vec<usize>> },
    Regex { expr: String },
}

fn assignment_json(v: &Valuation) -> BTreeMap<String, LangSpecJson> {
    v.assignment()
        .iter()
        .map(|(var, spec)| {
            let json = match spec {
                LangSpec::Finite(words) => LangSpecJson::Finite {
                    words: words
                        .iter()
                        .map(|w| w.letters().iter().map(|l| l.0).collect())
                        .collect(),
                },
                LangSpec::Regex(r) => LangSpecJson::Regex { expr: r.to_string() },
            };
            (var.to_string(), json)
        })
        .collect()
}

#[derive(Serialize)]
struct CounterexampleJson {
    alphabet: usize,
    assignment: BTreeMap<String, LangSpecJson>,
    witness: Vec<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    lhs_word: Option<String>,
}

fn counterexample_json(cex: &Counterexample) -> CounterexampleJson {
    CounterexampleJson {
        alphabet: cex.valuation.alphabet_size(),
        assignment: assignment_json(&cex.valuation),
        witness: cex.witness.letters().iter().map(|l| l.0).collect(),
        lhs_word: cex.lhs_word.as_ref().map(|w| w.to_string()),
    }
}

fn status_name(status: Status) -> &'static str {
    match status {
        Status::Valid => "valid",
        Status::Refuted => "refuted",
        Status::Unknown => "unknown",
    }
}

fn verdict_name(verdict: &Verdict) -> &'static str {
    match verdict {
        Verdict::Valid => "valid",
        Verdict::Refuted(_) => "refuted",
        Verdict::Unknown { .. } => "unknown",
    }
}

fn push_valuation(text: &mut String, indent: &str, v: &Valuation) {
    let _ = writeln!(text, "{indent}valuation: alphabet {}", v.alphabet_size());
    for (var, spec) in v.assignment() {
        let _ = writeln!(text, "{indent}  {var} -> {spec}");
    }
}

fn push_counterexample(text: &mut String, indent: &str, cex: &Counterexample) {
    push_valuation(text, indent, &cex.valuation);
    let _ = writeln!(text, "{indent}witness: {}", cex.witness);
    if let Some(word) = &cex.lhs_word {
        let _ = writeln!(text, "{indent}witness in: {word}");
    }
}

#[derive(Serialize)]
struct DirectionJson {
    lhs: String,
    rhs: String,
    verdict: &'static str,
    procedure: &'static str,
    #[serde(skip_serializing_if = "Option::is_none")]
    counterexample: Option<CounterexampleJson>,
    #[serde(skip_serializing_if = "Option::is_none")]
    bound: Option<usize>,
}

#[derive(Serialize)]
struct DecideJson {
    query: String,
    overall: &'static str,
    directions: Vec<DirectionJson>,
}

fn decide_cmd(text: &str, max_len: usize, json: bool) -> Result<(String, u8), Failure> {
    let query = parse_query(text).map_err(syntax)?;
    let decision = decide(&query, max_len);
    let code = match decision.overall() {
        Status::Valid => 0,
        Status::Refuted => 1,
        Status::Unknown => 2,
    };
    if json {
        let payload = DecideJson {
            query: query.to_string(),
            overall: status_name(decision.overall()),
            directions: decision
                .directions
                .iter()
                .map(|dir| DirectionJson {
                    lhs: dir.lhs.to_string(),
                    rhs: dir.rhs.to_string(),
                    verdict: verdict_name(&dir.verdict),
                    procedure: dir.procedure.name(),
                    counterexample: match &dir.verdict {
                        Verdict::Refuted(cex) => Some(counterexample_json(cex)),
                        _ => None,
                    },
                    bound: match dir.verdict {
                        Verdict::Unknown { bound } => Some(bound),
                        _ => None,
                    },
                })
                .collect(),
        };
        return Ok((json_line(&payload), code));
    }
    let mut report = String::new();
    let _ = writeln!(report, "query: {query}");
    let _ = writeln!(report, "overall: {}", status_name(decision.overall()));
    for dir in &decision.directions {
        let _ = writeln!(report, "direction: {} <= {}", dir.lhs, dir.rhs);
        let _ = writeln!(report, "  procedure: {}", dir.procedure.name());
        let _ = writeln!(report, "  verdict: {}", verdict_name(&dir.verdict));
        match &dir.verdict {
            Verdict::Refuted(cex) => push_counterexample(&mut report, "  ", cex),
            Verdict::Unknown { bound } => {
                let _ = writeln!(report, "  bound: {bound}");
            }
            Verdict::Valid => {}
        }
    }
    Ok((report, code))
}

fn parse_lit_word(text: &str) -> Result<LitWord, Failure> {
    let term = parse(text).map_err(syntax)?;
    term.as_lit_word()
        .ok_or_else(|| usage(format!("expected a literal word (a `.`-composition of literals or `1`), got `{term}`")))
}

#[derive(Serialize)]
struct EqualJson {
    equal: bool,
}

#[derive(Serialize)]
struct SeparatedJson {
    equal: bool,
    alphabet: usize,
    assignment: BTreeMap<String, LangSpecJson>,
    witness: Vec<usize>,
    direction: &'static str,
    used_search: bool,
}

fn separation_report(
    lhs: &LitWord,
    rhs: &LitWord,
    separation: &Separation,
    json: bool,
) -> (String, u8) {
    match separation {
        Separation::Equal => {
            if json {
                return (json_line(&EqualJson { equal: true }), 0);
            }
            let mut report = String::new();
            let _ = writeln!(report, "lhs: {lhs}");
            let _ = writeln!(report, "rhs: {rhs}");
            let _ = writeln!(report, "result: equal");
            (report, 0)
        }
        Separation::Separated(sep) => (separator_report(lhs, rhs, sep, json), 1),
    }
}

fn separator_report(lhs: &LitWord, rhs: &LitWord, sep: &Separator, json: bool) -> String {
    if json {
        return json_line(&SeparatedJson {
            equal: false,
            alphabet: sep.valuation.alphabet_size(),
            assignment: assignment_json(&sep.valuation),
            witness: sep.witness.letters().iter().map(|l| l.0).collect(),
            direction: sep.direction.name(),
            used_search: sep.used_search,
        });
    }
    let mut report = String::new();
    let _ = writeln!(report, "lhs: {lhs}");
    let _ = writeln!(report, "rhs: {rhs}");
    let _ = writeln!(report, "result: separated");
    let _ = writeln!(report, "direction: {}", sep.direction.name());
    let _ = writeln!(report, "used search: {}", if sep.used_search { "yes" } else { "no" });
    push_valuation(&mut report, "", &sep.valuation);
    let _ = writeln!(report, "witness: {}", sep.witness);
    report
}

fn separate_cmd(lhs: &str, rhs: &str, json: bool) -> Result<(String, u8), Failure> {
    let w1 = parse_lit_word(lhs)?;
    let w2 = parse_lit_word(rhs)?;
    let separation = separate_words(&w1, &w2);
    Ok(separation_report(&w1, &w2, &separation, json))
}

#[derive(Serialize)]
struct Lang1Json {
    verdict: &'static str,
    #[serde(skip_serializing_if = "Option::is_none")]
    counterexample: Option<CounterexampleJson>,
}

fn lang1_cmd(lhs: &str, rhs: &str, json: bool) -> Result<(String, u8), Failure> {
    let w1 = parse_lit_word(lhs)?;
    let w2 = parse_lit_word(rhs)?;
    let verdict = lang1_decide(&w1, &w2).map_err(|e| usage(e.to_string()))?;
    let code = if verdict.is_valid() { 0 } else { 1 };
    if json {
        let payload = Lang1Json {
            verdict: verdict_name(&verdict),
            counterexample: match &verdict {
                Verdict::Refuted(cex) => Some(counterexample_json(cex)),
                _ => None,
            },
        };
        return Ok((json_line(&payload), code));
    }
    let mut report = String::new();
    let _ = writeln!(report, "lhs: {w1}");
    let _ = writeln!(report, "rhs: {w2}");
    let _ = writeln!(report, "result: {}", verdict_name(&verdict));
    if let Verdict::Refuted(cex) = &verdict {
        push_counterexample(&mut report, "", cex);
    }
    Ok((report, code))
}

fn lang2_cmd(lhs: &str, rhs: &str, json: bool) -> Result<(String, u8), Failure> {
    let w1 = parse_lit_word(lhs)?;
    let w2 = parse_lit_word(rhs)?;
    let separation = lang2_separate(&w1, &w2).map_err(|e| usage(e.to_string()))?;
    Ok(separation_report(&w1, &w2, &separation, json))
}

#[derive(Serialize)]
struct LangeqJson {
    equivalent: bool,
    separator: Option<String>,
}

fn render_symbols<S: std::fmt::Display>(symbols: &[S]) -> String {
    if symbols.is_empty() {
        return "I".to_string();
    }
    symbols.iter().map(|s| s.to_string()).collect::<Vec<_>>().join(" ")
}

fn langeq_cmd(lhs: &str, rhs: &str, over: Over, json: bool) -> Result<(String, u8), Failure> {
    let t1 = parse(lhs).map_err(syntax)?;
    let t2 = parse(rhs).map_err(syntax)?;
    let (equivalent, separator) = match over {
        Over::Vprime => {
            let a = nfa_over_vprime(&t1);
            let b = nfa_over_vprime(&t2);
            first_difference(&a, &b)
        }
        Over::V => {
            let declared: BTreeSet<Variable> =
                t1.variables().into_iter().chain(t2.variables()).collect();
            let a = nfa_over_v(&t1, &declared).expect("declared set covers all variables");
            let b = nfa_over_v(&t2, &declared).expect("declared set covers all variables");
            first_difference(&a, &b)
        }
    };
    let code = if equivalent { 0 } else { 1 };
    if json {
        return Ok((json_line(&LangeqJson { equivalent, separator }), code));
    }
    let mut report = String::new();
    let _ = writeln!(report, "equivalent: {equivalent}");
    if let Some(word) = &separator {
        let _ = writeln!(report, "separator: {word}");
    }
    Ok((report, code))
}

fn first_difference<S: Ord + Clone + std::fmt::Display>(
    a: &crate::classical::Nfa<S>,
    b: &crate::classical::Nfa<S>,
) -> (bool, Option<String>) {
    let (forward, witness) = lang_incl(a, b);
    if !forward {
        return (false, witness.as_deref().map(render_symbols));
    }
    let (backward, witness) = lang_incl(b, a);
    if !backward {
        return (false, witness.as_deref().map(render_symbols));
    }
    (true, None)
}

#[derive(Serialize)]
struct FromDnfJson {
    queries: Vec<String>,
}

fn from_dnf_cmd(text: &str, json: bool) -> Result<(String, u8), Failure> {
    let phi = Dnf::parse(text).map_err(syntax)?;
    let t = dnf_to_term(&phi);
    let identity = Query { lhs: Term::One, rhs: t.clone(), kind: QueryKind::Inequation };
    let z = fresh_variable("_z", &t.variables());
    let fresh = Query {
        lhs: Term::Var(z.clone()),
        rhs: Term::concat(Term::Var(z), t.clone()),
        kind: QueryKind::Inequation,
    };
    let top = top_expansion(&t.variables());
    let universal =
        Query { lhs: top.clone(), rhs: Term::concat(top, t), kind: QueryKind::Inequation };
    let queries = vec![identity.to_string(), fresh.to_string(), universal.to_string()];
    if json {
        return Ok((json_line(&FromDnfJson { queries }), 0));
    }
    Ok((queries.join("\n") + "\n", 0))
}

#[derive(Serialize)]
struct CriterionJson {
    id: &'static str,
    passed: bool,
    detail: String,
}

#[derive(Serialize)]
struct SelftestJson {
    passed: bool,
    criteria: Vec<CriterionJson>,
}

fn selftest_cmd(seed: u64, json: bool) -> (String, u8) {
    let reports = run_all(seed);
    let passed = reports.iter().filter(|r| r.passed).count();
    let all = passed == reports.len();
    let code = if all { 0 } else { 1 };
    if json {
        let payload = SelftestJson {
            passed: all,
            criteria: reports
                .into_iter()
                .map(|r| CriterionJson { id: r.id, passed: r.passed, detail: r.detail })
                .collect(),
        };
        return (json_line(&payload), code);
    }
    let mut report = String::new();
    for r in &reports {
        let _ = writeln!(report, "{}", r.line());
    }
    let _ = writeln!(report, "{passed} of {} criteria passed", reports.len());
    (report, code)
}

fn json_line(payload: &impl Serialize) -> String {
    let mut line = serde_json::to_string(payload).expect("payloads serialize infallibly");
    line.push('\n');
    line
}
