//! The `wpo` command line: every subcommand prints one JSON report on
//! standard output (or a text rendering of it with `--pretty`).
//!
//! Exit codes: 0 on success, 1 for a domain error or a failed check, 2 for
//! usage and parse errors.

use std::ffi::OsString;
use std::fmt::Debug;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand};
use serde::Serialize;
use serde_json::{json, Value};

use wpo_core::maxtype::{
    element_height, height, max_chain, max_order_type, mc_to_embedding, mle_extension,
    schmidt_extract, shuffle_embed, MaxTypeError, ShufflePresentation,
};
use wpo_core::oracle::{
    bad_tree_rank, desc_tree_rank, enumerate_linear_extensions, materialize, mc_by_recursion,
    mle_by_recursion, truncate_symbolic, truncate_term, OracleError, OracleLimits,
};
use wpo_core::ordinal::{BelowEnumerator, DEFAULT_DEPTH_CAP};
use wpo_core::selftest;
use wpo_core::truestage::{
    build_stage_order, check_interval_property, decode_membership, expand_prime,
    extract_descending, EnumFn, TrueStageError,
};
use wpo_core::{
    Classification, Element, FinitePoset, Ordinal, OrdinalError, PosetError, TermError, UnitList,
    WpoTerm,
};

pub const SCHEMA: &str = "wpo-report/1";

/// Invocations whose output is part of the documentation; `selftest` runs
/// each twice and compares the bytes.
pub const DOCUMENTED_EXAMPLES: &[&[&str]] = &[
    &["ord", "nsum", "w+1", "w"],
    &["ord", "add", "w+1", "w"],
    &["ord", "eval", "--normalize", "w+w^2+3"],
    &["ord", "fundseq", "w^(w)", "3"],
    &["ord", "classify", "w^2*2"],
    &["wpo", "otype", "ord(w) <+> ord(w+1)"],
    &["wpo", "height", "ord(w) ++ ord(w)"],
    &[
        "wpo",
        "mle",
        "ord(w+1) <+> ord(w)",
        "--at",
        "w*2",
        "--sample",
        "6",
    ],
    &["wpo", "chain", "ord(w) <+> ord(w^2)", "--sample", "5"],
    &["wpo", "elements", "fin{2;} <+> ord(w)", "--sample", "6"],
    &["oracle", "rank", "fin{3;}"],
    &["oracle", "mlerec", "fin{3; 0<1, 0<2}"],
    &[
        "oracle",
        "crosscheck",
        "(fin{3; 0<1} ++ ord(w)) <+> ord(w^2)",
        "2",
    ],
    &["truestage", "build", "5,3,4"],
    &["truestage", "decode", "0,2,4,6,8,10,12", "4"],
    &[
        "truestage",
        "interval",
        "0,1,2,3,4,5,6,7,8,9,10,11,12,13,14,15,16,17,18,19,20",
        "5,0",
        "6",
    ],
    &["mcatr", "demo", "w", "w^2", "--sample", "4"],
];

#[derive(Debug, Parser)]
#[command(
    name = "wpo",
    version,
    about = "Maximal linear extensions and chains of well partial orders"
)]
struct Cli {
    #[command(flatten)]
    global: Global,
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Args)]
struct Global {
    /// Render the report as indented text instead of JSON.
    #[arg(long, global = true)]
    pretty: bool,
    /// Largest explicit poset handed to the brute-force oracles.
    #[arg(long, global = true, default_value_t = 20)]
    max_size: usize,
    /// Largest ordinal nesting depth accepted by the parsers.
    #[arg(long, global = true, default_value_t = DEFAULT_DEPTH_CAP)]
    depth_cap: usize,
    /// Number of sampled rows in witness tables.
    #[arg(long, global = true, default_value_t = 20)]
    sample: usize,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Ordinal arithmetic in Cantor normal form.
    #[command(subcommand)]
    Ord(OrdCmd),
    /// Order types, heights and witnesses of terms.
    #[command(subcommand)]
    Wpo(WpoCmd),
    /// Brute-force computations on explicit finite posets.
    #[command(subcommand)]
    Oracle(OracleCmd),
    /// Embedding of a shuffle of two well-orders into a product.
    #[command(subcommand)]
    Shuffle(ShuffleCmd),
    /// Nested increasing-subsequence refinement of a triangular array.
    #[command(subcommand)]
    Schmidt(SchmidtCmd),
    /// Stage-wise linear order of a one-to-one enumeration.
    #[command(subcommand)]
    Truestage(TruestageCmd),
    /// Maximal chain of a disjoint union of two ordinals, as an embedding.
    #[command(subcommand)]
    Mcatr(McatrCmd),
    /// Run the self-test suite.
    Selftest {
        /// Run a single criterion.
        #[arg(long)]
        criterion: Option<usize>,
    },
}

#[derive(Debug, Subcommand)]
enum OrdCmd {
    Eval {
        text: String,
        /// Accept parts in any order and add them up.
        #[arg(long)]
        normalize: bool,
    },
    Cmp {
        a: String,
        b: String,
    },
    Add {
        a: String,
        b: String,
    },
    Nsum {
        a: String,
        b: String,
    },
    Mul {
        a: String,
        b: String,
    },
    /// ω raised to the argument.
    Pow {
        a: String,
    },
    /// The ρ with a + ρ = b.
    Sub {
        a: String,
        b: String,
    },
    Fundseq {
        lambda: String,
        n: u64,
    },
    Classify {
        a: String,
    },
}

#[derive(Debug, Subcommand)]
enum WpoCmd {
    Otype {
        term: String,
    },
    Height {
        term: String,
    },
    Mle {
        term: String,
        #[arg(long)]
        at: Option<String>,
    },
    Chain {
        term: String,
        #[arg(long)]
        at: Option<String>,
    },
    Elements {
        term: String,
    },
}

#[derive(Debug, Subcommand)]
enum OracleCmd {
    Rank {
        poset: String,
    },
    Descrank {
        poset: String,
    },
    Extensions {
        poset: String,
        #[arg(long, default_value_t = 100)]
        limit: usize,
    },
    Mlerec {
        poset: String,
    },
    Mcrec {
        poset: String,
    },
    Truncate {
        term: String,
        k: u64,
    },
    Crosscheck {
        term: String,
        #[arg(default_value_t = 3)]
        k: u64,
    },
}

#[derive(Debug, Subcommand)]
enum ShuffleCmd {
    /// FILE holds a JSON presentation; `-` reads standard input.
    Embed { file: PathBuf },
}

#[derive(Debug, Subcommand)]
enum SchmidtCmd {
    /// FILE holds `{"wpo": TERM, "rows": [[ELEMENT, ...], ...], "horizon": H}`.
    Extract { file: PathBuf },
}

#[derive(Debug, Subcommand)]
enum TruestageCmd {
    Build {
        f: String,
    },
    Truestages {
        f: String,
    },
    Decode {
        f: String,
        m: usize,
        /// Descending sequence of stages; defaults to the true stages.
        #[arg(long)]
        desc: Option<String>,
    },
    Prime {
        f: String,
    },
    /// X is a point `n,i` of the expanded order.
    Interval {
        f: String,
        x: String,
        k: usize,
    },
}

#[derive(Debug, Subcommand)]
enum McatrCmd {
    Demo { alpha: String, beta: String },
}

/// What a run printed and how it exited.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Outcome {
    pub code: i32,
    pub stdout: String,
    pub stderr: String,
}

#[derive(Debug)]
struct CliError {
    code: i32,
    kind: String,
    message: String,
}

impl CliError {
    fn usage(kind: impl Into<String>, message: impl ToString) -> Self {
        CliError {
            code: 2,
            kind: kind.into(),
            message: message.to_string(),
        }
    }

    fn domain(kind: impl Into<String>, message: impl ToString) -> Self {
        CliError {
            code: 1,
            kind: kind.into(),
            message: message.to_string(),
        }
    }
}

/// The enum variant name of an error, taken from its `Debug` form.
fn variant(e: &impl Debug) -> String {
    format!("{e:?}")
        .split(|c: char| !c.is_alphanumeric())
        .next()
        .unwrap_or_default()
        .to_string()
}

impl From<OrdinalError> for CliError {
    fn from(e: OrdinalError) -> Self {
        match e {
            OrdinalError::Syntax(_) | OrdinalError::DepthExceeded { .. } => {
                CliError::usage(variant(&e), e)
            }
            _ => CliError::domain(variant(&e), e),
        }
    }
}

impl From<PosetError> for CliError {
    fn from(e: PosetError) -> Self {
        CliError::usage(variant(&e), e)
    }
}

impl From<TermError> for CliError {
    fn from(e: TermError) -> Self {
        match e {
            TermError::Ordinal(inner) => inner.into(),
            TermError::InvalidPoset(inner) => inner.into(),
            TermError::Syntax(_) => CliError::usage("Syntax", e),
            TermError::ElementMismatch { .. } => CliError::domain("ElementMismatch", e),
        }
    }
}

impl From<OracleError> for CliError {
    fn from(e: OracleError) -> Self {
        match e {
            OracleError::Poset(inner) => inner.into(),
            _ => CliError::domain(variant(&e), e),
        }
    }
}

impl From<MaxTypeError> for CliError {
    fn from(e: MaxTypeError) -> Self {
        match e {
            MaxTypeError::Term(inner) => inner.into(),
            MaxTypeError::Oracle(inner) => inner.into(),
            _ => CliError::domain(variant(&e), e),
        }
    }
}

impl From<TrueStageError> for CliError {
    fn from(e: TrueStageError) -> Self {
        match e {
            TrueStageError::Syntax(_) | TrueStageError::InvalidTable(_) => {
                CliError::usage(variant(&e), e)
            }
            _ => CliError::domain(variant(&e), e),
        }
    }
}

#[derive(Debug, Serialize)]
struct Check {
    name: String,
    passed: bool,
    #[serde(skip_serializing_if = "Value::is_null")]
    witness: Value,
}

fn check(name: &str, passed: bool, witness: Value) -> Check {
    Check {
        name: name.to_string(),
        passed,
        witness,
    }
}

#[derive(Debug, Serialize)]
struct ErrorInfo {
    kind: String,
    message: String,
}

#[derive(Debug, Serialize)]
struct Report {
    schema: &'static str,
    version: &'static str,
    command: String,
    inputs: Value,
    #[serde(skip_serializing_if = "Option::is_none")]
    result: Option<Value>,
    #[serde(skip_serializing_if = "Vec::is_empty")]
    checks: Vec<Check>,
    #[serde(skip_serializing_if = "Option::is_none")]
    error: Option<ErrorInfo>,
}

/// Result of one subcommand before it is wrapped into a [`Report`].
struct Output {
    inputs: Value,
    result: Value,
    checks: Vec<Check>,
}

impl Output {
    fn new(inputs: Value, result: Value) -> Self {
        Output {
            inputs,
            result,
            checks: Vec::new(),
        }
    }

    fn with_checks(mut self, checks: Vec<Check>) -> Self {
        self.checks = checks;
        self
    }
}

pub fn run<I, T>(args: I) -> Outcome
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let text = e.render().to_string();
            return if e.use_stderr() {
                Outcome {
                    code: 2,
                    stdout: String::new(),
                    stderr: text,
                }
            } else {
                Outcome {
                    code: 0,
                    stdout: text,
                    stderr: String::new(),
                }
            };
        }
    };
    let command = command_name(&cli.command);
    let (code, report) = match dispatch(&cli) {
        Ok(out) => {
            let code = if out.checks.iter().all(|c| c.passed) {
                0
            } else {
                1
            };
            (
                code,
                Report {
                    schema: SCHEMA,
                    version: env!("CARGO_PKG_VERSION"),
                    command,
                    inputs: out.inputs,
                    result: Some(out.result),
                    checks: out.checks,
                    error: None,
                },
            )
        }
        Err(e) => (
            e.code,
            Report {
                schema: SCHEMA,
                version: env!("CARGO_PKG_VERSION"),
                command,
                inputs: Value::Null,
                result: None,
                checks: Vec::new(),
                error: Some(ErrorInfo {
                    kind: e.kind,
                    message: e.message,
                }),
            },
        ),
    };
    let value = serde_json::to_value(&report).expect("reports serialize");
    let stdout = if cli.global.pretty {
        let mut s = String::new();
        render_text(&value, 0, &mut s);
        s
    } else {
        format!("{value}\n")
    };
    Outcome {
        code,
        stdout,
        stderr: String::new(),
    }
}

fn command_name(c: &Command) -> String {
    let (group, op) = match c {
        Command::Ord(op) => ("ord", variant(op)),
        Command::Wpo(op) => ("wpo", variant(op)),
        Command::Oracle(op) => ("oracle", variant(op)),
        Command::Shuffle(op) => ("shuffle", variant(op)),
        Command::Schmidt(op) => ("schmidt", variant(op)),
        Command::Truestage(op) => ("truestage", variant(op)),
        Command::Mcatr(op) => ("mcatr", variant(op)),
        Command::Selftest { .. } => return "selftest".into(),
    };
    format!("{group} {}", op.to_lowercase())
}

/// YAML-like indented rendering of a JSON value.
fn render_text(v: &Value, indent: usize, out: &mut String) {
    let pad = "  ".repeat(indent);
    match v {
        Value::Object(map) => {
            for (k, v) in map {
                match v {
                    Value::Object(m) if !m.is_empty() => {
                        out.push_str(&format!("{pad}{k}:\n"));
                        render_text(v, indent + 1, out);
                    }
                    Value::Array(a) if !a.is_empty() => {
                        out.push_str(&format!("{pad}{k}:\n"));
                        render_text(v, indent + 1, out);
                    }
                    _ => out.push_str(&format!("{pad}{k}: {}\n", scalar(v))),
                }
            }
        }
        Value::Array(items) => {
            for item in items {
                match item {
                    Value::Object(_) | Value::Array(_) => {
                        out.push_str(&format!("{pad}-\n"));
                        render_text(item, indent + 1, out);
                    }
                    _ => out.push_str(&format!("{pad}- {}\n", scalar(item))),
                }
            }
        }
        _ => out.push_str(&format!("{pad}{}\n", scalar(v))),
    }
}

fn scalar(v: &Value) -> String {
    match v {
        Value::String(s) => s.clone(),
        Value::Array(_) => "[]".into(),
        Value::Object(_) => "{}".into(),
        other => other.to_string(),
    }
}

fn dispatch(cli: &Cli) -> Result<Output, CliError> {
    let g = &cli.global;
    match &cli.command {
        Command::Ord(op) => ord_command(op, g),
        Command::Wpo(op) => wpo_command(op, g),
        Command::Oracle(op) => oracle_command(op, g),
        Command::Shuffle(ShuffleCmd::Embed { file }) => shuffle_command(file),
        Command::Schmidt(SchmidtCmd::Extract { file }) => schmidt_command(file, g),
        Command::Truestage(op) => truestage_command(op),
        Command::Mcatr(McatrCmd::Demo { alpha, beta }) => {
            let (a, b) = (ordinal(alpha, g)?, ordinal(beta, g)?);
            let demo = mc_to_embedding(&a, &b, g.sample);
            let checks = vec![check(
                "order preserved on samples",
                demo.order_preserved,
                json!(demo.pairs_checked),
            )];
            Ok(Output::new(
                json!({"alpha": a.to_string(), "beta": b.to_string()}),
                json!(demo),
            )
            .with_checks(checks))
        }
        Command::Selftest { criterion } => selftest_command(*criterion),
    }
}

fn ordinal(text: &str, g: &Global) -> Result<Ordinal, CliError> {
    Ok(Ordinal::parse_with_cap(text, g.depth_cap)?)
}

fn term(text: &str, g: &Global) -> Result<WpoTerm, CliError> {
    Ok(WpoTerm::parse_with_cap(text, g.depth_cap)?)
}

fn element(text: &str) -> Result<Element, CliError> {
    Ok(Element::parse(text)?)
}

fn limits(g: &Global) -> OracleLimits {
    OracleLimits {
        rank_cap: g.max_size,
        ..OracleLimits::default()
    }
}

fn ord_command(op: &OrdCmd, g: &Global) -> Result<Output, CliError> {
    let s = |o: &Ordinal| Value::String(o.to_string());
    let two = |a: &str, b: &str| -> Result<(Ordinal, Ordinal, Value), CliError> {
        let (x, y) = (ordinal(a, g)?, ordinal(b, g)?);
        let inputs = json!({"a": x.to_string(), "b": y.to_string()});
        Ok((x, y, inputs))
    };
    Ok(match op {
        OrdCmd::Eval { text, normalize } => {
            let a = if *normalize {
                Ordinal::parse_normalizing(text, g.depth_cap)?
            } else {
                ordinal(text, g)?
            };
            let back = Ordinal::parse(&a.to_string()).ok() == Some(a.clone());
            Output::new(json!({"text": text, "normalize": normalize}), s(&a))
                .with_checks(vec![check("canonical text parses back", back, Value::Null)])
        }
        OrdCmd::Cmp { a, b } => {
            let (x, y, inputs) = two(a, b)?;
            let r = match x.cmp(&y) {
                std::cmp::Ordering::Less => "less",
                std::cmp::Ordering::Equal => "equal",
                std::cmp::Ordering::Greater => "greater",
            };
            Output::new(inputs, json!(r))
        }
        OrdCmd::Add { a, b } => {
            let (x, y, inputs) = two(a, b)?;
            Output::new(inputs, s(&x.add(&y)))
        }
        OrdCmd::Nsum { a, b } => {
            let (x, y, inputs) = two(a, b)?;
            let sum = x.nat_sum(&y);
            let mut units = x.to_units().exponents().to_vec();
            units.extend(y.to_units().exponents().iter().cloned());
            units.sort_by(|p, q| q.cmp(p));
            let merged = UnitList::new(units).map(|u| Ordinal::from_units(&u));
            let ok = merged.as_ref() == Ok(&sum);
            Output::new(inputs, s(&sum)).with_checks(vec![check(
                "merge of unit lists",
                ok,
                Value::Null,
            )])
        }
        OrdCmd::Mul { a, b } => {
            let (x, y, inputs) = two(a, b)?;
            Output::new(inputs, s(&x.mul(&y)))
        }
        OrdCmd::Pow { a } => {
            let x = ordinal(a, g)?;
            Output::new(json!({"a": x.to_string()}), s(&Ordinal::omega_pow(x)))
        }
        OrdCmd::Sub { a, b } => {
            let (x, y, inputs) = two(a, b)?;
            let d = x.left_sub(&y)?;
            let ok = x.add(&d) == y;
            Output::new(inputs, s(&d)).with_checks(vec![check("a + result = b", ok, Value::Null)])
        }
        OrdCmd::Fundseq { lambda, n } => {
            let l = ordinal(lambda, g)?;
            let x = l.fund_seq(*n)?;
            let next = l.fund_seq(n + 1)?;
            Output::new(json!({"lambda": l.to_string(), "n": n}), s(&x)).with_checks(vec![check(
                "increasing and below the limit",
                x < next && next < l,
                json!(next.to_string()),
            )])
        }
        OrdCmd::Classify { a } => {
            let x = ordinal(a, g)?;
            let c = match x.classify() {
                Classification::Zero => "zero",
                Classification::Successor => "successor",
                Classification::Limit => "limit",
            };
            Output::new(json!({"a": x.to_string()}), json!(c))
        }
    })
}

fn wpo_command(op: &WpoCmd, g: &Global) -> Result<Output, CliError> {
    let input = |t: &WpoTerm| json!({"term": t.to_string()});
    Ok(match op {
        WpoCmd::Otype { term: text } => {
            let t = term(text, g)?;
            Output::new(input(&t), json!(max_order_type(&t).to_string()))
        }
        WpoCmd::Height { term: text } => {
            let t = term(text, g)?;
            Output::new(input(&t), json!(height(&t).to_string()))
        }
        WpoCmd::Elements { term: text } => {
            let t = term(text, g)?;
            let xs: Vec<String> = t
                .enumerate_elements(g.sample)
                .iter()
                .map(|x| x.to_string())
                .collect();
            Output::new(input(&t), json!(xs))
        }
        WpoCmd::Mle { term: text, at } => {
            let t = term(text, g)?;
            let ext = mle_extension(&t, &limits(g))?;
            let elems = t.enumerate_elements(g.sample);
            let mut rows = Vec::new();
            let mut positions = Vec::new();
            for x in &elems {
                let xi = ext.position(x)?;
                rows.push(json!({"element": x.to_string(), "position": xi.to_string()}));
                positions.push(xi);
            }
            let mut monotone = true;
            let mut pairs = 0;
            for (i, x) in elems.iter().enumerate() {
                for (j, y) in elems.iter().enumerate() {
                    if i != j && t.leq(x, y)? {
                        pairs += 1;
                        monotone &= positions[i] < positions[j];
                    }
                }
            }
            let round_trip = elems
                .iter()
                .zip(&positions)
                .all(|(x, xi)| ext.element_at(xi).ok().as_ref() == Some(x));
            let mut result = json!({"order_type": ext.order_type().to_string(), "rows": rows});
            if let Some(xi) = at {
                let xi = ordinal(xi, g)?;
                let x = ext.element_at(&xi)?;
                result["at"] = json!({"position": xi.to_string(), "element": x.to_string()});
            }
            Output::new(input(&t), result).with_checks(vec![
                check("extends the order on sampled pairs", monotone, json!(pairs)),
                check("element_at inverts position", round_trip, Value::Null),
                check(
                    "order type is o(P)",
                    *ext.order_type() == max_order_type(&t),
                    Value::Null,
                ),
            ])
        }
        WpoCmd::Chain { term: text, at } => {
            let t = term(text, g)?;
            let chain = max_chain(&t, &limits(g))?;
            let mut heights = BelowEnumerator::new().first_below(chain.order_type(), g.sample);
            heights.sort();
            let mut rows = Vec::new();
            let mut points = Vec::new();
            let mut heights_ok = true;
            for xi in &heights {
                let x = chain.element_at(xi)?;
                let h = element_height(&t, &x)?;
                heights_ok &= h == *xi;
                rows.push(json!({"position": xi.to_string(), "element": x.to_string(), "height": h.to_string()}));
                points.push(x);
            }
            let mut ordered = true;
            for (i, x) in points.iter().enumerate() {
                for (j, y) in points.iter().enumerate() {
                    if heights[i] < heights[j] {
                        ordered &= t.leq(x, y)? && x != y;
                    }
                }
            }
            let mut result = json!({"height": chain.order_type().to_string(), "rows": rows});
            if let Some(xi) = at {
                let xi = ordinal(xi, g)?;
                let x = chain.element_at(&xi)?;
                result["at"] = json!({"position": xi.to_string(), "element": x.to_string()});
            }
            Output::new(input(&t), result).with_checks(vec![
                check("sampled points form a chain", ordered, Value::Null),
                check(
                    "each point has its position as height",
                    heights_ok,
                    Value::Null,
                ),
                check(
                    "length is ht(P)",
                    *chain.order_type() == height(&t),
                    Value::Null,
                ),
            ])
        }
    })
}

/// An explicit poset from a term whose ordinal leaves are all finite.
fn finite_poset(text: &str, g: &Global) -> Result<(WpoTerm, FinitePoset), CliError> {
    let t = term(text, g)?;
    match t.carrier_size() {
        None => Err(CliError::domain(
            "InfiniteTerm",
            "the oracle needs a term with finite leaves; see `oracle truncate`",
        )),
        Some(n) if n > g.max_size as u64 => Err(OracleError::SizeLimit {
            size: n.min(usize::MAX as u64) as usize,
            cap: g.max_size,
        }
        .into()),
        Some(_) => {
            let p = materialize(&t)?;
            Ok((t, p))
        }
    }
}

fn oracle_command(op: &OracleCmd, g: &Global) -> Result<Output, CliError> {
    let lim = limits(g);
    let input =
        |t: &WpoTerm, p: &FinitePoset| json!({"term": t.to_string(), "poset": p.to_string()});
    Ok(match op {
        OracleCmd::Rank { poset } => {
            let (t, p) = finite_poset(poset, g)?;
            let r = bad_tree_rank(&p, &lim)?;
            Output::new(input(&t, &p), json!(r))
        }
        OracleCmd::Descrank { poset } => {
            let (t, p) = finite_poset(poset, g)?;
            Output::new(input(&t, &p), json!(desc_tree_rank(&p)))
        }
        OracleCmd::Extensions { poset, limit } => {
            let (t, p) = finite_poset(poset, g)?;
            let exts = enumerate_linear_extensions(&p, *limit, &lim)?;
            Output::new(
                input(&t, &p),
                json!({"count": exts.len(), "extensions": exts}),
            )
        }
        OracleCmd::Mlerec { poset } => {
            let (t, p) = finite_poset(poset, g)?;
            let ext = mle_by_recursion(&p, &lim)?;
            let ok = wpo_core::oracle::is_linear_extension(&p, &ext);
            Output::new(input(&t, &p), json!(ext)).with_checks(vec![check(
                "is a linear extension",
                ok,
                Value::Null,
            )])
        }
        OracleCmd::Mcrec { poset } => {
            let (t, p) = finite_poset(poset, g)?;
            let chain = mc_by_recursion(&p, &lim)?;
            let ok = wpo_core::oracle::is_chain(&p, &chain) && chain.len() == desc_tree_rank(&p);
            Output::new(input(&t, &p), json!(chain)).with_checks(vec![check(
                "is a longest chain",
                ok,
                Value::Null,
            )])
        }
        OracleCmd::Truncate { term: text, k } => {
            let t = term(text, g)?;
            let p = truncate_term(&t, *k, &lim)?;
            Output::new(
                json!({"term": t.to_string(), "k": k}),
                json!({"term": truncate_symbolic(&t, *k).to_string(), "poset": p.to_string(), "size": p.size()}),
            )
        }
        OracleCmd::Crosscheck { term: text, k } => {
            let t = term(text, g)?;
            let small = truncate_symbolic(&t, *k);
            let p = truncate_term(&t, *k, &lim)?;
            let rank = bad_tree_rank(&p, &lim)?;
            let desc = desc_tree_rank(&p);
            let (o, h) = (max_order_type(&small), height(&small));
            Output::new(
                json!({"term": t.to_string(), "k": k}),
                json!({
                    "truncated": small.to_string(),
                    "size": p.size(),
                    "order_type": o.to_string(),
                    "bad_tree_rank": rank,
                    "height": h.to_string(),
                    "desc_tree_rank": desc,
                }),
            )
            .with_checks(vec![
                check(
                    "o(P) equals the rank of Bad(P)",
                    o == Ordinal::from(rank as u64),
                    Value::Null,
                ),
                check(
                    "ht(P) equals the rank of Desc(P)",
                    h == Ordinal::from(desc as u64),
                    Value::Null,
                ),
            ])
        }
    })
}

fn read_input(file: &Path) -> Result<String, CliError> {
    if file == Path::new("-") {
        let mut s = String::new();
        std::io::Read::read_to_string(&mut std::io::stdin(), &mut s)
            .map_err(|e| CliError::usage("Io", e))?;
        Ok(s)
    } else {
        std::fs::read_to_string(file)
            .map_err(|e| CliError::usage("Io", format!("{}: {e}", file.display())))
    }
}

fn shuffle_command(file: &Path) -> Result<Output, CliError> {
    let text = read_input(file)?;
    let p: ShufflePresentation =
        serde_json::from_str(&text).map_err(|e| CliError::usage("Json", e))?;
    let report = shuffle_embed(&p).map_err(|e| CliError::domain(variant(&e), e))?;
    let pairs = report.pairs_checked;
    Ok(
        Output::new(json!({"file": file.display().to_string()}), json!(report)).with_checks(vec![
            check("order preserved on every sampled pair", true, json!(pairs)),
        ]),
    )
}

#[derive(serde::Deserialize)]
struct SchmidtInput {
    wpo: String,
    rows: Vec<Vec<String>>,
    horizon: usize,
}

fn schmidt_command(file: &Path, g: &Global) -> Result<Output, CliError> {
    let text = read_input(file)?;
    let input: SchmidtInput =
        serde_json::from_str(&text).map_err(|e| CliError::usage("Json", e))?;
    let t = term(&input.wpo, g)?;
    let mut rows = Vec::with_capacity(input.rows.len());
    for row in &input.rows {
        let mut parsed = Vec::with_capacity(row.len());
        for cell in row {
            let x = element(cell)?;
            if !t.validate_element(&x) {
                return Err(CliError::domain(
                    "ElementMismatch",
                    format!("{x} does not address a point of {t}"),
                ));
            }
            parsed.push(x);
        }
        rows.push(parsed);
    }
    let leq = |a: &Element, b: &Element| t.leq(a, b).expect("validated");
    let res =
        schmidt_extract(&rows, input.horizon, leq).map_err(|e| CliError::domain(variant(&e), e))?;
    let verbatim = res
        .g
        .windows(2)
        .enumerate()
        .all(|(j, w)| w[0] < w[1] && leq(&rows[w[0]][j], &rows[w[1]][j]));
    Ok(Output::new(
        json!({"wpo": t.to_string(), "horizon": input.horizon}),
        json!(res),
    )
    .with_checks(vec![check(
        "y[g(j)][j] <= y[g(j+1)][j] for every j",
        verbatim,
        Value::Null,
    )]))
}

fn stage_list(text: &str) -> Result<Vec<usize>, CliError> {
    text.split(',')
        .map(|s| {
            s.trim()
                .parse::<usize>()
                .map_err(|e| CliError::usage("Syntax", format!("{s:?}: {e}")))
        })
        .collect()
}

fn truestage_command(op: &TruestageCmd) -> Result<Output, CliError> {
    let table = |f: &str| -> Result<EnumFn, CliError> { Ok(EnumFn::parse(f)?) };
    let input = |f: &EnumFn| json!({"f": f.table(), "horizon": f.horizon()});
    Ok(match op {
        TruestageCmd::Build { f } => {
            let f = table(f)?;
            let order = build_stage_order(&f);
            Output::new(input(&f), json!(order.order()))
        }
        TruestageCmd::Truestages { f } => {
            let f = table(f)?;
            let order = build_stage_order(&f);
            let desc = extract_descending(&f);
            let ok = desc.windows(2).all(|w| order.lt(w[1], w[0]));
            Output::new(input(&f), json!({"horizon_true_stages": desc})).with_checks(vec![check(
                "strictly descending in the stage order",
                ok,
                Value::Null,
            )])
        }
        TruestageCmd::Decode { f, m, desc } => {
            let f = table(f)?;
            let desc = match desc {
                Some(d) => stage_list(d)?,
                None => extract_descending(&f),
            };
            let d = decode_membership(&f, &desc, *m)?;
            let holds = d.bound_holds;
            Output::new(json!({"f": f.table(), "desc": desc, "m": m}), json!(d))
                .with_checks(vec![check("f(s_m) >= m", holds, json!(f.value(d.bound)))])
        }
        TruestageCmd::Prime { f } => {
            let f = table(f)?;
            let lp = expand_prime(&build_stage_order(&f));
            Output::new(input(&f), json!(lp))
        }
        TruestageCmd::Interval { f, x, k } => {
            let f = table(f)?;
            let point = match stage_list(x)?.as_slice() {
                &[n, i] if i <= n => (n, i),
                _ => {
                    return Err(CliError::usage(
                        "Syntax",
                        format!("{x:?} is not a point `n,i` with i <= n"),
                    ))
                }
            };
            let lp = expand_prime(&build_stage_order(&f));
            let w = check_interval_property(&lp, &f, point, *k)?;
            Output::new(
                json!({"f": f.table(), "x": [point.0, point.1], "k": k}),
                json!(w),
            )
            .with_checks(vec![check(
                "interval larger than k",
                w.interval_size > *k,
                Value::Null,
            )])
        }
    })
}

fn determinism_report() -> selftest::CriterionReport {
    let mut tally = selftest::Tally::default();
    for args in DOCUMENTED_EXAMPLES {
        let argv: Vec<&str> = std::iter::once("wpo").chain(args.iter().copied()).collect();
        let first = run(&argv);
        let second = run(&argv);
        tally.cases += 1;
        if first != second || first.code != 0 {
            tally.failures += 1;
            tally.examples.push(args.join(" "));
        }
    }
    selftest::CriterionReport {
        id: 12,
        name: "determinism",
        passed: tally.failures == 0,
        tally,
    }
}

fn selftest_command(criterion: Option<usize>) -> Result<Output, CliError> {
    let reports = match criterion {
        Some(12) => vec![determinism_report()],
        Some(id @ 1..=11) => vec![selftest::run_criterion(id)],
        Some(id) => {
            return Err(CliError::usage(
                "NoSuchCriterion",
                format!("no criterion {id}"),
            ))
        }
        None => {
            let mut all = selftest::run_all();
            all.push(determinism_report());
            all
        }
    };
    let checks = reports
        .iter()
        .map(|r| {
            check(
                &format!("criterion {} ({})", r.id, r.name),
                r.passed,
                json!(r.tally.cases),
            )
        })
        .collect();
    let passed = reports.iter().all(|r| r.passed);
    Ok(Output::new(
        json!({"criterion": criterion}),
        json!({"passed": passed, "criteria": reports}),
    )
    .with_checks(checks))
}
