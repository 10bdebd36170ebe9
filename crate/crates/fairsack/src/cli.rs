//! The `fairsack` command line.
//!
//! Exit status is 0 on success, 1 when the input is well formed but fails a
//! mathematical check (an unfair sack, a non-semifair die, an oracle
//! disagreement), and 2 for usage errors and unreadable input.

use std::ffi::OsString;
use std::io::Read;

use clap::{Args, CommandFactory, Parser, Subcommand};
use fairsack_core::construct::{
    canonicalize, partition_sack, prime_refine, IntervalPartition, OrderedFactorization, Sack,
};
use fairsack_core::decompose::{
    atomize, decompose_sack, die_membership, sumset_atomizations, DEFAULT_ATOMIZATION_LIMIT,
};
use fairsack_core::enumerate::{
    brute_force_fair_sacks_bounded, EnumerationResult, DEFAULT_ORACLE_BOUND, MAX_ORACLE_BOUND,
};
use fairsack_core::poly::SupportPoly;
use fairsack_core::verify::{check_fair, check_gk, FairnessReport};
use serde::Serialize;

use crate::format::{
    parse_dice, parse_die, ChainJson, DecompositionJson, FactorizationJson, FairnessReportJson,
    FormatError, InputDie, SackJson,
};
use crate::parallel::{enumerate_with_jobs, same_sacks};
use crate::render::{self, Separator};

#[derive(Debug, Parser)]
#[command(name = "fairsack", version, about = "Dice sacks whose totals are uniformly distributed")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Ordered factorizations of t + 1 with their factorization sacks.
    Table {
        #[command(flatten)]
        size: Size,
        #[command(flatten)]
        output: Output,
    },
    /// Builds the sack of a factorization and partition.
    Construct(ConstructArgs),
    /// Checks a sack for uniform totals and reports every collision.
    Verify {
        /// Sack JSON: a file path, inline JSON, or "-" for stdin.
        input: Option<String>,
        #[command(flatten)]
        output: Output,
    },
    /// Recovers the factorization and interval-free partition of a fair sack.
    Decompose {
        /// Sack JSON: a file path, inline JSON, or "-" for stdin.
        input: Option<String>,
        #[command(flatten)]
        output: Output,
    },
    /// Lists every fair sack with a given total.
    Enumerate(EnumerateArgs),
    /// Splits a fair sack into prime dice, or lists sumset atomizations of a die.
    Atomize(AtomizeArgs),
    /// Decides whether a die belongs to some fair sack.
    Member {
        /// Die JSON or polynomial: a file path, inline text, or "-" for stdin.
        input: Option<String>,
        #[command(flatten)]
        output: Output,
    },
}

#[derive(Debug, Args)]
#[group(required = true, multiple = false)]
pub struct Size {
    /// Number of totals, t + 1.
    #[arg(long, value_parser = clap::value_parser!(u64).range(1..))]
    pub tplus1: Option<u64>,
    /// Largest total t.
    #[arg(long)]
    pub total: Option<u64>,
}

impl Size {
    fn tplus1(&self) -> Result<u64, Failure> {
        match (self.tplus1, self.total) {
            (Some(n), _) => Ok(n),
            (None, Some(t)) => t.checked_add(1).ok_or_else(|| Failure::usage("--total is too large")),
            (None, None) => Err(Failure::usage("one of --tplus1 or --total is required")),
        }
    }
}

#[derive(Debug, Args, Default)]
pub struct Output {
    /// JSON output.
    #[arg(long, conflicts_with_all = ["table", "csv"])]
    pub json: bool,
    /// Plain-text output.
    #[arg(long, conflicts_with = "csv")]
    pub table: bool,
    /// CSV output (table and enumerate).
    #[arg(long)]
    pub csv: bool,
    /// Write factorizations as 2*2*3 instead of 2·2·3.
    #[arg(long)]
    pub ascii: bool,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
enum Format {
    Json,
    Table,
    Csv,
}

impl Output {
    fn format(&self, default: Format) -> Format {
        if self.json {
            Format::Json
        } else if self.table {
            Format::Table
        } else if self.csv {
            Format::Csv
        } else {
            default
        }
    }

    fn separator(&self) -> Separator {
        if self.ascii {
            Separator::Ascii
        } else {
            Separator::Dot
        }
    }
}

#[derive(Debug, Args)]
pub struct ConstructArgs {
    /// Factorization JSON {"a": [...], "blocks": [[...]]}, used when --a is absent.
    pub input: Option<String>,
    /// Factors, e.g. "2,2,3" or "2*2*3".
    #[arg(long)]
    pub a: Option<String>,
    /// Partition of factor positions, e.g. "[{1,3},{2}]"; singletons by default.
    #[arg(long, requires = "a")]
    pub blocks: Option<String>,
    /// Merge runs of consecutive factors in one block first.
    #[arg(long, conflicts_with = "prime")]
    pub canonicalize: bool,
    /// Split every factor into primes first.
    #[arg(long)]
    pub prime: bool,
    #[command(flatten)]
    pub output: Output,
}

#[derive(Debug, Args)]
pub struct EnumerateArgs {
    #[command(flatten)]
    pub size: Size,
    /// Cross-check against a direct search over dice.
    #[arg(long)]
    pub oracle: bool,
    /// Largest t + 1 the direct search accepts.
    #[arg(long, default_value_t = DEFAULT_ORACLE_BOUND,
          value_parser = clap::value_parser!(u64).range(1..=MAX_ORACLE_BOUND))]
    pub bound: u64,
    /// Worker threads.
    #[arg(long, default_value_t = 1, value_parser = clap::value_parser!(u16).range(1..))]
    pub jobs: u16,
    #[command(flatten)]
    pub output: Output,
}

#[derive(Debug, Args)]
pub struct AtomizeArgs {
    /// Sack JSON, or die JSON with --sumset.
    pub input: Option<String>,
    /// List the sumset atomizations of one die.
    #[arg(long)]
    pub sumset: bool,
    /// Stop after this many atomizations.
    #[arg(long, default_value_t = DEFAULT_ATOMIZATION_LIMIT)]
    pub limit: usize,
    #[command(flatten)]
    pub output: Output,
}

/// Exit status and everything the command printed.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Outcome {
    pub code: i32,
    pub stdout: String,
    pub stderr: String,
}

#[derive(Debug)]
struct Failure {
    code: i32,
    message: String,
    /// Output produced before the failure was detected.
    stdout: String,
}

impl Failure {
    fn usage(message: impl Into<String>) -> Self {
        Self { code: 2, message: message.into(), stdout: String::new() }
    }

    fn domain(message: impl Into<String>) -> Self {
        Self { code: 1, message: message.into(), stdout: String::new() }
    }
}

impl From<FormatError> for Failure {
    fn from(e: FormatError) -> Self {
        let code = match e {
            FormatError::Json(_) | FormatError::Support(_) | FormatError::Rational(_) => 2,
            FormatError::Die(_) | FormatError::Sack(_) => 1,
        };
        Self { code, message: e.to_string(), stdout: String::new() }
    }
}

/// Parses `args` (including the program name) and runs the command.
pub fn run_args<I, T>(args: I, stdin: &mut dyn Read) -> Outcome
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let args: Vec<OsString> = args.into_iter().map(Into::into).collect();
    match Cli::try_parse_from(&args) {
        Ok(cli) => run(cli, stdin),
        Err(e) => {
            let text = e.render().to_string();
            if e.use_stderr() {
                Outcome { code: 2, stdout: String::new(), stderr: usage_error(&text, &args) }
            } else {
                Outcome { code: 0, stdout: text, stderr: String::new() }
            }
        }
    }
}

/// Appends the help of the subcommand in use, so the accepted flags are listed.
fn usage_error(message: &str, args: &[OsString]) -> String {
    let mut root = Cli::command();
    let name = args
        .iter()
        .skip(1)
        .filter_map(|a| a.to_str())
        .find(|a| root.find_subcommand(a).is_some())
        .map(str::to_string);
    let help = match name {
        Some(n) => root.find_subcommand_mut(&n).expect("found above").render_help(),
        None => root.render_help(),
    };
    format!("{message}\n{help}")
}

pub fn run(cli: Cli, stdin: &mut dyn Read) -> Outcome {
    match dispatch(cli.command, stdin) {
        Ok(stdout) => Outcome { code: 0, stdout, stderr: String::new() },
        Err(f) => Outcome { code: f.code, stdout: f.stdout, stderr: format!("error: {}\n", f.message) },
    }
}

fn dispatch(command: Command, stdin: &mut dyn Read) -> Result<String, Failure> {
    match command {
        Command::Table { size, output } => table(&size, &output),
        Command::Construct(args) => construct(&args, stdin),
        Command::Verify { input, output } => verify(&read_input(input.as_deref(), stdin)?, &output),
        Command::Decompose { input, output } => {
            decompose(&read_input(input.as_deref(), stdin)?, &output)
        }
        Command::Enumerate(args) => enumerate(&args),
        Command::Atomize(args) => {
            let text = read_input(args.input.as_deref(), stdin)?;
            atomize_cmd(&text, &args)
        }
        Command::Member { input, output } => member(&read_input(input.as_deref(), stdin)?, &output),
    }
}

/// Input is stdin for `-` or nothing, inline when it looks like JSON or a
/// polynomial, and a file path otherwise.
fn read_input(input: Option<&str>, stdin: &mut dyn Read) -> Result<String, Failure> {
    match input {
        None | Some("-") => {
            let mut text = String::new();
            stdin
                .read_to_string(&mut text)
                .map_err(|e| Failure::usage(format!("cannot read stdin: {e}")))?;
            Ok(text)
        }
        Some(s) if s.trim_start().starts_with(['[', '{', '"']) => Ok(s.to_string()),
        Some(s) if !std::path::Path::new(s).exists() && looks_like_poly(s) => Ok(s.to_string()),
        Some(path) => std::fs::read_to_string(path)
            .map_err(|e| Failure::usage(format!("cannot read {path}: {e}"))),
    }
}

fn looks_like_poly(s: &str) -> bool {
    s.contains('x') && s.chars().all(|c| c.is_ascii_digit() || "x^+{}() ".contains(c))
}

fn json<T: Serialize>(value: &T) -> String {
    let mut s = serde_json::to_string(value).expect("serializable");
    s.push('\n');
    s
}

fn no_csv(format: Format, command: &str) -> Result<(), Failure> {
    if format == Format::Csv {
        return Err(Failure::usage(format!("{command} has no CSV output")));
    }
    Ok(())
}

fn table(size: &Size, output: &Output) -> Result<String, Failure> {
    let n = size.tplus1()?;
    let sep = output.separator();
    Ok(match output.format(Format::Table) {
        Format::Table => render::table_text(n, sep),
        Format::Csv => render::table_csv(n, sep),
        Format::Json => {
            let rows: Vec<SackJson> = fairsack_core::enumerate::ordered_factorizations(n)
                .iter()
                .map(|a| {
                    let sack = fairsack_core::construct::factorization_sack(a);
                    SackJson::described(&sack, a, &IntervalPartition::singletons(a.len()))
                })
                .collect();
            json(&rows)
        }
    })
}

fn construct(args: &ConstructArgs, stdin: &mut dyn Read) -> Result<String, Failure> {
    let domain = |e: fairsack_core::ConstructError| Failure::domain(e.to_string());
    let (a, p) = match &args.a {
        Some(text) => {
            let a: OrderedFactorization = text.parse().map_err(domain)?;
            let p = match &args.blocks {
                Some(b) => b.parse().map_err(domain)?,
                None => IntervalPartition::singletons(a.len()),
            };
            (a, p)
        }
        None => {
            let text = read_input(args.input.as_deref(), stdin)?;
            let spec: FactorizationJson =
                serde_json::from_str(&text).map_err(|e| Failure::from(FormatError::Json(e)))?;
            spec.parse()?
        }
    };
    let (a, p) = if args.canonicalize {
        canonicalize(&a, &p).map_err(domain)?
    } else if args.prime {
        prime_refine(&a, &p).map_err(domain)?
    } else {
        (a, p)
    };
    let sack = partition_sack(&a, &p).map_err(domain)?;
    let format = args.output.format(Format::Json);
    no_csv(format, "construct")?;
    Ok(match format {
        Format::Json => json(&SackJson::described(&sack, &a, &p)),
        _ => format!(
            "a: {}\nblocks: {}\nsack: {}\n",
            render::factorization(&a, args.output.separator()),
            p,
            sack
        ),
    })
}

fn report_text(r: &FairnessReport) -> String {
    let mut out = format!("fair: {}\n", r.fair);
    for d in &r.semifair_failures {
        out.push_str(&format!("die {d} is not semifair\n"));
    }
    let rolls = |v: &[u64]| v.iter().map(u64::to_string).collect::<Vec<_>>().join("+");
    for c in &r.total_collisions {
        out.push_str(&format!(
            "total {}: {} = {}\n",
            c.total,
            rolls(&c.first),
            rolls(&c.second)
        ));
    }
    if !r.missing_totals.is_empty() {
        let m: Vec<String> = r.missing_totals.iter().map(u64::to_string).collect();
        out.push_str(&format!("missing totals: {}\n", m.join(", ")));
    }
    out
}

fn verify(text: &str, output: &Output) -> Result<String, Failure> {
    let dice = parse_dice(text)?;
    let report = if dice.iter().any(|d| matches!(d, InputDie::Rational(_))) {
        let rational = dice.iter().map(InputDie::rational).collect::<Result<Vec<_>, _>>()?;
        check_gk(&rational)
    } else {
        let supports: Vec<SupportPoly> =
            dice.iter().map(InputDie::normalized).collect::<Result<_, _>>()?;
        check_fair(&supports)
    };
    let format = output.format(Format::Json);
    no_csv(format, "verify")?;
    let rendered = match format {
        Format::Json => json(&FairnessReportJson::from(&report)),
        _ => report_text(&report),
    };
    if report.fair {
        Ok(rendered)
    } else {
        Err(Failure { code: 1, message: "sack is not fair".into(), stdout: rendered })
    }
}

fn parse_sack_for(text: &str) -> Result<Sack, Failure> {
    Ok(crate::format::parse_sack(text)?)
}

fn decompose(text: &str, output: &Output) -> Result<String, Failure> {
    let sack = parse_sack_for(text)?;
    let d = decompose_sack(&sack).map_err(|e| Failure::domain(e.to_string()))?;
    let format = output.format(Format::Json);
    no_csv(format, "decompose")?;
    Ok(match format {
        Format::Json => json(&DecompositionJson::from(&d)),
        _ => format!(
            "a: {}\nblocks: {}\n",
            render::factorization(&d.factorization, output.separator()),
            d.partition
        ),
    })
}

fn enumerate(args: &EnumerateArgs) -> Result<String, Failure> {
    let n = args.size.tplus1()?;
    let t = n - 1;
    let result: EnumerationResult = enumerate_with_jobs(t, args.jobs.into())
        .map_err(|e| Failure::usage(format!("cannot start worker threads: {e}")))?;
    let oracle = if args.oracle {
        let sacks = brute_force_fair_sacks_bounded(t, args.bound)
            .map_err(|e| Failure::domain(e.to_string()))?;
        Some(same_sacks(&result, &sacks))
    } else {
        None
    };
    let sep = args.output.separator();
    let rendered = match args.output.format(Format::Table) {
        Format::Table => render::enumeration_text(&result, oracle, sep),
        Format::Csv => render::enumeration_csv(&result, sep),
        Format::Json => json(&crate::format::EnumerationJson::new(&result, oracle)),
    };
    if oracle == Some(false) {
        return Err(Failure {
            code: 1,
            message: "enumeration disagrees with the direct search".into(),
            stdout: rendered,
        });
    }
    Ok(rendered)
}

#[derive(Serialize)]
struct SumsetAtomizationsJson {
    die: Vec<u64>,
    count: usize,
    atomizations: Vec<Vec<Vec<u64>>>,
}

fn atomize_cmd(text: &str, args: &AtomizeArgs) -> Result<String, Failure> {
    let format = args.output.format(Format::Json);
    no_csv(format, "atomize")?;
    if args.sumset {
        let die = parse_die(text)?.normalized()?;
        let found = sumset_atomizations(&die, args.limit);
        return Ok(match format {
            Format::Json => json(&SumsetAtomizationsJson {
                die: die.exponents().to_vec(),
                count: found.len(),
                atomizations: found
                    .iter()
                    .map(|f| f.iter().map(|d| d.exponents().to_vec()).collect())
                    .collect(),
            }),
            _ => {
                let mut out = String::new();
                for f in &found {
                    for d in f {
                        out.push_str(&format!("({d})"));
                    }
                    out.push('\n');
                }
                out.push_str(&format!("count: {}\n", found.len()));
                out
            }
        });
    }
    let sack = parse_sack_for(text)?;
    let atoms = atomize(&sack).map_err(|e| Failure::domain(e.to_string()))?;
    Ok(match format {
        Format::Json => json(&SackJson::bare(&atoms)),
        _ => format!("{atoms}\n"),
    })
}

fn member(text: &str, output: &Output) -> Result<String, Failure> {
    let die = parse_die(text)?;
    let support = match &die {
        InputDie::Support(s) => Some(s.clone()),
        InputDie::Rational(d) => fairsack_core::dice::normalize(d).ok(),
    };
    let chain = support.as_ref().and_then(die_membership);
    let format = output.format(Format::Json);
    no_csv(format, "member")?;
    Ok(match (format, chain) {
        (Format::Json, Some(c)) => json(&ChainJson::from(&c)),
        (Format::Json, None) => json(&"none"),
        (_, Some(c)) => {
            let pairs: Vec<String> = c.pairs().iter().map(|(a, b)| format!("({a},{b})")).collect();
            format!("chain: {}\nminimal total: {}\n", pairs.join(" "), c.minimal_total())
        }
        (_, None) => "none\n".to_string(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn run_str(args: &[&str], stdin: &str) -> Outcome {
        let mut input = stdin.as_bytes();
        run_args(std::iter::once("fairsack").chain(args.iter().copied()), &mut input)
    }

    #[test]
    fn verify_coins() {
        let out = run_str(&["verify", "[[0,1],[0,1]]"], "");
        assert_eq!(out.code, 1);
        let report: serde_json::Value = serde_json::from_str(&out.stdout).unwrap();
        assert_eq!(report["fair"], false);
        assert_eq!(report["total_collisions"][0]["total"], 1);
        assert_eq!(report["total_collisions"][0]["first"], serde_json::json!([0, 1]));
        assert_eq!(report["total_collisions"][0]["second"], serde_json::json!([1, 0]));
        let ok = run_str(&["verify", "-"], "[[0,1],[0,2]]");
        assert_eq!(ok.code, 0, "{}", ok.stderr);
    }

    #[test]
    fn verify_probabilities() {
        let out = run_str(&["verify", r#"[{"probs":["1/2","1/2"]},{"probs":["1/2","0","1/2"]}]"#], "");
        assert_eq!(out.code, 0, "{}", out.stderr);
        let bad = run_str(&["verify", r#"[{"probs":["1/3","2/3"]},[0,2]]"#], "");
        assert_eq!(bad.code, 1);
        assert!(bad.stdout.contains("\"semifair_failures\":[0]"), "{}", bad.stdout);
    }

    #[test]
    fn enumerate_with_oracle() {
        let out = run_str(&["enumerate", "--total", "11", "--oracle"], "");
        assert_eq!(out.code, 0, "{}", out.stderr);
        assert!(out.stdout.ends_with("count: 11, oracle: agree\n"));
        let too_big = run_str(&["enumerate", "--tplus1", "40", "--oracle"], "");
        assert_eq!(too_big.code, 1);
        assert!(too_big.stderr.contains("40"));
    }

    #[test]
    fn decompose_reports_witness() {
        let out = run_str(&["decompose", "[[0,1],[0,2,3]]"], "");
        assert_eq!(out.code, 1);
        assert!(out.stderr.contains("x^4"), "{}", out.stderr);
        let ok = run_str(&["decompose", "[[0,1,4,5,8,9],[0,2]]", "--table"], "");
        assert_eq!(ok.stdout, "a: 2·2·3\nblocks: [{1,3},{2}]\n");
    }

    #[test]
    fn construct_forms() {
        let out = run_str(&["construct", "--a", "2*2*3", "--blocks", "[{1,3},{2}]", "--table"], "");
        assert_eq!(out.stdout, "a: 2·2·3\nblocks: [{1,3},{2}]\nsack: (1+x+x^4+x^5+x^8+x^9)(1+x^2)\n");
        let prime = run_str(&["construct", "--a", "4", "--prime", "--ascii", "--table"], "");
        assert_eq!(prime.stdout, "a: 2*2\nblocks: [{1,2}]\nsack: (1+x+x^2+x^3)\n");
        let json = run_str(&["construct", r#"{"a":[2,3],"blocks":[[1],[2]]}"#], "");
        assert_eq!(json.code, 0, "{}", json.stderr);
        assert!(json.stdout.contains("\"t\":5"));
    }

    #[test]
    fn member_answers() {
        let yes = run_str(&["member", "1+x+x^4+x^5"], "");
        assert_eq!(yes.code, 0);
        assert!(yes.stdout.contains("\"minimal_total\""));
        let no = run_str(&["member", "[0,1,3,4]", "--table"], "");
        assert_eq!(no.stdout, "none\n");
    }

    #[test]
    fn usage_errors() {
        let out = run_str(&["enumerate", "--total", "5", "--bogus"], "");
        assert_eq!(out.code, 2);
        assert!(out.stderr.contains("--oracle"), "{}", out.stderr);
        assert_eq!(run_str(&["table"], "").code, 2);
        assert_eq!(run_str(&["verify", "[[0,1"], "").code, 2);
        assert_eq!(run_str(&["verify", "/nonexistent/file.json"], "").code, 2);
        assert_eq!(run_str(&["--help"], "").code, 0);
    }
}
