//! Command-line driver: every library capability behind one binary, with
//! text, CSV, and JSON output and a resumable JSON-lines result cache.
//!
//! Exit codes: 0 all checks pass, 1 at least one verdict failed, 2 usage or
//! budget error. Failure details go to the error stream.
//!
//! JSON payloads open with `"schema": 1`, the subcommand, the canonical
//! config string, and the seed. Re-running a subcommand with the same config
//! reproduces the payload byte for byte; no timestamps are emitted.
//!
//! The cache holds one JSON-lines file per (subcommand, config-hash), named
//! over the semantic flags only (worker count, output format, and budgets
//! do not change results, so they do not split the cache). `verify` and
//! `enum --count-only` checkpoint per work unit and resume by skipping
//! units whose completion marker is present. Files are append-only with a
//! single writer; a torn final line from an interrupted run is ignored and
//! its unit is recomputed.

use std::collections::{BTreeSet, HashMap};
use std::ffi::OsString;
use std::fs::{self, File, OpenOptions};
use std::io::{BufRead, BufReader, Write};
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};
use num_bigint::BigInt;
use num_traits::Zero;
use serde::Deserialize;
use serde_json::{json, Value};

use crate::covers::covering_number;
use crate::error::Error;
use crate::families::{materialize_with_workers, Family, FamilySpec};
use crate::parallel::map_ordered;
use crate::partition::{
    for_each_partition, for_each_with_prefix, parse_partial, parse_partition, split_by_prefix,
    GroundParams,
};
use crate::search::{
    alpha_anchor_of, enumerate_maximal_nontrivial, isomorphic, max_family, maximal_closure,
};
use crate::stirling::stirling;
use crate::verify::{self, fnv1a64, parse_ranges, summarize, Ranges, VerdictRecord};
use crate::Result;

const AFTER_HELP: &str = "\
CSV columns:
  stirling                   n,k,value
  enum                       index,literal
  enum --count-only          n,k,count
  family --size              kind,n,k,t,size,method
  family --materialize       index,literal
  family --member            kind,n,k,t,partition,member
  tau                        n,k,t,tau,witness
  covers                     n,k,t,tau,witness,covers,classification
  search max                 witness,member        (witness index from 1)
  search maximal-nontrivial  family,anchor,member
  search closure             index,literal
  search iso                 left,right,isomorphic
  verify                     claim,point,lhs,rhs,pass,mode,tight,note
  report                     claim,total,passes,failures,tight

Family arguments (--family, iso positionals) take a path to a family file
(the `family --materialize` output) or an inline JSON spec starting with
'{': {\"kind\",\"n\",\"k\",\"t\"} plus optional anchors as partition
literals (\"anchor\" for star/alpha, \"m\" and \"x\" for hm).

The cache directory defaults to .ekr-partitions-cache, overridden by
EKR_PARTITIONS_CACHE, overridden by --cache-dir.";

#[derive(Parser)]
#[command(
    name = "ekr-partitions",
    version,
    about = "Exact counts, covers, searches, and claim checks for t-intersecting families of k-partitions",
    after_help = AFTER_HELP
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
    #[command(flatten)]
    global: Global,
}

#[derive(Args)]
struct Global {
    /// Output format.
    #[arg(long, global = true, value_enum, default_value_t = Format::Text)]
    format: Format,
    /// Cache directory for resumable results.
    #[arg(long, global = true, value_name = "DIR")]
    cache_dir: Option<PathBuf>,
    /// Worker threads for grid and enumeration fan-out.
    #[arg(long, global = true, default_value_t = 1, value_parser = clap::value_parser!(u64).range(1..=256))]
    workers: u64,
    /// Seed for the randomized claim instances; recorded in every report.
    #[arg(long, global = true, default_value_t = 42)]
    seed: u64,
    /// Most partitions any single enumeration may visit.
    #[arg(long, global = true, default_value_t = 10_000_000, value_parser = clap::value_parser!(u64).range(1..))]
    enum_budget: u64,
    /// Most vertices the exact clique search accepts.
    #[arg(long, global = true, default_value_t = 1_000, value_parser = clap::value_parser!(u64).range(1..))]
    clique_budget: u64,
    /// Largest ground set the isomorphism search accepts.
    #[arg(long, global = true, default_value_t = 10, value_parser = clap::value_parser!(u32).range(1..=64))]
    iso_budget: u32,
}

#[derive(Subcommand)]
enum Command {
    /// Partition count S(n, k).
    Stirling {
        #[arg(value_parser = clap::value_parser!(i64).range(0..=65_536))]
        n: i64,
        #[arg(value_parser = clap::value_parser!(i64).range(0..=65_536))]
        k: i64,
    },
    /// List the k-partitions of {1..n} in canonical order.
    Enum {
        n: u32,
        k: u32,
        /// Count by enumeration instead of listing; cross-checked against
        /// the closed-form count and checkpointed per prefix range.
        #[arg(long)]
        count_only: bool,
    },
    /// A constructed family: report its size, members, or a membership test.
    Family {
        kind: FamilyKind,
        /// JSON spec {"n","k","t"} plus optional anchors ("anchor" for
        /// star/alpha, "m" and "x" for hm) as partition literals.
        #[arg(long)]
        spec: String,
        #[command(flatten)]
        action: FamilyAction,
    },
    /// Covering number of a family.
    Tau {
        /// Family file or inline JSON spec.
        #[arg(long)]
        family: String,
        #[arg(short)]
        t: u32,
    },
    /// Covering report: witness, the (t+1)-block covers, and their structure.
    Covers {
        /// Family file or inline JSON spec.
        #[arg(long)]
        family: String,
        #[arg(short)]
        t: u32,
        /// Detail the case split on the (t+1)-block covers.
        #[arg(long)]
        classify: bool,
    },
    /// Exhaustive and closure searches.
    #[command(subcommand)]
    Search(SearchCmd),
    /// Check registered claims on default or explicit grids.
    Verify {
        /// Claim id from the registry, or "all".
        #[arg(long)]
        claim: String,
        /// Grid like "t=1..2,k=3..4,n=10..12", or "default".
        #[arg(long, default_value = "default")]
        grid: String,
    },
    /// Aggregate cached verify records into a per-claim summary.
    Report {
        #[arg(long, value_name = "DIR")]
        dir: PathBuf,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum FamilyKind {
    Star,
    Alpha,
    Hm,
    H1,
}

impl FamilyKind {
    fn name(self) -> &'static str {
        match self {
            FamilyKind::Star => "star",
            FamilyKind::Alpha => "alpha",
            FamilyKind::Hm => "hm",
            FamilyKind::H1 => "h1",
        }
    }
}

#[derive(Args)]
#[group(multiple = false)]
struct FamilyAction {
    /// Report the size (closed form when available, else by enumeration).
    #[arg(long)]
    size: bool,
    /// Print the members as a family file (JSON header line, then literals).
    #[arg(long)]
    materialize: bool,
    /// Test whether this partition literal belongs to the family.
    #[arg(long, value_name = "PARTITION")]
    member: Option<String>,
}

#[derive(Subcommand)]
enum SearchCmd {
    /// Exact maximum t-intersecting family size, by clique search.
    Max {
        n: u32,
        k: u32,
        t: u32,
        /// Most maximum witnesses to materialize.
        #[arg(long, default_value_t = 100)]
        witness_cap: usize,
    },
    /// All maximal t-intersecting families with no t-block common core.
    MaximalNontrivial { n: u32, k: u32, t: u32 },
    /// Grow a family to a maximal t-intersecting one.
    Closure {
        /// Family file or inline JSON spec.
        #[arg(long)]
        family: String,
    },
    /// Decide isomorphism of two families under ground-set relabeling.
    Iso { left: String, right: String },
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Text,
    Csv,
    Json,
}

/// Parse argv, run the subcommand, and map the outcome to an exit status.
pub fn run<I, T>(argv: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(argv) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let _ = e.print();
            return code;
        }
    };
    match dispatch(&cli) {
        Ok(failures) => {
            if failures > 0 {
                eprintln!("{failures} verdict(s) failed");
                1
            } else {
                0
            }
        }
        // A closed output pipe is the reader's business, not a failure.
        Err(Error::Io(e)) if e.kind() == std::io::ErrorKind::BrokenPipe => 0,
        Err(err) => {
            eprintln!("error: {err}");
            2
        }
    }
}

/// Rendered outcome of one subcommand, pre-built for all three formats.
struct Report {
    text: String,
    csv_header: Vec<&'static str>,
    csv_rows: Vec<Vec<String>>,
    json: Value,
    failures: u64,
}

fn dispatch(cli: &Cli) -> Result<u64> {
    let g = &cli.global;
    let report = match &cli.command {
        Command::Stirling { n, k } => cmd_stirling(*n, *k, g),
        Command::Enum { n, k, count_only } => return cmd_enum(*n, *k, *count_only, g),
        Command::Family { kind, spec, action } => {
            return cmd_family(*kind, spec, action, g);
        }
        Command::Tau { family, t } => cmd_tau(family, *t, g),
        Command::Covers { family, t, classify } => cmd_covers(family, *t, *classify, g),
        Command::Search(search) => match search {
            SearchCmd::Max { n, k, t, witness_cap } => cmd_search_max(*n, *k, *t, *witness_cap, g),
            SearchCmd::MaximalNontrivial { n, k, t } => cmd_search_nontrivial(*n, *k, *t, g),
            SearchCmd::Closure { family } => return cmd_search_closure(family, g),
            SearchCmd::Iso { left, right } => cmd_search_iso(left, right, g),
        },
        Command::Verify { claim, grid } => cmd_verify(claim, grid, g),
        Command::Report { dir } => cmd_report(dir, g),
    }?;
    emit(g.format, &report);
    Ok(report.failures)
}

fn emit(format: Format, report: &Report) {
    let stdout = std::io::stdout();
    let mut out = stdout.lock();
    let result = match format {
        Format::Text => writeln!(out, "{}", report.text.trim_end()),
        Format::Csv => {
            let mut r = writeln!(out, "{}", report.csv_header.join(","));
            for row in &report.csv_rows {
                if r.is_err() {
                    break;
                }
                let cells: Vec<String> = row.iter().map(|c| csv_escape(c)).collect();
                r = writeln!(out, "{}", cells.join(","));
            }
            r
        }
        Format::Json => writeln!(out, "{}", report.json),
    };
    // Ignore a closed pipe; the reader took what it wanted.
    let _ = result;
}

fn csv_escape(cell: &str) -> String {
    if cell.contains(',') || cell.contains('"') || cell.contains('\n') {
        format!("\"{}\"", cell.replace('"', "\"\""))
    } else {
        cell.to_string()
    }
}

fn header(subcommand: &str, config: &str, seed: u64) -> Value {
    json!({ "schema": 1, "subcommand": subcommand, "config": config, "seed": seed })
}

fn with_header(mut head: Value, body: Value) -> Value {
    let map = head.as_object_mut().expect("header is an object");
    for (k, v) in body.as_object().expect("body is an object") {
        map.insert(k.clone(), v.clone());
    }
    head
}

fn cache_dir(g: &Global) -> PathBuf {
    g.cache_dir
        .clone()
        .or_else(|| std::env::var_os("EKR_PARTITIONS_CACHE").map(PathBuf::from))
        .unwrap_or_else(|| PathBuf::from(".ekr-partitions-cache"))
}

fn cmd_stirling(n: i64, k: i64, g: &Global) -> Result<Report> {
    let value = stirling(n, k);
    let config = format!("stirling n={n} k={k}");
    Ok(Report {
        text: format!("S({n}, {k}) = {value}"),
        csv_header: vec!["n", "k", "value"],
        csv_rows: vec![vec![n.to_string(), k.to_string(), value.to_string()]],
        json: with_header(
            header("stirling", &config, g.seed),
            json!({ "n": n, "k": k, "value": value.to_string() }),
        ),
        failures: 0,
    })
}

fn cmd_enum(n: u32, k: u32, count_only: bool, g: &Global) -> Result<u64> {
    let total = stirling(n as i64, k as i64);
    if total > BigInt::from(g.enum_budget) {
        return Err(Error::BudgetExceeded {
            needed: total.to_string(),
            budget: g.enum_budget,
        });
    }
    if count_only {
        let report = cmd_enum_count(n, k, g)?;
        emit(g.format, &report);
        return Ok(0);
    }
    let config = format!("enum n={n} k={k} count_only=false");
    if g.format == Format::Text {
        // Stream instead of materializing the whole listing.
        let stdout = std::io::stdout();
        let mut out = stdout.lock();
        let mut open = true;
        for_each_partition(n, k, |_, blocks| {
            if !open {
                return;
            }
            let literal: Vec<String> = blocks.iter().map(|b| b.to_string()).collect();
            open = writeln!(out, "{}", literal.join("|")).is_ok();
        })?;
        return Ok(0);
    }
    let mut literals = Vec::new();
    for_each_partition(n, k, |_, blocks| {
        let lit: Vec<String> = blocks.iter().map(|b| b.to_string()).collect();
        literals.push(lit.join("|"));
    })?;
    let report = Report {
        text: String::new(),
        csv_header: vec!["index", "literal"],
        csv_rows: literals
            .iter()
            .enumerate()
            .map(|(i, l)| vec![i.to_string(), l.clone()])
            .collect(),
        json: with_header(
            header("enum", &config, g.seed),
            json!({ "n": n, "k": k, "count": literals.len().to_string(), "partitions": literals }),
        ),
        failures: 0,
    };
    emit(g.format, &report);
    Ok(0)
}

fn cmd_enum_count(n: u32, k: u32, g: &Global) -> Result<Report> {
    let config = format!("enum n={n} k={k} count_only=true");
    let mut cache = Cache::open(&cache_dir(g), "enum", &config, g.seed)?;
    let ranges = split_by_prefix(n, k, n.min(3))?;
    let mut pending = Vec::new();
    let mut counts: HashMap<String, u64> = HashMap::new();
    for range in &ranges {
        let unit = prefix_unit(&range.prefix);
        let cached = cache
            .is_done(&unit)
            .then(|| {
                cache
                    .unit_records(&unit)
                    .and_then(|rs| rs.first())
                    .and_then(|rec| rec["count"].as_str())
                    .and_then(|s| s.parse::<u64>().ok())
            })
            .flatten();
        match cached {
            Some(c) => {
                counts.insert(unit, c);
            }
            None => pending.push(range.clone()),
        }
    }
    let counted = map_ordered(pending, g.workers as usize, |_, range| -> Result<(String, u64)> {
        let mut c = 0u64;
        for_each_with_prefix(range.n, range.k, &range.prefix, |_, _| c += 1)?;
        assert_eq!(
            BigInt::from(c),
            range.count,
            "enumerated count disagrees with the closed-form range count"
        );
        Ok((prefix_unit(&range.prefix), c))
    });
    for item in counted {
        let (unit, c) = item?;
        cache.put_record(&unit, &unit, json!({ "prefix": unit, "count": c.to_string() }))?;
        cache.mark_done(&unit)?;
        counts.insert(unit, c);
    }
    let mut sum = BigInt::zero();
    for range in &ranges {
        sum += counts[&prefix_unit(&range.prefix)];
    }
    assert_eq!(sum, stirling(n as i64, k as i64), "range counts must sum to S(n, k)");
    Ok(Report {
        text: format!("count = {sum} ({} ranges)", ranges.len()),
        csv_header: vec!["n", "k", "count"],
        csv_rows: vec![vec![n.to_string(), k.to_string(), sum.to_string()]],
        json: with_header(
            header("enum", &config, g.seed),
            json!({ "n": n, "k": k, "count": sum.to_string(), "ranges": ranges.len() }),
        ),
        failures: 0,
    })
}

fn prefix_unit(prefix: &[u8]) -> String {
    let digits: Vec<String> = prefix.iter().map(|d| d.to_string()).collect();
    format!("prefix={}", digits.join("."))
}

/// Inline family spec: ground parameters plus optional anchors given as
/// partition literals.
#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct SpecDto {
    kind: Option<String>,
    n: u32,
    k: u32,
    t: u32,
    anchor: Option<String>,
    m: Option<String>,
    x: Option<String>,
}

fn build_spec(kind: Option<&str>, raw: &str) -> Result<FamilySpec> {
    let dto: SpecDto =
        serde_json::from_str(raw).map_err(|e| Error::BadFamilySpec(format!("bad spec JSON: {e}")))?;
    let kind = match (kind, dto.kind.as_deref()) {
        (Some(a), Some(b)) if a != b => {
            return Err(Error::BadFamilySpec(format!(
                "kind {a:?} conflicts with spec kind {b:?}"
            )))
        }
        (Some(a), _) => a,
        (None, Some(b)) => b,
        (None, None) => {
            return Err(Error::BadFamilySpec("spec JSON needs a \"kind\" field".to_string()))
        }
    };
    let params = GroundParams::new(dto.n, dto.k, dto.t)?;
    let no_anchor = |field: &Option<String>, name: &str| -> Result<()> {
        if field.is_some() {
            return Err(Error::BadFamilySpec(format!("{kind} spec takes no {name:?} field")));
        }
        Ok(())
    };
    match kind {
        "star" => {
            no_anchor(&dto.m, "m")?;
            no_anchor(&dto.x, "x")?;
            match &dto.anchor {
                Some(a) => FamilySpec::star(params, parse_partial(a, params.n)?),
                None => FamilySpec::named_star(params),
            }
        }
        "alpha" => {
            no_anchor(&dto.m, "m")?;
            no_anchor(&dto.x, "x")?;
            match &dto.anchor {
                Some(a) => FamilySpec::alpha(params, parse_partial(a, params.n)?),
                None => FamilySpec::named_alpha(params),
            }
        }
        "hm" => {
            no_anchor(&dto.anchor, "anchor")?;
            match (&dto.x, &dto.m) {
                (Some(x), Some(m)) => {
                    FamilySpec::hm(params, parse_partial(x, params.n)?, parse_partial(m, params.n)?)
                }
                (None, None) => FamilySpec::named_hm(params),
                _ => Err(Error::BadFamilySpec(
                    "hm spec takes \"m\" and \"x\" together or neither".to_string(),
                )),
            }
        }
        "h1" => {
            no_anchor(&dto.anchor, "anchor")?;
            no_anchor(&dto.m, "m")?;
            no_anchor(&dto.x, "x")?;
            FamilySpec::named_h1(params)
        }
        other => Err(Error::BadFamilySpec(format!("unknown family kind {other:?}"))),
    }
}

/// A family argument is a path to a family file or an inline JSON spec.
fn load_family(arg: &str, g: &Global) -> Result<Family> {
    if arg.trim_start().starts_with('{') {
        let spec = build_spec(None, arg)?;
        materialize_with_workers(&spec, g.enum_budget, g.workers as usize)
    } else {
        Family::read_jsonl(BufReader::new(File::open(arg)?))
    }
}

/// Canonical form of a family argument for config strings: inline JSON is
/// reserialized with sorted keys, paths pass through.
fn family_arg_canonical(arg: &str) -> String {
    if arg.trim_start().starts_with('{') {
        serde_json::from_str::<Value>(arg)
            .map(|v| v.to_string())
            .unwrap_or_else(|_| arg.to_string())
    } else {
        arg.to_string()
    }
}

fn cmd_family(kind: FamilyKind, spec_raw: &str, action: &FamilyAction, g: &Global) -> Result<u64> {
    let spec = build_spec(Some(kind.name()), spec_raw)?;
    let params = spec.params();
    let action_name = if action.materialize {
        "materialize".to_string()
    } else if let Some(p) = &action.member {
        format!("member={p}")
    } else {
        "size".to_string()
    };
    let config = format!(
        "family kind={} spec={} action={}",
        kind.name(),
        family_arg_canonical(spec_raw),
        action_name
    );
    let report = if action.materialize {
        let family = materialize_with_workers(&spec, g.enum_budget, g.workers as usize)?;
        if g.format == Format::Text {
            // Text form IS the family file format; keep it byte-exact.
            let stdout = std::io::stdout();
            family.write_jsonl(stdout.lock())?;
            return Ok(0);
        }
        Report {
            text: String::new(),
            csv_header: vec!["index", "literal"],
            csv_rows: family
                .members()
                .iter()
                .enumerate()
                .map(|(i, m)| vec![i.to_string(), m.to_literal()])
                .collect(),
            json: with_header(
                header("family", &config, g.seed),
                json!({ "kind": kind.name(), "describe": spec.describe(), "family": family }),
            ),
            failures: 0,
        }
    } else if let Some(lit) = &action.member {
        let p = parse_partition(lit, params.n)?;
        let member = spec.contains(&p);
        Report {
            text: format!("member = {member}"),
            csv_header: vec!["kind", "n", "k", "t", "partition", "member"],
            csv_rows: vec![vec![
                kind.name().to_string(),
                params.n.to_string(),
                params.k.to_string(),
                params.t.to_string(),
                p.to_literal(),
                member.to_string(),
            ]],
            json: with_header(
                header("family", &config, g.seed),
                json!({ "kind": kind.name(), "partition": p.to_literal(), "member": member }),
            ),
            failures: 0,
        }
    } else {
        let (size, method) = match spec.closed_form_size() {
            Some(s) => (s, "closed-form"),
            None => {
                let family = materialize_with_workers(&spec, g.enum_budget, g.workers as usize)?;
                (BigInt::from(family.len()), "enumeration")
            }
        };
        Report {
            text: format!("size = {size} ({method})"),
            csv_header: vec!["kind", "n", "k", "t", "size", "method"],
            csv_rows: vec![vec![
                kind.name().to_string(),
                params.n.to_string(),
                params.k.to_string(),
                params.t.to_string(),
                size.to_string(),
                method.to_string(),
            ]],
            json: with_header(
                header("family", &config, g.seed),
                json!({
                    "kind": kind.name(),
                    "describe": spec.describe(),
                    "size": size.to_string(),
                    "method": method,
                }),
            ),
            failures: 0,
        }
    };
    emit(g.format, &report);
    Ok(0)
}

fn cmd_tau(family_arg: &str, t: u32, g: &Global) -> Result<Report> {
    let family = load_family(family_arg, g)?;
    let report = covering_number(&family, t)?;
    let params = family.params();
    let config = format!("tau family={} t={t}", family_arg_canonical(family_arg));
    Ok(Report {
        text: format!("tau = {}, witness = {}", report.tau, report.witness),
        csv_header: vec!["n", "k", "t", "tau", "witness"],
        csv_rows: vec![vec![
            params.n.to_string(),
            params.k.to_string(),
            t.to_string(),
            report.tau.to_string(),
            report.witness.to_string(),
        ]],
        json: with_header(
            header("tau", &config, g.seed),
            json!({ "family_size": family.len(), "tau": report.tau, "witness": report.witness }),
        ),
        failures: 0,
    })
}

fn cmd_covers(family_arg: &str, t: u32, classify: bool, g: &Global) -> Result<Report> {
    let family = load_family(family_arg, g)?;
    let report = covering_number(&family, t)?;
    let params = family.params();
    let config = format!(
        "covers family={} t={t} classify={classify}",
        family_arg_canonical(family_arg)
    );
    let class_name = report
        .classification
        .as_ref()
        .map(|c| serde_json::to_value(c).map(|v| v["kind"].as_str().unwrap_or("?").to_string()))
        .transpose()?
        .unwrap_or_else(|| "-".to_string());
    let mut text = format!(
        "tau = {}, witness = {}, (t+1)-covers = {}",
        report.tau,
        report.witness,
        report.covers.len()
    );
    for c in &report.covers {
        text.push_str(&format!("\ncover: {c}"));
    }
    if classify {
        text.push_str(&format!("\nclassification: {class_name}"));
        if let Some(core) = &report.t_core {
            text.push_str(&format!("\nt-core: {core}"));
        }
    }
    Ok(Report {
        text,
        csv_header: vec!["n", "k", "t", "tau", "witness", "covers", "classification"],
        csv_rows: vec![vec![
            params.n.to_string(),
            params.k.to_string(),
            t.to_string(),
            report.tau.to_string(),
            report.witness.to_string(),
            report.covers.len().to_string(),
            class_name,
        ]],
        json: with_header(
            header("covers", &config, g.seed),
            json!({ "family_size": family.len(), "report": report }),
        ),
        failures: 0,
    })
}

fn cmd_search_max(n: u32, k: u32, t: u32, witness_cap: usize, g: &Global) -> Result<Report> {
    let params = GroundParams::new(n, k, t)?;
    let result = max_family(params, g.clique_budget, witness_cap)?;
    let config = format!("search-max n={n} k={k} t={t} witness_cap={witness_cap}");
    let mut text = format!(
        "max = {} (witnesses = {}, showing {}; star-shaped = {}, past threshold = {})",
        result.max_size,
        result.witness_total,
        result.witnesses.len(),
        result.matches_star,
        result.threshold_met
    );
    let mut rows = Vec::new();
    for (i, w) in result.witnesses.iter().enumerate() {
        let lits: Vec<String> = w.members().iter().map(|m| m.to_literal()).collect();
        text.push_str(&format!("\nwitness {}: {}", i + 1, lits.join(" ; ")));
        for lit in lits {
            rows.push(vec![(i + 1).to_string(), lit]);
        }
    }
    Ok(Report {
        text,
        csv_header: vec!["witness", "member"],
        csv_rows: rows,
        json: with_header(header("search-max", &config, g.seed), json!({ "result": result })),
        failures: 0,
    })
}

fn cmd_search_nontrivial(n: u32, k: u32, t: u32, g: &Global) -> Result<Report> {
    let params = GroundParams::new(n, k, t)?;
    let families = enumerate_maximal_nontrivial(params, g.clique_budget)?;
    let config = format!("search-maximal-nontrivial n={n} k={k} t={t}");
    let mut text = format!("maximal non-trivial families = {}", families.len());
    let mut rows = Vec::new();
    let mut anchors = Vec::new();
    for (i, f) in families.iter().enumerate() {
        let anchor = if k == t + 2 {
            alpha_anchor_of(f, g.enum_budget)?
                .map(|a| a.to_string())
                .unwrap_or_else(|| "-".to_string())
        } else {
            "-".to_string()
        };
        let lits: Vec<String> = f.members().iter().map(|m| m.to_literal()).collect();
        text.push_str(&format!(
            "\nfamily {} (size {}, anchor {}): {}",
            i + 1,
            f.len(),
            anchor,
            lits.join(" ; ")
        ));
        for lit in lits {
            rows.push(vec![(i + 1).to_string(), anchor.clone(), lit]);
        }
        anchors.push(anchor);
    }
    Ok(Report {
        text,
        csv_header: vec!["family", "anchor", "member"],
        csv_rows: rows,
        json: with_header(
            header("search-maximal-nontrivial", &config, g.seed),
            json!({ "count": families.len(), "anchors": anchors, "families": families }),
        ),
        failures: 0,
    })
}

fn cmd_search_closure(family_arg: &str, g: &Global) -> Result<u64> {
    let family = load_family(family_arg, g)?;
    let closed = maximal_closure(&family, g.enum_budget)?;
    let config = format!("search-closure family={}", family_arg_canonical(family_arg));
    if g.format == Format::Text {
        let stdout = std::io::stdout();
        closed.write_jsonl(stdout.lock())?;
        return Ok(0);
    }
    let report = Report {
        text: String::new(),
        csv_header: vec!["index", "literal"],
        csv_rows: closed
            .members()
            .iter()
            .enumerate()
            .map(|(i, m)| vec![i.to_string(), m.to_literal()])
            .collect(),
        json: with_header(
            header("search-closure", &config, g.seed),
            json!({ "grew_from": family.len(), "family": closed }),
        ),
        failures: 0,
    };
    emit(g.format, &report);
    Ok(0)
}

fn cmd_search_iso(left: &str, right: &str, g: &Global) -> Result<Report> {
    let a = load_family(left, g)?;
    let b = load_family(right, g)?;
    let iso = isomorphic(&a, &b, g.iso_budget)?;
    let config = format!(
        "search-iso left={} right={}",
        family_arg_canonical(left),
        family_arg_canonical(right)
    );
    Ok(Report {
        text: format!("isomorphic = {iso}"),
        csv_header: vec!["left", "right", "isomorphic"],
        csv_rows: vec![vec![left.to_string(), right.to_string(), iso.to_string()]],
        json: with_header(header("search-iso", &config, g.seed), json!({ "isomorphic": iso })),
        failures: 0,
    })
}

fn cmd_verify(claim: &str, grid_str: &str, g: &Global) -> Result<Report> {
    let grid: Option<Ranges> = if grid_str == "default" {
        None
    } else {
        Some(parse_ranges(grid_str)?)
    };
    let claims: Vec<String> = if claim == "all" {
        if grid.is_some() {
            return Err(Error::BadGrid {
                spec: grid_str.to_string(),
                reason: "--claim all runs each claim's default grid; pass a single claim to use --grid"
                    .to_string(),
            });
        }
        verify::CLAIM_IDS.iter().map(|s| s.to_string()).collect()
    } else {
        vec![claim.to_string()]
    };
    for c in &claims {
        verify::outer_axis(c)?;
    }
    let config = format!("verify claim={claim} grid={grid_str} seed={}", g.seed);
    let mut cache = Cache::open(&cache_dir(g), "verify", &config, g.seed)?;
    let mut records: Vec<VerdictRecord> = Vec::new();
    for c in &claims {
        for (unit, unit_grid) in units(c, grid.as_ref())? {
            if cache.is_done(&unit) {
                for v in cache.unit_records(&unit).into_iter().flatten() {
                    records.push(serde_json::from_value(v.clone())?);
                }
            } else {
                let rs = verify::check(c, unit_grid.as_ref(), g.seed, g.enum_budget, g.workers as usize)?;
                for r in &rs {
                    let key = format!("{}|{}", r.claim, r.point);
                    cache.put_record(&unit, &key, serde_json::to_value(r)?)?;
                }
                cache.mark_done(&unit)?;
                records.extend(rs);
            }
        }
    }
    let summary = summarize(&records);
    let failures = records.iter().filter(|r| !r.pass).count() as u64;
    for r in records.iter().filter(|r| !r.pass) {
        eprintln!("FAIL {} {}: lhs={} rhs={} ({})", r.claim, r.point, r.lhs, r.rhs, r.note);
    }
    let mut text = format!(
        "{:<20} {:>6} {:>7} {:>9} {:>6}\n",
        "claim", "total", "passes", "failures", "tight"
    );
    for s in &summary {
        text.push_str(&format!(
            "{:<20} {:>6} {:>7} {:>9} {:>6}\n",
            s.claim, s.total, s.passes, s.failures, s.tight_points
        ));
    }
    text.push_str(&format!("records = {}, failures = {failures}, seed = {}", records.len(), g.seed));
    Ok(Report {
        text,
        csv_header: vec!["claim", "point", "lhs", "rhs", "pass", "mode", "tight", "note"],
        csv_rows: records
            .iter()
            .map(|r| {
                vec![
                    r.claim.clone(),
                    r.point.clone(),
                    r.lhs.clone(),
                    r.rhs.clone(),
                    r.pass.to_string(),
                    serde_json::to_value(r.mode)
                        .ok()
                        .and_then(|v| v.as_str().map(str::to_string))
                        .unwrap_or_default(),
                    r.tight.to_string(),
                    r.note.clone(),
                ]
            })
            .collect(),
        json: with_header(
            header("verify", &config, g.seed),
            json!({ "claims": summary, "records": records }),
        ),
        failures,
    })
}

/// Work units of one claim run: the whole grid, or one slice per value of
/// the claim's outermost axis when an explicit grid ranges over it.
fn units(claim: &str, grid: Option<&Ranges>) -> Result<Vec<(String, Option<Ranges>)>> {
    let axis = verify::outer_axis(claim)?;
    if let Some(g) = grid {
        if let Some(&(lo, hi)) = g.get(axis) {
            if lo < hi {
                return Ok((lo..=hi)
                    .map(|v| {
                        let mut sliced = g.clone();
                        sliced.insert(axis.to_string(), (v, v));
                        (format!("{claim}|{axis}={v}"), Some(sliced))
                    })
                    .collect());
            }
        }
        return Ok(vec![(claim.to_string(), Some(g.clone()))]);
    }
    Ok(vec![(claim.to_string(), None)])
}

fn cmd_report(dir: &Path, g: &Global) -> Result<Report> {
    let mut paths: Vec<PathBuf> = fs::read_dir(dir)?
        .filter_map(|e| e.ok().map(|e| e.path()))
        .filter(|p| p.extension().is_some_and(|x| x == "jsonl"))
        .collect();
    paths.sort();
    let mut records: Vec<VerdictRecord> = Vec::new();
    let mut files = 0u64;
    for path in &paths {
        let mut lines = BufReader::new(File::open(path)?).lines();
        let Some(Ok(first)) = lines.next() else { continue };
        let Ok(head) = serde_json::from_str::<Value>(&first) else { continue };
        if head["type"] != "header" || head["subcommand"] != "verify" {
            continue;
        }
        files += 1;
        for line in lines {
            let line = line?;
            let Ok(v) = serde_json::from_str::<Value>(&line) else { break };
            if v["type"] == "record" {
                records.push(serde_json::from_value(v["record"].clone())?);
            }
        }
    }
    let summary = summarize(&records);
    let failures = records.iter().filter(|r| !r.pass).count() as u64;
    let config = format!("report dir={}", dir.display());
    let mut text = format!(
        "{:<20} {:>6} {:>7} {:>9} {:>6}\n",
        "claim", "total", "passes", "failures", "tight"
    );
    for s in &summary {
        text.push_str(&format!(
            "{:<20} {:>6} {:>7} {:>9} {:>6}\n",
            s.claim, s.total, s.passes, s.failures, s.tight_points
        ));
    }
    text.push_str(&format!("sources = {files} file(s), {} record(s)", records.len()));
    Ok(Report {
        text,
        csv_header: vec!["claim", "total", "passes", "failures", "tight"],
        csv_rows: summary
            .iter()
            .map(|s| {
                vec![
                    s.claim.clone(),
                    s.total.to_string(),
                    s.passes.to_string(),
                    s.failures.to_string(),
                    s.tight_points.to_string(),
                ]
            })
            .collect(),
        json: with_header(
            header("report", &config, g.seed),
            json!({ "files": files, "claims": summary }),
        ),
        failures,
    })
}

/// Append-only JSON-lines cache: a header line, then record lines keyed for
/// dedupe, then per-unit done markers. Replay stops at the first torn line.
struct Cache {
    path: PathBuf,
    subcommand: String,
    config: String,
    seed: u64,
    done: BTreeSet<String>,
    records: HashMap<String, Vec<Value>>,
    keys: BTreeSet<String>,
    file: Option<File>,
}

impl Cache {
    fn open(dir: &Path, subcommand: &str, config: &str, seed: u64) -> Result<Cache> {
        let name = format!("{subcommand}-{:016x}.jsonl", fnv1a64(config.as_bytes()));
        let path = dir.join(name);
        let mut cache = Cache {
            path,
            subcommand: subcommand.to_string(),
            config: config.to_string(),
            seed,
            done: BTreeSet::new(),
            records: HashMap::new(),
            keys: BTreeSet::new(),
            file: None,
        };
        if cache.path.exists() {
            for line in BufReader::new(File::open(&cache.path)?).lines() {
                let line = line?;
                let Ok(v) = serde_json::from_str::<Value>(&line) else { break };
                match v["type"].as_str() {
                    Some("header") => {
                        if v["config"] != config {
                            return Err(Error::Io(std::io::Error::other(format!(
                                "cache file {} holds config {:?}, expected {config:?}",
                                cache.path.display(),
                                v["config"]
                            ))));
                        }
                    }
                    Some("record") => {
                        let (Some(unit), Some(key)) = (v["unit"].as_str(), v["key"].as_str())
                        else {
                            break;
                        };
                        if cache.keys.insert(key.to_string()) {
                            cache
                                .records
                                .entry(unit.to_string())
                                .or_default()
                                .push(v["record"].clone());
                        }
                    }
                    Some("done") => {
                        if let Some(unit) = v["unit"].as_str() {
                            cache.done.insert(unit.to_string());
                        }
                    }
                    _ => break,
                }
            }
        }
        Ok(cache)
    }

    fn is_done(&self, unit: &str) -> bool {
        self.done.contains(unit)
    }

    fn unit_records(&self, unit: &str) -> Option<&Vec<Value>> {
        self.records.get(unit)
    }

    fn append(&mut self, line: &Value) -> Result<()> {
        if self.file.is_none() {
            if let Some(dir) = self.path.parent() {
                fs::create_dir_all(dir)?;
            }
            let fresh = !self.path.exists();
            let mut f = OpenOptions::new().create(true).append(true).open(&self.path)?;
            if fresh {
                writeln!(
                    f,
                    "{}",
                    json!({
                        "schema": 1,
                        "type": "header",
                        "subcommand": self.subcommand,
                        "config": self.config,
                        "seed": self.seed,
                    })
                )?;
            }
            self.file = Some(f);
        }
        let f = self.file.as_mut().expect("append handle just opened");
        writeln!(f, "{line}")?;
        f.flush()?;
        Ok(())
    }

    fn put_record(&mut self, unit: &str, key: &str, record: Value) -> Result<()> {
        if self.keys.contains(key) {
            return Ok(());
        }
        self.append(&json!({ "schema": 1, "type": "record", "unit": unit, "key": key, "record": record }))?;
        self.keys.insert(key.to_string());
        Ok(())
    }

    fn mark_done(&mut self, unit: &str) -> Result<()> {
        if self.done.contains(unit) {
            return Ok(());
        }
        self.append(&json!({ "schema": 1, "type": "done", "unit": unit }))?;
        self.done.insert(unit.to_string());
        Ok(())
    }
}
