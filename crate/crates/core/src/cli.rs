//! Command-line front end.
//!
//! Exit codes: 0 success (for `verify`, "passed"), 1 verification failure,
//! 2 usage / cache / io errors, 3 arithmetic overflow.

use std::fs::File;
use std::io::{BufWriter, Write};
use std::path::{Path, PathBuf};

use clap::{Parser, Subcommand, ValueEnum};

use crate::cache;
use crate::decomposition::{self, VerifyMode, VerifyOptions};
use crate::error::{Error, Result};
use crate::matrix;
use crate::output::{
    emit, CacheReport, CensusReport, EqualityReport, EvalReport, EvalRow, Format, GroupDetail,
    GroupsReport, ParentRow, ParentsReport, PredictedGroup, SpecialReport, VerifyReport,
    SCHEMA_VERSION,
};
use crate::recurrence::{children, midpoint_set, HalfSplitRecurrence, MemoTable};
use crate::special::{
    check_group_recurrence, detect_groups, is_unimodal, parents_containing, predict_next,
    special_set_with, spread_profile,
};

#[derive(Debug, Parser)]
#[command(
    name = "halfsplit",
    version,
    about = "Exact evaluation and verification for half-split recurrences"
)]
struct Cli {
    #[command(subcommand)]
    command: Cmd,

    /// Recurrence: T, P, "b0,b1,b2,c", or "name(b0,b1,b2,c)"
    // Named apart from the subcommand positionals so clap's global-argument
    // propagation cannot conflate the two.
    #[arg(long = "recurrence", global = true, value_name = "SPEC")]
    recurrence_flag: Option<String>,

    /// Output format
    #[arg(long, global = true, value_enum, default_value_t = FormatArg::Text)]
    format: FormatArg,

    /// Write the report to a file instead of stdout
    #[arg(long, global = true, value_name = "FILE")]
    out: Option<PathBuf>,

    /// Memo table persistence: load FILE before the run (revalidating every
    /// entry) and write it back if the table grew
    #[arg(long, global = true, value_name = "FILE")]
    cache: Option<PathBuf>,

    /// Worker threads for sweeps (verify, special, groups)
    #[arg(long, global = true, default_value_t = 1, value_name = "N")]
    jobs: usize,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum FormatArg {
    Text,
    Json,
    Csv,
}

impl From<FormatArg> for Format {
    fn from(f: FormatArg) -> Self {
        match f {
            FormatArg::Text => Format::Text,
            FormatArg::Json => Format::Json,
            FormatArg::Csv => Format::Csv,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum ModeArg {
    /// Equality exactly at the midpoints, strict everywhere else
    Iff,
    /// Only require that no split drops below F(n)
    Ineq,
}

#[derive(Debug, Subcommand)]
enum Cmd {
    /// Evaluate F over a single index or an inclusive range
    Eval {
        /// Recurrence spec, unless --recurrence is given
        recurrence: Option<String>,
        /// Single index N or inclusive range A..B
        range: Option<String>,
    },
    /// Sweep every pair (n, i), 1 <= i <= n <= max, checking the split comparison
    Verify {
        /// Recurrence spec, unless --recurrence is given
        recurrence: Option<String>,
        /// Upper end of the sweep
        #[arg(long, value_name = "N")]
        max: u64,
        /// What counts as a failure
        #[arg(long, value_enum)]
        mode: ModeArg,
        /// Cap on the number of stored findings (totals stay exact)
        #[arg(long, default_value_t = 1000, value_name = "N")]
        limit: usize,
    },
    /// Show where the split comparison at n is tight
    Equality {
        /// Recurrence spec, unless --recurrence is given
        recurrence: Option<String>,
        /// Index to inspect
        n: Option<String>,
    },
    /// Classify the four derived columns of the pair (n, i)
    Census {
        /// Recurrence spec, unless --recurrence is given
        recurrence: Option<String>,
        /// Split index, 3 <= n
        n: Option<String>,
        /// Split point, 2 <= i <= n-1
        i: Option<String>,
    },
    /// List special numbers up to --max and their consecutive groups
    Special {
        /// Recurrence spec, unless --recurrence is given
        recurrence: Option<String>,
        /// Upper end of the scan
        #[arg(long, value_name = "N")]
        max: u64,
    },
    /// Group analysis: boundary rule residuals and spread profiles
    Groups {
        /// Recurrence spec, unless --recurrence is given
        recurrence: Option<String>,
        /// Upper end of the scan
        #[arg(long, value_name = "N")]
        max: u64,
    },
    /// List the n whose defining decomposition contains k
    Parents {
        /// Child value to look for
        k: u64,
        /// Inclusive interval A..B to scan (default covers every candidate)
        #[arg(long, value_name = "A..B")]
        range: Option<String>,
    },
    /// Memo table files
    Cache {
        #[command(subcommand)]
        op: CacheCmd,
    },
}

#[derive(Debug, Subcommand)]
enum CacheCmd {
    /// Fill F(0..=max) and write the table to a file
    Save {
        /// Recurrence spec, unless --recurrence is given
        recurrence: Option<String>,
        /// Largest index to fill
        #[arg(long, value_name = "N")]
        max: u64,
        /// Destination path
        #[arg(long, value_name = "FILE")]
        file: PathBuf,
    },
    /// Load a table file, revalidating every entry against its header
    Check {
        /// Path to check
        file: PathBuf,
    },
}

pub fn run_from_env() -> i32 {
    let stdout = std::io::stdout();
    let mut out = BufWriter::new(stdout.lock());
    let code = run(std::env::args(), &mut out);
    let _ = out.flush();
    code
}

/// Parses and executes `args`. Reports go to `out` unless --out redirects
/// them; clap's own help/usage messages go to the process streams.
pub fn run<I, S>(args: I, out: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = S>,
    S: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return e.exit_code();
        }
    };
    match dispatch(cli, out) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e}");
            exit_code_for(&e)
        }
    }
}

fn exit_code_for(e: &Error) -> i32 {
    match e {
        Error::Overflow { .. } => 3,
        Error::InequalityViolated { .. } => 1,
        _ => 2,
    }
}

fn parse_u64(s: &str, what: &str) -> Result<u64> {
    s.trim()
        .parse::<u64>()
        .map_err(|_| Error::Domain(format!("{what}: expected a non-negative integer, got {s:?}")))
}

/// "N" or "A..B", both ends inclusive.
fn parse_range(s: &str) -> Result<(u64, u64)> {
    if let Some((a, b)) = s.split_once("..") {
        let lo = parse_u64(a, "range start")?;
        let hi = parse_u64(b, "range end")?;
        if lo > hi {
            return Err(Error::Domain(format!("empty range {lo}..{hi}")));
        }
        Ok((lo, hi))
    } else {
        let n = parse_u64(s, "index")?;
        Ok((n, n))
    }
}

/// "T", "P", "b0,b1,b2,c", or "name(b0,b1,b2,c)".
fn parse_recurrence_spec(s: &str) -> Result<HalfSplitRecurrence> {
    let s = s.trim();
    match s {
        "T" => return Ok(HalfSplitRecurrence::t()),
        "P" => return Ok(HalfSplitRecurrence::p()),
        _ => {}
    }
    let (name, params) = if let Some(open) = s.find('(') {
        let Some(inner) = s[open + 1..].strip_suffix(')') else {
            return Err(Error::Domain(format!(
                "malformed recurrence spec {s:?}: missing closing parenthesis"
            )));
        };
        (&s[..open], inner)
    } else if s.contains(',') {
        ("custom", s)
    } else {
        return Err(Error::Domain(format!(
            "unknown recurrence {s:?}: expected T, P, \"b0,b1,b2,c\", or \"name(b0,b1,b2,c)\""
        )));
    };
    let parts: Vec<&str> = params.split(',').collect();
    if parts.len() != 4 {
        return Err(Error::Domain(format!(
            "recurrence spec {s:?} needs exactly four parameters b0,b1,b2,c"
        )));
    }
    let b0 = parse_u64(parts[0], "base0")?;
    let b1 = parse_u64(parts[1], "base1")?;
    let b2 = parse_u64(parts[2], "base2")?;
    let c = parse_u64(parts[3], "addend")?;
    HalfSplitRecurrence::new(name, b0, b1, b2, c)
}

fn missing_recurrence() -> Error {
    Error::Domain(
        "missing recurrence: pass T, P, \"b0,b1,b2,c\", or \"name(b0,b1,b2,c)\" \
         as the first positional argument or with --recurrence"
            .into(),
    )
}

fn conflicting_recurrence() -> Error {
    Error::Domain(
        "recurrence given both positionally and with --recurrence; pick one".into(),
    )
}

/// Commands with one positional after the recurrence: when --recurrence is
/// used the positional slots shift left by one.
fn resolve_one(
    flag: Option<String>,
    p1: Option<String>,
    p2: Option<String>,
    what: &str,
) -> Result<(HalfSplitRecurrence, String)> {
    match (flag, p1, p2) {
        (None, Some(rec), Some(arg)) => Ok((parse_recurrence_spec(&rec)?, arg)),
        (Some(rec), Some(arg), None) => Ok((parse_recurrence_spec(&rec)?, arg)),
        (Some(_), _, Some(_)) => Err(conflicting_recurrence()),
        (None, None, _) => Err(missing_recurrence()),
        (None, Some(_), None) => Err(Error::Domain(format!("missing {what}"))),
        (Some(_), None, None) => Err(Error::Domain(format!("missing {what}"))),
    }
}

/// Commands with two positionals after the recurrence.
fn resolve_two(
    flag: Option<String>,
    p1: Option<String>,
    p2: Option<String>,
    p3: Option<String>,
    what: &str,
) -> Result<(HalfSplitRecurrence, String, String)> {
    match (flag, p1, p2, p3) {
        (None, Some(rec), Some(a), Some(b)) => Ok((parse_recurrence_spec(&rec)?, a, b)),
        (Some(rec), Some(a), Some(b), None) => Ok((parse_recurrence_spec(&rec)?, a, b)),
        (Some(_), _, _, Some(_)) => Err(conflicting_recurrence()),
        (None, None, _, _) => Err(missing_recurrence()),
        _ => Err(Error::Domain(format!("missing {what}"))),
    }
}

/// Commands whose only argument is the recurrence.
fn resolve_rec(flag: Option<String>, pos: Option<String>) -> Result<HalfSplitRecurrence> {
    match (flag, pos) {
        (Some(_), Some(_)) => Err(conflicting_recurrence()),
        (Some(rec), None) | (None, Some(rec)) => parse_recurrence_spec(&rec),
        (None, None) => Err(missing_recurrence()),
    }
}

/// Builds the memo table for `r` filled through `need`, honoring --cache:
/// an existing file must match the recurrence parameters and is written back
/// whenever the table grows.
fn memo_for(r: &HalfSplitRecurrence, need: u64, cache_path: Option<&Path>) -> Result<MemoTable> {
    match cache_path {
        Some(path) if path.exists() => {
            let mut memo = cache::load_for(r, path)?;
            let before = memo.max_index();
            memo.ensure(need)?;
            if memo.max_index() > before {
                cache::save(&memo, path)?;
            }
            Ok(memo)
        }
        Some(path) => {
            let mut memo = MemoTable::new(r.clone());
            memo.ensure(need)?;
            cache::save(&memo, path)?;
            Ok(memo)
        }
        None => {
            let mut memo = MemoTable::new(r.clone());
            memo.ensure(need)?;
            Ok(memo)
        }
    }
}

fn dispatch(cli: Cli, default_out: &mut dyn Write) -> Result<i32> {
    if cli.jobs == 0 {
        return Err(Error::Domain("--jobs must be at least 1".into()));
    }
    let format: Format = cli.format.into();

    let mut file_out: Option<BufWriter<File>> = match &cli.out {
        Some(path) => Some(BufWriter::new(File::create(path)?)),
        None => None,
    };
    let out: &mut dyn Write = match file_out.as_mut() {
        Some(f) => f,
        None => default_out,
    };

    let code = match cli.command {
        Cmd::Eval { recurrence, range } => {
            let (r, range_spec) =
                resolve_one(cli.recurrence_flag, recurrence, range, "range (N or A..B)")?;
            let (lo, hi) = parse_range(&range_spec)?;
            let memo = memo_for(&r, hi, cli.cache.as_deref())?;
            let values: Vec<EvalRow> = (lo..=hi)
                .map(|n| {
                    memo.value(n).map(|value| EvalRow { n, value })
                })
                .collect::<Result<_>>()?;
            emit(&EvalReport::new(&r, lo, hi, values), format, out)?;
            0
        }
        Cmd::Verify {
            recurrence,
            max,
            mode,
            limit,
        } => {
            let r = resolve_rec(cli.recurrence_flag, recurrence)?;
            let mode = match mode {
                ModeArg::Iff => VerifyMode::IffCharacterization,
                ModeArg::Ineq => VerifyMode::InequalityOnly,
            };
            let memo = memo_for(&r, max, cli.cache.as_deref())?;
            let opts = VerifyOptions {
                jobs: cli.jobs,
                list_cap: limit,
            };
            let report = decomposition::verify_range_with(&memo, max, mode, opts)?;
            let passed = report.passed();
            emit(&VerifyReport::new(&r, &report, limit), format, out)?;
            if passed {
                0
            } else {
                1
            }
        }
        Cmd::Equality { recurrence, n } => {
            let (r, n_spec) = resolve_one(cli.recurrence_flag, recurrence, n, "index n")?;
            let n = parse_u64(&n_spec, "index n")?;
            let memo = memo_for(&r, n, cli.cache.as_deref())?;
            let eq = decomposition::equality_set(&memo, n)?;
            let mids = midpoint_set(n)?.to_vec();
            let report = EqualityReport::new(&r, n, memo.value(n)?, mids, eq);
            emit(&report, format, out)?;
            0
        }
        Cmd::Census { recurrence, n, i } => {
            let (r, n_spec, i_spec) =
                resolve_two(cli.recurrence_flag, recurrence, n, i, "indices n and i")?;
            let n = parse_u64(&n_spec, "index n")?;
            let i = parse_u64(&i_spec, "split point i")?;
            let memo = memo_for(&r, n, cli.cache.as_deref())?;
            let census = matrix::census(&memo, n, i)?;
            emit(&CensusReport::new(&r, &census), format, out)?;
            0
        }
        Cmd::Special { recurrence, max } => {
            let r = resolve_rec(cli.recurrence_flag, recurrence)?;
            let memo = memo_for(&r, max, cli.cache.as_deref())?;
            let specials = special_set_with(&memo, max, cli.jobs)?;
            let groups = detect_groups(&specials);
            emit(&SpecialReport::new(&r, max, specials, &groups), format, out)?;
            0
        }
        Cmd::Groups { recurrence, max } => {
            let r = resolve_rec(cli.recurrence_flag, recurrence)?;
            let memo = memo_for(&r, max, cli.cache.as_deref())?;
            let specials = special_set_with(&memo, max, cli.jobs)?;
            let groups = detect_groups(&specials);
            let rule = if groups.len() >= 2 {
                Some(check_group_recurrence(&groups)?)
            } else {
                None
            };
            let mut details = Vec::with_capacity(groups.len());
            for g in &groups {
                let members = spread_profile(&memo, g)?;
                let widths: Vec<u64> = members.iter().map(|m| m.width).collect();
                let residual = rule
                    .as_ref()
                    .and_then(|r| r.residuals.iter().find(|res| res.index == g.index));
                details.push(GroupDetail {
                    index: g.index,
                    first: g.first,
                    last: g.last,
                    size: g.len(),
                    first_residual: residual.map(|r| r.first_residual),
                    last_residual: residual.map(|r| r.last_residual),
                    widths_unimodal: is_unimodal(&widths),
                    widths,
                    members,
                });
            }
            let report = GroupsReport {
                schema_version: SCHEMA_VERSION,
                command: "groups",
                recurrence: (&r).into(),
                n_max: max,
                groups: details,
                boundary_rule_holds: rule.as_ref().map(|r| r.holds),
                predicted_next: groups.last().map(|g| {
                    let (first, last) = predict_next(g);
                    PredictedGroup {
                        first,
                        last,
                        verified: false,
                    }
                }),
            };
            emit(&report, format, out)?;
            0
        }
        Cmd::Parents { k, range } => {
            if cli.recurrence_flag.is_some() {
                return Err(Error::Domain(
                    "parents is recurrence-independent; drop --recurrence".into(),
                ));
            }
            let (lo, hi) = match range {
                Some(spec) => parse_range(&spec)?,
                None => (3, k.saturating_mul(2).saturating_add(2)),
            };
            let ns = parents_containing(k, lo, hi)?;
            let parents = ns
                .into_iter()
                .map(|n| children(n).map(|ch| ParentRow { n, children: ch }))
                .collect::<Result<Vec<_>>>()?;
            let report = ParentsReport {
                schema_version: SCHEMA_VERSION,
                command: "parents",
                k,
                lo,
                hi,
                parents,
            };
            emit(&report, format, out)?;
            0
        }
        Cmd::Cache { op } => match op {
            CacheCmd::Save {
                recurrence,
                max,
                file,
            } => {
                let r = resolve_rec(cli.recurrence_flag, recurrence)?;
                let mut memo = MemoTable::new(r.clone());
                memo.ensure(max)?;
                cache::save(&memo, &file)?;
                let report = CacheReport::saved(&r, file.display().to_string(), memo.max_index());
                emit(&report, format, out)?;
                0
            }
            CacheCmd::Check { file } => {
                let memo = match cli.recurrence_flag.as_deref() {
                    Some(spec) => cache::load_for(&parse_recurrence_spec(spec)?, &file)?,
                    None => cache::load(&file)?,
                };
                let report = CacheReport::checked(
                    memo.recurrence(),
                    file.display().to_string(),
                    memo.max_index(),
                );
                emit(&report, format, out)?;
                0
            }
        },
    };

    if let Some(mut f) = file_out {
        f.flush()?;
    }
    Ok(code)
}
