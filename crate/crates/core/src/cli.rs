//! Command-line front end: `classgroup`, `series` and `verify`.
//!
//! Exit codes: 0 success, 1 verification failure, 2 usage or validation error.

use std::fs::File;
use std::io::{self, Write};
use std::path::PathBuf;

use clap::{Parser, Subcommand, ValueEnum};
use serde::Serialize;

use crate::arith::{ArithError, Discriminant};
use crate::class_group::{ClassGroup, ClassIndex, GenusId};
use crate::forms::ReducedForm;
use crate::genus::{character_table, CharacterPair};
use crate::series::{SeriesBook, SeriesLabel};
use crate::verify::{run_suite, verify_discriminant, SuiteConfig, SuiteOutcome, DEFAULT_DIRICHLET_TERMS};

pub const EXIT_OK: i32 = 0;
pub const EXIT_FAILED: i32 = 1;
pub const EXIT_USAGE: i32 = 2;

/// Environment variable capping the number of worker threads.
pub const THREADS_ENV: &str = "GENUSMASS_THREADS";

#[derive(Debug, Parser)]
#[command(
    name = "genusmass",
    version,
    about = "Class groups, theta and Eisenstein series, and exact identity checks for negative fundamental discriminants",
    after_help = "Negative discriminants may be written as -20 or m20; ranges as -3:-500 or m3:m500."
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Json,
    Csv,
    Text,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Reduced forms, composition table, squares, genera and genus characters.
    Classgroup {
        #[arg(long, allow_hyphen_values = true, value_parser = parse_disc)]
        disc: i64,
        #[arg(long, value_enum, default_value = "text")]
        format: Format,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Coefficients 0..=prec of one series.
    Series {
        #[arg(long, allow_hyphen_values = true, value_parser = parse_disc)]
        disc: i64,
        /// theta:h, genus:g, twisted:d, eisenstein:d, classavg or cusp:h
        #[arg(long)]
        which: String,
        #[arg(long, default_value_t = 100, value_parser = clap::value_parser!(u64).range(1..))]
        prec: u64,
        #[arg(long, value_enum, default_value = "text")]
        format: Format,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Run every identity check for one discriminant or a range.
    Verify {
        #[arg(long, allow_hyphen_values = true, value_parser = parse_disc, conflicts_with = "range", required_unless_present = "range")]
        disc: Option<i64>,
        #[arg(long, allow_hyphen_values = true, value_parser = parse_range)]
        range: Option<(i64, i64)>,
        #[arg(long, default_value_t = 100, value_parser = clap::value_parser!(u64).range(1..))]
        prec: u64,
        /// Check Hecke identities for primes up to this bound.
        #[arg(long, default_value_t = 50)]
        primes: u64,
        /// Terms of the L-series partial sums.
        #[arg(long, default_value_t = DEFAULT_DIRICHLET_TERMS)]
        terms: u64,
        #[arg(long)]
        skip_dirichlet: bool,
        /// Zero all elapsed_ms fields.
        #[arg(long)]
        no_timing: bool,
        #[arg(long, value_enum, default_value = "text")]
        format: Format,
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

/// Accepts `-20` and `m20`.
pub fn parse_disc(s: &str) -> Result<i64, String> {
    let s = s.trim();
    let parsed = match s.strip_prefix('m') {
        Some(rest) => rest.parse::<i64>().map(|v| -v),
        None => s.parse::<i64>(),
    };
    parsed.map_err(|_| format!("invalid discriminant '{s}'"))
}

/// `a:b`, each end in either spelling.
pub fn parse_range(s: &str) -> Result<(i64, i64), String> {
    let (a, b) = s.split_once(':').ok_or_else(|| format!("invalid range '{s}', expected FROM:TO"))?;
    Ok((parse_disc(a)?, parse_disc(b)?))
}

#[derive(Debug)]
enum CliError {
    Usage(String),
    Io(io::Error),
}

impl From<io::Error> for CliError {
    fn from(e: io::Error) -> Self {
        CliError::Io(e)
    }
}

fn usage(e: impl ToString) -> CliError {
    CliError::Usage(e.to_string())
}

fn discriminant(d: i64) -> Result<Discriminant, CliError> {
    Discriminant::new(d).map_err(|e: ArithError| usage(e))
}

/// Parses `args` (including the program name) and runs the command,
/// writing results to `out` (unless `--out` is given) and diagnostics to `err`.
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_USAGE } else { EXIT_OK };
            let _ = if e.use_stderr() { write!(err, "{e}") } else { write!(out, "{e}") };
            return code;
        }
    };
    match execute(cli.command, out) {
        Ok(code) => code,
        Err(CliError::Usage(msg)) => {
            let _ = writeln!(err, "error: {msg}");
            EXIT_USAGE
        }
        Err(CliError::Io(e)) => {
            let _ = writeln!(err, "error: {e}");
            EXIT_USAGE
        }
    }
}

fn emit(out: &mut dyn Write, path: Option<PathBuf>, body: &str) -> Result<(), CliError> {
    match path {
        Some(p) => File::create(&p)?.write_all(body.as_bytes())?,
        None => out.write_all(body.as_bytes())?,
    }
    Ok(())
}

fn execute(command: Command, out: &mut dyn Write) -> Result<i32, CliError> {
    match command {
        Command::Classgroup { disc, format, out: path } => {
            let delta = discriminant(disc)?;
            let group = ClassGroup::new(&delta).map_err(usage)?;
            let summary = ClassGroupSummary::new(&group).map_err(usage)?;
            let body = match format {
                Format::Json => serde_json::to_string_pretty(&summary).expect("summary serializes") + "\n",
                Format::Csv => summary.to_csv(),
                Format::Text => summary.to_text(),
            };
            emit(out, path, &body)?;
            Ok(EXIT_OK)
        }
        Command::Series { disc, which, prec, format, out: path } => {
            let delta = discriminant(disc)?;
            let label: SeriesLabel = which.parse().map_err(usage)?;
            let book = SeriesBook::new(&delta, prec as usize).map_err(usage)?;
            let series = book.build(label).map_err(usage)?;
            let body = match format {
                Format::Json => serde_json::to_string(&series).map_err(usage)? + "\n",
                Format::Csv => series.to_csv(),
                Format::Text => series.to_text() + "\n",
            };
            emit(out, path, &body)?;
            Ok(EXIT_OK)
        }
        Command::Verify { disc, range, prec, primes, terms, skip_dirichlet, no_timing, format, out: path } => {
            let config = SuiteConfig {
                precision: prec as usize,
                primes_up_to: primes,
                dirichlet_terms: (!skip_dirichlet).then_some(terms),
                ..SuiteConfig::default()
            };
            let outcome = match (disc, range) {
                (Some(d), _) => {
                    let delta = discriminant(d)?;
                    SuiteOutcome { reports: vec![verify_discriminant(&delta, &config)], skipped: vec![] }
                }
                (None, Some((a, b))) => with_thread_cap(|| run_suite(a, b, &config))?,
                (None, None) => return Err(usage("one of --disc or --range is required")),
            };
            let outcome = if no_timing {
                SuiteOutcome {
                    reports: outcome.reports.into_iter().map(|r| r.without_timing()).collect(),
                    skipped: outcome.skipped,
                }
            } else {
                outcome
            };
            emit(out, path, &render_outcome(&outcome, format))?;
            Ok(if outcome.passed() { EXIT_OK } else { EXIT_FAILED })
        }
    }
}

fn with_thread_cap<R: Send>(f: impl FnOnce() -> R + Send) -> Result<R, CliError> {
    match std::env::var(THREADS_ENV) {
        Ok(v) => {
            let n: usize = v
                .trim()
                .parse()
                .ok()
                .filter(|&n| n >= 1)
                .ok_or_else(|| usage(format!("{THREADS_ENV} must be a positive integer, got '{v}'")))?;
            let pool = rayon::ThreadPoolBuilder::new().num_threads(n).build().map_err(usage)?;
            Ok(pool.install(f))
        }
        Err(_) => Ok(f()),
    }
}

fn render_outcome(outcome: &SuiteOutcome, format: Format) -> String {
    let mut s = String::new();
    match format {
        Format::Json => {
            for r in &outcome.reports {
                s.push_str(&r.to_json_line());
                s.push('\n');
            }
            for k in &outcome.skipped {
                s.push_str(&serde_json::to_string(k).expect("skip records serialize"));
                s.push('\n');
            }
        }
        Format::Csv => {
            s.push_str("delta,check,pass,skipped,elapsed_ms\n");
            for r in &outcome.reports {
                for c in &r.checks {
                    s.push_str(&format!(
                        "{},{},{},{},{}\n",
                        r.delta,
                        c.name,
                        c.pass,
                        c.skipped.as_deref().unwrap_or(""),
                        c.elapsed_ms
                    ));
                }
            }
        }
        Format::Text => {
            for r in &outcome.reports {
                s.push_str(&format!(
                    "Δ = {}  h = {}  t = {}  genera = {}  N = {}  {}\n",
                    r.delta,
                    r.h,
                    r.t,
                    r.genus_count,
                    r.precision,
                    if r.passed() { "PASS" } else { "FAIL" }
                ));
                for c in &r.checks {
                    let status = match (&c.skipped, c.pass) {
                        (Some(_), _) => "skip",
                        (None, true) => "ok",
                        (None, false) => "FAIL",
                    };
                    s.push_str(&format!("  {status:4} {:24} {}\n", c.name, c.detail));
                }
            }
            if !outcome.skipped.is_empty() {
                s.push_str(&format!("skipped {} non-fundamental values\n", outcome.skipped.len()));
            }
        }
    }
    s
}

#[derive(Debug, Serialize)]
struct CharacterRow {
    #[serde(flatten)]
    pair: CharacterPair,
    values: Vec<i32>,
}

/// Printable view of a class group.
#[derive(Debug, Serialize)]
struct ClassGroupSummary {
    delta: i64,
    h: usize,
    w: u32,
    t: usize,
    forms: Vec<ReducedForm>,
    composition: Vec<Vec<ClassIndex>>,
    squares: Vec<ClassIndex>,
    genera: Vec<(GenusId, Vec<ClassIndex>)>,
    characters: Vec<CharacterRow>,
}

impl ClassGroupSummary {
    fn new(group: &ClassGroup) -> Result<Self, crate::genus::GenusError> {
        let genus_ids: Vec<GenusId> = group.genus_ids().collect();
        let characters = character_table(group)?
            .into_iter()
            .map(|chi| CharacterRow { pair: chi.pair, values: genus_ids.iter().map(|&g| chi.value(g)).collect() })
            .collect();
        Ok(Self {
            delta: group.delta().value(),
            h: group.class_number(),
            w: group.delta().unit_count(),
            t: group.delta().prime_count(),
            forms: group.classes().to_vec(),
            composition: group.composition_table().to_vec(),
            squares: group.squares().iter().copied().collect(),
            genera: genus_ids.iter().map(|&g| (g, group.genus_members(g).to_vec())).collect(),
            characters,
        })
    }

    fn to_text(&self) -> String {
        let mut s = format!(
            "Δ = {}  h = {}  w = {}  t = {}  genera = {}\n\nclasses\n",
            self.delta,
            self.h,
            self.w,
            self.t,
            self.genera.len()
        );
        for (i, f) in self.forms.iter().enumerate() {
            s.push_str(&format!("  {i:>3}  {}\n", f.form()));
        }
        s.push_str("\ncomposition\n");
        for row in &self.composition {
            let cells: Vec<String> = row.iter().map(|c| format!("{:>3}", c.0)).collect();
            s.push_str(&format!("  {}\n", cells.join(" ")));
        }
        let sq: Vec<String> = self.squares.iter().map(|c| c.to_string()).collect();
        s.push_str(&format!("\nsquares  {{{}}}\n\ngenera\n", sq.join(", ")));
        for (g, members) in &self.genera {
            let m: Vec<String> = members.iter().map(|c| c.to_string()).collect();
            s.push_str(&format!("  {g:>3}  {{{}}}\n", m.join(", ")));
        }
        let labels: Vec<String> = self.characters.iter().map(|r| format!("({}, {})", r.pair.d, r.pair.neg)).collect();
        let width = labels.iter().map(|l| l.len()).max().unwrap_or(0).max(6);
        s.push_str(&format!("\ncharacters on genera\n  {:width$}", "(d, D)"));
        for (g, _) in &self.genera {
            s.push_str(&format!(" {g:>3}"));
        }
        s.push('\n');
        for (label, row) in labels.iter().zip(&self.characters) {
            s.push_str(&format!("  {label:width$}"));
            for v in &row.values {
                s.push_str(&format!(" {v:>3}"));
            }
            s.push('\n');
        }
        s
    }

    fn to_csv(&self) -> String {
        let mut s = String::from("index,a,b,c,genus\n");
        for (i, f) in self.forms.iter().enumerate() {
            let g = self.genera.iter().find(|(_, m)| m.contains(&ClassIndex(i))).map(|(g, _)| g.0).unwrap_or(0);
            s.push_str(&format!("{i},{},{},{},{g}\n", f.a(), f.b(), f.c()));
        }
        s
    }
}
