use std::ffi::OsString;
use std::path::PathBuf;
use std::time::Instant;

use clap::error::ErrorKind;
use clap::{Args, Parser, Subcommand};
use sumsq_core::classifier::{build_ledger, certificate_for, eliminate_case_general, LedgerScope};
use sumsq_core::engine::{Family, FamilyKind, SignAssignment};
use sumsq_core::repr::is_representable;
use sumsq_core::{Error, ReprTable, Result};

use crate::exit;
use crate::parallel::{classify_parallel, verify_parallel};
use crate::render::{render_report, Format, FullReport, ReprResult, VerifyResult};
use crate::signs::{parse_override, parse_sign_file};

#[derive(Debug, Parser)]
#[command(
    name = "sumsq",
    version,
    about = "Exact checks for f(x1^2+...+xk^2) = f(x1)^2+...+f(xk)^2"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Args)]
struct Output {
    /// Output format (default: json; markdown for `report`)
    #[arg(long, value_enum)]
    format: Option<Format>,
    /// Shorthand for --format json
    #[arg(long)]
    json: bool,
}

impl Output {
    fn resolve(&self, default: Format) -> Result<Format> {
        match (self.json, self.format) {
            (true, Some(Format::Markdown)) => Err(Error::Input("--json conflicts with --format markdown".into())),
            (true, _) => Ok(Format::Json),
            (false, f) => Ok(f.unwrap_or(default)),
        }
    }
}

/// `3`, `4`, any larger integer, or `general` for symbolic `k >= 5`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum KSel {
    Concrete(u64),
    General,
}

fn parse_ksel(s: &str) -> std::result::Result<KSel, String> {
    if s == "general" {
        return Ok(KSel::General);
    }
    match s.parse::<u64>() {
        Ok(k) if k >= 3 => Ok(KSel::Concrete(k)),
        _ => Err(format!("expected an integer >= 3 or \"general\", got {s:?}")),
    }
}

fn parse_k(s: &str) -> std::result::Result<usize, String> {
    match s.parse::<usize>() {
        Ok(k) if k >= 3 => Ok(k),
        _ => Err(format!("expected an integer >= 3, got {s:?}")),
    }
}

fn parse_family(s: &str) -> std::result::Result<FamilyKind, String> {
    s.parse().map_err(|e: Error| e.to_string())
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Is n a sum of exactly k positive squares?
    Repr {
        #[arg(long, value_parser = parse_k)]
        k: usize,
        #[arg(long)]
        n: u64,
        #[command(flatten)]
        output: Output,
    },
    /// Check every instance with n <= N against one family
    Verify {
        #[arg(long, value_parser = parse_k)]
        k: usize,
        #[arg(long = "N")]
        bound: u64,
        #[arg(long, value_parser = parse_family)]
        family: FamilyKind,
        /// Random signs at non-representable n from this seed
        #[arg(long, conflicts_with = "signs_file")]
        sign_seed: Option<u64>,
        /// File of `n:+1` / `n:-1` lines
        #[arg(long)]
        signs_file: Option<PathBuf>,
        /// Replace a value, e.g. f(3)=2; repeatable
        #[arg(long = "override")]
        overrides: Vec<String>,
        #[arg(long, default_value_t = 1, value_parser = clap::value_parser!(u64).range(1..))]
        threads: u64,
        #[command(flatten)]
        output: Output,
    },
    /// Seeds from the case certificate, propagated and verified up to N
    Classify {
        #[arg(long, value_parser = parse_k)]
        k: usize,
        #[arg(long = "N")]
        bound: u64,
        #[arg(long, default_value_t = 1, value_parser = clap::value_parser!(u64).range(1..))]
        threads: u64,
        #[command(flatten)]
        output: Output,
    },
    /// Build and validate the identity ledger
    Identities {
        #[arg(long, value_parser = parse_ksel)]
        k: KSel,
        #[command(flatten)]
        output: Output,
    },
    /// Build and replay the elimination certificate
    Certify {
        #[arg(long, value_parser = parse_ksel)]
        k: KSel,
        #[command(flatten)]
        output: Output,
    },
    /// Ledger, certificate and classification together
    Report {
        #[arg(long, value_parser = parse_k)]
        k: usize,
        #[arg(long = "N")]
        bound: u64,
        #[arg(long, default_value_t = 1, value_parser = clap::value_parser!(u64).range(1..))]
        threads: u64,
        #[command(flatten)]
        output: Output,
    },
}

/// Exit code and captured streams of one invocation.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Outcome {
    pub code: i32,
    pub stdout: String,
    pub stderr: String,
}

struct Done {
    text: String,
    passed: bool,
    log: String,
}

fn done(text: String, passed: bool, log: String) -> Result<Done> {
    Ok(Done { text, passed, log })
}

fn check_bound(bound: u64) -> Result<()> {
    if bound == 0 {
        return Err(Error::Input("N must be positive".into()));
    }
    Ok(())
}

fn execute(cmd: Command) -> Result<Done> {
    let start = Instant::now();
    match cmd {
        Command::Repr { k, n, output } => {
            let format = output.resolve(Format::Json)?;
            let (representable, witness) = is_representable(n, k)?;
            let r = ReprResult {
                n,
                k,
                representable,
                witness,
            };
            done(render_report(&r, format), true, String::new())
        }
        Command::Verify {
            k,
            bound,
            family,
            sign_seed,
            signs_file,
            overrides,
            threads,
            output,
        } => {
            let format = output.resolve(Format::Json)?;
            check_bound(bound)?;
            let overrides = overrides
                .iter()
                .map(|o| parse_override(o))
                .collect::<Result<Vec<_>>>()?;
            let file_signs = match &signs_file {
                Some(path) => {
                    let text = std::fs::read_to_string(path)
                        .map_err(|e| Error::Input(format!("cannot read {}: {e}", path.display())))?;
                    Some(parse_sign_file(&text)?)
                }
                None => None,
            };
            let table = ReprTable::new(bound, k)?;
            let signs = match (sign_seed, file_signs) {
                (Some(seed), _) => SignAssignment::random(&table, bound, seed),
                (None, Some(s)) => s,
                (None, None) => SignAssignment::all_plus(),
            };
            let minus_signs = signs.minus_count();
            let mut fam = Family::new(family, &table, bound, signs)?;
            for (n, v) in &overrides {
                fam = fam.with_override(*n, v.clone())?;
            }
            let report = verify_parallel(&fam, &table, bound, threads as usize)?;
            let passed = report.passed();
            let log = format!(
                "verify: {} instances, {} violations, {:.2?}\n",
                report.instances,
                report.violations.len(),
                start.elapsed()
            );
            let r = VerifyResult {
                family,
                minus_signs,
                overrides: fam.overrides().clone(),
                report,
            };
            done(render_report(&r, format), passed, log)
        }
        Command::Classify {
            k,
            bound,
            threads,
            output,
        } => {
            let format = output.resolve(Format::Json)?;
            check_bound(bound)?;
            let c = classify_parallel(bound, k, threads as usize)?;
            let log = format!("classify: {} seeds, {:.2?}\n", c.outcomes.len(), start.elapsed());
            done(render_report(&c, format), c.passed(), log)
        }
        Command::Identities { k, output } => {
            let format = output.resolve(Format::Json)?;
            let scope = match k {
                KSel::Concrete(k) => LedgerScope::Concrete(k),
                KSel::General => LedgerScope::Symbolic,
            };
            let ledger = build_ledger(scope)?;
            let log = format!("identities: {} records validated\n", ledger.records.len());
            done(render_report(&ledger, format), true, log)
        }
        Command::Certify { k, output } => {
            let format = output.resolve(Format::Json)?;
            let cert = match k {
                KSel::Concrete(k) => certificate_for(k)?,
                KSel::General => eliminate_case_general()?,
            };
            cert.replay()?;
            let log = format!("certify: {} steps replayed, {:.2?}\n", cert.steps.len(), start.elapsed());
            done(render_report(&cert, format), true, log)
        }
        Command::Report {
            k,
            bound,
            threads,
            output,
        } => {
            let format = output.resolve(Format::Markdown)?;
            check_bound(bound)?;
            let certificate = certificate_for(k as u64)?;
            certificate.replay()?;
            let ledger = build_ledger(LedgerScope::Concrete(k as u64))?;
            let classification = classify_parallel(bound, k, threads as usize)?;
            let passed = classification.passed();
            let r = FullReport {
                ledger,
                certificate,
                classification,
            };
            done(render_report(&r, format), passed, String::new())
        }
    }
}

/// Parses `argv` (program name first), runs the subcommand and captures its output.
pub fn run<I, S>(argv: I) -> Outcome
where
    I: IntoIterator<Item = S>,
    S: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(argv) {
        Ok(c) => c,
        Err(e) => {
            let text = e.render().to_string();
            return match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => Outcome {
                    code: exit::OK,
                    stdout: text,
                    stderr: String::new(),
                },
                _ => Outcome {
                    code: exit::USAGE,
                    stdout: String::new(),
                    stderr: text,
                },
            };
        }
    };
    match execute(cli.command) {
        Ok(d) => Outcome {
            code: if d.passed { exit::OK } else { exit::CHECK_FAILED },
            stdout: d.text,
            stderr: d.log,
        },
        Err(e) => Outcome {
            code: exit::for_error(&e),
            stdout: String::new(),
            stderr: format!("error: {e}\n"),
        },
    }
}
