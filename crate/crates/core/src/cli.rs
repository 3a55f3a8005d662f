//! Command-line front end: `validate`, `chern`, `verify` and `compare`.
//!
//! Exit codes: 0 pass, 1 check failure, 2 parse error, 3 precondition failure.

use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Parser, Subcommand, ValueEnum};

use crate::algebra::DescriptorError;
use crate::chern::{
    chern_direct, chern_finite, chern_oracle, compare, homologous, verify::certify, ChernError,
    ChernInput, ChernResult,
};
use crate::hochschild::{BarChain, TruncationCaps, UChain};
use crate::manifest::{Manifest, ManifestError};
use crate::nonunital::IotaReading;
use crate::report::{outcome_label, ReportDocument, WitnessSection};
use crate::scalar::rat;
use crate::suites::{inject_fault, run_suite, Suite, SuiteConfig, SuiteReport};

pub const EXIT_PASS: i32 = 0;
pub const EXIT_FAIL: i32 = 1;
pub const EXIT_PARSE: i32 = 2;
pub const EXIT_PRECONDITION: i32 = 3;

/// Environment variable capping the number of worker threads.
pub const THREADS_VAR: &str = "CURVCHERN_THREADS";

#[derive(Debug, Parser)]
#[command(
    name = "curvchern",
    version,
    about = "Exact Chern character cocycles over curved dg algebras"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
pub enum Format {
    Json,
    Text,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
pub enum MethodArg {
    Direct,
    Oracle,
    Finite,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
pub enum SuiteArg {
    Algebra,
    Operators,
    Lemma,
    Homotopy,
    Trace,
    Cocycle,
    All,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
pub enum ReadingArg {
    Literal,
    Short,
}

impl From<ReadingArg> for IotaReading {
    fn from(r: ReadingArg) -> Self {
        match r {
            ReadingArg::Literal => IotaReading::Literal,
            ReadingArg::Short => IotaReading::Short,
        }
    }
}

#[derive(Debug, Clone, clap::Args)]
pub struct CapsArgs {
    /// highest power of u kept (defaults to the manifest)
    #[arg(long)]
    pub u_order: Option<u32>,
    /// longest bar word kept (defaults to the manifest)
    #[arg(long)]
    pub max_length: Option<usize>,
}

impl CapsArgs {
    fn apply(&self, caps: TruncationCaps) -> TruncationCaps {
        TruncationCaps::new(
            self.u_order.unwrap_or(caps.u_order),
            self.max_length.unwrap_or(caps.max_length),
        )
    }
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Check the cdg axioms and the module data of a manifest.
    Validate { manifest: PathBuf },
    /// Compute the Chern character and print its report document.
    Chern {
        manifest: PathBuf,
        #[arg(long, value_enum, default_value = "direct")]
        method: MethodArg,
        #[command(flatten)]
        caps: CapsArgs,
        #[arg(long, value_enum, default_value = "json")]
        format: Format,
        /// print the chain without certifying it
        #[arg(long)]
        no_verify: bool,
        /// also search for a homology between the result and the character
        /// of another manifest over the same algebra
        #[arg(long, value_name = "MANIFEST")]
        homologous_to: Option<PathBuf>,
        #[arg(long, value_enum, default_value = "literal", hide = true)]
        iota_reading: ReadingArg,
        #[arg(long, hide = true)]
        inject_fault: bool,
    },
    /// Run identity suites against the manifest.
    Verify {
        manifest: PathBuf,
        #[arg(long, value_enum, default_value = "all")]
        suite: SuiteArg,
        /// random samples per identity
        #[arg(long, default_value_t = 100)]
        samples: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, value_enum, default_value = "text")]
        format: Format,
        #[arg(long, value_enum, default_value = "literal", hide = true)]
        iota_reading: ReadingArg,
    },
    /// Compare the closed formula against the categorical oracle.
    Compare {
        manifest: PathBuf,
        #[command(flatten)]
        caps: CapsArgs,
        #[arg(long, hide = true)]
        inject_fault: bool,
    },
}

/// Sizes the global rayon pool from [`THREADS_VAR`]; a no-op once the pool exists.
pub fn configure_threads() {
    let Some(n) = std::env::var(THREADS_VAR)
        .ok()
        .and_then(|v| v.trim().parse::<usize>().ok())
    else {
        return;
    };
    if n > 0 {
        let _ = rayon::ThreadPoolBuilder::new()
            .num_threads(n)
            .build_global();
    }
}

/// Parses `args` (including the program name) and runs the command.
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            // --help and --version are not errors
            if e.use_stderr() {
                let _ = write!(err, "{}", e.render());
                return EXIT_PARSE;
            }
            let _ = write!(out, "{}", e.render());
            return EXIT_PASS;
        }
    };
    execute(&cli.command, out, err)
}

pub fn execute(cmd: &Command, out: &mut dyn Write, err: &mut dyn Write) -> i32 {
    let result = match cmd {
        Command::Validate { manifest } => cmd_validate(manifest, out),
        Command::Chern {
            manifest,
            method,
            caps,
            format,
            no_verify,
            homologous_to,
            iota_reading,
            inject_fault,
        } => {
            let opts = ChernOptions {
                method: *method,
                format: *format,
                verify: !no_verify,
                homologous_to: homologous_to.as_deref(),
                reading: (*iota_reading).into(),
                inject_fault: *inject_fault,
            };
            cmd_chern(manifest, caps, &opts, out)
        }
        Command::Verify {
            manifest,
            suite,
            samples,
            seed,
            format,
            iota_reading,
        } => {
            let cfg = SuiteConfig {
                samples: *samples,
                seed: *seed,
                reading: (*iota_reading).into(),
            };
            cmd_verify(manifest, *suite, &cfg, *format, out)
        }
        Command::Compare {
            manifest,
            caps,
            inject_fault,
        } => cmd_compare(manifest, caps, *inject_fault, out),
    };
    match result {
        Ok(code) => code,
        Err(e) => {
            let _ = writeln!(err, "error: {}", e.message);
            e.code
        }
    }
}

#[derive(Debug)]
struct Failure {
    code: i32,
    message: String,
}

impl Failure {
    fn precondition(message: impl Into<String>) -> Self {
        Failure {
            code: EXIT_PRECONDITION,
            message: message.into(),
        }
    }
}

impl From<ManifestError> for Failure {
    fn from(e: ManifestError) -> Self {
        let code = if e.is_parse_error() {
            EXIT_PARSE
        } else {
            EXIT_PRECONDITION
        };
        Failure {
            code,
            message: e.to_string(),
        }
    }
}

impl From<ChernError> for Failure {
    fn from(e: ChernError) -> Self {
        Failure::precondition(e.to_string())
    }
}

impl From<std::io::Error> for Failure {
    fn from(e: std::io::Error) -> Self {
        Failure {
            code: EXIT_FAIL,
            message: format!("cannot write output: {e}"),
        }
    }
}

fn load(path: &Path, caps: Option<&CapsArgs>) -> Result<ChernInput, Failure> {
    let m = Manifest::load(path)?;
    let caps = caps.map_or(m.truncation, |c| c.apply(m.truncation));
    Ok(m.build_with_caps(caps)?)
}

fn cmd_validate(path: &Path, out: &mut dyn Write) -> Result<i32, Failure> {
    let m = Manifest::load(path)?;
    let algebra = match m.algebra() {
        Ok(a) => a,
        Err(ManifestError::Descriptor(DescriptorError::Invalid(v))) => {
            write!(out, "invalid: {v}")?;
            return Ok(EXIT_FAIL);
        }
        Err(e) => return Err(e.into()),
    };
    let input = match m.build() {
        Ok(i) => i,
        Err(e) if e.is_parse_error() => return Err(e.into()),
        Err(e) => {
            writeln!(out, "invalid: {e}")?;
            return Ok(EXIT_FAIL);
        }
    };
    writeln!(
        out,
        "valid: {} basis elements, {:?} grading, {}, module rank {}, caps (u_order {}, max_length {})",
        algebra.dim(),
        algebra.grading(),
        if algebra.has_curvature() { "curved" } else { "uncurved" },
        input.size(),
        input.caps.u_order,
        input.caps.max_length
    )?;
    Ok(EXIT_PASS)
}

struct ChernOptions<'a> {
    method: MethodArg,
    format: Format,
    verify: bool,
    homologous_to: Option<&'a Path>,
    reading: IotaReading,
    inject_fault: bool,
}

fn compute(
    input: &ChernInput,
    method: MethodArg,
    reading: IotaReading,
) -> Result<ChernResult, ChernError> {
    match method {
        MethodArg::Direct => chern_direct(input),
        MethodArg::Oracle => chern_oracle(input, reading),
        MethodArg::Finite => chern_finite(input),
    }
}

fn cmd_chern(
    path: &Path,
    caps: &CapsArgs,
    opts: &ChernOptions,
    out: &mut dyn Write,
) -> Result<i32, Failure> {
    let input = load(path, Some(caps))?;
    let mut result = compute(&input, opts.method, opts.reading)?;
    if opts.inject_fault {
        let bad = inject_fault(&result.chain).ok_or_else(|| {
            Failure::precondition("no coefficient is visible on a conclusive stratum")
        })?;
        result.report = certify(&bad, result.report.checks.clone());
        result.chain = bad;
    }
    let mut doc = ReportDocument::new(&result, opts.verify);
    if let Some(other) = opts.homologous_to {
        let other_input = load(other, Some(caps))?;
        if other_input.algebra.labels() != input.algebra.labels() {
            return Err(Failure::precondition(
                "--homologous-to needs a manifest over the same algebra",
            ));
        }
        let z2 = compute(&other_input, opts.method, opts.reading)?.chain;
        let outcome = homologous(&result.chain, &z2, result.chain.caps(), &[])?;
        doc = doc.with_witnesses(WitnessSection::new(other.display().to_string(), &outcome));
    }
    match opts.format {
        Format::Json => out.write_all(doc.to_json().as_bytes())?,
        Format::Text => out.write_all(doc.to_text().as_bytes())?,
    }
    Ok(if doc.passed() { EXIT_PASS } else { EXIT_FAIL })
}

fn cmd_verify(
    path: &Path,
    suite: SuiteArg,
    cfg: &SuiteConfig,
    format: Format,
    out: &mut dyn Write,
) -> Result<i32, Failure> {
    let input = load(path, None)?;
    let suites: Vec<Suite> = match suite {
        SuiteArg::Algebra => vec![Suite::Algebra],
        SuiteArg::Operators => vec![Suite::Operators],
        SuiteArg::Lemma => vec![Suite::Lemma],
        SuiteArg::Homotopy => vec![Suite::Homotopy],
        SuiteArg::Trace => vec![Suite::Trace],
        SuiteArg::Cocycle => vec![Suite::Cocycle],
        SuiteArg::All => Suite::ALL.to_vec(),
    };
    let reports: Vec<SuiteReport> = suites
        .into_iter()
        .map(|s| run_suite(&input, s, cfg))
        .collect();
    match format {
        Format::Json => {
            let mut s = serde_json::to_string_pretty(&reports).expect("suite reports serialize");
            s.push('\n');
            out.write_all(s.as_bytes())?;
        }
        Format::Text => {
            for r in &reports {
                writeln!(
                    out,
                    "suite {}: {}",
                    r.suite.name(),
                    if r.passed() { "pass" } else { "FAIL" }
                )?;
                for c in &r.checks {
                    write!(
                        out,
                        "  {:<13} {} ({} strata checked, {} inconclusive)",
                        outcome_label(c.outcome),
                        c.name,
                        c.strata_checked,
                        c.strata_inconclusive
                    )?;
                    if let Some(d) = &c.detail {
                        write!(out, ": {d}")?;
                    }
                    writeln!(out)?;
                }
            }
        }
    }
    Ok(if reports.iter().all(SuiteReport::passed) {
        EXIT_PASS
    } else {
        EXIT_FAIL
    })
}

/// Adds `1` to the first term whose change `compare` can see against
/// `reference`; on a zero chain, plants the unit word at `u^0`.
pub fn corrupt_coefficient(chain: &UChain, reference: &UChain) -> UChain {
    for (k, ck) in chain.coeffs() {
        for (w, _) in ck.terms() {
            let single = BarChain::from_words(
                chain.ctx().clone(),
                chain.mode(),
                [(w.letters().to_vec(), rat(1))],
            )
            .expect("existing word");
            let mut bad = chain.clone();
            bad.add_at(k, &single, "fault");
            if compare(&bad, reference).first.is_some() {
                return bad;
            }
        }
    }
    let ctx = chain.ctx();
    let unit = ctx.identity(0);
    let single = BarChain::from_words(ctx.clone(), chain.mode(), [(vec![unit], rat(1))])
        .expect("identity word");
    let mut bad = chain.clone();
    bad.add_at(0, &single, "fault");
    bad
}

fn cmd_compare(
    path: &Path,
    caps: &CapsArgs,
    fault: bool,
    out: &mut dyn Write,
) -> Result<i32, Failure> {
    let input = load(path, Some(caps))?;
    let direct = chern_direct(&input)?.chain;
    let oracle = match chern_oracle(&input, IotaReading::Literal) {
        Ok(r) => r.chain,
        Err(ChernError::CapsExceeded(why)) => {
            writeln!(
                out,
                "warning: all strata inconclusive ({why}); nothing was compared"
            )?;
            return Ok(EXIT_PASS);
        }
        Err(e) => return Err(e.into()),
    };
    let direct = if fault {
        corrupt_coefficient(&direct, &oracle)
    } else {
        direct
    };
    let cmp = compare(&direct, &oracle);
    if let Some((k, len, diff)) = &cmp.first {
        writeln!(
            out,
            "differ at stratum u^{k}, length {len}: direct - oracle = {diff}"
        )?;
        return Ok(EXIT_FAIL);
    }
    if cmp.checked == 0 {
        writeln!(
            out,
            "warning: all strata inconclusive ({} skipped); nothing was compared",
            cmp.skipped
        )?;
        return Ok(EXIT_PASS);
    }
    writeln!(
        out,
        "equal: direct = oracle ({} terms) on {} conclusive strata, {} skipped as truncated",
        direct.num_terms(),
        cmp.checked,
        cmp.skipped
    )?;
    Ok(EXIT_PASS)
}
