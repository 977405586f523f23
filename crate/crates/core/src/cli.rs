//! Command-line front end. `run` takes the argument list and output sinks
//! and returns the process exit code, so it is testable in-process.

use std::ffi::OsString;
use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};

use anyhow::Context;
use clap::{Args, Parser, Subcommand, ValueEnum};

use crate::error::Error;
use crate::ideal::{membership, validate_spec, SubspaceSpec};
use crate::norms::{equiv_norm_hp_sum, equiv_norm_sup_sum, hp_norm, sn_norm, QuadratureConfig, QuadratureMode, SpaceParams};
use crate::operators::OperatorDescriptor;
use crate::series::TaylorSeries;
use crate::verify::{run_suites, RunConfig, SuiteSelector};

pub const EXIT_PASS: i32 = 0;
pub const EXIT_FAIL: i32 = 1;
pub const EXIT_USAGE: i32 = 2;

/// Largest derivative depth accepted on the command line; factorial ratios
/// stay within double range below it.
pub const MAX_DEPTH: usize = 16;

#[derive(Debug, Parser)]
#[command(name = "hardy-lab", version, about = "Norms, operators and invariant subspaces of derivative Hardy spaces")]
struct Cli {
    #[command(flatten)]
    globals: Globals,
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Args)]
struct Globals {
    /// Largest accepted truncation order N.
    #[arg(long, global = true, default_value_t = 256)]
    order: usize,
    /// Quadrature nodes M.
    #[arg(long, global = true, default_value_t = QuadratureConfig::DEFAULT_POINTS)]
    points: usize,
    /// Membership and invariance tolerance.
    #[arg(long, global = true, default_value_t = 1e-9)]
    tol: f64,
    #[arg(long, global = true, default_value_t = 7)]
    seed: u64,
    /// Sampled elements per invariance check.
    #[arg(long, global = true, default_value_t = 100)]
    samples: usize,
    /// Write the main output here instead of stdout.
    #[arg(long, global = true)]
    out: Option<PathBuf>,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Print H^p, S_n^p and both equivalent norms of a series.
    Norm {
        series: PathBuf,
        #[arg(long, default_value_t = 1)]
        n: usize,
        #[arg(long, default_value_t = 2.0)]
        p: f64,
        #[arg(long, value_enum, default_value_t = Mode::Auto)]
        mode: Mode,
    },
    /// Apply an operator and print the resulting series.
    Apply {
        series: PathBuf,
        #[arg(long, value_enum)]
        op: OpKind,
        #[arg(long, default_value_t = 1)]
        n: usize,
        /// Symbol series file for the Volterra operator.
        #[arg(long)]
        g: Option<PathBuf>,
    },
    /// Run verification suites.
    Verify {
        /// lemma1, prop3, cor1, prop4, lemma5, parseval, thm1 or all.
        #[arg(long, default_value = "all")]
        suite: String,
        /// Run with deliberately broken operators; every suite is expected to fail.
        #[arg(long)]
        negative_control: bool,
    },
    /// Decide membership of a series in the subspace described by a spec file.
    Membership { series: PathBuf, spec: PathBuf },
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum Mode {
    Auto,
    Trapezoid,
    ExactParseval,
    PowerTrick,
}

impl From<Mode> for QuadratureMode {
    fn from(m: Mode) -> Self {
        match m {
            Mode::Auto => QuadratureMode::Auto,
            Mode::Trapezoid => QuadratureMode::Trapezoid,
            Mode::ExactParseval => QuadratureMode::ExactParseval,
            Mode::PowerTrick => QuadratureMode::PowerTrick,
        }
    }
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum OpKind {
    Shift,
    Volterra,
    Combined,
    Diff,
    Integrate,
}

/// Decimal with 15 significant digits; scientific outside `[1e-5, 1e15)`.
pub fn format_value(x: f64) -> String {
    if x == 0.0 || !x.is_finite() {
        return format!("{x}");
    }
    let exponent = x.abs().log10().floor() as i32;
    if (-5..15).contains(&exponent) {
        format!("{:.*}", (14 - exponent) as usize, x)
    } else {
        format!("{x:.14e}")
    }
}

/// Failure classes of a command; anything not a verdict maps to exit 2.
enum Outcome {
    Verdict(bool),
    Usage(anyhow::Error),
}

impl From<anyhow::Error> for Outcome {
    fn from(e: anyhow::Error) -> Self {
        Outcome::Usage(e)
    }
}

impl From<Error> for Outcome {
    fn from(e: Error) -> Self {
        Outcome::Usage(e.into())
    }
}

pub fn run<I, T>(args: I, stdout: &mut dyn Write, stderr: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_USAGE } else { EXIT_PASS };
            let _ = if e.use_stderr() { write!(stderr, "{e}") } else { write!(stdout, "{e}") };
            return code;
        }
    };
    let mut text = String::new();
    let outcome = dispatch(&cli, &mut text);
    if !text.is_empty() {
        let written = match &cli.globals.out {
            Some(path) => fs::write(path, &text).with_context(|| format!("writing {}", path.display())),
            None => stdout.write_all(text.as_bytes()).map_err(Into::into),
        };
        if let Err(e) = written {
            let _ = writeln!(stderr, "error: {e:#}");
            return EXIT_USAGE;
        }
    }
    match outcome {
        Ok(()) | Err(Outcome::Verdict(true)) => EXIT_PASS,
        Err(Outcome::Verdict(false)) => EXIT_FAIL,
        Err(Outcome::Usage(e)) => {
            let _ = writeln!(stderr, "error: {e:#}");
            EXIT_USAGE
        }
    }
}

fn dispatch(cli: &Cli, out: &mut String) -> Result<(), Outcome> {
    let g = &cli.globals;
    match &cli.command {
        Command::Norm { series, n, p, mode } => {
            let f = read_series(series, g.order)?;
            let n = check_depth(*n)?;
            let params = SpaceParams::new(n, *p)?;
            let q = QuadratureConfig::new(g.points, (*mode).into());
            out.push_str(&format!("quadrature: mode={} points={}\n", q.mode.name(), q.num_points));
            out.push_str(&format!("order: {}\n", f.order()));
            out.push_str(&format!("H^p (p={p}): {}\n", format_value(hp_norm(&f, *p, &q)?)));
            out.push_str(&format!("S_n^p (n={n}, p={p}): {}\n", format_value(sn_norm(&f, params, &q)?)));
            out.push_str(&format!("equivalent hp-sum: {}\n", format_value(equiv_norm_hp_sum(&f, params, &q)?)));
            out.push_str(&format!("equivalent sup-sum: {}\n", format_value(equiv_norm_sup_sum(&f, params, &q)?)));
            Ok(())
        }
        Command::Apply { series, op, n, g: symbol } => {
            let f = read_series(series, g.order)?;
            let n = check_depth(*n)?;
            let descriptor = match op {
                OpKind::Shift => OperatorDescriptor::Shift,
                OpKind::Volterra => {
                    let path = symbol.as_ref().context("--g is required for the volterra operator")?;
                    OperatorDescriptor::Volterra { g: read_series(path, g.order)? }
                }
                OpKind::Combined => OperatorDescriptor::Combined { n },
                OpKind::Diff => OperatorDescriptor::Diff { n },
                OpKind::Integrate => OperatorDescriptor::Integrate { n },
            };
            descriptor.validate()?;
            let result = descriptor.apply(&f)?;
            out.push_str(&result.to_json());
            out.push('\n');
            Ok(())
        }
        Command::Verify { suite, negative_control } => {
            let selector: SuiteSelector = suite.parse()?;
            let cfg = RunConfig {
                order: g.order,
                points: g.points,
                tol: g.tol,
                seed: g.seed,
                samples: g.samples,
                negative_control: *negative_control,
            };
            let (text, passed) = run_suites(&selector, &cfg)?;
            out.push_str(&text);
            Err(Outcome::Verdict(passed))
        }
        Command::Membership { series, spec } => {
            let f = read_series(series, g.order)?;
            let text = fs::read_to_string(spec).with_context(|| format!("reading {}", spec.display()))?;
            let spec = SubspaceSpec::from_json(&text).with_context(|| format!("parsing {}", spec_path(spec)))?;
            let structure = validate_spec(&spec);
            if !structure.passed() {
                let failed: Vec<&str> = structure.failures().map(|c| c.id.as_str()).collect();
                return Err(Outcome::Usage(anyhow::anyhow!("invalid spec: {}", failed.join(", "))));
            }
            let verdict = membership(&f, &spec, g.tol)?;
            out.push_str(&format!("member: {}\n", verdict.member));
            out.push_str(&format!("order: {}\n", verdict.order));
            for c in &verdict.conditions {
                let residual = c.residual.map(format_value).unwrap_or_else(|| "n/a".into());
                out.push_str(&format!(
                    "{}: {}, residual={}\n",
                    c.name,
                    if c.passed { "PASS" } else { "FAIL" },
                    residual
                ));
            }
            Err(Outcome::Verdict(verdict.member))
        }
    }
}

fn spec_path(p: &Path) -> String {
    p.display().to_string()
}

fn check_depth(n: usize) -> anyhow::Result<usize> {
    anyhow::ensure!(n <= MAX_DEPTH, "n = {n} exceeds the command-line cap of {MAX_DEPTH}");
    Ok(n)
}

fn read_series(path: &Path, max_order: usize) -> anyhow::Result<TaylorSeries> {
    let text = fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
    let f = TaylorSeries::from_json(&text).with_context(|| format!("parsing {}", path.display()))?;
    anyhow::ensure!(f.order() <= max_order, "series order {} exceeds --order {max_order}", f.order());
    Ok(f)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn formatting() {
        assert_eq!(format_value(1.0), "1.00000000000000");
        assert_eq!(format_value(4.0 / std::f64::consts::PI), "1.27323954473516");
        assert_eq!(format_value(120.0), "120.000000000000");
        assert_eq!(format_value(0.0), "0");
        assert_eq!(format_value(1e-7), "1.00000000000000e-7");
    }

    #[test]
    fn unknown_subcommand_is_usage_error() {
        let (mut out, mut err) = (Vec::new(), Vec::new());
        assert_eq!(run(["hardy-lab", "frobnicate"], &mut out, &mut err), EXIT_USAGE);
        assert_eq!(run(["hardy-lab", "verify", "--suite", "nonexistent"], &mut out, &mut err), EXIT_USAGE);
    }
}
