//! Command-line front end. [`run`] takes argv and explicit streams so tests
//! can drive it in-process.

use std::ffi::OsString;
use std::io::{Read, Write};
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};

use crate::algebra::{self, CheckMode, Identity};
use crate::fock::{self, FockBasis, Spin};
use crate::frame;
use crate::potential::{self, MexicanHatParams, PotentialParams, ScanGrid};
use crate::rewrite;
use crate::term;

#[derive(Parser, Debug)]
#[command(name = "nonassoc", version, about = "Nonassociative operator decomposition workbench")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Debug)]
struct ExprInput {
    /// Expression file, one term per nonblank line (`#` starts a comment
    /// line). Reads standard input when absent.
    file: Option<PathBuf>,
    /// Single expression given inline.
    #[arg(long, conflicts_with = "file")]
    expr: Option<String>,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Parse terms and print them canonically.
    Parse(ExprInput),
    /// Rewrite terms to observable normal form.
    Normalize {
        #[command(flatten)]
        input: ExprInput,
        /// Set every mu2 symbol to zero before printing.
        #[arg(long)]
        associative_limit: bool,
    },
    /// Certify identities on a Cayley-Dickson algebra.
    Identities {
        /// Doubling level k; the algebra has dimension 2^k.
        #[arg(long)]
        level: u32,
        /// associative, flexible, alternative, jordan, power-associative,
        /// lie-admissible, unitary or all.
        #[arg(long, default_value = "all", value_parser = parse_identity_name)]
        identity: IdentityName,
        #[arg(long, value_enum, default_value_t = ModeArg::Exhaustive)]
        mode: ModeArg,
        #[arg(long, default_value_t = algebra::DEFAULT_TRIALS)]
        trials: u32,
        #[arg(long, default_value_t = algebra::DEFAULT_SEED)]
        seed: u64,
        /// Highest power checked by power-associative.
        #[arg(long, default_value_t = algebra::MAX_POWER)]
        power: u32,
    },
    /// Verify the projected slave-boson algebra on a truncated Fock space.
    FockVerify {
        #[arg(long, default_value_t = 1)]
        sites: usize,
        /// Boson occupation cutoff per site.
        #[arg(long, default_value_t = 1)]
        nb: usize,
        /// Print one operator matrix instead of the relation report.
        #[arg(long, value_enum)]
        export: Option<ExportArg>,
        /// Site for `--export constraint|electron` (0-based).
        #[arg(long, default_value_t = 0)]
        site: usize,
        /// Spin for `--export electron`.
        #[arg(long, default_value = "up")]
        spin: String,
    },
    /// Factor gauge snapshots into magnitude matrix and orthonormal frame.
    Decompose {
        /// Snapshot file; reads standard input when absent.
        file: Option<PathBuf>,
        #[arg(long, default_value_t = frame::DEFAULT_TOLERANCE)]
        tol: f64,
    },
    /// Locate the minima of the one-loop effective potential.
    Potential {
        #[arg(long, value_delimiter = ',', required = true)]
        alpha: Vec<f64>,
        #[arg(long, value_delimiter = ',', required = true)]
        g: Vec<f64>,
        #[arg(long = "mu-bar", value_delimiter = ',', required = true)]
        mu_bar: Vec<f64>,
        #[arg(long, default_value_t = 1e-10)]
        tol: f64,
        /// Also print a comparison with (phi^2 - mu_sq)^2.
        #[arg(long = "mu-sq", allow_hyphen_values = true)]
        mu_sq: Option<f64>,
    },
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum ModeArg {
    Exhaustive,
    Randomized,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum ExportArg {
    /// Product of all constraint projectors.
    Projector,
    /// Constraint operator of `--site`.
    Constraint,
    /// Electron creation operator of `--site`, `--spin`.
    Electron,
}

#[derive(Clone, Copy, Debug)]
enum IdentityName {
    All,
    One(fn(u32) -> Identity),
}

fn parse_identity_name(s: &str) -> Result<IdentityName, String> {
    let one = |f: fn(u32) -> Identity| Ok(IdentityName::One(f));
    match s {
        "all" => Ok(IdentityName::All),
        "associative" => one(|_| Identity::Associative),
        "flexible" => one(|_| Identity::Flexible),
        "alternative" => one(|_| Identity::Alternative),
        "jordan" => one(|_| Identity::Jordan),
        "power-associative" => one(Identity::PowerAssociative),
        "lie-admissible" => one(|_| Identity::LieAdmissible),
        "unitary" => one(|_| Identity::Unitary),
        _ => Err(format!("unknown identity `{s}`")),
    }
}

/// Domain failure: printed as `error: <kind>: <detail>`, exit status 1.
#[derive(Debug)]
struct Failure {
    kind: &'static str,
    detail: String,
}

impl Failure {
    fn new(kind: &'static str, detail: impl ToString) -> Self {
        Failure {
            kind,
            detail: detail.to_string(),
        }
    }
}

macro_rules! failure_from {
    ($($t:ty),*) => {$(
        impl From<$t> for Failure {
            fn from(e: $t) -> Self {
                Failure::new(e.kind(), &e)
            }
        }
    )*};
}

failure_from!(
    rewrite::RewriteError,
    algebra::AlgebraError,
    fock::FockError,
    frame::FrameError,
    potential::PotentialError
);

/// Runs one invocation and returns the exit status: 0 on success, 1 on a
/// domain error, 2 on a usage error.
pub fn run<I, T>(args: I, stdin: &mut dyn Read, stdout: &mut dyn Write, stderr: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            use clap::error::ErrorKind;
            let text = e.render().to_string();
            return match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => {
                    let _ = stdout.write_all(text.as_bytes());
                    0
                }
                _ => {
                    let _ = stderr.write_all(text.as_bytes());
                    2
                }
            };
        }
    };
    let mut out = String::new();
    match dispatch(cli.command, stdin, &mut out) {
        Ok(()) => {
            if stdout.write_all(out.as_bytes()).and_then(|_| stdout.flush()).is_err() {
                return 1;
            }
            0
        }
        Err(f) => {
            let detail = f.detail.replace('\n', " ");
            let _ = writeln!(stderr, "error: {}: {}", f.kind, detail);
            1
        }
    }
}

fn read_source(file: Option<&PathBuf>, stdin: &mut dyn Read) -> Result<String, Failure> {
    let mut text = String::new();
    match file {
        Some(path) => {
            text = std::fs::read_to_string(path).map_err(|e| Failure::new("Io", format!("{}: {e}", path.display())))?;
        }
        None => {
            stdin
                .read_to_string(&mut text)
                .map_err(|e| Failure::new("Io", format!("stdin: {e}")))?;
        }
    }
    Ok(text)
}

fn read_terms(input: &ExprInput, stdin: &mut dyn Read) -> Result<Vec<term::Term>, Failure> {
    if let Some(expr) = &input.expr {
        return term::parse(expr)
            .map(|t| vec![t])
            .map_err(|e| Failure::new(e.kind.name(), e));
    }
    let text = read_source(input.file.as_ref(), stdin)?;
    let mut terms = Vec::new();
    for (n, line) in text.lines().enumerate() {
        let trimmed = line.trim();
        if trimmed.is_empty() || trimmed.starts_with('#') {
            continue;
        }
        let t = term::parse(trimmed).map_err(|e| Failure::new(e.kind.name(), format!("line {}: {e}", n + 1)))?;
        terms.push(t);
    }
    if terms.is_empty() {
        return Err(Failure::new("EmptyInput", "no expression found"));
    }
    Ok(terms)
}

fn dispatch(cmd: Command, stdin: &mut dyn Read, out: &mut String) -> Result<(), Failure> {
    use std::fmt::Write as _;
    match cmd {
        Command::Parse(input) => {
            for t in read_terms(&input, stdin)? {
                let _ = writeln!(out, "{}", term::print(&t));
            }
        }
        Command::Normalize {
            input,
            associative_limit,
        } => {
            for t in read_terms(&input, stdin)? {
                let mut p = rewrite::normalize(&t)?;
                if associative_limit {
                    p = p.associative_limit();
                }
                let _ = writeln!(out, "{p}");
            }
        }
        Command::Identities {
            level,
            identity,
            mode,
            trials,
            seed,
            power,
        } => {
            let mode = match mode {
                ModeArg::Exhaustive => CheckMode::ExhaustiveBasis,
                ModeArg::Randomized => CheckMode::Randomized { trials, seed },
            };
            let list: Vec<Identity> = match identity {
                IdentityName::All => Identity::all(power).to_vec(),
                IdentityName::One(f) => vec![f(power)],
            };
            for id in list {
                let report = algebra::check_identity(level, id, mode)?;
                let _ = writeln!(out, "{report}");
            }
        }
        Command::FockVerify {
            sites,
            nb,
            export,
            site,
            spin,
        } => {
            let basis = FockBasis::new(sites, nb)?;
            match export {
                None => {
                    let _ = write!(out, "{}", fock::verify_projected_algebra(&basis));
                }
                Some(which) => {
                    let op = match which {
                        ExportArg::Projector => fock::physical_projector(&basis),
                        ExportArg::Constraint => fock::constraint_operator(site, &basis)?,
                        ExportArg::Electron => fock::electron_op(site, Spin::parse(&spin)?, &basis)?,
                    };
                    out.push_str(&op.to_text());
                }
            }
        }
        Command::Decompose { file, tol } => {
            let text = read_source(file.as_ref(), stdin)?;
            let snaps = frame::parse_snapshots(&text)?;
            for (n, snap) in snaps.iter().enumerate() {
                let d = frame::decompose_su2(snap, tol)?;
                let _ = writeln!(out, "snapshot={} rank={}", n + 1, d.rank);
                let _ = write!(out, "{d}");
            }
        }
        Command::Potential {
            alpha,
            g,
            mu_bar,
            tol,
            mu_sq,
        } => {
            for &a in &alpha {
                for &gg in &g {
                    for &m in &mu_bar {
                        let p = PotentialParams::new(a, gg, m)?;
                        let report = potential::find_minima(&p, tol, ScanGrid::default())?;
                        let _ = writeln!(out, "{report}");
                        if let Some(mu_sq) = mu_sq {
                            let line = potential::comparison_line(&report, &MexicanHatParams { mu_sq });
                            let _ = writeln!(out, "{line}");
                        }
                    }
                }
            }
        }
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn call(args: &[&str], input: &str) -> (i32, String, String) {
        let mut stdin = input.as_bytes();
        let (mut o, mut e) = (Vec::new(), Vec::new());
        let argv = std::iter::once("nonassoc").chain(args.iter().copied());
        let code = run(argv, &mut stdin, &mut o, &mut e);
        (code, String::from_utf8(o).unwrap(), String::from_utf8(e).unwrap())
    }

    #[test]
    fn parse_from_stdin() {
        let (code, out, _) = call(&["parse"], "( f[1,1](x1)   b[1,1](x1) )\n");
        assert_eq!(code, 0);
        assert_eq!(out, "(f[1,1](x1) b[1,1](x1))\n");
    }

    #[test]
    fn parse_error_exit_one() {
        let (code, out, err) = call(&["parse", "--expr", "(f[1,1](x1) b[1,1](x1)"], "");
        assert_eq!(code, 1);
        assert!(out.is_empty());
        assert!(err.starts_with("error: UnbalancedParens: "), "{err}");
    }

    #[test]
    fn unknown_flag_is_usage_error() {
        let (code, _, err) = call(&["identities", "--level", "2", "--bogus"], "");
        assert_eq!(code, 2);
        assert!(err.contains("--bogus"), "{err}");
    }

    #[test]
    fn unknown_identity_is_usage_error() {
        let (code, _, err) = call(&["identities", "--level", "2", "--identity", "moufang"], "");
        assert_eq!(code, 2);
        assert!(err.contains("--identity"), "{err}");
    }

    #[test]
    fn help_goes_to_stdout() {
        let (code, out, _) = call(&["--help"], "");
        assert_eq!(code, 0);
        assert!(out.contains("normalize"));
    }

    #[test]
    fn alternative_at_level_three() {
        let (code, out, _) = call(&["identities", "--level", "3", "--identity", "alternative", "--mode", "exhaustive"], "");
        assert_eq!(code, 0);
        assert_eq!(out, "level=3 identity=alternative holds=true\n");
    }

    #[test]
    fn fock_spin_label_error() {
        let (code, _, err) = call(&["fock-verify", "--export", "electron", "--spin", "sideways"], "");
        assert_eq!(code, 1);
        assert!(err.starts_with("error: UnknownSpin: "), "{err}");
    }

    #[test]
    fn fock_size_error() {
        let (code, _, err) = call(&["fock-verify", "--sites", "3"], "");
        assert_eq!(code, 1);
        assert!(err.starts_with("error: UnsupportedSize: "), "{err}");
    }

    #[test]
    fn potential_product_of_lists() {
        let (code, out, _) = call(&["potential", "--alpha", "1,2", "--g", "1", "--mu-bar", "1"], "");
        assert_eq!(code, 0);
        assert_eq!(out.lines().count(), 2);
    }

    #[test]
    fn potential_invalid_params() {
        let (code, _, err) = call(&["potential", "--alpha", "0", "--g", "1", "--mu-bar", "1"], "");
        assert_eq!(code, 1);
        assert!(err.starts_with("error: InvalidParams: "), "{err}");
    }
}
