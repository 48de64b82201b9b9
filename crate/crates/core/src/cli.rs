//! Command-line front end.
//!
//! Exit codes: 0 success or pass, 1 verification failure, 2 usage error,
//! 3 internal invariant violation.

use std::ffi::OsString;
use std::io::Write;
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use rayon::prelude::*;
use serde::Serialize;

use crate::bernoulli::{
    carlitz_degenerate, degen_multi_poly_bernoulli, multi_poly_bernoulli, poly_bernoulli,
    type2_poly_bernoulli, Family, FamilyQuery, SequenceResult,
};
use crate::error::Error;
use crate::harness::{default_sweep, Identity, Status, VerificationReport, VerifyRequest};
use crate::rational::Rational;
use crate::series::TruncatedSeries;
use crate::special::{
    degenerate_exp, log1p_series, multi_polylog, one_minus_exp_neg, polyexp_ei, IndexVector,
    StirlingKind, StirlingTable,
};

pub const EXIT_OK: i32 = 0;
pub const EXIT_FAIL: i32 = 1;
pub const EXIT_USAGE: i32 = 2;
pub const EXIT_INTERNAL: i32 = 3;

pub const DEFAULT_ORDER: usize = 16;
pub const DEFAULT_TRUNCATE: usize = 32;

#[derive(Parser, Debug)]
#[command(name = "polybern", version, about = "Exact degenerate multi-poly-Bernoulli numbers, supporting sequences and identity checks")]
struct Cli {
    #[command(subcommand)]
    command: Command,

    /// Output format; CSV is available for flat tables only.
    #[arg(long, global = true, value_enum, env = "POLYBERN_FORMAT", default_value = "json")]
    format: Format,

    /// Write output to this file instead of stdout.
    #[arg(long, global = true)]
    output: Option<PathBuf>,
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum)]
enum Format {
    Json,
    Csv,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Coefficients of a named power series.
    Series(SeriesArgs),
    /// Values of a Bernoulli-type family for n = 0..=order.
    Numbers(NumbersArgs),
    /// A triangle of Stirling numbers.
    Stirling(StirlingArgs),
    /// Run an identity check, or the built-in sweep with --all.
    Verify(VerifyArgs),
}

fn parse_rational(s: &str) -> Result<Rational, String> {
    s.parse::<Rational>().map_err(|e| e.to_string())
}

fn parse_ks(s: &str) -> Result<IndexVector, String> {
    s.parse::<IndexVector>().map_err(|e| e.to_string())
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum)]
enum SeriesName {
    MultiPolylog,
    PolyexpEi,
    DegenerateExp,
    OneMinusExpNeg,
    Log1p,
}

#[derive(Args, Debug)]
struct SeriesArgs {
    #[arg(long, value_enum)]
    name: SeriesName,
    #[arg(long, value_parser = parse_ks, allow_hyphen_values = true)]
    ks: Option<IndexVector>,
    #[arg(long, allow_hyphen_values = true)]
    k: Option<i64>,
    #[arg(long, value_parser = parse_rational, allow_hyphen_values = true)]
    x: Option<Rational>,
    #[arg(long, value_parser = parse_rational, allow_hyphen_values = true)]
    lambda: Option<Rational>,
    #[arg(long, default_value_t = DEFAULT_ORDER)]
    order: usize,
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum)]
enum FamilyArg {
    DegenMultiPoly,
    MultiPoly,
    Poly,
    Type2Poly,
    Carlitz,
}

#[derive(Args, Debug)]
struct NumbersArgs {
    #[arg(long, value_enum, default_value = "degen-multi-poly")]
    family: FamilyArg,
    #[arg(long, value_parser = parse_ks, allow_hyphen_values = true)]
    ks: Option<IndexVector>,
    #[arg(long, allow_hyphen_values = true)]
    k: Option<i64>,
    #[arg(long)]
    r: Option<usize>,
    #[arg(long, value_parser = parse_rational, allow_hyphen_values = true)]
    lambda: Option<Rational>,
    #[arg(long, value_parser = parse_rational, allow_hyphen_values = true)]
    x: Option<Rational>,
    #[arg(long, default_value_t = DEFAULT_ORDER)]
    order: usize,
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum)]
enum KindArg {
    Second,
    FirstUnsigned,
    FirstSigned,
}

impl From<KindArg> for StirlingKind {
    fn from(k: KindArg) -> Self {
        match k {
            KindArg::Second => StirlingKind::Second,
            KindArg::FirstUnsigned => StirlingKind::FirstUnsigned,
            KindArg::FirstSigned => StirlingKind::FirstSigned,
        }
    }
}

#[derive(Args, Debug)]
struct StirlingArgs {
    #[arg(long, value_enum, default_value = "second")]
    kind: KindArg,
    #[arg(long, alias = "order", default_value_t = DEFAULT_ORDER)]
    max_n: usize,
}

#[derive(Args, Debug)]
struct VerifyArgs {
    #[arg(long, value_parser = parse_identity, required_unless_present = "all", conflicts_with = "all")]
    identity: Option<Identity>,
    /// Run the built-in parameter sweep over every identity.
    #[arg(long)]
    all: bool,
    /// Worker threads for --all.
    #[arg(long, default_value_t = 1, requires = "all")]
    jobs: usize,
    #[arg(long, value_parser = parse_ks, allow_hyphen_values = true)]
    ks: Option<IndexVector>,
    #[arg(long)]
    r: Option<usize>,
    #[arg(long, value_parser = parse_rational, allow_hyphen_values = true)]
    lambda: Option<Rational>,
    #[arg(long, value_parser = parse_rational, allow_hyphen_values = true)]
    x: Option<Rational>,
    #[arg(long, value_parser = parse_rational, allow_hyphen_values = true)]
    y: Option<Rational>,
    #[arg(long, default_value_t = DEFAULT_ORDER)]
    order: usize,
    /// Truncation M of the infinite m-sums.
    #[arg(long, default_value_t = DEFAULT_TRUNCATE)]
    truncate: usize,
}

fn parse_identity(s: &str) -> Result<Identity, String> {
    s.parse::<Identity>().map_err(|e| e.to_string())
}

#[derive(Serialize)]
struct SeriesOutput {
    series: &'static str,
    #[serde(skip_serializing_if = "Option::is_none")]
    ks: Option<IndexVector>,
    #[serde(skip_serializing_if = "Option::is_none")]
    k: Option<i64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    lambda: Option<Rational>,
    #[serde(skip_serializing_if = "Option::is_none")]
    x: Option<Rational>,
    #[serde(flatten)]
    series_data: TruncatedSeries,
}

#[derive(Serialize)]
struct StirlingOutput {
    kind: StirlingKind,
    max_n: usize,
    rows: Vec<Vec<String>>,
}

enum Failure {
    Usage(String),
    Internal(String),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        match e {
            Error::Usage(_)
            | Error::InvalidIndex(_)
            | Error::ParseRational(_)
            | Error::ZeroDenominator
            | Error::NonPositiveBase(_) => Failure::Usage(e.to_string()),
            _ => Failure::Internal(e.to_string()),
        }
    }
}

fn usage(msg: impl Into<String>) -> Failure {
    Failure::Usage(msg.into())
}

fn unused(flag: &str, present: bool, what: &str) -> Result<(), Failure> {
    if present {
        Err(usage(format!("{flag} is not used by {what}")))
    } else {
        Ok(())
    }
}

fn single_k(ks: Option<IndexVector>, k: Option<i64>, what: &str) -> Result<i64, Failure> {
    match (ks, k) {
        (Some(_), Some(_)) => Err(usage(format!("{what}: give either --k or --ks, not both"))),
        (None, Some(k)) => Ok(k),
        (Some(v), None) if v.depth() == 1 => Ok(v.ks()[0]),
        (Some(_), None) => Err(usage(format!("{what} takes a single index"))),
        (None, None) => Err(usage(format!("{what} needs --k"))),
    }
}

fn json<T: Serialize>(v: &T) -> String {
    let mut s = serde_json::to_string_pretty(v).expect("output serializes");
    s.push('\n');
    s
}

fn run_series(a: SeriesArgs, format: Format) -> Result<String, Failure> {
    if format == Format::Csv {
        return Err(usage("series output is JSON only"));
    }
    let n = a.order;
    let (name, ks, k, lambda, x, s) = match a.name {
        SeriesName::MultiPolylog => {
            unused("--k", a.k.is_some(), "multi-polylog")?;
            unused("--x", a.x.is_some(), "multi-polylog")?;
            unused("--lambda", a.lambda.is_some(), "multi-polylog")?;
            let ks = a.ks.ok_or_else(|| usage("multi-polylog needs --ks"))?;
            let s = multi_polylog(&ks, n);
            ("multi-polylog", Some(ks), None, None, None, s)
        }
        SeriesName::PolyexpEi => {
            unused("--x", a.x.is_some(), "polyexp-ei")?;
            unused("--lambda", a.lambda.is_some(), "polyexp-ei")?;
            let k = single_k(a.ks, a.k, "polyexp-ei")?;
            ("polyexp-ei", None, Some(k), None, None, polyexp_ei(k, n))
        }
        SeriesName::DegenerateExp => {
            unused("--ks", a.ks.is_some(), "degenerate-exp")?;
            unused("--k", a.k.is_some(), "degenerate-exp")?;
            let x = a.x.unwrap_or_else(Rational::one);
            let lambda = a.lambda.unwrap_or_else(Rational::zero);
            let s = degenerate_exp(&x, &lambda, n);
            ("degenerate-exp", None, None, Some(lambda), Some(x), s)
        }
        SeriesName::OneMinusExpNeg | SeriesName::Log1p => {
            let label = if a.name == SeriesName::Log1p { "log1p" } else { "one-minus-exp-neg" };
            unused("--ks", a.ks.is_some(), label)?;
            unused("--k", a.k.is_some(), label)?;
            unused("--x", a.x.is_some(), label)?;
            unused("--lambda", a.lambda.is_some(), label)?;
            let s = if a.name == SeriesName::Log1p { log1p_series(n) } else { one_minus_exp_neg(n) };
            (label, None, None, None, None, s)
        }
    };
    Ok(json(&SeriesOutput { series: name, ks, k, lambda, x, series_data: s }))
}

fn compute_numbers(a: NumbersArgs) -> Result<SequenceResult, Failure> {
    let x = a.x.unwrap_or_else(Rational::zero);
    let n = a.order;
    let family: Family = match a.family {
        FamilyArg::DegenMultiPoly => Family::DegenMultiPoly,
        FamilyArg::MultiPoly => Family::MultiPoly,
        FamilyArg::Poly => Family::Poly,
        FamilyArg::Type2Poly => Family::Type2Poly,
        FamilyArg::Carlitz => Family::Carlitz,
    };
    let what = family.name();
    if family != Family::Carlitz {
        unused("--r", a.r.is_some(), what)?;
    }
    let result = match family {
        Family::DegenMultiPoly => {
            unused("--k", a.k.is_some(), what)?;
            let ks = a.ks.ok_or_else(|| usage("degen-multi-poly needs --ks"))?;
            let lambda = a.lambda.unwrap_or_else(Rational::zero);
            degen_multi_poly_bernoulli(&FamilyQuery::new(ks, lambda, x, n))?
        }
        Family::MultiPoly => {
            unused("--k", a.k.is_some(), what)?;
            unused("--lambda", a.lambda.is_some(), what)?;
            let ks = a.ks.ok_or_else(|| usage("multi-poly needs --ks"))?;
            multi_poly_bernoulli(&ks, &x, n)?
        }
        Family::Poly | Family::Type2Poly => {
            unused("--lambda", a.lambda.is_some(), what)?;
            let k = single_k(a.ks, a.k, what)?;
            if family == Family::Poly {
                poly_bernoulli(k, &x, n)?
            } else {
                type2_poly_bernoulli(k, &x, n)?
            }
        }
        Family::Carlitz => {
            unused("--ks", a.ks.is_some(), what)?;
            unused("--k", a.k.is_some(), what)?;
            let r = a.r.ok_or_else(|| usage("carlitz needs --r"))?;
            if r == 0 {
                return Err(usage("--r must be >= 1"));
            }
            let lambda = a.lambda.unwrap_or_else(Rational::zero);
            carlitz_degenerate(r, &lambda, &x, n)?
        }
    };
    Ok(result)
}

fn run_stirling(a: StirlingArgs, format: Format) -> String {
    let table = StirlingTable::new(a.kind.into(), a.max_n);
    match format {
        Format::Json => json(&StirlingOutput {
            kind: table.kind(),
            max_n: table.max_n(),
            rows: table
                .rows()
                .iter()
                .map(|row| row.iter().map(|v| v.to_string()).collect())
                .collect(),
        }),
        Format::Csv => {
            let max_n = table.max_n();
            let mut out = String::from("n");
            for k in 0..=max_n {
                out.push_str(&format!(",k{k}"));
            }
            out.push('\n');
            for n in 0..=max_n {
                out.push_str(&n.to_string());
                for k in 0..=max_n {
                    out.push_str(&format!(",{}", table.get(n, k)));
                }
                out.push('\n');
            }
            out
        }
    }
}

fn run_verify(a: VerifyArgs, format: Format) -> Result<(String, bool), Failure> {
    if format == Format::Csv {
        return Err(usage("verification reports are JSON only"));
    }
    if a.all {
        if a.jobs == 0 {
            return Err(usage("--jobs must be >= 1"));
        }
        let requests = default_sweep(a.truncate);
        let pool = rayon::ThreadPoolBuilder::new()
            .num_threads(a.jobs)
            .build()
            .map_err(|e| Failure::Internal(e.to_string()))?;
        // par_iter().collect() preserves input order, so output is independent of --jobs.
        let reports: Vec<crate::error::Result<VerificationReport>> =
            pool.install(|| requests.par_iter().map(VerifyRequest::run).collect());
        let reports = reports.into_iter().collect::<crate::error::Result<Vec<_>>>()?;
        let ok = reports.iter().all(|r| r.status != Status::Fail);
        return Ok((json(&reports), ok));
    }
    let identity = a.identity.ok_or_else(|| usage("--identity or --all is required"))?;
    let request = VerifyRequest {
        identity,
        ks: a.ks,
        r: a.r,
        lambda: a.lambda.unwrap_or_else(Rational::zero),
        x: a.x.unwrap_or_else(Rational::zero),
        y: a.y.unwrap_or_else(Rational::zero),
        order: a.order,
        truncate: a.truncate,
    };
    let report = request.run()?;
    let ok = report.status != Status::Fail;
    Ok((json(&report), ok))
}

fn dispatch(cli: Cli) -> Result<(String, i32), Failure> {
    let format = cli.format;
    match cli.command {
        Command::Series(a) => Ok((run_series(a, format)?, EXIT_OK)),
        Command::Numbers(a) => {
            let result = compute_numbers(a)?;
            let text = match format {
                Format::Json => json(&result),
                Format::Csv => result.to_csv(),
            };
            Ok((text, EXIT_OK))
        }
        Command::Stirling(a) => Ok((run_stirling(a, format), EXIT_OK)),
        Command::Verify(a) => {
            let (text, ok) = run_verify(a, format)?;
            Ok((text, if ok { EXIT_OK } else { EXIT_FAIL }))
        }
    }
}

/// Parse `argv` (including the program name), run, and return the exit code.
pub fn run<I, T>(argv: I, stdout: &mut dyn Write, stderr: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(argv) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_USAGE } else { EXIT_OK };
            let rendered = e.render().to_string();
            if e.use_stderr() {
                let _ = write!(stderr, "{rendered}");
            } else {
                let _ = write!(stdout, "{rendered}");
            }
            return code;
        }
    };
    let output = cli.output.clone();
    match dispatch(cli) {
        Ok((text, code)) => {
            let written = match output {
                Some(path) => std::fs::write(&path, text)
                    .map_err(|e| format!("cannot write {}: {e}", path.display())),
                None => stdout.write_all(text.as_bytes()).map_err(|e| e.to_string()),
            };
            match written {
                Ok(()) => code,
                Err(msg) => {
                    let _ = writeln!(stderr, "error: {msg}");
                    EXIT_USAGE
                }
            }
        }
        Err(Failure::Usage(msg)) => {
            let _ = writeln!(stderr, "error: {msg}\n\nRun `polybern --help` for usage.");
            EXIT_USAGE
        }
        Err(Failure::Internal(msg)) => {
            let _ = writeln!(stderr, "internal error: {msg}");
            EXIT_INTERNAL
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn call(args: &[&str]) -> (i32, String, String) {
        let mut out = Vec::new();
        let mut err = Vec::new();
        let mut argv = vec!["polybern"];
        argv.extend_from_slice(args);
        let code = run(argv, &mut out, &mut err);
        (code, String::from_utf8(out).unwrap(), String::from_utf8(err).unwrap())
    }

    #[test]
    fn numbers_json() {
        let (code, out, _) = call(&["numbers", "--family", "degen-multi-poly", "--ks", "1,2", "--lambda", "1/3", "--x", "0", "--order", "8"]);
        assert_eq!(code, 0);
        let v: serde_json::Value = serde_json::from_str(&out).unwrap();
        assert_eq!(v["values"][0], "1/2");
        assert_eq!(v["order"], 8);
    }

    #[test]
    fn negative_indices_parse() {
        let (code, out, err) = call(&["numbers", "--ks", "-1,-2", "--order", "2"]);
        assert_eq!(code, 0, "{err}");
        assert!(out.contains("\"ks\""));
        let (code, _, err) = call(&["numbers", "--family", "poly", "--k", "-3", "--x", "-1/2", "--order", "2"]);
        assert_eq!(code, 0, "{err}");
    }

    #[test]
    fn usage_errors_exit_2() {
        assert_eq!(call(&["numbers", "--ks", "1,2", "--lambda", "1/0"]).0, 2);
        assert_eq!(call(&["numbers", "--ks", "1,2", "--bogus", "3"]).0, 2);
        assert_eq!(call(&["numbers", "--family", "carlitz"]).0, 2);
        assert_eq!(call(&["numbers", "--family", "poly", "--k", "1", "--lambda", "1/2"]).0, 2);
        assert_eq!(call(&["verify", "--identity", "thm4", "--ks", "1,1", "--order", "0"]).0, 2);
        assert_eq!(call(&["verify", "--identity", "eq18", "--ks", "1"]).0, 2);
        assert_eq!(call(&["verify", "--identity", "nope"]).0, 2);
        assert_eq!(call(&["verify"]).0, 2);
        assert_eq!(call(&["series", "--name", "log1p", "--format", "csv"]).0, 2);
        assert_eq!(call(&[]).0, 2);
    }

    #[test]
    fn help_exits_0() {
        let (code, out, _) = call(&["--help"]);
        assert_eq!(code, 0);
        assert!(out.contains("verify"));
    }

    #[test]
    fn verify_li_ones() {
        let (code, out, _) = call(&["verify", "--identity", "li-ones", "--r", "3", "--order", "15"]);
        assert_eq!(code, 0);
        assert!(out.contains("\"status\": \"pass\""));
    }

    #[test]
    fn stirling_csv() {
        let (code, out, _) = call(&["stirling", "--kind", "second", "--max-n", "4", "--format", "csv"]);
        assert_eq!(code, 0);
        let lines: Vec<&str> = out.lines().collect();
        assert_eq!(lines[0], "n,k0,k1,k2,k3,k4");
        assert_eq!(lines[5], "4,0,1,7,6,1");
    }

    #[test]
    fn series_json() {
        let (code, out, _) = call(&["series", "--name", "multi-polylog", "--ks", "1,1", "--order", "3"]);
        assert_eq!(code, 0);
        let v: serde_json::Value = serde_json::from_str(&out).unwrap();
        assert_eq!(v["coeffs"][3], "1/2");
        assert_eq!(v["order"], 3);
    }
}
