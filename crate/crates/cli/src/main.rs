mod algfun;
mod ec;
mod hodge;
mod input;
mod mf;
mod pcurv;
mod repro;
mod report;
mod vf;

use std::io::Write;
use std::process::ExitCode;
use std::time::Instant;

use clap::{Args, Parser, Subcommand};

use report::{Format, Report};

#[derive(Parser, Debug)]
#[command(name = "adelab", version, about = "Exact computations modulo primes")]
struct Cli {
    #[arg(long, global = true, value_enum, default_value = "json")]
    out: Format,
    /// Worker threads; falls back to ADELAB_THREADS, then all cores.
    #[arg(long, global = true)]
    threads: Option<usize>,
    /// Add wall-clock milliseconds to the JSON envelope.
    #[arg(long, global = true)]
    timings: bool,
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Subcommand, Debug)]
enum Cmd {
    /// p-curvature of linear differential equations.
    #[command(subcommand)]
    Pcurv(pcurv::PcurvCmd),
    /// p-closed polynomial vector fields.
    #[command(subcommand)]
    Vf(vf::VfCmd),
    /// Eisenstein series and their congruences.
    #[command(subcommand)]
    Mf(mf::MfCmd),
    /// Weierstrass curves over F_p.
    #[command(subcommand)]
    Ec(ec::EcCmd),
    /// Period series and Hodge locus codimensions.
    #[command(subcommand)]
    Hodge(hodge::HodgeCmd),
    /// Taylor series of algebraic functions.
    #[command(subcommand)]
    Algfun(algfun::AlgfunCmd),
    /// Recompute a bundled table and diff it against its golden file.
    Repro(ReproArgs),
}

#[derive(Args, Debug)]
struct ReproArgs {
    id: String,
    /// Print the regenerated golden file instead of diffing.
    #[arg(long, conflicts_with = "golden")]
    print: bool,
    /// Diff against this file instead of the bundled one.
    #[arg(long)]
    golden: Option<std::path::PathBuf>,
}

/// Anything that makes the input unusable; exit code 2.
#[derive(Debug)]
pub enum CliError {
    Usage(String),
}

impl<E: std::error::Error> From<E> for CliError {
    fn from(e: E) -> Self {
        CliError::Usage(e.to_string())
    }
}

fn threads(flag: Option<usize>) -> Result<usize, CliError> {
    let n = match flag {
        Some(n) => n,
        None => match std::env::var("ADELAB_THREADS") {
            Ok(s) => s
                .trim()
                .parse()
                .map_err(|_| CliError::Usage(format!("ADELAB_THREADS={s:?} is not a positive integer")))?,
            Err(_) => return Ok(0),
        },
    };
    if n == 0 {
        return Err(CliError::Usage("worker count must be at least 1".into()));
    }
    Ok(n)
}

/// argv without the flags that must not change the output.
fn command_echo() -> String {
    let mut out = Vec::new();
    let mut args = std::env::args().skip(1);
    while let Some(a) = args.next() {
        if a == "--threads" {
            args.next();
        } else if a.starts_with("--threads=") || a == "--timings" {
            continue;
        } else {
            out.push(a);
        }
    }
    out.join(" ")
}

fn run(cli: &Cli) -> Result<(Report, Option<String>), CliError> {
    let report = match &cli.cmd {
        Cmd::Pcurv(c) => pcurv::run(c)?,
        Cmd::Vf(c) => vf::run(c)?,
        Cmd::Mf(c) => mf::run(c)?,
        Cmd::Ec(c) => ec::run(c)?,
        Cmd::Hodge(c) => hodge::run(c)?,
        Cmd::Algfun(c) => algfun::run(c)?,
        Cmd::Repro(r) => {
            let t = repro::find(&r.id)?;
            if r.print {
                return Ok((Report::new(serde_json::Value::Null), Some(t.render()?)));
            }
            let override_text = match &r.golden {
                Some(p) => Some(
                    std::fs::read_to_string(p).map_err(|e| CliError::Usage(format!("{}: {e}", p.display())))?,
                ),
                None => None,
            };
            let (rep, diff) = t.run(override_text.as_deref())?;
            if let Some(d) = diff {
                eprint!("{d}");
            }
            rep
        }
    };
    Ok((report, None))
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    let n = match threads(cli.threads) {
        Ok(n) => n,
        Err(CliError::Usage(m)) => {
            eprintln!("error: {m}");
            return ExitCode::from(2);
        }
    };
    let start = Instant::now();
    let res = adelab::par::with_threads(n, || run(&cli));
    let wall = cli.timings.then(|| start.elapsed().as_millis());
    match res {
        Ok((_, Some(raw))) => {
            print!("{raw}");
            ExitCode::SUCCESS
        }
        Ok((report, None)) => {
            let s = report::emit(&report, cli.out, &command_echo(), wall);
            let _ = std::io::stdout().write_all(s.as_bytes());
            if report.ok {
                ExitCode::SUCCESS
            } else {
                ExitCode::from(1)
            }
        }
        Err(CliError::Usage(m)) => {
            eprintln!("error: {m}");
            ExitCode::from(2)
        }
    }
}
