use std::io::Read;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use toricoh::{HOptions, Rational};
use toricoh_cli::job::{covering, parse_component_arg, parse_divisor_arg, surface_from_parts};
use toricoh_cli::{checks_from_env, exit_code, parse_batch, render, run_all, CliError, Format, Job, Task};

#[derive(Parser)]
#[command(
    name = "toricoh",
    version,
    about = "Exact cohomology of Weil divisors on rational ruled toric surfaces and of cyclic covers branched over them",
    after_help = "Exit codes: 0 success, 2 invalid input, 3 internal cross-check failure.\n\
                  TORICOH_CHECKS=strict|off toggles the comparison of closed forms against lattice enumeration."
)]
struct Cli {
    /// Output format.
    #[arg(long, global = true, value_enum, default_value_t = FormatArg::Json)]
    format: FormatArg,
    /// h-vector method: closed forms with enumeration fallback, enumeration only, or closed forms only where available.
    #[arg(long, global = true, value_enum, default_value_t = MethodArg::Auto)]
    method: MethodArg,
    /// Worker threads for independent jobs; 0 uses every core. Output order never depends on it.
    #[arg(long, global = true, default_value_t = 1)]
    jobs: usize,
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Clone, Copy, ValueEnum)]
enum FormatArg {
    Json,
    Tsv,
}

#[derive(Clone, Copy, ValueEnum)]
enum MethodArg {
    Auto,
    Enum,
    Closed,
}

/// Surface invariants `(d1, d2, n1, n2, r)`.
#[derive(Args)]
struct SurfaceArgs {
    #[arg(long)]
    d1: i64,
    #[arg(long)]
    d2: i64,
    #[arg(long)]
    n1: i64,
    #[arg(long)]
    n2: i64,
    /// Self-intersection parameter as "num/den" or an integer.
    #[arg(long, default_value = "0")]
    r: String,
}

#[derive(Subcommand)]
enum Cmd {
    /// Correction term Δ of the singularity 1/d(1,p) at k.
    Delta {
        d: i64,
        p: i64,
        #[arg(allow_negative_numbers = true)]
        k: i64,
    },
    /// Invariants, Picard presentation, pairing matrix and canonical class.
    Surface(SurfaceArgs),
    /// h-vectors of divisors given as "a,b,alpha,beta".
    Coh {
        #[command(flatten)]
        surface: SurfaceArgs,
        /// Divisor aZ + bF + αE_X + βE_Y; repeat for several rows.
        #[arg(long = "divisor", short = 'D', required = true, allow_hyphen_values = true)]
        divisors: Vec<String>,
    },
    /// Eigensheaf table, Betti number and monodromy spectrum of an n-cyclic cover.
    Cover {
        #[command(flatten)]
        surface: SurfaceArgs,
        /// Degree of the cover.
        #[arg(long)]
        n: i64,
        /// The class H with Σ m_i D_i ∼ nH, as "a,b,alpha,beta".
        #[arg(long = "H", allow_hyphen_values = true)]
        h: String,
        /// Branch component "M:a,b,alpha,beta"; repeatable.
        #[arg(long = "component", required = true, allow_hyphen_values = true)]
        components: Vec<String>,
    },
    /// Runs a JSON job file {"jobs":[…]}; "-" reads standard input.
    Batch { file: PathBuf },
}

fn surface(a: &SurfaceArgs) -> Result<toricoh::RuledToricSurface, CliError> {
    let r: Rational = a.r.parse().map_err(|_| CliError::Input {
        path: "--r".into(),
        msg: format!("expected a rational \"num/den\", got \"{}\"", a.r),
    })?;
    surface_from_parts(a.d1, a.d2, a.n1, a.n2, r, "surface")
}

/// Command-line arguments as a list of jobs, plus whether to render as a batch.
fn jobs(cmd: &Cmd) -> Result<(Vec<Result<Job, CliError>>, bool), CliError> {
    let one = |surface, task| Ok((vec![Ok(Job { path: "$".into(), surface, task })], false));
    match cmd {
        Cmd::Delta { d, p, k } => one(None, Task::Delta { d: *d, p: *p, k: *k }),
        Cmd::Surface(a) => one(Some(surface(a)?), Task::SurfaceInfo),
        Cmd::Coh { surface: a, divisors } => {
            let s = surface(a)?;
            let out = divisors
                .iter()
                .enumerate()
                .map(|(i, t)| {
                    let path = format!("--divisor[{i}]");
                    let divisor = s.canonical_form(parse_divisor_arg(t, &path)?);
                    Ok(Job { path, surface: Some(s.clone()), task: Task::Cohomology { divisor } })
                })
                .collect();
            Ok((out, divisors.len() > 1))
        }
        Cmd::Cover { surface: a, n, h, components } => {
            let s = surface(a)?;
            let h = parse_divisor_arg(h, "--H")?;
            let comps = components
                .iter()
                .enumerate()
                .map(|(i, t)| parse_component_arg(t, &format!("--component[{i}]")))
                .collect::<Result<Vec<_>, _>>()?;
            let cov = covering(&s, *n, h, comps, "covering")?;
            one(Some(s), Task::Covering(Box::new(cov)))
        }
        Cmd::Batch { file } => {
            let mut text = String::new();
            let read = if file.as_os_str() == "-" {
                std::io::stdin().read_to_string(&mut text).map(|_| ())
            } else {
                std::fs::read_to_string(file).map(|t| text = t)
            };
            read.map_err(|e| CliError::Input { path: file.display().to_string(), msg: e.to_string() })?;
            Ok((parse_batch(&text)?, true))
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let fail = |e: CliError| {
        eprintln!("error: {e}");
        ExitCode::from(e.exit_code() as u8)
    };
    let checks = match checks_from_env() {
        Ok(c) => c,
        Err(e) => return fail(e),
    };
    let method = match cli.method {
        MethodArg::Auto => toricoh::MethodChoice::Auto,
        MethodArg::Enum => toricoh::MethodChoice::Enum,
        MethodArg::Closed => toricoh::MethodChoice::Closed,
    };
    let format = match cli.format {
        FormatArg::Json => Format::Json,
        FormatArg::Tsv => Format::Tsv,
    };
    let (jobs, batch) = match jobs(&cli.cmd) {
        Ok(x) => x,
        Err(e) => return fail(e),
    };
    let results = run_all(&jobs, HOptions { method, checks }, cli.jobs);
    print!("{}", render(&results, format, batch));
    for f in results.iter().filter_map(|r| r.as_ref().err()) {
        eprintln!("error: {}", f.message);
    }
    ExitCode::from(exit_code(&results) as u8)
}
