//! Command-line front end. Every subcommand forwards to one library call and
//! serializes the resulting table.

use std::io::Write;
use std::path::PathBuf;
use std::time::Instant;

use clap::{Args, Parser, Subcommand};
use rayon::prelude::*;

use crate::characters::build_family;
use crate::constants::{
    constants_report, density_bound_report, optimize_report, ConstantsRequest, DParams, HEADLINE_DELTA, HEADLINE_EPS,
    HEADLINE_ETA, HEADLINE_KAPPA,
};
use crate::error::{Error, Result};
use crate::experiments::{
    approximation_experiment, average_s_experiment, density_empirics, first_zero_survey, mean_square_experiment,
    mollifier_convergence, psi_mean_square, DensityWindow,
};
use crate::lfunc::{critical_zeros_window, littlewood_identity_check_with};
use crate::real::Precision;
use crate::report::{Format, Meta, Report};

/// Exit status for a successful run.
pub const EXIT_OK: i32 = 0;
/// Exit status for numeric or I/O failure.
pub const EXIT_FAILURE: i32 = 1;
/// Exit status when a parameter violates a stated inequality.
pub const EXIT_CONSTRAINT: i32 = 2;
/// Exit status for malformed command lines.
pub const EXIT_USAGE: i32 = 64;

#[derive(Debug, Parser)]
#[command(name = "dirichlet-arg", version, about = "Explicit constants and desk-scale checks for S(t, χ)")]
pub struct Cli {
    #[command(flatten)]
    pub global: Global,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Args)]
pub struct Global {
    /// Output encoding.
    #[arg(long, global = true, env = "DIRICHLET_ARG_FORMAT", default_value = "json")]
    pub format: Format,
    /// Write the report here instead of standard output.
    #[arg(long, global = true, env = "DIRICHLET_ARG_OUTPUT")]
    pub output: Option<PathBuf>,
    /// `double` or `extended:BITS` (constants only).
    #[arg(long, global = true, env = "DIRICHLET_ARG_PREC", default_value = "double")]
    pub prec: Precision,
    /// Worker threads; defaults to the number of logical cores.
    #[arg(long, global = true, env = "DIRICHLET_ARG_WORKERS", value_parser = clap::value_parser!(u16).range(1..))]
    pub workers: Option<u16>,
    /// Recorded in the report metadata.
    #[arg(long, global = true, env = "DIRICHLET_ARG_SEED")]
    pub seed: Option<u64>,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Every named constant of the D and C₀ pipelines.
    Constants(ConstantsArgs),
    /// Minimize √D over η and δ.
    OptimizeD {
        #[arg(long, env = "DIRICHLET_ARG_K", default_value_t = 1)]
        k: u32,
        #[arg(long, env = "DIRICHLET_ARG_EPS", default_value_t = HEADLINE_EPS)]
        eps: f64,
    },
    /// Zero-density coefficients for one window.
    DensityBound(DensityBoundArgs),
    /// Critical zeros of one or all non-principal characters.
    Zeros(ZerosArgs),
    /// Lowest zero of every non-principal character, scaled by log q/2π.
    FirstZeros {
        #[arg(long, env = "DIRICHLET_ARG_Q")]
        q: u64,
        /// Scan height; defaults to max(30, 40·2π/log q).
        #[arg(long = "T", env = "DIRICHLET_ARG_T_MAX")]
        t_max: Option<f64>,
    },
    /// Family average of S(t, χ).
    AvgS {
        #[arg(long, env = "DIRICHLET_ARG_Q")]
        q: u64,
        #[arg(long, env = "DIRICHLET_ARG_T", value_delimiter = ',', allow_hyphen_values = true,
              default_value = "-1,-0.75,-0.5,-0.25,0,0.25,0.5,0.75,1")]
        t: Vec<f64>,
    },
    /// Family mean square of S̃ at t = 2πβ/log q.
    MeanSquare {
        #[arg(long, env = "DIRICHLET_ARG_Q")]
        q: u64,
        #[arg(long, env = "DIRICHLET_ARG_BETA", value_delimiter = ',', allow_hyphen_values = true,
              default_value = "0,1,5")]
        beta: Vec<f64>,
    },
    /// Counted zeros right of σ against the density bound.
    DensityEmpirics(DensityEmpiricsArgs),
    /// Gcd double sums, or with --psi the mollified mean square.
    Mollifier(MollifierArgs),
    /// Prime-sum approximation of S(t, χ).
    Approx {
        #[arg(long, env = "DIRICHLET_ARG_Q")]
        q: u64,
        #[arg(long, env = "DIRICHLET_ARG_X")]
        x: f64,
        #[arg(long, env = "DIRICHLET_ARG_ETA", default_value_t = HEADLINE_ETA)]
        eta: f64,
        #[arg(long, env = "DIRICHLET_ARG_T", value_delimiter = ',', allow_hyphen_values = true,
              default_value = "0.25,0.5,1")]
        t: Vec<f64>,
    },
    /// Both sides of the Littlewood identity for 1 − a·2^{−s}.
    LittlewoodCheck {
        #[arg(long, env = "DIRICHLET_ARG_A", default_value_t = 2.0)]
        a: f64,
        #[arg(long, env = "DIRICHLET_ARG_SIGMA_P", default_value_t = 0.5, allow_negative_numbers = true)]
        sigma_p: f64,
        #[arg(long, env = "DIRICHLET_ARG_T1", default_value_t = 0.0, allow_negative_numbers = true)]
        t1: f64,
        #[arg(long, env = "DIRICHLET_ARG_T2", default_value_t = 20.0, allow_negative_numbers = true)]
        t2: f64,
        /// Quadrature panels per unit length.
        #[arg(long, env = "DIRICHLET_ARG_PANELS", default_value_t = 8)]
        panels: usize,
    },
}

#[derive(Debug, Args)]
pub struct ConstantsArgs {
    #[arg(long, env = "DIRICHLET_ARG_ETA", default_value_t = HEADLINE_ETA)]
    pub eta: f64,
    #[arg(long, env = "DIRICHLET_ARG_DELTA", default_value_t = HEADLINE_DELTA)]
    pub delta: f64,
    #[arg(long, env = "DIRICHLET_ARG_KAPPA", default_value_t = HEADLINE_KAPPA)]
    pub kappa: f64,
    #[arg(long, env = "DIRICHLET_ARG_K", default_value_t = 1)]
    pub k: u32,
    #[arg(long, env = "DIRICHLET_ARG_EPS", default_value_t = HEADLINE_EPS)]
    pub eps: f64,
    /// Modulus used for the q-dependent term of C₀.
    #[arg(long, env = "DIRICHLET_ARG_Q", default_value_t = 1e9)]
    pub q: f64,
    /// Window length (t₂ − t₁) log q; defaults to 10/κ.
    #[arg(long, env = "DIRICHLET_ARG_TAU")]
    pub tau: Option<f64>,
    /// Extra C(η, δ, r, v) entries as `r,v`; repeat the flag or separate with `;`.
    #[arg(long = "c", env = "DIRICHLET_ARG_C", value_name = "R,V", value_delimiter = ';', value_parser = parse_pair)]
    pub c: Vec<(f64, f64)>,
}

#[derive(Debug, Args)]
pub struct DensityBoundArgs {
    #[arg(long, env = "DIRICHLET_ARG_KAPPA", default_value_t = HEADLINE_KAPPA)]
    pub kappa: f64,
    /// Window length; derived from --t1, --t2 and --q when absent.
    #[arg(long, env = "DIRICHLET_ARG_TAU")]
    pub tau: Option<f64>,
    #[arg(long, env = "DIRICHLET_ARG_Q")]
    pub q: Option<f64>,
    #[arg(long, env = "DIRICHLET_ARG_SIGMA")]
    pub sigma: Option<f64>,
    #[arg(long, env = "DIRICHLET_ARG_T1", allow_negative_numbers = true)]
    pub t1: Option<f64>,
    #[arg(long, env = "DIRICHLET_ARG_T2", allow_negative_numbers = true)]
    pub t2: Option<f64>,
}

#[derive(Debug, Args)]
pub struct ZerosArgs {
    #[arg(long, env = "DIRICHLET_ARG_Q")]
    pub q: u64,
    /// Character index; all non-principal characters when absent.
    #[arg(long, env = "DIRICHLET_ARG_CHARACTER")]
    pub character: Option<usize>,
    #[arg(long = "T", env = "DIRICHLET_ARG_T_MAX", default_value_t = 30.0)]
    pub t_max: f64,
    #[arg(long, env = "DIRICHLET_ARG_T_LO", default_value_t = 0.0, allow_negative_numbers = true)]
    pub t_lo: f64,
}

#[derive(Debug, Args)]
pub struct DensityEmpiricsArgs {
    #[arg(long, env = "DIRICHLET_ARG_Q")]
    pub q: u64,
    #[arg(long, env = "DIRICHLET_ARG_KAPPA")]
    pub kappa: f64,
    #[arg(long, env = "DIRICHLET_ARG_SIGMA")]
    pub sigma: f64,
    #[arg(long, env = "DIRICHLET_ARG_T1", allow_negative_numbers = true)]
    pub t1: f64,
    #[arg(long, env = "DIRICHLET_ARG_T2", allow_negative_numbers = true)]
    pub t2: f64,
    #[arg(long, env = "DIRICHLET_ARG_EPS", default_value_t = HEADLINE_EPS)]
    pub eps: f64,
}

#[derive(Debug, Args)]
pub struct MollifierArgs {
    #[arg(long, env = "DIRICHLET_ARG_XI", value_delimiter = ',', default_value = "100,316.2,1000")]
    pub xi: Vec<f64>,
    /// Run the mollified mean square over a family instead.
    #[arg(long, env = "DIRICHLET_ARG_PSI")]
    pub psi: bool,
    #[arg(long, env = "DIRICHLET_ARG_Q", default_value_t = 997)]
    pub q: u64,
    #[arg(long, env = "DIRICHLET_ARG_SIGMA", default_value_t = 0.6)]
    pub sigma: f64,
    #[arg(long, env = "DIRICHLET_ARG_T", default_value_t = 0.0, allow_negative_numbers = true)]
    pub t: f64,
}

fn parse_pair(s: &str) -> std::result::Result<(f64, f64), String> {
    let (r, v) = s.split_once(',').ok_or_else(|| format!("expected R,V, got `{s}`"))?;
    let num = |x: &str| x.trim().parse::<f64>().map_err(|e| format!("`{x}`: {e}"));
    Ok((num(r)?, num(v)?))
}

/// Parses `argv` (program name first), runs the subcommand and returns the exit status.
pub fn run<I, S>(argv: I) -> i32
where
    I: IntoIterator<Item = S>,
    S: Into<std::ffi::OsString> + Clone,
{
    run_with(argv, &mut std::io::stdout(), &mut std::io::stderr())
}

/// As `run` with explicit sinks for the report and for diagnostics.
pub fn run_with<I, S>(argv: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = S>,
    S: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(argv) {
        Ok(c) => c,
        Err(e) => {
            use clap::error::ErrorKind::{DisplayHelp, DisplayVersion};
            let text = e.render().to_string();
            return match e.kind() {
                DisplayHelp | DisplayVersion => {
                    let _ = write!(out, "{text}");
                    EXIT_OK
                }
                _ => {
                    let _ = write!(err, "{text}");
                    EXIT_USAGE
                }
            };
        }
    };
    let start = Instant::now();
    let result = match cli.global.workers {
        Some(n) => match rayon::ThreadPoolBuilder::new().num_threads(n.into()).build() {
            Ok(pool) => pool.install(|| execute(&cli)),
            Err(e) => Err(Error::Numeric(format!("worker pool: {e}"))),
        },
        None => execute(&cli),
    };
    let code = match result.and_then(|report| emit(&report, &cli.global, out)) {
        Ok(()) => EXIT_OK,
        Err(e) => {
            let _ = writeln!(err, "error: {e}");
            if e.is_constraint() {
                EXIT_CONSTRAINT
            } else {
                EXIT_FAILURE
            }
        }
    };
    let _ = writeln!(err, "runtime: {:.3} s", start.elapsed().as_secs_f64());
    code
}

fn emit(report: &Report, global: &Global, out: &mut dyn Write) -> Result<()> {
    let bytes = report.serialize(global.format)?;
    let io = |e: std::io::Error| Error::Numeric(format!("write failed: {e}"));
    match &global.output {
        Some(path) => std::fs::write(path, &bytes).map_err(|e| Error::Numeric(format!("{}: {e}", path.display()))),
        None => out.write_all(&bytes).and_then(|_| out.flush()).map_err(io),
    }
}

/// Builds the report for a parsed command line.
pub fn execute(cli: &Cli) -> Result<Report> {
    let g = &cli.global;
    if !matches!(cli.command, Command::Constants(_)) && g.prec != Precision::Double {
        return Err(Error::Unsupported(format!("precision {} applies to constants only", g.prec)));
    }
    let mut report = match &cli.command {
        Command::Constants(a) => {
            let req = ConstantsRequest {
                params: DParams { eta: a.eta, delta: a.delta, kappa: a.kappa, k: a.k, eps: a.eps },
                c_entries: a.c.clone(),
                q: a.q,
                tau: a.tau,
                precision: g.prec,
            };
            constants_report(&req)?.to_report()
        }
        Command::OptimizeD { k, eps } => optimize_report(*k, *eps)?,
        Command::DensityBound(a) => {
            let tau = match (a.tau, a.t1, a.t2, a.q) {
                (Some(tau), ..) => tau,
                (None, Some(t1), Some(t2), Some(q)) => (t2 - t1) * q.ln(),
                _ => return Err(Error::Constraint("requires --tau or all of --t1, --t2, --q".into())),
            };
            density_bound_report(a.kappa, tau, a.q, a.sigma)?
        }
        Command::Zeros(a) => zeros_report(a)?,
        Command::FirstZeros { q, t_max } => first_zero_survey(*q, *t_max)?.to_report(),
        Command::AvgS { q, t } => average_s_experiment(*q, t)?.to_report(),
        Command::MeanSquare { q, beta } => mean_square_experiment(*q, beta)?.to_report(),
        Command::DensityEmpirics(a) => {
            let w = DensityWindow { kappa: a.kappa, sigma: a.sigma, t1: a.t1, t2: a.t2, eps: a.eps };
            density_empirics(a.q, w)?.to_report()
        }
        Command::Mollifier(a) if a.psi => {
            let xi = if a.xi.len() == 1 { a.xi[0] } else { (a.q as f64).powf(0.01) };
            psi_mean_square(a.q, xi, a.sigma, a.t)?.to_report()
        }
        Command::Mollifier(a) => mollifier_convergence(&a.xi)?.to_report(),
        Command::Approx { q, x, eta, t } => approximation_experiment(*q, *x, *eta, t)?.to_report(),
        Command::LittlewoodCheck { a, sigma_p, t1, t2, panels } => {
            let c = littlewood_identity_check_with(*a, *sigma_p, *t1, *t2, *panels)?;
            let mut meta = Meta::new("littlewood-check");
            meta.parameters =
                vec![("a".into(), (*a).into()), ("sigma_p".into(), (*sigma_p).into()), ("panels".into(), (*panels).into())];
            let columns = ["t1", "t2", "zeros", "lhs", "rhs", "difference"].map(String::from).to_vec();
            let mut r = Report::new(meta, columns);
            r.push(vec![c.t1.into(), c.t2.into(), c.zeros.into(), c.lhs.into(), c.rhs.into(), (c.lhs - c.rhs).into()])?;
            r
        }
    };
    report.meta.seed = g.seed;
    Ok(report)
}

fn zeros_report(a: &ZerosArgs) -> Result<Report> {
    let family = build_family(a.q)?;
    let indices: Vec<usize> = match a.character {
        Some(j) => {
            let ch = family.character(j)?;
            if ch.is_principal() {
                return Err(Error::Unsupported("the principal character has no Gauss data".into()));
            }
            vec![j]
        }
        None => family.non_principal().map(|c| c.index()).collect(),
    };
    let lists = indices
        .par_iter()
        .map(|&j| critical_zeros_window(&family.character(j)?, a.t_lo, a.t_max))
        .collect::<Result<Vec<_>>>()?;
    let mut meta = Meta::new("zeros");
    meta.parameters =
        vec![("q".into(), a.q.into()), ("t_lo".into(), a.t_lo.into()), ("T".into(), a.t_max.into())];
    meta.summary = vec![
        ("zeros".into(), lists.iter().map(|l| l.ordinates.len()).sum::<usize>().into()),
        ("unvalidated".into(), lists.iter().filter(|l| !l.validated).count().into()),
    ];
    let columns =
        ["character", "n", "gamma", "width", "contour_count", "discrepancy", "validated"].map(String::from).to_vec();
    let mut r = Report::new(meta, columns);
    for l in &lists {
        for (n, &g) in l.ordinates.iter().enumerate() {
            r.push(vec![
                l.character.into(),
                (n + 1).into(),
                g.into(),
                l.width.into(),
                l.contour_count.into(),
                l.discrepancy.into(),
                l.validated.into(),
            ])?;
        }
    }
    Ok(r)
}

