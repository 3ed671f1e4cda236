//! Command-line front end for `ulamlab-core`: table emitters and the
//! verification report.

pub mod config;
pub mod report;
pub mod suites;

use std::fmt::Write as _;
use std::path::{Path, PathBuf};

use clap::{Parser, Subcommand};
use thiserror::Error;

use ulamlab_core::elliptic3::{factorize, m3_elliptic};
use ulamlab_core::genfun::gf_a_coefficients;
use ulamlab_core::numkernel::fmt_sig;
use ulamlab_core::perm_oracle::brute_moments;
use ulamlab_core::ratefun::{ld_mixed_printed, ld_second_moment_printed, rate_a, varadhan_second_moment, RateForm, RateQuery};
use ulamlab_core::solvable::{expect_n, mc_n, replica_to_zero, solve_z};
use ulamlab_core::ulam_exact::{all_or_nothing_bound, ln_mean_z, mean_z, second_moment, second_moment_log};
use ulamlab_core::Limits;

pub use report::{Report, Status, VerificationRecord};
pub use suites::Suite;

#[derive(Debug, Error)]
pub enum CliError {
    #[error("I/O error: {0}")]
    Io(#[from] std::io::Error),
    #[error(transparent)]
    Core(#[from] ulamlab_core::Error),
    #[error("configuration error: {0}")]
    Config(String),
    #[error("{0}")]
    Usage(String),
}

#[derive(Debug, Parser)]
#[command(name = "ulamlab", version, about = "Moments of increasing-subsequence counts: exact tables, rate functions and checks")]
pub struct Cli {
    /// `key = value` file overriding size caps and contour tolerances.
    #[arg(long, global = true)]
    pub config: Option<PathBuf>,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Exact moments of Z_{n,k}; order 3 and above give the all-or-nothing lower bound.
    Moments {
        #[arg(long)]
        n: u64,
        #[arg(long)]
        k: u64,
        /// Second length for the mixed moment; defaults to k.
        #[arg(long)]
        l: Option<u64>,
        #[arg(long, default_value_t = 2)]
        order: usize,
        /// Log-space evaluation, printed as `sign,ln|value|`.
        #[arg(long)]
        log: bool,
        /// Also print the per-overlap terms as CSV.
        #[arg(long)]
        terms: bool,
    },
    /// Moments by enumerating all permutations of size n.
    Oracle {
        #[arg(long)]
        n: usize,
        #[arg(long)]
        k: usize,
        #[arg(long)]
        l: Option<usize>,
        #[arg(long, default_value_t = 2)]
        order: usize,
    },
    /// Rate function of A at (κ, λ, γ), or the second-moment optimization when γ is omitted.
    Rate {
        #[arg(long)]
        kappa: f64,
        #[arg(long)]
        lambda: f64,
        #[arg(long)]
        gamma: Option<f64>,
        #[arg(long, default_value = "xyz")]
        form: String,
    },
    /// Coefficients of the generating function of A as CSV.
    Series {
        #[arg(long)]
        max_degree: usize,
    },
    /// Closed-form three-variable diagonal at (x1^2, x2^2, x3^2).
    Elliptic {
        #[arg(long, num_args = 3, value_names = ["X1", "X2", "X3"], allow_negative_numbers = true)]
        x: Vec<f64>,
    },
    /// Replica-symmetric ansatz for the m-th moment; m = 0 gives the m → 0 limit.
    Solvable {
        #[arg(long)]
        m: u32,
        #[arg(long)]
        kappa: f64,
        #[arg(long)]
        t: f64,
        /// Print the overlap table as CSV.
        #[arg(long)]
        csv: bool,
    },
    /// Monte Carlo estimate of E[N_{n,k}(t)] next to the exact value.
    Mc {
        #[arg(long)]
        n: usize,
        #[arg(long)]
        k: usize,
        #[arg(long)]
        t: f64,
        #[arg(long, default_value_t = 100_000)]
        samples: u64,
        #[arg(long, default_value_t = 42)]
        seed: u64,
    },
    /// Runs a verification suite and writes the JSON report.
    Verify {
        #[arg(long, default_value = "all")]
        suite: String,
        /// Report path; an empty path is accepted here and fails at write time.
        #[arg(long, value_parser = clap::value_parser!(std::ffi::OsString))]
        json: std::ffi::OsString,
    },
}

/// Runs `suite` and writes its report to `out`. Returns the exit code:
/// 0 iff no record failed (discrepancies do not fail the run).
pub fn run_verify(suite: Suite, out: &Path, limits: &Limits) -> Result<i32, CliError> {
    let report = Report::new(suite.name(), suites::run_suite(suite, limits));
    std::fs::write(out, report.to_json() + "\n")?;
    Ok(if report.failures() == 0 { 0 } else { 1 })
}

fn num(x: f64) -> String {
    fmt_sig(x, 15)
}

/// Executes one command. Returns the text for stdout and the exit code.
pub fn execute(command: &Command, limits: &Limits) -> Result<(String, i32), CliError> {
    let mut out = String::new();
    match command {
        Command::Moments { n, k, l, order, log, terms } => {
            let l = l.unwrap_or(*k);
            match (*order, *log) {
                (1, false) => writeln!(out, "{}", mean_z(*n, *k)).unwrap(),
                (1, true) => writeln!(out, "1,{}", num(ln_mean_z(*n, *k))).unwrap(),
                (2, false) => {
                    let m = second_moment(*n, *k, l, limits)?;
                    writeln!(out, "{}", m.value).unwrap();
                    if *terms {
                        out.push_str("j,term\n");
                        for (j, t) in m.per_j_terms.iter().enumerate() {
                            writeln!(out, "{j},{t}").unwrap();
                        }
                    }
                }
                (2, true) => {
                    let m = second_moment_log(*n, *k, l)?;
                    writeln!(out, "{}", m.value).unwrap();
                    if *terms {
                        out.push_str("j,sign,log_term\n");
                        for (j, t) in m.per_j_terms.iter().enumerate() {
                            writeln!(out, "{j},{t}").unwrap();
                        }
                    }
                }
                (r, false) if r >= 3 => {
                    if l != *k {
                        return Err(CliError::Usage("the order >= 3 bound is for a single length; omit --l".into()));
                    }
                    writeln!(out, "{}", all_or_nothing_bound(*n, *k, r, limits)?).unwrap();
                }
                (0, _) => return Err(CliError::Usage("--order must be at least 1".into())),
                (_, true) => return Err(CliError::Usage("--log supports --order 1 or 2".into())),
                _ => unreachable!("all orders covered"),
            }
            if *terms && *order != 2 {
                return Err(CliError::Usage("--terms needs --order 2".into()));
            }
        }
        Command::Oracle { n, k, l, order } => {
            let ks: Vec<usize> = match (l, order) {
                (None, _) => vec![*k],
                (Some(l), 2) => vec![*k, *l],
                (Some(_), _) => return Err(CliError::Usage("--l needs --order 2".into())),
            };
            writeln!(out, "{}", brute_moments(*n, &ks, *order, limits)?).unwrap();
        }
        Command::Rate { kappa, lambda, gamma, form } => {
            let form: RateForm = form.parse()?;
            match gamma {
                Some(g) => {
                    let v = rate_a(&RateQuery::new(*kappa, *lambda, *g)?, form)?;
                    writeln!(out, "{}", num(v)).unwrap();
                }
                None => {
                    let (v, g) = varadhan_second_moment(*kappa, *lambda)?;
                    out.push_str("quantity,value\n");
                    writeln!(out, "optimization_value,{}", num(v)).unwrap();
                    writeln!(out, "optimal_overlap,{}", num(g)).unwrap();
                    if kappa == lambda {
                        let p = ld_second_moment_printed(*kappa)?;
                        writeln!(out, "printed_symmetric_value,{}", num(p.printed_value)).unwrap();
                    }
                    let p = ld_mixed_printed(*kappa, *lambda)?;
                    writeln!(out, "printed_mixed_value,{}", num(p.printed_value)).unwrap();
                    writeln!(out, "printed_mixed_p,{}", num(p.p)).unwrap();
                }
            }
        }
        Command::Series { max_degree } => {
            out = gf_a_coefficients(*max_degree, limits)?.to_csv(&["k", "l", "j"]);
        }
        Command::Elliptic { x } => {
            let (x1, x2, x3) = (x[0], x[1], x[2]);
            let f = factorize(x1, x2, x3)?;
            out.push_str("quantity,value\n");
            writeln!(out, "value,{}", num(m3_elliptic(x1, x2, x3)?)).unwrap();
            writeln!(out, "kappa_plus,{}", num(f.kappa_plus)).unwrap();
            writeln!(out, "kappa_minus,{}", num(f.kappa_minus)).unwrap();
            writeln!(out, "modulus,{}", num(f.modulus)).unwrap();
            writeln!(out, "prefactor,{}", num(f.prefactor)).unwrap();
            if let Some(o) = f.omegas {
                for (name, v) in [
                    ("omega_plus_plus", o.plus_plus),
                    ("omega_plus_minus", o.plus_minus),
                    ("omega_minus_plus", o.minus_plus),
                    ("omega_minus_minus", o.minus_minus),
                ] {
                    writeln!(out, "{name},{}", num(v)).unwrap();
                }
            }
        }
        Command::Solvable { m: 0, kappa, t, csv } => {
            if *csv {
                return Err(CliError::Usage("--csv needs m >= 1".into()));
            }
            let (z, v) = replica_to_zero(*kappa, *t)?;
            out.push_str("quantity,value\n");
            writeln!(out, "z,{}", num(z)).unwrap();
            writeln!(out, "value,{}", num(v)).unwrap();
        }
        Command::Solvable { m, kappa, t, csv } => {
            let s = solve_z(*m, *kappa, *t)?;
            if *csv {
                out = s.to_csv();
            } else {
                out.push_str("quantity,value\n");
                writeln!(out, "z,{}", num(s.z)).unwrap();
                writeln!(out, "value,{}", num(s.ld_value)).unwrap();
            }
        }
        Command::Mc { n, k, t, samples, seed } => {
            let est = mc_n(*n, *k, *t, *samples, *seed, limits)?;
            out.push_str("quantity,value\n");
            writeln!(out, "mean,{}", num(est.mean)).unwrap();
            writeln!(out, "stderr,{}", num(est.stderr)).unwrap();
            writeln!(out, "samples,{}", est.samples).unwrap();
            writeln!(out, "exact,{}", num(expect_n(*n as u64, *k as u64, *t)?)).unwrap();
        }
        Command::Verify { suite, json } => {
            let code = run_verify(suite.parse()?, Path::new(json), limits)?;
            return Ok((out, code));
        }
    }
    Ok((out, 0))
}
