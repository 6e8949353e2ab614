use std::fmt::Write as _;
use std::path::PathBuf;
use std::process::ExitCode;

use bch_resum::gseries::{g_eval, IdentityReport, Representation};
use bch_resum::hyper::{bracket, f_eval, h_eval, u_eval, ArgTuple};
use bch_resum::matrix::{bch_oracle, convergence_table, DenseMatrix};
use bch_resum::perm::{expand_p, marching};
use bch_resum::perturbation::epsilon_sweep;
use bch_resum::sample::trial_rng;
use bch_resum::series::{series, Generating};
use bch_resum::suite::{self, OutputFormat, RunConfig};
use bch_resum::{Error, Result};
use clap::{Args, Parser, Subcommand};

#[derive(Parser)]
#[command(name = "bch-resum", version, about = "Resummed BCH coefficients, identity checks and matrix oracles")]
struct Cli {
    /// Config file laid over the built-in defaults (also BCH_RESUM_CONFIG).
    #[arg(long, global = true)]
    config: Option<PathBuf>,
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Subcommand)]
enum Cmd {
    /// Exact Taylor coefficients of t, T, s or W.
    Coeffs {
        name: String,
        order: usize,
        #[arg(long)]
        json: bool,
    },
    /// Signed permutation sums.
    Perm {
        #[command(subcommand)]
        op: PermOp,
    },
    /// Evaluate a kernel function.
    Eval {
        /// h, f, u or bracket.
        func: String,
        #[arg(long, value_delimiter = ',', allow_hyphen_values = true, required = true)]
        args: Vec<f64>,
        /// Edge index for `u` (defaults to the number of arguments).
        #[arg(long)]
        r: Option<usize>,
    },
    /// Evaluate G_N.
    G {
        #[command(subcommand)]
        op: GOp,
    },
    /// Check one identity at a single order.
    Verify {
        /// 52, marching, jk, x, denominator, equivalence or edge.
        name: String,
        #[arg(long)]
        n: usize,
        #[command(flatten)]
        common: Common,
    },
    /// Matrix series against the matrix-log oracle.
    Bch {
        #[command(subcommand)]
        op: BchOp,
    },
    /// Eigenvalue corrections against oracle eigenvalues.
    Perturb {
        #[arg(long)]
        dim: Option<usize>,
        #[arg(long)]
        seed: Option<u64>,
        #[arg(long, value_delimiter = ',')]
        eps: Option<Vec<f64>>,
        #[arg(long)]
        json: bool,
    },
    /// Run a named suite: coeffs, identities, equivalence, marching,
    /// denominator, bch, perturb or all.
    Run {
        suite: String,
        /// Override every N cap.
        #[arg(long)]
        n: Option<usize>,
        #[arg(long, value_delimiter = ',')]
        eps: Option<Vec<f64>>,
        #[command(flatten)]
        common: Common,
    },
}

#[derive(Subcommand)]
enum PermOp {
    /// Terms of P_N.
    ExpandP { n: usize },
    /// Terms of the marching operator M_{N,m}.
    Marching { n: usize, m: usize },
}

#[derive(Subcommand)]
enum GOp {
    Eval {
        /// perm, orig or over.
        #[arg(long, default_value = "perm")]
        rep: String,
        #[arg(long, value_delimiter = ',', allow_hyphen_values = true, required = true)]
        args: Vec<f64>,
    },
}

#[derive(Subcommand)]
enum BchOp {
    /// Convergence table: eps, N, error, slope.
    Approx {
        #[arg(long)]
        dim: Option<usize>,
        #[arg(long, default_value_t = 4)]
        order: usize,
        /// Frobenius norm of the random B.
        #[arg(long, default_value_t = 1.0)]
        bnorm: f64,
        #[arg(long)]
        seed: Option<u64>,
        #[arg(long, value_delimiter = ',')]
        eps: Option<Vec<f64>>,
        /// Read A as a JSON array of rows.
        #[arg(long)]
        a_json: Option<PathBuf>,
        /// Read B as a JSON array of rows.
        #[arg(long)]
        b_json: Option<PathBuf>,
        /// Write the oracle C for the unscaled B.
        #[arg(long)]
        c_json: Option<PathBuf>,
    },
}

#[derive(Args)]
struct Common {
    #[arg(long)]
    seed: Option<u64>,
    #[arg(long)]
    trials: Option<usize>,
    /// Override every tolerance.
    #[arg(long)]
    tol: Option<f64>,
    #[arg(long, conflicts_with = "csv")]
    json: bool,
    #[arg(long)]
    csv: bool,
    #[arg(long)]
    out: Option<PathBuf>,
    #[arg(long)]
    jobs: Option<usize>,
}

impl Common {
    fn apply(&self, cfg: &mut RunConfig) {
        if let Some(s) = self.seed {
            cfg.seed = s;
        }
        if let Some(t) = self.trials {
            cfg.set_all_trials(t);
        }
        if let Some(t) = self.tol {
            cfg.set_all_tolerances(t);
        }
        if self.json {
            cfg.output = OutputFormat::Json;
        }
        if self.csv {
            cfg.output = OutputFormat::Csv;
        }
        if let Some(j) = self.jobs {
            cfg.jobs = j;
        }
    }
}

fn load_config(path: &Option<PathBuf>) -> Result<RunConfig> {
    match path {
        Some(p) => RunConfig::load_file(p),
        None => RunConfig::load(),
    }
}

fn emit(text: &str, out: &Option<PathBuf>) -> Result<()> {
    match out {
        Some(p) => std::fs::write(p, text).map_err(|e| Error::Config(format!("cannot write {}: {e}", p.display()))),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

fn reports_exit(reports: &[IdentityReport], cfg: &RunConfig, out: &Option<PathBuf>) -> Result<ExitCode> {
    emit(&suite::render(reports, cfg.output), out)?;
    Ok(if suite::all_pass(reports) { ExitCode::SUCCESS } else { ExitCode::from(1) })
}

fn read_matrix(path: &PathBuf) -> Result<DenseMatrix> {
    let text = std::fs::read_to_string(path).map_err(|e| Error::Config(format!("cannot read {}: {e}", path.display())))?;
    serde_json::from_str(&text).map_err(|e| Error::InvalidInput(format!("{}: {e}", path.display())))
}

fn fmt_opt(v: Option<f64>) -> String {
    v.map(|s| format!("{s:.4}")).unwrap_or_default()
}

fn run(cli: Cli) -> Result<ExitCode> {
    let mut cfg = load_config(&cli.config)?;
    match cli.cmd {
        Cmd::Coeffs { name, order, json } => {
            let s = series(Generating::from_label(&name)?, order);
            if json {
                println!("{}", serde_json::to_string_pretty(&s).expect("series serialise"));
            } else {
                for c in s.to_strings() {
                    println!("{c}");
                }
            }
        }
        Cmd::Perm { op } => {
            let sum = match op {
                PermOp::ExpandP { n } => {
                    if n == 0 {
                        return Err(Error::InvalidInput("P_N needs N >= 1".into()));
                    }
                    expand_p(n)
                }
                PermOp::Marching { n, m } => marching(n, m)?,
            };
            for line in sum.to_lines() {
                println!("{line}");
            }
        }
        Cmd::Eval { func, args, r } => {
            let t = ArgTuple::new(args);
            let v = match func.as_str() {
                "h" => h_eval(t.args())?,
                "f" => f_eval(&t)?,
                "u" => u_eval(&t, r.unwrap_or(t.len()))?,
                "bracket" => bracket(&t)?,
                _ => return Err(Error::InvalidInput(format!("unknown function `{func}` (h, f, u, bracket)"))),
            };
            println!("{v:.16e}");
        }
        Cmd::G { op: GOp::Eval { rep, args } } => {
            println!("{:.16e}", g_eval(Representation::from_label(&rep)?, &args)?);
        }
        Cmd::Verify { name, n, common } => {
            common.apply(&mut cfg);
            let reports = suite::verify(&name, n, &cfg)?;
            return reports_exit(&reports, &cfg, &common.out);
        }
        Cmd::Run { suite: name, n, eps, common } => {
            common.apply(&mut cfg);
            if let Some(n) = n {
                cfg.set_all_caps(n);
            }
            if let Some(e) = eps {
                cfg.set_eps(e);
            }
            let reports = suite::run_suite(&name, &cfg)?;
            return reports_exit(&reports, &cfg, &common.out);
        }
        Cmd::Bch { op: BchOp::Approx { dim, order, bnorm, seed, eps, a_json, b_json, c_json } } => {
            let dim = dim.unwrap_or(cfg.dim);
            let mut rng = trial_rng(seed.unwrap_or(cfg.seed), "bch", dim, 0);
            let a = match &a_json {
                Some(p) => read_matrix(p)?,
                None => DenseMatrix::random_symmetric(&mut rng, dim, cfg.a_norm)?,
            };
            let b = match &b_json {
                Some(p) => read_matrix(p)?,
                None => DenseMatrix::random_symmetric(&mut rng, a.dim(), bnorm)?,
            };
            if let Some(p) = &c_json {
                let c = bch_oracle(&a, &b)?;
                emit(&serde_json::to_string(&c).expect("matrix serialise"), &Some(p.clone()))?;
            }
            let eps = eps.unwrap_or(cfg.bch_eps.clone());
            let orders: Vec<usize> = (1..=order).collect();
            let rows = convergence_table(&a, &b, &orders, &eps)?;
            let mut out = String::from("eps,order,error,slope\n");
            for r in rows {
                let _ = writeln!(out, "{},{},{:e},{}", r.eps, r.order, r.error, fmt_opt(r.slope));
            }
            print!("{out}");
        }
        Cmd::Perturb { dim, seed, eps, json } => {
            let dim = dim.unwrap_or(cfg.dim);
            let mut rng = trial_rng(seed.unwrap_or(cfg.seed), "perturb", dim, 0);
            let a = DenseMatrix::random_symmetric(&mut rng, dim, cfg.a_norm)?;
            let b = DenseMatrix::random_symmetric(&mut rng, dim, 1.0)?;
            let eps = eps.unwrap_or(cfg.perturb_eps.clone());
            let results = (0..dim).map(|n| epsilon_sweep(&a, &b, n, &eps)).collect::<Result<Vec<_>>>()?;
            if json {
                println!("{}", serde_json::to_string_pretty(&results).expect("results serialise"));
            } else {
                let mut out = String::from("n,eps,exact,partial_sum,residual,slope\n");
                for r in &results {
                    let mut prev: Option<(f64, f64)> = None;
                    for p in &r.epsilon_sweep {
                        let slope = prev
                            .filter(|(pe, pr)| *pe > 0.0 && p.eps > 0.0 && *pr > 0.0)
                            .map(|(pe, pr)| (p.residual / pr).ln() / (p.eps / pe).ln());
                        let _ = writeln!(
                            out,
                            "{},{},{:.17e},{:.17e},{:e},{}",
                            r.n, p.eps, p.exact, p.partial_sum, p.residual, fmt_opt(slope)
                        );
                        prev = Some((p.eps, p.residual));
                    }
                }
                print!("{out}");
            }
        }
    }
    Ok(ExitCode::SUCCESS)
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { ExitCode::from(2) } else { ExitCode::SUCCESS };
        }
    };
    match run(cli) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(2)
        }
    }
}
