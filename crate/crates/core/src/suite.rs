//! Named verification suites, their configuration and report rendering.
//!
//! A suite expands into independent tasks (check, N, trial). Tasks run on a
//! rayon pool and are collected in plan order, so output is identical for any
//! number of workers.

use std::collections::BTreeMap;
use std::fmt::Write as _;
use std::path::Path;

use num_rational::BigRational;
use num_traits::One;
use rand::Rng;
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::gseries::{
    antisymmetry_residual, denominator_residual, equivalence_residual, g_perm, identity_52_residual,
    jk_residual, marching_sum, shift_residual, to_overcomplete, x3_closed_form, x_extra,
    x_reversal_residual, IdentityReport,
};
use crate::hyper::{edge_residual, ArgTuple};
use crate::matrix::{bch_oracle, convergence_table, expm, log_log_slope, DenseMatrix};
use crate::perm::{expand_p, marching};
use crate::perturbation::epsilon_sweep;
use crate::sample::{regular_tuple, subset_regular_tuple, trial_rng, SAMPLE_MARGIN, SUBSET_MARGIN};
use crate::series::{convolve, reciprocal, series, Generating, RationalSeries};

pub const DEFAULT_CONFIG: &str = include_str!("../config/default.conf");
pub const CONFIG_ENV: &str = "BCH_RESUM_CONFIG";
pub const CONFIG_VERSION: u32 = 1;

/// Tolerance keys, one per check family.
pub const TOLERANCE_KEYS: [&str; 17] = [
    "coeffs",
    "edge",
    "identity_52",
    "jk",
    "x_vanish",
    "x3",
    "x_reversal",
    "antisymmetry",
    "parity",
    "equivalence",
    "shift",
    "marching",
    "marching_algebra",
    "denominator",
    "bch_oracle",
    "bch_slope",
    "perturb_slope",
];

/// Checks whose range in N is configurable.
pub const CAP_KEYS: [&str; 11] = [
    "coeffs",
    "edge",
    "identity_52",
    "jk",
    "x_reversal",
    "antisymmetry",
    "equivalence",
    "shift",
    "marching",
    "marching_algebra",
    "denominator",
];

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum OutputFormat {
    Json,
    Csv,
}

impl OutputFormat {
    pub fn parse(s: &str) -> Result<Self> {
        match s {
            "json" => Ok(OutputFormat::Json),
            "csv" => Ok(OutputFormat::Csv),
            _ => Err(Error::Config(format!("output must be json or csv, got `{s}`"))),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct RunConfig {
    pub seed: u64,
    pub trials: usize,
    pub trials_by_key: BTreeMap<String, usize>,
    pub tolerances: BTreeMap<String, f64>,
    pub n_caps: BTreeMap<String, usize>,
    pub output: OutputFormat,
    /// Worker threads; 0 lets rayon decide.
    pub jobs: usize,
    pub dim: usize,
    pub a_norm: f64,
    pub bch_orders: Vec<usize>,
    pub bch_eps: Vec<f64>,
    pub bch_slope_margin: f64,
    pub perturb_eps: Vec<f64>,
    pub perturb_min_slope: f64,
}

fn parse_num<T: std::str::FromStr>(key: &str, value: &str) -> Result<T> {
    value.parse().map_err(|_| Error::Config(format!("bad value `{value}` for `{key}`")))
}

fn parse_list<T: std::str::FromStr>(key: &str, value: &str) -> Result<Vec<T>> {
    value.split(',').map(|v| parse_num(key, v.trim())).collect()
}

impl RunConfig {
    fn blank() -> Self {
        RunConfig {
            seed: 0,
            trials: 0,
            trials_by_key: BTreeMap::new(),
            tolerances: BTreeMap::new(),
            n_caps: BTreeMap::new(),
            output: OutputFormat::Json,
            jobs: 0,
            dim: 0,
            a_norm: 0.0,
            bch_orders: Vec::new(),
            bch_eps: Vec::new(),
            bch_slope_margin: 0.0,
            perturb_eps: Vec::new(),
            perturb_min_slope: 0.0,
        }
    }

    /// The built-in defaults.
    pub fn defaults() -> Self {
        Self::from_text(DEFAULT_CONFIG).expect("built-in config is valid")
    }

    /// Parses a full config file. Every tolerance and cap must be present.
    pub fn from_text(text: &str) -> Result<Self> {
        let mut cfg = Self::blank();
        cfg.apply_text(text)?;
        cfg.validate()?;
        Ok(cfg)
    }

    /// Built-in defaults overlaid with `text`, which must carry a matching
    /// `version` but may set any subset of keys.
    pub fn overlay(text: &str) -> Result<Self> {
        let mut cfg = Self::defaults();
        cfg.apply_text(text)?;
        cfg.validate()?;
        Ok(cfg)
    }

    /// Defaults, or the file named by `BCH_RESUM_CONFIG` laid over them.
    pub fn load() -> Result<Self> {
        match std::env::var_os(CONFIG_ENV) {
            Some(path) => Self::load_file(Path::new(&path)),
            None => Ok(Self::defaults()),
        }
    }

    pub fn load_file(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| Error::Config(format!("cannot read {}: {e}", path.display())))?;
        Self::overlay(&text)
    }

    fn apply_text(&mut self, text: &str) -> Result<()> {
        let mut version = None;
        for (lineno, raw) in text.lines().enumerate() {
            let line = raw.split('#').next().unwrap().trim();
            if line.is_empty() {
                continue;
            }
            let (key, value) = line
                .split_once('=')
                .ok_or_else(|| Error::Config(format!("line {}: expected `key = value`", lineno + 1)))?;
            let (key, value) = (key.trim(), value.trim());
            if key == "version" {
                version = Some(parse_num::<u32>(key, value)?);
                continue;
            }
            self.set(key, value)?;
        }
        match version {
            Some(CONFIG_VERSION) => Ok(()),
            Some(v) => Err(Error::Config(format!("unsupported config version {v}"))),
            None => Err(Error::Config("config is missing `version`".into())),
        }
    }

    /// Sets one key from its textual value.
    pub fn set(&mut self, key: &str, value: &str) -> Result<()> {
        if let Some(k) = key.strip_prefix("tol.") {
            if !TOLERANCE_KEYS.contains(&k) {
                return Err(Error::Config(format!("unknown tolerance `{k}`")));
            }
            let v: f64 = parse_num(key, value)?;
            if !(v >= 0.0) {
                return Err(Error::Config(format!("tolerance `{k}` must be non-negative")));
            }
            self.tolerances.insert(k.to_string(), v);
            return Ok(());
        }
        if let Some(k) = key.strip_prefix("cap.") {
            if !CAP_KEYS.contains(&k) {
                return Err(Error::Config(format!("unknown cap `{k}`")));
            }
            self.n_caps.insert(k.to_string(), parse_num(key, value)?);
            return Ok(());
        }
        if let Some(k) = key.strip_prefix("trials.") {
            let known = TOLERANCE_KEYS.contains(&k) || Suite::from_label(k).is_ok();
            if !known {
                return Err(Error::Config(format!("unknown trials key `{k}`")));
            }
            self.trials_by_key.insert(k.to_string(), parse_num(key, value)?);
            return Ok(());
        }
        match key {
            "seed" => self.seed = parse_num(key, value)?,
            "trials" => self.trials = parse_num(key, value)?,
            "output" => self.output = OutputFormat::parse(value)?,
            "jobs" => self.jobs = parse_num(key, value)?,
            "matrix.dim" => self.dim = parse_num(key, value)?,
            "matrix.a_norm" => self.a_norm = parse_num(key, value)?,
            "bch.orders" => self.bch_orders = parse_list(key, value)?,
            "bch.eps" => self.bch_eps = parse_list(key, value)?,
            "bch.slope_margin" => self.bch_slope_margin = parse_num(key, value)?,
            "perturb.eps" => self.perturb_eps = parse_list(key, value)?,
            "perturb.min_slope" => self.perturb_min_slope = parse_num(key, value)?,
            _ => return Err(Error::Config(format!("unknown key `{key}`"))),
        }
        Ok(())
    }

    fn validate(&self) -> Result<()> {
        for k in TOLERANCE_KEYS {
            if !self.tolerances.contains_key(k) {
                return Err(Error::Config(format!("missing tolerance `tol.{k}`")));
            }
        }
        for k in CAP_KEYS {
            if !self.n_caps.contains_key(k) {
                return Err(Error::Config(format!("missing cap `cap.{k}`")));
            }
        }
        if !(2..=crate::matrix::MAX_DIM).contains(&self.dim) {
            return Err(Error::Config(format!("matrix.dim must be in 2..=16, got {}", self.dim)));
        }
        if self.bch_eps.len() < 2 || self.perturb_eps.len() < 2 {
            return Err(Error::Config("slope fits need at least two eps values".into()));
        }
        if self.bch_eps.iter().chain(&self.perturb_eps).any(|e| !(*e > 0.0)) {
            return Err(Error::Config("eps values must be positive".into()));
        }
        if self.bch_orders.iter().any(|&o| o > crate::matrix::MAX_SERIES_ORDER) {
            return Err(Error::Config("bch.orders exceed the series cap".into()));
        }
        Ok(())
    }

    pub fn tolerance(&self, key: &str) -> f64 {
        self.tolerances[key]
    }

    pub fn cap(&self, key: &str) -> usize {
        self.n_caps[key]
    }

    fn trials_for(&self, key: &str, suite: Suite) -> usize {
        self.trials_by_key
            .get(key)
            .or_else(|| self.trials_by_key.get(suite.label()))
            .copied()
            .unwrap_or(self.trials)
    }

    /// Same number of trials for every check.
    pub fn set_all_trials(&mut self, trials: usize) {
        self.trials = trials;
        self.trials_by_key.clear();
    }

    /// Same tolerance for every check.
    pub fn set_all_tolerances(&mut self, tol: f64) {
        for v in self.tolerances.values_mut() {
            *v = tol;
        }
    }

    /// Same cap for every check.
    pub fn set_all_caps(&mut self, n: usize) {
        for v in self.n_caps.values_mut() {
            *v = n;
        }
    }

    /// Same scaling list for the bch and perturbation sweeps.
    pub fn set_eps(&mut self, eps: Vec<f64>) {
        self.bch_eps = eps.clone();
        self.perturb_eps = eps;
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord)]
pub enum Suite {
    Coeffs,
    Identities,
    Equivalence,
    Marching,
    Denominator,
    Bch,
    Perturb,
}

impl Suite {
    pub const ALL: [Suite; 7] = [
        Suite::Coeffs,
        Suite::Identities,
        Suite::Equivalence,
        Suite::Marching,
        Suite::Denominator,
        Suite::Bch,
        Suite::Perturb,
    ];

    pub fn label(self) -> &'static str {
        match self {
            Suite::Coeffs => "coeffs",
            Suite::Identities => "identities",
            Suite::Equivalence => "equivalence",
            Suite::Marching => "marching",
            Suite::Denominator => "denominator",
            Suite::Bch => "bch",
            Suite::Perturb => "perturb",
        }
    }

    pub fn from_label(name: &str) -> Result<Self> {
        Suite::ALL
            .iter()
            .copied()
            .find(|s| s.label() == name)
            .ok_or_else(|| Error::UnknownSuite(name.to_string()))
    }

    /// `all` expands to every suite.
    pub fn parse_many(name: &str) -> Result<Vec<Suite>> {
        if name == "all" {
            return Ok(Suite::ALL.to_vec());
        }
        Ok(vec![Suite::from_label(name)?])
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum Check {
    CoeffsPrinted,
    CoeffsInverse,
    CoeffsW,
    CoeffsS,
    Edge,
    Identity52,
    Jk,
    XVanish,
    X3,
    XReversal,
    Antisymmetry,
    Parity,
    Equivalence,
    Shift,
    Marching(usize),
    MarchingAlgebra(usize),
    Denominator,
    BchOracle,
    BchSlope,
    PerturbSlope(usize),
}

impl Check {
    fn key(self) -> &'static str {
        match self {
            Check::CoeffsPrinted | Check::CoeffsInverse | Check::CoeffsW | Check::CoeffsS => "coeffs",
            Check::Edge => "edge",
            Check::Identity52 => "identity_52",
            Check::Jk => "jk",
            Check::XVanish => "x_vanish",
            Check::X3 => "x3",
            Check::XReversal => "x_reversal",
            Check::Antisymmetry => "antisymmetry",
            Check::Parity => "parity",
            Check::Equivalence => "equivalence",
            Check::Shift => "shift",
            Check::Marching(_) => "marching",
            Check::MarchingAlgebra(_) => "marching_algebra",
            Check::Denominator => "denominator",
            Check::BchOracle => "bch_oracle",
            Check::BchSlope => "bch_slope",
            Check::PerturbSlope(_) => "perturb_slope",
        }
    }

    fn label(self) -> String {
        match self {
            Check::CoeffsPrinted => "coeffs_printed".into(),
            Check::CoeffsInverse => "coeffs_inverse".into(),
            Check::CoeffsW => "coeffs_w".into(),
            Check::CoeffsS => "coeffs_s".into(),
            Check::Marching(m) => format!("marching_m{m}"),
            Check::MarchingAlgebra(m) => format!("marching_algebra_m{m}"),
            Check::PerturbSlope(s) => format!("perturb_slope_state{s}"),
            other => other.key().into(),
        }
    }
}

#[derive(Debug, Clone, Copy)]
struct Task {
    check: Check,
    n: usize,
    trial: usize,
}

fn repeat(out: &mut Vec<Task>, check: Check, n: usize, trials: usize) {
    out.extend((0..trials).map(|trial| Task { check, n, trial }));
}

fn plan(suite: Suite, cfg: &RunConfig) -> Vec<Task> {
    let mut out = Vec::new();
    let trials = |c: Check| cfg.trials_for(c.key(), suite);
    match suite {
        Suite::Coeffs => {
            let n = cfg.cap("coeffs");
            for c in [Check::CoeffsPrinted, Check::CoeffsInverse, Check::CoeffsW, Check::CoeffsS] {
                repeat(&mut out, c, n, 1);
            }
        }
        Suite::Identities => {
            for n in 1..=cfg.cap("edge") {
                repeat(&mut out, Check::Edge, n, trials(Check::Edge));
            }
            for n in 0..=cfg.cap("identity_52") {
                repeat(&mut out, Check::Identity52, n, trials(Check::Identity52));
            }
            for n in 0..=cfg.cap("jk") {
                repeat(&mut out, Check::Jk, n, trials(Check::Jk));
            }
            for n in 1..=2 {
                repeat(&mut out, Check::XVanish, n, trials(Check::XVanish));
            }
            repeat(&mut out, Check::X3, 3, trials(Check::X3));
            for n in 1..=cfg.cap("x_reversal") {
                repeat(&mut out, Check::XReversal, n, trials(Check::XReversal));
            }
            for n in 1..=cfg.cap("antisymmetry") {
                repeat(&mut out, Check::Antisymmetry, n, trials(Check::Antisymmetry));
            }
            repeat(&mut out, Check::Parity, 1, trials(Check::Parity));
        }
        Suite::Equivalence => {
            for n in 1..=cfg.cap("equivalence") {
                repeat(&mut out, Check::Equivalence, n, trials(Check::Equivalence));
            }
            for n in 1..=cfg.cap("shift") {
                repeat(&mut out, Check::Shift, n, trials(Check::Shift));
            }
        }
        Suite::Marching => {
            for n in 2..=cfg.cap("marching") {
                for m in 1..n {
                    repeat(&mut out, Check::Marching(m), n, trials(Check::Marching(m)));
                }
            }
            for n in 2..=cfg.cap("marching_algebra") {
                for m in 1..n {
                    repeat(&mut out, Check::MarchingAlgebra(m), n, 1);
                }
            }
        }
        Suite::Denominator => {
            for n in 1..=cfg.cap("denominator") {
                repeat(&mut out, Check::Denominator, n, trials(Check::Denominator));
            }
        }
        Suite::Bch => {
            let t = cfg.trials_for("bch", suite);
            repeat(&mut out, Check::BchOracle, cfg.dim, t);
            for &order in &cfg.bch_orders {
                repeat(&mut out, Check::BchSlope, order, t);
            }
        }
        Suite::Perturb => {
            let t = cfg.trials_for("perturb", suite);
            for trial in 0..t {
                for state in 0..cfg.dim {
                    out.push(Task { check: Check::PerturbSlope(state), n: cfg.dim, trial });
                }
            }
        }
    }
    out
}

/// Printed values of `tanh(z)/z`, `z coth(z)` and `sinh(z)cosh(z)/z` at even
/// orders `0, 2, .., 10`.
const PRINTED: [(Generating, [(i64, i64); 6]); 3] = [
    (Generating::TanhOverZ, [(1, 1), (-1, 3), (2, 15), (-17, 315), (62, 2835), (-1382, 155925)]),
    (Generating::ZCoth, [(1, 1), (1, 3), (-1, 45), (2, 945), (-1, 4725), (2, 93555)]),
    (Generating::SinhCoshOverZ, [(1, 1), (2, 3), (2, 15), (4, 315), (2, 2835), (4, 155925)]),
];

fn exact_mismatches(a: &RationalSeries, b: &RationalSeries) -> f64 {
    a.coeffs().iter().zip(b.coeffs()).filter(|(x, y)| x != y).count() as f64
}

/// `sinh(z)/z` from its factorial series, squared by direct convolution.
fn sinh_over_z_squared_direct(order: usize) -> RationalSeries {
    let mut fact = num_bigint::BigInt::one();
    let mut coeffs = Vec::with_capacity(order + 1);
    for k in 0..=order {
        fact *= num_bigint::BigInt::from(k + 1);
        coeffs.push(if k % 2 == 0 {
            BigRational::new(1.into(), fact.clone())
        } else {
            BigRational::from_integer(0.into())
        });
    }
    let s = RationalSeries::new("sinh/z", coeffs);
    convolve(&s, &s)
}

fn matrix_pair(cfg: &RunConfig, trial: usize, stream: &str, a_norm: f64) -> Result<(DenseMatrix, DenseMatrix)> {
    let mut rng = trial_rng(cfg.seed, stream, cfg.dim, trial);
    let a = DenseMatrix::random_symmetric(&mut rng, cfg.dim, a_norm)?;
    let b = DenseMatrix::random_symmetric(&mut rng, cfg.dim, 1.0)?;
    Ok((a, b))
}

fn evaluate(task: Task, cfg: &RunConfig) -> Result<(Vec<f64>, f64)> {
    let mut rng = trial_rng(cfg.seed, task.check.key(), task.n, task.trial);
    let n = task.n;
    let tuple = |rng: &mut rand_chacha::ChaCha8Rng, len: usize| ArgTuple::new(regular_tuple(rng, len, SAMPLE_MARGIN));
    Ok(match task.check {
        Check::CoeffsPrinted => {
            let mut bad = 0.0;
            for (kind, values) in PRINTED {
                let s = series(kind, n);
                for (i, &(p, q)) in values.iter().enumerate() {
                    if 2 * i <= n && s.coeff(2 * i) != &BigRational::new(p.into(), q.into()) {
                        bad += 1.0;
                    }
                }
            }
            (vec![], bad)
        }
        Check::CoeffsInverse => {
            let prod = convolve(&series(Generating::TanhOverZ, n), &series(Generating::ZCoth, n));
            let via_reciprocal = reciprocal(&series(Generating::TanhOverZ, n))?;
            let unit = if prod.is_unit() { 0.0 } else { 1.0 };
            (vec![], unit + exact_mismatches(&via_reciprocal, &series(Generating::ZCoth, n)))
        }
        Check::CoeffsW => {
            let direct = sinh_over_z_squared_direct(n);
            let product = convolve(&series(Generating::TanhOverZ, n), &series(Generating::SinhCoshOverZ, n));
            let w = series(Generating::SinhOverZSquared, n);
            (vec![], exact_mismatches(&direct, &w) + exact_mismatches(&product, &w))
        }
        Check::CoeffsS => {
            let s = series(Generating::SinhCoshOverZ, n);
            let mut bad = 0.0;
            let mut fact = num_bigint::BigInt::one();
            for k in 0..=n {
                fact *= num_bigint::BigInt::from(k + 1);
                let expect = if k % 2 == 0 {
                    BigRational::new(num_bigint::BigInt::from(2).pow(k as u32), fact.clone())
                } else {
                    BigRational::from_integer(0.into())
                };
                if s.coeff(k) != &expect {
                    bad += 1.0;
                }
            }
            (vec![], bad)
        }
        Check::Edge => {
            let t = tuple(&mut rng, n);
            (t.args().to_vec(), edge_residual(&t)?)
        }
        Check::Identity52 => {
            let t = tuple(&mut rng, n);
            (t.args().to_vec(), identity_52_residual(&t)?)
        }
        Check::Jk => {
            let t = tuple(&mut rng, n);
            (t.args().to_vec(), jk_residual(&t)?)
        }
        Check::XVanish => {
            let t = tuple(&mut rng, n);
            (t.args().to_vec(), x_extra(&t)?.abs())
        }
        Check::X3 => {
            let t = tuple(&mut rng, 3);
            (t.args().to_vec(), (x_extra(&t)? - x3_closed_form(&t)?).abs())
        }
        Check::XReversal => {
            let t = tuple(&mut rng, n + 1);
            (t.args().to_vec(), x_reversal_residual(&t)?)
        }
        Check::Antisymmetry => {
            let t = tuple(&mut rng, n);
            (t.args().to_vec(), antisymmetry_residual(&t)?)
        }
        Check::Parity => {
            let t = tuple(&mut rng, 1);
            let x = t.args()[0];
            let flipped = g_perm(&ArgTuple::new(vec![-x]))?;
            (vec![x], (flipped - g_perm(&t)?).abs())
        }
        Check::Equivalence => {
            let t = tuple(&mut rng, n);
            let x0 = rng.gen_range(-2.0..2.0);
            let mut inputs = t.args().to_vec();
            inputs.push(x0);
            (inputs, equivalence_residual(&t, x0)?)
        }
        Check::Shift => {
            let t = tuple(&mut rng, n);
            let xs = to_overcomplete(&t, rng.gen_range(-2.0..2.0));
            let lambda = rng.gen_range(-2.0..2.0);
            let r = shift_residual(&xs, lambda)?;
            let mut inputs = xs;
            inputs.push(lambda);
            (inputs, r)
        }
        Check::Marching(m) => {
            let l = subset_regular_tuple(&mut rng, n, SUBSET_MARGIN);
            let r = marching_sum(&l[..m], &l[m..])?;
            (l, r)
        }
        Check::MarchingAlgebra(m) => {
            let product = marching(n, m)?.try_mul(&expand_p(n))?;
            (vec![], product.weight() as f64)
        }
        Check::Denominator => {
            let t = tuple(&mut rng, n);
            (t.args().to_vec(), denominator_residual(t.args())?)
        }
        Check::BchOracle => {
            let (a, b) = matrix_pair(cfg, task.trial, "bch_oracle", 1.0)?;
            let c = bch_oracle(&a, &b)?;
            let ea = expm(&a);
            let target = ea.matmul(&expm(&b.scale(2.0)))?.matmul(&ea)?;
            let r = expm(&c.scale(2.0)).sub(&target)?.norm() / target.norm();
            (vec![], r)
        }
        Check::BchSlope => {
            let (a, b) = matrix_pair(cfg, task.trial, "bch", cfg.a_norm)?;
            let rows = convergence_table(&a, &b, &[n], &cfg.bch_eps)?;
            let errors: Vec<f64> = rows.iter().map(|r| r.error).collect();
            let slope = log_log_slope(&cfg.bch_eps, &errors);
            let shortfall = (n as f64 + cfg.bch_slope_margin - slope).max(0.0);
            let mut inputs = errors;
            inputs.push(slope);
            (inputs, shortfall)
        }
        Check::PerturbSlope(state) => {
            let (a, b) = matrix_pair(cfg, task.trial, "perturb", cfg.a_norm)?;
            let res = epsilon_sweep(&a, &b, state, &cfg.perturb_eps)?;
            let slope = res.slope().unwrap_or(f64::NAN);
            let mut inputs: Vec<f64> = res.epsilon_sweep.iter().map(|p| p.residual).collect();
            inputs.push(slope);
            (inputs, (cfg.perturb_min_slope - slope).max(0.0))
        }
    })
}

fn run_task(task: Task, cfg: &RunConfig) -> IdentityReport {
    let tol = cfg.tolerance(task.check.key());
    let (inputs, residual) = evaluate(task, cfg).unwrap_or_else(|_| (vec![], f64::NAN));
    let n = match task.check {
        Check::PerturbSlope(state) => state,
        _ => task.n,
    };
    let mut rep = IdentityReport::new(&task.check.label(), n, inputs, residual, tol);
    rep.seed = cfg.seed;
    rep.trial = task.trial;
    rep
}

fn execute(tasks: Vec<Task>, cfg: &RunConfig) -> Result<Vec<IdentityReport>> {
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(cfg.jobs)
        .build()
        .map_err(|e| Error::Config(format!("thread pool: {e}")))?;
    Ok(pool.install(|| tasks.par_iter().map(|&t| run_task(t, cfg)).collect()))
}

/// Runs a named suite (or `all`) and returns its reports in plan order.
pub fn run_suite(name: &str, cfg: &RunConfig) -> Result<Vec<IdentityReport>> {
    let tasks: Vec<Task> = Suite::parse_many(name)?.into_iter().flat_map(|s| plan(s, cfg)).collect();
    execute(tasks, cfg)
}

/// Names accepted by [`verify`].
pub const VERIFY_NAMES: [&str; 7] = ["52", "marching", "jk", "x", "denominator", "equivalence", "edge"];

/// Runs one identity at a single order `n` for `cfg.trials` trials.
pub fn verify(name: &str, n: usize, cfg: &RunConfig) -> Result<Vec<IdentityReport>> {
    let trials = cfg.trials;
    let mut tasks = Vec::new();
    let mut single = |check: Check, min_n: usize| -> Result<()> {
        if n < min_n {
            return Err(Error::InvalidInput(format!("`verify {name}` needs n >= {min_n}")));
        }
        repeat(&mut tasks, check, n, trials);
        Ok(())
    };
    match name {
        "52" => single(Check::Identity52, 0)?,
        "jk" => single(Check::Jk, 0)?,
        "x" => single(Check::XReversal, 1)?,
        "denominator" => single(Check::Denominator, 1)?,
        "equivalence" => single(Check::Equivalence, 1)?,
        "edge" => single(Check::Edge, 1)?,
        "marching" => {
            if n < 2 {
                return Err(Error::InvalidInput("`verify marching` needs n >= 2".into()));
            }
            for m in 1..n {
                repeat(&mut tasks, Check::Marching(m), n, trials);
            }
        }
        _ => {
            return Err(Error::InvalidInput(format!(
                "unknown identity `{name}` (expected one of {})",
                VERIFY_NAMES.join(", ")
            )))
        }
    }
    execute(tasks, cfg)
}

pub fn all_pass(reports: &[IdentityReport]) -> bool {
    reports.iter().all(|r| r.pass)
}

pub fn render_json(reports: &[IdentityReport]) -> String {
    let mut s = serde_json::to_string_pretty(reports).expect("reports serialise");
    s.push('\n');
    s
}

/// `identity,n,trials,max_residual,pass`, one row per (identity, n) in
/// first-seen order.
pub fn render_csv(reports: &[IdentityReport]) -> String {
    let mut groups: Vec<((String, usize), (usize, f64, bool))> = Vec::new();
    for r in reports {
        let key = (r.identity.clone(), r.n);
        let res = if r.residual.is_nan() { f64::INFINITY } else { r.residual.abs() };
        match groups.iter_mut().find(|(k, _)| *k == key) {
            Some((_, (count, worst, pass))) => {
                *count += 1;
                *worst = worst.max(res);
                *pass &= r.pass;
            }
            None => groups.push((key, (1, res, r.pass))),
        }
    }
    let mut out = String::from("identity,n,trials,max_residual,pass\n");
    for ((id, n), (count, worst, pass)) in groups {
        let _ = writeln!(out, "{id},{n},{count},{worst:e},{pass}");
    }
    out
}

pub fn render(reports: &[IdentityReport], format: OutputFormat) -> String {
    match format {
        OutputFormat::Json => render_json(reports),
        OutputFormat::Csv => render_csv(reports),
    }
}
