//! The coefficient functions `G_N` and the identities that tie their
//! representations together.
//!
//! Three routes to `G_N`:
//!
//! * [`g_perm`]: `sinh(ΣL) G_N = P_N [L_1 .. L_{N-1}]`, the signed sum over the
//!   `2^{N-1}` permutations of [`expand_p`] applied to brackets.
//! * [`g_original`]: the reversal combination of `E_{N-1}` sums.
//! * [`g_overcomplete`]: products of `G_1` and two `h` factors over `N+1`
//!   shift-invariant variables `x_0 .. x_N`.
//!
//! Each identity check returns an [`IdentityReport`].

use std::collections::HashMap;
use std::sync::{Arc, Mutex, OnceLock};

use num_complex::Complex64;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::hyper::{
    bracket_kernel, coth, f_of, g1, h_eval, sinh_checked, ArgTuple, Scalar,
    DELTA_SINGULAR, REGULAR_DELTA,
};
use crate::perm::{expand_p, marching, s_perms, Perm, PermSum};
use crate::series::{float_coeffs, Generating};

/// Default tolerances for the identity suites.
pub mod tol {
    pub const EQUIVALENCE: f64 = 1e-10;
    pub const IDENTITY_52: f64 = 1e-11;
    pub const MARCHING: f64 = 1e-10;
    pub const JK: f64 = 1e-11;
    pub const X_VANISH: f64 = 1e-13;
    pub const X3: f64 = 1e-12;
    pub const X_REVERSAL: f64 = 1e-11;
    pub const DENOMINATOR: f64 = 1e-11;
    pub const ANTISYMMETRY: f64 = 1e-12;
    pub const PARITY: f64 = 1e-13;
    pub const SHIFT: f64 = 1e-11;
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Representation {
    Permutation,
    Original,
    Overcomplete,
}

impl Representation {
    pub fn from_label(label: &str) -> Result<Self> {
        match label {
            "perm" | "permutation" => Ok(Representation::Permutation),
            "orig" | "original" => Ok(Representation::Original),
            "over" | "overcomplete" => Ok(Representation::Overcomplete),
            _ => Err(Error::InvalidInput(format!(
                "unknown representation `{label}` (expected perm, orig or over)"
            ))),
        }
    }
}

/// One identity check.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct IdentityReport {
    pub identity: String,
    pub n: usize,
    pub trial: usize,
    pub seed: u64,
    pub inputs: Vec<f64>,
    pub residual: f64,
    pub tolerance: f64,
    pub pass: bool,
}

impl IdentityReport {
    pub fn new(identity: &str, n: usize, inputs: Vec<f64>, residual: f64, tolerance: f64) -> Self {
        IdentityReport {
            identity: identity.to_string(),
            n,
            trial: 0,
            seed: 0,
            inputs,
            residual,
            tolerance,
            pass: residual.is_finite() && residual.abs() <= tolerance,
        }
    }

    pub fn with_trial(mut self, seed: u64, trial: usize) -> Self {
        self.seed = seed;
        self.trial = trial;
        self
    }
}

type Terms = Arc<Vec<(f64, Perm)>>;

fn cached(table: &'static OnceLock<Mutex<HashMap<usize, Terms>>>, n: usize, build: fn(usize) -> PermSum) -> Terms {
    let map = table.get_or_init(|| Mutex::new(HashMap::new()));
    if let Some(t) = map.lock().unwrap().get(&n) {
        return t.clone();
    }
    let terms: Terms = Arc::new(build(n).terms().map(|(p, c)| (c as f64, p.clone())).collect());
    map.lock().unwrap().entry(n).or_insert(terms).clone()
}

/// Terms of `P_N` as `(coefficient, permutation)`, memoised per `N`.
pub fn p_terms(n: usize) -> Terms {
    static TABLE: OnceLock<Mutex<HashMap<usize, Terms>>> = OnceLock::new();
    cached(&TABLE, n, expand_p)
}

fn numerator_kernel<S: Scalar>(args: &[S], threshold: f64) -> Result<S> {
    let n = args.len();
    if n == 1 {
        return Ok(args[0]);
    }
    let mut acc = S::from_f64(0.0);
    for (c, p) in p_terms(n).iter() {
        acc += S::from_f64(*c) * bracket_kernel(&p.apply_prefix(args, n - 1), threshold)?;
    }
    Ok(acc)
}

fn require_nonempty(t: &ArgTuple) -> Result<()> {
    if t.is_empty() {
        return Err(Error::InvalidInput("G_N needs N >= 1 arguments".into()));
    }
    Ok(())
}

/// `Num_N = sinh(ΣL) G_N = P_N [L_1 .. L_{N-1}]`.
pub fn numerator(t: &ArgTuple) -> Result<f64> {
    require_nonempty(t)?;
    t.require_regular()?;
    numerator_kernel(t.args(), DELTA_SINGULAR)
}

/// `G_N` from the permutation representation.
pub fn g_perm(t: &ArgTuple) -> Result<f64> {
    let num = numerator(t)?;
    Ok(num / sinh_checked(t.total(), REGULAR_DELTA)?)
}

/// `E_N(L_1 .. L_N)` with the linear term `s_N/2 (first + ΣL)`.
///
/// `first` is `L_1` for the forward half and `L_{N+1}` for the reversed half.
pub fn e_sum(t: &ArgTuple, first: f64) -> Result<f64> {
    let l = t.args();
    let n = l.len();
    let s = float_coeffs(Generating::SinhCoshOverZ);
    if n >= s.len() {
        return Err(Error::InvalidInput(format!("E_N is tabulated up to N = {}", s.len() - 1)));
    }
    let mut acc = 0.5 * s[n] * (first + t.total());
    for r in 1..=n {
        let a = t.prefix()[r - 1];
        let left: Vec<f64> = l[1..r].iter().rev().copied().collect();
        let sign = if r % 2 == 1 { 1.0 } else { -1.0 };
        acc += sign * a * f_of(&left)? * coth(a)? * f_of(&l[r..])?;
    }
    Ok(acc)
}

/// `G_N` from the original representation:
/// `(E_{N-1}(L_1..L_{N-1}) - (-1)^N E_{N-1}(L_N..L_2)) / sinh(ΣL)`.
pub fn g_original(t: &ArgTuple) -> Result<f64> {
    require_nonempty(t)?;
    t.require_regular()?;
    let n = t.len();
    let l = t.args();
    let fwd = e_sum(&t.window(0, n - 1), l[0])?;
    let rev = t.reversed();
    let bwd = e_sum(&rev.window(0, n - 1), l[n - 1])?;
    let sign = if n % 2 == 0 { 1.0 } else { -1.0 };
    Ok((fwd - sign * bwd) / sinh_checked(t.total(), REGULAR_DELTA)?)
}

/// `G_M(x_1-x_0, .., x_M-x_{M-1})` from the overcomplete representation.
pub fn g_overcomplete(xs: &[f64]) -> Result<f64> {
    if xs.len() < 2 {
        return Err(Error::InvalidInput("the overcomplete form needs at least two values".into()));
    }
    for i in 0..xs.len() {
        for j in i + 1..xs.len() {
            let d = (xs[j] - xs[i]).abs();
            if d < REGULAR_DELTA {
                return Err(Error::NearSingular { value: d, threshold: REGULAR_DELTA });
            }
        }
    }
    let m = xs.len() - 1;
    let (x0, xm) = (xs[0], xs[m]);
    let shifted = |lo: usize, hi: usize, by: f64| -> Vec<f64> { xs[lo..hi].iter().map(|x| x - by).collect() };
    let mut acc = xm / (xm - x0) * g1(x0 - xm)? * h_eval(&shifted(1, m, xm))?;
    acc -= x0 / (xm - x0) * h_eval(&shifted(1, m, x0))? * g1(xm - x0)?;
    for r in 1..m {
        let xr = xs[r];
        acc += xr / ((xr - x0) * (xm - xr))
            * g1(x0 - xr)?
            * h_eval(&shifted(1, r, xr))?
            * h_eval(&shifted(r + 1, m, xr))?
            * g1(xm - xr)?;
    }
    Ok(acc)
}

/// Cumulative variables `x_0, x_0+L_1, ..` for the overcomplete form.
pub fn to_overcomplete(t: &ArgTuple, x0: f64) -> Vec<f64> {
    std::iter::once(x0).chain(t.prefix().iter().map(|p| p + x0)).collect()
}

/// Increments `x_1-x_0, ..` of an overcomplete sequence.
pub fn from_overcomplete(xs: &[f64]) -> ArgTuple {
    ArgTuple::new(xs.windows(2).map(|w| w[1] - w[0]).collect())
}

/// Evaluates `G_N` by the requested route. `values` are increments for the
/// permutation and original forms and `x_0 .. x_N` for the overcomplete one.
pub fn g_eval(rep: Representation, values: &[f64]) -> Result<f64> {
    match rep {
        Representation::Permutation => g_perm(&ArgTuple::new(values.to_vec())),
        Representation::Original => g_original(&ArgTuple::new(values.to_vec())),
        Representation::Overcomplete => g_overcomplete(values),
    }
}

/// Below this smallest contiguous sum, [`g_limit`] switches to the contour mean.
pub const LIMIT_MARGIN: f64 = 0.1;
const LIMIT_NODES: usize = 48;
const LIMIT_RADII: [f64; 6] = [0.5, 0.6, 0.7, 0.8, 0.4, 0.3];

/// A value of `G_N` together with whether the contour mean was needed.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LimitValue {
    pub value: f64,
    pub limit: bool,
}

fn subset_sums(args: &[f64]) -> Vec<(f64, f64)> {
    let n = args.len();
    (1u64..(1u64 << n))
        .map(|mask| {
            let mut s = 0.0;
            let mut c = 0.0;
            for (i, a) in args.iter().enumerate() {
                if mask >> i & 1 == 1 {
                    s += a;
                    c += 1.0;
                }
            }
            (s, c)
        })
        .collect()
}

fn node(j: usize, radius: f64) -> Complex64 {
    let theta = 2.0 * std::f64::consts::PI * (j as f64 + 0.5) / LIMIT_NODES as f64;
    Complex64::from_polar(radius, theta)
}

/// `G_N` at any real tuple, including points where its pieces are singular
/// (vanishing contiguous sums, `ΣL = 0`).
///
/// Regular tuples go straight to [`g_perm`]. Otherwise `G_N` is the mean of
/// `G_N(L + s (1,..,1)/N)` over a circle of complex `s`, which is exact for
/// the analytic function `G_N` up to trapezoid error far below `1e-14`. The
/// radius is chosen to keep every subset sum met by the brackets away from
/// zero on the nodes.
pub fn g_limit(args: &[f64]) -> Result<LimitValue> {
    let k = args.len();
    if k == 0 {
        return Err(Error::InvalidInput("G_N needs N >= 1 arguments".into()));
    }
    if k == 1 {
        return Ok(LimitValue { value: g1(args[0])?, limit: false });
    }
    if k > 12 {
        return Err(Error::InvalidInput("contour evaluation supports N <= 12".into()));
    }
    if crate::hyper::min_contiguous_abs(args) >= LIMIT_MARGIN {
        return Ok(LimitValue { value: g_perm(&ArgTuple::new(args.to_vec()))?, limit: false });
    }
    let sums = subset_sums(args);
    let kf = k as f64;
    let clearance = |r: f64| -> f64 {
        let mut best = f64::INFINITY;
        for j in 0..LIMIT_NODES {
            let s = node(j, r);
            for &(sum, count) in &sums {
                best = best.min((sum + s * (count / kf)).norm());
            }
        }
        best
    };
    let radius = LIMIT_RADII
        .iter()
        .map(|&r| (r, clearance(r)))
        .max_by(|a, b| a.1.total_cmp(&b.1))
        .unwrap()
        .0;
    let mut acc = Complex64::new(0.0, 0.0);
    for j in 0..LIMIT_NODES {
        let s = node(j, radius) / kf;
        let shifted: Vec<Complex64> = args.iter().map(|&a| a + s).collect();
        let total: Complex64 = shifted.iter().sum();
        let num = numerator_kernel(&shifted, DELTA_SINGULAR)?;
        acc += num / sinh_checked(total, DELTA_SINGULAR)?;
    }
    Ok(LimitValue { value: acc.re / LIMIT_NODES as f64, limit: true })
}

fn rel_diff(a: f64, b: f64) -> f64 {
    (a - b).abs() / a.abs().max(1.0)
}

/// Largest relative disagreement among the three representations at `t`,
/// with the overcomplete variables anchored at `x0`.
pub fn equivalence_residual(t: &ArgTuple, x0: f64) -> Result<f64> {
    let a = g_perm(t)?;
    let b = g_original(t)?;
    let c = g_overcomplete(&to_overcomplete(t, x0))?;
    Ok(rel_diff(a, b).max(rel_diff(a, c)).max(rel_diff(b, c)))
}

/// `|Num_N(L_N..L_1) - (-1)^{N+1} Num_N(L_1..L_N)|`.
pub fn antisymmetry_residual(t: &ArgTuple) -> Result<f64> {
    let sign = if t.len() % 2 == 1 { 1.0 } else { -1.0 };
    Ok((numerator(&t.reversed())? - sign * numerator(t)?).abs())
}

/// Relative change of the overcomplete form under `x -> x + λ`.
pub fn shift_residual(xs: &[f64], lambda: f64) -> Result<f64> {
    let moved: Vec<f64> = xs.iter().map(|x| x + lambda).collect();
    Ok(rel_diff(g_overcomplete(xs)?, g_overcomplete(&moved)?))
}

/// Right-hand side of the bridge identity:
/// `f_N + Σ_r (-1)^r f_{r-1}(L_r..L_2) coth(L_1+..+L_r) f_{N-r}(L_{r+1}..L_N)`.
pub fn identity_52_rhs(t: &ArgTuple) -> Result<f64> {
    let l = t.args();
    let n = l.len();
    let mut acc = f_of(l)?;
    for r in 1..=n {
        let left: Vec<f64> = l[1..r].iter().rev().copied().collect();
        let sign = if r % 2 == 0 { 1.0 } else { -1.0 };
        acc += sign * f_of(&left)? * coth(t.prefix()[r - 1])? * f_of(&l[r..])?;
    }
    Ok(acc)
}

/// `|s_N - identity_52_rhs|`.
pub fn identity_52_residual(t: &ArgTuple) -> Result<f64> {
    t.require_regular()?;
    let s = float_coeffs(Generating::SinhCoshOverZ);
    Ok((s[t.len()] - identity_52_rhs(t)?).abs())
}

pub fn check_identity_52(t: &ArgTuple, tolerance: f64) -> Result<IdentityReport> {
    let r = identity_52_residual(t)?;
    Ok(IdentityReport::new("identity_52", t.len(), t.args().to_vec(), r, tolerance))
}

/// `|Σ_{σ ∈ M_{N,m}} G_N(σ(α, β))|`.
pub fn marching_sum(alphas: &[f64], betas: &[f64]) -> Result<f64> {
    if alphas.is_empty() || betas.is_empty() {
        return Err(Error::InvalidInput(
            "marching needs at least one alpha and one beta (1 <= m <= N-1)".into(),
        ));
    }
    let args: Vec<f64> = alphas.iter().chain(betas).copied().collect();
    let ops = marching(args.len(), alphas.len())?;
    let mut acc = 0.0;
    for (p, c) in ops.terms() {
        acc += c as f64 * g_perm(&ArgTuple::new(p.apply(&args)))?;
    }
    Ok(acc.abs())
}

pub fn marching_residual(alphas: &[f64], betas: &[f64], tolerance: f64) -> Result<IdentityReport> {
    let r = marching_sum(alphas, betas)?;
    let inputs: Vec<f64> = alphas.iter().chain(betas).copied().collect();
    let mut rep = IdentityReport::new("marching", inputs.len(), inputs, r, tolerance);
    rep.identity = format!("marching_m{}", alphas.len());
    Ok(rep)
}

/// `(J_N, K_N)` as finite sums over `f_m(L_m..L_1) f_{N-m}(L_{m+1}..L_N)`.
pub fn jk_values(t: &ArgTuple) -> Result<(f64, f64)> {
    let l = t.args();
    let n = l.len();
    let total = t.total();
    let (mut j, mut k) = (0.0, 0.0);
    for m in 0..=n {
        let left: Vec<f64> = l[..m].iter().rev().copied().collect();
        let lead = if m == 0 { 0.0 } else { t.prefix()[m - 1] };
        let prod = f_of(&left)? * f_of(&l[m..])?;
        let sign = if m % 2 == 0 { 1.0 } else { -1.0 };
        j -= sign * lead * prod;
        k += sign * (total - lead) * prod;
    }
    Ok((j, k))
}

/// `|K_N - J_N - W_N ΣL|`.
pub fn jk_residual(t: &ArgTuple) -> Result<f64> {
    t.require_regular()?;
    let (j, k) = jk_values(t)?;
    let w = float_coeffs(Generating::SinhOverZSquared)[t.len()];
    Ok((k - j - w * t.total()).abs())
}

pub fn jk_relation(t: &ArgTuple, tolerance: f64) -> Result<IdentityReport> {
    let r = jk_residual(t)?;
    Ok(IdentityReport::new("jk", t.len(), t.args().to_vec(), r, tolerance))
}

/// `H_N = P_N [L_1 .. L_N]` with all `N` arguments in every bracket.
pub fn h_full(t: &ArgTuple) -> Result<f64> {
    require_nonempty(t)?;
    let mut acc = 0.0;
    for (c, p) in p_terms(t.len()).iter() {
        acc += c * bracket_kernel(&p.apply(t.args()), REGULAR_DELTA)?;
    }
    Ok(acc)
}

/// Extra function `X_N = E_N - H_N`.
pub fn x_extra(t: &ArgTuple) -> Result<f64> {
    t.require_regular()?;
    Ok(e_sum(t, t.args()[0])? - h_full(t)?)
}

/// `X_3` in closed form: `(L_2 coth L_2 + L_3 coth L_3) / 3`.
pub fn x3_closed_form(t: &ArgTuple) -> Result<f64> {
    if t.len() != 3 {
        return Err(Error::InvalidInput("X_3 needs three arguments".into()));
    }
    let l = t.args();
    Ok((l[1] * coth(l[1])? + l[2] * coth(l[2])?) / 3.0)
}

/// `|X_N(L_1..L_N) - (-1)^{N+1} X_N(L_{N+1}..L_2)|` for an `(N+1)`-tuple.
pub fn x_reversal_residual(t: &ArgTuple) -> Result<f64> {
    if t.len() < 2 {
        return Err(Error::InvalidInput("X_N reversal needs N+1 >= 2 arguments".into()));
    }
    let n = t.len() - 1;
    let fwd = x_extra(&t.window(0, n))?;
    let bwd = x_extra(&t.reversed().window(0, n))?;
    let sign = if n % 2 == 1 { 1.0 } else { -1.0 };
    Ok((fwd - sign * bwd).abs())
}

/// Rational bracket `x_1 / (x_1 (x_1+x_2) .. (x_1+..+x_n))`.
pub fn rational_bracket(xs: &[f64]) -> Result<f64> {
    let mut acc = 0.0;
    let mut prod = 1.0;
    for &x in xs {
        acc += x;
        if acc.abs() < REGULAR_DELTA {
            return Err(Error::NearSingular { value: acc.abs(), threshold: REGULAR_DELTA });
        }
        prod *= acc;
    }
    Ok(xs[0] / prod)
}

/// `D_{N,r} = Σ_{i=r}^N (-1)^{i-r} Π_k 1/(x_k+..+x_i) Π_j 1/(x_{i+1}+..+x_j)`.
pub fn denominator_part(xs: &[f64], r: usize) -> Result<f64> {
    let n = xs.len();
    if r == 0 || r > n {
        return Err(Error::OutOfRange(format!("D_{{N,r}} needs 1 <= r <= N, got r={r}")));
    }
    let guard = |v: f64| -> Result<f64> {
        if v.abs() < REGULAR_DELTA {
            return Err(Error::NearSingular { value: v.abs(), threshold: REGULAR_DELTA });
        }
        Ok(v)
    };
    let mut total = 0.0;
    for i in r..=n {
        let mut left = 1.0;
        let mut acc = 0.0;
        for k in (0..i).rev() {
            acc += xs[k];
            left /= guard(acc)?;
        }
        let mut right = 1.0;
        acc = 0.0;
        for x in &xs[i..] {
            acc += x;
            right /= guard(acc)?;
        }
        let sign = if (i - r) % 2 == 0 { 1.0 } else { -1.0 };
        total += sign * left * right;
    }
    Ok(total)
}

/// `D_N = Σ_r (-1)^{r-1} x_r D_{N,r}`.
pub fn denominator_total(xs: &[f64]) -> Result<f64> {
    let mut acc = 0.0;
    for r in 1..=xs.len() {
        let sign = if r % 2 == 1 { 1.0 } else { -1.0 };
        acc += sign * xs[r - 1] * denominator_part(xs, r)?;
    }
    Ok(acc)
}

fn rational_sum(ops: &PermSum, xs: &[f64]) -> Result<f64> {
    ops.eval(|p| rational_bracket(&p.apply(xs)))
}

/// Residual of the denominator identity. Both the full statement
/// `D_N = P_N [x_1..x_N]` and its per-`r` pieces `x_r D_{N,r} = S_{N,r}[x_1..x_N]`
/// are checked; the larger scaled residual is returned.
pub fn denominator_residual(xs: &[f64]) -> Result<f64> {
    if xs.is_empty() {
        return Err(Error::InvalidInput("denominator check needs N >= 1".into()));
    }
    let n = xs.len();
    let ops: Vec<(f64, Perm)> = p_terms(n).to_vec();
    let mut scale = 1.0f64;
    let mut bracket_sum = 0.0;
    for (c, p) in &ops {
        let v = rational_bracket(&p.apply(xs))?;
        scale = scale.max(v.abs());
        bracket_sum += c * v;
    }
    let mut worst = (denominator_total(xs)? - bracket_sum).abs() / scale;
    for r in 1..=n {
        let lhs = xs[r - 1] * denominator_part(xs, r)?;
        let rhs = rational_sum(&s_perms(n, r)?, xs)?;
        worst = worst.max((lhs - rhs).abs() / lhs.abs().max(1.0));
    }
    Ok(worst)
}

pub fn denominator_check(xs: &[f64], tolerance: f64) -> Result<IdentityReport> {
    let r = denominator_residual(xs)?;
    Ok(IdentityReport::new("denominator", xs.len(), xs.to_vec(), r, tolerance))
}
