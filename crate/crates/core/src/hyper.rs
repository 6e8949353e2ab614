//! Hyperbolic kernel functions: `coth`, `G_1`, `h_r`, `f_r`, `u_r`, the bracket
//! symbol and `W(x,y)^{-1}`.
//!
//! `h_r` takes accumulated arguments `(x_1, x_1+x_2, ..)` and `f_r` takes the
//! increments. Both are built by the edge recursion
//!
//! ```text
//! h_m = Σ_{q=0}^{m-1} t_q h_{m-q-1}(x_1..x_{m-q-1}) coth(x_{m-q}) + t_m
//! ```
//!
//! with exact `tanh(z)/z` coefficients `t_q` from [`crate::series`].
//!
//! Evaluators refuse near-singular input instead of regularising it. The one
//! opt-in exception is [`f_eval_regularized`].

use std::ops::{Add, AddAssign, Div, Mul, Neg, Sub};

use num_complex::Complex64;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::series::{float_coeffs, Generating, DEFAULT_ORDER};

/// Raw `coth` refuses `|x|` below this.
pub const DELTA_SINGULAR: f64 = 1e-8;
/// `G_1` switches to its Taylor polynomial below this.
pub const G1_TAYLOR_CUTOFF: f64 = 1e-4;
/// Contiguous sums of a regular [`ArgTuple`] stay at least this far from zero.
pub const REGULAR_DELTA: f64 = 1e-6;
/// Largest argument magnitude accepted before `sinh` would overflow.
pub const ARG_CAP: f64 = 350.0;
/// Offset used by the opt-in regularised evaluator.
pub const REGULARIZE_OFFSET: f64 = 1e-4;

/// Field operations the kernels need; implemented for `f64` and `Complex64`.
pub trait Scalar:
    Copy
    + Add<Output = Self>
    + Sub<Output = Self>
    + Mul<Output = Self>
    + Div<Output = Self>
    + Neg<Output = Self>
    + AddAssign
{
    fn from_f64(x: f64) -> Self;
    fn modulus(self) -> f64;
    /// Magnitude of the real part, which controls `sinh` overflow.
    fn real_abs(self) -> f64;
    fn raw_coth(self) -> Self;
    fn raw_sinh(self) -> Self;
}

impl Scalar for f64 {
    fn from_f64(x: f64) -> Self {
        x
    }
    fn modulus(self) -> f64 {
        self.abs()
    }
    fn real_abs(self) -> f64 {
        self.abs()
    }
    fn raw_coth(self) -> Self {
        1.0 / self.tanh()
    }
    fn raw_sinh(self) -> Self {
        self.sinh()
    }
}

impl Scalar for Complex64 {
    fn from_f64(x: f64) -> Self {
        Complex64::new(x, 0.0)
    }
    fn modulus(self) -> f64 {
        self.norm()
    }
    fn real_abs(self) -> f64 {
        self.re.abs()
    }
    fn raw_coth(self) -> Self {
        self.cosh() / self.sinh()
    }
    fn raw_sinh(self) -> Self {
        self.sinh()
    }
}

fn check_cap<S: Scalar>(x: S) -> Result<()> {
    if x.real_abs() > ARG_CAP {
        return Err(Error::Overflow(x.real_abs()));
    }
    Ok(())
}

pub(crate) fn coth_checked<S: Scalar>(x: S, threshold: f64) -> Result<S> {
    if x.modulus() < threshold {
        return Err(Error::NearSingular { value: x.modulus(), threshold });
    }
    check_cap(x)?;
    Ok(x.raw_coth())
}

pub(crate) fn sinh_checked<S: Scalar>(x: S, threshold: f64) -> Result<S> {
    if x.modulus() < threshold {
        return Err(Error::NearSingular { value: x.modulus(), threshold });
    }
    check_cap(x)?;
    Ok(x.raw_sinh())
}

/// `cosh(x)/sinh(x)`.
pub fn coth(x: f64) -> Result<f64> {
    coth_checked(x, DELTA_SINGULAR)
}

/// `G_1(x) = x/sinh(x)`, continuous through `x = 0`.
pub fn g1(x: f64) -> Result<f64> {
    check_cap(x)?;
    if x.abs() < G1_TAYLOR_CUTOFF {
        let x2 = x * x;
        return Ok(1.0 - x2 / 6.0 + 7.0 * x2 * x2 / 360.0);
    }
    Ok(x / x.sinh())
}

fn t_coeffs(order: usize) -> Result<&'static [f64]> {
    if order > DEFAULT_ORDER {
        return Err(Error::InvalidInput(format!(
            "h_r is tabulated up to r = {DEFAULT_ORDER}, got r = {order}"
        )));
    }
    Ok(&float_coeffs(Generating::TanhOverZ)[..=order])
}

/// `h_0 .. h_r` on the leading windows of `cumargs`, where entry `m` is
/// `h_m(cumargs[0..m])`.
pub(crate) fn h_ladder<S: Scalar>(cumargs: &[S], threshold: f64) -> Result<Vec<S>> {
    let r = cumargs.len();
    let t = t_coeffs(r)?;
    let cot: Vec<S> = cumargs
        .iter()
        .map(|&x| coth_checked(x, threshold))
        .collect::<Result<_>>()?;
    let mut hs: Vec<S> = Vec::with_capacity(r + 1);
    hs.push(S::from_f64(1.0));
    for m in 1..=r {
        let mut acc = S::from_f64(t[m]);
        for q in 0..m {
            if t[q] != 0.0 {
                acc += S::from_f64(t[q]) * hs[m - q - 1] * cot[m - q - 1];
            }
        }
        hs.push(acc);
    }
    Ok(hs)
}

pub(crate) fn h_kernel<S: Scalar>(cumargs: &[S], threshold: f64) -> Result<S> {
    Ok(*h_ladder(cumargs, threshold)?.last().unwrap())
}

pub(crate) fn prefix_sums<S: Scalar>(args: &[S]) -> Vec<S> {
    let mut acc = S::from_f64(0.0);
    args.iter()
        .map(|&a| {
            acc += a;
            acc
        })
        .collect()
}

/// `h_r` at accumulated arguments; `r = cumargs.len()`, `h_0 = 1`.
pub fn h_eval(cumargs: &[f64]) -> Result<f64> {
    h_kernel(cumargs, DELTA_SINGULAR)
}

/// Ordered real arguments `L_1..L_N` with their prefix sums.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ArgTuple {
    args: Vec<f64>,
    prefix: Vec<f64>,
}

impl ArgTuple {
    pub fn new(args: Vec<f64>) -> Self {
        let prefix = prefix_sums(&args);
        ArgTuple { args, prefix }
    }

    pub fn args(&self) -> &[f64] {
        &self.args
    }

    /// `prefix[k] = L_1 + .. + L_{k+1}`.
    pub fn prefix(&self) -> &[f64] {
        &self.prefix
    }

    pub fn len(&self) -> usize {
        self.args.len()
    }

    pub fn is_empty(&self) -> bool {
        self.args.is_empty()
    }

    pub fn total(&self) -> f64 {
        self.prefix.last().copied().unwrap_or(0.0)
    }

    pub fn reversed(&self) -> ArgTuple {
        ArgTuple::new(self.args.iter().rev().copied().collect())
    }

    /// Sub-tuple `L_{start+1} .. L_end` (0-based half-open window).
    pub fn window(&self, start: usize, end: usize) -> ArgTuple {
        ArgTuple::new(self.args[start..end].to_vec())
    }

    /// Smallest `|L_i + .. + L_j|` over nonempty contiguous runs.
    pub fn min_contiguous_sum(&self) -> f64 {
        min_contiguous_abs(&self.args)
    }

    pub fn is_regular(&self) -> bool {
        self.is_regular_at(REGULAR_DELTA)
    }

    pub fn is_regular_at(&self, delta: f64) -> bool {
        self.args.is_empty() || self.min_contiguous_sum() >= delta
    }

    pub fn require_regular(&self) -> Result<()> {
        let m = self.min_contiguous_sum();
        if !self.args.is_empty() && m < REGULAR_DELTA {
            return Err(Error::NearSingular { value: m, threshold: REGULAR_DELTA });
        }
        Ok(())
    }
}

impl From<Vec<f64>> for ArgTuple {
    fn from(args: Vec<f64>) -> Self {
        ArgTuple::new(args)
    }
}

pub fn min_contiguous_abs(args: &[f64]) -> f64 {
    let mut best = f64::INFINITY;
    for i in 0..args.len() {
        let mut acc = 0.0;
        for a in &args[i..] {
            acc += a;
            best = best.min(acc.abs());
        }
    }
    best
}

fn check_prefix(t: &ArgTuple) -> Result<()> {
    for &p in t.prefix() {
        if p.abs() < REGULAR_DELTA {
            return Err(Error::NearSingular { value: p.abs(), threshold: REGULAR_DELTA });
        }
    }
    Ok(())
}

/// `f_N(L_1..L_N) = h_N(L_1, L_1+L_2, ..)`.
pub fn f_eval(t: &ArgTuple) -> Result<f64> {
    check_prefix(t)?;
    h_eval(t.prefix())
}

/// `f_N` at increments given as a plain slice.
pub fn f_of(args: &[f64]) -> Result<f64> {
    f_eval(&ArgTuple::new(args.to_vec()))
}

/// Average of `f_N` at `L_m ± δ` for every `m`, with `δ` = [`REGULARIZE_OFFSET`].
///
/// A documented approximation for tuples whose contiguous sums vanish: the odd
/// poles of `coth` cancel in the average. Results are not exact.
pub fn f_eval_regularized(t: &ArgTuple) -> Result<f64> {
    let shift = |d: f64| ArgTuple::new(t.args().iter().map(|a| a + d).collect());
    let up = h_eval(shift(REGULARIZE_OFFSET).prefix())?;
    let down = h_eval(shift(-REGULARIZE_OFFSET).prefix())?;
    Ok(0.5 * (up + down))
}

/// Edge quantity `u_r = h_{r-1}(x_1..x_{r-1}) coth(x_r)` on the prefix sums of
/// `t`, with `u_0 = 1`.
pub fn u_eval(t: &ArgTuple, r: usize) -> Result<f64> {
    if r > t.len() {
        return Err(Error::OutOfRange(format!("u_r needs r <= {}, got {r}", t.len())));
    }
    if r == 0 {
        return Ok(1.0);
    }
    let window = &t.prefix()[..r];
    for &p in window {
        if p.abs() < REGULAR_DELTA {
            return Err(Error::NearSingular { value: p.abs(), threshold: REGULAR_DELTA });
        }
    }
    Ok(h_eval(&window[..r - 1])? * coth(window[r - 1])?)
}

/// Bracket `[L_1 .. L_N] = f_N(L_1..L_N) L_1`. Arity must be at least one.
pub fn bracket(t: &ArgTuple) -> Result<f64> {
    if t.is_empty() {
        return Err(Error::InvalidInput("the bracket symbol needs at least one argument".into()));
    }
    Ok(f_eval(t)? * t.args()[0])
}

pub(crate) fn bracket_kernel<S: Scalar>(args: &[S], threshold: f64) -> Result<S> {
    let prefix = prefix_sums(args);
    Ok(h_kernel(&prefix, threshold)? * args[0])
}

/// Largest violation of the two edge identities on the prefix sums of `t`:
/// `u_r = Σ_p T_p h_{r-p}` and `h_m = Σ_q t_q u_{m-q}`, for `r, m <= N`.
/// Each difference is scaled by `max(1, |lhs|)`.
pub fn edge_residual(t: &ArgTuple) -> Result<f64> {
    check_prefix(t)?;
    let n = t.len();
    let hs = h_ladder(t.prefix(), DELTA_SINGULAR)?;
    let us: Vec<f64> = (0..=n).map(|r| u_eval(t, r)).collect::<Result<_>>()?;
    let big_t = float_coeffs(Generating::ZCoth);
    let small_t = float_coeffs(Generating::TanhOverZ);
    let mut worst = 0.0f64;
    for r in 0..=n {
        let rhs: f64 = (0..=r).map(|p| big_t[p] * hs[r - p]).sum();
        worst = worst.max((us[r] - rhs).abs() / us[r].abs().max(1.0));
        let rhs: f64 = (0..=r).map(|q| small_t[q] * us[r - q]).sum();
        worst = worst.max((hs[r] - rhs).abs() / hs[r].abs().max(1.0));
    }
    Ok(worst)
}

/// `W(x,y)^{-1} = G_1(x) G_1(y) / G_1(x-y)`, symmetric in `x, y`.
pub fn w2_inv(x: f64, y: f64) -> Result<f64> {
    Ok(g1(x)? * g1(y)? / g1(x - y)?)
}
