//! Signed permutations of argument positions and their integer group algebra.
//!
//! A permutation `σ` of arity `N` acts on a function of the arguments
//! `L_1..L_N` by relabelling indices: `σ f(L_1, .., L_N) = f(L_σ(1), .., L_σ(N))`.
//! Under this action the operator product `σ τ` is the map composition
//! `i ↦ σ(τ(i))`, which is what [`Perm::compose`] computes.
//!
//! Positions are 0-based internally and 1-based in every printed form.

use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use serde::Serialize;

use crate::error::{Error, Result};

/// Bijection on `0..arity`, stored in one-line notation.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
pub struct Perm(Vec<usize>);

impl Perm {
    pub fn identity(arity: usize) -> Self {
        Perm((0..arity).collect())
    }

    /// Builds a permutation from 0-based one-line notation.
    pub fn from_one_line(map: Vec<usize>) -> Result<Self> {
        let n = map.len();
        let mut seen = vec![false; n];
        for &m in &map {
            if m >= n || std::mem::replace(&mut seen[m], true) {
                return Err(Error::InvalidInput(format!("{map:?} is not a bijection")));
            }
        }
        Ok(Perm(map))
    }

    pub fn arity(&self) -> usize {
        self.0.len()
    }

    pub fn one_line(&self) -> &[usize] {
        &self.0
    }

    pub fn image(&self, i: usize) -> usize {
        self.0[i]
    }

    /// `(self ∘ other)(i) = self(other(i))`.
    pub fn compose(&self, other: &Perm) -> Perm {
        assert_eq!(self.arity(), other.arity(), "compose needs equal arity");
        Perm(other.0.iter().map(|&i| self.0[i]).collect())
    }

    pub fn inverse(&self) -> Perm {
        let mut inv = vec![0; self.arity()];
        for (i, &m) in self.0.iter().enumerate() {
            inv[m] = i;
        }
        Perm(inv)
    }

    /// Extends to a larger arity by fixing the trailing positions.
    pub fn promote(&self, arity: usize) -> Perm {
        assert!(arity >= self.arity());
        let mut map = self.0.clone();
        map.extend(self.arity()..arity);
        Perm(map)
    }

    pub fn is_identity(&self) -> bool {
        self.0.iter().enumerate().all(|(i, &m)| i == m)
    }

    /// Relabels a full argument tuple: entry `i` becomes `args[σ(i)]`.
    pub fn apply<T: Copy>(&self, args: &[T]) -> Vec<T> {
        self.apply_prefix(args, self.arity())
    }

    /// The first `len` entries of [`Perm::apply`]. An arity-`N` permutation
    /// acts on an `(N-1)`-argument bracket this way, leaving out the final slot
    /// while still drawing values from all `N` arguments.
    pub fn apply_prefix<T: Copy>(&self, args: &[T], len: usize) -> Vec<T> {
        self.0[..len].iter().map(|&m| args[m]).collect()
    }
}

impl fmt::Display for Perm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.0.iter().map(|m| (m + 1).to_string()).collect();
        f.write_str(&parts.join(" "))
    }
}

/// A permutation with a sign in {+1, -1}.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct SignedPerm {
    pub sign: i8,
    pub perm: Perm,
}

impl SignedPerm {
    pub fn new(sign: i8, perm: Perm) -> Self {
        assert!(sign == 1 || sign == -1, "sign must be ±1");
        SignedPerm { sign, perm }
    }

    pub fn compose(&self, other: &SignedPerm) -> SignedPerm {
        SignedPerm::new(self.sign * other.sign, self.perm.compose(&other.perm))
    }

    pub fn inverse(&self) -> SignedPerm {
        SignedPerm::new(self.sign, self.perm.inverse())
    }
}

/// Reversal `R_n` acting on the first `n` of `arity` positions: `m ↦ n+1-m`.
pub fn reversal_in(n: usize, arity: usize) -> Perm {
    assert!(n <= arity);
    let mut map: Vec<usize> = (0..n).rev().collect();
    map.extend(n..arity);
    Perm(map)
}

/// Reversal `R_N` on `N` positions. `R_1` is the identity.
pub fn reversal(n: usize) -> SignedPerm {
    SignedPerm::new(1, reversal_in(n, n))
}

/// The cycle `(m m+1 .. n)` on `arity` positions (1-based `m <= n`), sending
/// `m → m+1 → .. → n → m`.
pub fn cycle(m: usize, n: usize, arity: usize) -> Perm {
    assert!(1 <= m && m <= n && n <= arity);
    let mut map: Vec<usize> = (0..arity).collect();
    for i in (m - 1)..(n - 1) {
        map[i] = i + 1;
    }
    map[n - 1] = m - 1;
    Perm(map)
}

/// Element of the integer group algebra: a formal sum of permutations of one
/// arity. Always in canonical form: equal maps merged, zero terms dropped, and
/// terms ordered by one-line notation.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PermSum {
    arity: usize,
    terms: BTreeMap<Perm, i64>,
}

impl PermSum {
    pub fn zero(arity: usize) -> Self {
        PermSum { arity, terms: BTreeMap::new() }
    }

    pub fn identity(arity: usize) -> Self {
        PermSum::from_perm(1, Perm::identity(arity))
    }

    pub fn from_perm(coeff: i64, perm: Perm) -> Self {
        let mut s = PermSum::zero(perm.arity());
        s.add_term(coeff, perm);
        s
    }

    pub fn from_signed(terms: impl IntoIterator<Item = SignedPerm>, arity: usize) -> Self {
        let mut s = PermSum::zero(arity);
        for t in terms {
            s.add_term(t.sign as i64, t.perm);
        }
        s
    }

    fn add_term(&mut self, coeff: i64, perm: Perm) {
        assert_eq!(perm.arity(), self.arity, "term arity differs from sum arity");
        if coeff == 0 {
            return;
        }
        let total = self.terms.get(&perm).copied().unwrap_or(0) + coeff;
        if total == 0 {
            self.terms.remove(&perm);
        } else {
            self.terms.insert(perm, total);
        }
    }

    pub fn arity(&self) -> usize {
        self.arity
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    /// Number of distinct permutations with nonzero coefficient.
    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    /// Terms in canonical order.
    pub fn terms(&self) -> impl Iterator<Item = (&Perm, i64)> {
        self.terms.iter().map(|(p, &c)| (p, c))
    }

    /// Expands into unit-sign terms (a term with coefficient `±k` repeats `k` times).
    pub fn signed_terms(&self) -> Vec<SignedPerm> {
        let mut out = Vec::new();
        for (p, c) in self.terms() {
            let sign = if c > 0 { 1 } else { -1 };
            for _ in 0..c.unsigned_abs() {
                out.push(SignedPerm::new(sign, p.clone()));
            }
        }
        out
    }

    pub fn coefficient(&self, perm: &Perm) -> i64 {
        self.terms.get(perm).copied().unwrap_or(0)
    }

    /// Total of |coefficients|; counts terms of a multiset expansion.
    pub fn weight(&self) -> u64 {
        self.terms.values().map(|c| c.unsigned_abs()).sum()
    }

    pub fn promote(&self, arity: usize) -> PermSum {
        let mut s = PermSum::zero(arity);
        for (p, c) in self.terms() {
            s.add_term(c, p.promote(arity));
        }
        s
    }

    pub fn scale(&self, k: i64) -> PermSum {
        let mut s = PermSum::zero(self.arity);
        for (p, c) in self.terms() {
            s.add_term(c * k, p.clone());
        }
        s
    }

    /// Distributed product; arities must match.
    pub fn try_mul(&self, rhs: &PermSum) -> Result<PermSum> {
        if self.arity != rhs.arity {
            return Err(Error::ArityMismatch { left: self.arity, right: rhs.arity });
        }
        let mut s = PermSum::zero(self.arity);
        for (p, a) in self.terms() {
            for (q, b) in rhs.terms() {
                s.add_term(a * b, p.compose(q));
            }
        }
        Ok(s)
    }

    /// Product after promoting the smaller-arity factor by fixing trailing positions.
    pub fn mul_promoted(&self, rhs: &PermSum) -> PermSum {
        let arity = self.arity.max(rhs.arity);
        self.promote(arity).try_mul(&rhs.promote(arity)).expect("arities equalised")
    }

    pub fn try_add(&self, rhs: &PermSum) -> Result<PermSum> {
        if self.arity != rhs.arity {
            return Err(Error::ArityMismatch { left: self.arity, right: rhs.arity });
        }
        let mut s = self.clone();
        for (p, c) in rhs.terms() {
            s.add_term(c, p.clone());
        }
        Ok(s)
    }

    /// Evaluates `Σ c · f(σ)` for a scalar-valued function of the permutation.
    pub fn eval<F>(&self, mut f: F) -> Result<f64>
    where
        F: FnMut(&Perm) -> Result<f64>,
    {
        let mut acc = 0.0;
        for (p, c) in self.terms() {
            acc += c as f64 * f(p)?;
        }
        Ok(acc)
    }

    /// One row per term: `+1 1 2 3`, `-1 2 1 3`.
    pub fn to_lines(&self) -> Vec<String> {
        self.terms().map(|(p, c)| format!("{c:+} {p}")).collect()
    }
}

impl Add for &PermSum {
    type Output = PermSum;
    fn add(self, rhs: &PermSum) -> PermSum {
        self.try_add(rhs).expect("PermSum addition needs equal arity")
    }
}

impl Sub for &PermSum {
    type Output = PermSum;
    fn sub(self, rhs: &PermSum) -> PermSum {
        self.try_add(&rhs.scale(-1)).expect("PermSum subtraction needs equal arity")
    }
}

impl Neg for &PermSum {
    type Output = PermSum;
    fn neg(self) -> PermSum {
        self.scale(-1)
    }
}

impl Mul for &PermSum {
    type Output = PermSum;
    fn mul(self, rhs: &PermSum) -> PermSum {
        self.try_mul(rhs).expect("PermSum product needs equal arity")
    }
}

impl fmt::Display for PermSum {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return f.write_str("0");
        }
        f.write_str(&self.to_lines().join("\n"))
    }
}

/// `P_N = (1 - (-1)^N R_N) .. (1 + R_3)(1 - R_2)`, with `P_1 = 1`.
///
/// The factor with the largest reversal sits on the left.
pub fn expand_p(n: usize) -> PermSum {
    assert!(n >= 1, "P_N needs N >= 1");
    let mut acc = PermSum::identity(n);
    for k in 1..n {
        // factor (1 - (-1)^{k+1} R_{k+1})
        let coeff = if (k + 1) % 2 == 0 { -1 } else { 1 };
        let factor = &PermSum::identity(n) + &PermSum::from_perm(coeff, reversal_in(k + 1, n));
        acc = &factor * &acc;
    }
    acc
}

/// Marching operator `M_{N,m}`: all interleavings of the blocks `1..m` and
/// `m+1..N` that keep each block in order.
///
/// Built from `M_{N,m} = M_{N-1,m} + (m m+1 .. N) M_{N-1,m-1}` with
/// `M_{N,0} = M_{N,N} = 1`.
pub fn marching(n: usize, m: usize) -> Result<PermSum> {
    if m > n {
        return Err(Error::OutOfRange(format!("marching needs 0 <= m <= N, got m={m}, N={n}")));
    }
    Ok(marching_rec(n, m))
}

fn marching_rec(n: usize, m: usize) -> PermSum {
    if m == 0 || m == n {
        return PermSum::identity(n);
    }
    let stay = marching_rec(n - 1, m).promote(n);
    let passed = marching_rec(n - 1, m - 1).promote(n);
    let cyc = PermSum::from_perm(1, cycle(m, n, n));
    &stay + &(&cyc * &passed)
}

/// `S_{N,r} = S_{N-1,r} + R_N R_{N-1} S_{N-1,r-1}`, `S_{1,1} = 1`,
/// `S_{N,0} = S_{N,N+1} = 0`. Valid for `1 <= r <= N`.
pub fn s_perms(n: usize, r: usize) -> Result<PermSum> {
    if n == 0 || r == 0 || r > n {
        return Err(Error::OutOfRange(format!("S_{{N,r}} needs 1 <= r <= N, got N={n}, r={r}")));
    }
    Ok(s_rec(n, r))
}

fn s_rec(n: usize, r: usize) -> PermSum {
    if r == 0 || r > n {
        return PermSum::zero(n);
    }
    if n == 1 {
        return PermSum::identity(1);
    }
    let cyc = reversal_in(n, n).compose(&reversal_in(n - 1, n));
    let left = s_rec(n - 1, r).promote(n);
    let right = &PermSum::from_perm(1, cyc) * &s_rec(n - 1, r - 1).promote(n);
    &left + &right
}

/// `Σ_r (-1)^{r-1} S_{N,r}`, which reproduces `P_N`.
pub fn alternating_s_sum(n: usize) -> PermSum {
    let mut acc = PermSum::zero(n);
    for r in 1..=n {
        let sign = if r % 2 == 1 { 1 } else { -1 };
        acc = &acc + &s_rec(n, r).scale(sign);
    }
    acc
}
