//! Eigenvalue corrections of `C` to third order in `B`, and a sweep that
//! compares the partial sums against eigenvalues of the matrix-log oracle.
//!
//! In the eigenbasis of `A` (eigenvalues `a_n`):
//!
//! ```text
//! c0 = a_n
//! c1 = B_nn
//! c2 = Σ_{m≠n} coth(a_n - a_m) B_nm B_mn
//! c3 = Σ_{m,k≠n} h_2(a_n - a_m, a_n - a_k) B_nm B_mk B_kn
//!    - Σ_{m≠n}   h_2(a_n - a_m, a_n - a_m) B_nm B_mn B_nn
//! ```
//!
//! Fourth and higher orders are not implemented.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::hyper::{coth, h_eval};
use crate::matrix::{bch_oracle, log_log_slope, sym_eig, DenseMatrix, DELTA_GAP};

/// Overlap below which an eigenvector match is rejected.
pub const MATCH_OVERLAP: f64 = 0.9;

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SweepPoint {
    pub eps: f64,
    pub exact: f64,
    pub partial_sum: f64,
    pub residual: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct PerturbationResult {
    pub n: usize,
    pub corrections: [f64; 4],
    pub epsilon_sweep: Vec<SweepPoint>,
}

impl PerturbationResult {
    /// `Σ_{k≤3} ε^k c^(k)`.
    pub fn partial_sum(&self, eps: f64) -> f64 {
        self.corrections.iter().rev().fold(0.0, |acc, c| acc * eps + c)
    }

    /// Log-log slope of residual against `ε` over the sweep, ignoring `ε = 0`.
    pub fn slope(&self) -> Option<f64> {
        let pts: Vec<&SweepPoint> = self.epsilon_sweep.iter().filter(|p| p.eps > 0.0).collect();
        if pts.len() < 2 {
            return None;
        }
        let xs: Vec<f64> = pts.iter().map(|p| p.eps).collect();
        let ys: Vec<f64> = pts.iter().map(|p| p.residual).collect();
        Some(log_log_slope(&xs, &ys))
    }
}

fn require_gaps(a: &[f64], n: usize) -> Result<()> {
    for (m, &am) in a.iter().enumerate() {
        if m != n {
            let gap = (a[n] - am).abs();
            if gap < DELTA_GAP {
                return Err(Error::DegenerateSpectrum { gap, threshold: DELTA_GAP });
            }
        }
    }
    Ok(())
}

/// Corrections `c^(0..3)` for state `n`; `b` is given in the eigenbasis of `A`.
pub fn corrections(a: &[f64], b: &DenseMatrix, n: usize) -> Result<PerturbationResult> {
    let dim = a.len();
    if b.dim() != dim {
        return Err(Error::Dimension(format!("{dim} eigenvalues but B is {0}x{0}", b.dim())));
    }
    if n >= dim {
        return Err(Error::OutOfRange(format!("state {n} in a {dim}-dimensional space")));
    }
    require_gaps(a, n)?;
    let others: Vec<usize> = (0..dim).filter(|&m| m != n).collect();
    let d = |m: usize| a[n] - a[m];
    let mut c2 = 0.0;
    for &m in &others {
        c2 += coth(d(m))? * b[(n, m)] * b[(m, n)];
    }
    let mut c3 = 0.0;
    for &m in &others {
        for &k in &others {
            c3 += h_eval(&[d(m), d(k)])? * b[(n, m)] * b[(m, k)] * b[(k, n)];
        }
        c3 -= h_eval(&[d(m), d(m)])? * b[(n, m)] * b[(m, n)] * b[(n, n)];
    }
    Ok(PerturbationResult { n, corrections: [a[n], b[(n, n)], c2, c3], epsilon_sweep: Vec::new() })
}

/// Index of the column of `v` with the largest overlap against `target`.
fn best_match(v: &DenseMatrix, target: &[f64]) -> Result<usize> {
    let dim = v.dim();
    let (mut best, mut idx) = (0.0, 0);
    for j in 0..dim {
        let o: f64 = (0..dim).map(|i| v[(i, j)] * target[i]).sum::<f64>().abs();
        if o > best {
            best = o;
            idx = j;
        }
    }
    if best < MATCH_OVERLAP {
        return Err(Error::AmbiguousMatching(best));
    }
    Ok(idx)
}

/// Corrections for state `n` of `A` (ascending order), compared against the
/// eigenvalue of `bch_oracle(A, εB)` whose eigenvector overlaps most with the
/// unperturbed one.
pub fn epsilon_sweep(a: &DenseMatrix, b: &DenseMatrix, n: usize, epsilons: &[f64]) -> Result<PerturbationResult> {
    let spec = sym_eig(a)?;
    spec.require_nondegenerate(DELTA_GAP)?;
    let q = &spec.eigenvectors;
    b.require_symmetric()?;
    let bt = b.congruence(q)?;
    let mut result = corrections(&spec.eigenvalues, &bt, n)?;
    let target: Vec<f64> = (0..a.dim()).map(|i| q[(i, n)]).collect();
    for &eps in epsilons {
        let c = bch_oracle(a, &b.scale(eps))?;
        let ce = sym_eig(&c)?;
        let j = best_match(&ce.eigenvectors, &target)?;
        let exact = ce.eigenvalues[j];
        let partial_sum = result.partial_sum(eps);
        result.epsilon_sweep.push(SweepPoint { eps, exact, partial_sum, residual: (exact - partial_sum).abs() });
    }
    Ok(result)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::sample::trial_rng;
    use approx::assert_relative_eq;

    #[test]
    fn zero_b() {
        let b = DenseMatrix::zeros(3).unwrap();
        let r = corrections(&[1.0, -0.5, 0.3], &b, 1).unwrap();
        assert_eq!(r.corrections, [-0.5, 0.0, 0.0, 0.0]);
    }

    #[test]
    fn two_level_second_order() {
        let b = 0.3;
        let bm = DenseMatrix::from_rows(vec![vec![0.0, b], vec![b, 0.0]]).unwrap();
        let r = corrections(&[1.0, -1.0], &bm, 0).unwrap();
        assert_relative_eq!(r.corrections[2], coth(2.0).unwrap() * b * b, max_relative = 1e-15);
        assert_eq!(r.corrections[1], 0.0);
    }

    #[test]
    fn first_order_is_diagonal() {
        let bm = DenseMatrix::random_symmetric(&mut trial_rng(2, "p", 3, 0), 3, 1.0).unwrap();
        for n in 0..3 {
            assert_eq!(corrections(&[0.1, 0.7, -0.9], &bm, n).unwrap().corrections[1], bm[(n, n)]);
        }
    }

    #[test]
    fn degenerate_rejected() {
        let bm = DenseMatrix::zeros(3).unwrap();
        assert!(matches!(corrections(&[0.5, 0.5, 1.0], &bm, 0), Err(Error::DegenerateSpectrum { .. })));
        assert!(corrections(&[0.5, 0.5, 1.0], &bm, 2).is_ok());
    }

    #[test]
    fn commuting_case_is_exact() {
        let a = DenseMatrix::from_diag(&[0.4, -0.3, 1.1]).unwrap();
        let b = DenseMatrix::from_diag(&[0.2, 0.5, -0.7]).unwrap();
        for n in 0..3 {
            let r = epsilon_sweep(&a, &b, n, &[0.0, 0.1, 0.5]).unwrap();
            assert!(r.epsilon_sweep.iter().all(|p| p.residual < 1e-13));
        }
    }

    #[test]
    fn fourth_order_remainder() {
        let mut rng = trial_rng(11, "p", 4, 0);
        let a = DenseMatrix::random_symmetric(&mut rng, 4, 2.0).unwrap();
        let b = DenseMatrix::random_symmetric(&mut rng, 4, 1.0).unwrap();
        let r = epsilon_sweep(&a, &b, 2, &[0.0, 0.1, 0.05, 0.025]).unwrap();
        assert!(r.epsilon_sweep[0].residual < 1e-12);
        assert!(r.slope().unwrap() >= 3.5, "slope {:?}", r.slope());
    }
}
