//! Small dense real matrices: symmetric eigensolver, `expm`, `logm` on SPD
//! input, the oracle `C = ½ log(e^A e^{2B} e^A)` and the truncated series for
//! `C` built from matrix elements of `G_k`.

use std::fmt;
use std::ops::{Index, IndexMut};

use rand::Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::gseries::g_limit;

pub const MAX_DIM: usize = 16;
/// Smallest accepted gap between distinct eigenvalues of `A`.
pub const DELTA_GAP: f64 = 1e-4;
/// Eigenvalues at or below this make `logm_spd` fail.
pub const SPD_FLOOR: f64 = 1e-13;
/// Highest order accepted by [`series_c`].
pub const MAX_SERIES_ORDER: usize = 5;

const SYMMETRY_TOL: f64 = 1e-13;
const JACOBI_TOL: f64 = 1e-14;
const JACOBI_MAX_SWEEPS: usize = 100;
const EXPM_DEGREE: usize = 16;
const EXPM_SCALED_NORM: f64 = 0.5;

/// Square matrix stored row-major; serialises as an array of rows.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "Vec<Vec<f64>>", into = "Vec<Vec<f64>>")]
pub struct DenseMatrix {
    n: usize,
    data: Vec<f64>,
}

impl DenseMatrix {
    fn check_dim(n: usize) -> Result<()> {
        if !(2..=MAX_DIM).contains(&n) {
            return Err(Error::Dimension(format!("matrix size must be in 2..={MAX_DIM}, got {n}")));
        }
        Ok(())
    }

    pub fn zeros(n: usize) -> Result<Self> {
        Self::check_dim(n)?;
        Ok(DenseMatrix { n, data: vec![0.0; n * n] })
    }

    pub fn identity(n: usize) -> Result<Self> {
        let mut m = Self::zeros(n)?;
        for i in 0..n {
            m[(i, i)] = 1.0;
        }
        Ok(m)
    }

    pub fn from_diag(d: &[f64]) -> Result<Self> {
        let mut m = Self::zeros(d.len())?;
        for (i, &v) in d.iter().enumerate() {
            m[(i, i)] = v;
        }
        Ok(m)
    }

    pub fn from_rows(rows: Vec<Vec<f64>>) -> Result<Self> {
        let n = rows.len();
        Self::check_dim(n)?;
        if let Some(bad) = rows.iter().find(|r| r.len() != n) {
            return Err(Error::Dimension(format!("row of length {} in a {n}x{n} matrix", bad.len())));
        }
        if rows.iter().flatten().any(|v| !v.is_finite()) {
            return Err(Error::InvalidInput("matrix entries must be finite".into()));
        }
        Ok(DenseMatrix { n, data: rows.into_iter().flatten().collect() })
    }

    pub fn to_rows(&self) -> Vec<Vec<f64>> {
        self.data.chunks(self.n).map(|r| r.to_vec()).collect()
    }

    pub fn dim(&self) -> usize {
        self.n
    }

    pub fn diag(&self) -> Vec<f64> {
        (0..self.n).map(|i| self[(i, i)]).collect()
    }

    pub fn transpose(&self) -> DenseMatrix {
        let mut t = self.clone();
        for i in 0..self.n {
            for j in 0..self.n {
                t[(i, j)] = self[(j, i)];
            }
        }
        t
    }

    fn same_dim(&self, other: &DenseMatrix) -> Result<()> {
        if self.n != other.n {
            return Err(Error::Dimension(format!("{}x{0} vs {}x{1}", self.n, other.n)));
        }
        Ok(())
    }

    pub fn matmul(&self, other: &DenseMatrix) -> Result<DenseMatrix> {
        self.same_dim(other)?;
        let n = self.n;
        let mut out = DenseMatrix { n, data: vec![0.0; n * n] };
        for i in 0..n {
            for k in 0..n {
                let a = self[(i, k)];
                if a == 0.0 {
                    continue;
                }
                for j in 0..n {
                    out.data[i * n + j] += a * other.data[k * n + j];
                }
            }
        }
        Ok(out)
    }

    pub fn add(&self, other: &DenseMatrix) -> Result<DenseMatrix> {
        self.same_dim(other)?;
        Ok(self.zip(other, |a, b| a + b))
    }

    pub fn sub(&self, other: &DenseMatrix) -> Result<DenseMatrix> {
        self.same_dim(other)?;
        Ok(self.zip(other, |a, b| a - b))
    }

    fn zip(&self, other: &DenseMatrix, f: impl Fn(f64, f64) -> f64) -> DenseMatrix {
        DenseMatrix { n: self.n, data: self.data.iter().zip(&other.data).map(|(&a, &b)| f(a, b)).collect() }
    }

    pub fn scale(&self, k: f64) -> DenseMatrix {
        DenseMatrix { n: self.n, data: self.data.iter().map(|v| v * k).collect() }
    }

    /// Frobenius norm.
    pub fn norm(&self) -> f64 {
        self.data.iter().map(|v| v * v).sum::<f64>().sqrt()
    }

    /// Maximum absolute column sum.
    pub fn norm_1(&self) -> f64 {
        (0..self.n).map(|j| (0..self.n).map(|i| self[(i, j)].abs()).sum::<f64>()).fold(0.0, f64::max)
    }

    pub fn max_abs_diff(&self, other: &DenseMatrix) -> f64 {
        self.data.iter().zip(&other.data).map(|(a, b)| (a - b).abs()).fold(0.0, f64::max)
    }

    /// `max |M - M^T|`.
    pub fn asymmetry(&self) -> f64 {
        let mut worst = 0.0f64;
        for i in 0..self.n {
            for j in i + 1..self.n {
                worst = worst.max((self[(i, j)] - self[(j, i)]).abs());
            }
        }
        worst
    }

    pub fn is_symmetric(&self) -> bool {
        self.asymmetry() <= SYMMETRY_TOL * self.norm().max(f64::MIN_POSITIVE)
    }

    pub fn require_symmetric(&self) -> Result<()> {
        if !self.is_symmetric() {
            return Err(Error::NotSymmetric(self.asymmetry()));
        }
        Ok(())
    }

    /// `(M + M^T)/2`.
    pub fn symmetrized(&self) -> DenseMatrix {
        self.zip(&self.transpose(), |a, b| 0.5 * (a + b))
    }

    /// `Q^T M Q`.
    pub fn congruence(&self, q: &DenseMatrix) -> Result<DenseMatrix> {
        q.transpose().matmul(self)?.matmul(q)
    }

    /// Random symmetric matrix with entries drawn from `[-1, 1]` and then
    /// scaled to Frobenius norm `norm`.
    pub fn random_symmetric(rng: &mut impl Rng, n: usize, norm: f64) -> Result<DenseMatrix> {
        let mut m = Self::zeros(n)?;
        for i in 0..n {
            for j in i..n {
                let v = rng.gen_range(-1.0..1.0);
                m[(i, j)] = v;
                m[(j, i)] = v;
            }
        }
        let f = m.norm();
        Ok(m.scale(norm / f))
    }
}

impl Index<(usize, usize)> for DenseMatrix {
    type Output = f64;
    fn index(&self, (i, j): (usize, usize)) -> &f64 {
        &self.data[i * self.n + j]
    }
}

impl IndexMut<(usize, usize)> for DenseMatrix {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut f64 {
        &mut self.data[i * self.n + j]
    }
}

impl TryFrom<Vec<Vec<f64>>> for DenseMatrix {
    type Error = Error;
    fn try_from(rows: Vec<Vec<f64>>) -> Result<Self> {
        DenseMatrix::from_rows(rows)
    }
}

impl From<DenseMatrix> for Vec<Vec<f64>> {
    fn from(m: DenseMatrix) -> Self {
        m.to_rows()
    }
}

impl fmt::Display for DenseMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for row in self.data.chunks(self.n) {
            let cells: Vec<String> = row.iter().map(|v| format!("{v:>12.6e}")).collect();
            writeln!(f, "{}", cells.join(" "))?;
        }
        Ok(())
    }
}

/// Eigen-decomposition `M = Q Λ Q^T`, eigenvalues ascending.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SpectralData {
    pub eigenvalues: Vec<f64>,
    /// Column `k` is the eigenvector of `eigenvalues[k]`.
    pub eigenvectors: DenseMatrix,
}

impl SpectralData {
    /// `Q f(Λ) Q^T`.
    pub fn apply(&self, f: impl Fn(f64) -> f64) -> DenseMatrix {
        let q = &self.eigenvectors;
        let n = q.dim();
        let fl: Vec<f64> = self.eigenvalues.iter().map(|&l| f(l)).collect();
        let mut out = DenseMatrix { n, data: vec![0.0; n * n] };
        for i in 0..n {
            for j in 0..n {
                out[(i, j)] = (0..n).map(|k| q[(i, k)] * fl[k] * q[(j, k)]).sum();
            }
        }
        out
    }

    /// Smallest gap between neighbouring eigenvalues.
    pub fn min_gap(&self) -> f64 {
        self.eigenvalues.windows(2).map(|w| w[1] - w[0]).fold(f64::INFINITY, f64::min)
    }

    pub fn require_nondegenerate(&self, threshold: f64) -> Result<()> {
        let gap = self.min_gap();
        if gap < threshold {
            return Err(Error::DegenerateSpectrum { gap, threshold });
        }
        Ok(())
    }
}

fn off_diagonal(m: &DenseMatrix) -> f64 {
    let n = m.dim();
    let mut s = 0.0;
    for i in 0..n {
        for j in 0..n {
            if i != j {
                s += m[(i, j)] * m[(i, j)];
            }
        }
    }
    s.sqrt()
}

/// Cyclic Jacobi eigensolver for symmetric input.
pub fn sym_eig(m: &DenseMatrix) -> Result<SpectralData> {
    m.require_symmetric()?;
    let n = m.dim();
    let mut a = m.symmetrized();
    let mut v = DenseMatrix::identity(n)?;
    let target = JACOBI_TOL * m.norm();
    for _ in 0..JACOBI_MAX_SWEEPS {
        if off_diagonal(&a) <= target {
            break;
        }
        for p in 0..n {
            for q in p + 1..n {
                let apq = a[(p, q)];
                if apq == 0.0 {
                    continue;
                }
                let theta = (a[(q, q)] - a[(p, p)]) / (2.0 * apq);
                let t = theta.signum() / (theta.abs() + (theta * theta + 1.0).sqrt());
                let t = if theta == 0.0 { 1.0 } else { t };
                let c = 1.0 / (t * t + 1.0).sqrt();
                let s = t * c;
                for k in 0..n {
                    let akp = a[(k, p)];
                    let akq = a[(k, q)];
                    a[(k, p)] = c * akp - s * akq;
                    a[(k, q)] = s * akp + c * akq;
                }
                for k in 0..n {
                    let apk = a[(p, k)];
                    let aqk = a[(q, k)];
                    a[(p, k)] = c * apk - s * aqk;
                    a[(q, k)] = s * apk + c * aqk;
                }
                for k in 0..n {
                    let vkp = v[(k, p)];
                    let vkq = v[(k, q)];
                    v[(k, p)] = c * vkp - s * vkq;
                    v[(k, q)] = s * vkp + c * vkq;
                }
            }
        }
    }
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&i, &j| a[(i, i)].total_cmp(&a[(j, j)]));
    let eigenvalues = order.iter().map(|&i| a[(i, i)]).collect();
    let mut q = DenseMatrix::zeros(n)?;
    for (col, &src) in order.iter().enumerate() {
        for k in 0..n {
            q[(k, col)] = v[(k, src)];
        }
    }
    Ok(SpectralData { eigenvalues, eigenvectors: q })
}

/// Matrix exponential by scaling and squaring with a degree-16 Taylor
/// polynomial.
pub fn expm(m: &DenseMatrix) -> DenseMatrix {
    let n = m.dim();
    let norm = m.norm_1();
    let squarings = if norm > EXPM_SCALED_NORM { (norm / EXPM_SCALED_NORM).log2().ceil() as u32 } else { 0 };
    let x = m.scale(0.5f64.powi(squarings as i32));
    let id = DenseMatrix::identity(n).expect("dimension already validated");
    let mut acc = id.clone();
    for k in (1..=EXPM_DEGREE).rev() {
        acc = id.add(&x.matmul(&acc).unwrap().scale(1.0 / k as f64)).unwrap();
    }
    for _ in 0..squarings {
        acc = acc.matmul(&acc).unwrap();
    }
    acc
}

/// Principal logarithm of a symmetric positive definite matrix.
pub fn logm_spd(m: &DenseMatrix) -> Result<DenseMatrix> {
    let spec = sym_eig(m)?;
    let low = spec.eigenvalues[0];
    if low <= SPD_FLOOR {
        return Err(Error::NonSpd(low));
    }
    Ok(spec.apply(f64::ln))
}

/// `C = ½ log(e^A e^{2B} e^A)` for symmetric `A, B`.
pub fn bch_oracle(a: &DenseMatrix, b: &DenseMatrix) -> Result<DenseMatrix> {
    a.require_symmetric()?;
    b.require_symmetric()?;
    a.same_dim(b)?;
    let ea = expm(a);
    let prod = ea.matmul(&expm(&b.scale(2.0)))?.matmul(&ea)?;
    Ok(logm_spd(&prod.symmetrized())?.scale(0.5))
}

/// Truncated series for `C` and bookkeeping about how it was evaluated.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SeriesC {
    pub order: usize,
    pub c: DenseMatrix,
    /// Chain terms whose `G_k` needed the contour limit.
    pub limit_evaluations: usize,
}

fn chain_sum(a: &[f64], b: &DenseMatrix, k: usize, start: usize, end: usize) -> Result<(f64, usize)> {
    let n = a.len();
    let mut acc = 0.0;
    let mut limits = 0;
    let mut chain = vec![0usize; k + 1];
    chain[0] = start;
    chain[k] = end;
    let inner = n.pow((k - 1) as u32);
    for code in 0..inner {
        let mut c = code;
        for slot in chain.iter_mut().take(k).skip(1) {
            *slot = c % n;
            c /= n;
        }
        let mut weight = 1.0;
        for w in chain.windows(2) {
            weight *= b[(w[0], w[1])];
        }
        if weight == 0.0 {
            continue;
        }
        let args: Vec<f64> = chain.windows(2).map(|w| a[w[0]] - a[w[1]]).collect();
        let g = g_limit(&args)?;
        if g.limit {
            limits += 1;
        }
        acc += g.value * weight;
    }
    Ok((acc, limits))
}

/// `C ≈ A + Σ_{k=1}^{order} G_k B^k`, assembled element-wise in the
/// eigenbasis of `A`:
///
/// `<n|G_k B..B|n'> = Σ G_k(a_n - a_{n_1}, .., a_{n_{k-1}} - a_{n'}) B_{n n_1} .. B_{n_{k-1} n'}`
///
/// with the intermediate indices running over the full basis. Elements whose
/// arguments have vanishing partial sums are evaluated through
/// [`crate::gseries::g_limit`].
pub fn series_c(a: &DenseMatrix, b: &DenseMatrix, order: usize) -> Result<SeriesC> {
    if order > MAX_SERIES_ORDER {
        return Err(Error::OutOfRange(format!("series order is capped at {MAX_SERIES_ORDER}, got {order}")));
    }
    a.require_symmetric()?;
    b.require_symmetric()?;
    a.same_dim(b)?;
    let spec = sym_eig(a)?;
    spec.require_nondegenerate(DELTA_GAP)?;
    let q = &spec.eigenvectors;
    let bt = b.congruence(q)?;
    let ev = &spec.eigenvalues;
    let n = a.dim();
    let cells: Vec<(usize, usize)> = (0..n).flat_map(|i| (0..n).map(move |j| (i, j))).collect();
    let values: Vec<(f64, usize)> = cells
        .par_iter()
        .map(|&(i, j)| -> Result<(f64, usize)> {
            let mut v = if i == j { ev[i] } else { 0.0 };
            let mut limits = 0;
            for k in 1..=order {
                let (s, l) = chain_sum(ev, &bt, k, i, j)?;
                v += s;
                limits += l;
            }
            Ok((v, limits))
        })
        .collect::<Result<_>>()?;
    let mut ct = DenseMatrix::zeros(n)?;
    let mut limit_evaluations = 0;
    for (&(i, j), &(v, l)) in cells.iter().zip(&values) {
        ct[(i, j)] = v;
        limit_evaluations += l;
    }
    let c = q.matmul(&ct)?.matmul(&q.transpose())?;
    Ok(SeriesC { order, c: c.symmetrized(), limit_evaluations })
}

/// Least-squares slope of `log y` against `log x`.
pub fn log_log_slope(xs: &[f64], ys: &[f64]) -> f64 {
    let lx: Vec<f64> = xs.iter().map(|x| x.ln()).collect();
    let ly: Vec<f64> = ys.iter().map(|y| y.ln()).collect();
    let n = lx.len() as f64;
    let mx = lx.iter().sum::<f64>() / n;
    let my = ly.iter().sum::<f64>() / n;
    let num: f64 = lx.iter().zip(&ly).map(|(x, y)| (x - mx) * (y - my)).sum();
    let den: f64 = lx.iter().map(|x| (x - mx) * (x - mx)).sum();
    num / den
}

/// One row of a convergence table.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ConvergenceRow {
    pub eps: f64,
    pub order: usize,
    pub error: f64,
    /// Local slope against the previous `eps` at the same order.
    pub slope: Option<f64>,
}

/// `‖series_c(A, εB, N) - bch_oracle(A, εB)‖_F` over the given scalings.
pub fn convergence_table(a: &DenseMatrix, b: &DenseMatrix, orders: &[usize], epsilons: &[f64]) -> Result<Vec<ConvergenceRow>> {
    let mut rows = Vec::new();
    let oracles: Vec<DenseMatrix> = epsilons.iter().map(|&e| bch_oracle(a, &b.scale(e))).collect::<Result<_>>()?;
    for &order in orders {
        let mut prev: Option<(f64, f64)> = None;
        for (&eps, oracle) in epsilons.iter().zip(&oracles) {
            let approx = series_c(a, &b.scale(eps), order)?;
            let error = approx.c.sub(oracle)?.norm();
            let slope = prev.map(|(pe, perr)| (error / perr).ln() / (eps / pe).ln());
            rows.push(ConvergenceRow { eps, order, error, slope });
            prev = Some((eps, error));
        }
    }
    Ok(rows)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::sample::trial_rng;
    use approx::assert_relative_eq;

    #[test]
    fn dimension_guard() {
        assert!(DenseMatrix::zeros(1).is_err());
        assert!(DenseMatrix::zeros(17).is_err());
        assert!(DenseMatrix::from_rows(vec![vec![1.0, 2.0], vec![3.0]]).is_err());
    }

    #[test]
    fn json_rows_roundtrip() {
        let m = DenseMatrix::from_rows(vec![vec![1.0, 2.0], vec![2.0, -1.0]]).unwrap();
        let s = serde_json::to_string(&m).unwrap();
        assert_eq!(s, "[[1.0,2.0],[2.0,-1.0]]");
        let back: DenseMatrix = serde_json::from_str(&s).unwrap();
        assert_eq!(back, m);
        assert!(serde_json::from_str::<DenseMatrix>("[[1.0]]").is_err());
    }

    #[test]
    fn eig_of_swap() {
        let m = DenseMatrix::from_rows(vec![vec![0.0, 1.0], vec![1.0, 0.0]]).unwrap();
        let s = sym_eig(&m).unwrap();
        assert_relative_eq!(s.eigenvalues[0], -1.0, epsilon = 1e-15);
        assert_relative_eq!(s.eigenvalues[1], 1.0, epsilon = 1e-15);
    }

    #[test]
    fn eig_of_diagonal() {
        let m = DenseMatrix::from_diag(&[3.0, -1.0, 2.0]).unwrap();
        let s = sym_eig(&m).unwrap();
        assert_eq!(s.eigenvalues, vec![-1.0, 2.0, 3.0]);
        for k in 0..3 {
            let col: Vec<f64> = (0..3).map(|i| s.eigenvectors[(i, k)].abs()).collect();
            assert_eq!(col.iter().filter(|&&v| v == 1.0).count(), 1);
        }
    }

    #[test]
    fn eig_rejects_asymmetric() {
        let m = DenseMatrix::from_rows(vec![vec![0.0, 1.0], vec![0.5, 0.0]]).unwrap();
        assert!(matches!(sym_eig(&m), Err(Error::NotSymmetric(_))));
    }

    #[test]
    fn eig_reconstructs() {
        let m = DenseMatrix::random_symmetric(&mut trial_rng(3, "eig", 6, 0), 6, 3.0).unwrap();
        let s = sym_eig(&m).unwrap();
        let q = &s.eigenvectors;
        let qtq = q.transpose().matmul(q).unwrap();
        assert!(qtq.max_abs_diff(&DenseMatrix::identity(6).unwrap()) < 1e-12);
        assert!(s.apply(|l| l).sub(&m).unwrap().norm() < 1e-11 * m.norm());
        assert!(s.eigenvalues.windows(2).all(|w| w[0] <= w[1]));
    }

    #[test]
    fn expm_basics() {
        let z = DenseMatrix::zeros(3).unwrap();
        assert_eq!(expm(&z), DenseMatrix::identity(3).unwrap());
        let d = DenseMatrix::from_diag(&[0.5, -2.0, 4.0]).unwrap();
        let e = expm(&d);
        for (i, v) in [0.5f64, -2.0, 4.0].iter().enumerate() {
            assert_relative_eq!(e[(i, i)], v.exp(), max_relative = 1e-14);
        }
        let m = DenseMatrix::random_symmetric(&mut trial_rng(4, "expm", 4, 0), 4, 2.0).unwrap();
        let prod = expm(&m).matmul(&expm(&m.scale(-1.0))).unwrap();
        assert!(prod.max_abs_diff(&DenseMatrix::identity(4).unwrap()) < 1e-12);
    }

    #[test]
    fn logm_basics() {
        let id = DenseMatrix::identity(3).unwrap();
        assert!(logm_spd(&id).unwrap().norm() < 1e-15);
        let c = logm_spd(&id.scale(2.5)).unwrap();
        assert!(c.max_abs_diff(&id.scale(2.5f64.ln())) < 1e-14);
        let s = DenseMatrix::random_symmetric(&mut trial_rng(5, "logm", 4, 0), 4, 1.0).unwrap();
        assert!(logm_spd(&expm(&s)).unwrap().max_abs_diff(&s) < 1e-11);
        let bad = DenseMatrix::from_diag(&[1.0, -1.0]).unwrap();
        assert!(matches!(logm_spd(&bad), Err(Error::NonSpd(_))));
    }

    #[test]
    fn oracle_limits() {
        let a = DenseMatrix::random_symmetric(&mut trial_rng(6, "o", 3, 0), 3, 1.0).unwrap();
        let z = DenseMatrix::zeros(3).unwrap();
        assert!(bch_oracle(&a, &z).unwrap().max_abs_diff(&a) < 1e-13);
        let da = DenseMatrix::from_diag(&[0.3, -0.2, 0.9]).unwrap();
        let db = DenseMatrix::from_diag(&[-0.5, 0.1, 0.4]).unwrap();
        assert!(bch_oracle(&da, &db).unwrap().max_abs_diff(&da.add(&db).unwrap()) < 1e-13);
    }

    #[test]
    fn series_with_zero_b_is_a() {
        let a = DenseMatrix::random_symmetric(&mut trial_rng(7, "s", 3, 0), 3, 1.0).unwrap();
        let z = DenseMatrix::zeros(3).unwrap();
        for order in 0..=3 {
            assert!(series_c(&a, &z, order).unwrap().c.max_abs_diff(&a) < 1e-13);
        }
    }

    #[test]
    fn series_first_order_diagonal() {
        let a = DenseMatrix::from_diag(&[0.9, -0.4]).unwrap();
        let b = DenseMatrix::from_rows(vec![vec![0.03, 0.02], vec![0.02, -0.01]]).unwrap();
        let s = series_c(&a, &b, 1).unwrap();
        assert_relative_eq!(s.c[(0, 0)], 0.93, epsilon = 1e-15);
        let g = 1.3 / f64::sinh(1.3);
        assert_relative_eq!(s.c[(0, 1)], 0.02 * g, max_relative = 1e-14);
    }

    #[test]
    fn series_tracks_oracle_for_two_by_two() {
        let a = DenseMatrix::from_diag(&[0.9, -0.4]).unwrap();
        let b = DenseMatrix::from_rows(vec![vec![0.03, 0.035], vec![0.035, -0.02]]).unwrap();
        let exact = bch_oracle(&a, &b).unwrap();
        let approx = series_c(&a, &b, 4).unwrap();
        assert!(approx.c.sub(&exact).unwrap().norm() < 1e-7);
        assert!(approx.limit_evaluations > 0);
    }

    #[test]
    fn series_rejects_degenerate_a() {
        let a = DenseMatrix::from_diag(&[0.5, 0.5, 1.0]).unwrap();
        let b = DenseMatrix::identity(3).unwrap().scale(0.1);
        assert!(matches!(series_c(&a, &b, 2), Err(Error::DegenerateSpectrum { .. })));
        assert!(series_c(&a, &b, 6).is_err());
    }

    #[test]
    fn slope_of_power_law() {
        let xs = [0.2, 0.1, 0.05];
        let ys: Vec<f64> = xs.iter().map(|x: &f64| 3.0 * x.powi(4)).collect();
        assert_relative_eq!(log_log_slope(&xs, &ys), 4.0, epsilon = 1e-12);
    }
}
