mod support;

use bch_resum::matrix::*;
use bch_resum::Error;
use nalgebra::DMatrix;
use rand::Rng;
use support::rng;

fn to_na(m: &DenseMatrix) -> DMatrix<f64> {
    let n = m.dim();
    DMatrix::from_fn(n, n, |i, j| m[(i, j)])
}

fn from_na(m: &DMatrix<f64>) -> DenseMatrix {
    DenseMatrix::from_rows((0..m.nrows()).map(|i| (0..m.ncols()).map(|j| m[(i, j)]).collect()).collect()).unwrap()
}

fn max_diff(a: &DMatrix<f64>, b: &DMatrix<f64>) -> f64 {
    (a - b).abs().max()
}

fn random_sym(seed: u64, n: usize, norm: f64) -> DenseMatrix {
    let mut r = rng(seed);
    let mut m = DMatrix::from_fn(n, n, |_, _| r.gen_range(-1.0..1.0));
    m = (&m + m.transpose()) * 0.5;
    let s = norm / m.norm();
    from_na(&(m * s))
}

fn sorted(mut v: Vec<f64>) -> Vec<f64> {
    v.sort_by(|a, b| a.partial_cmp(b).unwrap());
    v
}

#[test]
fn eigen_against_nalgebra() {
    for (seed, n) in [(1, 2), (2, 4), (3, 7), (4, 16)] {
        let m = random_sym(seed, n, 3.0);
        let ours = sym_eig(&m).unwrap();
        let theirs = sorted(to_na(&m).symmetric_eigen().eigenvalues.iter().copied().collect());
        for (a, b) in ours.eigenvalues.iter().zip(&theirs) {
            assert!((a - b).abs() < 1e-12, "n={n}");
        }
        let back = ours.apply(|x| x);
        assert!(back.max_abs_diff(&m) <= 1e-11);
        let q = to_na(&ours.eigenvectors);
        assert!(max_diff(&(q.transpose() * &q), &DMatrix::identity(n, n)) <= 1e-12);
    }
}

#[test]
fn expm_against_nalgebra() {
    for (seed, n, norm) in [(5, 2, 0.1), (6, 4, 2.0), (7, 6, 8.0)] {
        let m = random_sym(seed, n, norm);
        let ours = to_na(&expm(&m));
        let theirs = to_na(&m).exp();
        assert!(max_diff(&ours, &theirs) <= 1e-12 * theirs.abs().max().max(1.0), "n={n}");
    }
    // A rotation generator checks the non-symmetric path.
    let g = DenseMatrix::from_rows(vec![vec![0.0, -1.2], vec![1.2, 0.0]]).unwrap();
    let e = expm(&g);
    assert!((e[(0, 0)] - 1.2f64.cos()).abs() < 1e-14 && (e[(1, 0)] - 1.2f64.sin()).abs() < 1e-14);
}

#[test]
fn oracle_reconstructs_product() {
    for seed in 10..14 {
        let a = random_sym(seed, 4, 2.0);
        let b = random_sym(seed + 100, 4, 1.0);
        let c = to_na(&bch_oracle(&a, &b).unwrap());
        let lhs = (c * 2.0).exp();
        let (ea, e2b) = (to_na(&a).exp(), (to_na(&b) * 2.0).exp());
        let rhs = &ea * e2b * &ea;
        assert!(max_diff(&lhs, &rhs) <= 1e-10 * rhs.abs().max());
    }
}

#[test]
fn oracle_eigenvalues_from_other_factorisation() {
    // e^A e^{2B} e^A and e^B e^{2A} e^B are both similar to e^{2A} e^{2B}.
    for seed in 20..24 {
        let a = random_sym(seed, 5, 2.0);
        let b = random_sym(seed + 100, 5, 1.0);
        let ours = sorted(to_na(&bch_oracle(&a, &b).unwrap()).symmetric_eigen().eigenvalues.iter().copied().collect());
        let eb = to_na(&b).exp();
        let other = &eb * (to_na(&a) * 2.0).exp() * &eb;
        let other = (&other + other.transpose()) * 0.5;
        let theirs = sorted(other.symmetric_eigen().eigenvalues.iter().map(|l| 0.5 * l.ln()).collect());
        for (x, y) in ours.iter().zip(&theirs) {
            assert!((x - y).abs() <= 1e-10, "{x} {y}");
        }
    }
}

#[test]
fn commuting_inputs() {
    let a = DenseMatrix::from_diag(&[0.9, -0.4]).unwrap();
    let b = DenseMatrix::from_diag(&[0.3, 0.7]).unwrap();
    let c = bch_oracle(&a, &b).unwrap();
    assert!(c.max_abs_diff(&DenseMatrix::from_diag(&[1.2, 0.3]).unwrap()) < 1e-14);
    let s = series_c(&a, &b, 3).unwrap();
    assert!(s.c.max_abs_diff(&c) < 1e-13);
}

#[test]
fn two_by_two_errors_shrink_with_order() {
    let a = DenseMatrix::from_diag(&[0.9, -0.4]).unwrap();
    let b = DenseMatrix::from_rows(vec![vec![0.2, 0.5], vec![0.5, -0.3]]).unwrap().scale(0.2);
    let oracle = bch_oracle(&a, &b).unwrap();
    let errs: Vec<f64> = (1..=5).map(|k| series_c(&a, &b, k).unwrap().c.sub(&oracle).unwrap().norm()).collect();
    assert!(errs.windows(2).all(|w| w[1] < w[0]), "{errs:?}");
    assert!(errs[4] < 1e-6, "{errs:?}");
    assert!(series_c(&a, &b, 2).unwrap().limit_evaluations > 0);
}

#[test]
fn first_order_is_the_exact_linear_term() {
    // d/dε C(A, εB) at ε = 0, by central differences of the oracle.
    let a = random_sym(30, 3, 2.0);
    let b = random_sym(31, 3, 1.0);
    let h = 1e-4;
    let up = bch_oracle(&a, &b.scale(h)).unwrap();
    let down = bch_oracle(&a, &b.scale(-h)).unwrap();
    let deriv = up.sub(&down).unwrap().scale(0.5 / h);
    let first = series_c(&a, &b, 1).unwrap().c.sub(&a).unwrap();
    assert!(first.max_abs_diff(&deriv) < 1e-7);
}

#[test]
fn convergence_slopes() {
    let a = random_sym(40, 4, 2.0);
    let b = random_sym(41, 4, 1.0);
    let rows = convergence_table(&a, &b, &[2, 3, 4], &[0.2, 0.1, 0.05]).unwrap();
    for order in [2usize, 3, 4] {
        let (eps, errs): (Vec<f64>, Vec<f64>) = rows.iter().filter(|r| r.order == order).map(|r| (r.eps, r.error)).unzip();
        let slope = log_log_slope(&eps, &errs);
        assert!(slope >= order as f64 + 0.5, "order {order}: {slope}");
    }
}

#[test]
fn guards() {
    let a = DenseMatrix::from_diag(&[1.0, 1.0 + 1e-6, 0.0]).unwrap();
    let b = DenseMatrix::identity(3).unwrap();
    assert!(matches!(series_c(&a, &b, 2), Err(Error::DegenerateSpectrum { .. })));
    let ns = DenseMatrix::from_rows(vec![vec![0.0, 1.0], vec![0.0, 0.0]]).unwrap();
    assert!(matches!(bch_oracle(&ns, &ns), Err(Error::NotSymmetric(_))));
    let b2 = DenseMatrix::identity(2).unwrap();
    assert!(matches!(bch_oracle(&b, &b2), Err(Error::Dimension(_))));
    assert!(series_c(&b2, &b2, MAX_SERIES_ORDER + 1).is_err());
    assert!(matches!(logm_spd(&DenseMatrix::from_diag(&[1.0, -1.0]).unwrap()), Err(Error::NonSpd(_))));
}

#[test]
fn json_roundtrip() {
    let m = random_sym(50, 3, 1.0);
    let s = serde_json::to_string(&m).unwrap();
    assert!(s.starts_with("[["));
    let back: DenseMatrix = serde_json::from_str(&s).unwrap();
    assert_eq!(back, m);
    assert!(serde_json::from_str::<DenseMatrix>("[[1.0]]").is_err());
    assert!(serde_json::from_str::<DenseMatrix>("[[1.0,2.0],[3.0]]").is_err());
}
