//! Third-order eigenvalue corrections against exact eigenvalues of C.

use bch_resum::matrix::DenseMatrix;
use bch_resum::perturbation::epsilon_sweep;
use bch_resum::sample::trial_rng;

fn main() {
    let mut rng = trial_rng(3, "example-perturb", 4, 0);
    let a = DenseMatrix::random_symmetric(&mut rng, 4, 2.0).unwrap();
    let b = DenseMatrix::random_symmetric(&mut rng, 4, 1.0).unwrap();
    for n in 0..4 {
        let r = epsilon_sweep(&a, &b, n, &[0.1, 0.05, 0.025]).unwrap();
        let c = r.corrections;
        println!("state {n}: c0 {:+.6} c1 {:+.6} c2 {:+.6} c3 {:+.6}", c[0], c[1], c[2], c[3]);
        for p in &r.epsilon_sweep {
            println!("  eps {:<6} exact {:+.12} partial {:+.12} residual {:.3e}", p.eps, p.exact, p.partial_sum, p.residual);
        }
        println!("  slope {:.3}", r.slope().unwrap());
    }
}
