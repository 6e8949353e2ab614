//! Truncated matrix series against the matrix-log oracle.

use bch_resum::matrix::{bch_oracle, convergence_table, series_c, DenseMatrix};
use bch_resum::sample::trial_rng;

fn main() {
    let mut rng = trial_rng(11, "example-bch", 4, 0);
    let a = DenseMatrix::random_symmetric(&mut rng, 4, 2.0).unwrap();
    let b = DenseMatrix::random_symmetric(&mut rng, 4, 1.0).unwrap();

    let c = bch_oracle(&a, &b.scale(0.1)).unwrap();
    let s = series_c(&a, &b.scale(0.1), 3).unwrap();
    println!("oracle C at eps = 0.1:\n{c}");
    println!("order-3 series ({} limit evaluations), error {:e}\n", s.limit_evaluations, s.c.sub(&c).unwrap().norm());

    println!("{:>6} {:>5} {:>12} {:>7}", "eps", "N", "error", "slope");
    for r in convergence_table(&a, &b, &[1, 2, 3, 4], &[0.2, 0.1, 0.05]).unwrap() {
        let slope = r.slope.map(|s| format!("{s:.3}")).unwrap_or_default();
        println!("{:>6} {:>5} {:>12.4e} {:>7}", r.eps, r.order, r.error, slope);
    }
}
