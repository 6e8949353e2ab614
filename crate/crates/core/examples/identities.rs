//! Residuals of the algebraic identities on seeded random tuples.

use bch_resum::gseries::{denominator_residual, identity_52_residual, jk_residual, marching_sum, x_reversal_residual};
use bch_resum::hyper::ArgTuple;
use bch_resum::sample::{regular_tuple, subset_regular_tuple, trial_rng, SAMPLE_MARGIN, SUBSET_MARGIN};

fn main() {
    let seed = 7;
    println!("{:>3} {:>10} {:>10} {:>10} {:>10} {:>10}", "N", "5.2", "jk", "x rev", "denom", "marching");
    for n in 2..=6 {
        let mut rng = trial_rng(seed, "example", n, 0);
        let t = ArgTuple::new(regular_tuple(&mut rng, n, SAMPLE_MARGIN));
        let m = subset_regular_tuple(&mut rng, n, SUBSET_MARGIN);
        println!(
            "{n:>3} {:>10.2e} {:>10.2e} {:>10.2e} {:>10.2e} {:>10.2e}",
            identity_52_residual(&t).unwrap(),
            jk_residual(&t).unwrap(),
            x_reversal_residual(&t).unwrap(),
            denominator_residual(t.args()).unwrap(),
            marching_sum(&m[..1], &m[1..]).unwrap().abs()
        );
    }
}
