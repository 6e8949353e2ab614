//! The hyperbolic kernels h, f, u and brackets on one tuple.

use bch_resum::hyper::{bracket, edge_residual, f_eval, h_eval, u_eval, ArgTuple};

fn main() {
    let t = ArgTuple::new(vec![0.7, -0.3, 1.1, 0.4]);
    println!("args   {:?}", t.args());
    println!("prefix {:?}", t.prefix());
    for r in 1..=t.len() {
        let w = t.window(0, r);
        println!(
            "r={r}  h={:+.12}  f={:+.12}  u={:+.12}  [..]={:+.12}",
            h_eval(w.prefix()).unwrap(),
            f_eval(&w).unwrap(),
            u_eval(&t, r).unwrap(),
            bracket(&w).unwrap()
        );
    }
    println!("edge identity residual: {:e}", edge_residual(&t).unwrap());

    let singular = ArgTuple::new(vec![0.5, -0.5]);
    println!("singular tuple: {}", f_eval(&singular).unwrap_err());
}
