//! Exact Taylor coefficients of the four generating functions.

use bch_resum::series::{float_coeffs, series, Generating};

fn main() {
    for kind in Generating::ALL {
        let s = series(kind, 10);
        let even: Vec<String> = s.to_strings().into_iter().step_by(2).collect();
        println!("{:<2} {}", kind.label(), even.join("  "));
    }
    let t = float_coeffs(Generating::TanhOverZ);
    println!("t_64 as f64: {:e}", t[64]);
}
