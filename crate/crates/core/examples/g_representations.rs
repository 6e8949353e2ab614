//! G_N through the three representations and the contour limit.

use bch_resum::gseries::{g_limit, g_original, g_overcomplete, g_perm, to_overcomplete};
use bch_resum::hyper::ArgTuple;

fn main() {
    let t = ArgTuple::new(vec![0.9, -0.35, 1.4, 0.6, -1.2]);
    for n in 1..=t.len() {
        let w = t.window(0, n);
        let p = g_perm(&w).unwrap();
        let o = g_original(&w).unwrap();
        let v = g_overcomplete(&to_overcomplete(&w, 0.25)).unwrap();
        println!("G_{n}: perm {p:+.15}  orig {o:+.15}  over {v:+.15}");
    }
    // Vanishing total: the direct formulas refuse, the limit does not.
    let args = [0.8, -0.3, -0.5];
    println!("g_perm at zero total: {}", g_perm(&ArgTuple::new(args.to_vec())).unwrap_err());
    let lim = g_limit(&args).unwrap();
    println!("g_limit at zero total: {:+.15} (limit used: {})", lim.value, lim.limit);
}
