//! Signed permutation sums: P_N, marching operators and their product.

use bch_resum::perm::{expand_p, marching, s_perms};

fn main() {
    println!("P_4:");
    for line in expand_p(4).to_lines() {
        println!("  {line}");
    }
    println!("M_(4,2):");
    for line in marching(4, 2).unwrap().to_lines() {
        println!("  {line}");
    }
    for n in 2..=6 {
        let zero = (1..n).all(|m| (&marching(n, m).unwrap() * &expand_p(n)).is_zero());
        println!("N = {n}: M_(N,m) P_N vanishes for every m: {zero}");
    }
    println!("|S_(5,r)| for r = 1..5: {:?}", (1..=5).map(|r| s_perms(5, r).unwrap().len()).collect::<Vec<_>>());
}
