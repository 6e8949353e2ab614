//! Independent reference values for the integration tests. Nothing here calls
//! into the evaluation paths it is used to check.

#![allow(dead_code)]

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

pub fn q(n: i64, d: i64) -> BigRational {
    BigRational::new(BigInt::from(n), BigInt::from(d))
}

fn c(x: f64) -> f64 {
    x.cosh() / x.sinh()
}

/// Closed forms of `h_0 .. h_6`, transcribed term by term.
pub fn h_closed(x: &[f64]) -> f64 {
    let k: Vec<f64> = x.iter().map(|&v| c(v)).collect();
    match k.len() {
        0 => 1.0,
        1 => k[0],
        2 => k[0] * k[1] - 1.0 / 3.0,
        3 => k[0] * k[1] * k[2] - (k[0] + k[2]) / 3.0,
        4 => {
            k[0] * k[1] * k[2] * k[3] - (k[0] * k[3] + k[2] * k[3] + k[0] * k[1]) / 3.0 + 2.0 / 15.0
        }
        5 => {
            k[0] * k[1] * k[2] * k[3] * k[4]
                - (k[0] * k[3] * k[4] + k[2] * k[3] * k[4] + k[0] * k[1] * k[4] + k[0] * k[1] * k[2]) / 3.0
                + 2.0 / 15.0 * (k[0] + k[4])
                + k[2] / 9.0
        }
        6 => {
            k[0] * k[1] * k[2] * k[3] * k[4] * k[5]
                - (k[0] * k[3] * k[4] * k[5]
                    + k[2] * k[3] * k[4] * k[5]
                    + k[0] * k[1] * k[2] * k[3]
                    + k[0] * k[1] * k[4] * k[5]
                    + k[0] * k[1] * k[2] * k[5])
                    / 3.0
                + (k[0] * k[3] + k[2] * k[3] + k[2] * k[5]) / 9.0
                + 2.0 / 15.0 * (k[4] * k[5] + k[0] * k[5] + k[0] * k[1])
                - 17.0 / 315.0
        }
        n => panic!("no closed form for h_{n}"),
    }
}

fn factorial(n: usize) -> BigInt {
    (1..=n).fold(BigInt::one(), |a, i| a * BigInt::from(i))
}

/// `(sinh z / z)^2` by squaring the factorial series.
pub fn w_direct(order: usize) -> Vec<BigRational> {
    let s: Vec<BigRational> = (0..=order)
        .map(|k| if k % 2 == 0 { BigRational::new(BigInt::one(), factorial(k + 1)) } else { BigRational::zero() })
        .collect();
    (0..=order).map(|n| (0..=n).fold(BigRational::zero(), |a, p| a + &s[p] * &s[n - p])).collect()
}

/// `sinh z cosh z / z = sinh(2z)/(2z)`, so `s_k = 2^k/(k+1)!` at even `k`.
pub fn s_direct(order: usize) -> Vec<BigRational> {
    (0..=order)
        .map(|k| {
            if k % 2 == 0 {
                BigRational::new(BigInt::from(2).pow(k as u32), factorial(k + 1))
            } else {
                BigRational::zero()
            }
        })
        .collect()
}

/// Uniform tuple in `[-2, 2]^n` with every contiguous sum at least `margin`
/// away from zero.
pub fn regular(rng: &mut impl Rng, n: usize, margin: f64) -> Vec<f64> {
    loop {
        let v: Vec<f64> = (0..n).map(|_| rng.gen_range(-2.0..2.0)).collect();
        let mut ok = true;
        for i in 0..n {
            let mut s = 0.0;
            for x in &v[i..] {
                s += x;
                ok &= s.abs() >= margin;
            }
        }
        if ok {
            return v;
        }
    }
}

/// All order-preserving interleavings of `1..m` and `m+1..n`, one-line,
/// 0-based: entry `i` is the original index placed at position `i`.
pub fn shuffles(n: usize, m: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    for mask in 0u32..(1 << n) {
        if mask.count_ones() as usize != m {
            continue;
        }
        let (mut a, mut b) = (0, m);
        let mut line = Vec::with_capacity(n);
        for pos in 0..n {
            if mask >> pos & 1 == 1 {
                line.push(a);
                a += 1;
            } else {
                line.push(b);
                b += 1;
            }
        }
        out.push(line);
    }
    out
}

/// Rational bracket `x_1 / (x_1 (x_1+x_2) ..)` in exact arithmetic.
pub fn rational_bracket_exact(x: &[BigRational]) -> BigRational {
    let mut acc = BigRational::zero();
    let mut prod = BigRational::one();
    for v in x {
        acc += v;
        prod *= &acc;
    }
    &x[0] / prod
}

/// `D_{N,r}` in exact arithmetic.
pub fn d_part_exact(x: &[BigRational], r: usize) -> BigRational {
    let n = x.len();
    let mut total = BigRational::zero();
    for i in r..=n {
        let mut left = BigRational::one();
        let mut acc = BigRational::zero();
        for k in (0..i).rev() {
            acc += &x[k];
            left /= &acc;
        }
        let mut right = BigRational::one();
        acc = BigRational::zero();
        for v in &x[i..] {
            acc += v;
            right /= &acc;
        }
        if (i - r) % 2 == 0 {
            total += left * right;
        } else {
            total -= left * right;
        }
    }
    total
}

/// Every nonempty subset sum nonzero.
pub fn subset_sums_nonzero(x: &[BigRational]) -> bool {
    (1u32..(1 << x.len())).all(|mask| {
        let s = x.iter().enumerate().filter(|(i, _)| mask >> i & 1 == 1).fold(BigRational::zero(), |a, (_, v)| a + v);
        !s.is_zero()
    })
}

/// Printed coefficients of `z coth z` at orders 0, 2, .., 10.
pub fn coth_coeff_rows() -> [BigRational; 6] {
    [q(1, 1), q(1, 3), q(-1, 45), q(2, 945), q(-1, 4725), q(2, 93555)]
}
