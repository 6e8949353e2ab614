//! Exact rational Taylor coefficients of the hyperbolic generating functions.
//!
//! Four series drive everything else in the crate:
//!
//! | label | function              | role                               |
//! |-------|-----------------------|------------------------------------|
//! | `t`   | `tanh(z)/z`           | gap weights in `h_r`               |
//! | `T`   | `z/tanh(z) = z coth z`| inverse of `t`, edge identities    |
//! | `s`   | `sinh(z)cosh(z)/z`    | constant term of the original form |
//! | `W`   | `(sinh(z)/z)^2`       | `t * s`, the two-factor constant   |
//!
//! All coefficients come from exact long division of factorial series, never
//! from a hardcoded table. The first [`DEFAULT_ORDER`] + 1 coefficients of each
//! series are computed once and shared.

use std::fmt;
use std::sync::OnceLock;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::Serialize;

use crate::error::{Error, Result};

/// Number of coefficients (minus one) held in the shared tables.
pub const DEFAULT_ORDER: usize = 64;

/// Which generating function a series belongs to.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Generating {
    /// `tanh(z)/z`
    TanhOverZ,
    /// `z/tanh(z)`
    ZCoth,
    /// `sinh(z)cosh(z)/z`
    SinhCoshOverZ,
    /// `(sinh(z)/z)^2`
    SinhOverZSquared,
}

impl Generating {
    pub const ALL: [Generating; 4] = [
        Generating::TanhOverZ,
        Generating::ZCoth,
        Generating::SinhCoshOverZ,
        Generating::SinhOverZSquared,
    ];

    pub fn label(self) -> &'static str {
        match self {
            Generating::TanhOverZ => "t",
            Generating::ZCoth => "T",
            Generating::SinhCoshOverZ => "s",
            Generating::SinhOverZSquared => "W",
        }
    }

    pub fn from_label(label: &str) -> Result<Self> {
        Self::ALL
            .into_iter()
            .find(|g| g.label() == label)
            .ok_or_else(|| Error::InvalidInput(format!("unknown series `{label}` (expected t, T, s or W)")))
    }
}

impl fmt::Display for Generating {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.label())
    }
}

/// Truncated power series with exact rational coefficients `c_0 .. c_order`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RationalSeries {
    name: String,
    coeffs: Vec<BigRational>,
}

impl RationalSeries {
    pub fn new(name: impl Into<String>, coeffs: Vec<BigRational>) -> Self {
        assert!(!coeffs.is_empty(), "a series holds at least the constant term");
        RationalSeries { name: name.into(), coeffs }
    }

    /// `1 + 0 z + 0 z^2 + ...`, the convolution identity.
    pub fn unit(order: usize) -> Self {
        let mut coeffs = vec![BigRational::zero(); order + 1];
        coeffs[0] = BigRational::one();
        RationalSeries::new("1", coeffs)
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn order(&self) -> usize {
        self.coeffs.len() - 1
    }

    pub fn coeff(&self, k: usize) -> &BigRational {
        &self.coeffs[k]
    }

    pub fn coeffs(&self) -> &[BigRational] {
        &self.coeffs
    }

    pub fn truncate(&self, order: usize) -> RationalSeries {
        assert!(order <= self.order(), "cannot extend a series by truncation");
        RationalSeries::new(self.name.clone(), self.coeffs[..=order].to_vec())
    }

    pub fn to_f64(&self) -> Vec<f64> {
        self.coeffs.iter().map(rational_to_f64).collect()
    }

    /// Coefficients rendered as `p/q` strings (denominator always present).
    pub fn to_strings(&self) -> Vec<String> {
        self.coeffs.iter().map(format_rational).collect()
    }

    pub fn is_unit(&self) -> bool {
        self.coeffs[0].is_one() && self.coeffs[1..].iter().all(Zero::is_zero)
    }
}

/// JSON form: `{"name": "t", "order": 4, "coeffs": ["1/1", "0/1", ...]}`.
impl Serialize for RationalSeries {
    fn serialize<S: serde::Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        use serde::ser::SerializeStruct;
        let mut st = serializer.serialize_struct("RationalSeries", 3)?;
        st.serialize_field("name", &self.name)?;
        st.serialize_field("order", &self.order())?;
        st.serialize_field("coeffs", &self.to_strings())?;
        st.end()
    }
}

pub fn format_rational(q: &BigRational) -> String {
    format!("{}/{}", q.numer(), q.denom())
}

pub fn rational_to_f64(q: &BigRational) -> f64 {
    q.to_f64().unwrap_or_else(|| {
        // Fallback for magnitudes outside the direct conversion path.
        let n = q.numer().to_f64().unwrap_or(f64::NAN);
        let d = q.denom().to_f64().unwrap_or(f64::NAN);
        n / d
    })
}

fn factorial(k: usize) -> BigInt {
    (1..=k).fold(BigInt::one(), |acc, i| acc * BigInt::from(i))
}

/// `sinh(z)/z = sum z^{2k} / (2k+1)!`
fn sinh_over_z_raw(order: usize) -> Vec<BigRational> {
    (0..=order)
        .map(|k| {
            if k % 2 == 0 {
                BigRational::new(BigInt::one(), factorial(k + 1))
            } else {
                BigRational::zero()
            }
        })
        .collect()
}

/// `cosh(z) = sum z^{2k} / (2k)!`
fn cosh_raw(order: usize) -> Vec<BigRational> {
    (0..=order)
        .map(|k| {
            if k % 2 == 0 {
                BigRational::new(BigInt::one(), factorial(k))
            } else {
                BigRational::zero()
            }
        })
        .collect()
}

fn convolve_raw(a: &[BigRational], b: &[BigRational], order: usize) -> Vec<BigRational> {
    (0..=order)
        .map(|n| {
            (0..=n).fold(BigRational::zero(), |acc, p| acc + &a[p] * &b[n - p])
        })
        .collect()
}

/// Long division `num / den` truncated at `order`. Requires `den[0] != 0`.
fn divide_raw(num: &[BigRational], den: &[BigRational], order: usize) -> Vec<BigRational> {
    let lead = &den[0];
    let mut out: Vec<BigRational> = Vec::with_capacity(order + 1);
    for k in 0..=order {
        let mut acc = num[k].clone();
        for j in 0..k {
            acc -= &out[j] * &den[k - j];
        }
        out.push(acc / lead);
    }
    out
}

/// Cauchy product truncated at the smaller of the two orders.
pub fn convolve(a: &RationalSeries, b: &RationalSeries) -> RationalSeries {
    let order = a.order().min(b.order());
    RationalSeries::new(
        format!("{}*{}", a.name, b.name),
        convolve_raw(&a.coeffs, &b.coeffs, order),
    )
}

/// Multiplicative inverse of a series with nonzero constant term.
pub fn reciprocal(a: &RationalSeries) -> Result<RationalSeries> {
    if a.coeffs[0].is_zero() {
        return Err(Error::InvalidInput(format!(
            "series `{}` has zero constant term and no reciprocal",
            a.name
        )));
    }
    let order = a.order();
    let one = RationalSeries::unit(order);
    Ok(RationalSeries::new(
        format!("1/{}", a.name),
        divide_raw(&one.coeffs, &a.coeffs, order),
    ))
}

fn compute(kind: Generating, order: usize) -> RationalSeries {
    let coeffs = match kind {
        Generating::TanhOverZ => divide_raw(&sinh_over_z_raw(order), &cosh_raw(order), order),
        Generating::ZCoth => divide_raw(&cosh_raw(order), &sinh_over_z_raw(order), order),
        Generating::SinhCoshOverZ => convolve_raw(&sinh_over_z_raw(order), &cosh_raw(order), order),
        Generating::SinhOverZSquared => {
            let t = divide_raw(&sinh_over_z_raw(order), &cosh_raw(order), order);
            let s = convolve_raw(&sinh_over_z_raw(order), &cosh_raw(order), order);
            convolve_raw(&t, &s, order)
        }
    };
    RationalSeries::new(kind.label(), coeffs)
}

struct Table {
    exact: RationalSeries,
    float: Vec<f64>,
}

fn tables() -> &'static [Table; 4] {
    static TABLES: OnceLock<[Table; 4]> = OnceLock::new();
    TABLES.get_or_init(|| {
        Generating::ALL.map(|kind| {
            let exact = compute(kind, DEFAULT_ORDER);
            let float = exact.to_f64();
            Table { exact, float }
        })
    })
}

fn table(kind: Generating) -> &'static Table {
    let idx = Generating::ALL.iter().position(|g| *g == kind).unwrap();
    &tables()[idx]
}

/// Coefficients `0..=order` of `kind`. Orders within the shared table are
/// sliced from it; larger orders are computed fresh.
pub fn series(kind: Generating, order: usize) -> RationalSeries {
    if order <= DEFAULT_ORDER {
        table(kind).exact.truncate(order)
    } else {
        compute(kind, order)
    }
}

/// Binary64 view of the shared table, indices `0..=DEFAULT_ORDER`.
pub fn float_coeffs(kind: Generating) -> &'static [f64] {
    &table(kind).float
}

/// Taylor coefficients of `tanh(z)/z`.
pub fn tanh_over_z(order: usize) -> RationalSeries {
    series(Generating::TanhOverZ, order)
}

/// Taylor coefficients of `z/tanh(z)`.
pub fn z_coth(order: usize) -> RationalSeries {
    series(Generating::ZCoth, order)
}

/// Taylor coefficients of `sinh(z)cosh(z)/z`.
pub fn sinh_cosh_over_z(order: usize) -> RationalSeries {
    series(Generating::SinhCoshOverZ, order)
}

/// Taylor coefficients of `(sinh(z)/z)^2`.
pub fn sinh_over_z_squared(order: usize) -> RationalSeries {
    series(Generating::SinhOverZSquared, order)
}

/// True when every odd-index coefficient vanishes.
pub fn is_even(series: &RationalSeries) -> bool {
    series.coeffs.iter().skip(1).step_by(2).all(Zero::is_zero)
}

/// Largest absolute coefficient, handy for growth checks.
pub fn max_abs(series: &RationalSeries) -> BigRational {
    series
        .coeffs
        .iter()
        .map(|c| c.abs())
        .max()
        .unwrap_or_else(BigRational::zero)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q(n: i64, d: i64) -> BigRational {
        BigRational::new(BigInt::from(n), BigInt::from(d))
    }

    #[test]
    fn printed_t_values() {
        let t = tanh_over_z(10);
        assert_eq!(t.coeff(1), &q(0, 1));
        assert_eq!(t.coeff(2), &q(-1, 3));
        assert_eq!(t.coeff(4), &q(2, 15));
        assert_eq!(t.coeff(6), &q(-17, 315));
        assert_eq!(t.coeff(8), &q(62, 2835));
        assert_eq!(t.coeff(10), &q(-1382, 155925));
    }

    #[test]
    fn printed_big_t_values() {
        let t = z_coth(10);
        assert_eq!(t.coeff(0), &q(1, 1));
        assert_eq!(t.coeff(2), &q(1, 3));
        assert_eq!(t.coeff(4), &q(-1, 45));
        assert_eq!(t.coeff(6), &q(2, 945));
        assert_eq!(t.coeff(8), &q(-1, 4725));
        assert_eq!(t.coeff(10), &q(2, 93555));
    }

    #[test]
    fn printed_s_values() {
        let s = sinh_cosh_over_z(8);
        assert_eq!(s.coeff(0), &q(1, 1));
        assert_eq!(s.coeff(2), &q(2, 3));
        assert_eq!(s.coeff(4), &q(2, 15));
        assert_eq!(s.coeff(6), &q(4, 315));
        assert_eq!(s.coeff(8), &q(2, 2835));
    }

    #[test]
    fn lengths_and_parity() {
        for kind in Generating::ALL {
            let s = series(kind, 17);
            assert_eq!(s.coeffs().len(), 18);
            assert!(is_even(&s), "{kind} has odd terms");
        }
    }

    #[test]
    fn beyond_the_shared_table() {
        let long = tanh_over_z(DEFAULT_ORDER + 6);
        let short = tanh_over_z(DEFAULT_ORDER);
        assert_eq!(&long.coeffs()[..=DEFAULT_ORDER], short.coeffs());
        assert!(is_even(&long));
    }

    #[test]
    fn unit_is_neutral() {
        let t = tanh_over_z(12);
        let c = convolve(&t, &RationalSeries::unit(12));
        assert_eq!(c.coeffs(), t.coeffs());
    }

    #[test]
    fn reciprocal_of_zero_constant_fails() {
        let z = RationalSeries::new("z", vec![q(0, 1), q(1, 1)]);
        assert!(reciprocal(&z).is_err());
    }

    #[test]
    fn reciprocal_matches_big_t() {
        assert_eq!(reciprocal(&tanh_over_z(20)).unwrap().coeffs(), z_coth(20).coeffs());
    }

    #[test]
    fn formatting() {
        let t = tanh_over_z(2);
        assert_eq!(t.to_strings(), vec!["1/1", "0/1", "-1/3"]);
        assert!(Generating::from_label("x").is_err());
        assert_eq!(Generating::from_label("W").unwrap(), Generating::SinhOverZSquared);
    }
}
