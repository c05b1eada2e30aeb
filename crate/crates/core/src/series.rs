//! Truncated power series in the expansion parameter xi with exact rational
//! coefficients.
//!
//! The series may carry a single negative power (`min_power = -1`) so that the
//! plasma-frequency prefactor `4 E_C / xi` lives in the same object as the
//! polynomial part. Coefficients stay exact through every operation; floating
//! conversion happens only at evaluation.

use num_bigint::BigInt;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::de::Error as _;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};

/// Arbitrary-precision rational, always reduced, denominator positive.
pub type Rational = num_rational::BigRational;

/// Shorthand constructor for small rationals.
pub fn ratio(num: i64, den: i64) -> Rational {
    Rational::new(BigInt::from(num), BigInt::from(den))
}

/// Parse a rational from decimal numerator/denominator strings.
pub fn ratio_from_strs(num: &str, den: &str) -> Result<Rational> {
    let n: BigInt = num
        .parse()
        .map_err(|_| Error::SeriesFormat(format!("bad numerator {num:?}")))?;
    let d: BigInt = den
        .parse()
        .map_err(|_| Error::SeriesFormat(format!("bad denominator {den:?}")))?;
    if d.is_zero() {
        return Err(Error::SeriesFormat("zero denominator".into()));
    }
    Ok(Rational::new(n, d))
}

/// Power series `sum_k c_k xi^k` for `k = min_power ..= truncation_order`.
///
/// Arithmetic never extends past the truncation order of the inputs: the sum
/// keeps the smaller truncation, the product truncates the Cauchy product at
/// the smaller truncation order.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RationalSeries {
    min_power: i64,
    coeffs: Vec<Rational>,
}

impl RationalSeries {
    /// Build a series from the coefficient of `xi^min_power` upward.
    pub fn new(min_power: i64, coeffs: Vec<Rational>) -> Self {
        assert!(!coeffs.is_empty(), "series needs at least one coefficient");
        Self { min_power, coeffs }
    }

    pub fn zero(truncation_order: i64) -> Self {
        assert!(truncation_order >= 0);
        Self {
            min_power: 0,
            coeffs: vec![Rational::zero(); truncation_order as usize + 1],
        }
    }

    pub fn constant(value: Rational, truncation_order: i64) -> Self {
        let mut s = Self::zero(truncation_order);
        s.coeffs[0] = value;
        s
    }

    pub fn min_power(&self) -> i64 {
        self.min_power
    }

    pub fn truncation_order(&self) -> i64 {
        self.min_power + self.coeffs.len() as i64 - 1
    }

    /// Coefficient of `xi^power`; zero below `min_power`, panics above the
    /// truncation order where the coefficient is unknown.
    pub fn coeff(&self, power: i64) -> Rational {
        if power < self.min_power {
            return Rational::zero();
        }
        assert!(
            power <= self.truncation_order(),
            "coefficient of xi^{power} is beyond the truncation order {}",
            self.truncation_order()
        );
        self.coeffs[(power - self.min_power) as usize].clone()
    }

    pub fn coeffs(&self) -> &[Rational] {
        &self.coeffs
    }

    pub fn add(&self, other: &Self) -> Self {
        let min_power = self.min_power.min(other.min_power);
        let trunc = self.truncation_order().min(other.truncation_order());
        let mut coeffs = vec![Rational::zero(); (trunc - min_power + 1) as usize];
        for s in [self, other] {
            for (i, c) in s.coeffs.iter().enumerate() {
                let p = s.min_power + i as i64;
                if p <= trunc {
                    coeffs[(p - min_power) as usize] += c;
                }
            }
        }
        Self { min_power, coeffs }
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.add(&other.neg())
    }

    pub fn neg(&self) -> Self {
        Self {
            min_power: self.min_power,
            coeffs: self.coeffs.iter().map(|c| -c).collect(),
        }
    }

    /// Cauchy product, truncated to the window where every contributing
    /// product is known: `min(a.trunc + b.min_power, b.trunc + a.min_power)`
    /// (the plain `min` of the truncation orders when both start at xi^0).
    pub fn mul(&self, other: &Self) -> Self {
        let min_power = self.min_power + other.min_power;
        let trunc = (self.truncation_order() + other.min_power)
            .min(other.truncation_order() + self.min_power);
        if trunc < min_power {
            return Self {
                min_power,
                coeffs: vec![Rational::zero()],
            };
        }
        let mut coeffs = vec![Rational::zero(); (trunc - min_power + 1) as usize];
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            let pa = self.min_power + i as i64;
            for (j, b) in other.coeffs.iter().enumerate() {
                let p = pa + other.min_power + j as i64;
                if p > trunc {
                    break;
                }
                if !b.is_zero() {
                    coeffs[(p - min_power) as usize] += a * b;
                }
            }
        }
        Self { min_power, coeffs }
    }

    pub fn scale(&self, factor: &Rational) -> Self {
        Self {
            min_power: self.min_power,
            coeffs: self.coeffs.iter().map(|c| c * factor).collect(),
        }
    }

    /// Multiply by `xi^delta`.
    pub fn shift_power(&self, delta: i64) -> Self {
        Self {
            min_power: self.min_power + delta,
            coeffs: self.coeffs.clone(),
        }
    }

    /// Drop coefficients above `order` (no-op if already shorter).
    pub fn truncate(&self, order: i64) -> Self {
        if order >= self.truncation_order() {
            return self.clone();
        }
        assert!(order >= self.min_power);
        Self {
            min_power: self.min_power,
            coeffs: self.coeffs[..(order - self.min_power + 1) as usize].to_vec(),
        }
    }

    /// Drop an exactly-zero leading coefficient (used after cancellations).
    pub fn trim_leading_zeros(&self) -> Self {
        let mut start = 0;
        while start + 1 < self.coeffs.len() && self.coeffs[start].is_zero() {
            start += 1;
        }
        Self {
            min_power: self.min_power + start as i64,
            coeffs: self.coeffs[start..].to_vec(),
        }
    }

    /// The operator `xi d/dxi`: multiplies each coefficient by its power.
    pub fn xi_d_dxi(&self) -> Self {
        let coeffs = self
            .coeffs
            .iter()
            .enumerate()
            .map(|(i, c)| c * Rational::from(BigInt::from(self.min_power + i as i64)))
            .collect();
        Self {
            min_power: self.min_power,
            coeffs,
        }
    }

    /// Evaluate at `xi` with a compensated Horner scheme, honoring the
    /// negative powers.
    pub fn eval(&self, xi: f64) -> Result<f64> {
        if self.min_power < 0 && xi <= 0.0 {
            return Err(Error::Domain(format!(
                "series has negative powers, cannot evaluate at xi = {xi}"
            )));
        }
        let coeffs: Vec<f64> = self.coeffs.iter().map(rational_to_f64).collect();
        let mut value = horner_compensated(&coeffs, xi);
        if self.min_power != 0 {
            value *= xi.powi(self.min_power as i32);
        }
        Ok(value)
    }

    /// Exact evaluation at a rational point (the slow oracle for `eval`).
    pub fn eval_exact(&self, xi: &Rational) -> Result<Rational> {
        if self.min_power < 0 && !xi.is_positive() {
            return Err(Error::Domain(
                "series has negative powers, need xi > 0".into(),
            ));
        }
        let mut acc = Rational::zero();
        for c in self.coeffs.iter().rev() {
            acc = acc * xi + c;
        }
        if self.min_power != 0 {
            let p = xi.pow(self.min_power as i32);
            acc *= p;
        }
        Ok(acc)
    }
}

impl std::ops::Add for &RationalSeries {
    type Output = RationalSeries;
    fn add(self, rhs: &RationalSeries) -> RationalSeries {
        RationalSeries::add(self, rhs)
    }
}

impl std::ops::Sub for &RationalSeries {
    type Output = RationalSeries;
    fn sub(self, rhs: &RationalSeries) -> RationalSeries {
        RationalSeries::sub(self, rhs)
    }
}

impl std::ops::Mul for &RationalSeries {
    type Output = RationalSeries;
    fn mul(self, rhs: &RationalSeries) -> RationalSeries {
        RationalSeries::mul(self, rhs)
    }
}

/// Convert a reduced rational to f64 (numerator and denominator each round to
/// 53 bits; fine for the magnitudes stored here).
pub fn rational_to_f64(r: &Rational) -> f64 {
    r.to_f64().expect("rational out of f64 range")
}

fn two_sum(a: f64, b: f64) -> (f64, f64) {
    let s = a + b;
    let bb = s - a;
    let e = (a - (s - bb)) + (b - bb);
    (s, e)
}

/// Horner evaluation with error compensation; faithfully rounded for any
/// realistically conditioned series.
fn horner_compensated(coeffs: &[f64], x: f64) -> f64 {
    let mut s = 0.0;
    let mut corr = 0.0;
    for &a in coeffs.iter().rev() {
        let p = s * x;
        let pe = f64::mul_add(s, x, -p);
        let (t, se) = two_sum(p, a);
        s = t;
        corr = corr * x + (pe + se);
    }
    s + corr
}

// Serialized as {"min_power": int, "coeffs": [["num","den"], ...]} with
// decimal-string integers; round trips bit-exactly.
#[derive(Serialize, Deserialize)]
struct SeriesRepr {
    min_power: i64,
    coeffs: Vec<[String; 2]>,
}

impl Serialize for RationalSeries {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        let repr = SeriesRepr {
            min_power: self.min_power,
            coeffs: self
                .coeffs
                .iter()
                .map(|c| [c.numer().to_string(), c.denom().to_string()])
                .collect(),
        };
        repr.serialize(serializer)
    }
}

impl<'de> Deserialize<'de> for RationalSeries {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> std::result::Result<Self, D::Error> {
        let repr = SeriesRepr::deserialize(deserializer)?;
        if repr.coeffs.is_empty() {
            return Err(D::Error::custom("series needs at least one coefficient"));
        }
        let coeffs = repr
            .coeffs
            .iter()
            .map(|[n, d]| ratio_from_strs(n, d).map_err(D::Error::custom))
            .collect::<std::result::Result<Vec<_>, _>>()?;
        Ok(RationalSeries {
            min_power: repr.min_power,
            coeffs,
        })
    }
}

/// n! as a big integer.
pub fn factorial(n: usize) -> BigInt {
    let mut acc = BigInt::one();
    for k in 2..=n {
        acc *= BigInt::from(k);
    }
    acc
}

/// m!/n! as an exact rational.
pub fn factorial_ratio(m: usize, n: usize) -> Rational {
    Rational::new(factorial(m), factorial(n))
}
