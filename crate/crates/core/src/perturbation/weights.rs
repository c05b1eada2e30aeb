//! Assembly of the transmon parameter series: frequency, anharmonicity, and
//! the charge/nonadiabatic weights, all as exact rational series.

use num_bigint::BigInt;
use num_traits::Zero;
use once_cell::sync::OnceCell;

use crate::error::{Error, Result};
use crate::series::{factorial, ratio, ratio_from_strs, Rational, RationalSeries};

use super::hamiltonian::HamiltonianSet;
use super::recurrence::{eigen_recurrence_with, normalize_states, EigenSeries};

/// The five parameter series of a transmon, in the expansion parameter xi.
///
/// `omega` is omega/E_C with `min_power = -1` (the `4/xi` plasma part and the
/// polynomial bracket in one object); `eta` is eta/E_C; `lambda` and
/// `lambda_big` are the dimensionless charge-operator weights; `upsilon`
/// stores the positive bracket of the nonadiabatic weight, whose physical
/// value is `-sqrt(2)` times the stored series.
#[derive(Clone, Debug, PartialEq, Eq, serde::Serialize, serde::Deserialize)]
pub struct TransmonSeriesSet {
    pub omega: RationalSeries,
    pub eta: RationalSeries,
    pub lambda: RationalSeries,
    pub lambda_big: RationalSeries,
    pub upsilon: RationalSeries,
}

impl TransmonSeriesSet {
    /// omega in units of E_C at the given xi.
    pub fn omega_over_ec(&self, xi: f64) -> Result<f64> {
        self.omega.eval(xi)
    }

    pub fn eta_over_ec(&self, xi: f64) -> Result<f64> {
        self.eta.eval(xi)
    }

    pub fn lambda_at(&self, xi: f64) -> Result<f64> {
        self.lambda.eval(xi)
    }

    pub fn lambda_big_at(&self, xi: f64) -> Result<f64> {
        self.lambda_big.eval(xi)
    }

    /// Physical nonadiabatic weight, prefactor applied.
    pub fn upsilon_at(&self, xi: f64) -> Result<f64> {
        Ok(-std::f64::consts::SQRT_2 * self.upsilon.eval(xi)?)
    }

    /// Restrict to energy-expansion order `order`: the omega/eta brackets
    /// keep powers through `order - 1`, the weights through `order`.
    pub fn truncated(&self, order: u32) -> Self {
        let p = order as i64;
        Self {
            omega: self.omega.truncate((p - 1).max(-1)),
            eta: self.eta.truncate((p - 1).max(0)),
            lambda: self.lambda.truncate(p),
            lambda_big: self.lambda_big.truncate(p),
            upsilon: self.upsilon.truncate(p),
        }
    }
}

/// Derive lambda, Lambda, upsilon from the normalized eigenstates.
///
/// With scaled coefficients the ladder matrix elements telescope to plain
/// factorials: `lambda = sum (mp+1)! s1[mp+1] s0[mp] - sum mp! s1[mp-1] s0[mp]`,
/// the (1,2) analogue halved for Lambda, and upsilon from the xi-derivative
/// overlap of levels 2 and 0.
pub fn charge_weights(max_order: u32) -> Result<(RationalSeries, RationalSeries, RationalSeries)> {
    let set = derivation(max_order)?;
    Ok((set.lambda, set.lambda_big, set.upsilon))
}

/// Run the full recurrence and assemble every parameter series at the given
/// energy-expansion order.
pub fn transmon_series(max_order: u32) -> Result<TransmonSeriesSet> {
    derivation(max_order)
}

fn derivation(max_order: u32) -> Result<TransmonSeriesSet> {
    let p_max = max_order as usize;
    let u_max = max_order.max(1);
    let dim = (2 + 4 * p_max + 1).max(2 * (u_max as usize + 1) + 1);
    let set = HamiltonianSet::build(u_max, dim)?;

    let levels: Vec<usize> = vec![0, 1, 2];
    let eigens = crate::parallel::sweep_map(&levels, |&n| {
        eigen_recurrence_with(&set, n, max_order).map(|e| normalize_states(&e))
    })
    .into_iter()
    .collect::<Result<Vec<_>>>()?;
    let (psi0, psi1, psi2) = (&eigens[0], &eigens[1], &eigens[2]);

    let omega = (psi1.energy() - psi0.energy())
        .scale(&ratio(4, 1))
        .shift_power(-1);
    let eta = (&(&psi1.energy().scale(&ratio(2, 1)) - psi0.energy()) - psi2.energy())
        .scale(&ratio(4, 1))
        .shift_power(-1)
        .trim_leading_zeros();

    let lambda = ladder_overlap(psi1, psi0, 1);
    let lambda_big = ladder_overlap(psi2, psi1, 2);
    let upsilon = nonadiabatic_weight(psi2, psi0);

    Ok(TransmonSeriesSet {
        omega,
        eta,
        lambda,
        lambda_big,
        upsilon,
    })
}

/// `<Psi_upper| (a^dag - a) |Psi_lower>` divided by `sqrt(denom)`; the sqrt
/// factors collapse to factorials, leaving a rational series.
fn ladder_overlap(upper: &EigenSeries, lower: &EigenSeries, denom: i64) -> RationalSeries {
    let p_max = upper.max_order().min(lower.max_order());
    let fact: Vec<Rational> = (0..=(lower.level() + 4 * p_max + 2))
        .map(|k| Rational::from(factorial(k)))
        .collect();
    let mut coeffs = vec![Rational::zero(); p_max + 1];
    for (l, out) in coeffs.iter_mut().enumerate() {
        for q in 0..=l {
            let su = upper.scaled_state(q);
            let sl = lower.scaled_state(l - q);
            for (mp, low) in sl.iter().enumerate() {
                if low.is_zero() {
                    continue;
                }
                // raising path: +(mp+1)! s_u[mp+1] s_l[mp]
                if mp + 1 < su.len() && !su[mp + 1].is_zero() {
                    *out += &su[mp + 1] * low * &fact[mp + 1];
                }
                // lowering path: -mp! s_u[mp-1] s_l[mp]
                if mp >= 1 && mp - 1 < su.len() && !su[mp - 1].is_zero() {
                    *out -= &su[mp - 1] * low * &fact[mp];
                }
            }
        }
    }
    RationalSeries::new(0, coeffs).scale(&Rational::new(BigInt::from(1), BigInt::from(denom)))
}

/// Positive bracket of the nonadiabatic weight: the physical value is
/// `-sqrt(2)` times this series.
fn nonadiabatic_weight(psi2: &EigenSeries, psi0: &EigenSeries) -> RationalSeries {
    let p_max = psi2.max_order().min(psi0.max_order());
    let fact: Vec<Rational> = (0..=(4 * p_max + 2))
        .map(|k| Rational::from(factorial(k)))
        .collect();
    let mut coeffs = vec![Rational::zero(); p_max + 1];
    for (l, out) in coeffs.iter_mut().enumerate() {
        for q in 0..=l {
            let r = l - q;
            if r == 0 {
                continue; // xi d/dxi kills the order-0 part
            }
            let s2 = psi2.scaled_state(q);
            let s0 = psi0.scaled_state(r);
            let order_factor = Rational::from(BigInt::from(r));
            for m in 0..s2.len().min(s0.len()) {
                if !s2[m].is_zero() && !s0[m].is_zero() {
                    *out += &s2[m] * &s0[m] * &order_factor * &fact[m];
                }
            }
        }
    }
    // upsilon = -<Psi_2| xi d/dxi |Psi_0> = -(1/sqrt 2) S; store S/2 >= 0
    RationalSeries::new(0, coeffs).scale(&ratio(1, 2))
}

static REFERENCE: OnceCell<TransmonSeriesSet> = OnceCell::new();

/// The exact 25th-order parameter series, loaded from the embedded reference
/// table. Byte-identical to `transmon_series(25)`; the derivation is checked
/// against this table by the verification suite, while evaluation paths use
/// the table so they start instantly.
pub fn reference_series() -> &'static TransmonSeriesSet {
    REFERENCE.get_or_init(|| {
        parse_reference(include_str!("../verification/data/series_reference.json"))
            .expect("embedded series reference is valid")
    })
}

fn parse_reference(text: &str) -> Result<TransmonSeriesSet> {
    let data: serde_json::Value =
        serde_json::from_str(text).map_err(|e| Error::SeriesFormat(e.to_string()))?;
    let table = |key: &str| -> Result<Vec<Rational>> {
        data[key]
            .as_array()
            .ok_or_else(|| Error::SeriesFormat(format!("missing {key}")))?
            .iter()
            .map(|pair| {
                let n = pair[0].as_str().unwrap_or_default();
                let d = pair[1].as_str().unwrap_or_default();
                ratio_from_strs(n, d)
            })
            .collect()
    };

    // omega/E_C = 4/xi - bracket
    let mut omega = vec![ratio(4, 1)];
    omega.extend(table("omega_bracket")?.into_iter().map(|c| -c));

    let eta = table("eta")?;

    let mut lambda = vec![ratio(1, 1)];
    lambda.extend(table("lambda_bracket")?.into_iter().map(|c| -c));
    let mut lambda_big = vec![ratio(1, 1)];
    lambda_big.extend(table("lambda_big_bracket")?.into_iter().map(|c| -c));

    let mut upsilon = vec![ratio(0, 1)];
    upsilon.extend(table("upsilon_bracket")?);

    Ok(TransmonSeriesSet {
        omega: RationalSeries::new(-1, omega),
        eta: RationalSeries::new(0, eta),
        lambda: RationalSeries::new(0, lambda),
        lambda_big: RationalSeries::new(0, lambda_big),
        upsilon: RationalSeries::new(0, upsilon),
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn charge_weights_leading_orders() {
        let (lambda, lambda_big, upsilon) = charge_weights(4).unwrap();
        // lambda = 1 - xi/2^3 - 11 xi^2/2^8 - 65 xi^3/2^11 - 4203 xi^4/2^17
        assert_eq!(lambda.coeff(0), ratio(1, 1));
        assert_eq!(lambda.coeff(1), ratio(-1, 8));
        assert_eq!(lambda.coeff(2), ratio(-11, 256));
        assert_eq!(lambda.coeff(3), ratio(-65, 2048));
        assert_eq!(lambda.coeff(4), ratio(-4203, 131072));
        // Lambda = 1 - xi/2^2 - 73 xi^2/2^9 - 79 xi^3/2^9 - 113685 xi^4/2^19
        assert_eq!(lambda_big.coeff(0), ratio(1, 1));
        assert_eq!(lambda_big.coeff(1), ratio(-1, 4));
        assert_eq!(lambda_big.coeff(2), ratio(-73, 512));
        assert_eq!(lambda_big.coeff(3), ratio(-79, 512));
        assert_eq!(lambda_big.coeff(4), ratio(-113685, 524288));
        // upsilon bracket: xi/2^4 + 11 xi^2/2^8 + 321 xi^3/2^13 + 5609 xi^4/2^17
        assert_eq!(upsilon.coeff(0), ratio(0, 1));
        assert_eq!(upsilon.coeff(1), ratio(1, 16));
        assert_eq!(upsilon.coeff(2), ratio(11, 256));
        assert_eq!(upsilon.coeff(3), ratio(321, 8192));
        assert_eq!(upsilon.coeff(4), ratio(5609, 131072));
    }

    #[test]
    fn derivation_matches_reference_at_low_order() {
        let derived = transmon_series(6).unwrap();
        let expect = reference_series().truncated(6);
        assert_eq!(derived, expect);
    }

    #[test]
    fn reference_shapes() {
        let r = reference_series();
        assert_eq!(r.omega.min_power(), -1);
        assert_eq!(r.omega.truncation_order(), 24);
        assert_eq!(r.eta.min_power(), 0);
        assert_eq!(r.eta.truncation_order(), 24);
        assert_eq!(r.lambda.truncation_order(), 25);
        assert_eq!(r.lambda_big.truncation_order(), 25);
        assert_eq!(r.upsilon.truncation_order(), 25);
        assert_eq!(r.omega.coeff(-1), ratio(4, 1));
    }

    #[test]
    fn upsilon_prefactor() {
        let r = reference_series();
        let xi = 0.2;
        let bracket = r.upsilon.eval(xi).unwrap();
        assert!(bracket > 0.0);
        assert!((r.upsilon_at(xi).unwrap() + std::f64::consts::SQRT_2 * bracket).abs() < 1e-15);
    }
}
