//! Normal-ordered expansion terms of the transmon Hamiltonian in the Fock
//! basis, in units of the plasma frequency.
//!
//! The order-u term is a double sum over ladder-operator monomials
//! `a^dag(v+1+w) a^(v+1-w)` with `v in [0, u]`, `w in [-(v+1), v+1]`, so it
//! only connects Fock states whose indices differ by an even number at most
//! `2(u+1)`. Its matrix element between `<m|` and `|mp>` is a rational
//! multiple of `sqrt(m!/mp!)`; we store that rational ("scaled") part, which
//! keeps the whole eigenvalue recurrence inside exact rational arithmetic.

use num_bigint::BigInt;
use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::series::{factorial, Rational};

/// One order of the Hamiltonian expansion, as a dense scaled-rational matrix.
#[derive(Clone, Debug)]
pub struct HamiltonianTerm {
    order: u32,
    dim: usize,
    /// `scaled[m][mp] * sqrt(m!/mp!)` is the matrix element, in units of the
    /// plasma frequency.
    scaled: Vec<Vec<Rational>>,
}

impl HamiltonianTerm {
    /// Build the order-u term on `dim` Fock states.
    pub fn new(order: u32, dim: usize) -> Result<Self> {
        let band = 2 * (order as usize + 1);
        if dim < band + 1 {
            return Err(Error::DimensionTooSmall {
                dim,
                reason: format!("order-{order} term reaches {band} states away"),
            });
        }
        let mut scaled = vec![vec![Rational::zero(); dim]; dim];
        if order == 0 {
            // harmonic part: diag(n)
            for (n, row) in scaled.iter_mut().enumerate() {
                row[n] = Rational::from(BigInt::from(n));
            }
            return Ok(Self { order, dim, scaled });
        }

        let u = order as usize;
        let fact: Vec<BigInt> = (0..=dim.max(band)).map(factorial).collect();
        let sign = if u % 2 == 0 { 1 } else { -1 };
        for v in 0..=u {
            // (-1)^u / (2^(u-v+1) (u-v)!)
            let prefactor = Rational::new(
                BigInt::from(sign),
                (BigInt::one() << (u - v + 1)) * &fact[u - v],
            );
            for w in -(v as i64 + 1)..=(v as i64 + 1) {
                let j = (v as i64 + 1 + w) as usize;
                let k = (v as i64 + 1 - w) as usize;
                let coeff = &prefactor / Rational::from(&fact[j] * &fact[k]);
                for mp in k..dim {
                    let m = mp - k + j;
                    if m >= dim {
                        continue;
                    }
                    // <m| a^dag^j a^k |mp> / sqrt(m!/mp!) = mp!/(mp-k)!
                    let ladder = Rational::from(&fact[mp] / &fact[mp - k]);
                    scaled[m][mp] += &coeff * ladder;
                }
            }
        }
        Ok(Self { order, dim, scaled })
    }

    pub fn order(&self) -> u32 {
        self.order
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    /// Rational part of the element; multiply by `sqrt(m!/mp!)` to recover
    /// the physical value.
    pub fn scaled_element(&self, m: usize, mp: usize) -> &Rational {
        &self.scaled[m][mp]
    }

    /// Matrix element as a float, in units of the plasma frequency.
    pub fn element(&self, m: usize, mp: usize) -> f64 {
        use crate::series::{factorial_ratio, rational_to_f64};
        let s = rational_to_f64(&self.scaled[m][mp]);
        if s == 0.0 {
            return 0.0;
        }
        s * rational_to_f64(&factorial_ratio(m, mp)).sqrt()
    }

    /// Apply to a scaled state vector supported on indices `<= src_max` with
    /// fixed parity. Scaled vectors compose: the sqrt factors telescope, so
    /// this is a plain rational matrix-vector product.
    pub(crate) fn apply_scaled(&self, vec: &[Rational], src_max: usize) -> Vec<Rational> {
        let band = 2 * (self.order as usize + 1);
        let out_max = (src_max + band).min(self.dim - 1);
        let mut out = vec![Rational::zero(); out_max + 1];
        for (mp, x) in vec.iter().enumerate().take(src_max + 1) {
            if x.is_zero() {
                continue;
            }
            // keep the parity of mp when the band is clipped at zero
            let lo = if mp >= band { mp - band } else { mp % 2 };
            let hi = (mp + band).min(out_max);
            for m in (lo..=hi).step_by(2) {
                let h = &self.scaled[m][mp];
                if !h.is_zero() {
                    out[m] += h * x;
                }
            }
        }
        out
    }
}

/// The expansion terms of orders `1..=max_order`, shared by every level's
/// recurrence.
pub struct HamiltonianSet {
    terms: Vec<HamiltonianTerm>,
}

impl HamiltonianSet {
    pub fn build(max_order: u32, dim: usize) -> Result<Self> {
        let orders: Vec<u32> = (1..=max_order).collect();
        let terms = crate::parallel::sweep_map(&orders, |&u| HamiltonianTerm::new(u, dim))
            .into_iter()
            .collect::<Result<Vec<_>>>()?;
        Ok(Self { terms })
    }

    pub fn term(&self, order: u32) -> &HamiltonianTerm {
        &self.terms[order as usize - 1]
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::series::ratio;

    #[test]
    fn order_zero_is_number_operator() {
        let h = HamiltonianTerm::new(0, 6).unwrap();
        for m in 0..6 {
            for mp in 0..6 {
                let expect = if m == mp { m as f64 } else { 0.0 };
                assert_eq!(h.element(m, mp), expect);
            }
        }
    }

    #[test]
    fn first_order_elements() {
        let h = HamiltonianTerm::new(1, 10).unwrap();
        // diagonal: -n/4 - n(n-1)/8
        for n in 0..6i64 {
            assert_eq!(
                *h.scaled_element(n as usize, n as usize),
                ratio(-n, 4) + ratio(-n * (n - 1), 8)
            );
        }
        // <2|H1|0> = -1/8 * sqrt(2)
        assert_eq!(*h.scaled_element(2, 0), ratio(-1, 8));
        assert!((h.element(2, 0) - (-2.0f64.sqrt() / 8.0)).abs() < 1e-15);
        // <4|H1|0> = -1/48 * sqrt(24)
        assert_eq!(*h.scaled_element(4, 0), ratio(-1, 48));
    }

    #[test]
    fn odd_offsets_vanish() {
        for u in 0..4 {
            let h = HamiltonianTerm::new(u, 2 * (u as usize + 1) + 3).unwrap();
            for m in 0..h.dim() {
                for mp in 0..h.dim() {
                    if (m as i64 - mp as i64).rem_euclid(2) == 1 {
                        assert!(h.scaled_element(m, mp).is_zero(), "u={u} m={m} mp={mp}");
                    }
                }
            }
        }
    }

    #[test]
    fn band_limit() {
        for u in 1..5u32 {
            let h = HamiltonianTerm::new(u, 4 * (u as usize + 1) + 2).unwrap();
            let band = 2 * (u as usize + 1) as i64;
            for m in 0..h.dim() {
                for mp in 0..h.dim() {
                    if (m as i64 - mp as i64).abs() > band {
                        assert!(h.scaled_element(m, mp).is_zero());
                    }
                }
            }
        }
    }

    #[test]
    fn exact_symmetry() {
        // scaled[mp][m] = scaled[m][mp] * m!/mp! expresses hermiticity of the
        // physical matrix
        use crate::series::factorial_ratio;
        for u in 1..5u32 {
            let h = HamiltonianTerm::new(u, 12).unwrap();
            for m in 0..12 {
                for mp in 0..12 {
                    let lhs = h.scaled_element(mp, m).clone();
                    let rhs = h.scaled_element(m, mp) * factorial_ratio(m, mp);
                    assert_eq!(lhs, rhs, "u={u} m={m} mp={mp}");
                }
            }
        }
    }

    #[test]
    fn dimension_guard() {
        assert!(HamiltonianTerm::new(3, 8).is_err());
        assert!(HamiltonianTerm::new(3, 9).is_ok());
    }
}
