//! Eigenvalue/eigenstate recurrence for the weakly anharmonic ladder.
//!
//! Level n at expansion order p lives on Fock states `|0> .. |n+4p>` with the
//! parity of n. Working with scaled coefficients (the rational part left
//! after factoring `sqrt(m!/n!)` out of `<m|psi_n>`) the recurrence closes in
//! exact rational arithmetic: energies and scaled coefficients never leave
//! the rational field.

use num_bigint::BigInt;
use num_traits::Zero;

use crate::error::Result;
use crate::series::{factorial_ratio, rational_to_f64, Rational, RationalSeries};

use super::hamiltonian::HamiltonianSet;

/// Perturbative expansion of one eigenlevel: energy series (units of the
/// plasma frequency) and per-order state coefficients.
#[derive(Clone, Debug)]
pub struct EigenSeries {
    level: usize,
    energy: RationalSeries,
    /// `states[p][m] * sqrt(m!/level!)` is the coefficient of `|m>` at order p.
    states: Vec<Vec<Rational>>,
    normalized: bool,
}

impl EigenSeries {
    pub fn level(&self) -> usize {
        self.level
    }

    /// Energy series in units of the plasma frequency.
    pub fn energy(&self) -> &RationalSeries {
        &self.energy
    }

    pub fn max_order(&self) -> usize {
        self.states.len() - 1
    }

    pub fn is_normalized(&self) -> bool {
        self.normalized
    }

    /// Scaled coefficients at one order (index = Fock state).
    pub fn scaled_state(&self, order: usize) -> &[Rational] {
        &self.states[order]
    }

    /// Physical coefficient `<m|psi^(p)>` as a float.
    pub fn state_coefficient(&self, order: usize, m: usize) -> f64 {
        let s = &self.states[order];
        if m >= s.len() || s[m].is_zero() {
            return 0.0;
        }
        rational_to_f64(&s[m]) * rational_to_f64(&factorial_ratio(m, self.level)).sqrt()
    }

    /// Exact series of `<psi|psi>`; the sqrt factors square away, so this is
    /// rational.
    pub fn norm_squared_series(&self) -> RationalSeries {
        let max_order = self.max_order();
        let mut coeffs = vec![Rational::zero(); max_order + 1];
        for (l, c) in coeffs.iter_mut().enumerate() {
            for q in 0..=l {
                let (a, b) = (&self.states[q], &self.states[l - q]);
                for m in 0..a.len().min(b.len()) {
                    if !a[m].is_zero() && !b[m].is_zero() {
                        *c += &a[m] * &b[m] * factorial_ratio(m, self.level);
                    }
                }
            }
        }
        RationalSeries::new(0, coeffs)
    }
}

/// Unnormalized eigen expansion of `level` through order `max_order`, taking
/// the expansion terms from `set` (which must cover `max_order` at dimension
/// at least `level + 4 max_order + 1`).
pub fn eigen_recurrence_with(
    set: &HamiltonianSet,
    level: usize,
    max_order: u32,
) -> Result<EigenSeries> {
    assert!(level <= 4, "levels above 4 are out of scope");
    let p_max = max_order as usize;
    let dim = level + 4 * p_max + 1;

    let mut states: Vec<Vec<Rational>> = Vec::with_capacity(p_max + 1);
    let mut order0 = vec![Rational::zero(); level + 1];
    order0[level] = Rational::from(BigInt::from(1));
    states.push(order0);

    let mut energy = vec![Rational::zero(); p_max + 1];
    energy[0] = Rational::from(BigInt::from(level));

    for p in 1..=p_max {
        // acc[m] = sum_q <m| H^(p-q) |psi^(q)>
        let mut acc = vec![Rational::zero(); dim];
        for (q, state) in states.iter().enumerate() {
            let term = set.term((p - q) as u32);
            let applied = term.apply_scaled(state, state.len() - 1);
            for (m, v) in applied.into_iter().enumerate() {
                if !v.is_zero() {
                    acc[m] += v;
                }
            }
        }
        energy[p] = acc[level].clone();

        let support = level + 4 * p;
        let mut state = vec![Rational::zero(); support + 1];
        let start = level % 2;
        for m in (start..=support).step_by(2) {
            if m == level {
                continue;
            }
            let mut numer = acc[m].clone();
            for q in 1..p {
                let prev = &states[q];
                if m < prev.len() && !prev[m].is_zero() {
                    numer -= &energy[p - q] * &prev[m];
                }
            }
            if !numer.is_zero() {
                let gap = Rational::from(BigInt::from(level as i64 - m as i64));
                state[m] = numer / gap;
            }
        }
        states.push(state);
    }

    Ok(EigenSeries {
        level,
        energy: RationalSeries::new(0, energy),
        states,
        normalized: false,
    })
}

/// Convenience wrapper building the expansion terms for a single level.
pub fn eigen_recurrence(level: usize, max_order: u32) -> Result<EigenSeries> {
    let u_max = max_order.max(1);
    let dim = (level + 4 * max_order as usize + 1).max(2 * (u_max as usize + 1) + 1);
    let set = HamiltonianSet::build(u_max, dim)?;
    eigen_recurrence_with(&set, level, max_order)
}

/// Rescale the state coefficients order by order so `<Psi|Psi> = 1` through
/// the truncation order. The energy series is unchanged.
pub fn normalize_states(e: &EigenSeries) -> EigenSeries {
    if e.normalized {
        return e.clone();
    }
    let p_max = e.max_order();
    let norm2 = e.norm_squared_series();

    // t with t^2 * norm2 = 1 + O(xi^(p_max+1)); t_0 = 1 since norm2_0 = 1
    let mut t = vec![Rational::zero(); p_max + 1];
    t[0] = Rational::from(BigInt::from(1));
    for k in 1..=p_max {
        let mut rest = Rational::zero();
        for i in 0..=k {
            for j in 0..=(k - i) {
                if i == k || j == k {
                    continue;
                }
                let l = k - i - j;
                let n = norm2.coeff(l as i64);
                if !t[i].is_zero() && !t[j].is_zero() && !n.is_zero() {
                    rest += &t[i] * &t[j] * n;
                }
            }
        }
        t[k] = -rest / Rational::from(BigInt::from(2));
    }

    let mut states: Vec<Vec<Rational>> = Vec::with_capacity(p_max + 1);
    for p in 0..=p_max {
        let support = e.level + 4 * p;
        let mut out = vec![Rational::zero(); support + 1];
        for q in 0..=p {
            let src = &e.states[q];
            let factor = &t[p - q];
            if factor.is_zero() {
                continue;
            }
            for (m, v) in src.iter().enumerate() {
                if !v.is_zero() {
                    out[m] += v * factor;
                }
            }
        }
        states.push(out);
    }

    EigenSeries {
        level: e.level,
        energy: e.energy.clone(),
        states,
        normalized: true,
    }
}

/// Matrix of normalized eigenstate coefficients at one expansion order: 25
/// Fock rows, one column per level `0..=max_level`.
pub fn diagonalization_operator(max_level: usize, order: usize) -> Result<Vec<Vec<f64>>> {
    assert!(max_level <= 4);
    assert!(order <= 5);
    const ROWS: usize = 25;
    let set = HamiltonianSet::build(5, 4 + 4 * 5 + 1)?;
    let levels: Vec<usize> = (0..=max_level).collect();
    let columns = crate::parallel::sweep_map(&levels, |&n| {
        eigen_recurrence_with(&set, n, 5).map(|e| normalize_states(&e))
    })
    .into_iter()
    .collect::<Result<Vec<_>>>()?;

    let mut matrix = vec![vec![0.0; max_level + 1]; ROWS];
    for (col, eigen) in columns.iter().enumerate() {
        for (m, row) in matrix.iter_mut().enumerate() {
            row[col] = eigen.state_coefficient(order, m);
        }
    }
    Ok(matrix)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::series::ratio;

    #[test]
    fn order_zero_is_fock_state() {
        let e = eigen_recurrence(0, 0).unwrap();
        assert_eq!(e.energy().coeff(0), ratio(0, 1));
        assert_eq!(e.scaled_state(0), &[ratio(1, 1)]);

        let e3 = eigen_recurrence(3, 0).unwrap();
        assert_eq!(e3.energy().coeff(0), ratio(3, 1));
        assert_eq!(e3.scaled_state(0)[3], ratio(1, 1));
    }

    #[test]
    fn frequency_bracket_through_fourth_order() {
        // E_1 - E_0 in plasma units, converted to the E_C bracket, reproduces
        // 1, 1/2^2, 21/2^7, 19/2^7, 5319/2^15
        let e0 = eigen_recurrence(0, 5).unwrap();
        let e1 = eigen_recurrence(1, 5).unwrap();
        let expect = [
            ratio(1, 1),
            ratio(1, 4),
            ratio(21, 128),
            ratio(19, 128),
            ratio(5319, 32768),
        ];
        for (j, want) in expect.iter().enumerate() {
            let diff = e1.energy().coeff(j as i64 + 1) - e0.energy().coeff(j as i64 + 1);
            assert_eq!(diff * ratio(-4, 1), want.clone(), "bracket order {j}");
        }
    }

    #[test]
    fn anharmonicity_bracket_through_fourth_order() {
        // 2E_1 - E_0 - E_2 gives 1, 9/2^4, 81/2^7, 3645/2^12, 46899/2^15
        let e0 = eigen_recurrence(0, 5).unwrap();
        let e1 = eigen_recurrence(1, 5).unwrap();
        let e2 = eigen_recurrence(2, 5).unwrap();
        let expect = [
            ratio(1, 1),
            ratio(9, 16),
            ratio(81, 128),
            ratio(3645, 4096),
            ratio(46899, 32768),
        ];
        for (j, want) in expect.iter().enumerate() {
            let p = j as i64 + 1;
            let diff = e1.energy().coeff(p) * ratio(2, 1)
                - e0.energy().coeff(p)
                - e2.energy().coeff(p);
            assert_eq!(diff * ratio(4, 1), want.clone(), "bracket order {j}");
        }
    }

    #[test]
    fn support_and_parity() {
        let e = eigen_recurrence(1, 4).unwrap();
        for p in 0..=4usize {
            let s = e.scaled_state(p);
            assert!(s.len() <= 1 + 4 * p + 1);
            for (m, c) in s.iter().enumerate() {
                if m % 2 == 0 {
                    assert!(c.is_zero(), "parity violation at p={p} m={m}");
                }
            }
        }
    }

    #[test]
    fn intermediate_normalization() {
        let e = eigen_recurrence(2, 5).unwrap();
        for p in 1..=5 {
            assert!(e.scaled_state(p)[2].is_zero());
        }
    }

    #[test]
    fn normalized_norm_is_one() {
        let e = normalize_states(&eigen_recurrence(1, 6).unwrap());
        let n2 = e.norm_squared_series();
        assert_eq!(n2.coeff(0), ratio(1, 1));
        for p in 1..=6 {
            assert!(n2.coeff(p).is_zero(), "norm^2 residual at order {p}");
        }
    }

    #[test]
    fn normalization_leaves_order_zero() {
        let e = normalize_states(&eigen_recurrence(3, 3).unwrap());
        assert_eq!(e.scaled_state(0)[3], ratio(1, 1));
    }

    #[test]
    fn first_order_ground_state_coefficients() {
        // <2|Psi_0> at first order is (1/2^3)(1/sqrt 2), scaled value 1/16;
        // <4|Psi_0> is (1/2^3)/(sqrt(2)^3 sqrt(3))
        let e = normalize_states(&eigen_recurrence(0, 1).unwrap());
        assert_eq!(e.scaled_state(1)[2], ratio(1, 16));
        let c2 = e.state_coefficient(1, 2);
        assert!((c2 - 0.088388347648318).abs() < 1e-14);
        let c4 = e.state_coefficient(1, 4);
        assert!((c4 - 1.0 / (8.0 * (2.0f64).powf(1.5) * 3.0f64.sqrt())).abs() < 1e-15);
    }

    #[test]
    fn second_order_diagonal_entry() {
        // <0|Psi_0> at second order: -(1/2^2) 13/(2^8 3)
        let e = normalize_states(&eigen_recurrence(0, 2).unwrap());
        assert_eq!(e.scaled_state(2)[0], ratio(-13, 3072));
        assert!((e.state_coefficient(2, 0) + 0.004231770833333).abs() < 1e-14);
    }

    #[test]
    fn diagonalization_operator_shapes() {
        let u0 = diagonalization_operator(4, 0).unwrap();
        assert_eq!(u0.len(), 25);
        assert_eq!(u0[0].len(), 5);
        for m in 0..25 {
            for n in 0..5 {
                let expect = if m == n { 1.0 } else { 0.0 };
                assert_eq!(u0[m][n], expect);
            }
        }

        let u1 = diagonalization_operator(4, 1).unwrap();
        // entry (|3>, Psi_1) = (1/2^3) 5/(sqrt 2 sqrt 3)
        assert!((u1[3][1] - 5.0 / (8.0 * 6.0f64.sqrt())).abs() < 1e-14);
    }
}
