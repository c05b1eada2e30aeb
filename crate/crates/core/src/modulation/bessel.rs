//! Bessel functions of the first kind at integer order, by downward
//! recurrence with sum normalization (Miller's algorithm). One pass yields
//! the whole table J_0..J_n, which the sideband sums consume directly.

/// Table of `J_0(x) ..= J_{n_max}(x)` for `x >= 0`.
pub fn bessel_j_table(n_max: usize, x: f64) -> Vec<f64> {
    assert!(x >= 0.0, "table path needs x >= 0");
    if x == 0.0 {
        let mut t = vec![0.0; n_max + 1];
        t[0] = 1.0;
        return t;
    }

    // start high enough that the downward recurrence forgets the seed
    let scale_cap = 1e250;
    let base = n_max.max(x.ceil() as usize);
    let start = base + 20 + (20.0 * (base as f64 + 1.0).sqrt()) as usize;

    let mut table = vec![0.0; n_max + 1];
    let mut jp = 0.0_f64; // J_{k+1}
    let mut j = 1e-300_f64; // J_k (arbitrary seed)
    let mut norm = 0.0_f64; // accumulates J_0 + 2 sum J_{2m}
    for k in (0..=start).rev() {
        let jm = (2.0 * (k as f64 + 1.0) / x) * j - jp;
        jp = j;
        j = jm;
        if k <= n_max {
            table[k] = j;
        }
        if k % 2 == 0 {
            norm += if k == 0 { j } else { 2.0 * j };
        }
        if j.abs() > scale_cap {
            jp /= scale_cap;
            j /= scale_cap;
            norm /= scale_cap;
            for v in table.iter_mut() {
                *v /= scale_cap;
            }
        }
    }
    for v in table.iter_mut() {
        *v /= norm;
    }
    table
}

/// `J_n(x)` for any integer order and real argument, via the symmetries
/// `J_{-n}(x) = (-1)^n J_n(x)` and `J_n(-x) = (-1)^n J_n(x)`.
pub fn bessel_j(n: i64, x: f64) -> f64 {
    let mut sign = 1.0;
    let mut n = n;
    let mut x = x;
    if n < 0 {
        n = -n;
        if n % 2 == 1 {
            sign = -sign;
        }
    }
    if x < 0.0 {
        x = -x;
        if n % 2 == 1 {
            sign = -sign;
        }
    }
    sign * bessel_j_table(n as usize, x)[n as usize]
}
