//! Associated Laguerre polynomials `L_n^{(a)}(x)` for integer order.

use crate::error::{Error, Result};
use crate::special::binomial;

fn check_domain(n: u32, a: i64, x: f64) -> Result<()> {
    if !(x >= 0.0) || !x.is_finite() {
        return Err(Error::Domain(format!("Laguerre argument x = {x}")));
    }
    if a < -(n as i64) {
        return Err(Error::Domain(format!("Laguerre order a = {a} < -n = -{n}")));
    }
    Ok(())
}

/// `L_n^{(a)}(x)` by the three-term recurrence in `n`.
pub fn assoc_laguerre(n: u32, a: i64, x: f64) -> Result<f64> {
    check_domain(n, a, x)?;
    Ok(laguerre_unchecked(n, a as f64, x))
}

pub(crate) fn laguerre_unchecked(n: u32, a: f64, x: f64) -> f64 {
    let mut prev = 1.0;
    if n == 0 {
        return prev;
    }
    let mut cur = 1.0 + a - x;
    for k in 1..n {
        let k = k as f64;
        let next = ((2.0 * k + 1.0 + a - x) * cur - (k + a) * prev) / (k + 1.0);
        prev = cur;
        cur = next;
    }
    cur
}

/// Direct alternating sum `sum_j (-1)^j C(n+a, n-j) x^j / j!`. Loses
/// accuracy to cancellation for large `n x`; kept as the small-`n` oracle.
pub fn assoc_laguerre_series(n: u32, a: i64, x: f64) -> Result<f64> {
    check_domain(n, a, x)?;
    let top = (n as i64 + a) as u64;
    let mut term_x = 1.0;
    let mut acc = 0.0;
    for j in 0..=n as u64 {
        if j > 0 {
            term_x *= x / j as f64;
        }
        let sign = if j % 2 == 0 { 1.0 } else { -1.0 };
        acc += sign * binomial(top, n as u64 - j) * term_x;
    }
    Ok(acc)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn low_orders_by_hand() {
        for &(a, x) in &[(0, 0.3), (3, 2.0), (7, 5.0)] {
            assert_eq!(assoc_laguerre(0, a, x).unwrap(), 1.0);
        }
        for &x in &[0.0, 0.5, 3.0, 17.0] {
            assert!((assoc_laguerre(1, 0, x).unwrap() - (1.0 - x)).abs() < 1e-15);
        }
        // L_2^{(1)}(x) = 3 - 3x + x^2/2
        let x = 1.7;
        assert!((assoc_laguerre(2, 1, x).unwrap() - (3.0 - 3.0 * x + x * x / 2.0)).abs() < 1e-14);
    }

    #[test]
    fn recurrence_matches_series_for_small_n() {
        for n in 0..=12 {
            for a in -(n as i64)..=6 {
                for &x in &[0.0, 0.1, 0.9, 2.5, 6.0] {
                    let r = assoc_laguerre(n, a, x).unwrap();
                    let s = assoc_laguerre_series(n, a, x).unwrap();
                    assert!(
                        (r - s).abs() <= 1e-11 * (1.0 + s.abs()),
                        "n={n} a={a} x={x}: {r} vs {s}"
                    );
                }
            }
        }
    }

    #[test]
    fn rejects_out_of_domain() {
        assert!(matches!(assoc_laguerre(2, -3, 1.0), Err(Error::Domain(_))));
        assert!(matches!(assoc_laguerre(2, 0, -1.0), Err(Error::Domain(_))));
    }

    #[test]
    fn bound_holds_on_grid() {
        for n in 0..=40u32 {
            for a in 0..=10i64 {
                for xi in 0..=50 {
                    let x = xi as f64 * 0.5;
                    let v = assoc_laguerre(n, a, x).unwrap().abs();
                    let bound = binomial((a + n as i64) as u64, n as u64) * (x / 2.0).exp();
                    assert!(v <= bound * (1.0 + 1e-12), "n={n} a={a} x={x}");
                }
            }
        }
    }
}
