//! Small combinatorial helpers shared by the operator and bound code.

/// `ln(n!)`, summed directly. Exact enough for the photon numbers used here
/// (a few hundred at most).
pub fn ln_factorial(n: u64) -> f64 {
    (2..=n).map(|k| (k as f64).ln()).sum()
}

/// `ln C(n, k)`; `-inf` when `k > n`.
pub fn ln_binomial(n: u64, k: u64) -> f64 {
    if k > n {
        return f64::NEG_INFINITY;
    }
    let k = k.min(n - k);
    (0..k).map(|i| ((n - i) as f64 / (i + 1) as f64).ln()).sum()
}

/// `C(n, k)` as a float.
pub fn binomial(n: u64, k: u64) -> f64 {
    if k > n {
        return 0.0;
    }
    let k = k.min(n - k);
    let mut acc = 1.0;
    for i in 0..k {
        acc = acc * (n - i) as f64 / (i + 1) as f64;
    }
    acc
}

/// `1 - (1 - r)^m` without cancellation for small `r`.
pub fn one_minus_pow(r: f64, m: u64) -> f64 {
    -((m as f64) * (-r).ln_1p()).exp_m1()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn binomials_agree() {
        assert_eq!(binomial(10, 3), 120.0);
        assert_eq!(binomial(3, 5), 0.0);
        assert!((ln_binomial(40, 20) - binomial(40, 20).ln()).abs() < 1e-10);
        assert!((ln_factorial(10) - 3_628_800f64.ln()).abs() < 1e-12);
    }

    #[test]
    fn one_minus_pow_small_r() {
        let r = 1e-9;
        assert!((one_minus_pow(r, 3) - (3.0 * r - 3.0 * r * r + r * r * r)).abs() < 1e-24);
        assert_eq!(one_minus_pow(0.3, 0), 0.0);
    }
}
