//! Special functions used by the analytic eigenstates.

use std::sync::OnceLock;

use crate::error::{LandauError, Result};

/// Largest polynomial degree accepted by [`hermite`] and [`assoc_laguerre`].
pub const DEGREE_CAP: usize = 300;

const LOG_FACTORIAL_TABLE: usize = 1024;

/// Physicists' Hermite polynomial `H_n(x)` from the three-term recurrence
/// `H_{n+1} = 2x H_n - 2n H_{n-1}`.
pub fn hermite(n: usize, x: f64) -> Result<f64> {
    if n > DEGREE_CAP {
        return Err(LandauError::CapExceeded {
            degree: n,
            cap: DEGREE_CAP,
        });
    }
    let mut prev = 1.0;
    if n == 0 {
        return Ok(prev);
    }
    let mut cur = 2.0 * x;
    for k in 1..n {
        let next = 2.0 * x * cur - 2.0 * k as f64 * prev;
        prev = cur;
        cur = next;
    }
    Ok(cur)
}

/// Associated Laguerre polynomial `L^alpha_k(x)` via
/// `(k+1) L_{k+1} = (2k + 1 + alpha - x) L_k - (k + alpha) L_{k-1}`.
pub fn assoc_laguerre(k: usize, alpha: f64, x: f64) -> Result<f64> {
    if k > DEGREE_CAP {
        return Err(LandauError::CapExceeded {
            degree: k,
            cap: DEGREE_CAP,
        });
    }
    let mut prev = 1.0;
    if k == 0 {
        return Ok(prev);
    }
    let mut cur = 1.0 + alpha - x;
    for j in 1..k {
        let jf = j as f64;
        let next = ((2.0 * jf + 1.0 + alpha - x) * cur - (jf + alpha) * prev) / (jf + 1.0);
        prev = cur;
        cur = next;
    }
    Ok(cur)
}

fn log_factorial_table() -> &'static [f64] {
    static TABLE: OnceLock<Vec<f64>> = OnceLock::new();
    TABLE.get_or_init(|| {
        let mut t = Vec::with_capacity(LOG_FACTORIAL_TABLE);
        t.push(0.0);
        // Pairwise products keep the running sum short; each step adds one ln.
        let mut acc = 0.0f64;
        for i in 1..LOG_FACTORIAL_TABLE {
            acc += (i as f64).ln();
            t.push(acc);
        }
        t
    })
}

/// `ln(n!)`: tabulated for `n < 1024`, Stirling series beyond.
pub fn log_factorial(n: usize) -> f64 {
    if n < LOG_FACTORIAL_TABLE {
        return log_factorial_table()[n];
    }
    let x = n as f64 + 1.0;
    // ln Γ(x) asymptotic series
    (x - 0.5) * x.ln() - x + 0.5 * (2.0 * std::f64::consts::PI).ln() + 1.0 / (12.0 * x)
        - 1.0 / (360.0 * x.powi(3))
        + 1.0 / (1260.0 * x.powi(5))
}

pub fn log_binomial(n: usize, k: usize) -> f64 {
    log_factorial(n) - log_factorial(k) - log_factorial(n - k)
}

/// Normalized Hermite function `(√π 2^n n!)^{-1/2} H_n(ξ) e^{-ξ²/2}`.
///
/// Evaluated with the orthonormal recurrence, which does not overflow for
/// large `n` or `ξ`.
pub fn hermite_function(n: usize, xi: f64) -> f64 {
    let mut prev = std::f64::consts::PI.powf(-0.25) * (-0.5 * xi * xi).exp();
    if n == 0 {
        return prev;
    }
    let mut cur = std::f64::consts::SQRT_2 * xi * prev;
    for k in 1..n {
        let kf = k as f64;
        let next = (2.0 / (kf + 1.0)).sqrt() * xi * cur - (kf / (kf + 1.0)).sqrt() * prev;
        prev = cur;
        cur = next;
    }
    cur
}

#[cfg(test)]
mod tests {
    use super::*;

    fn rel(a: f64, b: f64) -> f64 {
        (a - b).abs() / b.abs().max(1e-300)
    }

    #[test]
    fn hermite_examples() {
        assert_eq!(hermite(0, 7.3).unwrap(), 1.0);
        assert_eq!(hermite(1, 2.0).unwrap(), 4.0);
        assert_eq!(hermite(3, 1.0).unwrap(), -4.0);
        assert!(hermite(301, 0.1).is_err());
        assert!(hermite(300, 0.1).is_ok());
    }

    #[test]
    fn hermite_matches_explicit_polynomials() {
        for &x in &[-2.5f64, -0.3, 0.0, 0.7, 3.1] {
            let h3 = 8.0 * x * x * x - 12.0 * x;
            let h4 = 16.0 * x.powi(4) - 48.0 * x * x + 12.0;
            assert!((hermite(3, x).unwrap() - h3).abs() < 1e-12 * (1.0 + h3.abs()));
            assert!((hermite(4, x).unwrap() - h4).abs() < 1e-12 * (1.0 + h4.abs()));
        }
    }

    #[test]
    fn hermite_derivative_identity() {
        // d/dx H_n = 2n H_{n-1}, checked by a central difference
        let h = 1e-5;
        for n in 1..=20 {
            for i in 0..=20 {
                let x = -5.0 + 0.5 * i as f64;
                let fd = (hermite(n, x + h).unwrap() - hermite(n, x - h).unwrap()) / (2.0 * h);
                let exact = 2.0 * n as f64 * hermite(n - 1, x).unwrap();
                let scale = exact.abs().max(hermite(n, x).unwrap().abs() / 5.0).max(1.0);
                assert!(
                    (fd - exact).abs() / scale < 1e-6,
                    "n={n} x={x} fd={fd} exact={exact}"
                );
            }
        }
    }

    #[test]
    fn laguerre_examples() {
        assert_eq!(assoc_laguerre(0, 2.5, 9.1).unwrap(), 1.0);
        assert_eq!(assoc_laguerre(1, 2.0, 1.0).unwrap(), 2.0);
        assert_eq!(assoc_laguerre(2, 0.0, 2.0).unwrap(), -1.0);
        assert!(assoc_laguerre(301, 0.0, 1.0).is_err());
    }

    #[test]
    fn laguerre_closed_form_degree_two() {
        for &a in &[0.0, 1.0, 2.5] {
            for &x in &[0.0, 0.4, 3.0, 11.0] {
                let exact = 0.5 * x * x - (a + 2.0) * x + 0.5 * (a + 1.0) * (a + 2.0);
                assert!(
                    (assoc_laguerre(2, a, x).unwrap() - exact).abs() < 1e-12 * (1.0 + exact.abs())
                );
            }
        }
    }

    /// Composite Simpson on [0, 120] of x^a e^{-x} L_j L_k.
    fn laguerre_inner(j: usize, k: usize, a: f64) -> f64 {
        let n = 240_000;
        let h = 120.0 / n as f64;
        let f = |x: f64| {
            let w = if a == 0.0 {
                (-x).exp()
            } else {
                x.powf(a) * (-x).exp()
            };
            w * assoc_laguerre(j, a, x).unwrap() * assoc_laguerre(k, a, x).unwrap()
        };
        let mut s = f(0.0) + f(120.0);
        for i in 1..n {
            let c = if i % 2 == 1 { 4.0 } else { 2.0 };
            s += c * f(i as f64 * h);
        }
        s * h / 3.0
    }

    #[test]
    fn laguerre_orthogonality() {
        for &a in &[0.0, 1.0, 2.0] {
            for j in 0..=10 {
                for k in j..=10 {
                    let v = laguerre_inner(j, k, a);
                    let expected = if j == k {
                        (log_factorial(j + a as usize) - log_factorial(j)).exp()
                    } else {
                        0.0
                    };
                    assert!(
                        (v - expected).abs() < 1e-8 * expected.max(1.0),
                        "a={a} j={j} k={k} v={v}"
                    );
                }
            }
        }
    }

    #[test]
    fn log_factorial_values() {
        assert_eq!(log_factorial(0), 0.0);
        assert_eq!(log_factorial(1), 0.0);
        assert!(rel(log_factorial(10), 3_628_800f64.ln()) < 1e-15);
        // exact product in u128 for 30!
        let f30: u128 = (1..=30u128).product();
        assert!(rel(log_factorial(30), (f30 as f64).ln()) < 1e-14);
        // Stirling branch agrees with the table at the seam
        let mut acc = log_factorial(1023);
        for i in 1024..=1030 {
            acc += (i as f64).ln();
        }
        assert!(rel(log_factorial(1030), acc) < 1e-13);
        // accuracy up to 600 against a compensated sum
        let mut s = 0.0f64;
        let mut c = 0.0f64;
        for i in 1..=600 {
            let y = (i as f64).ln() - c;
            let t = s + y;
            c = (t - s) - y;
            s = t;
        }
        assert!(rel(log_factorial(600), s) < 1e-12);
    }

    #[test]
    fn hermite_function_matches_log_normalized_polynomial() {
        for n in 0..=30 {
            for i in 0..=24 {
                let xi = -6.0 + 0.5 * i as f64;
                let ln_norm = -0.5
                    * (0.5 * std::f64::consts::PI.ln() + n as f64 * 2f64.ln() + log_factorial(n));
                let direct = ln_norm.exp() * hermite(n, xi).unwrap() * (-0.5 * xi * xi).exp();
                let stable = hermite_function(n, xi);
                assert!((direct - stable).abs() < 1e-11, "n={n} xi={xi}");
            }
        }
    }
}
