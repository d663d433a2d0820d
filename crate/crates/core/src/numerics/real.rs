//! Real-valued special functions with explicit error control.
//!
//! Only what the checks need: `ldexp`, Euler's constant, `ln Γ`/`Γ` on the
//! positive axis, and `ζ(s)` for real `s > 1`.

use crate::error::{check_tol, Error, Result};

/// `x * 2^e` without intermediate overflow.
pub fn ldexp(mut x: f64, mut e: i64) -> f64 {
    let big = 2f64.powi(1000);
    let small = 2f64.powi(-1000);
    while e > 1000 {
        x *= big;
        e -= 1000;
        if x.is_infinite() {
            return x;
        }
    }
    while e < -1000 {
        x *= small;
        e += 1000;
        if x == 0.0 {
            return x;
        }
    }
    x * 2f64.powi(e as i32)
}

/// Euler–Mascheroni constant from the Euler–Maclaurin expansion
/// `γ = H_N - ln N - 1/(2N) + 1/(12N²) - 1/(120N⁴) + ε`, `|ε| <= 1/(252 N⁶)`.
pub fn euler_gamma(tol: f64) -> Result<f64> {
    check_tol(tol)?;
    let need = (1.0 / (252.0 * tol)).powf(1.0 / 6.0).ceil();
    let n = need.clamp(10.0, 1e6) as u64;
    let harmonic: f64 = (1..=n).rev().map(|k| 1.0 / k as f64).sum();
    let nf = n as f64;
    let n2 = nf * nf;
    Ok(harmonic - nf.ln() - 1.0 / (2.0 * nf) + 1.0 / (12.0 * n2) - 1.0 / (120.0 * n2 * n2))
}

const STIRLING: [f64; 7] = [
    1.0 / 6.0,
    -1.0 / 30.0,
    1.0 / 42.0,
    -1.0 / 30.0,
    5.0 / 66.0,
    -691.0 / 2730.0,
    7.0 / 6.0,
];

/// `ln Γ(x)` for `x > 0`.
///
/// Shifts the argument to `y >= 12` and applies the Stirling series with
/// six Bernoulli corrections; the omitted term `B_14/(182 y^13)` is below
/// `1e-16` there.
pub fn ln_gamma(x: f64) -> Result<f64> {
    if !(x > 0.0) || !x.is_finite() {
        return Err(Error::InvalidArgument(format!(
            "ln_gamma needs a positive finite argument, got {x}"
        )));
    }
    let mut y = x;
    let mut shift = 0.0;
    while y < 12.0 {
        shift += y.ln();
        y += 1.0;
    }
    let mut series = 0.0;
    let mut pow = y;
    let y2 = y * y;
    for (k, b) in STIRLING.iter().take(6).enumerate() {
        let k = (k + 1) as f64;
        series += b / (2.0 * k * (2.0 * k - 1.0) * pow);
        pow *= y2;
    }
    let half_ln_2pi = 0.5 * (2.0 * std::f64::consts::PI).ln();
    Ok((y - 0.5) * y.ln() - y + half_ln_2pi + series - shift)
}

/// `Γ(x)` for `x > 0`.
pub fn gamma(x: f64) -> Result<f64> {
    Ok(ln_gamma(x)?.exp())
}

/// Riemann `ζ(s)` for real `s > 1`, through the alternating eta series
/// `η(s) = Σ (-1)^{n-1} n^{-s} = (1 - 2^{1-s}) ζ(s)`.
///
/// The eta tail is bounded by its first omitted term; it is divided by
/// `1 - 2^{1-s}` to get the bound on `ζ`.
pub fn zeta(s: f64, tol: f64) -> Result<f64> {
    check_tol(tol)?;
    if !(s > 1.0) {
        return Err(Error::InvalidArgument(format!("zeta needs s > 1, got {s}")));
    }
    let factor = 1.0 - 2f64.powf(1.0 - s);
    let n = ((tol * factor).powf(-1.0 / s)).ceil().max(2.0);
    if n > 5e7 {
        return Err(Error::NoConvergence(format!(
            "eta series for s={s} at tol={tol:e}"
        )));
    }
    let n = n as u64;
    let eta: f64 = (1..=n)
        .rev()
        .map(|k| {
            let t = (k as f64).powf(-s);
            if k % 2 == 1 {
                t
            } else {
                -t
            }
        })
        .sum();
    Ok(eta / factor)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn ldexp_extremes() {
        assert_eq!(ldexp(1.0, 3), 8.0);
        assert_eq!(ldexp(1.5, -1), 0.75);
        assert_eq!(ldexp(1.0, 5000), f64::INFINITY);
        assert_eq!(ldexp(1.0, -5000), 0.0);
        assert_eq!(ldexp(3.0, 2000 - 1999), 6.0);
    }

    #[test]
    fn euler_constant() {
        let g = euler_gamma(1e-14).unwrap();
        assert!((g - 0.577_215_664_901_532_9).abs() < 1e-13);
    }

    #[test]
    fn gamma_known_values() {
        assert!((gamma(0.5).unwrap() - std::f64::consts::PI.sqrt()).abs() < 1e-13);
        assert!((gamma(5.0).unwrap() - 24.0).abs() < 1e-11);
        assert!((gamma(0.25).unwrap() - 3.625_609_908_221_908).abs() < 1e-12);
        assert!(gamma(-1.0).is_err());
    }

    #[test]
    fn zeta_known_values() {
        let pi = std::f64::consts::PI;
        assert!((zeta(2.0, 1e-10).unwrap() - pi * pi / 6.0).abs() < 1e-10);
        assert!((zeta(3.0, 1e-12).unwrap() - 1.202_056_903_159_594_2).abs() < 1e-12);
        assert!((zeta(4.0, 1e-12).unwrap() - pi.powi(4) / 90.0).abs() < 1e-12);
        assert!(zeta(1.0, 1e-6).is_err());
    }
}
