//! Exact rational arithmetic and the small set of shared quantities every
//! other module is built on.

mod biseries;
mod dyadic;
pub mod real;
mod series;

pub use biseries::BiTruncSeries;
pub use dyadic::Dyadic;
pub use series::{series_arith, SeriesOp, TruncSeries};

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::error::{check_tol, Error, Result};

/// Arbitrary-precision rational, always kept in lowest terms with a positive
/// denominator.
pub type BigRat = BigRational;

pub fn rat(n: i64, d: i64) -> BigRat {
    BigRat::new(BigInt::from(n), BigInt::from(d))
}

pub fn rat_int<T: Into<BigInt>>(n: T) -> BigRat {
    BigRat::from_integer(n.into())
}

/// Formats a rational as `num/den`, or just `num` for integers.
pub fn fmt_rat(r: &BigRat) -> String {
    if r.denom().is_one() {
        r.numer().to_string()
    } else {
        format!("{}/{}", r.numer(), r.denom())
    }
}

/// Binomial coefficient `C(n, k)`, zero when `k < 0` or `k > n`.
pub fn binomial(n: i64, k: i64) -> Result<BigInt> {
    if n < 0 {
        return Err(Error::Negative { what: "n", value: n });
    }
    if k < 0 || k > n {
        return Ok(BigInt::zero());
    }
    let k = k.min(n - k);
    let mut acc = BigInt::one();
    for i in 0..k {
        acc *= n - i;
        acc /= i + 1;
    }
    Ok(acc)
}

/// The full row `C(n, 0), ..., C(n, n)`.
pub fn binomial_row(n: u64) -> Vec<BigInt> {
    let mut row = Vec::with_capacity(n as usize + 1);
    let mut c = BigInt::one();
    row.push(c.clone());
    for k in 1..=n {
        c *= n - k + 1;
        c /= k;
        row.push(c.clone());
    }
    row
}

/// Looks up `C(n, k)` in a row from [`binomial_row`], zero outside `0..=n`.
pub fn row_entry(row: &[BigInt], k: i64) -> BigInt {
    if k < 0 || k as usize >= row.len() {
        BigInt::zero()
    } else {
        row[k as usize].clone()
    }
}

pub fn catalan(n: u64) -> BigInt {
    binomial_row(2 * n)[n as usize].clone() / (n + 1)
}

/// Generalized harmonic number `H_n^{(j)} = sum_{k<=n} k^{-j}`.
pub fn harmonic(n: u64, j: u32) -> Result<BigRat> {
    if j < 1 {
        return Err(Error::InvalidArgument(format!(
            "harmonic order must be >= 1, got {j}"
        )));
    }
    // Sum over a common denominator, reduce once.
    let mut num = BigInt::zero();
    let mut den = BigInt::one();
    for k in 1..=n {
        let kj = BigInt::from(k).pow(j);
        let g = den.gcd(&kj);
        let scale = &kj / &g;
        num = num * &scale + &den / &g;
        den *= scale;
    }
    Ok(BigRat::new(num, den))
}

/// `Q_n = prod_{i=1..n} (1 - 2^{-i})` as a dyadic rational.
pub fn qpoch_dyadic(n: u64) -> Dyadic {
    let mut num = BigInt::one();
    for i in 1..=n {
        num = (&num << i) - &num;
    }
    Dyadic::new(num, n * (n + 1) / 2)
}

/// `Q_n = prod_{i=1..n} (1 - 2^{-i})`, with `Q_0 = 1`.
pub fn qpoch(n: u64) -> BigRat {
    qpoch_dyadic(n).to_rat()
}

/// All of `Q_0, ..., Q_n`.
pub fn qpoch_table(n: u64) -> Vec<BigRat> {
    let mut out = Vec::with_capacity(n as usize + 1);
    let mut q = BigRat::one();
    out.push(q.clone());
    for i in 1..=n {
        q *= BigRat::one() - BigRat::new(BigInt::one(), BigInt::one() << i);
        out.push(q.clone());
    }
    out
}

/// `Q_inf = prod_{k>=1} (1 - 2^{-k})`.
///
/// The dropped factors satisfy `1 >= prod_{k>K} (1 - 2^{-k}) >= 1 - 2^{-K}`,
/// so stopping once `2^{-K} < tol` bounds the absolute error by `tol`.
pub fn q_infinity(tol: f64) -> Result<f64> {
    check_tol(tol)?;
    let mut prod = 1.0f64;
    let mut k = 0i32;
    loop {
        k += 1;
        prod *= 1.0 - 0.5f64.powi(k);
        if 0.5f64.powi(k) < tol || k >= 1000 {
            return Ok(prod);
        }
    }
}

/// `alpha = sum_{k>=1} 1/(2^k - 1)`; the tail after `K` terms is below
/// `2^{1-K}`.
pub fn alpha_constant(tol: f64) -> Result<f64> {
    check_tol(tol)?;
    let mut sum = 0.0f64;
    let mut k = 0i32;
    loop {
        k += 1;
        sum += 1.0 / (2.0f64.powi(k) - 1.0);
        if 2.0 * 0.5f64.powi(k) < tol || k >= 1000 {
            return Ok(sum);
        }
    }
}

/// Exact rational to `f64`, correct to a couple of ulps even when numerator
/// and denominator have millions of bits.
pub fn rat_to_f64(r: &BigRat) -> f64 {
    ratio_to_f64(r.numer(), r.denom())
}

pub fn ratio_to_f64(num: &BigInt, den: &BigInt) -> f64 {
    if num.is_zero() {
        return 0.0;
    }
    let negative = num.is_negative() != den.is_negative();
    let (num, den) = (num.abs(), den.abs());
    // Scale so that the integer quotient carries about 66 significant bits.
    let shift = den.bits() as i64 - num.bits() as i64 + 66;
    let q = if shift >= 0 {
        (num << shift as u64) / den
    } else {
        num / (den << (-shift) as u64)
    };
    let v = real::ldexp(big_to_f64(&q), -shift);
    if negative {
        -v
    } else {
        v
    }
}

/// Nearest `f64` to an integer of any size (top 64 bits kept).
pub fn big_to_f64(n: &BigInt) -> f64 {
    let bits = n.bits();
    if bits <= 64 {
        let (sign, digits) = n.to_u64_digits();
        let m = digits.first().copied().unwrap_or(0) as f64;
        return if sign == num_bigint::Sign::Minus { -m } else { m };
    }
    let drop = bits - 64;
    let top: BigInt = n >> drop;
    real::ldexp(big_to_f64(&top), drop as i64)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn binomial_small_cases() {
        assert_eq!(binomial(4, 2).unwrap(), BigInt::from(6));
        assert_eq!(binomial(6, -1).unwrap(), BigInt::zero());
        assert_eq!(binomial(6, 7).unwrap(), BigInt::zero());
        assert!(matches!(binomial(-1, 0), Err(Error::Negative { .. })));
    }

    #[test]
    fn central_binomial_digit_count_matches_stirling() {
        let c = binomial(8192, 4096).unwrap();
        let digits = c.to_string().len();
        assert_eq!(digits, 2464);
        // log10 C(2m, m) ~ 2m log10 2 - 0.5 log10(pi m)
        let m = 4096f64;
        let est = 2.0 * m * 2f64.log10() - 0.5 * (std::f64::consts::PI * m).log10();
        assert_eq!(est.floor() as usize + 1, digits);
    }

    #[test]
    fn pascal_rule_holds_up_to_100() {
        for n in 1..=100i64 {
            for k in 0..=n {
                assert_eq!(
                    binomial(n, k).unwrap(),
                    binomial(n - 1, k - 1).unwrap() + binomial(n - 1, k).unwrap()
                );
            }
        }
    }

    #[test]
    fn binomial_row_matches_pointwise() {
        let row = binomial_row(30);
        for k in 0..=30 {
            assert_eq!(row[k as usize], binomial(30, k).unwrap());
        }
        assert_eq!(row_entry(&row, -1), BigInt::zero());
        assert_eq!(row_entry(&row, 31), BigInt::zero());
    }

    #[test]
    fn harmonic_values() {
        assert_eq!(harmonic(2, 1).unwrap(), rat(3, 2));
        assert_eq!(harmonic(0, 5).unwrap(), rat(0, 1));
        assert_eq!(harmonic(3, 2).unwrap(), rat(49, 36));
        assert!(harmonic(3, 0).is_err());
    }

    #[test]
    fn harmonic_telescopes() {
        for j in 1..=4u32 {
            let mut prev = harmonic(0, j).unwrap();
            for n in 1..=200u64 {
                let h = harmonic(n, j).unwrap();
                let step = BigRat::new(BigInt::one(), BigInt::from(n).pow(j));
                assert_eq!(&h - &prev, step);
                prev = h;
            }
        }
    }

    #[test]
    fn qpoch_values_and_recurrence() {
        assert_eq!(qpoch(0), rat(1, 1));
        assert_eq!(qpoch(2), rat(3, 8));
        assert_eq!(qpoch(3), rat(21, 64));
        let table = qpoch_table(64);
        for n in 1..=64u64 {
            let factor = BigRat::one() - BigRat::new(BigInt::one(), BigInt::one() << n);
            assert_eq!(qpoch(n), qpoch(n - 1) * factor);
            assert_eq!(table[n as usize], qpoch(n));
        }
    }

    #[test]
    fn q_infinity_and_alpha() {
        let q = q_infinity(1e-6).unwrap();
        assert!((q - 0.288788).abs() < 1e-6);
        let loose = q_infinity(0.1).unwrap();
        assert!((loose - 0.288788).abs() <= 0.1);
        let ratio = q_infinity(1e-12).unwrap() / rat_to_f64(&qpoch(40));
        assert!((ratio - 1.0).abs() < 1e-9);

        let a = alpha_constant(1e-10).unwrap();
        assert!((a - 1.6066951524).abs() < 1e-9);
        let loose = alpha_constant(0.1).unwrap();
        assert!((loose - 1.606695).abs() <= 0.1);
        assert!(q_infinity(0.0).is_err());
        assert!(alpha_constant(f64::NAN).is_err());
    }

    #[test]
    fn huge_ratio_conversion() {
        let num = (BigInt::one() << 100_000u32) * 3;
        let den = BigInt::one() << 100_001u32;
        assert_eq!(ratio_to_f64(&num, &den), 1.5);
        assert_eq!(ratio_to_f64(&BigInt::from(-1), &BigInt::from(3)), -1.0 / 3.0);
        assert_eq!(big_to_f64(&BigInt::from(-7)), -7.0);
    }
}
