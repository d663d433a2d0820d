//! Binary digit functions, Gray code, the merge sum, and a numeric check
//! of the Mellin–Perron formula for finite Dirichlet polynomials.

use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_complex::Complex64;
use num_traits::{ToPrimitive, Zero};

use crate::error::{check_tol, Error, Result};
use crate::numerics::{binomial_row, rat_to_f64, row_entry, BigRat};

/// 2-adic valuation (trailing zeros) of `k >= 1`; `v2(0)` is 0 by
/// convention.
pub fn v2(k: u64) -> u32 {
    if k == 0 {
        0
    } else {
        k.trailing_zeros()
    }
}

/// Binary digit sum.
pub fn s2(n: u64) -> u32 {
    n.count_ones()
}

/// `Σ_{m<n} S₂(m)`, counted bit by bit.
pub fn delange_sum(n: u64) -> BigInt {
    let mut total = BigInt::zero();
    for i in 0..64 {
        let block = 1u128 << (i + 1);
        let half = 1u128 << i;
        let n = n as u128;
        if half > n {
            break;
        }
        let full = (n / block) * half;
        let rest = (n % block).saturating_sub(half);
        total += full + rest;
    }
    total
}

/// `(Σ_{m<n} S₂(m) - (n/2) log₂ n) / n`, the periodic part at `log₂ n`.
pub fn delange_f(n: u64) -> Result<f64> {
    if n < 1 {
        return Err(Error::InvalidArgument("delange_F needs n >= 1".into()));
    }
    let s = delange_sum(n).to_f64().unwrap_or(f64::INFINITY);
    let nf = n as f64;
    Ok((s - 0.5 * nf * nf.log2()) / nf)
}

/// `+1` if the odd part of `k` is `1 mod 4`, `-1` if it is `3 mod 4`.
pub fn theta_sign(k: u64) -> Result<i32> {
    if k == 0 {
        return Err(Error::InvalidArgument("theta needs k >= 1".into()));
    }
    let odd = k >> k.trailing_zeros();
    Ok(if odd % 4 == 1 { 1 } else { -1 })
}

/// Gray-code bit `a_k = ⌊(n + 3·2^k)/2^{k+2}⌋ - ⌊(n + 2^k)/2^{k+2}⌋`.
pub fn gray_bit(n: u64, k: u32) -> bool {
    let n = n as u128;
    let p = 1u128 << k;
    (n + 3 * p) / (4 * p) != (n + p) / (4 * p)
}

/// Gray-code bits of `n`, least significant first, as many as `n` has
/// binary digits (one zero bit for `n = 0`).
pub fn gray_bits(n: u64) -> Vec<bool> {
    let len = (64 - n.leading_zeros()).max(1);
    (0..len).map(|k| gray_bit(n, k)).collect()
}

/// Gray code of `n` as an integer.
pub fn gray_value(n: u64) -> u64 {
    gray_bits(n)
        .iter()
        .enumerate()
        .fold(0, |acc, (k, &b)| acc | (b as u64) << k)
}

/// Number of one bits in the Gray code of `n`.
pub fn s_gray(n: u64) -> u32 {
    gray_bits(n).iter().filter(|&&b| b).count() as u32
}

/// Outcome of the Gray-code scan over `1..=checked`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GrayTelescope {
    pub checked: u64,
    pub first_failure: Option<u64>,
}

/// Checks, for every `n <= max_n`, that one Gray bit flips from `n-1` to
/// `n`, that `S_GR(n) - S_GR(n-1) = θ(n)` and that `S_GR(n) = Σ_{m<=n} θ(m)`.
pub fn gray_telescope_check(max_n: u64) -> Result<GrayTelescope> {
    if max_n < 1 {
        return Err(Error::InvalidArgument("gray_telescope_check needs N >= 1".into()));
    }
    let mut prev_code = gray_value(0);
    let mut prev_sum = s_gray(0) as i64;
    let mut theta_total = 0i64;
    for n in 1..=max_n {
        let code = gray_value(n);
        let sum = s_gray(n) as i64;
        let theta = theta_sign(n)? as i64;
        theta_total += theta;
        let ok = (code ^ prev_code).count_ones() == 1 && sum - prev_sum == theta && sum == theta_total;
        if !ok {
            return Ok(GrayTelescope {
                checked: n,
                first_failure: Some(n),
            });
        }
        prev_code = code;
        prev_sum = sum;
    }
    Ok(GrayTelescope {
        checked: max_n,
        first_failure: None,
    })
}

/// `Σ_{k>=1} θ(k) C(2n, n-k)`.
pub fn merge_sum(n: u64) -> Result<BigInt> {
    if n < 1 {
        return Err(Error::InvalidArgument("merge_sum needs n >= 1".into()));
    }
    let row = binomial_row(2 * n);
    let mut s = BigInt::zero();
    for k in 1..=n {
        let c = &row[(n - k) as usize];
        if theta_sign(k)? > 0 {
            s += c;
        } else {
            s -= c;
        }
    }
    Ok(s)
}

/// [`merge_sum`] after summation by parts against `S_GR`:
/// `Σ_k S_GR(k) [C(2n, n-k) - C(2n, n-k-1)]`.
pub fn merge_sum_by_parts(n: u64) -> Result<BigInt> {
    if n < 1 {
        return Err(Error::InvalidArgument("merge_sum needs n >= 1".into()));
    }
    let row = binomial_row(2 * n);
    let ni = n as i64;
    let mut s = BigInt::zero();
    for k in 1..=ni {
        let diff = row_entry(&row, ni - k) - row_entry(&row, ni - k - 1);
        s += diff * s_gray(k as u64);
    }
    Ok(s)
}

/// Digit functions tabulated over `0..=n`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DigitFn {
    pub v2: Vec<u32>,
    pub nu: Vec<u32>,
    pub s2: Vec<u64>,
    pub theta: Vec<i32>,
    pub s_gray: Vec<u32>,
}

impl DigitFn {
    /// Entry 0 of `v2` and `theta` is a placeholder 0. `s2` is built from
    /// `S₂(n) = n - Σ_{k<=n} v₂(k)`, not from the digit sum.
    pub fn new(n: u64) -> Self {
        let len = n as usize + 1;
        let mut t = DigitFn {
            v2: vec![0; len],
            nu: vec![0; len],
            s2: vec![0; len],
            theta: vec![0; len],
            s_gray: vec![0; len],
        };
        let mut v_total = 0u64;
        for m in 0..=n {
            let i = m as usize;
            t.nu[i] = crate::fm::nu(m);
            t.s_gray[i] = s_gray(m);
            if m >= 1 {
                t.v2[i] = v2(m);
                v_total += t.v2[i] as u64;
                t.theta[i] = theta_sign(m).expect("m >= 1");
            }
            t.s2[i] = m - v_total;
        }
        t
    }

    pub fn len(&self) -> usize {
        self.v2.len()
    }

    pub fn is_empty(&self) -> bool {
        self.v2.is_empty()
    }

    /// First `n` at which an identity linking the columns fails.
    pub fn first_inconsistency(&self) -> Option<u64> {
        for i in 1..self.len() {
            let ok = self.s2[i] as i64 - self.s2[i - 1] as i64 == 1 - self.v2[i] as i64
                && self.s2[i] == self.nu[i] as u64
                && self.s_gray[i] as i64 - self.s_gray[i - 1] as i64 == self.theta[i] as i64;
            if !ok {
                return Some(i as u64);
            }
        }
        None
    }
}

/// Finitely supported coefficients `λ_k`.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct FiniteDirichlet {
    pub support: BTreeMap<u64, BigRat>,
}

impl FiniteDirichlet {
    pub fn new(pairs: &[(u64, BigRat)]) -> Result<Self> {
        let mut support = BTreeMap::new();
        for (k, v) in pairs {
            if *k < 1 {
                return Err(Error::InvalidArgument("Dirichlet indices start at 1".into()));
            }
            if !v.is_zero() {
                support.insert(*k, v.clone());
            }
        }
        Ok(FiniteDirichlet { support })
    }

    /// `Σ λ_k k^{-s}`.
    pub fn eval(&self, s: Complex64) -> Complex64 {
        self.support
            .iter()
            .map(|(k, v)| rat_to_f64(v) * (-s * (*k as f64).ln()).exp())
            .sum()
    }
}

/// `(1/m!) Σ_{1<=k<n} λ_k (1 - k/n)^m`, plus `λ_n/2` when `m = 0`.
pub fn perron_lhs(lambda: &FiniteDirichlet, n: u64, m: u32) -> Result<BigRat> {
    if n < 1 {
        return Err(Error::InvalidArgument("perron_lhs needs n >= 1".into()));
    }
    let nn = BigRat::from_integer(BigInt::from(n));
    let mut fact = BigInt::from(1);
    for i in 2..=m {
        fact *= i;
    }
    let mut s = BigRat::zero();
    for (k, v) in lambda.support.range(..n) {
        let w = BigRat::from_integer(1.into()) - BigRat::from_integer(BigInt::from(*k)) / &nn;
        s += v * num_traits::pow(w, m as usize);
    }
    s /= BigRat::from_integer(fact);
    if m == 0 {
        if let Some(v) = lambda.support.get(&n) {
            s += v / BigRat::from_integer(2.into());
        }
    }
    Ok(s)
}

const GL8: [(f64, f64); 4] = [
    (0.183_434_642_495_649_8, 0.362_683_783_378_362),
    (0.525_532_409_916_329, 0.313_706_645_877_887_3),
    (0.796_666_477_413_626_7, 0.222_381_034_453_374_5),
    (0.960_289_856_497_536_2, 0.101_228_536_290_376_3),
];

/// Upper estimate of the part of the integral above height `T`, summed
/// over the support. With `x = n/k`, `a = ln x` and integration by parts:
/// `m = 0` gives `2x^c/(π|a|T)` (`c/(πT)` when `a = 0`), `m = 1` gives
/// `2x^c/(π|a|T²)` (`x^c/(πT)` when `a = 0`).
pub fn perron_tail_estimate(lambda: &FiniteDirichlet, n: u64, m: u32, c: f64, t: f64) -> f64 {
    let pi = std::f64::consts::PI;
    lambda
        .support
        .iter()
        .map(|(k, v)| {
            let x = n as f64 / *k as f64;
            let a = x.ln().abs();
            let w = rat_to_f64(v).abs() * x.powf(c);
            match (m, a == 0.0) {
                (0, false) => 2.0 * w / (pi * a * t),
                (0, true) => c / (pi * t) * rat_to_f64(v).abs(),
                (_, false) => 2.0 * w / (pi * a * t * t),
                (_, true) => w / (pi * t),
            }
        })
        .sum()
}

/// `(1/2πi) ∫_{c-iT}^{c+iT} D(s) n^s ds / (s(s+1)...(s+m))` for `m ∈ {0, 1}`.
///
/// The integrand at `c - it` is the conjugate of the one at `c + it`, so the
/// segment integral is `(1/π) ∫_0^T Re[...] dt`; that is computed with
/// 8-point Gauss–Legendre panels short enough to resolve the fastest
/// oscillation. Fails with [`Error::Truncation`] when the tail estimate of
/// [`perron_tail_estimate`] exceeds `tol`, suggesting a height that would
/// meet it.
pub fn perron_rhs_numeric(
    lambda: &FiniteDirichlet,
    n: u64,
    m: u32,
    c: f64,
    height: f64,
    tol: f64,
) -> Result<f64> {
    check_tol(tol)?;
    if m > 1 {
        return Err(Error::InvalidArgument(format!("perron_rhs_numeric supports m in {{0, 1}}, got {m}")));
    }
    if !(c > 0.0) || !(height > 0.0) || n < 1 {
        return Err(Error::InvalidArgument(format!(
            "perron_rhs_numeric needs c > 0, T > 0, n >= 1; got c={c}, T={height}, n={n}"
        )));
    }
    let estimate = perron_tail_estimate(lambda, n, m, c, height);
    if estimate > tol {
        let factor = estimate / tol * 1.25;
        let suggested = if m == 0 { height * factor } else { height * factor.sqrt() };
        return Err(Error::Truncation {
            estimate,
            tol,
            suggested_height: suggested,
        });
    }
    let terms: Vec<(f64, f64)> = lambda
        .support
        .iter()
        .map(|(k, v)| (rat_to_f64(v), (n as f64 / *k as f64).ln()))
        .collect();
    let max_freq = terms.iter().map(|(_, a)| a.abs()).fold(0.0, f64::max);
    // about 2 radians of phase per panel, and panels short against the
    // distance `c` from the line to the pole at s = 0
    let h = if max_freq > 0.0 { (2.0 / max_freq).min(0.5 * c) } else { 0.5 * c };
    let panels = (height / h).ceil() as u64;
    let h = height / panels as f64;
    let integrand = |t: f64| -> f64 {
        let s = Complex64::new(c, t);
        let num: Complex64 = terms
            .iter()
            .map(|(v, a)| *v * (s * *a).exp())
            .sum();
        let den = if m == 0 { s } else { s * (s + 1.0) };
        (num / den).re
    };
    let mut total = 0.0;
    for p in 0..panels {
        let mid = (p as f64 + 0.5) * h;
        let half = 0.5 * h;
        let mut panel = 0.0;
        for (x, w) in GL8 {
            panel += w * (integrand(mid - half * x) + integrand(mid + half * x));
        }
        total += panel * half;
    }
    Ok(total / std::f64::consts::PI)
}

/// [`perron_rhs_numeric`] starting at height `start`, raised to the
/// suggested height until the tail estimate fits `tol`.
pub fn perron_rhs_auto(lambda: &FiniteDirichlet, n: u64, m: u32, c: f64, start: f64, tol: f64) -> Result<(f64, f64)> {
    let mut height = start;
    for _ in 0..8 {
        match perron_rhs_numeric(lambda, n, m, c, height, tol) {
            Ok(v) => return Ok((v, height)),
            Err(Error::Truncation { suggested_height, .. }) => height = suggested_height,
            Err(e) => return Err(e),
        }
    }
    Err(Error::NoConvergence("Perron height escalation".into()))
}

/// One finite `λ` with the point `n` and Cesàro order `m` to test.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PerronCase {
    pub name: String,
    pub lambda: FiniteDirichlet,
    pub n: u64,
    pub m: u32,
}

/// Outcome of one [`PerronCase`]: exact left side, numeric right side, the
/// height used and `|lhs - rhs|`.
#[derive(Clone, Debug, PartialEq)]
pub struct PerronCheck {
    pub case: String,
    pub lhs: BigRat,
    pub rhs: f64,
    pub height: f64,
    pub err: f64,
    pub pass: bool,
}

/// Twelve cases: single terms, jumps landing exactly on `n` (`m = 0`),
/// signed and fractional coefficients, and indices close to `n = 64`.
pub fn perron_battery() -> Vec<PerronCase> {
    use crate::numerics::rat;
    let ones: Vec<(u64, BigRat)> = (1..=8).map(|k| (k, rat(1, 1))).collect();
    let mobius = [(1, rat(1, 1)), (2, rat(-1, 1)), (3, rat(-1, 1)), (5, rat(-1, 1)), (6, rat(1, 1))];
    let cases: Vec<(&str, Vec<(u64, BigRat)>, u64, u32)> = vec![
        ("delta1-n4-m1", vec![(1, rat(1, 1))], 4, 1),
        ("delta1-n2-m0", vec![(1, rat(1, 1))], 2, 0),
        ("delta2-n2-m0", vec![(2, rat(1, 1))], 2, 0),
        ("ones3-n3-m0", vec![(1, rat(1, 1)), (2, rat(1, 1)), (3, rat(1, 1))], 3, 0),
        ("alt2-n5-m0", vec![(1, rat(1, 1)), (2, rat(-1, 1))], 5, 0),
        ("frac-n7-m1", vec![(1, rat(1, 2)), (3, rat(2, 1))], 7, 1),
        ("mobius6-n10-m0", mobius.to_vec(), 10, 0),
        ("mobius6-n10-m1", mobius.to_vec(), 10, 1),
        ("delta4-n64-m1", vec![(4, rat(3, 1))], 64, 1),
        ("ones8-n8-m0", ones, 8, 0),
        ("pair-n33-m1", vec![(1, rat(1, 1)), (16, rat(-1, 3))], 33, 1),
        ("near-n64-m0", vec![(2, rat(1, 2)), (9, rat(5, 7)), (63, rat(-1, 1))], 64, 0),
    ];
    cases.into_iter()
        .map(|(name, pairs, n, m)| PerronCase {
            name: name.to_string(),
            lambda: FiniteDirichlet::new(&pairs).expect("indices are positive"),
            n,
            m,
        })
        .collect()
}

/// Runs one case on the line `Re s = c`; the truncation budget is half of
/// `tol`.
pub fn perron_check(case: &PerronCase, c: f64, tol: f64) -> Result<PerronCheck> {
    let lhs = perron_lhs(&case.lambda, case.n, case.m)?;
    let (rhs, height) = perron_rhs_auto(&case.lambda, case.n, case.m, c, 100.0, tol / 2.0)?;
    let err = (rat_to_f64(&lhs) - rhs).abs();
    Ok(PerronCheck {
        case: case.name.clone(),
        lhs,
        rhs,
        height,
        err,
        pass: err <= tol,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::numerics::rat;

    #[test]
    fn valuation_and_digit_sum() {
        assert_eq!(v2(12), 2);
        assert_eq!(v2(1), 0);
        let vs: u32 = (1..=4).map(v2).sum();
        assert_eq!(4 - vs, 1);
        assert_eq!(s2(4), 1);
        for k in 1..1000u64 {
            assert_eq!(v2(2 * k), 1 + v2(k));
        }
    }

    #[test]
    fn delange() {
        assert_eq!(delange_sum(4), BigInt::from(4));
        assert_eq!(delange_sum(2), BigInt::from(1));
        let mut direct = 0u64;
        for n in 1..5000u64 {
            direct += s2(n - 1) as u64;
            assert_eq!(delange_sum(n), BigInt::from(direct));
        }
        for j in 0..40 {
            assert_eq!(delange_f(1 << j).unwrap(), 0.0);
        }
        for n in 1..(1u64 << 16) {
            assert!(delange_f(n).unwrap().abs() <= 0.5);
        }
    }

    #[test]
    fn theta_examples() {
        assert_eq!(theta_sign(1).unwrap(), 1);
        assert_eq!(theta_sign(6).unwrap(), -1);
        assert_eq!(theta_sign(12).unwrap(), -1);
        assert_eq!(theta_sign(2).unwrap(), 1);
        assert!(theta_sign(0).is_err());
    }

    #[test]
    fn gray_examples() {
        assert_eq!(gray_bits(6), vec![true, false, true]);
        assert_eq!(s_gray(6), 2);
        assert_eq!(gray_bits(0), vec![false]);
        assert_eq!(s_gray(6) as i32 - s_gray(5) as i32, theta_sign(6).unwrap());
        assert_eq!(s_gray(1) as i32, theta_sign(1).unwrap());
        for n in 0..100_000u64 {
            assert_eq!(gray_value(n), n ^ (n >> 1));
        }
    }

    #[test]
    fn gray_scan() {
        let r = gray_telescope_check(100_000).unwrap();
        assert_eq!(r.first_failure, None);
        assert_eq!(r.checked, 100_000);
    }

    #[test]
    fn table_consistency() {
        let t = DigitFn::new(100_000);
        assert_eq!(t.first_inconsistency(), None);
    }

    #[test]
    fn merge_examples() {
        assert_eq!(merge_sum(1).unwrap(), BigInt::from(1));
        assert_eq!(merge_sum(2).unwrap(), BigInt::from(5));
        for n in 1..=200 {
            assert_eq!(merge_sum(n).unwrap(), merge_sum_by_parts(n).unwrap());
        }
    }

    fn single(k: u64) -> FiniteDirichlet {
        FiniteDirichlet::new(&[(k, rat(1, 1))]).unwrap()
    }

    #[test]
    fn perron_lhs_examples() {
        assert_eq!(perron_lhs(&single(1), 4, 1).unwrap(), rat(3, 4));
        assert_eq!(perron_lhs(&single(1), 2, 0).unwrap(), rat(1, 1));
        assert_eq!(perron_lhs(&single(2), 2, 0).unwrap(), rat(1, 2));
        let empty = FiniteDirichlet::default();
        assert_eq!(perron_lhs(&empty, 5, 0).unwrap(), rat(0, 1));
        assert_eq!(perron_lhs(&empty, 5, 1).unwrap(), rat(0, 1));
    }

    #[test]
    fn perron_rhs_examples() {
        let (v, _) = perron_rhs_auto(&single(1), 4, 1, 1.0, 100.0, 1e-6).unwrap();
        assert!((v - 0.75).abs() < 1e-6, "{v}");
        let (v, _) = perron_rhs_auto(&single(1), 2, 0, 1.0, 100.0, 1e-4).unwrap();
        assert!((v - 1.0).abs() < 1e-4, "{v}");
        let (v, _) = perron_rhs_auto(&single(2), 2, 1, 1.0, 100.0, 1e-6).unwrap();
        assert!(v.abs() < 1e-6, "{v}");
    }

    #[test]
    fn perron_battery_passes() {
        let cases = perron_battery();
        assert_eq!(cases.len(), 12);
        for case in &cases {
            let r = perron_check(case, 1.0, 1e-4).unwrap();
            assert!(r.pass, "{r:?}");
        }
    }

    #[test]
    fn perron_truncation_reported() {
        let err = perron_rhs_numeric(&single(1), 4, 0, 1.0, 10.0, 1e-6).unwrap_err();
        match err {
            Error::Truncation { estimate, suggested_height, .. } => {
                assert!(estimate > 1e-6);
                assert!(suggested_height > 10.0);
            }
            other => panic!("unexpected {other:?}"),
        }
    }
}
