//! Level-number sequences: `n_1 = 1`, `n_j <= 2 n_{j-1}`, `Σ n_j = n`.
//!
//! `H_n` counts them. `F_k(q, u)` marks the total by `q` and the last entry
//! by `u` over sequences of height `k`; adding a slice maps `F_k` to
//! `F_{k+1}`.

use num_bigint::BigInt;
use num_traits::{One, Zero};

use crate::error::{check_tol, Error, Result};
use crate::numerics::{BiTruncSeries, BigRat, TruncSeries};

/// `H_n` by dynamic programming over (remaining total, last entry).
pub fn count_dp(n: u64) -> Result<BigInt> {
    Ok(count_dp_table(n)?.pop().expect("table is never empty"))
}

/// `H_0..=H_n` with `H_0 = 0`.
pub fn count_dp_table(n: u64) -> Result<Vec<BigInt>> {
    if n < 1 {
        return Err(Error::InvalidArgument("count_dp needs n >= 1".into()));
    }
    let n = n as usize;
    // ways[rem][last]: continuations adding up to exactly `rem`
    let mut ways = vec![vec![BigInt::zero(); n + 1]; n];
    for last in 0..=n {
        ways[0][last] = BigInt::one();
    }
    for rem in 1..n {
        for last in 1..=n {
            let top = (2 * last).min(rem);
            let mut s = BigInt::zero();
            for x in 1..=top {
                s += &ways[rem - x][x];
            }
            ways[rem][last] = s;
        }
    }
    let mut out = vec![BigInt::zero()];
    out.extend((1..=n).map(|m| ways[m - 1][1].clone()));
    Ok(out)
}

/// `F_k(q, u)` truncated at `q^order`, `u^order`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SliceState {
    pub k: u32,
    pub f: BiTruncSeries,
}

impl SliceState {
    /// `F_1 = uq`.
    pub fn first(order: usize) -> Self {
        SliceState {
            k: 1,
            f: BiTruncSeries::monomial(BigRat::one(), 1, 1, order, order),
        }
    }

    /// `F_k(q, 1)`. Exact because no entry exceeds the total.
    pub fn at_u_one(&self) -> TruncSeries {
        self.f.at_second_one()
    }
}

/// Adds a slice: `F_{k+1} = uq/(1-uq) (F_k(q,1) - F_k(q, u²q²))`.
pub fn slice_iterate(s: &SliceState) -> SliceState {
    let order_u = s.f.order2();
    let at_one = BiTruncSeries::from_first(&s.at_u_one(), order_u);
    let squashed = s.f.subst_second_monomial(2, 2);
    let next = (&at_one - &squashed).shift(1, 1).div_one_minus_diag();
    SliceState { k: s.k + 1, f: next }
}

/// `Σ_k F_k(q, 1)` up to `q^order`; heights above `order` contribute
/// nothing there.
pub fn slice_total(order: usize) -> TruncSeries {
    let mut s = SliceState::first(order);
    let mut total = s.at_u_one();
    for _ in 1..order {
        s = slice_iterate(&s);
        total = &total + &s.at_u_one();
    }
    total
}

fn exponent(j: u32) -> usize {
    (1usize << (j + 1)) - j as usize - 2
}

/// Divides by `1 - q^m`.
fn div_one_minus_power(c: &mut [BigRat], m: usize) {
    for k in m..c.len() {
        let prev = c[k - m].clone();
        c[k] += prev;
    }
}

/// `F(q, 1) = N(q) / (1 - D(q))` with
/// `N = Σ_j (-1)^{j+1} q^{2^{j+1}-j-2} / prod_{i=1..j-1} (1 - q^{2^i-1})` and
/// `D` the same sum with the product running to `i = j`. Terms whose leading
/// power exceeds `order` are dropped.
pub fn gf_closed(order: usize) -> TruncSeries {
    let mut num = vec![BigRat::zero(); order + 1];
    let mut den = vec![BigRat::zero(); order + 1];
    den[0] = BigRat::one();
    let mut j = 1u32;
    while exponent(j) <= order {
        let mut term = vec![BigRat::zero(); order + 1];
        term[exponent(j)] = if j % 2 == 1 { BigRat::one() } else { -BigRat::one() };
        for i in 1..j {
            div_one_minus_power(&mut term, (1 << i) - 1);
        }
        for (a, t) in num.iter_mut().zip(&term) {
            *a += t;
        }
        div_one_minus_power(&mut term, (1 << j) - 1);
        for (a, t) in den.iter_mut().zip(&term) {
            *a -= t;
        }
        j += 1;
    }
    let n = TruncSeries::from_coeffs(num, order);
    let d = TruncSeries::from_coeffs(den, order);
    n.div(&d).expect("denominator has constant term 1")
}

/// The closed form's denominator `1 - D(q)` at a real `q` in `(0, 1)`.
///
/// Terms stop once `q^{e_j} < 1e-30`; every skipped term is at most
/// `q^{e_j}/P_inf(q)` and the `e_j` at least double, so the remainder is
/// far below `f64` resolution for the `q` used here.
pub fn closed_denominator(q: f64) -> f64 {
    let mut d = 1.0;
    let mut prod = 1.0;
    let mut j = 1u32;
    loop {
        prod *= 1.0 - q.powi((1 << j) - 1);
        let lead = q.powi(exponent(j) as i32);
        let term = lead / prod;
        d -= if j % 2 == 1 { term } else { -term };
        j += 1;
        if lead < 1e-30 || j > 30 {
            return d;
        }
    }
}

/// Smallest positive zero of [`closed_denominator`], by a scan for the
/// first sign change and bisection down to `tol`.
pub fn dominant_pole(tol: f64) -> Result<f64> {
    check_tol(tol)?;
    let step = 1.0 / 256.0;
    let mut lo = step;
    if closed_denominator(lo) <= 0.0 {
        return Err(Error::NoConvergence("denominator not positive near 0".into()));
    }
    let mut hi = lo;
    loop {
        hi += step;
        if hi >= 1.0 {
            return Err(Error::NoConvergence("no sign change in (0, 1)".into()));
        }
        if closed_denominator(hi) <= 0.0 {
            break;
        }
        lo = hi;
    }
    while hi - lo > tol {
        let mid = 0.5 * (lo + hi);
        if closed_denominator(mid) > 0.0 {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    Ok(0.5 * (lo + hi))
}

/// Growth diagnostics at `n`: `H_n / H_{n-1}` and `H_n ρ^n`.
#[derive(Clone, Debug, PartialEq)]
pub struct GrowthFit {
    pub n: u64,
    pub h_n: BigInt,
    pub rate: f64,
    pub amplitude: f64,
    pub pole: f64,
}

pub fn growth_fit(n: u64) -> Result<GrowthFit> {
    if n < 2 {
        return Err(Error::InvalidArgument("growth_fit needs n >= 2".into()));
    }
    let h = count_dp_table(n)?;
    let pole = dominant_pole(1e-14)?;
    let hn = crate::numerics::big_to_f64(&h[n as usize]);
    let prev = crate::numerics::big_to_f64(&h[n as usize - 1]);
    Ok(GrowthFit {
        n,
        h_n: h[n as usize].clone(),
        rate: hn / prev,
        amplitude: hn * pole.powi(n as i32),
        pole,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::numerics::rat;

    const START: [i64; 11] = [1, 1, 2, 3, 5, 9, 16, 28, 50, 89, 159];

    #[test]
    fn dp_examples() {
        assert_eq!(count_dp(1).unwrap(), BigInt::from(1));
        assert_eq!(count_dp(5).unwrap(), BigInt::from(5));
        assert_eq!(count_dp(8).unwrap(), BigInt::from(28));
        let t = count_dp_table(11).unwrap();
        for (i, v) in START.iter().enumerate() {
            assert_eq!(t[i + 1], BigInt::from(*v));
        }
        assert!(count_dp(0).is_err());
    }

    #[test]
    fn closed_form_examples() {
        let g = gf_closed(12);
        assert_eq!(g.coeff(0), Some(&rat(0, 1)));
        for (i, v) in START.iter().enumerate() {
            assert_eq!(g.coeff(i + 1), Some(&rat(*v, 1)));
        }
    }

    #[test]
    fn slice_examples() {
        let f2 = slice_iterate(&SliceState::first(6));
        assert_eq!(f2.k, 2);
        assert_eq!(f2.f.coeff(2, 1), Some(&rat(1, 1)));
        assert_eq!(f2.f.coeff(3, 2), Some(&rat(1, 1)));
        let total = slice_total(5);
        assert_eq!(total.coeff(5), Some(&rat(5, 1)));
        // heights above n contribute nothing at q^n
        let mut s = SliceState::first(6);
        for _ in 1..7 {
            s = slice_iterate(&s);
        }
        assert_eq!(s.k, 7);
        assert!(s.at_u_one().coeffs().iter().all(|c| c == &rat(0, 1)));
    }

    #[test]
    fn three_routes_agree() {
        let order = 24;
        let dp = count_dp_table(order as u64).unwrap();
        let g = gf_closed(order);
        let s = slice_total(order);
        for n in 1..=order {
            let h = BigRat::from_integer(dp[n].clone());
            assert_eq!(g.coeff(n), Some(&h), "closed n={n}");
            assert_eq!(s.coeff(n), Some(&h), "slices n={n}");
        }
    }

    #[test]
    fn pole_and_growth() {
        let p = dominant_pole(1e-12).unwrap();
        assert!((p - 0.557_367_871_9).abs() < 1e-8, "{p}");
        let g = growth_fit(60).unwrap();
        assert!((g.rate - 1.794_147).abs() < 1e-4, "{}", g.rate);
        assert!((g.amplitude - 0.254_50).abs() < 1e-3, "{}", g.amplitude);
        assert!((1.0 / p - g.rate).abs() < 1e-4);
    }
}
