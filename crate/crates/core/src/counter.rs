//! Morris approximate counting.
//!
//! The counter starts at level 1 and advances from level `k` with
//! probability `2^{-k}`. Its level distribution after `n` increments is
//! computed four ways: a forward DP, an alternating closed form, the
//! per-level generating functions `H_l(z)`, and iteration of the bivariate
//! functional equation for `F(z, u)`.

use num_bigint::BigInt;
use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::numerics::{
    binomial_row, qpoch, BiTruncSeries, BigRat, Dyadic, TruncSeries,
};
use crate::sim::{run_trials, BitSource, Histogram, RandomBits};

/// A single streaming counter drawing fair bits from `B`.
pub struct MorrisCounter<B = RandomBits> {
    level: u32,
    bits: B,
}

impl MorrisCounter<RandomBits> {
    pub fn new(seed: u64) -> Self {
        Self::with_bits(RandomBits::new(seed))
    }
}

impl<B: BitSource> MorrisCounter<B> {
    pub fn with_bits(bits: B) -> Self {
        MorrisCounter { level: 1, bits }
    }

    pub fn with_level(level: u32, bits: B) -> Self {
        assert!(level >= 1, "levels start at 1");
        MorrisCounter { level, bits }
    }

    pub fn level(&self) -> u32 {
        self.level
    }

    /// One increment: advance iff `level` fresh fair bits are all zero.
    pub fn step(&mut self) -> u32 {
        if self.bits.all_zero(self.level) {
            self.level += 1;
        }
        self.level
    }

    pub fn run(&mut self, n: u64) -> u32 {
        for _ in 0..n {
            self.step();
        }
        self.level
    }

    pub fn into_bits(self) -> B {
        self.bits
    }
}

/// Exact level distribution after `n` increments: entry `k` is `p(n, k)`,
/// entry 0 is always zero.
pub fn pmf_dp(n: u64) -> Vec<BigRat> {
    pmf_dp_dyadic(n).into_iter().map(BigRat::from).collect()
}

pub fn pmf_dp_dyadic(n: u64) -> Vec<Dyadic> {
    let len = n as usize + 2;
    let mut p = vec![Dyadic::zero(); len];
    p[1] = Dyadic::one();
    for step in 0..n as usize {
        // reachable levels after `step` increments are 1..=step+1
        for k in (1..=step + 2).rev() {
            let stay = &p[k] - &p[k].shr(k as u64);
            let come = if k >= 2 {
                p[k - 1].shr(k as u64 - 1)
            } else {
                Dyadic::zero()
            };
            p[k] = stay + come;
        }
    }
    p
}

/// Floating-point version of [`pmf_dp`]; all terms are positive, so it is
/// stable for large `n`.
pub fn pmf_f64(n: u64) -> Vec<f64> {
    let len = n as usize + 2;
    let mut p = vec![0.0f64; len];
    p[1] = 1.0;
    for step in 0..n as usize {
        let top = (step + 2).min(len - 1);
        for k in (1..=top).rev() {
            let stay = p[k] * (1.0 - 0.5f64.powi(k as i32));
            let come = if k >= 2 {
                p[k - 1] * 0.5f64.powi(k as i32 - 1)
            } else {
                0.0
            };
            p[k] = stay + come;
        }
    }
    p
}

/// `p(n, l) = Σ_{i<l} (-1)^i 2^{-C(i,2)} / (Q_i Q_{l-1-i}) (1 - 2^{-(l-i)})^n`.
///
/// `1/(Q_i Q_{l-1-i})` is the Gaussian binomial `[l-1, i]` at `q = 1/2`
/// over `Q_{l-1}`, so the sum is dyadic and only one rational division
/// remains.
pub fn pmf_closed(n: u64, level: u32) -> Result<BigRat> {
    if level < 1 {
        return Err(Error::InvalidArgument("levels start at 1".into()));
    }
    let l = level as usize;
    let n32 = u32::try_from(n).map_err(|_| Error::InvalidArgument(format!("n={n} too large")))?;
    // Gaussian binomials [m, i] at q = 1/2, built row by row
    let mut gauss = vec![Dyadic::one()];
    for m in 1..l {
        let mut next = vec![Dyadic::one(); m + 1];
        for i in 1..m {
            next[i] = &gauss[i - 1] + &gauss[i].shr(i as u64);
        }
        gauss = next;
    }
    let mut total = Dyadic::zero();
    for (i, g) in gauss.iter().enumerate() {
        let half_pow = (i * i.saturating_sub(1) / 2) as u64;
        let base = Dyadic::new((BigInt::one() << (l - i)) - 1, (l - i) as u64);
        let term = (g * &base.pow(n32)).shr(half_pow);
        total = if i % 2 == 0 { total + term } else { total - term };
    }
    Ok(total.to_rat() / qpoch(l as u64 - 1))
}

/// `H_l(z) = z^{l-1} q^{C(l,2)} / prod_{i=1..l} (1 - (1 - q^i) z)`.
pub fn state_gf(level: u32, order: usize, q: &BigRat) -> Result<TruncSeries> {
    if level < 1 {
        return Err(Error::InvalidArgument("levels start at 1".into()));
    }
    let l = level as usize;
    let mut c = vec![BigRat::zero(); order + 1];
    if l - 1 <= order {
        let e = l * (l - 1) / 2;
        c[l - 1] = num_traits::pow(q.clone(), e);
    }
    let mut qi = BigRat::one();
    for _ in 1..=l {
        qi *= q;
        let a = BigRat::one() - &qi;
        for k in 1..=order {
            let prev = &c[k - 1] * &a;
            c[k] += prev;
        }
    }
    Ok(TruncSeries::from_coeffs(c, order))
}

/// `H_l(z)` at the default `q = 1/2`.
pub fn state_gf_half(level: u32, order: usize) -> Result<TruncSeries> {
    state_gf(level, order, &BigRat::new(1.into(), 2.into()))
}

/// Exact mean level `C_n = 1 - Σ_{k=1..n} (-1)^k C(n,k) 2^{-k} Q_{k-1}`.
pub fn mean_rice(n: u64) -> BigRat {
    mean_rice_dyadic(n).to_rat()
}

/// [`mean_rice`] as a dyadic rational.
///
/// Evaluated in nested form: with `c_k = (-1)^k C(n,k)` and
/// `h_k = (2^k - 1)/2^{k+1}`, the sum is `V_1/2` where `V_n = c_n` and
/// `V_k = c_k + h_k V_{k+1}`. Writing `V_k = B_k / 2^{f_k}` every step is a
/// shift and a subtraction on integers.
pub fn mean_rice_dyadic(n: u64) -> Dyadic {
    if n == 0 {
        return Dyadic::one();
    }
    let row = binomial_row(n);
    let signed = |k: u64| {
        if k.is_multiple_of(2) {
            row[k as usize].clone()
        } else {
            -row[k as usize].clone()
        }
    };
    let mut b = signed(n);
    let mut f: u64 = 0;
    for k in (1..n).rev() {
        let scaled = (&b << k) - &b;
        f += k + 1;
        b = (signed(k) << f) + scaled;
    }
    let s = Dyadic::new(b, f + 1);
    Dyadic::one() - s
}

/// Mean of a level pmf indexed by level.
pub fn pmf_mean(p: &[BigRat]) -> BigRat {
    p.iter()
        .enumerate()
        .map(|(k, x)| x * BigRat::from_integer(BigInt::from(k)))
        .fold(BigRat::zero(), |a, b| a + b)
}

/// Variance of a floating-point level pmf indexed by level.
pub fn pmf_variance_f64(p: &[f64]) -> f64 {
    let mean: f64 = p.iter().enumerate().map(|(k, x)| k as f64 * x).sum();
    p.iter()
        .enumerate()
        .map(|(k, x)| (k as f64 - mean).powi(2) * x)
        .sum()
}

/// Iterates `F(z,u) = u/(1-z) + z(u-1)/(1-z) F(z, u/2)` from `F = 0`.
///
/// Each pass fixes one more power of `z`, and no operation lowers the
/// `u`-degree, so truncating in `u` is exact. Convergence is confirmed by
/// one extra pass that must leave the series unchanged.
pub fn bivariate_iteration(order_z: usize, order_u: usize) -> Result<BiTruncSeries> {
    let half = BigRat::new(1.into(), 2.into());
    let base = BiTruncSeries::monomial(BigRat::one(), 0, 1, order_z, order_u).div_one_minus_first();
    let apply = |f: &BiTruncSeries| {
        let g = f.scale_second(&half);
        let ug = &g.shift(0, 1) - &g;
        &base + &ug.shift(1, 0).div_one_minus_first()
    };
    let mut f = BiTruncSeries::zero(order_z, order_u);
    for _ in 0..=order_z {
        f = apply(&f);
    }
    let again = apply(&f);
    if again != f {
        return Err(Error::NoConvergence(format!(
            "bivariate iteration at orders ({order_z}, {order_u})"
        )));
    }
    Ok(f)
}

/// Level histogram of `trials` independent counters after `n` increments.
pub fn simulate(n: u64, trials: u64, seed: u64) -> Result<Histogram> {
    if trials < 1 {
        return Err(Error::InvalidArgument("trials must be >= 1".into()));
    }
    Ok(run_trials(trials, seed, |bits| {
        let mut level = 1u32;
        for _ in 0..n {
            if bits.all_zero(level) {
                level += 1;
            }
        }
        level as u64
    }))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::numerics::{rat, rat_to_f64};
    use crate::sim::{binomial_z_score, ScriptedBits};

    #[test]
    fn step_examples() {
        let mut c = MorrisCounter::with_bits(ScriptedBits::new(&[0]));
        assert_eq!(c.step(), 2);
        let mut c = MorrisCounter::with_level(3, ScriptedBits::new(&[0, 1, 0]));
        assert_eq!(c.step(), 3);
        let mut c = MorrisCounter::new(2024);
        let level = c.run(100_000);
        assert!((10..=24).contains(&level), "{level}");
    }

    #[test]
    fn dp_examples() {
        assert_eq!(pmf_dp(0)[1], rat(1, 1));
        let p1 = pmf_dp(1);
        assert_eq!((p1[1].clone(), p1[2].clone()), (rat(1, 2), rat(1, 2)));
        let p2 = pmf_dp(2);
        assert_eq!(p2[1..], [rat(1, 4), rat(5, 8), rat(1, 8)]);
    }

    #[test]
    fn closed_form_examples() {
        assert_eq!(pmf_closed(1, 2).unwrap(), rat(1, 2));
        assert_eq!(pmf_closed(2, 2).unwrap(), rat(5, 8));
        assert_eq!(pmf_closed(5, 1).unwrap(), rat(1, 32));
        assert!(pmf_closed(1, 0).is_err());
    }

    #[test]
    fn state_gf_examples() {
        let h1 = state_gf_half(1, 6).unwrap();
        for n in 0..=6 {
            assert_eq!(h1.coeff(n).unwrap(), &BigRat::new(1.into(), BigInt::one() << n));
        }
        let h2 = state_gf_half(2, 4).unwrap();
        assert_eq!(h2.coeff(2), Some(&rat(5, 8)));
        assert_eq!(h2.coeff(0), Some(&rat(0, 1)));
    }

    #[test]
    fn mean_examples() {
        assert_eq!(mean_rice(0), rat(1, 1));
        assert_eq!(mean_rice(1), rat(3, 2));
        assert_eq!(mean_rice(2), rat(15, 8));
    }

    #[test]
    fn bivariate_examples() {
        let f = bivariate_iteration(4, 6).unwrap();
        assert_eq!(f.coeff(0, 1), Some(&rat(1, 1)));
        assert_eq!(f.coeff(1, 2), Some(&rat(1, 2)));
        assert_eq!(f.coeff(2, 3), Some(&rat(1, 8)));
    }

    #[test]
    fn four_routes_agree_small() {
        let order = 16;
        let f = bivariate_iteration(order, order + 1).unwrap();
        let gfs: Vec<_> = (1..=order as u32 + 1)
            .map(|l| state_gf_half(l, order).unwrap())
            .collect();
        for n in 0..=order as u64 {
            let p = pmf_dp(n);
            assert_eq!(p.iter().fold(BigRat::zero(), |a, b| a + b), rat(1, 1));
            assert_eq!(pmf_mean(&p), mean_rice(n));
            for l in 1..=(n as u32 + 1) {
                let v = &p[l as usize];
                assert_eq!(&pmf_closed(n, l).unwrap(), v);
                assert_eq!(gfs[l as usize - 1].coeff(n as usize).unwrap(), v);
                assert_eq!(f.coeff(n as usize, l as usize).unwrap(), v);
            }
        }
    }

    #[test]
    fn float_pmf_tracks_exact() {
        let exact = pmf_dp(40);
        let approx = pmf_f64(40);
        for (a, b) in exact.iter().zip(approx.iter()) {
            assert!((rat_to_f64(a) - b).abs() < 1e-14);
        }
    }

    #[test]
    fn simulation_examples() {
        let h = simulate(0, 100, 5).unwrap();
        assert_eq!(h.count(1), 100);
        let trials = 200_000;
        let h = simulate(2, trials, 1).unwrap();
        assert!(binomial_z_score(h.frequency(2), 0.625, trials) < 5.0);
    }
}
