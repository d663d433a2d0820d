//! Probabilistic counting with a bitmap of geometric urns.
//!
//! Each distinct item lands in urn `i` with probability `2^{-(i+1)}`; the
//! statistic `R` is the index of the first empty urn. This module has the
//! sketch itself, the exact law of `R` (the probabilities
//! `q(n, k) = P(R >= k)`), its mean, the Thue–Morse machinery behind the
//! alternating formula, `ψ(x)`, the Dirichlet series `N(s)` and the
//! correction product.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use crate::error::{check_tol, Error, Result};
use crate::numerics::{binomial_row, rat_to_f64, BigRat};
use crate::sim::{run_trials, BitSource, Histogram};

pub const DEFAULT_WIDTH: usize = 64;

/// Bitmap of occupied urns `0..width`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct UrnSketch {
    words: Vec<u64>,
    width: usize,
    overflow: bool,
}

impl Default for UrnSketch {
    fn default() -> Self {
        Self::new(DEFAULT_WIDTH)
    }
}

impl UrnSketch {
    pub fn new(width: usize) -> Self {
        assert!(width >= 1, "sketch needs at least one urn");
        UrnSketch {
            words: vec![0; width.div_ceil(64)],
            width,
            overflow: false,
        }
    }

    pub fn width(&self) -> usize {
        self.width
    }

    /// Whether some draw fell beyond the last urn and was clamped.
    pub fn overflowed(&self) -> bool {
        self.overflow
    }

    pub fn is_set(&self, i: usize) -> bool {
        i < self.width && self.words[i / 64] >> (i % 64) & 1 == 1
    }

    /// Marks urn `g`; draws past the last urn saturate there.
    pub fn insert(&mut self, g: u32) {
        let mut i = g as usize;
        if i >= self.width {
            i = self.width - 1;
            self.overflow = true;
        }
        self.words[i / 64] |= 1 << (i % 64);
    }

    /// Index of the first empty urn (`width` if all are occupied).
    pub fn observe_r(&self) -> usize {
        for (w, word) in self.words.iter().enumerate() {
            if *word != u64::MAX {
                return (w * 64 + word.trailing_ones() as usize).min(self.width);
            }
        }
        self.width
    }

    /// Union of two sketches of the same width.
    pub fn merge(&self, other: &UrnSketch) -> Result<UrnSketch> {
        if self.width != other.width {
            return Err(Error::InvalidArgument(format!(
                "cannot merge sketches of widths {} and {}",
                self.width, other.width
            )));
        }
        Ok(UrnSketch {
            words: self.words.iter().zip(&other.words).map(|(a, b)| a | b).collect(),
            width: self.width,
            overflow: self.overflow || other.overflow,
        })
    }

    /// Little-endian bit order: bit `b` of byte `i` is urn `8i + b`.
    pub fn to_bytes(&self) -> Vec<u8> {
        let mut out: Vec<u8> = self.words.iter().flat_map(|w| w.to_le_bytes()).collect();
        out.truncate(self.width.div_ceil(8));
        out
    }

    pub fn from_bytes(width: usize, bytes: &[u8]) -> Result<UrnSketch> {
        if bytes.len() != width.div_ceil(8) {
            return Err(Error::InvalidArgument(format!(
                "{} bytes do not encode a width-{width} sketch",
                bytes.len()
            )));
        }
        let mut s = UrnSketch::new(width);
        for (i, byte) in bytes.iter().enumerate() {
            for b in 0..8 {
                if byte >> b & 1 == 1 {
                    let urn = 8 * i + b;
                    if urn >= width {
                        return Err(Error::InvalidArgument("bit set past the last urn".into()));
                    }
                    s.words[urn / 64] |= 1 << (urn % 64);
                }
            }
        }
        Ok(s)
    }
}

/// Urn index of one item: the number of failures before the first success
/// of a fair coin.
pub fn geometric_draw<B: BitSource>(bits: &mut B) -> u32 {
    bits.geometric()
}

/// Binary digit sum.
pub fn nu(j: u64) -> u32 {
    j.count_ones()
}

/// Thue–Morse sign `(-1)^{ν(j)}`.
pub fn tm_sign(j: u64) -> i32 {
    if nu(j).is_multiple_of(2) {
        1
    } else {
        -1
    }
}

/// `q(n, k) = P(urns 0..k-1 are all occupied after n items)`, exactly.
///
/// `q(n, 0) = 1`, and `q(n, k) = 0` whenever `k > n` (including `n = 0`).
/// Otherwise uses [`q_exact_direct`] for small `k` and [`q_exact_moments`]
/// beyond.
pub fn q_exact(n: u64, k: u32) -> BigRat {
    if k == 0 {
        return BigRat::one();
    }
    if k as u64 > n {
        return BigRat::zero();
    }
    if k <= 10 {
        q_exact_direct(n, k)
    } else {
        QMoments::new(n as usize, k as usize).q(n as usize, k as usize)
    }
}

/// `Σ_{0 <= j < 2^k} (-1)^{ν(j)} (1 - j/2^k)^n` over the common
/// denominator `2^{kn}`.
pub fn q_exact_direct(n: u64, k: u32) -> BigRat {
    if k == 0 {
        return BigRat::one();
    }
    let m = 1u64 << k;
    let mut num = BigInt::zero();
    for j in 0..m {
        let t = num_traits::pow(BigInt::from(m - j), n as usize);
        if tm_sign(j) > 0 {
            num += t;
        } else {
            num -= t;
        }
    }
    BigRat::new(num, BigInt::one() << (k as u64 * n))
}

/// Power sums `T_k(m) = Σ_{j < 2^k} (-1)^{ν(j)} j^m` for `m <= m_max`,
/// `k <= k_max`, from `T_0(m) = 0^m` and
/// `T_{k+1}(m) = -Σ_{r<m} C(m,r) 2^{k(m-r)} T_k(r)`.
///
/// Expanding `(1 - j/2^k)^n` binomially then gives
/// `q(n,k) = Σ_m C(n,m) (-1)^m 2^{-km} T_k(m)`.
pub struct QMoments {
    t: Vec<Vec<BigInt>>,
    binom: Vec<Vec<BigInt>>,
}

impl QMoments {
    pub fn new(m_max: usize, k_max: usize) -> Self {
        let binom: Vec<Vec<BigInt>> = (0..=m_max as u64).map(binomial_row).collect();
        let mut t = Vec::with_capacity(k_max + 1);
        let mut t0 = vec![BigInt::zero(); m_max + 1];
        t0[0] = BigInt::one();
        t.push(t0);
        for k in 0..k_max {
            let prev: &Vec<BigInt> = &t[k];
            let next: Vec<BigInt> = (0..=m_max)
                .map(|m| {
                    let mut s = BigInt::zero();
                    for r in 0..m {
                        if !prev[r].is_zero() {
                            s += (&binom[m][r] * &prev[r]) << (k * (m - r));
                        }
                    }
                    -s
                })
                .collect();
            t.push(next);
        }
        QMoments { t, binom }
    }

    pub fn power_sum(&self, k: usize, m: usize) -> &BigInt {
        &self.t[k][m]
    }

    /// `q(n, k)`; needs `n <= m_max`, `k <= k_max`.
    pub fn q(&self, n: usize, k: usize) -> BigRat {
        if k == 0 {
            return BigRat::one();
        }
        if n == 0 {
            return BigRat::zero();
        }
        // common denominator 2^{kn}
        let mut num = BigInt::zero();
        for m in 0..=n {
            let t = &self.t[k][m];
            if t.is_zero() {
                continue;
            }
            let term = (&self.binom[n][m] * t) << (k * (n - m));
            if m % 2 == 0 {
                num += term;
            } else {
                num -= term;
            }
        }
        BigRat::new(num, BigInt::one() << (k * n))
    }
}

/// `q(n, k)` by enumerating every assignment of `n` items to urns
/// `0..k-1` or the tail beyond, for `n <= 8`, `k <= 4`.
pub fn q_oracle(n: u64, k: u32) -> Result<BigRat> {
    if n > 8 || k > 4 {
        return Err(Error::LimitExceeded {
            requested: n.max(k as u64),
            limit: if n > 8 { 8 } else { 4 },
        });
    }
    let (n, k) = (n as usize, k as usize);
    let outcomes = k + 1;
    let total = outcomes.pow(n as u32);
    // urn i has weight 2^{k-(i+1)} over 2^k, the tail weight 1 over 2^k
    let weight = |o: usize| -> u64 {
        if o < k {
            1 << (k - o - 1)
        } else {
            1
        }
    };
    let full = (1u32 << k) - 1;
    let mut num = BigInt::zero();
    let mut digits = vec![0usize; n];
    for _ in 0..total {
        let mut covered = 0u32;
        let mut w = BigInt::one();
        for &o in &digits {
            if o < k {
                covered |= 1 << o;
            }
            w *= weight(o);
        }
        if covered == full {
            num += w;
        }
        for d in digits.iter_mut() {
            *d += 1;
            if *d < outcomes {
                break;
            }
            *d = 0;
        }
    }
    Ok(BigRat::new(num, BigInt::one() << (k * n)))
}

/// `q(n, k)` from conditioning on urn 0: the items that miss it are a
/// binomial(n, 1/2) subset that must cover the next `k - 1` urns, so
/// `q(n, k) = Σ_{m<n} C(n,m) 2^{-n} q(m, k-1)`. Returns `q(m, k)` for all
/// `m <= n_max`, `k <= k_max`.
pub fn q_table_dp(n_max: usize, k_max: usize) -> Vec<Vec<BigRat>> {
    let rows: Vec<Vec<BigInt>> = (0..=n_max as u64).map(binomial_row).collect();
    let mut q = vec![vec![BigRat::zero(); k_max + 1]; n_max + 1];
    for row in q.iter_mut() {
        row[0] = BigRat::one();
    }
    for k in 1..=k_max {
        for n in 1..=n_max {
            let mut s = BigRat::zero();
            for m in 0..n {
                if !q[m][k - 1].is_zero() {
                    s += &q[m][k - 1] * BigRat::from_integer(rows[n][m].clone());
                }
            }
            q[n][k] = s / BigRat::from_integer(BigInt::one() << n);
        }
    }
    q
}

/// Largest `n` for which [`mean_r`] sums exact rationals.
pub const MEAN_R_EXACT_LIMIT: u64 = 64;

/// Exact `E[R] = Σ_{k=1..n} q(n, k)`.
pub fn mean_r_exact(n: u64) -> BigRat {
    if n == 0 {
        return BigRat::zero();
    }
    let qm = QMoments::new(n as usize, n as usize);
    (1..=n as usize).fold(BigRat::zero(), |acc, k| acc + qm.q(n as usize, k))
}

/// Number of `k` terms kept by [`mean_r_dp`]: `ceil(log2 n) + 40`.
pub fn mean_r_cutoff(n: u64) -> usize {
    (64 - (n.max(1) - 1).leading_zeros()) as usize + 40
}

/// `Σ_{k=1..K} q(n, k)` in floating point through the positive recursion
/// of [`q_table_dp`]. Binomial weights come from log-factorials and are
/// generated by ratio from the row mode. Dropped terms satisfy
/// `q(n, k) <= n 2^{1-k}`.
pub fn mean_r_dp(n: u64, k_cut: usize) -> f64 {
    let n = n as usize;
    let kk = k_cut + 1;
    let mut lf = vec![0.0f64; n + 1];
    for i in 1..=n {
        lf[i] = lf[i - 1] + (i as f64).ln();
    }
    let ln2 = std::f64::consts::LN_2;
    // a[m * kk + k] = q(m, k)
    let mut a = vec![0.0f64; (n + 1) * kk];
    a[0] = 1.0;
    let mut row = vec![0.0f64; n + 1];
    for size in 1..=n {
        let mode = size / 2;
        row[mode] = (lf[size] - lf[mode] - lf[size - mode] - size as f64 * ln2).exp();
        for m in (0..mode).rev() {
            row[m] = row[m + 1] * (m + 1) as f64 / (size - m) as f64;
        }
        for m in mode + 1..=size {
            row[m] = row[m - 1] * (size - m + 1) as f64 / m as f64;
        }
        let (done, rest) = a.split_at_mut(size * kk);
        let target = &mut rest[..kk];
        target[0] = 1.0;
        for m in 0..size {
            let w = row[m];
            if w < 1e-300 {
                continue;
            }
            let src = &done[m * kk..(m + 1) * kk];
            for k in 1..kk {
                target[k] += w * src[k - 1];
            }
        }
    }
    a[n * kk + 1..(n + 1) * kk].iter().sum()
}

/// `E[R]` after `n` distinct items.
///
/// Exact up to [`MEAN_R_EXACT_LIMIT`] (then rounded); beyond, the floating
/// recursion [`mean_r_dp`] truncated at [`mean_r_cutoff`] terms, whose
/// dropped tail is below `n 2^{2-K}`.
pub fn mean_r(n: u64, tol: f64) -> Result<f64> {
    check_tol(tol)?;
    if n < 1 {
        return Err(Error::InvalidArgument("mean_R needs n >= 1".into()));
    }
    if n <= MEAN_R_EXACT_LIMIT {
        return Ok(rat_to_f64(&mean_r_exact(n)));
    }
    let k_cut = mean_r_cutoff(n);
    let tail = n as f64 * 2f64.powi(2 - k_cut as i32);
    if tail > tol {
        return Err(Error::NoConvergence(format!(
            "mean_R tail bound {tail:e} exceeds tol {tol:e}"
        )));
    }
    Ok(mean_r_dp(n, k_cut))
}

/// `2^{E[R] - log2 n}`, whose limit is the correction constant.
pub fn fm_constant_empirical(n: u64, tol: f64) -> Result<f64> {
    Ok(2f64.powf(mean_r(n, tol)? - (n as f64).log2()))
}

/// `ψ(x) = prod_{j>=0} (1 - e^{-x 2^j})`. The omitted factors lie in
/// `[1 - e^{-x2^J}/(1 - e^{-x2^J}), 1]`.
pub fn psi_product(x: f64, tol: f64) -> Result<f64> {
    check_tol(tol)?;
    if !(x > 0.0) {
        return Err(Error::InvalidArgument(format!("psi needs x > 0, got {x}")));
    }
    let mut prod = 1.0;
    let mut j = 0i32;
    loop {
        let e = (-x * 2f64.powi(j)).exp();
        prod *= -(-x * 2f64.powi(j)).exp_m1();
        j += 1;
        let next = (-x * 2f64.powi(j)).exp();
        if next / (1.0 - next) <= tol || e == 0.0 {
            return Ok(prod);
        }
        if j > 1100 {
            return Err(Error::NoConvergence(format!("psi product at x={x}")));
        }
    }
}

/// `ψ(x) = Σ_{j>=0} (-1)^{ν(j)} e^{-jx}`; the tail from `J` is at most
/// `e^{-Jx}/(1 - e^{-x})`.
pub fn psi_series(x: f64, tol: f64) -> Result<f64> {
    check_tol(tol)?;
    if !(x > 0.0) {
        return Err(Error::InvalidArgument(format!("psi needs x > 0, got {x}")));
    }
    let denom = -(-x).exp_m1();
    let j_max = ((1.0 / (tol * denom)).ln() / x).ceil().max(1.0);
    if j_max > 1e8 {
        return Err(Error::NoConvergence(format!("psi series at x={x}")));
    }
    let j_max = j_max as u64;
    let mut s = 0.0;
    for j in (0..j_max).rev() {
        s += tm_sign(j) as f64 * (-(j as f64) * x).exp();
    }
    Ok(s)
}

/// `ψ(x)` to `tol`, cross-checked between the two forms.
pub fn psi(x: f64, tol: f64) -> Result<f64> {
    let p = psi_product(x, tol)?;
    let s = psi_series(x, tol)?;
    if (p - s).abs() > 2.0 * tol {
        return Err(Error::NoConvergence(format!(
            "psi forms disagree at x={x}: {p} vs {s}"
        )));
    }
    Ok(p)
}

/// `N(s) = Σ_{j>=1} (-1)^{ν(j)} j^{-s}` summed directly, `s > 1`.
///
/// Consecutive pairs `2i, 2i+1` carry opposite signs, so the tail from an
/// even `J` is bounded by `J^{-s}`.
pub fn dirichlet_n_direct(s: f64, tol: f64) -> Result<f64> {
    check_tol(tol)?;
    if !(s > 1.0) {
        return Err(Error::InvalidArgument(format!(
            "direct N(s) needs s > 1, got {s}"
        )));
    }
    let j = tol.powf(-1.0 / s).ceil();
    if j > 5e8 {
        return Err(Error::NoConvergence(format!("direct N({s}) at tol={tol:e}")));
    }
    let j = (j as u64 + 1) & !1;
    Ok(dirichlet_n_partial(s, j))
}

/// `Σ_{1 <= j < terms} (-1)^{ν(j)} j^{-s}`.
pub fn dirichlet_n_partial(s: f64, terms: u64) -> f64 {
    let mut acc = 0.0;
    for j in (1..terms).rev() {
        acc += tm_sign(j) as f64 * (j as f64).powf(-s);
    }
    acc
}

/// One group `(4j)^{-s} [1 - (1+a)^{-s} - (1+2a)^{-s} + (1+3a)^{-s}]`,
/// `a = 1/(4j)`, without its sign.
fn grouped_term(s: f64, j: u64) -> f64 {
    let a = 1.0 / (4.0 * j as f64);
    let e = |t: f64| (-s * (t * a).ln_1p()).exp_m1();
    (4.0 * j as f64).powf(-s) * (-e(1.0) - e(2.0) + e(3.0))
}

/// `N(s)` from four-term groups, valid for `s > 0`.
///
/// The bracket lies in `[0, 2s(s+1)a²]`, so the tail past `J` is at most
/// `s 4^{-s} J^{-s-1} / 8`.
pub fn dirichlet_n_accelerated(s: f64, tol: f64) -> Result<f64> {
    check_tol(tol)?;
    if !(s > 0.0) {
        return Err(Error::InvalidArgument(format!("N(s) needs s > 0, got {s}")));
    }
    let c = s * 4f64.powf(-s) / 8.0;
    let j = (c / tol).powf(1.0 / (s + 1.0)).ceil().max(1.0);
    if j > 5e8 {
        return Err(Error::NoConvergence(format!("accelerated N({s}) at tol={tol:e}")));
    }
    Ok(dirichlet_n_grouped(s, j as u64))
}

/// Head `-1 - 2^{-s} + 3^{-s}` plus groups `1..=groups`.
pub fn dirichlet_n_grouped(s: f64, groups: u64) -> f64 {
    let mut acc = 0.0;
    for j in (1..=groups).rev() {
        acc += tm_sign(j) as f64 * grouped_term(s, j);
    }
    acc + (-1.0 - 2f64.powf(-s) + 3f64.powf(-s))
}

/// `N(s)` by the grouped form, checked against the direct sum for `s > 1`.
pub fn dirichlet_n(s: f64, tol: f64) -> Result<f64> {
    let a = dirichlet_n_accelerated(s, tol)?;
    if s > 1.0 && tol.powf(-1.0 / s) <= 1e7 {
        let d = dirichlet_n_direct(s, tol)?;
        if (a - d).abs() > 2.0 * tol {
            return Err(Error::NoConvergence(format!(
                "N({s}) routes disagree: {a} vs {d}"
            )));
        }
    }
    Ok(a)
}

/// Partial product `prod_{p=1..terms} [(4p+1)(4p+2)/((4p)(4p+3))]^{(-1)^{ν(p)}}`.
pub fn fm_product_exact(terms: u64) -> Result<BigRat> {
    if terms < 1 {
        return Err(Error::InvalidArgument("fm_product needs terms >= 1".into()));
    }
    let mut acc = BigRat::one();
    for p in 1..=terms {
        let p = BigInt::from(p);
        let num: BigInt = (&p * 4 + 1) * (&p * 4 + 2);
        let den: BigInt = (&p * 4) * (&p * 4 + 3);
        let g = num.gcd(&den);
        let f = BigRat::new(&num / &g, &den / &g);
        let positive = nu(p.magnitude().iter_u64_digits().next().unwrap_or(0)).is_multiple_of(2);
        acc *= if positive { f } else { f.recip() };
    }
    debug_assert!(acc.is_positive());
    Ok(acc)
}

/// Floating version of [`fm_product_exact`] for many terms.
pub fn fm_product(terms: u64) -> Result<f64> {
    if terms < 1 {
        return Err(Error::InvalidArgument("fm_product needs terms >= 1".into()));
    }
    let mut ln = 0.0;
    for p in (1..=terms).rev() {
        let x = 4.0 * p as f64;
        // ln[(x+1)(x+2)/(x(x+3))] = ln(1 + 2/(x(x+3)))
        let f = (2.0 / (x * (x + 3.0))).ln_1p();
        ln += tm_sign(p) as f64 * f;
    }
    Ok(ln.exp())
}

/// Empirical distribution of `R` over `trials` sketches fed `n` distinct
/// items each.
pub fn simulate_fm(n: u64, trials: u64, seed: u64) -> Result<Histogram> {
    if trials < 1 {
        return Err(Error::InvalidArgument("trials must be >= 1".into()));
    }
    Ok(run_trials(trials, seed, |bits| {
        let mut sketch = UrnSketch::default();
        for _ in 0..n {
            sketch.insert(geometric_draw(bits));
        }
        sketch.observe_r() as u64
    }))
}
