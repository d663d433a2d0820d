//! Harmonic-number identities, Euler sums, Ramanujan's `Q` and `R`, the
//! tree function and a quadrature check of Ramanujan's master theorem.

use num_bigint::BigInt;
use num_traits::{One, Zero};

use crate::error::{check_tol, Error, Result};
use crate::numerics::{binomial_row, harmonic, rat_to_f64, real, BigRat, TruncSeries};

/// `Σ_{k=1..n} C(n,k) (-1)^{k-1} / k^m`.
pub fn alt_binom_sum(n: u64, m: u32) -> Result<BigRat> {
    if n < 1 || m < 1 {
        return Err(Error::InvalidArgument(format!(
            "alt_binom_sum needs n, m >= 1, got n={n}, m={m}"
        )));
    }
    let row = binomial_row(n);
    let mut s = BigRat::zero();
    for k in 1..=n {
        let term = BigRat::new(row[k as usize].clone(), BigInt::from(k).pow(m));
        if k % 2 == 1 {
            s += term;
        } else {
            s -= term;
        }
    }
    Ok(s)
}

/// `H_n^{(1)}, ..., H_n^{(m_max)}`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct HarmonicProfile {
    pub n: u64,
    pub h: Vec<BigRat>,
}

impl HarmonicProfile {
    pub fn new(n: u64, m_max: u32) -> Result<Self> {
        let h = (1..=m_max).map(|j| harmonic(n, j)).collect::<Result<_>>()?;
        Ok(HarmonicProfile { n, h })
    }

    /// `H_n^{(j)}`, `j >= 1`.
    pub fn get(&self, j: usize) -> &BigRat {
        &self.h[j - 1]
    }
}

/// `[z^m] exp{Σ_{j>=1} H_n^{(j)} z^j / j}` by truncated series exponential.
pub fn harmonic_exp_extract(n: u64, m: u32) -> Result<BigRat> {
    if n < 1 || m < 1 {
        return Err(Error::InvalidArgument(format!(
            "harmonic_exp_extract needs n, m >= 1, got n={n}, m={m}"
        )));
    }
    let profile = HarmonicProfile::new(n, m)?;
    let order = m as usize;
    let mut c = vec![BigRat::zero(); order + 1];
    for j in 1..=order {
        c[j] = profile.get(j) / BigRat::from_integer(BigInt::from(j));
    }
    let e = TruncSeries::from_coeffs(c, order).exp()?;
    Ok(e.coeff(order).cloned().unwrap_or_else(BigRat::zero))
}

/// The three low-order evaluations written in harmonic numbers:
/// `H`, `(H² + H⁽²⁾)/2`, `H³/6 + H H⁽²⁾/2 + H⁽³⁾/3`.
pub fn harmonic_polynomial(n: u64, m: u32) -> Result<BigRat> {
    let p = HarmonicProfile::new(n, 3)?;
    let (h1, h2, h3) = (p.get(1), p.get(2), p.get(3));
    let r = |a: i64, b: i64| BigRat::new(a.into(), b.into());
    match m {
        1 => Ok(h1.clone()),
        2 => Ok((h1 * h1 + h2) * r(1, 2)),
        3 => Ok(h1 * h1 * h1 * r(1, 6) + h1 * h2 * r(1, 2) + h3 * r(1, 3)),
        _ => Err(Error::InvalidArgument(format!(
            "explicit evaluation only for m in 1..=3, got {m}"
        ))),
    }
}

/// Certified value of an infinite sum.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Bracketed {
    pub value: f64,
    /// Bound on `|value - true sum|`.
    pub error: f64,
    pub terms: u64,
}

/// `∫_a^∞ ln x / x^q dx`.
fn int_log_over_pow(a: f64, q: f64) -> f64 {
    a.powf(1.0 - q) * (a.ln() / (q - 1.0) + 1.0 / ((q - 1.0) * (q - 1.0)))
}

/// `∫_a^∞ x^{-q} dx`.
fn int_pow(a: f64, q: f64) -> f64 {
    a.powf(1.0 - q) / (q - 1.0)
}

/// `S_{p,q} = Σ_{n>=1} H_n^{(p)} / n^q` with a certified tail.
///
/// After `N` terms the tail is bracketed by integral comparison. For `p = 1`,
/// `ln n + γ <= H_n <= ln n + γ + 1/(2n)` and `(ln x + γ)/x^q` decreases for
/// `x >= 2`. For `p >= 2`, `H_{N+1}^{(p)} <= H_n^{(p)} <= ζ(p)` for `n > N`.
/// The midpoint of the bracket is returned.
pub fn euler_sum_bracketed(p: u32, q: u32, tol: f64) -> Result<Bracketed> {
    check_tol(tol)?;
    if q < 2 {
        return Err(Error::InvalidArgument(format!("Euler sum needs q >= 2, got {q}")));
    }
    if p < 1 {
        return Err(Error::InvalidArgument(format!("Euler sum needs p >= 1, got {p}")));
    }
    let gamma = real::euler_gamma(1e-15)?;
    let zeta_tol = tol * 1e-3;
    let zeta_p = if p >= 2 { real::zeta(p as f64, zeta_tol)? } else { 0.0 };
    let qf = q as f64;
    let mut n_terms: u64 = 64;
    loop {
        let mut partial = 0.0;
        let mut h = 0.0;
        // forward pass for H_n^{(p)}, collecting terms for a reverse sum
        let mut terms = Vec::with_capacity(n_terms as usize);
        for n in 1..=n_terms {
            h += (n as f64).powi(-(p as i32));
            terms.push(h / (n as f64).powi(q as i32));
        }
        for t in terms.iter().rev() {
            partial += t;
        }
        let nf = n_terms as f64;
        let (lo, hi) = if p == 1 {
            let lo = int_log_over_pow(nf + 1.0, qf) + gamma * int_pow(nf + 1.0, qf);
            let hi = int_log_over_pow(nf, qf) + gamma * int_pow(nf, qf) + 0.5 * int_pow(nf, qf + 1.0);
            (lo, hi + 1e-15)
        } else {
            let h_next = h + (nf + 1.0).powi(-(p as i32));
            (
                h_next * int_pow(nf + 1.0, qf),
                (zeta_p + zeta_tol) * int_pow(nf, qf),
            )
        };
        let half_width = 0.5 * (hi - lo);
        let rounding = 4.0 * f64::EPSILON * n_terms as f64 * partial.abs();
        let error = half_width + rounding + if p >= 2 { zeta_tol } else { 0.0 };
        if error <= tol {
            return Ok(Bracketed {
                value: partial + 0.5 * (lo + hi),
                error,
                terms: n_terms,
            });
        }
        if n_terms > 1 << 26 {
            return Err(Error::NoConvergence(format!("S_({p},{q}) at tol={tol:e}")));
        }
        n_terms *= 2;
    }
}

pub fn euler_sum(p: u32, q: u32, tol: f64) -> Result<f64> {
    Ok(euler_sum_bracketed(p, q, tol)?.value)
}

/// Known zeta-value evaluations: `S_{1,2} = 2ζ(3)`, `S_{1,3} = 5ζ(4)/4`,
/// `S_{2,4} = ζ(3)² - ζ(6)/3`.
pub fn euler_sum_target(p: u32, q: u32, tol: f64) -> Result<Option<f64>> {
    let z = |s: f64| real::zeta(s, tol * 1e-2);
    Ok(match (p, q) {
        (1, 2) => Some(2.0 * z(3.0)?),
        (1, 3) => Some(1.25 * z(4.0)?),
        (2, 4) => {
            let z3 = z(3.0)?;
            Some(z3 * z3 - z(6.0)? / 3.0)
        }
        _ => None,
    })
}

/// `Q(n) = 1 + (n-1)/n + (n-1)(n-2)/n² + ...`, a finite sum.
pub fn ramanujan_q(n: u64) -> Result<BigRat> {
    if n < 1 {
        return Err(Error::InvalidArgument("Q(n) needs n >= 1".into()));
    }
    let nn = BigRat::from_integer(BigInt::from(n));
    let mut t = BigRat::one();
    let mut s = BigRat::zero();
    for k in 1..=n {
        s += &t;
        t = t * BigRat::from_integer(BigInt::from(n - k)) / &nn;
    }
    Ok(s)
}

/// `R(n) = 1 + n/(n+1) + n²/((n+1)(n+2)) + ...` to `tol`.
///
/// Term ratios `n/(n+k+1)` decrease, so the remainder after `t_K` is at most
/// `t_{K+1} / (1 - n/(n+K+2))`.
pub fn ramanujan_r(n: u64, tol: f64) -> Result<f64> {
    check_tol(tol)?;
    if n < 1 {
        return Err(Error::InvalidArgument("R(n) needs n >= 1".into()));
    }
    let nf = n as f64;
    let mut terms = vec![1.0f64];
    let mut t = 1.0;
    let mut k = 0u64;
    loop {
        k += 1;
        t *= nf / (nf + k as f64);
        let tail = t / (1.0 - nf / (nf + k as f64 + 1.0));
        if tail < tol {
            break;
        }
        terms.push(t);
        if k > 100_000_000 {
            return Err(Error::NoConvergence(format!("R({n})")));
        }
    }
    Ok(terms.iter().rev().sum())
}

/// `n! e^n / n^n` as `e^n Π_{k<=n} k/n`.
pub fn qr_sum_target(n: u64) -> f64 {
    let nf = n as f64;
    let mut prod = 1.0;
    for k in 1..=n {
        prod *= (k as f64 / nf) * std::f64::consts::E;
    }
    prod
}

/// `D = R(n) - Q(n)`, `θ = D/2` and `k` from `D = 2/3 + 8/(135(n+k))`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct ThetaK {
    pub n: u64,
    pub d: f64,
    pub theta: f64,
    pub k: f64,
}

pub fn theta_k(n: u64) -> Result<ThetaK> {
    let q = rat_to_f64(&ramanujan_q(n)?);
    let r = ramanujan_r(n, 1e-17)?;
    let d = r - q;
    let excess = d - 2.0 / 3.0;
    if excess == 0.0 {
        return Err(Error::NoConvergence(format!("R - Q equals 2/3 at n={n}")));
    }
    Ok(ThetaK {
        n,
        d,
        theta: d / 2.0,
        k: 8.0 / (135.0 * excess) - n as f64,
    })
}

/// `θ` from `e^n/2 = Σ_{k<n} n^k/k! + θ n^n/n!`, independent of `Q` and `R`.
pub fn theta_direct(n: u64) -> Result<f64> {
    if !(1..=600).contains(&n) {
        return Err(Error::InvalidArgument(format!("theta_direct needs 1 <= n <= 600, got {n}")));
    }
    let nf = n as f64;
    let mut t = 1.0; // n^k / k!
    let mut s = 0.0;
    for k in 0..n {
        s += t;
        t *= nf / (k + 1) as f64;
    }
    // t is now n^n/n!
    Ok((0.5 * nf.exp() - s) / t)
}

/// Solves `y = z e^y` by fixed-point iteration on truncated series.
pub fn tree_function(order: usize) -> Result<TruncSeries> {
    let z = TruncSeries::monomial(BigRat::one(), 1, order);
    let mut y = TruncSeries::zero(order);
    for _ in 0..=order {
        let next = &z * &y.exp()?;
        if next == y {
            break;
        }
        y = next;
    }
    Ok(y)
}

/// `Q(n)` against `√(πn/2) - 1/3`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct QAsymptotic {
    pub n: u64,
    pub q: f64,
    pub approx: f64,
    pub bound: f64,
    pub pass: bool,
}

pub fn q_asymptotic_check(n: u64, bound: f64) -> Result<QAsymptotic> {
    let q = rat_to_f64(&ramanujan_q(n)?);
    let approx = (std::f64::consts::PI * n as f64 / 2.0).sqrt() - 1.0 / 3.0;
    Ok(QAsymptotic {
        n,
        q,
        approx,
        bound,
        pass: (q - approx).abs() <= bound,
    })
}

/// A Simpson panel: endpoints, midpoint values and the panel estimate.
#[derive(Clone, Copy)]
struct Panel {
    a: f64,
    b: f64,
    fa: f64,
    fm: f64,
    fb: f64,
    whole: f64,
}

impl Panel {
    fn new(a: f64, b: f64, fa: f64, fm: f64, fb: f64) -> Self {
        Panel {
            a,
            b,
            fa,
            fm,
            fb,
            whole: (b - a) / 6.0 * (fa + 4.0 * fm + fb),
        }
    }
}

fn adaptive_simpson(f: &impl Fn(f64) -> f64, p: Panel, tol: f64, depth: u32) -> f64 {
    let m = 0.5 * (p.a + p.b);
    let left = Panel::new(p.a, m, p.fa, f(0.5 * (p.a + m)), p.fm);
    let right = Panel::new(m, p.b, p.fm, f(0.5 * (m + p.b)), p.fb);
    let delta = left.whole + right.whole - p.whole;
    if depth == 0 || delta.abs() <= 15.0 * tol {
        return left.whole + right.whole + delta / 15.0;
    }
    adaptive_simpson(f, left, tol / 2.0, depth - 1) + adaptive_simpson(f, right, tol / 2.0, depth - 1)
}

/// Adaptive Simpson quadrature of `f` over `[a, b]`.
pub fn integrate(f: impl Fn(f64) -> f64, a: f64, b: f64, tol: f64) -> f64 {
    let p = Panel::new(a, b, f(a), f(0.5 * (a + b)), f(b));
    adaptive_simpson(&f, p, tol, 50)
}

/// Both sides of the master theorem for `λ(u) = 1/Γ(1+u)`, whose series is
/// `e^{-x}`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct MasterTheorem {
    pub s: f64,
    /// `∫_0^∞ x^{s-1} e^{-x} dx` by quadrature.
    pub integral: f64,
    /// `π / (sin(πs) Γ(1-s))`.
    pub rhs: f64,
    /// `Γ(s)` evaluated directly.
    pub gamma: f64,
    pub pass: bool,
}

/// With `y = x^s` the integral is `(1/s) ∫_0^∞ e^{-y^{1/s}} dy`; for
/// `y >= 1` the integrand is below `e^{-y}`, so cutting at `Y` loses at most
/// `e^{-Y}`.
pub fn master_theorem_check(s: f64, tol: f64) -> Result<MasterTheorem> {
    check_tol(tol)?;
    if !(s > 0.0 && s < 1.0) {
        return Err(Error::InvalidArgument(format!("master theorem needs 0 < s < 1, got {s}")));
    }
    let y_max = (1.0 / (tol * s / 4.0)).ln().max(1.0);
    let inv = 1.0 / s;
    let integral = integrate(|y| (-(y.powf(inv))).exp(), 0.0, y_max, tol * s / 4.0) / s;
    let pi = std::f64::consts::PI;
    let rhs = pi / ((pi * s).sin() * real::gamma(1.0 - s)?);
    let gamma = real::gamma(s)?;
    let pass = (integral - rhs).abs() <= tol && (integral - gamma).abs() <= tol;
    Ok(MasterTheorem {
        s,
        integral,
        rhs,
        gamma,
        pass,
    })
}
