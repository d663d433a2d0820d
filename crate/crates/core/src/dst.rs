//! Digital search trees and the mean number of endnodes.
//!
//! `ℓ_n`, the expected number of childless nodes in a DST built from `n`
//! random keys, is computed from its recurrence, from the Poisson-transformed
//! sequence `ℓ̂_n` by binomial convolution, and from the alternating
//! closed form in `R_n = Q_n Σ_{i<=n} 1/Q_i`. The continuation `R*(z)` of
//! `R_n - n - 1 + α` is evaluated by both of its series.

use num_bigint::BigInt;
use num_traits::{One, Zero};

use crate::error::{check_tol, Error, Result};
use crate::numerics::{
    alpha_constant, binomial_row, q_infinity, qpoch, qpoch_table, BigRat, Dyadic, TruncSeries,
};
use crate::sim::{run_trials, BitSource, Histogram};

pub const DEFAULT_POLY_CAP: u64 = 64;

#[derive(Clone, Debug)]
struct DstNode {
    key: Vec<bool>,
    child: [Option<usize>; 2],
}

/// Digital search tree over bit-string keys. A key stops at the first
/// vacant position along the path chosen by its bits: bit `d` picks the
/// child at depth `d` (0 = left).
#[derive(Clone, Debug, Default)]
pub struct DSTree {
    nodes: Vec<DstNode>,
}

/// Parses a string of `0`/`1` characters.
pub fn parse_bits(s: &str) -> Result<Vec<bool>> {
    s.chars()
        .map(|c| match c {
            '0' => Ok(false),
            '1' => Ok(true),
            _ => Err(Error::InvalidArgument(format!("not a bit string: {s:?}"))),
        })
        .collect()
}

impl DSTree {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }

    /// Inserts `key`; fails with [`Error::KeyExhausted`] (carrying the depth
    /// reached) if its bits run out before a vacancy.
    pub fn insert(&mut self, key: &[bool]) -> Result<()> {
        let node = DstNode {
            key: key.to_vec(),
            child: [None, None],
        };
        if self.nodes.is_empty() {
            self.nodes.push(node);
            return Ok(());
        }
        let mut cur = 0;
        let mut depth = 0;
        loop {
            let bit = *key.get(depth).ok_or(Error::KeyExhausted(depth))? as usize;
            match self.nodes[cur].child[bit] {
                Some(next) => {
                    cur = next;
                    depth += 1;
                }
                None => {
                    let id = self.nodes.len();
                    self.nodes.push(node);
                    self.nodes[cur].child[bit] = Some(id);
                    return Ok(());
                }
            }
        }
    }

    /// Keys of the childless nodes, in insertion order.
    pub fn endnodes(&self) -> Vec<&[bool]> {
        self.nodes
            .iter()
            .filter(|n| n.child == [None, None])
            .map(|n| n.key.as_slice())
            .collect()
    }

    pub fn count_endnodes(&self) -> usize {
        self.nodes.iter().filter(|n| n.child == [None, None]).count()
    }
}

/// Distribution of the endnode count for `n` random keys, `F_n(z)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct EndnodePoly {
    pub n: u64,
    pub poly: TruncSeries,
}

/// `F_n(z)` from `F_{m+1} = Σ_k 2^{-m} C(m,k) F_k F_{m-k}` (`m >= 1`),
/// `F_0 = 1`, `F_1 = z`; rejects `n` above [`DEFAULT_POLY_CAP`].
pub fn endnode_poly(n: u64) -> Result<EndnodePoly> {
    endnode_poly_with_cap(n, DEFAULT_POLY_CAP)
}

pub fn endnode_poly_with_cap(n: u64, cap: u64) -> Result<EndnodePoly> {
    if n > cap {
        return Err(Error::LimitExceeded { requested: n, limit: cap });
    }
    let polys = endnode_polys_dyadic(n as usize);
    let order = n as usize;
    let coeffs: Vec<BigRat> = polys[n as usize].iter().map(|d| d.to_rat()).collect();
    Ok(EndnodePoly {
        n,
        poly: TruncSeries::from_coeffs(coeffs, order),
    })
}

fn poly_mul(a: &[Dyadic], b: &[Dyadic]) -> Vec<Dyadic> {
    let mut out = vec![Dyadic::zero(); a.len() + b.len() - 1];
    for (i, x) in a.iter().enumerate() {
        if x.is_zero() {
            continue;
        }
        for (j, y) in b.iter().enumerate() {
            if !y.is_zero() {
                out[i + j] = &out[i + j] + &(x * y);
            }
        }
    }
    out
}

fn endnode_polys_dyadic(n: usize) -> Vec<Vec<Dyadic>> {
    let mut f: Vec<Vec<Dyadic>> = vec![vec![Dyadic::one()]];
    if n >= 1 {
        f.push(vec![Dyadic::zero(), Dyadic::one()]);
    }
    for m in 1..n {
        let row = binomial_row(m as u64);
        let mut acc: Vec<Dyadic> = Vec::new();
        // the k and m-k terms are equal: pair them
        for k in 0..=m / 2 {
            let mut weight = row[k].clone();
            if k != m - k {
                weight *= 2;
            }
            let prod = poly_mul(&f[k], &f[m - k]);
            if acc.len() < prod.len() {
                acc.resize(prod.len(), Dyadic::zero());
            }
            for (a, p) in acc.iter_mut().zip(prod) {
                *a = &*a + &p.mul_int(&weight);
            }
        }
        let acc = acc.into_iter().map(|c| c.shr(m as u64)).collect();
        f.push(acc);
    }
    f
}

/// `ℓ_0..=ℓ_n` from `ℓ_{m+1} = 2^{1-m} Σ_k C(m,k) ℓ_k` (`m >= 1`).
pub fn ell_table(n: u64) -> Vec<BigRat> {
    let n = n as usize;
    let mut ell: Vec<Dyadic> = vec![Dyadic::zero(); n + 1];
    if n >= 1 {
        ell[1] = Dyadic::one();
    }
    for m in 1..n {
        let row = binomial_row(m as u64);
        let s: Dyadic = (0..=m).map(|k| ell[k].mul_int(&row[k])).sum();
        ell[m + 1] = s.shr(m as u64 - 1);
    }
    ell.into_iter().map(BigRat::from).collect()
}

pub fn ell_recurrence(n: u64) -> BigRat {
    ell_table(n).pop().expect("table is never empty")
}

/// `ℓ̂_0..=ℓ̂_n` by `ℓ̂_{m+1} = (-1)^m - (1 - 2^{1-m}) ℓ̂_m`.
pub fn ell_hat_iter(n: u64) -> Vec<BigRat> {
    let mut out = vec![BigRat::zero()];
    let mut cur = BigRat::zero();
    for m in 0..n as i64 {
        let sign = if m % 2 == 0 { BigRat::one() } else { -BigRat::one() };
        let factor = BigRat::one() - pow2(1 - m);
        cur = sign - factor * cur;
        out.push(cur.clone());
    }
    out
}

fn pow2(e: i64) -> BigRat {
    if e >= 0 {
        BigRat::from_integer(BigInt::one() << e)
    } else {
        BigRat::new(BigInt::one(), BigInt::one() << (-e))
    }
}

/// `R_m = Q_m (1/Q_0 + ... + 1/Q_m)`.
pub fn r_seq(m: u64) -> BigRat {
    let q = qpoch_table(m);
    let s = q.iter().fold(BigRat::zero(), |acc, x| acc + x.recip());
    &q[m as usize] * s
}

/// `ℓ̂_n` in closed form: `(-1)^{n+1} R_{n-2}` for `n >= 2`.
pub fn ell_hat_closed(n: u64) -> BigRat {
    match n {
        0 => BigRat::zero(),
        1 => BigRat::one(),
        _ => {
            let r = r_seq(n - 2);
            if n % 2 == 1 {
                r
            } else {
                -r
            }
        }
    }
}

pub fn ell_hat(n: u64) -> BigRat {
    ell_hat_iter(n).pop().expect("table is never empty")
}

/// `ℓ_n = Σ_k C(n,k) ℓ̂_k`, the coefficient form of `L(z) = e^z L̂(z)`.
pub fn ell_from_hat(n: u64) -> BigRat {
    let hat = ell_hat_iter(n);
    let row = binomial_row(n);
    hat.iter()
        .zip(row)
        .fold(BigRat::zero(), |acc, (h, c)| acc + h * BigRat::from_integer(c))
}

/// `ℓ_n = n - Σ_{k>=2} C(n,k) (-1)^k R_{k-2}`, exactly.
pub fn ell_closed(n: u64) -> BigRat {
    ell_closed_dyadic(n).to_rat()
}

/// [`ell_closed`] as a dyadic rational.
///
/// Unrolling `R_m = 1 + (1 - 2^{-m}) R_{m-1}` turns the sum into
/// `Σ_{i=0}^{n-2} T_i` with `T_{n-2} = c_n` and
/// `T_i = c_{i+2} + (1 - 2^{-(i+1)}) T_{i+1}`, where `c_k = (-1)^k C(n,k)`.
/// With `T_i = B_i / 2^{f_i}` each step is a shift and a subtraction, and
/// the running sum is kept on the same scale.
pub fn ell_closed_dyadic(n: u64) -> Dyadic {
    if n < 2 {
        return Dyadic::from_int(n);
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
    let mut acc = b.clone();
    let mut f: u64 = 0;
    for i in (0..n - 2).rev() {
        let shift = i + 1;
        f += shift;
        b = (signed(i + 2) << f) + ((&b << shift) - &b);
        acc = &b + (acc << shift);
    }
    Dyadic::from_int(n) - Dyadic::new(acc, f)
}

/// Tail bound for the ratio test: if `|t_{j+1}/t_j| <= r < 1` from `j`
/// on, the remainder after `t_j` is at most `|t_j| r / (1 - r)`.
fn ratio_tail(term: f64, r: f64) -> f64 {
    term.abs() * r / (1.0 - r)
}

/// `R*(z) = Σ_{j>=0} (z+1+j-α) 2^{-z-1-j} / prod_{i=1..j+1} (1 - 2^{-z-i})`.
///
/// Every term shares the factor `1/(1 - 2^{-z-1})`, whose pole at `z = -1`
/// cancels because the numerators sum to zero there (the two Euler
/// evaluations); that point is computed as the derivative of the remaining
/// sum divided by `ln 2`. Other integers `z <= -2` hit a genuine zero
/// factor and are rejected.
pub fn r_star_series(z: f64, tol: f64) -> Result<f64> {
    check_tol(tol)?;
    let alpha = alpha_constant(1e-17)?;
    if z == -1.0 {
        return r_star_series_at_minus_one(alpha, tol);
    }
    if z.fract() == 0.0 && z <= -2.0 {
        return Err(Error::InvalidArgument(format!(
            "the product form of R*(z) has a zero factor at z={z}"
        )));
    }
    let mut sum = 0.0;
    let mut denom = 1.0;
    for j in 0..10_000i32 {
        let jf = j as f64;
        denom *= 1.0 - 2f64.powf(-z - 1.0 - jf);
        let term = (z + 1.0 + jf - alpha) * 2f64.powf(-z - 1.0 - jf) / denom;
        sum += term;
        // bound on |t_{j+1}/t_j| for every later j, valid once both
        // (z+2+j-α) > 0 and 2^{-z-j-2} < 1/2
        let lead = z + 1.0 + jf - alpha;
        let small = 2f64.powf(-z - jf - 2.0);
        if lead > 1.0 && small < 0.5 {
            let r = (1.0 + 1.0 / lead) * 0.5 / (1.0 - small);
            if r < 1.0 && ratio_tail(term, r) < tol {
                return Ok(sum);
            }
        }
    }
    Err(Error::NoConvergence(format!("R*({z}) product series")))
}

fn r_star_series_at_minus_one(alpha: f64, tol: f64) -> Result<f64> {
    let ln2 = std::f64::consts::LN_2;
    let q_inf = q_infinity(1e-17)?;
    let mut sum = 0.0;
    let mut q = 1.0; // Q_j
    let mut sigma = 0.0; // Σ_{i<=j} 2^{-i}/(1-2^{-i})
    // |u_j| <= 2^{-j} (a + b j)/Q_inf, so Σ_{j>J} |u_j| <= 2^{-J} (a + b (J+2)) / Q_inf
    let a = 1.0 + alpha * ln2 * (1.0 + alpha);
    let b = ln2 * (1.0 + alpha);
    for j in 0..2000i32 {
        let jf = j as f64;
        if j > 0 {
            let p = 0.5f64.powi(j);
            q *= 1.0 - p;
            sigma += p / (1.0 - p);
        }
        let term = 0.5f64.powi(j) / q * (1.0 + (jf - alpha) * (-ln2 - ln2 * sigma));
        sum += term;
        let tail = 0.5f64.powi(j) * (a + b * (jf + 2.0)) / q_inf / ln2;
        if tail < tol {
            return Ok(sum / ln2);
        }
    }
    Err(Error::NoConvergence("R*(-1) product series".into()))
}

/// `R*(z) = (1/Q_inf) Σ_{j>=1} (-1)^{j-1} 2^{-C(j,2)} / Q_{j-1} · (z+j)/(2^{z+j} - 1)`,
/// with `(z+j)/(2^{z+j}-1)` replaced by its limit `1/ln 2` when `z + j = 0`.
///
/// Once `z + J >= 1` and `J >= 2` consecutive ratios are at most `1/2`,
/// so the remainder is below twice the first omitted term.
pub fn r_star_partial_fractions(z: f64, tol: f64) -> Result<f64> {
    check_tol(tol)?;
    let q_inf = q_infinity(1e-17)?;
    let mut sum = 0.0;
    let mut q = 1.0; // Q_{j-1}
    for j in 1..2000i32 {
        let jf = j as f64;
        if j > 1 {
            q *= 1.0 - 0.5f64.powi(j - 1);
        }
        let x = z + jf;
        let kernel = if x == 0.0 {
            1.0 / std::f64::consts::LN_2
        } else {
            x / pow2_minus_one(x)
        };
        let half_pow = 2f64.powf(-(jf * (jf - 1.0) / 2.0));
        let term = half_pow / q * kernel;
        sum += if j % 2 == 1 { term } else { -term };
        if j >= 2 && x >= 1.0 {
            let next_pow = 2f64.powf(-(jf * (jf + 1.0) / 2.0));
            let nx = x + 1.0;
            let next = next_pow / (q * (1.0 - 0.5f64.powi(j))) * nx / (2f64.powf(nx) - 1.0);
            if 2.0 * next / q_inf < tol {
                return Ok(sum / q_inf);
            }
        }
    }
    Err(Error::NoConvergence(format!("R*({z}) partial fractions")))
}

/// `2^x - 1` without cancellation near `x = 0`.
fn pow2_minus_one(x: f64) -> f64 {
    (x * std::f64::consts::LN_2).exp_m1()
}

/// `R*(z)` from the partial-fraction form, cross-checked against the
/// product form wherever the latter is defined.
pub fn r_star(z: f64, tol: f64) -> Result<f64> {
    let pf = r_star_partial_fractions(z, tol)?;
    if !(z.fract() == 0.0 && z <= -2.0) {
        let s = r_star_series(z, tol)?;
        if (pf - s).abs() > 2.0 * tol {
            return Err(Error::NoConvergence(format!(
                "R*({z}) series disagree: {pf} vs {s}"
            )));
        }
    }
    Ok(pf)
}

/// Ingredients and value of the linear endnode constant `α + 1 - R*(-1)`.
#[derive(Clone, Debug, PartialEq)]
pub struct DstConstant {
    pub q_infinity: f64,
    pub alpha: f64,
    pub r_star_minus_one: f64,
    pub value: f64,
}

pub fn dst_constant(tol: f64) -> Result<DstConstant> {
    check_tol(tol)?;
    let alpha = alpha_constant(tol / 4.0)?;
    let r = r_star(-1.0, tol / 4.0)?;
    Ok(DstConstant {
        q_infinity: q_infinity(tol)?,
        alpha,
        r_star_minus_one: r,
        value: alpha + 1.0 - r,
    })
}

/// Both sides of `Σ_n t^n/(q;q)_n = 1/(t;q)_inf`, each summed with `terms`
/// terms/factors.
pub fn euler_partition_sides(t: f64, q: f64, terms: usize) -> (f64, f64) {
    let mut lhs = 0.0;
    let mut poch = 1.0;
    let mut tn = 1.0;
    for n in 0..terms {
        if n > 0 {
            poch *= 1.0 - q.powi(n as i32);
            tn *= t;
        }
        lhs += tn / poch;
    }
    let mut prod = 1.0;
    for m in 0..terms {
        prod *= 1.0 - t * q.powi(m as i32);
    }
    (lhs, 1.0 / prod)
}

/// One numeric identity with both sides.
#[derive(Clone, Debug, PartialEq)]
pub struct IdentityCheck {
    pub name: &'static str,
    pub lhs: f64,
    pub rhs: f64,
    pub pass: bool,
}

impl IdentityCheck {
    fn new(name: &'static str, lhs: f64, rhs: f64, tol: f64) -> Self {
        IdentityCheck {
            name,
            lhs,
            rhs,
            pass: (lhs - rhs).abs() <= tol,
        }
    }
}

/// `Σ 2^{-l}/Q_l = 1/Q_inf`, `Σ l 2^{-l}/Q_l = α/Q_inf` and the generic
/// identity at `t = 1/3`, `q = 1/2`, each to `tol`. Sums run to `l = 60`.
pub fn euler_identity_checks(tol: f64) -> Result<Vec<IdentityCheck>> {
    check_tol(tol)?;
    let q_inf = q_infinity(1e-17)?;
    let alpha = alpha_constant(1e-17)?;
    let q = qpoch_table(60);
    let mut s0 = 0.0;
    let mut s1 = 0.0;
    for (l, ql) in q.iter().enumerate().rev() {
        let t = 0.5f64.powi(l as i32) / crate::numerics::rat_to_f64(ql);
        s0 += t;
        s1 += l as f64 * t;
    }
    let (lhs, rhs) = euler_partition_sides(1.0 / 3.0, 0.5, 80);
    Ok(vec![
        IdentityCheck::new("sum 2^-l/Q_l = 1/Q_inf", s0, 1.0 / q_inf, tol),
        IdentityCheck::new("sum l 2^-l/Q_l = alpha/Q_inf", s1, alpha / q_inf, tol),
        IdentityCheck::new("euler t=1/3 q=1/2", lhs, rhs, tol),
    ])
}

/// Endnode counts of `trials` trees, each grown from `n` random keys.
/// Keys are lazy fair-bit streams, so insertion never runs out of bits.
pub fn simulate_dst(n: u64, trials: u64, seed: u64) -> Result<Histogram> {
    if trials < 1 {
        return Err(Error::InvalidArgument("trials must be >= 1".into()));
    }
    Ok(run_trials(trials, seed, |bits| {
        let mut child: Vec<[u32; 2]> = Vec::with_capacity(n as usize);
        for _ in 0..n {
            let id = child.len() as u32;
            child.push([0, 0]);
            if id == 0 {
                continue;
            }
            let mut cur = 0usize;
            loop {
                let b = bits.next_bit() as usize;
                match child[cur][b] {
                    0 => {
                        child[cur][b] = id;
                        break;
                    }
                    next => cur = next as usize,
                }
            }
        }
        child.iter().filter(|c| **c == [0, 0]).count() as u64
    }))
}

/// Exact `R_n` as `f64`, used to check `n + 1 - α + R*(n) = R_n`.
pub fn r_seq_f64(n: u64) -> f64 {
    crate::numerics::rat_to_f64(&r_seq(n))
}

/// `Q_n` exposed for reports.
pub fn q_n(n: u64) -> BigRat {
    qpoch(n)
}
