use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_traits::{One, Zero};

use super::{fmt_rat, BigRat};
use crate::error::{Error, Result};

/// Power series in one variable known exactly up to `z^order`.
///
/// Coefficients past `order` are unknown rather than zero, so every binary
/// operation truncates to the smaller of the two orders.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TruncSeries {
    coeffs: Vec<BigRat>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum SeriesOp {
    Add,
    Mul,
    Div,
    /// `a(b(z))`; needs `b(0) = 0`.
    Compose,
    /// `exp(a)`; `b` is ignored.
    Exp,
    /// `log(a)`; `b` is ignored.
    Log,
}

/// Dispatches one of the exact series operations.
pub fn series_arith(a: &TruncSeries, b: &TruncSeries, op: SeriesOp) -> Result<TruncSeries> {
    match op {
        SeriesOp::Add => Ok(a + b),
        SeriesOp::Mul => Ok(a * b),
        SeriesOp::Div => a.div(b),
        SeriesOp::Compose => a.compose(b),
        SeriesOp::Exp => a.exp(),
        SeriesOp::Log => a.log(),
    }
}

impl TruncSeries {
    /// Series with the given leading coefficients, padded with zeros or cut to
    /// `order`.
    pub fn from_coeffs(mut coeffs: Vec<BigRat>, order: usize) -> Self {
        coeffs.resize(order + 1, BigRat::zero());
        TruncSeries { coeffs }
    }

    pub fn from_ints(coeffs: &[i64], order: usize) -> Self {
        Self::from_coeffs(
            coeffs.iter().map(|&c| BigRat::from_integer(c.into())).collect(),
            order,
        )
    }

    pub fn zero(order: usize) -> Self {
        Self::from_coeffs(Vec::new(), order)
    }

    pub fn constant(c: BigRat, order: usize) -> Self {
        Self::from_coeffs(vec![c], order)
    }

    pub fn one(order: usize) -> Self {
        Self::constant(BigRat::one(), order)
    }

    /// `c z^k` (zero if `k > order`).
    pub fn monomial(c: BigRat, k: usize, order: usize) -> Self {
        let mut s = Self::zero(order);
        if k <= order {
            s.coeffs[k] = c;
        }
        s
    }

    pub fn order(&self) -> usize {
        self.coeffs.len() - 1
    }

    pub fn coeff(&self, k: usize) -> Option<&BigRat> {
        self.coeffs.get(k)
    }

    pub fn coeffs(&self) -> &[BigRat] {
        &self.coeffs
    }

    pub fn constant_term(&self) -> &BigRat {
        &self.coeffs[0]
    }

    pub fn truncate(&self, order: usize) -> Self {
        let order = order.min(self.order());
        TruncSeries {
            coeffs: self.coeffs[..=order].to_vec(),
        }
    }

    pub fn scale(&self, c: &BigRat) -> Self {
        TruncSeries {
            coeffs: self.coeffs.iter().map(|x| x * c).collect(),
        }
    }

    /// Multiplies by `z^k`, keeping the same order.
    pub fn shift(&self, k: usize) -> Self {
        let order = self.order();
        let mut coeffs = vec![BigRat::zero(); order + 1];
        for i in k..=order {
            coeffs[i] = self.coeffs[i - k].clone();
        }
        TruncSeries { coeffs }
    }

    /// `1/a`; needs a nonzero constant term.
    pub fn inv(&self) -> Result<Self> {
        let a0 = self.constant_term();
        if a0.is_zero() {
            return Err(Error::ConstantTerm {
                op: "division",
                requirement: "a nonzero constant term in the divisor",
                found: fmt_rat(a0),
            });
        }
        let order = self.order();
        let inv0 = a0.recip();
        let mut out: Vec<BigRat> = Vec::with_capacity(order + 1);
        out.push(inv0.clone());
        for n in 1..=order {
            let mut acc = BigRat::zero();
            for k in 1..=n {
                if !self.coeffs[k].is_zero() {
                    acc += &self.coeffs[k] * &out[n - k];
                }
            }
            out.push(-acc * &inv0);
        }
        Ok(TruncSeries { coeffs: out })
    }

    pub fn div(&self, b: &TruncSeries) -> Result<Self> {
        Ok(self * &b.inv()?)
    }

    /// `a(b(z))`, by Horner's rule; needs `b(0) = 0`.
    pub fn compose(&self, inner: &TruncSeries) -> Result<Self> {
        let b0 = inner.constant_term();
        if !b0.is_zero() {
            return Err(Error::ConstantTerm {
                op: "composition",
                requirement: "an inner series with zero constant term",
                found: fmt_rat(b0),
            });
        }
        let order = self.order().min(inner.order());
        let inner = inner.truncate(order);
        let mut acc = TruncSeries::constant(self.coeffs[order].clone(), order);
        for k in (0..order).rev() {
            acc = &acc * &inner;
            acc.coeffs[0] += &self.coeffs[k];
        }
        Ok(acc)
    }

    /// `exp(a)`; needs `a(0) = 0`. Uses `n f_n = sum_k k a_k f_{n-k}`.
    pub fn exp(&self) -> Result<Self> {
        let a0 = self.constant_term();
        if !a0.is_zero() {
            return Err(Error::ConstantTerm {
                op: "exp",
                requirement: "a zero constant term",
                found: fmt_rat(a0),
            });
        }
        let order = self.order();
        let mut f: Vec<BigRat> = Vec::with_capacity(order + 1);
        f.push(BigRat::one());
        for n in 1..=order {
            let mut acc = BigRat::zero();
            for k in 1..=n {
                if !self.coeffs[k].is_zero() {
                    acc += &self.coeffs[k] * &f[n - k] * BigInt::from(k);
                }
            }
            f.push(acc / BigInt::from(n));
        }
        Ok(TruncSeries { coeffs: f })
    }

    /// `log(a)`; needs `a(0) = 1`. Integrates `a'/a`.
    pub fn log(&self) -> Result<Self> {
        let a0 = self.constant_term();
        if !a0.is_one() {
            return Err(Error::ConstantTerm {
                op: "log",
                requirement: "constant term 1",
                found: fmt_rat(a0),
            });
        }
        let order = self.order();
        let deriv = TruncSeries::from_coeffs(
            (1..=order)
                .map(|k| &self.coeffs[k] * BigInt::from(k))
                .collect(),
            order.saturating_sub(1),
        );
        let q = deriv.div(&self.truncate(order.saturating_sub(1)))?;
        let mut coeffs = vec![BigRat::zero(); order + 1];
        for k in 1..=order {
            coeffs[k] = &q.coeffs[k - 1] / BigInt::from(k);
        }
        Ok(TruncSeries { coeffs })
    }

    /// Value of the polynomial `sum c_k` (i.e. at `z = 1`), treating the
    /// series as a polynomial of degree `order`.
    pub fn sum_coeffs(&self) -> BigRat {
        self.coeffs.iter().fold(BigRat::zero(), |acc, c| acc + c)
    }

    /// `sum k c_k`: the derivative of the polynomial at `z = 1`.
    pub fn derivative_at_one(&self) -> BigRat {
        self.coeffs
            .iter()
            .enumerate()
            .fold(BigRat::zero(), |acc, (k, c)| acc + c * BigInt::from(k))
    }
}

impl Add<&TruncSeries> for &TruncSeries {
    type Output = TruncSeries;
    fn add(self, rhs: &TruncSeries) -> TruncSeries {
        let order = self.order().min(rhs.order());
        TruncSeries {
            coeffs: (0..=order)
                .map(|k| &self.coeffs[k] + &rhs.coeffs[k])
                .collect(),
        }
    }
}

impl Sub<&TruncSeries> for &TruncSeries {
    type Output = TruncSeries;
    fn sub(self, rhs: &TruncSeries) -> TruncSeries {
        let order = self.order().min(rhs.order());
        TruncSeries {
            coeffs: (0..=order)
                .map(|k| &self.coeffs[k] - &rhs.coeffs[k])
                .collect(),
        }
    }
}

impl Mul<&TruncSeries> for &TruncSeries {
    type Output = TruncSeries;
    fn mul(self, rhs: &TruncSeries) -> TruncSeries {
        let order = self.order().min(rhs.order());
        let mut coeffs = vec![BigRat::zero(); order + 1];
        for (i, a) in self.coeffs.iter().enumerate().take(order + 1) {
            if a.is_zero() {
                continue;
            }
            for (j, b) in rhs.coeffs.iter().enumerate().take(order + 1 - i) {
                if !b.is_zero() {
                    coeffs[i + j] += a * b;
                }
            }
        }
        TruncSeries { coeffs }
    }
}

impl Neg for &TruncSeries {
    type Output = TruncSeries;
    fn neg(self) -> TruncSeries {
        TruncSeries {
            coeffs: self.coeffs.iter().map(|c| -c).collect(),
        }
    }
}
