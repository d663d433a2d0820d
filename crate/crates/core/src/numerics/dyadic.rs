use std::fmt;
use std::iter::Sum;
use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_traits::{One, Zero};

use super::{big_to_f64, real, BigRat};

/// Exact dyadic rational `num / 2^exp`.
///
/// Normalized so that `num` is odd or `exp == 0` (zero has `exp == 0`). Sums and
/// products never need a gcd, which is what makes the million-bit alternating
/// sums in this crate affordable.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Dyadic {
    num: BigInt,
    exp: u64,
}

impl Dyadic {
    pub fn new(num: BigInt, exp: u64) -> Self {
        let mut d = Dyadic { num, exp };
        d.normalize();
        d
    }

    pub fn zero() -> Self {
        Dyadic {
            num: BigInt::zero(),
            exp: 0,
        }
    }

    pub fn one() -> Self {
        Self::from_int(BigInt::one())
    }

    pub fn from_int<T: Into<BigInt>>(n: T) -> Self {
        Self::new(n.into(), 0)
    }

    /// `2^{-k}`.
    pub fn inv_pow2(k: u64) -> Self {
        Dyadic {
            num: BigInt::one(),
            exp: k,
        }
    }

    pub fn numer(&self) -> &BigInt {
        &self.num
    }

    pub fn exponent(&self) -> u64 {
        self.exp
    }

    pub fn is_zero(&self) -> bool {
        self.num.is_zero()
    }

    fn normalize(&mut self) {
        if self.num.is_zero() {
            self.exp = 0;
            return;
        }
        let tz = self.num.trailing_zeros().unwrap_or(0).min(self.exp);
        if tz > 0 {
            self.num >>= tz;
            self.exp -= tz;
        }
    }

    /// Divides by `2^k`.
    pub fn shr(&self, k: u64) -> Self {
        if self.is_zero() {
            return Self::zero();
        }
        Dyadic::new(self.num.clone(), self.exp + k)
    }

    pub fn mul_int(&self, k: &BigInt) -> Self {
        Self::new(&self.num * k, self.exp)
    }

    pub fn pow(&self, n: u32) -> Self {
        if n == 0 {
            return Self::one();
        }
        Dyadic::new(num_traits::pow(self.num.clone(), n as usize), self.exp * n as u64)
    }

    pub fn to_rat(&self) -> BigRat {
        BigRat::new_raw(self.num.clone(), BigInt::one() << self.exp)
    }

    pub fn to_f64(&self) -> f64 {
        let drop = self.num.bits().saturating_sub(64);
        let top: BigInt = &self.num >> drop;
        real::ldexp(big_to_f64(&top), drop as i64 - self.exp as i64)
    }
}

fn add_aligned(a: &Dyadic, b: &Dyadic, negate_b: bool) -> Dyadic {
    let (num, exp) = if a.exp >= b.exp {
        let shifted = &b.num << (a.exp - b.exp);
        let num = if negate_b {
            &a.num - shifted
        } else {
            &a.num + shifted
        };
        (num, a.exp)
    } else {
        let shifted = &a.num << (b.exp - a.exp);
        let num = if negate_b {
            shifted - &b.num
        } else {
            shifted + &b.num
        };
        (num, b.exp)
    };
    Dyadic::new(num, exp)
}

impl Add<&Dyadic> for &Dyadic {
    type Output = Dyadic;
    fn add(self, rhs: &Dyadic) -> Dyadic {
        add_aligned(self, rhs, false)
    }
}

impl Add for Dyadic {
    type Output = Dyadic;
    fn add(self, rhs: Dyadic) -> Dyadic {
        add_aligned(&self, &rhs, false)
    }
}

impl Sub<&Dyadic> for &Dyadic {
    type Output = Dyadic;
    fn sub(self, rhs: &Dyadic) -> Dyadic {
        add_aligned(self, rhs, true)
    }
}

impl Sub for Dyadic {
    type Output = Dyadic;
    fn sub(self, rhs: Dyadic) -> Dyadic {
        add_aligned(&self, &rhs, true)
    }
}

impl Mul<&Dyadic> for &Dyadic {
    type Output = Dyadic;
    fn mul(self, rhs: &Dyadic) -> Dyadic {
        Dyadic::new(&self.num * &rhs.num, self.exp + rhs.exp)
    }
}

impl Mul for Dyadic {
    type Output = Dyadic;
    fn mul(self, rhs: Dyadic) -> Dyadic {
        &self * &rhs
    }
}

impl Neg for Dyadic {
    type Output = Dyadic;
    fn neg(self) -> Dyadic {
        Dyadic {
            num: -self.num,
            exp: self.exp,
        }
    }
}

impl Sum for Dyadic {
    fn sum<I: Iterator<Item = Dyadic>>(iter: I) -> Dyadic {
        iter.fold(Dyadic::zero(), |acc, x| acc + x)
    }
}

impl From<Dyadic> for BigRat {
    fn from(d: Dyadic) -> BigRat {
        d.to_rat()
    }
}

impl fmt::Display for Dyadic {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.exp == 0 {
            write!(f, "{}", self.num)
        } else {
            write!(f, "{}/2^{}", self.num, self.exp)
        }
    }
}
