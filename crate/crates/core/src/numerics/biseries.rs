use std::ops::{Add, Mul, Sub};

use num_traits::Zero;

use super::{BigRat, TruncSeries};

/// Power series in two variables `(z, u)`, known for `z`-degree up to
/// `order1` and `u`-degree up to `order2`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BiTruncSeries {
    // coeffs[i][j] is the coefficient of z^i u^j
    coeffs: Vec<Vec<BigRat>>,
}

impl BiTruncSeries {
    pub fn zero(order1: usize, order2: usize) -> Self {
        BiTruncSeries {
            coeffs: vec![vec![BigRat::zero(); order2 + 1]; order1 + 1],
        }
    }

    /// `c z^i u^j`, dropped if it lies outside the truncation box.
    pub fn monomial(c: BigRat, i: usize, j: usize, order1: usize, order2: usize) -> Self {
        let mut s = Self::zero(order1, order2);
        if i <= order1 && j <= order2 {
            s.coeffs[i][j] = c;
        }
        s
    }

    pub fn order1(&self) -> usize {
        self.coeffs.len() - 1
    }

    pub fn order2(&self) -> usize {
        self.coeffs[0].len() - 1
    }

    pub fn coeff(&self, i: usize, j: usize) -> Option<&BigRat> {
        self.coeffs.get(i).and_then(|row| row.get(j))
    }

    pub fn set(&mut self, i: usize, j: usize, c: BigRat) {
        self.coeffs[i][j] = c;
    }

    /// Row of coefficients of `z^i`, indexed by `u`-degree.
    pub fn row(&self, i: usize) -> &[BigRat] {
        &self.coeffs[i]
    }

    pub fn truncate(&self, order1: usize, order2: usize) -> Self {
        let o1 = order1.min(self.order1());
        let o2 = order2.min(self.order2());
        BiTruncSeries {
            coeffs: self.coeffs[..=o1]
                .iter()
                .map(|row| row[..=o2].to_vec())
                .collect(),
        }
    }

    /// Substitution `u -> c u`.
    pub fn scale_second(&self, c: &BigRat) -> Self {
        let mut out = self.clone();
        for row in out.coeffs.iter_mut() {
            let mut p = BigRat::from_integer(1.into());
            for x in row.iter_mut() {
                *x *= &p;
                p *= c;
            }
        }
        out
    }

    /// Substitution `u^j -> z^{a j} u^{b j}` (`b >= 1`), e.g. `F(z, u² z²)`.
    ///
    /// Valid to the same orders because `b >= 1` keeps every known
    /// coefficient inside the box.
    pub fn subst_second_monomial(&self, a: usize, b: usize) -> Self {
        assert!(b >= 1, "u must map to a positive power of u");
        let (o1, o2) = (self.order1(), self.order2());
        let mut out = Self::zero(o1, o2);
        for (i, row) in self.coeffs.iter().enumerate() {
            for (j, c) in row.iter().enumerate() {
                if c.is_zero() {
                    continue;
                }
                let (ni, nj) = (i + a * j, b * j);
                if ni <= o1 && nj <= o2 {
                    out.coeffs[ni][nj] += c;
                }
            }
        }
        out
    }

    /// Multiplies by `z^k u^l`, keeping the same orders.
    pub fn shift(&self, k: usize, l: usize) -> Self {
        let (o1, o2) = (self.order1(), self.order2());
        let mut out = Self::zero(o1, o2);
        for i in k..=o1 {
            for j in l..=o2 {
                out.coeffs[i][j] = self.coeffs[i - k][j - l].clone();
            }
        }
        out
    }

    /// Divides by `1 - z`: prefix sums along the first variable.
    pub fn div_one_minus_first(&self) -> Self {
        let mut out = self.clone();
        for i in 1..out.coeffs.len() {
            let (prev, cur) = out.coeffs.split_at_mut(i);
            for (x, p) in cur[0].iter_mut().zip(prev[i - 1].iter()) {
                *x += p;
            }
        }
        out
    }

    /// Divides by `1 - z u`: prefix sums along diagonals.
    pub fn div_one_minus_diag(&self) -> Self {
        let mut out = self.clone();
        for i in 1..out.coeffs.len() {
            for j in 1..out.coeffs[i].len() {
                let p = out.coeffs[i - 1][j - 1].clone();
                out.coeffs[i][j] += p;
            }
        }
        out
    }

    /// Sets `u = 1`, giving a series in the first variable. Only meaningful
    /// when every `u`-degree that occurs is inside the box.
    pub fn at_second_one(&self) -> TruncSeries {
        TruncSeries::from_coeffs(
            self.coeffs
                .iter()
                .map(|row| row.iter().fold(BigRat::zero(), |a, c| a + c))
                .collect(),
            self.order1(),
        )
    }

    /// Embeds a series in the first variable as `f(z) u^0`.
    pub fn from_first(f: &TruncSeries, order2: usize) -> Self {
        let mut out = Self::zero(f.order(), order2);
        for (i, c) in f.coeffs().iter().enumerate() {
            out.coeffs[i][0] = c.clone();
        }
        out
    }
}

impl Add<&BiTruncSeries> for &BiTruncSeries {
    type Output = BiTruncSeries;
    fn add(self, rhs: &BiTruncSeries) -> BiTruncSeries {
        let o1 = self.order1().min(rhs.order1());
        let o2 = self.order2().min(rhs.order2());
        let mut out = BiTruncSeries::zero(o1, o2);
        for i in 0..=o1 {
            for j in 0..=o2 {
                out.coeffs[i][j] = &self.coeffs[i][j] + &rhs.coeffs[i][j];
            }
        }
        out
    }
}

impl Sub<&BiTruncSeries> for &BiTruncSeries {
    type Output = BiTruncSeries;
    fn sub(self, rhs: &BiTruncSeries) -> BiTruncSeries {
        let o1 = self.order1().min(rhs.order1());
        let o2 = self.order2().min(rhs.order2());
        let mut out = BiTruncSeries::zero(o1, o2);
        for i in 0..=o1 {
            for j in 0..=o2 {
                out.coeffs[i][j] = &self.coeffs[i][j] - &rhs.coeffs[i][j];
            }
        }
        out
    }
}

impl Mul<&BiTruncSeries> for &BiTruncSeries {
    type Output = BiTruncSeries;
    fn mul(self, rhs: &BiTruncSeries) -> BiTruncSeries {
        let o1 = self.order1().min(rhs.order1());
        let o2 = self.order2().min(rhs.order2());
        let mut out = BiTruncSeries::zero(o1, o2);
        for i1 in 0..=o1 {
            for j1 in 0..=o2 {
                let a = &self.coeffs[i1][j1];
                if a.is_zero() {
                    continue;
                }
                for i2 in 0..=(o1 - i1) {
                    for j2 in 0..=(o2 - j1) {
                        let b = &rhs.coeffs[i2][j2];
                        if !b.is_zero() {
                            out.coeffs[i1 + i2][j1 + j2] += a * b;
                        }
                    }
                }
            }
        }
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::numerics::rat;

    #[test]
    fn geometric_helpers_match_general_multiplication() {
        let (o1, o2) = (5, 5);
        let mut f = BiTruncSeries::zero(o1, o2);
        f.set(0, 1, rat(1, 1));
        f.set(1, 2, rat(3, 2));
        f.set(2, 0, rat(-2, 3));
        // 1/(1-z) and 1/(1-zu) as explicit series
        let mut geo = BiTruncSeries::zero(o1, o2);
        let mut diag = BiTruncSeries::zero(o1, o2);
        for i in 0..=o1 {
            geo.set(i, 0, rat(1, 1));
            if i <= o2 {
                diag.set(i, i, rat(1, 1));
            }
        }
        assert_eq!(f.div_one_minus_first(), &f * &geo);
        assert_eq!(f.div_one_minus_diag(), &f * &diag);
    }

    #[test]
    fn monomial_substitution() {
        let f = BiTruncSeries::monomial(rat(2, 1), 1, 2, 8, 8);
        let g = f.subst_second_monomial(2, 2);
        assert_eq!(g.coeff(5, 4), Some(&rat(2, 1)));
        let scaled = f.scale_second(&rat(1, 2));
        assert_eq!(scaled.coeff(1, 2), Some(&rat(1, 2)));
        assert_eq!(f.shift(1, 1).coeff(2, 3), Some(&rat(2, 1)));
        assert_eq!(f.at_second_one().coeff(1), Some(&rat(2, 1)));
    }
}
