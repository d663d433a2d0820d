//! Register function (Horton–Strahler number) of plane binary trees.

use std::collections::BTreeMap;
use std::rc::Rc;

use num_bigint::BigInt;
use num_traits::{One, Zero};

use crate::digits::v2;
use crate::error::{check_tol, Error, Result};
use crate::numerics::{binomial_row, catalan, real, row_entry, BigRat, TruncSeries};

pub const DEFAULT_ENUMERATION_LIMIT: u64 = 14;

/// Plane binary tree; size counts internal nodes only.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum BinaryTree {
    Leaf,
    Node(Rc<BinaryTree>, Rc<BinaryTree>),
}

impl BinaryTree {
    pub fn node(left: BinaryTree, right: BinaryTree) -> Self {
        BinaryTree::Node(Rc::new(left), Rc::new(right))
    }

    pub fn size(&self) -> u64 {
        match self {
            BinaryTree::Leaf => 0,
            BinaryTree::Node(l, r) => 1 + l.size() + r.size(),
        }
    }
}

/// Register value: 0 at a leaf, otherwise the larger child value, plus one
/// when both children agree.
pub fn reg(t: &BinaryTree) -> u32 {
    match t {
        BinaryTree::Leaf => 0,
        BinaryTree::Node(l, r) => {
            let (a, b) = (reg(l), reg(r));
            if a == b {
                a + 1
            } else {
                a.max(b)
            }
        }
    }
}

/// Lazy stream of all trees with a given number of internal nodes.
///
/// Trees of every smaller size are materialized once and shared through
/// `Rc`; trees of the requested size are built on demand.
pub struct TreeStream {
    n: usize,
    smaller: Vec<Vec<Rc<BinaryTree>>>,
    left_size: usize,
    i: usize,
    j: usize,
    done: bool,
}

impl Iterator for TreeStream {
    type Item = BinaryTree;

    fn next(&mut self) -> Option<BinaryTree> {
        if self.done {
            return None;
        }
        if self.n == 0 {
            self.done = true;
            return Some(BinaryTree::Leaf);
        }
        loop {
            if self.left_size == self.n {
                self.done = true;
                return None;
            }
            let lefts = &self.smaller[self.left_size];
            let rights = &self.smaller[self.n - 1 - self.left_size];
            if self.i < lefts.len() {
                let t = BinaryTree::Node(lefts[self.i].clone(), rights[self.j].clone());
                self.j += 1;
                if self.j == rights.len() {
                    self.j = 0;
                    self.i += 1;
                }
                return Some(t);
            }
            self.left_size += 1;
            self.i = 0;
            self.j = 0;
        }
    }
}

/// All plane binary trees with `n` internal nodes, each exactly once.
pub fn enumerate_trees(n: u64) -> Result<TreeStream> {
    enumerate_trees_with_limit(n, DEFAULT_ENUMERATION_LIMIT)
}

pub fn enumerate_trees_with_limit(n: u64, limit: u64) -> Result<TreeStream> {
    if n > limit {
        return Err(Error::LimitExceeded { requested: n, limit });
    }
    let n = n as usize;
    let mut smaller: Vec<Vec<Rc<BinaryTree>>> = vec![vec![Rc::new(BinaryTree::Leaf)]];
    for s in 1..n {
        let mut level = Vec::new();
        for k in 0..s {
            for l in &smaller[k] {
                for r in &smaller[s - 1 - k] {
                    level.push(Rc::new(BinaryTree::Node(l.clone(), r.clone())));
                }
            }
        }
        smaller.push(level);
    }
    Ok(TreeStream {
        n,
        smaller,
        left_size: 0,
        i: 0,
        j: 0,
        done: false,
    })
}

/// `R_p(z)`, the generating function of trees with register exactly `p`,
/// from `R_p = z R_{p-1}² / (1 - 2z Σ_{j<p} R_j)` and `R_0 = 1`.
pub fn register_series(p: u32, order: usize) -> TruncSeries {
    let mut partial = TruncSeries::zero(order);
    let mut r = TruncSeries::one(order);
    for _ in 0..p {
        partial = &partial + &r;
        let denom = &TruncSeries::one(order) - &partial.shift(1).scale(&BigRat::from_integer(2.into()));
        let num = (&r * &r).shift(1);
        r = num.div(&denom).expect("denominator has constant term 1");
    }
    r
}

/// `(1 - u²)/u · u^{2^p} / (1 - u^{2^{p+1}})` as a `u`-series, the form
/// `R_p` takes under `z = u/(1+u)²`.
pub fn register_u_closed(p: u32, order: usize) -> TruncSeries {
    let mut c = vec![BigRat::zero(); order + 1];
    let base = (1usize << p) - 1;
    let step = 1usize << (p + 1);
    let mut e = base;
    while e <= order {
        c[e] += BigRat::one();
        if e + 2 <= order {
            c[e + 2] -= BigRat::one();
        }
        e += step;
    }
    TruncSeries::from_coeffs(c, order)
}

/// `z = u/(1+u)²` as a `u`-series.
pub fn catalan_substitution(order: usize) -> TruncSeries {
    let c = (0..=order)
        .map(|m| {
            if m == 0 {
                BigRat::zero()
            } else {
                let k = (m - 1) as i64;
                let sign = if k % 2 == 0 { 1 } else { -1 };
                BigRat::from_integer(BigInt::from(sign * (k + 1)))
            }
        })
        .collect();
    TruncSeries::from_coeffs(c, order)
}

fn second_difference(row: &[BigInt], n: i64, m: i64) -> BigInt {
    row_entry(row, n + 1 - m) - 2 * row_entry(row, n - m) + row_entry(row, n - 1 - m)
}

/// Number of trees with `n` internal nodes and register exactly `p`, from
/// the alternating binomial formula with offsets `(2k+1) 2^p`.
pub fn count_register(n: u64, p: u32) -> Result<BigInt> {
    if n < 1 || p < 1 {
        return Err(Error::InvalidArgument(format!(
            "count_register needs n, p >= 1, got n={n}, p={p}"
        )));
    }
    if p >= 63 {
        return Ok(BigInt::zero());
    }
    let row = binomial_row(2 * n);
    Ok(count_register_row(&row, n, p))
}

fn count_register_row(row: &[BigInt], n: u64, p: u32) -> BigInt {
    let n = n as i64;
    let mut total = BigInt::zero();
    let mut k = 0i64;
    loop {
        let m = (2 * k + 1) << p;
        if m > n + 1 {
            return total;
        }
        total += second_difference(row, n, m);
        k += 1;
    }
}

/// `Σ_{k>=1} v₂(k) [C(2n,n+1-k) - 2C(2n,n-k) + C(2n,n-1-k)]`, the total of
/// register values over all trees of size `n`.
pub fn register_weighted_sum(n: u64) -> Result<BigInt> {
    if n < 1 {
        return Err(Error::InvalidArgument("register_weighted_sum needs n >= 1".into()));
    }
    let row = binomial_row(2 * n);
    let ni = n as i64;
    let mut total = BigInt::zero();
    for k in 1..=(n + 1) {
        let w = v2(k);
        if w > 0 {
            total += second_difference(&row, ni, k as i64) * w;
        }
    }
    Ok(total)
}

/// Mean register value over the `Catalan(n)` trees of size `n`.
pub fn register_mean(n: u64) -> Result<BigRat> {
    let s = register_weighted_sum(n)?;
    Ok(BigRat::new(s, catalan(n)))
}

/// Constant term `1/2 - γ/(2 ln 2) - 1/ln 2 + log₂ π` of the mean's
/// periodic part.
pub fn register_d0(tol: f64) -> Result<f64> {
    check_tol(tol)?;
    let ln2 = std::f64::consts::LN_2;
    // d0 depends on γ with slope 1/(2 ln 2) < 1.
    let gamma = real::euler_gamma(tol)?;
    Ok(0.5 - gamma / (2.0 * ln2) - 1.0 / ln2 + std::f64::consts::PI.log2())
}

/// Register-value histogram for one tree size.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RegisterCensus {
    pub n: u64,
    pub counts: BTreeMap<u32, BigInt>,
}

impl RegisterCensus {
    /// Census from the closed-form counts.
    pub fn exact(n: u64) -> Result<Self> {
        let mut counts = BTreeMap::new();
        if n == 0 {
            counts.insert(0, BigInt::one());
        } else {
            let row = binomial_row(2 * n);
            let max_p = 63 - (n + 1).leading_zeros();
            for p in 1..=max_p {
                counts.insert(p, count_register_row(&row, n, p));
            }
        }
        Ok(RegisterCensus { n, counts })
    }

    /// Census by enumerating every tree.
    pub fn enumerated(n: u64) -> Result<Self> {
        let mut counts: BTreeMap<u32, BigInt> = BTreeMap::new();
        for t in enumerate_trees(n)? {
            *counts.entry(reg(&t)).or_insert_with(BigInt::zero) += 1;
        }
        Ok(RegisterCensus { n, counts })
    }

    pub fn total(&self) -> BigInt {
        self.counts.values().sum()
    }

    pub fn get(&self, p: u32) -> BigInt {
        self.counts.get(&p).cloned().unwrap_or_else(BigInt::zero)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::numerics::rat;

    fn leaf() -> BinaryTree {
        BinaryTree::Leaf
    }

    fn cherry() -> BinaryTree {
        BinaryTree::node(leaf(), leaf())
    }

    #[test]
    fn register_examples() {
        assert_eq!(reg(&leaf()), 0);
        assert_eq!(reg(&cherry()), 1);
        let t = BinaryTree::node(
            BinaryTree::node(leaf(), cherry()),
            BinaryTree::node(cherry(), cherry()),
        );
        assert_eq!(t.size(), 6);
        assert_eq!(reg(&t), 2);
    }

    #[test]
    fn enumeration_counts() {
        assert_eq!(enumerate_trees(0).unwrap().count(), 1);
        assert_eq!(enumerate_trees(3).unwrap().count(), 5);
        for n in 0..=9 {
            let trees: Vec<_> = enumerate_trees(n).unwrap().collect();
            assert_eq!(BigInt::from(trees.len()), catalan(n));
            assert!(trees.iter().all(|t| t.size() == n));
            for (a, b) in trees.iter().zip(trees.iter().skip(1)) {
                assert_ne!(a, b);
            }
        }
        assert!(matches!(
            enumerate_trees(15),
            Err(Error::LimitExceeded { requested: 15, limit: 14 })
        ));
    }

    #[test]
    fn count_examples() {
        assert_eq!(count_register(3, 1).unwrap(), BigInt::from(4));
        assert_eq!(count_register(3, 2).unwrap(), BigInt::from(1));
        assert_eq!(count_register(2, 2).unwrap(), BigInt::from(0));
        assert!(count_register(0, 1).is_err());
    }

    #[test]
    fn census_matches_enumeration() {
        for n in 0..=10 {
            let a = RegisterCensus::exact(n).unwrap();
            let b = RegisterCensus::enumerated(n).unwrap();
            assert_eq!(a.total(), catalan(n));
            for p in 0..6 {
                assert_eq!(a.get(p), b.get(p), "n={n} p={p}");
            }
        }
    }

    #[test]
    fn series_examples() {
        let r0 = register_series(0, 6);
        assert_eq!(r0, TruncSeries::one(6));
        let r1 = register_series(1, 6);
        let expect: Vec<i64> = vec![0, 1, 2, 4, 8, 16, 32];
        assert_eq!(r1, TruncSeries::from_ints(&expect, 6));
        assert_eq!(register_series(2, 6).coeff(3), Some(&rat(1, 1)));
    }

    #[test]
    fn series_match_counts() {
        let order = 30;
        for p in 1..=4u32 {
            let s = register_series(p, order);
            for n in 1..=order as u64 {
                assert_eq!(
                    s.coeff(n as usize).unwrap(),
                    &BigRat::from_integer(count_register(n, p).unwrap())
                );
            }
        }
    }

    #[test]
    fn substitution_matches_u_closed_form() {
        let order = 30;
        let z = catalan_substitution(order);
        for p in 0..=3 {
            let composed = register_series(p, order).compose(&z).unwrap();
            assert_eq!(composed, register_u_closed(p, order), "p={p}");
        }
    }

    #[test]
    fn weighted_sum_and_mean() {
        assert_eq!(register_weighted_sum(1).unwrap(), BigInt::from(1));
        assert_eq!(register_weighted_sum(2).unwrap(), BigInt::from(2));
        assert_eq!(register_weighted_sum(3).unwrap(), BigInt::from(6));
        assert_eq!(register_mean(3).unwrap(), rat(6, 5));
        assert_eq!(register_mean(1).unwrap(), rat(1, 1));
        for n in 1..=40u64 {
            let c = RegisterCensus::exact(n).unwrap();
            let s: BigInt = c.counts.iter().map(|(p, k)| k * *p).sum();
            assert_eq!(s, register_weighted_sum(n).unwrap());
        }
    }

    #[test]
    fn d0_value() {
        let d0 = register_d0(1e-9).unwrap();
        assert!((d0 - 0.292_43).abs() < 1e-5, "{d0}");
    }
}
