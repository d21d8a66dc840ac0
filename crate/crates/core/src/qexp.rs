//! Dense truncated q-expansions `sum_{n <= order} a(n) q^n` with exact rational coefficients.

use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Zero};
use rayon::prelude::*;

use crate::Rational;

/// A power series in `q` known exactly up to and including `q^order`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct QExpansion {
    coeffs: Vec<Rational>,
}

impl QExpansion {
    /// Builds a series from its coefficient list; `order = coeffs.len() - 1`.
    ///
    /// # Panics
    /// If `coeffs` is empty.
    pub fn new(coeffs: Vec<Rational>) -> Self {
        assert!(!coeffs.is_empty(), "a q-expansion needs at least a constant term");
        QExpansion { coeffs }
    }

    pub fn from_integers<I, T>(coeffs: I) -> Self
    where
        I: IntoIterator<Item = T>,
        T: Into<BigInt>,
    {
        Self::new(coeffs.into_iter().map(|c| Rational::from_integer(c.into())).collect())
    }

    pub fn zero(order: usize) -> Self {
        QExpansion { coeffs: vec![Rational::zero(); order + 1] }
    }

    pub fn one(order: usize) -> Self {
        let mut s = Self::zero(order);
        s.coeffs[0] = Rational::one();
        s
    }

    pub fn order(&self) -> usize {
        self.coeffs.len() - 1
    }

    /// Coefficient of `q^n`, `None` beyond the truncation order.
    pub fn get(&self, n: usize) -> Option<&Rational> {
        self.coeffs.get(n)
    }

    /// Coefficient of `q^n`.
    ///
    /// # Panics
    /// If `n > order`.
    pub fn coeff(&self, n: usize) -> &Rational {
        &self.coeffs[n]
    }

    pub fn coeffs(&self) -> &[Rational] {
        &self.coeffs
    }

    pub fn into_coeffs(self) -> Vec<Rational> {
        self.coeffs
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(Zero::is_zero)
    }

    /// Drops coefficients above `order` (no-op if already smaller).
    pub fn truncate(&self, order: usize) -> Self {
        let keep = (order + 1).min(self.coeffs.len());
        QExpansion { coeffs: self.coeffs[..keep].to_vec() }
    }

    pub fn scale(&self, c: &Rational) -> Self {
        QExpansion { coeffs: self.coeffs.iter().map(|a| a * c).collect() }
    }

    /// Multiplies by `q^shift`, keeping the same order.
    pub fn shift(&self, shift: usize) -> Self {
        let order = self.order();
        let mut out = Self::zero(order);
        for n in shift..=order {
            out.coeffs[n] = self.coeffs[n - shift].clone();
        }
        out
    }

    /// Index of the first nonzero coefficient.
    pub fn valuation(&self) -> Option<usize> {
        self.coeffs.iter().position(|c| !c.is_zero())
    }

    pub fn pow(&self, e: u32) -> Self {
        let mut acc = Self::one(self.order());
        for _ in 0..e {
            acc = qexp_mul(&acc, self);
        }
        acc
    }

    fn zip_with(&self, other: &Self, f: impl Fn(&Rational, &Rational) -> Rational) -> Self {
        let order = self.order().min(other.order());
        QExpansion {
            coeffs: (0..=order).map(|n| f(&self.coeffs[n], &other.coeffs[n])).collect(),
        }
    }
}

/// Common denominator and integer numerators of a coefficient list.
fn integer_scaled(coeffs: &[Rational]) -> (BigInt, Vec<BigInt>) {
    let den = coeffs
        .iter()
        .fold(BigInt::one(), |acc, c| acc.lcm(c.denom()));
    let nums = coeffs
        .iter()
        .map(|c| c.numer() * (&den / c.denom()))
        .collect();
    (den, nums)
}

/// Cauchy product truncated at the smaller of the two orders.
///
/// Coefficients are scaled to integers so the inner loop runs on big
/// integers only; output coefficients are computed in parallel.
pub fn qexp_mul(a: &QExpansion, b: &QExpansion) -> QExpansion {
    let order = a.order().min(b.order());
    let (da, na) = integer_scaled(&a.coeffs[..=order]);
    let (db, nb) = integer_scaled(&b.coeffs[..=order]);
    let nz_a: Vec<usize> = (0..=order).filter(|&i| !na[i].is_zero()).collect();
    let den = da * db;
    let coeffs = (0..=order)
        .into_par_iter()
        .map(|n| {
            let mut acc = BigInt::zero();
            for &i in &nz_a {
                if i > n {
                    break;
                }
                let y = &nb[n - i];
                if !y.is_zero() {
                    acc += &na[i] * y;
                }
            }
            Rational::new(acc, den.clone())
        })
        .collect();
    QExpansion { coeffs }
}

impl Add for &QExpansion {
    type Output = QExpansion;
    fn add(self, rhs: &QExpansion) -> QExpansion {
        self.zip_with(rhs, |x, y| x + y)
    }
}

impl Sub for &QExpansion {
    type Output = QExpansion;
    fn sub(self, rhs: &QExpansion) -> QExpansion {
        self.zip_with(rhs, |x, y| x - y)
    }
}

impl Mul for &QExpansion {
    type Output = QExpansion;
    fn mul(self, rhs: &QExpansion) -> QExpansion {
        qexp_mul(self, rhs)
    }
}

impl Neg for &QExpansion {
    type Output = QExpansion;
    fn neg(self) -> QExpansion {
        QExpansion { coeffs: self.coeffs.iter().map(|c| -c).collect() }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ints(v: &[i64]) -> QExpansion {
        QExpansion::from_integers(v.iter().copied())
    }

    #[test]
    fn product_of_conjugates() {
        let a = ints(&[1, 1, 0, 0]);
        let b = ints(&[1, -1, 0, 0]);
        assert_eq!(qexp_mul(&a, &b), ints(&[1, 0, -1, 0]));
    }

    #[test]
    fn all_ones_squared() {
        let a = ints(&[1; 8]);
        let expected = ints(&[1, 2, 3, 4, 5, 6, 7, 8]);
        assert_eq!(qexp_mul(&a, &a), expected);
    }

    #[test]
    fn truncates_to_smaller_order() {
        let a = ints(&[1, 2, 3, 4, 5]);
        let b = ints(&[1, 1]);
        let c = qexp_mul(&a, &b);
        assert_eq!(c.order(), 1);
        assert_eq!(c, ints(&[1, 3]));
    }

    #[test]
    fn rational_coefficients() {
        let half = Rational::new(1.into(), 2.into());
        let third = Rational::new(1.into(), 3.into());
        let a = QExpansion::new(vec![half.clone(), third.clone()]);
        let c = &a * &a;
        assert_eq!(c.coeff(0), &(&half * &half));
        assert_eq!(c.coeff(1), &(Rational::from_integer(2.into()) * &half * &third));
    }

    #[test]
    fn order_zero_is_a_constant() {
        let a = ints(&[3]);
        assert_eq!((&a * &a).coeffs(), ints(&[9]).coeffs());
        assert_eq!(a.order(), 0);
    }

    #[test]
    fn shift_and_valuation() {
        let a = ints(&[1, 2, 3]);
        let s = a.shift(1);
        assert_eq!(s, ints(&[0, 1, 2]));
        assert_eq!(s.valuation(), Some(1));
        assert_eq!(QExpansion::zero(3).valuation(), None);
    }
}
