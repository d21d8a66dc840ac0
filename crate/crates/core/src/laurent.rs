//! Multivariate Laurent polynomials over the rationals and their quotients.
//!
//! Variables come from a fixed alphabet ([`Var`]). Half-integral powers of a
//! prime `p` are written with `Var::Q`, which stands for `p^(1/2)`, so every
//! exponent stays an integer.

use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, AddAssign, Mul, Neg, Sub, SubAssign};

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};

use crate::{Error, Rational, Result};

/// Number of indeterminates in the alphabet.
pub const NVARS: usize = 10;

/// Indeterminates available to [`LaurentPoly`].
#[derive(Copy, Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Var {
    /// Satake parameter `alpha_p`.
    Alpha = 0,
    /// `p^(1/2)`.
    Q = 1,
    /// Dirichlet variable `p^(-2s + 2k - 2n - 1)`.
    T = 2,
    /// Dirichlet variable `p^(-s)`.
    SmallT = 3,
    /// Index shift `U_p`.
    U = 4,
    /// Generic Satake-type variable of the `B` matrices.
    X = 5,
    /// The generator `D-hat(p^2)` of the index-shift algebra.
    D = 6,
    /// `p'^(1/2)` for a second prime `p'`.
    Q2 = 7,
    /// `U_{p'}`.
    U2 = 8,
    /// `D-hat(p'^2)`.
    D2 = 9,
}

impl Var {
    pub const ALL: [Var; NVARS] = [
        Var::Alpha,
        Var::Q,
        Var::T,
        Var::SmallT,
        Var::U,
        Var::X,
        Var::D,
        Var::Q2,
        Var::U2,
        Var::D2,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Var::Alpha => "alpha",
            Var::Q => "q",
            Var::T => "T",
            Var::SmallT => "t",
            Var::U => "u",
            Var::X => "X",
            Var::D => "d",
            Var::Q2 => "q2",
            Var::U2 => "u2",
            Var::D2 => "d2",
        }
    }

    pub fn from_name(name: &str) -> Option<Var> {
        Var::ALL.iter().copied().find(|v| v.name() == name)
    }

    fn idx(self) -> usize {
        self as usize
    }
}

impl fmt::Display for Var {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

/// Exponent vector over the alphabet.
#[derive(Copy, Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Default)]
pub struct Monomial(pub [i32; NVARS]);

impl Monomial {
    pub fn one() -> Self {
        Monomial([0; NVARS])
    }

    pub fn var(v: Var, e: i32) -> Self {
        let mut m = Self::one();
        m.0[v.idx()] = e;
        m
    }

    pub fn from_pairs(pairs: &[(Var, i32)]) -> Self {
        let mut m = Self::one();
        for &(v, e) in pairs {
            m.0[v.idx()] += e;
        }
        m
    }

    pub fn exp(&self, v: Var) -> i32 {
        self.0[v.idx()]
    }

    pub fn is_one(&self) -> bool {
        self.0.iter().all(|&e| e == 0)
    }

    fn mul(&self, other: &Monomial) -> Monomial {
        let mut out = *self;
        for (o, e) in out.0.iter_mut().zip(other.0.iter()) {
            *o += e;
        }
        out
    }

    fn inverse(&self) -> Monomial {
        let mut out = *self;
        for e in out.0.iter_mut() {
            *e = -*e;
        }
        out
    }

    fn with(&self, v: Var, e: i32) -> Monomial {
        let mut out = *self;
        out.0[v.idx()] = e;
        out
    }
}

/// A finite sum of rational multiples of monomials; zero coefficients are never stored.
#[derive(Clone, Debug, PartialEq, Eq, Default)]
pub struct LaurentPoly {
    terms: BTreeMap<Monomial, Rational>,
}

impl LaurentPoly {
    pub fn zero() -> Self {
        LaurentPoly { terms: BTreeMap::new() }
    }

    pub fn one() -> Self {
        Self::constant(Rational::one())
    }

    pub fn constant(c: Rational) -> Self {
        Self::term(c, Monomial::one())
    }

    pub fn from_int(c: i64) -> Self {
        Self::constant(Rational::from_integer(BigInt::from(c)))
    }

    pub fn term(c: Rational, m: Monomial) -> Self {
        let mut terms = BTreeMap::new();
        if !c.is_zero() {
            terms.insert(m, c);
        }
        LaurentPoly { terms }
    }

    /// `v^e` with unit coefficient.
    pub fn var(v: Var, e: i32) -> Self {
        Self::term(Rational::one(), Monomial::var(v, e))
    }

    /// `c * prod v_i^e_i`.
    pub fn monomial(c: i64, pairs: &[(Var, i32)]) -> Self {
        Self::term(Rational::from_integer(BigInt::from(c)), Monomial::from_pairs(pairs))
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Monomial, &Rational)> {
        self.terms.iter()
    }

    /// The single term of a monomial polynomial.
    pub fn as_monomial(&self) -> Option<(&Monomial, &Rational)> {
        if self.terms.len() == 1 {
            self.terms.iter().next()
        } else {
            None
        }
    }

    /// Constant term value if the polynomial is a constant.
    pub fn as_constant(&self) -> Option<Rational> {
        match self.terms.len() {
            0 => Some(Rational::zero()),
            1 => self
                .terms
                .iter()
                .next()
                .filter(|(m, _)| m.is_one())
                .map(|(_, c)| c.clone()),
            _ => None,
        }
    }

    fn add_term(&mut self, m: Monomial, c: Rational) {
        if c.is_zero() {
            return;
        }
        use std::collections::btree_map::Entry;
        match self.terms.entry(m) {
            Entry::Vacant(v) => {
                v.insert(c);
            }
            Entry::Occupied(mut o) => {
                *o.get_mut() += c;
                if o.get().is_zero() {
                    o.remove();
                }
            }
        }
    }

    pub fn scale(&self, c: &Rational) -> Self {
        if c.is_zero() {
            return Self::zero();
        }
        LaurentPoly {
            terms: self.terms.iter().map(|(m, x)| (*m, x * c)).collect(),
        }
    }

    pub fn scale_int(&self, c: i64) -> Self {
        self.scale(&Rational::from_integer(BigInt::from(c)))
    }

    /// Multiplies by a monomial `v^e`.
    pub fn shift(&self, v: Var, e: i32) -> Self {
        let mono = Monomial::var(v, e);
        LaurentPoly {
            terms: self.terms.iter().map(|(m, x)| (m.mul(&mono), x.clone())).collect(),
        }
    }

    pub fn pow(&self, e: u32) -> Self {
        let mut acc = Self::one();
        for _ in 0..e {
            acc = &acc * self;
        }
        acc
    }

    /// Smallest and largest exponent of `v`; `None` for the zero polynomial.
    pub fn degree_range(&self, v: Var) -> Option<(i32, i32)> {
        let mut it = self.terms.keys().map(|m| m.exp(v));
        let first = it.next()?;
        Some(it.fold((first, first), |(lo, hi), e| (lo.min(e), hi.max(e))))
    }

    /// Whether `v` occurs with a nonzero exponent.
    pub fn involves(&self, v: Var) -> bool {
        self.terms.keys().any(|m| m.exp(v) != 0)
    }

    /// Coefficient of `v^e`, as a polynomial free of `v`.
    pub fn coeff_of(&self, v: Var, e: i32) -> Self {
        LaurentPoly {
            terms: self
                .terms
                .iter()
                .filter(|(m, _)| m.exp(v) == e)
                .map(|(m, c)| (m.with(v, 0), c.clone()))
                .collect(),
        }
    }

    /// Ring substitution `v -> c * mono` (a unit of the Laurent ring).
    pub fn subst_monomial(&self, v: Var, c: &Rational, mono: &Monomial) -> Result<Self> {
        if c.is_zero() && self.terms.keys().any(|m| m.exp(v) < 0) {
            return Err(Error::InvalidArgument(format!(
                "cannot substitute zero for {v} under negative exponents"
            )));
        }
        let mut out = Self::zero();
        for (m, x) in &self.terms {
            let e = m.exp(v);
            let base = m.with(v, 0);
            let mut mm = base;
            for (o, d) in mm.0.iter_mut().zip(mono.0.iter()) {
                *o += d * e;
            }
            let factor = pow_rational(c, e);
            out.add_term(mm, x * factor);
        }
        Ok(out)
    }

    /// Substitutes `v -> w^e` for another variable `w` (e.g. `X -> q^3 X`).
    pub fn subst_scaled(&self, v: Var, mono: &Monomial) -> Self {
        self.subst_monomial(v, &Rational::one(), mono)
            .expect("unit coefficient substitution never fails")
    }

    /// Replaces `X` by `q^shift * X`.
    pub fn rescale_var(&self, v: Var, by: Var, shift: i32) -> Self {
        let mono = Monomial::from_pairs(&[(v, 1), (by, shift)]);
        self.subst_scaled(v, &mono)
    }

    /// Exact division in the Laurent ring, treating both operands as
    /// univariate in `v`. The leading coefficient of `divisor` in `v` must be
    /// a monomial; a nonzero remainder is an error.
    pub fn div_exact(&self, divisor: &LaurentPoly, v: Var) -> Result<Self> {
        let (dlo, dhi) = divisor
            .degree_range(v)
            .ok_or_else(|| Error::InexactDivision("division by zero".into()))?;
        let lead = divisor.coeff_of(v, dhi);
        let (lead_m, lead_c) = lead.as_monomial().ok_or_else(|| {
            Error::InexactDivision(format!("leading coefficient in {v} is not a unit"))
        })?;
        let lead_inv_m = lead_m.inverse();
        let lead_inv_c = lead_c.recip();
        let span = dhi - dlo;
        let mut rem = self.clone();
        let mut quot = Self::zero();
        while let Some((lo, hi)) = rem.degree_range(v) {
            if hi - lo < span {
                return Err(Error::InexactDivision(format!(
                    "nonzero remainder dividing by a polynomial in {v}"
                )));
            }
            let top = rem.coeff_of(v, hi);
            let factor = top
                .mul_monomial(&lead_inv_m, &lead_inv_c)
                .shift(v, hi - dhi);
            rem = &rem - &(&factor * divisor);
            quot += &factor;
        }
        Ok(quot)
    }

    fn mul_monomial(&self, mono: &Monomial, c: &Rational) -> Self {
        LaurentPoly {
            terms: self.terms.iter().map(|(m, x)| (m.mul(mono), x * c)).collect(),
        }
    }

    /// Variables that occur in some term, in alphabet order.
    pub fn variables(&self) -> Vec<Var> {
        Var::ALL.iter().copied().filter(|&v| self.involves(v)).collect()
    }

    /// Evaluates at rational points for the listed variables, keeping the others symbolic.
    pub fn eval(&self, values: &[(Var, Rational)]) -> Result<Self> {
        let mut out = self.clone();
        for (v, x) in values {
            out = out.subst_monomial(*v, x, &Monomial::one())?;
        }
        Ok(out)
    }

    /// Exponent vector map restricted to `vars` (used for serialisation).
    pub fn restricted_terms(&self, vars: &[Var]) -> Vec<(Vec<i32>, Rational)> {
        self.terms
            .iter()
            .map(|(m, c)| (vars.iter().map(|&v| m.exp(v)).collect(), c.clone()))
            .collect()
    }

    /// Rebuilds a polynomial from exponent vectors over `vars`.
    pub fn from_restricted_terms(vars: &[Var], terms: &[(Vec<i32>, Rational)]) -> Result<Self> {
        let mut out = Self::zero();
        for (exps, c) in terms {
            if exps.len() != vars.len() {
                return Err(Error::Parse(format!(
                    "exponent vector of length {} for {} variables",
                    exps.len(),
                    vars.len()
                )));
            }
            let mut m = Monomial::one();
            for (v, e) in vars.iter().zip(exps) {
                m.0[v.idx()] = *e;
            }
            out.add_term(m, c.clone());
        }
        Ok(out)
    }
}

fn pow_rational(c: &Rational, e: i32) -> Rational {
    if e >= 0 {
        num_traits::pow(c.clone(), e as usize)
    } else {
        num_traits::pow(c.recip(), (-e) as usize)
    }
}

impl fmt::Display for LaurentPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return f.write_str("0");
        }
        for (i, (m, c)) in self.terms.iter().enumerate() {
            let neg = c.is_negative();
            if i > 0 {
                f.write_str(if neg { " - " } else { " + " })?;
            } else if neg {
                f.write_str("-")?;
            }
            let abs = c.abs();
            let mut factors: Vec<String> = Vec::new();
            if !abs.is_one() || m.is_one() {
                factors.push(abs.to_string());
            }
            for v in Var::ALL {
                match m.exp(v) {
                    0 => {}
                    1 => factors.push(v.name().to_string()),
                    e => factors.push(format!("{}^{}", v.name(), e)),
                }
            }
            f.write_str(&factors.join("*"))?;
        }
        Ok(())
    }
}

impl AddAssign<&LaurentPoly> for LaurentPoly {
    fn add_assign(&mut self, rhs: &LaurentPoly) {
        for (m, c) in &rhs.terms {
            self.add_term(*m, c.clone());
        }
    }
}

impl SubAssign<&LaurentPoly> for LaurentPoly {
    fn sub_assign(&mut self, rhs: &LaurentPoly) {
        for (m, c) in &rhs.terms {
            self.add_term(*m, -c.clone());
        }
    }
}

impl Add for &LaurentPoly {
    type Output = LaurentPoly;
    fn add(self, rhs: &LaurentPoly) -> LaurentPoly {
        let mut out = self.clone();
        out += rhs;
        out
    }
}

impl Sub for &LaurentPoly {
    type Output = LaurentPoly;
    fn sub(self, rhs: &LaurentPoly) -> LaurentPoly {
        let mut out = self.clone();
        out -= rhs;
        out
    }
}

impl Mul for &LaurentPoly {
    type Output = LaurentPoly;
    fn mul(self, rhs: &LaurentPoly) -> LaurentPoly {
        let mut out = LaurentPoly::zero();
        for (ma, ca) in &self.terms {
            for (mb, cb) in &rhs.terms {
                out.add_term(ma.mul(mb), ca * cb);
            }
        }
        out
    }
}

impl Neg for &LaurentPoly {
    type Output = LaurentPoly;
    fn neg(self) -> LaurentPoly {
        LaurentPoly { terms: self.terms.iter().map(|(m, c)| (*m, -c.clone())).collect() }
    }
}

macro_rules! forward_owned {
    ($tr:ident, $method:ident) => {
        impl $tr for LaurentPoly {
            type Output = LaurentPoly;
            fn $method(self, rhs: LaurentPoly) -> LaurentPoly {
                (&self).$method(&rhs)
            }
        }
        impl $tr<&LaurentPoly> for LaurentPoly {
            type Output = LaurentPoly;
            fn $method(self, rhs: &LaurentPoly) -> LaurentPoly {
                (&self).$method(rhs)
            }
        }
    };
}
forward_owned!(Add, add);
forward_owned!(Sub, sub);
forward_owned!(Mul, mul);

impl Neg for LaurentPoly {
    type Output = LaurentPoly;
    fn neg(self) -> LaurentPoly {
        -&self
    }
}

/// Quotient `num / den` of Laurent polynomials; equality is by cross-multiplication.
#[derive(Clone, Debug)]
pub struct RatFunc {
    pub num: LaurentPoly,
    pub den: LaurentPoly,
}

impl RatFunc {
    pub fn new(num: LaurentPoly, den: LaurentPoly) -> Result<Self> {
        if den.is_zero() {
            return Err(Error::InvalidArgument("zero denominator".into()));
        }
        Ok(RatFunc { num, den })
    }

    pub fn from_poly(p: LaurentPoly) -> Self {
        RatFunc { num: p, den: LaurentPoly::one() }
    }

    pub fn one() -> Self {
        Self::from_poly(LaurentPoly::one())
    }

    /// `1 / p`.
    pub fn inverse_of(p: LaurentPoly) -> Result<Self> {
        Self::new(LaurentPoly::one(), p)
    }

    pub fn mul(&self, other: &RatFunc) -> RatFunc {
        RatFunc { num: &self.num * &other.num, den: &self.den * &other.den }
    }

    pub fn add(&self, other: &RatFunc) -> RatFunc {
        RatFunc {
            num: &(&self.num * &other.den) + &(&other.num * &self.den),
            den: &self.den * &other.den,
        }
    }

    /// Expansion coefficients of `var^0 .. var^order`; see [`series_in`].
    pub fn series_in(&self, var: Var, order: usize) -> Result<Vec<LaurentPoly>> {
        series_in(self, var, order)
    }
}

impl PartialEq for RatFunc {
    fn eq(&self, other: &Self) -> bool {
        ratfunc_equal(self, other)
    }
}

/// `a == b` iff `a.num * b.den == b.num * a.den`.
pub fn ratfunc_equal(a: &RatFunc, b: &RatFunc) -> bool {
    &a.num * &b.den == &b.num * &a.den
}

/// Formal power series expansion of `f` in `var` to `var^order`.
///
/// Numerator and denominator must be polynomials in `var` (no negative
/// powers), and the `var`-free part of the denominator must be a single
/// monomial so it is invertible in the Laurent ring.
pub fn series_in(f: &RatFunc, var: Var, order: usize) -> Result<Vec<LaurentPoly>> {
    for (label, p) in [("numerator", &f.num), ("denominator", &f.den)] {
        if let Some((lo, _)) = p.degree_range(var) {
            if lo < 0 {
                return Err(Error::NotInvertible(format!(
                    "{label} has negative powers of {var}"
                )));
            }
        }
    }
    let d0 = f.den.coeff_of(var, 0);
    let (m0, c0) = d0.as_monomial().ok_or_else(|| {
        Error::NotInvertible(format!(
            "constant term in {var} of the denominator is not invertible: {d0}"
        ))
    })?;
    let inv = LaurentPoly::term(c0.recip(), m0.inverse());
    let dhi = f.den.degree_range(var).map(|(_, hi)| hi).unwrap_or(0) as usize;
    let den: Vec<LaurentPoly> = (0..=dhi).map(|i| f.den.coeff_of(var, i as i32)).collect();
    let mut out: Vec<LaurentPoly> = Vec::with_capacity(order + 1);
    for j in 0..=order {
        let mut acc = f.num.coeff_of(var, j as i32);
        for i in 1..=dhi.min(j) {
            if !den[i].is_zero() {
                acc -= &(&den[i] * &out[j - i]);
            }
        }
        out.push(&acc * &inv);
    }
    Ok(out)
}

/// Reassembles `sum_j coeffs[j] * var^j`.
pub fn from_series(coeffs: &[LaurentPoly], var: Var) -> LaurentPoly {
    let mut out = LaurentPoly::zero();
    for (j, c) in coeffs.iter().enumerate() {
        out += &c.shift(var, j as i32);
    }
    out
}

/// Drops all terms with `var` exponent above `order`.
pub fn truncate_in(p: &LaurentPoly, var: Var, order: i32) -> LaurentPoly {
    LaurentPoly {
        terms: p
            .terms
            .iter()
            .filter(|(m, _)| m.exp(var) <= order)
            .map(|(m, c)| (*m, c.clone()))
            .collect(),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn t() -> LaurentPoly {
        LaurentPoly::var(Var::SmallT, 1)
    }

    fn one() -> LaurentPoly {
        LaurentPoly::one()
    }

    #[test]
    fn ratfunc_equality_examples() {
        let x = LaurentPoly::var(Var::X, 1);
        assert!(ratfunc_equal(&RatFunc::new(x.clone(), x).unwrap(), &RatFunc::one()));

        let a = RatFunc::new(one(), &one() - &t()).unwrap();
        let b = RatFunc::new(&one() + &t(), &one() - &(&t() * &t())).unwrap();
        assert!(ratfunc_equal(&a, &b));

        let c = RatFunc::from_poly(&one() - &t());
        let d = RatFunc::new(one(), &one() + &t()).unwrap();
        assert!(!ratfunc_equal(&c, &d));
    }

    #[test]
    fn geometric_series() {
        let f = RatFunc::new(one(), &one() - &t()).unwrap();
        let s = series_in(&f, Var::SmallT, 3).unwrap();
        assert_eq!(s, vec![one(), one(), one(), one()]);
    }

    #[test]
    fn formal_inversion_of_quadratic() {
        let a = LaurentPoly::var(Var::Alpha, 1);
        let b = LaurentPoly::var(Var::X, 1);
        let den = &(&one() - &(&a * &t())) + &(&b * &(&t() * &t()));
        let s = series_in(&RatFunc::new(one(), den).unwrap(), Var::SmallT, 2).unwrap();
        assert_eq!(s[0], one());
        assert_eq!(s[1], a);
        assert_eq!(s[2], &(&a * &a) - &b);
    }

    #[test]
    fn series_with_numerator() {
        let f = RatFunc::new(&one() + &t(), &one() - &t()).unwrap();
        let s = series_in(&f, Var::SmallT, 2).unwrap();
        assert_eq!(s, vec![one(), LaurentPoly::from_int(2), LaurentPoly::from_int(2)]);
    }

    #[test]
    fn series_rejects_non_invertible_constant() {
        let f = RatFunc::new(one(), t()).unwrap();
        assert!(matches!(series_in(&f, Var::SmallT, 2), Err(Error::NotInvertible(_))));
        let q = LaurentPoly::var(Var::Q, 1);
        let g = RatFunc::new(one(), &(&one() + &q) - &t()).unwrap();
        assert!(series_in(&g, Var::SmallT, 2).is_err());
        // A monomial constant term is a unit.
        let h = RatFunc::new(one(), &q - &t()).unwrap();
        let s = series_in(&h, Var::SmallT, 1).unwrap();
        assert_eq!(s[0], LaurentPoly::var(Var::Q, -1));
        assert_eq!(s[1], LaurentPoly::var(Var::Q, -2));
    }

    #[test]
    fn exact_division_by_x_minus_inverse() {
        let x = |e| LaurentPoly::var(Var::X, e);
        let num = &x(3) - &x(-3);
        let den = &x(1) - &x(-1);
        let q = num.div_exact(&den, Var::X).unwrap();
        assert_eq!(q, &(&x(2) + &one()) + &x(-2));
        assert!((&x(2) + &one()).div_exact(&den, Var::X).is_err());
    }

    #[test]
    fn zero_coefficients_are_not_stored() {
        let x = LaurentPoly::var(Var::X, 1);
        let z = &x - &x;
        assert!(z.is_zero());
        assert_eq!(z, LaurentPoly::zero());
    }

    #[test]
    fn substitution_is_a_ring_map() {
        let x = LaurentPoly::var(Var::X, 1);
        let p = &(&x * &x) + &LaurentPoly::var(Var::X, -1);
        let shifted = p.rescale_var(Var::X, Var::Q, 2);
        let expected = &LaurentPoly::monomial(1, &[(Var::X, 2), (Var::Q, 4)])
            + &LaurentPoly::monomial(1, &[(Var::X, -1), (Var::Q, -2)]);
        assert_eq!(shifted, expected);
        let v = p.eval(&[(Var::X, Rational::from_integer(2.into()))]).unwrap();
        assert_eq!(v.as_constant().unwrap(), Rational::new(9.into(), 2.into()));
    }

    #[test]
    fn display_is_readable() {
        let p = &LaurentPoly::monomial(-3, &[(Var::Q, 2), (Var::X, -1)]) + &one();
        assert_eq!(p.to_string(), "1 - 3*q^2*X^-1");
    }
}
