//! Level-one elliptic modular forms: `E4`, `E6`, `Δ`, Miller bases, `T(p)`,
//! and the normalised eigenforms spanning the one-dimensional cusp spaces.

use num_bigint::BigInt;
use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};

use crate::arith::{is_prime, rational_pow};
use crate::laurent::{LaurentPoly, Var};
use crate::qexp::{qexp_mul, QExpansion};
use crate::{Error, Rational, Result};

/// Weights with `dim S_k(SL_2(Z)) = 1`.
pub const ONE_DIMENSIONAL_CUSP_WEIGHTS: [u32; 6] = [12, 16, 18, 20, 22, 26];

fn divisor_power_sums(order: usize, e: u32) -> Vec<BigInt> {
    let mut out = vec![BigInt::zero(); order + 1];
    for d in 1..=order {
        let de = BigInt::from(d).pow(e);
        let mut m = d;
        while m <= order {
            out[m] += &de;
            m += d;
        }
    }
    out
}

/// `E4 = 1 + 240 sum sigma_3(n) q^n` or `E6 = 1 - 504 sum sigma_5(n) q^n`.
pub fn eisenstein_q(weight: u32, order: usize) -> Result<QExpansion> {
    let (scale, e) = match weight {
        4 => (240i64, 3),
        6 => (-504, 5),
        _ => {
            return Err(Error::UnsupportedWeight {
                weight: weight as i64,
                reason: "only E4 and E6 are generators",
            })
        }
    };
    let sig = divisor_power_sums(order, e);
    let coeffs = (0..=order).map(|n| {
        if n == 0 {
            BigInt::one()
        } else {
            &sig[n] * scale
        }
    });
    Ok(QExpansion::from_integers(coeffs))
}

/// The discriminant `Δ = q prod (1 - q^n)^24`.
///
/// Coefficients come from the logarithmic-derivative recurrence
/// `n b(n) = -24 sum_{j=1}^{n} sigma_1(j) b(n - j)` for `prod (1 - q^n)^24`;
/// this equals `(E4^3 - E6^2) / 1728` (checked in the tests).
pub fn delta_q(order: usize) -> QExpansion {
    let sig = divisor_power_sums(order, 1);
    let mut prod = vec![BigInt::zero(); order.max(1)];
    prod[0] = BigInt::one();
    for n in 1..prod.len() {
        let mut acc = BigInt::zero();
        for j in 1..=n {
            if !prod[n - j].is_zero() {
                acc += &sig[j] * &prod[n - j];
            }
        }
        prod[n] = acc * -24 / n;
    }
    let mut coeffs = vec![BigInt::zero(); order + 1];
    for n in 1..=order {
        coeffs[n] = prod[n - 1].clone();
    }
    QExpansion::from_integers(coeffs)
}

/// `dim M_k(SL_2(Z))` for even `k >= 0`.
pub fn dim_modular_forms(weight: u32) -> usize {
    if weight % 2 == 1 || weight == 2 {
        return 0;
    }
    let base = (weight / 12) as usize;
    if weight % 12 == 2 {
        base
    } else {
        base + 1
    }
}

/// `E4^a E6^b` with `4a + 6b = weight`, `b` in {0, 1}.
fn eisenstein_monomial(weight: u32, order: usize) -> Result<QExpansion> {
    if weight == 0 {
        return Ok(QExpansion::one(order));
    }
    let (a, b) = if weight % 4 == 0 { (weight / 4, 0) } else { ((weight - 6) / 4, 1) };
    if 4 * a + 6 * b != weight {
        return Err(Error::UnsupportedWeight {
            weight: weight as i64,
            reason: "no Eisenstein monomial of this weight",
        });
    }
    let mut acc = eisenstein_q(4, order)?.pow(a);
    if b == 1 {
        acc = qexp_mul(&acc, &eisenstein_q(6, order)?);
    }
    Ok(acc)
}

/// Echelonised basis `b_i = q^i + O(q^d)` of `M_weight`, `d = dim M_weight`.
pub fn miller_basis(weight: u32, order: usize) -> Result<Vec<QExpansion>> {
    if weight % 2 == 1 || weight < 4 {
        return Err(Error::UnsupportedWeight {
            weight: weight as i64,
            reason: "Miller basis needs even weight >= 4",
        });
    }
    let d = dim_modular_forms(weight);
    if order + 1 < d {
        return Err(Error::InsufficientOrder { needed: d - 1, available: order });
    }
    let delta = delta_q(order);
    let mut basis = Vec::with_capacity(d);
    let mut delta_pow = QExpansion::one(order);
    for j in 0..d {
        let e = eisenstein_monomial(weight - 12 * j as u32, order)?;
        basis.push(qexp_mul(&delta_pow, &e));
        delta_pow = qexp_mul(&delta_pow, &delta);
    }
    // basis[j] = q^j + ... already; clear the entries above the diagonal.
    for i in (0..d).rev() {
        for j in (i + 1)..d {
            let c = basis[i].coeff(j).clone();
            if !c.is_zero() {
                let sub = basis[j].scale(&c);
                basis[i] = &basis[i] - &sub;
            }
        }
    }
    Ok(basis)
}

/// `T(p)` on a weight-`weight` q-expansion, returned to order `out_order`.
pub fn hecke_tp_to(form: &QExpansion, weight: u32, p: u64, out_order: usize) -> Result<QExpansion> {
    if !is_prime(p) {
        return Err(Error::InvalidArgument(format!("{p} is not prime")));
    }
    let needed = out_order * p as usize;
    if form.order() < needed {
        return Err(Error::InsufficientOrder { needed, available: form.order() });
    }
    let pk = rational_pow(p as i64, weight as i64 - 1);
    let p = p as usize;
    let coeffs = (0..=out_order)
        .map(|n| {
            let mut c = form.coeff(p * n).clone();
            if n % p == 0 {
                c += &pk * form.coeff(n / p);
            }
            c
        })
        .collect();
    Ok(QExpansion::new(coeffs))
}

/// `T(p)`: `a(n) -> a(pn) + p^(weight-1) a(n/p)`, output order `floor(order / p)`.
pub fn hecke_tp(form: &QExpansion, weight: u32, p: u64) -> Result<QExpansion> {
    hecke_tp_to(form, weight, p, form.order() / p.max(1) as usize)
}

/// A normalised Hecke eigenform with integral coefficients.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Eigenform {
    pub weight: u32,
    pub label: String,
    #[serde(with = "crate::serial::qexp_as_table")]
    pub coeffs: QExpansion,
}

impl Eigenform {
    pub fn order(&self) -> usize {
        self.coeffs.order()
    }

    /// `a(n)`; coefficients are integers by construction.
    pub fn a(&self, n: usize) -> BigInt {
        self.coeffs.coeff(n).to_integer()
    }

    pub fn satake(&self, p: u64) -> Result<SatakeQuadratic> {
        if !is_prime(p) {
            return Err(Error::InvalidArgument(format!("{p} is not prime")));
        }
        if p as usize > self.order() {
            return Err(Error::InsufficientOrder { needed: p as usize, available: self.order() });
        }
        Ok(SatakeQuadratic {
            p,
            trace: self.a(p as usize),
            norm: BigInt::from(p).pow(self.weight - 1),
        })
    }
}

/// `X^2 - trace X + norm`, whose roots are `alpha_p^{±1} p^{(weight-1)/2}`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SatakeQuadratic {
    pub p: u64,
    pub trace: BigInt,
    pub norm: BigInt,
}

impl SatakeQuadratic {
    /// `alpha^2 + alpha^-2 = trace^2 / norm - 2`.
    pub fn alpha_sq_sum(&self) -> Rational {
        Rational::new(&self.trace * &self.trace, self.norm.clone()) - Rational::from_integer(2.into())
    }

    /// `alpha + alpha^-1 = trace / sqrt(norm)` as a float.
    pub fn alpha_sum_f64(&self) -> f64 {
        let t = crate::arith::rational_to_f64(&Rational::from_integer(self.trace.clone()));
        let n = crate::arith::rational_to_f64(&Rational::from_integer(self.norm.clone()));
        t / n.sqrt()
    }

    /// Roots are complex conjugate (`|alpha_p| = 1`) iff `trace^2 <= 4 norm`.
    pub fn deligne_bound_holds(&self) -> bool {
        &self.trace * &self.trace <= &self.norm * 4
    }
}

/// The normalised cusp eigenform of weight `weight` in {12, 16, 18, 20, 22, 26}, as `Δ E_{weight-12}`.
pub fn eigenform(weight: u32, order: usize) -> Result<Eigenform> {
    if !ONE_DIMENSIONAL_CUSP_WEIGHTS.contains(&weight) {
        return Err(Error::UnsupportedWeight {
            weight: weight as i64,
            reason: "cusp space is not one-dimensional",
        });
    }
    let e = eisenstein_monomial(weight - 12, order)?;
    let coeffs = qexp_mul(&delta_q(order), &e);
    Ok(Eigenform { weight, label: format!("{weight}.1.a"), coeffs })
}

/// Local factor `(1 - x)(1 - alpha^2 x)(1 - alpha^-2 x)` of the adjoint L-function,
/// written without radicals as `(1 - x)(1 - c x + x^2)`, `c = a(p)^2 p^(1-w) - 2`.
pub fn adjoint_euler_factor(f: &Eigenform, p: u64, x: Var) -> Result<LaurentPoly> {
    let c = f.satake(p)?.alpha_sq_sum();
    let xv = LaurentPoly::var(x, 1);
    let lin = &LaurentPoly::one() - &xv;
    let quad = &(&LaurentPoly::one() - &xv.scale(&c)) + &xv.pow(2);
    Ok(&lin * &quad)
}

/// Eigenvalue `lambda` with `T(p) form = lambda form` on the truncation, if any.
pub fn hecke_eigenvalue(form: &QExpansion, weight: u32, p: u64) -> Result<Option<Rational>> {
    let image = hecke_tp(form, weight, p)?;
    let Some(v) = form.truncate(image.order()).valuation() else {
        return Ok(if image.is_zero() { Some(Rational::zero()) } else { None });
    };
    let lambda = image.coeff(v) / form.coeff(v);
    let consistent = (0..=image.order()).all(|n| image.coeff(n) == &(form.coeff(n) * &lambda));
    Ok(consistent.then_some(lambda))
}

/// `|a(p)| <= 2 p^((w-1)/2)` for every prime up to `bound`.
pub fn deligne_check(f: &Eigenform, bound: u64) -> Result<bool> {
    for p in crate::arith::primes_up_to(bound) {
        if !f.satake(p)?.deligne_bound_holds() {
            return Ok(false);
        }
    }
    Ok(true)
}

/// Whether every coefficient is an integer.
pub fn is_integral(f: &QExpansion) -> bool {
    f.coeffs().iter().all(|c| c.is_integer())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn int(n: i64) -> Rational {
        Rational::from_integer(n.into())
    }

    #[test]
    fn eisenstein_coefficients() {
        let e4 = eisenstein_q(4, 5).unwrap();
        let e6 = eisenstein_q(6, 5).unwrap();
        assert_eq!(e4.coeff(0), &int(1));
        assert_eq!(e4.coeff(1), &int(240));
        assert_eq!(e6.coeff(2), &int(-16632));
        assert!(eisenstein_q(8, 5).is_err());
    }

    #[test]
    fn delta_coefficients() {
        let d = delta_q(6);
        let expected = [0, 1, -24, 252, -1472, 4830, -6048];
        for (n, e) in expected.iter().enumerate() {
            assert_eq!(d.coeff(n), &int(*e));
        }
    }

    #[test]
    fn delta_equals_eisenstein_combination() {
        let order = 60;
        let e4 = eisenstein_q(4, order).unwrap();
        let e6 = eisenstein_q(6, order).unwrap();
        let diff = &e4.pow(3) - &e6.pow(2);
        assert!(is_integral(&diff.scale(&Rational::new(1.into(), 1728.into()))));
        assert_eq!(diff.scale(&Rational::new(1.into(), 1728.into())), delta_q(order));
    }

    #[test]
    fn miller_bases() {
        let b12 = miller_basis(12, 10).unwrap();
        assert_eq!(b12.len(), 2);
        assert_eq!(b12[1], delta_q(10));
        assert_eq!(b12[0].coeff(1), &int(0));
        assert_eq!(miller_basis(18, 10).unwrap().len(), 2);
        let b4 = miller_basis(4, 10).unwrap();
        assert_eq!(b4, vec![eisenstein_q(4, 10).unwrap()]);
        assert!(miller_basis(7, 10).is_err());
        assert_eq!(miller_basis(24, 10).unwrap().len(), 3);
        for (i, b) in miller_basis(36, 12).unwrap().iter().enumerate() {
            for j in 0..4 {
                assert_eq!(b.coeff(j), &int((i == j) as i64));
            }
        }
    }

    #[test]
    fn hecke_examples() {
        let t2 = hecke_tp(&delta_q(20), 12, 2).unwrap();
        assert_eq!(t2.order(), 10);
        assert_eq!(t2.coeff(1), &int(-24));
        let e4 = miller_basis(4, 20).unwrap().remove(0);
        assert_eq!(hecke_eigenvalue(&e4, 4, 2).unwrap(), Some(int(9)));
        assert!(hecke_tp(&QExpansion::zero(10), 12, 2).unwrap().is_zero());
        assert!(hecke_tp_to(&delta_q(10), 12, 3, 4).is_err());
    }

    #[test]
    fn eigenform_examples() {
        let f12 = eigenform(12, 10).unwrap();
        assert_eq!(f12.coeffs, delta_q(10));
        let f18 = eigenform(18, 10).unwrap();
        assert_eq!(f18.a(2), BigInt::from(-528));
        let f22 = eigenform(22, 10).unwrap();
        assert_eq!(f22.a(1), BigInt::from(1));
        assert!(eigenform(24, 10).is_err());
        assert!(eigenform(14, 10).is_err());
    }

    #[test]
    fn adjoint_factor() {
        let f = eigenform(18, 10).unwrap();
        let fac = adjoint_euler_factor(&f, 2, Var::SmallT).unwrap();
        assert_eq!(fac.coeff_of(Var::SmallT, 0).as_constant().unwrap(), int(1));
        let c = Rational::new(278784.into(), 131072.into()) - int(2);
        // (1 - x)(1 - c x + x^2) has x-coefficient -(1 + c).
        assert_eq!(fac.coeff_of(Var::SmallT, 1).as_constant().unwrap(), -(int(1) + &c));
        assert_eq!(fac.coeff_of(Var::SmallT, 3).as_constant().unwrap(), int(-1));
    }

    #[test]
    fn adjoint_factor_with_vanishing_trace() {
        let f = Eigenform {
            weight: 12,
            label: "zero-trace".into(),
            coeffs: QExpansion::from_integers([0i64, 1, 0, 0]),
        };
        let fac = adjoint_euler_factor(&f, 2, Var::SmallT).unwrap();
        let x = LaurentPoly::var(Var::SmallT, 1);
        let one = LaurentPoly::one();
        let expected = &(&one - &x) * &(&one + &x).pow(2);
        assert_eq!(fac, expected);
    }
}
