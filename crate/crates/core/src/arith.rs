//! Elementary number theory over exact integers and rationals.
//!
//! Bernoulli numbers use the convention `B_1 = -1/2`. Kronecker symbols
//! `(D/n)` are taken for positive `n`; at `p = 2` the value is `+1` for
//! `D = ±1 mod 8`, `-1` for `D = ±3 mod 8` and `0` for even `D`.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Zero};

use crate::{Error, Rational, Result};

/// Binomial coefficient as a big integer.
pub fn binomial(n: u64, k: u64) -> BigInt {
    if k > n {
        return BigInt::zero();
    }
    let k = k.min(n - k);
    let mut acc = BigInt::one();
    for i in 0..k {
        acc *= n - i;
        acc /= i + 1;
    }
    acc
}

/// Bernoulli numbers `B_0..=B_n` from `sum_{j<=m} C(m+1, j) B_j = 0`.
pub fn bernoulli_table(n: usize) -> Vec<Rational> {
    let mut table: Vec<Rational> = Vec::with_capacity(n + 1);
    table.push(Rational::one());
    for m in 1..=n {
        let mut acc = Rational::zero();
        for (j, b) in table.iter().enumerate() {
            if b.is_zero() {
                continue;
            }
            acc += Rational::from_integer(binomial(m as u64 + 1, j as u64)) * b;
        }
        table.push(-acc / Rational::from_integer(BigInt::from(m + 1)));
    }
    table
}

/// The Bernoulli number `B_n` with `B_1 = -1/2`.
pub fn bernoulli(n: usize) -> Rational {
    bernoulli_table(n).pop().expect("table is never empty")
}

/// Evaluates the Bernoulli polynomial `B_n(x) = sum_j C(n,j) B_j x^(n-j)`.
pub fn bernoulli_poly_eval(n: usize, x: &Rational) -> Rational {
    let table = bernoulli_table(n);
    // Horner in x over the coefficients C(n, j) B_j, j = 0..n.
    let mut acc = Rational::zero();
    for (j, b) in table.iter().enumerate() {
        acc = acc * x + Rational::from_integer(binomial(n as u64, j as u64)) * b;
    }
    acc
}

fn jacobi_odd(a: i64, n: u64) -> i8 {
    debug_assert!(n % 2 == 1);
    let mut n = n as u128;
    let mut a = (a as i128).rem_euclid(n as i128) as u128;
    let mut result = 1i8;
    while a != 0 {
        while a % 2 == 0 {
            a /= 2;
            if n % 8 == 3 || n % 8 == 5 {
                result = -result;
            }
        }
        std::mem::swap(&mut a, &mut n);
        if a % 4 == 3 && n % 4 == 3 {
            result = -result;
        }
        a %= n;
    }
    if n == 1 {
        result
    } else {
        0
    }
}

/// Kronecker symbol `(d/n)` for positive `n`, completely multiplicative in `n`.
///
/// `n = 0` returns `1` for `d = ±1` and `0` otherwise.
pub fn kronecker_symbol(d: i64, n: u64) -> i8 {
    if n == 0 {
        return if d.abs() == 1 { 1 } else { 0 };
    }
    let mut n = n;
    let mut sign = 1i8;
    while n % 2 == 0 {
        n /= 2;
        match d.rem_euclid(8) {
            1 | 7 => {}
            3 | 5 => sign = -sign,
            _ => return 0,
        }
    }
    if n == 1 {
        return sign;
    }
    sign * jacobi_odd(d, n)
}

/// Prime factorisation by trial division, primes ascending.
pub fn factorize(mut n: u64) -> Vec<(u64, u32)> {
    let mut out = Vec::new();
    if n < 2 {
        return out;
    }
    let mut p = 2u64;
    while p * p <= n {
        if n % p == 0 {
            let mut e = 0;
            while n % p == 0 {
                n /= p;
                e += 1;
            }
            out.push((p, e));
        }
        p += if p == 2 { 1 } else { 2 };
    }
    if n > 1 {
        out.push((n, 1));
    }
    out
}

pub fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    if n < 4 {
        return true;
    }
    if n % 2 == 0 {
        return false;
    }
    let mut d = 3;
    while d * d <= n {
        if n % d == 0 {
            return false;
        }
        d += 2;
    }
    true
}

/// All primes `<= n` (sieve of Eratosthenes).
pub fn primes_up_to(n: u64) -> Vec<u64> {
    if n < 2 {
        return Vec::new();
    }
    let n = n as usize;
    let mut composite = vec![false; n + 1];
    let mut out = Vec::new();
    for i in 2..=n {
        if !composite[i] {
            out.push(i as u64);
            let mut j = i * i;
            while j <= n {
                composite[j] = true;
                j += i;
            }
        }
    }
    out
}

pub fn mobius(n: u64) -> i8 {
    let mut sign = 1i8;
    for (_, e) in factorize(n) {
        if e > 1 {
            return 0;
        }
        sign = -sign;
    }
    sign
}

pub fn is_squarefree(n: u64) -> bool {
    n != 0 && factorize(n).iter().all(|&(_, e)| e == 1)
}

/// Positive divisors of `n`, ascending.
pub fn divisors(n: u64) -> Vec<u64> {
    let mut small = Vec::new();
    let mut large = Vec::new();
    let mut d = 1u64;
    while d * d <= n {
        if n % d == 0 {
            small.push(d);
            if d * d != n {
                large.push(n / d);
            }
        }
        d += 1;
    }
    small.extend(large.into_iter().rev());
    small
}

/// `sigma_e(n) = sum_{d | n} d^e`.
pub fn sigma(n: u64, e: u32) -> BigInt {
    divisors(n).into_iter().map(|d| BigInt::from(d).pow(e)).sum()
}

/// `p`-adic valuation of a positive integer.
pub fn valuation(mut n: u64, p: u64) -> u32 {
    let mut v = 0;
    while n != 0 && n % p == 0 {
        n /= p;
        v += 1;
    }
    v
}

/// Whether `d` is a fundamental discriminant. `1` counts (trivial character).
pub fn is_fundamental_discriminant(d: i64) -> bool {
    if d == 0 {
        return false;
    }
    match d.rem_euclid(4) {
        1 => is_squarefree(d.unsigned_abs()),
        0 => {
            let q = d / 4;
            matches!(q.rem_euclid(4), 2 | 3) && is_squarefree(q.unsigned_abs())
        }
        _ => false,
    }
}

/// Writes a discriminant `disc = 0, 1 mod 4` uniquely as `D0 * f^2` with `D0` fundamental.
pub fn fundamental_part(disc: i64) -> Result<(i64, u64)> {
    if disc == 0 || !matches!(disc.rem_euclid(4), 0 | 1) {
        return Err(Error::InvalidArgument(format!(
            "{disc} is not a nonzero discriminant"
        )));
    }
    let mut core: i64 = disc.signum();
    let mut f: u64 = 1;
    for (p, e) in factorize(disc.unsigned_abs()) {
        f *= p.pow(e / 2);
        if e % 2 == 1 {
            core *= p as i64;
        }
    }
    // core is the squarefree kernel; fix up the 2-part.
    if core.rem_euclid(4) != 1 {
        core *= 4;
        f /= 2;
    }
    debug_assert_eq!(core * (f * f) as i64, disc);
    Ok((core, f))
}

/// Splits `-m = D0 f^2` with `D0 < 0` fundamental; requires `m = 0, 3 mod 4`.
pub fn split_discriminant(m: u64) -> Result<(i64, u64)> {
    if m == 0 || !matches!(m % 4, 0 | 3) {
        return Err(Error::BadDiscriminantCongruence { m });
    }
    fundamental_part(-(m as i64))
}

/// Character power sums `S_e = sum_{a=1}^{N} chi_D(a) a^e` for `e = 0..=r`.
fn character_power_sums(d: i64, r: u32) -> Vec<BigInt> {
    let n = d.unsigned_abs();
    let chars: Vec<(u64, i8)> = (1..=n)
        .map(|a| (a, kronecker_symbol(d, a)))
        .filter(|&(_, c)| c != 0)
        .collect();
    // Fast path: everything fits in i128.
    let fast: Option<Vec<i128>> = (0..=r)
        .map(|e| {
            chars.iter().try_fold(0i128, |acc, &(a, c)| {
                let term = (a as i128).checked_pow(e)?;
                acc.checked_add(c as i128 * term)
            })
        })
        .collect();
    if let Some(sums) = fast {
        return sums.into_iter().map(BigInt::from).collect();
    }
    (0..=r)
        .map(|e| {
            chars
                .iter()
                .map(|&(a, c)| BigInt::from(c) * BigInt::from(a).pow(e))
                .sum()
        })
        .collect()
}

/// Generalised Bernoulli number `B_{r, chi_D} = |D|^(r-1) sum_{a=1}^{|D|} chi_D(a) B_r(a/|D|)`.
pub fn generalized_bernoulli(r: u32, d: i64) -> Result<Rational> {
    if r == 0 {
        return Err(Error::InvalidArgument("r must be positive".into()));
    }
    if !is_fundamental_discriminant(d) {
        return Err(Error::NotFundamental { value: d });
    }
    let n = BigInt::from(d.unsigned_abs());
    let sums = character_power_sums(d, r);
    let bern = bernoulli_table(r as usize);
    // sum_j C(r, j) B_j N^(j-1) S_{r-j}
    let mut acc = Rational::zero();
    for (j, b) in bern.iter().enumerate() {
        if b.is_zero() {
            continue;
        }
        let s = &sums[r as usize - j];
        if s.is_zero() {
            continue;
        }
        let scale = if j == 0 {
            Rational::new(BigInt::one(), n.clone())
        } else {
            Rational::from_integer(n.pow(j as u32 - 1))
        };
        acc += Rational::from_integer(binomial(r as u64, j as u64) * s) * b * scale;
    }
    Ok(acc)
}

/// Dirichlet L-value `L(1 - r, chi_D) = -B_{r, chi_D} / r`.
pub fn l_value_at_negative(r: u32, d: i64) -> Result<Rational> {
    Ok(-generalized_bernoulli(r, d)? / Rational::from_integer(BigInt::from(r)))
}

/// `base^e` for a possibly negative exponent, as an exact rational.
pub fn rational_pow(base: i64, e: i64) -> Rational {
    let b = BigInt::from(base);
    if e >= 0 {
        Rational::from_integer(b.pow(e as u32))
    } else {
        Rational::new(BigInt::one(), b.pow((-e) as u32))
    }
}

/// Greatest common divisor of two unsigned integers.
pub fn gcd(a: u64, b: u64) -> u64 {
    a.gcd(&b)
}

/// Converts an exact rational to the nearest `f64` (large magnitudes included).
pub fn rational_to_f64(x: &Rational) -> f64 {
    use num_traits::ToPrimitive;
    if let Some(v) = x.to_f64() {
        if v.is_finite() {
            return v;
        }
    }
    // Fall back on scaled conversion for extreme sizes.
    let num = x.numer();
    let den = x.denom();
    let shift = num.bits() as i64 - den.bits() as i64;
    let scaled = if shift > 0 {
        Rational::new(num.clone(), den << shift as usize)
    } else {
        Rational::new(num << (-shift) as usize, den.clone())
    };
    scaled.to_f64().unwrap_or(0.0) * 2f64.powi(shift as i32)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q(n: i64, d: i64) -> Rational {
        Rational::new(BigInt::from(n), BigInt::from(d))
    }

    #[test]
    fn bernoulli_values() {
        assert_eq!(bernoulli(0), q(1, 1));
        assert_eq!(bernoulli(1), q(-1, 2));
        assert_eq!(bernoulli(12), q(-691, 2730));
        assert_eq!(bernoulli(6), q(1, 42));
        assert!(bernoulli(7).is_zero());
    }

    #[test]
    fn bernoulli_polynomials() {
        assert_eq!(bernoulli_poly_eval(1, &q(0, 1)), q(-1, 2));
        assert_eq!(bernoulli_poly_eval(2, &q(1, 2)), q(-1, 12));
        assert_eq!(bernoulli_poly_eval(3, &q(1, 3)), q(1, 27));
    }

    #[test]
    fn kronecker_examples() {
        assert_eq!(kronecker_symbol(-3, 2), -1);
        assert_eq!(kronecker_symbol(-4, 2), 0);
        assert_eq!(kronecker_symbol(-4, 5), 1);
        assert_eq!(kronecker_symbol(-7, 2), 1);
        assert_eq!(kronecker_symbol(5, 3), -1);
        assert_eq!(kronecker_symbol(-2, 9), 1);
        assert_eq!(kronecker_symbol(-3, 3), 0);
    }

    #[test]
    fn kronecker_matches_euler_criterion() {
        for p in primes_up_to(60).into_iter().filter(|&p| p > 2) {
            for d in -40i64..40 {
                let r = d.rem_euclid(p as i64) as u128;
                let mut acc = 1u128;
                for _ in 0..(p - 1) / 2 {
                    acc = acc * r % p as u128;
                }
                let expected = if r == 0 {
                    0
                } else if acc == 1 {
                    1
                } else {
                    -1
                };
                assert_eq!(kronecker_symbol(d, p), expected, "d={d} p={p}");
            }
        }
    }

    #[test]
    fn split_examples() {
        assert_eq!(split_discriminant(3).unwrap(), (-3, 1));
        assert_eq!(split_discriminant(12).unwrap(), (-3, 2));
        assert_eq!(split_discriminant(4).unwrap(), (-4, 1));
        assert_eq!(split_discriminant(16).unwrap(), (-4, 2));
        assert_eq!(split_discriminant(32).unwrap(), (-8, 2));
        assert_eq!(split_discriminant(75).unwrap(), (-3, 5));
        assert!(split_discriminant(1).is_err());
        assert!(split_discriminant(2).is_err());
        assert!(split_discriminant(5).is_err());
        assert!(split_discriminant(0).is_err());
    }

    #[test]
    fn generalized_bernoulli_examples() {
        assert_eq!(generalized_bernoulli(3, -3).unwrap(), q(2, 3));
        assert_eq!(generalized_bernoulli(1, -4).unwrap(), q(-1, 2));
        assert_eq!(generalized_bernoulli(2, 1).unwrap(), q(1, 6));
        assert!(generalized_bernoulli(2, -12).is_err());
    }

    #[test]
    fn generalized_bernoulli_matches_direct_definition() {
        for d in [-3i64, -4, -7, -8, -15, -20, 5, 8, 12] {
            for r in 1..=6u32 {
                let n = d.unsigned_abs();
                let mut direct = Rational::zero();
                for a in 1..=n {
                    let c = kronecker_symbol(d, a);
                    if c != 0 {
                        direct += Rational::from_integer(BigInt::from(c))
                            * bernoulli_poly_eval(r as usize, &q(a as i64, n as i64));
                    }
                }
                direct *= Rational::from_integer(BigInt::from(n).pow(r - 1));
                assert_eq!(generalized_bernoulli(r, d).unwrap(), direct, "r={r} d={d}");
            }
        }
    }

    #[test]
    fn small_helpers() {
        assert_eq!(divisors(12), vec![1, 2, 3, 4, 6, 12]);
        assert_eq!(sigma(2, 5), BigInt::from(33));
        assert_eq!(mobius(30), -1);
        assert_eq!(mobius(12), 0);
        assert_eq!(primes_up_to(20), vec![2, 3, 5, 7, 11, 13, 17, 19]);
        assert_eq!(valuation(48, 2), 4);
        assert!((rational_to_f64(&q(1, 3)) - 1.0 / 3.0).abs() < 1e-16);
    }
}
