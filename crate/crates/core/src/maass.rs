//! Coefficient-level algebra of the index-shift operators at a prime.
//!
//! Powers of `p` are written in `q = p^(1/2)`. The operators `U_p`, `D-hat(p^2)`
//! at one prime commute, so they live in the commutative ring
//! `Q[q^±1][u, d]`; a second prime uses the disjoint variables `q2, u2, d2`.

use std::collections::BTreeMap;

use num_traits::Zero;

use crate::arith::{kronecker_symbol, rational_pow};
use crate::halfint::{iota1, jacobi_cusp_index1};
use crate::laurent::{series_in, truncate_in, LaurentPoly, Monomial, RatFunc, Var};
use crate::modforms::eigenform;
use crate::report::VerificationReport;
use crate::{Error, Rational, Result};

/// Characters a Legendre symbol can take.
pub const CHI_VALUES: [i64; 3] = [-1, 0, 1];

fn lp_q(e: i64) -> LaurentPoly {
    LaurentPoly::var(Var::Q, e as i32)
}

/// `b_{beta, alpha, l}(X)` of the Maass relation.
pub fn b_entry(beta: i64, alpha: i64, l: i64) -> Result<LaurentPoly> {
    if l < 1 || !(0..l).contains(&beta) || !(0..=l).contains(&alpha) {
        return Err(Error::IndexOutOfRange(format!(
            "b entry ({beta}, {alpha}) for l = {l}"
        )));
    }
    Ok(match alpha - beta {
        2 => &lp_q(2 * (l + 1 - alpha) + 1) - &lp_q(2 * (alpha - l - 1) + 1),
        1 => (&LaurentPoly::var(Var::X, 1) + &LaurentPoly::var(Var::X, -1)).shift(Var::Q, 2),
        0 => lp_q(2 * (alpha - l) + 3),
        _ => LaurentPoly::zero(),
    })
}

/// Dense matrix of Laurent polynomials in `(q, X)`.
#[derive(Clone, Debug, PartialEq)]
pub struct MaassMatrix {
    pub rows: usize,
    pub cols: usize,
    entries: Vec<LaurentPoly>,
}

impl MaassMatrix {
    pub fn zero(rows: usize, cols: usize) -> Self {
        MaassMatrix { rows, cols, entries: vec![LaurentPoly::zero(); rows * cols] }
    }

    pub fn get(&self, r: usize, c: usize) -> &LaurentPoly {
        &self.entries[r * self.cols + c]
    }

    fn set(&mut self, r: usize, c: usize, v: LaurentPoly) {
        self.entries[r * self.cols + c] = v;
    }

    pub fn mul(&self, other: &MaassMatrix) -> Result<MaassMatrix> {
        if self.cols != other.rows {
            return Err(Error::InvalidArgument(format!(
                "shape mismatch {}x{} * {}x{}",
                self.rows, self.cols, other.rows, other.cols
            )));
        }
        let mut out = MaassMatrix::zero(self.rows, other.cols);
        for r in 0..self.rows {
            for c in 0..other.cols {
                let mut acc = LaurentPoly::zero();
                for j in 0..self.cols {
                    let (a, b) = (self.get(r, j), other.get(j, c));
                    if !a.is_zero() && !b.is_zero() {
                        acc += &(a * b);
                    }
                }
                out.set(r, c, acc);
            }
        }
        Ok(out)
    }

    /// Applies `X -> q^shift X` entrywise.
    pub fn rescale_x(&self, shift: i32) -> MaassMatrix {
        MaassMatrix {
            rows: self.rows,
            cols: self.cols,
            entries: self.entries.iter().map(|e| e.rescale_var(Var::X, Var::Q, shift)).collect(),
        }
    }

    /// Applies `X -> alpha` entrywise.
    pub fn at_alpha(&self) -> MaassMatrix {
        let alpha = Monomial::var(Var::Alpha, 1);
        MaassMatrix {
            rows: self.rows,
            cols: self.cols,
            entries: self.entries.iter().map(|e| e.subst_scaled(Var::X, &alpha)).collect(),
        }
    }
}

/// `B_{l,l+1}(X)`, an `l x (l+1)` matrix.
pub fn b_matrix(l: i64) -> Result<MaassMatrix> {
    if l < 1 {
        return Err(Error::InvalidArgument(format!("B_(l,l+1) needs l >= 1, got {l}")));
    }
    let mut m = MaassMatrix::zero(l as usize, l as usize + 1);
    for beta in 0..l {
        for alpha in 0..=l {
            m.set(beta as usize, alpha as usize, b_entry(beta, alpha, l)?);
        }
    }
    Ok(m)
}

/// `prod_{l=2}^{L} B_{l,l+1}(q^(L+2-2l) X)`, a `2 x (L+1)` matrix.
pub fn a_matrix(big_l: i64) -> Result<MaassMatrix> {
    if big_l < 2 || big_l % 2 != 0 {
        return Err(Error::InvalidArgument(format!("A matrix needs even L >= 2, got {big_l}")));
    }
    let mut acc = b_matrix(2)?.rescale_x((big_l - 2) as i32);
    for l in 3..=big_l {
        acc = acc.mul(&b_matrix(l)?.rescale_x((big_l + 2 - 2 * l) as i32))?;
    }
    Ok(acc)
}

/// `(a1, a2)` of column `i` of the Maass relation for degree-`n` forms of weight `k`,
/// with `X` specialised to `alpha`.
pub fn maass_coeffs(n: i64, k: i64, i: usize) -> Result<(LaurentPoly, LaurentPoly)> {
    if n < 2 {
        return Err(Error::InvalidArgument(format!("Maass coefficients need n >= 2, got {n}")));
    }
    if i > (2 * n - 2) as usize {
        return Err(Error::IndexOutOfRange(format!("column {i} for n = {n}")));
    }
    let a = a_matrix(2 * n - 2)?.at_alpha();
    let prefactor = 2 * k * (2 * n - 3) - 4 * n * n - 2 * n + 11;
    let a1 = a.get(0, i).shift(Var::Q, (prefactor + 2 * k - 4 + i as i64) as i32);
    let a2 = a.get(1, i).shift(Var::Q, (prefactor + i as i64) as i32);
    Ok((a1, a2))
}

/// `p^(k(2n-3) - 4n^2 + 7n - 3/2)` as a power of `q`.
pub fn expected_a2(n: i64, k: i64) -> LaurentPoly {
    lp_q(2 * k * (2 * n - 3) - 8 * n * n + 14 * n - 3)
}

/// Checks that `a2` at column 1 is the monomial [`expected_a2`] and free of `alpha`.
pub fn verify_maass_a2(n: i64, k: i64) -> Result<VerificationReport> {
    let (_, a2) = maass_coeffs(n, k, 1)?;
    let expected = expected_a2(n, k);
    let mut report = VerificationReport::new("maass-a2").param("k", k).param("n", n);
    report.check(!a2.involves(Var::Alpha), || format!("a2 depends on alpha: {a2}"));
    report.check(a2 == expected, || format!("a2 = {a2}, expected {expected}"));
    Ok(report)
}

/// Variables of the index-shift algebra at one prime.
#[derive(Copy, Clone, Debug, PartialEq, Eq)]
pub struct PrimeSlot {
    pub q: Var,
    pub u: Var,
    pub d: Var,
}

impl PrimeSlot {
    pub const FIRST: PrimeSlot = PrimeSlot { q: Var::Q, u: Var::U, d: Var::D };
    pub const SECOND: PrimeSlot = PrimeSlot { q: Var::Q2, u: Var::U2, d: Var::D2 };

    fn mono(&self, qe: i64, ue: i64) -> LaurentPoly {
        LaurentPoly::monomial(1, &[(self.q, qe as i32), (self.u, ue as i32)])
    }
}

/// Element of the index-shift algebra for fixed `(k, n)`.
#[derive(Clone, Debug, PartialEq)]
pub struct OpPoly {
    pub k: i64,
    pub n: i64,
    pub poly: LaurentPoly,
}

impl OpPoly {
    /// Coefficients of the powers of `u`.
    pub fn u_coeffs(&self) -> BTreeMap<i32, LaurentPoly> {
        let mut out = BTreeMap::new();
        if let Some((lo, hi)) = self.poly.degree_range(Var::U) {
            for e in lo..=hi {
                let c = self.poly.coeff_of(Var::U, e);
                if !c.is_zero() {
                    out.insert(e, c);
                }
            }
        }
        out
    }

    pub fn mul(&self, other: &OpPoly) -> OpPoly {
        OpPoly { k: self.k, n: self.n, poly: &self.poly * &other.poly }
    }

    /// Scalar value on a Hecke eigenform: `u -> 1`, `d -> d_value`, `q^2 -> p`.
    pub fn scalar_avatar(&self, p: u64, d_value: &Rational) -> Result<Rational> {
        eval_at_prime(&self.poly, PrimeSlot::FIRST, p, d_value)
    }
}

fn eval_at_prime(poly: &LaurentPoly, slot: PrimeSlot, p: u64, d_value: &Rational) -> Result<Rational> {
    let mut acc = Rational::zero();
    for (m, c) in poly.terms() {
        let qe = m.exp(slot.q);
        if qe % 2 != 0 {
            return Err(Error::InvalidArgument(format!("odd power of q in {poly}")));
        }
        let de = m.exp(slot.d);
        let dpow = if de >= 0 {
            num_traits::pow(d_value.clone(), de as usize)
        } else {
            num_traits::pow(d_value.recip(), (-de) as usize)
        };
        acc += c * rational_pow(p as i64, (qe / 2) as i64) * dpow;
    }
    Ok(acc)
}

fn dhat_polys(slot: PrimeSlot, delta_max: usize, k: i64) -> Vec<LaurentPoly> {
    let mut out = vec![LaurentPoly::one()];
    if delta_max >= 1 {
        out.push(LaurentPoly::var(slot.d, 1));
    }
    let step = slot.mono(4 * k - 6, 2);
    let d = LaurentPoly::var(slot.d, 1);
    for delta in 2..=delta_max {
        let next = &(&d * &out[delta - 1]) - &(&step * &out[delta - 2]);
        out.push(next);
    }
    out
}

fn d_polys(slot: PrimeSlot, delta_max: usize, k: i64, chi: i64) -> Vec<LaurentPoly> {
    let dhat = dhat_polys(slot, delta_max, k);
    let twist = slot.mono(2 * k - 4, 1).scale_int(chi);
    (0..=delta_max)
        .map(|delta| {
            if delta == 0 {
                dhat[0].clone()
            } else {
                &dhat[delta] - &(&twist * &dhat[delta - 1])
            }
        })
        .collect()
}

/// `D-hat(p^(2 delta))` for `delta = 0..=delta_max`.
pub fn dhat_seq(delta_max: usize, k: i64, n: i64) -> Vec<OpPoly> {
    dhat_polys(PrimeSlot::FIRST, delta_max, k)
        .into_iter()
        .map(|poly| OpPoly { k, n, poly })
        .collect()
}

/// `D(p^(2 delta)) = D-hat(p^(2 delta)) - chi p^(k-2) U_p D-hat(p^(2 delta - 2))`.
pub fn d_seq(delta_max: usize, k: i64, n: i64, chi: i64) -> Result<Vec<OpPoly>> {
    check_chi(chi)?;
    Ok(d_polys(PrimeSlot::FIRST, delta_max, k, chi)
        .into_iter()
        .map(|poly| OpPoly { k, n, poly })
        .collect())
}

fn check_chi(chi: i64) -> Result<()> {
    if CHI_VALUES.contains(&chi) {
        Ok(())
    } else {
        Err(Error::InvalidArgument(format!("character value must be -1, 0 or 1, got {chi}")))
    }
}

/// Right-hand side of the single-prime product rule:
/// `sum_i p^((2k-3)i) U_(p^2i) X(p^(2(a+b-2i)))`, minus the twisted sum for `D`.
fn one_prime_rhs(seq: &[LaurentPoly], slot: PrimeSlot, k: i64, chi: i64, a: usize, b: usize) -> LaurentPoly {
    let lo = a.min(b);
    let mut acc = LaurentPoly::zero();
    for i in 0..=lo {
        acc += &(&slot.mono((4 * k - 6) * i as i64, 2 * i as i64) * &seq[a + b - 2 * i]);
    }
    if chi != 0 {
        for i in 0..lo {
            let c = slot.mono(2 * k - 4 + (4 * k - 6) * i as i64, 2 * i as i64 + 1);
            acc -= &(&c.scale_int(chi) * &seq[a + b - 1 - 2 * i]);
        }
    }
    acc
}

/// Product rules for `D-hat` and `D` with all prime-power exponents up to `bound`:
/// the single-prime rules for `D-hat` and `D`, and their two-prime forms summed over
/// `d | (N, M)` (and `d1 | (N, M)/d` for `D`) with `N, M` supported on two primes.
pub fn verify_dd(bound: usize, k: i64, n: i64, chi: i64) -> Result<VerificationReport> {
    check_chi(chi)?;
    let mut report = VerificationReport::new("dd")
        .param("bound", bound as u64)
        .param("k", k)
        .param("n", n)
        .param("chi", chi);
    let (s1, s2) = (PrimeSlot::FIRST, PrimeSlot::SECOND);
    let top = 2 * bound;
    let dhat = dhat_polys(s1, top, k);
    let dd = d_polys(s1, top, k, chi);
    for a in 0..=bound {
        for b in 0..=bound {
            let lhs = &dhat[a] * &dhat[b];
            report.check(lhs == one_prime_rhs(&dhat, s1, k, 0, a, b), || {
                format!("D-hat product at (delta, gamma) = ({a}, {b})")
            });
            let lhs = &dd[a] * &dd[b];
            report.check(lhs == one_prime_rhs(&dd, s1, k, chi, a, b), || {
                format!("D product at (delta, gamma) = ({a}, {b})")
            });
        }
    }

    let dhat2 = dhat_polys(s2, top, k);
    for chi2 in CHI_VALUES {
        let dd2 = d_polys(s2, top, k, chi2);
        for (a1, b1, a2, b2) in exponent_quads(bound) {
            let lhs = &(&dd[a1] * &dd2[a2]) * &(&dd[b1] * &dd2[b2]);
            let rhs = two_prime_d_rhs(&dd, &dd2, k, (chi, chi2), (a1, b1), (a2, b2));
            report.check(lhs == rhs, || {
                format!("two-prime D product at N = p^{a1} p'^{a2}, M = p^{b1} p'^{b2}, chi' = {chi2}")
            });
        }
    }
    for (a1, b1, a2, b2) in exponent_quads(bound) {
        let lhs = &(&dhat[a1] * &dhat2[a2]) * &(&dhat[b1] * &dhat2[b2]);
        let rhs = two_prime_dhat_rhs(&dhat, &dhat2, k, (a1, b1), (a2, b2));
        report.check(lhs == rhs, || {
            format!("two-prime D-hat product at N = p^{a1} p'^{a2}, M = p^{b1} p'^{b2}")
        });
    }
    Ok(report)
}

fn exponent_quads(bound: usize) -> impl Iterator<Item = (usize, usize, usize, usize)> {
    (0..=bound).flat_map(move |a1| {
        (0..=bound).flat_map(move |b1| {
            (0..=bound).flat_map(move |a2| (0..=bound).map(move |b2| (a1, b1, a2, b2)))
        })
    })
}

/// `sum_{d | (N,M)} d^(2k-3) U_(d^2) D-hat(N^2 M^2 / d^4)`.
fn two_prime_dhat_rhs(
    s: &[LaurentPoly],
    s2: &[LaurentPoly],
    k: i64,
    (a1, b1): (usize, usize),
    (a2, b2): (usize, usize),
) -> LaurentPoly {
    let (p1, p2) = (PrimeSlot::FIRST, PrimeSlot::SECOND);
    let mut acc = LaurentPoly::zero();
    for i in 0..=a1.min(b1) {
        for j in 0..=a2.min(b2) {
            let coeff = &p1.mono((4 * k - 6) * i as i64, 2 * i as i64)
                * &p2.mono((4 * k - 6) * j as i64, 2 * j as i64);
            acc += &(&coeff * &(&s[a1 + b1 - 2 * i] * &s2[a2 + b2 - 2 * j]));
        }
    }
    acc
}

/// `sum_{d | (N,M)} d^(2k-3) sum_{d1 | (N,M)/d} mu(d1) d1^(k-2) (-m/d1) U_(d^2 d1) D(N^2 M^2 / (d^4 d1^2))`.
fn two_prime_d_rhs(
    s: &[LaurentPoly],
    s2: &[LaurentPoly],
    k: i64,
    (chi1, chi2): (i64, i64),
    (a1, b1): (usize, usize),
    (a2, b2): (usize, usize),
) -> LaurentPoly {
    let (p1, p2) = (PrimeSlot::FIRST, PrimeSlot::SECOND);
    let (g1, g2) = (a1.min(b1), a2.min(b2));
    let mut acc = LaurentPoly::zero();
    for i in 0..=g1 {
        for j in 0..=g2 {
            for e1 in 0..=usize::from(i < g1) {
                for e2 in 0..=usize::from(j < g2) {
                    let sign = if (e1 + e2) % 2 == 0 { 1 } else { -1 };
                    let chi = sign * chi1.pow(e1 as u32) * chi2.pow(e2 as u32);
                    if chi == 0 {
                        continue;
                    }
                    let coeff = &p1.mono((4 * k - 6) * i as i64 + (2 * k - 4) * e1 as i64, (2 * i + e1) as i64)
                        * &p2.mono((4 * k - 6) * j as i64 + (2 * k - 4) * e2 as i64, (2 * j + e2) as i64);
                    let op = &s[a1 + b1 - 2 * i - e1] * &s2[a2 + b2 - 2 * j - e2];
                    acc += &(&coeff.scale_int(chi) * &op);
                }
            }
        }
    }
    acc
}

/// `Psi^(n')(p^nu, X) = (X^(nu+1) - X^-(nu+1)) / (X - X^-1) - chi q^(-n'-1) (X^nu - X^-nu) / (X - X^-1)`.
pub fn psi(nu: u32, nprime: i64, chi: i64, xvar: Var) -> Result<LaurentPoly> {
    let x = |e: i64| LaurentPoly::var(xvar, e as i32);
    let den = &x(1) - &x(-1);
    let nu = nu as i64;
    let first = (&x(nu + 1) - &x(-nu - 1)).div_exact(&den, xvar)?;
    if chi == 0 || nu == 0 {
        return Ok(first);
    }
    let second = (&x(nu) - &x(-nu)).div_exact(&den, xvar)?;
    Ok(&first - &second.shift(Var::Q, (-nprime - 1) as i32).scale_int(chi))
}

/// `1 + sum_{i<nu} (p^((2k-3)(nu-i)) - chi p^(k-2+(2k-3)(nu-i-1))) p^(-n'(nu-i))`
/// against `p^((k-n'/2-3/2) nu) Psi^(n')(p^nu, p^(k-n'/2-3/2))`, for every `chi`.
pub fn verify_psi_chain(nu_max: u32, nprime: i64, k: i64) -> Result<VerificationReport> {
    let mut report = VerificationReport::new("psi-chain")
        .param("nu_max", nu_max)
        .param("nprime", nprime)
        .param("k", k);
    let x_at = Monomial::var(Var::Q, (2 * k - nprime - 3) as i32);
    for chi in CHI_VALUES {
        for nu in 0..=nu_max as i64 {
            let mut lhs = LaurentPoly::one();
            for i in 0..nu {
                let j = nu - i;
                lhs += &lp_q((4 * k - 6) * j - 2 * nprime * j);
                lhs -= &lp_q(2 * k - 4 + (4 * k - 6) * (j - 1) - 2 * nprime * j).scale_int(chi);
            }
            let rhs = psi(nu as u32, nprime, chi, Var::X)?
                .subst_scaled(Var::X, &x_at)
                .shift(Var::Q, ((2 * k - nprime - 3) * nu) as i32);
            report.check(lhs == rhs, || format!("nu={nu}, chi={chi}: {lhs} vs {rhs}"));
        }
    }
    Ok(report)
}

fn tpoly(pairs: &[(i64, &[(Var, i32)])]) -> LaurentPoly {
    let mut acc = LaurentPoly::zero();
    for (c, m) in pairs {
        acc += &LaurentPoly::monomial(*c, m);
    }
    acc
}

/// `1 / (1 - T q^(4n-4))`, the zeta factor.
fn zeta_factor_den(n: i64) -> LaurentPoly {
    tpoly(&[(1, &[]), (-1, &[(Var::T, 1), (Var::Q, (4 * n - 4) as i32)])])
}

/// `(1 - alpha^2 T)(1 - alpha^-2 T)`.
fn satake_den() -> LaurentPoly {
    let a = tpoly(&[(1, &[]), (-1, &[(Var::T, 1), (Var::Alpha, 2)])]);
    let b = tpoly(&[(1, &[]), (-1, &[(Var::T, 1), (Var::Alpha, -2)])]);
    &a * &b
}

fn alpha_trace() -> LaurentPoly {
    &LaurentPoly::var(Var::Alpha, 1) + &LaurentPoly::var(Var::Alpha, -1)
}

/// The local factor summed from its `Psi` expansion, to `T^order`.
pub fn theorem_factor_series(n: i64, chi: i64, order: usize) -> Result<Vec<LaurentPoly>> {
    let np = 2 * n - 2;
    let mut sum = LaurentPoly::zero();
    for nu in 0..=order as u32 {
        let mut c = psi(2 * nu, np, chi, Var::Alpha)?;
        if nu >= 1 && chi != 0 {
            c -= &psi(2 * nu - 1, np, chi, Var::Alpha)?.shift(Var::Q, (2 * n - 3) as i32).scale_int(chi);
        }
        sum += &c.shift(Var::T, nu as i32);
    }
    let mut geom = LaurentPoly::zero();
    for j in 0..=order as i32 {
        geom += &LaurentPoly::monomial(1, &[(Var::T, j), (Var::Q, j * (4 * n as i32 - 4))]);
    }
    let prod = truncate_in(&(&sum * &geom), Var::T, order as i32);
    Ok((0..=order).map(|j| prod.coeff_of(Var::T, j as i32)).collect())
}

/// The three closed forms of the local factor at a prime with `(D0/p) = chi`:
/// the combined fraction, the `zeta * L * inner` form and the final bracket form.
pub fn theorem_factor_forms(n: i64, chi: i64) -> Result<[RatFunc; 3]> {
    check_chi(chi)?;
    let t = |e: i32| LaurentPoly::var(Var::T, e);
    let one = LaurentPoly::one();
    let chi_sq = chi * chi;
    // 1 + chi^2 T q^-2
    let ram = &one + &LaurentPoly::monomial(chi_sq, &[(Var::T, 1), (Var::Q, -2)]);
    let tr = alpha_trace();
    let q1 = (1 - 2 * n) as i32;
    let q_pair = &lp_q(1 - 2 * n) + &lp_q(2 * n - 3);
    let zeta = zeta_factor_den(n);

    let num_ii = &(&(&one + &t(1)) * &ram) - &(&(&tr * &q_pair) * &t(1)).scale_int(chi);
    let ii = RatFunc::new(num_ii, &satake_den() * &zeta)?;

    let one_m_t2 = &one - &t(2);
    let one_m_t = &one - &t(1);
    let q_sum = &one + &lp_q(4 * n - 4);
    let twist = (&(&(&one_m_t * &q_sum) * &tr) * &LaurentPoly::monomial(1, &[(Var::T, 1), (Var::Q, q1)]))
        .scale_int(chi);
    let inner = &(&one_m_t2 * &ram) - &twist;
    let l_den = &one_m_t * &satake_den();
    let iii = RatFunc::new(inner, &l_den * &zeta)?;

    // (1 - T^2) L_p [ram - chi tr q^(1-2n) (1 + q^(4n-4)) T / (1 + T)]
    let one_p_t = &one + &t(1);
    let bracket_num = &(&ram * &one_p_t)
        - &(&(&tr * &q_sum) * &LaurentPoly::monomial(1, &[(Var::T, 1), (Var::Q, q1)])).scale_int(chi);
    let iv = RatFunc::new(&one_m_t2 * &bracket_num, &(&l_den * &one_p_t) * &zeta)?;
    Ok([ii, iii, iv])
}

/// Checks the derivation of the local factor at one prime: the `Psi` series agrees with
/// each closed form to `T^t_order`, and the closed forms agree as rational functions.
pub fn verify_theorem_factor(n: i64, k: i64, chi: i64, t_order: usize) -> Result<VerificationReport> {
    if !(1..=3).contains(&n) {
        return Err(Error::InvalidArgument(format!("n must be 1, 2 or 3, got {n}")));
    }
    let forms = theorem_factor_forms(n, chi)?;
    let series = theorem_factor_series(n, chi, t_order)?;
    let mut report = VerificationReport::new("euler-factor")
        .param("n", n)
        .param("k", k)
        .param("chi", chi)
        .param("t_order", t_order as u64);
    report.check(series[0] == LaurentPoly::one(), || format!("constant term {}", series[0]));
    let labels = ["combined", "zeta-L-inner", "bracket"];
    for (form, label) in forms.iter().zip(labels) {
        let expansion = series_in(form, Var::T, t_order)?;
        for (j, (a, b)) in series.iter().zip(&expansion).enumerate() {
            report.check(a == b, || format!("{label} form, coefficient of T^{j}: {a} vs {b}"));
        }
    }
    report.check(forms[0] == forms[1], || "combined vs zeta-L-inner as rational functions".into());
    report.check(forms[1] == forms[2], || "zeta-L-inner vs bracket as rational functions".into());
    Ok(report)
}

/// At `n = 1` the index-shift identity becomes `c(m p^(2 delta)) = D(p^(2 delta)) c(m)` with
/// `D-hat(p^2)` acting by `a_f(p)`, `U_p` by `1` and `chi = (-m/p)`.
/// Checks this on `g = iota_1(phi_{k,1})` and `f` of weight `2k - 2`.
pub fn verify_coefficient_recursion(
    k: u32,
    ms: &[u64],
    primes: &[u64],
    delta_max: u32,
) -> Result<VerificationReport> {
    let top = ms.iter().max().copied().unwrap_or(0)
        * primes.iter().map(|p| p.pow(2 * delta_max)).max().unwrap_or(1);
    let g = iota1(&jacobi_cusp_index1(k, top as usize)?);
    let f = eigenform(2 * k - 2, primes.iter().copied().max().unwrap_or(2) as usize)?;
    let mut report = VerificationReport::new("coefficient-recursion")
        .param("k", k)
        .param("m", ms.to_vec())
        .param("primes", primes.to_vec())
        .param("delta_max", delta_max);
    for &p in primes {
        let ap = Rational::from_integer(f.a(p as usize));
        for &m in ms {
            let chi = kronecker_symbol(-(m as i64), p) as i64;
            let seq = d_seq(delta_max as usize, k as i64, 1, chi)?;
            for (delta, op) in seq.iter().enumerate() {
                let lhs = g.coeff((m * p.pow(2 * delta as u32)) as usize);
                let rhs = op.scalar_avatar(p, &ap)? * g.coeff(m as usize);
                report.check(lhs == &rhs, || format!("m={m}, p={p}, delta={delta}: {lhs} vs {rhs}"));
            }
        }
    }
    Ok(report)
}
