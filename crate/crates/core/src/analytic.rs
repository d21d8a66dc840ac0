//! Floating-point evaluation of both sides of the Rankin–Selberg identity at `n = 1`:
//!
//! `sum_m c(m)^2 / m^(s+k-3/2)` against
//! `zeta(2s) / zeta(4s) L(2s, f, Ad) sum_{D0} c(|D0|)^2 / |D0|^(s+k-3/2) prod_p B_p(D0)`
//! with `B_p = 1 + p^(-2s-1) - 2 (D0/p) p^(1-k) a_f(p) / (1 + p^(2s))`.
//!
//! Every reported tail is an upper bound on the truncation error except the
//! coefficient sums, where it rests on a majorant fitted to the top decade.

use num_traits::Zero;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::arith::{
    bernoulli, is_fundamental_discriminant, kronecker_symbol, primes_up_to, rational_pow,
    rational_to_f64,
};
use crate::halfint::{iota1, jacobi_cusp_index1, PlusSpaceForm};
use crate::modforms::{eigenform, Eigenform};
use crate::{Error, Rational, Result};

/// Neumaier's compensated summation.
#[derive(Clone, Copy, Debug, Default)]
pub struct NeumaierSum {
    sum: f64,
    comp: f64,
}

impl NeumaierSum {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn add(&mut self, x: f64) {
        let t = self.sum + x;
        if self.sum.abs() >= x.abs() {
            self.comp += (self.sum - t) + x;
        } else {
            self.comp += (x - t) + self.sum;
        }
        self.sum = t;
    }

    pub fn value(&self) -> f64 {
        self.sum + self.comp
    }
}

/// Compensated sum in iteration order.
pub fn compensated_sum(xs: impl IntoIterator<Item = f64>) -> f64 {
    let mut acc = NeumaierSum::new();
    for x in xs {
        acc.add(x);
    }
    acc.value()
}

fn check_real_s(s: f64, what: &str) -> Result<()> {
    if !(s.is_finite() && s > 1.0) {
        return Err(Error::InvalidArgument(format!("{what} needs real s > 1, got {s}")));
    }
    Ok(())
}

/// `zeta(s)` for real `s > 1` to absolute accuracy `eps`.
///
/// Euler–Maclaurin: `sum_{n<N} n^-s + N^(1-s)/(s-1) + N^-s/2 + sum_j B_2j/(2j)! s(s+1)..(s+2j-2) N^(1-s-2j)`.
/// The remainder after the last kept correction is bounded by the first dropped one.
pub fn zeta_num(s: f64, eps: f64) -> Result<f64> {
    check_real_s(s, "zeta")?;
    if !(eps > 0.0) {
        return Err(Error::InvalidArgument(format!("tolerance must be positive, got {eps}")));
    }
    const N: usize = 16;
    let nf = N as f64;
    let mut acc = NeumaierSum::new();
    for n in (1..N).rev() {
        acc.add((n as f64).powf(-s));
    }
    acc.add(nf.powf(1.0 - s) / (s - 1.0));
    acc.add(0.5 * nf.powf(-s));
    // rising = s(s+1)...(s+2j-2) / (2j)!
    let mut rising = s / 2.0;
    let mut npow = nf.powf(-s - 1.0);
    for j in 1..=30usize {
        let b = rational_to_f64(&bernoulli(2 * j));
        let term = b * rising * npow;
        if term.abs() < eps / 4.0 {
            return Ok(acc.value());
        }
        acc.add(term);
        let jf = j as f64;
        rising *= (s + 2.0 * jf - 1.0) * (s + 2.0 * jf) / ((2.0 * jf + 1.0) * (2.0 * jf + 2.0));
        npow /= nf * nf;
    }
    Err(Error::InvalidArgument(format!("zeta({s}) does not reach accuracy {eps}")))
}

/// `sum_{n > P} n^-s <= P^(1-s) / (s-1)`, with `P >= 1`.
fn integral_tail(p: f64, s: f64) -> f64 {
    p.max(1.0).powf(1.0 - s) / (s - 1.0)
}

/// Truncated adjoint L-function `prod_{p <= pmax} 1 / ((1 - x)(1 - c x + x^2))`, `x = p^-s`,
/// and a bound on `|L - value|` from `|alpha_p| = 1`.
pub fn l_adjoint_num(f: &Eigenform, s: f64, pmax: u64) -> Result<(f64, f64)> {
    check_real_s(s, "adjoint L-function")?;
    let primes = primes_up_to(pmax);
    if let Some(&p) = primes.last() {
        if p as usize > f.order() {
            return Err(Error::InsufficientOrder { needed: p as usize, available: f.order() });
        }
    }
    let logs: Vec<f64> = primes
        .par_iter()
        .map(|&p| -> Result<f64> {
            let c = rational_to_f64(&f.satake(p)?.alpha_sq_sum());
            let x = (p as f64).powf(-s);
            Ok(-(1.0 - x).ln() - (1.0 - c * x + x * x).ln())
        })
        .collect::<Result<_>>()?;
    let value = compensated_sum(logs).exp();
    let pm = pmax.max(1) as f64;
    let log_tail = 3.0 / (1.0 - (pm + 1.0).max(2.0).powf(-s)) * integral_tail(pm, s);
    Ok((value, value * log_tail.exp_m1()))
}

/// `(value, tail)` of a truncated sum; `tail` is the reported truncation bound.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct Truncated {
    pub value: f64,
    pub tail: f64,
}

/// `max_{M/10 < m <= M} c(m)^2 / m^(k-3/2)`, the fitted majorant constant.
fn fitted_constant(g: &PlusSpaceForm, k: u32, mmax: usize) -> f64 {
    let w = k as f64 - 1.5;
    ((mmax / 10 + 1)..=mmax)
        .filter(|&m| !g.coeff(m).is_zero())
        .map(|m| {
            let c = rational_to_f64(g.coeff(m));
            c * c / (m as f64).powf(w)
        })
        .fold(0.0, f64::max)
}

fn term(c: &Rational, m: usize, exponent: f64) -> f64 {
    let c = rational_to_f64(c);
    c * c * (m as f64).powf(-exponent)
}

/// `sum_{m <= mmax} c(m)^2 / m^(s+k-3/2)`; the tail `C mmax^(1-s) / (s-1)` uses
/// the fitted constant `C` with `c(m)^2 <= C m^(k-3/2)`.
pub fn lhs_dirichlet(g: &PlusSpaceForm, k: u32, s: f64, mmax: usize) -> Result<Truncated> {
    check_real_s(s, "left-hand side")?;
    if g.order() < mmax {
        return Err(Error::InsufficientOrder { needed: mmax, available: g.order() });
    }
    let exponent = s + k as f64 - 1.5;
    let terms: Vec<f64> = (1..=mmax)
        .into_par_iter()
        .map(|m| if g.coeff(m).is_zero() { 0.0 } else { term(g.coeff(m), m, exponent) })
        .collect();
    let value = compensated_sum(terms);
    let tail = fitted_constant(g, k, mmax) * integral_tail(mmax as f64, s);
    Ok(Truncated { value, tail })
}

/// Which Euler bracket the right-hand side uses.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum BracketMode {
    Full,
    /// Drops the Legendre term, leaving `1 + p^(-2s-1)`.
    NoLegendre,
}

/// Per-prime data for the brackets: `p^(-2s-1)` and `2 p^(1-k) a_f(p) / (1 + p^(2s))`.
fn bracket_data(f: &Eigenform, k: u32, s: f64, primes: &[u64]) -> Vec<(u64, f64, f64)> {
    primes
        .iter()
        .map(|&p| {
            let pf = p as f64;
            let scaled = Rational::from_integer(f.a(p as usize) * 2) * rational_pow(p as i64, 1 - k as i64);
            (p, pf.powf(-2.0 * s - 1.0), rational_to_f64(&scaled) / (1.0 + pf.powf(2.0 * s)))
        })
        .collect()
}

/// Bound on `sum_{p > P} |log B_p|` from `|B_p - 1| <= 5 p^(-2s-1/2)`.
fn bracket_log_tail(pmax: u64, s: f64) -> f64 {
    let p = pmax.max(1) as f64;
    2.0 * 5.0 * p.powf(0.5 - 2.0 * s) / (2.0 * s - 0.5)
}

/// Negative fundamental discriminants `D0` with `|D0| <= dmax`.
pub fn negative_fundamentals(dmax: u64) -> Vec<u64> {
    (3..=dmax).filter(|&d| is_fundamental_discriminant(-(d as i64))).collect()
}

/// The right-hand side truncated at `|D0| <= dmax` and `p <= pmax`.
pub fn rhs_dirichlet(
    g: &PlusSpaceForm,
    f: &Eigenform,
    k: u32,
    s: f64,
    dmax: usize,
    pmax: u64,
    mode: BracketMode,
) -> Result<Truncated> {
    check_real_s(s, "right-hand side")?;
    if g.order() < dmax {
        return Err(Error::InsufficientOrder { needed: dmax, available: g.order() });
    }
    let primes = primes_up_to(pmax);
    if f.order() < pmax as usize {
        return Err(Error::InsufficientOrder { needed: pmax as usize, available: f.order() });
    }
    let data = bracket_data(f, k, s, &primes);
    let exponent = s + k as f64 - 1.5;
    let discs = negative_fundamentals(dmax as u64);
    let terms: Vec<f64> = discs
        .par_iter()
        .map(|&d| {
            let c = g.coeff(d as usize);
            if c.is_zero() {
                return 0.0;
            }
            let d0 = -(d as i64);
            let logs = data.iter().filter_map(|&(p, inv, legendre)| {
                let chi = kronecker_symbol(d0, p) as f64;
                if d % p == 0 {
                    return None;
                }
                let b = match mode {
                    BracketMode::Full => 1.0 + inv - chi * legendre,
                    BracketMode::NoLegendre => 1.0 + inv,
                };
                Some(b.ln())
            });
            term(c, d as usize, exponent) * compensated_sum(logs).exp()
        })
        .collect();
    let dsum = compensated_sum(terms);

    let eps = 1e-15;
    let z2 = zeta_num(2.0 * s, eps)?;
    let z4 = zeta_num(4.0 * s, eps)?;
    let (ladj, ladj_tail) = l_adjoint_num(f, 2.0 * s, pmax)?;
    let pre = z2 / z4 * ladj;
    let value = pre * dsum;

    // Prime truncation inside each D0 product, the D0 cut-off, the L-function
    // truncation, and the zeta evaluations.
    let bracket_rel = match mode {
        BracketMode::Full => bracket_log_tail(pmax, s).exp_m1(),
        BracketMode::NoLegendre => (integral_tail(pmax as f64, 2.0 * s + 1.0)).exp_m1(),
    };
    let bracket_max = data
            .iter()
            .map(|&(_, inv, legendre)| 1.0 + inv + if mode == BracketMode::Full { legendre.abs() } else { 0.0 })
            .product::<f64>()
        * (1.0 + bracket_rel);
    let d_tail = fitted_constant(g, k, dmax) * integral_tail(dmax as f64, s) * bracket_max;
    let zeta_rel = eps / z2 + eps / z4;
    let tail = pre * (dsum.abs() * bracket_rel + d_tail)
        + (ladj_tail / ladj + zeta_rel) * value.abs();
    Ok(Truncated { value, tail })
}

/// Truncation parameters of a numeric run.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct EvalParams {
    pub k: u32,
    pub n: u32,
    pub mmax: usize,
    pub pmax: u64,
    pub dmax: usize,
}

/// Both sides of the identity at one `s`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct EvalReport {
    pub s: f64,
    pub lhs: f64,
    pub rhs: f64,
    pub lhs_tail_bound: f64,
    pub rhs_tail_bound: f64,
    /// `|lhs - rhs| / max(|lhs|, |rhs|)`.
    pub rel_diff: f64,
    /// Relative size of the combined tails, comparable to `rel_diff`.
    pub rel_tail: f64,
    pub tol: f64,
    pub passed: bool,
    pub parameters: EvalParams,
}

pub fn relative_difference(a: f64, b: f64) -> f64 {
    let scale = a.abs().max(b.abs());
    if scale == 0.0 {
        0.0
    } else {
        (a - b).abs() / scale
    }
}

/// Evaluates both sides for given `g` and `f`; `f` must have weight `2k - 2`.
pub fn verify_theorem_numeric_with(
    g: &PlusSpaceForm,
    f: &Eigenform,
    k: u32,
    s_list: &[f64],
    params: EvalParams,
    tol: f64,
) -> Result<Vec<EvalReport>> {
    if f.weight != 2 * k - 2 {
        return Err(Error::InvalidArgument(format!(
            "eigenform weight {} does not match k = {k}",
            f.weight
        )));
    }
    s_list
        .iter()
        .map(|&s| {
            let lhs = lhs_dirichlet(g, k, s, params.mmax)?;
            let rhs = rhs_dirichlet(g, f, k, s, params.dmax, params.pmax, BracketMode::Full)?;
            let rel_diff = relative_difference(lhs.value, rhs.value);
            let scale = lhs.value.abs().max(rhs.value.abs());
            let rel_tail = if scale > 0.0 { (lhs.tail + rhs.tail) / scale } else { 0.0 };
            Ok(EvalReport {
                s,
                lhs: lhs.value,
                rhs: rhs.value,
                lhs_tail_bound: lhs.tail,
                rhs_tail_bound: rhs.tail,
                rel_diff,
                rel_tail,
                tol,
                passed: rel_diff <= tol,
                parameters: params,
            })
        })
        .collect()
}

/// Builds `g = iota_1(phi_{k,1})` and `f` of weight `2k - 2`, then evaluates both sides at each `s`.
pub fn verify_theorem_numeric(
    k: u32,
    s_list: &[f64],
    mmax: usize,
    dmax: usize,
    pmax: u64,
    tol: f64,
) -> Result<Vec<EvalReport>> {
    let g = iota1(&jacobi_cusp_index1(k, mmax.max(dmax))?);
    let f = eigenform(2 * k - 2, pmax.max(2) as usize)?;
    let params = EvalParams { k, n: 1, mmax, pmax, dmax };
    verify_theorem_numeric_with(&g, &f, k, s_list, params, tol)
}
