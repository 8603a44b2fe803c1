//! Univariate algorithms over the rationals: division, GCD, rational roots.

use alloc::vec::Vec;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use super::{Monomial, Poly, Var};
use crate::arith::Rational;
use crate::error::{Error, Result};

/// Dense coefficients, index = degree, no trailing zeros.
fn dense(p: &Poly, v: &Var) -> Result<Vec<Rational>> {
    let mut out: Vec<Rational> = Vec::new();
    for (m, c) in p.terms() {
        let (rest, e) = m.split_off(v);
        if !rest.is_one() {
            return Err(Error::NotUnivariate(v.as_str().into()));
        }
        let e = e as usize;
        if out.len() <= e {
            out.resize(e + 1, Rational::zero());
        }
        out[e] = c.clone();
    }
    Ok(out)
}

fn sparse(coeffs: &[Rational], v: &Var) -> Poly {
    let mut p = Poly::zero();
    for (e, c) in coeffs.iter().enumerate() {
        p.add_term(Monomial::var(v.clone(), e as u32), c.clone());
    }
    p
}

fn trim(c: &mut Vec<Rational>) {
    while c.last().is_some_and(Rational::is_zero) {
        c.pop();
    }
}

fn div_rem_dense(num: &[Rational], den: &[Rational]) -> (Vec<Rational>, Vec<Rational>) {
    let mut rem = num.to_vec();
    let dlead = den.last().expect("nonzero divisor");
    if num.len() < den.len() {
        return (Vec::new(), rem);
    }
    let mut quot = alloc::vec![Rational::zero(); num.len() - den.len() + 1];
    for shift in (0..quot.len()).rev() {
        let top = &rem[shift + den.len() - 1];
        if top.is_zero() {
            continue;
        }
        let q = top / dlead;
        for (i, d) in den.iter().enumerate() {
            let delta = &q * d;
            rem[shift + i] -= delta;
        }
        quot[shift] = q;
    }
    trim(&mut rem);
    trim(&mut quot);
    (quot, rem)
}

/// Euclidean division in `Q[v]`: `p = quot * q + rem` with `deg rem < deg q`.
pub fn univariate_div_rem(p: &Poly, q: &Poly, v: &Var) -> Result<(Poly, Poly)> {
    let num = dense(p, v)?;
    let den = dense(q, v)?;
    if den.is_empty() {
        return Err(Error::DivisionByZero);
    }
    let (quot, rem) = div_rem_dense(&num, &den);
    Ok((sparse(&quot, v), sparse(&rem, v)))
}

/// Monic GCD in `Q[v]`. `gcd(p, 0) = monic(p)` and `gcd(0, 0) = 0`.
pub fn univariate_gcd(p: &Poly, q: &Poly, v: &Var) -> Result<Poly> {
    let mut a = dense(p, v)?;
    let mut b = dense(q, v)?;
    while !b.is_empty() {
        let (_, r) = div_rem_dense(&a, &b);
        a = core::mem::replace(&mut b, r);
    }
    Ok(sparse(&a, v).monic())
}

fn divisors(n: &BigInt) -> Vec<BigInt> {
    let n = n.abs();
    let mut small = Vec::new();
    let mut large = Vec::new();
    let mut d = BigInt::one();
    while &d * &d <= n {
        if n.is_multiple_of(&d) {
            let other = &n / &d;
            if other != d {
                large.push(other);
            }
            small.push(d.clone());
        }
        d += 1;
    }
    small.extend(large.into_iter().rev());
    small
}

/// All distinct rational roots of `p` in `v`, ascending. Candidates come from
/// the rational-root theorem applied to the primitive integer form.
pub fn rational_roots(p: &Poly, v: &Var) -> Result<Vec<Rational>> {
    if p.is_zero() {
        return Err(Error::ZeroPolynomial);
    }
    let (prim, _) = p.primitive_part();
    let coeffs: Vec<BigInt> = dense(&prim, v)?
        .into_iter()
        .map(|c| c.numer().clone())
        .collect();
    let low = coeffs.iter().position(|c| !c.is_zero()).expect("nonzero");
    let reduced = &coeffs[low..];
    let mut roots = Vec::new();
    if low > 0 {
        roots.push(Rational::zero());
    }
    if reduced.len() > 1 {
        let trailing = &reduced[0];
        let leading = reduced.last().expect("nonempty");
        let qs = divisors(leading);
        for num in divisors(trailing) {
            for den in &qs {
                for sign in [1, -1] {
                    let cand_num: BigInt = &num * BigInt::from(sign);
                    if cand_num.gcd(den) != BigInt::one() {
                        continue;
                    }
                    if scaled_value(reduced, &cand_num, den).is_zero() {
                        roots.push(crate::arith::rat_make(cand_num, den.clone())?);
                    }
                }
            }
        }
    }
    roots.sort();
    roots.dedup();
    Ok(roots)
}

/// `q^d * p(n/q)` for `p` of degree `d`, computed in integers by Horner's rule.
fn scaled_value(coeffs: &[BigInt], n: &BigInt, q: &BigInt) -> BigInt {
    let deg = coeffs.len() - 1;
    let mut acc = coeffs[deg].clone();
    let mut qpow = BigInt::one();
    for c in coeffs[..deg].iter().rev() {
        qpow *= q;
        acc = acc * n + c * &qpow;
    }
    acc
}
