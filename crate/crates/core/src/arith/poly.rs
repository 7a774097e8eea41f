//! Dense univariate polynomial helpers, coefficients in ascending order.

use num_bigint::BigInt;
use num_traits::{One, Zero};

use super::Rational;

fn trim<T: Zero>(p: &mut Vec<T>) {
    while p.last().is_some_and(|c| c.is_zero()) {
        p.pop();
    }
}

/// Exact quotient of integer polynomials by a monic divisor.
pub(crate) fn div_exact_monic(num: &[BigInt], den: &[BigInt]) -> Vec<BigInt> {
    debug_assert!(den.last().is_some_and(|c| c.is_one()));
    let mut rem = num.to_vec();
    let dd = den.len() - 1;
    if rem.len() <= dd {
        return vec![];
    }
    let mut quot = vec![BigInt::zero(); rem.len() - dd];
    for i in (0..quot.len()).rev() {
        let c = rem[i + dd].clone();
        if c.is_zero() {
            continue;
        }
        for (j, dj) in den.iter().enumerate() {
            rem[i + j] -= &c * dj;
        }
        quot[i] = c;
    }
    trim(&mut rem);
    debug_assert!(rem.is_empty(), "division was not exact");
    quot
}

fn rat_divrem(a: &[Rational], b: &[Rational]) -> (Vec<Rational>, Vec<Rational>) {
    let mut rem = a.to_vec();
    trim(&mut rem);
    let db = b.len() - 1;
    let lead_inv = b[db].recip();
    if rem.len() <= db {
        return (vec![], rem);
    }
    let mut quot = vec![Rational::zero(); rem.len() - db];
    for i in (0..quot.len()).rev() {
        let c = &rem[i + db] * &lead_inv;
        if c.is_zero() {
            continue;
        }
        for (j, bj) in b.iter().enumerate() {
            rem[i + j] -= &c * bj;
        }
        quot[i] = c;
    }
    trim(&mut rem);
    (quot, rem)
}

fn rat_mul(a: &[Rational], b: &[Rational]) -> Vec<Rational> {
    if a.is_empty() || b.is_empty() {
        return vec![];
    }
    let mut out = vec![Rational::zero(); a.len() + b.len() - 1];
    for (i, x) in a.iter().enumerate() {
        if x.is_zero() {
            continue;
        }
        for (j, y) in b.iter().enumerate() {
            out[i + j] += x * y;
        }
    }
    out
}

fn rat_sub(a: &[Rational], b: &[Rational]) -> Vec<Rational> {
    let n = a.len().max(b.len());
    let mut out = vec![Rational::zero(); n];
    for (i, x) in a.iter().enumerate() {
        out[i] += x;
    }
    for (i, y) in b.iter().enumerate() {
        out[i] -= y;
    }
    trim(&mut out);
    out
}

/// Inverse of `a` modulo the irreducible `modulus` via the extended Euclidean
/// algorithm. Returns `None` when `a` is zero modulo `modulus`.
pub(crate) fn inverse_mod(a: &[Rational], modulus: &[Rational]) -> Option<Vec<Rational>> {
    let mut r0 = modulus.to_vec();
    let (_, mut r1) = rat_divrem(a, modulus);
    if r1.is_empty() {
        return None;
    }
    let mut s0: Vec<Rational> = vec![];
    let mut s1: Vec<Rational> = vec![Rational::one()];
    while r1.len() > 1 {
        let (q, r) = rat_divrem(&r0, &r1);
        let s = rat_sub(&s0, &rat_mul(&q, &s1));
        r0 = std::mem::replace(&mut r1, r);
        s0 = std::mem::replace(&mut s1, s);
        if r1.is_empty() {
            // gcd of positive degree: modulus was not irreducible
            return None;
        }
    }
    let c_inv = r1[0].recip();
    let mut out: Vec<Rational> = s1.into_iter().map(|c| c * &c_inv).collect();
    let (_, red) = rat_divrem(&out, modulus);
    out = red;
    Some(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arith::int;

    #[test]
    fn exact_division() {
        // (x^2 - 1) / (x - 1) = x + 1
        let num: Vec<BigInt> = [-1, 0, 1].iter().map(|&c| BigInt::from(c)).collect();
        let den: Vec<BigInt> = [-1, 1].iter().map(|&c| BigInt::from(c)).collect();
        assert_eq!(
            div_exact_monic(&num, &den),
            vec![BigInt::from(1), BigInt::from(1)]
        );
    }

    #[test]
    fn inverse_of_x_mod_x2_plus_1() {
        // x * (-x) = -x^2 = 1 mod x^2 + 1
        let m = vec![int(1), int(0), int(1)];
        let inv = inverse_mod(&[int(0), int(1)], &m).unwrap();
        assert_eq!(inv, vec![int(0), int(-1)]);
        assert!(inverse_mod(&[int(0)], &m).is_none());
    }
}
