use std::collections::HashMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};
use std::sync::{Arc, Mutex, OnceLock};

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use super::poly::{div_exact_monic, inverse_mod};
use super::Rational;
use crate::error::{Error, Result};

pub fn euler_phi(m: u32) -> u32 {
    let mut n = m;
    let mut out = m;
    let mut p = 2;
    while p * p <= n {
        if n.is_multiple_of(p) {
            while n.is_multiple_of(p) {
                n /= p;
            }
            out -= out / p;
        }
        p += 1;
    }
    if n > 1 {
        out -= out / n;
    }
    out
}

/// The m-th cyclotomic polynomial, ascending integer coefficients.
///
/// Obtained by dividing `x^m - 1` by `Phi_d` for every proper divisor `d`.
pub fn cyclotomic_polynomial(m: u32) -> Vec<BigInt> {
    assert!(m >= 1, "conductor must be positive");
    let mut memo: HashMap<u32, Vec<BigInt>> = HashMap::new();
    cyclotomic_rec(m, &mut memo)
}

fn cyclotomic_rec(m: u32, memo: &mut HashMap<u32, Vec<BigInt>>) -> Vec<BigInt> {
    if let Some(p) = memo.get(&m) {
        return p.clone();
    }
    let mut num = vec![BigInt::zero(); m as usize + 1];
    num[0] = BigInt::from(-1);
    num[m as usize] = BigInt::one();
    for d in (1..m).filter(|d| m.is_multiple_of(*d)) {
        let phi_d = cyclotomic_rec(d, memo);
        num = div_exact_monic(&num, &phi_d);
    }
    memo.insert(m, num.clone());
    num
}

/// Reduction data for `Q(zeta_m) = Q[x] / Phi_m(x)`.
#[derive(Debug)]
pub struct CycloField {
    conductor: u32,
    degree: usize,
    phi: Vec<BigInt>,
    /// `x^k mod Phi_m` for `k` in `0..m`; `x^m = 1` covers every other exponent.
    powers: Vec<Vec<BigInt>>,
}

static FIELDS: OnceLock<Mutex<HashMap<u32, Arc<CycloField>>>> = OnceLock::new();

impl CycloField {
    /// Shared, cached field descriptor for conductor `m`.
    pub fn get(m: u32) -> Arc<CycloField> {
        assert!(m >= 1, "conductor must be positive");
        let cache = FIELDS.get_or_init(|| Mutex::new(HashMap::new()));
        if let Some(f) = cache.lock().unwrap().get(&m) {
            return f.clone();
        }
        // built outside the lock; a racing builder produces an identical value
        let field = Arc::new(CycloField::build(m));
        cache.lock().unwrap().entry(m).or_insert(field).clone()
    }

    fn build(m: u32) -> CycloField {
        let phi = cyclotomic_polynomial(m);
        let degree = phi.len() - 1;
        let mut powers = Vec::with_capacity(m as usize);
        let mut cur = vec![BigInt::zero(); degree];
        cur[0] = BigInt::one();
        for _ in 0..m {
            powers.push(cur.clone());
            // multiply by x and reduce with the monic Phi_m
            let top = cur[degree - 1].clone();
            for i in (1..degree).rev() {
                cur[i] = cur[i - 1].clone();
            }
            cur[0] = BigInt::zero();
            if !top.is_zero() {
                for i in 0..degree {
                    cur[i] -= &top * &phi[i];
                }
            }
        }
        CycloField {
            conductor: m,
            degree,
            phi,
            powers,
        }
    }

    pub fn conductor(&self) -> u32 {
        self.conductor
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    pub fn polynomial(&self) -> &[BigInt] {
        &self.phi
    }

    fn power(&self, k: i64) -> &[BigInt] {
        &self.powers[k.rem_euclid(self.conductor as i64) as usize]
    }
}

/// An element of `Q(zeta_m)`, stored as integer numerators over one positive
/// common denominator, reduced modulo `Phi_m`.
///
/// The numerators and denominator are coprime as a whole, so two equal
/// elements of the same field have identical representations.
#[derive(Clone)]
pub struct CycloElem {
    field: Arc<CycloField>,
    num: Vec<BigInt>,
    den: BigInt,
}

/// `zeta_m^k`, with `k` taken modulo `m`.
pub fn cyclo_root(m: u32, k: i64) -> CycloElem {
    CycloElem::root(m, k)
}

impl CycloElem {
    fn from_parts(field: Arc<CycloField>, num: Vec<BigInt>, den: BigInt) -> Self {
        let mut e = CycloElem { field, num, den };
        e.normalize();
        e
    }

    fn normalize(&mut self) {
        debug_assert!(!self.den.is_zero());
        let mut g = self.den.abs();
        for c in &self.num {
            if g.is_one() {
                break;
            }
            if !c.is_zero() {
                g = g.gcd(c);
            }
        }
        if self.den.is_negative() {
            g = -g;
        }
        if !g.is_one() {
            for c in &mut self.num {
                *c /= &g;
            }
            self.den /= &g;
        }
        if self.num.iter().all(|c| c.is_zero()) {
            self.den = BigInt::one();
        }
    }

    pub fn zero(m: u32) -> Self {
        let field = CycloField::get(m);
        let num = vec![BigInt::zero(); field.degree];
        CycloElem {
            field,
            num,
            den: BigInt::one(),
        }
    }

    pub fn one(m: u32) -> Self {
        Self::from_int(m, 1)
    }

    pub fn from_int(m: u32, n: i64) -> Self {
        Self::from_rational(m, &Rational::from_integer(BigInt::from(n)))
    }

    pub fn from_rational(m: u32, q: &Rational) -> Self {
        let mut e = Self::zero(m);
        e.num[0] = q.numer().clone();
        e.den = q.denom().clone();
        e.normalize();
        e
    }

    pub fn root(m: u32, k: i64) -> Self {
        let field = CycloField::get(m);
        let num = field.power(k).to_vec();
        CycloElem {
            field,
            num,
            den: BigInt::one(),
        }
    }

    /// Element `sum_k coeffs[k] * zeta_m^k` for a coefficient list of any
    /// length.
    pub fn from_coeffs(m: u32, coeffs: &[Rational]) -> Self {
        let field = CycloField::get(m);
        let den = coeffs
            .iter()
            .fold(BigInt::one(), |acc, c| acc.lcm(c.denom()));
        let mut num = vec![BigInt::zero(); field.degree];
        for (k, c) in coeffs.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            let scaled = c.numer() * (&den / c.denom());
            for (slot, p) in num.iter_mut().zip(field.power(k as i64)) {
                if !p.is_zero() {
                    *slot += &scaled * p;
                }
            }
        }
        Self::from_parts(field, num, den)
    }

    pub fn conductor(&self) -> u32 {
        self.field.conductor
    }

    pub fn field(&self) -> &Arc<CycloField> {
        &self.field
    }

    /// Reduced coefficients in the power basis `1, zeta, ..., zeta^{phi(m)-1}`.
    pub fn coeffs(&self) -> Vec<Rational> {
        self.num
            .iter()
            .map(|c| Rational::new(c.clone(), self.den.clone()))
            .collect()
    }

    pub fn is_zero(&self) -> bool {
        self.num.iter().all(|c| c.is_zero())
    }

    pub fn is_one(&self) -> bool {
        self.den.is_one() && self.num[0].is_one() && self.num[1..].iter().all(|c| c.is_zero())
    }

    /// `Some(q)` when the element is the rational `q`.
    pub fn to_rational(&self) -> Option<Rational> {
        if self.num[1..].iter().all(|c| c.is_zero()) {
            Some(Rational::new(self.num[0].clone(), self.den.clone()))
        } else {
            None
        }
    }

    /// Certifies that the element is a rational integer and returns it.
    pub fn as_rational_integer(&self) -> Result<BigInt> {
        match self.to_rational() {
            None => Err(Error::NotRational(self.to_string())),
            Some(q) if !q.is_integer() => Err(Error::NotIntegral(q.to_string())),
            Some(q) => Ok(q.to_integer()),
        }
    }

    fn same_field(a: &Self, b: &Self) -> (Self, Self) {
        if a.conductor() == b.conductor() {
            (a.clone(), b.clone())
        } else {
            Self::coerce(a, b)
        }
    }

    /// Lifts both operands into `Q(zeta_lcm(m, m'))`.
    pub fn coerce(a: &Self, b: &Self) -> (Self, Self) {
        let m = a.conductor().lcm(&b.conductor());
        (
            a.lift(m).expect("lcm is a multiple"),
            b.lift(m).expect("lcm is a multiple"),
        )
    }

    /// Image under `Q(zeta_m) -> Q(zeta_M)`, `zeta_m -> zeta_M^{M/m}`.
    pub fn lift(&self, target: u32) -> Result<Self> {
        let m = self.conductor();
        if !target.is_multiple_of(m) {
            return Err(Error::ConductorMismatch(m, target));
        }
        if target == m {
            return Ok(self.clone());
        }
        let field = CycloField::get(target);
        let step = (target / m) as i64;
        let mut num = vec![BigInt::zero(); field.degree];
        for (k, c) in self.num.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            for (slot, p) in num.iter_mut().zip(field.power(k as i64 * step)) {
                if !p.is_zero() {
                    *slot += c * p;
                }
            }
        }
        Ok(Self::from_parts(field, num, self.den.clone()))
    }

    /// Inverse of [`lift`](Self::lift): recovers the representation over the
    /// subfield `Q(zeta_target)`, or fails if the element is not in it.
    pub fn restrict(&self, target: u32) -> Result<Self> {
        let m = self.conductor();
        if !m.is_multiple_of(target) {
            return Err(Error::ConductorMismatch(m, target));
        }
        if m == target {
            return Ok(self.clone());
        }
        // columns: images of the subfield basis; solve by Gaussian elimination
        let sub = CycloField::get(target);
        let k = sub.degree;
        let n = self.field.degree;
        let mut rows: Vec<Vec<Rational>> = (0..n)
            .map(|i| {
                let mut row: Vec<Rational> = (0..k)
                    .map(|j| {
                        let img = Self::root(target, j as i64).lift(m).unwrap();
                        Rational::new(img.num[i].clone(), img.den.clone())
                    })
                    .collect();
                row.push(Rational::new(self.num[i].clone(), self.den.clone()));
                row
            })
            .collect();
        let mut pivot_row = 0;
        let mut pivots = Vec::with_capacity(k);
        for col in 0..k {
            let Some(p) = (pivot_row..n).find(|&r| !rows[r][col].is_zero()) else {
                continue;
            };
            rows.swap(pivot_row, p);
            let inv = rows[pivot_row][col].recip();
            for c in rows[pivot_row].iter_mut() {
                *c *= &inv;
            }
            for r in 0..n {
                if r != pivot_row && !rows[r][col].is_zero() {
                    let f = rows[r][col].clone();
                    let pivot = rows[pivot_row].clone();
                    for (x, y) in rows[r].iter_mut().zip(&pivot) {
                        *x -= y * &f;
                    }
                }
            }
            pivots.push(col);
            pivot_row += 1;
        }
        if rows[pivot_row..].iter().any(|r| !r[k].is_zero()) {
            return Err(Error::NotInSubfield {
                from: m,
                to: target,
            });
        }
        let mut coeffs = vec![Rational::zero(); k];
        for (r, &col) in pivots.iter().enumerate() {
            coeffs[col] = rows[r][k].clone();
        }
        Ok(Self::from_coeffs(target, &coeffs))
    }

    /// Complex conjugation `zeta -> zeta^{-1}`.
    pub fn conj(&self) -> Self {
        let field = self.field.clone();
        let mut num = vec![BigInt::zero(); field.degree];
        for (k, c) in self.num.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            for (slot, p) in num.iter_mut().zip(field.power(-(k as i64))) {
                if !p.is_zero() {
                    *slot += c * p;
                }
            }
        }
        CycloElem {
            field,
            num,
            den: self.den.clone(),
        }
    }

    /// Multiplication by a rational scalar.
    pub fn scale(&self, q: &Rational) -> Self {
        let num = self.num.iter().map(|c| c * q.numer()).collect();
        Self::from_parts(self.field.clone(), num, &self.den * q.denom())
    }

    /// Multiplication by `zeta_m^k`.
    pub fn mul_root(&self, k: i64) -> Self {
        let field = self.field.clone();
        let mut num = vec![BigInt::zero(); field.degree];
        for (i, c) in self.num.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            for (slot, p) in num.iter_mut().zip(field.power(i as i64 + k)) {
                if !p.is_zero() {
                    *slot += c * p;
                }
            }
        }
        CycloElem {
            field,
            num,
            den: self.den.clone(),
        }
    }

    fn mul_same(&self, other: &Self) -> Self {
        let field = self.field.clone();
        let deg = field.degree;
        let mut wide = vec![BigInt::zero(); 2 * deg - 1];
        for (i, a) in self.num.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in other.num.iter().enumerate() {
                if !b.is_zero() {
                    wide[i + j] += a * b;
                }
            }
        }
        let mut num: Vec<BigInt> = wide.drain(..deg).collect();
        for (k, c) in wide.into_iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            for (slot, p) in num.iter_mut().zip(field.power((deg + k) as i64)) {
                if !p.is_zero() {
                    *slot += &c * p;
                }
            }
        }
        Self::from_parts(field, num, &self.den * &other.den)
    }

    fn add_same(&self, other: &Self) -> Self {
        if self.den == other.den {
            let num = self
                .num
                .iter()
                .zip(&other.num)
                .map(|(a, b)| a + b)
                .collect();
            return Self::from_parts(self.field.clone(), num, self.den.clone());
        }
        let den = self.den.lcm(&other.den);
        let fa = &den / &self.den;
        let fb = &den / &other.den;
        let num = self
            .num
            .iter()
            .zip(&other.num)
            .map(|(a, b)| a * &fa + b * &fb)
            .collect();
        Self::from_parts(self.field.clone(), num, den)
    }

    /// Multiplicative inverse via the extended Euclidean algorithm against
    /// `Phi_m`.
    pub fn inv(&self) -> Result<Self> {
        if self.is_zero() {
            return Err(Error::DivisionByZero);
        }
        if self.num[1..].iter().all(|c| c.is_zero()) {
            let q = Rational::new(self.den.clone(), self.num[0].clone());
            return Ok(Self::from_rational(self.conductor(), &q));
        }
        let a: Vec<Rational> = self
            .num
            .iter()
            .map(|c| Rational::from_integer(c.clone()))
            .collect();
        let modulus: Vec<Rational> = self
            .field
            .phi
            .iter()
            .map(|c| Rational::from_integer(c.clone()))
            .collect();
        let inv = inverse_mod(&a, &modulus).ok_or(Error::DivisionByZero)?;
        let den = Rational::from_integer(self.den.clone());
        let coeffs: Vec<Rational> = inv.into_iter().map(|c| c * &den).collect();
        Ok(Self::from_coeffs(self.conductor(), &coeffs))
    }

    /// `self^e` by binary exponentiation; negative exponents go through
    /// [`inv`](Self::inv).
    pub fn pow(&self, e: i64) -> Result<Self> {
        let base = if e < 0 { self.inv()? } else { self.clone() };
        let mut e = e.unsigned_abs();
        let mut acc = Self::one(self.conductor());
        let mut sq = base;
        while e > 0 {
            if e & 1 == 1 {
                acc = acc.mul_same(&sq);
            }
            e >>= 1;
            if e > 0 {
                sq = sq.mul_same(&sq);
            }
        }
        Ok(acc)
    }
}

impl PartialEq for CycloElem {
    fn eq(&self, other: &Self) -> bool {
        if self.conductor() == other.conductor() {
            self.den == other.den && self.num == other.num
        } else {
            let (a, b) = Self::coerce(self, other);
            a == b
        }
    }
}

impl Eq for CycloElem {}

impl fmt::Debug for CycloElem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "CycloElem({})", self)
    }
}

impl fmt::Display for CycloElem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut first = true;
        for (k, c) in self.num.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            let q = Rational::new(c.clone(), self.den.clone());
            if !first {
                write!(f, " + ")?;
            }
            first = false;
            match k {
                0 => write!(f, "{}", q)?,
                _ => write!(f, "({})*z{}^{}", q, self.conductor(), k)?,
            }
        }
        if first {
            write!(f, "0")?;
        }
        Ok(())
    }
}

impl Add for &CycloElem {
    type Output = CycloElem;
    fn add(self, rhs: &CycloElem) -> CycloElem {
        if self.conductor() == rhs.conductor() {
            return self.add_same(rhs);
        }
        let (a, b) = CycloElem::same_field(self, rhs);
        a.add_same(&b)
    }
}

impl Sub for &CycloElem {
    type Output = CycloElem;
    fn sub(self, rhs: &CycloElem) -> CycloElem {
        self + &(-rhs)
    }
}

impl Mul for &CycloElem {
    type Output = CycloElem;
    fn mul(self, rhs: &CycloElem) -> CycloElem {
        if self.conductor() == rhs.conductor() {
            return self.mul_same(rhs);
        }
        let (a, b) = CycloElem::same_field(self, rhs);
        a.mul_same(&b)
    }
}

impl Neg for &CycloElem {
    type Output = CycloElem;
    fn neg(self) -> CycloElem {
        CycloElem {
            field: self.field.clone(),
            num: self.num.iter().map(|c| -c).collect(),
            den: self.den.clone(),
        }
    }
}

macro_rules! forward_owned {
    ($tr:ident, $method:ident) => {
        impl $tr for CycloElem {
            type Output = CycloElem;
            fn $method(self, rhs: CycloElem) -> CycloElem {
                (&self).$method(&rhs)
            }
        }
    };
}

forward_owned!(Add, add);
forward_owned!(Sub, sub);
forward_owned!(Mul, mul);

impl Neg for CycloElem {
    type Output = CycloElem;
    fn neg(self) -> CycloElem {
        -&self
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arith::{int, rat};
    use proptest::prelude::*;

    fn z(m: u32, k: i64) -> CycloElem {
        cyclo_root(m, k)
    }

    #[test]
    fn cyclotomic_polynomials() {
        let as_i64 = |m| -> Vec<i64> {
            cyclotomic_polynomial(m)
                .iter()
                .map(|c| i64::try_from(c).unwrap())
                .collect()
        };
        assert_eq!(as_i64(1), vec![-1, 1]);
        assert_eq!(as_i64(4), vec![1, 0, 1]);
        assert_eq!(as_i64(6), vec![1, -1, 1]);
        assert_eq!(as_i64(12), vec![1, 0, -1, 0, 1]);
        assert_eq!(cyclotomic_polynomial(48).len() - 1, 16);
        for m in 1..60 {
            assert_eq!(cyclotomic_polynomial(m).len() - 1, euler_phi(m) as usize);
        }
    }

    #[test]
    fn roots_reduce() {
        assert_eq!(z(4, 2), CycloElem::from_int(4, -1));
        assert_eq!(z(3, 3), CycloElem::one(3));
        // zeta_6 is the class of x itself
        assert_eq!(z(6, 1).coeffs(), vec![int(0), int(1)]);
        assert_eq!(z(8, -3), z(8, 5));
        assert_eq!(z(8, 3).pow(-1).unwrap(), z(8, 5));
    }

    #[test]
    fn cube_roots() {
        let s = &(&z(3, 1) + &z(3, 2)) + &CycloElem::one(3);
        assert!(s.is_zero());
        let a = &CycloElem::one(3) - &z(3, 1);
        let b = &CycloElem::one(3) - &z(3, 2);
        assert_eq!(&a * &b, CycloElem::from_int(3, 3));
        // inverse of 1 - zeta_3 is (1 - zeta_3^2) / 3
        assert_eq!(a.inv().unwrap(), b.scale(&rat(1, 3)));
    }

    #[test]
    fn inverse_edge_cases() {
        assert_eq!(
            CycloElem::from_int(5, 2).inv().unwrap(),
            CycloElem::from_rational(5, &rat(1, 2))
        );
        assert_eq!(z(12, 5).inv().unwrap(), z(12, -5));
        assert_eq!(CycloElem::zero(7).inv(), Err(Error::DivisionByZero));
        assert_eq!(CycloElem::zero(7).pow(-2), Err(Error::DivisionByZero));
        assert!(CycloElem::zero(7).pow(0).unwrap().is_one());
    }

    #[test]
    fn integrality_certificate() {
        assert_eq!(
            CycloElem::from_int(10, 9).as_rational_integer().unwrap(),
            BigInt::from(9)
        );
        assert!(matches!(
            z(5, 1).as_rational_integer(),
            Err(Error::NotRational(_))
        ));
        assert!(matches!(
            CycloElem::from_rational(5, &rat(7, 2)).as_rational_integer(),
            Err(Error::NotIntegral(_))
        ));
    }

    #[test]
    fn mixed_conductors_coerce() {
        // zeta_4 * zeta_6 = zeta_12^5
        assert_eq!(&z(4, 1) * &z(6, 1), z(12, 5));
        assert_eq!(z(3, 1), z(6, 2));
        assert!(z(12, 4).restrict(3).unwrap() == z(3, 1));
        assert!(matches!(
            z(12, 1).restrict(3),
            Err(Error::NotInSubfield { .. })
        ));
    }

    #[test]
    fn root_sums() {
        for m in 1..=12u32 {
            for k in 0..(2 * m as i64) {
                let s = (0..m as i64).fold(CycloElem::zero(m), |acc, j| &acc + &z(m, k * j));
                let expect = if k % m as i64 == 0 { m as i64 } else { 0 };
                assert_eq!(s, CycloElem::from_int(m, expect), "m={m} k={k}");
            }
        }
    }

    fn elem(m: u32) -> impl Strategy<Value = CycloElem> {
        let deg = euler_phi(m) as usize;
        prop::collection::vec((-6i64..=6, 1i64..=4), deg).prop_map(move |cs| {
            let coeffs: Vec<Rational> = cs.into_iter().map(|(n, d)| rat(n, d)).collect();
            CycloElem::from_coeffs(m, &coeffs)
        })
    }

    fn field_and_elems() -> impl Strategy<Value = (CycloElem, CycloElem, CycloElem)> {
        prop::sample::select(vec![3u32, 5, 7, 8, 9, 12, 15, 16, 20])
            .prop_flat_map(|m| (elem(m), elem(m), elem(m)))
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(64))]

        #[test]
        fn field_axioms((a, b, c) in field_and_elems()) {
            prop_assert_eq!(&(&a * &b) * &c, &a * &(&b * &c));
            prop_assert_eq!(&a * &(&b + &c), &(&a * &b) + &(&a * &c));
            prop_assert_eq!(&a + &b, &b + &a);
            if !a.is_zero() {
                prop_assert!((&a * &a.inv().unwrap()).is_one());
            }
        }

        #[test]
        fn conjugation_is_ring_automorphism((a, b, _c) in field_and_elems()) {
            prop_assert_eq!((&a * &b).conj(), &a.conj() * &b.conj());
            prop_assert_eq!((&a + &b).conj(), &a.conj() + &b.conj());
            prop_assert_eq!(a.conj().conj(), a.clone());
        }

        #[test]
        fn lift_then_restrict((a, _b, _c) in field_and_elems(), k in 2u32..4) {
            let m = a.conductor();
            let up = a.lift(m * k).unwrap();
            prop_assert_eq!(&up, &a);
            prop_assert_eq!(up.restrict(m).unwrap(), a);
        }

        #[test]
        fn pow_matches_repeated_mul((a, _b, _c) in field_and_elems(), e in 0i64..6) {
            let mut acc = CycloElem::one(a.conductor());
            for _ in 0..e {
                acc = &acc * &a;
            }
            prop_assert_eq!(a.pow(e).unwrap(), acc.clone());
            if !a.is_zero() {
                prop_assert!((&a.pow(-e).unwrap() * &acc).is_one());
            }
        }
    }
}
