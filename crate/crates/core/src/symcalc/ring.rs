use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};
use std::sync::Arc;

use num_traits::{One, Zero};

use crate::arith::Rational;
use crate::error::{Error, Result};

/// Exponent vector, one entry per generator of the ring.
pub type Monomial = Vec<u32>;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Generator {
    pub name: String,
    pub degree: u32,
    /// `x^k = 0` for `k >= nilpotency`.
    pub nilpotency: Option<u32>,
}

/// Polynomial ring over Q on even-degree generators, truncated above
/// `top_degree`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GradedRing {
    generators: Vec<Generator>,
    top_degree: u32,
}

impl GradedRing {
    pub fn new(top_degree: u32, generators: Vec<Generator>) -> Result<Arc<Self>> {
        for (i, g) in generators.iter().enumerate() {
            if g.degree == 0 {
                return Err(Error::InvalidParameters(format!(
                    "generator {} has degree 0",
                    g.name
                )));
            }
            if generators[..i].iter().any(|h| h.name == g.name) {
                return Err(Error::InvalidParameters(format!(
                    "duplicate generator name {}",
                    g.name
                )));
            }
        }
        Ok(Arc::new(GradedRing {
            generators,
            top_degree,
        }))
    }

    /// Ring with the given `(name, degree)` generators and no extra relations.
    pub fn free(top_degree: u32, gens: &[(&str, u32)]) -> Result<Arc<Self>> {
        Self::new(
            top_degree,
            gens.iter()
                .map(|&(name, degree)| Generator {
                    name: name.to_string(),
                    degree,
                    nilpotency: None,
                })
                .collect(),
        )
    }

    pub fn generators(&self) -> &[Generator] {
        &self.generators
    }

    pub fn top_degree(&self) -> u32 {
        self.top_degree
    }

    pub fn index_of(&self, name: &str) -> Option<usize> {
        self.generators.iter().position(|g| g.name == name)
    }

    pub fn degree_of(&self, mono: &[u32]) -> u32 {
        mono.iter()
            .zip(&self.generators)
            .map(|(e, g)| e * g.degree)
            .sum()
    }

    fn survives(&self, mono: &[u32]) -> bool {
        self.degree_of(mono) <= self.top_degree
            && mono
                .iter()
                .zip(&self.generators)
                .all(|(e, g)| g.nilpotency.is_none_or(|n| *e < n))
    }
}

/// Element of a [`GradedRing`]: sparse map from monomials to coefficients.
#[derive(Clone, PartialEq, Eq)]
pub struct FormalClass {
    ring: Arc<GradedRing>,
    terms: BTreeMap<Monomial, Rational>,
}

impl FormalClass {
    pub fn zero(ring: &Arc<GradedRing>) -> Self {
        FormalClass {
            ring: ring.clone(),
            terms: BTreeMap::new(),
        }
    }

    pub fn constant(ring: &Arc<GradedRing>, q: Rational) -> Self {
        let mut out = Self::zero(ring);
        out.add_term(vec![0; ring.generators.len()], q);
        out
    }

    pub fn one(ring: &Arc<GradedRing>) -> Self {
        Self::constant(ring, Rational::one())
    }

    /// The generator called `name`.
    ///
    /// # Panics
    /// If the ring has no such generator.
    pub fn generator(ring: &Arc<GradedRing>, name: &str) -> Self {
        let idx = ring
            .index_of(name)
            .unwrap_or_else(|| panic!("no generator named {name}"));
        let mut mono = vec![0; ring.generators.len()];
        mono[idx] = 1;
        Self::monomial(ring, mono, Rational::one())
    }

    pub fn monomial(ring: &Arc<GradedRing>, mono: Monomial, coeff: Rational) -> Self {
        assert_eq!(mono.len(), ring.generators.len(), "monomial arity");
        let mut out = Self::zero(ring);
        out.add_term(mono, coeff);
        out
    }

    fn add_term(&mut self, mono: Monomial, coeff: Rational) {
        if coeff.is_zero() || !self.ring.survives(&mono) {
            return;
        }
        match self.terms.entry(mono) {
            std::collections::btree_map::Entry::Vacant(v) => {
                v.insert(coeff);
            }
            std::collections::btree_map::Entry::Occupied(mut o) => {
                *o.get_mut() += coeff;
                if o.get().is_zero() {
                    o.remove();
                }
            }
        }
    }

    pub fn ring(&self) -> &Arc<GradedRing> {
        &self.ring
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Monomial, &Rational)> {
        self.terms.iter()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn coefficient(&self, mono: &[u32]) -> Rational {
        self.terms.get(mono).cloned().unwrap_or_else(Rational::zero)
    }

    /// Coefficient of the monomial `prod name^exp`.
    pub fn coefficient_of(&self, factors: &[(&str, u32)]) -> Rational {
        let mut mono = vec![0; self.ring.generators.len()];
        for &(name, e) in factors {
            let idx = self
                .ring
                .index_of(name)
                .unwrap_or_else(|| panic!("no generator named {name}"));
            mono[idx] += e;
        }
        self.coefficient(&mono)
    }

    /// Homogeneous component of degree `k`.
    pub fn part(&self, k: u32) -> Self {
        FormalClass {
            ring: self.ring.clone(),
            terms: self
                .terms
                .iter()
                .filter(|(m, _)| self.ring.degree_of(m) == k)
                .map(|(m, c)| (m.clone(), c.clone()))
                .collect(),
        }
    }

    /// Constant term.
    pub fn constant_term(&self) -> Rational {
        self.coefficient(&vec![0; self.ring.generators.len()])
    }

    /// Drops every term of degree above `k`.
    pub fn truncate(&self, k: u32) -> Self {
        FormalClass {
            ring: self.ring.clone(),
            terms: self
                .terms
                .iter()
                .filter(|(m, _)| self.ring.degree_of(m) <= k)
                .map(|(m, c)| (m.clone(), c.clone()))
                .collect(),
        }
    }

    pub fn scale(&self, q: &Rational) -> Self {
        if q.is_zero() {
            return Self::zero(&self.ring);
        }
        FormalClass {
            ring: self.ring.clone(),
            terms: self.terms.iter().map(|(m, c)| (m.clone(), c * q)).collect(),
        }
    }

    pub fn pow(&self, e: u32) -> Self {
        let mut acc = Self::one(&self.ring);
        for _ in 0..e {
            acc = &acc * self;
        }
        acc
    }

    /// `sum_k x^k / k!` for a class without constant term.
    pub fn exp(&self) -> Self {
        assert!(
            self.constant_term().is_zero(),
            "exp needs a nilpotent class"
        );
        let mut out = Self::one(&self.ring);
        let mut term = Self::one(&self.ring);
        for k in 1..=self.ring.top_degree {
            term = (&term * self).scale(&Rational::new(1.into(), k.into()));
            if term.is_zero() {
                break;
            }
            out = &out + &term;
        }
        out
    }

    /// `sum_k x^k`, i.e. `1 / (1 - x)`, for a class without constant term.
    pub fn geometric_series(&self) -> Self {
        assert!(
            self.constant_term().is_zero(),
            "series needs a nilpotent class"
        );
        let mut out = Self::one(&self.ring);
        let mut term = Self::one(&self.ring);
        for _ in 1..=self.ring.top_degree {
            term = &term * self;
            if term.is_zero() {
                break;
            }
            out = &out + &term;
        }
        out
    }

    fn check_ring(&self, other: &Self) {
        assert!(
            Arc::ptr_eq(&self.ring, &other.ring) || self.ring == other.ring,
            "formal classes live in different rings"
        );
    }
}

impl Add for &FormalClass {
    type Output = FormalClass;
    fn add(self, rhs: &FormalClass) -> FormalClass {
        self.check_ring(rhs);
        let mut out = self.clone();
        for (m, c) in &rhs.terms {
            out.add_term(m.clone(), c.clone());
        }
        out
    }
}

impl Sub for &FormalClass {
    type Output = FormalClass;
    fn sub(self, rhs: &FormalClass) -> FormalClass {
        self + &(-rhs)
    }
}

impl Neg for &FormalClass {
    type Output = FormalClass;
    fn neg(self) -> FormalClass {
        FormalClass {
            ring: self.ring.clone(),
            terms: self.terms.iter().map(|(m, c)| (m.clone(), -c)).collect(),
        }
    }
}

impl Mul for &FormalClass {
    type Output = FormalClass;
    fn mul(self, rhs: &FormalClass) -> FormalClass {
        self.check_ring(rhs);
        let mut out = FormalClass::zero(&self.ring);
        let top = self.ring.top_degree;
        for (ma, ca) in &self.terms {
            let da = self.ring.degree_of(ma);
            for (mb, cb) in &rhs.terms {
                if da + self.ring.degree_of(mb) > top {
                    continue;
                }
                let mono: Monomial = ma.iter().zip(mb).map(|(a, b)| a + b).collect();
                out.add_term(mono, ca * cb);
            }
        }
        out
    }
}

impl fmt::Debug for FormalClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "FormalClass({})", self)
    }
}

impl fmt::Display for FormalClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        for (i, (m, c)) in self.terms.iter().enumerate() {
            if i > 0 {
                write!(f, " + ")?;
            }
            write!(f, "{}", c)?;
            for (e, g) in m.iter().zip(&self.ring.generators) {
                match e {
                    0 => {}
                    1 => write!(f, "*{}", g.name)?,
                    _ => write!(f, "*{}^{}", g.name, e)?,
                }
            }
        }
        Ok(())
    }
}
