use num_bigint::BigInt;
use num_traits::Zero;
use serde::{Deserialize, Serialize};

use crate::arith::Rational;
use crate::error::{Error, Result};

/// Exact polynomial through the given points, coefficients in ascending
/// order (Newton divided differences, then expanded).
pub fn interpolate(points: &[(Rational, Rational)]) -> Vec<Rational> {
    let k = points.len();
    let xs: Vec<&Rational> = points.iter().map(|(x, _)| x).collect();
    let mut table: Vec<Rational> = points.iter().map(|(_, y)| y.clone()).collect();
    for level in 1..k {
        for i in (level..k).rev() {
            let num = &table[i] - &table[i - 1];
            let den = xs[i] - xs[i - level];
            table[i] = num / den;
        }
    }
    // Horner on the Newton form
    let mut coeffs = vec![Rational::zero(); k];
    for i in (0..k).rev() {
        // coeffs <- coeffs * (x - xs[i]) + table[i]
        let mut next = vec![Rational::zero(); k];
        for j in 0..k {
            if coeffs[j].is_zero() {
                continue;
            }
            if j + 1 < k {
                next[j + 1] += &coeffs[j];
            }
            next[j] -= &coeffs[j] * xs[i];
        }
        next[0] += &table[i];
        coeffs = next;
    }
    while coeffs.len() > 1 && coeffs.last().is_some_and(|c| c.is_zero()) {
        coeffs.pop();
    }
    coeffs
}

pub fn evaluate(coeffs: &[Rational], x: &Rational) -> Rational {
    coeffs
        .iter()
        .rev()
        .fold(Rational::zero(), |acc, c| acc * x + c)
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct LevelSample {
    #[serde(rename = "ell")]
    pub level: u32,
    #[serde(with = "crate::serde_num::bigint")]
    pub value: BigInt,
}

/// Verlinde numbers as an exact polynomial in the level.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct LevelPolynomial {
    pub g: u32,
    pub r: u32,
    pub d: i64,
    /// Ascending coefficients, as exact rationals `p/q`.
    #[serde(with = "crate::serde_num::rationals")]
    pub coefficients: Vec<Rational>,
    pub degree: usize,
    /// Leading coefficient.
    #[serde(with = "crate::serde_num::rational")]
    pub volume_term: Rational,
    pub samples: Vec<LevelSample>,
}

impl LevelPolynomial {
    pub fn evaluate(&self, level: u32) -> Rational {
        evaluate(&self.coefficients, &Rational::from_integer(level.into()))
    }
}

/// Interpolates through the first `r^2(g-1)+2` samples and checks the rest.
pub fn fit_samples(g: u32, r: u32, d: i64, samples: Vec<LevelSample>) -> Result<LevelPolynomial> {
    let expected = (r as usize).pow(2) * (g as usize - 1) + 1;
    if samples.len() < expected + 2 {
        return Err(Error::InvalidParameters(format!(
            "need at least {} levels for degree {expected}, got {}",
            expected + 2,
            samples.len()
        )));
    }
    let points: Vec<(Rational, Rational)> = samples
        .iter()
        .map(|s| {
            (
                Rational::from_integer(s.level.into()),
                Rational::from_integer(s.value.clone()),
            )
        })
        .collect();
    let coefficients = interpolate(&points[..expected + 1]);
    for (x, y) in &points[expected + 1..] {
        let at = evaluate(&coefficients, x);
        if at != *y {
            return Err(Error::Polynomiality(format!(
                "level {x}: value {y} but the interpolant gives {at}"
            )));
        }
    }
    let degree = coefficients.len() - 1;
    if degree != expected {
        return Err(Error::Polynomiality(format!(
            "interpolant has degree {degree}, expected {expected}"
        )));
    }
    let volume_term = coefficients[degree].clone();
    Ok(LevelPolynomial {
        g,
        r,
        d,
        coefficients,
        degree,
        volume_term,
        samples,
    })
}
