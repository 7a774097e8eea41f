//! Chern classes, Chern characters and Segre classes, related through
//! Newton's identities.

use num_bigint::BigInt;
use num_traits::One;

use super::ring::FormalClass;
use crate::arith::Rational;
use crate::error::{Error, Result};

fn factorial(k: u32) -> Rational {
    Rational::from_integer((1..=k).fold(BigInt::one(), |acc, i| acc * i))
}

/// Total Chern class from a Chern character, up to the ring's top degree.
///
/// With power sums `p_k = k! ch_k`, solves
/// `k c_k = sum_{i=1..k} (-1)^{i-1} c_{k-i} p_i`.
pub fn ch_to_chern(character: &FormalClass) -> FormalClass {
    let ring = character.ring();
    let top = ring.top_degree();
    let p: Vec<FormalClass> = (0..=top)
        .map(|k| character.part(k).scale(&factorial(k)))
        .collect();
    let mut c = vec![FormalClass::one(ring)];
    for k in 1..=top as usize {
        let mut acc = FormalClass::zero(ring);
        for i in 1..=k {
            let term = &c[k - i] * &p[i];
            acc = if i % 2 == 1 {
                &acc + &term
            } else {
                &acc - &term
            };
        }
        c.push(acc.scale(&Rational::new(1.into(), (k as i64).into())));
    }
    c.iter().fold(FormalClass::zero(ring), |acc, ck| &acc + ck)
}

/// Chern character of a class with the given total Chern class and rank.
pub fn chern_to_ch(chern: &FormalClass, rank: &Rational) -> FormalClass {
    let ring = chern.ring();
    let top = ring.top_degree();
    let c: Vec<FormalClass> = (0..=top).map(|k| chern.part(k)).collect();
    // (-1)^{k-1} p_k = k c_k - sum_{i=1..k-1} (-1)^{i-1} c_{k-i} p_i
    let mut p: Vec<FormalClass> = vec![FormalClass::zero(ring)];
    for k in 1..=top as usize {
        let mut acc = c[k].scale(&Rational::from_integer((k as i64).into()));
        for i in 1..k {
            let term = &c[k - i] * &p[i];
            acc = if i % 2 == 1 {
                &acc - &term
            } else {
                &acc + &term
            };
        }
        p.push(if k % 2 == 1 { acc } else { -&acc });
    }
    let mut ch = FormalClass::constant(ring, rank.clone());
    for (k, pk) in p.iter().enumerate().skip(1) {
        ch = &ch + &pk.scale(&factorial(k as u32).recip());
    }
    ch
}

/// Total Segre class `s = 1 / c`.
pub fn segre(chern: &FormalClass) -> FormalClass {
    let ring = chern.ring();
    assert!(
        chern.constant_term().is_one(),
        "total Chern class must start with 1"
    );
    let top = ring.top_degree();
    let c: Vec<FormalClass> = (0..=top).map(|k| chern.part(k)).collect();
    let mut s = vec![FormalClass::one(ring)];
    for k in 1..=top as usize {
        let mut acc = FormalClass::zero(ring);
        for i in 1..=k {
            acc = &acc - &(&c[i] * &s[k - i]);
        }
        s.push(acc);
    }
    s.iter().fold(FormalClass::zero(ring), |acc, sk| &acc + sk)
}

/// A K-theory class recorded by its integer rank and total Chern class.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ChernData {
    rank: i64,
    chern: FormalClass,
}

impl ChernData {
    pub fn from_chern(rank: i64, chern: FormalClass) -> Result<Self> {
        if !chern.constant_term().is_one() {
            return Err(Error::InvalidParameters(
                "total Chern class must have constant term 1".into(),
            ));
        }
        Ok(ChernData { rank, chern })
    }

    pub fn from_character(character: &FormalClass) -> Result<Self> {
        let rank = character.constant_term();
        if !rank.is_integer() {
            return Err(Error::InvalidParameters(format!(
                "character has non-integral rank {rank}"
            )));
        }
        let rank = i64::try_from(rank.to_integer())
            .map_err(|_| Error::InvalidParameters("rank out of range".into()))?;
        Ok(ChernData {
            rank,
            chern: ch_to_chern(character),
        })
    }

    /// Trivial class of rank `n`.
    pub fn trivial(ring: &std::sync::Arc<super::GradedRing>, n: i64) -> Self {
        ChernData {
            rank: n,
            chern: FormalClass::one(ring),
        }
    }

    pub fn rank(&self) -> i64 {
        self.rank
    }

    pub fn chern(&self) -> &FormalClass {
        &self.chern
    }

    /// `c_k`.
    pub fn c(&self, k: u32) -> FormalClass {
        self.chern.part(k)
    }

    pub fn character(&self) -> FormalClass {
        chern_to_ch(&self.chern, &Rational::from_integer(self.rank.into()))
    }

    pub fn segre(&self) -> FormalClass {
        segre(&self.chern)
    }

    pub fn direct_sum(&self, other: &ChernData) -> ChernData {
        ChernData {
            rank: self.rank + other.rank,
            chern: &self.chern * &other.chern,
        }
    }

    /// The K-theoretic negative `-W`, whose total Chern class is `s(W)`.
    pub fn negate(&self) -> ChernData {
        ChernData {
            rank: -self.rank,
            chern: self.segre(),
        }
    }

    pub fn is_zero_class(&self) -> bool {
        self.rank == 0 && self.chern.constant_term().is_one() && self.chern.part(0) == self.chern
    }
}

/// `W ⊗ L` for a line class with first Chern class `lambda`, computed as
/// `ch(W) * exp(lambda)`.
pub fn twist(w: &ChernData, lambda: &FormalClass) -> ChernData {
    let ch = &w.character() * &lambda.exp();
    let twisted = ChernData::from_character(&ch).expect("twisting preserves the integral rank");
    debug_assert_eq!(twisted.rank, w.rank);
    twisted
}
