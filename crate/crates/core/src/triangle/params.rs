use num_integer::Integer;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::quot_vi::VIInstance;
use crate::symcalc::rank_alpha_m;

/// `(g, r, d, ℓ)` for the moduli space `M(r, d)` over a genus-`g` curve at
/// level `ℓ`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct ModuliInput {
    pub g: u32,
    pub r: u32,
    pub d: i64,
    #[serde(rename = "ell")]
    pub level: u32,
}

impl ModuliInput {
    pub fn new(g: u32, r: u32, d: i64, level: u32) -> Result<Self> {
        if g < 2 {
            return Err(Error::InvalidParameters(format!(
                "genus must be >= 2, got {g}"
            )));
        }
        if r < 1 {
            return Err(Error::InvalidParameters("rank must be >= 1".into()));
        }
        if level < 1 {
            return Err(Error::InvalidParameters("level must be >= 1".into()));
        }
        Ok(ModuliInput { g, r, d, level })
    }

    /// `gcd(r, d)`, with `gcd(r, 0) = r`.
    pub fn h(&self) -> i64 {
        let r = self.r as i64;
        if self.d == 0 {
            r
        } else {
            r.gcd(&self.d)
        }
    }
}

/// How the degree is moved to a large representative of its class mod `r`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum DNormalizationPolicy {
    /// Smallest `d' ≡ d (mod r)` with `d' > 2r(g-1)` and `N >= 1`, then
    /// bumped by `r` until two consecutive shifts agree (at most `cap` bumps).
    Auto { cap: u32 },
    /// Use this `d'` as given.
    Fixed(i64),
}

impl Default for DNormalizationPolicy {
    fn default() -> Self {
        DNormalizationPolicy::Auto { cap: 10 }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct DerivedParams {
    pub h: i64,
    pub r0: i64,
    pub d0: i64,
    pub d_norm: i64,
    pub d0_norm: i64,
    pub n: u32,
    #[serde(rename = "N")]
    pub big_n: i64,
    pub vdim: i64,
}

impl DerivedParams {
    /// Parameters at an explicit representative `d' ≡ d (mod r)`.
    pub fn at_degree(input: &ModuliInput, d_norm: i64) -> Result<Self> {
        let r = input.r as i64;
        let g = input.g as i64;
        let level = input.level as i64;
        if (d_norm - input.d).rem_euclid(r) != 0 {
            return Err(Error::InvalidParameters(format!(
                "d'={d_norm} is not congruent to d={} mod r={r}",
                input.d
            )));
        }
        if d_norm < 0 {
            return Err(Error::InvalidParameters(format!(
                "d'={d_norm} must be nonnegative"
            )));
        }
        let h = input.h();
        let (r0, d0) = (r / h, input.d / h);
        debug_assert_eq!(if d_norm == 0 { r } else { r.gcd(&d_norm) }, h);
        let d0_norm = d_norm / h;
        let n = (level + h) * r0;
        let big_n = (level + h) * d0_norm - level * r0 * (g - 1);
        let vdim = n * d_norm - r * (n - r) * (g - 1);
        if r * big_n != vdim {
            return Err(Error::DegreeMismatch {
                lhs: (r * big_n) as i128,
                rhs: vdim as i128,
            });
        }
        Ok(DerivedParams {
            h,
            r0,
            d0,
            d_norm,
            d0_norm,
            n: u32::try_from(n).map_err(|_| Error::InvalidParameters("n out of range".into()))?,
            big_n,
            vdim,
        })
    }

    /// The Quot-scheme integral these parameters describe.
    pub fn instance(&self, input: &ModuliInput) -> Result<VIInstance> {
        if self.big_n < 1 {
            return Err(Error::InvalidParameters(format!(
                "N={} must be >= 1",
                self.big_n
            )));
        }
        VIInstance::new(
            self.n,
            input.r,
            input.g,
            self.d_norm as u64,
            self.big_n as u64,
        )
    }

    /// Same moduli problem with `d'` moved by `k r`.
    pub fn shifted(&self, input: &ModuliInput, k: i64) -> Result<Self> {
        Self::at_degree(input, self.d_norm + k * input.r as i64)
    }
}

/// Floor representative of the degree class chosen by `policy`; the
/// stabilization bump (which needs the root-of-unity sums) is applied by the
/// engine.
pub fn derive_params(input: &ModuliInput, policy: &DNormalizationPolicy) -> Result<DerivedParams> {
    match *policy {
        DNormalizationPolicy::Fixed(d_norm) => {
            let p = DerivedParams::at_degree(input, d_norm)?;
            if p.big_n < 1 {
                return Err(Error::InvalidParameters(format!(
                    "d'={d_norm} gives N={} < 1",
                    p.big_n
                )));
            }
            Ok(p)
        }
        DNormalizationPolicy::Auto { cap } => {
            let r = input.r as i64;
            let floor = 2 * r * (input.g as i64 - 1);
            // smallest d' ≡ d (mod r) strictly above the floor
            let mut d_norm = floor + 1 + (input.d - floor - 1).rem_euclid(r);
            for _ in 0..=cap {
                let p = DerivedParams::at_degree(input, d_norm)?;
                if p.big_n >= 1 {
                    return Ok(p);
                }
                d_norm += r;
            }
            Err(Error::Stabilization { cap })
        }
    }
}

/// K-class on the curve, recorded by rank and degree.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct KClassCurve {
    pub rank: i64,
    pub degree: i64,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct AlphaData {
    pub alpha: KClassCurve,
    pub rank_alpha_m: i64,
}

/// `α` with rank `(ℓ+h) r_0` and degree `-N` at the normalized degree.
pub fn build_alpha(input: &ModuliInput, params: &DerivedParams) -> AlphaData {
    let level = input.level as i64;
    let alpha = KClassCurve {
        rank: (level + params.h) * params.r0,
        degree: -params.big_n,
    };
    AlphaData {
        alpha,
        rank_alpha_m: rank_alpha_m(input.g, input.r, params.d_norm, input.level),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn input(g: u32, r: u32, d: i64, l: u32) -> ModuliInput {
        ModuliInput::new(g, r, d, l).unwrap()
    }

    #[test]
    fn derived_examples() {
        let p = derive_params(&input(2, 2, 1, 1), &DNormalizationPolicy::Fixed(5)).unwrap();
        assert_eq!((p.h, p.n, p.big_n, p.vdim), (1, 4, 8, 16));

        let p = derive_params(&input(2, 2, 0, 2), &DNormalizationPolicy::Fixed(6)).unwrap();
        assert_eq!((p.h, p.r0, p.n, p.big_n, p.vdim), (2, 1, 4, 10, 20));

        let p = derive_params(&input(3, 1, 2, 2), &DNormalizationPolicy::Fixed(7)).unwrap();
        assert_eq!((p.n, p.big_n, p.vdim), (3, 17, 17));
    }

    #[test]
    fn auto_floor() {
        let p = derive_params(&input(2, 2, 1, 1), &DNormalizationPolicy::default()).unwrap();
        assert_eq!((p.h, p.n, p.d_norm, p.big_n, p.vdim), (1, 4, 5, 8, 16));
        let p = derive_params(&input(2, 3, -4, 1), &DNormalizationPolicy::default()).unwrap();
        assert_eq!(p.d_norm, 8);
        assert_eq!(p.h, 1);
        let p = derive_params(&input(3, 2, 0, 3), &DNormalizationPolicy::default()).unwrap();
        assert_eq!(p.d_norm, 10);
    }

    #[test]
    fn fixed_degree_must_be_congruent() {
        assert!(derive_params(&input(2, 2, 1, 1), &DNormalizationPolicy::Fixed(6)).is_err());
    }

    #[test]
    fn alpha_examples() {
        let i = input(2, 2, 1, 3);
        let p = derive_params(&i, &DNormalizationPolicy::Fixed(11)).unwrap();
        let a = build_alpha(&i, &p);
        assert_eq!(
            a.alpha,
            KClassCurve {
                rank: 8,
                degree: -38
            }
        );

        let i = input(2, 1, 4, 1);
        let p = derive_params(&i, &DNormalizationPolicy::Fixed(4)).unwrap();
        assert_eq!(
            build_alpha(&i, &p).alpha,
            KClassCurve {
                rank: 2,
                degree: -7
            }
        );
        assert_eq!(build_alpha(&i, &p).rank_alpha_m, -1);
    }

    #[test]
    fn genus_and_level_validation() {
        assert!(ModuliInput::new(1, 2, 0, 1).is_err());
        assert!(ModuliInput::new(2, 0, 0, 1).is_err());
        assert!(ModuliInput::new(2, 2, 0, 0).is_err());
    }

    #[test]
    fn degree_identity_grid() {
        for g in 2..6 {
            for r in 1..6 {
                for d in -7..12 {
                    for l in 1..6 {
                        let i = input(g, r, d, l);
                        let p = derive_params(&i, &DNormalizationPolicy::default()).unwrap();
                        assert_eq!(r as i64 * p.big_n, p.vdim);
                        assert!(p.big_n >= 1);
                        let gcd = if p.d_norm == 0 {
                            r as i64
                        } else {
                            (r as i64).gcd(&p.d_norm)
                        };
                        assert_eq!(gcd, p.h);
                        let a = build_alpha(&i, &p);
                        assert_eq!(a.rank_alpha_m, -((r * r) as i64) * (g as i64 - 1));
                    }
                }
            }
        }
    }
}
