use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// `∫_{[Quot(C^n, r, d)]^vir} a_r^N`, with `r N` equal to the virtual
/// dimension `n d - r (n - r)(g - 1)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct VIInstance {
    n: u32,
    r: u32,
    g: u32,
    d: u64,
    big_n: u64,
}

impl VIInstance {
    pub fn new(n: u32, r: u32, g: u32, d: u64, big_n: u64) -> Result<Self> {
        if r == 0 || r >= n {
            return Err(Error::InvalidParameters(format!(
                "need 0 < r < n, got r={r}, n={n}"
            )));
        }
        let lhs = r as i128 * big_n as i128;
        let rhs = Self::virtual_dimension(n, r, g, d);
        if lhs != rhs {
            return Err(Error::DegreeMismatch { lhs, rhs });
        }
        Ok(VIInstance { n, r, g, d, big_n })
    }

    /// Instance whose exponent is forced by the degree match, if integral
    /// and nonnegative.
    pub fn with_matching_exponent(n: u32, r: u32, g: u32, d: u64) -> Result<Self> {
        let vdim = Self::virtual_dimension(n, r, g, d);
        if vdim < 0 || vdim % r.max(1) as i128 != 0 {
            return Err(Error::DegreeMismatch {
                lhs: vdim,
                rhs: vdim,
            });
        }
        Self::new(n, r, g, d, (vdim / r as i128) as u64)
    }

    pub fn virtual_dimension(n: u32, r: u32, g: u32, d: u64) -> i128 {
        let (n, r, g, d) = (n as i128, r as i128, g as i128, d as i128);
        n * d - r * (n - r) * (g - 1)
    }

    pub fn n(&self) -> u32 {
        self.n
    }
    pub fn r(&self) -> u32 {
        self.r
    }
    pub fn g(&self) -> u32 {
        self.g
    }
    pub fn d(&self) -> u64 {
        self.d
    }
    pub fn exponent(&self) -> u64 {
        self.big_n
    }
}

/// Where the evaluation points live.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(into = "i8", try_from = "i8")]
pub enum RootTarget {
    /// n-th roots of `+1`.
    One,
    /// n-th roots of `(-1)^{r-1}`.
    SignedByRank,
}

impl From<RootTarget> for i8 {
    fn from(t: RootTarget) -> i8 {
        match t {
            RootTarget::One => 1,
            RootTarget::SignedByRank => -1,
        }
    }
}

impl TryFrom<i8> for RootTarget {
    type Error = String;
    fn try_from(v: i8) -> std::result::Result<Self, String> {
        match v {
            1 => Ok(RootTarget::One),
            -1 => Ok(RootTarget::SignedByRank),
            _ => Err(format!("root target must be +1 or -1, got {v}")),
        }
    }
}

/// Normalization of the root-of-unity sum: evaluation points, global sign
/// and a shift of the `∏λ` exponent.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct VIConvention {
    pub root_target: RootTarget,
    pub phase: i8,
    pub weight_exponent_tweak: i32,
}

impl VIConvention {
    pub fn new(root_target: RootTarget, phase: i8, weight_exponent_tweak: i32) -> Result<Self> {
        if phase != 1 && phase != -1 {
            return Err(Error::InvalidParameters(format!(
                "phase must be +1 or -1, got {phase}"
            )));
        }
        Ok(VIConvention {
            root_target,
            phase,
            weight_exponent_tweak,
        })
    }

    /// Conductor `m` and the embedding `λ_a = zeta_m^{step a + offset}` of
    /// the `n` evaluation points.
    pub fn root_layout(&self, n: u32, r: u32) -> RootLayout {
        match self.root_target {
            RootTarget::SignedByRank if r.is_multiple_of(2) => RootLayout {
                n,
                conductor: 2 * n,
                step: 2,
                offset: 1,
            },
            _ => RootLayout {
                n,
                conductor: n,
                step: 1,
                offset: 0,
            },
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct RootLayout {
    pub n: u32,
    pub conductor: u32,
    pub step: u32,
    pub offset: u32,
}

impl RootLayout {
    /// Exponent of `zeta_m` for the point `λ_a`.
    pub fn exponent(&self, a: u32) -> i64 {
        (self.step * a + self.offset) as i64
    }

    /// Index of the conjugate point `λ_a^{-1}`.
    pub fn conj_index(&self, a: u32) -> u32 {
        if self.offset == 0 {
            (self.n - a) % self.n
        } else {
            self.n - 1 - a
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn degree_match_is_enforced() {
        assert!(VIInstance::new(4, 2, 0, 0, 2).is_ok());
        assert!(VIInstance::new(3, 1, 2, 4, 10).is_ok());
        assert_eq!(
            VIInstance::new(4, 2, 2, 3, 5),
            Err(Error::DegreeMismatch { lhs: 10, rhs: 8 })
        );
        assert!(VIInstance::new(3, 3, 0, 0, 0).is_err());
        assert_eq!(
            VIInstance::with_matching_exponent(2, 1, 3, 5)
                .unwrap()
                .exponent(),
            8
        );
    }

    #[test]
    fn convention_json_uses_signed_root_target() {
        let c = VIConvention::new(RootTarget::SignedByRank, 1, 0).unwrap();
        let s = serde_json::to_string(&c).unwrap();
        assert_eq!(
            s,
            r#"{"root_target":-1,"phase":1,"weight_exponent_tweak":0}"#
        );
        assert_eq!(serde_json::from_str::<VIConvention>(&s).unwrap(), c);
        assert!(serde_json::from_str::<VIConvention>(
            r#"{"root_target":2,"phase":1,"weight_exponent_tweak":0}"#
        )
        .is_err());
        assert!(VIConvention::new(RootTarget::One, 2, 0).is_err());
    }

    #[test]
    fn conjugate_indices() {
        let c = VIConvention::new(RootTarget::SignedByRank, 1, 0).unwrap();
        let lay = c.root_layout(4, 2);
        assert_eq!(lay.conductor, 8);
        for a in 0..4 {
            let b = lay.conj_index(a);
            assert_eq!((lay.exponent(a) + lay.exponent(b)) % 8, 0);
        }
        let lay = c.root_layout(5, 3);
        assert_eq!(lay.conductor, 5);
        for a in 0..5 {
            assert_eq!((lay.exponent(a) + lay.exponent(lay.conj_index(a))) % 5, 0);
        }
    }
}
