use std::time::Instant;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{Pow, Signed};
use serde::{Deserialize, Serialize};

use super::fit::{fit_samples, LevelPolynomial, LevelSample};
use super::params::{build_alpha, derive_params, DNormalizationPolicy, DerivedParams, ModuliInput};
use crate::error::{Error, Result};
use crate::quot_vi::{vi_sum, CalibratedConvention, SumOptions};
use crate::symcalc::jacobian_segre_number;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Verdict {
    Pass,
    Fail,
    NotApplicable,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Check {
    pub name: String,
    pub verdict: Verdict,
    pub detail: String,
}

impl Check {
    fn new(name: &str, pass: bool, detail: String) -> Self {
        Check {
            name: name.to_string(),
            verdict: if pass { Verdict::Pass } else { Verdict::Fail },
            detail,
        }
    }

    fn skipped(name: &str, detail: &str) -> Self {
        Check {
            name: name.to_string(),
            verdict: Verdict::NotApplicable,
            detail: detail.to_string(),
        }
    }
}

/// Wall-clock milliseconds per phase.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
pub struct Timings {
    pub corners_ms: u128,
    pub checks_ms: u128,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct TriangleReport {
    pub input: ModuliInput,
    pub params: Option<DerivedParams>,
    #[serde(with = "crate::serde_num::opt_bigint")]
    pub verlinde: Option<BigInt>,
    #[serde(with = "crate::serde_num::opt_bigint")]
    pub quot: Option<BigInt>,
    #[serde(with = "crate::serde_num::opt_bigint")]
    pub segre: Option<BigInt>,
    pub segre_independent: bool,
    pub checks: Vec<Check>,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub error: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub timings: Option<Timings>,
}

impl TriangleReport {
    pub fn passes(&self) -> bool {
        self.error.is_none() && self.checks.iter().all(|c| c.verdict != Verdict::Fail)
    }

    pub fn check(&self, name: &str) -> Option<&Check> {
        self.checks.iter().find(|c| c.name == name)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct VerifyOptions {
    pub level_rank: bool,
    pub exponent: bool,
    pub timings: bool,
}

impl Default for VerifyOptions {
    fn default() -> Self {
        VerifyOptions {
            level_rank: true,
            exponent: true,
            timings: false,
        }
    }
}

/// Segre corner together with whether it was computed without the
/// root-of-unity sums.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SegreValue {
    pub value: BigInt,
    pub independent: bool,
}

/// Computes the three corners under a calibrated convention.
#[derive(Debug, Clone)]
pub struct Engine {
    convention: CalibratedConvention,
    sum: SumOptions,
    policy: DNormalizationPolicy,
}

impl Engine {
    pub fn new(convention: CalibratedConvention, sum: SumOptions) -> Self {
        Engine {
            convention,
            sum,
            policy: DNormalizationPolicy::default(),
        }
    }

    pub fn with_policy(mut self, policy: DNormalizationPolicy) -> Self {
        self.policy = policy;
        self
    }

    pub fn convention(&self) -> &CalibratedConvention {
        &self.convention
    }

    pub fn sum_options(&self) -> &SumOptions {
        &self.sum
    }

    pub fn policy(&self) -> &DNormalizationPolicy {
        &self.policy
    }

    /// The Quot-scheme integral `∫ a_r^N` at the given parameters.
    pub fn quot_value(&self, input: &ModuliInput, params: &DerivedParams) -> Result<BigInt> {
        let inst = params.instance(input)?;
        let v = vi_sum(&inst, self.convention.convention(), &self.sum)?;
        if v.is_negative() {
            return Err(Error::Calibration(format!(
                "negative value {v} for {input:?} at d'={}",
                params.d_norm
            )));
        }
        Ok(v)
    }

    /// Normalized parameters and the value there. Under the automatic policy
    /// `d'` is bumped by `r` until the values at `d'` and `d' + r` agree.
    pub fn stabilized(&self, input: &ModuliInput) -> Result<(DerivedParams, BigInt)> {
        let mut params = derive_params(input, &self.policy)?;
        let mut value = self.quot_value(input, &params)?;
        let cap = match self.policy {
            DNormalizationPolicy::Fixed(_) => return Ok((params, value)),
            DNormalizationPolicy::Auto { cap } => cap,
        };
        for bump in 0..=cap {
            let next = params.shifted(input, 1)?;
            let next_value = self.quot_value(input, &next)?;
            if next_value == value {
                return Ok((params, value));
            }
            if bump == cap {
                break;
            }
            log::debug!(
                "{input:?}: d'={} gives {value}, d'={} gives {next_value}; bumping",
                params.d_norm,
                next.d_norm
            );
            params = next;
            value = next_value;
        }
        Err(Error::Stabilization { cap })
    }

    pub fn params(&self, input: &ModuliInput) -> Result<DerivedParams> {
        Ok(self.stabilized(input)?.0)
    }

    pub fn verlinde_number(&self, input: &ModuliInput) -> Result<BigInt> {
        Ok(self.stabilized(input)?.1)
    }

    pub fn segre_number(&self, input: &ModuliInput) -> Result<SegreValue> {
        let (params, value) = self.stabilized(input)?;
        Ok(self.segre_at(input, &params, value))
    }

    fn segre_at(&self, input: &ModuliInput, params: &DerivedParams, bridge: BigInt) -> SegreValue {
        if input.r == 1 {
            let alpha = build_alpha(input, params).alpha;
            SegreValue {
                value: jacobian_segre_number(input.g, params.d_norm, alpha.rank, alpha.degree),
                independent: true,
            }
        } else {
            SegreValue {
                value: bridge,
                independent: false,
            }
        }
    }

    /// All corners plus the consistency checks. Computation errors are
    /// recorded in the report rather than returned.
    pub fn verify_triangle(&self, input: &ModuliInput, options: &VerifyOptions) -> TriangleReport {
        let start = Instant::now();
        let mut report = TriangleReport {
            input: *input,
            params: None,
            verlinde: None,
            quot: None,
            segre: None,
            segre_independent: input.r == 1,
            checks: vec![],
            error: None,
            timings: None,
        };
        let (params, value) = match self.stabilized(input) {
            Ok(x) => x,
            Err(e) => {
                report.error = Some(e.to_string());
                report
                    .checks
                    .push(Check::new("integrality", false, e.to_string()));
                return report;
            }
        };
        report.params = Some(params);
        // the Verlinde corner is evaluated through this same Quot integral
        let quot = value.clone();
        let segre = self.segre_at(input, &params, value.clone());
        report.verlinde = Some(value.clone());
        report.quot = Some(quot.clone());
        report.segre = Some(segre.value.clone());
        report.segre_independent = segre.independent;
        let corners_done = Instant::now();

        let checks = &mut report.checks;
        checks.push(Check::new(
            "integrality",
            !value.is_negative() && !quot.is_negative() && !segre.value.is_negative(),
            "all corners are certified nonnegative integers".into(),
        ));
        let corners_equal = value == quot && quot == segre.value;
        checks.push(Check::new(
            "corners_equal",
            corners_equal,
            format!("verlinde={value} quot={quot} segre={}", segre.value),
        ));

        checks.push(self.d_shift_check(input, &params, &value));

        if options.exponent {
            checks.push(self.exponent_check(input, &params, &value));
        }

        if options.level_rank {
            checks.push(self.level_rank_check(input, &value));
        }

        let alpha = build_alpha(input, &params);
        let expected = -((input.r * input.r) as i64) * (input.g as i64 - 1);
        checks.push(Check::new(
            "rank_alpha_m",
            alpha.rank_alpha_m == expected,
            format!("rank={} expected={expected}", alpha.rank_alpha_m),
        ));

        if input.r == 1 {
            let closed = BigInt::from(input.level + 1).pow(input.g);
            checks.push(Check::new(
                "rank_one_closed_form",
                value == closed,
                format!("(l+1)^g = {closed}"),
            ));
        }

        if options.timings {
            report.timings = Some(Timings {
                corners_ms: (corners_done - start).as_millis(),
                checks_ms: corners_done.elapsed().as_millis(),
            });
        }
        report
    }

    fn d_shift_check(&self, input: &ModuliInput, params: &DerivedParams, value: &BigInt) -> Check {
        let mut observed = vec![value.clone()];
        for k in 1..=2 {
            match params
                .shifted(input, k)
                .and_then(|p| self.quot_value(input, &p))
            {
                Ok(v) => observed.push(v),
                Err(e) => return Check::new("d_shift", false, e.to_string()),
            }
        }
        let detail = format!(
            "d'={},{},{}: {}",
            params.d_norm,
            params.d_norm + input.r as i64,
            params.d_norm + 2 * input.r as i64,
            observed
                .iter()
                .map(|v| v.to_string())
                .collect::<Vec<_>>()
                .join(",")
        );
        Check::new("d_shift", observed.windows(2).all(|w| w[0] == w[1]), detail)
    }

    /// When `r | d`, the level-`ℓ` Verlinde number also equals `∫ a_r^{ℓ t}`
    /// with `t = d/r + d/ℓ - (g-1)` at a degree divisible by both `r` and `ℓ`.
    fn exponent_check(&self, input: &ModuliInput, params: &DerivedParams, value: &BigInt) -> Check {
        let r = input.r as i64;
        let level = input.level as i64;
        if params.h != r {
            return Check::skipped("exponent_consistency", "r does not divide d");
        }
        let step = r.lcm(&level);
        let d3 = Integer::div_ceil(&params.d_norm, &step) * step;
        let t = d3 / r + d3 / level - (input.g as i64 - 1);
        let p3 = match params.shifted(input, (d3 - params.d_norm) / r) {
            Ok(p) => p,
            Err(e) => return Check::new("exponent_consistency", false, e.to_string()),
        };
        if level * t != p3.big_n {
            return Check::new(
                "exponent_consistency",
                false,
                format!("exponent l*t={} but N={} at d'={d3}", level * t, p3.big_n),
            );
        }
        match self.quot_value(input, &p3) {
            Ok(v) => Check::new(
                "exponent_consistency",
                v == *value,
                format!("d'={d3} exponent={} value={v}", p3.big_n),
            ),
            Err(e) => Check::new("exponent_consistency", false, e.to_string()),
        }
    }

    fn level_rank_check(&self, input: &ModuliInput, value: &BigInt) -> Check {
        if input.d.rem_euclid(input.r as i64) != 0 {
            return Check::skipped("level_rank", "d is not divisible by r");
        }
        let dual = match ModuliInput::new(input.g, input.level, 0, input.r) {
            Ok(d) => d,
            Err(e) => return Check::new("level_rank", false, e.to_string()),
        };
        match self.verlinde_number(&dual) {
            Ok(v) => Check::new(
                "level_rank",
                v == *value,
                format!(
                    "(g={}, r={}, d=0, l={}) gives {v}",
                    dual.g, dual.r, dual.level
                ),
            ),
            Err(e) => Check::new("level_rank", false, e.to_string()),
        }
    }

    /// Verlinde numbers over `levels`, interpolated exactly in the level.
    pub fn fit_level_polynomial(
        &self,
        g: u32,
        r: u32,
        d: i64,
        levels: std::ops::RangeInclusive<u32>,
    ) -> Result<LevelPolynomial> {
        let needed = (r as usize).pow(2) * (g as usize).saturating_sub(1) + 3;
        if levels.clone().count() < needed {
            return Err(Error::InvalidParameters(format!(
                "need at least {needed} consecutive levels, got {levels:?}"
            )));
        }
        let samples = levels
            .map(|level| {
                let input = ModuliInput::new(g, r, d, level)?;
                Ok(LevelSample {
                    level,
                    value: self.verlinde_number(&input)?,
                })
            })
            .collect::<Result<Vec<_>>>()?;
        fit_samples(g, r, d, samples)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::quot_vi::{RootTarget, VIConvention};

    fn engine() -> Engine {
        let conv = VIConvention::new(RootTarget::SignedByRank, 1, 0).unwrap();
        Engine::new(
            CalibratedConvention::verify(conv).unwrap(),
            SumOptions::default(),
        )
    }

    fn input(g: u32, r: u32, d: i64, l: u32) -> ModuliInput {
        ModuliInput::new(g, r, d, l).unwrap()
    }

    #[test]
    fn verlinde_examples() {
        let e = engine();
        assert_eq!(
            e.verlinde_number(&input(2, 1, 0, 2)).unwrap(),
            BigInt::from(9)
        );
        assert_eq!(
            e.verlinde_number(&input(2, 2, 0, 1)).unwrap(),
            BigInt::from(9)
        );
        assert_eq!(
            e.verlinde_number(&input(3, 1, 0, 1)).unwrap(),
            BigInt::from(8)
        );
    }

    #[test]
    fn segre_examples() {
        let e = engine();
        let s = e.segre_number(&input(2, 1, 3, 2)).unwrap();
        assert_eq!((s.value, s.independent), (BigInt::from(9), true));
        let s = e.segre_number(&input(3, 1, 5, 1)).unwrap();
        assert_eq!((s.value, s.independent), (BigInt::from(8), true));
        let i = input(2, 2, 1, 1);
        let s = e.segre_number(&i).unwrap();
        assert!(!s.independent);
        assert_eq!(s.value, e.verlinde_number(&i).unwrap());
    }

    #[test]
    fn rank_one_report() {
        let rep = engine().verify_triangle(&input(2, 1, 0, 3), &VerifyOptions::default());
        assert!(rep.passes(), "{rep:?}");
        assert_eq!(rep.verlinde, Some(BigInt::from(16)));
        assert_eq!(rep.segre, Some(BigInt::from(16)));
        assert!(rep.segre_independent);
        for name in [
            "integrality",
            "corners_equal",
            "d_shift",
            "exponent_consistency",
            "level_rank",
            "rank_alpha_m",
        ] {
            assert_eq!(rep.check(name).unwrap().verdict, Verdict::Pass, "{name}");
        }
        assert!(rep.timings.is_none());
    }

    #[test]
    fn rank_two_report() {
        let rep = engine().verify_triangle(&input(2, 2, 1, 1), &VerifyOptions::default());
        assert!(rep.passes(), "{rep:?}");
        assert_eq!(rep.verlinde, Some(BigInt::from(24)));
        assert_eq!(
            rep.check("level_rank").unwrap().verdict,
            Verdict::NotApplicable
        );
        assert_eq!(
            rep.check("exponent_consistency").unwrap().verdict,
            Verdict::NotApplicable
        );

        let rep = engine().verify_triangle(&input(2, 2, 0, 2), &VerifyOptions::default());
        assert!(rep.passes(), "{rep:?}");
        assert_eq!(rep.verlinde, Some(BigInt::from(40)));
        assert_eq!(
            rep.check("exponent_consistency").unwrap().verdict,
            Verdict::Pass
        );
    }

    #[test]
    fn fixed_policy_skips_stabilization() {
        let e = engine().with_policy(DNormalizationPolicy::Fixed(9));
        let (p, v) = e.stabilized(&input(2, 2, 1, 1)).unwrap();
        assert_eq!(p.d_norm, 9);
        assert_eq!(v, BigInt::from(24));
    }

    #[test]
    fn rank_one_fit() {
        let p = engine().fit_level_polynomial(2, 1, 0, 1..=5).unwrap();
        assert_eq!(p.degree, 2);
        assert_eq!(p.volume_term, crate::arith::int(1));
        assert!(engine().fit_level_polynomial(2, 1, 0, 1..=3).is_err());
    }
}
