//! Oracle battery that pins down the normalization of the root-of-unity sum.

use std::fmt;
use std::path::Path;

use num_bigint::BigInt;
use num_traits::{Pow, Signed};
use serde::{Deserialize, Serialize};

use super::instance::{RootTarget, VIConvention, VIInstance};
use super::sum::{vi_sum, SumOptions};
use crate::error::{Error, Result};

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ConventionSearchSpace {
    pub root_targets: Vec<RootTarget>,
    pub phases: Vec<i8>,
    pub tweaks: Vec<i32>,
}

impl Default for ConventionSearchSpace {
    fn default() -> Self {
        ConventionSearchSpace {
            root_targets: vec![RootTarget::One, RootTarget::SignedByRank],
            phases: vec![1, -1],
            tweaks: (-2..=2).collect(),
        }
    }
}

impl ConventionSearchSpace {
    pub fn empty() -> Self {
        ConventionSearchSpace {
            root_targets: vec![],
            phases: vec![],
            tweaks: vec![],
        }
    }

    pub fn candidates(&self) -> Vec<VIConvention> {
        let mut out = vec![];
        for &t in &self.root_targets {
            for &u in &self.phases {
                for &tau in &self.tweaks {
                    if let Ok(c) = VIConvention::new(t, u, tau) {
                        out.push(c);
                    }
                }
            }
        }
        out
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Expectation {
    Equals(BigInt),
    Positive,
    /// Same value at every listed instance.
    Constant,
}

#[derive(Debug, Clone)]
pub struct BatteryCase {
    pub name: String,
    pub instances: Vec<VIInstance>,
    pub expect: Expectation,
}

/// Oracle battery, checked conjunctively:
/// Grassmannian points (`c_r(S^∨)^ℓ = [pt]` on `G(r, r+ℓ)`), rank-one values
/// `n^g`, invariance under `d -> d + r`, and positivity of Euler
/// characteristics of ample bundles for `r >= 2`.
pub fn default_battery() -> Vec<BatteryCase> {
    let mut cases = vec![];
    for r in 1..=4u32 {
        for level in 1..=4u32 {
            let inst = VIInstance::new(r + level, r, 0, 0, level as u64).expect("degree match");
            cases.push(BatteryCase {
                name: format!("grassmannian G({r},{})", r + level),
                instances: vec![inst],
                expect: Expectation::Equals(BigInt::from(1)),
            });
        }
    }
    for g in [2u32, 3] {
        for n in [2u32, 3, 4] {
            for d in [4 * g as u64, 4 * g as u64 + 1] {
                let inst = VIInstance::with_matching_exponent(n, 1, g, d).expect("rank one");
                cases.push(BatteryCase {
                    name: format!("rank-one n={n} g={g} d={d}"),
                    instances: vec![inst],
                    expect: Expectation::Equals(BigInt::from(n).pow(g)),
                });
            }
        }
    }
    // (n, r, g, d): Quot data for (r, d mod r, level) at the normalized degree
    let moduli_like = [
        (4u32, 2u32, 2u32, 5u64),
        (3, 2, 2, 6),
        (6, 2, 2, 5),
        (6, 3, 2, 7),
        (4, 3, 2, 9),
    ];
    for (n, r, g, d) in moduli_like {
        let shifted: Vec<VIInstance> = (0..3)
            .map(|k| VIInstance::with_matching_exponent(n, r, g, d + k * r as u64).expect("match"))
            .collect();
        cases.push(BatteryCase {
            name: format!("d-shift n={n} r={r} g={g} d={d}"),
            instances: shifted.clone(),
            expect: Expectation::Constant,
        });
        cases.push(BatteryCase {
            name: format!("positivity n={n} r={r} g={g} d={d}"),
            instances: vec![shifted[0]],
            expect: Expectation::Positive,
        });
    }
    cases
}

#[derive(Debug, Clone, Serialize, Deserialize, PartialEq, Eq)]
pub struct CaseOutcome {
    pub name: String,
    pub observed: Vec<String>,
    pub pass: bool,
}

#[derive(Debug, Clone, Serialize, Deserialize, PartialEq, Eq)]
pub struct CandidateOutcome {
    pub convention: VIConvention,
    pub cases: Vec<CaseOutcome>,
}

impl CandidateOutcome {
    pub fn passes(&self) -> bool {
        self.cases.iter().all(|c| c.pass)
    }
}

pub fn run_battery(
    conv: &VIConvention,
    battery: &[BatteryCase],
    opts: &SumOptions,
) -> CandidateOutcome {
    let cases = battery
        .iter()
        .map(|case| {
            let values: Vec<Result<BigInt>> = case
                .instances
                .iter()
                .map(|inst| vi_sum(inst, conv, opts))
                .collect();
            let observed = values
                .iter()
                .map(|v| match v {
                    Ok(x) => x.to_string(),
                    Err(e) => format!("error: {e}"),
                })
                .collect();
            let ok: Option<Vec<&BigInt>> = values.iter().map(|v| v.as_ref().ok()).collect();
            let pass = match (ok, &case.expect) {
                (None, _) => false,
                (Some(v), Expectation::Equals(x)) => v.iter().all(|y| *y == x),
                (Some(v), Expectation::Positive) => v.iter().all(|y| y.is_positive()),
                (Some(v), Expectation::Constant) => v.windows(2).all(|w| w[0] == w[1]),
            };
            CaseOutcome {
                name: case.name.clone(),
                observed,
                pass,
            }
        })
        .collect();
    CandidateOutcome {
        convention: *conv,
        cases,
    }
}

/// A convention that has passed the full battery.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct CalibratedConvention(VIConvention);

impl CalibratedConvention {
    pub fn convention(&self) -> &VIConvention {
        &self.0
    }

    /// Re-runs the battery on a single stored convention.
    pub fn verify(conv: VIConvention) -> Result<Self> {
        let outcome = run_battery(&conv, &default_battery(), &SumOptions::default());
        if outcome.passes() {
            Ok(CalibratedConvention(conv))
        } else {
            Err(Error::Calibration(format!(
                "stored convention fails the battery:\n{}",
                TestMatrix(vec![outcome])
            )))
        }
    }

    pub fn save(&self, path: &Path) -> Result<()> {
        if let Some(dir) = path.parent() {
            std::fs::create_dir_all(dir)?;
        }
        let file = ConventionFile {
            schema_version: CONVENTION_SCHEMA,
            convention: self.0,
        };
        let tmp = path.with_extension("json.tmp");
        std::fs::write(&tmp, serde_json::to_string_pretty(&file)? + "\n")?;
        std::fs::rename(&tmp, path)?;
        Ok(())
    }

    pub fn load(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path).map_err(|e| {
            Error::Config(format!(
                "cannot read convention file {}: {e} (run `calibrate` first)",
                path.display()
            ))
        })?;
        let file: ConventionFile = serde_json::from_str(&text)?;
        if file.schema_version != CONVENTION_SCHEMA {
            return Err(Error::Config(format!(
                "unsupported convention schema {}",
                file.schema_version
            )));
        }
        Self::verify(file.convention)
    }
}

const CONVENTION_SCHEMA: u32 = 1;

#[derive(Debug, Serialize, Deserialize)]
struct ConventionFile {
    schema_version: u32,
    convention: VIConvention,
}

/// Outcome table over all candidates, used in error messages and reports.
#[derive(Debug, Clone)]
pub struct TestMatrix(pub Vec<CandidateOutcome>);

impl fmt::Display for TestMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for cand in &self.0 {
            let c = &cand.convention;
            let failed: Vec<&str> = cand
                .cases
                .iter()
                .filter(|o| !o.pass)
                .map(|o| o.name.as_str())
                .collect();
            writeln!(
                f,
                "target={:+} u={:+} tau={:+}: {}/{} pass{}",
                i8::from(c.root_target),
                c.phase,
                c.weight_exponent_tweak,
                cand.cases.len() - failed.len(),
                cand.cases.len(),
                match failed.len() {
                    0 => String::new(),
                    k if k <= 4 => format!(" (failed: {})", failed.join(", ")),
                    k => format!(" (failed: {} and {} more)", failed[..3].join(", "), k - 3),
                }
            )?;
        }
        Ok(())
    }
}

#[derive(Debug, Clone)]
pub struct Calibration {
    pub convention: CalibratedConvention,
    pub matrix: TestMatrix,
}

/// Exhaustively tests every candidate and returns the unique survivor.
pub fn calibrate(space: &ConventionSearchSpace) -> Result<Calibration> {
    calibrate_with(space, &default_battery(), &SumOptions::default())
}

pub fn calibrate_with(
    space: &ConventionSearchSpace,
    battery: &[BatteryCase],
    opts: &SumOptions,
) -> Result<Calibration> {
    let candidates = space.candidates();
    if candidates.is_empty() {
        return Err(Error::Calibration("empty convention search space".into()));
    }
    let outcomes: Vec<CandidateOutcome> = candidates
        .iter()
        .map(|c| run_battery(c, battery, opts))
        .collect();
    let survivors: Vec<&CandidateOutcome> = outcomes.iter().filter(|o| o.passes()).collect();
    let matrix = TestMatrix(outcomes.clone());
    match survivors.as_slice() {
        [one] => Ok(Calibration {
            convention: CalibratedConvention(one.convention),
            matrix,
        }),
        _ => Err(Error::Calibration(format!(
            "{} conventions pass the battery, expected exactly one:\n{}",
            survivors.len(),
            matrix
        ))),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn unique_survivor_is_the_signed_convention() {
        let cal = calibrate(&ConventionSearchSpace::default()).unwrap();
        assert_eq!(
            *cal.convention.convention(),
            VIConvention::new(RootTarget::SignedByRank, 1, 0).unwrap()
        );
        assert_eq!(cal.matrix.0.len(), 20);
    }

    #[test]
    fn empty_space_is_an_error() {
        assert!(matches!(
            calibrate(&ConventionSearchSpace::empty()),
            Err(Error::Calibration(_))
        ));
    }

    #[test]
    fn battery_is_conjunctive() {
        // roots of +1 pass the Grassmannian and rank-one cases but not positivity
        let conv = VIConvention::new(RootTarget::One, 1, 0).unwrap();
        let out = run_battery(&conv, &default_battery(), &SumOptions::default());
        assert!(out
            .cases
            .iter()
            .filter(|c| c.name.starts_with("grassmannian"))
            .all(|c| c.pass));
        assert!(out
            .cases
            .iter()
            .filter(|c| c.name.starts_with("rank-one"))
            .all(|c| c.pass));
        assert!(!out.passes());

        // a wrong tweak fails the Grassmannian points even where rank-one could pass
        let conv = VIConvention::new(RootTarget::SignedByRank, 1, 2).unwrap();
        let out = run_battery(&conv, &default_battery(), &SumOptions::default());
        assert!(out
            .cases
            .iter()
            .any(|c| c.name.starts_with("grassmannian") && !c.pass));
    }

    #[test]
    fn spec_battery_alone_is_ambiguous() {
        let battery: Vec<BatteryCase> = default_battery()
            .into_iter()
            .filter(|c| !c.name.starts_with("positivity"))
            .collect();
        let err = calibrate_with(
            &ConventionSearchSpace::default(),
            &battery,
            &SumOptions::default(),
        )
        .unwrap_err();
        assert!(err.to_string().contains("2 conventions pass"), "{err}");
    }

    #[test]
    fn save_and_load_round_trip() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("conv.json");
        let cal = calibrate(&ConventionSearchSpace::default()).unwrap();
        cal.convention.save(&path).unwrap();
        assert_eq!(CalibratedConvention::load(&path).unwrap(), cal.convention);
        std::fs::write(&path, r#"{"schema_version":1,"convention":{"root_target":1,"phase":1,"weight_exponent_tweak":0}}"#).unwrap();
        assert!(CalibratedConvention::load(&path).is_err());
    }
}
