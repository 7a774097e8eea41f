//! Virtual intersections `∫ a_r^N` on `Quot(C^n, r, d)` as exact sums over
//! `r`-element subsets of roots of unity.

mod calibrate;
mod instance;
mod subsets;
mod sum;

pub use calibrate::{
    calibrate, calibrate_with, default_battery, run_battery, BatteryCase, CalibratedConvention,
    Calibration, CandidateOutcome, CaseOutcome, ConventionSearchSpace, Expectation, TestMatrix,
};
pub use instance::{RootLayout, RootTarget, VIConvention, VIInstance};
pub use subsets::{binomial, enumerate_subsets, unrank, SubsetStream};
pub use sum::{vi_sum, vi_sum_exact, vi_sum_float, vi_sum_naive, Backend, SumOptions};
