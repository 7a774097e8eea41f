//! The three corners for `M(r, d)` at level `ℓ`: the Verlinde number, the
//! Quot-scheme integral, and the top Segre number of `α_M`.

mod engine;
mod fit;
mod params;

pub use engine::{Check, Engine, SegreValue, Timings, TriangleReport, Verdict, VerifyOptions};
pub use fit::{evaluate, fit_samples, interpolate, LevelPolynomial, LevelSample};
pub use params::{
    build_alpha, derive_params, AlphaData, DNormalizationPolicy, DerivedParams, KClassCurve,
    ModuliInput,
};
