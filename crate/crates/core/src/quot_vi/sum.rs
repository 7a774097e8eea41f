//! Exact and floating-point evaluation of the root-of-unity sum
//!
//! ```text
//! u * sum_{|I| = r} (∏_{λ∈I} λ)^{N+τ} W(I)^{g-1},
//! W(I) = n^r (∏λ)^{-1} ∏_{λ≠μ ∈ I} (λ - μ)^{-1}.
//! ```
//!
//! The exact path uses `∏_{λ≠μ}(λ-μ) = (∏λ)^{r-1} ∏_{i<j} T(a_j - a_i)` with
//! `T(k) = 2 - zeta_n^k - zeta_n^{-k}`, so a summand is a root of unity times a
//! product of table entries `T(k)^{1-g}`.

use std::sync::atomic::{AtomicUsize, Ordering};
use std::sync::Mutex;

use num_bigint::BigInt;
use num_complex::Complex64;
use num_traits::{ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

use super::instance::{RootLayout, VIConvention, VIInstance};
use super::subsets::{binomial, SubsetStream};
use crate::arith::{CycloElem, Rational};
use crate::error::{Error, Result};

/// Number of contiguous rank ranges a job is cut into, independent of the
/// worker count so partial sums are combined identically for any pool size.
const CHUNKS: u128 = 64;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Backend {
    Exact,
    Float,
}

impl std::str::FromStr for Backend {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "exact" => Ok(Backend::Exact),
            "float" => Ok(Backend::Float),
            other => Err(Error::InvalidParameters(format!("unknown backend {other}"))),
        }
    }
}

impl std::fmt::Display for Backend {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            Backend::Exact => "exact",
            Backend::Float => "float",
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SumOptions {
    pub backend: Backend,
    pub workers: usize,
    /// Pair each subset with its conjugate and evaluate only one of them.
    pub conjugation_halving: bool,
    /// Float backend: allowed residual relative to `max(1, sum |summand|)`.
    pub float_tolerance: f64,
}

impl Default for SumOptions {
    fn default() -> Self {
        SumOptions {
            backend: Backend::Exact,
            workers: 1,
            conjugation_halving: true,
            float_tolerance: 1e-6,
        }
    }
}

impl SumOptions {
    pub fn with_workers(workers: usize) -> Self {
        SumOptions {
            workers,
            ..Self::default()
        }
    }
}

pub fn vi_sum(inst: &VIInstance, conv: &VIConvention, opts: &SumOptions) -> Result<BigInt> {
    match opts.backend {
        Backend::Exact => vi_sum_exact(inst, conv, opts).and_then(|v| certify(&v)),
        Backend::Float => vi_sum_float(inst, conv, opts),
    }
}

fn certify(value: &CycloElem) -> Result<BigInt> {
    if value.conj() != *value {
        return Err(Error::Calibration(format!(
            "sum is not fixed by conjugation: {value}"
        )));
    }
    value
        .as_rational_integer()
        .map_err(|_| Error::Calibration(format!("non-integral value {value}")))
}

/// Runs `work` over contiguous rank ranges of the subset stream on
/// `workers` threads and returns the per-range results in rank order.
fn partitioned<T, F>(n: u32, r: u32, workers: usize, work: F) -> Result<Vec<T>>
where
    T: Send,
    F: Fn(SubsetStream, u128) -> T + Sync,
{
    let total =
        binomial(n, r).ok_or_else(|| Error::InvalidParameters(format!("C({n}, {r}) overflows")))?;
    let chunk = total.div_ceil(CHUNKS).max(1);
    let bounds: Vec<(u128, u128)> = (0..CHUNKS)
        .map(|i| (i * chunk, ((i + 1) * chunk).min(total)))
        .filter(|(lo, hi)| lo < hi)
        .collect();
    let run = |(lo, hi): (u128, u128)| -> Result<T> {
        Ok(work(SubsetStream::starting_at(n, r, lo)?, hi - lo))
    };
    let workers = workers.max(1).min(bounds.len().max(1));
    if workers == 1 {
        return bounds.iter().map(|&b| run(b)).collect();
    }
    let next = AtomicUsize::new(0);
    let slots: Mutex<Vec<Option<Result<T>>>> =
        Mutex::new((0..bounds.len()).map(|_| None).collect());
    std::thread::scope(|scope| {
        for _ in 0..workers {
            scope.spawn(|| loop {
                let i = next.fetch_add(1, Ordering::Relaxed);
                if i >= bounds.len() {
                    break;
                }
                let out = run(bounds[i]);
                slots.lock().unwrap()[i] = Some(out);
            });
        }
    });
    slots
        .into_inner()
        .unwrap()
        .into_iter()
        .map(|s| s.expect("every chunk is claimed"))
        .collect()
}

/// Shared read-only tables for one exact job.
struct ExactTables {
    layout: RootLayout,
    /// `T(k)^{1-g}` for `k` in `1..n`.
    pair: Vec<CycloElem>,
    /// `zeta_m^e + zeta_m^{-e}` for `e` in `0..m`.
    real_roots: Vec<CycloElem>,
    /// Exponent applied to `∏λ`: `N + τ - r(g-1)`.
    weight: i64,
}

impl ExactTables {
    fn new(inst: &VIInstance, conv: &VIConvention) -> Result<Self> {
        let n = inst.n();
        let layout = conv.root_layout(n, inst.r());
        let m = layout.conductor;
        let g = inst.g() as i64;
        let step = layout.step as i64;
        let two = CycloElem::from_int(m, 2);
        let mut pair = vec![CycloElem::zero(m)];
        for k in 1..n as i64 {
            if k > n as i64 / 2 {
                let mirrored = pair[(n as i64 - k) as usize].clone();
                pair.push(mirrored);
                continue;
            }
            let t = &(&two - &CycloElem::root(m, step * k)) - &CycloElem::root(m, -step * k);
            pair.push(t.pow(1 - g)?);
        }
        let real_roots = (0..m as i64)
            .map(|e| &CycloElem::root(m, e) + &CycloElem::root(m, -e))
            .collect();
        let weight = inst.exponent() as i128 + conv.weight_exponent_tweak as i128
            - inst.r() as i128 * (g as i128 - 1);
        let weight = weight.rem_euclid(m as i128) as i64;
        Ok(ExactTables {
            layout,
            pair,
            real_roots,
            weight,
        })
    }

    fn phase_exponent(&self, subset: &[u32]) -> i64 {
        let m = self.layout.conductor as i64;
        let e: i64 = subset.iter().map(|&a| self.layout.exponent(a)).sum();
        (e.rem_euclid(m) * self.weight).rem_euclid(m)
    }

    fn pair_product(&self, subset: &[u32]) -> CycloElem {
        let m = self.layout.conductor;
        let mut acc: Option<CycloElem> = None;
        for (i, &a) in subset.iter().enumerate() {
            for &b in &subset[i + 1..] {
                let t = &self.pair[(b - a) as usize];
                acc = Some(match acc {
                    None => t.clone(),
                    Some(x) => &x * t,
                });
            }
        }
        acc.unwrap_or_else(|| CycloElem::one(m))
    }

    fn conjugate_subset(&self, subset: &[u32]) -> Vec<u32> {
        let mut c: Vec<u32> = subset.iter().map(|&a| self.layout.conj_index(a)).collect();
        c.sort_unstable();
        c
    }
}

/// Unnormalized exact total `sum_I (∏λ)^{N+τ} W(I)^{g-1}` times `u`, before
/// integrality certification.
pub fn vi_sum_exact(
    inst: &VIInstance,
    conv: &VIConvention,
    opts: &SumOptions,
) -> Result<CycloElem> {
    let tables = ExactTables::new(inst, conv)?;
    let m = tables.layout.conductor;
    let halving = opts.conjugation_halving;
    let partials = partitioned(inst.n(), inst.r(), opts.workers, |stream, len| {
        let mut acc = CycloElem::zero(m);
        for subset in stream.take(len as usize) {
            let e = tables.phase_exponent(&subset);
            if !halving {
                acc = &acc + &tables.pair_product(&subset).mul_root(e);
                continue;
            }
            let conj = tables.conjugate_subset(&subset);
            match conj.cmp(&subset) {
                std::cmp::Ordering::Less => {}
                std::cmp::Ordering::Equal => {
                    acc = &acc + &tables.pair_product(&subset).mul_root(e);
                }
                std::cmp::Ordering::Greater => {
                    let both = &tables.pair_product(&subset) * &tables.real_roots[e as usize];
                    acc = &acc + &both;
                }
            }
        }
        acc
    })?;
    let total = partials.iter().fold(CycloElem::zero(m), |acc, p| &acc + p);
    Ok(total.scale(&prefactor(inst, conv)))
}

/// `u * n^{r(g-1)}`.
fn prefactor(inst: &VIInstance, conv: &VIConvention) -> Rational {
    let e = inst.r() as i32 * (inst.g() as i32 - 1);
    let n = Rational::from_integer(BigInt::from(inst.n()));
    let mut p = if e >= 0 {
        num_traits::pow(n, e as usize)
    } else {
        num_traits::pow(n.recip(), (-e) as usize)
    };
    if conv.phase < 0 {
        p = -p;
    }
    p
}

/// Reference evaluation straight from the defining formula: every ordered
/// difference `λ - μ` is inverted individually. Single-threaded, no tables.
pub fn vi_sum_naive(inst: &VIInstance, conv: &VIConvention) -> Result<CycloElem> {
    let layout = conv.root_layout(inst.n(), inst.r());
    let m = layout.conductor;
    let g = inst.g() as i64;
    let n_r = CycloElem::from_rational(
        m,
        &num_traits::pow(Rational::from_integer(inst.n().into()), inst.r() as usize),
    );
    let mut total = CycloElem::zero(m);
    for subset in super::subsets::enumerate_subsets(inst.n(), inst.r()) {
        let lambdas: Vec<CycloElem> = subset
            .iter()
            .map(|&a| CycloElem::root(m, layout.exponent(a)))
            .collect();
        let prod = lambdas.iter().fold(CycloElem::one(m), |acc, l| &acc * l);
        let mut diffs = CycloElem::one(m);
        for (i, l) in lambdas.iter().enumerate() {
            for (j, mu) in lambdas.iter().enumerate() {
                if i != j {
                    diffs = &diffs * &(l - mu).inv()?;
                }
            }
        }
        let w = &(&n_r * &prod.inv()?) * &diffs;
        let exponent = inst.exponent() as i64 + conv.weight_exponent_tweak as i64;
        let summand = &prod.pow(exponent)? * &w.pow(g - 1)?;
        total = &total + &summand;
    }
    Ok(total.scale(&Rational::from_integer(conv.phase.into())))
}

/// Floating-point evaluation from the defining formula, rounded to the
/// nearest integer after a residual check.
pub fn vi_sum_float(inst: &VIInstance, conv: &VIConvention, opts: &SumOptions) -> Result<BigInt> {
    let layout = conv.root_layout(inst.n(), inst.r());
    let m = layout.conductor as i64;
    let n = inst.n() as f64;
    let r = inst.r() as i32;
    let g = inst.g() as i32;
    let cis = |e: i64| {
        let t = 2.0 * std::f64::consts::PI * (e.rem_euclid(m) as f64) / m as f64;
        Complex64::new(t.cos(), t.sin())
    };
    let exponent = inst.exponent() as i128 + conv.weight_exponent_tweak as i128;
    let partials = partitioned(inst.n(), inst.r(), opts.workers, |stream, len| {
        let mut acc = Complex64::zero();
        let mut mass = 0.0f64;
        for subset in stream.take(len as usize) {
            let exps: Vec<i64> = subset.iter().map(|&a| layout.exponent(a)).collect();
            let lambdas: Vec<Complex64> = exps.iter().map(|&e| cis(e)).collect();
            let e_sum: i64 = exps.iter().sum::<i64>().rem_euclid(m);
            let prod = cis(e_sum);
            let mut diffs = Complex64::new(1.0, 0.0);
            for (i, l) in lambdas.iter().enumerate() {
                for (j, mu) in lambdas.iter().enumerate() {
                    if i != j {
                        diffs *= l - mu;
                    }
                }
            }
            let w = Complex64::new(n.powi(r), 0.0) / (prod * diffs);
            let power = cis(((e_sum as i128 * exponent).rem_euclid(m as i128)) as i64);
            let summand = power * w.powi(g - 1);
            mass += summand.norm();
            acc += summand;
        }
        (acc, mass)
    })?;
    let (sum, mass) = partials
        .into_iter()
        .fold((Complex64::zero(), 0.0), |(s, w), (a, b)| (s + a, w + b));
    let sum = sum * conv.phase as f64;
    let scale = mass.max(1.0);
    let rounded = sum.re.round();
    let residual = (sum.re - rounded).abs().max(sum.im.abs());
    if !residual.is_finite() || residual > opts.float_tolerance * scale {
        return Err(Error::FloatResidual(format!(
            "{sum} (residual {residual:e}, scale {scale:e})"
        )));
    }
    if rounded.abs() > 2f64.powi(52) {
        return Err(Error::FloatResidual(format!(
            "{rounded} exceeds exactly representable range"
        )));
    }
    Ok(BigInt::from(rounded.to_i64().expect("checked range")))
}
