//! Acceptance suite. Each test prints one `PASS`/`FAIL` line; run with
//! `cargo test --test acceptance -- --nocapture --test-threads 1` to see them.

use std::path::Path;
use std::process::Command;
use std::sync::OnceLock;
use std::time::{Duration, Instant};

use num_bigint::BigInt;
use num_traits::Pow;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use segre_verlinde::arith::{int, rat, Rational};
use segre_verlinde::quot_vi::{
    calibrate, vi_sum, CalibratedConvention, ConventionSearchSpace, RootTarget, SumOptions,
    VIConvention,
};
use segre_verlinde::symcalc::{
    jacobian_segre, segre, twist, verify_eq7_chain, ChernData, FormalClass, GradedRing,
};
use segre_verlinde::triangle::{
    derive_params, DNormalizationPolicy, Engine, ModuliInput, VerifyOptions,
};

fn calibrated() -> CalibratedConvention {
    static CONV: OnceLock<CalibratedConvention> = OnceLock::new();
    *CONV.get_or_init(|| {
        calibrate(&ConventionSearchSpace::default())
            .expect("calibration succeeds")
            .convention
    })
}

fn engine() -> Engine {
    Engine::new(calibrated(), SumOptions::default())
}

fn input(g: u32, r: u32, d: i64, l: u32) -> ModuliInput {
    ModuliInput::new(g, r, d, l).unwrap()
}

/// Prints the verdict line, then fails the test if the check or the time
/// limit did not hold.
fn verdict(name: &str, start: Instant, limit: Duration, ok: bool, detail: &str) {
    let elapsed = start.elapsed();
    let in_time = elapsed <= limit;
    let tag = if ok && in_time { "PASS" } else { "FAIL" };
    println!("{tag} {name}: {detail} [{elapsed:.2?}, limit {limit:?}]");
    assert!(ok, "{name}: {detail}");
    assert!(in_time, "{name}: took {elapsed:?}, limit {limit:?}");
}

#[test]
fn calibration_has_unique_survivor() {
    let start = Instant::now();
    let cal = calibrate(&ConventionSearchSpace::default());
    let (ok, detail) = match &cal {
        Ok(c) => {
            let conv = c.convention.convention();
            let survivors = c.matrix.0.iter().filter(|o| o.passes()).count();
            let grassmannian = c
                .matrix
                .0
                .iter()
                .find(|o| o.convention == *conv)
                .map_or(0, |o| {
                    o.cases
                        .iter()
                        .filter(|k| k.name.starts_with("grassmannian") && k.pass)
                        .count()
                });
            (
                survivors == 1
                    && grassmannian == 16
                    && *conv == VIConvention::new(RootTarget::SignedByRank, 1, 0).unwrap(),
                format!(
                    "{survivors} survivor of {} candidates, {grassmannian}/16 Grassmannian points",
                    c.matrix.0.len()
                ),
            )
        }
        Err(e) => (false, e.to_string()),
    };
    verdict(
        "calibration uniqueness",
        start,
        Duration::from_secs(10),
        ok,
        &detail,
    );
}

#[test]
fn rank_one_triangle_closes() {
    let start = Instant::now();
    let e = engine();
    let mut failures = vec![];
    let mut cases = 0;
    for g in 2..=4u32 {
        for l in 1..=5u32 {
            cases += 1;
            let expected = BigInt::from(l + 1).pow(g);
            let rep = e.verify_triangle(&input(g, 1, 0, l), &VerifyOptions::default());
            let closed = rep.verlinde.as_ref() == Some(&expected)
                && rep.quot.as_ref() == Some(&expected)
                && rep.segre.as_ref() == Some(&expected)
                && rep.segre_independent
                && jacobian_segre(g, (l + 1) as i64) == expected
                && rep.passes();
            if !closed {
                failures.push(format!("(g={g}, l={l}): {rep:?}"));
            }
        }
    }
    verdict(
        "rank-one triangle closure",
        start,
        Duration::from_secs(30),
        failures.is_empty(),
        &format!(
            "{}/{cases} cases close at (l+1)^g {}",
            cases - failures.len(),
            failures.join("; ")
        ),
    );
}

#[test]
fn values_invariant_under_degree_shift() {
    let start = Instant::now();
    let e = engine();
    let mut failures = vec![];
    let mut cases = 0;
    for g in [2u32, 3] {
        for r in [2u32, 3] {
            for l in [1u32, 2, 3] {
                for d in [0i64, 1] {
                    cases += 1;
                    let i = input(g, r, d, l);
                    let p = e.params(&i).unwrap();
                    let values: Vec<BigInt> = (0..3)
                        .map(|k| e.quot_value(&i, &p.shifted(&i, k).unwrap()).unwrap())
                        .collect();
                    if values.windows(2).any(|w| w[0] != w[1]) {
                        failures.push(format!("{i:?} d'={}: {values:?}", p.d_norm));
                    }
                }
            }
        }
    }
    verdict(
        "d-shift invariance",
        start,
        Duration::from_secs(300),
        failures.is_empty(),
        &format!(
            "{}/{cases} inputs agree at d', d'+r, d'+2r {}",
            cases - failures.len(),
            failures.join("; ")
        ),
    );
}

#[test]
fn level_rank_symmetry() {
    let start = Instant::now();
    let e = engine();
    let mut failures = vec![];
    let mut cases = 0;
    for g in [2u32, 3] {
        for r in 1..=4u32 {
            for l in 1..=4u32 {
                cases += 1;
                let a = e.verlinde_number(&input(g, r, 0, l)).unwrap();
                let b = e.verlinde_number(&input(g, l, 0, r)).unwrap();
                if a != b {
                    failures.push(format!("g={g} r={r} l={l}: {a} vs {b}"));
                }
            }
        }
    }
    verdict(
        "level-rank symmetry",
        start,
        Duration::from_secs(600),
        failures.is_empty(),
        &format!(
            "{}/{cases} pairs symmetric {}",
            cases - failures.len(),
            failures.join("; ")
        ),
    );
}

#[test]
fn level_polynomial_has_expected_degree() {
    let start = Instant::now();
    let e = engine();
    let mut problems = vec![];
    match e.fit_level_polynomial(2, 2, 1, 1..=8) {
        Ok(p) if p.degree == 5 => {}
        Ok(p) => problems.push(format!("(2,2,1) has degree {}", p.degree)),
        Err(err) => problems.push(format!("(2,2,1): {err}")),
    }
    for g in 2..=4u32 {
        match e.fit_level_polynomial(g, 1, 0, 1..=g + 3) {
            Ok(p) => {
                // (l+1)^g = sum_k C(g,k) l^k
                let binomials: Vec<Rational> = (0..=g)
                    .scan(int(1), |c, k| {
                        let out = c.clone();
                        *c = &*c * int((g - k) as i64) / int(k as i64 + 1);
                        Some(out)
                    })
                    .collect();
                if p.coefficients != binomials || p.volume_term != int(1) {
                    problems.push(format!("r=1 g={g}: {:?}", p.coefficients));
                }
            }
            Err(err) => problems.push(format!("r=1 g={g}: {err}")),
        }
    }
    verdict(
        "polynomiality in the level",
        start,
        Duration::from_secs(60),
        problems.is_empty(),
        &format!(
            "degree 5 at (2,2,1); (l+1)^g for r=1 {}",
            problems.join("; ")
        ),
    );
}

fn random_rational(rng: &mut ChaCha8Rng) -> Rational {
    rat(rng.gen_range(-5..=5), rng.gen_range(1..=4))
}

/// Random polynomial in the ring's generators with parts in degrees `1..=top`.
fn random_positive_part(ring: &std::sync::Arc<GradedRing>, rng: &mut ChaCha8Rng) -> FormalClass {
    let gens = ring.generators().len();
    let top = ring.top_degree();
    let mut out = FormalClass::zero(ring);
    for _ in 0..12 {
        let mono: Vec<u32> = (0..gens).map(|_| rng.gen_range(0..=2)).collect();
        let deg = ring.degree_of(&mono);
        if (1..=top).contains(&deg) {
            out = &out + &FormalClass::monomial(ring, mono, random_rational(rng));
        }
    }
    out
}

#[test]
fn symbolic_identities() {
    let start = Instant::now();
    let mut rng = ChaCha8Rng::seed_from_u64(0x5e9e);
    let mut failures = vec![];
    for case in 0..100 {
        let rank: u32 = rng.gen_range(0..=3);
        let ring =
            GradedRing::free(rank + 2, &[("x", 1), ("y", 1), ("z", 2), ("lambda", 1)]).unwrap();
        let chern = &FormalClass::one(&ring) + &random_positive_part(&ring, &mut rng);
        let w = ChernData::from_chern(rank as i64, chern.clone()).unwrap();
        let lambda = &FormalClass::generator(&ring, "lambda")
            + &FormalClass::generator(&ring, "x").scale(&random_rational(&mut rng));
        let twisted = twist(&w, &lambda);
        if twisted.c(rank + 1) != w.c(rank + 1) {
            failures.push(format!("twist case {case} (rank {rank})"));
        }
        let s = segre(&chern);
        if &s * &chern != FormalClass::one(&ring) || segre(&s) != chern {
            failures.push(format!("segre case {case}"));
        }
    }
    let mut grid = 0;
    for r in 1..=3 {
        for m in 1..=3 {
            for big_r in 2..=6 {
                grid += 1;
                if !verify_eq7_chain(r, m, big_r, 8) {
                    failures.push(format!("chain r={r} m={m} R={big_r}"));
                }
            }
        }
    }
    verdict(
        "symbolic identity suite",
        start,
        Duration::from_secs(10),
        failures.is_empty(),
        &format!(
            "100 twist and segre cases, {grid} pushforward-chain cases {}",
            failures.join("; ")
        ),
    );
}

fn cli(dir: &Path, args: &[&str]) -> (i32, String) {
    let out = Command::new(env!("CARGO_BIN_EXE_segre-verlinde"))
        .current_dir(dir)
        .env_remove("SEGRE_VERLINDE_WORKERS")
        .args(args)
        .output()
        .expect("binary runs");
    (
        out.status.code().unwrap_or(-1),
        String::from_utf8_lossy(&out.stderr).into_owned(),
    )
}

#[test]
fn reports_identical_across_worker_counts() {
    let start = Instant::now();
    let dir = tempfile::tempdir().unwrap();
    let (code, err) = cli(dir.path(), &["calibrate"]);
    assert_eq!(code, 0, "{err}");
    let max = std::thread::available_parallelism().map_or(1, |n| n.get());
    let mut counts = vec![1, 2, max];
    counts.sort_unstable();
    counts.dedup();
    let mut outputs = vec![];
    let mut problems = vec![];
    for w in &counts {
        let out = format!("report-{w}.json");
        let (code, err) = cli(
            dir.path(),
            &[
                "verify",
                "--g",
                "2..3",
                "--r",
                "1..3",
                "--d",
                "0..1",
                "--ell",
                "1..2",
                "--no-cache",
                "--workers",
                &w.to_string(),
                "--out",
                &out,
            ],
        );
        if code != 0 {
            problems.push(format!("workers={w} exit {code}: {err}"));
        }
        outputs.push(std::fs::read(dir.path().join(&out)).unwrap_or_default());
    }
    let identical = outputs.windows(2).all(|p| p[0] == p[1]);
    if !identical {
        problems.push("reports differ".into());
    }
    let json: serde_json::Value = serde_json::from_slice(&outputs[0]).unwrap_or_default();
    let records = json["records"].as_array().cloned().unwrap_or_default();
    for rec in &records {
        for corner in ["verlinde", "quot", "segre"] {
            let integral = rec[corner]
                .as_str()
                .is_some_and(|s| s.parse::<BigInt>().is_ok());
            if !integral {
                problems.push(format!("{corner} not an integer in {rec}"));
            }
        }
    }
    verdict(
        "integrality and determinism",
        start,
        Duration::from_secs(600),
        problems.is_empty() && records.len() == 24,
        &format!(
            "{} records byte-identical for workers {counts:?} {}",
            records.len(),
            problems.join("; ")
        ),
    );
}

/// The moduli instance `(g, r, d, l) = (2, 4, 1, 5)`, whose Quot scheme has
/// `n = 24`, `r = 4`.
fn large_instance() -> segre_verlinde::quot_vi::VIInstance {
    let i = input(2, 4, 1, 5);
    let p = derive_params(&i, &DNormalizationPolicy::default()).unwrap();
    let inst = p.instance(&i).unwrap();
    assert_eq!((inst.n(), inst.r()), (24, 4));
    inst
}

fn time_sum(workers: usize) -> (Duration, BigInt) {
    let inst = large_instance();
    let conv = *calibrated().convention();
    let start = Instant::now();
    let v = vi_sum(&inst, &conv, &SumOptions::with_workers(workers)).unwrap();
    (start.elapsed(), v)
}

#[test]
fn exact_sum_meets_time_floor() {
    calibrated();
    let start = Instant::now();
    let (t, v) = time_sum(1);
    verdict(
        "performance floor (n=24, r=4, exact)",
        start,
        Duration::from_secs(60),
        v >= BigInt::from(0),
        &format!("value {v} in {t:.2?} with 1 worker"),
    );
}

#[test]
fn parallel_sum_speedup() {
    calibrated();
    let start = Instant::now();
    let median = |w: usize| {
        let mut runs: Vec<(Duration, BigInt)> = (0..5).map(|_| time_sum(w)).collect();
        runs.sort_by_key(|(t, _)| *t);
        runs.swap_remove(2)
    };
    let (t1, v1) = median(1);
    let (t4, v4) = median(4);
    let speedup = t1.as_secs_f64() / t4.as_secs_f64();
    let cpus = std::thread::available_parallelism().map_or(1, |n| n.get());
    verdict(
        "parallel speedup (4 workers vs 1)",
        start,
        Duration::from_secs(120),
        v1 == v4 && speedup >= 2.0,
        &format!("{t1:.2?} vs {t4:.2?}, speedup {speedup:.2}x on {cpus} available CPU(s)"),
    );
}
