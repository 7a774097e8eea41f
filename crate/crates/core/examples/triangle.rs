//! Computes the three corners for a few moduli problems and prints the
//! consistency checks.
//!
//! cargo run --example triangle -- 2 3 1 2

use segre_verlinde::quot_vi::{calibrate, ConventionSearchSpace, SumOptions};
use segre_verlinde::triangle::{Engine, ModuliInput, Verdict, VerifyOptions};

fn main() -> segre_verlinde::Result<()> {
    let args: Vec<i64> = std::env::args()
        .skip(1)
        .map(|a| a.parse().expect("integer argument"))
        .collect();
    let inputs = match args.as_slice() {
        [g, r, d, l] => vec![ModuliInput::new(*g as u32, *r as u32, *d, *l as u32)?],
        _ => vec![
            ModuliInput::new(2, 1, 0, 3)?,
            ModuliInput::new(2, 2, 1, 1)?,
            ModuliInput::new(2, 2, 0, 2)?,
            ModuliInput::new(3, 3, 1, 1)?,
        ],
    };
    let conv = calibrate(&ConventionSearchSpace::default())?.convention;
    let engine = Engine::new(conv, SumOptions::default());
    for input in inputs {
        let rep = engine.verify_triangle(&input, &VerifyOptions::default());
        let p = rep.params.expect("parameters");
        println!(
            "g={} r={} d={} l={}  (d'={} n={} N={})",
            input.g, input.r, input.d, input.level, p.d_norm, p.n, p.big_n
        );
        println!(
            "  verlinde={} quot={} segre={} (segre independent: {})",
            rep.verlinde.unwrap(),
            rep.quot.unwrap(),
            rep.segre.unwrap(),
            rep.segre_independent
        );
        for c in &rep.checks {
            let tag = match c.verdict {
                Verdict::Pass => "pass",
                Verdict::Fail => "FAIL",
                Verdict::NotApplicable => "n/a ",
            };
            println!("  [{tag}] {:<20} {}", c.name, c.detail);
        }
    }
    Ok(())
}
