//! Verlinde numbers as an exact polynomial in the level; the leading
//! coefficient is the volume term.
//!
//! cargo run --example level_polynomial -- 2 2 1 8

use segre_verlinde::quot_vi::{calibrate, ConventionSearchSpace, SumOptions};
use segre_verlinde::triangle::Engine;

fn main() -> segre_verlinde::Result<()> {
    let args: Vec<i64> = std::env::args()
        .skip(1)
        .map(|a| a.parse().expect("integer argument"))
        .collect();
    let (g, r, d, top) = match args.as_slice() {
        [g, r, d, top] => (*g as u32, *r as u32, *d, *top as u32),
        _ => (2, 2, 1, 8),
    };
    let conv = calibrate(&ConventionSearchSpace::default())?.convention;
    let engine = Engine::new(conv, SumOptions::default());
    let poly = engine.fit_level_polynomial(g, r, d, 1..=top)?;
    for s in &poly.samples {
        println!("l={:<3} {}", s.level, s.value);
    }
    let terms: Vec<String> = poly
        .coefficients
        .iter()
        .enumerate()
        .rev()
        .map(|(k, c)| format!("({c}) l^{k}"))
        .collect();
    println!("degree {}: {}", poly.degree, terms.join(" + "));
    println!("volume term: {}", poly.volume_term);
    println!("value at l=0: {}", poly.evaluate(0));
    Ok(())
}
