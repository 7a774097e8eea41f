//! Evaluates a virtual intersection on a Quot scheme with both backends and
//! with one and several workers.
//!
//! cargo run --release --example quot_sum -- 24 4 2

use std::time::Instant;

use segre_verlinde::quot_vi::{
    binomial, vi_sum, Backend, RootTarget, SumOptions, VIConvention, VIInstance,
};

fn main() -> segre_verlinde::Result<()> {
    let args: Vec<u64> = std::env::args()
        .skip(1)
        .map(|a| a.parse().expect("integer argument"))
        .collect();
    let (n, r, g) = match args.as_slice() {
        [n, r, g] => (*n as u32, *r as u32, *g as u32),
        _ => (8, 2, 2),
    };
    // smallest degree for which the exponent N = vdim / r is an integer >= 1
    let d = (0..)
        .find(|&d| {
            let vdim = VIInstance::virtual_dimension(n, r, g, d);
            vdim > 0 && vdim % r as i128 == 0
        })
        .unwrap();
    let inst = VIInstance::with_matching_exponent(n, r, g, d)?;
    let conv = VIConvention::new(RootTarget::SignedByRank, 1, 0)?;
    println!(
        "Quot(C^{n}, {r}, {d}) on a genus-{g} curve, exponent N = {}, {} subsets",
        inst.exponent(),
        binomial(n, r).unwrap()
    );

    let workers = std::thread::available_parallelism().map_or(1, |w| w.get());
    for w in [1, workers.max(2)] {
        let start = Instant::now();
        let value = vi_sum(&inst, &conv, &SumOptions::with_workers(w))?;
        println!("exact, {w} worker(s): {value}  ({:.2?})", start.elapsed());
    }

    let opts = SumOptions {
        backend: Backend::Float,
        ..SumOptions::default()
    };
    match vi_sum(&inst, &conv, &opts) {
        Ok(v) => println!("float: {v}"),
        Err(e) => println!("float backend declined: {e}"),
    }
    Ok(())
}
