//! Chern classes, characters, Segre classes and twists in a truncated ring,
//! and the rank-one Segre integral on a Jacobian.

use segre_verlinde::arith::int;
use segre_verlinde::symcalc::{jacobian_segre, segre, twist, ChernData, FormalClass, GradedRing};

fn main() -> segre_verlinde::Result<()> {
    let ring = GradedRing::free(4, &[("x", 1), ("y", 1), ("l", 1)])?;
    let x = FormalClass::generator(&ring, "x");
    let y = FormalClass::generator(&ring, "y");
    let l = FormalClass::generator(&ring, "l");

    // a virtual rank-1 class with nonzero c_2 and c_3
    let c = &(&(&FormalClass::one(&ring) + &x) + &(&x * &y).scale(&int(3))) + &y.pow(3);
    let w = ChernData::from_chern(1, c)?;
    println!("c(W)    = {}", w.chern());
    println!("ch(W)   = {}", w.character());
    println!("s(W)    = {}", w.segre());
    println!("s * c   = {}", &w.segre() * w.chern());

    let wl = twist(&w, &l);
    println!("c(W(L)) = {}", wl.chern());
    println!("c_2 unchanged by the twist: {}", wl.c(2) == w.c(2));
    println!("c_1 shifts by rank * l: {}", wl.c(1) == &w.c(1) + &l);

    let neg = w.negate();
    println!("c(-W) = s(W): {}", neg.chern() == &segre(w.chern()));

    for g in 2..=4 {
        let row: Vec<String> = (1..=5).map(|a| jacobian_segre(g, a).to_string()).collect();
        println!(
            "g={g}: integral of s over the Jacobian for a=1..5: {}",
            row.join(" ")
        );
    }
    Ok(())
}
