//! Exact arithmetic in cyclotomic fields.

use segre_verlinde::arith::{cyclotomic_polynomial, rat, CycloElem};

fn main() -> segre_verlinde::Result<()> {
    println!("Phi_12 = {:?}", cyclotomic_polynomial(12));

    // 1 + zeta_3 + zeta_3^2 = 0
    let z = CycloElem::root(3, 1);
    let sum = &(&CycloElem::one(3) + &z) + &z.pow(2)?;
    println!("1 + z3 + z3^2 = {sum}");

    // zeta_8 + zeta_8^{-1} = sqrt(2), whose square is the integer 2
    let s = &CycloElem::root(8, 1) + &CycloElem::root(8, -1);
    let two = (&s * &s).as_rational_integer()?;
    println!("(z8 + z8^-1)^2 = {two}");

    // mixed conductors are coerced to the lcm
    let mixed = &CycloElem::root(4, 1) * &CycloElem::root(3, 1);
    println!("z4 * z3 lives in Q(zeta_{}): {mixed}", mixed.conductor());

    // 2 - zeta_5 - zeta_5^{-1} and its exact inverse
    let t = &(&CycloElem::from_int(5, 2) - &CycloElem::root(5, 1)) - &CycloElem::root(5, -1);
    let inv = t.inv()?;
    println!("(2 - z5 - z5^-1)^-1 = {inv}");
    println!("check: {}", &t * &inv);

    // a real element of Q(zeta_12) drops back to Q(zeta_6)
    let x = (&CycloElem::root(12, 2) + &CycloElem::root(12, -2)).scale(&rat(1, 3));
    println!("restricted: {}", x.restrict(6)?);

    // conjugation fixes the norm
    let n = &t * &t.conj();
    println!("t * conj(t) = {n}");
    Ok(())
}
