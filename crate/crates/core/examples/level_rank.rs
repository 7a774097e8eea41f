//! The table of Verlinde numbers at degree zero is symmetric under
//! exchanging rank and level.

use segre_verlinde::quot_vi::{calibrate, ConventionSearchSpace, SumOptions};
use segre_verlinde::triangle::{Engine, ModuliInput};

fn main() -> segre_verlinde::Result<()> {
    let conv = calibrate(&ConventionSearchSpace::default())?.convention;
    let engine = Engine::new(conv, SumOptions::default());
    for g in [2u32, 3] {
        println!("genus {g} (rows r, columns l):");
        let mut table = vec![];
        for r in 1..=4u32 {
            let row = (1..=4u32)
                .map(|l| engine.verlinde_number(&ModuliInput::new(g, r, 0, l)?))
                .collect::<segre_verlinde::Result<Vec<_>>>()?;
            println!(
                "  {}",
                row.iter().map(|v| format!("{v:>10}")).collect::<String>()
            );
            table.push(row);
        }
        let symmetric = (0..4).all(|i| (0..4).all(|j| table[i][j] == table[j][i]));
        println!("  symmetric: {symmetric}");
    }
    Ok(())
}
