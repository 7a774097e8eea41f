//! Runs the oracle battery over every candidate normalization and saves the
//! unique survivor.

use segre_verlinde::quot_vi::{
    calibrate, default_battery, CalibratedConvention, ConventionSearchSpace,
};

fn main() -> segre_verlinde::Result<()> {
    println!("{} battery cases", default_battery().len());
    let cal = calibrate(&ConventionSearchSpace::default())?;
    print!("{}", cal.matrix);
    let c = cal.convention.convention();
    println!(
        "survivor: roots of {}, phase {:+}, exponent tweak {:+}",
        if i8::from(c.root_target) == 1 {
            "+1"
        } else {
            "(-1)^(r-1)"
        },
        c.phase,
        c.weight_exponent_tweak
    );

    let dir = std::env::temp_dir().join("segre-verlinde-example");
    let path = dir.join("convention.json");
    cal.convention.save(&path)?;
    let loaded = CalibratedConvention::load(&path)?;
    println!(
        "saved and re-verified from {}: {}",
        path.display(),
        loaded == cal.convention
    );
    Ok(())
}
