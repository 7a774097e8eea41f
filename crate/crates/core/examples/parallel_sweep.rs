//! Drives the command-line front end in-process: calibrates, sweeps a
//! parameter box with several worker counts and checks the reports are
//! byte-identical.

use segre_verlinde::cli::main_with_args;

fn main() {
    let dir = std::env::temp_dir().join("segre-verlinde-sweep");
    let _ = std::fs::remove_dir_all(&dir);
    let config = dir.join("convention.json");
    let config = config.to_str().unwrap();

    let code = main_with_args([
        "segre-verlinde",
        "calibrate",
        "--config",
        config,
        "--out",
        dir.join("calibration.txt").to_str().unwrap(),
    ]);
    assert_eq!(code, 0);

    let mut reports = vec![];
    for workers in ["1", "2", "4"] {
        let out = dir.join(format!("sweep-{workers}.csv"));
        let code = main_with_args([
            "segre-verlinde",
            "sweep",
            "--g",
            "2..3",
            "--r",
            "1..3",
            "--d",
            "0..2",
            "--ell",
            "1..3",
            "--config",
            config,
            "--workers",
            workers,
            "--no-cache",
            "--out",
            out.to_str().unwrap(),
        ]);
        println!("workers={workers}: exit code {code}");
        reports.push(std::fs::read(&out).unwrap());
    }
    print!("{}", String::from_utf8_lossy(&reports[0]));
    println!(
        "identical across worker counts: {}",
        reports.windows(2).all(|w| w[0] == w[1])
    );
}
