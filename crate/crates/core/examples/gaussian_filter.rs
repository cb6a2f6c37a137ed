// Salt-and-pepper noise removed by a 3×3 Gaussian whose products go
// through each multiplier model. Images land in a temporary directory.
//
// `cargo run --release --example gaussian_filter`

use std::error::Error;
use std::fs;
use std::io::{self, Write};

use refmlm::cli::run_filter_experiment;
use refmlm::imaging::{gaussian_kernel_default, pattern, save_pgm, NoiseSpec};
use refmlm::{Model, MultiplierConfig};

pub fn run(out: &mut dyn Write) -> Result<(), Box<dyn Error>> {
    let dir = tempfile::tempdir()?;
    let original = pattern::ridges(256, 256, 7.0);
    fs::write(dir.path().join("original.pgm"), save_pgm(&original))?;
    let kernel = gaussian_kernel_default();

    for density in [0.05, 0.10, 0.20] {
        let noise = NoiseSpec::new(density, 12345)?;
        for model in Model::ALL {
            let cfg = MultiplierConfig::with_model(model, 8)?;
            let (noisy, smoothed, report) = run_filter_experiment(&original, &noise, &kernel, &cfg)?;
            fs::write(dir.path().join(format!("noisy-{density}.pgm")), save_pgm(&noisy))?;
            fs::write(
                dir.path().join(format!("{}-{density}.pgm", model.name())),
                save_pgm(&smoothed),
            )?;
            writeln!(
                out,
                "p={density:.2} {:<13} corrupted {:>7.3} dB  smoothed {:>7.3} dB",
                model.name(),
                report.psnr_corrupted_db.unwrap_or(f64::INFINITY),
                report.psnr_smoothed_db.unwrap_or(f64::INFINITY),
            )?;
        }
    }
    writeln!(out, "wrote {} images", fs::read_dir(dir.path())?.count())?;
    Ok(())
}

#[allow(dead_code)]
fn main() -> Result<(), Box<dyn Error>> {
    run(&mut io::stdout().lock())
}
