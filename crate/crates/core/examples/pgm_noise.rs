// Binary PGM round trip, noise statistics at several densities, and a
// kernel built from a standard deviation.
//
// `cargo run --example pgm_noise`

use std::error::Error;
use std::io::{self, Write};

use refmlm::imaging::{add_salt_pepper, gaussian_kernel_from_sigma, load_pgm, pattern, save_pgm, NoiseSpec};

pub fn run(out: &mut dyn Write) -> Result<(), Box<dyn Error>> {
    let img = pattern::gradient(64, 128);
    let bytes = save_pgm(&img);
    let back = load_pgm(&bytes)?;
    writeln!(out, "round trip: {} bytes, identical: {}", bytes.len(), back == img)?;

    for density in [0.0, 0.01, 0.10, 0.50] {
        let noisy = add_salt_pepper(&img, &NoiseSpec::new(density, 7)?);
        let changed = img.pixels().iter().zip(noisy.pixels()).filter(|(a, b)| a != b).count();
        let black = noisy.pixels().iter().filter(|&&p| p == 0).count();
        let white = noisy.pixels().iter().filter(|&&p| p == 255).count();
        writeln!(out, "p={density:.2}: changed {changed}, black {black}, white {white}")?;
    }

    let kernel = gaussian_kernel_from_sigma(1.0, 8)?;
    for row in kernel.coefficients() {
        writeln!(out, "{:>3} {:>3} {:>3}", row[0], row[1], row[2])?;
    }
    Ok(())
}

#[allow(dead_code)]
fn main() -> Result<(), Box<dyn Error>> {
    run(&mut io::stdout().lock())
}
