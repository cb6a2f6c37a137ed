// Mitchell's log multiplier on 18 × 60, step by step, next to the
// error-free 2×2 leaf and the full REFMLM result.
//
// `cargo run --example mitchell_worked_example`

use std::error::Error;
use std::io::{self, Write};

use refmlm::{efmlm2_multiply, log_decompose, mitchell_multiply, Model, MultiplierConfig, UWord};

pub fn run(out: &mut dyn Write) -> Result<(), Box<dyn Error>> {
    let a = UWord::new(18, 8)?;
    let b = UWord::new(60, 8)?;
    let (da, db) = (log_decompose(a)?, log_decompose(b)?);
    writeln!(out, "a = {a} -> k1 = {}, x1 = {}", da.k, da.fraction())?;
    writeln!(out, "b = {b} -> k2 = {}, x2 = {}", db.k, db.fraction())?;

    let p = mitchell_multiply(a, b)?;
    writeln!(out, "mitchell: {} (carry case: {})", p.value.value(), p.carry_case)?;
    writeln!(out, "exact:    {}", a.value() * b.value())?;

    let refmlm = MultiplierConfig::with_model(Model::Refmlm, 8)?;
    writeln!(out, "refmlm:   {}", refmlm.multiply(a, b)?.value())?;

    // the only 2-bit pair Mitchell gets wrong
    let three = UWord::new(3, 2)?;
    let flat = mitchell_multiply(three, three)?.value.value();
    let leaf = efmlm2_multiply(three, three)?.value();
    writeln!(out, "3 x 3 on 2 bits: mitchell {flat}, corrected leaf {leaf}")?;
    Ok(())
}

#[allow(dead_code)]
fn main() -> Result<(), Box<dyn Error>> {
    run(&mut io::stdout().lock())
}
