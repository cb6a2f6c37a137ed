// One Karatsuba-Ofman stage opened up, in both the four-product and
// three-product forms, then wide operands through the full recursion.
//
// `cargo run --example kom_recursion`

use std::error::Error;
use std::io::{self, Write};

use refmlm::kom::{kom_trace, MiddleTerm};
use refmlm::{KomVariant, Model, MultiplierConfig, UWord};

pub fn run(out: &mut dyn Write) -> Result<(), Box<dyn Error>> {
    let a = UWord::new(16, 8)?;
    let b = UWord::new(60, 8)?;
    for variant in KomVariant::ALL {
        let cfg = MultiplierConfig::new(Model::Refmlm, variant, 8)?;
        let t = kom_trace(a, b, &cfg)?;
        writeln!(
            out,
            "{variant}: a_L={} a_H={} b_L={} b_H={}",
            t.a.low, t.a.high, t.b.low, t.b.high
        )?;
        match t.middle {
            MiddleTerm::Pair { mid1, mid2 } => {
                writeln!(out, "  low={} high={} mid1={mid1} mid2={mid2}", t.low, t.high)?
            }
            MiddleTerm::Cross { lhs, rhs, value } => writeln!(
                out,
                "  low={} high={} cross=({})*({})={value}",
                t.low,
                t.high,
                lhs.to_i128(),
                rhs.to_i128()
            )?,
        }
        writeln!(out, "  product={}", t.product)?;
    }

    let (x, y) = (0xDEAD_BEEF_u64, 0xFEED_F00D_u64);
    let wide = MultiplierConfig::new(Model::Refmlm, KomVariant::ThreeProduct, 32)?;
    let approx = MultiplierConfig::new(Model::MitchellKom, KomVariant::FourProduct, 32)?;
    writeln!(out, "32-bit exact:        {}", x * y)?;
    writeln!(out, "32-bit refmlm:       {}", wide.multiply_raw(x, y))?;
    writeln!(out, "32-bit mitchell-kom: {}", approx.multiply_raw(x, y))?;
    Ok(())
}

#[allow(dead_code)]
fn main() -> Result<(), Box<dyn Error>> {
    run(&mut io::stdout().lock())
}
