// Average and maximum error rates for every model: exhaustive at 4 and 8
// bits, sampled at 16 bits. Prints a CSV report for one configuration.
//
// `cargo run --release --example error_tables`

use std::error::Error;
use std::io::{self, Write};

use refmlm::analysis::{export_report, ReportFormat};
use refmlm::{analyze_exhaustive, analyze_sampled, Convention, Model, MultiplierConfig};

pub fn run(out: &mut dyn Write) -> Result<(), Box<dyn Error>> {
    writeln!(out, "{:<6} {:<13} {:>12} {:>12}", "width", "model", "AER %", "MER %")?;
    for width in [4, 8] {
        for model in Model::ALL {
            let stats = analyze_exhaustive(&MultiplierConfig::with_model(model, width)?, Convention::default())?;
            writeln!(
                out,
                "{width:<6} {:<13} {:>12.6} {:>12.6}",
                model.name(),
                stats.aer_percent,
                stats.mer_percent
            )?;
        }
    }
    for model in [Model::Mitchell, Model::MitchellKom] {
        let stats = analyze_sampled(&MultiplierConfig::with_model(model, 16)?, 200_000, 42)?;
        writeln!(
            out,
            "{:<6} {:<13} {:>12.6} {:>12.6}",
            "16*",
            model.name(),
            stats.aer_percent,
            stats.mer_percent
        )?;
    }

    writeln!(out)?;
    let stats = analyze_exhaustive(
        &MultiplierConfig::with_model(Model::MitchellKom, 4)?,
        Convention::default(),
    )?;
    export_report(&stats, ReportFormat::Csv, out)?;
    Ok(())
}

#[allow(dead_code)]
fn main() -> Result<(), Box<dyn Error>> {
    run(&mut io::stdout().lock())
}
