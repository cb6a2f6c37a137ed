// Cycle schedule of three operand pairs through a pipelined stage, and
// stream totals with and without pipelining.
//
// `cargo run --example pipeline_trace`

use std::error::Error;
use std::io::{self, Write};

use refmlm::pipeline::{simulate_stream, trace_stream, write_trace, StageTiming};

pub fn run(out: &mut dyn Write) -> Result<(), Box<dyn Error>> {
    let events = trace_stream(3, &StageTiming::pipelined())?;
    write_trace(out, &events)?;
    writeln!(out)?;
    writeln!(out, "{:>6} {:>10} {:>14}", "pairs", "pipelined", "non-pipelined")?;
    for pairs in [1, 10, 100, 1000] {
        let p = simulate_stream(pairs, &StageTiming::pipelined())?;
        let n = simulate_stream(pairs, &StageTiming::non_pipelined())?;
        writeln!(out, "{pairs:>6} {p:>10} {n:>14}")?;
    }
    Ok(())
}

#[allow(dead_code)]
fn main() -> Result<(), Box<dyn Error>> {
    run(&mut io::stdout().lock())
}
