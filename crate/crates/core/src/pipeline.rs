//! Cycle model of a single KOM stage.
//!
//! One operation per clock period. The pipelined stage overlaps the third and
//! fourth half-width products with the first two adders:
//!
//! | period | units active             |
//! |--------|--------------------------|
//! | 1      | decompose                |
//! | 2      | pp1                      |
//! | 3      | pp2                      |
//! | 4      | pp3, adder1 (pp1+pp2)    |
//! | 5      | pp4, adder2 (+pp3)       |
//! | 6      | adder3 (+pp4)            |
//! | 7      | align                    |
//!
//! Without pipelining every step gets its own period, nine in total.

use std::fmt;
use std::io::{self, Write};

use thiserror::Error;

pub const PIPELINED_LATENCY: u64 = 7;
pub const NON_PIPELINED_LATENCY: u64 = 9;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum PipelineError {
    #[error("empty stream: at least one operand pair is required")]
    EmptyStream,
    #[error("initiation interval must be at least 1")]
    ZeroInitiationInterval,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct StageTiming {
    pipelined: bool,
    initiation_interval: u64,
}

impl StageTiming {
    /// Pipelined stage accepting a new pair every clock.
    pub fn pipelined() -> Self {
        StageTiming {
            pipelined: true,
            initiation_interval: 1,
        }
    }

    /// Non-pipelined stage: the next pair enters once the previous one leaves.
    pub fn non_pipelined() -> Self {
        StageTiming {
            pipelined: false,
            initiation_interval: NON_PIPELINED_LATENCY,
        }
    }

    pub fn with_initiation_interval(pipelined: bool, ii: u64) -> Result<Self, PipelineError> {
        if ii == 0 {
            return Err(PipelineError::ZeroInitiationInterval);
        }
        Ok(StageTiming {
            pipelined,
            initiation_interval: ii,
        })
    }

    pub fn is_pipelined(&self) -> bool {
        self.pipelined
    }

    pub fn latency_cycles(&self) -> u64 {
        stage_latency(self.pipelined)
    }

    pub fn initiation_interval(&self) -> u64 {
        self.initiation_interval
    }

    /// Per-pair schedule as `(period offset from 1, unit, operation)`.
    fn schedule(&self) -> &'static [(u64, Unit, Operation)] {
        use Operation::*;
        if self.pipelined {
            &[
                (1, Unit::Decomposer, Decompose),
                (2, Unit::HalfMultiplier(1), PartialProduct(1)),
                (3, Unit::HalfMultiplier(2), PartialProduct(2)),
                (4, Unit::HalfMultiplier(3), PartialProduct(3)),
                (4, Unit::Adder(1), Add(1)),
                (5, Unit::HalfMultiplier(4), PartialProduct(4)),
                (5, Unit::Adder(2), Add(2)),
                (6, Unit::Adder(3), Add(3)),
                (7, Unit::Aligner, Align),
            ]
        } else {
            &[
                (1, Unit::Decomposer, Decompose),
                (2, Unit::HalfMultiplier(1), PartialProduct(1)),
                (3, Unit::HalfMultiplier(2), PartialProduct(2)),
                (4, Unit::HalfMultiplier(3), PartialProduct(3)),
                (5, Unit::HalfMultiplier(4), PartialProduct(4)),
                (6, Unit::Adder(1), Add(1)),
                (7, Unit::Adder(2), Add(2)),
                (8, Unit::Adder(3), Add(3)),
                (9, Unit::Aligner, Align),
            ]
        }
    }
}

pub fn stage_latency(pipelined: bool) -> u64 {
    if pipelined {
        PIPELINED_LATENCY
    } else {
        NON_PIPELINED_LATENCY
    }
}

/// Functional units of one KOM stage.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Unit {
    Decomposer,
    HalfMultiplier(u8),
    Adder(u8),
    Aligner,
}

impl fmt::Display for Unit {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Unit::Decomposer => f.write_str("decomposer"),
            Unit::HalfMultiplier(i) => write!(f, "half_kom{i}"),
            Unit::Adder(i) => write!(f, "adder{i}"),
            Unit::Aligner => f.write_str("aligner"),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Operation {
    Decompose,
    PartialProduct(u8),
    Add(u8),
    Align,
}

impl fmt::Display for Operation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Operation::Decompose => f.write_str("decompose"),
            Operation::PartialProduct(i) => write!(f, "pp{i}"),
            Operation::Add(i) => write!(f, "adder{i}"),
            Operation::Align => f.write_str("align"),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct TraceEvent {
    /// 1-based clock period.
    pub cycle: u64,
    pub unit: Unit,
    pub operation: Operation,
    /// 0-based index of the operand pair in the stream.
    pub pair: u64,
}

impl fmt::Display for TraceEvent {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{},{},{}:{}", self.cycle, self.unit, self.operation, self.pair)
    }
}

/// Total cycles to push `pairs` operand pairs through one stage.
pub fn simulate_stream(pairs: u64, timing: &StageTiming) -> Result<u64, PipelineError> {
    if pairs == 0 {
        return Err(PipelineError::EmptyStream);
    }
    Ok(timing.latency_cycles() + (pairs - 1) * timing.initiation_interval())
}

/// Cycle-by-cycle schedule of a stream, ordered by cycle then unit.
pub fn trace_stream(pairs: u64, timing: &StageTiming) -> Result<Vec<TraceEvent>, PipelineError> {
    if pairs == 0 {
        return Err(PipelineError::EmptyStream);
    }
    let schedule = timing.schedule();
    let mut events: Vec<TraceEvent> = (0..pairs)
        .flat_map(|pair| {
            let start = pair * timing.initiation_interval();
            schedule.iter().map(move |&(offset, unit, operation)| TraceEvent {
                cycle: start + offset,
                unit,
                operation,
                pair,
            })
        })
        .collect();
    events.sort_by_key(|e| (e.cycle, e.unit, e.pair));
    Ok(events)
}

/// Writes a trace as `cycle,unit,operation` lines; the operation carries the
/// pair index after a colon.
pub fn write_trace<W: Write + ?Sized>(out: &mut W, events: &[TraceEvent]) -> io::Result<()> {
    writeln!(out, "cycle,unit,operation")?;
    for e in events {
        writeln!(out, "{e}")?;
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::collections::HashSet;

    #[test]
    fn latencies() {
        assert_eq!(stage_latency(true), 7);
        assert_eq!(stage_latency(false), 9);
        assert_eq!(stage_latency(false) - stage_latency(true), 2);
    }

    #[test]
    fn stream_totals() {
        assert_eq!(simulate_stream(1, &StageTiming::pipelined()), Ok(7));
        assert_eq!(simulate_stream(100, &StageTiming::pipelined()), Ok(106));
        assert_eq!(simulate_stream(100, &StageTiming::non_pipelined()), Ok(900));
        assert_eq!(
            simulate_stream(0, &StageTiming::pipelined()),
            Err(PipelineError::EmptyStream)
        );
        assert_eq!(
            StageTiming::with_initiation_interval(true, 0),
            Err(PipelineError::ZeroInitiationInterval)
        );
    }

    #[test]
    fn single_pair_pipelined_schedule() {
        let events = trace_stream(1, &StageTiming::pipelined()).unwrap();
        let by_cycle = |c: u64| -> Vec<String> {
            events
                .iter()
                .filter(|e| e.cycle == c)
                .map(|e| e.operation.to_string())
                .collect()
        };
        assert_eq!(by_cycle(1), ["decompose"]);
        assert_eq!(by_cycle(2), ["pp1"]);
        assert_eq!(by_cycle(3), ["pp2"]);
        assert_eq!(by_cycle(4), ["pp3", "adder1"]);
        assert_eq!(by_cycle(5), ["pp4", "adder2"]);
        assert_eq!(by_cycle(6), ["adder3"]);
        assert_eq!(by_cycle(7), ["align"]);
        assert_eq!(events.iter().map(|e| e.cycle).max(), Some(7));
    }

    #[test]
    fn trace_length_matches_total() {
        for timing in [StageTiming::pipelined(), StageTiming::non_pipelined()] {
            for m in [1u64, 2, 5, 37] {
                let last = trace_stream(m, &timing).unwrap().last().unwrap().cycle;
                assert_eq!(last, simulate_stream(m, &timing).unwrap());
            }
        }
    }

    #[test]
    fn no_unit_double_booked() {
        for ii in 1..=9 {
            for pipelined in [true, false] {
                let timing = StageTiming::with_initiation_interval(pipelined, ii).unwrap();
                let events = trace_stream(20, &timing).unwrap();
                let mut seen = HashSet::new();
                for e in &events {
                    assert!(seen.insert((e.cycle, e.unit)), "{e} double-booked");
                }
            }
        }
    }

    #[test]
    fn pipelined_always_faster() {
        for m in 1..200 {
            let p = simulate_stream(m, &StageTiming::pipelined()).unwrap();
            let n = simulate_stream(m, &StageTiming::non_pipelined()).unwrap();
            assert!(p < n);
        }
    }

    #[test]
    fn trace_text_format() {
        let events = trace_stream(1, &StageTiming::pipelined()).unwrap();
        let mut buf = Vec::new();
        write_trace(&mut buf, &events).unwrap();
        let text = String::from_utf8(buf).unwrap();
        let lines: Vec<&str> = text.lines().collect();
        assert_eq!(lines[0], "cycle,unit,operation");
        assert_eq!(lines[1], "1,decomposer,decompose:0");
        assert_eq!(lines[4], "4,half_kom3,pp3:0");
        assert_eq!(lines[5], "4,adder1,adder1:0");
        assert_eq!(lines.len(), 10);
    }
}
