//! Bit-exact models of Mitchell's logarithmic multiplier and of an error-free
//! recursive multiplier built from it.
//!
//! The 2×2 Mitchell multiplier is wrong for exactly one input, `3 × 3`, which
//! it returns as 8. Adding a one-bit correction term for that case makes the
//! leaf exact, and a radix-2 Karatsuba-Ofman recursion over exact leaves gives
//! an exact multiplier of any power-of-two width ("REFMLM").
//!
//! Modules:
//!
//! * [`arith`]: fixed-width words, logarithm decomposition, Mitchell and
//!   error-free 2×2 multiplication.
//! * [`kom`]: the recursive multiplier and [`MultiplierConfig`].
//! * [`pipeline`]: cycle counts and traces of one KOM stage.
//! * [`analysis`]: exhaustive and sampled error statistics and reports.
//! * [`imaging`]: PGM I/O, salt-and-pepper noise, 3×3 Gaussian smoothing
//!   through a chosen multiplier, MSE and PSNR.
//! * [`cli`]: the `refmlm` command-line driver.

pub mod analysis;
pub mod arith;
pub mod cli;
pub mod imaging;
pub mod kom;
pub mod pipeline;
pub mod rng;

pub use analysis::{analyze_exhaustive, analyze_sampled, error_rate, Convention, ErrorStats};
pub use arith::{efmlm2_multiply, leading_one, log_decompose, mitchell_multiply, UWord};
pub use kom::{decompose_operand, kom_multiply, KomVariant, Model, MultiplierConfig};
