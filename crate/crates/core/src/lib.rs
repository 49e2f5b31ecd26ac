//! General monotone sequence classes and uniform convergence of
//! trigonometric series.
//!
//! * [`sequences`]: coefficient families, finite differences, JSON descriptors.
//! * [`classes`]: majorants β₁, β₂, β₃ and numerical membership profiles.
//! * [`kernels`]: Dirichlet-type kernels with step `r` and summation by parts.
//! * [`convergence`]: partial sums, uniform tail probes and related checks.
//! * [`cli`]: the `gm-series` command line.

pub mod classes;
pub mod cli;
pub mod convergence;
pub mod grid;
pub mod kernels;
pub mod report;
pub mod sequences;
