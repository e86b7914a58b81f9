//! Digital organism simulation engine.
//!
//! The crate implements a deterministic artificial-life stack from the
//! instruction set up:
//!
//! - [`isa`]: the Ragaraja 3-digit-codon instruction set, its versions, and
//!   the NucleotideBF transliteration.
//! - [`vm`]: the register machine that executes a genome against a cytoplasm
//!   tape under an execution budget, with trap semantics.
//! - [`genetics`]: chromosomes, organisms, and populations, with point
//!   mutation, crossover, generational stepping, and fossilization.
//! - [`world`]: the 3-D grid of ecological cells with burial/excavation.
//! - [`engine`]: simulation configuration, the 13-hook behavior contract,
//!   deterministic stream derivation, and the generation driver.
//! - [`analysis`]: Hamming-distance divergence series, cytoplasmic means,
//!   and Pearson correlation over run outputs.
//! - [`conformance`]: the per-opcode conformance suite used by
//!   `dose validate-isa` and the test suite.

pub mod analysis;
pub mod cli;
pub mod conformance;
pub mod engine;
mod fs_util;
pub mod genetics;
pub mod isa;
pub mod vm;
pub mod world;
