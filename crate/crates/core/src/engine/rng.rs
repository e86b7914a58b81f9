//! Derivation of independent, reproducible random streams.
//!
//! Every consumer of randomness — a genome execution, a mutation pass, a
//! fossil sample, a hook — receives its own generator keyed by where and
//! when it runs. Two consequences: a run is fully determined by the seed,
//! and the result cannot depend on the order in which organisms are
//! evaluated, so any parallel schedule produces the same output.

use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;

/// What a derived stream will be used for.
///
/// The purpose is part of the stream key, so the same organism drawing
/// randomness for its genome execution and for its mutation pass gets two
/// unrelated sequences.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum StreamPurpose {
    /// Genome execution (the random-choice codons 050–060).
    VmExecution,
    /// A chromosome mutation pass.
    Mutation,
    /// Choosing which organisms a fossil preserves.
    FossilSampling,
    /// Population-level hooks; the organism slot carries the hook ordinal.
    PopulationHook,
    /// World-level hooks; the population slot is [`WORLD_SCOPE`].
    WorldHook,
}

impl StreamPurpose {
    fn tag(self) -> u8 {
        match self {
            StreamPurpose::VmExecution => 1,
            StreamPurpose::Mutation => 2,
            StreamPurpose::FossilSampling => 3,
            StreamPurpose::PopulationHook => 4,
            StreamPurpose::WorldHook => 5,
        }
    }
}

/// Population slot used when a stream belongs to the world rather than to
/// any population.
pub const WORLD_SCOPE: u32 = u32::MAX;

/// Returns the generator for one `(seed, generation, population, organism,
/// purpose)` coordinate.
///
/// Each tuple field is copied verbatim into its own byte range of the
/// 32-byte cipher key, so distinct tuples give distinct keys — collision
/// freedom holds by construction, not probabilistically.
pub fn derive_stream(
    seed: u64,
    generation: u64,
    population_index: u32,
    organism_index: u32,
    purpose: StreamPurpose,
) -> ChaCha8Rng {
    let mut key = [0u8; 32];
    key[0..8].copy_from_slice(&seed.to_le_bytes());
    key[8..16].copy_from_slice(&generation.to_le_bytes());
    key[16..20].copy_from_slice(&population_index.to_le_bytes());
    key[20..24].copy_from_slice(&organism_index.to_le_bytes());
    key[24] = purpose.tag();
    ChaCha8Rng::from_seed(key)
}
