//! The genetic-algorithm hierarchy: chromosomes, organisms, populations,
//! generational stepping, and fossilization.
//!
//! A [`Chromosome`] is a symbol sequence over an alphabet with a per-base
//! background mutation rate. An [`Organism`] carries a genome (a list of
//! chromosomes, possibly empty), a status map, and a cytoplasm — the number
//! tape its genome executes on. A [`Population`] steps its organisms through
//! generations by calling user-supplied hooks in a fixed order.

use std::collections::BTreeMap;
use std::fs;
use std::path::{Path, PathBuf};

use rand::seq::index::sample;
use rand::Rng;
use serde::{Deserialize, Serialize};
use thiserror::Error;

/// Fossil format revision written by [`freeze`] and accepted by [`revive`].
pub const FOSSIL_FORMAT_VERSION: u32 = 1;

#[derive(Debug, Error)]
pub enum GeneticsError {
    #[error("hook `{name}` failed: {message}")]
    Hook { name: &'static str, message: String },
    #[error("invalid mutation segment {start}..{end} for sequence of length {length}")]
    SegmentOutOfRange {
        start: usize,
        end: usize,
        length: usize,
    },
    #[error("fossil i/o failed for {path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
    #[error("{path} is not a readable fossil: {reason}")]
    Format { path: PathBuf, reason: String },
    #[error("fossil format version {found} is not supported (expected {expected})")]
    UnsupportedVersion { found: u32, expected: u32 },
}

/// The ten decimal digits — the default chromosome alphabet.
pub fn digit_alphabet() -> Vec<char> {
    ('0'..='9').collect()
}

/// A mutable symbol sequence with its alphabet and background mutation rate.
#[derive(Debug, Clone, PartialEq)]
pub struct Chromosome {
    pub sequence: Vec<char>,
    pub alphabet: Vec<char>,
    pub background_mutation_rate: f64,
}

/// Mutation styles understood by [`Chromosome::rmutate`].
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum MutationStyle {
    /// Substitute single symbols at random positions.
    Point,
}

impl Chromosome {
    pub fn new(sequence: Vec<char>, alphabet: Vec<char>, background_mutation_rate: f64) -> Self {
        assert!(!sequence.is_empty(), "chromosome sequence must be nonempty");
        assert!(
            sequence.iter().all(|s| alphabet.contains(s)),
            "sequence symbols must come from the alphabet"
        );
        assert!(
            (0.0..=1.0).contains(&background_mutation_rate),
            "background mutation rate must lie in [0, 1]"
        );
        Chromosome {
            sequence,
            alphabet,
            background_mutation_rate,
        }
    }

    /// A chromosome of decimal digits with the given background rate.
    pub fn from_digits(text: &str, background_mutation_rate: f64) -> Self {
        Chromosome::new(
            text.chars().collect(),
            digit_alphabet(),
            background_mutation_rate,
        )
    }

    /// Returns an independent deep copy; mutating the copy never touches
    /// the original.
    pub fn replicate(&self) -> Self {
        self.clone()
    }

    /// Random point mutation across the whole sequence.
    ///
    /// The effective rate is `background + additional`, floored at zero.
    /// Exactly [`mutation_event_count`] events run; each picks a position
    /// uniformly (with replacement) and writes a symbol drawn uniformly from
    /// the full alphabet, so an event may rewrite a symbol with itself.
    pub fn rmutate<R: Rng + ?Sized>(
        &mut self,
        style: MutationStyle,
        additional_rate: f64,
        rng: &mut R,
    ) {
        let MutationStyle::Point = style;
        let rate = effective_rate(self.background_mutation_rate, additional_rate);
        let events = mutation_event_count(rate, self.sequence.len());
        for _ in 0..events {
            let position = rng.random_range(0..self.sequence.len());
            let symbol = self.alphabet[rng.random_range(0..self.alphabet.len())];
            self.sequence[position] = symbol;
        }
    }

    /// Point mutation restricted to positions in `start..end`. The event
    /// count is still computed from the whole sequence length.
    pub fn kmutate<R: Rng + ?Sized>(
        &mut self,
        start: usize,
        end: usize,
        rate: f64,
        rng: &mut R,
    ) -> Result<(), GeneticsError> {
        if start >= end || end > self.sequence.len() {
            return Err(GeneticsError::SegmentOutOfRange {
                start,
                end,
                length: self.sequence.len(),
            });
        }
        let events = mutation_event_count(rate.max(0.0), self.sequence.len());
        for _ in 0..events {
            let position = rng.random_range(start..end);
            let symbol = self.alphabet[rng.random_range(0..self.alphabet.len())];
            self.sequence[position] = symbol;
        }
        Ok(())
    }
}

fn effective_rate(background: f64, additional: f64) -> f64 {
    (background + additional).max(0.0)
}

/// Number of mutation events for one pass: `floor(rate × length)`.
///
/// Truncation (rather than nearest-integer rounding) matters: it keeps a
/// low-rate pass on a short sequence at the same event count across nearby
/// rates, which is what makes closely spaced rates statistically
/// indistinguishable on short genomes.
pub fn mutation_event_count(rate: f64, length: usize) -> usize {
    (rate.max(0.0) * length as f64).floor() as usize
}

/// Single-point crossover: exchanges the tails of `a` and `b` at `position`.
pub fn crossover(a: &Chromosome, b: &Chromosome, position: usize) -> (Chromosome, Chromosome) {
    assert!(
        position <= a.sequence.len().min(b.sequence.len()),
        "crossover position outside both sequences"
    );
    let mut left = a.clone();
    let mut right = b.clone();
    left.sequence = a.sequence[..position]
        .iter()
        .chain(&b.sequence[position..])
        .copied()
        .collect();
    right.sequence = b.sequence[..position]
        .iter()
        .chain(&a.sequence[position..])
        .copied()
        .collect();
    (left, right)
}

/// A value in an organism's status map.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum StatusValue {
    Number(f64),
    Text(String),
    Location([usize; 3]),
}

/// A digital organism: genome, status, and working cytoplasm.
///
/// A genome is optional — an organism with no chromosomes simply computes
/// nothing during its turn.
#[derive(Debug, Clone, PartialEq)]
pub struct Organism {
    pub genome: Vec<Chromosome>,
    pub status: BTreeMap<String, StatusValue>,
    pub cytoplasm: Vec<f64>,
}

impl Organism {
    pub fn new(genome: Vec<Chromosome>, cytoplasm: Vec<f64>) -> Self {
        assert!(!cytoplasm.is_empty(), "cytoplasm must hold at least one cell");
        Organism {
            genome,
            status: BTreeMap::new(),
            cytoplasm,
        }
    }

    /// The full genome as one codon string, chromosomes concatenated in
    /// order.
    pub fn source(&self) -> String {
        self.genome
            .iter()
            .flat_map(|c| c.sequence.iter())
            .collect()
    }

    /// The cytoplasm as comma-joined decimal values in shortest
    /// round-trip form.
    pub fn get_cytoplasm(&self) -> String {
        self.cytoplasm
            .iter()
            .map(|v| v.to_string())
            .collect::<Vec<_>>()
            .join(",")
    }

    pub fn location(&self) -> Option<[usize; 3]> {
        match self.status.get("location") {
            Some(StatusValue::Location(loc)) => Some(*loc),
            _ => None,
        }
    }

    pub fn set_location(&mut self, location: [usize; 3]) {
        self.status
            .insert("location".to_string(), StatusValue::Location(location));
    }
}

/// A named group of organisms stepping through generations together.
#[derive(Debug, Clone)]
pub struct Population {
    pub name: String,
    pub agents: Vec<Organism>,
    pub generation: usize,
    pub maximum_generations: usize,
}

impl Population {
    pub fn new(name: &str, agents: Vec<Organism>, maximum_generations: usize) -> Self {
        assert!(maximum_generations > 0);
        Population {
            name: name.to_string(),
            agents,
            generation: 0,
            maximum_generations,
        }
    }
}

/// The population-level extension points invoked by [`generation_step`].
///
/// Every hook defaults to a no-op so a behavior only implements what it
/// needs. `mutation_scheme` receives the organism's index so implementations
/// can derive a per-organism random stream.
#[allow(unused_variables)]
pub trait PopulationHooks {
    /// Selection/culling before mating.
    fn prepopulation_control(&mut self, population: &mut Population) -> Result<(), String> {
        Ok(())
    }
    /// Mate choice and crossover.
    fn mating(&mut self, population: &mut Population) -> Result<(), String> {
        Ok(())
    }
    /// Selection/culling after mating.
    fn postpopulation_control(&mut self, population: &mut Population) -> Result<(), String> {
        Ok(())
    }
    /// Per-organism mutation.
    fn mutation_scheme(
        &mut self,
        organism_index: usize,
        organism: &mut Organism,
    ) -> Result<(), String> {
        Ok(())
    }
    /// Whole-population events after mutation.
    fn generation_events(&mut self, population: &mut Population) -> Result<(), String> {
        Ok(())
    }
    /// Summary of the stepped population, recorded by the simulation driver.
    fn report(&mut self, population: &Population) -> Result<String, String> {
        Ok(String::new())
    }
}

/// Hooks that do nothing; a generation step with them only increments the
/// counter.
pub struct NoopHooks;

impl PopulationHooks for NoopHooks {}

/// Advances a population by one generation and returns the report value.
///
/// Hook order: prepopulation_control, mating, postpopulation_control,
/// mutation_scheme for each organism in index order, generation_events,
/// then the generation counter increments and report runs on the result.
pub fn generation_step(
    population: &mut Population,
    hooks: &mut dyn PopulationHooks,
) -> Result<String, GeneticsError> {
    let named = |name: &'static str| move |message: String| GeneticsError::Hook { name, message };
    hooks
        .prepopulation_control(population)
        .map_err(named("prepopulation_control"))?;
    hooks.mating(population).map_err(named("mating"))?;
    hooks
        .postpopulation_control(population)
        .map_err(named("postpopulation_control"))?;
    for index in 0..population.agents.len() {
        hooks
            .mutation_scheme(index, &mut population.agents[index])
            .map_err(named("mutation_scheme"))?;
    }
    hooks
        .generation_events(population)
        .map_err(named("generation_events"))?;
    population.generation += 1;
    hooks.report(population).map_err(named("report"))
}

// ---------------------------------------------------------------------------
// Fossils
// ---------------------------------------------------------------------------

#[derive(Serialize, Deserialize)]
struct FossilFile {
    format_version: u32,
    generation: usize,
    population_name: String,
    sample_size: usize,
    organisms: Vec<FossilOrganism>,
}

#[derive(Serialize, Deserialize)]
struct FossilOrganism {
    genome: Vec<String>,
    status: BTreeMap<String, StatusValue>,
    cytoplasm: Vec<f64>,
}

/// How many organisms [`freeze`] preserves: the rounded share, but never
/// fewer than 100 (or the whole population when it is smaller than that).
pub fn fossil_sample_size(population_size: usize, ratio: f64) -> usize {
    let share = (ratio * population_size as f64).round() as usize;
    share.max(population_size.min(100))
}

/// Writes a uniform sample of the population to `<prefix>_<generation>_
/// <samplesize>.gap` and returns the path actually written.
///
/// If that file already exists, numbered variants (`<name>.1.gap`, ...) are
/// tried so nothing is overwritten.
pub fn freeze<R: Rng + ?Sized>(
    population: &Population,
    prefix: &str,
    ratio: f64,
    generation: usize,
    rng: &mut R,
) -> Result<PathBuf, GeneticsError> {
    assert!(
        ratio > 0.0 && ratio <= 1.0,
        "fossil ratio must lie in (0, 1]"
    );
    let size = fossil_sample_size(population.agents.len(), ratio);
    // Canonical organism order: ascending original index.
    let mut picked: Vec<usize> = sample(rng, population.agents.len(), size).into_vec();
    picked.sort_unstable();
    let organisms = picked
        .into_iter()
        .map(|i| {
            let organism = &population.agents[i];
            FossilOrganism {
                genome: organism
                    .genome
                    .iter()
                    .map(|c| c.sequence.iter().collect())
                    .collect(),
                status: organism.status.clone(),
                cytoplasm: organism.cytoplasm.clone(),
            }
        })
        .collect();
    let fossil = FossilFile {
        format_version: FOSSIL_FORMAT_VERSION,
        generation,
        population_name: population.name.clone(),
        sample_size: size,
        organisms,
    };
    let path = crate::fs_util::collision_free_path(&PathBuf::from(format!(
        "{prefix}_{generation}_{size}.gap"
    )));
    let text = serde_json::to_string_pretty(&fossil).expect("fossil serialization");
    fs::write(&path, text).map_err(|source| GeneticsError::Io {
        path: path.clone(),
        source,
    })?;
    Ok(path)
}

/// Reads a fossil back into organisms, in the order they were written.
///
/// The fossil format stores genomes as plain codon strings, so revived
/// chromosomes get a reconstructed alphabet (decimal digits, extended with
/// any other symbols the sequence uses) and a zero background rate.
pub fn revive(path: &Path) -> Result<Vec<Organism>, GeneticsError> {
    let text = fs::read_to_string(path).map_err(|source| GeneticsError::Io {
        path: path.to_path_buf(),
        source,
    })?;
    let fossil: FossilFile =
        serde_json::from_str(&text).map_err(|e| GeneticsError::Format {
            path: path.to_path_buf(),
            reason: e.to_string(),
        })?;
    if fossil.format_version != FOSSIL_FORMAT_VERSION {
        return Err(GeneticsError::UnsupportedVersion {
            found: fossil.format_version,
            expected: FOSSIL_FORMAT_VERSION,
        });
    }
    if fossil.sample_size != fossil.organisms.len() {
        return Err(GeneticsError::Format {
            path: path.to_path_buf(),
            reason: format!(
                "sample_size {} does not match {} organisms",
                fossil.sample_size,
                fossil.organisms.len()
            ),
        });
    }
    Ok(fossil
        .organisms
        .into_iter()
        .map(|entry| {
            let genome = entry
                .genome
                .into_iter()
                .map(|text| {
                    let sequence: Vec<char> = text.chars().collect();
                    let mut alphabet = digit_alphabet();
                    for symbol in &sequence {
                        if !alphabet.contains(symbol) {
                            alphabet.push(*symbol);
                        }
                    }
                    Chromosome::new(sequence, alphabet, 0.0)
                })
                .collect();
            Organism {
                genome,
                status: entry.status,
                cytoplasm: entry.cytoplasm,
            }
        })
        .collect())
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn rng() -> ChaCha8Rng {
        ChaCha8Rng::seed_from_u64(99)
    }

    fn zeros(n: usize) -> Chromosome {
        Chromosome::from_digits(&"0".repeat(n), 0.0)
    }

    #[test]
    fn replicate_is_a_deep_copy() {
        let original = Chromosome::from_digits("000", 0.05);
        let mut copy = original.replicate();
        assert_eq!(copy, original);
        copy.rmutate(MutationStyle::Point, 1.0, &mut rng());
        assert_eq!(original.sequence, vec!['0', '0', '0']);
        assert_eq!(copy.alphabet, original.alphabet);
    }

    #[test]
    fn event_counts_truncate() {
        assert_eq!(mutation_event_count(0.0, 60), 0);
        assert_eq!(mutation_event_count(0.1, 60), 6);
        assert_eq!(mutation_event_count(0.02, 500), 10);
        // Short sequence, closely spaced rates: 2% and 3% coincide, 4% and
        // 5% coincide one step up.
        assert_eq!(mutation_event_count(0.02, 58), 1);
        assert_eq!(mutation_event_count(0.03, 58), 1);
        assert_eq!(mutation_event_count(0.04, 58), 2);
        assert_eq!(mutation_event_count(0.05, 58), 2);
        // Negative effective rates floor at zero events.
        assert_eq!(mutation_event_count(-0.5, 100), 0);
    }

    #[test]
    fn rmutate_at_rate_zero_is_identity() {
        let mut c = zeros(50);
        c.rmutate(MutationStyle::Point, 0.0, &mut rng());
        assert_eq!(c.sequence, vec!['0'; 50]);
    }

    #[test]
    fn rmutate_applies_the_negative_additional_rate_floor() {
        let mut c = Chromosome::from_digits(&"7".repeat(40), 0.5);
        c.rmutate(MutationStyle::Point, -2.0, &mut rng());
        assert_eq!(c.sequence, vec!['7'; 40]);
    }

    #[test]
    fn rmutate_changes_about_nine_tenths_of_event_positions() {
        // 10 events over 500 digits; a fresh symbol differs from '0' nine
        // times out of ten, so ~9 changes per round. Mean over 1000 rounds
        // should sit within a few standard errors of the binomial oracle.
        let mut rng = rng();
        let trials = 1000;
        let mut total_changed = 0usize;
        for _ in 0..trials {
            let mut c = zeros(500);
            c.rmutate(MutationStyle::Point, 0.02, &mut rng);
            total_changed += c.sequence.iter().filter(|&&s| s != '0').count();
        }
        let mean = total_changed as f64 / trials as f64;
        // Expected changes ≈ 10 × 9/10 = 9 minus a tiny same-position
        // correction; σ per trial ≈ 0.95 so 3σ over 1000 trials ≈ 0.09.
        assert!((mean - 8.92).abs() < 0.12, "mean changed positions {mean}");
    }

    #[test]
    fn kmutate_touches_only_the_segment() {
        let mut rng = rng();
        for _ in 0..100 {
            let mut c = zeros(10);
            c.kmutate(0, 1, 1.0, &mut rng).unwrap();
            assert_eq!(&c.sequence[1..], &['0'; 9][..]);
        }
    }

    #[test]
    fn kmutate_validates_its_segment() {
        let mut c = zeros(10);
        assert!(matches!(
            c.kmutate(5, 5, 1.0, &mut rng()),
            Err(GeneticsError::SegmentOutOfRange { .. })
        ));
        assert!(c.kmutate(0, 11, 1.0, &mut rng()).is_err());
        assert!(c.kmutate(0, 10, 0.0, &mut rng()).is_ok());
        assert_eq!(c.sequence, vec!['0'; 10]);
    }

    #[test]
    fn kmutate_over_the_whole_sequence_behaves_like_rmutate() {
        // Same event count and position coverage: over many one-event
        // rounds on a 20-symbol sequence every index eventually mutates.
        let mut rng = rng();
        let mut touched = [false; 20];
        for _ in 0..2000 {
            let mut c = zeros(20);
            c.kmutate(0, 20, 0.05, &mut rng).unwrap(); // exactly one event
            for (i, &s) in c.sequence.iter().enumerate() {
                if s != '0' {
                    touched[i] = true;
                }
            }
        }
        assert!(touched.iter().all(|&t| t), "coverage {touched:?}");
    }

    #[test]
    fn crossover_splices_at_the_position() {
        let a = Chromosome::from_digits("0011", 0.0);
        let b = Chromosome::from_digits("1100", 0.0);
        let (x, y) = crossover(&a, &b, 2);
        assert_eq!(x.sequence.iter().collect::<String>(), "0000");
        assert_eq!(y.sequence.iter().collect::<String>(), "1111");

        let (x, y) = crossover(&a, &b, 0);
        assert_eq!(x.sequence, b.sequence);
        assert_eq!(y.sequence, a.sequence);

        let (x, y) = crossover(&a, &b, 4);
        assert_eq!(x.sequence, a.sequence);
        assert_eq!(y.sequence, b.sequence);
    }

    proptest! {
        #[test]
        fn mutation_preserves_length_and_alphabet(
            len in 1usize..200,
            background in 0.0f64..1.0,
            additional in -1.0f64..1.0,
            seed in any::<u64>(),
        ) {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let mut c = Chromosome::from_digits(&"5".repeat(len), background);
            c.rmutate(MutationStyle::Point, additional, &mut rng);
            prop_assert_eq!(c.sequence.len(), len);
            prop_assert!(c.sequence.iter().all(|s| s.is_ascii_digit()));
        }

        #[test]
        fn crossover_preserves_columns(
            a in "[0-9]{1,40}",
            b in "[0-9]{1,40}",
            cut in 0usize..41,
        ) {
            let cut = cut % (a.len().min(b.len()) + 1);
            let ca = Chromosome::from_digits(&a, 0.0);
            let cb = Chromosome::from_digits(&b, 0.0);
            let (x, y) = crossover(&ca, &cb, cut);
            for i in 0..a.len().min(b.len()) {
                let mut before = [ca.sequence[i], cb.sequence[i]];
                let mut after = [x.sequence[i], y.sequence[i]];
                before.sort_unstable();
                after.sort_unstable();
                prop_assert_eq!(before, after, "column {}", i);
            }
        }
    }

    struct RecordingHooks {
        calls: Vec<String>,
    }

    impl PopulationHooks for RecordingHooks {
        fn prepopulation_control(&mut self, _: &mut Population) -> Result<(), String> {
            self.calls.push("prepopulation_control".into());
            Ok(())
        }
        fn mating(&mut self, _: &mut Population) -> Result<(), String> {
            self.calls.push("mating".into());
            Ok(())
        }
        fn postpopulation_control(&mut self, _: &mut Population) -> Result<(), String> {
            self.calls.push("postpopulation_control".into());
            Ok(())
        }
        fn mutation_scheme(&mut self, index: usize, _: &mut Organism) -> Result<(), String> {
            self.calls.push(format!("mutation_scheme[{index}]"));
            Ok(())
        }
        fn generation_events(&mut self, _: &mut Population) -> Result<(), String> {
            self.calls.push("generation_events".into());
            Ok(())
        }
        fn report(&mut self, population: &Population) -> Result<String, String> {
            self.calls.push("report".into());
            Ok(format!("generation {}", population.generation))
        }
    }

    fn small_population(n: usize) -> Population {
        let agents = (0..n)
            .map(|_| Organism::new(vec![zeros(6)], vec![0.0; 4]))
            .collect();
        Population::new("test", agents, 100)
    }

    #[test]
    fn generation_step_runs_hooks_in_order() {
        let mut population = small_population(2);
        let mut hooks = RecordingHooks { calls: Vec::new() };
        let report = generation_step(&mut population, &mut hooks).unwrap();
        assert_eq!(
            hooks.calls,
            vec![
                "prepopulation_control",
                "mating",
                "postpopulation_control",
                "mutation_scheme[0]",
                "mutation_scheme[1]",
                "generation_events",
                "report"
            ]
        );
        // The counter increments before the report runs.
        assert_eq!(report, "generation 1");
        assert_eq!(population.generation, 1);
    }

    #[test]
    fn noop_step_is_a_pure_counter_increment() {
        let mut population = small_population(3);
        let before = population.agents.clone();
        let report = generation_step(&mut population, &mut NoopHooks).unwrap();
        assert_eq!(population.generation, 1);
        assert_eq!(population.agents, before);
        assert_eq!(report, "");
    }

    #[test]
    fn hook_errors_carry_the_hook_name() {
        struct Failing;
        impl PopulationHooks for Failing {
            fn mating(&mut self, _: &mut Population) -> Result<(), String> {
                Err("no partners".into())
            }
        }
        let mut population = small_population(1);
        let err = generation_step(&mut population, &mut Failing).unwrap_err();
        assert_eq!(
            err.to_string(),
            "hook `mating` failed: no partners"
        );
        // The step aborted before the counter moved.
        assert_eq!(population.generation, 0);
    }

    #[test]
    fn mutation_over_a_single_symbol_alphabet_changes_nothing() {
        struct MutateAll;
        impl PopulationHooks for MutateAll {
            fn mutation_scheme(&mut self, i: usize, o: &mut Organism) -> Result<(), String> {
                let mut rng = ChaCha8Rng::seed_from_u64(i as u64);
                for c in &mut o.genome {
                    c.rmutate(MutationStyle::Point, 1.0, &mut rng);
                }
                Ok(())
            }
        }
        let agents = vec![Organism::new(
            vec![Chromosome::new(vec!['x'; 8], vec!['x'], 0.0)],
            vec![0.0],
        )];
        let mut population = Population::new("mono", agents, 10);
        generation_step(&mut population, &mut MutateAll).unwrap();
        assert_eq!(population.agents[0].genome[0].sequence, vec!['x'; 8]);
    }

    #[test]
    fn fossil_sample_sizes() {
        assert_eq!(fossil_sample_size(100, 0.01), 100);
        assert_eq!(fossil_sample_size(1000, 0.5), 500);
        assert_eq!(fossil_sample_size(1000, 1.0), 1000);
        assert_eq!(fossil_sample_size(50, 0.5), 50);
        assert_eq!(fossil_sample_size(150, 0.1), 100);
        assert_eq!(fossil_sample_size(1000, 0.01), 100);
    }

    #[test]
    fn freeze_then_revive_round_trips() {
        let dir = tempfile::tempdir().unwrap();
        let prefix = dir.path().join("pop_01").to_string_lossy().into_owned();
        let mut population = small_population(20);
        population.agents[3].set_location([1, 2, 3]);
        population.agents[3]
            .status
            .insert("vitality".into(), StatusValue::Number(0.5));
        population.agents[5].genome.clear(); // genome-free organisms persist too
        population.agents[7].cytoplasm = vec![0.25, -3.5, 1e-9];

        let path = freeze(&mut population, &prefix, 1.0, 7, &mut rng()).unwrap();
        assert!(path.ends_with("pop_01_7_20.gap"));
        let revived = revive(&path).unwrap();
        assert_eq!(revived.len(), 20);
        for (got, want) in revived.iter().zip(&population.agents) {
            let got_genome: Vec<String> =
                got.genome.iter().map(|c| c.sequence.iter().collect()).collect();
            let want_genome: Vec<String> =
                want.genome.iter().map(|c| c.sequence.iter().collect()).collect();
            assert_eq!(got_genome, want_genome);
            assert_eq!(got.status, want.status);
            assert_eq!(got.cytoplasm, want.cytoplasm);
        }
    }

    #[test]
    fn refreezing_a_revived_sample_is_byte_stable() {
        let dir = tempfile::tempdir().unwrap();
        let prefix_a = dir.path().join("a").to_string_lossy().into_owned();
        let prefix_b = dir.path().join("b").to_string_lossy().into_owned();
        let mut population = small_population(12);
        population.agents[2].set_location([4, 0, 1]);
        let first = freeze(&mut population, &prefix_a, 1.0, 3, &mut rng()).unwrap();

        let mut population_b = Population::new("test", revive(&first).unwrap(), 100);
        let second = freeze(&mut population_b, &prefix_b, 1.0, 3, &mut rng()).unwrap();
        assert_eq!(
            fs::read_to_string(&first).unwrap(),
            fs::read_to_string(&second).unwrap()
        );
    }

    #[test]
    fn freeze_avoids_overwriting() {
        let dir = tempfile::tempdir().unwrap();
        let prefix = dir.path().join("pop").to_string_lossy().into_owned();
        let population = small_population(5);
        let first = freeze(&population, &prefix, 1.0, 1, &mut rng()).unwrap();
        let second = freeze(&population, &prefix, 1.0, 1, &mut rng()).unwrap();
        assert_ne!(first, second);
        assert!(second.to_string_lossy().ends_with("pop_1_5.1.gap"));
        assert!(first.exists() && second.exists());
    }

    #[test]
    fn revive_rejects_foreign_files() {
        let dir = tempfile::tempdir().unwrap();
        let bad = dir.path().join("x.gap");
        fs::write(&bad, "not json").unwrap();
        assert!(matches!(
            revive(&bad),
            Err(GeneticsError::Format { .. })
        ));
        fs::write(
            &bad,
            r#"{"format_version":9,"generation":0,"population_name":"p","sample_size":0,"organisms":[]}"#,
        )
        .unwrap();
        assert!(matches!(
            revive(&bad),
            Err(GeneticsError::UnsupportedVersion { found: 9, .. })
        ));
    }

    #[test]
    fn cytoplasm_renders_in_shortest_round_trip_form() {
        let mut organism = Organism::new(vec![], vec![0.0, 0.5, -1.25]);
        assert_eq!(organism.get_cytoplasm(), "0,0.5,-1.25");
        organism.cytoplasm = vec![3.0, 0.1];
        assert_eq!(organism.get_cytoplasm(), "3,0.1");
    }

    #[test]
    fn organism_source_concatenates_chromosomes() {
        let organism = Organism::new(
            vec![
                Chromosome::from_digits("000", 0.0),
                Chromosome::from_digits("008", 0.0),
            ],
            vec![0.0],
        );
        assert_eq!(organism.source(), "000008");
        assert_eq!(Organism::new(vec![], vec![0.0]).source(), "");
    }
}
