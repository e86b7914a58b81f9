//! The generation loop and the files it writes.
//!
//! One run: build the world and the populations, append a parameter header
//! to every result file, then per generation (1) regulate the whole world,
//! (2) update every cell's ecology and local conditions, (3) execute every
//! organism's genome against its cytoplasm, (4) step every population and
//! write fossils and report records on their schedules, (5) move and settle
//! organisms cell by cell and take the world report, (6) bury the ecosystem
//! on its schedule.

use std::collections::BTreeMap;
use std::fmt;
use std::fs::OpenOptions;
use std::io::{self, Write};
use std::path::{Path, PathBuf};

use chrono::{DateTime, SecondsFormat, Utc};
use thiserror::Error;

use crate::engine::behavior::Behavior;
use crate::engine::config::{instruction_table, ConfigError, SimulationConfig};
use crate::engine::rng::{derive_stream, StreamPurpose, WORLD_SCOPE};
use crate::genetics::{self, Chromosome, Organism, Population, PopulationHooks};
use crate::isa::OpcodeTable;
use crate::vm;
use crate::world::{self, World};

// ---------------------------------------------------------------------------
// Clocks
// ---------------------------------------------------------------------------

/// Source of timestamps. Injectable so tests and reproducibility checks can
/// pin every instant a run records.
pub trait Clock {
    fn now(&self) -> DateTime<Utc>;
}

/// Wall-clock UTC.
#[derive(Debug, Clone, Copy, Default)]
pub struct SystemClock;

impl Clock for SystemClock {
    fn now(&self) -> DateTime<Utc> {
        Utc::now()
    }
}

/// Always the same instant, making rerun output byte-identical.
#[derive(Debug, Clone, Copy)]
pub struct FixedClock(pub DateTime<Utc>);

impl FixedClock {
    /// Parses an ISO-8601 / RFC 3339 instant like `2012-09-13T00:00:00Z`.
    pub fn parse(text: &str) -> Result<Self, chrono::ParseError> {
        Ok(FixedClock(
            DateTime::parse_from_rfc3339(text)?.with_timezone(&Utc),
        ))
    }
}

impl Clock for FixedClock {
    fn now(&self) -> DateTime<Utc> {
        self.0
    }
}

fn stamp(clock: &dyn Clock) -> String {
    clock
        .now()
        .to_rfc3339_opts(SecondsFormat::Micros, true)
}

// ---------------------------------------------------------------------------
// Errors and artifacts
// ---------------------------------------------------------------------------

/// Where in the generation loop a failure happened.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Phase {
    Setup,
    Header,
    Ecoregulate,
    CellUpdate,
    GenomeExecution,
    PopulationStep,
    Fossilization,
    Record,
    Movement,
    WorldReport,
    EcoBurial,
}

impl fmt::Display for Phase {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Phase::Setup => "setup",
            Phase::Header => "result header",
            Phase::Ecoregulate => "ecoregulate",
            Phase::CellUpdate => "cell update",
            Phase::GenomeExecution => "genome execution",
            Phase::PopulationStep => "population step",
            Phase::Fossilization => "fossilization",
            Phase::Record => "record",
            Phase::Movement => "movement",
            Phase::WorldReport => "world report",
            Phase::EcoBurial => "ecosystem burial",
        })
    }
}

#[derive(Debug, Error)]
pub enum RunError {
    /// A pre-flight failure that is really a configuration problem, such as
    /// an unreadable instruction toggle file.
    #[error(transparent)]
    Config(#[from] ConfigError),
    /// The run stopped mid-flight; `generation` and `phase` say where.
    #[error("generation {generation}, during {phase}: {message}")]
    Abort {
        generation: usize,
        phase: Phase,
        message: String,
    },
}

/// Everything a finished run leaves behind.
#[derive(Debug)]
pub struct RunArtifacts {
    /// Result files written to, in population order, deduplicated.
    pub result_files: Vec<PathBuf>,
    /// Fossil files in the order written.
    pub fossil_files: Vec<PathBuf>,
    /// Ecosystem snapshots in the order written.
    pub eco_files: Vec<PathBuf>,
    /// Generations actually completed.
    pub generations: usize,
    /// Final population states, in `population_names` order.
    pub populations: Vec<Population>,
    /// Final world state.
    pub world: World,
}

// ---------------------------------------------------------------------------
// Result-file header
// ---------------------------------------------------------------------------

fn py_quote(text: &str) -> String {
    format!("'{}'", text.replace('\\', "\\\\").replace('\'', "\\'"))
}

fn py_text_list<I>(items: I) -> String
where
    I: IntoIterator,
    I::Item: AsRef<str>,
{
    let quoted: Vec<String> = items.into_iter().map(|s| py_quote(s.as_ref())).collect();
    format!("[{}]", quoted.join(", "))
}

fn py_char_list(symbols: &[char]) -> String {
    py_text_list(symbols.iter().map(|c| c.to_string()))
}

fn py_locations(locations: &[[usize; 3]]) -> String {
    let tuples: Vec<String> = locations
        .iter()
        .map(|[x, y, z]| format!("({x}, {y}, {z})"))
        .collect();
    format!("[{}]", tuples.join(", "))
}

fn py_dict(map: &BTreeMap<String, String>) -> String {
    let entries: Vec<String> = map
        .iter()
        .map(|(k, v)| format!("{}: {}", py_quote(k), py_quote(v)))
        .collect();
    format!("{{{}}}", entries.join(", "))
}

/// Appends the run banner and the full parameter echo block to a result
/// file: the `STARTING SIMULATION` timestamp line, then one `key = value`
/// line per parameter, ending with the enabled instruction set.
pub fn write_result_header(
    config: &SimulationConfig,
    table: &OpcodeTable,
    timestamp: &str,
    file: &mut dyn Write,
) -> io::Result<()> {
    writeln!(file, "STARTING SIMULATION - {timestamp}")?;
    writeln!(file, "DOSE parameters:")?;
    writeln!(
        file,
        "initial_chromosome = {}",
        py_char_list(&config.initial_chromosome)
    )?;
    writeln!(file, "chromosome_size = {}", config.initial_chromosome.len())?;
    writeln!(file, "cytoplasm_size = {}", config.cytoplasm_size)?;
    writeln!(file, "population_size = {}", config.population_size)?;
    writeln!(
        file,
        "population_names = {}",
        py_text_list(&config.population_names)
    )?;
    writeln!(file, "world_x = {}", config.world_x)?;
    writeln!(file, "world_y = {}", config.world_y)?;
    writeln!(file, "world_z = {}", config.world_z)?;
    writeln!(
        file,
        "population_locations = {}",
        py_locations(&config.population_locations)
    )?;
    writeln!(
        file,
        "background_mutation_rate = {}",
        config.background_mutation_rate
    )?;
    writeln!(
        file,
        "additional_mutation_rate = {}",
        config.additional_mutation_rate
    )?;
    writeln!(file, "maximum_generations = {}", config.maximum_generations)?;
    writeln!(file, "fossilized_ratio = {}", config.fossilized_ratio)?;
    writeln!(
        file,
        "fossilized_frequency = {}",
        config.fossilized_frequency
    )?;
    writeln!(file, "fossil_files = {}", py_dict(&config.fossil_files))?;
    writeln!(file, "print_frequency = {}", config.print_frequency)?;
    writeln!(file, "result_files = {}", py_dict(&config.result_files))?;
    writeln!(file, "ragaraja_version = {}", config.ragaraja_version)?;
    writeln!(
        file,
        "instruction_set = {}",
        py_text_list(
            table
                .enabled_codons()
                .iter()
                .map(|codon| format!("{codon:03}"))
        )
    )?;
    Ok(())
}

// ---------------------------------------------------------------------------
// Population hook adapter
// ---------------------------------------------------------------------------

/// Bridges a [`Behavior`] into the genetics generation step, deriving a
/// fresh random stream per call so hook randomness is reproducible. The
/// organism slot of population-wide hooks carries the hook ordinal.
struct HookAdapter<'a> {
    behavior: &'a dyn Behavior,
    seed: u64,
    generation: u64,
    population_index: u32,
}

impl HookAdapter<'_> {
    fn hook_rng(&self, ordinal: u32) -> rand_chacha::ChaCha8Rng {
        derive_stream(
            self.seed,
            self.generation,
            self.population_index,
            ordinal,
            StreamPurpose::PopulationHook,
        )
    }
}

impl PopulationHooks for HookAdapter<'_> {
    fn prepopulation_control(&mut self, population: &mut Population) -> Result<(), String> {
        self.behavior
            .prepopulation_control(population, &mut self.hook_rng(0))
    }

    fn mating(&mut self, population: &mut Population) -> Result<(), String> {
        self.behavior.mating(population, &mut self.hook_rng(1))
    }

    fn postpopulation_control(&mut self, population: &mut Population) -> Result<(), String> {
        self.behavior
            .postpopulation_control(population, &mut self.hook_rng(2))
    }

    fn mutation_scheme(
        &mut self,
        organism_index: usize,
        organism: &mut Organism,
    ) -> Result<(), String> {
        let mut rng = derive_stream(
            self.seed,
            self.generation,
            self.population_index,
            organism_index as u32,
            StreamPurpose::Mutation,
        );
        self.behavior.mutation_scheme(organism, &mut rng)
    }

    fn generation_events(&mut self, population: &mut Population) -> Result<(), String> {
        self.behavior
            .generation_events(population, &mut self.hook_rng(3))
    }

    fn report(&mut self, population: &Population) -> Result<String, String> {
        self.behavior.report(population)
    }
}

// ---------------------------------------------------------------------------
// The run
// ---------------------------------------------------------------------------

fn result_path(out_dir: &Path, prefix: &str) -> PathBuf {
    out_dir.join(format!("{prefix}.result.txt"))
}

fn append(path: &Path, text: &str) -> io::Result<()> {
    let mut file = OpenOptions::new().create(true).append(true).open(path)?;
    file.write_all(text.as_bytes())
}

/// Decimal digits plus any further symbols the ancestor uses, in first
/// appearance order.
fn ancestor_alphabet(sequence: &[char]) -> Vec<char> {
    let mut alphabet = genetics::digit_alphabet();
    for &symbol in sequence {
        if !alphabet.contains(&symbol) {
            alphabet.push(symbol);
        }
    }
    alphabet
}

/// Runs a configured simulation to completion.
///
/// Files go under `out_dir`; existing fossil and ecosystem snapshots are
/// never overwritten (collisions get numbered names), and result files are
/// appended to. `on_record` fires once per written report record with
/// `(generation, population name, payload)` — the driver itself prints
/// nothing.
pub fn run_simulation(
    config: &SimulationConfig,
    behavior: &dyn Behavior,
    clock: &dyn Clock,
    out_dir: &Path,
    mut on_record: impl FnMut(usize, &str, &str),
) -> Result<RunArtifacts, RunError> {
    let table = instruction_table(config)?;
    let abort = |generation: usize, phase: Phase, message: String| RunError::Abort {
        generation,
        phase,
        message,
    };

    let mut world = World::new(config.world_x, config.world_y, config.world_z)
        .map_err(|e| abort(0, Phase::Setup, e.to_string()))?;
    let ancestor = Chromosome::new(
        config.initial_chromosome.clone(),
        ancestor_alphabet(&config.initial_chromosome),
        config.background_mutation_rate,
    );
    let mut populations: Vec<Population> = Vec::with_capacity(config.population_names.len());
    for (name, &location) in config
        .population_names
        .iter()
        .zip(&config.population_locations)
    {
        let mut agents = Vec::with_capacity(config.population_size);
        for _ in 0..config.population_size {
            let mut organism = Organism::new(
                vec![ancestor.replicate()],
                vec![0.0; config.cytoplasm_size],
            );
            organism.set_location(location);
            agents.push(organism);
        }
        world
            .cell_mut(location)
            .expect("config validated the location")
            .organisms = agents.len();
        populations.push(Population {
            name: name.clone(),
            agents,
            generation: 0,
            maximum_generations: config.maximum_generations,
        });
    }

    let mut result_files: Vec<PathBuf> = Vec::new();
    let mut fossil_files: Vec<PathBuf> = Vec::new();
    let mut eco_files: Vec<PathBuf> = Vec::new();

    let header_stamp = stamp(clock);
    for name in &config.population_names {
        let path = result_path(out_dir, &config.result_files[name]);
        let io_abort = |e: io::Error| abort(0, Phase::Header, format!("{}: {e}", path.display()));
        let mut file = OpenOptions::new()
            .create(true)
            .append(true)
            .open(&path)
            .map_err(io_abort)?;
        write_result_header(config, &table, &header_stamp, &mut file).map_err(io_abort)?;
        if !result_files.contains(&path) {
            result_files.push(path);
        }
    }

    let coordinates: Vec<[usize; 3]> = world.coordinates().collect();
    let seed = config.rng_seed;

    for generation in 1..=config.maximum_generations {
        let gen64 = generation as u64;

        // (1) Whole-world regulation.
        let mut rng = derive_stream(seed, gen64, WORLD_SCOPE, 0, StreamPurpose::WorldHook);
        behavior
            .ecoregulate(&mut world, &mut rng)
            .map_err(|m| abort(generation, Phase::Ecoregulate, m))?;

        // (2) Per-cell ecology and local updates.
        let mut ecology_rng = derive_stream(seed, gen64, WORLD_SCOPE, 1, StreamPurpose::WorldHook);
        let mut local_rng = derive_stream(seed, gen64, WORLD_SCOPE, 2, StreamPurpose::WorldHook);
        for &coordinate in &coordinates {
            behavior
                .update_ecology(&mut world, coordinate, &mut ecology_rng)
                .map_err(|m| abort(generation, Phase::CellUpdate, m))?;
            behavior
                .update_local(&mut world, coordinate, &mut local_rng)
                .map_err(|m| abort(generation, Phase::CellUpdate, m))?;
        }

        // (3) Genome execution. Each stream is keyed by (generation,
        // population, organism), so any evaluation order gives the same run.
        for (population_index, population) in populations.iter_mut().enumerate() {
            for (organism_index, organism) in population.agents.iter_mut().enumerate() {
                if organism.genome.is_empty() {
                    continue;
                }
                let location = organism.location().ok_or_else(|| {
                    abort(
                        generation,
                        Phase::GenomeExecution,
                        format!(
                            "organism {organism_index} in {:?} has no location",
                            population.name
                        ),
                    )
                })?;
                let cell = world
                    .cell(location)
                    .map_err(|e| abort(generation, Phase::GenomeExecution, e.to_string()))?;
                let tape = if config.clean_cytoplasm {
                    vec![0.0; config.cytoplasm_size]
                } else {
                    organism.cytoplasm.clone()
                };
                if tape.is_empty() || tape.len() > config.max_cytoplasm_size {
                    return Err(abort(
                        generation,
                        Phase::GenomeExecution,
                        format!(
                            "organism {organism_index} in {:?} has a cytoplasm of {} cells; \
                             executable sizes are 1..={}",
                            population.name,
                            tape.len(),
                            config.max_cytoplasm_size
                        ),
                    ));
                }
                let input = cell.local_input.clone();
                let mut rng = derive_stream(
                    seed,
                    gen64,
                    population_index as u32,
                    organism_index as u32,
                    StreamPurpose::VmExecution,
                );
                let finished = vm::interpret(
                    &organism.source(),
                    &table,
                    input,
                    tape,
                    config.max_cytoplasm_size,
                    config.max_codon,
                    &mut rng,
                );
                organism.cytoplasm = finished.tape;
                let cell = world.cell_mut(location).expect("checked above");
                cell.temporary_input = finished.input;
                cell.temporary_output = finished.output;
            }
        }

        // (4) Population stepping, fossils, and report records.
        for (population_index, population) in populations.iter_mut().enumerate() {
            let mut hooks = HookAdapter {
                behavior,
                seed,
                generation: gen64,
                population_index: population_index as u32,
            };
            let report = genetics::generation_step(population, &mut hooks)
                .map_err(|e| abort(generation, Phase::PopulationStep, e.to_string()))?;
            if generation % config.fossilized_frequency == 0 {
                let prefix = out_dir
                    .join(&config.fossil_files[&population.name])
                    .to_string_lossy()
                    .into_owned();
                let mut rng = derive_stream(
                    seed,
                    gen64,
                    population_index as u32,
                    0,
                    StreamPurpose::FossilSampling,
                );
                let path = genetics::freeze(
                    population,
                    &prefix,
                    config.fossilized_ratio,
                    generation,
                    &mut rng,
                )
                .map_err(|e| abort(generation, Phase::Fossilization, e.to_string()))?;
                fossil_files.push(path);
            }
            if generation % config.print_frequency == 0 {
                let path = result_path(out_dir, &config.result_files[&population.name]);
                let record = format!("{}\t{}\t{}\n", stamp(clock), generation, report);
                append(&path, &record).map_err(|e| {
                    abort(generation, Phase::Record, format!("{}: {e}", path.display()))
                })?;
                on_record(generation, &population.name, &report);
            }
        }

        // (5) Movement and relocation cell by cell, then one world report.
        let mut movement_rng = derive_stream(seed, gen64, WORLD_SCOPE, 3, StreamPurpose::WorldHook);
        let mut location_rng = derive_stream(seed, gen64, WORLD_SCOPE, 4, StreamPurpose::WorldHook);
        for &coordinate in &coordinates {
            behavior
                .organism_movement(&mut world, coordinate, &mut movement_rng)
                .map_err(|m| abort(generation, Phase::Movement, m))?;
            behavior
                .organism_location(&mut world, coordinate, &mut location_rng)
                .map_err(|m| abort(generation, Phase::Movement, m))?;
        }
        behavior
            .report_world(&world)
            .map_err(|m| abort(generation, Phase::WorldReport, m))?;

        // (6) Ecosystem burial.
        if generation % config.eco_buried_frequency == 0 {
            let path = out_dir.join(format!("{}_{}.eco", config.eco_burial_file, generation));
            let written = world::eco_burial(&world, &path)
                .map_err(|e| abort(generation, Phase::EcoBurial, e.to_string()))?;
            eco_files.push(written);
        }
    }

    Ok(RunArtifacts {
        result_files,
        fossil_files,
        eco_files,
        generations: config.maximum_generations,
        populations,
        world,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::engine::behavior::NoopBehavior;
    use crate::engine::config::load_config;
    use crate::isa::RagarajaVersion;
    use std::cell::RefCell;
    use std::fs;

    fn fixed_clock() -> FixedClock {
        FixedClock::parse("2012-09-13T00:00:00Z").unwrap()
    }

    fn map(pairs: &[(&str, &str)]) -> BTreeMap<String, String> {
        pairs
            .iter()
            .map(|(k, v)| (k.to_string(), v.to_string()))
            .collect()
    }

    /// Two tiny populations on a 2-cell world; fast to run for hundreds of
    /// generations.
    fn tiny_config() -> SimulationConfig {
        SimulationConfig {
            initial_chromosome: "000000".chars().collect(),
            background_mutation_rate: 0.5,
            additional_mutation_rate: 0.0,
            cytoplasm_size: 5,
            max_cytoplasm_size: 20,
            max_codon: 50,
            clean_cytoplasm: true,
            population_names: vec!["alpha".to_string(), "beta".to_string()],
            population_size: 3,
            world_x: 2,
            world_y: 1,
            world_z: 1,
            population_locations: vec![[0, 0, 0], [1, 0, 0]],
            maximum_generations: 10,
            fossilized_frequency: 5,
            fossilized_ratio: 0.5,
            fossil_files: map(&[("alpha", "alpha"), ("beta", "beta")]),
            print_frequency: 2,
            result_files: map(&[("alpha", "alpha"), ("beta", "beta")]),
            ragaraja_version: RagarajaVersion::NucleotideSubset,
            user_defined_instructions: "unused.txt".to_string(),
            eco_buried_frequency: 10,
            eco_burial_file: "eco".to_string(),
            rng_seed: 7,
        }
    }

    fn run_here(
        config: &SimulationConfig,
        behavior: &dyn Behavior,
        dir: &Path,
    ) -> Result<RunArtifacts, RunError> {
        run_simulation(config, behavior, &fixed_clock(), dir, |_, _, _| {})
    }

    #[test]
    fn header_echo_matches_the_documented_block() {
        let config = load_config(&crate::engine::config::tests::stock_text()).unwrap();
        let table = instruction_table(&config).unwrap();
        let mut buffer = Vec::new();
        write_result_header(&config, &table, "2012-09-13T00:00:00.000000Z", &mut buffer).unwrap();
        let text = String::from_utf8(buffer).unwrap();

        let zeros = vec!["'0'"; 58].join(", ");
        let nbf = "['000', '004', '008', '011', '020', '050', '051', '052', '053', '054', \
                   '055', '056', '057', '058', '059', '060']";
        let expected = format!(
            "STARTING SIMULATION - 2012-09-13T00:00:00.000000Z\n\
             DOSE parameters:\n\
             initial_chromosome = [{zeros}]\n\
             chromosome_size = 58\n\
             cytoplasm_size = 50\n\
             population_size = 100\n\
             population_names = ['pop1', 'pop2']\n\
             world_x = 5\n\
             world_y = 5\n\
             world_z = 5\n\
             population_locations = [(0, 0, 0), (4, 4, 4)]\n\
             background_mutation_rate = 0.1\n\
             additional_mutation_rate = 0\n\
             maximum_generations = 500\n\
             fossilized_ratio = 0.01\n\
             fossilized_frequency = 100\n\
             fossil_files = {{'pop1': 'pop1', 'pop2': 'pop2'}}\n\
             print_frequency = 10\n\
             result_files = {{'pop1': 'pop1', 'pop2': 'pop2'}}\n\
             ragaraja_version = 0.1\n\
             instruction_set = {nbf}\n"
        );
        assert_eq!(text, expected);
    }

    #[test]
    fn zero_generations_writes_the_header_and_no_records() {
        let dir = tempfile::tempdir().unwrap();
        let mut config = tiny_config();
        config.maximum_generations = 0;
        let artifacts = run_here(&config, &NoopBehavior, dir.path()).unwrap();
        assert_eq!(artifacts.generations, 0);
        assert!(artifacts.fossil_files.is_empty());
        assert!(artifacts.eco_files.is_empty());
        for path in &artifacts.result_files {
            let text = fs::read_to_string(path).unwrap();
            assert!(text.starts_with("STARTING SIMULATION - "));
            assert_eq!(text.lines().filter(|l| l.contains('\t')).count(), 0);
        }
    }

    #[test]
    fn records_follow_the_print_schedule() {
        let dir = tempfile::tempdir().unwrap();
        let mut recorded = Vec::new();
        let config = tiny_config();
        let artifacts = run_simulation(
            &config,
            &NoopBehavior,
            &fixed_clock(),
            dir.path(),
            |generation, name, _| recorded.push((generation, name.to_string())),
        )
        .unwrap();
        // print every 2 of 10 generations, for each of two populations
        assert_eq!(recorded.len(), 10);
        assert_eq!(recorded[0], (2, "alpha".to_string()));
        assert_eq!(recorded[1], (2, "beta".to_string()));
        assert_eq!(recorded[8], (10, "alpha".to_string()));
        for path in &artifacts.result_files {
            let text = fs::read_to_string(path).unwrap();
            let generations: Vec<usize> = text
                .lines()
                .filter(|l| l.contains('\t'))
                .map(|l| l.split('\t').nth(1).unwrap().parse().unwrap())
                .collect();
            assert_eq!(generations, vec![2, 4, 6, 8, 10]);
            for line in text.lines().filter(|l| l.contains('\t')) {
                assert!(line.starts_with("2012-09-13T00:00:00.000000Z\t"));
            }
        }
    }

    #[test]
    fn five_hundred_generations_at_print_ten_leave_fifty_records_each() {
        let dir = tempfile::tempdir().unwrap();
        let mut config = tiny_config();
        config.maximum_generations = 500;
        config.print_frequency = 10;
        config.fossilized_frequency = 100;
        config.eco_buried_frequency = 500;
        let artifacts = run_here(&config, &NoopBehavior, dir.path()).unwrap();
        for path in &artifacts.result_files {
            let text = fs::read_to_string(path).unwrap();
            assert_eq!(text.lines().filter(|l| l.contains('\t')).count(), 50);
        }
        // fossils at 100, 200, 300, 400, 500 for each of two populations
        assert_eq!(artifacts.fossil_files.len(), 10);
        assert_eq!(artifacts.eco_files.len(), 1);
    }

    #[test]
    fn fossil_and_eco_files_appear_on_schedule_with_exact_names() {
        let dir = tempfile::tempdir().unwrap();
        let artifacts = run_here(&tiny_config(), &NoopBehavior, dir.path()).unwrap();
        let names: Vec<String> = artifacts
            .fossil_files
            .iter()
            .map(|p| p.file_name().unwrap().to_string_lossy().into_owned())
            .collect();
        // population of 3 at ratio 0.5: the whole population is preserved
        assert_eq!(
            names,
            vec![
                "alpha_5_3.gap",
                "beta_5_3.gap",
                "alpha_10_3.gap",
                "beta_10_3.gap"
            ]
        );
        let eco_names: Vec<String> = artifacts
            .eco_files
            .iter()
            .map(|p| p.file_name().unwrap().to_string_lossy().into_owned())
            .collect();
        assert_eq!(eco_names, vec!["eco_10.eco"]);
        for path in artifacts.fossil_files.iter().chain(&artifacts.eco_files) {
            assert!(path.exists(), "{} should exist", path.display());
        }
    }

    #[test]
    fn reruns_are_byte_identical() {
        let dir_a = tempfile::tempdir().unwrap();
        let dir_b = tempfile::tempdir().unwrap();
        let config = tiny_config();
        let a = run_here(&config, &crate::engine::DivergenceBehavior, dir_a.path()).unwrap();
        let b = run_here(&config, &crate::engine::DivergenceBehavior, dir_b.path()).unwrap();
        let files = |artifacts: &RunArtifacts| {
            let mut all: Vec<PathBuf> = artifacts
                .result_files
                .iter()
                .chain(&artifacts.fossil_files)
                .chain(&artifacts.eco_files)
                .cloned()
                .collect();
            all.sort();
            all
        };
        let files_a = files(&a);
        let files_b = files(&b);
        assert_eq!(files_a.len(), files_b.len());
        for (pa, pb) in files_a.iter().zip(&files_b) {
            assert_eq!(pa.file_name(), pb.file_name());
            assert_eq!(
                fs::read(pa).unwrap(),
                fs::read(pb).unwrap(),
                "{} should match {}",
                pa.display(),
                pb.display()
            );
        }
    }

    #[test]
    fn a_different_seed_changes_the_run() {
        let dir_a = tempfile::tempdir().unwrap();
        let dir_b = tempfile::tempdir().unwrap();
        let config = tiny_config();
        let mut reseeded = tiny_config();
        reseeded.rng_seed = 8;
        let a = run_here(&config, &crate::engine::DivergenceBehavior, dir_a.path()).unwrap();
        let b = run_here(&reseeded, &crate::engine::DivergenceBehavior, dir_b.path()).unwrap();
        assert_ne!(
            fs::read(&a.result_files[0]).unwrap(),
            fs::read(&b.result_files[0]).unwrap()
        );
    }

    /// Records every hook call, tagging per-cell hooks with their
    /// coordinate.
    #[derive(Default)]
    struct TraceBehavior {
        calls: RefCell<Vec<String>>,
    }

    impl TraceBehavior {
        fn log(&self, entry: String) {
            self.calls.borrow_mut().push(entry);
        }
    }

    impl Behavior for TraceBehavior {
        fn mutation_scheme(
            &self,
            organism: &mut Organism,
            _rng: &mut dyn rand::RngCore,
        ) -> Result<(), String> {
            self.log(format!("mutate len {}", organism.genome.len()));
            Ok(())
        }
        fn prepopulation_control(
            &self,
            population: &mut Population,
            _rng: &mut dyn rand::RngCore,
        ) -> Result<(), String> {
            self.log(format!("pre {}", population.name));
            Ok(())
        }
        fn mating(
            &self,
            population: &mut Population,
            _rng: &mut dyn rand::RngCore,
        ) -> Result<(), String> {
            self.log(format!("mating {}", population.name));
            Ok(())
        }
        fn postpopulation_control(
            &self,
            population: &mut Population,
            _rng: &mut dyn rand::RngCore,
        ) -> Result<(), String> {
            self.log(format!("post {}", population.name));
            Ok(())
        }
        fn generation_events(
            &self,
            population: &mut Population,
            _rng: &mut dyn rand::RngCore,
        ) -> Result<(), String> {
            self.log(format!("events {}", population.name));
            Ok(())
        }
        fn report(&self, population: &Population) -> Result<String, String> {
            self.log(format!("report {}", population.name));
            Ok(format!("gen {}", population.generation))
        }
        fn organism_movement(
            &self,
            _world: &mut World,
            coordinate: [usize; 3],
            _rng: &mut dyn rand::RngCore,
        ) -> Result<(), String> {
            self.log(format!("movement {coordinate:?}"));
            Ok(())
        }
        fn organism_location(
            &self,
            _world: &mut World,
            coordinate: [usize; 3],
            _rng: &mut dyn rand::RngCore,
        ) -> Result<(), String> {
            self.log(format!("location {coordinate:?}"));
            Ok(())
        }
        fn ecoregulate(
            &self,
            _world: &mut World,
            _rng: &mut dyn rand::RngCore,
        ) -> Result<(), String> {
            self.log("ecoregulate".to_string());
            Ok(())
        }
        fn update_ecology(
            &self,
            _world: &mut World,
            coordinate: [usize; 3],
            _rng: &mut dyn rand::RngCore,
        ) -> Result<(), String> {
            self.log(format!("ecology {coordinate:?}"));
            Ok(())
        }
        fn update_local(
            &self,
            _world: &mut World,
            coordinate: [usize; 3],
            _rng: &mut dyn rand::RngCore,
        ) -> Result<(), String> {
            self.log(format!("local {coordinate:?}"));
            Ok(())
        }
        fn report_world(&self, _world: &World) -> Result<(), String> {
            self.log("world report".to_string());
            Ok(())
        }
    }

    #[test]
    fn one_generation_calls_every_hook_in_the_documented_order() {
        let dir = tempfile::tempdir().unwrap();
        let mut config = tiny_config();
        config.maximum_generations = 1;
        config.population_names = vec!["alpha".to_string()];
        config.population_locations = vec![[0, 0, 0]];
        config.population_size = 2;
        config.fossil_files = map(&[("alpha", "alpha")]);
        config.result_files = map(&[("alpha", "alpha")]);
        let behavior = TraceBehavior::default();
        run_here(&config, &behavior, dir.path()).unwrap();
        let calls = behavior.calls.into_inner();
        assert_eq!(
            calls,
            vec![
                "ecoregulate",
                "ecology [0, 0, 0]",
                "local [0, 0, 0]",
                "ecology [1, 0, 0]",
                "local [1, 0, 0]",
                "pre alpha",
                "mating alpha",
                "post alpha",
                "mutate len 1",
                "mutate len 1",
                "events alpha",
                "report alpha",
                "movement [0, 0, 0]",
                "location [0, 0, 0]",
                "movement [1, 0, 0]",
                "location [1, 0, 0]",
                "world report",
            ]
        );
    }

    #[test]
    fn each_genome_executes_exactly_once_per_generation() {
        let dir = tempfile::tempdir().unwrap();
        let mut config = tiny_config();
        // three increments per execution
        config.initial_chromosome = "008008008".chars().collect();
        config.maximum_generations = 2;
        // carried-over cytoplasm accumulates one execution per generation
        config.clean_cytoplasm = false;
        let artifacts = run_here(&config, &NoopBehavior, dir.path()).unwrap();
        for population in &artifacts.populations {
            for organism in &population.agents {
                assert_eq!(organism.cytoplasm[0], 6.0);
            }
        }
    }

    #[test]
    fn clean_cytoplasm_starts_every_generation_from_zeros() {
        let dir = tempfile::tempdir().unwrap();
        let mut config = tiny_config();
        config.initial_chromosome = "008008008".chars().collect();
        config.maximum_generations = 4;
        config.clean_cytoplasm = true;
        let artifacts = run_here(&config, &NoopBehavior, dir.path()).unwrap();
        for population in &artifacts.populations {
            for organism in &population.agents {
                assert_eq!(organism.cytoplasm[0], 3.0);
            }
        }
    }

    /// Rewrites each organism's genome to a distinct increment count, then
    /// captures the shared cell's temporary output at the world report.
    struct LastWriterProbe {
        seen: RefCell<Vec<Vec<f64>>>,
    }

    impl Behavior for LastWriterProbe {
        fn generation_events(
            &self,
            population: &mut Population,
            _rng: &mut dyn rand::RngCore,
        ) -> Result<(), String> {
            for (index, organism) in population.agents.iter_mut().enumerate() {
                let genome = format!("{}020", "008".repeat(index + 1));
                organism.genome = vec![Chromosome::from_digits(&genome, 0.0)];
            }
            Ok(())
        }
        fn report_world(&self, world: &World) -> Result<(), String> {
            let cell = world.cell([0, 0, 0]).map_err(|e| e.to_string())?;
            self.seen.borrow_mut().push(cell.temporary_output.clone());
            Ok(())
        }
    }

    #[test]
    fn organisms_sharing_a_cell_leave_the_last_writers_lists() {
        let dir = tempfile::tempdir().unwrap();
        let mut config = tiny_config();
        config.population_names = vec!["alpha".to_string()];
        config.population_locations = vec![[0, 0, 0]];
        config.population_size = 3;
        config.fossil_files = map(&[("alpha", "alpha")]);
        config.result_files = map(&[("alpha", "alpha")]);
        config.maximum_generations = 2;
        let behavior = LastWriterProbe {
            seen: RefCell::new(Vec::new()),
        };
        run_here(&config, &behavior, dir.path()).unwrap();
        let seen = behavior.seen.into_inner();
        // generation 1 ran the all-zero ancestor (no output); generation 2
        // ran the rewritten genomes, and the 3-increment organism wrote last
        assert_eq!(seen.len(), 2);
        assert_eq!(seen[0], Vec::<f64>::new());
        assert_eq!(seen[1], vec![3.0]);
    }

    /// Empties every genome after the first generation and plants a marker
    /// in each cytoplasm.
    struct GenomeRemover;

    impl Behavior for GenomeRemover {
        fn generation_events(
            &self,
            population: &mut Population,
            _rng: &mut dyn rand::RngCore,
        ) -> Result<(), String> {
            for organism in population.agents.iter_mut() {
                organism.genome.clear();
                organism.cytoplasm = vec![9.5; 2];
            }
            Ok(())
        }
    }

    #[test]
    fn genome_less_organisms_skip_execution_and_keep_their_cytoplasm() {
        let dir = tempfile::tempdir().unwrap();
        let mut config = tiny_config();
        config.maximum_generations = 3;
        config.clean_cytoplasm = true;
        let artifacts = run_here(&config, &GenomeRemover, dir.path()).unwrap();
        for population in &artifacts.populations {
            for organism in &population.agents {
                assert_eq!(organism.cytoplasm, vec![9.5; 2]);
            }
        }
    }

    /// Fails its Nth mating call.
    struct FailingMating {
        remaining: RefCell<usize>,
    }

    impl Behavior for FailingMating {
        fn mating(
            &self,
            _population: &mut Population,
            _rng: &mut dyn rand::RngCore,
        ) -> Result<(), String> {
            let mut remaining = self.remaining.borrow_mut();
            if *remaining == 0 {
                return Err("no compatible mates".to_string());
            }
            *remaining -= 1;
            Ok(())
        }
    }

    #[test]
    fn hook_failures_abort_with_generation_and_phase() {
        let dir = tempfile::tempdir().unwrap();
        let config = tiny_config();
        // two populations per generation: failing the third call lands in
        // generation 2
        let behavior = FailingMating {
            remaining: RefCell::new(2),
        };
        let err = run_here(&config, &behavior, dir.path()).unwrap_err();
        match err {
            RunError::Abort {
                generation,
                phase,
                message,
            } => {
                assert_eq!(generation, 2);
                assert_eq!(phase, Phase::PopulationStep);
                assert!(message.contains("mating"), "message was {message:?}");
                assert!(message.contains("no compatible mates"));
            }
            other => panic!("expected an abort, got {other:?}"),
        }
    }

    #[test]
    fn second_run_in_the_same_directory_never_overwrites_snapshots() {
        let dir = tempfile::tempdir().unwrap();
        let config = tiny_config();
        let first = run_here(&config, &NoopBehavior, dir.path()).unwrap();
        let second = run_here(&config, &NoopBehavior, dir.path()).unwrap();
        for path in first.fossil_files.iter().chain(&first.eco_files) {
            assert!(path.exists());
        }
        let second_names: Vec<String> = second
            .fossil_files
            .iter()
            .chain(&second.eco_files)
            .map(|p| p.file_name().unwrap().to_string_lossy().into_owned())
            .collect();
        assert_eq!(
            second_names,
            vec![
                "alpha_5_3.1.gap",
                "beta_5_3.1.gap",
                "alpha_10_3.1.gap",
                "beta_10_3.1.gap",
                "eco_10.1.eco"
            ]
        );
        // the result file instead accumulates: two headers now
        let text = fs::read_to_string(&second.result_files[0]).unwrap();
        assert_eq!(
            text.matches("STARTING SIMULATION - ").count(),
            2,
            "append mode should stack run headers"
        );
    }

    #[test]
    fn fixed_clock_parses_iso_8601_and_rejects_garbage() {
        assert!(FixedClock::parse("2012-09-13T08:30:00Z").is_ok());
        assert!(FixedClock::parse("2012-09-13 08:30").is_err());
    }
}
