//! Command-line entry points: running simulations, validating the
//! instruction set, inspecting snapshots, and the analysis tables.
//!
//! Progress goes to standard error; data (tables, per-codon results,
//! snapshot summaries) goes to standard output or `--out`. Exit codes: 0
//! success, 1 bad configuration or unusable input, 2 runtime failure.

use std::collections::BTreeMap;
use std::fs;
use std::io::{self, Write};
use std::path::{Path, PathBuf};

use clap::{Parser, Subcommand};

use crate::analysis;
use crate::conformance;
use crate::engine::{self, Clock, FixedClock, RunError, SystemClock};
use crate::genetics;
use crate::isa::{self, RagarajaVersion};
use crate::world;

const EXIT_OK: i32 = 0;
const EXIT_CONFIG: i32 = 1;
const EXIT_RUNTIME: i32 = 2;

#[derive(Parser, Debug)]
#[command(
    name = "dose",
    version,
    about = "Digital organism simulation environment",
    propagate_version = true
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Run a configured simulation
    Run(RunArgs),
    /// Mean genome distance from a baseline generation, as a table
    AnalyzeDivergence(DivergenceArgs),
    /// Mean cytoplasmic values from a result file or a fossil
    AnalyzeCytoplasm(CytoplasmArgs),
    /// Summarize a fossil (.gap) or ecosystem (.eco) snapshot
    Inspect(InspectArgs),
    /// Check every enabled opcode against its conformance fixtures
    ValidateIsa(ValidateArgs),
}

#[derive(clap::Args, Debug)]
struct RunArgs {
    /// Parameter file (key = value lines)
    config_path: PathBuf,
    /// Built-in behavior preset
    #[arg(long, default_value = "noop")]
    preset: String,
    /// Override the configured rng_seed
    #[arg(long)]
    seed: Option<u64>,
    /// Report every file the run writes
    #[arg(long)]
    trace: bool,
    /// Pin all timestamps to one ISO-8601 instant, e.g. 2012-09-13T00:00:00Z
    #[arg(long, value_name = "ISO8601")]
    fixed_clock: Option<String>,
    /// Directory for result, fossil, and ecosystem files
    #[arg(long, default_value = ".")]
    out_dir: PathBuf,
}

#[derive(clap::Args, Debug)]
struct DivergenceArgs {
    /// Result file written by the divergence preset
    result_file: PathBuf,
    /// Generation every later generation is compared against
    #[arg(long, default_value_t = 10)]
    baseline: usize,
    /// Generations between points
    #[arg(long, default_value_t = 10)]
    interval: usize,
    /// Write the table here instead of standard output
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(clap::Args, Debug)]
struct CytoplasmArgs {
    /// A .gap fossil or a result file written by the cytoplasm preset
    path: PathBuf,
    /// Write the table here instead of standard output
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(clap::Args, Debug)]
struct InspectArgs {
    /// A .gap or .eco snapshot
    path: PathBuf,
}

#[derive(clap::Args, Debug)]
#[command(disable_version_flag = true)]
struct ValidateArgs {
    /// Instruction set version: 0, 0.1, or 1 (default 1)
    #[arg(long)]
    version: Option<RagarajaVersion>,
    /// Toggle file of NNN=Y|N lines; implies version 0
    #[arg(long)]
    toggles: Option<PathBuf>,
}

/// Parses the process arguments and runs the selected command, returning
/// the process exit code.
pub fn run() -> i32 {
    match Cli::try_parse() {
        Ok(cli) => execute(cli),
        Err(err) => {
            let benign = matches!(
                err.kind(),
                clap::error::ErrorKind::DisplayHelp | clap::error::ErrorKind::DisplayVersion
            );
            let _ = err.print();
            if benign {
                EXIT_OK
            } else {
                EXIT_CONFIG
            }
        }
    }
}

fn execute(cli: Cli) -> i32 {
    match cli.command {
        Command::Run(args) => cmd_run(args),
        Command::AnalyzeDivergence(args) => cmd_analyze_divergence(args),
        Command::AnalyzeCytoplasm(args) => cmd_analyze_cytoplasm(args),
        Command::Inspect(args) => cmd_inspect(args),
        Command::ValidateIsa(args) => cmd_validate_isa(args),
    }
}

fn fail(code: i32, message: impl std::fmt::Display) -> i32 {
    eprintln!("dose: {message}");
    code
}

/// Writes a data table to `--out` or standard output.
fn emit(out: Option<&Path>, text: &str) -> io::Result<()> {
    match out {
        Some(path) => fs::write(path, text),
        None => io::stdout().write_all(text.as_bytes()),
    }
}

// ---------------------------------------------------------------------------
// run
// ---------------------------------------------------------------------------

fn cmd_run(args: RunArgs) -> i32 {
    let text = match fs::read_to_string(&args.config_path) {
        Ok(text) => text,
        Err(e) => return fail(EXIT_CONFIG, format!("{}: {e}", args.config_path.display())),
    };
    let mut config = match engine::load_config(&text) {
        Ok(config) => config,
        Err(e) => return fail(EXIT_CONFIG, e),
    };
    if let Some(seed) = args.seed {
        config.rng_seed = seed;
    }
    let Some(behavior) = engine::preset(&args.preset) else {
        return fail(
            EXIT_CONFIG,
            format!(
                "unknown preset {:?}; available: {}",
                args.preset,
                engine::preset_names().join(", ")
            ),
        );
    };
    let clock: Box<dyn Clock> = match &args.fixed_clock {
        Some(text) => match FixedClock::parse(text) {
            Ok(clock) => Box::new(clock),
            Err(e) => return fail(EXIT_CONFIG, format!("--fixed-clock {text:?}: {e}")),
        },
        None => Box::new(SystemClock),
    };
    if !args.out_dir.as_os_str().is_empty() && !args.out_dir.exists() {
        if let Err(e) = fs::create_dir_all(&args.out_dir) {
            return fail(
                EXIT_CONFIG,
                format!("cannot create {}: {e}", args.out_dir.display()),
            );
        }
    }
    let outcome = engine::run_simulation(
        &config,
        behavior.as_ref(),
        clock.as_ref(),
        &args.out_dir,
        |generation, _name, report| eprintln!("{generation} {report}"),
    );
    match outcome {
        Ok(artifacts) => {
            if args.trace {
                for path in artifacts
                    .result_files
                    .iter()
                    .chain(&artifacts.fossil_files)
                    .chain(&artifacts.eco_files)
                {
                    eprintln!("wrote {}", path.display());
                }
            }
            eprintln!("completed {} generations", artifacts.generations);
            EXIT_OK
        }
        Err(RunError::Config(e)) => fail(EXIT_CONFIG, e),
        Err(abort @ RunError::Abort { .. }) => fail(EXIT_RUNTIME, abort),
    }
}

// ---------------------------------------------------------------------------
// analyze-divergence
// ---------------------------------------------------------------------------

fn cmd_analyze_divergence(args: DivergenceArgs) -> i32 {
    let text = match fs::read_to_string(&args.result_file) {
        Ok(text) => text,
        Err(e) => return fail(EXIT_CONFIG, format!("{}: {e}", args.result_file.display())),
    };
    if args.interval == 0 {
        return fail(EXIT_CONFIG, "--interval must be positive");
    }
    let series = match analysis::divergence_series(&text, args.baseline, args.interval) {
        Ok(series) => series,
        Err(e) => return fail(EXIT_CONFIG, e),
    };
    let mut table = String::new();
    table.push_str(&format!("# pairing = {}\n", series.pairing));
    table.push_str(&format!(
        "# baseline_generation = {}\n",
        series.baseline_generation
    ));
    table.push_str("generation\tmean_distance\tnormalized_distance\n");
    for point in &series.points {
        table.push_str(&format!(
            "{}\t{}\t{}\n",
            point.generation, point.mean_absolute, point.mean_normalized
        ));
    }
    match emit(args.out.as_deref(), &table) {
        Ok(()) => EXIT_OK,
        Err(e) => fail(EXIT_RUNTIME, e),
    }
}

// ---------------------------------------------------------------------------
// analyze-cytoplasm
// ---------------------------------------------------------------------------

fn cmd_analyze_cytoplasm(args: CytoplasmArgs) -> i32 {
    let is_fossil = args.path.extension().and_then(|e| e.to_str()) == Some("gap");
    let table = if is_fossil {
        let organisms = match genetics::revive(&args.path) {
            Ok(organisms) => organisms,
            Err(e) => return fail(EXIT_CONFIG, e),
        };
        match analysis::mean_cytoplasm(&organisms) {
            Ok(mean) => format!(
                "# source = fossil\norganisms\tmean_cytoplasm\n{}\t{}\n",
                organisms.len(),
                mean
            ),
            Err(e) => return fail(EXIT_CONFIG, e),
        }
    } else {
        let text = match fs::read_to_string(&args.path) {
            Ok(text) => text,
            Err(e) => return fail(EXIT_CONFIG, format!("{}: {e}", args.path.display())),
        };
        match analysis::cytoplasm_series(&text) {
            Ok(series) => {
                let mut table =
                    String::from("# source = result file\ngeneration\tmean_cytoplasm\n");
                for (generation, mean) in series {
                    table.push_str(&format!("{generation}\t{mean}\n"));
                }
                table
            }
            Err(e) => return fail(EXIT_CONFIG, e),
        }
    };
    match emit(args.out.as_deref(), &table) {
        Ok(()) => EXIT_OK,
        Err(e) => fail(EXIT_RUNTIME, e),
    }
}

// ---------------------------------------------------------------------------
// inspect
// ---------------------------------------------------------------------------

fn cmd_inspect(args: InspectArgs) -> i32 {
    let summary = match args.path.extension().and_then(|e| e.to_str()) {
        Some("gap") => inspect_fossil(&args.path),
        Some("eco") => inspect_eco(&args.path),
        _ => Err(format!(
            "{}: unknown snapshot format (expected .gap or .eco)",
            args.path.display()
        )),
    };
    match summary {
        Ok(text) => {
            print!("{text}");
            EXIT_OK
        }
        Err(message) => fail(EXIT_CONFIG, message),
    }
}

fn inspect_fossil(path: &Path) -> Result<String, String> {
    let organisms = genetics::revive(path).map_err(|e| e.to_string())?;
    let value: serde_json::Value = serde_json::from_str(
        &fs::read_to_string(path).map_err(|e| format!("{}: {e}", path.display()))?,
    )
    .map_err(|e| format!("{}: {e}", path.display()))?;
    let field = |name: &str| value.get(name).cloned().unwrap_or(serde_json::Value::Null);

    let mut lengths: BTreeMap<usize, usize> = BTreeMap::new();
    for organism in &organisms {
        *lengths
            .entry(organism.source().chars().count())
            .or_default() += 1;
    }
    let mut text = String::from("format: fossil (.gap)\n");
    text.push_str(&format!("format_version: {}\n", field("format_version")));
    text.push_str(&format!(
        "population: {}\n",
        field("population_name").as_str().unwrap_or("?")
    ));
    text.push_str(&format!("generation: {}\n", field("generation")));
    text.push_str(&format!("sample_size: {}\n", organisms.len()));
    text.push_str("genome length histogram:\n");
    for (length, count) in lengths {
        text.push_str(&format!("  {length}: {count}\n"));
    }
    Ok(text)
}

fn inspect_eco(path: &Path) -> Result<String, String> {
    let world = world::eco_excavate(path).map_err(|e| e.to_string())?;
    let (x, y, z) = world.dims();
    let mut organisms = 0usize;
    let mut occupied = 0usize;
    for coordinate in world.coordinates() {
        let count = world.cell(coordinate).expect("in range").organisms;
        organisms += count;
        if count > 0 {
            occupied += 1;
        }
    }
    let mut text = String::from("format: ecosystem (.eco)\n");
    text.push_str(&format!("format_version: {}\n", world::ECO_FORMAT_VERSION));
    text.push_str(&format!("dims: {x}x{y}x{z}\n"));
    text.push_str(&format!("cells: {}\n", world.cell_count()));
    text.push_str(&format!("organisms: {organisms}\n"));
    text.push_str(&format!("occupied cells: {occupied}\n"));
    Ok(text)
}

// ---------------------------------------------------------------------------
// validate-isa
// ---------------------------------------------------------------------------

fn cmd_validate_isa(args: ValidateArgs) -> i32 {
    let table = match (args.version, &args.toggles) {
        (None, None) => isa::build_instruction_set(RagarajaVersion::Full, None),
        (Some(version), None) => {
            if version == RagarajaVersion::UserDefined {
                return fail(EXIT_CONFIG, "version 0 needs --toggles <file>");
            }
            isa::build_instruction_set(version, None)
        }
        (version, Some(path)) => {
            if !matches!(version, None | Some(RagarajaVersion::UserDefined)) {
                return fail(
                    EXIT_CONFIG,
                    "--toggles only applies to version 0; drop --version or pass --version 0",
                );
            }
            let text = match fs::read_to_string(path) {
                Ok(text) => text,
                Err(e) => return fail(EXIT_CONFIG, format!("{}: {e}", path.display())),
            };
            isa::build_instruction_set(RagarajaVersion::UserDefined, Some(&text))
        }
    };
    let table = match table {
        Ok(table) => table,
        Err(e) => return fail(EXIT_CONFIG, e),
    };
    let reports = conformance::run_suite(&table);
    let mut failures = 0usize;
    let stdout = io::stdout();
    let mut out = stdout.lock();
    for report in &reports {
        let line = match &report.outcome {
            Ok(()) => format!("codon {:03}: pass\n", report.codon),
            Err(reason) => {
                failures += 1;
                format!("codon {:03}: FAIL — {reason}\n", report.codon)
            }
        };
        if out.write_all(line.as_bytes()).is_err() {
            return EXIT_RUNTIME;
        }
    }
    eprintln!("{} opcodes checked, {failures} failures", reports.len());
    if failures > 0 {
        EXIT_RUNTIME
    } else {
        EXIT_OK
    }
}
