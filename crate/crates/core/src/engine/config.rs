//! The simulation parameter file and its validated in-memory form.
//!
//! The file is UTF-8 `key = value` lines with `#` comments. Values use
//! Python literal syntax — numbers, `True`/`False`, quoted strings, and
//! bracketed lists, tuples, and dicts — and a bracketed value may continue
//! over several lines. Every parameter is required except `rng_seed`,
//! which defaults to 0.

use std::collections::BTreeMap;
use std::fs;

use thiserror::Error;

use crate::isa::{self, OpcodeTable, RagarajaVersion};

/// A fully validated set of run parameters.
///
/// Field names match the parameter file keys one for one.
#[derive(Debug, Clone, PartialEq)]
pub struct SimulationConfig {
    /// Ancestor genome, one symbol per element.
    pub initial_chromosome: Vec<char>,
    /// Share of the chromosome rewritten per mutation pass.
    pub background_mutation_rate: f64,
    /// Extra rate on top of the background; may be negative.
    pub additional_mutation_rate: f64,
    /// Ancestor cytoplasm length.
    pub cytoplasm_size: usize,
    /// Hard ceiling on cytoplasm growth during execution.
    pub max_cytoplasm_size: usize,
    /// Execution budget per genome per generation, in instructions.
    pub max_codon: usize,
    /// Execute on fresh zeros each generation instead of the carried-over
    /// cytoplasm.
    pub clean_cytoplasm: bool,
    pub population_names: Vec<String>,
    /// Organisms per population.
    pub population_size: usize,
    pub world_x: usize,
    pub world_y: usize,
    pub world_z: usize,
    /// Home cell of each population, in `population_names` order.
    pub population_locations: Vec<[usize; 3]>,
    pub maximum_generations: usize,
    /// Generations between fossilization events.
    pub fossilized_frequency: usize,
    /// Share of a population each fossil preserves.
    pub fossilized_ratio: f64,
    /// Fossil file prefix per population name.
    pub fossil_files: BTreeMap<String, String>,
    /// Generations between report records.
    pub print_frequency: usize,
    /// Result file prefix per population name.
    pub result_files: BTreeMap<String, String>,
    pub ragaraja_version: RagarajaVersion,
    /// Toggle file consulted only for version 0.
    pub user_defined_instructions: String,
    /// Generations between ecosystem burial events.
    pub eco_buried_frequency: usize,
    /// Burial file prefix.
    pub eco_burial_file: String,
    /// Root of all random streams; 0 when absent.
    pub rng_seed: u64,
}

#[derive(Debug, Error)]
pub enum ConfigError {
    #[error("line {line}: expected `key = value`, found {text:?}")]
    Syntax { line: usize, text: String },
    #[error("line {line}: unterminated bracket or quote in value starting here")]
    Unterminated { line: usize },
    #[error("line {line}: duplicate key `{key}`")]
    DuplicateKey { line: usize, key: String },
    #[error("line {line}: unknown key `{key}`")]
    UnknownKey { line: usize, key: String },
    #[error("missing required key `{key}`")]
    MissingKey { key: String },
    #[error("key `{key}`: {reason}")]
    BadValue { key: String, reason: String },
    #[error("key `{key}`: {reason}")]
    Invariant { key: String, reason: String },
    #[error("cannot read instruction file `{path}`: {reason}")]
    InstructionFile { path: String, reason: String },
    #[error("instruction file `{path}`: {source}")]
    InstructionSet {
        path: String,
        source: isa::IsaError,
    },
}

// ---------------------------------------------------------------------------
// Python-literal values
// ---------------------------------------------------------------------------

/// One parsed literal. Tuples read as lists; dict keys must be strings.
#[derive(Debug, Clone, PartialEq)]
enum Value {
    Int(i64),
    Float(f64),
    Bool(bool),
    Text(String),
    List(Vec<Value>),
    Dict(Vec<(String, Value)>),
}

impl Value {
    fn type_name(&self) -> &'static str {
        match self {
            Value::Int(_) => "integer",
            Value::Float(_) => "float",
            Value::Bool(_) => "boolean",
            Value::Text(_) => "string",
            Value::List(_) => "list",
            Value::Dict(_) => "dict",
        }
    }
}

struct ValueParser<'a> {
    chars: Vec<char>,
    pos: usize,
    text: &'a str,
}

impl<'a> ValueParser<'a> {
    fn new(text: &'a str) -> Self {
        ValueParser {
            chars: text.chars().collect(),
            pos: 0,
            text,
        }
    }

    fn error(&self, reason: &str) -> String {
        format!("{reason} in value `{}`", self.text.trim())
    }

    fn peek(&self) -> Option<char> {
        self.chars.get(self.pos).copied()
    }

    fn bump(&mut self) -> Option<char> {
        let c = self.peek();
        if c.is_some() {
            self.pos += 1;
        }
        c
    }

    fn skip_space(&mut self) {
        while matches!(self.peek(), Some(c) if c.is_whitespace()) {
            self.pos += 1;
        }
    }

    fn parse(mut self) -> Result<Value, String> {
        self.skip_space();
        let value = self.value()?;
        self.skip_space();
        if self.pos != self.chars.len() {
            return Err(self.error("trailing text after value"));
        }
        Ok(value)
    }

    fn value(&mut self) -> Result<Value, String> {
        match self.peek() {
            Some('[') => self.sequence(']').map(Value::List),
            Some('(') => self.sequence(')').map(Value::List),
            Some('{') => self.dict(),
            Some('\'') | Some('"') => self.string().map(Value::Text),
            Some(c) if c == '-' || c == '+' || c.is_ascii_digit() || c == '.' => self.number(),
            Some(c) if c.is_alphabetic() => self.word(),
            Some(c) => Err(self.error(&format!("unexpected character `{c}`"))),
            None => Err(self.error("empty value")),
        }
    }

    fn sequence(&mut self, close: char) -> Result<Vec<Value>, String> {
        self.bump();
        let mut items = Vec::new();
        loop {
            self.skip_space();
            match self.peek() {
                Some(c) if c == close => {
                    self.bump();
                    return Ok(items);
                }
                Some(',') => {
                    self.bump();
                }
                Some(_) => items.push(self.value()?),
                None => return Err(self.error("unterminated sequence")),
            }
        }
    }

    fn dict(&mut self) -> Result<Value, String> {
        self.bump();
        let mut entries = Vec::new();
        loop {
            self.skip_space();
            match self.peek() {
                Some('}') => {
                    self.bump();
                    return Ok(Value::Dict(entries));
                }
                Some(',') => {
                    self.bump();
                }
                Some('\'') | Some('"') => {
                    let key = self.string()?;
                    self.skip_space();
                    if self.bump() != Some(':') {
                        return Err(self.error("expected `:` after dict key"));
                    }
                    self.skip_space();
                    let value = self.value()?;
                    entries.push((key, value));
                }
                Some(_) => return Err(self.error("dict keys must be quoted strings")),
                None => return Err(self.error("unterminated dict")),
            }
        }
    }

    fn string(&mut self) -> Result<String, String> {
        let quote = self.bump().expect("caller saw a quote");
        let mut out = String::new();
        loop {
            match self.bump() {
                Some('\\') => match self.bump() {
                    Some(escaped) => out.push(match escaped {
                        'n' => '\n',
                        't' => '\t',
                        other => other,
                    }),
                    None => return Err(self.error("unterminated string")),
                },
                Some(c) if c == quote => return Ok(out),
                Some(c) => out.push(c),
                None => return Err(self.error("unterminated string")),
            }
        }
    }

    fn number(&mut self) -> Result<Value, String> {
        let start = self.pos;
        if matches!(self.peek(), Some('-') | Some('+')) {
            self.bump();
        }
        let mut is_float = false;
        while let Some(c) = self.peek() {
            match c {
                '0'..='9' => {
                    self.bump();
                }
                '.' => {
                    is_float = true;
                    self.bump();
                }
                'e' | 'E' => {
                    is_float = true;
                    self.bump();
                    if matches!(self.peek(), Some('-') | Some('+')) {
                        self.bump();
                    }
                }
                _ => break,
            }
        }
        let digits: String = self.chars[start..self.pos].iter().collect();
        if is_float {
            digits
                .parse::<f64>()
                .map(Value::Float)
                .map_err(|_| self.error(&format!("bad number `{digits}`")))
        } else {
            digits
                .parse::<i64>()
                .map(Value::Int)
                .map_err(|_| self.error(&format!("bad number `{digits}`")))
        }
    }

    fn word(&mut self) -> Result<Value, String> {
        let start = self.pos;
        while matches!(self.peek(), Some(c) if c.is_alphanumeric() || c == '_') {
            self.bump();
        }
        let word: String = self.chars[start..self.pos].iter().collect();
        match word.as_str() {
            "True" => Ok(Value::Bool(true)),
            "False" => Ok(Value::Bool(false)),
            other => Err(self.error(&format!(
                "unknown word `{other}` (strings must be quoted)"
            ))),
        }
    }
}

// ---------------------------------------------------------------------------
// Line assembly
// ---------------------------------------------------------------------------

/// Removes a `#` comment, ignoring `#` inside quoted strings.
fn strip_comment(line: &str) -> &str {
    let mut quote: Option<char> = None;
    let mut escaped = false;
    for (idx, c) in line.char_indices() {
        if escaped {
            escaped = false;
            continue;
        }
        match (quote, c) {
            (Some(_), '\\') => escaped = true,
            (Some(q), c) if c == q => quote = None,
            (None, '\'') | (None, '"') => quote = Some(c),
            (None, '#') => return &line[..idx],
            _ => {}
        }
    }
    line
}

/// Net bracket depth of a fragment, for joining multi-line values. Brackets
/// inside quoted strings do not count.
fn bracket_depth(fragment: &str) -> i32 {
    let mut depth = 0;
    let mut quote: Option<char> = None;
    let mut escaped = false;
    for c in fragment.chars() {
        if escaped {
            escaped = false;
            continue;
        }
        match (quote, c) {
            (Some(_), '\\') => escaped = true,
            (Some(q), c) if c == q => quote = None,
            (None, '\'') | (None, '"') => quote = Some(c),
            (None, '[') | (None, '(') | (None, '{') => depth += 1,
            (None, ']') | (None, ')') | (None, '}') => depth -= 1,
            _ => {}
        }
    }
    depth
}

/// Splits the file into `(line_number, key, value_text)` entries, joining
/// lines while a bracketed value stays open.
fn logical_lines(text: &str) -> Result<Vec<(usize, String, String)>, ConfigError> {
    let mut entries = Vec::new();
    let mut pending: Option<(usize, String, i32)> = None;
    for (idx, raw) in text.lines().enumerate() {
        let line_no = idx + 1;
        let piece = strip_comment(raw);
        if let Some((start, mut acc, depth)) = pending.take() {
            acc.push('\n');
            acc.push_str(piece);
            let depth = depth + bracket_depth(piece);
            if depth > 0 {
                pending = Some((start, acc, depth));
            } else {
                entries.push((start, acc));
            }
            continue;
        }
        if piece.trim().is_empty() {
            continue;
        }
        let depth = bracket_depth(piece);
        if depth > 0 {
            pending = Some((line_no, piece.to_string(), depth));
        } else {
            entries.push((line_no, piece.to_string()));
        }
    }
    if let Some((start, _, _)) = pending {
        return Err(ConfigError::Unterminated { line: start });
    }
    entries
        .into_iter()
        .map(|(line, text)| {
            let (key, value) = text.split_once('=').ok_or_else(|| ConfigError::Syntax {
                line,
                text: text.trim().to_string(),
            })?;
            let key = key.trim();
            if key.is_empty() || !key.chars().all(|c| c.is_ascii_alphanumeric() || c == '_') {
                return Err(ConfigError::Syntax {
                    line,
                    text: text.trim().to_string(),
                });
            }
            Ok((line, key.to_string(), value.trim().to_string()))
        })
        .collect()
}

// ---------------------------------------------------------------------------
// Typed extraction
// ---------------------------------------------------------------------------

const KEYS: [&str; 23] = [
    "initial_chromosome",
    "background_mutation_rate",
    "additional_mutation_rate",
    "cytoplasm_size",
    "max_cytoplasm_size",
    "max_codon",
    "clean_cytoplasm",
    "population_names",
    "population_size",
    "world_x",
    "world_y",
    "world_z",
    "population_locations",
    "maximum_generations",
    "fossilized_frequency",
    "fossilized_ratio",
    "fossil_files",
    "print_frequency",
    "result_files",
    "ragaraja_version",
    "user_defined_instructions",
    "eco_buried_frequency",
    "eco_burial_file",
];

struct Extractor {
    values: BTreeMap<String, Value>,
}

impl Extractor {
    fn take(&mut self, key: &str) -> Result<Value, ConfigError> {
        self.values
            .remove(key)
            .ok_or_else(|| ConfigError::MissingKey {
                key: key.to_string(),
            })
    }

    fn bad(key: &str, reason: String) -> ConfigError {
        ConfigError::BadValue {
            key: key.to_string(),
            reason,
        }
    }

    fn positive_int(&mut self, key: &str) -> Result<usize, ConfigError> {
        match self.take(key)? {
            Value::Int(n) if n >= 1 => Ok(n as usize),
            Value::Int(n) => Err(Self::bad(key, format!("must be a positive integer, got {n}"))),
            other => Err(Self::bad(
                key,
                format!("expected a positive integer, got {}", other.type_name()),
            )),
        }
    }

    fn real(&mut self, key: &str) -> Result<f64, ConfigError> {
        match self.take(key)? {
            Value::Int(n) => Ok(n as f64),
            Value::Float(x) => Ok(x),
            other => Err(Self::bad(
                key,
                format!("expected a number, got {}", other.type_name()),
            )),
        }
    }

    fn boolean(&mut self, key: &str) -> Result<bool, ConfigError> {
        match self.take(key)? {
            Value::Bool(b) => Ok(b),
            other => Err(Self::bad(
                key,
                format!("expected True or False, got {}", other.type_name()),
            )),
        }
    }

    fn text(&mut self, key: &str) -> Result<String, ConfigError> {
        match self.take(key)? {
            Value::Text(s) => Ok(s),
            other => Err(Self::bad(
                key,
                format!("expected a quoted string, got {}", other.type_name()),
            )),
        }
    }

    fn symbol_list(&mut self, key: &str) -> Result<Vec<char>, ConfigError> {
        let Value::List(items) = self.take(key)? else {
            return Err(Self::bad(key, "expected a list of symbols".to_string()));
        };
        items
            .into_iter()
            .map(|item| match item {
                Value::Text(s) if s.chars().count() == 1 => Ok(s.chars().next().unwrap()),
                Value::Text(s) => Err(Self::bad(
                    key,
                    format!("symbols must be single characters, got {s:?}"),
                )),
                other => Err(Self::bad(
                    key,
                    format!("expected quoted symbols, got {}", other.type_name()),
                )),
            })
            .collect()
    }

    fn string_list(&mut self, key: &str) -> Result<Vec<String>, ConfigError> {
        let Value::List(items) = self.take(key)? else {
            return Err(Self::bad(key, "expected a list of strings".to_string()));
        };
        items
            .into_iter()
            .map(|item| match item {
                Value::Text(s) => Ok(s),
                other => Err(Self::bad(
                    key,
                    format!("expected quoted strings, got {}", other.type_name()),
                )),
            })
            .collect()
    }

    fn location_list(&mut self, key: &str) -> Result<Vec<[usize; 3]>, ConfigError> {
        let Value::List(items) = self.take(key)? else {
            return Err(Self::bad(
                key,
                "expected a list of (x, y, z) coordinates".to_string(),
            ));
        };
        items
            .into_iter()
            .map(|item| {
                let Value::List(coords) = item else {
                    return Err(Self::bad(
                        key,
                        "each location must be an (x, y, z) tuple".to_string(),
                    ));
                };
                if coords.len() != 3 {
                    return Err(Self::bad(
                        key,
                        format!("each location needs 3 coordinates, got {}", coords.len()),
                    ));
                }
                let mut out = [0usize; 3];
                for (slot, coord) in out.iter_mut().zip(coords) {
                    match coord {
                        Value::Int(n) if n >= 0 => *slot = n as usize,
                        Value::Int(n) => {
                            return Err(Self::bad(
                                key,
                                format!("coordinates must be nonnegative, got {n}"),
                            ))
                        }
                        other => {
                            return Err(Self::bad(
                                key,
                                format!("coordinates must be integers, got {}", other.type_name()),
                            ))
                        }
                    }
                }
                Ok(out)
            })
            .collect()
    }

    fn string_dict(&mut self, key: &str) -> Result<BTreeMap<String, String>, ConfigError> {
        let Value::Dict(entries) = self.take(key)? else {
            return Err(Self::bad(
                key,
                "expected a dict of name: prefix".to_string(),
            ));
        };
        let mut map = BTreeMap::new();
        for (name, value) in entries {
            let Value::Text(prefix) = value else {
                return Err(Self::bad(
                    key,
                    format!("prefix for {name:?} must be a quoted string"),
                ));
            };
            if map.insert(name.clone(), prefix).is_some() {
                return Err(Self::bad(key, format!("duplicate entry for {name:?}")));
            }
        }
        Ok(map)
    }

    fn version(&mut self, key: &str) -> Result<RagarajaVersion, ConfigError> {
        let value = self.take(key)?;
        match value {
            Value::Int(0) => Ok(RagarajaVersion::UserDefined),
            Value::Int(1) => Ok(RagarajaVersion::Full),
            Value::Float(x) if x == 0.1 => Ok(RagarajaVersion::NucleotideSubset),
            Value::Float(x) if x == 0.0 => Ok(RagarajaVersion::UserDefined),
            Value::Float(x) if x == 1.0 => Ok(RagarajaVersion::Full),
            other => Err(Self::bad(
                key,
                format!("must be 0, 0.1, or 1, got {other:?}"),
            )),
        }
    }

    fn seed(&mut self, key: &str) -> Result<u64, ConfigError> {
        match self.values.remove(key) {
            None => Ok(0),
            Some(Value::Int(n)) if n >= 0 => Ok(n as u64),
            Some(Value::Int(n)) => Err(Self::bad(
                key,
                format!("must be a nonnegative integer, got {n}"),
            )),
            Some(other) => Err(Self::bad(
                key,
                format!("expected a nonnegative integer, got {}", other.type_name()),
            )),
        }
    }
}

// ---------------------------------------------------------------------------
// Loading and validation
// ---------------------------------------------------------------------------

/// Parses and validates a parameter file.
pub fn load_config(text: &str) -> Result<SimulationConfig, ConfigError> {
    let mut values: BTreeMap<String, Value> = BTreeMap::new();
    for (line, key, value_text) in logical_lines(text)? {
        if !KEYS.contains(&key.as_str()) && key != "rng_seed" {
            return Err(ConfigError::UnknownKey { line, key });
        }
        if values.contains_key(&key) {
            return Err(ConfigError::DuplicateKey { line, key });
        }
        let value = ValueParser::new(&value_text)
            .parse()
            .map_err(|reason| ConfigError::BadValue {
                key: key.clone(),
                reason,
            })?;
        values.insert(key, value);
    }

    let mut ex = Extractor { values };
    let config = SimulationConfig {
        initial_chromosome: ex.symbol_list("initial_chromosome")?,
        background_mutation_rate: ex.real("background_mutation_rate")?,
        additional_mutation_rate: ex.real("additional_mutation_rate")?,
        cytoplasm_size: ex.positive_int("cytoplasm_size")?,
        max_cytoplasm_size: ex.positive_int("max_cytoplasm_size")?,
        max_codon: ex.positive_int("max_codon")?,
        clean_cytoplasm: ex.boolean("clean_cytoplasm")?,
        population_names: ex.string_list("population_names")?,
        population_size: ex.positive_int("population_size")?,
        world_x: ex.positive_int("world_x")?,
        world_y: ex.positive_int("world_y")?,
        world_z: ex.positive_int("world_z")?,
        population_locations: ex.location_list("population_locations")?,
        maximum_generations: ex.positive_int("maximum_generations")?,
        fossilized_frequency: ex.positive_int("fossilized_frequency")?,
        fossilized_ratio: ex.real("fossilized_ratio")?,
        fossil_files: ex.string_dict("fossil_files")?,
        print_frequency: ex.positive_int("print_frequency")?,
        result_files: ex.string_dict("result_files")?,
        ragaraja_version: ex.version("ragaraja_version")?,
        user_defined_instructions: ex.text("user_defined_instructions")?,
        eco_buried_frequency: ex.positive_int("eco_buried_frequency")?,
        eco_burial_file: ex.text("eco_burial_file")?,
        rng_seed: ex.seed("rng_seed")?,
    };
    validate(&config)?;
    Ok(config)
}

fn invariant(key: &str, reason: String) -> ConfigError {
    ConfigError::Invariant {
        key: key.to_string(),
        reason,
    }
}

fn validate(config: &SimulationConfig) -> Result<(), ConfigError> {
    if config.initial_chromosome.is_empty() {
        return Err(invariant(
            "initial_chromosome",
            "must hold at least one symbol".to_string(),
        ));
    }
    if !(0.0..=1.0).contains(&config.background_mutation_rate) {
        return Err(invariant(
            "background_mutation_rate",
            format!("must lie in [0, 1], got {}", config.background_mutation_rate),
        ));
    }
    if config.population_names.is_empty() {
        return Err(invariant(
            "population_names",
            "must name at least one population".to_string(),
        ));
    }
    let mut seen = std::collections::BTreeSet::new();
    for name in &config.population_names {
        if !seen.insert(name) {
            return Err(invariant(
                "population_names",
                format!("population name {name:?} appears more than once"),
            ));
        }
    }
    if config.population_locations.len() != config.population_names.len() {
        return Err(invariant(
            "population_locations",
            format!(
                "{} locations for {} population names",
                config.population_locations.len(),
                config.population_names.len()
            ),
        ));
    }
    for (name, location) in config
        .population_names
        .iter()
        .zip(&config.population_locations)
    {
        let [x, y, z] = *location;
        if x >= config.world_x || y >= config.world_y || z >= config.world_z {
            return Err(invariant(
                "population_locations",
                format!(
                    "({x}, {y}, {z}) for {name:?} lies outside the {}x{}x{} world",
                    config.world_x, config.world_y, config.world_z
                ),
            ));
        }
    }
    if config.cytoplasm_size > config.max_cytoplasm_size {
        return Err(invariant(
            "cytoplasm_size",
            format!(
                "{} exceeds max_cytoplasm_size {}",
                config.cytoplasm_size, config.max_cytoplasm_size
            ),
        ));
    }
    if !(config.fossilized_ratio > 0.0 && config.fossilized_ratio <= 1.0) {
        return Err(invariant(
            "fossilized_ratio",
            format!("must lie in (0, 1], got {}", config.fossilized_ratio),
        ));
    }
    for (key, map) in [
        ("fossil_files", &config.fossil_files),
        ("result_files", &config.result_files),
    ] {
        for name in &config.population_names {
            if !map.contains_key(name) {
                return Err(invariant(
                    key,
                    format!("no entry for population {name:?}"),
                ));
            }
        }
    }
    Ok(())
}

/// Builds the enabled-opcode table the config selects, reading the toggle
/// file when the version asks for one.
pub fn instruction_table(config: &SimulationConfig) -> Result<OpcodeTable, ConfigError> {
    let toggle_text = if config.ragaraja_version == RagarajaVersion::UserDefined {
        let path = &config.user_defined_instructions;
        Some(
            fs::read_to_string(path).map_err(|e| ConfigError::InstructionFile {
                path: path.clone(),
                reason: e.to_string(),
            })?,
        )
    } else {
        None
    };
    isa::build_instruction_set(config.ragaraja_version, toggle_text.as_deref()).map_err(|source| {
        ConfigError::InstructionSet {
            path: config.user_defined_instructions.clone(),
            source,
        }
    })
}

#[cfg(test)]
pub(crate) mod tests {
    use super::*;

    /// A parameter file with every key at its stock value, single-line
    /// lists for easy editing in tests.
    pub(crate) fn stock_text() -> String {
        let symbols = vec!["'0'"; 58].join(", ");
        format!(
            "initial_chromosome = [{symbols}]\n\
             background_mutation_rate = 0.1\n\
             additional_mutation_rate = 0\n\
             cytoplasm_size = 50\n\
             max_cytoplasm_size = 200\n\
             clean_cytoplasm = True\n\
             max_codon = 2000\n\
             population_names = ['pop1', 'pop2']\n\
             population_size = 100\n\
             world_x = 5\n\
             world_y = 5\n\
             world_z = 5\n\
             population_locations = [(0,0,0), (4,4,4)]\n\
             maximum_generations = 500\n\
             fossilized_frequency = 100\n\
             fossilized_ratio = 0.01\n\
             fossil_files = {{'pop1': 'pop1', 'pop2': 'pop2'}}\n\
             print_frequency = 10\n\
             result_files = {{'pop1': 'pop1', 'pop2': 'pop2'}}\n\
             ragaraja_version = 0.1\n\
             user_defined_instructions = 'ragaraja_instructions.txt'\n\
             eco_buried_frequency = 500\n\
             eco_burial_file = 'eco'\n"
        )
    }

    fn edit(from: &str, to: &str) -> String {
        let text = stock_text();
        assert!(text.contains(from), "stock text lacks {from:?}");
        text.replace(from, to)
    }

    #[test]
    fn stock_parameters_make_a_125_cell_world_with_two_populations_of_100() {
        let config = load_config(&stock_text()).unwrap();
        assert_eq!(config.world_x * config.world_y * config.world_z, 125);
        assert_eq!(config.population_names.len(), 2);
        assert_eq!(config.population_size, 100);
        assert_eq!(config.initial_chromosome.len(), 58);
        assert!(config.initial_chromosome.iter().all(|&c| c == '0'));
        assert_eq!(config.rng_seed, 0);
    }

    #[test]
    fn locations_map_to_names_in_order() {
        let config = load_config(&stock_text()).unwrap();
        assert_eq!(config.population_locations, vec![[0, 0, 0], [4, 4, 4]]);
        assert_eq!(config.population_names, vec!["pop1", "pop2"]);
    }

    #[test]
    fn location_outside_the_world_is_rejected_by_key_name() {
        let text = edit("population_locations = [(0,0,0), (4,4,4)]",
                        "population_locations = [(0,0,0), (9,9,9)]");
        let err = load_config(&text).unwrap_err();
        assert!(matches!(
            &err,
            ConfigError::Invariant { key, .. } if key == "population_locations"
        ));
        assert!(err.to_string().contains("(9, 9, 9)"));
    }

    #[test]
    fn missing_key_is_named() {
        let text = stock_text().replace("max_codon = 2000\n", "");
        let err = load_config(&text).unwrap_err();
        assert!(matches!(&err, ConfigError::MissingKey { key } if key == "max_codon"));
    }

    #[test]
    fn type_mismatch_is_named() {
        let text = edit("population_size = 100", "population_size = 'many'");
        let err = load_config(&text).unwrap_err();
        assert!(matches!(&err, ConfigError::BadValue { key, .. } if key == "population_size"));
    }

    #[test]
    fn rng_seed_defaults_to_zero_and_parses_when_present() {
        assert_eq!(load_config(&stock_text()).unwrap().rng_seed, 0);
        let text = format!("{}rng_seed = 99\n", stock_text());
        assert_eq!(load_config(&text).unwrap().rng_seed, 99);
    }

    #[test]
    fn bracketed_values_continue_across_lines() {
        let text = edit(
            "population_names = ['pop1', 'pop2']",
            "population_names = ['pop1',\n    'pop2']",
        );
        let config = load_config(&text).unwrap();
        assert_eq!(config.population_names, vec!["pop1", "pop2"]);
    }

    #[test]
    fn comments_and_blank_lines_are_ignored() {
        let text = format!(
            "# stock parameters\n\n{}\n# trailing note\n",
            edit("world_x = 5", "world_x = 5  # grid width")
        );
        assert!(load_config(&text).is_ok());
    }

    #[test]
    fn hash_inside_a_string_is_not_a_comment() {
        let text = edit("eco_burial_file = 'eco'", "eco_burial_file = 'eco#1'");
        assert_eq!(load_config(&text).unwrap().eco_burial_file, "eco#1");
    }

    #[test]
    fn cytoplasm_larger_than_its_ceiling_is_rejected() {
        let text = edit("cytoplasm_size = 50", "cytoplasm_size = 500");
        let err = load_config(&text).unwrap_err();
        assert!(matches!(&err, ConfigError::Invariant { key, .. } if key == "cytoplasm_size"));
    }

    #[test]
    fn every_population_needs_fossil_and_result_prefixes() {
        let text = edit(
            "fossil_files = {'pop1': 'pop1', 'pop2': 'pop2'}",
            "fossil_files = {'pop1': 'pop1'}",
        );
        let err = load_config(&text).unwrap_err();
        assert!(matches!(&err, ConfigError::Invariant { key, .. } if key == "fossil_files"));
        assert!(err.to_string().contains("pop2"));
    }

    #[test]
    fn duplicate_and_unknown_keys_are_rejected_with_line_numbers() {
        let dup = format!("{}world_x = 7\n", stock_text());
        assert!(matches!(
            load_config(&dup).unwrap_err(),
            ConfigError::DuplicateKey { key, .. } if key == "world_x"
        ));
        let unknown = format!("{}warp_speed = 9\n", stock_text());
        assert!(matches!(
            load_config(&unknown).unwrap_err(),
            ConfigError::UnknownKey { key, .. } if key == "warp_speed"
        ));
    }

    #[test]
    fn versions_parse_and_gibberish_is_rejected() {
        for (text, version) in [
            ("0.1", RagarajaVersion::NucleotideSubset),
            ("1", RagarajaVersion::Full),
            ("0", RagarajaVersion::UserDefined),
        ] {
            let config = load_config(&edit(
                "ragaraja_version = 0.1",
                &format!("ragaraja_version = {text}"),
            ))
            .unwrap();
            assert_eq!(config.ragaraja_version, version);
        }
        let err = load_config(&edit("ragaraja_version = 0.1", "ragaraja_version = 2"))
            .unwrap_err();
        assert!(matches!(&err, ConfigError::BadValue { key, .. } if key == "ragaraja_version"));
    }

    #[test]
    fn lists_and_tuples_are_interchangeable_for_locations() {
        let text = edit(
            "population_locations = [(0,0,0), (4,4,4)]",
            "population_locations = [[0, 0, 0], [4, 4, 4]]",
        );
        let config = load_config(&text).unwrap();
        assert_eq!(config.population_locations, vec![[0, 0, 0], [4, 4, 4]]);
    }

    #[test]
    fn negative_additional_rate_is_allowed() {
        let text = edit(
            "additional_mutation_rate = 0",
            "additional_mutation_rate = -0.05",
        );
        assert_eq!(
            load_config(&text).unwrap().additional_mutation_rate,
            -0.05
        );
    }

    #[test]
    fn instruction_table_honours_the_version() {
        let config = load_config(&stock_text()).unwrap();
        assert_eq!(instruction_table(&config).unwrap().enabled_count(), 16);
        let full = load_config(&edit("ragaraja_version = 0.1", "ragaraja_version = 1")).unwrap();
        assert_eq!(instruction_table(&full).unwrap().enabled_count(), 347);
    }

    #[test]
    fn missing_toggle_file_is_a_named_config_error() {
        let config = load_config(&edit(
            "ragaraja_version = 0.1",
            "ragaraja_version = 0",
        ))
        .unwrap();
        let err = instruction_table(&config).unwrap_err();
        assert!(err.to_string().contains("ragaraja_instructions.txt"));
    }
}
