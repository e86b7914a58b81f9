//! The register machine that executes a genome.
//!
//! A machine owns four data structures: the `source` tape (a string of
//! 3-digit codons, read left to right), the working `tape` of real numbers
//! (an organism's cytoplasm), an `input` list and an `output` list, plus 99
//! general-purpose registers. Execution halts when the source is exhausted,
//! when the instruction budget runs out, or when an instruction faults.
//!
//! A faulting instruction commits nothing: the machine stops with
//! `halt_reason = Trapped(kind)` and the state of the last successfully
//! completed instruction. Every handler therefore validates its fault
//! conditions before mutating anything.

use std::fmt;

use rand::Rng;

use crate::isa::OpcodeTable;

/// The four fault classes an instruction can raise.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum TrapKind {
    /// A read past the end of the tape, output list, or input list.
    IndexOutOfRange,
    /// Division or modulus with a zero divisor, or a mean over zero values.
    ZeroDivision,
    /// A finite operand produced a result beyond double-precision range.
    Overflow,
    /// An argument outside the mathematical domain of the function.
    DomainError,
}

impl fmt::Display for TrapKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let name = match self {
            TrapKind::IndexOutOfRange => "index-out-of-range",
            TrapKind::ZeroDivision => "zero-division",
            TrapKind::Overflow => "overflow",
            TrapKind::DomainError => "domain-error",
        };
        f.write_str(name)
    }
}

/// Why (or whether) execution has stopped.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum HaltReason {
    Running,
    EndOfSource,
    BudgetExhausted,
    Trapped(TrapKind),
}

impl fmt::Display for HaltReason {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            HaltReason::Running => f.write_str("running"),
            HaltReason::EndOfSource => f.write_str("end-of-source"),
            HaltReason::BudgetExhausted => f.write_str("budget-exhausted"),
            HaltReason::Trapped(kind) => write!(f, "trapped({kind})"),
        }
    }
}

/// Complete execution state of one machine.
#[derive(Debug, Clone)]
pub struct MachineState {
    /// Working tape of real numbers; never empty, never above `max_tape_size`.
    pub tape: Vec<f64>,
    /// Index of the current tape cell; always within the tape.
    pub tape_pointer: usize,
    /// The codon string under execution.
    pub source: String,
    /// Byte offset of the next codon; always a multiple of 3.
    pub source_pointer: usize,
    pub input: Vec<f64>,
    pub output: Vec<f64>,
    /// General-purpose registers, zeroed at the start of every run.
    pub registers: [f64; 99],
    /// Number of instructions completed so far.
    pub instruction_count: usize,
    /// Upper bound on tape growth.
    pub max_tape_size: usize,
    pub halt_reason: HaltReason,
}

impl MachineState {
    pub fn new(source: &str, input: Vec<f64>, tape: Vec<f64>, max_tape_size: usize) -> Self {
        assert!(!tape.is_empty(), "tape must hold at least one cell");
        assert!(
            tape.len() <= max_tape_size,
            "initial tape exceeds max_tape_size"
        );
        MachineState {
            tape,
            tape_pointer: 0,
            source: source.to_string(),
            source_pointer: 0,
            input,
            output: Vec::new(),
            registers: [0.0; 99],
            instruction_count: 0,
            max_tape_size,
            halt_reason: HaltReason::Running,
        }
    }

    /// Whole codons left between the source pointer and the end of the
    /// source. A trailing fragment shorter than one codon counts as zero.
    pub fn remaining_codons(&self) -> usize {
        self.source.len().saturating_sub(self.source_pointer) / 3
    }
}

/// One completed instruction, as seen by a trace observer.
#[derive(Debug, Clone)]
pub struct TraceEvent<'a> {
    /// 1-based ordinal of the instruction (the count after completion).
    pub instruction_count: usize,
    pub codon: &'a str,
    /// Tape pointer after the instruction.
    pub tape_pointer: usize,
    /// Source pointer after the instruction.
    pub source_pointer: usize,
    /// Current cell value before the instruction ran.
    pub cell_before: f64,
    /// Value of the (possibly different) current cell afterwards.
    pub cell_after: f64,
}

/// Runs a codon string to completion and returns the final machine state.
///
/// Faults never propagate: they only set `halt_reason`. The tape must hold
/// at least one cell and at most `max_tape_size` cells.
pub fn interpret<R: Rng + ?Sized>(
    source: &str,
    table: &OpcodeTable,
    input: Vec<f64>,
    tape: Vec<f64>,
    max_tape_size: usize,
    max_codon: usize,
    rng: &mut R,
) -> MachineState {
    interpret_traced(
        source,
        table,
        input,
        tape,
        max_tape_size,
        max_codon,
        rng,
        &mut |_| {},
    )
}

/// Like [`interpret`], but calls `observer` after every completed
/// instruction.
#[allow(clippy::too_many_arguments)]
pub fn interpret_traced<R: Rng + ?Sized>(
    source: &str,
    table: &OpcodeTable,
    input: Vec<f64>,
    tape: Vec<f64>,
    max_tape_size: usize,
    max_codon: usize,
    rng: &mut R,
    observer: &mut dyn FnMut(TraceEvent),
) -> MachineState {
    let mut state = MachineState::new(source, input, tape, max_tape_size);
    resume(&mut state, table, max_codon, rng, observer);
    state
}

/// Drives a prepared machine until it halts. Useful for starting from a
/// hand-built state (pointer mid-tape, preloaded lists or registers).
pub fn resume<R: Rng + ?Sized>(
    state: &mut MachineState,
    table: &OpcodeTable,
    max_codon: usize,
    rng: &mut R,
    observer: &mut dyn FnMut(TraceEvent),
) {
    loop {
        if state.instruction_count >= max_codon {
            state.halt_reason = HaltReason::BudgetExhausted;
            break;
        }
        let sp = state.source_pointer;
        if sp + 3 > state.source.len() {
            state.halt_reason = HaltReason::EndOfSource;
            break;
        }
        let codon_bytes: [u8; 3] = state.source.as_bytes()[sp..sp + 3]
            .try_into()
            .expect("three bytes");
        let cell_before = state.tape[state.tape_pointer];
        match std::str::from_utf8(&codon_bytes) {
            Ok(codon) => {
                // The codon text is copied to the stack so the handler may
                // mutate the source-owning state freely.
                let codon = codon.to_owned();
                apply_opcode(state, &codon, table, rng);
                if state.halt_reason != HaltReason::Running {
                    break;
                }
                observer(TraceEvent {
                    instruction_count: state.instruction_count,
                    codon: &codon,
                    tape_pointer: state.tape_pointer,
                    source_pointer: state.source_pointer,
                    cell_before,
                    cell_after: state.tape[state.tape_pointer],
                });
            }
            Err(_) => {
                // A byte triple that is not even text cannot name an
                // instruction; treat it like any undefined codon.
                state.source_pointer += 3;
                state.instruction_count += 1;
            }
        }
    }
}

/// Executes one instruction cycle: decode `codon`, run its semantics, and
/// advance the source pointer and instruction count.
///
/// Undefined or disabled codons advance without any other effect. A fault
/// leaves the entire state untouched except `halt_reason`.
pub fn apply_opcode<R: Rng + ?Sized>(
    state: &mut MachineState,
    codon: &str,
    table: &OpcodeTable,
    rng: &mut R,
) {
    debug_assert_eq!(state.halt_reason, HaltReason::Running);
    let decoded = parse_codon(codon).filter(|&c| table.is_enabled(c));
    match decoded {
        None => {
            state.source_pointer += 3;
            state.instruction_count += 1;
        }
        Some(opcode) => match execute(state, opcode, rng) {
            Ok(extra_advance) => {
                state.source_pointer += 3 + extra_advance;
                state.instruction_count += 1;
            }
            Err(kind) => {
                state.halt_reason = HaltReason::Trapped(kind);
            }
        },
    }
}

pub(crate) fn parse_codon(text: &str) -> Option<u16> {
    let b = text.as_bytes();
    if b.len() == 3 && b.iter().all(u8::is_ascii_digit) {
        Some(u16::from(b[0] - b'0') * 100 + u16::from(b[1] - b'0') * 10 + u16::from(b[2] - b'0'))
    } else {
        None
    }
}

/// Runs the semantics of one enabled opcode. Returns the extra source
/// advance (beyond the standard +3) requested by the skip codons, or the
/// fault that prevented the instruction from completing.
fn execute<R: Rng + ?Sized>(
    state: &mut MachineState,
    opcode: u16,
    rng: &mut R,
) -> Result<usize, TrapKind> {
    use TrapKind::*;

    match opcode {
        // -- tape pointer movement --------------------------------------
        0 => move_pointer(state, 1),
        1 => move_pointer(state, 5),
        2 => move_pointer(state, 10),
        4 => move_pointer(state, -1),
        5 => move_pointer(state, -5),
        6 => move_pointer(state, -10),
        // Forward/backward by the square of the current cell, fractional
        // part dropped (4.2 squared is 17.64, so 17 cells).
        3 => {
            let steps = (current(state) * current(state)).floor();
            jump_to(state, state.tape_pointer as f64 + steps);
        }
        7 => {
            let steps = (current(state) * current(state)).floor();
            jump_to(state, state.tape_pointer as f64 - steps);
        }
        // Skip over the next 1/5/10 instructions when the landing point is
        // still inside the source; otherwise only the usual advance occurs.
        23 => return Ok(skip_distance(state, 1)),
        24 => return Ok(skip_distance(state, 5)),
        25 => return Ok(skip_distance(state, 10)),
        43 => state.tape_pointer = 0,
        44 => state.tape_pointer = state.tape.len() - 1,
        // Jump to the cell indexed by the last output value, modulo tape
        // length.
        45 => {
            let target = *state.output.last().ok_or(IndexOutOfRange)?;
            jump_to(state, target.trunc());
        }
        61 => {
            let delta = current(state).trunc();
            jump_to(state, state.tape_pointer as f64 + delta);
        }
        62 => {
            let delta = current(state).trunc();
            jump_to(state, state.tape_pointer as f64 - delta);
        }
        // Jump to the midpoint / first quartile / third quartile, rounding
        // down on odd lengths (a 285-cell tape gives 142, 71, 213).
        140 => state.tape_pointer = state.tape.len() / 2,
        141 => state.tape_pointer = state.tape.len() / 4,
        142 => state.tape_pointer = 3 * state.tape.len() / 4,
        143 => jump_to(state, current(state).trunc()),

        // -- current-cell arithmetic ------------------------------------
        8 => *current_mut(state) += 1.0,
        9 => *current_mut(state) += 5.0,
        10 => *current_mut(state) += 10.0,
        11 => *current_mut(state) -= 1.0,
        12 => *current_mut(state) -= 5.0,
        13 => *current_mut(state) -= 10.0,
        32 => *current_mut(state) *= 2.0,
        33 => *current_mut(state) /= 2.0,
        80 => *current_mut(state) = current(state).floor(),
        84 => *current_mut(state) = 0.0,
        85 => *current_mut(state) = -1.0,
        86 => *current_mut(state) = 1.0,
        87 => *current_mut(state) = -current(state),
        144 => *current_mut(state) /= 10.0,
        145 => {
            let scaled = checked_magnitude(current(state) * 10.0, current(state).is_finite())?;
            *current_mut(state) = scaled;
        }
        97 => *current_mut(state) = std::f64::consts::PI,
        98 => *current_mut(state) = std::f64::consts::E,

        // -- tape restructuring -----------------------------------------
        16 => grow_tape(state, 1),
        17 => grow_tape(state, 10),
        18 => shrink_tape(state, 1),
        19 => shrink_tape(state, 10),
        34 => {
            if state.tape.len() < state.max_tape_size {
                state.tape.insert(state.tape_pointer + 1, 0.0);
            }
        }
        35 => delete_current(state, false),
        36 => delete_current(state, true),
        // Reverse the tape contents; the pointer index stays put.
        46 => state.tape.reverse(),
        81 => {
            if state.tape_pointer + 1 >= state.tape.len() {
                return Err(IndexOutOfRange);
            }
            let tp = state.tape_pointer;
            state.tape.swap(tp, tp + 1);
        }
        // Rotate so the current cell leads; pointer follows it to index 0.
        161 => {
            let tp = state.tape_pointer;
            state.tape.rotate_left(tp);
            state.tape_pointer = 0;
        }
        // Rotate so the current cell trails; pointer follows it to the end.
        162 => {
            let tp = state.tape_pointer;
            state.tape.rotate_left(tp + 1);
            state.tape_pointer = state.tape.len() - 1;
        }
        163 => {
            let v = state.tape.remove(state.tape_pointer);
            state.tape.insert(0, v);
            state.tape_pointer = 0;
        }
        164 => {
            let v = state.tape.remove(state.tape_pointer);
            state.tape.push(v);
            state.tape_pointer = state.tape.len() - 1;
        }

        // -- input/output lists -----------------------------------------
        20 => {
            let v = current(state);
            state.output.push(v);
        }
        21 => state.output.push(state.tape_pointer as f64),
        22 => state.output.push(state.source_pointer as f64),
        37 => {
            let v = state.output.pop().ok_or(IndexOutOfRange)?;
            *current_mut(state) = v;
        }
        38 => {
            let v = *state.output.last().ok_or(IndexOutOfRange)?;
            *current_mut(state) = v;
        }
        39 => {
            if state.output.is_empty() {
                return Err(IndexOutOfRange);
            }
            let v = state.output.remove(0);
            *current_mut(state) = v;
        }
        40 => {
            let v = *state.output.first().ok_or(IndexOutOfRange)?;
            *current_mut(state) = v;
        }
        41 => {
            if state.output.is_empty() {
                return Err(IndexOutOfRange);
            }
            state.output.remove(0);
        }
        42 => {
            state.output.pop().ok_or(IndexOutOfRange)?;
        }
        47 => state.output.reverse(),
        // Input reads never fault: an empty input list reads as zero.
        63 => {
            let v = if state.input.is_empty() {
                0.0
            } else {
                state.input.remove(0)
            };
            *current_mut(state) = v;
        }
        64 => {
            let v = state.input.first().copied().unwrap_or(0.0);
            *current_mut(state) = v;
        }

        // -- randomized single-step codons -------------------------------
        50..=60 => {
            let options: &[u16] = match opcode {
                50 => &[8, 0],
                51 => &[11, 4],
                52 => &[0, 4],
                53 => &[8, 11],
                54 => &[0, 11],
                55 => &[4, 8],
                56 => &[0, 4, 11],
                57 => &[0, 8, 11],
                58 => &[4, 8, 11],
                59 => &[0, 4, 8],
                _ => &[0, 4, 8, 11],
            };
            let choice = options[rng.random_range(0..options.len())];
            return execute(state, choice, rng);
        }

        // -- binary arithmetic against the next cell or the input list ---
        // The second operand is combined with the current cell and the
        // result replaces the current cell; for subtraction, division and
        // modulus the current cell is the right-hand side.
        65 => binary_next(state, |cell, other| Ok(cell + other))?,
        66 => binary_input_first(state, |cell, other| Ok(cell + other))?,
        67 => binary_input_last(state, |cell, other| Ok(cell + other))?,
        68 => binary_next(state, |cell, other| Ok(other - cell))?,
        69 => binary_input_first(state, |cell, other| Ok(other - cell))?,
        70 => binary_input_last(state, |cell, other| Ok(other - cell))?,
        71 => binary_next(state, |cell, other| Ok(cell * other))?,
        72 => binary_input_first(state, |cell, other| Ok(cell * other))?,
        73 => binary_input_last(state, |cell, other| Ok(cell * other))?,
        74 => binary_next(state, divide_by_cell)?,
        75 => binary_input_first(state, divide_by_cell)?,
        76 => binary_input_last(state, divide_by_cell)?,
        77 => binary_next(state, modulo_by_cell)?,
        78 => binary_input_first(state, modulo_by_cell)?,
        79 => binary_input_last(state, modulo_by_cell)?,

        // -- unary math on the current cell -------------------------------
        88 => *current_mut(state) = current(state).sin(),
        89 => *current_mut(state) = current(state).cos(),
        90 => *current_mut(state) = current(state).tan(),
        91 => {
            let x = domain(current(state), |x| (-1.0..=1.0).contains(&x))?;
            *current_mut(state) = x.asin();
        }
        92 => {
            let x = domain(current(state), |x| (-1.0..=1.0).contains(&x))?;
            *current_mut(state) = x.acos();
        }
        93 => *current_mut(state) = current(state).atan(),
        94 => {
            if current(state) == 0.0 {
                return Err(ZeroDivision);
            }
            *current_mut(state) = current(state).recip();
        }
        95 => {
            let x = domain(current(state), |x| !(x < 0.0))?;
            *current_mut(state) = x.sqrt();
        }
        96 => {
            let x = domain(current(state), |x| x > 0.0)?;
            *current_mut(state) = x.ln();
        }
        99 => *current_mut(state) = current(state).sinh(),
        100 => *current_mut(state) = current(state).cosh(),
        101 => *current_mut(state) = current(state).tanh(),
        102 => *current_mut(state) = current(state).asinh(),
        103 => {
            let x = domain(current(state), |x| x >= 1.0)?;
            *current_mut(state) = x.acosh();
        }
        104 => {
            let x = domain(current(state), |x| x > -1.0 && x < 1.0)?;
            *current_mut(state) = x.atanh();
        }
        105 => *current_mut(state) = current(state).to_degrees(),
        106 => *current_mut(state) = current(state).to_radians(),
        107 => {
            let x = current(state);
            *current_mut(state) =
                checked_magnitude(x.powf(std::f64::consts::E), x.is_finite())?;
        }
        108 => {
            let x = current(state);
            *current_mut(state) = checked_magnitude(x.exp(), x.is_finite())?;
        }
        109 => {
            let x = current(state);
            *current_mut(state) = checked_magnitude(10f64.powf(x), x.is_finite())?;
        }
        110 => {
            let exp = next_cell(state)?;
            let x = current(state);
            *current_mut(state) =
                checked_magnitude(x.powf(exp), x.is_finite() && exp.is_finite())?;
        }
        111 => {
            let degree = next_cell(state)?;
            let x = current(state);
            *current_mut(state) =
                checked_magnitude(x.powf(degree.recip()), x.is_finite() && degree.is_finite())?;
        }
        112 => *current_mut(state) = libm::erf(current(state)),
        113 => *current_mut(state) = libm::erfc(current(state)),
        114 => {
            let t = current(state).trunc();
            if t.is_nan() || t < 0.0 {
                return Err(DomainError);
            }
            *current_mut(state) = factorial_checked(t)?;
        }
        115 => {
            let t = current(state).trunc().abs();
            if t.is_nan() {
                return Err(DomainError);
            }
            *current_mut(state) = factorial_checked(t)?;
        }
        116 => {
            let other = next_cell(state)?;
            *current_mut(state) = current(state).hypot(other);
        }
        117 => {
            let base = next_cell(state)?;
            let x = current(state);
            if x <= 0.0 || base <= 0.0 || x.is_nan() || base.is_nan() {
                return Err(DomainError);
            }
            *current_mut(state) = x.ln() / base.ln();
        }

        // -- boolean logic (positive is true, result stored as 1 or 0) ----
        120 => logic_next(state, |a, b| truthy(a) && truthy(b))?,
        121 => logic_next(state, |a, b| truthy(a) || truthy(b))?,
        122 => *current_mut(state) = bool_value(!truthy(current(state))),
        123 => logic_next(state, |a, b| a < b)?,
        124 => logic_next(state, |a, b| a > b)?,
        125 => logic_next(state, |a, b| a == b)?,
        126 => logic_next(state, |a, b| a != b)?,
        127 => logic_next(state, |a, b| a <= b)?,
        128 => logic_next(state, |a, b| a >= b)?,

        // -- whole-tape aggregates and sweeps -----------------------------
        146 => {
            let total: f64 = state.tape[state.tape_pointer + 1..].iter().sum();
            *current_mut(state) = total;
        }
        147 => {
            let total: f64 = state.tape[state.tape_pointer..].iter().sum();
            *current_mut(state) = total;
        }
        150 => {
            let total: f64 = state.tape.iter().sum();
            *current_mut(state) = total;
        }
        151 => *current_mut(state) = mean_of(&state.tape[state.tape_pointer + 1..])?,
        152 => *current_mut(state) = mean_of(&state.tape[state.tape_pointer..])?,
        153 => *current_mut(state) = mean_of(&state.tape[..state.tape_pointer])?,
        154 => *current_mut(state) = mean_of(&state.tape[..=state.tape_pointer])?,
        155 => state.tape.iter_mut().for_each(|v| *v /= 2.0),
        156 => state.tape.iter_mut().for_each(|v| *v *= 2.0),
        157 => state.tape.iter_mut().for_each(|v| *v /= 10.0),
        158 => scale_all_checked(state, 10.0)?,
        159 => state.tape.iter_mut().for_each(|v| *v /= 100.0),
        160 => scale_all_checked(state, 100.0)?,
        165 => state.tape.iter_mut().for_each(|v| *v = -*v),
        166 => {
            let tp = state.tape_pointer;
            state.tape[tp + 1..].iter_mut().for_each(|v| *v *= *v);
        }
        167 => {
            let tp = state.tape_pointer;
            state.tape[..tp].iter_mut().for_each(|v| *v *= *v);
        }
        168 => state.tape.iter_mut().for_each(|v| *v *= *v),
        169 => sqrt_range(state, 0, state.tape.len())?,
        170 => sqrt_range(state, state.tape_pointer + 1, state.tape.len())?,
        171 => sqrt_range(state, 0, state.tape_pointer)?,
        189 => state.tape.iter_mut().for_each(|v| *v = 0.0),
        // Standard deviation over the whole tape, treated as a complete
        // population (divide by n, not n-1).
        196 => {
            let mean = state.tape.iter().sum::<f64>() / state.tape.len() as f64;
            let var = state
                .tape
                .iter()
                .map(|v| (v - mean) * (v - mean))
                .sum::<f64>()
                / state.tape.len() as f64;
            *current_mut(state) = var.sqrt();
        }
        197 => {
            if state.tape.iter().any(|&v| v <= 0.0) {
                return Err(DomainError);
            }
            let log_mean =
                state.tape.iter().map(|v| v.ln()).sum::<f64>() / state.tape.len() as f64;
            *current_mut(state) = log_mean.exp();
        }
        198 => {
            if state.tape.iter().any(|&v| v == 0.0) {
                return Err(DomainError);
            }
            let recip_sum: f64 = state.tape.iter().map(|v| v.recip()).sum();
            if recip_sum == 0.0 {
                return Err(ZeroDivision);
            }
            *current_mut(state) = state.tape.len() as f64 / recip_sum;
        }

        // -- register file -------------------------------------------------
        201..=299 => {
            state.registers[usize::from(opcode - 201)] = current(state);
        }
        301..=399 => {
            *current_mut(state) = state.registers[usize::from(opcode - 301)];
        }

        // Enabled sets only ever contain defined codons, but stay total.
        _ => {}
    }
    Ok(0)
}

fn current(state: &MachineState) -> f64 {
    state.tape[state.tape_pointer]
}

fn current_mut(state: &mut MachineState) -> &mut f64 {
    &mut state.tape[state.tape_pointer]
}

fn next_cell(state: &MachineState) -> Result<f64, TrapKind> {
    state
        .tape
        .get(state.tape_pointer + 1)
        .copied()
        .ok_or(TrapKind::IndexOutOfRange)
}

fn move_pointer(state: &mut MachineState, delta: i64) {
    let len = state.tape.len() as i64;
    state.tape_pointer = (state.tape_pointer as i64 + delta).rem_euclid(len) as usize;
}

/// Moves the tape pointer to `target` wrapped into the tape, where `target`
/// is an integer-valued float (possibly enormous, infinite, or NaN after
/// arithmetic on cell values). Non-finite targets land on cell 0.
fn jump_to(state: &mut MachineState, target: f64) {
    let len = state.tape.len();
    let len_f = len as f64;
    let mut r = target % len_f;
    if r < 0.0 {
        r += len_f;
    }
    let idx = r as usize; // NaN becomes 0
    state.tape_pointer = if idx >= len { 0 } else { idx };
}

/// Extra source advance for the skip codons: 3·k more bytes, but only when
/// the landing point stays within the source.
fn skip_distance(state: &MachineState, instructions: usize) -> usize {
    let extra = 3 * instructions;
    if state.source_pointer + 3 + extra <= state.source.len() {
        extra
    } else {
        0
    }
}

fn grow_tape(state: &mut MachineState, cells: usize) {
    let room = state.max_tape_size - state.tape.len();
    let add = cells.min(room);
    state.tape.extend(std::iter::repeat(0.0).take(add));
}

fn shrink_tape(state: &mut MachineState, cells: usize) {
    let keep = state.tape.len().saturating_sub(cells).max(1);
    state.tape.truncate(keep);
    if state.tape_pointer >= keep {
        state.tape_pointer = keep - 1;
    }
}

fn delete_current(state: &mut MachineState, to_output: bool) {
    if state.tape.len() == 1 {
        return;
    }
    let v = state.tape.remove(state.tape_pointer);
    if to_output {
        state.output.push(v);
    }
    if state.tape_pointer >= state.tape.len() {
        state.tape_pointer = state.tape.len() - 1;
    }
}

fn divide_by_cell(cell: f64, other: f64) -> Result<f64, TrapKind> {
    if cell == 0.0 {
        return Err(TrapKind::ZeroDivision);
    }
    Ok(other / cell)
}

/// Remainder with the sign of the divisor (the current cell), so the result
/// of `other mod cell` lies in `[0, cell)` for positive cells.
fn modulo_by_cell(cell: f64, other: f64) -> Result<f64, TrapKind> {
    if cell == 0.0 {
        return Err(TrapKind::ZeroDivision);
    }
    let r = other % cell;
    if r != 0.0 && (r < 0.0) != (cell < 0.0) {
        Ok(r + cell)
    } else {
        Ok(r)
    }
}

fn binary_next(
    state: &mut MachineState,
    op: impl Fn(f64, f64) -> Result<f64, TrapKind>,
) -> Result<(), TrapKind> {
    let other = next_cell(state)?;
    let result = op(current(state), other)?;
    *current_mut(state) = result;
    Ok(())
}

fn binary_input_first(
    state: &mut MachineState,
    op: impl Fn(f64, f64) -> Result<f64, TrapKind>,
) -> Result<(), TrapKind> {
    let other = *state.input.first().ok_or(TrapKind::IndexOutOfRange)?;
    let result = op(current(state), other)?;
    *current_mut(state) = result;
    Ok(())
}

fn binary_input_last(
    state: &mut MachineState,
    op: impl Fn(f64, f64) -> Result<f64, TrapKind>,
) -> Result<(), TrapKind> {
    let other = *state.input.last().ok_or(TrapKind::IndexOutOfRange)?;
    let result = op(current(state), other)?;
    *current_mut(state) = result;
    Ok(())
}

fn domain(x: f64, ok: impl Fn(f64) -> bool) -> Result<f64, TrapKind> {
    if x.is_nan() || !ok(x) {
        Err(TrapKind::DomainError)
    } else {
        Ok(x)
    }
}

/// Overflow policy for the power/factorial/scaling family: a finite input
/// that lands outside double range faults, while an already-infinite input
/// flows through untouched.
fn checked_magnitude(result: f64, operands_finite: bool) -> Result<f64, TrapKind> {
    if result.is_infinite() && operands_finite {
        Err(TrapKind::Overflow)
    } else {
        Ok(result)
    }
}

fn factorial_checked(n: f64) -> Result<f64, TrapKind> {
    // 171! overflows f64; 170! is the last representable value.
    if n > 170.0 {
        return Err(TrapKind::Overflow);
    }
    let mut acc = 1.0;
    let mut k = 2.0;
    while k <= n {
        acc *= k;
        k += 1.0;
    }
    Ok(acc)
}

fn truthy(v: f64) -> bool {
    v > 0.0
}

fn bool_value(b: bool) -> f64 {
    if b {
        1.0
    } else {
        0.0
    }
}

fn logic_next(state: &mut MachineState, op: impl Fn(f64, f64) -> bool) -> Result<(), TrapKind> {
    let other = next_cell(state)?;
    let result = bool_value(op(current(state), other));
    *current_mut(state) = result;
    Ok(())
}

fn mean_of(values: &[f64]) -> Result<f64, TrapKind> {
    if values.is_empty() {
        return Err(TrapKind::ZeroDivision);
    }
    Ok(values.iter().sum::<f64>() / values.len() as f64)
}

fn scale_all_checked(state: &mut MachineState, factor: f64) -> Result<(), TrapKind> {
    if state
        .tape
        .iter()
        .any(|v| (v * factor).is_infinite() && v.is_finite())
    {
        return Err(TrapKind::Overflow);
    }
    state.tape.iter_mut().for_each(|v| *v *= factor);
    Ok(())
}

fn sqrt_range(state: &mut MachineState, from: usize, to: usize) -> Result<(), TrapKind> {
    if state.tape[from..to].iter().any(|&v| v < 0.0) {
        return Err(TrapKind::DomainError);
    }
    state.tape[from..to].iter_mut().for_each(|v| *v = v.sqrt());
    Ok(())
}
