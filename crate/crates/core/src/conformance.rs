//! Per-opcode conformance suite.
//!
//! Every defined codon carries a set of behavioral fixtures: a prepared
//! machine state, a short program, and the exact state expected afterwards
//! (including faults). The randomized codons are instead checked for the
//! correct outcome set and a uniform draw distribution (chi-square at
//! significance 0.001 over 10,000 draws).
//!
//! Fixtures always execute against the full instruction table; the table
//! passed to [`run_suite`] only selects which codons get checked. This is
//! how a 16-codon table yields 16 reports without changing any codon's
//! meaning.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::isa::{build_instruction_set, OpcodeTable, RagarajaVersion};
use crate::vm::{resume, HaltReason, MachineState, TrapKind};

/// Outcome of checking one codon.
#[derive(Debug, Clone)]
pub struct CodonReport {
    pub codon: u16,
    pub outcome: Result<(), String>,
}

/// Checks every codon enabled in `table`, in ascending codon order.
pub fn run_suite(table: &OpcodeTable) -> Vec<CodonReport> {
    table
        .enabled_codons()
        .into_iter()
        .map(|codon| CodonReport {
            codon,
            outcome: check_codon(codon),
        })
        .collect()
}

/// Runs all fixtures for one codon.
pub fn check_codon(codon: u16) -> Result<(), String> {
    if let Some(options) = random_step_options(codon) {
        return check_random_codon(codon, options);
    }
    for (index, case) in fixtures(codon).into_iter().enumerate() {
        case.check()
            .map_err(|e| format!("codon {codon:03} fixture {index}: {e}"))?;
    }
    Ok(())
}

/// The outcome sets of the randomized single-step codons.
fn random_step_options(codon: u16) -> Option<&'static [u16]> {
    let options: &[u16] = match codon {
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
        60 => &[0, 4, 8, 11],
        _ => return None,
    };
    Some(options)
}

fn full_table() -> OpcodeTable {
    build_instruction_set(RagarajaVersion::Full, None).expect("full table")
}

/// Draws the codon 10,000 times from a fixed state and verifies that every
/// outcome matches one of the listed base operations and that the draws are
/// uniform (chi-square, significance 0.001).
fn check_random_codon(codon: u16, options: &'static [u16]) -> Result<(), String> {
    const DRAWS: usize = 10_000;
    let critical = match options.len() {
        2 => 10.828, // df = 1
        3 => 13.816, // df = 2
        4 => 16.266, // df = 3
        n => return Err(format!("unsupported option count {n}")),
    };
    let table = full_table();
    // Start mid-tape so each base operation leaves a distinct signature.
    let fresh = || {
        let mut st = MachineState::new("", vec![], vec![0.0; 4], 8);
        st.tape_pointer = 1;
        st
    };
    let mut rng = ChaCha8Rng::seed_from_u64(0xD05E + u64::from(codon));
    let signatures: Vec<(Vec<f64>, usize)> = options
        .iter()
        .map(|&base| {
            let mut st = fresh();
            crate::vm::apply_opcode(&mut st, &format!("{base:03}"), &table, &mut rng);
            (st.tape, st.tape_pointer)
        })
        .collect();
    let codon_text = format!("{codon:03}");
    let mut counts = vec![0usize; options.len()];
    for _ in 0..DRAWS {
        let mut st = fresh();
        crate::vm::apply_opcode(&mut st, &codon_text, &table, &mut rng);
        let sig = (st.tape, st.tape_pointer);
        match signatures.iter().position(|s| *s == sig) {
            Some(i) => counts[i] += 1,
            None => {
                return Err(format!(
                    "codon {codon:03} produced an outcome outside its option set"
                ))
            }
        }
    }
    let expected = DRAWS as f64 / options.len() as f64;
    let chi2: f64 = counts
        .iter()
        .map(|&c| {
            let d = c as f64 - expected;
            d * d / expected
        })
        .sum();
    if chi2 > critical {
        return Err(format!(
            "codon {codon:03} draw distribution not uniform: chi-square {chi2:.3} > {critical} \
             (counts {counts:?})"
        ));
    }
    Ok(())
}

// ---------------------------------------------------------------------------
// Fixture machinery
// ---------------------------------------------------------------------------

struct Fixture {
    source: String,
    tape: Vec<f64>,
    pointer: usize,
    input: Vec<f64>,
    output: Vec<f64>,
    registers: Vec<(usize, f64)>,
    max_tape: usize,
    expect: Expect,
}

#[derive(Default)]
struct Expect {
    halt: Option<HaltReason>,
    pointer: Option<usize>,
    tape: Option<Vec<f64>>,
    cell: Option<(f64, f64)>, // (value, absolute tolerance); 0.0 = exact
    output: Option<Vec<f64>>,
    input: Option<Vec<f64>>,
    count: Option<usize>,
}

fn case(source: &str, tape: &[f64]) -> Fixture {
    Fixture {
        source: source.to_string(),
        tape: tape.to_vec(),
        pointer: 0,
        input: Vec::new(),
        output: Vec::new(),
        registers: Vec::new(),
        max_tape: 512,
        expect: Expect::default(),
    }
}

impl Fixture {
    fn pointer(mut self, p: usize) -> Self {
        self.pointer = p;
        self
    }
    fn input(mut self, v: &[f64]) -> Self {
        self.input = v.to_vec();
        self
    }
    fn output(mut self, v: &[f64]) -> Self {
        self.output = v.to_vec();
        self
    }
    fn register(mut self, index: usize, value: f64) -> Self {
        self.registers.push((index, value));
        self
    }
    fn max_tape(mut self, cap: usize) -> Self {
        self.max_tape = cap;
        self
    }
    fn halts(mut self, h: HaltReason) -> Self {
        self.expect.halt = Some(h);
        self
    }
    fn traps(self, kind: TrapKind) -> Self {
        self.halts(HaltReason::Trapped(kind))
    }
    fn ends_at(mut self, p: usize) -> Self {
        self.expect.pointer = Some(p);
        self
    }
    fn leaves_tape(mut self, t: &[f64]) -> Self {
        self.expect.tape = Some(t.to_vec());
        self
    }
    fn leaves_cell(mut self, v: f64) -> Self {
        self.expect.cell = Some((v, 0.0));
        self
    }
    fn leaves_cell_near(mut self, v: f64, tol: f64) -> Self {
        self.expect.cell = Some((v, tol));
        self
    }
    fn leaves_output(mut self, v: &[f64]) -> Self {
        self.expect.output = Some(v.to_vec());
        self
    }
    fn leaves_input(mut self, v: &[f64]) -> Self {
        self.expect.input = Some(v.to_vec());
        self
    }
    fn counts(mut self, n: usize) -> Self {
        self.expect.count = Some(n);
        self
    }

    fn check(self) -> Result<(), String> {
        let table = full_table();
        let mut st = MachineState::new(&self.source, self.input, self.tape, self.max_tape);
        st.tape_pointer = self.pointer;
        st.output = self.output;
        for (index, value) in &self.registers {
            st.registers[*index] = *value;
        }
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        resume(&mut st, &table, 64, &mut rng, &mut |_| {});

        let expected_halt = self.expect.halt.unwrap_or(HaltReason::EndOfSource);
        if st.halt_reason != expected_halt {
            return Err(format!(
                "halted with {} instead of {expected_halt}",
                st.halt_reason
            ));
        }
        if let Some(p) = self.expect.pointer {
            if st.tape_pointer != p {
                return Err(format!("pointer at {} instead of {p}", st.tape_pointer));
            }
        }
        if let Some(t) = &self.expect.tape {
            if &st.tape != t {
                return Err(format!("tape {:?} instead of {t:?}", st.tape));
            }
        }
        if let Some((v, tol)) = self.expect.cell {
            let got = st.tape[st.tape_pointer];
            let ok = if tol == 0.0 {
                got == v
            } else {
                (got - v).abs() <= tol
            };
            if !ok {
                return Err(format!("cell {got} instead of {v} (tolerance {tol})"));
            }
        }
        if let Some(o) = &self.expect.output {
            if &st.output != o {
                return Err(format!("output {:?} instead of {o:?}", st.output));
            }
        }
        if let Some(i) = &self.expect.input {
            if &st.input != i {
                return Err(format!("input {:?} instead of {i:?}", st.input));
            }
        }
        if let Some(n) = self.expect.count {
            if st.instruction_count != n {
                return Err(format!(
                    "instruction count {} instead of {n}",
                    st.instruction_count
                ));
            }
        }
        Ok(())
    }
}

// ---------------------------------------------------------------------------
// The fixture table
// ---------------------------------------------------------------------------

const LN2: f64 = std::f64::consts::LN_2;
const PI: f64 = std::f64::consts::PI;
const E: f64 = std::f64::consts::E;
const TINY: f64 = 1e-14;

#[allow(clippy::vec_init_then_push)]
fn fixtures(codon: u16) -> Vec<Fixture> {
    use HaltReason::EndOfSource;
    use TrapKind::*;

    // The register file: store into #k, wipe the cell, load back from #k.
    if (201..=299).contains(&codon) {
        let k = codon - 201;
        return vec![
            case(&format!("{codon:03}"), &[2.5]).leaves_tape(&[2.5]),
            case(&format!("009{codon:03}084{:03}", 301 + k), &[0.0]).leaves_tape(&[5.0]),
        ];
    }
    if (301..=399).contains(&codon) {
        let k = usize::from(codon - 301);
        return vec![
            // Registers start zeroed, so a bare load clears the cell.
            case(&format!("{codon:03}"), &[5.0]).leaves_tape(&[0.0]),
            case(&format!("{codon:03}"), &[5.0])
                .register(k, 3.5)
                .leaves_tape(&[3.5]),
        ];
    }

    let c = |src: &str, tape: &[f64]| case(src, tape);
    let own = format!("{codon:03}");
    match codon {
        // -- pointer movement ---------------------------------------------
        0 => vec![
            c(&own, &[0.0; 3]).ends_at(1),
            c(&own, &[0.0; 3]).pointer(2).ends_at(0), // wraps
        ],
        1 => vec![
            c(&own, &[0.0; 7]).ends_at(5),
            c(&own, &[0.0; 3]).ends_at(2),
        ],
        2 => vec![
            c(&own, &[0.0; 12]).ends_at(10),
            c(&own, &[0.0; 3]).ends_at(1),
        ],
        3 => vec![
            // 4.2 squared is 17.64; the move is 17 cells.
            {
                let mut t = vec![0.0; 100];
                t[0] = 4.2;
                c(&own, &t).ends_at(17)
            },
            {
                let mut t = vec![0.0; 100];
                t[0] = -4.2;
                c(&own, &t).ends_at(17)
            },
        ],
        4 => vec![
            c(&own, &[0.0; 3]).pointer(1).ends_at(0),
            c(&own, &[0.0; 3]).ends_at(2), // wraps
        ],
        5 => vec![c(&own, &[0.0; 7]).pointer(6).ends_at(1)],
        6 => vec![c(&own, &[0.0; 12]).pointer(11).ends_at(1)],
        7 => vec![{
            let mut t = vec![0.0; 100];
            t[20] = 4.2;
            c(&own, &t).pointer(20).ends_at(3)
        }],
        23 => vec![
            c("023008008", &[0.0]).leaves_cell(1.0).counts(2),
            // Landing exactly on the end of the source is allowed.
            c("023008", &[0.0]).leaves_cell(0.0).counts(1),
        ],
        24 => vec![
            c(&format!("024{}", "008".repeat(6)), &[0.0])
                .leaves_cell(1.0)
                .counts(2),
            // Too little source left: the skip degrades to a plain advance.
            c("024008008", &[0.0]).leaves_cell(2.0).counts(3),
        ],
        25 => vec![
            c(&format!("025{}", "008".repeat(11)), &[0.0])
                .leaves_cell(1.0)
                .counts(2),
            c("025008", &[0.0]).leaves_cell(1.0).counts(2),
        ],
        43 => vec![c(&own, &[0.0; 5]).pointer(3).ends_at(0)],
        44 => vec![c(&own, &[0.0; 5]).pointer(1).ends_at(4)],
        45 => vec![
            c(&own, &[0.0; 10]).output(&[5.9]).ends_at(5),
            c(&own, &[0.0; 10]).output(&[-2.3]).ends_at(8),
            c(&own, &[0.0; 10]).output(&[15.0]).ends_at(5),
            c(&own, &[0.0; 10]).traps(IndexOutOfRange),
        ],
        61 => vec![
            c(&own, &[7.0, 0.0, 0.0, 0.0, 0.0]).ends_at(2),
            c(&own, &[-2.3, 0.0, 0.0, 0.0, 0.0]).ends_at(3),
        ],
        62 => vec![
            c(&own, &[7.0, 0.0, 0.0, 0.0, 0.0]).ends_at(3),
            c(&own, &[0.0, 0.0, 0.0, 2.0, 0.0]).pointer(3).ends_at(1),
        ],
        140 => vec![
            c(&own, &[0.0; 285]).max_tape(285).ends_at(142),
            c(&own, &[0.0; 10]).ends_at(5),
        ],
        141 => vec![
            c(&own, &[0.0; 285]).max_tape(285).ends_at(71),
            c(&own, &[0.0; 10]).ends_at(2),
        ],
        142 => vec![
            c(&own, &[0.0; 285]).max_tape(285).ends_at(213),
            c(&own, &[0.0; 10]).ends_at(7),
        ],
        143 => vec![
            c(&own, &[5.9, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0]).ends_at(5),
            c(&own, &[-2.3, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0]).ends_at(8),
        ],

        // -- current-cell arithmetic ----------------------------------------
        8 => vec![c(&own, &[0.5]).leaves_cell(1.5)],
        9 => vec![c(&own, &[0.5]).leaves_cell(5.5)],
        10 => vec![c(&own, &[0.5]).leaves_cell(10.5)],
        11 => vec![c(&own, &[0.5]).leaves_cell(-0.5)],
        12 => vec![c(&own, &[0.5]).leaves_cell(-4.5)],
        13 => vec![c(&own, &[0.5]).leaves_cell(-9.5)],
        32 => vec![c(&own, &[3.0]).leaves_cell(6.0)],
        33 => vec![c(&own, &[3.0]).leaves_cell(1.5)],
        80 => vec![
            c(&own, &[6.7]).leaves_cell(6.0),
            c(&own, &[-6.7]).leaves_cell(-7.0),
        ],
        84 => vec![c(&own, &[6.7]).leaves_cell(0.0)],
        85 => vec![c(&own, &[6.7]).leaves_cell(-1.0)],
        86 => vec![c(&own, &[6.7]).leaves_cell(1.0)],
        87 => vec![
            c(&own, &[6.7]).leaves_cell(-6.7),
            c(&own, &[-6.7]).leaves_cell(6.7),
        ],
        97 => vec![c(&own, &[0.0]).leaves_cell(PI)],
        98 => vec![c(&own, &[0.0]).leaves_cell(E)],
        144 => vec![c(&own, &[25.0]).leaves_cell(2.5)],
        145 => vec![
            c(&own, &[2.5]).leaves_cell(25.0),
            c(&own, &[1.0e308]).traps(Overflow),
        ],

        // -- tape restructuring ---------------------------------------------
        16 => vec![
            c(&own, &[1.0, 2.0]).leaves_tape(&[1.0, 2.0, 0.0]),
            c(&own, &[1.0, 2.0]).max_tape(2).leaves_tape(&[1.0, 2.0]),
        ],
        17 => vec![
            c(&own, &[1.0]).max_tape(64).leaves_tape(&[
                1.0, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0,
            ]),
            c(&own, &[1.0, 2.0]).max_tape(8).leaves_tape(&[
                1.0, 2.0, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0,
            ]),
        ],
        18 => vec![
            c(&own, &[1.0, 2.0, 3.0]).leaves_tape(&[1.0, 2.0]),
            c(&own, &[1.0, 2.0]).pointer(1).leaves_tape(&[1.0]).ends_at(0),
            c(&own, &[1.0]).leaves_tape(&[1.0]),
        ],
        19 => vec![
            c(&own, &(1..=12).map(f64::from).collect::<Vec<_>>())
                .pointer(11)
                .leaves_tape(&[1.0, 2.0])
                .ends_at(1),
            c(&own, &[1.0, 2.0, 3.0]).leaves_tape(&[1.0]),
        ],
        34 => vec![
            c(&own, &[7.0, 9.0]).leaves_tape(&[7.0, 0.0, 9.0]),
            c(&own, &[7.0, 9.0]).pointer(1).leaves_tape(&[7.0, 9.0, 0.0]),
            c(&own, &[7.0, 9.0]).max_tape(2).leaves_tape(&[7.0, 9.0]),
        ],
        35 => vec![
            c(&own, &[4.0, 5.0]).leaves_tape(&[5.0]).leaves_output(&[]),
            c(&own, &[4.0, 5.0]).pointer(1).leaves_tape(&[4.0]).ends_at(0),
            c(&own, &[4.0]).leaves_tape(&[4.0]),
        ],
        36 => vec![
            c(&own, &[4.0, 5.0]).leaves_tape(&[5.0]).leaves_output(&[4.0]),
            c(&own, &[4.0]).leaves_tape(&[4.0]).leaves_output(&[]),
        ],
        46 => vec![c(&own, &[1.0, 2.0, 3.0])
            .leaves_tape(&[3.0, 2.0, 1.0])
            .ends_at(0)],
        81 => vec![
            c(&own, &[5.0, 7.0]).leaves_tape(&[7.0, 5.0]),
            c(&own, &[5.0, 7.0])
                .pointer(1)
                .traps(IndexOutOfRange)
                .leaves_tape(&[5.0, 7.0]),
        ],
        161 => vec![c(&own, &[1.0, 2.0, 3.0, 4.0])
            .pointer(1)
            .leaves_tape(&[2.0, 3.0, 4.0, 1.0])
            .ends_at(0)],
        162 => vec![
            c(&own, &[1.0, 2.0, 3.0, 4.0])
                .pointer(1)
                .leaves_tape(&[3.0, 4.0, 1.0, 2.0])
                .ends_at(3),
            c(&own, &[1.0, 2.0])
                .pointer(1)
                .leaves_tape(&[1.0, 2.0])
                .ends_at(1),
        ],
        163 => vec![c(&own, &[1.0, 2.0, 3.0, 4.0])
            .pointer(1)
            .leaves_tape(&[2.0, 1.0, 3.0, 4.0])
            .ends_at(0)],
        164 => vec![c(&own, &[1.0, 2.0, 3.0, 4.0])
            .pointer(1)
            .leaves_tape(&[1.0, 3.0, 4.0, 2.0])
            .ends_at(3)],

        // -- input/output ----------------------------------------------------
        20 => vec![c(&own, &[7.5]).leaves_output(&[7.5])],
        21 => vec![c(&own, &[0.0; 5]).pointer(3).leaves_output(&[3.0])],
        22 => vec![
            c(&own, &[0.0]).leaves_output(&[0.0]),
            c(&format!("000{own}"), &[0.0, 0.0]).leaves_output(&[3.0]),
        ],
        37 => vec![
            c(&own, &[0.0]).output(&[1.0, 2.0]).leaves_cell(2.0).leaves_output(&[1.0]),
            c(&own, &[0.0]).traps(IndexOutOfRange),
        ],
        38 => vec![
            c(&own, &[0.0])
                .output(&[1.0, 2.0])
                .leaves_cell(2.0)
                .leaves_output(&[1.0, 2.0]),
            c(&own, &[0.0]).traps(IndexOutOfRange),
        ],
        39 => vec![
            c(&own, &[0.0]).output(&[1.0, 2.0]).leaves_cell(1.0).leaves_output(&[2.0]),
            c(&own, &[0.0]).traps(IndexOutOfRange),
        ],
        40 => vec![
            c(&own, &[0.0])
                .output(&[1.0, 2.0])
                .leaves_cell(1.0)
                .leaves_output(&[1.0, 2.0]),
            c(&own, &[0.0]).traps(IndexOutOfRange),
        ],
        41 => vec![
            c(&own, &[9.0]).output(&[1.0, 2.0]).leaves_cell(9.0).leaves_output(&[2.0]),
            c(&own, &[9.0]).traps(IndexOutOfRange),
        ],
        42 => vec![
            c(&own, &[9.0]).output(&[1.0, 2.0]).leaves_output(&[1.0]),
            c(&own, &[9.0]).traps(IndexOutOfRange),
        ],
        47 => vec![c(&own, &[0.0])
            .output(&[1.0, 2.0, 3.0])
            .leaves_output(&[3.0, 2.0, 1.0])],
        63 => vec![
            c(&own, &[9.0]).input(&[4.0, 9.0]).leaves_cell(4.0).leaves_input(&[9.0]),
            c(&own, &[9.0]).leaves_cell(0.0).halts(EndOfSource),
        ],
        64 => vec![
            c(&own, &[9.0])
                .input(&[4.0, 9.0])
                .leaves_cell(4.0)
                .leaves_input(&[4.0, 9.0]),
            c(&own, &[9.0]).leaves_cell(0.0),
        ],

        // -- arithmetic with the next cell / input ends -----------------------
        65 => vec![
            c(&own, &[2.0, 3.0]).leaves_cell(5.0),
            c(&own, &[2.0]).traps(IndexOutOfRange),
        ],
        66 => vec![
            c(&own, &[2.0]).input(&[10.0, 20.0]).leaves_cell(12.0),
            c(&own, &[2.0]).traps(IndexOutOfRange),
        ],
        67 => vec![c(&own, &[2.0]).input(&[10.0, 20.0]).leaves_cell(22.0)],
        68 => vec![
            c(&own, &[2.0, 3.0]).leaves_cell(1.0),
            c(&own, &[2.0]).traps(IndexOutOfRange),
        ],
        69 => vec![c(&own, &[2.0]).input(&[10.0, 20.0]).leaves_cell(8.0)],
        70 => vec![c(&own, &[2.0]).input(&[10.0, 20.0]).leaves_cell(18.0)],
        71 => vec![
            c(&own, &[2.0, 3.0]).leaves_cell(6.0),
            c(&own, &[2.0]).traps(IndexOutOfRange),
        ],
        72 => vec![c(&own, &[2.0]).input(&[10.0, 20.0]).leaves_cell(20.0)],
        73 => vec![c(&own, &[2.0]).input(&[10.0, 20.0]).leaves_cell(40.0)],
        74 => vec![
            c(&own, &[2.0, 3.0]).leaves_cell(1.5),
            c(&own, &[0.0, 3.0]).traps(ZeroDivision),
            c(&own, &[2.0]).traps(IndexOutOfRange),
        ],
        75 => vec![
            c(&own, &[2.0]).input(&[10.0, 20.0]).leaves_cell(5.0),
            c(&own, &[0.0]).input(&[10.0]).traps(ZeroDivision),
        ],
        76 => vec![c(&own, &[2.0]).input(&[10.0, 20.0]).leaves_cell(10.0)],
        77 => vec![
            c(&own, &[2.0, 3.0]).leaves_cell(1.0),
            // The result takes the divisor's sign.
            c(&own, &[3.0, -7.0]).leaves_cell(2.0),
            c(&own, &[-3.0, 7.0]).leaves_cell(-2.0),
            c(&own, &[0.0, 3.0]).traps(ZeroDivision),
        ],
        78 => vec![
            c(&own, &[3.0]).input(&[10.0]).leaves_cell(1.0),
            c(&own, &[0.0]).input(&[10.0]).traps(ZeroDivision),
        ],
        79 => vec![c(&own, &[3.0]).input(&[10.0, 20.0]).leaves_cell(2.0)],

        // -- unary math --------------------------------------------------------
        88 => vec![
            c(&own, &[0.0]).leaves_cell(0.0),
            c(&own, &[PI / 6.0]).leaves_cell_near(0.5, TINY),
        ],
        89 => vec![
            c(&own, &[0.0]).leaves_cell(1.0),
            c(&own, &[PI / 3.0]).leaves_cell_near(0.5, TINY),
        ],
        90 => vec![c(&own, &[PI / 4.0]).leaves_cell_near(1.0, TINY)],
        91 => vec![
            c(&own, &[1.0]).leaves_cell_near(PI / 2.0, TINY),
            c(&own, &[1.5]).traps(DomainError),
            c(&own, &[-1.5]).traps(DomainError),
        ],
        92 => vec![
            c(&own, &[0.0]).leaves_cell_near(PI / 2.0, TINY),
            c(&own, &[-1.5]).traps(DomainError),
        ],
        93 => vec![c(&own, &[1.0]).leaves_cell_near(PI / 4.0, TINY)],
        94 => vec![
            c(&own, &[4.0]).leaves_cell(0.25),
            c(&own, &[0.0]).traps(ZeroDivision),
        ],
        95 => vec![
            c(&own, &[9.0]).leaves_cell(3.0),
            c(&own, &[-1.0]).traps(DomainError),
        ],
        96 => vec![
            c(&own, &[E]).leaves_cell_near(1.0, TINY),
            c(&own, &[0.0]).traps(DomainError),
            c(&own, &[-1.0]).traps(DomainError),
        ],
        99 => vec![c(&own, &[LN2]).leaves_cell_near(0.75, TINY)],
        100 => vec![c(&own, &[LN2]).leaves_cell_near(1.25, TINY)],
        101 => vec![c(&own, &[LN2]).leaves_cell_near(0.6, TINY)],
        102 => vec![c(&own, &[0.75]).leaves_cell_near(LN2, TINY)],
        103 => vec![
            c(&own, &[1.25]).leaves_cell_near(LN2, TINY),
            c(&own, &[0.5]).traps(DomainError),
        ],
        104 => vec![
            c(&own, &[0.6]).leaves_cell_near(LN2, TINY),
            c(&own, &[1.0]).traps(DomainError),
            c(&own, &[-1.0]).traps(DomainError),
        ],
        105 => vec![c(&own, &[PI]).leaves_cell_near(180.0, 1e-12)],
        106 => vec![c(&own, &[180.0]).leaves_cell_near(PI, TINY)],
        107 => vec![
            c(&own, &[1.0]).leaves_cell(1.0),
            c(&own, &[1.0e300]).traps(Overflow),
        ],
        108 => vec![
            c(&own, &[0.0]).leaves_cell(1.0),
            c(&own, &[1.0]).leaves_cell_near(E, TINY),
            c(&own, &[1000.0]).traps(Overflow),
        ],
        109 => vec![
            c(&own, &[2.0]).leaves_cell(100.0),
            c(&own, &[400.0]).traps(Overflow),
        ],
        110 => vec![
            c(&own, &[2.0, 10.0]).leaves_cell(1024.0),
            c(&own, &[1.0e200, 2.0]).traps(Overflow),
            c(&own, &[2.0]).traps(IndexOutOfRange),
        ],
        111 => vec![
            c(&own, &[1024.0, 10.0]).leaves_cell_near(2.0, TINY),
            c(&own, &[2.0]).traps(IndexOutOfRange),
        ],
        // Reference values for erf(1) and erfc(1).
        112 => vec![
            c(&own, &[0.0]).leaves_cell(0.0),
            c(&own, &[1.0]).leaves_cell_near(0.842_700_792_949_714_9, TINY),
        ],
        113 => vec![
            c(&own, &[0.0]).leaves_cell(1.0),
            c(&own, &[1.0]).leaves_cell_near(0.157_299_207_050_285_13, TINY),
        ],
        114 => vec![
            c(&own, &[5.9]).leaves_cell(120.0),
            c(&own, &[0.0]).leaves_cell(1.0),
            c(&own, &[-2.0]).traps(DomainError),
            c(&own, &[171.0]).traps(Overflow),
            c(&own, &[170.0]).leaves_cell_near(7.257_415_615_307_994e306, 1e293),
        ],
        115 => vec![
            c(&own, &[-5.9]).leaves_cell(120.0),
            c(&own, &[171.0]).traps(Overflow),
        ],
        116 => vec![
            c(&own, &[3.0, 4.0]).leaves_cell(5.0),
            c(&own, &[3.0]).traps(IndexOutOfRange),
        ],
        117 => vec![
            c(&own, &[8.0, 2.0]).leaves_cell_near(3.0, TINY),
            c(&own, &[0.5, 2.0]).leaves_cell_near(-1.0, TINY),
            c(&own, &[8.0, 0.0]).traps(DomainError),
            c(&own, &[-8.0, 2.0]).traps(DomainError),
            c(&own, &[8.0]).traps(IndexOutOfRange),
        ],

        // -- logic ---------------------------------------------------------------
        120 => vec![
            c(&own, &[2.0, 3.0]).leaves_cell(1.0),
            c(&own, &[2.0, 0.0]).leaves_cell(0.0),
            c(&own, &[2.0]).traps(IndexOutOfRange),
        ],
        121 => vec![
            c(&own, &[-2.0, 3.0]).leaves_cell(1.0),
            c(&own, &[-2.0, 0.0]).leaves_cell(0.0),
        ],
        122 => vec![
            c(&own, &[2.0]).leaves_cell(0.0),
            c(&own, &[0.0]).leaves_cell(1.0),
            c(&own, &[-2.0]).leaves_cell(1.0),
        ],
        123 => vec![
            c(&own, &[2.0, 3.0]).leaves_cell(1.0),
            c(&own, &[3.0, 2.0]).leaves_cell(0.0),
        ],
        124 => vec![
            c(&own, &[3.0, 2.0]).leaves_cell(1.0),
            c(&own, &[2.0, 3.0]).leaves_cell(0.0),
        ],
        125 => vec![
            c(&own, &[3.0, 3.0]).leaves_cell(1.0),
            c(&own, &[2.0, 3.0]).leaves_cell(0.0),
        ],
        126 => vec![
            c(&own, &[2.0, 3.0]).leaves_cell(1.0),
            c(&own, &[3.0, 3.0]).leaves_cell(0.0),
        ],
        127 => vec![
            c(&own, &[3.0, 3.0]).leaves_cell(1.0),
            c(&own, &[4.0, 3.0]).leaves_cell(0.0),
        ],
        128 => vec![
            c(&own, &[3.0, 3.0]).leaves_cell(1.0),
            c(&own, &[2.0, 3.0]).leaves_cell(0.0),
        ],

        // -- aggregates and sweeps --------------------------------------------------
        146 => vec![
            c(&own, &[1.0, 2.0, 3.0]).leaves_cell(5.0),
            c(&own, &[1.0, 2.0]).pointer(1).leaves_cell(0.0),
        ],
        147 => vec![c(&own, &[1.0, 2.0, 3.0]).leaves_cell(6.0)],
        150 => vec![c(&own, &[1.0, 2.0, 3.0]).pointer(1).leaves_tape(&[1.0, 6.0, 3.0])],
        151 => vec![
            c(&own, &[1.0, 2.0, 4.0]).leaves_cell(3.0),
            c(&own, &[1.0, 2.0]).pointer(1).traps(ZeroDivision),
        ],
        152 => vec![c(&own, &[1.0, 2.0, 3.0]).leaves_cell(2.0)],
        153 => vec![
            c(&own, &[4.0, 9.0]).pointer(1).leaves_cell(4.0),
            c(&own, &[4.0, 9.0]).traps(ZeroDivision),
        ],
        154 => vec![c(&own, &[1.0, 3.0]).pointer(1).leaves_cell(2.0)],
        155 => vec![c(&own, &[2.0, 4.0]).leaves_tape(&[1.0, 2.0])],
        156 => vec![c(&own, &[2.0, 4.0]).leaves_tape(&[4.0, 8.0])],
        157 => vec![c(&own, &[20.0, 40.0]).leaves_tape(&[2.0, 4.0])],
        158 => vec![
            c(&own, &[2.0, 4.0]).leaves_tape(&[20.0, 40.0]),
            c(&own, &[2.0, 1.0e308]).traps(Overflow).leaves_tape(&[2.0, 1.0e308]),
        ],
        159 => vec![c(&own, &[200.0]).leaves_tape(&[2.0])],
        160 => vec![
            c(&own, &[2.0]).leaves_tape(&[200.0]),
            c(&own, &[1.0e307]).traps(Overflow),
        ],
        165 => vec![c(&own, &[2.0, -4.0]).leaves_tape(&[-2.0, 4.0])],
        166 => vec![c(&own, &[5.0, 2.0, 3.0]).pointer(1).leaves_tape(&[5.0, 2.0, 9.0])],
        167 => vec![c(&own, &[5.0, 2.0, 3.0]).pointer(1).leaves_tape(&[25.0, 2.0, 3.0])],
        168 => vec![c(&own, &[2.0, 3.0]).leaves_tape(&[4.0, 9.0])],
        169 => vec![
            c(&own, &[4.0, 9.0]).leaves_tape(&[2.0, 3.0]),
            c(&own, &[4.0, -9.0]).traps(DomainError).leaves_tape(&[4.0, -9.0]),
        ],
        170 => vec![
            c(&own, &[9.0, 5.0, 4.0]).pointer(1).leaves_tape(&[9.0, 5.0, 2.0]),
            // The current cell is outside the protected range.
            c(&own, &[-1.0, 16.0]).leaves_tape(&[-1.0, 4.0]),
            c(&own, &[-1.0, -16.0]).traps(DomainError),
        ],
        171 => vec![
            c(&own, &[9.0, 5.0, 4.0]).pointer(1).leaves_tape(&[3.0, 5.0, 4.0]),
            c(&own, &[-9.0, 5.0]).pointer(1).traps(DomainError),
        ],
        189 => vec![c(&own, &[9.0, -5.0]).leaves_tape(&[0.0, 0.0])],
        196 => vec![
            c(&own, &[2.0, 4.0, 4.0, 4.0, 5.0, 5.0, 7.0, 9.0]).leaves_cell_near(2.0, TINY),
            c(&own, &[3.0]).leaves_cell(0.0),
        ],
        197 => vec![
            c(&own, &[1.0, 4.0, 16.0]).leaves_cell_near(4.0, TINY),
            c(&own, &[1.0, 0.0]).traps(DomainError),
            c(&own, &[1.0, -4.0]).traps(DomainError),
        ],
        198 => vec![
            c(&own, &[2.0, 2.0]).leaves_cell_near(2.0, TINY),
            c(&own, &[1.0, 3.0]).leaves_cell_near(1.5, TINY),
            c(&own, &[1.0, 0.0]).traps(DomainError),
            c(&own, &[1.0, -1.0]).traps(ZeroDivision),
        ],

        other => panic!("no fixtures defined for codon {other:03}"),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::isa::NBF_CODONS;

    #[test]
    fn full_suite_passes() {
        let reports = run_suite(&full_table());
        assert_eq!(reports.len(), 347);
        for report in &reports {
            assert!(
                report.outcome.is_ok(),
                "codon {:03}: {}",
                report.codon,
                report.outcome.as_ref().unwrap_err()
            );
        }
    }

    #[test]
    fn subset_suite_checks_only_enabled_codons() {
        let table = build_instruction_set(RagarajaVersion::NucleotideSubset, None).unwrap();
        let reports = run_suite(&table);
        assert_eq!(reports.len(), 16);
        let codons: Vec<u16> = reports.iter().map(|r| r.codon).collect();
        assert_eq!(codons, NBF_CODONS.to_vec());
        assert!(reports.iter().all(|r| r.outcome.is_ok()));
    }

    #[test]
    fn toggle_table_checks_a_single_codon() {
        let table = build_instruction_set(RagarajaVersion::UserDefined, Some("000=Y")).unwrap();
        let reports = run_suite(&table);
        assert_eq!(reports.len(), 1);
        assert_eq!(reports[0].codon, 0);
    }
}
