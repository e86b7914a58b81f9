//! The Ragaraja instruction set.
//!
//! Instructions are 3-digit decimal codons ("000".."999"). Of the 1000
//! possible codons, 347 are defined; the rest are permanently undefined and
//! execute as no-ops. Three instruction-set versions exist:
//!
//! - version 1: all 347 defined codons enabled,
//! - version 0.1: the 16-codon NucleotideBF subset,
//! - version 0: user-selected codons from a toggle file.

use std::fmt;

use thiserror::Error;

/// Number of codons defined in version 1.
pub const DEFINED_COUNT: usize = 347;

/// Codons enabled by version 0.1 (the NucleotideBF subset).
pub const NBF_CODONS: [u16; 16] = [
    0, 4, 8, 11, 20, 50, 51, 52, 53, 54, 55, 56, 57, 58, 59, 60,
];

/// Semantic category of a defined codon.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum OpcodeKind {
    PointerMove,
    CellArith,
    TapeStructural,
    Io,
    Random,
    Math,
    Logic,
    Aggregate,
    RegisterStore,
    RegisterLoad,
    Undefined,
}

/// Returns the semantic category of a codon, or `Undefined` for the gaps.
pub fn opcode_kind(codon: u16) -> OpcodeKind {
    use OpcodeKind::*;
    match codon {
        0..=7 | 23..=25 | 43..=45 | 61 | 62 | 140..=143 => PointerMove,
        8..=13 | 32 | 33 | 80 | 84..=87 | 144 | 145 => CellArith,
        16..=19 | 34..=36 | 46 | 81 | 161..=164 => TapeStructural,
        20..=22 | 37..=42 | 47 | 63 | 64 => Io,
        50..=60 => Random,
        65..=79 | 88..=117 => Math,
        120..=128 => Logic,
        146 | 147 | 150..=160 | 165..=171 | 189 | 196..=198 => Aggregate,
        201..=299 => RegisterStore,
        301..=399 => RegisterLoad,
        _ => Undefined,
    }
}

/// True if the codon has defined semantics in version 1.
pub fn is_defined(codon: u16) -> bool {
    opcode_kind(codon) != OpcodeKind::Undefined
}

/// A single instruction: its codon string and semantic category.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Opcode {
    pub codon: String,
    pub kind: OpcodeKind,
}

impl Opcode {
    pub fn new(codon: u16) -> Self {
        Opcode {
            codon: format!("{codon:03}"),
            kind: opcode_kind(codon),
        }
    }
}

/// Instruction-set version selector.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum RagarajaVersion {
    /// Version 0: codons chosen by a user toggle file.
    UserDefined,
    /// Version 0.1: the 16-codon NucleotideBF subset.
    NucleotideSubset,
    /// Version 1: all 347 defined codons.
    Full,
}

impl fmt::Display for RagarajaVersion {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            RagarajaVersion::UserDefined => write!(f, "0"),
            RagarajaVersion::NucleotideSubset => write!(f, "0.1"),
            RagarajaVersion::Full => write!(f, "1"),
        }
    }
}

impl std::str::FromStr for RagarajaVersion {
    type Err = IsaError;

    fn from_str(s: &str) -> Result<Self, IsaError> {
        match s.trim() {
            "0" => Ok(RagarajaVersion::UserDefined),
            "0.1" => Ok(RagarajaVersion::NucleotideSubset),
            "1" => Ok(RagarajaVersion::Full),
            other => Err(IsaError::UnknownVersion(other.to_string())),
        }
    }
}

#[derive(Debug, Error)]
pub enum IsaError {
    #[error("unknown instruction-set version `{0}` (expected 0, 0.1 or 1)")]
    UnknownVersion(String),
    #[error("version 0 requires a toggle file")]
    MissingToggleText,
    #[error("toggle line {line}: `{content}` is not of the form NNN=Y or NNN=N")]
    ToggleParse { line: usize, content: String },
    #[error("unknown NucleotideBF symbol `{symbol}` at position {position}")]
    UnknownNbfSymbol { position: usize, symbol: char },
}

/// The enabled/disabled map from codons to semantics.
///
/// Immutable after construction; share it freely across concurrent genome
/// evaluations.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct OpcodeTable {
    enabled: [bool; 1000],
    version: RagarajaVersion,
}

impl OpcodeTable {
    pub fn version(&self) -> RagarajaVersion {
        self.version
    }

    pub fn is_enabled(&self, codon: u16) -> bool {
        (codon as usize) < 1000 && self.enabled[codon as usize]
    }

    /// Enabled codons in ascending order.
    pub fn enabled_codons(&self) -> Vec<u16> {
        (0u16..1000).filter(|&c| self.enabled[c as usize]).collect()
    }

    pub fn enabled_count(&self) -> usize {
        self.enabled.iter().filter(|&&e| e).count()
    }
}

/// Builds the opcode table for a version.
///
/// `toggle_text` is consulted only for version 0, where each line reads
/// `NNN=Y` or `NNN=N`; blank lines are ignored, and codons outside the 347
/// defined ones are dropped even when marked `Y`.
pub fn build_instruction_set(
    version: RagarajaVersion,
    toggle_text: Option<&str>,
) -> Result<OpcodeTable, IsaError> {
    let mut enabled = [false; 1000];
    match version {
        RagarajaVersion::Full => {
            for codon in 0..1000u16 {
                enabled[codon as usize] = is_defined(codon);
            }
        }
        RagarajaVersion::NucleotideSubset => {
            for codon in NBF_CODONS {
                enabled[codon as usize] = true;
            }
        }
        RagarajaVersion::UserDefined => {
            let text = toggle_text.ok_or(IsaError::MissingToggleText)?;
            for (codon, on) in parse_toggle_text(text)? {
                if on && is_defined(codon) {
                    enabled[codon as usize] = true;
                }
            }
        }
    }
    Ok(OpcodeTable { enabled, version })
}

fn parse_toggle_text(text: &str) -> Result<Vec<(u16, bool)>, IsaError> {
    let mut toggles = Vec::new();
    for (idx, raw) in text.lines().enumerate() {
        let line = raw.trim_end_matches('\r');
        if line.trim().is_empty() {
            continue;
        }
        let err = || IsaError::ToggleParse {
            line: idx + 1,
            content: line.to_string(),
        };
        let (codon, flag) = line.split_once('=').ok_or_else(err)?;
        if codon.len() != 3 || !codon.bytes().all(|b| b.is_ascii_digit()) {
            return Err(err());
        }
        let on = match flag {
            "Y" => true,
            "N" => false,
            _ => return Err(err()),
        };
        toggles.push((codon.parse::<u16>().expect("three digits"), on));
    }
    Ok(toggles)
}

/// Codon assigned to each NucleotideBF letter.
pub fn nbf_codon(symbol: char) -> Option<u16> {
    let codon = match symbol {
        'G' => 0,
        'C' => 4,
        'A' => 8,
        'T' => 11,
        '.' => 20,
        'R' => 50,
        'Y' => 51,
        'S' => 52,
        'W' => 53,
        'K' => 54,
        'M' => 55,
        'B' => 56,
        'D' => 57,
        'H' => 58,
        'V' => 59,
        'N' => 60,
        _ => return None,
    };
    Some(codon)
}

/// Transliterates a NucleotideBF letter sequence into a codon string.
pub fn nbf_transliterate(letters: &str) -> Result<String, IsaError> {
    let mut out = String::with_capacity(letters.len() * 3);
    for (position, symbol) in letters.chars().enumerate() {
        let codon = nbf_codon(symbol).ok_or(IsaError::UnknownNbfSymbol { position, symbol })?;
        out.push_str(&format!("{codon:03}"));
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    // Independent enumeration of the defined set, straight from the
    // published ranges.
    fn defined_by_ranges() -> Vec<u16> {
        let ranges: [(u16, u16); 12] = [
            (0, 13),
            (16, 25),
            (32, 47),
            (50, 81),
            (84, 117),
            (120, 128),
            (140, 147),
            (150, 171),
            (189, 189),
            (196, 198),
            (201, 299),
            (301, 399),
        ];
        ranges.iter().flat_map(|&(a, b)| a..=b).collect()
    }

    #[test]
    fn defined_set_matches_range_enumeration() {
        let expected = defined_by_ranges();
        assert_eq!(expected.len(), DEFINED_COUNT);
        let actual: Vec<u16> = (0..1000).filter(|&c| is_defined(c)).collect();
        assert_eq!(actual, expected);
    }

    #[test]
    fn version_1_enables_all_347() {
        let table = build_instruction_set(RagarajaVersion::Full, None).unwrap();
        assert_eq!(table.enabled_count(), 347);
        assert!(table.is_enabled(0));
        assert!(table.is_enabled(399));
        assert!(!table.is_enabled(300));
        assert!(!table.is_enabled(14));
    }

    #[test]
    fn version_01_enables_the_nbf_16() {
        let table = build_instruction_set(RagarajaVersion::NucleotideSubset, None).unwrap();
        assert_eq!(table.enabled_count(), 16);
        assert_eq!(table.enabled_codons(), NBF_CODONS.to_vec());
    }

    #[test]
    fn version_0_parses_toggles() {
        let table =
            build_instruction_set(RagarajaVersion::UserDefined, Some("000=Y\n001=N\n")).unwrap();
        assert_eq!(table.enabled_codons(), vec![0]);
    }

    #[test]
    fn version_0_requires_toggle_text() {
        assert!(matches!(
            build_instruction_set(RagarajaVersion::UserDefined, None),
            Err(IsaError::MissingToggleText)
        ));
    }

    #[test]
    fn toggles_ignore_blank_lines_and_drop_undefined_codons() {
        let text = "000=Y\n\n   \n300=Y\n014=Y\n004=Y\n";
        let table = build_instruction_set(RagarajaVersion::UserDefined, Some(text)).unwrap();
        assert_eq!(table.enabled_codons(), vec![0, 4]);
    }

    #[test]
    fn malformed_toggle_line_names_the_line() {
        let err = build_instruction_set(RagarajaVersion::UserDefined, Some("000=Y\n01=Y\n"))
            .unwrap_err();
        match err {
            IsaError::ToggleParse { line, content } => {
                assert_eq!(line, 2);
                assert_eq!(content, "01=Y");
            }
            other => panic!("unexpected error {other:?}"),
        }
        let err =
            build_instruction_set(RagarajaVersion::UserDefined, Some("000=maybe")).unwrap_err();
        assert!(matches!(err, IsaError::ToggleParse { line: 1, .. }));
    }

    #[test]
    fn build_is_pure() {
        let a = build_instruction_set(RagarajaVersion::Full, None).unwrap();
        let b = build_instruction_set(RagarajaVersion::Full, None).unwrap();
        assert_eq!(a, b);
    }

    #[test]
    fn nbf_examples() {
        assert_eq!(nbf_transliterate("GCAT").unwrap(), "000004008011");
        assert_eq!(nbf_transliterate("").unwrap(), "");
        assert_eq!(nbf_transliterate("N").unwrap(), "060");
    }

    #[test]
    fn nbf_unknown_symbol_names_position() {
        let err = nbf_transliterate("GCx").unwrap_err();
        match err {
            IsaError::UnknownNbfSymbol { position, symbol } => {
                assert_eq!(position, 2);
                assert_eq!(symbol, 'x');
            }
            other => panic!("unexpected error {other:?}"),
        }
    }

    #[test]
    fn nbf_is_injective() {
        let alphabet = "GCAT.RYSWKMBDHVN";
        let mut seen = std::collections::HashSet::new();
        for symbol in alphabet.chars() {
            assert!(seen.insert(nbf_codon(symbol).unwrap()), "{symbol} collides");
        }
        assert_eq!(seen.len(), 16);
    }

    #[test]
    fn kinds_partition_the_defined_set() {
        for codon in defined_by_ranges() {
            assert_ne!(opcode_kind(codon), OpcodeKind::Undefined, "codon {codon}");
        }
        assert_eq!(opcode_kind(300), OpcodeKind::Undefined);
        assert_eq!(opcode_kind(999), OpcodeKind::Undefined);
        assert_eq!(opcode_kind(201), OpcodeKind::RegisterStore);
        assert_eq!(opcode_kind(301), OpcodeKind::RegisterLoad);
    }

    #[test]
    fn opcode_formats_codon_with_leading_zeros() {
        let op = Opcode::new(4);
        assert_eq!(op.codon, "004");
        assert_eq!(op.kind, OpcodeKind::PointerMove);
    }
}
