//! Post-run analytics over result files and fossils: sequence divergence
//! against a baseline generation, cytoplasmic averages, and correlation
//! between series.

use std::collections::BTreeMap;

use thiserror::Error;

use crate::genetics::Organism;

#[derive(Debug, Error)]
pub enum AnalysisError {
    #[error("sequences differ in length ({left} vs {right})")]
    LengthMismatch { left: usize, right: usize },
    #[error("line {line}: bad record: {reason}")]
    MalformedRecord { line: usize, reason: String },
    #[error("no report records found")]
    NoRecords,
    #[error("two different records for generation {generation}")]
    ConflictingRecords { generation: usize },
    #[error("no record for baseline generation {generation}")]
    MissingBaseline { generation: usize },
    #[error("generation {generation} reports {got} organisms, baseline has {baseline}")]
    OrganismCountChanged {
        generation: usize,
        got: usize,
        baseline: usize,
    },
    #[error("snapshot holds no organisms")]
    EmptySnapshot,
    #[error("snapshot holds no cytoplasm values")]
    EmptyCytoplasm,
    #[error("need at least {needed} paired values, got {got}")]
    TooFewPoints { needed: usize, got: usize },
    #[error("{side} series has zero variance; correlation is undefined")]
    ZeroVariance { side: &'static str },
}

// ---------------------------------------------------------------------------
// Hamming distance
// ---------------------------------------------------------------------------

/// Number of positions at which two equal-length sequences differ.
pub fn hamming_distance(a: &str, b: &str) -> Result<usize, AnalysisError> {
    let left: Vec<char> = a.chars().collect();
    let right: Vec<char> = b.chars().collect();
    if left.len() != right.len() {
        return Err(AnalysisError::LengthMismatch {
            left: left.len(),
            right: right.len(),
        });
    }
    Ok(left
        .iter()
        .zip(&right)
        .filter(|(x, y)| x != y)
        .count())
}

// ---------------------------------------------------------------------------
// Result-file records
// ---------------------------------------------------------------------------

/// Extracts `(generation, payload)` report records from a result file.
///
/// A result file may stack several runs (headers append); only the records
/// after the last `STARTING SIMULATION` banner count. Repeated records for
/// a generation are fine when identical — the outcome cannot depend on line
/// order — but two different payloads for one generation are an error.
fn parse_records(text: &str) -> Result<BTreeMap<usize, String>, AnalysisError> {
    let last_banner = text
        .lines()
        .enumerate()
        .filter(|(_, line)| line.starts_with("STARTING SIMULATION - "))
        .map(|(idx, _)| idx)
        .last();
    let mut records = BTreeMap::new();
    for (idx, line) in text.lines().enumerate() {
        if let Some(banner) = last_banner {
            if idx <= banner {
                continue;
            }
        }
        if !line.contains('\t') {
            continue;
        }
        let mut fields = line.splitn(3, '\t');
        let _timestamp = fields.next().expect("split yields at least one field");
        let generation: usize = fields
            .next()
            .ok_or_else(|| AnalysisError::MalformedRecord {
                line: idx + 1,
                reason: "missing generation field".to_string(),
            })?
            .parse()
            .map_err(|e| AnalysisError::MalformedRecord {
                line: idx + 1,
                reason: format!("generation is not a number: {e}"),
            })?;
        let payload = fields.next().unwrap_or_default().to_string();
        match records.get(&generation) {
            None => {
                records.insert(generation, payload);
            }
            Some(existing) if *existing == payload => {}
            Some(_) => return Err(AnalysisError::ConflictingRecords { generation }),
        }
    }
    if records.is_empty() {
        return Err(AnalysisError::NoRecords);
    }
    Ok(records)
}

// ---------------------------------------------------------------------------
// Divergence series
// ---------------------------------------------------------------------------

/// Mean distance from the baseline generation's genomes at one generation.
#[derive(Debug, Clone, PartialEq)]
pub struct DistancePoint {
    pub generation: usize,
    /// Mean positions changed per organism.
    pub mean_absolute: f64,
    /// Mean share of the genome changed per organism, in [0, 1].
    pub mean_normalized: f64,
}

/// Divergence-from-baseline curve for one population's result file.
#[derive(Debug, Clone, PartialEq)]
pub struct DistanceSeries {
    pub baseline_generation: usize,
    /// How organisms at different generations were matched up.
    pub pairing: &'static str,
    /// Points in strictly increasing generation order.
    pub points: Vec<DistancePoint>,
}

/// Computes mean genome distance to the baseline generation at every
/// recorded generation on the given interval.
///
/// The result file must carry TAB-joined genome strings as its report
/// payload. Organisms are paired by position: the population neither grows
/// nor shrinks in this experiment, so the i-th genome at generation g
/// descends from the i-th genome at the baseline.
pub fn divergence_series(
    result_text: &str,
    baseline_generation: usize,
    interval: usize,
) -> Result<DistanceSeries, AnalysisError> {
    assert!(interval > 0, "interval must be positive");
    let records = parse_records(result_text)?;
    let baseline: Vec<&str> = records
        .get(&baseline_generation)
        .ok_or(AnalysisError::MissingBaseline {
            generation: baseline_generation,
        })?
        .split('\t')
        .collect();
    let mut points = Vec::new();
    for (&generation, payload) in records.range(baseline_generation..) {
        if (generation - baseline_generation) % interval != 0 {
            continue;
        }
        let genomes: Vec<&str> = payload.split('\t').collect();
        if genomes.len() != baseline.len() {
            return Err(AnalysisError::OrganismCountChanged {
                generation,
                got: genomes.len(),
                baseline: baseline.len(),
            });
        }
        let mut absolute_sum = 0.0;
        let mut normalized_sum = 0.0;
        for (current, base) in genomes.iter().zip(&baseline) {
            let distance = hamming_distance(current, base)? as f64;
            absolute_sum += distance;
            normalized_sum += distance / base.chars().count() as f64;
        }
        let n = genomes.len() as f64;
        points.push(DistancePoint {
            generation,
            mean_absolute: absolute_sum / n,
            mean_normalized: normalized_sum / n,
        });
    }
    Ok(DistanceSeries {
        baseline_generation,
        pairing: "index",
        points,
    })
}

// ---------------------------------------------------------------------------
// Cytoplasm averages
// ---------------------------------------------------------------------------

/// Arithmetic mean over every cytoplasm cell of every organism.
pub fn mean_cytoplasm(organisms: &[Organism]) -> Result<f64, AnalysisError> {
    if organisms.is_empty() {
        return Err(AnalysisError::EmptySnapshot);
    }
    let mut sum = 0.0;
    let mut count = 0usize;
    for organism in organisms {
        for &value in &organism.cytoplasm {
            sum += value;
            count += 1;
        }
    }
    if count == 0 {
        return Err(AnalysisError::EmptyCytoplasm);
    }
    Ok(sum / count as f64)
}

/// Population-mean cytoplasmic value at every recorded generation.
///
/// The result file must carry each organism's cytoplasm as comma-joined
/// numbers, TAB-joined across organisms. Points come back in increasing
/// generation order.
pub fn cytoplasm_series(result_text: &str) -> Result<Vec<(usize, f64)>, AnalysisError> {
    let records = parse_records(result_text)?;
    let mut series = Vec::with_capacity(records.len());
    for (&generation, payload) in &records {
        let mut sum = 0.0;
        let mut count = 0usize;
        for organism_text in payload.split('\t') {
            for value_text in organism_text.split(',') {
                let value: f64 =
                    value_text
                        .trim()
                        .parse()
                        .map_err(|e| AnalysisError::MalformedRecord {
                            line: 0,
                            reason: format!(
                                "generation {generation}: bad cytoplasm value {value_text:?}: {e}"
                            ),
                        })?;
                sum += value;
                count += 1;
            }
        }
        if count == 0 {
            return Err(AnalysisError::EmptyCytoplasm);
        }
        series.push((generation, sum / count as f64));
    }
    Ok(series)
}

// ---------------------------------------------------------------------------
// Correlation
// ---------------------------------------------------------------------------

/// Sample Pearson correlation of two equal-length series.
pub fn pearson_r(xs: &[f64], ys: &[f64]) -> Result<f64, AnalysisError> {
    if xs.len() != ys.len() {
        return Err(AnalysisError::LengthMismatch {
            left: xs.len(),
            right: ys.len(),
        });
    }
    if xs.len() < 2 {
        return Err(AnalysisError::TooFewPoints {
            needed: 2,
            got: xs.len(),
        });
    }
    let n = xs.len() as f64;
    let mean_x = xs.iter().sum::<f64>() / n;
    let mean_y = ys.iter().sum::<f64>() / n;
    let mut covariance = 0.0;
    let mut variance_x = 0.0;
    let mut variance_y = 0.0;
    for (&x, &y) in xs.iter().zip(ys) {
        let dx = x - mean_x;
        let dy = y - mean_y;
        covariance += dx * dy;
        variance_x += dx * dx;
        variance_y += dy * dy;
    }
    if variance_x == 0.0 {
        return Err(AnalysisError::ZeroVariance { side: "first" });
    }
    if variance_y == 0.0 {
        return Err(AnalysisError::ZeroVariance { side: "second" });
    }
    Ok(covariance / (variance_x.sqrt() * variance_y.sqrt()))
}
