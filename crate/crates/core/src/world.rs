//! The 3-D ecosystem: a dense grid of ecological cells with a
//! 26-neighborhood topology and whole-world snapshot persistence.

use std::fs;
use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};
use thiserror::Error;

/// Ecosystem snapshot format revision written by [`eco_burial`].
pub const ECO_FORMAT_VERSION: u32 = 1;

#[derive(Debug, Error)]
pub enum WorldError {
    #[error("world dimensions must be positive, got {0}×{1}×{2}")]
    NonPositiveDimension(usize, usize, usize),
    #[error("coordinate ({0}, {1}, {2}) lies outside the world")]
    OutOfBounds(usize, usize, usize),
    #[error("ecosystem i/o failed for {path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
    #[error("{path} is not a readable ecosystem snapshot: {reason}")]
    Format { path: PathBuf, reason: String },
    #[error("ecosystem format version {found} is not supported (expected {expected})")]
    UnsupportedVersion { found: u32, expected: u32 },
}

/// One site of the ecosystem grid.
///
/// The `local_*` lists are the cell's standing conditions; the `temporary_*`
/// lists collect what the organisms at the cell produced this generation,
/// to be folded back in by the ecology hooks. `organisms` counts residents.
#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
pub struct EcoCell {
    pub local_input: Vec<f64>,
    pub local_output: Vec<f64>,
    pub temporary_input: Vec<f64>,
    pub temporary_output: Vec<f64>,
    pub organisms: usize,
}

/// How a neighboring cell touches the center cell.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum ContactClass {
    /// Shares a face — differs in exactly one coordinate (6 for interior
    /// cells).
    Face,
    /// Shares an edge — differs in exactly two coordinates (12).
    Edge,
    /// Shares a corner — differs in all three coordinates (8).
    Corner,
}

/// A dense 3-D grid of [`EcoCell`]s with hard boundaries (no wrap-around).
#[derive(Debug, Clone, PartialEq)]
pub struct World {
    dims: (usize, usize, usize),
    cells: Vec<EcoCell>,
}

impl World {
    /// Creates a world of `x × y × z` independent default cells.
    pub fn new(x: usize, y: usize, z: usize) -> Result<World, WorldError> {
        if x == 0 || y == 0 || z == 0 {
            return Err(WorldError::NonPositiveDimension(x, y, z));
        }
        Ok(World {
            dims: (x, y, z),
            cells: vec![EcoCell::default(); x * y * z],
        })
    }

    pub fn dims(&self) -> (usize, usize, usize) {
        self.dims
    }

    pub fn cell_count(&self) -> usize {
        self.cells.len()
    }

    pub fn contains(&self, [x, y, z]: [usize; 3]) -> bool {
        x < self.dims.0 && y < self.dims.1 && z < self.dims.2
    }

    /// Row-major flat index: x varies slowest, z fastest.
    fn index(&self, [x, y, z]: [usize; 3]) -> usize {
        (x * self.dims.1 + y) * self.dims.2 + z
    }

    pub fn cell(&self, coord: [usize; 3]) -> Result<&EcoCell, WorldError> {
        if !self.contains(coord) {
            return Err(WorldError::OutOfBounds(coord[0], coord[1], coord[2]));
        }
        Ok(&self.cells[self.index(coord)])
    }

    pub fn cell_mut(&mut self, coord: [usize; 3]) -> Result<&mut EcoCell, WorldError> {
        if !self.contains(coord) {
            return Err(WorldError::OutOfBounds(coord[0], coord[1], coord[2]));
        }
        let index = self.index(coord);
        Ok(&mut self.cells[index])
    }

    /// All coordinates in row-major order.
    pub fn coordinates(&self) -> impl Iterator<Item = [usize; 3]> + '_ {
        let (dx, dy, dz) = self.dims;
        (0..dx).flat_map(move |x| (0..dy).flat_map(move |y| (0..dz).map(move |z| [x, y, z])))
    }

    /// Every in-bounds cell at Chebyshev distance 1, tagged by how it
    /// touches the center. Interior cells have exactly 6 face, 12 edge and
    /// 8 corner neighbors; boundary cells have fewer (hard world edges).
    pub fn neighbors(
        &self,
        coord: [usize; 3],
    ) -> Result<Vec<([usize; 3], ContactClass)>, WorldError> {
        if !self.contains(coord) {
            return Err(WorldError::OutOfBounds(coord[0], coord[1], coord[2]));
        }
        let mut result = Vec::with_capacity(26);
        for dx in -1i64..=1 {
            for dy in -1i64..=1 {
                for dz in -1i64..=1 {
                    if dx == 0 && dy == 0 && dz == 0 {
                        continue;
                    }
                    let nx = coord[0] as i64 + dx;
                    let ny = coord[1] as i64 + dy;
                    let nz = coord[2] as i64 + dz;
                    if nx < 0 || ny < 0 || nz < 0 {
                        continue;
                    }
                    let neighbor = [nx as usize, ny as usize, nz as usize];
                    if !self.contains(neighbor) {
                        continue;
                    }
                    let contact = match dx.abs() + dy.abs() + dz.abs() {
                        1 => ContactClass::Face,
                        2 => ContactClass::Edge,
                        _ => ContactClass::Corner,
                    };
                    result.push((neighbor, contact));
                }
            }
        }
        Ok(result)
    }
}

#[derive(Serialize, Deserialize)]
struct EcoFile {
    format_version: u32,
    dims: [usize; 3],
    cells: Vec<EcoCell>,
}

/// Writes the whole ecosystem to `path` (or the first free numbered variant
/// if `path` already exists) and returns the path actually written.
pub fn eco_burial(world: &World, path: &Path) -> Result<PathBuf, WorldError> {
    let snapshot = EcoFile {
        format_version: ECO_FORMAT_VERSION,
        dims: [world.dims.0, world.dims.1, world.dims.2],
        cells: world.cells.clone(),
    };
    let target = crate::fs_util::collision_free_path(path);
    let text = serde_json::to_string_pretty(&snapshot).expect("ecosystem serialization");
    fs::write(&target, text).map_err(|source| WorldError::Io {
        path: target.clone(),
        source,
    })?;
    Ok(target)
}

/// Reads an ecosystem snapshot back; fails without constructing a partial
/// world when the file is corrupt, truncated, or from another format
/// revision.
pub fn eco_excavate(path: &Path) -> Result<World, WorldError> {
    let text = fs::read_to_string(path).map_err(|source| WorldError::Io {
        path: path.to_path_buf(),
        source,
    })?;
    let snapshot: EcoFile = serde_json::from_str(&text).map_err(|e| WorldError::Format {
        path: path.to_path_buf(),
        reason: e.to_string(),
    })?;
    if snapshot.format_version != ECO_FORMAT_VERSION {
        return Err(WorldError::UnsupportedVersion {
            found: snapshot.format_version,
            expected: ECO_FORMAT_VERSION,
        });
    }
    let [x, y, z] = snapshot.dims;
    if x == 0 || y == 0 || z == 0 {
        return Err(WorldError::NonPositiveDimension(x, y, z));
    }
    if snapshot.cells.len() != x * y * z {
        return Err(WorldError::Format {
            path: path.to_path_buf(),
            reason: format!(
                "{} cells stored for a {x}×{y}×{z} world",
                snapshot.cells.len()
            ),
        });
    }
    Ok(World {
        dims: (x, y, z),
        cells: snapshot.cells,
    })
}
