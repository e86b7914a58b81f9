//! Small filesystem helpers shared by the snapshot writers.

use std::path::{Path, PathBuf};

/// Returns `path` if nothing exists there, otherwise the first numbered
/// variant (`name.1.ext`, `name.2.ext`, ...) that is free. Snapshot writers
/// use this so a rerun never silently overwrites earlier output.
pub(crate) fn collision_free_path(path: &Path) -> PathBuf {
    if !path.exists() {
        return path.to_path_buf();
    }
    let stem = path
        .file_stem()
        .map(|s| s.to_string_lossy().into_owned())
        .unwrap_or_default();
    let extension = path.extension().map(|e| e.to_string_lossy().into_owned());
    for counter in 1u64.. {
        let name = match &extension {
            Some(ext) => format!("{stem}.{counter}.{ext}"),
            None => format!("{stem}.{counter}"),
        };
        let candidate = path.with_file_name(name);
        if !candidate.exists() {
            return candidate;
        }
    }
    unreachable!("u64 counter exhausted")
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn numbers_existing_paths() {
        let dir = tempfile::tempdir().unwrap();
        let target = dir.path().join("snap_10.gap");
        assert_eq!(collision_free_path(&target), target);
        std::fs::write(&target, "x").unwrap();
        assert_eq!(
            collision_free_path(&target),
            dir.path().join("snap_10.1.gap")
        );
        std::fs::write(dir.path().join("snap_10.1.gap"), "x").unwrap();
        assert_eq!(
            collision_free_path(&target),
            dir.path().join("snap_10.2.gap")
        );
    }
}
