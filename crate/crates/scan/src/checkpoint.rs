//! Checkpoint files: the config hash, the next chunk index, and the partial
//! accumulator. Resuming from a checkpoint replays the remaining chunks and
//! yields a report byte-identical to an uninterrupted run.

use std::fs;
use std::path::Path;

use serde::de::DeserializeOwned;
use serde::{Deserialize, Serialize};

use crate::ScanError;

#[derive(Serialize, Deserialize)]
struct CheckpointFile<A> {
    config_hash: String,
    next_chunk: u64,
    acc: A,
}

/// Atomically persist progress: everything before `next_chunk` is merged
/// into `acc`.
pub fn save<A: Serialize>(
    path: &Path,
    config_hash: &str,
    next_chunk: u64,
    acc: &A,
) -> Result<(), ScanError> {
    let file = CheckpointFile {
        config_hash: config_hash.to_string(),
        next_chunk,
        acc,
    };
    let tmp = path.with_extension("tmp");
    fs::write(&tmp, serde_json::to_vec(&file)?)?;
    fs::rename(&tmp, path)?;
    Ok(())
}

/// Load a checkpoint, refusing one written by a different configuration.
pub fn load<A: DeserializeOwned>(path: &Path, config_hash: &str) -> Result<(u64, A), ScanError> {
    let bytes = fs::read(path)?;
    let file: CheckpointFile<A> = serde_json::from_slice(&bytes)?;
    if file.config_hash != config_hash {
        return Err(ScanError::CheckpointMismatch {
            expected: config_hash.to_string(),
            found: file.config_hash,
        });
    }
    Ok((file.next_chunk, file.acc))
}
