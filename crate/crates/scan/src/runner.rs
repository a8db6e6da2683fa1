//! Deterministic chunked execution.
//!
//! The scan domain is split into fixed-size chunks. A pool of workers claims
//! chunk indices from an atomic counter and processes each chunk as a pure
//! function of its range; a single merger absorbs results in ascending chunk
//! index. Reports therefore never depend on the worker count or scheduling,
//! and the checkpoint written after each merged chunk makes kill-and-resume
//! reproduce the uninterrupted run exactly.

use std::collections::BTreeMap;
use std::path::PathBuf;
use std::sync::atomic::{AtomicBool, AtomicU64, Ordering};
use std::sync::mpsc;
use std::thread;

use serde::de::DeserializeOwned;
use serde::Serialize;

use crate::{checkpoint, ScanError};

/// A scan body: `process` must be a pure function of the chunk range.
pub trait ChunkProcessor: Sync {
    type Acc: Serialize + DeserializeOwned + Clone + Send;

    fn empty(&self) -> Self::Acc;

    /// Merge `next` into `acc`; called in ascending chunk order.
    fn absorb(&self, acc: &mut Self::Acc, next: Self::Acc);

    /// Process all moduli in `[lo, hi]`.
    fn process(&self, lo: u64, hi: u64) -> Self::Acc;
}

/// Runtime execution options. None of these affect report contents, only
/// how (and whether) the scan finishes.
#[derive(Debug, Clone)]
pub struct RunnerOpts {
    pub threads: usize,
    pub checkpoint: Option<PathBuf>,
    /// Stop after merging this many chunks in this run, leaving the
    /// checkpoint behind. A testing hook for kill/resume coverage.
    pub abort_after_chunks: Option<u64>,
    pub progress: bool,
}

impl Default for RunnerOpts {
    fn default() -> Self {
        Self {
            threads: thread::available_parallelism().map(|n| n.get()).unwrap_or(1),
            checkpoint: None,
            abort_after_chunks: None,
            progress: false,
        }
    }
}

impl RunnerOpts {
    pub fn with_threads(threads: usize) -> Self {
        Self {
            threads,
            ..Self::default()
        }
    }
}

/// Run `proc` over `[domain_lo, domain_hi]` in chunks of `chunk_size`,
/// resuming from `opts.checkpoint` when present.
pub fn run_chunked<P: ChunkProcessor>(
    domain_lo: u64,
    domain_hi: u64,
    chunk_size: u64,
    config_hash: &str,
    proc: &P,
    opts: &RunnerOpts,
) -> Result<P::Acc, ScanError> {
    assert!(domain_lo <= domain_hi && chunk_size >= 1);
    let total_chunks = (domain_hi - domain_lo) / chunk_size + 1;
    let (start_chunk, mut acc) = match &opts.checkpoint {
        Some(path) if path.exists() => checkpoint::load::<P::Acc>(path, config_hash)?,
        _ => (0, proc.empty()),
    };
    if start_chunk >= total_chunks {
        return Ok(acc);
    }

    let next = AtomicU64::new(start_chunk);
    let stop = AtomicBool::new(false);
    let threads = opts.threads.max(1);

    let mut scope_result: Result<(), ScanError> = Ok(());
    let mut aborted = false;
    thread::scope(|scope| {
        let (tx, rx) = mpsc::channel::<(u64, P::Acc)>();
        for _ in 0..threads {
            let tx = tx.clone();
            let next = &next;
            let stop = &stop;
            scope.spawn(move || loop {
                if stop.load(Ordering::Relaxed) {
                    break;
                }
                let i = next.fetch_add(1, Ordering::Relaxed);
                if i >= total_chunks {
                    break;
                }
                let lo = domain_lo + i * chunk_size;
                let hi = domain_hi.min(lo + (chunk_size - 1));
                // Send failures mean the merger is gone; just stop.
                if tx.send((i, proc.process(lo, hi))).is_err() {
                    break;
                }
            });
        }
        drop(tx);

        let mut pending: BTreeMap<u64, P::Acc> = BTreeMap::new();
        let mut expect = start_chunk;
        let mut merged_this_run = 0u64;
        'recv: while let Ok((i, out)) = rx.recv() {
            pending.insert(i, out);
            while let Some(out) = pending.remove(&expect) {
                proc.absorb(&mut acc, out);
                expect += 1;
                merged_this_run += 1;
                if let Some(path) = &opts.checkpoint {
                    if let Err(e) = checkpoint::save(path, config_hash, expect, &acc) {
                        scope_result = Err(e);
                        stop.store(true, Ordering::Relaxed);
                        break 'recv;
                    }
                }
                if opts.progress {
                    let step = (total_chunks / 20).max(1);
                    if expect % step == 0 || expect == total_chunks {
                        eprintln!("chunk {expect}/{total_chunks}");
                    }
                }
                if opts.abort_after_chunks == Some(merged_this_run) && expect < total_chunks {
                    stop.store(true, Ordering::Relaxed);
                    aborted = true;
                    break 'recv;
                }
            }
        }
    });
    scope_result?;
    if aborted {
        return Err(ScanError::Aborted);
    }
    Ok(acc)
}
