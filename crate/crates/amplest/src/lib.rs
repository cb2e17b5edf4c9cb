//! Experiment harness, file formats and thread control on top of
//! `amplest-core`.

pub mod harness;
pub mod output;

use std::num::NonZeroUsize;

pub use amplest_core as core;

/// Environment variable that caps the number of worker threads.
pub const THREADS_ENV: &str = "AMPLEST_THREADS";

/// Worker count from `AMPLEST_THREADS`, or `None` to use every core.
pub fn threads_from_env() -> Result<Option<NonZeroUsize>, String> {
    match std::env::var(THREADS_ENV) {
        Err(std::env::VarError::NotPresent) => Ok(None),
        Err(e) => Err(format!("{THREADS_ENV}: {e}")),
        Ok(s) if s.trim().is_empty() => Ok(None),
        Ok(s) => s
            .trim()
            .parse::<NonZeroUsize>()
            .map(Some)
            .map_err(|_| format!("{THREADS_ENV} must be a positive integer, got {s:?}")),
    }
}

/// Thread pool sized by `AMPLEST_THREADS`.
pub fn thread_pool() -> anyhow::Result<rayon::ThreadPool> {
    let mut builder = rayon::ThreadPoolBuilder::new();
    if let Some(n) = threads_from_env().map_err(anyhow::Error::msg)? {
        builder = builder.num_threads(n.get());
    }
    Ok(builder.build()?)
}
