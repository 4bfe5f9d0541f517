use rayon::{ThreadPool, ThreadPoolBuilder};

use crate::error::{CliError, Result};

pub const THREADS_ENV: &str = "FASTKDE_THREADS";

/// Worker pool capped by `FASTKDE_THREADS` when set, otherwise all cores.
pub fn pool() -> Result<ThreadPool> {
    let mut builder = ThreadPoolBuilder::new();
    if let Ok(v) = std::env::var(THREADS_ENV) {
        let n = v
            .trim()
            .parse::<usize>()
            .ok()
            .filter(|&n| n > 0)
            .ok_or_else(|| CliError::Usage(format!("{THREADS_ENV} must be a positive integer, got {v:?}")))?;
        builder = builder.num_threads(n);
    }
    builder.build().map_err(|e| CliError::Usage(format!("cannot start worker pool: {e}")))
}
