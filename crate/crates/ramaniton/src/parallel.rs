//! Index-ordered data-parallel mapping with a sequential fallback.
//!
//! Grid evaluations (time series, q-sweeps, the optimizer's coarse grid) are
//! embarrassingly parallel. Everything funnels through [`map_ordered`] /
//! [`try_map_ordered`], which guarantee two properties the rest of the crate
//! relies on:
//!
//! * results are assembled **by input index**, never by completion order, so
//!   output bytes are identical at any thread count, and
//! * when items fail, the error reported is the one at the **lowest index**,
//!   so failures are deterministic too.
//!
//! With the default `parallel` feature the maps run on rayon; without it
//! they degrade to plain sequential iteration with identical semantics. The
//! always-sequential twins ([`map_ordered_seq`], [`try_map_ordered_seq`])
//! stay available in both builds so benchmarks can compare the two paths in
//! a single binary.

#[cfg(feature = "parallel")]
use rayon::prelude::*;

/// Environment variable that caps the rayon worker count.
pub const THREADS_ENV_VAR: &str = "RAMANITON_THREADS";

/// Maps `f` over `items`, collecting results in input order.
pub fn map_ordered<T, R, F>(items: &[T], f: F) -> Vec<R>
where
    T: Sync,
    R: Send,
    F: Fn(&T) -> R + Sync + Send,
{
    #[cfg(feature = "parallel")]
    {
        items.par_iter().map(f).collect()
    }
    #[cfg(not(feature = "parallel"))]
    {
        items.iter().map(f).collect()
    }
}

/// Sequential twin of [`map_ordered`], compiled unconditionally.
pub fn map_ordered_seq<T, R, F>(items: &[T], f: F) -> Vec<R>
where
    F: Fn(&T) -> R,
{
    items.iter().map(f).collect()
}

/// Fallible map; on failure returns the error with the lowest input index.
pub fn try_map_ordered<T, R, E, F>(items: &[T], f: F) -> Result<Vec<R>, E>
where
    T: Sync,
    R: Send,
    E: Send,
    F: Fn(&T) -> Result<R, E> + Sync + Send,
{
    let results = map_ordered(items, f);
    let mut out = Vec::with_capacity(results.len());
    for r in results {
        out.push(r?);
    }
    Ok(out)
}

/// Sequential twin of [`try_map_ordered`]. Short-circuits on first error,
/// which for a sequential scan is already the lowest index.
pub fn try_map_ordered_seq<T, R, E, F>(items: &[T], f: F) -> Result<Vec<R>, E>
where
    F: Fn(&T) -> Result<R, E>,
{
    items.iter().map(f).collect()
}

/// Applies the `RAMANITON_THREADS` cap to the global rayon pool, returning
/// the cap if one was set and parsed. Call once at process start; later
/// calls are harmless (an already-built pool is left as is). Without the
/// `parallel` feature this only parses the variable.
pub fn configure_threads_from_env() -> Option<usize> {
    let cap = std::env::var(THREADS_ENV_VAR)
        .ok()
        .and_then(|v| v.trim().parse::<usize>().ok())
        .filter(|&n| n >= 1)?;
    #[cfg(feature = "parallel")]
    {
        // Ignore the error: the pool may already exist (e.g. in tests), and
        // an existing pool does not affect correctness, only the cap.
        let _ = rayon::ThreadPoolBuilder::new()
            .num_threads(cap)
            .build_global();
    }
    Some(cap)
}
