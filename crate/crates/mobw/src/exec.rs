//! Execution strategy for the embarrassingly parallel loops (posterior draws,
//! simulation replications).
//!
//! Work is split into fixed-size chunks and every chunk seeds its own RNG from
//! `(master seed, stream, chunk index)`, so results are byte-identical no
//! matter how many workers run them — including the sequential fallback used
//! when the `parallel` feature is disabled.

#[cfg(feature = "parallel")]
use rayon::prelude::*;

/// How an embarrassingly parallel loop is executed.
#[derive(Copy, Clone, Debug, PartialEq, Eq)]
pub enum Parallelism {
    /// Plain sequential loop. Always available.
    Sequential,
    /// Rayon work-stealing pool (requires the `parallel` feature).
    #[cfg(feature = "parallel")]
    Rayon,
}

// Not derivable: the default depends on whether the `parallel` feature is on.
#[allow(clippy::derivable_impls)]
impl Default for Parallelism {
    fn default() -> Self {
        #[cfg(feature = "parallel")]
        {
            Parallelism::Rayon
        }
        #[cfg(not(feature = "parallel"))]
        {
            Parallelism::Sequential
        }
    }
}

/// Number of posterior draws produced per independently seeded chunk.
pub(crate) const CHUNK: usize = 1024;

/// Maps `f` over `0..n`, preserving index order in the output.
pub(crate) fn map_indexed<T, F>(par: Parallelism, n: usize, f: F) -> Vec<T>
where
    T: Send,
    F: Fn(usize) -> T + Sync + Send,
{
    match par {
        Parallelism::Sequential => (0..n).map(f).collect(),
        #[cfg(feature = "parallel")]
        Parallelism::Rayon => (0..n).into_par_iter().map(f).collect(),
    }
}

fn splitmix64(mut z: u64) -> u64 {
    z = z.wrapping_add(0x9E37_79B9_7F4A_7C15);
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

/// Derives the seed for one chunk of one logical stream of a master seed.
///
/// Nested splitmix64 hashing keeps distinct `(master, stream, index)` triples
/// on distinct streams regardless of worker count or execution order.
pub(crate) fn derive_seed(master: u64, stream: u64, index: u64) -> u64 {
    splitmix64(splitmix64(splitmix64(master) ^ stream) ^ index)
}

/// Logical stream tags, one per independent consumer of a master seed.
pub(crate) mod streams {
    /// Chunked posterior draws.
    pub const POSTERIOR: u64 = 1;
    /// Per-replication data generation and analysis in simulation studies.
    pub const REPLICATION: u64 = 2;
}
