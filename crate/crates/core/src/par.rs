//! Chunked Monte Carlo driver.
//!
//! Work is cut into fixed-size chunks and chunk `c` always draws from stream
//! `c` of the master seed, so results are bit-identical whether the chunks
//! run on a rayon pool or sequentially.

use crate::rng::RngStream;

pub const DEFAULT_CHUNK: usize = 2048;

/// A Monte Carlo workload of `n` independent draws.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct McPlan {
    pub seed: u64,
    pub n: usize,
    pub chunk: usize,
}

impl McPlan {
    pub fn new(seed: u64, n: usize) -> Self {
        Self {
            seed,
            n,
            chunk: DEFAULT_CHUNK,
        }
    }

    pub fn chunks(&self) -> usize {
        self.n.div_ceil(self.chunk.max(1))
    }

    fn chunk_len(&self, c: usize) -> usize {
        let chunk = self.chunk.max(1);
        chunk.min(self.n - c * chunk)
    }
}

/// Runs `f(stream, len)` for every chunk sequentially, in chunk order.
pub fn map_chunks_seq<T, F>(plan: &McPlan, f: F) -> Vec<T>
where
    F: Fn(&mut RngStream, usize) -> T,
{
    (0..plan.chunks())
        .map(|c| {
            let mut rng = RngStream::new(plan.seed, c as u64);
            f(&mut rng, plan.chunk_len(c))
        })
        .collect()
}

/// Runs `f(stream, len)` for every chunk on the current rayon pool; output
/// keeps chunk order.
#[cfg(feature = "parallel")]
pub fn map_chunks_par<T, F>(plan: &McPlan, f: F) -> Vec<T>
where
    T: Send,
    F: Fn(&mut RngStream, usize) -> T + Sync + Send,
{
    use rayon::prelude::*;
    (0..plan.chunks())
        .into_par_iter()
        .map(|c| {
            let mut rng = RngStream::new(plan.seed, c as u64);
            f(&mut rng, plan.chunk_len(c))
        })
        .collect()
}

/// Parallel when the `parallel` feature is on, sequential otherwise.
pub fn map_chunks<T, F>(plan: &McPlan, f: F) -> Vec<T>
where
    T: Send,
    F: Fn(&mut RngStream, usize) -> T + Sync + Send,
{
    #[cfg(feature = "parallel")]
    {
        map_chunks_par(plan, f)
    }
    #[cfg(not(feature = "parallel"))]
    {
        map_chunks_seq(plan, f)
    }
}

/// Collects `n` scalar draws in deterministic order.
pub fn sample_vec<F>(plan: &McPlan, draw: F) -> Vec<f64>
where
    F: Fn(&mut RngStream) -> f64 + Sync + Send,
{
    map_chunks(plan, |rng, len| (0..len).map(|_| draw(rng)).collect::<Vec<_>>())
        .into_iter()
        .flatten()
        .collect()
}

/// Fallible variant of [`sample_vec`]; the first error in chunk order wins.
pub fn try_sample_vec<F, E>(plan: &McPlan, draw: F) -> Result<Vec<f64>, E>
where
    E: Send,
    F: Fn(&mut RngStream) -> Result<f64, E> + Sync + Send,
{
    let chunks = map_chunks(plan, |rng, len| (0..len).map(|_| draw(rng)).collect::<Result<Vec<_>, E>>());
    let mut out = Vec::with_capacity(plan.n);
    for c in chunks {
        out.extend(c?);
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn chunking_covers_all_draws() {
        let plan = McPlan {
            seed: 1,
            n: 10_001,
            chunk: 1000,
        };
        assert_eq!(plan.chunks(), 11);
        assert_eq!(sample_vec(&plan, |r| r.uniform_open()).len(), 10_001);
    }

    #[cfg(feature = "parallel")]
    #[test]
    fn parallel_matches_sequential_bitwise() {
        let plan = McPlan {
            seed: 99,
            n: 5000,
            chunk: 300,
        };
        let f = |rng: &mut RngStream, len: usize| (0..len).map(|_| rng.exp1()).collect::<Vec<_>>();
        assert_eq!(map_chunks_seq(&plan, f), map_chunks_par(&plan, f));
    }
}
