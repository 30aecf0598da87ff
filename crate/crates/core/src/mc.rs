//! Seeded, reproducible Monte-Carlo plumbing.
//!
//! Split rule: `n` samples are cut into chunks of [`CHUNK`] samples. Chunk `i`
//! draws from a ChaCha8 generator seeded with the master seed and switched to
//! stream `i`. Chunks run in parallel; hit counts are integers, so their sum
//! does not depend on scheduling. Floating-point partial sums are collected in
//! chunk order and added sequentially.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

pub type Rng = ChaCha8Rng;

pub const CHUNK: u64 = 1 << 16;

/// Generator for stream `stream` of `seed`.
pub fn stream_rng(seed: u64, stream: u64) -> Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(stream);
    rng
}

/// Single-stream generator for sequential helpers.
pub fn rng(seed: u64) -> Rng {
    stream_rng(seed, 0)
}

fn chunks(samples: u64) -> impl IndexedParallelIterator<Item = (u64, u64)> {
    let n_chunks = samples.div_ceil(CHUNK) as usize;
    (0..n_chunks).into_par_iter().map(move |i| {
        let i = i as u64;
        let len = CHUNK.min(samples - i * CHUNK);
        (i, len)
    })
}

/// Counts draws for which `hit` returns true.
pub fn count_hits<F>(seed: u64, samples: u64, hit: F) -> u64
where
    F: Fn(&mut Rng) -> bool + Sync,
{
    chunks(samples)
        .map(|(i, len)| {
            let mut rng = stream_rng(seed, i);
            (0..len).filter(|_| hit(&mut rng)).count() as u64
        })
        .sum()
}

/// Counts draws per category; `classify` returns an index below `bins`.
pub fn count_bins<F>(seed: u64, samples: u64, bins: usize, classify: F) -> Vec<u64>
where
    F: Fn(&mut Rng) -> Option<usize> + Sync,
{
    let partial: Vec<Vec<u64>> = chunks(samples)
        .map(|(i, len)| {
            let mut rng = stream_rng(seed, i);
            let mut counts = vec![0u64; bins];
            for _ in 0..len {
                if let Some(b) = classify(&mut rng) {
                    counts[b] += 1;
                }
            }
            counts
        })
        .collect();
    let mut total = vec![0u64; bins];
    for c in partial {
        for (t, v) in total.iter_mut().zip(c) {
            *t += v;
        }
    }
    total
}

/// Collects `draw` over all samples in deterministic order.
pub fn collect<T, F>(seed: u64, samples: u64, draw: F) -> Vec<T>
where
    T: Send,
    F: Fn(&mut Rng) -> T + Sync,
{
    let parts: Vec<Vec<T>> = chunks(samples)
        .map(|(i, len)| {
            let mut rng = stream_rng(seed, i);
            (0..len).map(|_| draw(&mut rng)).collect()
        })
        .collect();
    parts.into_iter().flatten().collect()
}

/// Bernoulli estimate `scale * p` with its standard error.
pub fn proportion_estimate(hits: u64, samples: u64, scale: f64) -> (f64, f64) {
    let n = samples as f64;
    let p = hits as f64 / n;
    (scale * p, scale * (p * (1.0 - p) / n).sqrt())
}
