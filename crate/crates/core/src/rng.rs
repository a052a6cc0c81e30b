//! Seeded random streams for reproducible, parallel network sampling.
//!
//! The generator is ChaCha20 as implemented by `rand_chacha` 0.9:
//!
//! * key: `ChaCha20Rng::seed_from_u64(seed)` (the `rand_core` PCG32 key expansion),
//! * stream id: the 1-based snapshot index `t`; stream 0 is reserved for latent node
//!   positions of graphon models,
//! * draws: one `next_u64` per upper-triangle entry `(i, j)`, `i <= j`, in row-major
//!   order, mapped to a uniform `(x >> 11) · 2⁻⁵³` in `[0, 1)`; the edge is present iff
//!   the uniform is below `P_ij`.
//!
//! ChaCha is a counter-based cipher, so the draw for `(seed, t, i, j)` is a fixed word
//! position of a fixed stream and snapshots can be generated in any order or in parallel.

use rand_chacha::rand_core::{RngCore, SeedableRng};
use rand_chacha::ChaCha20Rng;

use crate::matrix::{AdjacencySnapshot, LinkProbMatrix};

/// Stream reserved for latent positions (snapshots use `t >= 1`).
pub const LATENT_STREAM: u64 = 0;

/// The random stream for `(seed, stream)`.
pub fn substream(seed: u64, stream: u64) -> ChaCha20Rng {
    let mut rng = ChaCha20Rng::seed_from_u64(seed);
    rng.set_stream(stream);
    rng
}

/// Uniform in `[0, 1)` with 53 random bits.
pub fn next_uniform<R: RngCore + ?Sized>(rng: &mut R) -> f64 {
    (rng.next_u64() >> 11) as f64 * (1.0 / (1u64 << 53) as f64)
}

/// Samples `A_ij ~ Bernoulli(P_ij)` independently for `i <= j` and mirrors.
pub fn sample_snapshot<R: RngCore + ?Sized>(p: &LinkProbMatrix, rng: &mut R) -> AdjacencySnapshot {
    AdjacencySnapshot::from_upper(p.n(), |i, j| next_uniform(rng) < p.get(i, j))
}
