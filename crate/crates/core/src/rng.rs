//! Reproducible random streams.
//!
//! Every random draw in the crate comes from a ChaCha8 keystream keyed by
//! the user seed. ChaCha is counter based: the 64-bit stream id selects an
//! independent keystream, so each `(operation, chunk)` pair gets its own
//! stream and no draw depends on how chunks are scheduled across threads.
//!
//! Stream id layout (most significant bits first):
//!
//! | bits   | content                         |
//! |--------|---------------------------------|
//! | 63..48 | operation tag ([`Op`])          |
//! | 47..0  | chunk / block index             |

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

/// Samples per chunk for sample-parallel generators.
pub const CHUNK: usize = 1 << 16;

/// Operation tags. Values are part of the reproducibility contract and must
/// not be renumbered.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
#[repr(u16)]
pub enum Op {
    ConsistentLlr = 1,
    CheckNode = 2,
    ConvBlock = 3,
    Oracle = 4,
    BcjrOracle = 5,
}

/// RNG for chunk `index` of operation `op` under `seed`.
pub fn stream(seed: u64, op: Op, index: u64) -> ChaCha8Rng {
    debug_assert!(index < (1 << 48));
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(((op as u64) << 48) | (index & ((1 << 48) - 1)));
    rng
}

/// Split `n` items into `(chunk_index, start, len)` triples of at most [`CHUNK`].
pub fn chunks(n: usize) -> impl Iterator<Item = (u64, usize, usize)> {
    (0..n.div_ceil(CHUNK)).map(move |c| {
        let start = c * CHUNK;
        (c as u64, start, CHUNK.min(n - start))
    })
}

/// Map `f` over chunk descriptors, in parallel when enabled, returning the
/// results in chunk order.
pub(crate) fn map_chunks<T, F>(items: Vec<(u64, usize, usize)>, f: F) -> Vec<T>
where
    T: Send,
    F: Fn((u64, usize, usize)) -> T + Sync + Send,
{
    #[cfg(feature = "parallel")]
    {
        use rayon::prelude::*;
        items.into_par_iter().map(f).collect()
    }
    #[cfg(not(feature = "parallel"))]
    {
        items.into_iter().map(f).collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::Rng;

    #[test]
    fn same_seed_same_stream() {
        let mut r1 = stream(9, Op::CheckNode, 3);
        let mut r2 = stream(9, Op::CheckNode, 3);
        for _ in 0..100 {
            assert_eq!(r1.random::<u64>(), r2.random::<u64>());
        }
    }

    #[test]
    fn streams_differ_by_op_and_chunk() {
        let x: u64 = stream(1, Op::CheckNode, 0).random();
        let y: u64 = stream(1, Op::CheckNode, 1).random();
        let z: u64 = stream(1, Op::ConvBlock, 0).random();
        let w: u64 = stream(2, Op::CheckNode, 0).random();
        assert_ne!(x, y);
        assert_ne!(x, z);
        assert_ne!(x, w);
    }

    #[test]
    fn chunking_covers_range() {
        let n = 3 * CHUNK + 17;
        let c: Vec<_> = chunks(n).collect();
        assert_eq!(c.len(), 4);
        assert_eq!(c[3], (3, 3 * CHUNK, 17));
        assert_eq!(c.iter().map(|t| t.2).sum::<usize>(), n);
    }
}
