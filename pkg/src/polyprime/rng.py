"""Deterministic seed derivation for parallel sampling.

Every sample in an experiment gets its own child seed derived from the
master seed and the sample index with a splitmix64 mix.  A worker pool can
then process samples in any order, or in any partition across processes,
and each sample still sees exactly the same random stream.  That is what
makes the per-sample output byte-identical between one worker and many.
"""

import random

MASK64 = (1 << 64) - 1


def splitmix64(x: int) -> int:
    """One splitmix64 step, a cheap 64-bit avalanche mix."""
    x = (x + 0x9E3779B97F4A7C15) & MASK64
    z = x
    z = ((z ^ (z >> 30)) * 0xBF58476D1CE4E5B9) & MASK64
    z = ((z ^ (z >> 27)) * 0x94D049BB133111EB) & MASK64
    return z ^ (z >> 31)


def child_seed(master_seed: int, stream_index: int) -> int:
    """Seed for stream `stream_index` derived from `master_seed`.

    Mixes the two through splitmix64 twice so that nearby master seeds or
    indices do not produce correlated children.
    """
    h = splitmix64(master_seed & MASK64)
    h = splitmix64((h ^ (stream_index & MASK64)) + 0x632BE59BD9B4E019)
    return h


def stream(master_seed: int, stream_index: int) -> random.Random:
    """Independent random.Random for one sample / stream."""
    return random.Random(child_seed(master_seed, stream_index))


def uniform_int(rng: random.Random, lo: int, hi: int) -> int:
    """Uniform integer in [lo, hi] via rejection from a power of two.

    Uses only getrandbits so the draw depends on nothing but the stream
    state; the rejection bound is the least power of two >= the range.
    """
    span = hi - lo + 1
    if span <= 0:
        raise ValueError("empty range")
    bits = (span - 1).bit_length()
    if bits == 0:
        return lo
    while True:
        v = rng.getrandbits(bits)
        if v < span:
            return lo + v
