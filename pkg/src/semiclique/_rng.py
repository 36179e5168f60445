"""Deterministic seed derivation and labeled random streams."""
import hashlib

import numpy as np

_MASK64 = (1 << 64) - 1
_GOLDEN = np.uint64(0x9E3779B97F4A7C15)


def derive_seed(*parts) -> int:
    """Stable 64-bit hash of a tuple of ints/strings (canonical text form)."""
    text = "\x1f".join(str(p) for p in parts).encode()
    return int.from_bytes(hashlib.blake2b(text, digest_size=8).digest(), "little")


def stream(seed: int, label: str) -> np.random.Generator:
    """Counter-based generator keyed by (master seed, stream label)."""
    return np.random.Generator(np.random.Philox(key=derive_seed(seed, label)))


def _splitmix64(x: np.ndarray) -> np.ndarray:
    z = x + _GOLDEN
    z = (z ^ (z >> np.uint64(30))) * np.uint64(0xBF58476D1CE4E5B9)
    z = (z ^ (z >> np.uint64(27))) * np.uint64(0x94D049BB133111EB)
    return z ^ (z >> np.uint64(31))


def indexed_draws(key: int, start: int, count: int, bound: int, width: int = 1) -> np.ndarray:
    """Integers in [0, bound) for sample indices start..start+count-1.

    Draw ``i`` depends only on (key, i), so any budget yields a prefix of a
    larger one and the result does not depend on how work is chunked.
    """
    idx = np.arange(start * width, (start + count) * width, dtype=np.uint64)
    with np.errstate(over="ignore"):
        h = _splitmix64(idx ^ np.uint64(key & _MASK64))
        h = _splitmix64(h)
    out = (h % np.uint64(bound)).astype(np.int64)
    return out.reshape(count, width) if width > 1 else out
