"""Deterministic random-stream derivation.

Every source of randomness in a run is derived from a single master seed
plus a *path* of identifiers (trial index, purpose, policy identity, ...).
Streams are therefore independent of iteration order and of how many other
streams exist, which is what makes trials embarrassingly parallel and
sweep cells independent of each other.

Two kinds of streams exist:

* ordinary sequential streams (``derive_rng``), backed by numpy's PCG64
  seeded through ``SeedSequence`` on the encoded path;
* counter-based reward noise (``RewardNoise``), which produces the draw
  for a ``(step, arm)`` pair directly from a hash of the pair, so the
  same noise is seen by every policy that pulls that arm at that step
  regardless of what it pulled before (common random numbers).
"""

from __future__ import annotations

import hashlib
import math
import struct

import numpy as np

_MASK64 = 0xFFFFFFFFFFFFFFFF

# purpose tags for the per-trial streams
ENV_INIT = "env_init"
ENV_DRIFT = "env_drift"
ENV_REWARD = "env_reward"
POLICY = "policy"


def encode_part(part) -> int:
    """Map a path component to a stable nonnegative integer.

    Strings hash through SHA-256 (stable across processes and runs,
    unlike ``hash()``), floats go through their IEEE-754 bit pattern so
    that distinct values never collide, ints pass through.
    """
    if isinstance(part, bool):
        raise TypeError("bool is ambiguous in a stream path")
    if isinstance(part, int):
        if part < 0:
            raise ValueError(f"negative path component: {part}")
        return part
    if isinstance(part, float):
        return struct.unpack("<Q", struct.pack("<d", part))[0]
    if isinstance(part, str):
        digest = hashlib.sha256(part.encode("utf-8")).digest()
        return int.from_bytes(digest[:8], "little")
    raise TypeError(f"unsupported path component type: {type(part)!r}")


def stream_key(master_seed: int, *path) -> list[int]:
    """Entropy list for ``SeedSequence`` identifying one stream."""
    return [encode_part(master_seed)] + [encode_part(p) for p in path]


def derive_rng(master_seed: int, *path) -> np.random.Generator:
    """Independent generator for the stream named by ``path``."""
    return np.random.default_rng(np.random.SeedSequence(stream_key(master_seed, *path)))


def derive_seed(master_seed: int, *path) -> int:
    """Single 63-bit integer seed for the stream named by ``path``."""
    state = np.random.SeedSequence(stream_key(master_seed, *path)).generate_state(2, dtype=np.uint32)
    return (int(state[0]) << 31) ^ int(state[1])


def _splitmix64(z: int) -> int:
    z = (z + 0x9E3779B97F4A7C15) & _MASK64
    z = ((z ^ (z >> 30)) * 0xBF58476D1CE4E5B9) & _MASK64
    z = ((z ^ (z >> 27)) * 0x94D049BB133111EB) & _MASK64
    return z ^ (z >> 31)


def _mix(*words: int) -> int:
    acc = 0x243F6A8885A308D3
    for w in words:
        acc = _splitmix64(acc ^ (w & _MASK64))
    return acc


class RewardNoise:
    """Counter-based noise source keyed by ``(trial, step, arm)``.

    Stateless between calls: the draw for a tuple is a pure function of
    the key, so policies that diverge in their choices still face the
    exact same reward realisation whenever they pull the same arm at the
    same step.
    """

    def __init__(self, master_seed: int, trial: int):
        self._key = _mix(encode_part(master_seed), encode_part(ENV_REWARD), trial)

    def uniform(self, step: int, arm: int, slot: int = 0) -> float:
        """Uniform draw in [0, 1) for the given tuple."""
        bits = _mix(self._key, step, arm, slot)
        return (bits >> 11) * (1.0 / (1 << 53))

    def normal(self, step: int, arm: int) -> float:
        """Standard normal draw for the given tuple (Box-Muller)."""
        u1 = self.uniform(step, arm, 0)
        u2 = self.uniform(step, arm, 1)
        # u1 = 0 would blow up the log; nudge to the smallest representable
        r = math.sqrt(-2.0 * math.log(u1 if u1 > 0.0 else 5e-324))
        return r * math.cos(2.0 * math.pi * u2)
