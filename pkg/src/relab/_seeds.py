"""Deterministic per-unit seed derivation.

Per-unit seeds come from a splitmix64 finalizer applied to
(master_seed XOR GOLDEN * (index + 1)) so that distinct chains, replicas and
grid points get decorrelated 64-bit streams reproducibly on every platform.
"""

from __future__ import annotations

_MASK = (1 << 64) - 1
GOLDEN = 0x9E3779B97F4A7C15


def splitmix64(x: int) -> int:
    x &= _MASK
    x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9 & _MASK
    x = (x ^ (x >> 27)) * 0x94D049BB133111EB & _MASK
    return x ^ (x >> 31)


def derive_seed(master: int, index: int) -> int:
    """64-bit seed for unit `index` under `master`."""
    return splitmix64((master & _MASK) ^ (GOLDEN * (index + 1) & _MASK))
