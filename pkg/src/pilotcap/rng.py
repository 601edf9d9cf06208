"""Seedable counter-based random stream.

Algorithm (fixed, so results can be reproduced by any implementation):

* Raw draw ``k`` (k = 0, 1, ...) for seed ``s`` is the SplitMix64 output
  ``mix(s + (k + 1) * 0x9E3779B97F4A7C15 mod 2**64)`` with the standard
  Stafford variant-13 finalizer (shifts 30/27/31, multipliers
  ``0xBF58476D1CE4E5B9`` and ``0x94D049BB133111EB``).  This equals the
  k-th output of a stateful SplitMix64 generator seeded with ``s``.
* A uniform is ``((raw >> 11) + 1) * 2**-53``, in (0, 1].
* Normals use the basic (non-rejection) Box-Muller transform on consecutive
  raw draws ``(u1, u2)``: ``sqrt(-2 ln u1) * cos(2 pi u2)`` then
  ``sqrt(-2 ln u1) * sin(2 pi u2)``.  A request for ``n`` normals always
  consumes ``2 * ceil(n / 2)`` raw draws; an unused sine half is discarded.

Because draw ``k`` depends only on ``(seed, k)``, any block of trials can be
regenerated from its counter offset alone.
"""

from __future__ import annotations

from . import _backend

UINT64_MASK = (1 << 64) - 1


class CounterRng:
    """Stream cursor over the SplitMix64 sequence of one seed."""

    def __init__(self, seed: int, counter: int = 0):
        seed = int(seed)
        if not 0 <= seed <= UINT64_MASK:
            raise ValueError("seed must be an unsigned 64-bit integer")
        self.seed = seed
        self.counter = int(counter)

    def raw(self, n):
        out = _backend.kernels.splitmix64(self.seed, self.counter, n)
        self.counter += n
        return out

    def uniforms(self, n):
        out = _backend.kernels.uniforms(self.seed, self.counter, n)
        self.counter += n
        return out

    def normals(self, n):
        out = _backend.kernels.normals(self.seed, self.counter, n)
        self.counter += 2 * ((n + 1) // 2)
        return out

    def __repr__(self):
        return f"CounterRng(seed={self.seed}, counter={self.counter})"
