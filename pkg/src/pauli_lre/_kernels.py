"""Compiled inner loops of the least-squares accumulation step.

Both kernels consume a block of per-setting frequency rows plus the
place-value-scaled axis digits of each setting, and scatter-accumulate the
transformed rows into the raw coefficient vector.  The fast kernel runs the
in-place butterfly per row (O(n 2**n) per setting); the direct kernel
multiplies each row by the materialised sign matrix (O(4**n) per setting,
the complexity of the storage-optimised algorithm without the transform) in
cache-friendly tiles.

Setting locations are rebuilt inside the kernels by subset-sum doubling, so
no index arrays ever hit main memory.
"""

import numpy as np
from numba import njit

_ROW_TILE = 32  # frequency rows per tile; keeps the tile resident in L2


@njit(cache=True, fastmath=True, nogil=True)
def _fill_locations(place_digits, row, locs):
    """locs[t] = sum of place-scaled digits over the qubits in subset t."""
    n = place_digits.shape[1]
    locs[0] = 0
    size = 1
    for j in range(n):
        w = place_digits[row, n - 1 - j]
        for t in range(size):
            locs[size + t] = locs[t] + w
        size *= 2


@njit(cache=True, fastmath=True, nogil=True)
def accumulate_fast(freq, place_digits, raw, scale):
    """Butterfly-transform each frequency row and scatter into raw."""
    rows, d = freq.shape
    buf = np.empty(d)
    locs = np.empty(d, np.int64)
    for b in range(rows):
        f = freq[b]
        for s in range(d):
            buf[s] = f[s]
        h = 1
        while h < d:
            step = 2 * h
            for start in range(0, d, step):
                for j in range(start, start + h):
                    top = buf[j]
                    bot = buf[j + h]
                    buf[j] = top + bot
                    buf[j + h] = top - bot
            h = step
        _fill_locations(place_digits, b, locs)
        for t in range(d):
            raw[locs[t]] += buf[t] * scale


@njit(cache=True, fastmath=True, nogil=True)
def accumulate_direct(freq, place_digits, sign, raw, scale):
    """Multiply each frequency row by the dense sign matrix and scatter."""
    rows, d = freq.shape
    locs = np.empty((_ROW_TILE, d), np.int64)
    for b0 in range(0, rows, _ROW_TILE):
        b1 = min(rows, b0 + _ROW_TILE)
        for b in range(b0, b1):
            _fill_locations(place_digits, b, locs[b - b0])
        for t in range(d):
            srow = sign[t]
            for b in range(b0, b1):
                f = freq[b]
                acc = 0.0
                for s in range(d):
                    acc += srow[s] * f[s]
                raw[locs[b - b0, t]] += acc * scale


def warm_up():
    """Trigger JIT compilation on tiny inputs (cached across processes)."""
    freq = np.full((2, 4), 0.25)
    digits = np.array([[4, 1], [4, 2]], dtype=np.int64)
    raw = np.zeros(16)
    accumulate_fast(freq, digits, raw, 0.5)
    accumulate_direct(freq, digits, np.ones((4, 4)), raw, 0.5)
