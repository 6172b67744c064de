"""Binary density-matrix file: fixed header, then row-major complex entries.

Layout is little-endian throughout: 4-byte magic ``PLRE``, uint32 version,
uint32 n, then 2**n * 2**n complex values as float64 (real, imag) pairs.
Binary keeps reconstructions exact across the write/read boundary.
"""

import struct

import numpy as np

from . import pauli

_MAGIC = b"PLRE"
_VERSION = 1
_HEADER = struct.Struct("<4sII")


def write_state(path, rho: np.ndarray) -> int:
    """Write a dense density matrix; returns bytes written."""
    rho = np.ascontiguousarray(rho, dtype=np.complex128)
    d = rho.shape[0]
    if rho.ndim != 2 or rho.shape[1] != d or d & (d - 1):
        raise ValueError(f"expected a square 2**n x 2**n matrix, got {rho.shape}")
    n = pauli.check_qubit_count(d.bit_length() - 1)
    payload = _HEADER.pack(_MAGIC, _VERSION, n) + rho.astype("<c16").tobytes()
    with open(path, "wb") as fh:
        fh.write(payload)
    return len(payload)


def read_state(path) -> tuple[int, np.ndarray]:
    """Read a density-matrix file, returning (n, matrix)."""
    with open(path, "rb") as fh:
        blob = fh.read()
    if len(blob) < _HEADER.size:
        raise ValueError(f"{path}: truncated state file")
    magic, version, n = _HEADER.unpack_from(blob)
    if magic != _MAGIC:
        raise ValueError(f"{path}: bad magic {magic!r}, not a state file")
    if version != _VERSION:
        raise ValueError(f"{path}: unsupported state-file version {version}")
    n = pauli.check_qubit_count(n)
    d = 1 << n
    expected = _HEADER.size + d * d * 16
    if len(blob) != expected:
        raise ValueError(f"{path}: size {len(blob)} bytes, expected {expected} for n={n}")
    data = np.frombuffer(blob, dtype="<c16", offset=_HEADER.size)
    return n, data.reshape(d, d).astype(np.complex128)
