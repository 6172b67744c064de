"""Shared dense oracles built from explicit tensor products.

Everything here is deliberately independent of the package's sparse index
arithmetic: digits are decoded with plain Python arithmetic and operators are
materialised with np.kron, so these helpers can serve as ground truth for the
optimised code paths.
"""

import numpy as np
import pytest

SIGMA = [
    np.eye(2, dtype=complex),
    np.array([[0, 1], [1, 0]], dtype=complex),
    np.array([[0, -1j], [1j, 0]], dtype=complex),
    np.array([[1, 0], [0, -1]], dtype=complex),
]

# Eigenvectors per axis digit (1=X, 2=Y, 3=Z) and outcome bit (0 -> +1).
AXIS_EIGENVECTORS = {
    1: [np.array([1, 1]) / np.sqrt(2), np.array([1, -1]) / np.sqrt(2)],
    2: [np.array([1, 1j]) / np.sqrt(2), np.array([1, -1j]) / np.sqrt(2)],
    3: [np.array([1, 0], dtype=complex), np.array([0, 1], dtype=complex)],
}


def base_digits(value, base, n):
    """Digits of value in the given base, most significant first."""
    digits = []
    for _ in range(n):
        digits.append(value % base)
        value //= base
    return digits[::-1]


def kron_all(mats):
    out = mats[0]
    for m in mats[1:]:
        out = np.kron(out, m)
    return out


def omega_dense(i, n):
    """Omega_i = 2**(-n/2) tensor product of sigma factors."""
    digits = base_digits(i, 4, n)
    return 2.0 ** (-n / 2.0) * kron_all([SIGMA[d] for d in digits])


def projector_dense(w, s, n):
    """Rank-one projector of setting w, outcome s, as a dense matrix."""
    axes = [d + 1 for d in base_digits(w, 3, n)]
    bits = base_digits(s, 2, n)
    vec = kron_all([AXIS_EIGENVECTORS[a][b].reshape(2, 1) for a, b in zip(axes, bits)])
    vec = vec.ravel()
    return np.outer(vec, vec.conj())


def gamma_dense(w, s, n):
    """Coefficient vector of one projector: entries Tr(P Omega_i)."""
    proj = projector_dense(w, s, n)
    return np.array([np.trace(proj @ omega_dense(i, n)).real for i in range(4**n)])


def measurement_matrix_dense(n):
    """All 6**n projector coefficient rows, outcomes fastest."""
    rows = [gamma_dense(w, s, n) for w in range(3**n) for s in range(2**n)]
    return np.array(rows)


def theta_dense(rho, n):
    """theta_i = Tr(rho Omega_i) evaluated densely."""
    return np.array([np.trace(rho @ omega_dense(i, n)).real for i in range(4**n)])


def random_hermitian_trace_one(rng, d):
    g = rng.standard_normal((d, d)) + 1j * rng.standard_normal((d, d))
    h = (g + g.conj().T) / 2.0
    h += (1.0 - np.trace(h).real) / d * np.eye(d)
    return h


def random_density(rng, d):
    g = rng.standard_normal((d, d)) + 1j * rng.standard_normal((d, d))
    rho = g @ g.conj().T
    return rho / np.trace(rho).real


def simplex_projection_oracle(values):
    """Sort-based Euclidean projection onto the probability simplex.

    Independent of the scan-from-smallest implementation: find the largest
    support size k for which the water level tau = (sum of top k - 1) / k
    keeps all top-k entries positive, then clip.
    """
    v = np.asarray(values, dtype=float)
    u = np.sort(v)[::-1]
    css = np.cumsum(u)
    k = np.arange(1, v.size + 1)
    valid = u - (css - 1.0) / k > 0
    kmax = int(np.max(np.nonzero(valid)[0])) + 1
    tau = (css[kmax - 1] - 1.0) / kmax
    return np.maximum(v - tau, 0.0)


@pytest.fixture
def rng():
    return np.random.default_rng(20240811)
