"""The three-step least-squares tomography pipeline.

Step (i) turns per-setting frequencies into the Pauli coefficient estimate:
each setting's frequency vector is Walsh-Hadamard transformed and scattered
into the setting's 2**n nonzero basis positions, then everything is divided
by the diagonal Gram entries.  Step (ii) assembles the dense Hermitian matrix
group-by-group over antidiagonal masks.  Step (iii) eigendecomposes and
projects the spectrum onto the probability simplex, yielding the closest
physical state.

Steps (i) and (ii) are data-parallel: workers accumulate private partial
results over contiguous setting/mask chunks which the parent merges in
ascending worker order, so a given worker count always produces bit-identical
output and different worker counts agree to rounding noise.  Workers are
threads; the accumulation kernels are compiled and release the GIL, so chunks
genuinely run in parallel while sharing the record in place.
"""

import time
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass

import numpy as np

from . import _kernels, pauli
from .records import MeasurementRecord
from .simulate import StateDescriptor, probabilities_block

KERNELS = ("fast", "paper-direct")

DENSE_PIPELINE_MAX_QUBITS = 12

# Elements per frequency batch; keeps scratch around 16 MB regardless of n.
_BATCH_ELEMENTS = 1 << 21

_HERMITIAN_TOL = 1e-10
_TRACE_TOL = 1e-8

_sign_matrix_cache: dict[int, np.ndarray] = {}


class ExactFrequencies:
    """Infinite-shot frequency source backed by closed-form probabilities."""

    def __init__(self, state: StateDescriptor):
        self.state = state
        self.n = state.n
        self.num_settings = 3**state.n

    def frequencies(self, start: int, stop: int) -> np.ndarray:
        return probabilities_block(self.state, start, stop)


def _as_source(record_or_source):
    if isinstance(record_or_source, MeasurementRecord):
        record_or_source.validate()
    if isinstance(record_or_source, StateDescriptor):
        return ExactFrequencies(record_or_source)
    return record_or_source


def _chunk_ranges(total: int, workers: int) -> list[tuple[int, int]]:
    workers = max(1, min(workers, total))
    bounds = np.linspace(0, total, workers + 1).astype(int)
    return [(int(a), int(b)) for a, b in zip(bounds[:-1], bounds[1:]) if b > a]


def _get_sign_matrix(n: int) -> np.ndarray:
    if n not in _sign_matrix_cache:
        _sign_matrix_cache[n] = pauli.sign_matrix(n)
    return _sign_matrix_cache[n]


def _step_one_chunk(source, start: int, stop: int, kernel: str) -> np.ndarray:
    """Raw (pre Gram-division) coefficient accumulation over one setting range."""
    n = source.n
    raw = np.zeros(4**n)
    scale = 2.0 ** (-n / 2.0)
    sign = _get_sign_matrix(n) if kernel == "paper-direct" else None
    place = 4 ** (n - 1 - np.arange(n, dtype=np.int64))
    batch = max(1, _BATCH_ELEMENTS >> n)
    for a in range(start, stop, batch):
        b = min(stop, a + batch)
        freq = np.ascontiguousarray(source.frequencies(a, b), dtype=np.float64)
        place_digits = pauli.setting_digit_rows(a, b, n) * place[None, :]
        if kernel == "paper-direct":
            _kernels.accumulate_direct(freq, place_digits, sign, raw, scale)
        else:
            _kernels.accumulate_fast(freq, place_digits, raw, scale)
    return raw


def _step_two_chunk(theta: np.ndarray, n: int, start: int, stop: int) -> np.ndarray:
    """Rows of entries (one per antidiagonal mask) for masks in [start, stop)."""
    d = 1 << n
    out = np.empty((stop - start, d), dtype=np.complex128)
    for m in range(start, stop):
        v = theta[pauli.omega_gather_indices(m, n)] * pauli.omega_phase_factors(m, n)
        out[m - start] = pauli.walsh_hadamard_transform(v)
    out *= 2.0 ** (-n / 2.0)
    return out


def _run_chunks(chunk_fn, chunks):
    """Evaluate chunk_fn(start, stop) per chunk, results in chunk order.

    A single chunk runs inline; otherwise one thread per chunk.
    """
    if len(chunks) == 1:
        return [chunk_fn(*chunks[0])]
    with ThreadPoolExecutor(max_workers=len(chunks)) as pool:
        futures = [pool.submit(chunk_fn, start, stop) for start, stop in chunks]
        return [f.result() for f in futures]


def step_one_least_squares(record_or_source, workers: int = 1, kernel: str = "fast") -> np.ndarray:
    """Least-squares Pauli coefficient estimate from measured frequencies.

    ``kernel`` selects the inner transform: "fast" uses the O(n 2**n)
    butterfly per setting, "paper-direct" multiplies by the materialised
    2**n x 2**n sign matrix (O(4**n) per setting), kept as the reference
    evaluation and for benchmark comparison.  Identical output either way.
    """
    if kernel not in KERNELS:
        raise ValueError(f"unknown kernel {kernel!r}, expected one of {KERNELS}")
    source = _as_source(record_or_source)
    n = pauli.check_qubit_count(source.n)
    chunks = _chunk_ranges(source.num_settings, workers)
    if kernel == "paper-direct":
        _get_sign_matrix(n)  # build once, shared read-only by all workers
    _kernels.warm_up()  # compile outside the timed/parallel region
    partials = _run_chunks(
        lambda start, stop: _step_one_chunk(source, start, stop, kernel), chunks
    )
    raw = partials[0]
    for part in partials[1:]:
        raw += part
    return raw / pauli.xtx_diagonal_full(n)


def step_two_assemble(theta: np.ndarray, workers: int = 1) -> np.ndarray:
    """Assemble the dense Hermitian trace-1 estimate from coefficients.

    Operators sharing an antidiagonal mask m touch only entries (r, r^m), so
    masks partition the output and parallelise with no synchronisation.
    """
    theta = np.asarray(theta, dtype=np.float64)
    size = theta.shape[0]
    n = (size.bit_length() - 1) // 2
    if theta.ndim != 1 or size != 4**n:
        raise ValueError(f"theta length {theta.shape} is not 4**n")
    pauli.check_qubit_count(n)
    d = 1 << n
    chunks = _chunk_ranges(d, workers)
    blocks = _run_chunks(lambda start, stop: _step_two_chunk(theta, n, start, stop), chunks)
    mu = np.empty((d, d), dtype=np.complex128)
    rows = np.arange(d)
    for (start, stop), block in zip(chunks, blocks):
        for m in range(start, stop):
            mu[rows, rows ^ m] = block[m - start]
    return mu


def project_spectrum_to_simplex(values: np.ndarray) -> np.ndarray:
    """Euclidean projection of a trace-1 spectrum onto the probability simplex.

    Scan from the smallest eigenvalue with accumulator a: while the current
    eigenvalue plus a/(remaining count) is negative, fold it into a and zero
    it; then spread a over all remaining eigenvalues.  Returns the projected
    values in the input's order.
    """
    values = np.asarray(values, dtype=np.float64)
    order = np.argsort(values)
    u = values[order]
    k = u.shape[0]
    prefix = np.concatenate(([0.0], np.cumsum(u[:-1])))
    remaining = k - np.arange(k)
    crossing = u + prefix / remaining >= 0.0
    stop = int(np.argmax(crossing))  # guaranteed: the final entry sums to ~1
    out = np.zeros(k)
    out[stop:] = u[stop:] + prefix[stop] / (k - stop)
    inverse = np.empty(k, dtype=np.intp)
    inverse[order] = np.arange(k)
    return out[inverse]


def step_three_project(mu: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    """Closest physical density matrix under the Frobenius norm.

    Returns (rho, projected eigenvalues in ascending order).  A matrix that is
    already positive semidefinite is returned unchanged.
    """
    mu = np.asarray(mu)
    d = mu.shape[0]
    if mu.ndim != 2 or mu.shape[1] != d:
        raise ValueError(f"expected a square matrix, got shape {mu.shape}")
    asym = np.abs(mu - mu.conj().T).max()
    if asym > _HERMITIAN_TOL:
        raise ValueError(f"matrix is not Hermitian (max asymmetry {asym:.3e})")
    trace = np.trace(mu).real
    if abs(trace - 1.0) > _TRACE_TOL:
        raise ValueError(f"trace {trace!r} deviates from 1 beyond {_TRACE_TOL}")
    evals, evecs = np.linalg.eigh(mu)
    if evals[0] >= 0.0:
        return mu, evals
    lam = project_spectrum_to_simplex(evals)
    rho = (evecs * lam) @ evecs.conj().T
    return rho, lam


@dataclass
class ReconstructionResult:
    theta: np.ndarray
    mu: np.ndarray
    rho: np.ndarray
    eigenvalues: np.ndarray  # spectrum of rho, ascending
    timings: dict

    @property
    def n(self) -> int:
        return (self.theta.shape[0].bit_length() - 1) // 2


def reconstruct(record_or_source, workers: int = 1, kernel: str = "fast") -> ReconstructionResult:
    """Run all three steps, recording wall-clock seconds per step."""
    source = _as_source(record_or_source)
    n = pauli.check_qubit_count(source.n)
    if n > DENSE_PIPELINE_MAX_QUBITS:
        raise ValueError(
            f"n={n} needs a dense {2**n}x{2**n} complex allocation "
            f"({(4**n * 16) >> 20} MB); the dense pipeline is capped at "
            f"n={DENSE_PIPELINE_MAX_QUBITS}"
        )
    t0 = time.perf_counter()
    theta = step_one_least_squares(source, workers=workers, kernel=kernel)
    t1 = time.perf_counter()
    mu = step_two_assemble(theta, workers=workers)
    t2 = time.perf_counter()
    rho, eigenvalues = step_three_project(mu)
    t3 = time.perf_counter()
    timings = {
        "t_step1_s": t1 - t0,
        "t_step2_s": t2 - t1,
        "t_step3_s": t3 - t2,
        "t_total_s": t3 - t0,
        "threads": workers,
        "kernel": kernel,
    }
    return ReconstructionResult(theta=theta, mu=mu, rho=rho, eigenvalues=eigenvalues, timings=timings)
