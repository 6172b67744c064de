"""True states, exact outcome probabilities, and multinomial count sampling.

Probabilities come from closed forms wherever the state allows it; only the
``random`` Ginibre ensemble needs a dense matrix, which is why it is capped at
8 qubits.  Sampling uses one counter-based PRNG substream per measurement
setting so a record is reproducible no matter how, or in what order, the
settings are drawn.
"""

from dataclasses import dataclass
from functools import lru_cache

import numpy as np

from . import pauli
from .records import MeasurementRecord

RANDOM_STATE_MAX_QUBITS = 8
DENSE_MAX_QUBITS = 12

# Probability sanity thresholds for theta-derived distributions.
NEGATIVE_PROBABILITY_TOL = 1e-8
PROBABILITY_SUM_TOL = 1e-8


@dataclass(frozen=True)
class StateDescriptor:
    """A true state the simulator knows how to measure.

    kind is one of ``maxmixed``, ``ghz``, ``productz`` (with ``bits`` giving
    the computational basis string, qubit 1 most significant) or ``random``
    (Ginibre-ensemble density matrix drawn from ``state_seed``).
    """

    kind: str
    n: int
    bits: int = 0
    state_seed: int = 0

    def __post_init__(self):
        n = pauli.check_qubit_count(self.n)
        if self.kind not in ("maxmixed", "ghz", "productz", "random"):
            raise ValueError(f"unknown state kind {self.kind!r}")
        if self.kind == "productz" and not 0 <= self.bits < (1 << n):
            raise ValueError(f"productz bits {self.bits} out of range for n={n}")
        if self.kind == "random" and n > RANDOM_STATE_MAX_QUBITS:
            raise ValueError(
                f"random states need dense {2**n}x{2**n} storage; capped at "
                f"n={RANDOM_STATE_MAX_QUBITS}"
            )

    def label(self) -> str:
        if self.kind == "productz":
            return f"productz:{self.bits:0{self.n}b}"
        if self.kind == "random":
            return f"random:{self.state_seed}"
        return self.kind


def parse_state(text: str, n: int) -> StateDescriptor:
    """Parse a CLI state string: maxmixed | ghz | productz:<bits> | random:<seed>."""
    n = pauli.check_qubit_count(n)
    name, _, arg = text.partition(":")
    name = name.strip().lower()
    if name in ("maxmixed", "ghz"):
        if arg:
            raise ValueError(f"state {name!r} takes no argument")
        return StateDescriptor(name, n)
    if name == "productz":
        if arg and set(arg) <= {"0", "1"}:
            if len(arg) != n:
                raise ValueError(f"productz bit string {arg!r} must have length n={n}")
            return StateDescriptor("productz", n, bits=int(arg, 2))
        try:
            return StateDescriptor("productz", n, bits=int(arg))
        except ValueError:
            raise ValueError(f"bad productz argument {arg!r}") from None
    if name == "random":
        try:
            return StateDescriptor("random", n, state_seed=int(arg))
        except ValueError:
            raise ValueError(f"bad random-state seed {arg!r}") from None
    raise ValueError(f"unknown state {text!r}")


def dense_matrix(state: StateDescriptor) -> np.ndarray:
    """The state's density matrix as a dense complex array."""
    n = state.n
    if n > DENSE_MAX_QUBITS:
        raise ValueError(f"dense matrix at n={n} exceeds the {DENSE_MAX_QUBITS}-qubit cap")
    d = 1 << n
    if state.kind == "maxmixed":
        return np.eye(d, dtype=np.complex128) / d
    if state.kind == "ghz":
        psi = np.zeros(d, dtype=np.complex128)
        psi[0] = psi[d - 1] = 1.0 / np.sqrt(2.0)
        return np.outer(psi, psi.conj())
    if state.kind == "productz":
        rho = np.zeros((d, d), dtype=np.complex128)
        rho[state.bits, state.bits] = 1.0
        return rho
    return _random_density(state.n, state.state_seed)


def _random_density(n: int, seed: int) -> np.ndarray:
    """Full-rank Ginibre-ensemble state G G^dag / Tr(G G^dag)."""
    d = 1 << n
    rng = np.random.default_rng(seed)
    g = rng.standard_normal((d, d)) + 1j * rng.standard_normal((d, d))
    rho = g @ g.conj().T
    return rho / np.trace(rho).real


def dense_to_theta(rho: np.ndarray, hermitian_tol: float = 1e-10) -> np.ndarray:
    """Pauli coefficient vector theta_i = Tr(rho Omega_i) of a dense matrix.

    Exploits that every Omega_i has one nonzero per row: operators are grouped
    by their antidiagonal mask, and each group is a sign/phase-weighted
    transform of one shifted diagonal of rho.
    """
    rho = np.asarray(rho)
    d = rho.shape[0]
    if rho.ndim != 2 or rho.shape[1] != d or d & (d - 1):
        raise ValueError(f"expected a square 2**n x 2**n matrix, got {rho.shape}")
    n = d.bit_length() - 1
    pauli.check_qubit_count(n)
    asym = np.abs(rho - rho.conj().T).max()
    if asym > hermitian_tol:
        raise ValueError(f"matrix is not Hermitian (max asymmetry {asym:.3e})")
    rows = np.arange(d)
    theta = np.empty(4**n)
    scale = 2.0 ** (-n / 2.0)
    for mask in range(d):
        diag = rho[rows ^ mask, rows]
        coeff = pauli.walsh_hadamard_transform(diag)
        coeff *= scale * pauli.omega_phase_factors(mask, n)
        theta[pauli.omega_gather_indices(mask, n)] = coeff.real
    return theta


def theta_to_probabilities(theta: np.ndarray, w: int, n: int) -> np.ndarray:
    """Outcome distribution of setting ``w`` for a state given as theta."""
    p = _theta_probability_block(np.asarray(theta, dtype=np.float64), w, w + 1, n)[0]
    _check_probabilities(p, f"setting {pauli.setting_label(w, n)}")
    return p


def _theta_probability_block(theta, start, stop, n):
    digit_rows = pauli.setting_digit_rows(start, stop, n)
    locs = pauli.nonzero_locations_block(digit_rows, n)
    return 2.0 ** (-n / 2.0) * pauli.walsh_hadamard_transform(theta[locs])


def _check_probabilities(p, what):
    if p.min() < -NEGATIVE_PROBABILITY_TOL:
        raise ValueError(f"{what}: negative probability {p.min():.3e}")
    total = p.sum()
    if abs(total - 1.0) > PROBABILITY_SUM_TOL:
        raise ValueError(f"{what}: probabilities sum to {total!r}, not 1")


@lru_cache(maxsize=8)
def _theta_of(state: StateDescriptor) -> np.ndarray:
    return dense_to_theta(dense_matrix(state))


def probabilities_block(state: StateDescriptor, start: int, stop: int) -> np.ndarray:
    """Exact outcome probabilities for a contiguous range of settings.

    Shape (stop-start, 2**n).  Closed forms keep the maximally mixed state
    O(2**n) per setting at any n; ghz and productz use parity/product rules;
    random states go through their theta vector.
    """
    n = state.n
    d = 1 << n
    count = stop - start
    if not 0 <= start <= stop <= 3**n:
        raise ValueError(f"setting range [{start}, {stop}) out of bounds for n={n}")
    if state.kind == "maxmixed":
        return np.full((count, d), 1.0 / d)
    if state.kind == "random":
        return np.clip(_theta_probability_block(_theta_of(state), start, stop, n), 0.0, 1.0)
    out = np.zeros((count, d))
    for row, w in enumerate(range(start, stop)):
        digits = pauli.setting_digits(w, n)
        zmask = sum(1 << (n - 1 - k) for k, dg in enumerate(digits) if dg == 3)
        s = np.arange(d, dtype=np.uint64)
        if state.kind == "productz":
            pattern = state.bits & zmask
            weight = 2.0 ** -(n - bin(zmask).count("1"))
            out[row, (s & np.uint64(zmask)) == pattern] = weight
        else:  # ghz
            n_y = sum(1 for dg in digits if dg == 2)
            if zmask == 0:
                if n_y % 2:
                    out[row, :] = 1.0 / d
                else:
                    parity = np.bitwise_count(s) & 1
                    out[row, parity == (n_y // 2) % 2] = 2.0 ** (1 - n)
            else:
                n_t = n - bin(zmask).count("1")
                weight = 2.0 ** -(n_t + 1)
                zpart = s & np.uint64(zmask)
                out[row, zpart == 0] = weight
                out[row, zpart == np.uint64(zmask)] = weight
    return out


def exact_probabilities(state: StateDescriptor, w: int) -> np.ndarray:
    """Exact outcome distribution of one setting."""
    if not 0 <= w < 3**state.n:
        raise ValueError(f"setting index {w} out of range for n={state.n}")
    return probabilities_block(state, w, w + 1)[0]


def _setting_rng(seed: int, w: int) -> np.random.Generator:
    # Philox is counter-based: keying on (seed, setting) gives an independent
    # substream per setting, so parallel or out-of-order sampling cannot
    # change the record.
    key = np.array([np.uint64(seed & 0xFFFFFFFFFFFFFFFF), np.uint64(w)], dtype=np.uint64)
    return np.random.Generator(np.random.Philox(key=key))


def sample_counts(state: StateDescriptor, shots: int, seed: int) -> MeasurementRecord:
    """Draw a full measurement record: one multinomial of ``shots`` per setting.

    Deterministic in (state, shots, seed); the per-setting substream makes the
    result independent of visit order and thread count.
    """
    if shots < 1:
        raise ValueError(f"shots must be >= 1, got {shots}")
    n = state.n
    settings = 3**n
    counts = np.empty((settings, 1 << n), dtype=np.int64)
    block = max(1, (1 << 18) >> n)
    for start in range(0, settings, block):
        stop = min(settings, start + block)
        probs = probabilities_block(state, start, stop)
        for row, w in enumerate(range(start, stop)):
            p = np.clip(probs[row], 0.0, None)
            counts[w] = _setting_rng(seed, w).multinomial(shots, p / p.sum())
    return MeasurementRecord(n=n, shots=shots, counts=counts, seed=seed, state=state.label())


def exact_record(state: StateDescriptor) -> MeasurementRecord:
    """Noiseless record: counts are exact probabilities scaled by 2**n shots.

    Only states with dyadic outcome probabilities (denominator dividing 2**n)
    can be represented; others raise.
    """
    n = state.n
    d = 1 << n
    settings = 3**n
    counts = np.empty((settings, d), dtype=np.int64)
    block = max(1, (1 << 18) >> n)
    for start in range(0, settings, block):
        stop = min(settings, start + block)
        scaled = probabilities_block(state, start, stop) * d
        rounded = np.rint(scaled)
        if np.abs(scaled - rounded).max() > 1e-9:
            raise ValueError(
                f"state {state.label()} has non-dyadic probabilities; "
                "an exact integer record does not exist"
            )
        counts[start:stop] = rounded.astype(np.int64)
    return MeasurementRecord(n=n, shots=d, counts=counts, seed=None, state=state.label())
