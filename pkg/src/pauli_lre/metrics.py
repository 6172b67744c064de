"""Error functionals and their theoretical predictors.

The squared Hilbert-Schmidt distance and infidelity quantify how far an
estimate sits from the true state; the predictors give the asymptotic mean
squared distance of the least-squares estimate, either from the dense
variance formula (small n) or from the maximally-mixed closed forms.

Shot accounting: predictor arguments take N0 = copies allocated per
measurement basis.  Because the 2**n outcomes of one setting are read out
simultaneously, a setting consumes d*N0 physical shots, which is what the
simulated records carry.  The closed forms (5/6)**n / N0 and
(5/3)**n / (4 N0) hold under exactly this accounting.
"""

import json
from dataclasses import asdict, dataclass

import numpy as np

from . import pauli
from .simulate import StateDescriptor, dense_matrix, dense_to_theta, theta_to_probabilities

PREDICTOR_DENSE_MAX_QUBITS = 4

_PHYSICAL_TOL = 1e-8


def hs_squared_distance(a: np.ndarray, b: np.ndarray) -> float:
    """Squared Hilbert-Schmidt distance Tr((a-b)^2) of two Hermitian matrices."""
    a = np.asarray(a)
    b = np.asarray(b)
    if a.shape != b.shape:
        raise ValueError(f"shape mismatch {a.shape} vs {b.shape}")
    diff = a - b
    return float(np.vdot(diff, diff).real)


def _require_physical(rho: np.ndarray, name: str) -> np.ndarray:
    rho = np.asarray(rho, dtype=np.complex128)
    d = rho.shape[0]
    if rho.ndim != 2 or rho.shape[1] != d:
        raise ValueError(f"{name}: expected a square matrix, got {rho.shape}")
    if np.abs(rho - rho.conj().T).max() > _PHYSICAL_TOL:
        raise ValueError(f"{name}: not Hermitian")
    if abs(np.trace(rho).real - 1.0) > _PHYSICAL_TOL:
        raise ValueError(f"{name}: trace is {np.trace(rho).real!r}, not 1")
    if np.linalg.eigvalsh(rho)[0] < -_PHYSICAL_TOL:
        raise ValueError(f"{name}: negative eigenvalues")
    return rho


def _psd_sqrt(rho: np.ndarray) -> np.ndarray:
    evals, evecs = np.linalg.eigh(rho)
    return (evecs * np.sqrt(np.clip(evals, 0.0, None))) @ evecs.conj().T


def fidelity(rho: np.ndarray, sigma: np.ndarray, method: str = "auto") -> float:
    """Uhlmann fidelity F = Tr^2 sqrt(sqrt(rho) sigma sqrt(rho)) in [0, 1].

    With method="auto", two cheap special cases are used: for rho = I/d the
    fidelity reduces to (sum_k sqrt(lambda_k/d))^2 over sigma's spectrum, and
    for pure rho to the overlap expectation.  method="general" always runs
    the full two-eigendecomposition formula (kept separate so the paths can
    be cross-checked).
    """
    rho = _require_physical(rho, "rho")
    sigma = _require_physical(sigma, "sigma")
    if rho.shape != sigma.shape:
        raise ValueError(f"shape mismatch {rho.shape} vs {sigma.shape}")
    d = rho.shape[0]
    if method not in ("auto", "general"):
        raise ValueError(f"unknown method {method!r}")
    if method == "auto":
        if np.abs(rho - np.eye(d) / d).max() < 1e-12:
            return fidelity_with_maxmixed(np.linalg.eigvalsh(sigma), d)
        purity = np.vdot(rho, rho).real
        if purity > 1.0 - 1e-10:
            evals, evecs = np.linalg.eigh(rho)
            psi = evecs[:, -1]
            return float(np.clip(np.vdot(psi, sigma @ psi).real, 0.0, 1.0))
    root = _psd_sqrt(rho)
    inner = root @ sigma @ root
    evals = np.linalg.eigvalsh((inner + inner.conj().T) / 2.0)
    total = np.sqrt(np.clip(evals, 0.0, None)).sum()
    return float(np.clip(total * total, 0.0, 1.0))


def fidelity_with_maxmixed(eigenvalues: np.ndarray, d: int) -> float:
    """Fidelity of a state (given by its spectrum) with I/d."""
    lam = np.clip(np.asarray(eigenvalues, dtype=np.float64), 0.0, None)
    total = np.sqrt(lam / d).sum()
    return float(np.clip(total * total, 0.0, 1.0))


def predicted_mse_max_mixed(n: int, n0: float) -> float:
    """Asymptotic mean Tr(mu-rho)^2 for the maximally mixed state: (5/6)**n / N0."""
    pauli.check_qubit_count(n)
    return (5.0 / 6.0) ** n / n0


def predicted_infidelity_max_mixed(n: int, n0: float) -> float:
    """Large-N0 mean infidelity for the maximally mixed state: (5/3)**n / (4 N0).

    Valid only once the Hermitian estimate is already physical; at small N0
    the projection step makes the realised infidelity noticeably smaller.
    """
    pauli.check_qubit_count(n)
    return (5.0 / 3.0) ** n / (4.0 * n0)


def measurement_matrix(n: int) -> np.ndarray:
    """Dense (6**n, 4**n) matrix of projector coefficient rows.

    Row order is (setting, outcome) with outcomes fastest.  Only sensible at
    the small n used by the dense predictor; everything else in the package
    works from the sparse structure.
    """
    n = pauli.check_qubit_count(n)
    if n > PREDICTOR_DENSE_MAX_QUBITS:
        raise ValueError(f"dense measurement matrix capped at n={PREDICTOR_DENSE_MAX_QUBITS}")
    d = 1 << n
    x = np.zeros((3**n * d, 4**n))
    scale = 2.0 ** (-n / 2.0)
    signs = pauli.sign_matrix(n)
    for w in range(3**n):
        locs = pauli.nonzero_locations(w, n)
        x[w * d : (w + 1) * d, locs] = scale * signs
    return x


def predicted_mse_dense(rho: np.ndarray, n0: float) -> float:
    """Dense variance predictor for the mean squared HS distance.

    Evaluates (M / (N d)) Tr[(X^T X)^-1 X^T P X (X^T X)^-1] with
    P = diag(p_j - p_j^2), N = M * N0, including the extra 1/d that accounts
    for the d simultaneously measured outcomes per setting.  Off-diagonal
    covariance between outcomes of one setting is deliberately dropped; it is
    an O(1/d) relative effect.
    """
    rho = np.asarray(rho, dtype=np.complex128)
    d = rho.shape[0]
    n = d.bit_length() - 1
    if rho.ndim != 2 or rho.shape[1] != d or (1 << n) != d:
        raise ValueError(f"expected a square 2**n-dim matrix, got {rho.shape}")
    if n > PREDICTOR_DENSE_MAX_QUBITS:
        raise ValueError(f"dense predictor capped at n={PREDICTOR_DENSE_MAX_QUBITS}")
    theta = dense_to_theta(rho)
    probs = np.concatenate([theta_to_probabilities(theta, w, n) for w in range(3**n)])
    x = measurement_matrix(n)
    weighted = x / pauli.xtx_diagonal_full(n)[None, :]
    row_norms = np.einsum("ji,ji->j", weighted, weighted)
    p_var = probs - probs * probs
    # M / (N d) = 1 / (N0 d) with N = M * N0.
    return float((p_var * row_norms).sum() / (n0 * d))


@dataclass
class ErrorReport:
    """Distances between estimates and truth plus their predicted values."""

    n: int
    n0: float | None
    hs_squared_mu: float | None
    hs_squared_rho: float
    infidelity: float
    predicted_hs: float | None
    predicted_infidelity: float | None

    def to_json(self) -> str:
        return json.dumps(asdict(self), indent=2, sort_keys=True)


def evaluate_errors(
    truth: StateDescriptor,
    rho_hat: np.ndarray,
    mu_hat: np.ndarray | None = None,
    n0: float | None = None,
) -> ErrorReport:
    """Build an ErrorReport for an estimate against a known true state."""
    n = truth.n
    rho_true = dense_matrix(truth)
    hs_mu = hs_squared_distance(mu_hat, rho_true) if mu_hat is not None else None
    hs_rho = hs_squared_distance(rho_hat, rho_true)
    infid = 1.0 - fidelity(rho_true, rho_hat)
    predicted_hs = None
    predicted_infid = None
    if n0 is not None:
        if truth.kind == "maxmixed":
            predicted_hs = predicted_mse_max_mixed(n, n0)
            predicted_infid = predicted_infidelity_max_mixed(n, n0)
        elif n <= PREDICTOR_DENSE_MAX_QUBITS:
            predicted_hs = predicted_mse_dense(rho_true, n0)
    return ErrorReport(
        n=n,
        n0=n0,
        hs_squared_mu=hs_mu,
        hs_squared_rho=hs_rho,
        infidelity=infid,
        predicted_hs=predicted_hs,
        predicted_infidelity=predicted_infid,
    )
