"""Index arithmetic and structural facts of the tensor-product Pauli basis.

Conventions used throughout the package:

* Qubit 1 is the most significant digit/bit everywhere.
* Basis operators are labelled by an integer ``i`` in ``[0, 4**n)`` whose
  base-4 digits ``i_k`` select I, X, Y, Z per qubit.
* Measurement settings are labelled by ``w`` in ``[0, 3**n)`` with per-qubit
  axis digits in ``{1, 2, 3}`` meaning X, Y, Z (digit 0 is reserved for the
  identity so a setting digit doubles as a basis digit).
* Outcomes are labelled by ``s`` in ``[0, 2**n)``; bit 0 of a qubit means the
  +1 eigenvalue, bit 1 the -1 eigenvalue.
"""

import numpy as np

MAX_QUBITS = 16

AXIS_CHARS = "XYZ"  # axis digit 1, 2, 3

# (-i)**k for k mod 4; phase picked up by Y digits when assembling operators.
_MINUS_I_POWERS = np.array([1.0, -1.0j, -1.0, 1.0j], dtype=np.complex128)

_bits_cache: dict[int, np.ndarray] = {}


def check_qubit_count(n) -> int:
    """Validate a qubit count, returning it as a plain int.

    Counts above MAX_QUBITS are rejected so that 4**n and 6**n stay well
    inside 64-bit index arithmetic.
    """
    n = int(n)
    if not 1 <= n <= MAX_QUBITS:
        raise ValueError(f"qubit count must be in [1, {MAX_QUBITS}], got {n}")
    return n


def dimension(n: int) -> int:
    return 1 << check_qubit_count(n)


def num_settings(n: int) -> int:
    return 3 ** check_qubit_count(n)


def num_basis_ops(n: int) -> int:
    return 4 ** check_qubit_count(n)


def basis_digits(i: int, n: int) -> tuple[int, ...]:
    """Base-4 digits of a basis index, qubit 1 first."""
    n = check_qubit_count(n)
    if not 0 <= i < 4**n:
        raise ValueError(f"basis index {i} out of range for n={n}")
    return tuple((i >> (2 * (n - 1 - k))) & 3 for k in range(n))


def basis_index(digits) -> int:
    i = 0
    for d in digits:
        if not 0 <= d <= 3:
            raise ValueError(f"basis digit {d} not in {{0..3}}")
        i = (i << 2) | int(d)
    return i


def zero_count(i: int, n: int) -> int:
    """Number of identity digits in the basis label ``i``."""
    return sum(1 for d in basis_digits(i, n) if d == 0)


def setting_digits(w: int, n: int) -> tuple[int, ...]:
    """Axis digits of a setting index, each in {1, 2, 3}, qubit 1 first."""
    n = check_qubit_count(n)
    if not 0 <= w < 3**n:
        raise ValueError(f"setting index {w} out of range for n={n}")
    out = []
    for _ in range(n):
        out.append(w % 3 + 1)
        w //= 3
    return tuple(reversed(out))


def setting_index(digits) -> int:
    w = 0
    for d in digits:
        if not 1 <= d <= 3:
            raise ValueError(f"setting digit {d} not in {{1, 2, 3}}")
        w = w * 3 + (int(d) - 1)
    return w


def setting_label(w: int, n: int) -> str:
    """Human-readable axis string, e.g. ``XZY`` (qubit 1 first)."""
    return "".join(AXIS_CHARS[d - 1] for d in setting_digits(w, n))


def parse_setting_label(label: str) -> int:
    try:
        digits = [AXIS_CHARS.index(c) + 1 for c in label]
    except ValueError:
        raise ValueError(f"setting label {label!r} has characters outside X/Y/Z") from None
    if not digits:
        raise ValueError("empty setting label")
    return setting_index(digits)


def outcome_sign(s: int, t: int) -> int:
    """Product of (-1)**s_k over the qubits selected by mask ``t``."""
    return 1 - 2 * ((int(s) & int(t)).bit_count() % 2)


def gamma_single_qubit(axis, sign: int) -> np.ndarray:
    """Pauli-basis coefficient vector of a single-qubit eigenprojector.

    The projector onto the ``sign`` eigenvector of the Pauli operator along
    ``axis`` has coefficients 1/sqrt(2) on the identity component and
    sign/sqrt(2) on the axis component; everything else vanishes.
    """
    if isinstance(axis, str):
        axis = AXIS_CHARS.index(axis.upper()) + 1
    if axis not in (1, 2, 3):
        raise ValueError(f"axis must be X/Y/Z or 1/2/3, got {axis!r}")
    if sign not in (1, -1):
        raise ValueError(f"sign must be +1 or -1, got {sign!r}")
    g = np.zeros(4)
    g[0] = 1.0 / np.sqrt(2.0)
    g[axis] = sign / np.sqrt(2.0)
    return g


def omega_entry_factor(digit: int, row_bit: int) -> tuple[complex, int]:
    """Single nonzero entry of a one-qubit Pauli factor in a given row.

    Returns ``(value, column_bit)`` for sigma_digit: each of I, X, Y, Z has
    exactly one nonzero per row.  The overall 2**(-n/2) normalisation of the
    n-qubit operator is applied by callers.
    """
    if digit not in (0, 1, 2, 3):
        raise ValueError(f"pauli digit {digit} not in {{0..3}}")
    if row_bit not in (0, 1):
        raise ValueError(f"row bit {row_bit} not in {{0, 1}}")
    if digit == 0:
        return 1.0 + 0.0j, row_bit
    if digit == 1:
        return 1.0 + 0.0j, 1 - row_bit
    if digit == 2:
        return (-1.0j if row_bit == 0 else 1.0j), 1 - row_bit
    return (1.0 + 0.0j if row_bit == 0 else -1.0 + 0.0j), row_bit


def xtx_diagonal(i: int, n: int) -> float:
    """Diagonal Gram-matrix entry of the full Pauli measurement set.

    The single-qubit Gram matrix is diag{3,1,1,1}; tensoring gives
    3**zero_count(i) for the n-qubit set.
    """
    return 3.0 ** zero_count(i, n)


def xtx_diagonal_full(n: int) -> np.ndarray:
    """All 4**n Gram diagonal entries, built as a Kronecker power."""
    n = check_qubit_count(n)
    base = np.array([3.0, 1.0, 1.0, 1.0])
    full = base
    for _ in range(n - 1):
        full = np.kron(full, base)
    return full


def outcome_bit_matrix(n: int) -> np.ndarray:
    """(2**n, n) matrix of outcome bits, qubit 1 in column 0. Cached."""
    n = check_qubit_count(n)
    if n not in _bits_cache:
        s = np.arange(1 << n, dtype=np.int64)
        shifts = n - 1 - np.arange(n, dtype=np.int64)
        _bits_cache[n] = (s[:, None] >> shifts[None, :]) & 1
    return _bits_cache[n]


def nonzero_locations(w: int, n: int) -> np.ndarray:
    """Basis indices where every projector of setting ``w`` is supported.

    Entry ``t`` substitutes the setting's axis digit for each qubit selected
    by the subset mask ``t`` and the identity digit elsewhere.  The result is
    ascending in ``t`` and has exactly 2**n entries.
    """
    digits = np.array(setting_digits(w, n), dtype=np.int64)
    return nonzero_locations_block(digits[None, :], n)[0]


def nonzero_locations_block(setting_digit_rows: np.ndarray, n: int) -> np.ndarray:
    """Vectorised nonzero_locations for a (B, n) block of setting digits.

    Split the subset mask into high/low halves so the per-setting work is two
    small integer products plus one outer add instead of a (B, 2**n, n)
    broadcast.
    """
    n = check_qubit_count(n)
    place = 4 ** (n - 1 - np.arange(n, dtype=np.int64))
    weights = setting_digit_rows.astype(np.int64) * place[None, :]  # (B, n)
    h = n // 2
    hi_bits = outcome_bit_matrix(h) if h else np.zeros((1, 0), dtype=np.int64)
    lo_bits = outcome_bit_matrix(n - h)
    hi = weights[:, :h] @ hi_bits.T  # (B, 2**h)
    lo = weights[:, h:] @ lo_bits.T  # (B, 2**(n-h))
    out = hi[:, :, None] + lo[:, None, :]
    return out.reshape(weights.shape[0], 1 << n)


def setting_digit_rows(start: int, stop: int, n: int) -> np.ndarray:
    """(stop-start, n) axis digits for a contiguous range of settings."""
    n = check_qubit_count(n)
    w = np.arange(start, stop, dtype=np.int64)
    cols = []
    for k in range(n - 1, -1, -1):
        cols.append(w % 3 + 1)
        w = w // 3
    return np.stack(cols[::-1], axis=1)


def walsh_hadamard_transform(values: np.ndarray) -> np.ndarray:
    """Unnormalised Walsh-Hadamard transform along the last axis.

    Computes u[t] = sum_s prod_{k in t} (-1)^{s_k} v[s] with the usual
    butterfly, O(n 2**n) per vector.  Applied twice it gives 2**n times the
    identity.  This evaluates the +-1 sign matrix shared by all measurement
    groups without ever materialising it.
    """
    v = np.asarray(values)
    m = v.shape[-1] if v.ndim else 0
    if m == 0 or (m & (m - 1)) != 0:
        raise ValueError(f"length {m} is not a power of two")
    dtype = np.complex128 if np.iscomplexobj(v) else np.float64
    out = v.astype(dtype, copy=True)
    lead = out.shape[:-1]
    h = 1
    while h < m:
        work = out.reshape(*lead, m // (2 * h), 2, h)
        top = work[..., 0, :].copy()
        bot = work[..., 1, :]
        work[..., 0, :] = top + bot
        work[..., 1, :] = top - bot
        h *= 2
    return out


def sign_matrix(n: int) -> np.ndarray:
    """The dense 2**n x 2**n outcome sign matrix S[s, t] = (-1)^popcount(s&t).

    This is the per-group nonzero matrix shared by all 3**n groups; the fast
    transform above is the preferred way to apply it.  Materialised only for
    the direct kernel and for oracle comparisons.
    """
    n = check_qubit_count(n)
    idx = np.arange(1 << n, dtype=np.uint64)
    parity = np.bitwise_count(idx[:, None] & idx[None, :]) & 1
    return 1.0 - 2.0 * parity.astype(np.float64)


def omega_antidiagonal_mask(i: int, n: int) -> int:
    """Bit mask with qubit k set iff basis digit i_k flips that qubit (X or Y)."""
    m = 0
    for d in basis_digits(i, n):
        m = (m << 1) | (1 if d in (1, 2) else 0)
    return m


def omega_gather_indices(mask: int, n: int) -> np.ndarray:
    """Basis indices of the 2**n operators sharing an antidiagonal mask.

    For selector bits a (ascending), qubit k contributes digit 3*a_k where the
    mask bit is clear (I or Z) and digit 1+a_k where it is set (X or Y).
    """
    n = check_qubit_count(n)
    d = 1 << n
    if not 0 <= mask < d:
        raise ValueError(f"mask {mask} out of range for n={n}")
    place = 4 ** (n - 1 - np.arange(n, dtype=np.int64))
    mbits = outcome_bit_matrix(n)[mask]
    base = int((mbits * place).sum())
    coeff = (3 - 2 * mbits) * place
    h = n // 2
    hi_bits = outcome_bit_matrix(h) if h else np.zeros((1, 0), dtype=np.int64)
    lo_bits = outcome_bit_matrix(n - h)
    hi = hi_bits @ coeff[:h]
    lo = lo_bits @ coeff[h:]
    return (base + hi[:, None] + lo[None, :]).reshape(d)


def omega_phase_factors(mask: int, n: int) -> np.ndarray:
    """(-i)**popcount(a & mask) for all selector bits a; the Y-digit phases."""
    n = check_qubit_count(n)
    a = np.arange(1 << n, dtype=np.uint64)
    pc = np.bitwise_count(a & np.uint64(mask))
    return _MINUS_I_POWERS[pc & 3]
