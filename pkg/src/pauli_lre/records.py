"""Measurement record container and its on-disk text format.

Format ``pauli-lre/1``: line 1 is a JSON header, then exactly 3**n lines of
``<setting> <c_0>,<c_1>,...``, settings in ascending index order (labels are
n characters from X/Y/Z, qubit 1 first) and counts in ascending outcome
order, each line summing to the per-setting shot total.
"""

import json
from dataclasses import dataclass, field

import numpy as np

from . import pauli

RECORD_FORMAT = "pauli-lre/1"


class RecordFormatError(ValueError):
    """A measurement record file violates the format contract."""


@dataclass
class MeasurementRecord:
    """Per-setting outcome counts for all 3**n Pauli settings."""

    n: int
    shots: int
    counts: np.ndarray  # (3**n, 2**n) int64
    seed: int | None = None
    state: str | None = None
    _validated: bool = field(default=False, repr=False, compare=False)

    def validate(self) -> "MeasurementRecord":
        if self._validated:
            return self
        n = pauli.check_qubit_count(self.n)
        if self.shots < 1:
            raise ValueError(f"shots must be >= 1, got {self.shots}")
        expected = (3**n, 1 << n)
        if tuple(self.counts.shape) != expected:
            raise ValueError(f"counts shape {self.counts.shape} != {expected} for n={n}")
        if not np.issubdtype(self.counts.dtype, np.integer):
            raise ValueError(f"counts must be integers, got dtype {self.counts.dtype}")
        if self.counts.min() < 0:
            raise ValueError("counts must be non-negative")
        sums = self.counts.sum(axis=1)
        bad = np.nonzero(sums != self.shots)[0]
        if bad.size:
            w = int(bad[0])
            raise ValueError(
                f"setting {pauli.setting_label(w, n)} (index {w}) sums to "
                f"{int(sums[w])}, expected {self.shots}"
            )
        self._validated = True
        return self

    @property
    def num_settings(self) -> int:
        return 3**self.n

    def frequencies(self, start: int, stop: int) -> np.ndarray:
        """Measured frequencies for a contiguous block of settings."""
        return self.counts[start:stop] / float(self.shots)


def write_record(record: MeasurementRecord, path) -> int:
    """Write a record file; returns the number of bytes written."""
    record.validate()
    header = {
        "format": RECORD_FORMAT,
        "n": record.n,
        "shots": record.shots,
        "seed": record.seed,
        "state": record.state,
    }
    lines = [json.dumps(header)]
    for w in range(record.num_settings):
        row = record.counts[w]
        lines.append(pauli.setting_label(w, record.n) + " " + ",".join(map(str, row.tolist())))
    data = "\n".join(lines) + "\n"
    with open(path, "w", encoding="utf-8") as fh:
        fh.write(data)
    return len(data.encode("utf-8"))


def read_record(path) -> MeasurementRecord:
    """Parse and fully validate a record file.

    Raises RecordFormatError naming the offending line for any violation:
    malformed header, missing/extra setting lines, out-of-order settings,
    wrong counts length, or counts not summing to the shot total.
    """
    with open(path, "r", encoding="utf-8") as fh:
        lines = fh.read().splitlines()
    if not lines:
        raise RecordFormatError("empty record file")
    try:
        header = json.loads(lines[0])
    except json.JSONDecodeError as exc:
        raise RecordFormatError(f"line 1: header is not valid JSON ({exc.msg})") from None
    if not isinstance(header, dict):
        raise RecordFormatError("line 1: header must be a JSON object")
    if header.get("format") != RECORD_FORMAT:
        raise RecordFormatError(
            f"line 1: unsupported format {header.get('format')!r}, expected {RECORD_FORMAT!r}"
        )
    for key in ("n", "shots"):
        if not isinstance(header.get(key), int):
            raise RecordFormatError(f"line 1: header field {key!r} must be an integer")
    try:
        n = pauli.check_qubit_count(header["n"])
    except ValueError as exc:
        raise RecordFormatError(f"line 1: {exc}") from None
    shots = header["shots"]
    if shots < 1:
        raise RecordFormatError(f"line 1: shots must be >= 1, got {shots}")

    settings = 3**n
    d = 1 << n
    body = lines[1:]
    while body and not body[-1].strip():
        body.pop()
    if len(body) != settings:
        raise RecordFormatError(
            f"expected {settings} setting lines for n={n}, found {len(body)}"
        )
    counts = np.empty((settings, d), dtype=np.int64)
    for w in range(settings):
        lineno = w + 2
        expected_label = pauli.setting_label(w, n)
        parts = body[w].split(" ", 1)
        if len(parts) != 2:
            raise RecordFormatError(f"line {lineno}: expected '<setting> <counts>'")
        label, payload = parts
        if label != expected_label:
            raise RecordFormatError(
                f"line {lineno}: setting {label!r} out of order or invalid, "
                f"expected {expected_label!r}"
            )
        tokens = payload.split(",")
        if len(tokens) != d:
            raise RecordFormatError(
                f"line {lineno} (setting {label}): {len(tokens)} counts, expected {d}"
            )
        try:
            row = np.array([int(tok) for tok in tokens], dtype=np.int64)
        except ValueError:
            raise RecordFormatError(
                f"line {lineno} (setting {label}): counts must be integers"
            ) from None
        if row.min() < 0:
            raise RecordFormatError(f"line {lineno} (setting {label}): negative count")
        total = int(row.sum())
        if total != shots:
            raise RecordFormatError(
                f"line {lineno} (setting {label}): counts sum to {total}, expected {shots}"
            )
        counts[w] = row
    record = MeasurementRecord(
        n=n, shots=shots, counts=counts, seed=header.get("seed"), state=header.get("state")
    )
    return record.validate()
