import json

import numpy as np
import pytest

from pauli_lre import records
from pauli_lre.records import MeasurementRecord, RecordFormatError, read_record, write_record


def small_record(rng, n=2, shots=50):
    settings = 3**n
    d = 1 << n
    counts = rng.multinomial(shots, np.full(d, 1.0 / d), size=settings)
    return MeasurementRecord(n=n, shots=shots, counts=counts.astype(np.int64), seed=7, state="maxmixed")


def test_round_trip(tmp_path, rng):
    rec = small_record(rng)
    path = tmp_path / "rec.txt"
    nbytes = write_record(rec, path)
    assert nbytes == path.stat().st_size
    back = read_record(path)
    assert back.n == rec.n and back.shots == rec.shots
    assert back.seed == 7 and back.state == "maxmixed"
    assert np.array_equal(back.counts, rec.counts)


def test_round_trip_various_sizes(tmp_path, rng):
    for n, shots in ((1, 3), (3, 17)):
        rec = small_record(rng, n=n, shots=shots)
        path = tmp_path / f"rec{n}.txt"
        write_record(rec, path)
        assert np.array_equal(read_record(path).counts, rec.counts)


def test_write_is_deterministic(tmp_path, rng):
    rec = small_record(rng)
    a = tmp_path / "a.txt"
    b = tmp_path / "b.txt"
    write_record(rec, a)
    write_record(rec, b)
    assert a.read_bytes() == b.read_bytes()


def test_header_and_line_layout(tmp_path, rng):
    rec = small_record(rng)
    path = tmp_path / "rec.txt"
    write_record(rec, path)
    lines = path.read_text().splitlines()
    header = json.loads(lines[0])
    assert header == {"format": "pauli-lre/1", "n": 2, "shots": 50, "seed": 7, "state": "maxmixed"}
    assert len(lines) == 1 + 9
    assert lines[1].split(" ")[0] == "XX"
    assert lines[-1].split(" ")[0] == "ZZ"


def test_validate_rejects_bad_row_sum(rng):
    rec = small_record(rng)
    rec.counts[3, 0] += 1
    with pytest.raises(ValueError, match="XZ"):
        rec.validate()


def _write_lines(tmp_path, lines, name="bad.txt"):
    path = tmp_path / name
    path.write_text("\n".join(lines) + "\n")
    return path


@pytest.fixture
def good_lines(tmp_path, rng):
    rec = small_record(rng)
    path = tmp_path / "good.txt"
    write_record(rec, path)
    return path.read_text().splitlines()


def test_reject_short_count_line(tmp_path, good_lines):
    lines = list(good_lines)
    label, payload = lines[4].split(" ")
    lines[4] = label + " " + ",".join(payload.split(",")[:-1])
    with pytest.raises(RecordFormatError, match=r"line 5 .*3 counts, expected 4"):
        read_record(_write_lines(tmp_path, lines))


def test_reject_body_length_mismatch(tmp_path, good_lines):
    with pytest.raises(RecordFormatError, match="expected 9 setting lines"):
        read_record(_write_lines(tmp_path, good_lines[:-1]))


def test_reject_out_of_order_settings(tmp_path, good_lines):
    lines = list(good_lines)
    lines[1], lines[2] = lines[2], lines[1]
    with pytest.raises(RecordFormatError, match="out of order"):
        read_record(_write_lines(tmp_path, lines))


def test_reject_wrong_sum(tmp_path, good_lines):
    lines = list(good_lines)
    label, payload = lines[7].split(" ")
    counts = [int(t) for t in payload.split(",")]
    counts[0] += 2
    lines[7] = label + " " + ",".join(map(str, counts))
    with pytest.raises(RecordFormatError, match=r"line 8 .*sum to 52, expected 50"):
        read_record(_write_lines(tmp_path, lines))


def test_reject_bad_header(tmp_path, good_lines):
    lines = ["{not json"] + list(good_lines[1:])
    with pytest.raises(RecordFormatError, match="line 1"):
        read_record(_write_lines(tmp_path, lines))


def test_reject_wrong_format_tag(tmp_path, good_lines):
    header = json.loads(good_lines[0])
    header["format"] = "pauli-lre/9"
    lines = [json.dumps(header)] + list(good_lines[1:])
    with pytest.raises(RecordFormatError, match="unsupported format"):
        read_record(_write_lines(tmp_path, lines))


def test_reject_negative_and_non_integer(tmp_path, good_lines):
    lines = list(good_lines)
    label, payload = lines[2].split(" ")
    parts = payload.split(",")
    parts[0] = "-1"
    parts[1] = str(int(parts[1]) + 1 + int(lines[2].split(" ")[1].split(",")[0]))
    lines[2] = label + " " + ",".join(parts)
    with pytest.raises(RecordFormatError, match="negative"):
        read_record(_write_lines(tmp_path, lines))
    lines = list(good_lines)
    lines[3] = lines[3].split(" ")[0] + " 1.5," + ",".join(lines[3].split(" ")[1].split(",")[1:])
    with pytest.raises(RecordFormatError, match="integers"):
        read_record(_write_lines(tmp_path, lines))


def test_reject_header_n_body_mismatch(tmp_path, good_lines):
    header = json.loads(good_lines[0])
    header["n"] = 3
    lines = [json.dumps(header)] + list(good_lines[1:])
    with pytest.raises(RecordFormatError, match="expected 27 setting lines"):
        read_record(_write_lines(tmp_path, lines))


def test_missing_file_raises_oserror(tmp_path):
    with pytest.raises(OSError):
        read_record(tmp_path / "nope.txt")


def test_frequencies_block(rng):
    rec = small_record(rng)
    freq = rec.frequencies(2, 5)
    assert freq.shape == (3, 4)
    assert np.allclose(freq.sum(axis=1), 1.0)
    assert np.allclose(freq, rec.counts[2:5] / 50.0)
