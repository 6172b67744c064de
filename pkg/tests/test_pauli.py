import numpy as np
import pytest
from hypothesis import given, strategies as st

from pauli_lre import pauli

from conftest import SIGMA, gamma_dense, measurement_matrix_dense, omega_dense

SQ2 = 1.0 / np.sqrt(2.0)


class TestQubitCount:
    def test_accepts_range(self):
        assert pauli.check_qubit_count(1) == 1
        assert pauli.check_qubit_count(16) == 16

    @pytest.mark.parametrize("bad", [0, -1, 17, 100])
    def test_rejects_out_of_range(self, bad):
        with pytest.raises(ValueError):
            pauli.check_qubit_count(bad)


class TestIndexArithmetic:
    @given(st.lists(st.integers(0, 3), min_size=1, max_size=10))
    def test_basis_digits_round_trip(self, digits):
        i = pauli.basis_index(digits)
        assert list(pauli.basis_digits(i, len(digits))) == digits

    @given(st.lists(st.integers(1, 3), min_size=1, max_size=10))
    def test_setting_digits_round_trip(self, digits):
        w = pauli.setting_index(digits)
        assert list(pauli.setting_digits(w, len(digits))) == digits

    def test_zero_count(self):
        assert pauli.zero_count(0, 3) == 3
        assert pauli.zero_count(pauli.basis_index([1, 0, 2]), 3) == 1
        assert pauli.zero_count(4**4 - 1, 4) == 0

    def test_setting_labels(self):
        assert pauli.setting_label(0, 2) == "XX"
        assert pauli.setting_label(pauli.setting_index([1, 3]), 2) == "XZ"
        assert pauli.parse_setting_label("ZYX") == pauli.setting_index([3, 2, 1])
        with pytest.raises(ValueError):
            pauli.parse_setting_label("XQ")

    def test_outcome_sign(self):
        assert pauli.outcome_sign(0b10, 0b11) == -1
        assert pauli.outcome_sign(0b11, 0b11) == 1
        assert pauli.outcome_sign(0b101, 0b000) == 1


class TestGamma:
    def test_single_qubit_values(self):
        assert np.allclose(pauli.gamma_single_qubit("X", 1), [SQ2, SQ2, 0, 0])
        assert np.allclose(pauli.gamma_single_qubit("Z", -1), [SQ2, 0, 0, -SQ2])
        assert np.allclose(pauli.gamma_single_qubit("Y", 1), [SQ2, 0, SQ2, 0])

    def test_matches_dense_projector_coefficients(self):
        for axis in (1, 2, 3):
            for sign, s in ((1, 0), (-1, 1)):
                dense = gamma_dense(axis - 1, s, 1)
                assert np.allclose(pauli.gamma_single_qubit(axis, sign), dense, atol=1e-14)

    def test_rejects_bad_args(self):
        with pytest.raises(ValueError):
            pauli.gamma_single_qubit("W", 1)
        with pytest.raises(ValueError):
            pauli.gamma_single_qubit("X", 0)


class TestNonzeroLocations:
    def test_examples(self):
        assert list(pauli.nonzero_locations(pauli.setting_index([3]), 1)) == [0, 3]
        assert list(pauli.nonzero_locations(pauli.setting_index([1, 3]), 2)) == [0, 3, 4, 7]
        assert list(pauli.nonzero_locations(pauli.setting_index([2, 2]), 2)) == [0, 2, 8, 10]

    @pytest.mark.parametrize("n", [1, 2, 3])
    def test_dense_gamma_supported_exactly_there(self, n):
        # Every projector's dense coefficient vector is nonzero exactly at the
        # setting's locations, with values 2**(-n/2) * sign(s, t).
        for w in range(3**n):
            locs = pauli.nonzero_locations(w, n)
            for s in range(2**n):
                dense = gamma_dense(w, s, n)
                expected = np.zeros(4**n)
                for t in range(2**n):
                    expected[locs[t]] = 2.0 ** (-n / 2.0) * pauli.outcome_sign(s, t)
                assert np.allclose(dense, expected, atol=1e-12)

    def test_block_matches_scalar(self):
        n = 3
        rows = pauli.setting_digit_rows(0, 3**n, n)
        block = pauli.nonzero_locations_block(rows, n)
        for w in range(3**n):
            assert np.array_equal(block[w], pauli.nonzero_locations(w, n))


class TestWalshHadamard:
    def test_examples(self):
        assert np.allclose(pauli.walsh_hadamard_transform([1.0, 0.0]), [1, 1])
        assert np.allclose(pauli.walsh_hadamard_transform([0.75, 0.25]), [1.0, 0.5])
        assert np.allclose(pauli.walsh_hadamard_transform([1.0, 0, 0, 0]), [1, 1, 1, 1])

    def test_rejects_non_power_of_two(self):
        with pytest.raises(ValueError):
            pauli.walsh_hadamard_transform(np.zeros(3))

    @given(st.integers(0, 1000))
    def test_involution_up_to_dimension(self, seed):
        rng = np.random.default_rng(seed)
        n = int(rng.integers(1, 7))
        v = rng.standard_normal(1 << n)
        twice = pauli.walsh_hadamard_transform(pauli.walsh_hadamard_transform(v))
        assert np.allclose(twice, (1 << n) * v, rtol=1e-12, atol=1e-12)

    @pytest.mark.parametrize("n", [1, 2, 3])
    def test_sign_matrix_entries(self, n):
        s = pauli.sign_matrix(n)
        for a in range(1 << n):
            for b in range(1 << n):
                assert s[a, b] == pauli.outcome_sign(a, b)

    @pytest.mark.parametrize("n", range(1, 7))
    def test_agrees_with_dense_sign_matrix(self, n, rng):
        v = rng.standard_normal(1 << n)
        direct = pauli.sign_matrix(n).T @ v
        fast = pauli.walsh_hadamard_transform(v)
        assert np.allclose(fast, direct, rtol=1e-12, atol=1e-12)

    def test_batched_rows(self, rng):
        block = rng.standard_normal((5, 16))
        out = pauli.walsh_hadamard_transform(block)
        for row_in, row_out in zip(block, out):
            assert np.allclose(row_out, pauli.walsh_hadamard_transform(row_in))


class TestXtxDiagonal:
    def test_single_qubit_values(self):
        assert pauli.xtx_diagonal(0, 1) == 3.0
        assert all(pauli.xtx_diagonal(i, 1) == 1.0 for i in (1, 2, 3))

    def test_tensor_values(self):
        assert pauli.xtx_diagonal(0, 2) == 9.0
        assert pauli.xtx_diagonal(4, 2) == 3.0  # digits (1, 0)

    @pytest.mark.parametrize("n", [1, 2])
    def test_dense_gram_accumulation(self, n):
        # Sum of Gamma Gamma^T over all 6**n projectors must be exactly the
        # diagonal tensor power of diag{3,1,1,1}.
        x = measurement_matrix_dense(n)
        gram = x.T @ x
        off = gram - np.diag(np.diag(gram))
        assert np.abs(off).max() < 1e-12
        expected = np.array([pauli.xtx_diagonal(i, n) for i in range(4**n)])
        assert np.allclose(np.diag(gram), expected, atol=1e-12)
        assert np.allclose(pauli.xtx_diagonal_full(n), expected)


class TestOmegaStructure:
    def test_entry_factor_examples(self):
        assert pauli.omega_entry_factor(3, 1) == (-1.0, 1)
        assert pauli.omega_entry_factor(2, 0) == (-1.0j, 1)
        assert pauli.omega_entry_factor(0, 0) == (1.0, 0)

    def test_entry_factor_matches_sigma_entries(self):
        for digit in range(4):
            for row in range(2):
                value, col = pauli.omega_entry_factor(digit, row)
                assert SIGMA[digit][row, col] == value
                other = SIGMA[digit][row, 1 - col]
                assert other == 0

    @pytest.mark.parametrize("n", [1, 2])
    def test_gather_indices_and_phases_reconstruct_omega(self, n):
        # Entry (r, r^m) of Omega_i must be 2**(-n/2) * (-i)**|a&m| * (-1)**|a&r|
        # for i = gather(m)[a]; checked against dense tensor products.
        d = 1 << n
        rows = np.arange(d)
        for mask in range(d):
            idx = pauli.omega_gather_indices(mask, n)
            phases = pauli.omega_phase_factors(mask, n)
            for a in range(d):
                dense = omega_dense(idx[a], n)
                signs = np.array([pauli.outcome_sign(a, r) for r in rows])
                expected = 2.0 ** (-n / 2.0) * phases[a] * signs
                assert np.allclose(dense[rows, rows ^ mask], expected, atol=1e-13)
                assert pauli.omega_antidiagonal_mask(idx[a], n) == mask
