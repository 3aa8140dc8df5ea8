import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from isoflow.errors import DimensionError
from isoflow.linalg import (
    commutator,
    conj_transpose,
    eigenvalues,
    frobenius_inner,
    frobenius_norm,
    matrix_from_json,
    matrix_to_json,
    trace_powers,
)
from isoflow.rng import SplitMix64, random_hermitian


def small_complex_matrices(n=3):
    entry = st.complex_numbers(min_magnitude=0, max_magnitude=10, allow_nan=False, allow_infinity=False)
    return st.lists(st.lists(entry, min_size=n, max_size=n), min_size=n, max_size=n).map(np.array)


class TestCommutator:
    def test_self_commutator_vanishes(self, rng):
        x = rng.complex_matrix(4)
        assert frobenius_norm(commutator(x, x)) == 0.0

    def test_hand_computed_2x2(self):
        a = np.array([[0, 1], [0, 0]], dtype=complex)
        b = np.array([[0, 0], [1, 0]], dtype=complex)
        expected = np.array([[1, 0], [0, -1]], dtype=complex)
        np.testing.assert_allclose(commutator(a, b), expected)

    def test_diagonal_matrices_commute(self):
        a = np.diag([1.0, 2.0, 3.0]).astype(complex)
        b = np.diag([-1.0, 5.0, 0.5]).astype(complex)
        assert frobenius_norm(commutator(a, b)) == 0.0

    def test_dimension_mismatch(self):
        with pytest.raises(DimensionError):
            commutator(np.eye(2), np.eye(3))

    @settings(max_examples=25, deadline=None)
    @given(small_complex_matrices(), small_complex_matrices())
    def test_trace_free(self, a, b):
        scale = frobenius_norm(a) * frobenius_norm(b)
        assert abs(np.trace(commutator(a, b))) <= 1e-12 * max(1.0, scale)


class TestConjTranspose:
    def test_real_symmetric_fixed(self):
        a = np.array([[1.0, 2.0], [2.0, 5.0]], dtype=complex)
        np.testing.assert_array_equal(conj_transpose(a), a)

    def test_1x1_imaginary(self):
        np.testing.assert_array_equal(conj_transpose(np.array([[1j]])), np.array([[-1j]]))

    def test_skew_hermitian_negates(self, rng):
        a = rng.complex_matrix(3)
        sk = (a - a.conj().T) / 2
        np.testing.assert_allclose(conj_transpose(sk), -sk, atol=1e-15)

    @settings(max_examples=25, deadline=None)
    @given(small_complex_matrices())
    def test_involution(self, a):
        np.testing.assert_array_equal(conj_transpose(conj_transpose(a)), a)


class TestFrobeniusInner:
    def test_identity(self):
        assert frobenius_inner(np.eye(3), np.eye(3)) == 3.0

    def test_hand_computed(self):
        a = np.array([[1, 0], [0, 0]], dtype=complex)
        b = np.array([[2, 0], [0, 3]], dtype=complex)
        assert frobenius_inner(a, b) == 2.0

    def test_conjugate_symmetry(self, rng):
        a, b = rng.complex_matrix(3), rng.complex_matrix(3)
        assert frobenius_inner(a, b) == pytest.approx(np.conj(frobenius_inner(b, a)))

    def test_positive_and_matches_norm(self, rng):
        a = rng.complex_matrix(4)
        val = frobenius_inner(a, a)
        assert val.imag == pytest.approx(0.0, abs=1e-15)
        assert val.real == pytest.approx(frobenius_norm(a) ** 2, rel=1e-12)


class TestTracePowers:
    def test_identity(self):
        np.testing.assert_allclose(trace_powers(np.eye(3), 3), [3, 3, 3])

    def test_diagonal_power_sums(self):
        np.testing.assert_allclose(trace_powers(np.diag([1.0, 2.0]), 2), [3, 5])

    def test_matches_eigenvalue_power_sums(self, rng):
        w = rng.complex_matrix(5)
        tp = trace_powers(w, 4)
        ev = eigenvalues(w)
        sums = np.array([np.sum(ev**p) for p in range(1, 5)])
        np.testing.assert_allclose(tp, sums, atol=1e-10 * max(1.0, frobenius_norm(w) ** 4))

    def test_conjugation_invariance(self, rng):
        from conftest import random_invertible

        w = rng.complex_matrix(4)
        g = random_invertible(4, rng)
        sim = g @ w @ np.linalg.inv(g)
        np.testing.assert_allclose(trace_powers(sim, 6), trace_powers(w, 6), atol=1e-9)


class TestEigenvalues:
    def test_sorted_diagonal(self):
        np.testing.assert_allclose(eigenvalues(np.diag([3.0, 1.0, 2.0])), [1, 2, 3])

    def test_rotation_generator(self):
        vals = eigenvalues(np.array([[0.0, 1.0], [-1.0, 0.0]]))
        np.testing.assert_allclose(vals, [-1j, 1j], atol=1e-14)

    def test_hermitian_power_sums_match_traces(self, rng):
        w = random_hermitian(5, rng)
        ev = eigenvalues(w)
        tp = trace_powers(w, 4)
        sums = np.array([np.sum(ev**p) for p in range(1, 5)])
        np.testing.assert_allclose(tp, sums, atol=1e-9)

    def test_unitary_conjugation_permutation_fixed_point(self, rng):
        w = rng.complex_matrix(4)
        h = random_hermitian(4, rng)
        # unitary from a Hermitian via Cayley transform
        u = np.linalg.solve(np.eye(4) + 1j * h, np.eye(4) - 1j * h)
        np.testing.assert_allclose(
            eigenvalues(u @ w @ u.conj().T), eigenvalues(w), atol=1e-9
        )


class TestMatrixJson:
    def test_round_trip(self, rng):
        a = rng.complex_matrix(3)
        np.testing.assert_array_equal(matrix_from_json(matrix_to_json(a)), a)

    def test_bare_reals_accepted(self):
        np.testing.assert_array_equal(
            matrix_from_json([[1, 2], [3, 4]]),
            np.array([[1, 2], [3, 4]], dtype=complex),
        )

    def test_pair_format(self):
        obj = matrix_to_json(np.array([[1 + 2j]]))
        assert obj == [[[1.0, 2.0]]]
