import math

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st
from hypothesis.extra.numpy import arrays

from helpers import eig2_closed, eig3_closed
from sdcprep import linalg
from sdcprep.errors import ConvergenceFailure, DimensionMismatch, NotHermitian, NotSquare

finite = st.floats(min_value=-10, max_value=10, allow_nan=False)


def complex_matrices(max_d=4):
    def build(d, re, im):
        return (re + 1j * im)[:d, :d]

    return st.integers(1, max_d).flatmap(
        lambda d: st.builds(
            build,
            st.just(d),
            arrays(np.float64, (d, d), elements=finite),
            arrays(np.float64, (d, d), elements=finite),
        )
    )


def hermitian_matrices(max_d=4):
    return complex_matrices(max_d).map(lambda z: (z + z.conj().T) / 2)


class TestAdjoint:
    def test_scalar_conjugate(self):
        assert linalg.adjoint([[2 + 3j]])[0, 0] == 2 - 3j

    def test_identity(self):
        np.testing.assert_array_equal(linalg.adjoint(np.eye(2)), np.eye(2))

    def test_nilpotent_transpose(self):
        np.testing.assert_array_equal(
            linalg.adjoint([[0, 1], [0, 0]]), np.array([[0, 0], [1, 0]])
        )

    @given(complex_matrices())
    def test_involution(self, a):
        np.testing.assert_array_equal(linalg.adjoint(linalg.adjoint(a)), a)

    def test_rejects_nonfinite(self):
        with pytest.raises(ValueError):
            linalg.adjoint([[np.nan, 0], [0, 0]])


class TestMatmul:
    def test_identity(self):
        a = np.array([[1, 2j], [3, 4]])
        np.testing.assert_array_equal(linalg.matmul(np.eye(2), a), a)

    def test_swap_involution(self):
        swap = np.array([[0, 1], [1, 0]])
        np.testing.assert_array_equal(linalg.matmul(swap, swap), np.eye(2))

    def test_all_ones_squared(self):
        # hand expansion: each entry is 1*1 + 1*1
        ones = np.ones((2, 2))
        np.testing.assert_array_equal(linalg.matmul(ones, ones), 2 * ones)

    def test_dimension_mismatch(self):
        with pytest.raises(DimensionMismatch):
            linalg.matmul(np.ones((2, 3)), np.ones((2, 2)))


class TestTrace:
    def test_identity(self):
        assert linalg.trace(np.eye(5)) == 5

    def test_diagonal_sum(self):
        assert linalg.trace([[1, 5], [7, 3]]) == 4

    def test_not_square(self):
        with pytest.raises(NotSquare):
            linalg.trace(np.ones((2, 3)))

    @given(complex_matrices())
    def test_gram_trace_is_squared_frobenius(self, a):
        total = linalg.trace(linalg.gram(a))
        assert abs(total.imag) < 1e-12
        assert abs(total.real - np.sum(np.abs(a) ** 2)) < 1e-12


class TestGram:
    def test_identity(self):
        np.testing.assert_array_equal(linalg.gram(np.eye(3)), np.eye(3))

    def test_hand_inner_products(self):
        a = np.array([[1.0, 0.6], [0.0, 0.8]])
        np.testing.assert_allclose(linalg.gram(a), [[1.0, 0.6], [0.6, 1.0]], atol=1e-15)

    def test_row_permutation_invariance(self):
        rng = np.random.default_rng(5)
        a = rng.normal(size=(4, 4)) + 1j * rng.normal(size=(4, 4))
        perm = np.eye(4)[[2, 0, 3, 1]]
        np.testing.assert_allclose(linalg.gram(perm @ a), linalg.gram(a), atol=1e-14)

    @given(complex_matrices())
    def test_hermitian_psd(self, a):
        g = linalg.gram(a)
        np.testing.assert_allclose(g, g.conj().T, atol=1e-12)
        eig = linalg.hermitian_eig(g, 1e-9)
        assert eig.values[-1] >= -1e-9 * max(1.0, eig.values[0])


class TestHermitianEig:
    def test_already_diagonal(self):
        res = linalg.hermitian_eig(np.diag([3.0, 1.0]))
        np.testing.assert_array_equal(res.values, [3.0, 1.0])
        np.testing.assert_array_equal(res.vectors, np.eye(2))

    def test_all_ones(self):
        res = linalg.hermitian_eig(np.ones((2, 2)))
        np.testing.assert_allclose(res.values, [2.0, 0.0], atol=1e-12)

    def test_2x2_closed_form(self):
        res = linalg.hermitian_eig([[1.0, 0.6], [0.6, 1.0]])
        np.testing.assert_allclose(res.values, [1.6, 0.4], atol=1e-12)

    def test_degenerate_keeps_index_order(self):
        res = linalg.hermitian_eig(np.eye(3))
        np.testing.assert_array_equal(res.values, np.ones(3))
        np.testing.assert_array_equal(res.vectors, np.eye(3))

    def test_not_hermitian(self):
        with pytest.raises(NotHermitian):
            linalg.hermitian_eig([[0.0, 1.0], [0.0, 0.0]])

    def test_zero_matrix(self):
        res = linalg.hermitian_eig(np.zeros((3, 3)))
        np.testing.assert_array_equal(res.values, np.zeros(3))
        np.testing.assert_array_equal(res.vectors, np.eye(3))

    def test_sweep_budget_exhaustion(self, monkeypatch):
        monkeypatch.setattr(linalg, "_SWEEP_BUDGET", 0)
        with pytest.raises(ConvergenceFailure):
            linalg.hermitian_eig(np.ones((2, 2)))

    @pytest.mark.parametrize("d", [2, 3])
    def test_characteristic_polynomial_oracle(self, d):
        rng = np.random.default_rng(11 + d)
        closed = eig2_closed if d == 2 else eig3_closed
        for _ in range(200):
            z = rng.normal(size=(d, d)) + 1j * rng.normal(size=(d, d))
            h = (z + z.conj().T) / 2
            res = linalg.hermitian_eig(h)
            np.testing.assert_allclose(res.values, closed(h), atol=1e-9)

    @given(hermitian_matrices())
    def test_invariants(self, h):
        tol = 1e-9
        res = linalg.hermitian_eig(h, tol)
        scale = float(np.linalg.norm(h))
        assert abs(np.sum(res.values) - np.trace(h).real) <= tol * max(1.0, scale)
        rebuilt = (res.vectors * res.values) @ res.vectors.conj().T
        assert np.linalg.norm(rebuilt - h) <= 10 * tol * max(1.0, scale)
        d = h.shape[0]
        assert np.linalg.norm(res.vectors.conj().T @ res.vectors - np.eye(d)) <= tol
        for k in range(d):
            residual = h @ res.vectors[:, k] - res.values[k] * res.vectors[:, k]
            assert np.linalg.norm(residual) <= tol * max(1.0, scale)
        assert all(res.values[i] >= res.values[i + 1] for i in range(d - 1))


class TestSpectralNorm:
    def test_identity(self):
        assert linalg.spectral_norm(np.eye(4)) == pytest.approx(1.0, abs=1e-12)

    def test_all_ones(self):
        # gram is 2 * all-ones, top eigenvalue 4
        assert linalg.spectral_norm(np.ones((2, 2))) == pytest.approx(2.0, abs=1e-12)

    def test_diagonal(self):
        assert linalg.spectral_norm(np.diag([0.5, 3.0])) == pytest.approx(3.0, abs=1e-12)

    @given(complex_matrices())
    def test_adjoint_symmetry(self, a):
        lhs = linalg.spectral_norm(a)
        rhs = linalg.spectral_norm(linalg.adjoint(a))
        assert abs(lhs - rhs) <= 1e-9 * max(1.0, lhs)


class TestSvd:
    def test_diagonal(self):
        u, s, v = linalg.svd(np.diag([0.8, 0.6]))
        np.testing.assert_allclose(s, [0.8, 0.6], atol=1e-12)
        np.testing.assert_allclose(u, np.eye(2), atol=1e-12)
        np.testing.assert_allclose(v, np.eye(2), atol=1e-12)

    def test_rotation_like(self):
        a = 0.5 * np.array([[1.0, 1.0], [1.0, -1.0]])
        _, s, _ = linalg.svd(a)
        np.testing.assert_allclose(s, [1 / math.sqrt(2)] * 2, atol=1e-12)

    def test_zero_matrix(self):
        u, s, v = linalg.svd(np.zeros((3, 3)))
        np.testing.assert_array_equal(s, np.zeros(3))
        np.testing.assert_allclose(u.conj().T @ u, np.eye(3), atol=1e-12)

    def test_not_square(self):
        with pytest.raises(NotSquare):
            linalg.svd(np.ones((2, 3)))

    def test_rank_deficient_completion(self):
        a = np.zeros((3, 3), dtype=complex)
        a[:, 0] = [1.0, 2.0j, 0.0]
        u, s, v = linalg.svd(a)
        assert s[0] > 0 and np.all(s[1:] == 0)
        np.testing.assert_allclose(u.conj().T @ u, np.eye(3), atol=1e-12)
        np.testing.assert_allclose(u @ np.diag(s) @ v.conj().T, a, atol=1e-12)

    @pytest.mark.parametrize("d", [2, 3, 5, 8])
    def test_reconstruction_and_permutation_invariance(self, d):
        rng = np.random.default_rng(d)
        for _ in range(10):
            a = rng.normal(size=(d, d)) + 1j * rng.normal(size=(d, d))
            u, s, v = linalg.svd(a)
            tol = 1e-9 * np.linalg.norm(a)
            assert np.linalg.norm(u @ np.diag(s) @ v.conj().T - a) <= tol
            assert np.linalg.norm(u.conj().T @ u - np.eye(d)) <= 1e-9
            assert np.linalg.norm(v.conj().T @ v - np.eye(d)) <= 1e-9
            perm = rng.permutation(d)
            _, s_perm, _ = linalg.svd(a[perm][:, rng.permutation(d)])
            np.testing.assert_allclose(s_perm, s, atol=1e-9 * max(1.0, s[0]))


class TestIsUnitary:
    def test_identity(self):
        assert linalg.is_unitary(np.eye(3))

    def test_hadamard_like(self):
        h = np.array([[1.0, 1.0], [1.0, -1.0]]) / math.sqrt(2)
        assert linalg.is_unitary(h)

    def test_scaled_ones_is_not(self):
        assert not linalg.is_unitary(np.ones((2, 2)) / math.sqrt(2))
