import unittest

import numpy as np
from numpy.testing import assert_allclose

from domain.errors import DimensionMismatch, NotHermitian, NotPSD
from domain.linalg import (
    IDENTITY_2,
    IDENTITY_4,
    PAULI_X,
    PAULI_Z,
    apply_local_unitaries,
    as_matrix,
    clamp_spectrum,
    hermitian_eigen,
    kron,
    local_unitary,
    matrix_sqrt_psd,
    partial_trace,
    partial_transpose,
    pauli_coefficients,
)


SINGLET = np.outer([0, 1, -1, 0], [0, 1, -1, 0]).astype(complex) / 2


class LinalgTests(unittest.TestCase):
    def test_as_matrix_rejects_wrong_shapes(self):
        with self.assertRaises(DimensionMismatch):
            as_matrix(np.zeros((3, 3)))
        with self.assertRaises(DimensionMismatch):
            as_matrix(np.zeros((2, 2)), (4,))

    def test_hermitian_eigen_is_descending_and_reconstructs(self):
        m = np.array([[2, 1j, 0, 0], [-1j, 1, 0, 0], [0, 0, 0.5, 0], [0, 0, 0, -1]], dtype=complex)
        eig = hermitian_eigen(m)
        self.assertTrue(np.all(np.diff(eig.eigenvalues) <= 0))
        assert_allclose(eig.reconstruct(), m, atol=1e-12)
        assert_allclose(eig.eigenvectors.conj().T @ eig.eigenvectors, IDENTITY_4, atol=1e-12)

    def test_hermitian_eigen_rejects_non_hermitian(self):
        with self.assertRaises(NotHermitian):
            hermitian_eigen(np.array([[0, 1], [0, 0]], dtype=complex))

    def test_partial_trace_of_product(self):
        a = np.array([[0.7, 0.1], [0.1, 0.3]], dtype=complex)
        b = np.array([[0.2, 0.05j], [-0.05j, 0.8]], dtype=complex)
        assert_allclose(partial_trace(kron(a, b), "B"), a, atol=1e-14)
        assert_allclose(partial_trace(kron(a, b), "A"), b, atol=1e-14)

    def test_partial_trace_of_singlet_is_maximally_mixed(self):
        assert_allclose(partial_trace(SINGLET, "A"), IDENTITY_2 / 2, atol=1e-14)

    def test_partial_transpose_of_singlet_has_negative_eigenvalue(self):
        values = hermitian_eigen(partial_transpose(SINGLET, "A")).eigenvalues
        self.assertAlmostEqual(values[-1], -0.5, places=12)
        assert_allclose(
            hermitian_eigen(partial_transpose(SINGLET, "B")).eigenvalues, values, atol=1e-12
        )

    def test_clamp_spectrum(self):
        assert_allclose(clamp_spectrum(np.array([1.0, -1e-12])), [1.0, 0.0])
        with self.assertRaises(NotPSD):
            clamp_spectrum(np.array([1.0, -1e-6]))

    def test_matrix_sqrt_squares_back(self):
        m = np.array([[0.6, 0.2 - 0.1j], [0.2 + 0.1j, 0.4]], dtype=complex)
        root = matrix_sqrt_psd(m)
        assert_allclose(root @ root, m, atol=1e-12)

    def test_local_unitary_is_unitary(self):
        u = local_unitary(0.3, 1.2, -0.7)
        assert_allclose(u @ u.conj().T, IDENTITY_2, atol=1e-14)

    def test_pauli_coefficients(self):
        r, s, t = pauli_coefficients(IDENTITY_4 / 4)
        assert_allclose(np.concatenate([r, s, t.ravel()]), 0.0, atol=1e-15)
        r, s, t = pauli_coefficients(SINGLET)
        assert_allclose(t, -np.eye(3), atol=1e-14)
        assert_allclose(r, 0.0, atol=1e-15)

    def test_local_unitaries_rotate_correlations(self):
        # σx⊗𝟙 conjugation flips the sign of the y and z rows of T
        rotated = apply_local_unitaries(SINGLET, PAULI_X, IDENTITY_2)
        _, _, t = pauli_coefficients(rotated)
        assert_allclose(np.diag(t), [-1, 1, 1], atol=1e-14)
        _, _, t = pauli_coefficients(apply_local_unitaries(SINGLET, PAULI_Z, PAULI_Z))
        assert_allclose(np.diag(t), [-1, -1, -1], atol=1e-14)


if __name__ == "__main__":
    unittest.main()
