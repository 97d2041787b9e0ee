"""
Fixed-size complex linear algebra for qubit (2×2) and two-qubit (4×4) matrices.

Matrices are plain ``numpy`` arrays of dtype ``complex128``. Subsystem
ordering is A ⊗ B, so the row index of a 4×4 matrix is ``2*i + k`` with ``i``
Alice's and ``k`` Bob's computational index.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Literal, Tuple

import numpy as np
import numpy.typing as npt

from .errors import DimensionMismatch, NotHermitian, NotPSD


ComplexMatrix = npt.NDArray[np.complex128]
Subsystem = Literal["A", "B"]

HERMITIAN_TOLERANCE = 1e-9
PSD_TOLERANCE = 1e-8

IDENTITY_2: ComplexMatrix = np.eye(2, dtype=complex)
IDENTITY_4: ComplexMatrix = np.eye(4, dtype=complex)
PAULI_X: ComplexMatrix = np.array([[0, 1], [1, 0]], dtype=complex)
PAULI_Y: ComplexMatrix = np.array([[0, -1j], [1j, 0]], dtype=complex)
PAULI_Z: ComplexMatrix = np.array([[1, 0], [0, -1]], dtype=complex)
PAULIS: Tuple[ComplexMatrix, ComplexMatrix, ComplexMatrix] = (PAULI_X, PAULI_Y, PAULI_Z)

for _m in (IDENTITY_2, IDENTITY_4, PAULI_X, PAULI_Y, PAULI_Z):
    _m.setflags(write=False)


@dataclass(frozen=True, eq=False)
class EigenDecomposition:
    """Eigenvalues sorted descending; eigenvectors are the matching columns."""

    eigenvalues: npt.NDArray[np.float64]
    eigenvectors: ComplexMatrix

    def reconstruct(self) -> ComplexMatrix:
        v = self.eigenvectors
        return (v * self.eigenvalues) @ v.conj().T


def as_matrix(m: npt.ArrayLike, dims: Tuple[int, ...] = (2, 4)) -> ComplexMatrix:
    """Coerce to a square complex matrix whose dimension is one of `dims`."""

    arr = np.asarray(m, dtype=complex)
    if arr.ndim != 2 or arr.shape[0] != arr.shape[1] or arr.shape[0] not in dims:
        raise DimensionMismatch(
            f"expected a square matrix of dimension {' or '.join(map(str, dims))}, "
            f"got shape {arr.shape}"
        )
    return arr


def is_hermitian(m: npt.ArrayLike, tol: float = HERMITIAN_TOLERANCE) -> bool:
    arr = np.asarray(m, dtype=complex)
    return bool(np.max(np.abs(arr - arr.conj().T)) <= tol)


def hermitian_eigen(m: npt.ArrayLike) -> EigenDecomposition:
    """
    Eigendecomposition of a Hermitian 2×2 or 4×4 matrix.

    The input is symmetrized before the solve so that round-off below the
    Hermiticity tolerance cannot leak into complex eigenvalues.
    """

    arr = as_matrix(m)
    if not is_hermitian(arr):
        raise NotHermitian("matrix differs from its adjoint by more than 1e-9")

    values, vectors = np.linalg.eigh((arr + arr.conj().T) / 2)
    order = np.argsort(values)[::-1]
    return EigenDecomposition(eigenvalues=values[order], eigenvectors=vectors[:, order])


def kron(a: npt.ArrayLike, b: npt.ArrayLike) -> ComplexMatrix:
    """Kronecker product of two qubit operators, (a⊗b)[2i+k, 2j+l] = a[i,j]·b[k,l]."""

    return np.kron(as_matrix(a, (2,)), as_matrix(b, (2,)))


def _as_four_index(m: npt.ArrayLike) -> np.ndarray:
    # [i, k, j, l] with (i, j) on A and (k, l) on B
    return as_matrix(m, (4,)).reshape(2, 2, 2, 2)


def partial_trace(m: npt.ArrayLike, subsystem: Subsystem) -> ComplexMatrix:
    """Trace out `subsystem`, returning the reduced operator of the other qubit."""

    t = _as_four_index(m)
    if subsystem == "A":
        return np.einsum("ikil->kl", t)
    if subsystem == "B":
        return np.einsum("ikjk->ij", t)
    raise ValueError(f"unknown subsystem {subsystem!r}")


def partial_transpose(m: npt.ArrayLike, subsystem: Subsystem = "A") -> ComplexMatrix:
    """Transpose the indices of `subsystem` only."""

    t = _as_four_index(m)
    if subsystem == "A":
        return t.transpose(2, 1, 0, 3).reshape(4, 4)
    if subsystem == "B":
        return t.transpose(0, 3, 2, 1).reshape(4, 4)
    raise ValueError(f"unknown subsystem {subsystem!r}")


def clamp_spectrum(values: npt.NDArray[np.float64]) -> npt.NDArray[np.float64]:
    """
    Zero out eigenvalues that are negative only by round-off.

    Values below -PSD_TOLERANCE raise NotPSD.
    """

    lowest = float(np.min(values))
    if lowest < -PSD_TOLERANCE:
        raise NotPSD(f"matrix has eigenvalue {lowest:.3e} below -{PSD_TOLERANCE:g}")
    return np.where(values < 0, 0.0, values)


def matrix_sqrt_psd(m: npt.ArrayLike) -> ComplexMatrix:
    """Principal square root of a Hermitian positive semidefinite matrix."""

    eig = hermitian_eigen(m)
    roots = np.sqrt(clamp_spectrum(eig.eigenvalues))
    return EigenDecomposition(roots, eig.eigenvectors).reconstruct()


def local_unitary(theta: float, phi: float, lam: float) -> ComplexMatrix:
    """General SU(2) element in Euler form U(θ, φ, λ) up to global phase."""

    c, s = np.cos(theta / 2), np.sin(theta / 2)
    return np.array(
        [
            [c, -np.exp(1j * lam) * s],
            [np.exp(1j * phi) * s, np.exp(1j * (phi + lam)) * c],
        ],
        dtype=complex,
    )


def apply_local_unitaries(m: npt.ArrayLike, u: npt.ArrayLike, v: npt.ArrayLike) -> ComplexMatrix:
    """(U⊗V) m (U⊗V)†."""

    w = kron(u, v)
    return w @ as_matrix(m, (4,)) @ w.conj().T


def pauli_coefficients(
    m: npt.ArrayLike,
) -> Tuple[npt.NDArray[np.float64], npt.NDArray[np.float64], npt.NDArray[np.float64]]:
    """
    Real coefficients (r, s, T) of a Hermitian two-qubit operator in the
    Pauli product basis: r_i = tr(m σ_i⊗𝟙), s_j = tr(m 𝟙⊗σ_j),
    T_ij = tr(m σ_i⊗σ_j).
    """

    arr = as_matrix(m, (4,))
    r = np.array([np.trace(arr @ np.kron(p, IDENTITY_2)).real for p in PAULIS])
    s = np.array([np.trace(arr @ np.kron(IDENTITY_2, p)).real for p in PAULIS])
    t = np.array([[np.trace(arr @ np.kron(p, q)).real for q in PAULIS] for p in PAULIS])
    return r, s, t
