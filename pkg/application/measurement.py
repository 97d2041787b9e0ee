"""
Projective qubit measurements on a shared two-qubit state.

The scalar functions (`joint_distribution`, `mutual_information`, ...) work
from projectors and are the reference definitions. The ``*_field`` functions
evaluate the same quantities for whole arrays of measurement directions
through the Pauli (Bloch) form of the state; the optimizers call those.
All entropies are in bits.
"""

from __future__ import annotations

from typing import Tuple

import numpy as np
import numpy.typing as npt

from domain.errors import ZeroProbabilityOutcome
from domain.linalg import IDENTITY_2, hermitian_eigen, kron, partial_trace, pauli_coefficients
from domain.models import (
    BlochRepresentation,
    DensityMatrix,
    JointDistribution,
    Outcome,
    ProjectiveBasis,
)


ENTROPY_CUTOFF = 1e-14
ZERO_PROBABILITY = 1e-12

FloatArray = npt.NDArray[np.float64]


def xlog2x(p: npt.ArrayLike) -> FloatArray:
    """p·log2(p) with the continuous extension 0 for p below the cutoff."""

    p = np.asarray(p, dtype=float)
    safe = np.where(p > ENTROPY_CUTOFF, p, 1.0)
    return np.where(p > ENTROPY_CUTOFF, p * np.log2(safe), 0.0)


def shannon_entropy(probabilities: npt.ArrayLike) -> float:
    return float(-np.sum(xlog2x(probabilities)))


def binary_entropy(x: npt.ArrayLike) -> FloatArray:
    """h(x) = −x log2 x − (1−x) log2(1−x), elementwise."""

    x = np.asarray(x, dtype=float)
    return -(xlog2x(x) + xlog2x(1 - x))


def qubit_entropy_from_bloch(length: npt.ArrayLike) -> FloatArray:
    """Von Neumann entropy of qubit states with Bloch-vector length `length`."""

    length = np.clip(np.asarray(length, dtype=float), 0.0, 1.0)
    return binary_entropy((1 + length) / 2)


def bloch_representation(rho: DensityMatrix) -> BlochRepresentation:
    r, s, t = pauli_coefficients(rho.matrix)
    return BlochRepresentation(r=r, s=s, T=t)


def joint_distribution(
    rho: DensityMatrix,
    basis_a: ProjectiveBasis,
    basis_b: ProjectiveBasis,
) -> JointDistribution:
    """p(a, b) = tr[(P_a ⊗ P_b) ρ]."""

    table = np.array(
        [
            [np.trace(kron(pa, pb) @ rho.matrix).real for pb in basis_b.projectors()]
            for pa in basis_a.projectors()
        ]
    )
    return JointDistribution(np.clip(table, 0.0, None))


def mutual_information(d: JointDistribution) -> float:
    """Σ p(a,b) log2[p(a,b) / (p(a) p(b))], never negative."""

    value = (
        shannon_entropy(d.alice_marginal)
        + shannon_entropy(d.bob_marginal)
        - shannon_entropy(d.p)
    )
    return max(value, 0.0)


def von_neumann_entropy(rho: DensityMatrix) -> float:
    eigenvalues = hermitian_eigen(rho.matrix).eigenvalues
    return shannon_entropy(np.clip(eigenvalues, 0.0, None))


def reduced_state(rho: DensityMatrix, keep: str) -> DensityMatrix:
    """Marginal state of party `keep` ("A" or "B")."""

    traced = "B" if keep == "A" else "A"
    return DensityMatrix(partial_trace(rho.matrix, traced))


def conditional_state(
    rho: DensityMatrix,
    basis_a: ProjectiveBasis,
    outcome: Outcome,
) -> Tuple[float, DensityMatrix]:
    """Probability of Alice's `outcome` and Bob's post-measurement state."""

    lifted = kron(basis_a.projector(outcome), IDENTITY_2)
    unnormalized = partial_trace(lifted @ rho.matrix @ lifted, "A")
    probability = float(np.trace(unnormalized).real)
    if probability <= ZERO_PROBABILITY:
        raise ZeroProbabilityOutcome(f"outcome {outcome} has probability {probability:.3e}")
    return probability, DensityMatrix(unnormalized / probability)


def mutual_information_field(
    bloch: BlochRepresentation,
    alice_dirs: npt.ArrayLike,
    bob_dirs: npt.ArrayLike,
) -> FloatArray:
    """
    Classical mutual information for broadcastable arrays of unit vectors
    (last axis x, y, z) of Alice's and Bob's "+" projectors.
    """

    a = np.asarray(alice_dirs, dtype=float)
    b = np.asarray(bob_dirs, dtype=float)
    x = a @ bloch.r
    y = b @ bloch.s
    z = np.sum((a @ bloch.T) * b, axis=-1)
    x, y, z = np.broadcast_arrays(x, y, z)

    joint = 0.0
    for sa in (1.0, -1.0):
        for sb in (1.0, -1.0):
            joint = joint + xlog2x(np.clip((1 + sa * x + sb * y + sa * sb * z) / 4, 0.0, 1.0))
    info = binary_entropy((1 + x) / 2) + binary_entropy((1 + y) / 2) + joint
    return np.maximum(info, 0.0)


def holevo_field(bloch: BlochRepresentation, bob_dirs: npt.ArrayLike) -> FloatArray:
    """
    J(ρ, π_B) = S(ρ_A) − Σ_b p(b) S(ρ_A|b) for an array of Bob directions.

    Alice's conditional Bloch vector for Bob's outcome b is
    (r + b·T n) / (1 + b·s·n).
    """

    n = np.asarray(bob_dirs, dtype=float)
    sn = n @ bloch.s
    tn = n @ bloch.T.T
    remaining = 0.0
    for sign in (1.0, -1.0):
        weight = np.clip((1 + sign * sn) / 2, 0.0, 1.0)
        numerator = np.linalg.norm(bloch.r + sign * tn, axis=-1)
        safe = np.where(weight > ENTROPY_CUTOFF, weight, 1.0)
        entropy = qubit_entropy_from_bloch(numerator / (2 * safe))
        remaining = remaining + np.where(weight > ENTROPY_CUTOFF, weight * entropy, 0.0)
    local = qubit_entropy_from_bloch(np.linalg.norm(bloch.r))
    return local - remaining


def holevo_quantity(rho: DensityMatrix, basis_b: ProjectiveBasis) -> float:
    return float(holevo_field(bloch_representation(rho), basis_b.direction))


def schmidt_entanglement(theta: npt.ArrayLike) -> FloatArray:
    """−sin²θ log2 sin²θ − cos²θ log2 cos²θ."""

    return binary_entropy(np.cos(np.asarray(theta, dtype=float)) ** 2)


def sigma_x_strategy_information(theta: npt.ArrayLike) -> FloatArray:
    """
    Mutual information when both parties measure σx on cosθ|00⟩ + sinθ|11⟩:
    2 + 2a log2 a + 2b log2 b with a, b = (1 ± sin2θ)/4.
    """

    s = np.sin(2 * np.asarray(theta, dtype=float))
    return 2 + 2 * xlog2x((1 + s) / 4) + 2 * xlog2x((1 - s) / 4)
