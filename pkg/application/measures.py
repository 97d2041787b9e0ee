"""
Correlation measures of two-qubit states: concurrence and entanglement of
formation, quantum mutual information, Bob-side quantum discord, entropic
accord, and the PPT test. All values are in bits except concurrence.
"""

from __future__ import annotations

import logging
from typing import Optional, Tuple

import numpy as np

from domain.errors import InconsistentMeasure
from domain.linalg import (
    PAULI_Y,
    clamp_spectrum,
    hermitian_eigen,
    matrix_sqrt_psd,
    partial_transpose,
)
from domain.models import (
    DensityMatrix,
    MeasureReport,
    OptimizerConfig,
    OptimizerDiagnostics,
    ProjectiveBasis,
    SaddlePoint,
    SphereOptimum,
    spherical_to_cartesian,
)

from application.measurement import (
    binary_entropy,
    bloch_representation,
    holevo_field,
    mutual_information_field,
    reduced_state,
    von_neumann_entropy,
)
from application.minimax import (
    brute_force_maximize,
    brute_force_minimax,
    maximize_on_sphere,
    minimax_on_spheres,
)


logger = logging.getLogger(__name__)

MEASURE_TOLERANCE = 1e-9
PPT_TOLERANCE = 1e-9
ORACLE_RESOLUTION = 200

_SPIN_FLIP = np.kron(PAULI_Y, PAULI_Y)


def clamp_measure(value: float, name: str) -> float:
    """Report values in [−1e-9, 0) as 0; anything lower is a bug."""

    if value < -MEASURE_TOLERANCE:
        raise InconsistentMeasure(f"{name} came out negative: {value:.3e}")
    return max(value, 0.0)


def spin_flip(rho: DensityMatrix) -> np.ndarray:
    """ρ̃ = (σy⊗σy) ρ* (σy⊗σy)."""

    return _SPIN_FLIP @ rho.matrix.conj() @ _SPIN_FLIP


def wootters_spectrum(rho: DensityMatrix) -> np.ndarray:
    """
    Descending eigenvalues of R = √(√ρ ρ̃ √ρ).

    Square roots amplify round-off of vanishing eigenvalues to ~1e-8, so
    `concurrence` uses the equivalent singular-value form; this Hermitian
    route is kept as an independent check.
    """

    root = matrix_sqrt_psd(rho.matrix)
    return hermitian_eigen(matrix_sqrt_psd(root @ spin_flip(rho) @ root)).eigenvalues


def _decomposition_spectrum(rho: DensityMatrix) -> np.ndarray:
    # singular values of τ_ij = v_iᵀ (σy⊗σy) v_j for the subnormalized eigenvectors v_i = √p_i e_i
    eig = hermitian_eigen(rho.matrix)
    v = eig.eigenvectors * np.sqrt(clamp_spectrum(eig.eigenvalues))
    return np.linalg.svd(v.T @ _SPIN_FLIP @ v, compute_uv=False)


def concurrence(rho: DensityMatrix) -> float:
    """C(ρ) = max(0, λ1 − λ2 − λ3 − λ4)."""

    lam = np.sort(_decomposition_spectrum(rho))[::-1]
    return float(min(max(lam[0] - lam[1:].sum(), 0.0), 1.0))


def eof_from_concurrence(c: float) -> float:
    return float(binary_entropy((1 + np.sqrt(max(1 - c * c, 0.0))) / 2))


def eof(rho: DensityMatrix) -> float:
    """Entanglement of formation h((1 + √(1 − C²)) / 2)."""

    return eof_from_concurrence(concurrence(rho))


def quantum_mutual_information(rho: DensityMatrix) -> float:
    """S(ρ_A) + S(ρ_B) − S(ρ_AB)."""

    value = (
        von_neumann_entropy(reduced_state(rho, "A"))
        + von_neumann_entropy(reduced_state(rho, "B"))
        - von_neumann_entropy(rho)
    )
    return clamp_measure(value, "quantum mutual information")


def is_ppt(rho: DensityMatrix) -> bool:
    lowest = hermitian_eigen(partial_transpose(rho.matrix, "A")).eigenvalues[-1]
    return bool(lowest >= -PPT_TOLERANCE)


def _holevo_optimum(rho: DensityMatrix, config: OptimizerConfig, oracle: bool) -> SphereOptimum:
    bloch = bloch_representation(rho)

    def objective(theta: np.ndarray, phi: np.ndarray) -> np.ndarray:
        return holevo_field(bloch, spherical_to_cartesian(theta, phi))

    if oracle:
        return brute_force_maximize(objective, ORACLE_RESOLUTION, refine=True)
    return maximize_on_sphere(objective, config)


def _discord(
    rho: DensityMatrix, config: OptimizerConfig, oracle: bool
) -> Tuple[float, ProjectiveBasis, OptimizerDiagnostics]:
    best = _holevo_optimum(rho, config, oracle)
    value = quantum_mutual_information(rho) - best.value
    return clamp_measure(value, "discord"), best.basis, best.diagnostics


def discord(
    rho: DensityMatrix,
    config: Optional[OptimizerConfig] = None,
    oracle: bool = False,
) -> Tuple[float, ProjectiveBasis]:
    """
    D(ρ) = I(ρ) − max over Bob's projective bases of J(ρ, π_B).

    Returns the discord and Bob's maximizing basis.
    """

    value, basis, _ = _discord(rho, config or OptimizerConfig(), oracle)
    return value, basis


def _accord(rho: DensityMatrix, config: OptimizerConfig, oracle: bool) -> SaddlePoint:
    bloch = bloch_representation(rho)

    def objective(a_theta: np.ndarray, a_phi: np.ndarray, b_theta: np.ndarray, b_phi: np.ndarray) -> np.ndarray:
        return mutual_information_field(
            bloch,
            spherical_to_cartesian(a_theta, a_phi),
            spherical_to_cartesian(b_theta, b_phi),
        )

    if oracle:
        return brute_force_minimax(objective, ORACLE_RESOLUTION, refine=True)
    return minimax_on_spheres(objective, config)


def entropic_accord(
    rho: DensityMatrix,
    config: Optional[OptimizerConfig] = None,
    oracle: bool = False,
) -> Tuple[float, ProjectiveBasis, ProjectiveBasis]:
    """
    min over Alice's bases of max over Bob's bases of I(A;B).

    Returns the accord with Alice's and Bob's saddle bases.
    """

    saddle = _accord(rho, config or OptimizerConfig(), oracle)
    return clamp_measure(saddle.value, "entropic accord"), saddle.alice, saddle.bob


def evaluate(
    rho: DensityMatrix,
    config: Optional[OptimizerConfig] = None,
    oracle: bool = False,
) -> MeasureReport:
    """Every measure of `rho` in one report."""

    config = config or OptimizerConfig()
    c = concurrence(rho)
    d, d_basis, d_diag = _discord(rho, config, oracle)
    saddle = _accord(rho, config, oracle)
    report = MeasureReport(
        concurrence=c,
        eof=eof_from_concurrence(c),
        discord=d,
        ea=clamp_measure(saddle.value, "entropic accord"),
        quantum_mutual_information=quantum_mutual_information(rho),
        ea_saddle=(saddle.alice, saddle.bob),
        discord_argmax=d_basis,
        diagnostics={"discord": d_diag, "ea": saddle.diagnostics},
    )
    logger.debug(
        "measures: C=%.6g EoF=%.6g D=%.6g EA=%.6g", report.concurrence, report.eof, report.discord, report.ea
    )
    return report
