"""
Constructors for the two-qubit state families used throughout the experiments.

Every constructor returns a validated `DensityMatrix`. Bell states follow
φ± = (|00⟩ ± |11⟩)/√2 and ψ± = (|01⟩ ± |10⟩)/√2; the tetrahedron vertex of
each Bell state is computed from its projector (see `BELL_VERTICES`) rather
than assumed.
"""

from __future__ import annotations

import logging
from typing import Dict, List, Literal, Sequence, Tuple

import numpy as np
import numpy.typing as npt

from domain.errors import NotADistribution, NotAState, OutOfRange
from domain.linalg import (
    IDENTITY_2,
    IDENTITY_4,
    PAULIS,
    ComplexMatrix,
    as_matrix,
    kron,
    local_unitary,
    pauli_coefficients,
)
from domain.models import (
    DISTRIBUTION_TOLERANCE,
    BellDiagonalCoords,
    DensityMatrix,
    RandomMeasure,
    RngSeed,
)


logger = logging.getLogger(__name__)

BellName = Literal["phi+", "phi-", "psi+", "psi-"]
BELL_ORDER: Tuple[BellName, ...] = ("phi+", "phi-", "psi+", "psi-")

_SQRT_HALF = 1 / np.sqrt(2)
_BELL_KETS: Dict[str, npt.NDArray[np.complex128]] = {
    "phi+": np.array([1, 0, 0, 1], dtype=complex) * _SQRT_HALF,
    "phi-": np.array([1, 0, 0, -1], dtype=complex) * _SQRT_HALF,
    "psi+": np.array([0, 1, 1, 0], dtype=complex) * _SQRT_HALF,
    "psi-": np.array([0, 1, -1, 0], dtype=complex) * _SQRT_HALF,
}


def _projector(ket: npt.ArrayLike) -> ComplexMatrix:
    ket = np.asarray(ket, dtype=complex)
    return np.outer(ket, ket.conj())


def bell_projector(name: BellName) -> DensityMatrix:
    try:
        return DensityMatrix(_projector(_BELL_KETS[name]))
    except KeyError:
        raise ValueError(f"unknown Bell state {name!r}; expected one of {BELL_ORDER}") from None


def correlation_diagonal(m: npt.ArrayLike) -> npt.NDArray[np.float64]:
    """(tr(ρ σx⊗σx), tr(ρ σy⊗σy), tr(ρ σz⊗σz))."""

    _, _, t = pauli_coefficients(m)
    return np.diag(t).copy()


# φ+ ↔ (1,−1,1), φ− ↔ (−1,1,1), ψ+ ↔ (1,1,−1), ψ− ↔ (−1,−1,−1)
BELL_VERTICES: Dict[str, npt.NDArray[np.float64]] = {
    name: np.rint(correlation_diagonal(_projector(ket))) for name, ket in _BELL_KETS.items()
}

MAXIMALLY_MIXED = DensityMatrix(IDENTITY_4 / 4)


def _check_unit_interval(name: str, value: float) -> None:
    if not 0.0 <= value <= 1.0:
        raise OutOfRange(f"{name}={value} outside [0, 1]")


def _check_distribution(weights: npt.NDArray[np.float64]) -> None:
    if np.any(weights < 0):
        raise NotADistribution("weights must be non-negative")
    if abs(weights.sum() - 1) > DISTRIBUTION_TOLERANCE:
        raise NotADistribution(f"weights sum to {weights.sum():.15g}, expected 1")


def pure_schmidt(theta: float) -> DensityMatrix:
    """
    |Ψ⟩⟨Ψ| for |Ψ⟩ = cosθ|00⟩ + sinθ|11⟩.

    The projector has period π in θ, so θ is reduced modulo π; the physically
    distinct range is [0, π/2].
    """

    theta = float(np.mod(theta, np.pi))
    ket = np.array([np.cos(theta), 0, 0, np.sin(theta)], dtype=complex)
    return DensityMatrix(_projector(ket))


def product_state(rho_a: DensityMatrix, rho_b: DensityMatrix) -> DensityMatrix:
    return DensityMatrix(kron(rho_a.matrix, rho_b.matrix))


def with_white_noise(rho: DensityMatrix, e: float) -> DensityMatrix:
    """(1−e)ρ + e·𝟙/d."""

    _check_unit_interval("e", e)
    return DensityMatrix((1 - e) * rho.matrix + e * np.eye(rho.dim) / rho.dim)


def werner(e: float) -> DensityMatrix:
    """(1−e)|ψ−⟩⟨ψ−| + e𝟙/4."""

    return with_white_noise(bell_projector("psi-"), e)


def bell_diagonal(coords: BellDiagonalCoords) -> DensityMatrix:
    """ρ = ¼(𝟙 + Σ c_j σ_j⊗σ_j); coordinates must lie in the tetrahedron."""

    m = IDENTITY_4.copy()
    for c, p in zip(coords.as_array(), PAULIS):
        m = m + c * np.kron(p, p)
    try:
        return DensityMatrix(m / 4)
    except NotAState as exc:
        raise NotAState(f"coordinates {tuple(coords.as_array())} lie outside the tetrahedron: {exc}") from exc


def bell_weights(coords: BellDiagonalCoords) -> npt.NDArray[np.float64]:
    """Eigenvalues (p_φ+, p_φ−, p_ψ+, p_ψ−) of the Bell-diagonal state at `coords`."""

    c = coords.as_array()
    return np.array([(1 + c @ BELL_VERTICES[name]) / 4 for name in BELL_ORDER])


def in_tetrahedron(coords: BellDiagonalCoords, tol: float = 1e-9) -> bool:
    return bool(np.all(bell_weights(coords) >= -tol))


def bell_mixture(p1: float, p2: float, p3: float, p4: float) -> DensityMatrix:
    """p1|φ+⟩⟨φ+| + p2|φ−⟩⟨φ−| + p3|ψ+⟩⟨ψ+| + p4|ψ−⟩⟨ψ−|."""

    weights = np.array([p1, p2, p3, p4], dtype=float)
    _check_distribution(weights)
    m = sum(w * _projector(_BELL_KETS[name]) for w, name in zip(weights, BELL_ORDER))
    return DensityMatrix(m)


def bell_coordinates(rho: DensityMatrix) -> BellDiagonalCoords:
    """Correlation-matrix diagonal of `rho`; exact inverse of `bell_diagonal`."""

    c1, c2, c3 = correlation_diagonal(rho.matrix)
    return BellDiagonalCoords(float(c1), float(c2), float(c3))


def coords_of_mixture(weights: Sequence[float]) -> BellDiagonalCoords:
    c = sum(w * BELL_VERTICES[name] for w, name in zip(weights, BELL_ORDER))
    return BellDiagonalCoords(*(float(x) for x in c))


def edge_state(a: BellName, b: BellName, p: float) -> DensityMatrix:
    """Rank-2 edge state p|a⟩⟨a| + (1−p)|b⟩⟨b|."""

    _check_unit_interval("p", p)
    unknown = sorted({a, b} - set(BELL_ORDER))
    if unknown:
        raise ValueError(f"unknown Bell state {unknown[0]!r}; expected one of {', '.join(BELL_ORDER)}")
    if a == b:
        raise ValueError("an edge needs two distinct Bell states")
    weights = {name: 0.0 for name in BELL_ORDER}
    weights[a] += p
    weights[b] += 1 - p
    return bell_mixture(*(weights[name] for name in BELL_ORDER))


def face_state(w1: float, w2: float, w3: float) -> DensityMatrix:
    """Barycentric point (φ+, φ−, ψ+) of the face opposite the ψ− vertex."""

    return bell_mixture(w1, w2, w3, 0.0)


def vertex_to_face_state(face_weights: Sequence[float], t: float) -> DensityMatrix:
    """(1−t)|ψ−⟩⟨ψ−| + t·face_state(face_weights), a rank-4 transect for 0 < t < 1."""

    _check_unit_interval("t", t)
    w = np.asarray(face_weights, dtype=float)
    _check_distribution(w)
    return bell_mixture(t * w[0], t * w[1], t * w[2], 1 - t)


def distance_from_singlet(coords: BellDiagonalCoords) -> float:
    """Euclidean distance in coordinate space from the ψ− vertex."""

    return float(np.linalg.norm(coords.as_array() - BELL_VERTICES["psi-"]))


def rank_two_product_mixture(p: float) -> DensityMatrix:
    """p|ψ+⟩⟨ψ+| + (1−p)|00⟩⟨00|."""

    _check_unit_interval("p", p)
    zero_zero = np.zeros(4, dtype=complex)
    zero_zero[0] = 1
    return DensityMatrix(p * _projector(_BELL_KETS["psi+"]) + (1 - p) * _projector(zero_zero))


def zero_ea_state(rho_b: DensityMatrix, phi_b: npt.ArrayLike) -> DensityMatrix:
    """
    |0⟩⟨0|⊗ρ_B + |0⟩⟨1|⊗φ_B + |1⟩⟨0|⊗φ_B† + |1⟩⟨1|⊗ρ_B, normalized.

    Alice's computational-basis measurement leaves Bob in ρ_B for both
    outcomes, so the accord of the result vanishes.
    """

    if rho_b.dim != 2:
        raise NotAState("rho_b must be a single-qubit state")
    phi = as_matrix(phi_b, (2,))
    block = np.block([[rho_b.matrix, phi], [phi.conj().T, rho_b.matrix]])
    try:
        return DensityMatrix(block / np.trace(block).real)
    except NotAState as exc:
        raise NotAState(f"block matrix [[ρ_B, φ_B], [φ_B†, ρ_B]] is not a state: {exc}") from exc


def classical_state(weights: npt.ArrayLike) -> DensityMatrix:
    """Σ c_mn |m,n⟩⟨m,n|, diagonal in the computational basis."""

    w = np.asarray(weights, dtype=float)
    if w.shape != (2, 2):
        raise NotADistribution(f"weights must be 2×2, got {w.shape}")
    _check_distribution(w.ravel())
    return DensityMatrix(np.diag(w.ravel()).astype(complex))


def qubit_state(bloch: npt.ArrayLike) -> DensityMatrix:
    """Single-qubit state (𝟙 + v·σ)/2."""

    v = np.asarray(bloch, dtype=float)
    return DensityMatrix((IDENTITY_2 + sum(c * p for c, p in zip(v, PAULIS))) / 2)


def _check_seed(seed: RngSeed) -> None:
    if not 0 <= seed < 2**64:
        raise OutOfRange(f"seed {seed} is not an unsigned 64-bit integer")


def _stream(seed: RngSeed, count: int) -> List[np.random.Generator]:
    _check_seed(seed)
    children = np.random.SeedSequence(seed).spawn(count)
    return [np.random.Generator(np.random.PCG64(child)) for child in children]


def ginibre(rng: np.random.Generator, dim: int = 4) -> ComplexMatrix:
    """Matrix of independent standard complex Gaussians."""

    return (rng.standard_normal((dim, dim)) + 1j * rng.standard_normal((dim, dim))) / np.sqrt(2)


def haar_unitary(rng: np.random.Generator, dim: int = 4) -> ComplexMatrix:
    """QR of a Ginibre matrix with the phases of R's diagonal absorbed into Q."""

    q, r = np.linalg.qr(ginibre(rng, dim))
    d = np.diagonal(r)
    return q * (d / np.abs(d))


def random_local_unitary(rng: np.random.Generator) -> ComplexMatrix:
    theta, phi, lam = rng.uniform(0, 2 * np.pi, size=3)
    return local_unitary(theta, phi, lam)


def _normalized(m: ComplexMatrix) -> DensityMatrix:
    m = (m + m.conj().T) / 2
    return DensityMatrix(m / np.trace(m).real)


def _check_measure(measure: str) -> None:
    if measure not in ("haar", "bures"):
        raise ValueError(f"unknown random measure {measure!r}")


def _draw(rng: np.random.Generator, measure: RandomMeasure) -> DensityMatrix:
    g = ginibre(rng)
    if measure == "haar":
        return _normalized(g @ g.conj().T)
    a = IDENTITY_4 + haar_unitary(rng)
    return _normalized(a @ g @ g.conj().T @ a.conj().T)


def random_state(seed: RngSeed, measure: RandomMeasure, count: int) -> List[DensityMatrix]:
    """
    Random two-qubit states from the Hilbert–Schmidt ("haar") or Bures ensemble.

    State k is drawn from the k-th child of `SeedSequence(seed)`, so a corpus
    is reproducible and any prefix of it is independent of `count`.
    """

    if count < 1:
        raise OutOfRange("count must be at least 1")
    _check_measure(measure)

    states = [_draw(rng, measure) for rng in _stream(seed, count)]
    logger.debug("generated %d %s states from seed %d", count, measure, seed)
    return states


def random_state_at(seed: RngSeed, measure: RandomMeasure, index: int) -> DensityMatrix:
    """State `index` of the `random_state(seed, measure, ...)` corpus, drawn alone."""

    if index < 0:
        raise OutOfRange("index must not be negative")
    _check_measure(measure)
    _check_seed(seed)
    # the child SeedSequence(seed).spawn(n)[index] for any n > index
    child = np.random.SeedSequence(seed, spawn_key=(index,))
    return _draw(np.random.Generator(np.random.PCG64(child)), measure)


def random_tetrahedron_points(seed: RngSeed, count: int) -> List[BellDiagonalCoords]:
    """Uniform points of the Bell-diagonal tetrahedron (flat Dirichlet weights)."""

    points = []
    for rng in _stream(seed, count):
        points.append(coords_of_mixture(rng.dirichlet(np.ones(4))))
    return points
