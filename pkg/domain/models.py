from __future__ import annotations

from dataclasses import dataclass, field
from typing import Any, Dict, List, Literal, Optional, Tuple

import numpy as np
import numpy.typing as npt

from .errors import NotADistribution, NotAState, OutOfRange
from .linalg import PAULIS, ComplexMatrix, IDENTITY_2, as_matrix, hermitian_eigen, is_hermitian


STATE_TOLERANCE = 1e-9
DISTRIBUTION_TOLERANCE = 1e-12

Outcome = Literal["+", "-"]
RandomMeasure = Literal["haar", "bures"]

# Seeds feed numpy.random.SeedSequence; any unsigned 64-bit integer.
RngSeed = int


@dataclass(frozen=True, eq=False)
class DensityMatrix:
    """
    A validated qubit (dim 2) or two-qubit (dim 4) density matrix.

    Construction checks Hermiticity, unit trace and positivity, all within
    1e-9, and stores a read-only copy of the matrix.
    """

    matrix: ComplexMatrix

    def __post_init__(self) -> None:
        m = as_matrix(self.matrix).copy()
        if not is_hermitian(m, STATE_TOLERANCE):
            raise NotAState("density matrix is not Hermitian")
        trace = np.trace(m)
        if abs(trace - 1) > STATE_TOLERANCE:
            raise NotAState(f"density matrix has trace {trace.real:.12g}, expected 1")
        lowest = float(hermitian_eigen(m).eigenvalues[-1])
        if lowest < -STATE_TOLERANCE:
            raise NotAState(f"density matrix has negative eigenvalue {lowest:.3e}")
        m.setflags(write=False)
        object.__setattr__(self, "matrix", m)

    @property
    def dim(self) -> int:
        return self.matrix.shape[0]

    def purity(self) -> float:
        return float(np.real(np.trace(self.matrix @ self.matrix)))

    def eigenvalues(self) -> npt.NDArray[np.float64]:
        return hermitian_eigen(self.matrix).eigenvalues

    def allclose(self, other: "DensityMatrix", atol: float = 1e-10) -> bool:
        return self.dim == other.dim and bool(np.allclose(self.matrix, other.matrix, atol=atol))


@dataclass(frozen=True)
class BellDiagonalCoords:
    """Diagonal (c1, c2, c3) of the correlation matrix of a Bell-diagonal state."""

    c1: float
    c2: float
    c3: float

    def __post_init__(self) -> None:
        for name in ("c1", "c2", "c3"):
            value = getattr(self, name)
            if not -1 - STATE_TOLERANCE <= value <= 1 + STATE_TOLERANCE:
                raise OutOfRange(f"{name}={value} outside [-1, 1]")

    def as_array(self) -> npt.NDArray[np.float64]:
        return np.array([self.c1, self.c2, self.c3], dtype=float)

    def l1_norm(self) -> float:
        return abs(self.c1) + abs(self.c2) + abs(self.c3)

    def in_octahedron(self, tol: float = STATE_TOLERANCE) -> bool:
        """Separable region |c1|+|c2|+|c3| ≤ 1."""

        return self.l1_norm() <= 1 + tol


@dataclass(frozen=True)
class BlochRepresentation:
    """
    ρ = ¼(𝟙 + r·σ⊗𝟙 + 𝟙⊗s·τ + Σ T_ij σ_i⊗τ_j).

    `r` and `s` are the local Bloch vectors of Alice and Bob; `T` is the
    3×3 real correlation matrix T_ij = tr(ρ σ_i⊗τ_j).
    """

    r: npt.NDArray[np.float64]
    s: npt.NDArray[np.float64]
    T: npt.NDArray[np.float64]


@dataclass(frozen=True)
class ProjectiveBasis:
    """
    Qubit projective measurement given by the Bloch direction of its "+"
    projector: n = (sinθ cosφ, sinθ sinφ, cosθ).
    """

    theta: float
    phi: float

    @classmethod
    def from_vector(cls, v: npt.ArrayLike) -> "ProjectiveBasis":
        x, y, z = np.asarray(v, dtype=float) / np.linalg.norm(v)
        return cls(theta=float(np.arccos(np.clip(z, -1.0, 1.0))), phi=float(np.arctan2(y, x)))

    @property
    def direction(self) -> npt.NDArray[np.float64]:
        return np.array(
            [
                np.sin(self.theta) * np.cos(self.phi),
                np.sin(self.theta) * np.sin(self.phi),
                np.cos(self.theta),
            ]
        )

    def projector(self, outcome: Outcome) -> ComplexMatrix:
        sign = 1.0 if outcome == "+" else -1.0
        n_sigma = sum(c * p for c, p in zip(self.direction, PAULIS))
        return (IDENTITY_2 + sign * n_sigma) / 2

    def projectors(self) -> Tuple[ComplexMatrix, ComplexMatrix]:
        return self.projector("+"), self.projector("-")

    def antipode(self) -> "ProjectiveBasis":
        """Same measurement with the outcome labels swapped."""

        return ProjectiveBasis(theta=float(np.pi - self.theta), phi=float(self.phi + np.pi))


SIGMA_X_BASIS = ProjectiveBasis(theta=float(np.pi / 2), phi=0.0)
SIGMA_Y_BASIS = ProjectiveBasis(theta=float(np.pi / 2), phi=float(np.pi / 2))
SIGMA_Z_BASIS = ProjectiveBasis(theta=0.0, phi=0.0)


@dataclass(frozen=True, eq=False)
class JointDistribution:
    """
    Outcome table p[a, b] with index 0 for "+" and 1 for "−".
    """

    p: npt.NDArray[np.float64]

    def __post_init__(self) -> None:
        table = np.asarray(self.p, dtype=float)
        if table.shape != (2, 2):
            raise NotADistribution(f"joint table must be 2×2, got {table.shape}")
        if np.any(table < -DISTRIBUTION_TOLERANCE):
            raise NotADistribution("joint table has negative entries")
        if abs(table.sum() - 1) > DISTRIBUTION_TOLERANCE:
            raise NotADistribution(f"joint table sums to {table.sum():.15g}")
        table = np.clip(table, 0.0, None)
        table.setflags(write=False)
        object.__setattr__(self, "p", table)

    @property
    def alice_marginal(self) -> npt.NDArray[np.float64]:
        return self.p.sum(axis=1)

    @property
    def bob_marginal(self) -> npt.NDArray[np.float64]:
        return self.p.sum(axis=0)


@dataclass(frozen=True)
class SphereGrid:
    """Deterministic point set on the unit sphere, in polar coordinates."""

    theta: npt.NDArray[np.float64]
    phi: npt.NDArray[np.float64]

    @property
    def resolution(self) -> int:
        return int(self.theta.shape[0])

    def vectors(self) -> npt.NDArray[np.float64]:
        return spherical_to_cartesian(self.theta, self.phi)


def spherical_to_cartesian(theta: npt.ArrayLike, phi: npt.ArrayLike) -> npt.NDArray[np.float64]:
    """Unit vectors for broadcastable (θ, φ) arrays; the last axis holds x, y, z."""

    theta = np.asarray(theta, dtype=float)
    phi = np.asarray(phi, dtype=float)
    sin_t = np.sin(theta)
    return np.stack(np.broadcast_arrays(sin_t * np.cos(phi), sin_t * np.sin(phi), np.cos(theta)), axis=-1)


@dataclass(frozen=True)
class OptimizerConfig:
    """Knobs of the grid + pattern-search optimizer."""

    coarse_resolution: int = 400
    refine_shrink: float = 0.5
    refine_initial_step: float = 0.2
    value_tolerance: float = 1e-7
    max_refine_iterations: int = 60
    step_tolerance: float = 1e-6

    def __post_init__(self) -> None:
        if self.coarse_resolution < 1:
            raise OutOfRange("coarse_resolution must be positive")
        if not 0 < self.refine_shrink < 1:
            raise OutOfRange("refine_shrink must lie in (0, 1)")
        if self.max_refine_iterations < 1:
            raise OutOfRange("max_refine_iterations must be positive")
        for name in ("refine_initial_step", "value_tolerance", "step_tolerance"):
            if getattr(self, name) <= 0:
                raise OutOfRange(f"{name} must be positive")
        if self.step_tolerance >= self.refine_initial_step:
            raise OutOfRange("step_tolerance must be smaller than refine_initial_step")
        if self.value_tolerance >= self.refine_initial_step:
            raise OutOfRange("value_tolerance must be smaller than refine_initial_step")


@dataclass(frozen=True)
class OptimizerDiagnostics:
    coarse_evaluations: int = 0
    refine_iterations: int = 0
    final_step: float = 0.0

    def merged(self, other: "OptimizerDiagnostics") -> "OptimizerDiagnostics":
        return OptimizerDiagnostics(
            coarse_evaluations=self.coarse_evaluations + other.coarse_evaluations,
            refine_iterations=self.refine_iterations + other.refine_iterations,
            final_step=max(self.final_step, other.final_step),
        )


@dataclass(frozen=True)
class SphereOptimum:
    """Result of a single-sphere maximization."""

    value: float
    theta: float
    phi: float
    diagnostics: OptimizerDiagnostics = field(default_factory=OptimizerDiagnostics)

    @property
    def basis(self) -> ProjectiveBasis:
        return ProjectiveBasis(self.theta, self.phi)


@dataclass(frozen=True)
class SaddlePoint:
    """Result of the min-over-Alice / max-over-Bob search."""

    value: float
    alice: ProjectiveBasis
    bob: ProjectiveBasis
    diagnostics: OptimizerDiagnostics = field(default_factory=OptimizerDiagnostics)


@dataclass(frozen=True)
class MeasureReport:
    """All correlation measures of one two-qubit state, in bits."""

    concurrence: float
    eof: float
    discord: float
    ea: float
    quantum_mutual_information: float
    ea_saddle: Tuple[ProjectiveBasis, ProjectiveBasis]
    discord_argmax: ProjectiveBasis
    diagnostics: Dict[str, OptimizerDiagnostics] = field(default_factory=dict)


ExperimentName = Literal[
    "measure",
    "pure-upper-bound",
    "pure-noise-sweep",
    "bell-slices",
    "bell-face-plane",
    "bell-lines",
    "random-scatter",
    "hierarchy-audit",
]


@dataclass(frozen=True)
class ExperimentSpec:
    """What to run, with which parameters, and where to write it."""

    name: ExperimentName
    parameters: Dict[str, Any]
    output: str
    seed: Optional[int] = None


@dataclass(frozen=True)
class ResultRow:
    """One evaluated state: its family label, coordinates and measures."""

    family: str
    param_1: float
    param_2: float
    coords: Tuple[float, float, float]
    report: MeasureReport

    @property
    def refine_iterations(self) -> int:
        return sum(d.refine_iterations for d in self.report.diagnostics.values())


@dataclass
class AuditViolation:
    """A single failed check in a hierarchy or invariance audit."""

    check: str
    family: str
    index: int
    detail: str


@dataclass
class AuditSummary:
    checked_states: int = 0
    violations: List[AuditViolation] = field(default_factory=list)

    @property
    def success(self) -> bool:
        return not self.violations


SeriesStyle = Literal["line", "points", "heat"]


@dataclass(frozen=True)
class Series:
    """
    One labelled data series of a chart. `values` colours the points of a
    "heat" series and is empty otherwise.
    """

    label: str
    x: Tuple[float, ...]
    y: Tuple[float, ...]
    style: SeriesStyle = "line"
    values: Tuple[float, ...] = ()

    def __post_init__(self) -> None:
        if len(self.x) != len(self.y):
            raise ValueError(f"series {self.label!r}: {len(self.x)} x values, {len(self.y)} y values")
        if self.style == "heat" and len(self.values) != len(self.x):
            raise ValueError(f"heat series {self.label!r} needs one value per point")


@dataclass(frozen=True)
class Chart:
    title: str
    x_label: str
    y_label: str
    series: Tuple[Series, ...]
