"""
Saddle-point search over (Alice sphere) × (Bob sphere).

Both levels use the same scheme: evaluate the objective on a Fibonacci
lattice, keep the best point (lowest index on ties), then polish it with a
compass search in (θ, φ) whose step is shrunk after every unsuccessful
poll. The inner maximization is a deterministic subroutine of the outer
minimization: every outer poll point gets a fully converged inner solve.

Objectives are vectorized over broadcastable arrays of angles.
"""

from __future__ import annotations

import logging
from typing import Callable, Optional, Tuple

import numpy as np
import numpy.typing as npt
from scipy.optimize import minimize

from domain.errors import OptimizerDidNotConverge, OutOfRange
from domain.models import (
    OptimizerConfig,
    OptimizerDiagnostics,
    ProjectiveBasis,
    SaddlePoint,
    SphereGrid,
    SphereOptimum,
)


logger = logging.getLogger(__name__)

FloatArray = npt.NDArray[np.float64]
IntArray = npt.NDArray[np.int64]

# f(theta, phi) -> value
SphereObjective = Callable[[FloatArray, FloatArray], FloatArray]
# f(alice_theta, alice_phi, bob_theta, bob_phi) -> value
PairObjective = Callable[[FloatArray, FloatArray, FloatArray, FloatArray], FloatArray]
# evaluate(rows, theta[m, k], phi[m, k]) -> values[m, k]; row i is the i-th problem of a batch
_BatchEvaluator = Callable[[IntArray, FloatArray, FloatArray], FloatArray]

GOLDEN_ANGLE = np.pi * (3.0 - np.sqrt(5.0))
ORACLE_MIN_RESOLUTION = 16
# improving moves allowed per permitted step reduction
MOVES_PER_REFINEMENT = 50

# cardinal moves first so that ties favour them
_POLL_THETA = np.array([1.0, -1.0, 0.0, 0.0, 1.0, 1.0, -1.0, -1.0])
_POLL_PHI = np.array([0.0, 0.0, 1.0, -1.0, 1.0, -1.0, 1.0, -1.0])


def fibonacci_sphere(resolution: int) -> SphereGrid:
    """Fibonacci lattice with `resolution` points, z running from the north pole down."""

    if resolution < 1:
        raise OutOfRange("sphere resolution must be positive")
    i = np.arange(resolution, dtype=float)
    z = 1.0 - (2.0 * i + 1.0) / resolution
    return SphereGrid(theta=np.arccos(z), phi=np.mod(i * GOLDEN_ANGLE, 2 * np.pi))


def normalize_angles(theta: FloatArray, phi: FloatArray) -> Tuple[FloatArray, FloatArray]:
    """Map arbitrary (θ, φ) to θ ∈ [0, π], φ ∈ [0, 2π) describing the same point."""

    theta = np.mod(theta, 2 * np.pi)
    flipped = theta > np.pi
    theta = np.where(flipped, 2 * np.pi - theta, theta)
    phi = np.where(flipped, phi + np.pi, phi)
    return theta, np.mod(phi, 2 * np.pi)


def _pattern_search(
    evaluate: _BatchEvaluator,
    theta: FloatArray,
    phi: FloatArray,
    best: FloatArray,
    config: OptimizerConfig,
    sense: float,
) -> Tuple[FloatArray, FloatArray, FloatArray, OptimizerDiagnostics]:
    """
    Batched compass search; `sense` is +1 to maximize and -1 to minimize.

    Every problem keeps its own step and its own budget. A move is taken
    only when it gains more than `config.value_tolerance`; otherwise the step
    shrinks. A problem is finished once its step drops below
    `config.step_tolerance`. It fails when it needs more than
    `config.max_refine_iterations` step reductions, or more than
    MOVES_PER_REFINEMENT times that many moves.
    """

    theta, phi, best = theta.copy(), phi.copy(), best.copy()
    step = np.full(theta.shape, config.refine_initial_step)
    last_step = step.copy()
    shrinks = np.zeros(theta.shape, dtype=int)
    moves = np.zeros(theta.shape, dtype=int)
    move_budget = config.max_refine_iterations * MOVES_PER_REFINEMENT
    active = np.ones(theta.shape, dtype=bool)
    polls = 0

    while active.any():
        polls += 1
        rows = np.flatnonzero(active)
        h = step[rows, None]
        cand_theta, cand_phi = normalize_angles(
            theta[rows, None] + h * _POLL_THETA,
            phi[rows, None] + h * _POLL_PHI,
        )
        values = evaluate(rows, cand_theta, cand_phi)
        pick = np.argmax(sense * values, axis=1)
        chosen = values[np.arange(rows.size), pick]
        improved = sense * (chosen - best[rows]) > config.value_tolerance

        moved = rows[improved]
        theta[moved] = cand_theta[improved, pick[improved]]
        phi[moved] = cand_phi[improved, pick[improved]]
        best[moved] = chosen[improved]
        moves[moved] += 1

        stalled = rows[~improved]
        last_step[stalled] = step[stalled]
        step[stalled] *= config.refine_shrink
        shrinks[stalled] += 1
        active = step >= config.step_tolerance

        exhausted = active & ((shrinks >= config.max_refine_iterations) | (moves >= move_budget))
        if exhausted.any():
            worst = int(np.flatnonzero(exhausted)[np.argmax(step[exhausted])])
            raise OptimizerDidNotConverge(
                f"pattern search step {step[worst]:.3e} still above {config.step_tolerance:g} "
                f"after {shrinks[worst]} step reductions and {moves[worst]} moves",
                iterations=int(shrinks[worst]),
                final_step=float(step[worst]),
            )

    diagnostics = OptimizerDiagnostics(refine_iterations=polls, final_step=float(last_step.max()))
    return theta, phi, best, diagnostics


def maximize_on_sphere(f: SphereObjective, config: Optional[OptimizerConfig] = None) -> SphereOptimum:
    """Maximize `f` over the unit sphere: Fibonacci seeding plus compass refinement."""

    config = config or OptimizerConfig()
    grid = fibonacci_sphere(config.coarse_resolution)
    values = np.asarray(f(grid.theta, grid.phi), dtype=float)
    k = int(np.argmax(values))

    def evaluate(rows: IntArray, theta: FloatArray, phi: FloatArray) -> FloatArray:
        return np.asarray(f(theta, phi), dtype=float)

    theta, phi, best, diagnostics = _pattern_search(
        evaluate,
        grid.theta[[k]],
        grid.phi[[k]],
        values[[k]],
        config,
        sense=1.0,
    )
    diagnostics = OptimizerDiagnostics(
        coarse_evaluations=grid.resolution,
        refine_iterations=diagnostics.refine_iterations,
        final_step=diagnostics.final_step,
    )
    logger.debug("sphere maximum %.12g after %d polls", best[0], diagnostics.refine_iterations)
    return SphereOptimum(float(best[0]), float(theta[0]), float(phi[0]), diagnostics)


class _InnerMaximizer:
    """Solves max_bob f(alice, bob) for a batch of Alice directions at once."""

    def __init__(self, f: PairObjective, config: OptimizerConfig) -> None:
        self._f = f
        self._config = config
        self._grid = fibonacci_sphere(config.coarse_resolution)

    def solve(
        self, alice_theta: FloatArray, alice_phi: FloatArray
    ) -> Tuple[FloatArray, FloatArray, FloatArray, OptimizerDiagnostics]:
        at, ap = alice_theta[:, None], alice_phi[:, None]
        values = np.asarray(
            self._f(at, ap, self._grid.theta[None, :], self._grid.phi[None, :]), dtype=float
        )
        k = np.argmax(values, axis=1)
        seed_values = values[np.arange(k.size), k]

        def evaluate(rows: IntArray, theta: FloatArray, phi: FloatArray) -> FloatArray:
            return np.asarray(self._f(at[rows], ap[rows], theta, phi), dtype=float)

        theta, phi, best, diagnostics = _pattern_search(
            evaluate,
            self._grid.theta[k],
            self._grid.phi[k],
            seed_values,
            self._config,
            sense=1.0,
        )
        diagnostics = OptimizerDiagnostics(
            coarse_evaluations=values.size,
            refine_iterations=diagnostics.refine_iterations,
            final_step=diagnostics.final_step,
        )
        return best, theta, phi, diagnostics


def minimax_on_spheres(f: PairObjective, config: Optional[OptimizerConfig] = None) -> SaddlePoint:
    """
    min over Alice of max over Bob of `f`.

    g(alice) = max_bob f(alice, bob) is computed to full inner tolerance at
    every Alice grid point and at every outer compass poll point.
    """

    config = config or OptimizerConfig()
    inner = _InnerMaximizer(f, config)
    grid = fibonacci_sphere(config.coarse_resolution)

    g, _, _, inner_diag = inner.solve(grid.theta, grid.phi)
    k = int(np.argmin(g))
    total = inner_diag

    def evaluate(rows: IntArray, theta: FloatArray, phi: FloatArray) -> FloatArray:
        nonlocal total
        values, _, _, diag = inner.solve(theta.ravel(), phi.ravel())
        total = total.merged(diag)
        return values.reshape(theta.shape)

    alice_theta, alice_phi, best, outer_diag = _pattern_search(
        evaluate,
        grid.theta[[k]],
        grid.phi[[k]],
        g[[k]],
        config,
        sense=-1.0,
    )
    # the inner solve is deterministic per row, so this reproduces the winning poll point
    _, b_theta, b_phi, _ = inner.solve(alice_theta, alice_phi)

    diagnostics = OptimizerDiagnostics(
        coarse_evaluations=total.coarse_evaluations,
        refine_iterations=outer_diag.refine_iterations + total.refine_iterations,
        final_step=max(outer_diag.final_step, total.final_step),
    )
    logger.debug(
        "saddle value %.12g (outer polls %d, inner polls %d)",
        best[0],
        outer_diag.refine_iterations,
        total.refine_iterations,
    )
    return SaddlePoint(
        value=float(best[0]),
        alice=ProjectiveBasis(float(alice_theta[0]), float(alice_phi[0])),
        bob=ProjectiveBasis(float(b_theta[0]), float(b_phi[0])),
        diagnostics=diagnostics,
    )


def _nelder_mead(fun: Callable[[FloatArray], float], start: Tuple[float, float]) -> Tuple[float, float, float]:
    result = minimize(
        fun,
        np.asarray(start, dtype=float),
        method="Nelder-Mead",
        options={"xatol": 1e-8, "fatol": 1e-12, "maxiter": 2000},
    )
    theta, phi = normalize_angles(np.asarray(result.x[0]), np.asarray(result.x[1]))
    return float(result.fun), float(theta), float(phi)


def brute_force_maximize(f: SphereObjective, resolution: int, refine: bool = False) -> SphereOptimum:
    """
    Exhaustive scan of a Fibonacci lattice; with `refine`, the best point is
    polished with Nelder–Mead (independent of the compass search).
    """

    if resolution < ORACLE_MIN_RESOLUTION:
        raise OutOfRange(f"oracle resolution must be at least {ORACLE_MIN_RESOLUTION}")
    grid = fibonacci_sphere(resolution)
    values = np.asarray(f(grid.theta, grid.phi), dtype=float)
    k = int(np.argmax(values))
    best = SphereOptimum(float(values[k]), float(grid.theta[k]), float(grid.phi[k]),
                         OptimizerDiagnostics(coarse_evaluations=resolution))
    if not refine:
        return best

    neg, theta, phi = _nelder_mead(
        lambda x: -float(f(np.asarray(x[0]), np.asarray(x[1]))), (best.theta, best.phi)
    )
    if -neg > best.value:
        return SphereOptimum(-neg, theta, phi, best.diagnostics)
    return best


def brute_force_minimax(
    f: PairObjective,
    resolution: int,
    refine: bool = False,
    candidates: int = 3,
) -> SaddlePoint:
    """
    Oracle for `minimax_on_spheres`: a full resolution × resolution scan.

    With `refine`, the `candidates` lowest Alice grid points each seed a
    Nelder–Mead minimization of g(alice), where g itself is a grid scan over
    Bob followed by a Nelder–Mead maximization.
    """

    if resolution < ORACLE_MIN_RESOLUTION:
        raise OutOfRange(f"oracle resolution must be at least {ORACLE_MIN_RESOLUTION}")
    grid = fibonacci_sphere(resolution)
    values = np.asarray(
        f(grid.theta[:, None], grid.phi[:, None], grid.theta[None, :], grid.phi[None, :]),
        dtype=float,
    )
    inner = values.max(axis=1)
    i = int(np.argmin(inner))
    j = int(np.argmax(values[i]))
    diagnostics = OptimizerDiagnostics(coarse_evaluations=values.size)
    scanned = SaddlePoint(
        value=float(inner[i]),
        alice=ProjectiveBasis(float(grid.theta[i]), float(grid.phi[i])),
        bob=ProjectiveBasis(float(grid.theta[j]), float(grid.phi[j])),
        diagnostics=diagnostics,
    )
    if not refine:
        return scanned

    def inner_max(a_theta: float, a_phi: float) -> SphereOptimum:
        return brute_force_maximize(
            lambda t, p: f(np.asarray(a_theta), np.asarray(a_phi), t, p), resolution, refine=True
        )

    best: Optional[SaddlePoint] = None
    for i in np.argsort(inner, kind="stable")[:candidates]:
        value, a_theta, a_phi = _nelder_mead(
            lambda x: inner_max(float(x[0]), float(x[1])).value,
            (float(grid.theta[i]), float(grid.phi[i])),
        )
        bob = inner_max(a_theta, a_phi)
        if best is None or bob.value < best.value:
            best = SaddlePoint(bob.value, ProjectiveBasis(a_theta, a_phi), bob.basis, diagnostics)
    assert best is not None
    return best
