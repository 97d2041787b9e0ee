"""
Experiment services behind the `qaccord` commands.

Each service validates its parameters, evaluates a deterministic list of
states (optionally on a process pool), writes its tables and manifest to a
`ResultRepository`, and renders figures from the written tables. Parameter
problems come back as an unsuccessful `ExperimentResult`; numerical errors
raise.
"""

from __future__ import annotations

import logging
import platform
from concurrent.futures import ProcessPoolExecutor
from dataclasses import asdict, dataclass, field
from importlib.metadata import PackageNotFoundError, version
from itertools import combinations, repeat
from typing import Any, Callable, Dict, List, Optional, Sequence, Tuple, TypeVar

import numpy as np

from domain.linalg import apply_local_unitaries, matrix_sqrt_psd
from domain.models import (
    AuditSummary,
    AuditViolation,
    BellDiagonalCoords,
    DensityMatrix,
    ExperimentName,
    ExperimentSpec,
    OptimizerConfig,
    RandomMeasure,
    ResultRow,
)
from domain.repositories import ResultRepository

from application import figures, measures, states
from application.measurement import schmidt_entanglement, sigma_x_strategy_information


logger = logging.getLogger(__name__)

T = TypeVar("T")

MEASURE_COLUMNS = (
    "family",
    "param_1",
    "param_2",
    "c1",
    "c2",
    "c3",
    "concurrence",
    "eof",
    "discord",
    "ea",
    "qmi",
    "ea_alice_theta",
    "ea_alice_phi",
    "ea_bob_theta",
    "ea_bob_phi",
    "discord_theta",
    "discord_phi",
    "refine_iterations",
)
PURE_UPPER_BOUND_COLUMNS = ("theta", "eq9_value", "eq11_value", "ea_numeric")
AUDIT_COLUMNS = ("check", "family", "index", "detail")

DEFAULT_GRID = 50
DEFAULT_SCATTER_COUNT = 20_000
DEFAULT_AUDIT_COUNT = 500
ENVELOPE_GRID = 25
ENVELOPE_MARGIN = 2e-4
ZERO_TOLERANCE = 1e-6
IMPLIED_TOLERANCE = 1e-5
RANK_FOUR_FACE_POINTS = (0.0, 0.25, 0.5, 0.75, 1.0)
VERSIONED_PACKAGES = ("qaccord", "numpy", "scipy", "click")


@dataclass(frozen=True)
class RunOptions:
    """How states are evaluated; never changes which states are evaluated."""

    config: OptimizerConfig = field(default_factory=OptimizerConfig)
    oracle: bool = False
    workers: int = 1


@dataclass
class ExperimentResult:
    """Outcome of an experiment service."""

    success: bool
    error_message: Optional[str] = None
    rows: List[ResultRow] = field(default_factory=list)
    summary: Dict[str, Any] = field(default_factory=dict)
    violations: List[AuditViolation] = field(default_factory=list)
    figures: List[str] = field(default_factory=list)


@dataclass(frozen=True)
class StateTask:
    """One state to evaluate, with the labels it is reported under."""

    family: str
    param_1: float
    param_2: float
    rho: DensityMatrix


BellLine = Tuple[BellDiagonalCoords, BellDiagonalCoords]


# ---------------------------------------------------------------------------
# Row evaluation
# ---------------------------------------------------------------------------


def evaluate_task(task: StateTask, config: OptimizerConfig, oracle: bool = False) -> ResultRow:
    report = measures.evaluate(task.rho, config, oracle)
    coords = states.bell_coordinates(task.rho)
    return ResultRow(
        family=task.family,
        param_1=task.param_1,
        param_2=task.param_2,
        coords=(coords.c1, coords.c2, coords.c3),
        report=report,
    )


def _accord_value(rho: DensityMatrix, config: OptimizerConfig, oracle: bool) -> float:
    value, _, _ = measures.entropic_accord(rho, config, oracle)
    return value


def _parallel_map(func: Callable[..., T], items: Sequence[Any], options: RunOptions) -> List[T]:
    """`func(item, config, oracle)` for every item, results in input order."""

    if options.workers <= 1 or len(items) < 2:
        return [func(item, options.config, options.oracle) for item in items]
    chunksize = max(1, len(items) // (4 * options.workers))
    with ProcessPoolExecutor(max_workers=options.workers) as pool:
        return list(
            pool.map(func, items, repeat(options.config), repeat(options.oracle), chunksize=chunksize)
        )


def evaluate_tasks(tasks: Sequence[StateTask], options: RunOptions) -> List[ResultRow]:
    logger.info("evaluating %d states with %d worker(s)", len(tasks), options.workers)
    return _parallel_map(evaluate_task, tasks, options)


def row_cells(row: ResultRow) -> List[Any]:
    r = row.report
    alice, bob = r.ea_saddle
    return [
        row.family,
        row.param_1,
        row.param_2,
        *row.coords,
        r.concurrence,
        r.eof,
        r.discord,
        r.ea,
        r.quantum_mutual_information,
        alice.theta,
        alice.phi,
        bob.theta,
        bob.phi,
        r.discord_argmax.theta,
        r.discord_argmax.phi,
        row.refine_iterations,
    ]


def _write_measures(repo: ResultRepository, name: str, rows: Sequence[ResultRow]) -> None:
    repo.write_table(name, MEASURE_COLUMNS, [row_cells(row) for row in rows])


def _versions() -> Dict[str, str]:
    found = {"python": platform.python_version()}
    for package in VERSIONED_PACKAGES:
        try:
            found[package] = version(package)
        except PackageNotFoundError:
            found[package] = "unknown"
    return found


def build_manifest(spec: ExperimentSpec, options: RunOptions) -> Dict[str, Any]:
    """Everything needed to rerun `spec`; contains no timestamps."""

    return {
        "experiment": spec.name,
        "parameters": spec.parameters,
        "seed": spec.seed,
        "output": spec.output,
        "optimizer": asdict(options.config),
        "oracle": options.oracle,
        "versions": _versions(),
    }


def _finish(
    repo: ResultRepository,
    spec: ExperimentSpec,
    options: RunOptions,
    result: ExperimentResult,
) -> ExperimentResult:
    repo.write_manifest(build_manifest(spec, options))
    result.figures = figures.write_figures(repo, spec.name)
    logger.info("%s finished: %s", spec.name, result.summary or "ok")
    return result


def _spec(repo: ResultRepository, name: ExperimentName, parameters: Dict[str, Any], seed: Optional[int] = None) -> ExperimentSpec:
    return ExperimentSpec(name=name, parameters=parameters, output=repo.location, seed=seed)


# ---------------------------------------------------------------------------
# Validation helpers
# ---------------------------------------------------------------------------


def _validate_grid(name: str, value: int, minimum: int = 2) -> Optional[str]:
    if value < minimum:
        return f"{name} must be at least {minimum}, got {value}."
    return None


def _validate_count(value: int) -> Optional[str]:
    if value < 1:
        return f"count must be at least 1, got {value}."
    return None


def _validate_seed(seed: int) -> Optional[str]:
    if not 0 <= seed < 2**64:
        return f"seed must be an unsigned 64-bit integer, got {seed}."
    return None


def _validate_measure(measure: str) -> Optional[str]:
    if measure not in ("haar", "bures"):
        return f"measure must be 'haar' or 'bures', got {measure!r}."
    return None


def _first_error(*errors: Optional[str]) -> Optional[str]:
    return next((e for e in errors if e is not None), None)


def _derived_seeds(seed: int, count: int) -> List[int]:
    return [int(s) for s in np.random.SeedSequence(seed).generate_state(count, dtype=np.uint64)]


# ---------------------------------------------------------------------------
# Services
# ---------------------------------------------------------------------------


def run_measure(
    rho: DensityMatrix,
    options: RunOptions = RunOptions(),
    repo: Optional[ResultRepository] = None,
    family: str = "matrix",
    parameters: Optional[Dict[str, str]] = None,
    source: Optional[str] = None,
) -> ExperimentResult:
    """
    Evaluate every measure of one state; with `repo`, also write it as a table.

    `source` is the tagged description of the state, kept in the manifest.
    """

    row = evaluate_task(StateTask(family, 0.0, 0.0, rho), options.config, options.oracle)
    result = ExperimentResult(success=True, rows=[row])
    if repo is not None:
        _write_measures(repo, "measures", [row])
        spec = _spec(repo, "measure", {"family": family, "state": dict(parameters or {}), "source": source})
        return _finish(repo, spec, options, result)
    return result


def run_pure_upper_bound(
    repo: ResultRepository,
    grid: int = DEFAULT_GRID,
    options: RunOptions = RunOptions(),
) -> ExperimentResult:
    """
    Both analytic pure-state curves against the numerically optimized EA on
    a θ grid over [0, π/2].
    """

    error = _validate_grid("grid", grid)
    if error:
        return ExperimentResult(success=False, error_message=error)

    theta = np.linspace(0.0, np.pi / 2, grid)
    ea = _parallel_map(_accord_value, [states.pure_schmidt(t) for t in theta], options)
    eq9 = schmidt_entanglement(theta)
    eq11 = sigma_x_strategy_information(theta)
    repo.write_table(
        "pure_upper_bound",
        PURE_UPPER_BOUND_COLUMNS,
        [[t, a, b, e] for t, a, b, e in zip(theta, eq9, eq11, ea)],
    )

    ea = np.asarray(ea)
    summary = {
        "max_ea_above_sigma_x": float(np.max(ea - eq11)),
        "max_ea_above_entanglement": float(np.max(ea - eq9)),
    }
    spec = _spec(repo, "pure-upper-bound", {"grid": grid})
    return _finish(repo, spec, options, ExperimentResult(success=True, summary=summary))


def pure_noise_tasks(theta_grid: int, e_grid: int) -> List[StateTask]:
    tasks = []
    for theta in np.linspace(0.0, np.pi / 4, theta_grid):
        pure = states.pure_schmidt(theta)
        for e in np.linspace(0.0, 1.0, e_grid):
            tasks.append(StateTask("pure-noise", float(theta), float(e), states.with_white_noise(pure, e)))
    return tasks


def run_pure_noise_sweep(
    repo: ResultRepository,
    theta_grid: int = DEFAULT_GRID,
    e_grid: int = DEFAULT_GRID,
    options: RunOptions = RunOptions(),
) -> ExperimentResult:
    """All measures of (1−e)|Ψ(θ)⟩⟨Ψ(θ)| + e𝟙/4 for θ ∈ [0, π/4], e ∈ [0, 1]."""

    error = _first_error(_validate_grid("theta grid", theta_grid), _validate_grid("e grid", e_grid))
    if error:
        return ExperimentResult(success=False, error_message=error)

    rows = evaluate_tasks(pure_noise_tasks(theta_grid, e_grid), options)
    _write_measures(repo, "measures", rows)
    spec = _spec(repo, "pure-noise-sweep", {"theta_grid": theta_grid, "e_grid": e_grid})
    return _finish(repo, spec, options, ExperimentResult(success=True, rows=rows))


def bell_slice_tasks(grid: int) -> List[StateTask]:
    """
    Werner line, white-noise lines of the other Bell states, all six edges,
    the φ+ median and a midline of the face opposite ψ−, and rank-4 lines
    from ψ− to points of that face.
    """

    steps = np.linspace(0.0, 1.0, grid)
    tasks = [StateTask("werner", float(e), 0.0, states.werner(e)) for e in steps]
    for name in ("phi+", "phi-", "psi+"):
        projector = states.bell_projector(name)
        tasks.extend(
            StateTask(f"noisy-{name}", float(e), 0.0, states.with_white_noise(projector, e)) for e in steps
        )
    for a, b in combinations(states.BELL_ORDER, 2):
        tasks.extend(StateTask(f"edge-{a}-{b}", float(p), 0.0, states.edge_state(a, b, p)) for p in steps)
    tasks.extend(
        StateTask("face-median", float(t), 0.0, states.face_state(1 - t, t / 2, t / 2)) for t in steps
    )
    tasks.extend(
        StateTask("face-midline", float(t), 0.0, states.face_state(0.5, (1 - t) / 2, t / 2)) for t in steps
    )
    for u in RANK_FOUR_FACE_POINTS:
        face = (1 - u, u / 2, u / 2)
        tasks.extend(
            StateTask("vertex-to-face", u, float(t), states.vertex_to_face_state(face, t)) for t in steps
        )
    return tasks


def face_plane_tasks(grid: int) -> List[StateTask]:
    """
    Barycentric raster of the triangle A=(φ−+ψ+)/2, φ+, ψ−; param_1 is the
    φ+ weight and param_2 the ψ− weight.
    """

    n = grid - 1
    tasks = []
    for i in range(n + 1):
        for j in range(n + 1 - i):
            b, c = i / n, j / n
            a = max(1.0 - b - c, 0.0)
            tasks.append(StateTask("face-plane", b, c, states.bell_mixture(b, a / 2, a / 2, c)))
    return tasks


_SINGLET = BellDiagonalCoords(*states.BELL_VERTICES["psi-"])
_FACE_A = states.coords_of_mixture((0.0, 0.5, 0.5, 0.0))
_PHI_PLUS = BellDiagonalCoords(*states.BELL_VERTICES["phi+"])

PRESET_LINES: Dict[str, BellLine] = {
    "line-psi-_to_A": (_SINGLET, _FACE_A),
    "line-psi-_to_phi+": (_SINGLET, _PHI_PLUS),
}


def line_tasks(lines: Dict[str, BellLine], grid: int) -> List[StateTask]:
    """States along straight transects of the tetrahedron; param_1 is the distance from the start."""

    tasks = []
    for family, (start, end) in lines.items():
        a, b = start.as_array(), end.as_array()
        for t in np.linspace(0.0, 1.0, grid):
            point = BellDiagonalCoords(*((1 - t) * a + t * b))
            distance = float(np.linalg.norm(point.as_array() - a))
            tasks.append(StateTask(family, distance, float(t), states.bell_diagonal(point)))
    return tasks


def _validate_lines(lines: Sequence[BellLine]) -> Optional[str]:
    for k, (start, end) in enumerate(lines):
        for label, point in (("start", start), ("end", end)):
            if not states.in_tetrahedron(point):
                return f"line {k + 1}: {label} point {tuple(point.as_array())} lies outside the tetrahedron."
    return None


def run_bell(
    repo: ResultRepository,
    mode: str,
    grid: int = DEFAULT_GRID,
    lines: Sequence[BellLine] = (),
    options: RunOptions = RunOptions(),
) -> ExperimentResult:
    """
    Bell-diagonal experiments: `slices`, `face-plane` or `lines`.

    Extra `lines` (start, end coordinate pairs) are only used by `lines`.
    """

    if mode not in ("slices", "face-plane", "lines"):
        return ExperimentResult(success=False, error_message=f"unknown bell mode {mode!r}.")
    error = _first_error(_validate_grid("grid", grid), _validate_lines(lines))
    if error:
        return ExperimentResult(success=False, error_message=error)

    parameters: Dict[str, Any] = {"grid": grid}
    if mode == "slices":
        tasks = bell_slice_tasks(grid)
    elif mode == "face-plane":
        tasks = face_plane_tasks(grid)
    else:
        transects = dict(PRESET_LINES)
        for k, line in enumerate(lines, start=1):
            transects[f"line-{k}"] = line
        parameters["lines"] = [
            [start.as_array().tolist(), end.as_array().tolist()] for start, end in lines
        ]
        tasks = line_tasks(transects, grid)

    rows = evaluate_tasks(tasks, options)
    _write_measures(repo, "measures", rows)
    spec = _spec(repo, f"bell-{mode}", parameters)  # type: ignore[arg-type]
    return _finish(repo, spec, options, ExperimentResult(success=True, rows=rows))


def envelope_tasks(grid: int = ENVELOPE_GRID) -> List[StateTask]:
    """Boundary families overlaid on the random-state scatter plots."""

    steps = np.linspace(0.0, 1.0, grid)
    tasks = [StateTask("pure", float(t), 0.0, states.pure_schmidt(t)) for t in np.linspace(0.0, np.pi / 4, grid)]
    tasks.extend(StateTask("edge-phi+-psi-", float(p), 0.0, states.edge_state("phi+", "psi-", p)) for p in steps)
    tasks.extend(
        StateTask("face-median", float(t), 0.0, states.face_state(1 - t, t / 2, t / 2)) for t in steps
    )
    tasks.extend(StateTask("rank-two", float(p), 0.0, states.rank_two_product_mixture(p)) for p in steps)
    return tasks


def upper_envelope(
    envelope: Sequence[ResultRow], x: str, y: str, points: np.ndarray
) -> np.ndarray:
    """
    Highest value of the piecewise-linear envelope curves at each abscissa in
    `points`; −inf where no curve segment covers the abscissa.
    """

    best = np.full(points.shape, -np.inf)
    by_family: Dict[str, List[ResultRow]] = {}
    for row in envelope:
        by_family.setdefault(row.family, []).append(row)
    for rows in by_family.values():
        xs = np.array([getattr(r.report, x) for r in rows])
        ys = np.array([getattr(r.report, y) for r in rows])
        for x0, x1, y0, y1 in zip(xs[:-1], xs[1:], ys[:-1], ys[1:]):
            low, high = min(x0, x1), max(x0, x1)
            inside = (points >= low) & (points <= high)
            if high - low < 1e-15:
                value = np.full(points.shape, max(y0, y1))
            else:
                value = y0 + (points - x0) * (y1 - y0) / (x1 - x0)
            best = np.where(inside, np.maximum(best, value), best)
    return best


def hierarchy_violations(rows: Sequence[ResultRow], zero: float, implied: float) -> List[AuditViolation]:
    """
    Breaches of zero discord ⇒ zero EA and zero EA ⇒ zero entanglement.
    """

    found = []
    for row in rows:
        r = row.report
        index = int(row.param_1)
        if r.discord < zero and r.ea >= implied:
            found.append(
                AuditViolation("discord-zero-implies-ea-zero", row.family, index, f"discord={r.discord:.3e} ea={r.ea:.3e}")
            )
        if r.ea < zero and r.concurrence >= implied:
            found.append(
                AuditViolation(
                    "ea-zero-implies-entanglement-zero", row.family, index, f"ea={r.ea:.3e} concurrence={r.concurrence:.3e}"
                )
            )
    return found


def run_random_scatter(
    repo: ResultRepository,
    count: int = DEFAULT_SCATTER_COUNT,
    measure: RandomMeasure = "haar",
    seed: int = 0,
    options: RunOptions = RunOptions(),
) -> ExperimentResult:
    """
    Measures of `count` random states with the boundary families overlaid.
    Envelope and hierarchy breaches are counted and logged, never fatal.
    """

    error = _first_error(_validate_count(count), _validate_measure(measure), _validate_seed(seed))
    if error:
        return ExperimentResult(success=False, error_message=error)

    tasks = [
        StateTask(measure, float(k), 0.0, rho) for k, rho in enumerate(states.random_state(seed, measure, count))
    ]
    rows = evaluate_tasks(tasks, options)
    envelope = evaluate_tasks(envelope_tasks(), options)
    _write_measures(repo, "measures", rows)
    _write_measures(repo, "envelopes", envelope)

    discord = np.array([row.report.discord for row in rows])
    ea = np.array([row.report.ea for row in rows])
    above = int(np.sum(ea > upper_envelope(envelope, "discord", "ea", discord) + ENVELOPE_MARGIN))
    violations = hierarchy_violations(rows, ZERO_TOLERANCE, IMPLIED_TOLERANCE)
    if above:
        logger.warning("%d of %d states lie above the EA-discord envelope", above, count)
    if violations:
        logger.warning("%d hierarchy violations among %d random states", len(violations), count)

    summary = {"states": count, "above_envelope": above, "hierarchy_violations": len(violations)}
    spec = _spec(repo, "random-scatter", {"count": count, "measure": measure}, seed)
    result = ExperimentResult(success=True, rows=rows, summary=summary, violations=violations)
    return _finish(repo, spec, options, result)


# ---------------------------------------------------------------------------
# Hierarchy audit
# ---------------------------------------------------------------------------


def classical_states(seed: int, count: int) -> List[DensityMatrix]:
    """Diagonal states rotated by random local unitaries: zero for every measure."""

    found = []
    for child in np.random.SeedSequence(seed).spawn(count):
        rng = np.random.Generator(np.random.PCG64(child))
        rho = states.classical_state(rng.dirichlet(np.ones(4)).reshape(2, 2))
        u, v = states.random_local_unitary(rng), states.random_local_unitary(rng)
        found.append(DensityMatrix(apply_local_unitaries(rho.matrix, u, v)))
    return found


def zero_ea_states(seed: int, count: int) -> List[DensityMatrix]:
    """
    [[ρ_B, φ_B], [φ_B†, ρ_B]] with φ_B = √ρ_B W √ρ_B and ‖W‖ ≤ 1, so the
    block matrix is positive; rotated by random local unitaries.
    """

    found = []
    for child in np.random.SeedSequence(seed).spawn(count):
        rng = np.random.Generator(np.random.PCG64(child))
        direction = rng.standard_normal(3)
        bloch = direction / np.linalg.norm(direction) * rng.uniform(0.0, 1.0)
        rho_b = states.qubit_state(bloch)
        root = matrix_sqrt_psd(rho_b.matrix)
        w = states.ginibre(rng, 2)
        w = w / np.linalg.norm(w, 2) * rng.uniform(0.0, 1.0)
        rho = states.zero_ea_state(rho_b, root @ w @ root)
        u, v = states.random_local_unitary(rng), states.random_local_unitary(rng)
        found.append(DensityMatrix(apply_local_unitaries(rho.matrix, u, v)))
    return found


def octahedron_boundary_states(seed: int, count: int) -> List[DensityMatrix]:
    """Bell-diagonal states with |c1|+|c2|+|c3| = 1, the separability boundary."""

    found = []
    for child in np.random.SeedSequence(seed).spawn(count):
        rng = np.random.Generator(np.random.PCG64(child))
        magnitudes = rng.dirichlet(np.ones(3))
        signs = rng.choice((-1.0, 1.0), size=3)
        found.append(states.bell_diagonal(BellDiagonalCoords(*(signs * magnitudes))))
    return found


def local_unitary_tasks(base: Sequence[DensityMatrix], trials: int, seed: int) -> List[StateTask]:
    tasks = []
    for index, (rho, child) in enumerate(zip(base, np.random.SeedSequence(seed).spawn(len(base)))):
        rng = np.random.Generator(np.random.PCG64(child))
        for trial in range(trials):
            u, v = states.random_local_unitary(rng), states.random_local_unitary(rng)
            rotated = DensityMatrix(apply_local_unitaries(rho.matrix, u, v))
            tasks.append(StateTask("local-unitary", float(index), float(trial), rotated))
    return tasks


def _check_classical(rows: Sequence[ResultRow], zero: float) -> List[AuditViolation]:
    found = []
    for row in rows:
        r = row.report
        if row.family == "classical":
            worst = max(r.concurrence, r.discord, r.ea)
            if worst >= zero:
                found.append(AuditViolation("classical-states-uncorrelated", row.family, int(row.param_1), f"max measure {worst:.3e}"))
    return found


def _check_zero_ea(rows: Sequence[ResultRow], tasks: Sequence[StateTask], implied: float) -> List[AuditViolation]:
    found = []
    for row, task in zip(rows, tasks):
        if row.family != "zero-ea":
            continue
        index = int(row.param_1)
        if row.report.ea >= implied:
            found.append(AuditViolation("zero-ea-form", row.family, index, f"ea={row.report.ea:.3e}"))
        if not measures.is_ppt(task.rho):
            found.append(AuditViolation("zero-ea-form-ppt", row.family, index, "partial transpose is not positive"))
    return found


def _check_invariance(
    reference: Sequence[ResultRow], rotated: Sequence[ResultRow], implied: float
) -> List[AuditViolation]:
    found = []
    for row in rotated:
        base = reference[int(row.param_1)].report
        for name in ("concurrence", "eof", "discord", "ea"):
            delta = abs(getattr(row.report, name) - getattr(base, name))
            if delta >= implied:
                found.append(
                    AuditViolation(
                        "local-unitary-invariance",
                        row.family,
                        int(row.param_1),
                        f"trial {int(row.param_2)}: {name} changed by {delta:.3e}",
                    )
                )
    return found


def run_hierarchy_audit(
    repo: ResultRepository,
    count: int = DEFAULT_AUDIT_COUNT,
    seed: int = 0,
    zero_tolerance: float = ZERO_TOLERANCE,
    implied_tolerance: float = IMPLIED_TOLERANCE,
    lu_states: int = 20,
    lu_trials: int = 50,
    options: RunOptions = RunOptions(),
) -> ExperimentResult:
    """
    Check zero-set nesting on Haar and Bures states plus classical,
    zero-EA-form and octahedron-boundary batches, and local-unitary
    invariance of every measure. Violations are collected, not raised.
    """

    error = _first_error(
        _validate_count(count),
        _validate_seed(seed),
        None if 0 < zero_tolerance <= implied_tolerance else "tolerances must satisfy 0 < zero ≤ implied.",
        None if lu_states >= 0 and lu_trials >= 0 else "local-unitary counts must not be negative.",
    )
    if error:
        return ExperimentResult(success=False, error_message=error)

    targeted = max(count // 5, 1)
    haar_seed, bures_seed, classical_seed, zero_seed, boundary_seed, lu_seed = _derived_seeds(seed, 6)
    haar = states.random_state(haar_seed, "haar", count)
    batches: List[Tuple[str, Sequence[DensityMatrix]]] = [
        ("haar", haar),
        ("bures", states.random_state(bures_seed, "bures", count)),
        ("classical", classical_states(classical_seed, targeted)),
        ("zero-ea", zero_ea_states(zero_seed, targeted)),
        ("octahedron", octahedron_boundary_states(boundary_seed, targeted)),
    ]
    tasks = [
        StateTask(family, float(k), 0.0, rho) for family, batch in batches for k, rho in enumerate(batch)
    ]
    rows = evaluate_tasks(tasks, options)

    lu_base = haar[: min(lu_states, count)]
    lu_rows = evaluate_tasks(local_unitary_tasks(lu_base, lu_trials, lu_seed), options)

    audit = AuditSummary(checked_states=len(rows) + len(lu_rows))
    audit.violations.extend(hierarchy_violations(rows, zero_tolerance, implied_tolerance))
    audit.violations.extend(_check_classical(rows, zero_tolerance))
    audit.violations.extend(_check_zero_ea(rows, tasks, implied_tolerance))
    audit.violations.extend(_check_invariance(rows[: len(lu_base)], lu_rows, implied_tolerance))

    _write_measures(repo, "measures", rows + lu_rows)
    repo.write_table(
        "audit",
        AUDIT_COLUMNS,
        [[v.check, v.family, v.index, v.detail] for v in audit.violations],
    )
    if not audit.success:
        logger.warning("hierarchy audit found %d violations", len(audit.violations))

    parameters = {
        "count": count,
        "zero_tolerance": zero_tolerance,
        "implied_tolerance": implied_tolerance,
        "lu_states": lu_states,
        "lu_trials": lu_trials,
    }
    summary = {"checked_states": audit.checked_states, "violations": len(audit.violations)}
    spec = _spec(repo, "hierarchy-audit", parameters, seed)
    result = ExperimentResult(success=True, rows=rows, summary=summary, violations=audit.violations)
    return _finish(repo, spec, options, result)


def replot(repo: ResultRepository) -> ExperimentResult:
    """Regenerate every figure of a run directory from its tables."""

    try:
        manifest = repo.read_manifest()
    except (OSError, ValueError) as exc:
        return ExperimentResult(success=False, error_message=f"cannot read manifest in {repo.location}: {exc}")
    experiment = manifest.get("experiment")
    if experiment not in figures.CHARTS:
        return ExperimentResult(success=False, error_message=f"experiment {experiment!r} has no figures.")
    written = figures.write_figures(repo, experiment)
    return ExperimentResult(success=True, figures=written)
