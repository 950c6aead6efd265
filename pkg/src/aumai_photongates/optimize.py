"""Searches for the largest shrink factor q of a Fredkin phase block.

Rows 3 and 4 solved for a given q scale linearly with q, so the Gram matrix
of the stacked block is ``R12^dagger R12 + q^2 R34^dagger R34`` and
embeddability is monotone in q.  :func:`q_ceiling` reads the boundary off a
generalized eigenproblem; :func:`max_q` finds it by bisection and is used
to verify every reported solution.
"""

from __future__ import annotations

import logging
import math
import time
from collections.abc import Callable
from concurrent.futures import ProcessPoolExecutor
from typing import NamedTuple

import numpy as np
import scipy.linalg
import scipy.optimize
from numpy.typing import ArrayLike, NDArray

from aumai_photongates.circuits import sigma_max
from aumai_photongates.fock import ComplexMatrix
from aumai_photongates.fredkin import (
    analytic_rows,
    solution_from_rows,
    solve_for_rows,
    verify_solution,
)
from aumai_photongates.models import FredkinSolution, OptimizerConfig, Singular
from aumai_photongates.runlog import RunLog

logger = logging.getLogger(__name__)

ANALYTIC_LOWER = 0.02
ANALYTIC_UPPER = 1.0 / math.sqrt(3.0)
START_SPREAD = 0.6
MAX_BRACKET_DOUBLINGS = 64
PD_ATOL = 1e-12


# ---------------------------------------------------------------------------
# Shrink-factor bounds
# ---------------------------------------------------------------------------


class ShrinkBound(NamedTuple):
    q_max: float
    solution: FredkinSolution
    rows_feasible: bool


def q_ceiling(u1: ArrayLike, u2: ArrayLike) -> float:
    """Largest q keeping the block embeddable, in closed form.

    Returns 0 when rows 1-2 already saturate the unit bound or the design
    system is singular.
    """
    rows = solve_for_rows(u1, u2, 1.0)
    if isinstance(rows, Singular):
        return 0.0
    r12 = np.vstack([u1, u2]).astype(np.complex128)
    r34 = np.vstack(rows)
    slack = np.eye(3) - r12.conj().T @ r12
    growth = r34.conj().T @ r34
    if float(np.linalg.eigvalsh(slack)[0]) <= PD_ATOL:
        return 0.0
    try:
        largest = float(scipy.linalg.eigh(growth, slack, eigvals_only=True)[-1])
    except np.linalg.LinAlgError:
        return 0.0
    if largest <= 0.0:
        return math.inf
    return 1.0 / math.sqrt(largest)


def _stacked(
    u1: ComplexMatrix, u2: ComplexMatrix, u3: ComplexMatrix, u4: ComplexMatrix, q: float
) -> ComplexMatrix:
    return np.vstack([u1, u2, q * u3, q * u4])


def max_q(
    u1: ArrayLike, u2: ArrayLike, config: OptimizerConfig | None = None
) -> ShrinkBound | Singular:
    """Bisect for the largest q with ``sigma_max <= 1``.

    The lower end of the bracket stays feasible throughout, so the returned
    solution is always embeddable.
    """
    cfg = config or OptimizerConfig()
    row1 = np.asarray(u1, dtype=np.complex128)
    row2 = np.asarray(u2, dtype=np.complex128)
    if sigma_max(np.vstack([row1, row2])) > 1.0:
        zero = np.zeros(3, dtype=np.complex128)
        return ShrinkBound(
            q_max=0.0,
            solution=solution_from_rows(row1, row2, zero, zero, 0.0),
            rows_feasible=False,
        )

    rows = solve_for_rows(row1, row2, 1.0)
    if isinstance(rows, Singular):
        return rows
    u3, u4 = rows

    def feasible(q: float) -> bool:
        return sigma_max(_stacked(row1, row2, u3, u4, q)) <= 1.0

    lo, hi = 0.0, 1.0
    for _ in range(MAX_BRACKET_DOUBLINGS):
        if not feasible(hi):
            break
        lo, hi = hi, 2.0 * hi
    while hi - lo > cfg.bisection_tol * max(1.0, hi):
        mid = 0.5 * (lo + hi)
        if feasible(mid):
            lo = mid
        else:
            hi = mid

    return ShrinkBound(
        q_max=lo,
        solution=solution_from_rows(row1, row2, lo * u3, lo * u4, lo),
        rows_feasible=True,
    )


# ---------------------------------------------------------------------------
# Analytic family
# ---------------------------------------------------------------------------


class AnalyticOptimum(NamedTuple):
    u11: float
    u22: float
    q: float
    solution: FredkinSolution


def _analytic_objective(params: NDArray[np.float64], tied: bool) -> float:
    a = float(params[0])
    w = a if tied else float(params[1])
    if not all(ANALYTIC_LOWER <= v <= ANALYTIC_UPPER for v in (a, w)):
        return 0.0
    return -q_ceiling(*analytic_rows(a, w))


def optimize_analytic_family(
    config: OptimizerConfig | None = None, *, tied: bool = False
) -> AnalyticOptimum:
    """Maximize q over the two-parameter analytic family.

    A grid scan seeds a bounded Nelder-Mead refinement; the optimum is then
    re-derived with :func:`max_q`.  ``tied`` restricts the family to
    ``u11 == u22``.
    """
    cfg = config or OptimizerConfig()
    axis = np.linspace(ANALYTIC_LOWER, ANALYTIC_UPPER, cfg.grid_points)
    candidates = [np.array([a]) for a in axis] if tied else [
        np.array([a, w]) for a in axis for w in axis
    ]
    scores = [_analytic_objective(c, tied) for c in candidates]
    best = candidates[int(np.argmin(scores))]
    logger.debug("analytic grid best %s with q=%.6g", best, -min(scores))

    if cfg.refine:
        result = scipy.optimize.minimize(
            _analytic_objective,
            best,
            args=(tied,),
            method="Nelder-Mead",
            bounds=[(ANALYTIC_LOWER, ANALYTIC_UPPER)] * best.size,
            options={
                "xatol": cfg.simplex_tol,
                "fatol": cfg.simplex_tol,
                "maxiter": cfg.max_iterations,
            },
        )
        if result.fun <= min(scores):
            best = np.asarray(result.x, dtype=np.float64)

    u11 = float(best[0])
    u22 = u11 if tied else float(best[1])
    bound = max_q(*analytic_rows(u11, u22), cfg)
    if isinstance(bound, Singular):
        raise ArithmeticError(f"analytic optimum ({u11}, {u22}) has a singular design")
    logger.info(
        "analytic family optimum u11=%.6f u22=%.6f q=%.6f", u11, u22, bound.q_max
    )
    return AnalyticOptimum(u11=u11, u22=u22, q=bound.q_max, solution=bound.solution)


# ---------------------------------------------------------------------------
# Global multistart search
# ---------------------------------------------------------------------------


class StartResult(NamedTuple):
    index: int
    q: float
    params: tuple[float, ...]
    wall_time_s: float


StartRunner = Callable[[int, OptimizerConfig, float], StartResult]


def rows_from_params(
    params: ArrayLike, allow_complex: bool
) -> tuple[ComplexMatrix, ComplexMatrix]:
    x = np.asarray(params, dtype=np.float64)
    values = x[:6] + 1j * x[6:12] if allow_complex else x[:6].astype(np.complex128)
    return values[:3], values[3:6]


def _global_objective(params: NDArray[np.float64], allow_complex: bool) -> float:
    u1, u2 = rows_from_params(params, allow_complex)
    overshoot = sigma_max(np.vstack([u1, u2])) - 1.0
    if overshoot >= 0.0:
        return overshoot
    return -q_ceiling(u1, u2)


def run_start(
    index: int, config: OptimizerConfig, time_limit: float | None = None
) -> StartResult:
    """One Nelder-Mead start seeded from ``(config.seed, index)``.

    Args:
        index: Start number; together with ``config.seed`` it fixes the
            initial simplex.
        config: Search settings.
        time_limit: Seconds this start may run.  The simplex stops at the
            first iteration past the limit and reports its best vertex.

    Returns:
        The start's shrink factor and final parameters.
    """
    began = time.perf_counter()
    dims = 12 if config.allow_complex else 6
    rng = np.random.default_rng([config.seed, index])
    x0 = rng.uniform(-START_SPREAD, START_SPREAD, dims)

    def stop_when_late(_: object) -> None:
        if time_limit is not None and time.perf_counter() - began >= time_limit:
            raise StopIteration

    result = scipy.optimize.minimize(
        _global_objective,
        x0,
        args=(config.allow_complex,),
        method="Nelder-Mead",
        callback=stop_when_late,
        options={
            "xatol": config.simplex_tol,
            "fatol": config.simplex_tol,
            "maxiter": config.max_iterations,
            "adaptive": True,
        },
    )
    q = max(0.0, -float(result.fun))
    return StartResult(
        index=index,
        q=q,
        params=tuple(float(v) for v in result.x),
        wall_time_s=time.perf_counter() - began,
    )


def _batches(starts: int, size: int) -> list[range]:
    return [range(i, min(i + size, starts)) for i in range(0, starts, size)]


def optimize_global(
    config: OptimizerConfig | None = None,
    *,
    jobs: int = 1,
    run_log: RunLog | None = None,
    start_runner: StartRunner = run_start,
) -> FredkinSolution:
    """Multistart simplex search over rows 1-2; best verified solution wins.

    Starts run in batches of ``jobs``.  The wall-clock budget is checked
    before each batch, and every start in the batch is handed the time that
    remains, so the search overruns the budget by at most one simplex
    iteration per worker.  Ties in q go to the lexicographically smallest
    parameter vector.
    """
    cfg = config or OptimizerConfig()
    log = run_log if run_log is not None else RunLog()
    deadline = time.monotonic() + cfg.budget_seconds
    results: list[StartResult] = []

    pool = ProcessPoolExecutor(max_workers=jobs) if jobs > 1 else None
    try:
        for batch in _batches(cfg.starts, max(1, jobs)):
            now = time.monotonic()
            if now >= deadline:
                logger.warning("budget exhausted after %d starts", len(results))
                log.record("optimizer", "budget_exhausted", {"start_index": batch[0]})
                break
            remaining = deadline - now
            if pool is not None:
                finished = list(
                    pool.map(
                        start_runner,
                        batch,
                        [cfg] * len(batch),
                        [remaining] * len(batch),
                    )
                )
            else:
                finished = [start_runner(i, cfg, remaining) for i in batch]
            for outcome in finished:
                results.append(outcome)
                log.record(
                    "optimizer",
                    "start",
                    {
                        "start_index": outcome.index,
                        "q": outcome.q,
                        "wall_time_s": outcome.wall_time_s,
                    },
                )
                logger.debug("start %d: q=%.6g", outcome.index, outcome.q)
    finally:
        if pool is not None:
            pool.shutdown()

    ranked = sorted(results, key=lambda r: (-r.q, r.params))
    for candidate in ranked:
        bound = max_q(*rows_from_params(candidate.params, cfg.allow_complex), cfg)
        if isinstance(bound, Singular) or not bound.rows_feasible:
            continue
        if verify_solution(bound.solution).passed():
            logger.info(
                "global optimum from start %d: q=%.6g P=%.6g",
                candidate.index,
                bound.q_max,
                bound.solution.P_succ,
            )
            return bound.solution

    logger.warning("no start produced a verified solution")
    zero = np.zeros(3, dtype=np.complex128)
    return solution_from_rows(zero, zero, zero, zero, 0.0)


__all__ = [
    "AnalyticOptimum",
    "ShrinkBound",
    "StartResult",
    "StartRunner",
    "max_q",
    "optimize_analytic_family",
    "optimize_global",
    "q_ceiling",
    "rows_from_params",
    "run_start",
]
