"""CLI entry point for aumai-photongates.

JSON results go to stdout with floats rounded to 12 significant digits;
tables and diagnostics go to stderr.  Exit codes: 0 success, 1 a failed
verification or infeasible input, 2 usage errors and malformed files.
"""

from __future__ import annotations

import json
import logging
import math
import re
import sys
import tomllib
from pathlib import Path
from typing import Any, NoReturn

import click
import numpy as np
from pydantic import ValidationError

from aumai_photongates import __version__
from aumai_photongates.circuits import (
    DegeneratePivotError,
    Submatrix43,
    complete_to_unitary,
    is_embeddable,
)
from aumai_photongates.decorators import ClaimContext
from aumai_photongates.fock import (
    ContractViolation,
    matrix_from_payload,
    matrix_to_payload,
)
from aumai_photongates.fredkin import (
    SEQUENTIAL_REFERENCE_P,
    SEQUENTIAL_REFERENCE_PHOTONS,
    SUPERPOSITION_CASE,
    fredkin_report,
    logical_basis,
    simulate_fredkin,
    verify_solution,
)
from aumai_photongates.models import (
    AppConfig,
    FredkinSolution,
    Infeasible,
    MatrixPayload,
    OptimizerConfig,
    ToffoliReport,
)
from aumai_photongates.optimize import optimize_analytic_family, optimize_global
from aumai_photongates.runlog import RunLog
from aumai_photongates.toffoli import (
    MAX_SIMULATED_QUBITS,
    DesignDomainError,
    controlled_u,
    controlled_u_design,
    design_cphase,
    design_from_t1,
    effective_gate,
    heralding_factor,
    reconstruct_controlled_u,
)
from aumai_photongates.verify import ClaimNotFoundError, default_suite

logger = logging.getLogger(__name__)

EXIT_FAILURE = 1
EXIT_USAGE = 2
FIDELITY_FLOOR = 1.0 - 1e-6
FREDKIN_ATOL = 1e-8
SIGNIFICANT_DIGITS = 12

# ---------------------------------------------------------------------------
# Helpers
# ---------------------------------------------------------------------------


def _fail(message: str, code: int = EXIT_FAILURE) -> NoReturn:
    click.echo(f"Error: {message}", err=True)
    sys.exit(code)


def _rounded(value: Any) -> Any:  # noqa: ANN401
    if isinstance(value, float):
        if not math.isfinite(value):
            return value
        return float(f"{value:.{SIGNIFICANT_DIGITS}g}")
    if isinstance(value, dict):
        return {k: _rounded(v) for k, v in value.items()}
    if isinstance(value, (list, tuple)):
        return [_rounded(v) for v in value]
    return value


def _emit(payload: dict[str, Any]) -> None:
    click.echo(json.dumps(_rounded(payload), indent=2))


def _table(rows: dict[str, object]) -> None:
    width = max(len(k) for k in rows)
    for key, value in rows.items():
        shown = f"{value:.6g}" if isinstance(value, float) else value
        click.echo(f"{key:<{width}} : {shown}", err=True)


def _read_json(path: str) -> Any:  # noqa: ANN401
    try:
        return json.loads(Path(path).read_text(encoding="utf-8"))
    except (OSError, json.JSONDecodeError) as exc:
        _fail(f"cannot read JSON from {path}: {exc}", EXIT_USAGE)


def _load_config(path: str) -> AppConfig:
    """Load an :class:`AppConfig` from a TOML or JSON file."""
    file_path = Path(path)
    try:
        raw = file_path.read_text(encoding="utf-8")
        if file_path.suffix == ".toml":
            data = tomllib.loads(raw)
        else:
            data = json.loads(raw)
        return AppConfig.model_validate(data)
    except (OSError, ValueError) as exc:
        _fail(f"invalid config file {path}: {exc}", EXIT_USAGE)


_PI_MULTIPLE = re.compile(
    r"^\s*(?P<coef>[+-]?(?:\d+(?:\.\d*)?|\.\d+)?)\s*\*?\s*pi\s*"
    r"(?:/\s*(?P<den>\d+(?:\.\d*)?))?\s*$",
    re.IGNORECASE,
)


def parse_angle(text: str) -> float:
    """Radians from ``"pi"``, ``"pi/2"``, ``"3pi/4"``, ``"-pi/2"`` or a number."""
    match = _PI_MULTIPLE.match(text)
    if match is None:
        return float(text)
    coef = match["coef"]
    if coef in ("", "+"):
        factor = 1.0
    elif coef == "-":
        factor = -1.0
    else:
        factor = float(coef)
    denominator = float(match["den"]) if match["den"] else 1.0
    if denominator == 0.0:
        raise ValueError("zero denominator")
    return factor * math.pi / denominator


class AngleType(click.ParamType):
    name = "angle"

    def convert(
        self,
        value: Any,  # noqa: ANN401
        param: click.Parameter | None,
        ctx: click.Context | None,
    ) -> float:
        if isinstance(value, float):
            return value
        try:
            return parse_angle(str(value))
        except ValueError:
            self.fail(f"{value!r} is not an angle (try 'pi/2' or 1.5708)", param, ctx)


ANGLE = AngleType()


def _app_config(ctx: click.Context) -> AppConfig:
    config = ctx.find_object(AppConfig)
    return config if config is not None else AppConfig()


def _optimizer_config(ctx: click.Context, **overrides: object) -> OptimizerConfig:
    base = _app_config(ctx).optimizer
    update = {k: v for k, v in overrides.items() if v is not None}
    try:
        return OptimizerConfig.model_validate({**base.model_dump(), **update})
    except ValidationError as exc:
        _fail(f"invalid optimizer settings: {exc}", EXIT_USAGE)


def _jobs(ctx: click.Context, jobs: int | None) -> int:
    return jobs if jobs is not None else _app_config(ctx).jobs


def _load_solution(path: str) -> FredkinSolution:
    try:
        return FredkinSolution.model_validate(_read_json(path))
    except ValidationError as exc:
        _fail(f"malformed solution file {path}: {exc}", EXIT_USAGE)


def _load_matrix(path: str) -> MatrixPayload:
    try:
        return MatrixPayload.model_validate(_read_json(path))
    except ValidationError as exc:
        _fail(f"malformed matrix file {path}: {exc}", EXIT_USAGE)


def _write_solution(solution: FredkinSolution, path: str | None) -> None:
    if path:
        Path(path).write_text(solution.model_dump_json(indent=2), encoding="utf-8")
        click.echo(f"solution written to {path}", err=True)


jobs_option = click.option(
    "--jobs", type=click.IntRange(min=1), default=None, help="Parallel workers."
)
output_option = click.option(
    "--output", type=click.Path(dir_okay=False), default=None, help="Solution JSON."
)

# ---------------------------------------------------------------------------
# CLI
# ---------------------------------------------------------------------------


@click.group()
@click.version_option(version=__version__, prog_name="aumai-photongates")
@click.option("-v", "--verbose", count=True, help="Increase log verbosity.")
@click.option(
    "--config",
    "config_path",
    type=click.Path(dir_okay=False),
    default=None,
    help="Configuration file (TOML or JSON).",
)
@click.pass_context
def main(ctx: click.Context, verbose: int, config_path: str | None) -> None:
    """AumAI PhotonGates: linear-optics Toffoli and Fredkin gate design."""
    logging.basicConfig(
        level=max(logging.DEBUG, logging.WARNING - 10 * verbose),
        stream=sys.stderr,
        format="%(asctime)s %(levelname)s %(name)s: %(message)s",
    )
    ctx.obj = _load_config(config_path) if config_path else AppConfig()


@main.command("toffoli")
@click.option(
    "-n", "--qubits", type=click.IntRange(min=1), required=True, help="Qubit count N."
)
@click.option(
    "--phase", type=ANGLE, default="pi", show_default=True, help="Conditional phase."
)
@click.option("--t1", type=float, default=None, help="Prescribed first transmittance.")
@click.option(
    "--simulate", is_flag=True, help="Verify by full Fock simulation (N <= 4)."
)
@jobs_option
@click.pass_context
def toffoli_command(
    ctx: click.Context,
    qubits: int,
    phase: float,
    t1: float | None,
    simulate: bool,
    jobs: int | None,
) -> None:
    """Design an N-qubit controlled-phase (Toffoli) network."""
    try:
        if t1 is None:
            design = design_cphase(qubits, phase)
        else:
            design = design_from_t1(qubits, phase, t1)
    except DesignDomainError as exc:
        _fail(str(exc), EXIT_USAGE)
    if simulate and qubits > MAX_SIMULATED_QUBITS:
        _fail(f"--simulate supports at most {MAX_SIMULATED_QUBITS} qubits", EXIT_USAGE)

    report = ToffoliReport(
        **design.model_dump(),
        P_succ_analytic=(design.T1 * design.T2) ** design.N,
        heralding_factor=heralding_factor(qubits),
    )
    if simulate:
        gate = effective_gate(design, jobs=_jobs(ctx, jobs))
        report.P_succ_simulated = gate.success_probability
        report.fidelity = gate.fidelity
        report.conditional_phase = gate.conditional_phase

    _table(report.model_dump(exclude_none=True))
    _emit(report.model_dump())
    if report.fidelity is not None and report.fidelity < FIDELITY_FLOOR:
        _fail(f"design inconsistency: fidelity {report.fidelity:.12f}")


_NAMED_GATES: dict[str, list[list[complex]]] = {
    "x": [[0, 1], [1, 0]],
    "y": [[0, -1j], [1j, 0]],
    "z": [[1, 0], [0, -1]],
    "h": [[2**-0.5, 2**-0.5], [2**-0.5, -(2**-0.5)]],
    "s": [[1, 0], [0, 1j]],
    "t": [[1, 0], [0, complex(math.cos(math.pi / 4), math.sin(math.pi / 4))]],
}


@main.command("controlled-u")
@click.option(
    "--gate", type=click.Choice(sorted(_NAMED_GATES)), default=None, help="Named gate."
)
@click.option(
    "--unitary",
    "unitary_path",
    type=click.Path(dir_okay=False),
    default=None,
    help="2x2 matrix as {rows, cols, re, im} JSON.",
)
def controlled_u_command(gate: str | None, unitary_path: str | None) -> None:
    """Reduce a controlled-U to a conditional phase plus local gates."""
    if (gate is None) == (unitary_path is None):
        _fail("give exactly one of --gate or --unitary", EXIT_USAGE)
    if unitary_path is not None:
        matrix = matrix_from_payload(_load_matrix(unitary_path))
    else:
        matrix = np.array(_NAMED_GATES[gate or ""], dtype=np.complex128)
    try:
        design = controlled_u_design(matrix)
    except ContractViolation as exc:
        _fail(str(exc), EXIT_USAGE)

    decomposition = design.decomposition
    mismatch = reconstruct_controlled_u(decomposition) - controlled_u(matrix)
    error = float(np.linalg.norm(mismatch, 2))
    _table(
        {
            "phi0": decomposition.phi0,
            "delta_phi": decomposition.delta_phi,
            "reconstruction_error": error,
            "P_succ": (design.cphase.T1 * design.cphase.T2) ** 2,
        }
    )
    _emit(
        {
            "V": matrix_to_payload(decomposition.V).model_dump(),
            "phi0": decomposition.phi0,
            "delta_phi": decomposition.delta_phi,
            "cphase": design.cphase.model_dump(),
            "reconstruction_error": error,
        }
    )


@main.group("fredkin")
def fredkin_group() -> None:
    """Design, optimize and simulate the linear-optics Fredkin gate."""


def _fredkin_payload(solution: FredkinSolution, **extra: object) -> dict[str, Any]:
    return {
        **extra,
        "solution": solution.model_dump(mode="json"),
        "P_succ": solution.P_succ,
        "sequential_reference_P": SEQUENTIAL_REFERENCE_P,
        "sequential_reference_photons": SEQUENTIAL_REFERENCE_PHOTONS,
    }


@fredkin_group.command("analytic")
@click.option("--grid-points", type=click.IntRange(min=2), default=None)
@click.option("--tied", is_flag=True, help="Restrict the family to u11 == u22.")
@output_option
@click.pass_context
def fredkin_analytic(
    ctx: click.Context, grid_points: int | None, tied: bool, output: str | None
) -> None:
    """Optimize the closed-form two-parameter block family."""
    config = _optimizer_config(ctx, grid_points=grid_points)
    optimum = optimize_analytic_family(config, tied=tied)
    _table(
        {
            "u11": optimum.u11,
            "u22": optimum.u22,
            "q": optimum.q,
            "P_succ": optimum.solution.P_succ,
        }
    )
    _write_solution(optimum.solution, output)
    _emit(
        _fredkin_payload(
            optimum.solution, u11=optimum.u11, u22=optimum.u22, q=optimum.q
        )
    )


@fredkin_group.command("optimize")
@click.option("--starts", type=click.IntRange(min=1), default=None)
@click.option("--seed", type=int, default=None, envvar="LOPT_SEED")
@click.option("--budget", type=float, default=None, help="Wall-clock seconds.")
@click.option("--complex", "allow_complex", is_flag=True, help="Complex rows.")
@output_option
@click.option(
    "--runlog", type=click.Path(dir_okay=False), default=None, help="CSV run log."
)
@jobs_option
@click.pass_context
def fredkin_optimize(
    ctx: click.Context,
    starts: int | None,
    seed: int | None,
    budget: float | None,
    allow_complex: bool,
    output: str | None,
    runlog: str | None,
    jobs: int | None,
) -> None:
    """Multistart search for the largest success probability."""
    config = _optimizer_config(
        ctx,
        starts=starts,
        seed=seed,
        budget_seconds=budget,
        allow_complex=allow_complex or None,
    )
    run_log = RunLog()
    with run_log.scope("optimizer", "global"):
        solution = optimize_global(config, jobs=_jobs(ctx, jobs), run_log=run_log)
    if runlog:
        rows = run_log.write_csv(runlog)
        click.echo(f"{rows} run-log rows written to {runlog}", err=True)
    _write_solution(solution, output)
    check = verify_solution(solution, oracle=True)
    _table(
        {
            "q": solution.q.real,
            "P_succ": solution.P_succ,
            "sigma_max": solution.sigma_max,
        }
    )
    _emit(_fredkin_payload(solution, seed=config.seed, starts=config.starts))
    if solution.P_succ == 0.0 or not check.passed():
        _fail("no verified solution found")


@fredkin_group.command("simulate")
@click.option(
    "--solution",
    "solution_path",
    type=click.Path(dir_okay=False),
    required=True,
)
@click.option(
    "--dump-state",
    type=click.Path(dir_okay=False),
    default=None,
    help="Write the heralded superposition output as JSON terms.",
)
@jobs_option
@click.pass_context
def fredkin_simulate(
    ctx: click.Context, solution_path: str, dump_state: str | None, jobs: int | None
) -> None:
    """Run all basis states and a superposition through the full gate."""
    solution = _load_solution(solution_path)
    check = verify_solution(solution, oracle=True)
    if not check.passed():
        _fail(f"solution fails verification: {check}")
    report = fredkin_report(solution, jobs=_jobs(ctx, jobs))
    if dump_state:
        vector = (logical_basis("001") + logical_basis("101")) / math.sqrt(2.0)
        outcome = simulate_fredkin(vector, solution)
        Path(dump_state).write_text(outcome.state.to_json(), encoding="utf-8")
        click.echo(
            f"{SUPERPOSITION_CASE} output state written to {dump_state}", err=True
        )
    _table(
        {
            "P_succ_expected": report.P_succ_expected,
            "P_succ_simulated": report.P_succ_simulated,
            "min_fidelity": report.min_fidelity,
            "sequential_reference_P": report.sequential_reference_P,
        }
    )
    _emit(report.model_dump(mode="json"))
    infidelity = 1.0 - report.min_fidelity
    if infidelity > FREDKIN_ATOL or report.relative_P_error > FREDKIN_ATOL:
        _fail("simulation does not reproduce the Fredkin gate")


@main.command("complete")
@click.option(
    "--input", "input_path", type=click.Path(dir_okay=False), required=True
)
def complete_command(input_path: str) -> None:
    """Complete a 4x3 block to a 7x7 unitary, row by row."""
    payload_in = _load_matrix(input_path)
    try:
        sub = Submatrix43.from_payload(payload_in)
    except ContractViolation as exc:
        _fail(f"malformed block: {exc}", EXIT_USAGE)
    verdict = is_embeddable(sub)
    try:
        completed = complete_to_unitary(sub)
    except DegeneratePivotError as exc:
        _fail(str(exc))
    payload: dict[str, Any] = {
        "sigma_max": 1.0 - verdict.margin,
        "margin": verdict.margin,
    }
    if isinstance(completed, Infeasible):
        payload.update(feasible=False, infeasible=completed.model_dump(), unitary=None)
    else:
        payload.update(feasible=True, unitary=completed.to_payload().model_dump())
    _table({"feasible": payload["feasible"], "sigma_max": payload["sigma_max"]})
    _emit(payload)
    if isinstance(completed, Infeasible):
        sys.exit(EXIT_FAILURE)


@main.command("verify")
@click.option("--only", multiple=True, help="Claim id or module name; repeatable.")
@click.option("--starts", type=click.IntRange(min=1), default=None)
@click.option("--budget", type=float, default=None)
@jobs_option
@click.pass_context
def verify_command(
    ctx: click.Context,
    only: tuple[str, ...],
    starts: int | None,
    budget: float | None,
    jobs: int | None,
) -> None:
    """Run the reproduction claims against their reference values."""
    context = ClaimContext(
        config=_optimizer_config(ctx, starts=starts, budget_seconds=budget),
        jobs=_jobs(ctx, jobs),
    )
    try:
        report = default_suite().run(only=list(only) or None, context=context)
    except ClaimNotFoundError as exc:
        _fail(f"unknown claim or module: {exc}", EXIT_USAGE)
    for result in report.claims:
        if result.computed_value is None:
            computed = "-"
        else:
            computed = f"{result.computed_value:.6g}"
        click.echo(
            f"{result.status.value:<7} {result.claim_id:<20} {computed:>12} "
            f"{result.runtime_ms:>10.1f} ms  {result.detail}",
            err=True,
        )
    _emit(report.model_dump(mode="json"))
    if not report.passed:
        sys.exit(EXIT_FAILURE)


if __name__ == "__main__":
    main()
