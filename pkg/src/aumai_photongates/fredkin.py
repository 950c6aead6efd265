"""Linear-optics Fredkin gate built from a Mach-Zehnder and two phase blocks.

Three polarization photons carry the qubits: the control C and targets A
and B, with logical zero in H and one in V.  Two parity checks copy the
control onto EPR ancillas, and each copy drives a seven-mode
conditional-phase block sitting in the A arm of a balanced Mach-Zehnder,
one block per polarization.  A V control puts a pi phase on the A arm,
which swaps the targets.

A block is a 7x7 interferometer whose top-left 4x3 rows ``u1..u4`` fix the
heralded amplitudes.  Block mode 1 is the arm, mode 2 holds one single
photon, and modes 3 and 4 receive the EPR photon (H and V).  Success
requires one photon in each of output modes 2 and 3 and none in 4-7.
"""

from __future__ import annotations

import itertools
import logging
import math
from collections.abc import Mapping, Sequence
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass
from typing import NamedTuple

import numpy as np
from numpy.typing import ArrayLike

from aumai_photongates.circuits import (
    DegeneratePivotError,
    ModeRegister,
    Submatrix43,
    beam_splitter,
    complete_to_unitary,
    mode_swap,
    phase_shifter,
    sigma_max,
)
from aumai_photongates.fock import (
    ComplexMatrix,
    ContractViolation,
    ModeUnitary,
    PhotonicsError,
    PureState,
    apply_unitary,
    coarse_grain,
    post_select,
)
from aumai_photongates.models import (
    FredkinReport,
    FredkinSolution,
    Infeasible,
    Singular,
)

logger = logging.getLogger(__name__)

BLOCK_MODES = 7
ANCILLA_PHOTONS = 6
SEQUENTIAL_REFERENCE_P = 4.0**-5
SEQUENTIAL_REFERENCE_PHOTONS = 10
SINGULAR_DET_ATOL = 1e-12
CONDITION_ATOL = 1e-10

# ---------------------------------------------------------------------------
# Custom exceptions
# ---------------------------------------------------------------------------


class BlockConditionError(PhotonicsError, ValueError):
    """A phase block does not produce the required heralded amplitudes."""


# ---------------------------------------------------------------------------
# Heralded amplitudes of a block
# ---------------------------------------------------------------------------


def _rows(u: Submatrix43 | ArrayLike) -> ComplexMatrix:
    if isinstance(u, Submatrix43):
        matrix = u.matrix
    else:
        matrix = np.asarray(u, dtype=np.complex128)
    if matrix.ndim != 2 or matrix.shape[0] < 3 or matrix.shape[1] != 3:
        raise ContractViolation(f"expected rows of 3 entries, got shape {matrix.shape}")
    return matrix


def _coefficients(u: ComplexMatrix, third: ComplexMatrix) -> ComplexMatrix:
    (u11, u12, u13), (u21, u22, u23) = u[0], u[1]
    u31, u32, u33 = third
    x0 = u22 * u33 + u23 * u32
    x1 = (
        u11 * u22 * u33
        + u11 * u23 * u32
        + u12 * u21 * u33
        + u12 * u23 * u31
        + u13 * u21 * u32
        + u13 * u22 * u31
    )
    x2 = (
        2 * u12 * u13 * u21 * u31
        + 2 * u11 * u12 * u23 * u31
        + 2 * u11 * u13 * u22 * u31
        + u11**2 * u23 * u32
        + 2 * u11 * u13 * u21 * u32
        + u11**2 * u22 * u33
        + 2 * u11 * u12 * u21 * u33
    )
    return np.array([x0, x1, x2], dtype=np.complex128)


def x_coeffs(u: Submatrix43 | ArrayLike) -> ComplexMatrix:
    """Heralded amplitudes ``(x0, x1, x2)`` for 0, 1, 2 arm photons, EPR photon in H."""
    rows = _rows(u)
    return _coefficients(rows, rows[2])


def y_coeffs(u: Submatrix43 | ArrayLike) -> ComplexMatrix:
    """As :func:`x_coeffs` with the EPR photon in V (row 4 replaces row 3)."""
    rows = _rows(u)
    if rows.shape[0] < 4:
        raise ContractViolation("y coefficients need four rows")
    return _coefficients(rows, rows[3])


def design_matrix(u1: ArrayLike, u2: ArrayLike) -> ComplexMatrix:
    """``M`` with ``M @ u3 == x_coeffs([u1, u2, u3])`` for every third row."""
    u11, u12, u13 = np.asarray(u1, dtype=np.complex128)
    u21, u22, u23 = np.asarray(u2, dtype=np.complex128)
    return np.array(
        [
            [0.0, u23, u22],
            [u12 * u23 + u13 * u22, u11 * u23 + u13 * u21, u11 * u22 + u12 * u21],
            [
                2 * (u12 * u13 * u21 + u11 * u12 * u23 + u11 * u13 * u22),
                u11**2 * u23 + 2 * u11 * u13 * u21,
                u11**2 * u22 + 2 * u11 * u12 * u21,
            ],
        ],
        dtype=np.complex128,
    )


def solve_for_rows(
    u1: ArrayLike, u2: ArrayLike, q: complex
) -> tuple[ComplexMatrix, ComplexMatrix] | Singular:
    """Rows 3 and 4 giving heralded amplitudes ``(q, q, q)`` and ``(q, -q, q)``."""
    m = design_matrix(u1, u2)
    determinant = complex(np.linalg.det(m))
    if abs(determinant) < SINGULAR_DET_ATOL:
        return Singular(determinant=abs(determinant))
    targets = np.array([[q, q], [q, -q], [q, q]], dtype=np.complex128)
    solved = np.linalg.solve(m, targets)
    return solved[:, 0], solved[:, 1]


# ---------------------------------------------------------------------------
# Analytic family
# ---------------------------------------------------------------------------


def analytic_rows(u11: float, u22: float) -> tuple[ComplexMatrix, ComplexMatrix]:
    """Rows ``u1 = (a, a, a)`` and ``u2 = (-w, w, -w)`` of the analytic family."""
    if u11 == 0.0 or u22 == 0.0:
        raise ContractViolation(f"u11 and u22 must be nonzero, got {u11}, {u22}")
    a, w = u11, u22
    return (
        np.array([a, a, a], dtype=np.complex128),
        np.array([-w, w, -w], dtype=np.complex128),
    )


def analytic_submatrix(u11: float, u22: float, q: complex) -> Submatrix43:
    """Closed-form block of the analytic family.

    Raises:
        ContractViolation: if ``u11`` or ``u22`` vanishes.
        BlockConditionError: if the closed form misses the amplitude targets.
    """
    u1, u2 = analytic_rows(u11, u22)
    a, w = u11, u22
    u3 = np.array(
        [
            -q * (1 - a) ** 2 / (2 * a**2 * w),
            -q / (2 * a * w),
            q * (2 * a - 1) / (2 * a * w),
        ],
        dtype=np.complex128,
    )
    u4 = np.array(
        [
            -q * (1 + a) ** 2 / (2 * a**2 * w),
            q / (2 * a * w),
            q * (2 * a + 1) / (2 * a * w),
        ],
        dtype=np.complex128,
    )
    sub = Submatrix43.from_rows(u1, u2, u3, u4)
    scale = max(1.0, float(np.abs(sub.matrix).max()))
    _check_targets(sub, q, atol=CONDITION_ATOL * scale)
    return sub


def _targets(q: complex) -> tuple[ComplexMatrix, ComplexMatrix]:
    return (
        np.array([q, q, q], dtype=np.complex128),
        np.array([q, -q, q], dtype=np.complex128),
    )


def condition_residuals(
    sub: Submatrix43 | ArrayLike, q: complex
) -> tuple[float, float]:
    """Max deviation of the x and y amplitudes from their targets."""
    x_target, y_target = _targets(q)
    return (
        float(np.max(np.abs(x_coeffs(sub) - x_target))),
        float(np.max(np.abs(y_coeffs(sub) - y_target))),
    )


def _check_targets(sub: Submatrix43, q: complex, atol: float) -> None:
    x_residual, y_residual = condition_residuals(sub, q)
    if max(x_residual, y_residual) > atol:
        raise BlockConditionError(
            f"heralded amplitudes miss targets by "
            f"x={x_residual:.3e}, y={y_residual:.3e}"
        )


# ---------------------------------------------------------------------------
# Brute-force oracle and blocks
# ---------------------------------------------------------------------------


def conditional_amplitudes_oracle(
    U7: ModeUnitary | ArrayLike,  # noqa: N803
    control_port: int,
) -> ComplexMatrix:
    """Heralded block amplitudes for 0, 1, 2 arm photons by Fock simulation.

    ``control_port`` is the 1-based block input (3 or 4) holding the EPR photon.
    """
    if control_port not in (3, 4):
        raise ContractViolation(f"control port must be 3 or 4, got {control_port}")
    unitary = U7 if isinstance(U7, ModeUnitary) else ModeUnitary(U7)
    if unitary.size != BLOCK_MODES:
        raise ContractViolation(f"block must act on 7 modes, got {unitary.size}")
    register = ModeRegister([f"m{k}" for k in range(1, BLOCK_MODES + 1)])
    herald = register.pattern({"m2": 1, "m3": 1, "m4": 0, "m5": 0, "m6": 0, "m7": 0})
    amplitudes = []
    for n in range(3):
        source = register.occupation({"m1": n, "m2": 1, f"m{control_port}": 1})
        heralded = post_select(apply_unitary(unitary, PureState.basis(source)), herald)
        amplitudes.append(heralded.amplitude((n,)))
    return np.array(amplitudes, dtype=np.complex128)


@dataclass(frozen=True)
class CPSBlock:
    """A conditional-phase block together with its completed interferometer."""

    sub: Submatrix43
    q: complex
    unitary: ModeUnitary


def build_cps_block(
    sub: Submatrix43, q: complex, atol: float = CONDITION_ATOL
) -> CPSBlock:
    """Check the amplitude targets, then complete ``sub`` to 7 modes.

    Raises:
        BlockConditionError: if the targets are missed or ``sub`` is not
            embeddable.
    """
    _check_targets(sub, q, atol)
    completed = complete_to_unitary(sub)
    if isinstance(completed, Infeasible):
        raise BlockConditionError(
            f"block cannot be completed: row {completed.row} "
            f"has radicand {completed.radicand:.3e}"
        )
    return CPSBlock(sub=sub, q=q, unitary=completed)


# ---------------------------------------------------------------------------
# Solutions
# ---------------------------------------------------------------------------


def solution_from_rows(
    u1: ArrayLike, u2: ArrayLike, u3: ArrayLike, u4: ArrayLike, q: complex
) -> FredkinSolution:
    sub = Submatrix43.from_rows(u1, u2, u3, u4)
    return FredkinSolution(
        u1=list(sub.row(0)),
        u2=list(sub.row(1)),
        u3=list(sub.row(2)),
        u4=list(sub.row(3)),
        q=complex(q),
        P_succ=abs(q) ** 4 / 4.0,
        sigma_max=sigma_max(sub.matrix),
    )


def solution_submatrix(solution: FredkinSolution) -> Submatrix43:
    return Submatrix43.from_rows(solution.u1, solution.u2, solution.u3, solution.u4)


class SolutionCheck(NamedTuple):
    x_residual: float
    y_residual: float
    sigma_max: float
    p_residual: float
    oracle_residual: float | None

    def passed(self, atol: float = 1e-9) -> bool:
        residuals = [self.x_residual, self.y_residual, self.p_residual]
        if self.oracle_residual is not None:
            residuals.append(self.oracle_residual)
        return max(residuals) <= atol and self.sigma_max <= 1.0 + 1e-10


def verify_solution(
    solution: FredkinSolution, *, oracle: bool = False
) -> SolutionCheck:
    """Re-derive every invariant of ``solution``.

    With ``oracle`` the block is completed and the heralded amplitudes are
    recomputed by Fock simulation.  A block that cannot be completed, for
    lack of headroom or because a completion pivot degenerates, gets an
    infinite oracle residual and so fails the check.
    """
    sub = solution_submatrix(solution)
    q = solution.q
    x_residual, y_residual = condition_residuals(sub, q)
    oracle_residual: float | None = None
    if oracle:
        completed: ModeUnitary | Infeasible | None
        try:
            completed = complete_to_unitary(sub)
        except DegeneratePivotError as exc:
            logger.warning("completion failed: %s", exc)
            completed = None
        if completed is None or isinstance(completed, Infeasible):
            oracle_residual = math.inf
        else:
            x_target, y_target = _targets(q)
            x_oracle = conditional_amplitudes_oracle(completed, 3)
            y_oracle = conditional_amplitudes_oracle(completed, 4)
            oracle_residual = max(
                float(np.max(np.abs(x_oracle - x_target))),
                float(np.max(np.abs(y_oracle - y_target))),
            )
    return SolutionCheck(
        x_residual=x_residual,
        y_residual=y_residual,
        sigma_max=sigma_max(sub.matrix),
        p_residual=abs(solution.P_succ - abs(q) ** 4 / 4.0),
        oracle_residual=oracle_residual,
    )


# ---------------------------------------------------------------------------
# Parity check
# ---------------------------------------------------------------------------

_PLUS = {"h": 1, "v": 0}
_MINUS = {"h": 0, "v": 1}


def _epr_terms(first: str, second: str) -> list[tuple[dict[str, int], complex]]:
    """``(|VV> + |HH>) / sqrt 2`` over photon prefixes ``first`` and ``second``."""
    amplitude = 1.0 / math.sqrt(2.0)
    return [
        ({f"{first}_v": 1, f"{second}_v": 1}, amplitude),
        ({f"{first}_h": 1, f"{second}_h": 1}, amplitude),
    ]


def _product_state(
    register: ModeRegister,
    factors: Sequence[Sequence[tuple[Mapping[str, int], complex]]],
) -> PureState:
    terms: dict[tuple[int, ...], complex] = {}
    for combination in itertools.product(*factors):
        counts: dict[str, int] = {}
        amplitude: complex = 1.0
        for part, value in combination:
            for label, n in part.items():
                counts[label] = counts.get(label, 0) + n
            amplitude *= value
        occ = register.occupation(counts)
        terms[occ] = terms.get(occ, 0j) + amplitude
    return PureState(terms, register.size)


def _apply_parity_check(
    state: PureState, register: ModeRegister, epr: str
) -> tuple[PureState, ModeRegister]:
    """Copy the control onto the EPR photon whose first half is ``epr``.

    Both detector outcomes are kept; the "-" outcome gets a pi phase on C_H
    before the branches are merged.
    """
    state = apply_unitary(register.embed(mode_swap(), ["c_v", f"{epr}_v"]), state)
    state = apply_unitary(
        register.embed(beam_splitter(0.5), [f"{epr}_v", f"{epr}_h"]), state
    )
    reduced = register.without([f"{epr}_h", f"{epr}_v"])
    plus = post_select(
        state, register.pattern({f"{epr}_{pol}": n for pol, n in _PLUS.items()})
    )
    minus = post_select(
        state, register.pattern({f"{epr}_{pol}": n for pol, n in _MINUS.items()})
    )
    minus = apply_unitary(reduced.embed(phase_shifter(math.pi), ["c_h"]), minus)
    logger.debug(
        "parity check %s: P(+)=%.6g P(-)=%.6g",
        epr,
        plus.norm_squared(),
        minus.norm_squared(),
    )
    return coarse_grain([plus, minus]), reduced


class ParityOutcome(NamedTuple):
    """Heralded state over ``(c_h, c_v, e2_h, e2_v)``."""

    state: PureState
    success_probability: float
    fidelity: float


def parity_check(alpha: complex, beta: complex) -> ParityOutcome:
    """Copy a control ``alpha |V> + beta |H>`` onto one photon of an EPR pair.

    The ideal output is ``alpha |V>_C |0>_3 |1>_4 + beta |H>_C |1>_3 |0>_4``,
    where ports 3 and 4 are the H and V modes of the second EPR photon.
    """
    norm = math.hypot(abs(alpha), abs(beta))
    if norm == 0.0:
        raise ContractViolation("control qubit needs a nonzero amplitude")
    alpha, beta = alpha / norm, beta / norm
    register = ModeRegister(["c_h", "c_v", "e1_h", "e1_v", "e2_h", "e2_v"])
    control = [({"c_v": 1}, alpha), ({"c_h": 1}, beta)]
    state = _product_state(register, [control, _epr_terms("e1", "e2")])
    heralded, reduced = _apply_parity_check(state, register, "e1")
    ideal = PureState(
        {
            reduced.occupation({"c_v": 1, "e2_v": 1}): alpha,
            reduced.occupation({"c_h": 1, "e2_h": 1}): beta,
        },
        reduced.size,
    )
    probability = heralded.norm_squared()
    fidelity = abs(ideal.inner(heralded)) ** 2 / probability if probability else 0.0
    return ParityOutcome(
        state=heralded, success_probability=probability, fidelity=fidelity
    )


# ---------------------------------------------------------------------------
# Mach-Zehnder and end-to-end simulation
# ---------------------------------------------------------------------------

BLOCK_TAGS = ("v", "h")
TARGET_LABELS = ("c_h", "c_v", "a_h", "a_v", "b_h", "b_v")


def _block_labels(tag: str) -> list[str]:
    return [
        f"a_{tag}",
        f"s{tag}",
        f"e2{tag}_h",
        f"e2{tag}_v",
        f"x5{tag}",
        f"x6{tag}",
        f"x7{tag}",
    ]


def fredkin_register() -> ModeRegister:
    labels = list(TARGET_LABELS)
    for tag in BLOCK_TAGS:
        labels += [
            f"e1{tag}_h",
            f"e1{tag}_v",
            f"s{tag}",
            f"e2{tag}_h",
            f"e2{tag}_v",
            f"x5{tag}",
            f"x6{tag}",
            f"x7{tag}",
        ]
    return ModeRegister(labels)


def _mach_zehnder_half(
    state: PureState, register: ModeRegister, *, inverse: bool
) -> PureState:
    for pol in ("h", "v"):
        ports = [f"b_{pol}", f"a_{pol}"] if inverse else [f"a_{pol}", f"b_{pol}"]
        state = apply_unitary(register.embed(beam_splitter(0.5), ports), state)
    return state


def _photon_counts(labels: Sequence[str], bits: Sequence[int]) -> dict[str, int]:
    return {
        f"{label}_{'v' if bit else 'h'}": 1
        for label, bit in zip(labels, bits, strict=True)
    }


def _logical_inputs(
    labels: Sequence[str], vector: ArrayLike
) -> list[tuple[dict[str, int], complex]]:
    """Basis index bits name photons in ``labels`` order, most significant first."""
    amplitudes = np.asarray(vector, dtype=np.complex128).ravel()
    count = len(labels)
    if amplitudes.shape != (2**count,):
        raise ContractViolation(
            f"logical state over {count} qubits needs {2**count} amplitudes"
        )
    norm = float(np.linalg.norm(amplitudes))
    if abs(norm - 1.0) > 1e-10:
        raise ContractViolation(
            f"logical input must be normalized, got norm {norm:.12g}"
        )
    terms = []
    for index, amplitude in enumerate(amplitudes):
        if amplitude == 0:
            continue
        bits = [(index >> (count - 1 - k)) & 1 for k in range(count)]
        terms.append((_photon_counts(labels, bits), complex(amplitude)))
    return terms


def _read_logical(
    state: PureState, register: ModeRegister, labels: Sequence[str]
) -> ComplexMatrix:
    count = len(labels)
    out = np.zeros(2**count, dtype=np.complex128)
    for index in range(2**count):
        bits = [(index >> (count - 1 - k)) & 1 for k in range(count)]
        counts = _photon_counts(labels, bits)
        out[index] = state.amplitude(register.occupation(counts))
    return out


def _fidelity(ideal: ComplexMatrix, logical: ComplexMatrix, weight: float) -> float:
    if weight == 0.0:
        return 0.0
    overlap = abs(np.vdot(ideal, logical)) ** 2
    return float(overlap / (weight * np.vdot(ideal, ideal).real))


def logical_basis(bits: str) -> ComplexMatrix:
    """Basis vector for a bit string such as ``"101"``."""
    vector = np.zeros(2 ** len(bits), dtype=np.complex128)
    vector[int(bits, 2)] = 1.0
    return vector


class MachZehnderOutcome(NamedTuple):
    logical: ComplexMatrix
    success_probability: float


def simulate_mach_zehnder(
    target_state: ArrayLike, arm_phase: float = 0.0
) -> MachZehnderOutcome:
    """Run two polarization photons A, B through a balanced Mach-Zehnder.

    ``arm_phase`` is applied to both polarizations of the A arm; 0 returns the
    input and pi swaps A and B.
    """
    register = ModeRegister(["a_h", "a_v", "b_h", "b_v"])
    state = _product_state(register, [_logical_inputs(("a", "b"), target_state)])
    state = _mach_zehnder_half(state, register, inverse=False)
    if arm_phase:
        for pol in ("h", "v"):
            shifter = register.embed(phase_shifter(arm_phase), [f"a_{pol}"])
            state = apply_unitary(shifter, state)
    state = _mach_zehnder_half(state, register, inverse=True)
    return MachZehnderOutcome(
        logical=_read_logical(state, register, ("a", "b")),
        success_probability=state.norm_squared(),
    )


def ideal_fredkin() -> ComplexMatrix:
    """Controlled swap of A and B on basis ``|c a b>``, control most significant."""
    gate = np.eye(8, dtype=np.complex128)
    gate[[5, 6]] = gate[[6, 5]]
    return gate


@dataclass(frozen=True)
class FredkinOutcome:
    """Heralded output of one end-to-end run.

    ``logical`` holds the unnormalized amplitudes on ``|c a b>``; ``state`` is
    the full heralded Fock state over :data:`TARGET_LABELS`.
    """

    logical: ComplexMatrix
    success_probability: float
    fidelity: float
    state: PureState


def simulate_fredkin(
    input_state: ArrayLike | str,
    solution: FredkinSolution,
    block: CPSBlock | None = None,
) -> FredkinOutcome:
    """Simulate the full nine-photon gate on a normalized logical input.

    Elements act one at a time on the sparse state, and every detector is
    post-selected as soon as its light has left the interferometer.
    """
    vector = logical_basis(input_state) if isinstance(input_state, str) else input_state
    if block is None:
        block = build_cps_block(solution_submatrix(solution), solution.q)
    register = fredkin_register()
    factors = [_logical_inputs(("c", "a", "b"), vector)]
    factors += [_epr_terms(f"e1{tag}", f"e2{tag}") for tag in BLOCK_TAGS]
    factors += [[({f"s{tag}": 1}, 1.0)] for tag in BLOCK_TAGS]
    state = _product_state(register, factors)

    for tag in BLOCK_TAGS:
        state, register = _apply_parity_check(state, register, f"e1{tag}")

    state = _mach_zehnder_half(state, register, inverse=False)
    for tag in BLOCK_TAGS:
        labels = _block_labels(tag)
        state = apply_unitary(register.embed(block.unitary, labels), state)
        herald = {label: 0 for label in labels[1:]}
        herald.update({f"s{tag}": 1, f"e2{tag}_h": 1})
        reduced = register.without(labels[1:])
        state = post_select(state, register.pattern(herald))
        register = reduced
        logger.debug(
            "block %s: %d terms, weight %.6g", tag, len(state), state.norm_squared()
        )
    state = _mach_zehnder_half(state, register, inverse=True)

    logical = _read_logical(state, register, ("c", "a", "b"))
    probability = state.norm_squared()
    ideal = ideal_fredkin() @ np.asarray(vector, dtype=np.complex128)
    return FredkinOutcome(
        logical=logical,
        success_probability=probability,
        fidelity=_fidelity(ideal, logical, probability),
        state=state,
    )


SUPERPOSITION_CASE = "+01"


def _case_vector(label: str) -> ComplexMatrix:
    if label == SUPERPOSITION_CASE:
        return (logical_basis("001") + logical_basis("101")) / math.sqrt(2.0)
    return logical_basis(label)


def _run_case(label: str, solution: FredkinSolution) -> tuple[float, float]:
    outcome = simulate_fredkin(_case_vector(label), solution)
    return outcome.success_probability, outcome.fidelity


def fredkin_report(solution: FredkinSolution, jobs: int = 1) -> FredkinReport:
    """All eight basis inputs plus a control superposition, merged in order."""
    cases = [format(i, "03b") for i in range(8)] + [SUPERPOSITION_CASE]
    if jobs > 1:
        with ProcessPoolExecutor(max_workers=jobs) as pool:
            results = list(pool.map(_run_case, cases, itertools.repeat(solution)))
    else:
        results = [_run_case(label, solution) for label in cases]

    expected = abs(solution.q) ** 4 / 4.0
    probabilities = [p for p, _ in results]
    worst = max(abs(p - expected) for p in probabilities)
    relative = worst / expected if expected else math.inf
    return FredkinReport(
        q=solution.q,
        P_succ_expected=expected,
        P_succ_simulated=float(np.mean(probabilities)),
        min_fidelity=min(f for _, f in results),
        relative_P_error=relative,
        cases={label: f for label, (_, f) in zip(cases, results, strict=True)},
        ancilla_photons=ANCILLA_PHOTONS,
        sequential_reference_P=SEQUENTIAL_REFERENCE_P,
        sequential_reference_photons=SEQUENTIAL_REFERENCE_PHOTONS,
    )


__all__ = [
    "ANCILLA_PHOTONS",
    "SEQUENTIAL_REFERENCE_P",
    "SEQUENTIAL_REFERENCE_PHOTONS",
    "BlockConditionError",
    "CPSBlock",
    "FredkinOutcome",
    "MachZehnderOutcome",
    "ParityOutcome",
    "SolutionCheck",
    "analytic_rows",
    "analytic_submatrix",
    "build_cps_block",
    "conditional_amplitudes_oracle",
    "condition_residuals",
    "design_matrix",
    "fredkin_register",
    "fredkin_report",
    "ideal_fredkin",
    "logical_basis",
    "parity_check",
    "simulate_fredkin",
    "simulate_mach_zehnder",
    "solution_from_rows",
    "solution_submatrix",
    "solve_for_rows",
    "verify_solution",
    "x_coeffs",
    "y_coeffs",
]
