"""Coincidence-basis N-qubit controlled-phase (Toffoli-equivalent) networks.

Qubit ``j`` of a design occupies four modes: its dual rail ``L = 4j`` and
``R = 4j + 1``, an auxiliary mode ``A = 4j + 2`` fed by the T1 splitter, and a
dump mode ``D = 4j + 3`` of the T3 splitter.  Logical one is a photon in L.
The T2 splitters couple ``A_j`` with ``L_(j+1 mod N)``; the wrap-around arm
carries the phase shift psi.  In basis indices qubit 0 is the most
significant bit.
"""

from __future__ import annotations

import cmath
import logging
import math
from collections.abc import Sequence
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from typing import NamedTuple

import numpy as np
import scipy.linalg
from numpy.typing import ArrayLike

from aumai_photongates.circuits import (
    beam_splitter,
    compose,
    embed,
    phase_shifter,
)
from aumai_photongates.fock import (
    ComplexMatrix,
    ContractViolation,
    ModeUnitary,
    PhotonicsError,
    PureState,
    apply_unitary,
    post_select,
    unitarity_residual,
)
from aumai_photongates.models import CPhaseDesign, DetectionPattern, DualRailRegister

logger = logging.getLogger(__name__)

MAX_SIMULATED_QUBITS = 4
MODES_PER_QUBIT = 4
TRIVIAL_PHASE_ATOL = 1e-12
DESIGN_ATOL = 1e-10

# ---------------------------------------------------------------------------
# Custom exceptions
# ---------------------------------------------------------------------------


class DesignDomainError(PhotonicsError, ValueError):
    """No valid design exists for the requested transmittance."""


class DesignInconsistencyError(PhotonicsError, ValueError):
    """A design violates one of its defining equalities."""


# ---------------------------------------------------------------------------
# Design equations
# ---------------------------------------------------------------------------


def _require_qubits(N: int) -> None:  # noqa: N803
    if N < 1:
        raise ContractViolation(f"qubit count must be >= 1, got {N}")


def _phase_strength(phi: float) -> float:
    """``|2 sin(phi / 2)| = |e^{i phi} - 1|``."""
    return abs(2.0 * math.sin(phi / 2.0))


def _is_trivial_phase(phi: float) -> bool:
    return abs(math.sin(phi / 2.0)) < TRIVIAL_PHASE_ATOL


def _psi_for(phi: float) -> float:
    if _is_trivial_phase(phi):
        return math.pi / 2.0
    return cmath.phase(cmath.exp(1j * phi) - 1.0)


def design_cphase(N: int, phi: float) -> CPhaseDesign:  # noqa: N803
    """Optimal design: ``T1 = T2 = 1 / (1 + |2 sin(phi/2)|^(1/N))``.

    A phase that is a multiple of 2 pi yields the identity design with all
    transmittances 1.
    """
    _require_qubits(N)
    if _is_trivial_phase(phi):
        return CPhaseDesign(N=N, phi=phi, T1=1.0, T2=1.0, T3=1.0, psi=_psi_for(phi))
    T = 1.0 / (1.0 + _phase_strength(phi) ** (1.0 / N))  # noqa: N806
    return CPhaseDesign(N=N, phi=phi, T1=T, T2=T, T3=T * T, psi=_psi_for(phi))


def design_from_t1(N: int, phi: float, T1: float) -> CPhaseDesign:  # noqa: N803
    """The unique valid design with a prescribed first transmittance.

    Raises:
        DesignDomainError: if ``T1`` is outside ``(0, 1)``.
    """
    _require_qubits(N)
    if not 0.0 < T1 < 1.0:
        raise DesignDomainError(f"T1 must lie strictly between 0 and 1, got {T1}")
    coupling = (4.0 * math.sin(phi / 2.0) ** 2) ** (1.0 / N)
    T2 = (1.0 - T1) / (1.0 - T1 + coupling * T1)  # noqa: N806
    return CPhaseDesign(N=N, phi=phi, T1=T1, T2=T2, T3=T1 * T2, psi=_psi_for(phi))


def success_probability(N: int, phi: float, T1: float) -> float:  # noqa: N803
    """``(T1 T2)^N`` for the valid design through ``T1``."""
    design = design_from_t1(N, phi, T1)
    return (design.T1 * design.T2) ** N


def heralding_factor(N: int) -> float:  # noqa: N803
    """Bell-analysis success factor for heralded non-demolition verification."""
    _require_qubits(N)
    return 2.0**-N


class DesignResiduals(NamedTuple):
    t3_product: float
    transmittance_balance: float
    phase_condition: float
    psi_branch: float

    def worst(self) -> float:
        return max(self)


def _amplitudes(design: CPhaseDesign) -> tuple[float, float, float]:
    t1, t2, t3 = (math.sqrt(design.T1), math.sqrt(design.T2), math.sqrt(design.T3))
    return t1, t2, t3


def design_residuals(design: CPhaseDesign) -> DesignResiduals:
    """Deviations of ``design`` from each of its defining equalities."""
    N, phi = design.N, design.phi  # noqa: N806
    T1, T2 = design.T1, design.T2  # noqa: N806
    transmitted = (T1 * T2) ** (N / 2.0)
    reflected = ((1.0 - T1) * (1.0 - T2)) ** (N / 2.0)
    balance = abs(
        4.0 * (T1 * T2) ** N * math.sin(phi / 2.0) ** 2
        - ((1.0 - T1) * (1.0 - T2)) ** N
    )
    phase = abs(
        cmath.exp(1j * phi) * transmitted
        - (transmitted + cmath.exp(1j * design.psi) * reflected)
    )
    return DesignResiduals(
        t3_product=abs(design.T3 - T1 * T2),
        transmittance_balance=balance,
        phase_condition=phase,
        psi_branch=abs(math.cos(design.psi - phi / 2.0)),
    )


def check_design(design: CPhaseDesign, atol: float = DESIGN_ATOL) -> None:
    """Raise :class:`DesignInconsistencyError` if any residual exceeds ``atol``."""
    residuals = design_residuals(design)
    for name, value in residuals._asdict().items():
        if value > atol:
            raise DesignInconsistencyError(
                f"design residual '{name}' = {value:.3e} exceeds {atol:.1e}"
            )


# ---------------------------------------------------------------------------
# Network
# ---------------------------------------------------------------------------


def dual_rail_register(N: int) -> DualRailRegister:  # noqa: N803
    _require_qubits(N)
    base = [MODES_PER_QUBIT * j for j in range(N)]
    return DualRailRegister(
        rails=[(b, b + 1) for b in base],
        aux=[b + 2 for b in base],
        dump=[b + 3 for b in base],
    )


def cphase_elements(design: CPhaseDesign) -> list[ModeUnitary]:
    """Embedded splitters and the phase shifter, in the order light meets them."""
    N = design.N  # noqa: N806
    register = dual_rail_register(N)
    M = register.mode_count  # noqa: N806
    L = [pair[0] for pair in register.rails]  # noqa: N806
    R = [pair[1] for pair in register.rails]  # noqa: N806
    A, D = register.aux, register.dump  # noqa: N806

    elements = [embed(beam_splitter(design.T1), [L[j], A[j]], M) for j in range(N)]
    elements.append(embed(phase_shifter(design.psi), [A[N - 1]], M))
    elements += [
        embed(beam_splitter(design.T2), [A[j], L[(j + 1) % N]], M) for j in range(N)
    ]
    elements += [embed(beam_splitter(design.T3), [R[j], D[j]], M) for j in range(N)]
    return elements


def build_cphase_network(
    design: CPhaseDesign,
) -> tuple[ModeUnitary, DualRailRegister]:
    """Full mode unitary of the network over ``4N`` modes."""
    return compose(cphase_elements(design)), dual_rail_register(design.N)


def _bits(index: int, N: int) -> tuple[int, ...]:  # noqa: N803
    return tuple((index >> (N - 1 - j)) & 1 for j in range(N))


def _parse_bits(
    basis_state: Sequence[int] | str,
    N: int,  # noqa: N803
) -> tuple[int, ...]:
    bits = tuple(int(b) for b in basis_state)
    if len(bits) != N or any(b not in (0, 1) for b in bits):
        raise ContractViolation(f"expected {N} logical bits, got {basis_state!r}")
    return bits


def analytic_amplitude(
    design: CPhaseDesign, basis_state: Sequence[int] | str
) -> complex:
    """Coincidence amplitude of a logical basis state, in closed form.

    ``basis_state`` lists one bit per qubit, e.g. ``"110"`` or ``(1, 1, 0)``.
    """
    N = design.N  # noqa: N806
    bits = _parse_bits(basis_state, N)
    t1, t2, t3 = _amplitudes(design)
    zeros = bits.count(0)
    if zeros:
        return complex((t1 * t2) ** (N - zeros) * t3**zeros)
    r1, r2 = math.sqrt(1.0 - design.T1), math.sqrt(1.0 - design.T2)
    return (t1 * t2) ** N + cmath.exp(1j * design.psi) * (r1 * r2) ** N


def _occupation(bits: tuple[int, ...], register: DualRailRegister) -> list[int]:
    occ = [0] * register.mode_count
    for bit, (mode_l, mode_r) in zip(bits, register.rails, strict=True):
        occ[mode_l if bit else mode_r] = 1
    return occ


def _rail_occupation(bits: tuple[int, ...]) -> tuple[int, ...]:
    """Occupation of the surviving rail modes (L0, R0, L1, R1, ...)."""
    return tuple(v for bit in bits for v in ((1, 0) if bit else (0, 1)))


# ---------------------------------------------------------------------------
# Effective gate
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class EffectiveGate:
    """Post-selected logical action of a simulated network.

    ``A[y, x]`` is the coincidence amplitude for logical input ``x`` and
    output ``y``.
    """

    A: ComplexMatrix
    success_probability: float
    fidelity: float

    @property
    def conditional_phase(self) -> float:
        """Phase of the all-ones amplitude relative to the all-zeros one."""
        return cmath.phase(complex(self.A[-1, -1] / self.A[0, 0]))


def ideal_cphase(N: int, phi: float) -> ComplexMatrix:  # noqa: N803
    _require_qubits(N)
    diagonal = np.ones(2**N, dtype=np.complex128)
    diagonal[-1] = cmath.exp(1j * phi)
    return np.diag(diagonal)


def ideal_toffoli(N: int) -> ComplexMatrix:  # noqa: N803
    """``H_N U_CP(pi) H_N`` with the Hadamard on the last (target) qubit."""
    hadamard = np.array([[1.0, 1.0], [1.0, -1.0]]) / math.sqrt(2.0)
    conjugation = np.kron(np.eye(2 ** (N - 1)), hadamard)
    return conjugation @ ideal_cphase(N, math.pi) @ conjugation


def gate_fidelity(A: ArrayLike, target: ArrayLike) -> float:  # noqa: N803
    """``|tr(A^dagger T)|^2 / (d tr(A^dagger A))``, insensitive to overall scale."""
    a = np.asarray(A, dtype=np.complex128)
    t = np.asarray(target, dtype=np.complex128)
    weight = float(np.real(np.trace(a.conj().T @ a)))
    if weight == 0.0:
        return 0.0
    overlap = abs(np.trace(a.conj().T @ t)) ** 2
    return float(overlap / (t.shape[0] * weight))


def _simulate_column(
    network: ModeUnitary,
    register: DualRailRegister,
    pattern: DetectionPattern,
    index: int,
) -> ComplexMatrix:
    N = len(register.rails)  # noqa: N806
    state = PureState.basis(_occupation(_bits(index, N), register))
    heralded = post_select(apply_unitary(network, state), pattern)
    column = np.array(
        [heralded.amplitude(_rail_occupation(_bits(y, N))) for y in range(2**N)],
        dtype=np.complex128,
    )
    logger.debug("basis input %d: heralded weight %.6g", index, heralded.norm_squared())
    return column


def effective_gate(design: CPhaseDesign, jobs: int = 1) -> EffectiveGate:
    """Simulate all ``2^N`` logical inputs and assemble the heralded gate.

    Columns are independent; with ``jobs > 1`` they run on a thread pool and
    are merged in basis order.
    """
    if design.N > MAX_SIMULATED_QUBITS:
        raise ContractViolation(
            f"simulation is capped at {MAX_SIMULATED_QUBITS} qubits, got N={design.N}"
        )
    network, register = build_cphase_network(design)
    pattern = DetectionPattern(
        mode_count=register.mode_count,
        counts={m: 0 for m in register.aux + register.dump},
    )
    indices = range(2**design.N)

    def column(index: int) -> ComplexMatrix:
        return _simulate_column(network, register, pattern, index)

    if jobs > 1:
        with ThreadPoolExecutor(max_workers=jobs) as pool:
            columns = list(pool.map(column, indices))
    else:
        columns = [column(i) for i in indices]

    A = np.column_stack(columns)  # noqa: N806
    success = float(np.mean(np.sum(np.abs(A) ** 2, axis=0)))
    fidelity = gate_fidelity(A, ideal_cphase(design.N, design.phi))
    logger.info(
        "effective gate N=%d phi=%.6g: P=%.6g fidelity=%.12f",
        design.N,
        design.phi,
        success,
        fidelity,
    )
    return EffectiveGate(A=A, success_probability=success, fidelity=fidelity)


# ---------------------------------------------------------------------------
# Controlled-U reduction
# ---------------------------------------------------------------------------


class ControlledUDecomposition(NamedTuple):
    """``V`` maps the eigenvectors of U to the computational basis."""

    V: ComplexMatrix
    delta_phi: float
    phi0: float


class ControlledUDesign(NamedTuple):
    decomposition: ControlledUDecomposition
    cphase: CPhaseDesign


def _fix_phase(vector: ComplexMatrix) -> ComplexMatrix:
    pivot = vector[np.flatnonzero(np.abs(vector) > 1e-12)[0]]
    return vector * (abs(pivot) / pivot)


def decompose_controlled_u(U: ArrayLike) -> ControlledUDecomposition:  # noqa: N803
    """Split a single-qubit unitary into a basis change and a conditional phase.

    Eigenvectors are ordered by their overlap with ``|0>`` (larger first),
    ties broken by the smaller eigenphase in ``[0, 2 pi)``.
    """
    u = np.asarray(U, dtype=np.complex128)
    if u.shape != (2, 2):
        raise ContractViolation(f"controlled-U needs a 2x2 matrix, got shape {u.shape}")
    residual = unitarity_residual(u)
    if residual > DESIGN_ATOL:
        raise ContractViolation(f"matrix is not unitary: residual {residual:.3e}")

    triangular, vectors = scipy.linalg.schur(u, output="complex")
    eigenvalues = np.diag(triangular)

    def key(k: int) -> tuple[float, float]:
        overlap = round(float(abs(vectors[0, k])), 12)
        phase = float(np.angle(eigenvalues[k])) % (2.0 * math.pi)
        return (-overlap, phase)

    order = sorted(range(2), key=key)
    basis = np.column_stack([_fix_phase(vectors[:, k]) for k in order])
    phi0 = float(np.angle(eigenvalues[order[0]]))
    phi1 = float(np.angle(eigenvalues[order[1]]))
    return ControlledUDecomposition(V=basis.conj().T, delta_phi=phi1 - phi0, phi0=phi0)


def controlled_u(U: ArrayLike) -> ComplexMatrix:  # noqa: N803
    """``|0><0| (x) I + |1><1| (x) U`` with the control as the first factor."""
    u = np.asarray(U, dtype=np.complex128)
    return np.kron(np.diag([1.0, 0.0]), np.eye(2)) + np.kron(np.diag([0.0, 1.0]), u)


def reconstruct_controlled_u(decomposition: ControlledUDecomposition) -> ComplexMatrix:
    """``(P_c(phi0) (x) V^dagger) CP(delta_phi) (I (x) V)``."""
    v = decomposition.V
    control_phase = np.diag([1.0, cmath.exp(1j * decomposition.phi0)])
    cphase = np.diag([1.0, 1.0, 1.0, cmath.exp(1j * decomposition.delta_phi)])
    return np.kron(control_phase, v.conj().T) @ cphase @ np.kron(np.eye(2), v)


def controlled_u_design(U: ArrayLike) -> ControlledUDesign:  # noqa: N803
    """Decomposition plus the two-qubit network realizing its conditional phase."""
    decomposition = decompose_controlled_u(U)
    return ControlledUDesign(
        decomposition=decomposition,
        cphase=design_cphase(2, decomposition.delta_phi),
    )


__all__ = [
    "MAX_SIMULATED_QUBITS",
    "ControlledUDecomposition",
    "ControlledUDesign",
    "DesignDomainError",
    "DesignInconsistencyError",
    "DesignResiduals",
    "EffectiveGate",
    "analytic_amplitude",
    "build_cphase_network",
    "check_design",
    "controlled_u",
    "controlled_u_design",
    "cphase_elements",
    "decompose_controlled_u",
    "design_cphase",
    "design_from_t1",
    "design_residuals",
    "dual_rail_register",
    "effective_gate",
    "gate_fidelity",
    "heralding_factor",
    "ideal_cphase",
    "ideal_toffoli",
    "reconstruct_controlled_u",
    "success_probability",
]
