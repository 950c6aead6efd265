"""Fock-space engine: multimode photonic states and linear interferometers.

Conventions follow the creation-operator picture: an interferometer ``U``
maps ``a_in_j^dagger -> sum_k U[j, k] a_out_k^dagger``, so rows index input
modes and a single photon entering mode ``j`` leaves mode ``k`` with
amplitude ``U[j, k]``.  Applying ``U1`` and then ``U2`` is the matrix
``U1 @ U2``.
"""

from __future__ import annotations

import itertools
import json
import logging
import math
from collections import defaultdict
from collections.abc import Iterable, Iterator, Mapping, Sequence

import numpy as np
from numpy.typing import ArrayLike, NDArray

from aumai_photongates.models import (
    DetectionPattern,
    FockState,
    MatrixPayload,
    StateTerm,
)

logger = logging.getLogger(__name__)

ComplexMatrix = NDArray[np.complex128]
Occupation = tuple[int, ...]

UNITARY_ATOL = 1e-10
NORM_ATOL = 1e-10
PRUNE_THRESHOLD = 1e-14

_RYSER_CHUNK = 1 << 14

# ---------------------------------------------------------------------------
# Custom exceptions
# ---------------------------------------------------------------------------


class PhotonicsError(Exception):
    """Root of all errors raised by aumai-photongates."""


class ContractViolation(PhotonicsError, ValueError):
    """An operation was called outside its precondition."""


class CoherenceError(PhotonicsError, RuntimeError):
    """Heralded branches differ and cannot be merged into one pure state."""


# ---------------------------------------------------------------------------
# ModeUnitary
# ---------------------------------------------------------------------------


def matrix_to_payload(matrix: ArrayLike) -> MatrixPayload:
    """Split a complex matrix into the ``re`` / ``im`` wire form.

    Args:
        matrix: Any 2-D array-like; real input gets a zero ``im`` part.

    Returns:
        A :class:`MatrixPayload` ready for ``model_dump_json``.

    Example::

        payload = matrix_to_payload([[0.6, 0.8j], [0.8j, 0.6]])
        payload.im[0][1]  # 0.8
    """
    array = np.asarray(matrix, dtype=np.complex128)
    rows, cols = array.shape
    return MatrixPayload(
        rows=rows, cols=cols, re=array.real.tolist(), im=array.imag.tolist()
    )


def matrix_from_payload(payload: MatrixPayload) -> ComplexMatrix:
    return np.array(payload.re, dtype=np.float64) + 1j * np.array(
        payload.im, dtype=np.float64
    )


def unitarity_residual(matrix: ArrayLike) -> float:
    """Frobenius norm of ``U^dagger U - I``."""
    u = np.asarray(matrix, dtype=np.complex128)
    return float(np.linalg.norm(u.conj().T @ u - np.eye(u.shape[0])))


class ModeUnitary:
    """Immutable M x M unitary acting on mode creation operators."""

    __slots__ = ("_matrix",)

    def __init__(
        self,
        matrix: ArrayLike,
        *,
        check: bool = True,
        atol: float = UNITARY_ATOL,
    ) -> None:
        array = np.array(matrix, dtype=np.complex128)
        if array.ndim != 2 or array.shape[0] != array.shape[1]:
            raise ContractViolation(
                f"mode unitary must be square, got shape {array.shape}"
            )
        if check:
            residual = unitarity_residual(array)
            if residual > atol:
                raise ContractViolation(
                    f"matrix is not unitary: |U^dagger U - I|_F = {residual:.3e}"
                )
        array.setflags(write=False)
        self._matrix = array

    @classmethod
    def identity(cls, size: int) -> ModeUnitary:
        return cls(np.eye(size), check=False)

    @property
    def matrix(self) -> ComplexMatrix:
        return self._matrix

    @property
    def size(self) -> int:
        return int(self._matrix.shape[0])

    def dagger(self) -> ModeUnitary:
        return ModeUnitary(self._matrix.conj().T, check=False)

    def to_payload(self) -> MatrixPayload:
        return matrix_to_payload(self._matrix)

    @classmethod
    def from_payload(cls, payload: MatrixPayload) -> ModeUnitary:
        return cls(matrix_from_payload(payload))

    def __repr__(self) -> str:
        return f"ModeUnitary(size={self.size})"


def _as_matrix(unitary: ModeUnitary | ArrayLike) -> ComplexMatrix:
    if isinstance(unitary, ModeUnitary):
        return unitary.matrix
    array = np.asarray(unitary, dtype=np.complex128)
    if array.ndim != 2 or array.shape[0] != array.shape[1]:
        raise ContractViolation(f"expected a square matrix, got shape {array.shape}")
    return array


def _occupations(state: FockState | Sequence[int]) -> Occupation:
    if isinstance(state, FockState):
        return state.occupations
    occ = tuple(int(n) for n in state)
    if any(n < 0 for n in occ):
        raise ContractViolation(f"negative occupation in {occ}")
    return occ


# ---------------------------------------------------------------------------
# PureState
# ---------------------------------------------------------------------------


class PureState:
    """Sparse superposition of Fock states over ``mode_count`` modes.

    Amplitudes with modulus below :data:`PRUNE_THRESHOLD` are never stored.
    Post-selected states are subnormalized; their squared norm is the
    probability of the heralding pattern.  A fully measured state has zero
    modes and at most one (empty) term.
    """

    __slots__ = ("_mode_count", "_terms")

    def __init__(
        self,
        terms: Mapping[Occupation, complex] | Iterable[tuple[Occupation, complex]],
        mode_count: int,
    ) -> None:
        if mode_count < 0:
            raise ContractViolation(f"mode_count must be >= 0, got {mode_count}")
        items = terms.items() if isinstance(terms, Mapping) else terms
        stored: dict[Occupation, complex] = {}
        for occ, amplitude in items:
            key = _occupations(occ)
            if len(key) != mode_count:
                raise ContractViolation(
                    f"occupation {key} does not span {mode_count} modes"
                )
            value = complex(amplitude)
            if abs(value) >= PRUNE_THRESHOLD:
                stored[key] = stored.get(key, 0j) + value
        self._terms = {k: v for k, v in stored.items() if abs(v) >= PRUNE_THRESHOLD}
        self._mode_count = mode_count

    @classmethod
    def basis(cls, occupation: FockState | Sequence[int]) -> PureState:
        occ = _occupations(occupation)
        return cls({occ: 1.0}, len(occ))

    @classmethod
    def zero(cls, mode_count: int) -> PureState:
        return cls({}, mode_count)

    @property
    def mode_count(self) -> int:
        return self._mode_count

    @property
    def terms(self) -> dict[Occupation, complex]:
        return dict(self._terms)

    def __len__(self) -> int:
        return len(self._terms)

    def items(self) -> Iterator[tuple[FockState, complex]]:
        """Yield ``(FockState, amplitude)`` in lexicographic occupation order."""
        for occ in sorted(self._terms):
            yield FockState(occupations=occ), self._terms[occ]

    def amplitude(self, occupation: FockState | Sequence[int]) -> complex:
        return self._terms.get(_occupations(occupation), 0j)

    def norm_squared(self) -> float:
        return float(sum(abs(a) ** 2 for a in self._terms.values()))

    def norm(self) -> float:
        return math.sqrt(self.norm_squared())

    def is_zero(self) -> bool:
        return not self._terms

    def photon_numbers(self) -> set[int]:
        return {sum(occ) for occ in self._terms}

    def inner(self, other: PureState) -> complex:
        """Return ``<self|other>``."""
        self._require_same_modes(other)
        return complex(
            sum(
                a.conjugate() * other._terms.get(occ, 0j)
                for occ, a in self._terms.items()
            )
        )

    def scaled(self, factor: complex) -> PureState:
        scaled = {k: v * factor for k, v in self._terms.items()}
        return PureState(scaled, self._mode_count)

    def normalized(self) -> PureState:
        norm = self.norm()
        if norm == 0.0:
            raise ContractViolation("cannot normalize the zero state")
        return self.scaled(1.0 / norm)

    def __add__(self, other: PureState) -> PureState:
        self._require_same_modes(other)
        merged: dict[Occupation, complex] = defaultdict(complex, self._terms)
        for occ, amplitude in other._terms.items():
            merged[occ] += amplitude
        return PureState(merged, self._mode_count)

    def tensor(self, other: PureState) -> PureState:
        """Product state with ``other``'s modes appended after ours."""
        terms = {
            a + b: x * y
            for (a, x), (b, y) in itertools.product(
                self._terms.items(), other._terms.items()
            )
        }
        return PureState(terms, self._mode_count + other._mode_count)

    def _require_same_modes(self, other: PureState) -> None:
        if other.mode_count != self._mode_count:
            raise ContractViolation(
                f"mode-count mismatch: {self._mode_count} vs {other.mode_count}"
            )

    # -- serialization ------------------------------------------------------

    def to_terms(self) -> list[StateTerm]:
        return [
            StateTerm(occ=list(occ), re=amp.real, im=amp.imag)
            for occ, amp in sorted(self._terms.items())
        ]

    @classmethod
    def from_terms(cls, terms: Sequence[StateTerm], mode_count: int) -> PureState:
        return cls(
            ((tuple(t.occ), complex(t.re, t.im)) for t in terms), mode_count
        )

    def to_json(self) -> str:
        return json.dumps([t.model_dump() for t in self.to_terms()])

    @classmethod
    def from_json(cls, raw: str, mode_count: int) -> PureState:
        data = json.loads(raw)
        return cls.from_terms([StateTerm(**item) for item in data], mode_count)

    def __repr__(self) -> str:
        return f"PureState(modes={self._mode_count}, terms={len(self._terms)})"


# ---------------------------------------------------------------------------
# Permanents and transition amplitudes
# ---------------------------------------------------------------------------


def permanent(matrix: ArrayLike) -> complex:
    """Matrix permanent by Ryser's formula walked in Gray-code order.

    Each step adds or removes one column from the running row sums, giving
    O(2^n * n) work.  The walk is vectorized in chunks.

    Example::

        permanent([[1, 2], [3, 4]])  # (10+0j)
    """
    a = np.asarray(matrix, dtype=np.complex128)
    if a.ndim != 2 or a.shape[0] != a.shape[1]:
        raise ContractViolation(f"permanent needs a square matrix, got {a.shape}")
    n = a.shape[0]
    if n == 0:
        return 1.0 + 0.0j
    if n == 1:
        return complex(a[0, 0])

    columns = a.T
    row_sums = np.zeros(n, dtype=np.complex128)
    total = 0.0 + 0.0j
    end = 1 << n
    for start in range(1, end, _RYSER_CHUNK):
        k = np.arange(start, min(start + _RYSER_CHUNK, end), dtype=np.int64)
        gray = k ^ (k >> 1)
        flipped = np.rint(np.log2(k & -k)).astype(np.int64)
        direction = np.where((gray >> flipped) & 1, 1.0, -1.0)
        sums = row_sums + np.cumsum(columns[flipped] * direction[:, None], axis=0)
        row_sums = sums[-1]
        # popcount(gray_k) changes by one per step, so its parity is k's
        sign = 1.0 - 2.0 * (k & 1)
        total += complex(np.sum(sign * np.prod(sums, axis=1)))
    return complex((-1) ** n * total)


def _repeat_modes(occupation: Occupation) -> list[int]:
    return [mode for mode, count in enumerate(occupation) for _ in range(count)]


def transition_amplitude(
    unitary: ModeUnitary | ArrayLike,
    source: FockState | Sequence[int],
    target: FockState | Sequence[int],
) -> complex:
    """Return ``<target| U |source>``.

    Photon-number changing transitions have amplitude 0.
    """
    u = _as_matrix(unitary)
    n_in = _occupations(source)
    n_out = _occupations(target)
    size = u.shape[0]
    if len(n_in) != size or len(n_out) != size:
        raise ContractViolation(
            f"occupations span {len(n_in)}/{len(n_out)} modes, unitary has {size}"
        )
    if sum(n_in) != sum(n_out):
        return 0.0 + 0.0j
    sub = u[np.ix_(_repeat_modes(n_in), _repeat_modes(n_out))]
    norm = math.prod(math.factorial(n) for n in n_in) * math.prod(
        math.factorial(m) for m in n_out
    )
    return permanent(sub) / math.sqrt(norm)


def fock_states(mode_count: int, photons: int) -> Iterator[Occupation]:
    """Yield every occupation of ``photons`` bosons over ``mode_count`` modes."""
    modes = range(mode_count)
    for placement in itertools.combinations_with_replacement(modes, photons):
        occ = [0] * mode_count
        for mode in placement:
            occ[mode] += 1
        yield tuple(occ)


def active_modes(unitary: ModeUnitary | ArrayLike) -> list[int]:
    """Modes on which ``unitary`` differs from the identity."""
    u = _as_matrix(unitary)
    deviation = np.abs(u - np.eye(u.shape[0]))
    idle = np.all(deviation == 0.0, axis=0) & np.all(deviation == 0.0, axis=1)
    return [int(m) for m in np.flatnonzero(~idle)]


def _local_transitions(
    local_u: ComplexMatrix, local_in: Occupation
) -> list[tuple[Occupation, complex]]:
    out: list[tuple[Occupation, complex]] = []
    for local_out in fock_states(len(local_in), sum(local_in)):
        amplitude = transition_amplitude(local_u, local_in, local_out)
        if abs(amplitude) >= PRUNE_THRESHOLD:
            out.append((local_out, amplitude))
    return out


def apply_unitary(unitary: ModeUnitary | ArrayLike, state: PureState) -> PureState:
    """Evolve ``state`` through ``unitary``.

    Only the active modes of ``unitary`` are expanded, and transitions are
    memoized per distinct local occupation, so embedded few-mode elements
    stay cheap on large registers.
    """
    u = _as_matrix(unitary)
    if u.shape[0] != state.mode_count:
        raise ContractViolation(
            f"unitary acts on {u.shape[0]} modes, state has {state.mode_count}"
        )
    modes = active_modes(u)
    if not modes:
        return state
    local_u = u[np.ix_(modes, modes)]
    cache: dict[Occupation, list[tuple[Occupation, complex]]] = {}
    evolved: dict[Occupation, complex] = defaultdict(complex)
    for occ, amplitude in state.terms.items():
        local_in = tuple(occ[m] for m in modes)
        transitions = cache.get(local_in)
        if transitions is None:
            transitions = _local_transitions(local_u, local_in)
            cache[local_in] = transitions
        scratch = list(occ)
        for local_out, coefficient in transitions:
            for mode, count in zip(modes, local_out, strict=True):
                scratch[mode] = count
            evolved[tuple(scratch)] += amplitude * coefficient
    logger.debug(
        "applied %d-mode element: %d -> %d terms", len(modes), len(state), len(evolved)
    )
    return PureState(evolved, state.mode_count)


# ---------------------------------------------------------------------------
# Measurement
# ---------------------------------------------------------------------------


def post_select(state: PureState, pattern: DetectionPattern) -> PureState:
    """Keep the branch matching ``pattern`` and drop the measured modes.

    The result is subnormalized; its squared norm is the probability of
    observing the pattern.
    """
    if pattern.mode_count != state.mode_count:
        raise ContractViolation(
            f"pattern covers {pattern.mode_count} modes, state has {state.mode_count}"
        )
    constraints = list(pattern.counts.items())
    kept = pattern.unmeasured_modes
    survivors: dict[Occupation, complex] = {}
    for occ, amplitude in state.terms.items():
        if all(occ[mode] == count for mode, count in constraints):
            survivors[tuple(occ[m] for m in kept)] = amplitude
    return PureState(survivors, len(kept))


def coarse_grain(branches: Sequence[PureState], atol: float = NORM_ATOL) -> PureState:
    """Merge heralded branches that carry the same state after feed-forward.

    The returned pure state has the direction of the branches and a squared
    norm equal to the summed branch probabilities.
    """
    if not branches:
        raise ContractViolation("coarse_grain needs at least one branch")
    live = [b for b in branches if not b.is_zero()]
    if not live:
        return PureState.zero(branches[0].mode_count)
    reference = live[0].normalized()
    total = 0.0
    for branch in live:
        overlap = abs(reference.inner(branch))
        norm = branch.norm()
        if abs(overlap - norm) > atol * max(1.0, norm):
            raise CoherenceError(
                f"branch overlap {overlap:.3e} differs from its norm {norm:.3e}"
            )
        total += branch.norm_squared()
    return reference.scaled(math.sqrt(total))


__all__ = [
    "CoherenceError",
    "ContractViolation",
    "ModeUnitary",
    "PhotonicsError",
    "PureState",
    "active_modes",
    "apply_unitary",
    "coarse_grain",
    "fock_states",
    "matrix_from_payload",
    "matrix_to_payload",
    "permanent",
    "post_select",
    "transition_amplitude",
    "unitarity_residual",
]
