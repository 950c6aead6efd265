"""Optical elements, their composition, and 4x3 -> 7x7 unitary completion."""

from __future__ import annotations

import functools
import logging
import math
from collections.abc import Iterable, Mapping, Sequence
from typing import NamedTuple

import numpy as np
import scipy.linalg
from numpy.typing import ArrayLike
from scipy.stats import unitary_group

from aumai_photongates.fock import (
    ComplexMatrix,
    ContractViolation,
    ModeUnitary,
    PhotonicsError,
    matrix_from_payload,
    matrix_to_payload,
    unitarity_residual,
)
from aumai_photongates.models import DetectionPattern, Infeasible, MatrixPayload

logger = logging.getLogger(__name__)

EMBED_ATOL = 1e-10
RADICAND_FLOOR = -1e-12
PIVOT_ATOL = 1e-10
GRAM_SCHMIDT_ATOL = 1e-8

# ---------------------------------------------------------------------------
# Custom exceptions
# ---------------------------------------------------------------------------


class DegeneratePivotError(PhotonicsError, ArithmeticError):
    """A vanishing completion pivot must absorb a nonzero row overlap."""

    def __init__(self, row: int, pivot: float, overlap: float) -> None:
        super().__init__(
            f"row {row}: pivot {pivot:.3e} cannot absorb overlap {overlap:.3e}"
        )
        self.row = row
        self.pivot = pivot
        self.overlap = overlap


# ---------------------------------------------------------------------------
# Elements
# ---------------------------------------------------------------------------


def beam_splitter(T: float) -> ModeUnitary:  # noqa: N803
    """Real-orthogonal splitter ``[[t, r], [-r, t]]`` of intensity transmittance T."""
    if not 0.0 < T <= 1.0:
        raise ContractViolation(
            f"beam splitter transmittance must be in (0, 1], got {T}"
        )
    t = math.sqrt(T)
    r = math.sqrt(1.0 - T)
    return ModeUnitary([[t, r], [-r, t]], check=False)


def phase_shifter(psi: float) -> ModeUnitary:
    """One-mode phase element ``exp(i psi)``.

    Args:
        psi: Phase in radians; must be finite.

    Returns:
        A 1x1 :class:`ModeUnitary`, ready for :func:`embed`.

    Example::

        shifted = embed(phase_shifter(math.pi / 2), [1], 3)
        shifted.matrix[1, 1]  # ~1j
    """
    if not math.isfinite(psi):
        raise ContractViolation(f"phase must be finite, got {psi}")
    return ModeUnitary([[complex(math.cos(psi), math.sin(psi))]], check=False)


def mode_swap() -> ModeUnitary:
    """Exchange of two modes, e.g. a polarizing beam splitter's V port."""
    return ModeUnitary([[0.0, 1.0], [1.0, 0.0]], check=False)


def embed(
    small: ModeUnitary, target_modes: Sequence[int], mode_count: int
) -> ModeUnitary:
    """Place ``small`` on ``target_modes`` of an ``mode_count``-mode register.

    Modes not named keep the identity.

    Raises:
        ContractViolation: if the target count does not match ``small`` or a
            target is out of range or repeated.
    """
    modes = list(target_modes)
    if len(modes) != small.size:
        raise ContractViolation(
            f"{small.size}-mode element given {len(modes)} target modes"
        )
    if len(set(modes)) != len(modes):
        raise ContractViolation(f"target modes collide: {modes}")
    if any(not 0 <= m < mode_count for m in modes):
        raise ContractViolation(f"target modes {modes} outside 0..{mode_count - 1}")
    full = np.eye(mode_count, dtype=np.complex128)
    full[np.ix_(modes, modes)] = small.matrix
    return ModeUnitary(full, check=False)


def compose(elements: Sequence[ModeUnitary]) -> ModeUnitary:
    """Matrix of the elements applied in order, first element first."""
    if not elements:
        raise ContractViolation("compose needs at least one element")
    sizes = {e.size for e in elements}
    if len(sizes) != 1:
        raise ContractViolation(f"cannot compose elements of sizes {sorted(sizes)}")
    product = functools.reduce(np.matmul, (e.matrix for e in elements))
    return ModeUnitary(product)


def random_unitary(
    size: int, rng: np.random.Generator | int | None = None
) -> ModeUnitary:
    """Haar-random unitary."""
    if size == 1:
        generator = np.random.default_rng(rng)
        angle = generator.uniform(0.0, 2.0 * math.pi)
        return phase_shifter(angle)
    return ModeUnitary(unitary_group.rvs(size, random_state=rng))


# ---------------------------------------------------------------------------
# Labelled registers
# ---------------------------------------------------------------------------


class ModeRegister:
    """Ordered, named optical modes; elements are placed by label."""

    __slots__ = ("_index", "_labels")

    def __init__(self, labels: Sequence[str]) -> None:
        self._labels = tuple(labels)
        if len(set(self._labels)) != len(self._labels):
            raise ContractViolation(f"duplicate mode labels in {self._labels}")
        self._index = {label: i for i, label in enumerate(self._labels)}

    @property
    def labels(self) -> tuple[str, ...]:
        return self._labels

    @property
    def size(self) -> int:
        return len(self._labels)

    def index(self, label: str) -> int:
        try:
            return self._index[label]
        except KeyError:
            raise ContractViolation(f"unknown mode label '{label}'") from None

    def embed(self, small: ModeUnitary, labels: Sequence[str]) -> ModeUnitary:
        return embed(small, [self.index(label) for label in labels], self.size)

    def occupation(self, counts: Mapping[str, int]) -> tuple[int, ...]:
        occ = [0] * self.size
        for label, count in counts.items():
            occ[self.index(label)] += count
        return tuple(occ)

    def pattern(self, counts: Mapping[str, int]) -> DetectionPattern:
        return DetectionPattern(
            mode_count=self.size,
            counts={self.index(label): n for label, n in counts.items()},
        )

    def without(self, labels: Iterable[str]) -> ModeRegister:
        dropped = set(labels)
        return ModeRegister([label for label in self._labels if label not in dropped])

    def __repr__(self) -> str:
        return f"ModeRegister({list(self._labels)})"


# ---------------------------------------------------------------------------
# Embeddability
# ---------------------------------------------------------------------------


class Embeddability(NamedTuple):
    embeddable: bool
    margin: float


def sigma_max(matrix: ArrayLike) -> float:
    """Largest singular value."""
    array = np.asarray(matrix, dtype=np.complex128)
    if array.size == 0:
        return 0.0
    return float(scipy.linalg.svdvals(array)[0])


class Submatrix43:
    """The 4x3 block of a 7-mode interferometer.

    Rows are input modes 1-4, columns are output modes 1-3.
    """

    SHAPE = (4, 3)

    __slots__ = ("_matrix",)

    def __init__(self, matrix: ArrayLike) -> None:
        array = np.array(matrix, dtype=np.complex128)
        if array.shape != self.SHAPE:
            raise ContractViolation(f"expected a 4x3 block, got shape {array.shape}")
        array.setflags(write=False)
        self._matrix = array

    @classmethod
    def from_rows(
        cls,
        u1: ArrayLike,
        u2: ArrayLike,
        u3: ArrayLike,
        u4: ArrayLike,
    ) -> Submatrix43:
        rows = [np.asarray(r, dtype=np.complex128) for r in (u1, u2, u3, u4)]
        return cls(np.vstack(rows))

    @classmethod
    def from_payload(cls, payload: MatrixPayload) -> Submatrix43:
        return cls(matrix_from_payload(payload))

    def to_payload(self) -> MatrixPayload:
        return matrix_to_payload(self._matrix)

    @property
    def matrix(self) -> ComplexMatrix:
        return self._matrix

    def row(self, index: int) -> ComplexMatrix:
        return self._matrix[index]

    def __repr__(self) -> str:
        return f"Submatrix43(sigma_max={sigma_max(self._matrix):.6g})"


def is_embeddable(sub: Submatrix43 | ArrayLike) -> Embeddability:
    """Whether ``sub`` can sit inside a unitary, with margin ``1 - sigma_max``."""
    matrix = sub.matrix if isinstance(sub, Submatrix43) else np.asarray(sub)
    sigma = sigma_max(matrix)
    return Embeddability(embeddable=sigma <= 1.0 + EMBED_ATOL, margin=1.0 - sigma)


# ---------------------------------------------------------------------------
# Completion
# ---------------------------------------------------------------------------


def _orthonormal_extension(rows: ComplexMatrix, size: int) -> ComplexMatrix:
    """Append canonical basis vectors, Gram-Schmidt'd in index order."""
    basis = [r for r in rows]
    for index in range(size):
        if len(basis) == size:
            break
        vector = np.zeros(size, dtype=np.complex128)
        vector[index] = 1.0
        for _ in range(2):
            for existing in basis:
                vector = vector - np.vdot(existing, vector) * existing
        norm = float(np.linalg.norm(vector))
        if norm > GRAM_SCHMIDT_ATOL:
            basis.append(vector / norm)
    if len(basis) != size:
        raise ContractViolation(f"could only extend to {len(basis)} of {size} rows")
    return np.vstack(basis)


def complete_to_unitary(sub: Submatrix43) -> ModeUnitary | Infeasible:
    """Complete a 4x3 block to a 7x7 unitary, row by row.

    Row ``j`` is padded with a real non-negative pivot in column ``j + 3``
    that normalizes it, and later rows receive column ``j + 3`` entries
    making them orthogonal to row ``j``.  A negative radicand means the block
    cannot sit inside any unitary and yields :class:`Infeasible`.

    Raises:
        DegeneratePivotError: if a zero pivot meets a nonzero overlap.
    """
    rows, cols = Submatrix43.SHAPE
    size = rows + cols
    iso = np.zeros((rows, size), dtype=np.complex128)
    iso[:, :cols] = sub.matrix

    for j in range(rows):
        pivot_col = j + cols
        radicand = 1.0 - float(np.sum(np.abs(iso[j, :pivot_col]) ** 2))
        if radicand < RADICAND_FLOOR:
            logger.debug("completion infeasible at row %d (radicand %.3e)", j, radicand)
            return Infeasible(row=j, radicand=radicand)
        pivot = math.sqrt(max(radicand, 0.0))
        iso[j, pivot_col] = pivot
        for k in range(j + 1, rows):
            overlap = np.vdot(iso[j, :pivot_col], iso[k, :pivot_col])
            if pivot < PIVOT_ATOL:
                if abs(overlap) > PIVOT_ATOL:
                    raise DegeneratePivotError(j, pivot, abs(overlap))
                continue
            iso[k, pivot_col] = -overlap / pivot

    full = _orthonormal_extension(iso, size)
    full[:rows, :cols] = sub.matrix
    residual = unitarity_residual(full)
    if residual > EMBED_ATOL:
        logger.warning("completed unitary off by %.3e (Frobenius)", residual)
    return ModeUnitary(full, check=False)


__all__ = [
    "DegeneratePivotError",
    "Embeddability",
    "ModeRegister",
    "Submatrix43",
    "beam_splitter",
    "complete_to_unitary",
    "compose",
    "embed",
    "is_embeddable",
    "mode_swap",
    "phase_shifter",
    "random_unitary",
    "sigma_max",
]
