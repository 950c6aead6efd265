"""Pydantic models for aumai-photongates."""

from __future__ import annotations

from datetime import datetime
from enum import Enum
from typing import Annotated

from pydantic import (
    BaseModel,
    BeforeValidator,
    ConfigDict,
    Field,
    NonNegativeInt,
    PlainSerializer,
    computed_field,
    field_validator,
    model_validator,
)


def _parse_complex(value: object) -> object:
    """Accept ``[re, im]`` pairs and real scalars as complex numbers."""
    if isinstance(value, complex):
        return complex(value)
    if isinstance(value, (list, tuple)):
        if len(value) != 2:
            raise ValueError(f"complex pair must have 2 entries, got {len(value)}")
        return complex(float(value[0]), float(value[1]))
    if isinstance(value, (int, float)) and not isinstance(value, bool):
        return complex(value)
    return value


ComplexNumber = Annotated[
    complex,
    BeforeValidator(_parse_complex),
    PlainSerializer(lambda z: [z.real, z.imag], return_type=list[float]),
]


# ---------------------------------------------------------------------------
# Fock-space records
# ---------------------------------------------------------------------------


class FockState(BaseModel):
    """Occupation-number vector over a fixed, ordered set of optical modes."""

    model_config = ConfigDict(frozen=True)

    occupations: tuple[NonNegativeInt, ...]

    @property
    def mode_count(self) -> int:
        return len(self.occupations)

    @property
    def photon_number(self) -> int:
        return sum(self.occupations)


class StateTerm(BaseModel):
    """One serialized amplitude of a :class:`~aumai_photongates.fock.PureState`."""

    occ: list[NonNegativeInt]
    re: float
    im: float


class DetectionPattern(BaseModel):
    """Exact photon-count constraints on a subset of modes.

    Modes absent from ``counts`` are unmeasured and survive post-selection.
    """

    model_config = ConfigDict(frozen=True)

    mode_count: int = Field(ge=0)
    counts: dict[int, NonNegativeInt] = Field(default_factory=dict)

    @model_validator(mode="after")
    def _modes_in_range(self) -> DetectionPattern:
        for mode in self.counts:
            if not 0 <= mode < self.mode_count:
                raise ValueError(
                    f"detected mode {mode} outside register of {self.mode_count} modes"
                )
        return self

    @property
    def measured_modes(self) -> list[int]:
        return sorted(self.counts)

    @property
    def unmeasured_modes(self) -> list[int]:
        return [m for m in range(self.mode_count) if m not in self.counts]


class MatrixPayload(BaseModel):
    """Wire format for complex matrices: separate real and imaginary grids."""

    rows: int = Field(gt=0)
    cols: int = Field(gt=0)
    re: list[list[float]]
    im: list[list[float]]

    @model_validator(mode="after")
    def _shape_matches(self) -> MatrixPayload:
        for name, grid in (("re", self.re), ("im", self.im)):
            if len(grid) != self.rows or any(len(row) != self.cols for row in grid):
                raise ValueError(
                    f"'{name}' grid does not have shape {self.rows}x{self.cols}"
                )
        return self


# ---------------------------------------------------------------------------
# Circuit outcomes
# ---------------------------------------------------------------------------


class Infeasible(BaseModel):
    """A block that cannot sit inside a unitary; ``row`` is the failing row."""

    row: int
    radicand: float


class Singular(BaseModel):
    """A linear design system whose determinant vanished."""

    determinant: float


# ---------------------------------------------------------------------------
# Toffoli / C-phase network
# ---------------------------------------------------------------------------


class CPhaseDesign(BaseModel):
    """Parameters of the coincidence-basis N-qubit controlled-phase network."""

    N: int = Field(ge=1)
    phi: float
    T1: float = Field(gt=0.0, le=1.0)
    T2: float = Field(gt=0.0, le=1.0)
    T3: float = Field(gt=0.0, le=1.0)
    psi: float


class DualRailRegister(BaseModel):
    """Mode bookkeeping of the C-phase network.

    ``rails[j]`` is ``(mode_L, mode_R)`` of qubit *j*; logical one is a photon
    in the L mode.
    """

    rails: list[tuple[int, int]]
    aux: list[int] = Field(default_factory=list)
    dump: list[int] = Field(default_factory=list)

    @model_validator(mode="after")
    def _modes_distinct(self) -> DualRailRegister:
        modes = [m for pair in self.rails for m in pair] + self.aux + self.dump
        if len(set(modes)) != len(modes):
            raise ValueError("dual-rail register reuses a mode index")
        return self

    @property
    def mode_count(self) -> int:
        return 2 * len(self.rails) + len(self.aux) + len(self.dump)


class ToffoliReport(BaseModel):
    """CLI report of a C-phase design and, optionally, its simulation."""

    N: int
    phi: float
    T1: float
    T2: float
    T3: float
    psi: float
    P_succ_analytic: float
    P_succ_simulated: float | None = None
    fidelity: float | None = None
    conditional_phase: float | None = None
    heralding_factor: float


# ---------------------------------------------------------------------------
# Fredkin gate
# ---------------------------------------------------------------------------


class PolarizationQubit(BaseModel):
    """A photon whose H and V polarizations occupy two register modes."""

    mode_H: int = Field(ge=0)
    mode_V: int = Field(ge=0)

    @model_validator(mode="after")
    def _distinct(self) -> PolarizationQubit:
        if self.mode_H == self.mode_V:
            raise ValueError("H and V polarizations must use distinct modes")
        return self


class FredkinSolution(BaseModel):
    """Rows of a conditional-phase block together with its shrink factor."""

    u1: list[ComplexNumber]
    u2: list[ComplexNumber]
    u3: list[ComplexNumber]
    u4: list[ComplexNumber]
    q: ComplexNumber
    P_succ: float = Field(ge=0.0)
    sigma_max: float = Field(ge=0.0)

    @field_validator("u1", "u2", "u3", "u4")
    @classmethod
    def _three_entries(cls, row: list[complex]) -> list[complex]:
        if len(row) != 3:
            raise ValueError(f"block rows have 3 entries, got {len(row)}")
        return row


class FredkinReport(BaseModel):
    """End-to-end simulation summary for a Fredkin solution."""

    q: ComplexNumber
    P_succ_expected: float
    P_succ_simulated: float
    min_fidelity: float
    relative_P_error: float
    cases: dict[str, float] = Field(default_factory=dict)
    ancilla_photons: int
    sequential_reference_P: float
    sequential_reference_photons: int


# ---------------------------------------------------------------------------
# Configuration
# ---------------------------------------------------------------------------


class OptimizerConfig(BaseModel):
    """Settings of the shrink-factor searches."""

    starts: int = Field(default=200, ge=1)
    seed: int = 42
    budget_seconds: float = Field(default=600.0, gt=0.0)
    bisection_tol: float = Field(default=1e-12, gt=0.0)
    simplex_tol: float = Field(default=1e-10, gt=0.0)
    allow_complex: bool = False
    grid_points: int = Field(default=60, ge=2)
    refine: bool = True
    max_iterations: int = Field(default=4000, ge=1)


class AppConfig(BaseModel):
    """Top-level configuration file contents."""

    optimizer: OptimizerConfig = Field(default_factory=OptimizerConfig)
    jobs: int = Field(default=1, ge=1)


# ---------------------------------------------------------------------------
# Run records and reproduction reports
# ---------------------------------------------------------------------------


class RunRecord(BaseModel):
    """A single timestamped event captured during a run."""

    timestamp: datetime
    component: str
    event: str
    details: dict[str, object] = Field(default_factory=dict)


class ClaimStatus(str, Enum):
    """Outcome of one reproduction claim."""

    passed = "passed"
    failed = "failed"
    error = "error"


class ClaimResult(BaseModel):
    """Reference value, computed value and verdict for one claim."""

    claim_id: str
    module: str
    description: str = ""
    reference_value: float | None = None
    computed_value: float | None = None
    tolerance: float | None = None
    status: ClaimStatus
    runtime_ms: float = Field(ge=0.0)
    detail: str = ""


class ReproReport(BaseModel):
    """Complete record of a reproduction-suite run."""

    started_at: datetime
    finished_at: datetime | None = None
    claims: list[ClaimResult] = Field(default_factory=list)

    @computed_field  # type: ignore[prop-decorator]
    @property
    def passed(self) -> bool:
        return all(c.status == ClaimStatus.passed for c in self.claims)


__all__ = [
    "AppConfig",
    "CPhaseDesign",
    "ClaimResult",
    "ClaimStatus",
    "ComplexNumber",
    "DetectionPattern",
    "DualRailRegister",
    "FockState",
    "FredkinReport",
    "FredkinSolution",
    "Infeasible",
    "MatrixPayload",
    "OptimizerConfig",
    "PolarizationQubit",
    "ReproReport",
    "RunRecord",
    "Singular",
    "StateTerm",
    "ToffoliReport",
]
