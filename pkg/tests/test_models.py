"""Tests for aumai_photongates.models — Pydantic data models."""

from __future__ import annotations

import json
from datetime import UTC, datetime

import pytest
from pydantic import ValidationError

from aumai_photongates.models import (
    AppConfig,
    ClaimResult,
    ClaimStatus,
    CPhaseDesign,
    DetectionPattern,
    DualRailRegister,
    FockState,
    FredkinSolution,
    MatrixPayload,
    OptimizerConfig,
    PolarizationQubit,
    ReproReport,
)


def _solution(**overrides: object) -> FredkinSolution:
    data: dict[str, object] = {
        "u1": [0.5, 0.5, 0.5],
        "u2": [-0.4, 0.4, -0.4],
        "u3": [0.0, 0.1, 0.0],
        "u4": [0.0, 0.0, 0.1],
        "q": 0.06,
        "P_succ": 0.06**4 / 4,
        "sigma_max": 0.9,
    }
    data.update(overrides)
    return FredkinSolution.model_validate(data)


# ---------------------------------------------------------------------------
# FockState
# ---------------------------------------------------------------------------


class TestFockState:
    def test_mode_and_photon_counts(self) -> None:
        state = FockState(occupations=(1, 0, 2))
        assert state.mode_count == 3
        assert state.photon_number == 3

    def test_negative_occupation_rejected(self) -> None:
        with pytest.raises(ValidationError):
            FockState(occupations=(1, -1))

    def test_is_hashable(self) -> None:
        assert len({FockState(occupations=(1, 0)), FockState(occupations=(1, 0))}) == 1


# ---------------------------------------------------------------------------
# DetectionPattern
# ---------------------------------------------------------------------------


class TestDetectionPattern:
    def test_measured_and_unmeasured_modes(self) -> None:
        pattern = DetectionPattern(mode_count=4, counts={3: 0, 1: 1})
        assert pattern.measured_modes == [1, 3]
        assert pattern.unmeasured_modes == [0, 2]

    def test_mode_outside_register_rejected(self) -> None:
        with pytest.raises(ValidationError):
            DetectionPattern(mode_count=2, counts={2: 0})

    def test_empty_pattern_measures_nothing(self) -> None:
        pattern = DetectionPattern(mode_count=3)
        assert pattern.unmeasured_modes == [0, 1, 2]


# ---------------------------------------------------------------------------
# MatrixPayload
# ---------------------------------------------------------------------------


class TestMatrixPayload:
    def test_valid_shape(self) -> None:
        payload = MatrixPayload(
            rows=1, cols=2, re=[[1.0, 0.0]], im=[[0.0, 1.0]]
        )
        assert payload.cols == 2

    def test_ragged_grid_rejected(self) -> None:
        with pytest.raises(ValidationError, match="'im' grid"):
            MatrixPayload(rows=1, cols=2, re=[[1.0, 0.0]], im=[[0.0]])

    def test_row_count_mismatch_rejected(self) -> None:
        with pytest.raises(ValidationError):
            MatrixPayload(rows=2, cols=1, re=[[1.0]], im=[[0.0]])


# ---------------------------------------------------------------------------
# Designs and registers
# ---------------------------------------------------------------------------


class TestCPhaseDesign:
    def test_transmittance_bounds(self) -> None:
        with pytest.raises(ValidationError):
            CPhaseDesign(N=2, phi=3.14, T1=0.0, T2=0.5, T3=0.5, psi=0.0)

    def test_qubit_count_positive(self) -> None:
        with pytest.raises(ValidationError):
            CPhaseDesign(N=0, phi=3.14, T1=0.5, T2=0.5, T3=0.25, psi=0.0)


class TestDualRailRegister:
    def test_mode_count(self) -> None:
        register = DualRailRegister(rails=[(0, 1), (4, 5)], aux=[2, 6], dump=[3, 7])
        assert register.mode_count == 8

    def test_reused_mode_rejected(self) -> None:
        with pytest.raises(ValidationError, match="reuses"):
            DualRailRegister(rails=[(0, 1)], aux=[1])


class TestPolarizationQubit:
    def test_same_mode_rejected(self) -> None:
        with pytest.raises(ValidationError):
            PolarizationQubit(mode_H=2, mode_V=2)


# ---------------------------------------------------------------------------
# FredkinSolution and complex serialization
# ---------------------------------------------------------------------------


class TestFredkinSolution:
    def test_complex_pairs_are_parsed(self) -> None:
        solution = _solution(u3=[[0.0, 1.0], 0.5, [0.25, -0.25]])
        assert solution.u3 == [1j, 0.5 + 0j, 0.25 - 0.25j]

    def test_complex_instances_accepted(self) -> None:
        solution = _solution(q=0.06 + 0.01j)
        assert solution.q == 0.06 + 0.01j

    def test_serializes_complex_as_pairs(self) -> None:
        data = json.loads(_solution(q=0.06 + 0.01j).model_dump_json())
        assert data["q"] == [0.06, 0.01]
        assert data["u1"][0] == [0.5, 0.0]

    def test_json_roundtrip_preserves_rows(self) -> None:
        original = _solution(u4=[[0.0, 0.1], 0.0, -0.1])
        restored = FredkinSolution.model_validate_json(original.model_dump_json())
        assert restored == original

    def test_row_length_enforced(self) -> None:
        with pytest.raises(ValidationError, match="3 entries"):
            _solution(u1=[0.5, 0.5])

    def test_bad_pair_rejected(self) -> None:
        with pytest.raises(ValidationError):
            _solution(q=[0.1, 0.2, 0.3])

    def test_negative_probability_rejected(self) -> None:
        with pytest.raises(ValidationError):
            _solution(P_succ=-1e-9)


# ---------------------------------------------------------------------------
# Configuration
# ---------------------------------------------------------------------------


class TestOptimizerConfig:
    def test_defaults(self) -> None:
        config = OptimizerConfig()
        assert config.starts == 200
        assert config.seed == 42
        assert config.budget_seconds == 600.0
        assert config.allow_complex is False

    def test_budget_must_be_positive(self) -> None:
        with pytest.raises(ValidationError):
            OptimizerConfig(budget_seconds=0.0)

    def test_starts_must_be_positive(self) -> None:
        with pytest.raises(ValidationError):
            OptimizerConfig(starts=0)


class TestAppConfig:
    def test_nested_optimizer_from_dict(self) -> None:
        config = AppConfig.model_validate({"jobs": 4, "optimizer": {"starts": 10}})
        assert config.jobs == 4
        assert config.optimizer.starts == 10
        assert config.optimizer.seed == 42

    def test_jobs_must_be_positive(self) -> None:
        with pytest.raises(ValidationError):
            AppConfig(jobs=0)


# ---------------------------------------------------------------------------
# Reports
# ---------------------------------------------------------------------------


def _claim(status: ClaimStatus) -> ClaimResult:
    return ClaimResult(claim_id="c", module="m", status=status, runtime_ms=1.0)


class TestReproReport:
    def test_empty_report_passes(self) -> None:
        assert ReproReport(started_at=datetime.now(tz=UTC)).passed is True

    def test_any_failure_fails_report(self) -> None:
        report = ReproReport(
            started_at=datetime.now(tz=UTC),
            claims=[_claim(ClaimStatus.passed), _claim(ClaimStatus.failed)],
        )
        assert report.passed is False

    def test_error_fails_report(self) -> None:
        report = ReproReport(
            started_at=datetime.now(tz=UTC), claims=[_claim(ClaimStatus.error)]
        )
        assert report.passed is False

    def test_passed_is_serialized(self) -> None:
        report = ReproReport(
            started_at=datetime.now(tz=UTC), claims=[_claim(ClaimStatus.passed)]
        )
        assert report.model_dump(mode="json")["passed"] is True

    def test_negative_runtime_rejected(self) -> None:
        with pytest.raises(ValidationError):
            ClaimResult(claim_id="c", module="m", status="passed", runtime_ms=-1.0)
