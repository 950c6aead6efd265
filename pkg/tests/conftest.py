"""Shared pytest fixtures for the aumai-photongates test suite."""

from __future__ import annotations

import math

import numpy as np
import pytest

from aumai_photongates.circuits import Submatrix43, sigma_max
from aumai_photongates.decorators import ClaimContext
from aumai_photongates.fredkin import analytic_rows, analytic_submatrix
from aumai_photongates.models import CPhaseDesign, FredkinSolution, OptimizerConfig
from aumai_photongates.optimize import ShrinkBound, max_q
from aumai_photongates.runlog import RunLog
from aumai_photongates.toffoli import design_cphase

ANALYTIC_U11 = 0.494
ANALYTIC_U22 = 0.416

# ---------------------------------------------------------------------------
# Random number generation
# ---------------------------------------------------------------------------


@pytest.fixture()
def rng() -> np.random.Generator:
    """Deterministic generator; each test gets a fresh stream."""
    return np.random.default_rng(20240101)


@pytest.fixture()
def embeddable_block(rng: np.random.Generator) -> Submatrix43:
    """Random complex 4x3 block with sigma_max = 0.8."""
    raw = rng.normal(size=(4, 3)) + 1j * rng.normal(size=(4, 3))
    return Submatrix43(0.8 * raw / sigma_max(raw))


@pytest.fixture()
def oversized_block(rng: np.random.Generator) -> Submatrix43:
    """Random complex 4x3 block with sigma_max = 1.2."""
    raw = rng.normal(size=(4, 3)) + 1j * rng.normal(size=(4, 3))
    return Submatrix43(1.2 * raw / sigma_max(raw))


# ---------------------------------------------------------------------------
# Toffoli designs
# ---------------------------------------------------------------------------


@pytest.fixture()
def toffoli_design() -> CPhaseDesign:
    """Optimal three-qubit controlled-pi design."""
    return design_cphase(3, math.pi)


@pytest.fixture()
def cz_design() -> CPhaseDesign:
    """Optimal two-qubit controlled-Z design."""
    return design_cphase(2, math.pi)


# ---------------------------------------------------------------------------
# Fredkin solutions
# ---------------------------------------------------------------------------


@pytest.fixture()
def analytic_block() -> Submatrix43:
    """Analytic-family block at u11=0.494, u22=0.416 with q=0.05."""
    return analytic_submatrix(ANALYTIC_U11, ANALYTIC_U22, 0.05)


@pytest.fixture(scope="session")
def analytic_solution() -> FredkinSolution:
    """Analytic-family solution at its largest embeddable q."""
    bound = max_q(*analytic_rows(ANALYTIC_U11, ANALYTIC_U22))
    assert isinstance(bound, ShrinkBound)
    return bound.solution


# ---------------------------------------------------------------------------
# Configuration and logs
# ---------------------------------------------------------------------------


@pytest.fixture()
def quick_config() -> OptimizerConfig:
    """Optimizer settings small enough for unit tests."""
    return OptimizerConfig(
        starts=3,
        seed=7,
        budget_seconds=60.0,
        grid_points=12,
        max_iterations=300,
    )


@pytest.fixture()
def run_log() -> RunLog:
    """A fresh RunLog instance."""
    return RunLog()


@pytest.fixture()
def claim_context(quick_config: OptimizerConfig, run_log: RunLog) -> ClaimContext:
    """Claim context wired to the quick optimizer settings."""
    return ClaimContext(config=quick_config, run_log=run_log)
