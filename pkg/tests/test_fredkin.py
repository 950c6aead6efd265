"""Tests for aumai_photongates.fredkin — phase blocks and the nine-photon gate."""

from __future__ import annotations

import math

import numpy as np
import pytest

from aumai_photongates.circuits import (
    Submatrix43,
    complete_to_unitary,
    is_embeddable,
)
from aumai_photongates.fock import ContractViolation, ModeUnitary
from aumai_photongates.fredkin import (
    ANCILLA_PHOTONS,
    SEQUENTIAL_REFERENCE_P,
    BlockConditionError,
    analytic_rows,
    analytic_submatrix,
    build_cps_block,
    condition_residuals,
    conditional_amplitudes_oracle,
    design_matrix,
    fredkin_register,
    fredkin_report,
    ideal_fredkin,
    logical_basis,
    parity_check,
    simulate_fredkin,
    simulate_mach_zehnder,
    solution_from_rows,
    solve_for_rows,
    verify_solution,
    x_coeffs,
    y_coeffs,
)
from aumai_photongates.models import FredkinSolution, Singular

# ---------------------------------------------------------------------------
# Heralded amplitudes
# ---------------------------------------------------------------------------


class TestAmplitudePolynomials:
    def test_match_fock_oracle(self, embeddable_block: Submatrix43) -> None:
        completed = complete_to_unitary(embeddable_block)
        assert isinstance(completed, ModeUnitary)
        np.testing.assert_allclose(
            x_coeffs(embeddable_block),
            conditional_amplitudes_oracle(completed, 3),
            atol=1e-10,
        )
        np.testing.assert_allclose(
            y_coeffs(embeddable_block),
            conditional_amplitudes_oracle(completed, 4),
            atol=1e-10,
        )

    def test_design_matrix_is_linear_in_third_row(
        self, embeddable_block: Submatrix43
    ) -> None:
        rows = embeddable_block.matrix
        m = design_matrix(rows[0], rows[1])
        np.testing.assert_allclose(m @ rows[2], x_coeffs(rows), atol=1e-14)
        np.testing.assert_allclose(m @ rows[3], y_coeffs(rows), atol=1e-14)

    def test_accepts_three_rows(self) -> None:
        assert x_coeffs(np.eye(3)).shape == (3,)

    def test_y_needs_four_rows(self) -> None:
        with pytest.raises(ContractViolation):
            y_coeffs(np.eye(3))

    def test_oracle_port_checked(self) -> None:
        with pytest.raises(ContractViolation, match="port"):
            conditional_amplitudes_oracle(np.eye(7), 5)

    def test_oracle_size_checked(self) -> None:
        with pytest.raises(ContractViolation, match="7 modes"):
            conditional_amplitudes_oracle(np.eye(6), 3)


class TestSolveForRows:
    def test_hits_targets(self) -> None:
        u1, u2 = analytic_rows(0.494, 0.416)
        rows = solve_for_rows(u1, u2, 0.05)
        assert not isinstance(rows, Singular)
        sub = Submatrix43.from_rows(u1, u2, *rows)
        x_residual, y_residual = condition_residuals(sub, 0.05)
        assert max(x_residual, y_residual) <= 1e-12

    def test_singular_design(self) -> None:
        result = solve_for_rows(np.zeros(3), np.zeros(3), 0.05)
        assert isinstance(result, Singular)

    def test_matches_closed_form(self) -> None:
        u1, u2 = analytic_rows(0.3, 0.2)
        rows = solve_for_rows(u1, u2, 0.04)
        assert not isinstance(rows, Singular)
        closed = analytic_submatrix(0.3, 0.2, 0.04).matrix
        np.testing.assert_allclose(rows[0], closed[2], atol=1e-12)
        np.testing.assert_allclose(rows[1], closed[3], atol=1e-12)


# ---------------------------------------------------------------------------
# Analytic family
# ---------------------------------------------------------------------------


class TestAnalyticFamily:
    def test_row_shapes(self) -> None:
        u1, u2 = analytic_rows(0.5, 0.4)
        np.testing.assert_array_equal(u1, [0.5, 0.5, 0.5])
        np.testing.assert_array_equal(u2, [-0.4, 0.4, -0.4])

    def test_conditions_hold(self, analytic_block: Submatrix43) -> None:
        x_residual, y_residual = condition_residuals(analytic_block, 0.05)
        assert max(x_residual, y_residual) <= 1e-12

    def test_embeddable_below_ceiling(self, analytic_block: Submatrix43) -> None:
        assert is_embeddable(analytic_block).embeddable is True

    def test_not_embeddable_at_large_q(self) -> None:
        sub = analytic_submatrix(0.494, 0.416, 0.10)
        assert is_embeddable(sub).embeddable is False

    @pytest.mark.parametrize(("u11", "u22"), [(0.0, 0.4), (0.4, 0.0)])
    def test_zero_parameters_rejected(self, u11: float, u22: float) -> None:
        with pytest.raises(ContractViolation):
            analytic_submatrix(u11, u22, 0.05)


class TestCPSBlock:
    def test_builds_unitary(self, analytic_block: Submatrix43) -> None:
        block = build_cps_block(analytic_block, 0.05)
        assert block.unitary.size == 7
        np.testing.assert_array_equal(
            block.unitary.matrix[:4, :3], analytic_block.matrix
        )

    def test_wrong_q_rejected(self, analytic_block: Submatrix43) -> None:
        with pytest.raises(BlockConditionError, match="miss targets"):
            build_cps_block(analytic_block, 0.06)

    def test_oversized_block_rejected(self) -> None:
        sub = analytic_submatrix(0.494, 0.416, 0.10)
        with pytest.raises(BlockConditionError, match="cannot be completed"):
            build_cps_block(sub, 0.10)


# ---------------------------------------------------------------------------
# Solutions
# ---------------------------------------------------------------------------


class TestSolutions:
    def test_success_probability_is_quartic(self) -> None:
        rows = analytic_submatrix(0.494, 0.416, 0.05).matrix
        solution = solution_from_rows(*rows, 0.05)
        assert solution.P_succ == pytest.approx(0.05**4 / 4.0)
        assert solution.sigma_max < 1.0

    def test_reference_solution(self, analytic_solution: FredkinSolution) -> None:
        assert analytic_solution.q.real == pytest.approx(0.0638, abs=1e-3)
        assert analytic_solution.P_succ == pytest.approx(4.2e-6, rel=0.1)
        assert analytic_solution.sigma_max <= 1.0

    def test_verify_with_oracle(self, analytic_solution: FredkinSolution) -> None:
        check = verify_solution(analytic_solution, oracle=True)
        assert check.oracle_residual is not None
        assert check.passed()

    def test_tampered_probability_fails(
        self, analytic_solution: FredkinSolution
    ) -> None:
        tampered = analytic_solution.model_copy(update={"P_succ": 1e-3})
        assert verify_solution(tampered).passed() is False

    def test_degenerate_completion_fails_oracle(self) -> None:
        zero = np.zeros(3)
        solution = solution_from_rows([1.0, 0, 0], [0.5, 0, 0], zero, zero, 0.01)
        check = verify_solution(solution, oracle=True)
        assert check.oracle_residual == math.inf
        assert check.passed() is False

    def test_tampered_row_fails(self, analytic_solution: FredkinSolution) -> None:
        row = list(analytic_solution.u3)
        row[0] += 1e-3
        tampered = analytic_solution.model_copy(update={"u3": row})
        check = verify_solution(tampered)
        assert check.x_residual > 1e-9
        assert check.passed() is False


# ---------------------------------------------------------------------------
# Parity check
# ---------------------------------------------------------------------------


class TestParityCheck:
    @pytest.mark.parametrize(
        ("alpha", "beta"),
        [(1.0, 0.0), (0.0, 1.0), (0.6, 0.8j), (1.0, -1.0)],
    )
    def test_half_success_unit_fidelity(self, alpha: complex, beta: complex) -> None:
        outcome = parity_check(alpha, beta)
        assert outcome.success_probability == pytest.approx(0.5, abs=1e-12)
        assert outcome.fidelity == pytest.approx(1.0, abs=1e-12)

    def test_output_modes(self) -> None:
        outcome = parity_check(1.0, 0.0)
        assert outcome.state.mode_count == 4
        assert outcome.state.photon_numbers() == {2}

    def test_zero_control_rejected(self) -> None:
        with pytest.raises(ContractViolation):
            parity_check(0.0, 0.0)


# ---------------------------------------------------------------------------
# Mach-Zehnder and full gate
# ---------------------------------------------------------------------------


class TestMachZehnder:
    def test_no_phase_is_identity(self) -> None:
        outcome = simulate_mach_zehnder(logical_basis("01"))
        assert outcome.success_probability == pytest.approx(1.0)
        assert abs(outcome.logical[1]) == pytest.approx(1.0)

    def test_pi_phase_swaps(self) -> None:
        outcome = simulate_mach_zehnder(logical_basis("01"), math.pi)
        assert abs(outcome.logical[2]) == pytest.approx(1.0)
        assert abs(outcome.logical[1]) == pytest.approx(0.0, abs=1e-12)

    def test_unnormalized_input_rejected(self) -> None:
        with pytest.raises(ContractViolation, match="normalized"):
            simulate_mach_zehnder(np.array([1.0, 1.0, 0.0, 0.0]))

    def test_wrong_length_rejected(self) -> None:
        with pytest.raises(ContractViolation):
            simulate_mach_zehnder(np.ones(3) / math.sqrt(3.0))


class TestFredkinGate:
    def test_register(self) -> None:
        assert fredkin_register().size == 22

    def test_ideal_gate_swaps_targets_under_control(self) -> None:
        gate = ideal_fredkin()
        assert gate[5, 6] == 1.0
        assert gate[6, 5] == 1.0
        assert gate[3, 3] == 1.0

    @pytest.mark.parametrize("bits", ["000", "011", "101", "110"])
    def test_basis_inputs(self, bits: str, analytic_solution: FredkinSolution) -> None:
        outcome = simulate_fredkin(bits, analytic_solution)
        expected = abs(analytic_solution.q) ** 4 / 4.0
        assert outcome.fidelity == pytest.approx(1.0, abs=1e-8)
        assert outcome.success_probability == pytest.approx(expected, rel=1e-8)

    def test_control_superposition(self, analytic_solution: FredkinSolution) -> None:
        vector = (logical_basis("001") + logical_basis("101")) / math.sqrt(2.0)
        outcome = simulate_fredkin(vector, analytic_solution)
        assert outcome.fidelity == pytest.approx(1.0, abs=1e-8)
        assert abs(outcome.logical[5]) == pytest.approx(0.0, abs=1e-14)
        assert abs(outcome.logical[6]) == pytest.approx(abs(outcome.logical[1]))

    @pytest.mark.parametrize("bits", ["101", "110"])
    def test_halving_q_divides_probability_by_sixteen(self, bits: str) -> None:
        outcomes = []
        for q in (0.05, 0.025):
            rows = analytic_submatrix(0.494, 0.416, q).matrix
            outcomes.append(simulate_fredkin(bits, solution_from_rows(*rows, q)))
        full, half = outcomes
        ratio = half.success_probability / full.success_probability
        assert ratio == pytest.approx(1.0 / 16.0, rel=1e-8)
        assert half.fidelity == pytest.approx(full.fidelity, abs=1e-10)
        assert half.fidelity == pytest.approx(1.0, abs=1e-8)

    @pytest.mark.slow
    def test_report_in_parallel(self, analytic_solution: FredkinSolution) -> None:
        report = fredkin_report(analytic_solution, jobs=2)
        assert report.min_fidelity >= 1.0 - 1e-8
        assert report.relative_P_error <= 1e-8
        assert set(report.cases) == {format(i, "03b") for i in range(8)} | {"+01"}

    def test_report_reference_numbers(
        self, analytic_solution: FredkinSolution
    ) -> None:
        report = fredkin_report(analytic_solution)
        assert report.ancilla_photons == ANCILLA_PHOTONS == 6
        assert report.sequential_reference_P == SEQUENTIAL_REFERENCE_P
        assert report.P_succ_simulated == pytest.approx(report.P_succ_expected)
