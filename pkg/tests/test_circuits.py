"""Tests for aumai_photongates.circuits — elements, embedding, completion."""

from __future__ import annotations

import math

import numpy as np
import pytest

from aumai_photongates.circuits import (
    DegeneratePivotError,
    ModeRegister,
    Submatrix43,
    beam_splitter,
    complete_to_unitary,
    compose,
    embed,
    is_embeddable,
    mode_swap,
    phase_shifter,
    random_unitary,
    sigma_max,
)
from aumai_photongates.fock import (
    ContractViolation,
    PureState,
    apply_unitary,
    unitarity_residual,
)
from aumai_photongates.models import Infeasible

# ---------------------------------------------------------------------------
# Elements
# ---------------------------------------------------------------------------


class TestBeamSplitter:
    def test_matrix_convention(self) -> None:
        t, r = math.sqrt(0.3), math.sqrt(0.7)
        np.testing.assert_allclose(beam_splitter(0.3).matrix, [[t, r], [-r, t]])

    def test_fully_transmitting_is_identity(self) -> None:
        np.testing.assert_allclose(beam_splitter(1.0).matrix, np.eye(2))

    @pytest.mark.parametrize("T", [0.0, -0.1, 1.5])
    def test_transmittance_out_of_range(self, T: float) -> None:
        with pytest.raises(ContractViolation):
            beam_splitter(T)

    def test_is_unitary(self) -> None:
        assert unitarity_residual(beam_splitter(0.42).matrix) <= 1e-14


class TestPhaseShifterAndSwap:
    def test_phase_shifter(self) -> None:
        assert phase_shifter(math.pi).matrix[0, 0] == pytest.approx(-1.0)

    def test_embedded_phase_shifter(self) -> None:
        shifted = embed(phase_shifter(math.pi / 2), [1], 3)
        assert shifted.matrix[1, 1] == pytest.approx(1j)
        assert shifted.matrix[0, 0] == 1.0

    def test_non_finite_phase_rejected(self) -> None:
        with pytest.raises(ContractViolation):
            phase_shifter(math.inf)

    def test_swap_exchanges_modes(self) -> None:
        out = apply_unitary(mode_swap(), PureState.basis([1, 0]))
        assert out.amplitude((0, 1)) == 1.0


class TestEmbedAndCompose:
    def test_embed_places_block(self) -> None:
        full = embed(beam_splitter(0.5), [2, 0], 3)
        t = math.sqrt(0.5)
        assert full.matrix[2, 2] == pytest.approx(t)
        assert full.matrix[2, 0] == pytest.approx(t)
        assert full.matrix[0, 2] == pytest.approx(-t)
        assert full.matrix[1, 1] == 1.0

    def test_embed_rejects_collision(self) -> None:
        with pytest.raises(ContractViolation, match="collide"):
            embed(beam_splitter(0.5), [1, 1], 3)

    def test_embed_rejects_out_of_range(self) -> None:
        with pytest.raises(ContractViolation):
            embed(beam_splitter(0.5), [0, 3], 3)

    def test_embed_rejects_wrong_arity(self) -> None:
        with pytest.raises(ContractViolation):
            embed(beam_splitter(0.5), [0], 3)

    def test_compose_order(self) -> None:
        a = random_unitary(3, 1)
        b = random_unitary(3, 2)
        np.testing.assert_allclose(compose([a, b]).matrix, a.matrix @ b.matrix)

    def test_compose_rejects_mixed_sizes(self) -> None:
        with pytest.raises(ContractViolation):
            compose([random_unitary(2, 1), random_unitary(3, 1)])

    def test_compose_rejects_empty(self) -> None:
        with pytest.raises(ContractViolation):
            compose([])

    def test_random_unitary_single_mode(self) -> None:
        assert abs(random_unitary(1, 9).matrix[0, 0]) == pytest.approx(1.0)


# ---------------------------------------------------------------------------
# ModeRegister
# ---------------------------------------------------------------------------


class TestModeRegister:
    def test_index_and_occupation(self) -> None:
        register = ModeRegister(["a", "b", "c"])
        assert register.index("c") == 2
        assert register.occupation({"a": 1, "c": 2}) == (1, 0, 2)

    def test_duplicate_labels_rejected(self) -> None:
        with pytest.raises(ContractViolation, match="duplicate"):
            ModeRegister(["a", "a"])

    def test_unknown_label(self) -> None:
        with pytest.raises(ContractViolation, match="unknown"):
            ModeRegister(["a"]).index("z")

    def test_pattern_uses_indices(self) -> None:
        pattern = ModeRegister(["a", "b", "c"]).pattern({"c": 0, "a": 1})
        assert pattern.counts == {2: 0, 0: 1}
        assert pattern.unmeasured_modes == [1]

    def test_without_keeps_order(self) -> None:
        reduced = ModeRegister(["a", "b", "c", "d"]).without(["b", "d"])
        assert reduced.labels == ("a", "c")

    def test_embed_by_label(self) -> None:
        full = ModeRegister(["a", "b", "c"]).embed(phase_shifter(math.pi), ["b"])
        assert full.matrix[1, 1] == pytest.approx(-1.0)


# ---------------------------------------------------------------------------
# Embeddability
# ---------------------------------------------------------------------------


class TestEmbeddability:
    def test_sigma_max_of_isometry(self) -> None:
        u = random_unitary(7, 4)
        assert sigma_max(u.matrix[:, :3]) == pytest.approx(1.0)

    def test_sigma_max_of_corner_block_is_bounded(self) -> None:
        for seed in range(20):
            corner = random_unitary(7, seed).matrix[:4, :3]
            assert sigma_max(corner) <= 1.0 + 1e-12

    def test_sub_block_of_unitary_is_embeddable(self) -> None:
        sub = Submatrix43(random_unitary(7, 4).matrix[:4, :3])
        assert is_embeddable(sub).embeddable is True

    def test_margin_sign(
        self, embeddable_block: Submatrix43, oversized_block: Submatrix43
    ) -> None:
        assert is_embeddable(embeddable_block).margin == pytest.approx(0.2)
        verdict = is_embeddable(oversized_block)
        assert verdict.embeddable is False
        assert verdict.margin == pytest.approx(-0.2)

    def test_wrong_shape_rejected(self) -> None:
        with pytest.raises(ContractViolation, match="4x3"):
            Submatrix43(np.zeros((3, 3)))

    def test_payload_roundtrip(self, embeddable_block: Submatrix43) -> None:
        restored = Submatrix43.from_payload(embeddable_block.to_payload())
        np.testing.assert_array_equal(restored.matrix, embeddable_block.matrix)


# ---------------------------------------------------------------------------
# Completion
# ---------------------------------------------------------------------------


class TestCompleteToUnitary:
    def test_completes_embeddable_block(self, embeddable_block: Submatrix43) -> None:
        completed = complete_to_unitary(embeddable_block)
        assert not isinstance(completed, Infeasible)
        assert unitarity_residual(completed.matrix) <= 1e-10
        np.testing.assert_array_equal(completed.matrix[:4, :3], embeddable_block.matrix)

    def test_pivots_are_real_and_upper_entries_zero(
        self, embeddable_block: Submatrix43
    ) -> None:
        completed = complete_to_unitary(embeddable_block)
        assert not isinstance(completed, Infeasible)
        for j in range(4):
            pivot = completed.matrix[j, j + 3]
            assert pivot.imag == 0.0
            assert pivot.real >= 0.0
            assert np.all(completed.matrix[j, j + 4 :] == 0.0)

    def test_oversized_block_is_infeasible(self, oversized_block: Submatrix43) -> None:
        result = complete_to_unitary(oversized_block)
        assert isinstance(result, Infeasible)
        assert result.radicand < 0.0

    def test_overlong_first_row(self) -> None:
        sub = Submatrix43(np.vstack([[1.0, 1.0, 0.0], np.zeros((3, 3))]))
        result = complete_to_unitary(sub)
        assert isinstance(result, Infeasible)
        assert result.row == 0
        assert result.radicand == pytest.approx(-1.0)

    def test_zero_block_completes(self) -> None:
        completed = complete_to_unitary(Submatrix43(np.zeros((4, 3))))
        assert not isinstance(completed, Infeasible)
        assert unitarity_residual(completed.matrix) <= 1e-12

    def test_degenerate_pivot(self) -> None:
        # unit-norm row 1 forces a zero pivot while row 2 overlaps it
        sub = Submatrix43(
            [[1.0, 0.0, 0.0], [0.5, 0.0, 0.0], [0.0, 0.0, 0.0], [0.0, 0.0, 0.0]]
        )
        with pytest.raises(DegeneratePivotError) as excinfo:
            complete_to_unitary(sub)
        assert excinfo.value.row == 0

    def test_agrees_with_singular_value_test(self, rng: np.random.Generator) -> None:
        for _ in range(200):
            raw = rng.normal(size=(4, 3)) + 1j * rng.normal(size=(4, 3))
            sub = Submatrix43(raw * rng.uniform(0.5, 1.5) / sigma_max(raw))
            sigma = sigma_max(sub.matrix)
            if abs(sigma - 1.0) < 1e-8:
                continue
            completed = complete_to_unitary(sub)
            assert isinstance(completed, Infeasible) == (sigma > 1.0)
