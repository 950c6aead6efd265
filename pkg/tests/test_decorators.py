"""Tests for aumai_photongates.decorators — acceptance_claim and Claim.run."""

from __future__ import annotations

import pytest

from aumai_photongates.decorators import (
    Claim,
    ClaimContext,
    ClaimOutcome,
    acceptance_claim,
)
from aumai_photongates.models import ClaimStatus

# ---------------------------------------------------------------------------
# acceptance_claim decorator
# ---------------------------------------------------------------------------


class TestAcceptanceClaim:
    def test_returns_claim(self) -> None:
        @acceptance_claim("c1", "toffoli", reference_value=1.0, tolerance=0.1)
        def check(ctx: ClaimContext) -> ClaimOutcome:
            return ClaimOutcome(1.0)

        assert isinstance(check, Claim)
        assert check.claim_id == "c1"
        assert check.module == "toffoli"

    def test_preserves_function_name(self) -> None:
        @acceptance_claim("c1", "fock")
        def my_check(ctx: ClaimContext) -> ClaimOutcome:
            return ClaimOutcome(None, True)

        assert my_check.__name__ == "my_check"

    def test_description_defaults_to_docstring(self) -> None:
        @acceptance_claim("c1", "fock")
        def documented(ctx: ClaimContext) -> ClaimOutcome:
            """First line.

            More detail.
            """
            return ClaimOutcome(None, True)

        assert documented.description == "First line."

    def test_explicit_description_wins(self) -> None:
        @acceptance_claim("c1", "fock", description="given")
        def documented(ctx: ClaimContext) -> ClaimOutcome:
            """Ignored."""
            return ClaimOutcome(None, True)

        assert documented.description == "given"

    def test_still_callable(self, claim_context: ClaimContext) -> None:
        @acceptance_claim("c1", "fock")
        def check(ctx: ClaimContext) -> ClaimOutcome:
            return ClaimOutcome(2.5, True)

        assert check(claim_context).computed_value == 2.5


# ---------------------------------------------------------------------------
# Claim.run verdicts
# ---------------------------------------------------------------------------


def _value_claim(value: float | None) -> Claim:
    @acceptance_claim("value", "toffoli", reference_value=0.0075, tolerance=1e-4)
    def check(ctx: ClaimContext) -> ClaimOutcome:
        return ClaimOutcome(value)

    return check


class TestClaimRun:
    def test_within_tolerance_passes(self, claim_context: ClaimContext) -> None:
        result = _value_claim(0.00751).run(claim_context)
        assert result.status == ClaimStatus.passed
        assert result.computed_value == 0.00751
        assert result.reference_value == 0.0075
        assert result.runtime_ms >= 0.0

    def test_outside_tolerance_fails(self, claim_context: ClaimContext) -> None:
        result = _value_claim(0.0080).run(claim_context)
        assert result.status == ClaimStatus.failed

    def test_missing_value_fails(self, claim_context: ClaimContext) -> None:
        assert _value_claim(None).run(claim_context).status == ClaimStatus.failed

    def test_explicit_verdict_overrides_tolerance(
        self, claim_context: ClaimContext
    ) -> None:
        @acceptance_claim("c", "fock", reference_value=1.0, tolerance=0.1)
        def check(ctx: ClaimContext) -> ClaimOutcome:
            return ClaimOutcome(5.0, passed=True, detail="checked elsewhere")

        result = check.run(claim_context)
        assert result.status == ClaimStatus.passed
        assert result.detail == "checked elsewhere"

    def test_exception_becomes_error(self, claim_context: ClaimContext) -> None:
        @acceptance_claim("boom", "fredkin")
        def check(ctx: ClaimContext) -> ClaimOutcome:
            raise ArithmeticError("singular design")

        result = check.run(claim_context)
        assert result.status == ClaimStatus.error
        assert result.detail == "ArithmeticError: singular design"
        assert result.computed_value is None

    def test_run_is_logged(self, claim_context: ClaimContext) -> None:
        _value_claim(0.0075).run(claim_context)
        events = [r.event for r in claim_context.run_log.records("claim")]
        assert events == ["value_start", "value_end"]

    def test_error_is_logged(self, claim_context: ClaimContext) -> None:
        @acceptance_claim("boom", "fredkin")
        def check(ctx: ClaimContext) -> ClaimOutcome:
            raise ValueError("bad")

        check.run(claim_context)
        assert claim_context.run_log.records("claim")[-1].event == "boom_error"

    def test_shared_state_reaches_later_claims(
        self, claim_context: ClaimContext
    ) -> None:
        @acceptance_claim("producer", "optimize")
        def producer(ctx: ClaimContext) -> ClaimOutcome:
            ctx.shared["value"] = 0.25
            return ClaimOutcome(None, True)

        @acceptance_claim("consumer", "fredkin", reference_value=0.25, tolerance=0.0)
        def consumer(ctx: ClaimContext) -> ClaimOutcome:
            shared = ctx.shared["value"]
            assert isinstance(shared, float)
            return ClaimOutcome(shared)

        producer.run(claim_context)
        assert consumer.run(claim_context).status == ClaimStatus.passed


class TestClaimContext:
    def test_defaults(self) -> None:
        context = ClaimContext()
        assert context.jobs == 1
        assert context.seed == 20240101
        assert context.config.starts == 200

    def test_repr(self) -> None:
        assert repr(_value_claim(1.0)) == "Claim('value', module='toffoli')"


@pytest.mark.parametrize("status", list(ClaimStatus))
def test_status_values_are_strings(status: ClaimStatus) -> None:
    assert isinstance(status.value, str)
