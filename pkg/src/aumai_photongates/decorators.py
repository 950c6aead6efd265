"""Decorators turning plain check functions into reproducible claims."""

from __future__ import annotations

import functools
import logging
import time
from collections.abc import Callable
from dataclasses import dataclass, field
from typing import NamedTuple

from aumai_photongates.models import ClaimResult, ClaimStatus, OptimizerConfig
from aumai_photongates.runlog import RunLog

logger = logging.getLogger(__name__)


@dataclass
class ClaimContext:
    """Settings and scratch space shared by the claims of one suite run.

    ``shared`` lets a later claim reuse an expensive artifact, such as the
    optimized Fredkin solution, produced by an earlier one.
    """

    config: OptimizerConfig = field(default_factory=OptimizerConfig)
    jobs: int = 1
    seed: int = 20240101
    shared: dict[str, object] = field(default_factory=dict)
    run_log: RunLog = field(default_factory=RunLog)


class ClaimOutcome(NamedTuple):
    """What a check computed.

    ``passed`` may be left as None to compare ``computed_value`` with the
    claim's reference value and tolerance.
    """

    computed_value: float | None
    passed: bool | None = None
    detail: str = ""


CheckFunction = Callable[[ClaimContext], ClaimOutcome]


class Claim:
    """A named, timed check with an optional reference value."""

    def __init__(
        self,
        check: CheckFunction,
        claim_id: str,
        module: str,
        reference_value: float | None = None,
        tolerance: float | None = None,
        description: str = "",
    ) -> None:
        self.check = check
        self.claim_id = claim_id
        self.module = module
        self.reference_value = reference_value
        self.tolerance = tolerance
        doc = (check.__doc__ or "").strip()
        self.description = description or (doc.splitlines()[0] if doc else "")
        functools.update_wrapper(self, check)

    def _verdict(self, outcome: ClaimOutcome) -> bool:
        if outcome.passed is not None:
            return outcome.passed
        computed, reference = outcome.computed_value, self.reference_value
        if computed is None or reference is None or self.tolerance is None:
            return False
        return abs(computed - reference) <= self.tolerance

    def run(self, context: ClaimContext) -> ClaimResult:
        """Execute the check; exceptions become an ``error`` result."""
        started = time.perf_counter()
        computed: float | None = None
        detail = ""
        try:
            with context.run_log.scope("claim", self.claim_id):
                outcome = self.check(context)
            computed = outcome.computed_value
            detail = outcome.detail
            passed = self._verdict(outcome)
            status = ClaimStatus.passed if passed else ClaimStatus.failed
        except Exception as exc:  # noqa: BLE001
            logger.exception("claim %s raised", self.claim_id)
            status = ClaimStatus.error
            detail = f"{type(exc).__name__}: {exc}"
        runtime_ms = (time.perf_counter() - started) * 1000.0
        logger.info("claim %s: %s in %.1f ms", self.claim_id, status.value, runtime_ms)
        return ClaimResult(
            claim_id=self.claim_id,
            module=self.module,
            description=self.description,
            reference_value=self.reference_value,
            computed_value=computed,
            tolerance=self.tolerance,
            status=status,
            runtime_ms=runtime_ms,
            detail=detail,
        )

    def __call__(self, context: ClaimContext) -> ClaimOutcome:
        return self.check(context)

    def __repr__(self) -> str:
        return f"Claim({self.claim_id!r}, module={self.module!r})"


def acceptance_claim(
    claim_id: str,
    module: str,
    reference_value: float | None = None,
    tolerance: float | None = None,
    description: str = "",
) -> Callable[[CheckFunction], Claim]:
    """Decorator registering a check function as a :class:`Claim`.

    Example::

        @acceptance_claim("toffoli-n3", "toffoli", reference_value=0.0075)
        def toffoli_three_qubits(ctx: ClaimContext) -> ClaimOutcome:
            ...
    """

    def decorator(func: CheckFunction) -> Claim:
        return Claim(
            func,
            claim_id=claim_id,
            module=module,
            reference_value=reference_value,
            tolerance=tolerance,
            description=description,
        )

    return decorator


__all__ = [
    "CheckFunction",
    "Claim",
    "ClaimContext",
    "ClaimOutcome",
    "acceptance_claim",
]
