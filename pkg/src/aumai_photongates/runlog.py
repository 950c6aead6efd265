"""Timestamped run records for optimizer starts and verification claims."""

from __future__ import annotations

import csv
import threading
from collections.abc import Generator
from contextlib import contextmanager
from datetime import UTC, datetime
from pathlib import Path

from aumai_photongates.models import RunRecord

CSV_FIELDS = ("start_index", "q", "wall_time_s", "event")


class RunLog:
    """Collect :class:`RunRecord` entries from concurrent workers.

    All mutations and snapshot reads happen under one lock, so a run log
    can be shared between the threads of a parallel search.
    """

    def __init__(self) -> None:
        self._records: list[RunRecord] = []
        self._lock = threading.Lock()

    def record(
        self,
        component: str,
        event: str,
        details: dict[str, object] | None = None,
    ) -> None:
        """Append one timestamped record.

        Args:
            component: Emitting part, e.g. ``"optimizer"`` or ``"claim"``.
            event:     Short label such as ``"start"`` or ``"budget_exhausted"``.
            details:   Free-form values; optimizer records carry
                       ``start_index``, ``q`` and ``wall_time_s``.

        Example::

            log = RunLog()
            log.record("optimizer", "start", {"start_index": 0, "q": 0.06})
        """
        entry = RunRecord(
            timestamp=datetime.now(tz=UTC),
            component=component,
            event=event,
            details=details or {},
        )
        with self._lock:
            self._records.append(entry)

    def records(self, component: str | None = None) -> list[RunRecord]:
        """Snapshot of the records, optionally restricted to one component."""
        with self._lock:
            snapshot = list(self._records)
        if component is None:
            return snapshot
        return [r for r in snapshot if r.component == component]

    def clear(self) -> None:
        with self._lock:
            self._records.clear()

    @contextmanager
    def scope(
        self, component: str, event_prefix: str = ""
    ) -> Generator[None, None, None]:
        """Record ``start`` and then ``end`` or ``error`` around a block.

        Example::

            with run_log.scope("optimizer", "global"):
                optimize_global(config)
        """
        prefix = f"{event_prefix}_" if event_prefix else ""
        self.record(component, f"{prefix}start")
        try:
            yield
            self.record(component, f"{prefix}end")
        except Exception as exc:
            self.record(
                component,
                f"{prefix}error",
                {"exception_type": type(exc).__name__, "message": str(exc)},
            )
            raise

    def write_csv(self, path: str | Path, component: str | None = "optimizer") -> int:
        """Write ``start_index,q,wall_time_s,event`` rows; return the row count."""
        rows = self.records(component)
        with Path(path).open("w", encoding="utf-8", newline="") as handle:
            writer = csv.DictWriter(handle, fieldnames=CSV_FIELDS)
            writer.writeheader()
            for entry in rows:
                writer.writerow(
                    {
                        "start_index": entry.details.get("start_index", ""),
                        "q": entry.details.get("q", ""),
                        "wall_time_s": entry.details.get("wall_time_s", ""),
                        "event": entry.event,
                    }
                )
        return len(rows)


__all__ = ["CSV_FIELDS", "RunLog"]
