"""In-process job manager: bounded worker pool, forward-only status
transitions, and append-only sequence-numbered progress events.

Job state is held in memory; results are also persisted to a per-job
directory so artifacts survive the job object. Events are produced by the
running job thread and consumed by any number of SSE clients.
"""

from __future__ import annotations

import json
import os
import threading
import uuid
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from pathlib import Path
from typing import Callable, Optional

_TRANSITIONS = {
    "queued": {"running"},
    "running": {"done", "failed"},
    "done": set(),
    "failed": set(),
}


@dataclass
class JobRecord:
    """One submitted job: kind, status, events, and result location."""

    job_id: str
    kind: str
    status: str = "queued"
    events: list = field(default_factory=list)
    result_path: Optional[str] = None
    error: Optional[str] = None
    _lock: threading.Lock = field(default_factory=threading.Lock, repr=False)
    _changed: threading.Condition = field(default=None, repr=False)

    def __post_init__(self):
        self._changed = threading.Condition(self._lock)

    def transition(self, new_status: str) -> None:
        with self._lock:
            if new_status not in _TRANSITIONS[self.status]:
                raise ValueError(f"illegal transition {self.status} -> {new_status}")
            self.status = new_status
            self._changed.notify_all()

    def emit(self, payload: dict) -> None:
        with self._lock:
            payload = dict(payload)
            payload["seq"] = len(self.events)
            self.events.append(payload)
            self._changed.notify_all()

    def snapshot(self) -> dict:
        with self._lock:
            return {
                "job_id": self.job_id,
                "kind": self.kind,
                "status": self.status,
                "events": len(self.events),
                "error": self.error,
                "result_ready": self.status == "done",
            }

    def events_since(self, after_seq: int) -> list:
        with self._lock:
            return [e for e in self.events if e["seq"] > after_seq]

    def wait_for_change(self, last_count: int, timeout: float) -> None:
        with self._lock:
            if len(self.events) > last_count or self.status in ("done", "failed"):
                return
            self._changed.wait(timeout)

    @property
    def finished(self) -> bool:
        with self._lock:
            return self.status in ("done", "failed")


class JobManager:
    """Runs job callables on a bounded pool and tracks their records."""

    def __init__(self, data_dir, workers: Optional[int] = None):
        self.data_dir = Path(data_dir)
        self.data_dir.mkdir(parents=True, exist_ok=True)
        self._pool = ThreadPoolExecutor(max_workers=workers or os.cpu_count() or 2)
        self._jobs: dict = {}
        self._lock = threading.Lock()

    def get(self, job_id: str) -> Optional[JobRecord]:
        with self._lock:
            return self._jobs.get(job_id)

    def submit(self, kind: str, work: Callable[[JobRecord, Path], dict]) -> JobRecord:
        """Queue ``work(record, job_dir) -> result payload`` and return the
        record immediately. The payload is written to result.json."""
        job_id = uuid.uuid4().hex[:12]
        record = JobRecord(job_id=job_id, kind=kind)
        with self._lock:
            self._jobs[job_id] = record
        job_dir = self.data_dir / job_id
        job_dir.mkdir(parents=True, exist_ok=True)

        def run():
            record.transition("running")
            try:
                payload = work(record, job_dir)
                result_path = job_dir / "result.json"
                with result_path.open("w") as fh:
                    json.dump(payload, fh, sort_keys=True)
                record.result_path = str(result_path)
                record.transition("done")
            except Exception as exc:  # job errors become failed status
                record.error = f"{type(exc).__name__}: {exc}"
                record.transition("failed")

        self._pool.submit(run)
        return record

    def shutdown(self):
        self._pool.shutdown(wait=False, cancel_futures=True)
