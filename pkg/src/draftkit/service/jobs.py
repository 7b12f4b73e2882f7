"""Asynchronous evaluation jobs on a bounded background worker pool."""

from __future__ import annotations

import threading
import uuid
from collections.abc import Callable
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass


@dataclass
class EvalJob:
    job_id: str
    status: str = "queued"  # queued | running | done | failed
    report: dict | None = None
    error: str | None = None


class JobRunner:
    def __init__(self, workers: int = 2):
        self._executor = ThreadPoolExecutor(max_workers=workers)
        self._jobs: dict[str, EvalJob] = {}
        self._lock = threading.Lock()

    def submit(self, work: Callable[[], dict]) -> str:
        job = EvalJob(job_id=uuid.uuid4().hex)
        with self._lock:
            self._jobs[job.job_id] = job

        def run():
            job.status = "running"
            try:
                job.report = work()
                job.status = "done"
            except Exception as exc:
                job.error = f"{type(exc).__name__}: {exc}"
                job.status = "failed"

        self._executor.submit(run)
        return job.job_id

    def get(self, job_id: str) -> EvalJob | None:
        return self._jobs.get(job_id)

    def shutdown(self) -> None:
        self._executor.shutdown(wait=False)
