"""JSON-lines log of evaluation runs (reports, classifications, corpus outcomes)."""

import logging
import logging.handlers
import os
from datetime import datetime
from pathlib import Path
from typing import Any

import structlog

from biconf.core.config import RunLogConfig, settings


class RunLogger:
    """Session-scoped structured logger writing one JSON object per line."""

    def __init__(self, config: RunLogConfig | None = None):
        self.config = config or settings.logging.run_log
        self.enabled = self.config.enabled
        self.session_id = self._generate_session_id()
        self.log_file: str | None = None
        self._log: Any = None

        if not self.enabled:
            return

        self.log_file = self._get_session_log_file(self.config.log_file)
        Path(self.log_file).parent.mkdir(parents=True, exist_ok=True)

        target = logging.getLogger(f"biconf.runs.{self.session_id}")
        target.setLevel(logging.INFO)
        for handler in target.handlers[:]:
            target.removeHandler(handler)
        handler = logging.handlers.RotatingFileHandler(
            self.log_file,
            maxBytes=self.config.max_file_size_mb * 1024 * 1024,
            backupCount=self.config.backup_count,
            encoding="utf-8",
        )
        handler.setFormatter(logging.Formatter("%(message)s"))
        target.addHandler(handler)
        target.propagate = False

        self._log = structlog.wrap_logger(
            target,
            wrapper_class=structlog.BoundLogger,
            processors=[
                structlog.processors.add_log_level,
                structlog.processors.TimeStamper(fmt="iso", utc=True),
                structlog.processors.JSONRenderer(sort_keys=True),
            ],
        ).bind(session_id=self.session_id)
        self._log.info("session_start", pid=os.getpid(), log_file=self.log_file)

    def _generate_session_id(self) -> str:
        timestamp = datetime.now().strftime("%Y%m%d_%H%M%S")
        return f"session_{timestamp}_{os.getpid()}"

    def _get_session_log_file(self, base_log_file: str) -> str:
        path = Path(base_log_file)
        return str(path.parent / f"{path.stem}_{self.session_id}{path.suffix}")

    def log_report(self, manifold: str, report: dict[str, Any]) -> None:
        """Record an obstruction or identity report."""
        if self._log is not None:
            self._log.info("report", manifold=manifold, report=report)

    def log_classification(self, manifold: str, tiers: dict[str, str]) -> None:
        if self._log is not None:
            self._log.info("classification", manifold=manifold, tiers=tiers)

    def log_corpus_entry(self, entry: str, passed: bool, detail: str = "") -> None:
        if self._log is not None:
            level = "info" if passed else "warning"
            getattr(self._log, level)("corpus_entry", entry=entry, passed=passed, detail=detail)


_run_logger: RunLogger | None = None


def get_run_logger() -> RunLogger:
    """Get the process-wide run logger, created on first use."""
    global _run_logger
    if _run_logger is None:
        _run_logger = RunLogger()
    return _run_logger
