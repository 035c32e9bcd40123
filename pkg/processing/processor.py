#!/usr/bin/env python3
"""
Batch processor - fans independent instances out to a worker pool for
`bench` and `verify`.
"""

import logging
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass
from datetime import datetime
from typing import Any, Callable, List, NamedTuple, Optional, Sequence


class BatchTask(NamedTuple):
    """One instance; func and args must be picklable when workers > 1."""
    name: str
    func: Callable[..., Any]
    args: tuple = ()


@dataclass
class ProcessingResult:
    """Result of one batch task."""
    success: bool
    error_message: Optional[str] = None
    processing_time: Optional[float] = None
    task_name: Optional[str] = None
    payload: Any = None


def _execute(task: BatchTask) -> ProcessingResult:
    start_time = datetime.now()
    try:
        payload = task.func(*task.args)
    except Exception as e:
        logging.getLogger(__name__).error(f"Task {task.name} failed: {e}")
        return ProcessingResult(
            success=False,
            error_message=f"{type(e).__name__}: {e}",
            processing_time=(datetime.now() - start_time).total_seconds(),
            task_name=task.name,
        )
    return ProcessingResult(
        success=True,
        processing_time=(datetime.now() - start_time).total_seconds(),
        task_name=task.name,
        payload=payload,
    )


class BatchProcessor:
    """
    Runs tasks sequentially, or across a process pool when workers > 1.
    Every task owns its instance; results come back in task order.
    """

    MODULES = [
        'graph_core', 'cover', 'mindiam', 'bichromatic', 'oracle',
        'generators', 'graph_io', 'bench', 'verifier', 'result_exporter',
    ]

    def __init__(self, workers: int = 1, log_level: Optional[str] = None):
        if workers < 1:
            raise ValueError(f"workers must be at least 1, got {workers}")
        self.workers = workers
        self.logger = logging.getLogger(__name__)
        if log_level:
            self._setup_logging(log_level)

    def _setup_logging(self, log_level: str = "INFO") -> None:
        """Set the level on every package logger, packaged or flat-imported."""
        level = getattr(logging, log_level.upper())
        loggers_to_configure = [__name__]
        for module in self.MODULES:
            loggers_to_configure += [f'src.{module}', module]
        for logger_name in loggers_to_configure:
            logging.getLogger(logger_name).setLevel(level)

    def run(self, tasks: Sequence[BatchTask]) -> List[ProcessingResult]:
        tasks = [BatchTask(*task) for task in tasks]
        start_time = datetime.now()
        self.logger.info(f"Processing {len(tasks)} tasks with {self.workers} worker(s)")

        if self.workers == 1 or len(tasks) <= 1:
            results = [_execute(task) for task in tasks]
        else:
            with ProcessPoolExecutor(max_workers=self.workers) as pool:
                results = list(pool.map(_execute, tasks))

        failed = sum(not r.success for r in results)
        duration = (datetime.now() - start_time).total_seconds()
        self.logger.info(f"Batch completed in {duration:.2f} seconds ({failed} failed)")
        return results
