"""The `verify` command: run a named suite and write its report."""
import logging
import math
import os
from typing import Optional

from config.constants import EXIT_FAILURE, EXIT_OK
from config.settings import settings
from utils.formatters import format_verdict
from utils.io import write_json
from verify.suites import SuiteBudget, run_theorem_suite

logger = logging.getLogger(__name__)


def cmd_verify(suite: str, seeds: Optional[int] = None, max_seconds: Optional[float] = None,
               workers: Optional[int] = None, out_dir: Optional[str] = None, seed: int = 0) -> int:
    """
    Run one suite and write <out_dir>/<suite>/report.json.

    Returns:
        EXIT_OK when the suite passes or is exploratory, EXIT_FAILURE otherwise

    Raises:
        InvalidParameterError: For an unknown suite or a bad budget
    """
    budget = SuiteBudget(
        seeds=seeds,
        max_seconds=math.inf if max_seconds is None else max_seconds,
        workers=workers or settings.WORKERS,
    )
    target_dir = os.path.join(out_dir or settings.OUTPUT_DIR, suite)
    report = run_theorem_suite(suite, budget=budget, seed=seed, out_dir=target_dir)
    path = os.path.join(target_dir, "report.json")
    write_json(path, report.as_dict())
    print(f"{suite}: {format_verdict(report.passed)} ({path})")
    return EXIT_FAILURE if report.passed is False else EXIT_OK
