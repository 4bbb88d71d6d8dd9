"""
Report, curve and problem file writers
======================================

.. autosummary::
    ~write_report
    ~read_report
    ~write_perf_curve
    ~write_region
    ~dump_problem
"""

import logging
from pathlib import Path

import pandas as pd

from ..optmodel import dump

logger = logging.getLogger(__name__)

SPT_COLUMNS = [
    "problem", "model", "n_bess", "instance", "status", "objective", "runtime_ms", "gap",
    "simult_pct", "rmse", "rmse_rel",
]  # fmt: skip
TEP_COLUMNS = SPT_COLUMNS + ["total_cost_rel", "load_shed", "curtailment", "capacity_invested"]
PERF_CURVE_COLUMNS = ["runtime_ms", "frac_solved"]
REGION_COLUMNS = ["model", "pc", "pd", "feasible"]


class ReportError(ValueError):
    """Report file missing or without the expected columns."""


def _prepare(path):
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    return path


def write_report(frame, path, columns):
    """Write the ``columns`` of ``frame`` as CSV; missing values are empty fields."""
    path = _prepare(path)
    frame.reindex(columns=columns).to_csv(path, index=False, na_rep="")
    logger.info("Report with %d rows written to %s", len(frame), path)
    return path


def read_report(path):
    """Read an SPT or TEP report CSV."""
    path = Path(path)
    if not path.exists():
        raise ReportError(f"Report not found: {path}")
    frame = pd.read_csv(path)
    missing = [c for c in SPT_COLUMNS if c not in frame.columns]
    if missing:
        raise ReportError(f"{path} lacks report columns {missing}")
    return frame


def write_perf_curve(curve, path):
    path = _prepare(path)
    pd.DataFrame(curve.rows(), columns=PERF_CURVE_COLUMNS).to_csv(path, index=False)
    logger.info("Performance curve with %d steps written to %s", len(curve), path)
    return path


def write_region(frame, path):
    path = _prepare(path)
    out = frame.reindex(columns=REGION_COLUMNS).copy()
    out["feasible"] = out["feasible"].map(lambda v: "true" if v else "false")
    out.to_csv(path, index=False)
    logger.info("Region grid with %d points written to %s", len(frame), path)
    return path


def dump_problem(problem, directory, name=None):
    """Write ``problem`` in the optmodel text format to ``directory/<name>.txt``."""
    directory = Path(directory)
    directory.mkdir(parents=True, exist_ok=True)
    path = directory / f"{name or problem.name}.txt"
    dump(problem, path)
    logger.debug("Problem %s dumped to %s", problem.name, path)
    return path
