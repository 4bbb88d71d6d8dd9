"""
Analysis plans
==============

Post-processing of experiment reports and single-BESS region grids.

.. autosummary::
    ~emit_region
    ~emit_perf_curve
    ~summarize
"""

import logging
from pathlib import Path

import pandas as pd

from ..bess_models import ALL_KINDS
from ..bess_models import EXAMPLE_INITIAL
from ..bess_models import EXAMPLE_PARAMS
from ..bess_models import BessInitial
from ..bess_models import BessParams
from ..bess_models import ModelKind
from ..bess_models import region_grid
from ..callbacks import read_report
from ..callbacks import write_perf_curve
from ..callbacks import write_region
from ..metrics import perf_curve
from ..utils.config_loaders import ConfigError
from ..utils.config_loaders import load_yaml

logger = logging.getLogger(__name__)

PARAM_KEYS = ("e_min", "e_max", "p_c_max", "p_d_max", "eta_c", "eta_d")
SUMMARY_METRICS = (
    "runtime_ms", "simult_pct", "rmse", "rmse_rel",
    "total_cost_rel", "load_shed", "curtailment", "capacity_invested",
)  # fmt: skip


def load_bess_params(params_file=None):
    """
    Read one BESS and its initial energy from YAML.

    The file holds ``e_min, e_max, p_c_max, p_d_max, eta_c, eta_d`` and an
    optional ``e0`` (midpoint when absent). Without a file the worked
    example battery is returned.
    """
    if params_file is None:
        return EXAMPLE_PARAMS, EXAMPLE_INITIAL
    data = load_yaml(params_file)
    missing = [k for k in PARAM_KEYS if k not in data]
    if missing:
        raise ConfigError(f"{params_file} lacks BESS parameters {missing}")
    try:
        params = BessParams(**{k: float(data[k]) for k in PARAM_KEYS})
        init = BessInitial(float(data["e0"])) if data.get("e0") is not None else BessInitial.midpoint(params)
        init.check(params)
    except (TypeError, ValueError) as e:
        raise ConfigError(f"Invalid BESS parameters in {params_file}: {e}") from e
    return params, init


def emit_region(params_file=None, model="all", grid_n=101, out="region.csv"):
    """
    Write the feasible-region grid of one BESS as CSV.

    Parameters:
    -----------
    params_file : str or Path, optional
        YAML file read by :func:`load_bess_params`
    model : str
        Model kind, or ``"all"`` for every kind
    grid_n : int
        Points per axis
    out : str or Path
        Output CSV (``model,pc,pd,feasible``)
    """
    if grid_n < 2:
        raise ConfigError(f"grid_n must be >= 2, got {grid_n}")
    params, init = load_bess_params(params_file)
    kinds = ALL_KINDS if str(model).lower() == "all" else (ModelKind.parse(model),)
    frame = region_grid(params, init, kinds=kinds, n=grid_n)
    return write_region(frame, out)


def emit_perf_curve(report_path, out):
    """
    Write one performance curve per model found in a report.

    Curves go to ``<out stem>_<model><suffix>`` next to ``out``.

    Returns:
    --------
    list of Path
        Files written, in model order
    """
    frame = read_report(report_path)
    out = Path(out)
    suffix = out.suffix or ".csv"
    order = [k.value for k in ALL_KINDS]
    models = sorted(frame["model"].unique(), key=lambda m: order.index(m) if m in order else len(order))
    written = []
    for model in models:
        rows = frame[frame["model"] == model]
        curve = perf_curve(rows["runtime_ms"], rows["status"])
        written.append(write_perf_curve(curve, out.with_name(f"{out.stem}_{model}{suffix}")))
    return written


def summarize(report_path) -> pd.DataFrame:
    """
    Per-(problem, model, n_bess) arithmetic means over optimal rows.

    ``runs`` counts every row of the group, ``solved`` the optimal ones.
    """
    frame = read_report(report_path)
    metrics = [c for c in SUMMARY_METRICS if c in frame.columns]
    keys = ["problem", "model", "n_bess"]
    counts = frame.groupby(keys, sort=False).agg(
        runs=("status", "size"), solved=("status", lambda s: int((s == "optimal").sum()))
    )
    solved = frame[frame["status"] == "optimal"]
    means = solved.groupby(keys, sort=False)[metrics].mean()
    table = counts.join(means, how="left").reset_index()
    order = {k.value: i for i, k in enumerate(ALL_KINDS)}
    table["_order"] = table["model"].map(order)
    table = table.sort_values(["problem", "n_bess", "_order"]).drop(columns="_order")
    logger.info("Summarized %d report rows into %d groups", len(frame), len(table))
    return table.reset_index(drop=True)
