"""
Experiment plans package

Plans that run the SPT and TEP experiment matrices and post-process their
reports.
"""

from .analysis_plans import emit_perf_curve
from .analysis_plans import emit_region
from .analysis_plans import load_bess_params
from .analysis_plans import summarize
from .experiment_plans import ExperimentReport
from .experiment_plans import RunConfig
from .experiment_plans import collect
from .experiment_plans import profile_pool
from .experiment_plans import run_spt
from .experiment_plans import run_tep
from .experiment_plans import spt_task
from .experiment_plans import tep_task

EXPERIMENT_PLANS = {
    "run_spt": run_spt,
    "run_tep": run_tep,
}

ANALYSIS_PLANS = {
    "emit_region": emit_region,
    "emit_perf_curve": emit_perf_curve,
    "summarize": summarize,
}

PLAN_CATEGORIES = {
    "experiment": list(EXPERIMENT_PLANS),
    "analysis": list(ANALYSIS_PLANS),
}

ALL_PLANS = {**EXPERIMENT_PLANS, **ANALYSIS_PLANS}


def list_plans(category=None):
    """
    Plan names, by category.

    Parameters:
    -----------
    category : str, optional
        ``"experiment"`` or ``"analysis"``; all categories when omitted

    Returns:
    --------
    dict or list
        ``{category: [names]}``, or the names of one category
    """
    if category is None:
        return PLAN_CATEGORIES
    if category not in PLAN_CATEGORIES:
        raise ValueError(f"Unknown plan category {category!r}. Available: {sorted(PLAN_CATEGORIES)}")
    return PLAN_CATEGORIES[category]


def get_plan_info(plan_name):
    """Category and one-line summary of ``plan_name`` (``available`` is False when unknown)."""
    plan = ALL_PLANS.get(plan_name)
    if plan is None:
        return {"name": plan_name, "category": None, "available": False, "summary": ""}
    category = "experiment" if plan_name in EXPERIMENT_PLANS else "analysis"
    summary = (plan.__doc__ or "").strip().split("\n", 1)[0]
    return {"name": plan_name, "category": category, "available": True, "summary": summary}


def find_plans_by_keyword(keyword):
    """Plan names containing ``keyword``, case-insensitive."""
    return [name for name in ALL_PLANS if keyword.lower() in name.lower()]


__all__ = [
    "ALL_PLANS",
    "PLAN_CATEGORIES",
    "ExperimentReport",
    "RunConfig",
    "collect",
    "emit_perf_curve",
    "emit_region",
    "find_plans_by_keyword",
    "get_plan_info",
    "list_plans",
    "load_bess_params",
    "profile_pool",
    "run_spt",
    "run_tep",
    "spt_task",
    "tep_task",
    "summarize",
]
