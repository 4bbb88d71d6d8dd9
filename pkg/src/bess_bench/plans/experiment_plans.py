"""
Experiment plans
================

Run the SPT and TEP experiment matrices: every (n_bess, instance, model)
triple is one task that regenerates its instance from the seed, assembles,
solves and measures. Tasks are independent, so they run in a process pool
when ``workers > 1``; the collector sorts rows canonically and anchors the
relative columns to the Exc row of the same instance.

.. autosummary::
    ~RunConfig
    ~ExperimentReport
    ~run_spt
    ~run_tep
"""

import functools
import logging
import math
import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass
from dataclasses import field

import pandas as pd

from ..bess_models import ALL_KINDS
from ..bess_models import ModelKind
from ..callbacks import SPT_COLUMNS
from ..callbacks import TEP_COLUMNS
from ..callbacks import dump_problem
from ..callbacks import write_report
from ..instances import DEFAULT_RANGES
from ..instances import SamplingRanges
from ..instances import SptSettings
from ..instances import load_profiles
from ..instances import load_tep_dataset
from ..instances import spt_instance_for
from ..instances import synth_pool
from ..instances import tep_instance_for
from ..metrics import relative
from ..metrics import spt_metrics
from ..metrics import tep_metrics
from ..problems import assemble_spt
from ..problems import assemble_tep
from ..solver import SolveConfig
from ..solver import solve
from ..utils.config_loaders import ConfigError

logger = logging.getLogger(__name__)

MODEL_ORDER = {kind.value: i for i, kind in enumerate(ALL_KINDS)}


@dataclass(frozen=True)
class RunConfig:
    """
    Settings of one experiment run.

    ``profiles`` is a CSV path or ``"synthetic"``; the synthetic pool is
    defined by ``synthetic_seed``, ``n_solar`` and ``n_wind``.
    """

    seed: int = 20220101
    n_instances: int = 100
    bess_counts: tuple = (1, 2, 3, 4, 5)
    models: tuple = ALL_KINDS
    days: int = 50
    profiles: str = "synthetic"
    out: str | None = None
    workers: int = 1
    solve: SolveConfig = field(default_factory=SolveConfig)
    spt: SptSettings = field(default_factory=SptSettings)
    sampling: SamplingRanges = DEFAULT_RANGES
    synthetic_seed: int = 1450
    n_solar: int = 725
    n_wind: int = 725
    tep_dataset: str | None = None
    symmetry_cuts: bool = False
    dump_problems: str | None = None

    def __post_init__(self):
        object.__setattr__(self, "models", tuple(ModelKind.parse(m) for m in self.models))
        object.__setattr__(self, "bess_counts", tuple(int(n) for n in self.bess_counts))
        if self.n_instances < 1:
            raise ConfigError(f"n_instances must be >= 1, got {self.n_instances}")
        if not self.models:
            raise ConfigError("At least one model is required")
        if not self.bess_counts or min(self.bess_counts) < 1:
            raise ConfigError(f"bess_counts must be >= 1, got {self.bess_counts}")
        if self.days < 1:
            raise ConfigError(f"days must be >= 1, got {self.days}")
        if self.workers < 1:
            raise ConfigError(f"workers must be >= 1, got {self.workers}")

    @classmethod
    def from_config(cls, iconfig, **overrides):
        """
        Build from an iconfig mapping; keyword overrides win when not None.

        Parameters:
        -----------
        iconfig : dict
            Loaded iconfig (``EXPERIMENT``, ``SOLVER``, ``SPT``, ``TEP``,
            ``SAMPLING``, ``SYNTHETIC_PROFILES`` sections)
        overrides
            RunConfig fields; ``mip_rel_gap`` is applied to the SolveConfig
        """
        exp = iconfig.get("EXPERIMENT", {})
        synthetic = iconfig.get("SYNTHETIC_PROFILES", {})
        tep = iconfig.get("TEP", {})
        mip_gap = overrides.pop("mip_rel_gap", None)
        try:
            kwargs = dict(
                seed=int(exp.get("SEED", cls.seed)),
                n_instances=int(exp.get("N_INSTANCES", cls.n_instances)),
                bess_counts=tuple(exp.get("BESS_COUNTS", cls.bess_counts)),
                models=tuple(exp.get("MODELS", [k.value for k in ALL_KINDS])),
                days=int(exp.get("DAYS", cls.days)),
                profiles=str(exp.get("PROFILES", cls.profiles)),
                workers=int(exp.get("WORKERS", cls.workers)),
                solve=SolveConfig.from_config(iconfig.get("SOLVER"), mip_rel_gap=mip_gap),
                spt=SptSettings.from_config(iconfig.get("SPT")),
                sampling=SamplingRanges.from_config(iconfig.get("SAMPLING")),
                synthetic_seed=int(synthetic.get("SEED", cls.synthetic_seed)),
                n_solar=int(synthetic.get("N_SOLAR", cls.n_solar)),
                n_wind=int(synthetic.get("N_WIND", cls.n_wind)),
                tep_dataset=tep.get("DATASET"),
                symmetry_cuts=bool(tep.get("SYMMETRY_CUTS", False)),
            )
        except ConfigError:
            raise
        except (TypeError, ValueError) as e:
            raise ConfigError(f"Invalid iconfig value: {e}") from e
        kwargs.update({k: v for k, v in overrides.items() if v is not None})
        return cls(**kwargs)


@dataclass
class ExperimentReport:
    """Rows of one experiment, canonically sorted."""

    problem: str
    frame: pd.DataFrame

    @property
    def columns(self):
        return SPT_COLUMNS if self.problem == "spt" else TEP_COLUMNS

    @property
    def n_failures(self):
        return int((self.frame["status"] != "optimal").sum())

    def write(self, path):
        return write_report(self.frame, path, self.columns)


@functools.lru_cache(maxsize=4)
def _pool(source, synthetic_seed, n_solar, n_wind):
    if source == "synthetic":
        return tuple(synth_pool(synthetic_seed, n_solar, n_wind))
    return tuple(load_profiles(source))


def profile_pool(cfg: RunConfig):
    """Profile pool of ``cfg`` (cached per process)."""
    return _pool(cfg.profiles, cfg.synthetic_seed, cfg.n_solar, cfg.n_wind)


@functools.lru_cache(maxsize=4)
def _dataset(path):
    return load_tep_dataset(path)


def _timed_solve(problem, cfg):
    start = time.perf_counter()
    sol = solve(problem, cfg)
    elapsed = 1e3 * (time.perf_counter() - start)
    return sol, elapsed


def _base_row(problem, kind, n_bess, index, sol, runtime_ms, digest):
    return {
        "problem": problem,
        "model": kind.value,
        "n_bess": n_bess,
        "instance": index,
        "status": sol.status.value,
        "objective": sol.objective,
        "runtime_ms": runtime_ms,
        "gap": sol.gap,
        "digest": digest,
    }


def spt_task(cfg: RunConfig, n_bess, index, kind):
    """Solve SPT instance ``(n_bess, index)`` under ``kind``; return its report row."""
    inst = spt_instance_for(cfg.seed, n_bess, index, profile_pool(cfg), cfg.spt, cfg.sampling)
    asm = assemble_spt(inst, kind)
    if cfg.dump_problems:
        dump_problem(asm.problem, cfg.dump_problems, f"spt_n{n_bess}_i{index}_{kind.value}")
    sol, runtime_ms = _timed_solve(asm.problem, cfg.solve)
    row = _base_row("spt", kind, n_bess, index, sol, runtime_ms, inst.digest())
    m = spt_metrics(sol, asm)
    row.update(simult_pct=m.simult_pct, rmse=m.rmse)
    return row


def tep_task(cfg: RunConfig, n_bess, index, kind):
    """Solve TEP instance ``(n_bess, index)`` under ``kind``; return its report row."""
    dataset = _dataset(cfg.tep_dataset)
    inst = tep_instance_for(cfg.seed, n_bess, index, cfg.days, profile_pool(cfg), dataset, cfg.sampling)
    asm = assemble_tep(inst, kind, symmetry_cuts=cfg.symmetry_cuts)
    if cfg.dump_problems:
        dump_problem(asm.problem, cfg.dump_problems, f"tep_n{n_bess}_i{index}_{kind.value}")
    sol, runtime_ms = _timed_solve(asm.problem, cfg.solve)
    row = _base_row("tep", kind, n_bess, index, sol, runtime_ms, inst.digest())
    m = tep_metrics(sol, asm)
    row.update(
        simult_pct=m.simult_pct,
        load_shed=m.load_shed,
        curtailment=m.curtailment,
        capacity_invested=m.capacity_invested,
    )
    return row


def _call(args):
    task, cfg, n_bess, index, kind = args
    return task(cfg, n_bess, index, kind)


def _execute(task, cfg: RunConfig):
    jobs = [
        (task, cfg, n_bess, index, kind)
        for n_bess in cfg.bess_counts
        for index in range(cfg.n_instances)
        for kind in cfg.models
    ]
    logger.info(
        "Running %d tasks (%d instances x %d fleet sizes x %d models) with %d worker(s)",
        len(jobs), cfg.n_instances, len(cfg.bess_counts), len(cfg.models), cfg.workers,
    )
    if cfg.workers > 1:
        with ProcessPoolExecutor(max_workers=cfg.workers) as executor:
            return list(executor.map(_call, jobs))
    return [_call(job) for job in jobs]


def _anchor(frame, source, target, transform):
    """Fill ``target`` with ``transform(row[source], exc[source])`` per instance."""
    exc = frame[(frame["model"] == ModelKind.EXC.value) & (frame["status"] == "optimal")]
    reference = {(r.n_bess, r.instance): getattr(r, source) for r in exc.itertuples()}
    frame[target] = [
        transform(value, reference[(n, i)]) if (n, i) in reference and pd.notna(value) else math.nan
        for n, i, value in zip(frame["n_bess"], frame["instance"], frame[source])
    ]


def collect(problem, rows):
    """Sort rows by (n_bess, instance, model) and add the Exc-relative columns."""
    columns = (SPT_COLUMNS if problem == "spt" else TEP_COLUMNS) + ["digest"]
    frame = pd.DataFrame(rows).reindex(columns=columns)
    frame["_order"] = frame["model"].map(MODEL_ORDER)
    frame = frame.sort_values(["n_bess", "instance", "_order"], kind="stable")
    frame = frame.drop(columns="_order").reset_index(drop=True)
    if problem == "spt":
        _anchor(frame, "rmse", "rmse_rel", relative)
    else:
        frame["objective_for_rel"] = frame["objective"].where(frame["status"] == "optimal")
        _anchor(frame, "objective_for_rel", "total_cost_rel", relative)
        frame = frame.drop(columns="objective_for_rel")
    return ExperimentReport(problem, frame)


def _finish(report, cfg):
    failures = report.n_failures
    if failures:
        logger.warning("%d of %d %s rows did not solve to optimality", failures, len(report.frame), report.problem)
    if cfg.out:
        report.write(cfg.out)
    logger.info("%s experiment finished: %d rows", report.problem.upper(), len(report.frame))
    return report


def run_spt(cfg: RunConfig) -> ExperimentReport:
    """
    Run the SPT matrix of ``cfg``.

    Each (n_bess, instance) uses the same input data for every model;
    ``rmse_rel`` divides by the optimal Exc row of the same instance.
    """
    rows = _execute(spt_task, cfg)
    return _finish(collect("spt", rows), cfg)


def run_tep(cfg: RunConfig) -> ExperimentReport:
    """Run the TEP matrix of ``cfg``; ``total_cost_rel`` is relative to Exc."""
    rows = _execute(tep_task, cfg)
    return _finish(collect("tep", rows), cfg)

