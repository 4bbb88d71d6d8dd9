"""
SPT and TEP instance bundles.

An instance is fully determined by the experiment seed, its indices and the
profile pool; :func:`spt_instance_for` and :func:`tep_instance_for` derive
the generator from those alone.
"""

import hashlib
import json
import logging
from dataclasses import dataclass
from dataclasses import field

import numpy as np

from ..utils.config_loaders import load_yaml
from ..utils.config_loaders import resolve_config_path
from .profiles import HOURS
from .profiles import ProfileError
from .profiles import select_pool
from .rng import child_rng
from .sampling import DEFAULT_RANGES
from .sampling import sample_fleet

logger = logging.getLogger(__name__)

# Normalized daily demand with a morning and an evening peak.
DEMAND_SHAPE = (
    0.55, 0.50, 0.47, 0.45, 0.46, 0.52, 0.66, 0.82, 0.90, 0.86, 0.78, 0.72,
    0.68, 0.66, 0.66, 0.70, 0.78, 0.90, 0.98, 1.00, 0.96, 0.86, 0.74, 0.62,
)  # fmt: skip

DEFAULT_TEP_DATASET = "tep_dataset.yml"


class DatasetError(ValueError):
    """Inconsistent TEP dataset or instance request."""


def load_demand_shape(path):
    """Read a ``DEMAND_SHAPE`` list of 24 values in ``[0, 1]`` from YAML."""
    shape = load_yaml(path).get("DEMAND_SHAPE")
    if shape is None or len(shape) != HOURS:
        raise ProfileError(f"{path}: DEMAND_SHAPE must list {HOURS} values")
    shape = tuple(float(v) for v in shape)
    if any(not 0.0 <= v <= 1.0 for v in shape):
        raise ProfileError(f"{path}: DEMAND_SHAPE values must be in [0, 1]")
    return shape


def _fleet_dict(fleet):
    return [{**params.as_dict(), "e0": init.e0} for params, init in fleet]


def canonical_json(data) -> str:
    """Sorted-key, compact JSON with ``repr`` floats."""
    return json.dumps(data, sort_keys=True, separators=(",", ":"))


# SPT


@dataclass(frozen=True)
class SptSettings:
    """Signal scaling and pool selection for SPT instances."""

    demand_factor: float = 1.2
    res_factor: float = 1.5
    profile_kind: str = "solar"
    demand_shape: tuple = DEMAND_SHAPE

    @classmethod
    def from_config(cls, section=None):
        """Build from the iconfig ``SPT`` section."""
        section = section or {}
        kwargs = {}
        if section.get("DEMAND_FACTOR") is not None:
            kwargs["demand_factor"] = float(section["DEMAND_FACTOR"])
        if section.get("RES_FACTOR") is not None:
            kwargs["res_factor"] = float(section["RES_FACTOR"])
        if section.get("PROFILE_KIND"):
            kwargs["profile_kind"] = str(section["PROFILE_KIND"])
        if section.get("DEMAND_SHAPE_FILE"):
            kwargs["demand_shape"] = load_demand_shape(section["DEMAND_SHAPE_FILE"])
        return cls(**kwargs)


@dataclass(frozen=True)
class SptInstance:
    """Tracking signal and BESS fleet of one set-point tracking instance."""

    signal: tuple
    fleet: tuple
    profile: object = None
    horizon: int = HOURS

    def __post_init__(self):
        if not self.fleet:
            raise DatasetError("SPT instance needs at least one BESS")
        if len(self.signal) != self.horizon:
            raise DatasetError(f"SPT signal has {len(self.signal)} values, horizon is {self.horizon}")

    @property
    def n_bess(self):
        return len(self.fleet)

    def to_dict(self):
        return {
            "horizon": self.horizon,
            "signal": list(self.signal),
            "fleet": _fleet_dict(self.fleet),
            "profile_day": getattr(self.profile, "day", None),
        }

    def digest(self):
        return hashlib.sha256(canonical_json(self.to_dict()).encode()).hexdigest()


def make_spt_instance(rng, n_bess, profiles, settings: SptSettings | None = None, ranges=DEFAULT_RANGES):
    """
    Sample a fleet, then a renewable profile, and build the tracking signal
    ``shape * D - res * R`` with ``D = demand_factor * mean(p_d_max)`` and
    ``R = res_factor * D``.
    """
    settings = settings or SptSettings()
    fleet = sample_fleet(rng, n_bess, ranges)
    pool = select_pool(profiles, settings.profile_kind)
    profile = pool[int(rng.integers(len(pool)))]

    demand_scale = settings.demand_factor * float(np.mean([p.p_d_max for p, _ in fleet]))
    res_scale = settings.res_factor * demand_scale
    signal = np.asarray(settings.demand_shape) * demand_scale - profile.as_array() * res_scale
    return SptInstance(tuple(float(s) for s in signal), fleet, profile)


def spt_instance_for(seed, n_bess, index, profiles, settings=None, ranges=DEFAULT_RANGES):
    """SPT instance ``index`` of the ``n_bess`` series under ``seed``."""
    return make_spt_instance(child_rng(seed, n_bess, index, tag="spt"), n_bess, profiles, settings, ranges)


# TEP


@dataclass(frozen=True)
class Corridor:
    from_node: int
    to_node: int
    existing_capacity: float
    candidate_capacity: float
    candidate_count: int
    capex_per_line_per_day: float


@dataclass(frozen=True)
class Generator:
    node: int
    capacity: float
    marginal_cost: float


@dataclass(frozen=True)
class TepDataset:
    """Network, generation and cost data of the TEP study."""

    nodes: int
    corridors: tuple
    generators: tuple
    demand_peak: dict
    res_capacity: dict
    bess_node: int
    shed_penalty: float

    def __post_init__(self):
        node_ids = set(range(1, self.nodes + 1))
        for c in self.corridors:
            if c.from_node == c.to_node:
                raise DatasetError(f"Corridor {c.from_node}-{c.to_node} must connect distinct nodes")
            if {c.from_node, c.to_node} - node_ids:
                raise DatasetError(f"Corridor {c.from_node}-{c.to_node} uses an unknown node")
            if min(c.existing_capacity, c.candidate_capacity, c.capex_per_line_per_day) < 0:
                raise DatasetError(f"Corridor {c.from_node}-{c.to_node} has a negative value")
            if c.candidate_count < 0:
                raise DatasetError(f"Corridor {c.from_node}-{c.to_node} has negative candidate_count")
        for g in self.generators:
            if g.node not in node_ids or g.capacity < 0:
                raise DatasetError(f"Generator at node {g.node} is invalid")
        for name in ("demand_peak", "res_capacity"):
            mapping = getattr(self, name)
            if set(mapping) - node_ids or any(v < 0 for v in mapping.values()):
                raise DatasetError(f"{name} must map nodes 1..{self.nodes} to values >= 0")
        if self.bess_node not in node_ids:
            raise DatasetError(f"bess_node {self.bess_node} is not a node")
        if not self.shed_penalty > max((g.marginal_cost for g in self.generators), default=0.0):
            raise DatasetError("shed_penalty must exceed every marginal cost")

    @property
    def node_ids(self):
        return tuple(range(1, self.nodes + 1))

    @property
    def total_candidate_capacity(self):
        return sum(c.candidate_capacity * c.candidate_count for c in self.corridors)

    def to_dict(self):
        return {
            "nodes": self.nodes,
            "corridors": [vars(c) for c in self.corridors],
            "generators": [vars(g) for g in self.generators],
            "demand_peak": {str(k): v for k, v in sorted(self.demand_peak.items())},
            "res_capacity": {str(k): v for k, v in sorted(self.res_capacity.items())},
            "bess_node": self.bess_node,
            "shed_penalty": self.shed_penalty,
        }


def load_tep_dataset(path=None) -> TepDataset:
    """Read the TEP dataset YAML (packaged default when ``path`` is None)."""
    path = resolve_config_path(path or DEFAULT_TEP_DATASET)
    raw = load_yaml(path)
    try:
        nodes = int(raw["nodes"])
        corridors = tuple(
            Corridor(
                int(c["from"]),
                int(c["to"]),
                float(c["existing_capacity"]),
                float(c["candidate_capacity"]),
                int(c["candidate_count"]),
                float(c["capex_per_line_per_day"]),
            )
            for c in raw["corridors"]
        )
        generators = tuple(
            Generator(int(g["node"]), float(g["capacity"]), float(g["marginal_cost"]))
            for g in raw["generators"]
        )
        demand_peak = {int(k): float(v) for k, v in raw["demand_peak"].items()}
        res_capacity = {int(k): float(v) for k, v in raw["res_capacity"].items()}
        dataset = TepDataset(
            nodes,
            corridors,
            generators,
            demand_peak,
            res_capacity,
            int(raw["bess_node"]),
            float(raw["shed_penalty"]),
        )
    except (KeyError, TypeError, AttributeError) as e:
        raise DatasetError(f"{path}: missing or malformed key {e}") from e
    logger.debug("Loaded TEP dataset from %s", path)
    return dataset


@dataclass(frozen=True)
class TepInstance:
    """Dataset, storage fleet and per-node daily RES profiles for ``days`` days."""

    dataset: TepDataset
    fleet: tuple
    days: int
    res_profiles: dict = field(default_factory=dict)
    demand_shape: tuple = DEMAND_SHAPE

    def __post_init__(self):
        if self.days < 1:
            raise DatasetError(f"TEP instance needs days >= 1, got {self.days}")
        for node, daily in self.res_profiles.items():
            if len(daily) != self.days:
                raise DatasetError(f"Node {node} has {len(daily)} profiles for {self.days} days")

    @property
    def n_bess(self):
        return len(self.fleet)

    def demand(self, node, hour):
        """Demand at ``node`` in hour ``hour`` (0-based)."""
        return self.dataset.demand_peak.get(node, 0.0) * self.demand_shape[hour]

    def res_available(self, node, day, hour):
        """Available RES power at ``node`` in ``day``/``hour`` (0-based)."""
        capacity = self.dataset.res_capacity.get(node, 0.0)
        if capacity == 0.0 or node not in self.res_profiles:
            return 0.0
        return capacity * self.res_profiles[node][day].values[hour]

    def to_dict(self):
        return {
            "dataset": self.dataset.to_dict(),
            "fleet": _fleet_dict(self.fleet),
            "days": self.days,
            "demand_shape": list(self.demand_shape),
            "res_profiles": {
                str(node): [list(p.values) for p in daily]
                for node, daily in sorted(self.res_profiles.items())
            },
        }

    def to_canonical_json(self):
        return canonical_json(self.to_dict())

    def digest(self):
        return hashlib.sha256(self.to_canonical_json().encode()).hexdigest()


def make_tep_instance(
    rng, n_bess, days, profiles, dataset: TepDataset | None = None, ranges=DEFAULT_RANGES,
    demand_shape=DEMAND_SHAPE,
):
    """
    Sample the storage fleet, then one wind profile per node and day.

    Profiles are drawn node by node; nodes without RES capacity draw too so
    that the stream does not depend on the dataset's capacities.
    """
    if days < 1:
        raise DatasetError(f"TEP instance needs days >= 1, got {days}")
    dataset = dataset or load_tep_dataset()
    fleet = sample_fleet(rng, n_bess, ranges)
    pool = select_pool(profiles, "wind")
    res_profiles = {}
    for node in dataset.node_ids:
        picks = rng.integers(len(pool), size=days)
        res_profiles[node] = tuple(pool[int(i)] for i in picks)
    return TepInstance(dataset, fleet, days, res_profiles, tuple(demand_shape))


def tep_instance_for(seed, n_bess, index, days, profiles, dataset=None, ranges=DEFAULT_RANGES):
    """TEP instance ``index`` of the ``n_bess`` series under ``seed``."""
    return make_tep_instance(
        child_rng(seed, n_bess, index, tag="tep"), n_bess, days, profiles, dataset, ranges
    )
