"""
Seeded generation of BESS fleets, renewable profiles and SPT/TEP instances.
"""

from .bundles import DEMAND_SHAPE
from .bundles import Corridor
from .bundles import DatasetError
from .bundles import Generator
from .bundles import SptInstance
from .bundles import SptSettings
from .bundles import TepDataset
from .bundles import TepInstance
from .bundles import canonical_json
from .bundles import load_demand_shape
from .bundles import load_tep_dataset
from .bundles import make_spt_instance
from .bundles import make_tep_instance
from .bundles import spt_instance_for
from .bundles import tep_instance_for
from .profiles import EmptyPoolError
from .profiles import Profile
from .profiles import ProfileError
from .profiles import load_profiles
from .profiles import select_pool
from .profiles import synth_pool
from .profiles import synth_profile
from .profiles import write_profiles
from .rng import child_rng
from .sampling import DEFAULT_RANGES
from .sampling import SamplingRanges
from .sampling import sample_bess
from .sampling import sample_fleet

__all__ = [
    "DEFAULT_RANGES",
    "DEMAND_SHAPE",
    "Corridor",
    "DatasetError",
    "EmptyPoolError",
    "Generator",
    "Profile",
    "ProfileError",
    "SamplingRanges",
    "SptInstance",
    "SptSettings",
    "TepDataset",
    "TepInstance",
    "canonical_json",
    "child_rng",
    "load_demand_shape",
    "load_profiles",
    "load_tep_dataset",
    "make_spt_instance",
    "make_tep_instance",
    "sample_bess",
    "sample_fleet",
    "select_pool",
    "spt_instance_for",
    "synth_pool",
    "synth_profile",
    "tep_instance_for",
    "write_profiles",
]
