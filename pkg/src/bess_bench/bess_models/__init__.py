"""
BESS formulations and single-period region geometry.
"""

from .formulations import BessVars
from .formulations import EmptyHorizonError
from .formulations import build
from .formulations import soe_telescoping_residual
from .geometry import HullFacet
from .geometry import RegionDomainError
from .geometry import RegionEvaluator
from .geometry import actual_charge_limit
from .geometry import actual_discharge_limit
from .geometry import hull_facet
from .geometry import hull_region_contains
from .geometry import region_contains
from .geometry import region_grid
from .params import ALL_KINDS
from .params import EXAMPLE_INITIAL
from .params import EXAMPLE_PARAMS
from .params import BessInitial
from .params import BessParams
from .params import DivisionGuardError
from .params import InvalidParametersError
from .params import ModelKind
from .params import NaDerived
from .params import na_derived

__all__ = [
    "ALL_KINDS",
    "EXAMPLE_INITIAL",
    "EXAMPLE_PARAMS",
    "BessInitial",
    "BessParams",
    "BessVars",
    "DivisionGuardError",
    "EmptyHorizonError",
    "HullFacet",
    "InvalidParametersError",
    "ModelKind",
    "NaDerived",
    "RegionDomainError",
    "RegionEvaluator",
    "actual_charge_limit",
    "actual_discharge_limit",
    "build",
    "hull_facet",
    "hull_region_contains",
    "na_derived",
    "region_contains",
    "region_grid",
    "soe_telescoping_residual",
]
