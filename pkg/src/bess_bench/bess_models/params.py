"""
BESS parameter records and model kinds.
"""

import enum
import math
from dataclasses import dataclass


class InvalidParametersError(ValueError):
    """BESS parameters or initial state outside their valid domain."""


class DivisionGuardError(InvalidParametersError):
    """Zero power rating where a formulation divides by it."""


class ModelKind(str, enum.Enum):
    """The five BESS formulations."""

    EXC = "Exc"
    LP = "LP"
    NA = "NA"
    REL_YZ = "RelYZ"
    EXT_LP = "ExtLP"

    @classmethod
    def parse(cls, name):
        """Case-insensitive lookup by value (``"extlp"`` -> ``EXT_LP``)."""
        if isinstance(name, cls):
            return name
        for kind in cls:
            if kind.value.lower() == str(name).strip().lower():
                return kind
        raise InvalidParametersError(
            f"Unknown model kind {name!r}. Available: {[k.value for k in cls]}"
        )

    @property
    def has_binaries(self):
        return self is ModelKind.EXC

    @property
    def tracks_energy(self):
        return self is not ModelKind.NA


ALL_KINDS = tuple(ModelKind)


@dataclass(frozen=True)
class BessParams:
    """Energy window (pu), power ratings (pu) and efficiencies of one BESS."""

    e_min: float
    e_max: float
    p_c_max: float
    p_d_max: float
    eta_c: float
    eta_d: float

    def __post_init__(self):
        for name in ("e_min", "e_max", "p_c_max", "p_d_max", "eta_c", "eta_d"):
            value = float(getattr(self, name))
            if not math.isfinite(value):
                raise InvalidParametersError(f"BessParams.{name} must be finite, got {value}")
            object.__setattr__(self, name, value)
        if not 0.0 <= self.e_min < self.e_max:
            raise InvalidParametersError(
                f"BessParams needs 0 <= e_min < e_max, got e_min={self.e_min}, e_max={self.e_max}"
            )
        if self.p_c_max == 0.0 or self.p_d_max == 0.0:
            raise DivisionGuardError(
                f"BessParams power ratings must be non-zero, got p_c_max={self.p_c_max}, "
                f"p_d_max={self.p_d_max}"
            )
        if not (self.p_c_max > 0.0 and self.p_d_max > 0.0):
            raise InvalidParametersError(
                f"BessParams power ratings must be > 0, got p_c_max={self.p_c_max}, "
                f"p_d_max={self.p_d_max}"
            )
        for name in ("eta_c", "eta_d"):
            value = getattr(self, name)
            if not 0.0 < value <= 1.0:
                raise InvalidParametersError(f"BessParams.{name} must be in (0, 1], got {value}")

    @property
    def e_mid(self):
        return 0.5 * (self.e_min + self.e_max)

    def as_dict(self):
        return {
            "e_min": self.e_min,
            "e_max": self.e_max,
            "p_c_max": self.p_c_max,
            "p_d_max": self.p_d_max,
            "eta_c": self.eta_c,
            "eta_d": self.eta_d,
        }


@dataclass(frozen=True)
class BessInitial:
    """Initial state of energy ``e0`` (pu)."""

    e0: float

    def check(self, params: BessParams):
        if not params.e_min <= self.e0 <= params.e_max:
            raise InvalidParametersError(
                f"Initial energy {self.e0} outside [{params.e_min}, {params.e_max}]"
            )
        return self

    @classmethod
    def midpoint(cls, params: BessParams):
        return cls(params.e_mid)


@dataclass(frozen=True)
class NaDerived:
    """Single efficiency and single power rating of the NA formulation."""

    eta_single: float
    p_max_single: float


def na_derived(params: BessParams, override_pmax=None) -> NaDerived:
    """
    Derive the NA efficiency ``(1/eta_d + eta_c) / 2`` and power rating.

    The rating defaults to ``max(p_c_max, p_d_max)``. The efficiency can
    exceed 1.
    """
    eta = 0.5 * (1.0 / params.eta_d + params.eta_c)
    if override_pmax is None:
        p_max = max(params.p_c_max, params.p_d_max)
    else:
        p_max = float(override_pmax)
        if not p_max > 0.0:
            raise InvalidParametersError(f"NA power rating override must be > 0, got {p_max}")
    return NaDerived(eta, p_max)


# Single-BESS example used throughout the region figures.
EXAMPLE_PARAMS = BessParams(e_min=0.7, e_max=2.0, p_c_max=0.8, p_d_max=1.0, eta_c=0.85, eta_d=0.9)
EXAMPLE_INITIAL = BessInitial(1.5)
