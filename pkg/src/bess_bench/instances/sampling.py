"""
BESS parameter sampling.
"""

from dataclasses import dataclass

from ..bess_models import BessInitial
from ..bess_models import BessParams


@dataclass(frozen=True)
class SamplingRanges:
    """Uniform ``(low, high)`` ranges of each BESS parameter."""

    e_min: tuple = (0.0, 30.0)
    e_max: tuple = (40.0, 80.0)
    p_c_max: tuple = (10.0, 20.0)
    p_d_max: tuple = (10.0, 20.0)
    eta_c: tuple = (0.75, 1.0)
    eta_d: tuple = (0.75, 1.0)

    @classmethod
    def from_config(cls, section=None):
        """Build from the iconfig ``SAMPLING`` section (upper-case keys)."""
        kwargs = {}
        for name in cls.__dataclass_fields__:
            value = (section or {}).get(name.upper())
            if value is not None:
                low, high = (float(v) for v in value)
                kwargs[name] = (low, high)
        return cls(**kwargs)


DEFAULT_RANGES = SamplingRanges()


def sample_bess(rng, ranges: SamplingRanges = DEFAULT_RANGES):
    """
    Draw one BESS and its initial state.

    Draw order is e_min, e_max, p_c_max, p_d_max, eta_c, eta_d; the initial
    energy is the midpoint of the energy window.

    Returns:
    --------
    tuple
        ``(BessParams, BessInitial)``
    """
    params = BessParams(
        e_min=rng.uniform(*ranges.e_min),
        e_max=rng.uniform(*ranges.e_max),
        p_c_max=rng.uniform(*ranges.p_c_max),
        p_d_max=rng.uniform(*ranges.p_d_max),
        eta_c=rng.uniform(*ranges.eta_c),
        eta_d=rng.uniform(*ranges.eta_d),
    )
    return params, BessInitial.midpoint(params)


def sample_fleet(rng, n_bess, ranges: SamplingRanges = DEFAULT_RANGES):
    return tuple(sample_bess(rng, ranges) for _ in range(n_bess))
