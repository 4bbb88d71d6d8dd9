"""
Single-period feasible regions in the (pc, pd) plane.

Membership is evaluated on the same constraint rows the builders emit: a
one-period problem is built once per (kind, params, init) and each query
point is completed with the auxiliary values that make it feasible when any
completion does (SoE from the balance, the least restrictive switch values
for RelYZ, every binary pair for Exc).
"""

import logging
from dataclasses import dataclass

import numpy as np
import pandas as pd

from ..optmodel import Problem
from ..optmodel import Sense
from .formulations import build
from .params import ALL_KINDS
from .params import BessInitial
from .params import BessParams
from .params import ModelKind

logger = logging.getLogger(__name__)

MEMBERSHIP_TOL = 1e-9

_EXC_SWITCHES = ((0.0, 0.0), (1.0, 0.0), (0.0, 1.0), (1.0, 1.0))


class RegionDomainError(ValueError):
    """Negative power passed to a region query."""


def actual_charge_limit(params: BessParams, init: BessInitial) -> float:
    """Point A: largest charge power with no discharge, ``min(Pc, (Emax - E0)/eta_c)``."""
    return min(params.p_c_max, (params.e_max - init.e0) / params.eta_c)


def actual_discharge_limit(params: BessParams, init: BessInitial) -> float:
    """Point B: largest discharge power with no charge, ``min(Pd, (E0 - Emin) eta_d)``."""
    return min(params.p_d_max, (init.e0 - params.e_min) * params.eta_d)


@dataclass(frozen=True)
class HullFacet:
    """Facet ``pd <= b - (b / a) pc`` joining points A and B."""

    a: float
    b: float

    @property
    def degenerate(self):
        return self.a <= 0.0 or self.b <= 0.0

    @property
    def slope(self):
        return -self.b / self.a if self.a > 0.0 else -np.inf

    def pd_limit(self, pc):
        """Facet height at ``pc``; ``None`` when degenerate."""
        if self.degenerate:
            return None
        return self.b - (self.b / self.a) * pc


def hull_facet(params: BessParams, init: BessInitial) -> HullFacet:
    return HullFacet(actual_charge_limit(params, init), actual_discharge_limit(params, init))


def _check_domain(pc, pd):
    if np.any(pc < 0.0) or np.any(pd < 0.0):
        raise RegionDomainError("Region queries need pc >= 0 and pd >= 0")


def hull_region_contains(params: BessParams, init: BessInitial, pc, pd):
    """
    Membership in the convex hull of the exact region, the triangle with
    vertices (0, 0), (A, 0) and (0, B).
    """
    pc = np.asarray(pc, dtype=float)
    pd_ = np.asarray(pd, dtype=float)
    _check_domain(pc, pd_)
    facet = hull_facet(params, init)
    a, b = max(facet.a, 0.0), max(facet.b, 0.0)
    tol = MEMBERSHIP_TOL * max(1.0, a, b)
    inside = (pc <= a + MEMBERSHIP_TOL) & (pd_ <= b + MEMBERSHIP_TOL)
    inside &= b * pc + a * pd_ <= a * b + tol
    return bool(inside) if inside.ndim == 0 else inside


class RegionEvaluator:
    """
    Vectorized membership test for one formulation in a single period.

    Parameters:
    -----------
    kind : ModelKind or str
        Formulation
    params : BessParams
        BESS parameters
    init : BessInitial
        Initial state of energy
    build_options
        Passed to :func:`build` (``na_power_cut``, ``na_pmax``)
    """

    def __init__(self, kind, params: BessParams, init: BessInitial, **build_options):
        self.kind = ModelKind.parse(kind)
        self.params = params
        self.init = init
        self.problem = Problem(f"region.{self.kind.value}")
        self.vars = build(self.kind, params, init, 1, self.problem, **build_options)
        arrays = self.problem.arrays()
        self._a = arrays.a
        self._rhs = arrays.rhs
        self._senses = np.array([s.value for s in arrays.senses])
        self._lower = arrays.lower
        self._upper = arrays.upper

    def _points(self, pc, pd, switch=None):
        """Complete query points to full variable vectors, one row per point."""
        x = np.zeros((len(pc), self.problem.num_variables))
        bv = self.vars
        params = self.params
        x[:, bv.p_c[0].index] = pc
        x[:, bv.p_d[0].index] = pd
        if bv.e is not None:
            x[:, bv.e[0].index] = self.init.e0 + params.eta_c * pc - pd / params.eta_d
        if bv.z is not None:
            if switch is None:
                z = np.clip(pc / params.p_c_max, 0.0, 1.0)
                y = 1.0 - z
            else:
                z = np.full(len(pc), switch[0])
                y = np.full(len(pc), switch[1])
            x[:, bv.z[0].index] = z
            x[:, bv.y[0].index] = y
        return x

    def _feasible(self, x):
        ok = np.all(x >= self._lower - MEMBERSHIP_TOL, axis=1)
        ok &= np.all(x <= self._upper + MEMBERSHIP_TOL, axis=1)
        if len(self._rhs):
            activity = x @ self._a.T
            le = self._senses == Sense.LE.value
            ge = self._senses == Sense.GE.value
            eq = self._senses == Sense.EQ.value
            ok &= np.all(activity[:, le] <= self._rhs[le] + MEMBERSHIP_TOL, axis=1)
            ok &= np.all(activity[:, ge] >= self._rhs[ge] - MEMBERSHIP_TOL, axis=1)
            ok &= np.all(np.abs(activity[:, eq] - self._rhs[eq]) <= MEMBERSHIP_TOL, axis=1)
        return ok

    def contains(self, pc, pd):
        """Boolean (array) membership of the points ``(pc, pd)``."""
        pc = np.asarray(pc, dtype=float)
        pd_ = np.asarray(pd, dtype=float)
        scalar = pc.ndim == 0 and pd_.ndim == 0
        pc, pd_ = np.broadcast_arrays(np.atleast_1d(pc), np.atleast_1d(pd_))
        shape = pc.shape
        pc, pd_ = pc.ravel(), pd_.ravel()
        _check_domain(pc, pd_)

        if self.kind is ModelKind.EXC:
            inside = np.zeros(len(pc), dtype=bool)
            for switch in _EXC_SWITCHES:
                inside |= self._feasible(self._points(pc, pd_, switch))
        else:
            inside = self._feasible(self._points(pc, pd_))
        inside = inside.reshape(shape)
        return bool(inside[0]) if scalar else inside


def region_contains(kind, params: BessParams, init: BessInitial, pc, pd, **build_options) -> bool:
    """
    Whether ``(pc, pd)`` is feasible for one period of formulation ``kind``.

    For Exc a point is a member when some binary assignment makes every row
    hold. Tolerance is ``MEMBERSHIP_TOL``.
    """
    return RegionEvaluator(kind, params, init, **build_options).contains(pc, pd)


def region_grid(params: BessParams, init: BessInitial, kinds=ALL_KINDS, n=101, **build_options):
    """
    Membership of an ``n x n`` grid over ``[0, Pc] x [0, Pd]`` for each kind.

    Returns:
    --------
    pandas.DataFrame
        Columns ``model, pc, pd, feasible``; rows ordered by model, then pc,
        then pd
    """
    pc_axis = np.linspace(0.0, params.p_c_max, n)
    pd_axis = np.linspace(0.0, params.p_d_max, n)
    pc, pd_ = np.meshgrid(pc_axis, pd_axis, indexing="ij")
    pc, pd_ = pc.ravel(), pd_.ravel()
    frames = []
    for kind in kinds:
        kind = ModelKind.parse(kind)
        inside = RegionEvaluator(kind, params, init, **build_options).contains(pc, pd_)
        frames.append(pd.DataFrame({"model": kind.value, "pc": pc, "pd": pd_, "feasible": inside}))
        logger.debug("region %s: %d of %d grid points feasible", kind.value, inside.sum(), len(pc))
    return pd.concat(frames, ignore_index=True)
