"""
Constraint-block builders for the five BESS formulations.

Every builder adds one period at a time against the previous state of
energy: the constant ``E0`` at the first period, the SoE variable of the
previous period afterwards. NA keeps no SoE variable; its energy window is
written against running sums of the power variables.

Time step is one hour.
"""

import logging
from dataclasses import dataclass
from dataclasses import field

from ..optmodel import LinearExpr
from ..optmodel import Problem
from ..optmodel import lin_sum
from .params import BessInitial
from .params import BessParams
from .params import DivisionGuardError
from .params import ModelKind
from .params import na_derived

logger = logging.getLogger(__name__)


class EmptyHorizonError(ValueError):
    """A BESS block needs at least one period."""


@dataclass
class BessVars:
    """
    Handles added by :func:`build` for one BESS.

    ``energy[t]`` is the state of energy after period ``t``: the ``e``
    variable for every kind except NA, where it is the running expression
    ``E0 + sum(eta_c * pc - pd / eta_d)``.
    """

    kind: ModelKind
    params: BessParams
    init: BessInitial
    horizon: int
    p_c: list = field(default_factory=list)
    p_d: list = field(default_factory=list)
    e: list | None = None
    z: list | None = None
    y: list | None = None
    energy: list = field(default_factory=list)
    rows: list = field(default_factory=list)

    def net_injection(self, t) -> LinearExpr:
        """Power delivered to the grid in period ``t`` (discharge minus charge)."""
        return self.p_d[t] - self.p_c[t]

    def handles(self):
        """Every VarRef of the block, in creation order per period."""
        refs = []
        for t in range(self.horizon):
            refs.extend([self.p_c[t], self.p_d[t]])
            if self.e is not None:
                refs.append(self.e[t])
            if self.z is not None:
                refs.extend([self.z[t], self.y[t]])
        return refs


def _add(p, bv, constraint, name):
    bv.rows.append(p.add_constraint(constraint, name))


def _power_vars(p, params, prefix, t):
    pc = p.add_var(0.0, params.p_c_max, name=f"{prefix}.pc[{t}]")
    pd = p.add_var(0.0, params.p_d_max, name=f"{prefix}.pd[{t}]")
    return pc, pd


def _soe_block(p, bv, params, e_prev, prefix, t):
    """SoE variable with its window as bounds and the energy balance row."""
    pc, pd = bv.p_c[t], bv.p_d[t]
    e = p.add_var(params.e_min, params.e_max, name=f"{prefix}.e[{t}]")
    _add(p, bv, e.equals(e_prev + params.eta_c * pc - pd / params.eta_d), f"{prefix}.balance[{t}]")
    bv.e.append(e)
    bv.energy.append(e.to_expr())
    return e


def _switch_block(p, bv, params, prefix, t, binary):
    pc, pd = bv.p_c[t], bv.p_d[t]
    z = p.add_var(0.0, 1.0, binary=binary, name=f"{prefix}.z[{t}]")
    y = p.add_var(0.0, 1.0, binary=binary, name=f"{prefix}.y[{t}]")
    _add(p, bv, pc <= params.p_c_max * z, f"{prefix}.charge_on[{t}]")
    _add(p, bv, pd <= params.p_d_max * y, f"{prefix}.discharge_on[{t}]")
    _add(p, bv, z + y <= 1.0, f"{prefix}.exclusive[{t}]")
    bv.z.append(z)
    bv.y.append(y)


def _extended_rows(params, e_prev, pc, pd):
    """Charge-room, discharge-room and power-facet rows of one period."""
    ratio = params.p_d_max / params.p_c_max
    return [
        ("charge_room", params.eta_c * pc <= params.e_max - e_prev),
        ("discharge_room", pd <= (e_prev - params.e_min) * params.eta_d),
        ("power_facet", pd <= params.p_d_max - ratio * pc),
    ]


def _extended_cuts(p, bv, params, e_prev, prefix, t):
    if params.p_c_max <= 0.0:
        raise DivisionGuardError(f"ExtLP needs p_c_max > 0, got {params.p_c_max}")
    for label, row in _extended_rows(params, e_prev, bv.p_c[t], bv.p_d[t]):
        _add(p, bv, row, f"{prefix}.{label}[{t}]")


def _exclusive_user_cuts(p, bv, params, e_prev, prefix, t):
    # valid whenever z + y <= 1 holds with integral z, y
    if params.p_c_max <= 0.0:
        return
    for label, row in _extended_rows(params, e_prev, bv.p_c[t], bv.p_d[t]):
        p.add_user_cut(row, f"{prefix}.{label}_cut[{t}]")


def _build_na(p, bv, params, init, prefix, na_pmax, na_power_cut):
    derived = na_derived(params, na_pmax)
    net = LinearExpr()
    energy = LinearExpr.of(init.e0)
    for t in range(bv.horizon):
        pc, pd = _power_vars(p, params, prefix, t)
        bv.p_c.append(pc)
        bv.p_d.append(pd)
        net = net + (pc - pd)
        energy = energy + (params.eta_c * pc - pd / params.eta_d)
        _add(p, bv, init.e0 + derived.eta_single * net <= params.e_max, f"{prefix}.na_upper[{t}]")
        _add(p, bv, energy >= params.e_min, f"{prefix}.na_lower[{t}]")
        if na_power_cut:
            _add(p, bv, pc + pd <= derived.p_max_single, f"{prefix}.na_power[{t}]")
        bv.energy.append(energy)


def build(
    kind,
    params: BessParams,
    init: BessInitial,
    horizon: int,
    p: Problem,
    *,
    prefix="bess",
    terminal_soe=False,
    na_power_cut=True,
    na_pmax=None,
) -> BessVars:
    """
    Add one BESS of formulation ``kind`` over ``horizon`` periods to ``p``.

    Parameters:
    -----------
    kind : ModelKind or str
        One of Exc, LP, NA, RelYZ, ExtLP
    params : BessParams
        Ratings, energy window and efficiencies
    init : BessInitial
        State of energy before the first period
    horizon : int
        Number of one-hour periods, at least 1
    p : Problem
        Problem receiving the variables and rows
    prefix : str
        Prefix of variable and row names
    terminal_soe : bool
        Require the final state of energy to be at least ``E0``
    na_power_cut : bool
        Keep ``pc + pd <= Pmax`` in the NA formulation
    na_pmax : float, optional
        Override of the NA single power rating

    Returns:
    --------
    BessVars
        Handles of the block
    """
    kind = ModelKind.parse(kind)
    if horizon < 1:
        raise EmptyHorizonError(f"BESS block {prefix!r} needs horizon >= 1, got {horizon}")
    init.check(params)

    bv = BessVars(kind, params, init, horizon)
    if kind is ModelKind.NA:
        _build_na(p, bv, params, init, prefix, na_pmax, na_power_cut)
    else:
        bv.e = []
        if kind in (ModelKind.EXC, ModelKind.REL_YZ):
            bv.z, bv.y = [], []
        e_prev = init.e0
        for t in range(horizon):
            pc, pd = _power_vars(p, params, prefix, t)
            bv.p_c.append(pc)
            bv.p_d.append(pd)
            e = _soe_block(p, bv, params, e_prev, prefix, t)
            if kind is ModelKind.EXC:
                _switch_block(p, bv, params, prefix, t, binary=True)
                _exclusive_user_cuts(p, bv, params, e_prev, prefix, t)
            elif kind is ModelKind.REL_YZ:
                _switch_block(p, bv, params, prefix, t, binary=False)
            elif kind is ModelKind.EXT_LP:
                _extended_cuts(p, bv, params, e_prev, prefix, t)
            e_prev = e

    if terminal_soe:
        _add(p, bv, bv.energy[-1] >= init.e0, f"{prefix}.terminal")
    logger.debug("built %s block %r: horizon %d, %d rows", kind.value, prefix, horizon, len(bv.rows))
    return bv


def soe_telescoping_residual(bv: BessVars, values) -> float:
    """``|e[T] - E0 - sum(eta_c pc - pd / eta_d)|`` at ``values``."""
    params = bv.params
    expected = bv.init.e0 + lin_sum(
        params.eta_c * pc - pd / params.eta_d for pc, pd in zip(bv.p_c, bv.p_d)
    ).value(values)
    return abs(bv.energy[-1].value(values) - expected)
