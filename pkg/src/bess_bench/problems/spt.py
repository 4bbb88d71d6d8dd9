"""
Set-point tracking: a BESS fleet follows a net-power signal.

``min sum_t (sum_n (pd[n,t] - pc[n,t]) - sig[t])^2`` subject to one BESS
block per unit.
"""

import logging
from dataclasses import dataclass

import numpy as np

from ..bess_models import ModelKind
from ..bess_models import build
from ..optmodel import Problem
from ..optmodel import lin_sum

logger = logging.getLogger(__name__)


@dataclass
class SptAssembly:
    """Assembled tracking problem with the handles needed for metrics."""

    problem: Problem
    bess_vars: list
    signal: tuple
    kind: ModelKind

    @property
    def horizon(self):
        return len(self.signal)

    def fleet_injection(self, t):
        return lin_sum(bv.net_injection(t) for bv in self.bess_vars)

    def tracking_errors(self, values):
        """Per-period ``fleet injection - signal`` at ``values``."""
        return np.array(
            [self.fleet_injection(t).value(values) - s for t, s in enumerate(self.signal)]
        )

    def tracking_objective(self, values):
        return float(np.sum(self.tracking_errors(values) ** 2))


def assemble_spt(inst, kind, *, terminal_soe=False, na_power_cut=True) -> SptAssembly:
    """
    Build the SPT problem of ``inst`` under formulation ``kind``.

    Parameters:
    -----------
    inst : SptInstance
        Signal and fleet
    kind : ModelKind or str
        BESS formulation applied to every unit
    terminal_soe, na_power_cut : bool
        Passed to :func:`bess_bench.bess_models.build`

    Returns:
    --------
    SptAssembly
        With a frozen problem
    """
    kind = ModelKind.parse(kind)
    p = Problem(f"spt.{kind.value}.n{inst.n_bess}")
    bess_vars = [
        build(
            kind, params, init, inst.horizon, p,
            prefix=f"bess{n}", terminal_soe=terminal_soe, na_power_cut=na_power_cut,
        )
        for n, (params, init) in enumerate(inst.fleet)
    ]
    assembly = SptAssembly(p, bess_vars, tuple(inst.signal), kind)
    p.add_sum_of_squares(
        [assembly.fleet_injection(t) - s for t, s in enumerate(inst.signal)]
    )
    p.freeze()
    logger.debug("assembled %r", p)
    return assembly
