"""
Transmission expansion planning over typical days.

Transportation network: each corridor carries one signed flow limited by its
existing capacity plus the capacity of the candidate lines built on it.
Each day is a separate 24-hour operation problem sharing the build
decisions; storage starts every day at its initial energy.
"""

import logging
from dataclasses import dataclass
from dataclasses import field

import numpy as np

from ..bess_models import ModelKind
from ..bess_models import build
from ..instances.profiles import HOURS
from ..optmodel import Problem
from ..optmodel import lin_sum

logger = logging.getLogger(__name__)


@dataclass
class TepAssembly:
    """
    Assembled TEP problem.

    Operation handles are keyed ``[day][hour]`` then by generator index,
    corridor index or node id. ``bess_vars[day][n]`` is unit ``n`` on ``day``.
    """

    problem: Problem
    instance: object
    kind: ModelKind
    build_vars: list = field(default_factory=list)
    generation: list = field(default_factory=list)
    flow: list = field(default_factory=list)
    shed: list = field(default_factory=list)
    spill: list = field(default_factory=list)
    bess_vars: list = field(default_factory=list)
    balance_rows: list = field(default_factory=list)

    @property
    def days(self):
        return self.instance.days

    def all_bess_vars(self):
        return [bv for daily in self.bess_vars for bv in daily]

    def built_lines(self, values):
        """Number of lines built per corridor."""
        return [int(round(sum(values[b.index] for b in lines))) for lines in self.build_vars]

    def capex(self, values):
        ds = self.instance.dataset
        return sum(
            c.capex_per_line_per_day * self.days * n for c, n in zip(ds.corridors, self.built_lines(values))
        )

    def opex(self, values):
        return self.problem.evaluate_objective(values) - self.capex(values)

    def balance_residuals(self, values):
        """Nodal balance residual per (day, hour, node)."""
        rows = self.problem.constraints
        return np.array([abs(rows[r].activity(values) - rows[r].rhs) for r in self.balance_rows])


def _corridor_rows(p, asm, corridor, k, flow, day, hour):
    built = lin_sum(corridor.candidate_capacity * b for b in asm.build_vars[k])
    tag = f"{corridor.from_node}-{corridor.to_node}.d{day}.h{hour}"
    p.add_constraint(flow - built <= corridor.existing_capacity, f"flow_max.{tag}")
    p.add_constraint(-flow - built <= corridor.existing_capacity, f"flow_min.{tag}")


def assemble_tep(inst, kind, *, symmetry_cuts=False, terminal_soe=False, na_power_cut=True) -> TepAssembly:
    """
    Build the TEP problem of ``inst`` under formulation ``kind``.

    Objective: ``sum(capex_per_line_per_day * days * build)`` plus, over all
    days and hours, ``marginal_cost * generation + shed_penalty * shed``.

    Parameters:
    -----------
    inst : TepInstance
        Dataset, fleet and RES profiles
    kind : ModelKind or str
        BESS formulation applied to every unit and day
    symmetry_cuts : bool
        Order the identical candidate lines of a corridor
        (``build[k] >= build[k + 1]``)

    Returns:
    --------
    TepAssembly
        With a frozen problem
    """
    kind = ModelKind.parse(kind)
    ds = inst.dataset
    p = Problem(f"tep.{kind.value}.n{inst.n_bess}.d{inst.days}")
    asm = TepAssembly(p, inst, kind)

    objective = []
    for c in ds.corridors:
        lines = [
            p.add_var(binary=True, name=f"build.{c.from_node}-{c.to_node}.{j}")
            for j in range(c.candidate_count)
        ]
        asm.build_vars.append(lines)
        objective.extend(c.capex_per_line_per_day * inst.days * b for b in lines)
        if symmetry_cuts:
            for j in range(len(lines) - 1):
                p.add_constraint(lines[j] >= lines[j + 1], f"symmetry.{c.from_node}-{c.to_node}.{j}")

    for day in range(inst.days):
        daily_bess = [
            build(
                kind, params, init, HOURS, p,
                prefix=f"bess{n}.d{day}", terminal_soe=terminal_soe, na_power_cut=na_power_cut,
            )
            for n, (params, init) in enumerate(inst.fleet)
        ]
        asm.bess_vars.append(daily_bess)
        gen_day, flow_day, shed_day, spill_day = [], [], [], []
        for hour in range(HOURS):
            gen = [
                p.add_var(0.0, g.capacity, name=f"gen{i}.d{day}.h{hour}")
                for i, g in enumerate(ds.generators)
            ]
            flow = [
                p.add_var(-np.inf, np.inf, name=f"flow.{c.from_node}-{c.to_node}.d{day}.h{hour}")
                for c in ds.corridors
            ]
            shed = {
                node: p.add_var(0.0, inst.demand(node, hour), name=f"shed{node}.d{day}.h{hour}")
                for node in ds.node_ids
            }
            spill = {
                node: p.add_var(0.0, inst.res_available(node, day, hour), name=f"spill{node}.d{day}.h{hour}")
                for node in ds.node_ids
            }
            for k, c in enumerate(ds.corridors):
                _corridor_rows(p, asm, c, k, flow[k], day, hour)

            for node in ds.node_ids:
                supply = [gen[i] for i, g in enumerate(ds.generators) if g.node == node]
                supply += [flow[k] for k, c in enumerate(ds.corridors) if c.to_node == node]
                supply += [-flow[k] for k, c in enumerate(ds.corridors) if c.from_node == node]
                supply += [shed[node], -spill[node]]
                if node == ds.bess_node:
                    supply += [bv.net_injection(hour) for bv in daily_bess]
                net_demand = inst.demand(node, hour) - inst.res_available(node, day, hour)
                asm.balance_rows.append(
                    p.add_constraint(lin_sum(supply).equals(net_demand), f"balance{node}.d{day}.h{hour}")
                )

            objective.extend(g.marginal_cost * gen[i] for i, g in enumerate(ds.generators))
            objective.extend(ds.shed_penalty * s for s in shed.values())
            gen_day.append(gen)
            flow_day.append(flow)
            shed_day.append(shed)
            spill_day.append(spill)
        asm.generation.append(gen_day)
        asm.flow.append(flow_day)
        asm.shed.append(shed_day)
        asm.spill.append(spill_day)

    p.add_objective(lin_sum(objective))
    p.freeze()
    logger.debug("assembled %r", p)
    return asm
