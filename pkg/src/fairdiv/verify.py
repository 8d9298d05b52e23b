"""Property checkers: proportionality variants, Pareto tests, certificates.

Checkers return a PropertyReport whose per-agent witnesses are
self-contained: each names the rule and item certifying (or refuting) the
property, together with the exact bundle value, threshold and adjusted
value, so a reader can replay the defining inequality without re-running
the checker.

Pareto optimality of integral allocations is decided by exhaustive search
over all n**m owner assignments (with a cap), independent of the LP stack;
fractional Pareto optimality is decided by a welfare LP. Welfare weights,
when they exist, certify fPO: an allocation maximizing a positively
weighted welfare sum cannot be Pareto-improved.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterator, Optional

from fairdiv.core import (
    Allocation,
    EnumerationCapExceeded,
    FractionalAllocation,
    Instance,
    IntegralAllocation,
    InvariantViolation,
    consumption_graph,
    proportional_share,
    utilities,
    utility,
)
from fairdiv.improve import dominance_welfare_lp
from fairdiv.lp import INFEASIBLE, OPTIMAL, LpProblem, solve

MEETS_BOUND = "meets-bound"
ADD_ITEM = "add-item"
REMOVE_ITEM = "remove-item"

DEFAULT_ENUMERATION_CAP = 10_000_000


@dataclass(frozen=True)
class AgentWitness:
    """How one agent fares under a property check.

    ``rule`` names what certifies satisfaction (or, for a failing agent, the
    closest adjustment tried): "meets-bound" compares the bundle value itself
    against the bound, "add-item"/"remove-item" compare the bundle value
    after adjusting by ``item``. ``adjusted_value`` is the left-hand side of
    that comparison.
    """

    agent: int
    satisfied: bool
    rule: Optional[str]
    item: Optional[int]
    bundle_value: Fraction
    bound: Fraction
    adjusted_value: Fraction


@dataclass(frozen=True)
class PropertyReport:
    name: str
    holds: bool
    witnesses: tuple

    def witness(self, agent: int) -> AgentWitness:
        return self.witnesses[agent]

    def failing_agents(self) -> tuple:
        return tuple(w.agent for w in self.witnesses if not w.satisfied)


def weighted_prop(instance: Instance, allocation: Allocation) -> PropertyReport:
    """Does every agent get at least its weighted share of the whole pie?"""
    witnesses = []
    for i in instance.agents:
        value = utility(instance, allocation, i)
        bound = proportional_share(instance, i)
        ok = value >= bound
        witnesses.append(AgentWitness(i, ok, MEETS_BOUND if ok else None, None,
                                      value, bound, value))
    return _report("weighted-prop", witnesses)


def weighted_prop1(instance: Instance, allocation: IntegralAllocation) -> PropertyReport:
    """Weighted proportionality up to one item.

    An agent is satisfied if its bundle meets the weighted share outright,
    or would after adding one item it does not own, or after removing one
    item it does own. The witness carries the certifying rule and item; for
    a failing agent it carries the best adjustment available, whose
    adjusted value still falls short of the bound.
    """
    _require_integral(allocation)
    witnesses = []
    for i in instance.agents:
        row = instance.utilities[i]
        value = utility(instance, allocation, i)
        bound = proportional_share(instance, i)
        unowned = [o for o in instance.items if allocation.owners[o] != i]
        owned = [o for o in instance.items if allocation.owners[o] == i]
        best_add = max(unowned, key=lambda o: (row[o], -o)) if unowned else None
        best_rm = min(owned, key=lambda o: (row[o], o)) if owned else None

        if value >= bound:
            w = AgentWitness(i, True, MEETS_BOUND, None, value, bound, value)
        elif best_add is not None and value + row[best_add] >= bound:
            w = AgentWitness(i, True, ADD_ITEM, best_add, value, bound,
                             value + row[best_add])
        elif best_rm is not None and value - row[best_rm] >= bound:
            w = AgentWitness(i, True, REMOVE_ITEM, best_rm, value, bound,
                             value - row[best_rm])
        else:
            options = [(value, None, None)]
            if best_add is not None:
                options.append((value + row[best_add], ADD_ITEM, best_add))
            if best_rm is not None:
                options.append((value - row[best_rm], REMOVE_ITEM, best_rm))
            adjusted, rule, item = max(options, key=lambda t: t[0])
            w = AgentWitness(i, False, rule, item, value, bound, adjusted)
        witnesses.append(w)
    return _report("weighted-prop1", witnesses)


def propx(instance: Instance, allocation: IntegralAllocation) -> PropertyReport:
    """Proportionality up to every extreme item, with equal shares.

    Removing any owned chore and adding any unowned good must each keep the
    agent at or above u_i(O)/n. The witness records the worst adjustment:
    the one with the smallest adjusted value (violating it, if any does).
    """
    _require_integral(allocation)
    n = instance.num_agents
    witnesses = []
    for i in instance.agents:
        row = instance.utilities[i]
        value = utility(instance, allocation, i)
        bound = instance.total_value(i) / n
        adjustments = []
        for o in instance.items:
            if allocation.owners[o] == i and row[o] < 0:
                adjustments.append((value - row[o], o, REMOVE_ITEM))
            elif allocation.owners[o] != i and row[o] > 0:
                adjustments.append((value + row[o], o, ADD_ITEM))
        if not adjustments:
            # no extreme item to quantify over; the bundle itself decides
            witnesses.append(AgentWitness(i, value >= bound, MEETS_BOUND, None,
                                          value, bound, value))
            continue
        adjusted, item, rule = min(adjustments)
        ok = adjusted >= bound
        if ok and value >= bound:
            witnesses.append(AgentWitness(i, True, MEETS_BOUND, None, value, bound, value))
        else:
            witnesses.append(AgentWitness(i, ok, rule, item, value, bound, adjusted))
    return _report("propx", witnesses)


def pareto_dominates(instance: Instance, better: Allocation, worse: Allocation) -> bool:
    """True iff ``better`` gives every agent at least as much utility as
    ``worse`` and at least one agent strictly more. Exact comparison."""
    a = utilities(instance, better)
    b = utilities(instance, worse)
    return all(x >= y for x, y in zip(a, b)) and any(x > y for x, y in zip(a, b))


def enumeration_size(instance: Instance) -> int:
    return instance.num_agents ** instance.num_items


def enumerate_integral_allocations(instance: Instance,
                                   cap: int = DEFAULT_ENUMERATION_CAP) -> Iterator[IntegralAllocation]:
    """Yield all n**m owner assignments in lexicographic order; refuses to
    start when their number exceeds the cap."""
    n, m = instance.num_agents, instance.num_items
    _check_cap(instance, cap)
    owners = [0] * m
    while True:
        yield IntegralAllocation(n, tuple(owners))
        o = m - 1
        while o >= 0 and owners[o] == n - 1:
            owners[o] = 0
            o -= 1
        if o < 0:
            return
        owners[o] += 1


def is_pareto_optimal_integral(instance: Instance, allocation: IntegralAllocation,
                               cap: int = DEFAULT_ENUMERATION_CAP) -> bool:
    """Exhaustively decide whether any integral allocation Pareto-dominates
    this one.

    The search walks the owner tree in scaled integer arithmetic, pruning a
    branch as soon as some agent cannot reach its current utility even when
    granted every remaining positive item; the bound is sound, so the scan
    remains exhaustive. Raises EnumerationCapExceeded when n**m > cap.
    """
    _require_integral(allocation)
    _check_cap(instance, cap)
    n, m = instance.num_agents, instance.num_items
    scaled = _scaled_utilities(instance)
    target = [0] * n
    for o, owner in enumerate(allocation.owners):
        target[owner] += scaled[owner][o]

    # best_future[i][o]: the most agent i can still gain from items o..m-1
    best_future = [[0] * (m + 1) for _ in range(n)]
    for i in range(n):
        acc = 0
        for o in range(m - 1, -1, -1):
            if scaled[i][o] > 0:
                acc += scaled[i][o]
            best_future[i][o] = acc

    sums = [0] * n
    agents = range(n)

    def dominator_below(o: int) -> bool:
        for i in agents:
            if sums[i] + best_future[i][o] < target[i]:
                return False
        if o == m:
            return any(sums[i] > target[i] for i in agents)
        for a in agents:
            sums[a] += scaled[a][o]
            if dominator_below(o + 1):
                return True
            sums[a] -= scaled[a][o]
        return False

    return not dominator_below(0)


def pareto_improvement_exists(instance: Instance, allocation: Allocation) -> bool:
    """Complete fractional Pareto test: is there any fractional allocation
    weakly better for everyone and strictly better in total welfare?"""
    if isinstance(allocation, IntegralAllocation):
        allocation = allocation.to_fractional()
    solution = solve(dominance_welfare_lp(instance, allocation))
    if solution.status != OPTIMAL:
        raise InvariantViolation(f"fPO test LP reported {solution.status}")
    current = sum(utilities(instance, allocation), Fraction(0))
    return solution.value > current


def find_welfare_weights(instance: Instance, allocation: Allocation) -> Optional[tuple]:
    """Search for strictly positive weights certifying fPO.

    The allocation maximizes the lambda-weighted welfare iff every item is
    consumed only by agents maximizing lambda_i * u_i(o). Feasibility of
    that system (normalized to lambda >= 1) is itself an LP. Returns the
    weights, or None when this sufficient certificate does not exist here;
    absence alone does not prove the allocation is not fPO.
    """
    n = instance.num_agents
    graph = consumption_graph(allocation)
    rows = set()
    for o in instance.items:
        for i in graph.item_agents[o]:
            ui = instance.value(i, o)
            for j in instance.agents:
                if j == i:
                    continue
                uj = instance.value(j, o)
                if ui >= 0 and uj <= 0:
                    continue  # holds for any positive weights
                rows.add((i, ui, j, uj))

    zero = Fraction(0)
    constraints = []
    for i, ui, j, uj in sorted(rows):
        coeffs = [zero] * n
        coeffs[i] += ui
        coeffs[j] -= uj
        constraints.append((tuple(coeffs), ">=", uj - ui))
    problem = LpProblem(n, tuple([zero] * n), tuple(constraints))
    solution = solve(problem)
    if solution.status == INFEASIBLE:
        return None
    if solution.status != OPTIMAL:
        raise InvariantViolation(f"weight-search LP reported {solution.status}")
    weights = tuple(mu + 1 for mu in solution.assignment)
    _recheck_weights(instance, graph, weights)
    return weights


def _recheck_weights(instance, graph, weights) -> None:
    for o in instance.items:
        if not graph.item_agents[o]:
            continue
        best = max(weights[j] * instance.value(j, o) for j in instance.agents)
        for i in graph.item_agents[o]:
            if weights[i] * instance.value(i, o) != best:
                raise InvariantViolation("welfare weights fail to certify the allocation")


def _report(name: str, witnesses: list) -> PropertyReport:
    return PropertyReport(name, all(w.satisfied for w in witnesses), tuple(witnesses))


def _require_integral(allocation) -> None:
    if not isinstance(allocation, IntegralAllocation):
        raise ValueError("this check is defined for integral allocations")


def _check_cap(instance: Instance, cap: int) -> None:
    size = enumeration_size(instance)
    if size > cap:
        raise EnumerationCapExceeded(
            f"{instance.num_agents}**{instance.num_items} = {size} allocations exceed cap {cap}")


def _scaled_utilities(instance: Instance) -> list:
    """Per-agent integer utilities: row i scaled by the lcm of its
    denominators. Dominance comparisons are invariant under positive
    per-agent scaling, and integer sums are much faster than Fractions."""
    out = []
    for row in instance.utilities:
        scale = math.lcm(*(v.denominator for v in row)) if row else 1
        out.append([int(v * scale) for v in row])
    return out
