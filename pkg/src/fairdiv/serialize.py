"""JSON documents for instances, allocations, and property reports.

Rationals travel as strings ("3/4", "-2", "0.25") or JSON integers, never
as floats: a float has already lost exactness by the time json hands it
over, so floats are rejected with an error saying what to write instead.
"""

from __future__ import annotations

from fractions import Fraction

from fairdiv.core import FractionalAllocation, Instance, IntegralAllocation
from fairdiv.verify import AgentWitness, PropertyReport


def parse_rational(value) -> Fraction:
    if isinstance(value, bool):
        raise ValueError(f"expected a rational string, got {value!r}")
    if isinstance(value, int):
        return Fraction(value)
    if isinstance(value, float):
        raise ValueError(
            f'floating-point value {value!r} is not exact; write it as a string like "3/10"')
    if isinstance(value, str):
        try:
            return Fraction(value)
        except (ValueError, ZeroDivisionError):
            raise ValueError(f"cannot parse rational {value!r}") from None
    raise ValueError(f"expected a rational string, got {value!r}")


def format_rational(value: Fraction) -> str:
    return str(value)


def parse_instance(doc) -> tuple:
    """Read an instance document; returns (Instance, agent_ids, item_ids).

    The document holds agents (each {"id": ..., "weight": ...}, weights all
    present or all absent), items (unique string ids) and a utilities
    matrix indexed [agent][item].
    """
    if not isinstance(doc, dict):
        raise ValueError("instance document must be a JSON object")
    missing = {"agents", "items", "utilities"} - doc.keys()
    if missing:
        raise ValueError(f"instance document lacks {sorted(missing)}")

    agents = doc["agents"]
    if not isinstance(agents, list) or not agents:
        raise ValueError("agents must be a nonempty list")
    agent_ids = []
    weights = []
    for entry in agents:
        if not isinstance(entry, dict) or not isinstance(entry.get("id"), str):
            raise ValueError("each agent must be an object with a string id")
        agent_ids.append(entry["id"])
        weights.append(parse_rational(entry["weight"]) if "weight" in entry else None)
    if len(set(agent_ids)) != len(agent_ids):
        raise ValueError("agent ids must be unique")
    weighted = [w is not None for w in weights]
    if any(weighted) and not all(weighted):
        raise ValueError("either every agent carries a weight or none does")

    item_ids = doc["items"]
    if not isinstance(item_ids, list) or not all(isinstance(s, str) for s in item_ids):
        raise ValueError("items must be a list of string ids")
    if len(set(item_ids)) != len(item_ids):
        raise ValueError("item ids must be unique")

    utilities = doc["utilities"]
    if not isinstance(utilities, list) or len(utilities) != len(agent_ids):
        raise ValueError("utilities must hold one row per agent")
    rows = []
    for row in utilities:
        if not isinstance(row, list) or len(row) != len(item_ids):
            raise ValueError("every utility row must hold one entry per item")
        rows.append(tuple(parse_rational(v) for v in row))

    instance = Instance(tuple(rows), tuple(weights) if all(weighted) else None)
    return instance, tuple(agent_ids), tuple(item_ids)


def print_instance(instance: Instance, agent_ids, item_ids) -> dict:
    _check_ids(instance, agent_ids, item_ids)
    return {
        "agents": [
            {"id": a, "weight": format_rational(w)}
            for a, w in zip(agent_ids, instance.weights)
        ],
        "items": list(item_ids),
        "utilities": [[format_rational(v) for v in row] for row in instance.utilities],
    }


def parse_allocation(doc, agent_ids, item_ids) -> IntegralAllocation:
    """Read an {"owner": {item: agent}} document against known ids."""
    if not isinstance(doc, dict) or not isinstance(doc.get("owner"), dict):
        raise ValueError('allocation document must be {"owner": {item: agent}}')
    agent_index = {a: i for i, a in enumerate(agent_ids)}
    item_index = {o: j for j, o in enumerate(item_ids)}
    owners = [None] * len(item_ids)
    for item, agent in doc["owner"].items():
        if item not in item_index:
            raise ValueError(f"unknown item id {item!r}")
        if agent not in agent_index:
            raise ValueError(f"unknown agent id {agent!r}")
        owners[item_index[item]] = agent_index[agent]
    unassigned = [item_ids[j] for j, v in enumerate(owners) if v is None]
    if unassigned:
        raise ValueError(f"allocation assigns no owner to {unassigned}")
    return IntegralAllocation(len(agent_ids), tuple(owners))


def print_allocation(allocation: IntegralAllocation, agent_ids, item_ids) -> dict:
    _check_ids(allocation, agent_ids, item_ids)
    return {"owner": {item_ids[j]: agent_ids[allocation.owners[j]]
                      for j in range(len(item_ids))}}


def print_fractional(allocation: FractionalAllocation, agent_ids, item_ids) -> dict:
    """Nonzero shares per item: {item: {agent: fraction-string}}."""
    _check_ids(allocation, agent_ids, item_ids)
    return {
        item: {
            agent_ids[i]: format_rational(allocation.fractions[i][j])
            for i in range(allocation.num_agents)
            if allocation.fractions[i][j] != 0
        }
        for j, item in enumerate(item_ids)
    }


def witness_doc(witness: AgentWitness, agent_ids, item_ids) -> dict:
    return {
        "agent": agent_ids[witness.agent],
        "satisfied": witness.satisfied,
        "rule": witness.rule,
        "item": item_ids[witness.item] if witness.item is not None else None,
        "bundleValue": format_rational(witness.bundle_value),
        "bound": format_rational(witness.bound),
        "adjustedValue": (format_rational(witness.adjusted_value)
                          if witness.adjusted_value is not None else None),
    }


def report_doc(report: PropertyReport, agent_ids, item_ids) -> dict:
    return {
        "name": report.name,
        "holds": report.holds,
        "witnesses": [witness_doc(w, agent_ids, item_ids) for w in report.witnesses],
    }


def _check_ids(shaped, agent_ids, item_ids) -> None:
    if len(agent_ids) != shaped.num_agents or len(item_ids) != shaped.num_items:
        raise ValueError("id lists do not match the allocation shape")
